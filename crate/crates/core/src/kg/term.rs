use std::fmt;

use super::ontology::{shrink, XSD_DECIMAL, XSD_INTEGER, XSD_STRING};
use super::KgError;

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, KgError> {
        let value = value.into();
        if !is_absolute_iri(&value) {
            return Err(KgError::InvalidIri(value));
        }
        Ok(Self(value))
    }

    /// For IRIs minted from known-good parts.
    pub(crate) fn new_unchecked(value: impl Into<String>) -> Self {
        Self(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Prefixed form when a known namespace matches, else `<iri>`.
    pub fn to_curie(&self) -> String {
        shrink(&self.0).unwrap_or_else(|| format!("<{}>", self.0))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

fn is_absolute_iri(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    let valid_scheme = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    valid_scheme
        && colon + 1 < s.len()
        && !s.chars().any(|c| {
            c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
        })
}

/// Literal datatypes the store accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Datatype {
    String,
    Integer,
    Decimal,
}

impl Datatype {
    pub fn iri(self) -> &'static str {
        match self {
            Datatype::String => XSD_STRING,
            Datatype::Integer => XSD_INTEGER,
            Datatype::Decimal => XSD_DECIMAL,
        }
    }

    pub fn from_iri(iri: &str) -> Option<Self> {
        match iri {
            XSD_STRING => Some(Datatype::String),
            XSD_INTEGER => Some(Datatype::Integer),
            XSD_DECIMAL => Some(Datatype::Decimal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal { lexical: String, datatype: Datatype },
}

impl Term {
    pub fn literal(lexical: impl Into<String>, datatype: Datatype) -> Result<Self, KgError> {
        let lexical = lexical.into();
        let ok = match datatype {
            Datatype::String => true,
            Datatype::Integer => lexical.parse::<i64>().is_ok(),
            Datatype::Decimal => is_decimal_lexical(&lexical),
        };
        if !ok {
            return Err(KgError::InvalidLiteral { lexical, datatype: datatype.iri().to_string() });
        }
        Ok(Term::Literal { lexical, datatype })
    }

    pub fn string(s: impl Into<String>) -> Self {
        Term::Literal { lexical: s.into(), datatype: Datatype::String }
    }

    pub fn integer(n: i64) -> Self {
        Term::Literal { lexical: n.to_string(), datatype: Datatype::Integer }
    }

    /// Decimal literal in plain notation, always with a fraction part.
    pub fn decimal(x: f64) -> Self {
        assert!(x.is_finite(), "decimal literal must be finite");
        let mut lexical = format!("{x}");
        if !lexical.contains('.') {
            lexical.push_str(".0");
        }
        Term::Literal { lexical, datatype: Datatype::Decimal }
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal { .. } => None,
        }
    }

    /// Numeric value of an integer or decimal literal.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Term::Literal { lexical, datatype: Datatype::Integer | Datatype::Decimal } => lexical.parse().ok(),
            _ => None,
        }
    }

    pub fn as_lexical(&self) -> Option<&str> {
        match self {
            Term::Literal { lexical, .. } => Some(lexical),
            Term::Iri(_) => None,
        }
    }

    /// Short human form: CURIE for IRIs, `"lex"^^xsd:type` for literals.
    pub fn to_compact(&self) -> String {
        match self {
            Term::Iri(iri) => iri.to_curie(),
            Term::Literal { lexical, datatype } => {
                format!("\"{}\"^^{}", escape_lexical(lexical), shrink(datatype.iri()).unwrap())
            }
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl fmt::Display for Term {
    /// N-Triples term syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "{iri}"),
            Term::Literal { lexical, datatype } => {
                write!(f, "\"{}\"^^<{}>", escape_lexical(lexical), datatype.iri())
            }
        }
    }
}

fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    match frac {
        Some(f) => digits(int) && digits(f) && !(int.is_empty() && f.is_empty()),
        None => !int.is_empty() && digits(int),
    }
}

pub(crate) fn escape_lexical(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub s: Iri,
    pub p: Iri,
    pub o: Term,
}

impl Triple {
    pub fn new(s: Iri, p: Iri, o: impl Into<Term>) -> Self {
        Self { s, p, o: o.into() }
    }
}

impl fmt::Display for Triple {
    /// One N-Triples line without the trailing newline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.s, self.p, self.o)
    }
}
