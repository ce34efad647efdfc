//! Basic graph pattern matching.

use std::collections::{BTreeMap, BTreeSet};

use super::graph::Graph;
use super::ontology::expand;
use super::term::{Datatype, Iri, Term, Triple};
use super::KgError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.trim_start_matches('?').to_string())
    }

    fn resolve<'a>(&'a self, binding: &'a Binding) -> Option<&'a Term> {
        match self {
            PatternTerm::Const(t) => Some(t),
            PatternTerm::Var(v) => binding.get(v),
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Const(t)
    }
}

impl From<Iri> for PatternTerm {
    fn from(i: Iri) -> Self {
        PatternTerm::Const(Term::Iri(i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub s: PatternTerm,
    pub p: PatternTerm,
    pub o: PatternTerm,
}

impl TriplePattern {
    pub fn new(s: impl Into<PatternTerm>, p: impl Into<PatternTerm>, o: impl Into<PatternTerm>) -> Self {
        Self { s: s.into(), p: p.into(), o: o.into() }
    }

    fn bound_count(&self, binding: &Binding) -> usize {
        [&self.s, &self.p, &self.o].iter().filter(|t| t.resolve(binding).is_some()).count()
    }
}

/// Variable name (without `?`) to bound term.
pub type Binding = BTreeMap<String, Term>;

/// Parses `s p o` where each term is `?var`, a CURIE from the fixed prefix
/// table, `<iri>`, a typed literal `"lex"^^xsd:type` / `"lex"^^<iri>`, a plain
/// quoted string, or a bare integer/decimal number.
pub fn parse_pattern(text: &str) -> Result<TriplePattern, KgError> {
    let bad = |reason: String| KgError::Pattern { pattern: text.to_string(), reason };
    let tokens = split_terms(text).map_err(bad)?;
    if tokens.len() != 3 {
        return Err(bad(format!("expected 3 terms, found {}", tokens.len())));
    }
    let mut parsed = Vec::with_capacity(3);
    for (pos, tok) in tokens.iter().enumerate() {
        let term = parse_term(tok).map_err(bad)?;
        if pos < 2 {
            if let PatternTerm::Const(Term::Literal { .. }) = term {
                return Err(bad(format!("literal {tok} not allowed in subject/predicate")));
            }
        }
        parsed.push(term);
    }
    let o = parsed.pop().unwrap();
    let p = parsed.pop().unwrap();
    let s = parsed.pop().unwrap();
    Ok(TriplePattern { s, p, o })
}

fn split_terms(text: &str) -> Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut tok = String::new();
        if c == '"' {
            tok.push(chars.next().unwrap());
            let mut closed = false;
            while let Some(c) = chars.next() {
                tok.push(c);
                if c == '\\' {
                    if let Some(e) = chars.next() {
                        tok.push(e);
                    }
                } else if c == '"' {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err("unterminated quoted literal".into());
            }
        }
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            tok.push(c);
            chars.next();
        }
        tokens.push(tok);
    }
    Ok(tokens)
}

fn parse_iri_token(tok: &str) -> Result<Iri, String> {
    if let Some(inner) = tok.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Iri::new(inner).map_err(|e| e.to_string());
    }
    let full = expand(tok).ok_or_else(|| format!("unknown prefix in {tok}"))?;
    Iri::new(full).map_err(|e| e.to_string())
}

fn parse_term(tok: &str) -> Result<PatternTerm, String> {
    if let Some(name) = tok.strip_prefix('?') {
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(format!("bad variable name {tok}"));
        }
        return Ok(PatternTerm::Var(name.to_string()));
    }
    if tok.starts_with('"') {
        let close = tok.rfind('"').filter(|&i| i > 0).ok_or("unterminated literal")?;
        let lexical = unescape(&tok[1..close])?;
        let rest = &tok[close + 1..];
        let datatype = if rest.is_empty() {
            Datatype::String
        } else {
            let dt = rest.strip_prefix("^^").ok_or_else(|| format!("unexpected {rest}"))?;
            let dt = parse_iri_token(dt)?;
            Datatype::from_iri(dt.as_str()).ok_or_else(|| format!("unsupported datatype {dt}"))?
        };
        return Term::literal(lexical, datatype).map(PatternTerm::Const).map_err(|e| e.to_string());
    }
    if tok.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
        let dt = if tok.contains('.') { Datatype::Decimal } else { Datatype::Integer };
        return Term::literal(tok, dt).map(PatternTerm::Const).map_err(|e| e.to_string());
    }
    parse_iri_token(tok).map(|i| PatternTerm::Const(Term::Iri(i)))
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some('t') => out.push('\t'),
                Some(e @ ('"' | '\\')) => out.push(e),
                other => return Err(format!("bad escape {other:?}")),
            }
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

/// Evaluates a conjunction of triple patterns.
///
/// Patterns are joined greedily, most-bound first, each step answered by the
/// index whose key prefix covers the bound positions. The result is the set of
/// distinct bindings in sorted order.
pub fn match_pattern(graph: &Graph, patterns: &[TriplePattern]) -> Result<Vec<Binding>, KgError> {
    if patterns.is_empty() {
        return Err(KgError::EmptyPattern);
    }
    let mut partial: Vec<Binding> = vec![Binding::new()];
    let mut remaining: Vec<&TriplePattern> = patterns.iter().collect();
    while !remaining.is_empty() && !partial.is_empty() {
        let probe = &partial[0];
        let (idx, _) =
            remaining.iter().enumerate().max_by_key(|(i, p)| (p.bound_count(probe), std::cmp::Reverse(*i))).unwrap();
        let pattern = remaining.remove(idx);
        let mut next = Vec::new();
        for binding in &partial {
            extend_binding(graph, pattern, binding, &mut next);
        }
        partial = next;
    }
    let unique: BTreeSet<Binding> = partial.into_iter().collect();
    Ok(unique.into_iter().collect())
}

fn extend_binding(graph: &Graph, pattern: &TriplePattern, binding: &Binding, out: &mut Vec<Binding>) {
    let s = pattern.s.resolve(binding);
    let p = pattern.p.resolve(binding);
    let o = pattern.o.resolve(binding);
    let (s, p) = match (s, p) {
        (Some(Term::Literal { .. }), _) | (_, Some(Term::Literal { .. })) => return,
        (s, p) => (s.and_then(Term::as_iri), p.and_then(Term::as_iri)),
    };
    for t in graph.triples_matching(s, p, o) {
        if let Some(b) = unify(pattern, &t, binding) {
            out.push(b);
        }
    }
}

/// Binds the pattern's variables against `t`, consistent with `binding`.
pub(crate) fn unify(pattern: &TriplePattern, t: &Triple, binding: &Binding) -> Option<Binding> {
    let mut b = binding.clone();
    let parts = [(&pattern.s, Term::Iri(t.s.clone())), (&pattern.p, Term::Iri(t.p.clone())), (&pattern.o, t.o.clone())];
    for (pt, value) in parts {
        match pt {
            PatternTerm::Const(c) => {
                if *c != value {
                    return None;
                }
            }
            PatternTerm::Var(v) => match b.get(v) {
                Some(existing) if *existing != value => return None,
                Some(_) => {}
                None => {
                    b.insert(v.clone(), value);
                }
            },
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::ontology as tm;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://t/{s}")).unwrap()
    }

    #[test]
    fn parse_pattern_terms() {
        let p = parse_pattern("?s rdf:type tm:Car").unwrap();
        assert_eq!(p.s, PatternTerm::var("s"));
        assert_eq!(p.p, tm::rdf_type().into());
        assert_eq!(p.o, tm::class_for_label("car").into());

        let p = parse_pattern("  ?o   tm:averageSpeed   \"5.0\"^^xsd:decimal ").unwrap();
        assert_eq!(p.o, Term::decimal(5.0).into());
        let p = parse_pattern("?l tm:laneNumber 3").unwrap();
        assert_eq!(p.o, Term::integer(3).into());
        let p = parse_pattern("<http://x/a> ?p \"two words\"").unwrap();
        assert_eq!(p.o, Term::string("two words").into());
    }

    #[test]
    fn parse_pattern_errors() {
        for bad in ["?s rdf:type", "?s foo:bar ?o", "\"x\" ?p ?o", "?s ?p \"open", "? ?p ?o", "?s ?p ?o ?x"] {
            assert!(parse_pattern(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn empty_pattern_list_is_error() {
        assert!(matches!(match_pattern(&Graph::new(), &[]), Err(KgError::EmptyPattern)));
    }

    #[test]
    fn ground_pattern_without_match_is_empty() {
        let g = Graph::from_triples([Triple::new(iri("a"), iri("p"), iri("b"))]);
        let pat = TriplePattern::new(iri("a"), iri("p"), iri("c"));
        assert!(match_pattern(&g, &[pat]).unwrap().is_empty());
        let pat = TriplePattern::new(iri("a"), iri("p"), iri("b"));
        assert_eq!(match_pattern(&g, &[pat]).unwrap(), vec![Binding::new()]);
    }

    #[test]
    fn repeated_variable_within_pattern() {
        let g =
            Graph::from_triples([Triple::new(iri("a"), iri("p"), iri("a")), Triple::new(iri("a"), iri("p"), iri("b"))]);
        let pat = TriplePattern::new(PatternTerm::var("x"), iri("p"), PatternTerm::var("x"));
        let res = match_pattern(&g, &[pat]).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(res[0]["x"], iri("a").into());
    }

    #[test]
    fn variable_bound_to_literal_in_subject_position_never_matches() {
        let g = Graph::from_triples([Triple::new(iri("a"), iri("p"), Term::integer(1))]);
        let pats = [
            TriplePattern::new(iri("a"), iri("p"), PatternTerm::var("x")),
            TriplePattern::new(PatternTerm::var("x"), PatternTerm::var("q"), PatternTerm::var("y")),
        ];
        assert!(match_pattern(&g, &pats).unwrap().is_empty());
    }
}
