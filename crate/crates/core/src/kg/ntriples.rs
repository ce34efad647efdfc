//! N-Triples subset: IRIs and typed literals only (no blank nodes, no
//! language tags). One triple per line.

use super::term::{Datatype, Iri, Term, Triple};
use super::KgError;

/// Parses N-Triples text. Blank lines and `#` comment lines are skipped.
pub fn parse(text: &str) -> Result<Vec<Triple>, KgError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let triple = parse_line(trimmed).map_err(|reason| KgError::Parse { line: idx + 1, reason })?;
        out.push(triple);
    }
    Ok(out)
}

/// Writes triples one per line, sorted, deduplicated.
pub fn serialize<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> String {
    let mut lines: Vec<String> = triples.into_iter().map(|t| t.to_string()).collect();
    lines.sort_unstable();
    lines.dedup();
    let mut out = String::new();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

struct Cursor<'a> {
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches([' ', '\t']);
    }

    fn eat(&mut self, c: char) -> bool {
        if let Some(r) = self.rest.strip_prefix(c) {
            self.rest = r;
            true
        } else {
            false
        }
    }

    fn iri(&mut self) -> Result<Iri, String> {
        if !self.eat('<') {
            return Err(format!("expected '<' at {:?}", preview(self.rest)));
        }
        let end = self.rest.find('>').ok_or("unterminated IRI")?;
        let value = &self.rest[..end];
        self.rest = &self.rest[end + 1..];
        Iri::new(value).map_err(|e| e.to_string())
    }

    fn literal(&mut self) -> Result<Term, String> {
        self.eat('"');
        let mut lexical = String::new();
        let mut chars = self.rest.char_indices();
        let close = loop {
            let Some((i, c)) = chars.next() else {
                return Err("unterminated literal".into());
            };
            match c {
                '"' => break i,
                '\\' => {
                    let (_, e) = chars.next().ok_or("dangling escape")?;
                    match e {
                        '\\' => lexical.push('\\'),
                        '"' => lexical.push('"'),
                        'n' => lexical.push('\n'),
                        'r' => lexical.push('\r'),
                        't' => lexical.push('\t'),
                        'u' | 'U' => {
                            let width = if e == 'u' { 4 } else { 8 };
                            let hex: String = (0..width)
                                .map(|_| chars.next().map(|(_, h)| h))
                                .collect::<Option<_>>()
                                .ok_or("truncated unicode escape")?;
                            let code =
                                u32::from_str_radix(&hex, 16).map_err(|_| format!("bad unicode escape {hex}"))?;
                            lexical.push(char::from_u32(code).ok_or("invalid code point")?);
                        }
                        other => return Err(format!("unknown escape \\{other}")),
                    }
                }
                c => lexical.push(c),
            }
        };
        self.rest = &self.rest[close + 1..];
        if !self.rest.starts_with("^^") {
            return Err("literal without datatype (language tags and plain literals unsupported)".into());
        }
        self.rest = &self.rest[2..];
        let dt_iri = self.iri()?;
        let datatype = Datatype::from_iri(dt_iri.as_str()).ok_or_else(|| format!("unsupported datatype {dt_iri}"))?;
        Term::literal(lexical, datatype).map_err(|e| e.to_string())
    }
}

fn preview(s: &str) -> &str {
    match s.char_indices().nth(20) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

fn parse_line(line: &str) -> Result<Triple, String> {
    let mut cur = Cursor { rest: line };
    let s = cur.iri()?;
    cur.skip_ws();
    let p = cur.iri()?;
    cur.skip_ws();
    let o = if cur.rest.starts_with('"') {
        cur.literal()?
    } else if cur.rest.starts_with("_:") {
        return Err("blank nodes unsupported".into());
    } else {
        Term::Iri(cur.iri()?)
    };
    cur.skip_ws();
    if !cur.eat('.') {
        return Err("expected '.' terminating the triple".into());
    }
    cur.skip_ws();
    if !(cur.rest.is_empty() || cur.rest.starts_with('#')) {
        return Err(format!("trailing content {:?}", preview(cur.rest)));
    }
    Ok(Triple { s, p, o })
}
