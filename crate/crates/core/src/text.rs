//! Tokenizer shared by the lexical and builtin-semantic backends.

use std::collections::BTreeMap;

/// Lowercases, splits on non-alphanumerics and rounds decimal numbers to the
/// nearest integer (`5.31` becomes `5`, `7.74` becomes `8`).
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let number: String = chars[start..i].iter().collect();
            tokens.push(bucket_number(&number));
        } else if c.is_alphanumeric() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() && !chars[i].is_ascii_digit() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            tokens.push(word.to_lowercase());
        } else {
            i += 1;
        }
    }
    tokens
}

fn bucket_number(number: &str) -> String {
    if !number.contains('.') {
        let trimmed = number.trim_start_matches('0');
        return if trimmed.is_empty() { "0".into() } else { trimmed.into() };
    }
    match number.parse::<f64>() {
        Ok(x) => format!("{}", x.round() as u64),
        Err(_) => number.to_string(),
    }
}

/// Term frequencies of [`tokenize`] output.
pub fn term_frequencies(text: &str) -> BTreeMap<String, f64> {
    let mut tf = BTreeMap::new();
    for tok in tokenize(text) {
        *tf.entry(tok).or_insert(0.0) += 1.0;
    }
    tf
}
