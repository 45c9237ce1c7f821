//! Scheme files: `{"K":2,"P":3,"R":6,"searches":[{"pi":[..],"L":[..],"U":[..]}]}`.
//!
//! `R` is optional. Piece indices are 1-based.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use super::{validate_search, SchemeError, Search, SearchScheme};

#[derive(Debug, Error)]
pub enum SchemeParseError {
    #[error("scheme file line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("scheme file, search {index} (pi={pi:?}): {reason}")]
    Invalid {
        index: usize,
        pi: Vec<usize>,
        reason: String,
    },
    #[error("scheme file: P must be at least 1")]
    NoPieces,
    #[error("scheme file: R={read_len} is shorter than P={pieces}")]
    ReadTooShort { read_len: usize, pieces: usize },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    #[serde(rename = "K")]
    k: u32,
    #[serde(rename = "P")]
    p: usize,
    #[serde(rename = "R", default)]
    r: Option<usize>,
    searches: Vec<SearchEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchEntry {
    pi: Vec<usize>,
    #[serde(rename = "L")]
    lower: Vec<u32>,
    #[serde(rename = "U")]
    upper: Vec<u32>,
}

/// Parses and validates a scheme file. Empty searches are kept.
pub fn parse_scheme(text: &str) -> Result<SearchScheme, SchemeParseError> {
    let file: SchemeFile = serde_json::from_str(text).map_err(|e| SchemeParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.p == 0 {
        return Err(SchemeParseError::NoPieces);
    }
    if let Some(r) = file.r {
        if r < file.p {
            return Err(SchemeParseError::ReadTooShort {
                read_len: r,
                pieces: file.p,
            });
        }
    }
    let mut searches = Vec::with_capacity(file.searches.len());
    for (index, entry) in file.searches.into_iter().enumerate() {
        let search = Search::new(entry.pi, entry.lower, entry.upper);
        let invalid = |reason: String| SchemeParseError::Invalid {
            index: index + 1,
            pi: search.pi.clone(),
            reason,
        };
        let report = match validate_search(&search, file.p, file.k) {
            Ok(r) => r,
            Err(e @ SchemeError::LengthMismatch { .. }) => return Err(invalid(e.to_string())),
            Err(e) => return Err(invalid(e.to_string())),
        };
        if !report.is_ok() {
            let reasons: Vec<String> = report.errors().map(ToString::to_string).collect();
            return Err(invalid(reasons.join("; ")));
        }
        searches.push(search);
    }
    Ok(SearchScheme {
        max_errors: file.k,
        num_pieces: file.p,
        read_len: file.r,
        searches,
    })
}

fn list<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Writes a scheme in the normalized file layout (one search per line).
pub fn serialize_scheme(scheme: &SearchScheme) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"K\": {},", scheme.max_errors);
    let _ = writeln!(out, "  \"P\": {},", scheme.num_pieces);
    if let Some(r) = scheme.read_len {
        let _ = writeln!(out, "  \"R\": {r},");
    }
    out.push_str("  \"searches\": [");
    for (i, s) in scheme.searches.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(
            out,
            "    {{\"pi\": {}, \"L\": {}, \"U\": {}}}",
            list(&s.pi),
            list(&s.lower),
            list(&s.upper)
        );
    }
    if !scheme.searches.is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table3_k2_p3() {
        let text = r#"{"K":2,"P":3,"searches":[
            {"pi":[1,2,3],"L":[0,0,2],"U":[0,1,2]},
            {"pi":[3,2,1],"L":[0,0,0],"U":[0,2,2]},
            {"pi":[2,3,1],"L":[0,1,1],"U":[0,1,2]}]}"#;
        let scheme = parse_scheme(text).unwrap();
        let want = SearchScheme::from_compact(2, 3, &["123,002,012", "321,000,022", "231,011,012"]).unwrap();
        assert_eq!(scheme, want);
    }

    #[test]
    fn serialize_is_normal_form() {
        let messy = r#"{ "P": 3, "K": 2, "R": 6,
            "searches": [ {"U":[0,1,2], "L":[0,0,2], "pi":[1,2,3]} ] }"#;
        let once = serialize_scheme(&parse_scheme(messy).unwrap());
        let twice = serialize_scheme(&parse_scheme(&once).unwrap());
        assert_eq!(once, twice);
        assert!(once.contains("\"R\": 6"));
    }

    #[test]
    fn repeated_piece_rejected() {
        let text = r#"{"K":2,"P":3,"searches":[{"pi":[1,1,2],"L":[0,0,0],"U":[0,1,2]}]}"#;
        let err = parse_scheme(text).unwrap_err();
        assert!(err.to_string().contains("not-a-permutation"), "{err}");
        assert!(err.to_string().contains("search 1"), "{err}");
    }

    #[test]
    fn syntax_error_has_location() {
        let err = parse_scheme("{\"K\": 2,\n \"P\": }").unwrap_err();
        assert!(matches!(err, SchemeParseError::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn wrong_lengths_rejected() {
        let text = r#"{"K":1,"P":2,"searches":[{"pi":[1,2],"L":[0],"U":[0,1]}]}"#;
        assert!(matches!(
            parse_scheme(text),
            Err(SchemeParseError::Invalid { index: 1, .. })
        ));
    }
}
