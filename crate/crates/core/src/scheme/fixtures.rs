//! Bundled schemes.
//!
//! `opt_k{K}_p{P}` are the published optimal schemes for `K = 1..4` and
//! `P = K+1..K+3`. `s01star0_k2_p4` is the `01*0` filter written as a scheme,
//! `lam_k2_p3` the three-search scheme of Lam et al. and `uni_k2_p3` plain
//! backtracking over three pieces.

use std::sync::OnceLock;

use super::{parse_scheme, SearchScheme};

pub const BUILTIN_SCHEMES: &[(&str, &str)] = &[
    ("opt_k1_p2", include_str!("../../fixtures/opt_k1_p2.json")),
    ("opt_k1_p3", include_str!("../../fixtures/opt_k1_p3.json")),
    ("opt_k1_p4", include_str!("../../fixtures/opt_k1_p4.json")),
    ("opt_k2_p3", include_str!("../../fixtures/opt_k2_p3.json")),
    ("opt_k2_p4", include_str!("../../fixtures/opt_k2_p4.json")),
    ("opt_k2_p5", include_str!("../../fixtures/opt_k2_p5.json")),
    ("opt_k3_p4", include_str!("../../fixtures/opt_k3_p4.json")),
    ("opt_k3_p5", include_str!("../../fixtures/opt_k3_p5.json")),
    ("opt_k3_p6", include_str!("../../fixtures/opt_k3_p6.json")),
    ("opt_k4_p5", include_str!("../../fixtures/opt_k4_p5.json")),
    ("opt_k4_p6", include_str!("../../fixtures/opt_k4_p6.json")),
    ("opt_k4_p7", include_str!("../../fixtures/opt_k4_p7.json")),
    ("s01star0_k2_p4", include_str!("../../fixtures/s01star0_k2_p4.json")),
    ("lam_k2_p3", include_str!("../../fixtures/lam_k2_p3.json")),
    ("uni_k2_p3", include_str!("../../fixtures/uni_k2_p3.json")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN_SCHEMES.iter().map(|(name, _)| *name)
}

/// A bundled scheme by name, e.g. `"opt_k2_p3"`.
pub fn builtin(name: &str) -> Option<SearchScheme> {
    BUILTIN_SCHEMES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_scheme(text).expect("bundled scheme parses"))
}

/// Every bundled scheme for `max_errors` errors over `pieces` pieces, by name.
pub fn builtins_for(max_errors: u32, pieces: usize) -> impl Iterator<Item = (&'static str, &'static SearchScheme)> {
    static PARSED: OnceLock<Vec<SearchScheme>> = OnceLock::new();
    let parsed = PARSED.get_or_init(|| {
        BUILTIN_SCHEMES
            .iter()
            .map(|(_, text)| parse_scheme(text).expect("bundled scheme parses"))
            .collect()
    });
    BUILTIN_SCHEMES
        .iter()
        .zip(parsed)
        .filter(move |(_, s)| s.max_errors == max_errors && s.num_pieces == pieces)
        .map(|((name, _), s)| (*name, s))
}

/// The bundled optimal scheme (R = 101, sigma = 4) for `max_errors` errors
/// and `pieces` pieces.
pub fn bundled_optimal(max_errors: u32, pieces: usize) -> Option<SearchScheme> {
    builtin(&format!("opt_k{max_errors}_p{pieces}"))
}
