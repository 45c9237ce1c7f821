//! Checks searches for well-formedness and a scheme for coverage of every
//! mismatch pattern, then breaks a scheme on purpose.
//!
//! cargo run --example validate_scheme

use search_schemes::scheme::{builtin, is_feasible, validate_search};
use search_schemes::{Partition, SearchScheme};

fn report(name: &str, scheme: &SearchScheme) {
    let part = Partition::even(30, scheme.num_pieces).unwrap();
    for s in &scheme.searches {
        let v = validate_search(s, scheme.num_pieces, scheme.max_errors).unwrap();
        println!("{name}: {s} {}", if v.is_ok() { "ok" } else { "invalid" });
    }
    let f = is_feasible(scheme, part.lengths());
    println!(
        "{name}: feasible = {}, {} patterns covered more than once",
        f.feasible,
        f.redundant().count()
    );
    for q in &f.uncovered {
        println!("{name}: uncovered {q}");
    }
}

fn main() {
    let good = builtin("s01star0_k2_p4").unwrap();
    report("s01star0", &good);

    let mut broken = builtin("opt_k2_p3").unwrap();
    broken.searches.pop();
    report("opt minus one search", &broken);
}
