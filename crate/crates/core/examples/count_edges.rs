//! Trie edge counts: the three small K=2 schemes at R=6 over a binary
//! alphabet, then the bundled optimal schemes against backtracking at R=101.
//!
//! cargo run --release --example count_edges

use search_schemes::scheme::{builtin, bundled_optimal};
use search_schemes::trie::{count_edges_per_search, count_edges_scheme};
use search_schemes::{Partition, SearchScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let part = Partition::even(6, 3)?;
    for name in ["lam_k2_p3", "uni_k2_p3", "opt_k2_p3"] {
        let scheme = builtin(name).unwrap();
        let per: Vec<String> = count_edges_per_search(&scheme, &part, 2)?
            .into_iter()
            .map(|c| c.map_or("-".into(), |c| c.to_string()))
            .collect();
        println!(
            "{name}: {} = {}",
            per.join(" + "),
            count_edges_scheme(&scheme, &part, 2)?
        );
    }

    println!();
    for k in 1..=4u32 {
        let bt = count_edges_scheme(&SearchScheme::backtracking(k, 1), &Partition::even(101, 1)?, 4)?;
        print!("K={k} backtracking {bt}");
        for p in k as usize + 1..=k as usize + 3 {
            let c = count_edges_scheme(&bundled_optimal(k, p).unwrap(), &Partition::even(101, p)?, 4)?;
            let ratio = c.to_string().parse::<f64>()? / bt.to_string().parse::<f64>()?;
            print!("  P={p}: {c} ({ratio:.2})");
        }
        println!();
    }
    Ok(())
}
