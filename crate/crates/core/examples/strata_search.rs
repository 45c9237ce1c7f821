//! Best-stratum search: find the lowest error level with a hit, then report
//! everything up to that level plus a margin.
//!
//! cargo run --release --example strata_search

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use search_schemes::index::{Alphabet, BidirectionalIndex};
use search_schemes::scheme::bundled_optimal;
use search_schemes::search::{search_strata, Distance};
use search_schemes::SearchScheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let text: Vec<u8> = (0..100_000).map(|_| rng.gen_range(0..4)).collect();
    let ix = BidirectionalIndex::build(&text, Alphabet::dna(), 32)?;

    let k = 3;
    let schemes: BTreeMap<u32, SearchScheme> = (0..=k)
        .map(|level| {
            let s = if level == 0 {
                SearchScheme::backtracking(0, 1)
            } else {
                bundled_optimal(level, level as usize + 1).unwrap()
            };
            (level, s)
        })
        .collect();

    let mut read = text[777..807].to_vec();
    read[3] = (read[3] + 1) % 4;
    for width in 0..=k {
        let res = search_strata(&ix, &read, &schemes, k, width, Distance::Hamming)?;
        let found: Vec<String> = res
            .occurrences
            .iter()
            .map(|o| format!("{}({})", o.position, o.errors))
            .collect();
        println!(
            "width {width}: {} steps, hits {}",
            res.stats.extension_steps,
            found.join(" ")
        );
    }
    Ok(())
}
