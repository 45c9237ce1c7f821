//! Compares schemes by work done on a batch of reads: index extension steps
//! and wall time, using several threads.
//!
//! cargo run --release --example bench_schemes -- 3

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use search_schemes::index::{Alphabet, BidirectionalIndex};
use search_schemes::scheme::bundled_optimal;
use search_schemes::search::{search_batch, Distance};
use search_schemes::SearchScheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: u32 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let text: Vec<u8> = (0..500_000).map(|_| rng.gen_range(0..4)).collect();
    let ix = BidirectionalIndex::build(&text, Alphabet::dna(), 32)?;
    let reads: Vec<Vec<u8>> = (0..2_000)
        .map(|_| {
            let p = rng.gen_range(0..text.len() - 50);
            let mut r = text[p..p + 50].to_vec();
            for _ in 0..rng.gen_range(0..=k) {
                let i = rng.gen_range(0..50);
                r[i] = (r[i] + 1) % 4;
            }
            r
        })
        .collect();

    let mut schemes = vec![("backtracking".to_string(), SearchScheme::backtracking(k, 1))];
    for p in k as usize + 1..=k as usize + 3 {
        schemes.push((
            format!("optimal P={p}"),
            bundled_optimal(k, p).ok_or("no bundled scheme for this K")?,
        ));
    }
    for (name, scheme) in &schemes {
        let start = Instant::now();
        let results = search_batch(&ix, &reads, scheme, k, Distance::Hamming, 4)?;
        let steps: u64 = results.iter().map(|r| r.stats.extension_steps).sum();
        let hits: usize = results.iter().map(|r| r.occurrences.len()).sum();
        println!(
            "{name:>14}: {steps:>10} steps, {hits} occurrences, {:?}",
            start.elapsed()
        );
    }
    Ok(())
}
