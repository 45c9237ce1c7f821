//! All occurrences within Hamming distance K, with a bundled optimal scheme
//! and with plain backtracking.
//!
//! cargo run --release --example hamming_search -- 2

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use search_schemes::index::{Alphabet, BidirectionalIndex};
use search_schemes::scheme::bundled_optimal;
use search_schemes::search::search_hamming;
use search_schemes::SearchScheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: u32 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let text: Vec<u8> = (0..200_000).map(|_| rng.gen_range(0..4)).collect();
    let ix = BidirectionalIndex::build(&text, Alphabet::dna(), 32)?;

    let mut read = text[5_000..5_040].to_vec();
    read[7] = (read[7] + 1) % 4;
    read[31] = (read[31] + 2) % 4;

    let optimal = bundled_optimal(k, k as usize + 1).ok_or("no bundled scheme for this K")?;
    for (name, scheme) in [("optimal", optimal), ("backtracking", SearchScheme::backtracking(k, 1))] {
        let res = search_hamming(&ix, &read, &scheme, k)?;
        println!("{name:>12}: {} extension steps", res.stats.extension_steps);
        for o in &res.occurrences {
            println!(
                "{:>12}  position {} with {} mismatches (search {})",
                "", o.position, o.errors, o.search_idx
            );
        }
    }
    Ok(())
}
