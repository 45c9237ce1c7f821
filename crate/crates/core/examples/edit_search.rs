//! Start positions of all substrings within edit distance K of a read that
//! carries an insertion and a deletion.
//!
//! cargo run --release --example edit_search

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use search_schemes::index::{Alphabet, BidirectionalIndex};
use search_schemes::scheme::bundled_optimal;
use search_schemes::search::search_edit;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let text: Vec<u8> = (0..100_000).map(|_| rng.gen_range(0..4)).collect();
    let ix = BidirectionalIndex::build(&text, Alphabet::dna(), 32)?;

    let mut read = text[42_000..42_031].to_vec();
    read.insert(10, 3);
    read.remove(22);
    read.truncate(30);

    let res = search_edit(&ix, &read, &bundled_optimal(2, 3).unwrap(), 2)?;
    println!("read {}", String::from_utf8_lossy(&ix.alphabet().decode(&read)));
    for o in &res.occurrences {
        println!("start {} with {} edits", o.position, o.errors);
    }
    println!("{} extension steps", res.stats.extension_steps);
    Ok(())
}
