//! Builds a bidirectional index over two records, grows a match in both
//! directions and saves/loads the index.
//!
//! cargo run --example fm_index

use search_schemes::index::{Alphabet, BidirectionalIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let records = vec![
        ("chr1", b"ACGTACGTTTGACCA".to_vec()),
        ("chr2", b"GGACGTNNACGT".to_vec()),
    ];
    let ix = BidirectionalIndex::from_records(records, Alphabet::dna(), 4)?;
    println!("text length {} over {} records", ix.text_len(), ix.records().len());

    let abc = ix.alphabet();
    // "CG", then one symbol to the left ("ACG") and one to the right ("ACGT")
    let mut pair = ix.find(&abc.encode(b"CG")?);
    println!("CG:   {} hits", pair.width);
    pair = ix.extend_left(pair, abc.encode_byte(b'A').unwrap());
    println!("ACG:  {} hits", pair.width);
    pair = ix.extend_right(pair, abc.encode_byte(b'T').unwrap());
    for pos in ix.locate(pair) {
        let (rec, off) = ix.resolve(pos);
        println!("ACGT: {}:{off}", ix.records()[rec].name);
    }

    let path = std::env::temp_dir().join("fm_index_example.idx");
    ix.save(&path)?;
    let back = BidirectionalIndex::load(&path)?;
    println!(
        "reloaded: {} bytes, same answers: {}",
        back.to_bytes().len(),
        back.find(&abc.encode(b"ACGT")?) == ix.find(&abc.encode(b"ACGT")?)
    );
    std::fs::remove_file(path)?;
    Ok(())
}
