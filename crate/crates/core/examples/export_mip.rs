//! Writes the integer program for a small instance in LP format and reads
//! the counts back.
//!
//! cargo run --example export_mip -- model.lp

use search_schemes::optimizer::{build_mip, export_lp, parse_lp, MipOptions, ProblemSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ProblemSpec::new(1, 4, 2, 2, 2)?;
    let model = build_mip(&spec, &MipOptions::default())?;
    let text = export_lp(&model);
    let summary = parse_lp(&text)?;
    println!(
        "{} variables ({} binary, {} general), {} rows",
        summary.variables, summary.binaries, summary.generals, summary.rows
    );
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, text)?,
        None => print!(
            "{}",
            text.lines().take(12).map(|l| format!("{l}\n")).collect::<String>()
        ),
    }
    Ok(())
}
