//! Finds an optimal search scheme and shows how the incumbent improved.
//!
//! cargo run --release --example optimize_scheme -- 2 6 3 3 2

use search_schemes::optimizer::{solve_exact, ProblemSpec, SolveOptions};
use search_schemes::scheme::serialize_scheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let [k, r, p, s, sigma] = match args[..] {
        [] => [2, 6, 3, 3, 2],
        [k, r, p, s, sigma] => [k, r, p, s, sigma],
        _ => return Err("usage: optimize_scheme K R P S sigma".into()),
    };
    let spec = ProblemSpec::new(k as u32, r, p, s, sigma as u32)?;
    let res = solve_exact(&spec, &SolveOptions::default())?;
    println!("status: {}", res.status);
    println!(
        "candidates: {} ({} kept), nodes: {}, elapsed: {:?}",
        res.stats.candidates, res.stats.kept, res.stats.nodes, res.stats.elapsed
    );
    for inc in &res.stats.history {
        println!(
            "  incumbent {:>12} at node {:>8} after {:?}",
            inc.objective, inc.nodes, inc.elapsed
        );
    }
    if let (Some(scheme), Some(obj)) = (res.scheme, res.objective) {
        println!("objective: {obj}");
        print!("{}", serialize_scheme(&scheme));
    }
    Ok(())
}
