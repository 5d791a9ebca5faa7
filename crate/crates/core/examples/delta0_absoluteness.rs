//! Bounded formulas about check-names are decided exactly as in the
//! hereditarily finite sets.
//!
//! `cargo run --release --example delta0_absoluteness -- [seed] [count]`

use sheaf_forcing::cli::delta0_rows;
use sheaf_forcing::site::catalog;

fn main() -> sheaf_forcing::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let count = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);
    for site in catalog::all() {
        let rows = delta0_rows(&site, seed, count, 3, 4)?;
        let agree = rows.iter().filter(|r| r.agrees).count();
        let truths = rows.iter().filter(|r| r.truth).count();
        println!("{:<14} {agree}/{} agree ({truths} true)", site.name, rows.len());
        for r in rows.iter().filter(|r| !r.agrees) {
            println!("  case {} at {}: {} with {}", r.case, r.object, r.formula, r.args);
        }
    }
    Ok(())
}
