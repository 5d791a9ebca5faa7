//! Checks the axiom schedule on every catalog site.
//!
//! `cargo run --release --example izfa_axioms -- [rank] [steps]`

use sheaf_forcing::cli::axiom_rows;
use sheaf_forcing::forcing::DEFAULT_STEP_LIMIT;
use sheaf_forcing::site::catalog;

fn main() {
    let mut args = std::env::args().skip(1);
    let rank = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let steps = args.next().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_STEP_LIMIT);
    for site in catalog::all() {
        println!("site {}", site.name);
        for row in axiom_rows(&site, rank, steps) {
            println!("  {:<28} {:<20} {}", row.axiom, row.status.label(), row.detail);
        }
    }
}
