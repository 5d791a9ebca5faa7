//! Runs the `K`/`L` equivalence checks on the small catalog sites.
//!
//! `cargo run --release --example sheaf_equivalence -- [bound] [rank]`

use std::time::Instant;

use sheaf_forcing::settopos::{check_equivalence, Status};
use sheaf_forcing::site::catalog;

fn main() {
    let mut args = std::env::args().skip(1);
    let bound = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let rank = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    for site in [catalog::terminal(), catalog::two_trivial(), catalog::two_jprime()] {
        let t = Instant::now();
        match check_equivalence(&site, bound, rank) {
            Ok(report) => {
                for line in report.lines.iter().filter(|l| l.status != Status::Pass) {
                    println!("  {} {} {}: {:?}", line.sheaf, line.check, line.status, line.detail);
                }
                println!("{}: {} [{:.2?}]", site.name, report.summary(), t.elapsed());
            }
            Err(e) => println!("{}: error {e}", site.name),
        }
    }
}
