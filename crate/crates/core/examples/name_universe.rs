//! Sizes of the cumulative name universes and a few names at rank 1.
//!
//! `cargo run --release --example name_universe -- [site] [rank]`

use sheaf_forcing::site::catalog;
use sheaf_forcing::{Forcer, NameStore};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "two".into());
    let rank: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let site = catalog::by_name(&name).expect("a catalog site");
    let store = NameStore::new(&site.cat);
    for a in site.cat.objects() {
        for n in 0..=rank {
            match store.enumerate(a, n) {
                Ok(names) => {
                    let classes = Forcer::new(&site, &store, n).class_count(a).unwrap_or(0);
                    println!("|U_{n}({})| = {:<6} classes {classes}", site.cat.object_name(a), names.len());
                }
                Err(e) => println!("U_{n}({}): {e}", site.cat.object_name(a)),
            }
        }
        if let Ok(names) = store.enumerate(a, 1) {
            for &x in names.iter().take(8) {
                println!("    {}", store.display(x));
            }
        }
    }
}
