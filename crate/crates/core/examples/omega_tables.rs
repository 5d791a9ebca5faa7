//! Prints the closed sieves on each object of a site and checks a few
//! Heyting identities on them.
//!
//! `cargo run --example omega_tables -- [site]`

use sheaf_forcing::site::catalog;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "two".into());
    let site = catalog::by_name(&name).expect("a catalog site");
    let cat = &site.cat;
    for a in cat.objects() {
        let elems = site.closed_sieves(a);
        println!("Ω({}): {} elements", cat.object_name(a), elems.len());
        for s in &elems {
            let neg = site.heyting_neg(s).unwrap();
            let lem = site.heyting_join(s, &neg).unwrap();
            println!(
                "  {:<20} ¬ = {:<20} s ∨ ¬s = {:?}",
                format!("{:?}", cat.arrow_names(s.arrows)),
                format!("{:?}", cat.arrow_names(neg.arrows)),
                cat.arrow_names(lem.arrows)
            );
        }
    }
}
