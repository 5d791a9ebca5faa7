//! Excluded middle fails at `B` on the two-object category: the name
//! `{(atom u, u)}` is inhabited only after restricting along `u`.

use sheaf_forcing::forcing::Env;
use sheaf_forcing::formula::parse;
use sheaf_forcing::site::catalog;
use sheaf_forcing::{Forcer, NameStore};

fn main() -> sheaf_forcing::Result<()> {
    let site = catalog::two_trivial();
    let cat = &site.cat;
    let store = NameStore::new(cat);
    let b = cat.object("B")?;
    let u = cat.arrow("u")?;
    let bdot = store.set(b, vec![(u, store.atom(u))])?;
    let env = Env::new().bind("b", bdot);
    let mut forcer = Forcer::new(&site, &store, 1);
    for text in [
        "exists x . x in b",
        "not (exists x . x in b)",
        "(exists x . x in b) or not (exists x . x in b)",
        "not not ((exists x . x in b) or not (exists x . x in b))",
    ] {
        let phi = parse(text)?;
        let v = forcer.force(b, &phi, &env)?;
        let tv = forcer.truth_value(b, &phi, &env)?;
        println!("B ⊩ {text}: {v}   ‖·‖ = {:?}", cat.arrow_names(tv.arrows));
    }
    Ok(())
}
