//! Amalgamating matching functions, and extracting the witness of a
//! uniquely existing set.

use std::collections::BTreeMap;

use sheaf_forcing::forcing::Env;
use sheaf_forcing::formula::parse;
use sheaf_forcing::matching::{extract_witness, unique_existence, MatchFn};
use sheaf_forcing::site::catalog;
use sheaf_forcing::{Forcer, NameStore};

fn main() -> sheaf_forcing::Result<()> {
    let site = catalog::two_jprime();
    let cat = &site.cat;
    let store = NameStore::new(cat);
    let (a, b) = (cat.object("A")?, cat.object("B")?);
    let u = cat.arrow("u")?;
    let mut forcer = Forcer::new(&site, &store, 1);

    // {u} covers B, so a value at u alone determines a set at B.
    let one = store.check_name(a, &sheaf_forcing::hf::Hf::numeral(1));
    let m = MatchFn {
        base: b,
        dom: [u].into_iter().collect(),
        values: BTreeMap::from([(u, vec![one])]),
    };
    println!("matching: {}", m.is_matching(&mut forcer)?);
    let glued = m.amalgamate(&store)?;
    println!("⊔F = {}", store.display(glued));
    println!("B ⊩ (⊔F)·u = 1: {}", forcer.eq_names(store.res(glued, u), one)?);

    // The empty set is the unique set with no members.
    let phi = parse("forall w . not (w in x)")?;
    println!("{}", unique_existence("x", &phi));
    let w = extract_witness(&mut forcer, b, "x", &phi, &Env::new())?;
    println!("witness at B: {}", store.display(w));
    Ok(())
}
