use proptest::prelude::*;

use sheaf_forcing::fincat::{ArrowSet, FinCategory};
use sheaf_forcing::forcing::Env;
use sheaf_forcing::formula::{parse, Formula};
use sheaf_forcing::hf::Hf;
use sheaf_forcing::matching::MatchFn;
use sheaf_forcing::settopos::{enumerate_presheaves, enumerate_sheaves, element_name};
use sheaf_forcing::sieve::{all_sieves, pullback};
use sheaf_forcing::site::catalog;
use sheaf_forcing::{Forcer, NameStore, Site, Topology};

fn categories() -> Vec<FinCategory> {
    catalog::all().into_iter().map(|s| s.cat).collect()
}

// ---- categories and presheaves ----

#[test]
fn composition_is_associative_and_unital() {
    for cat in categories() {
        for f in cat.arrows() {
            assert!(cat.hom_into(cat.cod(f)).contains(cat.identity(cat.cod(f))));
            assert_eq!(cat.compose(cat.identity(cat.cod(f)), f), f);
            assert_eq!(cat.compose(f, cat.identity(cat.dom(f))), f);
            for g in cat.arrows().filter(|&g| cat.cod(g) == cat.dom(f)) {
                for h in cat.arrows().filter(|&h| cat.cod(h) == cat.dom(g)) {
                    assert_eq!(cat.compose(cat.compose(f, g), h), cat.compose(f, cat.compose(g, h)));
                }
            }
        }
    }
}

#[test]
fn presheaf_actions_compose_contravariantly() {
    for cat in categories().into_iter().filter(|c| c.num_arrows() <= 4) {
        for p in enumerate_presheaves(&cat, 2) {
            for f in cat.arrows() {
                for g in cat.arrows().filter(|&g| cat.cod(g) == cat.dom(f)) {
                    for x in 0..p.size(cat.cod(f)) {
                        assert_eq!(p.act(cat.compose(f, g), x), p.act(g, p.act(f, x)));
                    }
                }
            }
        }
    }
}

// ---- topologies and Ω ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_topologies_validate(site_ix in 0usize..5, masks in proptest::collection::vec(any::<u16>(), 3)) {
        let cat = catalog::all().swap_remove(site_ix).cat;
        let basis: Vec<Vec<ArrowSet>> = cat
            .objects()
            .map(|a| {
                let sieves = all_sieves(&cat, a);
                let mask = masks[a.index() % masks.len()];
                sieves.into_iter().enumerate().filter(|(i, _)| mask >> (i % 16) & 1 == 1).map(|(_, s)| s).collect()
            })
            .collect();
        let top = Topology::generate(&cat, &basis);
        prop_assert!(top.validate(&cat).is_empty());
        for (a, gens) in cat.objects().zip(&basis) {
            for &s in gens {
                prop_assert!(top.is_cover(a, s));
            }
        }
    }

    #[test]
    fn heyting_operations_stay_closed(site_ix in 0usize..5, i in any::<usize>(), j in any::<usize>()) {
        let site = catalog::all().swap_remove(site_ix);
        for a in site.cat.objects() {
            let omega = site.closed_sieves(a);
            let (x, y) = (&omega[i % omega.len()], &omega[j % omega.len()]);
            for s in [
                site.heyting_meet(x, y).unwrap(),
                site.heyting_join(x, y).unwrap(),
                site.heyting_impl(x, y).unwrap(),
                site.heyting_neg(x).unwrap(),
            ] {
                prop_assert!(site.is_closed(a, s.arrows));
            }
        }
    }
}

// ---- names ----

#[test]
fn restriction_is_functorial_on_u2() {
    for site in [catalog::two_trivial(), catalog::two_jprime()] {
        let cat = &site.cat;
        let store = NameStore::new(cat);
        for a in cat.objects() {
            for &x in store.enumerate(a, 2).unwrap().iter() {
                assert_eq!(store.res(x, cat.identity(a)), x);
                for f in cat.hom_into(a).iter() {
                    for g in cat.hom_into(cat.dom(f)).iter() {
                        assert_eq!(store.res(x, cat.compose(f, g)), store.res(store.res(x, f), g));
                    }
                }
            }
        }
    }
}

#[test]
fn check_names_commute_with_restriction() {
    let universe = Hf::universe(4);
    for site in catalog::all() {
        let cat = &site.cat;
        let store = NameStore::new(cat);
        for x in &universe {
            for f in cat.arrows() {
                assert_eq!(store.res(store.check_name(cat.cod(f), x), f), store.check_name(cat.dom(f), x));
            }
        }
    }
}

#[test]
fn universes_are_cumulative() {
    for site in catalog::all() {
        let store = NameStore::new(&site.cat);
        for a in site.cat.objects() {
            for n in 0..2 {
                let (Ok(small), Ok(big)) = (store.enumerate(a, n), store.enumerate(a, n + 1)) else {
                    continue;
                };
                assert!(small.iter().all(|x| big.contains(x)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closure_is_idempotent_and_monotone(small in any::<u32>(), extra in any::<u32>()) {
        let site = catalog::chain_dense();
        let cat = &site.cat;
        let store = NameStore::new(cat);
        let top = cat.objects().last().unwrap();
        let pool: Vec<_> = cat
            .hom_into(top)
            .iter()
            .flat_map(|f| store.enumerate(cat.dom(f), 1).unwrap().iter().map(move |&x| (f, x)).collect::<Vec<_>>())
            .collect();
        let pick = |mask: u32| -> Vec<_> {
            pool.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, &e)| e).collect()
        };
        let g = pick(small);
        let h: Vec<_> = g.iter().copied().chain(pick(extra)).collect();
        let cg = store.close_name(top, g).unwrap();
        let ch = store.close_name(top, h).unwrap();
        prop_assert!(store.is_closed(cg));
        prop_assert_eq!(store.close_name(top, store.data(cg).entries().to_vec()).unwrap(), cg);
        let big = store.data(ch);
        prop_assert!(store.data(cg).entries().iter().all(|e| big.entries().contains(e)));
    }
}

// ---- formulas ----

fn var() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "c", "x", "y", "z1"]).prop_map(String::from)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        var().prop_map(Formula::IsAtom),
        var().prop_map(Formula::IsSet),
        (var(), var()).prop_map(|(x, y)| Formula::Eq(x, y)),
        (var(), var()).prop_map(|(x, y)| Formula::Mem(x, y)),
    ];
    leaf.prop_recursive(6, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.and(q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.or(q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.implies(q)),
            inner.clone().prop_map(|p| p.not()),
            (var(), inner.clone()).prop_map(|(x, p)| Formula::forall(&x, p)),
            (var(), inner.clone()).prop_map(|(x, p)| Formula::exists(&x, p)),
            (var(), var(), inner.clone()).prop_map(|(x, t, p)| Formula::forall_in(&x, &t, p)),
            (var(), var(), inner).prop_map(|(x, t, p)| Formula::exists_in(&x, &t, p)),
        ]
    })
}

fn unbounded(phi: &Formula) -> bool {
    use Formula::*;
    match phi {
        IsAtom(_) | IsSet(_) | Eq(..) | Mem(..) => true,
        And(p, q) | Or(p, q) | Implies(p, q) => unbounded(p) && unbounded(q),
        Not(p) | Forall(_, p) | Exists(_, p) => unbounded(p),
        BForall(..) | BExists(..) => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(phi in formula()) {
        prop_assert!(phi.depth() <= 7);
        let text = phi.to_string();
        prop_assert_eq!(parse(&text).unwrap(), phi);
    }

    #[test]
    fn desugaring_keeps_free_variables(phi in formula()) {
        prop_assert_eq!(phi.desugar().free_vars(), phi.free_vars());
        prop_assert!(unbounded(&phi.desugar()));
    }
}

// ---- forcing ----

fn small_pool() -> Vec<Formula> {
    [
        "a = b",
        "a in b",
        "b : set",
        "a : atom",
        "exists x . x in a",
        "forall x in b . x = a",
    ]
    .iter()
    .map(|t| parse(t).unwrap())
    .collect()
}

#[test]
fn truth_values_are_heyting_homomorphisms() {
    for site in [catalog::two_trivial(), catalog::two_jprime(), catalog::parallel_trivial()] {
        let store = NameStore::new(&site.cat);
        let mut forcer = Forcer::new(&site, &store, 1);
        let pool = small_pool();
        for a in site.cat.objects() {
            let names = store.enumerate(a, 1).unwrap();
            for &x in names.iter() {
                for &y in names.iter() {
                    let env = Env::new().bind("a", x).bind("b", y);
                    let tv = |f: &mut Forcer, phi: &Formula| f.truth_value(a, phi, &env).unwrap();
                    for p in &pool {
                        let sp = tv(&mut forcer, p);
                        assert_eq!(tv(&mut forcer, &p.clone().not()), site.heyting_neg(&sp).unwrap());
                        for q in &pool {
                            let sq = tv(&mut forcer, q);
                            assert_eq!(tv(&mut forcer, &p.clone().and(q.clone())), site.heyting_meet(&sp, &sq).unwrap());
                            assert_eq!(tv(&mut forcer, &p.clone().or(q.clone())), site.heyting_join(&sp, &sq).unwrap());
                            assert_eq!(tv(&mut forcer, &p.clone().implies(q.clone())), site.heyting_impl(&sp, &sq).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn quantifier_bounds() {
    let bodies: Vec<Formula> = ["x in a", "x = a", "x : set", "exists y in a . y = x", "not (x in a)"]
        .iter()
        .map(|t| parse(t).unwrap())
        .collect();
    for site in [catalog::two_trivial(), catalog::two_jprime()] {
        let store = NameStore::new(&site.cat);
        let mut forcer = Forcer::new(&site, &store, 1);
        for a in site.cat.objects() {
            let names = store.enumerate(a, 1).unwrap();
            for &s in names.iter() {
                let env = Env::new().bind("a", s);
                for phi in &bodies {
                    let all = forcer.truth_value(a, &Formula::forall("x", phi.clone()), &env).unwrap();
                    let some = forcer.truth_value(a, &Formula::exists("x", phi.clone()), &env).unwrap();
                    for &w in names.iter() {
                        let inst = forcer.truth_value(a, phi, &env.clone().bind("x", w)).unwrap();
                        assert!(all.arrows.is_subset(inst.arrows));
                        assert!(inst.arrows.is_subset(some.arrows));
                    }
                    for psi in &bodies {
                        let imp = Formula::forall("x", phi.clone().implies(psi.clone()));
                        let si = forcer.truth_value(a, &imp, &env).unwrap();
                        let fa = forcer.truth_value(a, &Formula::forall("x", psi.clone()), &env).unwrap();
                        let ea = forcer.truth_value(a, &Formula::exists("x", psi.clone()), &env).unwrap();
                        assert!(site.heyting_meet(&si, &all).unwrap().arrows.is_subset(fa.arrows));
                        assert!(site.heyting_meet(&si, &some).unwrap().arrows.is_subset(ea.arrows));
                    }
                }
            }
        }
    }
}

fn site_by_index(i: usize) -> Site {
    [catalog::terminal(), catalog::two_trivial(), catalog::two_jprime(), catalog::parallel_trivial()]
        .into_iter()
        .nth(i)
        .unwrap()
}

fn shallow_formula() -> impl Strategy<Value = Formula> {
    let v = || prop::sample::select(vec!["a", "b", "x"]).prop_map(String::from);
    let leaf = prop_oneof![
        v().prop_map(Formula::IsSet),
        (v(), v()).prop_map(|(x, y)| Formula::Eq(x, y)),
        (v(), v()).prop_map(|(x, y)| Formula::Mem(x, y)),
    ];
    leaf.prop_recursive(3, 12, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.and(q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.or(q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.implies(q)),
            inner.clone().prop_map(|p| p.not()),
            inner.clone().prop_map(|p| Formula::forall("x", p)),
            inner.prop_map(|p| Formula::exists("x", p)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn truth_values_are_closed_and_stable(site_ix in 0usize..4, phi in shallow_formula(), i in any::<usize>(), j in any::<usize>()) {
        let site = site_by_index(site_ix);
        let cat = &site.cat;
        let store = NameStore::new(cat);
        let mut forcer = Forcer::new(&site, &store, 1);
        for a in cat.objects() {
            let names = store.enumerate(a, 1).unwrap();
            let mut env = Env::new().bind("a", names[i % names.len()]).bind("b", names[j % names.len()]);
            if phi.free_vars().contains("x") {
                env.insert("x", names[(i / 7) % names.len()]);
            }
            let tv = forcer.truth_value(a, &phi, &env).unwrap();
            prop_assert!(site.is_closed(a, tv.arrows));
            for f in cat.hom_into(a).iter() {
                let ef = env.restrict(&store, f).unwrap();
                let moved = forcer.truth_value(cat.dom(f), &phi, &ef).unwrap();
                prop_assert_eq!(moved.arrows, pullback(cat, tv.arrows, f));
            }
        }
    }

    #[test]
    fn generalization(site_ix in 0usize..4, phi in shallow_formula()) {
        let site = site_by_index(site_ix);
        let cat = &site.cat;
        let store = NameStore::new(cat);
        let mut forcer = Forcer::new(&site, &store, 1);
        let free: Vec<String> = phi.free_vars().into_iter().collect();
        prop_assume!(free.len() == 1);
        let v = &free[0];
        let mut everywhere = true;
        for a in cat.objects() {
            for &x in store.enumerate(a, 1).unwrap().iter() {
                everywhere &= forcer.force(a, &phi, &Env::new().bind(v, x)).unwrap().value;
            }
        }
        if everywhere {
            prop_assert!(forcer.forced_everywhere(&Formula::forall(v, phi.clone())).unwrap().value);
        }
    }
}

// ---- matching functions ----

#[test]
fn restriction_preserves_matching_and_amalgamation_is_closed() {
    for site in [catalog::two_jprime(), catalog::chain_dense()] {
        let cat = &site.cat;
        let store = NameStore::new(cat);
        let mut forcer = Forcer::new(&site, &store, 1);
        for a in cat.objects() {
            for &x in store.enumerate(a, 1).unwrap().iter().filter(|&&x| store.is_set(x)) {
                let m = MatchFn::of_name(&store, x);
                for s in all_sieves(cat, a) {
                    let sub = MatchFn {
                        base: a,
                        dom: s,
                        values: m.values.iter().filter(|(f, _)| s.contains(**f)).map(|(&f, v)| (f, v.clone())).collect(),
                    };
                    assert!(sub.is_matching(&mut forcer).unwrap());
                    let glued = sub.amalgamate(&store).unwrap();
                    assert!(store.is_closed(glued));
                    for f in cat.hom_into(a).iter() {
                        assert!(sub.restrict(&store, f).unwrap().is_matching(&mut forcer).unwrap());
                    }
                }
            }
        }
    }
}

// ---- element names of sheaves ----

#[test]
fn element_names_are_wellformed_stable_and_injective() {
    for site in [catalog::terminal(), catalog::two_trivial(), catalog::two_jprime()] {
        let cat = &site.cat;
        let store = NameStore::new(cat);
        let mut forcer = Forcer::new(&site, &store, 1);
        for sheaf in enumerate_sheaves(&site, 2) {
            for a in cat.objects() {
                for x in 0..sheaf.size(a) {
                    let bar = element_name(&store, &sheaf, a, x).unwrap();
                    assert!(store.is_closed(bar) && store.is_set(bar));
                    for f in cat.hom_into(a).iter() {
                        let there = element_name(&store, &sheaf, cat.dom(f), sheaf.act(f, x)).unwrap();
                        assert_eq!(store.res(bar, f), there);
                    }
                    for y in 0..sheaf.size(a) {
                        let other = element_name(&store, &sheaf, a, y).unwrap();
                        assert_eq!(forcer.eq_names(bar, other).unwrap(), x == y);
                    }
                }
            }
        }
    }
}

// ---- the checks can fail ----

#[test]
fn constant_graph_is_a_function_but_not_a_bijection() {
    use sheaf_forcing::settopos::{is_bijection, is_function, is_surjection};
    let site = catalog::terminal();
    let store = NameStore::new(&site.cat);
    let mut forcer = Forcer::new(&site, &store, 2);
    let obj = site.cat.objects().next().unwrap();
    let id = site.cat.identity(obj);
    let two = store.check_name(obj, &Hf::numeral(2));
    let zero = store.check_name(obj, &Hf::numeral(0));
    let one = store.check_name(obj, &Hf::numeral(1));
    let graph = store
        .close_name(obj, vec![(id, store.op(obj, zero, zero)), (id, store.op(obj, one, zero))])
        .unwrap();
    let env = Env::new().bind("f", graph).bind("a", two).bind("b", two);
    assert!(forcer.force(obj, &is_function("f", "a", "b"), &env).unwrap().value);
    assert!(!forcer.force(obj, &is_surjection("f", "a", "b"), &env).unwrap().value);
    assert!(!forcer.force(obj, &is_bijection("f", "a", "b"), &env).unwrap().value);
}

#[test]
fn distinct_sheaf_elements_get_distinct_names() {
    // collapsing two elements onto one name is caught by the equality check
    let site = catalog::two_trivial();
    let store = NameStore::new(&site.cat);
    let mut forcer = Forcer::new(&site, &store, 1);
    let sheaf = enumerate_sheaves(&site, 2).into_iter().find(|p| site.cat.objects().any(|a| p.size(a) == 2)).unwrap();
    let a = site.cat.objects().find(|&a| sheaf.size(a) == 2).unwrap();
    let x = element_name(&store, &sheaf, a, 0).unwrap();
    let y = element_name(&store, &sheaf, a, 1).unwrap();
    assert!(!forcer.eq_names(x, y).unwrap());
    assert!(forcer.eq_names(x, x).unwrap());
}
