//! Finite sheaves, sets in the forcing model, the functors `K` and `L`
//! between them, and the checks that `K` and `L` form an equivalence.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, ArrowSet, FinCategory, NatTransFin, ObjId, PresheafFin};
use crate::forcing::{Env, Forcer};
use crate::formula::Formula;
use crate::hf::Hf;
use crate::names::{NameId, NameStore};
use crate::sieve::{pullback, Site};

// ---- sheaves ----

/// Every matching family on every cover has exactly one amalgamation.
pub fn is_sheaf(site: &Site, p: &PresheafFin) -> bool {
    let cat = &site.cat;
    if !p.validate(cat).is_empty() {
        return false;
    }
    for a in cat.objects() {
        for &s in site.top.covers(a) {
            let arrows: Vec<ArrowId> = s.iter().collect();
            let mut family = vec![usize::MAX; cat.num_arrows()];
            if !families_amalgamate_uniquely(cat, p, a, &arrows, 0, &mut family) {
                return false;
            }
        }
    }
    true
}

fn families_amalgamate_uniquely(
    cat: &FinCategory,
    p: &PresheafFin,
    base: ObjId,
    arrows: &[ArrowId],
    i: usize,
    family: &mut Vec<usize>,
) -> bool {
    if i == arrows.len() {
        let count = (0..p.size(base))
            .filter(|&x| arrows.iter().all(|&f| p.act(f, x) == family[f.index()]))
            .count();
        return count == 1;
    }
    let f = arrows[i];
    for v in 0..p.size(cat.dom(f)) {
        family[f.index()] = v;
        if compatible_so_far(cat, p, arrows, i, family) && !families_amalgamate_uniquely(cat, p, base, arrows, i + 1, family) {
            family[f.index()] = usize::MAX;
            return false;
        }
    }
    family[f.index()] = usize::MAX;
    true
}

/// `P(g)(a_f) = a_{f∘g}` for every assigned pair involving `arrows[i]`.
fn compatible_so_far(cat: &FinCategory, p: &PresheafFin, arrows: &[ArrowId], i: usize, family: &[usize]) -> bool {
    let f = arrows[i];
    for &h in &arrows[..=i] {
        for g in cat.hom_into(cat.dom(h)).iter() {
            let hg = cat.compose(h, g);
            let (ah, ahg) = (family[h.index()], family[hg.index()]);
            if (h == f || hg == f) && ah != usize::MAX && ahg != usize::MAX && p.act(g, ah) != ahg {
                return false;
            }
        }
    }
    true
}

/// All presheaves with `|P(A)| ≤ bound`, elements labelled `0, 1, …`.
pub fn enumerate_presheaves(cat: &FinCategory, bound: usize) -> Vec<PresheafFin> {
    let n = cat.num_objects();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; n];
    loop {
        enumerate_actions(cat, &sizes, &mut out);
        let mut i = 0;
        while i < n && sizes[i] == bound {
            sizes[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        sizes[i] += 1;
    }
    out
}

fn enumerate_actions(cat: &FinCategory, sizes: &[usize], out: &mut Vec<PresheafFin>) {
    let values: Vec<Vec<String>> = sizes.iter().map(|&k| (0..k).map(|i| i.to_string()).collect()).collect();
    let free: Vec<ArrowId> = cat.arrows().filter(|&f| !cat.is_identity(f)).collect();
    let mut actions: Vec<Vec<usize>> = cat
        .arrows()
        .map(|f| {
            if cat.is_identity(f) {
                (0..sizes[cat.dom(f).index()]).collect()
            } else {
                vec![0; sizes[cat.cod(f).index()]]
            }
        })
        .collect();
    if free
        .iter()
        .any(|&f| sizes[cat.cod(f).index()] > 0 && sizes[cat.dom(f).index()] == 0)
    {
        return;
    }
    // odometer over every non-identity action table
    loop {
        let p = PresheafFin::new(values.clone(), actions.clone());
        if p.validate(cat).is_empty() {
            out.push(p);
        }
        let mut advanced = false;
        'outer: for &f in &free {
            let dst = sizes[cat.dom(f).index()];
            for v in actions[f.index()].iter_mut() {
                *v += 1;
                if *v < dst {
                    advanced = true;
                    break 'outer;
                }
                *v = 0;
            }
        }
        if !advanced {
            break;
        }
    }
}

/// All sheaves with `|F(A)| ≤ bound`.
pub fn enumerate_sheaves(site: &Site, bound: usize) -> Vec<PresheafFin> {
    enumerate_presheaves(&site.cat, bound)
        .into_iter()
        .filter(|p| is_sheaf(site, p))
        .collect()
}

/// All natural transformations `source → target`.
pub fn enumerate_transformations(cat: &FinCategory, source: &PresheafFin, target: &PresheafFin) -> Vec<NatTransFin> {
    let slots: Vec<(usize, usize)> = cat
        .objects()
        .flat_map(|a| (0..source.size(a)).map(move |x| (a.index(), x)))
        .collect();
    if slots.iter().any(|&(a, _)| target.values[a].is_empty()) {
        return Vec::new();
    }
    let mut comps: Vec<Vec<usize>> = source.values.iter().map(|v| vec![0; v.len()]).collect();
    let mut out = Vec::new();
    loop {
        let t = NatTransFin {
            components: comps.clone(),
        };
        if t.validate(cat, source, target).is_empty() {
            out.push(t);
        }
        let mut advanced = false;
        for &(a, x) in &slots {
            comps[a][x] += 1;
            if comps[a][x] < target.values[a].len() {
                advanced = true;
                break;
            }
            comps[a][x] = 0;
        }
        if !advanced {
            break;
        }
    }
    out
}

// ---- the language of functions ----

fn sing(s: &str, x: &str) -> Formula {
    Formula::mem(x, s).and(Formula::forall_in("w0", s, Formula::eq("w0", x)))
}

fn dbl(t: &str, x: &str, y: &str) -> Formula {
    Formula::mem(x, t).and(Formula::mem(y, t)).and(Formula::forall_in(
        "w0",
        t,
        Formula::eq("w0", x).or(Formula::eq("w0", y)),
    ))
}

/// `p` is the Kuratowski pair `{{x}, {x, y}}`.
pub fn pair(p: &str, x: &str, y: &str) -> Formula {
    Formula::all(vec![
        Formula::exists_in("s0", p, sing("s0", x)),
        Formula::exists_in("t0", p, dbl("t0", x, y)),
        Formula::forall_in("r0", p, sing("r0", x).or(dbl("r0", x, y))),
    ])
}

/// `(x, y) ∈ f`
pub fn app(f: &str, x: &str, y: &str) -> Formula {
    Formula::exists_in("p0", f, pair("p0", x, y))
}

/// `f` is a function from `a` to `b`.
pub fn is_function(f: &str, a: &str, b: &str) -> Formula {
    Formula::all(vec![
        Formula::is_set(f),
        Formula::forall_in(
            "pp",
            f,
            Formula::exists_in("x", a, Formula::exists_in("y", b, pair("pp", "x", "y"))),
        ),
        Formula::forall_in("x", a, Formula::exists_in("y", b, app(f, "x", "y"))),
        Formula::forall_in(
            "x",
            a,
            Formula::forall_in(
                "y",
                b,
                Formula::forall_in(
                    "y2",
                    b,
                    app(f, "x", "y").and(app(f, "x", "y2")).implies(Formula::eq("y", "y2")),
                ),
            ),
        ),
    ])
}

pub fn is_injection(f: &str, a: &str, b: &str) -> Formula {
    is_function(f, a, b).and(Formula::forall_in(
        "x",
        a,
        Formula::forall_in(
            "x2",
            a,
            Formula::forall_in(
                "y",
                b,
                app(f, "x", "y").and(app(f, "x2", "y")).implies(Formula::eq("x", "x2")),
            ),
        ),
    ))
}

pub fn is_surjection(f: &str, a: &str, b: &str) -> Formula {
    is_function(f, a, b).and(Formula::forall_in(
        "y",
        b,
        Formula::exists_in("x", a, app(f, "x", "y")),
    ))
}

pub fn is_bijection(f: &str, a: &str, b: &str) -> Formula {
    is_injection(f, a, b).and(Formula::forall_in(
        "y",
        b,
        Formula::exists_in("x", a, app(f, "x", "y")),
    ))
}

/// `h = f ∘ g` for `g: a → b`, `f: b → c`, pointwise on `a`.
pub fn is_composite(h: &str, g: &str, f: &str, a: &str, b: &str, c: &str) -> Formula {
    Formula::forall_in(
        "x",
        a,
        Formula::forall_in(
            "z",
            c,
            app(h, "x", "z").iff(Formula::exists_in(
                "y",
                b,
                app(g, "x", "y").and(app(f, "y", "z")),
            )),
        ),
    )
}

// ---- sets in the forcing model ----

/// A set in the forcing model, one representative name per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CJSetRep {
    pub reps: Vec<NameId>,
}

/// An arrow between sets in the forcing model, by graph representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CJArrow {
    pub reps: Vec<NameId>,
    pub dom: CJSetRep,
    pub cod: CJSetRep,
}

fn stable(forcer: &mut Forcer, reps: &[NameId]) -> Result<Vec<String>> {
    let store = forcer.store();
    let cat = &forcer.site().cat;
    let mut bad = Vec::new();
    for f in cat.arrows() {
        let moved = store.res(reps[cat.cod(f).index()], f);
        if !forcer.eq_names(moved, reps[cat.dom(f).index()])? {
            bad.push(format!("not stable along {}", cat.arrow_name(f)));
        }
    }
    Ok(bad)
}

fn check_shape(store: &NameStore, reps: &[NameId]) -> Result<()> {
    let cat = store.cat();
    if reps.len() != cat.num_objects() {
        return Err(Error::Invalid("one representative per object expected".into()));
    }
    for a in cat.objects() {
        if store.obj(reps[a.index()]) != a {
            return Err(Error::TypeMismatch(format!(
                "representative for {} lives elsewhere",
                cat.object_name(a)
            )));
        }
    }
    Ok(())
}

impl CJSetRep {
    pub fn new(store: &NameStore, reps: Vec<NameId>) -> Result<Self> {
        check_shape(store, &reps)?;
        Ok(CJSetRep { reps })
    }

    pub fn at(&self, a: ObjId) -> NameId {
        self.reps[a.index()]
    }

    /// Problems with set-typeness and stability, empty when valid.
    pub fn violations(&self, forcer: &mut Forcer) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for a in forcer.site().cat.objects() {
            let env = Env::new().bind("a", self.at(a));
            if !forcer.force(a, &Formula::is_set("a"), &env)?.value {
                bad.push(format!("not a set at {}", forcer.site().cat.object_name(a)));
            }
        }
        bad.extend(stable(forcer, &self.reps)?);
        Ok(bad)
    }
}

impl CJArrow {
    pub fn new(store: &NameStore, reps: Vec<NameId>, dom: CJSetRep, cod: CJSetRep) -> Result<Self> {
        check_shape(store, &reps)?;
        Ok(CJArrow { reps, dom, cod })
    }

    pub fn at(&self, a: ObjId) -> NameId {
        self.reps[a.index()]
    }

    /// Problems with the function property and stability, empty when valid.
    pub fn violations(&self, forcer: &mut Forcer) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        let fun = is_function("f", "a", "b");
        for a in forcer.site().cat.objects() {
            let env = Env::new()
                .bind("f", self.at(a))
                .bind("a", self.dom.at(a))
                .bind("b", self.cod.at(a));
            if !forcer.force(a, &fun, &env)?.value {
                bad.push(format!("not a function at {}", forcer.site().cat.object_name(a)));
            }
        }
        bad.extend(stable(forcer, &self.reps)?);
        Ok(bad)
    }

    /// `self ∘ other`, built from the graphs.
    pub fn compose(&self, forcer: &mut Forcer, other: &CJArrow) -> Result<CJArrow> {
        let store = forcer.store();
        let mut reps = Vec::new();
        for a in forcer.site().cat.objects() {
            reps.push(graph_composite(forcer, self.at(a), other.at(a))?);
        }
        CJArrow::new(store, reps, other.dom.clone(), self.cod.clone())
    }

    /// Whether `A ⊩ h = self ∘ other` at every object, for `h = composite`.
    pub fn is_composite_of(&self, forcer: &mut Forcer, f: &CJArrow, g: &CJArrow) -> Result<bool> {
        let phi = is_composite("h", "g", "f", "a", "b", "c");
        for a in forcer.site().cat.objects() {
            let env = Env::new()
                .bind("h", self.at(a))
                .bind("g", g.at(a))
                .bind("f", f.at(a))
                .bind("a", g.dom.at(a))
                .bind("b", g.cod.at(a))
                .bind("c", f.cod.at(a));
            if !forcer.force(a, &phi, &env)?.value {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `{(op(x, z), k) | (op(x, y), k) ∈ g, (op(y', z), k) ∈ f, dom k ⊩ y = y'}`.
fn graph_composite(forcer: &mut Forcer, f: NameId, g: NameId) -> Result<NameId> {
    let store = forcer.store();
    let cat = &forcer.site().cat;
    let obj = store.obj(f);
    let (df, dg) = (store.data(f), store.data(g));
    let mut gens = Vec::new();
    for &(k, p) in dg.entries() {
        let (x, y) = store
            .decode_op(p)
            .ok_or_else(|| Error::Invalid(format!("{} is not a pair", store.display(p))))?;
        for q in df.entries_at(k) {
            let (y2, z) = store
                .decode_op(q)
                .ok_or_else(|| Error::Invalid(format!("{} is not a pair", store.display(q))))?;
            if forcer.eq_names(y, y2)? {
                gens.push((k, store.op(cat.dom(k), x, z)));
            }
        }
    }
    store.close_name(obj, gens)
}

/// The graph of the identity on a set name.
pub fn identity_graph(store: &NameStore, a: NameId) -> Result<NameId> {
    let obj = store.obj(a);
    let cat = store.cat();
    let gens = store
        .data(a)
        .entries()
        .iter()
        .map(|&(f, x)| (f, store.op(cat.dom(f), x, x)))
        .collect();
    store.close_name(obj, gens)
}

// ---- the functor K ----

fn label(store: &NameStore, obj: ObjId, i: usize) -> NameId {
    store.check_name(obj, &Hf::numeral(i))
}

/// `ā^{F,A}` for the element with index `a` of `F(A)`.
pub fn element_name(store: &NameStore, f_sheaf: &PresheafFin, obj: ObjId, a: usize) -> Result<NameId> {
    let cat = store.cat();
    let mut entries = Vec::new();
    for f in cat.arrows() {
        let d = cat.dom(f);
        for g in cat.hom(d, obj) {
            let target = f_sheaf.act(g, a);
            let tag = store.atom(f);
            for x in 0..f_sheaf.size(cat.cod(f)) {
                if f_sheaf.act(f, x) == target {
                    entries.push((g, store.op(d, label(store, d, x), tag)));
                }
            }
        }
    }
    store.set(obj, entries)
}

/// `K̇_{F,A}`
pub fn k_object_at(store: &NameStore, f_sheaf: &PresheafFin, obj: ObjId) -> Result<NameId> {
    let cat = store.cat();
    let mut entries = Vec::new();
    for f in cat.hom_into(obj).iter() {
        let d = cat.dom(f);
        for a in 0..f_sheaf.size(d) {
            entries.push((f, element_name(store, f_sheaf, d, a)?));
        }
    }
    store.set(obj, entries)
}

pub fn functor_k_obj(store: &NameStore, f_sheaf: &PresheafFin) -> Result<CJSetRep> {
    let reps = store
        .cat()
        .objects()
        .map(|a| k_object_at(store, f_sheaf, a))
        .collect::<Result<_>>()?;
    CJSetRep::new(store, reps)
}

/// `K(σ)` for `σ: F → G`.
pub fn functor_k_arrow(store: &NameStore, source: &PresheafFin, target: &PresheafFin, sigma: &NatTransFin) -> Result<CJArrow> {
    let cat = store.cat();
    let mut reps = Vec::new();
    for obj in cat.objects() {
        let mut entries = Vec::new();
        for f in cat.hom_into(obj).iter() {
            let d = cat.dom(f);
            for a in 0..source.size(d) {
                let x = element_name(store, source, d, a)?;
                let y = element_name(store, target, d, sigma.apply(d, a))?;
                entries.push((f, store.op(d, x, y)));
            }
        }
        reps.push(store.set(obj, entries)?);
    }
    CJArrow::new(
        store,
        reps,
        functor_k_obj(store, source)?,
        functor_k_obj(store, target)?,
    )
}

// ---- the functor L ----

/// A matching function with one representative name per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Local {
    pub dom: ArrowSet,
    pub values: BTreeMap<ArrowId, NameId>,
}

impl Local {
    fn restrict(&self, cat: &FinCategory, f: ArrowId) -> Local {
        let dom = pullback(cat, self.dom, f);
        Local {
            dom,
            values: dom.iter().map(|g| (g, self.values[&cat.compose(f, g)])).collect(),
        }
    }
}

/// `L_a` together with the chosen representative of each element.
#[derive(Clone, Debug)]
pub struct LSheaf {
    pub presheaf: PresheafFin,
    pub elements: Vec<Vec<Local>>,
}

/// Local elements of `a` at `D`: names from the entries of the
/// representatives, forced into `a_D`, one per forcing-equality class.
fn local_elements(forcer: &mut Forcer, a: &CJSetRep, d: ObjId) -> Result<Vec<NameId>> {
    let store = forcer.store();
    let cat = &forcer.site().cat;
    let mut out: Vec<NameId> = Vec::new();
    for e in cat.objects() {
        for &(g, v) in store.data(a.at(e)).entries() {
            if cat.dom(g) != d {
                continue;
            }
            if !forcer.mem_names(v, a.at(d))? {
                continue;
            }
            let mut known = false;
            for &w in &out {
                if forcer.eq_names(v, w)? {
                    known = true;
                    break;
                }
            }
            if !known {
                out.push(v);
            }
        }
    }
    Ok(out)
}

fn equivalent(forcer: &mut Forcer, base: ObjId, m: &Local, n: &Local) -> Result<bool> {
    let mut agree = ArrowSet::EMPTY;
    for f in m.dom.intersection(n.dom).iter() {
        if forcer.eq_names(m.values[&f], n.values[&f])? {
            agree.insert(f);
        }
    }
    Ok(forcer.site().top.has_cover_within(base, agree))
}

fn classify(forcer: &mut Forcer, base: ObjId, elems: &[Local], m: &Local) -> Result<Option<usize>> {
    for (i, e) in elems.iter().enumerate() {
        if equivalent(forcer, base, e, m)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Matching functions over covers of `base` with values among `cands`,
/// one per equivalence class.
fn matching_classes(forcer: &mut Forcer, base: ObjId, cands: &[Vec<NameId>]) -> Result<Vec<Local>> {
    let site = forcer.site();
    let mut classes: Vec<Local> = Vec::new();
    for &s in site.top.covers(base) {
        let arrows: Vec<ArrowId> = s.iter().collect();
        let mut found = Vec::new();
        let mut current = BTreeMap::new();
        extend_matching(forcer, &arrows, 0, cands, &mut current, &mut found)?;
        for values in found {
            let m = Local { dom: s, values };
            if classify(forcer, base, &classes, &m)?.is_none() {
                classes.push(m);
            }
        }
    }
    Ok(classes)
}

fn extend_matching(
    forcer: &mut Forcer,
    arrows: &[ArrowId],
    i: usize,
    cands: &[Vec<NameId>],
    current: &mut BTreeMap<ArrowId, NameId>,
    found: &mut Vec<BTreeMap<ArrowId, NameId>>,
) -> Result<()> {
    if i == arrows.len() {
        found.push(current.clone());
        return Ok(());
    }
    let store = forcer.store();
    let cat = &forcer.site().cat;
    let f = arrows[i];
    'cand: for &v in &cands[cat.dom(f).index()] {
        current.insert(f, v);
        for (&h, &vh) in current.iter() {
            for g in cat.hom_into(cat.dom(h)).iter() {
                let hg = cat.compose(h, g);
                if h != f && hg != f {
                    continue;
                }
                if let Some(&vhg) = current.get(&hg) {
                    if !forcer.eq_names(store.res(vh, g), vhg)? {
                        continue 'cand;
                    }
                }
            }
        }
        extend_matching(forcer, arrows, i + 1, cands, current, found)?;
    }
    current.remove(&f);
    Ok(())
}

/// `L_a` with `L_a(A) = M_{a,A}/∼` and `L_a(f)[m] = [m · f]`.
pub fn functor_l_obj(forcer: &mut Forcer, a: &CJSetRep) -> Result<LSheaf> {
    let cat = &forcer.site().cat;
    let mut cands = Vec::new();
    for d in cat.objects() {
        cands.push(local_elements(forcer, a, d)?);
    }
    let mut elements = Vec::new();
    for base in cat.objects() {
        elements.push(matching_classes(forcer, base, &cands)?);
    }
    let mut actions = Vec::new();
    for f in cat.arrows() {
        let (d, c) = (cat.dom(f), cat.cod(f));
        let mut act = Vec::new();
        for m in &elements[c.index()] {
            let mf = m.restrict(cat, f);
            let i = classify(forcer, d, &elements[d.index()], &mf)?.ok_or_else(|| {
                Error::Invalid(format!("restriction along {} has no class", cat.arrow_name(f)))
            })?;
            act.push(i);
        }
        actions.push(act);
    }
    let values = elements
        .iter()
        .map(|es| (0..es.len()).map(|i| format!("m{i}")).collect())
        .collect();
    Ok(LSheaf {
        presheaf: PresheafFin::new(values, actions),
        elements,
    })
}

/// Index of `[m_ẋ]` in `L_a(obj)`.
fn class_of_name(forcer: &mut Forcer, la: &LSheaf, x: NameId) -> Result<usize> {
    let store = forcer.store();
    let cat = &forcer.site().cat;
    let obj = store.obj(x);
    let dom = cat.hom_into(obj);
    let m = Local {
        dom,
        values: dom.iter().map(|f| (f, store.res(x, f))).collect(),
    };
    classify(forcer, obj, &la.elements[obj.index()], &m)?.ok_or_else(|| {
        Error::Invalid(format!("{} induces no element of L", store.display(x)))
    })
}

/// `app_A(p, m)`: the image of `m` under `p`, on the largest sieve where a
/// forced image can be found.
pub fn app_local(forcer: &mut Forcer, p: &CJArrow, base: ObjId, m: &Local) -> Result<Local> {
    let store = forcer.store();
    let site = forcer.site();
    let cat = &site.cat;
    let apply = app("p", "x", "y");
    let mut image = BTreeMap::new();
    for (&f, &x) in &m.values {
        let d = cat.dom(f);
        let mut cands = local_elements(forcer, &p.cod, d)?;
        let mut ys = find_images(forcer, &apply, p, d, x, &cands)?;
        let mut rank = 2;
        while ys.is_empty() && rank <= 4 {
            cands = store.enumerate(d, rank)?.to_vec();
            ys = find_images(forcer, &apply, p, d, x, &cands)?;
            rank += 1;
        }
        match ys.as_slice() {
            [] => {}
            [y] => {
                image.insert(f, *y);
            }
            _ => {
                return Err(Error::Invalid(format!(
                    "{} has several images at {}",
                    store.display(x),
                    cat.arrow_name(f)
                )))
            }
        }
    }
    // keep the arrows whose whole pullback found an image
    let found: ArrowSet = image.keys().copied().collect();
    let dom: ArrowSet = found
        .iter()
        .filter(|&f| {
            cat.hom_into(cat.dom(f))
                .iter()
                .all(|g| found.contains(cat.compose(f, g)))
        })
        .collect();
    if !site.top.has_cover_within(base, dom) || !site.top.is_cover(base, dom) {
        return Err(Error::RankTooLow(format!(
            "images found only on {:?}",
            cat.arrow_names(dom)
        )));
    }
    image.retain(|f, _| dom.contains(*f));
    Ok(Local { dom, values: image })
}

fn find_images(forcer: &mut Forcer, apply: &Formula, p: &CJArrow, d: ObjId, x: NameId, cands: &[NameId]) -> Result<Vec<NameId>> {
    let mut ys: Vec<NameId> = Vec::new();
    for &y in cands {
        if !forcer.mem_names(y, p.cod.at(d))? {
            continue;
        }
        let env = Env::new().bind("p", p.at(d)).bind("x", x).bind("y", y);
        if !forcer.force(d, apply, &env)?.value {
            continue;
        }
        let mut known = false;
        for &z in &ys {
            if forcer.eq_names(y, z)? {
                known = true;
                break;
            }
        }
        if !known {
            ys.push(y);
        }
    }
    Ok(ys)
}

/// `L(p): L_a → L_b`.
pub fn functor_l_arrow(forcer: &mut Forcer, p: &CJArrow, la: &LSheaf, lb: &LSheaf) -> Result<NatTransFin> {
    let cat = &forcer.site().cat;
    let mut components = Vec::new();
    for base in cat.objects() {
        let mut comp = Vec::new();
        for m in &la.elements[base.index()] {
            let img = app_local(forcer, p, base, m)?;
            let i = classify(forcer, base, &lb.elements[base.index()], &img)?.ok_or_else(|| {
                Error::Invalid(format!("image at {} has no class", cat.object_name(base)))
            })?;
            comp.push(i);
        }
        components.push(comp);
    }
    Ok(NatTransFin { components })
}

// ---- the natural isomorphisms ----

/// `σ_{F,A}(a) = [m_ā]`, one component per object.
pub fn sigma(forcer: &mut Forcer, f_sheaf: &PresheafFin, lkf: &LSheaf) -> Result<NatTransFin> {
    let store = forcer.store();
    let cat = &forcer.site().cat;
    let mut components = Vec::new();
    for a in cat.objects() {
        let mut comp = Vec::new();
        for x in 0..f_sheaf.size(a) {
            let bar = element_name(store, f_sheaf, a, x)?;
            comp.push(class_of_name(forcer, lkf, bar)?);
        }
        components.push(comp);
    }
    Ok(NatTransFin { components })
}

/// `Ṗ_{a,A}` for every object.
pub fn p_arrow(forcer: &mut Forcer, a: &CJSetRep, la: &LSheaf) -> Result<CJArrow> {
    let store = forcer.store();
    let cat = &forcer.site().cat;
    let mut reps = Vec::new();
    for obj in cat.objects() {
        let mut gens = Vec::new();
        for &(f, x) in store.data(a.at(obj)).entries() {
            let d = cat.dom(f);
            let i = class_of_name(forcer, la, x)?;
            gens.push((f, store.op(d, x, element_name(store, &la.presheaf, d, i)?)));
        }
        reps.push(store.close_name(obj, gens)?);
    }
    CJArrow::new(store, reps, a.clone(), functor_k_obj(store, &la.presheaf)?)
}

fn is_bijective(t: &NatTransFin, target: &PresheafFin) -> bool {
    t.components.iter().enumerate().all(|(a, c)| {
        let mut seen = vec![false; target.values[a].len()];
        for &y in c {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        seen.iter().all(|&s| s)
    })
}

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Budget,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Budget => "budget",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportLine {
    pub site: String,
    pub sheaf: String,
    pub check: String,
    pub status: Status,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<ReportLine>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.status == Status::Pass)
    }

    pub fn count(&self, status: Status) -> usize {
        self.lines.iter().filter(|l| l.status == status).count()
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        self.lines
            .iter()
            .map(|l| serde_json::to_string(l).expect("report lines serialize") + "\n")
            .collect()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} checks: {} pass, {} fail, {} budget",
            self.lines.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Budget)
        )
    }
}

struct Recorder<'r> {
    site: String,
    rank: usize,
    report: &'r mut Report,
}

impl Recorder<'_> {
    fn record(&mut self, sheaf: &str, check: &str, outcome: Result<Vec<String>>) {
        let (status, detail) = match outcome {
            Ok(bad) if bad.is_empty() => (Status::Pass, None),
            Ok(bad) => (Status::Fail, Some(bad.join("; "))),
            Err(Error::Budget(m)) | Err(Error::RankTooLow(m)) => (Status::Budget, Some(m)),
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        self.report.lines.push(ReportLine {
            site: self.site.clone(),
            sheaf: sheaf.to_string(),
            check: check.to_string(),
            status,
            rank: self.rank,
            detail,
        });
    }
}

fn forced_everywhere_at(forcer: &mut Forcer, phi: &Formula, envs: impl Fn(ObjId) -> Env) -> Result<Vec<String>> {
    let cat = &forcer.site().cat;
    let mut bad = Vec::new();
    for a in cat.objects() {
        if !forcer.force(a, phi, &envs(a))?.value {
            bad.push(format!("not forced at {}", cat.object_name(a)));
        }
    }
    Ok(bad)
}

/// The per-sheaf data the checks share.
struct Instance {
    id: String,
    sheaf: PresheafFin,
    k: CJSetRep,
    l: LSheaf,
    sigma: NatTransFin,
    p: CJArrow,
}

/// Runs the equivalence checks on every sheaf with value sets of size at
/// most `bound` and every transformation between them.
pub fn check_equivalence(site: &Site, bound: usize, rank: usize) -> Result<Report> {
    let store = NameStore::new(&site.cat);
    let mut forcer = Forcer::new(site, &store, rank);
    let mut report = Report::default();
    let mut rec = Recorder {
        site: site.name.clone(),
        rank,
        report: &mut report,
    };
    let cat = &site.cat;
    let sheaves = enumerate_sheaves(site, bound);
    let mut instances: Vec<Option<Instance>> = Vec::new();
    for (i, sheaf) in sheaves.into_iter().enumerate() {
        let id = format!("F{i}");
        let built = (|| -> Result<Instance> {
            let k = functor_k_obj(&store, &sheaf)?;
            let l = functor_l_obj(&mut forcer, &k)?;
            let s = sigma(&mut forcer, &sheaf, &l)?;
            let p = p_arrow(&mut forcer, &k, &l)?;
            Ok(Instance { id: id.clone(), sheaf, k, l, sigma: s, p })
        })();
        let inst = match built {
            Ok(inst) => inst,
            Err(e) => {
                rec.record(&id, "construct", Err(e));
                instances.push(None);
                continue;
            }
        };
        rec.record(&id, "K.set", inst.k.violations(&mut forcer));
        let mut l_bad = Vec::new();
        if !is_sheaf(site, &inst.l.presheaf) {
            l_bad.push("L_K(F) is not a sheaf".to_string());
        }
        rec.record(&id, "L.sheaf", Ok(l_bad));
        let mut sigma_bad = Vec::new();
        if !is_bijective(&inst.sigma, &inst.l.presheaf) {
            sigma_bad.push("a component is not a bijection".to_string());
        }
        rec.record(&id, "sigma.bijection", Ok(sigma_bad));
        let mut square = Vec::new();
        for f in cat.arrows() {
            let (a, b) = (cat.dom(f), cat.cod(f));
            for x in 0..inst.sheaf.size(b) {
                let left = inst.sigma.apply(a, inst.sheaf.act(f, x));
                let right = inst.l.presheaf.act(f, inst.sigma.apply(b, x));
                if left != right {
                    square.push(format!("square for {} fails at {x}", cat.arrow_name(f)));
                }
            }
        }
        rec.record(&id, "sigma.square", Ok(square));
        let bij = is_bijection("p", "a", "c");
        let p_bad = (|| -> Result<Vec<String>> {
            let mut bad = inst.p.violations(&mut forcer)?;
            bad.extend(forced_everywhere_at(&mut forcer, &bij, |a| {
                Env::new()
                    .bind("p", inst.p.at(a))
                    .bind("a", inst.k.at(a))
                    .bind("c", inst.p.cod.at(a))
            })?);
            Ok(bad)
        })();
        rec.record(&id, "P.bijection", p_bad);
        instances.push(Some(inst));
    }
    let naturality = Formula::forall_in(
        "x",
        "a",
        Formula::exists_in(
            "y",
            "b",
            Formula::exists_in(
                "z",
                "c",
                Formula::exists_in(
                    "w",
                    "d",
                    Formula::all(vec![
                        app("q", "x", "y"),
                        app("pb", "y", "w"),
                        app("pa", "x", "z"),
                        app("klq", "z", "w"),
                    ]),
                ),
            ),
        ),
    );
    for src in instances.iter().flatten() {
        for dst in instances.iter().flatten() {
            for (j, rho) in enumerate_transformations(cat, &src.sheaf, &dst.sheaf).into_iter().enumerate() {
                let tag = format!("{}->{}#{j}", src.id, dst.id);
                let q = functor_k_arrow(&store, &src.sheaf, &dst.sheaf, &rho);
                let q = match q {
                    Ok(q) => q,
                    Err(e) => {
                        rec.record(&tag, "K.arrow", Err(e));
                        continue;
                    }
                };
                rec.record(&tag, "K.arrow", q.violations(&mut forcer));
                let square_c = (|| -> Result<Vec<String>> {
                    let lq = functor_l_arrow(&mut forcer, &q, &src.l, &dst.l)?;
                    let mut bad = Vec::new();
                    for a in cat.objects() {
                        for x in 0..src.sheaf.size(a) {
                            if lq.apply(a, src.sigma.apply(a, x)) != dst.sigma.apply(a, rho.apply(a, x)) {
                                bad.push(format!("square fails at {} element {x}", cat.object_name(a)));
                            }
                        }
                    }
                    Ok(bad)
                })();
                rec.record(&tag, "sigma.natural", square_c);
                let square_p = (|| -> Result<Vec<String>> {
                    let lq = functor_l_arrow(&mut forcer, &q, &src.l, &dst.l)?;
                    let klq = functor_k_arrow(&store, &src.l.presheaf, &dst.l.presheaf, &lq)?;
                    forced_everywhere_at(&mut forcer, &naturality, |a| {
                        Env::new()
                            .bind("a", src.k.at(a))
                            .bind("b", dst.k.at(a))
                            .bind("c", src.p.cod.at(a))
                            .bind("d", dst.p.cod.at(a))
                            .bind("q", q.at(a))
                            .bind("pa", src.p.at(a))
                            .bind("pb", dst.p.at(a))
                            .bind("klq", klq.at(a))
                    })
                })();
                rec.record(&tag, "P.natural", square_p);
            }
        }
    }
    Ok(report)
}
