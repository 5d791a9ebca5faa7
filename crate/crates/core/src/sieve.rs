//! Sieves, Grothendieck topologies and the Heyting algebras of closed sieves.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, ArrowSet, FinCategory, ObjId, ValidationReport};

/// Subsets of `hom_into(a)` are enumerated by brute force; keep them small.
const MAX_HOM_INTO: usize = 20;

/// `f*(s) = {g | f ∘ g ∈ s}`, a sieve on `dom f`.
pub fn pullback(cat: &FinCategory, s: ArrowSet, f: ArrowId) -> ArrowSet {
    cat.hom_into(cat.dom(f))
        .iter()
        .filter(|&g| s.contains(cat.compose(f, g)))
        .collect()
}

/// Checked version of [`pullback`] for a sieve with an explicit base.
pub fn pullback_sieve(cat: &FinCategory, base: ObjId, s: ArrowSet, f: ArrowId) -> Result<ArrowSet> {
    if cat.cod(f) != base {
        return Err(Error::TypeMismatch(format!(
            "{} does not have codomain {}",
            cat.arrow_name(f),
            cat.object_name(base)
        )));
    }
    if !is_sieve(cat, base, s) {
        return Err(Error::TypeMismatch(format!(
            "not a sieve on {}",
            cat.object_name(base)
        )));
    }
    Ok(pullback(cat, s, f))
}

pub fn is_sieve(cat: &FinCategory, base: ObjId, s: ArrowSet) -> bool {
    if !s.is_subset(cat.hom_into(base)) {
        return false;
    }
    s.iter().all(|f| {
        cat.hom_into(cat.dom(f))
            .iter()
            .all(|g| s.contains(cat.compose(f, g)))
    })
}

/// The sieve generated by a set of arrows into `base`.
pub fn sieve_generated(cat: &FinCategory, gens: ArrowSet) -> ArrowSet {
    gens.iter()
        .flat_map(|f| {
            cat.hom_into(cat.dom(f))
                .iter()
                .map(move |g| cat.compose(f, g))
        })
        .collect()
}

/// Every sieve on `base`, smallest masks first.
pub fn all_sieves(cat: &FinCategory, base: ObjId) -> Vec<ArrowSet> {
    let into: Vec<ArrowId> = cat.hom_into(base).iter().collect();
    assert!(
        into.len() <= MAX_HOM_INTO,
        "too many arrows into {}",
        cat.object_name(base)
    );
    (0u64..1 << into.len())
        .map(|bits| {
            into.iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, &f)| f)
                .collect::<ArrowSet>()
        })
        .filter(|&s| is_sieve(cat, base, s))
        .collect()
}

/// Covering sieves per object. Each list is kept sorted largest first, which
/// is the order cover searches use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    covers: Vec<Vec<ArrowSet>>,
}

fn sort_covers(v: &mut Vec<ArrowSet>) {
    v.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    v.dedup();
}

impl Topology {
    /// Takes the covering families as given; use [`Topology::validate`].
    pub fn explicit(covers: Vec<Vec<ArrowSet>>) -> Self {
        let mut covers = covers;
        for c in &mut covers {
            sort_covers(c);
        }
        Topology { covers }
    }

    /// Only the maximal sieves cover.
    pub fn trivial(cat: &FinCategory) -> Self {
        Topology::explicit(cat.objects().map(|a| vec![cat.hom_into(a)]).collect())
    }

    /// The least topology containing `basis`, by iterating maximality,
    /// stability and transitivity to a fixed point.
    pub fn generate(cat: &FinCategory, basis: &[Vec<ArrowSet>]) -> Self {
        let sieves: Vec<Vec<ArrowSet>> = cat.objects().map(|a| all_sieves(cat, a)).collect();
        let mut covers: Vec<BTreeSet<ArrowSet>> = cat
            .objects()
            .map(|a| {
                let mut s = BTreeSet::new();
                s.insert(cat.hom_into(a));
                if let Some(b) = basis.get(a.index()) {
                    s.extend(b.iter().copied());
                }
                s
            })
            .collect();
        loop {
            let mut changed = false;
            for a in cat.objects() {
                let current: Vec<ArrowSet> = covers[a.index()].iter().copied().collect();
                for s in current {
                    for f in cat.hom_into(a).iter() {
                        let p = pullback(cat, s, f);
                        changed |= covers[cat.dom(f).index()].insert(p);
                    }
                }
            }
            for a in cat.objects() {
                for &r in &sieves[a.index()] {
                    if covers[a.index()].contains(&r) {
                        continue;
                    }
                    let witnessed = covers[a.index()].iter().any(|&s| {
                        s.iter().all(|f| {
                            covers[cat.dom(f).index()].contains(&pullback(cat, r, f))
                        })
                    });
                    if witnessed {
                        covers[a.index()].insert(r);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Topology::explicit(covers.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    pub fn covers(&self, a: ObjId) -> &[ArrowSet] {
        &self.covers[a.index()]
    }

    pub fn is_cover(&self, a: ObjId, s: ArrowSet) -> bool {
        self.covers[a.index()].contains(&s)
    }

    /// Whether some cover of `a` lies inside `t`.
    pub fn has_cover_within(&self, a: ObjId, t: ArrowSet) -> bool {
        self.covers[a.index()].iter().any(|s| s.is_subset(t))
    }

    /// Checks sieve well-formedness of each cover and the three topology laws.
    pub fn validate(&self, cat: &FinCategory) -> ValidationReport {
        let mut r = ValidationReport::default();
        if self.covers.len() != cat.num_objects() {
            r.push("topology-shape", "cover table does not match the objects");
            return r;
        }
        for a in cat.objects() {
            for &s in self.covers(a) {
                if !is_sieve(cat, a, s) {
                    r.push(
                        "cover-is-sieve",
                        format!(
                            "{:?} on {} is not a sieve",
                            cat.arrow_names(s),
                            cat.object_name(a)
                        ),
                    );
                }
            }
        }
        if !r.is_empty() {
            return r;
        }
        for a in cat.objects() {
            if !self.is_cover(a, cat.hom_into(a)) {
                r.push(
                    "maximality",
                    format!("the maximal sieve on {} does not cover", cat.object_name(a)),
                );
            }
            for &s in self.covers(a) {
                for f in cat.hom_into(a).iter() {
                    let p = pullback(cat, s, f);
                    if !self.is_cover(cat.dom(f), p) {
                        r.push(
                            "stability",
                            format!(
                                "{}*({:?}) = {:?} does not cover {}",
                                cat.arrow_name(f),
                                cat.arrow_names(s),
                                cat.arrow_names(p),
                                cat.object_name(cat.dom(f))
                            ),
                        );
                    }
                }
            }
            for r_sieve in all_sieves(cat, a) {
                if self.is_cover(a, r_sieve) {
                    continue;
                }
                if let Some(&s) = self.covers(a).iter().find(|&&s| {
                    s.iter()
                        .all(|f| self.is_cover(cat.dom(f), pullback(cat, r_sieve, f)))
                }) {
                    r.push(
                        "transitivity",
                        format!(
                            "{:?} is locally covering along {:?} but does not cover {}",
                            cat.arrow_names(r_sieve),
                            cat.arrow_names(s),
                            cat.object_name(a)
                        ),
                    );
                }
            }
        }
        r
    }
}

/// A J-closed sieve with its base object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedSieve {
    pub base: ObjId,
    pub arrows: ArrowSet,
}

/// A finite site: a category together with a topology on it.
#[derive(Clone, Debug)]
pub struct Site {
    pub name: String,
    pub cat: FinCategory,
    pub top: Topology,
    degenerate: Vec<bool>,
}

impl Site {
    /// Validates both the category and the topology.
    pub fn new(name: impl Into<String>, cat: FinCategory, top: Topology) -> Result<Self> {
        let mut report = cat.validate();
        if report.is_empty() {
            report.extend(top.validate(&cat));
        }
        if !report.is_empty() {
            return Err(Error::Invalid(report.to_string().trim_end().to_string()));
        }
        Ok(Self::new_unchecked(name, cat, top))
    }

    pub fn new_unchecked(name: impl Into<String>, cat: FinCategory, top: Topology) -> Self {
        let degenerate = cat
            .objects()
            .map(|a| top.is_cover(a, ArrowSet::EMPTY))
            .collect();
        Site {
            name: name.into(),
            cat,
            top,
            degenerate,
        }
    }

    /// `∅ ∈ J(a)`.
    pub fn degenerate(&self, a: ObjId) -> bool {
        self.degenerate[a.index()]
    }

    pub fn top_sieve(&self, a: ObjId) -> ArrowSet {
        self.cat.hom_into(a)
    }

    /// `{f | ∅ ∈ J(dom f)}`.
    pub fn bottom_sieve(&self, a: ObjId) -> ArrowSet {
        self.cat
            .hom_into(a)
            .iter()
            .filter(|&f| self.degenerate(self.cat.dom(f)))
            .collect()
    }

    /// `{f | f*(s) ∈ J(dom f)}`: the smallest closed sieve containing `s`.
    pub fn closure(&self, a: ObjId, s: ArrowSet) -> ArrowSet {
        self.cat
            .hom_into(a)
            .iter()
            .filter(|&f| self.top.is_cover(self.cat.dom(f), pullback(&self.cat, s, f)))
            .collect()
    }

    pub fn is_closed(&self, a: ObjId, s: ArrowSet) -> bool {
        self.cat
            .hom_into(a)
            .iter()
            .all(|f| s.contains(f) || !self.top.is_cover(self.cat.dom(f), pullback(&self.cat, s, f)))
    }

    /// All J-closed sieves on `a`.
    pub fn closed_sieves(&self, a: ObjId) -> Vec<ClosedSieve> {
        all_sieves(&self.cat, a)
            .into_iter()
            .filter(|&s| self.is_closed(a, s))
            .map(|arrows| ClosedSieve { base: a, arrows })
            .collect()
    }

    fn same_base(&self, base: ObjId, items: &[ClosedSieve]) -> Result<()> {
        match items.iter().find(|s| s.base != base) {
            Some(s) => Err(Error::TypeMismatch(format!(
                "sieve on {} mixed with sieves on {}",
                self.cat.object_name(s.base),
                self.cat.object_name(base)
            ))),
            None => Ok(()),
        }
    }

    pub fn heyting_top(&self, a: ObjId) -> ClosedSieve {
        ClosedSieve {
            base: a,
            arrows: self.top_sieve(a),
        }
    }

    pub fn heyting_bottom(&self, a: ObjId) -> ClosedSieve {
        ClosedSieve {
            base: a,
            arrows: self.bottom_sieve(a),
        }
    }

    /// Intersection of a family; the empty family gives top.
    pub fn heyting_meet_all(&self, base: ObjId, items: &[ClosedSieve]) -> Result<ClosedSieve> {
        self.same_base(base, items)?;
        let arrows = items
            .iter()
            .fold(self.top_sieve(base), |acc, s| acc.intersection(s.arrows));
        Ok(ClosedSieve { base, arrows })
    }

    /// `{f | f*(⋃ S_i) ∈ J(dom f)}`.
    pub fn heyting_join_all(&self, base: ObjId, items: &[ClosedSieve]) -> Result<ClosedSieve> {
        self.same_base(base, items)?;
        let union = items
            .iter()
            .fold(ArrowSet::EMPTY, |acc, s| acc.union(s.arrows));
        Ok(ClosedSieve {
            base,
            arrows: self.closure(base, union),
        })
    }

    pub fn heyting_meet(&self, a: &ClosedSieve, b: &ClosedSieve) -> Result<ClosedSieve> {
        self.heyting_meet_all(a.base, &[*a, *b])
    }

    pub fn heyting_join(&self, a: &ClosedSieve, b: &ClosedSieve) -> Result<ClosedSieve> {
        self.heyting_join_all(a.base, &[*a, *b])
    }

    /// `{f | f*(s0) ⊆ f*(s1)}`.
    pub fn heyting_impl(&self, s0: &ClosedSieve, s1: &ClosedSieve) -> Result<ClosedSieve> {
        self.same_base(s0.base, &[*s1])?;
        Ok(ClosedSieve {
            base: s0.base,
            arrows: self.impl_sieve(s0.base, s0.arrows, s1.arrows),
        })
    }

    pub fn heyting_neg(&self, s: &ClosedSieve) -> Result<ClosedSieve> {
        self.heyting_impl(s, &self.heyting_bottom(s.base))
    }

    pub(crate) fn impl_sieve(&self, a: ObjId, s0: ArrowSet, s1: ArrowSet) -> ArrowSet {
        self.cat
            .hom_into(a)
            .iter()
            .filter(|&f| pullback(&self.cat, s0, f).is_subset(pullback(&self.cat, s1, f)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::catalog;

    #[test]
    fn pullback_examples() {
        let s = catalog::two_trivial();
        let c = &s.cat;
        let u = c.arrow("u").unwrap();
        let b = c.object("B").unwrap();
        let a = c.object("A").unwrap();
        assert_eq!(
            pullback_sieve(c, b, ArrowSet::singleton(u), u).unwrap(),
            c.hom_into(a)
        );
        assert_eq!(pullback(c, c.hom_into(b), u), c.hom_into(a));
        assert_eq!(pullback(c, ArrowSet::EMPTY, u), ArrowSet::EMPTY);
        assert!(pullback_sieve(c, a, ArrowSet::EMPTY, u).is_err());
    }

    #[test]
    fn topology_examples() {
        let two = catalog::two_trivial();
        assert!(two.top.validate(&two.cat).is_empty());
        let jp = catalog::two_jprime();
        assert!(jp.top.validate(&jp.cat).is_empty());

        let c = &two.cat;
        let b = c.object("B").unwrap();
        let u = c.arrow("u").unwrap();
        let generated = Topology::generate(c, &[vec![], vec![ArrowSet::singleton(u)]]);
        assert_eq!(generated, jp.top);

        let mut bad = vec![vec![c.hom_into(c.object("A").unwrap())], vec![ArrowSet::singleton(u)]];
        bad[b.index()].retain(|&s| s != c.hom_into(b));
        assert!(Topology::explicit(bad).validate(c).mentions("maximality"));

        assert_eq!(Topology::generate(c, &[]), Topology::trivial(c));
    }

    #[test]
    fn empty_cover_forces_every_sieve() {
        let c = catalog::two_trivial().cat;
        let a = c.object("A").unwrap();
        let t = Topology::generate(&c, &[vec![ArrowSet::EMPTY], vec![]]);
        assert!(t.validate(&c).is_empty());
        assert_eq!(t.covers(a).len(), all_sieves(&c, a).len());
    }

    #[test]
    fn closed_sieve_counts() {
        let b = |s: &Site| s.cat.object("B").unwrap();
        let two = catalog::two_trivial();
        assert_eq!(two.closed_sieves(b(&two)).len(), 3);
        let jp = catalog::two_jprime();
        let omega = jp.closed_sieves(b(&jp));
        assert_eq!(omega.len(), 2);
        assert!(omega.iter().any(|s| s.arrows.is_empty()));
        let one = catalog::terminal();
        assert_eq!(one.closed_sieves(ObjId(0)).len(), 2);
    }

    #[test]
    fn heyting_examples() {
        let two = catalog::two_trivial();
        let b = two.cat.object("B").unwrap();
        let u = two.cat.arrow("u").unwrap();
        let su = ClosedSieve {
            base: b,
            arrows: ArrowSet::singleton(u),
        };
        let bot = two.heyting_bottom(b);
        assert!(bot.arrows.is_empty());
        assert_eq!(two.heyting_impl(&su, &bot).unwrap().arrows, ArrowSet::EMPTY);
        assert_eq!(two.heyting_meet(&two.heyting_top(b), &su).unwrap(), su);
        let other = two.heyting_top(two.cat.object("A").unwrap());
        assert!(two.heyting_meet(&su, &other).is_err());
    }
}
