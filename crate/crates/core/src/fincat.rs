//! Finite categories given by explicit composition tables, together with
//! finite presheaves and natural transformations between them.
//!
//! Objects and arrows are interned as small indices; their string names are
//! kept for I/O. Composition is stored densely: `comp(f, g)` is `f ∘ g`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Hard limit on arrows per category; arrow sets are 64-bit masks.
pub const MAX_ARROWS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowId(pub u16);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ArrowId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of arrows as a bit mask over arrow indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowSet(pub u64);

impl ArrowSet {
    pub const EMPTY: ArrowSet = ArrowSet(0);

    pub fn singleton(f: ArrowId) -> Self {
        ArrowSet(1 << f.0)
    }

    pub fn contains(self, f: ArrowId) -> bool {
        self.0 >> f.0 & 1 == 1
    }

    pub fn insert(&mut self, f: ArrowId) {
        self.0 |= 1 << f.0;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: ArrowSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ArrowSet) -> Self {
        ArrowSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ArrowSet) -> Self {
        ArrowSet(self.0 & other.0)
    }

    pub fn difference(self, other: ArrowSet) -> Self {
        ArrowSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = ArrowId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(ArrowId(i as u16))
        })
    }
}

impl FromIterator<ArrowId> for ArrowSet {
    fn from_iter<I: IntoIterator<Item = ArrowId>>(iter: I) -> Self {
        let mut s = ArrowSet::EMPTY;
        for f in iter {
            s.insert(f);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// A single broken law found by one of the validators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: &'static str,
    pub detail: String,
}

/// Violations are data: an empty report means the structure is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: &'static str, detail: impl Into<String>) {
        self.violations.push(Violation {
            law,
            detail: detail.into(),
        });
    }

    pub fn mentions(&self, law: &str) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "violation {}: {}", v.law, v.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    /// `comp[f * n + g] = f ∘ g` as given in the input table.
    comp: Vec<Option<ArrowId>>,
    /// Entries that were given more than once with different results.
    conflicts: Vec<(ArrowId, ArrowId)>,
    identities: Vec<Option<ArrowId>>,
    into: Vec<ArrowSet>,
    out_of: Vec<Vec<ArrowId>>,
    obj_index: HashMap<String, ObjId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl FinCategory {
    /// Builds a category from names and an explicit composition table of
    /// triples `(f, g, h)` meaning `f ∘ g = h`. Only referential integrity is
    /// checked here; the category laws are checked by [`FinCategory::validate`].
    pub fn new(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        composition: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
    ) -> Result<Self> {
        let objects: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let arrows: Vec<(String, String, String)> = arrows
            .iter()
            .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
            .collect();
        let composition: Vec<(String, String, String)> = composition
            .iter()
            .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
            .collect();
        let identities: Vec<(String, String)> = identities
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        Self::from_owned(objects, arrows, composition, identities)
    }

    pub fn from_owned(
        objects: Vec<String>,
        arrows: Vec<(String, String, String)>,
        composition: Vec<(String, String, String)>,
        identities: Vec<(String, String)>,
    ) -> Result<Self> {
        if objects.len() > u16::MAX as usize {
            return Err(Error::Invalid("too many objects".into()));
        }
        if arrows.len() > MAX_ARROWS {
            return Err(Error::Invalid(format!(
                "{} arrows exceeds the limit of {MAX_ARROWS}",
                arrows.len()
            )));
        }
        let mut obj_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), ObjId(i as u16)).is_some() {
                return Err(Error::Invalid(format!("duplicate object '{o}'")));
            }
        }
        let obj = |name: &str| {
            obj_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownObject(name.to_string()))
        };
        let mut arrow_index = HashMap::new();
        let mut arrow_list = Vec::with_capacity(arrows.len());
        for (i, (name, dom, cod)) in arrows.iter().enumerate() {
            if arrow_index.insert(name.clone(), ArrowId(i as u16)).is_some() {
                return Err(Error::Invalid(format!("duplicate arrow '{name}'")));
            }
            arrow_list.push(Arrow {
                name: name.clone(),
                dom: obj(dom)?,
                cod: obj(cod)?,
            });
        }
        let arrow = |name: &str| {
            arrow_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownArrow(name.to_string()))
        };
        let n = arrow_list.len();
        let mut comp = vec![None; n * n];
        let mut conflicts = Vec::new();
        for (f, g, h) in &composition {
            let (f, g, h) = (arrow(f)?, arrow(g)?, arrow(h)?);
            let slot = &mut comp[f.index() * n + g.index()];
            match slot {
                Some(prev) if *prev != h => conflicts.push((f, g)),
                _ => *slot = Some(h),
            }
        }
        let mut ids = vec![None; objects.len()];
        for (o, a) in &identities {
            ids[obj(o)?.index()] = Some(arrow(a)?);
        }
        let mut into = vec![ArrowSet::EMPTY; objects.len()];
        let mut out_of = vec![Vec::new(); objects.len()];
        for (i, a) in arrow_list.iter().enumerate() {
            into[a.cod.index()].insert(ArrowId(i as u16));
            out_of[a.dom.index()].push(ArrowId(i as u16));
        }
        Ok(FinCategory {
            objects,
            arrows: arrow_list,
            comp,
            conflicts,
            identities: ids,
            into,
            out_of,
            obj_index,
            arrow_index,
        })
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(|i| ObjId(i as u16))
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).map(|i| ArrowId(i as u16))
    }

    pub fn object_name(&self, a: ObjId) -> &str {
        &self.objects[a.index()]
    }

    pub fn arrow_name(&self, f: ArrowId) -> &str {
        &self.arrows[f.index()].name
    }

    pub fn object(&self, name: &str) -> Result<ObjId> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn dom(&self, f: ArrowId) -> ObjId {
        self.arrows[f.index()].dom
    }

    pub fn cod(&self, f: ArrowId) -> ObjId {
        self.arrows[f.index()].cod
    }

    /// `f ∘ g`, if the table defines it.
    pub fn try_compose(&self, f: ArrowId, g: ArrowId) -> Option<ArrowId> {
        self.comp[f.index() * self.arrows.len() + g.index()]
    }

    /// `f ∘ g` for a validated category; panics on a non-composable pair.
    pub fn compose(&self, f: ArrowId, g: ArrowId) -> ArrowId {
        self.try_compose(f, g).unwrap_or_else(|| {
            panic!(
                "composite {} ∘ {} is not defined",
                self.arrow_name(f),
                self.arrow_name(g)
            )
        })
    }

    pub fn identity(&self, a: ObjId) -> ArrowId {
        self.identities[a.index()].expect("validated category has all identities")
    }

    pub fn is_identity(&self, f: ArrowId) -> bool {
        self.identities[self.dom(f).index()] == Some(f)
    }

    /// Every arrow with codomain `a`, i.e. `Hom(any, a)`.
    pub fn hom_into(&self, a: ObjId) -> ArrowSet {
        self.into[a.index()]
    }

    /// Every arrow with domain `a`, i.e. `Hom(a, any)`.
    pub fn hom_out_of(&self, a: ObjId) -> &[ArrowId] {
        &self.out_of[a.index()]
    }

    pub fn hom(&self, from: ObjId, to: ObjId) -> impl Iterator<Item = ArrowId> + '_ {
        self.into[to.index()]
            .iter()
            .filter(move |&f| self.dom(f) == from)
    }

    /// Arrow names as a sorted list, used for serializing arrow sets.
    pub fn arrow_names(&self, s: ArrowSet) -> Vec<String> {
        let mut v: Vec<String> = s.iter().map(|f| self.arrow_name(f).to_string()).collect();
        v.sort();
        v
    }

    pub fn parse_arrow_set(&self, names: &[String]) -> Result<ArrowSet> {
        names.iter().map(|n| self.arrow(n)).collect()
    }

    /// Checks identities, typing of the composition table, totality on
    /// composable pairs, both unit laws and associativity.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        for (f, g) in &self.conflicts {
            r.push(
                "composition-functional",
                format!(
                    "{} ∘ {} is given more than one value",
                    self.arrow_name(*f),
                    self.arrow_name(*g)
                ),
            );
        }
        for a in self.objects() {
            match self.identities[a.index()] {
                None => r.push(
                    "identity-exists",
                    format!("object {} has no identity arrow", self.object_name(a)),
                ),
                Some(i) if self.dom(i) != a || self.cod(i) != a => r.push(
                    "identity-typing",
                    format!(
                        "identity {} of {} is not an endomorphism of it",
                        self.arrow_name(i),
                        self.object_name(a)
                    ),
                ),
                _ => {}
            }
        }
        for f in self.arrows() {
            for g in self.arrows() {
                let composable = self.cod(g) == self.dom(f);
                match (composable, self.try_compose(f, g)) {
                    (true, None) => r.push(
                        "composition-total",
                        format!(
                            "{} ∘ {} is missing from the table",
                            self.arrow_name(f),
                            self.arrow_name(g)
                        ),
                    ),
                    (false, Some(_)) => r.push(
                        "composition-typing",
                        format!(
                            "{} ∘ {} is given but cod {} ≠ dom {}",
                            self.arrow_name(f),
                            self.arrow_name(g),
                            self.arrow_name(g),
                            self.arrow_name(f)
                        ),
                    ),
                    (true, Some(h)) => {
                        if self.dom(h) != self.dom(g) || self.cod(h) != self.cod(f) {
                            r.push(
                                "composition-typing",
                                format!(
                                    "{} ∘ {} = {} has the wrong domain or codomain",
                                    self.arrow_name(f),
                                    self.arrow_name(g),
                                    self.arrow_name(h)
                                ),
                            );
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for f in self.arrows() {
            let (Some(id_dom), Some(id_cod)) = (
                self.identities[self.dom(f).index()],
                self.identities[self.cod(f).index()],
            ) else {
                continue;
            };
            if let Some(h) = self.try_compose(f, id_dom) {
                if h != f {
                    r.push(
                        "right-unit",
                        format!(
                            "{} ∘ {} = {} instead of {}",
                            self.arrow_name(f),
                            self.arrow_name(id_dom),
                            self.arrow_name(h),
                            self.arrow_name(f)
                        ),
                    );
                }
            }
            if let Some(h) = self.try_compose(id_cod, f) {
                if h != f {
                    r.push(
                        "left-unit",
                        format!(
                            "{} ∘ {} = {} instead of {}",
                            self.arrow_name(id_cod),
                            self.arrow_name(f),
                            self.arrow_name(h),
                            self.arrow_name(f)
                        ),
                    );
                }
            }
        }
        for f in self.arrows() {
            for g in self.arrows() {
                let Some(fg) = self.try_compose(f, g) else {
                    continue;
                };
                for h in self.arrows() {
                    let Some(gh) = self.try_compose(g, h) else {
                        continue;
                    };
                    let left = self.try_compose(fg, h);
                    let right = self.try_compose(f, gh);
                    if left.is_some() && right.is_some() && left != right {
                        r.push(
                            "associativity",
                            format!(
                                "({} ∘ {}) ∘ {} ≠ {} ∘ ({} ∘ {})",
                                self.arrow_name(f),
                                self.arrow_name(g),
                                self.arrow_name(h),
                                self.arrow_name(f),
                                self.arrow_name(g),
                                self.arrow_name(h)
                            ),
                        );
                    }
                }
            }
        }
        r
    }
}

/// A presheaf with finite value sets. Elements are opaque labels; actions
/// are stored by index: `actions[f][i]` is the index in `values[dom f]` of
/// the image of element `i` of `values[cod f]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafFin {
    pub values: Vec<Vec<String>>,
    pub actions: Vec<Vec<usize>>,
}

impl PresheafFin {
    pub fn new(values: Vec<Vec<String>>, actions: Vec<Vec<usize>>) -> Self {
        PresheafFin { values, actions }
    }

    /// The presheaf with the same singleton set at every object.
    pub fn constant_singleton(cat: &FinCategory) -> Self {
        PresheafFin {
            values: vec![vec!["*".to_string()]; cat.num_objects()],
            actions: vec![vec![0]; cat.num_arrows()],
        }
    }

    /// `Hom(−, b)`, acting by precomposition.
    pub fn representable(cat: &FinCategory, b: ObjId) -> Self {
        let mut index: HashMap<ArrowId, usize> = HashMap::new();
        let mut values = vec![Vec::new(); cat.num_objects()];
        let mut by_obj: Vec<Vec<ArrowId>> = vec![Vec::new(); cat.num_objects()];
        for g in cat.hom_into(b).iter() {
            let x = cat.dom(g);
            index.insert(g, by_obj[x.index()].len());
            by_obj[x.index()].push(g);
            values[x.index()].push(cat.arrow_name(g).to_string());
        }
        let actions = cat
            .arrows()
            .map(|f| {
                by_obj[cat.cod(f).index()]
                    .iter()
                    .map(|&g| index[&cat.compose(g, f)])
                    .collect()
            })
            .collect();
        PresheafFin { values, actions }
    }

    pub fn size(&self, a: ObjId) -> usize {
        self.values[a.index()].len()
    }

    pub fn act(&self, f: ArrowId, x: usize) -> usize {
        self.actions[f.index()][x]
    }

    /// Typing of every action plus the two functor laws, pointwise.
    pub fn validate(&self, cat: &FinCategory) -> ValidationReport {
        let mut r = ValidationReport::default();
        if self.values.len() != cat.num_objects() || self.actions.len() != cat.num_arrows() {
            r.push(
                "presheaf-shape",
                "value or action table does not match the category",
            );
            return r;
        }
        let mut typed = true;
        for f in cat.arrows() {
            let src = self.size(cat.cod(f));
            let dst = self.size(cat.dom(f));
            let act = &self.actions[f.index()];
            if act.len() != src || act.iter().any(|&y| y >= dst) {
                typed = false;
                r.push(
                    "presheaf-typing",
                    format!(
                        "action of {} is not a function from P({}) to P({})",
                        cat.arrow_name(f),
                        cat.object_name(cat.cod(f)),
                        cat.object_name(cat.dom(f))
                    ),
                );
            }
        }
        if !typed {
            return r;
        }
        for a in cat.objects() {
            let id = cat.identity(a);
            for x in 0..self.size(a) {
                if self.act(id, x) != x {
                    r.push(
                        "presheaf-identity",
                        format!(
                            "P({}) moves element {}",
                            cat.arrow_name(id),
                            self.values[a.index()][x]
                        ),
                    );
                }
            }
        }
        for f in cat.arrows() {
            for g in cat.arrows() {
                let Some(fg) = cat.try_compose(f, g) else {
                    continue;
                };
                for x in 0..self.size(cat.cod(f)) {
                    if self.act(fg, x) != self.act(g, self.act(f, x)) {
                        r.push(
                            "presheaf-composition",
                            format!(
                                "P({} ∘ {}) ≠ P({}) ∘ P({}) at {}",
                                cat.arrow_name(f),
                                cat.arrow_name(g),
                                cat.arrow_name(g),
                                cat.arrow_name(f),
                                self.values[cat.cod(f).index()][x]
                            ),
                        );
                    }
                }
            }
        }
        r
    }
}

/// A natural transformation between finite presheaves, by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransFin {
    pub components: Vec<Vec<usize>>,
}

impl NatTransFin {
    pub fn identity(p: &PresheafFin) -> Self {
        NatTransFin {
            components: p.values.iter().map(|v| (0..v.len()).collect()).collect(),
        }
    }

    pub fn apply(&self, a: ObjId, x: usize) -> usize {
        self.components[a.index()][x]
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &NatTransFin) -> NatTransFin {
        NatTransFin {
            components: other
                .components
                .iter()
                .zip(&self.components)
                .map(|(inner, outer)| inner.iter().map(|&x| outer[x]).collect())
                .collect(),
        }
    }

    pub fn validate(
        &self,
        cat: &FinCategory,
        source: &PresheafFin,
        target: &PresheafFin,
    ) -> ValidationReport {
        let mut r = ValidationReport::default();
        if self.components.len() != cat.num_objects() {
            r.push("transformation-shape", "wrong number of components");
            return r;
        }
        for a in cat.objects() {
            let c = &self.components[a.index()];
            if c.len() != source.size(a) || c.iter().any(|&y| y >= target.size(a)) {
                r.push(
                    "transformation-typing",
                    format!("component at {} is not a function", cat.object_name(a)),
                );
            }
        }
        if !r.is_empty() {
            return r;
        }
        for f in cat.arrows() {
            let (a, b) = (cat.dom(f), cat.cod(f));
            for x in 0..source.size(b) {
                if target.act(f, self.apply(b, x)) != self.apply(a, source.act(f, x)) {
                    r.push(
                        "naturality",
                        format!(
                            "square for {} fails at {}",
                            cat.arrow_name(f),
                            source.values[b.index()][x]
                        ),
                    );
                }
            }
        }
        r
    }
}
