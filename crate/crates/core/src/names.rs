//! Names over a finite site: atoms `Atom(k)` and restriction-closed sets of
//! `(name, arrow)` pairs, interned so that structural equality is identity.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use parking_lot::{Mutex, RwLock};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, FinCategory, ObjId};
use crate::hf::Hf;

/// Default cap on `|U_n(A)|`.
pub const DEFAULT_BUDGET: usize = 10_000;

/// The enumeration cap, overridable through `SHEAF_FORCING_BUDGET`.
pub fn default_budget() -> usize {
    std::env::var("SHEAF_FORCING_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NameId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NameData {
    /// `Atom(k)` lives at `dom k`.
    Atom { k: ArrowId },
    /// Entries `(f, name)` sorted, with `name` living at `dom f`.
    Set {
        obj: ObjId,
        entries: Box<[(ArrowId, NameId)]>,
    },
}

impl NameData {
    pub fn entries(&self) -> &[(ArrowId, NameId)] {
        match self {
            NameData::Atom { .. } => &[],
            NameData::Set { entries, .. } => entries,
        }
    }

    /// Entries whose arrow is `f`.
    pub fn entries_at(&self, f: ArrowId) -> impl Iterator<Item = NameId> + '_ {
        let e = self.entries();
        let start = e.partition_point(|&(g, _)| g < f);
        e[start..]
            .iter()
            .take_while(move |&&(g, _)| g == f)
            .map(|&(_, x)| x)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, NameData::Atom { .. })
    }
}

#[derive(Default)]
struct Inner {
    data: Vec<Arc<NameData>>,
    obj: Vec<ObjId>,
    index: FxHashMap<Arc<NameData>, NameId>,
    restrict: FxHashMap<(NameId, ArrowId), NameId>,
}

/// The interning table. Insertion is safe from several threads: equal
/// structure always yields the same id.
pub struct NameStore {
    cat: FinCategory,
    budget: usize,
    inner: RwLock<Inner>,
    universes: Mutex<HashMap<(ObjId, usize), Arc<Vec<NameId>>>>,
}

/// Name literal documents: `{"atom": "<arrow>"}` or
/// `{"set": [[<name>, "<arrow>"], ...], "autoclose": bool}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NameDoc {
    Atom {
        atom: String,
    },
    Set {
        set: Vec<(NameDoc, String)>,
        #[serde(default)]
        autoclose: bool,
    },
}

impl NameStore {
    pub fn new(cat: &FinCategory) -> Self {
        Self::with_budget(cat, default_budget())
    }

    pub fn with_budget(cat: &FinCategory, budget: usize) -> Self {
        NameStore {
            cat: cat.clone(),
            budget,
            inner: RwLock::new(Inner::default()),
            universes: Mutex::new(HashMap::new()),
        }
    }

    pub fn cat(&self) -> &FinCategory {
        &self.cat
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.inner.read().data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn intern(&self, obj: ObjId, d: NameData) -> NameId {
        if let Some(&id) = self.inner.read().index.get(&d) {
            return id;
        }
        let mut w = self.inner.write();
        if let Some(&id) = w.index.get(&d) {
            return id;
        }
        let id = NameId(w.data.len() as u32);
        let d = Arc::new(d);
        w.data.push(d.clone());
        w.obj.push(obj);
        w.index.insert(d, id);
        id
    }

    pub fn data(&self, a: NameId) -> Arc<NameData> {
        self.inner.read().data[a.0 as usize].clone()
    }

    /// The object the name lives at.
    pub fn obj(&self, a: NameId) -> ObjId {
        self.inner.read().obj[a.0 as usize]
    }

    pub fn is_atom(&self, a: NameId) -> bool {
        self.data(a).is_atom()
    }

    pub fn is_set(&self, a: NameId) -> bool {
        !self.is_atom(a)
    }

    pub fn atom(&self, k: ArrowId) -> NameId {
        self.intern(self.cat.dom(k), NameData::Atom { k })
    }

    /// The arrow of an atom.
    pub fn atom_arrow(&self, a: NameId) -> Option<ArrowId> {
        match *self.data(a) {
            NameData::Atom { k } => Some(k),
            NameData::Set { .. } => None,
        }
    }

    pub fn empty_set(&self, obj: ObjId) -> NameId {
        self.set_unchecked(obj, Vec::new())
    }

    pub(crate) fn set_unchecked(&self, obj: ObjId, mut entries: Vec<(ArrowId, NameId)>) -> NameId {
        entries.sort_unstable();
        entries.dedup();
        self.intern(
            obj,
            NameData::Set {
                obj,
                entries: entries.into_boxed_slice(),
            },
        )
    }

    fn check_entries(&self, obj: ObjId, entries: &[(ArrowId, NameId)]) -> Result<()> {
        for &(f, x) in entries {
            if self.cat.cod(f) != obj {
                return Err(Error::TypeMismatch(format!(
                    "entry arrow {} does not have codomain {}",
                    self.cat.arrow_name(f),
                    self.cat.object_name(obj)
                )));
            }
            if self.obj(x) != self.cat.dom(f) {
                return Err(Error::TypeMismatch(format!(
                    "entry name {} does not live at dom {} = {}",
                    self.display(x),
                    self.cat.arrow_name(f),
                    self.cat.object_name(self.cat.dom(f))
                )));
            }
        }
        Ok(())
    }

    /// A set name from explicit entries, which must already be closed.
    pub fn set(&self, obj: ObjId, entries: Vec<(ArrowId, NameId)>) -> Result<NameId> {
        self.check_entries(obj, &entries)?;
        let closed = self.close_name(obj, entries.clone())?;
        let id = self.set_unchecked(obj, entries);
        if id != closed {
            return Err(Error::Invalid(format!(
                "entries of {} are not closed under restriction",
                self.display(id)
            )));
        }
        Ok(id)
    }

    /// The least closed set name containing the generators.
    pub fn close_name(&self, obj: ObjId, gens: Vec<(ArrowId, NameId)>) -> Result<NameId> {
        self.check_entries(obj, &gens)?;
        let mut entries = Vec::with_capacity(gens.len() * 2);
        for (f, b) in gens {
            for g in self.cat.hom_into(self.cat.dom(f)).iter() {
                entries.push((self.cat.compose(f, g), self.res(b, g)));
            }
        }
        Ok(self.set_unchecked(obj, entries))
    }

    /// `a · f`, checked.
    pub fn restrict(&self, a: NameId, f: ArrowId) -> Result<NameId> {
        if self.cat.cod(f) != self.obj(a) {
            return Err(Error::TypeMismatch(format!(
                "cannot restrict a name at {} along {}",
                self.cat.object_name(self.obj(a)),
                self.cat.arrow_name(f)
            )));
        }
        Ok(self.res(a, f))
    }

    /// `a · f` for a well-typed pair.
    pub fn res(&self, a: NameId, f: ArrowId) -> NameId {
        if let Some(&r) = self.inner.read().restrict.get(&(a, f)) {
            return r;
        }
        debug_assert_eq!(self.cat.cod(f), self.obj(a));
        let r = if self.cat.is_identity(f) {
            a
        } else {
            match &*self.data(a) {
                NameData::Atom { k } => self.atom(self.cat.compose(*k, f)),
                d @ NameData::Set { .. } => {
                    let mut entries = Vec::new();
                    for g in self.cat.hom_into(self.cat.dom(f)).iter() {
                        let fg = self.cat.compose(f, g);
                        entries.extend(d.entries_at(fg).map(|y| (g, y)));
                    }
                    self.set_unchecked(self.cat.dom(f), entries)
                }
            }
        };
        self.inner.write().restrict.insert((a, f), r);
        r
    }

    /// Whether a set name satisfies the closure condition.
    pub fn is_closed(&self, a: NameId) -> bool {
        let d = self.data(a);
        d.entries().iter().all(|&(f, b)| {
            self.cat.hom_into(self.cat.dom(f)).iter().all(|g| {
                let fg = self.cat.compose(f, g);
                let bg = self.res(b, g);
                d.entries_at(fg).any(|x| x == bg)
            })
        })
    }

    /// `x̌^A = {(y̌^{dom f}, f) | y ∈ x, f into A}`.
    pub fn check_name(&self, obj: ObjId, x: &Hf) -> NameId {
        let mut entries = Vec::new();
        for f in self.cat.hom_into(obj).iter() {
            for y in x.elems() {
                entries.push((f, self.check_name(self.cat.dom(f), y)));
            }
        }
        self.set_unchecked(obj, entries)
    }

    /// `{(a·f, f)} ∪ {(b·f, f)}` over all `f` into `obj`.
    pub fn up(&self, obj: ObjId, a: NameId, b: NameId) -> NameId {
        let mut entries = Vec::new();
        for f in self.cat.hom_into(obj).iter() {
            entries.push((f, self.res(a, f)));
            entries.push((f, self.res(b, f)));
        }
        self.set_unchecked(obj, entries)
    }

    /// Kuratowski pair `up(up(a, a), up(a, b))`.
    pub fn op(&self, obj: ObjId, a: NameId, b: NameId) -> NameId {
        let s = self.up(obj, a, a);
        let t = self.up(obj, a, b);
        self.up(obj, s, t)
    }

    /// Recovers `(a, b)` from a name built by [`NameStore::op`].
    pub fn decode_op(&self, p: NameId) -> Option<(NameId, NameId)> {
        let obj = self.obj(p);
        let id = self.cat.identity(obj);
        let d = self.data(p);
        if d.is_atom() {
            return None;
        }
        let parts: Vec<NameId> = d.entries_at(id).collect();
        let members = |n: NameId| -> Vec<NameId> { self.data(n).entries_at(id).collect() };
        let (a, b) = match parts.as_slice() {
            [s] => {
                let m = members(*s);
                match m.as_slice() {
                    [x] => (*x, *x),
                    _ => return None,
                }
            }
            [s, t] => {
                let (ms, mt) = (members(*s), members(*t));
                let (single, double) = match (ms.len(), mt.len()) {
                    (1, 2) => (ms, mt),
                    (2, 1) => (mt, ms),
                    _ => return None,
                };
                let a = single[0];
                let b = *double.iter().find(|&&y| y != a)?;
                (a, b)
            }
            _ => return None,
        };
        (self.op(obj, a, b) == p).then_some((a, b))
    }

    /// The cumulative universe `U_n(obj)`: atoms, then every closed set name
    /// with entries drawn from `U_{n-1}` at the domains of arrows into `obj`.
    pub fn enumerate(&self, obj: ObjId, n: usize) -> Result<Arc<Vec<NameId>>> {
        if let Some(u) = self.universes.lock().get(&(obj, n)) {
            return Ok(u.clone());
        }
        let names = if n == 0 {
            self.cat
                .hom_out_of(obj)
                .iter()
                .map(|&k| self.atom(k))
                .collect()
        } else {
            self.enumerate_successor(obj, n)?
        };
        let names = Arc::new(names);
        self.universes.lock().insert((obj, n), names.clone());
        Ok(names)
    }

    fn over_budget(&self, obj: ObjId, n: usize) -> Error {
        Error::Budget(format!(
            "|U_{n}({})| exceeds {}",
            self.cat.object_name(obj),
            self.budget
        ))
    }

    fn enumerate_successor(&self, obj: ObjId, n: usize) -> Result<Vec<NameId>> {
        let mut cands: Vec<(ArrowId, NameId)> = Vec::new();
        let mut pos: FxHashMap<(ArrowId, NameId), usize> = FxHashMap::default();
        for f in self.cat.hom_into(obj).iter() {
            for &y in self.enumerate(self.cat.dom(f), n - 1)?.iter() {
                pos.insert((f, y), cands.len());
                cands.push((f, y));
            }
        }
        let k = cands.len();
        let mut down = vec![FixedBitSet::with_capacity(k); k];
        let mut up = vec![FixedBitSet::with_capacity(k); k];
        for (i, &(f, y)) in cands.iter().enumerate() {
            for g in self.cat.hom_into(self.cat.dom(f)).iter() {
                let j = *pos
                    .get(&(self.cat.compose(f, g), self.res(y, g)))
                    .expect("universe stages are closed under restriction");
                down[i].insert(j);
                up[j].insert(i);
            }
        }
        let previous = self.enumerate(obj, n - 1)?;
        let mut seen: FxHashMap<NameId, ()> = previous.iter().map(|&x| (x, ())).collect();
        let mut out: Vec<NameId> = previous.to_vec();
        for &k0 in self.cat.hom_out_of(obj) {
            let a = self.atom(k0);
            if seen.insert(a, ()).is_none() {
                out.push(a);
            }
        }
        let mut emit = |set: &FixedBitSet| -> Result<()> {
            let entries = set.ones().map(|i| cands[i]).collect();
            let id = self.set_unchecked(obj, entries);
            if seen.insert(id, ()).is_none() {
                out.push(id);
                if out.len() > self.budget {
                    return Err(self.over_budget(obj, n));
                }
            }
            Ok(())
        };
        let mut stack = vec![(FixedBitSet::with_capacity(k), FixedBitSet::with_capacity(k), 0usize)];
        while let Some((inc, exc, start)) = stack.pop() {
            let next = (start..k).find(|&i| !inc.contains(i) && !exc.contains(i));
            match next {
                None => emit(&inc)?,
                Some(i) => {
                    let mut e = exc.clone();
                    e.union_with(&up[i]);
                    stack.push((inc.clone(), e, i + 1));
                    let mut n_inc = inc;
                    n_inc.union_with(&down[i]);
                    stack.push((n_inc, exc, i + 1));
                }
            }
        }
        Ok(out)
    }

    pub fn from_doc(&self, obj: ObjId, doc: &NameDoc) -> Result<NameId> {
        match doc {
            NameDoc::Atom { atom } => {
                let k = self.cat.arrow(atom)?;
                if self.cat.dom(k) != obj {
                    return Err(Error::TypeMismatch(format!(
                        "atom arrow {atom} does not start at {}",
                        self.cat.object_name(obj)
                    )));
                }
                Ok(self.atom(k))
            }
            NameDoc::Set { set, autoclose } => {
                let mut entries = Vec::with_capacity(set.len());
                for (d, f) in set {
                    let f = self.cat.arrow(f)?;
                    if self.cat.cod(f) != obj {
                        return Err(Error::TypeMismatch(format!(
                            "entry arrow {} does not end at {}",
                            self.cat.arrow_name(f),
                            self.cat.object_name(obj)
                        )));
                    }
                    entries.push((f, self.from_doc(self.cat.dom(f), d)?));
                }
                if *autoclose {
                    self.close_name(obj, entries)
                } else {
                    self.set(obj, entries)
                }
            }
        }
    }

    pub fn parse_doc(&self, obj: ObjId, text: &str) -> Result<NameId> {
        let doc: NameDoc = serde_json::from_str(text)?;
        self.from_doc(obj, &doc)
    }

    pub fn to_doc(&self, a: NameId) -> NameDoc {
        match &*self.data(a) {
            NameData::Atom { k } => NameDoc::Atom {
                atom: self.cat.arrow_name(*k).to_string(),
            },
            NameData::Set { entries, .. } => NameDoc::Set {
                set: entries
                    .iter()
                    .map(|&(f, x)| (self.to_doc(x), self.cat.arrow_name(f).to_string()))
                    .collect(),
                autoclose: false,
            },
        }
    }

    /// Compact text form: `atom(k)` or `{(name, f), ...}`.
    pub fn display(&self, a: NameId) -> String {
        let mut s = String::new();
        self.write_name(a, &mut s);
        s
    }

    fn write_name(&self, a: NameId, out: &mut String) {
        match &*self.data(a) {
            NameData::Atom { k } => {
                let _ = write!(out, "atom({})", self.cat.arrow_name(*k));
            }
            NameData::Set { entries, .. } => {
                out.push('{');
                for (i, &(f, x)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push('(');
                    self.write_name(x, out);
                    let _ = write!(out, ", {})", self.cat.arrow_name(f));
                }
                out.push('}');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::catalog;

    fn two() -> (NameStore, ObjId, ObjId, ArrowId, ArrowId, ArrowId) {
        let c = catalog::two_category();
        let s = NameStore::new(&c);
        let (a, b) = (c.object("A").unwrap(), c.object("B").unwrap());
        let (ia, ib, u) = (c.arrow("id_A").unwrap(), c.arrow("id_B").unwrap(), c.arrow("u").unwrap());
        (s, a, b, ia, ib, u)
    }

    #[test]
    fn restriction_examples() {
        let (s, a, b, ia, ib, u) = two();
        assert_eq!(s.restrict(s.atom(ib), u).unwrap(), s.atom(u));
        assert_eq!(s.restrict(s.empty_set(b), u).unwrap(), s.empty_set(a));
        let bdot = s.set(b, vec![(u, s.atom(u))]).unwrap();
        let want = s.set(a, vec![(ia, s.atom(u))]).unwrap();
        assert_eq!(s.restrict(bdot, u).unwrap(), want);
        assert!(s.restrict(bdot, ia).is_err());
    }

    #[test]
    fn closure_examples() {
        let (s, a, b, ia, ib, u) = two();
        assert_eq!(s.close_name(b, vec![]).unwrap(), s.empty_set(b));
        let g = vec![(u, s.atom(ia))];
        assert_eq!(s.close_name(b, g.clone()).unwrap(), s.set_unchecked(b, g));
        let e = Hf::empty();
        let closed = s.close_name(b, vec![(ib, s.check_name(b, &e))]).unwrap();
        assert_eq!(
            closed,
            s.set_unchecked(b, vec![(ib, s.check_name(b, &e)), (u, s.check_name(a, &e))])
        );
        assert!(s.set(b, vec![(ib, s.atom(ib))]).is_err());
        assert!(s.close_name(b, vec![(ia, s.atom(ia))]).is_err());
    }

    #[test]
    fn check_name_examples() {
        let (s, a, b, _ia, ib, u) = two();
        let one = Hf::numeral(1);
        let e = Hf::empty();
        let want = s.set_unchecked(b, vec![(ib, s.check_name(b, &e)), (u, s.check_name(a, &e))]);
        assert_eq!(s.check_name(b, &one), want);
        assert_eq!(s.res(s.check_name(b, &one), u), s.check_name(a, &one));
        let t = catalog::terminal_category();
        let st = NameStore::new(&t);
        assert_eq!(st.check_name(ObjId(0), &e), st.empty_set(ObjId(0)));
    }

    #[test]
    fn universe_sizes_on_two() {
        let (s, a, b, _, _, _) = two();
        assert_eq!(s.enumerate(b, 0).unwrap().len(), 1);
        assert_eq!(s.enumerate(a, 0).unwrap().len(), 2);
        assert_eq!(s.enumerate(a, 1).unwrap().len(), 6);
        assert_eq!(s.enumerate(b, 1).unwrap().len(), 7);
        assert_eq!(s.enumerate(a, 2).unwrap().len(), 66);
        assert_eq!(s.enumerate(b, 2).unwrap().len(), 1351);
        for n in 0..2 {
            let lo = s.enumerate(b, n).unwrap();
            let hi = s.enumerate(b, n + 1).unwrap();
            assert!(lo.iter().all(|x| hi.contains(x)));
        }
        assert!(s.enumerate(b, 2).unwrap().iter().all(|&x| s.is_closed(x)));
    }

    #[test]
    fn budget_is_enforced() {
        let c = catalog::two_category();
        let s = NameStore::with_budget(&c, 100);
        let b = c.object("B").unwrap();
        assert!(matches!(s.enumerate(b, 2), Err(Error::Budget(_))));
    }

    #[test]
    fn pairs_decode() {
        let (s, a, b, ia, ib, _u) = two();
        let x = s.check_name(b, &Hf::numeral(1));
        let y = s.atom(ib);
        let p = s.op(b, x, y);
        assert_eq!(s.decode_op(p), Some((x, y)));
        assert_eq!(s.decode_op(s.op(b, y, y)), Some((y, y)));
        assert_eq!(s.decode_op(s.atom(ia)), None);
        let up = s.up(a, s.atom(ia), s.atom(ia));
        assert_eq!(s.data(up).entries().len(), 1);
    }

    #[test]
    fn documents_round_trip() {
        let (s, _a, b, _ia, _ib, _u) = two();
        let x = s.check_name(b, &Hf::numeral(2));
        let doc = serde_json::to_string(&s.to_doc(x)).unwrap();
        assert_eq!(s.parse_doc(b, &doc).unwrap(), x);
        let partial = r#"{"set": [[{"set": []}, "id_B"]], "autoclose": true}"#;
        assert_eq!(s.parse_doc(b, partial).unwrap(), s.check_name(b, &Hf::numeral(1)));
        let unclosed = r#"{"set": [[{"set": []}, "id_B"]]}"#;
        assert!(s.parse_doc(b, unclosed).is_err());
        assert!(s.parse_doc(b, r#"{"atom": "u"}"#).is_err());
    }
}
