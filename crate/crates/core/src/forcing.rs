//! The forcing relation `A ⊩ φ` and truth-value sieves `‖φ‖_A`.
//!
//! Atomic clauses recurse on name structure and are exact. Unbounded
//! quantifiers range over the names of `U_n(dom f)`, one representative per
//! forcing-equality class, so their verdicts are relative to the rank `n`.
//! Bounded quantifiers range over the entries of the bounding name and are
//! exact.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, ArrowSet, ObjId};
use crate::formula::{fresh_var, Formula};
use crate::hf::{self, Hf};
use crate::names::{NameData, NameId, NameStore};
use crate::sieve::{ClosedSieve, Site};

/// Default number of evaluation steps allowed per query.
pub const DEFAULT_STEP_LIMIT: u64 = 400_000_000;

const NODE_MEMO_CAP: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scope {
    Exact,
    /// Relative to the quantifier search rank.
    Rank(usize),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Exact => write!(f, "exact"),
            Scope::Rank(n) => write!(f, "rank:{n}"),
        }
    }
}

impl Serialize for Scope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How a truncated evaluation relates to the untruncated relation.
///
/// `Under` means a true answer is certain, `Over` means a false answer is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Approx {
    Exact,
    Under,
    Over,
    Unknown,
}

impl Approx {
    pub fn of(phi: &Formula) -> Approx {
        match phi {
            Formula::IsAtom(_) | Formula::IsSet(_) | Formula::Eq(..) | Formula::Mem(..) => {
                Approx::Exact
            }
            Formula::And(p, q) | Formula::Or(p, q) => Approx::of(p).meet(Approx::of(q)),
            Formula::Implies(p, q) => Approx::of(p).flip().meet(Approx::of(q)),
            Formula::Not(p) => Approx::of(p).flip(),
            Formula::Forall(_, p) => Approx::Over.meet(Approx::of(p)),
            Formula::Exists(_, p) => Approx::Under.meet(Approx::of(p)),
            Formula::BForall(_, _, p) | Formula::BExists(_, _, p) => Approx::of(p),
        }
    }

    fn flip(self) -> Approx {
        match self {
            Approx::Under => Approx::Over,
            Approx::Over => Approx::Under,
            other => other,
        }
    }

    fn meet(self, other: Approx) -> Approx {
        match (self, other) {
            (Approx::Exact, x) | (x, Approx::Exact) => x,
            (x, y) if x == y => x,
            _ => Approx::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub value: bool,
    pub scope: Scope,
    #[serde(skip)]
    pub approx: Approx,
}

impl Verdict {
    /// Whether the answer holds for the untruncated relation as well.
    pub fn is_sound(&self) -> bool {
        matches!(
            (self.value, self.approx),
            (_, Approx::Exact) | (true, Approx::Under) | (false, Approx::Over)
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", if self.value { "forced" } else { "not forced" }, self.scope)
    }
}

/// Variable assignment; all names live at one object.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Env {
    vars: BTreeMap<String, NameId>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn bind(mut self, var: &str, a: NameId) -> Self {
        self.vars.insert(var.to_string(), a);
        self
    }

    pub fn insert(&mut self, var: &str, a: NameId) {
        self.vars.insert(var.to_string(), a);
    }

    pub fn get(&self, var: &str) -> Option<NameId> {
        self.vars.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, NameId)> {
        self.vars.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// `env · f`
    pub fn restrict(&self, store: &NameStore, f: ArrowId) -> Result<Env> {
        let vars = self
            .vars
            .iter()
            .map(|(k, &v)| Ok((k.clone(), store.restrict(v, f)?)))
            .collect::<Result<_>>()?;
        Ok(Env { vars })
    }

    fn check(&self, store: &NameStore, obj: ObjId) -> Result<()> {
        for (k, &v) in &self.vars {
            if store.obj(v) != obj {
                return Err(Error::TypeMismatch(format!(
                    "{k} is bound to a name at {}, expected {}",
                    store.cat().object_name(store.obj(v)),
                    store.cat().object_name(obj)
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of comparing a bounded formula in the real universe with its
/// forced truth value on check names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Delta0Outcome {
    pub v_truth: bool,
    pub sieve: ClosedSieve,
}

impl Delta0Outcome {
    /// `‖φ‖` is top when `φ` holds and bottom when it fails.
    pub fn agrees(&self, site: &Site) -> bool {
        let want = if self.v_truth {
            site.top_sieve(self.sieve.base)
        } else {
            site.bottom_sieve(self.sieve.base)
        };
        self.sieve.arrows == want
    }
}

type Slot = u16;
type NodeId = u32;

#[derive(Clone, Copy, Debug)]
enum Node {
    IsAtom(Slot),
    IsSet(Slot),
    Eq(Slot, Slot),
    Mem(Slot, Slot),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Implies(NodeId, NodeId),
    Not(NodeId),
    Forall(NodeId),
    /// Body, and the comprehension condition when the body has that shape.
    Exists(NodeId, Option<NodeId>),
    BForall(Slot, NodeId),
    BExists(Slot, NodeId),
}

/// A formula flattened into an arena. Variables are slots counted from the
/// outside in, so a quantifier at depth `d` binds slot `d`.
struct Compiled {
    id: u32,
    nodes: Vec<Node>,
    free: Vec<SmallVec<[Slot; 4]>>,
    root: NodeId,
}

struct Builder {
    nodes: Vec<Node>,
    free: Vec<SmallVec<[Slot; 4]>>,
}

impl Builder {
    fn push(&mut self, node: Node, mut free: SmallVec<[Slot; 4]>) -> NodeId {
        free.sort_unstable();
        free.dedup();
        self.nodes.push(node);
        self.free.push(free);
        (self.nodes.len() - 1) as NodeId
    }

    fn slot(scope: &[String], v: &str) -> Result<Slot> {
        scope
            .iter()
            .rposition(|s| s == v)
            .map(|i| i as Slot)
            .ok_or_else(|| Error::Unbound(v.to_string()))
    }

    fn bound_free(&self, body: NodeId, depth: usize) -> SmallVec<[Slot; 4]> {
        self.free[body as usize]
            .iter()
            .copied()
            .filter(|&s| (s as usize) < depth)
            .collect()
    }

    fn compile(&mut self, phi: &Formula, scope: &mut Vec<String>) -> Result<NodeId> {
        use smallvec::smallvec;
        Ok(match phi {
            Formula::IsAtom(x) => {
                let s = Self::slot(scope, x)?;
                self.push(Node::IsAtom(s), smallvec![s])
            }
            Formula::IsSet(x) => {
                let s = Self::slot(scope, x)?;
                self.push(Node::IsSet(s), smallvec![s])
            }
            Formula::Eq(x, y) => {
                let (s, t) = (Self::slot(scope, x)?, Self::slot(scope, y)?);
                self.push(Node::Eq(s, t), smallvec![s, t])
            }
            Formula::Mem(x, y) => {
                let (s, t) = (Self::slot(scope, x)?, Self::slot(scope, y)?);
                self.push(Node::Mem(s, t), smallvec![s, t])
            }
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) => {
                let (a, b) = (self.compile(p, scope)?, self.compile(q, scope)?);
                let free = self.free[a as usize]
                    .iter()
                    .chain(&self.free[b as usize])
                    .copied()
                    .collect();
                let node = match phi {
                    Formula::And(..) => Node::And(a, b),
                    Formula::Or(..) => Node::Or(a, b),
                    _ => Node::Implies(a, b),
                };
                self.push(node, free)
            }
            Formula::Not(p) => {
                let a = self.compile(p, scope)?;
                let free = self.free[a as usize].clone();
                self.push(Node::Not(a), free)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let depth = scope.len();
                scope.push(x.clone());
                let b = self.compile(body, scope);
                scope.pop();
                let b = b?;
                let free = self.bound_free(b, depth);
                if matches!(phi, Formula::Forall(..)) {
                    return Ok(self.push(Node::Forall(b), free));
                }
                let synth = match comprehension(x, body) {
                    Some((w, psi)) => {
                        scope.push(x.clone());
                        scope.push(w.to_string());
                        let c = self.compile(psi, scope);
                        scope.truncate(depth);
                        Some(c?)
                    }
                    None => None,
                };
                self.push(Node::Exists(b, synth), free)
            }
            Formula::BForall(x, t, body) | Formula::BExists(x, t, body) => {
                let st = Self::slot(scope, t)?;
                let depth = scope.len();
                scope.push(x.clone());
                let b = self.compile(body, scope);
                scope.pop();
                let b = b?;
                let mut free = self.bound_free(b, depth);
                free.push(st);
                let node = if matches!(phi, Formula::BForall(..)) {
                    Node::BForall(st, b)
                } else {
                    Node::BExists(st, b)
                };
                self.push(node, free)
            }
        })
    }
}

/// Recognises `[z : set and] forall w . ((w in z -> ψ) and (ψ -> w in z))`
/// with `z` not free in `ψ`, returning `w` and `ψ`.
fn comprehension<'f>(z: &str, body: &'f Formula) -> Option<(&'f str, &'f Formula)> {
    let inner = match body {
        Formula::And(l, r) if matches!(&**l, Formula::IsSet(v) if v == z) => &**r,
        other => other,
    };
    let Formula::Forall(w, conj) = inner else {
        return None;
    };
    if w == z {
        return None;
    }
    let Formula::And(l, r) = &**conj else {
        return None;
    };
    let (Formula::Implies(m1, p1), Formula::Implies(p2, m2)) = (&**l, &**r) else {
        return None;
    };
    let m = Formula::mem(w, z);
    (**m1 == m && **m2 == m && p1 == p2 && !p1.free_vars().contains(z)).then_some((w.as_str(), &**p1))
}

/// Equivalence classes of `U_n(A)` under forced equality at `A`.
struct ClassTable {
    class_of: FxHashMap<NameId, u32>,
    reps: Arc<Vec<NameId>>,
}

type MemoKey = (u32, NodeId, ObjId, SmallVec<[NameId; 4]>);

/// Evaluator for one site and one name store. Memo tables live as long as
/// the evaluator; separate evaluators may run on separate threads.
pub struct Forcer<'a> {
    site: &'a Site,
    store: &'a NameStore,
    rank: usize,
    use_classes: bool,
    synthesize: bool,
    step_limit: u64,
    steps: u64,
    eq_memo: FxHashMap<(NameId, NameId), bool>,
    mem_memo: FxHashMap<(NameId, NameId), bool>,
    node_memo: FxHashMap<MemoKey, bool>,
    compiled: FxHashMap<(Formula, Vec<String>), Arc<Compiled>>,
    classes: Vec<Option<ClassTable>>,
    computing: Vec<bool>,
}

impl<'a> Forcer<'a> {
    pub fn new(site: &'a Site, store: &'a NameStore, rank: usize) -> Self {
        assert_eq!(
            site.cat.num_arrows(),
            store.cat().num_arrows(),
            "name store built over a different category"
        );
        let n = site.cat.num_objects();
        Forcer {
            site,
            store,
            rank,
            use_classes: true,
            synthesize: true,
            step_limit: DEFAULT_STEP_LIMIT,
            steps: 0,
            eq_memo: FxHashMap::default(),
            mem_memo: FxHashMap::default(),
            node_memo: FxHashMap::default(),
            compiled: FxHashMap::default(),
            classes: (0..n).map(|_| None).collect(),
            computing: vec![false; n],
        }
    }

    /// Quantify over every name of `U_n` and decide atomic formulas without
    /// the class table. Slower; useful when checking the equality laws
    /// themselves.
    pub fn plain(mut self) -> Self {
        self.use_classes = false;
        self.synthesize = false;
        self
    }

    pub fn with_step_limit(mut self, limit: u64) -> Self {
        self.step_limit = limit;
        self
    }

    /// Toggle trying the comprehension witness before searching `U_n`.
    pub fn with_synthesis(mut self, on: bool) -> Self {
        self.synthesize = on;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn site(&self) -> &'a Site {
        self.site
    }

    pub fn store(&self) -> &'a NameStore {
        self.store
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.step_limit {
            return Err(Error::Budget(format!(
                "more than {} evaluation steps",
                self.step_limit
            )));
        }
        Ok(())
    }

    fn degenerate(&self, a: ObjId) -> bool {
        self.site.degenerate(a)
    }

    fn restrict_env(&self, env: &[NameId], f: ArrowId) -> Vec<NameId> {
        if self.site.cat.is_identity(f) {
            return env.to_vec();
        }
        env.iter().map(|&x| self.store.res(x, f)).collect()
    }

    // ---- atomic clauses ----

    fn eq(&mut self, a: NameId, b: NameId) -> Result<bool> {
        let obj = self.store.obj(a);
        if self.degenerate(obj) {
            return Ok(true);
        }
        if let Some(&v) = self.eq_memo.get(&(a, b)) {
            return Ok(v);
        }
        if self.use_classes {
            if let Some(t) = &self.classes[obj.index()] {
                if let (Some(x), Some(y)) = (t.class_of.get(&a), t.class_of.get(&b)) {
                    return Ok(x == y);
                }
            }
        }
        self.tick()?;
        let site = self.site;
        let cat = &site.cat;
        let (da, db) = (self.store.data(a), self.store.data(b));
        let v = match (&*da, &*db) {
            (NameData::Atom { k }, NameData::Atom { k: l }) => {
                let agree: ArrowSet = cat
                    .hom_into(obj)
                    .iter()
                    .filter(|&f| cat.compose(*k, f) == cat.compose(*l, f))
                    .collect();
                self.site.top.has_cover_within(obj, agree)
            }
            (NameData::Set { .. }, NameData::Set { .. }) => {
                self.entries_forced_in(&da, b)? && self.entries_forced_in(&db, a)?
            }
            _ => false,
        };
        self.eq_memo.insert((a, b), v);
        Ok(v)
    }

    /// Every `(x, f)` of `from` has `dom f ⊩ x ∈ into·f`.
    fn entries_forced_in(&mut self, from: &NameData, into: NameId) -> Result<bool> {
        for &(f, x) in from.entries() {
            let target = self.store.res(into, f);
            if !self.mem(x, target)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn mem(&mut self, a: NameId, b: NameId) -> Result<bool> {
        let obj = self.store.obj(b);
        if self.degenerate(obj) {
            return Ok(true);
        }
        if let Some(&v) = self.mem_memo.get(&(a, b)) {
            return Ok(v);
        }
        self.tick()?;
        let db = self.store.data(b);
        let v = if db.is_atom() {
            false
        } else {
            let mut hit = ArrowSet::EMPTY;
            for f in self.site.cat.hom_into(obj).iter() {
                let af = self.store.res(a, f);
                for x in db.entries_at(f) {
                    if self.eq(af, x)? {
                        hit.insert(f);
                        break;
                    }
                }
            }
            self.site.top.has_cover_within(obj, hit)
        };
        self.mem_memo.insert((a, b), v);
        Ok(v)
    }

    // ---- quantifier domains ----

    /// Representatives of the forcing-equality classes of `U_n(obj)`.
    pub fn domain(&mut self, obj: ObjId) -> Result<Arc<Vec<NameId>>> {
        if self.use_classes {
            self.ensure_classes(obj)?;
            if let Some(t) = &self.classes[obj.index()] {
                return Ok(t.reps.clone());
            }
        }
        self.store.enumerate(obj, self.rank)
    }

    /// Number of forcing-equality classes in `U_n(obj)`.
    pub fn class_count(&mut self, obj: ObjId) -> Result<usize> {
        let saved = self.use_classes;
        self.use_classes = true;
        let r = self.domain(obj).map(|d| d.len());
        self.use_classes = saved;
        r
    }

    fn ensure_classes(&mut self, obj: ObjId) -> Result<()> {
        let i = obj.index();
        if self.classes[i].is_some() || self.computing[i] {
            return Ok(());
        }
        self.computing[i] = true;
        let r = self.build_classes(obj);
        self.computing[i] = false;
        self.classes[i] = Some(r?);
        Ok(())
    }

    fn build_classes(&mut self, obj: ObjId) -> Result<ClassTable> {
        let names = self.store.enumerate(obj, self.rank)?;
        let site = self.site;
        let cat = &site.cat;
        let below: Vec<ArrowId> = cat
            .hom_into(obj)
            .iter()
            .filter(|&f| cat.dom(f) != obj)
            .collect();
        for &f in &below {
            self.ensure_classes(cat.dom(f))?;
        }
        // Forced equality is stable under restriction, so the classes of the
        // restrictions split the search into small buckets.
        let usable: Vec<ArrowId> = below
            .into_iter()
            .filter(|&f| self.classes[cat.dom(f).index()].is_some())
            .collect();
        let mut buckets: FxHashMap<(bool, SmallVec<[u32; 8]>), SmallVec<[u32; 4]>> =
            FxHashMap::default();
        let mut reps = Vec::new();
        let mut class_of = FxHashMap::default();
        for &x in names.iter() {
            let mut key = SmallVec::new();
            for &f in &usable {
                let table = self.classes[cat.dom(f).index()].as_ref().expect("computed");
                let c = table.class_of.get(&self.store.res(x, f)).ok_or_else(|| {
                    Error::Invalid("restriction left the enumerated universe".into())
                })?;
                key.push(*c);
            }
            let key = (self.store.is_atom(x), key);
            let candidates = buckets.get(&key).cloned().unwrap_or_default();
            let mut found = None;
            for c in candidates {
                if self.eq(x, reps[c as usize])? {
                    found = Some(c);
                    break;
                }
            }
            let c = match found {
                Some(c) => c,
                None => {
                    reps.push(x);
                    let c = (reps.len() - 1) as u32;
                    buckets.entry(key).or_default().push(c);
                    c
                }
            };
            class_of.insert(x, c);
        }
        Ok(ClassTable {
            class_of,
            reps: Arc::new(reps),
        })
    }

    // ---- compound clauses ----

    fn compile(&mut self, phi: &Formula, scope: &[String]) -> Result<Arc<Compiled>> {
        let key = (phi.clone(), scope.to_vec());
        if let Some(c) = self.compiled.get(&key) {
            return Ok(c.clone());
        }
        let mut b = Builder {
            nodes: Vec::new(),
            free: Vec::new(),
        };
        let mut sc = scope.to_vec();
        let root = b.compile(phi, &mut sc)?;
        let c = Arc::new(Compiled {
            id: self.compiled.len() as u32,
            nodes: b.nodes,
            free: b.free,
            root,
        });
        self.compiled.insert(key, c.clone());
        Ok(c)
    }

    fn eval(&mut self, c: &Compiled, n: NodeId, obj: ObjId, env: &[NameId]) -> Result<bool> {
        // Every formula is forced at an object covered by the empty sieve.
        if self.degenerate(obj) {
            return Ok(true);
        }
        match c.nodes[n as usize] {
            Node::IsAtom(s) => Ok(self.store.is_atom(env[s as usize])),
            Node::IsSet(s) => Ok(self.store.is_set(env[s as usize])),
            Node::Eq(s, t) => self.eq(env[s as usize], env[t as usize]),
            Node::Mem(s, t) => self.mem(env[s as usize], env[t as usize]),
            Node::And(p, q) => Ok(self.eval(c, p, obj, env)? && self.eval(c, q, obj, env)?),
            Node::Or(p, q) => Ok(self.eval(c, p, obj, env)? || self.eval(c, q, obj, env)?),
            node => {
                let key: MemoKey = (
                    c.id,
                    n,
                    obj,
                    c.free[n as usize].iter().map(|&s| env[s as usize]).collect(),
                );
                if let Some(&v) = self.node_memo.get(&key) {
                    return Ok(v);
                }
                self.tick()?;
                let v = self.eval_compound(c, node, obj, env)?;
                if self.node_memo.len() >= NODE_MEMO_CAP {
                    self.node_memo.clear();
                }
                self.node_memo.insert(key, v);
                Ok(v)
            }
        }
    }

    fn eval_compound(&mut self, c: &Compiled, node: Node, obj: ObjId, env: &[NameId]) -> Result<bool> {
        let site = self.site;
        let cat = &site.cat;
        match node {
            Node::Implies(p, q) => {
                for f in cat.hom_into(obj).iter() {
                    let (d, ef) = (cat.dom(f), self.restrict_env(env, f));
                    if self.eval(c, p, d, &ef)? && !self.eval(c, q, d, &ef)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Node::Not(p) => {
                for f in cat.hom_into(obj).iter() {
                    let d = cat.dom(f);
                    if !self.degenerate(d) && self.eval(c, p, d, &self.restrict_env(env, f))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Node::Forall(body) => {
                for f in cat.hom_into(obj).iter() {
                    let d = cat.dom(f);
                    let dom = self.domain(d)?;
                    let mut ef = self.restrict_env(env, f);
                    ef.push(NameId(0));
                    for &x in dom.iter() {
                        *ef.last_mut().expect("slot") = x;
                        if !self.eval(c, body, d, &ef)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Node::Exists(body, synth) => {
                let found = self.cover_search(obj, |me, f| {
                    let ef = me.restrict_env(env, f);
                    Ok(me.witness_at(c, body, synth, me.site.cat.dom(f), &ef)?.is_some())
                })?;
                Ok(found.is_some())
            }
            Node::BForall(t, body) => {
                let bound = self.store.data(env[t as usize]);
                for &(f, x) in bound.entries() {
                    let mut ef = self.restrict_env(env, f);
                    ef.push(x);
                    if !self.eval(c, body, cat.dom(f), &ef)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Node::BExists(t, body) => {
                let bound = self.store.data(env[t as usize]);
                if bound.is_atom() {
                    return Ok(false);
                }
                let found = self.cover_search(obj, |me, f| {
                    let mut ef = me.restrict_env(env, f);
                    ef.push(NameId(0));
                    for x in bound.entries_at(f) {
                        *ef.last_mut().expect("slot") = x;
                        if me.eval(c, body, me.site.cat.dom(f), &ef)? {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                })?;
                Ok(found.is_some())
            }
            Node::IsAtom(_) | Node::IsSet(_) | Node::Eq(..) | Node::Mem(..) | Node::And(..) | Node::Or(..) => {
                unreachable!("handled in eval")
            }
        }
    }

    /// Finds a cover of `obj` all of whose arrows satisfy `ok`, trying the
    /// largest covers first and testing each arrow at most once.
    fn cover_search(
        &mut self,
        obj: ObjId,
        mut ok: impl FnMut(&mut Self, ArrowId) -> Result<bool>,
    ) -> Result<Option<ArrowSet>> {
        let site = self.site;
        let covers = site.top.covers(obj);
        if covers.iter().any(|s| s.is_empty()) {
            return Ok(Some(ArrowSet::EMPTY));
        }
        let (mut good, mut bad) = (ArrowSet::EMPTY, ArrowSet::EMPTY);
        'covers: for &s in covers {
            if !s.intersection(bad).is_empty() {
                continue;
            }
            for f in s.difference(good).iter() {
                if ok(self, f)? {
                    good.insert(f);
                } else {
                    bad.insert(f);
                    continue 'covers;
                }
            }
            return Ok(Some(s));
        }
        Ok(None)
    }

    /// A name `x` at `obj` with `obj ⊩ body(x)`.
    fn witness_at(
        &mut self,
        c: &Compiled,
        body: NodeId,
        synth: Option<NodeId>,
        obj: ObjId,
        env: &[NameId],
    ) -> Result<Option<NameId>> {
        let mut ext = env.to_vec();
        ext.push(NameId(0));
        if let (Some(psi), true) = (synth, self.synthesize) {
            let z = self.comprehend(c, psi, obj, env)?;
            *ext.last_mut().expect("slot") = z;
            if self.eval(c, body, obj, &ext)? {
                return Ok(Some(z));
            }
        }
        let dom = self.domain(obj)?;
        for &x in dom.iter() {
            *ext.last_mut().expect("slot") = x;
            if self.eval(c, body, obj, &ext)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// `close {(w, g) | g into obj, w ∈ D(dom g), dom g ⊩ ψ(w)}`.
    fn comprehend(&mut self, c: &Compiled, psi: NodeId, obj: ObjId, env: &[NameId]) -> Result<NameId> {
        let mut gens = Vec::new();
        for g in self.site.cat.hom_into(obj).iter() {
            let d = self.site.cat.dom(g);
            let dom = self.domain(d)?;
            let mut eg = self.restrict_env(env, g);
            // The set variable is not free in ψ; any name at `d` fills its slot.
            eg.push(self.store.empty_set(d));
            eg.push(NameId(0));
            for &w in dom.iter() {
                *eg.last_mut().expect("slot") = w;
                if self.eval(c, psi, d, &eg)? {
                    gens.push((g, w));
                }
            }
        }
        self.store.close_name(obj, gens)
    }

    // ---- public queries ----

    fn prepare(&mut self, obj: ObjId, phi: &Formula, env: &Env) -> Result<(Arc<Compiled>, Vec<NameId>)> {
        env.check(self.store, obj)?;
        let scope: Vec<String> = phi.free_vars().into_iter().collect();
        let slots = scope
            .iter()
            .map(|v| env.get(v).ok_or_else(|| Error::Unbound(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok((self.compile(phi, &scope)?, slots))
    }

    fn verdict(&self, phi: &Formula, value: bool) -> Verdict {
        Verdict {
            value,
            scope: if phi.has_unbounded_quantifier() {
                Scope::Rank(self.rank)
            } else {
                Scope::Exact
            },
            approx: Approx::of(phi),
        }
    }

    /// `A ⊩ φ(env)`.
    pub fn force(&mut self, obj: ObjId, phi: &Formula, env: &Env) -> Result<Verdict> {
        self.steps = 0;
        let (c, slots) = self.prepare(obj, phi, env)?;
        let v = self.eval(&c, c.root, obj, &slots)?;
        Ok(self.verdict(phi, v))
    }

    /// `‖φ(env)‖_A = {f | dom f ⊩ φ(env · f)}`.
    pub fn truth_value(&mut self, obj: ObjId, phi: &Formula, env: &Env) -> Result<ClosedSieve> {
        self.steps = 0;
        let (c, slots) = self.prepare(obj, phi, env)?;
        let mut arrows = ArrowSet::EMPTY;
        for f in self.site.cat.hom_into(obj).iter() {
            let ef = self.restrict_env(&slots, f);
            if self.eval(&c, c.root, self.site.cat.dom(f), &ef)? {
                arrows.insert(f);
            }
        }
        if !self.site.is_closed(obj, arrows) {
            return Err(Error::Invalid(format!(
                "truth value {:?} of {phi} is not a closed sieve",
                self.site.cat.arrow_names(arrows)
            )));
        }
        Ok(ClosedSieve { base: obj, arrows })
    }

    /// Whether a closed formula is forced at every object.
    pub fn forced_everywhere(&mut self, phi: &Formula) -> Result<Verdict> {
        if !phi.is_closed() {
            return Err(Error::Precondition(format!("{phi} has free variables")));
        }
        self.steps = 0;
        let c = self.compile(phi, &[])?;
        let mut value = true;
        for a in self.site.cat.objects() {
            if !self.eval(&c, c.root, a, &[])? {
                value = false;
                break;
            }
        }
        Ok(self.verdict(phi, value))
    }

    fn bounded(&mut self, universal: bool, obj: ObjId, x: &str, a: NameId, body: &Formula, env: &Env) -> Result<Verdict> {
        if self.store.is_atom(a) {
            return Err(Error::TypeMismatch(format!(
                "bound {} is an atom",
                self.store.display(a)
            )));
        }
        let mut avoid = body.all_vars();
        avoid.extend(env.iter().map(|(k, _)| k.to_string()));
        let t = fresh_var("bound", &avoid);
        let phi = if universal {
            Formula::forall_in(x, &t, body.clone())
        } else {
            Formula::exists_in(x, &t, body.clone())
        };
        self.force(obj, &phi, &env.clone().bind(&t, a))
    }

    /// `A ⊩ ∀x ∈ ȧ. body`, checked entry by entry.
    pub fn bounded_forall(&mut self, obj: ObjId, x: &str, a: NameId, body: &Formula, env: &Env) -> Result<Verdict> {
        self.bounded(true, obj, x, a, body, env)
    }

    /// `A ⊩ ∃x ∈ ȧ. body`, searched over covers with entry witnesses.
    pub fn bounded_exists(&mut self, obj: ObjId, x: &str, a: NameId, body: &Formula, env: &Env) -> Result<Verdict> {
        self.bounded(false, obj, x, a, body, env)
    }

    /// Forces a bounded formula on check names and evaluates it directly.
    pub fn delta0_absolute(&mut self, obj: ObjId, phi: &Formula, args: &BTreeMap<String, Hf>) -> Result<Delta0Outcome> {
        let v_truth = hf::eval_delta0(phi, args)?;
        let mut env = Env::new();
        for (k, x) in args {
            env.insert(k, self.store.check_name(obj, x));
        }
        let sieve = self.truth_value(obj, phi, &env)?;
        Ok(Delta0Outcome { v_truth, sieve })
    }

    /// `A ⊩ ȧ = ḃ` where both live at `A`.
    pub fn eq_names(&mut self, a: NameId, b: NameId) -> Result<bool> {
        self.same_object(a, b)?;
        self.steps = 0;
        self.eq(a, b)
    }

    /// `A ⊩ ȧ ∈ ḃ` where both live at `A`.
    pub fn mem_names(&mut self, a: NameId, b: NameId) -> Result<bool> {
        self.same_object(a, b)?;
        self.steps = 0;
        self.mem(a, b)
    }

    fn same_object(&self, a: NameId, b: NameId) -> Result<()> {
        if self.store.obj(a) != self.store.obj(b) {
            return Err(Error::TypeMismatch(format!(
                "{} and {} live at different objects",
                self.store.display(a),
                self.store.display(b)
            )));
        }
        Ok(())
    }

    /// For `A ⊩ ∃x φ`: the cover found and one witness per arrow of it.
    pub fn exists_witnesses(
        &mut self,
        obj: ObjId,
        x: &str,
        body: &Formula,
        env: &Env,
    ) -> Result<Option<(ArrowSet, Vec<(ArrowId, NameId)>)>> {
        self.steps = 0;
        let phi = Formula::exists(x, body.clone());
        let (c, slots) = self.prepare(obj, &phi, env)?;
        let Node::Exists(b, synth) = c.nodes[c.root as usize] else {
            unreachable!("root is the quantifier")
        };
        let mut found = BTreeMap::new();
        let cover = self.cover_search(obj, |me, f| {
            let ef = me.restrict_env(&slots, f);
            match me.witness_at(&c, b, synth, me.site.cat.dom(f), &ef)? {
                Some(w) => {
                    found.insert(f, w);
                    Ok(true)
                }
                None => Ok(false),
            }
        })?;
        Ok(cover.map(|s| (s, s.iter().map(|f| (f, found[&f])).collect())))
    }
}
