//! Matching functions on a sieve, their restriction and amalgamation, and
//! witness extraction for unique existence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, ArrowSet, ObjId};
use crate::forcing::{Env, Forcer};
use crate::formula::{fresh_var, Formula};
use crate::names::{NameDoc, NameId, NameStore};
use crate::sieve::{is_sieve, pullback, Site};

/// A family `f ↦ F(f)` of nonempty name sets indexed by a sieve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchFn {
    pub base: ObjId,
    pub dom: ArrowSet,
    pub values: BTreeMap<ArrowId, Vec<NameId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchDoc {
    pub base: String,
    pub sieve: Vec<String>,
    pub values: BTreeMap<String, Vec<NameDoc>>,
}

impl MatchFn {
    /// `m_ẋ(f) = [ẋ · f]` on the maximal sieve.
    pub fn of_name(store: &NameStore, x: NameId) -> MatchFn {
        let base = store.obj(x);
        let dom = store.cat().hom_into(base);
        MatchFn {
            base,
            dom,
            values: dom.iter().map(|f| (f, vec![store.res(x, f)])).collect(),
        }
    }

    /// `(m · f)(g) = m(f ∘ g)` on `f*(dom m)`.
    pub fn restrict(&self, store: &NameStore, f: ArrowId) -> Result<MatchFn> {
        let cat = store.cat();
        if cat.cod(f) != self.base {
            return Err(Error::TypeMismatch(format!(
                "cannot restrict a matching function on {} along {}",
                cat.object_name(self.base),
                cat.arrow_name(f)
            )));
        }
        let dom = pullback(cat, self.dom, f);
        let values = dom
            .iter()
            .map(|g| (g, self.values[&cat.compose(f, g)].clone()))
            .collect();
        Ok(MatchFn {
            base: cat.dom(f),
            dom,
            values,
        })
    }

    /// Shape check: a sieve, keyed exactly by it, with nonempty values
    /// living at the right objects.
    fn well_formed(&self, store: &NameStore) -> bool {
        let cat = store.cat();
        is_sieve(cat, self.base, self.dom)
            && self.values.keys().copied().collect::<ArrowSet>() == self.dom
            && self.values.iter().all(|(&f, xs)| {
                !xs.is_empty() && xs.iter().all(|&x| store.obj(x) == cat.dom(f))
            })
    }

    /// Both matching conditions, with forcing checked exactly.
    pub fn is_matching(&self, forcer: &mut Forcer) -> Result<bool> {
        let store = forcer.store();
        if !self.well_formed(store) {
            return Ok(false);
        }
        let cat = store.cat();
        for (&f, xs) in &self.values {
            for g in cat.hom_into(cat.dom(f)).iter() {
                let ys = &self.values[&cat.compose(f, g)];
                for &a in xs {
                    let ag = store.res(a, g);
                    for &b in ys {
                        if !forcer.eq_names(ag, b)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// `⊔F = {(ẋ, f ∘ g) | f ∈ S, ȧ ∈ F(f), (ẋ, g) ∈ ȧ}`.
    pub fn amalgamate(&self, store: &NameStore) -> Result<NameId> {
        let cat = store.cat();
        let mut entries = Vec::new();
        for (&f, xs) in &self.values {
            for &a in xs {
                if store.is_atom(a) {
                    return Err(Error::Precondition(format!(
                        "value {} at {} is an atom",
                        store.display(a),
                        cat.arrow_name(f)
                    )));
                }
                for &(g, x) in store.data(a).entries() {
                    entries.push((cat.compose(f, g), x));
                }
            }
        }
        store.set(self.base, entries)
    }

    pub fn to_doc(&self, store: &NameStore) -> MatchDoc {
        let cat = store.cat();
        MatchDoc {
            base: cat.object_name(self.base).to_string(),
            sieve: cat.arrow_names(self.dom),
            values: self
                .values
                .iter()
                .map(|(&f, xs)| {
                    (
                        cat.arrow_name(f).to_string(),
                        xs.iter().map(|&x| store.to_doc(x)).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn from_doc(store: &NameStore, doc: &MatchDoc) -> Result<MatchFn> {
        let cat = store.cat();
        let base = cat.object(&doc.base)?;
        let dom = cat.parse_arrow_set(&doc.sieve)?;
        let mut values = BTreeMap::new();
        for (name, xs) in &doc.values {
            let f = cat.arrow(name)?;
            let names = xs
                .iter()
                .map(|x| store.from_doc(cat.dom(f), x))
                .collect::<Result<Vec<_>>>()?;
            values.insert(f, names);
        }
        let m = MatchFn { base, dom, values };
        if !m.well_formed(store) {
            return Err(Error::Invalid(
                "matching function values must be nonempty and indexed by a sieve".into(),
            ));
        }
        Ok(m)
    }
}

/// `∃!x:set φ`, spelled out as existence plus uniqueness.
pub fn unique_existence(x: &str, phi: &Formula) -> Formula {
    let mut avoid = phi.all_vars();
    avoid.insert(x.to_string());
    let y = fresh_var("y", &avoid);
    Formula::exists(x, unique_body(x, &y, phi))
}

fn unique_body(x: &str, y: &str, phi: &Formula) -> Formula {
    let phi_y = phi.rename_free(x, y);
    Formula::is_set(x).and(phi.clone()).and(Formula::forall(
        y,
        Formula::is_set(y).and(phi_y).implies(Formula::eq(y, x)),
    ))
}

/// Given `A ⊩ ∃!x:set φ`, a name `ẋ` with `A ⊩ ẋ:set ∧ φ(ẋ)`, obtained by
/// amalgamating the local witnesses over the cover that proves existence.
pub fn extract_witness(forcer: &mut Forcer, obj: ObjId, x: &str, phi: &Formula, env: &Env) -> Result<NameId> {
    let store = forcer.store();
    let site: &Site = forcer.site();
    let mut avoid = phi.all_vars();
    avoid.insert(x.to_string());
    avoid.extend(env.iter().map(|(k, _)| k.to_string()));
    let y = fresh_var("y", &avoid);
    let body = unique_body(x, &y, phi);
    let Some((cover, witnesses)) = forcer.exists_witnesses(obj, x, &body, env)? else {
        return Err(Error::Precondition(format!(
            "unique existence of {x} with {phi} is not forced at {}",
            site.cat.object_name(obj)
        )));
    };
    let mut values = BTreeMap::new();
    for (f, w) in witnesses {
        let d = site.cat.dom(f);
        // at a degenerate domain any name witnesses; pick a set
        let w = if site.degenerate(d) { store.empty_set(d) } else { w };
        if store.is_atom(w) {
            return Err(Error::Invalid(format!(
                "local witness {} at {} is not a set",
                store.display(w),
                site.cat.arrow_name(f)
            )));
        }
        values.insert(f, vec![w]);
    }
    let m = MatchFn {
        base: obj,
        dom: cover,
        values,
    };
    if !m.is_matching(forcer)? {
        return Err(Error::Invalid("local witnesses do not match".into()));
    }
    let a = m.amalgamate(store)?;
    let post = Formula::is_set(x).and(phi.clone());
    if !forcer.force(obj, &post, &env.clone().bind(x, a))?.value {
        return Err(Error::Invalid(format!(
            "amalgamated witness {} fails the condition",
            store.display(a)
        )));
    }
    Ok(a)
}
