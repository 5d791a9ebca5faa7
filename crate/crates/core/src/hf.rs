//! Hereditarily finite sets and direct evaluation of bounded formulas on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::Formula;

/// A hereditarily finite set. Structural equality is extensional equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Hf(pub BTreeSet<Hf>);

impl Hf {
    pub fn empty() -> Self {
        Hf(BTreeSet::new())
    }

    pub fn from_elems(elems: impl IntoIterator<Item = Hf>) -> Self {
        Hf(elems.into_iter().collect())
    }

    /// The von Neumann numeral `n = {0, …, n-1}`.
    pub fn numeral(n: usize) -> Self {
        let mut cur = Hf::empty();
        for _ in 0..n {
            let mut next = cur.0.clone();
            next.insert(cur);
            cur = Hf(next);
        }
        cur
    }

    pub fn contains(&self, x: &Hf) -> bool {
        self.0.contains(x)
    }

    pub fn elems(&self) -> impl Iterator<Item = &Hf> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Set-theoretic rank: `rank(∅) = 0`, `rank(x) = max(rank(y) + 1)`.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|y| y.rank() + 1).max().unwrap_or(0)
    }

    /// All sets of rank below `n`, i.e. the elements of `V_n`.
    pub fn universe(n: usize) -> Vec<Hf> {
        let mut level: Vec<Hf> = vec![];
        for _ in 0..n {
            let k = level.len();
            assert!(k < 20, "V_n too large to list");
            level = (0u32..1 << k)
                .map(|bits| {
                    Hf::from_elems(
                        (0..k)
                            .filter(|i| bits >> i & 1 == 1)
                            .map(|i| level[i].clone()),
                    )
                })
                .collect();
            level.sort();
        }
        level
    }

    /// Parses `{}`, `{{}, {{}}}` and so on.
    pub fn parse(text: &str) -> Result<Hf> {
        let bytes: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut i = 0;
        let set = Self::parse_at(&bytes, &mut i, text.len())?;
        if i != bytes.len() {
            return Err(Error::Syntax {
                pos: bytes[i].0,
                msg: "trailing input after set".into(),
            });
        }
        Ok(set)
    }

    fn parse_at(s: &[(usize, char)], i: &mut usize, end: usize) -> Result<Hf> {
        let pos = s.get(*i).map_or(end, |p| p.0);
        if s.get(*i).map(|p| p.1) != Some('{') {
            return Err(Error::Syntax {
                pos,
                msg: "expected '{'".into(),
            });
        }
        *i += 1;
        let mut elems = BTreeSet::new();
        if s.get(*i).map(|p| p.1) == Some('}') {
            *i += 1;
            return Ok(Hf(elems));
        }
        loop {
            elems.insert(Self::parse_at(s, i, end)?);
            match s.get(*i).map(|p| p.1) {
                Some(',') => *i += 1,
                Some('}') => {
                    *i += 1;
                    return Ok(Hf(elems));
                }
                _ => {
                    return Err(Error::Syntax {
                        pos: s.get(*i).map_or(end, |p| p.0),
                        msg: "expected ',' or '}'".into(),
                    })
                }
            }
        }
    }
}

impl fmt::Display for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Truth of a bounded membership formula in the real universe.
pub fn eval_delta0(phi: &Formula, env: &BTreeMap<String, Hf>) -> Result<bool> {
    if !phi.is_delta0() {
        return Err(Error::NotDelta0(phi.to_string()));
    }
    let mut env = env.clone();
    eval(phi, &mut env)
}

fn lookup<'a>(env: &'a BTreeMap<String, Hf>, v: &str) -> Result<&'a Hf> {
    env.get(v).ok_or_else(|| Error::Unbound(v.to_string()))
}

fn eval(phi: &Formula, env: &mut BTreeMap<String, Hf>) -> Result<bool> {
    Ok(match phi {
        Formula::Eq(x, y) => lookup(env, x)? == lookup(env, y)?,
        Formula::Mem(x, y) => lookup(env, y)?.contains(lookup(env, x)?),
        Formula::And(p, q) => eval(p, env)? && eval(q, env)?,
        Formula::Or(p, q) => eval(p, env)? || eval(q, env)?,
        Formula::Implies(p, q) => !eval(p, env)? || eval(q, env)?,
        Formula::Not(p) => !eval(p, env)?,
        Formula::BForall(x, t, body) | Formula::BExists(x, t, body) => {
            let universal = matches!(phi, Formula::BForall(..));
            let elems: Vec<Hf> = lookup(env, t)?.elems().cloned().collect();
            let saved = env.get(x).cloned();
            let mut result = universal;
            for e in elems {
                env.insert(x.clone(), e);
                if eval(body, env)? != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(s) => env.insert(x.clone(), s),
                None => env.remove(x),
            };
            result
        }
        Formula::IsAtom(_) | Formula::IsSet(_) | Formula::Forall(..) | Formula::Exists(..) => {
            return Err(Error::NotDelta0(phi.to_string()))
        }
    })
}

/// A random set of rank at most `max_rank`, uniform over `V_{max_rank+1}`.
pub fn random_hf<R: Rng>(rng: &mut R, max_rank: usize) -> Hf {
    Hf::universe(max_rank + 1)
        .choose(rng)
        .cloned()
        .expect("nonempty universe")
}

/// `count` random bounded formulas over `a, b, c` with arguments of rank at
/// most `max_rank`, reproducible from `seed`.
pub fn random_cases(seed: u64, count: usize, max_rank: usize, depth: usize) -> Vec<(Formula, BTreeMap<String, Hf>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    (0..count)
        .map(|_| {
            let phi = random_delta0(&mut rng, &vars, depth);
            let args = vars
                .iter()
                .map(|v| (v.clone(), random_hf(&mut rng, max_rank)))
                .collect();
            (phi, args)
        })
        .collect()
}

/// A random bounded formula of depth at most `depth` over `vars`, using
/// only `=`, `∈`, connectives and bounded quantifiers.
pub fn random_delta0<R: Rng>(rng: &mut R, vars: &[String], depth: usize) -> Formula {
    let mut scope: Vec<String> = vars.to_vec();
    let mut counter = 0;
    gen(rng, &mut scope, depth, &mut counter)
}

fn gen<R: Rng>(rng: &mut R, scope: &mut Vec<String>, depth: usize, counter: &mut usize) -> Formula {
    let pick = |rng: &mut R, scope: &Vec<String>| scope.choose(rng).expect("variables in scope").clone();
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..8) };
    match choice {
        0 => Formula::Eq(pick(rng, scope), pick(rng, scope)),
        1 => Formula::Mem(pick(rng, scope), pick(rng, scope)),
        2 => gen(rng, scope, depth - 1, counter).and(gen(rng, scope, depth - 1, counter)),
        3 => gen(rng, scope, depth - 1, counter).or(gen(rng, scope, depth - 1, counter)),
        4 => gen(rng, scope, depth - 1, counter).implies(gen(rng, scope, depth - 1, counter)),
        5 => gen(rng, scope, depth - 1, counter).not(),
        _ => {
            let bound = pick(rng, scope);
            let x = format!("q{counter}");
            *counter += 1;
            scope.push(x.clone());
            let body = gen(rng, scope, depth - 1, counter);
            scope.pop();
            if choice == 6 {
                Formula::forall_in(&x, &bound, body)
            } else {
                Formula::exists_in(&x, &bound, body)
            }
        }
    }
}
