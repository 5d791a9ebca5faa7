//! Site documents (JSON) and the built-in catalog of small sites.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{ArrowSet, FinCategory, ValidationReport};
use crate::sieve::{Site, Topology};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowDoc {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum TopologyMode {
    Explicit,
    Basis,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TopologyDoc {
    pub mode: TopologyMode,
    /// Per-object lists of sieves, each sieve an array of arrow names.
    #[serde(default)]
    pub sieves: BTreeMap<String, Vec<Vec<String>>>,
}

/// The on-disk description of a site.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SiteDocument {
    #[serde(default)]
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
    /// Triples `[f, g, h]` meaning `f ∘ g = h`.
    pub composition: Vec<[String; 3]>,
    pub topology: TopologyDoc,
}

/// Outcome of loading a document: either a site or the violated laws.
pub enum Loaded {
    Site(Box<Site>),
    Invalid(ValidationReport),
}

impl SiteDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("site documents serialize")
    }

    pub fn category(&self) -> Result<FinCategory> {
        FinCategory::from_owned(
            self.objects.clone(),
            self.arrows
                .iter()
                .map(|a| (a.name.clone(), a.dom.clone(), a.cod.clone()))
                .collect(),
            self.composition
                .iter()
                .map(|[f, g, h]| (f.clone(), g.clone(), h.clone()))
                .collect(),
            self.identities
                .iter()
                .map(|(o, a)| (o.clone(), a.clone()))
                .collect(),
        )
    }

    /// Builds the category and topology. Unknown identifiers are errors;
    /// broken laws come back as a report.
    pub fn load(&self) -> Result<Loaded> {
        let cat = self.category()?;
        let report = cat.validate();
        if !report.is_empty() {
            return Ok(Loaded::Invalid(report));
        }
        let mut lists = vec![Vec::new(); cat.num_objects()];
        for (obj, sieves) in &self.topology.sieves {
            let a = cat.object(obj)?;
            for s in sieves {
                lists[a.index()].push(cat.parse_arrow_set(s)?);
            }
        }
        let top = match self.topology.mode {
            TopologyMode::Explicit => Topology::explicit(lists),
            TopologyMode::Basis => {
                let mut report = ValidationReport::default();
                for a in cat.objects() {
                    for &s in &lists[a.index()] {
                        if !crate::sieve::is_sieve(&cat, a, s) {
                            report.push(
                                "cover-is-sieve",
                                format!("{:?} on {} is not a sieve", cat.arrow_names(s), cat.object_name(a)),
                            );
                        }
                    }
                }
                if !report.is_empty() {
                    return Ok(Loaded::Invalid(report));
                }
                Topology::generate(&cat, &lists)
            }
        };
        let report = top.validate(&cat);
        if !report.is_empty() {
            return Ok(Loaded::Invalid(report));
        }
        Ok(Loaded::Site(Box::new(Site::new_unchecked(
            self.name.clone(),
            cat,
            top,
        ))))
    }

    /// Like [`SiteDocument::load`] but folds a report into an error.
    pub fn into_site(&self) -> Result<Site> {
        match self.load()? {
            Loaded::Site(s) => Ok(*s),
            Loaded::Invalid(r) => Err(Error::Invalid(r.to_string().trim_end().to_string())),
        }
    }

    /// The explicit document describing an existing site.
    pub fn from_site(site: &Site) -> Self {
        let cat = &site.cat;
        SiteDocument {
            name: site.name.clone(),
            objects: cat.objects().map(|a| cat.object_name(a).to_string()).collect(),
            arrows: cat
                .arrows()
                .map(|f| ArrowDoc {
                    name: cat.arrow_name(f).to_string(),
                    dom: cat.object_name(cat.dom(f)).to_string(),
                    cod: cat.object_name(cat.cod(f)).to_string(),
                })
                .collect(),
            identities: cat
                .objects()
                .map(|a| {
                    (
                        cat.object_name(a).to_string(),
                        cat.arrow_name(cat.identity(a)).to_string(),
                    )
                })
                .collect(),
            composition: cat
                .arrows()
                .flat_map(|f| cat.arrows().map(move |g| (f, g)))
                .filter_map(|(f, g)| {
                    cat.try_compose(f, g).map(|h| {
                        [
                            cat.arrow_name(f).to_string(),
                            cat.arrow_name(g).to_string(),
                            cat.arrow_name(h).to_string(),
                        ]
                    })
                })
                .collect(),
            topology: TopologyDoc {
                mode: TopologyMode::Explicit,
                sieves: cat
                    .objects()
                    .map(|a| {
                        (
                            cat.object_name(a).to_string(),
                            site.top.covers(a).iter().map(|&s| cat.arrow_names(s)).collect(),
                        )
                    })
                    .collect(),
            },
        }
    }
}

/// The small sites every suite runs against.
pub mod catalog {
    use super::*;

    fn with_table(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
        compose: impl Fn(&str, &str) -> String,
    ) -> FinCategory {
        let skeleton = FinCategory::new(objects, arrows, &[], identities).expect("catalog skeleton");
        let mut triples = Vec::new();
        for f in skeleton.arrows() {
            for g in skeleton.arrows() {
                if skeleton.cod(g) == skeleton.dom(f) {
                    triples.push((
                        skeleton.arrow_name(f).to_string(),
                        skeleton.arrow_name(g).to_string(),
                        compose(skeleton.arrow_name(f), skeleton.arrow_name(g)),
                    ));
                }
            }
        }
        let t: Vec<(&str, &str, &str)> = triples
            .iter()
            .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
            .collect();
        FinCategory::new(objects, arrows, &t, identities).expect("catalog category")
    }

    fn unit_compose(f: &str, g: &str) -> String {
        if f.starts_with("id_") {
            g.to_string()
        } else {
            f.to_string()
        }
    }

    /// One object, one arrow.
    pub fn terminal_category() -> FinCategory {
        with_table(&["*"], &[("id_*", "*", "*")], &[("*", "id_*")], unit_compose)
    }

    /// `A --u--> B`.
    pub fn two_category() -> FinCategory {
        with_table(
            &["A", "B"],
            &[("id_A", "A", "A"), ("id_B", "B", "B"), ("u", "A", "B")],
            &[("A", "id_A"), ("B", "id_B")],
            unit_compose,
        )
    }

    /// The poset `0 ≤ 1 ≤ 2`.
    pub fn chain_category() -> FinCategory {
        let arrows = [
            ("id_0", "0", "0"),
            ("id_1", "1", "1"),
            ("id_2", "2", "2"),
            ("0<1", "0", "1"),
            ("1<2", "1", "2"),
            ("0<2", "0", "2"),
        ];
        let dom = |a: &str| arrows.iter().find(|x| x.0 == a).unwrap().1;
        let cod = |a: &str| arrows.iter().find(|x| x.0 == a).unwrap().2;
        with_table(
            &["0", "1", "2"],
            &arrows,
            &[("0", "id_0"), ("1", "id_1"), ("2", "id_2")],
            |f, g| {
                let (lo, hi) = (dom(g), cod(f));
                if lo == hi {
                    format!("id_{lo}")
                } else {
                    format!("{lo}<{hi}")
                }
            },
        )
    }

    /// Two parallel arrows `u, v : A → B`.
    pub fn parallel_category() -> FinCategory {
        with_table(
            &["A", "B"],
            &[
                ("id_A", "A", "A"),
                ("id_B", "B", "B"),
                ("u", "A", "B"),
                ("v", "A", "B"),
            ],
            &[("A", "id_A"), ("B", "id_B")],
            unit_compose,
        )
    }

    pub fn terminal() -> Site {
        let cat = terminal_category();
        let top = Topology::trivial(&cat);
        Site::new("one", cat, top).expect("catalog site")
    }

    pub fn two_trivial() -> Site {
        let cat = two_category();
        let top = Topology::trivial(&cat);
        Site::new("two", cat, top).expect("catalog site")
    }

    /// `J'(B) = {max, {u}}`, `J'(A) = {max}`.
    pub fn two_jprime() -> Site {
        let cat = two_category();
        let u = cat.arrow("u").unwrap();
        let a = cat.object("A").unwrap();
        let b = cat.object("B").unwrap();
        let top = Topology::explicit(vec![
            vec![cat.hom_into(a)],
            vec![cat.hom_into(b), ArrowSet::singleton(u)],
        ]);
        Site::new("two-jprime", cat, top).expect("catalog site")
    }

    /// Every nonempty sieve covers.
    pub fn chain_dense() -> Site {
        let cat = chain_category();
        let top = Topology::explicit(
            cat.objects()
                .map(|a| {
                    crate::sieve::all_sieves(&cat, a)
                        .into_iter()
                        .filter(|s| !s.is_empty())
                        .collect()
                })
                .collect(),
        );
        Site::new("chain3-dense", cat, top).expect("catalog site")
    }

    pub fn parallel_trivial() -> Site {
        let cat = parallel_category();
        let top = Topology::trivial(&cat);
        Site::new("parallel", cat, top).expect("catalog site")
    }

    /// The topology generated by the empty sieve covering `A`.
    pub fn two_degenerate() -> Site {
        let cat = two_category();
        let top = Topology::generate(&cat, &[vec![ArrowSet::EMPTY], vec![]]);
        Site::new("two-degenerate", cat, top).expect("catalog site")
    }

    /// The five sites of the acceptance catalog.
    pub fn all() -> Vec<Site> {
        vec![
            terminal(),
            two_trivial(),
            two_jprime(),
            chain_dense(),
            parallel_trivial(),
        ]
    }

    pub fn by_name(name: &str) -> Option<Site> {
        match name {
            "one" => Some(terminal()),
            "two" => Some(two_trivial()),
            "two-jprime" => Some(two_jprime()),
            "chain3-dense" => Some(chain_dense()),
            "parallel" => Some(parallel_trivial()),
            "two-degenerate" => Some(two_degenerate()),
            _ => None,
        }
    }
}
