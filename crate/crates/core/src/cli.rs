//! Command-line surface: site validation, Ω tables, single forcing queries,
//! the axiom table, the equivalence report and the Δ₀ random suite.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::ObjId;
use crate::forcing::{Env, Forcer, Verdict, DEFAULT_STEP_LIMIT};
use crate::formula::{axiom_schedule, parse};
use crate::hf::random_cases;
use crate::names::NameStore;
use crate::settopos::check_equivalence;
use crate::sieve::Site;
use crate::site::{catalog, Loaded, SiteDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_FORCED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sheaf-forcing", version, about = "Forcing over finite Grothendieck sites")]
pub struct Cli {
    /// Print tables instead of JSON lines.
    #[arg(long, global = true)]
    pub human: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SiteArg {
    /// Site document, or the name of a built-in site (one, two, two-jprime,
    /// chain3-dense, parallel, two-degenerate).
    pub site: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the category laws and the topology axioms.
    Validate(SiteArg),
    /// List the closed sieves on an object with meet, join and implication tables.
    Omega {
        #[command(flatten)]
        site: SiteArg,
        #[arg(long)]
        object: String,
    },
    /// Decide `A ⊩ φ` and print the truth sieve.
    Force {
        #[command(flatten)]
        site: SiteArg,
        #[arg(long)]
        object: String,
        #[arg(long)]
        formula: String,
        /// `var=FILE` with a name document, or `var={...}` inline.
        #[arg(long = "env", value_name = "VAR=NAME")]
        env: Vec<String>,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Check the axiom schedule at every object.
    Axioms {
        #[command(flatten)]
        site: SiteArg,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        steps: u64,
    },
    /// Run the sheaf/forcing-set equivalence checks.
    Equiv {
        #[command(flatten)]
        site: SiteArg,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Compare bounded formulas on check-names with direct evaluation.
    Delta0 {
        #[command(flatten)]
        site: SiteArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

/// Exit code for an error that escaped a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::Json(_) => EXIT_PARSE,
        _ => EXIT_INVALID,
    }
}

pub fn load_site(arg: &str) -> Result<Site> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(site) = catalog::by_name(arg) {
            return Ok(site);
        }
    }
    SiteDocument::read(path)?.into_site()
}

/// Runs a parsed command, writing to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let human = cli.human;
    match &cli.command {
        Command::Validate(s) => validate(&s.site, human, out),
        Command::Omega { site, object } => omega(&load_site(&site.site)?, object, human, out),
        Command::Force {
            site,
            object,
            formula,
            env,
            rank,
        } => force(&load_site(&site.site)?, object, formula, env, *rank, human, out),
        Command::Axioms { site, rank, steps } => {
            let site = load_site(&site.site)?;
            let rows = axiom_rows(&site, *rank, *steps);
            for r in &rows {
                if human {
                    writeln!(out, "{:<28} {:<20} {}", r.axiom, r.status.label(), r.detail)?;
                } else {
                    writeln!(out, "{}", serde_json::to_string(r)?)?;
                }
            }
            let ok = rows.iter().all(|r| r.status.is_pass());
            Ok(if ok { EXIT_OK } else { EXIT_NOT_FORCED })
        }
        Command::Equiv { site, bound, rank } => {
            let site = load_site(&site.site)?;
            let report = check_equivalence(&site, *bound, *rank)?;
            if human {
                for l in &report.lines {
                    writeln!(out, "{:<12} {:<16} {:<8} {}", l.sheaf, l.check, l.status, l.detail.as_deref().unwrap_or(""))?;
                }
                writeln!(out, "{}", report.summary())?;
            } else {
                out.write_all(report.to_jsonl().as_bytes())?;
            }
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_NOT_FORCED })
        }
        Command::Delta0 {
            site,
            seed,
            count,
            max_rank,
            depth,
        } => {
            let site = load_site(&site.site)?;
            let rows = delta0_rows(&site, *seed, *count, *max_rank, *depth)?;
            let agree = rows.iter().filter(|r| r.agrees).count();
            for r in &rows {
                if human {
                    let mark = if r.agrees { "ok" } else { "MISMATCH" };
                    writeln!(out, "{:>4} {:<8} {:<5} {}  {}", r.case, mark, r.truth, r.formula, r.args)?;
                } else {
                    writeln!(out, "{}", serde_json::to_string(r)?)?;
                }
            }
            if human {
                writeln!(out, "{agree}/{} agree", rows.len())?;
            }
            Ok(if agree == rows.len() { EXIT_OK } else { EXIT_NOT_FORCED })
        }
    }
}

fn validate(arg: &str, human: bool, out: &mut dyn Write) -> Result<i32> {
    let doc = if Path::new(arg).exists() {
        SiteDocument::read(Path::new(arg))?
    } else if let Some(site) = catalog::by_name(arg) {
        SiteDocument::from_site(&site)
    } else {
        SiteDocument::read(Path::new(arg))?
    };
    match doc.load()? {
        Loaded::Site(site) => {
            if human {
                writeln!(
                    out,
                    "valid: {} ({} objects, {} arrows)",
                    site.name,
                    site.cat.num_objects(),
                    site.cat.num_arrows()
                )?;
            } else {
                let line = serde_json::json!({
                    "site": site.name,
                    "valid": true,
                    "objects": site.cat.num_objects(),
                    "arrows": site.cat.num_arrows(),
                });
                writeln!(out, "{line}")?;
            }
            Ok(EXIT_OK)
        }
        Loaded::Invalid(report) => {
            for v in &report.violations {
                if human {
                    writeln!(out, "{}: {}", v.law, v.detail)?;
                } else {
                    writeln!(out, "{}", serde_json::json!({"valid": false, "law": v.law, "detail": v.detail}))?;
                }
            }
            Ok(EXIT_INVALID)
        }
    }
}

fn omega(site: &Site, object: &str, human: bool, out: &mut dyn Write) -> Result<i32> {
    let cat = &site.cat;
    let a = cat.object(object)?;
    let elems = site.closed_sieves(a);
    let index = |s: &crate::sieve::ClosedSieve| elems.iter().position(|e| e == s).expect("closed sieve");
    let mut meet = Vec::new();
    let mut join = Vec::new();
    let mut imp = Vec::new();
    for x in &elems {
        let (mut m, mut j, mut i) = (Vec::new(), Vec::new(), Vec::new());
        for y in &elems {
            m.push(index(&site.heyting_meet(x, y)?));
            j.push(index(&site.heyting_join(x, y)?));
            i.push(index(&site.heyting_impl(x, y)?));
        }
        meet.push(m);
        join.push(j);
        imp.push(i);
    }
    let names: Vec<Vec<String>> = elems.iter().map(|e| cat.arrow_names(e.arrows)).collect();
    if human {
        writeln!(out, "Ω({}) has {} elements", cat.object_name(a), elems.len())?;
        for (i, n) in names.iter().enumerate() {
            writeln!(out, "  {i}: {{{}}}", n.join(", "))?;
        }
        for (label, table) in [("meet", &meet), ("join", &join), ("impl", &imp)] {
            writeln!(out, "{label}")?;
            for row in table.iter() {
                let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                writeln!(out, "  {}", cells.join(" "))?;
            }
        }
    } else {
        let doc = serde_json::json!({
            "object": cat.object_name(a),
            "elements": names,
            "meet": meet,
            "join": join,
            "impl": imp,
        });
        writeln!(out, "{doc}")?;
    }
    Ok(EXIT_OK)
}

fn parse_binding(store: &NameStore, obj: ObjId, binding: &str) -> Result<(String, crate::names::NameId)> {
    let (var, value) = binding
        .split_once('=')
        .ok_or_else(|| Error::Invalid(format!("binding '{binding}' is not of the form var=name")))?;
    let text = if value.trim_start().starts_with('{') {
        value.to_string()
    } else {
        std::fs::read_to_string(PathBuf::from(value))?
    };
    Ok((var.to_string(), store.parse_doc(obj, &text)?))
}

fn force(site: &Site, object: &str, formula: &str, bindings: &[String], rank: usize, human: bool, out: &mut dyn Write) -> Result<i32> {
    let cat = &site.cat;
    let a = cat.object(object)?;
    let phi = parse(formula)?;
    let store = NameStore::new(cat);
    let mut env = Env::new();
    for b in bindings {
        let (var, name) = parse_binding(&store, a, b)?;
        env.insert(&var, name);
    }
    let mut forcer = Forcer::new(site, &store, rank);
    let verdict = forcer.force(a, &phi, &env)?;
    let sieve = forcer.truth_value(a, &phi, &env)?;
    let arrows = cat.arrow_names(sieve.arrows);
    if human {
        writeln!(out, "{}: {verdict}", cat.object_name(a))?;
        writeln!(out, "truth sieve: {{{}}}", arrows.join(", "))?;
    } else {
        let doc = serde_json::json!({
            "object": cat.object_name(a),
            "verdict": verdict,
            "sieve": arrows,
        });
        writeln!(out, "{doc}")?;
    }
    Ok(if verdict.value { EXIT_OK } else { EXIT_NOT_FORCED })
}

/// How one axiom fared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomStatus {
    /// Forced, and the verdict carries over to every rank.
    Pass,
    /// Forced at this rank; the verdict is relative to it.
    RankRelativePass,
    /// Not forced at this rank, in a way that may be due to truncation.
    RankRelativeOpen,
    Fail,
    Budget,
}

impl AxiomStatus {
    pub fn label(self) -> &'static str {
        match self {
            AxiomStatus::Pass => "pass",
            AxiomStatus::RankRelativePass => "rank-relative pass",
            AxiomStatus::RankRelativeOpen => "rank-relative open",
            AxiomStatus::Fail => "fail",
            AxiomStatus::Budget => "budget",
        }
    }

    pub fn is_pass(self) -> bool {
        matches!(
            self,
            AxiomStatus::Pass | AxiomStatus::RankRelativePass | AxiomStatus::RankRelativeOpen
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomRow {
    pub site: String,
    pub axiom: String,
    pub instance_only: bool,
    pub status: AxiomStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub detail: String,
}

/// Classifies a verdict. Core axioms must be forced; instance-only axioms
/// fail only when a false verdict is certain.
pub fn classify_axiom(instance_only: bool, v: &Verdict) -> AxiomStatus {
    match (v.value, v.is_sound()) {
        (true, true) => AxiomStatus::Pass,
        (true, false) => AxiomStatus::RankRelativePass,
        (false, false) if instance_only => AxiomStatus::RankRelativeOpen,
        (false, _) => AxiomStatus::Fail,
    }
}

/// The axiom schedule on `site` at `rank`, one row per axiom.
pub fn axiom_rows(site: &Site, rank: usize, steps: u64) -> Vec<AxiomRow> {
    let store = NameStore::new(&site.cat);
    let mut forcer = Forcer::new(site, &store, rank).with_step_limit(steps);
    axiom_schedule()
        .into_iter()
        .map(|ax| {
            let t = Instant::now();
            let (status, verdict, detail) = match forcer.forced_everywhere(&ax.formula) {
                Ok(v) => (classify_axiom(ax.instance_only, &v), Some(v), format!("{v} [{:.2?}]", t.elapsed())),
                Err(e @ Error::Budget(_)) => (AxiomStatus::Budget, None, e.to_string()),
                Err(e) => (AxiomStatus::Fail, None, e.to_string()),
            };
            AxiomRow {
                site: site.name.clone(),
                axiom: ax.name,
                instance_only: ax.instance_only,
                status,
                verdict,
                detail,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Delta0Row {
    pub case: usize,
    pub object: String,
    pub formula: String,
    pub args: String,
    pub truth: bool,
    pub sieve: Vec<String>,
    pub agrees: bool,
}

/// The seeded Δ₀ suite at every object of `site`.
pub fn delta0_rows(site: &Site, seed: u64, count: usize, max_rank: usize, depth: usize) -> Result<Vec<Delta0Row>> {
    let store = NameStore::new(&site.cat);
    let mut forcer = Forcer::new(site, &store, 0);
    let mut rows = Vec::new();
    for (i, (phi, args)) in random_cases(seed, count, max_rank, depth).into_iter().enumerate() {
        let shown: Vec<String> = args.iter().map(|(k, v)| format!("{k}={v}")).collect();
        for a in site.cat.objects() {
            let outcome = forcer.delta0_absolute(a, &phi, &args)?;
            rows.push(Delta0Row {
                case: i,
                object: site.cat.object_name(a).to_string(),
                formula: phi.to_string(),
                args: shown.join(" "),
                truth: outcome.v_truth,
                sieve: site.cat.arrow_names(outcome.sieve.arrows),
                agrees: outcome.agrees(site),
            });
        }
    }
    Ok(rows)
}
