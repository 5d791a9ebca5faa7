//! Forcing semantics for intuitionistic set theory with atoms over finite
//! Grothendieck sites.
//!
//! The crate builds name universes over a finite site, evaluates the forcing
//! relation and truth-value sieves, and checks the equivalence between
//! sheaves on the site and the category of sets in the forcing model through
//! the explicit functors `K` and `L`.

pub mod cli;
pub mod error;
pub mod fincat;
pub mod forcing;
pub mod formula;
pub mod hf;
pub mod matching;
pub mod names;
pub mod settopos;
pub mod sieve;
pub mod site;

pub use error::{Error, Result};
pub use fincat::{ArrowId, ArrowSet, FinCategory, NatTransFin, ObjId, PresheafFin, ValidationReport};
pub use forcing::{Forcer, Scope, Verdict};
pub use formula::Formula;
pub use names::{NameId, NameStore};
pub use sieve::{ClosedSieve, Site, Topology};
