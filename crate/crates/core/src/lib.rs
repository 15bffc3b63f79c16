//! Quantifier elimination for first-order theories with decidable atoms.
//!
//! The engine ([`engine::Engine`]) turns a single-step eliminator for
//! conjunctions of literals into full quantifier elimination and a decision
//! procedure whose answers carry evidence: witnesses for existentials,
//! counterexamples for universals, and providers that produce per-value
//! evidence where the domain is infinite. [`sn`] instantiates it for the
//! theory of successor on the naturals, and [`parser`] reads and prints that
//! theory's formulas in a small ASCII syntax.

pub mod cli;
pub mod dnf;
pub mod engine;
pub mod error;
pub mod evidence;
pub mod formula;
pub mod parser;
pub mod sn;

pub use dnf::{
    interpret_dnf, interpret_product, to_dnf, to_dnf_limited, Dnf, Literal, Product, Truth,
};
pub use engine::{
    instantiate_universal, Engine, ExistsSplit, ForallSplit, Lem, ProductElimination,
};
pub use error::Error;
pub use evidence::{
    check_evidence, Decision, Evidence, EvidenceChecker, Refutation, RefutationProvider,
    UniversalEvidence,
};
pub use formula::{mk_not, Atom, Formula, Kind};
pub use parser::{parse, parse_auto, pretty, ParseError};
pub use sn::{SnAtom, SnTerm, SnTheory};

/// An engine for the successor theory with no DNF size limit.
pub fn sn_engine() -> Engine<SnTheory> {
    Engine::new(SnTheory)
}
