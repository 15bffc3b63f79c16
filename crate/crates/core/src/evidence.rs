//! Evidence and refutations attached to decisions, and their checker.
//!
//! Evidence mirrors the shape of the formula it certifies. Quantifiers over
//! an infinite domain cannot be certified by a finite table, so universal
//! evidence (and refutation of an existential) is a provider that produces
//! the body's certificate for any requested value. The checker follows the
//! formula structure and spot-checks providers at the values returned by
//! [`Atom::probe_values`] plus any extra values it is configured with.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::formula::{extend, Atom, Formula, Kind};

type Provider<A, T> = Arc<dyn Fn(<A as Atom>::Value) -> Result<T, Error> + Send + Sync>;

/// Evidence that a universally quantified body holds at every value.
pub struct UniversalEvidence<A: Atom> {
    provider: Provider<A, Evidence<A>>,
}

/// Evidence that no value satisfies an existentially quantified body.
pub struct RefutationProvider<A: Atom> {
    provider: Provider<A, Refutation<A>>,
}

impl<A: Atom> UniversalEvidence<A> {
    pub fn new(f: impl Fn(A::Value) -> Result<Evidence<A>, Error> + Send + Sync + 'static) -> Self {
        UniversalEvidence {
            provider: Arc::new(f),
        }
    }

    /// Evidence for the body with `value` bound to its variable.
    pub fn instantiate(&self, value: A::Value) -> Result<Evidence<A>, Error> {
        (self.provider)(value)
    }
}

impl<A: Atom> RefutationProvider<A> {
    pub fn new(
        f: impl Fn(A::Value) -> Result<Refutation<A>, Error> + Send + Sync + 'static,
    ) -> Self {
        RefutationProvider {
            provider: Arc::new(f),
        }
    }

    /// Refutation of the body with `value` bound to its variable.
    pub fn refute_at(&self, value: A::Value) -> Result<Refutation<A>, Error> {
        (self.provider)(value)
    }
}

impl<A: Atom> Clone for UniversalEvidence<A> {
    fn clone(&self) -> Self {
        UniversalEvidence {
            provider: Arc::clone(&self.provider),
        }
    }
}

impl<A: Atom> Clone for RefutationProvider<A> {
    fn clone(&self) -> Self {
        RefutationProvider {
            provider: Arc::clone(&self.provider),
        }
    }
}

impl<A: Atom> fmt::Debug for UniversalEvidence<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("UniversalEvidence(..)")
    }
}

impl<A: Atom> fmt::Debug for RefutationProvider<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RefutationProvider(..)")
    }
}

/// Why a formula holds.
#[derive(Clone, Debug)]
pub enum Evidence<A: Atom> {
    AtomHolds,
    Left(Box<Evidence<A>>),
    Right(Box<Evidence<A>>),
    Pair(Box<Evidence<A>>, Box<Evidence<A>>),
    /// Implication holds because its antecedent fails.
    NegAntecedent(Box<Refutation<A>>),
    /// Implication holds because its consequent holds.
    Consequent(Box<Evidence<A>>),
    Witness(A::Value, Box<Evidence<A>>),
    Universal(UniversalEvidence<A>),
}

/// Why a formula fails.
#[derive(Clone, Debug)]
pub enum Refutation<A: Atom> {
    /// `false` refutes itself.
    Absurd,
    AtomFails,
    /// Both disjuncts fail.
    Neither(Box<Refutation<A>>, Box<Refutation<A>>),
    AndLeft(Box<Refutation<A>>),
    AndRight(Box<Refutation<A>>),
    /// Antecedent holds and consequent fails.
    ImpliesFails(Box<Evidence<A>>, Box<Refutation<A>>),
    Counterexample(A::Value, Box<Refutation<A>>),
    NoWitness(RefutationProvider<A>),
}

#[derive(Clone, Debug)]
pub enum Decision<A: Atom> {
    Yes(Evidence<A>),
    No(Refutation<A>),
}

impl<A: Atom> Decision<A> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

impl<A: Atom> Evidence<A> {
    /// Existential witnesses along the evidence, outermost first. Stops at
    /// universal evidence.
    pub fn witnesses(&self) -> Vec<A::Value> {
        let mut out = Vec::new();
        self.collect_witnesses(&mut out);
        out
    }

    fn collect_witnesses(&self, out: &mut Vec<A::Value>) {
        match self {
            Evidence::AtomHolds | Evidence::NegAntecedent(_) | Evidence::Universal(_) => {}
            Evidence::Left(e) | Evidence::Right(e) | Evidence::Consequent(e) => {
                e.collect_witnesses(out)
            }
            Evidence::Pair(l, r) => {
                l.collect_witnesses(out);
                r.collect_witnesses(out);
            }
            Evidence::Witness(v, e) => {
                out.push(v.clone());
                e.collect_witnesses(out);
            }
        }
    }

    /// The outermost universal evidence reachable without crossing a
    /// witness.
    pub fn first_universal(&self) -> Option<&UniversalEvidence<A>> {
        match self {
            Evidence::Universal(u) => Some(u),
            Evidence::Left(e) | Evidence::Right(e) | Evidence::Consequent(e) => e.first_universal(),
            Evidence::Pair(l, r) => l.first_universal().or_else(|| r.first_universal()),
            _ => None,
        }
    }
}

impl<A: Atom> Refutation<A> {
    /// The outermost counterexample value on the refutation path.
    pub fn counterexample(&self) -> Option<&A::Value> {
        match self {
            Refutation::Counterexample(v, _) => Some(v),
            Refutation::Neither(l, r) => l.counterexample().or_else(|| r.counterexample()),
            Refutation::AndLeft(r) | Refutation::AndRight(r) => r.counterexample(),
            Refutation::ImpliesFails(_, r) => r.counterexample(),
            _ => None,
        }
    }
}

/// Validates decisions against formulas.
#[derive(Clone, Debug)]
pub struct EvidenceChecker<A: Atom> {
    /// Probe values from the atom theory are used when set.
    pub theory_probes: bool,
    /// Probed in addition to the theory's values.
    pub extra_probes: Vec<A::Value>,
}

impl<A: Atom> Default for EvidenceChecker<A> {
    fn default() -> Self {
        EvidenceChecker {
            theory_probes: true,
            extra_probes: Vec::new(),
        }
    }
}

/// Checks `decision` for `formula` under `env` with the default probes.
/// Returns `false` on any mismatch, including environment length.
pub fn check_evidence<A: Atom>(
    decision: &Decision<A>,
    formula: &Formula<A>,
    env: &[A::Value],
) -> bool {
    EvidenceChecker::default().check(decision, formula, env)
}

impl<A: Atom> EvidenceChecker<A> {
    pub fn check(&self, decision: &Decision<A>, formula: &Formula<A>, env: &[A::Value]) -> bool {
        if formula.check_env(env).is_err() {
            return false;
        }
        match decision {
            Decision::Yes(e) => self.holds(e, formula, env),
            Decision::No(r) => self.fails(r, formula, env),
        }
    }

    fn probes(&self, body: &Formula<A>, env: &[A::Value]) -> Vec<A::Value> {
        let mut values = if self.theory_probes {
            A::probe_values(body, env)
        } else {
            Vec::new()
        };
        for v in &self.extra_probes {
            if !values.contains(v) {
                values.push(v.clone());
            }
        }
        values
    }

    pub fn holds(&self, ev: &Evidence<A>, formula: &Formula<A>, env: &[A::Value]) -> bool {
        match (ev, formula.kind()) {
            (Evidence::AtomHolds, Kind::Atom(a)) => a.eval(env).unwrap_or(false),
            (Evidence::Left(e), Kind::Or(l, _)) => self.holds(e, l, env),
            (Evidence::Right(e), Kind::Or(_, r)) => self.holds(e, r, env),
            (Evidence::Pair(el, er), Kind::And(l, r)) => {
                self.holds(el, l, env) && self.holds(er, r, env)
            }
            (Evidence::NegAntecedent(r), Kind::Implies(l, _)) => self.fails(r, l, env),
            (Evidence::Consequent(e), Kind::Implies(_, r)) => self.holds(e, r, env),
            (Evidence::Witness(v, e), Kind::Exists(body)) => {
                self.holds(e, body, &extend(v.clone(), env))
            }
            (Evidence::Universal(u), Kind::Forall(body)) => {
                self.probes(body, env).into_iter().all(|v| {
                    let inner = extend(v.clone(), env);
                    u.instantiate(v)
                        .map(|e| self.holds(&e, body, &inner))
                        .unwrap_or(false)
                })
            }
            _ => false,
        }
    }

    pub fn fails(&self, r: &Refutation<A>, formula: &Formula<A>, env: &[A::Value]) -> bool {
        match (r, formula.kind()) {
            (Refutation::Absurd, Kind::False) => true,
            (Refutation::AtomFails, Kind::Atom(a)) => a.eval(env).map(|b| !b).unwrap_or(false),
            (Refutation::Neither(rl, rr), Kind::Or(l, r)) => {
                self.fails(rl, l, env) && self.fails(rr, r, env)
            }
            (Refutation::AndLeft(rl), Kind::And(l, _)) => self.fails(rl, l, env),
            (Refutation::AndRight(rr), Kind::And(_, r)) => self.fails(rr, r, env),
            (Refutation::ImpliesFails(e, rr), Kind::Implies(l, r)) => {
                self.holds(e, l, env) && self.fails(rr, r, env)
            }
            (Refutation::Counterexample(v, rb), Kind::Forall(body)) => {
                self.fails(rb, body, &extend(v.clone(), env))
            }
            (Refutation::NoWitness(p), Kind::Exists(body)) => {
                self.probes(body, env).into_iter().all(|v| {
                    let inner = extend(v.clone(), env);
                    p.refute_at(v)
                        .map(|r| self.fails(&r, body, &inner))
                        .unwrap_or(false)
                })
            }
            _ => false,
        }
    }
}

// Right-nested witnesses and pairs print as one flat tuple, e.g. `(2, 4, refl, refl)`.
fn tuple_items<A: Atom>(ev: &Evidence<A>, out: &mut Vec<String>)
where
    A::Value: fmt::Display,
{
    match ev {
        Evidence::Witness(v, e) => {
            out.push(v.to_string());
            tuple_items(e, out);
        }
        Evidence::Pair(l, r) => {
            out.push(l.to_string());
            tuple_items(r, out);
        }
        other => out.push(other.to_string()),
    }
}

impl<A: Atom> fmt::Display for Evidence<A>
where
    A::Value: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::AtomHolds => f.write_str("refl"),
            Evidence::Left(e) => write!(f, "inl {e}"),
            Evidence::Right(e) => write!(f, "inr {e}"),
            Evidence::NegAntecedent(r) => write!(f, "vacuous {r}"),
            Evidence::Consequent(e) => write!(f, "then {e}"),
            Evidence::Universal(_) => f.write_str("<for every value>"),
            Evidence::Pair(..) | Evidence::Witness(..) => {
                let mut items = Vec::new();
                tuple_items(self, &mut items);
                write!(f, "({})", items.join(", "))
            }
        }
    }
}

impl<A: Atom> fmt::Display for Refutation<A>
where
    A::Value: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::Absurd => f.write_str("absurd"),
            Refutation::AtomFails => f.write_str("neq"),
            Refutation::Neither(l, r) => write!(f, "neither({l}, {r})"),
            Refutation::AndLeft(r) => write!(f, "fst {r}"),
            Refutation::AndRight(r) => write!(f, "snd {r}"),
            Refutation::ImpliesFails(e, r) => write!(f, "but({e}, {r})"),
            Refutation::Counterexample(v, r) => write!(f, "counterexample({v}, {r})"),
            Refutation::NoWitness(_) => f.write_str("<no value>"),
        }
    }
}
