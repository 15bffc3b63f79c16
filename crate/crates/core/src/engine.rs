//! Theory-generic quantifier elimination and evidence-producing decisions.
//!
//! A theory supplies [`ProductElimination`]: removal of one existential from
//! a conjunction of literals, plus a witness for it. The engine lifts that to
//! arbitrary formulas from the inside out. `exists x. φ` becomes the
//! disjunction of the eliminated products of the DNF of (the eliminated) φ,
//! and `forall x. φ` becomes `~exists x. ~φ`, which is sound here because
//! the eliminated body is quantifier-free and therefore decidable.

use std::sync::Arc;

use either::Either;

use crate::dnf::{to_dnf_limited, Dnf, Product};
use crate::error::Error;
use crate::evidence::{Decision, Evidence, Refutation, RefutationProvider, UniversalEvidence};
use crate::formula::{balanced, extend, mk_not, Atom, Formula, Kind};

/// Single-step elimination of the variable at index 0 from a product.
///
/// Implementations must guarantee, for every product `p` of arity `n + 1`
/// and environment `e` of length `n`:
/// - `eliminate(p)` is quantifier-free and has arity `n`;
/// - `eliminate(p)` holds under `e` iff some value `x` makes `p` hold under
///   `x :: e`;
/// - whenever `eliminate(p)` holds under `e`, `p` holds under
///   `witness(p, e) :: e`.
pub trait ProductElimination: Send + Sync + 'static {
    type Atom: Atom;

    fn eliminate(&self, product: &Product<Self::Atom>) -> Formula<Self::Atom>;

    fn witness(
        &self,
        product: &Product<Self::Atom>,
        env: &[<Self::Atom as Atom>::Value],
    ) -> Result<<Self::Atom as Atom>::Value, Error>;

    /// An upper bound on the number of literals in `eliminate(product)`,
    /// checked against the engine's literal limit before eliminating.
    fn eliminated_size(&self, product: &Product<Self::Atom>) -> usize {
        product.literals.len()
    }
}

type Value<T> = <<T as ProductElimination>::Atom as Atom>::Value;

/// Evidence for a formula or a refutation of it.
pub type Lem<A> = Either<Evidence<A>, Refutation<A>>;

/// Evidence for every value, or one value with a refutation there.
pub type ForallSplit<A> = Either<UniversalEvidence<A>, (<A as Atom>::Value, Refutation<A>)>;

/// One value with evidence there, or refutations for every value.
pub type ExistsSplit<A> = Either<(<A as Atom>::Value, Evidence<A>), RefutationProvider<A>>;

/// A product of the DNF under a quantifier together with its elimination.
#[derive(Debug)]
struct Branch<A> {
    product: Product<A>,
    eliminated: Formula<A>,
}

/// A formula annotated with the quantifier-free equivalent of every
/// subformula. Built once per decision and shared with evidence providers.
#[derive(Debug)]
struct Lifted<A> {
    qfree: Formula<A>,
    node: Node<A>,
}

#[derive(Debug)]
enum Node<A> {
    Atom(A),
    False,
    Or(Arc<Lifted<A>>, Arc<Lifted<A>>),
    And(Arc<Lifted<A>>, Arc<Lifted<A>>),
    Implies(Arc<Lifted<A>>, Arc<Lifted<A>>),
    /// Branches of the DNF of the body.
    Exists(Arc<Lifted<A>>, Vec<Branch<A>>),
    /// Branches of the DNF of the negated body.
    Forall(Arc<Lifted<A>>, Vec<Branch<A>>),
}

pub struct Engine<T> {
    theory: Arc<T>,
    max_products: Option<usize>,
    max_literals: Option<usize>,
}

impl<T> Clone for Engine<T> {
    fn clone(&self) -> Self {
        Engine {
            theory: Arc::clone(&self.theory),
            max_products: self.max_products,
            max_literals: self.max_literals,
        }
    }
}

impl<T: ProductElimination> Engine<T> {
    pub fn new(theory: T) -> Self {
        Engine {
            theory: Arc::new(theory),
            max_products: None,
            max_literals: None,
        }
    }

    /// Fail with [`Error::DnfLimit`] instead of building a DNF with more
    /// than `limit` products.
    pub fn with_product_limit(mut self, limit: usize) -> Self {
        self.max_products = Some(limit);
        self
    }

    /// Fail with [`Error::EliminationLimit`] instead of eliminating a
    /// product whose result may have more than `limit` literals.
    pub fn with_literal_limit(mut self, limit: usize) -> Self {
        self.max_literals = Some(limit);
        self
    }

    pub fn theory(&self) -> &T {
        &self.theory
    }

    /// Eliminates index 0 from a DNF by distributing over its products.
    /// The literal limit does not apply here.
    pub fn eliminate_dnf(&self, dnf: &Dnf<T::Atom>) -> Formula<T::Atom> {
        let branches: Vec<_> = dnf.products.iter().map(|p| self.branch(p)).collect();
        Self::disjunction(&branches, dnf.arity - 1)
    }

    /// Returns a quantifier-free formula equivalent to `formula`.
    pub fn lift_qe(&self, formula: &Formula<T::Atom>) -> Result<Formula<T::Atom>, Error> {
        Ok(self.lift(formula)?.qfree.clone())
    }

    fn branch(&self, product: &Product<T::Atom>) -> Branch<T::Atom> {
        Branch {
            product: product.clone(),
            eliminated: self.theory.eliminate(product),
        }
    }

    fn branches(&self, dnf: &Dnf<T::Atom>) -> Result<Vec<Branch<T::Atom>>, Error> {
        dnf.products
            .iter()
            .map(|p| match self.max_literals {
                Some(limit) if self.theory.eliminated_size(p) > limit => {
                    Err(Error::EliminationLimit { limit })
                }
                _ => Ok(self.branch(p)),
            })
            .collect()
    }

    fn disjunction(branches: &[Branch<T::Atom>], arity: usize) -> Formula<T::Atom> {
        let parts = branches.iter().map(|b| b.eliminated.clone()).collect();
        balanced(parts, Formula::or).unwrap_or_else(|| Formula::falsum(arity))
    }

    fn lift(&self, formula: &Formula<T::Atom>) -> Result<Arc<Lifted<T::Atom>>, Error> {
        let arity = formula.arity();
        let lifted = match formula.kind() {
            Kind::Atom(a) => Lifted {
                qfree: formula.clone(),
                node: Node::Atom(a.clone()),
            },
            Kind::False => Lifted {
                qfree: formula.clone(),
                node: Node::False,
            },
            Kind::Or(l, r) => {
                let (l, r) = (self.lift(l)?, self.lift(r)?);
                Lifted {
                    qfree: Formula::or(l.qfree.clone(), r.qfree.clone()),
                    node: Node::Or(l, r),
                }
            }
            Kind::And(l, r) => {
                let (l, r) = (self.lift(l)?, self.lift(r)?);
                Lifted {
                    qfree: Formula::and(l.qfree.clone(), r.qfree.clone()),
                    node: Node::And(l, r),
                }
            }
            Kind::Implies(l, r) => {
                let (l, r) = (self.lift(l)?, self.lift(r)?);
                Lifted {
                    qfree: Formula::implies(l.qfree.clone(), r.qfree.clone()),
                    node: Node::Implies(l, r),
                }
            }
            Kind::Exists(body) => {
                let body = self.lift(body)?;
                let dnf = to_dnf_limited(&body.qfree, self.max_products)?;
                let branches = self.branches(&dnf)?;
                Lifted {
                    qfree: Self::disjunction(&branches, arity),
                    node: Node::Exists(body, branches),
                }
            }
            Kind::Forall(body) => {
                let body = self.lift(body)?;
                let dnf = to_dnf_limited(&mk_not(body.qfree.clone()), self.max_products)?;
                let branches = self.branches(&dnf)?;
                Lifted {
                    qfree: mk_not(Self::disjunction(&branches, arity)),
                    node: Node::Forall(body, branches),
                }
            }
        };
        Ok(Arc::new(lifted))
    }

    /// Decides `formula` under `env`, with evidence for the answer.
    pub fn decide(
        &self,
        formula: &Formula<T::Atom>,
        env: &[Value<T>],
    ) -> Result<Decision<T::Atom>, Error> {
        formula.check_env(env)?;
        let lifted = self.lift(formula)?;
        let expected = lifted.qfree.eval_qfree(env)?;
        let decision = self.decide_lifted(&lifted, env)?;
        if decision.is_yes() != expected {
            return Err(Error::Internal(
                "evidence construction disagrees with the eliminated formula".into(),
            ));
        }
        Ok(decision)
    }

    fn first_true_branch<'b>(
        &self,
        branches: &'b [Branch<T::Atom>],
        env: &[Value<T>],
    ) -> Result<Option<&'b Branch<T::Atom>>, Error> {
        for b in branches {
            if b.eliminated.eval_qfree(env)? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    fn decide_lifted(
        &self,
        lifted: &Arc<Lifted<T::Atom>>,
        env: &[Value<T>],
    ) -> Result<Decision<T::Atom>, Error> {
        use Decision::{No, Yes};

        Ok(match &lifted.node {
            Node::Atom(a) => {
                if a.eval(env)? {
                    Yes(Evidence::AtomHolds)
                } else {
                    No(Refutation::AtomFails)
                }
            }
            Node::False => No(Refutation::Absurd),
            Node::Or(l, r) => match self.decide_lifted(l, env)? {
                Yes(e) => Yes(Evidence::Left(Box::new(e))),
                No(rl) => match self.decide_lifted(r, env)? {
                    Yes(e) => Yes(Evidence::Right(Box::new(e))),
                    No(rr) => No(Refutation::Neither(Box::new(rl), Box::new(rr))),
                },
            },
            Node::And(l, r) => match self.decide_lifted(l, env)? {
                No(rl) => No(Refutation::AndLeft(Box::new(rl))),
                Yes(el) => match self.decide_lifted(r, env)? {
                    No(rr) => No(Refutation::AndRight(Box::new(rr))),
                    Yes(er) => Yes(Evidence::Pair(Box::new(el), Box::new(er))),
                },
            },
            Node::Implies(l, r) => match self.decide_lifted(l, env)? {
                No(rl) => Yes(Evidence::NegAntecedent(Box::new(rl))),
                Yes(el) => match self.decide_lifted(r, env)? {
                    Yes(er) => Yes(Evidence::Consequent(Box::new(er))),
                    No(rr) => No(Refutation::ImpliesFails(Box::new(el), Box::new(rr))),
                },
            },
            Node::Exists(body, branches) => match self.first_true_branch(branches, env)? {
                Some(b) => {
                    let w = self.theory.witness(&b.product, env)?;
                    let ev = self.prove(body, &extend(w.clone(), env))?;
                    Yes(Evidence::Witness(w, Box::new(ev)))
                }
                None => No(Refutation::NoWitness(self.refutation_provider(body, env))),
            },
            Node::Forall(body, branches) => match self.first_true_branch(branches, env)? {
                Some(b) => {
                    let w = self.theory.witness(&b.product, env)?;
                    let r = self.refute(body, &extend(w.clone(), env))?;
                    No(Refutation::Counterexample(w, Box::new(r)))
                }
                None => Yes(Evidence::Universal(self.universal_provider(body, env))),
            },
        })
    }

    fn prove(
        &self,
        lifted: &Arc<Lifted<T::Atom>>,
        env: &[Value<T>],
    ) -> Result<Evidence<T::Atom>, Error> {
        match self.decide_lifted(lifted, env)? {
            Decision::Yes(e) => Ok(e),
            Decision::No(_) => Err(Error::Internal(
                "witness does not satisfy the quantified body".into(),
            )),
        }
    }

    fn refute(
        &self,
        lifted: &Arc<Lifted<T::Atom>>,
        env: &[Value<T>],
    ) -> Result<Refutation<T::Atom>, Error> {
        match self.decide_lifted(lifted, env)? {
            Decision::No(r) => Ok(r),
            Decision::Yes(_) => Err(Error::Internal(
                "counterexample does not falsify the quantified body".into(),
            )),
        }
    }

    fn universal_provider(
        &self,
        body: &Arc<Lifted<T::Atom>>,
        env: &[Value<T>],
    ) -> UniversalEvidence<T::Atom> {
        let (engine, body, env) = (self.clone(), Arc::clone(body), env.to_vec());
        UniversalEvidence::new(move |v| engine.prove(&body, &extend(v, &env)))
    }

    fn refutation_provider(
        &self,
        body: &Arc<Lifted<T::Atom>>,
        env: &[Value<T>],
    ) -> RefutationProvider<T::Atom> {
        let (engine, body, env) = (self.clone(), Arc::clone(body), env.to_vec());
        RefutationProvider::new(move |v| engine.refute(&body, &extend(v, &env)))
    }

    /// Excluded middle: evidence or refutation, never both.
    pub fn lem(&self, formula: &Formula<T::Atom>, env: &[Value<T>]) -> Result<Lem<T::Atom>, Error> {
        Ok(match self.decide(formula, env)? {
            Decision::Yes(e) => Either::Left(e),
            Decision::No(r) => Either::Right(r),
        })
    }

    /// Either `body` holds for every value of index 0, or a value where it
    /// fails together with the refutation there.
    pub fn forall_or_counterexample(
        &self,
        body: &Formula<T::Atom>,
        env: &[Value<T>],
    ) -> Result<ForallSplit<T::Atom>, Error> {
        let formula = quantify(body, env, Formula::forall)?;
        match self.decide(&formula, env)? {
            Decision::Yes(Evidence::Universal(u)) => Ok(Either::Left(u)),
            Decision::No(Refutation::Counterexample(v, r)) => Ok(Either::Right((v, *r))),
            _ => Err(Error::Internal(
                "unexpected decision shape for a universal".into(),
            )),
        }
    }

    /// Either a value where `body` holds with evidence, or a provider of
    /// refutations for every value.
    pub fn exists_or_refutation(
        &self,
        body: &Formula<T::Atom>,
        env: &[Value<T>],
    ) -> Result<ExistsSplit<T::Atom>, Error> {
        let formula = quantify(body, env, Formula::exists)?;
        match self.decide(&formula, env)? {
            Decision::Yes(Evidence::Witness(v, e)) => Ok(Either::Left((v, *e))),
            Decision::No(Refutation::NoWitness(p)) => Ok(Either::Right(p)),
            _ => Err(Error::Internal(
                "unexpected decision shape for an existential".into(),
            )),
        }
    }
}

fn quantify<A: Atom>(
    body: &Formula<A>,
    env: &[A::Value],
    binder: fn(Formula<A>) -> Formula<A>,
) -> Result<Formula<A>, Error> {
    if body.arity() != env.len() + 1 {
        return Err(Error::EnvLength {
            expected: body.arity().saturating_sub(1),
            found: env.len(),
        });
    }
    Ok(binder(body.clone()))
}

/// Evidence for the body of a universal at `value`.
pub fn instantiate_universal<A: Atom>(
    ev: &UniversalEvidence<A>,
    value: A::Value,
) -> Result<Evidence<A>, Error> {
    ev.instantiate(value)
}
