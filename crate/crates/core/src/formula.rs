//! Propositions over a theory of decidable atoms, with de Bruijn binders.
//!
//! A [`Formula`] carries its arity: every variable index inside it is below
//! the arity at its occurrence, and a quantifier body has arity one greater
//! than the quantifier itself. Environments list variable values innermost
//! first, so `env[0]` is the value of index 0.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::Error;

/// An atomic proposition of some theory whose truth is decidable in any
/// environment.
pub trait Atom: Clone + Eq + Hash + Debug + Send + Sync + 'static {
    type Value: Clone + Debug + PartialEq + Send + Sync + 'static;

    /// One more than the largest variable index mentioned, or 0 if closed.
    fn var_bound(&self) -> usize;

    fn eval(&self, env: &[Self::Value]) -> Result<bool, Error>;

    /// An equivalent atom in the theory's normal form.
    fn canonical(&self) -> Self {
        self.clone()
    }

    /// `Some(b)` when the atom evaluates to `b` in every environment.
    fn trivial_truth(&self) -> Option<bool> {
        None
    }

    /// Values at which deferred evidence for a quantifier over `body` is
    /// spot-checked under `env`.
    fn probe_values(body: &Formula<Self>, env: &[Self::Value]) -> Vec<Self::Value>;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind<A> {
    Atom(A),
    False,
    Or(Arc<Formula<A>>, Arc<Formula<A>>),
    And(Arc<Formula<A>>, Arc<Formula<A>>),
    Implies(Arc<Formula<A>>, Arc<Formula<A>>),
    Exists(Arc<Formula<A>>),
    Forall(Arc<Formula<A>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula<A> {
    arity: usize,
    kind: Kind<A>,
}

impl<A: Atom> Formula<A> {
    pub fn atom(arity: usize, atom: A) -> Result<Self, Error> {
        let bound = atom.var_bound();
        if bound > arity {
            return Err(Error::IndexOutOfRange {
                index: bound - 1,
                arity,
            });
        }
        Ok(Formula {
            arity,
            kind: Kind::Atom(atom),
        })
    }

    pub fn falsum(arity: usize) -> Self {
        Formula {
            arity,
            kind: Kind::False,
        }
    }

    /// `false -> false`, the formula used for truth.
    pub fn truth(arity: usize) -> Self {
        mk_not(Self::falsum(arity))
    }

    /// # Panics
    ///
    /// If the operands have different arities.
    pub fn or(lhs: Self, rhs: Self) -> Self {
        let arity = same_arity(&lhs, &rhs);
        Formula {
            arity,
            kind: Kind::Or(Arc::new(lhs), Arc::new(rhs)),
        }
    }

    /// # Panics
    ///
    /// If the operands have different arities.
    pub fn and(lhs: Self, rhs: Self) -> Self {
        let arity = same_arity(&lhs, &rhs);
        Formula {
            arity,
            kind: Kind::And(Arc::new(lhs), Arc::new(rhs)),
        }
    }

    /// # Panics
    ///
    /// If the operands have different arities.
    pub fn implies(lhs: Self, rhs: Self) -> Self {
        let arity = same_arity(&lhs, &rhs);
        Formula {
            arity,
            kind: Kind::Implies(Arc::new(lhs), Arc::new(rhs)),
        }
    }

    /// Binds index 0 of `body`.
    ///
    /// # Panics
    ///
    /// If `body` has arity 0.
    pub fn exists(body: Self) -> Self {
        let arity = binder_arity(&body);
        Formula {
            arity,
            kind: Kind::Exists(Arc::new(body)),
        }
    }

    /// Binds index 0 of `body`.
    ///
    /// # Panics
    ///
    /// If `body` has arity 0.
    pub fn forall(body: Self) -> Self {
        let arity = binder_arity(&body);
        Formula {
            arity,
            kind: Kind::Forall(Arc::new(body)),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &Kind<A> {
        &self.kind
    }

    pub fn is_qfree(&self) -> bool {
        match &self.kind {
            Kind::Atom(_) | Kind::False => true,
            Kind::Or(l, r) | Kind::And(l, r) | Kind::Implies(l, r) => l.is_qfree() && r.is_qfree(),
            Kind::Exists(_) | Kind::Forall(_) => false,
        }
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match &self.kind {
            Kind::Atom(_) | Kind::False => 0,
            Kind::Or(l, r) | Kind::And(l, r) | Kind::Implies(l, r) => {
                l.quantifier_depth().max(r.quantifier_depth())
            }
            Kind::Exists(b) | Kind::Forall(b) => 1 + b.quantifier_depth(),
        }
    }

    /// Number of `Or`, `And` and `Implies` nodes.
    pub fn connective_count(&self) -> usize {
        match &self.kind {
            Kind::Atom(_) | Kind::False => 0,
            Kind::Or(l, r) | Kind::And(l, r) | Kind::Implies(l, r) => {
                1 + l.connective_count() + r.connective_count()
            }
            Kind::Exists(b) | Kind::Forall(b) => b.connective_count(),
        }
    }

    /// Visits every atom together with the number of binders above it.
    pub fn for_each_atom(&self, f: &mut impl FnMut(&A, usize)) {
        self.walk_atoms(0, f)
    }

    fn walk_atoms(&self, depth: usize, f: &mut impl FnMut(&A, usize)) {
        match &self.kind {
            Kind::Atom(a) => f(a, depth),
            Kind::False => {}
            Kind::Or(l, r) | Kind::And(l, r) | Kind::Implies(l, r) => {
                l.walk_atoms(depth, f);
                r.walk_atoms(depth, f);
            }
            Kind::Exists(b) | Kind::Forall(b) => b.walk_atoms(depth + 1, f),
        }
    }

    pub fn check_env(&self, env: &[A::Value]) -> Result<(), Error> {
        if env.len() != self.arity {
            return Err(Error::EnvLength {
                expected: self.arity,
                found: env.len(),
            });
        }
        Ok(())
    }

    /// Truth value of a quantifier-free formula.
    pub fn eval_qfree(&self, env: &[A::Value]) -> Result<bool, Error> {
        if !self.is_qfree() {
            return Err(Error::NotQuantifierFree);
        }
        self.check_env(env)?;
        self.eval_unchecked(env)
    }

    fn eval_unchecked(&self, env: &[A::Value]) -> Result<bool, Error> {
        Ok(match &self.kind {
            Kind::Atom(a) => a.eval(env)?,
            Kind::False => false,
            Kind::Or(l, r) => l.eval_unchecked(env)? || r.eval_unchecked(env)?,
            Kind::And(l, r) => l.eval_unchecked(env)? && r.eval_unchecked(env)?,
            Kind::Implies(l, r) => !l.eval_unchecked(env)? || r.eval_unchecked(env)?,
            Kind::Exists(_) | Kind::Forall(_) => return Err(Error::NotQuantifierFree),
        })
    }
}

/// `φ -> false`.
pub fn mk_not<A: Atom>(formula: Formula<A>) -> Formula<A> {
    let arity = formula.arity;
    Formula::implies(formula, Formula::falsum(arity))
}

fn same_arity<A>(lhs: &Formula<A>, rhs: &Formula<A>) -> usize {
    assert_eq!(
        lhs.arity, rhs.arity,
        "connective operands must share their arity"
    );
    lhs.arity
}

fn binder_arity<A>(body: &Formula<A>) -> usize {
    assert!(body.arity > 0, "quantifier body must have positive arity");
    body.arity - 1
}

/// Joins `items` into a balanced tree with `join`, so that depth grows with
/// the logarithm of the count. Up to three items this is the right fold.
pub fn balanced<A: Atom>(
    mut items: Vec<Formula<A>>,
    join: fn(Formula<A>, Formula<A>) -> Formula<A>,
) -> Option<Formula<A>> {
    match items.len() {
        0 => None,
        1 => items.pop(),
        n => {
            let right = items.split_off(n / 2);
            Some(join(balanced(items, join)?, balanced(right, join)?))
        }
    }
}

/// Prepends the value of a freshly bound variable.
pub(crate) fn extend<V: Clone>(value: V, env: &[V]) -> Vec<V> {
    let mut out = Vec::with_capacity(env.len() + 1);
    out.push(value);
    out.extend_from_slice(env);
    out
}
