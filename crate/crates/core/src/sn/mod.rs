//! The theory of successor on the naturals.
//!
//! Terms are a variable or zero under a known number of successors, and
//! atoms are equations between two terms. Variables cannot be added to each
//! other, which is what keeps single-variable elimination a matter of
//! substitution: an equation mentioning the variable determines it, and a
//! variable constrained only by disequations can always dodge them.

mod oracle;

use std::cmp::Ordering;
use std::fmt;

use crate::dnf::{Literal, LiteralSet, Product, Truth};
use crate::engine::ProductElimination;
use crate::error::Error;
use crate::formula::{Atom, Formula};

pub use oracle::{candidates, oracle_candidates, oracle_decide, ORACLE_CANDIDATE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Zero,
    Var(usize),
}

/// `S^shift(base)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SnTerm {
    pub base: Base,
    pub shift: u64,
}

impl SnTerm {
    pub fn var(index: usize, shift: u64) -> Self {
        SnTerm {
            base: Base::Var(index),
            shift,
        }
    }

    pub fn zero(shift: u64) -> Self {
        SnTerm {
            base: Base::Zero,
            shift,
        }
    }

    pub fn is_var(&self, index: usize) -> bool {
        self.base == Base::Var(index)
    }

    pub fn value(&self, env: &[u64]) -> Result<u128, Error> {
        let base = match self.base {
            Base::Zero => 0,
            Base::Var(i) => *env.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                arity: env.len(),
            })?,
        };
        Ok(base as u128 + self.shift as u128)
    }

    /// Replaces index 0 by `repl`, adding the shifts.
    fn substitute(self, repl: SnTerm) -> SnTerm {
        if !self.is_var(0) {
            return self;
        }
        SnTerm {
            base: repl.base,
            shift: add_shift(self.shift, repl.shift),
        }
    }

    fn strengthen(self) -> SnTerm {
        match self.base {
            Base::Var(i) => {
                debug_assert!(i > 0, "cannot strengthen a term mentioning index 0");
                SnTerm::var(i - 1, self.shift)
            }
            Base::Zero => self,
        }
    }
}

fn add_shift(a: u64, b: u64) -> u64 {
    a.checked_add(b).expect("successor count overflow")
}

/// `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SnAtom {
    pub lhs: SnTerm,
    pub rhs: SnTerm,
}

impl SnAtom {
    pub fn new(lhs: SnTerm, rhs: SnTerm) -> Self {
        SnAtom { lhs, rhs }
    }

    pub fn mentions(&self, index: usize) -> bool {
        self.lhs.is_var(index) || self.rhs.is_var(index)
    }

    pub fn max_shift(&self) -> u64 {
        self.lhs.shift.max(self.rhs.shift)
    }

    fn map_terms(self, f: impl Fn(SnTerm) -> SnTerm) -> SnAtom {
        SnAtom::new(f(self.lhs), f(self.rhs))
    }
}

impl fmt::Display for SnTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.base, self.shift) {
            (Base::Zero, k) => write!(f, "{k}"),
            (Base::Var(i), 0) => write!(f, "#{i}"),
            (Base::Var(i), k) => write!(f, "#{i}+{k}"),
        }
    }
}

impl fmt::Display for SnAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl Atom for SnAtom {
    type Value = u64;

    fn var_bound(&self) -> usize {
        [self.lhs, self.rhs]
            .iter()
            .filter_map(|t| match t.base {
                Base::Var(i) => Some(i + 1),
                Base::Zero => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn eval(&self, env: &[u64]) -> Result<bool, Error> {
        atom_eval(self, env)
    }

    fn canonical(&self) -> Self {
        canonicalize(self)
    }

    fn trivial_truth(&self) -> Option<bool> {
        (self.lhs.base == self.rhs.base).then_some(self.lhs.shift == self.rhs.shift)
    }

    fn probe_values(body: &Formula<Self>, env: &[u64]) -> Vec<u64> {
        let mut values = vec![0, 1];
        for v in candidates(body, env) {
            if !values.contains(&v) {
                values.push(v);
            }
        }
        values
    }
}

pub fn atom_eval(atom: &SnAtom, env: &[u64]) -> Result<bool, Error> {
    Ok(atom.lhs.value(env)? == atom.rhs.value(env)?)
}

/// Cancels the common shift and orients the atom: a variable goes left of
/// zero, and the smaller of two variable indices goes left.
pub fn canonicalize(atom: &SnAtom) -> SnAtom {
    let common = atom.lhs.shift.min(atom.rhs.shift);
    let mut lhs = atom.lhs;
    let mut rhs = atom.rhs;
    lhs.shift -= common;
    rhs.shift -= common;
    let swap = match (lhs.base, rhs.base) {
        (Base::Zero, Base::Var(_)) => true,
        (Base::Var(i), Base::Var(j)) => j.cmp(&i) == Ordering::Less,
        _ => false,
    };
    if swap {
        SnAtom::new(rhs, lhs)
    } else {
        SnAtom::new(lhs, rhs)
    }
}

pub fn literal_truth(lit: &Literal<SnAtom>) -> Truth {
    lit.truth()
}

/// Removes index 0 from `product` using the positive literal `pivot`,
/// `S^a(x) = S^b(t)`.
///
/// Every other occurrence `S^k(x)` becomes `S^(k+b-a)(t)` when `b >= a`.
/// Otherwise `x = t - d` with `d = a - b`, so `S^k(x)` becomes `S^k(t)` and
/// the opposite side gains `d` successors, and the side conditions
/// `t != 0, ..., t != d-1` are returned. The first occurrence of the pivot in
/// the product is dropped; the output is not simplified.
pub fn subst_pivot(
    product: &Product<SnAtom>,
    pivot: &SnAtom,
) -> Result<(Product<SnAtom>, Vec<Literal<SnAtom>>), Error> {
    let (x_side, t_side) = match (pivot.lhs.is_var(0), pivot.rhs.is_var(0)) {
        (true, false) => (pivot.lhs, pivot.rhs),
        (false, true) => (pivot.rhs, pivot.lhs),
        (false, false) => return Err(Error::InvalidPivot("pivot does not mention index 0")),
        (true, true) => return Err(Error::InvalidPivot("pivot mentions index 0 on both sides")),
    };
    let (a, b) = (x_side.shift, t_side.shift);
    let target = SnTerm {
        base: t_side.base,
        shift: 0,
    };

    let mut literals = product.literals.clone();
    if let Some(i) = literals.iter().position(|l| *l == Literal::Pos(*pivot)) {
        literals.remove(i);
    }

    let (out, side) = if b >= a {
        let repl = SnTerm {
            shift: b - a,
            ..target
        };
        let out = literals
            .iter()
            .map(|l| l.map_atom(|at| at.map_terms(|t| t.substitute(repl))))
            .collect();
        (out, Vec::new())
    } else {
        let d = a - b;
        let out = literals
            .iter()
            .map(|l| l.map_atom(|at| shift_substitute(*at, target, d)))
            .collect();
        let side = (0..d)
            .map(|i| Literal::Neg(SnAtom::new(target, SnTerm::zero(i))))
            .collect();
        (out, side)
    };
    Ok((Product::new(product.arity, out), side))
}

// x = t - d: S^k(x) = S^m(s) becomes S^k(t) = S^(m+d)(s).
fn shift_substitute(atom: SnAtom, target: SnTerm, d: u64) -> SnAtom {
    let repl = |side: SnTerm| SnTerm {
        base: target.base,
        shift: side.shift,
    };
    let bump = |side: SnTerm| SnTerm {
        shift: add_shift(side.shift, d),
        ..side
    };
    match (atom.lhs.is_var(0), atom.rhs.is_var(0)) {
        (true, true) => SnAtom::new(repl(atom.lhs), repl(atom.rhs)),
        (true, false) => SnAtom::new(repl(atom.lhs), bump(atom.rhs)),
        (false, true) => SnAtom::new(bump(atom.lhs), repl(atom.rhs)),
        (false, false) => atom,
    }
}

/// How the eliminated variable is determined by a product.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Solution {
    Infeasible,
    /// `x = c`.
    Constant(u64),
    /// `x = env[var] + add - sub`, where `var` indexes the product.
    Offset {
        var: usize,
        add: u64,
        sub: u64,
    },
    /// `x` only has to avoid the values excluded by these disequations.
    Avoid(Vec<SnAtom>),
}

#[derive(Debug)]
struct Reduction {
    solution: Solution,
    /// Literals that no longer mention index 0.
    rest: Vec<Literal<SnAtom>>,
}

impl Reduction {
    fn infeasible() -> Self {
        Reduction {
            solution: Solution::Infeasible,
            rest: Vec::new(),
        }
    }
}

/// Canonicalizes and drops trivially true literals; `None` if one is
/// trivially false.
fn simplify(literals: impl IntoIterator<Item = Literal<SnAtom>>) -> Option<Vec<Literal<SnAtom>>> {
    let mut out = LiteralSet::with_capacity(0);
    for l in literals {
        let l = l.canonical();
        match l.truth() {
            Truth::True => {}
            Truth::False => return None,
            Truth::Unknown => {
                out.insert(l);
            }
        }
    }
    Some(out.into_vec())
}

fn reduce(product: &Product<SnAtom>) -> Reduction {
    let Some(literals) = simplify(product.literals.iter().cloned()) else {
        return Reduction::infeasible();
    };
    let pivot = literals
        .iter()
        .find(|l| l.is_positive() && l.atom().mentions(0))
        .map(|l| *l.atom());

    let Some(pivot) = pivot else {
        let (avoid, rest): (Vec<_>, Vec<_>) =
            literals.into_iter().partition(|l| l.atom().mentions(0));
        return Reduction {
            solution: Solution::Avoid(avoid.iter().map(|l| *l.atom()).collect()),
            rest,
        };
    };

    // canonical with index 0 present and not on both sides, so it is on the left
    debug_assert!(pivot.lhs.is_var(0) && !pivot.rhs.is_var(0));
    let (a, b) = (pivot.lhs.shift, pivot.rhs.shift);
    let (solution, substituted) = match pivot.rhs.base {
        Base::Zero => {
            if a > b {
                return Reduction::infeasible();
            }
            let c = b - a;
            let mut rest = literals;
            if let Some(i) = rest.iter().position(|l| *l == Literal::Pos(pivot)) {
                rest.remove(i);
            }
            let rest: Vec<_> = rest
                .iter()
                .map(|l| l.map_atom(|at| at.map_terms(|t| t.substitute(SnTerm::zero(c)))))
                .collect();
            (Solution::Constant(c), rest)
        }
        Base::Var(var) => {
            let (p, side) = subst_pivot(&Product::new(product.arity, literals), &pivot)
                .expect("canonical pivot is valid");
            let mut rest = p.literals;
            rest.extend(side);
            (
                Solution::Offset {
                    var,
                    add: b,
                    sub: a,
                },
                rest,
            )
        }
    };
    match simplify(substituted) {
        Some(rest) => Reduction { solution, rest },
        None => Reduction::infeasible(),
    }
}

/// Eliminates index 0 from `product`, returning an equivalent formula one
/// arity lower.
///
/// # Panics
///
/// If `product` has arity 0.
pub fn eliminate_product(product: &Product<SnAtom>) -> Formula<SnAtom> {
    assert!(product.arity > 0, "cannot eliminate from a closed product");
    let arity = product.arity - 1;
    let reduction = reduce(product);
    if reduction.solution == Solution::Infeasible {
        return Formula::falsum(arity);
    }
    let literals = reduction
        .rest
        .iter()
        .map(|l| l.map_atom(|at| at.map_terms(SnTerm::strengthen)))
        .collect();
    Product::new(arity, literals).interpret()
}

/// A value for index 0 satisfying `product` under `env`, provided the
/// eliminated product holds under `env`.
pub fn prod_witness(product: &Product<SnAtom>, env: &[u64]) -> Result<u64, Error> {
    if env.len() + 1 != product.arity {
        return Err(Error::EnvLength {
            expected: product.arity.saturating_sub(1),
            found: env.len(),
        });
    }
    let unsat = || Error::Internal("witness requested for an unsatisfiable product".into());
    let lookup = |term: SnTerm| SnTerm::value(&term.strengthen(), env);
    let witness = match reduce(product).solution {
        Solution::Infeasible => return Err(unsat()),
        Solution::Constant(c) => c,
        Solution::Offset { var, add, sub } => {
            let v = lookup(SnTerm::var(var, add))?;
            let v = v.checked_sub(sub as u128).ok_or_else(unsat)?;
            u64::try_from(v).map_err(|_| Error::Overflow("computing a witness"))?
        }
        Solution::Avoid(atoms) => {
            let mut excluded = Vec::with_capacity(atoms.len());
            for at in atoms {
                // canonical: S^k(x) = S^m(s) with s not index 0
                let other = lookup(at.rhs)?;
                if let Some(v) = other.checked_sub(at.lhs.shift as u128) {
                    excluded.push(v);
                }
            }
            excluded.sort_unstable();
            let mut w: u128 = 0;
            for v in excluded {
                if v == w {
                    w += 1;
                } else if v > w {
                    break;
                }
            }
            u64::try_from(w).map_err(|_| Error::Overflow("computing a witness"))?
        }
    };
    let mut full = Vec::with_capacity(env.len() + 1);
    full.push(witness);
    full.extend_from_slice(env);
    if !product.eval(&full)? {
        return Err(unsat());
    }
    Ok(witness)
}

/// The successor theory's single-step eliminator.
#[derive(Clone, Copy, Debug, Default)]
pub struct SnTheory;

impl ProductElimination for SnTheory {
    type Atom = SnAtom;

    fn eliminate(&self, product: &Product<SnAtom>) -> Formula<SnAtom> {
        eliminate_product(product)
    }

    fn witness(&self, product: &Product<SnAtom>, env: &[u64]) -> Result<u64, Error> {
        prod_witness(product, env)
    }

    // A pivot `x + a = t + b` with `a > b` adds `a - b` side conditions.
    fn eliminated_size(&self, product: &Product<SnAtom>) -> usize {
        let side = product
            .literals
            .iter()
            .filter(|l| l.is_positive())
            .map(|l| {
                let SnAtom { lhs, rhs } = *l.atom();
                match (lhs.is_var(0), rhs.is_var(0)) {
                    (true, false) => lhs.shift.saturating_sub(rhs.shift),
                    (false, true) => rhs.shift.saturating_sub(lhs.shift),
                    _ => 0,
                }
            })
            .max()
            .unwrap_or(0);
        usize::try_from(side)
            .unwrap_or(usize::MAX)
            .saturating_add(product.literals.len())
    }
}
