//! A brute-force decision procedure that never eliminates anything.
//!
//! Each quantifier is expanded over a finite set of candidate values. For a
//! quantifier-free body the candidates are the values that solve some atom
//! for the bound variable, plus one value exceeding every number in sight:
//! every non-solution falsifies each atom mentioning the variable, so one
//! representative is enough. Nested quantifiers can relate the variable to
//! values chosen later, so there the set also covers every value within a
//! reach `T` of zero or an environment value, plus one value beyond it, with
//! `T = 2^q (K + 1) - 1` for body quantifier depth `q` and largest shift `K`.
//! Two assignments agreeing on all differences up to `T` (and both exceeding
//! it elsewhere) satisfy the same depth-`q` formulas, because each further
//! choice can be mirrored while halving the reach.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::formula::{extend, Formula, Kind};

use super::{Base, SnAtom};

/// Largest candidate set `oracle_decide` will enumerate for one quantifier.
pub const ORACLE_CANDIDATE_LIMIT: usize = 1 << 16;

/// Solutions of the atoms of `body` for its index 0 under `env`, plus one
/// fresh value larger than every solution, environment value and shift.
pub fn candidates(body: &Formula<SnAtom>, env: &[u64]) -> Vec<u64> {
    let mut found = BTreeSet::new();
    let mut ceiling = env.iter().copied().max().unwrap_or(0);
    body.for_each_atom(&mut |atom, depth| {
        ceiling = ceiling.max(atom.max_shift());
        if let Some(v) = solve(atom, depth, env) {
            found.insert(v);
        }
    });
    if let Some(&top) = found.iter().next_back() {
        ceiling = ceiling.max(top);
    }
    found.insert(ceiling.saturating_add(1));
    found.into_iter().collect()
}

// Value of the bound variable (index `depth` at the atom) that makes the atom
// true, when the other side is known under `env`.
fn solve(atom: &SnAtom, depth: usize, env: &[u64]) -> Option<u64> {
    let (x, other) = match (atom.lhs.is_var(depth), atom.rhs.is_var(depth)) {
        (true, false) => (atom.lhs, atom.rhs),
        (false, true) => (atom.rhs, atom.lhs),
        _ => return None,
    };
    let known = match other.base {
        Base::Zero => 0,
        Base::Var(j) if j > depth => *env.get(j - depth - 1)? as u128,
        Base::Var(_) => return None,
    };
    let v = (known + other.shift as u128).checked_sub(x.shift as u128)?;
    u64::try_from(v).ok()
}

/// Candidate values sufficient to decide a quantifier over `body`.
pub fn oracle_candidates(body: &Formula<SnAtom>, env: &[u64]) -> Result<Vec<u64>, Error> {
    let depth = body.quantifier_depth();
    let mut set: BTreeSet<u64> = candidates(body, env).into_iter().collect();
    if depth == 0 {
        return Ok(set.into_iter().collect());
    }
    let mut max_shift = 0;
    body.for_each_atom(&mut |a, _| max_shift = max_shift.max(a.max_shift()));
    let reach = u32::try_from(depth)
        .ok()
        .and_then(|q| 1u64.checked_shl(q))
        .and_then(|p| p.checked_mul(max_shift.saturating_add(1)))
        .map(|r| r - 1)
        .filter(|&r| r < ORACLE_CANDIDATE_LIMIT as u64)
        .ok_or(Error::OracleBudget {
            limit: ORACLE_CANDIDATE_LIMIT,
        })?;

    let bases: BTreeSet<u64> = std::iter::once(0).chain(env.iter().copied()).collect();
    for &c in &bases {
        for v in c.saturating_sub(reach)..=c.saturating_add(reach) {
            set.insert(v);
        }
        if set.len() > ORACLE_CANDIDATE_LIMIT {
            return Err(Error::OracleBudget {
                limit: ORACLE_CANDIDATE_LIMIT,
            });
        }
    }
    let top = bases.iter().next_back().copied().unwrap_or(0);
    set.insert(top.saturating_add(reach).saturating_add(1));
    Ok(set.into_iter().collect())
}

/// Truth of `formula` under `env` by candidate enumeration.
pub fn oracle_decide(formula: &Formula<SnAtom>, env: &[u64]) -> Result<bool, Error> {
    formula.check_env(env)?;
    eval(formula, env)
}

fn eval(formula: &Formula<SnAtom>, env: &[u64]) -> Result<bool, Error> {
    Ok(match formula.kind() {
        Kind::Atom(a) => super::atom_eval(a, env)?,
        Kind::False => false,
        Kind::Or(l, r) => eval(l, env)? || eval(r, env)?,
        Kind::And(l, r) => eval(l, env)? && eval(r, env)?,
        Kind::Implies(l, r) => !eval(l, env)? || eval(r, env)?,
        Kind::Exists(body) => {
            for v in oracle_candidates(body, env)? {
                if eval(body, &extend(v, env))? {
                    return Ok(true);
                }
            }
            false
        }
        Kind::Forall(body) => {
            for v in oracle_candidates(body, env)? {
                if !eval(body, &extend(v, env))? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sn::SnTerm;

    fn atom(arity: usize, l: SnTerm, r: SnTerm) -> Formula<SnAtom> {
        Formula::atom(arity, SnAtom::new(l, r)).unwrap()
    }

    #[test]
    fn candidate_examples() {
        let five = atom(1, SnTerm::var(0, 0), SnTerm::zero(5));
        let c = candidates(&five, &[]);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0], 5);
        assert!(c[1] >= 6);

        let test0 = atom(2, SnTerm::var(0, 3), SnTerm::var(1, 1));
        let c = candidates(&test0, &[4]);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0], 2);
        assert!(c[1] > 4);

        let c = candidates(&Formula::falsum(1), &[]);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn nested_atoms_solve_against_the_environment() {
        // exists y. x = 7 & y = y, solving for x through one binder
        let inner = Formula::and(
            atom(2, SnTerm::var(1, 0), SnTerm::zero(7)),
            atom(2, SnTerm::var(0, 0), SnTerm::var(0, 0)),
        );
        let c = candidates(&Formula::exists(inner), &[]);
        assert!(c.contains(&7));
    }

    #[test]
    fn published_formulas() {
        let test0 = Formula::exists(Formula::exists(Formula::and(
            atom(2, SnTerm::var(1, 3), SnTerm::var(0, 1)),
            atom(2, SnTerm::zero(8), SnTerm::var(0, 4)),
        )));
        assert!(oracle_decide(&test0, &[]).unwrap());

        let test1 = Formula::forall(Formula::or(
            atom(1, SnTerm::var(0, 0), SnTerm::zero(0)),
            Formula::exists(atom(2, SnTerm::var(1, 0), SnTerm::var(0, 1))),
        ));
        assert!(oracle_decide(&test1, &[]).unwrap());

        assert!(!oracle_decide(&Formula::falsum(0), &[]).unwrap());
    }

    #[test]
    fn needs_more_than_one_fresh_value() {
        // exists x. exists y. y+4 = x & y != 0 & y != 1  (x = 6, y = 2)
        let body = Formula::and(
            atom(2, SnTerm::var(0, 4), SnTerm::var(1, 0)),
            Formula::and(
                crate::formula::mk_not(atom(2, SnTerm::var(0, 0), SnTerm::zero(0))),
                crate::formula::mk_not(atom(2, SnTerm::var(0, 0), SnTerm::zero(1))),
            ),
        );
        let f = Formula::exists(Formula::exists(body));
        assert!(oracle_decide(&f, &[]).unwrap());

        // forall x. exists y. y = x + 4
        let g = Formula::forall(Formula::exists(atom(
            2,
            SnTerm::var(0, 0),
            SnTerm::var(1, 4),
        )));
        assert!(oracle_decide(&g, &[]).unwrap());

        // exists x. exists y. y = x + 1 & y = 3
        let h = Formula::exists(Formula::exists(Formula::and(
            atom(2, SnTerm::var(0, 0), SnTerm::var(1, 1)),
            atom(2, SnTerm::var(0, 0), SnTerm::zero(3)),
        )));
        assert!(oracle_decide(&h, &[]).unwrap());
    }

    #[test]
    fn env_length_checked() {
        assert!(matches!(
            oracle_decide(&Formula::falsum(1), &[]),
            Err(Error::EnvLength { .. })
        ));
    }
}
