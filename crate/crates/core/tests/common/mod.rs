//! Shared helpers for the integration tests: a seeded formula generator and
//! a crude enumeration oracle.
#![allow(dead_code)]

use qelim::{mk_not, Formula, Kind, SnAtom, SnTerm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for generated formulas.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub depth: usize,
    pub quantifiers: usize,
    pub max_shift: u64,
}

fn base_term(base: Option<usize>, shift: u64) -> SnTerm {
    match base {
        Some(i) => SnTerm::var(i, shift),
        None => SnTerm::zero(shift),
    }
}

fn random_base(rng: &mut TestRng, arity: usize) -> Option<usize> {
    // `None` is zero; the innermost variable is favoured.
    match rng.gen_range(0..=arity + 1) {
        0 => None,
        _ if arity == 0 => None,
        k if k > arity => Some(0),
        k => Some(k - 1),
    }
}

/// An atom whose two sides usually have different bases.
pub fn random_atom(rng: &mut TestRng, arity: usize, max_shift: u64) -> Formula<SnAtom> {
    let lhs = random_base(rng, arity);
    let mut rhs = random_base(rng, arity);
    for _ in 0..3 {
        if rhs != lhs || rng.gen_bool(0.1) {
            break;
        }
        rhs = random_base(rng, arity);
    }
    let atom = SnAtom::new(
        base_term(lhs, rng.gen_range(0..=max_shift)),
        base_term(rhs, rng.gen_range(0..=max_shift)),
    );
    Formula::atom(arity, atom).expect("indices below arity")
}

/// A random formula of the given arity using at most `limits.quantifiers`
/// binders in total and connective depth at most `limits.depth`.
pub fn random_formula(rng: &mut TestRng, arity: usize, limits: Limits) -> Formula<SnAtom> {
    let mut budget = limits.quantifiers;
    gen(rng, arity, limits.depth, &mut budget, limits.max_shift)
}

fn gen(
    rng: &mut TestRng,
    arity: usize,
    depth: usize,
    budget: &mut usize,
    max_shift: u64,
) -> Formula<SnAtom> {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..12) {
            0 => Formula::falsum(arity),
            1 => mk_not(random_atom(rng, arity, max_shift)),
            _ if arity == 0 => Formula::falsum(arity),
            _ => random_atom(rng, arity, max_shift),
        };
    }
    let choice = rng.gen_range(0..if *budget > 0 { 7 } else { 4 });
    match choice {
        0 => Formula::or(
            gen(rng, arity, depth - 1, budget, max_shift),
            gen(rng, arity, depth - 1, budget, max_shift),
        ),
        1 => Formula::and(
            gen(rng, arity, depth - 1, budget, max_shift),
            gen(rng, arity, depth - 1, budget, max_shift),
        ),
        2 => Formula::implies(
            gen(rng, arity, depth - 1, budget, max_shift),
            gen(rng, arity, depth - 1, budget, max_shift),
        ),
        3 => mk_not(gen(rng, arity, depth - 1, budget, max_shift)),
        4 => {
            *budget -= 1;
            Formula::forall(gen(rng, arity + 1, depth - 1, budget, max_shift))
        }
        _ => {
            *budget -= 1;
            Formula::exists(gen(rng, arity + 1, depth - 1, budget, max_shift))
        }
    }
}

/// A random quantifier-free formula.
pub fn random_qfree(
    rng: &mut TestRng,
    arity: usize,
    depth: usize,
    max_shift: u64,
) -> Formula<SnAtom> {
    random_formula(
        rng,
        arity,
        Limits {
            depth,
            quantifiers: 0,
            max_shift,
        },
    )
}

pub fn random_env(rng: &mut TestRng, arity: usize, max_value: u64) -> Vec<u64> {
    (0..arity).map(|_| rng.gen_range(0..=max_value)).collect()
}

pub fn count_quantifiers(f: &Formula<SnAtom>) -> usize {
    match f.kind() {
        Kind::Atom(_) | Kind::False => 0,
        Kind::Or(l, r) | Kind::And(l, r) | Kind::Implies(l, r) => {
            count_quantifiers(l) + count_quantifiers(r)
        }
        Kind::Exists(b) | Kind::Forall(b) => 1 + count_quantifiers(b),
    }
}

fn largest_shift(f: &Formula<SnAtom>) -> u64 {
    let mut k = 0;
    f.for_each_atom(&mut |a, _| k = k.max(a.max_shift()));
    k
}

/// Truth by plain enumeration. A quantifier whose body has quantifier depth
/// `q` ranges over `0..=m + 2^q (k + 1)`, where `m` is the largest value
/// bound so far and `k` the largest shift in the body: two assignments that
/// agree on all small differences satisfy the same formulas, so one value
/// past that range stands for all larger ones.
pub fn naive_decide(f: &Formula<SnAtom>, env: &[u64]) -> bool {
    match f.kind() {
        Kind::Atom(a) => {
            let side = |t: &SnTerm| -> u128 { t.value(env).expect("index in range") };
            side(&a.lhs) == side(&a.rhs)
        }
        Kind::False => false,
        Kind::Or(l, r) => naive_decide(l, env) || naive_decide(r, env),
        Kind::And(l, r) => naive_decide(l, env) && naive_decide(r, env),
        Kind::Implies(l, r) => !naive_decide(l, env) || naive_decide(r, env),
        Kind::Exists(b) => naive_range(b, env).any(|v| naive_decide(b, &cons(v, env))),
        Kind::Forall(b) => naive_range(b, env).all(|v| naive_decide(b, &cons(v, env))),
    }
}

fn naive_range(body: &Formula<SnAtom>, env: &[u64]) -> std::ops::RangeInclusive<u64> {
    let m = env.iter().copied().max().unwrap_or(0);
    let q = body.quantifier_depth() as u32;
    0..=m + (1u64 << q) * (largest_shift(body) + 1)
}

fn cons(v: u64, env: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(env.len() + 1);
    out.push(v);
    out.extend_from_slice(env);
    out
}
