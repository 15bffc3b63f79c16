//! Literals, products and disjunctive normal form.
//!
//! Conversion tracks both polarities of every subformula, so implication and
//! negation never need a separate negation-normal-form pass. Products are
//! simplified while they are built: trivially true literals vanish, a
//! trivially false literal or a complementary pair removes the product, and
//! duplicate literals (after canonicalization) are merged.

use std::collections::HashSet;

use crate::error::Error;
use crate::formula::{balanced, mk_not, Atom, Formula, Kind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal<A> {
    Pos(A),
    Neg(A),
}

/// Outcome of classifying a literal without an environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl<A: Atom> Literal<A> {
    pub fn atom(&self) -> &A {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Literal::Pos(_))
    }

    pub fn negated(&self) -> Self {
        match self {
            Literal::Pos(a) => Literal::Neg(a.clone()),
            Literal::Neg(a) => Literal::Pos(a.clone()),
        }
    }

    pub fn map_atom(&self, f: impl FnOnce(&A) -> A) -> Self {
        match self {
            Literal::Pos(a) => Literal::Pos(f(a)),
            Literal::Neg(a) => Literal::Neg(f(a)),
        }
    }

    pub fn canonical(&self) -> Self {
        self.map_atom(A::canonical)
    }

    /// Truth of the literal when it does not depend on the environment.
    pub fn truth(&self) -> Truth {
        match (self.atom().trivial_truth(), self.is_positive()) {
            (None, _) => Truth::Unknown,
            (Some(b), positive) if b == positive => Truth::True,
            _ => Truth::False,
        }
    }

    pub fn eval(&self, env: &[A::Value]) -> Result<bool, Error> {
        Ok(self.atom().eval(env)? == self.is_positive())
    }

    pub fn to_formula(&self, arity: usize) -> Result<Formula<A>, Error> {
        let atom = Formula::atom(arity, self.atom().clone())?;
        Ok(match self {
            Literal::Pos(_) => atom,
            Literal::Neg(_) => mk_not(atom),
        })
    }
}

/// A conjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Product<A> {
    pub arity: usize,
    pub literals: Vec<Literal<A>>,
}

/// A disjunction of products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dnf<A> {
    pub arity: usize,
    pub products: Vec<Product<A>>,
}

impl<A: Atom> Product<A> {
    pub fn new(arity: usize, literals: Vec<Literal<A>>) -> Self {
        Product { arity, literals }
    }

    /// Conjunction of the literals, balanced; the empty product is truth.
    pub fn interpret(&self) -> Formula<A> {
        let literals = self
            .literals
            .iter()
            .map(|l| {
                l.to_formula(self.arity)
                    .expect("product literal exceeds product arity")
            })
            .collect();
        balanced(literals, Formula::and).unwrap_or_else(|| Formula::truth(self.arity))
    }

    pub fn eval(&self, env: &[A::Value]) -> Result<bool, Error> {
        for l in &self.literals {
            if !l.eval(env)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<A: Atom> Dnf<A> {
    /// Disjunction of the products, balanced; the empty DNF is falsity.
    pub fn interpret(&self) -> Formula<A> {
        let products = self.products.iter().map(Product::interpret).collect();
        balanced(products, Formula::or).unwrap_or_else(|| Formula::falsum(self.arity))
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }
}

pub fn interpret_product<A: Atom>(p: &Product<A>) -> Formula<A> {
    p.interpret()
}

pub fn interpret_dnf<A: Atom>(d: &Dnf<A>) -> Formula<A> {
    d.interpret()
}

/// Converts a quantifier-free formula to an equivalent DNF.
pub fn to_dnf<A: Atom>(formula: &Formula<A>) -> Result<Dnf<A>, Error> {
    to_dnf_limited(formula, None)
}

/// Like [`to_dnf`], failing with [`Error::DnfLimit`] as soon as any
/// intermediate disjunction would hold more than `limit` products.
pub fn to_dnf_limited<A: Atom>(
    formula: &Formula<A>,
    limit: Option<usize>,
) -> Result<Dnf<A>, Error> {
    if !formula.is_qfree() {
        return Err(Error::NotQuantifierFree);
    }
    let products = Converter { limit }.convert(formula, true)?;
    Ok(Dnf {
        arity: formula.arity(),
        products: products
            .into_iter()
            .map(|literals| Product::new(formula.arity(), literals))
            .collect(),
    })
}

type Products<A> = Vec<Vec<Literal<A>>>;

struct Converter {
    limit: Option<usize>,
}

impl Converter {
    /// DNF of the formula when `positive`, of its negation otherwise.
    fn convert<A: Atom>(&self, f: &Formula<A>, positive: bool) -> Result<Products<A>, Error> {
        match (f.kind(), positive) {
            (Kind::Atom(a), _) => {
                let lit = if positive {
                    Literal::Pos(a.clone())
                } else {
                    Literal::Neg(a.clone())
                };
                Ok(match simplify(vec![lit]) {
                    Some(p) => vec![p],
                    None => vec![],
                })
            }
            (Kind::False, true) => Ok(vec![]),
            (Kind::False, false) => Ok(vec![vec![]]),
            (Kind::Or(l, r), true) => self.union(self.convert(l, true)?, self.convert(r, true)?),
            (Kind::Or(l, r), false) => self.cross(self.convert(l, false)?, self.convert(r, false)?),
            (Kind::And(l, r), true) => self.cross(self.convert(l, true)?, self.convert(r, true)?),
            (Kind::And(l, r), false) => {
                self.union(self.convert(l, false)?, self.convert(r, false)?)
            }
            (Kind::Implies(l, r), true) => {
                self.union(self.convert(l, false)?, self.convert(r, true)?)
            }
            (Kind::Implies(l, r), false) => {
                self.cross(self.convert(l, true)?, self.convert(r, false)?)
            }
            (Kind::Exists(_) | Kind::Forall(_), _) => Err(Error::NotQuantifierFree),
        }
    }

    fn check(&self, n: usize) -> Result<(), Error> {
        match self.limit {
            Some(limit) if n > limit => Err(Error::DnfLimit { limit }),
            _ => Ok(()),
        }
    }

    fn union<A: Atom>(&self, mut a: Products<A>, b: Products<A>) -> Result<Products<A>, Error> {
        self.check(a.len() + b.len())?;
        a.extend(b);
        Ok(a)
    }

    fn cross<A: Atom>(&self, a: Products<A>, b: Products<A>) -> Result<Products<A>, Error> {
        self.check(a.len().saturating_mul(b.len()))?;
        let mut out = Vec::with_capacity(a.len() * b.len());
        for p in &a {
            for q in &b {
                let merged = p.iter().chain(q.iter()).cloned().collect();
                if let Some(m) = simplify(merged) {
                    out.push(m);
                }
            }
        }
        Ok(out)
    }
}

/// Canonicalizes, drops trivially true and duplicate literals; `None` when
/// the product is unsatisfiable on its face.
fn simplify<A: Atom>(literals: Vec<Literal<A>>) -> Option<Vec<Literal<A>>> {
    let mut out = LiteralSet::with_capacity(literals.len());
    for lit in literals {
        let lit = lit.canonical();
        match lit.truth() {
            Truth::True => continue,
            Truth::False => return None,
            Truth::Unknown => {}
        }
        if out.contains(&lit.negated()) {
            return None;
        }
        out.insert(lit);
    }
    Some(out.into_vec())
}

/// Literals in insertion order without duplicates. Small sets are scanned;
/// large ones (side conditions can number in the thousands) get a hash index.
pub(crate) struct LiteralSet<A> {
    items: Vec<Literal<A>>,
    index: Option<HashSet<Literal<A>>>,
}

impl<A: Atom> LiteralSet<A> {
    const INDEX_ABOVE: usize = 32;

    pub(crate) fn with_capacity(n: usize) -> Self {
        LiteralSet {
            items: Vec::with_capacity(n),
            index: None,
        }
    }

    pub(crate) fn contains(&self, lit: &Literal<A>) -> bool {
        match &self.index {
            Some(index) => index.contains(lit),
            None => self.items.contains(lit),
        }
    }

    /// Adds `lit` unless present; returns whether it was added.
    pub(crate) fn insert(&mut self, lit: Literal<A>) -> bool {
        if self.contains(&lit) {
            return false;
        }
        match &mut self.index {
            Some(index) => {
                index.insert(lit.clone());
            }
            None if self.items.len() >= Self::INDEX_ABOVE => {
                let mut index: HashSet<_> = self.items.iter().cloned().collect();
                index.insert(lit.clone());
                self.index = Some(index);
            }
            None => {}
        }
        self.items.push(lit);
        true
    }

    pub(crate) fn into_vec(self) -> Vec<Literal<A>> {
        self.items
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sn::{SnAtom, SnTerm};
    use proptest::prelude::*;

    fn atom(v: usize, k: u64) -> SnAtom {
        SnAtom::new(SnTerm::var(v, 0), SnTerm::zero(k))
    }

    fn f(a: &SnAtom) -> Formula<SnAtom> {
        Formula::atom(2, *a).unwrap()
    }

    #[test]
    fn interpret_products() {
        let (a, b) = (atom(0, 1), atom(1, 2));
        assert_eq!(
            Product::<SnAtom>::new(2, vec![]).interpret(),
            Formula::implies(Formula::falsum(2), Formula::falsum(2))
        );
        assert_eq!(Product::new(2, vec![Literal::Pos(a)]).interpret(), f(&a));
        assert_eq!(
            Product::new(2, vec![Literal::Pos(a), Literal::Neg(b)]).interpret(),
            Formula::and(f(&a), Formula::implies(f(&b), Formula::falsum(2)))
        );
    }

    #[test]
    fn interpret_dnfs() {
        let p1 = Product::new(2, vec![Literal::Pos(atom(0, 1))]);
        let p2 = Product::new(2, vec![Literal::Neg(atom(1, 3))]);
        let empty = Dnf::<SnAtom> {
            arity: 2,
            products: vec![],
        };
        assert_eq!(empty.interpret(), Formula::falsum(2));
        let single = Dnf {
            arity: 2,
            products: vec![p1.clone()],
        };
        assert_eq!(single.interpret(), p1.interpret());
        let pair = Dnf {
            arity: 2,
            products: vec![p1.clone(), p2.clone()],
        };
        assert_eq!(
            pair.interpret(),
            Formula::or(p1.interpret(), p2.interpret())
        );
    }

    #[test]
    fn dnf_examples() {
        let (a, b, c) = (atom(0, 1), atom(1, 2), atom(0, 3));
        assert_eq!(
            to_dnf(&f(&a)).unwrap().products[0].literals,
            vec![Literal::Pos(a)]
        );

        let demorgan = to_dnf(&mk_not(Formula::or(f(&a), f(&b)))).unwrap();
        assert_eq!(demorgan.len(), 1);
        assert_eq!(
            demorgan.products[0].literals,
            vec![Literal::Neg(a), Literal::Neg(b)]
        );

        let dist = to_dnf(&Formula::and(Formula::or(f(&a), f(&b)), f(&c))).unwrap();
        let lits: Vec<_> = dist.products.iter().map(|p| p.literals.clone()).collect();
        assert_eq!(
            lits,
            vec![
                vec![Literal::Pos(a), Literal::Pos(c)],
                vec![Literal::Pos(b), Literal::Pos(c)]
            ]
        );
    }

    #[test]
    fn false_and_truth() {
        assert!(to_dnf(&Formula::<SnAtom>::falsum(0)).unwrap().is_empty());
        let t = to_dnf(&Formula::<SnAtom>::truth(0)).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.products[0].literals.is_empty());
    }

    #[test]
    fn trivial_literals_are_simplified() {
        // x+2 = x+4 is never true, so its negation is dropped
        let never = SnAtom::new(SnTerm::var(0, 2), SnTerm::var(0, 4));
        let g = Formula::and(mk_not(f(&never)), f(&atom(1, 0)));
        let d = to_dnf(&g).unwrap();
        assert_eq!(d.products.len(), 1);
        assert_eq!(d.products[0].literals, vec![Literal::Pos(atom(1, 0))]);

        // a positive never-true literal removes the product
        assert!(to_dnf(&Formula::and(f(&never), f(&atom(1, 0))))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn duplicates_and_complements() {
        let a = atom(0, 1);
        let same = SnAtom::new(SnTerm::zero(1), SnTerm::var(0, 0));
        let d = to_dnf(&Formula::and(f(&a), f(&same))).unwrap();
        assert_eq!(d.products[0].literals.len(), 1);
        let d = to_dnf(&Formula::and(f(&a), mk_not(f(&same)))).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn limit_is_enforced() {
        let mut g = Formula::or(f(&atom(0, 0)), f(&atom(1, 0)));
        for k in 1..8 {
            g = Formula::and(g, Formula::or(f(&atom(0, k)), f(&atom(1, k))));
        }
        assert!(matches!(
            to_dnf_limited(&g, Some(16)),
            Err(Error::DnfLimit { limit: 16 })
        ));
        assert!(to_dnf_limited(&g, Some(1000)).is_ok());
    }

    #[test]
    fn rejects_quantifiers() {
        let g = Formula::exists(Formula::atom(1, atom(0, 0)).unwrap());
        assert_eq!(to_dnf(&g), Err(Error::NotQuantifierFree));
    }

    fn arb_qfree(arity: usize) -> impl Strategy<Value = Formula<SnAtom>> {
        let term = (0..=arity, 0u64..4).prop_map(move |(b, k)| {
            if b == arity {
                SnTerm::zero(k)
            } else {
                SnTerm::var(b, k)
            }
        });
        let leaf = prop_oneof![
            1 => Just(Formula::falsum(arity)),
            4 => (term.clone(), term).prop_map(move |(l, r)| Formula::atom(arity, SnAtom::new(l, r)).unwrap()),
        ];
        leaf.prop_recursive(6, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Formula::implies(l, r)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn dnf_preserves_meaning(g in arb_qfree(2), x in 0u64..6, y in 0u64..6) {
            let d = to_dnf(&g).unwrap();
            let back = d.interpret();
            prop_assert!(back.is_qfree());
            prop_assert_eq!(g.eval_qfree(&[x, y]).unwrap(), back.eval_qfree(&[x, y]).unwrap());
            let bound = 1usize.checked_shl(g.connective_count() as u32).unwrap_or(usize::MAX);
            prop_assert!(d.len() <= bound);
        }

        #[test]
        fn negation_flips_truth(g in arb_qfree(2), x in 0u64..6, y in 0u64..6) {
            prop_assert_eq!(mk_not(g.clone()).eval_qfree(&[x, y]).unwrap(), !g.eval_qfree(&[x, y]).unwrap());
            prop_assert_eq!(mk_not(g.clone()).is_qfree(), g.is_qfree());
        }
    }
}
