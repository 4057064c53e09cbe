//! Polynomial normal form for the `ARITH` rule.
//!
//! Variables and `deg(·)` subterms are atoms; products, powers and
//! successors expand into integer polynomials over them.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::term::Term;

const MAX_DEGREE: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Var(alloc::string::String),
    Deg(Term),
}

type Monomial = Vec<(Atom, u64)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct Poly(BTreeMap<Monomial, BigInt>);

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m: BTreeMap<Atom, u64> = a.iter().cloned().collect();
    for (atom, e) in b {
        *m.entry(atom.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl Poly {
    fn constant(c: BigInt) -> Poly {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.0.insert(Vec::new(), c);
        }
        p
    }

    fn atom(a: Atom) -> Poly {
        let mut p = Poly::default();
        p.0.insert(alloc::vec![(a, 1)], BigInt::one());
        p
    }

    fn degree(&self) -> u64 {
        self.0.keys().map(|m| m.iter().map(|(_, e)| e).sum()).max().unwrap_or(0)
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.0.clone();
        for (m, c) in &other.0 {
            let e = out.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                out.remove(m);
            }
        }
        Poly(out)
    }

    fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::default();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub(crate) fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-BigInt::one()))
    }

    fn mul(&self, other: &Poly) -> Option<Poly> {
        if self.degree() + other.degree() > MAX_DEGREE {
            return None;
        }
        let mut out = Poly::default();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let mut t = Poly::default();
                t.0.insert(mul_monomials(ma, mb), ca * cb);
                out = out.add(&t);
            }
        }
        Some(out)
    }

    pub(crate) fn from_term(t: &Term) -> Option<Poly> {
        Some(match t {
            Term::Var { name } => Poly::atom(Atom::Var(name.clone())),
            Term::Nat { value } => Poly::constant(BigInt::from(value.as_biguint().clone())),
            Term::Mul { lhs, rhs } => Poly::from_term(lhs)?.mul(&Poly::from_term(rhs)?)?,
            Term::Pow { base, exp } => {
                let b = Poly::from_term(base)?;
                if *exp > MAX_DEGREE {
                    return None;
                }
                let mut acc = Poly::constant(BigInt::one());
                for _ in 0..*exp {
                    acc = acc.mul(&b)?;
                }
                acc
            }
            Term::Deg { .. } => Poly::atom(Atom::Deg(t.clone())),
            Term::Succ { arg } => Poly::from_term(arg)?.add(&Poly::constant(BigInt::one())),
        })
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `true` when `self = λ·other` for some rational `λ ≠ 0`.
    pub(crate) fn proportional(&self, other: &Poly) -> bool {
        let Some((m, c_other)) = other.0.iter().next() else {
            return false;
        };
        let Some(c_self) = self.0.get(m) else {
            return false;
        };
        self.scale(c_other) == other.scale(c_self)
    }
}
