use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::valuation::base_decompose;
use crate::Natural;

/// Largest bit length the kernel will materialise while evaluating a term.
pub const EVAL_BIT_LIMIT: u64 = 1 << 20;

/// Terms over positive naturals.
///
/// Exponents are concrete. `Deg` is the degree of parity (the 2-adic
/// valuation) and `Succ` adds one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "t", rename_all = "snake_case"))]
pub enum Term {
    Var { name: String },
    Nat { value: Natural },
    Mul { lhs: Box<Term>, rhs: Box<Term> },
    Pow { base: Box<Term>, exp: u64 },
    Deg { arg: Box<Term> },
    Succ { arg: Box<Term> },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var { name: name.into() }
    }

    pub fn nat(value: impl Into<Natural>) -> Term {
        Term::Nat { value: value.into() }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Term) -> Term {
        Term::Mul {
            lhs: Box::new(self),
            rhs: Box::new(rhs),
        }
    }

    pub fn pow(self, exp: u64) -> Term {
        Term::Pow {
            base: Box::new(self),
            exp,
        }
    }

    pub fn deg(self) -> Term {
        Term::Deg { arg: Box::new(self) }
    }

    pub fn succ(self) -> Term {
        Term::Succ { arg: Box::new(self) }
    }

    pub fn as_nat(&self) -> Option<&Natural> {
        match self {
            Term::Nat { value } => Some(value),
            _ => None,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var { name } => Some(name),
            _ => None,
        }
    }

    pub fn as_mul(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Mul { lhs, rhs } => Some((lhs, rhs)),
            _ => None,
        }
    }

    pub fn as_pow(&self) -> Option<(&Term, u64)> {
        match self {
            Term::Pow { base, exp } => Some((base, *exp)),
            _ => None,
        }
    }

    pub fn as_deg(&self) -> Option<&Term> {
        match self {
            Term::Deg { arg } => Some(arg),
            _ => None,
        }
    }

    pub fn as_succ(&self) -> Option<&Term> {
        match self {
            Term::Succ { arg } => Some(arg),
            _ => None,
        }
    }

    pub fn is_concrete(&self) -> bool {
        match self {
            Term::Var { .. } => false,
            Term::Nat { .. } => true,
            Term::Mul { lhs, rhs } => lhs.is_concrete() && rhs.is_concrete(),
            Term::Pow { base, .. } => base.is_concrete(),
            Term::Deg { arg } | Term::Succ { arg } => arg.is_concrete(),
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Term::Var { name } => name == var,
            Term::Nat { .. } => false,
            Term::Mul { lhs, rhs } => lhs.mentions(var) || rhs.mentions(var),
            Term::Pow { base, .. } => base.mentions(var),
            Term::Deg { arg } | Term::Succ { arg } => arg.mentions(var),
        }
    }

    pub fn substitute(&self, var: &str, with: &Term) -> Term {
        match self {
            Term::Var { name } if name == var => with.clone(),
            Term::Var { .. } | Term::Nat { .. } => self.clone(),
            Term::Mul { lhs, rhs } => lhs.substitute(var, with).mul(rhs.substitute(var, with)),
            Term::Pow { base, exp } => base.substitute(var, with).pow(*exp),
            Term::Deg { arg } => arg.substitute(var, with).deg(),
            Term::Succ { arg } => arg.substitute(var, with).succ(),
        }
    }

    /// Value under an assignment of the free variables.
    ///
    /// `None` when a variable is unassigned, a degree of zero is requested,
    /// or the value would exceed [`EVAL_BIT_LIMIT`] bits.
    pub fn eval(&self, env: &Assignment) -> Option<Natural> {
        let v = match self {
            Term::Var { name } => env.get(name)?.clone(),
            Term::Nat { value } => value.clone(),
            Term::Mul { lhs, rhs } => {
                let (a, b) = (lhs.eval(env)?, rhs.eval(env)?);
                if a.bits() + b.bits() > EVAL_BIT_LIMIT {
                    return None;
                }
                a * b
            }
            Term::Pow { base, exp } => {
                let b = base.eval(env)?;
                if b.bits().checked_mul(*exp)? > EVAL_BIT_LIMIT {
                    return None;
                }
                b.pow(*exp)
            }
            Term::Deg { arg } => Natural::from(arg.eval(env)?.trailing_zeros()?),
            Term::Succ { arg } => arg.eval(env)? + Natural::one(),
        };
        Some(v)
    }

    fn collect_vars<'a>(&'a self, out: &mut alloc::collections::BTreeSet<&'a str>) {
        match self {
            Term::Var { name } => {
                out.insert(name);
            }
            Term::Nat { .. } => {}
            Term::Mul { lhs, rhs } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            Term::Pow { base, .. } => base.collect_vars(out),
            Term::Deg { arg } | Term::Succ { arg } => arg.collect_vars(out),
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(self, Term::Var { .. } | Term::Nat { .. } | Term::Deg { .. })
    }
}

/// Values for free variables.
pub type Assignment = BTreeMap<String, Natural>;

/// A set of possible degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DegreeClass {
    Even,
    Odd,
    #[cfg_attr(feature = "serde", serde(rename = "multiple_of_3"))]
    MultipleOf3,
    Value(u64),
}

/// Degrees modulo `m`, or one exact degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Residue {
    Exact(u64),
    Mod { modulus: u64, rem: u64 },
}

const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Residue {
    pub(crate) fn add(self, other: Residue) -> Residue {
        use Residue::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Exact(a + b),
            (Exact(a), Mod { modulus, rem }) | (Mod { modulus, rem }, Exact(a)) => Mod {
                modulus,
                rem: (rem + a) % modulus,
            },
            (Mod { modulus: m1, rem: r1 }, Mod { modulus: m2, rem: r2 }) => {
                let m = gcd(m1, m2);
                Mod { modulus: m, rem: (r1 + r2) % m }
            }
        }
    }

    /// Class of `a - b` knowing `a ≥ b`, or `None` if impossible.
    pub(crate) fn sub(self, other: Residue) -> Option<Residue> {
        use Residue::*;
        Some(match (self, other) {
            (Exact(a), Exact(b)) => Exact(a.checked_sub(b)?),
            (Exact(a), Mod { modulus, rem }) => Mod {
                modulus,
                rem: (a % modulus + modulus - rem) % modulus,
            },
            (Mod { modulus, rem }, Exact(b)) => Mod {
                modulus,
                rem: (rem + modulus - b % modulus) % modulus,
            },
            (Mod { modulus: m1, rem: r1 }, Mod { modulus: m2, rem: r2 }) => {
                let m = gcd(m1, m2);
                Mod {
                    modulus: m,
                    rem: (r1 % m + m - r2 % m) % m,
                }
            }
        })
    }

    pub(crate) fn contains(self, v: u64) -> bool {
        match self {
            Residue::Exact(a) => a == v,
            Residue::Mod { modulus, rem } => v % modulus == rem,
        }
    }

    pub(crate) fn disjoint(self, other: Residue) -> bool {
        use Residue::*;
        match (self, other) {
            (Exact(a), b) | (b, Exact(a)) => !b.contains(a),
            (Mod { modulus: m1, rem: r1 }, Mod { modulus: m2, rem: r2 }) => {
                let g = gcd(m1, m2);
                r1 % g != r2 % g
            }
        }
    }
}

impl DegreeClass {
    pub(crate) fn residue(self) -> Residue {
        match self {
            DegreeClass::Even => Residue::Mod { modulus: 2, rem: 0 },
            DegreeClass::Odd => Residue::Mod { modulus: 2, rem: 1 },
            DegreeClass::MultipleOf3 => Residue::Mod { modulus: 3, rem: 0 },
            DegreeClass::Value(v) => Residue::Exact(v),
        }
    }

    /// The class naming exactly this residue set, if there is one.
    pub(crate) fn from_residue(r: Residue) -> Option<DegreeClass> {
        match r {
            Residue::Exact(v) => Some(DegreeClass::Value(v)),
            Residue::Mod { modulus: 2, rem: 0 } => Some(DegreeClass::Even),
            Residue::Mod { modulus: 2, rem: 1 } => Some(DegreeClass::Odd),
            Residue::Mod { modulus: 3, rem: 0 } => Some(DegreeClass::MultipleOf3),
            _ => None,
        }
    }

    pub fn contains(self, degree: u64) -> bool {
        self.residue().contains(degree)
    }
}

impl fmt::Display for DegreeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeClass::Even => f.write_str("even"),
            DegreeClass::Odd => f.write_str("odd"),
            DegreeClass::MultipleOf3 => f.write_str("a multiple of 3"),
            DegreeClass::Value(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(feature = "serde")]
fn default_base() -> Natural {
    Natural::from(2u64)
}

#[cfg(feature = "serde")]
fn is_base_two(b: &Natural) -> bool {
    *b == 2u64
}

/// Quantifier-free assertions about terms.
///
/// A trace is schematic: its free variables range over all positive
/// naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "t", rename_all = "snake_case"))]
pub enum Statement {
    Equal {
        lhs: Term,
        rhs: Term,
    },
    Odd {
        term: Term,
    },
    Even {
        term: Term,
    },
    /// The `base`-adic degree of `term` lies in `class`; `base` is 2 unless
    /// stated otherwise.
    DegreeIs {
        term: Term,
        class: DegreeClass,
        #[cfg_attr(
            feature = "serde",
            serde(default = "default_base", skip_serializing_if = "is_base_two")
        )]
        base: Natural,
    },
    Coprime {
        lhs: Term,
        rhs: Term,
    },
    Divides {
        divisor: Term,
        dividend: Term,
    },
    False,
}

impl Statement {
    pub fn equal(lhs: Term, rhs: Term) -> Statement {
        Statement::Equal { lhs, rhs }
    }

    pub fn odd(term: Term) -> Statement {
        Statement::Odd { term }
    }

    pub fn even(term: Term) -> Statement {
        Statement::Even { term }
    }

    pub fn degree_is(term: Term, class: DegreeClass) -> Statement {
        Statement::DegreeIs {
            term,
            class,
            base: Natural::from(2u64),
        }
    }

    pub fn degree_in_base(term: Term, class: DegreeClass, base: Natural) -> Statement {
        Statement::DegreeIs { term, class, base }
    }

    pub fn coprime(lhs: Term, rhs: Term) -> Statement {
        Statement::Coprime { lhs, rhs }
    }

    pub fn divides(divisor: Term, dividend: Term) -> Statement {
        Statement::Divides { divisor, dividend }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (a, b): (Option<&Term>, Option<&Term>) = match self {
            Statement::Equal { lhs, rhs } | Statement::Coprime { lhs, rhs } => (Some(lhs), Some(rhs)),
            Statement::Divides { divisor, dividend } => (Some(divisor), Some(dividend)),
            Statement::Odd { term } | Statement::Even { term } | Statement::DegreeIs { term, .. } => {
                (Some(term), None)
            }
            Statement::False => (None, None),
        };
        a.into_iter().chain(b)
    }

    pub fn is_concrete(&self) -> bool {
        self.terms().all(Term::is_concrete)
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.terms().any(|t| t.mentions(var))
    }

    pub fn free_vars(&self) -> alloc::collections::BTreeSet<&str> {
        let mut out = alloc::collections::BTreeSet::new();
        for t in self.terms() {
            t.collect_vars(&mut out);
        }
        out
    }

    pub fn substitute(&self, var: &str, with: &Term) -> Statement {
        let s = |t: &Term| t.substitute(var, with);
        match self {
            Statement::Equal { lhs, rhs } => Statement::equal(s(lhs), s(rhs)),
            Statement::Odd { term } => Statement::odd(s(term)),
            Statement::Even { term } => Statement::even(s(term)),
            Statement::DegreeIs { term, class, base } => Statement::degree_in_base(s(term), *class, base.clone()),
            Statement::Coprime { lhs, rhs } => Statement::coprime(s(lhs), s(rhs)),
            Statement::Divides { divisor, dividend } => Statement::divides(s(divisor), s(dividend)),
            Statement::False => Statement::False,
        }
    }

    /// Truth value under an assignment; `None` when some term is undefined.
    pub fn eval(&self, env: &Assignment) -> Option<bool> {
        Some(match self {
            Statement::Equal { lhs, rhs } => lhs.eval(env)? == rhs.eval(env)?,
            Statement::Odd { term } => term.eval(env)?.is_odd(),
            Statement::Even { term } => term.eval(env)?.is_even(),
            Statement::DegreeIs { term, class, base } => {
                let v = term.eval(env)?;
                let d = base_decompose(base, &v).ok()?;
                class.contains(d.degree())
            }
            Statement::Coprime { lhs, rhs } => lhs.eval(env)?.gcd(&rhs.eval(env)?).is_one(),
            Statement::Divides { divisor, dividend } => divisor.eval(env)?.divides(&dividend.eval(env)?),
            Statement::False => false,
        })
    }

    /// Statements that are false whatever the free variables are: `⊥`, and
    /// "even" asserted of a manifestly odd term.
    pub fn is_absurd(&self) -> bool {
        match self {
            Statement::False => true,
            Statement::Even { term } => manifestly_odd(term),
            _ => false,
        }
    }
}

/// `2·t + 1`, or an odd constant.
pub(crate) fn manifestly_odd(t: &Term) -> bool {
    match t {
        Term::Nat { value } => value.is_odd(),
        Term::Succ { arg } => matches!(arg.as_mul(), Some((l, _)) if l.as_nat().is_some_and(|c| *c == 2u64)),
        _ => false,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |t: &Term, f: &mut fmt::Formatter<'_>, tight: bool| {
            let needs = match t {
                Term::Succ { .. } => true,
                Term::Mul { .. } => tight,
                Term::Pow { .. } => tight,
                _ => false,
            };
            if needs {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Var { name } => f.write_str(name),
            Term::Nat { value } => write!(f, "{value}"),
            Term::Mul { lhs, rhs } => {
                wrap(lhs, f, false)?;
                f.write_str("·")?;
                wrap(rhs, f, matches!(**rhs, Term::Mul { .. }))
            }
            Term::Pow { base, exp } => {
                if base.is_atomic() {
                    write!(f, "{base}")?;
                } else {
                    write!(f, "({base})")?;
                }
                write!(f, "^{exp}")
            }
            Term::Deg { arg } => write!(f, "deg({arg})"),
            Term::Succ { arg } => write!(f, "{arg} + 1"),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Equal { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
            Statement::Odd { term } => write!(f, "{term} is odd"),
            Statement::Even { term } => write!(f, "{term} is even"),
            Statement::DegreeIs { term, class, base } => {
                let name = if *base == 2u64 {
                    alloc::format!("deg({term})")
                } else {
                    alloc::format!("deg_{base}({term})")
                };
                match class {
                    DegreeClass::Value(v) => write!(f, "{name} = {v}"),
                    c => write!(f, "{name} is {c}"),
                }
            }
            Statement::Coprime { lhs, rhs } => write!(f, "{lhs} and {rhs} are coprime"),
            Statement::Divides { divisor, dividend } => write!(f, "{divisor} divides {dividend}"),
            Statement::False => f.write_str("⊥"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn evaluates_terms() {
        let mut env = Assignment::new();
        env.insert("n".into(), Natural::from(3u64));
        let t = Term::nat(2u64).mul(Term::var("n").pow(2));
        assert_eq!(t.eval(&env), Some(Natural::from(18u64)));
        assert_eq!(t.clone().deg().eval(&env), Some(Natural::from(1u64)));
        assert_eq!(t.deg().succ().eval(&env), Some(Natural::from(2u64)));
        assert_eq!(Term::nat(0u64).deg().eval(&env), None);
        assert_eq!(Term::var("m").eval(&env), None);
    }

    #[test]
    fn residue_arithmetic() {
        let even = DegreeClass::Even.residue();
        let odd = DegreeClass::Odd.residue();
        let m3 = DegreeClass::MultipleOf3.residue();
        assert_eq!(DegreeClass::from_residue(Residue::Exact(3).add(even)), Some(DegreeClass::Odd));
        assert_eq!(DegreeClass::from_residue(odd.add(odd)), Some(DegreeClass::Even));
        assert_eq!(DegreeClass::from_residue(m3.sub(m3).unwrap()), Some(DegreeClass::MultipleOf3));
        assert_eq!(DegreeClass::from_residue(Residue::Exact(1).add(m3)), None);
        assert!(even.disjoint(odd));
        assert!(!even.disjoint(m3));
        assert!(Residue::Exact(4).disjoint(m3));
        assert!(!Residue::Exact(6).disjoint(m3));
        assert_eq!(Residue::Exact(1).sub(Residue::Exact(2)), None);
    }

    #[test]
    fn statement_truth() {
        let env = Assignment::new();
        assert_eq!(Statement::degree_is(Term::nat(40u64), DegreeClass::Value(3)).eval(&env), Some(true));
        assert_eq!(
            Statement::degree_in_base(Term::nat(45u64), DegreeClass::Even, Natural::from(3u64)).eval(&env),
            Some(true)
        );
        assert_eq!(Statement::coprime(Term::nat(4u64), Term::nat(15u64)).eval(&env), Some(true));
        assert_eq!(Statement::coprime(Term::nat(6u64), Term::nat(9u64)).eval(&env), Some(false));
        assert_eq!(Statement::False.eval(&env), Some(false));
    }

    #[test]
    fn absurd_statements() {
        let k = Term::var("k");
        assert!(Statement::even(Term::nat(2u64).mul(k.clone()).succ()).is_absurd());
        assert!(Statement::even(Term::nat(1u64)).is_absurd());
        assert!(!Statement::even(Term::nat(3u64).mul(k).succ()).is_absurd());
        assert!(Statement::False.is_absurd());
    }

    #[test]
    fn displays_readably() {
        let s = Statement::equal(Term::nat(2u64).mul(Term::var("n").pow(2)), Term::var("m").pow(2));
        assert_eq!(s.to_string(), "2·n^2 = m^2");
        let d = Term::nat(2u64).mul(Term::var("n").pow(2)).deg();
        assert_eq!(d.to_string(), "deg(2·n^2)");
        assert_eq!(Term::var("n").pow(2).deg().succ().to_string(), "deg(n^2) + 1");
    }
}
