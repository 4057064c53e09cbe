//! Certificate builders. Every trace produced here is accepted by the
//! kernel; the engine tests hold them to that.

use crate::kernel::{DegreeClass, ProofTrace, RuleTag, Statement, Term};
use crate::Natural;

use RuleTag::*;

fn nat(v: &Natural) -> Term {
    Term::nat(v.clone())
}

fn two() -> Term {
    Term::nat(2u64)
}

/// `X·n^e = m^e` over the variables `n`, `m`.
pub(crate) fn refuted_goal(x: &Natural, e: u64, n: &str, m: &str) -> Statement {
    Statement::equal(nat(x).mul(Term::var(n).pow(e)), Term::var(m).pow(e))
}

/// `r^e = X`.
pub(crate) fn root_goal(root: &Natural, e: u64, x: &Natural) -> Statement {
    Statement::equal(nat(root).pow(e), nat(x))
}

/// Hypotheses `z^e = X`, `z·n = m`, cross-multiplied; returns the id of
/// the resulting equation.
fn open_reductio(t: &mut ProofTrace, x: &Natural, e: u64, n: &str, m: &str) -> usize {
    let z = Term::var("z");
    let h1 = t.push(HypothesisRational, &[], Statement::equal(z.clone().pow(e), nat(x)));
    let h2 = t.push(HypothesisRational, &[], Statement::equal(z.mul(Term::var(n)), Term::var(m)));
    t.push(SquareCrossMultiply, &[h1, h2], refuted_goal(x, e, n, m))
}

/// The unit-even refutation of `X·n² = m²` for `X` of degree of parity 1.
pub(crate) fn unit_even_refutation(x: &Natural) -> ProofTrace {
    debug_assert_eq!(x.trailing_zeros(), Some(1));
    let (n, m) = (Term::var("n"), Term::var("m"));
    let mut t = ProofTrace::new(refuted_goal(x, 2, "n", "m"));
    let eq = open_reductio(&mut t, x, 2, "n", "m");
    let lhs = nat(x).mul(n.clone().pow(2));
    let add = t.push(
        ValAdditivity,
        &[],
        Statement::equal(lhs.clone().deg(), n.clone().pow(2).deg().succ()),
    );
    let dn = t.push(ValSquareEven, &[], Statement::degree_is(n.clone().pow(2), DegreeClass::Even));
    let dm = t.push(ValSquareEven, &[], Statement::degree_is(m.clone().pow(2), DegreeClass::Even));
    let same = t.push(EqualDegrees, &[eq], Statement::equal(lhs.deg(), m.clone().pow(2).deg()));
    let succ = t.push(
        ParityMismatch,
        &[add, same],
        Statement::equal(n.pow(2).deg().succ(), m.pow(2).deg()),
    );
    let unit = t.push(UnitEven, &[succ, dn, dm], Statement::even(Term::nat(1u64)));
    let odd = two().mul(Term::var("k")).succ();
    let def = t.push(OddDefinition, &[], Statement::odd(odd.clone()));
    t.push(AllOddsEven, &[unit, def], Statement::even(odd));
    t
}

/// How the degree of an `e`-th power is certified in a given base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PowerLaw {
    /// Base 2: `VAL_SQUARE_EVEN` or `VAL_CUBE_TRIPLE`.
    Parity,
    /// Odd prime base.
    Prime,
    /// Odd composite base cleared by the residue scan.
    Residue,
}

/// Refutes `X·n^e = m^e` from `deg_b(X) = k` with `k` outside the class
/// of `e`-th powers. With `reduce = Some(a)` the equation is first rewritten
/// as `(X / a^e)·(a·n)^e = m^e` and the degree argument runs on the kernel.
pub(crate) fn degree_refutation(
    x: &Natural,
    e: u64,
    base: &Natural,
    k: u64,
    law: PowerLaw,
    reduce: Option<&Natural>,
) -> ProofTrace {
    let mut t = ProofTrace::new(refuted_goal(x, e, "n", "m"));
    let mut eq = open_reductio(&mut t, x, e, "n", "m");
    let (mut n, m) = (Term::var("n"), Term::var("m"));
    let mut radicand = x.clone();
    if let Some(a) = reduce {
        let (s, rem) = x.div_rem(&a.pow(e)).expect("non-zero factor");
        debug_assert!(rem.is_zero());
        n = nat(a).mul(n);
        eq = t.push(
            KernelReduce,
            &[eq],
            Statement::equal(nat(&s).mul(n.clone().pow(e)), m.clone().pow(e)),
        );
        radicand = s;
    }
    let class = if e % 2 == 0 { DegreeClass::Even } else { DegreeClass::MultipleOf3 };
    let power_fact = |t: &mut ProofTrace, term: Term| {
        let rule = match (law, e % 2 == 0) {
            (PowerLaw::Parity, true) => ValSquareEven,
            (PowerLaw::Parity, false) => ValCubeTriple,
            (PowerLaw::Prime, _) => Vii30Prime,
            (PowerLaw::Residue, _) => ResidueScan,
        };
        t.push(rule, &[], Statement::degree_in_base(term.pow(e), class, base.clone()))
    };
    let lhs = nat(&radicand).mul(n.clone().pow(e));
    let deg = |term: Term, c| Statement::degree_in_base(term, c, base.clone());
    if class == DegreeClass::Even {
        let dn = power_fact(&mut t, n.clone());
        let dm = power_fact(&mut t, m.clone());
        let dx = t.push(ParityDecompose, &[], deg(nat(&radicand), DegreeClass::Value(k)));
        let odd = t.push(ValAdditivity, &[dx, dn], deg(lhs.clone(), DegreeClass::Odd));
        let even = t.push(EqualDegrees, &[eq, dm], deg(lhs, DegreeClass::Even));
        t.push(ParityMismatch, &[odd, even], Statement::False);
    } else {
        let dm = power_fact(&mut t, m.clone());
        let whole = t.push(EqualDegrees, &[eq, dm], deg(lhs, DegreeClass::MultipleOf3));
        let dn = power_fact(&mut t, n.clone());
        let dx_class = t.push(ValAdditivity, &[whole, dn], deg(nat(&radicand), DegreeClass::MultipleOf3));
        let dx = t.push(ParityDecompose, &[], deg(nat(&radicand), DegreeClass::Value(k)));
        t.push(ParityMismatch, &[dx, dx_class], Statement::False);
    }
    t
}

/// `r^e = X` for `X = 2^h·s`, from an exact root `r_s` of the odd kernel
/// `s` (absent when `s = 1`).
pub(crate) fn reduction_root(x: &Natural, e: u64, h: u64, kernel: &Natural, kernel_root: Option<(&Natural, RuleTag)>) -> ProofTrace {
    let r = kernel_root.map(|(r, _)| r.clone()).unwrap_or_else(Natural::one);
    let root = r.shl(h / e);
    let mut t = ProofTrace::new(root_goal(&root, e, x));
    let d = t.push(
        ParityDecompose,
        &[],
        Statement::equal(nat(x), two().pow(h).mul(nat(kernel))),
    );
    match kernel_root {
        None => {
            t.push(KernelReduce, &[d], root_goal(&root, e, x));
        }
        Some((r, rule)) => {
            let w = t.push(rule, &[], root_goal(r, e, kernel));
            let odd = t.push(OddQuotient, &[w], Statement::odd(nat(r)));
            t.push(KernelReduce, &[d, w, odd], root_goal(&root, e, x));
        }
    }
    t
}

pub(crate) fn oracle_root(x: &Natural, e: u64, root: &Natural) -> ProofTrace {
    let mut t = ProofTrace::new(root_goal(root, e, x));
    t.push(Oracle, &[], root_goal(root, e, x));
    t
}

pub(crate) fn oracle_refutation(x: &Natural, e: u64) -> ProofTrace {
    let goal = refuted_goal(x, e, "n", "m");
    let mut t = ProofTrace::new(goal.clone());
    let h = t.push(HypothesisRational, &[], goal);
    t.push(Oracle, &[h], Statement::False);
    t
}

/// The divisibility proof: from coprime `p, q` with `X·q² = p²`, `q`
/// divides `p`, so `q = 1` and `X` would be a square.
pub(crate) fn viii14_refutation(x: &Natural, q: &str, p: &str) -> ProofTrace {
    let (qt, pt) = (Term::var(q), Term::var(p));
    let mut t = ProofTrace::new(refuted_goal(x, 2, q, p));
    let z = Term::var("z");
    let h1 = t.push(HypothesisRational, &[], Statement::equal(z.clone().pow(2), nat(x)));
    let h2 = t.push(HypothesisRational, &[], Statement::equal(z.mul(qt.clone()), pt.clone()));
    let cop = t.push(Vii22Reduce, &[h2], Statement::coprime(pt.clone(), qt.clone()));
    let eq = t.push(SquareCrossMultiply, &[h1, h2], refuted_goal(x, 2, q, p));
    let sq = t.push(MultipleDivides, &[eq], Statement::divides(qt.clone().pow(2), pt.clone().pow(2)));
    let div = t.push(Viii14Divides, &[sq], Statement::divides(qt, pt));
    t.push(CoprimeClash, &[cop, div, eq], Statement::False);
    t
}

/// The schoolbook proof: `p` even, so `q` odd; halving `p` makes `q` even.
pub(crate) fn standard_sqrt2() -> ProofTrace {
    let (p, q, r) = (Term::var("p"), Term::var("q"), Term::var("r"));
    let x = Natural::from(2u64);
    let mut t = ProofTrace::new(refuted_goal(&x, 2, "q", "p"));
    let z = Term::var("z");
    let h1 = t.push(HypothesisRational, &[], Statement::equal(z.clone().pow(2), nat(&x)));
    let h2 = t.push(HypothesisRational, &[], Statement::equal(z.mul(q.clone()), p.clone()));
    let eq = t.push(SquareCrossMultiply, &[h1, h2], refuted_goal(&x, 2, "q", "p"));
    let cop = t.push(Vii22Reduce, &[h2], Statement::coprime(p.clone(), q.clone()));
    let p2 = t.push(EvenByDoubling, &[eq], Statement::even(p.clone().pow(2)));
    let pe = t.push(EvenSquareEvenRoot, &[p2], Statement::even(p.clone()));
    let qo = t.push(CoprimeParity, &[cop, pe], Statement::odd(q.clone()));
    let half = t.push(EvenHalve, &[pe], Statement::equal(p, two().mul(r.clone())));
    let sub = t.push(
        Substitute,
        &[half, eq],
        Statement::equal(two().mul(q.clone().pow(2)), two().mul(r.clone()).pow(2)),
    );
    let again = t.push(Arith, &[sub], Statement::equal(two().mul(r.pow(2)), q.clone().pow(2)));
    let q2 = t.push(EvenByDoubling, &[again], Statement::even(q.clone().pow(2)));
    let qe = t.push(EvenSquareEvenRoot, &[q2], Statement::even(q));
    t.push(ParityMismatch, &[qe, qo], Statement::False);
    t
}

/// Alexander's version: `p²` and `q²` coprime yet both even.
pub(crate) fn alexander_sqrt2() -> ProofTrace {
    let (p, q) = (Term::var("p"), Term::var("q"));
    let x = Natural::from(2u64);
    let mut t = ProofTrace::new(refuted_goal(&x, 2, "q", "p"));
    let z = Term::var("z");
    let h1 = t.push(HypothesisRational, &[], Statement::equal(z.clone().pow(2), nat(&x)));
    let h2 = t.push(HypothesisRational, &[], Statement::equal(z.mul(q.clone()), p.clone()));
    let cop = t.push(Vii22Reduce, &[h2], Statement::coprime(p.clone(), q.clone()));
    let cop2 = t.push(Vii27Squares, &[cop], Statement::coprime(p.clone().pow(2), q.clone().pow(2)));
    let eq = t.push(SquareCrossMultiply, &[h1, h2], refuted_goal(&x, 2, "q", "p"));
    let p2 = t.push(EvenByDoubling, &[eq], Statement::even(p.clone().pow(2)));
    let q2 = t.push(HalfOfEvenSquare, &[eq, p2], Statement::even(q.pow(2)));
    let p2o = t.push(CoprimeParity, &[cop2, q2], Statement::odd(p.pow(2)));
    t.push(ParityMismatch, &[p2, p2o], Statement::False);
    t
}
