use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::poly::Poly;
use super::term::{Assignment, DegreeClass, Statement, Term};
use super::trace::{CheckResult, ProofTrace, RuleTag};
use crate::valuation::base_decompose;
use crate::Natural;

/// Largest modulus `RESIDUE_SCAN` will verify inside the kernel.
pub const RESIDUE_SCAN_LIMIT: u64 = 1 << 32;

type Check = core::result::Result<(), String>;

fn fail<T>(msg: impl Into<String>) -> core::result::Result<T, String> {
    Err(msg.into())
}

fn ensure(cond: bool, msg: &str) -> Check {
    if cond {
        Ok(())
    } else {
        fail(msg)
    }
}

fn arity(premises: &[&Statement], n: usize) -> Check {
    if premises.len() == n {
        Ok(())
    } else {
        fail(format!("expected {n} premise(s), found {}", premises.len()))
    }
}

fn as_equal(s: &Statement) -> Option<(&Term, &Term)> {
    match s {
        Statement::Equal { lhs, rhs } => Some((lhs, rhs)),
        _ => None,
    }
}

fn as_degree(s: &Statement) -> Option<(&Term, DegreeClass, &Natural)> {
    match s {
        Statement::DegreeIs { term, class, base } => Some((term, *class, base)),
        _ => None,
    }
}

/// `X·N^e = M^e`, the cross-multiplied rationality hypothesis.
pub(crate) fn hypothesis_shape(s: &Statement) -> Option<(&Natural, &Term, &Term, u64)> {
    let (lhs, rhs) = as_equal(s)?;
    let (x, npow) = lhs.as_mul()?;
    let (n, e) = npow.as_pow()?;
    let (m, e2) = rhs.as_pow()?;
    (e == e2 && e >= 2).then_some((x.as_nat()?, n, m, e))
}

fn is_power_of(base: &Natural, v: &Natural) -> bool {
    match base_decompose(base, v) {
        Ok(d) => d.cofactor().is_one(),
        Err(_) => false,
    }
}

/// Concrete `b^k·u`, refusing values beyond the evaluation bound.
fn concrete_product(b: &Natural, k: u64, u: &Natural) -> Option<Natural> {
    Term::nat(b.clone()).pow(k).mul(Term::nat(u.clone())).eval(&Assignment::new())
}

fn small_prime(p: &Natural) -> bool {
    p.to_u64().is_some_and(crate::natural::is_prime_u64)
}

fn residue_scan_clear(s: u64) -> bool {
    let s = u128::from(s);
    (1..s).all(|r| (r * r) % s != 0)
}

fn residue_class_of_pow(e: u64) -> Option<DegreeClass> {
    if e >= 2 && e % 2 == 0 {
        Some(DegreeClass::Even)
    } else if e >= 3 && e % 3 == 0 {
        Some(DegreeClass::MultipleOf3)
    } else {
        None
    }
}

fn succ_chain(mut t: Term, k: u64) -> Term {
    for _ in 0..k {
        t = t.succ();
    }
    t
}

/// Local validity of one rule application, ignoring the rest of the trace.
///
/// Rules whose soundness depends on the trace (hypotheses, freshness of
/// `EVEN_HALVE` variables, where `ORACLE` may appear) get only their local
/// shape checked here; [`check_trace`] adds the rest.
pub fn check_rule(rule: RuleTag, premises: &[Statement], conclusion: &Statement) -> Check {
    let refs: Vec<&Statement> = premises.iter().collect();
    check_local(rule, &refs, conclusion)
}

fn check_local(rule: RuleTag, p: &[&Statement], c: &Statement) -> Check {
    use RuleTag::*;
    match rule {
        HypothesisRational => {
            arity(p, 0)?;
            ensure(as_equal(c).is_some(), "hypotheses are equations")
        }
        SquareCrossMultiply => {
            arity(p, 2)?;
            let (zp, x) = as_equal(p[0]).ok_or("first premise must be z^e = X")?;
            let (z, e) = zp.as_pow().ok_or("first premise must be z^e = X")?;
            let (zn, m) = as_equal(p[1]).ok_or("second premise must be z·n = m")?;
            let (z2, n) = zn.as_mul().ok_or("second premise must be z·n = m")?;
            ensure(z.as_var().is_some() && z == z2, "premises must share the ratio variable")?;
            ensure(x.as_nat().is_some() && e >= 2, "radicand must be a constant")?;
            let want = Statement::equal(x.clone().mul(n.clone().pow(e)), m.clone().pow(e));
            ensure(*c == want, "conclusion is not the cross-multiplied equation")
        }
        ValAdditivity => {
            if p.is_empty() {
                let (lhs, rhs) = as_equal(c).ok_or("expected deg(c·B) = deg(B) + k")?;
                let (a, b) = lhs.as_deg().and_then(Term::as_mul).ok_or("expected deg(c·B) on the left")?;
                let a = a.as_nat().ok_or("left factor must be a constant")?;
                let k = a.trailing_zeros().ok_or("deg(0) is undefined")?;
                return ensure(*rhs == succ_chain(b.clone().deg(), k), "successor count must equal deg(c)");
            }
            arity(p, 2)?;
            let (t1, c1, b1) = as_degree(p[0]).ok_or("premises must be degree facts")?;
            let (t2, c2, b2) = as_degree(p[1]).ok_or("premises must be degree facts")?;
            let (t, class, base) = as_degree(c).ok_or("conclusion must be a degree fact")?;
            ensure(b1 == base && b2 == base, "all degrees must share a base")?;
            let (class_want, a, b) = if let Some((a, b)) = t.as_mul().filter(|&(a, b)| a == t1 && b == t2) {
                (c1.residue().add(c2.residue()), a, b)
            } else if let Some((a, b)) = t1.as_mul().filter(|&(a, b)| a == t && b == t2) {
                (c1.residue().sub(c2.residue()).ok_or("degree would be negative")?, a, b)
            } else if let Some((a, b)) = t1.as_mul().filter(|&(a, b)| a == t2 && b == t) {
                (c1.residue().sub(c2.residue()).ok_or("degree would be negative")?, a, b)
            } else {
                return fail("terms do not form a product and its factors");
            };
            let power_factor = [a, b].iter().any(|f| f.as_nat().is_some_and(|v| is_power_of(base, v)));
            ensure(
                *base == 2u64 || small_prime(base) || power_factor,
                "degrees add only for prime bases or a power-of-base factor",
            )?;
            let want = DegreeClass::from_residue(class_want).ok_or("resulting class is not expressible")?;
            ensure(class == want, "degree class does not follow")
        }
        ValSquareEven | ValCubeTriple => {
            arity(p, 0)?;
            let (t, class, base) = as_degree(c).ok_or("conclusion must be a degree fact")?;
            let (_, e) = t.as_pow().ok_or("conclusion must concern a power")?;
            ensure(*base == 2u64, "degree of parity is base 2")?;
            if rule == ValSquareEven {
                ensure(e >= 2 && e % 2 == 0 && class == DegreeClass::Even, "needs an even power with class even")
            } else {
                ensure(
                    e >= 3 && e % 3 == 0 && class == DegreeClass::MultipleOf3,
                    "needs a power divisible by 3 with class multiple_of_3",
                )
            }
        }
        Vii30Prime => {
            arity(p, 0)?;
            let (t, class, base) = as_degree(c).ok_or("conclusion must be a degree fact")?;
            let (_, e) = t.as_pow().ok_or("conclusion must concern a power")?;
            ensure(*base != 2u64 && small_prime(base), "base must be an odd prime")?;
            ensure(Some(class) == residue_class_of_pow(e), "class must follow from the exponent")
        }
        ResidueScan => {
            arity(p, 0)?;
            if let Some((lhs, rhs)) = as_equal(c) {
                let (r, e) = lhs.as_pow().ok_or("witness must be r^2 = s")?;
                let r = r.as_nat().ok_or("witness must be concrete")?;
                let s = rhs.as_nat().ok_or("witness must be concrete")?;
                ensure(e == 2 && s.is_odd() && r < s, "witness must be r^2 = s with s odd and r < s")?;
                return ensure(r.pow(2) == *s, "witness does not square to s");
            }
            let (t, class, base) = as_degree(c).ok_or("conclusion must be a degree fact or a witness")?;
            let (_, e) = t.as_pow().ok_or("conclusion must concern a square")?;
            ensure(e == 2 && class == DegreeClass::Even, "scan concludes an even degree of a square")?;
            let s = base.to_u64().filter(|&s| s <= RESIDUE_SCAN_LIMIT).ok_or("modulus beyond the scan limit")?;
            ensure(s >= 3 && s % 2 == 1 && !crate::natural::is_prime_u64(s), "scan modulus must be odd and composite")?;
            ensure(residue_scan_clear(s), "some residue square is divisible by the modulus")
        }
        EqualDegrees => {
            let (a, b) = as_equal(p.first().copied().ok_or("missing equation premise")?).ok_or("first premise must be an equation")?;
            if p.len() == 1 {
                return ensure(*c == Statement::equal(a.clone().deg(), b.clone().deg()), "expected deg(A) = deg(B)");
            }
            arity(p, 2)?;
            let (t, class, base) = as_degree(p[1]).ok_or("second premise must be a degree fact")?;
            ensure(t == b, "degree fact must concern the right-hand side")?;
            ensure(*c == Statement::degree_in_base(a.clone(), class, base.clone()), "expected the same degree for the left-hand side")
        }
        ParityMismatch => {
            arity(p, 2)?;
            if let (Some((d1, x)), Some((d2, y))) = (as_equal(p[0]), as_equal(p[1])) {
                ensure(d1 == d2, "equations must share a left-hand side")?;
                ensure(
                    x.as_succ().and_then(Term::as_deg).is_some() && y.as_deg().is_some(),
                    "expected deg(A) = deg(a) + 1 and deg(A) = deg(b)",
                )?;
                return ensure(*c == Statement::equal(x.clone(), y.clone()), "expected deg(a) + 1 = deg(b)");
            }
            ensure(*c == Statement::False, "conclusion must be ⊥")?;
            match (p[0], p[1]) {
                (Statement::Even { term: a }, Statement::Odd { term: b }) => ensure(a == b, "parities concern different terms"),
                _ => {
                    let (t1, c1, b1) = as_degree(p[0]).ok_or("expected two degree facts or even/odd")?;
                    let (t2, c2, b2) = as_degree(p[1]).ok_or("expected two degree facts or even/odd")?;
                    ensure(t1 == t2 && b1 == b2, "degree facts concern different terms")?;
                    ensure(c1.residue().disjoint(c2.residue()), "degree classes are compatible")
                }
            }
        }
        UnitEven => {
            arity(p, 3)?;
            let (l, r) = as_equal(p[0]).ok_or("first premise must be deg(a) + 1 = deg(b)")?;
            let a = l.as_succ().and_then(Term::as_deg).ok_or("first premise must be deg(a) + 1 = deg(b)")?;
            let b = r.as_deg().ok_or("first premise must be deg(a) + 1 = deg(b)")?;
            ensure(*p[1] == Statement::degree_is(a.clone(), DegreeClass::Even), "second premise must be deg(a) even")?;
            ensure(*p[2] == Statement::degree_is(b.clone(), DegreeClass::Even), "third premise must be deg(b) even")?;
            ensure(*c == Statement::even(Term::nat(1u64)), "conclusion must be that 1 is even")
        }
        OddDefinition => {
            arity(p, 0)?;
            match c {
                Statement::Odd { term } => ensure(odd_form(term).is_some(), "expected 2·t + 1 is odd"),
                _ => fail("expected 2·t + 1 is odd"),
            }
        }
        AllOddsEven => {
            arity(p, 2)?;
            ensure(*p[0] == Statement::even(Term::nat(1u64)), "first premise must be that 1 is even")?;
            let Statement::Odd { term } = p[1] else {
                return fail("second premise must define an odd number");
            };
            ensure(odd_form(term).is_some(), "second premise must be 2·t + 1 is odd")?;
            ensure(*c == Statement::even(term.clone()), "conclusion must call that odd number even")
        }
        Vii22Reduce => {
            arity(p, 1)?;
            let (zn, m) = as_equal(p[0]).ok_or("premise must be z·n = m")?;
            let (z, n) = zn.as_mul().ok_or("premise must be z·n = m")?;
            ensure(z.as_var().is_some(), "premise must be z·n = m")?;
            ensure(*c == Statement::coprime(m.clone(), n.clone()), "expected m and n coprime")
        }
        EvenSquareEvenRoot => {
            arity(p, 1)?;
            let Statement::Even { term } = p[0] else {
                return fail("premise must be an even power");
            };
            let (t, e) = term.as_pow().ok_or("premise must be an even power")?;
            ensure(e >= 1 && *c == Statement::even(t.clone()), "expected the root to be even")
        }
        Vii27Squares => {
            arity(p, 1)?;
            let Statement::Coprime { lhs, rhs } = p[0] else {
                return fail("premise must be a coprimality");
            };
            let Statement::Coprime { lhs: cl, rhs: cr } = c else {
                return fail("conclusion must be a coprimality");
            };
            let (a, e1) = cl.as_pow().ok_or("conclusion must concern powers")?;
            let (b, e2) = cr.as_pow().ok_or("conclusion must concern powers")?;
            ensure(a == lhs && b == rhs && e1 == e2 && e1 >= 1, "expected equal powers of the coprime pair")
        }
        Viii14Divides => {
            arity(p, 1)?;
            let Statement::Divides { divisor, dividend } = p[0] else {
                return fail("premise must be a divisibility");
            };
            let (a, e1) = divisor.as_pow().ok_or("premise must relate powers")?;
            let (b, e2) = dividend.as_pow().ok_or("premise must relate powers")?;
            ensure(e1 == e2 && e1 >= 1, "powers must match")?;
            ensure(*c == Statement::divides(a.clone(), b.clone()), "expected the sides to divide")
        }
        Oracle => {
            if p.is_empty() {
                let (lhs, rhs) = as_equal(c).ok_or("oracle asserts r^e = X")?;
                let (r, e) = lhs.as_pow().ok_or("oracle asserts r^e = X")?;
                ensure(r.as_nat().is_some() && rhs.as_nat().is_some() && e >= 2, "oracle facts are concrete")?;
                return ensure(c.eval(&Assignment::new()) == Some(true), "oracle fact is false");
            }
            arity(p, 1)?;
            let (x, _, _, e) = hypothesis_shape(p[0]).ok_or("premise must be X·n^e = m^e")?;
            ensure(*c == Statement::False, "conclusion must be ⊥")?;
            let e = u32::try_from(e).map_err(|_| String::from("exponent too large"))?;
            ensure(x.exact_root(e).is_none(), "X is a perfect power")
        }
        ParityDecompose => {
            arity(p, 0)?;
            if let Some((t, class, base)) = as_degree(c) {
                let n = t.as_nat().ok_or("decomposition applies to constants")?;
                let DegreeClass::Value(k) = class else {
                    return fail("decomposition gives an exact degree");
                };
                let d = base_decompose(base, n).map_err(|e| format!("{e}"))?;
                return ensure(d.degree() == k, "wrong degree");
            }
            let (lhs, rhs) = as_equal(c).ok_or("expected n = b^k·u")?;
            let n = lhs.as_nat().ok_or("expected n = b^k·u")?;
            let (bk, u) = rhs.as_mul().ok_or("expected n = b^k·u")?;
            let (b, k) = bk.as_pow().ok_or("expected n = b^k·u")?;
            let (b, u) = (b.as_nat().ok_or("base must be constant")?, u.as_nat().ok_or("cofactor must be constant")?);
            ensure(*b >= 2u64 && !b.divides(u), "cofactor must not be divisible by the base")?;
            ensure(concrete_product(b, k, u).as_ref() == Some(n), "product does not match")
        }
        KernelReduce => {
            if let [hyp] = p {
                if let Some((x, n, m, e)) = hypothesis_shape(hyp) {
                    let (s, _, _, e2) = hypothesis_shape(c).ok_or("expected s·(a·n)^e = m^e")?;
                    let (lhs, rhs) = as_equal(c).ok_or("expected s·(a·n)^e = m^e")?;
                    let (an, _) = lhs.as_mul().and_then(|(_, p)| p.as_pow()).ok_or("expected s·(a·n)^e = m^e")?;
                    let (a, n2) = an.as_mul().ok_or("expected s·(a·n)^e = m^e")?;
                    let a = a.as_nat().ok_or("factor must be a constant")?;
                    ensure(e2 == e && n2 == n && *rhs == m.clone().pow(e), "reduction must keep n, m and e")?;
                    ensure(*a >= 2u64, "factor must exceed 1")?;
                    let want = concrete_product(a, e, s);
                    return ensure(want.as_ref() == Some(x), "X ≠ a^e·s");
                }
            }
            let (xl, rhs) = as_equal(p.first().copied().ok_or("missing premise")?).ok_or("first premise must be X = 2^h·s")?;
            let x = xl.as_nat().ok_or("first premise must be X = 2^h·s")?;
            let (two_h, s) = rhs.as_mul().ok_or("first premise must be X = 2^h·s")?;
            let (two, h) = two_h.as_pow().ok_or("first premise must be X = 2^h·s")?;
            ensure(two.as_nat().is_some_and(|t| *t == 2u64), "first premise must be X = 2^h·s")?;
            let s = s.as_nat().ok_or("kernel must be constant")?;
            let (rootp, x2) = as_equal(c).ok_or("expected R^e = X")?;
            let (root, e) = rootp.as_pow().ok_or("expected R^e = X")?;
            let root = root.as_nat().ok_or("root must be constant")?;
            ensure(x2.as_nat() == Some(x), "conclusion must concern X")?;
            ensure(e >= 2 && h % e == 0, "exponent must divide the degree")?;
            let r = match p.len() {
                1 => {
                    ensure(s.is_one(), "kernel must be 1 without a kernel root")?;
                    Natural::one()
                }
                3 => {
                    let (rl, s2) = as_equal(p[1]).ok_or("second premise must be r^e = s")?;
                    let (r, e2) = rl.as_pow().ok_or("second premise must be r^e = s")?;
                    ensure(e2 == e && s2.as_nat() == Some(s), "second premise must be r^e = s")?;
                    ensure(*p[2] == Statement::odd(r.clone()), "third premise must be r odd")?;
                    r.as_nat().ok_or("kernel root must be constant")?.clone()
                }
                _ => return fail("expected 1 or 3 premises"),
            };
            ensure(*root == r.shl(h / e), "root must be 2^(h/e)·r")
        }
        OddQuotient => {
            arity(p, 1)?;
            let (rl, s) = as_equal(p[0]).ok_or("premise must be r^e = s")?;
            let (r, e) = rl.as_pow().ok_or("premise must be r^e = s")?;
            ensure(r.as_nat().is_some() && e >= 1, "root must be constant")?;
            ensure(s.as_nat().is_some_and(Natural::is_odd), "s must be odd")?;
            ensure(*c == Statement::odd(r.clone()), "expected the root to be odd")
        }
        EvenByDoubling => {
            arity(p, 1)?;
            let (lhs, u) = as_equal(p[0]).ok_or("premise must be c·T = U")?;
            let (k, _) = lhs.as_mul().ok_or("premise must be c·T = U")?;
            ensure(k.as_nat().is_some_and(|k| k.is_even() && !k.is_zero()), "multiplier must be a non-zero even constant")?;
            ensure(*c == Statement::even(u.clone()), "expected U even")
        }
        HalfOfEvenSquare => {
            arity(p, 2)?;
            let (lhs, sq) = as_equal(p[0]).ok_or("first premise must be 2·A = T^2")?;
            let (two, a) = lhs.as_mul().ok_or("first premise must be 2·A = T^2")?;
            ensure(two.as_nat().is_some_and(|t| *t == 2u64), "first premise must be 2·A = T^2")?;
            ensure(sq.as_pow().is_some_and(|(_, e)| e == 2), "first premise must be 2·A = T^2")?;
            ensure(*p[1] == Statement::even(sq.clone()), "second premise must be T^2 even")?;
            ensure(*c == Statement::even(a.clone()), "expected A even")
        }
        CoprimeParity => {
            arity(p, 2)?;
            let Statement::Coprime { lhs, rhs } = p[0] else {
                return fail("first premise must be a coprimality");
            };
            let Statement::Even { term } = p[1] else {
                return fail("second premise must be an even number");
            };
            let other = if term == lhs {
                rhs
            } else if term == rhs {
                lhs
            } else {
                return fail("even number is not in the coprime pair");
            };
            ensure(*c == Statement::odd(other.clone()), "expected the partner to be odd")
        }
        EvenHalve => {
            arity(p, 1)?;
            let Statement::Even { term } = p[0] else {
                return fail("premise must be an even number");
            };
            let (t, half) = as_equal(c).ok_or("expected T = 2·r")?;
            let (two, r) = half.as_mul().ok_or("expected T = 2·r")?;
            ensure(t == term && two.as_nat().is_some_and(|t| *t == 2u64), "expected T = 2·r")?;
            let r = r.as_var().ok_or("half must be a new variable")?;
            ensure(!term.mentions(r), "half must be a new variable")
        }
        Substitute => {
            arity(p, 2)?;
            let (v, t) = as_equal(p[0]).ok_or("first premise must be v = T")?;
            let v = v.as_var().ok_or("first premise must be v = T")?;
            ensure(p[1].mentions(v), "variable does not occur")?;
            ensure(*c == p[1].substitute(v, t), "conclusion is not the substitution instance")
        }
        Arith => {
            arity(p, 1)?;
            let (a, b) = as_equal(p[0]).ok_or("premise must be an equation")?;
            let (x, y) = as_equal(c).ok_or("conclusion must be an equation")?;
            let poly = |t: &Term| Poly::from_term(t).ok_or(String::from("term too large to normalise"));
            let before = poly(a)?.sub(&poly(b)?);
            let after = poly(x)?.sub(&poly(y)?);
            ensure(!before.is_zero(), "premise is an identity")?;
            ensure(after.proportional(&before), "conclusion is not a rescaling of the premise")?;
            ensure(
                check_local(KernelReduce, p, c).is_err(),
                "pulling a square factor out of the radicand is KERNEL_REDUCE",
            )
        }
        MultipleDivides => {
            arity(p, 1)?;
            let (ab, prod) = as_equal(p[0]).ok_or("premise must be A·B = C")?;
            let (_, b) = ab.as_mul().ok_or("premise must be A·B = C")?;
            ensure(*c == Statement::divides(b.clone(), prod.clone()), "expected B to divide C")
        }
        CoprimeClash => {
            arity(p, 3)?;
            let Statement::Coprime { lhs: a, rhs: b } = p[0] else {
                return fail("first premise must be a coprimality");
            };
            ensure(*p[1] == Statement::divides(b.clone(), a.clone()), "second premise must be B divides A")?;
            let (x, n, m, e) = hypothesis_shape(p[2]).ok_or("third premise must be X·B^2 = A^2")?;
            ensure(e == 2 && n == b && m == a, "third premise must be X·B^2 = A^2")?;
            ensure(x.exact_root(2).is_none(), "X is a perfect square")?;
            ensure(*c == Statement::False, "conclusion must be ⊥")
        }
    }
}

/// `2·t + 1`.
fn odd_form(t: &Term) -> Option<&Term> {
    let (two, inner) = t.as_succ()?.as_mul()?;
    two.as_nat().filter(|v| **v == 2u64).map(|_| inner)
}

/// Validates a whole trace.
///
/// Beyond each step's rule: ids are consecutive from 1; premises point
/// strictly backwards without repetition; every step but the last is used
/// later; concrete statements not resting on a hypothesis are re-checked by
/// exact arithmetic; and the trace ends either in an absurdity refuting a
/// goal of the form `X·n^e = m^e`, or in the goal itself.
pub fn check_trace(t: &ProofTrace) -> CheckResult {
    match check_inner(t) {
        Ok(()) => CheckResult::Accepted,
        Err((step, reason)) => CheckResult::Rejected { step, reason },
    }
}

type Fault = (Option<usize>, String);

fn at(id: usize) -> impl Fn(String) -> Fault {
    move |r| (Some(id), r)
}

fn whole(r: &str) -> Fault {
    (None, r.into())
}

fn check_inner(t: &ProofTrace) -> core::result::Result<(), Fault> {
    let last = t.steps.last().ok_or_else(|| whole("trace has no steps"))?;
    let reductio = last.conclusion.is_absurd();
    let goal_vars: BTreeSet<&str> = t.goal.free_vars();
    if reductio {
        let (_, n, m, _) = hypothesis_shape(&t.goal).ok_or_else(|| whole("a reductio must refute X·n^e = m^e"))?;
        match (n.as_var(), m.as_var()) {
            (Some(a), Some(b)) if a != b => {}
            _ => return Err(whole("the refuted goal must use two distinct variables")),
        }
    } else if last.conclusion != t.goal {
        return Err(at(last.id)("final step neither reaches ⊥ nor states the goal".into()));
    } else if !matches!(last.rule, RuleTag::KernelReduce | RuleTag::Oracle) {
        return Err(at(last.id)("a direct proof must end with KERNEL_REDUCE or ORACLE".into()));
    }

    let mut used = alloc::vec![false; t.steps.len()];
    let mut tainted = alloc::vec![false; t.steps.len()];
    let mut seen_vars: BTreeSet<String> = goal_vars.iter().map(|v| String::from(*v)).collect();
    let mut ratio_vars: BTreeSet<String> = BTreeSet::new();

    for (i, step) in t.steps.iter().enumerate() {
        let id = i + 1;
        let here = at(id);
        if step.id != id {
            return Err(here(format!("step id {} out of sequence", step.id)));
        }
        let mut distinct = BTreeSet::new();
        for &pid in &step.premises {
            if pid == 0 || pid >= id {
                return Err(here(format!("premise {pid} is not an earlier step")));
            }
            if !distinct.insert(pid) {
                return Err(here(format!("premise {pid} repeated")));
            }
            used[pid - 1] = true;
        }
        let premises: Vec<&Statement> = step.premises.iter().map(|&p| &t.steps[p - 1].conclusion).collect();
        check_local(step.rule, &premises, &step.conclusion).map_err(&here)?;

        // Trace-level conditions.
        match step.rule {
            RuleTag::HypothesisRational => {
                if !reductio {
                    return Err(here("hypotheses belong to reductio proofs".into()));
                }
                if step.conclusion != t.goal {
                    let z = ratio_form(&t.goal, &step.conclusion).ok_or_else(|| here("hypothesis does not match the goal".into()))?;
                    if goal_vars.contains(z) {
                        return Err(here("ratio variable clashes with the goal".into()));
                    }
                    ratio_vars.insert(z.into());
                }
            }
            RuleTag::Vii22Reduce => {
                let src = &t.steps[step.premises[0] - 1];
                if src.rule != RuleTag::HypothesisRational {
                    return Err(here("coprime reduction applies to the rationality hypothesis".into()));
                }
            }
            RuleTag::EvenHalve => {
                if !reductio {
                    return Err(here("new variables belong to reductio proofs".into()));
                }
                let Statement::Equal { rhs, .. } = &step.conclusion else { unreachable!() };
                let v = rhs.as_mul().and_then(|(_, r)| r.as_var()).expect("checked by rule");
                if seen_vars.contains(v) {
                    return Err(here(format!("variable {v} is not fresh")));
                }
            }
            RuleTag::Oracle => check_oracle_shape(t).map_err(&here)?,
            _ => {}
        }
        for &pid in &step.premises {
            let src = &t.steps[pid - 1];
            let is_ratio_form = src.rule == RuleTag::HypothesisRational && src.conclusion != t.goal;
            if is_ratio_form && !matches!(step.rule, RuleTag::SquareCrossMultiply | RuleTag::Vii22Reduce) {
                return Err(here("the ratio variable may only be eliminated".into()));
            }
        }
        for v in step.conclusion.free_vars() {
            if ratio_vars.contains(v) && step.rule != RuleTag::HypothesisRational {
                return Err(here(format!("ratio variable {v} escapes its hypothesis")));
            }
            seen_vars.insert(v.into());
        }

        tainted[i] = matches!(step.rule, RuleTag::HypothesisRational | RuleTag::Vii22Reduce)
            || step.premises.iter().any(|&p| tainted[p - 1]);
        if !tainted[i]
            && step.conclusion != Statement::False
            && step.conclusion.is_concrete()
            && step.conclusion.eval(&Assignment::new()) != Some(true)
        {
            return Err(here("concrete statement is false".into()));
        }
    }

    if let Some(idle) = used[..used.len() - 1].iter().position(|u| !u) {
        return Err(at(idle + 1)("step is never used".into()));
    }
    Ok(())
}

/// `z^e = X` or `z·n = m` for a goal `X·n^e = m^e`; returns `z`.
fn ratio_form<'a>(goal: &Statement, s: &'a Statement) -> Option<&'a str> {
    let (x, n, m, e) = hypothesis_shape(goal)?;
    let (lhs, rhs) = as_equal(s)?;
    if let Some((z, e2)) = lhs.as_pow() {
        return (e2 == e && rhs.as_nat() == Some(x)).then_some(z.as_var()?);
    }
    let (z, n2) = lhs.as_mul()?;
    (n2 == n && rhs == m).then_some(z.as_var()?)
}

/// `ORACLE` appears only as `[ORACLE ⊢ goal]` or `[HYP goal, ORACLE ⊢ ⊥]`.
fn check_oracle_shape(t: &ProofTrace) -> Check {
    match t.steps.as_slice() {
        [only] if only.conclusion == t.goal => Ok(()),
        [hyp, _] if hyp.rule == RuleTag::HypothesisRational && hyp.conclusion == t.goal => Ok(()),
        _ => fail("ORACLE may only decide a trace on its own"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Term {
        Term::nat(v)
    }

    #[test]
    fn val_square_even_rejects_odd_class() {
        let good = Statement::degree_is(Term::var("m").pow(2), DegreeClass::Even);
        assert!(check_rule(RuleTag::ValSquareEven, &[], &good).is_ok());
        let bad = Statement::degree_is(Term::var("m").pow(2), DegreeClass::Odd);
        assert!(check_rule(RuleTag::ValSquareEven, &[], &bad).is_err());
    }

    #[test]
    fn residue_scan_refuses_primes_and_hits() {
        let sq = |s: u64| Statement::degree_in_base(Term::var("n").pow(2), DegreeClass::Even, Natural::from(s));
        assert!(check_rule(RuleTag::ResidueScan, &[], &sq(15)).is_ok());
        assert!(check_rule(RuleTag::ResidueScan, &[], &sq(3)).is_err());
        assert!(check_rule(RuleTag::ResidueScan, &[], &sq(45)).is_err());
        assert!(check_rule(RuleTag::ResidueScan, &[], &sq(9)).is_err());
        let w = Statement::equal(n(3).pow(2), n(9));
        assert!(check_rule(RuleTag::ResidueScan, &[], &w).is_ok());
    }

    #[test]
    fn additivity_classes() {
        let d = |t: Term, c| Statement::degree_is(t, c);
        let a = n(8);
        let b = Term::var("n").pow(2);
        let prem = [d(a.clone(), DegreeClass::Value(3)), d(b.clone(), DegreeClass::Even)];
        let ok = d(a.clone().mul(b.clone()), DegreeClass::Odd);
        assert!(check_rule(RuleTag::ValAdditivity, &prem, &ok).is_ok());
        let bad = d(a.mul(b), DegreeClass::Even);
        assert!(check_rule(RuleTag::ValAdditivity, &prem, &bad).is_err());
    }

    #[test]
    fn additivity_refuses_composite_base_without_power_factor() {
        let d = |t: Term, c| Statement::degree_in_base(t, c, Natural::from(4u64));
        let prem = [d(Term::var("a"), DegreeClass::Value(1)), d(Term::var("b"), DegreeClass::Value(1))];
        let c = d(Term::var("a").mul(Term::var("b")), DegreeClass::Value(2));
        assert!(check_rule(RuleTag::ValAdditivity, &prem, &c).is_err());
    }

    #[test]
    fn arith_rescaling() {
        let prem = Statement::equal(n(2).mul(Term::var("q").pow(2)), n(2).mul(Term::var("r")).pow(2));
        let ok = Statement::equal(n(2).mul(Term::var("r").pow(2)), Term::var("q").pow(2));
        assert!(check_rule(RuleTag::Arith, core::slice::from_ref(&prem), &ok).is_ok());
        let bad = Statement::equal(Term::var("r").pow(2), Term::var("q").pow(2));
        assert!(check_rule(RuleTag::Arith, &[prem], &bad).is_err());
    }

    #[test]
    fn arith_leaves_kernel_reduction_alone() {
        let prem = Statement::equal(n(12).mul(Term::var("n").pow(2)), Term::var("m").pow(2));
        let c = Statement::equal(n(3).mul(n(2).mul(Term::var("n")).pow(2)), Term::var("m").pow(2));
        assert!(check_rule(RuleTag::KernelReduce, core::slice::from_ref(&prem), &c).is_ok());
        assert!(check_rule(RuleTag::Arith, &[prem], &c).is_err());
    }

    #[test]
    fn empty_trace_rejected() {
        let t = ProofTrace::new(Statement::False);
        assert!(!check_trace(&t).is_accepted());
    }
}
