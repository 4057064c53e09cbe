use parity_forge_core::engine::{
    cbrt_verdict, coprime_reduce, generalization_failure_demo, prime_base_verdict, residue_scan,
    sqrt_verdict, Outcome, Policy, ResidueOutcome, Strategy, VerdictKind,
};
use parity_forge_core::kernel::check_trace;
use parity_forge_core::{Error, Natural};
use proptest::prelude::*;

fn nat(v: u64) -> Natural {
    Natural::from(v)
}

/// Largest r with r^e ≤ n, by binary search on u128.
fn int_root(n: u64, e: u32) -> u64 {
    let (mut lo, mut hi) = (0u64, 1u64 << (64 / e + 1));
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if u128::from(mid).pow(e) <= u128::from(n) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

fn exact_root(n: u64, e: u32) -> Option<u64> {
    let r = int_root(n, e);
    (u128::from(r).pow(e) == u128::from(n)).then_some(r)
}

fn assert_sound(n: u64, e: u32, policy: &Policy) -> VerdictKind {
    let v = if e == 2 {
        sqrt_verdict(&nat(n), policy).unwrap()
    } else {
        cbrt_verdict(&nat(n), policy).unwrap()
    };
    match (exact_root(n, e), &v.outcome) {
        (Some(r), Outcome::Rational { root }) => assert_eq!(*root, r, "n = {n}"),
        (None, Outcome::Irrational) | (_, Outcome::Inconclusive { .. }) => {}
        (oracle, outcome) => panic!("n = {n}, e = {e}: oracle {oracle:?}, engine {outcome:?}"),
    }
    match &v.trace {
        Some(t) => assert!(check_trace(t).is_accepted(), "n = {n}: {}", check_trace(t)),
        None => assert_eq!(v.kind(), VerdictKind::Inconclusive),
    }
    v.kind()
}

#[test]
fn default_policy_is_decisive_and_sound() {
    let policy = Policy::default();
    for n in 1..=20_000 {
        assert_ne!(assert_sound(n, 2, &policy), VerdictKind::Inconclusive, "√{n}");
        assert_ne!(assert_sound(n, 3, &policy), VerdictKind::Inconclusive, "∛{n}");
    }
}

#[test]
fn theodorus_range() {
    for n in 2..=17u64 {
        let v = sqrt_verdict(&nat(n), &Policy::default()).unwrap();
        let expected = if [4, 9, 16].contains(&n) { VerdictKind::Rational } else { VerdictKind::Irrational };
        assert_eq!(v.kind(), expected, "√{n}");
    }
}

#[test]
fn odd_squares_have_odd_roots() {
    let policy = Policy::default();
    for r in (1..=1000u64).step_by(2) {
        let v = sqrt_verdict(&nat(r * r), &policy).unwrap();
        let root = v.root().expect("odd square is rational").to_u64().unwrap();
        assert_eq!(root % 2, 1);
        assert_eq!(root, r);
    }
}

#[test]
fn residue_and_prime_base_are_never_wrong() {
    let residue = Policy::only(&[Strategy::ResidueScan]);
    let prime = Policy::only(&[Strategy::PrimeBase]);
    let classical = Policy::only(&[Strategy::ClassicalVii22]);
    let reduction = Policy::only(&[Strategy::OddKernelReduction]);
    for n in 1..=5000 {
        for p in [&residue, &prime, &classical, &reduction] {
            assert_sound(n, 2, p);
        }
        assert_sound(n, 3, &prime);
    }
}

#[test]
fn residue_scan_outcomes() {
    assert_eq!(residue_scan(&nat(45), 10_000), ResidueOutcome::Hit(15));
    assert_eq!(residue_scan(&nat(9), 10_000), ResidueOutcome::Witness(3));
    assert_eq!(residue_scan(&nat(15), 10_000), ResidueOutcome::Clear);
    assert_eq!(residue_scan(&nat(12), 10_000), ResidueOutcome::EvenModulus);
    assert_eq!(residue_scan(&nat(10_001), 10_000), ResidueOutcome::AboveCutoff);
    let v = sqrt_verdict(&nat(45), &Policy::only(&[Strategy::ResidueScan])).unwrap();
    assert_eq!(v.kind(), VerdictKind::Inconclusive);
}

#[test]
fn prime_base_refuses_composites() {
    for x in [4u64, 6, 9, 15, 45] {
        assert!(matches!(prime_base_verdict(&nat(x), &nat(12)), Err(Error::StrategyRefused(_))));
    }
    for (x, n, kind) in [(2, 8, VerdictKind::Irrational), (3, 12, VerdictKind::Irrational), (3, 36, VerdictKind::Inconclusive)] {
        let v = prime_base_verdict(&nat(x), &nat(n)).unwrap();
        assert_eq!(v.kind(), kind, "{x} on {n}");
        if let Some(t) = &v.trace {
            assert!(check_trace(t).is_accepted());
        }
    }
}

#[test]
fn failure_demo_counterexamples() {
    let bound = nat(1_000_000);
    let root = |x: u64| generalization_failure_demo(&nat(x), &bound).unwrap().counterexample.map(|c| c.n.to_u64().unwrap());
    assert_eq!(root(4), Some(4));
    assert_eq!(root(8), Some(16));
    assert_eq!(root(9), Some(9));
    assert_eq!(root(6), None);
    assert!(generalization_failure_demo(&nat(7), &bound).is_err());
}

#[test]
fn lowest_terms() {
    let pairs = [((9, 6), (3, 2)), ((4, 15), (4, 15)), ((6, 9), (2, 3))];
    for ((p, q), (a, b)) in pairs {
        assert_eq!(coprime_reduce(&nat(p), &nat(q)).unwrap(), (nat(a), nat(b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn four_power_factor_preserves_the_answer(k in 0u64..50_000, i in 0u64..=8) {
        let s = 2 * k + 1;
        let policy = Policy::default();
        let base = sqrt_verdict(&nat(s), &policy).unwrap();
        let scaled = sqrt_verdict(&nat(s).shl(2 * i), &policy).unwrap();
        prop_assert_eq!(base.kind(), scaled.kind());
        if let Some(t) = &scaled.trace {
            prop_assert!(check_trace(t).is_accepted());
        }
    }

    #[test]
    fn large_radicands_are_sound(r in 1u64..u32::MAX as u64, bump in 0u64..3) {
        let n = r * r + bump;
        assert_sound(n, 2, &Policy::default());
    }

    #[test]
    fn lowest_terms_are_coprime(p in 1u64.., q in 1u64..) {
        let (a, b) = coprime_reduce(&nat(p), &nat(q)).unwrap();
        prop_assert!(a.gcd(&b).is_one());
        prop_assert_eq!(a * nat(q), b * nat(p));
    }
}
