//! Deciding whether `√n` and `∛n` are rational.
//!
//! A [`Policy`] lists strategies to try in order. Each strategy either
//! decides, with a certificate the kernel accepts, or stands aside; when
//! none decides the verdict is [`Outcome::Inconclusive`].

mod traces;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::kernel::{ProofTrace, RuleTag, RESIDUE_SCAN_LIMIT};
use crate::natural::is_prime_u64;
use crate::valuation::{base_decompose, decompose};
use crate::{Error, Natural, Result};

use traces::PowerLaw;

/// Default bound on the odd kernel for [`Strategy::ResidueScan`].
pub const DEFAULT_RESIDUE_CUTOFF: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    ParityDegree,
    OddKernelReduction,
    ResidueScan,
    PrimeBase,
    ClassicalVii22,
    OracleFallback,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::ParityDegree,
        Strategy::OddKernelReduction,
        Strategy::ResidueScan,
        Strategy::PrimeBase,
        Strategy::ClassicalVii22,
        Strategy::OracleFallback,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::ParityDegree => "PARITY_DEGREE",
            Strategy::OddKernelReduction => "ODD_KERNEL_REDUCTION",
            Strategy::ResidueScan => "RESIDUE_SCAN",
            Strategy::PrimeBase => "PRIME_BASE",
            Strategy::ClassicalVii22 => "CLASSICAL_VII22",
            Strategy::OracleFallback => "ORACLE_FALLBACK",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown strategy {s:?}")))
    }
}

#[cfg(feature = "serde")]
impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which root is asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Query {
    Square,
    Cube,
}

impl Query {
    pub fn exponent(self) -> u64 {
        match self {
            Query::Square => 2,
            Query::Cube => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    pub order: Vec<Strategy>,
    /// Largest odd kernel the residue scan will examine.
    pub residue_cutoff: u64,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            order: alloc::vec![
                Strategy::ParityDegree,
                Strategy::OddKernelReduction,
                Strategy::ResidueScan,
                Strategy::OracleFallback,
            ],
            residue_cutoff: DEFAULT_RESIDUE_CUTOFF,
        }
    }
}

impl Policy {
    pub fn only(order: &[Strategy]) -> Self {
        Policy {
            order: order.to_vec(),
            ..Policy::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Outcome {
    Rational { root: Natural },
    Irrational,
    Inconclusive { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Rational,
    Irrational,
    Inconclusive,
}

/// The answer for one radicand. A trace is present exactly when the
/// outcome is not inconclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub query: Query,
    pub radicand: Natural,
    pub outcome: Outcome,
    pub trace: Option<ProofTrace>,
    /// The deciding strategy, or the last one tried.
    pub strategy: Strategy,
    /// The odd kernel, when a reduction to it took place.
    pub reduced_kernel: Option<Natural>,
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self.outcome {
            Outcome::Rational { .. } => VerdictKind::Rational,
            Outcome::Irrational => VerdictKind::Irrational,
            Outcome::Inconclusive { .. } => VerdictKind::Inconclusive,
        }
    }

    pub fn root(&self) -> Option<&Natural> {
        match &self.outcome {
            Outcome::Rational { root } => Some(root),
            _ => None,
        }
    }
}

/// Result of scanning the residues `r ∈ [1, s−1]` modulo `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueOutcome {
    /// `r² = s`.
    Witness(u64),
    /// No `r²` is divisible by `s`: `√s` is irrational.
    Clear,
    /// `s | r²` with `r² ≠ s`: the scan proves nothing.
    Hit(u64),
    /// Even moduli are outside the method.
    EvenModulus,
    AboveCutoff,
}

/// The residue scan on an odd `s`, stopping at the first `r` with `s | r²`.
///
/// The first such `r` is also the only candidate for an exact witness: if
/// `r0² = s` then no smaller `r` has `s | r²`.
pub fn residue_scan(s: &Natural, cutoff: u64) -> ResidueOutcome {
    let Some(s) = s.to_u64().filter(|&v| v <= cutoff && v <= RESIDUE_SCAN_LIMIT) else {
        return ResidueOutcome::AboveCutoff;
    };
    if s % 2 == 0 {
        return ResidueOutcome::EvenModulus;
    }
    // r² mod s, advanced by (r+1)² = r² + 2r + 1.
    let mut sq = 0u64;
    for r in 1..s {
        sq = (sq + 2 * r - 1) % s;
        if sq == 0 {
            return if r * r == s {
                ResidueOutcome::Witness(r)
            } else {
                ResidueOutcome::Hit(r)
            };
        }
    }
    ResidueOutcome::Clear
}

enum Step {
    Decided(Verdict),
    Pass(String),
}

struct Run<'a> {
    n: &'a Natural,
    query: Query,
    h: u64,
    kernel: Natural,
    reduced: Option<Natural>,
}

impl Run<'_> {
    fn e(&self) -> u64 {
        self.query.exponent()
    }

    fn verdict(&self, strategy: Strategy, outcome: Outcome, trace: ProofTrace) -> Step {
        Step::Decided(Verdict {
            query: self.query,
            radicand: self.n.clone(),
            outcome,
            trace: Some(trace),
            strategy,
            reduced_kernel: self.reduced.clone(),
        })
    }

    fn parity_degree(&self) -> Step {
        let e = self.e();
        if self.h % e == 0 {
            return Step::Pass(format!("degree of parity {} is a multiple of {e}", self.h));
        }
        let trace = if e == 2 && self.h == 1 {
            traces::unit_even_refutation(self.n)
        } else {
            traces::degree_refutation(self.n, e, &Natural::from(2u64), self.h, PowerLaw::Parity, None)
        };
        self.verdict(Strategy::ParityDegree, Outcome::Irrational, trace)
    }

    fn odd_kernel_reduction(&mut self) -> Step {
        let e = self.e();
        if self.h % e != 0 {
            return Step::Pass(format!("degree of parity {} is not a multiple of {e}", self.h));
        }
        self.reduced = Some(self.kernel.clone());
        if self.kernel.is_one() {
            let root = Natural::power_of_two(self.h / e);
            let trace = traces::reduction_root(self.n, e, self.h, &self.kernel, None);
            return self.verdict(Strategy::OddKernelReduction, Outcome::Rational { root }, trace);
        }
        Step::Pass(format!("reduced to the odd kernel {}", self.kernel))
    }

    fn residue(&mut self, cutoff: u64) -> Step {
        if self.query == Query::Cube {
            return Step::Pass("the residue scan applies to square roots".into());
        }
        if self.h % 2 != 0 {
            return Step::Pass("degree of parity is odd; no odd kernel".into());
        }
        let s = self.kernel.clone();
        self.reduced = Some(s.clone());
        if s.is_one() {
            let trace = traces::reduction_root(self.n, 2, self.h, &s, None);
            let root = Natural::power_of_two(self.h / 2);
            return self.verdict(Strategy::ResidueScan, Outcome::Rational { root }, trace);
        }
        match residue_scan(&s, cutoff) {
            ResidueOutcome::Witness(r) => {
                let r = Natural::from(r);
                let root = r.shl(self.h / 2);
                let trace = traces::reduction_root(self.n, 2, self.h, &s, Some((&r, RuleTag::ResidueScan)));
                self.verdict(Strategy::ResidueScan, Outcome::Rational { root }, trace)
            }
            ResidueOutcome::Clear => {
                let reduce = (self.h > 0).then(|| Natural::power_of_two(self.h / 2));
                let law = if s.is_prime() { PowerLaw::Prime } else { PowerLaw::Residue };
                let trace = traces::degree_refutation(self.n, 2, &s, 1, law, reduce.as_ref());
                self.verdict(Strategy::ResidueScan, Outcome::Irrational, trace)
            }
            ResidueOutcome::Hit(r) => Step::Pass(format!(
                "residue scan inconclusive: {s} divides {r}^2 = {} but no residue squares to {s}",
                u128::from(r) * u128::from(r)
            )),
            ResidueOutcome::EvenModulus => Step::Pass("even modulus".into()),
            ResidueOutcome::AboveCutoff => Step::Pass(format!("odd kernel {s} exceeds the residue cutoff {cutoff}")),
        }
    }

    fn prime_base(&self, cutoff: u64) -> Step {
        let e = self.e();
        let mut rest = self.n.clone();
        let mut p = 2u64;
        let mut exhausted = false;
        while p <= cutoff.max(2) {
            let pn = Natural::from(p);
            if pn.pow(2) > rest {
                exhausted = true;
                break;
            }
            if is_prime_u64(p) && pn.divides(&rest) {
                let d = base_decompose(&pn, &rest).expect("base ≥ 2, rest ≥ 1");
                if d.degree() % e != 0 {
                    return self.prime_verdict(&pn, d.degree());
                }
                rest = d.cofactor().clone();
            }
            p += 1;
        }
        // A cofactor with no factor up to its square root is prime.
        if exhausted && !rest.is_one() {
            return self.prime_verdict(&rest, 1);
        }
        Step::Pass(format!("no prime up to {cutoff} divides {} to an exponent outside the multiples of {e}", self.n))
    }

    fn prime_verdict(&self, p: &Natural, k: u64) -> Step {
        let law = if *p == 2u64 { PowerLaw::Parity } else { PowerLaw::Prime };
        let trace = traces::degree_refutation(self.n, self.e(), p, k, law, None);
        self.verdict(Strategy::PrimeBase, Outcome::Irrational, trace)
    }

    fn classical(&self) -> Step {
        if self.query == Query::Cube {
            return Step::Pass("the classical proofs concern square roots".into());
        }
        if self.n.exact_root(2).is_some() {
            return Step::Pass("the classical proof refutes non-squares only".into());
        }
        self.verdict(Strategy::ClassicalVii22, Outcome::Irrational, traces::viii14_refutation(self.n, "n", "m"))
    }

    fn oracle(&self) -> Step {
        let e = self.e();
        match self.n.exact_root(e as u32) {
            Some(root) => {
                let trace = traces::oracle_root(self.n, e, &root);
                self.verdict(Strategy::OracleFallback, Outcome::Rational { root }, trace)
            }
            None => self.verdict(Strategy::OracleFallback, Outcome::Irrational, traces::oracle_refutation(self.n, e)),
        }
    }
}

fn decide(n: &Natural, query: Query, policy: &Policy) -> Result<Verdict> {
    let d = decompose(n)?;
    let mut run = Run {
        n,
        query,
        h: d.degree(),
        kernel: d.odd_part().clone(),
        reduced: None,
    };
    let mut reasons = Vec::new();
    let mut last = None;
    for &strategy in &policy.order {
        last = Some(strategy);
        let step = match strategy {
            Strategy::ParityDegree => run.parity_degree(),
            Strategy::OddKernelReduction => run.odd_kernel_reduction(),
            Strategy::ResidueScan => run.residue(policy.residue_cutoff),
            Strategy::PrimeBase => run.prime_base(policy.residue_cutoff),
            Strategy::ClassicalVii22 => run.classical(),
            Strategy::OracleFallback => run.oracle(),
        };
        match step {
            Step::Decided(v) => return Ok(v),
            Step::Pass(why) => reasons.push(format!("{strategy}: {why}")),
        }
    }
    let strategy = last.ok_or_else(|| Error::Config("empty strategy list".into()))?;
    Ok(Verdict {
        query,
        radicand: n.clone(),
        outcome: Outcome::Inconclusive {
            reason: reasons.join("; "),
        },
        trace: None,
        strategy,
        reduced_kernel: run.reduced,
    })
}

/// Rationality of `√n`.
pub fn sqrt_verdict(n: &Natural, policy: &Policy) -> Result<Verdict> {
    decide(n, Query::Square, policy)
}

/// Rationality of `∛n`.
pub fn cbrt_verdict(n: &Natural, policy: &Policy) -> Result<Verdict> {
    decide(n, Query::Cube, policy)
}

/// `√n` is irrational when a prime `x` divides `n` to an odd power; any
/// other case is inconclusive, the criterion running one way only.
///
/// Composite bases are refused: see [`generalization_failure_demo`].
pub fn prime_base_verdict(x: &Natural, n: &Natural) -> Result<Verdict> {
    if *x <= 1u64 {
        return Err(Error::domain("base must be at least 2"));
    }
    if n.is_zero() {
        return Err(Error::domain("radicand must be positive"));
    }
    if x.to_u64().is_none() || !x.is_prime() {
        return Err(Error::StrategyRefused(format!(
            "{x} is not a prime below 2^64; the odd-exponent criterion fails for composite bases"
        )));
    }
    let k = base_decompose(x, n)?.degree();
    let run = Run {
        n,
        query: Query::Square,
        h: 0,
        kernel: Natural::one(),
        reduced: None,
    };
    if k % 2 == 1 {
        if let Step::Decided(v) = run.prime_verdict(x, k) {
            return Ok(v);
        }
    }
    Ok(Verdict {
        query: Query::Square,
        radicand: n.clone(),
        outcome: Outcome::Inconclusive {
            reason: format!("{x} divides {n} exactly {k} times, an even number"),
        },
        trace: None,
        strategy: Strategy::PrimeBase,
        reduced_kernel: None,
    })
}

/// A perfect square `n` whose exponent of `x` is odd.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Counterexample {
    pub n: Natural,
    /// Exponent of the base in `n`; odd.
    pub k: u64,
    pub root: Natural,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FailureReport {
    pub base: Natural,
    pub bound: Natural,
    /// The smallest counterexample up to `bound`, if any.
    pub counterexample: Option<Counterexample>,
}

/// Default search bound for [`generalization_failure_demo`].
pub const FAILURE_DEMO_BOUND: u64 = 1_000_000;

/// Searches perfect squares `n ≤ bound` for one whose exponent of the
/// composite base `x` is odd, showing the criterion cannot be carried over.
pub fn generalization_failure_demo(x: &Natural, bound: &Natural) -> Result<FailureReport> {
    if *x < 4u64 || x.is_prime() {
        return Err(Error::domain(format!("{x} is not a composite number")));
    }
    let mut r = Natural::one();
    let mut counterexample = None;
    loop {
        let n = r.pow(2);
        if n > *bound {
            break;
        }
        let k = base_decompose(x, &n)?.degree();
        if k % 2 == 1 {
            counterexample = Some(Counterexample { n, k, root: r });
            break;
        }
        r = r + Natural::one();
    }
    Ok(FailureReport {
        base: x.clone(),
        bound: bound.clone(),
        counterexample,
    })
}

/// Lowest terms of `p / q`, by Euclid's algorithm.
pub fn coprime_reduce(p: &Natural, q: &Natural) -> Result<(Natural, Natural)> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::domain("both terms must be positive"));
    }
    let g = p.gcd(q);
    let (a, _) = p.div_rem(&g).expect("gcd is positive");
    let (b, _) = q.div_rem(&g).expect("gcd is positive");
    Ok((a, b))
}

/// The three classical proofs that `√2` is irrational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalVariant {
    /// `p` even, hence `q` odd, hence `q` even.
    Standard,
    /// `p²`, `q²` coprime yet both even.
    Alexander,
    /// `q²` divides `p²`, so `q` divides `p`.
    Viii14,
}

pub fn classical_sqrt2_trace(variant: ClassicalVariant) -> ProofTrace {
    match variant {
        ClassicalVariant::Standard => traces::standard_sqrt2(),
        ClassicalVariant::Alexander => traces::alexander_sqrt2(),
        ClassicalVariant::Viii14 => traces::viii14_refutation(&Natural::from(2u64), "q", "p"),
    }
}

/// The degree-of-parity proof for `√2`, ending with every odd number even.
pub fn parity_sqrt2_trace() -> ProofTrace {
    traces::unit_even_refutation(&Natural::from(2u64))
}
