use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::term::Statement;
use crate::Error;

macro_rules! rules {
    ($($variant:ident => $name:literal, $anchor:literal;)*) => {
        /// The closed set of inference rules.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleTag {
            $($variant,)*
        }

        impl RuleTag {
            pub const ALL: &'static [RuleTag] = &[$(RuleTag::$variant,)*];

            /// Wire name, e.g. `VAL_SQUARE_EVEN`.
            pub fn as_str(self) -> &'static str {
                match self {
                    $(RuleTag::$variant => $name,)*
                }
            }

            /// Where the rule comes from, for the text rendering.
            pub fn anchor(self) -> &'static str {
                match self {
                    $(RuleTag::$variant => $anchor,)*
                }
            }
        }

        impl FromStr for RuleTag {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self, Error> {
                match s {
                    $($name => Ok(RuleTag::$variant),)*
                    _ => Err(Error::domain(alloc::format!("unknown rule tag {s:?}"))),
                }
            }
        }
    };
}

rules! {
    HypothesisRational => "HYPOTHESIS_RATIONAL", "reductio hypothesis: the root is a ratio m/n";
    SquareCrossMultiply => "SQUARE_CROSS_MULTIPLY", "raise z = m/n to the power and clear the denominator";
    ValAdditivity => "VAL_ADDITIVITY", "the degree of a product is the sum of the degrees";
    ValSquareEven => "VAL_SQUARE_EVEN", "the degree of a square is even";
    ValCubeTriple => "VAL_CUBE_TRIPLE", "the degree of a cube is a multiple of 3";
    EqualDegrees => "EQUAL_DEGREES", "equal numbers have equal degrees";
    ParityMismatch => "PARITY_MISMATCH", "no number is both even and odd";
    UnitEven => "UNIT_EVEN", "the unit, difference of two evens, is even";
    AllOddsEven => "ALL_ODDS_EVEN", "Aristotle, An. pr. I 23: the odds become equal to the evens";
    Vii22Reduce => "VII22_REDUCE", "Euclid VII.22: the least numbers in a ratio are prime to one another";
    EvenSquareEvenRoot => "EVEN_SQUARE_EVEN_ROOT", "the square of an odd is odd";
    Vii27Squares => "VII27_SQUARES", "Euclid VII.27: squares of coprime numbers are coprime";
    Viii14Divides => "VIII14_DIVIDES", "Euclid VIII.14: if a square measures a square, the side measures the side";
    Oracle => "ORACLE", "direct computation, outside the classical argument";
    OddDefinition => "ODD_DEFINITION", "Euclid VII def. 7: the odd differs from an even by a unit";
    ParityDecompose => "PARITY_DECOMPOSE", "halve until odd: n = b^k·u";
    KernelReduce => "KERNEL_REDUCE", "√(a²·t) = a·√t";
    OddQuotient => "ODD_QUOTIENT", "a rational root of an odd number is a ratio of odd numbers";
    ResidueScan => "RESIDUE_SCAN", "n² and (n mod s)² are divisible by s together";
    Vii30Prime => "VII30_PRIME", "Euclid VII.30: a prime measuring a product measures a factor";
    EvenByDoubling => "EVEN_BY_DOUBLING", "a double is even";
    HalfOfEvenSquare => "HALF_OF_EVEN_SQUARE", "half of an even square is even";
    CoprimeParity => "COPRIME_PARITY", "numbers prime to one another are not both even";
    EvenHalve => "EVEN_HALVE", "an even number is the double of a number";
    Substitute => "SUBSTITUTE", "substitution of equals";
    Arith => "ARITH", "elementary algebra";
    MultipleDivides => "MULTIPLE_DIVIDES", "a factor measures the product";
    CoprimeClash => "COPRIME_CLASH", "a number measuring its coprime partner is the unit";
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl Serialize for RuleTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl<'de> Deserialize<'de> for RuleTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One rule application. Ids are 1-based positions in the trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ProofStep {
    pub id: usize,
    pub rule: RuleTag,
    pub premises: Vec<usize>,
    pub conclusion: Statement,
}

/// A certificate. Reductio traces refute `goal` and end in an absurdity;
/// direct traces end by concluding `goal` itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ProofTrace {
    pub goal: Statement,
    pub steps: Vec<ProofStep>,
}

impl ProofTrace {
    pub fn new(goal: Statement) -> Self {
        ProofTrace { goal, steps: Vec::new() }
    }

    /// Appends a step and returns its id.
    pub fn push(&mut self, rule: RuleTag, premises: &[usize], conclusion: Statement) -> usize {
        let id = self.steps.len() + 1;
        self.steps.push(ProofStep {
            id,
            rule,
            premises: premises.to_vec(),
            conclusion,
        });
        id
    }

    pub fn step(&self, id: usize) -> Option<&ProofStep> {
        id.checked_sub(1).and_then(|i| self.steps.get(i))
    }

    pub fn last(&self) -> Option<&ProofStep> {
        self.steps.last()
    }

    pub fn is_reductio(&self) -> bool {
        self.last().is_some_and(|s| s.conclusion.is_absurd())
    }

    pub fn uses_oracle(&self) -> bool {
        self.steps.iter().any(|s| s.rule == RuleTag::Oracle)
    }

    /// How the absurdity was reached; `None` for direct traces.
    pub fn contradiction_shape(&self) -> Option<ContradictionShape> {
        let last = self.last()?;
        if !last.conclusion.is_absurd() {
            return None;
        }
        let premise = |k: usize| last.premises.get(k).and_then(|&id| self.step(id));
        Some(match last.rule {
            RuleTag::AllOddsEven => ContradictionShape::OddsBecomeEven,
            RuleTag::CoprimeClash => ContradictionShape::CoprimeAndNot,
            RuleTag::Oracle => ContradictionShape::OracleRefutation,
            RuleTag::ParityMismatch => match premise(0).map(|s| &s.conclusion) {
                Some(Statement::Even { .. }) => ContradictionShape::EvenAndOdd,
                _ => ContradictionShape::DegreeParityClash,
            },
            _ => ContradictionShape::Other,
        })
    }
}

/// The form of the final absurdity of a reductio trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ContradictionShape {
    /// `Even(1)` then every odd number is even.
    OddsBecomeEven,
    /// One number shown both even and odd.
    EvenAndOdd,
    /// One number given two incompatible degree classes.
    DegreeParityClash,
    /// Coprime numbers shown to share a divisor.
    CoprimeAndNot,
    /// Refuted by computation.
    OracleRefutation,
    Other,
}

impl ContradictionShape {
    /// A single subject credited with two incompatible attributes.
    pub fn is_double_attribute(self) -> bool {
        matches!(
            self,
            ContradictionShape::EvenAndOdd | ContradictionShape::DegreeParityClash | ContradictionShape::CoprimeAndNot
        )
    }
}

/// Outcome of [`check_trace`](super::check_trace).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Accepted,
    /// `step` is the offending step id, or `None` for whole-trace faults.
    Rejected { step: Option<usize>, reason: String },
}

impl CheckResult {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CheckResult::Accepted)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckResult::Accepted => f.write_str("Accepted"),
            CheckResult::Rejected { step: Some(id), reason } => write!(f, "Rejected at step {id}: {reason}"),
            CheckResult::Rejected { step: None, reason } => write!(f, "Rejected: {reason}"),
        }
    }
}
