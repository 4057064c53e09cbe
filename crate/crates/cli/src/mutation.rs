//! Single-field mutations of valid traces. A sound kernel rejects every one.

use parity_forge_core::engine::{
    cbrt_verdict, classical_sqrt2_trace, parity_sqrt2_trace, prime_base_verdict, sqrt_verdict, ClassicalVariant,
    Policy, Strategy,
};
use parity_forge_core::kernel::{check_trace, DegreeClass, ProofTrace, RuleTag, Statement, Term};
use parity_forge_core::Natural;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Default number of mutations per run.
pub const DEFAULT_MUTATIONS: usize = 1000;

/// Accepted traces drawn from every strategy and every classical proof.
pub fn corpus() -> Vec<ProofTrace> {
    let mut out = vec![
        parity_sqrt2_trace(),
        classical_sqrt2_trace(ClassicalVariant::Standard),
        classical_sqrt2_trace(ClassicalVariant::Alexander),
        classical_sqrt2_trace(ClassicalVariant::Viii14),
    ];
    let nat = |v: u64| Natural::from(v);
    let default = Policy::default();
    for n in [2, 3, 5, 6, 8, 9, 12, 15, 18, 32, 36, 45, 60, 99, 1024] {
        out.extend(sqrt_verdict(&nat(n), &default).ok().and_then(|v| v.trace));
    }
    for n in [2, 4, 8, 16, 24, 216] {
        out.extend(cbrt_verdict(&nat(n), &default).ok().and_then(|v| v.trace));
    }
    for (strategy, n) in [(Strategy::ClassicalVii22, 7), (Strategy::PrimeBase, 75), (Strategy::ResidueScan, 21)] {
        out.extend(sqrt_verdict(&nat(n), &Policy::only(&[strategy])).ok().and_then(|v| v.trace));
    }
    out.extend(prime_base_verdict(&nat(3), &nat(12)).ok().and_then(|v| v.trace));
    out.dedup();
    out.retain(|t| check_trace(t).is_accepted());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Rule,
    Premises,
    Conclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mutation {
    pub trace: usize,
    pub step: usize,
    pub field: Field,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationReport {
    pub seed: u64,
    pub corpus: usize,
    pub trials: usize,
    pub rejected: usize,
    /// Mutations the kernel accepted.
    pub survivors: Vec<Mutation>,
}

impl MutationReport {
    pub fn all_rejected(&self) -> bool {
        self.survivors.is_empty() && self.rejected == self.trials
    }
}

/// Applies `count` random mutations across `corpus` and checks each.
pub fn run_mutations(corpus: &[ProofTrace], count: usize, seed: u64) -> MutationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut survivors = Vec::new();
    let mut trials = 0;
    while trials < count {
        let index = rng.gen_range(0..corpus.len());
        let Some((mutation, mutated)) = mutate(&corpus[index], index, &mut rng) else {
            continue;
        };
        debug_assert_ne!(mutated, corpus[index]);
        trials += 1;
        if check_trace(&mutated).is_accepted() {
            survivors.push(mutation);
        }
    }
    MutationReport {
        seed,
        corpus: corpus.len(),
        trials,
        rejected: trials - survivors.len(),
        survivors,
    }
}

/// One random single-field change, never the identity.
pub fn mutate(t: &ProofTrace, index: usize, rng: &mut impl Rng) -> Option<(Mutation, ProofTrace)> {
    if t.steps.is_empty() {
        return None;
    }
    let mut out = t.clone();
    let at = rng.gen_range(0..out.steps.len());
    let len = out.steps.len();
    let step = &mut out.steps[at];
    let field = *[Field::Rule, Field::Premises, Field::Conclusion].choose(rng)?;
    let description = match field {
        Field::Rule => {
            let old = step.rule;
            let others: Vec<RuleTag> = RuleTag::ALL.iter().copied().filter(|&r| r != old).collect();
            step.rule = *others.choose(rng)?;
            format!("rule {old} -> {}", step.rule)
        }
        Field::Premises => {
            let old = step.premises.clone();
            let ids = 1..=len + 1;
            match rng.gen_range(0..3) {
                0 if !old.is_empty() => {
                    let i = rng.gen_range(0..old.len());
                    let fresh: Vec<usize> = ids.filter(|&id| id != old[i]).collect();
                    step.premises[i] = *fresh.choose(rng)?;
                }
                1 if !old.is_empty() => {
                    step.premises.remove(rng.gen_range(0..old.len()));
                }
                _ => {
                    let id = rng.gen_range(ids);
                    let pos = rng.gen_range(0..=old.len());
                    step.premises.insert(pos, id);
                }
            }
            format!("premises {old:?} -> {:?}", step.premises)
        }
        Field::Conclusion => {
            let vars = variables(t);
            let options = statement_variants(&step.conclusion, &vars);
            let old = core::mem::replace(&mut step.conclusion, options.choose(rng)?.clone());
            format!("conclusion {old} -> {}", step.conclusion)
        }
    };
    let mutation = Mutation {
        trace: index,
        step: at + 1,
        field,
        description,
    };
    (out != *t).then_some((mutation, out))
}

fn variables(t: &ProofTrace) -> Vec<String> {
    let mut vars: Vec<String> = t
        .steps
        .iter()
        .flat_map(|s| s.conclusion.free_vars())
        .chain(t.goal.free_vars())
        .map(String::from)
        .collect();
    vars.push("w".into());
    vars.sort();
    vars.dedup();
    vars
}

/// Every statement one edit away from `s`.
pub fn statement_variants(s: &Statement, vars: &[String]) -> Vec<Statement> {
    let mut out = Vec::new();
    let each = |t: &Term, out: &mut Vec<Statement>, wrap: &dyn Fn(Term) -> Statement| {
        out.extend(term_variants(t, vars).into_iter().map(wrap));
    };
    match s {
        Statement::Equal { lhs, rhs } => {
            each(lhs, &mut out, &|l| Statement::equal(l, rhs.clone()));
            each(rhs, &mut out, &|r| Statement::equal(lhs.clone(), r));
        }
        Statement::Odd { term } => {
            out.push(Statement::even(term.clone()));
            each(term, &mut out, &Statement::odd);
        }
        Statement::Even { term } => {
            out.push(Statement::odd(term.clone()));
            each(term, &mut out, &Statement::even);
        }
        Statement::DegreeIs { term, class, base } => {
            let mut classes = vec![DegreeClass::Even, DegreeClass::Odd, DegreeClass::MultipleOf3];
            classes.extend((0..4).map(DegreeClass::Value));
            if let DegreeClass::Value(v) = class {
                classes.push(DegreeClass::Value(v + 1));
            }
            for c in classes.into_iter().filter(|c| c != class) {
                out.push(Statement::degree_in_base(term.clone(), c, base.clone()));
            }
            out.push(Statement::degree_in_base(term.clone(), *class, base.clone() + Natural::one()));
            if *base != 2u64 {
                out.push(Statement::degree_is(term.clone(), *class));
            }
            each(term, &mut out, &|t| Statement::degree_in_base(t, *class, base.clone()));
        }
        Statement::Coprime { lhs, rhs } => {
            each(lhs, &mut out, &|l| Statement::coprime(l, rhs.clone()));
            each(rhs, &mut out, &|r| Statement::coprime(lhs.clone(), r));
        }
        Statement::Divides { divisor, dividend } => {
            out.push(Statement::divides(dividend.clone(), divisor.clone()));
            each(divisor, &mut out, &|d| Statement::divides(d, dividend.clone()));
            each(dividend, &mut out, &|d| Statement::divides(divisor.clone(), d));
        }
        Statement::False => out.push(Statement::even(Term::nat(1u64))),
    }
    if *s != Statement::False {
        out.push(Statement::False);
    }
    out.retain(|v| v != s);
    out
}

/// Every term one edit away from `t`.
pub fn term_variants(t: &Term, vars: &[String]) -> Vec<Term> {
    let mut out = vec![t.clone().succ()];
    match t {
        Term::Var { name } => {
            out.extend(vars.iter().filter(|v| *v != name).map(|v| Term::var(v)));
            out.push(Term::nat(1u64));
        }
        Term::Nat { value } => {
            out.push(Term::nat(value.clone() + Natural::one()));
            out.push(Term::nat(value.double()));
            if let Some(smaller) = value.checked_sub(&Natural::one()).filter(|v| !v.is_zero()) {
                out.push(Term::nat(smaller));
            }
            out.push(Term::var("w"));
        }
        Term::Mul { lhs, rhs } => {
            out.push((**lhs).clone());
            out.push((**rhs).clone());
            out.extend(term_variants(lhs, vars).into_iter().map(|l| l.mul((**rhs).clone())));
            out.extend(term_variants(rhs, vars).into_iter().map(|r| (**lhs).clone().mul(r)));
        }
        Term::Pow { base, exp } => {
            out.push((**base).clone());
            out.push((**base).clone().pow(exp + 1));
            if *exp > 2 {
                out.push((**base).clone().pow(exp - 1));
            }
            out.extend(term_variants(base, vars).into_iter().map(|b| b.pow(*exp)));
        }
        Term::Deg { arg } => {
            out.push((**arg).clone());
            out.extend(term_variants(arg, vars).into_iter().map(Term::deg));
        }
        Term::Succ { arg } => {
            out.push((**arg).clone());
            out.extend(term_variants(arg, vars).into_iter().map(Term::succ));
        }
    }
    out.retain(|v| v != t);
    out
}
