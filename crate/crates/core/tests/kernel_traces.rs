use parity_forge_core::engine::{classical_sqrt2_trace, parity_sqrt2_trace, sqrt_verdict, ClassicalVariant, Policy};
use parity_forge_core::kernel::{
    check_trace, render_text, CheckResult, ContradictionShape, DegreeClass, ProofTrace, RuleTag, Statement,
};
use parity_forge_core::{Error, Natural};

fn sqrt2() -> ProofTrace {
    sqrt_verdict(&Natural::from(2u64), &Policy::default()).unwrap().trace.unwrap()
}

#[test]
fn engine_trace_for_two_is_accepted() {
    assert_eq!(check_trace(&sqrt2()), CheckResult::Accepted);
}

#[test]
fn altered_square_law_is_rejected_at_that_step() {
    let mut t = sqrt2();
    let step = t.steps.iter_mut().find(|s| s.rule == RuleTag::ValSquareEven).unwrap();
    let Statement::DegreeIs { class, .. } = &mut step.conclusion else { panic!("unexpected shape") };
    *class = DegreeClass::Odd;
    let id = step.id;
    match check_trace(&t) {
        CheckResult::Rejected { step, .. } => assert_eq!(step, Some(id)),
        CheckResult::Accepted => panic!("altered trace accepted"),
    }
}

#[test]
fn classical_variants_reach_their_shapes() {
    for v in [ClassicalVariant::Standard, ClassicalVariant::Alexander, ClassicalVariant::Viii14] {
        let t = classical_sqrt2_trace(v);
        assert!(check_trace(&t).is_accepted(), "{v:?}: {}", check_trace(&t));
        assert!(t.contradiction_shape().unwrap().is_double_attribute(), "{v:?}");
    }
    let p = parity_sqrt2_trace();
    assert!(check_trace(&p).is_accepted());
    assert_eq!(p.contradiction_shape(), Some(ContradictionShape::OddsBecomeEven));
    let rules: Vec<RuleTag> = p.steps.iter().map(|s| s.rule).collect();
    let unit = rules.iter().position(|&r| r == RuleTag::UnitEven).unwrap();
    let all = rules.iter().position(|&r| r == RuleTag::AllOddsEven).unwrap();
    assert!(unit < all);
}

#[test]
fn text_rendering_ends_with_the_odds_becoming_even() {
    let text = render_text(&parity_sqrt2_trace()).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.contains("les impairs") && last.contains("pairs"), "{last}");
    for s in parity_sqrt2_trace().steps {
        assert!(text.contains(s.rule.anchor()));
    }
}

#[test]
fn empty_and_rejected_traces_are_not_rendered() {
    let empty = ProofTrace::new(Statement::False);
    assert!(!check_trace(&empty).is_accepted());
    assert!(matches!(render_text(&empty), Err(Error::RenderRefused(_))));
    let mut t = sqrt2();
    t.steps.pop();
    assert!(matches!(render_text(&t), Err(Error::RenderRefused(_))));
}

#[test]
fn checking_is_deterministic() {
    let traces = [sqrt2(), parity_sqrt2_trace(), classical_sqrt2_trace(ClassicalVariant::Alexander)];
    for t in &traces {
        let first = check_trace(t);
        for _ in 0..10 {
            assert_eq!(check_trace(&t.clone()), first);
        }
        assert_eq!(render_text(t).unwrap(), render_text(t).unwrap());
    }
}

#[test]
fn dangling_and_forward_premises_are_rejected() {
    let mut t = sqrt2();
    t.steps[2].premises.push(99);
    assert!(!check_trace(&t).is_accepted());
    let mut t = sqrt2();
    let n = t.steps.len();
    t.steps[1].premises = vec![n];
    assert!(!check_trace(&t).is_accepted());
}
