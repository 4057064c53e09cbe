use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::check::check_trace;
use super::term::Statement;
use super::trace::{CheckResult, ContradictionShape, ProofTrace};
use crate::{Error, Result};

/// Human-readable rendering of an accepted trace, one line per step with
/// the rule's source, closed by a line naming the contradiction reached.
pub fn render_text(t: &ProofTrace) -> Result<String> {
    if let CheckResult::Rejected { step, reason } = check_trace(t) {
        let at = step.map(|s| format!(" at step {s}")).unwrap_or_default();
        return Err(Error::RenderRefused(format!("trace rejected{at}: {reason}")));
    }
    let mut out = String::new();
    let reductio = t.is_reductio();
    if reductio {
        let _ = writeln!(out, "claim: there are no positive integers with {}", t.goal);
    } else {
        let _ = writeln!(out, "claim: {}", t.goal);
    }
    let statements: Vec<String> = t.steps.iter().map(|s| s.conclusion.to_string()).collect();
    let width = statements.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let id_width = t.steps.len().to_string().len();
    for (step, text) in t.steps.iter().zip(&statements) {
        let from = if step.premises.is_empty() {
            String::new()
        } else {
            let ids: Vec<String> = step.premises.iter().map(|p| p.to_string()).collect();
            format!(" from {}", ids.join(", "))
        };
        let pad = width - text.chars().count();
        let _ = writeln!(
            out,
            "{:>iw$}. {text}{:pad$}   {}{from}: {}",
            step.id,
            "",
            step.rule,
            step.rule.anchor(),
            iw = id_width,
        );
    }
    let closing = match t.contradiction_shape() {
        Some(ContradictionShape::OddsBecomeEven) => {
            "contradiction: « les impairs deviennent égaux aux pairs » (Aristotle, An. pr. I, 23)".to_string()
        }
        Some(ContradictionShape::EvenAndOdd) => {
            let subject = t
                .last()
                .and_then(|l| l.premises.first())
                .and_then(|&p| t.step(p))
                .and_then(|s| match &s.conclusion {
                    Statement::Even { term } => Some(term.to_string()),
                    _ => None,
                })
                .unwrap_or_default();
            format!("contradiction: {subject} is at once even and odd")
        }
        Some(ContradictionShape::DegreeParityClash) => "contradiction: one number with two incompatible degrees".into(),
        Some(ContradictionShape::CoprimeAndNot) => "contradiction: coprime numbers with a common divisor".into(),
        Some(ContradictionShape::OracleRefutation) => "contradiction: the radicand is not a perfect power (by computation)".into(),
        Some(ContradictionShape::Other) => "contradiction reached".into(),
        None => format!("therefore {}", t.goal),
    };
    out.push_str(&closing);
    out.push('\n');
    Ok(out)
}
