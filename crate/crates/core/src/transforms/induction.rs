//! Strong induction over an integer variable.

use super::basic::{boxed, derived};
use super::{CertifyingTransform, Outcome, TransformError};
use crate::cert::SurfaceCert;
use crate::ident::{fresh_ident, Ident};
use crate::task::{Premise, Side, Task};
use crate::term::{BinderKind, Term};
use crate::theories::{compare, Interp};
use crate::types::Type;
use crate::typing::typecheck;

/// Strong induction on the integer symbol `i` above the bound `a`, for a task
/// with the single goal `g`. Hypotheses mentioning `i` are reverted into the
/// goal before the induction and reintroduced under their names in both
/// resulting tasks, so the induction hypothesis carries them.
///
/// Produces the base task (`i ≤ a`) and the step task (`i > a`, with the
/// induction hypothesis for every smaller integer).
pub fn t_induction(g: Ident, i: Ident, a: Term) -> CertifyingTransform {
    CertifyingTransform::new(format!("induction {i}"), move |task| induction(task, &g, &i, &a))
}

fn induction(task: &Task, g: &Ident, i: &Ident, a: &Term) -> Result<Outcome, TransformError> {
    let t = task
        .get(Side::Goal, g)
        .ok_or_else(|| TransformError::MissingPremise(g.clone()))?;
    if task.goals.len() != 1 {
        return Err(TransformError::Unsupported(
            "induction needs a task with exactly one goal".into(),
        ));
    }
    if task.sig.get(i) != Some(&Type::Int) {
        return Err(TransformError::Unsupported(format!("`{i}` is not an int symbol")));
    }
    match typecheck(&task.types, &task.sig, a) {
        Ok(Type::Int) => {}
        Ok(other) => {
            return Err(TransformError::IllTyped(format!("bound has type {other:?}, expected int")))
        }
        Err(e) => return Err(TransformError::IllTyped(e.to_string())),
    }
    if a.mentions(i) {
        return Err(TransformError::Unsupported(format!("the bound mentions `{i}`")));
    }
    let reverted: Vec<&Premise> = task.hyps.iter().filter(|p| p.formula.mentions(i)).collect();
    for p in reverted.iter().map(|p| &p.formula).chain([t]) {
        if matches!(p, Term::TyAbs(..)) {
            return Err(TransformError::Unsupported(
                "cannot revert a type-quantified formula".into(),
            ));
        }
    }

    let mut avoid = task.all_idents();
    let mut fresh = |base: &str| {
        let x = fresh_ident(&Ident::new(base), &avoid);
        avoid.insert(x.clone());
        x
    };
    let hi = fresh("Hi");
    let hrec = fresh("Hrec");
    // Goal names while hypotheses are being reverted, innermost first.
    let mut goal_names = vec![g.clone()];
    for _ in &reverted {
        goal_names.push(fresh(derived(g, "_ind").name()));
    }
    let top = goal_names.last().expect("nonempty").clone();

    // `h₁ ⇒ … ⇒ hₘ ⇒ t`
    let mut formulas = vec![t.clone()];
    for h in reverted.iter().rev() {
        let prev = formulas.last().expect("nonempty").clone();
        formulas.push(Term::imp(h.formula.clone(), prev));
    }
    let full = formulas.last().expect("nonempty").clone();

    // Reintroduce hypotheses and restore the goal name in each branch.
    let mut reintro = SurfaceCert::Hole;
    if top != *g {
        reintro = SurfaceCert::Assert(
            g.clone(),
            t.clone(),
            boxed(SurfaceCert::Clear(top.clone(), boxed(reintro))),
            boxed(SurfaceCert::Axiom(g.clone(), top.clone())),
        );
    }
    for h in reverted.iter().rev() {
        reintro = SurfaceCert::Unfold(
            top.clone(),
            boxed(SurfaceCert::Destruct(
                top.clone(),
                h.name.clone(),
                top.clone(),
                boxed(SurfaceCert::Swap(h.name.clone(), boxed(reintro))),
            )),
        );
    }

    let mut cert = SurfaceCert::Induction(
        top.clone(),
        i.clone(),
        a.clone(),
        hi.clone(),
        hrec.clone(),
        boxed(reintro.clone()),
        boxed(reintro),
    );
    // Revert h₁ last so that it ends up outermost.
    for (k, h) in reverted.iter().enumerate() {
        let cur = &goal_names[reverted.len() - k - 1];
        let next = &goal_names[reverted.len() - k];
        let prove = SurfaceCert::Unfold(
            next.clone(),
            boxed(SurfaceCert::Split(
                next.clone(),
                boxed(SurfaceCert::Swap(
                    next.clone(),
                    boxed(SurfaceCert::Axiom(h.name.clone(), next.clone())),
                )),
                boxed(SurfaceCert::Axiom(next.clone(), cur.clone())),
            )),
        );
        cert = SurfaceCert::Assert(
            next.clone(),
            formulas[reverted.len() - k].clone(),
            boxed(SurfaceCert::Clear(
                h.name.clone(),
                boxed(SurfaceCert::Clear(cur.clone(), boxed(cert))),
            )),
            boxed(prove),
        );
    }

    // Resulting tasks, computed directly.
    let iv = Term::free(i);
    let mut base = task.clone();
    base.hyps.retain(|p| !p.formula.mentions(i));
    let mut step = base.clone();
    base.hyps
        .push(Premise::new(hi.clone(), compare(Interp::Le, iv.clone(), a.clone())));
    step.hyps
        .push(Premise::new(hi.clone(), compare(Interp::Gt, iv.clone(), a.clone())));
    let below = Term::Binder(
        BinderKind::Forall,
        Ident::new("n"),
        Type::Int,
        std::sync::Arc::new(Term::imp(
            compare(Interp::Lt, Term::Bound(0), iv),
            full.close(i),
        )),
    );
    step.hyps.push(Premise::new(hrec, below));
    for h in &reverted {
        base.hyps.push((*h).clone());
        step.hyps.push((*h).clone());
    }
    Ok(Outcome::new(vec![base, step], cert))
}
