//! Rewriting with conditional, universally quantified equalities.

use super::basic::{boxed, derived, find, shape};
use super::{CertifyingTransform, Outcome, TransformError};
use crate::cert::SurfaceCert;
use crate::ident::{fresh_ident, Ident};
use crate::task::{Premise, Side, Task};
use crate::term::{alpha_equal, BinderKind, Connective, Term};
use crate::theories::as_equality;
use crate::types::Type;
use crate::typing::typecheck;

/// Rewrites premise `p` with hypothesis `heq : ∀x̄. c₁ ⇒ … ⇒ cₖ ⇒ l = r`,
/// replacing instances of `l` by `r` (or the reverse when `right_to_left`).
/// `inst` gives the terms for `x̄`; when absent they are found by matching
/// the rewritten side against subterms of `p`.
///
/// Produces one task per condition, with the original goals replaced by that
/// condition, followed by the rewritten task.
pub fn t_rewrite(
    heq: Ident,
    p: Ident,
    right_to_left: bool,
    inst: Option<Vec<Term>>,
) -> CertifyingTransform {
    let name = format!("rewrite {heq} {p}");
    CertifyingTransform::new(name, move |task| {
        let inst = match &inst {
            Some(v) => v.clone(),
            None => match_rewrite(task, &heq, &p, right_to_left)?,
        };
        rewrite(task, &heq, &p, right_to_left, &inst)
    })
}

fn hypothesis<'a>(task: &'a Task, heq: &Ident) -> Result<&'a Term, TransformError> {
    let f = task
        .get(Side::Hyp, heq)
        .ok_or_else(|| TransformError::MissingPremise(heq.clone()))?;
    if matches!(f, Term::TyAbs(..)) {
        return Err(TransformError::TypeQuantified(heq.clone()));
    }
    Ok(f)
}

fn binders(mut f: &Term) -> (Vec<&Type>, &Term) {
    let mut tys = Vec::new();
    while let Term::Binder(BinderKind::Forall, _, ty, body) = f {
        tys.push(ty);
        f = body;
    }
    (tys, f)
}

fn conditions(mut f: &Term) -> (Vec<&Term>, &Term) {
    let mut conds = Vec::new();
    while as_equality(f).is_none() {
        match f {
            Term::Binary(Connective::Imp, c, rest) => {
                conds.push(c.as_ref());
                f = rest;
            }
            _ => break,
        }
    }
    (conds, f)
}

fn rewrite(
    task: &Task,
    heq: &Ident,
    p: &Ident,
    rtl: bool,
    inst: &[Term],
) -> Result<Outcome, TransformError> {
    if p == heq {
        return Err(TransformError::Unsupported(format!("`{heq}` cannot rewrite itself")));
    }
    let formula = hypothesis(task, heq)?;
    let (side, target) = find(task, p)?;

    let (tys, _) = binders(formula);
    if tys.len() != inst.len() {
        return Err(TransformError::Unsupported(format!(
            "`{heq}` has {} quantified variables but {} terms were given",
            tys.len(),
            inst.len()
        )));
    }
    let mut f = formula.clone();
    for (u, ty) in inst.iter().zip(tys) {
        match typecheck(&task.types, &task.sig, u) {
            Ok(found) if &found == ty => {}
            Ok(found) => {
                return Err(TransformError::IllTyped(format!(
                    "instance has type {found:?}, expected {ty:?}"
                )))
            }
            Err(e) => return Err(TransformError::IllTyped(e.to_string())),
        }
        let Term::Binder(_, _, _, body) = &f else {
            unreachable!("binder count checked")
        };
        f = body.open(u);
    }
    let (conds, eq) = conditions(&f);
    let Some((_, lhs, rhs)) = as_equality(eq) else {
        return Err(shape(heq, "a (conditional) equality"));
    };
    let (from, to) = if rtl { (rhs, lhs) } else { (lhs, rhs) };
    let (abstracted, count) = target.abstract_subterm(from);
    if count == 0 {
        return Err(TransformError::Unsupported(format!(
            "`{p}` has no occurrence of the rewritten side of `{heq}`"
        )));
    }
    let rewritten = abstracted.open(to);

    let mut tasks: Vec<Task> = Vec::new();
    let main = task.replace(side, p, vec![Premise::new(p.clone(), rewritten)]);

    if inst.is_empty() && conds.is_empty() {
        tasks.push(main);
        let cert = SurfaceCert::Rewrite(rtl, heq.clone(), p.clone(), boxed(SurfaceCert::Hole));
        return Ok(Outcome::new(tasks, cert));
    }

    // Work on a copy of the equality so the original hypothesis survives.
    let mut avoid = task.all_idents();
    let mut temps = Vec::new();
    for _ in 0..inst.len().max(1) {
        let t = fresh_ident(&derived(heq, "_inst"), &avoid);
        avoid.insert(t.clone());
        temps.push(t);
    }
    let cur = temps.last().expect("at least one temporary").clone();

    let mut cert = SurfaceCert::Rewrite(
        rtl,
        cur.clone(),
        p.clone(),
        boxed(SurfaceCert::Clear(cur.clone(), boxed(SurfaceCert::Hole))),
    );
    for c in conds.iter().rev() {
        let mut side_cert = SurfaceCert::Hole;
        for g in task.goals.iter().rev() {
            side_cert = SurfaceCert::Clear(g.name.clone(), boxed(side_cert));
        }
        let side_cert = SurfaceCert::Swap(cur.clone(), boxed(side_cert));
        cert = SurfaceCert::Unfold(
            cur.clone(),
            boxed(SurfaceCert::Split(cur.clone(), boxed(side_cert), boxed(cert))),
        );
        let mut side_task = task.clone();
        side_task.goals = vec![Premise::new(cur.clone(), (*c).clone())];
        tasks.push(side_task);
    }
    tasks.reverse();
    tasks.push(main);

    if inst.is_empty() {
        cert = SurfaceCert::Assert(
            cur.clone(),
            formula.clone(),
            boxed(SurfaceCert::Axiom(heq.clone(), cur.clone())),
            boxed(cert),
        );
    } else {
        for (k, u) in inst.iter().enumerate().rev() {
            if k > 0 {
                cert = SurfaceCert::Clear(temps[k - 1].clone(), boxed(cert));
            }
            let prev = if k == 0 { heq.clone() } else { temps[k - 1].clone() };
            cert = SurfaceCert::InstQuant(prev, temps[k].clone(), u.clone(), boxed(cert));
        }
    }
    Ok(Outcome::new(tasks, cert))
}

/// Finds instances for the quantified variables of `heq` by first-order
/// matching of the rewritten side against the subterms of `p`, leftmost
/// outermost first.
pub fn match_rewrite(
    task: &Task,
    heq: &Ident,
    p: &Ident,
    right_to_left: bool,
) -> Result<Vec<Term>, TransformError> {
    let formula = hypothesis(task, heq)?;
    let (_, target) = find(task, p)?;
    let (tys, body) = binders(formula);
    let n = tys.len() as u32;
    let (_, eq) = conditions(body);
    let Some((_, lhs, rhs)) = as_equality(eq) else {
        return Err(shape(heq, "a (conditional) equality"));
    };
    if n == 0 {
        return Ok(vec![]);
    }
    let pattern = if right_to_left { rhs } else { lhs };
    if has_binder(pattern) {
        return Err(TransformError::Unsupported(
            "rewriting patterns may not contain binders".into(),
        ));
    }
    let mut candidates = Vec::new();
    closed_subterms(target, 0, &mut candidates);
    for s in candidates {
        let mut assign: Vec<Option<Term>> = vec![None; n as usize];
        if !matches(pattern, s, n, &mut assign) {
            continue;
        }
        let Some(found) = assign.into_iter().collect::<Option<Vec<Term>>>() else {
            return Err(TransformError::Unsupported(format!(
                "some variables of `{heq}` do not occur in the rewritten side; give them explicitly"
            )));
        };
        let typed = found
            .iter()
            .zip(&tys)
            .all(|(u, ty)| matches!(typecheck(&task.types, &task.sig, u), Ok(t) if &t == *ty));
        if typed {
            return Ok(found);
        }
    }
    Err(TransformError::Unsupported(format!(
        "no subterm of `{p}` matches the rewritten side of `{heq}`"
    )))
}

fn has_binder(t: &Term) -> bool {
    match t {
        Term::Binder(..) | Term::TyAbs(..) => true,
        Term::Not(a) => has_binder(a),
        Term::Binary(_, a, b) | Term::App(a, b) => has_binder(a) || has_binder(b),
        _ => false,
    }
}

/// Pre-order list of the subterms that do not refer to enclosing binders.
fn closed_subterms<'a>(t: &'a Term, depth: u32, out: &mut Vec<&'a Term>) {
    if depth == 0 || t.is_locally_closed() {
        out.push(t);
    }
    match t {
        Term::Not(a) => closed_subterms(a, depth, out),
        Term::Binary(_, a, b) | Term::App(a, b) => {
            closed_subterms(a, depth, out);
            closed_subterms(b, depth, out);
        }
        Term::Binder(_, _, _, body) => closed_subterms(body, depth + 1, out),
        Term::TyAbs(_, body) => closed_subterms(body, depth, out),
        _ => {}
    }
}

/// Index `i < n` in the pattern stands for quantified variable `n - 1 - i`.
fn matches(pat: &Term, s: &Term, n: u32, assign: &mut [Option<Term>]) -> bool {
    match (pat, s) {
        (Term::Bound(i), _) if *i < n => {
            let slot = &mut assign[(n - 1 - i) as usize];
            match slot {
                Some(prev) => alpha_equal(prev, s),
                None => {
                    *slot = Some(s.clone());
                    true
                }
            }
        }
        (Term::Not(a), Term::Not(b)) => matches(a, b, n, assign),
        (Term::Binary(o1, a1, b1), Term::Binary(o2, a2, b2)) => {
            o1 == o2 && matches(a1, a2, n, assign) && matches(b1, b2, n, assign)
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            matches(f1, f2, n, assign) && matches(a1, a2, n, assign)
        }
        (Term::Free(..) | Term::Interp(..) | Term::Int(_) | Term::True | Term::False, _) => {
            alpha_equal(pat, s)
        }
        _ => false,
    }
}
