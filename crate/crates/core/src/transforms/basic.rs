//! One-step transformations, each mirroring a single surface rule.

use super::{CertifyingTransform, Outcome, TransformError};
use crate::cert::SurfaceCert;
use crate::ident::{fresh_ident, Ident};
use crate::task::{Premise, Side, Task};
use crate::term::{subst_type, BinderKind, Connective, Term};
use crate::theories::is_reserved;
use crate::types::Type;
use crate::typing::{check_type, typecheck};

pub(super) fn find<'a>(task: &'a Task, name: &Ident) -> Result<(Side, &'a Term), TransformError> {
    task.lookup(name)
        .ok_or_else(|| TransformError::MissingPremise(name.clone()))
}

pub(super) fn shape(name: &Ident, expected: &'static str) -> TransformError {
    TransformError::Shape {
        name: name.clone(),
        expected,
    }
}

/// `P.1`, `P_inst` and the like, before freshening.
pub(super) fn derived(name: &Ident, suffix: &str) -> Ident {
    Ident::new(&format!("{}{}", name.name(), suffix))
}

pub(super) fn boxed(c: SurfaceCert) -> Box<SurfaceCert> {
    Box::new(c)
}

fn hole() -> Box<SurfaceCert> {
    Box::new(SurfaceCert::Hole)
}

fn one(task: Task, cert: SurfaceCert) -> Result<Outcome, TransformError> {
    Ok(Outcome::new(vec![task], cert))
}

fn ensure_unused(task: &Task, name: &Ident) -> Result<(), TransformError> {
    if task.has_premise(name) {
        Err(TransformError::NameInUse(name.clone()))
    } else {
        Ok(())
    }
}

/// Closes a task with a `false` hypothesis or a `true` goal.
pub fn t_trivial(p: Ident) -> CertifyingTransform {
    CertifyingTransform::new(format!("trivial {p}"), move |task| {
        match find(task, &p)? {
            (Side::Hyp, Term::False) | (Side::Goal, Term::True) => {
                Ok(Outcome::new(vec![], SurfaceCert::Trivial(p.clone())))
            }
            _ => Err(shape(&p, "a false hypothesis or a true goal")),
        }
    })
}

/// Closes a task where hypothesis `h` and goal `g` are the same formula.
pub fn t_axiom(h: Ident, g: Ident) -> CertifyingTransform {
    CertifyingTransform::new(format!("axiom {h} {g}"), move |task| {
        let a = task.get(Side::Hyp, &h).ok_or_else(|| TransformError::MissingPremise(h.clone()))?;
        let b = task.get(Side::Goal, &g).ok_or_else(|| TransformError::MissingPremise(g.clone()))?;
        if a != b {
            return Err(shape(&g, "the same formula as the hypothesis"));
        }
        Ok(Outcome::new(vec![], SurfaceCert::Axiom(h.clone(), g.clone())))
    })
}

pub fn t_clear(p: Ident) -> CertifyingTransform {
    CertifyingTransform::new(format!("clear {p}"), move |task| {
        let (side, _) = find(task, &p)?;
        one(task.remove(side, &p), SurfaceCert::Clear(p.clone(), hole()))
    })
}

/// Moves `P : ¬t` to the other side as `P : t`.
pub fn t_swap(p: Ident) -> CertifyingTransform {
    CertifyingTransform::new(format!("swap {p}"), move |task| {
        let (side, f) = find(task, &p)?;
        let Term::Not(t) = f else {
            return Err(shape(&p, "a negation"));
        };
        one(
            task.swap(side, &p, t.as_ref().clone()),
            SurfaceCert::Swap(p.clone(), hole()),
        )
    })
}

/// Rewrites an implication or equivalence into disjunctions and conjunctions.
pub fn t_unfold(p: Ident) -> CertifyingTransform {
    CertifyingTransform::new(format!("unfold {p}"), move |task| {
        let (side, f) = find(task, &p)?;
        let unfolded = match f {
            Term::Binary(Connective::Imp, a, b) => {
                Term::or(Term::not(a.as_ref().clone()), b.as_ref().clone())
            }
            Term::Binary(Connective::Iff, a, b) => Term::and(
                Term::imp(a.as_ref().clone(), b.as_ref().clone()),
                Term::imp(b.as_ref().clone(), a.as_ref().clone()),
            ),
            _ => return Err(shape(&p, "an implication or an equivalence")),
        };
        one(
            task.replace(side, &p, vec![Premise::new(p.clone(), unfolded)]),
            SurfaceCert::Unfold(p.clone(), hole()),
        )
    })
}

/// Splits a conjunctive goal or a disjunctive hypothesis into two tasks.
pub fn t_split(p: Ident) -> CertifyingTransform {
    CertifyingTransform::new(format!("split {p}"), move |task| {
        let (side, f) = find(task, &p)?;
        let (a, b) = match (side, f) {
            (Side::Goal, Term::Binary(Connective::And, a, b))
            | (Side::Hyp, Term::Binary(Connective::Or, a, b)) => (a, b),
            (_, Term::TyAbs(..)) => return Err(TransformError::TypeQuantified(p.clone())),
            (Side::Goal, _) => return Err(shape(&p, "a conjunction")),
            (Side::Hyp, _) => return Err(shape(&p, "a disjunction")),
        };
        let left = task.replace(side, &p, vec![Premise::new(p.clone(), a.as_ref().clone())]);
        let right = task.replace(side, &p, vec![Premise::new(p.clone(), b.as_ref().clone())]);
        Ok(Outcome::new(
            vec![left, right],
            SurfaceCert::Split(p.clone(), hole(), hole()),
        ))
    })
}

/// Breaks a conjunctive hypothesis or a disjunctive goal into two premises.
/// Missing names default to fresh `P.1` and `P.2`.
pub fn t_destruct(p: Ident, names: Option<(Ident, Ident)>) -> CertifyingTransform {
    CertifyingTransform::new(format!("destruct {p}"), move |task| {
        let (side, f) = find(task, &p)?;
        let (a, b) = match (side, f) {
            (Side::Hyp, Term::Binary(Connective::And, a, b))
            | (Side::Goal, Term::Binary(Connective::Or, a, b)) => (a, b),
            (_, Term::TyAbs(..)) => return Err(TransformError::TypeQuantified(p.clone())),
            (Side::Hyp, _) => return Err(shape(&p, "a conjunction")),
            (Side::Goal, _) => return Err(shape(&p, "a disjunction")),
        };
        let rest = task.remove(side, &p);
        let (p1, p2) = match &names {
            Some((p1, p2)) => {
                if p1 == p2 {
                    return Err(TransformError::NameInUse(p2.clone()));
                }
                ensure_unused(&rest, p1)?;
                ensure_unused(&rest, p2)?;
                (p1.clone(), p2.clone())
            }
            None => {
                let mut avoid = task.all_idents();
                let p1 = fresh_ident(&derived(&p, ".1"), &avoid);
                avoid.insert(p1.clone());
                let p2 = fresh_ident(&derived(&p, ".2"), &avoid);
                (p1, p2)
            }
        };
        let out = task.replace(
            side,
            &p,
            vec![
                Premise::new(p1.clone(), a.as_ref().clone()),
                Premise::new(p2.clone(), b.as_ref().clone()),
            ],
        );
        one(out, SurfaceCert::Destruct(p.clone(), p1, p2, hole()))
    })
}

/// Merges `P1` and `P2` on the same side into `P`: a conjunction among the
/// hypotheses, a disjunction among the goals.
pub fn t_construct(p1: Ident, p2: Ident, p: Ident) -> CertifyingTransform {
    CertifyingTransform::new(format!("construct {p1} {p2} {p}"), move |task| {
        if p1 == p2 {
            return Err(TransformError::Unsupported(format!("cannot merge `{p1}` with itself")));
        }
        let (s1, a) = find(task, &p1)?;
        let (s2, b) = find(task, &p2)?;
        if s1 != s2 {
            return Err(TransformError::Unsupported(format!(
                "`{p1}` and `{p2}` are on different sides"
            )));
        }
        for (n, t) in [(&p1, a), (&p2, b)] {
            if matches!(t, Term::TyAbs(..)) {
                return Err(TransformError::TypeQuantified(n.clone()));
            }
        }
        ensure_unused(task, &p)?;
        let merged = match s1 {
            Side::Hyp => Term::and(a.clone(), b.clone()),
            Side::Goal => Term::or(a.clone(), b.clone()),
        };
        let out = task
            .remove(s1, &p1)
            .remove(s1, &p2)
            .add(s1, Premise::new(p.clone(), merged));
        one(out, SurfaceCert::Construct(p1.clone(), p2.clone(), p.clone(), hole()))
    })
}

/// Cut: one task proves `t` as goal `P`, the other may use it as hypothesis `P`.
pub fn t_assert(p: Ident, t: Term) -> CertifyingTransform {
    CertifyingTransform::new(format!("assert {p}"), move |task| {
        ensure_unused(task, &p)?;
        match typecheck(&task.types, &task.sig, &t) {
            Ok(Type::Prop) => {}
            Ok(other) => {
                return Err(TransformError::IllTyped(format!(
                    "asserted term has type {other:?}, expected prop"
                )))
            }
            Err(e) => return Err(TransformError::IllTyped(e.to_string())),
        }
        let prove = task.add(Side::Goal, Premise::new(p.clone(), t.clone()));
        let use_it = task.add(Side::Hyp, Premise::new(p.clone(), t.clone()));
        Ok(Outcome::new(
            vec![prove, use_it],
            SurfaceCert::Assert(p.clone(), t.clone(), hole(), hole()),
        ))
    })
}

/// Adds an instance of a universal hypothesis or an existential goal under
/// a fresh `H_inst` name, keeping the original premise.
pub fn t_instantiate(h: Ident, witness: Term) -> CertifyingTransform {
    CertifyingTransform::new(format!("instantiate {h}"), move |task| {
        let (side, f) = find(task, &h)?;
        let (ty, body) = match (side, f) {
            (Side::Hyp, Term::Binder(BinderKind::Forall, _, ty, body))
            | (Side::Goal, Term::Binder(BinderKind::Exists, _, ty, body)) => (ty, body),
            (_, Term::TyAbs(..)) => return Err(TransformError::TypeQuantified(h.clone())),
            (Side::Hyp, _) => return Err(shape(&h, "a universal formula")),
            (Side::Goal, _) => return Err(shape(&h, "an existential formula")),
        };
        match typecheck(&task.types, &task.sig, &witness) {
            Ok(found) if &found == ty => {}
            Ok(found) => {
                return Err(TransformError::IllTyped(format!(
                    "witness has type {found:?}, expected {ty:?}"
                )))
            }
            Err(e) => return Err(TransformError::IllTyped(e.to_string())),
        }
        let name = task.fresh(&derived(&h, "_inst"));
        let out = task.add(side, Premise::new(name.clone(), body.open(&witness)));
        one(out, SurfaceCert::InstQuant(h.clone(), name, witness.clone(), hole()))
    })
}

/// Adds the instance of a type-quantified hypothesis at a ground type.
pub fn t_inst_type(h: Ident, ty: Type) -> CertifyingTransform {
    CertifyingTransform::new(format!("instantiate type {h}"), move |task| {
        let f = task.get(Side::Hyp, &h).ok_or_else(|| TransformError::MissingPremise(h.clone()))?;
        let Term::TyAbs(alpha, body) = f else {
            return Err(shape(&h, "a type-quantified hypothesis"));
        };
        check_type(&task.types, &ty, true).map_err(|e| TransformError::IllTyped(e.to_string()))?;
        let name = task.fresh(&derived(&h, "_inst"));
        let out = task.add(Side::Hyp, Premise::new(name.clone(), subst_type(body, alpha, &ty)));
        one(out, SurfaceCert::InstType(h.clone(), name, ty.clone(), hole()))
    })
}

/// Introduces a fresh symbol for a universal goal, an existential hypothesis
/// or a type-quantified goal.
pub fn t_intro(p: Ident) -> CertifyingTransform {
    CertifyingTransform::new(format!("intro {p}"), move |task| {
        let (side, f) = find(task, &p)?;
        match (side, f) {
            (Side::Goal, Term::Binder(BinderKind::Forall, hint, ty, body))
            | (Side::Hyp, Term::Binder(BinderKind::Exists, hint, ty, body)) => {
                // Binder hints need not be avoided: only the symbols in scope matter.
                let mut avoid = task.free_idents();
                avoid.extend(task.premise_names().cloned());
                let y = fresh_ident(hint, &avoid);
                let out = task
                    .with_symbol(y.clone(), ty.clone())
                    .replace(side, &p, vec![Premise::new(p.clone(), body.open(&Term::free(&y)))]);
                one(out, SurfaceCert::IntroQuant(p.clone(), y, hole()))
            }
            (Side::Goal, Term::TyAbs(alpha, body)) => {
                let iota = fresh_type_symbol(task, alpha);
                let opened = subst_type(body, alpha, &Type::App(iota.clone(), vec![]));
                let out = task
                    .with_type_symbol(iota.clone(), 0)
                    .replace(Side::Goal, &p, vec![Premise::new(p.clone(), opened)]);
                one(out, SurfaceCert::IntroType(p.clone(), iota, hole()))
            }
            (Side::Goal, _) => Err(shape(&p, "a universal or type-quantified goal")),
            (Side::Hyp, _) => Err(shape(&p, "an existential hypothesis")),
        }
    })
}

fn fresh_type_symbol(task: &Task, base: &Ident) -> Ident {
    let base = if is_reserved(base.name()) {
        Ident::new("t")
    } else {
        base.clone()
    };
    let declared = task.types.iter().map(|(s, _)| s.clone()).collect();
    fresh_ident(&base, &declared)
}
