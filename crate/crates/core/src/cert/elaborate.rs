use std::sync::Arc;

use thiserror::Error;

use super::{KernelCert, SurfaceCert};
use crate::checker::{apply_rule, RuleError};
use crate::ident::Ident;
use crate::task::{Side, Task};
use crate::term::{BinderKind, Connective, Term};
use crate::theories::as_equality;
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("no premise named `{0}`")]
    MissingPremise(Ident),
    #[error("`{name}` is not {expected}")]
    Shape { name: Ident, expected: &'static str },
    #[error("`{0}` is quantified over types and cannot be decomposed")]
    TypeQuantified(Ident),
    #[error("`{0}` and `{1}` must be distinct premises")]
    SameName(Ident, Ident),
    #[error("`{0}` is already used by a premise")]
    NameInUse(Ident),
    #[error("left-hand side of `{equality}` does not occur in `{premise}`")]
    NoOccurrence { equality: Ident, premise: Ident },
    #[error("{rule}: {error}")]
    Rule { rule: &'static str, error: RuleError },
}

/// Expands a surface certificate into a kernel certificate by replaying it
/// on `task`. Every hole becomes a kernel hole carrying the task reached at
/// that point.
pub fn elaborate(c: &SurfaceCert, task: &Task) -> Result<KernelCert, ElabError> {
    if let SurfaceCert::Hole = c {
        return Ok(KernelCert::Hole(task.clone()));
    }
    if let SurfaceCert::Rewrite(true, h, p, next) = c {
        let desugared = SurfaceCert::EqSym(
            h.clone(),
            Box::new(SurfaceCert::Rewrite(
                false,
                h.clone(),
                p.clone(),
                Box::new(SurfaceCert::EqSym(h.clone(), next.clone())),
            )),
        );
        return elaborate(&desugared, task);
    }
    let skel = skeleton(c, task)?;
    let children = c.children();
    let mut next = 0;
    let mut fill = |t: &Task| {
        let child = children[next];
        next += 1;
        elaborate(child, t)
    };
    graft(&skel, task, &mut fill)
}

/// Marks where the elaborations of the surface node's children go.
fn slot() -> Box<KernelCert> {
    Box::new(KernelCert::Hole(Task::new()))
}

/// Replays `skel` on `task`, replacing each slot by `fill(task at slot)`.
fn graft(
    skel: &KernelCert,
    task: &Task,
    fill: &mut dyn FnMut(&Task) -> Result<KernelCert, ElabError>,
) -> Result<KernelCert, ElabError> {
    if let KernelCert::Hole(_) = skel {
        return fill(task);
    }
    let tasks = apply_rule(skel, task).map_err(|error| ElabError::Rule {
        rule: skel.rule_name(),
        error,
    })?;
    let mut out = skel.clone();
    for (child, t) in out.children_mut().into_iter().zip(tasks) {
        let done = graft(child, &t, fill)?;
        *child = done;
    }
    Ok(out)
}

fn find<'a>(task: &'a Task, name: &Ident) -> Result<(Side, &'a Term), ElabError> {
    task.lookup(name)
        .ok_or_else(|| ElabError::MissingPremise(name.clone()))
}

fn find_on(task: &Task, side: Side, name: &Ident) -> Result<Term, ElabError> {
    match task.lookup(name) {
        Some((s, t)) if s == side => Ok(t.clone()),
        Some(_) => Err(ElabError::Shape {
            name: name.clone(),
            expected: if side.is_goal() { "a goal" } else { "a hypothesis" },
        }),
        None => Err(ElabError::MissingPremise(name.clone())),
    }
}

/// Connective-level steps must not look through a type quantifier.
fn no_pi(name: &Ident, t: &Term) -> Result<(), ElabError> {
    if let Term::TyAbs(..) = t {
        Err(ElabError::TypeQuantified(name.clone()))
    } else {
        Ok(())
    }
}

fn shape(name: &Ident, expected: &'static str) -> ElabError {
    ElabError::Shape {
        name: name.clone(),
        expected,
    }
}

fn binary(t: &Term, op: Connective) -> Option<(Term, Term)> {
    match t {
        Term::Binary(o, a, b) if *o == op => Some((a.as_ref().clone(), b.as_ref().clone())),
        _ => None,
    }
}

fn equality(task: &Task, name: &Ident) -> Result<(Side, Type, Term, Term), ElabError> {
    let (side, f) = find(task, name)?;
    no_pi(name, f)?;
    let (ty, a, b) = as_equality(f).ok_or_else(|| shape(name, "an equality"))?;
    Ok((side, ty.clone(), a.clone(), b.clone()))
}

/// `λz:τ. lhs = z`.
fn eq_context(ty: &Type, lhs: &Term) -> Term {
    Term::Binder(
        BinderKind::Lam,
        Ident::new("z"),
        ty.clone(),
        Arc::new(Term::eq(ty.clone(), lhs.clone(), Term::Bound(0))),
    )
}

/// Builds the kernel steps for one surface node, with a slot per surface child.
fn skeleton(c: &SurfaceCert, task: &Task) -> Result<KernelCert, ElabError> {
    Ok(match c {
        SurfaceCert::Hole => KernelCert::Hole(task.clone()),
        SurfaceCert::Trivial(p) => {
            let (side, f) = find(task, p)?;
            no_pi(p, f)?;
            match (side, f) {
                (Side::Hyp, Term::False) => KernelCert::Trivial {
                    goal: false,
                    premise: p.clone(),
                },
                (Side::Goal, Term::True) => KernelCert::Trivial {
                    goal: true,
                    premise: p.clone(),
                },
                _ => return Err(shape(p, "a ⊥ hypothesis or a ⊤ goal")),
            }
        }
        SurfaceCert::Axiom(h, g) => {
            let f = find_on(task, Side::Hyp, h)?;
            find_on(task, Side::Goal, g)?;
            KernelCert::Axiom {
                formula: f,
                hyp: h.clone(),
                goal: g.clone(),
            }
        }
        SurfaceCert::Clear(p, _) => {
            let (side, f) = find(task, p)?;
            KernelCert::Clear {
                goal: side.is_goal(),
                formula: f.clone(),
                premise: p.clone(),
                next: slot(),
            }
        }
        SurfaceCert::Swap(p, _) => {
            let (side, f) = find(task, p)?;
            no_pi(p, f)?;
            let Term::Not(inner) = f else {
                return Err(shape(p, "a negation"));
            };
            KernelCert::Swap {
                goal: side.is_goal(),
                formula: inner.as_ref().clone(),
                premise: p.clone(),
                next: slot(),
            }
        }
        SurfaceCert::Unfold(p, _) => {
            let (side, f) = find(task, p)?;
            no_pi(p, f)?;
            if binary(f, Connective::Imp).is_none() && binary(f, Connective::Iff).is_none() {
                return Err(shape(p, "an implication or equivalence"));
            }
            KernelCert::Unfold {
                goal: side.is_goal(),
                formula: f.clone(),
                premise: p.clone(),
                next: slot(),
            }
        }
        SurfaceCert::Assert(p, t, _, _) => KernelCert::Assert {
            name: p.clone(),
            formula: t.clone(),
            goal_branch: slot(),
            hyp_branch: slot(),
        },
        SurfaceCert::Split(p, _, _) => {
            let (side, f) = find(task, p)?;
            no_pi(p, f)?;
            let op = if side.is_goal() { Connective::And } else { Connective::Or };
            let (left, right) = binary(f, op).ok_or_else(|| {
                shape(p, if side.is_goal() { "a conjunction" } else { "a disjunction" })
            })?;
            KernelCert::Split {
                goal: side.is_goal(),
                left,
                right,
                premise: p.clone(),
                first: slot(),
                second: slot(),
            }
        }
        SurfaceCert::Destruct(p, p1, p2, _) => {
            let (side, f) = find(task, p)?;
            no_pi(p, f)?;
            let op = if side.is_goal() { Connective::Or } else { Connective::And };
            let (left, right) = binary(f, op).ok_or_else(|| {
                shape(p, if side.is_goal() { "a disjunction" } else { "a conjunction" })
            })?;
            KernelCert::Destruct {
                goal: side.is_goal(),
                left,
                right,
                premise: p.clone(),
                first_name: p1.clone(),
                second_name: p2.clone(),
                next: slot(),
            }
        }
        SurfaceCert::Construct(p1, p2, p, _) => construct(task, p1, p2, p)?,
        SurfaceCert::IntroQuant(p, y, _) => {
            let (side, f) = find(task, p)?;
            let kind = if side.is_goal() { BinderKind::Forall } else { BinderKind::Exists };
            match f {
                Term::Binder(k, hint, ty, body) if *k == kind => KernelCert::IntroQuant {
                    goal: side.is_goal(),
                    ty: ty.clone(),
                    body: Term::Binder(BinderKind::Lam, hint.clone(), ty.clone(), body.clone()),
                    premise: p.clone(),
                    var: y.clone(),
                    next: slot(),
                },
                Term::TyAbs(..) => return Err(ElabError::TypeQuantified(p.clone())),
                _ => return Err(shape(p, "a ∀ goal or an ∃ hypothesis")),
            }
        }
        SurfaceCert::InstQuant(p, p2, u, _) => {
            let (side, f) = find(task, p)?;
            let kind = if side.is_goal() { BinderKind::Exists } else { BinderKind::Forall };
            match f {
                Term::Binder(k, hint, ty, body) if *k == kind => KernelCert::InstQuant {
                    goal: side.is_goal(),
                    ty: ty.clone(),
                    body: Term::Binder(BinderKind::Lam, hint.clone(), ty.clone(), body.clone()),
                    premise: p.clone(),
                    new_premise: p2.clone(),
                    witness: u.clone(),
                    next: slot(),
                },
                Term::TyAbs(..) => return Err(ElabError::TypeQuantified(p.clone())),
                _ => return Err(shape(p, "a ∀ hypothesis or an ∃ goal")),
            }
        }
        SurfaceCert::IntroType(p, iota, _) => {
            let f = find_on(task, Side::Goal, p)?;
            if !matches!(f, Term::TyAbs(..)) {
                return Err(shape(p, "a type-quantified goal"));
            }
            KernelCert::IntroType {
                formula: f,
                premise: p.clone(),
                symbol: iota.clone(),
                next: slot(),
            }
        }
        SurfaceCert::InstType(p, p2, ty, _) => {
            let f = find_on(task, Side::Hyp, p)?;
            if !matches!(f, Term::TyAbs(..)) {
                return Err(shape(p, "a type-quantified hypothesis"));
            }
            KernelCert::InstType {
                formula: f,
                premise: p.clone(),
                new_premise: p2.clone(),
                ty: ty.clone(),
                next: slot(),
            }
        }
        SurfaceCert::EqRefl(g) => {
            let f = find_on(task, Side::Goal, g)?;
            let (_, a, _) = as_equality(&f).ok_or_else(|| shape(g, "an equality"))?;
            KernelCert::EqRefl {
                term: a.clone(),
                premise: g.clone(),
            }
        }
        SurfaceCert::EqSym(p, _) => eq_sym(task, p)?,
        SurfaceCert::EqTrans(h1, h2, h3, _) => {
            let (s1, ty, a, b) = equality(task, h1)?;
            let (s2, _, b2, c) = equality(task, h2)?;
            if s1 != Side::Hyp || s2 != Side::Hyp {
                return Err(shape(if s1 != Side::Hyp { h1 } else { h2 }, "a hypothesis"));
            }
            if b != b2 {
                return Err(shape(h2, "an equality continuing the first one"));
            }
            if task.has_premise(h3) {
                return Err(ElabError::NameInUse(h3.clone()));
            }
            let ab = Term::eq(ty.clone(), a.clone(), b.clone());
            KernelCert::Assert {
                name: h3.clone(),
                formula: ab.clone(),
                goal_branch: Box::new(KernelCert::Axiom {
                    formula: ab,
                    hyp: h1.clone(),
                    goal: h3.clone(),
                }),
                hyp_branch: Box::new(KernelCert::Rewrite {
                    goal: false,
                    lhs: b,
                    rhs: c,
                    context: eq_context(&ty, &a),
                    premise: h3.clone(),
                    equality: h2.clone(),
                    next: slot(),
                }),
            }
        }
        SurfaceCert::Rewrite(_, h, p, _) => {
            let (side, ty, a, b) = equality(task, h)?;
            if side != Side::Hyp {
                return Err(shape(h, "a hypothesis"));
            }
            if h == p {
                return Err(ElabError::SameName(h.clone(), p.clone()));
            }
            let (pside, f) = find(task, p)?;
            let (body, count) = f.abstract_subterm(&a);
            if count == 0 {
                return Err(ElabError::NoOccurrence {
                    equality: h.clone(),
                    premise: p.clone(),
                });
            }
            KernelCert::Rewrite {
                goal: pside.is_goal(),
                lhs: a,
                rhs: b,
                context: Term::Binder(BinderKind::Lam, Ident::new("z"), ty, Arc::new(body)),
                premise: p.clone(),
                equality: h.clone(),
                next: slot(),
            }
        }
        SurfaceCert::Induction(g, i, a, hi, hrec, _, _) => {
            let f = find_on(task, Side::Goal, g)?;
            no_pi(g, &f)?;
            KernelCert::Induction {
                var: i.clone(),
                bound: a.clone(),
                context: Term::Binder(BinderKind::Lam, i.clone(), Type::Int, Arc::new(f.close(i))),
                goal: g.clone(),
                bound_hyp: hi.clone(),
                rec_hyp: hrec.clone(),
                base: slot(),
                step: slot(),
            }
        }
    })
}

/// Merges `p1 : t1` and `p2 : t2` into `p : t1 ∧ t2` (hypotheses) or
/// `p : t1 ∨ t2` (goals).
fn construct(task: &Task, p1: &Ident, p2: &Ident, p: &Ident) -> Result<KernelCert, ElabError> {
    if p1 == p2 {
        return Err(ElabError::SameName(p1.clone(), p2.clone()));
    }
    let (side, t1) = find(task, p1)?;
    let t2 = find_on(task, side, p2)?;
    no_pi(p1, t1)?;
    no_pi(p2, &t2)?;
    if task.has_premise(p) {
        return Err(ElabError::NameInUse(p.clone()));
    }
    let t1 = t1.clone();
    let axiom = |t: &Term, hyp: &Ident, goal: &Ident| {
        Box::new(KernelCert::Axiom {
            formula: t.clone(),
            hyp: hyp.clone(),
            goal: goal.clone(),
        })
    };
    let goal = side.is_goal();
    let clears = Box::new(KernelCert::Clear {
        goal,
        formula: t1.clone(),
        premise: p1.clone(),
        next: Box::new(KernelCert::Clear {
            goal,
            formula: t2.clone(),
            premise: p2.clone(),
            next: slot(),
        }),
    });
    Ok(if !goal {
        KernelCert::Assert {
            name: p.clone(),
            formula: Term::and(t1.clone(), t2.clone()),
            goal_branch: Box::new(KernelCert::Split {
                goal: true,
                left: t1.clone(),
                right: t2.clone(),
                premise: p.clone(),
                first: axiom(&t1, p1, p),
                second: axiom(&t2, p2, p),
            }),
            hyp_branch: clears,
        }
    } else {
        KernelCert::Assert {
            name: p.clone(),
            formula: Term::or(t1.clone(), t2.clone()),
            goal_branch: clears,
            hyp_branch: Box::new(KernelCert::Split {
                goal: false,
                left: t1.clone(),
                right: t2.clone(),
                premise: p.clone(),
                first: axiom(&t1, p, p1),
                second: axiom(&t2, p, p2),
            }),
        }
    })
}

/// Turns premise `p : a = b` into `p : b = a`, on either side.
fn eq_sym(task: &Task, p: &Ident) -> Result<KernelCert, ElabError> {
    let (side, ty, a, b) = equality(task, p)?;
    let tmp = task.fresh(p);
    let ab = Term::eq(ty.clone(), a.clone(), b.clone());
    let ba = Term::eq(ty.clone(), b.clone(), a.clone());
    Ok(match side {
        Side::Hyp => KernelCert::Assert {
            name: tmp.clone(),
            formula: ba.clone(),
            goal_branch: Box::new(KernelCert::Rewrite {
                goal: true,
                lhs: a.clone(),
                rhs: b.clone(),
                context: eq_context(&ty, &b),
                premise: tmp.clone(),
                equality: p.clone(),
                next: Box::new(KernelCert::EqRefl {
                    term: b.clone(),
                    premise: tmp.clone(),
                }),
            }),
            hyp_branch: Box::new(KernelCert::Clear {
                goal: false,
                formula: ab,
                premise: p.clone(),
                next: Box::new(KernelCert::Assert {
                    name: p.clone(),
                    formula: ba.clone(),
                    goal_branch: Box::new(KernelCert::Axiom {
                        formula: ba.clone(),
                        hyp: tmp.clone(),
                        goal: p.clone(),
                    }),
                    hyp_branch: Box::new(KernelCert::Clear {
                        goal: false,
                        formula: ba,
                        premise: tmp,
                        next: slot(),
                    }),
                }),
            }),
        },
        Side::Goal => KernelCert::Assert {
            name: tmp.clone(),
            formula: ba.clone(),
            goal_branch: Box::new(KernelCert::Clear {
                goal: true,
                formula: ab,
                premise: p.clone(),
                next: Box::new(KernelCert::Assert {
                    name: p.clone(),
                    formula: ba.clone(),
                    goal_branch: Box::new(KernelCert::Clear {
                        goal: true,
                        formula: ba.clone(),
                        premise: tmp.clone(),
                        next: slot(),
                    }),
                    hyp_branch: Box::new(KernelCert::Axiom {
                        formula: ba,
                        hyp: p.clone(),
                        goal: tmp.clone(),
                    }),
                }),
            }),
            hyp_branch: Box::new(KernelCert::Rewrite {
                goal: true,
                lhs: b.clone(),
                rhs: a.clone(),
                context: eq_context(&ty, &a),
                premise: p.clone(),
                equality: tmp,
                next: Box::new(KernelCert::EqRefl {
                    term: a,
                    premise: p.clone(),
                }),
            }),
        },
    })
}
