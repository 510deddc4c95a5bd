//! The computational checker: replays a kernel certificate against a task,
//! deriving the premises of each rule, and compares the derived leaves with
//! the tasks stored in the certificate's holes.

use std::fmt;

use thiserror::Error;

use crate::cert::KernelCert;
use crate::ident::Ident;
use crate::task::{Premise, Side, Task};
use crate::term::{BinderKind, Connective, Term};
use crate::theories::{apply_context, as_equality, compare, Interp};
use crate::types::Type;
use crate::typing::{check_type, typecheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("no {} named `{name}`", side_word(*side))]
    MissingPremise { side: Side, name: Ident },
    #[error("`{name}` does not have the shape {expected}")]
    Shape { name: Ident, expected: &'static str },
    #[error("formula of `{0}` differs from the one recorded in the certificate")]
    FormulaMismatch(Ident),
    #[error("name `{0}` is already used by a premise")]
    NameInUse(Ident),
    #[error("`{0}` is not fresh")]
    NotFresh(Ident),
    #[error("{0}")]
    SideCondition(String),
    #[error("hole task differs from the derived task")]
    HoleMismatch,
    #[error("intermediate task is not well typed")]
    IllTypedTask,
}

fn side_word(side: Side) -> &'static str {
    match side {
        Side::Hyp => "hypothesis",
        Side::Goal => "goal",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckFailure {
    pub rule: &'static str,
    /// Child indices from the root to the failing node.
    pub path: Vec<usize>,
    pub error: RuleError,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "{} at [{}]: {}", self.rule, path.join(","), self.error)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub ok: bool,
    pub derived_leaves: Vec<Task>,
    pub failure: Option<CheckFailure>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    /// Fail if any intermediate task is not well typed.
    pub assert_well_typed: bool,
}

pub fn ccheck(c: &KernelCert, task: &Task) -> CheckReport {
    ccheck_with(c, task, CheckOptions::default())
}

pub fn ccheck_with(c: &KernelCert, task: &Task, options: CheckOptions) -> CheckReport {
    let mut derived = Vec::new();
    // Explicit stack so long certificates do not exhaust the call stack.
    // Each entry records its parent entry and child index; paths are only
    // rebuilt on failure.
    let mut trail: Vec<(usize, usize)> = Vec::new();
    let mut stack: Vec<(&KernelCert, Task, Option<usize>)> = vec![(c, task.clone(), None)];
    while let Some((node, current, at)) = stack.pop() {
        let fail = |error| CheckReport {
            ok: false,
            derived_leaves: Vec::new(),
            failure: Some(CheckFailure {
                rule: node.rule_name(),
                path: path_of(&trail, at),
                error,
            }),
        };
        if options.assert_well_typed && !current.well_typed() {
            return fail(RuleError::IllTypedTask);
        }
        if let KernelCert::Hole(stored) = node {
            if *stored != current {
                return fail(RuleError::HoleMismatch);
            }
            derived.push(current);
            continue;
        }
        match apply_rule(node, &current) {
            Ok(children) => {
                let nodes = node.children();
                debug_assert_eq!(nodes.len(), children.len());
                let parent = at.map_or(usize::MAX, |k| k);
                for (i, (child, t)) in nodes.into_iter().zip(children).enumerate().rev() {
                    trail.push((parent, i));
                    stack.push((child, t, Some(trail.len() - 1)));
                }
            }
            Err(error) => return fail(error),
        }
    }
    CheckReport {
        ok: true,
        derived_leaves: derived,
        failure: None,
    }
}

fn path_of(trail: &[(usize, usize)], mut at: Option<usize>) -> Vec<usize> {
    let mut path = Vec::new();
    while let Some(k) = at {
        let (parent, i) = trail[k];
        path.push(i);
        at = (parent != usize::MAX).then_some(parent);
    }
    path.reverse();
    path
}

/// Whether the application of a transformation from `task` to `leaves` is
/// validated by `c`.
pub fn check_application(task: &Task, leaves: &[Task], c: &KernelCert) -> bool {
    let report = ccheck(c, task);
    report.ok
        && report.derived_leaves.len() == leaves.len()
        && report.derived_leaves.iter().zip(leaves).all(|(a, b)| a == b)
}

fn premise<'a>(task: &'a Task, side: Side, name: &Ident) -> Result<&'a Term, RuleError> {
    task.get(side, name).ok_or_else(|| RuleError::MissingPremise {
        side,
        name: name.clone(),
    })
}

fn expect_formula(task: &Task, side: Side, name: &Ident, expected: &Term) -> Result<(), RuleError> {
    if premise(task, side, name)? == expected {
        Ok(())
    } else {
        Err(RuleError::FormulaMismatch(name.clone()))
    }
}

fn unused_name(task: &Task, name: &Ident) -> Result<(), RuleError> {
    if task.has_premise(name) {
        Err(RuleError::NameInUse(name.clone()))
    } else {
        Ok(())
    }
}

fn has_type(task: &Task, t: &Term, ty: &Type) -> Result<(), RuleError> {
    match typecheck(&task.types, &task.sig, t) {
        Ok(found) if &found == ty => Ok(()),
        Ok(found) => Err(RuleError::SideCondition(format!(
            "term has type {found:?}, expected {ty:?}"
        ))),
        Err(e) => Err(RuleError::SideCondition(e.to_string())),
    }
}

fn lambda_body<'a>(t: &'a Term, ty: &Type) -> Result<&'a Term, RuleError> {
    match t {
        Term::Binder(BinderKind::Lam, _, bty, body) if bty == ty => Ok(body),
        Term::Binder(BinderKind::Lam, ..) => Err(RuleError::SideCondition(
            "abstraction has the wrong binder type".into(),
        )),
        _ => Err(RuleError::SideCondition("payload is not an abstraction".into())),
    }
}

fn rebind(kind: BinderKind, lam: &Term) -> Term {
    match lam {
        Term::Binder(_, hint, ty, body) => Term::Binder(kind, hint.clone(), ty.clone(), body.clone()),
        other => other.clone(),
    }
}

/// Applies one kernel rule to `task`, returning the tasks its children must
/// prove, in order. Every side condition of the rule is checked here.
pub fn apply_rule(node: &KernelCert, task: &Task) -> Result<Vec<Task>, RuleError> {
    match node {
        KernelCert::Hole(_) => Ok(vec![task.clone()]),
        KernelCert::Trivial { goal, premise: p } => {
            let side = Side::from_bool(*goal);
            let expected = if *goal { Term::True } else { Term::False };
            expect_formula(task, side, p, &expected)?;
            Ok(vec![])
        }
        KernelCert::Axiom { formula, hyp, goal } => {
            expect_formula(task, Side::Hyp, hyp, formula)?;
            expect_formula(task, Side::Goal, goal, formula)?;
            Ok(vec![])
        }
        KernelCert::Clear {
            goal, formula, premise: p, ..
        } => {
            let side = Side::from_bool(*goal);
            expect_formula(task, side, p, formula)?;
            Ok(vec![task.remove(side, p)])
        }
        KernelCert::Swap {
            goal, formula, premise: p, ..
        } => {
            let side = Side::from_bool(*goal);
            expect_formula(task, side, p, &Term::not(formula.clone()))?;
            Ok(vec![task.swap(side, p, formula.clone())])
        }
        KernelCert::Unfold {
            goal, formula, premise: p, ..
        } => {
            let side = Side::from_bool(*goal);
            expect_formula(task, side, p, formula)?;
            let unfolded = match formula {
                Term::Binary(Connective::Imp, a, b) => {
                    Term::or(Term::not(a.as_ref().clone()), b.as_ref().clone())
                }
                Term::Binary(Connective::Iff, a, b) => {
                    let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                    Term::and(Term::imp(a.clone(), b.clone()), Term::imp(b, a))
                }
                _ => {
                    return Err(RuleError::Shape {
                        name: p.clone(),
                        expected: "a ⇒ b or a ⇔ b",
                    })
                }
            };
            Ok(vec![task.replace(side, p, vec![Premise::new(p.clone(), unfolded)])])
        }
        KernelCert::Assert { name, formula, .. } => {
            unused_name(task, name)?;
            has_type(task, formula, &Type::Prop)?;
            Ok(vec![
                task.add(Side::Goal, Premise::new(name.clone(), formula.clone())),
                task.add(Side::Hyp, Premise::new(name.clone(), formula.clone())),
            ])
        }
        KernelCert::Split {
            goal,
            left,
            right,
            premise: p,
            ..
        } => {
            let side = Side::from_bool(*goal);
            let op = if *goal { Connective::And } else { Connective::Or };
            expect_formula(task, side, p, &Term::binary(op, left.clone(), right.clone()))?;
            Ok(vec![
                task.replace(side, p, vec![Premise::new(p.clone(), left.clone())]),
                task.replace(side, p, vec![Premise::new(p.clone(), right.clone())]),
            ])
        }
        KernelCert::Destruct {
            goal,
            left,
            right,
            premise: p,
            first_name,
            second_name,
            ..
        } => {
            let side = Side::from_bool(*goal);
            let op = if *goal { Connective::Or } else { Connective::And };
            expect_formula(task, side, p, &Term::binary(op, left.clone(), right.clone()))?;
            if first_name == second_name {
                return Err(RuleError::NameInUse(first_name.clone()));
            }
            let rest = task.remove(side, p);
            unused_name(&rest, first_name)?;
            unused_name(&rest, second_name)?;
            Ok(vec![task.replace(
                side,
                p,
                vec![
                    Premise::new(first_name.clone(), left.clone()),
                    Premise::new(second_name.clone(), right.clone()),
                ],
            )])
        }
        KernelCert::IntroQuant {
            goal,
            ty,
            body,
            premise: p,
            var,
            ..
        } => {
            let side = Side::from_bool(*goal);
            let kind = if *goal { BinderKind::Forall } else { BinderKind::Exists };
            let inner = lambda_body(body, ty)?;
            expect_formula(task, side, p, &rebind(kind, body))?;
            check_type(&task.types, ty, true).map_err(|e| RuleError::SideCondition(e.to_string()))?;
            if task.free_idents().contains(var) {
                return Err(RuleError::NotFresh(var.clone()));
            }
            let opened = inner.open(&Term::free(var));
            Ok(vec![task
                .with_symbol(var.clone(), ty.clone())
                .replace(side, p, vec![Premise::new(p.clone(), opened)])])
        }
        KernelCert::InstQuant {
            goal,
            ty,
            body,
            premise: p,
            new_premise,
            witness,
            ..
        } => {
            let side = Side::from_bool(*goal);
            let kind = if *goal { BinderKind::Exists } else { BinderKind::Forall };
            let inner = lambda_body(body, ty)?;
            expect_formula(task, side, p, &rebind(kind, body))?;
            has_type(task, witness, ty)?;
            unused_name(task, new_premise)?;
            Ok(vec![task.add(side, Premise::new(new_premise.clone(), inner.open(witness)))])
        }
        KernelCert::IntroType {
            formula,
            premise: p,
            symbol,
            ..
        } => {
            expect_formula(task, Side::Goal, p, formula)?;
            let Term::TyAbs(alpha, body) = formula else {
                return Err(RuleError::Shape {
                    name: p.clone(),
                    expected: "Πα. t",
                });
            };
            if task.types.contains(symbol) || crate::theories::is_reserved(symbol.name()) {
                return Err(RuleError::NotFresh(symbol.clone()));
            }
            let opened = crate::term::subst_type(body, alpha, &Type::App(symbol.clone(), vec![]));
            Ok(vec![task
                .with_type_symbol(symbol.clone(), 0)
                .replace(Side::Goal, p, vec![Premise::new(p.clone(), opened)])])
        }
        KernelCert::InstType {
            formula,
            premise: p,
            new_premise,
            ty,
            ..
        } => {
            expect_formula(task, Side::Hyp, p, formula)?;
            let Term::TyAbs(alpha, body) = formula else {
                return Err(RuleError::Shape {
                    name: p.clone(),
                    expected: "Πα. t",
                });
            };
            check_type(&task.types, ty, true).map_err(|e| RuleError::SideCondition(e.to_string()))?;
            unused_name(task, new_premise)?;
            let inst = crate::term::subst_type(body, alpha, ty);
            Ok(vec![task.add(Side::Hyp, Premise::new(new_premise.clone(), inst))])
        }
        KernelCert::EqRefl { term, premise: p } => {
            let g = premise(task, Side::Goal, p)?;
            match as_equality(g) {
                Some((_, a, b)) if a == term && b == term => Ok(vec![]),
                _ => Err(RuleError::Shape {
                    name: p.clone(),
                    expected: "x = x",
                }),
            }
        }
        KernelCert::Rewrite {
            goal,
            lhs,
            rhs,
            context,
            premise: p,
            equality,
            ..
        } => {
            let side = Side::from_bool(*goal);
            if p == equality {
                return Err(RuleError::SideCondition(
                    "an equality cannot rewrite itself".into(),
                ));
            }
            let eq = premise(task, Side::Hyp, equality)?;
            let Some((ty, a, b)) = as_equality(eq) else {
                return Err(RuleError::Shape {
                    name: equality.clone(),
                    expected: "a = b",
                });
            };
            if a != lhs || b != rhs {
                return Err(RuleError::FormulaMismatch(equality.clone()));
            }
            let before = apply_context(context, lhs, Some(ty))
                .map_err(|e| RuleError::SideCondition(e.to_string()))?;
            expect_formula(task, side, p, &before)?;
            let after = apply_context(context, rhs, Some(ty))
                .map_err(|e| RuleError::SideCondition(e.to_string()))?;
            Ok(vec![task.replace(side, p, vec![Premise::new(p.clone(), after)])])
        }
        KernelCert::Induction {
            var,
            bound,
            context,
            goal,
            bound_hyp,
            rec_hyp,
            ..
        } => {
            if task.sig.get(var) != Some(&Type::Int) {
                return Err(RuleError::SideCondition(format!("`{var}` is not an int variable")));
            }
            has_type(task, bound, &Type::Int)?;
            if bound.mentions(var) {
                return Err(RuleError::SideCondition(format!("bound mentions `{var}`")));
            }
            let body = lambda_body(context, &Type::Int)?;
            if body.mentions(var) {
                return Err(RuleError::NotFresh(var.clone()));
            }
            let i = Term::free(var);
            expect_formula(task, Side::Goal, goal, &body.open(&i))?;
            let others = task.remove(Side::Goal, goal);
            if others
                .hyps
                .iter()
                .chain(&others.goals)
                .any(|p| p.formula.mentions(var))
            {
                return Err(RuleError::NotFresh(var.clone()));
            }
            if bound_hyp == rec_hyp {
                return Err(RuleError::NameInUse(rec_hyp.clone()));
            }
            unused_name(task, bound_hyp)?;
            unused_name(task, rec_hyp)?;
            let base = task.add(
                Side::Hyp,
                Premise::new(bound_hyp.clone(), compare(Interp::Le, i.clone(), bound.clone())),
            );
            let below = Term::Binder(
                BinderKind::Forall,
                Ident::new("n"),
                Type::Int,
                std::sync::Arc::new(Term::imp(
                    compare(Interp::Lt, Term::Bound(0), i.clone()),
                    body.clone(),
                )),
            );
            let step = task
                .add(
                    Side::Hyp,
                    Premise::new(bound_hyp.clone(), compare(Interp::Gt, i, bound.clone())),
                )
                .add(Side::Hyp, Premise::new(rec_hyp.clone(), below));
            Ok(vec![base, step])
        }
    }
}
