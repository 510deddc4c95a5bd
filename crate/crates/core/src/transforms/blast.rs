//! Propositional decision procedure built from the one-step transformations.

use super::basic::{t_axiom, t_clear, t_destruct, t_split, t_swap, t_trivial, t_unfold};
use super::{compose_transforms, CertifyingTransform, Outcome, TransformError};
use crate::task::Task;
use crate::term::{Connective, Term};
use crate::types::Type;

/// Whether every premise is built from connectives over nullary `prop` symbols.
pub fn is_propositional(task: &Task) -> bool {
    fn prop(t: &Term, task: &Task) -> bool {
        match t {
            Term::True | Term::False => true,
            Term::Free(x, args) => args.is_empty() && task.sig.get(x) == Some(&Type::Prop),
            Term::Not(a) => prop(a, task),
            Term::Binary(_, a, b) => prop(a, task) && prop(b, task),
            _ => false,
        }
    }
    task.hyps.iter().chain(&task.goals).all(|p| prop(&p.formula, task))
}

/// Picks one step: a closing rule when one applies, otherwise the
/// decomposition of the first compound goal, then of the first compound
/// hypothesis.
fn choose(task: &Task) -> Option<CertifyingTransform> {
    if let Some(p) = task.hyps.iter().find(|p| matches!(p.formula, Term::False)) {
        return Some(t_trivial(p.name.clone()));
    }
    if let Some(p) = task.goals.iter().find(|p| matches!(p.formula, Term::True)) {
        return Some(t_trivial(p.name.clone()));
    }
    for h in &task.hyps {
        if let Some(g) = task.goals.iter().find(|g| g.formula == h.formula) {
            return Some(t_axiom(h.name.clone(), g.name.clone()));
        }
    }
    for g in &task.goals {
        let name = g.name.clone();
        match &g.formula {
            Term::Binary(Connective::And, ..) => return Some(t_split(name)),
            Term::Binary(Connective::Or, ..) => return Some(t_destruct(name, None)),
            Term::Binary(..) => return Some(t_unfold(name)),
            Term::Not(_) => return Some(t_swap(name)),
            Term::False => return Some(t_clear(name)),
            _ => {}
        }
    }
    for h in &task.hyps {
        let name = h.name.clone();
        match &h.formula {
            Term::Binary(Connective::And, ..) => return Some(t_destruct(name, None)),
            Term::Binary(Connective::Or, ..) => return Some(t_split(name)),
            Term::Binary(..) => return Some(t_unfold(name)),
            Term::Not(_) => return Some(t_swap(name)),
            Term::True => return Some(t_clear(name)),
            _ => {}
        }
    }
    None
}

/// A single step of [`t_blast`].
pub fn blast_step() -> CertifyingTransform {
    CertifyingTransform::new("blast step", |task| match choose(task) {
        Some(t) => t.apply(task),
        None => Err(TransformError::NotProved {
            hyps: task.hyps.iter().map(|p| p.name.clone()).collect(),
            goals: task.goals.iter().map(|p| p.name.clone()).collect(),
        }),
    })
}

fn blast_rec() -> CertifyingTransform {
    compose_transforms(blast_step(), |_, _| Some(blast_rec()))
}

/// Decides a propositional task, closing it entirely or failing. Every step
/// is one of the elementary transformations, chained with
/// [`compose_transforms`].
pub fn t_blast() -> CertifyingTransform {
    CertifyingTransform::new("blast", |task| {
        if !is_propositional(task) {
            return Err(TransformError::Unsupported(
                "blast only handles propositional tasks".into(),
            ));
        }
        let out: Outcome = blast_rec().apply(task)?;
        debug_assert!(out.tasks.is_empty());
        Ok(out)
    })
}
