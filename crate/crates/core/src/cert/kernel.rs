use thiserror::Error;

use crate::ident::Ident;
use crate::task::Task;
use crate::term::Term;
use crate::types::Type;

/// Kernel certificates. Boolean `goal` fields say whether the premise the
/// node acts on is a goal (`true`) or a hypothesis (`false`).
///
/// Besides the split/destruct/quantifier/type/assert rules and the equality
/// and induction rules, the kernel has four structural LK steps that the
/// derived certificates need: `Axiom` closes `H:t ⊢ G:t`, `Clear` weakens
/// a premise away, `Swap` moves a negated premise across the turnstile, and
/// `Unfold` rewrites `⇒`/`⇔` into `∨`/`∧`.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelCert {
    Hole(Task),
    Trivial {
        goal: bool,
        premise: Ident,
    },
    Axiom {
        formula: Term,
        hyp: Ident,
        goal: Ident,
    },
    Clear {
        goal: bool,
        formula: Term,
        premise: Ident,
        next: Box<KernelCert>,
    },
    /// `P : ¬t` on one side becomes `P : t` on the other; `formula` is `t`.
    Swap {
        goal: bool,
        formula: Term,
        premise: Ident,
        next: Box<KernelCert>,
    },
    /// `a ⇒ b` becomes `¬a ∨ b`; `a ⇔ b` becomes `(a ⇒ b) ∧ (b ⇒ a)`.
    Unfold {
        goal: bool,
        formula: Term,
        premise: Ident,
        next: Box<KernelCert>,
    },
    Assert {
        name: Ident,
        formula: Term,
        /// Proves the task with `name : formula` as an extra goal.
        goal_branch: Box<KernelCert>,
        /// Continues with `name : formula` as an extra hypothesis.
        hyp_branch: Box<KernelCert>,
    },
    Split {
        goal: bool,
        left: Term,
        right: Term,
        premise: Ident,
        first: Box<KernelCert>,
        second: Box<KernelCert>,
    },
    Destruct {
        goal: bool,
        left: Term,
        right: Term,
        premise: Ident,
        first_name: Ident,
        second_name: Ident,
        next: Box<KernelCert>,
    },
    /// `body` is the quantified formula as an explicit `λx:τ. t`.
    IntroQuant {
        goal: bool,
        ty: Type,
        body: Term,
        premise: Ident,
        var: Ident,
        next: Box<KernelCert>,
    },
    InstQuant {
        goal: bool,
        ty: Type,
        body: Term,
        premise: Ident,
        new_premise: Ident,
        witness: Term,
        next: Box<KernelCert>,
    },
    IntroType {
        formula: Term,
        premise: Ident,
        symbol: Ident,
        next: Box<KernelCert>,
    },
    InstType {
        formula: Term,
        premise: Ident,
        new_premise: Ident,
        ty: Type,
        next: Box<KernelCert>,
    },
    EqRefl {
        term: Term,
        premise: Ident,
    },
    /// Uses hypothesis `equality : lhs = rhs` to turn `premise : t[lhs]`
    /// into `premise : t[rhs]`, where `context` is the λ-abstraction `t`.
    Rewrite {
        goal: bool,
        lhs: Term,
        rhs: Term,
        context: Term,
        premise: Ident,
        equality: Ident,
        next: Box<KernelCert>,
    },
    /// Strong induction on the integer variable `var` above `bound`.
    Induction {
        var: Ident,
        bound: Term,
        context: Term,
        goal: Ident,
        bound_hyp: Ident,
        rec_hyp: Ident,
        base: Box<KernelCert>,
        step: Box<KernelCert>,
    },
}

impl KernelCert {
    pub fn hole(task: Task) -> Self {
        KernelCert::Hole(task)
    }

    /// Constructor name as used in the serialized form.
    pub fn rule_name(&self) -> &'static str {
        match self {
            KernelCert::Hole(_) => "KHole",
            KernelCert::Trivial { .. } => "KTrivial",
            KernelCert::Axiom { .. } => "KAxiom",
            KernelCert::Clear { .. } => "KClear",
            KernelCert::Swap { .. } => "KSwap",
            KernelCert::Unfold { .. } => "KUnfold",
            KernelCert::Assert { .. } => "KAssert",
            KernelCert::Split { .. } => "KSplit",
            KernelCert::Destruct { .. } => "KDestruct",
            KernelCert::IntroQuant { .. } => "KIntroQuant",
            KernelCert::InstQuant { .. } => "KInstQuant",
            KernelCert::IntroType { .. } => "KIntroType",
            KernelCert::InstType { .. } => "KInstType",
            KernelCert::EqRefl { .. } => "KEqRefl",
            KernelCert::Rewrite { .. } => "KRewrite",
            KernelCert::Induction { .. } => "KInduction",
        }
    }

    pub fn children(&self) -> Vec<&KernelCert> {
        match self {
            KernelCert::Hole(_)
            | KernelCert::Trivial { .. }
            | KernelCert::Axiom { .. }
            | KernelCert::EqRefl { .. } => vec![],
            KernelCert::Clear { next, .. }
            | KernelCert::Swap { next, .. }
            | KernelCert::Unfold { next, .. }
            | KernelCert::Destruct { next, .. }
            | KernelCert::IntroQuant { next, .. }
            | KernelCert::InstQuant { next, .. }
            | KernelCert::IntroType { next, .. }
            | KernelCert::InstType { next, .. }
            | KernelCert::Rewrite { next, .. } => vec![next],
            KernelCert::Assert {
                goal_branch,
                hyp_branch,
                ..
            } => vec![goal_branch, hyp_branch],
            KernelCert::Split { first, second, .. } => vec![first, second],
            KernelCert::Induction { base, step, .. } => vec![base, step],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut KernelCert> {
        match self {
            KernelCert::Hole(_)
            | KernelCert::Trivial { .. }
            | KernelCert::Axiom { .. }
            | KernelCert::EqRefl { .. } => vec![],
            KernelCert::Clear { next, .. }
            | KernelCert::Swap { next, .. }
            | KernelCert::Unfold { next, .. }
            | KernelCert::Destruct { next, .. }
            | KernelCert::IntroQuant { next, .. }
            | KernelCert::InstQuant { next, .. }
            | KernelCert::IntroType { next, .. }
            | KernelCert::InstType { next, .. }
            | KernelCert::Rewrite { next, .. } => vec![next],
            KernelCert::Assert {
                goal_branch,
                hyp_branch,
                ..
            } => vec![goal_branch, hyp_branch],
            KernelCert::Split { first, second, .. } => vec![first, second],
            KernelCert::Induction { base, step, .. } => vec![base, step],
        }
    }

    /// Tasks stored in `Hole` nodes, in left-to-right order.
    pub fn leaves(&self) -> Vec<&Task> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Task>) {
        match self {
            KernelCert::Hole(t) => out.push(t),
            other => other.children().into_iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        1 + self.children().into_iter().map(KernelCert::node_count).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("no hole carries the requested task")]
    NoMatchingHole,
}

/// Replaces the first hole (in order) whose task is alpha-equal to `at` by `with`.
pub fn compose(c: &KernelCert, at: &Task, with: &KernelCert) -> Result<KernelCert, ComposeError> {
    let mut out = c.clone();
    if replace_first(&mut out, at, with) {
        Ok(out)
    } else {
        Err(ComposeError::NoMatchingHole)
    }
}

fn replace_first(c: &mut KernelCert, at: &Task, with: &KernelCert) -> bool {
    if let KernelCert::Hole(t) = c {
        if t == at {
            *c = with.clone();
            return true;
        }
        return false;
    }
    c.children_mut()
        .into_iter()
        .any(|child| replace_first(child, at, with))
}

impl Drop for KernelCert {
    // Long certificate chains would otherwise drop recursively.
    fn drop(&mut self) {
        let mut stack: Vec<KernelCert> = Vec::new();
        for child in self.children_mut() {
            if !child.children().is_empty() {
                stack.push(std::mem::replace(child, KernelCert::Trivial {
                    goal: false,
                    premise: Ident::new("_"),
                }));
            }
        }
        while let Some(mut node) = stack.pop() {
            for child in node.children_mut() {
                if !child.children().is_empty() {
                    stack.push(std::mem::replace(child, KernelCert::Trivial {
                        goal: false,
                        premise: Ident::new("_"),
                    }));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::Premise;

    fn task_with_goal(name: &str) -> Task {
        let mut t = Task::new();
        t.goals.push(Premise::new(name, Term::True));
        t
    }

    fn split(first: KernelCert, second: KernelCert) -> KernelCert {
        KernelCert::Split {
            goal: false,
            left: Term::var("x1"),
            right: Term::var("x2"),
            premise: Ident::new("H"),
            first: Box::new(first),
            second: Box::new(second),
        }
    }

    #[test]
    fn leaves_in_order() {
        let (t1, t2) = (task_with_goal("A"), task_with_goal("B"));
        let c = split(KernelCert::Hole(t1.clone()), KernelCert::Hole(t2.clone()));
        assert_eq!(c.leaves(), vec![&t1, &t2]);
        let closed = KernelCert::Trivial {
            goal: false,
            premise: Ident::new("H"),
        };
        assert!(closed.leaves().is_empty());
    }

    #[test]
    fn compose_at_root_hole() {
        let t = task_with_goal("A");
        let c2 = KernelCert::Trivial {
            goal: true,
            premise: Ident::new("A"),
        };
        assert_eq!(compose(&KernelCert::Hole(t.clone()), &t, &c2), Ok(c2));
    }

    #[test]
    fn compose_second_hole() {
        let (t1, t2) = (task_with_goal("A"), task_with_goal("B"));
        let c = split(KernelCert::Hole(t1.clone()), KernelCert::Hole(t2.clone()));
        let closer = KernelCert::Trivial {
            goal: false,
            premise: Ident::new("H"),
        };
        let out = compose(&c, &t2, &closer).unwrap();
        assert_eq!(out, split(KernelCert::Hole(t1.clone()), closer));
        assert_eq!(out.leaves(), vec![&t1]);
        assert_eq!(
            compose(&c, &task_with_goal("C"), &KernelCert::Hole(t1)),
            Err(ComposeError::NoMatchingHole)
        );
    }

    #[test]
    fn deep_chains_drop_without_overflow() {
        let mut c = KernelCert::Hole(Task::new());
        for _ in 0..200_000 {
            c = KernelCert::Clear {
                goal: false,
                formula: Term::True,
                premise: Ident::new("H"),
                next: Box::new(c),
            };
        }
        drop(c);
    }
}
