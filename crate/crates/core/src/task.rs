//! Proof tasks `I | Σ | Γ ⊢ Δ`.
//!
//! Hypotheses and goals are kept in order so emitted artifacts are
//! deterministic, but task comparison is by name: two tasks are equal when
//! they declare the same symbols and map the same premise names to
//! alpha-equivalent formulas on the same side.
//!
//! Validity (every model of `I`, `Σ` and `Γ` satisfies some formula of `Δ`)
//! is not computable in general. [`prop_valid_oracle`] decides it on the
//! propositional fragment and is what the test suites compare against.

use std::collections::HashSet;

use thiserror::Error;

use crate::ident::{fresh_ident, Ident};
use crate::term::{Connective, Term};
use crate::theories::is_reserved;
use crate::types::{Signature, Type, TypeSignature};
use crate::typing::{check_type, typecheck, TypeError};

/// Which side of the sequent a premise sits on. Certificates encode this as
/// a Boolean: `true` for goals.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    Hyp,
    Goal,
}

impl Side {
    pub fn from_bool(is_goal: bool) -> Side {
        if is_goal {
            Side::Goal
        } else {
            Side::Hyp
        }
    }

    pub fn is_goal(self) -> bool {
        self == Side::Goal
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Hyp => Side::Goal,
            Side::Goal => Side::Hyp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Premise {
    pub name: Ident,
    pub formula: Term,
}

impl Premise {
    pub fn new(name: impl Into<Ident>, formula: Term) -> Self {
        Premise {
            name: name.into(),
            formula,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaskError {
    #[error("premise name `{0}` is used twice")]
    DuplicatePremise(Ident),
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(Ident),
    #[error("`{0}` is reserved by the interpreted theories")]
    Reserved(Ident),
    #[error("premise `{name}` is not a formula: {source}")]
    IllTyped { name: Ident, source: TypeError },
    #[error("premise `{name}` has type {found:?}, not prop")]
    NotProp { name: Ident, found: Type },
    #[error("declaration of `{name}`: {source}")]
    BadDeclaration { name: Ident, source: TypeError },
    #[error("chain tasks need at least one variable")]
    EmptyChain,
}

#[derive(Clone, Debug, Default)]
pub struct Task {
    pub types: TypeSignature,
    pub sig: Signature,
    pub hyps: Vec<Premise>,
    pub goals: Vec<Premise>,
}

impl PartialEq for Task {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq(other)
    }
}

impl Task {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn premises(&self, side: Side) -> &[Premise] {
        match side {
            Side::Hyp => &self.hyps,
            Side::Goal => &self.goals,
        }
    }

    fn premises_mut(&mut self, side: Side) -> &mut Vec<Premise> {
        match side {
            Side::Hyp => &mut self.hyps,
            Side::Goal => &mut self.goals,
        }
    }

    /// Finds a premise by name on either side.
    pub fn lookup(&self, name: &Ident) -> Option<(Side, &Term)> {
        self.get(Side::Hyp, name)
            .map(|t| (Side::Hyp, t))
            .or_else(|| self.get(Side::Goal, name).map(|t| (Side::Goal, t)))
    }

    pub fn get(&self, side: Side, name: &Ident) -> Option<&Term> {
        self.premises(side)
            .iter()
            .find(|p| &p.name == name)
            .map(|p| &p.formula)
    }

    pub fn has_premise(&self, name: &Ident) -> bool {
        self.lookup(name).is_some()
    }

    /// Replaces premise `name` in place by the given premises.
    pub fn replace(&self, side: Side, name: &Ident, by: Vec<Premise>) -> Task {
        let mut out = self.clone();
        let list = out.premises_mut(side);
        if let Some(pos) = list.iter().position(|p| &p.name == name) {
            list.splice(pos..=pos, by);
        }
        out
    }

    pub fn remove(&self, side: Side, name: &Ident) -> Task {
        self.replace(side, name, vec![])
    }

    pub fn add(&self, side: Side, premise: Premise) -> Task {
        let mut out = self.clone();
        out.premises_mut(side).push(premise);
        out
    }

    /// Moves premise `name` to the other side with a new formula, keeping its name.
    pub fn swap(&self, from: Side, name: &Ident, formula: Term) -> Task {
        self.remove(from, name)
            .add(from.flip(), Premise::new(name.clone(), formula))
    }

    pub fn with_symbol(&self, name: Ident, ty: Type) -> Task {
        let mut out = self.clone();
        out.sig.declare(name, ty);
        out
    }

    pub fn with_type_symbol(&self, name: Ident, arity: usize) -> Task {
        let mut out = self.clone();
        out.types.declare(name, arity);
        out
    }

    pub fn premise_names(&self) -> impl Iterator<Item = &Ident> {
        self.hyps.iter().chain(&self.goals).map(|p| &p.name)
    }

    /// Declared symbols plus free variables of every premise.
    pub fn free_idents(&self) -> HashSet<Ident> {
        let mut out: HashSet<Ident> = self.sig.iter().map(|(x, _)| x.clone()).collect();
        for p in self.hyps.iter().chain(&self.goals) {
            p.formula.collect_free_vars(&mut out);
        }
        out
    }

    /// Every identifier the task mentions in any namespace. Names outside
    /// this set are safe to introduce anywhere.
    pub fn all_idents(&self) -> HashSet<Ident> {
        let mut out = HashSet::new();
        for (s, _) in self.types.iter() {
            out.insert(s.clone());
        }
        for (x, ty) in self.sig.iter() {
            out.insert(x.clone());
            ty.idents(&mut out);
        }
        for p in self.hyps.iter().chain(&self.goals) {
            out.insert(p.name.clone());
            p.formula.collect_idents(&mut out);
        }
        out
    }

    pub fn fresh(&self, base: &Ident) -> Ident {
        fresh_ident(base, &self.all_idents())
    }

    /// Set-semantics comparison up to alpha-equivalence of formulas.
    pub fn alpha_eq(&self, other: &Task) -> bool {
        fn same(a: &[Premise], b: &[Premise]) -> bool {
            a.len() == b.len()
                && a.iter().all(|p| {
                    b.iter()
                        .find(|q| q.name == p.name)
                        .is_some_and(|q| q.formula == p.formula)
                })
        }
        self.types.same_entries(&other.types)
            && self.sig.same_entries(&other.sig)
            && same(&self.hyps, &other.hyps)
            && same(&self.goals, &other.goals)
    }

    /// Every premise formula has type `prop` under `I` and `Σ`.
    pub fn well_typed(&self) -> bool {
        self.hyps
            .iter()
            .chain(&self.goals)
            .all(|p| matches!(typecheck(&self.types, &self.sig, &p.formula), Ok(Type::Prop)))
    }

    /// Full well-formedness: reserved names, declarations, unique premise
    /// names, and every premise a formula.
    pub fn validate(&self) -> Result<(), TaskError> {
        for (s, _) in self.types.iter() {
            if is_reserved(s.name()) && s.id() == 0 {
                return Err(TaskError::Reserved(s.clone()));
            }
        }
        for (x, ty) in self.sig.iter() {
            if is_reserved(x.name()) && x.id() == 0 {
                return Err(TaskError::Reserved(x.clone()));
            }
            check_type(&self.types, ty, false).map_err(|source| TaskError::BadDeclaration {
                name: x.clone(),
                source,
            })?;
        }
        let mut seen = HashSet::new();
        for name in self.premise_names() {
            if !seen.insert(name.clone()) {
                return Err(TaskError::DuplicatePremise(name.clone()));
            }
        }
        for p in self.hyps.iter().chain(&self.goals) {
            match typecheck(&self.types, &self.sig, &p.formula) {
                Ok(Type::Prop) => {}
                Ok(found) => {
                    return Err(TaskError::NotProp {
                        name: p.name.clone(),
                        found,
                    })
                }
                Err(source) => {
                    return Err(TaskError::IllTyped {
                        name: p.name.clone(),
                        source,
                    })
                }
            }
        }
        Ok(())
    }
}

/// Largest number of atoms the oracle enumerates.
pub const ORACLE_MAX_ATOMS: usize = 20;

/// Truth-table validity for propositional tasks. `None` when the task uses
/// anything beyond prop-typed variables and the propositional connectives,
/// or has more than [`ORACLE_MAX_ATOMS`] atoms.
pub fn prop_valid_oracle(task: &Task) -> Option<bool> {
    let mut atoms: Vec<Ident> = Vec::new();
    for p in task.hyps.iter().chain(&task.goals) {
        collect_atoms(task, &p.formula, &mut atoms)?;
    }
    if atoms.len() > ORACLE_MAX_ATOMS {
        return None;
    }
    let rows: u64 = 1 << atoms.len();
    for row in 0..rows {
        let value = |x: &Ident| {
            let k = atoms.iter().position(|a| a == x).expect("atom collected");
            row >> k & 1 == 1
        };
        let hyps_hold = task.hyps.iter().all(|p| eval(&p.formula, &value));
        let some_goal = task.goals.iter().any(|p| eval(&p.formula, &value));
        if hyps_hold && !some_goal {
            return Some(false);
        }
    }
    Some(true)
}

fn collect_atoms(task: &Task, t: &Term, atoms: &mut Vec<Ident>) -> Option<()> {
    match t {
        Term::True | Term::False => Some(()),
        Term::Free(x, args) if args.is_empty() && task.sig.get(x) == Some(&Type::Prop) => {
            if !atoms.contains(x) {
                atoms.push(x.clone());
            }
            Some(())
        }
        Term::Not(a) => collect_atoms(task, a, atoms),
        Term::Binary(_, a, b) => {
            collect_atoms(task, a, atoms)?;
            collect_atoms(task, b, atoms)
        }
        _ => None,
    }
}

/// Evaluates a propositional formula; callers ensure the fragment.
pub fn eval(t: &Term, value: &impl Fn(&Ident) -> bool) -> bool {
    match t {
        Term::True => true,
        Term::False => false,
        Term::Free(x, _) => value(x),
        Term::Not(a) => !eval(a, value),
        Term::Binary(op, a, b) => {
            let (a, b) = (eval(a, value), eval(b, value));
            match op {
                Connective::And => a && b,
                Connective::Or => a || b,
                Connective::Imp => !a || b,
                Connective::Iff => a == b,
            }
        }
        _ => unreachable!("eval outside the propositional fragment"),
    }
}

/// `⊢ G : p₁ ⇒ (p₁ ⇒ p₂) ⇒ … ⇒ (pₙ₋₁ ⇒ pₙ) ⇒ pₙ` over `p₁ … pₙ : prop`.
pub fn gen_chain_task(n: usize) -> Result<Task, TaskError> {
    if n == 0 {
        return Err(TaskError::EmptyChain);
    }
    let atom = |i: usize| Term::var(&format!("p{i}"));
    let mut task = Task::new();
    for i in 1..=n {
        task.sig.declare(Ident::new(&format!("p{i}")), Type::Prop);
    }
    let mut premises = vec![atom(1)];
    premises.extend((2..=n).map(|i| Term::imp(atom(i - 1), atom(i))));
    let goal = premises
        .into_iter()
        .rev()
        .fold(atom(n), |acc, p| Term::imp(p, acc));
    task.goals.push(Premise::new("G", goal));
    Ok(task)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prop_task(atoms: &[&str]) -> Task {
        let mut t = Task::new();
        for a in atoms {
            t.sig.declare(Ident::new(a), Type::Prop);
        }
        t
    }

    #[test]
    fn empty_task_is_well_typed() {
        assert!(Task::new().well_typed());
    }

    #[test]
    fn disjunction_commutes_under_oracle() {
        let mut t = prop_task(&["x1", "x2"]);
        t.hyps.push(Premise::new("H", Term::or(Term::var("x1"), Term::var("x2"))));
        t.goals.push(Premise::new("G", Term::or(Term::var("x2"), Term::var("x1"))));
        assert_eq!(prop_valid_oracle(&t), Some(true));
    }

    #[test]
    fn falsity_goal_is_invalid() {
        let mut t = Task::new();
        t.goals.push(Premise::new("G", Term::False));
        assert_eq!(prop_valid_oracle(&t), Some(false));
    }

    #[test]
    fn oracle_refuses_quantifiers() {
        let mut t = Task::new();
        let x = Ident::new("x");
        t.goals.push(Premise::new("G", Term::forall(&x, Type::Prop, Term::free(&x))));
        assert_eq!(prop_valid_oracle(&t), None);
    }

    #[test]
    fn chain_shapes() {
        let one = gen_chain_task(1).unwrap();
        assert_eq!(one.goals[0].formula, Term::imp(Term::var("p1"), Term::var("p1")));
        let two = gen_chain_task(2).unwrap();
        assert_eq!(
            two.goals[0].formula,
            Term::imp(
                Term::var("p1"),
                Term::imp(Term::imp(Term::var("p1"), Term::var("p2")), Term::var("p2"))
            )
        );
        assert_eq!(gen_chain_task(0).unwrap_err(), TaskError::EmptyChain);
    }

    #[test]
    fn chain_tasks_are_valid() {
        for n in 1..=8 {
            let t = gen_chain_task(n).unwrap();
            assert_eq!(t.sig.len(), n);
            assert!(t.well_typed());
            assert_eq!(prop_valid_oracle(&t), Some(true), "n = {n}");
        }
    }

    #[test]
    fn task_equality_ignores_premise_order() {
        let mut a = prop_task(&["x"]);
        a.hyps.push(Premise::new("H1", Term::var("x")));
        a.hyps.push(Premise::new("H2", Term::True));
        let mut b = prop_task(&["x"]);
        b.hyps.push(Premise::new("H2", Term::True));
        b.hyps.push(Premise::new("H1", Term::var("x")));
        assert_eq!(a, b);
        b.hyps[0].name = Ident::new("H3");
        assert_ne!(a, b);
    }

    #[test]
    fn reserved_declarations_rejected() {
        let mut t = Task::new();
        t.types.declare(Ident::new("int"), 0);
        assert_eq!(t.validate(), Err(TaskError::Reserved(Ident::new("int"))));
    }
}
