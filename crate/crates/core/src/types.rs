//! Object-language types and the two signatures a task is written in.

use std::collections::HashSet;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::ident::Ident;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Type {
    Var(Ident),
    Prop,
    /// The interpreted integer type.
    Int,
    Arrow(Arc<Type>, Arc<Type>),
    /// A type symbol applied to exactly its declared arity.
    App(Ident, Vec<Type>),
}

impl Type {
    pub fn var(name: &str) -> Type {
        Type::Var(Ident::from(name))
    }

    pub fn sym(name: &str, args: Vec<Type>) -> Type {
        Type::App(Ident::from(name), args)
    }

    pub fn arrow(from: Type, to: Type) -> Type {
        Type::Arrow(Arc::new(from), Arc::new(to))
    }

    /// Right-nested arrow `a₁ ⇝ … ⇝ aₙ ⇝ result`.
    pub fn arrows(args: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, a| Type::arrow(a, acc))
    }

    pub fn has_vars(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Prop | Type::Int => false,
            Type::Arrow(a, b) => a.has_vars() || b.has_vars(),
            Type::App(_, args) => args.iter().any(Type::has_vars),
        }
    }

    /// Type variables in order of first occurrence, without repeats.
    pub fn vars(&self) -> Vec<Ident> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Ident>) {
        match self {
            Type::Var(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Type::Prop | Type::Int => {}
            Type::Arrow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Type::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    /// Type symbols occurring in the type.
    pub fn symbols(&self, out: &mut HashSet<Ident>) {
        match self {
            Type::Var(_) | Type::Prop | Type::Int => {}
            Type::Arrow(a, b) => {
                a.symbols(out);
                b.symbols(out);
            }
            Type::App(s, args) => {
                out.insert(s.clone());
                args.iter().for_each(|t| t.symbols(out));
            }
        }
    }

    /// Every identifier in the type, variables and symbols alike.
    pub fn idents(&self, out: &mut HashSet<Ident>) {
        self.symbols(out);
        out.extend(self.vars());
    }

    pub fn subst(&self, var: &Ident, by: &Type) -> Type {
        match self {
            Type::Var(a) if a == var => by.clone(),
            Type::Var(_) | Type::Prop | Type::Int => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.subst(var, by), b.subst(var, by)),
            Type::App(s, args) => Type::App(s.clone(), args.iter().map(|t| t.subst(var, by)).collect()),
        }
    }

    /// Simultaneous substitution of type variables.
    pub fn subst_many(&self, map: &[(Ident, Type)]) -> Type {
        match self {
            Type::Var(a) => map
                .iter()
                .find(|(v, _)| v == a)
                .map(|(_, t)| t.clone())
                .unwrap_or_else(|| self.clone()),
            Type::Prop | Type::Int => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.subst_many(map), b.subst_many(map)),
            Type::App(s, args) => Type::App(s.clone(), args.iter().map(|t| t.subst_many(map)).collect()),
        }
    }

    /// Splits `a₁ ⇝ … ⇝ aₙ ⇝ r` with `r` not an arrow.
    pub fn uncurry(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Type::Arrow(a, b) = cur {
            args.push(a.as_ref());
            cur = b.as_ref();
        }
        (args, cur)
    }

    /// Whether values of this type are individuals rather than predicates,
    /// i.e. `prop` does not occur in it.
    pub fn is_small(&self) -> bool {
        match self {
            Type::Prop => false,
            Type::Var(_) | Type::Int => true,
            Type::Arrow(a, b) => a.is_small() && b.is_small(),
            Type::App(_, args) => args.iter().all(Type::is_small),
        }
    }
}

/// Declared type symbols with their arities, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeSignature(Arc<IndexMap<Ident, usize>>);

impl TypeSignature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false (and leaves the signature unchanged) on redeclaration.
    pub fn declare(&mut self, sym: Ident, arity: usize) -> bool {
        if self.0.contains_key(&sym) {
            return false;
        }
        Arc::make_mut(&mut self.0).insert(sym, arity);
        true
    }

    pub fn arity(&self, sym: &Ident) -> Option<usize> {
        self.0.get(sym).copied()
    }

    pub fn contains(&self, sym: &Ident) -> bool {
        self.0.contains_key(sym)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, usize)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn same_entries(&self, other: &TypeSignature) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || self.0.len() == other.0.len() && self.0.iter().all(|(k, v)| other.0.get(k) == Some(v))
    }
}

/// Declared term symbols with their (implicitly generalized) types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature(Arc<IndexMap<Ident, Type>>);

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, sym: Ident, ty: Type) -> bool {
        if self.0.contains_key(&sym) {
            return false;
        }
        Arc::make_mut(&mut self.0).insert(sym, ty);
        true
    }

    pub fn get(&self, sym: &Ident) -> Option<&Type> {
        self.0.get(sym)
    }

    pub fn contains(&self, sym: &Ident) -> bool {
        self.0.contains_key(sym)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, &Type)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn same_entries(&self, other: &Signature) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || self.0.len() == other.0.len() && self.0.iter().all(|(k, v)| other.0.get(k) == Some(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vars_in_first_occurrence_order() {
        let t = Type::arrows(
            [Type::var("b"), Type::sym("set", vec![Type::var("a")])],
            Type::var("b"),
        );
        assert_eq!(t.vars(), vec![Ident::new("b"), Ident::new("a")]);
    }

    #[test]
    fn redeclaration_is_refused() {
        let mut sig = TypeSignature::new();
        assert!(sig.declare(Ident::new("color"), 0));
        assert!(!sig.declare(Ident::new("color"), 1));
        assert_eq!(sig.arity(&Ident::new("color")), Some(0));
    }

    #[test]
    fn smallness() {
        assert!(Type::arrow(Type::Int, Type::sym("color", vec![])).is_small());
        assert!(!Type::arrow(Type::Int, Type::Prop).is_small());
    }
}
