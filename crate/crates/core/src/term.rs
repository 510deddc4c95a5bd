//! Object-language terms.
//!
//! Bound term variables are de Bruijn indices; binders keep their source
//! name only as a printing hint. Free variables and signature symbols are
//! named. Type variables bound by the prenex `Π` stay named, so type
//! substitution renames on capture.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::ident::{fresh_ident, Ident};
use crate::theories::Interp;
use crate::types::Type;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Connective {
    And,
    Or,
    Imp,
    Iff,
}

impl Connective {
    pub fn keyword(self) -> &'static str {
        match self {
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Imp => "imp",
            Connective::Iff => "iff",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BinderKind {
    Lam,
    Forall,
    Exists,
}

impl BinderKind {
    pub fn keyword(self) -> &'static str {
        match self {
            BinderKind::Lam => "lam",
            BinderKind::Forall => "forall",
            BinderKind::Exists => "exists",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Term {
    /// De Bruijn index; 0 is the innermost enclosing binder.
    Bound(u32),
    /// A named variable or signature symbol, with the type arguments that
    /// instantiate its scheme (in first-occurrence order of its type variables).
    Free(Ident, Vec<Type>),
    Interp(Interp, Vec<Type>),
    Int(BigInt),
    True,
    False,
    Not(Arc<Term>),
    Binary(Connective, Arc<Term>, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    /// `λ/∀/∃ hint:τ. body`, where index 0 in `body` is the bound variable.
    Binder(BinderKind, Ident, Type, Arc<Term>),
    /// Prenex type quantification `Πα. body`.
    TyAbs(Ident, Arc<Term>),
}

impl PartialEq for Term {
    /// Alpha-equivalence.
    fn eq(&self, other: &Self) -> bool {
        alpha_equal(self, other)
    }
}

impl Eq for Term {}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Free(Ident::from(name), vec![])
    }

    pub fn free(x: &Ident) -> Term {
        Term::Free(x.clone(), vec![])
    }

    pub fn int(n: i64) -> Term {
        Term::Int(BigInt::from(n))
    }

    pub fn not(t: Term) -> Term {
        Term::Not(Arc::new(t))
    }

    pub fn binary(op: Connective, a: Term, b: Term) -> Term {
        Term::Binary(op, Arc::new(a), Arc::new(b))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::binary(Connective::And, a, b)
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::binary(Connective::Or, a, b)
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::binary(Connective::Imp, a, b)
    }

    pub fn iff(a: Term, b: Term) -> Term {
        Term::binary(Connective::Iff, a, b)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn eq(ty: Type, a: Term, b: Term) -> Term {
        Term::apps(Term::Interp(Interp::Eq, vec![ty]), [a, b])
    }

    /// Binds the free variable `x` in `body`.
    pub fn bind(kind: BinderKind, x: &Ident, ty: Type, body: Term) -> Term {
        Term::Binder(kind, x.clone(), ty, Arc::new(body.close(x)))
    }

    pub fn lam(x: &Ident, ty: Type, body: Term) -> Term {
        Term::bind(BinderKind::Lam, x, ty, body)
    }

    pub fn forall(x: &Ident, ty: Type, body: Term) -> Term {
        Term::bind(BinderKind::Forall, x, ty, body)
    }

    pub fn exists(x: &Ident, ty: Type, body: Term) -> Term {
        Term::bind(BinderKind::Exists, x, ty, body)
    }

    pub fn pi(alpha: &Ident, body: Term) -> Term {
        Term::TyAbs(alpha.clone(), Arc::new(body))
    }

    /// Replaces index 0 (relative to this body) with the locally closed `u`.
    pub fn open(&self, u: &Term) -> Term {
        self.open_at(0, u)
    }

    fn open_at(&self, k: u32, u: &Term) -> Term {
        match self {
            Term::Bound(i) if *i == k => u.clone(),
            Term::Bound(_)
            | Term::Free(..)
            | Term::Interp(..)
            | Term::Int(_)
            | Term::True
            | Term::False => self.clone(),
            Term::Not(t) => Term::not(t.open_at(k, u)),
            Term::Binary(op, a, b) => Term::binary(*op, a.open_at(k, u), b.open_at(k, u)),
            Term::App(f, a) => Term::app(f.open_at(k, u), a.open_at(k, u)),
            Term::Binder(kind, x, ty, body) => {
                Term::Binder(*kind, x.clone(), ty.clone(), Arc::new(body.open_at(k + 1, u)))
            }
            Term::TyAbs(a, body) => Term::TyAbs(a.clone(), Arc::new(body.open_at(k, u))),
        }
    }

    /// Abstracts the free variable `x` into index 0 of a new binder body.
    pub fn close(&self, x: &Ident) -> Term {
        self.close_at(0, x)
    }

    fn close_at(&self, k: u32, x: &Ident) -> Term {
        match self {
            Term::Free(y, args) if y == x && args.is_empty() => Term::Bound(k),
            Term::Bound(_)
            | Term::Free(..)
            | Term::Interp(..)
            | Term::Int(_)
            | Term::True
            | Term::False => self.clone(),
            Term::Not(t) => Term::not(t.close_at(k, x)),
            Term::Binary(op, a, b) => Term::binary(*op, a.close_at(k, x), b.close_at(k, x)),
            Term::App(f, a) => Term::app(f.close_at(k, x), a.close_at(k, x)),
            Term::Binder(kind, h, ty, body) => {
                Term::Binder(*kind, h.clone(), ty.clone(), Arc::new(body.close_at(k + 1, x)))
            }
            Term::TyAbs(a, body) => Term::TyAbs(a.clone(), Arc::new(body.close_at(k, x))),
        }
    }

    /// Abstracts every occurrence of the locally closed subterm `pat` into a
    /// new binder body. Returns the body and the number of occurrences.
    pub fn abstract_subterm(&self, pat: &Term) -> (Term, usize) {
        let mut count = 0;
        let body = self.abstract_at(0, pat, &mut count);
        (body, count)
    }

    fn abstract_at(&self, k: u32, pat: &Term, count: &mut usize) -> Term {
        if self.is_closed_at(k) && alpha_equal(self, pat) {
            *count += 1;
            return Term::Bound(k);
        }
        match self {
            Term::Bound(_)
            | Term::Free(..)
            | Term::Interp(..)
            | Term::Int(_)
            | Term::True
            | Term::False => self.clone(),
            Term::Not(t) => Term::not(t.abstract_at(k, pat, count)),
            Term::Binary(op, a, b) => {
                Term::binary(*op, a.abstract_at(k, pat, count), b.abstract_at(k, pat, count))
            }
            Term::App(f, a) => Term::app(f.abstract_at(k, pat, count), a.abstract_at(k, pat, count)),
            Term::Binder(kind, h, ty, body) => Term::Binder(
                *kind,
                h.clone(),
                ty.clone(),
                Arc::new(body.abstract_at(k + 1, pat, count)),
            ),
            Term::TyAbs(a, body) => Term::TyAbs(a.clone(), Arc::new(body.abstract_at(k, pat, count))),
        }
    }

    /// Whether no index refers outside `depth` enclosing binders.
    fn is_closed_at(&self, depth: u32) -> bool {
        match self {
            Term::Bound(i) => *i < depth,
            Term::Free(..) | Term::Interp(..) | Term::Int(_) | Term::True | Term::False => true,
            Term::Not(t) => t.is_closed_at(depth),
            Term::Binary(_, a, b) | Term::App(a, b) => a.is_closed_at(depth) && b.is_closed_at(depth),
            Term::Binder(_, _, _, body) => body.is_closed_at(depth + 1),
            Term::TyAbs(_, body) => body.is_closed_at(depth),
        }
    }

    /// Whether the term has no dangling de Bruijn index.
    pub fn is_locally_closed(&self) -> bool {
        self.is_closed_at(0)
    }

    /// Whether index 0 of this binder body is used.
    pub fn uses_bound0(&self) -> bool {
        !self.is_closed_at_excluding(0)
    }

    fn is_closed_at_excluding(&self, k: u32) -> bool {
        match self {
            Term::Bound(i) => *i != k,
            Term::Free(..) | Term::Interp(..) | Term::Int(_) | Term::True | Term::False => true,
            Term::Not(t) => t.is_closed_at_excluding(k),
            Term::Binary(_, a, b) | Term::App(a, b) => {
                a.is_closed_at_excluding(k) && b.is_closed_at_excluding(k)
            }
            Term::Binder(_, _, _, body) => body.is_closed_at_excluding(k + 1),
            Term::TyAbs(_, body) => body.is_closed_at_excluding(k),
        }
    }

    /// Free term variables (signature symbols included).
    pub fn free_vars(&self) -> HashSet<Ident> {
        let mut out = HashSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn collect_free_vars(&self, out: &mut HashSet<Ident>) {
        match self {
            Term::Free(x, _) => {
                out.insert(x.clone());
            }
            Term::Bound(_) | Term::Interp(..) | Term::Int(_) | Term::True | Term::False => {}
            Term::Not(t) => t.collect_free_vars(out),
            Term::Binary(_, a, b) | Term::App(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Term::Binder(_, _, _, body) | Term::TyAbs(_, body) => body.collect_free_vars(out),
        }
    }

    pub fn mentions(&self, x: &Ident) -> bool {
        match self {
            Term::Free(y, _) => y == x,
            Term::Bound(_) | Term::Interp(..) | Term::Int(_) | Term::True | Term::False => false,
            Term::Not(t) => t.mentions(x),
            Term::Binary(_, a, b) | Term::App(a, b) => a.mentions(x) || b.mentions(x),
            Term::Binder(_, _, _, body) | Term::TyAbs(_, body) => body.mentions(x),
        }
    }

    /// Every identifier appearing anywhere: free variables, binder hints,
    /// type variables and type symbols.
    pub fn collect_idents(&self, out: &mut HashSet<Ident>) {
        match self {
            Term::Free(x, args) => {
                out.insert(x.clone());
                args.iter().for_each(|t| t.idents(out));
            }
            Term::Interp(_, args) => args.iter().for_each(|t| t.idents(out)),
            Term::Bound(_) | Term::Int(_) | Term::True | Term::False => {}
            Term::Not(t) => t.collect_idents(out),
            Term::Binary(_, a, b) | Term::App(a, b) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
            Term::Binder(_, h, ty, body) => {
                out.insert(h.clone());
                ty.idents(out);
                body.collect_idents(out);
            }
            Term::TyAbs(a, body) => {
                out.insert(a.clone());
                body.collect_idents(out);
            }
        }
    }

    /// Free type variables (those not bound by an enclosing `Π`).
    pub fn free_type_vars(&self) -> HashSet<Ident> {
        let mut out = HashSet::new();
        self.collect_ftv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_ftv(&self, bound: &mut Vec<Ident>, out: &mut HashSet<Ident>) {
        let add_ty = |ty: &Type, out: &mut HashSet<Ident>| {
            for v in ty.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Term::Free(_, args) | Term::Interp(_, args) => args.iter().for_each(|t| add_ty(t, out)),
            Term::Bound(_) | Term::Int(_) | Term::True | Term::False => {}
            Term::Not(t) => t.collect_ftv(bound, out),
            Term::Binary(_, a, b) | Term::App(a, b) => {
                a.collect_ftv(bound, out);
                b.collect_ftv(bound, out);
            }
            Term::Binder(_, _, ty, body) => {
                add_ty(ty, out);
                body.collect_ftv(bound, out);
            }
            Term::TyAbs(a, body) => {
                bound.push(a.clone());
                body.collect_ftv(bound, out);
                bound.pop();
            }
        }
    }

    /// Type symbols occurring in annotations and instances.
    pub fn collect_type_symbols(&self, out: &mut HashSet<Ident>) {
        match self {
            Term::Free(_, args) | Term::Interp(_, args) => args.iter().for_each(|t| t.symbols(out)),
            Term::Bound(_) | Term::Int(_) | Term::True | Term::False => {}
            Term::Not(t) => t.collect_type_symbols(out),
            Term::Binary(_, a, b) | Term::App(a, b) => {
                a.collect_type_symbols(out);
                b.collect_type_symbols(out);
            }
            Term::Binder(_, _, ty, body) => {
                ty.symbols(out);
                body.collect_type_symbols(out);
            }
            Term::TyAbs(_, body) => body.collect_type_symbols(out),
        }
    }

    /// Whether a `Π` occurs anywhere in the term.
    pub fn has_type_quantifier(&self) -> bool {
        match self {
            Term::TyAbs(..) => true,
            Term::Bound(_) | Term::Free(..) | Term::Interp(..) | Term::Int(_) | Term::True | Term::False => {
                false
            }
            Term::Not(t) => t.has_type_quantifier(),
            Term::Binary(_, a, b) | Term::App(a, b) => a.has_type_quantifier() || b.has_type_quantifier(),
            Term::Binder(_, _, _, body) => body.has_type_quantifier(),
        }
    }

    /// `Π` occurs only as a prefix of the term.
    pub fn is_prenex(&self) -> bool {
        match self {
            Term::TyAbs(_, body) => body.is_prenex(),
            other => !other.has_type_quantifier(),
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f.as_ref();
        }
        args.reverse();
        (cur, args)
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Bound(_) | Term::Free(..) | Term::Interp(..) | Term::Int(_) | Term::True | Term::False => 1,
            Term::Not(t) => 1 + t.size(),
            Term::Binary(_, a, b) | Term::App(a, b) => 1 + a.size() + b.size(),
            Term::Binder(_, _, _, body) | Term::TyAbs(_, body) => 1 + body.size(),
        }
    }
}

/// `t[x ↦ u]`. Capture cannot happen: bound variables are indices and
/// `u` is expected to be locally closed.
pub fn subst_term(t: &Term, x: &Ident, u: &Term) -> Term {
    match t {
        Term::Free(y, _) if y == x => u.clone(),
        Term::Bound(_) | Term::Free(..) | Term::Interp(..) | Term::Int(_) | Term::True | Term::False => t.clone(),
        Term::Not(a) => Term::not(subst_term(a, x, u)),
        Term::Binary(op, a, b) => Term::binary(*op, subst_term(a, x, u), subst_term(b, x, u)),
        Term::App(f, a) => Term::app(subst_term(f, x, u), subst_term(a, x, u)),
        Term::Binder(kind, h, ty, body) => {
            Term::Binder(*kind, h.clone(), ty.clone(), Arc::new(subst_term(body, x, u)))
        }
        Term::TyAbs(a, body) => Term::TyAbs(a.clone(), Arc::new(subst_term(body, x, u))),
    }
}

/// `t[α ↦ τ]` on every annotation and instance. A `Π` binding a type
/// variable of `τ` is renamed first.
pub fn subst_type(t: &Term, alpha: &Ident, by: &Type) -> Term {
    match t {
        Term::Free(x, args) => Term::Free(x.clone(), args.iter().map(|a| a.subst(alpha, by)).collect()),
        Term::Interp(op, args) => Term::Interp(*op, args.iter().map(|a| a.subst(alpha, by)).collect()),
        Term::Bound(_) | Term::Int(_) | Term::True | Term::False => t.clone(),
        Term::Not(a) => Term::not(subst_type(a, alpha, by)),
        Term::Binary(op, a, b) => Term::binary(*op, subst_type(a, alpha, by), subst_type(b, alpha, by)),
        Term::App(f, a) => Term::app(subst_type(f, alpha, by), subst_type(a, alpha, by)),
        Term::Binder(kind, h, ty, body) => Term::Binder(
            *kind,
            h.clone(),
            ty.subst(alpha, by),
            Arc::new(subst_type(body, alpha, by)),
        ),
        Term::TyAbs(beta, body) => {
            if beta == alpha {
                return t.clone();
            }
            if by.vars().contains(beta) {
                let mut avoid = HashSet::new();
                body.collect_idents(&mut avoid);
                by.idents(&mut avoid);
                avoid.insert(alpha.clone());
                let fresh = fresh_ident(beta, &avoid);
                let renamed = subst_type(body, beta, &Type::Var(fresh.clone()));
                Term::TyAbs(fresh, Arc::new(subst_type(&renamed, alpha, by)))
            } else {
                Term::TyAbs(beta.clone(), Arc::new(subst_type(body, alpha, by)))
            }
        }
    }
}

/// Equality up to renaming of bound term and type variables.
pub fn alpha_equal(t1: &Term, t2: &Term) -> bool {
    alpha_eq_in(t1, t2, &mut Vec::new())
}

fn alpha_eq_in(t1: &Term, t2: &Term, tyenv: &mut Vec<(Ident, Ident)>) -> bool {
    // Shared subterms are common after rule applications.
    if std::ptr::eq(t1, t2) && tyenv.iter().all(|(a, b)| a == b) {
        return true;
    }
    match (t1, t2) {
        (Term::Bound(i), Term::Bound(j)) => i == j,
        (Term::Free(x, xs), Term::Free(y, ys)) => x == y && types_eq(xs, ys, tyenv),
        (Term::Interp(a, xs), Term::Interp(b, ys)) => a == b && types_eq(xs, ys, tyenv),
        (Term::Int(a), Term::Int(b)) => a == b,
        (Term::True, Term::True) | (Term::False, Term::False) => true,
        (Term::Not(a), Term::Not(b)) => alpha_eq_in(a, b, tyenv),
        (Term::Binary(o1, a1, b1), Term::Binary(o2, a2, b2)) => {
            o1 == o2 && alpha_eq_in(a1, a2, tyenv) && alpha_eq_in(b1, b2, tyenv)
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => alpha_eq_in(f1, f2, tyenv) && alpha_eq_in(a1, a2, tyenv),
        (Term::Binder(k1, _, ty1, b1), Term::Binder(k2, _, ty2, b2)) => {
            k1 == k2 && type_eq(ty1, ty2, tyenv) && alpha_eq_in(b1, b2, tyenv)
        }
        (Term::TyAbs(a, b1), Term::TyAbs(b, b2)) => {
            tyenv.push((a.clone(), b.clone()));
            let res = alpha_eq_in(b1, b2, tyenv);
            tyenv.pop();
            res
        }
        _ => false,
    }
}

fn types_eq(xs: &[Type], ys: &[Type], env: &[(Ident, Ident)]) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| type_eq(a, b, env))
}

fn type_eq(t1: &Type, t2: &Type, env: &[(Ident, Ident)]) -> bool {
    match (t1, t2) {
        (Type::Var(a), Type::Var(b)) => {
            for (l, r) in env.iter().rev() {
                if l == a || r == b {
                    return l == a && r == b;
                }
            }
            a == b
        }
        (Type::Prop, Type::Prop) | (Type::Int, Type::Int) => true,
        (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => type_eq(a1, a2, env) && type_eq(b1, b2, env),
        (Type::App(s1, xs), Type::App(s2, ys)) => s1 == s2 && types_eq(xs, ys, env),
        _ => false,
    }
}
