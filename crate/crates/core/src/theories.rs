//! Interpreted symbols: polymorphic equality and integer arithmetic.
//!
//! These never appear in a task's signatures. Their typing comes from the
//! fixed table here, and task construction refuses to redeclare them.

use std::fmt;

use thiserror::Error;

use crate::ident::Ident;
use crate::term::{BinderKind, Term};
use crate::types::Type;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Interp {
    Eq,
    Add,
    Mul,
    Sub,
    Lt,
    Le,
    Gt,
    Ge,
}

pub const ALL_INTERP: [Interp; 8] = [
    Interp::Eq,
    Interp::Add,
    Interp::Mul,
    Interp::Sub,
    Interp::Lt,
    Interp::Le,
    Interp::Gt,
    Interp::Ge,
];

/// Reserved type symbol names.
pub const RESERVED_TYPES: [&str; 2] = ["int", "prop"];

impl Interp {
    pub fn symbol(self) -> &'static str {
        match self {
            Interp::Eq => "=",
            Interp::Add => "+",
            Interp::Mul => "*",
            Interp::Sub => "-",
            Interp::Lt => "<",
            Interp::Le => "<=",
            Interp::Gt => ">",
            Interp::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Interp> {
        ALL_INTERP.iter().copied().find(|i| i.symbol() == s)
    }

    /// Number of type parameters.
    pub fn type_params(self) -> usize {
        match self {
            Interp::Eq => 1,
            _ => 0,
        }
    }

    /// The type scheme; equality is quantified over `a`.
    pub fn scheme(self) -> Type {
        match self {
            Interp::Eq => Type::arrows([Type::var("a"), Type::var("a")], Type::Prop),
            Interp::Add | Interp::Mul | Interp::Sub => Type::arrows([Type::Int, Type::Int], Type::Int),
            Interp::Lt | Interp::Le | Interp::Gt | Interp::Ge => Type::arrows([Type::Int, Type::Int], Type::Prop),
        }
    }

    /// The scheme instantiated at `args` (no check on their count).
    pub fn instance(self, args: &[Type]) -> Type {
        match (self, args) {
            (Interp::Eq, [ty]) => Type::arrows([ty.clone(), ty.clone()], Type::Prop),
            _ => self.scheme(),
        }
    }
}

impl fmt::Display for Interp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A symbol from the fixed interpreted table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpretedSymbol {
    pub symbol: Interp,
    pub scheme: Type,
    pub polymorphic: bool,
}

pub fn lookup_interpreted(name: &str) -> Option<InterpretedSymbol> {
    Interp::from_symbol(name).map(|symbol| InterpretedSymbol {
        symbol,
        scheme: symbol.scheme(),
        polymorphic: symbol.type_params() > 0,
    })
}

/// Whether `name` is claimed by the interpreted theories, as a term or type.
pub fn is_reserved(name: &str) -> bool {
    Interp::from_symbol(name).is_some() || RESERVED_TYPES.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("rewriting context is not a lambda abstraction")]
    NotLambda,
    #[error("context expects an argument of type {expected:?}, found {found:?}")]
    TypeMismatch { expected: Type, found: Type },
}

/// `t[u]` for a context `t = λx:τ. body`: the single beta step `body[x ↦ u]`.
///
/// `arg_type`, when given, is checked against the binder annotation.
pub fn apply_context(ctx: &Term, arg: &Term, arg_type: Option<&Type>) -> Result<Term, ContextError> {
    match ctx {
        Term::Binder(BinderKind::Lam, _, ty, body) => {
            if let Some(found) = arg_type {
                if found != ty {
                    return Err(ContextError::TypeMismatch {
                        expected: ty.clone(),
                        found: found.clone(),
                    });
                }
            }
            Ok(body.open(arg))
        }
        _ => Err(ContextError::NotLambda),
    }
}

/// `i ≤ a` and friends, as applied interpreted constants.
pub fn compare(op: Interp, a: Term, b: Term) -> Term {
    Term::apps(Term::Interp(op, vec![]), [a, b])
}

pub fn arith(op: Interp, a: Term, b: Term) -> Term {
    Term::apps(Term::Interp(op, vec![]), [a, b])
}

/// Recognizes `a = b`, returning the equality's type and both sides.
pub fn as_equality(t: &Term) -> Option<(&Type, &Term, &Term)> {
    if let Term::App(f, rhs) = t {
        if let Term::App(g, lhs) = f.as_ref() {
            if let Term::Interp(Interp::Eq, args) = g.as_ref() {
                if let [ty] = args.as_slice() {
                    return Some((ty, lhs, rhs));
                }
            }
        }
    }
    None
}

/// The identifier spelled like an interpreted symbol, for diagnostics.
pub fn interp_ident(op: Interp) -> Ident {
    Ident::new(op.symbol())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    #[test]
    fn lookup_equality_is_polymorphic() {
        let eq = lookup_interpreted("=").unwrap();
        assert!(eq.polymorphic);
        assert_eq!(eq.scheme, Type::arrows([Type::var("a"), Type::var("a")], Type::Prop));
    }

    #[test]
    fn lookup_plus() {
        let plus = lookup_interpreted("+").unwrap();
        assert!(!plus.polymorphic);
        assert_eq!(plus.scheme, Type::arrows([Type::Int, Type::Int], Type::Int));
    }

    #[test]
    fn lookup_user_symbol() {
        assert!(lookup_interpreted("mem").is_none());
    }

    #[test]
    fn apply_context_beta_reduces() {
        let x = Ident::new("x");
        let ctx = Term::lam(&x, Type::Int, Term::app(Term::var("p"), Term::Free(x.clone(), vec![])));
        let out = apply_context(&ctx, &Term::int(3), Some(&Type::Int)).unwrap();
        assert_eq!(out, Term::app(Term::var("p"), Term::int(3)));
    }

    #[test]
    fn apply_context_reflexive_equality() {
        let x = Ident::new("x");
        let xv = Term::Free(x.clone(), vec![]);
        let ctx = Term::lam(&x, Type::Int, Term::eq(Type::Int, xv.clone(), xv));
        let out = apply_context(&ctx, &Term::var("a"), None).unwrap();
        assert_eq!(out, Term::eq(Type::Int, Term::var("a"), Term::var("a")));
    }

    #[test]
    fn apply_context_rejects_non_lambda_and_mismatch() {
        assert_eq!(
            apply_context(&Term::True, &Term::int(0), None),
            Err(ContextError::NotLambda)
        );
        let x = Ident::new("x");
        let ctx = Term::lam(&x, Type::Int, Term::True);
        assert!(matches!(
            apply_context(&ctx, &Term::True, Some(&Type::Prop)),
            Err(ContextError::TypeMismatch { .. })
        ));
    }
}
