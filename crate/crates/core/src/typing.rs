//! The typing judgment `I | Σ ⊢ t : τ`.
//!
//! Checking is explicit: binders are annotated and every occurrence of a
//! polymorphic symbol carries its instance, so no unification happens here.

use std::collections::HashSet;

use thiserror::Error;

use crate::ident::{fresh_ident, Ident};
use crate::term::{subst_type, Term};
use crate::theories::RESERVED_TYPES;
use crate::types::{Signature, Type, TypeSignature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Ident),
    #[error("unknown type symbol `{0}`")]
    UnknownTypeSymbol(Ident),
    #[error("type symbol `{sym}` expects {expected} argument(s), got {found}")]
    ArityMismatch { sym: Ident, expected: usize, found: usize },
    #[error("`{sym}` expects {expected} type argument(s), got {found}")]
    InstanceArity { sym: String, expected: usize, found: usize },
    #[error("type `{0:?}` contains type variables")]
    TypeHasVariables(Type),
    #[error("applying a term of non-arrow type {0:?}")]
    NotAFunction(Type),
    #[error("argument has type {found:?}, expected {expected:?}")]
    Mismatch { expected: Type, found: Type },
    #[error("type quantifier outside prenex position")]
    NonPrenex,
    #[error("dangling bound variable index {0}")]
    DanglingIndex(u32),
}

/// Checks `t` against `I` and `Σ`, returning its type.
pub fn typecheck(types: &TypeSignature, sig: &Signature, t: &Term) -> Result<Type, TypeError> {
    let mut cx = Checker {
        types,
        sig,
        local_types: Vec::new(),
        bound: Vec::new(),
    };
    cx.check(t, true)
}

/// Whether `I | Σ ⊢ t : prop`.
pub fn is_formula(types: &TypeSignature, sig: &Signature, t: &Term) -> bool {
    matches!(typecheck(types, sig, t), Ok(Type::Prop))
}

/// Checks that `ty` is well formed under `I`; with `ground`, also that it
/// has no type variables.
pub fn check_type(types: &TypeSignature, ty: &Type, ground: bool) -> Result<(), TypeError> {
    well_formed(types, &[], ty, ground)
}

fn well_formed(types: &TypeSignature, extra: &[Ident], ty: &Type, ground: bool) -> Result<(), TypeError> {
    match ty {
        Type::Var(_) if ground => Err(TypeError::TypeHasVariables(ty.clone())),
        Type::Var(_) | Type::Prop | Type::Int => Ok(()),
        Type::Arrow(a, b) => {
            well_formed(types, extra, a, ground)?;
            well_formed(types, extra, b, ground)
        }
        Type::App(sym, args) => {
            let arity = if extra.contains(sym) {
                0
            } else {
                types
                    .arity(sym)
                    .ok_or_else(|| TypeError::UnknownTypeSymbol(sym.clone()))?
            };
            if arity != args.len() {
                return Err(TypeError::ArityMismatch {
                    sym: sym.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            args.iter().try_for_each(|a| well_formed(types, extra, a, ground))
        }
    }
}

struct Checker<'a> {
    types: &'a TypeSignature,
    sig: &'a Signature,
    /// Arity-0 symbols introduced while checking `Π` bodies.
    local_types: Vec<Ident>,
    /// Types of the enclosing binders, innermost last.
    bound: Vec<Type>,
}

impl Checker<'_> {
    fn ground(&self, ty: &Type) -> Result<(), TypeError> {
        well_formed(self.types, &self.local_types, ty, true)
    }

    fn instantiate(&self, name: String, scheme: &Type, args: &[Type]) -> Result<Type, TypeError> {
        let vars = scheme.vars();
        if vars.len() != args.len() {
            return Err(TypeError::InstanceArity {
                sym: name,
                expected: vars.len(),
                found: args.len(),
            });
        }
        for a in args {
            self.ground(a)?;
        }
        let map: Vec<(Ident, Type)> = vars.into_iter().zip(args.iter().cloned()).collect();
        Ok(scheme.subst_many(&map))
    }

    fn expect_prop(&mut self, t: &Term) -> Result<(), TypeError> {
        match self.check(t, false)? {
            Type::Prop => Ok(()),
            other => Err(TypeError::Mismatch {
                expected: Type::Prop,
                found: other,
            }),
        }
    }

    fn check(&mut self, t: &Term, prenex: bool) -> Result<Type, TypeError> {
        match t {
            Term::TyAbs(alpha, body) => {
                if !prenex {
                    return Err(TypeError::NonPrenex);
                }
                // Replace α by a fresh arity-0 symbol ι ∉ I.
                let mut avoid: HashSet<Ident> = self.types.iter().map(|(s, _)| s.clone()).collect();
                avoid.extend(self.local_types.iter().cloned());
                avoid.extend(RESERVED_TYPES.iter().map(|s| Ident::new(s)));
                body.collect_type_symbols(&mut avoid);
                let iota = fresh_ident(alpha, &avoid);
                let opened = subst_type(body, alpha, &Type::App(iota.clone(), vec![]));
                self.local_types.push(iota);
                let res = self.check(&opened, true);
                self.local_types.pop();
                match res? {
                    Type::Prop => Ok(Type::Prop),
                    other => Err(TypeError::Mismatch {
                        expected: Type::Prop,
                        found: other,
                    }),
                }
            }
            Term::Bound(i) => {
                let idx = self.bound.len().checked_sub(1 + *i as usize);
                idx.map(|k| self.bound[k].clone())
                    .ok_or(TypeError::DanglingIndex(*i))
            }
            Term::Free(x, args) => {
                let scheme = self
                    .sig
                    .get(x)
                    .ok_or_else(|| TypeError::UnboundVariable(x.clone()))?;
                self.instantiate(x.to_string(), scheme, args)
            }
            Term::Interp(op, args) => {
                if args.len() != op.type_params() {
                    return Err(TypeError::InstanceArity {
                        sym: op.symbol().to_string(),
                        expected: op.type_params(),
                        found: args.len(),
                    });
                }
                for a in args {
                    self.ground(a)?;
                }
                Ok(op.instance(args))
            }
            Term::Int(_) => Ok(Type::Int),
            Term::True | Term::False => Ok(Type::Prop),
            Term::Not(a) => {
                self.expect_prop(a)?;
                Ok(Type::Prop)
            }
            Term::Binary(_, a, b) => {
                self.expect_prop(a)?;
                self.expect_prop(b)?;
                Ok(Type::Prop)
            }
            Term::App(f, a) => {
                let fty = self.check(f, false)?;
                let Type::Arrow(dom, cod) = fty else {
                    return Err(TypeError::NotAFunction(fty));
                };
                let aty = self.check(a, false)?;
                if aty != *dom {
                    return Err(TypeError::Mismatch {
                        expected: dom.as_ref().clone(),
                        found: aty,
                    });
                }
                Ok(cod.as_ref().clone())
            }
            Term::Binder(kind, _, ty, body) => {
                self.ground(ty)?;
                self.bound.push(ty.clone());
                let res = self.check(body, false);
                self.bound.pop();
                let body_ty = res?;
                match kind {
                    crate::term::BinderKind::Lam => Ok(Type::arrow(ty.clone(), body_ty)),
                    _ => {
                        if body_ty != Type::Prop {
                            return Err(TypeError::Mismatch {
                                expected: Type::Prop,
                                found: body_ty,
                            });
                        }
                        Ok(Type::Prop)
                    }
                }
            }
        }
    }
}
