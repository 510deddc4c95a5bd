//! Shallow encoding of types, formulas and tasks.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};

use super::preamble::{and, bot, ex, leibniz, neg, or, top};
use super::term::{app, apps, arrow, cst, fresh_var, lam, LpTerm};
use super::{mangle, ExportError};
use crate::ident::Ident;
use crate::syntax::print_type;
use crate::task::Task;
use crate::term::{BinderKind, Connective, Term};
use crate::theories::{as_equality, Interp};
use crate::types::Type;

/// Maps object names to the λΠ terms standing for them.
#[derive(Clone, Default)]
pub(crate) struct Env {
    pub types: HashMap<Ident, LpTerm>,
    pub tvars: HashMap<Ident, LpTerm>,
    pub syms: HashMap<Ident, LpTerm>,
    /// Enclosing object binders, innermost last.
    bound: Vec<LpTerm>,
    /// Unknown names become constants instead of scope errors.
    pub open: bool,
}

impl Env {
    pub fn open() -> Env {
        Env {
            open: true,
            ..Env::default()
        }
    }

    fn lookup(&self, map: &HashMap<Ident, LpTerm>, x: &Ident) -> Result<LpTerm, ExportError> {
        match map.get(x) {
            Some(t) => Ok(t.clone()),
            None if self.open => Ok(cst(&mangle(x))),
            None => Err(ExportError::Scope(x.to_string())),
        }
    }

    fn instance(&mut self, args: &[Type]) -> Result<Vec<LpTerm>, ExportError> {
        args.iter()
            .map(|a| {
                if a.is_small() {
                    self.ty(a)
                } else {
                    Err(ExportError::LargeInstance(print_type(a)))
                }
            })
            .collect()
    }

    pub fn ty(&mut self, ty: &Type) -> Result<LpTerm, ExportError> {
        Ok(match ty {
            Type::Prop => LpTerm::Type,
            Type::Int => cst("int"),
            Type::Var(a) => self.lookup(&self.tvars, a)?,
            Type::Arrow(a, b) => arrow(self.ty(a)?, self.ty(b)?),
            Type::App(s, args) => {
                let head = self.lookup(&self.types, s)?;
                apps(head, self.instance(args)?)
            }
        })
    }

    /// `Π α₁ … αₖ : Type, τ` for a symbol scheme.
    pub fn scheme(&mut self, ty: &Type) -> Result<LpTerm, ExportError> {
        let vars = ty.vars();
        let mut saved = Vec::new();
        let mut binders = Vec::new();
        for a in &vars {
            let v = fresh_var();
            saved.push(self.tvars.insert(a.clone(), v.clone()));
            binders.push((mangle(a), LpTerm::Type, v));
        }
        let body = self.ty(ty);
        for (a, old) in vars.iter().zip(saved) {
            restore(&mut self.tvars, a, old);
        }
        Ok(close_prods(binders, body?))
    }

    pub fn term(&mut self, t: &Term) -> Result<LpTerm, ExportError> {
        if let Some((ty, a, b)) = as_equality(t) {
            let (a, b) = (self.term(a)?, self.term(b)?);
            let tau = self.ty(ty)?;
            return Ok(if ty.is_small() {
                apps(cst("eq"), [tau, a, b])
            } else {
                leibniz(tau, a, b)
            });
        }
        Ok(match t {
            Term::Bound(i) => {
                let k = self.bound.len().checked_sub(1 + *i as usize);
                k.map(|k| self.bound[k].clone()).ok_or(ExportError::Dangling(*i))?
            }
            Term::Free(x, args) => {
                let head = self.lookup(&self.syms, x)?;
                apps(head, self.instance(args)?)
            }
            Term::Interp(op, args) => match op {
                Interp::Eq => {
                    let ty = &args[0];
                    let tau = self.ty(ty)?;
                    if ty.is_small() {
                        app(cst("eq"), tau)
                    } else {
                        lam("x", tau.clone(), |x| {
                            lam("y", tau.clone(), |y| leibniz(tau, x, y))
                        })
                    }
                }
                Interp::Add => cst("add"),
                Interp::Mul => cst("mul"),
                Interp::Sub => cst("sub"),
                Interp::Lt => cst("lt"),
                Interp::Le => cst("le"),
                Interp::Gt => cst("gt"),
                Interp::Ge => cst("ge"),
            },
            Term::Int(n) => int_literal(n),
            Term::True => top(),
            Term::False => bot(),
            Term::Not(a) => neg(self.term(a)?),
            Term::Binary(op, a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                match op {
                    Connective::And => and(a, b),
                    Connective::Or => or(a, b),
                    Connective::Imp => arrow(a, b),
                    Connective::Iff => and(arrow(a.clone(), b.clone()), arrow(b, a)),
                }
            }
            Term::App(f, a) => app(self.term(f)?, self.term(a)?),
            Term::Binder(kind, x, ty, body) => {
                let tau = self.ty(ty)?;
                let v = fresh_var();
                self.bound.push(v.clone());
                let b = self.term(body);
                self.bound.pop();
                let b = b?.close(&v);
                let hint = mangle(x);
                match kind {
                    BinderKind::Lam => LpTerm::Lam(hint.as_str().into(), Some(tau.into()), b.into()),
                    BinderKind::Forall => LpTerm::Prod(hint.as_str().into(), tau.into(), b.into()),
                    BinderKind::Exists => ex(&hint, tau, |y| b.open(&y)),
                }
            }
            Term::TyAbs(a, body) => {
                let v = fresh_var();
                let old = self.tvars.insert(a.clone(), v.clone());
                let b = self.term(body);
                restore(&mut self.tvars, a, old);
                LpTerm::Prod(mangle(a).as_str().into(), LpTerm::Type.into(), b?.close(&v).into())
            }
        })
    }

    /// Binds the task's type symbols and symbols to fresh variables,
    /// returning the binders in order.
    pub fn bind_signature(&mut self, task: &Task) -> Result<Vec<(String, LpTerm, LpTerm)>, ExportError> {
        let mut binders = Vec::new();
        for (s, arity) in task.types.iter() {
            let v = fresh_var();
            self.types.insert(s.clone(), v.clone());
            let dom = (0..arity).fold(LpTerm::Type, |acc, _| arrow(LpTerm::Type, acc));
            binders.push((mangle(s), dom, v));
        }
        for (f, ty) in task.sig.iter() {
            let v = fresh_var();
            let dom = self.scheme(ty)?;
            self.syms.insert(f.clone(), v.clone());
            binders.push((mangle(f), dom, v));
        }
        Ok(binders)
    }

    /// The encodings of the hypotheses, then of the negated goals.
    pub fn premises(&mut self, task: &Task) -> Result<Vec<(String, LpTerm)>, ExportError> {
        let mut out = Vec::new();
        for p in &task.hyps {
            out.push((mangle(&p.name), self.term(&p.formula)?));
        }
        for p in &task.goals {
            out.push((mangle(&p.name), neg(self.term(&p.formula)?)));
        }
        Ok(out)
    }
}

pub(crate) fn restore(map: &mut HashMap<Ident, LpTerm>, k: &Ident, old: Option<LpTerm>) {
    match old {
        Some(v) => {
            map.insert(k.clone(), v);
        }
        None => {
            map.remove(k);
        }
    }
}

/// Wraps `body` in products over `binders`, outermost first.
pub(crate) fn close_prods(binders: Vec<(String, LpTerm, LpTerm)>, body: LpTerm) -> LpTerm {
    binders.into_iter().rev().fold(body, |acc, (hint, dom, v)| {
        LpTerm::Prod(hint.as_str().into(), dom.into(), acc.close(&v).into())
    })
}

/// Wraps `body` in abstractions over `binders`, outermost first.
pub(crate) fn close_lams(binders: Vec<(String, LpTerm, LpTerm)>, body: LpTerm) -> LpTerm {
    binders.into_iter().rev().fold(body, |acc, (hint, dom, v)| {
        LpTerm::Lam(hint.as_str().into(), Some(dom.into()), acc.close(&v).into())
    })
}

fn positive(n: &BigUint) -> LpTerm {
    if n == &BigUint::from(1u32) {
        return cst("xH");
    }
    let half = positive(&(n >> 1));
    if n.bit(0) {
        app(cst("xI"), half)
    } else {
        app(cst("xO"), half)
    }
}

/// Binary integer literal: `Z0`, `Zpos p` or `Zneg p`.
pub fn int_literal(n: &BigInt) -> LpTerm {
    match n.sign() {
        Sign::NoSign => cst("Z0"),
        Sign::Plus => app(cst("Zpos"), positive(n.magnitude())),
        Sign::Minus => app(cst("Zneg"), positive(n.magnitude())),
    }
}

/// Encodes a formula or term. Symbols that are not bound become constants
/// named after them.
pub fn encode_term(t: &Term) -> Result<LpTerm, ExportError> {
    Env::open().term(t)
}

pub fn encode_type(ty: &Type) -> Result<LpTerm, ExportError> {
    Env::open().ty(ty)
}

/// `Π ι…, Π f…, t̂₁ → … → ¬û₁ → … → ⊥`: a task is valid when this type is
/// inhabited.
pub fn encode_task(task: &Task) -> Result<LpTerm, ExportError> {
    let mut env = Env::default();
    let binders = env.bind_signature(task)?;
    let premises = env.premises(task)?;
    let body = premises
        .into_iter()
        .rev()
        .fold(bot(), |acc, (_, p)| arrow(p, acc));
    Ok(close_prods(binders, body))
}

/// `T̂₁ → … → T̂ₙ → T̂`: proving the leaves proves the task.
pub fn app_correctness_type(task: &Task, leaves: &[Task]) -> Result<LpTerm, ExportError> {
    let mut out = encode_task(task)?;
    for leaf in leaves.iter().rev() {
        out = arrow(encode_task(leaf)?, out);
    }
    Ok(out)
}
