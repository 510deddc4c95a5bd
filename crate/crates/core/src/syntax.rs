//! Concrete s-expression syntax for types, terms, tasks and certificates.
//!
//! Types: `prop`, `int`, a type variable `a`, `(-> t1 t2 ...)` (right
//! nested), and `(sym t1 ...)` for a declared type symbol, so a nullary
//! symbol is written `(color)`.
//!
//! Terms: `true`, `false`, integers, variables, `(not t)`, `(and a b ...)`,
//! `(or ...)`, `(imp ...)` (right nested), `(iff a b)`, binders
//! `(forall (x ty) ... body)`, `exists`, `lam`, type quantification
//! `(pi a body)`, curried application `(f a b)`, and `(@ f ty ...)` to give
//! the type instance of a polymorphic symbol explicitly. When reading a task,
//! omitted instances are inferred from the arguments.
//!
//! Tasks: `(types (color 0) (set 1)) (sig (red (color)) ...)
//! (hyps (H1 t) ...) (goals (G t) ...)`; every section is optional.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::cert::{KernelCert, SurfaceCert};
use crate::ident::{fresh_ident, Ident};
use crate::sexp::{parse_all, parse_one, Pos, Sexp, SyntaxError};
use crate::task::{Premise, Task, TaskError};
use crate::term::{BinderKind, Connective, Term};
use crate::theories::{is_reserved, Interp};
use crate::types::{Signature, Type};

pub const KEYWORDS: [&str; 19] = [
    "true", "false", "not", "and", "or", "imp", "iff", "forall", "exists", "lam", "pi", "@", "->",
    "prop", "int", "types", "sig", "hyps", "goals",
];

/// Names that cannot be declared or bound because the syntax gives them a
/// fixed meaning.
pub fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name) || Interp::from_symbol(name).is_some() || is_integer(name)
}

fn is_integer(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Task(#[from] TaskError),
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError::new(pos, message))
}

fn name_atom(s: &Sexp, what: &str) -> Result<Ident, SyntaxError> {
    match s {
        Sexp::Atom(a, pos) => {
            if is_keyword(a) || a.starts_with('?') || a.starts_with("#") {
                return err(*pos, format!("`{a}` cannot be used as {what}"));
            }
            Ok(Ident::parse(a))
        }
        Sexp::List(_, pos) => err(*pos, format!("expected {what}")),
    }
}

// ---------------------------------------------------------------- types

pub fn parse_type_sexp(s: &Sexp) -> Result<Type, SyntaxError> {
    match s {
        Sexp::Atom(a, _) if a == "prop" => Ok(Type::Prop),
        Sexp::Atom(a, _) if a == "int" => Ok(Type::Int),
        Sexp::Atom(..) => Ok(Type::Var(name_atom(s, "a type variable")?)),
        Sexp::List(items, pos) => {
            let Some(head) = items.first() else {
                return err(*pos, "empty type");
            };
            if head.as_atom() == Some("->") {
                if items.len() < 3 {
                    return err(*pos, "`->` needs at least two types");
                }
                let tys = items[1..]
                    .iter()
                    .map(parse_type_sexp)
                    .collect::<Result<Vec<_>, _>>()?;
                let (last, init) = tys.split_last().expect("length checked");
                return Ok(Type::arrows(init.iter().cloned(), last.clone()));
            }
            let sym = name_atom(head, "a type symbol")?;
            let args = items[1..]
                .iter()
                .map(parse_type_sexp)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Type::App(sym, args))
        }
    }
}

pub fn parse_type(text: &str) -> Result<Type, SyntaxError> {
    parse_type_sexp(&parse_one(text)?)
}

pub fn type_to_sexp(ty: &Type) -> Sexp {
    match ty {
        Type::Prop => Sexp::atom("prop"),
        Type::Int => Sexp::atom("int"),
        Type::Var(a) => Sexp::atom(a.to_string()),
        Type::Arrow(..) => {
            let (args, res) = ty.uncurry();
            let mut items = vec![Sexp::atom("->")];
            items.extend(args.into_iter().map(type_to_sexp));
            items.push(type_to_sexp(res));
            Sexp::list(items)
        }
        Type::App(sym, args) => {
            let mut items = vec![Sexp::atom(sym.to_string())];
            items.extend(args.iter().map(type_to_sexp));
            Sexp::list(items)
        }
    }
}

pub fn print_type(ty: &Type) -> String {
    type_to_sexp(ty).to_string()
}

// ---------------------------------------------------------------- terms

const META: &str = "?";

fn meta(k: u32) -> Type {
    Type::Var(Ident::with_id(META, k))
}

fn meta_id(ty: &Type) -> Option<u32> {
    match ty {
        Type::Var(v) if v.name() == META => Some(v.id()),
        _ => None,
    }
}

/// Reads terms. With a signature, omitted type instances become
/// metavariables solved by [`Inference`]; without one, instances must be
/// written out and nothing is inferred.
struct TermReader<'a> {
    sig: Option<&'a Signature>,
    bound: Vec<Ident>,
    next_meta: u32,
    /// Occurrences whose instance was omitted.
    pending: Vec<(Pos, String, Vec<u32>)>,
}

impl TermReader<'_> {
    fn metas(&mut self, n: usize, pos: Pos, name: &str) -> Vec<Type> {
        let ids: Vec<u32> = (0..n as u32).map(|i| self.next_meta + i).collect();
        self.next_meta += n as u32;
        if n > 0 {
            self.pending.push((pos, name.to_string(), ids.clone()));
        }
        ids.into_iter().map(meta).collect()
    }

    fn symbol(&mut self, a: &str, pos: Pos) -> Result<Term, SyntaxError> {
        if let Some(op) = Interp::from_symbol(a) {
            if op.type_params() > 0 && self.sig.is_none() {
                return err(pos, format!("`{a}` needs an explicit instance here: (@ {a} type)"));
            }
            let args = self.metas(op.type_params(), pos, a);
            return Ok(Term::Interp(op, args));
        }
        let x = name_atom(&Sexp::Atom(a.to_string(), pos), "a variable")?;
        match self.sig {
            None => Ok(Term::Free(x, vec![])),
            Some(sig) => {
                let Some(scheme) = sig.get(&x) else {
                    return err(pos, format!("unbound variable `{x}`"));
                };
                let n = scheme.vars().len();
                let args = self.metas(n, pos, a);
                Ok(Term::Free(x, args))
            }
        }
    }

    fn read(&mut self, s: &Sexp) -> Result<Term, SyntaxError> {
        match s {
            Sexp::Atom(a, pos) => {
                if a == "true" {
                    return Ok(Term::True);
                }
                if a == "false" {
                    return Ok(Term::False);
                }
                if is_integer(a) {
                    let n: BigInt = a.parse().expect("checked integer literal");
                    return Ok(Term::Int(n));
                }
                let id = Ident::parse(a);
                if let Some(k) = self.bound.iter().rev().position(|b| *b == id) {
                    return Ok(Term::Bound(k as u32));
                }
                if KEYWORDS.contains(&a.as_str()) {
                    return err(*pos, format!("unexpected keyword `{a}`"));
                }
                self.symbol(a, *pos)
            }
            Sexp::List(items, pos) => {
                let Some(head) = items.first() else {
                    return err(*pos, "empty term");
                };
                let args = &items[1..];
                let keyword = head.as_atom().filter(|a| KEYWORDS.contains(a));
                match keyword {
                    Some("not") => {
                        if args.len() != 1 {
                            return err(*pos, "`not` takes one argument");
                        }
                        Ok(Term::not(self.read(&args[0])?))
                    }
                    Some(kw @ ("and" | "or" | "imp" | "iff")) => {
                        let op = match kw {
                            "and" => Connective::And,
                            "or" => Connective::Or,
                            "imp" => Connective::Imp,
                            _ => Connective::Iff,
                        };
                        if args.len() < 2 || (op == Connective::Iff && args.len() != 2) {
                            return err(*pos, format!("wrong number of arguments to `{kw}`"));
                        }
                        let ts = args.iter().map(|a| self.read(a)).collect::<Result<Vec<_>, _>>()?;
                        let mut it = ts.into_iter().rev();
                        let last = it.next().expect("length checked");
                        Ok(it.fold(last, |acc, t| Term::binary(op, t, acc)))
                    }
                    Some(kw @ ("forall" | "exists" | "lam")) => {
                        let kind = match kw {
                            "forall" => BinderKind::Forall,
                            "exists" => BinderKind::Exists,
                            _ => BinderKind::Lam,
                        };
                        if args.len() < 2 {
                            return err(*pos, format!("`{kw}` needs a binder and a body"));
                        }
                        let (body, binders) = args.split_last().expect("length checked");
                        let mut decls = Vec::new();
                        for b in binders {
                            let pair = b.as_list().filter(|l| l.len() == 2);
                            let Some(pair) = pair else {
                                return err(b.pos(), "binder must be `(name type)`");
                            };
                            let x = name_atom(&pair[0], "a bound variable")?;
                            let ty = parse_type_sexp(&pair[1])?;
                            decls.push((x, ty));
                        }
                        for (x, _) in &decls {
                            self.bound.push(x.clone());
                        }
                        let body = self.read(body);
                        self.bound.truncate(self.bound.len() - decls.len());
                        let mut out = body?;
                        for (x, ty) in decls.into_iter().rev() {
                            out = Term::Binder(kind, x, ty, Arc::new(out));
                        }
                        Ok(out)
                    }
                    Some("pi") => {
                        if args.len() != 2 {
                            return err(*pos, "`pi` takes a type variable and a body");
                        }
                        let alpha = name_atom(&args[0], "a type variable")?;
                        Ok(Term::TyAbs(alpha, Arc::new(self.read(&args[1])?)))
                    }
                    Some("@") => {
                        let Some(Sexp::Atom(f, fpos)) = args.first() else {
                            return err(*pos, "`@` takes a symbol and its type arguments");
                        };
                        let tys = args[1..]
                            .iter()
                            .map(parse_type_sexp)
                            .collect::<Result<Vec<_>, _>>()?;
                        if let Some(op) = Interp::from_symbol(f) {
                            return Ok(Term::Interp(op, tys));
                        }
                        let x = name_atom(&args[0], "a symbol")?;
                        if self.bound.contains(&x) {
                            return err(*fpos, "`@` applies to signature symbols only");
                        }
                        if let Some(sig) = self.sig {
                            if !sig.contains(&x) {
                                return err(*fpos, format!("unbound variable `{x}`"));
                            }
                        }
                        Ok(Term::Free(x, tys))
                    }
                    Some(kw) => err(head.pos(), format!("unexpected keyword `{kw}`")),
                    None => {
                        if args.is_empty() {
                            return err(*pos, "application without arguments");
                        }
                        let f = self.read(head)?;
                        let args = args.iter().map(|a| self.read(a)).collect::<Result<Vec<_>, _>>()?;
                        Ok(Term::apps(f, args))
                    }
                }
            }
        }
    }
}

/// Solves instance metavariables by first-order unification.
struct Inference<'a> {
    sig: &'a Signature,
    subst: HashMap<u32, Type>,
    next_meta: u32,
}

impl Inference<'_> {
    fn resolve(&self, ty: &Type) -> Type {
        match ty {
            Type::Var(_) => match meta_id(ty).and_then(|k| self.subst.get(&k)) {
                Some(t) => self.resolve(t),
                None => ty.clone(),
            },
            Type::Prop | Type::Int => ty.clone(),
            Type::Arrow(a, b) => Type::arrow(self.resolve(a), self.resolve(b)),
            Type::App(s, args) => Type::App(s.clone(), args.iter().map(|a| self.resolve(a)).collect()),
        }
    }

    fn occurs(&self, k: u32, ty: &Type) -> bool {
        match ty {
            Type::Var(_) => meta_id(ty) == Some(k),
            Type::Prop | Type::Int => false,
            Type::Arrow(a, b) => self.occurs(k, a) || self.occurs(k, b),
            Type::App(_, args) => args.iter().any(|a| self.occurs(k, a)),
        }
    }

    fn unify(&mut self, a: &Type, b: &Type) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (meta_id(&a), meta_id(&b)) {
            (Some(m), Some(n)) if m == n => return true,
            (Some(m), _) => {
                if self.occurs(m, &b) {
                    return false;
                }
                self.subst.insert(m, b);
                return true;
            }
            (_, Some(n)) => {
                if self.occurs(n, &a) {
                    return false;
                }
                self.subst.insert(n, a);
                return true;
            }
            _ => {}
        }
        match (&a, &b) {
            (Type::Prop, Type::Prop) | (Type::Int, Type::Int) => true,
            (Type::Var(x), Type::Var(y)) => x == y,
            (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => self.unify(a1, a2) && self.unify(b1, b2),
            (Type::App(s, xs), Type::App(t, ys)) => {
                s == t && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    fn expect(&mut self, found: &Type, expected: &Type) -> Result<(), String> {
        if self.unify(found, expected) {
            Ok(())
        } else {
            Err(format!(
                "expected type {}, found {}",
                print_type(&self.resolve(expected)),
                print_type(&self.resolve(found))
            ))
        }
    }

    fn infer(&mut self, t: &Term, bound: &mut Vec<Type>) -> Result<Type, String> {
        match t {
            Term::Bound(i) => Ok(bound[bound.len() - 1 - *i as usize].clone()),
            Term::Free(x, args) => {
                let scheme = self.sig.get(x).ok_or_else(|| format!("unbound variable `{x}`"))?;
                let vars = scheme.vars();
                if vars.len() != args.len() {
                    return Err(format!("`{x}` expects {} type argument(s)", vars.len()));
                }
                let map: Vec<(Ident, Type)> = vars.into_iter().zip(args.iter().cloned()).collect();
                Ok(scheme.subst_many(&map))
            }
            Term::Interp(op, args) => {
                if args.len() != op.type_params() {
                    return Err(format!("`{op}` expects {} type argument(s)", op.type_params()));
                }
                Ok(op.instance(args))
            }
            Term::Int(_) => Ok(Type::Int),
            Term::True | Term::False => Ok(Type::Prop),
            Term::Not(a) => {
                let ty = self.infer(a, bound)?;
                self.expect(&ty, &Type::Prop)?;
                Ok(Type::Prop)
            }
            Term::Binary(_, a, b) => {
                for x in [a, b] {
                    let ty = self.infer(x, bound)?;
                    self.expect(&ty, &Type::Prop)?;
                }
                Ok(Type::Prop)
            }
            Term::App(f, a) => {
                let fty = self.infer(f, bound)?;
                let aty = self.infer(a, bound)?;
                let res = self.fresh_meta();
                self.expect(&fty, &Type::arrow(aty, res.clone()))?;
                Ok(self.resolve(&res))
            }
            Term::Binder(kind, _, ty, body) => {
                bound.push(ty.clone());
                let res = self.infer(body, bound);
                bound.pop();
                let bty = res?;
                match kind {
                    BinderKind::Lam => Ok(Type::arrow(ty.clone(), bty)),
                    _ => {
                        self.expect(&bty, &Type::Prop)?;
                        Ok(Type::Prop)
                    }
                }
            }
            Term::TyAbs(_, body) => {
                let ty = self.infer(body, bound)?;
                self.expect(&ty, &Type::Prop)?;
                Ok(Type::Prop)
            }
        }
    }

    fn fresh_meta(&mut self) -> Type {
        self.next_meta += 1;
        meta(self.next_meta - 1)
    }
}

fn resolve_term(inf: &Inference, t: &Term) -> Term {
    let tys = |args: &[Type]| args.iter().map(|a| inf.resolve(a)).collect::<Vec<_>>();
    match t {
        Term::Free(x, args) => Term::Free(x.clone(), tys(args)),
        Term::Interp(op, args) => Term::Interp(*op, tys(args)),
        Term::Bound(_) | Term::Int(_) | Term::True | Term::False => t.clone(),
        Term::Not(a) => Term::not(resolve_term(inf, a)),
        Term::Binary(op, a, b) => Term::binary(*op, resolve_term(inf, a), resolve_term(inf, b)),
        Term::App(f, a) => Term::app(resolve_term(inf, f), resolve_term(inf, a)),
        Term::Binder(k, h, ty, body) => Term::Binder(*k, h.clone(), ty.clone(), Arc::new(resolve_term(inf, body))),
        Term::TyAbs(a, body) => Term::TyAbs(a.clone(), Arc::new(resolve_term(inf, body))),
    }
}

/// Reads a term against a signature, inferring omitted type instances.
pub fn term_from_sexp(s: &Sexp, sig: &Signature) -> Result<Term, SyntaxError> {
    let mut reader = TermReader {
        sig: Some(sig),
        bound: Vec::new(),
        next_meta: 0,
        pending: Vec::new(),
    };
    let raw = reader.read(s)?;
    let mut inf = Inference {
        sig,
        subst: HashMap::new(),
        next_meta: reader.next_meta,
    };
    inf.infer(&raw, &mut Vec::new())
        .map_err(|m| SyntaxError::new(s.pos(), m))?;
    for (pos, name, ids) in &reader.pending {
        for k in ids {
            if meta_id(&inf.resolve(&meta(*k))).is_some() {
                return err(
                    *pos,
                    format!("cannot infer the type instance of `{name}`; write (@ {name} type ...)"),
                );
            }
        }
    }
    Ok(resolve_term(&inf, &raw))
}

/// Reads a term whose type instances are all explicit.
pub fn explicit_term_from_sexp(s: &Sexp) -> Result<Term, SyntaxError> {
    TermReader {
        sig: None,
        bound: Vec::new(),
        next_meta: 0,
        pending: Vec::new(),
    }
    .read(s)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    term_from_sexp(&parse_one(text)?, sig)
}

struct TermPrinter<'a> {
    explicit: bool,
    avoid: &'a HashSet<Ident>,
    names: Vec<Ident>,
}

impl TermPrinter<'_> {
    fn binder_name(&self, hint: &Ident) -> Ident {
        let base = if is_keyword(hint.name()) || hint.name().starts_with('?') || hint.name().starts_with('#') {
            Ident::new("x")
        } else {
            hint.clone()
        };
        let mut avoid = self.avoid.clone();
        avoid.extend(self.names.iter().cloned());
        fresh_ident(&base, &avoid)
    }

    fn head(&mut self, t: &Term, applied: bool) -> Sexp {
        match t {
            Term::Interp(op, args) if args.is_empty() || (applied && !self.explicit) => {
                Sexp::atom(op.symbol())
            }
            _ => self.print(t),
        }
    }

    fn print(&mut self, t: &Term) -> Sexp {
        match t {
            Term::Bound(i) => {
                let k = self.names.len().checked_sub(1 + *i as usize);
                Sexp::atom(k.map_or_else(|| format!("?dangling{i}"), |k| self.names[k].to_string()))
            }
            Term::Free(x, args) if args.is_empty() => Sexp::atom(x.to_string()),
            Term::Free(x, args) => {
                let mut items = vec![Sexp::atom("@"), Sexp::atom(x.to_string())];
                items.extend(args.iter().map(type_to_sexp));
                Sexp::list(items)
            }
            Term::Interp(op, args) if args.is_empty() => Sexp::atom(op.symbol()),
            Term::Interp(op, args) => {
                let mut items = vec![Sexp::atom("@"), Sexp::atom(op.symbol())];
                items.extend(args.iter().map(type_to_sexp));
                Sexp::list(items)
            }
            Term::Int(n) => Sexp::atom(n.to_string()),
            Term::True => Sexp::atom("true"),
            Term::False => Sexp::atom("false"),
            Term::Not(a) => Sexp::list(vec![Sexp::atom("not"), self.print(a)]),
            Term::Binary(op, a, b) => Sexp::list(vec![Sexp::atom(op.keyword()), self.print(a), self.print(b)]),
            Term::App(..) => {
                let (f, args) = t.spine();
                let mut items = vec![self.head(f, true)];
                items.extend(args.into_iter().map(|a| self.print(a)));
                Sexp::list(items)
            }
            Term::Binder(kind, hint, ty, body) => {
                let x = self.binder_name(hint);
                self.names.push(x.clone());
                let body = self.print(body);
                self.names.pop();
                Sexp::list(vec![
                    Sexp::atom(kind.keyword()),
                    Sexp::list(vec![Sexp::atom(x.to_string()), type_to_sexp(ty)]),
                    body,
                ])
            }
            Term::TyAbs(alpha, body) => {
                Sexp::list(vec![Sexp::atom("pi"), Sexp::atom(alpha.to_string()), self.print(body)])
            }
        }
    }
}

/// Prints `t`; bound names avoid `avoid` and the free variables of `t`.
/// With `explicit`, every instance is written out so the result can be read
/// back without a signature.
pub fn term_to_sexp(t: &Term, explicit: bool, avoid: &HashSet<Ident>) -> Sexp {
    let mut all = avoid.clone();
    t.collect_free_vars(&mut all);
    TermPrinter {
        explicit,
        avoid: &all,
        names: Vec::new(),
    }
    .print(t)
}

pub fn print_term(t: &Term) -> String {
    term_to_sexp(t, false, &HashSet::new()).to_string()
}

// ---------------------------------------------------------------- tasks

fn section(s: &Sexp) -> Result<(&str, &[Sexp]), SyntaxError> {
    match s.as_list() {
        Some([Sexp::Atom(head, _), rest @ ..]) => Ok((head.as_str(), rest)),
        _ => err(s.pos(), "expected a `(types ...)`, `(sig ...)`, `(hyps ...)` or `(goals ...)` section"),
    }
}

fn pair(s: &Sexp, what: &str) -> Result<(Ident, Sexp), ParseError> {
    match s.as_list() {
        Some([name, value]) => {
            if let Some(a) = name.as_atom().filter(|a| is_reserved(a)) {
                return Err(TaskError::Reserved(Ident::new(a)).into());
            }
            Ok((name_atom(name, what)?, value.clone()))
        }
        _ => Err(SyntaxError::new(s.pos(), format!("expected `({what} ...)`")).into()),
    }
}

fn task_from_sections(items: &[Sexp], explicit: bool) -> Result<Task, ParseError> {
    let mut task = Task::new();
    let mut seen = HashSet::new();
    let mut premises: Vec<(bool, Ident, Sexp)> = Vec::new();
    for item in items {
        let (head, entries) = section(item)?;
        if !seen.insert(head.to_string()) {
            return Err(SyntaxError::new(item.pos(), format!("duplicate `{head}` section")).into());
        }
        match head {
            "types" => {
                for e in entries {
                    let (name, arity) = pair(e, "type symbol")?;
                    let arity = arity
                        .as_atom()
                        .and_then(|a| a.parse::<usize>().ok())
                        .ok_or_else(|| SyntaxError::new(arity.pos(), "arity must be a natural number"))?;
                    if !task.types.declare(name.clone(), arity) {
                        return Err(TaskError::DuplicateSymbol(name).into());
                    }
                }
            }
            "sig" => {
                for e in entries {
                    let (name, ty) = pair(e, "symbol")?;
                    if !task.sig.declare(name.clone(), parse_type_sexp(&ty)?) {
                        return Err(TaskError::DuplicateSymbol(name).into());
                    }
                }
            }
            "hyps" | "goals" => {
                for e in entries {
                    let (name, t) = pair(e, "premise")?;
                    premises.push((head == "goals", name, t));
                }
            }
            other => {
                return Err(SyntaxError::new(item.pos(), format!("unknown section `{other}`")).into());
            }
        }
    }
    for (goal, name, t) in premises {
        let formula = if explicit {
            explicit_term_from_sexp(&t)?
        } else {
            term_from_sexp(&t, &task.sig)?
        };
        let p = Premise::new(name, formula);
        if goal {
            task.goals.push(p);
        } else {
            task.hyps.push(p);
        }
    }
    task.validate()?;
    Ok(task)
}

/// Parses and validates a task file.
pub fn parse_task(text: &str) -> Result<Task, ParseError> {
    task_from_sections(&parse_all(text)?, false)
}

fn task_sections(task: &Task, explicit: bool) -> Vec<Sexp> {
    let sig_names: HashSet<Ident> = task.sig.iter().map(|(x, _)| x.clone()).collect();
    let types = task
        .types
        .iter()
        .map(|(s, n)| Sexp::list(vec![Sexp::atom(s.to_string()), Sexp::atom(n.to_string())]));
    let sig = task
        .sig
        .iter()
        .map(|(x, ty)| Sexp::list(vec![Sexp::atom(x.to_string()), type_to_sexp(ty)]));
    let premises = |ps: &[Premise]| -> Vec<Sexp> {
        ps.iter()
            .map(|p| {
                Sexp::list(vec![
                    Sexp::atom(p.name.to_string()),
                    term_to_sexp(&p.formula, explicit, &sig_names),
                ])
            })
            .collect()
    };
    let with_head = |head: &str, rest: Vec<Sexp>| {
        let mut items = vec![Sexp::atom(head)];
        items.extend(rest);
        Sexp::list(items)
    };
    vec![
        with_head("types", types.collect()),
        with_head("sig", sig.collect()),
        with_head("hyps", premises(&task.hyps)),
        with_head("goals", premises(&task.goals)),
    ]
}

/// Prints a task in the file format read by [`parse_task`].
pub fn print_task(task: &Task) -> String {
    let mut out = String::new();
    for s in task_sections(task, false) {
        out.push_str(&s.pretty(78));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- certificates

fn boolean(b: bool) -> Sexp {
    Sexp::atom(if b { "#t" } else { "#f" })
}

fn id(x: &Ident) -> Sexp {
    Sexp::atom(x.to_string())
}

fn tm(t: &Term) -> Sexp {
    term_to_sexp(t, true, &HashSet::new())
}

/// Canonical serialization of a kernel certificate.
pub fn kernel_to_sexp(c: &KernelCert) -> Sexp {
    let sub = |c: &KernelCert| kernel_to_sexp(c);
    let head = Sexp::atom(c.rule_name());
    let rest = match c {
        KernelCert::Hole(t) => vec![Sexp::list(task_sections(t, true))],
        KernelCert::Trivial { goal, premise } => vec![boolean(*goal), id(premise)],
        KernelCert::Axiom { formula, hyp, goal } => vec![tm(formula), id(hyp), id(goal)],
        KernelCert::Clear { goal, formula, premise, next }
        | KernelCert::Swap { goal, formula, premise, next }
        | KernelCert::Unfold { goal, formula, premise, next } => {
            vec![boolean(*goal), tm(formula), id(premise), sub(next)]
        }
        KernelCert::Assert { name, formula, goal_branch, hyp_branch } => {
            vec![id(name), tm(formula), sub(goal_branch), sub(hyp_branch)]
        }
        KernelCert::Split { goal, left, right, premise, first, second } => vec![
            boolean(*goal),
            tm(left),
            tm(right),
            id(premise),
            sub(first),
            sub(second),
        ],
        KernelCert::Destruct { goal, left, right, premise, first_name, second_name, next } => vec![
            boolean(*goal),
            tm(left),
            tm(right),
            id(premise),
            id(first_name),
            id(second_name),
            sub(next),
        ],
        KernelCert::IntroQuant { goal, ty, body, premise, var, next } => vec![
            boolean(*goal),
            type_to_sexp(ty),
            tm(body),
            id(premise),
            id(var),
            sub(next),
        ],
        KernelCert::InstQuant { goal, ty, body, premise, new_premise, witness, next } => vec![
            boolean(*goal),
            type_to_sexp(ty),
            tm(body),
            id(premise),
            id(new_premise),
            tm(witness),
            sub(next),
        ],
        KernelCert::IntroType { formula, premise, symbol, next } => {
            vec![tm(formula), id(premise), id(symbol), sub(next)]
        }
        KernelCert::InstType { formula, premise, new_premise, ty, next } => vec![
            tm(formula),
            id(premise),
            id(new_premise),
            type_to_sexp(ty),
            sub(next),
        ],
        KernelCert::EqRefl { term, premise } => vec![tm(term), id(premise)],
        KernelCert::Rewrite { goal, lhs, rhs, context, premise, equality, next } => vec![
            boolean(*goal),
            tm(lhs),
            tm(rhs),
            tm(context),
            id(premise),
            id(equality),
            sub(next),
        ],
        KernelCert::Induction { var, bound, context, goal, bound_hyp, rec_hyp, base, step } => vec![
            id(var),
            tm(bound),
            tm(context),
            id(goal),
            id(bound_hyp),
            id(rec_hyp),
            sub(base),
            sub(step),
        ],
    };
    let mut items = vec![head];
    items.extend(rest);
    Sexp::list(items)
}

/// Single-line canonical text; its length is the certificate size.
pub fn print_kernel(c: &KernelCert) -> String {
    kernel_to_sexp(c).to_string()
}

pub fn surface_to_sexp(c: &SurfaceCert) -> Sexp {
    let sub = |c: &SurfaceCert| surface_to_sexp(c);
    let rest = match c {
        SurfaceCert::Hole => vec![],
        SurfaceCert::Trivial(p) | SurfaceCert::EqRefl(p) => vec![id(p)],
        SurfaceCert::Axiom(h, g) => vec![id(h), id(g)],
        SurfaceCert::Clear(p, n) | SurfaceCert::Swap(p, n) | SurfaceCert::Unfold(p, n) | SurfaceCert::EqSym(p, n) => {
            vec![id(p), sub(n)]
        }
        SurfaceCert::Assert(p, t, a, b) => vec![id(p), tm(t), sub(a), sub(b)],
        SurfaceCert::Split(p, a, b) => vec![id(p), sub(a), sub(b)],
        SurfaceCert::Destruct(a, b, c2, n) | SurfaceCert::Construct(a, b, c2, n) | SurfaceCert::EqTrans(a, b, c2, n) => {
            vec![id(a), id(b), id(c2), sub(n)]
        }
        SurfaceCert::IntroQuant(p, y, n) | SurfaceCert::IntroType(p, y, n) => vec![id(p), id(y), sub(n)],
        SurfaceCert::InstQuant(p, q, u, n) => vec![id(p), id(q), tm(u), sub(n)],
        SurfaceCert::InstType(p, q, ty, n) => vec![id(p), id(q), type_to_sexp(ty), sub(n)],
        SurfaceCert::Rewrite(rev, h, p, n) => vec![boolean(*rev), id(h), id(p), sub(n)],
        SurfaceCert::Induction(g, i, a, hi, hr, b, s) => {
            vec![id(g), id(i), tm(a), id(hi), id(hr), sub(b), sub(s)]
        }
    };
    let mut items = vec![Sexp::atom(c.rule_name())];
    items.extend(rest);
    Sexp::list(items)
}

pub fn print_surface(c: &SurfaceCert) -> String {
    surface_to_sexp(c).to_string()
}

struct Args<'a> {
    items: &'a [Sexp],
    at: usize,
    pos: Pos,
    head: &'a str,
}

impl<'a> Args<'a> {
    fn new(s: &'a Sexp) -> Result<Self, SyntaxError> {
        match s.as_list() {
            Some([Sexp::Atom(head, _), rest @ ..]) => Ok(Args {
                items: rest,
                at: 0,
                pos: s.pos(),
                head,
            }),
            _ => err(s.pos(), "expected a certificate"),
        }
    }

    fn next(&mut self) -> Result<&'a Sexp, SyntaxError> {
        let item = self
            .items
            .get(self.at)
            .ok_or_else(|| SyntaxError::new(self.pos, format!("too few arguments to {}", self.head)))?;
        self.at += 1;
        Ok(item)
    }

    fn boolean(&mut self) -> Result<bool, SyntaxError> {
        let s = self.next()?;
        match s.as_atom() {
            Some("#t") => Ok(true),
            Some("#f") => Ok(false),
            _ => err(s.pos(), "expected #t or #f"),
        }
    }

    fn ident(&mut self) -> Result<Ident, SyntaxError> {
        name_atom(self.next()?, "a name")
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        explicit_term_from_sexp(self.next()?)
    }

    fn ty(&mut self) -> Result<Type, SyntaxError> {
        parse_type_sexp(self.next()?)
    }

    fn done(&self) -> Result<(), SyntaxError> {
        if self.at == self.items.len() {
            Ok(())
        } else {
            err(self.items[self.at].pos(), format!("too many arguments to {}", self.head))
        }
    }
}

pub fn kernel_from_sexp(s: &Sexp) -> Result<KernelCert, ParseError> {
    let mut a = Args::new(s)?;
    let sub = |a: &mut Args| -> Result<Box<KernelCert>, ParseError> { Ok(Box::new(kernel_from_sexp(a.next()?)?)) };
    let c = match a.head {
        "KHole" | "EHole" => {
            let t = a.next()?;
            let sections = t.as_list().ok_or_else(|| SyntaxError::new(t.pos(), "expected a task"))?;
            KernelCert::Hole(task_from_sections(sections, true)?)
        }
        "KTrivial" => KernelCert::Trivial {
            goal: a.boolean()?,
            premise: a.ident()?,
        },
        "KAxiom" => KernelCert::Axiom {
            formula: a.term()?,
            hyp: a.ident()?,
            goal: a.ident()?,
        },
        "KClear" => KernelCert::Clear {
            goal: a.boolean()?,
            formula: a.term()?,
            premise: a.ident()?,
            next: sub(&mut a)?,
        },
        "KSwap" => KernelCert::Swap {
            goal: a.boolean()?,
            formula: a.term()?,
            premise: a.ident()?,
            next: sub(&mut a)?,
        },
        "KUnfold" => KernelCert::Unfold {
            goal: a.boolean()?,
            formula: a.term()?,
            premise: a.ident()?,
            next: sub(&mut a)?,
        },
        "KAssert" => KernelCert::Assert {
            name: a.ident()?,
            formula: a.term()?,
            goal_branch: sub(&mut a)?,
            hyp_branch: sub(&mut a)?,
        },
        "KSplit" => KernelCert::Split {
            goal: a.boolean()?,
            left: a.term()?,
            right: a.term()?,
            premise: a.ident()?,
            first: sub(&mut a)?,
            second: sub(&mut a)?,
        },
        "KDestruct" => KernelCert::Destruct {
            goal: a.boolean()?,
            left: a.term()?,
            right: a.term()?,
            premise: a.ident()?,
            first_name: a.ident()?,
            second_name: a.ident()?,
            next: sub(&mut a)?,
        },
        "KIntroQuant" => KernelCert::IntroQuant {
            goal: a.boolean()?,
            ty: a.ty()?,
            body: a.term()?,
            premise: a.ident()?,
            var: a.ident()?,
            next: sub(&mut a)?,
        },
        "KInstQuant" => KernelCert::InstQuant {
            goal: a.boolean()?,
            ty: a.ty()?,
            body: a.term()?,
            premise: a.ident()?,
            new_premise: a.ident()?,
            witness: a.term()?,
            next: sub(&mut a)?,
        },
        "KIntroType" => KernelCert::IntroType {
            formula: a.term()?,
            premise: a.ident()?,
            symbol: a.ident()?,
            next: sub(&mut a)?,
        },
        "KInstType" => KernelCert::InstType {
            formula: a.term()?,
            premise: a.ident()?,
            new_premise: a.ident()?,
            ty: a.ty()?,
            next: sub(&mut a)?,
        },
        "KEqRefl" => KernelCert::EqRefl {
            term: a.term()?,
            premise: a.ident()?,
        },
        "KRewrite" => KernelCert::Rewrite {
            goal: a.boolean()?,
            lhs: a.term()?,
            rhs: a.term()?,
            context: a.term()?,
            premise: a.ident()?,
            equality: a.ident()?,
            next: sub(&mut a)?,
        },
        "KInduction" => KernelCert::Induction {
            var: a.ident()?,
            bound: a.term()?,
            context: a.term()?,
            goal: a.ident()?,
            bound_hyp: a.ident()?,
            rec_hyp: a.ident()?,
            base: sub(&mut a)?,
            step: sub(&mut a)?,
        },
        other => return Err(SyntaxError::new(s.pos(), format!("unknown kernel rule `{other}`")).into()),
    };
    a.done()?;
    Ok(c)
}

pub fn parse_kernel(text: &str) -> Result<KernelCert, ParseError> {
    kernel_from_sexp(&parse_one(text)?)
}

pub fn surface_from_sexp(s: &Sexp) -> Result<SurfaceCert, SyntaxError> {
    let mut a = Args::new(s)?;
    let sub = |a: &mut Args| -> Result<Box<SurfaceCert>, SyntaxError> { Ok(Box::new(surface_from_sexp(a.next()?)?)) };
    let c = match a.head {
        "SHole" => SurfaceCert::Hole,
        "STrivial" => SurfaceCert::Trivial(a.ident()?),
        "SAxiom" => SurfaceCert::Axiom(a.ident()?, a.ident()?),
        "SClear" => SurfaceCert::Clear(a.ident()?, sub(&mut a)?),
        "SSwap" => SurfaceCert::Swap(a.ident()?, sub(&mut a)?),
        "SUnfold" => SurfaceCert::Unfold(a.ident()?, sub(&mut a)?),
        "SAssert" => SurfaceCert::Assert(a.ident()?, a.term()?, sub(&mut a)?, sub(&mut a)?),
        "SSplit" => SurfaceCert::Split(a.ident()?, sub(&mut a)?, sub(&mut a)?),
        "SDestruct" => SurfaceCert::Destruct(a.ident()?, a.ident()?, a.ident()?, sub(&mut a)?),
        "SConstruct" => SurfaceCert::Construct(a.ident()?, a.ident()?, a.ident()?, sub(&mut a)?),
        "SIntroQuant" => SurfaceCert::IntroQuant(a.ident()?, a.ident()?, sub(&mut a)?),
        "SInstQuant" => SurfaceCert::InstQuant(a.ident()?, a.ident()?, a.term()?, sub(&mut a)?),
        "SIntroType" => SurfaceCert::IntroType(a.ident()?, a.ident()?, sub(&mut a)?),
        "SInstType" => SurfaceCert::InstType(a.ident()?, a.ident()?, a.ty()?, sub(&mut a)?),
        "SEqRefl" => SurfaceCert::EqRefl(a.ident()?),
        "SEqSym" => SurfaceCert::EqSym(a.ident()?, sub(&mut a)?),
        "SEqTrans" => SurfaceCert::EqTrans(a.ident()?, a.ident()?, a.ident()?, sub(&mut a)?),
        "SRewrite" => SurfaceCert::Rewrite(a.boolean()?, a.ident()?, a.ident()?, sub(&mut a)?),
        "SInduction" => SurfaceCert::Induction(
            a.ident()?,
            a.ident()?,
            a.term()?,
            a.ident()?,
            a.ident()?,
            sub(&mut a)?,
            sub(&mut a)?,
        ),
        other => return err(s.pos(), format!("unknown surface rule `{other}`")),
    };
    a.done()?;
    Ok(c)
}

pub fn parse_surface(text: &str) -> Result<SurfaceCert, SyntaxError> {
    surface_from_sexp(&parse_one(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::typecheck;

    const SETS: &str = include_str!("../tests/data/sets.tsk");

    #[test]
    fn sets_task_parses_and_infers_instances() {
        let task = parse_task(SETS).unwrap();
        assert!(task.well_typed());
        let color = Type::sym("color", vec![]);
        let goal = &task.goals[0].formula;
        let (head, args) = goal.spine();
        assert_eq!(*head, Term::Free(Ident::new("mem"), vec![color.clone()]));
        assert_eq!(args.len(), 2);
        assert_eq!(typecheck(&task.types, &task.sig, goal), Ok(Type::Prop));
    }

    #[test]
    fn task_round_trip() {
        let task = parse_task(SETS).unwrap();
        let printed = print_task(&task);
        let again = parse_task(&printed).unwrap();
        assert_eq!(task, again);
        assert_eq!(printed, print_task(&again));
    }

    #[test]
    fn goal_true_on_empty_signatures() {
        let task = parse_task("(goals (G true))").unwrap();
        assert_eq!(task.goals, vec![Premise::new("G", Term::True)]);
        assert!(task.hyps.is_empty() && task.sig.is_empty());
    }

    #[test]
    fn reserved_declarations_are_rejected() {
        assert_eq!(
            parse_task("(types (int 0))"),
            Err(ParseError::Task(TaskError::Reserved(Ident::new("int"))))
        );
        assert!(matches!(parse_task("(sig (= int))"), Err(ParseError::Task(TaskError::Reserved(_)))));
    }

    #[test]
    fn errors_carry_positions() {
        let Err(ParseError::Syntax(e)) = parse_task("(sig (p prop))\n(goals (G (and p q)))") else {
            panic!("expected a syntax error");
        };
        assert_eq!((e.pos.line, e.pos.col), (2, 18));
        assert!(e.message.contains("unbound"));
    }

    #[test]
    fn binder_shadowing_a_symbol_is_a_new_variable() {
        let task = parse_task("(sig (x int) (p (-> int prop))) (goals (G (forall (x int) (p x))))").unwrap();
        let Term::Binder(_, _, _, body) = &task.goals[0].formula else {
            panic!()
        };
        assert_eq!(**body, Term::app(Term::var("p"), Term::Bound(0)));
        let printed = print_task(&task);
        assert!(printed.contains("(forall (x#1 int) (p x#1))"), "{printed}");
        assert_eq!(parse_task(&printed).unwrap(), task);
    }

    #[test]
    fn ambiguous_instances_need_annotations() {
        let text = "(types (set 1)) (sig (empty (set a))) (goals (G (= empty empty)))";
        let Err(ParseError::Syntax(e)) = parse_task(text) else {
            panic!("expected an inference failure");
        };
        assert!(e.message.contains("cannot infer"), "{}", e.message);
        let ok = "(types (set 1)) (sig (empty (set a))) (goals (G (= (@ empty int) empty)))";
        assert!(parse_task(ok).is_ok());
    }

    #[test]
    fn explicit_printing_reads_back_without_signature() {
        let task = parse_task(SETS).unwrap();
        for p in task.hyps.iter().chain(&task.goals) {
            let s = term_to_sexp(&p.formula, true, &HashSet::new());
            assert_eq!(explicit_term_from_sexp(&s).unwrap(), p.formula);
        }
    }

    #[test]
    fn negative_literals_and_subtraction() {
        let sig = Signature::new();
        let t = parse_term("(< (- 3 -4) 0)", &sig).unwrap();
        assert_eq!(print_term(&t), "(< (- 3 -4) 0)");
    }

    #[test]
    fn kernel_round_trip() {
        let task = parse_task(include_str!("../tests/data/split.tsk")).unwrap();
        let h = Ident::new("H");
        let t1 = task.replace(crate::task::Side::Hyp, &h, vec![Premise::new("H", Term::var("x1"))]);
        let c = KernelCert::Split {
            goal: false,
            left: Term::var("x1"),
            right: Term::var("x2"),
            premise: h,
            first: Box::new(KernelCert::Hole(t1)),
            second: Box::new(KernelCert::Trivial {
                goal: true,
                premise: Ident::new("G"),
            }),
        };
        let text = print_kernel(&c);
        assert!(text.starts_with("(KSplit #f x1 x2 H (KHole ((types) (sig (x1 prop)"));
        assert_eq!(parse_kernel(&text).unwrap(), c);
    }

    #[test]
    fn surface_round_trip() {
        let c = SurfaceCert::Rewrite(
            true,
            Ident::new("E"),
            Ident::new("G"),
            Box::new(SurfaceCert::InstQuant(
                Ident::new("H"),
                Ident::new("H_inst"),
                Term::int(3),
                Box::new(SurfaceCert::Hole),
            )),
        );
        assert_eq!(parse_surface(&print_surface(&c)).unwrap(), c);
    }
}
