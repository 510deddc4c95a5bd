//! A small type checker for the Calculus of Constructions, used only as a
//! test oracle for emitted terms. It knows β and δ conversion; rewrite
//! rules are ignored, so symbols defined by rules are opaque.

use std::collections::HashMap;

use certforge::lp_export::{fresh_var, LpDoc, LpItem, LpTerm};

fn kind() -> LpTerm {
    LpTerm::Const("%Kind".into())
}

fn is_sort(t: &LpTerm) -> bool {
    matches!(t, LpTerm::Type) || *t == kind()
}

#[derive(Default)]
pub struct Coc {
    consts: HashMap<String, (LpTerm, Option<LpTerm>)>,
    vars: HashMap<String, LpTerm>,
}

impl Coc {
    /// Checks every symbol of `doc` in order and adds it to the context.
    pub fn add_doc(&mut self, doc: &LpDoc) -> Result<(), String> {
        for item in &doc.items {
            if let LpItem::Symbol { name, ty, def } = item {
                self.declare(name, ty, def.as_ref())
                    .map_err(|e| format!("symbol `{name}`: {e}"))?;
            }
        }
        Ok(())
    }

    pub fn declare(&mut self, name: &str, ty: &LpTerm, def: Option<&LpTerm>) -> Result<(), String> {
        let s = self.infer(ty)?;
        let s = self.whnf(&s);
        if !is_sort(&s) {
            return Err("declared type is not a type".into());
        }
        if let Some(d) = def {
            self.check(d, ty)?;
        }
        self.consts.insert(name.to_string(), (ty.clone(), def.cloned()));
        Ok(())
    }

    pub fn check(&mut self, t: &LpTerm, ty: &LpTerm) -> Result<(), String> {
        let found = self.infer(t)?;
        if self.conv(&found, ty) {
            Ok(())
        } else {
            Err(format!(
                "type mismatch: expected {}, found {}",
                certforge::lp_export::print_term(ty),
                certforge::lp_export::print_term(&found)
            ))
        }
    }

    fn bind(&mut self, dom: &LpTerm) -> LpTerm {
        let v = fresh_var();
        let LpTerm::Var(name) = &v else { unreachable!() };
        self.vars.insert(name.to_string(), dom.clone());
        v
    }

    fn sort_of(&mut self, t: &LpTerm) -> Result<LpTerm, String> {
        let s = self.infer(t)?;
        let s = self.whnf(&s);
        if is_sort(&s) {
            Ok(s)
        } else {
            Err(format!("{} is not a type", certforge::lp_export::print_term(t)))
        }
    }

    pub fn infer(&mut self, t: &LpTerm) -> Result<LpTerm, String> {
        match t {
            LpTerm::Type => Ok(kind()),
            LpTerm::Const(c) => self
                .consts
                .get(c.as_ref())
                .map(|(ty, _)| ty.clone())
                .ok_or_else(|| format!("unknown constant `{c}`")),
            LpTerm::Var(v) => self.vars.get(v.as_ref()).cloned().ok_or_else(|| format!("unbound `{v}`")),
            LpTerm::Bound(i) => Err(format!("dangling index {i}")),
            LpTerm::Prod(_, a, b) => {
                self.sort_of(a)?;
                let v = self.bind(a);
                self.sort_of(&b.open(&v))
            }
            LpTerm::Arrow(a, b) => {
                self.sort_of(a)?;
                self.sort_of(b)
            }
            LpTerm::Lam(h, Some(a), b) => {
                self.sort_of(a)?;
                let v = self.bind(a);
                let tb = self.infer(&b.open(&v))?;
                if tb == kind() {
                    return Err("abstraction over a kind".into());
                }
                Ok(LpTerm::Prod(h.clone(), a.clone(), tb.close(&v).into()))
            }
            LpTerm::Lam(_, None, _) => Err("cannot infer the type of an unannotated abstraction".into()),
            LpTerm::App(f, a) => {
                let tf = self.infer(f)?;
                match self.whnf(&tf) {
                    LpTerm::Prod(_, dom, cod) => {
                        self.check(a, &dom)?;
                        Ok(cod.open(a))
                    }
                    LpTerm::Arrow(dom, cod) => {
                        self.check(a, &dom)?;
                        Ok(cod.as_ref().clone())
                    }
                    other => Err(format!(
                        "applying a non-function of type {}",
                        certforge::lp_export::print_term(&other)
                    )),
                }
            }
        }
    }

    pub fn whnf(&self, t: &LpTerm) -> LpTerm {
        let mut t = t.clone();
        loop {
            match &t {
                LpTerm::App(f, a) => {
                    let h = self.whnf(f);
                    match h {
                        LpTerm::Lam(_, _, b) => t = b.open(a),
                        h => return LpTerm::App(h.into(), a.clone()),
                    }
                }
                LpTerm::Const(c) => match self.consts.get(c.as_ref()) {
                    Some((_, Some(d))) => t = d.clone(),
                    _ => return t,
                },
                _ => return t,
            }
        }
    }

    pub fn conv(&self, a: &LpTerm, b: &LpTerm) -> bool {
        if a == b {
            return true;
        }
        let (a, b) = (self.whnf(a), self.whnf(b));
        use LpTerm::*;
        match (&a, &b) {
            (Type, Type) => true,
            (Const(x), Const(y)) | (Var(x), Var(y)) => x == y,
            (Prod(_, a1, b1), Prod(_, a2, b2)) => {
                let v = fresh_var();
                self.conv(a1, a2) && self.conv(&b1.open(&v), &b2.open(&v))
            }
            (Arrow(a1, b1), Arrow(a2, b2)) => self.conv(a1, a2) && self.conv(b1, b2),
            (Prod(_, a1, b1), Arrow(a2, b2)) | (Arrow(a2, b2), Prod(_, a1, b1)) => {
                let v = fresh_var();
                self.conv(a1, a2) && self.conv(&b1.open(&v), b2)
            }
            (Lam(_, _, b1), Lam(_, _, b2)) => {
                let v = fresh_var();
                self.conv(&b1.open(&v), &b2.open(&v))
            }
            (Lam(_, _, body), other) | (other, Lam(_, _, body)) => {
                let v = fresh_var();
                self.conv(&body.open(&v), &LpTerm::App(other.clone().into(), v.into()))
            }
            (App(f1, a1), App(f2, a2)) => self.conv(f1, f2) && self.conv(a1, a2),
            _ => false,
        }
    }
}

/// A checker loaded with the preamble.
pub fn with_preamble() -> Coc {
    let mut c = Coc::default();
    c.add_doc(&certforge::lp_export::preamble_doc())
        .expect("the preamble typechecks");
    c
}
