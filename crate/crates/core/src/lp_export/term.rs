//! λΠ-style terms in CoC notation, with a printer and a reader.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// Locally nameless: `Bound` indices for binders, `Var` for temporaries that
/// are abstracted before emission, `Const` for global names.
#[derive(Clone, Debug)]
pub enum LpTerm {
    Type,
    Const(Arc<str>),
    Var(Arc<str>),
    Bound(u32),
    /// `Π x : A, B`
    Prod(Arc<str>, Arc<LpTerm>, Arc<LpTerm>),
    /// `A → B`, no binder.
    Arrow(Arc<LpTerm>, Arc<LpTerm>),
    /// `λ x : A, B`; the annotation may be omitted.
    Lam(Arc<str>, Option<Arc<LpTerm>>, Arc<LpTerm>),
    App(Arc<LpTerm>, Arc<LpTerm>),
}

impl PartialEq for LpTerm {
    /// Alpha-equivalence: binder hints are ignored.
    fn eq(&self, other: &Self) -> bool {
        use LpTerm::*;
        match (self, other) {
            (Type, Type) => true,
            (Const(a), Const(b)) | (Var(a), Var(b)) => a == b,
            (Bound(i), Bound(j)) => i == j,
            (Prod(_, a1, b1), Prod(_, a2, b2)) => a1 == a2 && b1 == b2,
            (Arrow(a1, b1), Arrow(a2, b2)) => a1 == a2 && b1 == b2,
            (Lam(_, a1, b1), Lam(_, a2, b2)) => a1 == a2 && b1 == b2,
            (App(f1, a1), App(f2, a2)) => f1 == f2 && a1 == a2,
            _ => false,
        }
    }
}

static FRESH: AtomicUsize = AtomicUsize::new(0);

/// A temporary variable, unique in the process.
pub fn fresh_var() -> LpTerm {
    let n = FRESH.fetch_add(1, Ordering::Relaxed);
    LpTerm::Var(Arc::from(format!("%{n}").as_str()))
}

pub fn cst(name: &str) -> LpTerm {
    LpTerm::Const(Arc::from(name))
}

pub fn arrow(a: LpTerm, b: LpTerm) -> LpTerm {
    LpTerm::Arrow(Arc::new(a), Arc::new(b))
}

pub fn app(f: LpTerm, a: LpTerm) -> LpTerm {
    LpTerm::App(Arc::new(f), Arc::new(a))
}

pub fn apps(f: LpTerm, args: impl IntoIterator<Item = LpTerm>) -> LpTerm {
    args.into_iter().fold(f, app)
}

/// `Π hint : dom, body(x)`.
pub fn pi(hint: &str, dom: LpTerm, body: impl FnOnce(LpTerm) -> LpTerm) -> LpTerm {
    let v = fresh_var();
    let b = body(v.clone());
    LpTerm::Prod(Arc::from(hint), Arc::new(dom), Arc::new(b.close(&v)))
}

/// `λ hint : dom, body(x)`.
pub fn lam(hint: &str, dom: LpTerm, body: impl FnOnce(LpTerm) -> LpTerm) -> LpTerm {
    let v = fresh_var();
    let b = body(v.clone());
    LpTerm::Lam(Arc::from(hint), Some(Arc::new(dom)), Arc::new(b.close(&v)))
}

/// Abstracts a temporary variable produced by [`fresh_var`].
pub fn abstract_var(hint: &str, dom: Option<LpTerm>, v: &LpTerm, body: LpTerm) -> LpTerm {
    LpTerm::Lam(Arc::from(hint), dom.map(Arc::new), Arc::new(body.close(v)))
}

impl LpTerm {
    /// Replaces the temporary `v` by index 0 of a new binder body.
    pub fn close(&self, v: &LpTerm) -> LpTerm {
        let LpTerm::Var(name) = v else {
            panic!("close expects a variable")
        };
        self.close_at(0, name)
    }

    fn close_at(&self, k: u32, name: &Arc<str>) -> LpTerm {
        use LpTerm::*;
        match self {
            Var(x) if x == name => Bound(k),
            Type | Const(_) | Var(_) | Bound(_) => self.clone(),
            Prod(h, a, b) => Prod(h.clone(), Arc::new(a.close_at(k, name)), Arc::new(b.close_at(k + 1, name))),
            Arrow(a, b) => Arrow(Arc::new(a.close_at(k, name)), Arc::new(b.close_at(k, name))),
            Lam(h, a, b) => Lam(
                h.clone(),
                a.as_ref().map(|a| Arc::new(a.close_at(k, name))),
                Arc::new(b.close_at(k + 1, name)),
            ),
            App(f, a) => App(Arc::new(f.close_at(k, name)), Arc::new(a.close_at(k, name))),
        }
    }

    /// Instantiates index 0 of a binder body with the locally closed `u`.
    pub fn open(&self, u: &LpTerm) -> LpTerm {
        self.open_at(0, u)
    }

    fn open_at(&self, k: u32, u: &LpTerm) -> LpTerm {
        use LpTerm::*;
        match self {
            Bound(i) if *i == k => u.clone(),
            Type | Const(_) | Var(_) | Bound(_) => self.clone(),
            Prod(h, a, b) => Prod(h.clone(), Arc::new(a.open_at(k, u)), Arc::new(b.open_at(k + 1, u))),
            Arrow(a, b) => Arrow(Arc::new(a.open_at(k, u)), Arc::new(b.open_at(k, u))),
            Lam(h, a, b) => Lam(
                h.clone(),
                a.as_ref().map(|a| Arc::new(a.open_at(k, u))),
                Arc::new(b.open_at(k + 1, u)),
            ),
            App(f, a) => App(Arc::new(f.open_at(k, u)), Arc::new(a.open_at(k, u))),
        }
    }

    /// Applies a λ-abstraction to arguments, reducing the outer redexes.
    pub fn instantiate(&self, args: &[LpTerm]) -> LpTerm {
        let mut t = self.clone();
        let mut rest = args.iter();
        for a in rest.by_ref() {
            match t {
                LpTerm::Lam(_, _, body) => t = body.open(a),
                other => return apps(app(other, a.clone()), rest.cloned()),
            }
        }
        t
    }

    /// Whether no index escapes its binders.
    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &LpTerm, depth: u32) -> bool {
            use LpTerm::*;
            match t {
                Bound(i) => *i < depth,
                Type | Const(_) | Var(_) => true,
                Prod(_, a, b) => go(a, depth) && go(b, depth + 1),
                Arrow(a, b) | App(a, b) => go(a, depth) && go(b, depth),
                Lam(_, a, b) => a.as_ref().is_none_or(|a| go(a, depth)) && go(b, depth + 1),
            }
        }
        go(self, 0)
    }

    /// Constant names, then temporary variable names.
    pub fn names(&self) -> (HashSet<Arc<str>>, HashSet<Arc<str>>) {
        fn go(t: &LpTerm, c: &mut HashSet<Arc<str>>, v: &mut HashSet<Arc<str>>) {
            use LpTerm::*;
            match t {
                Const(x) => {
                    c.insert(x.clone());
                }
                Var(x) => {
                    v.insert(x.clone());
                }
                Type | Bound(_) => {}
                Prod(_, a, b) | Arrow(a, b) | App(a, b) => {
                    go(a, c, v);
                    go(b, c, v);
                }
                Lam(_, a, b) => {
                    if let Some(a) = a {
                        go(a, c, v);
                    }
                    go(b, c, v);
                }
            }
        }
        let (mut c, mut v) = (HashSet::new(), HashSet::new());
        go(self, &mut c, &mut v);
        (c, v)
    }

    /// Alpha-equivalence ignoring λ annotations.
    pub fn eq_erased(&self, other: &LpTerm) -> bool {
        use LpTerm::*;
        match (self, other) {
            (Lam(_, _, b1), Lam(_, _, b2)) => b1.eq_erased(b2),
            (Prod(_, a1, b1), Prod(_, a2, b2))
            | (Arrow(a1, b1), Arrow(a2, b2))
            | (App(a1, b1), App(a2, b2)) => a1.eq_erased(a2) && b1.eq_erased(b2),
            _ => self == other,
        }
    }

    pub fn size(&self) -> usize {
        use LpTerm::*;
        match self {
            Type | Const(_) | Var(_) | Bound(_) => 1,
            Prod(_, a, b) | Arrow(a, b) | App(a, b) => 1 + a.size() + b.size(),
            Lam(_, a, b) => 1 + a.as_ref().map_or(0, |a| a.size()) + b.size(),
        }
    }
}

pub const KEYWORDS: [&str; 9] = ["Type", "TYPE", "symbol", "rule", "require", "open", "with", "as", "in"];

/// Prints in CoC notation. Binder names are made distinct from every
/// constant of the term and from the names in scope, so the output reads
/// back to the same term.
pub fn print_term(t: &LpTerm) -> String {
    let (consts, _) = t.names();
    let mut taken: HashSet<String> = consts.iter().map(|c| c.to_string()).collect();
    taken.extend(KEYWORDS.iter().map(|s| s.to_string()));
    let mut p = Printer {
        taken,
        scope: Vec::new(),
        in_scope: HashMap::new(),
        out: String::new(),
    };
    p.term(t, Level::Top);
    p.out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Top,
    /// Binder domain: arrows are allowed, binders are not.
    Dom,
    Arg0,
    Atom,
}

struct Printer {
    taken: HashSet<String>,
    scope: Vec<String>,
    in_scope: HashMap<String, usize>,
    out: String,
}

impl Printer {
    fn push(&mut self, hint: &str) -> String {
        let base = if hint.is_empty() { "x" } else { hint };
        let mut name = base.to_string();
        let mut k = 0;
        while self.taken.contains(&name) || self.in_scope.get(&name).is_some_and(|n| *n > 0) {
            k += 1;
            name = format!("{base}{k}");
        }
        *self.in_scope.entry(name.clone()).or_insert(0) += 1;
        self.scope.push(name.clone());
        name
    }

    fn pop(&mut self) {
        let name = self.scope.pop().expect("balanced scope");
        *self.in_scope.get_mut(&name).expect("in scope") -= 1;
    }

    fn term(&mut self, t: &LpTerm, level: Level) {
        use LpTerm::*;
        match t {
            Type => self.out.push_str("Type"),
            Const(c) => self.out.push_str(c),
            Var(v) => self.out.push_str(v),
            Bound(i) => {
                let name = self.scope[self.scope.len() - 1 - *i as usize].clone();
                self.out.push_str(&name);
            }
            Prod(h, a, b) => self.binder("Π", h, Some(a), b, level),
            Lam(h, a, b) => self.binder("λ", h, a.as_deref(), b, level),
            Arrow(a, b) => {
                let paren = level > Level::Dom;
                if paren {
                    self.out.push('(');
                }
                self.term(a, Level::Arg0);
                self.out.push_str(" → ");
                self.term(b, if level == Level::Dom { Level::Dom } else { Level::Top });
                if paren {
                    self.out.push(')');
                }
            }
            App(f, a) => {
                let paren = level == Level::Atom;
                if paren {
                    self.out.push('(');
                }
                self.term(f, Level::Arg0);
                self.out.push(' ');
                self.term(a, Level::Atom);
                if paren {
                    self.out.push(')');
                }
            }
        }
    }

    fn binder(&mut self, sym: &str, hint: &str, dom: Option<&LpTerm>, body: &LpTerm, level: Level) {
        let paren = level > Level::Top;
        if paren {
            self.out.push('(');
        }
        if let Some(d) = dom {
            // The domain is printed before the name enters scope.
            let mut dom_text = String::new();
            std::mem::swap(&mut self.out, &mut dom_text);
            self.term(d, Level::Dom);
            std::mem::swap(&mut self.out, &mut dom_text);
            let name = self.push(hint);
            let _ = write!(self.out, "{sym} {name} : {dom_text}, ");
        } else {
            let name = self.push(hint);
            let _ = write!(self.out, "{sym} {name}, ");
        }
        self.term(body, Level::Top);
        self.pop();
        if paren {
            self.out.push(')');
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("offset {offset}: {message}")]
pub struct LpSyntaxError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
}

const SYMBOLS: [&str; 9] = ["Π", "λ", "→", ",", ":", "(", ")", "≔", ";"];

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, LpSyntaxError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '%' {
            let mut s = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '%' {
                    s.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), i));
        } else if let Some(sym) = SYMBOLS.iter().find(|s| s.starts_with(c)) {
            it.next();
            out.push((Tok::Sym(sym), i));
        } else {
            return Err(LpSyntaxError {
                offset: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Reads a term printed by [`print_term`]. Names not bound in the text
/// become constants.
pub fn parse_term(text: &str) -> Result<LpTerm, LpSyntaxError> {
    let toks = tokenize(text)?;
    let mut p = Reader {
        toks,
        at: 0,
        scope: Vec::new(),
        end: text.len(),
    };
    let t = p.term()?;
    if p.at != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t)
}

struct Reader {
    toks: Vec<(Tok, usize)>,
    at: usize,
    scope: Vec<String>,
    end: usize,
}

impl Reader {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn error(&self, message: &str) -> LpSyntaxError {
        LpSyntaxError {
            offset: self.toks.get(self.at).map_or(self.end, |(_, o)| *o),
            message: message.to_string(),
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), LpSyntaxError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == sym => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.error(&format!("expected `{sym}`"))),
        }
    }

    fn ident(&mut self) -> Result<String, LpSyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn term(&mut self) -> Result<LpTerm, LpSyntaxError> {
        match self.peek() {
            Some(Tok::Sym(s @ ("Π" | "λ"))) => {
                let is_pi = *s == "Π";
                self.at += 1;
                let name = self.ident()?;
                let dom = if matches!(self.peek(), Some(Tok::Sym(":"))) {
                    self.at += 1;
                    Some(self.domain()?)
                } else {
                    None
                };
                self.expect(",")?;
                self.scope.push(name.clone());
                let body = self.term();
                self.scope.pop();
                let body = Arc::new(body?);
                if is_pi {
                    let dom = dom.ok_or_else(|| self.error("a product needs a domain"))?;
                    Ok(LpTerm::Prod(Arc::from(name.as_str()), Arc::new(dom), body))
                } else {
                    Ok(LpTerm::Lam(Arc::from(name.as_str()), dom.map(Arc::new), body))
                }
            }
            _ => {
                let left = self.application()?;
                if matches!(self.peek(), Some(Tok::Sym("→"))) {
                    self.at += 1;
                    let right = self.term()?;
                    Ok(arrow(left, right))
                } else {
                    Ok(left)
                }
            }
        }
    }

    fn domain(&mut self) -> Result<LpTerm, LpSyntaxError> {
        let left = self.application()?;
        if matches!(self.peek(), Some(Tok::Sym("→"))) {
            self.at += 1;
            Ok(arrow(left, self.domain()?))
        } else {
            Ok(left)
        }
    }

    fn application(&mut self) -> Result<LpTerm, LpSyntaxError> {
        let mut t = self.atom()?;
        while matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym("("))) {
            let a = self.atom()?;
            t = app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<LpTerm, LpSyntaxError> {
        match self.peek() {
            Some(Tok::Sym("(")) => {
                self.at += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                if name == "Type" {
                    return Ok(LpTerm::Type);
                }
                match self.scope.iter().rev().position(|s| *s == name) {
                    Some(i) => Ok(LpTerm::Bound(i as u32)),
                    None => Ok(cst(&name)),
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// One item of an emitted file.
#[derive(Clone, Debug, PartialEq)]
pub enum LpItem {
    Comment(String),
    Require(String),
    Symbol {
        name: String,
        ty: LpTerm,
        def: Option<LpTerm>,
    },
    /// A rewrite rule, kept verbatim.
    Rule(String),
}

/// An emitted file: a sequence of items.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LpDoc {
    pub items: Vec<LpItem>,
}

impl LpDoc {
    pub fn symbol(&mut self, name: &str, ty: LpTerm, def: Option<LpTerm>) {
        self.items.push(LpItem::Symbol {
            name: name.to_string(),
            ty,
            def,
        });
    }

    /// One comment item per line of `text`.
    pub fn comment(&mut self, text: &str) {
        for line in text.lines() {
            self.items.push(LpItem::Comment(line.to_string()));
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                LpItem::Comment(c) => {
                    for line in c.lines() {
                        let _ = writeln!(out, "// {line}");
                    }
                }
                LpItem::Require(m) => {
                    let _ = writeln!(out, "require open {m};");
                }
                LpItem::Symbol { name, ty, def } => {
                    let _ = write!(out, "symbol {name} : {}", print_term(ty));
                    if let Some(d) = def {
                        let _ = write!(out, "\n  ≔ {}", print_term(d));
                    }
                    out.push_str(";\n");
                }
                LpItem::Rule(r) => {
                    let _ = writeln!(out, "rule {r};");
                }
            }
        }
        out
    }

    /// Reads a rendered document back.
    pub fn parse(text: &str) -> Result<LpDoc, LpSyntaxError> {
        let mut doc = LpDoc::default();
        let mut offset = 0;
        let mut rest = text;
        loop {
            let trimmed = rest.trim_start();
            offset += rest.len() - trimmed.len();
            rest = trimmed;
            if rest.is_empty() {
                return Ok(doc);
            }
            if let Some(after) = rest.strip_prefix("//") {
                let end = after.find('\n').unwrap_or(after.len());
                doc.items.push(LpItem::Comment(after[..end].trim_start().to_string()));
                offset += 2 + end;
                rest = &after[end..];
                continue;
            }
            let end = rest.find(';').ok_or(LpSyntaxError {
                offset,
                message: "missing `;`".into(),
            })?;
            let item = &rest[..end];
            let err = |e: LpSyntaxError| LpSyntaxError {
                offset: offset + e.offset,
                message: e.message,
            };
            if let Some(m) = item.strip_prefix("require open ") {
                doc.items.push(LpItem::Require(m.trim().to_string()));
            } else if let Some(r) = item.strip_prefix("rule ") {
                doc.items.push(LpItem::Rule(r.trim().to_string()));
            } else if let Some(s) = item.strip_prefix("symbol ") {
                let colon = s.find(':').ok_or(LpSyntaxError {
                    offset,
                    message: "missing `:`".into(),
                })?;
                let name = s[..colon].trim().to_string();
                let body = &s[colon + ':'.len_utf8()..];
                let base = offset + "symbol ".len() + colon + 1;
                let (ty, def) = match body.find('≔') {
                    Some(k) => (
                        parse_term(&body[..k]).map_err(|e| err(LpSyntaxError { offset: base - offset + e.offset, ..e }))?,
                        Some(parse_term(&body[k + '≔'.len_utf8()..]).map_err(|e| err(LpSyntaxError {
                            offset: base - offset + k + e.offset,
                            ..e
                        }))?),
                    ),
                    None => (parse_term(body).map_err(|e| err(LpSyntaxError { offset: base - offset + e.offset, ..e }))?, None),
                };
                doc.items.push(LpItem::Symbol { name, ty, def });
            } else {
                return Err(LpSyntaxError {
                    offset,
                    message: "unknown item".into(),
                });
            }
            offset += end + 1;
            rest = &rest[end + 1..];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_avoids_capture() {
        // λ x, λ x', x  where the outer binder is referenced under a same-hint binder.
        let t = LpTerm::Lam(
            Arc::from("x"),
            None,
            Arc::new(LpTerm::Lam(Arc::from("x"), None, Arc::new(LpTerm::Bound(1)))),
        );
        let text = print_term(&t);
        assert_eq!(text, "λ x, λ x1, x");
        assert_eq!(parse_term(&text).unwrap(), t);
    }

    #[test]
    fn binder_names_avoid_constants() {
        let t = pi("C", LpTerm::Type, |c| arrow(cst("C"), c));
        let text = print_term(&t);
        assert_eq!(text, "Π C1 : Type, C → C1");
        assert_eq!(parse_term(&text).unwrap(), t);
    }

    #[test]
    fn arrows_and_applications() {
        let t = arrow(arrow(cst("a"), cst("b")), apps(cst("f"), [cst("x"), app(cst("g"), cst("y"))]));
        assert_eq!(print_term(&t), "(a → b) → f x (g y)");
        assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
    }
}
