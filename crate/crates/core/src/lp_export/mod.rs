//! Export of validated certificate applications to a λΠ-calculus modulo
//! rewriting, in the notation of the Calculus of Constructions.
//!
//! Formulas are encoded shallowly: a proposition is a type, `⊥` is
//! `Π C : Type, C`, the other connectives are their impredicative
//! encodings, and a task `Γ ⊢ Δ` becomes the type of maps from proofs of
//! `Γ` and refutations of `Δ` to `⊥`. Each kernel rule has a combinator in
//! the preamble; the proof term of a certificate chains them.

mod encode;
mod preamble;
mod proof;
mod term;

use std::fmt::Write as _;

use thiserror::Error;

use crate::ident::Ident;

pub use encode::{app_correctness_type, encode_task, encode_term, encode_type, int_literal};
pub use preamble::{and, bot, emit_preamble, ex, leibniz, neg, or, preamble_doc, preamble_names, top, PREAMBLE_MODULE};
pub use proof::{audit, emit_module, export_module, proof_term};
pub use term::{
    app, apps, arrow, cst, fresh_var, lam, parse_term, pi, print_term, LpDoc, LpItem, LpSyntaxError, LpTerm,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("`{0}` is not in scope")]
    Scope(String),
    #[error("type `{0}` mentions prop and cannot instantiate a type parameter")]
    LargeInstance(String),
    #[error("dangling bound index {0}")]
    Dangling(u32),
    #[error("the certificate does not apply: {0}")]
    Rule(String),
    #[error("the certificate does not validate the application")]
    Invalid,
    #[error("scope audit failed: {0}")]
    Audit(String),
}

/// Identifier for an object name: alphanumerics are kept, `_` doubles,
/// any other character `c` becomes `_x{hex}_`, and a nonzero index is
/// appended as `_{id}`. A leading digit is escaped too.
pub fn mangle(x: &Ident) -> String {
    let mut out = String::new();
    for (k, c) in x.name().chars().enumerate() {
        if c.is_ascii_alphanumeric() && !(k == 0 && c.is_ascii_digit()) {
            out.push(c);
        } else if c == '_' {
            out.push_str("__");
        } else {
            let _ = write!(out, "_x{:x}_", c as u32);
        }
    }
    if x.id() > 0 {
        let _ = write!(out, "_{}", x.id());
    }
    out
}

/// Inverse of [`mangle`].
pub fn unmangle(s: &str) -> Option<Ident> {
    let chars: Vec<char> = s.chars().collect();
    let mut name = String::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c != '_' {
            if !c.is_ascii_alphanumeric() || (name.is_empty() && k == 0 && c.is_ascii_digit()) {
                return None;
            }
            name.push(c);
            k += 1;
            continue;
        }
        match chars.get(k + 1) {
            Some('_') => {
                name.push('_');
                k += 2;
            }
            Some('x') => {
                let end = chars[k + 2..].iter().position(|c| *c == '_')? + k + 2;
                let hex: String = chars[k + 2..end].iter().collect();
                let code = u32::from_str_radix(&hex, 16).ok()?;
                name.push(char::from_u32(code)?);
                k = end + 1;
            }
            Some(d) if d.is_ascii_digit() => {
                let digits: String = chars[k + 1..].iter().collect();
                if !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0') {
                    return None;
                }
                let id: u32 = digits.parse().ok()?;
                return Some(Ident::with_id(&name, id));
            }
            _ => return None,
        }
    }
    Some(Ident::new(&name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mangling_examples() {
        assert_eq!(mangle(&Ident::new("H")), "H");
        assert_eq!(mangle(&Ident::new("H.1")), "H_x2e_1");
        assert_eq!(mangle(&Ident::with_id("x", 3)), "x_3");
        assert_eq!(mangle(&Ident::new("a_b")), "a__b");
        assert_eq!(mangle(&Ident::new("1x")), "_x31_x");
        for s in ["H", "H.1", "a_b", "1x", "+", "G_ind"] {
            let x = Ident::new(s);
            assert_eq!(unmangle(&mangle(&x)), Some(x.clone()));
            let y = Ident::with_id(s, 12);
            assert_eq!(unmangle(&mangle(&y)), Some(y));
        }
    }
}
