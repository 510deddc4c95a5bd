//! Proof terms for kernel certificates and the emitted module.

use std::collections::{HashMap, HashSet};

use super::encode::{close_lams, restore, Env};
use super::preamble::{neg, or, preamble_names, use_combinator, PREAMBLE_MODULE};
use super::term::{app, apps, arrow, cst, fresh_var, pi, LpDoc, LpItem, LpTerm};
use super::{encode_task, mangle, ExportError};
use crate::cert::KernelCert;
use crate::checker::{apply_rule, check_application};
use crate::ident::Ident;
use crate::syntax::print_type;
use crate::task::{Side, Task};
use crate::term::{Connective, Term};
use crate::theories::as_equality;
use crate::types::Type;

struct Translator {
    env: Env,
    prem: HashMap<Ident, LpTerm>,
    holes: Vec<LpTerm>,
    next_hole: usize,
}

fn lam_var(hint: &Ident, dom: LpTerm, v: &LpTerm, body: LpTerm) -> LpTerm {
    super::term::abstract_var(&mangle(hint), Some(dom), v, body)
}

fn as_family(t: LpTerm) -> LpTerm {
    match t {
        LpTerm::Prod(h, dom, b) if matches!(*dom, LpTerm::Type) => LpTerm::Lam(h, Some(dom), b),
        other => other,
    }
}

impl Translator {
    fn premise(&self, p: &Ident) -> Result<LpTerm, ExportError> {
        self.prem
            .get(p)
            .cloned()
            .ok_or_else(|| ExportError::Scope(p.to_string()))
    }

    /// Binds `name` to a fresh variable while translating `next` against
    /// `task`, and abstracts it with annotation `dom`.
    fn under(&mut self, name: &Ident, dom: LpTerm, next: &KernelCert, task: &Task) -> Result<LpTerm, ExportError> {
        let v = fresh_var();
        let old = self.prem.insert(name.clone(), v.clone());
        let body = self.go(next, task);
        restore(&mut self.prem, name, old);
        Ok(lam_var(name, dom, &v, body?))
    }

    fn go(&mut self, c: &KernelCert, task: &Task) -> Result<LpTerm, ExportError> {
        let children = apply_rule(c, task).map_err(|e| ExportError::Rule(e.to_string()))?;
        let small = |ty: &Type| ty.is_small();
        Ok(match c {
            KernelCert::Hole(_) => {
                let s = self
                    .holes
                    .get(self.next_hole)
                    .cloned()
                    .ok_or_else(|| ExportError::Rule("more holes than leaves".into()))?;
                self.next_hole += 1;
                let mut args = Vec::new();
                for (ty, _) in task.types.iter() {
                    args.push(self.env.types.get(ty).cloned().ok_or_else(|| ExportError::Scope(ty.to_string()))?);
                }
                for (f, _) in task.sig.iter() {
                    args.push(self.env.syms.get(f).cloned().ok_or_else(|| ExportError::Scope(f.to_string()))?);
                }
                for p in task.hyps.iter().chain(&task.goals) {
                    args.push(self.premise(&p.name)?);
                }
                apps(s, args)
            }
            KernelCert::Trivial { goal, premise } => {
                let name = if *goal { "trivial_goal" } else { "trivial_hyp" };
                app(cst(name), self.premise(premise)?)
            }
            KernelCert::Axiom { formula, hyp, goal } => apps(
                cst("axiom"),
                [self.env.term(formula)?, self.premise(hyp)?, self.premise(goal)?],
            ),
            KernelCert::Clear { premise, next, .. } => {
                let old = self.prem.remove(premise);
                let body = self.go(next, &children[0]);
                restore(&mut self.prem, premise, old);
                body?
            }
            KernelCert::Swap {
                goal,
                formula,
                premise,
                next,
            } => {
                let t = self.env.term(formula)?;
                let p = self.premise(premise)?;
                if *goal {
                    let k = self.under(premise, t.clone(), next, &children[0])?;
                    apps(cst("swap_goal"), [t, k, p])
                } else {
                    let k = self.under(premise, neg(t.clone()), next, &children[0])?;
                    apps(cst("swap_hyp"), [t, k, p])
                }
            }
            KernelCert::Unfold {
                goal,
                formula,
                premise,
                next,
            } => match formula {
                Term::Binary(Connective::Imp, a, b) => {
                    let (a, b) = (self.env.term(a)?, self.env.term(b)?);
                    let p = self.premise(premise)?;
                    let unfolded = or(neg(a.clone()), b.clone());
                    if *goal {
                        let k = self.under(premise, neg(unfolded), next, &children[0])?;
                        apps(cst("unfold_imp_goal"), [a, b, k, p])
                    } else {
                        let k = self.under(premise, unfolded, next, &children[0])?;
                        apps(cst("unfold_imp_hyp"), [a, b, k, p])
                    }
                }
                // `a ⇔ b` is encoded as `(a → b) ∧ (b → a)` already.
                _ => self.go(next, &children[0])?,
            },
            KernelCert::Assert {
                name,
                formula,
                goal_branch,
                hyp_branch,
            } => {
                let t = self.env.term(formula)?;
                let k1 = self.under(name, neg(t.clone()), goal_branch, &children[0])?;
                let k2 = self.under(name, t.clone(), hyp_branch, &children[1])?;
                apps(cst("cut"), [t, k1, k2])
            }
            KernelCert::Split {
                goal,
                left,
                right,
                premise,
                first,
                second,
            } => {
                let (l, r) = (self.env.term(left)?, self.env.term(right)?);
                let p = self.premise(premise)?;
                let wrap = |t: LpTerm| if *goal { neg(t) } else { t };
                let k1 = self.under(premise, wrap(l.clone()), first, &children[0])?;
                let k2 = self.under(premise, wrap(r.clone()), second, &children[1])?;
                let name = if *goal { "split_goal" } else { "split" };
                apps(cst(name), [l, r, k1, k2, p])
            }
            KernelCert::Destruct {
                goal,
                left,
                right,
                premise,
                first_name,
                second_name,
                next,
            } => {
                let (l, r) = (self.env.term(left)?, self.env.term(right)?);
                let p = self.premise(premise)?;
                let wrap = |t: LpTerm| if *goal { neg(t) } else { t };
                let old = self.prem.remove(premise);
                let (v1, v2) = (fresh_var(), fresh_var());
                let o1 = self.prem.insert(first_name.clone(), v1.clone());
                let o2 = self.prem.insert(second_name.clone(), v2.clone());
                let body = self.go(next, &children[0]);
                restore(&mut self.prem, second_name, o2);
                restore(&mut self.prem, first_name, o1);
                restore(&mut self.prem, premise, old);
                let k = lam_var(first_name, wrap(l.clone()), &v1, lam_var(second_name, wrap(r.clone()), &v2, body?));
                let name = if *goal { "destruct_goal" } else { "destruct_hyp" };
                apps(cst(name), [l, r, k, p])
            }
            KernelCert::IntroQuant {
                goal,
                ty,
                body,
                premise,
                var,
                next,
            } => {
                let tau = self.env.ty(ty)?;
                let b = self.env.term(body)?;
                let p = self.premise(premise)?;
                let y = fresh_var();
                let old = self.env.syms.insert(var.clone(), y.clone());
                let opened = b.instantiate(std::slice::from_ref(&y));
                let dom = if *goal { neg(opened) } else { opened };
                let inner = self.under(premise, dom, next, &children[0]);
                restore(&mut self.env.syms, var, old);
                let k = lam_var(var, tau.clone(), &y, inner?);
                let name = if *goal { "intro_forall" } else { "intro_exists" };
                use_combinator(name, !small(ty), vec![tau, b, k, p])
            }
            KernelCert::InstQuant {
                goal,
                ty,
                body,
                premise,
                new_premise,
                witness,
                next,
            } => {
                let tau = self.env.ty(ty)?;
                let b = self.env.term(body)?;
                let u = self.env.term(witness)?;
                let p = self.premise(premise)?;
                let opened = b.instantiate(std::slice::from_ref(&u));
                let dom = if *goal { neg(opened) } else { opened };
                let k = self.under(new_premise, dom, next, &children[0])?;
                let name = if *goal { "inst_exists" } else { "inst_forall" };
                use_combinator(name, !small(ty), vec![tau, b, u, k, p])
            }
            KernelCert::IntroType {
                formula,
                premise,
                symbol,
                next,
            } => {
                let fam = as_family(self.env.term(formula)?);
                let p = self.premise(premise)?;
                let i = fresh_var();
                let old = self.env.types.insert(symbol.clone(), i.clone());
                let dom = neg(fam.instantiate(std::slice::from_ref(&i)));
                let inner = self.under(premise, dom, next, &children[0]);
                restore(&mut self.env.types, symbol, old);
                let k = lam_var(symbol, LpTerm::Type, &i, inner?);
                apps(cst("intro_type"), [fam, k, p])
            }
            KernelCert::InstType {
                formula,
                premise,
                new_premise,
                ty,
                next,
            } => {
                if !ty.is_small() {
                    return Err(ExportError::LargeInstance(print_type(ty)));
                }
                let fam = as_family(self.env.term(formula)?);
                let sigma = self.env.ty(ty)?;
                let p = self.premise(premise)?;
                let dom = fam.instantiate(std::slice::from_ref(&sigma));
                let k = self.under(new_premise, dom, next, &children[0])?;
                apps(cst("inst_type"), [fam, sigma, k, p])
            }
            KernelCert::EqRefl { term, premise } => {
                let g = task.get(Side::Goal, premise).expect("checked by the rule");
                let (ty, _, _) = as_equality(g).expect("checked by the rule");
                let ty = ty.clone();
                let tau = self.env.ty(&ty)?;
                let x = self.env.term(term)?;
                use_combinator("refl_goal", !small(&ty), vec![tau, x, self.premise(premise)?])
            }
            KernelCert::Rewrite {
                goal,
                lhs,
                rhs,
                context,
                premise,
                equality,
                next,
            } => {
                let e = task.get(Side::Hyp, equality).expect("checked by the rule");
                let (ty, _, _) = as_equality(e).expect("checked by the rule");
                let ty = ty.clone();
                let tau = self.env.ty(&ty)?;
                let (l, r) = (self.env.term(lhs)?, self.env.term(rhs)?);
                let ctx = self.env.term(context)?;
                let p = self.premise(premise)?;
                let e = self.premise(equality)?;
                let after = ctx.instantiate(std::slice::from_ref(&r));
                let dom = if *goal { neg(after) } else { after };
                let k = self.under(premise, dom, next, &children[0])?;
                let name = if *goal { "rewrite_goal" } else { "rewrite_hyp" };
                use_combinator(name, !small(&ty), vec![tau, l, r, ctx, k, e, p])
            }
            KernelCert::Induction {
                var,
                bound,
                context,
                goal,
                bound_hyp,
                rec_hyp,
                base,
                step,
            } => {
                let a = self.env.term(bound)?;
                let b = self.env.term(context)?;
                let i = self.env.syms.get(var).cloned().ok_or_else(|| ExportError::Scope(var.to_string()))?;
                let g = self.premise(goal)?;
                let kb = self.branch(var, goal, &b, &[(bound_hyp, Rel::Le(a.clone()))], base, &children[0])?;
                let ks = self.branch(
                    var,
                    goal,
                    &b,
                    &[(bound_hyp, Rel::Gt(a.clone())), (rec_hyp, Rel::Below(b.clone()))],
                    step,
                    &children[1],
                )?;
                apps(cst("induction"), [a, b, kb, ks, i, g])
            }
        })
    }

    /// `λ j : int, λ G : ¬ b j, λ H…, next` for one induction branch.
    fn branch(
        &mut self,
        var: &Ident,
        goal: &Ident,
        b: &LpTerm,
        hyps: &[(&Ident, Rel)],
        next: &KernelCert,
        task: &Task,
    ) -> Result<LpTerm, ExportError> {
        let j = fresh_var();
        let old_sym = self.env.syms.insert(var.clone(), j.clone());
        let gv = fresh_var();
        let old_goal = self.prem.insert(goal.clone(), gv.clone());
        let mut vars = Vec::new();
        let mut olds = Vec::new();
        for (h, rel) in hyps {
            let v = fresh_var();
            olds.push(self.prem.insert((*h).clone(), v.clone()));
            let dom = match rel {
                Rel::Le(a) => apps(cst("le"), [j.clone(), a.clone()]),
                Rel::Gt(a) => apps(cst("gt"), [j.clone(), a.clone()]),
                Rel::Below(b) => pi("n", cst("int"), |n| {
                    arrow(apps(cst("lt"), [n.clone(), j.clone()]), b.instantiate(&[n]))
                }),
            };
            vars.push(((*h).clone(), dom, v));
        }
        let body = self.go(next, task);
        for ((h, _), old) in hyps.iter().zip(olds).rev() {
            restore(&mut self.prem, h, old);
        }
        restore(&mut self.prem, goal, old_goal);
        restore(&mut self.env.syms, var, old_sym);
        let mut body = body?;
        for (h, dom, v) in vars.into_iter().rev() {
            body = lam_var(&h, dom, &v, body);
        }
        body = lam_var(goal, neg(b.instantiate(std::slice::from_ref(&j))), &gv, body);
        Ok(lam_var(var, cst("int"), &j, body))
    }
}

enum Rel {
    Le(LpTerm),
    Gt(LpTerm),
    Below(LpTerm),
}

/// The proof term for `cert` applied to `task` with leaves `leaves`:
/// `λ s₁ … sₙ, λ signature, λ premises, t(cert)`, where `sₖ` is annotated
/// with `hole_types[k]`.
fn build_proof(task: &Task, leaves: &[Task], cert: &KernelCert, hole_types: Vec<LpTerm>) -> Result<LpTerm, ExportError> {
    if !check_application(task, leaves, cert) {
        return Err(ExportError::Invalid);
    }
    let mut holes = Vec::new();
    let mut outer = Vec::new();
    for (k, ty) in hole_types.into_iter().enumerate() {
        let v = fresh_var();
        holes.push(v.clone());
        outer.push((format!("s{}", k + 1), ty, v));
    }
    let mut env = Env::default();
    let mut binders = env.bind_signature(task)?;
    let mut prem = HashMap::new();
    for (p, (hint, dom)) in task.hyps.iter().chain(&task.goals).zip(env.premises(task)?) {
        let v = fresh_var();
        prem.insert(p.name.clone(), v.clone());
        binders.push((hint, dom, v));
    }
    let mut tr = Translator {
        env,
        prem,
        holes,
        next_hole: 0,
    };
    let body = tr.go(cert, task)?;
    outer.extend(binders);
    Ok(close_lams(outer, body))
}

/// The proof term of a validated application, of type
/// [`app_correctness_type`].
pub fn proof_term(task: &Task, leaves: &[Task], cert: &KernelCert) -> Result<LpTerm, ExportError> {
    let hole_types = leaves.iter().map(encode_task).collect::<Result<Vec<_>, _>>()?;
    build_proof(task, leaves, cert, hole_types)
}

fn hole_name(k: usize) -> String {
    format!("task_{}", k + 1)
}

/// The module for a validated application: the preamble import, one
/// declaration per hole task, the task itself, and the proof.
pub fn export_module(task: &Task, leaves: &[Task], cert: &KernelCert) -> Result<LpDoc, ExportError> {
    let hole_types: Vec<LpTerm> = (0..leaves.len()).map(|k| cst(&hole_name(k))).collect();
    let proof = build_proof(task, leaves, cert, hole_types.clone())?;
    let mut doc = LpDoc::default();
    doc.comment("certforge proof module");
    doc.items.push(LpItem::Require(PREAMBLE_MODULE.to_string()));
    for (k, leaf) in leaves.iter().enumerate() {
        doc.symbol(&hole_name(k), LpTerm::Type, Some(encode_task(leaf)?));
    }
    doc.symbol("task", LpTerm::Type, Some(encode_task(task)?));
    let ty = hole_types.into_iter().rev().fold(cst("task"), |acc, h| arrow(h, acc));
    doc.symbol("proof", ty, Some(proof));
    audit(&doc)?;
    Ok(doc)
}

/// [`export_module`], rendered.
pub fn emit_module(task: &Task, leaves: &[Task], cert: &KernelCert) -> Result<String, ExportError> {
    Ok(export_module(task, leaves, cert)?.render())
}

/// Every name in the document must be a preamble symbol, an earlier
/// symbol of the document, or bound; no temporary variable may remain.
pub fn audit(doc: &LpDoc) -> Result<(), ExportError> {
    let mut known: HashSet<String> = preamble_names().into_iter().collect();
    for item in &doc.items {
        if let LpItem::Symbol { name, ty, def } = item {
            for t in std::iter::once(ty).chain(def) {
                if !t.is_locally_closed() {
                    return Err(ExportError::Audit(format!("`{name}` has a dangling index")));
                }
                let (consts, vars) = t.names();
                if let Some(v) = vars.iter().next() {
                    return Err(ExportError::Audit(format!("`{name}` mentions the unbound `{v}`")));
                }
                if let Some(c) = consts.iter().find(|c| !known.contains(c.as_ref())) {
                    return Err(ExportError::Audit(format!("`{name}` mentions the undeclared `{c}`")));
                }
            }
            known.insert(name.clone());
        }
    }
    Ok(())
}
