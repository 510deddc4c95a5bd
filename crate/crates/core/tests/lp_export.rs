mod support;

use std::sync::Arc;

use certforge::cert::KernelCert;
use certforge::ident::Ident;
use certforge::lp_export::{
    app_correctness_type, audit, bot, emit_module, emit_preamble, encode_task, encode_term, export_module,
    parse_term, preamble_doc, print_term, proof_term, ExportError, LpDoc, LpItem, LpTerm,
};
use certforge::syntax::{parse_task, parse_term as parse_object};
use certforge::task::{gen_chain_task, Premise, Task};
use certforge::term::Term;
use certforge::transforms::{
    certify, compose_transforms, t_blast, t_induction, t_inst_type, t_instantiate, t_intro, t_rewrite, t_split, then_all,
    CertifyingTransform,
};
use certforge::types::{Signature, Type};
use proptest::prelude::*;
use support::coc::{with_preamble, Coc};

fn load(name: &str) -> Task {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_task(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn id(s: &str) -> Ident {
    Ident::from(s)
}

fn lp(text: &str) -> LpTerm {
    parse_term(text).unwrap()
}

fn run(t: &CertifyingTransform, task: &Task) -> (Vec<Task>, KernelCert) {
    let c = certify(t, task).unwrap();
    (c.tasks, c.kernel)
}

/// Type-checks the emitted module text, read back from its rendering.
fn module_checks(task: &Task, leaves: &[Task], cert: &KernelCert) {
    let text = emit_module(task, leaves, cert).unwrap();
    let doc = LpDoc::parse(&text).unwrap();
    let mut coc = with_preamble();
    coc.add_doc(&doc).unwrap_or_else(|e| panic!("{e}\n{text}"));
}

const BOT: &str = "(Π C : Type, C)";

#[test]
fn connective_table() {
    let sig = {
        let mut s = Signature::new();
        s.declare(id("t1"), Type::Prop);
        s.declare(id("t2"), Type::Prop);
        s
    };
    let enc = |text: &str| encode_term(&parse_object(text, &sig).unwrap()).unwrap();
    assert_eq!(enc("false"), lp(BOT));
    assert_eq!(enc("true"), lp(&format!("{BOT} → {BOT}")));
    assert_eq!(enc("(and t1 t2)"), lp("Π C : Type, (t1 → t2 → C) → C"));
    assert_eq!(enc("(or t1 t2)"), lp("Π C : Type, (t1 → C) → (t2 → C) → C"));
    assert_eq!(enc("(not t1)"), lp(&format!("t1 → {BOT}")));
    assert_eq!(enc("(imp t1 t2)"), lp("t1 → t2"));
    assert_eq!(
        enc("(iff t1 t2)"),
        lp("Π C : Type, ((t1 → t2) → (t2 → t1) → C) → C")
    );
}

#[test]
fn top_is_inhabited_by_identity() {
    let mut coc = with_preamble();
    let top = encode_term(&Term::True).unwrap();
    coc.check(&lp(&format!("λ c : {BOT}, c")), &top).unwrap();
    // ⊥ is not inhabited by the same term.
    assert!(coc.check(&lp(&format!("λ c : {BOT}, c")), &bot()).is_err());
}

#[test]
fn quantifiers_and_equality() {
    let t = parse_task("(sig (f (-> int int))) (goals (G true))").unwrap();
    let enc = |text: &str| encode_term(&parse_object(text, &t.sig).unwrap()).unwrap();
    assert_eq!(enc("(forall (x int) (= (f x) x))"), lp("Π x : int, eq int (f x) x"));
    assert_eq!(
        enc("(exists (x int) (< x 0))"),
        lp("Π C : Type, (Π x : int, lt x Z0 → C) → C")
    );
    assert_eq!(enc("(= 6 (- 0 3))"), lp("eq int (Zpos (xO (xI xH))) (sub Z0 (Zpos (xI xH)))"));
    // Equality between predicates is written out.
    let p = parse_task("(sig (p (-> int prop)) (q (-> int prop))) (goals (G true))").unwrap();
    let e = encode_term(&parse_object("(= p q)", &p.sig).unwrap()).unwrap();
    assert_eq!(e, lp("Π Q : (int → Type) → Type, Q p → Q q"));
}

#[test]
fn task_translation() {
    assert_eq!(encode_task(&Task::new()).unwrap(), bot());
    let t = parse_task("(sig (x prop)) (goals (G x))").unwrap();
    assert_eq!(
        encode_task(&t).unwrap(),
        lp(&format!("Π x : Type, (x → {BOT}) → {BOT}"))
    );
    // Type symbols come first, with Type^n for arity n, then symbols with
    // their type parameters, then the premises.
    let sets = load("sets.tsk");
    let enc = encode_task(&sets).unwrap();
    let text = print_term(&enc);
    assert!(text.starts_with("Π color : Type, Π set : Type → Type, Π red : color, Π green : color, Π blue : color, Π empty : (Π a : Type, set a), Π add : (Π a : Type, a → set a → set a),"), "{text}");
    let mut coc = with_preamble();
    let s = coc.infer(&enc).unwrap();
    assert_eq!(coc.whnf(&s), LpTerm::Type);
}

#[test]
fn correctness_type_and_proof_of_a_split() {
    let t = load("split.tsk");
    let (leaves, cert) = run(&t_split(id("H")), &t);
    assert!(matches!(cert, KernelCert::Split { .. }));
    let ty = app_correctness_type(&t, &leaves).unwrap();
    let neg_x = format!("(x → {BOT})");
    let expected = format!(
        "(Π x1 : Type, Π x2 : Type, Π x : Type, x1 → {neg_x} → {BOT}) → \
         (Π x1 : Type, Π x2 : Type, Π x : Type, x2 → {neg_x} → {BOT}) → \
         Π x1 : Type, Π x2 : Type, Π x : Type, (Π C : Type, (x1 → C) → (x2 → C) → C) → {neg_x} → {BOT}"
    );
    assert_eq!(ty, lp(&expected));
    let term = proof_term(&t, &leaves, &cert).unwrap();
    let expected = lp(
        "λ s1, λ s2, λ x1, λ x2, λ x, λ H, λ G, \
         split x1 x2 (λ H, s1 x1 x2 x H G) (λ H, s2 x1 x2 x H G) H",
    );
    assert!(term.eq_erased(&expected), "{}", print_term(&term));
    let mut coc = with_preamble();
    coc.check(&term, &ty).unwrap();
    module_checks(&t, &leaves, &cert);
}

#[test]
fn split_combinator_has_the_stated_type() {
    let doc = preamble_doc();
    let split = doc
        .items
        .iter()
        .find_map(|i| match i {
            LpItem::Symbol { name, ty, .. } if name == "split" => Some(ty.clone()),
            _ => None,
        })
        .unwrap();
    let expected = format!(
        "Π t1 : Type, Π t2 : Type, (t1 → {BOT}) → (t2 → {BOT}) → (Π C : Type, (t1 → C) → (t2 → C) → C) → {BOT}"
    );
    assert_eq!(split, lp(&expected));
}

#[test]
fn identity_and_trivial_proofs() {
    let t = load("split.tsk");
    let hole = KernelCert::Hole(t.clone());
    let term = proof_term(&t, std::slice::from_ref(&t), &hole).unwrap();
    assert!(term.eq_erased(&lp("λ s, λ x1, λ x2, λ x, λ H, λ G, s x1 x2 x H G")));

    let t = parse_task("(sig (x prop)) (hyps (H false)) (goals (G x))").unwrap();
    let c = KernelCert::Trivial {
        goal: false,
        premise: id("H"),
    };
    let term = proof_term(&t, &[], &c).unwrap();
    assert!(term.eq_erased(&lp("λ x, λ H, λ G, trivial_hyp H")));
    let mut coc = with_preamble();
    coc.check(&term, &encode_task(&t).unwrap()).unwrap();
}

#[test]
fn holes_follow_leaf_order() {
    let t = parse_task("(sig (a prop) (b prop) (c prop)) (goals (G (and a (and b c))))").unwrap();
    let split_all = compose_transforms(t_split(id("G")), |i, _| (i == 1).then(|| t_split(id("G"))));
    let (leaves, cert) = run(&split_all, &t);
    assert_eq!(leaves.len(), 3);
    let term = proof_term(&t, &leaves, &cert).unwrap();
    let text = print_term(&term);
    // s1 is used on the `a` branch, s3 on the `c` branch.
    let p1 = text.find("s1 a b c").unwrap();
    let p2 = text.find("s2 a b c").unwrap();
    let p3 = text.find("s3 a b c").unwrap();
    assert!(p1 < p2 && p2 < p3, "{text}");
    module_checks(&t, &leaves, &cert);
}

#[test]
fn blast_module_has_no_holes() {
    let t = gen_chain_task(3).unwrap();
    let (leaves, cert) = run(&t_blast(), &t);
    assert!(leaves.is_empty());
    let doc = export_module(&t, &leaves, &cert).unwrap();
    let proof_ty = doc
        .items
        .iter()
        .find_map(|i| match i {
            LpItem::Symbol { name, ty, .. } if name == "proof" => Some(ty.clone()),
            _ => None,
        })
        .unwrap();
    assert_eq!(proof_ty, LpTerm::Const(Arc::from("task")));
    module_checks(&t, &leaves, &cert);
}

#[test]
fn emission_is_deterministic_and_reads_back() {
    assert_eq!(emit_preamble(), emit_preamble());
    let pre = preamble_doc();
    assert_eq!(LpDoc::parse(&pre.render()).unwrap(), pre);

    let t = gen_chain_task(4).unwrap();
    let (leaves, cert) = run(&t_blast(), &t);
    let a = emit_module(&t, &leaves, &cert).unwrap();
    let b = emit_module(&t, &leaves, &cert).unwrap();
    assert_eq!(a, b);
    let doc = export_module(&t, &leaves, &cert).unwrap();
    assert_eq!(LpDoc::parse(&a).unwrap(), doc);
    assert!(a.contains("require open certforge_preamble;"));
}

#[test]
fn audit_rejects_unknown_names() {
    let mut doc = LpDoc::default();
    doc.symbol("ok", LpTerm::Type, Some(bot()));
    assert!(audit(&doc).is_ok());
    doc.symbol("bad", LpTerm::Type, Some(lp("mystery")));
    assert!(matches!(audit(&doc), Err(ExportError::Audit(_))));
    let mut doc = LpDoc::default();
    doc.symbol("bad", LpTerm::Type, Some(LpTerm::Bound(0)));
    assert!(matches!(audit(&doc), Err(ExportError::Audit(_))));
}

#[test]
fn export_requires_a_valid_application() {
    let t = load("split.tsk");
    let (leaves, cert) = run(&t_split(id("H")), &t);
    assert_eq!(
        emit_module(&t, &leaves[..1], &cert),
        Err(ExportError::Invalid)
    );
}

#[test]
fn preamble_typechecks() {
    // Loading the preamble checks every definition against its type.
    let coc = with_preamble();
    let doc = preamble_doc();
    let mut names = 0;
    for item in &doc.items {
        if let LpItem::Symbol { name, .. } = item {
            names += 1;
            assert!(!name.is_empty());
        }
    }
    assert!(names > 40);
    drop(coc);
    // A wrong definition is caught.
    let mut coc = with_preamble();
    let wrong = lp("λ t : Type, λ h : t, h");
    assert!(coc
        .declare("bad", &lp(&format!("Π t : Type, t → {BOT}")), Some(&wrong))
        .is_err());
}

#[test]
fn quantifier_rules_export() {
    let t = load("instantiate.tsk");
    let witness = parse_object("(+ x (* x x))", &t.sig).unwrap();
    let (leaves, cert) = run(&t_instantiate(id("H"), witness), &t);
    module_checks(&t, &leaves, &cert);

    let t = parse_task("(sig (p (-> int prop))) (hyps (H (exists (x int) (p x)))) (goals (G (forall (y int) (or (p y) (not (p y))))))").unwrap();
    let intro_both = then_all(t_intro(id("H")), t_intro(id("G")));
    let (leaves, cert) = run(&intro_both, &t);
    module_checks(&t, &leaves, &cert);
}

#[test]
fn predicate_quantifiers_are_inlined() {
    // ∀P : int → prop. P 0 is instantiated at a predicate.
    let t = parse_task(
        "(sig (q (-> int prop)))
         (hyps (H (forall (P (-> int prop)) (P 0))))
         (goals (G (q 0)))",
    )
    .unwrap();
    let witness = parse_object("q", &t.sig).unwrap();
    let (leaves, cert) = run(&t_instantiate(id("H"), witness), &t);
    let term = proof_term(&t, &leaves, &cert).unwrap();
    assert!(!print_term(&term).contains("inst_forall"));
    module_checks(&t, &leaves, &cert);
}

#[test]
fn type_rules_export() {
    let t = load("sets.tsk");
    let (leaves, cert) = run(&t_inst_type(id("H2"), Type::sym("color", vec![])), &t);
    module_checks(&t, &leaves, &cert);

    let t = parse_task("(goals (G (pi a (forall (x a) (= x x)))))").unwrap();
    let (leaves, cert) = run(&t_intro(id("G")), &t);
    module_checks(&t, &leaves, &cert);

    // Instantiating a type parameter with prop has no λΠ counterpart.
    let t = load("pi_excluded_middle.tsk");
    let (leaves, cert) = run(&t_inst_type(id("H"), Type::Prop), &t);
    assert!(matches!(
        proof_term(&t, &leaves, &cert),
        Err(ExportError::LargeInstance(_))
    ));
}

#[test]
fn equality_rules_export() {
    let t = parse_task(
        "(sig (a int) (b int) (p (-> int prop)))
         (hyps (E (= a b)) (H (p a)))
         (goals (G (p a)))",
    )
    .unwrap();
    for p in ["H", "G"] {
        let (leaves, cert) = run(&t_rewrite(id("E"), id(p), false, None), &t);
        module_checks(&t, &leaves, &cert);
    }
    let t = parse_task("(sig (f (-> int int))) (goals (G (= (f 1) (f 1))))").unwrap();
    let c = certforge::cert::elaborate(&certforge::cert::SurfaceCert::EqRefl(id("G")), &t).unwrap();
    module_checks(&t, &[], &c);
}

#[test]
fn induction_exports() {
    let t = parse_task(
        "(sig (i int) (p (-> int prop)) (q (-> int prop)))
         (hyps (K (q i)))
         (goals (G (p i)))",
    )
    .unwrap();
    let (leaves, cert) = run(&t_induction(id("G"), id("i"), Term::int(0)), &t);
    assert_eq!(leaves.len(), 2);
    module_checks(&t, &leaves, &cert);
}

#[test]
fn optional_external_check() {
    let Ok(checker) = std::env::var("CERTFORGE_LP_CHECKER") else {
        eprintln!("CERTFORGE_LP_CHECKER not set; skipping the external check");
        return;
    };
    let dir = tempfile_dir();
    std::fs::write(dir.join("certforge_preamble.lp"), emit_preamble()).unwrap();
    let t = load("split.tsk");
    let (leaves, cert) = run(&t_split(id("H")), &t);
    let path = dir.join("split.lp");
    std::fs::write(&path, emit_module(&t, &leaves, &cert).unwrap()).unwrap();
    let status = std::process::Command::new(checker)
        .arg(&path)
        .current_dir(&dir)
        .status()
        .unwrap();
    assert!(status.success());
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("certforge-lp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn arb_formula() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..3usize).prop_map(|i| Term::var(&format!("p{i}"))),
        Just(Term::True),
        Just(Term::False),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::iff(a, b)),
        ]
    })
}

fn arb_task() -> impl Strategy<Value = Task> {
    (prop::collection::vec(arb_formula(), 0..3), arb_formula()).prop_map(|(hyps, goal)| {
        let mut t = Task::new();
        for i in 0..3 {
            t.sig.declare(Ident::new(&format!("p{i}")), Type::Prop);
        }
        for (k, h) in hyps.into_iter().enumerate() {
            t.hyps.push(Premise::new(Ident::new(&format!("H{k}")), h));
        }
        t.goals.push(Premise::new("G", goal));
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn blast_proofs_typecheck(t in arb_task()) {
        if let Ok(c) = certify(&t_blast(), &t) {
            let term = proof_term(&t, &[], &c.kernel).unwrap();
            let mut coc: Coc = with_preamble();
            prop_assert!(coc.check(&term, &encode_task(&t).unwrap()).is_ok());
        }
    }

    #[test]
    fn printed_terms_read_back(t in arb_task()) {
        let enc = encode_task(&t).unwrap();
        prop_assert_eq!(parse_term(&print_term(&enc)).unwrap(), enc);
    }
}
