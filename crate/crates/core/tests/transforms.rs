use certforge::cert::SurfaceCert;
use certforge::ident::Ident;
use certforge::syntax::{parse_task, parse_term};
use certforge::task::{gen_chain_task, prop_valid_oracle, Premise, Side, Task};
use certforge::term::Term;
use certforge::transforms::*;
use certforge::types::{Signature, Type};
use proptest::prelude::*;

fn load(name: &str) -> Task {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_task(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn id(s: &str) -> Ident {
    Ident::from(s)
}

fn term(task: &Task, text: &str) -> Term {
    parse_term(text, &task.sig).unwrap()
}

fn task(text: &str) -> Task {
    parse_task(text).unwrap()
}

#[test]
fn split_disjunctive_hypothesis() {
    let t = load("split.tsk");
    let done = certify(&t_split(id("H")), &t).unwrap();
    assert_eq!(done.tasks.len(), 2);
    assert_eq!(done.tasks[0].get(Side::Hyp, &id("H")), Some(&Term::var("x1")));
    assert_eq!(done.tasks[1].get(Side::Hyp, &id("H")), Some(&Term::var("x2")));
    assert_eq!(done.kernel.rule_name(), "KSplit");
}

#[test]
fn split_rejects_type_quantified_hypothesis() {
    let t = load("pi_excluded_middle.tsk");
    assert_eq!(
        t_split(id("H")).apply(&t).unwrap_err(),
        TransformError::TypeQuantified(id("H"))
    );
}

#[test]
fn instantiate_then_rewrite_closes_the_arithmetic_example() {
    let t = load("instantiate.tsk");
    let witness = term(&t, "(+ (* x x) x)");
    let done = certify(&t_instantiate(id("H"), witness), &t).unwrap();
    assert_eq!(done.tasks.len(), 1);
    let inst = done.tasks[0].get(Side::Hyp, &id("H_inst")).unwrap();
    assert_eq!(inst, &term(&t, "(p (+ (* 4 (+ (* x x) x)) 1))"));
    // The original hypothesis stays.
    assert!(done.tasks[0].has_premise(&id("H")));
    // Rewriting y in the goal uses the equation left to right.
    let after = certify(&t_rewrite(id("Hy"), id("G"), false, None), &done.tasks[0]).unwrap();
    assert_eq!(
        after.tasks[0].get(Side::Goal, &id("G")).unwrap(),
        &term(&t, "(p (* (+ (* 2 x) 1) (+ (* 2 x) 1)))")
    );
}

#[test]
fn instantiate_rejects_ill_typed_witness() {
    let t = load("instantiate.tsk");
    let err = t_instantiate(id("H"), Term::True).apply(&t).unwrap_err();
    assert!(matches!(err, TransformError::IllTyped(_)));
}

#[test]
fn destruct_and_construct_are_inverse() {
    let t = task("(sig (a prop) (b prop)) (hyps (H (and a b))) (goals (G a))");
    let d = certify(&t_destruct(id("H"), None), &t).unwrap();
    let t1 = &d.tasks[0];
    assert_eq!(t1.get(Side::Hyp, &id("H.1")), Some(&Term::var("a")));
    assert_eq!(t1.get(Side::Hyp, &id("H.2")), Some(&Term::var("b")));
    let c = certify(&t_construct(id("H.1"), id("H.2"), id("H")), t1).unwrap();
    assert_eq!(c.tasks, vec![t.clone()]);

    let g = task("(sig (a prop) (b prop)) (goals (G (or a b)))");
    let d = certify(&t_destruct(id("G"), Some((id("A"), id("B")))), &g).unwrap();
    let c = certify(&t_construct(id("A"), id("B"), id("G")), &d.tasks[0]).unwrap();
    assert_eq!(c.tasks, vec![g]);
}

#[test]
fn intro_on_every_binder() {
    let t = task("(sig (p (-> int prop))) (goals (G (forall (x int) (p x))))");
    let d = certify(&t_intro(id("G")), &t).unwrap();
    assert_eq!(d.tasks[0].sig.get(&id("x")), Some(&Type::Int));
    assert_eq!(d.tasks[0].get(Side::Goal, &id("G")), Some(&term(&d.tasks[0], "(p x)")));

    // The binder name is taken, so a renumbered symbol is introduced.
    let t = task("(sig (x int) (p (-> int prop))) (hyps (H (exists (x int) (p x)))) (goals (G (p x)))");
    let d = certify(&t_intro(id("H")), &t).unwrap();
    let y = Ident::with_id("x", 1);
    assert_eq!(d.tasks[0].sig.get(&y), Some(&Type::Int));

    let t = task("(goals (G (pi a (forall (x a) (= x x)))))");
    let d = certify(&t_intro(id("G")), &t).unwrap();
    assert_eq!(d.tasks[0].types.arity(&id("a")), Some(0));
}

#[test]
fn type_instantiation() {
    let t = load("sets.tsk");
    let color = Type::sym("color", vec![]);
    let d = certify(&t_inst_type(id("H2"), color), &t).unwrap();
    let inst = d.tasks[0].get(Side::Hyp, &id("H2_inst")).unwrap();
    assert!(!inst.has_type_quantifier());
    assert!(d.tasks[0].well_typed());
}

#[test]
fn sets_example_closes() {
    // H1 at color, then x := green, y := red, s := add green empty; H2 closes the premise.
    let t = load("sets.tsk");
    let color = Type::sym("color", vec![]);
    let s = |task: &Task, text: &str| term(task, text);
    let step1 = certify(&t_inst_type(id("H1"), color.clone()), &t).unwrap().tasks.remove(0);
    let step2 = certify(&t_inst_type(id("H2"), color), &step1).unwrap().tasks.remove(0);
    let inst = vec![
        s(&step2, "green"),
        s(&step2, "red"),
        s(&step2, "(add green empty)"),
    ];
    let h1 = step2.get(Side::Hyp, &id("H1_inst")).unwrap().clone();
    let mut f = h1;
    for u in &inst {
        let Term::Binder(_, _, _, body) = &f else { panic!() };
        f = body.open(u);
    }
    let assert_name = id("L");
    let lemma = certify(&t_assert(assert_name.clone(), f), &step2).unwrap();
    assert_eq!(lemma.tasks.len(), 2);
}

#[test]
fn rewrite_with_conditional_equation() {
    let t = task(
        "(sig (f (-> int int)) (g (-> int int)) (q (-> int prop)) (p (-> int prop)))
         (hyps (E (forall (x int) (imp (q x) (= (f x) (g x))))))
         (goals (G (p (f 3))))",
    );
    let done = certify(&t_rewrite(id("E"), id("G"), false, None), &t).unwrap();
    assert_eq!(done.tasks.len(), 2);
    let side = &done.tasks[0];
    assert_eq!(side.goals.len(), 1);
    assert_eq!(side.goals[0].formula, term(&t, "(q 3)"));
    assert!(side.has_premise(&id("E")));
    let main = &done.tasks[1];
    assert_eq!(main.get(Side::Goal, &id("G")), Some(&term(&t, "(p (g 3))")));
    assert_eq!(main.hyps.len(), 1);

    // Right to left: from p (g 3) back to p (f 3).
    let back = certify(&t_rewrite(id("E"), id("G"), true, None), main).unwrap();
    assert_eq!(back.tasks[1].get(Side::Goal, &id("G")), Some(&term(&t, "(p (f 3))")));
}

#[test]
fn rewrite_in_hypothesis_with_explicit_instances() {
    let t = task(
        "(sig (f (-> int int int)) (p (-> int prop)) (a int) (b int))
         (hyps (E (forall (x int) (y int) (= (f x y) (f y x)))) (H (p (f a b))))
         (goals (G (p (f b a))))",
    );
    let inst = vec![term(&t, "a"), term(&t, "b")];
    let done = certify(&t_rewrite(id("E"), id("H"), false, Some(inst)), &t).unwrap();
    assert_eq!(done.tasks.len(), 1);
    let r = &done.tasks[0];
    assert_eq!(r.get(Side::Hyp, &id("H")), r.get(Side::Goal, &id("G")));
    certify(&t_axiom(id("H"), id("G")), r).unwrap();
}

#[test]
fn rewrite_without_occurrence_fails() {
    let t = task(
        "(sig (a int) (b int) (p (-> int prop))) (hyps (E (= a b))) (goals (G (p b)))",
    );
    assert!(t_rewrite(id("E"), id("G"), false, None).apply(&t).is_err());
    // The right-hand side does occur.
    let r = certify(&t_rewrite(id("E"), id("G"), true, None), &t).unwrap();
    assert_eq!(r.tasks[0].get(Side::Goal, &id("G")), Some(&term(&t, "(p a)")));
}

#[test]
fn induction_reverts_dependent_hypotheses() {
    let t = task(
        "(sig (i int) (k int) (p (-> int prop)) (q (-> int prop)))
         (hyps (H (q i)) (K (q k)))
         (goals (G (p i)))",
    );
    let done = certify(&t_induction(id("G"), id("i"), Term::int(0)), &t).unwrap();
    let [base, step] = done.tasks.as_slice() else { panic!() };
    assert_eq!(base.get(Side::Hyp, &id("Hi")), Some(&term(&t, "(<= i 0)")));
    assert_eq!(step.get(Side::Hyp, &id("Hi")), Some(&term(&t, "(> i 0)")));
    assert_eq!(
        step.get(Side::Hyp, &id("Hrec")),
        Some(&term(&t, "(forall (n int) (imp (< n i) (imp (q n) (p n))))"))
    );
    for r in [base, step] {
        assert_eq!(r.get(Side::Hyp, &id("H")), Some(&term(&t, "(q i)")));
        assert_eq!(r.get(Side::Hyp, &id("K")), Some(&term(&t, "(q k)")));
        assert_eq!(r.get(Side::Goal, &id("G")), Some(&term(&t, "(p i)")));
    }
}

#[test]
fn induction_without_context() {
    let t = task("(sig (i int) (p (-> int prop))) (goals (G (p i)))");
    let done = certify(&t_induction(id("G"), id("i"), Term::int(2)), &t).unwrap();
    assert_eq!(done.kernel.rule_name(), "KInduction");
    assert_eq!(
        done.tasks[1].get(Side::Hyp, &id("Hrec")),
        Some(&term(&t, "(forall (n int) (imp (< n i) (p n)))"))
    );
}

#[test]
fn induction_rejects_bound_mentioning_the_variable() {
    let t = task("(sig (i int) (p (-> int prop))) (goals (G (p i)))");
    let a = term(&t, "(+ i 1)");
    assert!(t_induction(id("G"), id("i"), a).apply(&t).is_err());
}

#[test]
fn blast_proves_chains() {
    for n in 1..=12 {
        let t = gen_chain_task(n).unwrap();
        let done = certify(&t_blast(), &t).unwrap();
        assert!(done.tasks.is_empty(), "n = {n}");
    }
}

#[test]
fn blast_refuses_non_tautology_and_non_propositional_input() {
    let t = load("split.tsk");
    assert!(matches!(
        t_blast().apply(&t).unwrap_err(),
        TransformError::NotProved { .. }
    ));
    let t = load("instantiate.tsk");
    assert!(matches!(
        t_blast().apply(&t).unwrap_err(),
        TransformError::Unsupported(_)
    ));
}

#[test]
fn compose_split_then_trivial() {
    let t = task("(sig (a prop)) (hyps (H (or false a))) (goals (G a))");
    let pipeline = compose_transforms(t_split(id("H")), |i, _| match i {
        0 => Some(t_trivial(id("H"))),
        _ => Some(t_axiom(id("H"), id("G"))),
    });
    let done = certify(&pipeline, &t).unwrap();
    assert!(done.tasks.is_empty());
    assert_eq!(
        done.surface,
        SurfaceCert::Split(
            id("H"),
            Box::new(SurfaceCert::Trivial(id("H"))),
            Box::new(SurfaceCert::Axiom(id("H"), id("G")))
        )
    );
}

#[test]
fn compose_keeps_unselected_tasks() {
    let t = task("(sig (a prop) (b prop)) (goals (G (and a (and a b))))");
    let pipeline = compose_transforms(t_split(id("G")), |i, _| (i == 1).then(|| t_split(id("G"))));
    let done = certify(&pipeline, &t).unwrap();
    let goals: Vec<Term> = done.tasks.iter().map(|t| t.goals[0].formula.clone()).collect();
    assert_eq!(goals, vec![Term::var("a"), Term::var("a"), Term::var("b")]);
}

#[test]
fn lying_transformation_is_caught() {
    // Claims to close the task with a split, which leaves two tasks.
    let liar = CertifyingTransform::new("liar", |t: &Task| {
        Ok(Outcome::new(vec![t.clone()], SurfaceCert::Hole))
            .map(|mut o: Outcome| {
                o.tasks[0] = o.tasks[0].remove(Side::Hyp, &id("H"));
                o
            })
    });
    let t = load("split.tsk");
    assert_eq!(certify(&liar, &t).unwrap_err(), CertifyError::LeafMismatch);

    let wrong_cert = CertifyingTransform::new("wrong", |_: &Task| {
        Ok(Outcome::new(vec![], SurfaceCert::Trivial(id("G"))))
    });
    assert!(matches!(
        certify(&wrong_cert, &t).unwrap_err(),
        CertifyError::Elab(_) | CertifyError::Check(_)
    ));
}

#[test]
fn unsound_assert_formula_must_typecheck() {
    let t = load("split.tsk");
    let bad = Term::app(Term::var("x1"), Term::int(1));
    assert!(matches!(
        t_assert(id("A"), bad).apply(&t).unwrap_err(),
        TransformError::IllTyped(_)
    ));
    let ok = certify(&t_assert(id("A"), Term::var("x1")), &t).unwrap();
    assert_eq!(ok.tasks[0].get(Side::Goal, &id("A")), Some(&Term::var("x1")));
    assert_eq!(ok.tasks[1].get(Side::Hyp, &id("A")), Some(&Term::var("x1")));
}

fn arb_formula(atoms: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..atoms).prop_map(|i| Term::var(&format!("p{i}"))),
        Just(Term::True),
        Just(Term::False),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::iff(a, b)),
        ]
    })
}

fn arb_prop_task() -> impl Strategy<Value = Task> {
    (
        prop::collection::vec(arb_formula(4), 0..3),
        prop::collection::vec(arb_formula(4), 1..3),
    )
        .prop_map(|(hyps, goals)| {
            let mut sig = Signature::new();
            for i in 0..4 {
                sig.declare(Ident::new(&format!("p{i}")), Type::Prop);
            }
            let mut t = Task::new();
            t.sig = sig;
            for (k, h) in hyps.into_iter().enumerate() {
                t.hyps.push(Premise::new(Ident::new(&format!("H{k}")), h));
            }
            for (k, g) in goals.into_iter().enumerate() {
                t.goals.push(Premise::new(Ident::new(&format!("G{k}")), g));
            }
            t
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn blast_agrees_with_truth_tables(t in arb_prop_task()) {
        let valid = prop_valid_oracle(&t).unwrap();
        match certify(&t_blast(), &t) {
            Ok(done) => {
                prop_assert!(valid);
                prop_assert!(done.tasks.is_empty());
            }
            Err(e) => {
                prop_assert!(!valid, "valid task rejected: {e}");
                let is_not_proved = matches!(e, CertifyError::Transform(TransformError::NotProved { .. }));
                prop_assert!(is_not_proved);
            }
        }
    }

    #[test]
    fn single_steps_certify(t in arb_prop_task()) {
        // Every step blast may choose yields an application the checker accepts.
        if let Ok(out) = blast_step().apply(&t) {
            let done = certify(&blast_step(), &t).unwrap();
            prop_assert_eq!(done.tasks, out.tasks);
        }
    }
}
