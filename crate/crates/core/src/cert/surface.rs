use crate::ident::Ident;
use crate::term::Term;
use crate::types::Type;

/// Surface certificates: what transformations emit. They name premises but
/// omit the formulas, which elaboration recovers from the task.
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceCert {
    Hole,
    Trivial(Ident),
    /// `Axiom(H, G)` closes a branch where hypothesis `H` and goal `G` agree.
    Axiom(Ident, Ident),
    Clear(Ident, Box<SurfaceCert>),
    Swap(Ident, Box<SurfaceCert>),
    Unfold(Ident, Box<SurfaceCert>),
    Assert(Ident, Term, Box<SurfaceCert>, Box<SurfaceCert>),
    Split(Ident, Box<SurfaceCert>, Box<SurfaceCert>),
    /// `Destruct(P, P1, P2, c)`.
    Destruct(Ident, Ident, Ident, Box<SurfaceCert>),
    /// `Construct(P1, P2, P, c)` merges two premises on the same side.
    Construct(Ident, Ident, Ident, Box<SurfaceCert>),
    /// `IntroQuant(P, y, c)`.
    IntroQuant(Ident, Ident, Box<SurfaceCert>),
    /// `InstQuant(P, P_new, u, c)`.
    InstQuant(Ident, Ident, Term, Box<SurfaceCert>),
    /// `IntroType(P, ι, c)`.
    IntroType(Ident, Ident, Box<SurfaceCert>),
    /// `InstType(P, P_new, τ, c)`.
    InstType(Ident, Ident, Type, Box<SurfaceCert>),
    EqRefl(Ident),
    EqSym(Ident, Box<SurfaceCert>),
    /// `EqTrans(H1, H2, H3, c)`: from `H1 : a = b` and `H2 : b = c` add `H3 : a = c`.
    EqTrans(Ident, Ident, Ident, Box<SurfaceCert>),
    /// `Rewrite(right_to_left, H, P, c)`.
    Rewrite(bool, Ident, Ident, Box<SurfaceCert>),
    /// `Induction(G, i, a, H_i, H_rec, base, step)`.
    Induction(Ident, Ident, Term, Ident, Ident, Box<SurfaceCert>, Box<SurfaceCert>),
}

impl SurfaceCert {
    pub fn rule_name(&self) -> &'static str {
        match self {
            SurfaceCert::Hole => "SHole",
            SurfaceCert::Trivial(..) => "STrivial",
            SurfaceCert::Axiom(..) => "SAxiom",
            SurfaceCert::Clear(..) => "SClear",
            SurfaceCert::Swap(..) => "SSwap",
            SurfaceCert::Unfold(..) => "SUnfold",
            SurfaceCert::Assert(..) => "SAssert",
            SurfaceCert::Split(..) => "SSplit",
            SurfaceCert::Destruct(..) => "SDestruct",
            SurfaceCert::Construct(..) => "SConstruct",
            SurfaceCert::IntroQuant(..) => "SIntroQuant",
            SurfaceCert::InstQuant(..) => "SInstQuant",
            SurfaceCert::IntroType(..) => "SIntroType",
            SurfaceCert::InstType(..) => "SInstType",
            SurfaceCert::EqRefl(..) => "SEqRefl",
            SurfaceCert::EqSym(..) => "SEqSym",
            SurfaceCert::EqTrans(..) => "SEqTrans",
            SurfaceCert::Rewrite(..) => "SRewrite",
            SurfaceCert::Induction(..) => "SInduction",
        }
    }

    pub fn children(&self) -> Vec<&SurfaceCert> {
        match self {
            SurfaceCert::Hole
            | SurfaceCert::Trivial(_)
            | SurfaceCert::Axiom(..)
            | SurfaceCert::EqRefl(_) => vec![],
            SurfaceCert::Clear(_, c)
            | SurfaceCert::Swap(_, c)
            | SurfaceCert::Unfold(_, c)
            | SurfaceCert::Destruct(_, _, _, c)
            | SurfaceCert::Construct(_, _, _, c)
            | SurfaceCert::IntroQuant(_, _, c)
            | SurfaceCert::InstQuant(_, _, _, c)
            | SurfaceCert::IntroType(_, _, c)
            | SurfaceCert::InstType(_, _, _, c)
            | SurfaceCert::EqSym(_, c)
            | SurfaceCert::EqTrans(_, _, _, c)
            | SurfaceCert::Rewrite(_, _, _, c) => vec![c],
            SurfaceCert::Assert(_, _, a, b)
            | SurfaceCert::Split(_, a, b)
            | SurfaceCert::Induction(_, _, _, _, _, a, b) => vec![a, b],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut SurfaceCert> {
        match self {
            SurfaceCert::Hole
            | SurfaceCert::Trivial(_)
            | SurfaceCert::Axiom(..)
            | SurfaceCert::EqRefl(_) => vec![],
            SurfaceCert::Clear(_, c)
            | SurfaceCert::Swap(_, c)
            | SurfaceCert::Unfold(_, c)
            | SurfaceCert::Destruct(_, _, _, c)
            | SurfaceCert::Construct(_, _, _, c)
            | SurfaceCert::IntroQuant(_, _, c)
            | SurfaceCert::InstQuant(_, _, _, c)
            | SurfaceCert::IntroType(_, _, c)
            | SurfaceCert::InstType(_, _, _, c)
            | SurfaceCert::EqSym(_, c)
            | SurfaceCert::EqTrans(_, _, _, c)
            | SurfaceCert::Rewrite(_, _, _, c) => vec![c],
            SurfaceCert::Assert(_, _, a, b)
            | SurfaceCert::Split(_, a, b)
            | SurfaceCert::Induction(_, _, _, _, _, a, b) => vec![a, b],
        }
    }

    pub fn hole_count(&self) -> usize {
        match self {
            SurfaceCert::Hole => 1,
            other => other.children().into_iter().map(SurfaceCert::hole_count).sum(),
        }
    }

    /// Fills the holes in order with `fillers`, which must have exactly
    /// [`hole_count`](Self::hole_count) entries.
    pub fn fill(&self, fillers: Vec<SurfaceCert>) -> SurfaceCert {
        assert_eq!(fillers.len(), self.hole_count(), "one filler per hole");
        let mut out = self.clone();
        let mut it = fillers.into_iter();
        fill_holes(&mut out, &mut it);
        out
    }
}

fn fill_holes(c: &mut SurfaceCert, it: &mut impl Iterator<Item = SurfaceCert>) {
    if let SurfaceCert::Hole = c {
        *c = it.next().expect("filler count checked");
        return;
    }
    for child in c.children_mut() {
        fill_holes(child, it);
    }
}
