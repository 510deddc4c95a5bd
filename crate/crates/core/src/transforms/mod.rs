//! Certifying transformations. Each one maps a task to a list of resulting
//! tasks together with a surface certificate whose holes, in order, stand for
//! those tasks. [`certify`] elaborates the certificate, replays it with the
//! checker and only then hands the tasks back.

mod basic;
mod blast;
mod induction;
mod rewrite;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cert::{elaborate, ElabError, KernelCert, SurfaceCert};
use crate::checker::{ccheck, CheckFailure};
use crate::ident::Ident;
use crate::task::Task;

pub use basic::{
    t_assert, t_axiom, t_clear, t_construct, t_destruct, t_inst_type, t_instantiate, t_intro,
    t_split, t_swap, t_trivial, t_unfold,
};
pub use blast::{blast_step, is_propositional, t_blast};
pub use induction::t_induction;
pub use rewrite::{match_rewrite, t_rewrite};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("no premise named `{0}`")]
    MissingPremise(Ident),
    #[error("`{name}` is not {expected}")]
    Shape { name: Ident, expected: &'static str },
    #[error("`{0}` is quantified over types and cannot be decomposed")]
    TypeQuantified(Ident),
    #[error("`{0}` is already used by a premise")]
    NameInUse(Ident),
    #[error("ill-typed argument: {0}")]
    IllTyped(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("blast could not close the branch with hypotheses {hyps:?} and goals {goals:?}")]
    NotProved { hyps: Vec<Ident>, goals: Vec<Ident> },
}

/// Resulting tasks and the certificate relating them to the initial task.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub tasks: Vec<Task>,
    pub cert: SurfaceCert,
}

impl Outcome {
    pub fn new(tasks: Vec<Task>, cert: SurfaceCert) -> Self {
        debug_assert_eq!(tasks.len(), cert.hole_count());
        Outcome { tasks, cert }
    }
}

type ApplyFn = dyn Fn(&Task) -> Result<Outcome, TransformError> + Send + Sync;

#[derive(Clone)]
pub struct CertifyingTransform {
    name: String,
    apply: Arc<ApplyFn>,
}

impl fmt::Debug for CertifyingTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CertifyingTransform({})", self.name)
    }
}

impl CertifyingTransform {
    pub fn new(
        name: impl Into<String>,
        apply: impl Fn(&Task) -> Result<Outcome, TransformError> + Send + Sync + 'static,
    ) -> Self {
        CertifyingTransform {
            name: name.into(),
            apply: Arc::new(apply),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, task: &Task) -> Result<Outcome, TransformError> {
        (self.apply)(task)
    }
}

/// Returns the task unchanged.
pub fn identity() -> CertifyingTransform {
    CertifyingTransform::new("identity", |t| Ok(Outcome::new(vec![t.clone()], SurfaceCert::Hole)))
}

/// Applies `first`, then the transformation picked by `then` (if any) on
/// each resulting task. Certificates are composed by filling the holes of the
/// first certificate in order.
pub fn compose_transforms(
    first: CertifyingTransform,
    then: impl Fn(usize, &Task) -> Option<CertifyingTransform> + Send + Sync + 'static,
) -> CertifyingTransform {
    let name = format!("{}; ...", first.name);
    CertifyingTransform::new(name, move |task| {
        let out = first.apply(task)?;
        let mut tasks = Vec::new();
        let mut fillers = Vec::new();
        for (i, t) in out.tasks.iter().enumerate() {
            match then(i, t) {
                Some(next) => {
                    let sub = next.apply(t)?;
                    tasks.extend(sub.tasks);
                    fillers.push(sub.cert);
                }
                None => {
                    tasks.push(t.clone());
                    fillers.push(SurfaceCert::Hole);
                }
            }
        }
        Ok(Outcome::new(tasks, out.cert.fill(fillers)))
    })
}

/// Applies `second` to every task produced by `first`.
pub fn then_all(first: CertifyingTransform, second: CertifyingTransform) -> CertifyingTransform {
    compose_transforms(first, move |_, _| Some(second.clone()))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("transformation failed")]
    Transform(#[from] TransformError),
    #[error("elaboration failed")]
    Elab(#[from] ElabError),
    #[error("certificate rejected: {0}")]
    Check(CheckFailure),
    #[error("certificate leaves differ from the resulting tasks")]
    LeafMismatch,
}

/// A validated transformation application.
#[derive(Clone, Debug)]
pub struct Certified {
    pub tasks: Vec<Task>,
    pub surface: SurfaceCert,
    pub kernel: KernelCert,
}

/// Runs `t` on `task`, elaborates its certificate and checks it. The tasks
/// are returned only when the checker validates the application.
pub fn certify(t: &CertifyingTransform, task: &Task) -> Result<Certified, CertifyError> {
    let out = t.apply(task)?;
    let kernel = elaborate(&out.cert, task)?;
    let report = ccheck(&kernel, task);
    if let Some(f) = report.failure {
        return Err(CertifyError::Check(f));
    }
    let same = report.derived_leaves.len() == out.tasks.len()
        && report.derived_leaves.iter().zip(&out.tasks).all(|(a, b)| a == b);
    if !same {
        return Err(CertifyError::LeafMismatch);
    }
    Ok(Certified {
        tasks: out.tasks,
        surface: out.cert,
        kernel,
    })
}
