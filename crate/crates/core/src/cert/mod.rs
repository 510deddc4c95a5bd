//! Certificates: kernel trees checked rule by rule, surface trees emitted by
//! transformations, and the elaboration from the latter to the former.

mod elaborate;
mod kernel;
mod surface;

pub use elaborate::{elaborate, ElabError};
pub use kernel::{compose, ComposeError, KernelCert};
pub use surface::SurfaceCert;
