pub mod bench;
pub mod cert;
pub mod lp_export;
pub mod checker;
pub mod sexp;
pub mod syntax;
pub mod ident;
pub mod task;
pub mod term;
pub mod transforms;
pub mod theories;
pub mod types;
pub mod typing;
