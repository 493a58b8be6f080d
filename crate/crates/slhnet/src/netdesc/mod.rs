//! Textual network-description format.
//!
//! A `.slhnet` file declares uncertain parameters, SLH components whose
//! matrix entries are arithmetic expressions over those parameters, one
//! cascade line fixing the composition order, and optional analysis
//! settings. `parse` turns text into a `ModelDocument` (or positioned
//! diagnostics), `instantiate` expands the parameter grid into an
//! `UncertainModel`, and `serialize` writes a document back out in a
//! canonical form that reparses to a structurally equal document.

pub mod ast;
mod eval;
mod instantiate;
mod lexer;
mod parser;
mod serialize;

pub use ast::{
    AnalysisConfig, BinOp, ComponentDecl, Diagnostic, Expr, Func, Loc, MatrixLit, ModelDocument,
    ParamSpec,
};
pub use eval::{eval_expr, eval_matrix};
pub use instantiate::instantiate;
pub use parser::parse;
pub use serialize::serialize;
