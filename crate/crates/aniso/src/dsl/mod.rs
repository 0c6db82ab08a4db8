//! Query language: parsing, canonical formatting, evaluation and reports.
//!
//! ```text
//! let J = 1
//! let Sigma = 2
//! target E: umd, alpha, algebra, unital
//! solve p: W^{2-1/p,(2,1)}_p(JxSigma) * H^{1,(2,1)}_p(JxSigma;E) -> H^{1,(2,1)}_p(JxSigma;E) ?
//! at p = 4: algebra W^{1,(2,1)}_p(JxSigma) ?
//! ```

pub mod ast;
mod exec;
pub mod format;
mod parser;
pub mod report;

pub use ast::{Env, Method, Problem, Query, QueryLine, TestFn};
pub use exec::{gaussian, run, run_batch, run_timed};
pub use format::{format_line, format_query, format_space};
pub use parser::{parse_line, parse_program, parse_query, parse_sexpr, Stmt};
pub use report::{Report, SCHEMA};

/// Errors of the query parser. Lines and columns are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown alias `{name}`")]
    UnknownAlias { line: usize, col: usize, name: String },
    #[error("{line}:{col}: malformed exponent: {msg}")]
    MalformedExponent { line: usize, col: usize, msg: String },
    #[error("{line}: {msg}")]
    Invalid { line: usize, msg: String },
}

/// Declarations shared by the free-boundary applications: `J`, `Sigma`, `Rdot`.
pub const FREE_BOUNDARY_PRELUDE: &str = include_str!("../../preludes/free_boundary.aq");

/// Environment after evaluating `src` as a prelude; queries in it are rejected.
pub fn load_prelude(env: &mut Env, src: &str) -> Result<(), DslError> {
    match parse_program(env, src)?.first() {
        Some((line, _)) => Err(DslError::Invalid { line: *line, msg: "preludes may only contain declarations".into() }),
        None => Ok(()),
    }
}

/// Parses `text` as a single query against a fresh environment.
pub fn parse(text: &str) -> Result<QueryLine, DslError> {
    parse_query(&Env::default(), text)
}
