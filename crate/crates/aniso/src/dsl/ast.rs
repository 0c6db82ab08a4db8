//! Parsed queries and the declarations that scope them.

use std::collections::BTreeMap;

use aniso_core::multiply::MultInstance;
use aniso_core::{MultSignature, Rational, SpaceDescr, TargetSpace};

/// Fine parameter of the interpolation method.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    Complex,
    /// `None` couples `q = p`; otherwise the fixed `1/q`.
    Real(Option<Rational>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Stefan,
    Nvs,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Stefan => "stefan",
            Problem::Nvs => "nvs",
        }
    }
}

/// Test function for `seminorm`: a modulated anisotropic Gaussian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFn {
    /// One width per slice, or a single width shared by all slices.
    pub widths: Vec<Rational>,
    pub amplitude: Rational,
    pub frequency: Rational,
    pub phase: Rational,
    /// Grid points per width.
    pub ppw: u32,
}

impl Default for TestFn {
    fn default() -> Self {
        TestFn { widths: vec![Rational::one()], amplitude: Rational::one(), frequency: Rational::zero(), phase: Rational::zero(), ppw: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Index(SpaceDescr),
    Embed { src: SpaceDescr, dst: SpaceDescr },
    Mult(MultInstance),
    Multiplier { inst: MultInstance, ell: usize },
    Algebra(SpaceDescr),
    Nemytskij { args: Vec<SpaceDescr>, target: SpaceDescr, radius: Rational, vanishing: bool },
    SolveP(Box<Query>),
    Interp { method: Method, theta: Rational, a: SpaceDescr, b: SpaceDescr },
    Realize { sigma: Vec<Rational>, pi: Vec<Rational>, rho: Rational },
    Minimize { sigma: Vec<Rational>, pi: Vec<Rational>, n: u32 },
    Seminorm { func: TestFn, space: SpaceDescr },
    App { problem: Problem, n: u32 },
}

impl Query {
    pub fn kind(&self) -> &'static str {
        match self {
            Query::Index(_) => "index",
            Query::Embed { .. } => "embed",
            Query::Mult(_) => "mult",
            Query::Multiplier { .. } => "multiplier",
            Query::Algebra(_) => "algebra",
            Query::Nemytskij { .. } => "nemytskij",
            Query::SolveP(_) => "solve-p",
            Query::Interp { .. } => "interp",
            Query::Realize { .. } => "realize",
            Query::Minimize { .. } => "minimize",
            Query::Seminorm { .. } => "seminorm",
            Query::App { .. } => "app",
        }
    }

    /// Kinds that `solve p:` accepts.
    pub fn is_decision(&self) -> bool {
        matches!(self, Query::Embed { .. } | Query::Mult(_) | Query::Multiplier { .. } | Query::Algebra(_) | Query::Nemytskij { .. })
    }
}

/// A query with an optional concrete `p` substituted before evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryLine {
    pub at_p: Option<Rational>,
    pub query: Query,
}

/// Names bound by `let`, `target` and `signature` lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Env {
    pub domains: BTreeMap<String, Vec<u32>>,
    pub targets: BTreeMap<String, TargetSpace>,
    pub signatures: Vec<MultSignature>,
    pub spaces: BTreeMap<String, SpaceDescr>,
}

impl Env {
    pub fn target(&self, name: &str) -> Option<TargetSpace> {
        if name == "R" {
            return Some(TargetSpace::scalar());
        }
        self.targets.get(name).cloned()
    }

    /// Declared signature matching the value spaces of `factors` and `target`.
    pub fn signature_for(&self, factors: &[SpaceDescr], target: &SpaceDescr) -> Option<MultSignature> {
        self.signatures
            .iter()
            .find(|s| {
                s.result == target.target && s.factors.len() == factors.len() && s.factors.iter().zip(factors).all(|(t, f)| *t == f.target)
            })
            .cloned()
    }
}
