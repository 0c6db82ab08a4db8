//! Exact decision procedures for anisotropic vector-valued function spaces.
//!
//! Parameters are exact rationals; integrability is stored as `x = 1/p` so that
//! every index condition is affine in `x`.
#![no_std]

extern crate alloc;

pub mod anchors;
pub mod appsuite;
pub mod decision;
pub mod embed;
pub mod lemmas;
pub mod error;
pub mod multiply;
pub mod nemytskij;
pub mod psolver;
pub mod ratcore;
pub mod spaces;

pub use decision::{Check, Decision, Status, Verdict};
pub use error::{Error, Result};
pub use ratcore::{affine_compare, AffineExpr, Rational, Sign, SignPartition};
pub use spaces::{Anisotropy, MultSignature, Scale, SpaceDescr, TargetSpace};
