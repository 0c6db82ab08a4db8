//! Query language, CLI plumbing and numerical seminorm checks on top of `aniso-core`.
pub mod dsl;

pub mod normlab;
