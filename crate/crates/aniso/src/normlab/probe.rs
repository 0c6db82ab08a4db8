//! Empirical checks: dilation scaling of seminorms and bounded product ratios.

use aniso_core::multiply::{decide_multiplication, reduced_multiplication, MultInstance};
use aniso_core::spaces::sobolev_index;
use aniso_core::{Decision, SpaceDescr};

use super::grid::{Gaussian, GridFunction};
use super::quad::{full_norm, seminorm};
use super::NormlabError;

/// Dilation factors used by [`dilation_scaling`].
pub const LAMBDAS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    /// `(λ, [δ_λ u])`.
    pub table: Vec<(f64, f64)>,
    /// Least-squares slope of `ln [δ_λ u]` against `ln λ`.
    pub slope: f64,
    /// `ω̇·ind` of the space.
    pub expected: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// Seminorms of `δ_λ g` for every `λ`, each recomputed on its own dilated grid.
pub fn dilation_scaling(g: &Gaussian, space: &SpaceDescr, ppw: usize, lambdas: &[f64]) -> Result<ScalingFit, NormlabError> {
    let dims: Vec<usize> = space.aniso.dims().iter().map(|&d| d as usize).collect();
    let mut table = Vec::new();
    for &lambda in lambdas {
        let grid = g.dilated(lambda, space.aniso.weights(), &dims).grid(&dims, ppw)?;
        table.push((lambda, seminorm(&grid, space)?.value));
    }
    let ind = sobolev_index(space)?;
    let ind = ind.as_constant().ok_or_else(|| NormlabError::InvalidArgument(format!("{} is symbolic", space)))?;
    let expected = ind.to_f64() * space.aniso.omega_dot() as f64;
    Ok(ScalingFit { slope: log_log_slope(&table), table, expected })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioStats {
    pub ratios: Vec<f64>,
    pub max: f64,
    pub min: f64,
}

impl RatioStats {
    fn of(ratios: Vec<f64>) -> Self {
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        RatioStats { ratios, max, min }
    }

    /// `max/min` across the family.
    pub fn spread(&self) -> f64 {
        self.max / self.min
    }
}

fn require_covered(d: Decision) -> Result<(), NormlabError> {
    match d.first_failure() {
        None => Ok(()),
        Some(c) => Err(NormlabError::NotCovered(format!("{} ({})", c.label, c.anchor))),
    }
}

/// `‖Π u_j‖_X / Π ‖u_j‖_{X_j}` over a family of factor tuples; refuses uncovered instances.
pub fn check_product_estimate(inst: &MultInstance, family: &[Vec<GridFunction>]) -> Result<RatioStats, NormlabError> {
    require_covered(decide_multiplication(inst)?)?;
    ratios(&inst.factors, &inst.target, family)
}

/// As [`check_product_estimate`] with the 1-based factors in `omit` replaced by the constant 1.
pub fn check_reduced_product_estimate(inst: &MultInstance, omit: &[usize], family: &[Vec<GridFunction>]) -> Result<RatioStats, NormlabError> {
    require_covered(reduced_multiplication(inst, omit)?)?;
    let kept: Vec<SpaceDescr> = inst.factors.iter().enumerate().filter(|(j, _)| !omit.contains(&(j + 1))).map(|(_, f)| f.clone()).collect();
    ratios(&kept, &inst.target, family)
}

fn ratios(factors: &[SpaceDescr], target: &SpaceDescr, family: &[Vec<GridFunction>]) -> Result<RatioStats, NormlabError> {
    if family.is_empty() {
        return Err(NormlabError::InvalidArgument("empty test family".into()));
    }
    let mut out = Vec::with_capacity(family.len());
    for tuple in family {
        if tuple.len() != factors.len() {
            return Err(NormlabError::InvalidArgument(format!("expected {} functions per tuple, got {}", factors.len(), tuple.len())));
        }
        let refs: Vec<&GridFunction> = tuple.iter().collect();
        let prod = GridFunction::product(&refs)?;
        let mut denom = 1.0;
        for (u, sp) in tuple.iter().zip(factors) {
            denom *= full_norm(u, sp)?;
        }
        out.push(full_norm(&prod, target)? / denom);
    }
    Ok(RatioStats::of(out))
}
