//! Tensor-product sample grids and the analytic test functions that fill them.

use super::NormlabError;

/// Samples of a real function on a tensor grid, one block of axes per slice.
///
/// Values outside the grid are taken to be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub slice_dims: Vec<usize>,
    pub spacing: Vec<f64>,
    /// Points per coordinate axis; `slice_dims.iter().sum()` entries.
    pub points: Vec<usize>,
    /// Coordinate of index 0 on every axis.
    pub origin: Vec<f64>,
    /// Row-major, last axis fastest.
    pub samples: Vec<f64>,
    pub decay_radius: f64,
}

impl GridFunction {
    /// Samples `f` on `[-extent_k, extent_k]^{n_k}` per slice with step `spacing_k`.
    pub fn from_fn(
        slice_dims: &[usize],
        spacing: &[f64],
        extent: &[f64],
        decay_radius: f64,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self, NormlabError> {
        if slice_dims.is_empty() || slice_dims.len() != spacing.len() || spacing.len() != extent.len() {
            return Err(NormlabError::InvalidArgument("slice dims, spacings and extents must have equal nonzero length".into()));
        }
        if spacing.iter().chain(extent).any(|v| !(v.is_finite() && *v > 0.0)) || decay_radius.is_nan() || decay_radius <= 0.0 {
            return Err(NormlabError::InvalidArgument("spacings, extents and decay radius must be positive".into()));
        }
        let mut points = Vec::new();
        let mut origin = Vec::new();
        let mut step = Vec::new();
        for (k, &n) in slice_dims.iter().enumerate() {
            let half = (extent[k] / spacing[k]).ceil() as usize;
            for _ in 0..n {
                points.push(2 * half + 1);
                origin.push(-(half as f64) * spacing[k]);
                step.push(spacing[k]);
            }
        }
        let total: usize = points.iter().product();
        let mut samples = Vec::with_capacity(total);
        let mut x = vec![0.0; points.len()];
        for flat in 0..total {
            let mut rem = flat;
            for a in (0..points.len()).rev() {
                x[a] = origin[a] + (rem % points[a]) as f64 * step[a];
                rem /= points[a];
            }
            samples.push(f(&x));
        }
        let g = GridFunction { slice_dims: slice_dims.to_vec(), spacing: spacing.to_vec(), points, origin, samples, decay_radius };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), NormlabError> {
        if self.points.len() != self.slice_dims.iter().sum::<usize>() || self.origin.len() != self.points.len() {
            return Err(NormlabError::InvalidArgument("axis bookkeeping does not match slice dims".into()));
        }
        if self.samples.len() != self.points.iter().product::<usize>() {
            return Err(NormlabError::InvalidArgument("sample count does not match the grid".into()));
        }
        if self.samples.iter().any(|v| !v.is_finite()) {
            return Err(NormlabError::InvalidArgument("samples must be finite".into()));
        }
        Ok(())
    }

    /// Spacing of every coordinate axis.
    pub fn axis_spacing(&self) -> Vec<f64> {
        self.slice_dims.iter().zip(&self.spacing).flat_map(|(&n, &h)| std::iter::repeat_n(h, n)).collect()
    }

    /// Axes belonging to slice `k`.
    pub fn slice_axes(&self, k: usize) -> std::ops::Range<usize> {
        let start: usize = self.slice_dims[..k].iter().sum();
        start..start + self.slice_dims[k]
    }

    pub fn cell_volume(&self) -> f64 {
        self.slice_dims.iter().zip(&self.spacing).map(|(&n, &h)| h.powi(n as i32)).product()
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.slice_dims == other.slice_dims && self.spacing == other.spacing && self.points == other.points && self.origin == other.origin
    }

    /// Copy with new samples on the same grid.
    pub fn with_samples(&self, samples: Vec<f64>) -> Self {
        GridFunction { samples, ..self.clone() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.with_samples(self.samples.iter().map(|v| c * v).collect())
    }

    /// Pointwise product on a shared grid.
    pub fn product(factors: &[&GridFunction]) -> Result<GridFunction, NormlabError> {
        let first = factors.first().ok_or_else(|| NormlabError::InvalidArgument("empty product".into()))?;
        if factors.iter().any(|f| !first.same_grid(f)) {
            return Err(NormlabError::InvalidArgument("factors live on different grids".into()));
        }
        let samples = (0..first.samples.len()).map(|i| factors.iter().map(|f| f.samples[i]).product()).collect();
        let decay = factors.iter().map(|f| f.decay_radius).fold(f64::INFINITY, f64::min);
        Ok(GridFunction { decay_radius: decay, ..first.with_samples(samples) })
    }

    /// `‖u‖_{L_p}` by the rectangle rule.
    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_sum(&self.samples, p, self.cell_volume()).powf(1.0 / p)
    }
}

/// `Σ |v|^p · vol`.
pub(crate) fn lp_sum(v: &[f64], p: f64, vol: f64) -> f64 {
    let s: f64 = if p == 2.0 { v.iter().map(|a| a * a).sum() } else { v.iter().map(|a| a.abs().powf(p)).sum() };
    s * vol
}

/// `-ln(1e-12)`: Gaussians are below `1e-12` of their peak beyond `width·sqrt` of this.
const TAIL_LOG: f64 = 27.631_021_115_928_547;

/// Anisotropic, optionally modulated Gaussian
/// `A·exp(−Σ_k |x_k − c_k|²/w_k²)·cos(ξ·x_{1,1} + φ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gaussian {
    pub widths: Vec<f64>,
    pub amplitude: f64,
    /// Per coordinate axis; empty means centred at the origin.
    pub center: Vec<f64>,
    pub frequency: f64,
    pub phase: f64,
}

impl Gaussian {
    pub fn new(widths: Vec<f64>) -> Self {
        Gaussian { widths, amplitude: 1.0, center: Vec::new(), frequency: 0.0, phase: 0.0 }
    }

    pub fn modulated(mut self, frequency: f64, phase: f64) -> Self {
        self.frequency = frequency;
        self.phase = phase;
        self
    }

    pub fn eval(&self, slice_dims: &[usize], x: &[f64]) -> f64 {
        let mut e = 0.0;
        let mut a = 0;
        for (k, &n) in slice_dims.iter().enumerate() {
            for _ in 0..n {
                let c = self.center.get(a).copied().unwrap_or(0.0);
                e += ((x[a] - c) / self.widths[k]).powi(2);
                a += 1;
            }
        }
        let wave = if self.frequency == 0.0 && self.phase == 0.0 { 1.0 } else { (self.frequency * x[0] + self.phase).cos() };
        self.amplitude * (-e).exp() * wave
    }

    /// Radius beyond which the envelope is below `1e-12`.
    pub fn decay_radius(&self) -> f64 {
        let c = self.center.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.widths.iter().fold(0.0f64, |m, &w| m.max(w)) * TAIL_LOG.sqrt() + c
    }

    /// `(δ_λ u)(x) = u(λ^{ω_k} x_k)`.
    pub fn dilated(&self, lambda: f64, weights: &[u32], slice_dims: &[usize]) -> Gaussian {
        let factor: Vec<f64> = weights.iter().map(|&w| lambda.powi(w as i32)).collect();
        let axis_factor: Vec<f64> = slice_dims.iter().zip(&factor).flat_map(|(&n, &f)| std::iter::repeat_n(f, n)).collect();
        Gaussian {
            widths: self.widths.iter().zip(&factor).map(|(w, f)| w / f).collect(),
            amplitude: self.amplitude,
            center: self.center.iter().zip(&axis_factor).map(|(c, f)| c / f).collect(),
            frequency: self.frequency * axis_factor.first().copied().unwrap_or(1.0),
            phase: self.phase,
        }
    }

    /// Grid with `ppw` points per width on every slice, refined to resolve the modulation.
    pub fn grid(&self, slice_dims: &[usize], ppw: usize) -> Result<GridFunction, NormlabError> {
        if self.widths.len() != slice_dims.len() || self.widths.iter().any(|w| w.is_nan() || *w <= 0.0) {
            return Err(NormlabError::InvalidArgument("one positive width per slice is required".into()));
        }
        if ppw < 4 {
            return Err(NormlabError::Resolution(format!("{} points per width is too coarse", ppw)));
        }
        let c = self.center.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let extent: Vec<f64> = self.widths.iter().map(|w| w * TAIL_LOG.sqrt() + c).collect();
        let mut spacing: Vec<f64> = self.widths.iter().map(|w| w / ppw as f64).collect();
        if self.frequency != 0.0 {
            let period = std::f64::consts::TAU / self.frequency.abs();
            spacing[0] = spacing[0].min(period / ppw.max(12) as f64);
        }
        GridFunction::from_fn(slice_dims, &spacing, &extent, self.decay_radius(), |x| self.eval(slice_dims, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_l2_norm_matches_closed_form() {
        let g = Gaussian::new(vec![1.0]).grid(&[1], 16).unwrap();
        let exact = (std::f64::consts::PI / 2.0).sqrt().sqrt();
        assert!((g.lp_norm(2.0) - exact).abs() < 1e-10);
    }

    #[test]
    fn grid_layout() {
        let g = Gaussian::new(vec![1.0, 2.0]).grid(&[1, 2], 4).unwrap();
        assert_eq!(g.points.len(), 3);
        assert_eq!(g.slice_axes(1), 1..3);
        assert_eq!(g.samples.len(), g.points.iter().product::<usize>());
        assert_eq!(g.axis_spacing(), vec![0.25, 0.5, 0.5]);
    }

    #[test]
    fn dilation_rescales_widths() {
        let g = Gaussian::new(vec![1.0, 1.0]).dilated(2.0, &[2, 1], &[1, 1]);
        assert_eq!(g.widths, vec![0.25, 0.5]);
    }

    #[test]
    fn non_finite_samples_are_rejected() {
        let r = GridFunction::from_fn(&[1], &[0.5], &[1.0], 1.0, |_| f64::NAN);
        assert!(matches!(r, Err(NormlabError::InvalidArgument(_))));
    }
}
