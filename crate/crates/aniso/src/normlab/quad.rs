//! Difference-quotient seminorms with log-spaced quadrature in `|h|`.

use aniso_core::anchors;
use aniso_core::{Scale, SpaceDescr};
use rayon::prelude::*;

use super::grid::{lp_sum, GridFunction};
use super::NormlabError;

/// Quadrature nodes per decade of `|h|`.
pub const NODES_PER_DECADE: f64 = 16.0;
/// Minimal span of the `|h|` range, in decades.
pub const MIN_DECADES: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureMeta {
    pub anchor: &'static str,
    /// `[h_min, h_max]` per slice.
    pub h_range: Vec<(f64, f64)>,
    /// Radial nodes per slice.
    pub nodes: Vec<usize>,
    /// Sampled directions per slice.
    pub directions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeminormResult {
    pub value: f64,
    /// Estimated contribution of the dropped core `|h| < h_min` and tail `|h| > h_max`.
    pub truncation_error_estimate: f64,
    pub meta: QuadratureMeta,
}

/// Dense row-major array.
#[derive(Clone, Debug)]
struct Array {
    data: Vec<f64>,
    shape: Vec<usize>,
}

impl Array {
    fn of(u: &GridFunction) -> Self {
        Array { data: u.samples.clone(), shape: u.points.clone() }
    }

    /// `(outer, len, inner)` for lines along `axis`.
    fn lines(&self, axis: usize) -> (usize, usize, usize) {
        let outer = self.shape[..axis].iter().product();
        let inner = self.shape[axis + 1..].iter().product();
        (outer, self.shape[axis], inner)
    }

    /// Zero padding by `pad` points on both ends of `axis`.
    fn padded(&self, axis: usize, pad: usize) -> Array {
        if pad == 0 {
            return self.clone();
        }
        let (outer, len, inner) = self.lines(axis);
        let new_len = len + 2 * pad;
        let mut data = vec![0.0; outer * new_len * inner];
        for o in 0..outer {
            let src = &self.data[o * len * inner..(o + 1) * len * inner];
            let dst = (o * new_len + pad) * inner;
            data[dst..dst + len * inner].copy_from_slice(src);
        }
        let mut shape = self.shape.clone();
        shape[axis] = new_len;
        Array { data, shape }
    }

    /// `out[i] = v(i + sigma)` along `axis` by cubic Lagrange interpolation, zero outside.
    fn shifted(&self, axis: usize, sigma: f64) -> Array {
        if sigma == 0.0 {
            return self.clone();
        }
        let (outer, len, inner) = self.lines(axis);
        let base = sigma.floor();
        let t = sigma - base;
        let base = base as isize;
        let taps: Vec<(isize, f64)> = if t == 0.0 {
            vec![(0, 1.0)]
        } else {
            vec![
                (-1, -t * (t - 1.0) * (t - 2.0) / 6.0),
                (0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0),
                (1, -(t + 1.0) * t * (t - 2.0) / 2.0),
                (2, (t + 1.0) * t * (t - 1.0) / 6.0),
            ]
        };
        let mut data = vec![0.0; self.data.len()];
        for o in 0..outer {
            let off = o * len * inner;
            for i in 0..len as isize {
                let row = off + i as usize * inner;
                for &(d, w) in &taps {
                    let j = i + base + d;
                    if j < 0 || j >= len as isize {
                        continue;
                    }
                    let src = off + j as usize * inner;
                    for r in 0..inner {
                        data[row + r] += w * self.data[src + r];
                    }
                }
            }
        }
        Array { data, shape: self.shape.clone() }
    }

    /// Fourth-order central difference along `axis`, zero outside.
    fn derivative(&self, axis: usize, h: f64) -> Array {
        let (outer, len, inner) = self.lines(axis);
        let stencil = [(-2isize, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];
        let mut data = vec![0.0; self.data.len()];
        for o in 0..outer {
            let off = o * len * inner;
            for i in 0..len as isize {
                let row = off + i as usize * inner;
                for &(d, w) in &stencil {
                    let j = i + d;
                    if j < 0 || j >= len as isize {
                        continue;
                    }
                    let src = off + j as usize * inner;
                    for r in 0..inner {
                        data[row + r] += w * self.data[src + r] / (12.0 * h);
                    }
                }
            }
        }
        Array { data, shape: self.shape.clone() }
    }
}

/// Half-sphere directions with weights summing to `|S^{n-1}|`; `±h` give equal contributions.
fn directions(n: usize) -> Result<Vec<(Vec<f64>, f64)>, NormlabError> {
    use std::f64::consts::PI;
    match n {
        1 => Ok(vec![(vec![1.0], 2.0)]),
        2 => Ok((0..8)
            .map(|i| {
                let a = i as f64 * PI / 8.0;
                (vec![a.cos(), a.sin()], 2.0 * PI / 8.0)
            })
            .collect()),
        3 => {
            let d = 1.0 / 3f64.sqrt();
            let mut out: Vec<(Vec<f64>, f64)> = (0..3)
                .map(|a| {
                    let mut e = vec![0.0; 3];
                    e[a] = 1.0;
                    (e, 8.0 * PI / 15.0)
                })
                .collect();
            for s in [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0]] {
                out.push((s.iter().map(|v| v * d).collect(), 3.0 * PI / 5.0));
            }
            Ok(out)
        }
        _ => Err(NormlabError::InvalidArgument(format!("slices of dimension {} are not supported", n))),
    }
}

/// Multi-indices of order `m` on `n` coordinates.
fn multi_indices(n: usize, m: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![m]];
    }
    (0..=m).flat_map(|a| multi_indices(n - 1, m - a).into_iter().map(move |mut rest| {
        rest.insert(0, a);
        rest
    }))
    .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `‖Σ_j c_j v(· + j·r·θ)‖_{L_p}^p` over the zero extension.
#[allow(clippy::too_many_arguments)]
fn difference_sum(v: &Array, axes: &[usize], spacing: &[f64], theta: &[f64], r: f64, coeffs: &[(usize, f64)], p: f64, vol: f64) -> f64 {
    let jmax = coeffs.iter().map(|c| c.0).max().unwrap_or(0) as f64;
    let disjoint = axes.iter().enumerate().any(|(i, &a)| r * theta[i].abs() / spacing[a] >= (v.shape[a] + 4) as f64);
    if disjoint {
        let weight: f64 = coeffs.iter().map(|c| c.1.abs().powf(p)).sum();
        return weight * lp_sum(&v.data, p, vol);
    }
    let mut base = v.clone();
    for (i, &a) in axes.iter().enumerate() {
        let pad = (jmax * r * theta[i].abs() / spacing[a]).ceil() as usize + 3;
        base = base.padded(a, pad);
    }
    let mut acc = vec![0.0; base.data.len()];
    for &(j, c) in coeffs {
        let mut w = base.clone();
        for (i, &a) in axes.iter().enumerate() {
            w = w.shifted(a, j as f64 * r * theta[i] / spacing[a]);
        }
        for (t, x) in acc.iter_mut().zip(&w.data) {
            *t += c * x;
        }
    }
    lp_sum(&acc, p, vol)
}

struct SliceSetup {
    axes: Vec<usize>,
    ratio: f64,
    h_min: f64,
    h_max: f64,
    radii: Vec<f64>,
    step: f64,
    dirs: Vec<(Vec<f64>, f64)>,
}

fn slice_setup(u: &GridFunction, space: &SpaceDescr, k: usize, s: f64) -> Result<SliceSetup, NormlabError> {
    let h_min = u.spacing[k] / 2.0;
    let h_max = 4.0 * u.decay_radius;
    let decades = (h_max / h_min).log10();
    if decades < MIN_DECADES {
        return Err(NormlabError::Resolution(format!("slice {}: |h| range spans {:.2} decades, need {}", k + 1, decades, MIN_DECADES)));
    }
    let intervals = (NODES_PER_DECADE * decades).ceil() as usize;
    let step = (h_max / h_min).ln() / intervals as f64;
    let radii = (0..=intervals).map(|i| h_min * (step * i as f64).exp()).collect();
    Ok(SliceSetup {
        axes: u.slice_axes(k).collect(),
        ratio: s / space.aniso.weights()[k] as f64,
        h_min,
        h_max,
        radii,
        step,
        dirs: directions(u.slice_dims[k])?,
    })
}

/// Trapezoid rule in `ln r` for `f(r)` sampled at `radii`.
fn trapezoid(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    let inner: f64 = values.iter().sum();
    step * (inner - 0.5 * (values[0] + values[n - 1]))
}

fn concrete(space: &SpaceDescr, u: &GridFunction) -> Result<(f64, f64), NormlabError> {
    let dims: Vec<usize> = space.aniso.dims().iter().map(|&d| d as usize).collect();
    if dims != u.slice_dims {
        return Err(NormlabError::InvalidArgument(format!("grid slices {:?} do not match {}", u.slice_dims, space)));
    }
    let s = space.s_val()?;
    let x = space.x_val()?;
    if !x.is_positive() || x > aniso_core::Rational::one() {
        return Err(NormlabError::InvalidArgument(format!("{} needs 1 <= p < inf", space)));
    }
    if !s.is_positive() {
        return Err(NormlabError::InvalidArgument(format!("{} needs s > 0", space)));
    }
    Ok((s.to_f64(), 1.0 / x.to_f64()))
}

/// Slobodeckij seminorm `[u]_{W^{s,ω}_p}`.
pub fn seminorm_slobodeckij(u: &GridFunction, space: &SpaceDescr) -> Result<SeminormResult, NormlabError> {
    if space.scale != Scale::W {
        return Err(NormlabError::WrongScale(format!("{} is not a Sobolev-Slobodeckij space", space)));
    }
    u.validate()?;
    let (s, p) = concrete(space, u)?;
    let s_exact = space.s_val()?;
    for &w in space.aniso.weights() {
        if s_exact.is_pos_multiple_of(w as u64) {
            return Err(NormlabError::WrongScale(format!("s/omega_k = {}/{} is an integer", s_exact, w)));
        }
    }
    let vol = u.cell_volume();
    let spacing = u.axis_spacing();
    let base = Array::of(u);
    let mut total = 0.0;
    let mut dropped = 0.0;
    let mut meta = QuadratureMeta { anchor: anchors::W_NORM, h_range: Vec::new(), nodes: Vec::new(), directions: Vec::new() };
    for k in 0..u.slice_dims.len() {
        let st = slice_setup(u, space, k, s)?;
        let m = st.ratio.floor() as usize;
        let kappa = (m as f64 - st.ratio) * p;
        for alpha in multi_indices(st.axes.len(), m) {
            let mut v = base.clone();
            for (i, &order) in alpha.iter().enumerate() {
                for _ in 0..order {
                    v = v.derivative(st.axes[i], spacing[st.axes[i]]);
                }
            }
            let f: Vec<f64> = st
                .radii
                .par_iter()
                .map(|&r| {
                    st.dirs.iter().map(|(theta, w)| w * difference_sum(&v, &st.axes, &spacing, theta, r, &[(1, 1.0), (0, -1.0)], p, vol)).sum::<f64>()
                        * r.powf(kappa)
                })
                .collect();
            total += trapezoid(&f, st.step);
            let weight: f64 = st.dirs.iter().map(|d| d.1).sum();
            dropped += f[0] / ((m as f64 + 1.0 - st.ratio) * p);
            dropped += 2.0 * lp_sum(&v.data, p, vol) * weight * st.h_max.powf(kappa) / kappa.abs();
        }
        meta.h_range.push((st.h_min, st.h_max));
        meta.nodes.push(st.radii.len());
        meta.directions.push(st.dirs.len());
    }
    let value = total.powf(1.0 / p);
    Ok(SeminormResult { value, truncation_error_estimate: (total + dropped).powf(1.0 / p) - value, meta })
}

/// Besov seminorm `[u]_{B^{s,ω}_{p,q}}` with iterated differences.
pub fn seminorm_besov(u: &GridFunction, space: &SpaceDescr) -> Result<SeminormResult, NormlabError> {
    if space.scale != Scale::B {
        return Err(NormlabError::WrongScale(format!("{} is not a Besov space", space)));
    }
    u.validate()?;
    let (s, p) = concrete(space, u)?;
    let y = space.y_val()?;
    if !y.is_positive() || y > aniso_core::Rational::one() {
        return Err(NormlabError::InvalidArgument(format!("{} needs 1 <= q < inf", space)));
    }
    let q = 1.0 / y.to_f64();
    let vol = u.cell_volume();
    let spacing = u.axis_spacing();
    let base = Array::of(u);
    let norm_p = lp_sum(&base.data, p, vol);
    let mut total = 0.0;
    let mut dropped = 0.0;
    let mut meta = QuadratureMeta { anchor: anchors::B_NORM, h_range: Vec::new(), nodes: Vec::new(), directions: Vec::new() };
    for k in 0..u.slice_dims.len() {
        let st = slice_setup(u, space, k, s)?;
        let order = st.ratio.floor() as usize + 1;
        let coeffs: Vec<(usize, f64)> =
            (0..=order).map(|j| (j, if (order - j).is_multiple_of(2) { 1.0 } else { -1.0 } * binomial(order, j))).collect();
        let kappa = -st.ratio * q;
        let f: Vec<f64> = st
            .radii
            .par_iter()
            .map(|&r| {
                st.dirs.iter().map(|(theta, w)| w * difference_sum(&base, &st.axes, &spacing, theta, r, &coeffs, p, vol).powf(q / p)).sum::<f64>()
                    * r.powf(kappa)
            })
            .collect();
        total += trapezoid(&f, st.step);
        let weight: f64 = st.dirs.iter().map(|d| d.1).sum();
        let far: f64 = coeffs.iter().map(|c| c.1.abs().powf(p)).sum::<f64>() * norm_p;
        dropped += f[0] / ((order as f64 - st.ratio) * q);
        dropped += far.powf(q / p) * weight * st.h_max.powf(kappa) / kappa.abs();
        meta.h_range.push((st.h_min, st.h_max));
        meta.nodes.push(st.radii.len());
        meta.directions.push(st.dirs.len());
    }
    let value = total.powf(1.0 / q);
    Ok(SeminormResult { value, truncation_error_estimate: (total + dropped).powf(1.0 / q) - value, meta })
}

/// Seminorm matching the scale of `space`.
pub fn seminorm(u: &GridFunction, space: &SpaceDescr) -> Result<SeminormResult, NormlabError> {
    match space.scale {
        Scale::W => seminorm_slobodeckij(u, space),
        Scale::B => seminorm_besov(u, space),
        other => Err(NormlabError::WrongScale(format!("no difference-quotient seminorm for scale {}", other))),
    }
}

/// Full norm: `‖u‖_p + [u]` on fractional scales, `Σ_k Σ_{|α| ≤ s/ω_k} ‖∂^α_k u‖_p` on integer ones.
pub fn full_norm(u: &GridFunction, space: &SpaceDescr) -> Result<f64, NormlabError> {
    let n = aniso_core::spaces::normalize(space)?;
    let x = n.x_val()?;
    if !x.is_positive() {
        return Err(NormlabError::InvalidArgument(format!("{}: p = inf is not sampled", space)));
    }
    let p = 1.0 / x.to_f64();
    let lp = u.lp_norm(p);
    match n.scale {
        Scale::L => Ok(lp),
        Scale::B => {
            let mut w = n.clone();
            if n.y.is_none() {
                w.scale = Scale::W;
                let s = n.s_val()?;
                if space.aniso.weights().iter().any(|&wk| s.is_pos_multiple_of(wk as u64)) {
                    w.scale = Scale::B;
                }
            }
            Ok(lp + seminorm(u, &w)?.value)
        }
        Scale::H => {
            let s = n.s_val()?;
            let spacing = u.axis_spacing();
            let mut total = 0.0;
            for (k, &wk) in space.aniso.weights().iter().enumerate() {
                let ratio = &s / &aniso_core::Rational::integer(wk as i64);
                if !ratio.is_integer() {
                    return Err(NormlabError::WrongScale(format!("{}: s/omega_{} = {} is fractional", space, k + 1, ratio)));
                }
                let axes: Vec<usize> = u.slice_axes(k).collect();
                for m in 0..=ratio.to_i64().unwrap_or(0) as usize {
                    for alpha in multi_indices(axes.len(), m) {
                        let mut v = Array::of(u);
                        for (i, &o) in alpha.iter().enumerate() {
                            for _ in 0..o {
                                v = v.derivative(axes[i], spacing[axes[i]]);
                            }
                        }
                        total += lp_sum(&v.data, p, u.cell_volume()).powf(1.0 / p);
                    }
                }
            }
            Ok(total)
        }
        other => Err(NormlabError::WrongScale(format!("no sampled norm for scale {}", other))),
    }
}
