//! Space descriptors, anisotropy bookkeeping, the Sobolev index, and the
//! identifications between the W, H and B scales.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::anchors;
use crate::error::{Error, Result};
use crate::ratcore::{lcm_all, AffineExpr, Rational};

/// Slice dimensions `n = (n_1,…,n_ν)` and weights `ω = (ω_1,…,ω_ν)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Anisotropy {
    dims: Vec<u32>,
    weights: Vec<u32>,
    omega_dot: u64,
    omega_dot_n: u64,
}

impl Anisotropy {
    pub fn new(dims: Vec<u32>, weights: Vec<u32>) -> Result<Self> {
        if dims.is_empty() || dims.len() != weights.len() {
            return Err(Error::InvalidSpace(format!(
                "anisotropy needs matching nonempty dims and weights, got {} and {}",
                dims.len(),
                weights.len()
            )));
        }
        if dims.iter().chain(weights.iter()).any(|&v| v == 0) {
            return Err(Error::InvalidSpace("dims and weights must be positive".into()));
        }
        let w64: Vec<u64> = weights.iter().map(|&w| w as u64).collect();
        let omega_dot = lcm_all(&w64);
        let omega_dot_n = dims.iter().zip(&weights).map(|(&n, &w)| n as u64 * w as u64).sum();
        Ok(Anisotropy { dims, weights, omega_dot, omega_dot_n })
    }

    /// `ν = 1`, `ω = (1)` on `R^n`.
    pub fn isotropic(n: u32) -> Self {
        Anisotropy::new(alloc::vec![n], alloc::vec![1]).expect("positive dimension")
    }

    /// Parabolic weights `ω = (2,1)` on `R^1 × R^n`.
    pub fn parabolic(n: u32) -> Self {
        Anisotropy::new(alloc::vec![1, n], alloc::vec![2, 1]).expect("positive dimension")
    }

    pub fn nu(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn omega_dot(&self) -> u64 {
        self.omega_dot
    }

    pub fn omega_dot_n(&self) -> u64 {
        self.omega_dot_n
    }

    pub fn total_dim(&self) -> u32 {
        self.dims.iter().sum()
    }

    /// `ω = ω̇·(1,…,1)`.
    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|&w| w as u64 == self.omega_dot)
    }

    /// Label `R^{n_1x…xn_ν}` (or `R^n` for one slice).
    pub fn default_label(&self) -> String {
        if self.dims.len() == 1 {
            format!("R^{}", self.dims[0])
        } else {
            let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
            format!("R^{{{}}}", parts.join("x"))
        }
    }
}

/// Value space tag with the Banach-space properties the theorems need.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TargetSpace {
    pub name: String,
    pub umd: bool,
    pub prop_alpha: bool,
    pub banach_algebra: bool,
    pub unital: bool,
}

impl TargetSpace {
    pub fn new(name: &str, umd: bool, prop_alpha: bool, banach_algebra: bool, unital: bool) -> Result<Self> {
        if unital && !banach_algebra {
            return Err(Error::InvalidSpace(format!("target `{}` declared unital but not a Banach algebra", name)));
        }
        Ok(TargetSpace { name: name.into(), umd, prop_alpha, banach_algebra, unital })
    }

    /// The scalar field `R`.
    pub fn scalar() -> Self {
        TargetSpace { name: "R".into(), umd: true, prop_alpha: true, banach_algebra: true, unital: true }
    }

    /// A UMD space with property (α) that is not an algebra, e.g. `L_p(Ṙ)`.
    pub fn opaque(name: &str) -> Self {
        TargetSpace { name: name.into(), umd: true, prop_alpha: true, banach_algebra: false, unital: false }
    }

    pub fn is_scalar_field(&self) -> bool {
        (self.name == "R" || self.name == "C") && self.unital
    }
}

/// Pointwise multiplication `E_1 × … × E_m → E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultSignature {
    pub factors: Vec<TargetSpace>,
    pub result: TargetSpace,
    pub registered: bool,
}

impl MultSignature {
    /// Signature read off the descriptors; admissible only through the built-in rules.
    pub fn infer(factors: &[SpaceDescr], result: &SpaceDescr) -> Self {
        MultSignature {
            factors: factors.iter().map(|f| f.target.clone()).collect(),
            result: result.target.clone(),
            registered: false,
        }
    }

    /// A multiplication explicitly declared by the caller.
    pub fn registered(factors: Vec<TargetSpace>, result: TargetSpace) -> Self {
        MultSignature { factors, result, registered: true }
    }

    /// Built-in rules: products inside one Banach algebra, and scalar multiples of a single factor.
    pub fn is_admissible(&self) -> bool {
        if self.registered {
            return true;
        }
        if self.result.banach_algebra && self.factors.iter().all(|t| *t == self.result) {
            return true;
        }
        let non_scalar: Vec<&TargetSpace> = self.factors.iter().filter(|t| !t.is_scalar_field()).collect();
        match non_scalar.len() {
            0 => self.result.is_scalar_field(),
            1 => *non_scalar[0] == self.result,
            _ => false,
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        MultSignature {
            factors: perm.iter().map(|&i| self.factors[i].clone()).collect(),
            result: self.result.clone(),
            registered: self.registered,
        }
    }
}

impl fmt::Display for MultSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.factors.iter().map(|t| t.name.as_str()).collect();
        write!(f, "{} -> {}", names.join(" x "), self.result.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scale {
    B,
    H,
    W,
    L,
    C0,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::B => "B",
            Scale::H => "H",
            Scale::W => "W",
            Scale::L => "L",
            Scale::C0 => "C0",
        })
    }
}

/// A function space `X^{s,ω}_{p(,q)}(domain; target)` with `x = 1/p`, `y = 1/q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceDescr {
    pub scale: Scale,
    pub s: AffineExpr,
    pub x: AffineExpr,
    pub y: Option<Rational>,
    pub aniso: Anisotropy,
    pub target: TargetSpace,
    pub domain: String,
}

impl SpaceDescr {
    /// Scalar-valued space on the default domain of `aniso`.
    pub fn new(scale: Scale, s: AffineExpr, x: AffineExpr, aniso: Anisotropy) -> Self {
        let domain = aniso.default_label();
        SpaceDescr { scale, s, x, y: None, aniso, target: TargetSpace::scalar(), domain }
    }

    pub fn h(s: Rational, x: Rational, aniso: Anisotropy) -> Self {
        SpaceDescr::new(Scale::H, s.into(), x.into(), aniso)
    }

    pub fn b(s: Rational, x: Rational, y: Option<Rational>, aniso: Anisotropy) -> Self {
        SpaceDescr::new(Scale::B, s.into(), x.into(), aniso).with_y(y)
    }

    pub fn w(s: Rational, x: Rational, aniso: Anisotropy) -> Self {
        SpaceDescr::new(Scale::W, s.into(), x.into(), aniso)
    }

    pub fn l(x: Rational, aniso: Anisotropy) -> Self {
        SpaceDescr::new(Scale::L, AffineExpr::zero(), x.into(), aniso)
    }

    pub fn c0(aniso: Anisotropy) -> Self {
        SpaceDescr::new(Scale::C0, AffineExpr::zero(), AffineExpr::zero(), aniso)
    }

    pub fn with_y(mut self, y: Option<Rational>) -> Self {
        self.y = y;
        self
    }

    pub fn with_target(mut self, target: TargetSpace) -> Self {
        self.target = target;
        self
    }

    pub fn with_domain(mut self, domain: &str) -> Self {
        self.domain = domain.into();
        self
    }

    pub fn is_concrete(&self) -> bool {
        self.s.is_constant() && self.x.is_constant()
    }

    /// Substitutes `x = x0` in `s` and `x`.
    pub fn at(&self, x0: &Rational) -> SpaceDescr {
        let mut out = self.clone();
        out.s = self.s.subst(x0);
        out.x = self.x.subst(x0);
        out
    }

    /// Constant smoothness; errors on symbolic values.
    pub fn s_val(&self) -> Result<Rational> {
        self.s.as_constant().cloned().ok_or_else(|| Error::Unsupported(format!("smoothness of {} is symbolic", self)))
    }

    /// Constant `1/p`; errors on symbolic values.
    pub fn x_val(&self) -> Result<Rational> {
        self.x.as_constant().cloned().ok_or_else(|| Error::Unsupported(format!("integrability of {} is symbolic", self)))
    }

    /// `1/q`, with `q = p` when absent.
    pub fn y_val(&self) -> Result<Rational> {
        match &self.y {
            Some(y) => Ok(y.clone()),
            None => self.x_val(),
        }
    }

    /// Structural checks on parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let zero = Rational::zero();
        let one = Rational::one();
        if matches!(self.scale, Scale::L | Scale::C0) && self.s != AffineExpr::zero() {
            return Err(Error::InvalidSpace(format!("{} scale carries no smoothness", self.scale)));
        }
        if self.y.is_some() && self.scale != Scale::B {
            return Err(Error::InvalidSpace("micro-scale parameter q only exists for B".into()));
        }
        if let Some(y) = &self.y {
            if *y < zero || *y > one {
                return Err(Error::InvalidSpace(format!("1/q = {} outside [0,1]", y)));
            }
        }
        if self.scale == Scale::C0 {
            return Ok(());
        }
        if let Some(x) = self.x.as_constant() {
            let ok = match self.scale {
                Scale::H => *x > zero && *x < one,
                Scale::W => *x > zero && *x <= one,
                Scale::B | Scale::L => *x >= zero && *x <= one,
                Scale::C0 => true,
            };
            if !ok {
                return Err(Error::InvalidSpace(format!("1/p = {} outside the admissible range for {}", x, self.scale)));
            }
        }
        if self.scale == Scale::W {
            if let Some(s) = self.s.as_constant() {
                if s.is_negative() {
                    return Err(Error::InvalidSpace(format!("W requires s >= 0, got {}", s)));
                }
            }
        }
        Ok(())
    }

    /// Same anisotropy and domain label.
    pub fn same_base(&self, other: &SpaceDescr) -> bool {
        self.aniso == other.aniso && self.domain == other.domain
    }
}

/// Renders `s` in the query grammar, e.g. `1-1/p`, `5/2-1/2p`.
pub fn format_sexpr(s: &AffineExpr) -> String {
    let mut out = String::new();
    if !s.constant.is_zero() || s.slope.is_zero() {
        out.push_str(&s.constant.to_string());
    }
    if !s.slope.is_zero() {
        let mag = s.slope.abs();
        if s.slope.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if mag.denom().is_one() {
            out.push_str(&format!("{}/p", mag.numer()));
        } else {
            out.push_str(&format!("{}/{}p", mag.numer(), mag.denom()));
        }
    }
    out
}

/// Renders `1/p` as the integrability exponent: `p`, `inf`, or a rational.
pub fn format_pexpr(x: &AffineExpr) -> String {
    if *x == AffineExpr::var() {
        return "p".into();
    }
    match x.as_constant() {
        Some(c) if c.is_zero() => "inf".into(),
        Some(c) => c.recip().expect("nonzero").to_string(),
        None => format!("[1/p={}]", x),
    }
}

impl fmt::Display for SpaceDescr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let weights = if self.aniso.weights().iter().all(|&w| w == 1) {
            String::new()
        } else {
            let w: Vec<String> = self.aniso.weights().iter().map(|w| w.to_string()).collect();
            format!(",({})", w.join(","))
        };
        let tail = if self.target.is_scalar_field() && self.target.name == "R" {
            format!("({})", self.domain)
        } else {
            format!("({};{})", self.domain, self.target.name)
        };
        match self.scale {
            Scale::C0 => write!(f, "C0{}", tail),
            Scale::L => {
                if weights.is_empty() {
                    write!(f, "L_{}{}", format_pexpr(&self.x), tail)
                } else {
                    write!(f, "L^{{0{}}}_{}{}", weights, format_pexpr(&self.x), tail)
                }
            }
            _ => {
                write!(f, "{}^{{{}{}}}_{}", self.scale, format_sexpr(&self.s), weights, format_pexpr(&self.x))?;
                if let Some(y) = &self.y {
                    write!(f, "_{}", format_pexpr(&AffineExpr::constant(y.clone())))?;
                }
                f.write_str(&tail)
            }
        }
    }
}

/// `(1/ω̇)(s − (ω·n)·x)`; for `L_p` the adapted index `−((ω·n)/ω̇)·x`.
pub fn sobolev_index(space: &SpaceDescr) -> Result<AffineExpr> {
    let a = &space.aniso;
    let od = Rational::integer(a.omega_dot() as i64);
    let on = Rational::integer(a.omega_dot_n() as i64);
    match space.scale {
        Scale::C0 => Err(Error::Unsupported("C0 carries no Sobolev index".into())),
        Scale::L => Ok(space.x.scale(&(-on / od))),
        _ => {
            let inv = Rational::one() / od;
            Ok((&space.s - &space.x.scale(&on)).scale(&inv))
        }
    }
}

fn check_target_flags(space: &SpaceDescr) -> Result<()> {
    if matches!(space.scale, Scale::L | Scale::C0) {
        return Ok(());
    }
    if !space.target.umd {
        return Err(Error::HypothesisViolation(format!("target `{}` is not declared UMD", space.target.name)));
    }
    if !space.aniso.is_uniform() && !space.target.prop_alpha {
        return Err(Error::HypothesisViolation(format!(
            "target `{}` lacks property (alpha) required for non-uniform weights",
            space.target.name
        )));
    }
    Ok(())
}

/// Rewrites W into H, B or L and canonicalizes `B_{p,p}`.
pub fn normalize(space: &SpaceDescr) -> Result<SpaceDescr> {
    space.validate()?;
    check_target_flags(space)?;
    let mut out = space.clone();
    match space.scale {
        Scale::W => {
            let Some(s) = space.s.as_constant() else {
                // generic point of a symbolic smoothness: divisibility fails off a finite set
                out.scale = Scale::B;
                out.y = None;
                return Ok(out);
            };
            let od = space.aniso.omega_dot();
            if s.is_zero() {
                out.scale = Scale::L;
                out.s = AffineExpr::zero();
            } else if s.is_nonneg_multiple_of(od) {
                out.scale = Scale::H;
            } else if space.aniso.weights().iter().all(|&w| !s.is_pos_multiple_of(w as u64)) {
                out.scale = Scale::B;
                out.y = None;
            } else {
                return Err(Error::NotIdentifiable(format!(
                    "{}: s = {} is not in {}N_0 but s/omega_k is an integer for some k",
                    space, s, od
                )));
            }
        }
        Scale::B => {
            if let (Some(y), Some(x)) = (&space.y, space.x.as_constant()) {
                if y == x {
                    out.y = None;
                }
            }
        }
        _ => {}
    }
    Ok(out)
}

/// Candidate `x ∈ (0,1)` where a symbolic smoothness hits a multiple of some weight or `ω̇`.
pub fn divisibility_points(space: &SpaceDescr) -> Vec<Rational> {
    let mut out = Vec::new();
    if space.s.is_constant() {
        return out;
    }
    let mut moduli: Vec<u64> = space.aniso.weights().iter().map(|&w| w as u64).collect();
    moduli.push(space.aniso.omega_dot());
    let (zero, one) = (Rational::zero(), Rational::one());
    let v0 = space.s.eval(&zero);
    let v1 = space.s.eval(&one);
    let (lo, hi) = if v0 < v1 { (v0, v1) } else { (v1, v0) };
    for m in moduli {
        let mr = Rational::integer(m as i64);
        let kmin: BigInt = (&lo / &mr).floor();
        let kmax: BigInt = (&hi / &mr).ceil();
        let mut k = kmin;
        while k <= kmax {
            let target = Rational::from_bigints(k.clone(), BigInt::one()) * &mr;
            let root = (&space.s - &AffineExpr::constant(target)).root();
            if let Some(x) = root {
                if x > zero && x < one && !out.contains(&x) {
                    out.push(x);
                }
            }
            k += 1;
        }
    }
    out.sort();
    out
}

fn constant_ratio(a: &AffineExpr, b: &AffineExpr) -> Option<Rational> {
    let c = if !b.constant.is_zero() {
        &a.constant / &b.constant
    } else if !b.slope.is_zero() {
        &a.slope / &b.slope
    } else {
        return None;
    };
    if b.scale(&c) == *a {
        Some(c)
    } else {
        None
    }
}

/// Recovers `X^{s,ω}_p` over the full product from its slice characterization.
pub fn recognize_intersection(slices: &[(usize, SpaceDescr)]) -> Result<SpaceDescr> {
    let bad = |msg: String| Err(Error::NotAnIntersectionForm(msg));
    if slices.is_empty() {
        return bad("no slices".into());
    }
    let mut sorted: Vec<&(usize, SpaceDescr)> = slices.iter().collect();
    sorted.sort_by_key(|(k, _)| *k);
    for (i, (k, sp)) in sorted.iter().enumerate() {
        if *k != i + 1 {
            return bad(format!("slice indices must be 1..={} without gaps", sorted.len()));
        }
        if sp.aniso.nu() != 1 {
            return bad(format!("slice {} is not a single-slice space", k));
        }
    }
    let first = &sorted[0].1;
    if sorted.len() == 1 {
        return Ok(first.clone());
    }
    if !matches!(first.scale, Scale::H | Scale::W | Scale::B) {
        return bad(format!("scale {} has no slice characterization", first.scale));
    }
    for (k, sp) in &sorted {
        if sp.scale != first.scale || sp.x != first.x || sp.y != first.y || sp.target != first.target {
            return bad(format!("slice {} differs in scale, p, q or value space", k));
        }
        if sp.s == AffineExpr::zero() {
            return bad(format!("slice {} has zero smoothness", k));
        }
    }
    // ω_k ∝ s_1 / s_k
    let mut ratios = Vec::new();
    for (k, sp) in &sorted {
        match constant_ratio(&first.s, &sp.s) {
            Some(c) if c.is_positive() => ratios.push(c),
            _ => return bad(format!("slice {} smoothness is not a positive constant multiple of slice 1", k)),
        }
    }
    let den_lcm = ratios.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = ratios.iter().map(|c| c.numer() * (&den_lcm / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let mut weights = Vec::new();
    for v in &ints {
        let w: BigInt = v / &g;
        weights.push(u32::try_from(w).map_err(|_| Error::NotAnIntersectionForm("weights overflow".into()))?);
    }
    let dims: Vec<u32> = sorted.iter().map(|(_, sp)| sp.aniso.dims()[0]).collect();
    let aniso = Anisotropy::new(dims, weights.clone())?;
    let s = first.s.scale(&Rational::integer(weights[0] as i64));
    let labels: Vec<&str> = sorted.iter().map(|(_, sp)| sp.domain.as_str()).collect();
    Ok(SpaceDescr {
        scale: first.scale,
        s,
        x: first.x.clone(),
        y: first.y.clone(),
        aniso,
        target: first.target.clone(),
        domain: labels.join("x"),
    })
}

/// Slice spaces `X^{s/ω_k}_p(R^{n_k}; L_p(rest))` of an anisotropic space.
pub fn expand_slices(space: &SpaceDescr) -> Result<Vec<(usize, SpaceDescr)>> {
    if !matches!(space.scale, Scale::H | Scale::W | Scale::B) {
        return Err(Error::NotAnIntersectionForm(format!("scale {} has no slice characterization", space.scale)));
    }
    let a = &space.aniso;
    let labels: Vec<&str> = space.domain.split('x').collect();
    let mut out = Vec::new();
    for k in 0..a.nu() {
        let w = Rational::integer(a.weights()[k] as i64);
        let label = if labels.len() == a.nu() { labels[k].to_string() } else { format!("{}#{}", space.domain, k + 1) };
        out.push((
            k + 1,
            SpaceDescr {
                scale: space.scale,
                s: space.s.scale(&(Rational::one() / w)),
                x: space.x.clone(),
                y: space.y.clone(),
                aniso: Anisotropy::isotropic(a.dims()[k]),
                target: space.target.clone(),
                domain: label,
            },
        ));
    }
    Ok(out)
}

/// Anchor of the identification applied by [`normalize`] to a W space, if any.
pub fn normalization_anchor(before: &SpaceDescr, after: &SpaceDescr) -> Option<&'static str> {
    match (before.scale, after.scale) {
        (Scale::W, Scale::H) | (Scale::W, Scale::L) => Some(anchors::HW),
        (Scale::W, Scale::B) => Some(anchors::BW),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn one_minus_x() -> AffineExpr {
        AffineExpr::new(r(1, 1), r(-1, 1))
    }

    #[test]
    fn anisotropy_derived_fields() {
        let a = Anisotropy::new(alloc::vec![1, 3], alloc::vec![2, 1]).unwrap();
        assert_eq!(a.omega_dot(), 2);
        assert_eq!(a.omega_dot_n(), 5);
        assert!(!a.is_uniform());
        assert!(Anisotropy::new(alloc::vec![1], alloc::vec![]).is_err());
        assert!(Anisotropy::new(alloc::vec![2, 2], alloc::vec![3, 3]).unwrap().is_uniform());
    }

    #[test]
    fn unital_requires_algebra() {
        assert!(TargetSpace::new("E", true, true, false, true).is_err());
    }

    #[test]
    fn parabolic_h2_index() {
        for n in 1..6u32 {
            let sp = SpaceDescr::new(Scale::H, r(2, 1).into(), AffineExpr::var(), Anisotropy::parabolic(n));
            let ind = sobolev_index(&sp).unwrap();
            assert_eq!(ind, AffineExpr::new(r(1, 1), r(-(n as i64 + 2), 2)));
        }
    }

    #[test]
    fn lebesgue_omega_index() {
        let a = Anisotropy::new(alloc::vec![1, 2], alloc::vec![4, 1]).unwrap();
        let sp = SpaceDescr::new(Scale::L, AffineExpr::zero(), AffineExpr::var(), a);
        assert_eq!(sobolev_index(&sp).unwrap(), AffineExpr::new(r(0, 1), r(-6, 4)));
    }

    #[test]
    fn isotropic_index_consistency() {
        let a = Anisotropy::new(alloc::vec![2, 1], alloc::vec![3, 3]).unwrap();
        let sp = SpaceDescr::h(r(5, 2), r(1, 4), a);
        assert_eq!(sobolev_index(&sp).unwrap().constant, r(5, 6) - r(3, 4));
    }

    #[test]
    fn c0_has_no_index() {
        assert!(matches!(sobolev_index(&SpaceDescr::c0(Anisotropy::isotropic(1))), Err(Error::Unsupported(_))));
    }

    #[test]
    fn normalize_examples() {
        let a = Anisotropy::parabolic(2);
        let w2 = SpaceDescr::new(Scale::W, r(2, 1).into(), AffineExpr::var(), a.clone());
        assert_eq!(normalize(&w2).unwrap().scale, Scale::H);
        let w_half = SpaceDescr::w(r(1, 2), r(1, 2), a.clone());
        let n = normalize(&w_half).unwrap();
        assert_eq!(n.scale, Scale::B);
        assert_eq!(n.y, None);
        let w3 = SpaceDescr::w(r(3, 1), r(1, 3), a.clone());
        assert!(matches!(normalize(&w3), Err(Error::NotIdentifiable(_))));
        let w0 = SpaceDescr::w(r(0, 1), r(1, 3), a.clone());
        assert_eq!(normalize(&w0).unwrap().scale, Scale::L);
        let bpp = SpaceDescr::b(r(1, 2), r(1, 3), Some(r(1, 3)), a);
        assert_eq!(normalize(&bpp).unwrap().y, None);
    }

    #[test]
    fn normalize_checks_flags() {
        let a = Anisotropy::parabolic(2);
        let no_alpha = TargetSpace::new("E", true, false, false, false).unwrap();
        let sp = SpaceDescr::h(r(2, 1), r(1, 3), a).with_target(no_alpha.clone());
        assert!(matches!(normalize(&sp), Err(Error::HypothesisViolation(_))));
        let iso = SpaceDescr::h(r(2, 1), r(1, 3), Anisotropy::isotropic(3)).with_target(no_alpha);
        assert!(normalize(&iso).is_ok());
        let no_umd = TargetSpace::new("F", false, true, false, false).unwrap();
        let sp = SpaceDescr::h(r(2, 1), r(1, 3), Anisotropy::isotropic(3)).with_target(no_umd);
        assert!(matches!(normalize(&sp), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn divisibility_points_of_affine_smoothness() {
        let a = Anisotropy::parabolic(2);
        let sp = SpaceDescr::new(Scale::W, AffineExpr::new(r(5, 2), r(-1, 1)), AffineExpr::var(), a.clone());
        assert_eq!(divisibility_points(&sp), alloc::vec![r(1, 2)]);
        let sp = SpaceDescr::new(Scale::W, one_minus_x(), AffineExpr::var(), a);
        assert!(divisibility_points(&sp).is_empty());
    }

    #[test]
    fn recognize_parabolic_h2() {
        let valued = TargetSpace::opaque("E");
        let s1 = SpaceDescr::h(r(1, 1), r(1, 3), Anisotropy::isotropic(1)).with_domain("J").with_target(valued.clone());
        let s2 = SpaceDescr::h(r(2, 1), r(1, 3), Anisotropy::isotropic(3)).with_domain("Rdot").with_target(valued);
        let out = recognize_intersection(&[(1, s1), (2, s2)]).unwrap();
        assert_eq!(out.aniso, Anisotropy::parabolic(3));
        assert_eq!(out.s, AffineExpr::constant(r(2, 1)));
        assert_eq!(out.domain, "JxRdot");
    }

    #[test]
    fn recognize_trace_space() {
        let s1 = SpaceDescr::new(Scale::W, AffineExpr::new(r(1, 2), r(-1, 2)), AffineExpr::var(), Anisotropy::isotropic(1));
        let s2 = SpaceDescr::new(Scale::W, one_minus_x(), AffineExpr::var(), Anisotropy::isotropic(2));
        let out = recognize_intersection(&[(1, s1), (2, s2)]).unwrap();
        assert_eq!(out.aniso.weights(), &[2, 1]);
        assert_eq!(out.s, one_minus_x());
    }

    #[test]
    fn recognize_single_slice_and_failures() {
        let s = SpaceDescr::h(r(3, 2), r(1, 2), Anisotropy::isotropic(2));
        assert_eq!(recognize_intersection(&[(1, s.clone())]).unwrap(), s);
        let s1 = SpaceDescr::new(Scale::W, AffineExpr::new(r(1, 1), r(-1, 2)), AffineExpr::var(), Anisotropy::isotropic(1));
        let s2 = SpaceDescr::new(Scale::W, one_minus_x(), AffineExpr::var(), Anisotropy::isotropic(2));
        assert!(matches!(recognize_intersection(&[(1, s1), (2, s2)]), Err(Error::NotAnIntersectionForm(_))));
    }

    #[test]
    fn display_grammar_form() {
        let sp = SpaceDescr::new(Scale::W, one_minus_x(), AffineExpr::var(), Anisotropy::parabolic(2)).with_domain("JxSigma");
        assert_eq!(alloc::format!("{}", sp), "W^{1-1/p,(2,1)}_p(JxSigma)");
        let sp = SpaceDescr::l(r(1, 4), Anisotropy::isotropic(1));
        assert_eq!(alloc::format!("{}", sp), "L_4(R^1)");
        assert_eq!(format_sexpr(&AffineExpr::new(r(5, 2), r(-1, 2))), "5/2-1/2p");
    }

    fn arb_aniso() -> impl Strategy<Value = Anisotropy> {
        proptest::collection::vec((1u32..4, 1u32..5), 1..4)
            .prop_map(|v| Anisotropy::new(v.iter().map(|p| p.0).collect(), v.iter().map(|p| p.1).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn normalize_preserves_index(a in arb_aniso(), sn in 0i64..40, sd in 1i64..6, xn in 1i64..20) {
            let sp = SpaceDescr::w(r(sn, sd), r(xn, 21), a);
            if let Ok(n) = normalize(&sp) {
                prop_assert_eq!(sobolev_index(&n).unwrap(), sobolev_index(&sp).unwrap());
            }
        }

        #[test]
        fn index_monotone(a in arb_aniso(), sn in -20i64..40, xn in 1i64..19, ds in 1i64..10, dx in 1i64..5) {
            let base = SpaceDescr::h(r(sn, 4), r(xn, 24), a);
            let i0 = sobolev_index(&base).unwrap().constant;
            let mut more_s = base.clone();
            more_s.s = AffineExpr::constant(r(sn + ds, 4));
            prop_assert!(sobolev_index(&more_s).unwrap().constant > i0);
            let mut more_x = base.clone();
            more_x.x = AffineExpr::constant(r(xn + dx, 24));
            prop_assert!(sobolev_index(&more_x).unwrap().constant < i0);
        }

        #[test]
        fn expand_then_recognize(a in arb_aniso(), sn in 1i64..40, sd in 1i64..6, xn in 1i64..20) {
            let g = a.weights().iter().fold(0u32, |acc, &w| acc.gcd(&w));
            prop_assume!(g == 1);
            let sp = SpaceDescr::h(r(sn, sd), r(xn, 21), a);
            let slices = expand_slices(&sp).unwrap();
            let back = recognize_intersection(&slices).unwrap();
            prop_assert_eq!(&back.s, &sp.s);
            prop_assert_eq!(&back.aniso, &sp.aniso);
            let again = expand_slices(&back).unwrap();
            for ((_, u), (_, v)) in slices.iter().zip(&again) {
                prop_assert_eq!(&u.s, &v.s);
                prop_assert_eq!(&u.x, &v.x);
                prop_assert_eq!(u.aniso.dims(), v.aniso.dims());
            }
        }
    }
}
