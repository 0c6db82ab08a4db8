//! m-linear pointwise multiplication: the main multiplication theorem, the
//! multiplier theorem, multiplication algebras, reduced multiplications and
//! one-step interpolation closure.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::anchors;
use crate::decision::{Decision, Status, Trace};
use crate::embed::{complex_anchor, interpolate_complex, p_str, Pt};
use crate::error::{Error, Result};
use crate::ratcore::Rational;
use crate::spaces::{normalization_anchor, normalize, MultSignature, Scale, SpaceDescr};

/// Factors `X_j`, a target `X`, and the pointwise multiplication of value spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultInstance {
    pub factors: Vec<SpaceDescr>,
    pub target: SpaceDescr,
    pub signature: MultSignature,
}

impl MultInstance {
    /// Instance with the signature read off the descriptors.
    pub fn new(factors: Vec<SpaceDescr>, target: SpaceDescr) -> Self {
        let signature = MultSignature::infer(&factors, &target);
        MultInstance { factors, target, signature }
    }

    pub fn with_signature(factors: Vec<SpaceDescr>, target: SpaceDescr, signature: MultSignature) -> Result<Self> {
        let inst = MultInstance { factors, target, signature };
        inst.check_signature()?;
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.factors.len()
    }

    /// Substitutes `x = x0` in every descriptor.
    pub fn at(&self, x0: &Rational) -> Self {
        MultInstance {
            factors: self.factors.iter().map(|f| f.at(x0)).collect(),
            target: self.target.at(x0),
            signature: self.signature.clone(),
        }
    }

    /// Reorders factors (and signature slots) by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        MultInstance {
            factors: perm.iter().map(|&i| self.factors[i].clone()).collect(),
            target: self.target.clone(),
            signature: self.signature.permuted(perm),
        }
    }

    fn check_signature(&self) -> Result<()> {
        let sig = &self.signature;
        let matches = sig.factors.len() == self.factors.len()
            && sig.factors.iter().zip(&self.factors).all(|(t, f)| *t == f.target)
            && sig.result == self.target.target;
        if matches {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("signature {} does not match the factor value spaces", sig)))
        }
    }
}

struct Prepared {
    f: Vec<Pt>,
    t: Pt,
    omega_dot: u64,
    trace: Trace,
    ok: bool,
}

fn prepare(inst: &MultInstance, anchor: &'static str) -> Result<Prepared> {
    if inst.factors.is_empty() {
        return Err(Error::InvalidArgument("a multiplication needs at least one factor".into()));
    }
    inst.check_signature()?;
    for f in &inst.factors {
        if !f.same_base(&inst.target) {
            return Err(Error::IncompatibleSpaces(format!("{} and {} differ in anisotropy or domain", f, inst.target)));
        }
    }
    let mut trace = Trace::new();
    let mut normalized = Vec::new();
    let mut identified: Vec<&SpaceDescr> = Vec::new();
    for sp in inst.factors.iter().chain(core::iter::once(&inst.target)) {
        let n = normalize(sp)?;
        if let Some(a) = normalization_anchor(sp, &n).filter(|_| !identified.contains(&sp)) {
            trace.check("identification", a, true, format!("{} = {}", sp, n));
            identified.push(sp);
        }
        normalized.push(n);
    }
    let uniform = inst.target.aniso.is_uniform();
    for sp in &normalized {
        if !sp.target.umd {
            return Err(Error::HypothesisViolation(format!("value space `{}` is not declared UMD", sp.target.name)));
        }
        if !uniform && !sp.target.prop_alpha {
            return Err(Error::HypothesisViolation(format!(
                "value space `{}` lacks property (alpha) required for non-uniform weights",
                sp.target.name
            )));
        }
    }
    if !inst.signature.is_admissible() {
        return Err(Error::HypothesisViolation(format!("multiplication {} is not registered", inst.signature)));
    }
    trace.check(
        "Banach-space hypotheses",
        anchor,
        true,
        format!("UMD{}; multiplication {}", if uniform { "" } else { ", property (alpha)" }, inst.signature),
    );
    let mut ok = true;
    let scales_ok = normalized.iter().all(|sp| matches!(sp.scale, Scale::B | Scale::H | Scale::L));
    ok &= trace.check(
        "X_j, X in {B, H}",
        anchor,
        scales_ok,
        format!("scales {}", scale_list(&normalized)),
    );
    if !scales_ok {
        return Ok(Prepared { f: Vec::new(), t: Pt::of(&normalized[0])?, omega_dot: 1, trace, ok });
    }
    let mut pts = Vec::new();
    for sp in &normalized {
        pts.push(Pt::of(sp)?.as_h());
    }
    let t = pts.pop().expect("target present");
    let all = || pts.iter().chain(core::iter::once(&t));
    ok &= trace.check(
        "1 < p_j, p < inf",
        anchor,
        all().all(|p| p.x.is_positive() && p.x < Rational::one()),
        format!("p_j = {}, p = {}", join(pts.iter().map(|p| p_str(&p.x))), p_str(&t.x)),
    );
    ok &= trace.check(
        "0 <= s_j, s",
        anchor,
        all().all(|p| !p.s.is_negative()),
        format!("s_j = {}, s = {}", join(pts.iter().map(|p| p.s.clone())), t.s),
    );
    ok &= trace.check(
        "q = p on the Besov scale",
        anchor,
        all().all(|p| p.scale != Scale::B || p.y == p.x),
        "independent micro-scale parameters are outside the theorem".into(),
    );
    Ok(Prepared { f: pts, t, omega_dot: inst.target.aniso.omega_dot(), trace, ok })
}

fn scale_list(v: &[SpaceDescr]) -> String {
    join(v.iter().map(|s| s.scale))
}

fn join<T: core::fmt::Display>(it: impl Iterator<Item = T>) -> String {
    let parts: Vec<String> = it.map(|v| format!("{}", v)).collect();
    format!("({})", parts.join(", "))
}

/// Subset form of (iii): `(holds for every M, strict for every M)`.
pub fn condition_iii_subsets(inds: &[Rational], ind: &Rational) -> (bool, bool) {
    let m = inds.len();
    let mut holds = true;
    let mut strict = true;
    for mask in 1u32..(1u32 << m) {
        let sum: Rational = (0..m).filter(|j| mask & (1 << j) != 0).map(|j| &inds[j]).sum();
        holds &= *ind <= sum;
        strict &= *ind < sum;
    }
    (holds, strict)
}

/// Two-branch form of (iii): `ind ≤ min ind_j` if all `ind_j ≥ 0`, else `ind ≤ Σ_{ind_j<0} ind_j`.
pub fn condition_iii_two_branch(inds: &[Rational], ind: &Rational) -> bool {
    if inds.iter().all(|i| !i.is_negative()) {
        inds.iter().all(|i| ind <= i)
    } else {
        let neg: Rational = inds.iter().filter(|i| i.is_negative()).sum();
        *ind <= neg
    }
}

fn tightest_subset(inds: &[Rational], ind: &Rational) -> (Vec<usize>, Rational) {
    let m = inds.len();
    let mut best: Option<(Vec<usize>, Rational)> = None;
    for mask in 1u32..(1u32 << m) {
        let members: Vec<usize> = (0..m).filter(|j| mask & (1 << j) != 0).collect();
        let sum: Rational = members.iter().map(|&j| &inds[j]).sum();
        let slack = sum - ind;
        if best.as_ref().is_none_or(|(_, s)| slack < *s) {
            best = Some((members, slack));
        }
    }
    best.expect("m >= 1")
}

/// Decides continuity of `X_1 × … × X_m → X` by the multiplication theorem.
pub fn decide_multiplication(inst: &MultInstance) -> Result<Decision> {
    let Prepared { f, t, omega_dot, mut trace, ok } = prepare(inst, anchors::MULT)?;
    if f.is_empty() && !ok {
        return Ok(trace.finish());
    }
    let min_s = f.iter().map(|p| &p.s).min().expect("m >= 1").clone();
    let sum_x: Rational = f.iter().map(|p| &p.x).sum();
    let inds: Vec<Rational> = f.iter().map(|p| p.ind.clone()).collect();

    trace.check("(i) s <= min s_j", anchors::MULT_I, t.s <= min_s, format!("s = {}, min s_j = {}", t.s, min_s));
    let strict_i = t.s < min_s;
    trace.check(
        "(ii) 1/p <= sum 1/p_j",
        anchors::MULT_II,
        t.x <= sum_x,
        format!("1/p = {}, sum 1/p_j = {}", t.x, sum_x),
    );
    let strict_ii = t.x < sum_x;
    let eq_ii = t.x == sum_x;
    let (holds_iii, strict_iii) = condition_iii_subsets(&inds, &t.ind);
    let (tight, slack) = tightest_subset(&inds, &t.ind);
    let tight_str: Vec<String> = tight.iter().map(|j| format!("{}", j + 1)).collect();
    trace.check(
        "(iii) ind <= sum_{j in M} ind_j for all M",
        anchors::MULT_III,
        holds_iii,
        format!(
            "ind = {}, ind_j = {}, tightest M = {{{}}} with slack {}",
            t.ind,
            join(inds.iter()),
            tight_str.join(","),
            slack
        ),
    );
    if f.iter().chain(core::iter::once(&t)).all(|p| p.s.is_zero() && p.scale == Scale::H) {
        trace.check(
            "Holder case: sum 1/p_j = 1/p",
            anchors::MULT_REM_E,
            eq_ii && holds_iii,
            format!("1/p = {}, sum 1/p_j = {}", t.x, sum_x),
        );
    }

    let differing: Vec<usize> = (0..f.len()).filter(|&j| f[j].scale != t.scale).collect();
    if differing.is_empty() {
        trace.skip("(a) s_j > s where X_j != X", anchors::MULT_A, "all scales agree".into());
    } else {
        let ok = differing.iter().all(|&j| f[j].s > t.s);
        trace.check(
            "(a) s_j > s where X_j != X",
            anchors::MULT_A,
            ok,
            format!("differing j = {}, s = {}", join(differing.iter().map(|j| j + 1)), t.s),
        );
    }

    if t.scale == Scale::B {
        let same_s_ok = f.iter().filter(|p| p.s == t.s).all(|p| p.x == t.x);
        trace.check(
            "(b) s > 0 and p_j = p where s_j = s",
            anchors::MULT_B,
            t.s.is_positive() && same_s_ok,
            format!("s = {}, p = {}", t.s, p_str(&t.x)),
        );
        let max_p_ok = f.iter().all(|p| p.x >= t.x);
        trace.check(
            "(c) (iii) strict or max p_j <= p",
            anchors::MULT_C,
            strict_iii || max_p_ok,
            format!("(iii) strict: {}, max p_j <= p: {}", strict_iii, max_p_ok),
        );
    } else {
        trace.skip("(b) s > 0 and p_j = p where s_j = s", anchors::MULT_B, "X != B".into());
        trace.skip("(c) (iii) strict or max p_j <= p", anchors::MULT_C, "X != B".into());
    }

    let mut d_failed = false;
    if t.scale == Scale::H {
        let in_lattice = t.s.is_nonneg_multiple_of(omega_dot);
        let ok = in_lattice || strict_i || eq_ii;
        d_failed = !ok;
        trace.check(
            "(d) s in w*N_0 or (i) strict or equality in (ii)",
            anchors::MULT_D,
            ok,
            format!("s = {}, w* = {}, (i) strict: {}, (ii) equality: {}", t.s, omega_dot, strict_i, eq_ii),
        );
    } else {
        trace.skip("(d) s in w*N_0 or (i) strict or equality in (ii)", anchors::MULT_D, "X != H".into());
    }

    if differing.is_empty() {
        trace.skip("(e) (ii) or (iii) strict where some X_j != X", anchors::MULT_E, "all scales agree".into());
    } else {
        trace.check(
            "(e) (ii) or (iii) strict where some X_j != X",
            anchors::MULT_E,
            strict_ii || strict_iii,
            format!("(ii) strict: {}, (iii) strict: {}", strict_ii, strict_iii),
        );
    }

    if inds.iter().any(|i| i.is_zero()) {
        trace.check(
            "(f) (iii) strict where some ind_j = 0",
            anchors::MULT_F,
            strict_iii,
            format!("(iii) strict: {}", strict_iii),
        );
    } else {
        trace.skip("(f) (iii) strict where some ind_j = 0", anchors::MULT_F, "no ind_j = 0".into());
    }

    if d_failed {
        let failures = trace.checks.iter().filter(|c| c.status == Status::Fail).count();
        if failures == 1 {
            trace.skip("(d)-only failure", anchors::MULT_REM_H, "only constraint (d) fails; conjectured removable".into());
        }
    }
    Ok(trace.finish())
}

/// Decides `X_1 × … × X_m → X` by the multiplier theorem with `X_ℓ = X` (`ell` is 1-based).
pub fn decide_multiplier(inst: &MultInstance, ell: usize) -> Result<Decision> {
    if ell == 0 || ell > inst.m() {
        return Err(Error::InvalidArgument(format!("factor index {} out of range 1..={}", ell, inst.m())));
    }
    let Prepared { f, t, omega_dot, mut trace, ok } = prepare(inst, anchors::MULTIPLIER)?;
    if f.is_empty() && !ok {
        return Ok(trace.finish());
    }
    let l = &f[ell - 1];
    if l.scale != t.scale || l.s != t.s || l.x != t.x {
        return Err(Error::InvalidArgument(format!("factor {} must equal the target in scale, s and p", ell)));
    }
    let max_s_ok = f.iter().all(|p| t.s <= p.s);
    trace.check(
        "0 <= s <= s_j",
        anchors::MULTIPLIER,
        !t.s.is_negative() && max_s_ok,
        format!("s = {}, s_j = {}", t.s, join(f.iter().map(|p| p.s.clone()))),
    );
    for (j, p) in f.iter().enumerate() {
        if j + 1 == ell {
            continue;
        }
        trace.check(&format!("ind_{} > 0", j + 1), anchors::MULTIPLIER, p.ind.is_positive(), format!("ind_{} = {}", j + 1, p.ind));
        trace.check(
            &format!("ind_{} >= ind", j + 1),
            anchors::MULTIPLIER,
            p.ind >= t.ind,
            format!("ind_{} = {}, ind = {}", j + 1, p.ind, t.ind),
        );
    }
    let differing: Vec<usize> = (0..f.len()).filter(|&j| f[j].scale != t.scale).collect();
    if differing.is_empty() {
        trace.skip("(a) s_j > s where X_j != X", anchors::MULTIPLIER_A, "all scales agree".into());
    } else {
        trace.check(
            "(a) s_j > s where X_j != X",
            anchors::MULTIPLIER_A,
            differing.iter().all(|&j| f[j].s > t.s),
            format!("differing j = {}, s = {}", join(differing.iter().map(|j| j + 1)), t.s),
        );
    }
    if t.scale == Scale::B {
        trace.check(
            "(b) s > 0 and p_j <= p",
            anchors::MULTIPLIER_B,
            t.s.is_positive() && f.iter().all(|p| p.x >= t.x),
            format!("s = {}, p_j = {}, p = {}", t.s, join(f.iter().map(|p| p_str(&p.x))), p_str(&t.x)),
        );
    } else {
        trace.skip("(b) s > 0 and p_j <= p", anchors::MULTIPLIER_B, "X != B".into());
    }
    if t.scale == Scale::H {
        trace.check(
            "(c) s in w*N_0",
            anchors::MULTIPLIER_C,
            t.s.is_nonneg_multiple_of(omega_dot),
            format!("s = {}, w* = {}", t.s, omega_dot),
        );
    } else {
        trace.skip("(c) s in w*N_0", anchors::MULTIPLIER_C, "X != H".into());
    }
    Ok(trace.finish())
}

/// Decides whether `space` is a multiplication algebra.
pub fn decide_algebra(space: &SpaceDescr) -> Result<Decision> {
    if !space.target.banach_algebra {
        return Err(Error::HypothesisViolation(format!("value space `{}` is not a Banach algebra", space.target.name)));
    }
    let inst = MultInstance::new(alloc::vec![space.clone(), space.clone()], space.clone());
    let inner = decide_multiplier(&inst, 1)?;
    let mut trace = Trace::new();
    trace.check("Banach algebra value space", anchors::ALGEBRA, true, format!("E = {}", space.target.name));
    trace.extend(inner.trace);
    Ok(trace.finish())
}

/// Decides the reduced multiplication obtained by filling the slots `omit` (1-based) with the unit.
pub fn reduced_multiplication(inst: &MultInstance, omit: &[usize]) -> Result<Decision> {
    let m = inst.m();
    let mut sorted: Vec<usize> = omit.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.len() >= m || sorted.len() != omit.len() || sorted.iter().any(|&j| j == 0 || j > m) {
        return Err(Error::InvalidArgument(format!("omitted slots must form a nonempty proper subset of 1..={}", m)));
    }
    for &j in &sorted {
        let tgt = &inst.factors[j - 1].target;
        if !tgt.unital {
            return Err(Error::HypothesisViolation(format!("omitted factor {} has non-unital value space `{}`", j, tgt.name)));
        }
    }
    let full = decide_multiplication(inst)?;
    let mut trace = Trace::new();
    trace.check(
        "omitted value spaces unital",
        anchors::MULT_REM_L,
        true,
        format!("omitted slots {}", join(sorted.iter())),
    );
    let xs: Result<Vec<Rational>> = inst.factors.iter().map(|f| f.x_val()).collect();
    let xs = xs?;
    let x = inst.target.x_val()?;
    trace.check(
        "max p_j <= p",
        anchors::MULT_REM_L,
        xs.iter().all(|xj| *xj >= x),
        format!("p_j = {}, p = {}", join(xs.iter().map(p_str)), p_str(&x)),
    );
    trace.extend(full.trace);
    Ok(trace.finish())
}

/// A parent instance of [`interpolation_closure`], decided or asserted by the caller.
#[derive(Clone, Debug)]
pub struct ClosureParent {
    pub inst: MultInstance,
    pub asserted: bool,
}

fn parent_status(trace: &mut Trace, name: &str, p: &ClosureParent) -> Result<()> {
    if p.asserted {
        trace.check(&format!("parent {} COVERED", name), anchors::MULT_REM_K, true, "asserted by caller".into());
        return Ok(());
    }
    let d = decide_multiplication(&p.inst)?;
    if !d.is_covered() {
        let why = d.first_failure().map(|c| c.label.clone()).unwrap_or_default();
        return Err(Error::ClosureFromUncovered(format!("parent {} is NOT_COVERED ({})", name, why)));
    }
    trace.check(&format!("parent {} COVERED", name), anchors::MULT_REM_K, true, "decided".into());
    Ok(())
}

/// Complex interpolation of two covered multiplications.
pub fn interpolation_closure(a: &ClosureParent, b: &ClosureParent, theta: &Rational) -> Result<(MultInstance, Decision)> {
    let mut trace = Trace::new();
    parent_status(&mut trace, "A", a)?;
    parent_status(&mut trace, "B", b)?;
    if theta.is_zero() {
        return Ok((a.inst.clone(), trace.finish()));
    }
    if *theta == Rational::one() {
        return Ok((b.inst.clone(), trace.finish()));
    }
    if a.inst.m() != b.inst.m() || a.inst.signature != b.inst.signature {
        return Err(Error::NoInterpolationRule("parents differ in arity or multiplication".into()));
    }
    let mut factors = Vec::new();
    for (j, (fa, fb)) in a.inst.factors.iter().zip(&b.inst.factors).enumerate() {
        let out = interpolate_complex(fa, fb, theta)?;
        trace.check(&format!("factor {}", j + 1), complex_anchor(&out), true, format!("[{}, {}]_{} = {}", fa, fb, theta, out));
        factors.push(out);
    }
    let target = interpolate_complex(&a.inst.target, &b.inst.target, theta)?;
    trace.check(
        "target",
        complex_anchor(&target),
        true,
        format!("[{}, {}]_{} = {}", a.inst.target, b.inst.target, theta, target),
    );
    trace.check("multilinear complex interpolation", anchors::MULT_REM_K, true, format!("theta = {}", theta));
    let inst = MultInstance { factors, target, signature: a.inst.signature.clone() };
    Ok((inst, trace.finish()))
}
