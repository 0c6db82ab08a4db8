//! Gate for analytic superposition operators `u ↦ φ(u)` on supercritical spaces.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::anchors;
use crate::decision::{Decision, Trace};
use crate::embed::{p_str, Pt};
use crate::error::{Error, Result};
use crate::ratcore::Rational;
use crate::spaces::{normalization_anchor, normalize, MultSignature, Scale, SpaceDescr};

/// Metadata of an analytic `φ: B_r(0) ⊂ E_1 × … × E_m → E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticSpec {
    pub arity: usize,
    pub radius: Rational,
    pub vanishes_at_zero: bool,
    pub first_order_coeff_bound: Option<Rational>,
}

impl AnalyticSpec {
    /// `φ(0) = 0` with convergence radius `r`.
    pub fn vanishing(arity: usize, radius: Rational) -> Self {
        AnalyticSpec { arity, radius, vanishes_at_zero: true, first_order_coeff_bound: None }
    }
}

/// Symbolic record of the constants in the analyticity estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsLedger {
    pub rho_rule: String,
    pub l_dependence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NemytskijOutcome {
    pub decision: Decision,
    pub ledger: Option<ConstantsLedger>,
}

fn hypotheses(args: &[SpaceDescr], target: &SpaceDescr, phi: &AnalyticSpec) -> Result<()> {
    if args.is_empty() || phi.arity != args.len() {
        return Err(Error::InvalidArgument(format!("phi has arity {} but {} arguments were given", phi.arity, args.len())));
    }
    if !phi.radius.is_positive() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {}", phi.radius)));
    }
    for a in args {
        if !a.same_base(target) {
            return Err(Error::IncompatibleSpaces(format!("{} and {} differ in anisotropy or domain", a, target)));
        }
    }
    for sp in args.iter().chain(core::iter::once(target)) {
        let t = &sp.target;
        if !(t.banach_algebra && t.unital) {
            return Err(Error::HypothesisViolation(format!("value space `{}` is not a unital Banach algebra", t.name)));
        }
        if !t.umd || (!target.aniso.is_uniform() && !t.prop_alpha) {
            return Err(Error::HypothesisViolation(format!("value space `{}` lacks UMD or property (alpha)", t.name)));
        }
    }
    let sig = MultSignature::infer(args, target);
    if !sig.is_admissible() {
        return Err(Error::HypothesisViolation(format!("multiplication {} is not registered", sig)));
    }
    Ok(())
}

/// Decides analyticity of the Nemytskij operator `Φ(u) = φ(u)` from `Π X_j` into `X`.
pub fn decide_nemytskij(args: &[SpaceDescr], target: &SpaceDescr, phi: &AnalyticSpec) -> Result<NemytskijOutcome> {
    hypotheses(args, target, phi)?;
    let a0 = anchors::NEMYTSKIJ;
    let mut trace = Trace::new();
    let mut pts = Vec::new();
    let mut identified: Vec<&SpaceDescr> = Vec::new();
    for sp in args.iter().chain(core::iter::once(target)) {
        let n = normalize(sp)?;
        if let Some(a) = normalization_anchor(sp, &n).filter(|_| !identified.contains(&sp)) {
            trace.check("identification", a, true, format!("{} = {}", sp, n));
            identified.push(sp);
        }
        pts.push(n);
    }
    trace.check("unital Banach algebras", a0, true, format!("E = {}", target.target.name));
    let scales_ok = pts.iter().all(|p| matches!(p.scale, Scale::B | Scale::H | Scale::L));
    if !trace.check("X_j, X in {B, H}", a0, scales_ok, "scales of arguments and target".into()) {
        return Ok(NemytskijOutcome { decision: trace.finish(), ledger: None });
    }
    let mut f: Vec<Pt> = Vec::new();
    for sp in &pts {
        f.push(Pt::of(sp)?.as_h());
    }
    let t = f.pop().expect("target present");
    let show = |v: &dyn Fn(&Pt) -> String| -> String {
        let parts: Vec<String> = f.iter().map(v).collect();
        format!("({})", parts.join(", "))
    };
    trace.check(
        "1 < p_j, p < inf",
        a0,
        f.iter().chain(core::iter::once(&t)).all(|p| p.x.is_positive() && p.x < Rational::one()),
        format!("p_j = {}, p = {}", show(&|p| p_str(&p.x)), p_str(&t.x)),
    );
    trace.check(
        "p_j <= p",
        a0,
        f.iter().all(|p| p.x >= t.x),
        format!("p_j = {}, p = {}", show(&|p| p_str(&p.x)), p_str(&t.x)),
    );
    trace.check("0 < s", a0, t.s.is_positive(), format!("s = {}", t.s));
    trace.check("s <= s_j", a0, f.iter().all(|p| t.s <= p.s), format!("s = {}, s_j = {}", t.s, show(&|p| format!("{}", p.s))));
    trace.check("0 < ind", a0, t.ind.is_positive(), format!("ind = {}", t.ind));
    trace.check(
        "ind <= ind_j",
        a0,
        f.iter().all(|p| t.ind <= p.ind),
        format!("ind = {}, ind_j = {}", t.ind, show(&|p| format!("{}", p.ind))),
    );
    let differing: Vec<usize> = (0..f.len()).filter(|&j| f[j].scale != t.scale).collect();
    if differing.is_empty() {
        trace.skip("(a) s_j > s where X_j != X", anchors::NEMYTSKIJ_A, "all scales agree".into());
    } else {
        trace.check(
            "(a) s_j > s where X_j != X",
            anchors::NEMYTSKIJ_A,
            differing.iter().all(|&j| f[j].s > t.s),
            format!("s = {}", t.s),
        );
    }
    if t.scale == Scale::H {
        let od = target.aniso.omega_dot();
        let min_s = f.iter().map(|p| &p.s).min().expect("m >= 1");
        trace.check(
            "(b) s in w*N or s < min s_j",
            anchors::NEMYTSKIJ_B,
            t.s.is_pos_multiple_of(od) || t.s < *min_s,
            format!("s = {}, w* = {}, min s_j = {}", t.s, od, min_s),
        );
    } else {
        trace.skip("(b) s in w*N or s < min s_j", anchors::NEMYTSKIJ_B, "X != H".into());
    }
    trace.check("phi(0) = 0", a0, phi.vanishes_at_zero, format!("radius r = {}", phi.radius));
    let decision = trace.finish();
    let ledger = decision.is_covered().then(|| ledger(phi));
    Ok(NemytskijOutcome { decision, ledger })
}

fn ledger(phi: &AnalyticSpec) -> ConstantsLedger {
    let mut l_dependence = alloc::vec![String::from("M"), String::from("a_α, |α| = 1")];
    if let Some(b) = &phi.first_order_coeff_bound {
        l_dependence.push(format!("|a_α| ≤ {} for |α| = 1", b));
    }
    ConstantsLedger {
        rho_rule: format!("ρ < min{{C_j^{{-1}}, M_j^{{-1}}}}·r, j = 1..{}, r = {}", phi.arity, phi.radius),
        l_dependence,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::AffineExpr;
    use crate::spaces::{Anisotropy, TargetSpace};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn w(c: Rational, n: u32, x: &Rational) -> SpaceDescr {
        SpaceDescr::new(Scale::W, AffineExpr::new(c, r(-1, 1)), AffineExpr::var(), Anisotropy::parabolic(n - 1)).at(x)
    }

    #[test]
    fn stefan_curvature_threshold() {
        // covered iff p > 2(n+2)/5 = 2 for n = 3
        for (p, covered) in [(3, true), (2, false)] {
            let x = r(1, p);
            let u = w(r(5, 2), 3, &x);
            let out = decide_nemytskij(&[u.clone(), u.clone()], &u, &AnalyticSpec::vanishing(2, r(1, 1))).unwrap();
            assert_eq!(out.decision.is_covered(), covered);
            assert_eq!(out.ledger.is_some(), covered);
        }
    }

    #[test]
    fn nvs_sigma_threshold() {
        let u = w(r(2, 1), 3, &r(1, 3));
        let out = decide_nemytskij(core::slice::from_ref(&u), &u, &AnalyticSpec::vanishing(1, r(1, 2))).unwrap();
        assert!(out.decision.is_covered());
        let ledger = out.ledger.unwrap();
        assert!(ledger.rho_rule.starts_with("ρ < min{C_j^{-1}, M_j^{-1}}·r"));
        assert!(ledger.l_dependence.contains(&String::from("M")));
    }

    #[test]
    fn zero_index_is_not_covered() {
        let u = SpaceDescr::h(r(1, 1), r(1, 2), Anisotropy::isotropic(2));
        let out = decide_nemytskij(core::slice::from_ref(&u), &u, &AnalyticSpec::vanishing(1, r(1, 1))).unwrap();
        assert_eq!(out.decision.first_failure().unwrap().label, "0 < ind");
    }

    #[test]
    fn phi_must_vanish() {
        let u = SpaceDescr::h(r(2, 1), r(1, 4), Anisotropy::isotropic(2));
        let mut phi = AnalyticSpec::vanishing(1, r(1, 1));
        phi.vanishes_at_zero = false;
        let out = decide_nemytskij(core::slice::from_ref(&u), &u, &phi).unwrap();
        assert_eq!(out.decision.first_failure().unwrap().label, "phi(0) = 0");
    }

    #[test]
    fn non_unital_target() {
        let u = SpaceDescr::h(r(2, 1), r(1, 4), Anisotropy::isotropic(2)).with_target(TargetSpace::opaque("E"));
        let res = decide_nemytskij(core::slice::from_ref(&u), &u, &AnalyticSpec::vanishing(1, r(1, 1)));
        assert!(matches!(res, Err(Error::HypothesisViolation(_))));
    }
}
