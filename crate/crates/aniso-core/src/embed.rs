//! Embedding rules between the B, H and L scales, the embedding into C0,
//! slice embeddings, and the complex and real interpolation identities.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::anchors;
use crate::decision::{Check, Decision, Trace};
use crate::error::{Error, Result};
use crate::ratcore::{AffineExpr, Rational};
use crate::spaces::{normalization_anchor, normalize, sobolev_index, Anisotropy, Scale, SpaceDescr, TargetSpace};

pub use crate::decision::{Status, Verdict};

/// Renders `1/p` as `p`.
pub fn p_str(x: &Rational) -> String {
    match x.recip() {
        None => "inf".into(),
        Some(p) => p.to_string(),
    }
}

/// Concrete parameters of a normalized space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Pt {
    pub scale: Scale,
    pub s: Rational,
    pub x: Rational,
    pub y: Rational,
    pub ind: Rational,
}

impl Pt {
    pub fn of(sp: &SpaceDescr) -> Result<Pt> {
        if sp.scale == Scale::C0 {
            return Ok(Pt { scale: Scale::C0, s: Rational::zero(), x: Rational::zero(), y: Rational::zero(), ind: Rational::zero() });
        }
        let ind = sobolev_index(sp)?;
        Ok(Pt {
            scale: sp.scale,
            s: sp.s_val()?,
            x: sp.x_val()?,
            y: sp.y_val()?,
            ind: ind.as_constant().cloned().ok_or_else(|| Error::Unsupported("symbolic index".into()))?,
        })
    }

    /// `L_p` read as `H^0_p`.
    pub fn as_h(&self) -> Pt {
        let mut p = self.clone();
        if p.scale == Scale::L {
            p.scale = Scale::H;
        }
        p
    }

    fn p_open(&self) -> bool {
        self.x > Rational::zero() && self.x < Rational::one()
    }
}

type Rule = fn(&Pt, &Pt) -> Trace;

fn rule_bb(a: &Pt, b: &Pt) -> Trace {
    let a0 = anchors::EMB_BB;
    let mut t = Trace::new();
    t.check("s_0 <= s_1", a0, b.s <= a.s, format!("s_0 = {}, s_1 = {}", b.s, a.s));
    t.check("p_1 <= p_0", a0, a.x >= b.x, format!("p_1 = {}, p_0 = {}", p_str(&a.x), p_str(&b.x)));
    t.check("ind_0 <= ind_1", a0, b.ind <= a.ind, format!("ind_0 = {}, ind_1 = {}", b.ind, a.ind));
    t.check(
        "strict index or q_1 <= q_0",
        a0,
        b.ind < a.ind || a.y >= b.y,
        format!("q_1 = {}, q_0 = {}", p_str(&a.y), p_str(&b.y)),
    );
    t
}

fn p_range(t: &mut Trace, who: &str, p: &Pt, anchor: &'static str) {
    t.check(&format!("1 < {} < inf", who), anchor, p.p_open(), format!("{} = {}", who, p_str(&p.x)));
}

fn rule_hh(a: &Pt, b: &Pt) -> Trace {
    let a0 = anchors::EMB_HH;
    let mut t = Trace::new();
    p_range(&mut t, "p_1", a, a0);
    p_range(&mut t, "p_0", b, a0);
    t.check("s_0 <= s_1", a0, b.s <= a.s, format!("s_0 = {}, s_1 = {}", b.s, a.s));
    t.check("p_1 <= p_0", a0, a.x >= b.x, format!("p_1 = {}, p_0 = {}", p_str(&a.x), p_str(&b.x)));
    t.check("ind_0 <= ind_1", a0, b.ind <= a.ind, format!("ind_0 = {}, ind_1 = {}", b.ind, a.ind));
    t
}

fn rule_bh(a: &Pt, b: &Pt) -> Trace {
    let a0 = anchors::EMB_BH;
    let mut t = Trace::new();
    p_range(&mut t, "p_0", b, a0);
    t.check("s_0 < s_1", a0, b.s < a.s, format!("s_0 = {}, s_1 = {}", b.s, a.s));
    t.check("p_1 <= p_0", a0, a.x >= b.x, format!("p_1 = {}, p_0 = {}", p_str(&a.x), p_str(&b.x)));
    t.check("ind_0 <= ind_1", a0, b.ind <= a.ind, format!("ind_0 = {}, ind_1 = {}", b.ind, a.ind));
    t.check(
        "strict index or q <= p_0",
        a0,
        b.ind < a.ind || a.y >= b.x,
        format!("q = {}, p_0 = {}", p_str(&a.y), p_str(&b.x)),
    );
    t
}

fn rule_hb(a: &Pt, b: &Pt) -> Trace {
    let a0 = anchors::EMB_HB;
    let mut t = Trace::new();
    p_range(&mut t, "p_1", a, a0);
    t.check("s_0 < s_1", a0, b.s < a.s, format!("s_0 = {}, s_1 = {}", b.s, a.s));
    t.check("p_1 <= p_0", a0, a.x >= b.x, format!("p_1 = {}, p_0 = {}", p_str(&a.x), p_str(&b.x)));
    t.check("ind_0 <= ind_1", a0, b.ind <= a.ind, format!("ind_0 = {}, ind_1 = {}", b.ind, a.ind));
    t.check(
        "strict index or p_1 <= q",
        a0,
        b.ind < a.ind || a.x >= b.y,
        format!("p_1 = {}, q = {}", p_str(&a.x), p_str(&b.y)),
    );
    t
}

fn rule_hl(a: &Pt, b: &Pt) -> Trace {
    let a0 = anchors::EMB_HL;
    let mut t = Trace::new();
    p_range(&mut t, "p", a, a0);
    t.check("0 <= s", a0, !a.s.is_negative(), format!("s = {}", a.s));
    t.check("p <= r", a0, a.x >= b.x, format!("p = {}, r = {}", p_str(&a.x), p_str(&b.x)));
    t.check("omega-ind(L_r) <= ind", a0, b.ind <= a.ind, format!("omega-ind = {}, ind = {}", b.ind, a.ind));
    t.check(
        "strict index or r < inf",
        a0,
        b.ind < a.ind || !b.x.is_zero(),
        format!("r = {}", p_str(&b.x)),
    );
    t
}

fn rule_bl(a: &Pt, b: &Pt) -> Trace {
    let a0 = anchors::EMB_BL;
    let mut t = Trace::new();
    t.check("0 < s", a0, a.s.is_positive(), format!("s = {}", a.s));
    t.check("p < inf", a0, !a.x.is_zero(), format!("p = {}", p_str(&a.x)));
    t.check("p <= r", a0, a.x >= b.x, format!("p = {}, r = {}", p_str(&a.x), p_str(&b.x)));
    t.check("r != 1", a0, b.x != Rational::one(), format!("r = {}", p_str(&b.x)));
    t.check("omega-ind(L_r) <= ind", a0, b.ind <= a.ind, format!("omega-ind = {}, ind = {}", b.ind, a.ind));
    t.check(
        "strict index or (q <= p and r < inf)",
        a0,
        b.ind < a.ind || (a.y >= a.x && !b.x.is_zero()),
        format!("q = {}, p = {}, r = {}", p_str(&a.y), p_str(&a.x), p_str(&b.x)),
    );
    t
}

fn rule_c0(a: &Pt, _b: &Pt) -> Trace {
    let a0 = anchors::EMB_C0;
    let mut t = Trace::new();
    t.check("X in {B, H}", a0, matches!(a.scale, Scale::B | Scale::H), format!("X = {}", a.scale));
    t.check("0 < s", a0, a.s.is_positive(), format!("s = {}", a.s));
    p_range(&mut t, "p", a, a0);
    if a.scale == Scale::B {
        t.check("q = p", a0, a.y == a.x, format!("q = {}, p = {}", p_str(&a.y), p_str(&a.x)));
    }
    t.check("ind > 0", a0, a.ind.is_positive(), format!("ind = {}", a.ind));
    t
}

fn candidates(a: &Pt, b: &Pt) -> Vec<(Rule, Pt, Pt)> {
    use Scale::*;
    match (a.scale, b.scale) {
        (B, B) => alloc::vec![(rule_bb as Rule, a.clone(), b.clone())],
        (H, H) | (L, H) => alloc::vec![(rule_hh as Rule, a.as_h(), b.clone())],
        (B, H) => alloc::vec![(rule_bh as Rule, a.clone(), b.clone())],
        (H, B) | (L, B) => alloc::vec![(rule_hb as Rule, a.as_h(), b.clone())],
        (H, L) | (L, L) => alloc::vec![
            (rule_hl as Rule, a.as_h(), b.clone()),
            (rule_hh as Rule, a.as_h(), b.as_h()),
        ],
        (B, L) => alloc::vec![(rule_bl as Rule, a.clone(), b.clone()), (rule_bh as Rule, a.clone(), b.as_h())],
        (B, C0) | (H, C0) | (L, C0) => alloc::vec![(rule_c0 as Rule, a.clone(), b.clone())],
        _ => Vec::new(),
    }
}

/// First passing candidate rule, or the primary rule's failing trace.
fn direct(a: &Pt, b: &Pt) -> Option<(bool, Trace)> {
    let mut first: Option<Trace> = None;
    for (rule, pa, pb) in candidates(a, b) {
        let t = rule(&pa, &pb);
        if t.passed() {
            return Some((true, t));
        }
        if first.is_none() {
            first = Some(t);
        }
    }
    first.map(|t| (false, t))
}

fn detour(a: &Pt, b: &Pt, aniso: &Anisotropy) -> Option<(Pt, Trace, Trace)> {
    let ok = |p: &Pt| matches!(p.scale, Scale::B | Scale::H | Scale::L);
    if !ok(a) || !ok(b) {
        return None;
    }
    let od = Rational::integer(aniso.omega_dot() as i64);
    let on = Rational::integer(aniso.omega_dot_n() as i64);
    let s_mid = a.s.midpoint(&b.s);
    for ind in [&b.ind, &a.ind] {
        let x_mid = (&s_mid - &od * ind) / &on;
        if !(x_mid.is_positive() && x_mid < Rational::one()) {
            continue;
        }
        for scale in [Scale::H, Scale::B] {
            let z = Pt { scale, s: s_mid.clone(), x: x_mid.clone(), y: x_mid.clone(), ind: ind.clone() };
            if let (Some((true, t1)), Some((true, t2))) = (direct(a, &z), direct(&z, b)) {
                return Some((z, t1, t2));
            }
        }
    }
    None
}

fn describe_pt(p: &Pt) -> String {
    format!("{}^{{{}}}_{} (q = {}, ind = {})", p.scale, p.s, p_str(&p.x), p_str(&p.y), p.ind)
}

fn identification_check(t: &mut Trace, before: &SpaceDescr, after: &SpaceDescr) {
    if let Some(anchor) = normalization_anchor(before, after) {
        t.check(
            "identification",
            anchor,
            true,
            format!("{} = {}", before, after),
        );
    }
}

/// Decides `src ↪ dst` from the implemented rules.
pub fn embeds(src: &SpaceDescr, dst: &SpaceDescr) -> Result<Decision> {
    src.validate()?;
    dst.validate()?;
    if !src.same_base(dst) {
        return Err(Error::IncompatibleSpaces(format!("{} and {} differ in anisotropy or domain", src, dst)));
    }
    if src.target != dst.target {
        return Err(Error::IncompatibleSpaces(format!(
            "value spaces `{}` and `{}` differ",
            src.target.name, dst.target.name
        )));
    }
    let a = normalize(src)?;
    let b = normalize(dst)?;
    let mut t = Trace::new();
    identification_check(&mut t, src, &a);
    identification_check(&mut t, dst, &b);
    let pa = Pt::of(&a)?;
    let pb = Pt::of(&b)?;
    if a == b {
        t.check("identity", anchors::EMB_IDENTITY, true, format!("{} = {}", a, b));
        return Ok(t.finish());
    }
    match direct(&pa, &pb) {
        Some((true, rule)) => {
            t.extend(rule.checks);
        }
        Some((false, rule)) => match detour(&pa, &pb, &a.aniso) {
            Some((z, t1, t2)) => {
                let failed = rule.checks.iter().find(|c| c.status == Status::Fail).map(|c| c.label.clone()).unwrap_or_default();
                t.skip(
                    "direct rule",
                    rule.checks[0].anchor,
                    format!("not applicable ({} fails); using one intermediate space", failed),
                );
                t.check("intermediate space", anchors::EMB_HH, true, describe_pt(&z));
                t.extend(t1.checks);
                t.extend(t2.checks);
            }
            None => t.extend(rule.checks),
        },
        None => {
            t.check(
                "embedding rule available",
                anchors::SPACES_DEF,
                false,
                format!("no implemented rule for {} -> {}", a.scale, b.scale),
            );
        }
    }
    Ok(t.finish())
}

fn slice_label(domain: &str, nu: usize, k: usize) -> String {
    let parts: Vec<&str> = domain.split('x').collect();
    if parts.len() == nu {
        parts[k - 1].to_string()
    } else {
        format!("{}#{}", domain, k)
    }
}

/// `B^{s,ω}_{p,q}(R^n; E) ↪ B^{s/ω_k}_{p,q}(R^{n_k}; L_p(rest; E))`.
pub fn slice_embed(src: &SpaceDescr, k: usize) -> Result<SpaceDescr> {
    let nu = src.aniso.nu();
    if k == 0 || k > nu {
        return Err(Error::BadSlice { k, nu });
    }
    if src.scale != Scale::B {
        return Err(Error::InvalidArgument(format!("slice embedding needs a B space, got {}", src.scale)));
    }
    if let Some(s) = src.s.as_constant() {
        if !s.is_positive() {
            return Err(Error::InvalidArgument(format!("slice embedding needs s > 0, got {}", s)));
        }
    }
    if nu == 1 {
        return Ok(src.clone());
    }
    let w = Rational::integer(src.aniso.weights()[k - 1] as i64);
    Ok(SpaceDescr {
        scale: Scale::B,
        s: src.s.scale(&(Rational::one() / w)),
        x: src.x.clone(),
        y: src.y.clone(),
        aniso: Anisotropy::isotropic(src.aniso.dims()[k - 1]),
        target: TargetSpace::opaque(&format!("L_p(rest;{})", src.target.name)),
        domain: slice_label(&src.domain, nu, k),
    })
}

fn conv(a: &Rational, b: &Rational, theta: &Rational) -> Rational {
    (Rational::one() - theta) * a + theta * b
}

fn interp_prelude(a: &SpaceDescr, b: &SpaceDescr, theta: &Rational) -> Result<(SpaceDescr, SpaceDescr, Pt, Pt)> {
    if !(theta.is_positive() && *theta < Rational::one()) {
        return Err(Error::InvalidArgument(format!("theta = {} outside (0,1)", theta)));
    }
    if !a.same_base(b) || a.target != b.target {
        return Err(Error::IncompatibleSpaces(format!("{} and {} do not form a compatible couple", a, b)));
    }
    let na = normalize(a)?;
    let nb = normalize(b)?;
    let pa = Pt::of(&na)?;
    let pb = Pt::of(&nb)?;
    Ok((na, nb, pa, pb))
}

fn build(template: &SpaceDescr, scale: Scale, s: Rational, x: Rational, y: Option<Rational>) -> SpaceDescr {
    let y = match (scale, y) {
        (Scale::B, Some(y)) if y != x => Some(y),
        _ => None,
    };
    SpaceDescr {
        scale,
        s: AffineExpr::constant(s),
        x: AffineExpr::constant(x),
        y,
        aniso: template.aniso.clone(),
        target: template.target.clone(),
        domain: template.domain.clone(),
    }
}

fn no_rule(method: &str, a: &Pt, b: &Pt) -> Error {
    Error::NoInterpolationRule(format!("{} method: no listed identity for ({}, {})", method, describe_pt(a), describe_pt(b)))
}

/// Complex interpolation `[a, b]_θ`.
pub fn interpolate_complex(a: &SpaceDescr, b: &SpaceDescr, theta: &Rational) -> Result<SpaceDescr> {
    let (na, _, pa, pb) = interp_prelude(a, b, theta)?;
    let x = conv(&pa.x, &pb.x, theta);
    match (pa.scale, pb.scale) {
        (Scale::L, Scale::L) if !pa.x.is_zero() && !pb.x.is_zero() => Ok(build(&na, Scale::L, Rational::zero(), x, None)),
        (Scale::B, Scale::B) if !pa.x.is_zero() && !pb.x.is_zero() && !pa.y.is_zero() && !pb.y.is_zero() => {
            let s = conv(&pa.s, &pb.s, theta);
            let y = conv(&pa.y, &pb.y, theta);
            Ok(build(&na, Scale::B, s, x, Some(y)))
        }
        (Scale::H | Scale::L, Scale::H | Scale::L) => {
            let (ha, hb) = (pa.as_h(), pb.as_h());
            if !ha.p_open() || !hb.p_open() {
                return Err(no_rule("complex", &pa, &pb));
            }
            if ha.x == hb.x || ha.s == hb.s {
                let s = conv(&ha.s, &hb.s, theta);
                let scale = if s.is_zero() { Scale::L } else { Scale::H };
                Ok(build(&na, scale, s, x, None))
            } else {
                Err(no_rule("complex", &pa, &pb))
            }
        }
        _ => Err(no_rule("complex", &pa, &pb)),
    }
}

/// Fine parameter of the real method: a fixed `1/q`, or `q = p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealQ {
    Fixed(Rational),
    Coupled,
}

/// Real interpolation `(a, b)_{θ,q}`.
pub fn interpolate_real(a: &SpaceDescr, b: &SpaceDescr, theta: &Rational, q: &RealQ) -> Result<SpaceDescr> {
    let (na, _, pa, pb) = interp_prelude(a, b, theta)?;
    if let RealQ::Fixed(y) = q {
        if y.is_negative() || *y > Rational::one() {
            return Err(Error::InvalidArgument(format!("1/q = {} outside [0,1]", y)));
        }
    }
    let s = conv(&pa.s, &pb.s, theta);
    let x = conv(&pa.x, &pb.x, theta);
    match (pa.scale, pb.scale) {
        (Scale::L, Scale::L) => match q {
            RealQ::Coupled if !pa.x.is_zero() && !pb.x.is_zero() => Ok(build(&na, Scale::L, Rational::zero(), x, None)),
            _ => Err(no_rule("real", &pa, &pb)),
        },
        (Scale::H | Scale::L, Scale::H | Scale::L) => {
            let (ha, hb) = (pa.as_h(), pb.as_h());
            if !ha.p_open() || !hb.p_open() {
                return Err(no_rule("real", &pa, &pb));
            }
            if ha.x == hb.x && ha.s != hb.s {
                let y = match q {
                    RealQ::Fixed(y) => y.clone(),
                    RealQ::Coupled => ha.x.clone(),
                };
                Ok(build(&na, Scale::B, s, x, Some(y)))
            } else if ha.s == hb.s && ha.x != hb.x && *q == RealQ::Coupled {
                let scale = if s.is_zero() { Scale::L } else { Scale::H };
                Ok(build(&na, scale, s, x, None))
            } else {
                Err(no_rule("real", &pa, &pb))
            }
        }
        (Scale::B, Scale::B) => {
            if pa.x == pb.x && pa.s != pb.s {
                let y = match q {
                    RealQ::Fixed(y) => y.clone(),
                    RealQ::Coupled => pa.x.clone(),
                };
                return Ok(build(&na, Scale::B, s, x, Some(y)));
            }
            let finite = !pa.x.is_zero() && !pb.x.is_zero() && !pa.y.is_zero() && !pb.y.is_zero();
            if *q == RealQ::Coupled && finite && x == conv(&pa.y, &pb.y, theta) {
                return Ok(build(&na, Scale::B, s, x, None));
            }
            Err(no_rule("real", &pa, &pb))
        }
        _ => Err(no_rule("real", &pa, &pb)),
    }
}

/// Anchor for the identity used by [`interpolate_complex`] on this couple.
pub fn complex_anchor(a: &SpaceDescr) -> &'static str {
    match a.scale {
        Scale::B => anchors::INTERP_COMPLEX_B,
        Scale::L => anchors::INTERP_COMPLEX_L,
        _ => anchors::INTERP_COMPLEX_H,
    }
}

/// Anchor for the identity used by [`interpolate_real`] on this couple.
pub fn real_anchor(a: &SpaceDescr) -> &'static str {
    match a.scale {
        Scale::B => anchors::INTERP_REAL_B,
        Scale::L => anchors::INTERP_REAL_L,
        _ => anchors::INTERP_REAL_H,
    }
}

/// Trace entries of a decision, for reuse inside composite traces.
pub fn checks(d: Decision) -> Vec<Check> {
    d.trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::TargetSpace;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn trace_space_into_c0() {
        let a = Anisotropy::parabolic(2);
        let src = SpaceDescr::new(Scale::W, AffineExpr::new(r(2, 1), r(-1, 1)), AffineExpr::var(), a.clone()).at(&r(1, 4));
        let d = embeds(&src, &SpaceDescr::c0(a)).unwrap();
        assert!(d.is_covered());
        assert_eq!(d.find("ind > 0").unwrap().detail, "ind = 3/8");
    }

    #[test]
    fn identity_embedding() {
        let sp = SpaceDescr::h(r(3, 2), r(1, 3), Anisotropy::parabolic(2));
        let d = embeds(&sp, &sp).unwrap();
        assert!(d.is_covered());
        assert_eq!(d.trace[0].label, "identity");
    }

    #[test]
    fn besov_into_bessel() {
        let a = Anisotropy::new(alloc::vec![1, 1], alloc::vec![1, 1]).unwrap();
        let src = SpaceDescr::b(r(3, 1), r(1, 2), Some(r(1, 1)), a.clone());
        let dst = SpaceDescr::h(r(2, 1), r(1, 3), a);
        let d = embeds(&src, &dst).unwrap();
        assert!(d.is_covered());
        assert_eq!(d.trace[0].anchor, anchors::EMB_BH);
        let ind = d.find("ind_0 <= ind_1").unwrap();
        assert_eq!(ind.detail, "ind_0 = 4/3, ind_1 = 2");
    }

    #[test]
    fn equal_index_needs_side_condition() {
        let a = Anisotropy::isotropic(2);
        // both indices vanish
        let src = SpaceDescr::b(r(1, 1), r(1, 2), Some(r(1, 4)), a.clone());
        let dst = SpaceDescr::b(r(1, 2), r(1, 4), Some(r(1, 2)), a);
        let d = embeds(&src, &dst).unwrap();
        assert!(!d.is_covered());
        assert_eq!(d.first_failure().unwrap().label, "strict index or q_1 <= q_0");
        let d = embeds(&dst, &src).unwrap();
        assert!(!d.is_covered());
    }

    #[test]
    fn incompatible_spaces() {
        let a = SpaceDescr::h(r(1, 1), r(1, 2), Anisotropy::isotropic(2));
        let b = SpaceDescr::h(r(1, 1), r(1, 2), Anisotropy::isotropic(3));
        assert!(matches!(embeds(&a, &b), Err(Error::IncompatibleSpaces(_))));
        let c = a.clone().with_target(TargetSpace::opaque("E"));
        assert!(matches!(embeds(&a, &c), Err(Error::IncompatibleSpaces(_))));
    }

    #[test]
    fn bessel_into_lebesgue() {
        let a = Anisotropy::isotropic(3);
        let h = SpaceDescr::h(r(1, 1), r(1, 2), a.clone());
        // ind = 1 - 3/2 = -1/2, L_6 has omega-ind -1/2
        assert!(embeds(&h, &SpaceDescr::l(r(1, 6), a.clone())).unwrap().is_covered());
        assert!(!embeds(&h, &SpaceDescr::l(r(1, 7), a.clone())).unwrap().is_covered());
        assert!(!embeds(&h, &SpaceDescr::l(r(0, 1), a)).unwrap().is_covered());
    }

    #[test]
    fn besov_into_lebesgue_endpoint() {
        let a = Anisotropy::isotropic(1);
        // ind = 1 - 1/2 > 0 = omega-ind(L_inf)
        let b = SpaceDescr::b(r(1, 1), r(1, 2), Some(r(1, 4)), a.clone());
        assert!(embeds(&b, &SpaceDescr::l(r(0, 1), a.clone())).unwrap().is_covered());
        assert!(!embeds(&b, &SpaceDescr::l(r(1, 1), a)).unwrap().is_covered());
    }

    #[test]
    fn slice_embedding() {
        let a = Anisotropy::parabolic(3);
        let src = SpaceDescr::b(r(2, 1), r(1, 3), Some(r(1, 2)), a).with_domain("JxRdot");
        let s1 = slice_embed(&src, 1).unwrap();
        assert_eq!(s1.s, AffineExpr::constant(r(1, 1)));
        assert_eq!(s1.aniso, Anisotropy::isotropic(1));
        assert_eq!(s1.domain, "J");
        let s2 = slice_embed(&src, 2).unwrap();
        assert_eq!(s2.s, AffineExpr::constant(r(2, 1)));
        assert_eq!(s2.aniso.dims(), &[3]);
        assert!(matches!(slice_embed(&src, 3), Err(Error::BadSlice { k: 3, nu: 2 })));
        let iso = SpaceDescr::b(r(1, 2), r(1, 2), None, Anisotropy::isotropic(2));
        assert_eq!(slice_embed(&iso, 1).unwrap(), iso);
    }

    #[test]
    fn complex_identities() {
        let a = Anisotropy::parabolic(2);
        let l2 = SpaceDescr::l(r(1, 2), a.clone());
        let l6 = SpaceDescr::l(r(1, 6), a.clone());
        let out = interpolate_complex(&l2, &l6, &r(1, 2)).unwrap();
        assert_eq!(out, SpaceDescr::l(r(1, 3), a.clone()));
        let lp = SpaceDescr::l(r(1, 3), a.clone());
        let h = SpaceDescr::h(r(3, 1), r(1, 3), a.clone());
        let out = interpolate_complex(&lp, &h, &r(2, 3)).unwrap();
        assert_eq!(out, SpaceDescr::h(r(2, 1), r(1, 3), a.clone()));
        let b1 = SpaceDescr::b(r(1, 1), r(1, 2), None, a.clone());
        let b3 = SpaceDescr::b(r(3, 1), r(1, 2), None, a.clone());
        assert_eq!(interpolate_complex(&b1, &b3, &r(1, 2)).unwrap(), SpaceDescr::b(r(2, 1), r(1, 2), None, a.clone()));
        let h1 = SpaceDescr::h(r(1, 1), r(1, 2), a.clone());
        let h2 = SpaceDescr::h(r(2, 1), r(1, 3), a.clone());
        assert!(matches!(interpolate_complex(&h1, &h2, &r(1, 2)), Err(Error::NoInterpolationRule(_))));
        assert!(matches!(interpolate_complex(&h1, &b1, &r(1, 2)), Err(Error::NoInterpolationRule(_))));
        assert!(matches!(interpolate_complex(&h1, &h1, &r(0, 1)), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn real_identities() {
        let a = Anisotropy::parabolic(2);
        let h1 = SpaceDescr::h(r(1, 1), r(1, 3), a.clone());
        let h3 = SpaceDescr::h(r(3, 1), r(1, 3), a.clone());
        let out = interpolate_real(&h1, &h3, &r(1, 2), &RealQ::Fixed(r(1, 5))).unwrap();
        assert_eq!(out, SpaceDescr::b(r(2, 1), r(1, 3), Some(r(1, 5)), a.clone()));
        let b0 = SpaceDescr::b(r(0, 1), r(1, 3), Some(r(1, 2)), a.clone());
        let b2 = SpaceDescr::b(r(2, 1), r(1, 3), Some(r(1, 4)), a.clone());
        let out = interpolate_real(&b0, &b2, &r(1, 2), &RealQ::Fixed(r(1, 6))).unwrap();
        assert_eq!(out, SpaceDescr::b(r(1, 1), r(1, 3), Some(r(1, 6)), a.clone()));
        let b2b = SpaceDescr::b(r(0, 1), r(1, 3), Some(r(1, 4)), a.clone());
        assert!(matches!(interpolate_real(&b0, &b2b, &r(1, 2), &RealQ::Fixed(r(1, 6))), Err(Error::NoInterpolationRule(_))));
        // second Besov identity: 1/p must match the q-combination verbatim
        let c0 = SpaceDescr::b(r(1, 1), r(1, 2), Some(r(1, 2)), a.clone());
        let c1 = SpaceDescr::b(r(3, 1), r(1, 4), Some(r(1, 4)), a.clone());
        let out = interpolate_real(&c0, &c1, &r(1, 2), &RealQ::Coupled).unwrap();
        assert_eq!(out, SpaceDescr::b(r(2, 1), r(3, 8), None, a.clone()));
        let c2 = SpaceDescr::b(r(3, 1), r(1, 4), Some(r(1, 5)), a.clone());
        assert!(interpolate_real(&c0, &c2, &r(1, 2), &RealQ::Coupled).is_err());
        let hp = SpaceDescr::h(r(1, 1), r(1, 2), a.clone());
        let hq = SpaceDescr::h(r(1, 1), r(1, 4), a.clone());
        assert_eq!(interpolate_real(&hp, &hq, &r(1, 2), &RealQ::Coupled).unwrap(), SpaceDescr::h(r(1, 1), r(3, 8), a.clone()));
        let l2 = SpaceDescr::l(r(1, 2), a.clone());
        let l4 = SpaceDescr::l(r(1, 4), a.clone());
        assert_eq!(interpolate_real(&l2, &l4, &r(1, 2), &RealQ::Coupled).unwrap(), SpaceDescr::l(r(3, 8), a));
    }
}
