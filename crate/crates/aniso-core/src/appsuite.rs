//! Nonlinearity checklists of two free-boundary problems, evaluated by the engine.
//!
//! Regularity of the unknowns and their derivatives enters as cited facts; each
//! nonlinear term becomes a multiplication, multiplier or Nemytskij query.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::anchors;
use crate::decision::Decision;
use crate::error::Result;
use crate::multiply::MultInstance;
use crate::nemytskij::AnalyticSpec;
use crate::psolver::{solve_param, ParamQuery, ParamSet};
use crate::ratcore::{AffineExpr, Rational};
use crate::spaces::{Anisotropy, Scale, SpaceDescr, TargetSpace};

/// Regularity of one quantity, taken as given.
#[derive(Clone, Debug)]
pub struct RegularityFact {
    pub quantity: &'static str,
    pub space: SpaceDescr,
    pub anchor: &'static str,
    pub quote: &'static str,
}

/// One nonlinear term with its engine query and the range stated for it.
#[derive(Clone, Debug)]
pub struct TermCheck {
    pub group: &'static str,
    pub term: String,
    pub facts: Vec<&'static str>,
    pub query: ParamQuery,
    pub expected: ParamSet,
    pub condition: &'static str,
}

/// Either a concrete `p` or the symbolic mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PMode {
    Symbolic,
    Concrete(Rational),
}

#[derive(Clone, Debug)]
pub struct TermReport {
    pub group: &'static str,
    pub term: String,
    pub facts: Vec<&'static str>,
    pub condition: &'static str,
    pub expected: ParamSet,
    /// Solved range (symbolic mode).
    pub solved: Option<ParamSet>,
    /// Concrete decision (concrete mode).
    pub decision: Option<Decision>,
    /// Solved range equals `expected`, or the concrete verdict agrees with it.
    pub agrees: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub problem: &'static str,
    pub n: u32,
    pub mode: PMode,
    pub facts: Vec<RegularityFact>,
    pub terms: Vec<TermReport>,
    /// Intersection of all solved ranges, with the linear-theory exclusions applied.
    pub intersection: Option<ParamSet>,
    pub theorem: ParamSet,
    pub theorem_anchor: &'static str,
    pub exclusions: Vec<(Rational, &'static str)>,
    pub footer: Vec<String>,
}

impl SuiteReport {
    pub fn all_covered(&self) -> Option<bool> {
        match self.mode {
            PMode::Symbolic => None,
            PMode::Concrete(_) => Some(self.terms.iter().all(|t| t.decision.as_ref().is_some_and(Decision::is_covered))),
        }
    }

    pub fn matches_theorem(&self) -> Option<bool> {
        self.intersection.as_ref().map(|i| *i == self.theorem)
    }
}

struct Geometry {
    sigma: Anisotropy,
    bulk: Anisotropy,
}

impl Geometry {
    fn new(n: u32) -> Self {
        assert!(n >= 2, "spatial dimension must be at least 2");
        Geometry {
            sigma: Anisotropy::new(alloc::vec![1, n - 1], alloc::vec![2, 1]).expect("valid weights"),
            bulk: Anisotropy::new(alloc::vec![1, n], alloc::vec![2, 1]).expect("valid weights"),
        }
    }

    /// `W^{c − 1/p,(2,1)}_p(J × Σ)`.
    fn w(&self, c: Rational) -> SpaceDescr {
        SpaceDescr::new(Scale::W, AffineExpr::new(c, Rational::integer(-1)), AffineExpr::var(), self.sigma.clone())
            .with_domain("JxSigma")
    }

    /// `H^{s,(2,1)}_p(J × Σ; L_p(Ṙ))`.
    fn h_fibre(&self, s: i64) -> SpaceDescr {
        SpaceDescr::new(Scale::H, AffineExpr::constant(Rational::integer(s)), AffineExpr::var(), self.sigma.clone())
            .with_domain("JxSigma")
            .with_target(TargetSpace::opaque("L_p(Rdot)"))
    }

    /// `H^{s,(2,1)}_p(J × Ṙ^n)`.
    fn h_bulk(&self, s: i64) -> SpaceDescr {
        SpaceDescr::new(Scale::H, AffineExpr::constant(Rational::integer(s)), AffineExpr::var(), self.bulk.clone())
            .with_domain("JxRdot")
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn mult(group: &'static str, term: &str, facts: &[&'static str], f: Vec<SpaceDescr>, t: SpaceDescr, exp: ParamSet, cond: &'static str) -> TermCheck {
    TermCheck {
        group,
        term: term.into(),
        facts: facts.to_vec(),
        query: ParamQuery::Multiplication(MultInstance::new(f, t)),
        expected: exp,
        condition: cond,
    }
}

/// Multiplier terms `[A]^m · X → X` for `m = 1, 2`, with `X` in the last slot.
fn multiplier_pair(
    group: &'static str,
    term: &str,
    facts: &[&'static str],
    a: &SpaceDescr,
    x: &SpaceDescr,
    exp: &ParamSet,
    cond: &'static str,
) -> Vec<TermCheck> {
    (1..=2)
        .map(|m| {
            let mut f: Vec<SpaceDescr> = (0..m).map(|_| a.clone()).collect();
            f.push(x.clone());
            TermCheck {
                group,
                term: format!("{} (m = {})", term, m),
                facts: facts.to_vec(),
                query: ParamQuery::Multiplier { inst: MultInstance::new(f, x.clone()), ell: m + 1 },
                expected: exp.clone(),
                condition: cond,
            }
        })
        .collect()
}

fn nemytskij(group: &'static str, term: &str, facts: &[&'static str], a: &SpaceDescr, n: u32, exp: ParamSet, cond: &'static str) -> TermCheck {
    let arity = (n - 1) as usize;
    TermCheck {
        group,
        term: term.into(),
        facts: facts.to_vec(),
        query: ParamQuery::Nemytskij {
            args: (0..arity).map(|_| a.clone()).collect(),
            target: a.clone(),
            phi: AnalyticSpec::vanishing(arity, Rational::one()),
        },
        expected: exp,
        condition: cond,
    }
}

pub fn stefan_facts(n: u32) -> Vec<RegularityFact> {
    let g = Geometry::new(n);
    alloc::vec![
        RegularityFact {
            quantity: "∂_t h",
            space: g.w(r(1, 1)),
            anchor: anchors::STEFAN_TDERH,
            quote: "∂_t h ∈ W^{1/2 − 1/2p}_p(J, L_p(Σ)) ∩ L_p(J, W^{2 − 2/p}_p(Σ)) ↪ W^{1 − 1/p,(2,1)}_p(J × Σ)",
        },
        RegularityFact {
            quantity: "∂_j h",
            space: g.w(r(5, 2)),
            anchor: anchors::STEFAN_DERH,
            quote: "∂_j h ∈ W^{5/4 − 1/2p}_p(J, L_p(Σ)) ∩ L_p(J, W^{3 − 1/p}_p(Σ)) ↪ W^{5/2 − 1/p,(2,1)}_p(J × Σ)",
        },
        RegularityFact {
            quantity: "∂_j∂_k h",
            space: g.w(r(2, 1)),
            anchor: anchors::STEFAN_2DERH,
            quote: "∂_j ∂_k h ∈ W^{1 − 1/2p}_p(J, L_p(Σ)) ∩ L_p(J, W^{2 − 1/p}_p(Σ)) = W^{2 − 1/p,(2,1)}_p(J × Σ)",
        },
        RegularityFact {
            quantity: "∂_j u",
            space: g.h_fibre(1),
            anchor: anchors::STEFAN_DERU,
            quote: "∂_j u ∈ H^{1,(2,1)}_p(J × Ṙ^n) ↪ H^{1,(2,1)}_p(J × Σ, L_p(Ṙ))",
        },
        RegularityFact {
            quantity: "∂_j∂_k u",
            space: g.h_fibre(0),
            anchor: anchors::STEFAN_2DERU,
            quote: "∂_j ∂_k u ∈ L_p(J × Ṙ^n) = L_p(J × Σ, L_p(Ṙ))",
        },
        RegularityFact {
            quantity: "[∂_j u]_Σ",
            space: g.w(r(1, 1)),
            anchor: anchors::STEFAN_TRACEDERU,
            quote: "[∂_j u]_Σ ∈ W^{1/2 − 1/2p}_p(J, L_p(Σ)) ∩ L_p(J, W^{1 − 1/p}_p(Σ)) = W^{1 − 1/p,(2,1)}_p(J × Σ)",
        },
    ]
}

pub fn stefan_terms(n: u32) -> Vec<TermCheck> {
    let g = Geometry::new(n);
    let np2 = Rational::integer(n as i64 + 2);
    let cond1 = ParamSet::p_at_least(&(&np2 / r(2, 1)));
    let cond2 = ParamSet::p_greater(&(&np2 * r(2, 5)));
    let (w1, w2, w52) = (g.w(r(1, 1)), g.w(r(2, 1)), g.w(r(5, 2)));
    let mut out = alloc::vec![mult(
        "F",
        "(κ∂_t h − μΔ_Σ h) ∂_n u",
        &[anchors::STEFAN_TDERH, anchors::STEFAN_2DERH, anchors::STEFAN_DERU],
        alloc::vec![w1.clone(), g.h_fibre(1)],
        g.h_fibre(0),
        cond1,
        anchors::STEFAN_COND1P,
    )];
    out.extend(multiplier_pair(
        "F",
        "2μ(∇_Σ h · ∇_Σ)∂_n u, μ|∇_Σ h|² ∂²_n u",
        &[anchors::STEFAN_DERH, anchors::STEFAN_2DERU],
        &w52,
        &g.h_fibre(0),
        &cond2,
        anchors::STEFAN_COND2P,
    ));
    out.push(nemytskij("G_u", "φ(∇_Σ h), ψ_jk(∇_Σ h)", &[anchors::STEFAN_DERH, anchors::STEFAN_PHIPSI], &w52, n, cond2.clone(), anchors::STEFAN_COND2P));
    out.push(TermCheck {
        group: "G_u",
        term: "φ(∇_Σ h) Δ_Σ h, ψ_jk(∇_Σ h) ∂_j∂_k h".into(),
        facts: alloc::vec![anchors::STEFAN_2DERH, anchors::STEFAN_PHIPSI],
        query: ParamQuery::Multiplier { inst: MultInstance::new(alloc::vec![w52.clone(), w2.clone()], w2), ell: 2 },
        expected: cond2.clone(),
        condition: anchors::STEFAN_COND2P,
    });
    out.extend(multiplier_pair(
        "G_h",
        "∇_Σ h · [[μ∇_Σ u]]_Σ, |∇_Σ h|² [[μ∂_ν u]]_Σ",
        &[anchors::STEFAN_DERH, anchors::STEFAN_TRACEDERU],
        &w52,
        &w1,
        &cond2,
        anchors::STEFAN_COND2P,
    ));
    out
}

pub fn nvs_facts(n: u32) -> Vec<RegularityFact> {
    let g = Geometry::new(n);
    alloc::vec![
        RegularityFact {
            quantity: "∂_t h",
            space: g.w(r(2, 1)),
            anchor: anchors::NVS_EST_HT,
            quote: "∂_t h ∈ W^{1 − 1/2p}_p(J, L_p(Σ)) ∩ L_p(J, W^{2 − 1/p}_p(Σ)) = W^{2 − 1/p,(2,1)}_p(J × Σ)",
        },
        RegularityFact {
            quantity: "∂_j h",
            space: g.w(r(2, 1)),
            anchor: anchors::NVS_EST_HX,
            quote: "∂_j h ∈ W^{3/2 − 1/2p}_p(J, L_p(Σ)) ∩ L_p(J, W^{2 − 1/p}_p(Σ)) ↪ W^{2 − 1/p,(2,1)}_p(J × Σ)",
        },
        RegularityFact {
            quantity: "∂_j∂_k h",
            space: g.w(r(1, 1)),
            anchor: anchors::NVS_EST_HXY,
            quote: "∂_j ∂_k h ∈ W^{1/2 − 1/2p}_p(J, L_p(Σ)) ∩ L_p(J, W^{1 − 1/p}_p(Σ)) = W^{1 − 1/p,(2,1)}_p(J × Σ)",
        },
        RegularityFact {
            quantity: "∂_j u",
            space: g.h_fibre(1),
            anchor: anchors::NVS_EST_UX,
            quote: "∂_j u ∈ H^{1,(2,1)}_p(J × Ṙ^n) ↪ H^{1,(2,1)}_p(J × Σ, L_p(Ṙ))",
        },
        RegularityFact {
            quantity: "∂_j∂_k u",
            space: g.h_fibre(0),
            anchor: anchors::NVS_EST_UXY,
            quote: "∂_j ∂_k u ∈ L_p(J × Ṙ^n) = L_p(J × Σ, L_p(Ṙ))",
        },
        RegularityFact {
            quantity: "[∂_j u]_Σ",
            space: g.w(r(1, 1)),
            anchor: anchors::NVS_EST_UX_TR,
            quote: "[∂_j u]_Σ ∈ W^{1/2 − 1/2p}_p(J, L_p(Σ)) ∩ L_p(J, W^{1 − 1/p}_p(Σ)) = W^{1 − 1/p,(2,1)}_p(J × Σ)",
        },
    ]
}

pub fn nvs_terms(n: u32) -> Vec<TermCheck> {
    let g = Geometry::new(n);
    let np2 = Rational::integer(n as i64 + 2);
    let weak = ParamSet::p_at_least(&(&np2 / r(2, 1)));
    let req1 = ParamSet::p_greater(&(&np2 / r(2, 1)));
    let req2 = ParamSet::p_at_least(&(&np2 / r(3, 1)));
    let (w1, w2) = (g.w(r(1, 1)), g.w(r(2, 1)));
    let (h0, h1, h2) = (g.h_fibre(0), g.h_fibre(1), g.h_fibre(2));
    let mut out = alloc::vec![mult(
        "F_u",
        "(ρ∂_t h − μΔ_Σ h) ∂_n {v, w}",
        &[anchors::NVS_EST_HT, anchors::NVS_EST_HXY, anchors::NVS_EST_UX, anchors::NVS_EMB_FU1],
        alloc::vec![w1.clone(), h1.clone()],
        h0.clone(),
        weak,
        anchors::NVS_REQP1WEAK,
    )];
    out.extend(multiplier_pair(
        "F_u",
        "2μ(∇_Σ h · ∇_Σ)∂_n {v, w}, μ|∇_Σ h|² ∂²_n {v, w}, ∇_Σ h ∂_n q",
        &[anchors::NVS_EST_HX, anchors::NVS_EST_UXY, anchors::NVS_EMB_FU2],
        &w2,
        &h0,
        &req1,
        anchors::NVS_REQP1,
    ));
    out.push(mult(
        "F_u",
        "ρ(v · ∇')v, ρ w ∂_n {v, w}",
        &[anchors::NVS_EST_HX],
        alloc::vec![g.h_bulk(2), g.h_bulk(1)],
        g.h_bulk(0),
        req2.clone(),
        anchors::NVS_REQP2,
    ));
    out.push(mult(
        "F_u",
        "ρ(v · ∇_Σ h) ∂_n {v, w}, first factor",
        &[anchors::NVS_EST_HX, anchors::NVS_EST_UX],
        alloc::vec![w2.clone(), h1],
        h0.clone(),
        req2.clone(),
        anchors::NVS_REQP2,
    ));
    out.push(TermCheck {
        group: "F_u",
        term: "ρ(v · ∇_Σ h) ∂_n {v, w}, second factor".into(),
        facts: alloc::vec![anchors::NVS_EST_HX, anchors::NVS_EST_UX],
        query: ParamQuery::Multiplier { inst: MultInstance::new(alloc::vec![g.h_bulk(2), g.h_bulk(0)], g.h_bulk(0)), ell: 2 },
        expected: req1.clone(),
        condition: anchors::NVS_REQP1,
    });
    out.push(mult(
        "G_q",
        "∂_t ∇_Σ h · v",
        &[anchors::NVS_EST_HT],
        alloc::vec![w1.clone(), h2],
        h0,
        req2,
        anchors::NVS_REQP2,
    ));
    let embfh = |group: &'static str, term: &str, facts: &[&'static str]| TermCheck {
        group,
        term: term.into(),
        facts: facts.to_vec(),
        query: ParamQuery::Multiplier { inst: MultInstance::new(alloc::vec![w2.clone(), w1.clone()], w1.clone()), ell: 2 },
        expected: req1.clone(),
        condition: anchors::NVS_REQP1,
    };
    out.push(embfh("F_h", "∇_Σ h · [v]_Σ", &[anchors::NVS_EST_HX, anchors::NVS_EST_UX_TR, anchors::NVS_EMBFH]));
    out.push(nemytskij("G_σ", "φ(∇_Σ h), ψ_jk(∇_Σ h)", &[anchors::NVS_EST_HX, anchors::NVS_PHI_PSI], &w2, n, req1.clone(), anchors::NVS_REQP1));
    out.push(embfh("G_σ", "φ(∇_Σ h) Δ_Σ h, ψ_jk(∇_Σ h) ∂_j∂_k h", &[anchors::NVS_EST_HXY, anchors::NVS_PHI_PSI, anchors::NVS_EMBFH]));
    out.extend(multiplier_pair(
        "G_u",
        "[[μ∂_n v]]_Σ ∇_Σ h, |∇_Σ h|² [[μ∂_n v]]_Σ, G_σ(h) ∇_Σ h",
        &[anchors::NVS_EST_HX, anchors::NVS_EST_UX_TR],
        &w2,
        &w1,
        &req1,
        anchors::NVS_REQP1,
    ));
    out
}

fn evaluate(terms: Vec<TermCheck>, mode: &PMode) -> Result<(Vec<TermReport>, Option<ParamSet>)> {
    let mut reports = Vec::new();
    let mut inter = ParamSet::full();
    for t in terms {
        let (solved, decision, agrees) = match mode {
            PMode::Symbolic => {
                let set = solve_param(&t.query)?;
                inter = inter.intersect(&set);
                let agrees = set == t.expected;
                (Some(set), None, agrees)
            }
            PMode::Concrete(p) => {
                let x = p.recip().unwrap_or_else(Rational::zero);
                let d = t.query.decide_at(&x)?;
                let agrees = d.is_covered() == t.expected.contains(&x);
                (None, Some(d), agrees)
            }
        };
        reports.push(TermReport {
            group: t.group,
            term: t.term,
            facts: t.facts,
            condition: t.condition,
            expected: t.expected,
            solved,
            decision,
            agrees,
        });
    }
    let inter = matches!(mode, PMode::Symbolic).then_some(inter);
    Ok((reports, inter))
}

fn linear_exclusions(anchor: &'static str) -> Vec<(Rational, &'static str)> {
    alloc::vec![(r(2, 3), anchor), (r(1, 3), anchor)]
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    problem: &'static str,
    n: u32,
    mode: PMode,
    facts: Vec<RegularityFact>,
    terms: Vec<TermCheck>,
    mut theorem: ParamSet,
    theorem_anchor: &'static str,
    linear: &'static str,
    footer: Vec<String>,
) -> Result<SuiteReport> {
    let (terms, mut intersection) = evaluate(terms, &mode)?;
    let exclusions = linear_exclusions(linear);
    for (x, why) in &exclusions {
        theorem.exclude(x.clone(), why);
        if let Some(i) = intersection.as_mut() {
            i.exclude(x.clone(), why);
        }
    }
    Ok(SuiteReport { problem, n, mode, facts, terms, intersection, theorem, theorem_anchor, exclusions, footer })
}

/// Stefan problem with Gibbs-Thomson correction in `R^n`.
pub fn run_stefan(n: u32, mode: PMode) -> Result<SuiteReport> {
    let theorem = ParamSet::p_at_least(&Rational::new(n as i64 + 2, 2));
    assemble(
        "stefan",
        n,
        mode,
        stefan_facts(n),
        stefan_terms(n),
        theorem,
        anchors::STEFAN_FULL,
        anchors::STEFAN_LINEAR,
        alloc::vec![
            format!("{}: [u_0]_Σ − σΔ_Σ h_0 = g_u(0) if p > 3/2", anchors::STEFAN_COMPAT),
            format!("{}: [[μ∂_ν u_0]]_Σ + g_h(0) ∈ W^{{2 − 6/p}}_p(Σ) if p > 3", anchors::STEFAN_COMPAT),
        ],
    )
}

/// Two-phase Navier-Stokes equations with surface tension in `R^n`.
pub fn run_nvs(n: u32, mode: PMode) -> Result<SuiteReport> {
    let theorem = ParamSet::p_greater(&Rational::new(n as i64 + 2, 2));
    assemble(
        "nvs",
        n,
        mode,
        nvs_facts(n),
        nvs_terms(n),
        theorem,
        anchors::NVS_FULL,
        anchors::NVS_LINEAR,
        alloc::vec![
            format!("{}: div u_0 = g_q(0), [[u_0]]_Σ = 0 if p > 3/2", anchors::NVS_COMPAT),
            format!("{}: −[[μ∂_n v_0]]_Σ − [[μ∇' w_0]]_Σ = g_v(0) if p > 3", anchors::NVS_COMPAT),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stefan_symbolic_n3() {
        let rep = run_stefan(3, PMode::Symbolic).unwrap();
        for t in &rep.terms {
            assert!(t.agrees, "{}: solved {} expected {}", t.term, t.solved.as_ref().unwrap(), t.expected);
        }
        let inter = rep.intersection.clone().unwrap();
        assert_eq!(format!("{}", inter), "p in [5/2, inf), p != 3");
        assert_eq!(rep.matches_theorem(), Some(true));
    }

    #[test]
    fn stefan_concrete() {
        let ok = run_stefan(3, PMode::Concrete(r(3, 1))).unwrap();
        assert_eq!(ok.all_covered(), Some(true));
        let bad = run_stefan(3, PMode::Concrete(r(2, 1))).unwrap();
        let f = &bad.terms[0];
        let fail = f.decision.as_ref().unwrap().first_failure().unwrap();
        assert!(fail.label.starts_with("(iii)"));
    }

    #[test]
    fn nvs_symbolic_n3() {
        let rep = run_nvs(3, PMode::Symbolic).unwrap();
        for t in &rep.terms {
            assert!(t.agrees, "{}: solved {} expected {}", t.term, t.solved.as_ref().unwrap(), t.expected);
        }
        assert_eq!(format!("{}", rep.intersection.as_ref().unwrap()), "p in (5/2, inf), p != 3");
        assert_eq!(rep.matches_theorem(), Some(true));
    }

    #[test]
    fn per_term_ranges_for_small_dimensions() {
        for n in 2..=4 {
            for rep in [run_stefan(n, PMode::Symbolic).unwrap(), run_nvs(n, PMode::Symbolic).unwrap()] {
                for t in &rep.terms {
                    assert!(t.agrees, "n = {} {}: solved {} expected {}", n, t.term, t.solved.as_ref().unwrap(), t.expected);
                }
                assert_eq!(rep.matches_theorem(), Some(true), "{} n = {}", rep.problem, n);
            }
        }
    }
}
