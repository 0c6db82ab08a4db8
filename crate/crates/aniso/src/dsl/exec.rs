//! Dispatch of parsed queries to the engine.

use std::time::Instant;

use aniso_core::appsuite::{run_nvs, run_stefan, PMode, SuiteReport};
use aniso_core::embed::{complex_anchor, embeds, interpolate_complex, interpolate_real, real_anchor, RealQ};
use aniso_core::lemmas::{minimize_phi, realization_holds, realize_exponents, MinimizationInput, RealizationInput};
use aniso_core::multiply::{decide_algebra, decide_multiplication, decide_multiplier};
use aniso_core::nemytskij::{decide_nemytskij, AnalyticSpec};
use aniso_core::psolver::{solve_param, ParamQuery};
use aniso_core::spaces::{format_sexpr, sobolev_index};
use aniso_core::{anchors, Decision, Error, Rational, Scale, SpaceDescr};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::ast::{Method, Problem, Query, QueryLine, TestFn};
use super::format::{format_line, format_space};
use super::report::{Cell, ParamsReport, Report, TermLine, TraceLine};
use crate::normlab::{seminorm, Gaussian, NormlabError};

/// Substitutes `1/p = x0` into every space of `q`.
fn substitute(q: &Query, x0: &Rational) -> Query {
    let at = |s: &SpaceDescr| s.at(x0);
    match q {
        Query::Index(s) => Query::Index(at(s)),
        Query::Algebra(s) => Query::Algebra(at(s)),
        Query::Embed { src, dst } => Query::Embed { src: at(src), dst: at(dst) },
        Query::Mult(inst) => Query::Mult(inst.at(x0)),
        Query::Multiplier { inst, ell } => Query::Multiplier { inst: inst.at(x0), ell: *ell },
        Query::Nemytskij { args, target, radius, vanishing } => Query::Nemytskij {
            args: args.iter().map(at).collect(),
            target: at(target),
            radius: radius.clone(),
            vanishing: *vanishing,
        },
        Query::SolveP(inner) => Query::SolveP(Box::new(substitute(inner, x0))),
        Query::Interp { method, theta, a, b } => Query::Interp { method: method.clone(), theta: theta.clone(), a: at(a), b: at(b) },
        Query::Seminorm { func, space } => Query::Seminorm { func: func.clone(), space: at(space) },
        other => other.clone(),
    }
}

fn analytic(arity: usize, radius: &Rational, vanishing: bool) -> AnalyticSpec {
    AnalyticSpec { vanishes_at_zero: vanishing, ..AnalyticSpec::vanishing(arity, radius.clone()) }
}

fn param_query(q: &Query) -> Option<ParamQuery> {
    Some(match q {
        Query::Embed { src, dst } => ParamQuery::Embed { src: src.clone(), dst: dst.clone() },
        Query::Mult(inst) => ParamQuery::Multiplication(inst.clone()),
        Query::Multiplier { inst, ell } => ParamQuery::Multiplier { inst: inst.clone(), ell: *ell },
        Query::Algebra(s) => ParamQuery::Algebra(s.clone()),
        Query::Nemytskij { args, target, radius, vanishing } => {
            ParamQuery::Nemytskij { args: args.clone(), target: target.clone(), phi: analytic(args.len(), radius, *vanishing) }
        }
        _ => return None,
    })
}

fn p_of(x: &Rational) -> String {
    x.recip().map(|p| p.to_string()).unwrap_or_else(|| "inf".into())
}

fn cell(query: &ParamQuery, p: String, x: &Rational) -> Cell {
    let sample = p_of(x);
    match query.decide_at(x) {
        Ok(d) => match d.first_failure() {
            Some(c) => Cell { p, sample, verdict: "NOT_COVERED".into(), label: c.label.clone(), anchor: c.anchor.into() },
            None => Cell { p, sample, verdict: "COVERED".into(), label: "all conditions hold".into(), anchor: covering_rule(&d).into() },
        },
        Err(e @ Error::InvalidSpace(_)) => Cell { p, sample, verdict: "NOT_COVERED".into(), label: e.to_string(), anchor: e.anchor().into() },
        Err(e) => Cell { p, sample, verdict: "UNDETERMINED".into(), label: e.to_string(), anchor: e.anchor().into() },
    }
}

/// First theorem cited by a covered decision, else its last step.
fn covering_rule(d: &Decision) -> &'static str {
    let first_thm = d.trace.iter().find(|c| c.anchor.starts_with("Thm"));
    first_thm.or(d.trace.last()).map_or(anchors::SPACES_DEF, |c| c.anchor)
}

/// One witness per open cell and per breakpoint of the `p`-axis, in increasing `p`.
fn cells(query: &ParamQuery) -> Vec<Cell> {
    let mut edges = vec![Rational::zero()];
    edges.extend(query.breakpoints());
    edges.push(Rational::one());
    let mut out = Vec::new();
    for (i, w) in edges.windows(2).enumerate() {
        if i > 0 {
            out.push(cell(query, format!("{{{}}}", p_of(&w[0])), &w[0]));
        }
        let range = format!("({}, {})", p_of(&w[1]), p_of(&w[0]));
        out.push(cell(query, range, &w[0].midpoint(&w[1])));
    }
    out.reverse();
    out
}

fn decision(q: &Query) -> Option<Result<Decision, Error>> {
    Some(match q {
        Query::Embed { src, dst } => embeds(src, dst),
        Query::Mult(inst) => decide_multiplication(inst),
        Query::Multiplier { inst, ell } => decide_multiplier(inst, *ell),
        Query::Algebra(s) => decide_algebra(s),
        Query::Nemytskij { args, target, radius, vanishing } => {
            decide_nemytskij(args, target, &analytic(args.len(), radius, *vanishing)).map(|o| o.decision)
        }
        _ => return None,
    })
}

fn index(rep: &mut Report, sp: &SpaceDescr) -> Result<(), Error> {
    let ind = sobolev_index(sp)?;
    let a = &sp.aniso;
    let rendered = format!("ω-ind = {}", format_sexpr(&ind));
    let (anchor, rule) = match sp.scale {
        Scale::L => (anchors::OMEGA_IND, format!("-(ω·n)/(ω̇ p) with ω·n = {}, ω̇ = {}", a.omega_dot_n(), a.omega_dot())),
        _ => (anchors::INDEX_DEF, format!("(s - (ω·n)/p)/ω̇ with s = {}, ω·n = {}, ω̇ = {}", format_sexpr(&sp.s), a.omega_dot_n(), a.omega_dot())),
    };
    rep.push("ω-ind", anchor, "PASS", rule);
    rep.value = Some(Value::String(rendered));
    Ok(())
}

fn interp(rep: &mut Report, method: &Method, theta: &Rational, a: &SpaceDescr, b: &SpaceDescr) -> Result<(), Error> {
    let (out, anchor, name) = match method {
        Method::Complex => (interpolate_complex(a, b, theta)?, complex_anchor(a), format!("[A, B]_{}", theta)),
        Method::Real(y) => {
            let q = y.clone().map_or(RealQ::Coupled, RealQ::Fixed);
            let qs = y.as_ref().map_or("p".into(), p_of);
            (interpolate_real(a, b, theta, &q)?, real_anchor(a), format!("(A, B)_{{{},{}}}", theta, qs))
        }
    };
    let shown = format_space(&out);
    rep.push("interpolation identity", anchor, "PASS", format!("{} = {}", name, shown));
    rep.value = Some(Value::String(shown));
    Ok(())
}

fn tuple(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(r.to_string())).collect())
}

fn realize(rep: &mut Report, sigma: &[Rational], pi: &[Rational], rho: &Rational) -> Result<(), Error> {
    let input = RealizationInput::new(sigma.to_vec(), pi.to_vec(), rho.clone());
    let out = realize_exponents(&input)?;
    let strict = input.is_strict();
    let ok = realization_holds(&input, &out, strict);
    let detail = format!("{} <= rho = {} <= {}; rho_j = {:?}", input.lower(), rho, input.upper(), out.iter().map(Rational::to_string).collect::<Vec<_>>());
    rep.push("realization", anchors::LEMMA_REAL, if ok { "PASS" } else { "FAIL" }, detail);
    rep.value = Some(json!({ "rho": tuple(&out), "strict": strict }));
    Ok(())
}

fn one_based(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|j| json!(j + 1)).collect())
}

fn minimize(rep: &mut Report, sigma: &[Rational], pi: &[Rational], n: u32) -> Result<(), Error> {
    let m = minimize_phi(&MinimizationInput::new(sigma.to_vec(), pi.to_vec(), n))?;
    rep.push("minimizer characterization", anchors::LEMMA_MIN, "PASS", m.rule.to_string());
    rep.value = Some(json!({
        "phi_min": m.phi_min.to_string(),
        "mu": m.mu.to_string(),
        "M_minus": one_based(&m.m_minus),
        "M_zero": one_based(&m.m_zero),
        "M_plus": one_based(&m.m_plus),
        "M_bullet": one_based(&m.m_bullet),
        "minimizers": m.rule.to_string(),
    }));
    Ok(())
}

/// Nine significant digits keep golden files stable across platforms.
fn round(v: f64) -> Value {
    let s = format!("{:.8e}", v);
    json!(s.parse::<f64>().unwrap_or(v))
}

/// Gaussian described by a test function, one width per slice.
pub fn gaussian(func: &TestFn, space: &SpaceDescr) -> Result<Gaussian, NormlabError> {
    let nu = space.aniso.nu();
    let widths: Vec<f64> = match func.widths.len() {
        1 => vec![func.widths[0].to_f64(); nu],
        k if k == nu => func.widths.iter().map(Rational::to_f64).collect(),
        k => return Err(NormlabError::InvalidArgument(format!("{} widths for {} slices", k, nu))),
    };
    let mut g = Gaussian::new(widths).modulated(func.frequency.to_f64(), func.phase.to_f64());
    g.amplitude = func.amplitude.to_f64();
    Ok(g)
}

fn seminorm_report(rep: &mut Report, func: &TestFn, space: &SpaceDescr) -> Result<(), NormlabError> {
    let dims: Vec<usize> = space.aniso.dims().iter().map(|&d| d as usize).collect();
    let grid = gaussian(func, space)?.grid(&dims, func.ppw as usize)?;
    let res = seminorm(&grid, space)?;
    let m = &res.meta;
    rep.push(
        "difference-quotient quadrature",
        m.anchor,
        "PASS",
        format!("h-nodes: {}, directions per slice: {}", m.nodes.iter().sum::<usize>(), m.directions.iter().map(usize::to_string).collect::<Vec<_>>().join("/")),
    );
    rep.value = Some(json!({
        "seminorm": round(res.value),
        "truncation_error_estimate": round(res.truncation_error_estimate),
        "h_range": m.h_range.iter().map(|&(a, b)| json!([round(a), round(b)])).collect::<Vec<_>>(),
    }));
    Ok(())
}

fn normlab_error(rep: &mut Report, e: &NormlabError, space: &SpaceDescr) {
    if let NormlabError::Engine(e) = e {
        *rep = rep.clone().with_error(e);
        return;
    }
    let kind = match e {
        NormlabError::WrongScale(_) => "WrongScale",
        NormlabError::Resolution(_) => "Resolution",
        NormlabError::NotCovered(_) => "NotCovered",
        _ => "InvalidArgument",
    };
    let anchor = if space.scale == Scale::B { anchors::B_NORM } else { anchors::W_NORM };
    rep.error = Some(super::report::ErrorReport { kind: kind.into(), message: e.to_string(), anchor: anchor.into() });
}

fn app(rep: &mut Report, problem: Problem, n: u32, p: Option<&Rational>) -> Result<(), Error> {
    let mode = p.map_or(PMode::Symbolic, |p| PMode::Concrete(p.clone()));
    let suite: SuiteReport = match problem {
        Problem::Stefan => run_stefan(n, mode)?,
        Problem::Nvs => run_nvs(n, mode)?,
    };
    for f in &suite.facts {
        rep.push(f.quantity, f.anchor, "FACT", format!("{} in {}", f.quantity, format_space(&f.space)));
    }
    let terms = suite
        .terms
        .iter()
        .map(|t| TermLine {
            group: t.group.into(),
            term: t.term.clone(),
            facts: t.facts.iter().map(|s| s.to_string()).collect(),
            condition: t.condition.into(),
            expected: t.expected.to_string(),
            solved: t.solved.as_ref().map(ParamsReport::from),
            verdict: t.decision.as_ref().map(|d| d.verdict.to_string()),
            failed: t.decision.as_ref().and_then(Decision::first_failure).map(TraceLine::from),
            agrees: t.agrees,
        })
        .collect();
    rep.terms = Some(terms);
    if let Some(i) = &suite.intersection {
        let matches = suite.matches_theorem() == Some(true);
        rep.push("theorem range", suite.theorem_anchor, if matches { "PASS" } else { "FAIL" }, format!("intersection {} vs theorem {}", i, suite.theorem));
        rep.params = Some(ParamsReport::from(i));
    }
    if let Some(all) = suite.all_covered() {
        rep.verdict = Some(if all { "COVERED" } else { "NOT_COVERED" }.into());
        let first = suite.terms.iter().find_map(|t| t.decision.as_ref().and_then(Decision::first_failure));
        rep.failed = first.map(TraceLine::from);
    }
    rep.value = Some(json!({
        "problem": suite.problem,
        "n": suite.n,
        "theorem": suite.theorem.to_string(),
        "theorem_anchor": suite.theorem_anchor,
        "matches_theorem": suite.matches_theorem(),
        "theorem_contains_p": p.map(|p| suite.theorem.contains(&(Rational::one() / p.clone()))),
        "exclusions": suite.exclusions.iter().map(|(x, why)| json!({ "p": p_of(x), "reason": why })).collect::<Vec<_>>(),
        "footer": suite.footer,
    }));
    Ok(())
}

/// Evaluates one query line.
pub fn run(line: &QueryLine) -> Report {
    let mut rep = Report::new(format_line(line), line.query.kind());
    rep.at_p = line.at_p.as_ref().map(Rational::to_string);
    let x0 = line.at_p.as_ref().map(|p| Rational::one() / p.clone());
    let query = match &x0 {
        Some(x0) => substitute(&line.query, x0),
        None => line.query.clone(),
    };
    if let Some(d) = decision(&query) {
        return match d {
            Ok(d) => rep.with_decision(&d),
            Err(e) => rep.with_error(&e),
        };
    }
    let outcome = match &query {
        Query::SolveP(inner) => {
            let pq = param_query(inner).expect("parser admits decision kinds only");
            solve_param(&pq).map(|set| {
                let mut params = ParamsReport::from(&set);
                params.cells = cells(&pq);
                rep.params = Some(params);
            })
        }
        Query::Index(sp) => index(&mut rep, sp),
        Query::Interp { method, theta, a, b } => interp(&mut rep, method, theta, a, b),
        Query::Realize { sigma, pi, rho } => realize(&mut rep, sigma, pi, rho),
        Query::Minimize { sigma, pi, n } => minimize(&mut rep, sigma, pi, *n),
        Query::App { problem, n } => app(&mut rep, *problem, *n, line.at_p.as_ref()),
        Query::Seminorm { func, space } => {
            if let Err(e) = seminorm_report(&mut rep, func, space) {
                normlab_error(&mut rep, &e, space);
            }
            Ok(())
        }
        _ => unreachable!("decision kinds handled above"),
    };
    match outcome {
        Ok(()) => rep,
        Err(e) => rep.with_error(&e),
    }
}

/// [`run`] with wall-clock timing.
pub fn run_timed(line: &QueryLine) -> Report {
    let start = Instant::now();
    let mut rep = run(line);
    rep.timing_us = Some(start.elapsed().as_micros() as u64);
    rep
}

/// Evaluates lines in parallel; output order matches input order.
pub fn run_batch(lines: &[QueryLine], timing: bool) -> Vec<Report> {
    lines.par_iter().map(|l| if timing { run_timed(l) } else { run(l) }).collect()
}
