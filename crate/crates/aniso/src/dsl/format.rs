//! Canonical text for parsed queries; `parse(format(q)) == q`.

use aniso_core::spaces::format_pexpr;
use aniso_core::{AffineExpr, Rational, Scale, SpaceDescr};

use super::ast::{Method, Query, QueryLine, TestFn};

fn tuple(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(","))
}

fn weights(sp: &SpaceDescr) -> Option<String> {
    let w = sp.aniso.weights();
    if w.iter().all(|&w| w == 1) {
        return None;
    }
    let parts: Vec<String> = w.iter().map(u32::to_string).collect();
    Some(format!("({})", parts.join(",")))
}

/// A space in query syntax.
pub fn format_space(sp: &SpaceDescr) -> String {
    if sp.scale != Scale::C0 {
        return sp.to_string();
    }
    let tail = if sp.target.is_scalar_field() && sp.target.name == "R" {
        format!("({})", sp.domain)
    } else {
        format!("({};{})", sp.domain, sp.target.name)
    };
    match weights(sp) {
        Some(w) => format!("C0^{{0,{}}}{}", w, tail),
        None => format!("C0{}", tail),
    }
}

/// `1/q` as it appears after `q=` in an interpolation.
fn format_q(y: &Option<Rational>) -> String {
    match y {
        None => "p".into(),
        Some(y) => format_pexpr(&AffineExpr::constant(y.clone())),
    }
}

fn format_test_fn(f: &TestFn) -> String {
    let width = if f.widths.len() == 1 { f.widths[0].to_string() } else { tuple(&f.widths) };
    format!("gaussian(width={}, amp={}, freq={}, phase={}, ppw={})", width, f.amplitude, f.frequency, f.phase, f.ppw)
}

fn product(factors: &[SpaceDescr], target: &SpaceDescr) -> String {
    let lhs: Vec<String> = factors.iter().map(format_space).collect();
    format!("{} -> {}", lhs.join(" * "), format_space(target))
}

/// The body of a query without the trailing `?`.
pub fn format_query(q: &Query) -> String {
    match q {
        Query::Index(sp) => format!("index {}", format_space(sp)),
        Query::Algebra(sp) => format!("algebra {}", format_space(sp)),
        Query::Embed { src, dst } => format!("{} -> {}", format_space(src), format_space(dst)),
        Query::Mult(inst) => product(&inst.factors, &inst.target),
        Query::Multiplier { inst, ell } => format!("multiplier(ell={}) {}", ell, product(&inst.factors, &inst.target)),
        Query::Nemytskij { args, target, radius, vanishing } => {
            let a: Vec<String> = args.iter().map(format_space).collect();
            format!(
                "nemytskij(r={}, vanishing={}) {} -> {}",
                radius,
                if *vanishing { "yes" } else { "no" },
                a.join(", "),
                format_space(target)
            )
        }
        Query::SolveP(inner) => format!("solve p: {}", format_query(inner)),
        Query::Interp { method, theta, a, b } => {
            let m = match method {
                Method::Complex => format!("complex(theta={})", theta),
                Method::Real(y) => format!("real(theta={}, q={})", theta, format_q(y)),
            };
            format!("interp {} {}, {}", m, format_space(a), format_space(b))
        }
        Query::Realize { sigma, pi, rho } => format!("realize(sigma={}, pi={}, rho={})", tuple(sigma), tuple(pi), rho),
        Query::Minimize { sigma, pi, n } => format!("minimize(sigma={}, pi={}, n={})", tuple(sigma), tuple(pi), n),
        Query::Seminorm { func, space } => format!("seminorm {} in {}", format_test_fn(func), format_space(space)),
        Query::App { problem, n } => format!("app {}(n={})", problem.name(), n),
    }
}

/// A full query line, `?` included.
pub fn format_line(line: &QueryLine) -> String {
    match &line.at_p {
        Some(p) => format!("at p = {}: {} ?", p, format_query(&line.query)),
        None => format!("{} ?", format_query(&line.query)),
    }
}
