//! Exact solution sets in `x = 1/p` for decisions whose parameters are affine in `x`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::decision::Decision;
use crate::embed::embeds;
use crate::error::{Error, Result};
use crate::multiply::{decide_algebra, decide_multiplication, decide_multiplier, reduced_multiplication, MultInstance};
use crate::nemytskij::{decide_nemytskij, AnalyticSpec};
use crate::ratcore::{AffineExpr, Rational};
use crate::spaces::{divisibility_points, sobolev_index, SpaceDescr};

/// A decision instance with parameters affine in the shared variable `x`.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum ParamQuery {
    Embed { src: SpaceDescr, dst: SpaceDescr },
    Multiplication(MultInstance),
    Multiplier { inst: MultInstance, ell: usize },
    Algebra(SpaceDescr),
    Nemytskij { args: Vec<SpaceDescr>, target: SpaceDescr, phi: AnalyticSpec },
    Reduced { inst: MultInstance, omit: Vec<usize> },
}

const MAX_SUBSET_FACTORS: usize = 12;

impl ParamQuery {
    /// Factors first, target last.
    fn spaces(&self) -> (Vec<&SpaceDescr>, Option<&SpaceDescr>) {
        match self {
            ParamQuery::Embed { src, dst } => (alloc::vec![src], Some(dst)),
            ParamQuery::Multiplication(inst)
            | ParamQuery::Multiplier { inst, .. }
            | ParamQuery::Reduced { inst, .. } => (inst.factors.iter().collect(), Some(&inst.target)),
            ParamQuery::Algebra(sp) => (alloc::vec![sp, sp], Some(sp)),
            ParamQuery::Nemytskij { args, target, .. } => (args.iter().collect(), Some(target)),
        }
    }

    /// Concrete decision at `x = x0`.
    pub fn decide_at(&self, x0: &Rational) -> Result<Decision> {
        match self {
            ParamQuery::Embed { src, dst } => embeds(&src.at(x0), &dst.at(x0)),
            ParamQuery::Multiplication(inst) => decide_multiplication(&inst.at(x0)),
            ParamQuery::Multiplier { inst, ell } => decide_multiplier(&inst.at(x0), *ell),
            ParamQuery::Algebra(sp) => decide_algebra(&sp.at(x0)),
            ParamQuery::Nemytskij { args, target, phi } => {
                let args: Vec<SpaceDescr> = args.iter().map(|a| a.at(x0)).collect();
                decide_nemytskij(&args, &target.at(x0), phi).map(|o| o.decision)
            }
            ParamQuery::Reduced { inst, omit } => reduced_multiplication(&inst.at(x0), omit),
        }
    }

    /// Verdict at `x0`; `None` where a space is not identifiable.
    pub fn covered_at(&self, x0: &Rational) -> Result<Option<bool>> {
        match self.decide_at(x0) {
            Ok(d) => Ok(Some(d.is_covered())),
            Err(Error::NotIdentifiable(_)) => Ok(None),
            Err(Error::InvalidSpace(_)) => Ok(Some(false)),
            Err(e) => Err(e),
        }
    }

    /// Every affine quantity whose sign can change a check outcome.
    fn atoms(&self) -> Vec<AffineExpr> {
        let (factors, target) = self.spaces();
        let all: Vec<&SpaceDescr> = factors.iter().copied().chain(target).collect();
        let mut xs: Vec<AffineExpr> = alloc::vec![AffineExpr::zero(), AffineExpr::constant(Rational::one())];
        let mut ss: Vec<AffineExpr> = alloc::vec![AffineExpr::zero()];
        let mut inds: Vec<AffineExpr> = alloc::vec![AffineExpr::zero()];
        let mut idx_of: Vec<Option<AffineExpr>> = Vec::new();
        for sp in &all {
            xs.push(sp.x.clone());
            if let Some(y) = &sp.y {
                xs.push(AffineExpr::constant(y.clone()));
            }
            ss.push(sp.s.clone());
            let ind = sobolev_index(sp).ok();
            if let Some(i) = &ind {
                inds.push(i.clone());
            }
            idx_of.push(ind);
        }
        if let (Some(t), true) = (target, factors.len() <= MAX_SUBSET_FACTORS) {
            let m = factors.len();
            for mask in 1u32..(1u32 << m) {
                let members = (0..m).filter(|j| mask & (1 << j) != 0);
                let sx: AffineExpr = members.clone().map(|j| factors[j].x.clone()).sum();
                xs.push(sx - t.x.clone());
                if members.clone().all(|j| idx_of[j].is_some()) {
                    let si: AffineExpr = members.map(|j| idx_of[j].clone().expect("checked")).sum();
                    inds.push(si);
                }
            }
        }
        // intermediate-space integrability of an embedding detour
        if let (ParamQuery::Embed { src, dst }, [Some(ia), Some(ib)]) = (self, &idx_of[..]) {
            let od = Rational::integer(src.aniso.omega_dot() as i64);
            let on = Rational::integer(src.aniso.omega_dot_n() as i64);
            let half = Rational::new(1, 2);
            let s_mid = (src.s.clone() + dst.s.clone()).scale(&half);
            for ind in [ia, ib] {
                let x_mid = (s_mid.clone() - ind.scale(&od)).scale(&(Rational::one() / on.clone()));
                xs.push(x_mid);
            }
        }
        let mut atoms = Vec::new();
        for group in [&xs, &ss, &inds] {
            for (i, a) in group.iter().enumerate() {
                atoms.push(a.clone());
                for b in &group[i + 1..] {
                    atoms.push(a.clone() - b.clone());
                }
            }
        }
        atoms
    }

    /// Breakpoints in `(0, 1)`, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let (zero, one) = (Rational::zero(), Rational::one());
        let mut pts: Vec<Rational> = self.atoms().iter().filter_map(AffineExpr::root).collect();
        let (factors, target) = self.spaces();
        for sp in factors.into_iter().chain(target) {
            pts.extend(divisibility_points(sp));
        }
        pts.retain(|x| *x > zero && *x < one);
        pts.sort();
        pts.dedup();
        pts
    }
}

/// One interval of `x` values with its endpoint closedness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XInterval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl XInterval {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

/// A finite union of `x`-intervals inside `(0, 1)` minus finitely many excluded points.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamSet {
    pub intervals: Vec<XInterval>,
    pub excluded_points: Vec<(Rational, String)>,
}

impl ParamSet {
    pub fn empty() -> Self {
        ParamSet::default()
    }

    /// All `1 < p < ∞`.
    pub fn full() -> Self {
        ParamSet::from_x(Rational::zero(), false, Rational::one(), false)
    }

    fn from_x(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Self {
        let iv = XInterval { lo, lo_closed, hi, hi_closed };
        if iv.is_empty() {
            ParamSet::empty()
        } else {
            ParamSet { intervals: alloc::vec![iv], excluded_points: Vec::new() }
        }
    }

    /// `p ≥ p0` within `1 < p < ∞`.
    pub fn p_at_least(p0: &Rational) -> Self {
        ParamSet::from_x(Rational::zero(), false, cap(p0), *p0 > Rational::one())
    }

    /// `p > p0` within `1 < p < ∞`.
    pub fn p_greater(p0: &Rational) -> Self {
        ParamSet::from_x(Rational::zero(), false, cap(p0), false)
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x)) && !self.excluded_points.iter().any(|(e, _)| e == x)
    }

    /// Removes a single point, recording why.
    pub fn exclude(&mut self, x: Rational, reason: &str) {
        if self.intervals.iter().any(|iv| iv.contains(&x)) && !self.excluded_points.iter().any(|(e, _)| *e == x) {
            self.excluded_points.push((x, reason.into()));
            self.excluded_points.sort_by(|a, b| a.0.cmp(&b.0));
        }
    }

    pub fn intersect(&self, other: &ParamSet) -> ParamSet {
        let mut intervals = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let (lo, lo_closed) = match a.lo.cmp(&b.lo) {
                    core::cmp::Ordering::Less => (b.lo.clone(), b.lo_closed),
                    core::cmp::Ordering::Greater => (a.lo.clone(), a.lo_closed),
                    core::cmp::Ordering::Equal => (a.lo.clone(), a.lo_closed && b.lo_closed),
                };
                let (hi, hi_closed) = match a.hi.cmp(&b.hi) {
                    core::cmp::Ordering::Less => (a.hi.clone(), a.hi_closed),
                    core::cmp::Ordering::Greater => (b.hi.clone(), b.hi_closed),
                    core::cmp::Ordering::Equal => (a.hi.clone(), a.hi_closed && b.hi_closed),
                };
                let iv = XInterval { lo, lo_closed, hi, hi_closed };
                if !iv.is_empty() {
                    intervals.push(iv);
                }
            }
        }
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut out = ParamSet { intervals, excluded_points: Vec::new() };
        for (x, why) in self.excluded_points.iter().chain(&other.excluded_points) {
            out.exclude(x.clone(), why);
        }
        out
    }

    /// `p`-intervals, largest `p` last.
    pub fn p_intervals(&self) -> Vec<String> {
        self.intervals.iter().rev().map(p_interval).collect()
    }
}

fn cap(p0: &Rational) -> Rational {
    if *p0 <= Rational::one() {
        Rational::one()
    } else {
        Rational::one() / p0.clone()
    }
}

fn p_interval(iv: &XInterval) -> String {
    let lo = iv.hi.recip().map(|p| format!("{}", p)).unwrap_or_else(|| "inf".into());
    let hi = iv.lo.recip().map(|p| format!("{}", p)).unwrap_or_else(|| "inf".into());
    if iv.lo == iv.hi {
        return format!("{{{}}}", lo);
    }
    format!(
        "{}{}, {}{}",
        if iv.hi_closed { '[' } else { '(' },
        lo,
        hi,
        if iv.lo_closed { ']' } else { ')' }
    )
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("p in {}");
        }
        write!(f, "p in {}", self.p_intervals().join(" u "))?;
        for (x, _) in &self.excluded_points {
            let p = x.recip().expect("excluded points are positive");
            write!(f, ", p != {}", p)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Piece {
    In,
    Out,
    Undetermined,
}

/// Exact set of `x ∈ (0, 1)` where the query is COVERED.
pub fn solve_param(query: &ParamQuery) -> Result<ParamSet> {
    let bps = query.breakpoints();
    let mut edges = alloc::vec![Rational::zero()];
    edges.extend(bps.iter().cloned());
    edges.push(Rational::one());
    // pieces alternate: cell, breakpoint, cell, ..., cell
    let mut pieces: Vec<(Piece, Rational)> = Vec::new();
    for (i, w) in edges.windows(2).enumerate() {
        if i > 0 {
            pieces.push(evaluate(query, &w[0])?);
        }
        let mid = w[0].midpoint(&w[1]);
        let (state, _) = evaluate(query, &mid)?;
        if state == Piece::Undetermined {
            return Err(Error::NotIdentifiable(format!("not identifiable on the open cell around x = {}", mid)));
        }
        pieces.push((state, mid));
    }
    let mut set = ParamSet::empty();
    let mut open: Option<XInterval> = None;
    let mut pending: Vec<Rational> = Vec::new();
    for (k, (state, at)) in pieces.iter().enumerate() {
        let is_cell = k % 2 == 0;
        let inside = match state {
            Piece::In => true,
            Piece::Out => false,
            Piece::Undetermined => {
                let left = pieces.get(k.wrapping_sub(1)).map(|p| p.0);
                let right = pieces.get(k + 1).map(|p| p.0);
                if left == Some(Piece::In) && right == Some(Piece::In) {
                    pending.push(at.clone());
                    true
                } else {
                    false
                }
            }
        };
        let (lo, hi) = if is_cell { (&edges[k / 2], &edges[k / 2 + 1]) } else { (at, at) };
        match (&mut open, inside) {
            (Some(iv), true) => {
                iv.hi = hi.clone();
                iv.hi_closed = !is_cell;
            }
            (None, true) => {
                open = Some(XInterval { lo: lo.clone(), lo_closed: !is_cell, hi: hi.clone(), hi_closed: !is_cell });
            }
            (Some(_), false) => set.intervals.push(open.take().expect("open interval")),
            (None, false) => {}
        }
    }
    if let Some(iv) = open {
        set.intervals.push(iv);
    }
    for x in pending {
        set.exclude(x, "space not identifiable");
    }
    Ok(set)
}

fn evaluate(query: &ParamQuery, x: &Rational) -> Result<(Piece, Rational)> {
    let state = match query.covered_at(x)? {
        Some(true) => Piece::In,
        Some(false) => Piece::Out,
        None => Piece::Undetermined,
    };
    Ok((state, x.clone()))
}
