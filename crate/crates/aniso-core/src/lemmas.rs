//! Closed-form solutions of the realization and minimization lemmas.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ratcore::Rational;

/// Data `σ_j ≥ 0`, `0 < π_j < 1` and target `0 < ρ < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationInput {
    pub sigma: Vec<Rational>,
    pub pi: Vec<Rational>,
    pub rho: Rational,
}

impl RealizationInput {
    pub fn new(sigma: Vec<Rational>, pi: Vec<Rational>, rho: Rational) -> Self {
        RealizationInput { sigma, pi, rho }
    }

    /// `Σ [π_j − σ_j]_⊕`, the least attainable sum.
    pub fn lower(&self) -> Rational {
        self.sigma.iter().zip(&self.pi).map(|(s, p)| (p - s).pos_part()).sum()
    }

    /// `Σ π_j`, the largest attainable sum.
    pub fn upper(&self) -> Rational {
        self.pi.iter().cloned().sum()
    }

    /// Whether `ρ` lies strictly above the least attainable sum.
    pub fn is_strict(&self) -> bool {
        self.rho > self.lower()
    }

    fn validate(&self) -> Result<()> {
        let m = self.sigma.len();
        if m == 0 || self.pi.len() != m {
            return Err(Error::InvalidArgument(format!(
                "sigma and pi must be non-empty of equal length, got {} and {}",
                m,
                self.pi.len()
            )));
        }
        let one = Rational::one();
        if self.sigma.iter().any(Rational::is_negative) {
            return Err(Error::InvalidArgument("sigma_j must be non-negative".into()));
        }
        if self.pi.iter().any(|p| !p.is_positive() || *p >= one) {
            return Err(Error::InvalidArgument("pi_j must lie in (0, 1)".into()));
        }
        if !self.rho.is_positive() || self.rho >= one {
            return Err(Error::InvalidArgument(format!("rho = {} must lie in (0, 1)", self.rho)));
        }
        let (lo, hi) = (self.lower(), self.upper());
        if self.rho < lo || self.rho > hi {
            return Err(Error::InfeasibleRange(format!("rho = {} outside [{}, {}]", self.rho, lo, hi)));
        }
        Ok(())
    }
}

/// Exponents `ρ_j` with `π_j − σ_j ≤ ρ_j ≤ π_j`, `0 ≤ ρ_j < 1` and `Σ ρ_j = ρ`.
///
/// Uses `ρ_j = (1 − θ₀)[π_j − σ_j]_⊕ + θ₀ π_j` where `θ₀` solves the affine equation `Σ ρ_j = ρ`.
pub fn realize_exponents(input: &RealizationInput) -> Result<Vec<Rational>> {
    input.validate()?;
    let a: Vec<Rational> = input.sigma.iter().zip(&input.pi).map(|(s, p)| (p - s).pos_part()).collect();
    let (lo, hi) = (input.lower(), input.upper());
    if lo == hi {
        return Ok(input.pi.clone());
    }
    let theta = (&input.rho - &lo) / (&hi - &lo);
    let one_minus = Rational::one() - &theta;
    Ok(a.iter().zip(&input.pi).map(|(aj, pj)| &one_minus * aj + &theta * pj).collect())
}

/// Checks the box, sum and range constraints, plus the strict clause when `strict` is set.
pub fn realization_holds(input: &RealizationInput, rho: &[Rational], strict: bool) -> bool {
    if rho.len() != input.sigma.len() {
        return false;
    }
    let one = Rational::one();
    let boxed = rho.iter().zip(input.sigma.iter().zip(&input.pi)).all(|(r, (s, p))| {
        !r.is_negative() && *r < one && *r <= *p && *r >= p - s
    });
    let sum: Rational = rho.iter().cloned().sum();
    if !boxed || sum != input.rho {
        return false;
    }
    !strict
        || rho
            .iter()
            .zip(input.sigma.iter().zip(&input.pi))
            .all(|(r, (s, p))| r.is_positive() && (s.is_zero() || *r > p - s))
}

/// Data `σ_j, π_j > 0` and a bound `n ≥ 1` on `|ν|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizationInput {
    pub sigma: Vec<Rational>,
    pub pi: Vec<Rational>,
    pub n: u32,
}

impl MinimizationInput {
    pub fn new(sigma: Vec<Rational>, pi: Vec<Rational>, n: u32) -> Self {
        MinimizationInput { sigma, pi, n }
    }

    fn validate(&self) -> Result<()> {
        let m = self.sigma.len();
        if m < 2 || self.pi.len() != m {
            return Err(Error::InvalidArgument(format!(
                "need m >= 2 entries of equal length, got {} and {}",
                m,
                self.pi.len()
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if self.sigma.iter().chain(&self.pi).any(|v| !v.is_positive()) {
            return Err(Error::InvalidArgument("sigma_j and pi_j must be positive".into()));
        }
        Ok(())
    }

    /// `φ(ν) = Σ [σ_j − ν_j − π_j]_⊖`.
    pub fn phi(&self, nu: &[u32]) -> Rational {
        self.sigma
            .iter()
            .zip(&self.pi)
            .zip(nu)
            .map(|((s, p), &v)| (s - Rational::integer(v as i64) - p).neg_part())
            .sum()
    }
}

/// Characterization of the minimizers of `φ` over `{ν : |ν| ≤ n}`. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimizerRule {
    /// `μ ≥ n`: every admissible `ν`.
    AllMinimize,
    /// `0 ≤ μ < n`: `|ν| = n` and `ν_j = 0` on `M_+` except for at most one `j ∈ M_•`.
    FullLengthOneBullet { m_plus: Vec<usize>, m_bullet: Vec<usize> },
    /// `μ < 0`: `|ν| = n` and `ν_j = 0` on `M_+`.
    FullLengthNonPositive { m_plus: Vec<usize> },
}

impl MinimizerRule {
    /// Whether `ν` (assumed to satisfy `|ν| ≤ n`) is a minimizer.
    pub fn admits(&self, nu: &[u32], n: u32) -> bool {
        let full = nu.iter().map(|&v| v as u64).sum::<u64>() == n as u64;
        match self {
            MinimizerRule::AllMinimize => true,
            MinimizerRule::FullLengthOneBullet { m_plus, m_bullet } => {
                let loaded: Vec<usize> = m_plus.iter().copied().filter(|&j| nu[j] != 0).collect();
                full && (loaded.is_empty() || (loaded.len() == 1 && m_bullet.contains(&loaded[0])))
            }
            MinimizerRule::FullLengthNonPositive { m_plus } => full && m_plus.iter().all(|&j| nu[j] == 0),
        }
    }
}

fn one_based(set: &[usize]) -> String {
    let v: Vec<String> = set.iter().map(|j| format!("{}", j + 1)).collect();
    format!("{{{}}}", v.join(", "))
}

impl fmt::Display for MinimizerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimizerRule::AllMinimize => f.write_str("every nu in N"),
            MinimizerRule::FullLengthOneBullet { m_plus, m_bullet } => write!(
                f,
                "|nu| = n and nu_j = 0 for j in M_+ = {} except at most one j in M_bullet = {}",
                one_based(m_plus),
                one_based(m_bullet)
            ),
            MinimizerRule::FullLengthNonPositive { m_plus } => {
                write!(f, "|nu| = n and nu_j = 0 for j in M_+ = {}", one_based(m_plus))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimization {
    pub phi_min: Rational,
    pub mu: Rational,
    pub m_minus: Vec<usize>,
    pub m_zero: Vec<usize>,
    pub m_plus: Vec<usize>,
    pub m_bullet: Vec<usize>,
    pub rule: MinimizerRule,
}

/// Minimum of `φ` over `{ν ∈ N_0^m : |ν| ≤ n}` together with the minimizer characterization.
pub fn minimize_phi(input: &MinimizationInput) -> Result<Minimization> {
    input.validate()?;
    let d: Vec<Rational> = input.sigma.iter().zip(&input.pi).map(|(s, p)| s - p).collect();
    let mu = d.iter().min().expect("m >= 2").clone();
    let idx = |pred: &dyn Fn(&Rational) -> bool| -> Vec<usize> { (0..d.len()).filter(|&j| pred(&d[j])).collect() };
    let m_minus = idx(&|v| v.is_negative());
    let m_zero = idx(&|v| v.is_zero());
    let m_plus = idx(&|v| v.is_positive());
    let m_bullet = idx(&|v| *v == mu);
    let n = Rational::integer(input.n as i64);
    let (phi_min, rule) = if !mu.is_negative() {
        let phi_min = d.iter().map(|v| (v - &n).neg_part()).min().expect("m >= 2");
        let rule = if mu >= n {
            MinimizerRule::AllMinimize
        } else {
            MinimizerRule::FullLengthOneBullet { m_plus: m_plus.clone(), m_bullet: m_bullet.clone() }
        };
        (phi_min, rule)
    } else {
        let phi_min = m_minus.iter().map(|&j| d[j].clone()).sum::<Rational>() - &n;
        (phi_min, MinimizerRule::FullLengthNonPositive { m_plus: m_plus.clone() })
    };
    Ok(Minimization { phi_min, mu, m_minus, m_zero, m_plus, m_bullet, rule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn compositions(m: usize, n: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; m];
        fn go(j: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if j == cur.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..=left {
                cur[j] = v;
                go(j + 1, left - v, cur, out);
            }
            cur[j] = 0;
        }
        go(0, n, &mut cur, &mut out);
        out
    }

    #[test]
    fn realization_examples() {
        let trivial = RealizationInput::new(vec![r(0, 1), r(0, 1)], vec![r(1, 3), r(1, 4)], r(7, 12));
        assert_eq!(realize_exponents(&trivial).unwrap(), vec![r(1, 3), r(1, 4)]);

        let affine = RealizationInput::new(vec![r(1, 2), r(2, 1)], vec![r(3, 4), r(1, 2)], r(3, 4));
        let rho = realize_exponents(&affine).unwrap();
        assert_eq!(rho, vec![r(1, 2), r(1, 4)]);
        assert!(realization_holds(&affine, &rho, true));

        let top = RealizationInput::new(vec![r(1, 2), r(2, 1)], vec![r(3, 4), r(1, 2)], r(5, 4) - r(1, 2));
        assert!(realization_holds(&top, &realize_exponents(&top).unwrap(), false));
    }

    #[test]
    fn realization_upper_endpoint_returns_pi() {
        let inp = RealizationInput::new(vec![r(1, 5), r(1, 1)], vec![r(1, 2), r(1, 3)], r(5, 6) - r(1, 10));
        let out = realize_exponents(&inp).unwrap();
        assert!(realization_holds(&inp, &out, true));
        let inp = RealizationInput::new(vec![r(1, 5), r(1, 10)], vec![r(1, 2), r(1, 3)], r(5, 6));
        assert_eq!(realize_exponents(&inp).unwrap(), vec![r(1, 2), r(1, 3)]);
    }

    #[test]
    fn realization_out_of_range() {
        let inp = RealizationInput::new(vec![r(0, 1), r(1, 10)], vec![r(1, 2), r(1, 3)], r(1, 3));
        assert!(matches!(realize_exponents(&inp), Err(Error::InfeasibleRange(_))));
        let inp = RealizationInput::new(vec![r(1, 1)], vec![r(1, 2), r(1, 3)], r(1, 3));
        assert!(matches!(realize_exponents(&inp), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn minimization_examples() {
        let all = minimize_phi(&MinimizationInput::new(vec![r(5, 1), r(6, 1)], vec![r(1, 1), r(1, 2)], 3)).unwrap();
        assert_eq!(all.phi_min, r(0, 1));
        assert_eq!(all.rule, MinimizerRule::AllMinimize);

        let neg = minimize_phi(&MinimizationInput::new(vec![r(3, 1), r(1, 1)], vec![r(1, 1), r(2, 1)], 2)).unwrap();
        assert_eq!(neg.mu, r(-1, 1));
        assert_eq!(neg.phi_min, r(-3, 1));
        assert_eq!(neg.rule, MinimizerRule::FullLengthNonPositive { m_plus: vec![0] });

        let zero = minimize_phi(&MinimizationInput::new(vec![r(2, 1), r(2, 1)], vec![r(1, 1), r(1, 1)], 1)).unwrap();
        assert_eq!(zero.phi_min, r(0, 1));
        assert_eq!(zero.m_bullet, vec![0, 1]);
    }

    #[test]
    fn minimizer_rule_display() {
        let rule = MinimizerRule::FullLengthOneBullet { m_plus: vec![0, 2], m_bullet: vec![2] };
        assert_eq!(format!("{}", rule), "|nu| = n and nu_j = 0 for j in M_+ = {1, 3} except at most one j in M_bullet = {3}");
    }

    fn rat6() -> impl Strategy<Value = Rational> {
        (1i64..=36, 1i64..=6).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn minimize_matches_brute_force(
            (sigma, pi) in (2usize..=4).prop_flat_map(|m| (prop::collection::vec(rat6(), m), prop::collection::vec(rat6(), m))),
            n in 1u32..=6,
        ) {
            let inp = MinimizationInput::new(sigma.clone(), pi, n);
            let res = minimize_phi(&inp).unwrap();
            let all = compositions(sigma.len(), n);
            let values: Vec<Rational> = all.iter().map(|nu| inp.phi(nu)).collect();
            let best = values.iter().min().unwrap().clone();
            prop_assert_eq!(&res.phi_min, &best);
            for (nu, v) in all.iter().zip(&values) {
                prop_assert_eq!(res.rule.admits(nu, n), *v == best, "nu = {:?}", nu);
            }
        }

        #[test]
        fn realization_satisfies_constraints(
            (sigma, pi) in (1usize..=4).prop_flat_map(|m| (
                prop::collection::vec((0i64..=24, 1i64..=12).prop_map(|(a, b)| Rational::new(a, b)), m),
                prop::collection::vec((1i64..=11, 12i64..=12).prop_map(|(a, b)| Rational::new(a, b)), m),
            )),
            t in 0i64..=24,
        ) {
            let probe = RealizationInput::new(sigma.clone(), pi.clone(), Rational::zero());
            let (lo, hi) = (probe.lower(), probe.upper());
            let rho = &lo + (&hi - &lo) * Rational::new(t, 24);
            prop_assume!(rho.is_positive() && rho < Rational::one());
            let inp = RealizationInput::new(sigma, pi, rho);
            let out = realize_exponents(&inp).unwrap();
            prop_assert!(realization_holds(&inp, &out, inp.is_strict()));
        }
    }
}
