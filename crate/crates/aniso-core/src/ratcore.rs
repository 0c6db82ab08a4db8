//! Exact rationals and affine forms `a + b·x` in the symbolic parameter `x = 1/p`.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn sign(&self) -> Sign {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => Sign::Neg,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Pos,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Integer value if this is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// True if `self = k·d` for some integer `k ≥ 0` (`d > 0`).
    pub fn is_nonneg_multiple_of(&self, d: u64) -> bool {
        if self.is_negative() {
            return false;
        }
        let q = self / &Rational::integer(d as i64);
        q.is_integer()
    }

    /// True if `self = k·d` for some integer `k ≥ 1` (`d > 0`).
    pub fn is_pos_multiple_of(&self, d: u64) -> bool {
        self.is_positive() && self.is_nonneg_multiple_of(d)
    }

    /// `[a]_⊕ = max(a, 0)`.
    pub fn pos_part(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            Rational::zero()
        }
    }

    /// `[a]_⊖ = min(a, 0)`.
    pub fn neg_part(&self) -> Self {
        if self.is_negative() {
            self.clone()
        } else {
            Rational::zero()
        }
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Rational) -> Self {
        (self + other) / Rational::integer(2)
    }
}

/// Sign of a rational quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Failure to read a rational literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed rational literal `{}`", self.0)
    }
}

impl core::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(String::from(s));
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_bigints(num, den))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Least common multiple of a nonempty list of positive integers.
pub fn lcm_all(values: &[u64]) -> u64 {
    values.iter().fold(1u64, |acc, &v| acc.lcm(&v))
}

/// Affine form `constant + slope·x`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineExpr {
    pub constant: Rational,
    pub slope: Rational,
}

impl AffineExpr {
    pub fn new(constant: Rational, slope: Rational) -> Self {
        AffineExpr { constant, slope }
    }

    pub fn constant(c: Rational) -> Self {
        AffineExpr { constant: c, slope: Rational::zero() }
    }

    /// The symbol `x` itself.
    pub fn var() -> Self {
        AffineExpr { constant: Rational::zero(), slope: Rational::one() }
    }

    pub fn zero() -> Self {
        AffineExpr::default()
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        if self.is_constant() {
            Some(&self.constant)
        } else {
            None
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.constant + &self.slope * x
    }

    /// Substitutes `x`, returning a constant form.
    pub fn subst(&self, x: &Rational) -> AffineExpr {
        AffineExpr::constant(self.eval(x))
    }

    pub fn scale(&self, c: &Rational) -> AffineExpr {
        AffineExpr { constant: &self.constant * c, slope: &self.slope * c }
    }

    /// Unique zero of a non-constant form.
    pub fn root(&self) -> Option<Rational> {
        if self.is_constant() {
            None
        } else {
            Some(-(&self.constant) / &self.slope)
        }
    }
}

impl fmt::Debug for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_zero() {
            return write!(f, "{}", self.constant);
        }
        let mag = self.slope.abs();
        let coef = if mag == Rational::one() { String::new() } else { alloc::format!("({})", mag) };
        if self.constant.is_zero() {
            let sign = if self.slope.is_negative() { "-" } else { "" };
            write!(f, "{}{}x", sign, coef)
        } else {
            let sign = if self.slope.is_negative() { '-' } else { '+' };
            write!(f, "{} {} {}x", self.constant, sign, coef)
        }
    }
}

impl From<Rational> for AffineExpr {
    fn from(c: Rational) -> Self {
        AffineExpr::constant(c)
    }
}

impl Add<&AffineExpr> for &AffineExpr {
    type Output = AffineExpr;
    fn add(self, rhs: &AffineExpr) -> AffineExpr {
        AffineExpr { constant: &self.constant + &rhs.constant, slope: &self.slope + &rhs.slope }
    }
}

impl Sub<&AffineExpr> for &AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: &AffineExpr) -> AffineExpr {
        AffineExpr { constant: &self.constant - &rhs.constant, slope: &self.slope - &rhs.slope }
    }
}

impl Add for AffineExpr {
    type Output = AffineExpr;
    fn add(self, rhs: AffineExpr) -> AffineExpr {
        &self + &rhs
    }
}

impl Sub for AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: AffineExpr) -> AffineExpr {
        &self - &rhs
    }
}

impl Neg for &AffineExpr {
    type Output = AffineExpr;
    fn neg(self) -> AffineExpr {
        AffineExpr { constant: -&self.constant, slope: -&self.slope }
    }
}

impl Sum for AffineExpr {
    fn sum<I: Iterator<Item = AffineExpr>>(iter: I) -> Self {
        iter.fold(AffineExpr::zero(), |a, b| a + b)
    }
}

/// Sign pattern of `lhs − rhs` over `x ∈ (0,1)`.
///
/// `cells[i]` is the sign on the open cell between consecutive breakpoints
/// (with 0 and 1 as outer bounds); `at_breakpoints[i]` the sign at `breakpoints[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignPartition {
    pub breakpoints: Vec<Rational>,
    pub cells: Vec<Sign>,
    pub at_breakpoints: Vec<Sign>,
}

impl SignPartition {
    /// Sign at an arbitrary point of `(0,1)`.
    pub fn sign_at(&self, x: &Rational) -> Sign {
        for (i, b) in self.breakpoints.iter().enumerate() {
            match x.cmp(b) {
                Ordering::Less => return self.cells[i],
                Ordering::Equal => return self.at_breakpoints[i],
                Ordering::Greater => {}
            }
        }
        *self.cells.last().expect("partition has at least one cell")
    }

    /// Whether `lhs < rhs` (strict) or `lhs ≤ rhs` holds at `x`.
    pub fn holds(&self, x: &Rational, strict: bool) -> bool {
        match self.sign_at(x) {
            Sign::Neg => true,
            Sign::Zero => !strict,
            Sign::Pos => false,
        }
    }
}

/// Partitions `(0,1)` into cells where `lhs < rhs`, `lhs = rhs`, `lhs > rhs`.
pub fn affine_compare(lhs: &AffineExpr, rhs: &AffineExpr) -> SignPartition {
    let d = lhs - rhs;
    let zero = Rational::zero();
    let one = Rational::one();
    match d.root() {
        Some(r) if r > zero && r < one => {
            let left = d.eval(&(&r / Rational::integer(2))).sign();
            let right = d.eval(&r.midpoint(&one)).sign();
            SignPartition { breakpoints: alloc::vec![r], cells: alloc::vec![left, right], at_breakpoints: alloc::vec![Sign::Zero] }
        }
        _ => {
            let s = d.eval(&Rational::new(1, 2)).sign();
            SignPartition { breakpoints: Vec::new(), cells: alloc::vec![s], at_breakpoints: Vec::new() }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn canonical_form() {
        let a = r(6, -4);
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(a, r(-3, 2));
        assert_eq!(alloc::format!("{}", a), "-3/2");
        assert_eq!(alloc::format!("{}", r(4, 2)), "2");
    }

    #[test]
    fn parse_literals() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), r(3, 4));
        assert_eq!("-5".parse::<Rational>().unwrap(), r(-5, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/2".parse::<Rational>().is_err());
    }

    #[test]
    fn multiples() {
        assert!(r(4, 1).is_nonneg_multiple_of(2));
        assert!(Rational::zero().is_nonneg_multiple_of(2));
        assert!(!Rational::zero().is_pos_multiple_of(2));
        assert!(!r(3, 1).is_nonneg_multiple_of(2));
        assert!(!r(1, 2).is_nonneg_multiple_of(1));
    }

    #[test]
    fn compare_identical_is_zero_everywhere() {
        let p = affine_compare(&AffineExpr::var(), &AffineExpr::var());
        assert!(p.breakpoints.is_empty());
        assert_eq!(p.cells, alloc::vec![Sign::Zero]);
    }

    #[test]
    fn compare_index_threshold() {
        let lhs = AffineExpr::new(r(1, 2), r(-5, 2));
        let p = affine_compare(&lhs, &AffineExpr::zero());
        assert_eq!(p.breakpoints, alloc::vec![r(1, 5)]);
        assert_eq!(p.cells, alloc::vec![Sign::Pos, Sign::Neg]);
        assert_eq!(p.at_breakpoints, alloc::vec![Sign::Zero]);
    }

    #[test]
    fn compare_crossing_at_half() {
        let lhs = AffineExpr::new(r(1, 1), r(-2, 1));
        let rhs = AffineExpr::new(r(1, 2), r(-1, 1));
        let p = affine_compare(&lhs, &rhs);
        assert_eq!(p.breakpoints, alloc::vec![r(1, 2)]);
        assert_eq!(p.cells, alloc::vec![Sign::Pos, Sign::Neg]);
    }

    #[test]
    fn root_outside_unit_interval_gives_single_cell() {
        let lhs = AffineExpr::new(r(2, 1), r(-1, 1));
        let p = affine_compare(&lhs, &AffineExpr::zero());
        assert!(p.breakpoints.is_empty());
        assert_eq!(p.cells, alloc::vec![Sign::Pos]);
    }

    #[test]
    fn display_affine() {
        assert_eq!(alloc::format!("{}", AffineExpr::new(r(1, 1), r(-1, 1))), "1 - x");
        assert_eq!(alloc::format!("{}", AffineExpr::new(r(1, 2), r(-5, 2))), "1/2 - (5/2)x");
        assert_eq!(alloc::format!("{}", AffineExpr::var()), "x");
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..60).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn compare_agrees_with_evaluation(
            c0 in arb_rat(), s0 in arb_rat(), c1 in arb_rat(), s1 in arb_rat(),
            xs in proptest::collection::vec((1i64..1000, 1001i64..1002), 1000),
        ) {
            let lhs = AffineExpr::new(c0, s0);
            let rhs = AffineExpr::new(c1, s1);
            let part = affine_compare(&lhs, &rhs);
            for (n, d) in xs {
                let x = Rational::new(n, d);
                let direct = (lhs.eval(&x) - rhs.eval(&x)).sign();
                prop_assert_eq!(part.sign_at(&x), direct);
            }
            for b in &part.breakpoints {
                prop_assert_eq!(lhs.eval(b), rhs.eval(b));
            }
        }
    }
}
