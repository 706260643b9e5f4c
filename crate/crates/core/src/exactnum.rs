//! Exact arithmetic in a real quadratic field `Q(sqrt(d))`.
//!
//! Every geometric predicate in this crate reduces to sign tests on numbers of
//! the form `a + b*sqrt(d)` with `a`, `b` rational and `d` a fixed square-free
//! integer.  [`QuadNum`] stores such numbers exactly and decides sign, order,
//! and floor without floating point.  Values are immutable and cheap to clone
//! relative to the comparison work done on them.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("mismatched field discriminants: {left} vs {right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a positive square-free integer >= 2")]
    BadDiscriminant(u64),
    #[error("cannot parse quadratic number from {0:?}")]
    Parse(String),
}

/// Returns true if `d` has no repeated prime factor.
pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Splits `n > 0` as `s^2 * d` with `d` square-free; returns `(s, d)`.
pub fn square_free_decompose(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut d = n;
    let mut p = 2u64;
    while p * p <= d {
        while d % (p * p) == 0 {
            d /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, d)
}

/// An element `a + b*sqrt(d)` of the real quadratic field `Q(sqrt(d))`.
///
/// `d` is carried per value and checked on every binary operation, which
/// keeps values from different fields from being silently combined.  The
/// rationals are kept in lowest terms with positive denominator by
/// `BigRational` itself.
#[derive(Clone)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    d: u64,
    /// Cached one-rounding approximation, rebuilt from the exact parts at
    /// every construction; used only as a sound filter for sign and order.
    approx: f64,
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.d == other.d
    }
}

impl Eq for QuadNum {}

impl Hash for QuadNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.d.hash(state);
    }
}

impl QuadNum {
    fn make(a: BigRational, b: BigRational, d: u64) -> Self {
        let approx = rat_f64(&a) + rat_f64(&b) * (d as f64).sqrt();
        QuadNum { a, b, d, approx }
    }

    /// Builds `a + b*sqrt(d)`.  `d` must be square-free and at least 2.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self, ExactError> {
        if d < 2 || !is_square_free(d) {
            return Err(ExactError::BadDiscriminant(d));
        }
        Ok(QuadNum::make(a, b, d))
    }

    /// A rational element of `Q(sqrt(d))`.
    pub fn rational(a: BigRational, d: u64) -> Self {
        QuadNum::new(a, BigRational::zero(), d).expect("bad discriminant")
    }

    pub fn from_integer(n: i64, d: u64) -> Self {
        QuadNum::rational(BigRational::from_integer(BigInt::from(n)), d)
    }

    /// Convenience constructor from integer fractions: `an/ad + bn/bd * sqrt(d)`.
    pub fn of(an: i64, ad: i64, bn: i64, bd: i64, d: u64) -> Self {
        let a = BigRational::new(BigInt::from(an), BigInt::from(ad));
        let b = BigRational::new(BigInt::from(bn), BigInt::from(bd));
        QuadNum::new(a, b, d).expect("bad discriminant")
    }

    pub fn zero(d: u64) -> Self {
        QuadNum::from_integer(0, d)
    }

    pub fn one(d: u64) -> Self {
        QuadNum::from_integer(1, d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// The Galois conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        QuadNum::make(self.a.clone(), -self.b.clone(), self.d)
    }

    fn check_field(&self, other: &Self) -> Result<(), ExactError> {
        if self.d != other.d {
            Err(ExactError::FieldMismatch {
                left: self.d,
                right: other.d,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        Ok(QuadNum::make(
            &self.a + &other.a,
            &self.b + &other.b,
            self.d,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        Ok(QuadNum::make(
            &self.a - &other.a,
            &self.b - &other.b,
            self.d,
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        let d = BigRational::from_integer(BigInt::from(self.d));
        Ok(QuadNum::make(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            self.d,
        ))
    }

    /// Division via multiplication by the conjugate; the field norm
    /// `a^2 - d*b^2` of a nonzero element is never zero.
    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_field(other)?;
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let d = BigRational::from_integer(BigInt::from(self.d));
        let norm = &other.a * &other.a - &other.b * &other.b * &d;
        debug_assert!(!norm.is_zero(), "nonzero element with zero norm");
        let num = self.try_mul(&other.conjugate())?;
        Ok(QuadNum::make(num.a / &norm, num.b / &norm, self.d))
    }

    /// Exact sign: -1, 0, or +1.
    ///
    /// When the rational and radical parts disagree in sign the comparison
    /// `|a| <> |b|*sqrt(d)` is decided by squaring, which stays rational.
    pub fn signum(&self) -> i32 {
        // Sound fast path: the cached approximation carries at most a few
        // rounding errors relative to the term magnitudes.
        if self.approx.is_finite() {
            let scale = rat_f64(&self.a).abs() + rat_f64(&self.b).abs() * (self.d as f64).sqrt();
            if self.approx.abs() > 1e-9 * (scale + 1.0) {
                return if self.approx > 0.0 { 1 } else { -1 };
            }
        }
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) => s,
            (0, s) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            _ => {
                let d = BigRational::from_integer(BigInt::from(self.d));
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * &d;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    // a^2 = d*b^2 with b != 0 would make sqrt(d) rational.
                    Ordering::Equal => 0,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Greatest integer `n <= self`, decided exactly.
    ///
    /// For irrational values we sandwich `sqrt(d)` between dyadic rationals of
    /// increasing precision; since the value is irrational the two candidate
    /// floors eventually agree.  The result is verified by two sign tests.
    pub fn floor(&self) -> BigInt {
        let n = if self.b.is_zero() {
            self.a.floor().to_integer()
        } else if self.approx.is_finite() && self.approx.abs() < 9e17 {
            // Start from the approximation and correct by exact sign tests;
            // the cached value is within rounding error so this moves at
            // most a step or two.
            let mut n = BigInt::from(self.approx.floor() as i64);
            loop {
                let nq = QuadNum::rational(BigRational::from_integer(n.clone()), self.d);
                if self.try_sub(&nq).unwrap().signum() < 0 {
                    n -= 1;
                    continue;
                }
                let n1 = QuadNum::rational(BigRational::from_integer(&n + 1), self.d);
                if self.try_sub(&n1).unwrap().signum() >= 0 {
                    n += 1;
                    continue;
                }
                break n;
            }
        } else {
            let mut bits = 16u32;
            loop {
                let scale = BigInt::one() << bits;
                let rad = (BigInt::from(self.d) * &scale * &scale).sqrt();
                let lo_rad = BigRational::new(rad.clone(), scale.clone());
                let hi_rad = BigRational::new(rad + 1, scale.clone());
                let (blo, bhi) = if self.b.is_positive() {
                    (&self.b * &lo_rad, &self.b * &hi_rad)
                } else {
                    (&self.b * &hi_rad, &self.b * &lo_rad)
                };
                let lo = (&self.a + blo).floor().to_integer();
                let hi = (&self.a + bhi).floor().to_integer();
                if lo == hi {
                    break lo;
                }
                bits *= 2;
            }
        };
        debug_assert!({
            let nq = QuadNum::rational(BigRational::from_integer(n.clone()), self.d);
            self.try_sub(&nq).unwrap().signum() >= 0 && {
                let n1 = QuadNum::rational(BigRational::from_integer(&n + 1), self.d);
                self.try_sub(&n1).unwrap().signum() < 0
            }
        });
        n
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Floating approximation, for display and fast-path ordering only.
    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    /// Decimal expansion truncated towards minus infinity, exact in every
    /// printed digit.  Used for SVG coordinates.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = QuadNum::make(
            &self.a * BigRational::from_integer(scale.clone()),
            &self.b * BigRational::from_integer(scale.clone()),
            self.d,
        );
        let n = scaled.floor();
        let negative = n.is_negative();
        let mag = n.abs();
        let (int, frac) = (mag.clone() / &scale, mag % &scale);
        let frac_str = format!("{:0>width$}", frac.to_string(), width = digits as usize);
        let sign = if negative { "-" } else { "" };
        format!("{sign}{int}.{frac_str}")
    }

    /// Exact comparison; both operands must live in the same field.
    ///
    /// Values far apart in the cached approximations are ordered without
    /// exact work; the guard band is nine orders of magnitude above the
    /// approximation error.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.check_field(other)
            .expect("comparing values from different quadratic fields");
        if self.approx.is_finite() && other.approx.is_finite() {
            let gap = self.approx - other.approx;
            let guard = 1e-9 * (self.approx.abs() + other.approx.abs() + 1.0);
            if gap.abs() > guard {
                return if gap > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        match self.try_sub(other).unwrap().signum() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for &QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                self.$try(rhs).expect("quadratic field arithmetic error")
            }
        }
        impl $trait for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$try(&rhs).expect("quadratic field arithmetic error")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::make(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

impl fmt::Display for QuadNum {
    /// Renders as `a/b + c/e*sqrt(d)`, always with explicit denominators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} + {}/{}*sqrt({})",
            self.a.numer(),
            self.a.denom(),
            self.b.numer(),
            self.b.denom(),
            self.d
        )
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{:.6})", self, self.to_f64())
    }
}

impl FromStr for QuadNum {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ExactError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        // Split "<rat>+<rat>*sqrt(<d>)", keeping a possible leading minus.
        let (head, tail) = split_top_level_plus(&compact).ok_or_else(err)?;
        let a = parse_rational(head).ok_or_else(err)?;
        let (b_str, d_str) = tail.split_once("*sqrt(").ok_or_else(err)?;
        let d_str = d_str.strip_suffix(')').ok_or_else(err)?;
        let b = parse_rational(b_str).ok_or_else(err)?;
        let d: u64 = d_str.parse().map_err(|_| err())?;
        QuadNum::new(a, b, d)
    }
}

fn split_top_level_plus(s: &str) -> Option<(&str, &str)> {
    // The separating '+' is the first one after position zero.
    let idx = s.char_indices().skip(1).find(|&(_, c)| c == '+')?.0;
    Some((&s[..idx], &s[idx + 1..]))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}
