//! The imaginary quadratic field `K = Q(sqrt(-D))` and its integers
//! `x + y*sqrt(-D)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::fq::{FqElem, FqField};
use super::int::{is_prime, is_squarefree, legendre, rem_i128, sqrt_mod};
use crate::{Error, Result};

/// `x + y*sqrt(-d)`. Arithmetic between values with different `d` panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    pub x: i128,
    pub y: i128,
    pub d: u64,
}

impl QuadInt {
    pub fn new(x: i128, y: i128, d: u64) -> Self {
        debug_assert!(d > 0);
        QuadInt { x, y, d }
    }

    pub fn rational(x: i128, d: u64) -> Self {
        QuadInt { x, y: 0, d }
    }

    pub fn zero(d: u64) -> Self {
        QuadInt { x: 0, y: 0, d }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn is_real(&self) -> bool {
        self.y == 0
    }

    pub fn conj(&self) -> Self {
        QuadInt { y: -self.y, ..*self }
    }

    /// `x^2 + D*y^2`, with overflow reported instead of wrapped.
    pub fn norm(&self) -> Result<u128> {
        let x2 = self.x.checked_mul(self.x);
        let dy2 = self
            .y
            .checked_mul(self.y)
            .and_then(|v| v.checked_mul(self.d as i128));
        match (x2, dy2) {
            (Some(a), Some(b)) => a
                .checked_add(b)
                .map(|n| n as u128)
                .ok_or(Error::Overflow("norm")),
            _ => Err(Error::Overflow("norm")),
        }
    }

    pub fn checked_add(self, rhs: Self) -> Option<Self> {
        debug_assert_eq!(self.d, rhs.d);
        Some(QuadInt {
            x: self.x.checked_add(rhs.x)?,
            y: self.y.checked_add(rhs.y)?,
            d: self.d,
        })
    }

    pub fn checked_sub(self, rhs: Self) -> Option<Self> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_neg(self) -> Option<Self> {
        Some(QuadInt { x: self.x.checked_neg()?, y: self.y.checked_neg()?, d: self.d })
    }

    pub fn checked_mul(self, rhs: Self) -> Option<Self> {
        assert_eq!(self.d, rhs.d, "QuadInt: mismatched fields");
        let d = self.d as i128;
        let xx = self.x.checked_mul(rhs.x)?;
        let yy = self.y.checked_mul(rhs.y)?.checked_mul(d)?;
        let xy = self.x.checked_mul(rhs.y)?;
        let yx = self.y.checked_mul(rhs.x)?;
        Some(QuadInt { x: xx.checked_sub(yy)?, y: xy.checked_add(yx)?, d: self.d })
    }

    pub fn checked_scale(self, k: i128) -> Option<Self> {
        Some(QuadInt { x: self.x.checked_mul(k)?, y: self.y.checked_mul(k)?, d: self.d })
    }

    pub fn checked_pow(self, e: u32) -> Option<Self> {
        let mut acc = QuadInt::rational(1, self.d);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }

    /// Divide by `p` as long as both coordinates stay integral.
    pub fn strip_rational_factor(mut self, p: i128) -> Self {
        if self.is_zero() || p.abs() <= 1 {
            return self;
        }
        while self.x % p == 0 && self.y % p == 0 {
            self.x /= p;
            self.y /= p;
        }
        self
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("QuadInt addition overflow")
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("QuadInt subtraction overflow")
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("QuadInt multiplication overflow")
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> Self {
        self.checked_neg().expect("QuadInt negation overflow")
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = if self.d == 1 { "i".to_string() } else { format!("sqrt(-{})", self.d) };
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, y) => write!(f, "{y}*{root}"),
            (x, y) if y < 0 => write!(f, "{x} - {}*{root}", -y),
            (x, y) => write!(f, "{x} + {y}*{root}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

impl SplittingType {
    /// Degree `t` of the residue field `F_{l^t}` holding the coefficients.
    pub fn residue_degree(self) -> usize {
        match self {
            SplittingType::Inert => 2,
            _ => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SplittingType::Split => "split",
            SplittingType::Inert => "inert",
            SplittingType::Ramified => "ramified",
        }
    }
}

pub fn check_discriminant(d: u64) -> Result<()> {
    if d == 0 || !is_squarefree(d) {
        return Err(Error::BadDiscriminant(d));
    }
    Ok(())
}

/// Decomposition of the odd prime `ell` in `Q(sqrt(-d))`.
pub fn splitting(d: u64, ell: u64) -> Result<SplittingType> {
    check_discriminant(d)?;
    if ell == 2 || !is_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    Ok(match legendre(-(d as i128), ell) {
        0 => SplittingType::Ramified,
        1 => SplittingType::Split,
        _ => SplittingType::Inert,
    })
}

/// The residue field of `K` at a prime above `ell`, together with the fixed
/// image of `sqrt(-D)` in it.
///
/// Split primes use `F_l` and the smallest nonnegative root of `-D mod l`;
/// inert primes use `F_{l^2}` and the smallest root of `X^2 + D` there
/// (ordered by coefficient vector).
#[derive(Debug, Clone)]
pub struct Reduction {
    pub d: u64,
    pub ell: u64,
    pub splitting: SplittingType,
    pub field: std::sync::Arc<FqField>,
    pub sqrt_minus_d: FqElem,
}

impl Reduction {
    pub fn new(d: u64, ell: u64) -> Result<Self> {
        Self::with_swap(d, ell, false)
    }

    /// As [`Reduction::new`], but for split primes optionally use the other
    /// embedding `sqrt(-D) -> l - r`.
    pub fn with_swap(d: u64, ell: u64, swap: bool) -> Result<Self> {
        let splitting = splitting(d, ell)?;
        match splitting {
            SplittingType::Ramified => Err(Error::Ramified { ell, d }),
            SplittingType::Split => {
                let field = FqField::new(ell, 1)?;
                let r = sqrt_mod(ell - d % ell, ell).expect("split prime has a root");
                let r = if swap { (ell - r) % ell } else { r };
                let sqrt_minus_d = field.from_u64(r);
                Ok(Reduction { d, ell, splitting, field, sqrt_minus_d })
            }
            SplittingType::Inert => {
                let field = FqField::new(ell, 2)?;
                let minus_d = field.from_u64(ell - d % ell);
                let s = field.sqrt(minus_d).ok_or(Error::NoSquareRoot)?;
                Ok(Reduction { d, ell, splitting, field, sqrt_minus_d: s })
            }
        }
    }

    pub fn reduce_int(&self, n: i128) -> FqElem {
        self.field.from_u64(rem_i128(n, self.ell))
    }

    pub fn reduce(&self, q: &QuadInt) -> FqElem {
        assert_eq!(q.d, self.d, "reduce: field mismatch");
        let x = self.reduce_int(q.x);
        let y = self.reduce_int(q.y);
        self.field.add(x, self.field.mul(y, self.sqrt_minus_d))
    }
}

/// Reduce `q` modulo the fixed prime above the unramified odd prime `ell`.
pub fn reduce_quadint(q: &QuadInt, ell: u64) -> Result<(std::sync::Arc<FqField>, FqElem)> {
    let red = Reduction::new(q.d, ell)?;
    let e = red.reduce(q);
    Ok((red.field, e))
}
