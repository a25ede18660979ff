//! Affine point counts on the surfaces `S_a : t^2 = xy(x^2-1)(y^2-1)(x^2-y^2+axy)`.
//!
//! Counting stops at raw affine counts: no trace extraction is attempted.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::int::{factor, is_prime};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceParams {
    pub a: i64,
}

impl SurfaceParams {
    pub fn new(a: i64) -> Result<Self> {
        if a == 0 {
            return Err(Error::Invalid("surface parameter a must be nonzero".into()));
        }
        Ok(SurfaceParams { a })
    }

    /// The automorphism `(x, y, t) -> (y, -x, t)`.
    pub fn phi(x: i64, y: i64) -> (i64, i64) {
        (y, -x)
    }

    /// The sextic `f(x, y)` reduced mod `p`.
    pub fn sextic_mod(&self, x: u64, y: u64, p: u64) -> u64 {
        let p128 = p as u128;
        let (x, y) = (x as u128 % p128, y as u128 % p128);
        let a = self.a.rem_euclid(p as i64) as u128;
        let m = |u: u128, v: u128| u * v % p128;
        let x2 = m(x, x);
        let y2 = m(y, y);
        let f1 = (x2 + p128 - 1) % p128;
        let f2 = (y2 + p128 - 1) % p128;
        let f3 = (x2 + p128 - y2 + m(a, m(x, y))) % p128;
        m(m(m(x, y), m(f1, f2)), f3) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub a: i64,
    pub p: u64,
    pub affine_count: u64,
    pub character_sum: i64,
    /// `p` divides `2a(a^2 + 4)`.
    pub bad: bool,
}

/// Prime radical of `|2a(a^2 + 4)|`.
pub fn bad_primes(a: i64) -> Result<BTreeSet<u64>> {
    SurfaceParams::new(a)?;
    let a = a.unsigned_abs();
    let mut s: BTreeSet<u64> = factor(a).primes().collect();
    s.insert(2);
    let q = a
        .checked_mul(a)
        .and_then(|v| v.checked_add(4))
        .filter(|&v| v <= crate::arith::int::FACTOR_CAP)
        .ok_or(Error::Overflow("a^2 + 4"))?;
    s.extend(factor(q).primes());
    Ok(s)
}

/// `p^2 + sum legendre(f(x, y))` over `F_p^2`, using a table of squares.
pub fn count_affine(a: i64, p: u64) -> Result<PointCount> {
    let s = SurfaceParams::new(a)?;
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p > 1 << 20 {
        return Err(Error::Invalid(format!("p = {p} too large for exhaustive counting")));
    }
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for u in 1..p {
        chi[(u * u % p) as usize] = 1;
    }
    let mut sum = 0i64;
    for x in 0..p {
        for y in 0..p {
            sum += chi[s.sextic_mod(x, y, p) as usize] as i64;
        }
    }
    let count = (p * p) as i64 + sum;
    Ok(PointCount {
        a,
        p,
        affine_count: count as u64,
        character_sum: sum,
        bad: bad_primes(a)?.contains(&p),
    })
}
