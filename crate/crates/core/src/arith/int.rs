//! 64-bit number theory: primality, factorization, Legendre symbols.
//!
//! Primality uses Miller-Rabin with the first twelve prime bases, which is
//! deterministic for every 64-bit input. Factorization strips small primes by
//! trial division and splits the cofactor with Brent's variant of Pollard rho.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest input accepted by [`factor`].
pub const FACTOR_CAP: u64 = 1 << 63;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Residue of a signed integer modulo `m`, in `[0, m)`.
#[inline]
pub fn rem_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol `(a | p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre(a: i128, p: u64) -> i32 {
    let r = rem_i128(a, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of `a` modulo the odd prime `p` (Tonelli-Shanks), returning
/// the smaller of the two roots.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factor(n).factors.iter().all(|&(_, e)| e == 1)
}

/// Complete prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub input: u64,
    /// `(prime, exponent)` pairs in ascending prime order.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn recompose(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Factor `n`. Inputs above 2^63 are outside the supported range and are
/// better routed through [`factor_u128`], which reports them as errors.
pub fn factor(n: u64) -> Factorization {
    assert!(n >= 1, "factor: input must be positive");
    let mut acc = BTreeMap::new();
    let mut m = n;
    for &p in &SMALL_PRIMES {
        while m % p == 0 {
            *acc.entry(p).or_insert(0u32) += 1;
            m /= p;
        }
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            *acc.entry(x).or_insert(0) += 1;
            continue;
        }
        let d = brent_rho(x);
        stack.push(d);
        stack.push(x / d);
    }
    Factorization { input: n, factors: acc.into_iter().collect() }
}

/// Factor a 128-bit value, rejecting anything above [`FACTOR_CAP`].
pub fn factor_u128(n: u128) -> Result<Factorization> {
    if n == 0 || n > FACTOR_CAP as u128 {
        return Err(Error::FactorCap(n));
    }
    Ok(factor(n as u64))
}

/// Nontrivial divisor of an odd composite `n` with no prime factor below 100.
fn brent_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    // Perfect squares defeat rho when both cycles coincide; handle them up front.
    let r = isqrt(n);
    if r * r == n {
        return r;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut q, mut g) = (2u64, 1u64, 1u64);
        let mut r = 1u64;
        let m = 128u64;
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factor(n)
        .factors
        .iter()
        .fold(1, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Multiplicative order of `a` modulo `m`, for `gcd(a, m) = 1`.
pub fn order_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut ord = totient(m);
    for (p, _) in factor(ord).factors {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Primes in `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_examples() {
        assert!(!is_prime(1));
        assert!(is_prime(105649));
        assert!(!is_prime(140751431));
        assert_eq!(2879 * 48889, 140751431);
        assert!(is_prime((1u64 << 61) - 1));
        // strong pseudoprime to bases 2..=37 would be > 3.3e24; spot-check a Carmichael number
        assert!(!is_prime(561));
    }

    #[test]
    fn factor_examples() {
        assert!(factor(1).factors.is_empty());
        assert_eq!(factor(640).factors, vec![(2, 7), (5, 1)]);
        assert_eq!(
            factor(504453128704).factors,
            vec![(2, 9), (7, 1), (2879, 1), (48889, 1)]
        );
        let f = factor(9223372036854775783);
        assert_eq!(f.recompose(), 9223372036854775783);
    }

    #[test]
    fn factor_square_of_large_prime() {
        let p = 3037000493u64; // prime just below 2^31.5
        let f = factor(p * p);
        assert_eq!(f.factors, vec![(p, 2)]);
    }

    #[test]
    fn factor_cap_is_enforced() {
        assert!(matches!(factor_u128(1u128 << 64), Err(Error::FactorCap(_))));
        assert!(factor_u128(0).is_err());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(0, 7), 0);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(-7, 11), 1);
    }

    #[test]
    fn sqrt_mod_smallest_root() {
        assert_eq!(sqrt_mod(4, 5), Some(2));
        assert_eq!(sqrt_mod(12, 13), Some(5));
        assert_eq!(sqrt_mod(3, 7), None);
        for p in [97u64, 193, 257, 65537] {
            for a in 1..50 {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a % p);
                    assert!(r <= p - r);
                }
            }
        }
    }

    #[test]
    fn order_mod_examples() {
        assert_eq!(order_mod(3, 128), 32);
        assert_eq!(order_mod(127, 128), 2);
        assert_eq!(order_mod(2, 13), 12);
    }
}
