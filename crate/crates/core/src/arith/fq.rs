//! Finite fields `F_{l^k}` for odd `l < 2^32` and `k` in {1, 2, 3, 4, 6}.
//!
//! Every field is `F_l[x]/(m(x))` where `m` is the lexicographically smallest
//! monic irreducible polynomial of degree `k`, comparing coefficient vectors
//! from the constant term upwards. Two runs therefore always build the same
//! field with the same element encoding.
//!
//! The degree restriction keeps every cyclotomic factor `Phi_d(l)` of
//! `l^k - 1` below 2^63, so multiplicative orders only need 64-bit
//! factorization.

use std::fmt;
use std::sync::{Arc, OnceLock};

use super::int::{factor, is_prime, mul_mod, pow_mod};
use super::poly::{self, Poly};
use crate::{Error, Result};

pub const MAX_DEGREE: usize = 6;
const SUPPORTED_DEGREES: [usize; 6] = [1, 2, 3, 4, 5, 6];

/// Coefficients of an element in the power basis `1, x, ..., x^{k-1}`.
/// Unused slots are always zero, so derived equality and ordering agree with
/// the coefficient-vector order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem {
    pub c: [u64; MAX_DEGREE],
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.c.iter().rposition(|&v| v != 0).unwrap_or(0);
        write!(f, "{:?}", &self.c[..=last])
    }
}

pub struct FqField {
    p: u64,
    k: usize,
    /// Monic modulus, low to high, length `k + 1`.
    modulus: Vec<u64>,
    order: u128,
    unit_factors: OnceLock<Vec<(u64, u32)>>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.modulus)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FqField {}

impl FqField {
    /// Build `F_{p^k}` with the deterministic modulus.
    pub fn new(p: u64, k: usize) -> Result<Arc<FqField>> {
        if p == 2 || !is_prime(p) || p >= 1 << 32 {
            return Err(Error::NotOddPrime(p));
        }
        // degree 5 needs Phi_5(p) < 2^63 for the unit group factorization
        if !SUPPORTED_DEGREES.contains(&k) || (k == 5 && p >= 1 << 15) {
            return Err(Error::UnsupportedDegree(k));
        }
        let prime = Arc::new(Self::raw(p, 1, vec![0, 1]));
        if k == 1 {
            return Ok(prime);
        }
        let modulus = smallest_irreducible(&prime, k);
        Ok(Arc::new(Self::raw(p, k, modulus)))
    }

    fn raw(p: u64, k: usize, modulus: Vec<u64>) -> FqField {
        FqField { p, k, modulus, order: (p as u128).pow(k as u32), unit_factors: OnceLock::new() }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem::default()
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> FqElem {
        let mut e = FqElem::default();
        e.c[0] = v % self.p;
        e
    }

    pub fn from_i128(&self, v: i128) -> FqElem {
        self.from_u64(v.rem_euclid(self.p as i128) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        assert!(coeffs.len() <= self.k, "too many coefficients for F_{}^{}", self.p, self.k);
        let mut e = FqElem::default();
        for (slot, &v) in e.c.iter_mut().zip(coeffs) {
            *slot = v % self.p;
        }
        e
    }

    /// The generator class `x` of the power basis.
    pub fn generator(&self) -> FqElem {
        if self.k == 1 {
            // F_p = F_p[x]/(x): the class of x is 0.
            return self.zero();
        }
        self.from_coeffs(&[0, 1])
    }

    /// Element whose coefficient vector is the base-`p` expansion of `n`.
    pub fn from_index(&self, mut n: u128) -> FqElem {
        let mut e = FqElem::default();
        for slot in e.c.iter_mut().take(self.k) {
            *slot = (n % self.p as u128) as u64;
            n /= self.p as u128;
        }
        e
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order).map(|n| self.from_index(n))
    }

    pub fn is_zero(&self, a: FqElem) -> bool {
        a == FqElem::default()
    }

    pub fn is_one(&self, a: FqElem) -> bool {
        a == self.one()
    }

    /// `Some(v)` when `a` lies in the prime field.
    pub fn as_prime(&self, a: FqElem) -> Option<u64> {
        a.c[1..].iter().all(|&v| v == 0).then_some(a.c[0])
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let mut r = FqElem::default();
        for i in 0..self.k {
            let s = a.c[i] + b.c[i];
            r.c[i] = if s >= self.p { s - self.p } else { s };
        }
        r
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let mut r = FqElem::default();
        for i in 0..self.k {
            r.c[i] = if a.c[i] == 0 { 0 } else { self.p - a.c[i] };
        }
        r
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let (p, k) = (self.p, self.k);
        if k == 1 {
            return self.from_u64(mul_mod(a.c[0], b.c[0], p));
        }
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..k {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + mul_mod(a.c[i], b.c[j], p)) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            for j in 0..k {
                let sub = mul_mod(t, self.modulus[j], p);
                prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
            }
        }
        let mut r = FqElem::default();
        r.c[..k].copy_from_slice(&prod[..k]);
        r
    }

    pub fn scale(&self, a: FqElem, s: u64) -> FqElem {
        self.mul(a, self.from_u64(s))
    }

    pub fn pow(&self, a: FqElem, mut e: u128) -> FqElem {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^p`.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u128)
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if self.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        if self.k == 1 {
            return Ok(self.from_u64(pow_mod(a.c[0], self.p - 2, self.p)));
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Factorization of `|F^*| = p^k - 1`, assembled from the cyclotomic
    /// values `Phi_d(p)` for `d | k`.
    pub fn unit_group_factors(&self) -> &[(u64, u32)] {
        self.unit_factors.get_or_init(|| {
            let p = self.p as u128;
            let mut acc = std::collections::BTreeMap::new();
            for d in 1..=self.k {
                if self.k % d != 0 {
                    continue;
                }
                let phi = match d {
                    1 => p - 1,
                    2 => p + 1,
                    3 => p * p + p + 1,
                    4 => p * p + 1,
                    5 => p * p * p * p + p * p * p + p * p + p + 1,
                    6 => p * p - p + 1,
                    _ => unreachable!("unsupported degree"),
                };
                for (q, e) in factor(phi as u64).factors {
                    *acc.entry(q).or_insert(0u32) += e;
                }
            }
            acc.into_iter().collect()
        })
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FqElem) -> Result<u128> {
        if self.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let mut ord = self.order - 1;
        for &(q, _) in self.unit_group_factors() {
            let q = q as u128;
            while ord % q == 0 && self.is_one(self.pow(a, ord / q)) {
                ord /= q;
            }
        }
        Ok(ord)
    }

    pub fn is_square(&self, a: FqElem) -> bool {
        self.is_zero(a) || self.is_one(self.pow(a, (self.order - 1) / 2))
    }

    /// Smallest square root (by coefficient vector), if any.
    pub fn sqrt(&self, a: FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return Some(a);
        }
        if !self.is_square(a) {
            return None;
        }
        let f = vec![self.neg(a), self.zero(), self.one()];
        poly::roots(self, &f).ok()?.first().map(|&(r, _)| r)
    }

    /// An element of exact order `n`, for `n | p^k - 1`.
    pub fn element_of_order(&self, n: u128) -> Option<FqElem> {
        if n == 0 || (self.order - 1) % n != 0 {
            return None;
        }
        let cof = (self.order - 1) / n;
        for idx in 1..self.order {
            let g = self.pow(self.from_index(idx), cof);
            if self.element_order(g).ok()? == n {
                return Some(g);
            }
        }
        None
    }

    /// A primitive element (smallest by index).
    pub fn primitive_element(&self) -> FqElem {
        self.element_of_order(self.order - 1).expect("finite fields have primitive elements")
    }

    /// Lift a polynomial with prime-field coefficients into this field.
    pub fn lift_prime_poly(&self, coeffs: &[u64]) -> Poly {
        coeffs.iter().map(|&c| self.from_u64(c)).collect()
    }

    /// An embedding of `self` into `big`, sending the generator to the
    /// smallest root of `self`'s modulus in `big`.
    pub fn embedding_into(self: &Arc<Self>, big: &Arc<FqField>) -> Result<Embedding> {
        if self.p != big.p || big.k % self.k != 0 {
            return Err(Error::Invalid(format!("no embedding {self:?} -> {big:?}")));
        }
        let image = if self.k == 1 {
            big.zero()
        } else {
            let m = big.lift_prime_poly(&self.modulus);
            poly::roots(big, &m)?
                .first()
                .map(|&(r, _)| r)
                .ok_or_else(|| Error::Invalid("modulus has no root in extension".into()))?
        };
        let mut powers = Vec::with_capacity(self.k);
        let mut acc = big.one();
        for _ in 0..self.k {
            powers.push(acc);
            acc = big.mul(acc, image);
        }
        Ok(Embedding { small: Arc::clone(self), big: Arc::clone(big), powers })
    }
}

/// Field homomorphism `F_{p^k} -> F_{p^m}`.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub small: Arc<FqField>,
    pub big: Arc<FqField>,
    powers: Vec<FqElem>,
}

impl Embedding {
    pub fn map(&self, a: FqElem) -> FqElem {
        if self.small.k == 1 {
            return self.big.from_u64(a.c[0]);
        }
        let mut acc = self.big.zero();
        for (i, &pw) in self.powers.iter().enumerate() {
            if a.c[i] != 0 {
                acc = self.big.add(acc, self.big.scale(pw, a.c[i]));
            }
        }
        acc
    }

    pub fn map_poly(&self, f: &[FqElem]) -> Poly {
        f.iter().map(|&c| self.map(c)).collect()
    }
}

fn smallest_irreducible(prime: &FqField, k: usize) -> Vec<u64> {
    let p = prime.p as u128;
    // Index n encodes (c_0, ..., c_{k-1}) with c_0 the most significant
    // digit, so increasing n walks the lexicographic order.
    // c_0 = 0 is reducible (divisible by x), so start at c_0 = 1.
    for n in p.pow(k as u32 - 1)..p.pow(k as u32) {
        let mut coeffs = vec![0u64; k + 1];
        let mut m = n;
        for i in (0..k).rev() {
            coeffs[i] = (m % p) as u64;
            m /= p;
        }
        coeffs[k] = 1;
        let f = prime.lift_prime_poly(&coeffs);
        if poly::is_irreducible(prime, &f) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
