//! Dense univariate polynomials over an [`FqField`], coefficients low to high.
//!
//! Roots are found by taking `gcd(f, x^q - x)` and splitting the product of
//! distinct linear factors with `gcd((x + c)^((q-1)/2) - 1, g)`, trying shifts
//! `c` in index order. Any two distinct roots are separated by some shift, so
//! the search is deterministic and always terminates.

use super::fq::{FqElem, FqField};
use crate::{Error, Result};

pub type Poly = Vec<FqElem>;

pub fn trim(f: &mut Poly, field: &FqField) {
    while f.last().is_some_and(|&c| field.is_zero(c)) {
        f.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(f: &[FqElem], field: &FqField) -> Option<usize> {
    f.iter().rposition(|&c| !field.is_zero(c))
}

pub fn is_monic(f: &[FqElem], field: &FqField) -> bool {
    degree(f, field).is_some_and(|d| field.is_one(f[d]))
}

pub fn add(field: &FqField, f: &[FqElem], g: &[FqElem]) -> Poly {
    let n = f.len().max(g.len());
    let mut r: Poly = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or_default();
            let b = g.get(i).copied().unwrap_or_default();
            field.add(a, b)
        })
        .collect();
    trim(&mut r, field);
    r
}

pub fn sub(field: &FqField, f: &[FqElem], g: &[FqElem]) -> Poly {
    let neg: Poly = g.iter().map(|&c| field.neg(c)).collect();
    add(field, f, &neg)
}

pub fn mul(field: &FqField, f: &[FqElem], g: &[FqElem]) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut r = vec![field.zero(); f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if field.is_zero(a) {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            r[i + j] = field.add(r[i + j], field.mul(a, b));
        }
    }
    trim(&mut r, field);
    r
}

/// Quotient and remainder; `g` must be nonzero.
pub fn div_rem(field: &FqField, f: &[FqElem], g: &[FqElem]) -> Result<(Poly, Poly)> {
    let dg = degree(g, field).ok_or(Error::ZeroElement)?;
    let lead_inv = field.inv(g[dg])?;
    let mut r: Poly = f.to_vec();
    trim(&mut r, field);
    let Some(df) = degree(&r, field) else {
        return Ok((Vec::new(), Vec::new()));
    };
    if df < dg {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![field.zero(); df - dg + 1];
    for i in (0..=df - dg).rev() {
        let c = field.mul(r[i + dg], lead_inv);
        q[i] = c;
        if field.is_zero(c) {
            continue;
        }
        for j in 0..=dg {
            r[i + j] = field.sub(r[i + j], field.mul(c, g[j]));
        }
    }
    trim(&mut q, field);
    trim(&mut r, field);
    Ok((q, r))
}

pub fn rem(field: &FqField, f: &[FqElem], g: &[FqElem]) -> Result<Poly> {
    Ok(div_rem(field, f, g)?.1)
}

pub fn make_monic(field: &FqField, f: &[FqElem]) -> Poly {
    let Some(d) = degree(f, field) else {
        return Vec::new();
    };
    let inv = field.inv(f[d]).expect("nonzero leading coefficient");
    f[..=d].iter().map(|&c| field.mul(c, inv)).collect()
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(field: &FqField, f: &[FqElem], g: &[FqElem]) -> Poly {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a, field);
    trim(&mut b, field);
    while !b.is_empty() {
        let r = rem(field, &a, &b).expect("nonzero divisor");
        a = b;
        b = r;
    }
    make_monic(field, &a)
}

pub fn derivative(field: &FqField, f: &[FqElem]) -> Poly {
    let mut r: Poly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| field.scale(c, i as u64 % field.characteristic()))
        .collect();
    trim(&mut r, field);
    r
}

pub fn eval(field: &FqField, f: &[FqElem], x: FqElem) -> FqElem {
    f.iter().rev().fold(field.zero(), |acc, &c| field.add(field.mul(acc, x), c))
}

/// `base^e mod m`.
pub fn pow_mod(field: &FqField, base: &[FqElem], mut e: u128, m: &[FqElem]) -> Result<Poly> {
    let mut acc = rem(field, &[field.one()], m)?;
    let mut b = rem(field, base, m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(field, &mul(field, &acc, &b), m)?;
        }
        b = rem(field, &mul(field, &b, &b), m)?;
        e >>= 1;
    }
    Ok(acc)
}

fn x_poly(field: &FqField) -> Poly {
    vec![field.zero(), field.one()]
}

pub fn is_squarefree(field: &FqField, f: &[FqElem]) -> bool {
    let g = gcd(field, f, &derivative(field, f));
    degree(&g, field) == Some(0)
}

/// Rabin's irreducibility test over `field`.
pub fn is_irreducible(field: &FqField, f: &[FqElem]) -> bool {
    let Some(n) = degree(f, field) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let q = field.order();
    let x = x_poly(field);
    // h[j] = x^(q^j) mod f
    let mut h = vec![rem(field, &x, f).expect("nonzero")];
    for _ in 0..n {
        let next = pow_mod(field, h.last().unwrap(), q, f).expect("nonzero");
        h.push(next);
    }
    if !is_zero_mod(field, &h[n], &x, f) {
        return false;
    }
    for r in prime_divisors(n) {
        let diff = sub(field, &h[n / r], &x);
        if degree(&gcd(field, &diff, f), field) != Some(0) {
            return false;
        }
    }
    true
}

fn is_zero_mod(field: &FqField, a: &[FqElem], b: &[FqElem], m: &[FqElem]) -> bool {
    rem(field, &sub(field, a, b), m).map(|r| r.is_empty()).unwrap_or(false)
}

fn prime_divisors(n: usize) -> Vec<usize> {
    (2..=n).filter(|&p| n % p == 0 && (2..p).all(|d| p % d != 0)).collect()
}

/// All roots of the monic polynomial `f` in `field`, with multiplicities,
/// sorted by coefficient vector.
pub fn roots(field: &FqField, f: &[FqElem]) -> Result<Vec<(FqElem, u32)>> {
    if !is_monic(f, field) {
        return Err(Error::NotMonic);
    }
    let mut f: Poly = f.to_vec();
    trim(&mut f, field);
    if f.len() == 1 {
        return Ok(Vec::new());
    }
    let x = x_poly(field);
    let xq = pow_mod(field, &x, field.order(), &f)?;
    let g = gcd(field, &sub(field, &xq, &x), &f);
    let mut distinct = Vec::new();
    split_linear(field, g, &mut distinct)?;
    distinct.sort();
    let mut out = Vec::with_capacity(distinct.len());
    for r in distinct {
        let lin = vec![field.neg(r), field.one()];
        let mut mult = 0;
        let mut h = f.clone();
        loop {
            let (q, rr) = div_rem(field, &h, &lin)?;
            if !rr.is_empty() {
                break;
            }
            mult += 1;
            h = q;
        }
        out.push((r, mult));
    }
    Ok(out)
}

fn split_linear(field: &FqField, g: Poly, out: &mut Vec<FqElem>) -> Result<()> {
    let Some(d) = degree(&g, field) else {
        return Ok(());
    };
    match d {
        0 => return Ok(()),
        1 => {
            out.push(field.neg(g[0]));
            return Ok(());
        }
        _ => {}
    }
    let e = (field.order() - 1) / 2;
    for idx in 0..field.order() {
        let c = field.from_index(idx);
        let shifted = vec![c, field.one()];
        let h = pow_mod(field, &shifted, e, &g)?;
        let h = sub(field, &h, &[field.one()]);
        let a = gcd(field, &h, &g);
        let da = degree(&a, field).unwrap_or(0);
        if da > 0 && da < d {
            let (b, _) = div_rem(field, &g, &a)?;
            split_linear(field, a, out)?;
            split_linear(field, make_monic(field, &b), out)?;
            return Ok(());
        }
    }
    unreachable!("distinct roots are always separated by some shift")
}
