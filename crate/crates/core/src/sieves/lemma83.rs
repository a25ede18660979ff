//! Order check behind the unitary image at inert primes.
//!
//! For `a` in `F_{l^2}` and `p` in `F_l^*`, when
//! `f = x^3 - a x^2 + p a^l x - p^3` is irreducible over `F_{l^2}`, a root
//! `alpha` in `F_{l^6}` satisfies `alpha^{l^3 + 1} = p^2`. Its order then
//! divides `(l^3 + 1)(l - 1)` and is never a multiple of `l^4 + l^2 + 1`, so
//! the image cannot contain the Singer cycles of `PSL(3, F_{l^2})`.

use serde::Serialize;

use crate::arith::fq::{FqElem, FqField};
use crate::arith::int::is_prime;
use crate::arith::poly;
use crate::{Error, Result};

/// Largest `l` for exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: u64 = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma83Mode {
    Exhaustive,
    /// `samples` evenly spaced pairs in enumeration order.
    Sampled { samples: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma83Violation {
    pub a: Vec<u64>,
    pub p: u64,
    pub order: u128,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma83Record {
    pub ell: u64,
    pub mode: Lemma83Mode,
    pub pairs_checked: u64,
    pub irreducible: u64,
    pub reducible_skipped: u64,
    pub violations: Vec<Lemma83Violation>,
}

impl std::fmt::Display for Lemma83Record {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} violations / {} irreducible instances", self.violations.len(), self.irreducible)
    }
}

/// Checks the order bound over `F_{l^2} x F_l^*`, exhaustively or on an
/// evenly spaced sample.
pub fn lemma83_verify(ell: u64, mode: Lemma83Mode) -> Result<Lemma83Record> {
    if ell < 3 || !is_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    if matches!(mode, Lemma83Mode::Exhaustive) && ell > EXHAUSTIVE_LIMIT {
        return Err(Error::Invalid(format!(
            "exhaustive check limited to l <= {EXHAUSTIVE_LIMIT}; use a sample"
        )));
    }
    let f2 = FqField::new(ell, 2)?;
    let f6 = FqField::new(ell, 6)?;
    let emb = f2.embedding_into(&f6)?;
    let l = ell as u128;
    let bound = (l * l * l + 1) * (l - 1);
    let singer = l * l * l * l + l * l + 1;
    let total = f2.order() * (l - 1);
    let stride = match mode {
        Lemma83Mode::Exhaustive => 1,
        Lemma83Mode::Sampled { samples } => total.div_ceil(samples.max(1) as u128).max(1),
    };
    let mut rec = Lemma83Record {
        ell,
        mode,
        pairs_checked: 0,
        irreducible: 0,
        reducible_skipped: 0,
        violations: Vec::new(),
    };
    let mut idx = 0u128;
    while idx < total {
        let a = f2.from_index(idx / (l - 1));
        let p = (idx % (l - 1)) as u64 + 1;
        idx += stride;
        rec.pairs_checked += 1;
        let pe = f2.from_u64(p);
        let f: Vec<FqElem> = vec![
            f2.neg(f2.pow(pe, 3)),
            f2.mul(pe, f2.frobenius(a)),
            f2.neg(a),
            f2.one(),
        ];
        if !poly::is_irreducible(&f2, &f) {
            rec.reducible_skipped += 1;
            continue;
        }
        rec.irreducible += 1;
        let roots = poly::roots(&f6, &emb.map_poly(&f))?;
        let alpha = roots.first().ok_or(Error::Invalid("irreducible cubic without roots in F_{l^6}".into()))?.0;
        let order = f6.element_order(alpha)?;
        let coeffs = a.c[..2].to_vec();
        let mut flag = |reason| {
            rec.violations.push(Lemma83Violation { a: coeffs.clone(), p, order, reason });
        };
        if f6.pow(alpha, l * l * l + 1) != f6.from_u64(p * p % ell) {
            flag("alpha^(l^3+1) != p^2");
        }
        if bound % order != 0 {
            flag("order does not divide (l^3+1)(l-1)");
        }
        if order % singer == 0 {
            flag("order is a multiple of l^4+l^2+1");
        }
    }
    Ok(rec)
}
