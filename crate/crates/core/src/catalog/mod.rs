//! Mitchell's maximal subgroups of `PSL(3, F_q)`, tame inertia patterns,
//! exceptional-group order spectra and the conic stabilizer.

pub mod group;
pub mod spectra;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::fq::{FqElem, FqField};
use crate::arith::int::gcd_u128;
use crate::{Error, Result};

pub use group::{generators, group_closure, sym2, Closure, GroupElement, Perm, ProjMatrix, DEFAULT_CLOSURE_CAP};
pub use spectra::{
    derived_spectra, exceptional_candidates, Admissibility, Applies, OrderSpectrum, Preset, PresetSet, Provenance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseId {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H216,
    H72,
    H36,
    I,
    J,
    X2A6,
    XA7,
}

impl CaseId {
    pub const ALL: [CaseId; 14] = [
        CaseId::A,
        CaseId::B,
        CaseId::C,
        CaseId::D,
        CaseId::E,
        CaseId::F,
        CaseId::G,
        CaseId::H216,
        CaseId::H72,
        CaseId::H36,
        CaseId::I,
        CaseId::J,
        CaseId::X2A6,
        CaseId::XA7,
    ];

    pub const EXCEPTIONAL: [CaseId; 7] =
        [CaseId::H216, CaseId::H72, CaseId::H36, CaseId::I, CaseId::J, CaseId::X2A6, CaseId::XA7];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::A => "a",
            CaseId::B => "b",
            CaseId::C => "c",
            CaseId::D => "d",
            CaseId::E => "e",
            CaseId::F => "f",
            CaseId::G => "g",
            CaseId::H216 => "h216",
            CaseId::H72 => "h72",
            CaseId::H36 => "h36",
            CaseId::I => "i",
            CaseId::J => "j",
            CaseId::X2A6 => "x2A6",
            CaseId::XA7 => "xA7",
        }
    }

    pub fn is_exceptional(self) -> bool {
        Self::EXCEPTIONAL.contains(&self)
    }

    /// Order of the exceptional group, independent of `l`.
    pub fn fixed_order(self) -> Option<u128> {
        Some(match self {
            CaseId::H216 => 216,
            CaseId::H72 => 72,
            CaseId::H36 => 36,
            CaseId::I => 168,
            CaseId::J => 360,
            CaseId::X2A6 => 720,
            CaseId::XA7 => 2520,
            _ => return None,
        })
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown case id {s:?}")))
    }
}

/// One case of the classification: order formula and existence predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub case_id: CaseId,
}

impl CatalogEntry {
    pub fn all() -> impl Iterator<Item = CatalogEntry> {
        CaseId::ALL.into_iter().map(|case_id| CatalogEntry { case_id })
    }

    pub fn is_exceptional(&self) -> bool {
        self.case_id.is_exceptional()
    }

    /// Whether the case occurs in `PSL(3, F_{l^t})`.
    pub fn exists(&self, ell: u64, t: u32) -> bool {
        if !(t == 1 || t == 2) {
            return false;
        }
        let q9 = (ell as u128).pow(t) % 9;
        match self.case_id {
            CaseId::G => t == 2,
            CaseId::H216 => q9 == 1,
            CaseId::H72 | CaseId::H36 => q9 == 4 || q9 == 7,
            CaseId::I => t == 2 || matches!(ell % 7, 0 | 1 | 2 | 4),
            CaseId::J => t == 2 || matches!(ell % 15, 1 | 4),
            CaseId::X2A6 | CaseId::XA7 => ell == 5 && t == 2,
            _ => true,
        }
    }

    fn no_such(&self, ell: u64, t: u32) -> Error {
        Error::NoSuchCase { case: self.case_id.to_string(), ell, t }
    }

    /// `|G|`; `k` is used only by case f.
    pub fn order(&self, ell: u64, t: u32, k: u32) -> Result<u128> {
        if !self.exists(ell, t) {
            return Err(self.no_such(ell, t));
        }
        if let Some(n) = self.case_id.fixed_order() {
            return Ok(n);
        }
        let ov = Error::Overflow("group order");
        let p = ell as u128;
        let q = p.checked_pow(t).ok_or(ov.clone())?;
        let g3 = |n: u128| gcd_u128(3, n);
        let chain = |fs: &[u128]| fs.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x));
        let n = match self.case_id {
            CaseId::A | CaseId::B => {
                chain(&[q + 1, q, q, q, q - 1, q - 1]).map(|v| v / g3(q - 1))
            }
            CaseId::C => chain(&[6, q - 1, q - 1]).map(|v| v / g3(q - 1)),
            CaseId::D => chain(&[q, q]).map(|v| 3 * (v + q + 1) / g3(q - 1)),
            CaseId::E => chain(&[q + 1, q, q - 1]),
            CaseId::F => {
                if k == 0 || k > t {
                    return Err(self.no_such(ell, t));
                }
                let r = p.pow(k);
                chain(&[r * r + r + 1, r + 1, r, r, r, r - 1, r - 1]).map(|v| v / g3(r - 1))
            }
            CaseId::G => chain(&[p * p - p + 1, p + 1, p + 1, p, p, p, p - 1]).map(|v| v / g3(p + 1)),
            _ => unreachable!("fixed orders handled above"),
        };
        n.ok_or(ov)
    }
}

/// `|G|` for a case of the classification.
pub fn case_order(case: CaseId, ell: u64, t: u32, k: u32) -> Result<u128> {
    CatalogEntry { case_id: case }.order(ell, t, k)
}

/// A diagonal entry `Psi_n^(d_0 + d_1 l + ... + d_{n-1} l^{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InertiaCharacter {
    pub level: u32,
    pub digits: Vec<u32>,
}

/// Semisimplified tame inertia action: three diagonal characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InertiaPattern {
    pub pattern_id: u32,
    pub characters: Vec<InertiaCharacter>,
}

fn ch(level: u32, digits: &[u32]) -> InertiaCharacter {
    InertiaCharacter { level, digits: digits.to_vec() }
}

impl InertiaPattern {
    pub fn all() -> Vec<InertiaPattern> {
        let pats = [
            vec![ch(1, &[0]), ch(1, &[1]), ch(1, &[2])],
            vec![ch(1, &[0]), ch(2, &[2, 1]), ch(2, &[1, 2])],
            vec![ch(1, &[1]), ch(2, &[2, 0]), ch(2, &[0, 2])],
            vec![ch(1, &[2]), ch(2, &[1, 0]), ch(2, &[0, 1])],
            vec![ch(3, &[1, 2, 0]), ch(3, &[0, 1, 2]), ch(3, &[2, 0, 1])],
            vec![ch(1, &[1]), ch(1, &[1]), ch(1, &[1])],
        ];
        pats.into_iter()
            .enumerate()
            .map(|(i, characters)| InertiaPattern { pattern_id: i as u32 + 1, characters })
            .collect()
    }

    /// Hodge-Tate weights: the digits of each Galois orbit of characters,
    /// counted once per orbit.
    pub fn weights(&self) -> Vec<u32> {
        let mut counts = [0u32; 8];
        for c in &self.characters {
            for &d in &c.digits {
                counts[d as usize] += 6 / c.level;
            }
        }
        let mut w = Vec::new();
        for (d, &n) in counts.iter().enumerate() {
            w.extend(std::iter::repeat(d as u32).take((n / 6) as usize));
        }
        w
    }

    pub fn max_weight_multiplicity(&self) -> usize {
        let w = self.weights();
        w.iter().map(|x| w.iter().filter(|y| *y == x).count()).max().unwrap_or(0)
    }

    pub fn is_scalar(&self) -> bool {
        self.characters.windows(2).all(|w| w[0] == w[1])
    }

    /// Cyclic order of the projectivized image in the coarse form used by the
    /// sieve: `l - 1`, `l + 1`, `l^2 + l + 1` by highest character level, 1
    /// for the scalar pattern.
    pub fn projective_cyclic_order(&self, ell: u64) -> u64 {
        if self.is_scalar() {
            return 1;
        }
        match self.characters.iter().map(|c| c.level).max().unwrap_or(1) {
            1 => ell - 1,
            2 => ell + 1,
            _ => ell * ell + ell + 1,
        }
    }

    /// Exact order of the projectivized image, computing every character
    /// inside `F_{l^6}^*`.
    pub fn exact_projective_order(&self, ell: u64) -> Result<u128> {
        let l = ell as u128;
        let n6 = l.checked_pow(6).ok_or(Error::Overflow("l^6"))? - 1;
        let exps: Vec<u128> = self
            .characters
            .iter()
            .map(|c| {
                let qn = l.pow(c.level) - 1;
                let e = c.digits.iter().rev().fold(0u128, |acc, &d| acc * l + d as u128);
                (e % qn) * (n6 / qn)
            })
            .collect();
        let g = exps[1..]
            .iter()
            .fold(n6, |acc, &e| gcd_u128(acc, (e + n6 - exps[0]) % n6));
        Ok(n6 / g)
    }
}

/// The patterns surviving the Hodge filter: no weight repeated more than
/// `hodge_bound` times.
pub fn inertia_patterns(hodge_bound: u32) -> Vec<InertiaPattern> {
    InertiaPattern::all()
        .into_iter()
        .filter(|p| p.max_weight_multiplicity() <= hodge_bound as usize)
        .collect()
}

/// `{l - 1, l + 1, l^2 + l + 1}`.
pub fn projective_inertia_orders(ell: u64) -> BTreeSet<u64> {
    BTreeSet::from([ell - 1, ell + 1, ell * ell + ell + 1])
}

/// Stabilizer of the conic for parameters `(k, alpha, beta, gamma, delta)`;
/// needs a square root of `k` in `field`.
///
/// The matrix is `Sym^2` of `[[sqrt(k) alpha, beta], [sqrt(k) gamma, delta]]`
/// conjugated by `diag(1, sqrt(k), 1)`; its `(2, 1)` entry is
/// `k sqrt(k) alpha gamma`.
pub fn conic_stabilizer(
    field: &Arc<FqField>,
    k: FqElem,
    [al, be, ga, de]: [FqElem; 4],
) -> Result<ProjMatrix> {
    let f = field;
    let s = f.sqrt(k).ok_or(Error::NoSquareRoot)?;
    let m = |a: FqElem, b: FqElem| f.mul(a, b);
    let two = f.from_u64(2);
    ProjMatrix::new(
        f,
        [
            [m(k, m(al, al)), m(two, m(al, be)), m(be, be)],
            [m(m(k, s), m(al, ga)), m(s, f.add(m(al, de), m(be, ga))), m(s, m(be, de))],
            [m(k, m(ga, ga)), m(two, m(ga, de)), m(de, de)],
        ],
    )
}

/// [`conic_stabilizer`] over `F_{l^2}` when `k` is a nonsquare in the prime
/// field `field`.
pub fn conic_stabilizer_extended(
    field: &Arc<FqField>,
    k: FqElem,
    params: [FqElem; 4],
) -> Result<ProjMatrix> {
    match conic_stabilizer(field, k, params) {
        Err(Error::NoSquareRoot) => {
            let big = FqField::new(field.characteristic(), 2 * field.degree())?;
            let emb = field.embedding_into(&big)?;
            conic_stabilizer(&big, emb.map(k), params.map(|x| emb.map(x)))
        }
        r => r,
    }
}

/// `B^3 = C A^3` for the characteristic polynomial of `m`.
pub fn satisfies_conic_relation(m: &ProjMatrix) -> bool {
    let f = m.field();
    let (a, b, c) = m.charpoly_abc();
    f.pow(b, 3) == f.mul(c, f.pow(a, 3))
}
