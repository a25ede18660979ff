//! Family-level sieves: each reduces one small-image case to a finite set of
//! candidate primes `l` read off from prime factors of explicit norms.

pub mod characters;
pub mod lemma83;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::int::{factor, factor_u128};
use crate::arith::quad::QuadInt;
use crate::family::{Congruence, EigenTable, FamilyDescriptor};
use crate::{Error, Result};

pub use characters::{enumerate_characters, CharacterSpec, UnitGroup};
pub use lemma83::{lemma83_verify, Lemma83Mode, Lemma83Record};

/// A set of primes that may be all primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeSet {
    All,
    Finite(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet::Finite(BTreeSet::new())
    }

    pub fn contains(&self, ell: u64) -> bool {
        match self {
            PrimeSet::All => true,
            PrimeSet::Finite(s) => s.contains(&ell),
        }
    }

    pub fn union(self, other: PrimeSet) -> PrimeSet {
        match (self, other) {
            (PrimeSet::Finite(mut a), PrimeSet::Finite(b)) => {
                a.extend(b);
                PrimeSet::Finite(a)
            }
            _ => PrimeSet::All,
        }
    }

    pub fn intersect(self, other: PrimeSet) -> PrimeSet {
        match (self, other) {
            (PrimeSet::All, x) | (x, PrimeSet::All) => x,
            (PrimeSet::Finite(a), PrimeSet::Finite(b)) => {
                PrimeSet::Finite(a.intersection(&b).copied().collect())
            }
        }
    }

    /// Removes `excluded`, returning the removed members.
    pub fn remove_all(&mut self, excluded: &BTreeSet<u64>) -> BTreeSet<u64> {
        match self {
            PrimeSet::All => BTreeSet::new(),
            PrimeSet::Finite(s) => {
                let gone: BTreeSet<u64> = s.intersection(excluded).copied().collect();
                s.retain(|p| !excluded.contains(p));
                gone
            }
        }
    }

    pub fn as_finite(&self) -> Option<&BTreeSet<u64>> {
        match self {
            PrimeSet::All => None,
            PrimeSet::Finite(s) => Some(s),
        }
    }
}

impl std::fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrimeSet::All => f.write_str("all"),
            PrimeSet::Finite(s) if s.is_empty() => f.write_str("none"),
            PrimeSet::Finite(s) => {
                let v: Vec<String> = s.iter().map(u64::to_string).collect();
                f.write_str(&v.join(" "))
            }
        }
    }
}

/// Table prime at which `eps(p)` is confined to `signs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub p: u64,
    pub signs: Vec<i8>,
    pub group: u32,
}

impl Probe {
    pub fn new(p: u64, signs: &[i8], group: u32) -> Result<Probe> {
        if signs.is_empty() || signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::Invalid("probe signs must be a nonempty subset of {+1, -1}".into()));
        }
        let mut signs = signs.to_vec();
        signs.sort_by(|a, b| b.cmp(a));
        signs.dedup();
        Ok(Probe { p, signs, group })
    }
}

/// `p:+1`, `p:-1` or `p:+-1`.
impl std::fmt::Display for Probe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self.signs.as_slice() {
            [1] => "+1",
            [-1] => "-1",
            _ => "+-1",
        };
        write!(f, "{}:{s}", self.p)
    }
}

impl std::str::FromStr for Probe {
    type Err = Error;

    /// Group 0; see [`Probe::new`] to set one.
    fn from_str(s: &str) -> Result<Probe> {
        let bad = || Error::Invalid(format!("probe {s:?}: expected p:+1, p:-1 or p:+-1"));
        let (p, signs) = s.split_once(':').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let signs: &[i8] = match signs.trim() {
            "+1" | "1" => &[1],
            "-1" => &[-1],
            "+-1" | "-+1" | "±1" => &[1, -1],
            _ => return Err(bad()),
        };
        Probe::new(p, signs, 0)
    }
}

/// One evaluated quantity whose norm contributes candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveWitness {
    pub p: u64,
    pub group: u32,
    pub sign: i8,
    pub exponent: Option<u8>,
    pub value: QuadInt,
    pub norm: u128,
    /// Empty when `norm` is zero.
    pub factors: Vec<(u64, u32)>,
}

impl SieveWitness {
    fn primes(&self) -> PrimeSet {
        if self.norm == 0 {
            PrimeSet::All
        } else {
            PrimeSet::Finite(self.factors.iter().map(|f| f.0).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveReport {
    pub sieve_id: String,
    /// Candidates after exclusions.
    pub candidates: PrimeSet,
    /// Candidates before exclusions.
    pub raw: PrimeSet,
    /// Members of `raw` removed by the exclusion policy.
    pub excluded: BTreeSet<u64>,
    pub witnesses: Vec<SieveWitness>,
    /// Cubic CM or duality holding exactly on every witness.
    pub family_flag: bool,
    /// No usable witness.
    pub inconclusive: bool,
}

/// `{2, 3}`, primes dividing `D`, bad primes and prime divisors of `N`.
pub fn standard_exclusions(desc: &FamilyDescriptor) -> BTreeSet<u64> {
    let mut s = desc.ramified_primes();
    s.extend([2, 3]);
    s.extend(factor(desc.d).primes());
    s
}

fn finish(
    sieve_id: &str,
    table: &EigenTable,
    raw: PrimeSet,
    witnesses: Vec<SieveWitness>,
    family_flag: bool,
) -> SieveReport {
    let mut excl = standard_exclusions(&table.descriptor);
    excl.extend(witnesses.iter().map(|w| w.p));
    let inconclusive = witnesses.is_empty();
    let mut candidates = raw.clone();
    let excluded = candidates.remove_all(&excl);
    SieveReport { sieve_id: sieve_id.to_string(), candidates, raw, excluded, witnesses, family_flag, inconclusive }
}

fn witness(p: u64, group: u32, sign: i8, exponent: Option<u8>, value: QuadInt) -> Result<SieveWitness> {
    let norm = value.norm()?;
    let factors = if norm == 0 { Vec::new() } else { factor_u128(norm)?.factors };
    Ok(SieveWitness { p, group, sign, exponent, value, norm, factors })
}

fn entry(table: &EigenTable, p: u64) -> Result<QuadInt> {
    table.get(p).ok_or_else(|| Error::Invalid(format!("p = {p} is not in the table")))
}

/// Smallest table prime `p` with `p mod d` in `residues` and `a_p` nonreal.
/// Signs are `{+1}` when `p = 1 (mod d)`, else `{+1, -1}`.
pub fn find_probe(table: &EigenTable, d: u64, residues: &[u64]) -> Option<Probe> {
    let d = d.max(1);
    let res: BTreeSet<u64> = residues.iter().map(|r| r % d).collect();
    table
        .iter()
        .find(|(p, a)| res.contains(&(p % d)) && !a.is_real())
        .map(|(p, _)| {
            let signs: &[i8] = if p % d == 1 % d { &[1] } else { &[1, -1] };
            Probe::new(p, signs, 0).expect("valid signs")
        })
}

/// `s^3 p^{3i} - a s^2 p^{2i} + p conj(a) s p^i - p^3`, with factors of `p`
/// common to both coordinates removed.
pub fn reducibility_value(p: u64, a: QuadInt, s: i8, i: u8) -> Result<QuadInt> {
    let ov = Error::Overflow("reducibility value");
    let pi = p as i128;
    let s = s as i128;
    let pk = |k: u32| pi.checked_pow(k).ok_or(ov.clone());
    let t0 = QuadInt::rational(s.checked_mul(pk(3 * i as u32)?).ok_or(ov.clone())?, a.d);
    let t1 = a.checked_scale(pk(2 * i as u32)?).ok_or(ov.clone())?;
    let t2 = a.conj().checked_scale(pi.checked_mul(s).ok_or(ov.clone())?.checked_mul(pk(i as u32)?).ok_or(ov.clone())?).ok_or(ov.clone())?;
    let t3 = QuadInt::rational(pk(3)?, a.d);
    let v = t0
        .checked_sub(t1)
        .and_then(|v| v.checked_add(t2))
        .and_then(|v| v.checked_sub(t3))
        .ok_or(ov)?;
    Ok(v.strip_rational_factor(pi))
}

/// Intersection over probe groups of the union, within each group, of the
/// prime factors of every reducibility value.
pub fn reducibility_sieve(table: &EigenTable, probes: &[Probe]) -> Result<SieveReport> {
    if probes.is_empty() {
        return Err(Error::Invalid("reducibility sieve needs at least one probe".into()));
    }
    let groups: BTreeSet<u32> = probes.iter().map(|p| p.group).collect();
    let mut raw = PrimeSet::All;
    let mut witnesses = Vec::new();
    for g in groups {
        let mut union = PrimeSet::empty();
        for probe in probes.iter().filter(|p| p.group == g) {
            let a = entry(table, probe.p)?;
            for &s in &probe.signs {
                for i in 0..3u8 {
                    let w = witness(probe.p, g, s, Some(i), reducibility_value(probe.p, a, s, i)?)?;
                    union = union.union(w.primes());
                    witnesses.push(w);
                }
            }
        }
        raw = raw.intersect(union);
    }
    Ok(finish("reducible", table, raw, witnesses, false))
}

/// Case d: for `p` with `psi(p) != 1`, `a_p = 0 (mod l)`.
pub fn cubic_cm_sieve(table: &EigenTable, psi: &CharacterSpec) -> Result<SieveReport> {
    let mut raw = PrimeSet::All;
    let mut witnesses = Vec::new();
    for (p, a) in table.iter() {
        if psi.is_trivial_at(p) != Some(false) {
            continue;
        }
        let w = witness(p, 0, 1, None, a)?;
        raw = raw.intersect(w.primes());
        witnesses.push(w);
    }
    let flag = !witnesses.is_empty() && witnesses.iter().all(|w| w.norm == 0);
    Ok(finish("cubic", table, raw, witnesses, flag))
}

/// Case c: for `p` with `gamma(p) = -1`, `a_p conj(a_p) = p^2 (mod l)`.
pub fn duality_sieve(table: &EigenTable, gamma: &CharacterSpec) -> Result<SieveReport> {
    let mut raw = PrimeSet::All;
    let mut witnesses = Vec::new();
    for (p, a) in table.iter() {
        if gamma.sign(p) != Some(-1) {
            continue;
        }
        let n = a.norm()? as i128;
        let p2 = (p as i128) * (p as i128);
        let w = witness(p, 0, -1, None, QuadInt::rational(n - p2, a.d))?;
        raw = raw.intersect(w.primes());
        witnesses.push(w);
    }
    let flag = !witnesses.is_empty() && witnesses.iter().all(|w| w.norm == 0);
    Ok(finish("duality", table, raw, witnesses, flag))
}

/// `a^3 - conj(a)^3`.
pub fn selfdual_value(a: QuadInt) -> Result<QuadInt> {
    let c = a.checked_pow(3).ok_or(Error::Overflow("a^3"))?;
    c.checked_sub(c.conj()).ok_or(Error::Overflow("a^3 - conj(a)^3"))
}

/// Cases e and f with `k = 1`: `a_p^3 = conj(a_p)^3 (mod l)` at every witness.
pub fn selfdual_sieve(table: &EigenTable, witnesses: &[u64]) -> Result<SieveReport> {
    let mut raw = PrimeSet::All;
    let mut ws = Vec::new();
    for &p in witnesses {
        let a = entry(table, p)?;
        if a.is_real() {
            return Err(Error::Invalid(format!("a_{p} is real: a^3 = conj(a)^3 identically")));
        }
        let w = witness(p, 0, 1, None, selfdual_value(a)?)?;
        raw = raw.intersect(w.primes());
        ws.push(w);
    }
    Ok(finish("selfdual", table, raw, ws, false))
}

/// Bound on the conductor of a character of 2-power conductor with values in
/// `F_{l^{3t}}^*`, once the `exclusion` class of `l` is removed.
///
/// The image is cyclic of order at most `2^m`, with `m` the largest 2-adic
/// valuation of `l^{3t} - 1` over the remaining odd classes; the bound is
/// `4 * 2^m`. `within` restricts `l` to one class (e.g. the split or inert
/// primes of `Q(i)`).
pub fn geometric_conductor_bound(
    bad_primes: &BTreeSet<u64>,
    t: u32,
    exclusion: Congruence,
    within: Option<Congruence>,
) -> Result<u64> {
    if bad_primes != &BTreeSet::from([2]) {
        return Err(Error::Invalid(
            "a geometric conductor bound is derived only for bad primes {2}; use modular mode".into(),
        ));
    }
    if !(t == 1 || t == 2) || !exclusion.modulus.is_power_of_two() {
        return Err(Error::Invalid("exclusion modulus must be a power of 2 and t in {1, 2}".into()));
    }
    const K: u32 = 20;
    let m = 1u128 << K;
    let mut worst = 0u32;
    for ell in (1..m as u64).step_by(2) {
        if exclusion.contains(ell) || within.is_some_and(|c| !c.contains(ell)) {
            continue;
        }
        let mut x = 1u128;
        for _ in 0..3 * t {
            x = x * ell as u128 % m;
        }
        let v = ((x + m - 1) % m).trailing_zeros().min(K);
        if v >= K {
            return Err(Error::Invalid("exclusion leaves the 2-part of l^{3t} - 1 unbounded".into()));
        }
        worst = worst.max(v);
    }
    Ok(4 << worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_syntax() {
        let p: Probe = "3:+-1".parse().unwrap();
        assert_eq!(p.signs, vec![1, -1]);
        assert_eq!(p.to_string(), "3:+-1");
        assert_eq!("127:+1".parse::<Probe>().unwrap().to_string(), "127:+1");
        assert!("127".parse::<Probe>().is_err());
        assert!("x:+1".parse::<Probe>().is_err());
    }
    use crate::family::parse_table;

    fn s2() -> EigenTable {
        parse_table(include_str!("../../fixtures/s2.tbl")).unwrap()
    }

    fn l88() -> EigenTable {
        parse_table(include_str!("../../fixtures/level88.tbl")).unwrap()
    }

    fn set(v: &[u64]) -> PrimeSet {
        PrimeSet::Finite(v.iter().copied().collect())
    }

    #[test]
    fn s2_reducibility() {
        let t = s2();
        let v = reducibility_value(127, t.get(127).unwrap(), 1, 0).unwrap();
        assert_eq!(v, QuadInt::new(-2028096, 2048, 1));
        assert_eq!(v.norm().unwrap(), 4096 * 5 * 1901 * 105649);
        let probes = [Probe::new(127, &[1], 1).unwrap(), Probe::new(3, &[1, -1], 1).unwrap()];
        let r = reducibility_sieve(&t, &probes).unwrap();
        assert_eq!(r.candidates, set(&[5, 13, 1901, 105649]));
        assert!(r.excluded.contains(&2));
    }

    #[test]
    fn level88_reducibility() {
        let t = l88();
        let r = reducibility_sieve(&t, &[Probe::new(89, &[1], 1).unwrap()]).unwrap();
        assert_eq!(r.raw, set(&[2, 7, 2879, 48889]));
        assert_eq!(r.candidates, set(&[2879, 48889]));
        assert_eq!(r.witnesses[0].norm, 504453128704);
    }

    #[test]
    fn probes() {
        let p = find_probe(&s2(), 128, &[1, 127]).unwrap();
        assert_eq!((p.p, p.signs.clone()), (127, vec![1, -1]));
        let p = find_probe(&l88(), 1, &[1]).unwrap();
        assert_eq!((p.p, p.signs.clone()), (3, vec![1]));
        assert_eq!(find_probe(&l88(), 88, &[1]).unwrap().p, 89);
        let real = parse_table("field-D 1\nmode modular\nlevel 5\nap 3 2 0\n").unwrap();
        assert!(find_probe(&real, 1, &[1]).is_none());
    }

    #[test]
    fn duality_and_selfdual() {
        let t = s2();
        let gammas = enumerate_characters(8, 2).unwrap();
        let g3 = gammas.iter().find(|g| g.sign(3) == Some(-1) && g.sign(5) == Some(1)).unwrap();
        assert_eq!(duality_sieve(&t, g3).unwrap().raw, set(&[2]));
        let g5 = gammas.iter().find(|g| g.sign(5) == Some(-1) && g.sign(3) == Some(1)).unwrap();
        assert_eq!(duality_sieve(&t, g5).unwrap().raw, set(&[2]));
        let sd = selfdual_sieve(&t, &[3]).unwrap();
        assert_eq!(sd.witnesses[0].value, QuadInt::new(0, -4, 1));
        assert_eq!(sd.raw, set(&[2]));
        let sd = selfdual_sieve(&l88(), &[3]).unwrap();
        assert_eq!(sd.witnesses[0].value, QuadInt::new(0, -8, 7));
        assert_eq!(sd.witnesses[0].norm, 448);
        assert_eq!(sd.raw, set(&[2, 7]));
        assert_eq!(sd.candidates, set(&[]));
        let real = parse_table("field-D 1\nmode modular\nlevel 5\nap 3 2 0\n").unwrap();
        assert!(selfdual_sieve(&real, &[3]).is_err());
    }

    #[test]
    fn family_flags() {
        let chi = enumerate_characters(8, 2)
            .unwrap()
            .into_iter()
            .find(|g| g.sign(3) == Some(-1) && g.sign(5) == Some(1))
            .unwrap();
        let dual = parse_table("field-D 1\nbad 2\nmode geometric 8\nap 3 3 0\nap 11 0 11\nap 5 1 2\n").unwrap();
        let r = duality_sieve(&dual, &chi).unwrap();
        assert!(r.family_flag);
        assert_eq!(r.candidates, PrimeSet::All);
        let psi = enumerate_characters(9, 3).unwrap().remove(0);
        let cm = parse_table("field-D 1\nbad 3\nmode geometric 9\nap 2 0 0\nap 5 0 0\nap 17 1 1\nap 19 1 1\n").unwrap();
        let r = cubic_cm_sieve(&cm, &psi).unwrap();
        assert!(r.family_flag, "{r:?}");
        assert_eq!(r.candidates, PrimeSet::All);
    }

    #[test]
    fn conductor_bound() {
        let bad = BTreeSet::from([2]);
        let c = |modulus, residue| Congruence { modulus, residue };
        assert_eq!(geometric_conductor_bound(&bad, 1, c(64, 1), Some(c(4, 1))).unwrap(), 128);
        assert_eq!(geometric_conductor_bound(&bad, 2, c(32, 31), Some(c(4, 3))).unwrap(), 128);
        assert_eq!(geometric_conductor_bound(&bad, 1, c(64, 1), None).unwrap(), 128);
        assert!(geometric_conductor_bound(&bad, 2, c(32, 31), None).is_err());
        assert!(geometric_conductor_bound(&BTreeSet::from([2, 5]), 1, c(64, 1), None).is_err());
    }

    #[test]
    fn prime_set_algebra() {
        assert_eq!(PrimeSet::All.intersect(set(&[5])), set(&[5]));
        assert_eq!(set(&[5]).union(PrimeSet::All), PrimeSet::All);
        assert_eq!(set(&[5, 7]).intersect(set(&[7, 11])), set(&[7]));
    }
}
