//! Per-prime verdicts: every case of the classification is either excluded
//! by a recorded witness or structural argument, or reported as surviving.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::arith::fq::{Embedding, FqElem, FqField};
use crate::arith::int::{gcd_u128, is_prime};
use crate::arith::poly;
use crate::arith::quad::{splitting, QuadInt, Reduction, SplittingType};
use crate::catalog::Preset;
use crate::family::{residual_charpoly, EigenTable};
use crate::sieves::{enumerate_characters, selfdual_value, PrimeSet, UnitGroup};
use crate::{Error, Result};

/// `eps` in `Hom((Z/m)^*, F^*)` with `eps(g_j) = zeta_j^w_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterHypothesis {
    /// Power of the cyclotomic character.
    pub exponent: u8,
    pub modulus: u64,
    /// Exponents `w_j` on the generators of `(Z/m)^*`.
    pub character: Vec<u64>,
}

impl fmt::Display for CharacterHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.character.iter().all(|&w| w == 0) {
            write!(f, "i={} eps=trivial", self.exponent)
        } else {
            let w: Vec<String> = self.character.iter().map(u64::to_string).collect();
            write!(f, "i={} eps mod {}=[{}]", self.exponent, self.modulus, w.join(","))
        }
    }
}

/// Every character of `(Z/m)^*` with values in `big`.
pub struct CharacterFamily {
    big: Arc<FqField>,
    group: Arc<UnitGroup>,
    /// `(zeta_j, gcd(o_j, |F^*|))`: `zeta_j` generates the `o_j`-th roots of
    /// unity of `F^*`.
    roots: Vec<(FqElem, u64)>,
}

impl CharacterFamily {
    pub fn new(modulus: u64, big: Arc<FqField>) -> Result<Self> {
        let group = UnitGroup::new(modulus.max(1))?;
        let n = big.order() - 1;
        let h = big.primitive_element();
        let roots = group
            .generators
            .iter()
            .map(|&(_, o)| {
                let g = gcd_u128(o as u128, n);
                (big.pow(h, n / g), g as u64)
            })
            .collect();
        Ok(CharacterFamily { big, group, roots })
    }

    pub fn count(&self) -> u64 {
        self.roots.iter().map(|r| r.1).product()
    }

    pub fn characters(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for mut idx in 0..self.count() {
            out.push(
                self.roots
                    .iter()
                    .map(|&(_, g)| {
                        let w = idx % g;
                        idx /= g;
                        w
                    })
                    .collect(),
            );
        }
        out
    }

    /// `eps(p)`, `None` when `p` is not a unit.
    pub fn eval(&self, w: &[u64], p: u64) -> Option<FqElem> {
        let log = self.group.log(p)?;
        let f = &self.big;
        Some(self.roots.iter().zip(w).zip(&log).fold(f.one(), |acc, ((&(z, g), &wj), &lj)| {
            f.mul(acc, f.pow(z, (wj as u128 * lj as u128) % g as u128))
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivingHypothesis {
    pub hypothesis: CharacterHypothesis,
    /// Table primes at which `eps(p) p^i` is a root.
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Refutation {
    /// Each hypothesis with the first table prime that kills it.
    Refuted(Vec<(CharacterHypothesis, u64)>),
    Survives(Vec<SurvivingHypothesis>),
    InsufficientData,
}

fn usable(table: &EigenTable, ell: u64) -> impl Iterator<Item = (u64, QuadInt)> + '_ {
    table.entries_for(ell)
}

/// Tests every `mu = chi^i eps`, `eps` a character mod `modulus` with values
/// in `F_{l^{3t}}`: `mu` survives iff `eps(p) p^i` is a root of the residual
/// characteristic polynomial at every usable table prime.
pub fn refute_character(table: &EigenTable, red: &Reduction, modulus: u64) -> Result<Refutation> {
    let ell = red.ell;
    let entries: Vec<(u64, QuadInt)> =
        usable(table, ell).filter(|(p, _)| crate::arith::int::gcd(*p, modulus.max(1)) == 1).collect();
    if entries.is_empty() {
        return Ok(Refutation::InsufficientData);
    }
    let t = red.field.degree();
    let big = FqField::new(ell, 3 * t)?;
    let emb = red.field.embedding_into(&big)?;
    let fam = CharacterFamily::new(modulus, big.clone())?;
    let polys: Vec<(u64, Vec<FqElem>)> = entries
        .iter()
        .map(|&(p, a)| Ok((p, emb.map_poly(&residual_charpoly(p, a, red)?))))
        .collect::<Result<_>>()?;
    let mut killed = Vec::new();
    let mut survivors = Vec::new();
    for i in 0..3u8 {
        for w in fam.characters() {
            let hyp = CharacterHypothesis { exponent: i, modulus: modulus.max(1), character: w.clone() };
            let mut killer = None;
            let mut roots_at = Vec::new();
            for (p, f) in &polys {
                let eps = fam.eval(&w, *p).expect("p coprime to modulus");
                let mu = big.mul(eps, big.pow(big.from_u64(*p), i as u128));
                if big.is_zero(poly::eval(&big, f, mu)) {
                    roots_at.push(*p);
                } else {
                    killer = Some(*p);
                    break;
                }
            }
            match killer {
                Some(p) => killed.push((hyp, p)),
                None => survivors.push(SurvivingHypothesis { hypothesis: hyp, primes: roots_at }),
            }
        }
    }
    Ok(if survivors.is_empty() { Refutation::Refuted(killed) } else { Refutation::Survives(survivors) })
}

/// Order in `PGL(3)` of any semisimple matrix with characteristic polynomial
/// `f`: the lcm of the orders of the root ratios. `None` unless `f` is
/// squarefree with nonzero constant term.
pub fn projective_order(field: &Arc<FqField>, f: &[FqElem]) -> Result<Option<u128>> {
    if !poly::is_squarefree(field, f) || f.first().is_none_or(|&c| field.is_zero(c)) {
        return Ok(None);
    }
    let deg = poly::degree(f, field).ok_or(Error::ZeroElement)?;
    let here = poly::roots(field, f)?.len();
    // splitting degree: all roots here, a root plus a quadratic, or irreducible
    let m = match (deg, here) {
        (_, r) if r == deg => 1,
        (3, 1) | (2, 0) => 2,
        (3, 0) => 3,
        _ => return Err(Error::UnsupportedDegree(deg)),
    };
    let (big, emb): (Arc<FqField>, Option<Embedding>) = if m == 1 {
        (field.clone(), None)
    } else {
        let big = FqField::new(field.characteristic(), field.degree() * m)?;
        let emb = field.embedding_into(&big)?;
        (big, Some(emb))
    };
    let g = match &emb {
        Some(e) => e.map_poly(f),
        None => f.to_vec(),
    };
    let roots: Vec<FqElem> = poly::roots(&big, &g)?.into_iter().map(|r| r.0).collect();
    let mut order = 1u128;
    for (i, &a) in roots.iter().enumerate() {
        for &b in &roots[i + 1..] {
            let o = big.element_order(big.div(a, b)?)?;
            order = order / gcd_u128(order, o) * o;
        }
    }
    Ok(Some(order))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    PSL3,
    PSU3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictStatus {
    ExcludedByHypothesis,
    CertifiedFull(Target),
    Candidate(Vec<String>),
    InsufficientData,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictStatus::ExcludedByHypothesis => f.write_str("excluded_by_hypothesis"),
            VerdictStatus::CertifiedFull(t) => write!(f, "certified:{t:?}"),
            VerdictStatus::Candidate(cases) => write!(f, "candidate:{}", cases.join(",")),
            VerdictStatus::InsufficientData => f.write_str("insufficient_data"),
        }
    }
}

impl Serialize for VerdictStatus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The prime (if any) and quantity excluding or supporting a case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub p: Option<u64>,
    pub detail: String,
}

impl Witness {
    fn at(p: u64, detail: impl Into<String>) -> Self {
        Witness { p: Some(p), detail: detail.into() }
    }

    fn structural(detail: impl Into<String>) -> Self {
        Witness { p: None, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub ell: u64,
    pub splitting: SplittingType,
    pub status: VerdictStatus,
    /// Case id -> exclusion witness.
    pub witnesses: BTreeMap<String, Witness>,
    /// Case id -> why it survives.
    pub evidence: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
enum Outcome {
    Excluded(Witness),
    Survives(String),
    NoData(String),
}

#[derive(Debug, Clone, Default)]
pub struct CertifyOptions<'a> {
    /// Family reducibility candidates, valid for this `l`.
    pub reducible_sieve: Option<&'a PrimeSet>,
    /// Use the root `l - r` of `-D` instead of `r`.
    pub swap_embedding: bool,
}

/// [`certify_image_with`] with default options.
pub fn certify_image(ell: u64, table: &EigenTable, preset: &Preset) -> Result<PrimeVerdict> {
    certify_image_with(ell, table, preset, &CertifyOptions::default())
}

/// Runs every case exclusion at `l` and combines the outcomes.
pub fn certify_image_with(
    ell: u64,
    table: &EigenTable,
    preset: &Preset,
    opts: &CertifyOptions<'_>,
) -> Result<PrimeVerdict> {
    if !is_prime(ell) {
        return Err(Error::Invalid(format!("{ell} is not prime")));
    }
    let desc = &table.descriptor;
    let split = if ell == 2 { SplittingType::Ramified } else { splitting(desc.d, ell)? };
    let mut verdict = PrimeVerdict {
        ell,
        splitting: split,
        status: VerdictStatus::InsufficientData,
        witnesses: BTreeMap::new(),
        evidence: BTreeMap::new(),
    };
    if ell == 2 || split == SplittingType::Ramified || desc.is_excluded_by_hypothesis(ell) {
        verdict.status = VerdictStatus::ExcludedByHypothesis;
        return Ok(verdict);
    }
    if ell == 3 {
        verdict.evidence.insert("all".into(), "l = 3 is not analysed".into());
        return Ok(verdict);
    }
    let red = Reduction::with_swap(desc.d, ell, opts.swap_embedding)?;
    let f = red.field.clone();
    let inert = split == SplittingType::Inert;
    let t = red.field.degree() as u32;
    let entries: Vec<(u64, QuadInt)> = usable(table, ell).collect();
    let mut outcomes: Vec<(String, Outcome)> = Vec::new();

    // (1) reducible
    let red_outcome = if opts.reducible_sieve.is_some_and(|s| !s.contains(ell)) {
        Outcome::Excluded(Witness::structural("outside the family reducibility candidates"))
    } else {
        match refute_character(table, &red, desc.epsilon_modulus())? {
            Refutation::InsufficientData => Outcome::NoData("no usable table entries".into()),
            Refutation::Refuted(killed) => {
                let ps: BTreeSet<u64> = killed.iter().map(|k| k.1).collect();
                let ps: Vec<String> = ps.iter().map(u64::to_string).collect();
                Outcome::Excluded(Witness {
                    p: killed.iter().map(|k| k.1).max(),
                    detail: format!("{} character hypotheses refuted at p in {{{}}}", killed.len(), ps.join(",")),
                })
            }
            Refutation::Survives(s) => {
                let hs: Vec<String> = s.iter().map(|h| h.hypothesis.to_string()).collect();
                Outcome::Survives(format!("surviving: {}", hs.join("; ")))
            }
        }
    };
    outcomes.push(("reducible".into(), red_outcome));

    // (2) case c
    let gammas = enumerate_characters(desc.quadratic_character_modulus(), 2)?;
    outcomes.push(("c".into(), all_characters(&gammas, |gamma| {
        let mut seen = false;
        for &(p, a) in &entries {
            if gamma.sign(p) != Some(-1) {
                continue;
            }
            seen = true;
            let n = a.norm()? as i128 - (p as i128) * (p as i128);
            if n.rem_euclid(ell as i128) != 0 {
                return Ok(Outcome::Excluded(Witness::at(p, format!("N(a_p) - p^2 = {n}"))));
            }
        }
        Ok(if seen {
            Outcome::Survives(format!("N(a_p) = p^2 mod l wherever {gamma}(p) = -1"))
        } else {
            Outcome::NoData(format!("no p with {gamma}(p) = -1"))
        })
    }, "no quadratic characters unramified outside the bad primes")?));

    // (3) case d
    let psis = enumerate_characters(desc.cubic_character_modulus(), 3)?;
    outcomes.push(("d".into(), all_characters(&psis, |psi| {
        let mut seen = false;
        for &(p, a) in &entries {
            if psi.is_trivial_at(p) != Some(false) {
                continue;
            }
            seen = true;
            if !f.is_zero(red.reduce(&a)) {
                return Ok(Outcome::Excluded(Witness::at(p, format!("a_p = {a} nonzero mod l"))));
            }
        }
        Ok(if seen {
            Outcome::Survives(format!("a_p = 0 mod l wherever {psi}(p) != 1"))
        } else {
            Outcome::NoData(format!("no p with {psi}(p) != 1"))
        })
    }, "no cubic characters unramified outside the bad primes")?));

    // (4) case e, and f with k = 1 at inert l
    let e_outcome = if desc.d == 3 {
        Outcome::NoData("a^3 = conj(a)^3 criterion needs K != Q(sqrt(-3))".into())
    } else {
        let mut out = None;
        for &(p, a) in &entries {
            let v = selfdual_value(a)?;
            if !f.is_zero(red.reduce(&v)) {
                out = Some(Outcome::Excluded(Witness::at(p, format!("a^3 - conj(a)^3 = {v} nonzero mod l"))));
                break;
            }
        }
        out.unwrap_or_else(|| {
            if entries.is_empty() {
                Outcome::NoData("no usable table entries".into())
            } else {
                Outcome::Survives("a_p^3 = conj(a_p)^3 mod l at every entry".into())
            }
        })
    };
    if inert {
        outcomes.push(("f1".into(), e_outcome.clone()));
    }
    outcomes.push(("e".into(), e_outcome));

    // (5) exceptional
    let triggers = preset.triggers(ell, t);
    let orders: Vec<(u64, u128)> = entries
        .iter()
        .map(|&(p, a)| Ok((p, projective_order(&f, &residual_charpoly(p, a, &red)?)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(p, o)| o.map(|o| (p, o)))
        .collect();
    for (case, group_order) in preset.admissible_groups(ell, t) {
        let outcome = if !triggers.iter().any(|tr| tr.0 == case) {
            Outcome::Excluded(Witness::structural(format!(
                "no element order of {case} in {{l-1, l+1, l^2+l+1}}"
            )))
        } else if let Some(&(p, o)) = orders.iter().find(|(_, o)| group_order % o != 0) {
            Outcome::Excluded(Witness::at(p, format!("projective order {o} does not divide {group_order}")))
        } else if orders.is_empty() {
            Outcome::NoData("no squarefree residual characteristic polynomial".into())
        } else {
            Outcome::Survives(format!("every projective order divides {group_order}"))
        };
        outcomes.push((case.to_string(), outcome));
    }

    // (6) inert: conjugation is Frobenius, so the image is unitary
    if inert {
        for &(p, a) in &entries {
            if red.reduce(&a.conj()) != f.frobenius(red.reduce(&a)) {
                return Err(Error::Invalid(format!("reduction of conj(a_{p}) is not the Frobenius image")));
            }
        }
        outcomes.push((
            "f2".into(),
            Outcome::Excluded(Witness::structural("conj(a_p) = a_p^l mod l; Singer orders impossible")),
        ));
    }

    let mut surviving = Vec::new();
    let mut any_evidence = false;
    for (case, o) in outcomes {
        match o {
            Outcome::Excluded(w) => {
                verdict.witnesses.insert(case, w);
            }
            Outcome::Survives(e) => {
                any_evidence = true;
                verdict.evidence.insert(case.clone(), e);
                surviving.push(case);
            }
            Outcome::NoData(e) => {
                verdict.evidence.insert(case.clone(), e);
                surviving.push(case);
            }
        }
    }
    verdict.status = if surviving.is_empty() {
        VerdictStatus::CertifiedFull(if inert { Target::PSU3 } else { Target::PSL3 })
    } else if any_evidence {
        VerdictStatus::Candidate(surviving)
    } else {
        VerdictStatus::InsufficientData
    };
    Ok(verdict)
}

/// Combines per-character outcomes: excluded iff every character is.
fn all_characters<C>(
    chars: &[C],
    mut per: impl FnMut(&C) -> Result<Outcome>,
    vacuous: &str,
) -> Result<Outcome> {
    if chars.is_empty() {
        return Ok(Outcome::Excluded(Witness::structural(vacuous)));
    }
    let mut ws = Vec::new();
    for c in chars {
        match per(c)? {
            Outcome::Excluded(w) => ws.push(w),
            other => return Ok(other),
        }
    }
    let ps: BTreeSet<u64> = ws.iter().filter_map(|w| w.p).collect();
    let list: Vec<String> = ps.iter().map(u64::to_string).collect();
    Ok(Outcome::Excluded(Witness {
        p: ps.iter().next_back().copied(),
        detail: format!("{} characters, witnesses p in {{{}}}", chars.len(), list.join(",")),
    }))
}

/// `p -> (x, y)` with `b_p = x + y sqrt(-D)`.
pub type CoefficientTable = BTreeMap<u64, (i128, i128)>;

/// Lines `bp <p> <x> <y>`, `#` comments.
pub fn parse_coefficients(text: &str) -> Result<CoefficientTable> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["bp", p, x, y] => {
                let bad = |what: &str, v: &str| Error::parse(line, format!("invalid {what}: {v:?}"));
                let p: u64 = p.parse().map_err(|_| bad("p", p))?;
                let x: i128 = x.parse().map_err(|_| bad("x", x))?;
                let y: i128 = y.parse().map_err(|_| bad("y", y))?;
                if out.insert(p, (x, y)).is_some() {
                    return Err(Error::parse(line, format!("duplicate entry for p = {p}")));
                }
            }
            _ => return Err(Error::parse(line, "expected `bp <p> <x> <y>`")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub ell: u64,
    pub checked: Vec<u64>,
    pub violations: Vec<u64>,
}

/// Checks `a_p = c(p) + b_p` in the residue field at `l` for every common
/// prime `p` not dividing `l N` and not bad; `offset` holds the integer
/// coefficients of `c`, constant term first.
pub fn congruence_check(
    a: &EigenTable,
    b: &CoefficientTable,
    offset: &[i128],
    ell: u64,
) -> Result<CongruenceReport> {
    let d = a.d();
    let red = Reduction::new(d, ell)?;
    let f = &red.field;
    let desc = &a.descriptor;
    let mut rep = CongruenceReport { ell, checked: Vec::new(), violations: Vec::new() };
    for (p, ap) in a.iter() {
        let Some(&(x, y)) = b.get(&p) else { continue };
        if p == ell || desc.bad_primes.contains(&p) || (desc.level > 0 && desc.level % p == 0) {
            continue;
        }
        let c = offset.iter().rev().fold(0u64, |acc, &k| {
            ((acc as u128 * (p % ell) as u128 + k.rem_euclid(ell as i128) as u128) % ell as u128) as u64
        });
        let rhs = f.add(f.from_u64(c), red.reduce(&QuadInt::new(x, y, d)));
        rep.checked.push(p);
        if red.reduce(&ap) != rhs {
            rep.violations.push(p);
        }
    }
    if rep.checked.is_empty() {
        return Err(Error::Invalid("no common primes to compare".into()));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::PresetSet;
    use crate::family::parse_table;

    fn s2() -> EigenTable {
        parse_table(include_str!("../fixtures/s2.tbl")).unwrap()
    }

    #[test]
    fn trivial_character_survives_at_5() {
        let t = s2();
        let red = Reduction::new(1, 5).unwrap();
        let Refutation::Survives(s) = refute_character(&t, &red, 128).unwrap() else {
            panic!("expected survivors");
        };
        assert!(s.iter().any(|h| h.hypothesis.exponent == 0 && h.hypothesis.character.iter().all(|&w| w == 0)));
    }

    #[test]
    fn single_entry_root_one() {
        let t = parse_table("field-D 1\nbad 2\nmode geometric 128\nap 3 1 2\n").unwrap();
        let red = Reduction::new(1, 5).unwrap();
        assert!(matches!(refute_character(&t, &red, 128).unwrap(), Refutation::Survives(_)));
        let empty = parse_table("field-D 1\nbad 2\nmode geometric 128\n").unwrap();
        assert_eq!(refute_character(&empty, &red, 128).unwrap(), Refutation::InsufficientData);
    }

    #[test]
    fn character_family_is_multiplicative() {
        let big = FqField::new(13, 3).unwrap();
        let fam = CharacterFamily::new(128, big.clone()).unwrap();
        assert_eq!(fam.count(), 8);
        for w in fam.characters() {
            for a in (1..128).step_by(2) {
                for b in (1..128).step_by(6) {
                    let lhs = fam.eval(&w, a * b % 128).unwrap();
                    let rhs = big.mul(fam.eval(&w, a).unwrap(), fam.eval(&w, b).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn projective_order_examples() {
        let f7 = FqField::new(7, 1).unwrap();
        let cube = f7.lift_prime_poly(&[6, 3, 4, 1]);
        assert_eq!(projective_order(&f7, &cube).unwrap(), None);
        let g = f7.primitive_element();
        let lin = |r: FqElem| vec![f7.neg(r), f7.one()];
        let f = poly::mul(&f7, &poly::mul(&f7, &lin(f7.one()), &lin(g)), &lin(f7.mul(g, g)));
        assert_eq!(projective_order(&f7, &f).unwrap(), Some(6));
        // x^3 + x + 3 over F_5: root 1 and a conjugate pair in F_25
        let f5 = FqField::new(5, 1).unwrap();
        let o = projective_order(&f5, &f5.lift_prime_poly(&[3, 1, 0, 1])).unwrap().unwrap();
        let f25 = FqField::new(5, 2).unwrap();
        let emb = f5.embedding_into(&f25).unwrap();
        let rs: Vec<FqElem> = poly::roots(&f25, &emb.map_poly(&f5.lift_prime_poly(&[3, 1, 0, 1])))
            .unwrap()
            .into_iter()
            .map(|r| r.0)
            .collect();
        let mut want = 1u128;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let x = f25.element_order(f25.div(rs[i], rs[j]).unwrap()).unwrap();
                    want = want / gcd_u128(want, x) * x;
                }
            }
        }
        assert_eq!(o, want);
    }

    #[test]
    fn excluded_and_small_primes() {
        let t = s2();
        let set = PresetSet::builtin();
        let p = set.get("derived").unwrap();
        assert_eq!(certify_image(2, &t, p).unwrap().status, VerdictStatus::ExcludedByHypothesis);
        assert_eq!(certify_image(3, &t, p).unwrap().status, VerdictStatus::InsufficientData);
        let v = certify_image(5, &t, p).unwrap();
        assert!(v.status.to_string().starts_with("candidate:reducible"));
        for case in ["c", "d", "e"] {
            assert!(v.witnesses.contains_key(case), "{case}");
        }
    }

    #[test]
    fn status_strings() {
        assert_eq!(VerdictStatus::CertifiedFull(Target::PSU3).to_string(), "certified:PSU3");
        assert_eq!(VerdictStatus::Candidate(vec!["c".into(), "e".into()]).to_string(), "candidate:c,e");
    }

    #[test]
    fn congruence_identity_and_perturbation() {
        let t = s2();
        let mut b: CoefficientTable = t.iter().map(|(p, a)| (p, (a.x - 1, a.y))).collect();
        let r = congruence_check(&t, &b, &[1], 5).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.checked, vec![3, 127]);
        b.get_mut(&127).unwrap().0 += 1;
        assert_eq!(congruence_check(&t, &b, &[1], 5).unwrap().violations, vec![127]);
        assert!(congruence_check(&t, &CoefficientTable::new(), &[1], 5).is_err());
    }

    #[test]
    fn coefficient_parsing() {
        let b = parse_coefficients("# weight 8\nbp 3 -2 0\nbp 5 7 1 # note\n").unwrap();
        assert_eq!(b[&5], (7, 1));
        assert!(matches!(parse_coefficients("bp 3 x 0"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_coefficients("bp 3 1 0\nbp 3 1 0\n").is_err());
    }
}
