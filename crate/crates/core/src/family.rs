//! Family descriptors, eigenvalue tables and Frobenius characteristic
//! polynomials `x^3 - a_p x^2 + p conj(a_p) x - p^3`.
//!
//! Table files are ASCII, one directive per line, `#` starts a comment:
//!
//! ```text
//! family <label>
//! field-D <D>
//! level <N|0>
//! bad <p1> <p2> ...
//! mode geometric <d> exclude <m1>:<r1> [<m2>:<r2> ...]
//! mode modular
//! hodge <bound>
//! ap <p> <x> <y>        # a_p = x + y*sqrt(-D)
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::fq::FqElem;
use crate::arith::int::{factor, is_prime, is_squarefree};
use crate::arith::quad::{check_discriminant, QuadInt, Reduction};
use crate::{Error, Result};

/// `l = residue (mod modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Congruence {
    pub modulus: u64,
    pub residue: u64,
}

impl Congruence {
    pub fn contains(&self, n: u64) -> bool {
        n % self.modulus == self.residue % self.modulus
    }
}

impl std::fmt::Display for Congruence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConductorMode {
    /// Conductor of the family unknown: `epsilon_bound` bounds the conductor
    /// of the character in the reducible case once the `excluded` classes of
    /// `l` are removed.
    Geometric { epsilon_bound: u64, excluded: Vec<Congruence> },
    /// Conductor of every residual representation divides the level, so
    /// `cond(eps)^2 | N`.
    Modular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub label: String,
    pub d: u64,
    /// 0 when unknown.
    pub level: u64,
    pub bad_primes: BTreeSet<u64>,
    pub mode: ConductorMode,
    pub hodge_multiplicity_bound: u32,
}

impl FamilyDescriptor {
    pub fn validate(&self) -> Result<()> {
        check_discriminant(self.d)?;
        if let Some(&q) = self.bad_primes.iter().find(|&&q| !is_prime(q)) {
            return Err(Error::Invalid(format!("bad prime {q} is not prime")));
        }
        match &self.mode {
            ConductorMode::Modular if self.level == 0 => {
                Err(Error::Invalid("modular mode needs a level N >= 1".into()))
            }
            ConductorMode::Geometric { epsilon_bound: 0, .. } => {
                Err(Error::Invalid("conductor bound d must be >= 1".into()))
            }
            _ if self.hodge_multiplicity_bound == 0 => {
                Err(Error::Invalid("hodge multiplicity bound must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Primes where the family may ramify besides `l`: the bad primes and
    /// the prime divisors of the level.
    pub fn ramified_primes(&self) -> BTreeSet<u64> {
        let mut s = self.bad_primes.clone();
        if self.level > 1 {
            s.extend(factor(self.level).primes());
        }
        s
    }

    /// Modulus `m` such that the character `eps` of the reducible case
    /// satisfies `eps(p) = 1` for every `p = 1 (mod m)`.
    ///
    /// Modular mode uses the level itself, except that a squarefree level
    /// forces `eps` to be trivial because `cond(eps)^2 | N`.
    pub fn epsilon_modulus(&self) -> u64 {
        match &self.mode {
            ConductorMode::Geometric { epsilon_bound, .. } => *epsilon_bound,
            ConductorMode::Modular if is_squarefree(self.level) => 1,
            ConductorMode::Modular => self.level,
        }
    }

    pub fn excluded_classes(&self) -> &[Congruence] {
        match &self.mode {
            ConductorMode::Geometric { excluded, .. } => excluded,
            ConductorMode::Modular => &[],
        }
    }

    /// Modulus carrying every quadratic character unramified outside the
    /// ramified primes: 8 for the prime 2, `q` for odd `q`.
    pub fn quadratic_character_modulus(&self) -> u64 {
        self.ramified_primes().iter().map(|&q| if q == 2 { 8 } else { q }).product()
    }

    /// `N'`: product of the ramified primes, with 9 in place of 3.
    pub fn cubic_character_modulus(&self) -> u64 {
        self.ramified_primes().iter().map(|&q| if q == 3 { 9 } else { q }).product()
    }

    /// Primes `l` never analysed: bad, dividing the level, or ramified in `K`.
    pub fn is_excluded_by_hypothesis(&self, ell: u64) -> bool {
        ell == 2
            || self.d % ell == 0
            || self.bad_primes.contains(&ell)
            || (self.level > 0 && self.level % ell == 0)
    }
}

/// Characteristic polynomial of Frobenius at `p`, leading coefficient first:
/// `(1, -a_p, p conj(a_p), -p^3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobCharPoly {
    pub p: u64,
    pub coeffs: [QuadInt; 4],
}

pub fn charpoly(p: u64, a: QuadInt) -> FrobCharPoly {
    let d = a.d;
    let pi = p as i128;
    FrobCharPoly {
        p,
        coeffs: [
            QuadInt::rational(1, d),
            -a,
            a.conj().checked_scale(pi).expect("p * conj(a_p) fits in i128"),
            QuadInt::rational(-(pi * pi * pi), d),
        ],
    }
}

impl FrobCharPoly {
    /// Coefficientwise reduction, returned low to high as a monic cubic over
    /// the residue field of `red`.
    pub fn reduce(&self, red: &Reduction) -> Vec<FqElem> {
        self.coeffs.iter().rev().map(|c| red.reduce(c)).collect()
    }
}

impl std::fmt::Display for FrobCharPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [_, b, c, e] = &self.coeffs;
        write!(f, "x^3 + ({b})x^2 + ({c})x + ({e})")
    }
}

/// Residual characteristic polynomial of Frobenius at `p` modulo the fixed
/// prime above `red.ell`.
pub fn residual_charpoly(p: u64, a: QuadInt, red: &Reduction) -> Result<Vec<FqElem>> {
    if p == red.ell {
        return Err(Error::Invalid(format!("p = {p} equals l")));
    }
    Ok(charpoly(p, a).reduce(red))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenTable {
    pub descriptor: FamilyDescriptor,
    pub entries: BTreeMap<u64, QuadInt>,
}

impl EigenTable {
    pub fn new(descriptor: FamilyDescriptor) -> Result<Self> {
        descriptor.validate()?;
        Ok(EigenTable { descriptor, entries: BTreeMap::new() })
    }

    pub fn d(&self) -> u64 {
        self.descriptor.d
    }

    /// Insert `a_p`, enforcing the table invariants.
    pub fn insert(&mut self, p: u64, a: QuadInt) -> Result<()> {
        let desc = &self.descriptor;
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if a.d != desc.d {
            return Err(Error::Invalid(format!("a_{p} lives in the wrong field")));
        }
        if desc.bad_primes.contains(&p) || (desc.level > 0 && desc.level % p == 0) {
            return Err(Error::Invalid(format!("p = {p} is a bad prime or divides the level")));
        }
        if self.entries.contains_key(&p) {
            return Err(Error::Invalid(format!("duplicate entry for p = {p}")));
        }
        let bound = 9 * (p as u128) * (p as u128);
        let n = a.norm()?;
        if n > bound {
            return Err(Error::Invalid(format!(
                "a_{p} = {a} violates the Ramanujan bound: norm {n} > 9p^2 = {bound}"
            )));
        }
        self.entries.insert(p, a);
        Ok(())
    }

    pub fn get(&self, p: u64) -> Option<QuadInt> {
        self.entries.get(&p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, QuadInt)> + '_ {
        self.entries.iter().map(|(&p, &a)| (p, a))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// The table with every `a_p` replaced by its conjugate.
    pub fn conjugated(&self) -> EigenTable {
        EigenTable {
            descriptor: self.descriptor.clone(),
            entries: self.entries.iter().map(|(&p, a)| (p, a.conj())).collect(),
        }
    }

    /// Entries usable at `l`: `p != l`.
    pub fn entries_for(&self, ell: u64) -> impl Iterator<Item = (u64, QuadInt)> + '_ {
        self.iter().filter(move |&(p, _)| p != ell)
    }

    pub fn to_text(&self) -> String {
        let d = &self.descriptor;
        let mut s = String::new();
        let _ = writeln!(s, "family {}", d.label);
        let _ = writeln!(s, "field-D {}", d.d);
        let _ = writeln!(s, "level {}", d.level);
        let bad: Vec<String> = d.bad_primes.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "bad {}", bad.join(" "));
        match &d.mode {
            ConductorMode::Geometric { epsilon_bound, excluded } => {
                let _ = write!(s, "mode geometric {epsilon_bound}");
                if !excluded.is_empty() {
                    let ex: Vec<String> =
                        excluded.iter().map(|c| format!("{}:{}", c.modulus, c.residue)).collect();
                    let _ = write!(s, " exclude {}", ex.join(" "));
                }
                s.push('\n');
            }
            ConductorMode::Modular => s.push_str("mode modular\n"),
        }
        if d.hodge_multiplicity_bound != 2 {
            let _ = writeln!(s, "hodge {}", d.hodge_multiplicity_bound);
        }
        for (p, a) in &self.entries {
            let _ = writeln!(s, "ap {p} {} {}", a.x, a.y);
        }
        s
    }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| Error::parse(line, format!("invalid {what}: {tok:?}")))
}

/// Parse and validate a table file.
pub fn parse_table(text: &str) -> Result<EigenTable> {
    let mut label = None;
    let mut d = None;
    let mut level = 0u64;
    let mut bad = BTreeSet::new();
    let mut mode = None;
    let mut hodge = 2u32;
    let mut aps = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(head) = toks.next() else { continue };
        match head {
            "family" => {
                let rest: Vec<&str> = toks.collect();
                if rest.is_empty() {
                    return Err(Error::parse(line, "missing family label"));
                }
                label = Some(rest.join(" "));
                continue;
            }
            "field-D" => d = Some(num::<u64>(toks.next(), line, "D")?),
            "level" => level = num(toks.next(), line, "level")?,
            "bad" => {
                for t in toks.by_ref() {
                    let q: u64 = num(Some(t), line, "bad prime")?;
                    if !is_prime(q) {
                        return Err(Error::parse(line, format!("bad prime {q} is not prime")));
                    }
                    bad.insert(q);
                }
            }
            "mode" => match toks.next() {
                Some("modular") => mode = Some(ConductorMode::Modular),
                Some("geometric") => {
                    let bound: u64 = num(toks.next(), line, "conductor bound")?;
                    let mut excluded = Vec::new();
                    match toks.next() {
                        None => {}
                        Some("exclude") => {
                            for t in toks.by_ref() {
                                let (m, r) = t
                                    .split_once(':')
                                    .ok_or_else(|| Error::parse(line, format!("expected m:r, got {t:?}")))?;
                                let modulus: u64 = num(Some(m), line, "modulus")?;
                                let residue: u64 = num(Some(r), line, "residue")?;
                                if modulus == 0 {
                                    return Err(Error::parse(line, "zero modulus"));
                                }
                                excluded.push(Congruence { modulus, residue: residue % modulus });
                            }
                        }
                        Some(t) => return Err(Error::parse(line, format!("unexpected token {t:?}"))),
                    }
                    mode = Some(ConductorMode::Geometric { epsilon_bound: bound, excluded });
                }
                other => return Err(Error::parse(line, format!("unknown mode {other:?}"))),
            },
            "hodge" => hodge = num(toks.next(), line, "hodge bound")?,
            "ap" => {
                let p: u64 = num(toks.next(), line, "p")?;
                let x: i128 = num(toks.next(), line, "x")?;
                let y: i128 = num(toks.next(), line, "y")?;
                aps.push((line, p, x, y));
            }
            other => return Err(Error::parse(line, format!("unknown directive {other:?}"))),
        }
        if let Some(t) = toks.next() {
            return Err(Error::parse(line, format!("trailing token {t:?}")));
        }
    }

    let d = d.ok_or_else(|| Error::parse(0, "missing field-D directive"))?;
    let mode = mode.ok_or_else(|| Error::parse(0, "missing mode directive"))?;
    let descriptor = FamilyDescriptor {
        label: label.unwrap_or_else(|| "unnamed".into()),
        d,
        level,
        bad_primes: bad,
        mode,
        hodge_multiplicity_bound: hodge,
    };
    let mut table = EigenTable::new(descriptor).map_err(|e| Error::parse(0, e.to_string()))?;
    for (line, p, x, y) in aps {
        table
            .insert(p, QuadInt::new(x, y, d))
            .map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok(table)
}
