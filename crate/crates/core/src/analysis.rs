//! End-to-end analysis: family sieves, then a verdict for every prime up to
//! `l_max`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::int::primes_between;
use crate::arith::quad::{splitting, SplittingType};
use crate::catalog::{exceptional_candidates, Preset, PresetSet};
use crate::certify::{certify_image_with, CertifyOptions, PrimeVerdict, VerdictStatus};
use crate::family::{ConductorMode, EigenTable, FamilyDescriptor};
use crate::sieves::{
    cubic_cm_sieve, duality_sieve, enumerate_characters, find_probe, reducibility_sieve, selfdual_sieve, PrimeSet,
    Probe, SieveReport,
};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub lmax: u64,
    /// Preset used for every `l`; per-`l` defaults when `None`.
    pub preset: Option<String>,
    pub presets: PresetSet,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { lmax: 200, preset: None, presets: PresetSet::builtin() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub family: FamilyDescriptor,
    pub flags: BTreeMap<String, serde_json::Value>,
    pub verdicts: Vec<PrimeVerdict>,
    pub summary: Vec<String>,
    #[serde(skip)]
    pub sieves: Vec<SieveReport>,
    #[serde(skip)]
    pub reducible_candidates: PrimeSet,
    #[serde(skip)]
    pub exceptional_candidates: BTreeSet<u64>,
    /// Reducibility candidates above `l_max`.
    #[serde(skip)]
    pub large_reducible: Vec<u64>,
}

/// Probes for the reducibility sieve.
///
/// The smallest nonreal `p = +-1 (mod m)`, `m` the modulus of `eps`. When
/// `p = -1 (mod m)` and 2 is the only bad prime, the sign `eps(p) = -1` is
/// covered instead by the next nonreal prime `q` with both signs, all in one
/// group.
pub fn choose_probes(table: &EigenTable) -> Result<Vec<Probe>> {
    let desc = &table.descriptor;
    let m = desc.epsilon_modulus().max(1);
    let probe = find_probe(table, m, &[1, m - 1]).ok_or_else(|| {
        Error::Unverifiable(format!("no nonreal a_p with p = +-1 mod {m} in the table"))
    })?;
    let odd_only_two = desc.bad_primes == BTreeSet::from([2]);
    if m > 2 && probe.p % m == m - 1 && odd_only_two {
        let q = table
            .iter()
            .find(|&(q, a)| q != probe.p && !a.is_real())
            .map(|e| e.0)
            .ok_or_else(|| Error::Unverifiable("no second nonreal a_p to pair with the probe".into()))?;
        return Ok(vec![Probe::new(probe.p, &[1], 0)?, Probe::new(q, &[1, -1], 0)?]);
    }
    Ok(vec![probe])
}

fn degree(d: u64, ell: u64) -> Option<u32> {
    match splitting(d, ell).ok()? {
        SplittingType::Inert => Some(2),
        _ => Some(1),
    }
}

/// Preset for `l`: the forced one, else the first default applying to the
/// splitting of `l`.
fn preset_for<'a>(opts: &'a AnalysisOptions, d: u64, ell: u64) -> Result<&'a Preset> {
    if let Some(name) = &opts.preset {
        return opts.presets.get(name).ok_or_else(|| Error::Invalid(format!("unknown preset {name:?}")));
    }
    let s = if ell == 2 { SplittingType::Ramified } else { splitting(d, ell)? };
    let defaults = opts.presets.defaults_for(d);
    defaults
        .iter()
        .find(|p| p.applies.matches(s))
        .or(defaults.first())
        .copied()
        .ok_or_else(|| Error::Invalid("no spectrum preset available".into()))
}

fn join(it: impl IntoIterator<Item = u64>) -> String {
    let v: Vec<String> = it.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(" ")
    }
}

pub fn analyze(table: &EigenTable, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let desc = &table.descriptor;
    let probes = choose_probes(table)?;
    let probe_primes: BTreeSet<u64> = probes.iter().map(|p| p.p).collect();
    let reducible = reducibility_sieve(table, &probes)?;

    let mut sieves = vec![reducible.clone()];
    let mut flags = BTreeMap::new();
    let mut duality = PrimeSet::empty();
    let mut duality_flag = false;
    for gamma in enumerate_characters(desc.quadratic_character_modulus(), 2)? {
        let r = duality_sieve(table, &gamma)?;
        duality_flag |= r.family_flag;
        duality = duality.union(r.candidates.clone());
        sieves.push(r);
    }
    let mut cubic = PrimeSet::empty();
    let mut cubic_flag = false;
    for psi in enumerate_characters(desc.cubic_character_modulus(), 3)? {
        let r = cubic_cm_sieve(table, &psi)?;
        cubic_flag |= r.family_flag;
        cubic = cubic.union(r.candidates.clone());
        sieves.push(r);
    }
    let nonreal: Vec<u64> = table.iter().filter(|(_, a)| !a.is_real()).map(|e| e.0).collect();
    let selfdual = selfdual_sieve(table, &nonreal)?;
    sieves.push(selfdual.clone());
    flags.insert("cubic_cm".into(), cubic_flag.into());
    flags.insert("duality".into(), duality_flag.into());
    flags.insert("self_dual".into(), selfdual.candidates.eq(&PrimeSet::All).into());
    let probe_desc: Vec<String> = probes.iter().map(|p| p.to_string()).collect();
    flags.insert("condition_1_prime".into(), format!("verified by {}", probe_desc.join(", ")).into());

    let mut exceptional = BTreeSet::new();
    let used: BTreeSet<String> = primes_between(2, opts.lmax.max(2))
        .into_iter()
        .map(|ell| preset_for(opts, desc.d, ell).map(|p| p.name.clone()))
        .collect::<Result<_>>()?;
    for name in &used {
        let p = opts.presets.get(name).expect("preset exists");
        for ell in exceptional_candidates(p, |l| degree(desc.d, l)) {
            if preset_for(opts, desc.d, ell)?.name == *name {
                exceptional.insert(ell);
            }
        }
    }

    let classes = desc.excluded_classes();
    flags.insert(
        "excluded_classes".into(),
        classes.iter().map(|c| serde_json::Value::from(c.to_string())).collect(),
    );
    let verdicts: Vec<PrimeVerdict> = primes_between(2, opts.lmax)
        .into_par_iter()
        .map(|ell| {
            let preset = preset_for(opts, desc.d, ell)?;
            let sieve = (!probe_primes.contains(&ell)).then_some(&reducible.raw);
            let mut v = certify_image_with(ell, table, preset, &CertifyOptions {
                reducible_sieve: sieve,
                swap_embedding: false,
            })?;
            if let Some(c) = classes.iter().find(|c| c.contains(ell)) {
                if v.status != VerdictStatus::ExcludedByHypothesis {
                    v.status = VerdictStatus::ExcludedByHypothesis;
                    v.evidence.insert("class".into(), format!("l = {c}"));
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;

    let large: Vec<u64> = reducible
        .candidates
        .as_finite()
        .map(|s| s.iter().copied().filter(|&l| l > opts.lmax).collect())
        .unwrap_or_default();
    let mut summary = vec![
        format!("reducible candidates: {}", reducible.candidates),
        format!("duality candidates: {duality}"),
        format!("cubic CM candidates: {cubic}"),
        format!("self-dual candidates: {}", selfdual.candidates),
        format!("exceptional candidates: {}", join(exceptional.iter().copied())),
    ];
    if let ConductorMode::Geometric { .. } = desc.mode {
        let cs: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
        summary.push(format!("excluded classes: {}", if cs.is_empty() { "none".into() } else { cs.join(", ") }));
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for v in &verdicts {
        let k = match v.status {
            VerdictStatus::CertifiedFull(_) => "certified",
            VerdictStatus::Candidate(_) => "candidate",
            VerdictStatus::InsufficientData => "insufficient_data",
            VerdictStatus::ExcludedByHypothesis => "excluded_by_hypothesis",
        };
        *counts.entry(k).or_default() += 1;
    }
    let counts: Vec<String> = counts.iter().map(|(k, n)| format!("{k} {n}")).collect();
    summary.push(format!("verdicts for l <= {}: {}", opts.lmax, counts.join(", ")));

    Ok(AnalysisReport {
        family: desc.clone(),
        flags,
        verdicts,
        summary,
        sieves,
        reducible_candidates: reducible.candidates,
        exceptional_candidates: exceptional,
        large_reducible: large,
    })
}

impl AnalysisReport {
    /// Pretty JSON with sorted keys, stable under parse and re-serialize.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = &self.family;
        let _ = writeln!(s, "family {} (D = {}, level {})", f.label, f.d, f.level);
        for v in &self.verdicts {
            let _ = writeln!(s, "l = {:<5} {:<8} {}", v.ell, format!("{:?}", v.splitting).to_lowercase(), v.status);
        }
        let _ = writeln!(s);
        for line in &self.summary {
            let _ = writeln!(s, "{line}");
        }
        if !self.large_reducible.is_empty() {
            let _ = writeln!(s);
            let _ = writeln!(s, "large reducible candidates (> l_max):");
            for l in &self.large_reducible {
                let _ = writeln!(s, "  {l}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_table;

    #[test]
    fn s2_summary() {
        let t = parse_table(include_str!("../fixtures/s2.tbl")).unwrap();
        let r = analyze(&t, &AnalysisOptions::default()).unwrap();
        assert!(r.summary.contains(&"reducible candidates: 5 13 1901 105649".to_string()));
        assert!(r.summary.contains(&"excluded classes: 1 mod 64, 31 mod 32".to_string()));
        assert_eq!(r.large_reducible, vec![1901, 105649]);
        assert_eq!(r.exceptional_candidates, BTreeSet::from([5, 7, 11, 13, 19]));
        assert!(r.to_text().contains("large reducible candidates"));
        assert_eq!(r.verdicts.len(), primes_between(2, 200).len());
    }

    #[test]
    fn level88_probe_and_exceptional() {
        let t = parse_table(include_str!("../fixtures/level88.tbl")).unwrap();
        let probes = choose_probes(&t).unwrap();
        assert_eq!(probes.len(), 1);
        assert_eq!((probes[0].p, probes[0].signs.clone()), (89, vec![1]));
        let r = analyze(&t, &AnalysisOptions::default()).unwrap();
        assert_eq!(r.exceptional_candidates, BTreeSet::from([5, 7, 11, 13, 19]));
        assert!(r.summary.contains(&"reducible candidates: 2879 48889".to_string()));
    }

    #[test]
    fn empty_table_is_unverifiable() {
        let t = parse_table(include_str!("../fixtures/level53.tbl")).unwrap();
        assert!(matches!(analyze(&t, &AnalysisOptions::default()), Err(Error::Unverifiable(_))));
    }

    #[test]
    fn json_is_deterministic() {
        let t = parse_table(include_str!("../fixtures/s2.tbl")).unwrap();
        let opts = AnalysisOptions { lmax: 60, ..Default::default() };
        let a = analyze(&t, &opts).unwrap().to_json();
        let b = analyze(&t, &opts).unwrap().to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap(), a);
        for key in ["family", "flags", "verdicts", "summary"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
