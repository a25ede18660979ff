//! Element-order spectra of the exceptional groups and the presets that
//! drive the exceptional-case sieve.
//!
//! Preset files use the table token format:
//!
//! ```text
//! preset <name>
//! mode conservative|strict
//! applies split|inert|all
//! default-for <D> ...
//! spectrum <case> derived|config <order> ...
//! end
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::{projective_inertia_orders, CaseId, CatalogEntry};
use crate::arith::quad::SplittingType;
use crate::{Error, Result};

const BUILTIN: &str = include_str!("../../fixtures/spectra.cfg");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Computed by the closure oracle.
    Derived,
    /// Supplied as configuration.
    Config,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderSpectrum {
    pub case_id: CaseId,
    pub orders: BTreeSet<u64>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    /// Existence predicates of the classification apply.
    Strict,
    /// Existence predicates are ignored, except that the extra groups at
    /// `(l, t) = (5, 2)` stay confined there.
    Conservative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Applies {
    Split,
    Inert,
    All,
}

impl Applies {
    /// Ramified primes are treated as split.
    pub fn matches(self, s: SplittingType) -> bool {
        match self {
            Applies::All => true,
            Applies::Split => s != SplittingType::Inert,
            Applies::Inert => s == SplittingType::Inert,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Preset {
    pub name: String,
    pub mode: Admissibility,
    pub applies: Applies,
    pub default_for: BTreeSet<u64>,
    pub spectra: Vec<OrderSpectrum>,
}

impl Preset {
    pub fn is_admissible(&self, case: CaseId, ell: u64, t: u32) -> bool {
        match (self.mode, case) {
            (_, CaseId::X2A6 | CaseId::XA7) => ell == 5 && t == 2,
            (Admissibility::Conservative, _) => case.is_exceptional(),
            (Admissibility::Strict, _) => {
                case.is_exceptional() && CatalogEntry { case_id: case }.exists(ell, t)
            }
        }
    }

    /// Union of every spectrum line for `case`.
    pub fn spectrum(&self, case: CaseId) -> BTreeSet<u64> {
        self.spectra.iter().filter(|s| s.case_id == case).flat_map(|s| s.orders.clone()).collect()
    }

    pub fn cases(&self) -> BTreeSet<CaseId> {
        self.spectra.iter().map(|s| s.case_id).collect()
    }

    /// Exceptional groups admissible at `(l, t)` with their orders.
    pub fn admissible_groups(&self, ell: u64, t: u32) -> Vec<(CaseId, u128)> {
        self.cases()
            .into_iter()
            .filter(|&c| self.is_admissible(c, ell, t))
            .filter_map(|c| c.fixed_order().map(|n| (c, n)))
            .collect()
    }

    pub fn max_order(&self) -> u64 {
        self.spectra.iter().flat_map(|s| s.orders.iter().copied()).max().unwrap_or(1)
    }

    /// `(case, order)` pairs making `l` an exceptional candidate at degree `t`.
    pub fn triggers(&self, ell: u64, t: u32) -> Vec<(CaseId, u64)> {
        let inertia = projective_inertia_orders(ell);
        let mut out = Vec::new();
        for c in self.cases() {
            if !self.is_admissible(c, ell, t) {
                continue;
            }
            for &o in self.spectrum(c).intersection(&inertia) {
                out.push((c, o));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "preset {}", self.name);
        let mode = match self.mode {
            Admissibility::Strict => "strict",
            Admissibility::Conservative => "conservative",
        };
        let _ = writeln!(s, "mode {mode}");
        let applies = match self.applies {
            Applies::Split => "split",
            Applies::Inert => "inert",
            Applies::All => "all",
        };
        let _ = writeln!(s, "applies {applies}");
        if !self.default_for.is_empty() {
            let ds: Vec<String> = self.default_for.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "default-for {}", ds.join(" "));
        }
        for sp in &self.spectra {
            let prov = match sp.provenance {
                Provenance::Derived => "derived",
                Provenance::Config => "config",
            };
            let os: Vec<String> = sp.orders.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "spectrum {} {prov} {}", sp.case_id, os.join(" "));
        }
        s.push_str("end\n");
        s
    }
}

/// `{ l > 3 : degree(l) is Some(t) and some admissible group's spectrum
/// meets {l-1, l+1, l^2+l+1} }`, searched up to `1 + max order`.
pub fn exceptional_candidates(
    preset: &Preset,
    degree: impl Fn(u64) -> Option<u32>,
) -> BTreeSet<u64> {
    crate::arith::int::primes_between(5, preset.max_order() + 1)
        .into_iter()
        .filter(|&ell| degree(ell).is_some_and(|t| !preset.triggers(ell, t).is_empty()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresetSet {
    pub presets: Vec<Preset>,
}

impl PresetSet {
    pub fn builtin() -> PresetSet {
        Self::parse(BUILTIN).expect("built-in spectra.cfg parses")
    }

    pub fn get(&self, name: &str) -> Option<&Preset> {
        self.presets.iter().find(|p| p.name == name)
    }

    /// Presets selected by default for the field parameter `d`; falls back to
    /// the preset named `derived`.
    pub fn defaults_for(&self, d: u64) -> Vec<&Preset> {
        let v: Vec<&Preset> = self.presets.iter().filter(|p| p.default_for.contains(&d)).collect();
        if v.is_empty() {
            self.get("derived").into_iter().collect()
        } else {
            v
        }
    }

    pub fn parse(text: &str) -> Result<PresetSet> {
        let mut presets = Vec::new();
        let mut cur: Option<Preset> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            let Some((&head, rest)) = toks.split_first() else { continue };
            let need = |cur: &mut Option<Preset>| -> Result<()> {
                if cur.is_none() {
                    return Err(Error::parse(line, format!("{head} outside a preset block")));
                }
                Ok(())
            };
            let one = || -> Result<&str> {
                match rest {
                    [x] => Ok(*x),
                    _ => Err(Error::parse(line, format!("{head} takes one argument"))),
                }
            };
            match head {
                "preset" => {
                    if cur.is_some() {
                        return Err(Error::parse(line, "nested preset block"));
                    }
                    cur = Some(Preset {
                        name: one()?.to_string(),
                        mode: Admissibility::Conservative,
                        applies: Applies::All,
                        default_for: BTreeSet::new(),
                        spectra: Vec::new(),
                    });
                }
                "mode" => {
                    need(&mut cur)?;
                    let m = match one()? {
                        "strict" => Admissibility::Strict,
                        "conservative" => Admissibility::Conservative,
                        o => return Err(Error::parse(line, format!("unknown mode {o:?}"))),
                    };
                    cur.as_mut().unwrap().mode = m;
                }
                "applies" => {
                    need(&mut cur)?;
                    let a = match one()? {
                        "split" => Applies::Split,
                        "inert" => Applies::Inert,
                        "all" => Applies::All,
                        o => return Err(Error::parse(line, format!("unknown applies {o:?}"))),
                    };
                    cur.as_mut().unwrap().applies = a;
                }
                "default-for" => {
                    need(&mut cur)?;
                    for t in rest {
                        let d = t.parse().map_err(|_| Error::parse(line, format!("bad D {t:?}")))?;
                        cur.as_mut().unwrap().default_for.insert(d);
                    }
                }
                "spectrum" => {
                    need(&mut cur)?;
                    let [case, prov, orders @ ..] = rest else {
                        return Err(Error::parse(line, "spectrum <case> derived|config <orders>"));
                    };
                    let case_id: CaseId = case.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
                    if !case_id.is_exceptional() {
                        return Err(Error::parse(line, format!("case {case} is not exceptional")));
                    }
                    let provenance = match *prov {
                        "derived" => Provenance::Derived,
                        "config" => Provenance::Config,
                        o => return Err(Error::parse(line, format!("unknown provenance {o:?}"))),
                    };
                    let group = case_id.fixed_order().expect("exceptional");
                    let mut set = BTreeSet::new();
                    for t in orders {
                        let o: u64 = t.parse().map_err(|_| Error::parse(line, format!("bad order {t:?}")))?;
                        if o == 0 || group % o as u128 != 0 {
                            return Err(Error::parse(
                                line,
                                format!("order {o} does not divide |{case_id}| = {group}"),
                            ));
                        }
                        set.insert(o);
                    }
                    cur.as_mut().unwrap().spectra.push(OrderSpectrum { case_id, orders: set, provenance });
                }
                "end" => {
                    let p = cur.take().ok_or_else(|| Error::parse(line, "end without preset"))?;
                    if p.spectra.is_empty() {
                        return Err(Error::parse(line, format!("preset {} has no spectra", p.name)));
                    }
                    if presets.iter().any(|q: &Preset| q.name == p.name) {
                        return Err(Error::parse(line, format!("duplicate preset {}", p.name)));
                    }
                    presets.push(p);
                }
                o => return Err(Error::parse(line, format!("unknown directive {o:?}"))),
            }
        }
        if cur.is_some() {
            return Err(Error::parse(0, "unterminated preset block"));
        }
        Ok(PresetSet { presets })
    }

    pub fn to_text(&self) -> String {
        self.presets.iter().map(Preset::to_text).collect::<Vec<_>>().join("\n")
    }
}

/// Spectra computed by the closure oracle for every exceptional case with a
/// matrix or permutation model.
pub fn derived_spectra() -> Result<BTreeMap<CaseId, BTreeSet<u64>>> {
    use super::group::{generators, group_closure, DEFAULT_CLOSURE_CAP};
    use crate::arith::fq::FqField;
    let f19 = FqField::new(19, 1)?;
    let mut out = BTreeMap::new();
    for (case, n) in [(CaseId::H216, 216), (CaseId::H72, 72), (CaseId::H36, 36)] {
        out.insert(case, group_closure(&generators::hessian(&f19, n)?, DEFAULT_CLOSURE_CAP)?.spectrum());
    }
    out.insert(CaseId::I, group_closure(&generators::psl27(), DEFAULT_CLOSURE_CAP)?.spectrum());
    out.insert(CaseId::J, group_closure(&generators::alternating(6), DEFAULT_CLOSURE_CAP)?.spectrum());
    out.insert(CaseId::XA7, group_closure(&generators::alternating(7), DEFAULT_CLOSURE_CAP)?.spectrum());
    Ok(out)
}
