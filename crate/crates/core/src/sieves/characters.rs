//! Dirichlet characters through a cyclic decomposition of `(Z/m)^*`.
//!
//! `(Z/2^k)^*` is generated by `-1` and `5`; `(Z/q^e)^*` for odd `q` by a
//! primitive root. Generators are lifted to `(Z/m)^*` by the Chinese
//! remainder theorem, and discrete logarithms are read from per-component
//! lookup tables.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::int::{factor, gcd, mul_mod, pow_mod};
use crate::{Error, Result};

/// Largest modulus accepted: discrete-log tables are built eagerly.
pub const MAX_MODULUS: u64 = 1 << 24;

#[derive(Debug)]
struct Component {
    /// Prime power modulus of this component.
    modulus: u64,
    /// Residue of the generator modulo `modulus`.
    base: u64,
    order: u64,
    /// Residue -> exponent, for `base` alone.
    log: HashMap<u64, u64>,
    /// `-1` factor for the 2-power component with two generators.
    sign: bool,
}

/// `(Z/m)^*` as a product of cyclic groups.
#[derive(Debug)]
pub struct UnitGroup {
    pub modulus: u64,
    /// Lifted generators and their orders.
    pub generators: Vec<(u64, u64)>,
    /// Component index for each generator.
    slots: Vec<(usize, bool)>,
    components: Vec<Component>,
}

fn crt_lift(m: u64, part: u64, residue: u64) -> u64 {
    // x = residue mod part, x = 1 mod m/part
    let rest = m / part;
    if rest == 1 {
        return residue % m;
    }
    let inv = modinv(rest % part, part);
    let t = mul_mod((residue + part - 1) % part, inv, part);
    (1 + (rest as u128 * t as u128) as u64) % m
}

fn modinv(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m as i128) as u64
}

fn table(base: u64, order: u64, modulus: u64) -> HashMap<u64, u64> {
    let mut log = HashMap::with_capacity(order as usize);
    let mut x = 1 % modulus;
    for e in 0..order {
        log.insert(x, e);
        x = mul_mod(x, base, modulus);
    }
    log
}

impl UnitGroup {
    pub fn new(modulus: u64) -> Result<Arc<UnitGroup>> {
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(Error::Invalid(format!("character modulus {modulus} out of range")));
        }
        let mut components = Vec::new();
        for &(q, e) in &factor(modulus).factors {
            let pe = q.pow(e);
            if q == 2 {
                if e >= 2 {
                    let order = if e >= 3 { pe / 4 } else { 1 };
                    components.push(Component {
                        modulus: pe,
                        base: 5 % pe,
                        order,
                        log: table(5 % pe, order, pe),
                        sign: true,
                    });
                }
            } else {
                let order = pe / q * (q - 1);
                let base = primitive_root(q, e);
                components.push(Component { modulus: pe, base, order, log: table(base, order, pe), sign: false });
            }
        }
        let mut generators = Vec::new();
        let mut slots = Vec::new();
        for (idx, c) in components.iter().enumerate() {
            if c.sign {
                generators.push((crt_lift(modulus, c.modulus, c.modulus - 1), 2));
                slots.push((idx, true));
            }
            if c.order > 1 {
                generators.push((crt_lift(modulus, c.modulus, c.base), c.order));
                slots.push((idx, false));
            }
        }
        Ok(Arc::new(UnitGroup { modulus, generators, slots, components }))
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|g| g.1).product()
    }

    /// Exponents of `n` with respect to [`Self::generators`]; `None` unless
    /// `gcd(n, m) = 1`.
    pub fn log(&self, n: u64) -> Option<Vec<u64>> {
        if gcd(n % self.modulus.max(1), self.modulus) != 1 && self.modulus > 1 {
            return None;
        }
        let mut out = Vec::with_capacity(self.slots.len());
        for &(idx, is_sign) in &self.slots {
            let c = &self.components[idx];
            let mut r = n % c.modulus;
            let neg = c.sign && r % 4 == 3;
            if is_sign {
                out.push(neg as u64);
                continue;
            }
            if neg {
                r = c.modulus - r;
            }
            out.push(*c.log.get(&r).expect("unit has a logarithm"));
        }
        Some(out)
    }
}

fn primitive_root(q: u64, e: u32) -> u64 {
    let fac = factor(q - 1);
    let g = (2..q)
        .find(|&g| fac.primes().all(|r| pow_mod(g, (q - 1) / r, q) != 1))
        .unwrap_or(1);
    if e == 1 {
        return g;
    }
    let q2 = q * q;
    if pow_mod(g, q - 1, q2) == 1 {
        g + q
    } else {
        g
    }
}

/// Character of prime order `r`: `chi(g_j) = zeta_r^values[j]`.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterSpec {
    pub modulus: u64,
    pub order: u32,
    pub values: Vec<u32>,
    #[serde(skip)]
    pub group: Arc<UnitGroup>,
}

impl PartialEq for CharacterSpec {
    fn eq(&self, other: &Self) -> bool {
        (self.modulus, self.order, &self.values) == (other.modulus, other.order, &other.values)
    }
}

impl CharacterSpec {
    /// Exponent `e` with `chi(n) = zeta_r^e`, `None` if `n` is not a unit.
    pub fn eval(&self, n: u64) -> Option<u32> {
        let log = self.group.log(n)?;
        let r = self.order as u64;
        Some((log.iter().zip(&self.values).map(|(&l, &v)| l % r * v as u64).sum::<u64>() % r) as u32)
    }

    /// Value in `{+1, -1}` of an order-2 character.
    pub fn sign(&self, n: u64) -> Option<i8> {
        debug_assert_eq!(self.order, 2);
        self.eval(n).map(|e| if e == 0 { 1 } else { -1 })
    }

    pub fn is_trivial_at(&self, n: u64) -> Option<bool> {
        self.eval(n).map(|e| e == 0)
    }
}

impl std::fmt::Display for CharacterSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self
            .group
            .generators
            .iter()
            .zip(&self.values)
            .map(|((g, _), v)| format!("{g}->{v}"))
            .collect();
        write!(f, "order-{} character mod {} [{}]", self.order, self.modulus, gens.join(", "))
    }
}

/// All characters of exact prime order `r` of `(Z/modulus)^*`.
pub fn enumerate_characters(modulus: u64, r: u32) -> Result<Vec<CharacterSpec>> {
    if !(r == 2 || r == 3) {
        return Err(Error::Invalid(format!("character order {r} not supported")));
    }
    let group = UnitGroup::new(modulus)?;
    // a generator of order o can take value zeta_r^v only if r | o
    let choices: Vec<u32> = group.generators.iter().map(|&(_, o)| if o % r as u64 == 0 { r } else { 1 }).collect();
    let total: u64 = choices.iter().map(|&c| c as u64).product();
    let mut out = Vec::new();
    for mut idx in 1..total {
        let values = choices
            .iter()
            .map(|&c| {
                let v = (idx % c as u64) as u32;
                idx /= c as u64;
                v
            })
            .collect();
        out.push(CharacterSpec { modulus, order: r, values, group: group.clone() });
    }
    Ok(out)
}
