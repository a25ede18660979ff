//! Synthetic eigenvalue tables whose residual images lie in a prescribed
//! proper subgroup of `PGL(3, F_l)`.
//!
//! For a group element `g` scaled to determinant 1, the Frobenius matrix at
//! `p` is `p g`: `a_p` reduces to `p tr(g)` and `conj(a_p)` to `p tr_2(g)`.
//! The pair is lifted to `x + y sqrt(-D)` with `|x|, |y| <= l/2`.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use trigal_core::arith::quad::Reduction;
use trigal_core::catalog::{generators, group_closure, sym2, ProjMatrix};
use trigal_core::family::{EigenTable, FamilyDescriptor};
use trigal_core::sieves::enumerate_characters;
use trigal_core::{ConductorMode, FqElem, FqField, QuadInt};

pub struct Synthetic {
    pub case: &'static str,
    pub ell: u64,
    pub group_order: usize,
    pub table: EigenTable,
}

fn descriptor(label: &str, d: u64, bad: &[u64]) -> FamilyDescriptor {
    FamilyDescriptor {
        label: label.to_string(),
        d,
        level: bad.iter().product(),
        bad_primes: bad.iter().copied().collect(),
        mode: ConductorMode::Modular,
        hodge_multiplicity_bound: 2,
    }
}

/// `(tr, tr_2)` of `lambda g` with `det(lambda g) = 1`, `lambda` the first
/// such scalar in `1, 2, ..`.
pub fn det_one_traces(g: &ProjMatrix) -> Option<(FqElem, FqElem)> {
    let f = g.field();
    let (a, b, c) = g.charpoly_abc();
    let ell = f.characteristic();
    (1..ell)
        .map(|l| f.from_u64(l))
        .find(|&l| f.is_one(f.mul(f.pow(l, 3), c)))
        .map(|l| (f.mul(l, a), f.mul(f.mul(l, l), b)))
}

fn symmetric(v: u64, ell: u64) -> i128 {
    let v = v as i128;
    if v > ell as i128 / 2 {
        v - ell as i128
    } else {
        v
    }
}

/// Integer `a_p` with `a_p = p tr`, `conj(a_p) = p tr_2` in the residue field.
pub fn lift(red: &Reduction, p: u64, tr: FqElem, tr2: FqElem) -> QuadInt {
    let f = &red.field;
    let ell = red.ell;
    let pe = f.from_u64(p);
    let (a, ab) = (f.mul(pe, tr), f.mul(pe, tr2));
    let half = f.inv(f.from_u64(2)).unwrap();
    let x = f.mul(f.add(a, ab), half);
    let y = f.div(f.mul(f.sub(a, ab), half), red.sqrt_minus_d).unwrap();
    let q = |e: FqElem| symmetric(f.as_prime(e).unwrap(), ell);
    QuadInt::new(q(x), q(y), red.d)
}

/// Permutation parity of a monomial matrix; `None` otherwise.
pub fn monomial_parity(g: &ProjMatrix) -> Option<bool> {
    let f = g.field();
    let mut perm = [0usize; 3];
    for (i, slot) in perm.iter_mut().enumerate() {
        let nz: Vec<usize> = (0..3).filter(|&j| !f.is_zero(g.entry(i, j))).collect();
        if nz.len() != 1 {
            return None;
        }
        *slot = nz[0];
    }
    let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
    Some(inversions % 2 == 1)
}

fn is_diagonal(g: &ProjMatrix) -> bool {
    let f = g.field();
    (0..3).all(|i| (0..3).all(|j| i == j || f.is_zero(g.entry(i, j))))
}

/// Table over primes `17 <= p <= pmax`, each assigned an element of the
/// closure of `gens` by `pick(p, pool)`.
fn build(
    case: &'static str,
    desc: FamilyDescriptor,
    ell: u64,
    gens: Vec<ProjMatrix>,
    pmax: u64,
    pick: impl Fn(u64, &[(ProjMatrix, FqElem, FqElem)]) -> Option<usize>,
) -> Synthetic {
    let red = Reduction::new(desc.d, ell).unwrap();
    let closure = group_closure(&gens, 20_000).unwrap();
    let pool: Vec<(ProjMatrix, FqElem, FqElem)> = closure
        .elements
        .iter()
        .filter_map(|g| det_one_traces(g).map(|(t, t2)| (g.clone(), t, t2)))
        .collect();
    let mut table = EigenTable::new(desc).unwrap();
    let ramified = table.descriptor.ramified_primes();
    for p in trigal_core::arith::int::primes_between(17, pmax) {
        if p == ell || ramified.contains(&p) || table.d() % p == 0 {
            continue;
        }
        if let Some(k) = pick(p, &pool) {
            let (_, t, t2) = &pool[k];
            table.insert(p, lift(&red, p, *t, *t2)).unwrap();
        }
    }
    Synthetic { case, ell, group_order: closure.size(), table }
}

fn mat(f: &Arc<FqField>, rows: [[i64; 3]; 3]) -> ProjMatrix {
    let ell = f.characteristic() as i64;
    ProjMatrix::from_u64(f, rows.map(|r| r.map(|v| v.rem_euclid(ell) as u64))).unwrap()
}

/// Element of the pool chosen by a hash of `p` among those satisfying `ok`.
fn choose(p: u64, pool: &[(ProjMatrix, FqElem, FqElem)], ok: impl Fn(&ProjMatrix) -> bool) -> Option<usize> {
    let idx: Vec<usize> = (0..pool.len()).filter(|&k| ok(&pool[k].0)).collect();
    (!idx.is_empty()).then(|| idx[(p.wrapping_mul(2654435761) % idx.len() as u64) as usize])
}

/// One synthetic family per case class at `l = 7` (`D = 6`) and `l = 11`
/// (`D = 7`); the exceptional class only at `l = 7`, where `H36` exists.
pub fn synthetic_families() -> Vec<Synthetic> {
    let mut out = Vec::new();
    for (ell, d, u, u_inv) in [(7u64, 6u64, 2i64, 4i64), (11, 7, 3, 4)] {
        let f = FqField::new(ell, 1).unwrap();
        let du = mat(&f, [[1, 0, 0], [0, u, 0], [0, 0, u_inv]]);
        let swap = mat(&f, [[0, 1, 0], [1, 0, 0], [0, 0, -1]]);
        let cyc = mat(&f, [[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        let pmax = 400;

        let reducible = vec![du.clone(), mat(&f, [[1, 0, 0], [0, 0, 1], [0, -1, 0]]), mat(&f, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])];
        out.push(build("reducible", descriptor("reducible", d, &[5]), ell, reducible, pmax, |p, pool| {
            choose(p, pool, |_| true)
        }));

        let gamma = enumerate_characters(5, 2).unwrap().remove(0);
        out.push(build("c", descriptor("monomial-c", d, &[5]), ell, vec![du.clone(), swap, cyc.clone()], pmax, |p, pool| {
            let odd = gamma.sign(p) == Some(-1);
            choose(p, pool, |g| monomial_parity(g) == Some(odd))
        }));

        let psi = enumerate_characters(9, 3).unwrap().remove(0);
        out.push(build("d", descriptor("monomial-d", d, &[3]), ell, vec![du.clone(), cyc], pmax, |p, pool| {
            let twisted = psi.is_trivial_at(p) == Some(false);
            choose(p, pool, |g| is_diagonal(g) != twisted)
        }));

        let one = f.one();
        let zero = f.zero();
        let conic = vec![
            sym2(&f, [[one, one], [zero, one]]).unwrap(),
            sym2(&f, [[zero, one], [f.neg(one), zero]]).unwrap(),
        ];
        out.push(build("e", descriptor("conic", d, &[5]), ell, conic, pmax, |p, pool| choose(p, pool, |_| true)));

        if ell == 7 {
            let h36 = generators::hessian(&f, 36).unwrap();
            out.push(build("h36", descriptor("hessian-36", d, &[5]), ell, h36, pmax, |p, pool| {
                choose(p, pool, |_| true)
            }));
        }
    }
    out
}

/// Primes of the table, for reporting.
pub fn support(t: &EigenTable) -> BTreeSet<u64> {
    t.iter().map(|e| e.0).collect()
}
