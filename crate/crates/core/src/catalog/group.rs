//! Projective matrices, permutations and breadth-first group closure.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::arith::fq::{FqElem, FqField};
use crate::{Error, Result};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Elements the closure oracle can multiply.
pub trait GroupElement: Clone + Eq + Hash {
    fn compose(&self, other: &Self) -> Self;
    fn is_identity(&self) -> bool;
    fn identity_like(&self) -> Self;

    /// Order by repeated multiplication, `None` past `cap`.
    fn order(&self, cap: usize) -> Option<u64> {
        let mut acc = self.clone();
        for n in 1..=cap as u64 {
            if acc.is_identity() {
                return Some(n);
            }
            acc = acc.compose(self);
        }
        None
    }
}

/// Invertible 3x3 matrix over `F_q` up to scalars; stored with its first
/// nonzero entry (row-major) equal to 1.
#[derive(Clone, Debug)]
pub struct ProjMatrix {
    field: Arc<FqField>,
    m: [FqElem; 9],
}

impl PartialEq for ProjMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for ProjMatrix {}

impl Hash for ProjMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.m.hash(state)
    }
}

impl ProjMatrix {
    pub fn new(field: &Arc<FqField>, rows: [[FqElem; 3]; 3]) -> Result<Self> {
        let m: [FqElem; 9] = std::array::from_fn(|i| rows[i / 3][i % 3]);
        if field.is_zero(det9(field, &m)) {
            return Err(Error::Singular);
        }
        Ok(Self::normalized(field.clone(), m))
    }

    pub fn from_u64(field: &Arc<FqField>, rows: [[u64; 3]; 3]) -> Result<Self> {
        Self::new(field, rows.map(|r| r.map(|v| field.from_u64(v))))
    }

    pub fn identity(field: &Arc<FqField>) -> Self {
        let (z, o) = (field.zero(), field.one());
        Self::normalized(field.clone(), [o, z, z, z, o, z, z, z, o])
    }

    pub fn diag(field: &Arc<FqField>, d: [FqElem; 3]) -> Result<Self> {
        let z = field.zero();
        Self::new(field, [[d[0], z, z], [z, d[1], z], [z, z, d[2]]])
    }

    fn normalized(field: Arc<FqField>, mut m: [FqElem; 9]) -> Self {
        let lead = *m.iter().find(|&&c| !field.is_zero(c)).expect("nonzero matrix");
        let inv = field.inv(lead).expect("nonzero");
        for c in &mut m {
            *c = field.mul(*c, inv);
        }
        ProjMatrix { field, m }
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> FqElem {
        self.m[3 * i + j]
    }

    /// `(A, B, C)` of the characteristic polynomial `x^3 - A x^2 + B x - C`
    /// of the normalized representative.
    pub fn charpoly_abc(&self) -> (FqElem, FqElem, FqElem) {
        let f = &self.field;
        let m = &self.m;
        let a = f.add(f.add(m[0], m[4]), m[8]);
        let minor = |i: usize, j: usize| {
            f.sub(f.mul(m[4 * i], m[4 * j]), f.mul(m[3 * i + j], m[3 * j + i]))
        };
        let b = f.add(f.add(minor(0, 1), minor(0, 2)), minor(1, 2));
        (a, b, det9(f, m))
    }

    pub fn inverse(&self) -> Self {
        let f = &self.field;
        let m = &self.m;
        let c = |i: usize, j: usize| {
            let r = |k: usize| (i + k) % 3;
            let s = |k: usize| (j + k) % 3;
            f.sub(
                f.mul(m[3 * r(1) + s(1)], m[3 * r(2) + s(2)]),
                f.mul(m[3 * r(1) + s(2)], m[3 * r(2) + s(1)]),
            )
        };
        // adjugate = transpose of the cofactor matrix
        let adj: [FqElem; 9] = std::array::from_fn(|k| c(k % 3, k / 3));
        Self::normalized(f.clone(), adj)
    }
}

fn det9(f: &FqField, m: &[FqElem; 9]) -> FqElem {
    let t = |a: usize, b: usize, c: usize| f.mul(f.mul(m[a], m[b]), m[c]);
    let pos = f.add(f.add(t(0, 4, 8), t(1, 5, 6)), t(2, 3, 7));
    let neg = f.add(f.add(t(2, 4, 6), t(0, 5, 7)), t(1, 3, 8));
    f.sub(pos, neg)
}

impl GroupElement for ProjMatrix {
    fn compose(&self, other: &Self) -> Self {
        let f = &self.field;
        let m: [FqElem; 9] = std::array::from_fn(|k| {
            let (i, j) = (k / 3, k % 3);
            (0..3).fold(f.zero(), |acc, l| f.add(acc, f.mul(self.m[3 * i + l], other.m[3 * l + j])))
        });
        Self::normalized(f.clone(), m)
    }

    fn is_identity(&self) -> bool {
        let f = &self.field;
        (0..9).all(|k| if k % 4 == 0 { f.is_one(self.m[k]) } else { f.is_zero(self.m[k]) })
    }

    fn identity_like(&self) -> Self {
        Self::identity(&self.field)
    }
}

/// Permutation of `0..n`, `p[i]` the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// The cycle `(c0 c1 ... ck)` on `n` points.
    pub fn cycle(n: usize, cyc: &[u8]) -> Self {
        let mut p = Self::identity(n);
        for (i, &a) in cyc.iter().enumerate() {
            p.0[a as usize] = cyc[(i + 1) % cyc.len()];
        }
        p
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0;
        for s in 0..self.0.len() {
            let mut i = s;
            let mut len = 0;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            transpositions += len.max(1) - 1;
        }
        transpositions % 2 == 0
    }
}

impl GroupElement for Perm {
    /// `(self * other)(i) = self(other(i))`.
    fn compose(&self, other: &Self) -> Self {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.0.len())
    }
}

#[derive(Debug, Clone)]
pub struct Closure<G> {
    /// Breadth-first order, identity first.
    pub elements: Vec<G>,
    /// Element order -> number of elements of that order.
    pub order_counts: BTreeMap<u64, usize>,
}

impl<G> Closure<G> {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn spectrum(&self) -> BTreeSet<u64> {
        self.order_counts.keys().copied().collect()
    }
}

/// Subgroup generated by `gens`, by breadth-first right multiplication.
pub fn group_closure<G: GroupElement>(gens: &[G], cap: usize) -> Result<Closure<G>> {
    let Some(first) = gens.first() else {
        return Err(Error::Invalid("no generators".into()));
    };
    let id = first.identity_like();
    let mut seen: HashSet<G> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.compose(s);
            if seen.insert(h.clone()) {
                if elements.len() >= cap {
                    return Err(Error::ClosureCap(cap));
                }
                elements.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    let mut order_counts = BTreeMap::new();
    for g in &elements {
        let o = g.order(elements.len()).expect("element order bounded by group size");
        *order_counts.entry(o).or_insert(0) += 1;
    }
    Ok(Closure { elements, order_counts })
}

/// `Sym^2` of a 2x2 matrix: its action on binary quadratic forms.
pub fn sym2(field: &Arc<FqField>, g: [[FqElem; 2]; 2]) -> Result<ProjMatrix> {
    let f = field;
    let [[a, b], [c, d]] = g;
    let two = |x: FqElem| f.add(x, x);
    ProjMatrix::new(
        f,
        [
            [f.mul(a, a), f.mul(a, b), f.mul(b, b)],
            [two(f.mul(a, c)), f.add(f.mul(a, d), f.mul(b, c)), two(f.mul(b, d))],
            [f.mul(c, c), f.mul(c, d), f.mul(d, d)],
        ],
    )
}

/// Standard generators of the exceptional groups, for the closure oracle.
pub mod generators {
    use super::*;

    /// `PSL(2, 7)` as `Sym^2` of `SL(2, 7)` in `PGL(3, F_7)`.
    pub fn psl27() -> Vec<ProjMatrix> {
        let f = FqField::new(7, 1).expect("F_7");
        let e = |v: u64| f.from_u64(v);
        vec![
            sym2(&f, [[e(1), e(1)], [e(0), e(1)]]).expect("invertible"),
            sym2(&f, [[e(0), e(6)], [e(1), e(0)]]).expect("invertible"),
        ]
    }

    /// Alternating group on `n` odd or even points: `(0 1 2)` and a long cycle.
    pub fn alternating(n: usize) -> Vec<Perm> {
        let long: Vec<u8> = if n % 2 == 1 { (0..n as u8).collect() } else { (1..n as u8).collect() };
        vec![Perm::cycle(n, &[0, 1, 2]), Perm::cycle(n, &long)]
    }

    /// `S = diag(1, w, w^2)` and the cyclic coordinate shift, `w` of order 3.
    pub fn heisenberg(field: &Arc<FqField>) -> Result<Vec<ProjMatrix>> {
        let w = field
            .element_of_order(3)
            .ok_or_else(|| Error::Invalid("no cube root of unity".into()))?;
        let (z, o) = (field.zero(), field.one());
        Ok(vec![
            ProjMatrix::diag(field, [o, w, field.mul(w, w)])?,
            ProjMatrix::new(field, [[z, z, o], [o, z, z], [z, o, z]])?,
        ])
    }

    fn dft(field: &Arc<FqField>, w: FqElem) -> Result<ProjMatrix> {
        let o = field.one();
        let w2 = field.mul(w, w);
        ProjMatrix::new(field, [[o, o, o], [o, w, w2], [o, w2, w]])
    }

    /// Hessian groups of orders 36, 72, 216: Heisenberg plus the Fourier
    /// matrix, then its conjugate by `diag(1, 1, w)`, then `diag(1, 1, w)`.
    pub fn hessian(field: &Arc<FqField>, order: u32) -> Result<Vec<ProjMatrix>> {
        let mut gens = heisenberg(field)?;
        let w = field.element_of_order(3).expect("checked by heisenberg");
        let (o, f) = (field.one(), dft(field, w)?);
        let d = ProjMatrix::diag(field, [o, o, w])?;
        gens.push(f.clone());
        match order {
            36 => {}
            72 => gens.push(d.compose(&f).compose(&d.inverse())),
            216 => gens.push(d),
            _ => return Err(Error::Invalid(format!("no Hessian group of order {order}"))),
        }
        Ok(gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psl27_closure() {
        let c = group_closure(&generators::psl27(), DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c.size(), 168);
        assert_eq!(c.spectrum(), BTreeSet::from([1, 2, 3, 4, 7]));
    }

    #[test]
    fn alternating_closures() {
        let c = group_closure(&generators::alternating(6), DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c.size(), 360);
        assert_eq!(c.spectrum(), BTreeSet::from([1, 2, 3, 4, 5]));
        assert!(c.elements.iter().all(Perm::is_even));
        let c = group_closure(&generators::alternating(7), DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c.size(), 2520);
        assert_eq!(c.spectrum(), (1..=7).collect());
    }

    #[test]
    fn heisenberg_and_hessian() {
        let f7 = FqField::new(7, 1).unwrap();
        let c = group_closure(&generators::heisenberg(&f7).unwrap(), 100).unwrap();
        assert_eq!(c.size(), 9);
        assert_eq!(c.spectrum(), BTreeSet::from([1, 3]));
        let f19 = FqField::new(19, 1).unwrap();
        for (n, spec) in [(36, vec![1, 2, 3, 4]), (72, vec![1, 2, 3, 4]), (216, vec![1, 2, 3, 4, 6])] {
            let c = group_closure(&generators::hessian(&f19, n).unwrap(), 1000).unwrap();
            assert_eq!(c.size(), n as usize, "order {n}");
            assert_eq!(c.spectrum(), spec.into_iter().collect(), "order {n}");
        }
    }

    #[test]
    fn closure_is_a_group() {
        let c = group_closure(&generators::psl27(), DEFAULT_CLOSURE_CAP).unwrap();
        let set: HashSet<_> = c.elements.iter().cloned().collect();
        for g in c.elements.iter().step_by(7) {
            assert!(set.contains(&g.inverse()));
            assert!(g.compose(&g.inverse()).is_identity());
            for h in c.elements.iter().step_by(11) {
                assert!(set.contains(&g.compose(h)));
            }
        }
        for (&o, _) in &c.order_counts {
            assert_eq!(c.size() as u64 % o, 0);
        }
    }

    #[test]
    fn cap_exceeded() {
        assert_eq!(
            group_closure(&generators::alternating(7), 100).unwrap_err(),
            Error::ClosureCap(100)
        );
    }

    #[test]
    fn singular_rejected() {
        let f = FqField::new(7, 1).unwrap();
        assert_eq!(
            ProjMatrix::from_u64(&f, [[1, 2, 3], [2, 4, 6], [0, 0, 1]]).unwrap_err(),
            Error::Singular
        );
    }
}
