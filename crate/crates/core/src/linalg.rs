//! Exact sparse elimination over ℚ.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::fock::{FockState, StateVector};
use crate::rational::Q;

pub type SparseVec<K> = BTreeMap<K, Q>;

fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, x: &SparseVec<K>, a: &Q) {
    for (k, v) in x {
        let entry = y.entry(k.clone()).or_insert_with(Q::zero);
        *entry += v * a;
        if entry.is_zero() {
            y.remove(k);
        }
    }
}

/// Semi-echelon basis: each stored row has a distinct leading key with coefficient 1.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        let mut floor: Option<K> = None;
        loop {
            let next = match &floor {
                None => v.iter().next(),
                Some(f) => v.range((std::ops::Bound::Excluded(f.clone()), std::ops::Bound::Unbounded)).next(),
            };
            let Some((k, c)) = next.map(|(k, c)| (k.clone(), c.clone())) else {
                return v;
            };
            match self.rows.get(&k) {
                Some(row) => axpy(&mut v, row, &(-c)),
                None => floor = Some(k),
            }
        }
    }

    /// Inserts `v`; returns the reduced remainder if it was independent.
    pub fn insert(&mut self, v: SparseVec<K>) -> Option<SparseVec<K>> {
        let mut r = self.reduce_leading(v);
        let (k, c) = r.iter().next().map(|(k, c)| (k.clone(), c.clone()))?;
        let inv = Q::one() / c;
        for x in r.values_mut() {
            *x *= &inv;
        }
        self.rows.insert(k, r.clone());
        Some(r)
    }

    fn reduce_leading(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        loop {
            let Some((k, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
                return v;
            };
            match self.rows.get(&k) {
                Some(row) => axpy(&mut v, row, &(-c)),
                None => return v,
            }
        }
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }
}

pub fn to_sparse(v: &StateVector) -> SparseVec<FockState> {
    v.iter().map(|(s, c)| (s.clone(), c.clone())).collect()
}

pub fn from_sparse(v: &SparseVec<FockState>) -> StateVector {
    v.iter().map(|(s, c)| (s.clone(), c.clone())).collect()
}

/// Growing span of state vectors.
#[derive(Clone, Debug, Default)]
pub struct Span {
    ech: Echelon<FockState>,
    basis: Vec<StateVector>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Adds `v` if independent; returns whether the span grew.
    pub fn insert(&mut self, v: &StateVector) -> bool {
        if v.is_zero() {
            return false;
        }
        if self.ech.insert(to_sparse(v)).is_some() {
            self.basis.push(v.clone());
            true
        } else {
            false
        }
    }

    pub fn contains(&self, v: &StateVector) -> bool {
        self.ech.contains(to_sparse(v))
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }
}

/// Basis of {a : Σ a_i cols[i] = 0}, one vector per dependent column.
pub fn kernel_of_columns<K: Ord + Clone>(cols: &[SparseVec<K>]) -> Vec<Vec<Q>> {
    let n = cols.len();
    // Each stored row carries the combination of columns producing it.
    let mut rows: BTreeMap<K, (SparseVec<K>, Vec<Q>)> = BTreeMap::new();
    let mut kernel = Vec::new();
    for (i, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        let mut tag = vec![Q::zero(); n];
        tag[i] = Q::one();
        loop {
            let Some((k, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
                kernel.push(tag);
                break;
            };
            match rows.get(&k) {
                Some((row, rtag)) => {
                    let a = -c;
                    axpy(&mut v, row, &a);
                    for (t, r) in tag.iter_mut().zip(rtag) {
                        if !r.is_zero() {
                            *t += r * &a;
                        }
                    }
                }
                None => {
                    let inv = Q::one() / c;
                    for x in v.values_mut() {
                        *x *= &inv;
                    }
                    for t in tag.iter_mut() {
                        *t *= &inv;
                    }
                    rows.insert(k, (v, tag));
                    break;
                }
            }
        }
    }
    kernel
}

/// Solves Σ x_i cols[i] = target exactly; `None` if inconsistent.
pub fn solve_columns<K: Ord + Clone>(cols: &[SparseVec<K>], target: &SparseVec<K>) -> Option<Vec<Q>> {
    let n = cols.len();
    let mut all = cols.to_vec();
    all.push(target.clone());
    let ker = kernel_of_columns(&all);
    // A kernel vector with nonzero last entry gives the solution.
    let k = ker.iter().find(|k| !k[n].is_zero())?;
    let scale = -Q::one() / &k[n];
    Some(k[..n].iter().map(|v| v * &scale).collect())
}
