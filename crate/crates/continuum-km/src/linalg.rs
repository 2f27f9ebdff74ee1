//! Sparse exact linear algebra over arbitrary-precision rationals.
//!
//! Everything downstream (root multiplicities, presentation checks) reduces
//! to ranks and kernels of small sparse systems whose entries can blow up
//! during elimination, hence `BigRational` instead of the machine-word
//! rationals used for coordinates.

use std::collections::BTreeMap;

use num::{BigRational, Zero};

use crate::rat::Rat;

pub type Q = BigRational;

/// A sparse vector: column index to nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Q>;

pub fn qint(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn q_from_rat(r: Rat) -> Q {
    Q::new((*r.numer()).into(), (*r.denom()).into())
}

/// First nonzero column, if any.
pub fn leading(v: &SparseVec) -> Option<usize> {
    v.keys().next().copied()
}

/// `dst += c * src`, dropping entries that cancel.
pub fn axpy(dst: &mut SparseVec, c: &Q, src: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (k, s) in src {
        let entry = dst.entry(*k).or_insert_with(Q::zero);
        *entry += c * s;
        if entry.is_zero() {
            dst.remove(k);
        }
    }
}

pub fn scale_vec(v: &SparseVec, c: &Q) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

/// Row-major sparse matrix with a fixed column count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    cols: usize,
    rows: Vec<SparseVec>,
}

impl RationalMatrix {
    pub fn new(cols: usize) -> Self {
        RationalMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn push_row(&mut self, row: SparseVec) {
        debug_assert!(row.keys().all(|k| *k < self.cols));
        self.rows.push(row);
    }

    /// Reduced row echelon form. Pivot rule: next pivot is the first
    /// column holding a nonzero entry, chosen from the least remaining
    /// row; pivots are scaled to 1 and cleared above and below. The
    /// result is the canonical RREF, so it is deterministic and
    /// idempotent by construction.
    pub fn echelon(&self) -> RationalMatrix {
        let mut rows: Vec<SparseVec> = self.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut out: Vec<SparseVec> = Vec::new();
        while let Some((at, _)) = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .min_by_key(|(i, r)| (leading(r).unwrap(), *i))
        {
            let mut pivot = rows.swap_remove(at);
            let col = leading(&pivot).unwrap();
            let inv = pivot[&col].recip();
            pivot = scale_vec(&pivot, &inv);
            for r in rows.iter_mut().chain(out.iter_mut()) {
                if let Some(c) = r.get(&col).cloned() {
                    axpy(r, &(-c), &pivot);
                }
            }
            out.push(pivot);
        }
        out.sort_by_key(|r| leading(r).unwrap());
        RationalMatrix {
            cols: self.cols,
            rows: out,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rows.len()
    }

    /// Basis of the right kernel, one vector per free column in
    /// ascending column order; the free coordinate is set to 1.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let ech = self.echelon();
        let pivot_cols: BTreeMap<usize, usize> = ech
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (leading(r).unwrap(), i))
            .collect();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_cols.contains_key(c)) {
            let mut v = SparseVec::new();
            v.insert(free, qint(1));
            for (pc, ri) in &pivot_cols {
                if let Some(c) = ech.rows[*ri].get(&free) {
                    if !c.is_zero() {
                        v.insert(*pc, -c.clone());
                    }
                }
            }
            out.push(v);
        }
        out
    }
}

/// Incremental elimination with provenance. Each stored row carries a
/// combination vector over caller-chosen labels; inserting reduces the
/// vector against stored rows while keeping `vector = combo(labels)`
/// consistent, so [`Reducer::express`] can write any spanned vector as
/// a labeled combination. Rows are keyed by leading column, scaled to a
/// unit leading coefficient.
#[derive(Debug, Clone, Default)]
pub struct Reducer {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Reducer {
    pub fn new() -> Self {
        Reducer::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds `vec` (with its provenance) if independent of the stored
    /// rows; returns false when it reduces to zero.
    pub fn insert(&mut self, mut vec: SparseVec, mut prov: SparseVec) -> bool {
        while let Some(l) = leading(&vec) {
            let Some((v, p)) = self.rows.get(&l) else { break };
            let c = vec[&l].clone();
            let (v, p) = (v.clone(), p.clone());
            axpy(&mut vec, &(-c.clone()), &v);
            axpy(&mut prov, &(-c), &p);
        }
        let Some(l) = leading(&vec) else { return false };
        let inv = vec[&l].recip();
        let vec = scale_vec(&vec, &inv);
        let prov = scale_vec(&prov, &inv);
        self.rows.insert(l, (vec, prov));
        true
    }

    /// Writes `vec` as a provenance combination if it lies in the span.
    pub fn express(&self, vec: &SparseVec) -> Option<SparseVec> {
        let mut vec = vec.clone();
        let mut acc = SparseVec::new();
        while let Some(l) = leading(&vec) {
            let (v, p) = self.rows.get(&l)?;
            let c = vec[&l].clone();
            axpy(&mut vec, &(-c.clone()), v);
            axpy(&mut acc, &c, p);
        }
        Some(acc)
    }
}
