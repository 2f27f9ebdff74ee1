//! Free Lie algebras by multidegree, embedded in the tensor algebra.
//!
//! A Lie element is kept as its noncommutative polynomial expansion, so
//! brackets are associative commutators and Jacobi is automatic. Per
//! multidegree the Lyndon-word bracketings give exact dimensions and
//! stable representatives; their expansions are unitriangular against
//! the lexicographic word order, which downstream echelonization uses.

use std::collections::BTreeMap;

use crate::linalg::{Q, SparseVec};
use num::Zero;

/// A word in generator letters. Letters index generators, `< n`.
pub type Word = Vec<u8>;

/// Noncommutative polynomial: word to nonzero coefficient.
pub type Poly = BTreeMap<Word, Q>;

pub fn letter(i: u8) -> Poly {
    let mut p = Poly::new();
    p.insert(vec![i], Q::from_integer(1.into()));
    p
}

/// `dst += c * src`.
pub fn poly_axpy(dst: &mut Poly, c: &Q, src: &Poly) {
    if c.is_zero() {
        return;
    }
    for (w, s) in src {
        let entry = dst.entry(w.clone()).or_insert_with(Q::zero);
        *entry += c * s;
        if entry.is_zero() {
            dst.remove(w);
        }
    }
}

pub fn poly_scale(p: &Poly, c: &Q) -> Poly {
    if c.is_zero() {
        return Poly::new();
    }
    p.iter().map(|(w, x)| (w.clone(), x * c)).collect()
}

pub fn concat_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            let entry = out.entry(w).or_insert_with(Q::zero);
            *entry += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `ab - ba`.
pub fn commutator(a: &Poly, b: &Poly) -> Poly {
    let mut out = concat_mul(a, b);
    let ba = concat_mul(b, a);
    let minus_one = -Q::from_integer(1.into());
    poly_axpy(&mut out, &minus_one, &ba);
    out
}

pub fn content(w: &[u8], n: usize) -> Vec<usize> {
    let mut beta = vec![0; n];
    for &l in w {
        beta[l as usize] += 1;
    }
    beta
}

/// All words with the given content, lexicographically sorted.
pub fn words_of_content(beta: &[usize]) -> Vec<Word> {
    let mut out = Vec::new();
    let mut remaining: Vec<usize> = beta.to_vec();
    let total: usize = beta.iter().sum();
    let mut prefix = Vec::with_capacity(total);
    fn go(remaining: &mut [usize], prefix: &mut Word, total: usize, out: &mut Vec<Word>) {
        if prefix.len() == total {
            out.push(prefix.clone());
            return;
        }
        for l in 0..remaining.len() {
            if remaining[l] > 0 {
                remaining[l] -= 1;
                prefix.push(l as u8);
                go(remaining, prefix, total, out);
                prefix.pop();
                remaining[l] += 1;
            }
        }
    }
    go(&mut remaining, &mut prefix, total, &mut out);
    out
}

/// Strictly least among its proper rotations.
pub fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    for k in 1..w.len() {
        let rotation = w[k..].iter().chain(&w[..k]);
        if !(w.iter().lt(rotation)) {
            return false;
        }
    }
    true
}

/// Lyndon words of the given content, lexicographically sorted. Their
/// count is the free-Lie dimension at that multidegree.
pub fn lyndon_words(beta: &[usize]) -> Vec<Word> {
    words_of_content(beta)
        .into_iter()
        .filter(|w| is_lyndon(w))
        .collect()
}

pub fn free_dim(beta: &[usize]) -> usize {
    lyndon_words(beta).len()
}

/// Standard bracketing of a Lyndon word: a letter maps to itself; for
/// longer words, split at the longest proper Lyndon suffix `v` in
/// `w = uv` and bracket the parts.
pub fn standard_bracketing(w: &[u8]) -> Poly {
    assert!(is_lyndon(w), "standard bracketing needs a Lyndon word");
    if w.len() == 1 {
        return letter(w[0]);
    }
    let split = (1..w.len())
        .filter(|&k| is_lyndon(&w[k..]))
        .min()
        .expect("every Lyndon word of length >= 2 has a proper Lyndon suffix");
    let u = standard_bracketing(&w[..split]);
    let v = standard_bracketing(&w[split..]);
    commutator(&u, &v)
}

/// Coordinates of a homogeneous polynomial in the sorted word list of
/// its multidegree. Panics if a word falls outside the list.
pub fn poly_coords(p: &Poly, words: &[Word]) -> SparseVec {
    let mut v = SparseVec::new();
    for (w, c) in p {
        let at = words
            .binary_search(w)
            .unwrap_or_else(|_| panic!("word off its multidegree block"));
        v.insert(at, c.clone());
    }
    v
}
