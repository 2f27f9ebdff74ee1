//! Matrix-unit model of the line algebra on a finite grid.
//!
//! Interval generators on the integer grid of `[0, n]` map into
//! `sl(n+1)` by `e((a,b]) ↦ E_{a+1,b+1}`, `f((a,b]) ↦ E_{b+1,a+1}`,
//! `h((a,b]) ↦ E_{a+1,a+1} − E_{b+1,b+1}`. The matrix commutator is an
//! independent oracle for the bracket engine: both sides are computed
//! from scratch and compared entry by entry.

use std::fmt;

use crate::interval::Interval;
use crate::lie::LieElement;
use crate::rat::{fmt_rat, rat_int, Lo, Rat};
use crate::shape::ShapeGraph;

/// Dense square matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    dim: usize,
    entries: Vec<Rat>,
}

impl Mat {
    pub fn zero(dim: usize) -> Self {
        Mat {
            dim,
            entries: vec![rat_int(0); dim * dim],
        }
    }

    /// The matrix unit E_{ij}, zero-based.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zero(dim);
        m[(i, j)] = rat_int(1);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| *e == rat_int(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| *a + *b)
            .collect();
        Mat {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, c: Rat) -> Self {
        Mat {
            dim: self.dim,
            entries: self.entries.iter().map(|a| *a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == rat_int(0) {
                    continue;
                }
                for j in 0..n {
                    let b = other[(k, j)];
                    if b != rat_int(0) {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Commutator `self·other − other·self`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self).scale(rat_int(-1)))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.dim + j]
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| fmt_rat(self[(i, j)])).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Generator sign sector for [`SlModel::generator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    E,
    F,
    H,
}

/// The grid `[0, n]` model: generators indexed by `0 ≤ a < b ≤ n`,
/// matrices of size `(n+1) × (n+1)`.
pub struct SlModel {
    pub n: usize,
}

pub fn sl_matrix_model(n: usize) -> SlModel {
    assert!((2..=8).contains(&n), "grid bound n must lie in 2..=8");
    SlModel { n }
}

impl SlModel {
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Image of one generator on the interval `(a, b]`.
    pub fn generator(&self, kind: Gen, a: usize, b: usize) -> Mat {
        assert!(a < b && b <= self.n);
        let d = self.dim();
        match kind {
            Gen::E => Mat::unit(d, a, b),
            Gen::F => Mat::unit(d, b, a),
            Gen::H => Mat::unit(d, a, a).add(&Mat::unit(d, b, b).scale(rat_int(-1))),
        }
    }

    /// Image of an arbitrary engine element supported on grid intervals.
    ///
    /// Raising and lowering terms map run-wise; the Cartan part maps to
    /// the diagonal by its jump at each grid point, which reproduces
    /// `h((a,b]) ↦ E_{a+1,a+1} − E_{b+1,b+1}` on indicators and extends
    /// additively.
    pub fn element(&self, g: &ShapeGraph, x: &LieElement) -> Mat {
        let d = self.dim();
        let mut out = Mat::zero(d);
        for (iv, c) in &x.plus {
            let (a, b) = self.grid_run(iv);
            out[(a, b)] += *c;
        }
        for (iv, c) in &x.minus {
            let (a, b) = self.grid_run(iv);
            out[(b, a)] += *c;
        }
        for arc in x.cartan.arcs().collect::<Vec<_>>() {
            for k in 0..=self.n {
                let p = rat_int(k as i64);
                let jump = x.cartan.right_limit(arc, p) - x.cartan.left_limit(arc, p);
                out[(k, k)] += jump;
            }
            // A Cartan part from grid indicators jumps only at grid points;
            // anything else cannot be matched by a diagonal.
            let bound = rat_int(self.n as i64);
            for &(lo, hi, _) in x.cartan.arc_pieces(arc) {
                let lo = match lo {
                    Lo::At(v) => v,
                    Lo::MinusInf => panic!("grid element reaches -inf"),
                };
                for v in [lo, hi] {
                    assert!(
                        v.is_integer() && v >= rat_int(0) && v <= bound,
                        "cartan jump off the grid [0,{}] at {}",
                        self.n,
                        fmt_rat(v)
                    );
                }
            }
        }
        let _ = g;
        out
    }

    fn grid_run(&self, iv: &Interval) -> (usize, usize) {
        let runs = iv.runs();
        assert_eq!(runs.len(), 1, "line intervals are single runs");
        let r = &runs[0];
        let a = match r.a {
            Lo::At(v) => v,
            Lo::MinusInf => panic!("grid interval reaches -inf"),
        };
        let to_idx = |v: Rat| -> usize {
            assert!(
                v.is_integer() && v >= rat_int(0) && v <= rat_int(self.n as i64),
                "endpoint {} off the grid [0,{}]",
                fmt_rat(v),
                self.n
            );
            v.to_integer() as usize
        };
        (to_idx(a), to_idx(r.b))
    }
}

/// All `3·n(n+1)/2` generators on the grid, as engine elements.
pub fn grid_generators(g: &ShapeGraph, n: usize) -> Vec<(Gen, usize, usize, LieElement)> {
    let arc = g.arc_id("r").expect("line graph");
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..=n {
            let iv = Interval::new(
                g,
                vec![crate::interval::Run::new(
                    arc,
                    rat_int(a as i64),
                    rat_int(b as i64),
                )],
            )
            .expect("grid run is valid");
            out.push((Gen::E, a, b, LieElement::e(iv.clone())));
            out.push((Gen::F, a, b, LieElement::f(iv.clone())));
            out.push((Gen::H, a, b, LieElement::h(g, &iv)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::bracket;
    use crate::shape::line_graph;

    #[test]
    fn matrix_units_multiply_by_delta() {
        let d = 4;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let prod = Mat::unit(d, i, j).mul(&Mat::unit(d, k, l));
                        let expect = if j == k {
                            Mat::unit(d, i, l)
                        } else {
                            Mat::zero(d)
                        };
                        assert_eq!(prod, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn generator_images_match_the_convention() {
        let m = sl_matrix_model(3);
        assert_eq!(m.generator(Gen::E, 0, 2), Mat::unit(4, 0, 2));
        assert_eq!(m.generator(Gen::F, 0, 2), Mat::unit(4, 2, 0));
        let h = m.generator(Gen::H, 1, 3);
        assert_eq!(h[(1, 1)], rat_int(1));
        assert_eq!(h[(3, 3)], rat_int(-1));
        assert_eq!(h[(0, 0)], rat_int(0));
    }

    #[test]
    fn element_map_is_linear_on_cartans() {
        let g = line_graph();
        let m = sl_matrix_model(4);
        let gens = grid_generators(&g, 4);
        // h((0,2]) + h((2,4]) has the same image as h((0,4]).
        let h = |a: usize, b: usize| {
            gens.iter()
                .find(|(k, x, y, _)| *k == Gen::H && *x == a && *y == b)
                .map(|(_, _, _, el)| el.clone())
                .unwrap()
        };
        let sum = h(0, 2).add(&h(2, 4));
        assert_eq!(m.element(&g, &sum), m.element(&g, &h(0, 4)));
    }

    #[test]
    fn fixed_bracket_examples_agree_with_units() {
        let g = line_graph();
        let m = sl_matrix_model(3);
        let gens = grid_generators(&g, 3);
        let find = |k: Gen, a: usize, b: usize| {
            gens.iter()
                .find(|(kk, x, y, _)| *kk == k && *x == a && *y == b)
                .map(|(_, _, _, el)| el.clone())
                .unwrap()
        };
        // [e((0,1]), f((0,2])] = -f((1,2]) mirrors [E_12, E_31] = -E_32.
        let lhs = bracket(&g, &find(Gen::E, 0, 1), &find(Gen::F, 0, 2)).unwrap();
        assert_eq!(
            m.element(&g, &lhs),
            Mat::unit(4, 2, 1).scale(rat_int(-1))
        );
        // [h((0,2]), e((1,3])] = 0 mirrors [E_11 - E_33, E_24] = 0.
        let lhs = bracket(&g, &find(Gen::H, 0, 2), &find(Gen::E, 1, 3)).unwrap();
        assert!(m.element(&g, &lhs).is_zero());
        assert!(m
            .generator(Gen::H, 0, 2)
            .bracket(&m.generator(Gen::E, 1, 3))
            .is_zero());
    }

    #[test]
    fn every_grid_bracket_matches_the_oracle_small() {
        let g = line_graph();
        for n in 2..=3 {
            let m = sl_matrix_model(n);
            let gens = grid_generators(&g, n);
            for (_, _, _, x) in &gens {
                for (_, _, _, y) in &gens {
                    let engine = bracket(&g, x, y).expect("line brackets resolve");
                    let lhs = m.element(&g, &engine);
                    let rhs = m.element(&g, x).bracket(&m.element(&g, y));
                    assert_eq!(lhs, rhs, "x={} y={}", x.render(&g), y.render(&g));
                }
            }
        }
    }
}
