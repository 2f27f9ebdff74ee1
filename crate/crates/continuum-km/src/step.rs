//! Rational step functions on a shape graph and the Euler form.
//!
//! A step function is piecewise constant with finitely many half-open
//! pieces `(lo, hi]` per arc plus explicit values at nodes. Indicator
//! functions of intervals generate the lattice we care about; sums and
//! scalar multiples stay inside it.
//!
//! The Euler form pairs one-sided limits across discontinuities. Interior
//! points contribute `f-(x) * (g-(x) - g+(x))`; at a node each incoming
//! direction contributes its left limit against the defect between its own
//! left limit of `g` and the sum of right limits over all outgoing
//! directions. Values *at* nodes never enter the form.

use crate::interval::Interval;
use crate::rat::{fmt_rat, ArcLen, Lo, Rat};
use crate::shape::ShapeGraph;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StepFunction {
    /// Per arc: sorted disjoint pieces `(lo, hi, value)` with nonzero value;
    /// adjacent pieces with equal value are merged.
    pieces: BTreeMap<usize, Vec<(Lo, Rat, Rat)>>,
    /// Nonzero values at nodes.
    node_values: BTreeMap<usize, Rat>,
}

impl StepFunction {
    pub fn zero() -> Self {
        StepFunction::default()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty() && self.node_values.is_empty()
    }

    /// The indicator of an interval: 1 on each run, 1 at each member node.
    pub fn indicator(g: &ShapeGraph, x: &Interval) -> Self {
        let one = Rat::from_integer(1);
        let mut f = StepFunction::zero();
        for r in x.runs() {
            f.pieces
                .entry(r.arc)
                .or_default()
                .push((r.a, r.b, one));
        }
        for v in x.nodes(g) {
            f.node_values.insert(v, one);
        }
        f.normalize();
        f
    }

    pub fn scale(&self, c: Rat) -> Self {
        if c == Rat::from_integer(0) {
            return StepFunction::zero();
        }
        let mut out = self.clone();
        for ps in out.pieces.values_mut() {
            for p in ps.iter_mut() {
                p.2 *= c;
            }
        }
        for v in out.node_values.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = StepFunction::zero();
        let arcs: std::collections::BTreeSet<usize> = self
            .pieces
            .keys()
            .chain(other.pieces.keys())
            .copied()
            .collect();
        for arc in arcs {
            let mut cuts: Vec<Lo> = Vec::new();
            let mut ends: Vec<Rat> = Vec::new();
            for f in [self, other] {
                if let Some(ps) = f.pieces.get(&arc) {
                    for &(lo, hi, _) in ps {
                        cuts.push(lo);
                        cuts.push(Lo::At(hi));
                        ends.push(hi);
                    }
                }
            }
            cuts.sort();
            cuts.dedup();
            let mut merged = Vec::new();
            for w in cuts.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let hi = match hi {
                    Lo::At(h) => h,
                    Lo::MinusInf => unreachable!("sorted cuts start at the minimum"),
                };
                let val = self.value_on(arc, lo, hi) + other.value_on(arc, lo, hi);
                if val != Rat::from_integer(0) {
                    merged.push((lo, hi, val));
                }
            }
            if !merged.is_empty() {
                out.pieces.insert(arc, merged);
            }
        }
        for (v, val) in &self.node_values {
            *out.node_values.entry(*v).or_insert_with(|| Rat::from_integer(0)) += *val;
        }
        for (v, val) in &other.node_values {
            *out.node_values.entry(*v).or_insert_with(|| Rat::from_integer(0)) += *val;
        }
        out.normalize();
        out
    }

    pub(crate) fn normalize(&mut self) {
        let zero = Rat::from_integer(0);
        let mut empty_arcs = Vec::new();
        for (arc, ps) in self.pieces.iter_mut() {
            ps.sort();
            let mut merged: Vec<(Lo, Rat, Rat)> = Vec::with_capacity(ps.len());
            for &(lo, hi, v) in ps.iter() {
                if v == zero {
                    continue;
                }
                match merged.last_mut() {
                    Some(prev) if Lo::At(prev.1) == lo && prev.2 == v => prev.1 = hi,
                    _ => merged.push((lo, hi, v)),
                }
            }
            if merged.is_empty() {
                empty_arcs.push(*arc);
            } else {
                *ps = merged;
            }
        }
        for arc in empty_arcs {
            self.pieces.remove(&arc);
        }
        self.node_values.retain(|_, v| *v != zero);
    }

    /// Constant value on the subsegment `(lo, hi]`, assuming no piece
    /// boundary lies strictly inside it.
    fn value_on(&self, arc: usize, lo: Lo, hi: Rat) -> Rat {
        if let Some(ps) = self.pieces.get(&arc) {
            for &(plo, phi, v) in ps {
                if plo <= lo && hi <= phi {
                    return v;
                }
            }
        }
        Rat::from_integer(0)
    }

    /// Left limit at coordinate `x` on `arc`.
    pub fn left_limit(&self, arc: usize, x: Rat) -> Rat {
        if let Some(ps) = self.pieces.get(&arc) {
            for &(lo, hi, v) in ps {
                if lo < Lo::At(x) && x <= hi {
                    return v;
                }
            }
        }
        Rat::from_integer(0)
    }

    /// Right limit at coordinate `x` on `arc`.
    pub fn right_limit(&self, arc: usize, x: Rat) -> Rat {
        if let Some(ps) = self.pieces.get(&arc) {
            for &(lo, hi, v) in ps {
                if lo <= Lo::At(x) && Lo::At(x) < Lo::At(hi) {
                    return v;
                }
            }
        }
        Rat::from_integer(0)
    }

    pub fn node_value(&self, v: usize) -> Rat {
        self.node_values
            .get(&v)
            .copied()
            .unwrap_or_else(|| Rat::from_integer(0))
    }

    /// Pieces of the function on `arc`, for rendering.
    pub fn arc_pieces(&self, arc: usize) -> &[(Lo, Rat, Rat)] {
        self.pieces.get(&arc).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn arcs(&self) -> impl Iterator<Item = usize> + '_ {
        self.pieces.keys().copied()
    }

    /// Canonical one-line form: arc pieces in arc order, then node values,
    /// joined with ` + `. The zero function renders as `0`.
    pub fn render(&self, g: &ShapeGraph) -> String {
        let mut parts = Vec::new();
        for (&arc, ps) in &self.pieces {
            let name = &g.arc(arc).name;
            for &(lo, hi, val) in ps {
                let coeff = if val == Rat::from_integer(1) {
                    String::new()
                } else {
                    format!("{}*", fmt_rat(val))
                };
                parts.push(format!("{coeff}{name}:{lo},{}", fmt_rat(hi)));
            }
        }
        for (&v, &val) in &self.node_values {
            let coeff = if val == Rat::from_integer(1) {
                String::new()
            } else {
                format!("{}*", fmt_rat(val))
            };
            parts.push(format!("{coeff}@{}", g.nodes[v]));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Interior coordinates where either function may jump on `arc`:
    /// piece boundaries strictly inside the arc's open coordinate range.
    fn interior_breaks(&self, g: &ShapeGraph, arc: usize, acc: &mut Vec<Rat>) {
        let a = g.arc(arc);
        let doubly_open = a.src.is_none() && a.len == ArcLen::Infinite;
        if let Some(ps) = self.pieces.get(&arc) {
            for &(lo, hi, _) in ps {
                for cand in [lo.finite(), Some(hi)].into_iter().flatten() {
                    let above = doubly_open || cand > Rat::from_integer(0);
                    let below = match a.len {
                        ArcLen::Finite(l) => cand < l,
                        ArcLen::Infinite => true,
                    };
                    if above && below {
                        acc.push(cand);
                    }
                }
            }
        }
    }
}

/// The Euler form of two step functions.
pub fn euler_form(g: &ShapeGraph, f: &StepFunction, h: &StepFunction) -> Rat {
    let mut total = Rat::from_integer(0);
    let arcs: std::collections::BTreeSet<usize> =
        f.arcs().chain(h.arcs()).collect();
    for arc in arcs {
        let mut xs = Vec::new();
        f.interior_breaks(g, arc, &mut xs);
        h.interior_breaks(g, arc, &mut xs);
        xs.sort();
        xs.dedup();
        for x in xs {
            total += f.left_limit(arc, x) * (h.left_limit(arc, x) - h.right_limit(arc, x));
        }
    }
    for v in 0..g.nodes.len() {
        let out_sum: Rat = g
            .arcs_from(v)
            .map(|a| h.right_limit(a, Rat::from_integer(0)))
            .fold(Rat::from_integer(0), |s, x| s + x);
        for a in g.arcs_into(v) {
            let l = match g.arc(a).len {
                ArcLen::Finite(l) => l,
                ArcLen::Infinite => unreachable!("infinite arcs end open"),
            };
            let fl = f.left_limit(a, l);
            if fl != Rat::from_integer(0) || out_sum != Rat::from_integer(0) {
                total += fl * (h.left_limit(a, l) - out_sum);
            }
        }
    }
    total
}

/// The Euler pairing of two intervals through their indicators.
pub fn euler_pair(g: &ShapeGraph, x: &Interval, y: &Interval) -> i64 {
    let r = euler_form(
        g,
        &StepFunction::indicator(g, x),
        &StepFunction::indicator(g, y),
    );
    debug_assert!(r.is_integer());
    r.to_integer()
}
