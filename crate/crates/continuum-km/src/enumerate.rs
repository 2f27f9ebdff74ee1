//! Grid-bounded enumeration of intervals.
//!
//! Candidate run endpoints are the multiples of `grid` inside each arc,
//! clipped to `window` along infinite directions. Finite arcs ignore the
//! window: their own length already bounds them. The enumeration emits
//! every valid interval assembled from at most `max_runs` candidate runs,
//! in canonical order.

use crate::interval::{Interval, Run};
use crate::rat::{ArcLen, Lo, Rat};
use crate::shape::ShapeGraph;

/// Grid multiples in `[lo, hi]`, ascending.
fn grid_points(grid: Rat, lo: Rat, hi: Rat) -> Vec<Rat> {
    debug_assert!(grid > Rat::from_integer(0));
    let mut out = Vec::new();
    let mut k = (lo / grid).ceil();
    while k * grid <= hi {
        out.push(k * grid);
        k += Rat::from_integer(1);
    }
    out
}

/// All candidate runs on `arc` with endpoints on the grid.
fn arc_runs(g: &ShapeGraph, arc: usize, grid: Rat, window: (Rat, Rat)) -> Vec<Run> {
    let a = g.arc(arc);
    let (lo, hi) = match (a.len, a.src.is_some()) {
        (ArcLen::Finite(l), _) => (Rat::from_integer(0), l),
        (ArcLen::Infinite, true) => (Rat::from_integer(0), window.1.max(Rat::from_integer(0))),
        (ArcLen::Infinite, false) => (window.0, window.1),
    };
    let pts = grid_points(grid, lo, hi);
    let mut out = Vec::new();
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            if let ArcLen::Finite(l) = a.len {
                if y == l && a.tgt.is_none() {
                    continue;
                }
            }
            out.push(Run::new(arc, x, y));
        }
    }
    out
}

/// Enumerates every valid interval with at most `max_runs` runs drawn from
/// the grid candidates. `window` clips infinite arcs. The result is sorted
/// in canonical interval order.
pub fn enumerate_intervals(
    g: &ShapeGraph,
    grid: Rat,
    max_runs: usize,
    window: (Rat, Rat),
) -> Vec<Interval> {
    let mut candidates: Vec<Run> = Vec::new();
    for arc in 0..g.arcs.len() {
        candidates.extend(arc_runs(g, arc, grid, window));
    }
    candidates.sort();
    let mut out = Vec::new();
    let mut chosen: Vec<Run> = Vec::new();
    assemble(g, &candidates, 0, max_runs, &mut chosen, &mut out);
    out.sort();
    out
}

fn assemble(
    g: &ShapeGraph,
    candidates: &[Run],
    from: usize,
    budget: usize,
    chosen: &mut Vec<Run>,
    out: &mut Vec<Interval>,
) {
    if !chosen.is_empty() {
        if let Ok(iv) = Interval::new(g, chosen.clone()) {
            // Canonical intervals never carry mergeable runs, so requiring
            // a strict gap between same-arc picks keeps output unique.
            if iv.runs().len() == chosen.len() {
                out.push(iv);
            }
        }
    }
    if budget == 0 {
        return;
    }
    for (i, c) in candidates.iter().enumerate().skip(from) {
        if let Some(prev) = chosen.last() {
            if prev.arc == c.arc && c.a < Lo::At(prev.b) {
                continue;
            }
        }
        chosen.push(*c);
        assemble(g, candidates, i + 1, budget - 1, chosen, out);
        chosen.pop();
    }
}
