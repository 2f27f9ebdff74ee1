//! Intervals on a shape graph and their partial semigroup.
//!
//! An interval is a finite disjoint union of runs, one or more per arc,
//! whose union is connected and embeds like a half-open real interval. A
//! run `(a, b]` on an arc covers the coordinates strictly above `a` up to
//! and including `b`; the target node itself belongs to the run exactly
//! when `b` equals the arc length. Canonical form keeps runs sorted by
//! `(arc, a)` with same-arc adjacent runs merged, so structural equality
//! coincides with equality of point sets.
//!
//! Connectivity is ruled by closures: a run ending at a node links to every
//! run leaving that node at coordinate `0`. At most one run of an interval
//! may close at any given node; two runs merely *leaving* a common node do
//! not touch, since the node itself belongs to neither.
//!
//! `compose` is disjoint union when the result is again an interval;
//! `subtract` removes a proper subinterval when the complement stays one.
//! Both return `None` otherwise.

use crate::rat::{ArcLen, Lo, Rat};
use crate::shape::ShapeGraph;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub arc: usize,
    pub a: Lo,
    pub b: Rat,
}

impl Run {
    pub fn new(arc: usize, a: impl Into<Lo>, b: Rat) -> Self {
        Run {
            arc,
            a: a.into(),
            b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    runs: Vec<Run>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval has no runs")]
    Empty,
    #[error("run ({0}, {1}] is empty or reversed")]
    BadRun(Lo, Rat),
    #[error("run exceeds arc bounds on arc #{0}")]
    OutOfBounds(usize),
    #[error("run closes an open arc end on arc #{0}")]
    ClosesOpenEnd(usize),
    #[error("negative coordinates need a doubly open infinite arc (arc #{0})")]
    BelowSource(usize),
    #[error("runs overlap on arc #{0}")]
    Overlap(usize),
    #[error("two runs close at node #{0}")]
    DoubleClosure(usize),
    #[error("runs are not connected")]
    Disconnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalClass {
    Contractible,
    Circle,
    CircleWithTrees,
}

impl Interval {
    /// Canonicalizes and validates a run list.
    pub fn new(g: &ShapeGraph, mut runs: Vec<Run>) -> Result<Self, IntervalError> {
        if runs.is_empty() {
            return Err(IntervalError::Empty);
        }
        for r in &runs {
            check_run_bounds(g, r)?;
        }
        runs.sort();
        let mut merged: Vec<Run> = Vec::with_capacity(runs.len());
        for r in runs {
            match merged.last_mut() {
                Some(prev) if prev.arc == r.arc => {
                    if Lo::At(prev.b) > r.a {
                        return Err(IntervalError::Overlap(r.arc));
                    }
                    if Lo::At(prev.b) == r.a {
                        prev.b = r.b;
                    } else {
                        merged.push(r);
                    }
                }
                _ => merged.push(r),
            }
        }
        let iv = Interval { runs: merged };
        iv.check_closures(g)?;
        iv.check_connected(g)?;
        Ok(iv)
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// The node at which `run` closes, if its upper end reaches one.
    pub fn run_closure(g: &ShapeGraph, run: &Run) -> Option<usize> {
        let arc = g.arc(run.arc);
        match arc.len {
            ArcLen::Finite(l) if run.b == l => arc.tgt,
            _ => None,
        }
    }

    /// The node from which `run` opens, if its lower end is a node.
    pub fn run_opening(g: &ShapeGraph, run: &Run) -> Option<usize> {
        let arc = g.arc(run.arc);
        if run.a == Lo::At(Rat::from_integer(0)) {
            arc.src
        } else {
            None
        }
    }

    /// Nodes belonging to the interval's point set.
    pub fn nodes(&self, g: &ShapeGraph) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .runs
            .iter()
            .filter_map(|r| Self::run_closure(g, r))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn check_closures(&self, g: &ShapeGraph) -> Result<(), IntervalError> {
        let mut closed = vec![false; g.nodes.len()];
        for r in &self.runs {
            if let Some(v) = Self::run_closure(g, r) {
                if closed[v] {
                    return Err(IntervalError::DoubleClosure(v));
                }
                closed[v] = true;
            }
        }
        Ok(())
    }

    /// For each run, the index of the run it hangs off: the unique run
    /// closing at its opening node. Runs opening nowhere, or at a node no
    /// run closes, have no parent.
    fn parents(&self, g: &ShapeGraph) -> Vec<Option<usize>> {
        let mut closer_at = vec![None; g.nodes.len()];
        for (i, r) in self.runs.iter().enumerate() {
            if let Some(v) = Self::run_closure(g, r) {
                closer_at[v] = Some(i);
            }
        }
        self.runs
            .iter()
            .map(|r| Self::run_opening(g, r).and_then(|v| closer_at[v]))
            .collect()
    }

    fn check_connected(&self, g: &ShapeGraph) -> Result<(), IntervalError> {
        let n = self.runs.len();
        if n == 1 {
            return Ok(());
        }
        let parents = self.parents(g);
        let mut adj = vec![Vec::new(); n];
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p != i {
                    adj[i].push(p);
                    adj[p].push(i);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(IntervalError::Disconnected)
        }
    }

    /// Renders the canonical literal, e.g. `c:0,1+t:0,1/2`.
    pub fn display(&self, g: &ShapeGraph) -> String {
        let mut s = String::new();
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            let _ = write!(s, "{}:{},{}", g.arc(r.arc).name, r.a, crate::rat::fmt_rat(r.b));
        }
        s
    }
}

fn check_run_bounds(g: &ShapeGraph, r: &Run) -> Result<(), IntervalError> {
    let arc = g.arc(r.arc);
    if r.a >= Lo::At(r.b) {
        return Err(IntervalError::BadRun(r.a, r.b));
    }
    let doubly_open_infinite = arc.src.is_none() && arc.len == ArcLen::Infinite;
    if !doubly_open_infinite && r.a < Lo::At(Rat::from_integer(0)) {
        return Err(IntervalError::BelowSource(r.arc));
    }
    match arc.len {
        ArcLen::Finite(l) => {
            if r.b > l {
                return Err(IntervalError::OutOfBounds(r.arc));
            }
            if r.b == l && arc.tgt.is_none() {
                return Err(IntervalError::ClosesOpenEnd(r.arc));
            }
        }
        ArcLen::Infinite => {}
    }
    Ok(())
}

/// Point-set disjointness. Same-arc adjacency does not count as contact.
pub fn disjoint(g: &ShapeGraph, x: &Interval, y: &Interval) -> bool {
    for rx in x.runs() {
        for ry in y.runs() {
            if rx.arc == ry.arc && rx.a < Lo::At(ry.b) && ry.a < Lo::At(rx.b) {
                return false;
            }
        }
    }
    let nx = x.nodes(g);
    let ny = y.nodes(g);
    nx.iter().all(|v| !ny.contains(v))
}

/// Point-set containment `inner` within `outer`. Each inner run must sit
/// inside a single outer run; node membership then follows.
pub fn contains(outer: &Interval, inner: &Interval) -> bool {
    inner.runs().iter().all(|ri| {
        outer
            .runs()
            .iter()
            .any(|ro| ro.arc == ri.arc && ro.a <= ri.a && ri.b <= ro.b)
    })
}

/// Partial sum: the union when it is disjoint and again an interval.
pub fn compose(g: &ShapeGraph, x: &Interval, y: &Interval) -> Option<Interval> {
    if !disjoint(g, x, y) {
        return None;
    }
    let mut runs = x.runs().to_vec();
    runs.extend_from_slice(y.runs());
    Interval::new(g, runs).ok()
}

/// Partial difference: removes a proper subinterval `y` from `x` when the
/// complement is again an interval.
pub fn subtract(g: &ShapeGraph, x: &Interval, y: &Interval) -> Option<Interval> {
    if x == y || !contains(x, y) {
        return None;
    }
    let mut pieces: Vec<Run> = Vec::new();
    for rx in x.runs() {
        let mut cuts: Vec<&Run> = y
            .runs()
            .iter()
            .filter(|ry| ry.arc == rx.arc && rx.a <= ry.a && ry.b <= rx.b)
            .collect();
        cuts.sort();
        let mut lo = rx.a;
        for c in cuts {
            if lo < c.a {
                if let Lo::At(hi) = c.a {
                    pieces.push(Run {
                        arc: rx.arc,
                        a: lo,
                        b: hi,
                    });
                }
            }
            lo = Lo::At(c.b);
        }
        if lo < Lo::At(rx.b) {
            pieces.push(Run {
                arc: rx.arc,
                a: lo,
                b: rx.b,
            });
        }
    }
    if pieces.is_empty() {
        return None;
    }
    Interval::new(g, pieces).ok()
}

/// Topological type of an interval: no cycle, exactly the cycle, or a
/// cycle with attached trees. Validity bounds the cycle count by one.
pub fn classify(g: &ShapeGraph, x: &Interval) -> IntervalClass {
    let parents = x.parents(g);
    let n = x.runs().len();
    let edges = parents.iter().filter(|p| p.is_some()).count();
    debug_assert!(edges <= n);
    if edges < n {
        return IntervalClass::Contractible;
    }
    // Every run has a parent: follow pointers to find the unique cycle.
    let mut state = vec![0u8; n];
    let mut cur = 0usize;
    loop {
        if state[cur] == 1 {
            break;
        }
        state[cur] = 1;
        cur = parents[cur].unwrap();
    }
    let mut cycle = vec![false; n];
    let start = cur;
    let mut len = 0usize;
    loop {
        cycle[cur] = true;
        len += 1;
        cur = parents[cur].unwrap();
        if cur == start {
            break;
        }
    }
    if len == n {
        IntervalClass::Circle
    } else {
        IntervalClass::CircleWithTrees
    }
}

/// Parses `arc:a,b` runs joined by `+` and validates the result.
pub fn parse_interval(g: &ShapeGraph, s: &str) -> Result<Interval, String> {
    let mut runs = Vec::new();
    for part in s.split('+') {
        let part = part.trim();
        let (arc_name, rest) = part
            .split_once(':')
            .ok_or_else(|| format!("run `{part}` lacks `arc:a,b` shape"))?;
        let arc = g
            .arc_id(arc_name.trim())
            .ok_or_else(|| format!("unknown arc `{}`", arc_name.trim()))?;
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| format!("run `{part}` lacks two endpoints"))?;
        let a = crate::rat::parse_rat(a)?;
        let b = crate::rat::parse_rat(b)?;
        runs.push(Run::new(arc, a, b));
    }
    Interval::new(g, runs).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::shape::{circle_graph, line_graph, parse_graph, wedge_graph, y_graph};

    fn iv(g: &ShapeGraph, s: &str) -> Interval {
        parse_interval(g, s).unwrap()
    }

    #[test]
    fn line_compose_and_subtract() {
        let g = line_graph();
        let a = iv(&g, "r:0,1");
        let b = iv(&g, "r:1,2");
        assert_eq!(compose(&g, &a, &b), Some(iv(&g, "r:0,2")));
        let whole = iv(&g, "r:0,3");
        let mid = iv(&g, "r:1,2");
        assert_eq!(subtract(&g, &whole, &mid), None);
        let pre = iv(&g, "r:0,1");
        assert_eq!(subtract(&g, &whole, &pre), Some(iv(&g, "r:1,3")));
        assert_eq!(subtract(&g, &whole, &whole), None);
        assert_eq!(compose(&g, &a, &a), None);
        assert_eq!(compose(&g, &iv(&g, "r:0,2"), &iv(&g, "r:1,3")), None);
    }

    #[test]
    fn circle_two_arcs() {
        let g = circle_graph(2);
        let a1 = iv(&g, "c1:0,1");
        let a2 = iv(&g, "c2:0,1");
        let s1 = compose(&g, &a1, &a2).expect("two arcs close up");
        assert_eq!(classify(&g, &s1), IntervalClass::Circle);
        assert_eq!(subtract(&g, &s1, &a1), Some(a2.clone()));
        assert_eq!(classify(&g, &a1), IntervalClass::Contractible);
        assert_eq!(s1.nodes(&g), vec![0, 1]);
        assert_eq!(a1.nodes(&g), vec![1]);
    }

    #[test]
    fn loop_arc_is_a_circle() {
        let g = wedge_graph();
        let c = iv(&g, "c:0,1");
        assert_eq!(classify(&g, &c), IntervalClass::Circle);
        let t = iv(&g, "t:0,1");
        let w = compose(&g, &c, &t).expect("tail leaves the junction");
        assert_eq!(classify(&g, &w), IntervalClass::CircleWithTrees);
        assert_eq!(w.display(&g), "c:0,1+t:0,1");
    }

    #[test]
    fn wedge_disconnection_cases() {
        let g = wedge_graph();
        // A tail piece away from the junction cannot join the circle.
        let c = iv(&g, "c:0,1");
        let far = iv(&g, "t:1,2");
        assert_eq!(compose(&g, &c, &far), None);
        // A partial loop does not reach the junction, so the tail hangs.
        let partial = iv(&g, "c:0,1/2");
        let t = iv(&g, "t:0,1");
        assert_eq!(compose(&g, &partial, &t), None);
        // Removing an inner loop piece through the junction wraps fine.
        let w = compose(&g, &c, &t).unwrap();
        assert_eq!(subtract(&g, &w, &iv(&g, "c:0,1/2")), Some(iv(&g, "c:1/2,1+t:0,1")));
    }

    #[test]
    fn double_closure_rejected() {
        // Two incoming arcs cannot both close at the shared node.
        let g = parse_graph("node v\narc a - v len 1\narc b - v len 1").unwrap();
        let bad = Interval::new(
            &g,
            vec![
                Run::new(0, rat_int(0), rat_int(1)),
                Run::new(1, rat_int(0), rat_int(1)),
            ],
        );
        assert_eq!(bad.unwrap_err(), IntervalError::DoubleClosure(0));
        // A figure eight fails the same way.
        let g8 = parse_graph("node v\narc a v v len 1\narc b v v len 1").unwrap();
        let bad8 = Interval::new(
            &g8,
            vec![
                Run::new(0, rat_int(0), rat_int(1)),
                Run::new(1, rat_int(0), rat_int(1)),
            ],
        );
        assert_eq!(bad8.unwrap_err(), IntervalError::DoubleClosure(0));
    }

    #[test]
    fn y_graph_composition() {
        let g = y_graph();
        let i = iv(&g, "i:0,1");
        let p = iv(&g, "p:0,1");
        let q = iv(&g, "q:0,1");
        assert!(compose(&g, &i, &p).is_some());
        assert!(compose(&g, &i, &q).is_some());
        // Two outgoing tails never connect to each other.
        assert_eq!(compose(&g, &p, &q), None);
        let ip = compose(&g, &i, &p).unwrap();
        let ipq = compose(&g, &ip, &q).unwrap();
        assert_eq!(classify(&g, &ipq), IntervalClass::Contractible);
        assert_eq!(subtract(&g, &ipq, &i), None);
    }

    #[test]
    fn canonical_form_merges_and_sorts() {
        let g = line_graph();
        let x = Interval::new(
            &g,
            vec![
                Run::new(0, rat_int(1), rat_int(2)),
                Run::new(0, rat_int(0), rat_int(1)),
            ],
        )
        .unwrap();
        assert_eq!(x, iv(&g, "r:0,2"));
        let overlap = Interval::new(
            &g,
            vec![
                Run::new(0, rat_int(0), rat_int(2)),
                Run::new(0, rat_int(1), rat_int(3)),
            ],
        );
        assert_eq!(overlap.unwrap_err(), IntervalError::Overlap(0));
    }

    #[test]
    fn negative_coordinates_only_on_the_line() {
        let g = line_graph();
        assert!(parse_interval(&g, "r:-2,-1").is_ok());
        let run = Run::new(0, Lo::MinusInf, rat_int(0));
        assert!(Interval::new(&g, vec![run]).is_ok());
        let gy = y_graph();
        assert!(parse_interval(&gy, "p:-1,1").is_err());
    }

    #[test]
    fn open_end_and_bound_violations() {
        let g = y_graph();
        // i has length 1 ending at v; b = len is fine.
        assert!(parse_interval(&g, "i:0,1").is_ok());
        assert!(parse_interval(&g, "i:0,2").is_err());
        let gl = parse_graph("arc a - - len 2").unwrap();
        // target end is open: b = len closes nothing.
        assert!(parse_interval(&gl, "a:0,2").is_err());
        assert!(parse_interval(&gl, "a:0,3/2").is_ok());
        assert!(parse_interval(&gl, "a:1,1").is_err());
    }

    #[test]
    fn display_round_trips() {
        let g = wedge_graph();
        for s in ["c:0,1", "c:1/2,1+t:0,1", "t:0,1/2"] {
            let x = iv(&g, s);
            assert_eq!(x.display(&g), s);
            assert_eq!(iv(&g, &x.display(&g)), x);
        }
    }

    #[test]
    fn subtract_keeps_node_membership_straight() {
        let g = circle_graph(2);
        let s1 = iv(&g, "c1:0,1+c2:0,1");
        let half = iv(&g, "c1:1/2,1");
        let rest = subtract(&g, &s1, &half).unwrap();
        assert_eq!(rest, iv(&g, "c1:0,1/2+c2:0,1"));
        assert_eq!(rest.nodes(&g), vec![0]);
        assert_eq!(classify(&g, &rest), IntervalClass::Contractible);
        assert_eq!(rat(1, 2) + rat(1, 2), rat_int(1));
    }
}
