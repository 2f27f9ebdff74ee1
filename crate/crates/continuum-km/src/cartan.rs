//! The Cartan datum attached to a shape graph: the run-pair route to the
//! Euler form, the symmetrized form kappa, the signed form xi, relative
//! position of interval pairs, and Serre-pair membership.

use crate::interval::{classify, compose, contains, disjoint, Interval, IntervalClass, Run};
use crate::rat::{ArcLen, Lo, Rat};
use crate::shape::ShapeGraph;
use crate::step::{euler_form, euler_pair, StepFunction};

/// Euler pairing computed run by run, independently of step functions.
///
/// Same-arc run pairs are scored by the real-line table in arc
/// coordinates; every ordered run pair contributes an extra -1 when the
/// first run closes at a node where the second one opens. Circles need no
/// special casing: a loop run closing and opening at the same node picks
/// up the -1 against its own +1 from the table.
pub fn euler_form_runpair(g: &ShapeGraph, x: &Interval, y: &Interval) -> i64 {
    let mut total = 0;
    for r in x.runs() {
        for s in y.runs() {
            if r.arc == s.arc {
                total += line_table(r, s);
            }
            if let (Some(v), Some(w)) =
                (Interval::run_closure(g, r), Interval::run_opening(g, s))
            {
                if v == w {
                    total -= 1;
                }
            }
        }
    }
    total
}

/// The pairing of `(a1,b1]` with `(a2,b2]` on one line.
fn line_table(r: &Run, s: &Run) -> i64 {
    let (a1, b1, a2, b2) = (r.a, r.b, s.a, s.b);
    if (a1, b1) == (a2, b2) {
        return 1;
    }
    if Lo::At(b1) <= a2 {
        // first ends before second: -1 when adjacent, 0 when apart
        return if Lo::At(b1) == a2 { -1 } else { 0 };
    }
    if Lo::At(b2) <= a1 {
        return 0;
    }
    if a1 <= a2 && b2 <= b1 {
        // second nested in first: 1 only when the open ends agree
        return if a1 == a2 { 1 } else { 0 };
    }
    if a2 <= a1 && b1 <= b2 {
        // first nested in second: 1 only when the closed ends agree
        return if b1 == b2 { 1 } else { 0 };
    }
    // crossing: -1 when the first starts first
    if a1 < a2 {
        -1
    } else {
        1
    }
}

/// Symmetrized Euler form on indicator functions.
pub fn kappa(g: &ShapeGraph, x: &Interval, y: &Interval) -> i64 {
    euler_pair(g, x, y) + euler_pair(g, y, x)
}

/// Symmetrized form on arbitrary step functions.
pub fn kappa_step(g: &ShapeGraph, f: &StepFunction, h: &StepFunction) -> Rat {
    euler_form(g, f, h) + euler_form(g, h, f)
}

/// `xi(x,y) = (-1)^{<x,y>} kappa(x,y)`.
pub fn xi(g: &ShapeGraph, x: &Interval, y: &Interval) -> i64 {
    let e = euler_pair(g, x, y);
    let k = e + euler_pair(g, y, x);
    if e.rem_euclid(2) == 0 {
        k
    } else {
        -k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelativePosition {
    Equal,
    Adjacent,
    Disjoint,
    ClosedSub,
    OpenSub,
    StrictSub,
    Overlap,
    Other,
}

impl std::fmt::Display for RelativePosition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RelativePosition::Equal => "equal",
            RelativePosition::Adjacent => "adjacent",
            RelativePosition::Disjoint => "disjoint",
            RelativePosition::ClosedSub => "closed_sub",
            RelativePosition::OpenSub => "open_sub",
            RelativePosition::StrictSub => "strict_sub",
            RelativePosition::Overlap => "overlap",
            RelativePosition::Other => "other",
        };
        f.write_str(s)
    }
}

/// Classify how two intervals sit relative to each other.
///
/// Containment sub-cases name the end of the smaller interval that is
/// interior to the larger one: `closed_sub` when only its closed end is,
/// `open_sub` when only its open end is, `strict_sub` when both are.
/// `other` covers configurations with no line analogue, such as a circle
/// inside a larger interval or a disconnected intersection.
pub fn relative_position(g: &ShapeGraph, x: &Interval, y: &Interval) -> RelativePosition {
    if x == y {
        return RelativePosition::Equal;
    }
    if disjoint(g, x, y) {
        return if compose(g, x, y).is_some() {
            RelativePosition::Adjacent
        } else {
            RelativePosition::Disjoint
        };
    }
    let (sm, bg) = if contains(y, x) {
        (x, y)
    } else if contains(x, y) {
        (y, x)
    } else {
        let mut runs = Vec::new();
        for r in x.runs() {
            for s in y.runs() {
                if r.arc == s.arc {
                    let lo = r.a.max(s.a);
                    let hi = r.b.min(s.b);
                    if lo < Lo::At(hi) {
                        runs.push(Run { arc: r.arc, a: lo, b: hi });
                    }
                }
            }
        }
        return if Interval::new(g, runs).is_ok() {
            RelativePosition::Overlap
        } else {
            RelativePosition::Other
        };
    };
    match (extends_before(g, sm, bg), extends_after(g, sm, bg)) {
        (true, true) => RelativePosition::StrictSub,
        (true, false) => RelativePosition::OpenSub,
        (false, true) => RelativePosition::ClosedSub,
        (false, false) => RelativePosition::Other,
    }
}

/// Does `bg` continue past a free open end of `sm`?
fn extends_before(g: &ShapeGraph, sm: &Interval, bg: &Interval) -> bool {
    for r in sm.runs() {
        if let Some(v) = Interval::run_opening(g, r) {
            // an opening matched by sm's own closure is an interior link
            if sm
                .runs()
                .iter()
                .any(|q| Interval::run_closure(g, q) == Some(v))
            {
                continue;
            }
            if bg
                .runs()
                .iter()
                .any(|q| Interval::run_closure(g, q) == Some(v))
            {
                return true;
            }
        } else if let Lo::At(xa) = r.a {
            if bg
                .runs()
                .iter()
                .any(|q| q.arc == r.arc && q.a < Lo::At(xa) && xa <= q.b)
            {
                return true;
            }
        }
        // a run open to -inf has no end to extend past
    }
    false
}

/// Does `bg` continue past a free closed end of `sm`?
fn extends_after(g: &ShapeGraph, sm: &Interval, bg: &Interval) -> bool {
    for r in sm.runs() {
        if let Some(v) = Interval::run_closure(g, r) {
            if sm
                .runs()
                .iter()
                .any(|q| Interval::run_opening(g, q) == Some(v))
            {
                continue;
            }
            if bg
                .runs()
                .iter()
                .any(|q| Interval::run_opening(g, q) == Some(v))
            {
                return true;
            }
        } else if bg
            .runs()
            .iter()
            .any(|q| q.arc == r.arc && q.a <= Lo::At(r.b) && r.b < q.b)
        {
            return true;
        }
    }
    false
}

pub fn is_real(g: &ShapeGraph, x: &Interval) -> bool {
    classify(g, x) == IntervalClass::Contractible
}

pub fn is_imaginary(g: &ShapeGraph, x: &Interval) -> bool {
    !is_real(g, x)
}

pub fn is_degenerate(g: &ShapeGraph, x: &Interval) -> bool {
    classify(g, x) == IntervalClass::Circle
}

pub fn is_orthogonal(g: &ShapeGraph, x: &Interval, y: &Interval) -> bool {
    compose(g, x, y).is_none() && disjoint(g, x, y)
}

/// Serre-pair membership.
///
/// True iff `j` is contractible and no pair of subintervals `i` of `j`
/// and `ip` of `jp` composes to a circle, where `ip` ranges only over
/// subintervals with `kappa(jp, ip) != 0` unless `ip = jp`. A composed
/// circle is a full graph cycle partitioned between the two, so the
/// search enumerates cycles covered by `j` and `jp` and splits their
/// segments.
pub fn serre_member(g: &ShapeGraph, j: &Interval, jp: &Interval) -> bool {
    if !is_real(g, j) {
        return false;
    }
    for cycle in simple_cycles(g) {
        if let Some(segs) = cycle_segments(g, &cycle, j, jp) {
            if has_circle_partition(g, &segs, jp) {
                return false;
            }
        }
    }
    true
}

/// The circle spanned by the unique fully covered graph cycle inside a
/// non-contractible interval. Contractible intervals have none.
pub fn circle_core(g: &ShapeGraph, x: &Interval) -> Option<Interval> {
    for cycle in simple_cycles(g) {
        let full = cycle.iter().all(|&aid| match g.arc(aid).len {
            ArcLen::Finite(l) => covers(x, aid, Rat::from_integer(0), l),
            ArcLen::Infinite => false,
        });
        if !full {
            continue;
        }
        let runs = cycle
            .iter()
            .map(|&aid| {
                let ArcLen::Finite(l) = g.arc(aid).len else {
                    unreachable!("cycle arcs are finite");
                };
                Run::new(aid, Rat::from_integer(0), l)
            })
            .collect();
        return Interval::new(g, runs).ok();
    }
    None
}

/// Simple directed cycles as arc-id lists; each cycle is found once,
/// rooted at its minimal arc id.
fn simple_cycles(g: &ShapeGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for start in 0..g.arcs.len() {
        let arc = g.arc(start);
        let (Some(src), Some(tgt)) = (arc.src, arc.tgt) else {
            continue;
        };
        let mut path = vec![start];
        let mut seen = vec![false; g.nodes.len()];
        seen[src] = true;
        dfs_cycles(g, start, src, tgt, &mut path, &mut seen, &mut out);
    }
    out
}

fn dfs_cycles(
    g: &ShapeGraph,
    start: usize,
    home: usize,
    cur: usize,
    path: &mut Vec<usize>,
    seen: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if cur == home {
        out.push(path.clone());
        return;
    }
    if seen[cur] {
        return;
    }
    seen[cur] = true;
    for a2 in g.arcs_from(cur) {
        if a2 <= start || path.contains(&a2) {
            continue;
        }
        let Some(t2) = g.arc(a2).tgt else { continue };
        path.push(a2);
        dfs_cycles(g, start, home, t2, path, seen, out);
        path.pop();
    }
    seen[cur] = false;
}

struct Seg {
    arc: usize,
    lo: Rat,
    hi: Rat,
    in_j: bool,
    in_jp: bool,
}

/// Cut the cycle's arcs at every run endpoint of `j` and `jp`.
/// Returns None unless the two intervals jointly cover the whole cycle.
fn cycle_segments(g: &ShapeGraph, cycle: &[usize], j: &Interval, jp: &Interval) -> Option<Vec<Seg>> {
    let mut segs = Vec::new();
    for &arc in cycle {
        let len = match g.arc(arc).len {
            ArcLen::Finite(l) => l,
            ArcLen::Infinite => return None,
        };
        let zero = Rat::from_integer(0);
        let mut cuts = vec![zero, len];
        for iv in [j, jp] {
            for r in iv.runs() {
                if r.arc != arc {
                    continue;
                }
                if let Lo::At(a) = r.a {
                    if zero < a && a < len {
                        cuts.push(a);
                    }
                }
                if r.b < len {
                    cuts.push(r.b);
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let in_j = covers(j, arc, lo, hi);
            let in_jp = covers(jp, arc, lo, hi);
            if !in_j && !in_jp {
                return None;
            }
            segs.push(Seg { arc, lo, hi, in_j, in_jp });
        }
    }
    Some(segs)
}

fn covers(iv: &Interval, arc: usize, lo: Rat, hi: Rat) -> bool {
    iv.runs()
        .iter()
        .any(|r| r.arc == arc && r.a <= Lo::At(lo) && hi <= r.b)
}

/// Can the segments be split into valid intervals `i` inside `j` and `ip`
/// inside `jp` passing the kappa filter? Segments covered by only one of
/// the two are forced; doubly covered ones are free to go either way.
fn has_circle_partition(g: &ShapeGraph, segs: &[Seg], jp: &Interval) -> bool {
    let free: Vec<usize> = segs
        .iter()
        .enumerate()
        .filter(|(_, s)| s.in_j && s.in_jp)
        .map(|(k, _)| k)
        .collect();
    debug_assert!(free.len() < 24, "cycle segment count out of expected range");
    for mask in 0u32..(1u32 << free.len()) {
        let mut i_runs = Vec::new();
        let mut ip_runs = Vec::new();
        for (k, s) in segs.iter().enumerate() {
            let to_ip = match free.iter().position(|&f| f == k) {
                Some(pos) => mask >> pos & 1 == 1,
                None => s.in_jp,
            };
            let run = Run { arc: s.arc, a: Lo::At(s.lo), b: s.hi };
            if to_ip {
                ip_runs.push(run);
            } else {
                i_runs.push(run);
            }
        }
        if i_runs.is_empty() || ip_runs.is_empty() {
            continue;
        }
        let Ok(i) = Interval::new(g, i_runs) else { continue };
        let Ok(ip) = Interval::new(g, ip_runs) else { continue };
        if &ip != jp && kappa(g, jp, &ip) == 0 {
            continue;
        }
        debug_assert!(compose(g, &i, &ip).is_some());
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_intervals;
    use crate::interval::parse_interval;
    use crate::rat::{rat, rat_int};
    use crate::shape::{circle_graph, line_graph, parse_graph, wedge_graph, y_graph};

    #[test]
    fn runpair_matches_step_route_on_line_table() {
        let g = line_graph();
        let iv = |s| parse_interval(&g, s).unwrap();
        let pairs = [
            ("r:0,1", "r:0,1"),
            ("r:0,1", "r:1,2"),
            ("r:1,2", "r:0,1"),
            ("r:0,1", "r:2,3"),
            ("r:0,1", "r:0,3"),
            ("r:0,3", "r:0,1"),
            ("r:1,3", "r:0,3"),
            ("r:0,3", "r:1,3"),
            ("r:1,2", "r:0,3"),
            ("r:0,3", "r:1,2"),
            ("r:0,2", "r:1,3"),
            ("r:1,3", "r:0,2"),
        ];
        let expect = [1, -1, 0, 0, 0, 1, 1, 0, 0, 0, -1, 1];
        for ((a, b), want) in pairs.iter().zip(expect) {
            let x = iv(a);
            let y = iv(b);
            assert_eq!(euler_form_runpair(&g, &x, &y), want, "<{a},{b}>");
            assert_eq!(euler_pair(&g, &x, &y), want, "step route <{a},{b}>");
        }
    }

    #[test]
    fn runpair_matches_step_route_on_enumerations() {
        for (g, window) in [
            (line_graph(), (rat_int(0), rat_int(3))),
            (circle_graph(2), (rat_int(0), rat_int(0))),
            (circle_graph(3), (rat_int(0), rat_int(0))),
            (wedge_graph(), (rat_int(0), rat_int(2))),
            (y_graph(), (rat_int(0), rat_int(1))),
        ] {
            let ivs = enumerate_intervals(&g, rat(1, 2), 3, window);
            for x in &ivs {
                for y in &ivs {
                    assert_eq!(
                        euler_form_runpair(&g, x, y),
                        euler_pair(&g, x, y),
                        "{} vs {}",
                        x.display(&g),
                        y.display(&g)
                    );
                }
            }
        }
    }

    #[test]
    fn wedge_and_y_values() {
        let g = wedge_graph();
        let s = parse_interval(&g, "c:0,1").unwrap();
        let t = parse_interval(&g, "t:0,1").unwrap();
        assert_eq!(euler_form_runpair(&g, &t, &s), 0);
        assert_eq!(euler_form_runpair(&g, &s, &t), -1);
        assert_eq!(kappa(&g, &t, &s), -1);
        let sub = parse_interval(&g, "c:1/2,1").unwrap();
        assert_eq!(kappa(&g, &sub, &s), 0);

        let y = y_graph();
        let x = parse_interval(&y, "i:0,1+p:0,1+q:0,1").unwrap();
        assert_eq!(euler_form_runpair(&y, &x, &x), 1);
    }

    #[test]
    fn kappa_values() {
        let g = line_graph();
        let a = parse_interval(&g, "r:0,1").unwrap();
        let b = parse_interval(&g, "r:1,2").unwrap();
        assert_eq!(kappa(&g, &a, &a), 2);
        assert_eq!(kappa(&g, &a, &b), -1);
        assert_eq!(kappa(&g, &b, &a), -1);

        let c2 = circle_graph(2);
        let s1 = parse_interval(&c2, "c1:0,1+c2:0,1").unwrap();
        let a1 = parse_interval(&c2, "c1:0,1").unwrap();
        let a2 = parse_interval(&c2, "c2:0,1").unwrap();
        assert_eq!(kappa(&c2, &s1, &s1), 0);
        assert_eq!(kappa(&c2, &a1, &a2), -2);
        assert_eq!(kappa(&c2, &s1, &a1), 0);

        // two circles tangent at one node
        let tg = parse_graph("node v\narc a v v len 1\narc b v v len 1\n").unwrap();
        let ca = parse_interval(&tg, "a:0,1").unwrap();
        let cb = parse_interval(&tg, "b:0,1").unwrap();
        assert_eq!(kappa(&tg, &ca, &cb), -2);
        assert_eq!(kappa(&tg, &ca, &ca), 0);
    }

    #[test]
    fn xi_values() {
        let g = line_graph();
        let big = parse_interval(&g, "r:0,3").unwrap();
        let small = parse_interval(&g, "r:0,1").unwrap();
        assert_eq!(xi(&g, &big, &small), -1);
        assert_eq!(xi(&g, &small, &small), -2);

        let c2 = circle_graph(2);
        let a1 = parse_interval(&c2, "c1:0,1").unwrap();
        let a2 = parse_interval(&c2, "c2:0,1").unwrap();
        assert_eq!(xi(&c2, &a1, &a2), 2);
        let s1 = parse_interval(&c2, "c1:0,1+c2:0,1").unwrap();
        assert_eq!(xi(&c2, &s1, &a1), 0);
        assert_eq!(xi(&c2, &a1, &s1), 0);
    }

    #[test]
    fn relative_position_line_cases() {
        let g = line_graph();
        let iv = |s| parse_interval(&g, s).unwrap();
        use RelativePosition::*;
        let cases = [
            ("r:0,1", "r:0,1", Equal),
            ("r:0,1", "r:1,2", Adjacent),
            ("r:1,2", "r:0,1", Adjacent),
            ("r:0,1", "r:2,3", Disjoint),
            ("r:0,1", "r:0,3", ClosedSub),
            ("r:0,3", "r:0,1", ClosedSub),
            ("r:2,3", "r:0,3", OpenSub),
            ("r:1,2", "r:0,3", StrictSub),
            ("r:0,2", "r:1,3", Overlap),
            ("r:-2,-1", "r:-1,0", Adjacent),
        ];
        for (a, b, want) in cases {
            assert_eq!(relative_position(&g, &iv(a), &iv(b)), want, "{a} vs {b}");
        }
    }

    #[test]
    fn relative_position_graph_cases() {
        let c1 = circle_graph(1);
        let s1 = parse_interval(&c1, "c1:0,1").unwrap();
        let arc = parse_interval(&c1, "c1:0,1/2").unwrap();
        use RelativePosition::*;
        assert_eq!(relative_position(&c1, &arc, &s1), StrictSub);

        let w = wedge_graph();
        let sw = parse_interval(&w, "c:0,1").unwrap();
        let big = parse_interval(&w, "c:0,1+t:0,1").unwrap();
        let tail = parse_interval(&w, "t:0,1").unwrap();
        assert_eq!(relative_position(&w, &sw, &big), Other);
        assert_eq!(relative_position(&w, &tail, &big), OpenSub);
        assert_eq!(relative_position(&w, &sw, &tail), Adjacent);

        let y = y_graph();
        let p = parse_interval(&y, "p:0,1").unwrap();
        let q = parse_interval(&y, "q:0,1").unwrap();
        assert_eq!(relative_position(&y, &p, &q), Disjoint);
    }

    #[test]
    fn predicates() {
        let g = wedge_graph();
        let s = parse_interval(&g, "c:0,1").unwrap();
        let t = parse_interval(&g, "t:0,1").unwrap();
        let w = parse_interval(&g, "c:0,1+t:0,1").unwrap();
        assert!(is_real(&g, &t) && !is_imaginary(&g, &t) && !is_degenerate(&g, &t));
        assert!(is_imaginary(&g, &s) && is_degenerate(&g, &s));
        assert!(is_imaginary(&g, &w) && !is_degenerate(&g, &w));
        let far = parse_interval(&g, "t:1,2").unwrap();
        assert!(is_orthogonal(&g, &s, &far));
        assert!(!is_orthogonal(&g, &s, &t));
    }

    #[test]
    fn serre_on_the_line_is_total() {
        let g = line_graph();
        let ivs = enumerate_intervals(&g, rat_int(1), 1, (rat_int(0), rat_int(3)));
        for x in &ivs {
            for y in &ivs {
                assert!(serre_member(&g, x, y));
            }
        }
    }

    #[test]
    fn serre_on_circles() {
        let c2 = circle_graph(2);
        let a1 = parse_interval(&c2, "c1:0,1").unwrap();
        let a2 = parse_interval(&c2, "c2:0,1").unwrap();
        let s1 = parse_interval(&c2, "c1:0,1+c2:0,1").unwrap();
        assert!(!serre_member(&c2, &a1, &a2));
        assert!(!serre_member(&c2, &a2, &a1));
        assert!(serre_member(&c2, &a1, &s1));
        assert!(!serre_member(&c2, &s1, &a1));
        assert!(!serre_member(&c2, &s1, &s1));

        let c1 = circle_graph(1);
        let h1 = parse_interval(&c1, "c1:0,1/2").unwrap();
        let h2 = parse_interval(&c1, "c1:1/2,1").unwrap();
        let full = parse_interval(&c1, "c1:0,1").unwrap();
        assert!(!serre_member(&c1, &h1, &h2));
        assert!(serre_member(&c1, &h1, &full));
        let quarter = parse_interval(&c1, "c1:0,1/4").unwrap();
        assert!(serre_member(&c1, &quarter, &h2));
    }

    #[test]
    fn serre_on_wedge() {
        let g = wedge_graph();
        let s = parse_interval(&g, "c:0,1").unwrap();
        let t = parse_interval(&g, "t:0,1").unwrap();
        let sub = parse_interval(&g, "c:1/2,1").unwrap();
        assert!(serre_member(&g, &t, &s));
        assert!(!serre_member(&g, &s, &t));
        assert!(serre_member(&g, &sub, &s));
        assert!(!serre_member(&g, &sub, &parse_interval(&g, "c:0,1/2").unwrap()));
    }

    #[test]
    fn cycle_enumeration() {
        assert_eq!(simple_cycles(&line_graph()).len(), 0);
        assert_eq!(simple_cycles(&y_graph()).len(), 0);
        assert_eq!(simple_cycles(&circle_graph(1)).len(), 1);
        assert_eq!(simple_cycles(&circle_graph(4)).len(), 1);
        let tg = parse_graph("node v\narc a v v len 1\narc b v v len 1\n").unwrap();
        assert_eq!(simple_cycles(&tg).len(), 2);
        // theta graph: two nodes, three parallel-ish arcs, two cycles
        let th = parse_graph("node u\nnode v\narc p u v len 1\narc q v u len 1\narc r u v len 1\n")
            .unwrap();
        assert_eq!(simple_cycles(&th).len(), 2);
    }
}
