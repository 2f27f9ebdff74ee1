//! Structure-constant normalizer for the interval Lie algebra of a
//! topological quiver.
//!
//! Elements live in the span of the generators X₀(F), X₊(J), X₋(J) with
//! exact rational coefficients. Brackets of span elements either land
//! back in the span or hit the one genuine boundary of the presentation:
//! a same-sign bracket whose pair is neither orthogonal nor in the Serre
//! set (the sum closes a circle). That outcome is the [`Unresolvable`]
//! value, not a panic; root spaces beyond the generator span belong to
//! the graded oracle.

use crate::cartan::{is_orthogonal, kappa_step, serre_member, xi};
use crate::interval::{compose, subtract, Interval};
use crate::rat::{rat_int, Rat};
use crate::shape::ShapeGraph;
use crate::step::{euler_pair, StepFunction};
use std::collections::BTreeMap;
use thiserror::Error;

/// A same-sign bracket left the interval-generator span.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unresolvable bracket [{sign}({left}), {sign}({right})]: pair outside the Serre set")]
pub struct Unresolvable {
    pub sign: char,
    pub left: String,
    pub right: String,
}

/// Span element in normalized form: a Cartan step function plus finitely
/// many raising and lowering generators with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    pub cartan: StepFunction,
    pub plus: BTreeMap<Interval, Rat>,
    pub minus: BTreeMap<Interval, Rat>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.cartan.is_zero() && self.plus.is_empty() && self.minus.is_empty()
    }

    /// The raising generator e(J) = X₊(J).
    pub fn e(iv: Interval) -> Self {
        let mut x = Self::zero();
        x.plus.insert(iv, rat_int(1));
        x
    }

    /// The lowering generator f(J) = X₋(J).
    pub fn f(iv: Interval) -> Self {
        let mut x = Self::zero();
        x.minus.insert(iv, rat_int(1));
        x
    }

    /// The Cartan generator h(J) = X₀(1_J).
    pub fn h(g: &ShapeGraph, iv: &Interval) -> Self {
        Self::from_cartan(StepFunction::indicator(g, iv))
    }

    pub fn from_cartan(mut f: StepFunction) -> Self {
        f.normalize();
        let mut x = Self::zero();
        x.cartan = f;
        x
    }

    pub fn scale(&self, c: Rat) -> Self {
        if c == rat_int(0) {
            return Self::zero();
        }
        let mut out = self.clone();
        out.cartan = out.cartan.scale(c);
        for v in out.plus.values_mut() {
            *v *= c;
        }
        for v in out.minus.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.cartan = out.cartan.add(&other.cartan);
        for (k, v) in &other.plus {
            add_term(&mut out.plus, k, *v);
        }
        for (k, v) in &other.minus {
            add_term(&mut out.minus, k, *v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(rat_int(-1)))
    }

    /// The X₀ component as a step function.
    pub fn cartan_part(&self) -> &StepFunction {
        &self.cartan
    }

    /// Splits the element by multidegree: e(J) sits in degree +1_J,
    /// f(J) in degree −1_J, the Cartan part in degree zero.
    pub fn grade(&self, g: &ShapeGraph) -> BTreeMap<StepFunction, LieElement> {
        let mut out: BTreeMap<StepFunction, LieElement> = BTreeMap::new();
        if !self.cartan.is_zero() {
            out.insert(StepFunction::zero(), Self::from_cartan(self.cartan.clone()));
        }
        for (iv, c) in &self.plus {
            let key = StepFunction::indicator(g, iv);
            let mut el = Self::zero();
            el.plus.insert(iv.clone(), *c);
            out.entry(key)
                .and_modify(|e| *e = e.add(&el))
                .or_insert(el);
        }
        for (iv, c) in &self.minus {
            let key = StepFunction::indicator(g, iv).scale(rat_int(-1));
            let mut el = Self::zero();
            el.minus.insert(iv.clone(), *c);
            out.entry(key)
                .and_modify(|e| *e = e.add(&el))
                .or_insert(el);
        }
        out
    }

    /// Canonical printing: Cartan pieces, then e-terms, then f-terms, one
    /// term per line, keys in interval order.
    pub fn render(&self, g: &ShapeGraph) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut lines = Vec::new();
        if !self.cartan.is_zero() {
            lines.push(format!("h {}", self.cartan.render(g)));
        }
        for (iv, c) in &self.plus {
            lines.push(format!("{} e({})", crate::rat::fmt_rat(*c), iv.display(g)));
        }
        for (iv, c) in &self.minus {
            lines.push(format!("{} f({})", crate::rat::fmt_rat(*c), iv.display(g)));
        }
        lines.join("\n")
    }
}

fn add_term(map: &mut BTreeMap<Interval, Rat>, key: &Interval, c: Rat) {
    if c == rat_int(0) {
        return;
    }
    let entry = map.entry(key.clone()).or_insert_with(|| rat_int(0));
    *entry += c;
    if *entry == rat_int(0) {
        map.remove(key);
    }
}

/// Sign and target of a same-sign bracket [X_s(j), X_s(jp)], or None for
/// zero, or the unresolvable boundary.
fn same_sign(
    g: &ShapeGraph,
    sign: char,
    j: &Interval,
    jp: &Interval,
) -> Result<Option<(Interval, i64)>, Unresolvable> {
    if j == jp || is_orthogonal(g, j, jp) {
        return Ok(None);
    }
    // Raising brackets carry (−1)^{⟨1_{J'},1_J⟩}, lowering ones the
    // transposed exponent; swapping the pair inserts a global minus.
    let exponent = |a: &Interval, b: &Interval| {
        if sign == 'e' {
            euler_pair(g, b, a)
        } else {
            euler_pair(g, a, b)
        }
    };
    if serre_member(g, j, jp) {
        let s = if exponent(j, jp).rem_euclid(2) == 0 { 1 } else { -1 };
        return Ok(compose(g, j, jp).map(|sum| (sum, s)));
    }
    if serre_member(g, jp, j) {
        let s = if exponent(jp, j).rem_euclid(2) == 0 { -1 } else { 1 };
        return Ok(compose(g, jp, j).map(|sum| (sum, s)));
    }
    Err(Unresolvable {
        sign,
        left: j.display(g),
        right: jp.display(g),
    })
}

/// The Lie bracket, extended bilinearly over the generator span.
pub fn bracket(g: &ShapeGraph, x: &LieElement, y: &LieElement) -> Result<LieElement, Unresolvable> {
    let mut acc = LieElement::zero();

    // [X₀(F), X₊(J')] = κ(F, J') X₊(J'), and the lowering mirror.
    for (jp, c) in &y.plus {
        let k = kappa_step(g, &x.cartan, &StepFunction::indicator(g, jp));
        add_term(&mut acc.plus, jp, k * c);
    }
    for (jp, c) in &y.minus {
        let k = kappa_step(g, &x.cartan, &StepFunction::indicator(g, jp));
        add_term(&mut acc.minus, jp, -k * c);
    }
    for (j, c) in &x.plus {
        let k = kappa_step(g, &y.cartan, &StepFunction::indicator(g, j));
        add_term(&mut acc.plus, j, -k * c);
    }
    for (j, c) in &x.minus {
        let k = kappa_step(g, &y.cartan, &StepFunction::indicator(g, j));
        add_term(&mut acc.minus, j, k * c);
    }

    // Same-sign sectors.
    for (j, c) in &x.plus {
        for (jp, cp) in &y.plus {
            if let Some((sum, s)) = same_sign(g, 'e', j, jp)? {
                add_term(&mut acc.plus, &sum, *c * *cp * rat_int(s));
            }
        }
    }
    for (j, c) in &x.minus {
        for (jp, cp) in &y.minus {
            if let Some((sum, s)) = same_sign(g, 'f', j, jp)? {
                add_term(&mut acc.minus, &sum, *c * *cp * rat_int(s));
            }
        }
    }

    // [X₊(J), X₋(J')] = δ X₀(J) + ξ(J,J')(X₊(J⊖J') − X₋(J'⊖J)), with the
    // convention that a generator on an undefined interval is zero.
    let mixed = |j: &Interval, jp: &Interval, c: Rat, acc: &mut LieElement| {
        if j == jp {
            acc.cartan = acc.cartan.add(&StepFunction::indicator(g, j).scale(c));
        }
        let coeff = rat_int(xi(g, j, jp)) * c;
        if coeff != rat_int(0) {
            if let Some(d) = subtract(g, j, jp) {
                add_term(&mut acc.plus, &d, coeff);
            }
            if let Some(d) = subtract(g, jp, j) {
                add_term(&mut acc.minus, &d, -coeff);
            }
        }
    };
    for (j, c) in &x.plus {
        for (jp, cp) in &y.minus {
            mixed(j, jp, *c * *cp, &mut acc);
        }
    }
    for (j, c) in &x.minus {
        for (jp, cp) in &y.plus {
            mixed(jp, j, -(*c * *cp), &mut acc);
        }
    }

    acc.cartan.normalize();
    Ok(acc)
}

/// [[x,y],z] + [[y,z],x] + [[z,x],y]; zero whenever every intermediate
/// bracket resolves.
pub fn jacobi_defect(
    g: &ShapeGraph,
    x: &LieElement,
    y: &LieElement,
    z: &LieElement,
) -> Result<LieElement, Unresolvable> {
    let a = bracket(g, &bracket(g, x, y)?, z)?;
    let b = bracket(g, &bracket(g, y, z)?, x)?;
    let c = bracket(g, &bracket(g, z, x)?, y)?;
    Ok(a.add(&b).add(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::parse_interval;
    use crate::shape::{circle_graph, line_graph, wedge_graph};

    fn le(g: &ShapeGraph, s: &str) -> LieElement {
        LieElement::e(parse_interval(g, s).unwrap())
    }

    fn lf(g: &ShapeGraph, s: &str) -> LieElement {
        LieElement::f(parse_interval(g, s).unwrap())
    }

    fn lh(g: &ShapeGraph, s: &str) -> LieElement {
        LieElement::h(g, &parse_interval(g, s).unwrap())
    }

    #[test]
    fn adjacent_raising_generators_join() {
        let g = line_graph();
        let got = bracket(&g, &le(&g, "r:0,1"), &le(&g, "r:1,2")).unwrap();
        assert_eq!(got, le(&g, "r:0,2"));
        // Reversed order flips the sign but lands on the same generator.
        let rev = bracket(&g, &le(&g, "r:1,2"), &le(&g, "r:0,1")).unwrap();
        assert_eq!(rev, le(&g, "r:0,2").scale(rat_int(-1)));
    }

    #[test]
    fn mixed_bracket_truncates() {
        let g = line_graph();
        let got = bracket(&g, &le(&g, "r:0,2"), &lf(&g, "r:0,1")).unwrap();
        assert_eq!(got, le(&g, "r:1,2").scale(rat_int(-1)));
        let got = bracket(&g, &le(&g, "r:0,1"), &lf(&g, "r:0,2")).unwrap();
        assert_eq!(got, lf(&g, "r:1,2").scale(rat_int(-1)));
    }

    #[test]
    fn equal_pair_gives_cartan() {
        let g = line_graph();
        let got = bracket(&g, &le(&g, "r:0,2"), &lf(&g, "r:0,2")).unwrap();
        assert_eq!(got, lh(&g, "r:0,2"));
    }

    #[test]
    fn cartan_acts_by_kappa() {
        let g = line_graph();
        // κ((0,1], (0,2]) = 1, κ((0,1], (1,2]) = −1, κ((0,2], (1,3]) = 0.
        assert_eq!(
            bracket(&g, &lh(&g, "r:0,1"), &le(&g, "r:0,2")).unwrap(),
            le(&g, "r:0,2")
        );
        assert_eq!(
            bracket(&g, &lh(&g, "r:0,1"), &le(&g, "r:1,2")).unwrap(),
            le(&g, "r:1,2").scale(rat_int(-1))
        );
        assert!(bracket(&g, &lh(&g, "r:0,2"), &le(&g, "r:1,3"))
            .unwrap()
            .is_zero());
        assert_eq!(
            bracket(&g, &lh(&g, "r:0,1"), &lf(&g, "r:0,2")).unwrap(),
            lf(&g, "r:0,2").scale(rat_int(-1))
        );
    }

    #[test]
    fn overlapping_raising_generators_vanish() {
        let g = line_graph();
        assert!(bracket(&g, &le(&g, "r:0,2"), &le(&g, "r:1,3"))
            .unwrap()
            .is_zero());
        assert!(bracket(&g, &le(&g, "r:0,2"), &le(&g, "r:0,2"))
            .unwrap()
            .is_zero());
        // Orthogonal pair.
        assert!(bracket(&g, &le(&g, "r:0,1"), &le(&g, "r:2,3"))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn circle_closure_is_unresolvable() {
        let g = circle_graph(2);
        let err = bracket(&g, &le(&g, "c1:0,1"), &le(&g, "c2:0,1")).unwrap_err();
        assert_eq!(err.sign, 'e');
        let err = bracket(&g, &lf(&g, "c1:0,1"), &lf(&g, "c2:0,1")).unwrap_err();
        assert_eq!(err.sign, 'f');
    }

    #[test]
    fn heisenberg_relations_on_the_wedge() {
        let g = wedge_graph();
        let circle = "c:0,1";
        assert_eq!(
            bracket(&g, &le(&g, circle), &lf(&g, circle)).unwrap(),
            lh(&g, circle)
        );
        assert!(bracket(&g, &lh(&g, circle), &le(&g, circle))
            .unwrap()
            .is_zero());
        assert!(bracket(&g, &lh(&g, circle), &lf(&g, circle))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn proper_subarcs_commute_with_the_circle() {
        let g = circle_graph(4);
        let full = "c1:0,1+c2:0,1+c3:0,1+c4:0,1";
        for sub in ["c1:0,1", "c1:0,1+c2:0,1", "c2:0,1+c3:0,1+c4:0,1", "c3:0,1/2"] {
            assert!(
                bracket(&g, &le(&g, sub), &le(&g, full)).unwrap().is_zero(),
                "[e({sub}), e(S¹)] should vanish"
            );
            assert!(
                bracket(&g, &le(&g, full), &le(&g, sub)).unwrap().is_zero(),
                "[e(S¹), e({sub})] should vanish"
            );
        }
    }

    #[test]
    fn jacobi_on_fixed_triples() {
        let g = line_graph();
        let triples = [
            (lh(&g, "r:0,1"), le(&g, "r:0,2"), lf(&g, "r:0,2")),
            (le(&g, "r:0,1"), le(&g, "r:1,2"), lf(&g, "r:0,2")),
            (le(&g, "r:0,1"), lf(&g, "r:0,3"), le(&g, "r:2,3")),
        ];
        for (x, y, z) in &triples {
            let d = jacobi_defect(&g, x, y, z).unwrap();
            assert!(d.is_zero(), "defect {}", d.render(&g));
        }
    }

    #[test]
    fn antisymmetry_on_mixed_elements() {
        let g = line_graph();
        let x = le(&g, "r:0,2").add(&lf(&g, "r:1,3")).add(&lh(&g, "r:0,1"));
        let y = le(&g, "r:1,2").scale(crate::rat::rat(2, 3)).add(&lf(&g, "r:0,2"));
        let xy = bracket(&g, &x, &y).unwrap();
        let yx = bracket(&g, &y, &x).unwrap();
        assert_eq!(xy, yx.scale(rat_int(-1)));
    }

    #[test]
    fn grading_splits_by_multidegree() {
        let g = line_graph();
        let x = le(&g, "r:0,2").add(&lf(&g, "r:0,1")).add(&lh(&g, "r:0,1"));
        let grades = x.grade(&g);
        assert_eq!(grades.len(), 3);
        for (deg, part) in &grades {
            if deg.is_zero() {
                assert_eq!(part, &lh(&g, "r:0,1"));
            }
        }
        let e_deg = StepFunction::indicator(&g, &parse_interval(&g, "r:0,2").unwrap());
        assert_eq!(grades[&e_deg], le(&g, "r:0,2"));
    }

    #[test]
    fn bracket_grade_is_additive() {
        let g = line_graph();
        let x = le(&g, "r:0,1");
        let y = le(&g, "r:1,2");
        let got = bracket(&g, &x, &y).unwrap();
        let expect_deg = StepFunction::indicator(&g, &parse_interval(&g, "r:0,2").unwrap());
        for deg in got.grade(&g).keys() {
            assert_eq!(deg, &expect_deg);
        }
    }

    #[test]
    fn render_is_stable() {
        let g = line_graph();
        let x = le(&g, "r:0,2")
            .add(&lf(&g, "r:0,1").scale(crate::rat::rat(-1, 2)))
            .add(&lh(&g, "r:1,2"));
        let text = x.render(&g);
        assert!(text.lines().count() == 3, "{text}");
        assert!(text.contains("1 e(r:0,2)"), "{text}");
        assert!(text.contains("-1/2 f(r:0,1)"), "{text}");
    }
}
