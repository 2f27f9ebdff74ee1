//! Interval configurations and their Borcherds-Cartan data: the
//! irreducibility conditions, Cartan matrix extraction, diagram
//! export, the generator map from decomposable intervals into graded
//! models, presentation verification, and colimit embeddings.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use thiserror::Error;

use crate::axioms::AxiomReport;
use crate::cartan::{kappa, serre_member, xi};
use crate::graded::{CartanError, CartanMatrix, Deg, Element, GradedModel, ModelError};
use crate::interval::{classify, compose, contains, disjoint, subtract, Interval, IntervalClass};
use crate::lie::{bracket as engine_bracket, LieElement};
use crate::linalg::{q_from_rat, qint, Q, Reducer, SparseVec};
use crate::rat::Lo;
use crate::shape::ShapeGraph;
use crate::step::{euler_pair, StepFunction};

/// An ordered interval configuration on one graph. Construction checks
/// only set shape; the pair conditions are a separate query so that
/// near-miss configurations can still export their Cartan data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibleSet {
    members: Vec<Interval>,
}

impl IrreducibleSet {
    pub fn new(members: Vec<Interval>) -> Result<Self, String> {
        if members.is_empty() {
            return Err("a configuration needs at least one interval".to_string());
        }
        let distinct: BTreeSet<&Interval> = members.iter().collect();
        if distinct.len() != members.len() {
            return Err("configuration members must be distinct".to_string());
        }
        Ok(IrreducibleSet { members })
    }

    pub fn members(&self) -> &[Interval] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, j: &Interval) -> Option<usize> {
        self.members.iter().position(|m| m == j)
    }

    pub fn display(&self, g: &ShapeGraph) -> String {
        let names: Vec<String> = self.members.iter().map(|j| j.display(g)).collect();
        names.join(", ")
    }
}

/// True irreducibility: every member contractible or a circle, and each
/// pair in exactly one of the sum / disjoint / circle-containment
/// cases. The witness names the first violation.
pub fn is_irreducible(g: &ShapeGraph, set: &IrreducibleSet) -> Result<(), String> {
    for (k, j) in set.members.iter().enumerate() {
        if classify(g, j) == IntervalClass::CircleWithTrees {
            return Err(format!(
                "member #{} {} is neither contractible nor a circle",
                k + 1,
                j.display(g)
            ));
        }
    }
    for (i, x) in set.members.iter().enumerate() {
        for y in set.members.iter().skip(i + 1) {
            let sum = compose(g, x, y).is_some();
            let apart = !sum && disjoint(g, x, y);
            let nested = (classify(g, x) == IntervalClass::Circle && contains(x, y))
                || (classify(g, y) == IntervalClass::Circle && contains(y, x));
            let count = [sum, apart, nested].iter().filter(|&&t| t).count();
            if count != 1 {
                return Err(format!(
                    "pair ({}, {}) satisfies {count} of the sum/disjoint/containment cases",
                    x.display(g),
                    y.display(g)
                ));
            }
        }
    }
    Ok(())
}

/// The kappa matrix of the configuration. Computed for any set; entry
/// validation rejects values outside the Borcherds-Cartan ranges.
pub fn cartan_matrix(g: &ShapeGraph, set: &IrreducibleSet) -> Result<CartanMatrix, CartanError> {
    let rows = set
        .members
        .iter()
        .map(|x| set.members.iter().map(|y| kappa(g, x, y)).collect())
        .collect();
    CartanMatrix::new(rows)
}

/// Default diagram labels alpha_1..alpha_n.
pub fn greek_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("α{i}")).collect()
}

/// Borcherds-Cartan diagram in DOT: one vertex per index, a self-loop
/// on imaginary vertices, |a_ij| parallel edges between distinct
/// vertices. Output is deterministic.
pub fn dot_export(a: &CartanMatrix, labels: &[String]) -> String {
    assert_eq!(labels.len(), a.n(), "one label per matrix index");
    let mut out = String::from("graph cartan {\n");
    for (i, label) in labels.iter().enumerate() {
        out.push_str(&format!("  a{} [label=\"{}\"];\n", i + 1, label));
    }
    for i in 0..a.n() {
        if !a.is_real(i) {
            out.push_str(&format!("  a{} -- a{};\n", i + 1, i + 1));
        }
        for j in (i + 1)..a.n() {
            for _ in 0..a.at(i, j).unsigned_abs() {
                out.push_str(&format!("  a{} -- a{};\n", i + 1, j + 1));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Generator flavor of an interval in the presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Epsilon {
    Zero,
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhiError {
    #[error("interval {0} does not decompose over the set")]
    NotDecomposable(String),
    #[error("the class of {0} is reachable only as a bracket; it is not a join of set members")]
    OnlyAsBracket(String),
    #[error("decomposition routes for {0} disagree: {1}")]
    RoutesDisagree(String, String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The generator map: images of decomposable intervals in a graded
/// model, built by iterating the join relations. Every valid
/// decomposition route is computed and compared, so a returned image is
/// certified order-independent.
pub struct Phi<'a> {
    g: &'a ShapeGraph,
    set: &'a IrreducibleSet,
    model: &'a GradedModel,
    memo: BTreeMap<Interval, (Deg, Element, Element)>,
}

impl<'a> Phi<'a> {
    pub fn new(g: &'a ShapeGraph, set: &'a IrreducibleSet, model: &'a GradedModel) -> Self {
        assert_eq!(set.len(), model.n(), "model must match the set");
        Phi {
            g,
            set,
            model,
            memo: BTreeMap::new(),
        }
    }

    pub fn image(&mut self, j: &Interval, eps: Epsilon) -> Result<Element, PhiError> {
        let (deg, plus, minus) = self.decompose(j)?;
        Ok(match eps {
            Epsilon::Plus => plus,
            Epsilon::Minus => minus,
            Epsilon::Zero => {
                let mut x = Element::zero(self.set.len());
                for (k, d) in deg.iter().enumerate() {
                    x.h[k] = qint(*d as i64);
                }
                x
            }
        })
    }

    /// Multidegree of `j` over the set members.
    pub fn multidegree(&mut self, j: &Interval) -> Result<Deg, PhiError> {
        Ok(self.decompose(j)?.0)
    }

    /// Degree vector plus both signed images. Members map to their own
    /// generators; other intervals are split as member + remainder in
    /// every possible way, and all routes must agree.
    fn decompose(&mut self, j: &Interval) -> Result<(Deg, Element, Element), PhiError> {
        if let Some(hit) = self.memo.get(j) {
            return Ok(hit.clone());
        }
        let n = self.set.len();
        if let Some(k) = self.set.position(j) {
            let mut deg = vec![0usize; n];
            deg[k] = 1;
            let out = (deg, self.model.simple_e(k), self.model.simple_f(k));
            self.memo.insert(j.clone(), out.clone());
            return Ok(out);
        }
        let mut best: Option<(Deg, Element, Element)> = None;
        let mut blocked = false;
        for (k, m) in self.set.members.iter().enumerate() {
            let Some(rest) = subtract(self.g, j, m) else {
                continue;
            };
            if compose(self.g, m, &rest).as_ref() != Some(j) {
                continue;
            }
            if !serre_member(self.g, m, &rest) {
                blocked = true;
                continue;
            }
            let (dr, rp, rm) = match self.decompose(&rest) {
                Ok(v) => v,
                Err(e @ PhiError::RoutesDisagree(..)) | Err(e @ PhiError::Model(_)) => {
                    return Err(e)
                }
                Err(_) => continue,
            };
            let mut deg = dr.clone();
            deg[k] += 1;
            let sp = sign(euler_pair(self.g, &rest, m));
            let plus = self
                .model
                .bracket(&self.model.simple_e(k), &rp)?
                .scale(&sp);
            let sm = sign(euler_pair(self.g, m, &rest));
            let minus = self
                .model
                .bracket(&self.model.simple_f(k), &rm)?
                .scale(&sm);
            let found = (deg, plus, minus);
            match &best {
                None => best = Some(found),
                Some(prev) if *prev == found => {}
                Some(prev) => {
                    return Err(PhiError::RoutesDisagree(
                        j.display(self.g),
                        format!(
                            "via {}: deg {:?}, plus {}; another route gives deg {:?}, plus {}",
                            m.display(self.g),
                            found.0,
                            found.1.render(),
                            prev.0,
                            prev.1.render()
                        ),
                    ))
                }
            }
        }
        match best {
            Some(out) => {
                self.memo.insert(j.clone(), out.clone());
                Ok(out)
            }
            None if blocked => Err(PhiError::OnlyAsBracket(j.display(self.g))),
            None => Err(PhiError::NotDecomposable(j.display(self.g))),
        }
    }
}

/// One-shot image computation.
pub fn phi_map(
    g: &ShapeGraph,
    set: &IrreducibleSet,
    model: &GradedModel,
    j: &Interval,
    eps: Epsilon,
) -> Result<Element, PhiError> {
    Phi::new(g, set, model).image(j, eps)
}

fn sign(exp: i64) -> Q {
    if exp % 2 == 0 {
        qint(1)
    } else {
        qint(-1)
    }
}

/// Exact coordinates of step functions over the union of their jump
/// points plus the node values; linear and faithful on the functions
/// supplied together.
fn step_coords(g: &ShapeGraph, funcs: &[&StepFunction]) -> Vec<SparseVec> {
    let mut cuts: BTreeMap<usize, BTreeSet<crate::rat::Rat>> = BTreeMap::new();
    for f in funcs {
        for arc in f.arcs() {
            let entry = cuts.entry(arc).or_default();
            for &(lo, hi, _) in f.arc_pieces(arc) {
                if let Lo::At(x) = lo {
                    entry.insert(x);
                }
                entry.insert(hi);
            }
        }
    }
    let layout: Vec<(usize, crate::rat::Rat)> = cuts
        .iter()
        .flat_map(|(&arc, xs)| xs.iter().map(move |&x| (arc, x)))
        .collect();
    let node_base = 2 * layout.len();
    funcs
        .iter()
        .map(|f| {
            let mut v = SparseVec::new();
            for (c, &(arc, x)) in layout.iter().enumerate() {
                let l = f.left_limit(arc, x);
                if !l.is_zero() {
                    v.insert(2 * c, q_from_rat(l));
                }
                let r = f.right_limit(arc, x);
                if !r.is_zero() {
                    v.insert(2 * c + 1, q_from_rat(r));
                }
            }
            for nid in 0..g.nodes.len() {
                let nv = f.node_value(nid);
                if !nv.is_zero() {
                    v.insert(node_base + nid, q_from_rat(nv));
                }
            }
            v
        })
        .collect()
}

/// Writes a Cartan step function as a rational combination of the
/// member indicators, when possible.
fn express_cartan(
    g: &ShapeGraph,
    set: &IrreducibleSet,
    f: &StepFunction,
) -> Option<Vec<(usize, Q)>> {
    let inds: Vec<StepFunction> = set
        .members
        .iter()
        .map(|j| StepFunction::indicator(g, j))
        .collect();
    let mut funcs: Vec<&StepFunction> = inds.iter().collect();
    funcs.push(f);
    let coords = step_coords(g, &funcs);
    let mut red = Reducer::new();
    for (k, v) in coords[..set.len()].iter().enumerate() {
        let prov: SparseVec = [(k, qint(1))].into_iter().collect();
        red.insert(v.clone(), prov);
    }
    let combo = red.express(&coords[set.len()])?;
    Some(combo.into_iter().collect())
}

/// A nonzero linear relation among the member indicators, if one
/// exists. Such a relation means two formal multidegrees share one
/// step-function degree, which is reported rather than guessed around.
pub fn degree_map_collision(g: &ShapeGraph, set: &IrreducibleSet) -> Option<String> {
    let inds: Vec<StepFunction> = set
        .members
        .iter()
        .map(|j| StepFunction::indicator(g, j))
        .collect();
    let refs: Vec<&StepFunction> = inds.iter().collect();
    let coords = step_coords(g, &refs);
    let mut red = Reducer::new();
    for (k, v) in coords.iter().enumerate() {
        let prov: SparseVec = [(k, qint(1))].into_iter().collect();
        if !red.insert(v.clone(), prov) {
            let combo = red.express(v).expect("dependent vector lies in the span");
            let terms: Vec<String> = combo
                .iter()
                .map(|(m, c)| format!("{} * 1_{}", c, set.members[*m].display(g)))
                .collect();
            return Some(format!(
                "degree collision: 1_{} = {}",
                set.members[k].display(g),
                terms.join(" + ")
            ));
        }
    }
    None
}

/// Maps a bracket-engine element through the generator map: the Cartan
/// part is expressed over member indicators, raising and lowering
/// terms through their interval images.
fn phi_of_engine(g: &ShapeGraph, phi: &mut Phi, x: &LieElement) -> Result<Element, String> {
    let n = phi.set.len();
    let mut out = Element::zero(n);
    if !x.cartan.is_zero() {
        let combo = express_cartan(g, phi.set, &x.cartan).ok_or_else(|| {
            format!(
                "cartan part {} is not a combination of member indicators",
                x.cartan.render(g)
            )
        })?;
        for (k, c) in combo {
            out.h[k] = c;
        }
    }
    for (iv, c) in &x.plus {
        let img = phi.image(iv, Epsilon::Plus).map_err(|e| e.to_string())?;
        out = out.add(&img.scale(&q_from_rat(*c)));
    }
    for (iv, c) in &x.minus {
        let img = phi.image(iv, Epsilon::Minus).map_err(|e| e.to_string())?;
        out = out.add(&img.scale(&q_from_rat(*c)));
    }
    Ok(out)
}

struct Verifier<'a> {
    g: &'a ShapeGraph,
    model: &'a GradedModel,
    phi: Phi<'a>,
    passes: u64,
    counterexample: Option<String>,
    warnings: Vec<String>,
}

impl Verifier<'_> {
    fn done(&self) -> bool {
        self.counterexample.is_some()
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if self.done() {
            return;
        }
        if ok {
            self.passes += 1;
        } else {
            self.counterexample = Some(witness());
        }
    }

    fn fail(&mut self, witness: String) {
        if !self.done() {
            self.counterexample = Some(witness);
        }
    }

    /// Image or a recorded failure; `None` only after a failure.
    fn img(&mut self, j: &Interval, eps: Epsilon) -> Option<Element> {
        match self.phi.image(j, eps) {
            Ok(x) => Some(x),
            Err(e) => {
                self.fail(format!("phi image of {} unavailable: {e}", j.display(self.g)));
                None
            }
        }
    }

    fn model_bracket(&mut self, x: &Element, y: &Element, what: &str) -> Option<Element> {
        match self.model.bracket(x, y) {
            Ok(z) => Some(z),
            Err(e) => {
                self.fail(format!("model bracket failed while checking {what}: {e}"));
                None
            }
        }
    }

    fn pair(&mut self, x: &Interval, y: &Interval) {
        if self.done() {
            return;
        }
        let gr = self.g;
        let (Some(hx), Some(px), Some(mx)) = (
            self.img(x, Epsilon::Zero),
            self.img(x, Epsilon::Plus),
            self.img(x, Epsilon::Minus),
        ) else {
            return;
        };
        let (Some(hy), Some(py), Some(my)) = (
            self.img(y, Epsilon::Zero),
            self.img(y, Epsilon::Plus),
            self.img(y, Epsilon::Minus),
        ) else {
            return;
        };
        let name = |j: &Interval| j.display(gr);
        // Relation: the Cartan generator of a sum is the sum of the
        // Cartan generators.
        if let Some(s) = compose(gr, x, y) {
            match self.phi.image(&s, Epsilon::Zero) {
                Ok(hs) => {
                    let want = hx.add(&hy);
                    self.check(hs == want, || {
                        format!(
                            "cartan additivity fails for {} + {}: got {}, want {}",
                            name(x),
                            name(y),
                            hs.render(),
                            want.render()
                        )
                    });
                }
                Err(e) => self
                    .warnings
                    .push(format!("cartan additivity for {} + {} skipped: {e}", name(x), name(y))),
            }
        }
        // Relations: Cartan commutativity and eigenvalues.
        if let Some(z) = self.model_bracket(&hx, &hy, "cartan commutativity") {
            self.check(z.is_zero(), || {
                format!("[h({}), h({})] = {} != 0", name(x), name(y), z.render())
            });
        }
        let k = kappa(gr, x, y);
        if let Some(z) = self.model_bracket(&hx, &py, "the raising eigenvalue") {
            let want = py.scale(&qint(k));
            self.check(z == want, || {
                format!(
                    "[h({}), e({})] = {}, want {} e({})",
                    name(x),
                    name(y),
                    z.render(),
                    k,
                    name(y)
                )
            });
        }
        if let Some(z) = self.model_bracket(&hx, &my, "the lowering eigenvalue") {
            let want = my.scale(&qint(-k));
            self.check(z == want, || {
                format!(
                    "[h({}), f({})] = {}, want {} f({})",
                    name(x),
                    name(y),
                    z.render(),
                    -k,
                    name(y)
                )
            });
        }
        // Relation: the mixed bracket. The xi coefficient already
        // carries the parity sign of the Euler pairing.
        if let Some(lhs) = self.model_bracket(&px, &my, "the mixed bracket") {
            let mut rhs = if x == y { hx.clone() } else { Element::zero(self.model.n()) };
            let coeff = qint(xi(gr, x, y));
            if !coeff.is_zero() {
                if let Some(d) = subtract(gr, x, y) {
                    let Some(img) = self.img(&d, Epsilon::Plus) else { return };
                    rhs = rhs.add(&img.scale(&coeff));
                }
                if let Some(d) = subtract(gr, y, x) {
                    let Some(img) = self.img(&d, Epsilon::Minus) else { return };
                    rhs = rhs.sub(&img.scale(&coeff));
                }
            }
            self.check(lhs == rhs, || {
                format!(
                    "[e({}), f({})] = {}, want {}",
                    name(x),
                    name(y),
                    lhs.render(),
                    rhs.render()
                )
            });
        }
        // Relation: joins of composable pairs, zero off the sum.
        if serre_member(gr, x, y) {
            if x == y {
                // Antisymmetry kills the left side; the sum is undefined.
                self.passes += 1;
            } else {
                let rhs_p = match compose(gr, x, y) {
                    Some(s) => {
                        let Some(img) = self.img(&s, Epsilon::Plus) else { return };
                        img.scale(&sign(euler_pair(gr, y, x)))
                    }
                    None => Element::zero(self.model.n()),
                };
                if let Some(lhs) = self.model_bracket(&px, &py, "the raising join") {
                    self.check(lhs == rhs_p, || {
                        format!(
                            "[e({}), e({})] = {}, want {}",
                            name(x),
                            name(y),
                            lhs.render(),
                            rhs_p.render()
                        )
                    });
                }
                let rhs_m = match compose(gr, x, y) {
                    Some(s) => {
                        let Some(img) = self.img(&s, Epsilon::Minus) else { return };
                        img.scale(&sign(euler_pair(gr, x, y)))
                    }
                    None => Element::zero(self.model.n()),
                };
                if let Some(lhs) = self.model_bracket(&mx, &my, "the lowering join") {
                    self.check(lhs == rhs_m, || {
                        format!(
                            "[f({}), f({})] = {}, want {}",
                            name(x),
                            name(y),
                            lhs.render(),
                            rhs_m.render()
                        )
                    });
                }
            }
        }
        // Relation: disjoint non-summable pairs commute.
        if compose(gr, x, y).is_none() && disjoint(gr, x, y) {
            if let Some(z) = self.model_bracket(&px, &py, "disjoint raising commutation") {
                self.check(z.is_zero(), || {
                    format!("[e({}), e({})] = {} != 0", name(x), name(y), z.render())
                });
            }
            if let Some(z) = self.model_bracket(&mx, &my, "disjoint lowering commutation") {
                self.check(z.is_zero(), || {
                    format!("[f({}), f({})] = {} != 0", name(x), name(y), z.render())
                });
            }
        }
        // Engine concordance: wherever the bracket engine resolves a
        // pair, its answer must map to the model bracket.
        for ex in [Epsilon::Zero, Epsilon::Plus, Epsilon::Minus] {
            for ey in [Epsilon::Zero, Epsilon::Plus, Epsilon::Minus] {
                if self.done() {
                    return;
                }
                if x == y && ex == ey {
                    // A self-bracket is zero on both sides by
                    // antisymmetry; the model may not even carry the
                    // doubled degree.
                    self.passes += 1;
                    continue;
                }
                let a = engine_element(gr, x, ex);
                let b = engine_element(gr, y, ey);
                let Ok(w) = engine_bracket(gr, &a, &b) else {
                    continue;
                };
                let mapped = match phi_of_engine(gr, &mut self.phi, &w) {
                    Ok(v) => v,
                    Err(e) => {
                        self.fail(format!(
                            "engine bracket of ({}, {}) does not map: {e}",
                            name(x),
                            name(y)
                        ));
                        return;
                    }
                };
                let (ax, ay) = (self.eps_img(x, ex), self.eps_img(y, ey));
                let (Some(ax), Some(ay)) = (ax, ay) else { return };
                if let Some(direct) = self.model_bracket(&ax, &ay, "engine concordance") {
                    self.check(direct == mapped, || {
                        format!(
                            "engine and model disagree on [{:?}({}), {:?}({})]: {} vs {}",
                            ex,
                            name(x),
                            ey,
                            name(y),
                            mapped.render(),
                            direct.render()
                        )
                    });
                }
            }
        }
    }

    fn eps_img(&mut self, j: &Interval, eps: Epsilon) -> Option<Element> {
        self.img(j, eps)
    }
}

fn engine_element(g: &ShapeGraph, j: &Interval, eps: Epsilon) -> LieElement {
    match eps {
        Epsilon::Zero => LieElement::h(g, j),
        Epsilon::Plus => LieElement::e(j.clone()),
        Epsilon::Minus => LieElement::f(j.clone()),
    }
}

/// Checks the presentation relations between the images of all
/// intervals decomposable over the set in at most `depth` joins,
/// together with adjoint nilpotency on the member generators. The scan
/// is deterministic and stops at the first failure.
pub fn verify_presentation(
    g: &ShapeGraph,
    set: &IrreducibleSet,
    model: &GradedModel,
    depth: usize,
) -> AxiomReport {
    let mut v = Verifier {
        g,
        model,
        phi: Phi::new(g, set, model),
        passes: 0,
        counterexample: None,
        warnings: Vec::new(),
    };
    let mut all: BTreeSet<Interval> = set.members.iter().cloned().collect();
    let mut frontier: Vec<Interval> = set.members.to_vec();
    for _ in 2..=depth {
        let mut next = Vec::new();
        for j in &frontier {
            for m in set.members.iter() {
                let Some(s) = compose(g, m, j) else { continue };
                if all.contains(&s) {
                    continue;
                }
                if v.phi.decompose(&s).is_ok() {
                    all.insert(s.clone());
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    let all: Vec<Interval> = all.into_iter().collect();
    for x in &all {
        for y in &all {
            v.pair(x, y);
        }
    }
    // Adjoint nilpotency between member generators: exponent 1 - a_ij
    // from real rows, plain commutation between orthogonal imaginary
    // rows.
    if !v.done() {
        if let Ok(a) = cartan_matrix(g, set) {
            for i in 0..a.n() {
                for j in 0..a.n() {
                    if i == j || v.done() {
                        continue;
                    }
                    let (e_i, e_j) = (model.simple_e(i), model.simple_e(j));
                    let (f_i, f_j) = (model.simple_f(i), model.simple_f(j));
                    if a.is_real(i) {
                        let p = (1 - a.at(i, j)) as usize;
                        match (model.ad_power(&e_i, &e_j, p), model.ad_power(&f_i, &f_j, p)) {
                            (Ok(ze), Ok(zf)) => {
                                v.check(ze.is_zero() && zf.is_zero(), || {
                                    format!(
                                        "ad nilpotency fails at exponent {p} for members #{} and #{}",
                                        i + 1,
                                        j + 1
                                    )
                                });
                            }
                            _ => v.fail(format!(
                                "model too short for the nilpotency check on members #{} and #{}",
                                i + 1,
                                j + 1
                            )),
                        }
                    } else if a.at(i, j) == 0 {
                        match (model.bracket(&e_i, &e_j), model.bracket(&f_i, &f_j)) {
                            (Ok(ze), Ok(zf)) => {
                                v.check(ze.is_zero() && zf.is_zero(), || {
                                    format!(
                                        "orthogonal imaginary members #{} and #{} fail to commute",
                                        i + 1,
                                        j + 1
                                    )
                                });
                            }
                            _ => v.fail(format!(
                                "model too short for the commutation check on members #{} and #{}",
                                i + 1,
                                j + 1
                            )),
                        }
                    }
                }
            }
        }
    }
    AxiomReport {
        id: "presentation",
        sample: format!("{{{}}} at depth {depth}", set.display(g)),
        passes: v.passes,
        counterexample: v.counterexample,
        warnings: v.warnings,
    }
}

/// Images of a coarser configuration's generators inside the model of a
/// finer one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub e_images: Vec<Element>,
    pub f_images: Vec<Element>,
    pub h_images: Vec<Element>,
}

#[derive(Debug, Clone, Error)]
pub enum EmbedError {
    #[error("refinement shape mismatch: {0}")]
    Shape(String),
    #[error("embedding fails to be a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// The canonical embedding of the model of `small` into the model of
/// `big`: members map to their own generators, a split member to the
/// signed join of its parts. The generator relations of the coarse
/// matrix are verified inside the fine model before returning.
pub fn embed(
    g: &ShapeGraph,
    small: &IrreducibleSet,
    big: &IrreducibleSet,
    big_model: &GradedModel,
) -> Result<Embedding, EmbedError> {
    let a_small = cartan_matrix(g, small)?;
    let mut phi = Phi::new(g, big, big_model);
    let mut e_images = Vec::with_capacity(small.len());
    let mut f_images = Vec::with_capacity(small.len());
    let mut h_images = Vec::with_capacity(small.len());
    for j in small.members.iter() {
        let (deg, plus, minus) = phi
            .decompose(j)
            .map_err(|e| EmbedError::Shape(e.to_string()))?;
        let mut h = Element::zero(big_model.n());
        for (k, d) in deg.iter().enumerate() {
            h.h[k] = qint(*d as i64);
        }
        e_images.push(plus);
        f_images.push(minus);
        h_images.push(h);
    }
    let emb = Embedding {
        e_images,
        f_images,
        h_images,
    };
    check_generator_relations(&a_small, big_model, &emb).map_err(EmbedError::NotHomomorphism)?;
    Ok(emb)
}

/// The coarse matrix relations, evaluated on the images.
fn check_generator_relations(
    a: &CartanMatrix,
    model: &GradedModel,
    emb: &Embedding,
) -> Result<(), String> {
    let br = |x: &Element, y: &Element, what: &str| {
        model
            .bracket(x, y)
            .map_err(|e| format!("model too short while checking {what}: {e}"))
    };
    for i in 0..a.n() {
        for j in 0..a.n() {
            let (ei, fi, hi) = (&emb.e_images[i], &emb.f_images[i], &emb.h_images[i]);
            let (ej, fj) = (&emb.e_images[j], &emb.f_images[j]);
            let hh = br(hi, &emb.h_images[j], "cartan commutativity")?;
            if !hh.is_zero() {
                return Err(format!("[h{}, h{}] = {}", i + 1, j + 1, hh.render()));
            }
            let he = br(hi, ej, "the raising eigenvalue")?;
            if he != ej.scale(&qint(a.at(i, j))) {
                return Err(format!(
                    "[h{}, e{}] = {}, want {} e{}",
                    i + 1,
                    j + 1,
                    he.render(),
                    a.at(i, j),
                    j + 1
                ));
            }
            let hf = br(hi, fj, "the lowering eigenvalue")?;
            if hf != fj.scale(&qint(-a.at(i, j))) {
                return Err(format!(
                    "[h{}, f{}] = {}, want {} f{}",
                    i + 1,
                    j + 1,
                    hf.render(),
                    -a.at(i, j),
                    j + 1
                ));
            }
            let ef = br(ei, fj, "the pairing")?;
            let want = if i == j {
                hi.clone()
            } else {
                Element::zero(model.n())
            };
            if ef != want {
                return Err(format!(
                    "[e{}, f{}] = {}, want {}",
                    i + 1,
                    j + 1,
                    ef.render(),
                    want.render()
                ));
            }
            if i != j && a.is_real(i) {
                let p = (1 - a.at(i, j)) as usize;
                let ze = model
                    .ad_power(ei, ej, p)
                    .map_err(|e| format!("model too short for the nilpotency check: {e}"))?;
                let zf = model
                    .ad_power(fi, fj, p)
                    .map_err(|e| format!("model too short for the nilpotency check: {e}"))?;
                if !ze.is_zero() || !zf.is_zero() {
                    return Err(format!(
                        "serre relation at exponent {p} fails for ({}, {})",
                        i + 1,
                        j + 1
                    ));
                }
            }
            if i != j && !a.is_real(i) && a.at(i, j) == 0 {
                let ze = br(ei, ej, "imaginary commutation")?;
                let zf = br(fi, fj, "imaginary commutation")?;
                if !ze.is_zero() || !zf.is_zero() {
                    return Err(format!(
                        "orthogonal imaginary pair ({}, {}) fails to commute",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Pushes an element of the source model through generator images into
/// the target model, recursing on the stored raising decompositions.
pub fn map_element(
    src: &GradedModel,
    dst: &GradedModel,
    emb: &Embedding,
    x: &Element,
) -> Result<Element, ModelError> {
    let mut out = Element::zero(dst.n());
    for (i, c) in x.h.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&emb.h_images[i].scale(c));
        }
    }
    for (beta, v) in &x.pos {
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&map_class(src, dst, emb, beta, k, true)?.scale(c));
            }
        }
    }
    for (beta, v) in &x.neg {
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&map_class(src, dst, emb, beta, k, false)?.scale(c));
            }
        }
    }
    Ok(out)
}

fn map_class(
    src: &GradedModel,
    dst: &GradedModel,
    emb: &Embedding,
    beta: &[usize],
    k: usize,
    positive: bool,
) -> Result<Element, ModelError> {
    if beta.iter().sum::<usize>() == 1 {
        let i = beta.iter().position(|&d| d == 1).unwrap();
        let img = if positive {
            &emb.e_images[i]
        } else {
            &emb.f_images[i]
        };
        return Ok(img.clone());
    }
    let parts = src
        .preimage(beta, k)
        .expect("class degree within the source model")
        .to_vec();
    let mut out = Element::zero(dst.n());
    for (i, m, c) in parts {
        let mut lower = beta.to_vec();
        lower[i] -= 1;
        let sub = map_class(src, dst, emb, &lower, m, positive)?;
        let gen = if positive {
            &emb.e_images[i]
        } else {
            &emb.f_images[i]
        };
        out = out.add(&dst.bracket(gen, &sub)?.scale(&c));
    }
    Ok(out)
}

/// Composite of two embeddings along a refinement chain.
pub fn compose_embeddings(
    first: &Embedding,
    mid_model: &GradedModel,
    second: &Embedding,
    big_model: &GradedModel,
) -> Result<Embedding, ModelError> {
    let push = |xs: &[Element]| {
        xs.iter()
            .map(|x| map_element(mid_model, big_model, second, x))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(Embedding {
        e_images: push(&first.e_images)?,
        f_images: push(&first.f_images)?,
        h_images: push(&first.h_images)?,
    })
}
