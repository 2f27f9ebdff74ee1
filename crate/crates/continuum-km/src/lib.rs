//! Symbolic computation for continuum Kac-Moody algebras of topological
//! quivers.
//!
//! A topological quiver is a finite graph whose arcs carry rational lengths
//! (possibly infinite) and an orientation. Intervals on such a graph form a
//! commutative partial semigroup under concatenation `compose` and difference
//! `subtract`; the Euler-type bilinear form on their indicator functions
//! induces a Cartan datum `(kappa, xi)`. On top of that datum sits a Lie
//! bracket on formal generators `e(J)`, `f(J)`, `h(J)` indexed by intervals,
//! together with finite-dimensional graded models of the
//! Borcherds-Kac-Moody algebras attached to the Cartan matrices of finite
//! interval configurations.
//!
//! Module layout:
//! - [`rat`]: exact rational coordinates and bounds,
//! - [`shape`]: graphs and their text format,
//! - [`interval`]: intervals, semigroup operations, classification,
//! - [`enumerate`]: grid-bounded interval enumeration,
//! - [`step`]: integer step functions and the Euler form,
//! - [`cartan`]: the Cartan datum, run-pair Euler oracle, Serre pairs,
//! - [`axioms`]: semigroup and Cartan-datum axiom checkers,
//! - [`lie`]: the bracket engine on interval generators,
//! - [`expr`]: a small expression language for bracket computations,
//! - [`slmodel`]: the matrix-unit model over an integer grid,
//! - [`linalg`]: exact rational echelon forms,
//! - [`freelie`]: Lyndon bases of free Lie algebras,
//! - [`bkm`]: Cartan matrices, interval configurations, DOT export,
//! - [`graded`]: graded models, multiplicity oracles, presentation checks.

pub mod axioms;
pub mod bkm;
pub mod cartan;
pub mod enumerate;
pub mod expr;
pub mod freelie;
pub mod graded;
pub mod interval;
pub mod lie;
pub mod linalg;
pub mod par;
pub mod rat;
pub mod shape;
pub mod slmodel;
pub mod step;

pub use cartan::{euler_form_runpair, kappa, relative_position, serre_member, xi, RelativePosition};
pub use interval::{classify, compose, subtract, Interval, IntervalClass, Run};
pub use lie::{bracket, jacobi_defect, LieElement, Unresolvable};
pub use rat::Rat;
pub use shape::{parse_graph, ShapeGraph};
pub use step::{euler_form, StepFunction};
