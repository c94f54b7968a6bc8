//! Exact-arithmetic engine for knot-diagram invariants built on the arc-graph:
//! the Alexander polynomial as a transition-matrix determinant, the Jones
//! polynomial as a sum over admissible subgraphs, and the colored Jones
//! function computed by four independent routes (flow sum, cabled state sum,
//! sortings expansion, non-commutative fermionic inverse), cross-validated
//! against an R-matrix state sum and checked against the expected
//! large-color limit.
//!
//! All computation is exact: Laurent polynomials in one variable with
//! half-integer exponents and big-integer coefficients, rational truncated
//! power series, and a non-commutative word algebra over matrix entries.

pub mod arcgraph;
pub mod diagram;
pub mod flows;
pub mod invariants;
pub mod poly;
pub mod qalg;
pub mod zeta;

pub use diagram::Diagram;
pub use poly::LaurentPoly;
