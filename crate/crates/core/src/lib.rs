//! Exact eigenvalue spectra of the conformally invariant odd-order
//! operators on the Clifford-annihilated spinor-form bundles `𝕋^k` over
//! odd-dimensional spheres.
//!
//! Two independent routes produce the same numbers: propagation of
//! transition ratios across the graph of K-types ([`recursion`]) and
//! telescoped Gamma ratios ([`closedform`]). The [`operators`] module models
//! the Dirac, Rarita-Schwinger and higher-order operators by their scalar
//! action on K-types and checks them against the spectral functions.

pub mod closedform;
pub mod exact;
pub mod ktype_graph;
pub mod operators;
pub mod recursion;
pub mod spectrum;
pub mod suite;
pub mod weights;

pub use exact::{Evaluation, ExactError, ExactScalar, HalfInt, LinearFactorForm};
pub use ktype_graph::{build_graph, edge_datum, enumerate_ktypes, KTypeGraph, TransitionEdge};
pub use recursion::{check_consistency, solve, solve_symbolic, EigenvalueTable};
pub use weights::{branches, is_dominant, make_ktype_weight, KTypeId, Sign, Weight};
