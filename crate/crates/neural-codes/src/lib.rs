//! Combinatorics of convex neural codes.
//!
//! A neural code is a set of subsets (codewords) of a finite neuron set.
//! This crate provides the combinatorial machinery used to reason about
//! convexity of such codes:
//!
//! * [`code`]: codewords, codes, canonical ordering, parsing, and basic
//!   predicates (maximal codewords, intersection completeness, sunflowers,
//!   isomorphism);
//! * [`families`]: generators for the stretched-sunflower codes `L_n` and
//!   prism codes `P_d`, plus a registry of named codes;
//! * [`graph`]: the codeword graph, feasible walks, exhaustive feasible
//!   path enumeration, forced-between sets, and (strong) order-forcing;
//! * [`algebra`]: trunks, morphisms, minors, covered codes, and reduction;
//! * [`geometry`]: exact rational half-space realizations, membership,
//!   witness checks, 1D code extraction, and atom traces along segments;
//! * [`certificates`]: machine-checkable premise bundles for non-convexity
//!   arguments, with a verifier and a set of built-in certificates.
//!
//! Data-parallel inner loops (path enumeration, certificate verification,
//! batch traces) run on rayon under the default `parallel` feature and fall
//! back to sequential execution without it; outputs are identical either way.

pub mod algebra;
pub mod certificates;
pub mod code;
mod exec;
pub mod families;
pub mod format;
pub mod geometry;
pub mod graph;
pub mod iso;
pub mod rational;

pub use code::{Code, CodeError, Codeword, NeuronUniverse};
pub use rational::Rational;
