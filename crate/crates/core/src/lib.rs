//! Spanning subdivisions of small digraphs inside dense digraphs, built with
//! an absorbing path, a connecting reservoir and a Hamiltonian path.

pub mod absorber;
pub mod assembler;
pub mod bitset;
pub mod bounds;
pub mod cli;
pub mod connector;
pub mod digraph;
pub mod hamilton;
pub mod instances;
pub mod rng;
pub mod tuple_system;

pub use assembler::{
    brute_force_subdivision, solve, solve_detailed, verify_certificate, PatternDigraph, SolveError, SolverParams,
    Stage, SubdivisionCertificate,
};
pub use digraph::Digraph;
