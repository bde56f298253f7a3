//! Pure circuits over `{0, 1, bot}` and the gadget reductions that make them
//! useful: instances, exact verifiers, desk-scale solvers, a strong-Sperner
//! front end, and back ends targeting generalized circuits, polymatrix games
//! (well-supported, exact, and win-lose flavors), threshold games, and
//! bimatrix games under relative approximation.
//!
//! The primary interface is the library plus the runnable programs under
//! `examples/`; a thin `pure-circuit` binary exposes the same operations over
//! text files.
//!
//! ```text
//! examples/
//! ├── verify_and_validate.rs   # instances, structure checks, verifying assignments
//! ├── solve_special_cases.rs   # polynomial-time solvers for easy gate sets
//! ├── gate_set_rewrites.rs     # compiling down to a hard two-gate basis
//! ├── normalize_topology.rs    # fan-out trees, node splitting, sink collection
//! ├── sperner_reduction.rs     # strong Sperner -> pure circuit, end to end
//! ├── gcircuit_reduction.rs    # pure circuit -> eps-generalized circuit
//! ├── wsne_pipeline.rs         # pure circuit -> polymatrix WSNE, with decoding
//! ├── third_wsne_algorithm.rs  # the matching 1/3-WSNE upper bound
//! ├── exact_ne_parameters.rs   # delta/chain-length bookkeeping for exact NE
//! ├── winlose_reduction.rs     # win-lose polymatrix gadgets
//! ├── threshold_pipeline.rs    # threshold games: algorithm and reduction
//! └── bimatrix_reduction.rs    # polymatrix -> bimatrix, relative WSNE
//! ```
//!
//! Run any of them with `cargo run --example <name>`.

pub mod bimatrix;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod eval;
pub mod gcircuit;
pub mod io;
pub mod polymatrix;
pub mod rational;
pub mod rewrite;
pub mod solve;
pub mod sperner;
pub mod threshold;

pub use circuit::{
    check_restrictions, interaction_graph, validate_instance, verify_assignment, Gate, GateType,
    NodeId, PCAssignment, PCInstance, Semantics, Value,
};
pub use error::Error;
pub use rational::Rational;
