//! Top-down triangular decomposition of polynomial sets (Wang's method) with
//! the chordal-graph machinery around it: associated graphs, perfect
//! elimination orderings, chordal completion, successive reduction and
//! brute-force verification over small prime fields.
//!
//! ```
//! use chordal_td::{parse_system, system_graph, find_peo};
//!
//! let p = parse_system("x2+x1\nx3+x1\nx4^2+x2\nx4^3+x3\nx5+x2\nx5+x3+x2").unwrap();
//! assert!(find_peo(&system_graph(&p, false)).is_chordal());
//! ```

pub mod error;
pub mod field;
pub mod poly;
pub mod polygraph;
pub mod reduction;
pub mod sysparse;
pub mod verify;
pub mod wang;

pub use error::{Error, Result};
pub use field::{CoefficientField, Scalar};
pub use poly::{Monomial, Polynomial, Var};
pub use polygraph::{
    associated_graph, chordal_complete, check_peo, find_peo, is_subgraph, sparsity, system_graph,
    to_dot, treewidth_bound, ChordalityCertificate, VarGraph,
};
pub use reduction::{red, redbar, redbar_trace, LeveledSystem, PivotStrategy, PremChain, ReductionMap};
pub use sysparse::{parse_polynomial, parse_system, parse_system_in, parse_tree, render_tree, PolySystem};
pub use verify::{check_decomposition, check_reduction_chain, check_tree_chordality, zero_set, CheckReport};
pub use wang::{decompose, emitted_systems, DecompTree, DecomposeOptions, TriangularSystem};
