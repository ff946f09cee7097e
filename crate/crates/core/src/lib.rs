//! Quasi-threshold graph editing.
//!
//! A graph is quasi-threshold (trivially perfect) iff it has no induced P4 or
//! C4, equivalently iff it is the ancestor/descendant closure of a rooted
//! forest. This crate recognizes such graphs with certificates, bounds and
//! computes edit distances to them, and generates benchmark instances:
//!
//! * [`recognition`]: linear-time certifying recognition,
//! * [`lowerbound`]: disjoint-witness lower bounds,
//! * [`init`]: the triangle-guided initial skeleton and edit counting,
//! * [`qtm`]: the Quasi-Threshold Mover local search,
//! * [`exact`]: bounded search tree and brute-force oracles,
//! * [`ng`]: the greedy P4/C4-count baseline,
//! * [`generator`]: quasi-threshold graphs with planted edits.
//!
//! ```
//! use qtedit::{apply_edits, qtm, recognize, EditSet, InitKind};
//!
//! let g = qtedit::parse_edge_list("0 1\n1 2\n2 3\n")?;
//! assert!(!recognize(&g).is_quasi_threshold());
//!
//! let run = qtm(&g, InitKind::Heuristic, Some(4), 0)?;
//! assert_eq!(run.edits, 1);
//! let edits = EditSet::from_forest(&g, &run.forest)?;
//! assert!(recognize(&apply_edits(&g, &edits)?).is_quasi_threshold());
//! # Ok::<(), qtedit::Error>(())
//! ```

pub mod edit;
pub mod error;
pub mod exact;
pub mod forest;
pub mod generator;
pub mod graph;
pub mod init;
pub mod lowerbound;
pub mod ng;
pub mod qtm;
pub mod recognition;
pub mod rng;
#[doc(hidden)]
pub mod testutil;

pub use edit::{apply_edits, Edit, EditKind, EditSet};
pub use error::{Error, Result};
pub use forest::{closure_of_forest, SkeletonForest};
pub use graph::{
    count_triangles, load_edge_list, parse_edge_list, permute_nodes, pseudo_counter,
    write_edge_list, Graph, TriangleCounts,
};
pub use init::{count_edits, initial_skeleton};
pub use lowerbound::{lower_bound, BoundResult};
pub use qtm::{qtm, run_qtm, InitKind, MoveDecision, Mover, QtmRun};
pub use recognition::{recognize, verify_certificate, Certificate, ForbiddenKind, Recognition};
