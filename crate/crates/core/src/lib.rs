//! Laplacian and adjacency continuous-time quantum walks on simple graphs,
//! and a decision procedure for when the two produce the same measurement
//! statistics from a given start vertex at every time.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`graph6`]: graphs, their matrices, and the graph6 codec.
//! * [`canon`] and [`catalog`]: isomorphism classes, by brute force for
//!   small orders and by individualisation-refinement for list generation.
//! * [`spectral`]: eigendecomposition and spectral-form evolution.
//! * [`equivalence`]: cosine signatures and start-vertex classification.
//! * [`families`]: constructive infinite families of irregular graphs with
//!   equivalent walks.
//! * [`scan`]: parallel classification of graph6 streams.

pub mod canon;
pub mod catalog;
pub mod equivalence;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod scan;
pub mod spectral;

pub use equivalence::{
    classify_start_vertices, cosine_signature, sampled_filter, signatures_equal, Classifier,
    CosineSignature, EquivalenceReport, StartDetail, Tolerances,
};
pub use error::{Error, Result};
pub use families::{FamilyInstance, FamilySpec};
pub use graph::{DegreeProfile, Graph, SymmetricMatrix};
pub use scan::{reproduce_table, scan_stream, ScanSummary};
pub use spectral::{Generator, MixingMatrix, SpectralDecomposition, WalkState};
