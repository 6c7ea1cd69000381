//! Free knots with group-labeled vertices.
//!
//! Diagrams are framed 4-valent graphs ([`graph`]) whose vertices carry
//! labels from a group ([`groups`]). Labeled Reidemeister moves and bounded
//! equivalence search live in [`gknot`]; picture-valued invariants in
//! [`invariants`]; label-changing maps in [`functors`]; embeddings in
//! surfaces and their group presentations in [`surface`].

pub mod canon;
pub mod error;
pub mod graph;
pub mod format;
pub mod functors;
pub mod gknot;
pub mod groups;
pub mod invariants;
pub mod surface;

pub use canon::{canonical_code, CanonicalKey};
pub use error::{Error, Result};
pub use graph::{
    from_gauss_codes, gauss, Bigon, FramedFourGraph, GaussDiagram, HalfEdge, Smoothing,
    SourceSinkStructure, TraversalOrientation, Violation,
};
pub use gknot::{
    apply_move, component_word, component_words, enumerate_moves, equivalence_search, graduated_search, replay, ComponentWord,
    GGraph, MoveKind, MovePath, MoveSite, Position, SearchBudget, SearchOutcome,
};
pub use groups::{GroupElement, GroupSpec, PairKey, TableGroup};
