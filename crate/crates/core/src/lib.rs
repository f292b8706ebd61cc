//! Graph families and closed-form invariants for generalized binomial edge ideals `J_{K_m,G}`.

pub mod cutsets;
pub mod error;
pub mod families;
pub mod formulas;
pub mod graph;

pub use error::{Error, Result};
pub use families::{Atom, FanSpec, GraphExpr, MarkRef, MarkedGraph, Op, Realization};
pub use formulas::{predict, Bound, Claim, Firing, InvariantReport, InvariantValue};
pub use graph::{Graph, Label, VertexSet};
