use thiserror::Error;

use crate::graph::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(Label),
    #[error("nonpositive size: {0}")]
    NonpositiveSize(&'static str),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("branch size violation: a[{i}][{j}] = {a} must exceed {j}")]
    BranchSizeViolation { i: usize, j: usize, a: usize },
    #[error("marks are not leaves: {0:?}")]
    MarksNotLeaves(Vec<Label>),
    #[error("vertex {0} is not a marked leaf")]
    MarkNotLeaf(Label),
    #[error("mark {0} was already consumed by an earlier composition")]
    MarkConsumed(Label),
    #[error("circ operand is the path P_2")]
    OperandIsP2,
    #[error("graph has {got} vertices, enumeration cap is {cap}")]
    GraphTooLarge { got: usize, cap: usize },
    #[error("set {0:?} does not have the cut point property")]
    NotInFamily(Vec<Label>),
    #[error("invalid fan spec: {0}")]
    InvalidSpec(String),
    #[error("not an FFan expression: {0}")]
    NotAnFfan(String),
    #[error("operand shape unsupported: {0}")]
    OperandShapeUnsupported(String),
    #[error("chain shape not covered: {0}")]
    ShapeNotCovered(String),
    #[error("contradictory predictions for {invariant}: {detail}")]
    Contradiction { invariant: &'static str, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
