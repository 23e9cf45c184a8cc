use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate object label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("duplicate cover {0} ⋖ {1}")]
    DuplicateCover(String, String),
    #[error("cover relation contains a cycle through {}", .0.join(" → "))]
    Cycle(Vec<String>),
    #[error("cover {u} ⋖ {v} is not transitively reduced: longer path {}", .path.join(" → "))]
    NotReduced { u: String, v: String, path: Vec<String> },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("path disagreement for {from} ≤ {to}: {} vs {}", .path_a.join(" → "), .path_b.join(" → "))]
    PathDisagreement { from: String, to: String, path_a: Vec<String>, path_b: Vec<String> },
    #[error("{0} ≰ {1}")]
    NotComparable(String, String),
    #[error("modules live on different posets")]
    PosetMismatch,
    #[error("object map is not monotone: {0}")]
    NotMonotone(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
