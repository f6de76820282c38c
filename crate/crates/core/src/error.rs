use thiserror::Error;

use crate::tree::Flavor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DendroError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("tree violates the {flavor} flavor: {msg}")]
    FlavorViolation { flavor: Flavor, msg: String },

    #[error("flavor mismatch: expected {expected}, found {found}")]
    FlavorMismatch { expected: Flavor, found: Flavor },

    #[error("edge {0} is not a leaf")]
    NotALeaf(usize),

    #[error("edge {0} is not an inner edge")]
    NotInner(usize),

    #[error("edge {0} is not very inner (it sits immediately below a stump)")]
    NotVeryInner(usize),

    #[error("edge {edge} out of range for a tree with {edges} edges")]
    EdgeOutOfRange { edge: usize, edges: usize },

    #[error("invalid edge map: {0}")]
    InvalidMorphism(String),

    #[error("cannot compose: target of the first map is not the source of the second")]
    NotComposable,

    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),

    #[error("map is not natural: {0}")]
    NotNatural(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("group axioms fail: {0}")]
    NotAGroup(String),

    #[error("action axioms fail: {0}")]
    NotAnAction(String),

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("truncation {have} is too small, need {need}")]
    TruncationTooSmall { have: usize, need: usize },

    #[error("square does not commute: {0}")]
    NotCommutative(String),

    #[error("no witness: {0}")]
    NoWitness(String),

    #[error("element budget {budget} exceeded at level {level}")]
    BudgetExceeded { level: usize, budget: usize },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, DendroError>;
