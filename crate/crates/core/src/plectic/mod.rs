//! Desk-scale finite analogues of the plectic statements: wreath products,
//! the coset embedding into them, coinduced modules, `H^1` by cocycle linear
//! algebra, Shapiro's lemma, the restriction lemma for coinduced
//! coefficients, and tensor induction characters.

mod checks;
mod cohomology;
mod family;
mod module;
mod snf;
mod wreath;

pub use checks::{
    plectic_h1_check, shapiro_check, tensor_induction_check, transfer, CheckOutcome,
    TensorInductionOutcome,
};
pub use cohomology::{h1, FEASIBILITY_LIMIT};
pub use family::{
    builtin_cyclic, builtin_plectic, builtin_shapiro, builtin_tensor, parse_instances,
    CyclicInstance, Instance, PlecticInstance, ShapiroInstance, TensorInstance,
};
pub use module::{factorize, GModule, Matrix};
pub use wreath::{coinduced_module, wreath_embedding, CosetEmbedding, WreathElement, WreathGroup};

use crate::group::GroupError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PlecticError {
    #[error("action is not a homomorphism at ({0}, {1})")]
    NotAHomomorphism(usize, usize),
    #[error("malformed module: {0}")]
    BadModule(String),
    #[error("problem of size {size} exceeds the feasibility limit")]
    TooLarge { size: u128 },
    #[error("not a subgroup")]
    NotASubgroup,
    #[error("bad transversal: {0}")]
    BadTransversal(String),
    #[error("module has nonzero invariants ({0} fixed vectors)")]
    InvariantsNonzero(u128),
    #[error("bad character: {0}")]
    BadCharacter(String),
    #[error("degree {m} outside 0..={index}")]
    OutOfRange { m: usize, index: usize },
    #[error("bad instance spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
