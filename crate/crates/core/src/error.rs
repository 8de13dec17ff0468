use thiserror::Error;

use crate::dynamic_power::StateError;
use crate::hardware_model::ValidationErrors;
use crate::quantities::QuantityError;

/// Failures of the power model proper.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("control board power required for {name:?}")]
    MissingControlBoardPower { name: String },
    #[error(transparent)]
    Quantity(#[from] QuantityError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("invalid descriptor: {0}")]
    Validation(#[from] ValidationErrors),
}
