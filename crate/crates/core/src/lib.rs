//! Power consumption model for reconfigurable intelligent surfaces (RISs).
//!
//! Total power is split into a static part, drawn by the control board and
//! the drive circuits regardless of configuration, and a dynamic part drawn
//! by the tunable components themselves, which depends on the coding state:
//!
//! ```text
//! P_RIS    = P_static + P_dynamic
//! P_static = P_control_board + ⌈N_c / (N_g · N_s)⌉ · P_drive_circuit
//! ```
//!
//! All quantities are exact integers (µW, µs, pJ).
//!
//! ```
//! use rispower::{builtin, static_power_breakdown};
//!
//! let pin = builtin("pin-16x16").unwrap();
//! let b = static_power_breakdown(&pin).unwrap();
//! assert_eq!(b.drive_circuit_count, 32);
//! assert_eq!(b.static_total.as_microwatts(), 4_802_112);
//! ```

pub mod analysis;
pub mod catalog_io;
pub mod cli;
pub mod dynamic_power;
mod error;
pub mod hardware_model;
pub mod quantities;
pub mod static_power;

pub use analysis::{
    compare, sweep, worst_case_dynamic, AnalysisError, ComparisonRow, SweepParameter, SweepResult,
    SweepRow,
};
pub use catalog_io::{
    builtin, load_descriptor, load_states, save_descriptor, CatalogEntry, CatalogError,
};
pub use dynamic_power::{
    dynamic_power, sequence_energy, total_power, CodingSegment, CodingSequence, CodingState,
    PowerBreakdown, SequenceEnergy, StateError,
};
pub use error::ModelError;
pub use hardware_model::{
    component_count, group_size, validate, DescriptorDraft, RisDescriptor, RisTechnology,
    ValidationErrors, ValidationOptions,
};
pub use quantities::{
    energy, format_power, parse_power, DurationMicroseconds, EnergyPicojoules, PowerMicrowatts,
    PowerUnit, QuantityError,
};
pub use static_power::{
    drive_circuit_count, static_power_breakdown, total_drive_circuit_power, StaticBreakdown,
};
