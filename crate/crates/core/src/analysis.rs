//! Design-space exploration: parameter sweeps and cross-device comparison.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::error::ModelError;
use crate::hardware_model::{
    validate, BitResolution, DynamicSpec, GroupingScheme, RisDescriptor, RisTechnology,
    ValidationOptions,
};
use crate::quantities::PowerMicrowatts;
use crate::static_power::{static_power_breakdown, StaticBreakdown};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("sweep needs at least one value")]
    EmptyValues,
    #[error("comparison needs at least one descriptor")]
    EmptyComparison,
    #[error("unknown sweep parameter {0:?} (expected cell_count, group_size, signals_per_circuit, bit_resolution or per_circuit_power)")]
    UnknownParameter(String),
    #[error("{name}: {source}")]
    Descriptor {
        name: String,
        #[source]
        source: ModelError,
    },
}

/// Descriptor field varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Total cells. Columns are kept and rows are recomputed, so the value
    /// must be a multiple of the column count.
    CellCount,
    /// Applied as an explicit grouping of that size.
    GroupSize,
    SignalsPerCircuit,
    /// Applied as a uniform bit resolution.
    BitResolution,
    /// Rated power of one drive circuit, in µW.
    PerCircuitPower,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 5] = [
        SweepParameter::CellCount,
        SweepParameter::GroupSize,
        SweepParameter::SignalsPerCircuit,
        SweepParameter::BitResolution,
        SweepParameter::PerCircuitPower,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepParameter::CellCount => "cell_count",
            SweepParameter::GroupSize => "group_size",
            SweepParameter::SignalsPerCircuit => "signals_per_circuit",
            SweepParameter::BitResolution => "bit_resolution",
            SweepParameter::PerCircuitPower => "per_circuit_power",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParameter {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SweepParameter::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| AnalysisError::UnknownParameter(s.to_owned()))
    }
}

/// One swept value and its outcome. Invalid substitutions keep their error
/// instead of aborting the sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub value: u64,
    pub outcome: Result<SweepPoint, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepPoint {
    pub component_count: u64,
    pub group_size: u64,
    pub breakdown: StaticBreakdown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepResult {
    pub swept_parameter: SweepParameter,
    /// Ordered by value.
    pub rows: Vec<SweepRow>,
}

fn substitute(
    base: &RisDescriptor,
    parameter: SweepParameter,
    value: u64,
) -> Result<RisDescriptor, String> {
    let narrow = |v: u64| u32::try_from(v).map_err(|_| format!("{parameter} {v} out of range"));
    let mut draft = base.to_draft();
    match parameter {
        SweepParameter::CellCount => {
            let cols = u64::from(draft.cells.cols);
            if !value.is_multiple_of(cols) {
                return Err(format!(
                    "cell count {value} is not a multiple of the {cols} columns"
                ));
            }
            draft.cells.rows = narrow(value / cols)?;
            if let BitResolution::PerCell(_) = draft.bits {
                return Err("cell_count sweeps need a uniform bit resolution".into());
            }
        }
        SweepParameter::GroupSize => {
            draft.grouping = GroupingScheme::Explicit {
                group_size: narrow(value)?,
            }
        }
        SweepParameter::SignalsPerCircuit => {
            draft.drive_circuit.signals_per_circuit = narrow(value)?
        }
        SweepParameter::BitResolution => draft.bits = BitResolution::Uniform(narrow(value)?),
        SweepParameter::PerCircuitPower => {
            draft.drive_circuit.rated_power = PowerMicrowatts::new(value)
        }
    }
    let options = ValidationOptions {
        require_control_board_power: base.control_board().rated_power.is_some(),
        ..Default::default()
    };
    validate(draft, &options).map_err(|e| e.to_string())
}

/// Static breakdown for each substituted value.
pub fn sweep(
    base: &RisDescriptor,
    parameter: SweepParameter,
    values: &[u64],
) -> Result<SweepResult, AnalysisError> {
    if values.is_empty() {
        return Err(AnalysisError::EmptyValues);
    }
    let mut values = values.to_vec();
    values.sort_unstable();
    let rows = values
        .into_iter()
        .map(|value| {
            let outcome = substitute(base, parameter, value).and_then(|d| {
                static_power_breakdown(&d)
                    .map(|breakdown| SweepPoint {
                        component_count: d.component_count(),
                        group_size: d.group_size(),
                        breakdown,
                    })
                    .map_err(|e| e.to_string())
            });
            SweepRow { value, outcome }
        })
        .collect();
    Ok(SweepResult {
        swept_parameter: parameter,
        rows,
    })
}

/// Largest dynamic power over all coding states.
///
/// For PIN diodes this is every diode in whichever of the ON/OFF conditions
/// draws more, which is the all-"1" state whenever P_off ≤ P_PIN.
pub fn worst_case_dynamic(d: &RisDescriptor) -> Result<PowerMicrowatts, ModelError> {
    match *d.dynamic() {
        DynamicSpec::VaractorDiode => Ok(PowerMicrowatts::ZERO),
        DynamicSpec::RfSwitch {
            active_power_per_cell,
        } => Ok(active_power_per_cell.checked_mul(d.cell_count())?),
        DynamicSpec::PinDiode {
            on_power_per_diode,
            off_power_per_diode,
            polarization_count,
        } => {
            let diodes: u64 = match d.bits() {
                BitResolution::Uniform(b) => u64::from(*b) * d.cell_count(),
                BitResolution::PerCell(list) => list.iter().map(|&b| u64::from(b)).sum(),
            };
            Ok(on_power_per_diode
                .max(off_power_per_diode)
                .checked_mul(diodes)?
                .checked_mul(u64::from(polarization_count))?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub name: String,
    pub technology: RisTechnology,
    pub component_count: u64,
    pub drive_circuit_count: u64,
    pub static_total: PowerMicrowatts,
    pub worst_case_dynamic: PowerMicrowatts,
    pub worst_case_total: PowerMicrowatts,
}

fn comparison_row(d: &RisDescriptor) -> Result<ComparisonRow, ModelError> {
    let breakdown = static_power_breakdown(d)?;
    let worst = worst_case_dynamic(d)?;
    Ok(ComparisonRow {
        name: d.name().to_owned(),
        technology: d.technology(),
        component_count: d.component_count(),
        drive_circuit_count: breakdown.drive_circuit_count,
        static_total: breakdown.static_total,
        worst_case_dynamic: worst,
        worst_case_total: breakdown.static_total.checked_add(worst)?,
    })
}

fn row_order(a: &ComparisonRow, b: &ComparisonRow) -> Ordering {
    a.worst_case_total
        .cmp(&b.worst_case_total)
        .then_with(|| a.name.cmp(&b.name))
        .then_with(|| a.static_total.cmp(&b.static_total))
        .then_with(|| a.technology.cmp(&b.technology))
        .then_with(|| a.component_count.cmp(&b.component_count))
        .then_with(|| a.drive_circuit_count.cmp(&b.drive_circuit_count))
}

/// One row per descriptor, ascending by worst-case total power, ties by name.
pub fn compare(descriptors: &[RisDescriptor]) -> Result<Vec<ComparisonRow>, AnalysisError> {
    if descriptors.is_empty() {
        return Err(AnalysisError::EmptyComparison);
    }
    let mut rows = descriptors
        .iter()
        .map(|d| {
            comparison_row(d).map_err(|source| AnalysisError::Descriptor {
                name: d.name().to_owned(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(row_order);
    Ok(rows)
}
