//! RIS hardware descriptors.
//!
//! A [`DescriptorDraft`] is the unchecked, freely editable form. Passing it
//! through [`validate`] yields a [`RisDescriptor`], which is immutable and
//! guaranteed to satisfy every structural rule the power model relies on:
//! group sizes divide the cell count, bit resolutions are homogeneous inside
//! each group, and the dynamic parameters match the technology.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantities::PowerMicrowatts;

/// Largest supported per-cell bit resolution; coding states are stored as `u64`.
pub const MAX_BITS_PER_CELL: u32 = 32;

/// Tunable component family used by the unit cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RisTechnology {
    PinDiode,
    VaractorDiode,
    RfSwitch,
}

impl RisTechnology {
    pub fn as_str(self) -> &'static str {
        match self {
            RisTechnology::PinDiode => "pin_diode",
            RisTechnology::VaractorDiode => "varactor_diode",
            RisTechnology::RfSwitch => "rf_switch",
        }
    }
}

impl fmt::Display for RisTechnology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cell geometry, stored as rows × columns. Cells are indexed row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellArray {
    pub rows: u32,
    pub cols: u32,
}

impl CellArray {
    pub fn new(rows: u32, cols: u32) -> Self {
        CellArray { rows, cols }
    }

    /// Total number of unit cells.
    pub fn cell_count(&self) -> u64 {
        u64::from(self.rows) * u64::from(self.cols)
    }
}

/// Control bits per unit cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BitResolution {
    Uniform(u32),
    /// One entry per cell, row-major.
    PerCell(Vec<u32>),
}

impl BitResolution {
    /// Bits of the cell at `index`. Out-of-range per-cell lookups yield 0.
    pub fn bits_of(&self, index: usize) -> u32 {
        match self {
            BitResolution::Uniform(b) => *b,
            BitResolution::PerCell(list) => list.get(index).copied().unwrap_or(0),
        }
    }
}

/// How many cells share one control signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupingScheme {
    /// Every cell is driven independently.
    Unit,
    /// All cells of a row share a signal.
    Row,
    /// All cells of a column share a signal.
    Column,
    /// Rectangular tiles of `rows` × `cols` cells.
    Subarray { rows: u32, cols: u32 },
    /// Consecutive runs of `group_size` cells in column-major order, so that
    /// multiples of the column height select whole adjacent columns.
    Explicit { group_size: u32 },
}

impl GroupingScheme {
    pub fn name(&self) -> &'static str {
        match self {
            GroupingScheme::Unit => "unit",
            GroupingScheme::Row => "row",
            GroupingScheme::Column => "column",
            GroupingScheme::Subarray { .. } => "subarray",
            GroupingScheme::Explicit { .. } => "explicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DriveCircuitSpec {
    pub name: String,
    /// Control signals one circuit generates (N_s).
    pub signals_per_circuit: u32,
    /// Rated draw of one circuit, independent of how many outputs are wired.
    pub rated_power: PowerMicrowatts,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ControlBoardSpec {
    pub name: String,
    /// Must be supplied explicitly; there is no default board power.
    pub rated_power: Option<PowerMicrowatts>,
}

/// Technology-specific parameters of the coding-state-dependent power.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DynamicSpec {
    PinDiode {
        on_power_per_diode: PowerMicrowatts,
        off_power_per_diode: PowerMicrowatts,
        polarization_count: u32,
    },
    /// Varactor conduction current is negligible; dynamic power is zero.
    VaractorDiode,
    RfSwitch { active_power_per_cell: PowerMicrowatts },
}

impl DynamicSpec {
    pub fn technology(&self) -> RisTechnology {
        match self {
            DynamicSpec::PinDiode { .. } => RisTechnology::PinDiode,
            DynamicSpec::VaractorDiode => RisTechnology::VaractorDiode,
            DynamicSpec::RfSwitch { .. } => RisTechnology::RfSwitch,
        }
    }
}

/// Unvalidated hardware description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptorDraft {
    pub name: String,
    pub technology: RisTechnology,
    /// Descriptive only; not used by any power computation.
    pub frequency_hz: u64,
    pub cells: CellArray,
    pub bits: BitResolution,
    pub grouping: GroupingScheme,
    pub drive_circuit: DriveCircuitSpec,
    pub control_board: ControlBoardSpec,
    pub dynamic: DynamicSpec,
    /// Inert annotations such as bias-voltage tables or part numbers.
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Accept arrays with zero cells.
    pub allow_empty: bool,
    /// Report a missing control-board power as a violation.
    pub require_control_board_power: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            allow_empty: false,
            require_control_board_power: true,
        }
    }
}

impl ValidationOptions {
    /// Defaults, but a missing control-board power is tolerated. Such
    /// descriptors still support drive-circuit and dynamic computations.
    pub fn board_power_optional() -> Self {
        ValidationOptions {
            require_control_board_power: false,
            ..Default::default()
        }
    }
}

/// One violated rule, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Every violation found in a draft.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationErrors {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationErrors {
    pub fn single(field: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationErrors {
            issues: vec![ValidationIssue {
                field: field.into(),
                message: message.into(),
            }],
        }
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.issues.iter().any(|i| i.message.contains(needle))
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// A validated, immutable RIS hardware descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RisDescriptor {
    draft: DescriptorDraft,
    group_size: u64,
}

impl RisDescriptor {
    pub fn name(&self) -> &str {
        &self.draft.name
    }

    pub fn technology(&self) -> RisTechnology {
        self.draft.technology
    }

    pub fn frequency_hz(&self) -> u64 {
        self.draft.frequency_hz
    }

    pub fn cells(&self) -> CellArray {
        self.draft.cells
    }

    pub fn cell_count(&self) -> u64 {
        self.draft.cells.cell_count()
    }

    pub fn bits(&self) -> &BitResolution {
        &self.draft.bits
    }

    pub fn bits_of(&self, cell: usize) -> u32 {
        self.draft.bits.bits_of(cell)
    }

    pub fn grouping(&self) -> GroupingScheme {
        self.draft.grouping
    }

    pub fn drive_circuit(&self) -> &DriveCircuitSpec {
        &self.draft.drive_circuit
    }

    pub fn control_board(&self) -> &ControlBoardSpec {
        &self.draft.control_board
    }

    pub fn dynamic(&self) -> &DynamicSpec {
        &self.draft.dynamic
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.draft.metadata
    }

    /// Cells sharing one control signal (N_g).
    pub fn group_size(&self) -> u64 {
        self.group_size
    }

    /// Adjustable components needing a control signal (N_c).
    pub fn component_count(&self) -> u64 {
        component_count(self)
    }

    /// Index of the control group that owns `cell` (row-major cell index).
    pub fn group_of(&self, cell: usize) -> usize {
        group_index(&self.draft.cells, &self.draft.grouping, cell)
    }

    /// Editable copy, for building variants.
    pub fn to_draft(&self) -> DescriptorDraft {
        self.draft.clone()
    }

    pub fn into_draft(self) -> DescriptorDraft {
        self.draft
    }

    /// Same descriptor with the control-board power replaced.
    pub fn with_control_board_power(&self, power: PowerMicrowatts) -> RisDescriptor {
        let mut out = self.clone();
        out.draft.control_board.rated_power = Some(power);
        out
    }
}

fn group_index(cells: &CellArray, grouping: &GroupingScheme, cell: usize) -> usize {
    let cols = cells.cols.max(1) as usize;
    let rows = cells.rows.max(1) as usize;
    let (r, c) = (cell / cols, cell % cols);
    match *grouping {
        GroupingScheme::Unit => cell,
        GroupingScheme::Row => r,
        GroupingScheme::Column => c,
        GroupingScheme::Subarray {
            rows: sub_r,
            cols: sub_c,
        } => {
            let (sub_r, sub_c) = (sub_r.max(1) as usize, sub_c.max(1) as usize);
            (r / sub_r) * (cols / sub_c).max(1) + c / sub_c
        }
        GroupingScheme::Explicit { group_size } => (c * rows + r) / group_size.max(1) as usize,
    }
}

/// Checks every structural rule and collects all violations.
pub fn validate(
    draft: DescriptorDraft,
    options: &ValidationOptions,
) -> Result<RisDescriptor, ValidationErrors> {
    let mut issues = Vec::new();
    let mut push = |field: &str, message: String| {
        issues.push(ValidationIssue {
            field: field.to_owned(),
            message,
        })
    };

    if draft.name.trim().is_empty() {
        push("name", "name must not be empty".into());
    }

    let cells = draft.cells;
    let n = cells.cell_count();
    if n == 0 {
        if !options.allow_empty {
            push(
                "cells",
                format!(
                    "cell array {}x{} is empty (enable allow_empty to accept it)",
                    cells.rows, cells.cols
                ),
            );
        }
    } else if usize::try_from(n).is_err() {
        push("cells", format!("cell count {n} exceeds addressable range"));
    }

    let bits_ok = match &draft.bits {
        BitResolution::Uniform(b) => {
            let ok = (1..=MAX_BITS_PER_CELL).contains(b);
            if !ok {
                push(
                    "bits.uniform",
                    format!("bit resolution must be in 1..={MAX_BITS_PER_CELL}, got {b}"),
                );
            }
            ok
        }
        BitResolution::PerCell(list) => {
            let mut ok = true;
            if list.len() as u64 != n {
                push(
                    "bits.per_cell",
                    format!("expected {n} entries, found {}", list.len()),
                );
                ok = false;
            }
            for (i, b) in list.iter().enumerate() {
                if !(1..=MAX_BITS_PER_CELL).contains(b) {
                    push(
                        &format!("bits.per_cell[{i}]"),
                        format!("bit resolution must be in 1..={MAX_BITS_PER_CELL}, got {b}"),
                    );
                    ok = false;
                }
            }
            ok
        }
    };

    let group_size: Option<u64> = match draft.grouping {
        GroupingScheme::Unit => Some(1),
        GroupingScheme::Row => Some(u64::from(cells.cols)),
        GroupingScheme::Column => Some(u64::from(cells.rows)),
        GroupingScheme::Subarray { rows, cols } => {
            let mut ok = true;
            if rows == 0 || cols == 0 {
                push("grouping", "sub-array dimensions must be positive".into());
                ok = false;
            } else {
                if !cells.rows.is_multiple_of(rows) {
                    push(
                        "grouping.r",
                        format!("sub-array rows {rows} must divide array rows {}", cells.rows),
                    );
                    ok = false;
                }
                if !cells.cols.is_multiple_of(cols) {
                    push(
                        "grouping.c",
                        format!("sub-array cols {cols} must divide array cols {}", cells.cols),
                    );
                    ok = false;
                }
            }
            ok.then(|| u64::from(rows) * u64::from(cols))
        }
        GroupingScheme::Explicit { group_size } => {
            let g = u64::from(group_size);
            if g == 0 {
                push("grouping.n_g", "group size must be positive".into());
                None
            } else if !n.is_multiple_of(g) {
                push(
                    "grouping.n_g",
                    format!("group size must divide cell count ({g} does not divide {n})"),
                );
                None
            } else {
                Some(g)
            }
        }
    };
    let group_size = match group_size {
        Some(0) => {
            push(
                "grouping",
                format!("{} grouping resolves to an empty group", draft.grouping.name()),
            );
            None
        }
        other => other,
    };

    if let (Some(_), true, BitResolution::PerCell(list)) = (group_size, bits_ok, &draft.bits) {
        let mut seen: HashMap<usize, (usize, u32)> = HashMap::new();
        for (cell, &b) in list.iter().enumerate() {
            let group = group_index(&cells, &draft.grouping, cell);
            match seen.get(&group) {
                Some(&(first, expected)) if expected != b => push(
                    &format!("bits.per_cell[{cell}]"),
                    format!(
                        "heterogeneous bit resolution within group {group}: \
                         cell {cell} has {b} bits, cell {first} has {expected}"
                    ),
                ),
                Some(_) => {}
                None => {
                    seen.insert(group, (cell, b));
                }
            }
        }
    }

    if draft.drive_circuit.signals_per_circuit == 0 {
        push(
            "drive_circuit.signals_per_circuit",
            "signals per circuit must be at least 1".into(),
        );
    }

    if options.require_control_board_power && draft.control_board.rated_power.is_none() {
        push(
            "control_board.rated_power",
            "control board power required".into(),
        );
    }

    if draft.dynamic.technology() != draft.technology {
        push(
            "dynamic",
            format!(
                "dynamic spec is for {} but technology is {}",
                draft.dynamic.technology(),
                draft.technology
            ),
        );
    }
    if let DynamicSpec::PinDiode {
        polarization_count: 0,
        ..
    } = draft.dynamic
    {
        push(
            "dynamic.polarization_count",
            "polarization count must be at least 1".into(),
        );
    }

    match (issues.is_empty(), group_size) {
        (true, Some(group_size)) => Ok(RisDescriptor { draft, group_size }),
        _ => Err(ValidationErrors { issues }),
    }
}

/// Number of adjustable components that need control signals (N_c).
///
/// PIN-diode and RF-switch cells need one signal per bit, so N_c = Σ B_i.
/// A varactor is biased to any of its states by a single analog level, so
/// N_c = N whatever the bit field says.
pub fn component_count(d: &RisDescriptor) -> u64 {
    match d.technology() {
        RisTechnology::VaractorDiode => d.cell_count(),
        RisTechnology::PinDiode | RisTechnology::RfSwitch => match d.bits() {
            BitResolution::Uniform(b) => u64::from(*b) * d.cell_count(),
            BitResolution::PerCell(list) => list.iter().map(|&b| u64::from(b)).sum(),
        },
    }
}

/// Cells per control group (N_g).
pub fn group_size(d: &RisDescriptor) -> u64 {
    d.group_size
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn pin_draft(rows: u32, cols: u32, bits: u32) -> DescriptorDraft {
        DescriptorDraft {
            name: "pin-test".into(),
            technology: RisTechnology::PinDiode,
            frequency_hz: 3_500_000_000,
            cells: CellArray::new(rows, cols),
            bits: BitResolution::Uniform(bits),
            grouping: GroupingScheme::Unit,
            drive_circuit: DriveCircuitSpec {
                name: "SN74LV595A".into(),
                signals_per_circuit: 8,
                rated_power: PowerMicrowatts::new(66),
            },
            control_board: ControlBoardSpec {
                name: "XC7K70T".into(),
                rated_power: Some(PowerMicrowatts::new(4_800_000)),
            },
            dynamic: DynamicSpec::PinDiode {
                on_power_per_diode: PowerMicrowatts::new(12_600),
                off_power_per_diode: PowerMicrowatts::ZERO,
                polarization_count: 1,
            },
            metadata: BTreeMap::new(),
        }
    }
}
