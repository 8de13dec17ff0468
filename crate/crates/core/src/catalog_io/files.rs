//! JSON descriptor and coding-state files.
//!
//! Power fields are unit-suffixed strings (`"0.066 mW"`) so files stay
//! readable while converting to exact microwatts.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::CatalogError;
use crate::dynamic_power::{CodingSegment, CodingSequence, CodingState};
use crate::hardware_model::{
    validate, BitResolution, CellArray, ControlBoardSpec, DescriptorDraft, DriveCircuitSpec,
    DynamicSpec, GroupingScheme, RisDescriptor, RisTechnology, ValidationErrors, ValidationIssue,
    ValidationOptions,
};
use crate::quantities::{parse_power, DurationMicroseconds, PowerMicrowatts};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorFile {
    schema_version: u64,
    name: String,
    technology: RisTechnology,
    #[serde(default)]
    frequency_hz: u64,
    cells: CellArray,
    bits: BitsFile,
    grouping: GroupingFile,
    drive_circuit: DriveCircuitFile,
    control_board: ControlBoardFile,
    dynamic: DynamicFile,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum BitsFile {
    Uniform(u32),
    PerCell(Vec<u32>),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SchemeName {
    Unit,
    Row,
    Column,
    Subarray,
    Explicit,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupingFile {
    scheme: SchemeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_g: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DriveCircuitFile {
    name: String,
    signals_per_circuit: u32,
    rated_power: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlBoardFile {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rated_power: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DynamicFile {
    PinDiode {
        on_power_per_diode: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        off_power_per_diode: Option<String>,
        polarization_count: u32,
    },
    VaractorDiode,
    RfSwitch {
        active_power_per_cell: String,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StatesFile {
    segments: Vec<SegmentFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentFile {
    dwell_us: u64,
    cells: Vec<u64>,
}

fn read(path: &Path) -> Result<String, CatalogError> {
    fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CatalogError> {
    fs::write(path, text).map_err(|source| CatalogError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Deserializes with the failing field path attached to any error.
fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, CatalogError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." => "(root)".to_owned(),
            p => p,
        };
        CatalogError::Schema {
            field,
            message: e.into_inner().to_string(),
        }
    })
}

fn parse_json(text: &str) -> Result<serde_json::Value, CatalogError> {
    serde_json::from_str(text).map_err(|e| CatalogError::Schema {
        field: "(root)".into(),
        message: e.to_string(),
    })
}

fn to_draft(file: DescriptorFile) -> Result<DescriptorDraft, ValidationErrors> {
    let mut issues = Vec::new();
    let mut power = |field: &str, text: &str| match parse_power(text) {
        Ok(p) => p,
        Err(e) => {
            issues.push(ValidationIssue {
                field: field.to_owned(),
                message: e.to_string(),
            });
            PowerMicrowatts::ZERO
        }
    };

    let drive_power = power("drive_circuit.rated_power", &file.drive_circuit.rated_power);
    let board_power = file
        .control_board
        .rated_power
        .as_deref()
        .map(|t| power("control_board.rated_power", t));
    let dynamic = match &file.dynamic {
        DynamicFile::PinDiode {
            on_power_per_diode,
            off_power_per_diode,
            polarization_count,
        } => DynamicSpec::PinDiode {
            on_power_per_diode: power("dynamic.on_power_per_diode", on_power_per_diode),
            off_power_per_diode: off_power_per_diode
                .as_deref()
                .map_or(PowerMicrowatts::ZERO, |t| power("dynamic.off_power_per_diode", t)),
            polarization_count: *polarization_count,
        },
        DynamicFile::VaractorDiode => DynamicSpec::VaractorDiode,
        DynamicFile::RfSwitch {
            active_power_per_cell,
        } => DynamicSpec::RfSwitch {
            active_power_per_cell: power("dynamic.active_power_per_cell", active_power_per_cell),
        },
    };

    let g = &file.grouping;
    let mut require = |field: &str, value: Option<u32>| {
        value.unwrap_or_else(|| {
            issues.push(ValidationIssue {
                field: format!("grouping.{field}"),
                message: format!("required for {:?} grouping", g.scheme),
            });
            1
        })
    };
    let grouping = match g.scheme {
        SchemeName::Unit => GroupingScheme::Unit,
        SchemeName::Row => GroupingScheme::Row,
        SchemeName::Column => GroupingScheme::Column,
        SchemeName::Subarray => GroupingScheme::Subarray {
            rows: require("r", g.r),
            cols: require("c", g.c),
        },
        SchemeName::Explicit => GroupingScheme::Explicit {
            group_size: require("n_g", g.n_g),
        },
    };

    if !issues.is_empty() {
        return Err(ValidationErrors { issues });
    }
    Ok(DescriptorDraft {
        name: file.name,
        technology: file.technology,
        frequency_hz: file.frequency_hz,
        cells: file.cells,
        bits: match file.bits {
            BitsFile::Uniform(b) => BitResolution::Uniform(b),
            BitsFile::PerCell(list) => BitResolution::PerCell(list),
        },
        grouping,
        drive_circuit: DriveCircuitSpec {
            name: file.drive_circuit.name,
            signals_per_circuit: file.drive_circuit.signals_per_circuit,
            rated_power: drive_power,
        },
        control_board: ControlBoardSpec {
            name: file.control_board.name,
            rated_power: board_power,
        },
        dynamic,
        metadata: file.metadata,
    })
}

fn to_file(d: &RisDescriptor) -> DescriptorFile {
    let show = |p: PowerMicrowatts| p.display();
    let (scheme, n_g, r, c) = match d.grouping() {
        GroupingScheme::Unit => (SchemeName::Unit, None, None, None),
        GroupingScheme::Row => (SchemeName::Row, None, None, None),
        GroupingScheme::Column => (SchemeName::Column, None, None, None),
        GroupingScheme::Subarray { rows, cols } => (SchemeName::Subarray, None, Some(rows), Some(cols)),
        GroupingScheme::Explicit { group_size } => (SchemeName::Explicit, Some(group_size), None, None),
    };
    DescriptorFile {
        schema_version: SCHEMA_VERSION,
        name: d.name().to_owned(),
        technology: d.technology(),
        frequency_hz: d.frequency_hz(),
        cells: d.cells(),
        bits: match d.bits() {
            BitResolution::Uniform(b) => BitsFile::Uniform(*b),
            BitResolution::PerCell(list) => BitsFile::PerCell(list.clone()),
        },
        grouping: GroupingFile { scheme, n_g, r, c },
        drive_circuit: DriveCircuitFile {
            name: d.drive_circuit().name.clone(),
            signals_per_circuit: d.drive_circuit().signals_per_circuit,
            rated_power: show(d.drive_circuit().rated_power),
        },
        control_board: ControlBoardFile {
            name: d.control_board().name.clone(),
            rated_power: d.control_board().rated_power.map(show),
        },
        dynamic: match *d.dynamic() {
            DynamicSpec::PinDiode {
                on_power_per_diode,
                off_power_per_diode,
                polarization_count,
            } => DynamicFile::PinDiode {
                on_power_per_diode: show(on_power_per_diode),
                off_power_per_diode: Some(show(off_power_per_diode)),
                polarization_count,
            },
            DynamicSpec::VaractorDiode => DynamicFile::VaractorDiode,
            DynamicSpec::RfSwitch {
                active_power_per_cell,
            } => DynamicFile::RfSwitch {
                active_power_per_cell: show(active_power_per_cell),
            },
        },
        metadata: d.metadata().clone(),
    }
}

/// Parses and validates a descriptor document.
pub fn descriptor_from_json(
    text: &str,
    options: &ValidationOptions,
) -> Result<RisDescriptor, CatalogError> {
    let value = parse_json(text)?;
    match value.get("schema_version") {
        None => {
            return Err(CatalogError::Schema {
                field: "schema_version".into(),
                message: "missing field `schema_version`".into(),
            })
        }
        Some(v) if v.as_u64() != Some(SCHEMA_VERSION) => {
            return match v.as_u64() {
                Some(other) => Err(CatalogError::UnsupportedVersion(other)),
                None => Err(CatalogError::Schema {
                    field: "schema_version".into(),
                    message: format!("expected an integer, found {v}"),
                }),
            }
        }
        Some(_) => {}
    }
    let file: DescriptorFile = from_value(value)?;
    let draft = to_draft(file)?;
    Ok(validate(draft, options)?)
}

/// Canonical pretty-printed JSON, newline-terminated.
pub fn descriptor_to_json(d: &RisDescriptor) -> String {
    let mut text = serde_json::to_string_pretty(&to_file(d)).expect("descriptor serializes");
    text.push('\n');
    text
}

/// Loads a descriptor that must carry a control-board power.
pub fn load_descriptor(path: impl AsRef<Path>) -> Result<RisDescriptor, CatalogError> {
    load_descriptor_with(path, &ValidationOptions::default())
}

pub fn load_descriptor_with(
    path: impl AsRef<Path>,
    options: &ValidationOptions,
) -> Result<RisDescriptor, CatalogError> {
    descriptor_from_json(&read(path.as_ref())?, options)
}

pub fn save_descriptor(d: &RisDescriptor, path: impl AsRef<Path>) -> Result<(), CatalogError> {
    write(path.as_ref(), &descriptor_to_json(d))
}

/// Parses a coding-state document and checks every segment against `d`.
pub fn states_from_json(text: &str, d: &RisDescriptor) -> Result<CodingSequence, CatalogError> {
    let file: StatesFile = from_value(parse_json(text)?)?;
    let mut segments = Vec::with_capacity(file.segments.len());
    for (i, seg) in file.segments.into_iter().enumerate() {
        let dwell = DurationMicroseconds::new(seg.dwell_us).map_err(|e| CatalogError::Schema {
            field: format!("segments[{i}].dwell_us"),
            message: e.to_string(),
        })?;
        let state = CodingState::new(d, seg.cells)
            .map_err(|source| CatalogError::State { segment: i, source })?;
        segments.push(CodingSegment { state, dwell });
    }
    CodingSequence::new(segments).map_err(|e| CatalogError::Schema {
        field: "segments".into(),
        message: e.to_string(),
    })
}

pub fn states_to_json(seq: &CodingSequence) -> String {
    let file = StatesFile {
        segments: seq
            .segments()
            .iter()
            .map(|s| SegmentFile {
                dwell_us: s.dwell.as_microseconds(),
                cells: s.state.cells().to_vec(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string(&file).expect("states serialize");
    text.push('\n');
    text
}

pub fn load_states(path: impl AsRef<Path>, d: &RisDescriptor) -> Result<CodingSequence, CatalogError> {
    states_from_json(&read(path.as_ref())?, d)
}

pub fn save_states(seq: &CodingSequence, path: impl AsRef<Path>) -> Result<(), CatalogError> {
    write(path.as_ref(), &states_to_json(seq))
}
