use std::collections::BTreeMap;

use super::CatalogError;
use crate::hardware_model::{
    validate, BitResolution, CellArray, ControlBoardSpec, DescriptorDraft, DriveCircuitSpec,
    DynamicSpec, GroupingScheme, RisDescriptor, RisTechnology, ValidationOptions,
};
use crate::quantities::PowerMicrowatts;

pub const BUILTIN_KEYS: [&str; 3] = ["pin-16x16", "varactor-8x16", "rfswitch-8x8"];

/// A measured device shipped with the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub descriptor: RisDescriptor,
    /// Where each number comes from.
    pub provenance_notes: &'static str,
}

const PIN_NOTES: &str = "\
1-bit phase-programmable PIN-diode surface at 3.5 GHz, cell-independent control.
Geometry: four 8x8 sub-arrays forming 16x16 = 256 cells, one diode per cell.
Drive circuits: SN74LV595A 8-bit shift registers, one per sub-array column (8 x 4 = 32).
  Measured at Vcc = 3.3 V, Icc = 20 uA -> 0.066 mW each; 32 x 0.066 mW = 2.112 mW total.
Control board: XC7K70T FPGA measured at 24 V, 0.2 A -> 4.8 W.
Dynamic: 12.6 mW per conducting PIN diode (prior measurement of a PIN-diode surface).";

const VARACTOR_NOTES: &str = "\
Varactor-diode surface at 3.2 GHz, 8 columns of 16 cells (128 cells), column control.
Grouping: two adjacent columns share one control signal, N_g = 16 x 2 = 32.
Drive circuits: DAC3484 (about 250 mW per generated signal) + AD8021 op-amp
  (+/-12 V, 7.5 mA measured -> 180 mW); 250 + 180 = 430 mW per circuit, N_s = 1.
  4 circuits x 430 mW = 1720 mW total.
Coding: 8 bias-voltage states (reverse bias down to -20 V); one varactor per cell.
Control board: not reported for this device; supply it explicitly.
Dynamic: varactor conduction current is negligible, so dynamic power is zero.";

const RFSWITCH_NOTES: &str = "\
RF-switch surface, 8x8 = 64 cells, each cell regulated independently by one RF CMOS switch.
Drive circuit: one XC3S400AN FPGA used as switch driver, measured at 12 V, 20 mA -> 240 mW;
  a single device controls about 75 switches, so N_s = 75 and one circuit suffices.
Control board: XC7K70T FPGA measured at 24 V, 0.2 A -> 4.8 W.
Dynamic: about 3.3 V x 150 uA = 495 uW per cell, independent of state.
Operating frequency: not reported (stored as 0).";

fn pin_16x16() -> DescriptorDraft {
    DescriptorDraft {
        name: "pin-16x16".into(),
        technology: RisTechnology::PinDiode,
        frequency_hz: 3_500_000_000,
        cells: CellArray::new(16, 16),
        bits: BitResolution::Uniform(1),
        grouping: GroupingScheme::Unit,
        drive_circuit: DriveCircuitSpec {
            name: "SN74LV595A 8-bit shift register".into(),
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
        metadata: BTreeMap::from([
            ("coding".into(), "1-bit phase".into()),
            ("drive_supply".into(), "3.3 V, 20 uA".into()),
            ("board_supply".into(), "24 V, 0.2 A".into()),
            ("layout".into(), "four 8x8 sub-arrays".into()),
        ]),
    }
}

fn varactor_8x16() -> DescriptorDraft {
    DescriptorDraft {
        name: "varactor-8x16".into(),
        technology: RisTechnology::VaractorDiode,
        frequency_hz: 3_200_000_000,
        cells: CellArray::new(16, 8),
        // 8 bias-voltage coding states.
        bits: BitResolution::Uniform(3),
        grouping: GroupingScheme::Explicit { group_size: 32 },
        drive_circuit: DriveCircuitSpec {
            name: "DAC3484 + AD8021".into(),
            signals_per_circuit: 1,
            rated_power: PowerMicrowatts::new(430_000),
        },
        control_board: ControlBoardSpec {
            name: "unspecified".into(),
            rated_power: None,
        },
        dynamic: DynamicSpec::VaractorDiode,
        metadata: BTreeMap::from([
            ("coding".into(), "8 bias-voltage states".into()),
            ("bias_range".into(), "0 V to -20 V reverse bias".into()),
            ("dac_power".into(), "250 mW".into()),
            ("opamp_supply".into(), "+/-12 V, 7.5 mA".into()),
        ]),
    }
}

fn rfswitch_8x8() -> DescriptorDraft {
    DescriptorDraft {
        name: "rfswitch-8x8".into(),
        technology: RisTechnology::RfSwitch,
        frequency_hz: 0,
        cells: CellArray::new(8, 8),
        bits: BitResolution::Uniform(1),
        grouping: GroupingScheme::Unit,
        drive_circuit: DriveCircuitSpec {
            name: "XC3S400AN".into(),
            signals_per_circuit: 75,
            rated_power: PowerMicrowatts::new(240_000),
        },
        control_board: ControlBoardSpec {
            name: "XC7K70T".into(),
            rated_power: Some(PowerMicrowatts::new(4_800_000)),
        },
        dynamic: DynamicSpec::RfSwitch {
            active_power_per_cell: PowerMicrowatts::new(495),
        },
        metadata: BTreeMap::from([
            ("drive_supply".into(), "12 V, 20 mA".into()),
            ("cell_supply".into(), "3.3 V, 150 uA".into()),
            ("board_supply".into(), "24 V, 0.2 A".into()),
        ]),
    }
}

/// Catalog entry by key.
pub fn builtin_entry(key: &str) -> Result<CatalogEntry, CatalogError> {
    let (key, draft, provenance_notes) = match key {
        "pin-16x16" => (BUILTIN_KEYS[0], pin_16x16(), PIN_NOTES),
        "varactor-8x16" => (BUILTIN_KEYS[1], varactor_8x16(), VARACTOR_NOTES),
        "rfswitch-8x8" => (BUILTIN_KEYS[2], rfswitch_8x8(), RFSWITCH_NOTES),
        other => return Err(CatalogError::UnknownKey(other.to_owned())),
    };
    let descriptor = validate(draft, &ValidationOptions::board_power_optional())
        .expect("built-in descriptors are valid");
    Ok(CatalogEntry {
        key,
        descriptor,
        provenance_notes,
    })
}

/// Descriptor of a built-in device. The varactor entry carries no
/// control-board power; see [`RisDescriptor::with_control_board_power`].
pub fn builtin(key: &str) -> Result<RisDescriptor, CatalogError> {
    builtin_entry(key).map(|e| e.descriptor)
}

pub fn entries() -> Vec<CatalogEntry> {
    BUILTIN_KEYS
        .iter()
        .map(|k| builtin_entry(k).expect("known key"))
        .collect()
}
