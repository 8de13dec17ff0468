//! Coding-state-dependent power and energy over timed coding sequences.
//!
//! PIN-diode cells draw current for every forward-biased diode. Which bits
//! of a cell's state put a diode into conduction is a [`ConductionModel`];
//! the default [`Popcount`] model counts set bits, so a `B`-bit cell in
//! state `s` conducts through `popcount(s)` diodes per polarization.
//! Varactor cells draw nothing, and RF-switch cells draw a constant
//! per-cell current regardless of state.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::error::ModelError;
use crate::hardware_model::{DynamicSpec, RisDescriptor};
use crate::quantities::{energy, DurationMicroseconds, EnergyPicojoules, PowerMicrowatts};
use crate::static_power::{static_power_breakdown, StaticBreakdown};

/// A coding state that does not fit its descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("state has {found} cells, descriptor has {expected}")]
    Length { expected: u64, found: u64 },
    #[error("cell {cell}: state {value} out of range for {bits}-bit cell")]
    Range { cell: usize, value: u64, bits: u32 },
    #[error("cell {cell}: state {value} differs from state {expected} of cell {first} in group {group}")]
    Grouping {
        cell: usize,
        group: usize,
        value: u64,
        first: usize,
        expected: u64,
    },
    #[error("coding sequence must contain at least one segment")]
    EmptySequence,
}

/// Per-cell states, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CodingState {
    cells: Vec<u64>,
}

impl CodingState {
    /// Checks `cells` against the descriptor's cell count, bit ranges and grouping.
    pub fn new(d: &RisDescriptor, cells: Vec<u64>) -> Result<Self, StateError> {
        check_cells(d, &cells)?;
        Ok(CodingState { cells })
    }

    /// Every cell in the same state.
    pub fn uniform(d: &RisDescriptor, value: u64) -> Result<Self, StateError> {
        CodingState::new(d, vec![value; d.cell_count() as usize])
    }

    /// Every bit of every cell set: the all-"1" configuration.
    pub fn all_ones(d: &RisDescriptor) -> Self {
        let cells = (0..d.cell_count() as usize)
            .map(|i| max_state(d.bits_of(i)))
            .collect();
        CodingState { cells }
    }

    pub fn all_zeros(d: &RisDescriptor) -> Self {
        CodingState {
            cells: vec![0; d.cell_count() as usize],
        }
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<u64> {
        self.cells
    }
}

fn max_state(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn check_cells(d: &RisDescriptor, cells: &[u64]) -> Result<(), StateError> {
    if cells.len() as u64 != d.cell_count() {
        return Err(StateError::Length {
            expected: d.cell_count(),
            found: cells.len() as u64,
        });
    }
    let mut first_in_group: HashMap<usize, (usize, u64)> = HashMap::new();
    for (cell, &value) in cells.iter().enumerate() {
        let bits = d.bits_of(cell);
        if value > max_state(bits) {
            return Err(StateError::Range { cell, value, bits });
        }
        if d.group_size() > 1 {
            let group = d.group_of(cell);
            match first_in_group.get(&group) {
                Some(&(first, expected)) if expected != value => {
                    return Err(StateError::Grouping {
                        cell,
                        group,
                        value,
                        first,
                        expected,
                    })
                }
                Some(_) => {}
                None => {
                    first_in_group.insert(group, (cell, value));
                }
            }
        }
    }
    Ok(())
}

/// A coding state held for a dwell time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodingSegment {
    pub state: CodingState,
    pub dwell: DurationMicroseconds,
}

/// Non-empty, ordered list of segments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CodingSequence {
    segments: Vec<CodingSegment>,
}

impl CodingSequence {
    pub fn new(segments: Vec<CodingSegment>) -> Result<Self, StateError> {
        if segments.is_empty() {
            return Err(StateError::EmptySequence);
        }
        Ok(CodingSequence { segments })
    }

    pub fn segments(&self) -> &[CodingSegment] {
        &self.segments
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &CodingSequence) -> CodingSequence {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        CodingSequence { segments }
    }
}

/// Maps a cell's coding state to the number of its diodes that conduct
/// (per polarization).
pub trait ConductionModel {
    /// Conducting diodes for `state` on a cell with `bits` control bits.
    /// Must not exceed `bits`.
    fn conducting(&self, state: u64, bits: u32) -> u32;
}

/// One diode per set bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Popcount;

impl ConductionModel for Popcount {
    fn conducting(&self, state: u64, _bits: u32) -> u32 {
        state.count_ones()
    }
}

/// Explicit state → conducting-diode table for cells of one bit width.
/// Cells of any other width fall back to [`Popcount`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductionTable {
    bits: u32,
    conducting: Vec<u32>,
}

impl ConductionTable {
    /// `conducting[s]` diodes conduct in state `s`. The table must cover all
    /// `2^bits` states and no entry may exceed `bits`.
    pub fn new(bits: u32, conducting: Vec<u32>) -> Option<Self> {
        let states = 1usize.checked_shl(bits)?;
        (conducting.len() == states && conducting.iter().all(|&c| c <= bits))
            .then_some(ConductionTable { bits, conducting })
    }
}

impl ConductionModel for ConductionTable {
    fn conducting(&self, state: u64, bits: u32) -> u32 {
        if bits == self.bits {
            self.conducting[state as usize]
        } else {
            Popcount.conducting(state, bits)
        }
    }
}

/// P_dynamic for a coding state, with the default [`Popcount`] conduction model.
pub fn dynamic_power(d: &RisDescriptor, state: &CodingState) -> Result<PowerMicrowatts, ModelError> {
    dynamic_power_with(d, state, &Popcount)
}

pub fn dynamic_power_with(
    d: &RisDescriptor,
    state: &CodingState,
    model: &dyn ConductionModel,
) -> Result<PowerMicrowatts, ModelError> {
    check_cells(d, state.cells())?;
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
            let (mut on, mut off) = (0u64, 0u64);
            for (cell, &s) in state.cells().iter().enumerate() {
                let bits = d.bits_of(cell);
                let conducting = model.conducting(s, bits).min(bits);
                on += u64::from(conducting);
                off += u64::from(bits - conducting);
            }
            let pol = u64::from(polarization_count);
            let on_power = on_power_per_diode.checked_mul(on)?.checked_mul(pol)?;
            let off_power = off_power_per_diode.checked_mul(off)?.checked_mul(pol)?;
            Ok(on_power.checked_add(off_power)?)
        }
    }
}

/// P_RIS = P_static + P_dynamic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PowerBreakdown {
    #[serde(rename = "static")]
    pub static_power: StaticBreakdown,
    pub dynamic: PowerMicrowatts,
    pub total: PowerMicrowatts,
}

pub fn total_power(d: &RisDescriptor, state: &CodingState) -> Result<PowerBreakdown, ModelError> {
    let static_power = static_power_breakdown(d)?;
    let dynamic = dynamic_power(d, state)?;
    Ok(PowerBreakdown {
        static_power,
        dynamic,
        total: static_power.static_total.checked_add(dynamic)?,
    })
}

/// Energy and time-averaged power over a coding sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SequenceEnergy {
    pub energy: EnergyPicojoules,
    /// floor(energy / duration); at most 1 µW below the exact mean.
    pub mean_power: PowerMicrowatts,
    pub duration: DurationMicroseconds,
}

pub fn sequence_energy(d: &RisDescriptor, seq: &CodingSequence) -> Result<SequenceEnergy, ModelError> {
    let static_total = static_power_breakdown(d)?.static_total;
    let mut total = EnergyPicojoules::ZERO;
    let mut duration: Option<DurationMicroseconds> = None;
    for segment in seq.segments() {
        let power = static_total.checked_add(dynamic_power(d, &segment.state)?)?;
        total = total.checked_add(energy(power, segment.dwell)?)?;
        duration = Some(match duration {
            Some(acc) => acc.checked_add(segment.dwell)?,
            None => segment.dwell,
        });
    }
    let duration = duration.ok_or(StateError::EmptySequence)?;
    Ok(SequenceEnergy {
        energy: total,
        mean_power: PowerMicrowatts::new(total.as_picojoules() / duration.as_microseconds()),
        duration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardware_model::fixtures::pin_draft;
    use crate::hardware_model::{
        validate, BitResolution, GroupingScheme, RisTechnology, ValidationOptions,
    };
    use proptest::prelude::*;

    fn pin(rows: u32, cols: u32, bits: u32) -> RisDescriptor {
        validate(pin_draft(rows, cols, bits), &ValidationOptions::default()).unwrap()
    }

    fn rf(rows: u32, cols: u32) -> RisDescriptor {
        let mut draft = pin_draft(rows, cols, 1);
        draft.technology = RisTechnology::RfSwitch;
        draft.drive_circuit.signals_per_circuit = 75;
        draft.drive_circuit.rated_power = PowerMicrowatts::new(240_000);
        draft.dynamic = DynamicSpec::RfSwitch {
            active_power_per_cell: PowerMicrowatts::new(495),
        };
        validate(draft, &ValidationOptions::default()).unwrap()
    }

    fn varactor(rows: u32, cols: u32, bits: u32) -> RisDescriptor {
        let mut draft = pin_draft(rows, cols, bits);
        draft.technology = RisTechnology::VaractorDiode;
        draft.dynamic = DynamicSpec::VaractorDiode;
        validate(draft, &ValidationOptions::default()).unwrap()
    }

    /// Adds up one diode at a time: every bit of every cell, every polarization.
    fn per_diode_sum(d: &RisDescriptor, state: &CodingState) -> u64 {
        let DynamicSpec::PinDiode {
            on_power_per_diode,
            off_power_per_diode,
            polarization_count,
        } = *d.dynamic()
        else {
            panic!("not a PIN descriptor")
        };
        let mut total = 0;
        for (cell, &s) in state.cells().iter().enumerate() {
            for bit in 0..d.bits_of(cell) {
                for _ in 0..polarization_count {
                    total += if s >> bit & 1 == 1 {
                        on_power_per_diode.as_microwatts()
                    } else {
                        off_power_per_diode.as_microwatts()
                    };
                }
            }
        }
        total
    }

    #[test]
    fn pin_all_ones_and_zeros() {
        let d = pin(16, 16, 1);
        let ones = CodingState::all_ones(&d);
        assert_eq!(dynamic_power(&d, &ones).unwrap(), PowerMicrowatts::new(3_225_600));
        assert_eq!(per_diode_sum(&d, &ones), 3_225_600);
        let zeros = CodingState::all_zeros(&d);
        assert_eq!(dynamic_power(&d, &zeros).unwrap(), PowerMicrowatts::ZERO);
    }

    #[test]
    fn pin_total_is_static_plus_dynamic() {
        let d = pin(16, 16, 1);
        let b = total_power(&d, &CodingState::all_ones(&d)).unwrap();
        assert_eq!(b.static_power.static_total, PowerMicrowatts::new(4_802_112));
        assert_eq!(b.total, PowerMicrowatts::new(8_027_712));
    }

    #[test]
    fn rf_switch_constant_per_cell() {
        let d = rf(8, 8);
        assert_eq!(
            dynamic_power(&d, &CodingState::all_zeros(&d)).unwrap(),
            PowerMicrowatts::new(31_680)
        );
        let b = total_power(&d, &CodingState::all_ones(&d)).unwrap();
        assert_eq!(b.total, PowerMicrowatts::new(5_071_680));
    }

    #[test]
    fn varactor_total_equals_static() {
        let d = varactor(4, 4, 3).with_control_board_power(PowerMicrowatts::new(1_500_000));
        let b = total_power(&d, &CodingState::uniform(&d, 5).unwrap()).unwrap();
        assert_eq!(b.dynamic, PowerMicrowatts::ZERO);
        assert_eq!(b.total, b.static_power.static_total);
    }

    #[test]
    fn off_power_and_polarization() {
        let mut draft = pin_draft(1, 2, 2);
        draft.dynamic = DynamicSpec::PinDiode {
            on_power_per_diode: PowerMicrowatts::new(100),
            off_power_per_diode: PowerMicrowatts::new(7),
            polarization_count: 2,
        };
        let d = validate(draft, &ValidationOptions::default()).unwrap();
        let s = CodingState::new(&d, vec![0b01, 0b11]).unwrap();
        // 3 on + 1 off diodes, doubled for two polarizations.
        assert_eq!(dynamic_power(&d, &s).unwrap(), PowerMicrowatts::new(2 * (300 + 7)));
        assert_eq!(per_diode_sum(&d, &s), 614);
    }

    #[test]
    fn state_errors() {
        let d = pin(2, 2, 1);
        assert_eq!(
            CodingState::new(&d, vec![0, 1, 2, 0]),
            Err(StateError::Range {
                cell: 2,
                value: 2,
                bits: 1
            })
        );
        assert!(matches!(
            CodingState::new(&d, vec![0; 3]),
            Err(StateError::Length {
                expected: 4,
                found: 3
            })
        ));
        let mut draft = pin_draft(2, 2, 1);
        draft.grouping = GroupingScheme::Row;
        let grouped = validate(draft, &ValidationOptions::default()).unwrap();
        assert!(CodingState::new(&grouped, vec![1, 1, 0, 0]).is_ok());
        assert!(matches!(
            CodingState::new(&grouped, vec![1, 0, 0, 0]),
            Err(StateError::Grouping { cell: 1, group: 0, .. })
        ));
        // A state built for one descriptor is re-checked against another.
        let other = pin(1, 1, 1);
        assert!(dynamic_power(&other, &CodingState::all_ones(&d)).is_err());
    }

    #[test]
    fn conduction_table_overrides_popcount() {
        let d = pin(1, 2, 2);
        // Thermometer-style: states 0..=3 conduct 0, 1, 1, 2 diodes.
        let table = ConductionTable::new(2, vec![0, 1, 1, 2]).unwrap();
        let s = CodingState::new(&d, vec![2, 3]).unwrap();
        assert_eq!(
            dynamic_power_with(&d, &s, &table).unwrap(),
            PowerMicrowatts::new(3 * 12_600)
        );
        assert!(ConductionTable::new(2, vec![0, 1, 3, 2]).is_none());
        assert!(ConductionTable::new(2, vec![0, 1]).is_none());
    }

    #[test]
    fn sequence_energy_two_segments() {
        // One 1-bit PIN cell: static 934 + 66 = 1000 µW, plus 1000 µW when on.
        let mut draft = pin_draft(1, 1, 1);
        draft.control_board.rated_power = Some(PowerMicrowatts::new(934));
        draft.dynamic = DynamicSpec::PinDiode {
            on_power_per_diode: PowerMicrowatts::new(1000),
            off_power_per_diode: PowerMicrowatts::ZERO,
            polarization_count: 1,
        };
        let d = validate(draft, &ValidationOptions::default()).unwrap();
        let second = DurationMicroseconds::new(1_000_000).unwrap();
        let off = CodingSegment { state: CodingState::all_zeros(&d), dwell: second };
        let on = CodingSegment { state: CodingState::all_ones(&d), dwell: second };

        let single = sequence_energy(&d, &CodingSequence::new(vec![off.clone()]).unwrap()).unwrap();
        assert_eq!(single.energy.as_picojoules(), 1_000_000_000);
        assert_eq!(single.mean_power, PowerMicrowatts::new(1000));

        let both = sequence_energy(&d, &CodingSequence::new(vec![off, on]).unwrap()).unwrap();
        assert_eq!(both.energy.as_picojoules(), 3_000_000_000);
        assert_eq!(both.mean_power, PowerMicrowatts::new(1500));
        assert_eq!(both.duration.as_microseconds(), 2_000_000);
    }

    #[test]
    fn alternating_pin_halves_dynamic() {
        let d = pin(16, 16, 1);
        let dwell = DurationMicroseconds::new(1000).unwrap();
        let seq = CodingSequence::new(vec![
            CodingSegment { state: CodingState::all_ones(&d), dwell },
            CodingSegment { state: CodingState::all_zeros(&d), dwell },
        ])
        .unwrap();
        let e = sequence_energy(&d, &seq).unwrap();
        // Segment-by-segment: static for the whole time plus all-ones dynamic for half.
        let expected = 4_802_112 * 2000 + 3_225_600 * 1000;
        assert_eq!(e.energy.as_picojoules(), expected);
        assert_eq!(e.mean_power.as_microwatts() - 4_802_112, 3_225_600 / 2);
        assert_eq!(e.duration.as_microseconds(), 2000);
    }

    #[test]
    fn empty_sequence_rejected() {
        assert_eq!(CodingSequence::new(vec![]), Err(StateError::EmptySequence));
    }

    fn arb_pin() -> impl Strategy<Value = (RisDescriptor, Vec<u64>)> {
        (1u32..=8, 1u32..=8, proptest::collection::vec(1u32..=4, 64), 1u32..=2, 0u64..20_000, 0u64..20_000)
            .prop_flat_map(|(rows, cols, bits, pol, on, off)| {
                let n = (rows * cols) as usize;
                let bits = bits[..n].to_vec();
                let mut draft = pin_draft(rows, cols, 1);
                draft.bits = BitResolution::PerCell(bits.clone());
                draft.dynamic = DynamicSpec::PinDiode {
                    on_power_per_diode: PowerMicrowatts::new(on.max(off)),
                    off_power_per_diode: PowerMicrowatts::new(off.min(on)),
                    polarization_count: pol,
                };
                let d = validate(draft, &ValidationOptions::default()).unwrap();
                let states: Vec<_> = bits.iter().map(|&b| 0u64..(1 << b)).collect();
                (Just(d), states)
            })
    }

    proptest! {
        #[test]
        fn pin_matches_per_diode_sum((d, cells) in arb_pin()) {
            let s = CodingState::new(&d, cells).unwrap();
            prop_assert_eq!(dynamic_power(&d, &s).unwrap().as_microwatts(), per_diode_sum(&d, &s));
        }

        #[test]
        fn setting_a_bit_never_lowers_power((d, cells) in arb_pin(), pick in any::<usize>(), bit in 0u32..4) {
            let cell = pick % cells.len();
            let before = CodingState::new(&d, cells.clone()).unwrap();
            let mut raised = cells;
            if bit < d.bits_of(cell) {
                raised[cell] |= 1 << bit;
            }
            let after = CodingState::new(&d, raised).unwrap();
            prop_assert!(dynamic_power(&d, &after).unwrap() >= dynamic_power(&d, &before).unwrap());
        }

        #[test]
        fn all_ones_is_maximal((d, cells) in arb_pin()) {
            let s = CodingState::new(&d, cells).unwrap();
            let max = dynamic_power(&d, &CodingState::all_ones(&d)).unwrap();
            prop_assert!(dynamic_power(&d, &s).unwrap() <= max);
        }

        #[test]
        fn breakdown_total_is_exact_sum((d, cells) in arb_pin()) {
            let s = CodingState::new(&d, cells).unwrap();
            let b = total_power(&d, &s).unwrap();
            prop_assert_eq!(b.total.as_microwatts(), b.static_power.static_total.as_microwatts() + b.dynamic.as_microwatts());
        }
    }

    #[test]
    fn varactor_zero_for_every_state() {
        let d = varactor(2, 4, 2);
        for code in 0u64..(1 << 16) {
            let cells = (0..8).map(|i| (code >> (2 * i)) & 0b11).collect();
            let s = CodingState::new(&d, cells).unwrap();
            assert_eq!(dynamic_power(&d, &s).unwrap(), PowerMicrowatts::ZERO);
        }
    }
}
