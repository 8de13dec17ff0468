//! Static power: control board plus drive circuits.
//!
//! P_static = P_control_board + ⌈N_c / (N_g · N_s)⌉ · P_drive_circuit, where
//! the technology decides how N_c is counted (see
//! [`component_count`](crate::hardware_model::component_count)).

use serde::Serialize;

use crate::error::ModelError;
use crate::hardware_model::RisDescriptor;
use crate::quantities::PowerMicrowatts;

/// Static power split into its board and drive-circuit parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StaticBreakdown {
    pub control_board_power: PowerMicrowatts,
    pub drive_circuit_count: u64,
    pub per_circuit_power: PowerMicrowatts,
    pub total_drive_power: PowerMicrowatts,
    pub static_total: PowerMicrowatts,
}

/// Drive circuits needed to supply `component_count` components when
/// `group_size` cells share a signal and each circuit emits
/// `signals_per_circuit` signals: ⌈N_c / (N_g · N_s)⌉.
///
/// # Panics
///
/// Panics if `group_size` or `signals_per_circuit` is zero.
pub fn drive_circuit_count(component_count: u64, group_size: u64, signals_per_circuit: u64) -> u64 {
    assert!(
        group_size >= 1 && signals_per_circuit >= 1,
        "group size and signals per circuit must be positive"
    );
    // The product can exceed u64; widen so the quotient stays exact.
    let per_circuit = u128::from(group_size) * u128::from(signals_per_circuit);
    let count = u128::from(component_count).div_ceil(per_circuit);
    count as u64
}

fn circuits_for(d: &RisDescriptor) -> u64 {
    drive_circuit_count(
        d.component_count(),
        d.group_size(),
        u64::from(d.drive_circuit().signals_per_circuit),
    )
}

/// P_total_drive_circuits for a descriptor. Needs no control-board power.
pub fn total_drive_circuit_power(d: &RisDescriptor) -> Result<PowerMicrowatts, ModelError> {
    Ok(d.drive_circuit().rated_power.checked_mul(circuits_for(d))?)
}

pub fn static_power_breakdown(d: &RisDescriptor) -> Result<StaticBreakdown, ModelError> {
    let control_board_power =
        d.control_board()
            .rated_power
            .ok_or_else(|| ModelError::MissingControlBoardPower {
                name: d.name().to_owned(),
            })?;
    let drive_circuit_count = circuits_for(d);
    let per_circuit_power = d.drive_circuit().rated_power;
    let total_drive_power = per_circuit_power.checked_mul(drive_circuit_count)?;
    let static_total = control_board_power.checked_add(total_drive_power)?;
    Ok(StaticBreakdown {
        control_board_power,
        drive_circuit_count,
        per_circuit_power,
        total_drive_power,
        static_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardware_model::fixtures::pin_draft;
    use crate::hardware_model::{
        validate, DynamicSpec, GroupingScheme, RisTechnology, ValidationOptions,
    };
    use proptest::prelude::*;

    /// Smallest k with k · N_g · N_s ≥ N_c, by linear search.
    fn minimal_circuits(n_c: u64, n_g: u64, n_s: u64) -> u64 {
        (0..).find(|k| k * n_g * n_s >= n_c).unwrap()
    }

    #[test]
    fn measured_device_counts() {
        assert_eq!(drive_circuit_count(256, 1, 8), 32);
        assert_eq!(drive_circuit_count(128, 32, 1), 4);
        assert_eq!(drive_circuit_count(64, 1, 75), 1);
        assert_eq!(drive_circuit_count(0, 1, 8), 0);
    }

    #[test]
    fn huge_arguments_do_not_overflow() {
        assert_eq!(drive_circuit_count(u64::MAX, u64::MAX, u64::MAX), 1);
        assert_eq!(drive_circuit_count(u64::MAX, 1, 1), u64::MAX);
    }

    #[test]
    #[should_panic]
    fn zero_signals_panics() {
        drive_circuit_count(1, 1, 0);
    }

    #[test]
    fn pin_breakdown() {
        let d = validate(pin_draft(16, 16, 1), &ValidationOptions::default()).unwrap();
        let b = static_power_breakdown(&d).unwrap();
        assert_eq!(b.drive_circuit_count, 32);
        assert_eq!(b.total_drive_power, PowerMicrowatts::new(2112));
        assert_eq!(b.static_total, PowerMicrowatts::new(4_802_112));
        assert_eq!(total_drive_circuit_power(&d).unwrap(), PowerMicrowatts::new(2112));
    }

    #[test]
    fn empty_surface_is_board_only() {
        let mut draft = pin_draft(0, 0, 1);
        draft.control_board.rated_power = Some(PowerMicrowatts::new(1_500_000));
        let opts = ValidationOptions {
            allow_empty: true,
            ..Default::default()
        };
        let d = validate(draft, &opts).unwrap();
        let b = static_power_breakdown(&d).unwrap();
        assert_eq!(b.drive_circuit_count, 0);
        assert_eq!(b.static_total, PowerMicrowatts::new(1_500_000));
    }

    #[test]
    fn missing_board_power_blocks_breakdown_only() {
        let mut draft = pin_draft(16, 16, 1);
        draft.control_board.rated_power = None;
        let d = validate(draft, &ValidationOptions::board_power_optional()).unwrap();
        assert!(total_drive_circuit_power(&d).is_ok());
        assert!(matches!(
            static_power_breakdown(&d),
            Err(ModelError::MissingControlBoardPower { .. })
        ));
    }

    #[test]
    fn drive_power_overflow_reported() {
        let mut draft = pin_draft(16, 16, 1);
        draft.drive_circuit.rated_power = PowerMicrowatts::new(u64::MAX);
        let d = validate(draft, &ValidationOptions::default()).unwrap();
        assert!(matches!(
            static_power_breakdown(&d),
            Err(ModelError::Quantity(_))
        ));
    }

    proptest! {
        #[test]
        fn matches_minimal_search(n_c in 0u64..=1_000_000, n_g in 1u64..64, n_s in 1u64..128) {
            prop_assert_eq!(drive_circuit_count(n_c, n_g, n_s), minimal_circuits(n_c, n_g, n_s));
        }

        #[test]
        fn scaling_components_scales_count_at_most_linearly(
            n_c in 0u64..100_000, n_g in 1u64..64, n_s in 1u64..128, m in 1u64..50,
        ) {
            let base = drive_circuit_count(n_c, n_g, n_s);
            prop_assert!(drive_circuit_count(n_c * m, n_g, n_s) <= m * base);
            prop_assert!(drive_circuit_count(n_c, n_g, 2 * n_s) <= base);
        }

        #[test]
        fn single_bit_pin_equals_single_bit_rf_switch(
            rows in 1u32..32, cols in 1u32..32, n_s in 1u32..100,
            drive_uw in 0u64..1_000_000, board_uw in 0u64..10_000_000, grouped in any::<bool>(),
        ) {
            let mut pin = pin_draft(rows, cols, 1);
            pin.drive_circuit.signals_per_circuit = n_s;
            pin.drive_circuit.rated_power = PowerMicrowatts::new(drive_uw);
            pin.control_board.rated_power = Some(PowerMicrowatts::new(board_uw));
            if grouped {
                pin.grouping = GroupingScheme::Row;
            }
            let mut rf = pin.clone();
            rf.technology = RisTechnology::RfSwitch;
            rf.dynamic = DynamicSpec::RfSwitch { active_power_per_cell: PowerMicrowatts::new(495) };
            let opts = ValidationOptions::default();
            let pin = validate(pin, &opts).unwrap();
            let rf = validate(rf, &opts).unwrap();
            prop_assert_eq!(
                static_power_breakdown(&pin).unwrap(),
                static_power_breakdown(&rf).unwrap()
            );
        }
    }
}
