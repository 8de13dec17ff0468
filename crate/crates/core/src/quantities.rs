//! Exact integer physical quantities.
//!
//! Every power in the model is held as a whole number of microwatts, every
//! dwell time as a whole number of microseconds, and every energy as a whole
//! number of picojoules (1 µW × 1 µs = 1 pJ). Arithmetic is checked: overflow
//! is reported, never wrapped.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced when parsing or combining quantities.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantityError {
    #[error("cannot parse power {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("power {text:?} is finer than 1 uW and cannot be represented exactly")]
    Precision { text: String },
    #[error("power {text:?} is negative")]
    Domain { text: String },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("duration must be at least 1 us")]
    ZeroDuration,
}

/// Units accepted in power strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerUnit {
    Microwatt,
    Milliwatt,
    Watt,
}

impl PowerUnit {
    pub const ALL: [PowerUnit; 3] = [PowerUnit::Microwatt, PowerUnit::Milliwatt, PowerUnit::Watt];

    pub fn symbol(self) -> &'static str {
        match self {
            PowerUnit::Microwatt => "uW",
            PowerUnit::Milliwatt => "mW",
            PowerUnit::Watt => "W",
        }
    }

    /// Microwatts per one unit.
    pub fn scale(self) -> u64 {
        match self {
            PowerUnit::Microwatt => 1,
            PowerUnit::Milliwatt => 1_000,
            PowerUnit::Watt => 1_000_000,
        }
    }

    /// Number of fractional decimal digits that still land on whole microwatts.
    pub fn fraction_digits(self) -> usize {
        match self {
            PowerUnit::Microwatt => 0,
            PowerUnit::Milliwatt => 3,
            PowerUnit::Watt => 6,
        }
    }

    fn from_symbol(symbol: &str) -> Option<Self> {
        match symbol {
            "uW" | "µW" => Some(PowerUnit::Microwatt),
            "mW" => Some(PowerUnit::Milliwatt),
            "W" => Some(PowerUnit::Watt),
            _ => None,
        }
    }
}

impl fmt::Display for PowerUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A non-negative power in whole microwatts.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct PowerMicrowatts(u64);

impl PowerMicrowatts {
    pub const ZERO: PowerMicrowatts = PowerMicrowatts(0);

    pub const fn new(microwatts: u64) -> Self {
        PowerMicrowatts(microwatts)
    }

    pub const fn from_milliwatts(milliwatts: u64) -> Self {
        PowerMicrowatts(milliwatts * 1_000)
    }

    pub const fn from_watts(watts: u64) -> Self {
        PowerMicrowatts(watts * 1_000_000)
    }

    pub const fn as_microwatts(self) -> u64 {
        self.0
    }

    pub fn checked_add(self, rhs: PowerMicrowatts) -> Result<Self, QuantityError> {
        self.0
            .checked_add(rhs.0)
            .map(PowerMicrowatts)
            .ok_or(QuantityError::Overflow("power addition"))
    }

    pub fn checked_mul(self, factor: u64) -> Result<Self, QuantityError> {
        self.0
            .checked_mul(factor)
            .map(PowerMicrowatts)
            .ok_or(QuantityError::Overflow("power scaling"))
    }

    /// Largest unit in which the value is at least one whole unit.
    pub fn natural_unit(self) -> PowerUnit {
        if self.0 >= 1_000_000 {
            PowerUnit::Watt
        } else if self.0 >= 1_000 {
            PowerUnit::Milliwatt
        } else {
            PowerUnit::Microwatt
        }
    }

    /// Human-readable form in [`natural_unit`](Self::natural_unit).
    pub fn display(self) -> String {
        format_power(self, self.natural_unit())
    }
}

impl fmt::Display for PowerMicrowatts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl FromStr for PowerMicrowatts {
    type Err = QuantityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_power(s)
    }
}

/// A positive dwell time in whole microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DurationMicroseconds(u64);

impl DurationMicroseconds {
    pub fn new(microseconds: u64) -> Result<Self, QuantityError> {
        if microseconds == 0 {
            Err(QuantityError::ZeroDuration)
        } else {
            Ok(DurationMicroseconds(microseconds))
        }
    }

    pub fn as_microseconds(self) -> u64 {
        self.0
    }

    pub fn checked_add(self, rhs: DurationMicroseconds) -> Result<Self, QuantityError> {
        self.0
            .checked_add(rhs.0)
            .map(DurationMicroseconds)
            .ok_or(QuantityError::Overflow("duration addition"))
    }
}

impl<'de> Deserialize<'de> for DurationMicroseconds {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = u64::deserialize(deserializer)?;
        DurationMicroseconds::new(raw).map_err(serde::de::Error::custom)
    }
}

/// A non-negative energy in whole picojoules.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct EnergyPicojoules(u64);

impl EnergyPicojoules {
    pub const ZERO: EnergyPicojoules = EnergyPicojoules(0);

    pub const fn new(picojoules: u64) -> Self {
        EnergyPicojoules(picojoules)
    }

    pub const fn as_picojoules(self) -> u64 {
        self.0
    }

    pub fn checked_add(self, rhs: EnergyPicojoules) -> Result<Self, QuantityError> {
        self.0
            .checked_add(rhs.0)
            .map(EnergyPicojoules)
            .ok_or(QuantityError::Overflow("energy addition"))
    }
}

/// Energy delivered by a constant power over a dwell time.
pub fn energy(
    power: PowerMicrowatts,
    dwell: DurationMicroseconds,
) -> Result<EnergyPicojoules, QuantityError> {
    power
        .0
        .checked_mul(dwell.0)
        .map(EnergyPicojoules)
        .ok_or(QuantityError::Overflow("energy product"))
}

/// Parses `<decimal> <space?> (uW|mW|W)` into exact microwatts.
///
/// Digits past the unit's resolution are accepted only when they are zero;
/// anything else is rejected rather than rounded.
pub fn parse_power(text: &str) -> Result<PowerMicrowatts, QuantityError> {
    let parse_err = |reason: &str| QuantityError::Parse {
        text: text.to_owned(),
        reason: reason.to_owned(),
    };

    let trimmed = text.trim();
    let split = trimmed
        .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '-' || c == '+'))
        .ok_or_else(|| parse_err("missing unit (expected uW, mW or W)"))?;
    let (number, unit) = trimmed.split_at(split);
    let unit = PowerUnit::from_symbol(unit.trim_start())
        .ok_or_else(|| parse_err("unknown unit (expected uW, mW or W)"))?;

    let number = match number.strip_prefix('-') {
        Some(rest) => {
            // "-0" is still zero, but any sign on a magnitude is a domain error.
            if rest.chars().any(|c| c.is_ascii_digit() && c != '0') {
                return Err(QuantityError::Domain {
                    text: text.to_owned(),
                });
            }
            rest
        }
        None => number.strip_prefix('+').unwrap_or(number),
    };

    let (whole, fraction) = match number.split_once('.') {
        Some((w, f)) => (w, f),
        None => (number, ""),
    };
    if whole.is_empty() && fraction.is_empty() {
        return Err(parse_err("missing number"));
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !fraction.chars().all(|c| c.is_ascii_digit())
    {
        return Err(parse_err("malformed decimal"));
    }

    let fraction = fraction.trim_end_matches('0');
    let digits = unit.fraction_digits();
    if fraction.len() > digits {
        return Err(QuantityError::Precision {
            text: text.to_owned(),
        });
    }

    let overflow = || QuantityError::Overflow("power literal");
    let whole_value: u64 = if whole.is_empty() {
        0
    } else {
        whole.parse().map_err(|_| overflow())?
    };
    let fraction_value: u64 = if fraction.is_empty() {
        0
    } else {
        let padded = format!("{fraction:0<digits$}");
        padded.parse().map_err(|_| overflow())?
    };

    whole_value
        .checked_mul(unit.scale())
        .and_then(|v| v.checked_add(fraction_value))
        .map(PowerMicrowatts)
        .ok_or_else(overflow)
}

/// Renders a power in the requested unit, e.g. `2.112 mW`.
///
/// Microwatts divide every unit exactly, so the output always round-trips
/// through [`parse_power`]. Trailing fractional zeros are dropped.
pub fn format_power(power: PowerMicrowatts, unit: PowerUnit) -> String {
    let scale = unit.scale();
    let whole = power.0 / scale;
    let fraction = power.0 % scale;
    if fraction == 0 {
        return format!("{whole} {unit}");
    }
    let digits = unit.fraction_digits();
    let fraction = format!("{fraction:0>digits$}");
    format!("{whole}.{} {unit}", fraction.trim_end_matches('0'))
}
