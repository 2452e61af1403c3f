//! Quantity newtypes and the hydrogen production/capacity conversion.
//!
//! Capacity is always the electrical *input* capacity of the electrolyser.
//! Money is in 2023 US dollars throughout.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower heating value of hydrogen in kWh/kg.
pub const LHV_KWH_PER_KG: f64 = 33.33;

/// Hours in a non-leap year; upper bound for full-load hours.
pub const HOURS_PER_YEAR: f64 = 8760.0;

macro_rules! quantity {
    ($(#[$meta:meta])* $name:ident, $unit:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub f64);

        impl $name {
            pub const ZERO: $name = $name(0.0);

            #[inline]
            pub fn value(self) -> f64 {
                self.0
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                $name(self.0 + rhs.0)
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: $name) {
                self.0 += rhs.0;
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                $name(self.0 - rhs.0)
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(-self.0)
            }
        }

        impl Mul<f64> for $name {
            type Output = $name;
            fn mul(self, rhs: f64) -> $name {
                $name(self.0 * rhs)
            }
        }

        impl Div<f64> for $name {
            type Output = $name;
            fn div(self, rhs: f64) -> $name {
                $name(self.0 / rhs)
            }
        }

        impl Sum for $name {
            fn sum<I: Iterator<Item = $name>>(iter: I) -> $name {
                $name(iter.map(|q| q.0).sum())
            }
        }

        impl<'a> Sum<&'a $name> for $name {
            fn sum<I: Iterator<Item = &'a $name>>(iter: I) -> $name {
                $name(iter.map(|q| q.0).sum())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if let Some(p) = f.precision() {
                    write!(f, "{:.*} {}", p, self.0, $unit)
                } else {
                    write!(f, "{} {}", self.0, $unit)
                }
            }
        }
    };
}

quantity!(
    /// Electrolyser electrical input capacity.
    Gw,
    "GW"
);
quantity!(
    /// Hydrogen mass flow.
    MtPerYear,
    "Mt/yr"
);
quantity!(
    /// Energy price or cost per MWh (electricity, gas, or hydrogen depending on context).
    UsdPerMwh,
    "$/MWh"
);
quantity!(
    /// Specific investment per kW of electrical input.
    UsdPerKw,
    "$/kW"
);
quantity!(
    /// Money in billions of 2023 US dollars.
    BillionUsd,
    "$bn"
);

impl Gw {
    pub fn from_mw(mw: f64) -> Gw {
        Gw(mw / 1000.0)
    }
}

fn check_operating_point(full_load_hours: f64, efficiency: f64) -> Result<()> {
    if !(full_load_hours > 0.0 && full_load_hours <= HOURS_PER_YEAR) {
        return Err(Error::domain(format!(
            "full-load hours must lie in (0, {HOURS_PER_YEAR}], got {full_load_hours}"
        )));
    }
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::domain(format!(
            "efficiency must lie in (0, 1], got {efficiency}"
        )));
    }
    Ok(())
}

/// Electrolysis input capacity needed to produce `mass_flow` at the given
/// operating point (LHV basis).
pub fn production_to_capacity(
    mass_flow: MtPerYear,
    full_load_hours: f64,
    efficiency: f64,
) -> Result<Gw> {
    check_operating_point(full_load_hours, efficiency)?;
    // Mt/yr * 1e9 kg/Mt * kWh/kg = kWh/yr; / h/yr = kW; / 1e6 = GW.
    let kwh_h2 = mass_flow.0 * 1e9 * LHV_KWH_PER_KG;
    Ok(Gw(kwh_h2 / (full_load_hours * efficiency) / 1e6))
}

/// Inverse of [`production_to_capacity`].
pub fn capacity_to_production(
    capacity: Gw,
    full_load_hours: f64,
    efficiency: f64,
) -> Result<MtPerYear> {
    check_operating_point(full_load_hours, efficiency)?;
    let kwh_h2 = capacity.0 * 1e6 * full_load_hours * efficiency;
    Ok(MtPerYear(kwh_h2 / LHV_KWH_PER_KG / 1e9))
}
