//! Unit-tagged quantities for config files.
//!
//! A quantity is either a bare number, taken as SI, or a string of the form
//! `"<number> <unit>"`. Only the units listed per dimension are accepted;
//! anything else is a parse error.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// Avogadro constant, used for molar rate units.
pub const AVOGADRO: f64 = 6.022_140_76e23;

/// A physical dimension with a fixed table of accepted units.
pub trait Dimension {
    const NAME: &'static str;
    /// SI multiplier for `unit`, or `None` if the unit is not accepted.
    fn scale(unit: &str) -> Option<f64>;
}

macro_rules! dimension {
    ($ty:ident, $name:literal, { $($unit:literal => $scale:expr),* $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $ty;

        impl Dimension for $ty {
            const NAME: &'static str = $name;
            fn scale(unit: &str) -> Option<f64> {
                match unit {
                    $($unit => Some($scale),)*
                    _ => None,
                }
            }
        }
    };
}

dimension!(Length, "length", {
    "m" => 1.0, "mm" => 1e-3, "um" => 1e-6, "µm" => 1e-6, "nm" => 1e-9,
});
dimension!(Time, "time", {
    "s" => 1.0, "ms" => 1e-3, "us" => 1e-6, "µs" => 1e-6, "ns" => 1e-9,
});
dimension!(Rate, "first-order rate", {
    "1/s" => 1.0, "s^-1" => 1.0, "1/ms" => 1e3, "ms^-1" => 1e3,
    "1/us" => 1e6, "us^-1" => 1e6, "1/ns" => 1e9, "ns^-1" => 1e9,
});
dimension!(Diffusivity, "diffusion coefficient", {
    "m^2/s" => 1.0, "um^2/s" => 1e-12, "µm^2/s" => 1e-12, "nm^2/s" => 1e-18,
});
dimension!(VolumeRate, "second-order rate", {
    "m^3/s" => 1.0, "um^3/s" => 1e-18, "µm^3/s" => 1e-18, "nm^3/s" => 1e-27,
    "1/M/s" => 1e-3 / AVOGADRO, "M^-1 s^-1" => 1e-3 / AVOGADRO,
});
dimension!(Temperature, "temperature", { "K" => 1.0 });
dimension!(Viscosity, "viscosity", { "Pa s" => 1.0, "kg/m/s" => 1.0, "mPa s" => 1e-3 });

/// Parse `"<number> [unit]"` into an SI value.
pub fn parse_quantity<D: Dimension>(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(_, c)| c.is_whitespace())
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (number, unit) = text.split_at(split);
    let value: f64 = number
        .parse()
        .map_err(|_| format!("`{number}` is not a number"))?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    D::scale(unit)
        .map(|s| {
            // dividing by an exact power of ten keeps `5 um` == 5e-6
            let inv = 1.0 / s;
            if s < 1.0 && inv.fract() == 0.0 {
                value / inv
            } else {
                value * s
            }
        })
        .ok_or_else(|| format!("unit `{unit}` is not a recognised {} unit", D::NAME))
}

/// An SI value of dimension `D`.
#[derive(Clone, Copy, PartialEq)]
pub struct Quantity<D> {
    pub si: f64,
    _dim: PhantomData<D>,
}

impl<D> Quantity<D> {
    pub fn new(si: f64) -> Self {
        Quantity {
            si,
            _dim: PhantomData,
        }
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} SI)", self.si, D::NAME)
    }
}

impl<D> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.si)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(de: De) -> Result<Self, De::Error> {
        struct QVisitor<D>(PhantomData<D>);

        impl<D: Dimension> Visitor<'_> for QVisitor<D> {
            type Value = Quantity<D>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "a {} as a number (SI) or a \"<number> <unit>\" string",
                    D::NAME
                )
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(Quantity::new(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(Quantity::new(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(Quantity::new(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_quantity::<D>(v).map(Quantity::new).map_err(E::custom)
            }
        }

        de.deserialize_any(QVisitor(PhantomData))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn micro_units_convert() {
        assert_eq!(parse_quantity::<Length>("5 um").unwrap(), 5e-6);
        assert_eq!(parse_quantity::<Length>("5 µm").unwrap(), 5e-6);
        assert!((parse_quantity::<Time>("0.2 us").unwrap() - 2e-7).abs() < 1e-22);
        assert_eq!(parse_quantity::<Rate>("10 1/s").unwrap(), 10.0);
    }

    #[test]
    fn bare_number_is_si() {
        assert_eq!(parse_quantity::<Diffusivity>("1e-10").unwrap(), 1e-10);
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let err = parse_quantity::<Length>("3 ms").unwrap_err();
        assert!(err.contains("length"), "{err}");
        assert!(parse_quantity::<Time>("abc s").is_err());
    }

    #[test]
    fn molar_rate() {
        // 1e9 per molar per second is a typical diffusion-limited rate, ~1.66e-18 m^3/s
        let k = parse_quantity::<VolumeRate>("1e9 1/M/s").unwrap();
        assert!((k - 1.660_539e-18).abs() < 1e-23);
    }
}
