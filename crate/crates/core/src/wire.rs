// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Serialization helpers for byte-stable JSON output.
//!
//! Floats are written with 17 significant digits in exponent form, which
//! round-trips every finite `f64` exactly, so serialize → parse → serialize
//! is byte-identical.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

/// A float that serializes with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F64(pub f64);

pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no representation for these; callers validate first.
        "null".to_string()
    }
}

impl Serialize for F64 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_f64(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F64 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(F64)
    }
}

impl From<f64> for F64 {
    fn from(x: f64) -> Self {
        F64(x)
    }
}

/// Complex number as `[re, im]`.
pub type Cplx = [F64; 2];

pub fn cplx(z: Complex64) -> Cplx {
    [F64(z.re), F64(z.im)]
}

pub fn from_cplx(c: &Cplx) -> Complex64 {
    Complex64::new(c[0].0, c[1].0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(serde_json::to_string(&F64(0.1)).unwrap(), "1.0000000000000001e-1");
        assert_eq!(serde_json::to_string(&F64(-2.0)).unwrap(), "-2.0000000000000000e0");
    }

    proptest! {
        #[test]
        fn round_trip_exact(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = serde_json::to_string(&F64(x)).unwrap();
            let back: F64 = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back.0.to_bits(), x.to_bits());
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
        }
    }
}
