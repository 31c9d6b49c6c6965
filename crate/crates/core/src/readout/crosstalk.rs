// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pearson-correlation crosstalk tests between calibration schedules.
//!
//! For qubit `i` prepared in `j`, shot `k` of the schedule where the other
//! qubit is excited (ES) is paired with shot `k` of the schedule where it is
//! in the ground state (GS). Each of the four component pairs `(X, Y)` with
//! `X, Y ∈ {I, Q}` gives one correlation `r_j(ES_{i,X}, GS_{i,Y})`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    I,
    Q,
}

impl Component {
    fn of(self, z: Complex64) -> f64 {
        match self {
            Component::I => z.re,
            Component::Q => z.im,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrosstalkResult {
    pub qubit: usize,
    pub state: u8,
    pub es: Component,
    pub gs: Component,
    pub r: f64,
    pub t: f64,
    pub p: f64,
}

/// Calibration IQ data for two qubits: `iq[s][i]` holds qubit `i`'s shots
/// in calibration schedule `cal_s`, where `s = 2·q1 + q0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationIq {
    pub iq: [[Vec<Complex64>; 2]; 4],
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::InvalidData("correlation needs two equal series of length ≥ 3".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidData("zero-variance component".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// `(t, p)` of the two-sided test of zero correlation, `df = n − 2`.
pub fn correlation_t_test(r: f64, n: usize) -> (f64, f64) {
    let df = (n - 2) as f64;
    if r.abs() >= 1.0 {
        return (f64::INFINITY.copysign(r), 0.0);
    }
    let t = r * (df / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    let p = 2.0 * (1.0 - dist.cdf(t.abs()));
    (t, p.clamp(0.0, 1.0))
}

/// The sixteen correlation tests, ordered by qubit, state, ES component,
/// GS component.
pub fn crosstalk_test(data: &CalibrationIq) -> Result<Vec<CrosstalkResult>> {
    let n = data.iq[0][0].len();
    if data.iq.iter().flatten().any(|v| v.len() != n) {
        return Err(Error::InvalidData("calibration schedules need equal shot counts".into()));
    }
    let mut out = Vec::with_capacity(16);
    for qubit in 0..2usize {
        let other = 1 - qubit;
        for state in 0..2u8 {
            let index = |other_state: usize| -> usize {
                let mut bits = [0usize; 2];
                bits[qubit] = state as usize;
                bits[other] = other_state;
                2 * bits[1] + bits[0]
            };
            let es = &data.iq[index(1)][qubit];
            let gs = &data.iq[index(0)][qubit];
            for x in [Component::I, Component::Q] {
                for y in [Component::I, Component::Q] {
                    let a: Vec<f64> = es.iter().map(|z| x.of(*z)).collect();
                    let b: Vec<f64> = gs.iter().map(|z| y.of(*z)).collect();
                    let r = pearson(&a, &b)?;
                    let (t, p) = correlation_t_test(r, n);
                    out.push(CrosstalkResult {
                        qubit,
                        state,
                        es: x,
                        gs: y,
                        r,
                        t,
                        p,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_correlation_is_one() {
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let (_, p) = correlation_t_test(1.0, 50);
        assert_eq!(p, 0.0);
    }

    #[test]
    fn degenerate_component() {
        assert!(pearson(&[1.0; 10], &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]).is_err());
    }

    #[test]
    fn t_statistic_reference() {
        // r = 0.3, n = 102: t = 0.3·√(100/0.91) ≈ 3.1449, p ≈ 0.00218.
        let (t, p) = correlation_t_test(0.3, 102);
        assert!((t - 3.144_854).abs() < 1e-5, "{t}");
        assert!((p - 0.002_18).abs() < 5e-5, "{p}");
    }

    #[test]
    fn sixteen_results() {
        let mk = |s: f64| (0..20).map(|k| Complex64::new((k as f64 * s).sin(), (k as f64 * s * 1.3).cos())).collect::<Vec<_>>();
        let data = CalibrationIq {
            iq: [
                [mk(0.1), mk(0.2)],
                [mk(0.3), mk(0.4)],
                [mk(0.5), mk(0.6)],
                [mk(0.7), mk(0.8)],
            ],
        };
        let res = crosstalk_test(&data).unwrap();
        assert_eq!(res.len(), 16);
        assert!(res.iter().all(|r| (0.0..=1.0).contains(&r.p)));
    }
}
