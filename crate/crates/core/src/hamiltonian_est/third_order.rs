// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Third-order perturbative ZX rate of a cross-resonance drive.
//!
//! With `J` the qubit-qubit coupling, `λ` the drive strength per unit
//! amplitude, `Δ` the qubit detuning and `δ₁` the control anharmonicity,
//! all in Hz,
//!
//! ```text
//! g(Ā) = −JλĀ/Δ · δ₁/(δ₁+Δ)
//!        + J(λĀ)³ δ₁²(3δ₁³ + 11δ₁²Δ + 15δ₁Δ² + 9Δ³)
//!          / (4Δ³(δ₁+Δ)³(δ₁+2Δ)(3δ₁+2Δ))
//! ```
//!
//! and the ZX coefficient is `ω_ZX = 2π·g` rad/s.

use std::f64::consts::{FRAC_PI_2, PI};

use argmin::core::{CostFunction, Executor};
use argmin::solver::brent::BrentRoot;
use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;
/// `λ/|Δ|` reported for a fit in the purely linear limit.
const BOUNDARY_LAMBDA: f64 = 1e-6;

/// Linear and cubic coefficients `(k1, k3)` with `g = Jλk1·Ā + Jλ³k3·Ā³`.
fn coefficients(delta: f64, anharm: f64) -> (f64, f64) {
    let (d, a) = (delta, anharm);
    let k1 = -a / (d * (a + d));
    let num = a * a * (3.0 * a.powi(3) + 11.0 * a * a * d + 15.0 * a * d * d + 9.0 * d.powi(3));
    let den = 4.0 * d.powi(3) * (a + d).powi(3) * (a + 2.0 * d) * (3.0 * a + 2.0 * d);
    (k1, num / den)
}

fn check_constants(delta: f64, anharm: f64) -> Result<()> {
    let bad = [-delta, -2.0 * delta, -2.0 * delta / 3.0];
    if delta == 0.0 || !delta.is_finite() || !anharm.is_finite() || bad.iter().any(|b| (anharm - b).abs() <= 1e-12 * delta.abs()) {
        return Err(Error::InvalidData(format!("singular model constants Δ={delta}, δ₁={anharm}")));
    }
    Ok(())
}

/// `ω_ZX(Ā)` in rad/s.
pub fn omega_zx(a_bar: f64, j: f64, lambda: f64, delta: f64, anharm: f64) -> f64 {
    let (k1, k3) = coefficients(delta, anharm);
    2.0 * PI * (j * lambda * k1 * a_bar + j * lambda.powi(3) * k3 * a_bar.powi(3))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThirdOrderFit {
    /// Coupling, Hz. Always positive.
    pub j: f64,
    /// Drive strength per unit amplitude, Hz.
    pub lambda: f64,
    /// Detuning `Δ`, Hz (fixed input).
    pub delta: f64,
    /// Control anharmonicity `δ₁`, Hz (fixed input).
    pub anharm: f64,
    /// Covariance of `(J, λ)`, Hz².
    pub covariance: [[f64; 2]; 2],
    pub stderr_j: f64,
    pub stderr_lambda: f64,
    /// `Σ r² / Σ ω²` at the optimum.
    pub residual: f64,
    pub iterations: usize,
    pub n_points: usize,
}

impl ThirdOrderFit {
    pub fn omega_zx(&self, a_bar: f64) -> f64 {
        omega_zx(a_bar, self.j, self.lambda, self.delta, self.anharm)
    }

    /// Linear and cubic parts of `ω_ZX(Ā)` separately, rad/s.
    pub fn omega_parts(&self, a_bar: f64) -> (f64, f64) {
        let (k1, k3) = coefficients(self.delta, self.anharm);
        (
            2.0 * PI * self.j * self.lambda * k1 * a_bar,
            2.0 * PI * self.j * self.lambda.powi(3) * k3 * a_bar.powi(3),
        )
    }
}

/// Levenberg–Marquardt fit of `(J, λ)` to `(Ā, ω_ZX)` pairs, `ω` in rad/s.
///
/// When the data curve upward against the model's cubic sign, the best
/// fit is the linear limit; it is returned with `λ = 1e-6·|Δ|` and the
/// matching `J`, so `Jλ` carries the slope and the cubic part vanishes.
pub fn fit_third_order(points: &[(f64, f64)], delta: f64, anharm: f64) -> Result<ThirdOrderFit> {
    check_constants(delta, anharm)?;
    if points.len() < 4 {
        return Err(Error::InvalidData(format!("need at least 4 points, got {}", points.len())));
    }
    if points.iter().any(|(a, w)| !a.is_finite() || !w.is_finite()) {
        return Err(Error::InvalidData("non-finite fit point".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let (k1, k3) = coefficients(delta, anharm);
    let two_pi = 2.0 * PI;

    // Linear least squares in (Jλ, Jλ³) for the starting point.
    let mut ata = Matrix2::zeros();
    let mut aty = Vector2::zeros();
    for &(a, w) in &pts {
        let row = Vector2::new(two_pi * k1 * a, two_pi * k3 * a.powi(3));
        ata += row * row.transpose();
        aty += row * w;
    }
    let lin = ata
        .lu()
        .solve(&aty)
        .ok_or_else(|| Error::Singular("amplitude points do not determine the model".into()))?;
    let (p1, p3) = (lin[0], lin[1]);
    if p1 == 0.0 {
        return Err(Error::InvalidData("data has no linear ZX component".into()));
    }
    // The model ties the cubic to the linear part through λ², so a
    // negative ratio has no interior optimum: the fit degenerates to the
    // purely linear limit λ → 0.
    let ratio = p3 / p1;
    let boundary = ratio <= 0.0;
    let mut p = if boundary {
        let (num, den) = pts.iter().fold((0.0, 0.0), |(n, d), &(a, w)| {
            let x = two_pi * k1 * a;
            (n + x * w, d + x * x)
        });
        let lambda = p1.signum() * delta.abs() * BOUNDARY_LAMBDA;
        Vector2::new(num / den / lambda, lambda)
    } else {
        let lambda0 = p1.signum() * ratio.sqrt();
        Vector2::new(p1 / lambda0, lambda0)
    };

    let residuals = |p: &Vector2<f64>| -> Vec<f64> {
        pts.iter()
            .map(|&(a, w)| omega_zx(a, p[0], p[1], delta, anharm) - w)
            .collect()
    };
    let jacobian = |p: &Vector2<f64>| -> Vec<Vector2<f64>> {
        pts.iter()
            .map(|&(a, _)| {
                Vector2::new(
                    two_pi * (p[1] * k1 * a + p[1].powi(3) * k3 * a.powi(3)),
                    two_pi * (p[0] * k1 * a + 3.0 * p[0] * p[1] * p[1] * k3 * a.powi(3)),
                )
            })
            .collect()
    };
    let ssr = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();
    let scale: f64 = pts.iter().map(|(_, w)| w * w).sum::<f64>().max(f64::MIN_POSITIVE);

    let mut r = residuals(&p);
    let mut cost = ssr(&r);
    let mut mu = 1e-3;
    let mut iterations = 0;
    let mut converged = boundary || cost <= 1e-30 * scale;
    while !converged {
        if iterations >= MAX_ITER {
            return Err(Error::NoConvergence(format!("third-order fit after {MAX_ITER} iterations")));
        }
        iterations += 1;
        let jac = jacobian(&p);
        let mut jtj = Matrix2::zeros();
        let mut jtr = Vector2::zeros();
        for (g, ri) in jac.iter().zip(&r) {
            jtj += g * g.transpose();
            jtr += g * *ri;
        }
        loop {
            let damped = jtj + Matrix2::from_diagonal(&jtj.diagonal()) * mu;
            let Some(step) = damped.lu().solve(&(-jtr)) else {
                mu *= 10.0;
                if mu > 1e30 {
                    converged = true;
                    break;
                }
                continue;
            };
            let mut trial = p + step;
            if trial[0] < 0.0 {
                trial = -trial;
            }
            let r_trial = residuals(&trial);
            let c_trial = ssr(&r_trial);
            if c_trial.is_finite() && c_trial <= cost {
                let small_step = step[0].abs() <= 1e-12 * p[0].abs() && step[1].abs() <= 1e-12 * p[1].abs();
                let small_gain = cost - c_trial <= 1e-15 * cost;
                p = trial;
                r = r_trial;
                cost = c_trial;
                mu = (mu * 0.3).max(1e-15);
                converged = small_step || small_gain || cost <= 1e-30 * scale;
                break;
            }
            mu *= 4.0;
            if mu > 1e30 {
                converged = true;
                break;
            }
        }
    }

    let jac = jacobian(&p);
    let mut jtj = Matrix2::zeros();
    for g in &jac {
        jtj += g * g.transpose();
    }
    let dof = pts.len().saturating_sub(2).max(1) as f64;
    let s2 = cost / dof;
    let cov = jtj.try_inverse().map(|m| m * s2).unwrap_or_else(|| Matrix2::from_element(f64::NAN));
    Ok(ThirdOrderFit {
        j: p[0],
        lambda: p[1],
        delta,
        anharm,
        covariance: [[cov[(0, 0)], cov[(0, 1)]], [cov[(1, 0)], cov[(1, 1)]]],
        stderr_j: cov[(0, 0)].sqrt(),
        stderr_lambda: cov[(1, 1)].sqrt(),
        residual: cost / scale,
        iterations,
        n_points: pts.len(),
    })
}

struct Angle<'a> {
    fit: &'a ThirdOrderFit,
    t_cr: f64,
    n_cr: f64,
    target: f64,
}

impl CostFunction for Angle<'_> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, a: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.n_cr * self.fit.omega_zx(*a) * self.t_cr - self.target)
    }
}

const GRID: usize = 20_000;
const A_MIN: f64 = 1e-6;

/// Smallest amplitude in `[1e-6, 1]` whose accumulated ZX angle
/// `n_cr·ω_ZX(Ā)·t_cr` reaches π/2 in the direction of the linear term.
pub fn solve_pi_half_amplitude(fit: &ThirdOrderFit, t_cr: f64, n_cr: u32) -> Result<f64> {
    if !(t_cr > 0.0) || n_cr == 0 {
        return Err(Error::InvalidData("t_cr and n_cr must be positive".into()));
    }
    let (k1, _) = coefficients(fit.delta, fit.anharm);
    let sign = (fit.j * fit.lambda * k1).signum();
    let f = Angle {
        fit,
        t_cr,
        n_cr: n_cr as f64,
        target: sign * FRAC_PI_2,
    };
    let eval = |a: f64| f.cost(&a).expect("infallible");
    let mut lo = A_MIN;
    let mut f_lo = eval(lo);
    let mut bracket = None;
    for k in 1..=GRID {
        let hi = A_MIN + (1.0 - A_MIN) * k as f64 / GRID as f64;
        let f_hi = eval(hi);
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (lo, hi) = bracket.ok_or_else(|| Error::NoRoot("π/2 angle not reached for amplitudes in [1e-6, 1]".into()))?;
    let solver = BrentRoot::new(lo, hi, 1e-15);
    let res = Executor::new(f, solver)
        .configure(|s| s.max_iters(200))
        .run()
        .map_err(|e| Error::NoConvergence(format!("root refinement: {e}")))?;
    res.state
        .best_param
        .ok_or_else(|| Error::NoConvergence("root refinement returned no point".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const J: f64 = 1.87e6;
    const LAMBDA: f64 = -271.2e6;
    const DELTA: f64 = 115e6;
    const ANHARM: f64 = -319.7e6;

    fn synthetic(n: usize) -> Vec<(f64, f64)> {
        (1..=n)
            .map(|k| {
                let a = 0.05 * k as f64;
                (a, omega_zx(a, J, LAMBDA, DELTA, ANHARM))
            })
            .collect()
    }

    #[test]
    fn recovers_parameters_from_exact_data() {
        let fit = fit_third_order(&synthetic(8), DELTA, ANHARM).unwrap();
        assert!((fit.j / J - 1.0).abs() < 1e-6);
        assert!((fit.lambda / LAMBDA - 1.0).abs() < 1e-6);
        assert!(fit.residual < 1e-20, "{}", fit.residual);
    }

    #[test]
    fn order_of_points_is_irrelevant() {
        let mut pts = synthetic(8);
        let a = fit_third_order(&pts, DELTA, ANHARM).unwrap();
        pts.reverse();
        pts.swap(1, 5);
        let b = fit_third_order(&pts, DELTA, ANHARM).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_too_few_points_and_singular_constants() {
        assert!(fit_third_order(&synthetic(3), DELTA, ANHARM).is_err());
        assert!(fit_third_order(&synthetic(5), DELTA, -DELTA).is_err());
        assert!(fit_third_order(&synthetic(5), 0.0, ANHARM).is_err());
    }

    #[test]
    fn longer_pulse_halves_linear_amplitude() {
        let fit = fit_third_order(&synthetic(8), DELTA, ANHARM).unwrap();
        let t = 2e-6;
        let a1 = solve_pi_half_amplitude(&fit, t, 1).unwrap();
        let a2 = solve_pi_half_amplitude(&fit, 2.0 * t, 1).unwrap();
        assert!((a2 / a1 - 0.5).abs() < 0.01, "{a1} {a2}");
    }

    #[test]
    fn no_root_for_tiny_pulses() {
        let fit = fit_third_order(&synthetic(8), DELTA, ANHARM).unwrap();
        assert!(matches!(solve_pi_half_amplitude(&fit, 1e-12, 1), Err(Error::NoRoot(_))));
    }
}
