// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pulse envelopes. All samples are complex and bounded by unit modulus.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Slack on the unit-modulus bound to absorb rounding in `amp·e^{iφ}`.
pub const AMPLITUDE_SLACK: f64 = 1e-12;

/// Closed-form pulse shapes. Durations are in cycles.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `amp·exp(−(j−c)²/2σ²)`, `c = (duration−1)/2`.
    Gaussian { duration: u64, amp: Complex64, sigma: f64 },
    /// Flat top of `square_width` cycles with Gaussian edges.
    GaussianSquare {
        duration: u64,
        amp: Complex64,
        sigma: f64,
        square_width: u64,
    },
    /// Gaussian plus `i·beta` times its central-difference derivative.
    Drag {
        duration: u64,
        amp: Complex64,
        sigma: f64,
        beta: f64,
    },
    Constant { duration: u64, amp: Complex64 },
}

impl Shape {
    pub fn duration(&self) -> u64 {
        match *self {
            Shape::Gaussian { duration, .. }
            | Shape::GaussianSquare { duration, .. }
            | Shape::Drag { duration, .. }
            | Shape::Constant { duration, .. } => duration,
        }
    }

    pub fn amp(&self) -> Complex64 {
        match *self {
            Shape::Gaussian { amp, .. }
            | Shape::GaussianSquare { amp, .. }
            | Shape::Drag { amp, .. }
            | Shape::Constant { amp, .. } => amp,
        }
    }

    fn with_amp(&self, new: Complex64) -> Shape {
        let mut s = self.clone();
        match &mut s {
            Shape::Gaussian { amp, .. }
            | Shape::GaussianSquare { amp, .. }
            | Shape::Drag { amp, .. }
            | Shape::Constant { amp, .. } => *amp = new,
        }
        s
    }

    fn check_params(&self) -> Result<()> {
        let duration = self.duration();
        if duration == 0 {
            return Err(Error::InvalidPulse("duration must be positive".into()));
        }
        let amp = self.amp();
        if !amp.re.is_finite() || !amp.im.is_finite() {
            return Err(Error::InvalidPulse("amplitude is not finite".into()));
        }
        match *self {
            Shape::Gaussian { sigma, .. }
            | Shape::GaussianSquare { sigma, .. }
            | Shape::Drag { sigma, .. } => {
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(Error::InvalidPulse(format!("sigma must be positive, got {sigma}")));
                }
            }
            Shape::Constant { .. } => {}
        }
        if let Shape::GaussianSquare { square_width, .. } = *self {
            if square_width > duration {
                return Err(Error::InvalidPulse(format!(
                    "square_width {square_width} exceeds duration {duration}"
                )));
            }
        }
        if let Shape::Drag { beta, .. } = *self {
            if !beta.is_finite() {
                return Err(Error::InvalidPulse("beta is not finite".into()));
            }
        }
        Ok(())
    }

    /// Evaluate the envelope without the amplitude bound check.
    fn evaluate(&self) -> Vec<Complex64> {
        let n = self.duration() as usize;
        let center = (n as f64 - 1.0) / 2.0;
        let gauss = |j: usize, sigma: f64, half_flat: f64| {
            let x = ((j as f64 - center).abs() - half_flat).max(0.0);
            (-x * x / (2.0 * sigma * sigma)).exp()
        };
        match *self {
            Shape::Gaussian { amp, sigma, .. } => (0..n).map(|j| amp * gauss(j, sigma, 0.0)).collect(),
            Shape::GaussianSquare {
                amp,
                sigma,
                square_width,
                ..
            } => (0..n)
                .map(|j| amp * gauss(j, sigma, square_width as f64 / 2.0))
                .collect(),
            Shape::Drag { amp, sigma, beta, .. } => {
                let g: Vec<Complex64> = (0..n).map(|j| amp * gauss(j, sigma, 0.0)).collect();
                (0..n)
                    .map(|j| {
                        let deriv = if n == 1 {
                            Complex64::new(0.0, 0.0)
                        } else if j == 0 {
                            g[1] - g[0]
                        } else if j == n - 1 {
                            g[n - 1] - g[n - 2]
                        } else {
                            (g[j + 1] - g[j - 1]) * 0.5
                        };
                        g[j] + Complex64::new(0.0, beta) * deriv
                    })
                    .collect()
            }
            Shape::Constant { amp, .. } => vec![amp; n],
        }
    }
}

/// A validated parametric pulse. Construction samples the envelope once to
/// enforce the unit-modulus bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricPulse {
    shape: Shape,
}

impl ParametricPulse {
    pub fn new(shape: Shape) -> Result<Self> {
        shape.check_params()?;
        check_bound(&shape.evaluate())?;
        Ok(Self { shape })
    }

    pub fn gaussian(duration: u64, amp: Complex64, sigma: f64) -> Result<Self> {
        Self::new(Shape::Gaussian { duration, amp, sigma })
    }

    pub fn gaussian_square(duration: u64, amp: Complex64, sigma: f64, square_width: u64) -> Result<Self> {
        Self::new(Shape::GaussianSquare {
            duration,
            amp,
            sigma,
            square_width,
        })
    }

    pub fn drag(duration: u64, amp: Complex64, sigma: f64, beta: f64) -> Result<Self> {
        Self::new(Shape::Drag {
            duration,
            amp,
            sigma,
            beta,
        })
    }

    pub fn constant(duration: u64, amp: Complex64) -> Result<Self> {
        Self::new(Shape::Constant { duration, amp })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn duration(&self) -> u64 {
        self.shape.duration()
    }

    pub fn sample(&self) -> SampledPulse {
        SampledPulse {
            name: String::new(),
            samples: self.shape.evaluate().into(),
        }
    }
}

/// Explicit sample list.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPulse {
    name: String,
    samples: Arc<[Complex64]>,
}

impl SampledPulse {
    pub fn new(name: impl Into<String>, samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidPulse("sampled pulse has no samples".into()));
        }
        check_bound(&samples)?;
        Ok(Self {
            name: name.into(),
            samples: samples.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn duration(&self) -> u64 {
        self.samples.len() as u64
    }
}

fn check_bound(samples: &[Complex64]) -> Result<()> {
    for (j, d) in samples.iter().enumerate() {
        if !d.re.is_finite() || !d.im.is_finite() {
            return Err(Error::InvalidPulse(format!("sample {j} is not finite")));
        }
        if d.norm() > 1.0 + AMPLITUDE_SLACK {
            return Err(Error::InvalidPulse(format!(
                "sample {j} has modulus {:.6} > 1",
                d.norm()
            )));
        }
    }
    Ok(())
}

/// Sample a parametric pulse.
pub fn sample_parametric(pulse: &ParametricPulse) -> SampledPulse {
    pulse.sample()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pulse {
    Parametric(ParametricPulse),
    Sampled(SampledPulse),
}

impl Pulse {
    pub fn duration(&self) -> u64 {
        match self {
            Pulse::Parametric(p) => p.duration(),
            Pulse::Sampled(p) => p.duration(),
        }
    }

    pub fn samples(&self) -> Vec<Complex64> {
        match self {
            Pulse::Parametric(p) => p.shape.evaluate(),
            Pulse::Sampled(p) => p.samples.to_vec(),
        }
    }

    /// Multiply the envelope by `factor`; fails if the result exceeds the
    /// amplitude bound.
    pub fn scaled(&self, factor: Complex64) -> Result<Pulse> {
        match self {
            Pulse::Parametric(p) => Ok(Pulse::Parametric(ParametricPulse::new(
                p.shape.with_amp(p.shape.amp() * factor),
            )?)),
            Pulse::Sampled(p) => Ok(Pulse::Sampled(SampledPulse::new(
                p.name.clone(),
                p.samples.iter().map(|d| d * factor).collect(),
            )?)),
        }
    }

    /// Time-averaged amplitude `Σ|d_j| / duration`, carrying the sign of the
    /// real part of a parametric amplitude.
    pub fn mean_amplitude(&self) -> f64 {
        let samples = self.samples();
        let mean = samples.iter().map(|d| d.norm()).sum::<f64>() / samples.len() as f64;
        match self {
            Pulse::Parametric(p) if p.shape.amp().re < 0.0 => -mean,
            _ => mean,
        }
    }
}

impl From<ParametricPulse> for Pulse {
    fn from(p: ParametricPulse) -> Self {
        Pulse::Parametric(p)
    }
}

impl From<SampledPulse> for Pulse {
    fn from(p: SampledPulse) -> Self {
        Pulse::Sampled(p)
    }
}
