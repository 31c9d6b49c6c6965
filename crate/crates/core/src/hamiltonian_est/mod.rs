// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Effective-Hamiltonian estimation for cross-resonance pulses.
//!
//! A reconstructed process is turned into a superoperator, its generator is
//! taken as a scaled principal logarithm, and the Hamiltonian part is read
//! off by projecting onto the superoperators of the two-qubit Pauli basis
//! `B_ij = ½ P_i ⊗ P_j`. The ZX rate versus drive amplitude is then fitted
//! with the third-order perturbative model to pick π/2 amplitudes.

mod coefficients;
mod cr;
mod third_order;

pub use coefficients::{
    basis_operator, build_generator, extract_coefficients, generator, HamiltonianCoefficients, PAULI_PAIRS,
};
pub use cr::{
    calibrate_cr_phase, cr1_schedule, cr2_schedule, cr_pulse, CrDevice, PhaseCalibration, PhasePoint,
};
pub use third_order::{fit_third_order, omega_zx, solve_pi_half_amplitude, ThirdOrderFit};

pub use crate::tomography::{choi_to_superop, superop_to_choi};
