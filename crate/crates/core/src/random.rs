// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Random unitaries, channels and states for property tests and benches.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMatrix};

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// Haar-random `d×d` unitary (QR of a Ginibre matrix with phase fix).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    isometry(d, d, rng)
}

/// Random `rows×cols` isometry, `rows ≥ cols`.
fn isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(rows, cols, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..cols {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..rows {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Haar-random pure state `|ψ⟩⟨ψ|`.
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let v = isometry(d, 1, rng);
    &v * v.adjoint()
}

/// Random CPTP map on dimension `d` with `kraus` Kraus operators, as a
/// column-stacking superoperator `Σ conj(K)⊗K`.
pub fn random_channel<R: Rng + ?Sized>(d: usize, kraus: usize, rng: &mut R) -> CMatrix {
    let v = isometry(d * kraus, d, rng);
    let mut s = CMatrix::zeros(d * d, d * d);
    for k in 0..kraus {
        let block = v.rows(k * d, d).into_owned();
        s += block.conjugate().kronecker(&block);
    }
    s
}
