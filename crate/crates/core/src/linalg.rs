// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra shared by the simulator and the
//! characterization modules.
//!
//! Vectorization is column-stacking throughout: `vec(ρ)[i + d·j] = ρ[i, j]`,
//! so `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Single-qubit Pauli by letter.
pub fn pauli(letter: char) -> Option<CMatrix> {
    let m = match letter {
        'I' => [cr(1.0), cr(0.0), cr(0.0), cr(1.0)],
        'X' => [cr(0.0), cr(1.0), cr(1.0), cr(0.0)],
        'Y' => [cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)],
        'Z' => [cr(1.0), cr(0.0), cr(0.0), cr(-1.0)],
        _ => return None,
    };
    Some(CMatrix::from_row_slice(2, 2, &m))
}

/// Tensor product of Paulis. The leftmost letter acts on the highest-index
/// qubit, so `"ZX"` is Z on qubit 1 and X on qubit 0.
pub fn pauli_string(s: &str) -> Option<CMatrix> {
    let mut acc = CMatrix::identity(1, 1);
    for ch in s.chars() {
        acc = kron(&acc, &pauli(ch)?);
    }
    Some(acc)
}

/// Embed a single-qubit operator acting on `qubit` into an `n`-qubit space.
pub fn embed(op: &CMatrix, qubit: usize, n: usize) -> CMatrix {
    let mut acc = CMatrix::identity(1, 1);
    for q in (0..n).rev() {
        if q == qubit {
            acc = kron(&acc, op);
        } else {
            acc = kron(&acc, &identity(2));
        }
    }
    acc
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && frobenius(&(m - m.adjoint())) <= tol
}

/// Column-stacking vectorization.
pub fn vec_col(m: &CMatrix) -> CVector {
    // nalgebra storage is column-major, which is exactly column stacking.
    CVector::from_column_slice(m.as_slice())
}

pub fn unvec_col(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

/// Superoperator of `ρ ↦ −i[H, ρ]`.
pub fn hamiltonian_superop(h: &CMatrix) -> CMatrix {
    let d = h.nrows();
    let id = identity(d);
    (kron(&id, h) - kron(&h.transpose(), &id)) * c(0.0, -1.0)
}

/// Superoperator of `ρ ↦ γ(AρA† − ½{A†A, ρ})`.
pub fn dissipator_superop(a: &CMatrix, rate: f64) -> CMatrix {
    let d = a.nrows();
    let id = identity(d);
    let ada = a.adjoint() * a;
    let jump = kron(&a.conjugate(), a);
    let anti = kron(&id, &ada) + kron(&ada.transpose(), &id);
    (jump - anti * cr(0.5)) * cr(rate)
}

/// Superoperator of the unitary channel `ρ ↦ UρU†`.
pub fn unitary_superop(u: &CMatrix) -> CMatrix {
    kron(&u.conjugate(), u)
}

pub fn expm(m: &CMatrix) -> CMatrix {
    m.clone().exp()
}

/// Eigenvalues via complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let schur = Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let herm = (m + m.adjoint()) * cr(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), m.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

/// Rebuild `V diag(f(λ)) V†` from a Hermitian eigendecomposition.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = eigh(m);
    let n = m.nrows();
    let mut scaled = vecs.clone();
    for k in 0..n {
        let s = cr(f(vals[k]));
        for r in 0..n {
            scaled[(r, k)] *= s;
        }
    }
    scaled * vecs.adjoint()
}

/// Nearest positive-semidefinite matrix in Frobenius norm.
pub fn project_psd(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |x| x.max(0.0))
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` of two unit-trace density matrices.
///
/// When either argument is pure this reduces to `Tr[ρσ]`, which is used
/// directly; square roots of round-off eigenvalues would otherwise add
/// errors of order `1e-8`.
pub fn state_fidelity(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let purity = |m: &CMatrix| (m * m).trace().re;
    if (purity(rho) - 1.0).abs() < 1e-12 || (purity(sigma) - 1.0).abs() < 1e-12 {
        return (rho * sigma).trace().re;
    }
    let sq = hermitian_map(rho, |x| x.max(0.0).sqrt());
    let inner = &sq * sigma * &sq;
    let (vals, _) = eigh(&inner);
    let tr: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
    tr * tr
}

/// Principal matrix logarithm by inverse scaling and squaring.
///
/// Fails with [`Error::BranchCut`] when an eigenvalue lies within `1e-10` of
/// the closed negative real axis.
pub fn logm(m: &CMatrix) -> Result<CMatrix> {
    let d = m.nrows();
    for ev in eigenvalues(m) {
        if ev.re <= 0.0 && ev.im.abs() <= 1e-10 {
            return Err(Error::BranchCut { re: ev.re, im: ev.im });
        }
    }
    let id = identity(d);
    let mut x = m.clone();
    let mut k = 0u32;
    while frobenius(&(&x - &id)) > 0.05 {
        if k >= 64 {
            return Err(Error::NoConvergence("matrix square root did not approach identity".into()));
        }
        x = sqrtm(&x)?;
        k += 1;
    }
    let y = &x - &id;
    let mut term = y.clone();
    let mut acc = y.clone();
    for n in 2..200 {
        term = &term * &y;
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        let add = &term * cr(sign / n as f64);
        acc += &add;
        if frobenius(&add) < 1e-18 {
            break;
        }
    }
    Ok(acc * cr(2f64.powi(k as i32)))
}

/// Principal square root by the Denman–Beavers iteration.
pub fn sqrtm(a: &CMatrix) -> Result<CMatrix> {
    let d = a.nrows();
    let mut y = a.clone();
    let mut z = identity(d);
    for _ in 0..100 {
        let yi = y
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("square-root iterate".into()))?;
        let zi = z
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("square-root iterate".into()))?;
        let y_next = (&y + &zi) * cr(0.5);
        let z_next = (&z + &yi) * cr(0.5);
        let delta = frobenius(&(&y_next - &y));
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * frobenius(&y).max(1.0) {
            return Ok(y);
        }
    }
    Err(Error::NoConvergence("Denman-Beavers square root".into()))
}

/// Solve `A x = b` for real square `A`.
pub fn solve_real(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Singular("linear system".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pauli_string_is_little_endian() {
        let zx = pauli_string("ZX").unwrap();
        let expect = embed(&pauli('Z').unwrap(), 1, 2) * embed(&pauli('X').unwrap(), 0, 2);
        assert!(frobenius(&(zx - expect)) < 1e-15);
    }

    #[test]
    fn vectorization_identity() {
        let a = CMatrix::from_fn(3, 3, |i, j| c(i as f64 - j as f64, 0.3 * j as f64));
        let b = CMatrix::from_fn(3, 3, |i, j| c(0.1 * (i * j) as f64, 1.0 - i as f64));
        let rho = CMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, (i as f64) - 0.5));
        let lhs = vec_col(&(&a * &rho * &b));
        let rhs = kron(&b.transpose(), &a) * vec_col(&rho);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn expm_matches_closed_form_rotation() {
        // exp(-i θ X / 2) = cos(θ/2) I - i sin(θ/2) X
        let theta = 0.77;
        let x = pauli('X').unwrap();
        let u = expm(&(&x * c(0.0, -theta / 2.0)));
        assert_abs_diff_eq!(u[(0, 0)].re, (theta / 2.0).cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(u[(0, 1)].im, -(theta / 2.0).sin(), epsilon = 1e-14);
    }

    #[test]
    fn logm_inverts_expm() {
        let h = CMatrix::from_fn(4, 4, |i, j| c((i * 3 + j) as f64 * 0.07, (i as f64 - j as f64) * 0.11));
        let a = expm(&h);
        let back = logm(&a).unwrap();
        assert!(frobenius(&(expm(&back) - &a)) < 1e-12);
    }

    #[test]
    fn logm_rejects_negative_eigenvalue() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), cr(-1.0)]));
        assert!(matches!(logm(&m), Err(Error::BranchCut { .. })));
    }

    #[test]
    fn state_fidelity_of_pure_states() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = cr(1.0);
        let plus = CMatrix::from_element(2, 2, cr(0.5));
        assert_abs_diff_eq!(state_fidelity(&a, &plus), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(state_fidelity(&plus, &plus), 1.0, epsilon = 1e-12);
    }
}
