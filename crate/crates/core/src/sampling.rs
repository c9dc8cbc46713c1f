//! Seeded samplers for Haar unitaries, Haar symplectic unitaries, skew
//! unitaries and orthonormal k-frames.
//!
//! Reproducibility contract:
//! * each draw owns a ChaCha20 stream seeded with `ChaCha20Rng::seed_from_u64`;
//!   ChaCha20 is a counter-mode generator with a platform independent output;
//! * uniforms are `(next_u64 >> 11) · 2⁻⁵³`;
//! * a complex Gaussian consumes one Box–Muller pair `(u₁, u₂)`:
//!   `r = sqrt(−2 ln(1 − u₁))`, real part `r cos 2πu₂`, imaginary part
//!   `r sin 2πu₂`, both scaled by `1/√2`;
//! * Gaussian matrices are filled row-major;
//! * sub-streams of a task use `mix_seed(seed, index)`, the SplitMix64
//!   finalizer applied to `seed + (index+1)·0x9E3779B97F4A7C15`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::matrix::{c64, inner, norm, ComplexMatrix, C64};
use crate::operators::omega;
use crate::{Error, Result};

pub type RngSeed = u64;

pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct Sampler {
    rng: ChaCha20Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.rng.next_u64() as u128 * n as u128) >> 64) as u64
    }

    pub fn complex_normal(&mut self) -> C64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(1.0 - u1)) * core::f64::consts::FRAC_1_SQRT_2;
        let t = 2.0 * core::f64::consts::PI * u2;
        c64(r * libm::cos(t), r * libm::sin(t))
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn unit_vector(&mut self, n: usize) -> Vec<C64> {
        let mut v: Vec<C64> = (0..n).map(|_| self.complex_normal()).collect();
        let nr = norm(&v);
        v.iter_mut().for_each(|z| *z /= nr);
        v
    }
}

fn orthogonalize(x: &mut [C64], against: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in against {
            let c = inner(b, x);
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= c * bi;
            }
        }
    }
}

fn normalize(x: &mut [C64]) {
    let nr = norm(x);
    x.iter_mut().for_each(|z| *z /= nr);
}

/// Gram–Schmidt on the columns; the implied R factor has a positive diagonal.
fn orthonormal_columns(g: &ComplexMatrix) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(g.cols());
    for j in 0..g.cols() {
        let mut c = g.column(j);
        orthogonalize(&mut c, &cols);
        normalize(&mut c);
        cols.push(c);
    }
    let mut out = ComplexMatrix::zeros(g.rows(), g.cols());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

pub fn haar_unitary(d: usize, seed: u64) -> ComplexMatrix {
    orthonormal_columns(&Sampler::new(seed).gaussian_matrix(d, d))
}

/// θ(x) = −Ω x̄, the antiunitary pairing of columns in Sp(d).
fn theta(x: &[C64]) -> Vec<C64> {
    let m = x.len() / 2;
    let mut out = vec![c64(0.0, 0.0); x.len()];
    for i in 0..m {
        // (Ω x̄)_i = x̄_{i+m}, (Ω x̄)_{i+m} = −x̄_i
        out[i] = -x[i + m].conj();
        out[i + m] = x[i].conj();
    }
    out
}

/// Haar-distributed S with S unitary and SᵀΩS = Ω, from a quaternionic
/// Ginibre matrix [[A, B], [−B̄, Ā]] orthonormalized column pair by column
/// pair (u_j, θu_j).
pub fn haar_symplectic(d: usize, seed: u64) -> Result<ComplexMatrix> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::BadDimension(d as u32));
    }
    let m = d / 2;
    let mut s = Sampler::new(seed);
    let a = s.gaussian_matrix(m, m);
    let b = s.gaussian_matrix(m, m);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(d);
    let mut us = Vec::with_capacity(m);
    for j in 0..m {
        // column j of the quaternionic Ginibre matrix: (A_j; −B̄_j)
        let mut c: Vec<C64> = (0..m).map(|i| a[(i, j)]).chain((0..m).map(|i| -b[(i, j)].conj())).collect();
        orthogonalize(&mut c, &basis);
        normalize(&mut c);
        let tc = theta(&c);
        basis.push(c.clone());
        basis.push(tc);
        us.push(c);
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for (j, u) in us.iter().enumerate() {
        out.set_column(j, u);
        out.set_column(j + m, &theta(u));
    }
    Ok(out)
}

/// V = UΩUᵀ with U Haar.
pub fn random_skew_unitary(d: usize, seed: u64) -> Result<ComplexMatrix> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::BadDimension(d as u32));
    }
    let u = haar_unitary(d, seed);
    Ok(u.mul(&omega(d)).mul(&u.transpose()))
}

/// Orthonormal vectors v₁..v_k in ℂ^d, stored as the columns of a d×k matrix.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Frame {
    pub d: usize,
    pub k: usize,
    pub columns: ComplexMatrix,
}

impl Frame {
    pub fn from_columns(columns: ComplexMatrix) -> Result<Self> {
        let (d, k) = (columns.rows(), columns.cols());
        let f = Frame { d, k, columns };
        if k > d || f.gram_defect() > 1e-10 {
            return Err(Error::ShapeMismatch(format!("columns of a {d}x{k} matrix are not orthonormal")));
        }
        Ok(f)
    }

    pub fn from_basis_indices(d: usize, idx: &[usize]) -> Self {
        let mut m = ComplexMatrix::zeros(d, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            m[(i, j)] = c64(1.0, 0.0);
        }
        Frame { d, k: idx.len(), columns: m }
    }

    pub fn vector(&self, j: usize) -> Vec<C64> {
        self.columns.column(j)
    }

    pub fn gram_defect(&self) -> f64 {
        self.columns.adjoint().mul(&self.columns).max_abs_diff(&ComplexMatrix::identity(self.k))
    }

    /// B_ij = ⟨v_i|Ω v̄_j⟩
    pub fn pairing_matrix(&self) -> ComplexMatrix {
        let om = omega(self.d);
        let vbar = self.columns.conj();
        self.columns.adjoint().mul(&om).mul(&vbar)
    }

    /// Σ_{i,j} |⟨v_i|Ω v̄_j⟩|²
    pub fn pairing_sum(&self) -> f64 {
        self.pairing_matrix().data().iter().map(|z| z.norm_sqr()).sum()
    }
}

fn check_dk(d: usize, k: usize) -> Result<()> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::BadDimension(d as u32));
    }
    if k < 1 || k > d {
        return Err(Error::BadK { d: d as u32, k: k as u32 });
    }
    Ok(())
}

/// First k columns of a Haar unitary.
pub fn random_frame(d: usize, k: usize, seed: u64) -> Result<Frame> {
    check_dk(d, k)?;
    let g = Sampler::new(seed).gaussian_matrix(d, k);
    Ok(Frame { d, k, columns: orthonormal_columns(&g) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalFrames {
    /// e₁, e_{1+d/2}, e₂, e_{2+d/2}, … : pairing sum 2⌊k/2⌋.
    pub max_frame: Frame,
    /// e₁, …, e_k: pairing sum max(2k−d, 0).
    pub min_frame: Frame,
}

pub fn extremal_frames(d: usize, k: usize) -> Result<ExtremalFrames> {
    check_dk(d, k)?;
    let m = d / 2;
    let max_idx: Vec<usize> = (0..k).map(|j| if j % 2 == 0 { j / 2 } else { j / 2 + m }).collect();
    let min_idx: Vec<usize> = (0..k).collect();
    Ok(ExtremalFrames { max_frame: Frame::from_basis_indices(d, &max_idx), min_frame: Frame::from_basis_indices(d, &min_idx) })
}

/// Attainable (min, max) of the pairing sum over k-frames.
pub fn pairing_bounds(d: usize, k: usize) -> (usize, usize) {
    ((2 * k).saturating_sub(d), 2 * (k / 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixer_is_stable() {
        assert_eq!(mix_seed(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_ne!(mix_seed(1, 0), mix_seed(0, 1));
    }

    #[test]
    fn extremal_values() {
        let e = extremal_frames(4, 2).unwrap();
        assert_eq!(e.max_frame, Frame::from_basis_indices(4, &[0, 2]));
        assert!((e.max_frame.pairing_sum() - 2.0).abs() < 1e-15);
        assert!(e.min_frame.pairing_sum().abs() < 1e-15);
        for (d, k, lo, hi) in [(6, 5, 4, 4), (6, 4, 2, 4)] {
            let e = extremal_frames(d, k).unwrap();
            assert_eq!(pairing_bounds(d, k), (lo, hi));
            assert!((e.max_frame.pairing_sum() - hi as f64).abs() < 1e-15);
            assert!((e.min_frame.pairing_sum() - lo as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(haar_symplectic(5, 1).is_err());
        assert!(random_frame(4, 5, 1).is_err());
        assert!(random_frame(4, 0, 1).is_err());
    }
}
