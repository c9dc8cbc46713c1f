//! Dense row-major complex matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

pub const fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c64(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() || rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!("{} entries for {rows}x{cols}", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn column_vector(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// |u⟩⟨v|
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = *x;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c64(s, 0.0))
    }

    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self[(i / o.rows, j / o.cols)] * o[(i % o.rows, j % o.cols)]
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_distance(&self, o: &Self) -> f64 {
        (self - o).frobenius_norm()
    }

    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self - &self.adjoint()).frobenius_norm()
    }

    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_re(0.5)
    }

    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint().mul(self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &o.data[k * o.cols..(k + 1) * o.cols];
                let dst = &mut out.data[i * o.cols..(i + 1) * o.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self · X · self*`
    pub fn conjugate(&self, x: &Self) -> Self {
        self.mul(x).mul(&self.adjoint())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("{}x{} is not square", self.rows, self.cols)));
        }
        if self.hermitian_defect() > 1e-10 * (1.0 + self.frobenius_norm()) {
            return Err(Error::NotHermitian);
        }
        let h = self.hermitian_part();
        let m = nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &h.data);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues_hermitian()?[0])
    }

    /// Cholesky test of `H + tol·I ≻ 0` for the Hermitian part `H`; true
    /// means every eigenvalue exceeds `−tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        let n = self.rows;
        if !self.is_square() {
            return false;
        }
        let mut l = vec![C64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut s = self[(j, j)].re + tol;
            for k in 0..j {
                s -= l[j * n + k].norm_sqr();
            }
            if !(s > 0.0) {
                return false;
            }
            let ljj = libm::sqrt(s);
            l[j * n + j] = c64(ljj, 0.0);
            for i in j + 1..n {
                let mut v = 0.5 * (self[(i, j)] + self[(j, i)].conj());
                for k in 0..j {
                    v -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = v / ljj;
            }
        }
        true
    }
}

impl serde::Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<[f64; 2]> = self.data.iter().map(|z| [z.re, z.im]).collect();
        let mut st = s.serialize_struct("ComplexMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, o: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, o: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, o: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::mul(self, o)
    }
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}
