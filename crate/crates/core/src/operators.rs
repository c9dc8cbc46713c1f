//! Canonical operators on ℂ^d ⊗ ℂ^d, the covariant maps L_{p,q}, the
//! invariant states ρ_{a,b}, twirls and the congruence V ~ Ω.
//!
//! Basis convention: |i⟩⊗|j⟩ has index `i·d + j`; the partial trace ρ_A
//! traces out the second factor.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::matrix::{c64, inner, norm, ComplexMatrix, C64};
use crate::rational::{int, RationalPoint2, Q};
use crate::{Dimension, Error, Result};

/// Ω = [[0, I], [−I, 0]] in blocks of size n/2.
pub fn omega(n: usize) -> ComplexMatrix {
    let m = n / 2;
    let mut o = ComplexMatrix::zeros(n, n);
    for i in 0..m {
        o[(i, i + m)] = c64(1.0, 0.0);
        o[(i + m, i)] = c64(-1.0, 0.0);
    }
    o
}

#[derive(Clone, Debug)]
pub struct CanonicalMatrices {
    pub omega: ComplexMatrix,
    /// |ω⟩ = d^{-1/2} Σ|jj⟩ as a column.
    pub max_ent: ComplexMatrix,
    /// (I⊗Ω)|ω⟩
    pub max_ent_omega: ComplexMatrix,
    pub flip: ComplexMatrix,
    /// (I⊗Ω)F(I⊗Ω)*
    pub flip_omega: ComplexMatrix,
}

pub fn max_entangled(d: usize) -> Vec<C64> {
    let mut v = vec![c64(0.0, 0.0); d * d];
    let s = 1.0 / libm::sqrt(d as f64);
    for j in 0..d {
        v[j * d + j] = c64(s, 0.0);
    }
    v
}

pub fn flip(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(j * d + i, i * d + j)] = c64(1.0, 0.0);
        }
    }
    f
}

/// (I⊗V) X (I⊗V)*
pub fn local_conjugate(v: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(v.rows()).kron(v).conjugate(x)
}

pub fn canonical_matrices(d: Dimension) -> CanonicalMatrices {
    let n = d.usize();
    let om = omega(n);
    let w = max_entangled(n);
    let iw = ComplexMatrix::identity(n).kron(&om).mul(&ComplexMatrix::column_vector(&w));
    let f = flip(n);
    CanonicalMatrices {
        flip_omega: local_conjugate(&om, &f),
        omega: om,
        max_ent: ComplexMatrix::column_vector(&w),
        max_ent_omega: iw,
        flip: f,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// S⊗S̄ symmetry: projections built from |ω⟩ and F^Ω.
    SSbar,
    /// S⊗S symmetry: projections built from |ω^Ω⟩ and F.
    SS,
}

/// The three minimal projections of the commutant, ranks 1, (d²+d)/2 and
/// (d²−d−2)/2.
pub fn projections(d: Dimension, family: Family) -> [ComplexMatrix; 3] {
    let c = canonical_matrices(d);
    let n2 = d.usize() * d.usize();
    let id = ComplexMatrix::identity(n2);
    let (v, f) = match family {
        Family::SSbar => (c.max_ent.column(0), c.flip_omega),
        Family::SS => (c.max_ent_omega.column(0), c.flip),
    };
    let p1 = ComplexMatrix::outer(&v, &v);
    let p2 = (&id + &f).scale_re(0.5);
    let p3 = &(&id - &f).scale_re(0.5) - &p1;
    [p1, p2, p3]
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapParams {
    pub p: f64,
    pub q: f64,
    /// Skew-symmetric unitary replacing Ω.
    pub v: Option<ComplexMatrix>,
}

impl MapParams {
    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q, v: None }
    }

    pub fn from_point(pt: &RationalPoint2) -> Self {
        let (p, q) = pt.to_f64();
        Self::new(p, q)
    }

    pub fn with_v(self, v: ComplexMatrix) -> Result<Self> {
        if !is_skew_unitary(&v, 1e-12) {
            return Err(Error::NotSkewUnitary);
        }
        Ok(Self { v: Some(v), ..self })
    }
}

pub fn is_skew_unitary(v: &ComplexMatrix, tol: f64) -> bool {
    v.is_square() && v.rows() % 2 == 0 && v.unitarity_defect() <= tol && (v + &v.transpose()).max_abs_diff(&ComplexMatrix::zeros(v.rows(), v.rows())) <= tol
}

fn v_or_omega(v: Option<&ComplexMatrix>, n: usize) -> Result<ComplexMatrix> {
    match v {
        Some(v) if v.rows() == n && v.cols() == n => Ok(v.clone()),
        Some(v) => Err(Error::ShapeMismatch(format!("V is {}x{}, expected {n}x{n}", v.rows(), v.cols()))),
        None if n % 2 == 0 => Ok(omega(n)),
        None => Err(Error::ShapeMismatch(format!("no canonical Ω in odd dimension {n}"))),
    }
}

/// L_{p,q}(Z) = (1−p−q)Tr(Z)/d·I + pZ + qVZᵀV*
pub fn apply_map(params: &MapParams, z: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !z.is_square() {
        return Err(Error::ShapeMismatch(format!("{}x{} input", z.rows(), z.cols())));
    }
    let n = z.rows();
    let v = v_or_omega(params.v.as_ref(), n)?;
    let tr = z.trace();
    let mut out = v.conjugate(&z.transpose()).scale_re(params.q);
    let dep = tr * (1.0 - params.p - params.q) / n as f64;
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] += params.p * z[(i, j)];
        }
        out[(i, i)] += dep;
    }
    Ok(out)
}

/// ρ_{a,b} = (1−a−b)/d²·I + a|ω⟩⟨ω| + (b/d)(I⊗V)F(I⊗V)*
pub fn rho_state(d: Dimension, a: f64, b: f64, v: Option<&ComplexMatrix>) -> Result<ComplexMatrix> {
    let n = d.usize();
    let v = v_or_omega(v, n)?;
    let w = max_entangled(n);
    let fv = local_conjugate(&v, &flip(n));
    let mut rho = fv.scale_re(b / n as f64);
    let ww = ComplexMatrix::outer(&w, &w).scale_re(a);
    rho = &rho + &ww;
    let c = (1.0 - a - b) / (n * n) as f64;
    for i in 0..n * n {
        rho[(i, i)] += c;
    }
    Ok(rho)
}

/// (id⊗L)(|ω⟩⟨ω|), assembled block by block from L(|i⟩⟨j|).
pub fn choi_of_map(params: &MapParams, d: Dimension) -> Result<ComplexMatrix> {
    let n = d.usize();
    let mut c = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(i, j)] = c64(1.0, 0.0);
            let l = apply_map(params, &e)?;
            for r in 0..n {
                for s in 0..n {
                    c[(i * n + r, j * n + s)] = l[(r, s)] / n as f64;
                }
            }
        }
    }
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumTriple {
    pub lambda: [f64; 3],
    pub mult: [usize; 3],
}

pub fn multiplicities(d: Dimension) -> [usize; 3] {
    let n = d.usize();
    [1, (n * n + n) / 2, (n * n - n - 2) / 2]
}

pub fn spectrum_rho(d: Dimension, a: f64, b: f64) -> SpectrumTriple {
    let n = d.usize() as f64;
    let c = (1.0 - a - b) / (n * n);
    SpectrumTriple { lambda: [c + a - b / n, c + b / n, c - b / n], mult: multiplicities(d) }
}

/// Exact eigenvalues of ρ_{a,b}, in the order of [`spectrum_rho`].
pub fn spectrum_exact(d: Dimension, pt: &RationalPoint2) -> [Q; 3] {
    let n = d.q();
    let c = (int(1) - &pt.x - &pt.y) / (&n * &n);
    [&c + &pt.x - &pt.y / &n, &c + &pt.y / &n, &c - &pt.y / &n]
}

impl SpectrumTriple {
    /// Sorted eigenvalue list with multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..3).flat_map(|i| core::iter::repeat(self.lambda[i]).take(self.mult[i])).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn tensor_dim(x: &ComplexMatrix) -> Result<usize> {
    let r = x.rows();
    let d = libm::round(libm::sqrt(r as f64)) as usize;
    if !x.is_square() || d * d != r || d == 0 {
        return Err(Error::ShapeMismatch(format!("{}x{} is not an operator on C^d ⊗ C^d", x.rows(), x.cols())));
    }
    Ok(d)
}

/// Transpose of the second tensor factor.
pub fn partial_transpose(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = tensor_dim(x)?;
    Ok(ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, a) = (r / d, r % d);
        let (j, b) = (c / d, c % d);
        x[(i * d + b, j * d + a)]
    }))
}

/// Trace over the second factor.
pub fn partial_trace_second(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = tensor_dim(x)?;
    Ok(ComplexMatrix::from_fn(d, d, |i, j| (0..d).map(|a| x[(i * d + a, j * d + a)]).sum()))
}

/// L_{a,b} ∘ L_{p,q} = L_{ap+bq, aq+bp}
pub fn compose_params(ab: &RationalPoint2, pq: &RationalPoint2) -> RationalPoint2 {
    RationalPoint2::new(&ab.x * &pq.x + &ab.y * &pq.y, &ab.x * &pq.y + &ab.y * &pq.x)
}

/// Parameters (a,b) of the S⊗S̄ twirl of ρ.
pub fn state_params_of(rho: &ComplexMatrix, v: Option<&ComplexMatrix>) -> Result<(f64, f64)> {
    let n = tensor_dim(rho)?;
    if (rho.trace() - c64(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::NotUnitTrace);
    }
    let v = v_or_omega(v, n)?;
    let fv = local_conjugate(&v, &flip(n));
    let tf = fv.mul(rho).trace().re;
    let w = max_entangled(n);
    let rw = rho.mul(&ComplexMatrix::column_vector(&w)).column(0);
    let ww = inner(&w, &rw).re;
    let d = n as f64;
    let den = d * d - d - 2.0;
    Ok(((-1.0 + tf + (d * d - d) * ww) / den, (-1.0 + (d - 1.0) * tf + d * ww) / den))
}

/// Σᵢ Tr(Πᵢρ)/Tr(Πᵢ)·Πᵢ
pub fn twirl_analytic(rho: &ComplexMatrix, family: Family) -> Result<ComplexMatrix> {
    let n = tensor_dim(rho)?;
    let d = Dimension::new(n as u32).map_err(|_| Error::ShapeMismatch(format!("twirl needs even d >= 4, got {n}")))?;
    let ps = projections(d, family);
    let mut out = ComplexMatrix::zeros(n * n, n * n);
    for p in &ps {
        let w = p.mul(rho).trace() / p.trace().re;
        out = &out + &p.scale(w);
    }
    Ok(out)
}

/// k(ρ_A⊗I) − ρ − k(I⊗V)ρ^Γ(I⊗V)* and its smallest eigenvalue.
pub fn kbre_matrix(rho: &ComplexMatrix, k: usize, v: Option<&ComplexMatrix>) -> Result<(ComplexMatrix, f64)> {
    let n = tensor_dim(rho)?;
    if rho.hermitian_defect() > 1e-10 {
        return Err(Error::NotHermitian);
    }
    let v = v_or_omega(v, n)?;
    let kf = k as f64;
    let ra = partial_trace_second(rho)?.kron(&ComplexMatrix::identity(n));
    let g = local_conjugate(&v, &partial_transpose(rho)?);
    let m = &(&ra.scale_re(kf) - rho) - &g.scale_re(kf);
    let ev = m.min_eigenvalue()?;
    Ok((m, ev))
}

/// Unitary U with UᵀVU = Ω, by greedy pairing of u with its partner −V̄ū.
pub fn congruence_to_omega(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !is_skew_unitary(v, 1e-10) {
        return Err(Error::NotSkewUnitary);
    }
    let n = v.rows();
    let m = n / 2;
    let vbar = v.conj();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut us = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    let project = |x: &mut Vec<C64>, basis: &[Vec<C64>]| {
        for _ in 0..2 {
            for b in basis {
                let c = inner(b, x);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= c * bi;
                }
            }
        }
    };
    for _ in 0..m {
        let mut best: Option<Vec<C64>> = None;
        let mut best_norm = -1.0;
        for i in 0..n {
            let mut e = vec![c64(0.0, 0.0); n];
            e[i] = c64(1.0, 0.0);
            project(&mut e, &basis);
            let nr = norm(&e);
            if nr > best_norm {
                best_norm = nr;
                best = Some(e);
            }
        }
        let mut u = best.unwrap_or_default();
        let nr = norm(&u);
        u.iter_mut().for_each(|z| *z /= nr);
        let ubar: Vec<C64> = u.iter().map(|z| z.conj()).collect();
        let w: Vec<C64> = vbar.mul(&ComplexMatrix::column_vector(&ubar)).column(0).iter().map(|z| -z).collect();
        basis.push(u.clone());
        basis.push(w.clone());
        us.push(u);
        ws.push(w);
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for (j, c) in us.iter().chain(ws.iter()).enumerate() {
        out.set_column(j, c);
    }
    let res = out.transpose().mul(v).mul(&out).max_abs_diff(&omega(n));
    if res > 1e-10 {
        return Err(Error::NotSkewUnitary);
    }
    Ok(out)
}
