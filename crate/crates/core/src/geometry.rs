//! Plane conics over exact rationals, pole–polar duality with respect to the
//! unit circle, the linear map α relating the map and state planes, and the
//! Schmidt-region ellipses obtained as α-pullbacks of dual hyperbolas.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{int, rat, RationalPoint2, Q};
use crate::regions::f_poly;
use crate::{Dimension, Error, KIndex, Result};

/// `a x² + b xy + c y² + d x + e y + f`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConicCoeffs {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
    pub e: Q,
    pub f: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConicKind {
    Ellipse,
    Hyperbola,
    Parabola,
    Degenerate,
}

/// Symmetric matrix `[[A,B/2,D/2],[B/2,C,E/2],[D/2,E/2,F]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousConic {
    pub q: [[Q; 3]; 3],
}

/// `n1 x + n2 y + c`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub n1: Q,
    pub n2: Q,
    pub c: Q,
}

impl ConicCoeffs {
    pub fn new(a: Q, b: Q, c: Q, d: Q, e: Q, f: Q) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub fn from_ints(v: [i64; 6]) -> Self {
        Self::new(int(v[0]), int(v[1]), int(v[2]), int(v[3]), int(v[4]), int(v[5]))
    }

    pub fn coeffs(&self) -> [&Q; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }

    pub fn eval(&self, p: &RationalPoint2) -> Q {
        let (x, y) = (&p.x, &p.y);
        &self.a * x * x + &self.b * x * y + &self.c * y * y + &self.d * x + &self.e * y + &self.f
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let [a, b, c, d, e, f] = self.to_f64();
        a * x * x + b * x * y + c * y * y + d * x + e * y + f
    }

    pub fn to_f64(&self) -> [f64; 6] {
        self.coeffs().map(crate::rational::to_f64)
    }

    pub fn gradient_f64(&self, x: f64, y: f64) -> (f64, f64) {
        let [a, b, c, d, e, _] = self.to_f64();
        (2.0 * a * x + b * y + d, b * x + 2.0 * c * y + e)
    }

    pub fn homogeneous(&self) -> HomogeneousConic {
        let h = |v: &Q| v / int(2);
        HomogeneousConic {
            q: [
                [self.a.clone(), h(&self.b), h(&self.d)],
                [h(&self.b), self.c.clone(), h(&self.e)],
                [h(&self.d), h(&self.e), self.f.clone()],
            ],
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        let [a, b, c, d, e, f] = self.coeffs().map(|v| v * s);
        Self::new(a, b, c, d, e, f)
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        let cs = self.coeffs();
        if cs.iter().all(|v| v.is_zero()) {
            return self.clone();
        }
        let mut l = num_bigint::BigInt::one();
        for v in cs {
            l = l.lcm(v.denom());
        }
        let nums: Vec<_> = cs.iter().map(|v| (*v * Q::from_integer(l.clone())).to_integer()).collect();
        let mut g = num_bigint::BigInt::zero();
        for n in &nums {
            g = g.gcd(n);
        }
        let s = Q::new(l, g);
        self.scale(&s)
    }

    /// `Some(λ)` with `other = λ·self`.
    pub fn ratio_to(&self, other: &Self) -> Option<Q> {
        let (s, o) = (self.coeffs(), other.coeffs());
        let i = s.iter().position(|v| !v.is_zero())?;
        let lambda = o[i] / s[i];
        s.iter().zip(o.iter()).all(|(a, b)| *a * &lambda == **b).then_some(lambda)
    }

    /// Equal up to a positive factor.
    pub fn positively_proportional(&self, other: &Self) -> bool {
        self.ratio_to(other).map_or(false, |l| l.is_positive())
    }

    /// Substitute a linear map: returns `(x,y) ↦ self(m·(x,y))`.
    pub fn pullback(&self, m: &[[Q; 2]; 2]) -> Self {
        let [[l11, l12], [l21, l22]] = m;
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let two = int(2);
        Self::new(
            a * l11 * l11 + b * l11 * l21 + c * l21 * l21,
            &two * a * l11 * l12 + b * (l11 * l22 + l12 * l21) + &two * c * l21 * l22,
            a * l12 * l12 + b * l12 * l22 + c * l22 * l22,
            &self.d * l11 + &self.e * l21,
            &self.d * l12 + &self.e * l22,
            self.f.clone(),
        )
    }

    /// Gradient-zero point, when unique.
    pub fn center(&self) -> Option<RationalPoint2> {
        let det = int(4) * &self.a * &self.c - &self.b * &self.b;
        if det.is_zero() {
            return None;
        }
        let x = (&self.b * &self.e - int(2) * &self.c * &self.d) / &det;
        let y = (&self.b * &self.d - int(2) * &self.a * &self.e) / &det;
        Some(RationalPoint2::new(x, y))
    }
}

impl fmt::Display for ConicCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})x^2 + ({})xy + ({})y^2 + ({})x + ({})y + ({})",
            self.a, self.b, self.c, self.d, self.e, self.f
        )
    }
}

impl HomogeneousConic {
    pub fn det(&self) -> Q {
        let m = &self.q;
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    pub fn adjugate(&self) -> HomogeneousConic {
        let m = &self.q;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
        let minors = [(1, 2), (0, 2), (0, 1)];
        let mut out: [[Q; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let (r0, r1) = minors[j];
                let (c0, c1) = minors[i];
                let v = cof(r0, r1, c0, c1);
                out[i][j] = if (i + j) % 2 == 0 { v } else { -v };
            }
        }
        HomogeneousConic { q: out }
    }

    pub fn coeffs(&self) -> ConicCoeffs {
        let m = &self.q;
        let two = int(2);
        ConicCoeffs::new(
            m[0][0].clone(),
            &two * &m[0][1],
            m[1][1].clone(),
            &two * &m[0][2],
            &two * &m[1][2],
            m[2][2].clone(),
        )
    }
}

impl LinearForm {
    pub fn new(n1: Q, n2: Q, c: Q) -> Self {
        Self { n1, n2, c }
    }

    pub fn eval(&self, p: &RationalPoint2) -> Q {
        &self.n1 * &p.x + &self.n2 * &p.y + &self.c
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        use crate::rational::to_f64;
        to_f64(&self.n1) * x + to_f64(&self.n2) * y + to_f64(&self.c)
    }

    /// Same zero set.
    pub fn same_line(&self, o: &Self) -> bool {
        &self.n1 * &o.n2 == &self.n2 * &o.n1 && &self.n1 * &o.c == &self.c * &o.n1 && &self.n2 * &o.c == &self.c * &o.n2
    }

    /// Intersection point of two non-parallel lines.
    pub fn intersect(&self, o: &Self) -> Option<RationalPoint2> {
        let det = &self.n1 * &o.n2 - &self.n2 * &o.n1;
        if det.is_zero() {
            return None;
        }
        let x = (&self.n2 * &o.c - &self.c * &o.n2) / &det;
        let y = (&self.c * &o.n1 - &self.n1 * &o.c) / &det;
        Some(RationalPoint2::new(x, y))
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.n1, -&self.n2, -&self.c)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})x + ({})y + ({})", self.n1, self.n2, self.c)
    }
}

pub fn conic_classify(c: &ConicCoeffs) -> ConicKind {
    if c.homogeneous().det().is_zero() {
        return ConicKind::Degenerate;
    }
    let disc = &c.b * &c.b - int(4) * &c.a * &c.c;
    if disc.is_negative() {
        ConicKind::Ellipse
    } else if disc.is_positive() {
        ConicKind::Hyperbola
    } else {
        ConicKind::Parabola
    }
}

pub fn tangent_line(c: &ConicCoeffs, pt: &RationalPoint2) -> Result<LinearForm> {
    if !c.eval(pt).is_zero() {
        return Err(Error::PointNotOnConic);
    }
    let (p, q) = (&pt.x, &pt.y);
    let two = int(2);
    let l = LinearForm::new(
        &two * &c.a * p + &c.b * q + &c.d,
        &two * &c.c * q + &c.b * p + &c.e,
        &c.d * p + &c.e * q + &two * &c.f,
    );
    if l.n1.is_zero() && l.n2.is_zero() {
        return Err(Error::SingularTangent);
    }
    Ok(l)
}

/// Pole of a line with respect to the unit circle: the point (p,q) with the
/// line equal to `px + qy = 1`.
pub fn pole(l: &LinearForm) -> Result<RationalPoint2> {
    if l.c.is_zero() {
        return Err(Error::LineThroughOrigin);
    }
    Ok(RationalPoint2::new(-&l.n1 / &l.c, -&l.n2 / &l.c))
}

/// `px + qy − 1`
pub fn polar(pt: &RationalPoint2) -> Result<LinearForm> {
    if pt.is_origin() {
        return Err(Error::OriginHasNoPolar);
    }
    Ok(LinearForm::new(pt.x.clone(), pt.y.clone(), -Q::one()))
}

pub fn alpha_matrix(d: Dimension) -> [[Q; 2]; 2] {
    let s = -(d.q() + int(1));
    let dm1 = d.q() - int(1);
    [[&s * &dm1, -&s], [-&s, &s * &dm1]]
}

/// α(x,y) = −(d+1)·((d−1)x − y, −x + (d−1)y)
pub fn alpha(d: Dimension, pt: &RationalPoint2) -> RationalPoint2 {
    let [[a, b], [c, e]] = alpha_matrix(d);
    RationalPoint2::new(&a * &pt.x + &b * &pt.y, &c * &pt.x + &e * &pt.y)
}

pub fn alpha_inv(d: Dimension, pt: &RationalPoint2) -> RationalPoint2 {
    let [[a, b], [c, e]] = alpha_matrix(d);
    let det = &a * &e - &b * &c;
    RationalPoint2::new((&e * &pt.x - &b * &pt.y) / &det, (&a * &pt.y - &c * &pt.x) / &det)
}

/// Locus of poles of the tangent lines: `(x,y,−1)·adj(Q)·(x,y,−1)ᵀ = 0`.
/// The adjugate is divided by det(Q), so the dual of the dual is `c` itself.
pub fn dual_conic(c: &ConicCoeffs) -> Result<ConicCoeffs> {
    let h = c.homogeneous();
    let det = h.det();
    if det.is_zero() {
        return Err(Error::DegenerateConic);
    }
    let m = h.adjugate().q.map(|r| r.map(|v| v / &det));
    let two = int(2);
    Ok(ConicCoeffs::new(
        m[0][0].clone(),
        &two * &m[0][1],
        m[1][1].clone(),
        -&two * &m[0][2],
        -&two * &m[1][2],
        m[2][2].clone(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllipseId {
    G1,
    G2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineId {
    L1,
    L2,
}

/// Conic parameter u of g1 (u = k−1) or g2 (u = 2k−d).
pub fn ellipse_parameter(d: Dimension, k: KIndex, which: EllipseId) -> Q {
    match which {
        EllipseId::G1 => int(k.i() - 1),
        EllipseId::G2 => int(2 * k.i() - d.i()),
    }
}

/// α-pullback of the dual of f_u, with coprime integer coefficients and
/// negative at its center.
pub fn g_poly_u(d: Dimension, k: KIndex, u: &Q) -> Result<ConicCoeffs> {
    if u.is_zero() || *u == int(k.i()) {
        return Err(Error::DegenerateConic);
    }
    if u.is_negative() || *u > int(k.i()) {
        return Err(Error::BadConicParameter(format!("{u}")));
    }
    let f = f_poly(d, k, u);
    let g = dual_conic(&f)?.pullback(&alpha_matrix(d)).primitive();
    let center = g.center().ok_or(Error::DegenerateConic)?;
    let v = g.eval(&center);
    if v.is_zero() {
        return Err(Error::DegenerateConic);
    }
    Ok(if v.is_positive() { g.scale(&int(-1)) } else { g })
}

pub fn g_poly(d: Dimension, k: KIndex, which: EllipseId) -> Result<ConicCoeffs> {
    g_poly_u(d, k, &ellipse_parameter(d, k, which))
}

pub fn line_l(d: Dimension, k: KIndex, which: LineId) -> LinearForm {
    let (d, k) = (d.i(), k.i());
    match which {
        LineId::L1 => LinearForm::new(int(k + d - 1), int(-(k * d - k + 1)), rat(-(2 * k * d + k - d - 1), d + 1)),
        LineId::L2 => LinearForm::new(int(3 * d - k - 3), int(k * d - k - 3), rat(-(d * d + k * d - k - 3), d + 1)),
    }
}

/// Point where `l` touches `c`, if the restriction of `c` to `l` has an exact
/// double root.
pub fn tangency(c: &ConicCoeffs, l: &LinearForm) -> Option<RationalPoint2> {
    let (dx, dy) = (l.n2.clone(), -l.n1.clone());
    let p0 = if !l.n1.is_zero() {
        RationalPoint2::new(-&l.c / &l.n1, Q::zero())
    } else {
        RationalPoint2::new(Q::zero(), -&l.c / &l.n2)
    };
    let two = int(2);
    let qa = &c.a * &dx * &dx + &c.b * &dx * &dy + &c.c * &dy * &dy;
    let qb = &two * &c.a * &p0.x * &dx + &c.b * (&p0.x * &dy + &p0.y * &dx) + &two * &c.c * &p0.y * &dy + &c.d * &dx + &c.e * &dy;
    let qc = c.eval(&p0);
    if qa.is_zero() || !(&qb * &qb - int(4) * &qa * &qc).is_zero() {
        return None;
    }
    let t = -qb / (two * qa);
    Some(RationalPoint2::new(&p0.x + &t * &dx, &p0.y + &t * &dy))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableKind {
    General(Q),
    KMinusOne,
    TwoKMinusD,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub source_pq: RationalPoint2,
    pub image_ab: RationalPoint2,
    pub tangent: LinearForm,
}

fn p(xn: i64, xd: i64, yn: i64, yd: i64) -> RationalPoint2 {
    RationalPoint2::frac(xn, xd, yn, yd)
}

/// Tangent at the image of (p,q): `(p(1−d)+q)x + ((1−d)q+p)y = 1/(d+1)`.
pub fn image_tangent(d: Dimension, pq: &RationalPoint2) -> LinearForm {
    let dm = int(1) - d.q();
    LinearForm::new(&pq.x * &dm + &pq.y, &dm * &pq.y + &pq.x, -rat(1, d.i() + 1))
}

fn general_rows(d: Dimension, k: KIndex, u: &Q) -> Vec<(RationalPoint2, RationalPoint2, LinearForm)> {
    let (di, ki) = (d.i(), k.i());
    let dq = d.q();
    let kq = int(ki);
    let den = int(d.dd());
    let kden = &kq * &den;
    let one = int(1);
    let inv = rat(1, di + 1);
    let pt = |x: Q, y: Q| RationalPoint2::new(x, y);
    vec_rows([
        (
            p(1, 1, 0, 1),
            pt((int(-2 * ki) + u) / &kden, (int(-ki * di) + &dq * u - u) / &kden),
            LinearForm::new(&one - &dq, one.clone(), -inv.clone()),
        ),
        (
            p(0, 1, 1, 1),
            pt((int(ki * di - 1 - ki) - &dq * u + u) / &den, (int(ki - 1) - u) / &den),
            LinearForm::new(one.clone(), &one - &dq, -inv.clone()),
        ),
        (
            p(0, 1, 1, di + 1),
            pt((int(-2) + &dq * u - u) / &den, (-&dq + u) / &den),
            LinearForm::new(one.clone(), &one - &dq, -one.clone()),
        ),
        (
            p(-1, ki * di - 1, 0, 1),
            pt((int(ki * ki * di - ki - ki * ki) - u) / &kden, (int(ki * ki - ki) - &dq * u + u) / &kden),
            LinearForm::new(&one - &dq, one.clone(), rat(ki * di - 1, di + 1)),
        ),
    ])
}

fn vec_rows<const N: usize>(a: [(RationalPoint2, RationalPoint2, LinearForm); N]) -> Vec<(RationalPoint2, RationalPoint2, LinearForm)> {
    a.into_iter().collect()
}

fn k_minus_one_rows(d: Dimension, k: KIndex) -> Vec<(RationalPoint2, RationalPoint2, LinearForm)> {
    let (d_, k) = (d.i(), k.i());
    let dd = d.dd();
    let one = int(1);
    let dm = int(1 - d_);
    let inv = rat(1, d_ + 1);
    vec_rows([
        (p(1, 1, 0, 1), p(-k - 1, k * dd, -d_ - k + 1, k * dd), LinearForm::new(dm.clone(), one.clone(), -inv.clone())),
        (p(0, 1, 1, 1), p(1, d_ + 1, 0, 1), LinearForm::new(one.clone(), dm.clone(), -inv.clone())),
        (p(0, 1, 1, d_ + 1), p(k * d_ - d_ - k - 1, dd, -d_ + k - 1, dd), LinearForm::new(one.clone(), dm.clone(), -one.clone())),
        (
            p(-1, k * d_ - 1, 0, 1),
            p(k * k * d_ - 2 * k - k * k + 1, k * dd, (k - 1) * (k - d_ + 1), k * dd),
            LinearForm::new(dm, one, rat(k * d_ - 1, d_ + 1)),
        ),
    ])
}

fn two_k_minus_d_rows(d: Dimension, k: KIndex) -> Vec<(RationalPoint2, RationalPoint2, LinearForm)> {
    let (d_, k) = (d.i(), k.i());
    let dd = d.dd();
    let one = int(1);
    let dm = int(1 - d_);
    let inv = rat(1, d_ + 1);
    vec_rows([
        (p(1, 1, 0, 1), p(-d_, k * dd, k * d_ - d_ * d_ - 2 * k + d_, k * dd), LinearForm::new(dm.clone(), one.clone(), -inv.clone())),
        (
            p(0, 1, 1, 1),
            p(-k * d_ + d_ * d_ + k - d_ - 1, dd, d_ - k - 1, dd),
            LinearForm::new(one.clone(), dm.clone(), -inv.clone()),
        ),
        (
            p(0, 1, 1, d_ + 1),
            p(-2 + 2 * k * d_ - d_ * d_ - 2 * k + d_, dd, 2 * k - 2 * d_, dd),
            LinearForm::new(one.clone(), dm.clone(), -one.clone()),
        ),
        (
            p(-1, k * d_ - 1, 0, 1),
            p(k * k * d_ - 3 * k - k * k + d_, k * dd, (k - d_) * (k - d_ + 1), k * dd),
            LinearForm::new(dm, one.clone(), rat(k * d_ - 1, d_ + 1)),
        ),
        (
            p(-2, dd, -d_, dd),
            p(d_, 3 * d_ - 2 * k, 2 * d_ - 2 * k, (d_ + 1) * (3 * d_ - 2 * k)),
            LinearForm::new(one, int(1 + d_), int(-1)),
        ),
    ])
}

/// Rows of the canonical-point tables, each checked against the
/// tangent → pole → α⁻¹ construction and the tangent at the image.
pub fn table_rows(d: Dimension, k: KIndex, kind: &TableKind) -> Result<Vec<TableRow>> {
    let (u, closed, general) = match kind {
        TableKind::General(u) => (u.clone(), general_rows(d, k, u), None),
        TableKind::KMinusOne => {
            let u = int(k.i() - 1);
            let g = general_rows(d, k, &u);
            (u, k_minus_one_rows(d, k), Some(g))
        }
        TableKind::TwoKMinusD => {
            if 2 * k.i() <= d.i() || k.i() >= d.i() {
                return Err(Error::BadConicParameter(format!("u = 2k - d rows need d/2 < k < d, got k = {k}")));
            }
            let u = int(2 * k.i() - d.i());
            let g = general_rows(d, k, &u);
            (u, two_k_minus_d_rows(d, k), Some(g))
        }
    };
    let f = f_poly(d, k, &u);
    let g = g_poly_u(d, k, &u)?;
    let mismatch = |what: &str, pq: &RationalPoint2| Err(Error::TableMismatch(format!("{what} at source {pq}, d={d}, k={k}, u={u}")));
    let mut rows = Vec::with_capacity(closed.len());
    for (i, (pq, ab, tangent)) in closed.into_iter().enumerate() {
        if let Some(g1) = &general {
            if let Some((gpq, gab, gt)) = g1.get(i) {
                if *gpq != pq || *gab != ab || !gt.same_line(&tangent) {
                    return mismatch("table differs from the general table", &pq);
                }
            }
        }
        if !f.eval(&pq).is_zero() {
            return mismatch("source not on f_u", &pq);
        }
        let via = alpha_inv(d, &pole(&tangent_line(&f, &pq)?)?);
        if via != ab {
            return mismatch("pole construction disagrees", &pq);
        }
        if !g.eval(&ab).is_zero() {
            return mismatch("image not on g", &pq);
        }
        let tg = tangent_line(&g, &ab)?;
        if !tg.same_line(&tangent) || !tg.same_line(&image_tangent(d, &pq)) {
            return mismatch("tangent at image disagrees", &pq);
        }
        rows.push(TableRow { source_pq: pq, image_ab: ab, tangent });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipseTangency {
    pub u: Q,
    pub conic: ConicCoeffs,
    /// Touch point per side, `None` when the side is not tangent.
    pub touches: Vec<Option<RationalPoint2>>,
}

impl EllipseTangency {
    pub fn all_tangent(&self) -> bool {
        self.touches.iter().all(Option::is_some)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parallelogram {
    pub vertices: [RationalPoint2; 4],
    pub sides: [LinearForm; 4],
    pub tangencies: Vec<EllipseTangency>,
}

pub fn parallelogram_sides(d: Dimension, k: KIndex) -> [LinearForm; 4] {
    let (d, k) = (d.i(), k.i());
    let inv = rat(-1, d + 1);
    [
        LinearForm::new(int(1), int(1 - d), inv.clone()),
        LinearForm::new(int(1), int(1 - d), int(-1)),
        LinearForm::new(int(1 - d), int(1), inv),
        LinearForm::new(int(1 - d), int(1), rat(k * d - 1, d + 1)),
    ]
}

pub fn ellipse_tangency(d: Dimension, k: KIndex, u: &Q) -> Result<EllipseTangency> {
    let conic = g_poly_u(d, k, u)?;
    let touches = parallelogram_sides(d, k).iter().map(|s| tangency(&conic, s)).collect();
    Ok(EllipseTangency { u: u.clone(), conic, touches })
}

/// The parallelogram circumscribing every g_u ellipse, with tangency checks
/// for u = k−1 and u = 2k−d whenever these lie in (0,k).
pub fn parallelogram(d: Dimension, k: KIndex) -> Result<Parallelogram> {
    let (di, ki) = (d.i(), k.i());
    let dd = d.dd();
    let vertices = [
        p(-2, dd, -di, dd),
        p(-1, dd, -1, dd),
        p(ki * di - ki - 1, dd, ki - 1, dd),
        p(ki * di - ki - 2, dd, -di + ki, dd),
    ];
    let mut tangencies = Vec::new();
    for u in [ki - 1, 2 * ki - di] {
        if u > 0 && u < ki && tangencies.iter().all(|t: &EllipseTangency| t.u != int(u)) {
            tangencies.push(ellipse_tangency(d, k, &int(u))?);
        }
    }
    Ok(Parallelogram { vertices, sides: parallelogram_sides(d, k), tangencies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dk(d: u32, k: u32) -> (Dimension, KIndex) {
        let d = Dimension::new(d).unwrap();
        (d, d.k(k).unwrap())
    }

    #[test]
    fn circle_basics() {
        let circle = ConicCoeffs::from_ints([1, 0, 1, 0, 0, -1]);
        assert_eq!(conic_classify(&circle), ConicKind::Ellipse);
        let t = tangent_line(&circle, &RationalPoint2::ints(1, 0)).unwrap();
        assert_eq!(t, LinearForm::new(int(2), int(0), int(-2)));
        assert!(circle.positively_proportional(&dual_conic(&circle).unwrap()));
        assert_eq!(tangent_line(&circle, &RationalPoint2::ints(1, 1)), Err(Error::PointNotOnConic));
        let x1 = LinearForm::new(int(1), int(0), int(-1));
        assert_eq!(pole(&x1).unwrap(), RationalPoint2::ints(1, 0));
        assert!(polar(&RationalPoint2::ints(1, 0)).unwrap().same_line(&x1));
        assert_eq!(pole(&LinearForm::new(int(1), int(1), int(0))), Err(Error::LineThroughOrigin));
        assert_eq!(polar(&RationalPoint2::origin()), Err(Error::OriginHasNoPolar));
    }

    #[test]
    fn singular_tangent() {
        // xy = 0 is singular at the origin.
        let c = ConicCoeffs::from_ints([0, 1, 0, 0, 0, 0]);
        assert_eq!(tangent_line(&c, &RationalPoint2::origin()), Err(Error::SingularTangent));
    }

    #[test]
    fn alpha_values() {
        let (d, _) = dk(4, 1);
        assert_eq!(alpha(d, &RationalPoint2::ints(1, 0)), RationalPoint2::ints(-15, 5));
        assert_eq!(alpha(d, &RationalPoint2::origin()), RationalPoint2::origin());
    }

    #[test]
    fn adjugate_of_adjugate() {
        let (d, k) = dk(4, 3);
        let f = f_poly(d, k, &int(2));
        let dd = dual_conic(&dual_conic(&f).unwrap()).unwrap();
        assert_eq!(f, dd);
    }

    #[test]
    fn g1_examples() {
        let (d, k) = dk(4, 3);
        let g1 = g_poly(d, k, EllipseId::G1).unwrap();
        assert_eq!(conic_classify(&g1), ConicKind::Ellipse);
        for pt in [p(1, 5, 0, 1), p(2, 5, -1, 5), p(-2, 15, -1, 5)] {
            assert!(g1.eval(&pt).is_zero(), "{pt}");
        }
        assert!(g1.eval(&g1.center().unwrap()).is_negative());
        let g2 = g_poly(d, k, EllipseId::G2).unwrap();
        assert!(g1.positively_proportional(&g2));
        let (d, k) = dk(6, 4);
        let g1 = g_poly(d, k, EllipseId::G1).unwrap();
        let g2 = g_poly(d, k, EllipseId::G2).unwrap();
        assert!(g1.ratio_to(&g2).is_none());
    }

    #[test]
    fn g_degenerate_parameters() {
        let (d, k) = dk(6, 3);
        assert_eq!(g_poly_u(d, k, &int(0)), Err(Error::DegenerateConic));
        assert_eq!(g_poly_u(d, k, &int(3)), Err(Error::DegenerateConic));
        // k = 1 has u = k − 1 = 0
        let (d, k) = dk(6, 1);
        assert_eq!(g_poly(d, k, EllipseId::G1), Err(Error::DegenerateConic));
    }

    #[test]
    fn lines() {
        let (d, k) = dk(6, 3);
        let l1 = line_l(d, k, LineId::L1);
        assert!(l1.eval(&p(2, 7, -1, 7)).is_zero());
        assert_eq!(l1.eval(&p(1, 8, 1, 8)), int(1) - int(2) - rat(32, 7));
        let (d, k) = dk(6, 4);
        assert!(line_l(d, k, LineId::L2).eval(&p(3, 5, 2, 35)).is_zero());
    }

    #[test]
    fn table_examples() {
        let (d, k) = dk(8, 3);
        let rows = table_rows(d, k, &TableKind::KMinusOne).unwrap();
        let r = &rows[1];
        assert_eq!(r.source_pq, RationalPoint2::ints(0, 1));
        assert_eq!(r.image_ab, p(1, 9, 0, 1));
        assert!(r.tangent.same_line(&LinearForm::new(int(1), int(-7), rat(-1, 9))));

        let (d, k) = dk(6, 4);
        let rows = table_rows(d, k, &TableKind::TwoKMinusD).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[4].source_pq, p(-2, 28, -6, 28));
        assert_eq!(rows[4].image_ab, p(3, 5, 2, 35));
        assert!(rows[4].tangent.same_line(&LinearForm::new(int(1), int(7), int(-1))));

        let (d, k) = dk(6, 3);
        let rows = table_rows(d, k, &TableKind::General(int(2))).unwrap();
        assert_eq!(rows[1].image_ab, p(1, 7, 0, 1));
        assert!(table_rows(d, k, &TableKind::TwoKMinusD).is_err());
    }

    #[test]
    fn parallelogram_example() {
        let (d, k) = dk(4, 3);
        let pg = parallelogram(d, k).unwrap();
        assert_eq!(pg.vertices, [p(-1, 5, -2, 5), p(-1, 10, -1, 10), p(4, 5, 1, 5), p(7, 10, -1, 10)]);
        assert_eq!(pg.tangencies.len(), 1);
        assert!(pg.tangencies[0].all_tangent());
        // side x + (1−d)y = 1 touched exactly once
        assert!(pg.tangencies[0].touches[1].is_some());
    }

    #[test]
    fn general_rows_on_distinct_sides() {
        let (d, k) = dk(6, 3);
        let rows = table_rows(d, k, &TableKind::General(int(1))).unwrap();
        let t = ellipse_tangency(d, k, &int(1)).unwrap();
        let sides = parallelogram_sides(d, k);
        let mut hit = vec![];
        for r in &rows {
            let s = sides.iter().position(|s| s.eval(&r.image_ab).is_zero()).unwrap();
            assert_eq!(t.touches[s].as_ref(), Some(&r.image_ab));
            hit.push(s);
        }
        hit.sort();
        hit.dedup();
        assert_eq!(hit.len(), 4);
    }
}
