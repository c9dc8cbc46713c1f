//! Exact membership predicates for the positivity, decomposability,
//! PPT and Schmidt-number regions of the (p,q) / (a,b) plane.
//!
//! Map parameters (p,q) describe L_{p,q}(Z) = (1−p−q)Tr(Z)/d·I + pZ + qΩZᵀΩ*,
//! state parameters (a,b) describe the Choi matrix ρ_{a,b} of L_{a,b}.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::geometry::{g_poly, ConicCoeffs, EllipseId, LineId, LinearForm};
use crate::polygon::halfplane_polygon;
use crate::rational::{int, rat, RationalPoint2, Q};
use crate::{geometry, Dimension, Error, KIndex, Result};

/// f_u(x,y) = (1 − x − (1+d)y)(1 − (1−kd)x − y) + d²uxy, expanded.
pub fn f_poly(d: Dimension, k: KIndex, u: &Q) -> ConicCoeffs {
    let (d, k) = (d.i(), k.i());
    ConicCoeffs::new(
        int(1 - k * d),
        int(-k * d * d - k * d + d + 2) + int(d * d) * u,
        int(d + 1),
        int(k * d - 2),
        int(-d - 2),
        int(1),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionId {
    /// k-positive maps
    Pk(u32),
    /// decomposable maps
    D,
    /// PPT states
    T,
    /// states of Schmidt number at most k
    Sk(u32),
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionId::Pk(k) => write!(f, "P{k}"),
            RegionId::D => f.write_str("D"),
            RegionId::T => f.write_str("T"),
            RegionId::Sk(k) => write!(f, "S{k}"),
        }
    }
}

impl FromStr for RegionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedRegion(String::from(s));
        match s {
            "D" => Ok(RegionId::D),
            "T" => Ok(RegionId::T),
            _ => {
                let (tag, k) = s.split_at(1.min(s.len()));
                let k: u32 = k.parse().map_err(|_| bad())?;
                match tag {
                    "P" => Ok(RegionId::Pk(k)),
                    "S" => Ok(RegionId::Sk(k)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

fn lf(n1: Q, n2: Q, c: Q) -> LinearForm {
    LinearForm::new(n1, n2, c)
}

/// Half-planes `form ≤ 0` of the CP (= state) region.
pub fn p_d_forms(d: Dimension) -> Vec<LinearForm> {
    let di = d.i();
    vec![
        lf(int(1), int(1 - di), int(-1)),
        lf(int(1), int(1 + di), int(-1)),
        lf(int(1 - di), int(1), rat(-1, di + 1)),
    ]
}

pub fn p_1_forms(d: Dimension) -> Vec<LinearForm> {
    let di = d.i();
    vec![lf(int(1), int(1), int(-1)), lf(int(1), int(1 - di), int(-1)), lf(int(1 - di), int(1), int(-1))]
}

pub fn d_forms(d: Dimension) -> Vec<LinearForm> {
    let di = d.i();
    vec![
        lf(int(1), int(1), int(-1)),
        lf(int(-1), int(-1), rat(-(2 + di), d.dd())),
        lf(int(1), int(1 - di), int(-1)),
        lf(int(1 - di), int(1), int(-1)),
    ]
}

pub fn t_forms(d: Dimension) -> Vec<LinearForm> {
    let di = d.i();
    let inv = rat(-1, di + 1);
    vec![
        lf(int(1 - di), int(1), inv.clone()),
        lf(int(1), int(1 + di), int(-1)),
        lf(int(1), int(1 - di), inv),
        lf(int(1 + di), int(1), int(-1)),
    ]
}

fn s_1_forms(d: Dimension) -> Vec<LinearForm> {
    let di = d.i();
    let inv = rat(-1, di + 1);
    vec![lf(int(1 - di), int(1), inv.clone()), lf(int(1), int(1 - di), inv.clone()), lf(int(1), int(1), inv)]
}

/// Region as a conjunction of `linear ≤ 0`, `conic ≥ 0` and
/// `[line ≤ 0 or ellipse ≤ 0]` clauses.
#[derive(Clone, Debug)]
pub struct CompiledRegion {
    pub id: RegionId,
    pub linear: Vec<LinearForm>,
    pub conic_nonneg: Vec<ConicCoeffs>,
    pub cut_or_ellipse: Vec<(LinearForm, ConicCoeffs)>,
}

impl CompiledRegion {
    pub fn new(d: Dimension, id: RegionId) -> Result<Self> {
        let mut r = CompiledRegion { id, linear: Vec::new(), conic_nonneg: Vec::new(), cut_or_ellipse: Vec::new() };
        let kk = |k: u32| KIndex::new(d, k).map_err(|_| Error::UnsupportedRegion(id.to_string()));
        let di = d.i();
        match id {
            RegionId::D => r.linear = d_forms(d),
            RegionId::T => r.linear = t_forms(d),
            RegionId::Pk(k) => {
                let k = kk(k)?;
                let ki = k.i();
                if ki == 1 {
                    r.linear = p_1_forms(d);
                } else if ki == di {
                    r.linear = p_d_forms(d);
                } else {
                    r.linear.push(lf(int(1), int(1 + di), int(-1)));
                    r.linear.push(lf(int(1), int(1 - di), int(-1)));
                    if k.is_even() {
                        r.linear.push(lf(int(1 - ki * di), int(1 + di), int(-1)));
                    } else {
                        r.conic_nonneg.push(f_poly(d, k, &int(ki - 1)));
                    }
                    if 2 * ki <= di {
                        r.linear.push(lf(int(1 - ki * di), int(1), int(-1)));
                    } else {
                        r.conic_nonneg.push(f_poly(d, k, &int(2 * ki - di)));
                    }
                }
            }
            RegionId::Sk(k) => {
                let k = kk(k)?;
                let ki = k.i();
                r.linear = p_d_forms(d);
                if ki == 1 {
                    r.linear.extend(s_1_forms(d));
                } else if ki < di {
                    let inv = rat(1, di + 1);
                    r.linear.push(lf(int(1 - di), int(1), -inv.clone()));
                    r.linear.push(lf(int(di - 1), int(-1), -rat(ki * di - 1, di + 1)));
                    r.linear.push(lf(int(1), int(1 - di), int(-1)));
                    if 2 * ki <= di {
                        r.linear.push(lf(rat(di - ki - 1, ki * di - ki - 1), int(1), -inv));
                    } else {
                        r.linear.push(lf(int(1), int(1 + di), int(-1)));
                        let g2 = g_poly(d, k, EllipseId::G2)?;
                        r.cut_or_ellipse.push((geometry::line_l(d, k, LineId::L2), g2));
                    }
                    if !k.is_even() {
                        let g1 = g_poly(d, k, EllipseId::G1)?;
                        r.cut_or_ellipse.push((geometry::line_l(d, k, LineId::L1), g1));
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn contains(&self, pt: &RationalPoint2) -> bool {
        self.linear.iter().all(|l| !l.eval(pt).is_positive())
            && self.conic_nonneg.iter().all(|f| !f.eval(pt).is_negative())
            && self.cut_or_ellipse.iter().all(|(l, g)| !l.eval(pt).is_positive() || !g.eval(pt).is_positive())
    }
}

/// CP region; equivalently ρ_{p,q} is a state.
pub fn in_p_d(d: Dimension, pt: &RationalPoint2) -> bool {
    p_d_forms(d).iter().all(|l| !l.eval(pt).is_positive())
}

pub fn in_p_k(d: Dimension, k: KIndex, pt: &RationalPoint2) -> bool {
    CompiledRegion::new(d, RegionId::Pk(k.get())).map_or(false, |r| r.contains(pt))
}

pub fn in_d(d: Dimension, pt: &RationalPoint2) -> bool {
    d_forms(d).iter().all(|l| !l.eval(pt).is_positive())
}

pub fn in_t(d: Dimension, pt: &RationalPoint2) -> bool {
    t_forms(d).iter().all(|l| !l.eval(pt).is_positive())
}

/// Schmidt number of ρ_{a,b} at most k. False for non-states.
pub fn in_s_k(d: Dimension, k: KIndex, pt: &RationalPoint2) -> bool {
    CompiledRegion::new(d, RegionId::Sk(k.get())).map_or(false, |r| r.contains(pt))
}

pub fn schmidt_number(d: Dimension, pt: &RationalPoint2) -> Result<u32> {
    if !in_p_d(d, pt) {
        return Err(Error::NotAState);
    }
    for k in d.ks() {
        if in_s_k(d, k, pt) {
            return Ok(k.get());
        }
    }
    Ok(d.get())
}

/// Largest k with L_{p,q} k-positive, 0 if not positive.
pub fn max_kpos(d: Dimension, pt: &RationalPoint2) -> u32 {
    d.ks().filter(|&k| in_p_k(d, k, pt)).map(KIndex::get).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub is_state: bool,
    pub max_kpos: u32,
    pub decomposable: bool,
    pub ppt: bool,
    pub schmidt_number: Option<u32>,
    /// Schmidt number of the partial transpose, which is ρ_{b,a} up to a
    /// local unitary; present when the point is PPT.
    pub schmidt_number_gamma: Option<u32>,
}

pub fn classify(d: Dimension, pt: &RationalPoint2) -> RegionReport {
    let is_state = in_p_d(d, pt);
    let ppt = in_t(d, pt);
    RegionReport {
        is_state,
        max_kpos: max_kpos(d, pt),
        decomposable: in_d(d, pt),
        ppt,
        schmidt_number: schmidt_number(d, pt).ok(),
        schmidt_number_gamma: if ppt { schmidt_number(d, &pt.swap()).ok() } else { None },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSegment {
    pub conic: ConicCoeffs,
    pub start: RationalPoint2,
    pub end: RationalPoint2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeSet {
    pub vertices: Vec<RationalPoint2>,
    pub curve_segments: Vec<CurveSegment>,
}

impl CurveSegment {
    /// Polar angles of the endpoints about the origin, start < end.
    pub fn angle_range(&self) -> (f64, f64) {
        let (x0, y0) = self.start.to_f64();
        let (x1, y1) = self.end.to_f64();
        let t0 = libm::atan2(y0, x0);
        let mut t1 = libm::atan2(y1, x1);
        if t1 <= t0 {
            t1 += 2.0 * core::f64::consts::PI;
        }
        (t0, t1)
    }

    /// Point of the arc on the ray at angle θ.
    pub fn point_at(&self, theta: f64) -> Option<(f64, f64)> {
        ray_root(&self.conic, theta, RayRoot::SmallestPositive).map(|r| (r * libm::cos(theta), r * libm::sin(theta)))
    }
}

fn pt(xn: i64, xd: i64, yn: i64, yd: i64) -> RationalPoint2 {
    RationalPoint2::frac(xn, xd, yn, yd)
}

/// Vertices of ℙ_k in counterclockwise order from (1,0), and the hyperbola
/// arcs between consecutive vertices.
pub fn extreme_points(d: Dimension, k: KIndex) -> ExtremeSet {
    let (di, ki, dd) = (d.i(), k.i(), d.dd());
    if ki == 1 {
        let v = pt(-1, di - 2, -1, di - 2);
        return ExtremeSet { vertices: vec![pt(1, 1, 0, 1), pt(0, 1, 1, 1), v], curve_segments: vec![] };
    }
    let v4_far = pt(-2, dd, -di, dd);
    if ki == di {
        return ExtremeSet { vertices: vec![pt(1, 1, 0, 1), pt(0, 1, 1, di + 1), v4_far], curve_segments: vec![] };
    }
    let v2 = pt(0, 1, 1, di + 1);
    let v3 = pt(-1, ki * di - 1, 0, 1);
    let v4 = if 2 * ki <= di { pt(-1, ki * di - ki - 1, -ki, ki * di - ki - 1) } else { v4_far };
    let mut curve_segments = vec![];
    if !k.is_even() {
        curve_segments.push(CurveSegment { conic: f_poly(d, k, &int(ki - 1)), start: v2.clone(), end: v3.clone() });
    }
    if 2 * ki > di {
        curve_segments.push(CurveSegment { conic: f_poly(d, k, &int(2 * ki - di)), start: v3.clone(), end: v4.clone() });
    }
    ExtremeSet { vertices: vec![pt(1, 1, 0, 1), v2, v3, v4], curve_segments }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPoint {
    Exact(RationalPoint2),
    Float(f64, f64),
}

impl BoundaryPoint {
    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            BoundaryPoint::Exact(p) => p.to_f64(),
            BoundaryPoint::Float(x, y) => (*x, *y),
        }
    }
}

#[derive(Clone, Copy)]
enum RayRoot {
    SmallestPositive,
    Largest,
}

/// Root t > 0 of c(t·cosθ, t·sinθ) = 0.
fn ray_root(c: &ConicCoeffs, theta: f64, which: RayRoot) -> Option<f64> {
    let [a, b, cc, d, e, f] = c.to_f64();
    let (s, co) = (libm::sin(theta), libm::cos(theta));
    let qa = a * co * co + b * co * s + cc * s * s;
    let qb = d * co + e * s;
    let qc = f;
    let mut roots: Vec<f64> = Vec::new();
    if qa.abs() < 1e-300 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let sq = libm::sqrt(disc);
        let t = -0.5 * (qb + if qb >= 0.0 { sq } else { -sq });
        if t != 0.0 {
            roots.push(t / qa);
            roots.push(qc / t);
        } else {
            roots.push(0.0);
        }
    }
    let pos = roots.into_iter().filter(|t| *t > 0.0);
    match which {
        RayRoot::SmallestPositive => pos.min_by(f64::total_cmp),
        RayRoot::Largest => pos.max_by(f64::total_cmp),
    }
}

struct Edge {
    from: RationalPoint2,
    arc: Option<(ConicCoeffs, RayRoot)>,
}

fn sample_edges(edges: &[Edge], n: usize) -> Vec<BoundaryPoint> {
    let mut out = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        out.push(BoundaryPoint::Exact(e.from.clone()));
        if let Some((c, which)) = &e.arc {
            let to = &edges[(i + 1) % edges.len()].from;
            let (x0, y0) = e.from.to_f64();
            let (x1, y1) = to.to_f64();
            let t0 = libm::atan2(y0, x0);
            let mut t1 = libm::atan2(y1, x1);
            if t1 <= t0 {
                t1 += 2.0 * core::f64::consts::PI;
            }
            for j in 1..n.saturating_sub(1) {
                let th = t0 + (t1 - t0) * j as f64 / (n - 1) as f64;
                if let Some(r) = ray_root(c, th, *which) {
                    out.push(BoundaryPoint::Float(r * libm::cos(th), r * libm::sin(th)));
                }
            }
        }
    }
    out
}

/// Closed boundary polyline, counterclockwise from the lexicographically
/// largest vertex. Vertices are exact; each curved edge contributes `n − 2`
/// interior points at evenly spaced polar angles about the origin.
pub fn boundary_sample(d: Dimension, region: RegionId, n: usize) -> Result<Vec<BoundaryPoint>> {
    let compiled = CompiledRegion::new(d, region)?;
    let n = n.max(8);
    let edges: Vec<Edge> = match region {
        RegionId::Pk(k) => {
            let k = KIndex::new(d, k)?;
            let ext = extreme_points(d, k);
            ext.vertices
                .iter()
                .map(|v| Edge {
                    from: v.clone(),
                    arc: ext
                        .curve_segments
                        .iter()
                        .find(|s| s.start == *v)
                        .map(|s| (s.conic.clone(), RayRoot::SmallestPositive)),
                })
                .collect()
        }
        _ => {
            let mut forms = compiled.linear.clone();
            forms.extend(compiled.cut_or_ellipse.iter().map(|(l, _)| l.clone()));
            let verts = halfplane_polygon(&forms);
            let m = verts.len();
            (0..m)
                .map(|i| {
                    let (a, b) = (&verts[i], &verts[(i + 1) % m]);
                    let arc = compiled
                        .cut_or_ellipse
                        .iter()
                        .find(|(l, _)| l.eval(a).is_zero() && l.eval(b).is_zero())
                        .map(|(_, g)| (g.clone(), RayRoot::Largest));
                    Edge { from: a.clone(), arc }
                })
                .collect()
        }
    };
    Ok(sample_edges(&edges, n))
}

/// Dense boundary polyline for repeated distance queries.
#[derive(Clone, Debug)]
pub struct BoundaryPolyline {
    pub points: Vec<(f64, f64)>,
}

impl BoundaryPolyline {
    pub fn new(d: Dimension, region: RegionId, n: usize) -> Result<Self> {
        Ok(Self { points: boundary_sample(d, region, n)?.iter().map(BoundaryPoint::to_f64).collect() })
    }

    pub fn distance(&self, x: f64, y: f64) -> f64 {
        let m = self.points.len();
        let mut best = f64::INFINITY;
        for i in 0..m {
            let (ax, ay) = self.points[i];
            let (bx, by) = self.points[(i + 1) % m];
            let (dx, dy) = (bx - ax, by - ay);
            let len2 = dx * dx + dy * dy;
            let t = if len2 > 0.0 { (((x - ax) * dx + (y - ay) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
            let (px, py) = (ax + t * dx - x, ay + t * dy - y);
            best = best.min(libm::sqrt(px * px + py * py));
        }
        best
    }
}

/// Distance from a point to the region boundary, measured against a dense
/// boundary polyline.
pub fn boundary_distance(d: Dimension, region: RegionId, x: f64, y: f64) -> Result<f64> {
    Ok(BoundaryPolyline::new(d, region, 2048)?.distance(x, y))
}

impl RegionReport {
    pub fn summary(&self) -> String {
        format!(
            "state={} ppt={} decomposable={} max_kpos={} sn={:?} sn_gamma={:?}",
            self.is_state, self.ppt, self.decomposable, self.max_kpos, self.schmidt_number, self.schmidt_number_gamma
        )
    }
}
