//! Cross-checks between the exact region descriptions and dense numerics:
//! frame-based k-positivity, the reduced scalar inequality system, witness
//! pairings, Monte-Carlo twirls, composition scans and explicit states.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::geometry::{
    alpha_matrix, ellipse_parameter, g_poly, g_poly_u, line_l, parallelogram, table_rows, EllipseId, LineId, LinearForm,
    TableKind,
};
use crate::matrix::{inner, norm, ComplexMatrix, C64};
use crate::operators::{
    canonical_matrices, compose_params, omega, partial_transpose, rho_state, twirl_analytic, Family, MapParams,
};
use crate::polygon::halfplane_polygon;
use crate::rational::{int, rat, to_f64, RationalPoint2, Q};
use crate::regions::{
    d_forms, extreme_points, in_s_k, in_t, p_1_forms, p_d_forms, schmidt_number, t_forms, BoundaryPolyline,
    CompiledRegion, CurveSegment, RegionId,
};
use crate::sampling::{extremal_frames, haar_symplectic, mix_seed, pairing_bounds, random_frame, Frame, Sampler};
use crate::{Dimension, Error, KIndex, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Counterexample {
    Frame(Frame),
    Point(RationalPoint2),
    Pair(RationalPoint2, RationalPoint2),
    Matrix(ComplexMatrix),
    Note(String),
}

/// Outcome of a check. `min_margin` is the smallest slack seen over the
/// evaluated cases (negative once something failed).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    pub n_evaluations: u64,
    pub min_margin: f64,
}

impl Default for Verdict {
    fn default() -> Self {
        Self { passed: true, counterexample: None, n_evaluations: 0, min_margin: f64::INFINITY }
    }
}

impl Verdict {
    pub fn record(&mut self, margin: f64) {
        self.n_evaluations += 1;
        self.min_margin = self.min_margin.min(margin);
    }

    /// Marks failure; the first counterexample is kept.
    pub fn fail(&mut self, cx: Counterexample) {
        if self.passed {
            self.passed = false;
            self.counterexample = Some(cx);
        }
    }

    pub fn check(&mut self, ok: bool, margin: f64, cx: impl FnOnce() -> Counterexample) {
        self.record(margin);
        if !ok {
            self.fail(cx());
        }
    }

    pub fn merge(&mut self, other: Verdict) {
        self.n_evaluations += other.n_evaluations;
        self.min_margin = self.min_margin.min(other.min_margin);
        if let Some(cx) = other.counterexample {
            self.fail(cx);
        } else if !other.passed {
            self.passed = false;
        }
    }
}

fn note(s: String) -> Counterexample {
    Counterexample::Note(s)
}

// ---------------------------------------------------------------------------
// frame criterion for k-positivity

/// Σᵢⱼ |i⟩⟨j| ⊗ L(|vᵢ⟩⟨vⱼ|), a kd×kd matrix.
pub fn tomiyama_matrix(params: &MapParams, frame: &Frame) -> Result<ComplexMatrix> {
    let (d, k) = (frame.d, frame.k);
    let v = match &params.v {
        Some(v) if v.rows() == d && v.cols() == d => v.clone(),
        Some(v) => return Err(Error::ShapeMismatch(format!("V is {}x{}, frame lives in C^{d}", v.rows(), v.cols()))),
        None if d % 2 == 0 => omega(d),
        None => return Err(Error::ShapeMismatch(format!("no canonical Ω in odd dimension {d}"))),
    };
    let vs: Vec<Vec<C64>> = (0..k).map(|i| frame.vector(i)).collect();
    // w_i = V v̄_i, so V(|v_i⟩⟨v_j|)ᵀV* = |w_j⟩⟨w_i|
    let ws: Vec<Vec<C64>> = vs
        .iter()
        .map(|x| {
            let xb: Vec<C64> = x.iter().map(|z| z.conj()).collect();
            v.mul(&ComplexMatrix::column_vector(&xb)).column(0)
        })
        .collect();
    let (p, q) = (params.p, params.q);
    let a = (1.0 - p - q) / d as f64;
    let mut c = ComplexMatrix::zeros(k * d, k * d);
    for i in 0..k {
        for j in 0..k {
            let tr = inner(&vs[j], &vs[i]) * a;
            for r in 0..d {
                for s in 0..d {
                    let mut z = vs[i][r] * vs[j][s].conj() * p + ws[j][r] * ws[i][s].conj() * q;
                    if r == s {
                        z += tr;
                    }
                    c[(i * d + r, j * d + s)] = z;
                }
            }
        }
    }
    Ok(c)
}

/// The two extremal frames followed by `n` Haar frames with seeds
/// `mix_seed(seed, i)`.
#[derive(Clone, Debug)]
pub struct FrameSet {
    pub extremal: [Frame; 2],
    pub random: Vec<Frame>,
}

impl FrameSet {
    pub fn new(d: Dimension, k: KIndex, n: usize, seed: u64) -> Result<Self> {
        let e = extremal_frames(d.usize(), k.usize())?;
        let random = (0..n as u64).map(|i| random_frame(d.usize(), k.usize(), mix_seed(seed, i))).collect::<Result<_>>()?;
        Ok(Self { extremal: [e.max_frame, e.min_frame], random })
    }
}

/// Frame test against a fixed frame set. Extremal frames get an exact
/// smallest eigenvalue; random frames are screened by a shifted Cholesky
/// factorization and only a violating one is diagonalized.
pub fn kpos_with_frames(pt: &RationalPoint2, frames: &FrameSet, tol: f64) -> Result<Verdict> {
    let params = MapParams::from_point(pt);
    let mut v = Verdict::default();
    for f in &frames.extremal {
        let ev = tomiyama_matrix(&params, f)?.min_eigenvalue()?;
        v.check(ev >= -tol, ev, || Counterexample::Frame(f.clone()));
        if !v.passed {
            return Ok(v);
        }
    }
    for f in &frames.random {
        let c = tomiyama_matrix(&params, f)?;
        if c.is_psd(tol) {
            v.n_evaluations += 1;
        } else {
            let ev = c.min_eigenvalue()?;
            v.check(false, ev, || Counterexample::Frame(f.clone()));
            return Ok(v);
        }
    }
    Ok(v)
}

/// Passes iff every sampled frame and both extremal frames give a
/// Tomiyama matrix with smallest eigenvalue ≥ −tol.
pub fn kpos_numeric(d: Dimension, k: KIndex, pt: &RationalPoint2, n_frames: usize, seed: u64, tol: f64) -> Result<Verdict> {
    kpos_with_frames(pt, &FrameSet::new(d, k, n_frames, seed)?, tol)
}

#[derive(Clone, Debug)]
pub struct GridTask {
    pub point: RationalPoint2,
    pub exact: bool,
    pub boundary_distance: f64,
}

/// Grid comparison of the frame test against the exact ℙ_k predicate.
/// Points closer than `skip_within` to the boundary are not compared.
#[derive(Clone, Debug)]
pub struct KposGrid {
    pub frames: FrameSet,
    pub tasks: Vec<GridTask>,
    pub skipped: usize,
    pub tol: f64,
}

/// `n×n` rational grid over [lo,hi]², row by row from (lo,lo).
pub fn rational_grid(lo: &Q, hi: &Q, n: usize) -> Vec<RationalPoint2> {
    let n = n.max(2);
    let step = (hi - lo) / int(n as i64 - 1);
    let at = |i: usize| lo + &step * int(i as i64);
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| RationalPoint2::new(at(j), at(i))).collect()
}

/// The default comparison window [−3/5, 11/10]².
pub fn default_window() -> (Q, Q) {
    (rat(-3, 5), rat(11, 10))
}

impl KposGrid {
    pub fn new(d: Dimension, k: KIndex, grid: usize, n_frames: usize, seed: u64, tol: f64, skip_within: f64) -> Result<Self> {
        let region = CompiledRegion::new(d, RegionId::Pk(k.get()))?;
        let poly = BoundaryPolyline::new(d, RegionId::Pk(k.get()), 2048)?;
        let (lo, hi) = default_window();
        let mut tasks = Vec::new();
        let mut skipped = 0;
        for point in rational_grid(&lo, &hi, grid) {
            let (x, y) = point.to_f64();
            let dist = poly.distance(x, y);
            if dist <= skip_within {
                skipped += 1;
                continue;
            }
            tasks.push(GridTask { exact: region.contains(&point), point, boundary_distance: dist });
        }
        Ok(Self { frames: FrameSet::new(d, k, n_frames, seed)?, tasks, skipped, tol })
    }

    /// Numeric verdict for one task.
    pub fn run(&self, task: &GridTask) -> Result<bool> {
        Ok(kpos_with_frames(&task.point, &self.frames, self.tol)?.passed)
    }

    /// Aggregates numeric outcomes given in task order. The margin is the
    /// smallest boundary distance among compared points.
    pub fn verdict(&self, numeric: &[bool]) -> Verdict {
        let mut v = Verdict::default();
        for (t, &num) in self.tasks.iter().zip(numeric) {
            v.check(num == t.exact, t.boundary_distance, || {
                note(format!("exact={} numeric={} at {}", t.exact, num, t.point))
            });
        }
        v
    }
}

pub fn kpos_agreement(d: Dimension, k: KIndex, grid: usize, n_frames: usize, seed: u64, tol: f64) -> Result<Verdict> {
    let g = KposGrid::new(d, k, grid, n_frames, seed, tol, 1e-3)?;
    let numeric = g.tasks.iter().map(|t| g.run(t)).collect::<Result<Vec<_>>>()?;
    Ok(g.verdict(&numeric))
}

// ---------------------------------------------------------------------------
// scalar inequality system

/// Inputs of the scalar system; `s` is the squared norm of the
/// antisymmetric component of the frame's maximally entangled vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SixConditionInput {
    pub p: Q,
    pub q: Q,
    pub d: Dimension,
    pub k: KIndex,
    pub s: Q,
}

/// A±q ≥ 0, A ≥ 0 (k<d), A−q+kps ≥ 0, A+kp−kps ≥ 0 and
/// (A−q)(A+kp)+kpqs ≥ 0, with A = (1−p−q)/d.
pub fn six_conditions(input: &SixConditionInput) -> bool {
    let SixConditionInput { p, q, d, k, s } = input;
    let a = (int(1) - p - q) / d.q();
    let kq = int(k.i());
    let kp = &kq * p;
    let nonneg = |x: &Q| !x.is_negative();
    nonneg(&(&a + q))
        && nonneg(&(&a - q))
        && (k.get() == d.get() || nonneg(&a))
        && nonneg(&(&a - q + &kp * s))
        && nonneg(&(&a + &kp - &kp * s))
        && nonneg(&((&a - q) * (&a + &kp) + &kp * q * s))
}

/// Extreme values of s over k-frames: 2⌊k/2⌋/k and max(2k−d,0)/k.
pub fn six_condition_s_values(d: Dimension, k: KIndex) -> [Q; 2] {
    let (lo, hi) = pairing_bounds(d.usize(), k.usize());
    [rat(hi as i64, k.i()), rat(lo as i64, k.i())]
}

pub fn six_conditions_hold(d: Dimension, k: KIndex, pt: &RationalPoint2) -> bool {
    six_condition_s_values(d, k).into_iter().all(|s| {
        six_conditions(&SixConditionInput { p: pt.x.clone(), q: pt.y.clone(), d, k, s })
    })
}

/// Exact comparison of the scalar system with ℙ_k on the default grid.
pub fn six_condition_agreement(d: Dimension, k: KIndex, grid: usize) -> Result<Verdict> {
    let region = CompiledRegion::new(d, RegionId::Pk(k.get()))?;
    let (lo, hi) = default_window();
    let mut v = Verdict::default();
    for pt in rational_grid(&lo, &hi, grid) {
        let (a, b) = (six_conditions_hold(d, k, &pt), region.contains(&pt));
        v.check(a == b, 0.0, || note(format!("scalar system {a}, region {b} at {pt}")));
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// witness pairing and Schmidt-number certificates

/// Tr(ρ_{a,b}ρ_{p,q}) = [1−(a+b)(p+q)]/d² + ap + bq − (aq+bp)/d.
pub fn witness_pairing(d: Dimension, ab: &RationalPoint2, pq: &RationalPoint2) -> Q {
    let dq = d.q();
    let (a, b, p, q) = (&ab.x, &ab.y, &pq.x, &pq.y);
    (int(1) - (a + b) * (p + q)) / (&dq * &dq) + a * p + b * q - (a * q + b * p) / &dq
}

pub fn witness_pairing_f64(d: Dimension, ab: (f64, f64), pq: (f64, f64)) -> f64 {
    let df = d.get() as f64;
    let ((a, b), (p, q)) = (ab, pq);
    (1.0 - (a + b) * (p + q)) / (df * df) + a * p + b * q - (a * q + b * p) / df
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessPoint {
    Vertex { point: RationalPoint2, pairing: ExactQ },
    Curve { x: f64, y: f64, pairing: f64 },
}

/// Exact rational carried as a string in reports.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactQ(pub Q);

impl Serialize for ExactQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl WitnessPoint {
    pub fn point_f64(&self) -> (f64, f64) {
        match self {
            WitnessPoint::Vertex { point, .. } => point.to_f64(),
            WitnessPoint::Curve { x, y, .. } => (*x, *y),
        }
    }

    pub fn pairing_f64(&self) -> f64 {
        match self {
            WitnessPoint::Vertex { pairing, .. } => to_f64(&pairing.0),
            WitnessPoint::Curve { pairing, .. } => *pairing,
        }
    }
}

/// Number of parameter values per hyperbola arc for sampled witnesses.
pub const CURVE_SAMPLES: usize = 256;

fn curve_samples(seg: &CurveSegment, n: usize) -> Vec<(f64, f64, f64)> {
    let (t0, t1) = seg.angle_range();
    (0..n)
        .filter_map(|i| {
            let th = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
            seg.point_at(th).map(|(x, y)| (th, x, y))
        })
        .collect()
}

/// Most negative pairing with ext(ℙ_k), vertices exact, arcs sampled at
/// [`CURVE_SAMPLES`] angles and optionally refined by golden-section search.
pub fn most_violating_witness(d: Dimension, k: KIndex, ab: &RationalPoint2, refine: bool) -> Option<WitnessPoint> {
    let ext = extreme_points(d, k);
    let mut best: Option<WitnessPoint> = None;
    let better = |w: &WitnessPoint, best: &Option<WitnessPoint>| match best {
        None => w.pairing_f64() < 0.0,
        Some(b) => w.pairing_f64() < b.pairing_f64(),
    };
    for v in &ext.vertices {
        let val = witness_pairing(d, ab, v);
        if val.is_negative() {
            let w = WitnessPoint::Vertex { point: v.clone(), pairing: ExactQ(val) };
            if better(&w, &best) {
                best = Some(w);
            }
        }
    }
    let abf = ab.to_f64();
    for seg in &ext.curve_segments {
        let samples = curve_samples(seg, CURVE_SAMPLES);
        let Some((imin, _)) = samples
            .iter()
            .enumerate()
            .map(|(i, &(_, x, y))| (i, witness_pairing_f64(d, abf, (x, y))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
        else {
            continue;
        };
        let (_, mut x, mut y) = samples[imin];
        if refine && samples.len() >= 3 {
            let lo = samples[imin.saturating_sub(1)].0;
            let hi = samples[(imin + 1).min(samples.len() - 1)].0;
            let h = |t: f64| seg.point_at(t).map_or(f64::INFINITY, |p| witness_pairing_f64(d, abf, p));
            if let Some(p) = seg.point_at(golden_min(h, lo, hi, 80)) {
                if witness_pairing_f64(d, abf, p) < witness_pairing_f64(d, abf, (x, y)) {
                    (x, y) = p;
                }
            }
        }
        let w = WitnessPoint::Curve { x, y, pairing: witness_pairing_f64(d, abf, (x, y)) };
        if better(&w, &best) {
            best = Some(w);
        }
    }
    best
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut c = b - r * (b - a);
    let mut e = a + r * (b - a);
    let (mut fc, mut fe) = (f(c), f(e));
    for _ in 0..iters {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + r * (b - a);
            fe = f(e);
        }
    }
    0.5 * (a + b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SnCertificate {
    pub sn: u32,
    /// Point of ext(ℙ_{sn−1}) pairing negatively with the state.
    pub violating_witness: Option<WitnessPoint>,
}

pub fn sn_certificate(d: Dimension, ab: &RationalPoint2) -> Result<SnCertificate> {
    let sn = schmidt_number(d, ab)?;
    let violating_witness = if sn > 1 { most_violating_witness(d, d.k(sn - 1)?, ab, true) } else { None };
    Ok(SnCertificate { sn, violating_witness })
}

/// 1 + the largest k for which a vertex or a sampled arc point of
/// ext(ℙ_k) pairs negatively with ρ_{a,b}.
pub fn schmidt_number_by_witnesses(d: Dimension, ab: &RationalPoint2) -> u32 {
    d.ks().filter(|&k| most_violating_witness(d, k, ab, false).is_some()).map(|k| k.get() + 1).max().unwrap_or(1)
}

// ---------------------------------------------------------------------------
// rational sampling inside polygons

/// Uniform dyadic rational point of the polygon `forms ≤ 0`, by rejection
/// from its bounding box.
pub fn sample_rational_in(forms: &[LinearForm], sampler: &mut Sampler) -> RationalPoint2 {
    let verts = halfplane_polygon(forms);
    let min_max = |f: fn(&RationalPoint2) -> &Q| {
        let mut it = verts.iter().map(f);
        let first = it.next().cloned().unwrap_or_else(Q::zero);
        it.fold((first.clone(), first), |(lo, hi), v| (if *v < lo { v.clone() } else { lo }, if *v > hi { v.clone() } else { hi }))
    };
    let (x0, x1) = min_max(|p| &p.x);
    let (y0, y1) = min_max(|p| &p.y);
    let den = 1i64 << 20;
    loop {
        let mx = sampler.below(den as u64 + 1) as i64;
        let my = sampler.below(den as u64 + 1) as i64;
        let pt = RationalPoint2::new(&x0 + (&x1 - &x0) * rat(mx, den), &y0 + (&y1 - &y0) * rat(my, den));
        if forms.iter().all(|l| !l.eval(&pt).is_positive()) {
            return pt;
        }
    }
}

/// Agreement of the region predicates with witness pairings at random
/// rational states.
pub fn duality_check(d: Dimension, n: usize, seed: u64) -> Verdict {
    let mut sampler = Sampler::new(seed);
    let forms = p_d_forms(d);
    let mut v = Verdict::default();
    for _ in 0..n {
        let pt = sample_rational_in(&forms, &mut sampler);
        let exact = schmidt_number(d, &pt).unwrap_or(0);
        let dual = schmidt_number_by_witnesses(d, &pt);
        v.check(exact == dual, 0.0, || note(format!("region sn {exact}, witness sn {dual} at {pt}")));
    }
    v
}

// ---------------------------------------------------------------------------
// twirling

/// (1/n)Σ (S⊗S̄)ρ(S⊗S̄)* over symplectic samples `mix_seed(seed, i)`.
pub fn twirl_mc_average(d: Dimension, rho: &ComplexMatrix, n: usize, seed: u64) -> Result<ComplexMatrix> {
    let dn = d.usize();
    if rho.rows() != dn * dn || rho.cols() != dn * dn {
        return Err(Error::ShapeMismatch(format!("state is {}x{}, expected {}x{}", rho.rows(), rho.cols(), dn * dn, dn * dn)));
    }
    let mut acc = ComplexMatrix::zeros(dn * dn, dn * dn);
    for i in 0..n as u64 {
        let s = haar_symplectic(dn, mix_seed(seed, i))?;
        let u = s.kron(&s.conj());
        acc = &acc + &u.conjugate(rho);
    }
    Ok(acc.scale_re(1.0 / n.max(1) as f64))
}

/// Passes iff the Monte-Carlo average is within 5/√n of the analytic twirl
/// in Frobenius norm.
pub fn twirl_mc_check(d: Dimension, rho: &ComplexMatrix, n: usize, seed: u64) -> Result<Verdict> {
    let avg = twirl_mc_average(d, rho, n, seed)?;
    let exact = twirl_analytic(rho, Family::SSbar)?;
    let err = avg.frobenius_distance(&exact);
    let bound = 5.0 / libm::sqrt(n as f64);
    let mut v = Verdict::default();
    v.check(err <= bound, bound - err, || Counterexample::Matrix(avg.clone()));
    v.n_evaluations = n as u64;
    Ok(v)
}

/// G G*/Tr(G G*) with G a complex Gaussian n×n matrix.
pub fn random_density_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let g = Sampler::new(seed).gaussian_matrix(n, n);
    let r = g.mul(&g.adjoint());
    let t = r.trace().re;
    r.scale_re(1.0 / t)
}

pub fn random_pure_state(n: usize, seed: u64) -> ComplexMatrix {
    let v = Sampler::new(seed).unit_vector(n);
    ComplexMatrix::outer(&v, &v)
}

// ---------------------------------------------------------------------------
// compositions of PPT and positive maps

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PptSqVariant {
    /// (a,b), (p,q) ∈ 𝕋, composite must lie in 𝕊₁.
    PptPpt,
    /// (a,b) ∈ ℙ₁, (p,q) ∈ 𝕋, composite must lie in 𝔻.
    PositivePpt,
}

fn linear_slack(forms: &[LinearForm], pt: &RationalPoint2) -> f64 {
    forms.iter().map(|l| -to_f64(&l.eval(pt))).fold(f64::INFINITY, f64::min)
}

/// Random composition scan. Also checks the exact bound
/// 4/(d+2)² < 1/(d+1) and, for the PPT pair, the corner pair
/// (1/(d+2),1/(d+2)).
pub fn pptsq_scan(d: Dimension, n_pairs: usize, seed: u64, variant: PptSqVariant) -> Verdict {
    let mut v = Verdict::default();
    let di = d.i();
    let (left, target) = match variant {
        PptSqVariant::PptPpt => {
            let b = rat(4, (di + 2) * (di + 2));
            let c = rat(1, di + 1);
            v.check(b < c, to_f64(&(&c - &b)), || note(format!("4/(d+2)^2 = {b} is not below 1/(d+1) = {c}")));
            let corner = RationalPoint2::new(rat(1, di + 2), rat(1, di + 2));
            let s1 = s1_forms_all(d);
            let comp = compose_params(&corner, &corner);
            v.check(s1.iter().all(|l| !l.eval(&comp).is_positive()), linear_slack(&s1, &comp), || {
                Counterexample::Pair(corner.clone(), corner.clone())
            });
            (t_forms(d), s1)
        }
        PptSqVariant::PositivePpt => (p_1_forms(d), d_forms(d)),
    };
    let right = t_forms(d);
    let mut sampler = Sampler::new(seed);
    for _ in 0..n_pairs {
        let ab = sample_rational_in(&left, &mut sampler);
        let pq = sample_rational_in(&right, &mut sampler);
        let comp = compose_params(&ab, &pq);
        let slack = linear_slack(&target, &comp);
        v.check(target.iter().all(|l| !l.eval(&comp).is_positive()), slack, || Counterexample::Pair(ab.clone(), pq.clone()));
    }
    v
}

fn s1_forms_all(d: Dimension) -> Vec<LinearForm> {
    CompiledRegion::new(d, RegionId::Sk(1)).map(|r| r.linear).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// antisymmetric-input PPT optimum

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SindiciPiani {
    /// Largest p with ρ^Γ_{(1−p)/(d+1),p} a PPT state.
    pub p_min: ExactQ,
    /// (a,b) of the optimizer σ* = ρ^Γ_{a,b}.
    pub sigma_star_params: RationalPoint2,
    pub sigma_min_eigenvalue: f64,
    /// Smallest eigenvalue of σ*^Γ.
    pub pt_min_eigenvalue: f64,
    /// max |Π_𝒜σ*Π_𝒜 − Tr(Π_𝒜σ*)|ω^Ω⟩⟨ω^Ω||
    pub constraint_residual: f64,
    /// |Tr(Π_𝒜σ*) − p_min|
    pub trace_residual: f64,
}

impl SindiciPiani {
    pub fn passes(&self, tol: f64) -> bool {
        self.sigma_min_eigenvalue >= -tol
            && self.pt_min_eigenvalue >= -tol
            && self.constraint_residual <= tol
            && self.trace_residual <= tol
    }
}

pub fn sindici_piani(d: Dimension) -> Result<SindiciPiani> {
    let dq = d.q();
    let inv = int(1) / (&dq + int(1));
    // (a,b) = (inv·(1−p), p): each form of 𝕋 becomes coef·p + cst ≤ 0.
    let mut upper: Option<Q> = None;
    let mut lower = Q::zero();
    for l in t_forms(d) {
        let coef = &l.n2 - &l.n1 * &inv;
        let cst = &l.n1 * &inv + &l.c;
        if coef.is_zero() {
            if cst.is_positive() {
                return Err(Error::ParamsOutsideRegion);
            }
            continue;
        }
        let bound = -cst / &coef;
        if coef.is_positive() {
            upper = Some(upper.map_or(bound.clone(), |u: Q| if bound < u { bound.clone() } else { u }));
        } else if bound > lower {
            lower = bound;
        }
    }
    let p = upper.ok_or(Error::ParamsOutsideRegion)?;
    if p < lower {
        return Err(Error::ParamsOutsideRegion);
    }
    let ab = RationalPoint2::new(&inv * (int(1) - &p), p.clone());
    if !in_t(d, &ab) {
        return Err(Error::ParamsOutsideRegion);
    }
    let (a, b) = ab.to_f64();
    let rho = rho_state(d, a, b, None)?;
    let sigma = partial_transpose(&rho)?;
    let n = d.usize();
    let cm = canonical_matrices(d);
    let id = ComplexMatrix::identity(n * n);
    let pa = (&id - &cm.flip).scale_re(0.5);
    let w = cm.max_ent_omega.column(0);
    let tr = pa.mul(&sigma).trace().re;
    let lhs = pa.mul(&sigma).mul(&pa);
    let rhs = ComplexMatrix::outer(&w, &w).scale_re(tr);
    Ok(SindiciPiani {
        p_min: ExactQ(p.clone()),
        sigma_star_params: ab,
        sigma_min_eigenvalue: sigma.min_eigenvalue()?,
        pt_min_eigenvalue: partial_transpose(&sigma)?.min_eigenvalue()?,
        constraint_residual: lhs.max_abs_diff(&rhs),
        trace_residual: (tr - to_f64(&p)).abs(),
    })
}

// ---------------------------------------------------------------------------
// PPT states of Schmidt number d/2

#[derive(Clone, Debug, PartialEq)]
pub enum HighSnKind {
    /// p₀ρ_{a,b} + Σ wⱼ |vⱼ⟩⟨vⱼ| ⊗ |Ωvⱼ⟩⟨Ωvⱼ|
    Mixture { ab: RationalPoint2, p0: f64, vectors: Vec<Vec<C64>>, weights: Vec<f64> },
    /// (1−ε)ρ_{a,b} + ε|ω^Ω⟩⟨ω^Ω|
    Perturbed { ab: RationalPoint2, eps: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HighSnState {
    pub rho: ComplexMatrix,
    pub ppt: bool,
    pub pt_min_eigenvalue: f64,
    /// Tr(C ρ) for the Choi matrix C of the (d/2−1)-Breuer–Hall map.
    pub witness_value: f64,
    pub sn_lower: u32,
}

/// Map parameters of the k-Breuer–Hall map: (−1/(kd−k−1), −k/(kd−k−1)).
pub fn kbh_point(d: Dimension, k: KIndex) -> RationalPoint2 {
    let den = k.i() * d.i() - k.i() - 1;
    RationalPoint2::new(rat(-1, den), rat(-k.i(), den))
}

/// Map parameters of the k-reduction map: (−1/(kd−1), 0).
pub fn kred_point(d: Dimension, k: KIndex) -> RationalPoint2 {
    RationalPoint2::new(rat(-1, k.i() * d.i() - 1), Q::zero())
}

const PPT_TOL: f64 = 1e-12;

pub fn high_sn_state(d: Dimension, kind: &HighSnKind) -> Result<HighSnState> {
    let n = d.usize();
    let kw = d.k(d.get() / 2 - 1)?;
    let ab = match kind {
        HighSnKind::Mixture { ab, .. } | HighSnKind::Perturbed { ab, .. } => ab,
    };
    if !in_t(d, ab) || in_s_k(d, kw, ab) {
        return Err(Error::ParamsOutsideRegion);
    }
    let (a, b) = ab.to_f64();
    let base = rho_state(d, a, b, None)?;
    let rho = match kind {
        HighSnKind::Mixture { p0, vectors, weights, .. } => {
            let total: f64 = *p0 + weights.iter().sum::<f64>();
            if *p0 <= 0.0
                || weights.iter().any(|w| *w < 0.0)
                || weights.len() != vectors.len()
                || (total - 1.0).abs() > 1e-12
                || vectors.iter().any(|v| v.len() != n || norm(v) == 0.0)
            {
                return Err(Error::ParamsOutsideRegion);
            }
            let om = omega(n);
            let mut rho = base.scale_re(*p0);
            for (v, w) in vectors.iter().zip(weights) {
                let s = 1.0 / norm(v);
                let v: Vec<C64> = v.iter().map(|z| z * s).collect();
                let ov = om.mul(&ComplexMatrix::column_vector(&v)).column(0);
                let prod = ComplexMatrix::column_vector(&v).kron(&ComplexMatrix::column_vector(&ov)).column(0);
                rho = &rho + &ComplexMatrix::outer(&prod, &prod).scale_re(*w);
            }
            rho
        }
        HighSnKind::Perturbed { eps, .. } => {
            if !t_forms(d).iter().all(|l| l.eval(ab).is_negative()) {
                return Err(Error::ParamsOutsideRegion);
            }
            if !(0.0..=1.0).contains(eps) {
                return Err(Error::EpsTooLarge(*eps));
            }
            let w = canonical_matrices(d).max_ent_omega.column(0);
            &base.scale_re(1.0 - eps) + &ComplexMatrix::outer(&w, &w).scale_re(*eps)
        }
    };
    let pt_min = partial_transpose(&rho)?.min_eigenvalue()?;
    let ppt = pt_min >= -PPT_TOL;
    if let HighSnKind::Perturbed { eps, .. } = kind {
        if !ppt {
            return Err(Error::EpsTooLarge(*eps));
        }
    }
    let (p, q) = kbh_point(d, kw).to_f64();
    let witness = rho_state(d, p, q, None)?;
    let witness_value = witness.mul(&rho).trace().re;
    let sn_lower = if witness_value < -PPT_TOL { d.get() / 2 } else { 1 };
    Ok(HighSnState { rho, ppt, pt_min_eigenvalue: pt_min, witness_value, sn_lower })
}

// ---------------------------------------------------------------------------
// pairing sums over frames

/// Random frames stay within the attainable pairing-sum bounds, their
/// B-matrices are skew-symmetric, and the extremal frames attain both bounds.
pub fn optimization_bounds(d: Dimension, k: KIndex, n: usize, seed: u64) -> Result<Verdict> {
    let (dn, kn) = (d.usize(), k.usize());
    let (lo, hi) = pairing_bounds(dn, kn);
    let (lo, hi) = (lo as f64, hi as f64);
    let mut v = Verdict::default();
    let ext = extremal_frames(dn, kn)?;
    for (f, target) in [(&ext.max_frame, hi), (&ext.min_frame, lo)] {
        let s = f.pairing_sum();
        v.check((s - target).abs() <= 1e-12, 1e-12 - (s - target).abs(), || Counterexample::Frame(f.clone()));
    }
    for i in 0..n as u64 {
        let f = random_frame(dn, kn, mix_seed(seed, i))?;
        let b = f.pairing_matrix();
        let skew = (&b + &b.transpose()).max_abs_diff(&ComplexMatrix::zeros(kn, kn));
        let s = f.pairing_sum();
        let margin = (s - lo + 1e-10).min(hi + 1e-10 - s);
        v.check(margin >= 0.0 && skew <= 1e-12, margin, || Counterexample::Frame(f.clone()));
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// canonical-point tables and the ellipses

/// Points of the lines l₁ and l₂ that appear as images in the tables.
pub fn line_points(d: Dimension, k: KIndex, which: LineId) -> [RationalPoint2; 2] {
    let (di, ki) = (d.i(), k.i());
    let dd = d.dd();
    match which {
        LineId::L1 => [
            RationalPoint2::frac(ki * di - di - ki - 1, dd, -di + ki - 1, dd),
            RationalPoint2::frac(ki * ki * di - 2 * ki - ki * ki + 1, ki * dd, (ki - 1) * (ki - di + 1), ki * dd),
        ],
        LineId::L2 => [
            RationalPoint2::frac(ki * ki * di - 3 * ki - ki * ki + di, ki * dd, (ki - di) * (ki - di + 1), ki * dd),
            RationalPoint2::frac(di, 3 * di - 2 * ki, 2 * di - 2 * ki, (di + 1) * (3 * di - 2 * ki)),
        ],
    }
}

/// Tangent-line construction of the dual curve, done numerically along the
/// hyperbola arc with finite differences, compared against g.
pub fn dual_curve_crosscheck(d: Dimension, seg: &CurveSegment, g: &crate::geometry::ConicCoeffs, n: usize) -> Verdict {
    let [[a, b], [c, e]] = alpha_matrix(d).map(|r| r.map(|x| to_f64(&x)));
    let det = a * e - b * c;
    let (t0, t1) = seg.angle_range();
    let h = 1e-6 * (t1 - t0);
    let mut v = Verdict::default();
    for i in 1..n {
        let th = t0 + (t1 - t0) * i as f64 / n as f64;
        let (Some((x, y)), Some((xp, yp)), Some((xm, ym))) = (seg.point_at(th), seg.point_at(th + h), seg.point_at(th - h)) else {
            v.fail(note(format!("no arc point at angle {th}")));
            continue;
        };
        let (dx, dy) = ((xp - xm) / (2.0 * h), (yp - ym) / (2.0 * h));
        let den = x * dy - y * dx;
        let (px, py) = (dy / den, -dx / den);
        let (ux, uy) = ((e * px - b * py) / det, (a * py - c * px) / det);
        let val = g.eval_f64(ux, uy);
        let (gx, gy) = g.gradient_f64(ux, uy);
        let dist = val.abs() / libm::sqrt(gx * gx + gy * gy);
        v.check(dist <= 1e-6, 1e-6 - dist, || note(format!("dual point ({ux}, {uy}) off g by {dist}")));
    }
    v
}

/// Exact reproduction of the canonical-point tables through both the closed
/// forms and the tangent → pole → α⁻¹ construction, the line incidences,
/// the circumscribed parallelogram, and g₁ ∝ g₂ iff k = d−1.
pub fn tables_check(d: Dimension, k: KIndex) -> Verdict {
    let mut v = Verdict::default();
    let (di, ki) = (d.i(), k.i());
    let run = |v: &mut Verdict, label: &str, r: Result<bool>| {
        let ok = matches!(r, Ok(true));
        v.check(ok, 0.0, || note(format!("{label}: {r:?}")));
    };
    let mut kinds = vec![TableKind::General(rat(1, 2))];
    if ki > 1 && ki < di {
        kinds.push(TableKind::General(int(ki - 1)));
        kinds.push(TableKind::KMinusOne);
    }
    if 2 * ki > di && ki < di {
        kinds.push(TableKind::General(int(2 * ki - di)));
        kinds.push(TableKind::TwoKMinusD);
    }
    for kind in &kinds {
        run(&mut v, &format!("table {kind:?}"), table_rows(d, k, kind).map(|rows| !rows.is_empty()));
    }
    let g = |which| g_poly(d, k, which);
    if ki > 1 && ki < di {
        let g1 = g(EllipseId::G1);
        for p in line_points(d, k, LineId::L1) {
            let on = g1.as_ref().map(|g1| line_l(d, k, LineId::L1).eval(&p).is_zero() && g1.eval(&p).is_zero()).map_err(Clone::clone);
            run(&mut v, &format!("l1/g1 incidence at {p}"), on);
        }
    }
    if 2 * ki > di && ki < di {
        let g2 = g(EllipseId::G2);
        for p in line_points(d, k, LineId::L2) {
            let on = g2.as_ref().map(|g2| line_l(d, k, LineId::L2).eval(&p).is_zero() && g2.eval(&p).is_zero()).map_err(Clone::clone);
            run(&mut v, &format!("l2/g2 incidence at {p}"), on);
        }
        if ki > 1 {
            let same = match (g(EllipseId::G1), g(EllipseId::G2)) {
                (Ok(a), Ok(b)) => Ok(a.positively_proportional(&b) == (ki == di - 1)),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
            run(&mut v, "g1 ~ g2 iff k = d-1", same);
        }
    }
    run(&mut v, "parallelogram tangency", parallelogram(d, k).map(|p| p.tangencies.iter().all(|t| t.all_tangent())));
    let ext = extreme_points(d, k);
    for seg in &ext.curve_segments {
        for which in [EllipseId::G1, EllipseId::G2] {
            let u = ellipse_parameter(d, k, which);
            if crate::regions::f_poly(d, k, &u) == seg.conic {
                match g_poly_u(d, k, &u) {
                    Ok(gc) => v.merge(dual_curve_crosscheck(d, seg, &gc, 64)),
                    Err(e) => run(&mut v, "dual curve", Err(e)),
                }
                break;
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn pairing_example() {
        let v = witness_pairing(d(6), &RationalPoint2::frac(1, 8, 1, 8), &RationalPoint2::frac(-1, 9, -2, 9));
        assert_eq!(v, rat(-1, 216));
        assert_eq!(witness_pairing(d(4), &RationalPoint2::origin(), &RationalPoint2::frac(3, 7, -1, 5)), rat(1, 16));
    }

    #[test]
    fn six_condition_examples() {
        let (dd, k) = (d(4), d(4).k(2).unwrap());
        let mk = |s| SixConditionInput { p: rat(-1, 2), q: rat(-1, 2), d: dd, k, s };
        assert!(!six_conditions(&mk(int(0))));
        assert!(six_conditions(&mk(int(1))));
    }

    #[test]
    fn sdp_values() {
        for n in [4, 6, 8] {
            let r = sindici_piani(d(n)).unwrap();
            assert_eq!(r.p_min.0, rat(1, n as i64 + 2));
            assert!(r.passes(1e-12), "{r:?}");
        }
    }
}
