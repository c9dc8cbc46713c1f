//! Verification suites behind `sympent verify`.

use std::str::FromStr;
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sympent_core::rational::rat;
use sympent_core::sampling::{mix_seed, Sampler};
use sympent_core::verify::{
    duality_check, high_sn_state, optimization_bounds, pptsq_scan, random_density_matrix, sindici_piani,
    six_condition_agreement, tables_check, twirl_mc_check, Counterexample, HighSnKind, KposGrid, PptSqVariant,
    Verdict,
};
use sympent_core::{Dimension, Error, KIndex, RationalPoint2, Result};

use crate::report::{float, to_json, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Kpos,
    SixCond,
    Pairing,
    Twirl,
    PptSq,
    Sdp,
    FrameBounds,
    Tables,
    HighSn,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Kpos,
        Suite::SixCond,
        Suite::Pairing,
        Suite::Twirl,
        Suite::PptSq,
        Suite::Sdp,
        Suite::FrameBounds,
        Suite::Tables,
        Suite::HighSn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kpos => "kpos",
            Suite::SixCond => "sixcond",
            Suite::Pairing => "pairing",
            Suite::Twirl => "twirl",
            Suite::PptSq => "pptsq",
            Suite::Sdp => "sdp",
            Suite::FrameBounds => "lemma-a2",
            Suite::Tables => "tables",
            Suite::HighSn => "high-sn",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Knobs shared by all suites; each suite reads the ones it needs.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub d: Dimension,
    pub k: Option<KIndex>,
    pub frames: usize,
    pub grid: usize,
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    pub jobs: usize,
    pub timing: bool,
}

impl SuiteOptions {
    pub fn new(d: Dimension) -> Self {
        SuiteOptions { d, k: None, frames: 2000, grid: 21, samples: None, seed: 0, tol: 1e-9, jobs: 1, timing: false }
    }

    fn ks(&self, keep: impl Fn(KIndex) -> bool) -> Vec<KIndex> {
        match self.k {
            Some(k) => vec![k],
            None => self.d.ks().filter(|&k| keep(k)).collect(),
        }
    }
}

/// Maps `f` over `items` on `jobs` threads; output order matches input order.
pub fn par_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

/// Agreement of the frame criterion with the exact k-positivity region.
pub fn kpos_grid_verdict(d: Dimension, k: KIndex, opts: &SuiteOptions) -> Result<Verdict> {
    let g = KposGrid::new(d, k, opts.grid, opts.frames, opts.seed, opts.tol, 1e-3)?;
    info!("kpos d={d} k={k}: {} grid points, {} skipped near the boundary", g.tasks.len(), g.skipped);
    let numeric = par_map(opts.jobs, &g.tasks, |t| g.run(t));
    let numeric = numeric.into_iter().collect::<Result<Vec<bool>>>()?;
    Ok(g.verdict(&numeric))
}

fn merge_all(vs: impl IntoIterator<Item = Result<Verdict>>) -> Result<Verdict> {
    let mut out = Verdict::default();
    for v in vs {
        out.merge(v?);
    }
    Ok(out)
}

/// A point on the diagonal strictly inside the PPT region but outside the
/// Schmidt-number-(d/2−1) region.
pub fn interior_high_sn_point(d: Dimension) -> RationalPoint2 {
    let di = d.get() as i64;
    let lo = rat(di - 3, (di + 1) * (di - 2));
    let hi = rat(1, di + 2);
    let t = (lo + hi) / rat(2, 1);
    RationalPoint2::new(t.clone(), t)
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Report> {
    let start = Instant::now();
    let d = opts.d;
    let mut params = Map::new();
    let mut extra = Map::new();
    let verdict = match suite {
        Suite::Kpos => {
            params.insert("frames".into(), opts.frames.into());
            params.insert("grid".into(), opts.grid.into());
            params.insert("tol".into(), float(opts.tol));
            params.insert("skip_within".into(), float(1e-3));
            merge_all(opts.ks(|_| true).into_iter().map(|k| kpos_grid_verdict(d, k, opts)))?
        }
        Suite::SixCond => {
            params.insert("grid".into(), opts.grid.into());
            merge_all(opts.ks(|k| k.get() > 1 && k.get() < d.get()).into_iter().map(|k| six_condition_agreement(d, k, opts.grid)))?
        }
        Suite::Pairing => {
            let n = opts.samples.unwrap_or(1000);
            params.insert("samples".into(), n.into());
            duality_check(d, n, opts.seed)
        }
        Suite::Twirl => {
            let n = opts.samples.unwrap_or(10_000);
            let states = 10u64;
            params.insert("samples".into(), n.into());
            params.insert("states".into(), states.into());
            let nn = d.usize() * d.usize();
            merge_all((0..states).map(|i| {
                let rho = random_density_matrix(nn, mix_seed(opts.seed, i));
                twirl_mc_check(d, &rho, n, mix_seed(opts.seed ^ 0x7477_6972_6c00_0000, i))
            }))?
        }
        Suite::PptSq => {
            let n = opts.samples.unwrap_or(10_000);
            params.insert("pairs".into(), n.into());
            let mut v = pptsq_scan(d, n, opts.seed, PptSqVariant::PptPpt);
            v.merge(pptsq_scan(d, n, opts.seed, PptSqVariant::PositivePpt));
            v
        }
        Suite::Sdp => {
            let r = sindici_piani(d)?;
            let tol = 1e-12;
            params.insert("tol".into(), float(tol));
            let mut v = Verdict::default();
            let margin = [
                r.sigma_min_eigenvalue + tol,
                r.pt_min_eigenvalue + tol,
                tol - r.constraint_residual,
                tol - r.trace_residual,
            ]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
            v.check(r.passes(tol), margin, || Counterexample::Point(r.sigma_star_params.clone()));
            extra.insert("p_min".into(), to_json(&r.p_min));
            extra.insert("sigma_star_params".into(), to_json(&r.sigma_star_params));
            extra.insert("sigma_min_eigenvalue".into(), float(r.sigma_min_eigenvalue));
            extra.insert("pt_min_eigenvalue".into(), float(r.pt_min_eigenvalue));
            extra.insert("constraint_residual".into(), float(r.constraint_residual));
            extra.insert("trace_residual".into(), float(r.trace_residual));
            v
        }
        Suite::FrameBounds => {
            params.insert("frames".into(), opts.frames.into());
            merge_all(opts.ks(|_| true).into_iter().map(|k| optimization_bounds(d, k, opts.frames, opts.seed ^ k.get() as u64)))?
        }
        Suite::Tables => merge_all(opts.ks(|k| k.get() < d.get()).into_iter().map(|k| Ok(tables_check(d, k))))?,
        Suite::HighSn => high_sn_verdict(d, opts.seed, &mut params)?,
    };
    let mut report = Report::new(suite.name(), d.get(), opts.k.map(KIndex::get), opts.seed, verdict);
    report.params = Value::Object(params);
    report.extra = extra;
    if opts.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Builds both PPT constructions of Schmidt number d/2 and checks that each
/// is PPT and detected by the (d/2−1)-Breuer–Hall witness.
fn high_sn_verdict(d: Dimension, seed: u64, params: &mut Map<String, Value>) -> Result<Verdict> {
    let mut s = Sampler::new(seed);
    let corner = RationalPoint2::new(rat(1, d.get() as i64 + 2), rat(1, d.get() as i64 + 2));
    let vectors = vec![s.unit_vector(d.usize()), s.unit_vector(d.usize())];
    let mixture = HighSnKind::Mixture { ab: corner.clone(), p0: 0.5, vectors, weights: vec![0.25, 0.25] };
    let interior = interior_high_sn_point(d);
    let eps = 1e-4;
    let perturbed = HighSnKind::Perturbed { ab: interior.clone(), eps };
    *params = json!({ "mixture_ab": to_json(&corner), "perturbed_ab": to_json(&interior), "eps": float(eps) })
        .as_object()
        .cloned()
        .unwrap_or_default();
    let mut v = Verdict::default();
    for (name, kind) in [("mixture", mixture), ("perturbed", perturbed)] {
        let st = match high_sn_state(d, &kind) {
            Ok(st) => st,
            Err(e @ (Error::EpsTooLarge(_) | Error::ParamsOutsideRegion)) => {
                v.check(false, f64::NEG_INFINITY, || Counterexample::Note(format!("{name}: {e}")));
                continue;
            }
            Err(e) => return Err(e),
        };
        let ok = st.ppt && st.sn_lower == d.get() / 2 && st.witness_value < 0.0;
        v.check(ok, (st.pt_min_eigenvalue + 1e-12).min(-st.witness_value), || {
            Counterexample::Note(format!(
                "{name}: ppt={} sn_lower={} witness={:e}",
                st.ppt, st.sn_lower, st.witness_value
            ))
        });
    }
    Ok(v)
}
