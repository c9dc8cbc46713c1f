use std::sync::OnceLock;

use num_traits::Zero;
use proptest::prelude::*;
use sympent_core::rational::rat;
use sympent_core::regions::*;
use sympent_core::sampling::Sampler;
use sympent_core::verify::{rational_grid, sample_rational_in, witness_pairing, witness_pairing_f64};
use sympent_core::{Dimension, KIndex, RationalPoint2, Q};

fn dim(d: u32) -> Dimension {
    Dimension::new(d).unwrap()
}

fn kk(d: u32, k: u32) -> KIndex {
    dim(d).k(k).unwrap()
}

fn pt(xn: i64, xd: i64, yn: i64, yd: i64) -> RationalPoint2 {
    RationalPoint2::frac(xn, xd, yn, yd)
}

fn grid41() -> Vec<RationalPoint2> {
    rational_grid(&rat(-3, 5), &rat(11, 10), 41)
}

struct Compiled {
    d: u32,
    pk: Vec<CompiledRegion>,
    sk: Vec<CompiledRegion>,
}

fn compiled() -> &'static Vec<Compiled> {
    static C: OnceLock<Vec<Compiled>> = OnceLock::new();
    C.get_or_init(|| {
        [4u32, 6, 8, 10]
            .into_iter()
            .map(|d| Compiled {
                d,
                pk: (1..=d).map(|k| CompiledRegion::new(dim(d), RegionId::Pk(k)).unwrap()).collect(),
                sk: (1..=d).map(|k| CompiledRegion::new(dim(d), RegionId::Sk(k)).unwrap()).collect(),
            })
            .collect()
    })
}

#[test]
fn positivity_examples() {
    let bh = pt(-1, 2, -1, 2);
    assert!(!in_p_k(dim(4), kk(4, 2), &bh));
    assert!(in_p_k(dim(4), kk(4, 1), &bh));
    for d in [4, 6, 8, 10] {
        for k in dim(d).ks() {
            assert!(in_p_k(dim(d), k, &RationalPoint2::ints(1, 0)));
        }
    }
    assert!(in_p_k(dim(6), kk(6, 2), &pt(-1, 9, -2, 9)));
    assert!(!in_d(dim(4), &bh));
    assert!(!in_d(dim(6), &pt(-1, 9, -2, 9)));
    for d in [4, 6, 8] {
        assert!(in_d(dim(d), &RationalPoint2::origin()));
    }
    assert_eq!(max_kpos(dim(4), &bh), 1);
    assert_eq!(max_kpos(dim(6), &pt(-1, 9, -2, 9)), 2);
    assert_eq!(max_kpos(dim(8), &RationalPoint2::ints(2, 0)), 0);
}

#[test]
fn state_region_examples() {
    let d6 = dim(6);
    assert!(in_t(d6, &pt(1, 8, 1, 8)));
    assert!(in_t(d6, &pt(1, 10, 9, 70)));
    assert!(!in_t(d6, &RationalPoint2::ints(1, 0)));
    assert!(in_s_k(dim(4), kk(4, 2), &pt(1, 6, 1, 6)));
    assert!(!in_s_k(d6, kk(6, 2), &pt(1, 8, 1, 8)));
    assert!(!in_s_k(d6, kk(6, 1), &pt(1, 8, 1, 8)));
    assert_eq!(schmidt_number(d6, &pt(1, 8, 1, 8)).unwrap(), 3);
    assert_eq!(schmidt_number(d6, &pt(1, 10, 9, 70)).unwrap(), 3);
    assert_eq!(schmidt_number(d6, &pt(9, 70, 1, 10)).unwrap(), 2);
    assert_eq!(schmidt_number(d6, &RationalPoint2::origin()).unwrap(), 1);
    assert!(schmidt_number(d6, &RationalPoint2::ints(2, 0)).is_err());
}

#[test]
fn classify_examples() {
    let d4 = dim(4);
    let r = classify(d4, &pt(1, 6, 1, 6));
    assert!(r.is_state && r.ppt);
    assert_eq!(r.schmidt_number, Some(2));
    assert_eq!(r.schmidt_number_gamma, Some(2));
    assert_eq!(r.max_kpos == 4, in_p_k(d4, kk(4, 4), &pt(1, 6, 1, 6)));

    let r = classify(d4, &pt(-1, 2, -1, 2));
    assert!(!r.is_state && !r.decomposable);
    assert_eq!(r.max_kpos, 1);
    assert_eq!(r.schmidt_number, None);

    let r = classify(d4, &RationalPoint2::origin());
    assert!(r.is_state && r.ppt && r.decomposable);
    assert_eq!((r.schmidt_number, r.max_kpos), (Some(1), 4));
}

#[test]
fn extreme_point_examples() {
    let e = extreme_points(dim(6), kk(6, 2));
    assert_eq!(e.vertices.len(), 4);
    assert!(e.curve_segments.is_empty());

    let e = extreme_points(dim(4), kk(4, 3));
    assert_eq!(e.vertices.len(), 4);
    assert!(!e.curve_segments.is_empty());
    assert!(e.curve_segments.iter().all(|s| s.conic == e.curve_segments[0].conic));

    let e = extreme_points(dim(4), kk(4, 1));
    assert_eq!(e.vertices, vec![RationalPoint2::ints(1, 0), RationalPoint2::ints(0, 1), pt(-1, 2, -1, 2)]);

    for d in [4, 6, 8, 10] {
        for k in dim(d).ks() {
            let e = extreme_points(dim(d), k);
            for (i, a) in e.vertices.iter().enumerate() {
                assert!(in_p_k(dim(d), k, a));
                assert!(e.vertices[i + 1..].iter().all(|b| b != a));
            }
            for s in &e.curve_segments {
                assert!(s.conic.eval(&s.start).is_zero() && s.conic.eval(&s.end).is_zero());
            }
        }
    }
}

#[test]
fn boundary_examples() {
    let d4 = dim(4);
    let exact = |v: &[BoundaryPoint]| -> Vec<RationalPoint2> {
        v.iter()
            .filter_map(|p| match p {
                BoundaryPoint::Exact(q) => Some(q.clone()),
                BoundaryPoint::Float(..) => None,
            })
            .collect()
    };
    let b = boundary_sample(d4, RegionId::Pk(2), 8).unwrap();
    assert_eq!(b.len(), 4);
    let mut got = exact(&b);
    let mut want = extreme_points(d4, kk(4, 2)).vertices;
    got.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
    want.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
    assert_eq!(got, want);

    let t = boundary_sample(d4, RegionId::T, 8).unwrap();
    assert_eq!(t.len(), 4);
    for p in exact(&t) {
        let on_edge = t_forms(d4).iter().filter(|l| l.eval(&p).is_zero()).count();
        assert_eq!(on_edge, 2);
    }

    let s3 = boundary_sample(d4, RegionId::Sk(3), 64).unwrap();
    assert!(exact(&s3).contains(&pt(2, 5, -1, 5)));

    let p3 = boundary_sample(d4, RegionId::Pk(3), 256).unwrap();
    let f = &extreme_points(d4, kk(4, 3)).curve_segments[0].conic;
    let arc: Vec<_> = p3.iter().filter(|p| matches!(p, BoundaryPoint::Float(..))).collect();
    assert!(arc.len() >= 254);
    for p in arc {
        let (x, y) = p.to_f64();
        assert!(f.eval_f64(x, y).abs() < 1e-12);
    }

    let s2 = boundary_sample(dim(6), RegionId::Sk(2), 128).unwrap();
    assert!(s2.iter().all(|p| matches!(p, BoundaryPoint::Exact(_))));
    assert!(boundary_sample(d4, RegionId::Pk(5), 8).is_err());
}

#[test]
fn half_positive_maps_are_decomposable() {
    for d in [4, 6, 8, 10] {
        let dd = dim(d);
        let k = kk(d, d / 2);
        let region = CompiledRegion::new(dd, RegionId::Pk(d / 2)).unwrap();
        for p in grid41() {
            if region.contains(&p) {
                assert!(in_d(dd, &p), "d={d} {p}");
            }
        }
        for v in extreme_points(dd, k).vertices {
            assert!(in_d(dd, &v));
        }
        let den = (d * d - 3 * d) as i64;
        let lp = pt(-2, den, -(d as i64 - 2), den);
        assert!(in_p_k(dd, kk(d, d / 2 - 1), &lp) && !in_d(dd, &lp), "d={d}");
    }
}

#[test]
fn ppt_states_have_half_schmidt_number() {
    for d in [4u32, 6, 8, 10] {
        let dd = dim(d);
        let half = kk(d, d / 2);
        let below = kk(d, d / 2 - 1);
        let bound = rat(1, d as i64 + 1);
        let slope = rat(1, d as i64 - 3);
        for p in grid41() {
            if !in_t(dd, &p) {
                continue;
            }
            assert!(in_s_k(dd, half, &p), "d={d} {p}");
            let line: Q = &slope * &p.x + &p.y;
            assert_eq!(line > bound, !in_s_k(dd, below, &p), "d={d} {p}");
        }
    }
}

#[test]
fn top_index_is_the_state_condition() {
    for d in [4u32, 6, 8] {
        let dd = dim(d);
        let top = kk(d, d);
        for p in grid41() {
            let s = in_p_d(dd, &p);
            assert_eq!(in_p_k(dd, top, &p), s);
            assert_eq!(in_s_k(dd, top, &p), s);
        }
    }
}

/// Exact S_k membership against pairings with the vertices and sampled arc
/// points of ext(P_k).
#[test]
fn witness_duality_oracle() {
    for d in [4u32, 6] {
        let dd = dim(d);
        let mut sampler = Sampler::new(0x5eed + d as u64);
        let forms = p_d_forms(dd);
        for _ in 0..1000 {
            let ab = sample_rational_in(&forms, &mut sampler);
            let abf = ab.to_f64();
            for k in dd.ks() {
                let ext = extreme_points(dd, k);
                let mut ok = ext.vertices.iter().all(|w| witness_pairing(dd, &ab, w) >= Q::zero());
                for seg in &ext.curve_segments {
                    let (t0, t1) = seg.angle_range();
                    for i in 0..256 {
                        let th = t0 + (t1 - t0) * i as f64 / 255.0;
                        let w = seg.point_at(th).unwrap();
                        ok &= witness_pairing_f64(dd, abf, w) >= -1e-9;
                    }
                }
                assert_eq!(ok, in_s_k(dd, k, &ab), "d={d} k={k} {ab}");
            }
        }
    }
}

fn small_rational() -> impl Strategy<Value = Q> {
    (-1300i64..=1300, prop_oneof![Just(1000i64), Just(997), Just(1024)]).prop_map(|(n, d)| rat(n, d))
}

fn point() -> impl Strategy<Value = RationalPoint2> {
    (small_rational(), small_rational()).prop_map(|(x, y)| RationalPoint2::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn regions_are_nested(p in point()) {
        for c in compiled() {
            let pk: Vec<bool> = c.pk.iter().map(|r| r.contains(&p)).collect();
            let sk: Vec<bool> = c.sk.iter().map(|r| r.contains(&p)).collect();
            for k in 1..c.d as usize {
                prop_assert!(!pk[k] || pk[k - 1], "d={} P{} not inside P{} at {}", c.d, k + 1, k, p);
                prop_assert!(!sk[k - 1] || sk[k], "d={} S{} not inside S{} at {}", c.d, k, k + 1, p);
            }
        }
    }

    #[test]
    fn swap_symmetric_regions(p in point()) {
        for d in [4u32, 6, 8, 10] {
            let dd = dim(d);
            prop_assert_eq!(in_t(dd, &p), in_t(dd, &p.swap()));
            prop_assert_eq!(in_d(dd, &p), in_d(dd, &p.swap()));
        }
    }

    #[test]
    fn hyperbolas_share_four_points(u in 0i64..=40, k in 1u32..=6) {
        let d = dim(6);
        let k = d.k(k).unwrap();
        let ki = k.get() as i64;
        let f = f_poly(d, k, &rat(u, 4));
        for p in [RationalPoint2::ints(1, 0), pt(-1, ki * 6 - 1, 0, 1), RationalPoint2::ints(0, 1), pt(0, 1, 1, 7)] {
            prop_assert!(f.eval(&p).is_zero());
        }
    }
}
