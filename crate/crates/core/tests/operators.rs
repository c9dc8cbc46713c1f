use sympent_core::operators::*;
use sympent_core::rational::{rat, to_f64};
use sympent_core::regions::in_p_d;
use sympent_core::sampling::{haar_symplectic, mix_seed, random_skew_unitary, Sampler};
use sympent_core::verify::{random_density_matrix, witness_pairing};
use sympent_core::{c64, ComplexMatrix, Dimension, RationalPoint2};

fn dim(d: u32) -> Dimension {
    Dimension::new(d).unwrap()
}

fn random_params(s: &mut Sampler) -> (f64, f64) {
    (s.uniform() * 1.4 - 0.4, s.uniform() * 1.4 - 0.4)
}

#[test]
fn canonical_examples() {
    let c = canonical_matrices(dim(4));
    let e1 = ComplexMatrix::column_vector(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    let col = c.omega.mul(&e1).column(0);
    assert_eq!(col[2], c64(-1.0, 0.0));
    assert!(col.iter().enumerate().all(|(i, z)| i == 2 || *z == c64(0.0, 0.0)));
    for d in [4u32, 6, 8] {
        let c = canonical_matrices(dim(d));
        let n = d as usize;
        let id = ComplexMatrix::identity(n);
        assert!(c.omega.mul(&c.omega).max_abs_diff(&id.scale_re(-1.0)) == 0.0);
        assert!(c.omega.transpose().max_abs_diff(&c.omega.scale_re(-1.0)) == 0.0);
        assert!(c.omega.adjoint().mul(&c.omega).max_abs_diff(&id) == 0.0);
        let ip = c.max_ent.adjoint().mul(&c.max_ent_omega)[(0, 0)];
        assert!(ip.norm() < 1e-15);
    }
}

#[test]
fn projection_algebra() {
    for d in [4u32, 6] {
        let n = (d * d) as usize;
        let ranks = [1.0, (d * d + d) as f64 / 2.0, (d * d - d - 2) as f64 / 2.0];
        for fam in [Family::SSbar, Family::SS] {
            let ps = projections(dim(d), fam);
            let mut sum = ComplexMatrix::zeros(n, n);
            for (i, p) in ps.iter().enumerate() {
                assert!((p.trace().re - ranks[i]).abs() < 1e-12);
                assert!(p.hermitian_defect() < 1e-12);
                for (j, q) in ps.iter().enumerate() {
                    let want = if i == j { p.clone() } else { ComplexMatrix::zeros(n, n) };
                    assert!(p.mul(q).max_abs_diff(&want) < 1e-12);
                }
                sum = &sum + p;
            }
            assert!(sum.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-14);
        }
    }
}

#[test]
fn map_examples() {
    let mut s = Sampler::new(11);
    let z = s.gaussian_matrix(6, 6);
    let tr = z.trace();
    let id = ComplexMatrix::identity(6);
    assert!(apply_map(&MapParams::new(1.0, 0.0), &z).unwrap().max_abs_diff(&z) < 1e-15);
    assert!(apply_map(&MapParams::new(0.0, 0.0), &z).unwrap().max_abs_diff(&id.scale(tr / 6.0)) < 1e-15);
    let om = omega(6);
    let bh = apply_map(&MapParams::new(-0.25, -0.25), &z).unwrap();
    let want = (&(&id.scale(tr) - &z) - &om.conjugate(&z.transpose())).scale_re(0.25);
    assert!(bh.max_abs_diff(&want) < 1e-14);
    for _ in 0..20 {
        let (p, q) = random_params(&mut s);
        let out = apply_map(&MapParams::new(p, q), &z).unwrap();
        assert!((out.trace() - tr).norm() < 1e-12);
    }
    assert!(apply_map(&MapParams::new(0.0, 0.0), &ComplexMatrix::zeros(2, 3)).is_err());
}

#[test]
fn choi_matrix_is_the_state() {
    let mut s = Sampler::new(3);
    for d in [4u32, 6] {
        for _ in 0..20 {
            let (a, b) = random_params(&mut s);
            let c = choi_of_map(&MapParams::new(a, b), dim(d)).unwrap();
            let r = rho_state(dim(d), a, b, None).unwrap();
            assert!(c.max_abs_diff(&r) <= 1e-14, "d={d}");
        }
    }
    let mixed = rho_state(dim(4), 0.0, 0.0, None).unwrap();
    assert!(mixed.max_abs_diff(&ComplexMatrix::identity(16).scale_re(1.0 / 16.0)) < 1e-17);
}

#[test]
fn spectrum_matches_eigensolver() {
    for d in [4u32, 6] {
        let dd = dim(d);
        for i in 0..9 {
            for j in 0..9 {
                let (a, b) = (-0.5 + 0.2 * i as f64, -0.5 + 0.2 * j as f64);
                let dense = rho_state(dd, a, b, None).unwrap().eigenvalues_hermitian().unwrap();
                let mut formula = spectrum_rho(dd, a, b).expanded();
                formula.sort_by(f64::total_cmp);
                for (x, y) in dense.iter().zip(&formula) {
                    assert!((x - y).abs() <= 1e-10, "d={d} ({a},{b}): {x} vs {y}");
                }
                let sp = spectrum_rho(dd, a, b);
                let tr: f64 = sp.lambda.iter().zip(sp.mult).map(|(l, m)| l * m as f64).sum();
                assert!((tr - 1.0).abs() < 1e-12);
            }
        }
    }
    let sp = spectrum_rho(dim(4), 1.0 / 6.0, 1.0 / 6.0);
    assert_eq!(sp.mult, [1, 10, 5]);
    for (x, y) in sp.lambda.iter().zip([1.0 / 6.0, 1.0 / 12.0, 0.0]) {
        assert!((x - y).abs() < 1e-15);
    }
    assert_eq!(spectrum_exact(dim(4), &RationalPoint2::frac(1, 6, 1, 6)), [rat(1, 6), rat(1, 12), rat(0, 1)]);
}

#[test]
fn states_are_the_cp_region() {
    let lo = rat(-3, 5);
    let step = rat(17, 200);
    for i in 0..21 {
        for j in 0..21 {
            let p = RationalPoint2::new(&lo + &step * rat(i, 1), &lo + &step * rat(j, 1));
            let exact_min = spectrum_exact(dim(4), &p).into_iter().min().unwrap();
            assert_eq!(exact_min >= rat(0, 1), in_p_d(dim(4), &p), "{p}");
            let (a, b) = p.to_f64();
            let ev = rho_state(dim(4), a, b, None).unwrap().min_eigenvalue().unwrap();
            if to_f64(&exact_min).abs() > 1e-9 {
                assert_eq!(ev >= 0.0, in_p_d(dim(4), &p), "{p}");
            }
        }
    }
}

#[test]
fn transpose_equivalences() {
    let mut s = Sampler::new(5);
    for d in [4u32, 6] {
        let dd = dim(d);
        let n = d as usize;
        let om = omega(n);
        let big = ComplexMatrix::identity(n).kron(&om);
        for _ in 0..10 {
            let (a, b) = random_params(&mut s);
            let z = s.gaussian_matrix(n, n);
            let lhs = apply_map(&MapParams::new(a, b), &z).unwrap().transpose();
            let rhs = om.conjugate(&apply_map(&MapParams::new(b, a), &z).unwrap());
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            let pt = partial_transpose(&rho_state(dd, a, b, None).unwrap()).unwrap();
            let sw = big.conjugate(&rho_state(dd, b, a, None).unwrap());
            assert!(pt.max_abs_diff(&sw) < 1e-14);
        }
        let x = s.gaussian_matrix(n * n, n * n);
        assert_eq!(partial_transpose(&partial_transpose(&x).unwrap()).unwrap(), x);
        let me = canonical_matrices(dd);
        let w = ComplexMatrix::outer(&me.max_ent.column(0), &me.max_ent.column(0));
        assert!(partial_transpose(&w).unwrap().max_abs_diff(&me.flip.scale_re(1.0 / d as f64)) < 1e-15);
        let r = random_density_matrix(n * n, 9);
        assert!((partial_trace_second(&r).unwrap().trace() - r.trace()).norm() < 1e-13);
    }
}

#[test]
fn composition_law() {
    let mut s = Sampler::new(8);
    for _ in 0..20 {
        let (a, b) = random_params(&mut s);
        let (p, q) = random_params(&mut s);
        let z = s.gaussian_matrix(4, 4);
        let lhs = apply_map(&MapParams::new(a, b), &apply_map(&MapParams::new(p, q), &z).unwrap()).unwrap();
        let (x, y) = (a * p + b * q, a * q + b * p);
        let rhs = apply_map(&MapParams::new(x, y), &z).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
    let sixth = RationalPoint2::frac(1, 6, 1, 6);
    let c = compose_params(&sixth, &sixth);
    assert_eq!(c, RationalPoint2::frac(1, 18, 1, 18));
    assert!(sympent_core::regions::in_s_k(dim(4), dim(4).k(1).unwrap(), &c));
    let pq = RationalPoint2::frac(2, 7, -3, 11);
    assert_eq!(compose_params(&RationalPoint2::ints(1, 0), &pq), pq);
    assert_eq!(compose_params(&pq, &RationalPoint2::origin()), RationalPoint2::origin());
}

#[test]
fn parameters_and_twirl() {
    let mut s = Sampler::new(21);
    for d in [4u32, 6] {
        let dd = dim(d);
        let forms = sympent_core::regions::p_d_forms(dd);
        for _ in 0..100 {
            let p = sympent_core::verify::sample_rational_in(&forms, &mut s);
            let (a, b) = p.to_f64();
            let r = rho_state(dd, a, b, None).unwrap();
            let (x, y) = state_params_of(&r, None).unwrap();
            assert!((x - a).abs() < 1e-12 && (y - b).abs() < 1e-12);
        }
        let (a, b) = (0.1, -0.05);
        let r = rho_state(dd, a, b, None).unwrap();
        assert!(twirl_analytic(&r, Family::SSbar).unwrap().max_abs_diff(&r) < 1e-14);
        let n = (d * d) as usize;
        let mixed = ComplexMatrix::identity(n).scale_re(1.0 / n as f64);
        assert!(twirl_analytic(&mixed, Family::SSbar).unwrap().max_abs_diff(&mixed) < 1e-15);
        let rnd = random_density_matrix(n, 77);
        let t = twirl_analytic(&rnd, Family::SSbar).unwrap();
        assert!((t.trace() - rnd.trace()).norm() < 1e-12);
        assert!(twirl_analytic(&t, Family::SSbar).unwrap().max_abs_diff(&t) < 1e-14);
        let (x, y) = state_params_of(&rnd, None).unwrap();
        assert!(t.max_abs_diff(&rho_state(dd, x, y, None).unwrap()) < 1e-12);
        let (x, y) = state_params_of(&mixed, None).unwrap();
        assert!(x.abs() < 1e-14 && y.abs() < 1e-14);
        let w = canonical_matrices(dd).max_ent;
        let (x, y) = state_params_of(&w.mul(&w.adjoint()), None).unwrap();
        assert!((x - 1.0).abs() < 1e-13 && y.abs() < 1e-13);
        assert!(state_params_of(&mixed.scale_re(2.0), None).is_err());
    }
}

#[test]
fn states_are_invariant_under_symplectic_twirl() {
    for d in [4u32, 6] {
        let r = rho_state(dim(d), 0.2, 0.07, None).unwrap();
        for i in 0..20 {
            let sp = haar_symplectic(d as usize, mix_seed(4, i)).unwrap();
            let u = sp.kron(&sp.conj());
            assert!(u.conjugate(&r).max_abs_diff(&r) < 1e-12);
        }
    }
}

#[test]
fn pairing_closed_form_matches_dense_trace() {
    let mut s = Sampler::new(99);
    let d = dim(4);
    for _ in 0..200 {
        let ab = RationalPoint2::new(rat(s.below(2001) as i64 - 1000, 1000), rat(s.below(2001) as i64 - 1000, 1000));
        let pq = RationalPoint2::new(rat(s.below(2001) as i64 - 1000, 1000), rat(s.below(2001) as i64 - 1000, 1000));
        let (a, b) = ab.to_f64();
        let (p, q) = pq.to_f64();
        let dense = rho_state(d, a, b, None).unwrap().mul(&rho_state(d, p, q, None).unwrap()).trace().re;
        assert!((dense - to_f64(&witness_pairing(d, &ab, &pq))).abs() <= 1e-13);
    }
}

#[test]
fn schmidt_condition_matrix() {
    let d6 = dim(6);
    let x = 1.0 / 8.0;
    let r = rho_state(d6, x, x, None).unwrap();
    assert!(kbre_matrix(&r, 2, None).unwrap().1 < 0.0);
    for seed in 0..5 {
        let rnd = random_density_matrix(36, seed);
        assert!(kbre_matrix(&rnd, 6, None).unwrap().1 >= -1e-12);
    }
    let mut prod = ComplexMatrix::zeros(16, 16);
    prod[(0, 0)] = c64(1.0, 0.0);
    assert!(kbre_matrix(&prod, 1, None).unwrap().1 >= -1e-12);
}

#[test]
fn general_skew_unitaries() {
    for d in [4usize, 6, 8] {
        for i in 0..100 {
            let v = random_skew_unitary(d, mix_seed(17, i)).unwrap();
            assert!((&v + &v.transpose()).max_abs_diff(&ComplexMatrix::zeros(d, d)) < 1e-14);
            let u = congruence_to_omega(&v).unwrap();
            assert!(u.unitarity_defect() <= 1e-10);
            assert!(u.transpose().mul(&v).mul(&u).max_abs_diff(&omega(d)) <= 1e-10, "d={d} seed {i}");
        }
    }
    let id = congruence_to_omega(&omega(6)).unwrap();
    assert!(id.transpose().mul(&omega(6)).mul(&id).max_abs_diff(&omega(6)) < 1e-12);
    assert!(congruence_to_omega(&ComplexMatrix::identity(4)).is_err());
}

#[test]
fn general_v_equivalence() {
    let mut s = Sampler::new(1234);
    for d in [4u32, 6] {
        let n = d as usize;
        for i in 0..5 {
            let v = random_skew_unitary(n, mix_seed(50, i)).unwrap();
            let u = congruence_to_omega(&v).unwrap();
            let (p, q) = random_params(&mut s);
            let z = s.gaussian_matrix(n, n);
            let lv = MapParams::new(p, q).with_v(v.conj()).unwrap();
            let lhs = u.adjoint().conjugate(&apply_map(&lv, &u.conjugate(&z)).unwrap());
            let rhs = apply_map(&MapParams::new(p, q), &z).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
            let rv = rho_state(dim(d), p, q, Some(&v)).unwrap();
            let uu = u.kron(&u.conj());
            assert!(uu.conjugate(&rho_state(dim(d), p, q, None).unwrap()).max_abs_diff(&rv) < 1e-12);
            let cv = choi_of_map(&MapParams::new(p, q).with_v(v.clone()).unwrap(), dim(d)).unwrap();
            assert!(cv.max_abs_diff(&rv) < 1e-14);
        }
    }
    let bad = ComplexMatrix::identity(4).scale(c64(0.0, 1.0));
    assert!(MapParams::new(0.0, 0.0).with_v(bad).is_err());
}
