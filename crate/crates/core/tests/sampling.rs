use sympent_core::operators::omega;
use sympent_core::sampling::*;
use sympent_core::ComplexMatrix;

fn symplectic_residuals(s: &ComplexMatrix) -> (f64, f64) {
    let om = omega(s.rows());
    (s.unitarity_defect(), s.transpose().mul(&om).mul(s).max_abs_diff(&om))
}

#[test]
fn samplers_are_deterministic() {
    assert_eq!(haar_unitary(4, 42), haar_unitary(4, 42));
    assert_ne!(haar_unitary(4, 42), haar_unitary(4, 43));
    assert_eq!(haar_symplectic(6, 42).unwrap(), haar_symplectic(6, 42).unwrap());
    assert_eq!(random_skew_unitary(6, 5).unwrap(), random_skew_unitary(6, 5).unwrap());
    assert_eq!(random_frame(6, 3, 9).unwrap(), random_frame(6, 3, 9).unwrap());
    let mut a = Sampler::new(1);
    let mut b = Sampler::new(1);
    let xs: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
    let ys: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
    assert_eq!(xs, ys);
}

#[test]
fn unitary_and_symplectic_constraints() {
    for d in [4usize, 6, 8] {
        for seed in 0..100 {
            assert!(haar_unitary(d, seed).unitarity_defect() <= 1e-12);
            let s = haar_symplectic(d, seed).unwrap();
            let (u, sp) = symplectic_residuals(&s);
            assert!(u <= 1e-12 && sp <= 1e-12, "d={d} seed={seed}: {u} {sp}");
            let om = omega(d);
            assert!(om.mul(&s).max_abs_diff(&s.conj().mul(&om)) <= 1e-12);
            assert!(om.conj().mul(&s.conj()).max_abs_diff(&s.mul(&om.conj())) <= 1e-12);
            let t = haar_symplectic(d, seed + 1000).unwrap();
            let (u, sp) = symplectic_residuals(&s.mul(&t));
            assert!(u <= 2e-12 && sp <= 2e-12);
        }
    }
    assert!(haar_symplectic(5, 0).is_err());
}

#[test]
fn skew_unitaries() {
    for d in [4usize, 6] {
        for seed in 0..20 {
            let v = random_skew_unitary(d, seed).unwrap();
            assert!(v.unitarity_defect() <= 1e-12);
            assert!((&v + &v.transpose()).max_abs_diff(&ComplexMatrix::zeros(d, d)) <= 1e-14);
        }
    }
}

#[test]
fn haar_second_moment() {
    for d in [4usize, 6] {
        let n = 10_000;
        let mean = (0..n).map(|i| haar_unitary(d, mix_seed(3, i)).data()[0].norm_sqr()).sum::<f64>() / n as f64;
        let df = d as f64;
        let var = 2.0 / (df * (df + 1.0)) - 1.0 / (df * df);
        let sigma = (var / n as f64).sqrt();
        assert!((mean - 1.0 / df).abs() <= 3.0 * sigma, "d={d}: {mean}");
    }
}

#[test]
fn frames() {
    for i in 0..1000 {
        let f = random_frame(6, 3, mix_seed(8, i)).unwrap();
        assert!(f.gram_defect() <= 1e-12);
        let b = f.pairing_matrix();
        assert!((&b + &b.transpose()).max_abs_diff(&ComplexMatrix::zeros(3, 3)) <= 1e-12);
        let s = f.pairing_sum();
        assert!((0.0 - 1e-10..=2.0 + 1e-10).contains(&s));
    }
    let full = random_frame(4, 4, 1).unwrap();
    assert!(full.columns.unitarity_defect() <= 1e-12);
    assert!(random_frame(4, 5, 1).is_err());
}

#[test]
fn extremal_frame_values() {
    for (d, k, hi, lo) in [(4, 2, 2.0, 0.0), (6, 5, 4.0, 4.0), (6, 4, 4.0, 2.0)] {
        let e = extremal_frames(d, k).unwrap();
        assert_eq!(e.max_frame.pairing_sum(), hi);
        assert_eq!(e.min_frame.pairing_sum(), lo);
        assert_eq!(pairing_bounds(d, k), (lo as usize, hi as usize));
    }
}
