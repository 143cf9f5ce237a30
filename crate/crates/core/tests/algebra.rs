//! Transform, ring and tubal-matrix algebra checked against direct oracles.

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use tubal::{
    tsvd, tubal_kron, tubal_kron_all, Direction, TransformSpec, TubalError, TubalMatrix, TubalScalar, TubalTensor,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dft_matches_direct_summation(seed in any::<u64>(), p in 1usize..24) {
        let t = TransformSpec::dft(p).unwrap();
        let x = complex_vec(&mut rng(seed), p);
        prop_assert!(close(&t.forward(&x).unwrap(), &naive_dft(&x), 1e-12));
    }

    #[test]
    fn transform_round_trip_and_norm_scaling(seed in any::<u64>(), p in 1usize..16, scale in 0.1f64..10.0) {
        let mut r = rng(seed);
        for t in [TransformSpec::dft(p).unwrap(), random_scaled_unitary(&mut r, p, scale)] {
            let x = complex_vec(&mut r, p);
            let y = t.forward(&x).unwrap();
            prop_assert!(close(&t.inverse(&y).unwrap(), &x, 1e-12));
            let want = t.c_magnitude().unwrap() * norm(&x);
            prop_assert!((norm(&y) - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn transform_is_linear(seed in any::<u64>(), p in 1usize..16) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let (x, y) = (complex_vec(&mut r, p), complex_vec(&mut r, p));
        let (a, b) = (c(gauss(&mut r), gauss(&mut r)), c(gauss(&mut r), gauss(&mut r)));
        let mix: Vec<_> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let (fx, fy) = (t.forward(&x).unwrap(), t.forward(&y).unwrap());
        let want: Vec<_> = fx.iter().zip(&fy).map(|(u, v)| a * u + b * v).collect();
        prop_assert!(close(&t.forward(&mix).unwrap(), &want, 1e-12));
    }

    #[test]
    fn dft_of_real_fiber_is_conjugate_symmetric(seed in any::<u64>(), p in 2usize..20) {
        let t = TransformSpec::dft(p).unwrap();
        let x: Vec<_> = real_vec(&mut rng(seed), p).into_iter().map(|v| c(v, 0.0)).collect();
        let y = t.forward(&x).unwrap();
        for k in 1..p {
            prop_assert!((y[k] - y[p - k].conj()).norm() <= 1e-12 * norm(&y));
        }
    }

    #[test]
    fn scalar_tproduct_is_circular_convolution(seed in any::<u64>(), p in 1usize..20) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let (a, b) = (complex_vec(&mut r, p), complex_vec(&mut r, p));
        let got = TubalScalar::new(a.clone(), &t).unwrap().tproduct(&TubalScalar::new(b.clone(), &t).unwrap()).unwrap();
        prop_assert!(close(got.values(), &circular_convolution(&a, &b), 1e-12));
    }

    #[test]
    fn scalars_form_a_commutative_ring(seed in any::<u64>(), p in 1usize..12) {
        let mut r = rng(seed);
        let t = random_scaled_unitary(&mut r, p, 2.0);
        let mut draw = || TubalScalar::new(complex_vec(&mut r, p), &t).unwrap();
        let (a, b, d) = (draw(), draw(), draw());
        let ab = a.tproduct(&b).unwrap();
        prop_assert!(close(ab.values(), b.tproduct(&a).unwrap().values(), 1e-12));
        let left = ab.tproduct(&d).unwrap();
        let right = a.tproduct(&b.tproduct(&d).unwrap()).unwrap();
        prop_assert!(close(left.values(), right.values(), 1e-11));
        let dist_l = a.tproduct(&b.add(&d).unwrap()).unwrap();
        let dist_r = ab.add(&a.tproduct(&d).unwrap()).unwrap();
        prop_assert!(close(dist_l.values(), dist_r.values(), 1e-11));
        let one = TubalScalar::identity(&t);
        prop_assert!(close(a.tproduct(&one).unwrap().values(), a.values(), 1e-12));
    }

    #[test]
    fn tproduct_matches_summation_oracle(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, q in 1usize..5, p in 1usize..7) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let a = complex_matrix(&mut r, m, n, &t);
        let b = complex_matrix(&mut r, n, q, &t);
        prop_assert!(close(a.tproduct(&b).unwrap().data(), &summation_tproduct(&a, &b), 1e-10));
        let (ar, br) = (real_matrix(&mut r, m, n, &t), real_matrix(&mut r, n, q, &t));
        let prod = ar.tproduct(&br).unwrap();
        prop_assert!(prod.is_real());
        prop_assert!(close(prod.data(), &summation_tproduct(&ar, &br), 1e-10));
    }

    #[test]
    fn tproduct_is_associative_and_distributive(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, p in 1usize..7) {
        let mut r = rng(seed);
        let t = random_scaled_unitary(&mut r, p, 1.5);
        let a = complex_matrix(&mut r, m, n, &t);
        let b = complex_matrix(&mut r, n, m, &t);
        let b2 = complex_matrix(&mut r, n, m, &t);
        let d = complex_matrix(&mut r, m, n, &t);
        let lhs = a.tproduct(&b).unwrap().tproduct(&d).unwrap();
        let rhs = a.tproduct(&b.tproduct(&d).unwrap()).unwrap();
        prop_assert!(close(lhs.data(), rhs.data(), 1e-10));
        let lhs = a.tproduct(&b.add(&b2).unwrap()).unwrap();
        let rhs = a.tproduct(&b).unwrap().add(&a.tproduct(&b2).unwrap()).unwrap();
        prop_assert!(close(lhs.data(), rhs.data(), 1e-10));
    }

    #[test]
    fn transpose_rules(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, q in 1usize..5, p in 1usize..8) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let a = complex_matrix(&mut r, m, n, &t);
        let b = complex_matrix(&mut r, n, q, &t);
        let ab = a.tproduct(&b).unwrap();
        let h = b.hermitian_transpose().tproduct(&a.hermitian_transpose()).unwrap();
        prop_assert!(close(ab.hermitian_transpose().data(), h.data(), 1e-10));
        let s = b.smallt_transpose().tproduct(&a.smallt_transpose()).unwrap();
        prop_assert!(close(ab.smallt_transpose().data(), s.data(), 1e-10));
        prop_assert!(close(a.hermitian_transpose().hermitian_transpose().data(), a.data(), 1e-12));
    }

    #[test]
    fn unitarity_is_preserved_by_smallt_transpose(seed in any::<u64>(), n in 1usize..6, p in 1usize..7) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let u = tsvd(&complex_matrix(&mut r, n, n + 1, &t)).unwrap().u;
        prop_assert!(u.is_unitary(1e-10));
        prop_assert!(u.smallt_transpose().is_unitary(1e-10));
        let a = complex_matrix(&mut r, n, n, &t).scale(c(3.0, 0.0));
        prop_assert_eq!(a.is_unitary(1e-6), a.smallt_transpose().is_unitary(1e-6));
    }

    #[test]
    fn unitary_multiplication_preserves_norm(seed in any::<u64>(), m in 1usize..6, n in 1usize..5, p in 1usize..8) {
        let mut r = rng(seed);
        let t = random_scaled_unitary(&mut r, p, 0.7);
        let u = tsvd(&complex_matrix(&mut r, m, m, &t)).unwrap().u;
        let a = complex_matrix(&mut r, m, n, &t);
        let ua = u.tproduct(&a).unwrap();
        prop_assert!((ua.frobenius_norm() - a.frobenius_norm()).abs() <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn orthogonal_tubal_matrices_are_frobenius_orthogonal(seed in any::<u64>(), m in 2usize..7, n in 1usize..5, p in 1usize..7) {
        // A1 = U[:, :r] * X and A2 = U[:, r:] * Y satisfy A1^H * A2 = O.
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let u = tsvd(&complex_matrix(&mut r, m, m, &t)).unwrap().u;
        let k = 1 + (seed as usize) % (m - 1);
        let a1 = u.columns(0, k).tproduct(&complex_matrix(&mut r, k, n, &t)).unwrap();
        let a2 = u.columns(k, m - k).tproduct(&complex_matrix(&mut r, m - k, n, &t)).unwrap();
        let cross = a1.hermitian_transpose().tproduct(&a2).unwrap();
        prop_assert!(cross.frobenius_norm() <= 1e-10 * a1.frobenius_norm() * a2.frobenius_norm());
        prop_assert!(a1.inner_product(&a2).unwrap().norm() <= 1e-10 * a1.frobenius_norm() * a2.frobenius_norm());
        let sum = a1.add(&a2).unwrap().frobenius_norm().powi(2);
        let parts = a1.frobenius_norm().powi(2) + a2.frobenius_norm().powi(2);
        prop_assert!((sum - parts).abs() <= 1e-10 * parts);
    }

    #[test]
    fn kronecker_properties(seed in any::<u64>(), dims in proptest::collection::vec(1usize..4, 6), p in 1usize..5) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let a = complex_matrix(&mut r, dims[0], dims[1], &t);
        let b = complex_matrix(&mut r, dims[2], dims[3], &t);
        let cm = complex_matrix(&mut r, dims[1], dims[4], &t);
        let d = complex_matrix(&mut r, dims[3], dims[5], &t);
        let ab = tubal_kron(&a, &b).unwrap();
        prop_assert_eq!(ab.shape(), (dims[0] * dims[2], dims[1] * dims[3]));
        let t_rule = tubal_kron(&a.smallt_transpose(), &b.smallt_transpose()).unwrap();
        prop_assert!(close(ab.smallt_transpose().data(), t_rule.data(), 1e-10));
        let h_rule = tubal_kron(&a.hermitian_transpose(), &b.hermitian_transpose()).unwrap();
        prop_assert!(close(ab.hermitian_transpose().data(), h_rule.data(), 1e-10));
        let mixed = ab.tproduct(&tubal_kron(&cm, &d).unwrap()).unwrap();
        let want = tubal_kron(&a.tproduct(&cm).unwrap(), &b.tproduct(&d).unwrap()).unwrap();
        prop_assert!(close(mixed.data(), want.data(), 1e-10));
        let left = tubal_kron(&ab, &cm).unwrap();
        let right = tubal_kron(&a, &tubal_kron(&b, &cm).unwrap()).unwrap();
        prop_assert!(close(left.data(), right.data(), 1e-10));
        let all = tubal_kron_all(&[a.clone(), b.clone(), cm.clone()]).unwrap();
        prop_assert!(close(all.data(), left.data(), 0.0));
        let u1 = tsvd(&complex_matrix(&mut r, dims[0], dims[0], &t)).unwrap().u;
        let u2 = tsvd(&complex_matrix(&mut r, dims[2], dims[2], &t)).unwrap().u;
        prop_assert!(tubal_kron(&u1, &u2).unwrap().is_unitary(1e-10));
    }

    #[test]
    fn kronecker_of_real_scalars_at_p1_is_classical(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(1).unwrap();
        let (a, b) = (real_matrix(&mut r, m, n, &t), real_matrix(&mut r, n, m, &t));
        let k = tubal_kron(&a, &b).unwrap();
        for (i, j) in (0..m * n).flat_map(|i| (0..n * m).map(move |j| (i, j))) {
            let want = a.value(i / n, j / m, 0) * b.value(i % n, j % m, 0);
            prop_assert!((k.value(i, j, 0) - want).norm() <= 1e-14 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn mode_products_commute_and_compose(seed in any::<u64>(), dims in proptest::collection::vec(1usize..4, 3), p in 1usize..5) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let a = complex_tensor(&mut r, &dims, &t);
        let f = complex_matrix(&mut r, 2, dims[0], &t);
        let g = complex_matrix(&mut r, 3, dims[2], &t);
        let fg = a.mode_n_product(&f, 0).unwrap().mode_n_product(&g, 2).unwrap();
        let gf = a.mode_n_product(&g, 2).unwrap().mode_n_product(&f, 0).unwrap();
        prop_assert!(close(fg.data(), gf.data(), 1e-10));
        let h = complex_matrix(&mut r, 2, 2, &t);
        let twice = a.mode_n_product(&f, 0).unwrap().mode_n_product(&h, 0).unwrap();
        let once = a.mode_n_product(&h.tproduct(&f).unwrap(), 0).unwrap();
        prop_assert!(close(twice.data(), once.data(), 1e-10));
    }

    #[test]
    fn mode_product_is_unfolded_tproduct(seed in any::<u64>(), dims in proptest::collection::vec(1usize..4, 1..5), p in 1usize..5) {
        let mut r = rng(seed);
        let t = TransformSpec::dft(p).unwrap();
        let a = complex_tensor(&mut r, &dims, &t);
        for n in 0..dims.len() {
            let u = complex_matrix(&mut r, 3, dims[n], &t);
            let b = a.mode_n_product(&u, n).unwrap();
            let want = u.tproduct(&a.unfold(n).unwrap()).unwrap();
            prop_assert!(close(b.unfold(n).unwrap().data(), want.data(), 1e-10));
            let back = TubalTensor::fold(&a.unfold(n).unwrap(), n, &dims).unwrap();
            prop_assert_eq!(back.data(), a.data());
        }
    }
}

#[test]
fn worked_scalar_examples() {
    let t = TransformSpec::dft(3).unwrap();
    let one = |v: &[f64]| TubalScalar::from_real(v, &t).unwrap();
    let e = one(&[1.0, 0.0, 0.0]);
    assert_eq!(t.forward(e.values()).unwrap(), vec![c(1.0, 0.0); 3]);
    let got = one(&[1.0, 2.0, 3.0]).tproduct(&one(&[4.0, 5.0, 6.0])).unwrap();
    // circular convolution by hand: (1*4+2*6+3*5, 1*5+2*4+3*6, 1*6+2*5+3*4)
    let want = [31.0, 31.0, 28.0];
    assert!(got.values().iter().zip(want).all(|(z, w)| (z.re - w).abs() < 1e-12 && z.im.abs() < 1e-12));
    let id = TubalMatrix::identity(3, &t);
    let hat = t.apply_along_tubal_axis(id.data(), Direction::Forward).unwrap();
    for k in 0..3 {
        for j in 0..3 {
            for i in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((hat[i + 3 * j + 9 * k] - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn mismatched_operands_are_rejected() {
    let t3 = TransformSpec::dft(3).unwrap();
    let t4 = TransformSpec::dft(4).unwrap();
    let a = TubalMatrix::zeros(2, 3, &t3);
    assert!(matches!(a.tproduct(&TubalMatrix::zeros(2, 2, &t3)), Err(TubalError::Dimension(_))));
    assert!(a.tproduct(&TubalMatrix::zeros(3, 2, &t4)).is_err());
    let other = TransformSpec::dft(3).unwrap();
    assert!(a.tproduct(&TubalMatrix::zeros(3, 1, &other)).is_ok());
    assert!(t3.forward(&[c(1.0, 0.0); 4]).is_err());
}
