use proptest::prelude::*;
use warpineq::linalg::{
    direct_sum, hs_norm, kyfan_norm, multiply, schatten_sum_norm, singular_values, spectral_norm,
    Matrix,
};
use warpineq::spectra::{generate, rng_for, orthogonal_from_rng, GenKind, GenSpec};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn square(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(-5.0f64..5.0, n * n)
            .prop_map(move |d| Matrix::new(n, n, d).unwrap())
    })
}

fn square_pair(max_dim: usize) -> impl Strategy<Value = (Matrix, Matrix)> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(-5.0f64..5.0, 2 * n * n).prop_map(move |d| {
            let (a, b) = d.split_at(n * n);
            (Matrix::new(n, n, a.to_vec()).unwrap(), Matrix::new(n, n, b.to_vec()).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn singular_values_are_orthogonally_invariant(a in square(6), seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let u = orthogonal_from_rng(&mut rng, a.rows()).unwrap();
        let v = orthogonal_from_rng(&mut rng, a.rows()).unwrap();
        let uav = multiply(&multiply(&u, &a).unwrap(), &v).unwrap();
        let s = singular_values(&a).unwrap().singular_values;
        let t = singular_values(&uav).unwrap().singular_values;
        for (x, y) in s.iter().zip(&t) {
            prop_assert!(close(*x, *y, 1e-7), "{s:?} vs {t:?}");
        }
    }

    #[test]
    fn hs_norm_is_l2_of_singular_values(a in square(6)) {
        let s = singular_values(&a).unwrap().singular_values;
        let sum: f64 = s.iter().map(|t| t * t).sum();
        prop_assert!(close(hs_norm(&a).powi(2), sum, 1e-10));
    }

    #[test]
    fn full_kyfan_is_trace_norm(a in square(6)) {
        let v = a.rows();
        prop_assert!(close(kyfan_norm(&a, v).unwrap(), schatten_sum_norm(&a, 1.0).unwrap(), 1e-12));
        prop_assert!(close(kyfan_norm(&a, 1).unwrap(), spectral_norm(&a).unwrap(), 1e-12));
    }

    #[test]
    fn direct_sum_merges_spectra(a in square(4), b in square(4)) {
        let ab = direct_sum(&[a.clone(), b.clone()]).unwrap();
        let mut merged = singular_values(&a).unwrap().singular_values;
        merged.extend(singular_values(&b).unwrap().singular_values);
        merged.sort_by(|x, y| y.total_cmp(x));
        let got = singular_values(&ab).unwrap().singular_values;
        prop_assert_eq!(got.len(), merged.len());
        for (x, y) in got.iter().zip(&merged) {
            prop_assert!(close(*x, *y, 1e-7));
        }
    }

    #[test]
    fn weyl_monotonicity_for_psd_increments((a, c) in square_pair(5)) {
        // A + CᵀC dominates A, so eigenvalues move up.
        let sym = a.symmetrized();
        let psd = multiply(&c.transpose(), &c).unwrap();
        let lo = warpineq::linalg::symmetric_eigen(&sym).unwrap().values();
        let hi = warpineq::linalg::symmetric_eigen(&sym.add(&psd).unwrap()).unwrap().values();
        for (x, y) in lo.iter().zip(&hi) {
            prop_assert!(*y >= *x - 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn text_roundtrip_is_exact(a in square(5)) {
        prop_assert_eq!(Matrix::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), dim in 2usize..7) {
        for kind in [GenKind::PositiveDefinite, GenKind::PdDoublyStochastic, GenKind::Orthogonal] {
            let spec = GenSpec::new(dim, kind, seed);
            prop_assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
    }
}
