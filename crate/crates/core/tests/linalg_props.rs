use mpbounds::linalg::{hermitian_eig, partial_trace, psd_sqrt, tensor};
use mpbounds::rng::{complex_gaussian, seeded};
use mpbounds::{ComplexMatrix, DensityMatrix};
use num_complex::Complex64;
use proptest::prelude::*;

fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded(seed);
    let data = (0..rows * cols)
        .map(|_| complex_gaussian::<f64, _>(&mut rng))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}

fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, seed);
    let sum = &g + &g.adjoint();
    sum.scale(0.5)
}

/// `G G^dagger / tr`, rank at most `rank`.
fn random_density(dims: Vec<usize>, rank: usize, seed: u64) -> DensityMatrix {
    let side: usize = dims.iter().product();
    let g = gaussian_matrix(side, rank, seed);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(dims, m.scale(1.0 / tr)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstructs(n in 1usize..=16, seed in any::<u64>()) {
        let h = random_hermitian(n, seed);
        let eig = hermitian_eig(&h).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let back = eig.reconstruct_with(|v| v);
        prop_assert!(back.max_abs_diff(&h) <= 1e-10 * h.frobenius_norm().max(1.0));
        let gram = &eig.vectors.adjoint() * &eig.vectors;
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-10);
    }

    #[test]
    fn psd_sqrt_squares_back(rank in 1usize..=4, seed in any::<u64>()) {
        let rho = random_density(vec![2, 2], rank, seed);
        let s = psd_sqrt(rho.matrix()).unwrap();
        prop_assert!((&s * &s).max_abs_diff(rho.matrix()) <= 1e-10);
        prop_assert!(s.hermitian_deviation() <= 1e-12);
    }

    #[test]
    fn partial_trace_composes(rank in 1usize..=6, seed in any::<u64>()) {
        let rho = random_density(vec![2, 3, 2], rank, seed);
        let direct = partial_trace(&rho, &[0]).unwrap();
        let staged = partial_trace(&partial_trace(&rho, &[0, 2]).unwrap(), &[0]).unwrap();
        prop_assert!(direct.matrix().max_abs_diff(staged.matrix()) <= 1e-12);
        let mid = partial_trace(&rho, &[1]).unwrap();
        prop_assert_eq!(mid.dims(), &[3][..]);
        prop_assert!((mid.matrix().trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(seed in any::<u64>()) {
        let a = random_density(vec![2], 2, seed);
        let b = random_density(vec![3], 2, seed.wrapping_add(1));
        let ab = DensityMatrix::new(vec![2, 3], tensor(a.matrix(), b.matrix())).unwrap();
        prop_assert!(partial_trace(&ab, &[0]).unwrap().matrix().max_abs_diff(a.matrix()) <= 1e-12);
        prop_assert!(partial_trace(&ab, &[1]).unwrap().matrix().max_abs_diff(b.matrix()) <= 1e-12);
    }
}

#[test]
fn density_validation() {
    let not_hermitian = ComplexMatrix::from_vec(
        2,
        2,
        vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
        ],
    )
    .unwrap();
    assert!(DensityMatrix::new(vec![2], not_hermitian).is_err());
    let negative = ComplexMatrix::from_real_diag(&[1.5, -0.5]);
    assert!(DensityMatrix::new(vec![2], negative).is_err());
    let bad_trace = ComplexMatrix::from_real_diag(&[0.5, 0.4]);
    assert!(DensityMatrix::new(vec![2], bad_trace).is_err());
    let mixed = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
    assert!(partial_trace(&mixed, &[2]).is_err());
    assert!(partial_trace(&mixed, &[0, 0]).is_err());
    assert!((mixed.purity() - 0.25).abs() < 1e-15);
}
