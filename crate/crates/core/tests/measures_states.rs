use mpbounds::linalg::{partial_trace, tensor};
use mpbounds::measures::{
    concurrence_of_assistance, convex_roof_oracle, measure_vector, pure_bipartite_concurrence,
    purity_concurrence, tangle_three_qubit, wootters_concurrence,
};
use mpbounds::rng::{complex_gaussian, seeded};
use mpbounds::states::{catalog, generalized_schmidt_state, ghz_state, haar_random_state, w_state};
use mpbounds::{
    ComplexMatrix, DensityMatrix, GeneralizedSchmidt, MeasureKind, RoofMode, StateVector,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_density(rank: usize, seed: u64) -> DensityMatrix {
    let mut rng = seeded(seed);
    let data = (0..4 * rank)
        .map(|_| complex_gaussian::<f64, _>(&mut rng))
        .collect();
    let g = ComplexMatrix::from_vec(4, rank, data).unwrap();
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(vec![2, 2], m.scale(1.0 / tr)).unwrap()
}

fn random_unitary_2(seed: u64) -> ComplexMatrix {
    let mut rng = seeded(seed);
    let a = complex_gaussian::<f64, _>(&mut rng);
    let b = complex_gaussian::<f64, _>(&mut rng);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    ComplexMatrix::from_vec(2, 2, vec![a, b, -b.conj() * phase, a.conj() * phase]).unwrap()
}

fn schmidt_params() -> impl Strategy<Value = ([f64; 5], f64)> {
    (
        prop::array::uniform5(0.0f64..1.0),
        0.0f64..=std::f64::consts::PI,
    )
        .prop_filter_map("nonzero norm", |(l, phi)| {
            let n = l.iter().map(|v| v * v).sum::<f64>().sqrt();
            (n > 1e-3).then(|| (l.map(|v| v / n), phi))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn assistance_dominates_concurrence(rank in 1usize..=4, seed in any::<u64>()) {
        let rho = random_density(rank, seed);
        let c = wootters_concurrence(&rho).unwrap();
        let ca = concurrence_of_assistance(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        prop_assert!(ca >= c - 1e-12);
    }

    #[test]
    fn local_unitaries_preserve_measures(rank in 1usize..=4, seed in any::<u64>()) {
        let rho = random_density(rank, seed);
        let w = tensor(&random_unitary_2(seed ^ 1), &random_unitary_2(seed ^ 2));
        let rotated = &(&w * rho.matrix()) * &w.adjoint();
        let rho2 = DensityMatrix::new(vec![2, 2], rotated).unwrap();
        prop_assert!((wootters_concurrence(&rho).unwrap() - wootters_concurrence(&rho2).unwrap()).abs() <= 1e-9);
        prop_assert!(
            (concurrence_of_assistance(&rho).unwrap() - concurrence_of_assistance(&rho2).unwrap()).abs() <= 1e-9
        );
    }

    #[test]
    fn generalized_schmidt_closed_forms((l, phi) in schmidt_params()) {
        let psi = generalized_schmidt_state(&GeneralizedSchmidt::new(l, phi).unwrap()).unwrap();
        let c = measure_vector(&psi, MeasureKind::Concurrence).unwrap();
        let ca = measure_vector(&psi, MeasureKind::ConcurrenceOfAssistance).unwrap();
        let [l0, _, l2, l3, l4] = l;
        prop_assert!((c.pairwise[0] - 2.0 * l0 * l3).abs() <= 1e-9);
        prop_assert!((c.pairwise[1] - 2.0 * l0 * l2).abs() <= 1e-9);
        prop_assert!((c.one_to_rest - 2.0 * l0 * (l2 * l2 + l3 * l3 + l4 * l4).sqrt()).abs() <= 1e-9);
        let residual = 4.0 * l0 * l0 * l4 * l4;
        for i in 0..2 {
            prop_assert!((ca.pairwise[i].powi(2) - c.pairwise[i].powi(2) - residual).abs() <= 1e-9);
        }
        prop_assert!((tangle_three_qubit(&psi).unwrap() - residual).abs() <= 1e-9);
    }

    #[test]
    fn pure_concurrence_routes_agree(n in 2usize..=5, seed in any::<u64>(), mask in 1usize..31) {
        let psi: StateVector = haar_random_state(n.max(2), seed).unwrap();
        let side: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!side.is_empty() && side.len() < n);
        let a = pure_bipartite_concurrence(&psi, &side).unwrap();
        let b = purity_concurrence(&psi, &side).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }
}

#[test]
fn catalog_values() {
    for n in 2..=5 {
        let w: StateVector = w_state(n).unwrap();
        let g: StateVector = ghz_state(n).unwrap();
        if n >= 3 {
            let mw = measure_vector(&w, MeasureKind::Concurrence).unwrap();
            assert!((mw.one_to_rest - 2.0 * ((n - 1) as f64).sqrt() / n as f64).abs() <= 1e-12);
            assert!(mw
                .pairwise
                .iter()
                .all(|&v| (v - 2.0 / n as f64).abs() <= 1e-12));
            let mg = measure_vector(&g, MeasureKind::Concurrence).unwrap();
            assert!((mg.one_to_rest - 1.0).abs() <= 1e-12);
            assert!(mg.pairwise.iter().all(|&v| v == 0.0));
        }
    }
    let ex1: StateVector = catalog("example1").unwrap();
    assert_eq!(ex1, catalog::<f64>("w4").unwrap());
    assert!(catalog::<f64>("w6").is_err());
}

#[test]
fn haar_marginal_purity_moment() {
    // E[tr rho_A^2] = (d_A + d_B) / (d_A d_B + 1) = 6/9 for one qubit against two.
    let samples = 4000;
    let mean: f64 = (0..samples)
        .map(|s| {
            let psi: StateVector = haar_random_state(3, s).unwrap();
            psi.reduced(&[0]).unwrap().purity()
        })
        .sum::<f64>()
        / samples as f64;
    assert!((mean - 2.0 / 3.0).abs() <= 0.01, "mean purity {mean}");
}

#[test]
fn reduced_state_matches_partial_trace() {
    let psi: StateVector = haar_random_state(4, 11).unwrap();
    let full = psi.density_matrix();
    let direct = psi.reduced(&[0, 2]).unwrap();
    let traced = partial_trace(&full, &[0, 2]).unwrap();
    assert!(direct.matrix().max_abs_diff(traced.matrix()) <= 1e-12);
}

#[test]
fn roof_oracle_brackets_closed_forms() {
    for seed in 0..8 {
        let rho = random_density(2, 100 + seed);
        let c = wootters_concurrence(&rho).unwrap();
        let ca = concurrence_of_assistance(&rho).unwrap();
        let lo = convex_roof_oracle(&rho, RoofMode::Min, 1500, seed).unwrap();
        let hi = convex_roof_oracle(&rho, RoofMode::Max, 1500, seed).unwrap();
        assert!(lo >= c - 1e-9 && lo - c <= 2e-2, "min {lo} vs {c}");
        assert!(hi <= ca + 1e-9 && ca - hi <= 2e-2, "max {hi} vs {ca}");
    }
}

#[test]
fn state_files_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let psi: StateVector = haar_random_state(3, 5).unwrap();
    psi.save(&path).unwrap();
    assert_eq!(StateVector::load(&path).unwrap(), psi);
    std::fs::write(&path, "{\"n_qubits\": 2}").unwrap();
    assert!(StateVector::load(&path).is_err());
    assert!(StateVector::load(dir.path().join("missing.json")).is_err());
}
