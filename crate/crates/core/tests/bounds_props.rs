use mpbounds::bounds::CHAIN_SLACK;
use mpbounds::measures::measure_vector;
use mpbounds::states::haar_random_state;
use mpbounds::{
    check_conditions, partition_gammas, theorem1_bound, theorem2_bound, theorem3_bound,
    theorem4_bound, theorem5_bound, theorem6_bound, BoundReport, ExponentConfig, MeasureKind,
    MeasureVector, StateVector,
};
use proptest::prelude::*;

fn values(n: usize) -> impl Strategy<Value = MeasureVector> {
    (0.0f64..1.0, prop::collection::vec(0.0f64..1.0, n))
        .prop_map(|(one, p)| MeasureVector::new(one, p).unwrap())
}

fn bare_sum(mv: &MeasureVector, eta: f64) -> f64 {
    mv.pairwise.iter().map(|v| v.powf(eta)).sum()
}

fn assert_ordered(r: &BoundReport) -> Result<(), TestCaseError> {
    prop_assert!(r.chain_ordered(CHAIN_SLACK), "columns out of order: {r:?}");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn weighted_sum_bounds_ignore_label_order(mv in values(4), eta in 2.0f64..6.0, peta in 0.0f64..=2.0, rot in 0usize..4) {
        let mut shuffled = mv.clone();
        shuffled.pairwise.rotate_left(rot);
        shuffled.pairwise.swap(0, 3);
        let m = ExponentConfig::monogamy(2.0, eta).unwrap();
        let p = ExponentConfig::polygamy(2.0, peta).unwrap();
        let (a, b) = (theorem1_bound(&mv, &m).unwrap(), theorem1_bound(&shuffled, &m).unwrap());
        prop_assert!((a.bound_new - b.bound_new).abs() <= 1e-14);
        let (a, b) = (theorem4_bound(&mv, &p).unwrap(), theorem4_bound(&shuffled, &p).unwrap());
        prop_assert!((a.bound_new - b.bound_new).abs() <= 1e-14);
    }

    #[test]
    fn weighted_sum_columns_ordered(mv in values(5), eta in 2.0f64..6.0, peta in 0.0f64..=2.0) {
        assert_ordered(&theorem1_bound(&mv, &ExponentConfig::monogamy(2.0, eta).unwrap()).unwrap())?;
        assert_ordered(&theorem4_bound(&mv, &ExponentConfig::polygamy(2.0, peta).unwrap()).unwrap())?;
    }

    #[test]
    fn two_party_columns_ordered_when_applicable(mv in values(2), eta in 2.0f64..6.0, peta in 0.0f64..=2.0, gamma in 1.0f64..3.0) {
        for r in [
            theorem2_bound(&mv, &ExponentConfig::monogamy(2.0, eta).unwrap(), gamma).unwrap(),
            theorem5_bound(&mv, &ExponentConfig::polygamy(2.0, peta).unwrap(), gamma).unwrap(),
        ] {
            if r.conditions.satisfied {
                assert_ordered(&r)?;
            }
        }
    }

    #[test]
    fn two_party_symmetric_under_swap(mv in values(2), eta in 2.0f64..6.0, gamma in 1.0f64..3.0) {
        let swapped = MeasureVector::new(mv.one_to_rest, vec![mv.pairwise[1], mv.pairwise[0]]).unwrap();
        let cfg = ExponentConfig::monogamy(2.0, eta).unwrap();
        let (a, b) = (theorem2_bound(&mv, &cfg, gamma).unwrap(), theorem2_bound(&swapped, &cfg, gamma).unwrap());
        prop_assert_eq!(a.conditions.satisfied, b.conditions.satisfied);
        if a.conditions.satisfied {
            prop_assert!((a.bound_new - b.bound_new).abs() <= 1e-14);
        }
    }

    #[test]
    fn partition_columns_ordered_when_applicable(mv in values(4), eta in 2.0f64..6.0, peta in 0.0f64..=2.0, m in 1usize..=2) {
        if let Some((g, gp)) = partition_gammas(&mv, m) {
            let r = theorem3_bound(&mv, &ExponentConfig::monogamy(2.0, eta).unwrap(), g, gp, m).unwrap();
            prop_assert!(r.conditions.satisfied);
            assert_ordered(&r)?;
            let r = theorem6_bound(&mv, &ExponentConfig::polygamy(2.0, peta).unwrap(), g, gp, m).unwrap();
            assert_ordered(&r)?;
        }
    }

    #[test]
    fn all_evaluators_telescope_at_t_one(mv4 in values(4), mv2 in values(2)) {
        let m = ExponentConfig::monogamy(2.0, 2.0).unwrap();
        let p = ExponentConfig::polygamy(2.0, 2.0).unwrap();
        let (s4, s2) = (bare_sum(&mv4, 2.0), bare_sum(&mv2, 2.0));
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        prop_assert!(close(theorem1_bound(&mv4, &m).unwrap().bound_new, s4));
        prop_assert!(close(theorem4_bound(&mv4, &p).unwrap().bound_new, s4));
        prop_assert!(close(theorem2_bound(&mv2, &m, 1.0).unwrap().bound_new, s2));
        prop_assert!(close(theorem5_bound(&mv2, &p, 1.0).unwrap().bound_new, s2));
        for k in 1..=3 {
            prop_assert!(close(theorem3_bound(&mv4, &m, 1.0, 1.0, k.min(2)).unwrap().bound_new, s4));
            prop_assert!(close(theorem6_bound(&mv4, &p, 1.0, 1.0, k.min(2)).unwrap().bound_new, s4));
        }
    }

    #[test]
    fn largest_gammas_are_admissible(mv in values(5), m in 1usize..=3) {
        if let Some((g, gp)) = partition_gammas(&mv, m) {
            let c = check_conditions(&mv, g, gp, 2.0).unwrap();
            prop_assert!(c.admissible.contains(&m));
            let c = check_conditions(&mv, g * 1.01, gp, 2.0).unwrap();
            if g > 1.0 + 1e-9 && c.admissible.contains(&m) {
                prop_assert!(partition_gammas(&mv, m).unwrap().0 >= g * 1.01 * (1.0 - 1e-9));
            }
        }
    }
}

fn soundness_on_haar(n: usize, seeds: std::ops::Range<u64>) {
    for seed in seeds {
        let psi: StateVector = haar_random_state(n, seed).unwrap();
        let c = measure_vector(&psi, MeasureKind::Concurrence).unwrap();
        let ca = measure_vector(&psi, MeasureKind::ConcurrenceOfAssistance).unwrap();
        for eta in [2.0, 3.0, 4.0] {
            let cfg = ExponentConfig::monogamy(2.0, eta).unwrap();
            let r = theorem1_bound(&c, &cfg).unwrap();
            assert!(!r.is_violation(), "seed {seed}: {r:?}");
            if n == 3 {
                for g in [1.0, 1.2] {
                    let r = theorem2_bound(&c, &cfg, g).unwrap();
                    assert!(!r.is_violation(), "seed {seed}: {r:?}");
                }
            } else if let Some((g, gp)) = partition_gammas(&c, 1) {
                let r = theorem3_bound(&c, &cfg, g, gp, 1).unwrap();
                assert!(!r.is_violation(), "seed {seed}: {r:?}");
            }
        }
        for eta in [0.5, 1.0, 2.0] {
            let cfg = ExponentConfig::polygamy(2.0, eta).unwrap();
            let r = theorem4_bound(&ca, &cfg).unwrap();
            assert!(!r.is_violation(), "seed {seed}: {r:?}");
            if n == 3 {
                let r = theorem5_bound(&ca, &cfg, 1.0).unwrap();
                assert!(!r.is_violation(), "seed {seed}: {r:?}");
            }
        }
    }
}

#[test]
fn sound_on_random_three_qubit_states() {
    soundness_on_haar(3, 0..100);
}

#[test]
fn sound_on_random_four_qubit_states() {
    soundness_on_haar(4, 0..40);
}

#[test]
fn larger_exponent_tightens_chain_gap() {
    // At t = 1 every column equals the bare sum; above it the new bound pulls ahead.
    let mv = MeasureVector::new(0.9, vec![0.6, 0.3]).unwrap();
    let at_one = theorem2_bound(&mv, &ExponentConfig::monogamy(2.0, 2.0).unwrap(), 2.0).unwrap();
    assert!((at_one.bound_new - at_one.bound_chain_tail).abs() <= 1e-15);
    let above = theorem2_bound(&mv, &ExponentConfig::monogamy(2.0, 3.0).unwrap(), 1.5).unwrap();
    assert!(
        above.bound_new > above.bound_chain_mid && above.bound_chain_mid > above.bound_chain_tail
    );
}

#[test]
fn single_and_double_precision_agree() {
    let mv64 = MeasureVector::new(0.95, vec![0.7, 0.2, 0.1]).unwrap();
    let mv32 = mpbounds::measures::MeasureVector::new(0.95f32, vec![0.7, 0.2, 0.1]).unwrap();
    let r64 = theorem3_bound(
        &mv64,
        &ExponentConfig::monogamy(2.0, 3.0).unwrap(),
        1.0,
        1.0,
        1,
    )
    .unwrap();
    let cfg32 = mpbounds::bounds::ExponentConfig::monogamy(2.0f32, 3.0).unwrap();
    let r32 = theorem3_bound(&mv32, &cfg32, 1.0, 1.0, 1).unwrap();
    assert!((r64.bound_new - r32.bound_new as f64).abs() <= 1e-5);
    assert_eq!(r64.conditions.satisfied, r32.conditions.satisfied);
}
