//! The axiom battery: verdict grid, characterization consistency, witness
//! replay, and the transformation-level invariants behind them.

mod common;

use common::random_platform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relmeter_core::axioms::transform::{
    compose_platforms, equal_parts, merge_services, merge_subscribers, split_service,
    Transformation,
};
use relmeter_core::axioms::{
    check_axiom, expected_to_hold, table1_matrix, theorem_consistency, AxiomId, CheckConfig,
    Characterization, SensitivityFamily, ALL_CHARACTERIZATIONS, TABLE_ROWS,
};
use relmeter_core::indicators::{self, IndicatorKind, ALL_INDICATORS};
use relmeter_core::platform::{Platform, ServiceId, SubscriberId};
use relmeter_core::rational::{int, rat, Rat};

fn fast_config() -> CheckConfig {
    CheckConfig { trials: 60, rng_seed: 97, ..CheckConfig::default() }
}

#[test]
fn verdict_grid_reproduces_the_published_pattern() {
    let grid = table1_matrix(&fast_config());
    assert_eq!(grid.cells.len(), 36);
    assert!(
        grid.matches_expected(),
        "mismatched cells: {:?}",
        grid.mismatches()
    );
}

#[test]
fn grid_is_deterministic_for_a_seed() {
    let a = table1_matrix(&fast_config());
    let b = table1_matrix(&fast_config());
    for (x, y) in a.cells.iter().zip(&b.cells) {
        assert_eq!(x.holds, y.holds);
        assert_eq!(x.note, y.note);
        assert_eq!(x.witness.is_some(), y.witness.is_some());
    }
}

#[test]
fn failing_cells_carry_replayable_witnesses() {
    let cfg = fast_config();
    let grid = table1_matrix(&cfg);
    for axiom in TABLE_ROWS {
        for kind in ALL_INDICATORS {
            let cell = grid.verdict(axiom, kind);
            if !cell.holds {
                let witness = cell.witness.as_ref().expect("failing cell must carry a witness");
                assert!(
                    witness.replay(&kind, &cfg),
                    "witness for {axiom}/{kind} does not replay"
                );
            } else {
                assert!(cell.witness.is_none());
            }
        }
    }
}

#[test]
fn uniform_merge_manipulation_is_detected() {
    let verdict = check_axiom(AxiomId::NonManipulability, &IndicatorKind::Uniform, &fast_config());
    assert!(!verdict.holds);
    let witness = verdict.witness.unwrap();
    // The registered scenario: one subscriber, rows (0), (1), (5/2); the pair
    // held 2/3 before the merge and 1/2 after.
    assert_eq!(witness.before, vec![rat(2, 3)]);
    assert_eq!(witness.after, vec![rat(1, 2)]);
    match witness.transformation {
        Transformation::MergeServices { ref group, survivor } => {
            assert_eq!(group.as_slice(), &[ServiceId(0), ServiceId(1)]);
            assert_eq!(survivor, ServiceId(0));
        }
        ref other => panic!("unexpected transformation {other:?}"),
    }
}

#[test]
fn efficiency_holds_for_every_builtin() {
    for kind in ALL_INDICATORS {
        let verdict = check_axiom(AxiomId::Efficiency, &kind, &fast_config());
        assert!(verdict.holds, "{kind}");
    }
}

#[test]
fn proportional_sensitivity_gap_persists() {
    let cfg = fast_config();
    let verdict = check_axiom(AxiomId::ConsumptionSensitivity, &IndicatorKind::Proportional, &cfg);
    assert!(!verdict.holds);
    let witness = verdict.witness.unwrap();
    // The diverging-column pair at unit price keeps a relevance gap of 2/3.
    assert_eq!(witness.after, vec![rat(2, 3)]);
    match witness.transformation {
        Transformation::SensitivityPair { n, .. } => {
            assert_eq!(n, cfg.sensitivity_sequence_length)
        }
        ref other => panic!("unexpected transformation {other:?}"),
    }
}

#[test]
fn sensitivity_input_gap_shrinks_along_the_sequence() {
    let family = SensitivityFamily::DivergingColumn { price: int(1) };
    let mut previous: Option<Rat> = None;
    for n in 1..=16 {
        let gap = family.input_gap(n);
        if let Some(prev) = previous {
            assert!(gap < prev, "input gap must shrink at n = {n}");
        }
        previous = Some(gap);
    }
}

#[test]
fn characterizations_pin_down_exactly_their_indicator() {
    let cfg = fast_config();
    for characterization in ALL_CHARACTERIZATIONS {
        let report = theorem_consistency(characterization, &cfg);
        assert!(
            report.is_consistent(),
            "{:?} should single out {}",
            characterization,
            characterization.indicator()
        );
        for kind in ALL_INDICATORS {
            if kind != characterization.indicator() {
                assert!(
                    !report.failures(kind).is_empty(),
                    "{kind} must fail some axiom of {characterization:?}"
                );
            }
        }
    }
}

#[test]
fn independence_failures_match_the_pattern() {
    // Composition + non-manipulability: the uniform and subscriber-uniform
    // indicators fall to manipulation, the proportional one to composition.
    let report = theorem_consistency(Characterization::SubscriberProportional, &fast_config());
    assert_eq!(report.failures(IndicatorKind::Uniform), vec![AxiomId::NonManipulability]);
    assert_eq!(
        report.failures(IndicatorKind::SubscriberUniform),
        vec![AxiomId::NonManipulability]
    );
    assert_eq!(report.failures(IndicatorKind::Proportional), vec![AxiomId::Composition]);
    assert!(report.failures(IndicatorKind::SubscriberProportional).is_empty());

    // Sharing proofness + non-manipulability singles out the proportional
    // indicator; its siblings fail as the grid predicts.
    let report = theorem_consistency(Characterization::Proportional, &fast_config());
    assert_eq!(report.failures(IndicatorKind::Uniform), vec![AxiomId::NonManipulability]);
    assert!(report
        .failures(IndicatorKind::SubscriberUniform)
        .contains(&AxiomId::SharingProofness));
    assert!(report
        .failures(IndicatorKind::SubscriberProportional)
        .contains(&AxiomId::SharingProofness));
}

#[test]
fn expected_pattern_is_internally_consistent() {
    // 25 holds and 11 violations, and each characterization's axioms hold
    // for its indicator.
    let mut holds = 0;
    for axiom in TABLE_ROWS {
        for kind in ALL_INDICATORS {
            if expected_to_hold(axiom, kind) {
                holds += 1;
            }
        }
    }
    assert_eq!(holds, 25);
    for c in ALL_CHARACTERIZATIONS {
        for axiom in c.axioms() {
            assert!(expected_to_hold(*axiom, c.indicator()));
        }
    }
}

// ---------------------------------------------------------------------------
// Transformation-level invariants behind the grid.
// ---------------------------------------------------------------------------

#[test]
fn composition_is_additive_for_per_subscriber_indicators() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.gen_range(3..=6);
        let a = {
            let m = rng.gen_range(1..=6);
            random_platform_of(&mut rng, n, m)
        };
        let b = {
            let m = rng.gen_range(1..=6);
            random_platform_of(&mut rng, n, m)
        };
        let combined = compose_platforms(&a, &b).unwrap();
        for kind in [
            IndicatorKind::Uniform,
            IndicatorKind::SubscriberUniform,
            IndicatorKind::SubscriberProportional,
        ] {
            let whole = indicators::evaluate(kind, &combined);
            let left = indicators::evaluate(kind, &a);
            let right = indicators::evaluate(kind, &b);
            let sum: Vec<Rat> = left
                .values()
                .iter()
                .zip(right.values())
                .map(|(x, y)| x + y)
                .collect();
            assert_eq!(whole.values(), sum.as_slice(), "{kind}");
        }
    }
}

#[test]
fn proportional_composition_counterexample_is_stable() {
    // Columns (0,1,1) and (2,1,1) under unit prices.
    let a = Platform::from_dense(vec![int(1)], vec![vec![int(0)], vec![int(1)], vec![int(1)]])
        .unwrap();
    let b = Platform::from_dense(vec![int(1)], vec![vec![int(2)], vec![int(1)], vec![int(1)]])
        .unwrap();
    let combined = compose_platforms(&a, &b).unwrap();
    let whole = indicators::proportional(&combined);
    assert_eq!(whole.values(), &[rat(2, 3), rat(2, 3), rat(2, 3)]);
    let summed: Vec<Rat> = indicators::proportional(&a)
        .values()
        .iter()
        .zip(indicators::proportional(&b).values())
        .map(|(x, y)| x + y)
        .collect();
    assert_eq!(summed, vec![rat(1, 2), rat(3, 4), rat(3, 4)]);
    assert_ne!(whole.values(), summed.as_slice());
}

#[test]
fn merging_services_preserves_consumption_share_totals() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let p = random_platform(&mut rng, 6, 8);
        let (group, survivor) = random_group(&mut rng, p.service_count());
        let merged = merge_services(&p, &group, survivor).unwrap();
        let removed_below = group.iter().filter(|i| i.0 < survivor.0).count();
        let survivor_after = ServiceId(survivor.0 - removed_below);
        for kind in [IndicatorKind::Proportional, IndicatorKind::SubscriberProportional] {
            let before = indicators::evaluate(kind, &p);
            let group_sum = group
                .iter()
                .fold(int(0), |acc, i| acc + before.value(*i));
            let after = indicators::evaluate(kind, &merged);
            assert_eq!(*after.value(survivor_after), group_sum, "{kind}");
        }
    }
}

#[test]
fn splitting_never_hurts_uniform_style_indicators() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let p = random_platform(&mut rng, 6, 8);
        let target = ServiceId(rng.gen_range(0..p.service_count()));
        let parts = equal_parts(&p, target, rng.gen_range(2..=3));
        let split = split_service(&p, target, &parts).unwrap();
        for kind in [IndicatorKind::Uniform, IndicatorKind::SubscriberUniform] {
            let before = indicators::evaluate(kind, &p).value(target).clone();
            let after = indicators::evaluate(kind, &split);
            let parts_total = (0..parts.len())
                .map(|k| after.value(ServiceId(target.0 + k)).clone())
                .fold(int(0), |acc, v| acc + v);
            assert!(parts_total >= before, "{kind}: {parts_total} < {before}");
        }
    }
}

#[test]
fn pooling_subscriptions_never_moves_uniform_or_proportional() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let n = rng.gen_range(3..=6);
        let m = rng.gen_range(2..=8);
        let p = random_platform_of(&mut rng, n, m);
        let (group, survivor) = random_subscriber_group(&mut rng, m);
        let pooled = merge_subscribers(&p, &group, survivor).unwrap();
        for kind in [IndicatorKind::Uniform, IndicatorKind::Proportional] {
            assert_eq!(
                indicators::evaluate(kind, &p).values(),
                indicators::evaluate(kind, &pooled).values(),
                "{kind}"
            );
        }
    }
}

// Local deterministic generators for the invariants above.

fn random_platform_of(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Platform {
    let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
    let mut hit = vec![false; m];
    for i in 0..n {
        for s in 0..m {
            if rng.gen_bool(0.5) {
                entries.push((i, s, rat(rng.gen_range(1..=8), rng.gen_range(1..=4))));
                hit[s] = true;
            }
        }
    }
    for (s, h) in hit.iter().enumerate() {
        if !h {
            entries.push((rng.gen_range(0..n), s, int(1)));
        }
    }
    let prices: Vec<Rat> = (0..m).map(|_| rat(rng.gen_range(1..=6), rng.gen_range(1..=2))).collect();
    Platform::build_raw(prices, entries, n).unwrap()
}

fn random_group(rng: &mut ChaCha8Rng, n: usize) -> (Vec<ServiceId>, ServiceId) {
    let size = rng.gen_range(2..=n);
    let mut pool: Vec<usize> = (0..n).collect();
    let mut group = Vec::new();
    for _ in 0..size {
        let pick = rng.gen_range(0..pool.len());
        group.push(ServiceId(pool.swap_remove(pick)));
    }
    let survivor = group[rng.gen_range(0..group.len())];
    (group, survivor)
}

fn random_subscriber_group(rng: &mut ChaCha8Rng, m: usize) -> (Vec<SubscriberId>, SubscriberId) {
    let size = rng.gen_range(2..=m);
    let mut pool: Vec<usize> = (0..m).collect();
    let mut group = Vec::new();
    for _ in 0..size {
        let pick = rng.gen_range(0..pool.len());
        group.push(SubscriberId(pool.swap_remove(pick)));
    }
    let survivor = group[rng.gen_range(0..group.len())];
    (group, survivor)
}
