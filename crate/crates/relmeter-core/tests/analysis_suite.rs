//! The comparison machinery: lemma batteries, exact derivatives against a
//! floating finite-difference shadow, and the threshold case analysis.

mod common;

use common::random_platform;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relmeter_core::analysis::{
    lemma_conclusion_holds, lemma_hypothesis, marginal_sensitivity, sample_lemma_instance,
    split_gain, toy_thresholds, Sensitivity, ToyScenario, ALL_LEMMAS,
};
use relmeter_core::axioms::random::random_split;
use relmeter_core::axioms::transform::equal_parts;
use relmeter_core::indicators::{self, IndicatorKind};
use relmeter_core::platform::{Platform, ServiceId, SubscriberId};
use relmeter_core::rational::{int, rat, to_f64, Rat};

#[test]
fn hypothesis_implies_conclusion_for_every_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for lemma in ALL_LEMMAS {
        for round in 0..200 {
            let (p, i) = sample_lemma_instance(lemma, &mut rng, 6, 8);
            assert!(lemma_hypothesis(lemma, &p, i), "{lemma:?} sampler broke at {round}");
            assert!(
                lemma_conclusion_holds(lemma, &p, i),
                "{lemma:?} violated at round {round} for service {i} on {p:?}"
            );
        }
    }
}

#[test]
fn split_gains_are_nonnegative_for_uniform_style_and_zero_for_shares() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..150 {
        let p = random_platform(&mut rng, 6, 8);
        let target = ServiceId(rng.gen_range(0..p.service_count()));
        let parts = if p.matrix().row(target).is_empty() {
            vec![Vec::new(), Vec::new()]
        } else {
            random_split(&mut rng, &p, target)
        };
        let gain_u = split_gain(&p, target, &parts, IndicatorKind::Uniform).unwrap();
        let gain_su = split_gain(&p, target, &parts, IndicatorKind::SubscriberUniform).unwrap();
        assert!(gain_u >= int(0));
        assert!(gain_su >= int(0));
        let gain_p = split_gain(&p, target, &parts, IndicatorKind::Proportional).unwrap();
        let gain_sp =
            split_gain(&p, target, &parts, IndicatorKind::SubscriberProportional).unwrap();
        assert_eq!(gain_p, int(0));
        assert_eq!(gain_sp, int(0));
    }
}

#[test]
fn equal_split_of_three_services_gains_a_sixth_of_success() {
    // |N| = 3 → |N'| = 4 under a two-way split: 2·σ/4 − σ/3 = σ/6.
    let p = common::worked_example();
    let parts = equal_parts(&p, ServiceId(0), 2);
    let gain = split_gain(&p, ServiceId(0), &parts, IndicatorKind::Uniform).unwrap();
    assert_eq!(gain, rat(15, 6));
}

// ---------------------------------------------------------------------------
// Floating shadow evaluation for the finite-difference checks. These mirror
// the defining formulas in f64 and know nothing of the exact kernels.
// ---------------------------------------------------------------------------

struct Shadow {
    rows: Vec<Vec<f64>>,
    prices: Vec<f64>,
}

impl Shadow {
    fn of(p: &Platform) -> Self {
        let rows = p
            .services()
            .map(|i| p.subscribers().map(|s| to_f64(&p.entry(i, s))).collect())
            .collect();
        let prices = p.prices().iter().map(to_f64).collect();
        Shadow { rows, prices }
    }

    fn sigma(&self) -> f64 {
        self.prices.iter().sum()
    }

    fn proportional(&self, i: usize) -> f64 {
        let row: f64 = self.rows[i].iter().sum();
        let total: f64 = self.rows.iter().map(|r| r.iter().sum::<f64>()).sum();
        row / total * self.sigma()
    }

    fn subscriber_proportional(&self, i: usize) -> f64 {
        (0..self.prices.len())
            .map(|s| {
                let column: f64 = self.rows.iter().map(|r| r[s]).sum();
                if column == 0.0 {
                    0.0
                } else {
                    self.rows[i][s] / column * self.prices[s]
                }
            })
            .sum()
    }
}

fn central_difference(
    p: &Platform,
    kind: IndicatorKind,
    i: usize,
    s: usize,
    step: f64,
) -> f64 {
    let mut plus = Shadow::of(p);
    plus.rows[i][s] += step;
    let mut minus = Shadow::of(p);
    minus.rows[i][s] -= step;
    let eval = |shadow: &Shadow| match kind {
        IndicatorKind::Proportional => shadow.proportional(i),
        IndicatorKind::SubscriberProportional => shadow.subscriber_proportional(i),
        _ => unreachable!("finite differences only apply to the smooth indicators"),
    };
    (eval(&plus) - eval(&minus)) / (2.0 * step)
}

#[test]
fn closed_form_gradients_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut checked = 0;
    while checked < 100 {
        let p = random_platform(&mut rng, 6, 8);
        let i = ServiceId(rng.gen_range(0..p.service_count()));
        let s = SubscriberId(rng.gen_range(0..p.subscriber_count()));
        // Keep C_is − h positive: perturb existing entries only.
        if p.entry(i, s).is_zero() {
            continue;
        }
        let scale = to_f64(&p.matrix().grand_total()).max(1.0);
        let step = 1e-6 * scale;
        for kind in [IndicatorKind::Proportional, IndicatorKind::SubscriberProportional] {
            let exact = match marginal_sensitivity(&p, kind, i, s) {
                Sensitivity::Gradient(g) => to_f64(&g),
                Sensitivity::MembershipDelta { .. } => unreachable!(),
            };
            let fd = central_difference(&p, kind, i.0, s.0, step);
            if exact == 0.0 {
                assert!(fd.abs() < 1e-9, "{kind}: fd {fd} for zero gradient");
            } else {
                let rel = ((fd - exact) / exact).abs();
                assert!(
                    rel <= 1e-6,
                    "{kind} at ({i}, {s}): exact {exact}, fd {fd}, rel {rel}"
                );
            }
        }
        checked += 1;
    }
}

#[test]
fn growing_an_existing_entry_never_moves_subscriber_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..100 {
        let p = random_platform(&mut rng, 6, 8);
        // Pick an existing entry and grow it by a random positive amount.
        let i = ServiceId(rng.gen_range(0..p.service_count()));
        let row = p.matrix().row(i);
        if row.is_empty() {
            continue;
        }
        let (s, _) = row[rng.gen_range(0..row.len())];
        let bump = rat(rng.gen_range(1..=8), rng.gen_range(1..=4));
        let mut entries: Vec<(usize, usize, Rat)> = p
            .matrix()
            .entries()
            .map(|(j, t, q)| (j.0, t.0, q.clone()))
            .collect();
        entries.push((i.0, s.0, bump));
        let grown = Platform::build_raw(p.prices().to_vec(), entries, p.service_count()).unwrap();
        assert_eq!(
            indicators::subscriber_uniform(&p).values(),
            indicators::subscriber_uniform(&grown).values()
        );
        // And the closed-form delta says exactly that.
        assert_eq!(
            marginal_sensitivity(&p, IndicatorKind::SubscriberUniform, i, s),
            Sensitivity::MembershipDelta { own_gain: int(0), incumbent_loss: int(0) }
        );
    }
}

#[test]
fn new_view_delta_matches_direct_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..100 {
        let p = random_platform(&mut rng, 6, 8);
        // Find a zero entry.
        let mut hole = None;
        'outer: for i in p.services() {
            for s in p.subscribers() {
                if p.entry(i, s).is_zero() {
                    hole = Some((i, s));
                    break 'outer;
                }
            }
        }
        let Some((i, s)) = hole else { continue };
        let delta = marginal_sensitivity(&p, IndicatorKind::SubscriberUniform, i, s);
        let Sensitivity::MembershipDelta { own_gain, incumbent_loss } = delta else {
            panic!("subscriber-uniform sensitivity is a membership delta");
        };
        // Materialize the new view and compare service values.
        let mut entries: Vec<(usize, usize, Rat)> = p
            .matrix()
            .entries()
            .map(|(j, t, q)| (j.0, t.0, q.clone()))
            .collect();
        entries.push((i.0, s.0, rat(rng.gen_range(1..=8), rng.gen_range(1..=4))));
        let grown = Platform::build_raw(p.prices().to_vec(), entries, p.service_count()).unwrap();
        let before = indicators::subscriber_uniform(&p);
        let after = indicators::subscriber_uniform(&grown);
        assert_eq!(*after.value(i), before.value(i) + &own_gain);
        for (j, _) in p.matrix().column(s) {
            assert_eq!(*after.value(*j), before.value(*j) - &incumbent_loss);
        }
    }
}

#[test]
fn threshold_sweep_agrees_everywhere() {
    let ms = [rat(1, 4), rat(1, 2), int(1), int(2), int(3), int(4), int(5), int(8)];
    let price_pairs = [(int(1), int(1)), (int(3), int(1)), (int(1), int(3))];
    for m in &ms {
        for (p1, p2) in &price_pairs {
            let scn = ToyScenario::new(m.clone(), p1.clone(), p2.clone()).unwrap();
            let report = toy_thresholds(&scn);
            assert!(
                report.all_agree(),
                "disagreements at M = {m}, p = ({p1}, {p2}): {:?}",
                report.disagreements()
            );
            assert_eq!(report.rows.len(), 12);
        }
    }
}

#[test]
fn boundary_cases_report_ties() {
    use relmeter_core::analysis::Preference;
    // M equal to the sp/su crossover.
    let report = toy_thresholds(&ToyScenario::new(int(1), int(5), int(2)).unwrap());
    let row = report
        .rows
        .iter()
        .find(|r| {
            r.pair
                == (
                    IndicatorKind::SubscriberProportional,
                    IndicatorKind::SubscriberUniform,
                )
                && r.streamer == ServiceId(0)
        })
        .unwrap();
    assert_eq!(row.predicted, Preference::Tie);
    assert_eq!(row.actual, Preference::Tie);

    // p1 = 2·p2 puts the su/u comparison for streamer 0 on its boundary.
    let report = toy_thresholds(&ToyScenario::new(int(3), int(2), int(1)).unwrap());
    let row = report
        .rows
        .iter()
        .find(|r| {
            r.pair == (IndicatorKind::SubscriberUniform, IndicatorKind::Uniform)
                && r.streamer == ServiceId(0)
        })
        .unwrap();
    assert_eq!(row.predicted, Preference::Tie);
    assert_eq!(row.actual, Preference::Tie);

    // M = (p1 − p2)/p2 is the aggregate/user-centric crossover for both.
    let report = toy_thresholds(&ToyScenario::new(int(2), int(3), int(1)).unwrap());
    for streamer in [ServiceId(0), ServiceId(1)] {
        let row = report
            .rows
            .iter()
            .find(|r| {
                r.pair
                    == (
                        IndicatorKind::Proportional,
                        IndicatorKind::SubscriberProportional,
                    )
                    && r.streamer == streamer
            })
            .unwrap();
        assert_eq!(row.actual, Preference::Tie);
        assert_eq!(row.predicted, Preference::Tie);
    }
}
