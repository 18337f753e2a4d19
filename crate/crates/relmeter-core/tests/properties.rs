//! Structural invariants over randomized platforms.

mod common;

use proptest::prelude::*;
use relmeter_core::indicators::{self, ALL_INDICATORS};
use relmeter_core::platform::{Platform, SubscriberId};
use relmeter_core::rational::{int, rat, sum_grouped, Rat};

/// Random platforms: 3–6 services, 1–7 subscribers, about half the cells
/// filled with small rationals, empty columns repaired deterministically.
fn platform_strategy() -> impl Strategy<Value = Platform> {
    (3usize..=6, 1usize..=7)
        .prop_flat_map(|(n, m)| {
            let cells = proptest::collection::vec((any::<bool>(), 1..=8i64, 1..=4i64), n * m);
            let prices = proptest::collection::vec((1..=6i64, 1..=2i64), m);
            (Just(n), Just(m), cells, prices)
        })
        .prop_map(|(n, m, cells, prices)| {
            let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
            let mut column_hit = vec![false; m];
            for (idx, (present, numer, denom)) in cells.into_iter().enumerate() {
                if present {
                    let (i, s) = (idx / m, idx % m);
                    entries.push((i, s, rat(numer, denom)));
                    column_hit[s] = true;
                }
            }
            for (s, hit) in column_hit.iter().enumerate() {
                if !hit {
                    entries.push((s % n, s, int(1)));
                }
            }
            let prices: Vec<Rat> = prices.into_iter().map(|(a, b)| rat(a, b)).collect();
            Platform::build_raw(prices, entries, n).expect("strategy yields valid platforms")
        })
}

proptest! {
    /// Σ_i R_i = σ exactly, for every indicator.
    #[test]
    fn efficiency_is_exact(p in platform_strategy()) {
        for kind in ALL_INDICATORS {
            let v = indicators::evaluate(kind, &p);
            prop_assert_eq!(v.total(), p.success().clone());
            prop_assert!(v.values().iter().all(|x| *x >= int(0)));
        }
    }

    /// Relabeling services permutes every output identically.
    #[test]
    fn service_permutation_equivariance(p in platform_strategy(), rotation in 0usize..6) {
        let n = p.service_count();
        let perm: Vec<usize> = (0..n).map(|i| (i + rotation) % n).collect();
        let entries: Vec<(usize, usize, Rat)> = p
            .matrix()
            .entries()
            .map(|(i, s, q)| (perm[i.0], s.0, q.clone()))
            .collect();
        let permuted = Platform::build_raw(p.prices().to_vec(), entries, n).unwrap();
        for kind in ALL_INDICATORS {
            let original = indicators::evaluate(kind, &p);
            let moved = indicators::evaluate(kind, &permuted);
            for i in 0..n {
                prop_assert_eq!(
                    original.values()[i].clone(),
                    moved.values()[perm[i]].clone(),
                    "{} at service {}", kind, i
                );
            }
        }
    }

    /// Rescaling consumption leaves all four outputs untouched.
    #[test]
    fn scale_invariance(p in platform_strategy(), numer in 1..=9i64, denom in 1..=5i64) {
        let scaled = p.scaled(&rat(numer, denom)).unwrap();
        for kind in ALL_INDICATORS {
            let original = indicators::evaluate(kind, &p);
            let rescaled = indicators::evaluate(kind, &scaled);
            prop_assert_eq!(original.values(), rescaled.values());
        }
    }

    /// The per-subscriber indicators decompose over single-subscriber
    /// restrictions: evaluating column by column and summing reproduces the
    /// whole platform's vector.
    #[test]
    fn column_decomposability_of_subscriber_indicators(p in platform_strategy()) {
        for kind in [
            indicators::IndicatorKind::SubscriberUniform,
            indicators::IndicatorKind::SubscriberProportional,
        ] {
            let whole = indicators::evaluate(kind, &p);
            let mut summed = vec![int(0); p.service_count()];
            for s in p.subscribers() {
                let single = p.restrict_subscribers(&[s]).unwrap();
                let v = indicators::evaluate(kind, &single);
                for (acc, x) in summed.iter_mut().zip(v.values()) {
                    *acc += x;
                }
            }
            prop_assert_eq!(whole.values(), summed.as_slice(), "{}", kind);
        }
    }

    /// Both matrix orientations agree entry by entry, and the stored totals
    /// match fresh sums.
    #[test]
    fn matrix_orientations_agree(p in platform_strategy()) {
        for i in p.services() {
            for (s, q) in p.matrix().row(i) {
                prop_assert_eq!(p.matrix().get(i, *s), q.clone());
                let via_column = p
                    .matrix()
                    .column(*s)
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, q)| q.clone());
                prop_assert_eq!(via_column, Some(q.clone()));
            }
            let row_total = sum_grouped(p.matrix().row(i).iter().map(|(_, q)| q.clone()));
            prop_assert_eq!(&row_total, p.matrix().row_total(i));
        }
    }

    /// Construction is insensitive to the order of the entry list.
    #[test]
    fn build_is_permutation_insensitive(p in platform_strategy(), seed in any::<u64>()) {
        let mut entries: Vec<(usize, usize, Rat)> = p
            .matrix()
            .entries()
            .map(|(i, s, q)| (i.0, s.0, q.clone()))
            .collect();
        // Seed-driven Fisher–Yates shuffle.
        let mut state = seed | 1;
        for k in (1..entries.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (k + 1);
            entries.swap(k, j);
        }
        let rebuilt = Platform::build_raw(p.prices().to_vec(), entries, p.service_count()).unwrap();
        prop_assert_eq!(rebuilt, p);
    }

    /// σ tracks the kept prices exactly under restriction.
    #[test]
    fn restriction_recomputes_success(p in platform_strategy(), pick in any::<u64>()) {
        let m = p.subscriber_count();
        let keep: Vec<SubscriberId> = (0..m)
            .filter(|s| m == 1 || (pick >> (s % 64)) & 1 == 1)
            .map(SubscriberId)
            .collect();
        let keep = if keep.is_empty() { vec![SubscriberId(0)] } else { keep };
        let restricted = p.restrict_subscribers(&keep).unwrap();
        let expected = sum_grouped(keep.iter().map(|s| p.price(*s).clone()));
        prop_assert_eq!(restricted.success().clone(), expected);
    }

    /// A service with an empty row gets zero from every consumption-aware
    /// indicator and σ/|N| from the uniform one.
    #[test]
    fn zero_row_relevance(p in platform_strategy()) {
        for i in p.services() {
            if p.matrix().row(i).is_empty() {
                prop_assert_eq!(
                    indicators::subscriber_uniform(&p).value(i).clone(), int(0));
                prop_assert_eq!(indicators::proportional(&p).value(i).clone(), int(0));
                prop_assert_eq!(
                    indicators::subscriber_proportional(&p).value(i).clone(), int(0));
                let n = p.service_count() as i64;
                prop_assert_eq!(
                    indicators::uniform(&p).value(i).clone(),
                    p.success() / int(n)
                );
            }
        }
    }
}

#[test]
fn consumer_set_is_never_empty() {
    use common::random_platform;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let p = random_platform(&mut rng, 6, 8);
        let sets = indicators::ConsumerSets::from_platform(&p);
        for s in p.subscribers() {
            assert!(sets.count_of(s) >= 1);
            assert!(sets
                .services_of(s)
                .iter()
                .all(|i| p.entry(*i, s) > int(0)));
        }
    }
}

#[test]
fn relevance_vector_rejects_inefficient_values() {
    use relmeter_core::indicators::{IndicatorTag, RelevanceVector};
    let p = common::worked_example();
    let bad = RelevanceVector::checked(
        IndicatorTag::External,
        vec![int(1), int(1), int(1)],
        p.success(),
    );
    assert!(bad.is_err());
    let good = RelevanceVector::checked(
        IndicatorTag::External,
        vec![int(5), int(5), int(5)],
        p.success(),
    );
    assert!(good.is_ok());
}
