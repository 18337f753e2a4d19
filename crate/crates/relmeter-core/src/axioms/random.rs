//! Seeded random platform generation for the falsification trials.
//!
//! Sizes are uniform over [3, max_services] × [1, max_subscribers], entries
//! appear with probability one half and hold small rationals, and columns
//! that came out empty are repaired so the platform stays in the model's
//! domain. Every check derives its generator from the configured seed, so
//! witnesses can be replayed.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::Rng;

use crate::platform::{Platform, ServiceId, SubscriberId};
use crate::rational::Rat;

pub fn small_positive_rational<R: Rng>(rng: &mut R) -> Rat {
    const DENOMS: [i64; 4] = [1, 2, 3, 4];
    let numer = rng.gen_range(1..=8i64);
    let denom = DENOMS[rng.gen_range(0..DENOMS.len())];
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn small_positive_price<R: Rng>(rng: &mut R) -> Rat {
    const DENOMS: [i64; 2] = [1, 2];
    let numer = rng.gen_range(1..=6i64);
    let denom = DENOMS[rng.gen_range(0..DENOMS.len())];
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// A random valid platform: |N| ≥ 3, |S| ≥ 1, no zero columns.
pub fn random_platform<R: Rng>(rng: &mut R, max_services: usize, max_subscribers: usize) -> Platform {
    let services = rng.gen_range(3..=max_services.max(3));
    let subscribers = rng.gen_range(1..=max_subscribers.max(1));
    random_platform_of(rng, services, subscribers)
}

/// A random valid platform of exactly the given dimensions.
pub fn random_platform_of<R: Rng>(rng: &mut R, services: usize, subscribers: usize) -> Platform {
    let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
    let mut column_hit = alloc::vec![false; subscribers];
    for i in 0..services {
        for s in 0..subscribers {
            if rng.gen_bool(0.5) {
                entries.push((i, s, small_positive_rational(rng)));
                column_hit[s] = true;
            }
        }
    }
    for (s, hit) in column_hit.iter().enumerate() {
        if !hit {
            entries.push((rng.gen_range(0..services), s, small_positive_rational(rng)));
        }
    }
    let prices: Vec<Rat> = (0..subscribers).map(|_| small_positive_price(rng)).collect();
    Platform::build_raw(prices, entries, services).expect("random platform is valid")
}

/// Rebuilds `p` with row `j` replaced by `row` (sparse, may be empty).
/// Columns left empty by the replacement are repaired with an entry on a
/// service outside `protect`, so planted structure survives the repair.
fn replace_row<R: Rng>(
    rng: &mut R,
    p: &Platform,
    j: ServiceId,
    row: &[(SubscriberId, Rat)],
    protect: &[ServiceId],
) -> Platform {
    let mut entries: Vec<(usize, usize, Rat)> = p
        .matrix()
        .entries()
        .filter(|(i, _, _)| *i != j)
        .map(|(i, s, q)| (i.0, s.0, q.clone()))
        .collect();
    for (s, q) in row {
        entries.push((j.0, s.0, q.clone()));
    }
    let mut column_total = alloc::vec![false; p.subscriber_count()];
    for (_, s, _) in &entries {
        column_total[*s] = true;
    }
    let free: Vec<usize> = (0..p.service_count())
        .filter(|i| *i != j.0 && !protect.contains(&ServiceId(*i)))
        .collect();
    for (s, hit) in column_total.iter().enumerate() {
        if !hit {
            // |N| ≥ 3 guarantees a service outside {j} ∪ protect.
            let i = free[rng.gen_range(0..free.len())];
            entries.push((i, s, small_positive_rational(rng)));
        }
    }
    Platform::build_raw(p.prices().to_vec(), entries, p.service_count())
        .expect("row replacement keeps the platform valid")
}

/// A platform on which services `a` and `b` hold identical rows.
pub fn with_duplicate_rows<R: Rng>(rng: &mut R, base: &Platform) -> (Platform, ServiceId, ServiceId) {
    let a = ServiceId(rng.gen_range(0..base.service_count()));
    let mut b = a;
    while b == a {
        b = ServiceId(rng.gen_range(0..base.service_count()));
    }
    let row: Vec<(SubscriberId, Rat)> = base.matrix().row(a).to_vec();
    (replace_row(rng, base, b, &row, &[a]), a, b)
}

/// A platform on which services `a` and `b` have identical supports but
/// independently drawn positive values.
pub fn with_support_twins<R: Rng>(rng: &mut R, base: &Platform) -> (Platform, ServiceId, ServiceId) {
    let a = ServiceId(rng.gen_range(0..base.service_count()));
    let mut b = a;
    while b == a {
        b = ServiceId(rng.gen_range(0..base.service_count()));
    }
    let row: Vec<(SubscriberId, Rat)> = base
        .matrix()
        .row(a)
        .iter()
        .map(|(s, _)| (*s, small_positive_rational(rng)))
        .collect();
    (replace_row(rng, base, b, &row, &[a]), a, b)
}

/// A platform on which service `z` consumes nothing at all.
pub fn with_zero_row<R: Rng>(rng: &mut R, base: &Platform) -> (Platform, ServiceId) {
    let z = ServiceId(rng.gen_range(0..base.service_count()));
    (replace_row(rng, base, z, &[], &[]), z)
}

/// A random service group of size ≥ 2 with a chosen survivor.
pub fn random_service_group<R: Rng>(rng: &mut R, p: &Platform) -> (Vec<ServiceId>, ServiceId) {
    let n = p.service_count();
    let size = rng.gen_range(2..=n);
    let mut pool: Vec<usize> = (0..n).collect();
    let mut group = Vec::with_capacity(size);
    for _ in 0..size {
        let pick = rng.gen_range(0..pool.len());
        group.push(ServiceId(pool.swap_remove(pick)));
    }
    let survivor = group[rng.gen_range(0..group.len())];
    (group, survivor)
}

/// A random subscriber group of size ≥ 2 with a chosen survivor.
/// Requires |S| ≥ 2.
pub fn random_subscriber_group<R: Rng>(rng: &mut R, p: &Platform) -> (Vec<SubscriberId>, SubscriberId) {
    let m = p.subscriber_count();
    let size = rng.gen_range(2..=m);
    let mut pool: Vec<usize> = (0..m).collect();
    let mut group = Vec::with_capacity(size);
    for _ in 0..size {
        let pick = rng.gen_range(0..pool.len());
        group.push(SubscriberId(pool.swap_remove(pick)));
    }
    let survivor = group[rng.gen_range(0..group.len())];
    (group, survivor)
}

/// A random split of the target row into two parts: each entry is divided by
/// a random interior fraction, so both parts keep the full support.
pub fn random_split<R: Rng>(
    rng: &mut R,
    p: &Platform,
    target: ServiceId,
) -> Vec<Vec<(SubscriberId, Rat)>> {
    let mut first: Vec<(SubscriberId, Rat)> = Vec::new();
    let mut second: Vec<(SubscriberId, Rat)> = Vec::new();
    for (s, q) in p.matrix().row(target) {
        let share = Rat::new(BigInt::from(rng.gen_range(1..=3i64)), BigInt::from(4));
        let left = q * &share;
        let right = q - &left;
        first.push((*s, left));
        second.push((*s, right));
    }
    alloc::vec![first, second]
}

/// A random scale factor strictly between 1/4 and 4, never 1.
pub fn random_scale<R: Rng>(rng: &mut R) -> Rat {
    loop {
        let factor = Rat::new(
            BigInt::from(rng.gen_range(1..=8i64)),
            BigInt::from(rng.gen_range(1..=4i64)),
        );
        if factor != Rat::from_integer(BigInt::from(1)) {
            return factor;
        }
    }
}
