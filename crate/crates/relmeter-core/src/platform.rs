//! The platform data model: services, subscribers, prices, and the sparse
//! consumption matrix, all validated at construction.
//!
//! A platform is immutable once built. Transformations (`scaled`,
//! `restrict_subscribers`, and the service/subscriber surgery in
//! [`crate::axioms::transform`]) always produce new platforms.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::rational::{sum_grouped, Rat};

/// Dense index of a service (a row of the consumption matrix).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ServiceId(pub usize);

/// Dense index of a subscriber (a column of the consumption matrix).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubscriberId(pub usize);

impl core::fmt::Display for ServiceId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl core::fmt::Display for SubscriberId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A validated nonnegative consumption amount.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantity(Rat);

impl Quantity {
    pub fn new(value: Rat) -> Result<Self, PlatformError> {
        if value < Rat::zero() {
            return Err(PlatformError::NegativeQuantity);
        }
        Ok(Quantity(value))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn into_inner(self) -> Rat {
        self.0
    }
}

/// A validated strictly positive subscription price.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Price(Rat);

impl Price {
    pub fn new(value: Rat) -> Result<Self, PlatformError> {
        if value <= Rat::zero() {
            return Err(PlatformError::NonPositivePrice(usize::MAX));
        }
        Ok(Price(value))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn into_inner(self) -> Rat {
        self.0
    }
}

/// Failures of platform construction or of the basic transformations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlatformError {
    /// Subscriber `s` has no positive consumption at all; such columns are
    /// outside the model's domain.
    ZeroColumnSubscriber(usize),
    /// Subscriber `s` has a price ≤ 0.
    NonPositivePrice(usize),
    /// An entry referenced a service or subscriber index out of range.
    IndexOutOfBounds { service: usize, subscriber: usize },
    /// Scale factor was ≤ 0.
    NonPositiveScale,
    /// A subscriber restriction kept no columns.
    EmptySubscriberSet,
    NegativeQuantity,
    /// A platform needs at least one service.
    NoServices,
    /// A platform needs at least one subscriber.
    NoSubscribers,
    /// Labels, when given, must be one per index and pairwise distinct.
    BadLabels(String),
}

impl core::fmt::Display for PlatformError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PlatformError::ZeroColumnSubscriber(s) => {
                write!(f, "subscriber {s} has zero total consumption")
            }
            PlatformError::NonPositivePrice(s) if *s == usize::MAX => {
                write!(f, "price must be positive")
            }
            PlatformError::NonPositivePrice(s) => {
                write!(f, "subscriber {s} has a non-positive price")
            }
            PlatformError::IndexOutOfBounds { service, subscriber } => {
                write!(f, "entry ({service}, {subscriber}) is out of bounds")
            }
            PlatformError::NonPositiveScale => write!(f, "scale factor must be positive"),
            PlatformError::EmptySubscriberSet => write!(f, "kept subscriber set is empty"),
            PlatformError::NegativeQuantity => write!(f, "consumption amounts must be nonnegative"),
            PlatformError::NoServices => write!(f, "a platform needs at least one service"),
            PlatformError::NoSubscribers => write!(f, "a platform needs at least one subscriber"),
            PlatformError::BadLabels(why) => write!(f, "bad labels: {why}"),
        }
    }
}

impl core::error::Error for PlatformError {}

/// Sparse consumption matrix stored in both orientations.
///
/// Zeros are absent, never stored; every held entry is strictly positive.
/// Rows and columns are sorted by index, which also fixes summation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsumptionMatrix {
    by_service: Vec<Vec<(SubscriberId, Rat)>>,
    by_subscriber: Vec<Vec<(ServiceId, Rat)>>,
    service_totals: Vec<Rat>,
    subscriber_totals: Vec<Rat>,
}

impl ConsumptionMatrix {
    fn from_cells(
        cells: BTreeMap<(usize, usize), Rat>,
        services: usize,
        subscribers: usize,
    ) -> Self {
        let mut by_service: Vec<Vec<(SubscriberId, Rat)>> = alloc::vec![Vec::new(); services];
        let mut by_subscriber: Vec<Vec<(ServiceId, Rat)>> = alloc::vec![Vec::new(); subscribers];
        for ((i, s), q) in cells {
            debug_assert!(q > Rat::zero());
            by_service[i].push((SubscriberId(s), q.clone()));
            by_subscriber[s].push((ServiceId(i), q));
        }
        let service_totals = by_service
            .iter()
            .map(|row| sum_grouped(row.iter().map(|(_, q)| q.clone())))
            .collect();
        let subscriber_totals = by_subscriber
            .iter()
            .map(|col| sum_grouped(col.iter().map(|(_, q)| q.clone())))
            .collect();
        ConsumptionMatrix { by_service, by_subscriber, service_totals, subscriber_totals }
    }

    pub fn service_count(&self) -> usize {
        self.by_service.len()
    }

    pub fn subscriber_count(&self) -> usize {
        self.by_subscriber.len()
    }

    /// Nonzero entries of row `i`, sorted by subscriber index.
    pub fn row(&self, i: ServiceId) -> &[(SubscriberId, Rat)] {
        &self.by_service[i.0]
    }

    /// Nonzero entries of column `s`, sorted by service index.
    pub fn column(&self, s: SubscriberId) -> &[(ServiceId, Rat)] {
        &self.by_subscriber[s.0]
    }

    /// ‖C_i·‖, the total consumption of service `i`.
    pub fn row_total(&self, i: ServiceId) -> &Rat {
        &self.service_totals[i.0]
    }

    /// ‖C_·s‖, the total consumption of subscriber `s`.
    pub fn column_total(&self, s: SubscriberId) -> &Rat {
        &self.subscriber_totals[s.0]
    }

    pub fn row_totals(&self) -> &[Rat] {
        &self.service_totals
    }

    pub fn column_totals(&self) -> &[Rat] {
        &self.subscriber_totals
    }

    /// Total consumption over the whole matrix.
    pub fn grand_total(&self) -> Rat {
        sum_grouped(self.service_totals.iter().cloned())
    }

    /// The entry C_is, or zero when absent.
    pub fn get(&self, i: ServiceId, s: SubscriberId) -> Rat {
        match self.by_service[i.0].binary_search_by(|(t, _)| t.0.cmp(&s.0)) {
            Ok(pos) => self.by_service[i.0][pos].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Iterates all nonzero entries in (service, subscriber) order.
    pub fn entries(&self) -> impl Iterator<Item = (ServiceId, SubscriberId, &Rat)> {
        self.by_service
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(s, q)| (ServiceId(i), *s, q)))
    }
}

/// A validated platform: services × subscribers with prices and consumption.
///
/// Invariants held after construction:
/// * every subscriber has positive total consumption and a positive price;
/// * `success` is the exact sum of prices;
/// * both matrix orientations describe the same entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Platform {
    service_labels: Option<Vec<String>>,
    subscriber_labels: Option<Vec<String>>,
    prices: Vec<Rat>,
    matrix: ConsumptionMatrix,
    success: Rat,
}

impl Platform {
    /// Builds a platform from subscription prices and sparse consumption
    /// entries. Duplicate (service, subscriber) pairs are summed. Subscribers
    /// whose total consumption is zero are rejected.
    pub fn build(
        prices: Vec<Price>,
        entries: impl IntoIterator<Item = (ServiceId, SubscriberId, Quantity)>,
        service_count: usize,
    ) -> Result<Self, PlatformError> {
        let raw: Vec<Rat> = prices.into_iter().map(Price::into_inner).collect();
        Self::build_raw(raw, entries.into_iter().map(|(i, s, q)| (i.0, s.0, q.into_inner())), service_count)
    }

    /// As [`Platform::build`] but over unwrapped rationals; validates signs.
    pub fn build_raw(
        prices: Vec<Rat>,
        entries: impl IntoIterator<Item = (usize, usize, Rat)>,
        service_count: usize,
    ) -> Result<Self, PlatformError> {
        if service_count == 0 {
            return Err(PlatformError::NoServices);
        }
        if prices.is_empty() {
            return Err(PlatformError::NoSubscribers);
        }
        for (s, p) in prices.iter().enumerate() {
            if *p <= Rat::zero() {
                return Err(PlatformError::NonPositivePrice(s));
            }
        }
        let subscriber_count = prices.len();
        let mut cells: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (i, s, q) in entries {
            if i >= service_count || s >= subscriber_count {
                return Err(PlatformError::IndexOutOfBounds { service: i, subscriber: s });
            }
            if q < Rat::zero() {
                return Err(PlatformError::NegativeQuantity);
            }
            if q.is_zero() {
                continue;
            }
            *cells.entry((i, s)).or_insert_with(Rat::zero) += q;
        }
        let matrix = ConsumptionMatrix::from_cells(cells, service_count, subscriber_count);
        for s in 0..subscriber_count {
            if matrix.subscriber_totals[s].is_zero() {
                return Err(PlatformError::ZeroColumnSubscriber(s));
            }
        }
        let success = sum_grouped(prices.iter().cloned());
        Ok(Platform { service_labels: None, subscriber_labels: None, prices, matrix, success })
    }

    /// Convenience constructor from dense rows (tests, registries, scenarios).
    pub fn from_dense(prices: Vec<Rat>, rows: Vec<Vec<Rat>>) -> Result<Self, PlatformError> {
        let service_count = rows.len();
        let subscriber_count = prices.len();
        let mut entries = Vec::new();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != subscriber_count {
                return Err(PlatformError::IndexOutOfBounds { service: i, subscriber: row.len() });
            }
            for (s, q) in row.into_iter().enumerate() {
                entries.push((i, s, q));
            }
        }
        Self::build_raw(prices, entries, service_count)
    }

    /// Attaches display labels to services. Labels must be unique.
    pub fn with_service_labels(mut self, labels: Vec<String>) -> Result<Self, PlatformError> {
        validate_labels(&labels, self.service_count())?;
        self.service_labels = Some(labels);
        Ok(self)
    }

    /// Attaches display labels to subscribers. Labels must be unique.
    pub fn with_subscriber_labels(mut self, labels: Vec<String>) -> Result<Self, PlatformError> {
        validate_labels(&labels, self.subscriber_count())?;
        self.subscriber_labels = Some(labels);
        Ok(self)
    }

    pub fn service_count(&self) -> usize {
        self.matrix.service_count()
    }

    pub fn subscriber_count(&self) -> usize {
        self.matrix.subscriber_count()
    }

    pub fn services(&self) -> impl Iterator<Item = ServiceId> {
        (0..self.service_count()).map(ServiceId)
    }

    pub fn subscribers(&self) -> impl Iterator<Item = SubscriberId> {
        (0..self.subscriber_count()).map(SubscriberId)
    }

    pub fn price(&self, s: SubscriberId) -> &Rat {
        &self.prices[s.0]
    }

    pub fn prices(&self) -> &[Rat] {
        &self.prices
    }

    /// σ — the total subscription revenue the indicators distribute.
    pub fn success(&self) -> &Rat {
        &self.success
    }

    pub fn matrix(&self) -> &ConsumptionMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: ServiceId, s: SubscriberId) -> Rat {
        self.matrix.get(i, s)
    }

    pub fn service_label(&self, i: ServiceId) -> Option<&str> {
        self.service_labels.as_ref().map(|l| l[i.0].as_str())
    }

    pub fn subscriber_label(&self, s: SubscriberId) -> Option<&str> {
        self.subscriber_labels.as_ref().map(|l| l[s.0].as_str())
    }

    pub fn service_labels(&self) -> Option<&[String]> {
        self.service_labels.as_deref()
    }

    pub fn subscriber_labels(&self) -> Option<&[String]> {
        self.subscriber_labels.as_deref()
    }

    /// Returns the same platform with every consumption entry multiplied by
    /// `factor`. Prices — and therefore σ — are untouched.
    pub fn scaled(&self, factor: &Rat) -> Result<Self, PlatformError> {
        if *factor <= Rat::zero() {
            return Err(PlatformError::NonPositiveScale);
        }
        let entries = self
            .matrix
            .entries()
            .map(|(i, s, q)| (i.0, s.0, q * factor))
            .collect::<Vec<_>>();
        let mut scaled = Self::build_raw(self.prices.clone(), entries, self.service_count())?;
        scaled.service_labels = self.service_labels.clone();
        scaled.subscriber_labels = self.subscriber_labels.clone();
        Ok(scaled)
    }

    /// Keeps only the given subscribers (in ascending original order) and
    /// recomputes σ from the kept prices.
    pub fn restrict_subscribers(&self, keep: &[SubscriberId]) -> Result<Self, PlatformError> {
        let mut kept: Vec<usize> = keep.iter().map(|s| s.0).collect();
        kept.sort_unstable();
        kept.dedup();
        if kept.is_empty() {
            return Err(PlatformError::EmptySubscriberSet);
        }
        if *kept.last().unwrap() >= self.subscriber_count() {
            return Err(PlatformError::IndexOutOfBounds {
                service: 0,
                subscriber: *kept.last().unwrap(),
            });
        }
        let mut new_index = alloc::vec![usize::MAX; self.subscriber_count()];
        for (new_s, old_s) in kept.iter().enumerate() {
            new_index[*old_s] = new_s;
        }
        let prices: Vec<Rat> = kept.iter().map(|s| self.prices[*s].clone()).collect();
        let entries: Vec<(usize, usize, Rat)> = self
            .matrix
            .entries()
            .filter(|(_, s, _)| new_index[s.0] != usize::MAX)
            .map(|(i, s, q)| (i.0, new_index[s.0], q.clone()))
            .collect();
        let mut restricted = Self::build_raw(prices, entries, self.service_count())?;
        restricted.service_labels = self.service_labels.clone();
        restricted.subscriber_labels = self
            .subscriber_labels
            .as_ref()
            .map(|l| kept.iter().map(|s| l[*s].clone()).collect());
        Ok(restricted)
    }

    /// Rebuilds a platform from replacement parts, revalidating everything.
    /// Used by the transformation operators.
    pub(crate) fn reassemble(
        prices: Vec<Rat>,
        entries: Vec<(usize, usize, Rat)>,
        service_count: usize,
        service_labels: Option<Vec<String>>,
        subscriber_labels: Option<Vec<String>>,
    ) -> Result<Self, PlatformError> {
        let mut p = Self::build_raw(prices, entries, service_count)?;
        if let Some(labels) = service_labels {
            p = p.with_service_labels(labels)?;
        }
        if let Some(labels) = subscriber_labels {
            p = p.with_subscriber_labels(labels)?;
        }
        Ok(p)
    }
}

fn validate_labels(labels: &[String], expected: usize) -> Result<(), PlatformError> {
    if labels.len() != expected {
        return Err(PlatformError::BadLabels(alloc::format!(
            "expected {expected} labels, got {}",
            labels.len()
        )));
    }
    let mut sorted: Vec<&String> = labels.iter().collect();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(PlatformError::BadLabels(alloc::format!("duplicate label {:?}", pair[0])));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    /// The six-subscriber worked example used throughout the crate:
    /// p = (2, 4, 5/2, 2, 1, 7/2), rows (0,5,0,1,2,3), (1,1,2,3,6,0), zeros.
    pub(crate) fn worked_example() -> Platform {
        Platform::from_dense(
            alloc::vec![int(2), int(4), rat(5, 2), int(2), int(1), rat(7, 2)],
            alloc::vec![
                alloc::vec![int(0), int(5), int(0), int(1), int(2), int(3)],
                alloc::vec![int(1), int(1), int(2), int(3), int(6), int(0)],
                alloc::vec![int(0), int(0), int(0), int(0), int(0), int(0)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn worked_example_built_correctly() {
        let p = worked_example();
        assert_eq!(*p.success(), int(15));
        assert_eq!(p.service_count(), 3);
        assert_eq!(p.subscriber_count(), 6);
        assert_eq!(*p.matrix().row_total(ServiceId(0)), int(11));
        assert_eq!(*p.matrix().row_total(ServiceId(1)), int(13));
        assert_eq!(*p.matrix().row_total(ServiceId(2)), int(0));
        assert_eq!(p.matrix().grand_total(), int(24));
    }

    #[test]
    fn minimal_platform() {
        let p = Platform::build_raw(alloc::vec![int(1)], [(0, 0, int(1))], 1).unwrap();
        assert_eq!(*p.success(), int(1));
        assert_eq!(p.matrix().row_totals(), &[int(1)]);
    }

    #[test]
    fn zero_column_rejected() {
        let err = Platform::build_raw(alloc::vec![int(1), int(1)], [(0, 0, int(2))], 2);
        assert_eq!(err.unwrap_err(), PlatformError::ZeroColumnSubscriber(1));
    }

    #[test]
    fn duplicates_sum_and_order_is_irrelevant() {
        let a = Platform::build_raw(
            alloc::vec![int(1), int(2)],
            [(0, 0, int(2)), (1, 1, int(1)), (0, 0, int(3))],
            2,
        )
        .unwrap();
        let b = Platform::build_raw(
            alloc::vec![int(1), int(2)],
            [(0, 0, int(3)), (0, 0, int(2)), (1, 1, int(1))],
            2,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entry(ServiceId(0), SubscriberId(0)), int(5));
    }

    #[test]
    fn zero_entries_are_not_stored() {
        let p = Platform::build_raw(
            alloc::vec![int(1)],
            [(0, 0, int(1)), (1, 0, int(0))],
            2,
        )
        .unwrap();
        assert!(p.matrix().row(ServiceId(1)).is_empty());
        assert_eq!(p.entry(ServiceId(1), SubscriberId(0)), int(0));
    }

    #[test]
    fn scaling_changes_consumption_not_success() {
        let p = worked_example();
        let doubled = p.scaled(&int(2)).unwrap();
        assert_eq!(*doubled.success(), int(15));
        assert_eq!(*doubled.matrix().row_total(ServiceId(0)), int(22));
        assert_eq!(*doubled.matrix().row_total(ServiceId(1)), int(26));
        assert_eq!(p.scaled(&int(1)).unwrap(), p);
        let round_trip = p.scaled(&rat(1, 2)).unwrap().scaled(&int(2)).unwrap();
        assert_eq!(round_trip, p);
        assert_eq!(p.scaled(&int(0)).unwrap_err(), PlatformError::NonPositiveScale);
    }

    #[test]
    fn scaling_composes_multiplicatively() {
        let p = worked_example();
        let ab = p.scaled(&rat(2, 3)).unwrap().scaled(&rat(9, 2)).unwrap();
        let direct = p.scaled(&int(3)).unwrap();
        assert_eq!(ab, direct);
    }

    #[test]
    fn restriction_to_last_subscriber() {
        let p = worked_example();
        let r = p.restrict_subscribers(&[SubscriberId(5)]).unwrap();
        assert_eq!(*r.success(), rat(7, 2));
        assert_eq!(r.subscriber_count(), 1);
        assert_eq!(r.entry(ServiceId(0), SubscriberId(0)), int(3));
        assert!(r.matrix().row(ServiceId(1)).is_empty());
        assert!(r.matrix().row(ServiceId(2)).is_empty());
    }

    #[test]
    fn restriction_to_everything_is_identity() {
        let p = worked_example();
        let all: Vec<SubscriberId> = p.subscribers().collect();
        assert_eq!(p.restrict_subscribers(&all).unwrap(), p);
        assert_eq!(
            p.restrict_subscribers(&[]).unwrap_err(),
            PlatformError::EmptySubscriberSet
        );
    }

    #[test]
    fn cross_orientation_consistency() {
        let p = worked_example();
        for i in p.services() {
            for (s, q) in p.matrix().row(i) {
                let via_col = p
                    .matrix()
                    .column(*s)
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, q)| q.clone());
                assert_eq!(via_col.as_ref(), Some(q));
            }
        }
        for s in p.subscribers() {
            let col_total = sum_grouped(p.matrix().column(s).iter().map(|(_, q)| q.clone()));
            assert_eq!(&col_total, p.matrix().column_total(s));
        }
    }

    #[test]
    fn label_validation() {
        let p = worked_example();
        let err = p
            .clone()
            .with_service_labels(alloc::vec!["a".into(), "a".into(), "b".into()])
            .unwrap_err();
        assert!(matches!(err, PlatformError::BadLabels(_)));
        let ok = p
            .with_service_labels(alloc::vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        assert_eq!(ok.service_label(ServiceId(1)), Some("b"));
    }
}
