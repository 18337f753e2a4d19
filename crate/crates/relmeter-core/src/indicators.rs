//! The four relevance indicators.
//!
//! An indicator maps a platform to one nonnegative value per service; the
//! values always sum exactly to the platform's success σ. Two of the four
//! correspond to the revenue-split schemes used in music streaming: the
//! proportional indicator is the pro-rata rule, the subscriber-proportional
//! indicator is the user-centric rule.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::platform::{Platform, ServiceId, SubscriberId};
use crate::rational::{sum_grouped, Rat};

/// The built-in indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndicatorKind {
    /// Every service gets σ/|N|, consumption ignored.
    Uniform,
    /// Each subscriber's price is split evenly over the services they watch.
    SubscriberUniform,
    /// σ is split in proportion to each service's total consumption
    /// (the pro-rata rule).
    Proportional,
    /// Each subscriber's price is split in proportion to their own
    /// consumption of each service (the user-centric rule).
    SubscriberProportional,
}

/// All four built-ins, in display order.
pub const ALL_INDICATORS: [IndicatorKind; 4] = [
    IndicatorKind::Uniform,
    IndicatorKind::SubscriberUniform,
    IndicatorKind::Proportional,
    IndicatorKind::SubscriberProportional,
];

impl IndicatorKind {
    /// Short code used by the CLI and reports: `u`, `su`, `p`, `sp`.
    pub fn code(self) -> &'static str {
        match self {
            IndicatorKind::Uniform => "u",
            IndicatorKind::SubscriberUniform => "su",
            IndicatorKind::Proportional => "p",
            IndicatorKind::SubscriberProportional => "sp",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IndicatorKind::Uniform => "uniform",
            IndicatorKind::SubscriberUniform => "subscriber-uniform",
            IndicatorKind::Proportional => "proportional",
            IndicatorKind::SubscriberProportional => "subscriber-proportional",
        }
    }

    pub fn parse(code: &str) -> Option<Self> {
        match code {
            "u" | "uniform" => Some(IndicatorKind::Uniform),
            "su" | "subscriber-uniform" => Some(IndicatorKind::SubscriberUniform),
            "p" | "proportional" => Some(IndicatorKind::Proportional),
            "sp" | "subscriber-proportional" => Some(IndicatorKind::SubscriberProportional),
            _ => None,
        }
    }
}

impl core::fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Origin tag of a relevance vector: one of the built-ins, or an external
/// evaluator plugged into the axiom checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndicatorTag {
    Builtin(IndicatorKind),
    External,
}

/// Per-service relevance values summing exactly to σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevanceVector {
    tag: IndicatorTag,
    values: Vec<Rat>,
}

/// Violation of the efficiency contract Σᵢ Rᵢ = σ (or of nonnegativity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficiencyError {
    pub expected_total: Rat,
    pub actual_total: Rat,
}

impl core::fmt::Display for EfficiencyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "relevance must sum to {} exactly, got {}",
            self.expected_total, self.actual_total
        )
    }
}

impl core::error::Error for EfficiencyError {}

impl RelevanceVector {
    /// Wraps raw values, verifying nonnegativity and the exact-σ total.
    pub fn checked(tag: IndicatorTag, values: Vec<Rat>, sigma: &Rat) -> Result<Self, EfficiencyError> {
        let total = sum_grouped(values.iter().cloned());
        if total != *sigma || values.iter().any(|v| *v < Rat::zero()) {
            return Err(EfficiencyError { expected_total: sigma.clone(), actual_total: total });
        }
        Ok(RelevanceVector { tag, values })
    }

    pub fn tag(&self) -> IndicatorTag {
        self.tag
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, i: ServiceId) -> &Rat {
        &self.values[i.0]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact sum of the values (σ of the originating platform).
    pub fn total(&self) -> Rat {
        sum_grouped(self.values.iter().cloned())
    }

    pub fn into_values(self) -> Vec<Rat> {
        self.values
    }
}

fn wrap(kind: IndicatorKind, values: Vec<Rat>, p: &Platform) -> RelevanceVector {
    RelevanceVector::checked(IndicatorTag::Builtin(kind), values, p.success())
        .expect("built-in indicators are efficient by construction")
}

/// R^U: every service receives σ/|N|, zero-consumption rows included.
pub fn uniform(p: &Platform) -> RelevanceVector {
    let share = p.success() / Rat::from_integer(p.service_count().into());
    wrap(IndicatorKind::Uniform, alloc::vec![share; p.service_count()], p)
}

/// R^SU: subscriber s contributes p_s/|N_s| to every service in N_s,
/// where N_s is the set of services s consumes.
pub fn subscriber_uniform(p: &Platform) -> RelevanceVector {
    let mut buckets: Vec<Vec<Rat>> = alloc::vec![Vec::new(); p.service_count()];
    for s in p.subscribers() {
        let column = p.matrix().column(s);
        let share = p.price(s) / Rat::from_integer(column.len().into());
        for (i, _) in column {
            buckets[i.0].push(share.clone());
        }
    }
    let values = buckets.into_iter().map(sum_grouped).collect();
    wrap(IndicatorKind::SubscriberUniform, values, p)
}

/// R^P: σ split in proportion to row totals. The pro-rata rule.
pub fn proportional(p: &Platform) -> RelevanceVector {
    let grand_total = p.matrix().grand_total();
    debug_assert!(!grand_total.is_zero(), "every subscriber has positive consumption");
    let values = p
        .matrix()
        .row_totals()
        .iter()
        .map(|row_total| row_total / &grand_total * p.success())
        .collect();
    wrap(IndicatorKind::Proportional, values, p)
}

/// R^SP: each subscriber's price split in proportion to their own column.
/// The user-centric rule.
pub fn subscriber_proportional(p: &Platform) -> RelevanceVector {
    let mut buckets: Vec<Vec<Rat>> = alloc::vec![Vec::new(); p.service_count()];
    for s in p.subscribers() {
        let column_total = p.matrix().column_total(s);
        for (i, q) in p.matrix().column(s) {
            buckets[i.0].push(q / column_total * p.price(s));
        }
    }
    let values = buckets.into_iter().map(sum_grouped).collect();
    wrap(IndicatorKind::SubscriberProportional, values, p)
}

/// Dispatches to the indicator named by `kind`.
pub fn evaluate(kind: IndicatorKind, p: &Platform) -> RelevanceVector {
    match kind {
        IndicatorKind::Uniform => uniform(p),
        IndicatorKind::SubscriberUniform => subscriber_uniform(p),
        IndicatorKind::Proportional => proportional(p),
        IndicatorKind::SubscriberProportional => subscriber_proportional(p),
    }
}

/// N_s for every subscriber: the services with positive consumption.
/// Derived data kept separate from the matrix for callers that only care
/// about support patterns (the subscriber-uniform family, viewer stats).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsumerSets {
    sets: Vec<Vec<ServiceId>>,
}

impl ConsumerSets {
    pub fn from_platform(p: &Platform) -> Self {
        let sets = p
            .subscribers()
            .map(|s| p.matrix().column(s).iter().map(|(i, _)| *i).collect())
            .collect();
        ConsumerSets { sets }
    }

    /// The services subscriber `s` consumes, ascending. Never empty.
    pub fn services_of(&self, s: SubscriberId) -> &[ServiceId] {
        &self.sets[s.0]
    }

    pub fn count_of(&self, s: SubscriberId) -> usize {
        self.sets[s.0].len()
    }

    pub fn contains(&self, s: SubscriberId, i: ServiceId) -> bool {
        self.sets[s.0].binary_search(&i).is_ok()
    }
}
