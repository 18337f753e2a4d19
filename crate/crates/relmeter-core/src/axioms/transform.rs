//! Platform surgery used by the axiom checkers and the what-if tooling:
//! composing subscriber populations, merging/splitting services, and pooling
//! subscriptions.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::platform::{Platform, PlatformError, ServiceId, SubscriberId};
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformError {
    /// The two platforms to compose do not offer the same services.
    ServiceSetMismatch,
    /// Subscriber labels of composed platforms must not collide.
    SubscriberLabelClash(String),
    SurvivorNotInGroup,
    GroupTooSmall,
    /// The split parts do not sum, entry by entry, to the target row.
    PartsDoNotSum,
    TooFewParts,
    Platform(PlatformError),
}

impl From<PlatformError> for TransformError {
    fn from(e: PlatformError) -> Self {
        TransformError::Platform(e)
    }
}

impl core::fmt::Display for TransformError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TransformError::ServiceSetMismatch => {
                write!(f, "platforms must offer the same service set")
            }
            TransformError::SubscriberLabelClash(label) => {
                write!(f, "subscriber label {label:?} exists on both platforms")
            }
            TransformError::SurvivorNotInGroup => write!(f, "survivor must belong to the group"),
            TransformError::GroupTooSmall => write!(f, "group needs at least two members"),
            TransformError::PartsDoNotSum => {
                write!(f, "split parts must sum to the target row exactly")
            }
            TransformError::TooFewParts => write!(f, "a split needs at least two parts"),
            TransformError::Platform(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TransformError {}

/// Column-concatenates two platforms over the same service set:
/// (C ⊕ C', p ⊕ p'), so σ of the result is σ_a + σ_b.
pub fn compose_platforms(a: &Platform, b: &Platform) -> Result<Platform, TransformError> {
    if a.service_count() != b.service_count() {
        return Err(TransformError::ServiceSetMismatch);
    }
    if let (Some(la), Some(lb)) = (a.service_labels(), b.service_labels()) {
        if la != lb {
            return Err(TransformError::ServiceSetMismatch);
        }
    }
    if let (Some(la), Some(lb)) = (a.subscriber_labels(), b.subscriber_labels()) {
        for label in lb {
            if la.contains(label) {
                return Err(TransformError::SubscriberLabelClash(label.clone()));
            }
        }
    }
    let offset = a.subscriber_count();
    let mut prices: Vec<Rat> = a.prices().to_vec();
    prices.extend_from_slice(b.prices());
    let mut entries: Vec<(usize, usize, Rat)> = a
        .matrix()
        .entries()
        .map(|(i, s, q)| (i.0, s.0, q.clone()))
        .collect();
    entries.extend(b.matrix().entries().map(|(i, s, q)| (i.0, s.0 + offset, q.clone())));
    let subscriber_labels = match (a.subscriber_labels(), b.subscriber_labels()) {
        (Some(la), Some(lb)) => {
            let mut all = la.to_vec();
            all.extend_from_slice(lb);
            Some(all)
        }
        _ => None,
    };
    Ok(Platform::reassemble(
        prices,
        entries,
        a.service_count(),
        a.service_labels().map(|l| l.to_vec()),
        subscriber_labels,
    )?)
}

/// Merges a group of services into the survivor: the survivor's row becomes
/// the entrywise sum of the group's rows, the other group rows disappear, and
/// the service count shrinks by |group| − 1.
pub fn merge_services(
    p: &Platform,
    group: &[ServiceId],
    survivor: ServiceId,
) -> Result<Platform, TransformError> {
    let mut members: Vec<usize> = group.iter().map(|i| i.0).collect();
    members.sort_unstable();
    members.dedup();
    if members.len() < 2 {
        return Err(TransformError::GroupTooSmall);
    }
    if !members.contains(&survivor.0) {
        return Err(TransformError::SurvivorNotInGroup);
    }
    if *members.last().unwrap() >= p.service_count() {
        return Err(TransformError::Platform(PlatformError::IndexOutOfBounds {
            service: *members.last().unwrap(),
            subscriber: 0,
        }));
    }
    let in_group = |i: usize| members.binary_search(&i).is_ok();
    // New dense indices: survivor keeps its slot, other group members vanish.
    let mut new_index = alloc::vec![usize::MAX; p.service_count()];
    let mut next = 0usize;
    for i in 0..p.service_count() {
        if i == survivor.0 || !in_group(i) {
            new_index[i] = next;
            next += 1;
        }
    }
    let entries: Vec<(usize, usize, Rat)> = p
        .matrix()
        .entries()
        .map(|(i, s, q)| {
            let target = if in_group(i.0) { survivor.0 } else { i.0 };
            (new_index[target], s.0, q.clone())
        })
        .collect();
    let service_labels = p.service_labels().map(|labels| {
        (0..p.service_count())
            .filter(|i| new_index[*i] != usize::MAX)
            .map(|i| labels[i].clone())
            .collect()
    });
    Ok(Platform::reassemble(
        p.prices().to_vec(),
        entries,
        next,
        service_labels,
        p.subscriber_labels().map(|l| l.to_vec()),
    )?)
}

/// Replaces the target row by the given sparse rows, which must sum to it
/// entry by entry. The parts take the target's position in order; services
/// after the target shift up by |parts| − 1.
pub fn split_service(
    p: &Platform,
    target: ServiceId,
    parts: &[Vec<(SubscriberId, Rat)>],
) -> Result<Platform, TransformError> {
    if parts.len() < 2 {
        return Err(TransformError::TooFewParts);
    }
    if target.0 >= p.service_count() {
        return Err(TransformError::Platform(PlatformError::IndexOutOfBounds {
            service: target.0,
            subscriber: 0,
        }));
    }
    // The parts must reproduce the target row exactly.
    let mut part_sums = alloc::vec![Rat::zero(); p.subscriber_count()];
    for part in parts {
        for (s, q) in part {
            if s.0 >= p.subscriber_count() {
                return Err(TransformError::Platform(PlatformError::IndexOutOfBounds {
                    service: target.0,
                    subscriber: s.0,
                }));
            }
            if *q < Rat::zero() {
                return Err(TransformError::Platform(PlatformError::NegativeQuantity));
            }
            part_sums[s.0] += q;
        }
    }
    for s in p.subscribers() {
        if part_sums[s.0] != p.entry(target, s) {
            return Err(TransformError::PartsDoNotSum);
        }
    }
    let extra = parts.len() - 1;
    let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
    for (i, s, q) in p.matrix().entries() {
        if i == target {
            continue;
        }
        let shifted = if i.0 > target.0 { i.0 + extra } else { i.0 };
        entries.push((shifted, s.0, q.clone()));
    }
    for (offset, part) in parts.iter().enumerate() {
        for (s, q) in part {
            entries.push((target.0 + offset, s.0, q.clone()));
        }
    }
    // Labels cannot stay unique for the split slots; drop them.
    Ok(Platform::reassemble(
        p.prices().to_vec(),
        entries,
        p.service_count() + extra,
        None,
        p.subscriber_labels().map(|l| l.to_vec()),
    )?)
}

/// Convenience split of a row into `m` equal parts.
pub fn equal_parts(p: &Platform, target: ServiceId, m: usize) -> Vec<Vec<(SubscriberId, Rat)>> {
    let divisor = Rat::from_integer(m.into());
    let part: Vec<(SubscriberId, Rat)> = p
        .matrix()
        .row(target)
        .iter()
        .map(|(s, q)| (*s, q / &divisor))
        .collect();
    alloc::vec![part; m]
}

/// Pools a group of subscriptions into the survivor: the survivor's column
/// becomes the entrywise sum of the group's columns and its price the sum of
/// the group's prices; the other group columns disappear.
pub fn merge_subscribers(
    p: &Platform,
    group: &[SubscriberId],
    survivor: SubscriberId,
) -> Result<Platform, TransformError> {
    let mut members: Vec<usize> = group.iter().map(|s| s.0).collect();
    members.sort_unstable();
    members.dedup();
    if members.len() < 2 {
        return Err(TransformError::GroupTooSmall);
    }
    if !members.contains(&survivor.0) {
        return Err(TransformError::SurvivorNotInGroup);
    }
    if *members.last().unwrap() >= p.subscriber_count() {
        return Err(TransformError::Platform(PlatformError::IndexOutOfBounds {
            service: 0,
            subscriber: *members.last().unwrap(),
        }));
    }
    let in_group = |s: usize| members.binary_search(&s).is_ok();
    let mut new_index = alloc::vec![usize::MAX; p.subscriber_count()];
    let mut next = 0usize;
    for s in 0..p.subscriber_count() {
        if s == survivor.0 || !in_group(s) {
            new_index[s] = next;
            next += 1;
        }
    }
    let mut prices: Vec<Rat> = Vec::with_capacity(next);
    for s in 0..p.subscriber_count() {
        if s == survivor.0 {
            let pooled = members
                .iter()
                .fold(Rat::zero(), |acc, t| acc + p.price(SubscriberId(*t)));
            prices.push(pooled);
        } else if !in_group(s) {
            prices.push(p.price(SubscriberId(s)).clone());
        }
    }
    let entries: Vec<(usize, usize, Rat)> = p
        .matrix()
        .entries()
        .map(|(i, s, q)| {
            let target = if in_group(s.0) { survivor.0 } else { s.0 };
            (i.0, new_index[target], q.clone())
        })
        .collect();
    let subscriber_labels = p.subscriber_labels().map(|labels| {
        (0..p.subscriber_count())
            .filter(|s| new_index[*s] != usize::MAX)
            .map(|s| labels[s].clone())
            .collect()
    });
    Ok(Platform::reassemble(
        prices,
        entries,
        p.service_count(),
        p.service_labels().map(|l| l.to_vec()),
        subscriber_labels,
    )?)
}

/// A replayable description of a platform transformation. Axiom-violation
/// witnesses carry one of these so the violation can be reproduced from the
/// stored platform alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transformation {
    /// No transformation; the violation is visible on the platform itself
    /// (nullity, symmetry, efficiency).
    Identity,
    Scale { factor: Rat },
    Compose { other: Platform },
    MergeServices { group: Vec<ServiceId>, survivor: ServiceId },
    SplitService { target: ServiceId, parts: Vec<Vec<(SubscriberId, Rat)>> },
    MergeSubscribers { group: Vec<SubscriberId>, survivor: SubscriberId },
    /// A pair of matched platform sequences indexed by n whose entrywise gap
    /// shrinks as n grows; `n` records where the relevance gap was measured.
    SensitivityPair { counterpart: Platform, n: u64 },
}

impl Transformation {
    /// Applies the transformation to `p`. `Identity` and `SensitivityPair`
    /// return the platform the comparison runs against.
    pub fn apply(&self, p: &Platform) -> Result<Platform, TransformError> {
        match self {
            Transformation::Identity => Ok(p.clone()),
            Transformation::Scale { factor } => Ok(p.scaled(factor)?),
            Transformation::Compose { other } => compose_platforms(p, other),
            Transformation::MergeServices { group, survivor } => {
                merge_services(p, group, *survivor)
            }
            Transformation::SplitService { target, parts } => split_service(p, *target, parts),
            Transformation::MergeSubscribers { group, survivor } => {
                merge_subscribers(p, group, *survivor)
            }
            Transformation::SensitivityPair { counterpart, .. } => Ok(counterpart.clone()),
        }
    }

    /// Short machine-readable descriptor, echoed by the what-if tooling.
    pub fn describe(&self) -> String {
        use alloc::format;
        match self {
            Transformation::Identity => String::from("identity"),
            Transformation::Scale { factor } => format!("scale factor={factor}"),
            Transformation::Compose { other } => {
                format!("compose other_subscribers={}", other.subscriber_count())
            }
            Transformation::MergeServices { group, survivor } => {
                format!("merge-services group={group:?} survivor={survivor}")
            }
            Transformation::SplitService { target, parts } => {
                format!("split-service target={target} parts={}", parts.len())
            }
            Transformation::MergeSubscribers { group, survivor } => {
                format!("merge-subscribers group={group:?} survivor={survivor}")
            }
            Transformation::SensitivityPair { n, .. } => {
                format!("sensitivity-pair n={n}")
            }
        }
    }
}
