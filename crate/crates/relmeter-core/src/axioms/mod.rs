//! Executable axiom checkers.
//!
//! Each fairness/stability/non-manipulability axiom is universally
//! quantified, so the checkers falsify rather than prove: a cell *holds* when
//! neither the registered counterexamples nor a batch of seeded random
//! transformation trials produced a violation, and *fails* with a concrete,
//! replayable witness otherwise. The verdict grid over the nine axioms and
//! four indicators reproduces the known satisfaction pattern, and the four
//! characterization bundles are checked for independence the same way.

pub mod counterexamples;
pub mod random;
pub mod transform;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::indicators::{self, IndicatorKind, RelevanceVector, ALL_INDICATORS};
use crate::platform::{Platform, ServiceId, SubscriberId};
use crate::rational::{rat, Rat};
use transform::{compose_platforms, merge_services, merge_subscribers, split_service, Transformation};

/// The nine axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomId {
    Efficiency,
    Symmetry,
    StrongSymmetry,
    Nullity,
    Homogeneity,
    Composition,
    ConsumptionSensitivity,
    SharingProofness,
    NonManipulability,
}

impl AxiomId {
    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Efficiency => "efficiency",
            AxiomId::Symmetry => "symmetry",
            AxiomId::StrongSymmetry => "strong symmetry",
            AxiomId::Nullity => "nullity",
            AxiomId::Homogeneity => "homogeneity",
            AxiomId::Composition => "composition",
            AxiomId::ConsumptionSensitivity => "consumption sensitivity",
            AxiomId::SharingProofness => "sharing proofness",
            AxiomId::NonManipulability => "non-manipulability",
        }
    }
}

impl core::fmt::Display for AxiomId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Row order of the verdict grid.
pub const TABLE_ROWS: [AxiomId; 9] = [
    AxiomId::Efficiency,
    AxiomId::Symmetry,
    AxiomId::StrongSymmetry,
    AxiomId::Homogeneity,
    AxiomId::ConsumptionSensitivity,
    AxiomId::Composition,
    AxiomId::SharingProofness,
    AxiomId::NonManipulability,
    AxiomId::Nullity,
];

/// The satisfaction pattern the grid must reproduce. Column order is
/// uniform, subscriber-uniform, proportional, subscriber-proportional.
pub fn expected_to_hold(axiom: AxiomId, kind: IndicatorKind) -> bool {
    use AxiomId::*;
    use IndicatorKind::*;
    match (axiom, kind) {
        (Efficiency, _) | (Symmetry, _) | (Homogeneity, _) => true,
        (StrongSymmetry, Uniform | SubscriberUniform) => true,
        (StrongSymmetry, _) => false,
        (ConsumptionSensitivity, Uniform) => true,
        (ConsumptionSensitivity, _) => false,
        (Composition, Proportional) => false,
        (Composition, _) => true,
        (SharingProofness, Uniform | Proportional) => true,
        (SharingProofness, _) => false,
        (NonManipulability, Proportional | SubscriberProportional) => true,
        (NonManipulability, _) => false,
        (Nullity, Uniform) => false,
        (Nullity, _) => true,
    }
}

/// Anything the axiom checkers can evaluate: the four built-ins, or an
/// external indicator plugged in for experimentation.
pub trait RelevanceIndicator {
    fn label(&self) -> &str;
    /// `Some` when this is one of the built-ins (enables the registered
    /// counterexamples for that indicator).
    fn builtin(&self) -> Option<IndicatorKind> {
        None
    }
    fn relevance(&self, p: &Platform) -> RelevanceVector;
}

impl RelevanceIndicator for IndicatorKind {
    fn label(&self) -> &str {
        self.name()
    }

    fn builtin(&self) -> Option<IndicatorKind> {
        Some(*self)
    }

    fn relevance(&self, p: &Platform) -> RelevanceVector {
        indicators::evaluate(*self, p)
    }
}

/// Tuning of the falsification battery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckConfig {
    /// Randomized transformation tests per (axiom, indicator) cell.
    pub trials: u32,
    /// Master seed; every cell derives its own generator from it.
    pub rng_seed: u64,
    pub max_services: usize,
    pub max_subscribers: usize,
    /// Largest n for the shrinking-gap sensitivity sequences.
    pub sensitivity_sequence_length: u64,
    /// A relevance gap at the end of a sequence at or above this floor
    /// counts as a sensitivity violation.
    pub sensitivity_gap_threshold: Rat,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            trials: 200,
            rng_seed: 0x52454C4D,
            max_services: 6,
            max_subscribers: 8,
            sensitivity_sequence_length: 12,
            sensitivity_gap_threshold: rat(1, 100),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl core::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "bad check config: {}", self.0)
    }
}

impl core::error::Error for ConfigError {}

impl CheckConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError(String::from("trials must be at least 1")));
        }
        if self.max_services < 3 {
            return Err(ConfigError(String::from("max_services must be at least 3")));
        }
        if self.max_subscribers < 1 {
            return Err(ConfigError(String::from("max_subscribers must be at least 1")));
        }
        if self.sensitivity_sequence_length < 1 {
            return Err(ConfigError(String::from("sensitivity sequence needs length ≥ 1")));
        }
        if self.sensitivity_gap_threshold <= Rat::zero() {
            return Err(ConfigError(String::from("sensitivity threshold must be positive")));
        }
        Ok(())
    }
}

/// A concrete, replayable violation of one axiom by one indicator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: AxiomId,
    pub platform: Platform,
    pub transformation: Transformation,
    /// The two sides of the violated equation, in axiom-specific shape.
    pub before: Vec<Rat>,
    pub after: Vec<Rat>,
    pub detail: String,
}

impl AxiomViolation {
    /// Re-executes the stored scenario and reports whether the violation
    /// still reproduces.
    pub fn replay(&self, indicator: &dyn RelevanceIndicator, cfg: &CheckConfig) -> bool {
        match self.axiom {
            AxiomId::Efficiency => violates_efficiency(indicator, &self.platform).is_some(),
            AxiomId::Symmetry => violates_symmetry(indicator, &self.platform).is_some(),
            AxiomId::StrongSymmetry => violates_strong_symmetry(indicator, &self.platform).is_some(),
            AxiomId::Nullity => violates_nullity(indicator, &self.platform).is_some(),
            AxiomId::Homogeneity => match &self.transformation {
                Transformation::Scale { factor } => {
                    violates_homogeneity(indicator, &self.platform, factor).is_some()
                }
                _ => false,
            },
            AxiomId::Composition => match &self.transformation {
                Transformation::Compose { other } => {
                    violates_composition(indicator, &self.platform, other).is_some()
                }
                _ => false,
            },
            AxiomId::SharingProofness => match &self.transformation {
                Transformation::MergeSubscribers { group, survivor } => {
                    violates_sharing_proofness(indicator, &self.platform, group, *survivor)
                        .is_some()
                }
                _ => false,
            },
            AxiomId::NonManipulability => match &self.transformation {
                Transformation::MergeServices { group, survivor } => {
                    violates_merge_manipulation(indicator, &self.platform, group, *survivor)
                        .is_some()
                }
                Transformation::SplitService { target, parts } => {
                    violates_split_manipulation(indicator, &self.platform, *target, parts).is_some()
                }
                _ => false,
            },
            AxiomId::ConsumptionSensitivity => match &self.transformation {
                Transformation::SensitivityPair { counterpart, .. } => {
                    relevance_gap(indicator, &self.platform, counterpart)
                        >= cfg.sensitivity_gap_threshold
                }
                _ => false,
            },
        }
    }
}

/// Verdict for one (axiom, indicator) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: AxiomId,
    pub indicator_label: String,
    pub indicator_kind: Option<IndicatorKind>,
    pub holds: bool,
    pub trials_run: u32,
    pub witness: Option<AxiomViolation>,
    pub note: String,
}

/// A matched pair of platform sequences whose entrywise distance shrinks to
/// zero as n grows; sensitive indicators must close the relevance gap too.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SensitivityFamily {
    /// The flat matrix with every entry 1/n against the base matrix scaled
    /// by 1/n. Symmetry pins the first at the uniform split; homogeneity
    /// pins the second at the base's relevance.
    UniformVsScaled { base: Platform },
    /// One subscriber; columns (1/n, 1/n, 1/n) against (0, 1/n, 2/n).
    DivergingColumn { price: Rat },
}

impl SensitivityFamily {
    /// The two platforms at sequence index n ≥ 1.
    pub fn pair(&self, n: u64) -> (Platform, Platform) {
        let inv = Rat::new(1.into(), i64::try_from(n).expect("n fits i64").into());
        match self {
            SensitivityFamily::UniformVsScaled { base } => {
                let flat_entries: Vec<(usize, usize, Rat)> = (0..base.service_count())
                    .flat_map(|i| {
                        let inv = inv.clone();
                        (0..base.subscriber_count()).map(move |s| (i, s, inv.clone()))
                    })
                    .collect();
                let flat = Platform::build_raw(
                    base.prices().to_vec(),
                    flat_entries,
                    base.service_count(),
                )
                .expect("flat matrix is valid");
                let scaled = base.scaled(&inv).expect("1/n is positive");
                (flat, scaled)
            }
            SensitivityFamily::DivergingColumn { price } => {
                let two = Rat::from_integer(2.into());
                let a = Platform::build_raw(
                    alloc::vec![price.clone()],
                    [
                        (0usize, 0usize, inv.clone()),
                        (1, 0, inv.clone()),
                        (2, 0, inv.clone()),
                    ],
                    3,
                )
                .expect("valid");
                let b = Platform::build_raw(
                    alloc::vec![price.clone()],
                    [(1usize, 0usize, inv.clone()), (2, 0, inv * two)],
                    3,
                )
                .expect("valid");
                (a, b)
            }
        }
    }

    /// ‖A_n − B_n‖, the entrywise input gap at index n.
    pub fn input_gap(&self, n: u64) -> Rat {
        let (a, b) = self.pair(n);
        let mut gap = Rat::zero();
        for i in a.services() {
            for s in a.subscribers() {
                gap += (a.entry(i, s) - b.entry(i, s)).abs();
            }
        }
        gap
    }
}

/// ‖R(a) − R(b)‖ under the given indicator.
pub fn relevance_gap(indicator: &dyn RelevanceIndicator, a: &Platform, b: &Platform) -> Rat {
    let ra = indicator.relevance(a);
    let rb = indicator.relevance(b);
    ra.values()
        .iter()
        .zip(rb.values())
        .fold(Rat::zero(), |acc, (x, y)| acc + (x - y).abs())
}

fn vector_values(v: &RelevanceVector) -> Vec<Rat> {
    v.values().to_vec()
}

// ---------------------------------------------------------------------------
// Violation predicates. Each returns a witness when the axiom's equation
// fails on the given scenario, and `None` when it is satisfied there.
// ---------------------------------------------------------------------------

pub fn violates_efficiency(ind: &dyn RelevanceIndicator, p: &Platform) -> Option<AxiomViolation> {
    let r = ind.relevance(p);
    let total = r.total();
    if total == *p.success() && r.values().iter().all(|v| !v.is_negative()) {
        return None;
    }
    Some(AxiomViolation {
        axiom: AxiomId::Efficiency,
        platform: p.clone(),
        transformation: Transformation::Identity,
        before: alloc::vec![p.success().clone()],
        after: alloc::vec![total.clone()],
        detail: format!("values sum to {total}, expected σ = {}", p.success()),
    })
}

pub fn violates_symmetry(ind: &dyn RelevanceIndicator, p: &Platform) -> Option<AxiomViolation> {
    let r = ind.relevance(p);
    for i in 0..p.service_count() {
        for j in i + 1..p.service_count() {
            if p.matrix().row(ServiceId(i)) == p.matrix().row(ServiceId(j))
                && r.values()[i] != r.values()[j]
            {
                return Some(AxiomViolation {
                    axiom: AxiomId::Symmetry,
                    platform: p.clone(),
                    transformation: Transformation::Identity,
                    before: alloc::vec![r.values()[i].clone()],
                    after: alloc::vec![r.values()[j].clone()],
                    detail: format!("services {i} and {j} have identical rows but differ"),
                });
            }
        }
    }
    None
}

pub fn violates_strong_symmetry(
    ind: &dyn RelevanceIndicator,
    p: &Platform,
) -> Option<AxiomViolation> {
    let support = |i: usize| -> Vec<usize> {
        p.matrix().row(ServiceId(i)).iter().map(|(s, _)| s.0).collect()
    };
    let r = ind.relevance(p);
    for i in 0..p.service_count() {
        for j in i + 1..p.service_count() {
            if support(i) == support(j) && r.values()[i] != r.values()[j] {
                return Some(AxiomViolation {
                    axiom: AxiomId::StrongSymmetry,
                    platform: p.clone(),
                    transformation: Transformation::Identity,
                    before: alloc::vec![r.values()[i].clone()],
                    after: alloc::vec![r.values()[j].clone()],
                    detail: format!("services {i} and {j} share their support but differ"),
                });
            }
        }
    }
    None
}

pub fn violates_nullity(ind: &dyn RelevanceIndicator, p: &Platform) -> Option<AxiomViolation> {
    let r = ind.relevance(p);
    for i in 0..p.service_count() {
        if p.matrix().row(ServiceId(i)).is_empty() && !r.values()[i].is_zero() {
            return Some(AxiomViolation {
                axiom: AxiomId::Nullity,
                platform: p.clone(),
                transformation: Transformation::Identity,
                before: alloc::vec![Rat::zero()],
                after: alloc::vec![r.values()[i].clone()],
                detail: format!(
                    "service {i} is never consumed yet receives {}",
                    r.values()[i]
                ),
            });
        }
    }
    None
}

pub fn violates_homogeneity(
    ind: &dyn RelevanceIndicator,
    p: &Platform,
    factor: &Rat,
) -> Option<AxiomViolation> {
    let scaled = p.scaled(factor).ok()?;
    let before = ind.relevance(p);
    let after = ind.relevance(&scaled);
    if before.values() == after.values() {
        return None;
    }
    Some(AxiomViolation {
        axiom: AxiomId::Homogeneity,
        platform: p.clone(),
        transformation: Transformation::Scale { factor: factor.clone() },
        before: vector_values(&before),
        after: vector_values(&after),
        detail: format!("relevance moved under consumption rescaling by {factor}"),
    })
}

pub fn violates_composition(
    ind: &dyn RelevanceIndicator,
    a: &Platform,
    b: &Platform,
) -> Option<AxiomViolation> {
    let combined = compose_platforms(a, b).ok()?;
    let whole = ind.relevance(&combined);
    let left = ind.relevance(a);
    let right = ind.relevance(b);
    let sum: Vec<Rat> = left
        .values()
        .iter()
        .zip(right.values())
        .map(|(x, y)| x + y)
        .collect();
    if whole.values() == sum.as_slice() {
        return None;
    }
    Some(AxiomViolation {
        axiom: AxiomId::Composition,
        platform: a.clone(),
        transformation: Transformation::Compose { other: b.clone() },
        before: sum,
        after: vector_values(&whole),
        detail: String::from("relevance on the combined population is not the sum of the parts"),
    })
}

pub fn violates_sharing_proofness(
    ind: &dyn RelevanceIndicator,
    p: &Platform,
    group: &[SubscriberId],
    survivor: SubscriberId,
) -> Option<AxiomViolation> {
    let pooled = merge_subscribers(p, group, survivor).ok()?;
    let before = ind.relevance(p);
    let after = ind.relevance(&pooled);
    if before.values() == after.values() {
        return None;
    }
    Some(AxiomViolation {
        axiom: AxiomId::SharingProofness,
        platform: p.clone(),
        transformation: Transformation::MergeSubscribers { group: group.to_vec(), survivor },
        before: vector_values(&before),
        after: vector_values(&after),
        detail: String::from("pooling subscriptions moved the relevance vector"),
    })
}

pub fn violates_merge_manipulation(
    ind: &dyn RelevanceIndicator,
    p: &Platform,
    group: &[ServiceId],
    survivor: ServiceId,
) -> Option<AxiomViolation> {
    let merged = merge_services(p, group, survivor).ok()?;
    let before = ind.relevance(p);
    let group_total: Rat = group.iter().fold(Rat::zero(), |acc, i| acc + before.value(*i));
    // The survivor keeps its slot among the services outside the group.
    let removed_below = group
        .iter()
        .filter(|i| i.0 < survivor.0)
        .count();
    let survivor_after = ServiceId(survivor.0 - removed_below);
    let after = ind.relevance(&merged);
    let survivor_value = after.value(survivor_after).clone();
    if survivor_value == group_total {
        return None;
    }
    Some(AxiomViolation {
        axiom: AxiomId::NonManipulability,
        platform: p.clone(),
        transformation: Transformation::MergeServices { group: group.to_vec(), survivor },
        before: alloc::vec![group_total.clone()],
        after: alloc::vec![survivor_value.clone()],
        detail: format!("merged service holds {survivor_value}, the group held {group_total}"),
    })
}

pub fn violates_split_manipulation(
    ind: &dyn RelevanceIndicator,
    p: &Platform,
    target: ServiceId,
    parts: &[Vec<(SubscriberId, Rat)>],
) -> Option<AxiomViolation> {
    let split = split_service(p, target, parts).ok()?;
    let before = ind.relevance(p);
    let target_value = before.value(target).clone();
    let after = ind.relevance(&split);
    let parts_total: Rat = (0..parts.len())
        .map(|offset| after.value(ServiceId(target.0 + offset)).clone())
        .fold(Rat::zero(), |acc, v| acc + v);
    if parts_total == target_value {
        return None;
    }
    Some(AxiomViolation {
        axiom: AxiomId::NonManipulability,
        platform: p.clone(),
        transformation: Transformation::SplitService { target, parts: parts.to_vec() },
        before: alloc::vec![target_value.clone()],
        after: alloc::vec![parts_total.clone()],
        detail: format!(
            "split parts hold {parts_total}, the original service held {target_value}"
        ),
    })
}

/// Measures the relevance gap of `family` at the end of the sequence; a gap
/// at or above the configured floor while the input gap keeps shrinking is a
/// sensitivity violation.
pub fn violates_sensitivity(
    ind: &dyn RelevanceIndicator,
    family: &SensitivityFamily,
    cfg: &CheckConfig,
) -> Option<AxiomViolation> {
    let n = cfg.sensitivity_sequence_length;
    let (a, b) = family.pair(n);
    let gap = relevance_gap(ind, &a, &b);
    if gap < cfg.sensitivity_gap_threshold {
        return None;
    }
    let input_gap = family.input_gap(n);
    Some(AxiomViolation {
        axiom: AxiomId::ConsumptionSensitivity,
        platform: a,
        transformation: Transformation::SensitivityPair { counterpart: b, n },
        before: alloc::vec![input_gap.clone()],
        after: alloc::vec![gap.clone()],
        detail: format!(
            "input gap shrank to {input_gap} at n = {n} but the relevance gap stayed at {gap}"
        ),
    })
}

// ---------------------------------------------------------------------------
// Randomized falsification battery.
// ---------------------------------------------------------------------------

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn cell_rng(cfg: &CheckConfig, axiom: AxiomId, label: &str) -> ChaCha8Rng {
    let seed = cfg
        .rng_seed
        .wrapping_mul(0x9E3779B97F4A7C15)
        .wrapping_add(fnv1a(axiom.name().as_bytes()))
        .wrapping_add(fnv1a(label.as_bytes()));
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_trial(
    axiom: AxiomId,
    ind: &dyn RelevanceIndicator,
    cfg: &CheckConfig,
    rng: &mut ChaCha8Rng,
    trial: u32,
) -> Option<AxiomViolation> {
    match axiom {
        AxiomId::Efficiency => {
            let p = random::random_platform(rng, cfg.max_services, cfg.max_subscribers);
            violates_efficiency(ind, &p)
        }
        AxiomId::Symmetry => {
            let base = random::random_platform(rng, cfg.max_services, cfg.max_subscribers);
            let (p, _, _) = random::with_duplicate_rows(rng, &base);
            violates_symmetry(ind, &p)
        }
        AxiomId::StrongSymmetry => {
            let base = random::random_platform(rng, cfg.max_services, cfg.max_subscribers);
            let (p, _, _) = random::with_support_twins(rng, &base);
            violates_strong_symmetry(ind, &p)
        }
        AxiomId::Nullity => {
            let base = random::random_platform(rng, cfg.max_services, cfg.max_subscribers);
            let (p, _) = random::with_zero_row(rng, &base);
            violates_nullity(ind, &p)
        }
        AxiomId::Homogeneity => {
            let p = random::random_platform(rng, cfg.max_services, cfg.max_subscribers);
            let factor = random::random_scale(rng);
            violates_homogeneity(ind, &p, &factor)
        }
        AxiomId::Composition => {
            let services = rng.gen_range(3..=cfg.max_services.max(3));
            let left_subs = rng.gen_range(1..=cfg.max_subscribers.max(1));
            let right_subs = rng.gen_range(1..=cfg.max_subscribers.max(1));
            let a = random::random_platform_of(rng, services, left_subs);
            let b = random::random_platform_of(rng, services, right_subs);
            violates_composition(ind, &a, &b)
        }
        AxiomId::SharingProofness => {
            let services = rng.gen_range(3..=cfg.max_services.max(3));
            let subscribers = rng.gen_range(2..=cfg.max_subscribers.max(2));
            let p = random::random_platform_of(rng, services, subscribers);
            let (group, survivor) = random::random_subscriber_group(rng, &p);
            violates_sharing_proofness(ind, &p, &group, survivor)
        }
        AxiomId::NonManipulability => {
            let p = random::random_platform(rng, cfg.max_services, cfg.max_subscribers);
            if trial % 2 == 0 {
                let (group, survivor) = random::random_service_group(rng, &p);
                violates_merge_manipulation(ind, &p, &group, survivor)
            } else {
                let target = ServiceId(rng.gen_range(0..p.service_count()));
                let parts = if p.matrix().row(target).is_empty() {
                    alloc::vec![Vec::new(), Vec::new()]
                } else {
                    random::random_split(rng, &p, target)
                };
                violates_split_manipulation(ind, &p, target, &parts)
            }
        }
        AxiomId::ConsumptionSensitivity => {
            let base = random::random_platform(rng, cfg.max_services, cfg.max_subscribers);
            violates_sensitivity(ind, &SensitivityFamily::UniformVsScaled { base }, cfg)
        }
    }
}

fn holds_note(axiom: AxiomId, trials: u32) -> String {
    let reason = match axiom {
        AxiomId::Efficiency => "the values are normalized to sum to σ",
        AxiomId::Symmetry => "identical rows are indistinguishable to the formula",
        AxiomId::StrongSymmetry => "only the support pattern enters the formula",
        AxiomId::Nullity => "an empty row contributes no terms",
        AxiomId::Homogeneity => "a common factor cancels in every ratio",
        AxiomId::Composition => "the formula is a sum of per-subscriber terms",
        AxiomId::ConsumptionSensitivity => "the output ignores the consumption matrix",
        AxiomId::SharingProofness => "pooling columns preserves every row total",
        AxiomId::NonManipulability => "group relevance is additive over rows",
    };
    format!(
        "no violation in {trials} randomized trials plus registered counterexamples ({reason})"
    )
}

/// Checks one axiom against one indicator: registered counterexamples first,
/// then `cfg.trials` randomized transformation trials. Inability to falsify
/// is reported as `holds = true`.
pub fn check_axiom(
    axiom: AxiomId,
    indicator: &dyn RelevanceIndicator,
    cfg: &CheckConfig,
) -> AxiomVerdict {
    cfg.validate().expect("invalid check config");
    let mut verdict = AxiomVerdict {
        axiom,
        indicator_label: String::from(indicator.label()),
        indicator_kind: indicator.builtin(),
        holds: true,
        trials_run: 0,
        witness: None,
        note: String::new(),
    };
    if let Some(kind) = indicator.builtin() {
        for case in counterexamples::registry() {
            if case.axiom == axiom && case.indicator == kind {
                if let Some(violation) = case.run(indicator, cfg) {
                    verdict.holds = false;
                    verdict.note = format!("registered counterexample {:?}", case.id);
                    verdict.witness = Some(violation);
                    return verdict;
                }
            }
        }
    }
    let mut rng = cell_rng(cfg, axiom, indicator.label());
    for trial in 0..cfg.trials {
        verdict.trials_run = trial + 1;
        if let Some(violation) = random_trial(axiom, indicator, cfg, &mut rng, trial) {
            verdict.holds = false;
            verdict.note = format!("violation found on randomized trial {trial}");
            verdict.witness = Some(violation);
            return verdict;
        }
    }
    verdict.note = holds_note(axiom, cfg.trials);
    verdict
}

/// One cell of the verdict grid. Each cell derives its generator from its
/// own coordinates, so cells are reproducible independently and in parallel.
pub fn cell_verdict(axiom: AxiomId, kind: IndicatorKind, cfg: &CheckConfig) -> AxiomVerdict {
    check_axiom(axiom, &kind, cfg)
}

/// The full 9 × 4 verdict grid.
#[derive(Debug, Clone)]
pub struct VerdictGrid {
    pub cells: Vec<AxiomVerdict>,
}

impl VerdictGrid {
    pub fn from_cells(cells: Vec<AxiomVerdict>) -> Self {
        VerdictGrid { cells }
    }

    pub fn verdict(&self, axiom: AxiomId, kind: IndicatorKind) -> &AxiomVerdict {
        self.cells
            .iter()
            .find(|c| c.axiom == axiom && c.indicator_kind == Some(kind))
            .expect("grid holds every cell")
    }

    /// Cells whose verdict differs from the expected pattern.
    pub fn mismatches(&self) -> Vec<(AxiomId, IndicatorKind, bool)> {
        let mut out = Vec::new();
        for axiom in TABLE_ROWS {
            for kind in ALL_INDICATORS {
                let got = self.verdict(axiom, kind).holds;
                if got != expected_to_hold(axiom, kind) {
                    out.push((axiom, kind, got));
                }
            }
        }
        out
    }

    pub fn matches_expected(&self) -> bool {
        self.mismatches().is_empty()
    }
}

/// Computes every (axiom, indicator) verdict.
pub fn table1_matrix(cfg: &CheckConfig) -> VerdictGrid {
    let mut cells = Vec::with_capacity(36);
    for axiom in TABLE_ROWS {
        for kind in ALL_INDICATORS {
            cells.push(cell_verdict(axiom, kind, cfg));
        }
    }
    VerdictGrid { cells }
}

/// The four characterization bundles: each axiom set pins down exactly one
/// of the built-in indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Characterization {
    /// Composition + non-manipulability ⇒ subscriber-proportional.
    SubscriberProportional,
    /// Sharing proofness + non-manipulability ⇒ proportional.
    Proportional,
    /// Symmetry + homogeneity + consumption sensitivity ⇒ uniform.
    Uniform,
    /// Composition + nullity + strong symmetry ⇒ subscriber-uniform.
    SubscriberUniform,
}

pub const ALL_CHARACTERIZATIONS: [Characterization; 4] = [
    Characterization::SubscriberProportional,
    Characterization::Proportional,
    Characterization::Uniform,
    Characterization::SubscriberUniform,
];

impl Characterization {
    pub fn axioms(self) -> &'static [AxiomId] {
        match self {
            Characterization::SubscriberProportional => {
                &[AxiomId::Composition, AxiomId::NonManipulability]
            }
            Characterization::Proportional => {
                &[AxiomId::SharingProofness, AxiomId::NonManipulability]
            }
            Characterization::Uniform => &[
                AxiomId::Symmetry,
                AxiomId::Homogeneity,
                AxiomId::ConsumptionSensitivity,
            ],
            Characterization::SubscriberUniform => {
                &[AxiomId::Composition, AxiomId::Nullity, AxiomId::StrongSymmetry]
            }
        }
    }

    /// The indicator this axiom bundle characterizes.
    pub fn indicator(self) -> IndicatorKind {
        match self {
            Characterization::SubscriberProportional => IndicatorKind::SubscriberProportional,
            Characterization::Proportional => IndicatorKind::Proportional,
            Characterization::Uniform => IndicatorKind::Uniform,
            Characterization::SubscriberUniform => IndicatorKind::SubscriberUniform,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Characterization::SubscriberProportional => "composition + non-manipulability",
            Characterization::Proportional => "sharing proofness + non-manipulability",
            Characterization::Uniform => "symmetry + homogeneity + consumption sensitivity",
            Characterization::SubscriberUniform => "composition + nullity + strong symmetry",
        }
    }
}

/// Per-indicator verdicts over one characterization's axiom set.
#[derive(Debug, Clone)]
pub struct CharacterizationReport {
    pub characterization: Characterization,
    /// For each built-in indicator, the verdict on every axiom of the set.
    pub verdicts: Vec<(IndicatorKind, Vec<AxiomVerdict>)>,
}

impl CharacterizationReport {
    pub fn passes(&self, kind: IndicatorKind) -> bool {
        self.verdicts
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, vs)| vs.iter().all(|v| v.holds))
            .unwrap_or(false)
    }

    /// True when exactly the characterized indicator passes the whole set
    /// and every other indicator fails at least one axiom of it.
    pub fn is_consistent(&self) -> bool {
        ALL_INDICATORS
            .iter()
            .all(|kind| self.passes(*kind) == (*kind == self.characterization.indicator()))
    }

    /// The axioms the given indicator fails within the set.
    pub fn failures(&self, kind: IndicatorKind) -> Vec<AxiomId> {
        self.verdicts
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, vs)| vs.iter().filter(|v| !v.holds).map(|v| v.axiom).collect())
            .unwrap_or_default()
    }
}

/// Runs one characterization's axiom set over all four indicators.
pub fn theorem_consistency(
    characterization: Characterization,
    cfg: &CheckConfig,
) -> CharacterizationReport {
    cfg.validate().expect("invalid check config");
    let verdicts = ALL_INDICATORS
        .iter()
        .map(|kind| {
            let per_axiom = characterization
                .axioms()
                .iter()
                .map(|axiom| cell_verdict(*axiom, *kind, cfg))
                .collect();
            (*kind, per_axiom)
        })
        .collect();
    CharacterizationReport { characterization, verdicts }
}
