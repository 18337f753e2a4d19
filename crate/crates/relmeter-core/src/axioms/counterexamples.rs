//! The registered counterexamples: for every (axiom, indicator) cell that
//! must fail, one small deterministic scenario that exhibits the violation.
//! The checkers run these before any randomized trials, so failing cells
//! never depend on luck, and each stored witness can be re-executed.

use alloc::vec;

use crate::indicators::IndicatorKind;
use crate::platform::{Platform, ServiceId, SubscriberId};
use crate::rational::{int, rat};

use super::transform::Transformation;
use super::{
    violates_composition, violates_merge_manipulation, violates_nullity, violates_sensitivity,
    violates_sharing_proofness, violates_strong_symmetry, AxiomId, AxiomViolation, CheckConfig,
    RelevanceIndicator, SensitivityFamily,
};

/// How a registered counterexample exercises its axiom.
pub enum Scenario {
    /// The violation is visible on the platform itself.
    OnPlatform(fn() -> Platform),
    /// The violation appears under a transformation of the platform.
    Transformed(fn() -> (Platform, Transformation)),
    /// The violation is a persistent relevance gap along a sequence pair.
    Sequence(fn() -> SensitivityFamily),
}

pub struct Counterexample {
    pub id: &'static str,
    pub axiom: AxiomId,
    pub indicator: IndicatorKind,
    pub scenario: Scenario,
}

impl Counterexample {
    /// Runs the scenario; returns the violation it is expected to produce.
    pub fn run(
        &self,
        indicator: &dyn RelevanceIndicator,
        cfg: &CheckConfig,
    ) -> Option<AxiomViolation> {
        match &self.scenario {
            Scenario::OnPlatform(build) => {
                let p = build();
                match self.axiom {
                    AxiomId::Nullity => violates_nullity(indicator, &p),
                    AxiomId::StrongSymmetry => violates_strong_symmetry(indicator, &p),
                    _ => None,
                }
            }
            Scenario::Transformed(build) => {
                let (p, t) = build();
                match (&self.axiom, &t) {
                    (AxiomId::NonManipulability, Transformation::MergeServices { group, survivor }) => {
                        violates_merge_manipulation(indicator, &p, group, *survivor)
                    }
                    (AxiomId::SharingProofness, Transformation::MergeSubscribers { group, survivor }) => {
                        violates_sharing_proofness(indicator, &p, group, *survivor)
                    }
                    (AxiomId::Composition, Transformation::Compose { other }) => {
                        violates_composition(indicator, &p, other)
                    }
                    _ => None,
                }
            }
            Scenario::Sequence(build) => violates_sensitivity(indicator, &build(), cfg),
        }
    }
}

/// Single subscriber paying 1; rows (0), (1), (2). Services 1 and 2 share
/// their support, so any support-based symmetry must tie them; service 0 is
/// a zero row.
fn skewed_column() -> Platform {
    Platform::from_dense(vec![int(1)], vec![vec![int(0)], vec![int(1)], vec![int(2)]]).unwrap()
}

/// Single subscriber paying 1; rows (0), (1), (5/2). Merging the first two
/// services moves the uniform share of the pair from 2/3 to 1/2.
fn merge_bait() -> (Platform, Transformation) {
    let p = Platform::from_dense(
        vec![int(1)],
        vec![vec![int(0)], vec![int(1)], vec![rat(5, 2)]],
    )
    .unwrap();
    let t = Transformation::MergeServices {
        group: vec![ServiceId(0), ServiceId(1)],
        survivor: ServiceId(0),
    };
    (p, t)
}

/// Single subscriber paying 1 who watches all three services equally.
/// Merging two of them drops their pooled per-subscriber share from 2/3 to
/// 1/2, so even the support-counting indicator is manipulable.
fn merge_overlap() -> (Platform, Transformation) {
    let p = Platform::from_dense(
        vec![int(1)],
        vec![vec![int(1)], vec![int(1)], vec![int(1)]],
    )
    .unwrap();
    let t = Transformation::MergeServices {
        group: vec![ServiceId(0), ServiceId(1)],
        survivor: ServiceId(0),
    };
    (p, t)
}

/// Two subscribers paying 1 each; rows (0,2), (1,0), (1,0). Pooling the two
/// subscriptions moves the per-subscriber uniform split from (1, 1/2, 1/2)
/// to (2/3, 2/3, 2/3).
fn sharing_bait_supports() -> (Platform, Transformation) {
    let p = Platform::from_dense(
        vec![int(1), int(1)],
        vec![vec![int(0), int(2)], vec![int(1), int(0)], vec![int(1), int(0)]],
    )
    .unwrap();
    let t = Transformation::MergeSubscribers {
        group: vec![SubscriberId(0), SubscriberId(1)],
        survivor: SubscriberId(0),
    };
    (p, t)
}

/// Two subscribers paying 1 each; rows (0,2), (1,1), (1,1). Pooling moves
/// the user-centric split from (1/2, 3/4, 3/4) to (2/3, 2/3, 2/3).
fn sharing_bait_amounts() -> (Platform, Transformation) {
    let p = Platform::from_dense(
        vec![int(1), int(1)],
        vec![vec![int(0), int(2)], vec![int(1), int(1)], vec![int(1), int(1)]],
    )
    .unwrap();
    let t = Transformation::MergeSubscribers {
        group: vec![SubscriberId(0), SubscriberId(1)],
        survivor: SubscriberId(0),
    };
    (p, t)
}

/// Columns (1/n, 1/n, 1/n) against (0, 1/n, 2/n): the entrywise gap shrinks
/// like 2/n while the relevance gap stays at 2/3 for every consumption-aware
/// indicator.
fn diverging_column() -> SensitivityFamily {
    SensitivityFamily::DivergingColumn { price: int(1) }
}

/// The registry, keyed by the failing cells of the verdict grid.
pub fn registry() -> &'static [Counterexample] {
    const REGISTRY: &[Counterexample] = &[
        Counterexample {
            id: "uniform-pays-unwatched-service",
            axiom: AxiomId::Nullity,
            indicator: IndicatorKind::Uniform,
            scenario: Scenario::OnPlatform(skewed_column),
        },
        Counterexample {
            id: "uniform-rewards-service-merge",
            axiom: AxiomId::NonManipulability,
            indicator: IndicatorKind::Uniform,
            scenario: Scenario::Transformed(merge_bait),
        },
        Counterexample {
            id: "subscriber-uniform-rewards-service-merge",
            axiom: AxiomId::NonManipulability,
            indicator: IndicatorKind::SubscriberUniform,
            scenario: Scenario::Transformed(merge_overlap),
        },
        Counterexample {
            id: "proportional-breaks-support-ties",
            axiom: AxiomId::StrongSymmetry,
            indicator: IndicatorKind::Proportional,
            scenario: Scenario::OnPlatform(skewed_column),
        },
        Counterexample {
            id: "subscriber-proportional-breaks-support-ties",
            axiom: AxiomId::StrongSymmetry,
            indicator: IndicatorKind::SubscriberProportional,
            scenario: Scenario::OnPlatform(skewed_column),
        },
        Counterexample {
            id: "subscriber-uniform-gap-persists",
            axiom: AxiomId::ConsumptionSensitivity,
            indicator: IndicatorKind::SubscriberUniform,
            scenario: Scenario::Sequence(diverging_column),
        },
        Counterexample {
            id: "proportional-gap-persists",
            axiom: AxiomId::ConsumptionSensitivity,
            indicator: IndicatorKind::Proportional,
            scenario: Scenario::Sequence(diverging_column),
        },
        Counterexample {
            id: "subscriber-proportional-gap-persists",
            axiom: AxiomId::ConsumptionSensitivity,
            indicator: IndicatorKind::SubscriberProportional,
            scenario: Scenario::Sequence(diverging_column),
        },
        Counterexample {
            id: "proportional-not-additive-over-populations",
            axiom: AxiomId::Composition,
            indicator: IndicatorKind::Proportional,
            scenario: Scenario::Transformed(composition_bait),
        },
        Counterexample {
            id: "subscriber-uniform-moved-by-pooling",
            axiom: AxiomId::SharingProofness,
            indicator: IndicatorKind::SubscriberUniform,
            scenario: Scenario::Transformed(sharing_bait_supports),
        },
        Counterexample {
            id: "subscriber-proportional-moved-by-pooling",
            axiom: AxiomId::SharingProofness,
            indicator: IndicatorKind::SubscriberProportional,
            scenario: Scenario::Transformed(sharing_bait_amounts),
        },
    ];
    REGISTRY
}

/// Columns (0,1,1) and (2,1,1) under unit prices: the aggregate shares of
/// the combined population, (2/3, 2/3, 2/3), differ from the sum of the
/// parts, (1/2, 3/4, 3/4).
fn composition_bait() -> (Platform, Transformation) {
    let a = Platform::from_dense(vec![int(1)], vec![vec![int(0)], vec![int(1)], vec![int(1)]])
        .unwrap();
    let b = Platform::from_dense(vec![int(1)], vec![vec![int(2)], vec![int(1)], vec![int(1)]])
        .unwrap();
    (a, Transformation::Compose { other: b })
}
