//! When does a service prefer one indicator over another?
//!
//! This module carries the comparison machinery: sufficient conditions
//! (lemmas) under which one indicator dominates another for a given service,
//! the relevance gained by splitting a service, exact marginal sensitivities
//! of each indicator to a single consumption entry, and the two-subscriber
//! threshold scenario with its full case analysis.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::axioms::transform::{equal_parts, split_service, TransformError};
use crate::indicators::{self, IndicatorKind};
use crate::platform::{Platform, PlatformError, ServiceId, SubscriberId};
use crate::rational::{int, Rat};

/// Sufficient conditions for pairwise indicator preference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaId {
    /// Weighted in-support prices dominate out-of-support prices ⇒ the
    /// subscriber-uniform value is at least the uniform one.
    SuVsUGeneral,
    /// Watched by every subscriber ⇒ subscriber-uniform ≥ uniform.
    SuVsUAllViewers,
    /// Row total at least the average of the other rows ⇒ proportional ≥
    /// uniform.
    PVsUAvgRow,
    /// At least the average of the other entries in every column ⇒
    /// subscriber-proportional ≥ uniform.
    SpVsUColAvg,
    /// At least the average of the co-watched entries in every supporting
    /// column ⇒ subscriber-proportional ≥ subscriber-uniform.
    SpVsSuLocalAvg,
    /// Splitting a service never loses relevance under the uniform or
    /// subscriber-uniform indicators.
    SplitGain,
}

pub const ALL_LEMMAS: [LemmaId; 6] = [
    LemmaId::SuVsUGeneral,
    LemmaId::SuVsUAllViewers,
    LemmaId::PVsUAvgRow,
    LemmaId::SpVsUColAvg,
    LemmaId::SpVsSuLocalAvg,
    LemmaId::SplitGain,
];

impl LemmaId {
    pub fn name(self) -> &'static str {
        match self {
            LemmaId::SuVsUGeneral => "weighted-support dominance (su ≥ u)",
            LemmaId::SuVsUAllViewers => "watched by all (su ≥ u)",
            LemmaId::PVsUAvgRow => "above-average row (p ≥ u)",
            LemmaId::SpVsUColAvg => "above-average in every column (sp ≥ u)",
            LemmaId::SpVsSuLocalAvg => "above local average (sp ≥ su)",
            LemmaId::SplitGain => "splitting never loses (u, su)",
        }
    }

    /// The indicator pair (winner, loser) the lemma speaks about, when it is
    /// a pairwise statement.
    pub fn pair(self) -> Option<(IndicatorKind, IndicatorKind)> {
        match self {
            LemmaId::SuVsUGeneral | LemmaId::SuVsUAllViewers => {
                Some((IndicatorKind::SubscriberUniform, IndicatorKind::Uniform))
            }
            LemmaId::PVsUAvgRow => Some((IndicatorKind::Proportional, IndicatorKind::Uniform)),
            LemmaId::SpVsUColAvg => {
                Some((IndicatorKind::SubscriberProportional, IndicatorKind::Uniform))
            }
            LemmaId::SpVsSuLocalAvg => Some((
                IndicatorKind::SubscriberProportional,
                IndicatorKind::SubscriberUniform,
            )),
            LemmaId::SplitGain => None,
        }
    }
}

/// Does the lemma's sufficient condition hold for service `i` on `p`?
///
/// All comparisons are exact and weak (≥), matching the statements.
pub fn lemma_hypothesis(lemma: LemmaId, p: &Platform, i: ServiceId) -> bool {
    let n = p.service_count();
    match lemma {
        LemmaId::SuVsUGeneral => {
            // Σ_{s: i∈N_s} (|N|−|N_s|)/|N_s| · p_s ≥ Σ_{s: i∉N_s} p_s.
            let mut weighted_in = Rat::zero();
            let mut out = Rat::zero();
            for s in p.subscribers() {
                let column = p.matrix().column(s);
                if column.iter().any(|(j, _)| *j == i) {
                    let k = column.len() as i64;
                    weighted_in += Rat::new((n as i64 - k).into(), k.into()) * p.price(s);
                } else {
                    out += p.price(s);
                }
            }
            weighted_in >= out
        }
        LemmaId::SuVsUAllViewers => p.matrix().row(i).len() == p.subscriber_count(),
        LemmaId::PVsUAvgRow => {
            // ‖C_i·‖ ≥ (Σ_{j≠i} ‖C_j·‖) / (|N|−1); |N| ≥ 3 in the model.
            if n < 2 {
                return true;
            }
            let row = p.matrix().row_total(i);
            let others = p.matrix().grand_total() - row;
            row * int(n as i64 - 1) >= others
        }
        LemmaId::SpVsUColAvg => {
            if n < 2 {
                return true;
            }
            p.subscribers().all(|s| {
                let own = p.entry(i, s);
                let others = p.matrix().column_total(s) - &own;
                own * int(n as i64 - 1) >= others
            })
        }
        LemmaId::SpVsSuLocalAvg => {
            // Over columns that contain i with at least one co-watched
            // service; a column watched only through i is vacuous.
            p.matrix().row(i).iter().all(|(s, own)| {
                let k = p.matrix().column(*s).len() as i64;
                if k < 2 {
                    return true;
                }
                let others = p.matrix().column_total(*s) - own;
                own * int(k - 1) >= others
            })
        }
        LemmaId::SplitGain => true,
    }
}

/// Does the lemma's conclusion hold for service `i` on `p`?
///
/// The paired lemmas compare the two indicators directly; the split lemma
/// checks that an even two-way split does not lose relevance under the
/// uniform and subscriber-uniform indicators.
pub fn lemma_conclusion_holds(lemma: LemmaId, p: &Platform, i: ServiceId) -> bool {
    let value = |kind: IndicatorKind| indicators::evaluate(kind, p).value(i).clone();
    match lemma {
        LemmaId::SuVsUGeneral | LemmaId::SuVsUAllViewers => {
            value(IndicatorKind::SubscriberUniform) >= value(IndicatorKind::Uniform)
        }
        LemmaId::PVsUAvgRow => value(IndicatorKind::Proportional) >= value(IndicatorKind::Uniform),
        LemmaId::SpVsUColAvg => {
            value(IndicatorKind::SubscriberProportional) >= value(IndicatorKind::Uniform)
        }
        LemmaId::SpVsSuLocalAvg => {
            value(IndicatorKind::SubscriberProportional)
                >= value(IndicatorKind::SubscriberUniform)
        }
        LemmaId::SplitGain => {
            let parts = equal_parts(p, i, 2);
            [IndicatorKind::Uniform, IndicatorKind::SubscriberUniform]
                .into_iter()
                .all(|kind| {
                    split_gain(p, i, &parts, kind)
                        .map(|gain| gain >= Rat::zero())
                        .unwrap_or(false)
                })
        }
    }
}

/// Relevance gained by replacing `target` with `parts`: the parts' total
/// relevance on the split platform minus the target's relevance before.
///
/// Nonnegative for the uniform and subscriber-uniform indicators; exactly
/// zero for the proportional and subscriber-proportional ones.
pub fn split_gain(
    p: &Platform,
    target: ServiceId,
    parts: &[Vec<(SubscriberId, Rat)>],
    kind: IndicatorKind,
) -> Result<Rat, TransformError> {
    let split = split_service(p, target, parts)?;
    let before = indicators::evaluate(kind, p).value(target).clone();
    let after = indicators::evaluate(kind, &split);
    let parts_total = (0..parts.len())
        .map(|offset| after.value(ServiceId(target.0 + offset)).clone())
        .fold(Rat::zero(), |acc, v| acc + v);
    Ok(parts_total - before)
}

/// Exact response of an indicator to growing one consumption entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sensitivity {
    /// Smooth in the entry: the exact partial derivative at the current
    /// matrix (constant 0 for the uniform indicator).
    Gradient(Rat),
    /// The subscriber-uniform indicator is piecewise constant: a new viewer
    /// relationship jumps the service's value by `own_gain` and each
    /// incumbent's by −`incumbent_loss`; growing an existing entry changes
    /// nothing (both fields zero).
    MembershipDelta { own_gain: Rat, incumbent_loss: Rat },
}

/// ∂R_i/∂C_is in exact closed form.
pub fn marginal_sensitivity(
    p: &Platform,
    kind: IndicatorKind,
    i: ServiceId,
    s: SubscriberId,
) -> Sensitivity {
    match kind {
        IndicatorKind::Uniform => Sensitivity::Gradient(Rat::zero()),
        IndicatorKind::Proportional => {
            // (Σ_{j≠i} ‖C_j·‖) / (Σ_j ‖C_j·‖)² · σ — the same for every s.
            let grand = p.matrix().grand_total();
            let others = &grand - p.matrix().row_total(i);
            Sensitivity::Gradient(others / (&grand * &grand) * p.success())
        }
        IndicatorKind::SubscriberProportional => {
            // (Σ_{j≠i} C_js) / ‖C_·s‖² · p_s.
            let column_total = p.matrix().column_total(s).clone();
            let others = &column_total - p.entry(i, s);
            Sensitivity::Gradient(others / (&column_total * &column_total) * p.price(s))
        }
        IndicatorKind::SubscriberUniform => {
            if p.entry(i, s).is_zero() {
                let incumbents = p.matrix().column(s).len() as i64;
                let own_gain = p.price(s) / int(incumbents + 1);
                let incumbent_loss = p.price(s) / int((incumbents + 1) * incumbents);
                Sensitivity::MembershipDelta { own_gain, incumbent_loss }
            } else {
                Sensitivity::MembershipDelta {
                    own_gain: Rat::zero(),
                    incumbent_loss: Rat::zero(),
                }
            }
        }
    }
}

/// Which side of a pairwise comparison gets more relevance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    First,
    Second,
    Tie,
}

fn compare(a: &Rat, b: &Rat) -> Preference {
    match a.cmp(b) {
        core::cmp::Ordering::Greater => Preference::First,
        core::cmp::Ordering::Less => Preference::Second,
        core::cmp::Ordering::Equal => Preference::Tie,
    }
}

/// The six ordered indicator pairs every comparison report covers.
pub const COMPARISON_PAIRS: [(IndicatorKind, IndicatorKind); 6] = [
    (IndicatorKind::SubscriberUniform, IndicatorKind::Uniform),
    (IndicatorKind::Proportional, IndicatorKind::Uniform),
    (IndicatorKind::SubscriberProportional, IndicatorKind::Uniform),
    (IndicatorKind::Proportional, IndicatorKind::SubscriberUniform),
    (IndicatorKind::SubscriberProportional, IndicatorKind::SubscriberUniform),
    (IndicatorKind::Proportional, IndicatorKind::SubscriberProportional),
];

/// The two-subscriber scenario with one free consumption parameter M:
/// streamer 0 is watched only by subscriber 0 (amount M), streamer 1 by both
/// (one unit each), streamer 2 by nobody.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyScenario {
    pub m: Rat,
    pub p1: Rat,
    pub p2: Rat,
}

impl ToyScenario {
    pub fn new(m: Rat, p1: Rat, p2: Rat) -> Result<Self, PlatformError> {
        if m <= Rat::zero() {
            return Err(PlatformError::NegativeQuantity);
        }
        if p1 <= Rat::zero() || p2 <= Rat::zero() {
            return Err(PlatformError::NonPositivePrice(usize::MAX));
        }
        Ok(ToyScenario { m, p1, p2 })
    }

    /// The 3 × 2 platform [[M, 0], [1, 1], [0, 0]] with prices (p1, p2).
    pub fn platform(&self) -> Platform {
        Platform::from_dense(
            alloc::vec![self.p1.clone(), self.p2.clone()],
            alloc::vec![
                alloc::vec![self.m.clone(), Rat::zero()],
                alloc::vec![int(1), int(1)],
                alloc::vec![Rat::zero(), Rat::zero()],
            ],
        )
        .expect("scenario parameters are validated")
    }
}

/// One row of the threshold case analysis: for a pair of indicators and a
/// streamer, the preference predicted by the closed-form threshold and the
/// preference actually computed from the indicator values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdRow {
    pub pair: (IndicatorKind, IndicatorKind),
    pub streamer: ServiceId,
    pub predicted: Preference,
    pub actual: Preference,
}

impl ThresholdRow {
    pub fn agrees(&self) -> bool {
        self.predicted == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub scenario: ToyScenario,
    pub rows: Vec<ThresholdRow>,
}

impl ThresholdReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(ThresholdRow::agrees)
    }

    pub fn disagreements(&self) -> Vec<&ThresholdRow> {
        self.rows.iter().filter(|r| !r.agrees()).collect()
    }
}

/// The closed-form case analysis for the scenario, independent of the
/// indicator implementations. Boundary cases are ties.
fn predicted_preference(
    scn: &ToyScenario,
    pair: (IndicatorKind, IndicatorKind),
    streamer: usize,
) -> Preference {
    use IndicatorKind::*;
    let (m, p1, p2) = (&scn.m, &scn.p1, &scn.p2);
    let two_p2 = p2 * int(2);
    let sigma = p1 + p2;
    match (pair, streamer) {
        // su vs u: streamer 0 wins iff p1 > 2·p2; streamer 1 always wins.
        ((SubscriberUniform, Uniform), 0) => compare(p1, &two_p2),
        ((SubscriberUniform, Uniform), 1) => Preference::First,
        // p vs u: streamer 0 wins iff M > 1; streamer 1 wins iff M < 4.
        ((Proportional, Uniform), 0) => compare(m, &int(1)),
        ((Proportional, Uniform), 1) => compare(&int(4), m),
        // sp vs u, streamer 0: needs 2·p1 > p2 and then M·(2p1 − p2) > p1 + p2.
        ((SubscriberProportional, Uniform), 0) => {
            let slope = p1 * int(2) - p2;
            if slope <= Rat::zero() {
                Preference::Second
            } else {
                compare(&(m * slope), &sigma)
            }
        }
        // sp vs u, streamer 1: wins outright unless p1 > 2·p2 and
        // M·(p1 − 2p2) > 2·(p1 + p2).
        ((SubscriberProportional, Uniform), 1) => {
            let slope = p1 - &two_p2;
            if slope <= Rat::zero() {
                Preference::First
            } else {
                compare(&(sigma * int(2)), &(m * slope))
            }
        }
        // p vs su: a single threshold M·(p1 + 2p2) vs 2·p1, mirrored between
        // the two streamers.
        ((Proportional, SubscriberUniform), 0) => {
            compare(&(m * (p1 + &two_p2)), &(p1 * int(2)))
        }
        ((Proportional, SubscriberUniform), 1) => {
            compare(&(p1 * int(2)), &(m * (p1 + &two_p2)))
        }
        // sp vs su: the threshold is M = 1, mirrored.
        ((SubscriberProportional, SubscriberUniform), 0) => compare(m, &int(1)),
        ((SubscriberProportional, SubscriberUniform), 1) => compare(&int(1), m),
        // p vs sp: streamer 0 prefers p iff p2·(M + 1) > p1, mirrored.
        ((Proportional, SubscriberProportional), 0) => {
            compare(&(p2 * (m + int(1))), p1)
        }
        ((Proportional, SubscriberProportional), 1) => {
            compare(p1, &(p2 * (m + int(1))))
        }
        _ => unreachable!("threshold table covers streamers 0 and 1 of the six pairs"),
    }
}

/// Evaluates every pairwise threshold claim on the instantiated scenario and
/// compares it with the exact indicator values for streamers 0 and 1.
pub fn toy_thresholds(scn: &ToyScenario) -> ThresholdReport {
    let platform = scn.platform();
    let values: alloc::collections::BTreeMap<IndicatorKind, Vec<Rat>> =
        indicators::ALL_INDICATORS
            .iter()
            .map(|kind| (*kind, indicators::evaluate(*kind, &platform).into_values()))
            .collect();
    let mut rows = Vec::new();
    for pair in COMPARISON_PAIRS {
        for streamer in 0..2usize {
            let actual = compare(&values[&pair.0][streamer], &values[&pair.1][streamer]);
            rows.push(ThresholdRow {
                pair,
                streamer: ServiceId(streamer),
                predicted: predicted_preference(scn, pair, streamer),
                actual,
            });
        }
    }
    ThresholdReport { scenario: scn.clone(), rows }
}

/// Draws a random (platform, service) instance satisfying the lemma's
/// hypothesis, for the hypothesis ⇒ conclusion batteries. The platform is
/// drawn like the axiom trials draw theirs and then minimally adjusted
/// (densifying or raising the chosen service's row) until the hypothesis
/// holds; instances that still miss it are rejected and redrawn.
pub fn sample_lemma_instance<R: rand::Rng>(
    lemma: LemmaId,
    rng: &mut R,
    max_services: usize,
    max_subscribers: usize,
) -> (Platform, ServiceId) {
    use crate::axioms::random::{random_platform, small_positive_rational};
    loop {
        let base = random_platform(rng, max_services, max_subscribers);
        let i = ServiceId(rng.gen_range(0..base.service_count()));
        let n = base.service_count() as i64;
        let mut entries: Vec<(usize, usize, Rat)> = base
            .matrix()
            .entries()
            .map(|(j, s, q)| (j.0, s.0, q.clone()))
            .collect();
        match lemma {
            LemmaId::SuVsUAllViewers => {
                for s in base.subscribers() {
                    if base.entry(i, s).is_zero() {
                        entries.push((i.0, s.0, small_positive_rational(rng)));
                    }
                }
            }
            LemmaId::SuVsUGeneral => {
                // Densify the row; rejection below handles the price side.
                for s in base.subscribers() {
                    if base.entry(i, s).is_zero() && rng.gen_bool(0.75) {
                        entries.push((i.0, s.0, small_positive_rational(rng)));
                    }
                }
            }
            LemmaId::PVsUAvgRow => {
                // Raise the row total to the average of the others.
                let others = base.matrix().grand_total() - base.matrix().row_total(i);
                let required = others / int(n - 1);
                let deficit = required - base.matrix().row_total(i);
                if deficit > Rat::zero() {
                    let s = SubscriberId(rng.gen_range(0..base.subscriber_count()));
                    entries.push((i.0, s.0, deficit + small_positive_rational(rng)));
                }
            }
            LemmaId::SpVsUColAvg => {
                for s in base.subscribers() {
                    let own = base.entry(i, s);
                    let others = base.matrix().column_total(s) - &own;
                    let required = others / int(n - 1);
                    if own < required {
                        entries.push((i.0, s.0, required - own));
                    }
                }
            }
            LemmaId::SpVsSuLocalAvg => {
                for (s, own) in base.matrix().row(i) {
                    let k = base.matrix().column(*s).len() as i64;
                    if k < 2 {
                        continue;
                    }
                    let others = base.matrix().column_total(*s) - own;
                    let required = others / int(k - 1);
                    if *own < required {
                        entries.push((i.0, s.0, required - own));
                    }
                }
            }
            LemmaId::SplitGain => {}
        }
        let candidate =
            Platform::build_raw(base.prices().to_vec(), entries, base.service_count())
                .expect("adjusted platform stays valid");
        if lemma_hypothesis(lemma, &candidate, i) {
            return (candidate, i);
        }
    }
}

/// One pairwise comparison for a service: the exact gap, the winner, and any
/// lemma certificates whose hypotheses hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairComparison {
    pub first: IndicatorKind,
    pub second: IndicatorKind,
    /// Exact value of first − second for this service.
    pub gap: Rat,
    pub preferred: Preference,
    pub certificates: Vec<LemmaId>,
}

/// All six pairwise comparisons for one service.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceReport {
    pub service: ServiceId,
    pub comparisons: Vec<PairComparison>,
}

impl PreferenceReport {
    pub fn comparison(
        &self,
        first: IndicatorKind,
        second: IndicatorKind,
    ) -> Option<&PairComparison> {
        self.comparisons
            .iter()
            .find(|c| c.first == first && c.second == second)
    }
}

/// Builds the full pairwise comparison report for service `i`.
pub fn preference_report(p: &Platform, i: ServiceId) -> PreferenceReport {
    let values: alloc::collections::BTreeMap<IndicatorKind, Rat> = indicators::ALL_INDICATORS
        .iter()
        .map(|kind| (*kind, indicators::evaluate(*kind, p).value(i).clone()))
        .collect();
    let comparisons = COMPARISON_PAIRS
        .iter()
        .map(|(first, second)| {
            let gap = &values[first] - &values[second];
            let certificates = ALL_LEMMAS
                .iter()
                .filter(|lemma| {
                    lemma.pair() == Some((*first, *second)) && lemma_hypothesis(**lemma, p, i)
                })
                .copied()
                .collect();
            PairComparison {
                first: *first,
                second: *second,
                preferred: compare(&values[first], &values[second]),
                gap,
                certificates,
            }
        })
        .collect();
    PreferenceReport { service: i, comparisons }
}
