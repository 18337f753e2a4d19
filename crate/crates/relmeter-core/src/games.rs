//! Coalition games over the service set and their exact Shapley values.
//!
//! Five characteristic functions are defined, each measuring the relevance of
//! a service coalition to the platform's success from a different angle. The
//! Shapley value of each game coincides, service by service and exactly, with
//! one of the four indicators; [`verify_coincidence`] checks all five
//! pairings by exhaustive subset enumeration.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::indicators::{self, IndicatorKind};
use crate::platform::{Platform, ServiceId};
use crate::rational::{sum_grouped, Rat};

/// The five characteristic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameKind {
    /// Subscribers stay no matter what: every nonempty coalition is worth σ.
    /// Shapley value: the uniform indicator.
    Constant,
    /// A coalition earns the prices of the subscribers whose entire viewing
    /// lies inside it (leaving services take their viewers with them).
    /// Shapley value: the subscriber-uniform indicator.
    EssentialViewers,
    /// A coalition earns, per subscriber, the fraction of their watched
    /// services it contains. Shapley value: the subscriber-uniform indicator.
    SupportShare,
    /// A coalition earns, per subscriber, its share of that subscriber's
    /// viewing time. Shapley value: the subscriber-proportional indicator.
    ConsumptionShare,
    /// A coalition earns its share of total viewing time. Shapley value:
    /// the proportional indicator.
    AggregateShare,
}

pub const ALL_GAMES: [GameKind; 5] = [
    GameKind::Constant,
    GameKind::EssentialViewers,
    GameKind::SupportShare,
    GameKind::ConsumptionShare,
    GameKind::AggregateShare,
];

impl GameKind {
    pub fn name(self) -> &'static str {
        match self {
            GameKind::Constant => "constant",
            GameKind::EssentialViewers => "essential-viewers",
            GameKind::SupportShare => "support-share",
            GameKind::ConsumptionShare => "consumption-share",
            GameKind::AggregateShare => "aggregate-share",
        }
    }

    /// The indicator this game's Shapley value must equal.
    pub fn indicator(self) -> IndicatorKind {
        match self {
            GameKind::Constant => IndicatorKind::Uniform,
            GameKind::EssentialViewers | GameKind::SupportShare => IndicatorKind::SubscriberUniform,
            GameKind::ConsumptionShare => IndicatorKind::SubscriberProportional,
            GameKind::AggregateShare => IndicatorKind::Proportional,
        }
    }
}

impl core::fmt::Display for GameKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// A characteristic function bound to a platform. Services are the players.
#[derive(Debug, Clone)]
pub struct CoalitionGame<'a> {
    platform: &'a Platform,
    kind: GameKind,
}

/// Exhaustive enumeration bound: beyond this many services the 2^|N| subset
/// walk is refused rather than silently approximated.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameError {
    TooManyServices { services: usize, limit: usize },
}

impl core::fmt::Display for GameError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GameError::TooManyServices { services, limit } => write!(
                f,
                "{services} services exceed the exhaustive Shapley bound of {limit}"
            ),
        }
    }
}

impl core::error::Error for GameError {}

impl<'a> CoalitionGame<'a> {
    pub fn new(platform: &'a Platform, kind: GameKind) -> Self {
        CoalitionGame { platform, kind }
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn platform(&self) -> &Platform {
        self.platform
    }

    /// v(coalition). The empty coalition is worth 0 in every game.
    pub fn value(&self, coalition: &[ServiceId]) -> Rat {
        let mut mask = 0u32;
        for i in coalition {
            assert!(i.0 < self.platform.service_count(), "coalition member out of range");
            mask |= 1 << i.0;
        }
        self.value_of_mask(mask)
    }

    /// v over a bitmask of service indices.
    pub fn value_of_mask(&self, mask: u32) -> Rat {
        if mask == 0 {
            return Rat::zero();
        }
        let p = self.platform;
        match self.kind {
            GameKind::Constant => p.success().clone(),
            GameKind::EssentialViewers => {
                // Subscribers whose whole support lies inside the coalition.
                let qualifying = p.subscribers().filter(|s| {
                    p.matrix().column(*s).iter().all(|(i, _)| mask & (1 << i.0) != 0)
                });
                sum_grouped(qualifying.map(|s| p.price(s).clone()))
            }
            GameKind::SupportShare => {
                let terms = p.subscribers().map(|s| {
                    let column = p.matrix().column(s);
                    let inside = column.iter().filter(|(i, _)| mask & (1 << i.0) != 0).count();
                    Rat::new(BigInt::from(inside), BigInt::from(column.len())) * p.price(s)
                });
                sum_grouped(terms)
            }
            GameKind::ConsumptionShare => {
                let terms = p.subscribers().flat_map(|s| {
                    let total = p.matrix().column_total(s).clone();
                    let price = p.price(s).clone();
                    p.matrix()
                        .column(s)
                        .iter()
                        .filter(move |(i, _)| mask & (1 << i.0) != 0)
                        .map(move |(_, q)| q / &total * &price)
                        .collect::<Vec<_>>()
                });
                sum_grouped(terms)
            }
            GameKind::AggregateShare => {
                let grand_total = p.matrix().grand_total();
                let terms = p
                    .services()
                    .filter(|i| mask & (1 << i.0) != 0)
                    .map(|i| p.matrix().row_total(i) / &grand_total * p.success());
                sum_grouped(terms)
            }
        }
    }
}

/// Exact Shapley values per service, summing to v(N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapleyResult {
    pub game: GameKind,
    pub values: Vec<Rat>,
}

impl ShapleyResult {
    pub fn value(&self, i: ServiceId) -> &Rat {
        &self.values[i.0]
    }

    pub fn total(&self) -> Rat {
        sum_grouped(self.values.iter().cloned())
    }
}

/// Exact Shapley value by enumeration of all 2^|N| coalitions:
/// Sh_i = Σ_{S ⊆ N∖{i}} |S|!·(|N|−|S|−1)!/|N|! · (v(S∪{i}) − v(S)).
pub fn shapley(game: &CoalitionGame<'_>) -> Result<ShapleyResult, GameError> {
    shapley_with_limit(game, EXHAUSTIVE_LIMIT)
}

/// As [`shapley`] with an explicit bound on |N|.
pub fn shapley_with_limit(
    game: &CoalitionGame<'_>,
    limit: usize,
) -> Result<ShapleyResult, GameError> {
    let n = game.platform().service_count();
    if n > limit || n >= 32 {
        return Err(GameError::TooManyServices { services: n, limit: limit.min(31) });
    }
    // Tabulate v over all coalitions once.
    let table: Vec<Rat> = (0u32..1 << n).map(|mask| game.value_of_mask(mask)).collect();
    // Permutation-count weights by coalition size.
    let mut factorial = alloc::vec![BigInt::one(); n + 1];
    for k in 1..=n {
        factorial[k] = &factorial[k - 1] * k;
    }
    let weight: Vec<Rat> = (0..n)
        .map(|size| {
            Rat::new(
                &factorial[size] * &factorial[n - size - 1],
                factorial[n].clone(),
            )
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let bit = 1u32 << i;
        let mut terms: Vec<Rat> = Vec::with_capacity(1 << (n - 1));
        for mask in 0u32..1 << n {
            if mask & bit != 0 {
                continue;
            }
            let size = mask.count_ones() as usize;
            let marginal = &table[(mask | bit) as usize] - &table[mask as usize];
            terms.push(&weight[size] * marginal);
        }
        values.push(sum_grouped(terms.into_iter()));
    }
    let result = ShapleyResult { game: game.kind(), values };
    debug_assert_eq!(result.total(), table[(1u32 << n) as usize - 1]);
    Ok(result)
}

/// Outcome of checking one game's Shapley value against its indicator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceEntry {
    pub game: GameKind,
    pub indicator: IndicatorKind,
    pub shapley: Vec<Rat>,
    pub indicator_values: Vec<Rat>,
    pub coincide: bool,
}

/// The five Shapley–indicator pairings on one platform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceReport {
    pub entries: Vec<CoincidenceEntry>,
}

impl CoincidenceReport {
    pub fn all_coincide(&self) -> bool {
        self.entries.iter().all(|e| e.coincide)
    }
}

/// Computes the exact Shapley value of all five games and compares each with
/// its indicator, exactly.
pub fn verify_coincidence(p: &Platform) -> Result<CoincidenceReport, GameError> {
    let entries = ALL_GAMES
        .iter()
        .map(|kind| {
            let game = CoalitionGame::new(p, *kind);
            let sh = shapley(&game)?;
            let ind = indicators::evaluate(kind.indicator(), p);
            let coincide = sh.values == ind.values();
            Ok(CoincidenceEntry {
                game: *kind,
                indicator: kind.indicator(),
                shapley: sh.values,
                indicator_values: ind.values().to_vec(),
                coincide,
            })
        })
        .collect::<Result<Vec<_>, GameError>>()?;
    Ok(CoincidenceReport { entries })
}
