//! Exact-arithmetic revenue-relevance toolkit for subscription platforms.
//!
//! A platform sells subscriptions at per-subscriber prices and offers a set of
//! services (streamers, shows, artists); a sparse consumption matrix records
//! how much of each service each subscriber consumed. This crate measures how
//! much of the total subscription revenue (the platform's *success*) each
//! service is responsible for:
//!
//! * [`indicators`] — the four relevance indicators (uniform,
//!   subscriber-uniform, proportional, subscriber-proportional). The last two
//!   realize the pro-rata and user-centric royalty schemes.
//! * [`axioms`] — fairness/stability/non-manipulability axioms as executable
//!   checkers over any indicator, plus the counterexample registry and the
//!   verdict grid.
//! * [`games`] — coalition games whose exact Shapley values coincide with the
//!   indicators.
//! * [`analysis`] — preference lemmas, marginal sensitivities, and the
//!   two-subscriber threshold scenario.
//!
//! All core values are arbitrary-precision rationals; nothing here rounds.
//! The crate is `no_std` (it allocates but performs no IO); CSV ingestion,
//! report rendering, and the CLI live in the companion `relmeter` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod axioms;
pub mod games;
pub mod indicators;
pub mod platform;
pub mod rational;

pub use indicators::{IndicatorKind, RelevanceVector};
pub use platform::{Platform, PlatformError, Price, Quantity, ServiceId, SubscriberId};
pub use rational::Rat;
