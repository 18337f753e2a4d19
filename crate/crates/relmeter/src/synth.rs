//! Seeded synthetic viewer logs shaped like a streaming-platform crawl:
//! a long-tailed popularity distribution over services, a small mean number
//! of services per viewer, and quarter-hour viewing amounts.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use relmeter_core::platform::Platform;
use relmeter_core::rational::{parse_rational, Rat};
use serde::Deserialize;
use thiserror::Error;

use crate::ingest::{load_events, IngestError, PriceTable};

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriceModel {
    /// Every viewer pays this amount (kept exact from the JSON text).
    Constant(serde_json::Number),
    /// Log-normal prices, quantized to cents with a one-cent floor.
    Lognormal { mu: f64, sigma: f64 },
}

impl Default for PriceModel {
    fn default() -> Self {
        PriceModel::Constant(serde_json::Number::from(1))
    }
}

fn default_popularity_exponent() -> f64 {
    1.0
}

fn default_mean_services() -> f64 {
    1.45
}

fn default_mean_events() -> f64 {
    1.0
}

/// Generator parameters; the JSON config mirrors these field names.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SynthConfig {
    pub services: usize,
    pub subscribers: usize,
    /// Popularity follows rank^(−exponent) over the service list.
    #[serde(default = "default_popularity_exponent")]
    pub popularity_exponent: f64,
    /// Mean count of distinct services per viewer (≥ 1; one is guaranteed).
    #[serde(default = "default_mean_services")]
    pub mean_services_per_viewer: f64,
    /// Mean count of log rows per viewer–service relationship (≥ 1).
    #[serde(default = "default_mean_events")]
    pub mean_events_per_view: f64,
    pub rng_seed: u64,
    #[serde(default)]
    pub price_model: PriceModel,
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("bad synth config: {0}")]
    Config(String),
    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("generated log failed to load: {0}")]
    Ingest(#[from] IngestError),
}

impl SynthConfig {
    pub fn from_json(text: &str) -> Result<Self, SynthError> {
        let cfg: SynthConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.services == 0 {
            return Err(SynthError::Config("services must be at least 1".into()));
        }
        if self.subscribers == 0 {
            return Err(SynthError::Config("subscribers must be at least 1".into()));
        }
        if self.popularity_exponent < 0.0 || !self.popularity_exponent.is_finite() {
            return Err(SynthError::Config("popularityExponent must be ≥ 0".into()));
        }
        if self.mean_services_per_viewer < 1.0 || !self.mean_services_per_viewer.is_finite() {
            return Err(SynthError::Config("meanServicesPerViewer must be ≥ 1".into()));
        }
        if self.mean_events_per_view < 1.0 || !self.mean_events_per_view.is_finite() {
            return Err(SynthError::Config("meanEventsPerView must be ≥ 1".into()));
        }
        if let PriceModel::Lognormal { sigma, .. } = self.price_model {
            if sigma < 0.0 || !sigma.is_finite() {
                return Err(SynthError::Config("lognormal sigma must be ≥ 0".into()));
            }
        }
        if let PriceModel::Constant(value) = &self.price_model {
            let parsed = parse_rational(&value.to_string())
                .map_err(|e| SynthError::Config(e.to_string()))?;
            if parsed <= Rat::from_integer(0.into()) {
                return Err(SynthError::Config("constant price must be positive".into()));
            }
        }
        Ok(())
    }
}

/// The generated platform together with its serialized source files.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub platform: Platform,
    pub events_csv: String,
    pub prices_csv: String,
    /// Distinct viewer–service relationships in the log.
    pub relationships: usize,
    /// Log rows (a relationship can span several viewing sessions).
    pub events: usize,
}

/// Generates a reproducible event log and loads it back through the regular
/// ingestion path, so the returned platform is exactly what any consumer of
/// the files would see.
pub fn synthesize(cfg: &SynthConfig) -> Result<SynthOutput, SynthError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);

    // rank^(−α) popularity, as cumulative weights for binary search.
    let mut cumulative: Vec<f64> = Vec::with_capacity(cfg.services);
    let mut acc = 0.0f64;
    for rank in 1..=cfg.services {
        acc += (rank as f64).powf(-cfg.popularity_exponent);
        cumulative.push(acc);
    }
    let total_weight = acc;

    let extra_services = Poisson::new(cfg.mean_services_per_viewer - 1.0).ok();
    let extra_events = Poisson::new(cfg.mean_events_per_view - 1.0).ok();
    let price_noise = match cfg.price_model {
        PriceModel::Lognormal { mu, sigma } => Some(Normal::new(mu, sigma).expect("valid normal")),
        PriceModel::Constant(_) => None,
    };
    let constant_price = match &cfg.price_model {
        PriceModel::Constant(value) => Some(value.to_string()),
        PriceModel::Lognormal { .. } => None,
    };

    let digits = |n: usize| n.to_string().len();
    let service_width = digits(cfg.services.saturating_sub(1)).max(2);
    let viewer_width = digits(cfg.subscribers.saturating_sub(1)).max(4);

    let mut events_csv = String::from("viewer_id,service_id,amount\n");
    let mut prices_csv = String::from("viewer_id,price\n");
    let mut relationships = 0usize;
    let mut events = 0usize;
    let mut chosen: Vec<usize> = Vec::with_capacity(8);

    for v in 0..cfg.subscribers {
        let viewer = format!("v{v:0viewer_width$}");
        // 1 + Poisson(mean − 1) distinct services, capped by the catalog.
        let wanted = 1 + extra_services
            .map(|d| d.sample(&mut rng) as usize)
            .unwrap_or(0);
        let wanted = wanted.min(cfg.services);
        chosen.clear();
        let mut rejections = 0;
        while chosen.len() < wanted {
            let u = rng.gen_range(0.0..total_weight);
            let pick = cumulative.partition_point(|c| *c <= u).min(cfg.services - 1);
            if chosen.contains(&pick) {
                rejections += 1;
                if rejections > 64 {
                    // Heavily skewed weights: fill from the unchosen ranks.
                    for rank in 0..cfg.services {
                        if chosen.len() == wanted {
                            break;
                        }
                        if !chosen.contains(&rank) {
                            chosen.push(rank);
                        }
                    }
                    break;
                }
            } else {
                chosen.push(pick);
            }
        }
        chosen.sort_unstable();
        for service in &chosen {
            relationships += 1;
            let sessions = 1 + extra_events
                .map(|d| d.sample(&mut rng) as usize)
                .unwrap_or(0);
            for _ in 0..sessions {
                // Quarter-hour amounts in [0.25, 8.00].
                let quarters = rng.gen_range(1..=32u32);
                let _ = writeln!(
                    events_csv,
                    "v{v:0viewer_width$},s{service:0service_width$},{}.{:02}",
                    quarters / 4,
                    (quarters % 4) * 25
                );
                events += 1;
            }
        }
        let price = match (&constant_price, &price_noise) {
            (Some(text), _) => text.clone(),
            (None, Some(noise)) => {
                let raw = noise.sample(&mut rng).exp();
                let cents = (raw * 100.0).round().max(1.0) as u64;
                format!("{}.{:02}", cents / 100, cents % 100)
            }
            (None, None) => unreachable!("one price source is always configured"),
        };
        let _ = writeln!(prices_csv, "{viewer},{price}");
    }

    let price_table = PriceTable::from_csv(prices_csv.as_bytes(), None)?;
    let report = load_events(events_csv.as_bytes(), &price_table)?;
    Ok(SynthOutput {
        platform: report.platform,
        events_csv,
        prices_csv,
        relationships,
        events,
    })
}
