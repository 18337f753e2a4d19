//! Viewer-event logs in, platforms out.
//!
//! The event CSV has the header `viewer_id,service_id,amount`; `#` starts a
//! comment line. Amounts are nonnegative decimals and are converted to exact
//! rationals; duplicate (viewer, service) pairs are summed. Dense indices are
//! assigned in first-appearance order and kept as labels on the platform.
//! Viewers whose total consumption is zero (heartbeat-only rows) are dropped
//! and counted rather than rejected.

use std::collections::HashMap;
use std::io::Read;

use num_traits::Zero;
use relmeter_core::indicators::{self, IndicatorKind};
use relmeter_core::platform::{Platform, ServiceId, SubscriberId};
use relmeter_core::rational::{parse_rational, Rat};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("viewer {0:?} has no price and no default was given")]
    UnpricedViewer(String),
    #[error("the event log contains no positive-amount events")]
    EmptyLog,
    #[error("platform construction failed: {0}")]
    Platform(#[from] relmeter_core::platform::PlatformError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Per-viewer subscription prices with an optional fallback.
#[derive(Debug, Clone, Default)]
pub struct PriceTable {
    entries: HashMap<String, Rat>,
    default_price: Option<Rat>,
}

impl PriceTable {
    /// Every viewer pays the same price.
    pub fn constant(price: Rat) -> Self {
        PriceTable { entries: HashMap::new(), default_price: Some(price) }
    }

    /// Reads a `viewer_id,price` CSV; `default` covers missing viewers.
    pub fn from_csv<R: Read>(reader: R, default: Option<Rat>) -> Result<Self, IngestError> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut entries = HashMap::new();
        for record in csv_reader.records() {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            if record.len() != 2 {
                return Err(IngestError::MalformedRow {
                    line,
                    reason: format!("expected 2 fields, got {}", record.len()),
                });
            }
            let viewer = record[0].to_string();
            let price = parse_rational(&record[1]).map_err(|e| IngestError::MalformedRow {
                line,
                reason: e.to_string(),
            })?;
            if price <= Rat::zero() {
                return Err(IngestError::MalformedRow {
                    line,
                    reason: format!("price for {viewer:?} must be positive"),
                });
            }
            entries.insert(viewer, price);
        }
        Ok(PriceTable { entries, default_price: default })
    }

    pub fn with_default(mut self, default: Rat) -> Self {
        self.default_price = Some(default);
        self
    }

    pub fn price_of(&self, viewer: &str) -> Option<&Rat> {
        self.entries.get(viewer).or(self.default_price.as_ref())
    }
}

/// The loaded platform plus ingestion bookkeeping.
#[derive(Debug, Clone)]
pub struct IngestReport {
    pub platform: Platform,
    /// Rows read from the log (excluding comments and the header).
    pub events_read: u64,
    /// Events whose amount was exactly zero, dropped at aggregation.
    pub zero_amount_events: u64,
    /// Viewers whose total consumption was zero, dropped with a warning.
    pub dropped_viewers: usize,
}

/// Parses a `viewer_id,service_id,amount` log into a validated platform.
pub fn load_events<R: Read>(events: R, prices: &PriceTable) -> Result<IngestReport, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(events);

    let mut viewer_index: HashMap<String, usize> = HashMap::new();
    let mut viewer_labels: Vec<String> = Vec::new();
    let mut service_index: HashMap<String, usize> = HashMap::new();
    let mut service_labels: Vec<String> = Vec::new();
    let mut totals: HashMap<(usize, usize), Rat> = HashMap::new();
    let mut viewer_totals: Vec<Rat> = Vec::new();
    let mut events_read = 0u64;
    let mut zero_amount_events = 0u64;

    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("expected 3 fields, got {}", record.len()),
            });
        }
        events_read += 1;
        let viewer = &record[0];
        let service = &record[1];
        if viewer.is_empty() || service.is_empty() {
            return Err(IngestError::MalformedRow {
                line,
                reason: "empty viewer or service id".to_string(),
            });
        }
        let amount = parse_rational(&record[2]).map_err(|e| IngestError::MalformedRow {
            line,
            reason: e.to_string(),
        })?;
        if amount < Rat::zero() {
            return Err(IngestError::MalformedRow {
                line,
                reason: format!("amount {} is negative", &record[2]),
            });
        }
        let v = match viewer_index.get(viewer) {
            Some(v) => *v,
            None => {
                let v = viewer_labels.len();
                viewer_index.insert(viewer.to_string(), v);
                viewer_labels.push(viewer.to_string());
                viewer_totals.push(Rat::zero());
                v
            }
        };
        let i = match service_index.get(service) {
            Some(i) => *i,
            None => {
                let i = service_labels.len();
                service_index.insert(service.to_string(), i);
                service_labels.push(service.to_string());
                i
            }
        };
        if amount.is_zero() {
            zero_amount_events += 1;
            continue;
        }
        viewer_totals[v] += &amount;
        *totals.entry((i, v)).or_insert_with(Rat::zero) += amount;
    }

    // Drop viewers whose logged amounts never added up to anything.
    let kept: Vec<usize> = (0..viewer_labels.len())
        .filter(|v| !viewer_totals[*v].is_zero())
        .collect();
    let dropped_viewers = viewer_labels.len() - kept.len();
    if kept.is_empty() {
        return Err(IngestError::EmptyLog);
    }
    let mut compact = vec![usize::MAX; viewer_labels.len()];
    for (new_v, old_v) in kept.iter().enumerate() {
        compact[*old_v] = new_v;
    }

    let mut price_vec: Vec<Rat> = Vec::with_capacity(kept.len());
    for old_v in &kept {
        let label = &viewer_labels[*old_v];
        let price = prices
            .price_of(label)
            .ok_or_else(|| IngestError::UnpricedViewer(label.clone()))?;
        price_vec.push(price.clone());
    }

    let entries: Vec<(usize, usize, Rat)> = totals
        .into_iter()
        .filter(|((_, v), _)| compact[*v] != usize::MAX)
        .map(|((i, v), q)| (i, compact[v], q))
        .collect();

    let platform = Platform::build_raw(price_vec, entries, service_labels.len())?
        .with_service_labels(service_labels)?
        .with_subscriber_labels(kept.iter().map(|v| viewer_labels[*v].clone()).collect())?;

    Ok(IngestReport { platform, events_read, zero_amount_events, dropped_viewers })
}

/// Viewer counts per service, §-style: `viewers` counts subscribers with any
/// positive consumption of the service, `exclusive_viewers` those who watch
/// nothing else. Shares are taken against the column totals of this table
/// (the sums over services), not against |S|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceStats {
    pub viewers: usize,
    pub exclusive_viewers: usize,
    pub viewer_share: Rat,
    pub exclusive_share: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewerStats {
    pub per_service: Vec<ServiceStats>,
    /// Σ over services of their viewer counts (one viewer counts once per
    /// service watched).
    pub total_viewer_relationships: usize,
    pub total_exclusive_viewers: usize,
}

pub fn viewer_stats(p: &Platform) -> ViewerStats {
    let n = p.service_count();
    let mut viewers = vec![0usize; n];
    let mut exclusive = vec![0usize; n];
    for s in p.subscribers() {
        let column = p.matrix().column(s);
        for (i, _) in column {
            viewers[i.0] += 1;
        }
        if let [(only, _)] = column {
            exclusive[only.0] += 1;
        }
    }
    let total_viewers: usize = viewers.iter().sum();
    let total_exclusive: usize = exclusive.iter().sum();
    let share = |count: usize, total: usize| -> Rat {
        if total == 0 {
            Rat::zero()
        } else {
            Rat::new((count as i64).into(), (total as i64).into())
        }
    };
    let per_service = (0..n)
        .map(|i| ServiceStats {
            viewers: viewers[i],
            exclusive_viewers: exclusive[i],
            viewer_share: share(viewers[i], total_viewers),
            exclusive_share: share(exclusive[i], total_exclusive),
        })
        .collect();
    ViewerStats {
        per_service,
        total_viewer_relationships: total_viewers,
        total_exclusive_viewers: total_exclusive,
    }
}

#[derive(Debug, Error)]
pub enum AllocationError {
    #[error("the revenue pool must be positive")]
    NonPositivePool,
}

/// Splits `pool` across services in proportion to relevance:
/// payout_i = pool · R_i / σ. Exact; payouts sum to the pool.
pub fn allocate_revenue(
    p: &Platform,
    kind: IndicatorKind,
    pool: &Rat,
) -> Result<Vec<Rat>, AllocationError> {
    if *pool <= Rat::zero() {
        return Err(AllocationError::NonPositivePool);
    }
    let relevance = indicators::evaluate(kind, p);
    Ok(relevance
        .values()
        .iter()
        .map(|r| r / p.success() * pool)
        .collect())
}

/// Looks a service up by label, falling back to 1-based index notation.
pub fn resolve_service(p: &Platform, token: &str) -> Option<ServiceId> {
    if let Some(labels) = p.service_labels() {
        if let Some(i) = labels.iter().position(|l| l == token) {
            return Some(ServiceId(i));
        }
    }
    let index: usize = token.parse().ok()?;
    (1..=p.service_count()).contains(&index).then(|| ServiceId(index - 1))
}

/// Looks a subscriber up by label, falling back to 1-based index notation.
pub fn resolve_subscriber(p: &Platform, token: &str) -> Option<SubscriberId> {
    if let Some(labels) = p.subscriber_labels() {
        if let Some(s) = labels.iter().position(|l| l == token) {
            return Some(SubscriberId(s));
        }
    }
    let index: usize = token.parse().ok()?;
    (1..=p.subscriber_count()).contains(&index).then(|| SubscriberId(index - 1))
}
