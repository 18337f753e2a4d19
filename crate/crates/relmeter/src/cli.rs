//! The `relmeter` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (bad CSV, unpriced
//! viewer, bad config), 3 verification failure (axiom grid or Shapley
//! coincidence mismatch). Only the verification verbs can exit 3.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use relmeter_core::analysis::{preference_report, Preference};
use relmeter_core::axioms::transform::{
    equal_parts, merge_services, merge_subscribers, split_service, Transformation,
};
use relmeter_core::axioms::{cell_verdict, expected_to_hold, AxiomVerdict, CheckConfig, TABLE_ROWS};
use relmeter_core::games::{verify_coincidence, EXHAUSTIVE_LIMIT};
use relmeter_core::indicators::{self, IndicatorKind, ALL_INDICATORS};
use relmeter_core::platform::{Platform, ServiceId, SubscriberId};
use relmeter_core::rational::{decimal_string, parse_rational, to_f64, Rat};
use serde_json::json;

use crate::ingest::{
    allocate_revenue, load_events, resolve_service, resolve_subscriber, viewer_stats, IngestReport,
    PriceTable,
};
use crate::report::{render_payouts, render_relevance, render_stats, service_name, OutputFormat};
use crate::synth::{synthesize, SynthConfig};

#[derive(Parser)]
#[command(
    name = "relmeter",
    version,
    about = "Revenue-relevance analytics for subscription platforms",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Event log CSV: viewer_id,service_id,amount.
    #[arg(long, value_name = "FILE")]
    events: PathBuf,
    /// Price table CSV: viewer_id,price.
    #[arg(long, value_name = "FILE")]
    prices: Option<PathBuf>,
    /// Price for viewers missing from the table (default 1 when no table is
    /// given at all).
    #[arg(long, value_name = "PRICE")]
    default_price: Option<String>,
}

#[derive(Args, Clone)]
struct FormatArgs {
    /// Emit JSON instead of a table.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV instead of a table.
    #[arg(long)]
    csv: bool,
}

impl FormatArgs {
    fn format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            OutputFormat::Table
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate an event log and print a platform summary.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Compute a relevance table.
    Compute {
        #[command(flatten)]
        input: InputArgs,
        /// Indicator: u, su, p, sp, or all.
        #[arg(long, value_name = "KIND")]
        indicator: String,
        #[command(flatten)]
        format: FormatArgs,
        /// With --json, add exact numerator/denominator strings.
        #[arg(long, requires = "json")]
        exact: bool,
        /// Prepend viewer and exclusive-viewer columns.
        #[arg(long)]
        with_stats: bool,
    },
    /// Split a revenue pool across services in proportion to relevance.
    Allocate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "KIND")]
        indicator: String,
        /// Revenue pool to distribute (positive decimal).
        #[arg(long, value_name = "AMOUNT")]
        pool: String,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Viewer and exclusive-viewer counts per service.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Axiom verification.
    Axioms {
        #[command(subcommand)]
        command: AxiomsCommand,
    },
    /// Shapley-value verification.
    Shapley {
        #[command(subcommand)]
        command: ShapleyCommand,
    },
    /// Apply a platform transformation and compare relevance before/after.
    Whatif {
        #[command(subcommand)]
        command: WhatifCommand,
    },
    /// Pairwise indicator comparison for one service, with certificates.
    Lemmas {
        #[command(flatten)]
        input: InputArgs,
        /// Service label (or 1-based index).
        #[arg(long, value_name = "SERVICE")]
        service: String,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Generate a synthetic event log.
    Synth {
        /// JSON generator config.
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Where to write the event CSV.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Where to write the matching price CSV.
        #[arg(long, value_name = "FILE")]
        prices_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AxiomsCommand {
    /// Compute the 9×4 axiom/indicator verdict grid and compare it with the
    /// expected pattern. Exits 3 on any mismatch.
    Table1 {
        /// Randomized trials per cell.
        #[arg(long, default_value_t = 200)]
        trials: u32,
        /// Master seed for the per-cell generators.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        format: FormatArgs,
    },
}

#[derive(Subcommand)]
enum ShapleyCommand {
    /// Check that each coalition game's exact Shapley value equals its
    /// indicator on the loaded platform. Exits 3 on a mismatch.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Refuse platforms with more services than this.
        #[arg(long, default_value_t = EXHAUSTIVE_LIMIT)]
        limit: usize,
    },
}

#[derive(Args, Clone)]
struct WhatifShared {
    #[command(flatten)]
    input: InputArgs,
    /// Indicator to compare (u, su, p, sp, or all).
    #[arg(long, default_value = "all")]
    indicator: String,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum WhatifCommand {
    /// Merge a group of services into one.
    MergeServices {
        #[command(flatten)]
        shared: WhatifShared,
        /// Comma-separated service labels (or 1-based indices).
        #[arg(long, value_delimiter = ',', value_name = "SERVICES")]
        group: Vec<String>,
        #[arg(long, value_name = "SERVICE")]
        survivor: String,
    },
    /// Split a service into equal parts.
    SplitService {
        #[command(flatten)]
        shared: WhatifShared,
        #[arg(long, value_name = "SERVICE")]
        service: String,
        /// Number of equal parts.
        #[arg(long, default_value_t = 2)]
        into: usize,
    },
    /// Pool a group of subscriptions into one account.
    ShareSubscription {
        #[command(flatten)]
        shared: WhatifShared,
        /// Comma-separated viewer labels (or 1-based indices).
        #[arg(long, value_delimiter = ',', value_name = "VIEWERS")]
        group: Vec<String>,
        #[arg(long, value_name = "VIEWER")]
        survivor: String,
    },
    /// Rescale the whole consumption matrix.
    Scale {
        #[command(flatten)]
        shared: WhatifShared,
        /// Positive factor, decimal or a/b.
        #[arg(long, value_name = "FACTOR")]
        factor: String,
    },
}

enum CmdError {
    Usage(String),
    Data(String),
    Verification(String),
}

impl CmdError {
    fn code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => 1,
            CmdError::Data(_) => 2,
            CmdError::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Usage(m) | CmdError::Data(m) | CmdError::Verification(m) => m,
        }
    }
}

type CmdResult = Result<(), CmdError>;

fn data<E: std::fmt::Display>(e: E) -> CmdError {
    CmdError::Data(e.to_string())
}

/// Runs the CLI against the given argument vector, writing to the given
/// streams; returns the process exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    configure_threads();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return 1;
            }
            let _ = write!(out, "{rendered}");
            return 0;
        }
    };
    let result = match cli.command {
        Command::Ingest { input } => cmd_ingest(&input, out),
        Command::Compute { input, indicator, format, exact, with_stats } => {
            cmd_compute(&input, &indicator, format.format(), exact, with_stats, out)
        }
        Command::Allocate { input, indicator, pool, format } => {
            cmd_allocate(&input, &indicator, &pool, format.format(), out)
        }
        Command::Stats { input, format } => cmd_stats(&input, format.format(), out),
        Command::Axioms { command } => match command {
            AxiomsCommand::Table1 { trials, seed, format } => {
                cmd_table1(trials, seed, format.format(), out)
            }
        },
        Command::Shapley { command } => match command {
            ShapleyCommand::Verify { input, limit } => cmd_shapley_verify(&input, limit, out),
        },
        Command::Whatif { command } => cmd_whatif(command, out),
        Command::Lemmas { input, service, format } => {
            cmd_lemmas(&input, &service, format.format(), out)
        }
        Command::Synth { config, out: out_path, prices_out } => {
            cmd_synth(&config, &out_path, prices_out.as_deref(), out)
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn configure_threads() {
    if let Ok(text) = std::env::var("RELMETER_THREADS") {
        if let Ok(threads) = text.trim().parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
            }
        }
    }
}

fn parse_positive(text: &str, what: &str) -> Result<Rat, CmdError> {
    let value = parse_rational(text)
        .map_err(|_| CmdError::Usage(format!("{what} must be a number, got {text:?}")))?;
    if value <= Rat::from_integer(0.into()) {
        return Err(CmdError::Usage(format!("{what} must be positive")));
    }
    Ok(value)
}

fn parse_indicator(code: &str) -> Result<Vec<IndicatorKind>, CmdError> {
    if code == "all" {
        return Ok(ALL_INDICATORS.to_vec());
    }
    IndicatorKind::parse(code)
        .map(|k| vec![k])
        .ok_or_else(|| CmdError::Usage(format!("unknown indicator {code:?}; use u, su, p, sp, or all")))
}

fn load_platform(input: &InputArgs) -> Result<IngestReport, CmdError> {
    let default_price = match &input.default_price {
        Some(text) => Some(parse_positive(text, "--default-price")?),
        None => None,
    };
    let table = match &input.prices {
        Some(path) => {
            let file = fs::File::open(path)
                .map_err(|e| CmdError::Data(format!("{}: {e}", path.display())))?;
            PriceTable::from_csv(file, default_price).map_err(data)?
        }
        None => PriceTable::constant(default_price.unwrap_or_else(|| Rat::from_integer(1.into()))),
    };
    let file = fs::File::open(&input.events)
        .map_err(|e| CmdError::Data(format!("{}: {e}", input.events.display())))?;
    load_events(file, &table).map_err(data)
}

fn cmd_ingest(input: &InputArgs, out: &mut dyn Write) -> CmdResult {
    let report = load_platform(input)?;
    let p = &report.platform;
    let _ = writeln!(out, "services: {}", p.service_count());
    let _ = writeln!(out, "subscribers: {}", p.subscriber_count());
    let _ = writeln!(out, "events read: {}", report.events_read);
    let _ = writeln!(out, "zero-amount events dropped: {}", report.zero_amount_events);
    let _ = writeln!(out, "zero-total viewers dropped: {}", report.dropped_viewers);
    let _ = writeln!(
        out,
        "sigma: {} ({})",
        decimal_string(p.success(), 2),
        p.success()
    );
    Ok(())
}

fn cmd_compute(
    input: &InputArgs,
    indicator: &str,
    format: OutputFormat,
    exact: bool,
    with_stats: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let kinds = parse_indicator(indicator)?;
    let report = load_platform(input)?;
    let stats = with_stats.then(|| viewer_stats(&report.platform));
    let rendered = render_relevance(&report.platform, &kinds, stats.as_ref(), format, exact);
    let _ = write!(out, "{rendered}");
    Ok(())
}

fn cmd_allocate(
    input: &InputArgs,
    indicator: &str,
    pool: &str,
    format: OutputFormat,
    out: &mut dyn Write,
) -> CmdResult {
    let kinds = parse_indicator(indicator)?;
    if kinds.len() != 1 {
        return Err(CmdError::Usage("allocate needs a single indicator".into()));
    }
    let pool = parse_positive(pool, "--pool")?;
    let report = load_platform(input)?;
    let payouts = allocate_revenue(&report.platform, kinds[0], &pool).map_err(data)?;
    let rendered = render_payouts(&report.platform, kinds[0], &pool, &payouts, format);
    let _ = write!(out, "{rendered}");
    Ok(())
}

fn cmd_stats(input: &InputArgs, format: OutputFormat, out: &mut dyn Write) -> CmdResult {
    let report = load_platform(input)?;
    let stats = viewer_stats(&report.platform);
    let rendered = render_stats(&report.platform, &stats, format);
    let _ = write!(out, "{rendered}");
    Ok(())
}

fn verdict_letter(v: &AxiomVerdict) -> &'static str {
    if v.holds {
        "Y"
    } else {
        "N"
    }
}

fn cmd_table1(trials: u32, seed: u64, format: OutputFormat, out: &mut dyn Write) -> CmdResult {
    let cfg = CheckConfig { trials, rng_seed: seed, ..CheckConfig::default() };
    cfg.validate().map_err(|e| CmdError::Usage(e.to_string()))?;
    let cells: Vec<(usize, AxiomVerdict)> = TABLE_ROWS
        .iter()
        .enumerate()
        .flat_map(|(row, axiom)| {
            ALL_INDICATORS
                .iter()
                .enumerate()
                .map(move |(col, kind)| (row * 4 + col, *axiom, *kind))
        })
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(slot, axiom, kind)| (slot, cell_verdict(axiom, kind, &cfg)))
        .collect();
    let mut ordered: Vec<Option<AxiomVerdict>> = vec![None; 36];
    for (slot, verdict) in cells {
        ordered[slot] = Some(verdict);
    }
    let grid: Vec<AxiomVerdict> = ordered.into_iter().map(|v| v.expect("all cells")).collect();

    let mut mismatches: Vec<String> = Vec::new();
    for (idx, verdict) in grid.iter().enumerate() {
        let axiom = TABLE_ROWS[idx / 4];
        let kind = ALL_INDICATORS[idx % 4];
        if verdict.holds != expected_to_hold(axiom, kind) {
            mismatches.push(format!(
                "{axiom} / {kind}: got {}, expected {}",
                verdict_letter(verdict),
                if expected_to_hold(axiom, kind) { "Y" } else { "N" }
            ));
        }
    }

    match format {
        OutputFormat::Json => {
            let cells: Vec<serde_json::Value> = grid
                .iter()
                .map(|v| {
                    let mut cell = json!({
                        "axiom": v.axiom.name(),
                        "indicator": v.indicator_label,
                        "holds": v.holds,
                        "note": v.note,
                    });
                    if let Some(witness) = &v.witness {
                        cell["witness"] = json!({
                            "transformation": witness.transformation.describe(),
                            "detail": witness.detail,
                        });
                    }
                    cell
                })
                .collect();
            let doc = json!({
                "trials": trials,
                "seed": seed,
                "cells": cells,
                "matchesExpected": mismatches.is_empty(),
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        OutputFormat::Csv => {
            let _ = writeln!(out, "axiom,u,su,p,sp");
            for (row, axiom) in TABLE_ROWS.iter().enumerate() {
                let letters: Vec<&str> =
                    (0..4).map(|col| verdict_letter(&grid[row * 4 + col])).collect();
                let _ = writeln!(out, "{},{}", axiom.name(), letters.join(","));
            }
        }
        OutputFormat::Table => {
            let _ = writeln!(out, "{:<24} {:>3} {:>3} {:>3} {:>3}", "axiom", "u", "su", "p", "sp");
            for (row, axiom) in TABLE_ROWS.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{:<24} {:>3} {:>3} {:>3} {:>3}",
                    axiom.name(),
                    verdict_letter(&grid[row * 4]),
                    verdict_letter(&grid[row * 4 + 1]),
                    verdict_letter(&grid[row * 4 + 2]),
                    verdict_letter(&grid[row * 4 + 3]),
                );
            }
            for verdict in grid.iter().filter(|v| !v.holds) {
                if let Some(witness) = &verdict.witness {
                    let _ = writeln!(
                        out,
                        "{} / {}: {} [{}]",
                        verdict.axiom,
                        verdict.indicator_label,
                        witness.detail,
                        witness.transformation.describe(),
                    );
                }
            }
        }
    }
    if mismatches.is_empty() {
        let _ = writeln!(out, "grid matches the expected pattern ({trials} trials, seed {seed})");
        Ok(())
    } else {
        Err(CmdError::Verification(format!(
            "verdict grid differs from the expected pattern: {}",
            mismatches.join("; ")
        )))
    }
}

fn cmd_shapley_verify(input: &InputArgs, limit: usize, out: &mut dyn Write) -> CmdResult {
    let report = load_platform(input)?;
    let p = &report.platform;
    if p.service_count() > limit {
        return Err(CmdError::Data(format!(
            "{} services exceed the exhaustive bound of {limit}",
            p.service_count()
        )));
    }
    let coincidence = verify_coincidence(p).map_err(data)?;
    for entry in &coincidence.entries {
        let state = if entry.coincide { "ok" } else { "MISMATCH" };
        let _ = writeln!(
            out,
            "{:<18} vs {:<24} {}",
            entry.game.name(),
            entry.indicator.name(),
            state
        );
        if !entry.coincide {
            let _ = writeln!(out, "  shapley:   {:?}", entry.shapley);
            let _ = writeln!(out, "  indicator: {:?}", entry.indicator_values);
        }
    }
    if coincidence.all_coincide() {
        let _ = writeln!(out, "all five games coincide with their indicators");
        Ok(())
    } else {
        Err(CmdError::Verification(
            "a Shapley value differs from its indicator".into(),
        ))
    }
}

fn indicator_rows(p: &Platform, kind: IndicatorKind) -> Vec<(String, Rat)> {
    let values = indicators::evaluate(kind, p);
    p.services()
        .map(|i| (service_name(p, i), values.value(i).clone()))
        .collect()
}

fn cmd_whatif(command: WhatifCommand, out: &mut dyn Write) -> CmdResult {
    let (shared, transformation, before) = match command {
        WhatifCommand::MergeServices { shared, group, survivor } => {
            let report = load_platform(&shared.input)?;
            let p = report.platform;
            let group = group
                .iter()
                .map(|token| {
                    resolve_service(&p, token)
                        .ok_or_else(|| CmdError::Data(format!("unknown service {token:?}")))
                })
                .collect::<Result<Vec<ServiceId>, _>>()?;
            let survivor = resolve_service(&p, &survivor)
                .ok_or_else(|| CmdError::Data(format!("unknown service {survivor:?}")))?;
            (shared, Transformation::MergeServices { group, survivor }, p)
        }
        WhatifCommand::SplitService { shared, service, into } => {
            let report = load_platform(&shared.input)?;
            let p = report.platform;
            if into < 2 {
                return Err(CmdError::Usage("--into must be at least 2".into()));
            }
            let target = resolve_service(&p, &service)
                .ok_or_else(|| CmdError::Data(format!("unknown service {service:?}")))?;
            let parts = equal_parts(&p, target, into);
            (shared, Transformation::SplitService { target, parts }, p)
        }
        WhatifCommand::ShareSubscription { shared, group, survivor } => {
            let report = load_platform(&shared.input)?;
            let p = report.platform;
            let group = group
                .iter()
                .map(|token| {
                    resolve_subscriber(&p, token)
                        .ok_or_else(|| CmdError::Data(format!("unknown viewer {token:?}")))
                })
                .collect::<Result<Vec<SubscriberId>, _>>()?;
            let survivor = resolve_subscriber(&p, &survivor)
                .ok_or_else(|| CmdError::Data(format!("unknown viewer {survivor:?}")))?;
            (shared, Transformation::MergeSubscribers { group, survivor }, p)
        }
        WhatifCommand::Scale { shared, factor } => {
            let report = load_platform(&shared.input)?;
            let factor = parse_positive(&factor, "--factor")?;
            (shared, Transformation::Scale { factor }, report.platform)
        }
    };
    let kinds = parse_indicator(&shared.indicator)?;
    let after = match &transformation {
        Transformation::Scale { factor } => before.scaled(factor).map_err(data)?,
        Transformation::MergeServices { group, survivor } => {
            merge_services(&before, group, *survivor).map_err(data)?
        }
        Transformation::SplitService { target, parts } => {
            split_service(&before, *target, parts).map_err(data)?
        }
        Transformation::MergeSubscribers { group, survivor } => {
            merge_subscribers(&before, group, *survivor).map_err(data)?
        }
        Transformation::Identity
        | Transformation::Compose { .. }
        | Transformation::SensitivityPair { .. } => unreachable!("not reachable from the CLI"),
    };

    let descriptor = transformation_json(&transformation);
    if shared.json {
        let per_kind: Vec<serde_json::Value> = kinds
            .iter()
            .map(|kind| {
                json!({
                    "indicator": kind.code(),
                    "before": rows_json(&before, *kind),
                    "after": rows_json(&after, *kind),
                })
            })
            .collect();
        let doc = json!({
            "transformation": descriptor,
            "indicators": per_kind,
        });
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        return Ok(());
    }

    let _ = writeln!(out, "descriptor: {descriptor}");
    for kind in kinds {
        let _ = writeln!(out, "indicator: {}", kind.name());
        let before_rows = indicator_rows(&before, kind);
        let after_rows = indicator_rows(&after, kind);
        match &transformation {
            Transformation::Scale { .. } | Transformation::MergeSubscribers { .. } => {
                let _ = writeln!(out, "  {:<16} {:>14} {:>14} {:>14}", "service", "before", "after", "delta");
                for (b, a) in before_rows.iter().zip(&after_rows) {
                    let delta = &a.1 - &b.1;
                    let _ = writeln!(out, "  {:<16} {:>14} {:>14} {:>14}", b.0, b.1, a.1, delta);
                }
            }
            Transformation::MergeServices { group, survivor } => {
                let group_total =
                    group.iter().fold(Rat::from_integer(0.into()), |acc, i| acc + &before_rows[i.0].1);
                let removed_below = group.iter().filter(|i| i.0 < survivor.0).count();
                let survivor_after = &after_rows[survivor.0 - removed_below];
                let _ = writeln!(out, "  before:");
                for (label, value) in &before_rows {
                    let _ = writeln!(out, "    {label:<16} {value}");
                }
                let _ = writeln!(out, "  after:");
                for (label, value) in &after_rows {
                    let _ = writeln!(out, "    {label:<16} {value}");
                }
                let _ = writeln!(
                    out,
                    "  merged service holds {} vs the group's previous {} (delta {})",
                    survivor_after.1,
                    group_total,
                    &survivor_after.1 - &group_total
                );
            }
            Transformation::SplitService { target, parts } => {
                let target_before = &before_rows[target.0].1;
                let parts_total = (0..parts.len()).fold(Rat::from_integer(0.into()), |acc, k| {
                    acc + &after_rows[target.0 + k].1
                });
                let _ = writeln!(out, "  before:");
                for (label, value) in &before_rows {
                    let _ = writeln!(out, "    {label:<16} {value}");
                }
                let _ = writeln!(out, "  after:");
                for (label, value) in &after_rows {
                    let _ = writeln!(out, "    {label:<16} {value}");
                }
                let _ = writeln!(
                    out,
                    "  parts hold {} vs the target's previous {} (delta {})",
                    parts_total,
                    target_before,
                    &parts_total - target_before
                );
            }
            _ => unreachable!(),
        }
    }
    Ok(())
}

fn rows_json(p: &Platform, kind: IndicatorKind) -> serde_json::Value {
    let values = indicators::evaluate(kind, p);
    let rows: Vec<serde_json::Value> = p
        .services()
        .map(|i| {
            json!({
                "service": service_name(p, i),
                "value": to_f64(values.value(i)),
                "exact": values.value(i).to_string(),
            })
        })
        .collect();
    serde_json::Value::Array(rows)
}

fn transformation_json(t: &Transformation) -> serde_json::Value {
    match t {
        Transformation::Scale { factor } => json!({
            "transform": "scale",
            "factor": factor.to_string(),
        }),
        Transformation::MergeServices { group, survivor } => json!({
            "transform": "merge-services",
            "group": group.iter().map(|i| i.0 + 1).collect::<Vec<_>>(),
            "survivor": survivor.0 + 1,
        }),
        Transformation::SplitService { target, parts } => json!({
            "transform": "split-service",
            "target": target.0 + 1,
            "parts": parts.len(),
        }),
        Transformation::MergeSubscribers { group, survivor } => json!({
            "transform": "share-subscription",
            "group": group.iter().map(|s| s.0 + 1).collect::<Vec<_>>(),
            "survivor": survivor.0 + 1,
        }),
        Transformation::Identity => json!({ "transform": "identity" }),
        Transformation::Compose { .. } => json!({ "transform": "compose" }),
        Transformation::SensitivityPair { n, .. } => json!({
            "transform": "sensitivity-pair",
            "n": n,
        }),
    }
}

fn cmd_lemmas(
    input: &InputArgs,
    service: &str,
    format: OutputFormat,
    out: &mut dyn Write,
) -> CmdResult {
    let report = load_platform(input)?;
    let p = &report.platform;
    let target = resolve_service(p, service)
        .ok_or_else(|| CmdError::Data(format!("unknown service {service:?}")))?;
    let pref = preference_report(p, target);
    match format {
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = pref
                .comparisons
                .iter()
                .map(|c| {
                    json!({
                        "first": c.first.code(),
                        "second": c.second.code(),
                        "preferred": match c.preferred {
                            Preference::First => c.first.code(),
                            Preference::Second => c.second.code(),
                            Preference::Tie => "tie",
                        },
                        "gap": c.gap.to_string(),
                        "gapValue": to_f64(&c.gap),
                        "certificates": c.certificates.iter().map(|l| l.name()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = json!({
                "service": service_name(p, target),
                "comparisons": rows,
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        OutputFormat::Csv => {
            let _ = writeln!(out, "first,second,preferred,gap");
            for c in &pref.comparisons {
                let preferred = match c.preferred {
                    Preference::First => c.first.code(),
                    Preference::Second => c.second.code(),
                    Preference::Tie => "tie",
                };
                let _ = writeln!(out, "{},{},{},{}", c.first.code(), c.second.code(), preferred, c.gap);
            }
        }
        OutputFormat::Table => {
            let _ = writeln!(out, "service: {}", service_name(p, target));
            let _ = writeln!(
                out,
                "{:<6} {:<6} {:<10} {:>14}  {}",
                "first", "second", "preferred", "gap", "certificates"
            );
            for c in &pref.comparisons {
                let preferred = match c.preferred {
                    Preference::First => c.first.code(),
                    Preference::Second => c.second.code(),
                    Preference::Tie => "tie",
                };
                let certs: Vec<&str> = c.certificates.iter().map(|l| l.name()).collect();
                let _ = writeln!(
                    out,
                    "{:<6} {:<6} {:<10} {:>14}  {}",
                    c.first.code(),
                    c.second.code(),
                    preferred,
                    c.gap.to_string(),
                    certs.join("; ")
                );
            }
        }
    }
    Ok(())
}

fn cmd_synth(
    config: &std::path::Path,
    out_path: &std::path::Path,
    prices_out: Option<&std::path::Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let text = fs::read_to_string(config)
        .map_err(|e| CmdError::Data(format!("{}: {e}", config.display())))?;
    let cfg = SynthConfig::from_json(&text).map_err(data)?;
    let output = synthesize(&cfg).map_err(data)?;
    fs::write(out_path, &output.events_csv)
        .map_err(|e| CmdError::Data(format!("{}: {e}", out_path.display())))?;
    if let Some(path) = prices_out {
        fs::write(path, &output.prices_csv)
            .map_err(|e| CmdError::Data(format!("{}: {e}", path.display())))?;
    }
    let _ = writeln!(out, "services: {}", output.platform.service_count());
    let _ = writeln!(out, "subscribers: {}", output.platform.subscriber_count());
    let _ = writeln!(out, "relationships: {}", output.relationships);
    let _ = writeln!(out, "events: {}", output.events);
    let _ = writeln!(out, "sigma: {}", decimal_string(output.platform.success(), 2));
    let _ = writeln!(out, "events written to {}", out_path.display());
    if let Some(path) = prices_out {
        let _ = writeln!(out, "prices written to {}", path.display());
    }
    Ok(())
}
