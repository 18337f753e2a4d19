//! Rendering of relevance, stats, and payout tables as text, CSV, or JSON.
//!
//! Percent cells show the exact percentage rounded to two decimals; the
//! total row is computed from the exact sums, so an efficient indicator's
//! percents always total 100.00. Payout values go through largest-remainder
//! apportionment so the displayed cents sum to the pool exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use relmeter_core::indicators::{self, IndicatorKind};
use relmeter_core::platform::{Platform, ServiceId};
use relmeter_core::rational::{decimal_string, scale_to_units, sum_grouped, to_f64, units_to_decimal, Rat};
use serde_json::json;

use crate::ingest::ViewerStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

/// Display label for a service: its stored label, or its 1-based index.
pub fn service_name(p: &Platform, i: ServiceId) -> String {
    p.service_label(i)
        .map(str::to_string)
        .unwrap_or_else(|| (i.0 + 1).to_string())
}

/// Rounds each value to `dp` decimals so the rounded parts sum exactly to
/// `target` at that precision: floor everything, then hand the leftover
/// units to the largest remainders (ties to the lower index).
pub fn largest_remainder_units(values: &[Rat], target: &Rat, dp: u32) -> Vec<BigInt> {
    let mut scale = BigInt::from(1);
    for _ in 0..dp {
        scale *= 10;
    }
    let scale_rat = Rat::from_integer(scale.clone());
    let mut floors: Vec<BigInt> = Vec::with_capacity(values.len());
    let mut remainders: Vec<Rat> = Vec::with_capacity(values.len());
    for v in values {
        let scaled = v * &scale_rat;
        let floor = scaled.numer().div_floor(scaled.denom());
        remainders.push(&scaled - Rat::from_integer(floor.clone()));
        floors.push(floor);
    }
    let assigned: BigInt = floors.iter().sum();
    let target_units = scale_to_units(target, dp);
    let mut leftover = target_units - assigned;
    if leftover > BigInt::zero() {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|a, b| remainders[*b].cmp(&remainders[*a]).then(a.cmp(b)));
        for idx in order {
            if leftover.is_zero() {
                break;
            }
            floors[idx] += 1;
            leftover -= 1;
        }
    }
    floors
}

/// The exact percent each value takes of `total`.
fn percents(values: &[Rat], total: &Rat) -> Vec<Rat> {
    values
        .iter()
        .map(|v| v / total * Rat::from_integer(100.into()))
        .collect()
}

fn text_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let mut out = String::new();
    let render_row = |row: &[String], out: &mut String| {
        for (k, cell) in row.iter().enumerate() {
            if k > 0 {
                out.push_str("  ");
            }
            if k == 0 {
                out.push_str(&format!("{cell:<width$}", width = widths[k]));
            } else {
                out.push_str(&format!("{cell:>width$}", width = widths[k]));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    render_row(headers, &mut out);
    let rule: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
    out.push_str(&"-".repeat(rule));
    out.push('\n');
    for row in rows {
        render_row(row, &mut out);
    }
    out
}

fn exact_json(value: &Rat) -> serde_json::Value {
    json!({ "num": value.numer().to_string(), "den": value.denom().to_string() })
}

fn percent_2dp(value: &Rat) -> f64 {
    let units = scale_to_units(value, 2);
    to_f64(&Rat::new(units, 100.into()))
}

/// Renders one or more indicator columns in value/percent pairs, with an
/// exact total row; optionally prefixed by viewer statistics columns.
pub fn render_relevance(
    p: &Platform,
    kinds: &[IndicatorKind],
    stats: Option<&ViewerStats>,
    format: OutputFormat,
    exact: bool,
) -> String {
    let vectors: Vec<(IndicatorKind, Vec<Rat>)> = kinds
        .iter()
        .map(|k| (*k, indicators::evaluate(*k, p).into_values()))
        .collect();
    let pct: Vec<Vec<Rat>> = vectors
        .iter()
        .map(|(_, values)| percents(values, p.success()))
        .collect();
    match format {
        OutputFormat::Json => {
            let indicators_json: Vec<serde_json::Value> = vectors
                .iter()
                .zip(&pct)
                .map(|((kind, values), percents)| {
                    let rows: Vec<serde_json::Value> = p
                        .services()
                        .map(|i| {
                            let mut row = json!({
                                "service": service_name(p, i),
                                "value": to_f64(&values[i.0]),
                                "percent": percent_2dp(&percents[i.0]),
                            });
                            if exact {
                                row["valueExact"] = exact_json(&values[i.0]);
                            }
                            row
                        })
                        .collect();
                    let total = sum_grouped(values.iter().cloned());
                    let mut block = json!({
                        "indicator": kind.code(),
                        "rows": rows,
                        "total": to_f64(&total),
                        "totalPercent": percent_2dp(&sum_grouped(percents.iter().cloned())),
                    });
                    if exact {
                        block["totalExact"] = exact_json(&total);
                    }
                    block
                })
                .collect();
            let mut doc = json!({
                "sigma": to_f64(p.success()),
                "indicators": indicators_json,
            });
            if exact {
                doc["sigmaExact"] = exact_json(p.success());
            }
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
        OutputFormat::Csv => {
            let mut out = String::from("service");
            if stats.is_some() {
                out.push_str(",viewers,viewer_pct,exclusive,exclusive_pct");
            }
            for (kind, _) in &vectors {
                out.push_str(&format!(",{0}_value,{0}_pct", kind.code()));
            }
            out.push('\n');
            for i in p.services() {
                out.push_str(&service_name(p, i));
                if let Some(stats) = stats {
                    let s = &stats.per_service[i.0];
                    out.push_str(&format!(
                        ",{},{},{},{}",
                        s.viewers,
                        decimal_string(&(&s.viewer_share * Rat::from_integer(100.into())), 2),
                        s.exclusive_viewers,
                        decimal_string(&(&s.exclusive_share * Rat::from_integer(100.into())), 2),
                    ));
                }
                for ((_, values), percents) in vectors.iter().zip(&pct) {
                    out.push_str(&format!(
                        ",{},{}",
                        decimal_string(&values[i.0], 2),
                        decimal_string(&percents[i.0], 2)
                    ));
                }
                out.push('\n');
            }
            out
        }
        OutputFormat::Table => {
            let mut headers = vec![String::from("service")];
            if stats.is_some() {
                headers.extend(
                    ["viewers", "viewers %", "exclusive", "exclusive %"]
                        .iter()
                        .map(|s| s.to_string()),
                );
            }
            for (kind, _) in &vectors {
                headers.push(format!("{} value", kind.code()));
                headers.push(format!("{} %", kind.code()));
            }
            let mut rows: Vec<Vec<String>> = Vec::new();
            for i in p.services() {
                let mut row = vec![service_name(p, i)];
                if let Some(stats) = stats {
                    let s = &stats.per_service[i.0];
                    row.push(s.viewers.to_string());
                    row.push(decimal_string(
                        &(&s.viewer_share * Rat::from_integer(100.into())),
                        2,
                    ));
                    row.push(s.exclusive_viewers.to_string());
                    row.push(decimal_string(
                        &(&s.exclusive_share * Rat::from_integer(100.into())),
                        2,
                    ));
                }
                for ((_, values), percents) in vectors.iter().zip(&pct) {
                    row.push(decimal_string(&values[i.0], 2));
                    row.push(decimal_string(&percents[i.0], 2));
                }
                rows.push(row);
            }
            // Total row from the exact sums.
            let mut total_row = vec![String::from("total")];
            if let Some(stats) = stats {
                total_row.push(stats.total_viewer_relationships.to_string());
                total_row.push(String::from("100.00"));
                total_row.push(stats.total_exclusive_viewers.to_string());
                total_row.push(if stats.total_exclusive_viewers > 0 {
                    String::from("100.00")
                } else {
                    String::from("0.00")
                });
            }
            for ((_, values), percents) in vectors.iter().zip(&pct) {
                total_row.push(decimal_string(&sum_grouped(values.iter().cloned()), 2));
                total_row.push(decimal_string(&sum_grouped(percents.iter().cloned()), 2));
            }
            rows.push(total_row);
            text_table(&headers, &rows)
        }
    }
}

/// Renders the viewer/exclusive-viewer table.
pub fn render_stats(p: &Platform, stats: &ViewerStats, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let viewers: Vec<serde_json::Value> = p
                .services()
                .map(|i| {
                    let s = &stats.per_service[i.0];
                    json!({
                        "service": service_name(p, i),
                        "value": s.viewers,
                        "percent": percent_2dp(&(&s.viewer_share * Rat::from_integer(100.into()))),
                    })
                })
                .collect();
            let exclusive: Vec<serde_json::Value> = p
                .services()
                .map(|i| {
                    let s = &stats.per_service[i.0];
                    json!({
                        "service": service_name(p, i),
                        "value": s.exclusive_viewers,
                        "percent": percent_2dp(&(&s.exclusive_share * Rat::from_integer(100.into()))),
                    })
                })
                .collect();
            let doc = json!({
                "viewers": viewers,
                "exclusiveViewers": exclusive,
                "totalViewerRelationships": stats.total_viewer_relationships,
                "totalExclusiveViewers": stats.total_exclusive_viewers,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
        OutputFormat::Csv => {
            let mut out = String::from("service,viewers,viewer_pct,exclusive,exclusive_pct\n");
            for i in p.services() {
                let s = &stats.per_service[i.0];
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    service_name(p, i),
                    s.viewers,
                    decimal_string(&(&s.viewer_share * Rat::from_integer(100.into())), 2),
                    s.exclusive_viewers,
                    decimal_string(&(&s.exclusive_share * Rat::from_integer(100.into())), 2),
                ));
            }
            out
        }
        OutputFormat::Table => render_relevance(p, &[], Some(stats), OutputFormat::Table, false),
    }
}

/// Renders a payout table: values are largest-remainder cents summing to the
/// pool, percents the exact shares at two decimals.
pub fn render_payouts(
    p: &Platform,
    kind: IndicatorKind,
    pool: &Rat,
    payouts: &[Rat],
    format: OutputFormat,
) -> String {
    let cents = largest_remainder_units(payouts, pool, 2);
    let pct = percents(payouts, pool);
    match format {
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = p
                .services()
                .map(|i| {
                    json!({
                        "service": service_name(p, i),
                        "value": to_f64(&Rat::new(cents[i.0].clone(), 100.into())),
                        "percent": percent_2dp(&pct[i.0]),
                    })
                })
                .collect();
            let doc = json!({
                "indicator": kind.code(),
                "pool": to_f64(pool),
                "rows": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
        OutputFormat::Csv => {
            let mut out = String::from("service,payout,percent\n");
            for i in p.services() {
                out.push_str(&format!(
                    "{},{},{}\n",
                    service_name(p, i),
                    units_to_decimal(&cents[i.0], 2),
                    decimal_string(&pct[i.0], 2),
                ));
            }
            out
        }
        OutputFormat::Table => {
            let headers = vec![
                String::from("service"),
                String::from("payout"),
                String::from("%"),
            ];
            let mut rows: Vec<Vec<String>> = p
                .services()
                .map(|i| {
                    vec![
                        service_name(p, i),
                        units_to_decimal(&cents[i.0], 2),
                        decimal_string(&pct[i.0], 2),
                    ]
                })
                .collect();
            let cents_total: BigInt = cents.iter().sum();
            rows.push(vec![
                String::from("total"),
                units_to_decimal(&cents_total, 2),
                decimal_string(&sum_grouped(pct.iter().cloned()), 2),
            ]);
            text_table(&headers, &rows)
        }
    }
}
