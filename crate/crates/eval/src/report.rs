//! Human table and machine JSON rendering of harness results.

use std::fmt::Write;

use semloc_core::DistanceSemantics;
use serde::Serialize;

use crate::agreement::{AgreementOptions, AgreementReport};
use crate::alignment_report::{AlignmentReport, Bucket, BucketStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

fn semantics_name(semantics: DistanceSemantics) -> &'static str {
    match semantics {
        DistanceSemantics::EdgeToEdge => "edge_to_edge",
        DistanceSemantics::InterCentre => "inter_centre",
    }
}

/// One agreement result with the options that produced it, in the shape
/// emitted as JSON. Field names are stable output contract.
#[derive(Debug, Serialize)]
pub struct AgreementLine {
    pub semantics: &'static str,
    pub nearest_only: bool,
    pub include_nr: bool,
    pub matches: usize,
    pub comparisons: usize,
    pub rate_pct: f64,
}

impl AgreementLine {
    pub fn new(options: &AgreementOptions, report: &AgreementReport) -> Self {
        Self {
            semantics: semantics_name(options.semantics),
            nearest_only: options.nearest_only,
            include_nr: options.include_nr,
            matches: report.matches,
            comparisons: report.comparisons,
            rate_pct: report.rate_pct(),
        }
    }
}

fn flag(name: &str, on: bool) -> String {
    format!("{name}={}", if on { "yes" } else { "no" })
}

pub fn render_agreement(lines: &[AgreementLine], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(lines).expect("agreement lines serialize"),
        Format::Table => {
            let mut out = String::new();
            for line in lines {
                writeln!(
                    out,
                    "{:<13} {:<16} {:<15} {}/{}  {:.1}%",
                    line.semantics,
                    flag("nearest_only", line.nearest_only),
                    flag("include_nr", line.include_nr),
                    line.matches,
                    line.comparisons,
                    line.rate_pct,
                )
                .expect("write to string");
            }
            out
        }
    }
}

fn bucket_rows(out: &mut String, name: &str, bucket: Bucket, stats: &BucketStats) {
    if stats.samples == 0 {
        writeln!(out, "{name:<6} samples=0").expect("write to string");
        return;
    }
    for (variant, counts) in [("original", &stats.original), ("revised", &stats.revised)] {
        writeln!(
            out,
            "{name:<6} {variant:<9} samples={} aligned={} not_aligned={} undecidable={} success={:.1}%",
            stats.samples,
            counts.aligned,
            counts.not_aligned,
            counts.undecidable,
            100.0 * counts.success_rate(bucket),
        )
        .expect("write to string");
    }
}

pub fn render_alignment(report: &AlignmentReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        Format::Table => {
            let mut out = String::new();
            writeln!(
                out,
                "pair {}-{}  separation={:.3} m  threshold={} deg  positions={}  removed={}",
                report.pair.0,
                report.pair.1,
                report.separation_m,
                report.threshold_deg,
                report.positions,
                report.removed,
            )
            .expect("write to string");
            bucket_rows(&mut out, "above", Bucket::Above, &report.above);
            bucket_rows(&mut out, "near", Bucket::Near, &report.near);
            bucket_rows(&mut out, "below", Bucket::Below, &report.below);
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_line_contains_counts_and_rate() {
        let line = AgreementLine {
            semantics: "edge_to_edge",
            nearest_only: true,
            include_nr: true,
            matches: 45,
            comparisons: 50,
            rate_pct: 90.0,
        };
        let text = render_agreement(&[line], Format::Table);
        assert!(text.contains("45/50"), "{text}");
        assert!(text.contains("90.0%"), "{text}");
    }

    #[test]
    fn json_round_trips_field_names() {
        let line = AgreementLine {
            semantics: "inter_centre",
            nearest_only: false,
            include_nr: false,
            matches: 32,
            comparisons: 155,
            rate_pct: 20.6,
        };
        let text = render_agreement(&[line], Format::Json);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value[0]["matches"], 32);
        assert_eq!(value[0]["comparisons"], 155);
        assert_eq!(value[0]["semantics"], "inter_centre");
    }
}
