//! `results.csv` and per-figure plot data.
//!
//! Floats are written in Rust's shortest round-trip decimal form, so parsing
//! the CSV back yields the exact `f64` values.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ltesim_core::{ClassKpi, KpiReport, KpiScope, SchedulerKind};

use crate::error::HarnessError;

pub const CSV_HEADER: &str =
    "scheduler,n_ues,seeds,flow_class,throughput_bps,avg_delay_s,plr,fairness,spectral_eff_bps_hz";

/// One parsed `results.csv` row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scheduler: SchedulerKind,
    pub n_ues: usize,
    pub seeds: usize,
    pub scope: KpiScope,
    pub throughput_bps: f64,
    pub avg_delay_s: f64,
    pub plr: f64,
    pub fairness: f64,
    pub spectral_efficiency: f64,
}

impl CsvRow {
    pub fn from_report(report: &KpiReport, scope: KpiScope) -> Self {
        let kpi: &ClassKpi = report.scope(scope);
        CsvRow {
            scheduler: report.scheduler,
            n_ues: report.n_ues,
            seeds: report.seed_count,
            scope,
            throughput_bps: kpi.throughput_bps,
            avg_delay_s: kpi.avg_delay_s,
            plr: kpi.plr,
            fairness: kpi.fairness,
            spectral_efficiency: kpi.spectral_efficiency,
        }
    }
}

pub fn results_csv(reports: &[KpiReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for report in reports {
        for scope in KpiScope::ROWS {
            let r = CsvRow::from_report(report, scope);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.scheduler,
                r.n_ues,
                r.seeds,
                scope.name(),
                r.throughput_bps,
                r.avg_delay_s,
                r.plr,
                r.fairness,
                r.spectral_efficiency
            );
        }
    }
    out
}

pub fn parse_results_csv(text: &str) -> Result<Vec<CsvRow>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        _ => {
            return Err(HarnessError::Csv {
                line: 1,
                message: "missing or unexpected header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| HarnessError::Csv { line: i + 1, message };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(err(format!("expected 9 fields, found {}", fields.len())));
        }
        let float = |k: usize| {
            fields[k]
                .parse::<f64>()
                .map_err(|_| err(format!("field {} `{}` is not a number", k + 1, fields[k])))
        };
        rows.push(CsvRow {
            scheduler: fields[0].parse().map_err(err)?,
            n_ues: fields[1].parse().map_err(|_| err(format!("bad n_ues `{}`", fields[1])))?,
            seeds: fields[2].parse().map_err(|_| err(format!("bad seeds `{}`", fields[2])))?,
            scope: KpiScope::parse(fields[3]).ok_or_else(|| err(format!("bad flow_class `{}`", fields[3])))?,
            throughput_bps: float(4)?,
            avg_delay_s: float(5)?,
            plr: float(6)?,
            fairness: float(7)?,
            spectral_efficiency: float(8)?,
        });
    }
    Ok(rows)
}

/// A plotted series: file stem, description and the value taken per report.
pub struct Figure {
    pub file: &'static str,
    pub title: &'static str,
    pub value: fn(&KpiReport) -> f64,
}

pub const FIGURES: [Figure; 5] = [
    Figure {
        file: "fig_throughput.dat",
        title: "video throughput (bit/s) vs number of UEs",
        value: |r| r.video.throughput_bps,
    },
    Figure {
        file: "fig_delay.dat",
        title: "mean video packet delay (s) vs number of UEs",
        value: |r| r.video.avg_delay_s,
    },
    Figure {
        file: "fig_plr.dat",
        title: "video packet loss ratio vs number of UEs",
        value: |r| r.video.plr,
    },
    Figure {
        file: "fig_fairness.dat",
        title: "Jain index of per-UE video throughput vs number of UEs",
        value: |r| r.fairness(),
    },
    Figure {
        file: "fig_speff.dat",
        title: "spectral efficiency (bit/s/Hz, all flows) vs number of UEs",
        value: |r| r.spectral_efficiency(),
    },
];

/// Whitespace-separated table: `n_ues` then one column per scheduler, in
/// order of first appearance. Missing points are written as `nan`.
pub fn figure_data(reports: &[KpiReport], figure: &Figure) -> String {
    let mut schedulers: Vec<SchedulerKind> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for r in reports {
        if !schedulers.contains(&r.scheduler) {
            schedulers.push(r.scheduler);
        }
        if !counts.contains(&r.n_ues) {
            counts.push(r.n_ues);
        }
    }
    counts.sort_unstable();

    let mut out = format!("# {}\n# n_ues", figure.title);
    for s in &schedulers {
        let _ = write!(out, " {s}");
    }
    out.push('\n');
    for n in counts {
        let _ = write!(out, "{n}");
        for &s in &schedulers {
            match reports.iter().find(|r| r.scheduler == s && r.n_ues == n) {
                Some(r) => {
                    let _ = write!(out, " {}", (figure.value)(r));
                }
                None => out.push_str(" nan"),
            }
        }
        out.push('\n');
    }
    out
}

/// Writes `results.csv` and the `fig_*.dat` files into `out_dir`.
pub fn write_outputs(reports: &[KpiReport], out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    if reports.is_empty() {
        return Err(HarnessError::NoReports);
    }
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| HarnessError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut written = Vec::new();
    let csv = out_dir.join("results.csv");
    fs::write(&csv, results_csv(reports)).map_err(io_err(&csv))?;
    written.push(csv);
    for figure in &FIGURES {
        let path = out_dir.join(figure.file);
        fs::write(&path, figure_data(reports, figure)).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}
