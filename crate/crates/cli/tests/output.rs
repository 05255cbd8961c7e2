//! Result files: CSV round trip and plot data layout.

use ltesim_cli::output::{figure_data, CSV_HEADER, FIGURES};
use ltesim_cli::{parse_results_csv, results_csv, run_sweep, write_outputs, CsvRow, HarnessError, SweepPlan};
use ltesim_core::{ClassKpi, KpiReport, KpiScope, SchedulerKind, SimConfig};
use proptest::prelude::*;

fn kpi() -> impl Strategy<Value = ClassKpi> {
    (any::<f64>(), any::<f64>(), 0.0..=1.0f64, 0.0..=1.0f64, any::<f64>()).prop_map(|(t, d, p, f, s)| ClassKpi {
        throughput_bps: t.abs(),
        avg_delay_s: d.abs(),
        plr: p,
        fairness: f,
        spectral_efficiency: s.abs(),
        delay_flagged: false,
    })
}

fn report() -> impl Strategy<Value = KpiReport> {
    (0usize..4, 1usize..100, 1usize..10, kpi(), kpi(), kpi(), kpi()).prop_map(|(s, n, seeds, v, vo, be, all)| KpiReport {
        scheduler: SchedulerKind::ALL[s],
        n_ues: n,
        seed: None,
        seed_count: seeds,
        duration_s: 20.0,
        bandwidth_hz: 10e6,
        video: v,
        voip: vo,
        best_effort: be,
        all,
        diagnostics: Default::default(),
    })
}

proptest! {
    #[test]
    fn csv_round_trips_bit_exactly(reports in prop::collection::vec(report(), 1..6)) {
        let rows = parse_results_csv(&results_csv(&reports)).unwrap();
        prop_assert_eq!(rows.len(), reports.len() * 4);
        let expected: Vec<CsvRow> = reports
            .iter()
            .flat_map(|r| KpiScope::ROWS.map(|s| CsvRow::from_report(r, s)))
            .collect();
        for (got, want) in rows.iter().zip(&expected) {
            prop_assert_eq!(got.throughput_bps.to_bits(), want.throughput_bps.to_bits());
            prop_assert_eq!(got.spectral_efficiency.to_bits(), want.spectral_efficiency.to_bits());
        }
        prop_assert_eq!(rows, expected);
    }
}

fn small_sweep() -> Vec<KpiReport> {
    run_sweep(&SweepPlan {
        schedulers: vec![SchedulerKind::Fls, SchedulerKind::Log],
        ue_counts: vec![2, 4, 6],
        seeds: vec![1, 2],
        base: SimConfig {
            duration_s: 0.2,
            ..SimConfig::default()
        },
    })
    .unwrap()
}

#[test]
fn write_outputs_creates_every_file() {
    let reports = small_sweep();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/results");
    let written = write_outputs(&reports, &out).unwrap();
    assert_eq!(written.len(), 1 + FIGURES.len());

    let csv = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    let rows = parse_results_csv(&csv).unwrap();
    assert_eq!(rows.len(), 6 * 4);

    for figure in &FIGURES {
        let text = std::fs::read_to_string(out.join(figure.file)).unwrap();
        let data: Vec<Vec<&str>> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split_whitespace().collect())
            .collect();
        assert_eq!(data.len(), 3, "{}", figure.file);
        assert!(data.iter().all(|row| row.len() == 3));
        assert_eq!(data.iter().map(|r| r[0]).collect::<Vec<_>>(), ["2", "4", "6"]);
        assert!(text.contains("# n_ues FLS LOG"));
    }
}

#[test]
fn missing_points_are_nan() {
    let mut reports = small_sweep();
    reports.retain(|r| !(r.scheduler == SchedulerKind::Log && r.n_ues == 4));
    let text = figure_data(&reports, &FIGURES[0]);
    let row = text.lines().find(|l| l.starts_with("4 ")).unwrap();
    assert!(row.ends_with(" nan"), "{row}");
}

#[test]
fn empty_reports_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(write_outputs(&[], dir.path()), Err(HarnessError::NoReports)));
}

#[test]
fn malformed_csv_is_reported_with_its_line() {
    assert!(matches!(parse_results_csv("a,b\n"), Err(HarnessError::Csv { line: 1, .. })));
    let bad = format!("{CSV_HEADER}\nFLS,10,5,video,1,2,3\n");
    assert!(matches!(parse_results_csv(&bad), Err(HarnessError::Csv { line: 2, .. })));
    let bad = format!("{CSV_HEADER}\nFLS,10,5,video,x,2,0,1,1\n");
    assert!(parse_results_csv(&bad).unwrap_err().to_string().contains("line 2"));
    let bad = format!("{CSV_HEADER}\nRR,10,5,video,1,2,0,1,1\n");
    assert!(parse_results_csv(&bad).is_err());
}
