//! Run KPIs: throughput, mean packet delay, packet loss ratio, Jain
//! fairness and spectral efficiency, per flow class and overall.

use crate::error::{Result, SimError};
use crate::sched::SchedulerKind;
use crate::traffic::{FlowClass, FlowCounters};

/// Video PLR target for streaming quality.
pub const VIDEO_PLR_TARGET: f64 = 0.01;

/// Jain's fairness index `(Σx)² / (N·Σx²)`; 1 for empty or all-zero input.
pub fn jain_index(values: &[f64]) -> f64 {
    let sum: f64 = values.iter().sum();
    let sum_sq: f64 = values.iter().map(|v| v * v).sum();
    if values.is_empty() || sum_sq == 0.0 {
        return 1.0;
    }
    sum * sum / (values.len() as f64 * sum_sq)
}

/// Report rows: the three traffic classes plus everything pooled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KpiScope {
    Class(FlowClass),
    All,
}

impl KpiScope {
    pub const ROWS: [KpiScope; 4] = [
        KpiScope::Class(FlowClass::Video),
        KpiScope::Class(FlowClass::Voip),
        KpiScope::Class(FlowClass::BestEffort),
        KpiScope::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KpiScope::Class(c) => c.name(),
            KpiScope::All => "all",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ROWS.into_iter().find(|s| s.name() == name)
    }

    fn includes(self, class: FlowClass) -> bool {
        match self {
            KpiScope::Class(c) => c == class,
            KpiScope::All => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassKpi {
    pub throughput_bps: f64,
    /// Mean over delivered deadline-bounded packets.
    pub avg_delay_s: f64,
    pub plr: f64,
    pub fairness: f64,
    pub spectral_efficiency: f64,
    /// No packet was delivered; `avg_delay_s` holds the delay budget.
    pub delay_flagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub exp_clamps: u64,
    pub invariant_violations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KpiReport {
    pub scheduler: SchedulerKind,
    pub n_ues: usize,
    /// Seed of a single run; `None` once aggregated.
    pub seed: Option<u64>,
    pub seed_count: usize,
    pub duration_s: f64,
    pub bandwidth_hz: f64,
    pub video: ClassKpi,
    pub voip: ClassKpi,
    pub best_effort: ClassKpi,
    pub all: ClassKpi,
    pub diagnostics: Diagnostics,
}

impl KpiReport {
    pub fn scope(&self, scope: KpiScope) -> &ClassKpi {
        match scope {
            KpiScope::Class(FlowClass::Video) => &self.video,
            KpiScope::Class(FlowClass::Voip) => &self.voip,
            KpiScope::Class(FlowClass::BestEffort) => &self.best_effort,
            KpiScope::All => &self.all,
        }
    }

    fn scope_mut(&mut self, scope: KpiScope) -> &mut ClassKpi {
        match scope {
            KpiScope::Class(FlowClass::Video) => &mut self.video,
            KpiScope::Class(FlowClass::Voip) => &mut self.voip,
            KpiScope::Class(FlowClass::BestEffort) => &mut self.best_effort,
            KpiScope::All => &mut self.all,
        }
    }

    /// Jain index over per-UE video throughput.
    pub fn fairness(&self) -> f64 {
        self.all.fairness
    }

    pub fn spectral_efficiency(&self) -> f64 {
        self.all.spectral_efficiency
    }
}

/// End-of-run state of one flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowRecord {
    pub ue_id: usize,
    pub class: FlowClass,
    pub delay_budget_s: Option<f64>,
    pub counters: FlowCounters,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMeta {
    pub scheduler: SchedulerKind,
    pub n_ues: usize,
    pub seed: u64,
    pub duration_s: f64,
    pub bandwidth_hz: f64,
}

pub fn finalize_run(records: &[FlowRecord], meta: RunMeta, diagnostics: Diagnostics) -> KpiReport {
    let mut report = KpiReport {
        scheduler: meta.scheduler,
        n_ues: meta.n_ues,
        seed: Some(meta.seed),
        seed_count: 1,
        duration_s: meta.duration_s,
        bandwidth_hz: meta.bandwidth_hz,
        video: ClassKpi::default(),
        voip: ClassKpi::default(),
        best_effort: ClassKpi::default(),
        all: ClassKpi::default(),
        diagnostics,
    };
    let per_second = |bits: u64| {
        if meta.duration_s > 0.0 {
            bits as f64 / meta.duration_s
        } else {
            0.0
        }
    };

    for scope in KpiScope::ROWS {
        let selected: Vec<&FlowRecord> = records.iter().filter(|r| scope.includes(r.class)).collect();
        let sum = |f: fn(&FlowCounters) -> u64| selected.iter().map(|r| f(&r.counters)).sum::<u64>();
        let delivered_bits = sum(|c| c.delivered_bits);
        let delivered_packets = sum(|c| c.delivered_packets);
        let arrived_packets = sum(|c| c.arrived_packets);
        let dropped_packets = sum(|c| c.dropped_packets);
        let delay_sum: f64 = selected.iter().map(|r| r.counters.delay_sum_s).sum();

        let throughput_bps = per_second(delivered_bits);
        let (avg_delay_s, delay_flagged) = if delivered_packets > 0 {
            (delay_sum / delivered_packets as f64, false)
        } else {
            let budget = selected
                .iter()
                .filter_map(|r| r.delay_budget_s)
                .fold(0.0, f64::max);
            (budget, true)
        };
        let plr = if arrived_packets > 0 {
            dropped_packets as f64 / arrived_packets as f64
        } else {
            0.0
        };
        let fairness_class = match scope {
            KpiScope::Class(c) => c,
            KpiScope::All => FlowClass::Video,
        };
        let fairness = jain_index(&per_ue_throughput(records, fairness_class, meta.n_ues, per_second));

        *report.scope_mut(scope) = ClassKpi {
            throughput_bps,
            avg_delay_s,
            plr,
            fairness,
            spectral_efficiency: throughput_bps / meta.bandwidth_hz,
            delay_flagged,
        };
    }
    report
}

fn per_ue_throughput(
    records: &[FlowRecord],
    class: FlowClass,
    n_ues: usize,
    per_second: impl Fn(u64) -> f64,
) -> Vec<f64> {
    let mut bits = vec![0u64; n_ues];
    let mut present = vec![false; n_ues];
    for r in records.iter().filter(|r| r.class == class && r.ue_id < n_ues) {
        bits[r.ue_id] += r.counters.delivered_bits;
        present[r.ue_id] = true;
    }
    bits.into_iter()
        .zip(present)
        .filter(|(_, p)| *p)
        .map(|(b, _)| per_second(b))
        .collect()
}

/// Averages per-seed reports of one (scheduler, UE count) point.
pub fn aggregate(reports: &[KpiReport]) -> Result<KpiReport> {
    let first = reports
        .first()
        .ok_or_else(|| SimError::MixedReports("no reports to aggregate".into()))?;
    if let Some(odd) = reports
        .iter()
        .find(|r| r.scheduler != first.scheduler || r.n_ues != first.n_ues)
    {
        return Err(SimError::MixedReports(format!(
            "{} with {} UEs mixed with {} with {} UEs",
            first.scheduler, first.n_ues, odd.scheduler, odd.n_ues
        )));
    }
    let n = reports.len() as f64;
    let mean = |f: &dyn Fn(&KpiReport) -> f64| reports.iter().map(f).sum::<f64>() / n;

    let mut out = first.clone();
    out.seed = None;
    out.seed_count = reports.iter().map(|r| r.seed_count).sum();
    out.duration_s = mean(&|r| r.duration_s);
    out.diagnostics = Diagnostics {
        exp_clamps: reports.iter().map(|r| r.diagnostics.exp_clamps).sum(),
        invariant_violations: reports.iter().map(|r| r.diagnostics.invariant_violations).sum(),
    };
    for scope in KpiScope::ROWS {
        let kpi = ClassKpi {
            throughput_bps: mean(&|r| r.scope(scope).throughput_bps),
            avg_delay_s: mean(&|r| r.scope(scope).avg_delay_s),
            plr: mean(&|r| r.scope(scope).plr),
            fairness: mean(&|r| r.scope(scope).fairness),
            spectral_efficiency: mean(&|r| r.scope(scope).spectral_efficiency),
            delay_flagged: reports.iter().any(|r| r.scope(scope).delay_flagged),
        };
        *out.scope_mut(scope) = kpi;
    }
    Ok(out)
}
