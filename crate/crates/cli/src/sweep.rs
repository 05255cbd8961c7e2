//! Scheduler × UE-count × seed sweeps.

use std::sync::Arc;

use ltesim_core::{aggregate, run_with_trace, KpiReport, SchedulerKind, SimConfig};
use rayon::prelude::*;

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub schedulers: Vec<SchedulerKind>,
    pub ue_counts: Vec<usize>,
    pub seeds: Vec<u64>,
    pub base: SimConfig,
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan {
            schedulers: vec![SchedulerKind::Fls, SchedulerKind::Exp, SchedulerKind::Log],
            ue_counts: (1..=6).map(|k| k * 10).collect(),
            seeds: (1..=5).collect(),
            base: SimConfig::default(),
        }
    }
}

impl SweepPlan {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.schedulers.is_empty() {
            return Err(HarnessError::Sweep("scheduler list is empty".into()));
        }
        if self.ue_counts.is_empty() {
            return Err(HarnessError::Sweep("UE count list is empty".into()));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::Sweep("seed list is empty".into()));
        }
        self.base.validate()?;
        Ok(())
    }

    /// Configurations of every individual run, in output order.
    pub fn runs(&self) -> Vec<SimConfig> {
        let mut out = Vec::with_capacity(self.schedulers.len() * self.ue_counts.len() * self.seeds.len());
        for &scheduler in &self.schedulers {
            let mut counts = self.ue_counts.clone();
            counts.sort_unstable();
            counts.dedup();
            for n_ues in counts {
                for &seed in &self.seeds {
                    out.push(SimConfig {
                        scheduler,
                        n_ues,
                        seed,
                        ..self.base.clone()
                    });
                }
            }
        }
        out
    }
}

/// Runs every configuration of the sweep in parallel and returns the
/// per-seed reports in [`SweepPlan::runs`] order.
pub fn run_each(plan: &SweepPlan) -> Result<Vec<KpiReport>, HarnessError> {
    plan.validate()?;
    let trace = Arc::new(plan.base.video.load()?);
    plan.runs()
        .par_iter()
        .map(|config| {
            run_with_trace(config, Arc::clone(&trace)).map_err(|source| HarnessError::Run {
                context: format!("{}/{} UEs/seed {}", config.scheduler, config.n_ues, config.seed),
                source,
            })
        })
        .collect()
}

/// Seed-averages per-run reports produced by [`run_each`].
pub fn aggregate_runs(plan: &SweepPlan, reports: &[KpiReport]) -> Result<Vec<KpiReport>, HarnessError> {
    reports
        .chunks(plan.seeds.len())
        .map(|group| aggregate(group).map_err(HarnessError::from))
        .collect()
}

/// Runs the sweep and returns one seed-averaged report per (scheduler, UE
/// count), schedulers in the order given and UE counts ascending.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<KpiReport>, HarnessError> {
    let reports = run_each(plan)?;
    aggregate_runs(plan, &reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltesim_core::run;

    fn tiny() -> SimConfig {
        SimConfig {
            duration_s: 0.3,
            ..SimConfig::default()
        }
    }

    #[test]
    fn single_point_matches_a_direct_run() {
        let plan = SweepPlan {
            schedulers: vec![SchedulerKind::Log],
            ue_counts: vec![4],
            seeds: vec![9],
            base: tiny(),
        };
        let reports = run_sweep(&plan).unwrap();
        assert_eq!(reports.len(), 1);
        let direct = run(&SimConfig {
            scheduler: SchedulerKind::Log,
            n_ues: 4,
            seed: 9,
            ..tiny()
        })
        .unwrap();
        let expected = aggregate(&[direct]).unwrap();
        assert_eq!(reports[0], expected);
    }

    #[test]
    fn cardinality_and_order() {
        let plan = SweepPlan {
            schedulers: vec![SchedulerKind::Fls, SchedulerKind::Exp, SchedulerKind::Log],
            ue_counts: vec![60, 10, 30, 20, 50, 40],
            seeds: (1..=5).collect(),
            base: SimConfig {
                duration_s: 0.02,
                ..SimConfig::default()
            },
        };
        assert_eq!(plan.runs().len(), 90);
        let reports = run_sweep(&plan).unwrap();
        assert_eq!(reports.len(), 18);
        let keys: Vec<(SchedulerKind, usize)> = reports.iter().map(|r| (r.scheduler, r.n_ues)).collect();
        assert_eq!(keys[0], (SchedulerKind::Fls, 10));
        assert_eq!(keys[5], (SchedulerKind::Fls, 60));
        assert_eq!(keys[6], (SchedulerKind::Exp, 10));
        assert_eq!(keys[17], (SchedulerKind::Log, 60));
        assert!(reports.iter().all(|r| r.seed_count == 5));
    }

    #[test]
    fn empty_lists_are_rejected() {
        let plan = SweepPlan {
            schedulers: vec![],
            ..SweepPlan::default()
        };
        assert!(matches!(run_sweep(&plan), Err(HarnessError::Sweep(_))));
        let plan = SweepPlan {
            seeds: vec![],
            ..SweepPlan::default()
        };
        assert!(run_sweep(&plan).is_err());
    }

    #[test]
    fn parallel_sweeps_are_reproducible() {
        let plan = SweepPlan {
            schedulers: vec![SchedulerKind::Exp, SchedulerKind::Fls],
            ue_counts: vec![3, 6],
            seeds: vec![1, 2, 3],
            base: tiny(),
        };
        assert_eq!(run_sweep(&plan).unwrap(), run_sweep(&plan).unwrap());
    }
}
