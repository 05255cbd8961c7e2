//! Whole-run properties over small random scenarios.

use std::sync::Arc;

use ltesim_core::channel::Position;
use ltesim_core::traffic::synth_trace;
use ltesim_core::{run, run_with_trace, FlowClass, SchedulerKind, SimConfig, Simulation, VideoConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small(scheduler: SchedulerKind, n_ues: usize, seed: u64) -> SimConfig {
    SimConfig {
        duration_s: 0.4,
        n_ues,
        scheduler,
        seed,
        ..SimConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_clean_and_bounded(
        sched in 0usize..4,
        n_ues in 1usize..8,
        seed in any::<u64>(),
    ) {
        let config = small(SchedulerKind::ALL[sched], n_ues, seed);
        let report = run(&config).unwrap();
        prop_assert_eq!(report.diagnostics.invariant_violations, 0);
        let j = report.fairness();
        prop_assert!(j >= 1.0 / n_ues as f64 - 1e-12 && j <= 1.0 + 1e-12);
        for kpi in [&report.video, &report.voip, &report.best_effort, &report.all] {
            prop_assert!((0.0..=1.0).contains(&kpi.plr));
            prop_assert!(kpi.throughput_bps >= 0.0);
        }
        prop_assert!(report.video.avg_delay_s <= config.delay_budget_s);
        prop_assert!(report.voip.avg_delay_s <= config.delay_budget_s);
        prop_assert_eq!(report.best_effort.plr, 0.0);
        prop_assert_eq!(run(&config).unwrap(), report);
    }
}

#[test]
fn every_tti_conserves_bits() {
    for scheduler in SchedulerKind::ALL {
        let config = small(scheduler, 6, 3);
        let trace = Arc::new(config.video.load().unwrap());
        let mut sim = Simulation::new(config, trace).unwrap();
        while !sim.is_finished() {
            let outcome = sim.advance_tti();
            assert!(outcome.decision.assigned_prbs() <= 50);
            assert!(sim.check_conservation(), "{scheduler}");
        }
        assert_eq!(sim.violations().total(), 0);
    }
}

#[test]
fn pinned_centre_ue_gets_the_full_grid() {
    let config = SimConfig {
        duration_s: 0.05,
        n_ues: 1,
        scheduler: SchedulerKind::Pf,
        enable_video: false,
        enable_voip: false,
        fast_fading: false,
        shadowing_sigma_db: 0.0,
        ue_speed_kmph: 0.0,
        ..SimConfig::default()
    };
    let trace = Arc::new(config.video.load().unwrap());
    let mut sim = Simulation::new(config, trace).unwrap();
    sim.set_ue_position(0, Position::new(0.0, 0.0));
    while !sim.is_finished() {
        assert_eq!(sim.advance_tti().delivered_bits, 33_328);
    }
    let report = sim.finish();
    assert_eq!(report.best_effort.throughput_bps, 33_328_000.0);
}

#[test]
fn trace_file_matches_in_memory_trace() {
    let trace = synth_trace(242.0, 30, 60, &mut ChaCha8Rng::seed_from_u64(5));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.txt");
    std::fs::write(&path, trace.to_text()).unwrap();

    let from_file = SimConfig {
        video: VideoConfig::TraceFile(path),
        ..small(SchedulerKind::Fls, 4, 11)
    };
    let in_memory = run_with_trace(&small(SchedulerKind::Fls, 4, 11), Arc::new(trace)).unwrap();
    assert_eq!(run(&from_file).unwrap(), in_memory);
}

#[test]
fn missing_trace_file_is_an_error() {
    let config = SimConfig {
        video: VideoConfig::TraceFile("/nonexistent/trace.txt".into()),
        ..small(SchedulerKind::Exp, 2, 1)
    };
    assert!(run(&config).is_err());
}

#[test]
fn classes_can_be_disabled() {
    let config = SimConfig {
        enable_voip: false,
        enable_best_effort: false,
        ..small(SchedulerKind::Log, 3, 2)
    };
    let trace = Arc::new(config.video.load().unwrap());
    let sim = Simulation::new(config, trace).unwrap();
    assert!(sim.flows().iter().all(|f| f.class == FlowClass::Video));
    assert_eq!(sim.flows().len(), 3);
}
