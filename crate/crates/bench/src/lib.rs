//! Workloads shared by the benchmarks.

use ltesim_core::{Cqi, FlowClass, FlowSnapshot, SchedulerKind, SimConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One TTI's worth of flows for `n_ues` UEs, each carrying video, VoIP and
/// best-effort traffic with random channels, queues and head-of-line delays.
pub fn snapshot_workload(n_ues: usize, seed: u64) -> Vec<FlowSnapshot> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flows = Vec::with_capacity(3 * n_ues);
    for ue in 0..n_ues {
        let cqi = Cqi::new(rng.random_range(1..=15)).expect("CQI in range");
        for class in FlowClass::ALL {
            let real_time = class.is_real_time();
            flows.push(FlowSnapshot {
                flow_id: flows.len(),
                ue_id: ue,
                class,
                queue_bits: if real_time { rng.random_range(0..40_000) } else { u64::MAX },
                hol_delay_s: if real_time { rng.random_range(0.0..0.1) } else { 0.0 },
                cqi,
                pf_avg_rate: rng.random_range(10.0..5_000.0),
                delay_budget_s: real_time.then_some(0.1),
                fls_quota_bits: if real_time { rng.random_range(0.0..20_000.0) } else { 0.0 },
            });
        }
    }
    flows
}

/// Default scenario shortened to `duration_s`.
pub fn scenario(scheduler: SchedulerKind, n_ues: usize, duration_s: f64) -> SimConfig {
    SimConfig {
        scheduler,
        n_ues,
        duration_s,
        ..SimConfig::default()
    }
}
