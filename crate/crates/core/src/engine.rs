//! The TTI loop.
//!
//! Each TTI runs, in order: mobility, SINR/CQI feedback, traffic arrivals,
//! deadline drops, the FLS quota refresh at frame boundaries, PRB
//! allocation, FIFO delivery, and PF average updates.

use std::path::PathBuf;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{wideband_cqi, CellLayout, ChannelModel, LinkBudget, MobilityModel, MobilityState, Position};
use crate::error::{Result, SimError};
use crate::metrics::{finalize_run, Diagnostics, FlowRecord, KpiReport, RunMeta};
use crate::radio::{self, BandwidthProfile, Cqi, TtiClock};
use crate::sched::{
    allocate_subframe, pf_average_update, ExpRuleParams, ExpVariant, FlowSnapshot, FlsState, LogRuleParams, Policy,
    SchedulerDecision, SchedulerKind, DEFAULT_PF_WINDOW_TTIS, RATE_FLOOR,
};
use crate::traffic::{
    load_trace, synth_trace, FlowClass, FlowQueue, SourceKind, TrafficSource, VideoSource, VideoTrace, VoipSource,
};

/// Seed of the shared synthetic video trace. Every run replays the same
/// clip so scheduler comparisons see identical content.
const SYNTHETIC_TRACE_SEED: u64 = 0x0f0e_3a11;

#[derive(Debug, Clone, PartialEq)]
pub enum VideoConfig {
    Synthetic { kbps: f64, fps: u32, frames: usize },
    TraceFile(PathBuf),
}

impl Default for VideoConfig {
    fn default() -> Self {
        VideoConfig::Synthetic {
            kbps: 242.0,
            fps: 30,
            frames: 300,
        }
    }
}

impl VideoConfig {
    pub fn load(&self) -> Result<VideoTrace> {
        match self {
            VideoConfig::Synthetic { kbps, fps, frames } => {
                let mut rng = ChaCha8Rng::seed_from_u64(SYNTHETIC_TRACE_SEED);
                Ok(synth_trace(*kbps, *fps, *frames, &mut rng))
            }
            VideoConfig::TraceFile(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| SimError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                load_trace(&text)
            }
        }
    }
}

/// Full scenario parameterization. Defaults reproduce the reference
/// vehicular scenario: 100 s, 10 MHz FDD, 1 km cell, 120 km/h.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub duration_s: f64,
    pub bandwidth_hz: f64,
    pub cell_radius_m: f64,
    pub ue_speed_kmph: f64,
    pub n_ues: usize,
    pub scheduler: SchedulerKind,
    pub seed: u64,
    pub video: VideoConfig,
    pub delay_budget_s: f64,

    pub enable_video: bool,
    pub enable_voip: bool,
    pub enable_best_effort: bool,
    pub voip_on_mean_s: f64,
    pub voip_off_mean_s: f64,

    pub pf_window_ttis: f64,
    pub exp: ExpRuleParams,
    pub log: LogRuleParams,
    /// FLS filter coefficient; derived from the delay budget when `None`.
    pub fls_coefficient: Option<f64>,

    pub fast_fading: bool,
    pub shadowing_sigma_db: f64,
    pub tx_power_dbm: f64,
    pub noise_figure_db: f64,
    pub hex_layout: bool,
    /// Mean heading epoch; `None` turns only at the cell boundary.
    pub turn_epoch_mean_s: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            duration_s: 100.0,
            bandwidth_hz: 10e6,
            cell_radius_m: 1000.0,
            ue_speed_kmph: 120.0,
            n_ues: 10,
            scheduler: SchedulerKind::Fls,
            seed: 1,
            video: VideoConfig::default(),
            delay_budget_s: 0.1,
            enable_video: true,
            enable_voip: true,
            enable_best_effort: true,
            voip_on_mean_s: 3.0,
            voip_off_mean_s: 3.0,
            pf_window_ttis: DEFAULT_PF_WINDOW_TTIS,
            exp: ExpRuleParams::default(),
            log: LogRuleParams::default(),
            fls_coefficient: None,
            fast_fading: true,
            shadowing_sigma_db: 8.0,
            tx_power_dbm: 43.0,
            noise_figure_db: 9.0,
            hex_layout: true,
            turn_epoch_mean_s: Some(5.0),
        }
    }
}

impl SimConfig {
    pub const TTI_S: f64 = 0.001;
    pub const FRAME_S: f64 = 0.010;

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, key: &str, message: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(SimError::invalid(key, message))
            }
        }
        radio::prb_count(self.bandwidth_hz)?;
        check(self.duration_s.is_finite() && self.duration_s >= 0.0, "duration_s", "must be in [0, inf)")?;
        check(self.cell_radius_m.is_finite() && self.cell_radius_m > 0.0, "cell_radius_m", "must be in (0, inf)")?;
        check(self.ue_speed_kmph.is_finite() && self.ue_speed_kmph >= 0.0, "ue_speed_kmph", "must be in [0, inf)")?;
        check(self.delay_budget_s.is_finite() && self.delay_budget_s > 0.0, "delay_budget_s", "must be in (0, inf)")?;
        check(self.voip_on_mean_s > 0.0 && self.voip_on_mean_s.is_finite(), "voip_on_mean_s", "must be in (0, inf)")?;
        check(self.voip_off_mean_s > 0.0 && self.voip_off_mean_s.is_finite(), "voip_off_mean_s", "must be in (0, inf)")?;
        check(self.pf_window_ttis >= 1.0 && self.pf_window_ttis.is_finite(), "pf_window_ttis", "must be in [1, inf)")?;
        check(self.exp.beta > 0.0 && self.exp.beta < 1.0, "exp_beta", "must be in (0, 1)")?;
        check(self.exp.eta > 0.0 && self.exp.eta < 1.0, "exp_eta", "must be in (0, 1)")?;
        check(self.exp.a_numerator > 0.0 && self.exp.a_numerator.is_finite(), "exp_a", "must be in (0, inf)")?;
        check(self.log.c_log > 1.0 && self.log.c_log.is_finite(), "log_c", "must be in (1, inf)")?;
        check(self.log.a_numerator > 0.0 && self.log.a_numerator.is_finite(), "log_a", "must be in (0, inf)")?;
        if let Some(c) = self.fls_coefficient {
            check(c > 0.0 && c <= 1.0, "fls_coefficient", "must be in (0, 1]")?;
        }
        check(
            self.shadowing_sigma_db.is_finite() && self.shadowing_sigma_db >= 0.0,
            "shadowing_sigma_db",
            "must be in [0, inf)",
        )?;
        check(self.tx_power_dbm.is_finite(), "tx_power_dbm", "must be finite")?;
        check(self.noise_figure_db.is_finite(), "noise_figure_db", "must be finite")?;
        if let Some(mean) = self.turn_epoch_mean_s {
            check(mean > 0.0 && mean.is_finite(), "turn_epoch_mean_s", "must be in (0, inf)")?;
        }
        if let VideoConfig::Synthetic { kbps, fps, frames } = self.video {
            check(kbps > 0.0 && kbps.is_finite(), "video_kbps", "must be in (0, inf)")?;
            check(fps > 0, "video_fps", "must be in [1, inf)")?;
            check(frames > 0, "video_frames", "must be in [1, inf)")?;
        }
        Ok(())
    }

    pub fn policy(&self) -> Policy {
        match self.scheduler {
            SchedulerKind::Pf => Policy::Pf,
            SchedulerKind::Exp => Policy::Exp(self.exp),
            SchedulerKind::Log => Policy::Log(self.log),
            SchedulerKind::Fls => Policy::Fls,
        }
    }

    pub fn speed_mps(&self) -> f64 {
        self.ue_speed_kmph / 3.6
    }

    pub fn tti_count(&self) -> u64 {
        (self.duration_s / Self::TTI_S).round() as u64
    }

    pub fn fls_filter_coefficient(&self) -> f64 {
        self.fls_coefficient
            .unwrap_or_else(|| FlsState::coefficient_for_budget(self.delay_budget_s / Self::FRAME_S))
    }

    pub fn exp_variant(&self) -> ExpVariant {
        self.exp.variant
    }
}

#[derive(Debug, Clone)]
pub struct UserEquipment {
    pub id: usize,
    pub mobility: MobilityState,
    /// Per-site shadowing in [`CellLayout::sites`] order.
    pub shadow_db: Vec<f64>,
    pub sinr_db: f64,
    pub cqi: Cqi,
}

#[derive(Debug, Clone)]
pub struct Flow {
    pub id: usize,
    pub ue_id: usize,
    pub class: FlowClass,
    pub source: TrafficSource,
    pub queue: FlowQueue,
    pub pf_avg_rate: f64,
    pub fls: Option<FlsState>,
}

/// Independent random streams, one per stochastic subsystem.
#[derive(Debug, Clone)]
struct RngStreams {
    mobility: ChaCha8Rng,
    shadowing: ChaCha8Rng,
    fading: ChaCha8Rng,
    traffic: ChaCha8Rng,
}

impl RngStreams {
    fn new(seed: u64) -> Self {
        let stream = |id: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(id);
            rng
        };
        RngStreams {
            mobility: stream(1),
            shadowing: stream(2),
            fading: stream(3),
            traffic: stream(4),
        }
    }
}

/// Invariant violations observed during a run, by kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InvariantViolations {
    /// Per-flow bit or packet conservation failed.
    pub conservation: u64,
    /// Grants disagree with the PRB map.
    pub prb_assignment: u64,
    /// More bits delivered than the granted transport blocks carry.
    pub capacity: u64,
    /// A deadline-bounded packet was delivered late.
    pub deadline: u64,
    /// An FLS flow was granted more than its quota plus one PRB.
    pub fls_quota: u64,
    /// A UE left the cell disk.
    pub mobility: u64,
}

impl InvariantViolations {
    pub fn total(&self) -> u64 {
        self.conservation + self.prb_assignment + self.capacity + self.deadline + self.fls_quota + self.mobility
    }
}

/// What happened in one TTI.
#[derive(Debug, Clone, Default)]
pub struct TtiOutcome {
    pub decision: SchedulerDecision,
    pub delivered_bits: u64,
    pub dropped_packets: u64,
}

/// The state of one run.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    policy: Policy,
    clock: TtiClock,
    bandwidth: BandwidthProfile,
    channel: ChannelModel,
    mobility: MobilityModel,
    ues: Vec<UserEquipment>,
    flows: Vec<Flow>,
    rng: RngStreams,
    snapshots: Vec<FlowSnapshot>,
    exp_clamps: u64,
    violations: InvariantViolations,
}

impl Simulation {
    pub fn new(config: SimConfig, trace: Arc<VideoTrace>) -> Result<Self> {
        config.validate()?;
        let bandwidth = BandwidthProfile::new(config.bandwidth_hz)?;
        let layout = if config.hex_layout {
            CellLayout::hexagonal(config.cell_radius_m, config.tx_power_dbm)
        } else {
            CellLayout::isolated(config.cell_radius_m, config.tx_power_dbm)
        };
        let channel = ChannelModel {
            budget: LinkBudget::new(config.tx_power_dbm, bandwidth.prb_count, config.noise_figure_db),
            layout,
            fast_fading: config.fast_fading,
        };
        let mobility = MobilityModel {
            cell_radius_m: config.cell_radius_m,
            turn_epoch_mean_s: config.turn_epoch_mean_s,
        };
        let mut rng = RngStreams::new(config.seed);
        let dt = SimConfig::TTI_S;

        let mut ues = Vec::with_capacity(config.n_ues);
        let mut flows = Vec::new();
        let fls_coefficient = config.fls_filter_coefficient();
        for id in 0..config.n_ues {
            let state = mobility.initial_state(config.speed_mps(), &mut rng.mobility);
            let shadow_db = channel.draw_shadowing(config.shadowing_sigma_db, &mut rng.shadowing);
            ues.push(UserEquipment {
                id,
                mobility: state,
                shadow_db,
                sinr_db: f64::NEG_INFINITY,
                cqi: Cqi::MIN,
            });

            let mut kinds = Vec::with_capacity(3);
            if config.enable_video {
                let start = rand::Rng::random_range(&mut rng.traffic, 0..trace.frames.len());
                kinds.push(SourceKind::Video(VideoSource::new(Arc::clone(&trace), start)));
            }
            if config.enable_voip {
                kinds.push(SourceKind::Voip(VoipSource::new(
                    config.voip_on_mean_s,
                    config.voip_off_mean_s,
                    dt,
                    &mut rng.traffic,
                )));
            }
            if config.enable_best_effort {
                kinds.push(SourceKind::FullBuffer);
            }
            for kind in kinds {
                let source = TrafficSource::new(kind);
                let class = source.class();
                let queue = if class.is_real_time() {
                    FlowQueue::bounded(config.delay_budget_s)
                } else {
                    FlowQueue::full_buffer()
                };
                let fls = (config.scheduler == SchedulerKind::Fls && class.is_real_time())
                    .then(|| FlsState::new(fls_coefficient));
                flows.push(Flow {
                    id: flows.len(),
                    ue_id: id,
                    class,
                    source,
                    queue,
                    pf_avg_rate: RATE_FLOOR,
                    fls,
                });
            }
        }

        Ok(Simulation {
            policy: config.policy(),
            clock: TtiClock::default(),
            bandwidth,
            channel,
            mobility,
            ues,
            snapshots: Vec::with_capacity(flows.len()),
            flows,
            rng,
            exp_clamps: 0,
            violations: InvariantViolations::default(),
            config,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn clock(&self) -> &TtiClock {
        &self.clock
    }

    pub fn ues(&self) -> &[UserEquipment] {
        &self.ues
    }

    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn violations(&self) -> InvariantViolations {
        self.violations
    }

    /// Moves a UE, e.g. to pin it for a controlled experiment.
    pub fn set_ue_position(&mut self, ue_id: usize, position: Position) {
        self.ues[ue_id].mobility.position = position;
    }

    pub fn is_finished(&self) -> bool {
        self.clock.tti_index >= self.config.tti_count()
    }

    /// Advances the run by one TTI.
    pub fn advance_tti(&mut self) -> TtiOutcome {
        let dt = self.clock.tti_duration_s;
        let tti = self.clock.tti_index;
        let now = self.clock.now_s();
        let delivery_time = self.clock.end_s();

        for ue in &mut self.ues {
            ue.mobility = self.mobility.step(&ue.mobility, dt, &mut self.rng.mobility);
            if ue.mobility.position.norm() > self.config.cell_radius_m + 1e-9 {
                self.violations.mobility += 1;
            }
            ue.sinr_db = self
                .channel
                .compute_sinr(&ue.mobility.position, &ue.shadow_db, &mut self.rng.fading);
            ue.cqi = wideband_cqi(ue.sinr_db);
        }

        for flow in &mut self.flows {
            for packet in flow.source.arrivals(tti, dt, &mut self.rng.traffic) {
                flow.queue.push(packet);
            }
        }

        // Packets that would be late on delivery at the end of this TTI go now.
        let mut dropped_packets = 0;
        for flow in &mut self.flows {
            dropped_packets += flow.queue.drop_expired(delivery_time) as u64;
        }

        if self.clock.is_frame_boundary() {
            for flow in &mut self.flows {
                if let Some(fls) = flow.fls.as_mut() {
                    fls.quota_update(flow.queue.queued_bits());
                }
            }
        }

        self.snapshots.clear();
        self.snapshots.extend(self.flows.iter().map(|flow| FlowSnapshot {
            flow_id: flow.id,
            ue_id: flow.ue_id,
            class: flow.class,
            queue_bits: flow.queue.queued_bits(),
            hol_delay_s: flow.queue.head_of_line_delay(now),
            cqi: self.ues[flow.ue_id].cqi,
            pf_avg_rate: flow.pf_avg_rate,
            delay_budget_s: flow.queue.delay_budget_s(),
            fls_quota_bits: flow.fls.map_or(0.0, |f| f.residual_bits),
        }));
        let decision = allocate_subframe(&self.snapshots, self.policy, self.bandwidth.prb_count);
        self.exp_clamps += decision.exp_clamps;
        self.check_decision(&decision);

        let mut served = vec![0u64; self.flows.len()];
        let mut delivered_bits = 0;
        for grant in &decision.grants {
            let flow = &mut self.flows[grant.flow_id];
            let sent = flow.queue.deliver(grant.bits, delivery_time);
            if sent > grant.bits {
                self.violations.capacity += 1;
            }
            served[grant.flow_id] = sent;
            delivered_bits += sent;
            if let Some(fls) = flow.fls.as_mut() {
                fls.consume(grant.bits);
                if fls.frame_granted_bits as f64 > fls.prev_quota_bits + radio::max_prb_granule_bits() as f64 {
                    self.violations.fls_quota += 1;
                }
            }
            if let Some(budget) = flow.queue.delay_budget_s() {
                if flow.queue.counters.max_delay_s > budget {
                    self.violations.deadline += 1;
                }
            }
        }

        let window = self.config.pf_window_ttis;
        for (flow, &bits) in self.flows.iter_mut().zip(&served) {
            flow.pf_avg_rate = pf_average_update(flow.pf_avg_rate, bits as f64, window);
        }

        self.clock.tick();
        TtiOutcome {
            decision,
            delivered_bits,
            dropped_packets,
        }
    }

    fn check_decision(&mut self, decision: &SchedulerDecision) {
        if decision.prb_owner.len() != self.bandwidth.prb_count {
            self.violations.prb_assignment += 1;
        }
        let mut counted = vec![0usize; self.flows.len()];
        for &owner in decision.prb_owner.iter().flatten() {
            counted[owner] += 1;
        }
        let consistent = decision.grants.iter().all(|g| counted[g.flow_id] == g.n_prb)
            && decision.grants.iter().map(|g| g.n_prb).sum::<usize>() == decision.assigned_prbs();
        if !consistent {
            self.violations.prb_assignment += 1;
        }
        let capacity = decision.assigned_prbs() as u64 * radio::max_prb_granule_bits();
        if decision.total_bits() > capacity {
            self.violations.capacity += 1;
        }
    }

    /// Per-flow conservation check over the current state.
    pub fn check_conservation(&mut self) -> bool {
        let broken = self.flows.iter().filter(|f| !f.queue.is_conserved()).count() as u64;
        self.violations.conservation += broken;
        broken == 0
    }

    pub fn flow_records(&self) -> Vec<FlowRecord> {
        self.flows
            .iter()
            .map(|f| FlowRecord {
                ue_id: f.ue_id,
                class: f.class,
                delay_budget_s: f.queue.delay_budget_s(),
                counters: f.queue.counters,
            })
            .collect()
    }

    /// Runs the remaining TTIs and produces the report.
    pub fn run_to_end(mut self) -> KpiReport {
        while !self.is_finished() {
            self.advance_tti();
        }
        self.finish()
    }

    pub fn finish(mut self) -> KpiReport {
        self.check_conservation();
        let meta = RunMeta {
            scheduler: self.config.scheduler,
            n_ues: self.config.n_ues,
            seed: self.config.seed,
            duration_s: self.clock.tti_index as f64 * self.clock.tti_duration_s,
            bandwidth_hz: self.config.bandwidth_hz,
        };
        let diagnostics = Diagnostics {
            exp_clamps: self.exp_clamps,
            invariant_violations: self.violations.total(),
        };
        finalize_run(&self.flow_records(), meta, diagnostics)
    }
}

/// Runs one configuration with an already loaded trace.
pub fn run_with_trace(config: &SimConfig, trace: Arc<VideoTrace>) -> Result<KpiReport> {
    Ok(Simulation::new(config.clone(), trace)?.run_to_end())
}

/// Validates, loads the video trace and runs one configuration.
pub fn run(config: &SimConfig) -> Result<KpiReport> {
    config.validate()?;
    let trace = Arc::new(config.video.load()?);
    run_with_trace(config, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(scheduler: SchedulerKind, n_ues: usize) -> SimConfig {
        SimConfig {
            duration_s: 2.0,
            n_ues,
            scheduler,
            ..SimConfig::default()
        }
    }

    #[test]
    fn defaults_match_the_reference_scenario() {
        let c = SimConfig::default();
        assert_eq!(c.duration_s, 100.0);
        assert_eq!(c.bandwidth_hz, 10e6);
        assert_eq!(c.cell_radius_m, 1000.0);
        assert_eq!(c.ue_speed_kmph, 120.0);
        assert_eq!(c.delay_budget_s, 0.1);
        assert_eq!(c.video, VideoConfig::Synthetic { kbps: 242.0, fps: 30, frames: 300 });
        assert!((c.speed_mps() - 33.333_333).abs() < 1e-5);
        assert_eq!(c.tti_count(), 100_000);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn invalid_values_are_rejected() {
        let bad_bw = SimConfig { bandwidth_hz: 7e6, ..SimConfig::default() };
        assert!(matches!(bad_bw.validate(), Err(SimError::UnsupportedBandwidth(_))));
        let bad_beta = SimConfig {
            exp: ExpRuleParams { beta: 1.0, ..ExpRuleParams::default() },
            ..SimConfig::default()
        };
        let err = bad_beta.validate().unwrap_err().to_string();
        assert!(err.contains("exp_beta") && err.contains("(0, 1)"), "{err}");
        let bad_log = SimConfig {
            log: LogRuleParams { c_log: 1.0, ..LogRuleParams::default() },
            ..SimConfig::default()
        };
        assert!(bad_log.validate().is_err());
    }

    #[test]
    fn zero_ues_leave_everything_idle() {
        let config = short(SchedulerKind::Pf, 0);
        let trace = Arc::new(config.video.load().unwrap());
        let mut sim = Simulation::new(config, trace).unwrap();
        let out = sim.advance_tti();
        assert!(out.decision.grants.is_empty());
        assert_eq!(out.delivered_bits, 0);
        assert_eq!(sim.clock().tti_index, 1);
        let report = sim.finish();
        assert_eq!(report.all.throughput_bps, 0.0);
    }

    #[test]
    fn pinned_cell_centre_ue_gets_full_transport_blocks() {
        let config = SimConfig {
            n_ues: 1,
            scheduler: SchedulerKind::Pf,
            ue_speed_kmph: 0.0,
            fast_fading: false,
            shadowing_sigma_db: 0.0,
            enable_video: false,
            enable_voip: false,
            duration_s: 0.05,
            ..SimConfig::default()
        };
        let trace = Arc::new(config.video.load().unwrap());
        let mut sim = Simulation::new(config, trace).unwrap();
        sim.set_ue_position(0, Position::ORIGIN);
        while !sim.is_finished() {
            let out = sim.advance_tti();
            assert_eq!(sim.ues()[0].cqi, Cqi::MAX);
            assert_eq!(out.delivered_bits, 33_328);
        }
        let report = sim.finish();
        assert!((report.best_effort.throughput_bps - 33.328e6).abs() < 1e-3);
    }

    #[test]
    fn same_seed_same_successor_states() {
        let config = short(SchedulerKind::Exp, 5);
        let trace = Arc::new(config.video.load().unwrap());
        let mut a = Simulation::new(config.clone(), Arc::clone(&trace)).unwrap();
        let mut b = Simulation::new(config, trace).unwrap();
        for _ in 0..200 {
            let oa = a.advance_tti();
            let ob = b.advance_tti();
            assert_eq!(oa.decision, ob.decision);
        }
        for (ua, ub) in a.ues().iter().zip(b.ues()) {
            assert_eq!(ua.mobility, ub.mobility);
            assert_eq!(ua.sinr_db.to_bits(), ub.sinr_db.to_bits());
        }
    }

    #[test]
    fn turning_fading_off_leaves_mobility_untouched() {
        let base = short(SchedulerKind::Pf, 4);
        let trace = Arc::new(base.video.load().unwrap());
        let mut a = Simulation::new(base.clone(), Arc::clone(&trace)).unwrap();
        let mut b = Simulation::new(SimConfig { fast_fading: false, ..base }, trace).unwrap();
        for _ in 0..300 {
            a.advance_tti();
            b.advance_tti();
        }
        for (ua, ub) in a.ues().iter().zip(b.ues()) {
            assert_eq!(ua.mobility, ub.mobility);
            assert_eq!(ua.shadow_db, ub.shadow_db);
        }
    }

    #[test]
    fn every_scheduler_runs_clean() {
        for kind in SchedulerKind::ALL {
            let report = run(&short(kind, 8)).unwrap();
            assert_eq!(report.diagnostics.invariant_violations, 0, "{kind}");
            assert!(report.video.throughput_bps > 0.0);
            assert!((0.0..=1.0).contains(&report.video.plr));
        }
    }

    #[test]
    fn zero_duration_run() {
        let report = run(&SimConfig { duration_s: 0.0, ..short(SchedulerKind::Log, 3) }).unwrap();
        assert_eq!(report.all.throughput_bps, 0.0);
        assert_eq!(report.duration_s, 0.0);
    }
}
