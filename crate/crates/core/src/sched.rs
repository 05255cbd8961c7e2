//! Downlink PRB allocation under four policies.
//!
//! PF, EXP rule and LOG rule share one greedy loop: PRBs are handed out in
//! index order, each to the schedulable flow with the largest metric (ties
//! go to the lowest flow id), and the winner's pending bits and metric are
//! refreshed before the next PRB. FLS runs the same loop with PF metrics in
//! two passes: real-time flows up to their frame quota, then best effort.
//!
//! Best-effort flows are always scored with the PF metric, whatever the
//! policy; the EXP and LOG weightings apply to real-time flows only.

use std::fmt;
use std::str::FromStr;

use crate::radio::Cqi;
use crate::traffic::FlowClass;

/// Floor applied to PF average rates, in bits per TTI.
pub const RATE_FLOOR: f64 = 1.0;
pub const DEFAULT_PF_WINDOW_TTIS: f64 = 1000.0;
/// Largest exponent evaluated by the EXP rule.
pub const EXP_EXPONENT_CAP: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchedulerKind {
    Pf,
    Exp,
    Log,
    Fls,
}

impl SchedulerKind {
    pub const ALL: [SchedulerKind; 4] = [
        SchedulerKind::Pf,
        SchedulerKind::Exp,
        SchedulerKind::Log,
        SchedulerKind::Fls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchedulerKind::Pf => "PF",
            SchedulerKind::Exp => "EXP",
            SchedulerKind::Log => "LOG",
            SchedulerKind::Fls => "FLS",
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchedulerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "PF" => Ok(SchedulerKind::Pf),
            "EXP" => Ok(SchedulerKind::Exp),
            "LOG" => Ok(SchedulerKind::Log),
            "FLS" => Ok(SchedulerKind::Fls),
            other => Err(format!("unknown scheduler `{other}` (expected PF, EXP, LOG or FLS)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpVariant {
    /// Weights by queue length in bits.
    QueueLength,
    /// Weights by head-of-line delay in seconds.
    WaitingTime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpRuleParams {
    pub variant: ExpVariant,
    pub beta: f64,
    pub eta: f64,
    /// `a_i = a_numerator / τ_i`.
    pub a_numerator: f64,
}

impl Default for ExpRuleParams {
    fn default() -> Self {
        ExpRuleParams {
            variant: ExpVariant::WaitingTime,
            beta: 0.5,
            eta: 0.5,
            a_numerator: 6.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRuleParams {
    pub c_log: f64,
    /// `a_i = a_numerator / τ_i`.
    pub a_numerator: f64,
}

impl Default for LogRuleParams {
    fn default() -> Self {
        LogRuleParams {
            c_log: 1.1,
            a_numerator: 5.0,
        }
    }
}

/// A scheduling policy with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    Pf,
    Exp(ExpRuleParams),
    Log(LogRuleParams),
    Fls,
}

impl Policy {
    pub fn kind(&self) -> SchedulerKind {
        match self {
            Policy::Pf => SchedulerKind::Pf,
            Policy::Exp(_) => SchedulerKind::Exp,
            Policy::Log(_) => SchedulerKind::Log,
            Policy::Fls => SchedulerKind::Fls,
        }
    }
}

/// Scheduler view of one flow at the start of a TTI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSnapshot {
    pub flow_id: usize,
    pub ue_id: usize,
    pub class: FlowClass,
    /// `u64::MAX` marks an always-backlogged flow.
    pub queue_bits: u64,
    pub hol_delay_s: f64,
    pub cqi: Cqi,
    pub pf_avg_rate: f64,
    /// `None` for flows without a deadline.
    pub delay_budget_s: Option<f64>,
    /// Residual FLS frame quota; only read by the FLS policy.
    pub fls_quota_bits: f64,
}

impl FlowSnapshot {
    /// Feasible service rate per PRB in bits per TTI at the reported CQI.
    pub fn feasible_rate(&self) -> f64 {
        self.cqi.bits_per_prb()
    }

    pub fn is_real_time(&self) -> bool {
        self.delay_budget_s.is_some()
    }
}

pub fn pf_metric(rate: f64, avg_rate: f64) -> f64 {
    rate / avg_rate
}

/// Result of one EXP-rule evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpMetric {
    pub value: f64,
    /// The exponent exceeded [`EXP_EXPONENT_CAP`] and was clamped.
    pub clamped: bool,
}

/// `γ·μ·exp(a·x / (β + x̄^η))`, with `x̄` the mean of `a_j·x_j` over the
/// real-time flows (see [`exp_mean_term`]).
pub fn exp_rule_metric(gamma: f64, rate: f64, a: f64, x: f64, x_mean: f64, beta: f64, eta: f64) -> ExpMetric {
    let exponent = a * x / (beta + x_mean.powf(eta));
    let clamped = exponent > EXP_EXPONENT_CAP;
    ExpMetric {
        value: gamma * rate * exponent.min(EXP_EXPONENT_CAP).exp(),
        clamped,
    }
}

/// `(1/N)·Σ a_j·x_j` over `(a_j, x_j)` pairs; 0 for no flows.
pub fn exp_mean_term(terms: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let (sum, n) = terms
        .into_iter()
        .fold((0.0, 0usize), |(s, n), (a, x)| (s + a * x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// `b·μ·ln(c + a·w)`.
pub fn log_rule_metric(b: f64, rate: f64, c_log: f64, a: f64, hol_delay_s: f64) -> f64 {
    b * rate * (c_log + a * hol_delay_s).ln()
}

/// Exponential moving average of served bits, floored at [`RATE_FLOOR`].
pub fn pf_average_update(avg_rate: f64, served_bits: f64, window_ttis: f64) -> f64 {
    debug_assert!(window_ttis >= 1.0);
    let alpha = 1.0 / window_ttis;
    ((1.0 - alpha) * avg_rate + alpha * served_bits).max(RATE_FLOOR)
}

/// Upper-level FLS filter for one real-time flow.
///
/// The quota for frame `k` is a first-order low-pass of the queue level,
/// `u(k) = c·q(k) + (1 − c)·u(k − 1)`, clamped to `[0, q(k)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlsState {
    pub coefficient: f64,
    pub prev_quota_bits: f64,
    pub residual_bits: f64,
    /// Bits granted since the last quota refresh.
    pub frame_granted_bits: u64,
}

impl FlsState {
    pub fn new(coefficient: f64) -> Self {
        debug_assert!(coefficient > 0.0 && coefficient <= 1.0);
        FlsState {
            coefficient,
            prev_quota_bits: 0.0,
            residual_bits: 0.0,
            frame_granted_bits: 0,
        }
    }

    /// Filter coefficient whose impulse response decays to 1% after
    /// `budget_frames` frames.
    pub fn coefficient_for_budget(budget_frames: f64) -> f64 {
        1.0 - 0.01f64.powf(1.0 / budget_frames.max(1.0))
    }

    /// Frame-boundary update; returns the new quota.
    pub fn quota_update(&mut self, queue_bits: u64) -> f64 {
        let q = queue_bits as f64;
        let u = (self.coefficient * q + (1.0 - self.coefficient) * self.prev_quota_bits).clamp(0.0, q);
        self.prev_quota_bits = u;
        self.residual_bits = u;
        self.frame_granted_bits = 0;
        u
    }

    /// Charges bits granted during the frame against the residual quota.
    pub fn consume(&mut self, granted_bits: u64) {
        self.residual_bits = (self.residual_bits - granted_bits as f64).max(0.0);
        self.frame_granted_bits += granted_bits;
    }
}

/// Resources granted to one flow in one TTI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grant {
    pub flow_id: usize,
    pub ue_id: usize,
    pub cqi: Cqi,
    pub n_prb: usize,
    /// Transport block size of the granted PRBs.
    pub bits: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SchedulerDecision {
    /// Index into the snapshot slice for each PRB; `None` if unused.
    pub prb_owner: Vec<Option<usize>>,
    /// One entry per flow that received PRBs, in snapshot order.
    pub grants: Vec<Grant>,
    /// EXP exponent clamps during this decision.
    pub exp_clamps: u64,
}

impl SchedulerDecision {
    pub fn grant_for(&self, flow_id: usize) -> Option<&Grant> {
        self.grants.iter().find(|g| g.flow_id == flow_id)
    }

    pub fn total_bits(&self) -> u64 {
        self.grants.iter().map(|g| g.bits).sum()
    }

    pub fn assigned_prbs(&self) -> usize {
        self.prb_owner.iter().filter(|o| o.is_some()).count()
    }
}

struct Allocation<'a> {
    flows: &'a [FlowSnapshot],
    policy: Policy,
    /// Bits still wanted this TTI; `u64::MAX` = unlimited.
    pending: Vec<u64>,
    prbs: Vec<usize>,
    metric: Vec<f64>,
    exp_clamps: u64,
    exp_mean: f64,
    real_time_count: usize,
}

impl<'a> Allocation<'a> {
    fn new(flows: &'a [FlowSnapshot], policy: Policy) -> Self {
        let pending = flows
            .iter()
            .map(|f| match policy {
                Policy::Fls if f.is_real_time() => {
                    f.queue_bits.min(f.fls_quota_bits.max(0.0).ceil() as u64)
                }
                _ => f.queue_bits,
            })
            .collect();
        let mut alloc = Allocation {
            flows,
            policy,
            pending,
            prbs: vec![0; flows.len()],
            metric: vec![0.0; flows.len()],
            exp_clamps: 0,
            exp_mean: 0.0,
            real_time_count: flows.iter().filter(|f| f.is_real_time()).count(),
        };
        alloc.refresh_all();
        alloc
    }

    fn mean_term(&self, params: &ExpRuleParams) -> f64 {
        exp_mean_term(
            self.flows
                .iter()
                .zip(&self.pending)
                .filter(|(f, _)| f.is_real_time())
                .map(|(f, &pending)| (exp_weight(f, params.a_numerator), exp_x(f, pending, params.variant))),
        )
    }

    fn refresh_all(&mut self) {
        self.exp_mean = match self.policy {
            Policy::Exp(params) if self.real_time_count > 0 => self.mean_term(&params),
            _ => 0.0,
        };
        for i in 0..self.flows.len() {
            self.metric[i] = self.compute(i);
        }
    }

    fn compute(&mut self, i: usize) -> f64 {
        let flow = &self.flows[i];
        let rate = flow.feasible_rate();
        let avg = flow.pf_avg_rate.max(RATE_FLOOR);
        if !flow.is_real_time() {
            return pf_metric(rate, avg);
        }
        match self.policy {
            Policy::Pf | Policy::Fls => pf_metric(rate, avg),
            Policy::Exp(params) => {
                let m = exp_rule_metric(
                    1.0 / avg,
                    rate,
                    exp_weight(flow, params.a_numerator),
                    exp_x(flow, self.pending[i], params.variant),
                    self.exp_mean,
                    params.beta,
                    params.eta,
                );
                if m.clamped {
                    self.exp_clamps += 1;
                }
                m.value
            }
            Policy::Log(params) => log_rule_metric(
                1.0 / avg,
                rate,
                params.c_log,
                deadline_weight(flow, params.a_numerator),
                flow.hol_delay_s,
            ),
        }
    }

    /// Highest-metric flow with pending bits. Under FLS best-effort flows
    /// are only eligible once no real-time flow is.
    fn winner(&self, order: &[usize]) -> Option<usize> {
        let pick = |real_time: Option<bool>| {
            let mut best: Option<usize> = None;
            for &i in order {
                if self.pending[i] == 0 {
                    continue;
                }
                if let Some(rt) = real_time {
                    if self.flows[i].is_real_time() != rt {
                        continue;
                    }
                }
                if best.is_none_or(|b| self.metric[i] > self.metric[b]) {
                    best = Some(i);
                }
            }
            best
        };
        match self.policy {
            Policy::Fls => pick(Some(true)).or_else(|| pick(Some(false))),
            _ => pick(None),
        }
    }

    fn grant_prb(&mut self, i: usize) {
        let bits = self.flows[i].cqi.marginal_prb_bits(self.prbs[i]);
        self.prbs[i] += 1;
        if self.pending[i] != u64::MAX {
            self.pending[i] = self.pending[i].saturating_sub(bits);
        }
        match self.policy {
            Policy::Exp(params) if params.variant == ExpVariant::QueueLength => self.refresh_all(),
            _ => {
                self.metric[i] = self.compute(i);
            }
        }
    }
}

fn deadline_weight(flow: &FlowSnapshot, numerator: f64) -> f64 {
    flow.delay_budget_s.map_or(0.0, |tau| numerator / tau)
}

fn exp_weight(flow: &FlowSnapshot, numerator: f64) -> f64 {
    deadline_weight(flow, numerator)
}

fn exp_x(flow: &FlowSnapshot, pending: u64, variant: ExpVariant) -> f64 {
    match variant {
        ExpVariant::QueueLength => pending as f64,
        ExpVariant::WaitingTime => flow.hol_delay_s,
    }
}

/// Assigns `n_prb` PRBs for one TTI.
pub fn allocate_subframe(flows: &[FlowSnapshot], policy: Policy, n_prb: usize) -> SchedulerDecision {
    if flows.is_empty() {
        return SchedulerDecision {
            prb_owner: vec![None; n_prb],
            ..SchedulerDecision::default()
        };
    }
    let mut order: Vec<usize> = (0..flows.len()).collect();
    order.sort_by_key(|&i| flows[i].flow_id);

    let mut alloc = Allocation::new(flows, policy);
    let mut prb_owner = Vec::with_capacity(n_prb);
    for _ in 0..n_prb {
        let owner = alloc.winner(&order);
        if let Some(i) = owner {
            alloc.grant_prb(i);
        }
        prb_owner.push(owner);
    }

    let grants = flows
        .iter()
        .zip(&alloc.prbs)
        .filter(|(_, &n)| n > 0)
        .map(|(f, &n)| Grant {
            flow_id: f.flow_id,
            ue_id: f.ue_id,
            cqi: f.cqi,
            n_prb: n,
            bits: f.cqi.transport_block_bits(n),
        })
        .collect();
    SchedulerDecision {
        prb_owner,
        grants,
        exp_clamps: alloc.exp_clamps,
    }
}
