//! TTI-granular LTE downlink simulator.
//!
//! The crate models a single serving cell with six interfering neighbours,
//! UEs moving under the random direction model, and per-UE video, VoIP and
//! best-effort flows. Four schedulers share the PRB allocation kernel in
//! [`sched`]: proportional fair, the EXP rule, the LOG rule and the
//! two-level frame level scheduler (FLS).
//!
//! ```
//! use ltesim_core::{run, SchedulerKind, SimConfig};
//!
//! let config = SimConfig {
//!     duration_s: 0.5,
//!     n_ues: 4,
//!     scheduler: SchedulerKind::Fls,
//!     ..SimConfig::default()
//! };
//! let report = run(&config).unwrap();
//! assert!(report.video.plr <= 1.0);
//! ```

pub mod channel;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod radio;
pub mod sched;
pub mod traffic;

pub use engine::{run, run_with_trace, InvariantViolations, SimConfig, Simulation, TtiOutcome, VideoConfig};
pub use error::{Result, SimError};
pub use metrics::{aggregate, jain_index, ClassKpi, KpiReport, KpiScope};
pub use radio::{BandwidthProfile, Cqi, TtiClock};
pub use sched::{allocate_subframe, ExpRuleParams, ExpVariant, FlowSnapshot, LogRuleParams, Policy, SchedulerKind};
pub use traffic::{FlowClass, VideoTrace};
