//! `key = value` scenario files.
//!
//! ```text
//! # 30 UEs under the EXP rule
//! n_ues = 30
//! scheduler = EXP
//! ```
//!
//! Keys not present keep their defaults. Every key is validated.

use std::path::PathBuf;

use ltesim_core::{ExpVariant, SchedulerKind, SimConfig, SimError, VideoConfig};

use crate::error::HarnessError;

/// Every key understood by [`parse_config`].
pub const KEYS: &[&str] = &[
    "duration_s",
    "bandwidth_mhz",
    "frame_structure",
    "cell_radius_m",
    "ue_speed_kmph",
    "n_ues",
    "scheduler",
    "seed",
    "video_trace",
    "video_kbps",
    "video_fps",
    "video_frames",
    "delay_budget_s",
    "enable_video",
    "enable_voip",
    "enable_best_effort",
    "voip_on_mean_s",
    "voip_off_mean_s",
    "pf_window_ttis",
    "exp_variant",
    "exp_beta",
    "exp_eta",
    "exp_a",
    "log_c",
    "log_a",
    "fls_coefficient",
    "fast_fading",
    "shadowing_sigma_db",
    "tx_power_dbm",
    "noise_figure_db",
    "hex_layout",
    "turn_epoch_mean_s",
];

pub fn parse_config(text: &str) -> Result<SimConfig, HarnessError> {
    let mut config = SimConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| HarnessError::Syntax {
            line: i + 1,
            message: format!("expected `key = value`, found `{line}`"),
        })?;
        apply(&mut config, key.trim(), value.trim())?;
    }
    config.validate()?;
    Ok(config)
}

/// Sets one key on `config`, parsing `value` for that key's type.
pub fn apply(config: &mut SimConfig, key: &str, value: &str) -> Result<(), SimError> {
    match key {
        "duration_s" => config.duration_s = number(key, value)?,
        "bandwidth_mhz" => config.bandwidth_hz = number::<f64>(key, value)? * 1e6,
        "frame_structure" => {
            if !value.eq_ignore_ascii_case("fdd") {
                return Err(invalid(key, format!("only FDD is supported, got `{value}`")));
            }
        }
        "cell_radius_m" => config.cell_radius_m = number(key, value)?,
        "ue_speed_kmph" => config.ue_speed_kmph = number(key, value)?,
        "n_ues" => config.n_ues = number(key, value)?,
        "scheduler" => config.scheduler = value.parse::<SchedulerKind>().map_err(|e| invalid(key, e))?,
        "seed" => config.seed = number(key, value)?,
        "video_trace" => config.video = VideoConfig::TraceFile(PathBuf::from(value)),
        "video_kbps" | "video_fps" | "video_frames" => {
            let (mut kbps, mut fps, mut frames) = match config.video {
                VideoConfig::Synthetic { kbps, fps, frames } => (kbps, fps, frames),
                VideoConfig::TraceFile(_) => {
                    return Err(invalid(key, "cannot be combined with `video_trace`"));
                }
            };
            match key {
                "video_kbps" => kbps = number(key, value)?,
                "video_fps" => fps = number(key, value)?,
                _ => frames = number(key, value)?,
            }
            config.video = VideoConfig::Synthetic { kbps, fps, frames };
        }
        "delay_budget_s" => config.delay_budget_s = number(key, value)?,
        "enable_video" => config.enable_video = flag(key, value)?,
        "enable_voip" => config.enable_voip = flag(key, value)?,
        "enable_best_effort" => config.enable_best_effort = flag(key, value)?,
        "voip_on_mean_s" => config.voip_on_mean_s = number(key, value)?,
        "voip_off_mean_s" => config.voip_off_mean_s = number(key, value)?,
        "pf_window_ttis" => config.pf_window_ttis = number(key, value)?,
        "exp_variant" => {
            config.exp.variant = match value.to_ascii_lowercase().as_str() {
                "waiting_time" | "w" => ExpVariant::WaitingTime,
                "queue_length" | "q" => ExpVariant::QueueLength,
                _ => return Err(invalid(key, "expected `waiting_time` or `queue_length`")),
            }
        }
        "exp_beta" => config.exp.beta = number(key, value)?,
        "exp_eta" => config.exp.eta = number(key, value)?,
        "exp_a" => config.exp.a_numerator = number(key, value)?,
        "log_c" => config.log.c_log = number(key, value)?,
        "log_a" => config.log.a_numerator = number(key, value)?,
        "fls_coefficient" => config.fls_coefficient = Some(number(key, value)?),
        "fast_fading" => config.fast_fading = flag(key, value)?,
        "shadowing_sigma_db" => config.shadowing_sigma_db = number(key, value)?,
        "tx_power_dbm" => config.tx_power_dbm = number(key, value)?,
        "noise_figure_db" => config.noise_figure_db = number(key, value)?,
        "hex_layout" => config.hex_layout = flag(key, value)?,
        "turn_epoch_mean_s" => {
            config.turn_epoch_mean_s = if value.eq_ignore_ascii_case("none") {
                None
            } else {
                Some(number(key, value)?)
            }
        }
        _ => return Err(SimError::UnknownKey(key.to_string())),
    }
    Ok(())
}

fn invalid(key: &str, message: impl Into<String>) -> SimError {
    SimError::InvalidValue {
        key: key.to_string(),
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, SimError> {
    value
        .parse()
        .map_err(|_| invalid(key, format!("`{value}` is not a valid {}", std::any::type_name::<T>())))
}

fn flag(key: &str, value: &str) -> Result<bool, SimError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(invalid(key, format!("`{value}` is not a boolean"))),
    }
}
