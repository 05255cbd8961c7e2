//! Vehicular propagation and mobility.
//!
//! UEs move with the random direction model inside a disk around the serving
//! eNodeB. The downlink SINR combines distance path loss, per-run log-normal
//! shadowing per (UE, site) pair and per-TTI Rayleigh block fading, with the
//! six first-tier hexagonal neighbours interfering at full load.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Exp, Exp1, Normal};

use crate::radio::{self, Cqi, PRB_BANDWIDTH_HZ};

/// Distances below this are clamped before evaluating the path-loss model.
pub const MIN_DISTANCE_M: f64 = 10.0;
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance_to(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Uniform draw over a disk of the given radius centred on the origin.
    pub fn uniform_in_disk<R: Rng + ?Sized>(radius_m: f64, rng: &mut R) -> Self {
        let r = radius_m * rng.random::<f64>().sqrt();
        let theta = rng.random_range(0.0..TAU);
        Position::new(r * theta.cos(), r * theta.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityState {
    pub position: Position,
    /// Radians in `[0, 2π)`.
    pub heading: f64,
    pub speed_mps: f64,
    /// Time left until the next timed heading re-draw.
    pub time_to_turn_s: f64,
}

/// Random direction mobility bounded by the cell disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityModel {
    pub cell_radius_m: f64,
    /// Mean of the exponential epoch between heading re-draws; `None`
    /// disables timed turns so headings change only at the boundary.
    pub turn_epoch_mean_s: Option<f64>,
}

impl MobilityModel {
    pub fn initial_state<R: Rng + ?Sized>(&self, speed_mps: f64, rng: &mut R) -> MobilityState {
        let position = Position::uniform_in_disk(self.cell_radius_m, rng);
        let heading = rng.random_range(0.0..TAU);
        MobilityState {
            position,
            heading,
            speed_mps,
            time_to_turn_s: self.draw_epoch(rng),
        }
    }

    fn draw_epoch<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.turn_epoch_mean_s {
            Some(mean) if mean > 0.0 => Exp::new(1.0 / mean)
                .expect("positive rate")
                .sample(rng),
            _ => f64::INFINITY,
        }
    }

    /// Advances one UE by `dt` seconds.
    ///
    /// A step that leaves the disk is mirrored radially back inside and the
    /// heading is re-drawn uniformly over the inward half-plane, so the UE
    /// never escapes the cell.
    pub fn step<R: Rng + ?Sized>(&self, state: &MobilityState, dt: f64, rng: &mut R) -> MobilityState {
        debug_assert!(dt > 0.0);
        let mut next = *state;
        let radius = self.cell_radius_m;

        let travel = state.speed_mps * dt;
        if travel > 0.0 {
            let mut pos = Position::new(
                state.position.x + travel * state.heading.cos(),
                state.position.y + travel * state.heading.sin(),
            );
            let r = pos.norm();
            if r > radius {
                let mirrored = (2.0 * radius - r).clamp(0.0, radius);
                let scale = mirrored / r;
                pos = Position::new(pos.x * scale, pos.y * scale);
                let inward = (-pos.y).atan2(-pos.x);
                let inward = if mirrored == 0.0 {
                    (-state.position.y).atan2(-state.position.x)
                } else {
                    inward
                };
                next.heading = wrap_angle(inward + rng.random_range(-FRAC_PI_2..FRAC_PI_2));
            }
            next.position = pos;
        }

        next.time_to_turn_s -= dt;
        while next.time_to_turn_s <= 0.0 {
            next.heading = rng.random_range(0.0..TAU);
            next.time_to_turn_s += self.draw_epoch(rng);
        }
        next
    }
}

fn wrap_angle(theta: f64) -> f64 {
    let wrapped = theta.rem_euclid(TAU);
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Urban macro path gain: `-(128.1 + 37.6 log10(d_km)) + shadow + fade`.
pub fn link_gain_db(distance_m: f64, shadow_db: f64, fade_db: f64) -> f64 {
    let d_km = distance_m.max(MIN_DISTANCE_M) / 1000.0;
    -(128.1 + 37.6 * d_km.log10()) + shadow_db + fade_db
}

/// Sites of the simulated network. Only the serving cell carries UEs.
#[derive(Debug, Clone, PartialEq)]
pub struct CellLayout {
    pub serving_site: Position,
    pub interferer_sites: Vec<Position>,
    pub tx_power_dbm: f64,
    pub inter_site_distance_m: f64,
}

impl CellLayout {
    /// Serving site at the origin and six first-tier neighbours at
    /// `√3 × cell_radius` spaced 60° apart.
    pub fn hexagonal(cell_radius_m: f64, tx_power_dbm: f64) -> Self {
        let isd = 3f64.sqrt() * cell_radius_m;
        let interferer_sites = (0..6)
            .map(|k| {
                let angle = f64::from(k) * PI / 3.0;
                Position::new(isd * angle.cos(), isd * angle.sin())
            })
            .collect();
        CellLayout {
            serving_site: Position::ORIGIN,
            interferer_sites,
            tx_power_dbm,
            inter_site_distance_m: isd,
        }
    }

    pub fn isolated(cell_radius_m: f64, tx_power_dbm: f64) -> Self {
        CellLayout {
            serving_site: Position::ORIGIN,
            interferer_sites: Vec::new(),
            tx_power_dbm,
            inter_site_distance_m: 3f64.sqrt() * cell_radius_m,
        }
    }

    /// Serving site first, then interferers.
    pub fn sites(&self) -> impl Iterator<Item = &Position> {
        std::iter::once(&self.serving_site).chain(self.interferer_sites.iter())
    }

    pub fn site_count(&self) -> usize {
        1 + self.interferer_sites.len()
    }
}

/// Per-PRB transmit power and noise floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub tx_power_per_prb_dbm: f64,
    pub noise_per_prb_dbm: f64,
}

impl LinkBudget {
    pub fn new(tx_power_dbm: f64, prb_count: usize, noise_figure_db: f64) -> Self {
        LinkBudget {
            tx_power_per_prb_dbm: tx_power_dbm - 10.0 * (prb_count as f64).log10(),
            noise_per_prb_dbm: THERMAL_NOISE_DBM_PER_HZ
                + 10.0 * PRB_BANDWIDTH_HZ.log10()
                + noise_figure_db,
        }
    }
}

/// SINR in dB from received powers in dBm. A noise of `-inf` dBm means a
/// noiseless receiver.
pub fn sinr_from_powers_db(
    serving_dbm: f64,
    interferers_dbm: impl IntoIterator<Item = f64>,
    noise_dbm: f64,
) -> f64 {
    let interference: f64 = interferers_dbm.into_iter().map(dbm_to_mw).sum();
    10.0 * (dbm_to_mw(serving_dbm) / (interference + dbm_to_mw(noise_dbm))).log10()
}

fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Per-run channel configuration shared by every UE of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    pub layout: CellLayout,
    pub budget: LinkBudget,
    pub fast_fading: bool,
}

impl ChannelModel {
    /// Draws a Rayleigh power gain in dB (unit mean in linear scale).
    pub fn rayleigh_fade_db<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        let power: f64 = Exp1.sample(rng);
        10.0 * power.log10()
    }

    /// Downlink SINR of a UE at `position`. `shadow_db` holds one value per
    /// site in [`CellLayout::sites`] order. Fading is re-drawn per link.
    pub fn compute_sinr<R: Rng + ?Sized>(&self, position: &Position, shadow_db: &[f64], rng: &mut R) -> f64 {
        debug_assert_eq!(shadow_db.len(), self.layout.site_count());
        let mut received = self.layout.sites().zip(shadow_db).map(|(site, &shadow)| {
            let fade = if self.fast_fading {
                Self::rayleigh_fade_db(rng)
            } else {
                0.0
            };
            self.budget.tx_power_per_prb_dbm + link_gain_db(position.distance_to(site), shadow, fade)
        });
        let serving = received.next().expect("serving site");
        sinr_from_powers_db(serving, received, self.budget.noise_per_prb_dbm)
    }

    /// One log-normal shadowing value per site, fixed for the run.
    pub fn draw_shadowing<R: Rng + ?Sized>(&self, sigma_db: f64, rng: &mut R) -> Vec<f64> {
        if sigma_db <= 0.0 {
            return vec![0.0; self.layout.site_count()];
        }
        let normal = Normal::new(0.0, sigma_db).expect("finite sigma");
        (0..self.layout.site_count()).map(|_| normal.sample(rng)).collect()
    }
}

/// Wideband CQI report, delivered to the scheduler without delay.
pub fn wideband_cqi(sinr_db: f64) -> Cqi {
    radio::sinr_to_cqi(sinr_db)
}
