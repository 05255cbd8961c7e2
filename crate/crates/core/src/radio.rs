//! Static downlink abstractions: PRB grid dimensioning, the CQI table and
//! the SINR -> CQI -> transport block size chain.
//!
//! Efficiencies are kept as integers in units of 1e-4 bit per resource
//! element so transport block sizes are exact integer arithmetic.

use std::fmt;

use crate::error::{Result, SimError};

pub const SUBCARRIER_SPACING_HZ: f64 = 15_000.0;
pub const SUBCARRIERS_PER_PRB: u32 = 12;
pub const PRB_BANDWIDTH_HZ: f64 = 180_000.0;

/// Resource elements per PRB pair per TTI left for data after control and
/// reference-signal overhead (120 of 168).
pub const DATA_RE_PER_PRB: u64 = 120;

/// Shannon attenuation used when mapping SINR to a CQI.
pub const SHANNON_ATTENUATION: f64 = 0.6;

/// Wideband CQI efficiencies (bits per RE) scaled by 1e4, CQI 1..=15.
const CQI_EFFICIENCY_E4: [u64; 15] = [
    1523, 2344, 3770, 6016, 8770, 11758, 14766, 19141, 24063, 27305, 33223, 39023, 45234, 51152,
    55547,
];

const EFFICIENCY_SCALE: u64 = 10_000;

/// Supported channel bandwidths and their PRB counts.
const BANDWIDTH_TABLE: [(f64, usize); 6] = [
    (1.4e6, 6),
    (3.0e6, 15),
    (5.0e6, 25),
    (10.0e6, 50),
    (15.0e6, 75),
    (20.0e6, 100),
];

/// A channel quality indicator in `1..=15`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cqi(u8);

impl Cqi {
    pub const MIN: Cqi = Cqi(1);
    pub const MAX: Cqi = Cqi(15);

    pub fn new(value: u8) -> Result<Self> {
        if (1..=15).contains(&value) {
            Ok(Cqi(value))
        } else {
            Err(SimError::CqiOutOfRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Spectral efficiency in bits per resource element.
    pub fn efficiency(self) -> f64 {
        self.efficiency_e4() as f64 / EFFICIENCY_SCALE as f64
    }

    fn efficiency_e4(self) -> u64 {
        CQI_EFFICIENCY_E4[usize::from(self.0) - 1]
    }

    /// Bits one PRB carries at this CQI before flooring, used as the
    /// per-PRB feasible rate by the scheduling metrics.
    pub fn bits_per_prb(self) -> f64 {
        self.efficiency() * DATA_RE_PER_PRB as f64
    }

    /// Transport block size in bits for `n_prb` PRBs in one TTI.
    pub fn transport_block_bits(self, n_prb: usize) -> u64 {
        self.efficiency_e4() * DATA_RE_PER_PRB * n_prb as u64 / EFFICIENCY_SCALE
    }

    /// Bits added to a transport block by granting PRB number `already + 1`.
    pub fn marginal_prb_bits(self, already: usize) -> u64 {
        self.transport_block_bits(already + 1) - self.transport_block_bits(already)
    }
}

impl fmt::Display for Cqi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Largest number of bits any single PRB can add to a transport block.
pub fn max_prb_granule_bits() -> u64 {
    (CQI_EFFICIENCY_E4[14] * DATA_RE_PER_PRB).div_ceil(EFFICIENCY_SCALE)
}

/// Channel bandwidth and its PRB grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthProfile {
    pub bandwidth_hz: f64,
    pub prb_count: usize,
    pub subcarrier_spacing_hz: f64,
    pub prb_bandwidth_hz: f64,
}

impl BandwidthProfile {
    pub fn new(bandwidth_hz: f64) -> Result<Self> {
        Ok(BandwidthProfile {
            bandwidth_hz,
            prb_count: prb_count(bandwidth_hz)?,
            subcarrier_spacing_hz: SUBCARRIER_SPACING_HZ,
            prb_bandwidth_hz: PRB_BANDWIDTH_HZ,
        })
    }
}

/// Standard PRB count for an LTE channel bandwidth.
pub fn prb_count(bandwidth_hz: f64) -> Result<usize> {
    BANDWIDTH_TABLE
        .iter()
        .find(|(bw, _)| (bw - bandwidth_hz).abs() < 1.0)
        .map(|&(_, n)| n)
        .ok_or(SimError::UnsupportedBandwidth(bandwidth_hz))
}

/// Maps a wideband SINR to the highest CQI whose efficiency fits under the
/// attenuated Shannon bound, clamped to `1..=15`.
pub fn sinr_to_cqi(sinr_db: f64) -> Cqi {
    let bound = SHANNON_ATTENUATION * (1.0 + 10f64.powf(sinr_db / 10.0)).log2();
    let fitting = CQI_EFFICIENCY_E4
        .iter()
        .take_while(|&&e| e as f64 / EFFICIENCY_SCALE as f64 <= bound)
        .count();
    Cqi(fitting.clamp(1, 15) as u8)
}

/// Transport block size for a raw CQI value.
pub fn transport_block_bits(cqi: u8, n_prb: usize) -> Result<u64> {
    Ok(Cqi::new(cqi)?.transport_block_bits(n_prb))
}

/// The TTI clock. A TTI is two slots; ten TTIs make a radio frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TtiClock {
    pub tti_index: u64,
    pub tti_duration_s: f64,
    pub slot_duration_s: f64,
    pub frame_length_ttis: u64,
}

impl Default for TtiClock {
    fn default() -> Self {
        TtiClock {
            tti_index: 0,
            tti_duration_s: 0.001,
            slot_duration_s: 0.0005,
            frame_length_ttis: 10,
        }
    }
}

impl TtiClock {
    /// Start time of the current TTI.
    pub fn now_s(&self) -> f64 {
        self.tti_index as f64 * self.tti_duration_s
    }

    /// End time of the current TTI, when its transport blocks complete.
    pub fn end_s(&self) -> f64 {
        (self.tti_index + 1) as f64 * self.tti_duration_s
    }

    pub fn is_frame_boundary(&self) -> bool {
        self.tti_index.is_multiple_of(self.frame_length_ttis)
    }

    pub fn frame_index(&self) -> u64 {
        self.tti_index / self.frame_length_ttis
    }

    pub fn tick(&mut self) {
        self.tti_index += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prb_counts_follow_the_bandwidth_table() {
        assert_eq!(prb_count(10e6).unwrap(), 50);
        assert_eq!(prb_count(1.4e6).unwrap(), 6);
        assert_eq!(prb_count(20e6).unwrap(), 100);
        let err = prb_count(7e6).unwrap_err();
        assert!(err.to_string().contains("unsupported bandwidth"));
        assert!(err.to_string().contains("7000000"));
    }

    #[test]
    fn prb_grid_fits_inside_the_channel() {
        for (bw, _) in BANDWIDTH_TABLE {
            let profile = BandwidthProfile::new(bw).unwrap();
            assert!(profile.prb_count as f64 * profile.prb_bandwidth_hz <= bw);
            assert_eq!(
                profile.prb_bandwidth_hz,
                SUBCARRIERS_PER_PRB as f64 * profile.subcarrier_spacing_hz
            );
        }
    }

    #[test]
    fn cqi_table_endpoints_and_monotonicity() {
        assert_eq!(Cqi::MIN.efficiency(), 0.1523);
        assert_eq!(Cqi::MAX.efficiency(), 5.5547);
        assert!(CQI_EFFICIENCY_E4.windows(2).all(|w| w[0] < w[1]));
        assert!(Cqi::new(0).is_err());
        assert!(Cqi::new(16).is_err());
    }

    #[test]
    fn sinr_mapping_examples() {
        assert_eq!(sinr_to_cqi(-20.0).value(), 1);
        assert_eq!(sinr_to_cqi(40.0).value(), 15);
        // 0.6 * log2(1 + 10^1.036) = 2.141 -> CQI 8 (1.9141); CQI 9 needs 2.4063.
        assert_eq!(sinr_to_cqi(10.36).value(), 8);
    }

    #[test]
    fn transport_block_examples() {
        assert_eq!(transport_block_bits(15, 50).unwrap(), 33_328);
        assert_eq!(transport_block_bits(1, 50).unwrap(), 913);
        assert_eq!(transport_block_bits(8, 0).unwrap(), 0);
        assert_eq!(transport_block_bits(0, 5), Err(SimError::CqiOutOfRange(0)));
        assert_eq!(transport_block_bits(16, 5), Err(SimError::CqiOutOfRange(16)));
    }

    #[test]
    fn marginal_bits_never_exceed_the_granule() {
        let granule = max_prb_granule_bits();
        assert_eq!(granule, 667);
        for c in 1..=15 {
            let cqi = Cqi::new(c).unwrap();
            for n in 0..100 {
                assert!(cqi.marginal_prb_bits(n) <= granule);
            }
        }
    }

    #[test]
    fn every_cqi_is_reachable_between_minus_30_and_40_db() {
        let mut seen = [false; 15];
        let mut sinr = -30.0;
        while sinr <= 40.0 {
            seen[usize::from(sinr_to_cqi(sinr).value()) - 1] = true;
            sinr += 0.01;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn clock_frames() {
        let mut clock = TtiClock::default();
        assert_eq!(clock.tti_duration_s, 2.0 * clock.slot_duration_s);
        assert!(clock.is_frame_boundary());
        clock.tick();
        assert!(!clock.is_frame_boundary());
        for _ in 0..9 {
            clock.tick();
        }
        assert!(clock.is_frame_boundary());
        assert_eq!(clock.frame_index(), 1);
    }

    proptest! {
        #[test]
        fn tbs_monotone_in_cqi_and_prbs(c in 1u8..=14, n in 0usize..200) {
            let lo = Cqi::new(c).unwrap();
            let hi = Cqi::new(c + 1).unwrap();
            prop_assert!(lo.transport_block_bits(n) <= hi.transport_block_bits(n));
            prop_assert!(lo.transport_block_bits(n) <= lo.transport_block_bits(n + 1));
        }

        #[test]
        fn tbs_floor_subadditivity(c in 1u8..=15, a in 0usize..200, b in 0usize..200) {
            let cqi = Cqi::new(c).unwrap();
            let joint = cqi.transport_block_bits(a + b);
            prop_assert!(joint + 1 >= cqi.transport_block_bits(a) + cqi.transport_block_bits(b));
        }

        #[test]
        fn sinr_to_cqi_monotone(x in -50.0f64..60.0, d in 0.0f64..20.0) {
            prop_assert!(sinr_to_cqi(x) <= sinr_to_cqi(x + d));
        }
    }
}
