//! Per-UE traffic: trace-driven video, ON/OFF VoIP and full-buffer best
//! effort, plus the FIFO flow queues with deadline bookkeeping.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Result, SimError};

/// Packetization cap for video frames.
pub const MAX_PACKET_BYTES: u64 = 1500;
pub const VOIP_PACKET_BYTES: u64 = 32;
pub const VOIP_PERIOD_S: f64 = 0.020;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlowClass {
    Video,
    Voip,
    BestEffort,
}

impl FlowClass {
    pub const ALL: [FlowClass; 3] = [FlowClass::Video, FlowClass::Voip, FlowClass::BestEffort];

    pub fn name(self) -> &'static str {
        match self {
            FlowClass::Video => "video",
            FlowClass::Voip => "voip",
            FlowClass::BestEffort => "best_effort",
        }
    }

    /// Video and VoIP carry a delay budget; best effort does not.
    pub fn is_real_time(self) -> bool {
        !matches!(self, FlowClass::BestEffort)
    }
}

impl fmt::Display for FlowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    pub id: u64,
    pub size_bits: u64,
    pub arrival_time_s: f64,
    pub flow_class: FlowClass,
}

/// Cumulative per-flow accounting. Bit counters include partially
/// transmitted packets; a packet counts as delivered once its last bit is.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FlowCounters {
    pub arrived_packets: u64,
    pub arrived_bits: u64,
    pub delivered_packets: u64,
    pub delivered_bits: u64,
    pub dropped_packets: u64,
    pub dropped_bits: u64,
    pub delay_sum_s: f64,
    pub max_delay_s: f64,
}

/// FIFO queue of one flow.
#[derive(Debug, Clone)]
pub struct FlowQueue {
    packets: VecDeque<Packet>,
    /// Bits of the front packet already transmitted.
    front_sent_bits: u64,
    queued_bits: u64,
    delay_budget_s: Option<f64>,
    full_buffer: bool,
    pub counters: FlowCounters,
}

impl FlowQueue {
    /// Queue whose packets expire after `delay_budget_s`.
    pub fn bounded(delay_budget_s: f64) -> Self {
        Self::with_budget(Some(delay_budget_s))
    }

    /// Queue without a deadline; packets never expire.
    pub fn unbounded() -> Self {
        Self::with_budget(None)
    }

    /// Always-backlogged queue: every granted bit is generated on demand.
    pub fn full_buffer() -> Self {
        FlowQueue {
            full_buffer: true,
            ..Self::with_budget(None)
        }
    }

    fn with_budget(delay_budget_s: Option<f64>) -> Self {
        FlowQueue {
            packets: VecDeque::new(),
            front_sent_bits: 0,
            queued_bits: 0,
            delay_budget_s,
            full_buffer: false,
            counters: FlowCounters::default(),
        }
    }

    pub fn delay_budget_s(&self) -> Option<f64> {
        self.delay_budget_s
    }

    pub fn is_full_buffer(&self) -> bool {
        self.full_buffer
    }

    pub fn push(&mut self, packet: Packet) {
        debug_assert!(packet.size_bits > 0);
        self.counters.arrived_packets += 1;
        self.counters.arrived_bits += packet.size_bits;
        self.queued_bits += packet.size_bits;
        self.packets.push_back(packet);
    }

    /// Bits waiting for transmission; `u64::MAX` for a full-buffer queue.
    pub fn queued_bits(&self) -> u64 {
        if self.full_buffer {
            u64::MAX
        } else {
            self.queued_bits
        }
    }

    /// Packets not yet fully delivered or dropped.
    pub fn queued_packets(&self) -> usize {
        self.packets.len()
    }

    pub fn front(&self) -> Option<&Packet> {
        self.packets.front()
    }

    /// Waiting time of the oldest queued packet, 0 when empty.
    pub fn head_of_line_delay(&self, now_s: f64) -> f64 {
        self.packets
            .front()
            .map_or(0.0, |p| (now_s - p.arrival_time_s).max(0.0))
    }

    /// Removes every packet whose age at `now_s` exceeds the delay budget.
    /// Returns the number of packets dropped.
    pub fn drop_expired(&mut self, now_s: f64) -> usize {
        let Some(budget) = self.delay_budget_s else {
            return 0;
        };
        let mut dropped = 0;
        while let Some(front) = self.packets.front() {
            if now_s - front.arrival_time_s <= budget {
                break;
            }
            let unsent = front.size_bits - self.front_sent_bits;
            self.counters.dropped_packets += 1;
            self.counters.dropped_bits += unsent;
            self.queued_bits -= unsent;
            self.front_sent_bits = 0;
            self.packets.pop_front();
            dropped += 1;
        }
        dropped
    }

    /// Transmits up to `bits` in FIFO order, completing at `now_s`.
    /// Returns the number of bits actually sent.
    pub fn deliver(&mut self, bits: u64, now_s: f64) -> u64 {
        if self.full_buffer {
            self.counters.arrived_bits += bits;
            self.counters.delivered_bits += bits;
            return bits;
        }
        let mut left = bits;
        while left > 0 {
            let Some(front) = self.packets.front() else {
                break;
            };
            let remaining = front.size_bits - self.front_sent_bits;
            let take = remaining.min(left);
            left -= take;
            self.queued_bits -= take;
            self.counters.delivered_bits += take;
            if take == remaining {
                let delay = now_s - front.arrival_time_s;
                self.counters.delivered_packets += 1;
                self.counters.delay_sum_s += delay;
                self.counters.max_delay_s = self.counters.max_delay_s.max(delay);
                self.front_sent_bits = 0;
                self.packets.pop_front();
            } else {
                self.front_sent_bits += take;
            }
        }
        bits - left
    }

    /// `arrived = delivered + dropped + queued`, for bits and for packets.
    pub fn is_conserved(&self) -> bool {
        let c = &self.counters;
        if self.full_buffer {
            return c.arrived_bits == c.delivered_bits && c.dropped_bits == 0;
        }
        c.arrived_bits == c.delivered_bits + c.dropped_bits + self.queued_bits
            && c.arrived_packets
                == c.delivered_packets + c.dropped_packets + self.packets.len() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameType {
    I,
    P,
    B,
}

impl FromStr for FrameType {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "I" => Ok(FrameType::I),
            "P" => Ok(FrameType::P),
            "B" => Ok(FrameType::B),
            _ => Err(()),
        }
    }
}

impl fmt::Display for FrameType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            FrameType::I => "I",
            FrameType::P => "P",
            FrameType::B => "B",
        };
        f.write_str(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceFrame {
    pub index: u32,
    pub frame_type: FrameType,
    pub size_bytes: u64,
}

/// Encoded video frame sizes, replayed cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VideoTrace {
    pub fps: u32,
    pub frames: Vec<TraceFrame>,
}

impl VideoTrace {
    pub fn total_bytes(&self) -> u64 {
        self.frames.iter().map(|f| f.size_bytes).sum()
    }

    pub fn duration_s(&self) -> f64 {
        self.frames.len() as f64 / f64::from(self.fps)
    }

    pub fn mean_rate_bps(&self) -> f64 {
        self.total_bytes() as f64 * 8.0 / self.duration_s()
    }

    /// Serializes to the text trace format read by [`load_trace`].
    pub fn to_text(&self) -> String {
        let mut out = format!("fps={}\n", self.fps);
        for f in &self.frames {
            out.push_str(&format!("{} {} {}\n", f.index, f.frame_type, f.size_bytes));
        }
        out
    }
}

/// Parses a trace: an `fps=<n>` header, then `<index> <I|P|B> <bytes>` lines.
/// Blank lines and lines starting with `#` are ignored.
pub fn load_trace(content: &str) -> Result<VideoTrace> {
    let mut fps = None;
    let mut frames = Vec::new();
    for (i, raw) in content.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| SimError::TraceParse {
            line: line_no,
            message,
        };
        if fps.is_none() {
            let value = line
                .strip_prefix("fps")
                .map(str::trim_start)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| parse_err("expected `fps=<integer>` header".into()))?;
            let value: i64 = value
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("invalid fps `{}`", value.trim())))?;
            if value <= 0 {
                return Err(SimError::InvalidTrace(format!("fps must be positive, got {value}")));
            }
            fps = Some(u32::try_from(value).map_err(|_| parse_err("fps too large".into()))?);
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected 3 fields, found {}", fields.len())));
        }
        let index = fields[0]
            .parse()
            .map_err(|_| parse_err(format!("invalid frame index `{}`", fields[0])))?;
        let frame_type = fields[1]
            .parse()
            .map_err(|_| SimError::TraceParse {
                line: line_no,
                message: format!("unknown frame type `{}`", fields[1]),
            })?;
        let size_bytes: u64 = fields[2]
            .parse()
            .map_err(|_| parse_err(format!("invalid frame size `{}`", fields[2])))?;
        if size_bytes == 0 {
            return Err(parse_err("frame size must be positive".into()));
        }
        frames.push(TraceFrame {
            index,
            frame_type,
            size_bytes,
        });
    }
    let fps = fps.ok_or_else(|| SimError::InvalidTrace("missing `fps=` header".into()))?;
    if frames.is_empty() {
        return Err(SimError::InvalidTrace("trace has no frames".into()));
    }
    Ok(VideoTrace { fps, frames })
}

/// Length of the synthetic group of pictures: `IBBPBBPBBPBB`.
pub const GOP_LENGTH: usize = 12;
const P_SPACING: usize = 3;

fn gop_frame_type(position: usize) -> FrameType {
    match position % GOP_LENGTH {
        0 => FrameType::I,
        p if p % P_SPACING == 0 => FrameType::P,
        _ => FrameType::B,
    }
}

/// Synthetic H.264-like trace with I:P:B size ratio 5:2:1 and ±20% per-frame
/// jitter, scaled so the mean rate over the trace equals `target_kbps`.
/// Rounding is absorbed by the last frame.
pub fn synth_trace<R: Rng + ?Sized>(target_kbps: f64, fps: u32, n_frames: usize, rng: &mut R) -> VideoTrace {
    assert!(target_kbps > 0.0 && fps > 0 && n_frames > 0);
    let total_bytes =
        (target_kbps * 1000.0 * n_frames as f64 / f64::from(fps) / 8.0).round() as u64;
    let weights: Vec<(FrameType, f64)> = (0..n_frames)
        .map(|k| {
            let frame_type = gop_frame_type(k);
            let base = match frame_type {
                FrameType::I => 5.0,
                FrameType::P => 2.0,
                FrameType::B => 1.0,
            };
            (frame_type, base * rng.random_range(0.8..1.2))
        })
        .collect();
    let weight_sum: f64 = weights.iter().map(|(_, w)| w).sum();

    let mut frames = Vec::with_capacity(n_frames);
    let mut assigned = 0u64;
    for (k, &(frame_type, w)) in weights.iter().enumerate() {
        let size_bytes = if k + 1 == n_frames {
            total_bytes.saturating_sub(assigned).max(1)
        } else {
            ((w / weight_sum * total_bytes as f64).floor() as u64).max(1)
        };
        assigned += size_bytes;
        frames.push(TraceFrame {
            index: k as u32,
            frame_type,
            size_bytes,
        });
    }
    VideoTrace { fps, frames }
}

/// Splits a frame into packets of at most [`MAX_PACKET_BYTES`].
pub fn segment(size_bytes: u64) -> impl Iterator<Item = u64> {
    let full = size_bytes / MAX_PACKET_BYTES;
    let rest = size_bytes % MAX_PACKET_BYTES;
    std::iter::repeat_n(MAX_PACKET_BYTES, full as usize).chain((rest > 0).then_some(rest))
}

/// Replays a trace from a per-UE starting frame.
#[derive(Debug, Clone)]
pub struct VideoSource {
    trace: Arc<VideoTrace>,
    start_frame: usize,
    emitted: u64,
}

impl VideoSource {
    pub fn new(trace: Arc<VideoTrace>, start_frame: usize) -> Self {
        let start_frame = start_frame % trace.frames.len();
        VideoSource {
            trace,
            start_frame,
            emitted: 0,
        }
    }

    /// Frames whose timestamp falls inside TTI `tti`, as frame sizes.
    fn due_frames(&mut self, tti: u64, ttis_per_second: u64, out: &mut Vec<u64>) {
        let fps = u64::from(self.trace.fps);
        while self.emitted * ttis_per_second / fps <= tti {
            let n = self.trace.frames.len();
            let frame = &self.trace.frames[(self.start_frame + self.emitted as usize) % n];
            out.push(frame.size_bytes);
            self.emitted += 1;
        }
    }
}

/// Exponential ON/OFF voice source emitting one packet per period while ON.
#[derive(Debug, Clone)]
pub struct VoipSource {
    on: bool,
    ttis_left_in_state: u64,
    ttis_to_next_packet: u64,
    on_mean_s: f64,
    off_mean_s: f64,
}

impl VoipSource {
    pub fn new<R: Rng + ?Sized>(on_mean_s: f64, off_mean_s: f64, dt: f64, rng: &mut R) -> Self {
        let on = rng.random_bool(on_mean_s / (on_mean_s + off_mean_s));
        let mean = if on { on_mean_s } else { off_mean_s };
        VoipSource {
            on,
            ttis_left_in_state: draw_ttis(mean, dt, rng),
            ttis_to_next_packet: 0,
            on_mean_s,
            off_mean_s,
        }
    }

    /// Source pinned in one state for `ttis` TTIs.
    pub fn fixed(on: bool, ttis: u64) -> Self {
        VoipSource {
            on,
            ttis_left_in_state: ttis,
            ttis_to_next_packet: 0,
            on_mean_s: 3.0,
            off_mean_s: 3.0,
        }
    }

    pub fn is_on(&self) -> bool {
        self.on
    }

    fn tick<R: Rng + ?Sized>(&mut self, dt: f64, rng: &mut R) -> bool {
        if self.ttis_left_in_state == 0 {
            self.on = !self.on;
            let mean = if self.on { self.on_mean_s } else { self.off_mean_s };
            self.ttis_left_in_state = draw_ttis(mean, dt, rng);
            self.ttis_to_next_packet = 0;
        }
        self.ttis_left_in_state -= 1;
        if !self.on {
            return false;
        }
        if self.ttis_to_next_packet == 0 {
            self.ttis_to_next_packet = (VOIP_PERIOD_S / dt).round() as u64 - 1;
            true
        } else {
            self.ttis_to_next_packet -= 1;
            false
        }
    }
}

fn draw_ttis<R: Rng + ?Sized>(mean_s: f64, dt: f64, rng: &mut R) -> u64 {
    let seconds = Exp::new(1.0 / mean_s).expect("positive mean").sample(rng);
    ((seconds / dt).round() as u64).max(1)
}

#[derive(Debug, Clone)]
pub enum SourceKind {
    Video(VideoSource),
    Voip(VoipSource),
    /// Always backlogged; no explicit arrivals.
    FullBuffer,
}

/// A traffic generator bound to one flow; numbers its packets.
#[derive(Debug, Clone)]
pub struct TrafficSource {
    pub kind: SourceKind,
    next_id: u64,
}

impl TrafficSource {
    pub fn new(kind: SourceKind) -> Self {
        TrafficSource { kind, next_id: 0 }
    }

    pub fn class(&self) -> FlowClass {
        match self.kind {
            SourceKind::Video(_) => FlowClass::Video,
            SourceKind::Voip(_) => FlowClass::Voip,
            SourceKind::FullBuffer => FlowClass::BestEffort,
        }
    }

    /// Packets generated during TTI `tti` of length `dt`, all stamped with
    /// the TTI start time.
    pub fn arrivals<R: Rng + ?Sized>(&mut self, tti: u64, dt: f64, rng: &mut R) -> Vec<Packet> {
        let class = self.class();
        let now = tti as f64 * dt;
        let mut sizes_bytes = Vec::new();
        match &mut self.kind {
            SourceKind::Video(video) => {
                let ttis_per_second = (1.0 / dt).round() as u64;
                let mut frames = Vec::new();
                video.due_frames(tti, ttis_per_second, &mut frames);
                sizes_bytes.extend(frames.into_iter().flat_map(segment));
            }
            SourceKind::Voip(voip) => {
                if voip.tick(dt, rng) {
                    sizes_bytes.push(VOIP_PACKET_BYTES);
                }
            }
            SourceKind::FullBuffer => {}
        }
        sizes_bytes
            .into_iter()
            .map(|bytes| {
                let id = self.next_id;
                self.next_id += 1;
                Packet {
                    id,
                    size_bits: bytes * 8,
                    arrival_time_s: now,
                    flow_class: class,
                }
            })
            .collect()
    }
}
