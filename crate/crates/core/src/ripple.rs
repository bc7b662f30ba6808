//! Projection onto the disc, the outward ripple, and the frame shutter.
//!
//! Every tick the engine samples the edge ring into the summing neuron, samples
//! total disc activity into the inhibitory neuron, then shifts each arm one
//! ring outward. Content starting on ring `k` (0-based) therefore reaches the
//! summing neuron at tick `rings - 1 - k`.
//!
//! Ring totals are accumulated over arms in sorted order, so permuting arms
//! cannot change a single bit of the output.

use serde::{Deserialize, Serialize};

use crate::disc::PixelMap;
use crate::error::{Result, RpnError};
use crate::frame::Frame;

/// Initial per-neuron activation, indexed `arm * rings + ring`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivationField {
    arms: usize,
    rings: usize,
    values: Vec<f64>,
}

impl ActivationField {
    pub fn new(arms: usize, rings: usize, values: Vec<f64>) -> Result<Self> {
        if arms == 0 || rings == 0 {
            return Err(RpnError::invalid("field", "arms and rings must be >= 1"));
        }
        if values.len() != arms * rings {
            return Err(RpnError::DimensionMismatch {
                expected: format!("{arms}x{rings} activations"),
                actual: format!("{}", values.len()),
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(RpnError::invalid(
                "activation",
                format!("entry {i} is negative or non-finite"),
            ));
        }
        Ok(Self {
            arms,
            rings,
            values,
        })
    }

    pub fn zeros(arms: usize, rings: usize) -> Self {
        Self::new(arms, rings, vec![0.0; arms * rings]).expect("valid zero field")
    }

    pub fn from_fn(arms: usize, rings: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(arms * rings);
        for arm in 0..arms {
            for ring in 0..rings {
                values.push(f(arm, ring));
            }
        }
        Self::new(arms, rings, values)
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn rings(&self) -> usize {
        self.rings
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, arm: usize, ring: usize) -> f64 {
        self.values[arm * self.rings + ring]
    }

    pub fn set(&mut self, arm: usize, ring: usize, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(RpnError::invalid("activation", "must be finite and >= 0"));
        }
        self.values[arm * self.rings + ring] = value;
        Ok(())
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|v| **v > 0.0).count()
    }

    /// Strict spiking reading: 1 where activation ≥ threshold, else 0.
    pub fn binarized(&self, threshold: f64) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|&v| if v >= threshold && v > 0.0 { 1.0 } else { 0.0 })
                .collect(),
            ..self.clone()
        }
    }

    /// Arm `a` of the result is arm `perm[a]` of `self`.
    pub fn permute_arms(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.arms];
        if perm.len() != self.arms || perm.iter().any(|&p| p >= self.arms || std::mem::replace(&mut seen[p], true)) {
            return Err(RpnError::invalid("perm", "not a permutation of the arms"));
        }
        let mut values = Vec::with_capacity(self.values.len());
        for &src in perm {
            values.extend_from_slice(&self.values[src * self.rings..(src + 1) * self.rings]);
        }
        Ok(Self { values, ..*self })
    }

    /// Sum over arms of each ring, accumulated in ascending value order.
    pub fn ring_totals(&self) -> Vec<f64> {
        let mut column = Vec::with_capacity(self.arms);
        (0..self.rings)
            .map(|ring| {
                column.clear();
                column.extend((0..self.arms).map(|arm| self.values[arm * self.rings + ring]));
                column.sort_unstable_by(f64::total_cmp);
                column.iter().sum()
            })
            .collect()
    }
}

/// Sum |pixel| over each neuron's preimage; totals below `threshold` become 0.
pub fn project(frame: &Frame, map: &PixelMap, threshold: f64) -> Result<ActivationField> {
    if frame.width() != map.width || frame.height() != map.height {
        return Err(RpnError::DimensionMismatch {
            expected: format!("{}x{} frame", map.width, map.height),
            actual: format!("{}x{}", frame.width(), frame.height()),
        });
    }
    let mut values = vec![0.0; map.neuron_count()];
    for (pixel, neuron) in frame.pixels().iter().zip(&map.assignment) {
        if let Some(n) = neuron {
            values[*n as usize] += pixel.abs();
        }
    }
    for v in &mut values {
        if *v < threshold {
            *v = 0.0;
        }
    }
    ActivationField::new(map.arms, map.rings, values)
}

/// Summing and inhibitory neuron outputs for one ripple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTemporalPattern {
    /// Summing neuron output, one entry per tick `0..rings`.
    pub samples: Vec<f64>,
    /// Total disc activity at each tick, before that tick's shift.
    pub inh_trace: Vec<f64>,
    pub inh0: f64,
    /// First tick with inhibitory activity; `None` for an empty field.
    pub t_inh: Option<usize>,
    /// First tick with summing activity; `None` for an empty field.
    pub t_tp: Option<usize>,
    /// `t_tp − t_inh`; `None` (undefined) for an empty field.
    #[serde(rename = "L")]
    pub lag: Option<usize>,
    /// First tick at which the disc is empty again (0 for an empty field).
    pub completion_tick: usize,
}

impl RawTemporalPattern {
    pub fn rings(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inh0 == 0.0
    }

    /// CSV rows `t,tp_sum,inh`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,tp_sum,inh\n");
        for (t, (s, i)) in self.samples.iter().zip(&self.inh_trace).enumerate() {
            out.push_str(&format!("{t},{s},{i}\n"));
        }
        out
    }
}

/// One tick of engine output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tick {
    pub t: usize,
    pub tp_sum: f64,
    pub inh: f64,
}

/// Tick-by-tick ripple simulation over one disc.
///
/// Arms only ever shift in lockstep, so the engine keeps one total per ring and
/// a moving edge pointer instead of moving every neuron's activity.
#[derive(Debug, Clone, Default)]
pub struct RippleEngine {
    rings: usize,
    ring_totals: Vec<f64>,
    /// remaining[k] = total activity on rings 0..=k.
    remaining: Vec<f64>,
    tick: usize,
}

impl RippleEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Project a new field onto the disc, discarding any previous state.
    pub fn load(&mut self, field: &ActivationField) {
        self.rings = field.rings();
        self.ring_totals = field.ring_totals();
        self.remaining = Vec::with_capacity(self.rings);
        let mut acc = 0.0;
        for v in &self.ring_totals {
            acc += v;
            self.remaining.push(acc);
        }
        self.tick = 0;
    }

    /// True while any activity remains on the disc.
    pub fn is_active(&self) -> bool {
        self.inhibition() > 0.0
    }

    /// Current inhibitory neuron output.
    pub fn inhibition(&self) -> f64 {
        if self.tick >= self.rings {
            0.0
        } else {
            self.remaining[self.rings - 1 - self.tick]
        }
    }

    pub fn tick(&self) -> usize {
        self.tick
    }

    /// Sample the summing and inhibitory neurons, then shift outward.
    /// Returns `None` once all `rings` ticks have been emitted.
    pub fn step(&mut self) -> Option<Tick> {
        if self.tick >= self.rings {
            return None;
        }
        let edge = self.rings - 1 - self.tick;
        let out = Tick {
            t: self.tick,
            tp_sum: self.ring_totals[edge],
            inh: self.remaining[edge],
        };
        self.tick += 1;
        Some(out)
    }
}

/// Run a field to completion.
pub fn ripple(field: &ActivationField) -> RawTemporalPattern {
    let mut engine = RippleEngine::new();
    engine.load(field);
    let rings = field.rings();
    let mut samples = Vec::with_capacity(rings);
    let mut inh_trace = Vec::with_capacity(rings);
    while let Some(tick) = engine.step() {
        samples.push(tick.tp_sum);
        inh_trace.push(tick.inh);
    }
    let inh0 = inh_trace.first().copied().unwrap_or(0.0);
    let t_inh = inh_trace.iter().position(|&v| v > 0.0);
    let t_tp = samples.iter().position(|&v| v > 0.0);
    let lag = match (t_inh, t_tp) {
        (Some(a), Some(b)) => Some(b - a),
        _ => None,
    };
    let completion_tick = inh_trace
        .iter()
        .rposition(|&v| v > 0.0)
        .map_or(0, |t| t + 1);
    RawTemporalPattern {
        samples,
        inh_trace,
        inh0,
        t_inh,
        t_tp,
        lag,
        completion_tick,
    }
}

/// A frame admitted by the shutter.
#[derive(Debug, Clone, PartialEq)]
pub struct Admission {
    /// Position of the frame in submission order.
    pub frame: usize,
    pub arrived_at: u64,
    pub admitted_at: u64,
    pub pattern: RawTemporalPattern,
}

/// Inhibitory-neuron frame gate: no frame is projected while activity
/// remains on the disc. While closed, only the most recent frame is held;
/// an older pending frame is dropped.
#[derive(Debug, Default)]
pub struct Shutter {
    busy_until: u64,
    pending: Option<(usize, u64, ActivationField)>,
    submitted: usize,
    dropped: usize,
    admitted: Vec<Admission>,
}

impl Shutter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_open_at(&self, tick: u64) -> bool {
        tick >= self.busy_until
    }

    fn admit(&mut self, frame: usize, arrived_at: u64, at: u64, field: &ActivationField) {
        let pattern = ripple(field);
        self.busy_until = at + pattern.completion_tick as u64;
        self.admitted.push(Admission {
            frame,
            arrived_at,
            admitted_at: at,
            pattern,
        });
    }

    /// Release a pending frame if the shutter has opened by `tick`.
    pub fn advance_to(&mut self, tick: u64) {
        while let Some((_, arrived, _)) = &self.pending {
            let open_at = self.busy_until.max(*arrived);
            if open_at > tick {
                break;
            }
            let (frame, arrived, field) = self.pending.take().expect("pending frame");
            self.admit(frame, arrived, open_at, &field);
        }
    }

    /// Submit a frame arriving at `tick`. Arrival ticks must be non-decreasing.
    pub fn offer(&mut self, tick: u64, field: ActivationField) {
        self.advance_to(tick);
        let frame = self.submitted;
        self.submitted += 1;
        if self.is_open_at(tick) && self.pending.is_none() {
            self.admit(frame, tick, tick, &field);
        } else if self.pending.replace((frame, tick, field)).is_some() {
            self.dropped += 1;
        }
    }

    /// Drain: admit whatever is still pending.
    pub fn finish(mut self) -> ShutterLog {
        self.advance_to(u64::MAX);
        ShutterLog {
            admitted: self.admitted,
            dropped: self.dropped,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShutterLog {
    pub admitted: Vec<Admission>,
    pub dropped: usize,
}

/// Run a timestamped frame sequence through a fresh shutter.
pub fn gate(frames: impl IntoIterator<Item = (u64, ActivationField)>) -> ShutterLog {
    let mut shutter = Shutter::new();
    for (tick, field) in frames {
        shutter.offer(tick, field);
    }
    shutter.finish()
}
