//! Time and amplitude normalization of summing-neuron output.
//!
//! The pattern is smoothed by a first-order low-pass, the active window
//! `[t_tp, rings − 1]` is linearly resampled onto a fixed canonical length, and
//! amplitudes are divided by `√inh0`. A disc of `N` rings whose first edge
//! activity arrives `L` ticks after projection has a warp factor
//! `M = N / (N − L)`; resampling the `N − L` sample window onto `N` points is
//! exactly that warp.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RpnError};
use crate::ripple::RawTemporalPattern;

pub const DEFAULT_ALPHA: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceMeta {
    pub inh0: f64,
    #[serde(rename = "L")]
    pub lag: usize,
    pub t_tp: usize,
    pub rings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedTP {
    pub samples: Vec<f64>,
    /// Time warp factor `N / (N − L)`.
    #[serde(rename = "M")]
    pub warp: f64,
    /// `√inh0`.
    pub amp_divisor: f64,
    pub source: SourceMeta,
}

impl NormalizedTP {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples divided by their own peak (all zeros stay zeros).
    pub fn peak_normalized(&self) -> Vec<f64> {
        let peak = self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 {
            return self.samples.clone();
        }
        self.samples.iter().map(|v| v / peak).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,tp_norm\n");
        for (t, s) in self.samples.iter().enumerate() {
            out.push_str(&format!("{t},{s}\n"));
        }
        out
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(RpnError::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

/// `y(t) = α·x(t) + (1 − α)·y(t − 1)` with `y(−1) = 0`.
pub fn lowpass_samples(samples: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Ok(samples.to_vec());
    }
    let mut y = 0.0;
    Ok(samples
        .iter()
        .map(|&x| {
            y = alpha * x + (1.0 - alpha) * y;
            y
        })
        .collect())
}

pub fn lowpass(tp: &RawTemporalPattern, alpha: f64) -> Result<Vec<f64>> {
    lowpass_samples(&tp.samples, alpha)
}

/// Linear resampling of `window` onto `len` evenly spaced points that include
/// both endpoints.
pub fn resample_linear(window: &[f64], len: usize) -> Vec<f64> {
    match (window.len(), len) {
        (_, 0) => Vec::new(),
        (0, _) => vec![0.0; len],
        (1, _) => vec![window[0]; len],
        (_, 1) => vec![window[0]],
        (n, _) => {
            let span = (n - 1) as f64;
            (0..len)
                .map(|k| {
                    let pos = span * k as f64 / (len - 1) as f64;
                    let i = (pos.floor() as usize).min(n - 2);
                    let frac = pos - i as f64;
                    window[i] * (1.0 - frac) + window[i + 1] * frac
                })
                .collect()
        }
    }
}

pub fn normalize(tp: &RawTemporalPattern, n_canon: usize, alpha: f64) -> Result<NormalizedTP> {
    check_alpha(alpha)?;
    if n_canon == 0 {
        return Err(RpnError::invalid("n_canon", "must be at least 1"));
    }
    let rings = tp.rings();
    let (Some(t_tp), Some(lag)) = (tp.t_tp, tp.lag) else {
        return Err(RpnError::EmptyPattern);
    };
    if tp.inh0 <= 0.0 {
        return Err(RpnError::EmptyPattern);
    }
    if lag >= rings {
        return Err(RpnError::DegenerateWindow { lag, rings });
    }
    let smoothed = lowpass(tp, alpha)?;
    let window = &smoothed[t_tp..];
    let amp_divisor = tp.inh0.sqrt();
    let samples = resample_linear(window, n_canon)
        .into_iter()
        .map(|v| v / amp_divisor)
        .collect();
    Ok(NormalizedTP {
        samples,
        warp: rings as f64 / (rings - lag) as f64,
        amp_divisor,
        source: SourceMeta {
            inh0: tp.inh0,
            lag,
            t_tp,
            rings,
        },
    })
}
