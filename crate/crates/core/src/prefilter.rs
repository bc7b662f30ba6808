//! Difference-of-Gaussians high-pass and Gabor orientation banks.
//!
//! All convolutions use symmetric (edge-repeating) reflection at the frame
//! border. Gaussian kernels are truncated at ±⌈3σ⌉ and normalized to unit sum.
//! Gabor kernels are made zero-mean and their responses are half-wave
//! rectified, since disc activations are non-negative pulse magnitudes.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RpnError};
use crate::frame::Frame;

pub const DEFAULT_DOG_SIGMAS: (f64, f64) = (1.0, 1.6);

/// Orientation bins used to cache radial Gabor kernels. Divisible by 8 so that
/// quarter turns land on whole bins.
const RADIAL_BINS: usize = 720;

#[inline]
fn reflect(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - 1 - m) as usize
    }
}

/// Unit-sum Gaussian taps on `[-⌈3σ⌉, ⌈3σ⌉]`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = ((3.0 * sigma).ceil() as usize).max(1);
    let mut taps: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let x = i as f64 - radius as f64;
            (-(x * x) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

fn convolve_separable(frame: &Frame, taps: &[f64]) -> Vec<f64> {
    let (w, h) = (frame.width(), frame.height());
    let r = (taps.len() / 2) as isize;
    let src = frame.pixels();
    let mut tmp = vec![0.0; w * h];
    tmp.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, out) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, t) in taps.iter().enumerate() {
                let xi = reflect(x as isize + k as isize - r, w);
                acc += t * src[y * w + xi];
            }
            *out = acc;
        }
    });
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, o) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, t) in taps.iter().enumerate() {
                let yi = reflect(y as isize + k as isize - r, h);
                acc += t * tmp[yi * w + x];
            }
            *o = acc;
        }
    });
    out
}

pub fn gaussian_blur(frame: &Frame, sigma: f64) -> Result<Frame> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(RpnError::invalid("sigma", format!("must be > 0, got {sigma}")));
    }
    Frame::new(
        frame.width(),
        frame.height(),
        convolve_separable(frame, &gaussian_kernel(sigma)),
    )
}

/// `G(sigma1) * frame − G(sigma2) * frame`.
pub fn dog_highpass(frame: &Frame, sigma1: f64, sigma2: f64) -> Result<Frame> {
    if !(sigma1.is_finite() && sigma1 > 0.0) {
        return Err(RpnError::invalid("sigma1", format!("must be > 0, got {sigma1}")));
    }
    if !(sigma2.is_finite() && sigma2 > sigma1) {
        return Err(RpnError::invalid(
            "sigma2",
            format!("must exceed sigma1 ({sigma1}), got {sigma2}"),
        ));
    }
    let narrow = convolve_separable(frame, &gaussian_kernel(sigma1));
    let wide = convolve_separable(frame, &gaussian_kernel(sigma2));
    let diff = narrow.iter().zip(&wide).map(|(a, b)| a - b).collect();
    Frame::new(frame.width(), frame.height(), diff)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaborMode {
    /// Fixed orientation in image coordinates.
    Cartesian,
    /// Orientation measured from the radius through each pixel.
    Radial,
}

/// One Gabor channel. `orientation` is the direction of the carrier wave
/// vector, so a radial channel at 0 responds to tangential edges (rings) and
/// one at π/2 to radial edges (spokes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaborSpec {
    pub orientation: f64,
    pub wavelength: f64,
    pub sigma: f64,
    pub aspect: f64,
    pub phase: f64,
    pub mode: GaborMode,
}

impl GaborSpec {
    pub fn radial(orientation: f64) -> Self {
        Self {
            orientation,
            wavelength: 5.0,
            sigma: 2.0,
            aspect: 1.0,
            phase: 0.0,
            mode: GaborMode::Radial,
        }
    }

    pub fn cartesian(orientation: f64) -> Self {
        Self {
            mode: GaborMode::Cartesian,
            ..Self::radial(orientation)
        }
    }

    pub fn orientation_degrees(&self) -> f64 {
        self.orientation.to_degrees()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.orientation.is_finite() {
            return Err(RpnError::invalid("orientation", "must be finite"));
        }
        if !(self.wavelength.is_finite() && self.wavelength > 0.0) {
            return Err(RpnError::invalid("wavelength", "must be > 0"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(RpnError::invalid("sigma", "must be > 0"));
        }
        if !(self.aspect.is_finite() && self.aspect > 0.0) {
            return Err(RpnError::invalid("aspect", "must be > 0"));
        }
        if !self.phase.is_finite() {
            return Err(RpnError::invalid("phase", "must be finite"));
        }
        Ok(())
    }

    fn half_size(&self) -> usize {
        ((3.0 * self.sigma * (1.0f64).max(1.0 / self.aspect)).ceil() as usize).max(1)
    }

    /// Zero-mean kernel with its carrier along `(cos, sin)`, row-major over
    /// offsets `[-half, half]²`.
    fn kernel(&self, cos: f64, sin: f64) -> Vec<f64> {
        let half = self.half_size() as isize;
        let side = (2 * half + 1) as usize;
        let mut carrier = Vec::with_capacity(side * side);
        let mut envelope = Vec::with_capacity(side * side);
        let two_sigma2 = 2.0 * self.sigma * self.sigma;
        let gamma2 = self.aspect * self.aspect;
        for j in -half..=half {
            for i in -half..=half {
                let (x, y) = (i as f64, j as f64);
                let along = x * cos + y * sin;
                let across = -x * sin + y * cos;
                let env = (-(along * along + gamma2 * across * across) / two_sigma2).exp();
                envelope.push(env);
                carrier.push(env * (TAU * along / self.wavelength + self.phase).cos());
            }
        }
        let dc = carrier.iter().sum::<f64>() / envelope.iter().sum::<f64>();
        carrier
            .iter()
            .zip(&envelope)
            .map(|(c, e)| c - dc * e)
            .collect()
    }
}

fn correlate_at(frame: &Frame, kernel: &[f64], half: isize, x: usize, y: usize) -> f64 {
    let (w, h) = (frame.width(), frame.height());
    let src = frame.pixels();
    let side = (2 * half + 1) as usize;
    let mut acc = 0.0;
    for (row, j) in (-half..=half).enumerate() {
        let yi = reflect(y as isize + j, h);
        let krow = &kernel[row * side..(row + 1) * side];
        for (k, i) in krow.iter().zip(-half..=half) {
            acc += k * src[yi * w + reflect(x as isize + i, w)];
        }
    }
    acc
}

fn cartesian_response(frame: &Frame, spec: &GaborSpec) -> Vec<f64> {
    let kernel = spec.kernel(spec.orientation.cos(), spec.orientation.sin());
    let half = spec.half_size() as isize;
    let w = frame.width();
    let mut out = vec![0.0; w * frame.height()];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, o) in row.iter_mut().enumerate() {
            *o = correlate_at(frame, &kernel, half, x, y).max(0.0);
        }
    });
    out
}

/// Radial bin for pixel offset `(dx, dy)` from the center; 0 at the center.
fn radial_bin(dx: f64, dy: f64) -> usize {
    if dx == 0.0 && dy == 0.0 {
        return 0;
    }
    let angle = dy.atan2(dx).rem_euclid(TAU);
    ((angle / TAU * RADIAL_BINS as f64).round() as usize) % RADIAL_BINS
}

fn radial_response(frame: &Frame, spec: &GaborSpec) -> Vec<f64> {
    let (w, h) = (frame.width(), frame.height());
    let (cx, cy) = frame.center();
    let bins: Vec<usize> = (0..w * h)
        .map(|i| radial_bin((i % w) as f64 - cx, (i / w) as f64 - cy))
        .collect();
    let mut needed: Vec<usize> = bins.clone();
    needed.sort_unstable();
    needed.dedup();
    let kernels: HashMap<usize, Vec<f64>> = needed
        .par_iter()
        .map(|&b| {
            let theta = spec.orientation + TAU * b as f64 / RADIAL_BINS as f64;
            (b, spec.kernel(theta.cos(), theta.sin()))
        })
        .collect();
    let half = spec.half_size() as isize;
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, o) in row.iter_mut().enumerate() {
            let kernel = &kernels[&bins[y * w + x]];
            *o = correlate_at(frame, kernel, half, x, y).max(0.0);
        }
    });
    out
}

/// One rectified response map per spec, in input order.
pub fn gabor_bank(frame: &Frame, specs: &[GaborSpec]) -> Result<Vec<Frame>> {
    if specs.is_empty() {
        return Err(RpnError::invalid("specs", "at least one Gabor spec required"));
    }
    for s in specs {
        s.validate()?;
    }
    specs
        .iter()
        .map(|spec| {
            let pixels = match spec.mode {
                GaborMode::Cartesian => cartesian_response(frame, spec),
                GaborMode::Radial => radial_response(frame, spec),
            };
            Frame::new(frame.width(), frame.height(), pixels)
        })
        .collect()
}

/// The default radial bank: 0°, 45° and 90° relative to the center.
pub fn default_radial_bank() -> Vec<GaborSpec> {
    [0.0, PI / 4.0, PI / 2.0]
        .into_iter()
        .map(GaborSpec::radial)
        .collect()
}
