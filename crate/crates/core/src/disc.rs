//! Neuron disc construction and the retina-to-disc pixel assignment.
//!
//! A disc has `arms` radial arms, each carrying `rings` neurons. Neuron
//! `(arm, ring)` sits at radius `radius * ring / rings`; its angle is the
//! arm's base angle `2π·arm/arms` plus a per-ring twist offset that is zero
//! for spokes and grown by the adaptive twist rule for spirals. Every ring is
//! therefore an orbit of the `arms`-fold rotation, which is what makes the
//! summed edge activity independent of image rotation.
//!
//! Arms and rings are 0-based in code; ring index `k` is ring number `k + 1`
//! counted outward from the center.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RpnError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Spoke,
    Spiral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscSpec {
    pub arms: usize,
    pub rings: usize,
    pub radius: f64,
    pub geometry: Geometry,
    #[serde(default)]
    pub twist_gain: f64,
}

impl DiscSpec {
    pub fn spoke(arms: usize, rings: usize, radius: f64) -> Self {
        Self {
            arms,
            rings,
            radius,
            geometry: Geometry::Spoke,
            twist_gain: 0.0,
        }
    }

    pub fn spiral(arms: usize, rings: usize, radius: f64, twist_gain: f64) -> Self {
        Self {
            arms,
            rings,
            radius,
            geometry: Geometry::Spiral,
            twist_gain,
        }
    }

    /// Same disc with a different ring count (used for coarse discs in a bank).
    pub fn with_rings(&self, rings: usize) -> Self {
        Self { rings, ..*self }
    }

    pub fn neuron_count(&self) -> usize {
        self.arms * self.rings
    }

    pub fn validate(&self) -> Result<()> {
        if self.arms == 0 {
            return Err(RpnError::invalid("arms", "must be at least 1"));
        }
        if self.rings == 0 {
            return Err(RpnError::invalid("rings", "must be at least 1"));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(RpnError::invalid(
                "radius",
                format!("must be finite and > 0, got {}", self.radius),
            ));
        }
        if !(self.twist_gain.is_finite() && self.twist_gain >= 0.0) {
            return Err(RpnError::invalid(
                "twist_gain",
                format!("must be finite and >= 0, got {}", self.twist_gain),
            ));
        }
        if self.geometry == Geometry::Spoke && self.twist_gain != 0.0 {
            return Err(RpnError::invalid(
                "twist_gain",
                "must be 0 for spoke geometry",
            ));
        }
        Ok(())
    }
}

/// Built disc: polar positions for every neuron plus a cached Cartesian view.
///
/// `positions[arm * rings + ring]` is `[r, theta]`, theta in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "LayoutDoc", try_from = "LayoutDoc")]
pub struct DiscLayout {
    spec: DiscSpec,
    positions: Vec<[f64; 2]>,
    uniformity_score: f64,
    ring_radius: Vec<f64>,
    ring_offset: Vec<f64>,
    cartesian: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct LayoutDoc {
    spec: DiscSpec,
    positions: Vec<[f64; 2]>,
    uniformity_score: f64,
}

impl From<DiscLayout> for LayoutDoc {
    fn from(l: DiscLayout) -> Self {
        LayoutDoc {
            spec: l.spec,
            positions: l.positions,
            uniformity_score: l.uniformity_score,
        }
    }
}

impl TryFrom<LayoutDoc> for DiscLayout {
    type Error = RpnError;

    fn try_from(doc: LayoutDoc) -> Result<Self> {
        let built = build_disc(doc.spec)?;
        if built.positions != doc.positions {
            return Err(RpnError::ShapeMismatch(
                "layout positions do not match the disc spec".into(),
            ));
        }
        Ok(built)
    }
}

impl DiscLayout {
    pub fn spec(&self) -> &DiscSpec {
        &self.spec
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn uniformity_score(&self) -> f64 {
        self.uniformity_score
    }

    pub fn index(&self, arm: usize, ring: usize) -> usize {
        arm * self.spec.rings + ring
    }

    /// `(arm, ring)` for a flat neuron index.
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index / self.spec.rings, index % self.spec.rings)
    }

    pub fn polar(&self, arm: usize, ring: usize) -> [f64; 2] {
        self.positions[self.index(arm, ring)]
    }

    /// Position relative to the disc center, x to the right and y downwards.
    pub fn offset(&self, index: usize) -> [f64; 2] {
        self.cartesian[index]
    }

    pub fn ring_radius(&self, ring: usize) -> f64 {
        self.ring_radius[ring]
    }

    /// Angular twist of ring `ring` relative to the spoke layout.
    pub fn ring_offset(&self, ring: usize) -> f64 {
        self.ring_offset[ring]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Nearest neuron to the point `(x, y)` (relative to the disc center).
    ///
    /// Ties on squared distance resolve to the lowest `(arm, ring)`. `exclude`
    /// skips one neuron, which is how neuron-to-neuron spacing is measured.
    pub fn nearest(&self, x: f64, y: f64, exclude: Option<usize>) -> Option<(usize, f64)> {
        let rings = self.spec.rings;
        let rho = x.hypot(y);
        let mut search = NearestSearch {
            layout: self,
            x,
            y,
            psi: y.atan2(x),
            full_scan: self.spec.arms <= 8 || rho < 1e-9 * self.spec.radius,
            exclude,
            best: None,
        };

        let guess = ((rho * rings as f64 / self.spec.radius).round() as i64 - 1)
            .clamp(0, rings as i64 - 1) as usize;
        search.scan_ring(guess);
        for ring in guess + 1..rings {
            if search.gap_exceeds_best(ring, rho) {
                break;
            }
            search.scan_ring(ring);
        }
        for ring in (0..guess).rev() {
            if search.gap_exceeds_best(ring, rho) {
                break;
            }
            search.scan_ring(ring);
        }
        search.best.map(|(d2, arm, ring)| (arm * rings + ring, d2))
    }

    /// Distance from every neuron to its nearest other neuron.
    pub fn nearest_neighbor_distances(&self) -> Vec<f64> {
        (0..self.positions.len())
            .into_par_iter()
            .map(|i| {
                let [x, y] = self.cartesian[i];
                self.nearest(x, y, Some(i))
                    .map(|(_, d2)| d2.sqrt())
                    .unwrap_or(0.0)
            })
            .collect()
    }
}

struct NearestSearch<'a> {
    layout: &'a DiscLayout,
    x: f64,
    y: f64,
    psi: f64,
    full_scan: bool,
    exclude: Option<usize>,
    /// (squared distance, arm, ring)
    best: Option<(f64, usize, usize)>,
}

impl NearestSearch<'_> {
    fn consider(&mut self, arm: usize, ring: usize) {
        let idx = arm * self.layout.spec.rings + ring;
        if self.exclude == Some(idx) {
            return;
        }
        let [ox, oy] = self.layout.cartesian[idx];
        let d2 = (self.x - ox) * (self.x - ox) + (self.y - oy) * (self.y - oy);
        let better = match self.best {
            None => true,
            Some((bd, ba, br)) => d2 < bd || (d2 == bd && (arm, ring) < (ba, br)),
        };
        if better {
            self.best = Some((d2, arm, ring));
        }
    }

    /// Within one ring only the arms bracketing the point's angle can be
    /// nearest; a window of four absorbs rounding in the bracket index.
    fn scan_ring(&mut self, ring: usize) {
        let arms = self.layout.spec.arms;
        if self.full_scan {
            for arm in 0..arms {
                self.consider(arm, ring);
            }
            return;
        }
        let j = (self.psi - self.layout.ring_offset[ring]) * arms as f64 / TAU;
        let base = j.floor() as i64;
        for d in -1..=2 {
            self.consider((base + d).rem_euclid(arms as i64) as usize, ring);
        }
    }

    fn gap_exceeds_best(&self, ring: usize, rho: f64) -> bool {
        match self.best {
            None => false,
            Some((bd, _, _)) => {
                let g = self.layout.ring_radius[ring] - rho;
                g * g > bd * (1.0 + 1e-12) + 1e-12
            }
        }
    }
}

/// Coefficient of variation (population std / mean); 0 for fewer than two values.
pub(crate) fn coefficient_of_variation(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return 0.0;
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt() / mean
}

fn chord(r: f64, dtheta: f64) -> f64 {
    2.0 * r * (0.5 * dtheta).sin().abs()
}

/// Per-ring twist offsets.
///
/// Spiral rule: `Δθ(k+1) = Δθ(k) + gain · (s_target − s(k)) / radius`, where
/// `s(k)` is the spacing from a ring-k neuron to its closest already-placed
/// neighbour (same ring or the ring inside it) and `s_target = radius/rings`.
fn twist_offsets(spec: &DiscSpec, radii: &[f64]) -> Vec<f64> {
    let mut offsets = vec![0.0; spec.rings];
    if spec.geometry == Geometry::Spoke || spec.twist_gain == 0.0 {
        return offsets;
    }
    let pitch = TAU / spec.arms as f64;
    let target = spec.radius / spec.rings as f64;
    let mut step = 0.0;
    for k in 0..spec.rings - 1 {
        let mut spacing = f64::INFINITY;
        if spec.arms > 1 {
            spacing = chord(radii[k], pitch);
        }
        if k > 0 {
            let rel = (offsets[k] - offsets[k - 1]).rem_euclid(pitch);
            let delta = rel.min(pitch - rel);
            let (a, b) = (radii[k], radii[k - 1]);
            let d2 = a * a + b * b - 2.0 * a * b * delta.cos();
            spacing = spacing.min(d2.max(0.0).sqrt());
        }
        if !spacing.is_finite() {
            spacing = target;
        }
        step += spec.twist_gain * (target - spacing) / spec.radius;
        offsets[k + 1] = offsets[k] + step;
    }
    offsets
}

pub fn build_disc(spec: DiscSpec) -> Result<DiscLayout> {
    spec.validate()?;
    let rings = spec.rings;
    let radii: Vec<f64> = (1..=rings)
        .map(|n| spec.radius * n as f64 / rings as f64)
        .collect();
    let offsets = twist_offsets(&spec, &radii);

    let mut positions = Vec::with_capacity(spec.neuron_count());
    let mut cartesian = Vec::with_capacity(spec.neuron_count());
    for arm in 0..spec.arms {
        let base = TAU * arm as f64 / spec.arms as f64;
        for ring in 0..rings {
            let theta = (base + offsets[ring]).rem_euclid(TAU);
            let r = radii[ring];
            positions.push([r, theta]);
            cartesian.push([r * theta.cos(), r * theta.sin()]);
        }
    }

    let mut layout = DiscLayout {
        spec,
        positions,
        uniformity_score: 0.0,
        ring_radius: radii,
        ring_offset: offsets,
        cartesian,
    };
    layout.uniformity_score = coefficient_of_variation(&layout.nearest_neighbor_distances());
    Ok(layout)
}

/// Assignment of frame pixels to disc neurons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PixelMap {
    pub width: usize,
    pub height: usize,
    pub center: (f64, f64),
    pub arms: usize,
    pub rings: usize,
    /// Row-major; `Some(neuron index)` for pixels inside the disc.
    pub assignment: Vec<Option<u32>>,
}

impl PixelMap {
    pub fn neuron_count(&self) -> usize {
        self.arms * self.rings
    }

    /// Number of pixels assigned to each neuron.
    pub fn preimage_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.neuron_count()];
        for idx in self.assignment.iter().flatten() {
            sizes[*idx as usize] += 1;
        }
        sizes
    }

    pub fn empty_neurons(&self) -> usize {
        self.preimage_sizes().iter().filter(|&&s| s == 0).count()
    }

    pub fn assigned_pixels(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }
}

pub fn map_pixels(layout: &DiscLayout, width: usize, height: usize) -> Result<PixelMap> {
    if width == 0 {
        return Err(RpnError::invalid("width", "must be at least 1"));
    }
    if height == 0 {
        return Err(RpnError::invalid("height", "must be at least 1"));
    }
    let radius = layout.spec.radius;
    if radius > width.min(height) as f64 / 2.0 {
        return Err(RpnError::RadiusExceedsFrame {
            radius,
            width,
            height,
        });
    }
    let cx = (width as f64 - 1.0) / 2.0;
    let cy = (height as f64 - 1.0) / 2.0;
    let r2 = radius * radius;
    let assignment: Vec<Option<u32>> = (0..height)
        .into_par_iter()
        .flat_map_iter(|py| {
            (0..width).map(move |px| {
                let dx = px as f64 - cx;
                let dy = py as f64 - cy;
                if dx * dx + dy * dy > r2 {
                    return None;
                }
                layout.nearest(dx, dy, None).map(|(idx, _)| idx as u32)
            })
        })
        .collect();
    Ok(PixelMap {
        width,
        height,
        center: (cx, cy),
        arms: layout.spec.arms,
        rings: layout.spec.rings,
        assignment,
    })
}
