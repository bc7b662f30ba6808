//! Parallel heterogeneous discs: radial Gabor orientations × ring densities.
//!
//! Coarse discs keep the arm count and radius of the base disc and only drop
//! rings, so every density sees the whole image and a coarse ripple finishes
//! in fewer ticks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disc::DiscSpec;
use crate::error::{Result, RpnError};
use crate::frame::Frame;
use crate::normalize::NormalizedTP;
use crate::pipeline::{Pipeline, PipelineParams};
use crate::prefilter::{default_radial_bank, gabor_bank, GaborMode, GaborSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankSpec {
    pub orientations: Vec<GaborSpec>,
    /// Rings per arm for each disc, finest first.
    pub densities: Vec<usize>,
    pub base: DiscSpec,
}

impl BankSpec {
    /// `levels` discs with `N, ⌊N/2⌋, ⌊N/4⌋, …` rings (duplicates and zeros dropped).
    pub fn halving(base: DiscSpec, orientations: Vec<GaborSpec>, levels: usize) -> Self {
        let mut densities: Vec<usize> = (0..levels)
            .map(|k| base.rings >> k)
            .filter(|&d| d > 0)
            .collect();
        densities.dedup();
        Self {
            orientations,
            densities,
            base,
        }
    }

    /// Radial 0°/45°/90° channels on N, N/2, N/4 discs.
    pub fn standard(base: DiscSpec) -> Self {
        Self::halving(base, default_radial_bank(), 3)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.orientations.is_empty() {
            return Err(RpnError::invalid("orientations", "at least one required"));
        }
        for o in &self.orientations {
            o.validate()?;
            if o.mode != GaborMode::Radial {
                return Err(RpnError::invalid("orientations", "bank channels must be radial"));
            }
        }
        if self.densities.is_empty() {
            return Err(RpnError::invalid("densities", "at least one required"));
        }
        if self.densities.iter().any(|&d| d == 0 || d > self.base.rings) {
            return Err(RpnError::invalid(
                "densities",
                format!("each must lie in 1..={}", self.base.rings),
            ));
        }
        if self.densities.windows(2).any(|w| w[1] >= w[0]) {
            return Err(RpnError::invalid("densities", "must be strictly decreasing"));
        }
        Ok(())
    }

    pub fn entry_count(&self) -> usize {
        self.orientations.len() * self.densities.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleEntry {
    pub orientation_index: usize,
    pub density_index: usize,
    pub orientation_deg: f64,
    pub rings: usize,
    /// Ticks until the disc emptied.
    pub completion_tick: usize,
    pub tp: NormalizedTP,
}

/// `orientations × densities` normalized patterns, orientation-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TPBundle {
    pub orientations: usize,
    pub densities: usize,
    pub entries: Vec<BundleEntry>,
}

impl TPBundle {
    pub fn entry(&self, orientation: usize, density: usize) -> &BundleEntry {
        &self.entries[orientation * self.densities + density]
    }

    pub fn completion_tick(&self, orientation: usize, density: usize) -> usize {
        self.entry(orientation, density).completion_tick
    }

    /// Indices of entries in delivery order: earliest completion first, then
    /// coarser disc, then orientation.
    pub fn delivery_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_by_key(|&k| {
            let e = &self.entries[k];
            (e.completion_tick, e.rings, e.orientation_index)
        });
        order
    }

    /// Total sample count across entries.
    pub fn sample_count(&self) -> usize {
        self.entries.iter().map(|e| e.tp.len()).sum()
    }

    /// All samples concatenated in entry order.
    pub fn concatenated(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| e.tp.samples.iter().copied())
            .collect()
    }

    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.entries.iter().map(|e| (e.rings, e.tp.len())).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.entries)?)
    }
}

/// A bank bound to a frame size, holding one pipeline per density.
#[derive(Debug, Clone)]
pub struct Bank {
    spec: BankSpec,
    discs: Vec<Pipeline>,
}

impl Bank {
    pub fn new(spec: BankSpec, width: usize, height: usize, params: PipelineParams) -> Result<Self> {
        spec.validate()?;
        let discs = spec
            .densities
            .par_iter()
            .map(|&d| Pipeline::new(spec.base.with_rings(d), width, height, params))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spec, discs })
    }

    pub fn spec(&self) -> &BankSpec {
        &self.spec
    }

    pub fn disc(&self, density_index: usize) -> &Pipeline {
        &self.discs[density_index]
    }

    pub fn run(&self, frame: &Frame) -> Result<TPBundle> {
        let channels = gabor_bank(frame, &self.spec.orientations)?;
        let nd = self.discs.len();
        let entries = (0..channels.len() * nd)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / nd, k % nd);
                let out = self.discs[j].run_filtered(&channels[i])?;
                Ok(BundleEntry {
                    orientation_index: i,
                    density_index: j,
                    orientation_deg: self.spec.orientations[i].orientation_degrees(),
                    rings: self.spec.densities[j],
                    completion_tick: out.raw.completion_tick,
                    tp: out.normalized,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TPBundle {
            orientations: channels.len(),
            densities: nd,
            entries,
        })
    }
}

pub fn run_bank(frame: &Frame, spec: &BankSpec, params: PipelineParams) -> Result<TPBundle> {
    Bank::new(spec.clone(), frame.width(), frame.height(), params)?.run(frame)
}
