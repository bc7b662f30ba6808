//! Single-disc pipeline: high-pass, project, ripple, normalize.

use serde::{Deserialize, Serialize};

use crate::disc::{build_disc, map_pixels, DiscLayout, DiscSpec, PixelMap};
use crate::error::{Result, RpnError};
use crate::frame::Frame;
use crate::normalize::{normalize, NormalizedTP, DEFAULT_ALPHA};
use crate::prefilter::{dog_highpass, DEFAULT_DOG_SIGMAS};
use crate::ripple::{project, ripple, ActivationField, RawTemporalPattern};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineParams {
    pub dog_sigma1: f64,
    pub dog_sigma2: f64,
    /// Per-neuron activation floor applied at projection.
    pub threshold: f64,
    /// Low-pass coefficient for normalization.
    pub alpha: f64,
    /// Canonical normalized length; defaults to the disc's ring count.
    pub n_canon: Option<usize>,
    /// When set, activations are binarized at this level before the ripple.
    pub binarize: Option<f64>,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            dog_sigma1: DEFAULT_DOG_SIGMAS.0,
            dog_sigma2: DEFAULT_DOG_SIGMAS.1,
            threshold: 0.0,
            alpha: DEFAULT_ALPHA,
            n_canon: None,
            binarize: None,
        }
    }
}

impl PipelineParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold.is_finite() && self.threshold >= 0.0) {
            return Err(RpnError::invalid("threshold", "must be finite and >= 0"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(RpnError::invalid("alpha", "must lie in (0, 1]"));
        }
        if self.n_canon == Some(0) {
            return Err(RpnError::invalid("n_canon", "must be at least 1"));
        }
        if !(self.dog_sigma1 > 0.0 && self.dog_sigma2 > self.dog_sigma1) {
            return Err(RpnError::invalid("dog_sigma2", "need 0 < dog_sigma1 < dog_sigma2"));
        }
        Ok(())
    }

    pub fn canonical_len(&self, rings: usize) -> usize {
        self.n_canon.unwrap_or(rings)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub raw: RawTemporalPattern,
    pub normalized: NormalizedTP,
}

/// A disc bound to one frame size, reusable across frames.
#[derive(Debug, Clone)]
pub struct Pipeline {
    layout: DiscLayout,
    map: PixelMap,
    params: PipelineParams,
}

impl Pipeline {
    pub fn new(disc: DiscSpec, width: usize, height: usize, params: PipelineParams) -> Result<Self> {
        params.validate()?;
        let layout = build_disc(disc)?;
        let map = map_pixels(&layout, width, height)?;
        Ok(Self {
            layout,
            map,
            params,
        })
    }

    pub fn layout(&self) -> &DiscLayout {
        &self.layout
    }

    pub fn pixel_map(&self) -> &PixelMap {
        &self.map
    }

    pub fn params(&self) -> &PipelineParams {
        &self.params
    }

    /// Project an already filtered frame.
    pub fn field(&self, filtered: &Frame) -> Result<ActivationField> {
        let field = project(filtered, &self.map, self.params.threshold)?;
        Ok(match self.params.binarize {
            Some(level) => field.binarized(level),
            None => field,
        })
    }

    pub fn highpass(&self, frame: &Frame) -> Result<Frame> {
        dog_highpass(frame, self.params.dog_sigma1, self.params.dog_sigma2)
    }

    /// Ripple and normalize an already filtered frame.
    pub fn run_filtered(&self, filtered: &Frame) -> Result<PipelineOutput> {
        let raw = ripple(&self.field(filtered)?);
        let normalized = normalize(
            &raw,
            self.params.canonical_len(self.layout.spec().rings),
            self.params.alpha,
        )?;
        Ok(PipelineOutput { raw, normalized })
    }

    /// Full chain from an unfiltered frame.
    pub fn run(&self, frame: &Frame) -> Result<PipelineOutput> {
        self.run_filtered(&self.highpass(frame)?)
    }
}
