//! Invariance sweeps: transform every corpus image over a list of steps and
//! compare each result's temporal pattern against the untransformed one.

use std::path::PathBuf;

use anyhow::{bail, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rpn_core::similarity::compare;
use rpn_core::{Bank, BankSpec, DiscSpec, Frame, Pipeline, PipelineParams};

use crate::transform::{apply, Interpolation, TransformKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MetricsOn {
    Raw,
    #[default]
    Normalized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Image directory; `None` uses the generated corpus.
    #[serde(default)]
    pub corpus_dir: Option<PathBuf>,
    pub disc: DiscSpec,
    #[serde(default)]
    pub bank: Option<BankSpec>,
    pub transform: TransformKind,
    pub steps: Vec<f64>,
    #[serde(default)]
    pub metrics_on: MetricsOn,
    /// Only used to shuffle the corpus before `limit` is applied.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub limit: Option<usize>,
    #[serde(default)]
    pub interpolation: Interpolation,
    #[serde(default)]
    pub params: PipelineParams,
}

impl SweepConfig {
    pub fn new(disc: DiscSpec, transform: TransformKind, steps: Vec<f64>) -> Self {
        Self {
            corpus_dir: None,
            disc,
            bank: None,
            transform,
            steps,
            metrics_on: MetricsOn::Normalized,
            seed: 0,
            limit: None,
            interpolation: Interpolation::Bilinear,
            params: PipelineParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.disc.validate()?;
        self.params.validate()?;
        if let Some(bank) = &self.bank {
            bank.validate()?;
            if self.metrics_on == MetricsOn::Raw {
                bail!("metrics_on = raw needs a single disc; bank outputs are normalized");
            }
        }
        if self.steps.is_empty() {
            bail!("steps: at least one step required");
        }
        for &s in &self.steps {
            let ok = s.is_finite()
                && match self.transform {
                    TransformKind::Rotation => true,
                    TransformKind::Scale => s > 0.0,
                    TransformKind::Shift => (0.0..=0.5).contains(&s),
                };
            if !ok {
                bail!("steps: {s} is not a valid {} step", self.transform.name());
            }
        }
        if self.limit == Some(0) {
            bail!("limit: must be at least 1");
        }
        Ok(())
    }
}

/// Frame-to-vector front end used by sweeps and the CLI: a single disc or a
/// bank, bound to one frame size.
#[derive(Debug, Clone)]
pub enum Encoder {
    Disc(Pipeline, MetricsOn),
    Bank(Bank),
}

impl Encoder {
    pub fn new(
        disc: DiscSpec,
        bank: Option<&BankSpec>,
        metrics_on: MetricsOn,
        params: PipelineParams,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        Ok(match bank {
            Some(spec) => Encoder::Bank(Bank::new(spec.clone(), width, height, params)?),
            None => Encoder::Disc(Pipeline::new(disc, width, height, params)?, metrics_on),
        })
    }

    pub fn encode(&self, frame: &Frame) -> Result<Vec<f64>> {
        Ok(match self {
            Encoder::Disc(p, MetricsOn::Raw) => p.run(frame)?.raw.samples,
            Encoder::Disc(p, MetricsOn::Normalized) => p.run(frame)?.normalized.samples,
            Encoder::Bank(b) => b.run(frame)?.concatenated(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub image_id: String,
    pub transform: TransformKind,
    pub value: f64,
    pub cosine: f64,
    pub spearman: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub value: f64,
    pub count: usize,
    pub cosine_mean: f64,
    pub cosine_var: f64,
    pub spearman_mean: f64,
    pub spearman_var: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub image_id: String,
    /// `None` when the untransformed image itself failed.
    pub value: Option<f64>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub transform: TransformKind,
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<Aggregate>,
    pub failures: Vec<SweepFailure>,
}

impl SweepResult {
    pub fn failure_count(&self) -> usize {
        self.failures.len()
    }

    pub fn aggregate(&self, value: f64) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.value == value)
    }
}

fn mean_var(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// Per-step mean and population variance, in step order.
pub fn aggregate(rows: &[SweepRow], steps: &[f64]) -> Vec<Aggregate> {
    steps
        .iter()
        .map(|&value| {
            let at: Vec<&SweepRow> = rows.iter().filter(|r| r.value == value).collect();
            let cos: Vec<f64> = at.iter().map(|r| r.cosine).collect();
            let sp: Vec<f64> = at.iter().map(|r| r.spearman).collect();
            let (cosine_mean, cosine_var) = mean_var(&cos);
            let (spearman_mean, spearman_var) = mean_var(&sp);
            Aggregate {
                value,
                count: at.len(),
                cosine_mean,
                cosine_var,
                spearman_mean,
                spearman_var,
            }
        })
        .collect()
}

/// Shuffle with `seed` and keep the first `limit` images.
pub fn select(mut images: Vec<(String, Frame)>, seed: u64, limit: Option<usize>) -> Vec<(String, Frame)> {
    images.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    if let Some(n) = limit {
        images.truncate(n);
    }
    images
}

/// Run the sweep over an already loaded corpus. Images must share one size.
pub fn run(config: &SweepConfig, images: Vec<(String, Frame)>) -> Result<SweepResult> {
    config.validate()?;
    if images.is_empty() {
        bail!("corpus is empty");
    }
    let images = select(images, config.seed, config.limit);
    let (w, h) = (images[0].1.width(), images[0].1.height());
    if let Some((id, _)) = images.iter().find(|(_, f)| (f.width(), f.height()) != (w, h)) {
        bail!("image {id} differs in size from {w}x{h}");
    }
    let encoder = Encoder::new(
        config.disc,
        config.bank.as_ref(),
        config.metrics_on,
        config.params,
        w,
        h,
    )?;

    type Cell = std::result::Result<SweepRow, SweepFailure>;
    let per_image: Vec<Vec<Cell>> = images
        .par_iter()
        .map(|(id, frame)| {
            let baseline = match encoder.encode(frame) {
                Ok(v) => v,
                Err(e) => {
                    return vec![Err(SweepFailure {
                        image_id: id.clone(),
                        value: None,
                        error: e.to_string(),
                    })]
                }
            };
            config
                .steps
                .iter()
                .map(|&value| {
                    let moved = apply(frame, config.transform, value, config.interpolation);
                    encoder
                        .encode(&moved)
                        .and_then(|v| Ok(compare(&baseline, &v)?))
                        .map(|r| SweepRow {
                            image_id: id.clone(),
                            transform: config.transform,
                            value,
                            cosine: r.cosine,
                            spearman: r.spearman,
                        })
                        .map_err(|e| SweepFailure {
                            image_id: id.clone(),
                            value: Some(value),
                            error: e.to_string(),
                        })
                })
                .collect()
        })
        .collect();

    let (mut rows, mut failures) = (Vec::new(), Vec::new());
    for cell in per_image.into_iter().flatten() {
        match cell {
            Ok(r) => rows.push(r),
            Err(f) => failures.push(f),
        }
    }
    Ok(SweepResult {
        transform: config.transform,
        aggregates: aggregate(&rows, &config.steps),
        rows,
        failures,
    })
}
