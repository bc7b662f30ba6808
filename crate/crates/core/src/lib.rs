//! Ripple pond network simulator.
//!
//! A centered grayscale frame is high-pass filtered, projected onto a disc of
//! radial neuron arms, and rippled outward one ring per tick. The edge ring
//! feeds a summing neuron whose output over time is a one-dimensional temporal
//! pattern: rotating the image only permutes arms, so the pattern is
//! unchanged, and scaling the image only shifts when activity first reaches
//! the edge, which the normalizer undoes.
//!
//! Modules, bottom up:
//! - [`disc`]: disc geometry and the pixel-to-neuron map.
//! - [`prefilter`]: difference-of-Gaussians and Gabor banks.
//! - [`ripple`]: projection, the ripple engine, and the frame shutter.
//! - [`normalize`]: low-pass, time warp, and amplitude normalization.
//! - [`similarity`]: cosine and Spearman metrics.
//! - [`pipeline`] / [`bank`]: single-disc and multi-disc runs.
//! - [`recognizer`]: template store with early-terminating matching.
//! - [`timing`]: recognition latency bounds.

pub mod bank;
pub mod disc;
pub mod error;
pub mod frame;
pub mod normalize;
pub mod pipeline;
pub mod prefilter;
pub mod recognizer;
pub mod ripple;
pub mod similarity;
pub mod timing;

pub use bank::{run_bank, Bank, BankSpec, BundleEntry, TPBundle};
pub use disc::{build_disc, map_pixels, DiscLayout, DiscSpec, Geometry, PixelMap};
pub use error::{Result, RpnError};
pub use frame::Frame;
pub use normalize::{lowpass, normalize, NormalizedTP};
pub use pipeline::{Pipeline, PipelineOutput, PipelineParams};
pub use prefilter::{dog_highpass, gabor_bank, GaborMode, GaborSpec};
pub use recognizer::{match_stream, MatchConfig, MatchState, TemplateStore};
pub use ripple::{gate, project, ripple, ActivationField, RawTemporalPattern, RippleEngine, Shutter};
pub use similarity::{cosine, spearman, SimilarityReport};
pub use timing::{t_recognize, TimingParams};
