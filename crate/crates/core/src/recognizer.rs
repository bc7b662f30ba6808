//! Template store with streaming, early-terminating recognition.
//!
//! Stands in for a downstream temporal-pattern memory. Probes are consumed
//! one sample at a time in delivery order (coarse discs first). Every alive
//! template keeps a running prefix distance to the probe; templates that drift
//! past the prune threshold are switched off. Recognition is decided as soon
//! as a single template survives a whole pattern, or when the probe runs out.
//!
//! The prefix distance is the Euclidean distance between the unit-normalized
//! consumed prefixes, `‖x/‖x‖ − y/‖y‖‖ = √(2 − 2·cos)`, so it lives in
//! `[0, 2]` and ignores overall amplitude.

use serde::{Deserialize, Serialize};

use crate::bank::{BankSpec, TPBundle};
use crate::error::{Result, RpnError};

pub const STORE_SCHEMA: &str = "rpn-template-store/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Template {
    pub label: String,
    pub bundle: TPBundle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateStore {
    pub schema: String,
    pub bank_spec: BankSpec,
    pub templates: Vec<Template>,
}

impl TemplateStore {
    pub fn new(bank_spec: BankSpec) -> Self {
        Self {
            schema: STORE_SCHEMA.to_string(),
            bank_spec,
            templates: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.templates.iter().map(|t| t.label.as_str())
    }

    pub fn get(&self, label: &str) -> Option<&Template> {
        self.templates.iter().find(|t| t.label == label)
    }

    /// Check that `bundle` has this store's (orientation, density, length) layout.
    pub fn check_shape(&self, bundle: &TPBundle) -> Result<()> {
        let spec = &self.bank_spec;
        if bundle.orientations != spec.orientations.len()
            || bundle.densities != spec.densities.len()
            || bundle.entries.len() != spec.entry_count()
        {
            return Err(RpnError::ShapeMismatch(format!(
                "expected {}x{} entries, got {}x{} ({} entries)",
                spec.orientations.len(),
                spec.densities.len(),
                bundle.orientations,
                bundle.densities,
                bundle.entries.len()
            )));
        }
        for (k, e) in bundle.entries.iter().enumerate() {
            let (i, j) = (k / bundle.densities, k % bundle.densities);
            if e.orientation_index != i || e.density_index != j || e.rings != spec.densities[j] {
                return Err(RpnError::ShapeMismatch(format!(
                    "entry {k} is ({}, {}) with {} rings, expected ({i}, {j}) with {}",
                    e.orientation_index, e.density_index, e.rings, spec.densities[j]
                )));
            }
        }
        if let Some(first) = self.templates.first() {
            if first.bundle.shape() != bundle.shape() {
                return Err(RpnError::ShapeMismatch(
                    "pattern lengths differ from enrolled templates".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn enroll(&mut self, label: impl Into<String>, bundle: TPBundle) -> Result<()> {
        let label = label.into();
        if self.get(&label).is_some() {
            return Err(RpnError::DuplicateLabel(label));
        }
        self.check_shape(&bundle)?;
        self.templates.push(Template { label, bundle });
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let store: TemplateStore = serde_json::from_str(s)?;
        if store.schema != STORE_SCHEMA {
            return Err(RpnError::Schema(store.schema));
        }
        store.bank_spec.validate()?;
        Ok(store)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    /// Prefix distance above which a template is switched off. `f64::INFINITY`
    /// disables pruning.
    pub prune_threshold: f64,
    /// Samples to consume before pruning starts.
    pub warmup: usize,
}

impl MatchConfig {
    pub fn exhaustive() -> Self {
        Self {
            prune_threshold: f64::INFINITY,
            warmup: 0,
        }
    }
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            prune_threshold: 0.35,
            warmup: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub label: String,
    /// Cosine similarity over the consumed samples.
    pub confidence: f64,
    /// Samples consumed when the decision was taken.
    pub decided_at_tick: usize,
    /// Other alive candidates with exactly the same confidence; the earliest
    /// enrolled one wins.
    pub tied_with: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateState {
    pub label: String,
    pub alive: bool,
    pub prefix_distance: f64,
    /// Consumed-sample count at which the candidate was switched off.
    pub pruned_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchState {
    /// Candidates in enrollment order.
    pub candidates: Vec<CandidateState>,
    pub consumed: usize,
    pub total_samples: usize,
    /// `(consumed, alive count)` every time the alive set shrank.
    pub alive_history: Vec<(usize, usize)>,
    pub decided: Option<Decision>,
}

impl MatchState {
    pub fn alive(&self) -> Vec<&str> {
        self.candidates
            .iter()
            .filter(|c| c.alive)
            .map(|c| c.label.as_str())
            .collect()
    }

    pub fn alive_count(&self) -> usize {
        self.candidates.iter().filter(|c| c.alive).count()
    }
}

#[derive(Clone, Copy, Default)]
struct Running {
    dot: f64,
    yy: f64,
}

fn prefix_cosine(dot: f64, xx: f64, yy: f64) -> f64 {
    match (xx > 0.0, yy > 0.0) {
        (true, true) => (dot / (xx * yy).sqrt()).clamp(-1.0, 1.0),
        (false, false) => 1.0,
        _ => 0.0,
    }
}

fn prefix_distance(dot: f64, xx: f64, yy: f64) -> f64 {
    if xx == 0.0 && yy == 0.0 {
        return 0.0;
    }
    if xx == 0.0 || yy == 0.0 {
        return 1.0;
    }
    (2.0 - 2.0 * prefix_cosine(dot, xx, yy)).max(0.0).sqrt()
}

/// Index of the best-scoring candidate, earliest enrollment on ties.
fn argmax_by<F: Fn(usize) -> f64>(indices: impl Iterator<Item = usize>, score: F) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in indices {
        let s = score(i);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

pub fn match_stream(store: &TemplateStore, probe: &TPBundle, config: MatchConfig) -> Result<MatchState> {
    if store.is_empty() {
        return Err(RpnError::EmptyStore);
    }
    if config.prune_threshold.is_nan() || config.prune_threshold <= 0.0 {
        return Err(RpnError::invalid("prune_threshold", "must be > 0"));
    }
    store.check_shape(probe)?;

    let n = store.len();
    let mut running = vec![Running::default(); n];
    let mut xx = 0.0;
    let mut state = MatchState {
        candidates: store
            .templates
            .iter()
            .map(|t| CandidateState {
                label: t.label.clone(),
                alive: true,
                prefix_distance: 0.0,
                pruned_at: None,
            })
            .collect(),
        consumed: 0,
        total_samples: probe.sample_count(),
        alive_history: Vec::new(),
        decided: None,
    };

    'entries: for k in probe.delivery_order() {
        let probe_samples = &probe.entries[k].tp.samples;
        for (s, &x) in probe_samples.iter().enumerate() {
            xx += x * x;
            state.consumed += 1;
            for (c, cand) in state.candidates.iter_mut().enumerate() {
                if !cand.alive {
                    continue;
                }
                let y = store.templates[c].bundle.entries[k].tp.samples[s];
                running[c].dot += x * y;
                running[c].yy += y * y;
                cand.prefix_distance = prefix_distance(running[c].dot, xx, running[c].yy);
            }
            if state.consumed < config.warmup {
                continue;
            }
            let over: Vec<usize> = (0..n)
                .filter(|&c| {
                    state.candidates[c].alive
                        && state.candidates[c].prefix_distance > config.prune_threshold
                })
                .collect();
            let alive_now = state.alive_count();
            // A sample that rules out every candidate carries no ranking
            // information, so nobody is switched off.
            if over.is_empty() || over.len() == alive_now {
                continue;
            }
            for c in over {
                state.candidates[c].alive = false;
                state.candidates[c].pruned_at = Some(state.consumed);
            }
            state.alive_history.push((state.consumed, state.alive_count()));
        }
        if state.alive_count() == 1 {
            break 'entries;
        }
    }

    let best = argmax_by(
        (0..n).filter(|&c| state.candidates[c].alive),
        |c| prefix_cosine(running[c].dot, xx, running[c].yy),
    )
    .expect("at least one candidate stays alive");
    let confidence = prefix_cosine(running[best].dot, xx, running[best].yy);
    let tied_with = (0..n)
        .filter(|&c| {
            c != best
                && state.candidates[c].alive
                && prefix_cosine(running[c].dot, xx, running[c].yy) == confidence
        })
        .map(|c| store.templates[c].label.clone())
        .collect();
    state.decided = Some(Decision {
        label: store.templates[best].label.clone(),
        confidence,
        decided_at_tick: state.consumed,
        tied_with,
    });
    Ok(state)
}
