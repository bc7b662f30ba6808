//! Connect-the-dots demo: square and octagon templates, probed with an intact,
//! a dashed and a corner-cut square.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use rpn_core::similarity::cosine;
use rpn_core::{match_stream, Bank, BankSpec, Frame, MatchConfig, PipelineParams, TemplateStore};

use crate::corpus::{corner_cut_square, dashed_square, octagon_outline, square_outline};
use crate::io::save_png;
use crate::report::write_json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub probe: String,
    pub decided: String,
    pub confidence: f64,
    pub decided_at_tick: usize,
    pub total_samples: usize,
    /// Cosine against every template over the full bundle.
    pub full_scores: Vec<(String, f64)>,
    pub alive_history: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub outcomes: Vec<ProbeOutcome>,
}

impl DemoReport {
    pub fn outcome(&self, probe: &str) -> Option<&ProbeOutcome> {
        self.outcomes.iter().find(|o| o.probe == probe)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("probe                decided   confidence  decided_at/total\n");
        for o in &self.outcomes {
            let _ = writeln!(
                s,
                "{:<20} {:<9} {:>10.4}  {}/{}",
                o.probe, o.decided, o.confidence, o.decided_at_tick, o.total_samples
            );
            for (label, score) in &o.full_scores {
                let _ = writeln!(s, "    full-bundle cosine vs {label:<8} {score:.4}");
            }
        }
        s
    }
}

pub fn templates(size: usize) -> Vec<(&'static str, Frame)> {
    vec![("square", square_outline(size)), ("octagon", octagon_outline(size))]
}

pub fn probes(size: usize) -> Vec<(&'static str, Frame)> {
    vec![
        ("intact-square", square_outline(size)),
        ("dashed-square", dashed_square(size, 4)),
        ("corner-cut-square", corner_cut_square(size, 0.5)),
    ]
}

/// Enroll the templates, match every probe, and optionally write images and
/// reports to `out_dir`.
pub fn connect_dots(
    bank_spec: &BankSpec,
    params: PipelineParams,
    matching: MatchConfig,
    size: usize,
    out_dir: Option<&Path>,
) -> Result<DemoReport> {
    let bank = Bank::new(bank_spec.clone(), size, size, params)?;
    let mut store = TemplateStore::new(bank_spec.clone());
    for (label, frame) in templates(size) {
        store.enroll(label, bank.run(&frame)?)?;
    }
    let mut outcomes = Vec::new();
    for (name, frame) in probes(size) {
        let bundle = bank.run(&frame)?;
        let state = match_stream(&store, &bundle, matching)?;
        let decision = state.decided.expect("match_stream always decides");
        let x = bundle.concatenated();
        let full_scores = store
            .templates
            .iter()
            .map(|t| Ok((t.label.clone(), cosine(&x, &t.bundle.concatenated())?)))
            .collect::<Result<Vec<_>>>()?;
        outcomes.push(ProbeOutcome {
            probe: name.to_string(),
            decided: decision.label,
            confidence: decision.confidence,
            decided_at_tick: decision.decided_at_tick,
            total_samples: state.total_samples,
            full_scores,
            alive_history: state.alive_history,
        });
    }
    let report = DemoReport { outcomes };
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, frame) in templates(size).into_iter().chain(probes(size)) {
            save_png(&frame, &dir.join(format!("{name}.png")))?;
        }
        write_json(&report, &dir.join("connect_dots.json"))?;
        fs::write(dir.join("connect_dots.txt"), report.to_text())?;
    }
    Ok(report)
}
