use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rpn_core::timing::{report as timing_report, TimingParams};
use rpn_core::{build_disc, map_pixels, match_stream, Bank, MatchConfig, Pipeline, TemplateStore};
use rpn_harness::config::HarnessConfig;
use rpn_harness::io::load_frame;
use rpn_harness::report::{write_json, write_sweep, write_text};
use rpn_harness::sweep::{self, MetricsOn, SweepConfig};
use rpn_harness::transform::{Interpolation, TransformKind};
use rpn_harness::{corpus, demo};

#[derive(Parser)]
#[command(name = "rpn", version, about = "Ripple pond network simulator and experiment harness")]
struct Cli {
    /// JSON configuration file; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Disc geometry.
    Disc {
        #[command(subcommand)]
        command: DiscCommand,
    },
    /// Run one image through the pipeline (or the bank, when one is configured).
    Run {
        image: PathBuf,
        /// Output directory; JSON goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariance sweep over a corpus.
    Sweep(SweepArgs),
    /// Parallel Gabor/density bank.
    Bank {
        #[command(subcommand)]
        command: BankCommand,
    },
    /// Add an image's bundle to a template store, creating the store if needed.
    Enroll {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        label: String,
        image: PathBuf,
    },
    /// Stream an image's bundle against a template store.
    Match {
        #[arg(long)]
        store: PathBuf,
        image: PathBuf,
        /// Disable pruning.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Recognition latency bounds.
    Timing {
        #[arg(long, default_value_t = 240)]
        t_project_ns: u64,
        #[arg(long, default_value_t = 1)]
        t_ripple_ns: u64,
        #[arg(long, default_value_t = 10)]
        t_pcn_ns: u64,
        #[arg(long, default_value_t = 500)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Demos.
    Demo {
        #[command(subcommand)]
        command: DemoCommand,
    },
    /// Generated test corpus.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Subcommand)]
enum DiscCommand {
    /// Build the configured disc and report its geometry.
    Build {
        /// Frame size used for the pixel assignment statistics.
        #[arg(long, default_value_t = 200)]
        size: usize,
        /// Write the full layout as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BankCommand {
    Run {
        image: PathBuf,
        /// Write the bundle JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Square / octagon templates probed with intact, dashed and corner-cut squares.
    ConnectDots {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = corpus::DEFAULT_SIZE)]
        size: usize,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = corpus::DEFAULT_SIZE)]
        size: usize,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    transform: TransformKind,
    /// Comma-separated step values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    steps: Vec<f64>,
    /// Evenly spaced steps as `start:stop:count`, both ends included.
    #[arg(long, conflicts_with = "steps")]
    range: Option<String>,
    /// Image directory (PGM or PNG); the generated corpus when omitted.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    limit: Option<usize>,
    /// Compare concatenated bank bundles instead of single-disc patterns.
    #[arg(long)]
    bank: bool,
    #[arg(long, value_enum)]
    metrics_on: Option<MetricsOn>,
    #[arg(long, value_enum)]
    interpolation: Option<Interpolation>,
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts[..] else {
        bail!("range must be start:stop:count, got {s:?}");
    };
    let (start, stop): (f64, f64) = (start.parse()?, stop.parse()?);
    let count: usize = count.parse()?;
    Ok(match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
            .collect(),
    })
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("RPN_THREADS") {
        let n: usize = v.parse().with_context(|| format!("RPN_THREADS={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn load_store(path: &Path) -> Result<TemplateStore> {
    let text = fs::read_to_string(path).with_context(|| format!("reading store {}", path.display()))?;
    Ok(TemplateStore::from_json(&text)?)
}

fn emit_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_json(value, path),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    init_threads()?;
    let cfg = match &cli.config {
        Some(path) => HarnessConfig::load(path)?,
        None => HarnessConfig::default(),
    };

    match cli.command {
        Command::Disc {
            command: DiscCommand::Build { size, out },
        } => {
            let layout = build_disc(cfg.disc)?;
            let map = map_pixels(&layout, size, size)?;
            let summary = serde_json::json!({
                "spec": cfg.disc,
                "neurons": cfg.disc.neuron_count(),
                "uniformity_cv": layout.uniformity_score(),
                "frame": [size, size],
                "assigned_pixels": map.assigned_pixels(),
                "empty_neurons": map.empty_neurons(),
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            if let Some(path) = out {
                write_text(&layout.to_json()?, &path)?;
            }
        }
        Command::Run { image, out } => {
            let frame = load_frame(&image)?;
            if cfg.bank.is_some() {
                let bundle = Bank::new(cfg.bank_spec(), frame.width(), frame.height(), cfg.params)?.run(&frame)?;
                let path = out.as_ref().map(|d| d.join("bundle.json"));
                if let Some(d) = &out {
                    fs::create_dir_all(d)?;
                }
                emit_json(&bundle, path.as_deref())?;
            } else {
                let result = Pipeline::new(cfg.disc, frame.width(), frame.height(), cfg.params)?.run(&frame)?;
                match out {
                    Some(dir) => {
                        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                        write_json(&result, &dir.join("tp.json"))?;
                        write_text(&result.raw.to_csv(), &dir.join("tp_raw.csv"))?;
                        write_text(&result.normalized.to_csv(), &dir.join("tp_normalized.csv"))?;
                    }
                    None => emit_json(&result, None)?,
                }
            }
        }
        Command::Sweep(args) => {
            let steps = match &args.range {
                Some(r) => parse_range(r)?,
                None => args.steps.clone(),
            };
            let mut config = SweepConfig::new(cfg.disc, args.transform, steps);
            config.corpus_dir = args.corpus.clone();
            config.bank = args.bank.then(|| cfg.bank_spec());
            config.metrics_on = args.metrics_on.unwrap_or(cfg.metrics_on);
            config.interpolation = args.interpolation.unwrap_or(cfg.interpolation);
            config.seed = args.seed;
            config.limit = args.limit;
            config.params = cfg.params;
            config.validate()?;
            let images = match &config.corpus_dir {
                Some(dir) => corpus::load_dir(dir)?,
                None => corpus::generate(corpus::DEFAULT_SIZE)
                    .into_iter()
                    .map(|c| (c.id, c.frame))
                    .collect(),
            };
            let result = sweep::run(&config, images)?;
            for f in &result.failures {
                eprintln!("skipped {} at {:?}: {}", f.image_id, f.value, f.error);
            }
            write_sweep(&result, &args.out)?;
            write_json(&config, &args.out.join(format!("sweep_{}_config.json", config.transform.name())))?;
            println!("{:>12} {:>6} {:>12} {:>12}", "value", "count", "cosine", "spearman");
            for a in &result.aggregates {
                println!("{:>12.6} {:>6} {:>12.6} {:>12.6}", a.value, a.count, a.cosine_mean, a.spearman_mean);
            }
            println!("failures: {}", result.failure_count());
        }
        Command::Bank {
            command: BankCommand::Run { image, out },
        } => {
            let frame = load_frame(&image)?;
            let bundle = Bank::new(cfg.bank_spec(), frame.width(), frame.height(), cfg.params)?.run(&frame)?;
            emit_json(&bundle, out.as_deref())?;
        }
        Command::Enroll { store, label, image } => {
            let spec = cfg.bank_spec();
            let mut templates = if store.exists() {
                let s = load_store(&store)?;
                if s.bank_spec != spec {
                    bail!("store {} was built with a different bank", store.display());
                }
                s
            } else {
                TemplateStore::new(spec.clone())
            };
            let frame = load_frame(&image)?;
            let bundle = Bank::new(spec, frame.width(), frame.height(), cfg.params)?.run(&frame)?;
            templates.enroll(label.clone(), bundle)?;
            write_text(&templates.to_json()?, &store)?;
            println!("enrolled {label}; store holds {} templates", templates.len());
        }
        Command::Match { store, image, exhaustive } => {
            let templates = load_store(&store)?;
            let frame = load_frame(&image)?;
            let bundle =
                Bank::new(templates.bank_spec.clone(), frame.width(), frame.height(), cfg.params)?.run(&frame)?;
            let matching = if exhaustive { MatchConfig::exhaustive() } else { cfg.matching };
            let state = match_stream(&templates, &bundle, matching)?;
            emit_json(&state, None)?;
        }
        Command::Timing {
            t_project_ns,
            t_ripple_ns,
            t_pcn_ns,
            n,
            json,
        } => {
            let p = TimingParams {
                t_project_ns,
                t_ripple_ns,
                t_pcn_ns,
                n,
            };
            p.validate()?;
            let r = timing_report(&p);
            if json {
                emit_json(&r, None)?;
            } else {
                println!("{:<34} {:>12}", "bound", "ns");
                println!("{:<34} {:>12}", "worst case (ripple then recognize)", r.worst_case_ns);
                println!("{:<34} {:>12}", "overlapped ripple", r.overlapped_ns);
            }
        }
        Command::Demo {
            command: DemoCommand::ConnectDots { out, size },
        } => {
            let report = demo::connect_dots(&cfg.bank_spec(), cfg.params, cfg.matching, size, Some(&out))?;
            print!("{}", report.to_text());
        }
        Command::Corpus {
            command: CorpusCommand::Generate { out, size },
        } => {
            let ids = corpus::write(&out, size)?;
            println!("wrote {} images to {}", ids.len(), out.display());
        }
    }
    Ok(())
}
