use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tempgraph::experiments::{self, ExperimentConfig};
use tempgraph::metrics::{self, Mode};
use tempgraph::pointgraph::ReducedGraph;
use tempgraph::synthgen::{self, GenConfig};
use tempgraph::timeml::{self, RelTypeMap, StatsMode};
use tempgraph::{native, IntervalGraph};

#[derive(Parser)]
#[command(name = "tempgraph", version, about = "Temporal graph closure, reduction and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Relaxed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Relaxed => Mode::Relaxed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Score a candidate annotation against a reference.
    Compare {
        reference: PathBuf,
        candidate: PathBuf,
        #[arg(long, value_enum, default_value = "relaxed")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// relType override file for TimeML inputs.
        #[arg(long)]
        reltype_map: Option<PathBuf>,
    },
    /// Print the saturated graph.
    Closure { file: PathBuf },
    /// Print the transitive reduction of the merged endpoint graph.
    Reduce { file: PathBuf },
    /// Generate a random windowed interval graph.
    Gen {
        #[arg(long)]
        events: usize,
        #[arg(long)]
        range: i64,
        #[arg(long)]
        indet: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the JSON sidecar (stderr by default).
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Recall curves while removing annotated relations.
    DegradeExp {
        reference: PathBuf,
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<f64>>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_delimiter = ',')]
        metrics: Option<Vec<String>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "relaxed")]
        mode: ModeArg,
    },
    /// Precision curves while switching annotated relations.
    DisturbExp {
        reference: PathBuf,
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<f64>>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_delimiter = ',')]
        metrics: Option<Vec<String>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_retries: usize,
        #[arg(long, value_enum, default_value = "relaxed")]
        mode: ModeArg,
    },
    /// Corpus statistics over a directory of TimeML files.
    Stats {
        corpus_dir: PathBuf,
        #[arg(long)]
        time_time: bool,
        #[arg(long)]
        saturate: bool,
        #[arg(long)]
        reltype_map: Option<PathBuf>,
    },
}

fn reltypes(path: Option<&Path>) -> Result<RelTypeMap> {
    Ok(match path {
        Some(p) => RelTypeMap::from_override_file(p).with_context(|| format!("reading {}", p.display()))?,
        None => RelTypeMap::default(),
    })
}

/// Native files by default; `.tml` and `.xml` are read as TimeML.
fn load(path: &Path, map: &RelTypeMap) -> Result<IntervalGraph> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    if matches!(ext, "tml" | "xml") {
        let doc = timeml::parse_timeml_file(path).with_context(|| format!("reading {}", path.display()))?;
        let conv = timeml::to_interval_graph(&doc, false, map);
        for w in &conv.warnings {
            eprintln!("warning: {}: {w}", path.display());
        }
        return Ok(conv.graph);
    }
    let text = std::fs::read_to_string(path)
        .map_err(tempgraph::Error::from)
        .with_context(|| format!("reading {}", path.display()))?;
    native::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn experiment(
    fractions: Option<Vec<f64>>,
    trials: usize,
    metrics: Option<Vec<String>>,
    seed: u64,
    mode: ModeArg,
    base: ExperimentConfig,
) -> ExperimentConfig {
    ExperimentConfig {
        fractions: fractions.unwrap_or(base.fractions),
        trials,
        metrics: metrics.unwrap_or(base.metrics),
        seed,
        mode: mode.into(),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compare { reference, candidate, mode, format, reltype_map } => {
            let map = reltypes(reltype_map.as_deref())?;
            let k = load(&reference, &map)?;
            let g = load(&candidate, &map)?;
            let report = metrics::evaluate(&k, &g, mode.into())?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => {
                    println!("{}", metrics::CSV_HEADER);
                    print!("{}", report.csv_rows(&stem(&candidate)));
                }
            }
        }
        Command::Closure { file } => {
            let g = load(&file, &RelTypeMap::default())?;
            print!("{}", native::serialize(&g.saturate()?));
        }
        Command::Reduce { file } => {
            let g = load(&file, &RelTypeMap::default())?;
            print!("{}", ReducedGraph::from_interval_graph(&g)?.serialize_debug());
        }
        Command::Gen { events, range, indet, seed, sidecar } => {
            let cfg = GenConfig { events, range, indet, seed };
            let (g, summary) = synthgen::generate_with_summary(&cfg)?;
            print!("{}", native::serialize(&g));
            let json = serde_json::to_string_pretty(&summary)?;
            match sidecar {
                Some(p) => std::fs::write(&p, json + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => eprintln!("{json}"),
            }
        }
        Command::DegradeExp { reference, fractions, trials, metrics, seed, mode } => {
            let k = load(&reference, &RelTypeMap::default())?;
            let cfg = experiment(fractions, trials, metrics, seed, mode, ExperimentConfig::degradation_default(seed));
            print!("{}", experiments::curve_csv(&experiments::degradation_curve(&k, &cfg)?));
        }
        Command::DisturbExp { reference, fractions, trials, metrics, seed, max_retries, mode } => {
            let k = load(&reference, &RelTypeMap::default())?;
            let cfg = experiment(fractions, trials, metrics, seed, mode, ExperimentConfig::disturbance_default(seed));
            print!(
                "{}",
                experiments::curve_csv(&experiments::disturbance_curve(&k, &cfg, max_retries)?)
            );
        }
        Command::Stats { corpus_dir, time_time, saturate, reltype_map } => {
            let map = reltypes(reltype_map.as_deref())?;
            let docs = timeml::load_corpus(&corpus_dir)?;
            let stats = timeml::mode_stats(&docs, StatsMode { time_time, saturate }, &map);
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<tempgraph::Error>() {
        Some(e) if e.is_parse() => 2,
        Some(e) if e.is_inconsistency() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
