use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pysmell::config::AdapterConfig;
use pysmell::metrics::Normalization;
use pysmell::miner::{ManifestHistory, MlImports};
use pysmell::report::read_report;
use pysmell::stages::StageConfig;
use pysmell::SmellKind;
use pysmell_cli::commands::{self, to_pretty, write_output};
use pysmell_cli::github::{GitHub, DEFAULT_API};
use serde_json::json;

#[derive(Parser)]
#[command(name = "pysmell", version, about = "Find performance smells in Python code and study them across corpora")]
struct Cli {
    /// JSON tool configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan files or directories and write a detection report
    Scan(ScanArgs),
    /// Compare smell densities of two corpora
    Compare(CompareArgs),
    /// Tag files with ML pipeline stages and tabulate smells per stage
    Classify(ClassifyArgs),
    /// Search GitHub for candidate repositories and screen them
    Mine(MineArgs),
    /// Cohen's kappa between two label files
    Kappa { labels_a: PathBuf, labels_b: PathBuf },
    /// Summary statistics and histogram data for two corpora
    PlotData(PlotArgs),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Report file (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write per-file line counts, grouped by project
    #[arg(long)]
    loc_output: Option<PathBuf>,
    /// Worker threads
    #[arg(short, long, default_value_t = default_jobs())]
    jobs: usize,
    /// Only run these smell kinds (by name, e.g. "Chain Compare")
    #[arg(long, value_delimiter = ',')]
    kinds: Vec<String>,
    /// Exit with status 1 when anything is detected
    #[arg(long)]
    fail_on_smell: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    Kloc,
    SmellyFile,
}

impl From<Norm> for Normalization {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Kloc => Normalization::Kloc,
            Norm::SmellyFile => Normalization::SmellyFile,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Corpora {
    #[arg(long)]
    report_a: PathBuf,
    #[arg(long)]
    loc_a: PathBuf,
    #[arg(long)]
    report_b: PathBuf,
    #[arg(long)]
    loc_b: PathBuf,
    #[arg(long, value_enum, default_value = "kloc")]
    normalize: Norm,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    corpora: Corpora,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    #[command(flatten)]
    corpora: Corpora,
    /// Restrict to one smell kind; all kinds are summed otherwise
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Keyword and stage description config (bundled defaults when omitted)
    #[arg(long)]
    keywords: Option<PathBuf>,
    /// Base URL of a scoring service
    #[arg(long, conflicts_with = "adapter_cmd")]
    adapter_url: Option<String>,
    /// Scoring process speaking line-delimited JSON on stdio
    #[arg(long, num_args = 1.., allow_hyphen_values = true)]
    adapter_cmd: Option<Vec<String>>,
    #[arg(long, default_value_t = 10_000)]
    adapter_timeout_ms: u64,
    #[arg(long)]
    threshold: Option<f64>,
    /// Match keywords only in imports and call sites
    #[arg(long)]
    strict: bool,
    /// Existing scan report of the same files
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(short, long, default_value_t = default_jobs())]
    jobs: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MlMode {
    Require,
    Forbid,
    Ignore,
}

#[derive(Args)]
struct MineArgs {
    /// Domain keywords, one search query each
    #[arg(long = "keyword", required_unless_present = "replay")]
    keywords: Vec<String>,
    /// Appended to every query, e.g. "machine learning"
    #[arg(long)]
    suffix: Option<String>,
    #[arg(long, default_value_t = 50)]
    top_n: usize,
    #[arg(long, value_enum)]
    ml_imports: Option<MlMode>,
    /// Manifest file; new snapshots are appended
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value = DEFAULT_API)]
    api_base: String,
    /// Re-screen the latest snapshot's repositories without calling the API
    #[arg(long)]
    replay: bool,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn parse_kinds(names: &[String]) -> Result<Vec<SmellKind>> {
    names.iter().map(|n| n.trim().parse::<SmellKind>().map_err(Into::into)).collect()
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut config = commands::load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Scan(args) => {
            if !args.kinds.is_empty() {
                config.enabled = parse_kinds(&args.kinds)?.into_iter().collect();
            }
            let (report, loc) = commands::scan(&args.paths, &config, args.jobs)?;
            write_output(args.output.as_deref(), &report.to_json())?;
            if let Some(p) = &args.loc_output {
                write_output(Some(p), &to_pretty(&loc)?)?;
            }
            if !report.parse_errors.is_empty() {
                eprintln!("{} file(s) could not be parsed", report.parse_errors.len());
            }
            if args.fail_on_smell && !report.detections.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Compare(args) => {
            let c = &args.corpora;
            let table = commands::compare((&c.report_a, &c.loc_a), (&c.report_b, &c.loc_b), c.normalize.into())?;
            let text = match args.format {
                Format::Text => table.to_text(),
                Format::Json => to_pretty(&json!({ "config": config.to_value(), "comparison": table }))?,
            };
            write_output(args.output.as_deref(), &text)?;
        }
        Command::PlotData(args) => {
            let c = &args.corpora;
            let kind = args.kind.as_deref().map(str::parse::<SmellKind>).transpose()?;
            let data = commands::plot((&c.report_a, &c.loc_a), (&c.report_b, &c.loc_b), c.normalize.into(), kind, args.bins)?;
            write_output(args.output.as_deref(), &to_pretty(&json!({ "config": config.to_value(), "plot": data }))?)?;
        }
        Command::Classify(args) => {
            let keyword_path = args.keywords.clone().or_else(|| config.keyword_config.clone());
            let mut stages = match &keyword_path {
                Some(p) => StageConfig::from_json(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
                None => StageConfig::default(),
            };
            stages.strict |= args.strict;
            if let Some(t) = args.threshold {
                config.classifier_threshold = t;
            }
            if let Some(url) = args.adapter_url {
                config.adapter = Some(AdapterConfig::Http { endpoint: url, timeout_ms: args.adapter_timeout_ms });
            } else if let Some(command) = args.adapter_cmd {
                config.adapter = Some(AdapterConfig::Stdio { command, timeout_ms: args.adapter_timeout_ms });
            }
            config.validate()?;
            let report = args.report.as_deref().map(read_report).transpose()?;
            let adapter = commands::open_adapter(config.adapter.as_ref(), &stages)?;
            let out = commands::classify(&args.paths, &config, &stages, adapter, report.as_ref(), args.jobs)?;
            write_output(args.output.as_deref(), &to_pretty(&out)?)?;
        }
        Command::Mine(args) => {
            if let Some(mode) = args.ml_imports {
                config.filters.ml_imports = match mode {
                    MlMode::Require => MlImports::Require,
                    MlMode::Forbid => MlImports::Forbid,
                    MlMode::Ignore => MlImports::Ignore,
                };
            }
            let snapshot = if args.replay {
                let text = std::fs::read_to_string(&args.output).with_context(|| format!("reading {}", args.output.display()))?;
                let history: ManifestHistory = serde_json::from_str(&text)?;
                let Some(latest) = history.latest() else { bail!("{} has no snapshots", args.output.display()) };
                let mut s = latest.replay(&config.filters);
                s.retrieved_at = chrono::Utc::now();
                s
            } else {
                let token = std::env::var("GITHUB_TOKEN")
                    .ok()
                    .filter(|t| !t.is_empty())
                    .context("GITHUB_TOKEN is not set; create a personal access token and export it")?;
                let mut gh = GitHub::new(&args.api_base, &token, config.filters.ml_libraries.clone());
                commands::mine(&mut gh, &args.keywords, args.suffix.as_deref(), args.top_n, &config.filters)?
            };
            let accepted = snapshot.accepted().count();
            let total = snapshot.entries.len();
            commands::append_snapshot(&args.output, snapshot)?;
            eprintln!("{accepted} of {total} repositories accepted");
        }
        Command::Kappa { labels_a, labels_b } => {
            let k = commands::kappa(&labels_a, &labels_b)?;
            println!("kappa={:.6} po={:.6} pe={:.6}", k.kappa, k.observed_agreement, k.expected_agreement);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
