use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bitgram_cli::bench::{render_bench_csv, run_bench};
use bitgram_cli::dataset::{load_dataset, write_atomic, write_jsonl, Dataset};
use bitgram_cli::experiment::{run_experiment, Element, Kernel, MethodSpec, Strategy};
use bitgram_cli::report::{render_csv, render_table, RunConfig};
use bitgram_cli::synth::{generate, SynthConfig};
use bitgram_cli::vectorfile::{manifest_path, vectorize_items};
use bitgram_cli::AppError;

use bitgram_core::HashConfig;

#[derive(Parser)]
#[command(
    name = "bitgram",
    version,
    about = "Hashed character n-gram title vectors: \
build them, score them, and reproduce the purchase-prediction evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vectorize an items file into encoded records plus a manifest
    Vectorize(VectorizeArgs),
    /// Run the purchase-prediction evaluation and report accuracy
    Evaluate(EvaluateArgs),
    /// Time the similarity kernels and history combiners
    Bench(BenchArgs),
    /// Generate a synthetic clickstream and write it as JSONL
    Synth(SynthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ElementArg {
    Float,
    #[value(name = "1bit")]
    Bit,
}

impl From<ElementArg> for Element {
    fn from(e: ElementArg) -> Element {
        match e {
            ElementArg::Float => Element::Float,
            ElementArg::Bit => Element::Bit,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Ochiai,
    Hamming,
    Jaccard,
}

impl From<MetricArg> for Kernel {
    fn from(m: MetricArg) -> Kernel {
        match m {
            MetricArg::Ochiai => Kernel::Ochiai,
            MetricArg::Hamming => Kernel::Hamming,
            MetricArg::Jaccard => Kernel::Jaccard,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

#[derive(Args)]
struct VectorizeArgs {
    /// Items file (JSONL: item_id, title, category)
    #[arg(long)]
    items: PathBuf,
    /// Vector element type
    #[arg(long, value_enum, default_value = "1bit")]
    element: ElementArg,
    /// Vector dimension
    #[arg(long, default_value_t = 8000)]
    dim: usize,
    /// Character n-gram length
    #[arg(long, default_value_t = 5)]
    ngram: usize,
    /// Hash seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hash a sign bit per feature so float counts go to +/-1
    #[arg(long)]
    sign_hash: bool,
    /// Output record file; the manifest lands at <out>.manifest.jsonl
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthKnobs {
    /// Synthetic: number of users (one case each)
    #[arg(long, default_value_t = 500)]
    users: usize,
    /// Synthetic: number of categories
    #[arg(long, default_value_t = 10)]
    categories: usize,
    /// Synthetic: brand/attribute vocabulary per category
    #[arg(long, default_value_t = 16)]
    vocab: usize,
    /// Synthetic: catalog size per category
    #[arg(long, default_value_t = 200)]
    titles_per_category: usize,
    /// Synthetic: median history length
    #[arg(long, default_value_t = 44)]
    history_median: usize,
    /// Synthetic: probability a history item shares the purchase's phrase
    #[arg(long, default_value_t = 0.6)]
    signal: f64,
    /// Synthetic: random tokens appended to every title
    #[arg(long, default_value_t = 2)]
    noise_tokens: usize,
}

impl SynthKnobs {
    fn config(&self, distractors: usize, seed: u64) -> SynthConfig {
        SynthConfig {
            users: self.users,
            categories: self.categories,
            vocab: self.vocab,
            titles_per_category: self.titles_per_category,
            history_median: self.history_median,
            distractors,
            signal: self.signal,
            noise_tokens: self.noise_tokens,
            seed,
        }
    }

    fn echo(&self, config: &mut RunConfig) {
        config.push("users", self.users);
        config.push("categories", self.categories);
        config.push("vocab", self.vocab);
        config.push("titles_per_category", self.titles_per_category);
        config.push("history_median", self.history_median);
        config.push("signal", self.signal);
        config.push("noise_tokens", self.noise_tokens);
    }
}

#[derive(Args)]
struct EvaluateArgs {
    /// Items file (JSONL); requires --events
    #[arg(long, requires = "events", conflicts_with = "synthetic")]
    items: Option<PathBuf>,
    /// Events file (JSONL); requires --items
    #[arg(long, requires = "items", conflicts_with = "synthetic")]
    events: Option<PathBuf>,
    /// Evaluate on a generated dataset instead of input files
    #[arg(long)]
    synthetic: bool,
    #[command(flatten)]
    synth: SynthKnobs,
    /// Distractors per recall set (purchased item is added on top)
    #[arg(long, default_value_t = 100)]
    distractors: usize,
    /// Vector dimensions to evaluate, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [8000, 1000])]
    dim: Vec<usize>,
    /// Character n-gram length
    #[arg(long, default_value_t = 5)]
    ngram: usize,
    /// Dataset seed (synthetic generation and recall-set sampling)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Methods to run, comma separated: pairwise-float, pairwise-1bit,
    /// user-vec-float, user-vec-1bit
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [
            "pairwise-float".to_owned(),
            "pairwise-1bit".to_owned(),
            "user-vec-float".to_owned(),
            "user-vec-1bit".to_owned(),
        ]
    )]
    methods: Vec<String>,
    /// Similarity for 1-bit methods (float methods always use cosine)
    #[arg(long, value_enum, default_value = "ochiai")]
    metric: MetricArg,
    /// Report format
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Write the report here (atomically); stdout then shows the table
    #[arg(long)]
    out: Option<PathBuf>,
    /// Score cases on all cores
    #[arg(long)]
    parallel: bool,
    /// Hash a sign bit per feature so float counts go to +/-1
    #[arg(long)]
    sign_hash: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Vector dimensions to bench, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [8000, 1000])]
    dim: Vec<usize>,
    /// Corpus seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    synth: SynthKnobs,
    /// Distractors per recall set
    #[arg(long, default_value_t = 100)]
    distractors: usize,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for items.jsonl and events.jsonl
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Vectorize(args) => cmd_vectorize(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Synth(args) => cmd_synth(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn cmd_vectorize(args: VectorizeArgs) -> Result<(), AppError> {
    let hash = HashConfig { dim: args.dim, seed: args.seed, sign_hash: args.sign_hash };
    let stats = vectorize_items(&args.items, args.element.into(), &hash, args.ngram, &args.out)?;
    println!(
        "wrote {} records ({} bytes) to {} with manifest {}",
        stats.records,
        stats.data_bytes,
        args.out.display(),
        manifest_path(&args.out).display()
    );
    Ok(())
}

fn parse_method(name: &str) -> Result<(Strategy, Element), AppError> {
    match name {
        "pairwise-float" => Ok((Strategy::Pairwise, Element::Float)),
        "pairwise-1bit" => Ok((Strategy::Pairwise, Element::Bit)),
        "user-vec-float" => Ok((Strategy::UserVector, Element::Float)),
        "user-vec-1bit" => Ok((Strategy::UserVector, Element::Bit)),
        other => Err(AppError::Config(format!(
            "unknown method {other:?} (expected pairwise-float, pairwise-1bit, \
user-vec-float or user-vec-1bit)"
        ))),
    }
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), AppError> {
    let mut config = RunConfig::new();

    let dataset: Dataset = if args.synthetic {
        config.push("dataset", "synthetic");
        args.synth.echo(&mut config);
        generate(&args.synth.config(args.distractors, args.seed))?.dataset
    } else {
        match (&args.items, &args.events) {
            (Some(items), Some(events)) => {
                config.push("items", items.display());
                config.push("events", events.display());
                load_dataset(items, events, args.distractors, args.seed)?
            }
            _ => {
                return Err(AppError::Config("provide --items and --events, or --synthetic".into()))
            }
        }
    };
    config.push("distractors", args.distractors);
    config.push("seed", args.seed);
    config.push("ngram", args.ngram);
    config.push("dims", join(&args.dim));
    config.push("methods", args.methods.join(","));
    let metric_name = match args.metric {
        MetricArg::Ochiai => "ochiai",
        MetricArg::Hamming => "hamming",
        MetricArg::Jaccard => "jaccard",
    };
    config.push("metric", metric_name);
    config.push("sign_hash", args.sign_hash);
    config.push("parallel", args.parallel);

    let mut methods = Vec::new();
    for name in &args.methods {
        let (strategy, element) = parse_method(name)?;
        for &dim in &args.dim {
            let kernel = match element {
                Element::Float => Kernel::Cosine,
                Element::Bit => args.metric.into(),
            };
            let hash = HashConfig { dim, seed: 0, sign_hash: args.sign_hash };
            methods.push(MethodSpec { strategy, element, kernel, hash });
        }
    }

    let report = run_experiment(&dataset, &methods, args.ngram, args.parallel)?;
    config.push("cases", report.cases);

    let rendered = match args.format {
        FormatArg::Table => render_table(&config, &report),
        FormatArg::Csv => render_csv(&config, &report),
    };
    match &args.out {
        Some(path) => {
            write_atomic(path, rendered.as_bytes())?;
            eprintln!("wrote report to {}", path.display());
            print!("{}", render_table(&config, &report));
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), AppError> {
    let mut config = RunConfig::new();
    config.push("seed", args.seed);
    config.push("dims", join(&args.dim));
    let rows = run_bench(&args.dim, args.seed, Duration::from_millis(200));
    let csv = render_bench_csv(&config, &rows);
    match &args.out {
        Some(path) => {
            write_atomic(path, csv.as_bytes())?;
            eprintln!("wrote benchmark results to {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<(), AppError> {
    let dataset = generate(&args.synth.config(args.distractors, args.seed))?.dataset;
    write_jsonl(&dataset, &args.out_dir)?;
    println!(
        "wrote {} items and {} cases to {}",
        dataset.items.len(),
        dataset.cases.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn join(dims: &[usize]) -> String {
    dims.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}
