//! `ovp`: command-line access to the sentence builder, both translation
//! directions, and the evaluation harness. Results go to stdout, one record
//! per line; diagnostics go to stderr.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use futures::StreamExt;
use serde::Serialize;

use ovp_core::builder::{apply_choice, random_sentence, valid_choices};
use ovp_core::config::{BackendMode, Config, ConfigError};
use ovp_core::en2ovp::{translate_english, En2OvpError, TranslationRecord};
use ovp_core::eval::report::summary_tsv;
use ovp_core::eval::{
    baseline, evaluate_embedding_model, score_record, summarize_by_type, EmbeddingBackend, EvalError,
    OracleEmbeddings, RankingBenchmark, RankingReport, TypedRecord, DEFAULT_RBO_P,
};
use ovp_core::fixtures::{self, DatasetEntry};
use ovp_core::grammar::Clause;
use ovp_core::llm::{ChatBackend, LlmError};
use ovp_core::ovp2en::{translate_ovp, Ovp2EnError};
use ovp_core::service::{self, ServiceError};
use ovp_core::{validate, Lexicon, SentenceSelections};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_UNAVAILABLE: u8 = 69;
const EX_SOFTWARE: u8 = 70;

/// Batch calls in flight at once; the HTTP clients apply their own cap too.
const BATCH_CONCURRENCY: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "ovp", version, about = "Owens Valley Paiute sentence builder and translator")]
struct Cli {
    /// Backend for chat and embeddings calls [default: from config, else mock].
    #[arg(long, global = true, value_enum)]
    backend: Option<CliBackend>,
    /// Config file (TOML). Falls back to $OVP_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Log more to stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliBackend {
    Mock,
    Live,
    /// Embeddings that reproduce the ranking benchmark exactly (rankings only).
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Random valid OVP sentences as JSON lines.
    Random {
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Base seed; sentence i uses seed + i [default: random].
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Build one sentence interactively from numbered choices.
    Build,
    /// Translate builder selections (JSON object, array, or JSON lines) to English.
    Ovp2en {
        /// File of selections, or `-` for stdin.
        #[arg(long)]
        selections: PathBuf,
    },
    /// Translate English to OVP.
    En2ovp {
        /// Sentences to translate; each prints the OVP on one line.
        text: Vec<String>,
        /// Translate a typed dataset instead (`sample`, `full`, or a TSV
        /// file) and print typed records as JSON lines.
        #[arg(long, conflicts_with = "text")]
        dataset: Option<String>,
        /// Attach similarity scores.
        #[arg(long)]
        score: bool,
        /// Print full records as JSON lines.
        #[arg(long)]
        json: bool,
    },
    /// Embedding-model evaluation
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Summaries of saved translation records
    #[command(subcommand)]
    Report(ReportCommand),
    /// Run the HTTP API.
    Serve {
        /// Overrides the configured listen address.
        #[arg(long)]
        listen: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum EvalCommand {
    /// Score an embedding model on a ranking benchmark.
    Rankings {
        /// Benchmark TSV, or `appendixB` for the shipped one.
        #[arg(long, default_value = "appendixB")]
        benchmark: String,
        /// RBO persistence.
        #[arg(long, default_value_t = DEFAULT_RBO_P)]
        p: f64,
        /// Print one row per case instead of the summary.
        #[arg(long)]
        per_case: bool,
    },
    /// Similarity statistics of all sentence pairs in a dataset.
    Baseline {
        /// Dataset TSV, or `reconstructed` for the shipped one.
        #[arg(long, default_value = "reconstructed")]
        dataset: String,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// Also write the histogram TSV here.
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum ReportCommand {
    /// Mean scores per model and sentence type.
    ByType {
        /// JSON-lines file of typed records, or `-` for stdin.
        #[arg(long)]
        records: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Backend(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EX_USAGE,
            Failure::Input(_) => EX_DATAERR,
            Failure::Backend(_) => EX_UNAVAILABLE,
            Failure::Internal(_) => EX_SOFTWARE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Backend(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<LlmError> for Failure {
    fn from(e: LlmError) -> Self {
        match e {
            LlmError::Config(_) => Failure::Input(e.to_string()),
            _ => Failure::Backend(e.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Backend(e) => e.into(),
            EvalError::Input(m) => Failure::Input(m),
            EvalError::Metric(m) => Failure::Internal(m.to_string()),
        }
    }
}

impl From<En2OvpError> for Failure {
    fn from(e: En2OvpError) -> Self {
        match e {
            En2OvpError::Segmentation(e) => e.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<Ovp2EnError> for Failure {
    fn from(e: Ovp2EnError) -> Self {
        match e {
            Ovp2EnError::Llm(e) => e.into(),
            Ovp2EnError::Grammar(e) => Failure::Input(e.to_string()),
        }
    }
}

impl From<ServiceError> for Failure {
    fn from(e: ServiceError) -> Self {
        match e {
            ServiceError::Config(e) => e.into(),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    config: Config,
    backend: CliBackend,
    lexicon: &'static Lexicon,
}

impl Ctx {
    fn mode(&self) -> Result<BackendMode, Failure> {
        match self.backend {
            CliBackend::Mock => Ok(BackendMode::Mock),
            CliBackend::Live => Ok(BackendMode::Live),
            CliBackend::Oracle => Err(Failure::Usage(
                "the oracle backend only applies to `eval rankings`".into(),
            )),
        }
    }

    fn chat(&self) -> Result<Arc<dyn ChatBackend>, Failure> {
        Ok(self.config.chat_backend(self.mode()?)?)
    }

    fn embeddings(&self) -> Result<Arc<dyn EmbeddingBackend>, Failure> {
        self.config
            .embedding_backend(self.mode()?)?
            .ok_or_else(|| Failure::Input("no embeddings backend configured".into()))
    }
}

fn emit<T: Serialize>(out: &mut impl Write, value: &T) -> Outcome {
    let line = serde_json::to_string(value).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

/// A JSON array, a single object, or one object per line.
fn parse_json_values<T: serde::de::DeserializeOwned>(text: &str) -> Result<Vec<T>, Failure> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| Failure::Input(e.to_string()));
    }
    if let Ok(one) = serde_json::from_str::<T>(trimmed) {
        return Ok(vec![one]);
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| Failure::Input(format!("line {}: {e}", n + 1))))
        .collect()
}

#[derive(Serialize)]
struct RandomLine {
    seed: u64,
    surface: String,
    selections: SentenceSelections,
}

fn cmd_random(ctx: &Ctx, count: usize, seed: Option<u64>) -> Outcome {
    let base = seed.unwrap_or_else(rand::random);
    let mut out = std::io::stdout().lock();
    for i in 0..count {
        let seed = base.wrapping_add(i as u64);
        let selections = random_sentence(ctx.lexicon, seed);
        let surface = Clause::from_selections(ctx.lexicon, &selections)
            .map_err(|e| Failure::Internal(e.to_string()))?
            .render(ctx.lexicon.word_order());
        emit(
            &mut out,
            &RandomLine {
                seed,
                surface,
                selections,
            },
        )?;
    }
    Ok(())
}

/// Lists `choices` on stderr and reads a pick from `input`. `Ok(None)`
/// means the optional slot was declined.
fn prompt(
    input: &mut impl BufRead,
    slot: ovp_core::Slot,
    choices: &[&ovp_core::Lexeme],
    optional: bool,
) -> Result<Option<usize>, Failure> {
    let mut err = std::io::stderr().lock();
    loop {
        writeln!(err, "{slot}:")?;
        if optional {
            writeln!(err, "  0) (none)")?;
        }
        for (i, lx) in choices.iter().enumerate() {
            writeln!(err, "  {}) {} ({})", i + 1, lx.surface, lx.gloss)?;
        }
        write!(err, "> ")?;
        err.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Err(Failure::Input("input ended before the sentence was complete".into()));
        }
        match line.trim().parse::<usize>() {
            Ok(0) if optional => return Ok(None),
            Ok(n) if (1..=choices.len()).contains(&n) => return Ok(Some(n - 1)),
            _ => writeln!(err, "enter a listed number")?,
        }
    }
}

fn cmd_build(ctx: &Ctx) -> Outcome {
    let lex = ctx.lexicon;
    let internal = |e: ovp_core::builder::BuilderError| Failure::Internal(e.to_string());
    let mut input = std::io::stdin().lock();
    let mut selections = SentenceSelections::default();
    loop {
        if validate(lex, &selections).is_complete() {
            println!("{}", ovp_core::render(lex, &selections).map_err(|e| Failure::Internal(e.to_string()))?);
            return Ok(());
        }
        let slots = valid_choices(lex, &selections).map_err(internal)?;
        // Required slots in order; a noun object is offered as optional once
        // the verb allows one.
        let next = slots
            .iter()
            .find(|s| !selections.is_set(s.slot) && !s.choices.is_empty() && (s.required || s.slot == ovp_core::Slot::Object))
            .ok_or_else(|| Failure::Internal("no slot can be filled".into()))?;
        let pick = prompt(&mut input, next.slot, &next.choices, !next.required)?;
        let (slot, id) = match pick {
            Some(i) => (next.slot, next.choices[i].id.clone()),
            None => {
                // Without a noun object the prefix alone is the object.
                let pronoun = slots
                    .iter()
                    .find(|s| s.slot == ovp_core::Slot::ObjectPronoun && !s.choices.is_empty())
                    .ok_or_else(|| Failure::Internal(format!("{} cannot be skipped", next.slot)))?;
                let i = prompt(&mut input, pronoun.slot, &pronoun.choices, false)?.expect("required pick");
                (pronoun.slot, pronoun.choices[i].id.clone())
            }
        };
        selections = apply_choice(lex, &selections, slot, &id).map_err(internal)?.selections;
    }
}

async fn cmd_ovp2en(ctx: &Ctx, path: &Path) -> Outcome {
    let all: Vec<SentenceSelections> = parse_json_values(&read_input(path)?)?;
    for (i, s) in all.iter().enumerate() {
        let verdict = validate(ctx.lexicon, s);
        if !verdict.is_complete() {
            return Err(Failure::Input(format!("selections {}: {verdict}", i + 1)));
        }
    }
    let chat = ctx.chat()?;
    let encode = ctx.config.encode_options();
    let results: Vec<_> = futures::stream::iter(all.iter())
        .map(|s| translate_ovp(ctx.lexicon, s, chat.as_ref(), encode))
        .buffered(BATCH_CONCURRENCY)
        .collect()
        .await;
    let mut out = std::io::stdout().lock();
    for r in results {
        emit(&mut out, &r?)?;
    }
    Ok(())
}

async fn translate_one(
    ctx: &Ctx,
    text: &str,
    chat: &dyn ChatBackend,
    embeddings: Option<&dyn EmbeddingBackend>,
    options: &ovp_core::en2ovp::En2OvpOptions,
) -> Result<TranslationRecord, Failure> {
    let record = translate_english(ctx.lexicon, text, chat, options).await?;
    match embeddings {
        None => Ok(record),
        Some(e) => match score_record(record.clone(), e).await {
            Ok(r) => Ok(r),
            Err(EvalError::Backend(e)) => Err(e.into()),
            Err(other) => {
                tracing::warn!(input = %text, error = %other, "record left unscored");
                Ok(record)
            }
        },
    }
}

fn load_dataset(spec: &str) -> Result<Vec<DatasetEntry>, Failure> {
    match spec {
        "sample" => Ok(fixtures::dataset_sample().into_iter().cloned().collect()),
        "full" | "reconstructed" => Ok(fixtures::dataset().to_vec()),
        path => Ok(fixtures::parse_dataset(&read_input(Path::new(path))?)?),
    }
}

async fn cmd_en2ovp(ctx: &Ctx, text: &[String], dataset: Option<&str>, score: bool, json: bool) -> Outcome {
    let chat = ctx.chat()?;
    let embeddings = if score { Some(ctx.embeddings()?) } else { None };
    let options = ctx.config.en2ovp_options()?;
    let (inputs, types): (Vec<String>, Option<Vec<_>>) = match dataset {
        Some(d) => {
            let entries = load_dataset(d)?;
            let types = entries.iter().map(|e| e.sentence_type).collect();
            (entries.into_iter().map(|e| e.text).collect(), Some(types))
        }
        None if text.is_empty() => return Err(Failure::Usage("give TEXT or --dataset".into())),
        None => (text.to_vec(), None),
    };
    let results: Vec<_> = futures::stream::iter(inputs.iter())
        .map(|t| translate_one(ctx, t, chat.as_ref(), embeddings.as_deref(), &options))
        .buffered(BATCH_CONCURRENCY)
        .collect()
        .await;
    let mut out = std::io::stdout().lock();
    for (i, r) in results.into_iter().enumerate() {
        let record = r?;
        match &types {
            Some(types) => emit(
                &mut out,
                &TypedRecord {
                    sentence_type: types[i],
                    record,
                },
            )?,
            None if json => emit(&mut out, &record)?,
            None => writeln!(out, "{}", record.ovp_surfaces.join(" "))?,
        }
    }
    Ok(())
}

async fn cmd_rankings(ctx: &Ctx, benchmark: &str, p: f64, per_case: bool) -> Outcome {
    if !(p > 0.0 && p < 1.0) {
        return Err(Failure::Usage("--p must lie strictly between 0 and 1".into()));
    }
    let bench = match benchmark {
        "appendixB" | "appendix-b" => RankingBenchmark::appendix_b().clone(),
        path => RankingBenchmark::from_path(Path::new(path))?,
    };
    let backend: Arc<dyn EmbeddingBackend> = match ctx.backend {
        CliBackend::Oracle => Arc::new(OracleEmbeddings::from_benchmark(&bench).map_err(Failure::Input)?),
        _ => ctx.embeddings()?,
    };
    let report = evaluate_embedding_model(&bench, backend.as_ref(), p).await?;
    let mut out = std::io::stdout().lock();
    if per_case {
        writeln!(out, "base\tdisplacement\trbo\tcomputed_order")?;
        for c in &report.cases {
            let order: Vec<String> = c.computed_order.iter().map(ToString::to_string).collect();
            writeln!(out, "{}\t{:.3}\t{:.3}\t{}", c.base, c.displacement, c.rbo, order.join(","))?;
        }
    } else {
        writeln!(out, "{}", RankingReport::TSV_HEADER)?;
        writeln!(out, "{}", report.tsv_row())?;
    }
    Ok(())
}

async fn cmd_baseline(ctx: &Ctx, dataset: &str, bins: usize, histogram: Option<&Path>) -> Outcome {
    let sentences: Vec<String> = load_dataset(dataset)?.into_iter().map(|e| e.text).collect();
    let stats = baseline(&sentences, ctx.embeddings()?.as_ref(), bins).await?;
    if let Some(path) = histogram {
        std::fs::write(path, stats.histogram_tsv()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "model\tpairs\tmean\tstd\tthreshold")?;
    writeln!(
        out,
        "{}\t{}\t{:.3}\t{:.3}\t{:.3}",
        stats.model, stats.pairs, stats.mean, stats.std, stats.threshold
    )?;
    Ok(())
}

fn cmd_by_type(path: &Path) -> Outcome {
    let text = read_input(path)?;
    let records: Vec<TypedRecord> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| Failure::Input(format!("line {}: {e}", n + 1))))
        .collect::<Result<_, _>>()?;
    print!("{}", summary_tsv(&summarize_by_type(&records)));
    Ok(())
}

async fn run(cli: Cli) -> Outcome {
    let mut config = Config::load(cli.config.as_deref())?;
    let backend = cli.backend.unwrap_or(match config.backend {
        BackendMode::Mock => CliBackend::Mock,
        BackendMode::Live => CliBackend::Live,
    });
    let ctx = Ctx {
        lexicon: config.lexicon()?,
        config: config.clone(),
        backend,
    };
    match cli.command {
        Command::Random { count, seed } => cmd_random(&ctx, count, seed),
        Command::Build => cmd_build(&ctx),
        Command::Ovp2en { selections } => cmd_ovp2en(&ctx, &selections).await,
        Command::En2ovp {
            text,
            dataset,
            score,
            json,
        } => cmd_en2ovp(&ctx, &text, dataset.as_deref(), score, json).await,
        Command::Eval(EvalCommand::Rankings {
            benchmark,
            p,
            per_case,
        }) => cmd_rankings(&ctx, &benchmark, p, per_case).await,
        Command::Eval(EvalCommand::Baseline {
            dataset,
            bins,
            histogram,
        }) => cmd_baseline(&ctx, &dataset, bins, histogram.as_deref()).await,
        Command::Report(ReportCommand::ByType { records }) => cmd_by_type(&records),
        Command::Serve { listen } => {
            config.backend = ctx.mode()?;
            if let Some(l) = listen {
                config.listen = l;
            }
            Ok(service::serve(&config).await?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EX_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let default_level = match (cli.verbose, &cli.command) {
        (0, Command::Serve { .. }) | (1, _) => "info",
        (0, _) => "warn",
        _ => "debug",
    };
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_env("OVP_LOG")
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(default_level)),
        )
        .init();
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("ovp: error: {e}");
            return ExitCode::from(EX_SOFTWARE);
        }
    };
    match runtime.block_on(run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ovp: error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
