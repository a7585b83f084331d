use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use lexforge::config::WORKDIR_ENV;
use lexforge::formats::lexicon::TagColumn;
use lexforge::pipeline::{self, Workdir};
use lexforge::{BoxScore, LexError, ModelChoice, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "lexforge", version, about = "Hindi-English word lexicon with two language-strength scores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Work directory (overrides the config and LEXFORGE_WORKDIR)
    #[arg(long)]
    workdir: Option<PathBuf>,
    #[arg(long)]
    hindi_words: Option<PathBuf>,
    #[arg(long)]
    english_words: Option<PathBuf>,
    /// Corpus shuffle and split seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    test_fraction: Option<f64>,
    #[arg(long)]
    min_freq: Option<u64>,
    #[arg(long)]
    lr_epochs: Option<usize>,
    #[arg(long)]
    bilstm_epochs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Lr,
    Bilstm,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreArg {
    Score1,
    Score2,
}

#[derive(Subcommand)]
enum Command {
    /// Build the corpus, its train/test split, provenance and statistics
    Ingest(Common),
    /// Train models on the training split
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "both")]
        model: ModelArg,
    },
    /// Evaluate both models on the test split
    Eval(Common),
    /// Score every corpus word and write the lexicon
    Lexicon {
        #[command(flatten)]
        common: Common,
        /// Worker threads; output does not depend on this
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Drop the tag column from the TSV
        #[arg(long)]
        no_tag: bool,
    },
    /// Print the two scores of a single word as JSON
    Score {
        #[command(flatten)]
        common: Common,
        word: String,
    },
    /// Render the score figure and its CSV data
    Plot {
        #[command(flatten)]
        common: Common,
        /// Score shown in the box plots
        #[arg(long, value_enum, default_value = "score1")]
        box_score: ScoreArg,
    },
    /// ingest, train, eval, lexicon and plot in one go
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

fn load_config(c: &Common) -> Result<RunConfig, LexError> {
    let overrides = Overrides {
        workdir: c.workdir.clone(),
        hindi_words: c.hindi_words.clone(),
        english_words: c.english_words.clone(),
        seed: c.seed,
        test_fraction: c.test_fraction,
        min_freq: c.min_freq,
        lr_epochs: c.lr_epochs,
        bilstm_epochs: c.bilstm_epochs,
    };
    let mut cfg = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => match (&c.hindi_words, &c.english_words) {
            (Some(h), Some(e)) => RunConfig::new(h, e, "work"),
            _ => return Err(LexError::Config("pass --config, or both --hindi-words and --english-words".into())),
        },
    };
    let env = std::env::var_os(WORKDIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    cfg.apply(&overrides, env)?;
    Ok(cfg)
}

/// `SOURCE_DATE_EPOCH` when set, so reruns can be byte-identical.
fn build_time() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}

fn ingest(cfg: &RunConfig) -> Result<(), LexError> {
    let out = pipeline::ingest(cfg)?;
    print!("{}", lexforge::report::stats_text(&out.stats));
    println!("split: {} train / {} test", out.train, out.test);
    Ok(())
}

fn train(cfg: &RunConfig, which: ModelChoice) -> Result<(), LexError> {
    let out = pipeline::train(cfg, which)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    if let (Some((_, rep)), Some(p)) = (&out.logreg, out.vocab_size) {
        let last = rep.epoch_loss.last().copied().unwrap_or(f64::NAN);
        println!("logreg: {p} n-grams, final loss {last:.6}, train accuracy {:.4}", rep.train_accuracy);
    }
    if let Some((_, rep)) = &out.bilstm {
        let last = rep.epoch_loss.last().copied().unwrap_or(f64::NAN);
        println!("bilstm: final loss {last:.6}, train accuracy {:.4}", rep.train_accuracy);
    }
    Ok(())
}

fn lexicon(cfg: &RunConfig, threads: usize, tags: TagColumn) -> Result<(), LexError> {
    let lex = pipeline::lexicon(cfg, build_time(), threads, tags)?;
    println!("{} entries -> {}", lex.len(), Workdir::new(&cfg.paths.workdir).lexicon().display());
    Ok(())
}

fn plot(cfg: &RunConfig, which: BoxScore) -> Result<(), LexError> {
    let files = pipeline::plot(cfg, which)?;
    println!("{}\n{}\n{}", files.svg.display(), files.scatter.display(), files.boxes.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), LexError> {
    match cli.command {
        Command::Ingest(c) => ingest(&load_config(&c)?),
        Command::Train { common, model } => {
            let which = match model {
                ModelArg::Lr => ModelChoice::Logreg,
                ModelArg::Bilstm => ModelChoice::Bilstm,
                ModelArg::Both => ModelChoice::Both,
            };
            train(&load_config(&common)?, which)
        }
        Command::Eval(c) => {
            print!("{}", pipeline::eval(&load_config(&c)?)?.text);
            Ok(())
        }
        Command::Lexicon { common, threads, no_tag } => {
            let tags = if no_tag { TagColumn::Omit } else { TagColumn::Include };
            lexicon(&load_config(&common)?, threads, tags)
        }
        Command::Score { common, word } => {
            let s = pipeline::score(&load_config(&common)?, &word)?;
            println!("{}", serde_json::to_string(&s).expect("scores serialize"));
            Ok(())
        }
        Command::Plot { common, box_score } => {
            let which = match box_score {
                ScoreArg::Score1 => BoxScore::Score1,
                ScoreArg::Score2 => BoxScore::Score2,
            };
            plot(&load_config(&common)?, which)
        }
        Command::Run { common, threads } => {
            let cfg = load_config(&common)?;
            ingest(&cfg)?;
            train(&cfg, ModelChoice::Both)?;
            print!("{}", pipeline::eval(&cfg)?.text);
            lexicon(&cfg, threads, TagColumn::Include)?;
            plot(&cfg, BoxScore::Score1)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
