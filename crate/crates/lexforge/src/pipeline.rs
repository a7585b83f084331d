//! The subcommands as library calls. Each one checks its inputs before it
//! writes anything under the work directory.

use std::path::{Path, PathBuf};
use std::thread;

use lexforge_core::bilstm::{predict_bilstm, train_bilstm};
use lexforge_core::corpus::{build_corpus, corpus_stats, split_corpus, Provenance};
use lexforge_core::eval::{compare, evaluate};
use lexforge_core::lexicon::{metadata_for, score_entries, score_word};
use lexforge_core::logreg::{predict_lr, train_logreg};
use lexforge_core::plot::{per_tag_box_stats, scatter_data};
use lexforge_core::{
    BiLstmModel, ComparisonTable, Corpus, CorpusStats, EvalReport, Lexicon, LogRegModel, NgramVocabulary, TrainReport,
};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{LexError, Result};
use crate::formats::corpus::{read_corpus, read_word_list, write_corpus};
use crate::formats::lexicon::{read_lexicon, write_lexicon, TagColumn};
use crate::formats::model::{read_bilstm, read_logreg, write_bilstm, write_logreg};
use crate::formats::vocab::{read_vocab, write_vocab};
use crate::formats::{read_artifact, write_file};
use crate::report;
use crate::svg::{write_figure, FigureFiles};

/// Fixed file locations under the work directory.
#[derive(Clone, Debug)]
pub struct Workdir {
    root: PathBuf,
}

impl Workdir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Workdir { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn at(&self, dir: &str, file: &str) -> PathBuf {
        self.root.join(dir).join(file)
    }

    pub fn corpus(&self) -> PathBuf {
        self.at("corpus", "corpus.tsv")
    }
    pub fn train_split(&self) -> PathBuf {
        self.at("corpus", "train.tsv")
    }
    pub fn test_split(&self) -> PathBuf {
        self.at("corpus", "test.tsv")
    }
    pub fn provenance(&self) -> PathBuf {
        self.at("corpus", "provenance.json")
    }
    pub fn stats_text(&self) -> PathBuf {
        self.at("reports", "corpus_stats.txt")
    }
    pub fn stats_tsv(&self) -> PathBuf {
        self.at("reports", "corpus_stats.tsv")
    }
    pub fn vocab(&self) -> PathBuf {
        self.at("models", "vocab.tsv")
    }
    pub fn logreg(&self) -> PathBuf {
        self.at("models", "logreg.bin")
    }
    pub fn bilstm(&self) -> PathBuf {
        self.at("models", "bilstm.bin")
    }
    pub fn chars(&self) -> PathBuf {
        self.at("models", "chars.tsv")
    }
    pub fn logreg_loss(&self) -> PathBuf {
        self.at("reports", "logreg_loss.tsv")
    }
    pub fn bilstm_loss(&self) -> PathBuf {
        self.at("reports", "bilstm_loss.tsv")
    }
    pub fn eval_tsv(&self) -> PathBuf {
        self.at("reports", "eval.tsv")
    }
    pub fn eval_text(&self) -> PathBuf {
        self.at("reports", "eval.txt")
    }
    pub fn lexicon(&self) -> PathBuf {
        self.at("lexicon", "lexicon.tsv")
    }
    pub fn figs(&self) -> PathBuf {
        self.root.join("figs")
    }
}

/// Contents of `corpus/provenance.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub seed: u64,
    pub test_fraction: f64,
    pub total: usize,
    pub train: usize,
    pub test: usize,
    pub provenance: Provenance,
}

pub struct IngestOutput {
    pub corpus: Corpus,
    pub stats: CorpusStats,
    pub train: usize,
    pub test: usize,
}

pub fn ingest(cfg: &RunConfig) -> Result<IngestOutput> {
    let hindi = read_word_list(&cfg.paths.hindi_words)?;
    let english = read_word_list(&cfg.paths.english_words)?;
    let corpus = build_corpus(&hindi, &english, cfg.corpus.seed)?;
    let split = split_corpus(&corpus, cfg.corpus.test_fraction, cfg.corpus.seed)?;
    let stats = corpus_stats(&corpus)?;

    let wd = Workdir::new(&cfg.paths.workdir);
    write_corpus(&wd.corpus(), &corpus)?;
    write_corpus(&wd.train_split(), &split.train)?;
    write_corpus(&wd.test_split(), &split.test)?;
    let manifest = CorpusManifest {
        seed: corpus.seed(),
        test_fraction: split.test_fraction,
        total: corpus.len(),
        train: split.train.len(),
        test: split.test.len(),
        provenance: corpus.provenance().clone(),
    };
    write_file(&wd.provenance(), serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n")?;
    write_file(&wd.stats_text(), report::stats_text(&stats))?;
    write_file(&wd.stats_tsv(), report::stats_tsv(&stats))?;
    Ok(IngestOutput { train: split.train.len(), test: split.test.len(), corpus, stats })
}

fn read_manifest(wd: &Workdir) -> Result<CorpusManifest> {
    let path = wd.provenance();
    let text = read_artifact(&path, "ingest")?;
    serde_json::from_str(&text).map_err(|e| LexError::parse(&path, e.line(), e.to_string()))
}

fn load_split(wd: &Workdir, path: &Path) -> Result<Corpus> {
    let m = read_manifest(wd)?;
    read_corpus(path, m.seed, m.provenance)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelChoice {
    Logreg,
    Bilstm,
    Both,
}

impl ModelChoice {
    fn logreg(self) -> bool {
        matches!(self, ModelChoice::Logreg | ModelChoice::Both)
    }
    fn bilstm(self) -> bool {
        matches!(self, ModelChoice::Bilstm | ModelChoice::Both)
    }
}

#[derive(Debug, Default)]
pub struct TrainOutput {
    pub logreg: Option<(LogRegModel, TrainReport)>,
    pub vocab_size: Option<usize>,
    pub bilstm: Option<(BiLstmModel, TrainReport)>,
    pub warnings: Vec<String>,
}

fn diverged(model: &'static str) -> impl Fn(lexforge_core::Error) -> LexError {
    move |e| match e {
        lexforge_core::Error::NonFiniteLoss { epoch } => LexError::Diverged { model, epoch },
        other => other.into(),
    }
}

pub fn train(cfg: &RunConfig, which: ModelChoice) -> Result<TrainOutput> {
    let wd = Workdir::new(&cfg.paths.workdir);
    let train = load_split(&wd, &wd.train_split())?;
    let mut out = TrainOutput::default();
    if which.logreg() {
        let f = cfg.features;
        let vocab = NgramVocabulary::build(&train, f.n_min, f.n_max, f.min_freq)?;
        let (model, rep) = train_logreg(&train, &vocab, cfg.logreg).map_err(diverged("logistic regression"))?;
        if cfg.logreg.epochs == 0 {
            out.warnings.push("logreg.epochs is 0: saving the all-zero model (every score is 0.5)".into());
        }
        write_vocab(&wd.vocab(), &vocab)?;
        write_logreg(&wd.logreg(), &model)?;
        write_file(&wd.logreg_loss(), report::loss_tsv(&rep))?;
        out.vocab_size = Some(vocab.len());
        out.logreg = Some((model, rep));
    }
    if which.bilstm() {
        let (model, rep) = train_bilstm(&train, cfg.bilstm).map_err(diverged("BiLSTM"))?;
        if cfg.bilstm.epochs == 0 {
            out.warnings.push("bilstm.epochs is 0: saving the freshly initialized model".into());
        }
        write_bilstm(&wd.bilstm(), &wd.chars(), &model)?;
        write_file(&wd.bilstm_loss(), report::loss_tsv(&rep))?;
        out.bilstm = Some((model, rep));
    }
    Ok(out)
}

/// Both trained models with the n-gram vocabulary, checked for consistency.
pub struct Models {
    pub logreg: LogRegModel,
    pub vocab: NgramVocabulary,
    pub bilstm: BiLstmModel,
}

impl Models {
    pub fn load(wd: &Workdir) -> Result<Self> {
        let vocab = read_vocab(&wd.vocab())?;
        let logreg = read_logreg(&wd.logreg())?;
        logreg.check_vocabulary(&vocab)?;
        let bilstm = read_bilstm(&wd.bilstm(), &wd.chars())?;
        Ok(Models { logreg, vocab, bilstm })
    }
}

pub struct EvalOutput {
    /// BiLSTM first, then logistic regression.
    pub reports: Vec<(String, EvalReport)>,
    pub table: ComparisonTable,
    pub text: String,
}

pub fn eval(cfg: &RunConfig) -> Result<EvalOutput> {
    let wd = Workdir::new(&cfg.paths.workdir);
    let m = Models::load(&wd)?;
    let test = load_split(&wd, &wd.test_split())?;
    let nn = evaluate(|w| predict_bilstm(&m.bilstm, w), &test)?;
    let lr = evaluate(|w| predict_lr(&m.logreg, w, &m.vocab).expect("vocabulary checked on load"), &test)?;
    let reports = vec![("bilstm".to_owned(), nn), ("logreg".to_owned(), lr)];
    let table = compare(&reports)?;
    let text = report::comparison_text(&table);
    write_file(&wd.eval_tsv(), report::comparison_tsv(&table))?;
    write_file(&wd.eval_text(), &text)?;
    Ok(EvalOutput { reports, table, text })
}

/// Scores every corpus word on `threads` workers. Contiguous chunks are
/// scored independently and concatenated, so the result is identical to
/// the single-threaded one.
pub fn build_lexicon_parallel(corpus: &Corpus, m: &Models, built_at: u64, threads: usize) -> Result<Lexicon> {
    if corpus.is_empty() {
        return Err(lexforge_core::Error::EmptyInput("corpus").into());
    }
    m.logreg.check_vocabulary(&m.vocab)?;
    let n = corpus.len();
    let threads = threads.clamp(1, n);
    let chunk = n.div_ceil(threads);
    let entries = if threads == 1 {
        score_entries(corpus, &m.logreg, &m.vocab, &m.bilstm, 0..n)
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = (0..n)
                .step_by(chunk)
                .map(|start| {
                    let range = start..(start + chunk).min(n);
                    s.spawn(move || score_entries(corpus, &m.logreg, &m.vocab, &m.bilstm, range))
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("scoring thread panicked")).collect()
        })
    };
    let meta = metadata_for(corpus, &m.logreg, &m.vocab, &m.bilstm, built_at);
    Ok(Lexicon::from_entries(entries, meta)?)
}

pub fn lexicon(cfg: &RunConfig, built_at: u64, threads: usize, tags: TagColumn) -> Result<Lexicon> {
    let wd = Workdir::new(&cfg.paths.workdir);
    let m = Models::load(&wd)?;
    let corpus = load_split(&wd, &wd.corpus())?;
    let lex = build_lexicon_parallel(&corpus, &m, built_at, threads)?;
    write_lexicon(&wd.lexicon(), &lex, tags)?;
    Ok(lex)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordScore {
    pub word: String,
    pub score1: f64,
    pub score2: f64,
}

pub fn score(cfg: &RunConfig, word: &str) -> Result<WordScore> {
    let m = Models::load(&Workdir::new(&cfg.paths.workdir))?;
    let (score1, score2) = score_word(&m.logreg, &m.vocab, &m.bilstm, word)?;
    let normalized = lexforge_core::corpus::normalize_word(word).remove(0);
    Ok(WordScore { word: normalized, score1, score2 })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoxScore {
    #[default]
    Score1,
    Score2,
}

impl BoxScore {
    pub fn name(self) -> &'static str {
        match self {
            BoxScore::Score1 => "score1",
            BoxScore::Score2 => "score2",
        }
    }
}

pub fn plot(cfg: &RunConfig, which: BoxScore) -> Result<FigureFiles> {
    let wd = Workdir::new(&cfg.paths.workdir);
    let lex = read_lexicon(&wd.lexicon())?;
    let records = scatter_data(&lex)?;
    let boxes = match which {
        BoxScore::Score1 => per_tag_box_stats(&records, |r| r.x)?,
        BoxScore::Score2 => per_tag_box_stats(&records, |r| r.y)?,
    };
    write_figure(&wd.figs(), &records, &boxes, which.name())
}
