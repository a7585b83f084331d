use alloc::string::String;
use core::fmt;

use crate::corpus::LanguageTag;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A language class had no words left after normalization and exclusion.
    EmptyClass(LanguageTag),
    /// An operation that requires data was given none.
    EmptyInput(&'static str),
    InvalidFraction(f64),
    /// A split left the train or test side without entries.
    EmptySplit { train: usize, test: usize },
    InvalidNgramRange { n_min: usize, n_max: usize },
    InvalidMinFreq,
    EmptyVocabulary,
    /// A word surface violates the corpus alphabet (`[a-z]+`).
    InvalidSurface(String),
    InvalidHyperparameter(&'static str),
    NonFiniteLoss { epoch: usize },
    /// Model and n-gram vocabulary were not built together.
    VocabularyMismatch { model: u64, vocabulary: u64 },
    /// Scoring input did not normalize to exactly one word.
    NotSingleWord { input: String, words: usize },
    InvalidStep(f64),
    MismatchedSupports,
    TooFewReports(usize),
    MissingTag(String),
    /// Serialized parameters do not match the declared dimensions.
    ShapeMismatch { expected: usize, found: usize },
    ScoreOutOfRange(f64),
    DuplicateSurface(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyClass(tag) => write!(f, "no {} words survived normalization and exclusion", tag.name()),
            Error::EmptyInput(what) => write!(f, "{what} is empty"),
            Error::InvalidFraction(x) => write!(f, "test fraction {x} is outside (0, 1)"),
            Error::EmptySplit { train, test } => {
                write!(f, "split leaves an empty side (train {train}, test {test})")
            }
            Error::InvalidNgramRange { n_min, n_max } => {
                write!(f, "invalid n-gram range {n_min}..={n_max}")
            }
            Error::InvalidMinFreq => f.write_str("min_freq must be at least 1"),
            Error::EmptyVocabulary => f.write_str("no n-gram reaches the minimum frequency"),
            Error::InvalidSurface(s) => write!(f, "invalid word surface {s:?}"),
            Error::InvalidHyperparameter(what) => write!(f, "invalid hyperparameter: {what}"),
            Error::NonFiniteLoss { epoch } => write!(f, "loss became non-finite in epoch {epoch}"),
            Error::VocabularyMismatch { model, vocabulary } => write!(
                f,
                "model was trained against vocabulary {model:016x}, got {vocabulary:016x}"
            ),
            Error::NotSingleWord { input, words } => {
                write!(f, "{input:?} normalizes to {words} words, expected exactly one")
            }
            Error::InvalidStep(h) => write!(f, "finite-difference step must be positive, got {h}"),
            Error::MismatchedSupports => f.write_str("reports were computed over different test sets"),
            Error::TooFewReports(n) => write!(f, "comparison needs at least two reports, got {n}"),
            Error::MissingTag(s) => write!(f, "lexicon entry {s:?} has no gold tag"),
            Error::ShapeMismatch { expected, found } => {
                write!(f, "expected {expected} parameters, found {found}")
            }
            Error::ScoreOutOfRange(x) => write!(f, "score {x} is outside (0, 1)"),
            Error::DuplicateSurface(s) => write!(f, "duplicate surface {s:?}"),
        }
    }
}

impl core::error::Error for Error {}
