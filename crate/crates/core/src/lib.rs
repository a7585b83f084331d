//! Character-level Hindi/English word language identification.
//!
//! This crate holds the allocation-only algorithmic core: corpus
//! normalization and splitting, character n-gram features, a logistic
//! regression scorer, a from-scratch bidirectional LSTM, evaluation metrics,
//! the scored lexicon and box-plot statistics. It has no IO and builds
//! under `#![no_std]` with `alloc`.
//!
//! Both classifiers produce a *Hindi language strength* in `(0, 1)`:
//! `score1` is the Hindi component of the BiLSTM softmax and `score2` is the
//! logistic output of the n-gram model.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bilstm;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod fingerprint;
pub mod lexicon;
pub mod logreg;
pub mod math;
pub mod plot;
pub mod rng;

pub use bilstm::{BiLstmHyperparams, BiLstmModel, CharVocabulary};
pub use corpus::{Corpus, CorpusStats, LabeledWord, LanguageTag, Provenance, SplitCorpus};
pub use error::{Error, Result};
pub use eval::{ComparisonTable, ConfusionMatrix, EvalReport};
pub use features::{FeatureVector, NgramVocabulary};
pub use lexicon::{Lexicon, LexiconEntry, LexiconMetadata};
pub use logreg::{LogRegHyperparams, LogRegModel, TrainReport};
pub use plot::{BoxStats, ScatterRecord};
