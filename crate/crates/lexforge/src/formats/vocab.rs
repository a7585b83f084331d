//! N-gram vocabulary TSV:
//!
//! ```text
//! # n_min=1 n_max=5
//! $ <TAB> 1 <TAB> 9758
//! ^ <TAB> 2 <TAB> 9758
//! ...
//! ```
//!
//! Rows are `ngram<TAB>index<TAB>frequency` in lexicographic (byte) order,
//! indices dense from 1.

use std::fmt::Write;
use std::path::Path;

use lexforge_core::features::NgramVocabulary;

use super::{read_artifact, write_file};
use crate::error::{LexError, Result};

pub fn vocab_to_tsv(vocab: &NgramVocabulary) -> String {
    let mut out = format!("# n_min={} n_max={}\n", vocab.n_min(), vocab.n_max());
    for (gram, index, freq) in vocab.iter() {
        writeln!(out, "{gram}\t{index}\t{freq}").unwrap();
    }
    out
}

pub fn parse_vocab_tsv(path: &Path, text: &str) -> Result<NgramVocabulary> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| LexError::parse(path, 1, "empty vocabulary file"))?;
    let range = header
        .strip_prefix("# n_min=")
        .and_then(|rest| rest.split_once(" n_max="))
        .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)));
    let (n_min, n_max) = range.ok_or_else(|| LexError::parse(path, 1, "expected `# n_min=<n> n_max=<n>` header"))?;
    let mut grams = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i + 2;
        let fields: Vec<&str> = line.split('\t').collect();
        let [gram, index, freq] = fields[..] else {
            return Err(LexError::parse(path, n, "expected `ngram<TAB>index<TAB>frequency`"));
        };
        if index.parse::<usize>().ok() != Some(grams.len() + 1) {
            return Err(LexError::parse(path, n, format!("index {index:?} out of sequence")));
        }
        let freq = freq
            .parse::<u64>()
            .map_err(|_| LexError::parse(path, n, format!("bad frequency {freq:?}")))?;
        grams.push((gram.to_owned(), freq));
    }
    NgramVocabulary::from_grams(n_min, n_max, grams).map_err(|e| LexError::parse(path, 0, e.to_string()))
}

pub fn write_vocab(path: &Path, vocab: &NgramVocabulary) -> Result<()> {
    write_file(path, vocab_to_tsv(vocab))
}

pub fn read_vocab(path: &Path) -> Result<NgramVocabulary> {
    parse_vocab_tsv(path, &read_artifact(path, "train")?)
}
