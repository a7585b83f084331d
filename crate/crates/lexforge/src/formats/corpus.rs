//! Word lists (one word per line) and corpus TSV (`surface<TAB>tag`, no
//! header).

use std::path::Path;

use lexforge_core::corpus::{Corpus, LabeledWord, LanguageTag, Provenance};

use super::{read_artifact, read_text, write_file};
use crate::error::{LexError, Result};

/// Raw lines of a word-list file; blank lines are kept and normalize away.
pub fn read_word_list(path: &Path) -> Result<Vec<String>> {
    Ok(read_text(path)?.lines().map(str::to_owned).collect())
}

pub fn corpus_to_tsv(corpus: &Corpus) -> String {
    let mut out = String::with_capacity(corpus.len() * 12);
    for e in corpus {
        out.push_str(e.surface());
        out.push('\t');
        out.push_str(e.tag().code());
        out.push('\n');
    }
    out
}

pub fn parse_corpus_tsv(path: &Path, text: &str, seed: u64, provenance: Provenance) -> Result<Corpus> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let (surface, code) = line
            .split_once('\t')
            .ok_or_else(|| LexError::parse(path, n, "expected `surface<TAB>tag`"))?;
        let tag = LanguageTag::from_code(code)
            .ok_or_else(|| LexError::parse(path, n, format!("unknown tag {code:?}")))?;
        let word = LabeledWord::new(surface, tag).map_err(|e| LexError::parse(path, n, e.to_string()))?;
        entries.push(word);
    }
    Corpus::from_entries(entries, seed, provenance).map_err(|e| LexError::parse(path, 0, e.to_string()))
}

pub fn write_corpus(path: &Path, corpus: &Corpus) -> Result<()> {
    write_file(path, corpus_to_tsv(corpus))
}

pub fn read_corpus(path: &Path, seed: u64, provenance: Provenance) -> Result<Corpus> {
    let text = read_artifact(path, "ingest")?;
    parse_corpus_tsv(path, &text, seed, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexforge_core::corpus::build_corpus;

    #[test]
    fn tsv_round_trip() {
        let c = build_corpus(&["gulaam", "Paayal"], &["self-confidence"], 4).unwrap();
        let text = corpus_to_tsv(&c);
        assert!(text.lines().all(|l| l.ends_with("\thi") || l.ends_with("\ten")));
        let back = parse_corpus_tsv(Path::new("x"), &text, 4, c.provenance().clone()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn malformed_rows_name_the_line() {
        let err = parse_corpus_tsv(Path::new("c.tsv"), "kal\thi\nbad row\n", 0, Provenance::default()).unwrap_err();
        assert!(err.to_string().starts_with("c.tsv:2:"), "{err}");
        let err = parse_corpus_tsv(Path::new("c.tsv"), "kal\txx\n", 0, Provenance::default()).unwrap_err();
        assert!(err.to_string().contains("unknown tag"));
        let err = parse_corpus_tsv(Path::new("c.tsv"), "Kal\thi\n", 0, Provenance::default()).unwrap_err();
        assert!(matches!(err, LexError::Parse { line: 1, .. }));
    }
}
