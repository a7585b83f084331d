//! Lexicon TSV plus a JSON metadata sidecar.
//!
//! ```text
//! word <TAB> score1 <TAB> score2 <TAB> tag
//! abhilaasha <TAB> 0.9943395256996155 <TAB> 0.9999969538347858 <TAB> hi
//! ```
//!
//! Scores are written as the shortest decimal that parses back to the same
//! `f64`. The tag column is empty for untagged entries, and the export form
//! drops the column (and its header field) altogether.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lexforge_core::corpus::LanguageTag;
use lexforge_core::{Lexicon, LexiconEntry, LexiconMetadata};

use super::{parse_f64, read_artifact, write_file};
use crate::error::{LexError, Result};

pub const HEADER: &str = "word\tscore1\tscore2\ttag";
pub const EXPORT_HEADER: &str = "word\tscore1\tscore2";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TagColumn {
    #[default]
    Include,
    Omit,
}

pub fn entry_line(e: &LexiconEntry, tags: TagColumn) -> String {
    let mut line = format!("{}\t{}\t{}", e.surface, e.score1, e.score2);
    if tags == TagColumn::Include {
        line.push('\t');
        line.push_str(e.gold_tag.map_or("", LanguageTag::code));
    }
    line
}

pub fn lexicon_to_tsv(lex: &Lexicon, tags: TagColumn) -> String {
    let mut out = String::with_capacity(lex.len() * 48);
    out.push_str(if tags == TagColumn::Include { HEADER } else { EXPORT_HEADER });
    out.push('\n');
    for e in lex.entries() {
        writeln!(out, "{}", entry_line(e, tags)).unwrap();
    }
    out
}

/// Parses one data row; `line` is only used for error messages.
pub fn parse_entry(path: &Path, line: usize, row: &str, tags: TagColumn) -> Result<LexiconEntry> {
    let fields: Vec<&str> = row.split('\t').collect();
    let expected = if tags == TagColumn::Include { 4 } else { 3 };
    if fields.len() != expected {
        return Err(LexError::parse(path, line, format!("expected {expected} tab-separated fields, found {}", fields.len())));
    }
    let surface = fields[0];
    if !lexforge_core::corpus::is_corpus_surface(surface) {
        return Err(LexError::parse(path, line, format!("invalid word {surface:?}")));
    }
    let gold_tag = match fields.get(3) {
        None | Some(&"") => None,
        Some(code) => Some(
            LanguageTag::from_code(code)
                .ok_or_else(|| LexError::parse(path, line, format!("unknown tag {code:?}")))?,
        ),
    };
    let entry = LexiconEntry {
        surface: surface.to_owned(),
        score1: parse_f64(path, line, fields[1], "score1")?,
        score2: parse_f64(path, line, fields[2], "score2")?,
        gold_tag,
    };
    entry.validate().map_err(|e| LexError::parse(path, line, e.to_string()))?;
    Ok(entry)
}

pub fn parse_lexicon_tsv(path: &Path, text: &str, metadata: LexiconMetadata) -> Result<Lexicon> {
    let mut lines = text.lines();
    let tags = match lines.next() {
        Some(HEADER) => TagColumn::Include,
        Some(EXPORT_HEADER) => TagColumn::Omit,
        _ => return Err(LexError::parse(path, 1, format!("expected header {HEADER:?}"))),
    };
    let mut entries = Vec::new();
    let mut prev: Option<&str> = None;
    for (i, row) in lines.enumerate() {
        let line = i + 2;
        let e = parse_entry(path, line, row, tags)?;
        if let Some(p) = prev {
            if p.as_bytes() >= row.as_bytes().split(|&b| b == b'\t').next().unwrap() {
                return Err(LexError::parse(path, line, "rows must be sorted by word with no duplicates"));
            }
        }
        prev = row.split('\t').next();
        entries.push(e);
    }
    Lexicon::from_entries(entries, metadata).map_err(|e| LexError::parse(path, 0, e.to_string()))
}

pub fn sidecar_path(tsv: &Path) -> PathBuf {
    tsv.with_extension("meta.json")
}

pub fn metadata_to_json(meta: &LexiconMetadata) -> String {
    let mut s = serde_json::to_string_pretty(meta).expect("metadata serializes");
    s.push('\n');
    s
}

pub fn write_lexicon(path: &Path, lex: &Lexicon, tags: TagColumn) -> Result<()> {
    write_file(path, lexicon_to_tsv(lex, tags))?;
    write_file(&sidecar_path(path), metadata_to_json(lex.metadata()))
}

/// Loads a lexicon; the sidecar is optional and defaults to empty metadata.
pub fn read_lexicon(path: &Path) -> Result<Lexicon> {
    let text = read_artifact(path, "lexicon")?;
    let meta_path = sidecar_path(path);
    let metadata = if meta_path.exists() {
        let raw = super::read_text(&meta_path)?;
        serde_json::from_str(&raw)
            .map_err(|e| LexError::parse(&meta_path, e.line(), e.to_string()))?
    } else {
        LexiconMetadata::default()
    };
    parse_lexicon_tsv(path, &text, metadata)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(w: &str, s1: f64, s2: f64, tag: Option<LanguageTag>) -> LexiconEntry {
        LexiconEntry { surface: w.into(), score1: s1, score2: s2, gold_tag: tag }
    }

    #[test]
    fn layout_with_and_without_tags() {
        let lex = Lexicon::from_entries(
            vec![entry("kal", 0.75, 0.5, Some(LanguageTag::Hindi)), entry("bat", 0.125, 1e-20, None)],
            LexiconMetadata::default(),
        )
        .unwrap();
        assert_eq!(
            lexicon_to_tsv(&lex, TagColumn::Include),
            "word\tscore1\tscore2\ttag\nbat\t0.125\t0.00000000000000000001\t\nkal\t0.75\t0.5\thi\n"
        );
        assert_eq!(lexicon_to_tsv(&lex, TagColumn::Omit), "word\tscore1\tscore2\nbat\t0.125\t0.00000000000000000001\nkal\t0.75\t0.5\n");
        let back = parse_lexicon_tsv(Path::new("l"), &lexicon_to_tsv(&lex, TagColumn::Include), LexiconMetadata::default()).unwrap();
        assert_eq!(back, lex);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = "word\tscore1\tscore2\ttag\nkal\t0.5\t0.5\thi\nzz\t0.5\tNaNx\ten\n";
        let err = parse_lexicon_tsv(Path::new("lex.tsv"), bad, LexiconMetadata::default()).unwrap_err();
        assert!(matches!(err, LexError::Parse { line: 3, .. }), "{err}");
        let range = "word\tscore1\tscore2\ttag\nkal\t1\t0.5\thi\n";
        let err = parse_lexicon_tsv(Path::new("lex.tsv"), range, LexiconMetadata::default()).unwrap_err();
        assert!(err.to_string().contains("lex.tsv:2:"), "{err}");
        let unsorted = "word\tscore1\tscore2\ttag\nkal\t0.5\t0.5\thi\nab\t0.5\t0.5\ten\n";
        assert!(parse_lexicon_tsv(Path::new("l"), unsorted, LexiconMetadata::default()).is_err());
        assert!(parse_lexicon_tsv(Path::new("l"), "kal\t0.5\t0.5\thi\n", LexiconMetadata::default()).is_err());
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("a/lexicon.tsv")), Path::new("a/lexicon.meta.json"));
    }
}
