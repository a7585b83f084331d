//! Word-list ingestion: normalization, labeling, deduplication, shuffling,
//! splitting and per-tag statistics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum LanguageTag {
    Hindi,
    English,
}

impl LanguageTag {
    pub const ALL: [LanguageTag; 2] = [LanguageTag::Hindi, LanguageTag::English];

    /// Two-letter code used in every file format (`hi` / `en`).
    pub fn code(self) -> &'static str {
        match self {
            LanguageTag::Hindi => "hi",
            LanguageTag::English => "en",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LanguageTag::Hindi => "Hindi",
            LanguageTag::English => "English",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "hi" => Some(LanguageTag::Hindi),
            "en" => Some(LanguageTag::English),
            _ => None,
        }
    }

    pub fn other(self) -> Self {
        match self {
            LanguageTag::Hindi => LanguageTag::English,
            LanguageTag::English => LanguageTag::Hindi,
        }
    }

    /// Row/column position: Hindi is class 0 everywhere.
    pub fn index(self) -> usize {
        match self {
            LanguageTag::Hindi => 0,
            LanguageTag::English => 1,
        }
    }

    /// Binary target for the logistic model (Hindi = 1).
    pub fn target(self) -> f64 {
        match self {
            LanguageTag::Hindi => 1.0,
            LanguageTag::English => 0.0,
        }
    }
}

/// True when `s` is a non-empty run of `[a-z]`.
pub fn is_corpus_surface(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LabeledWord {
    surface: String,
    tag: LanguageTag,
}

impl LabeledWord {
    pub fn new(surface: impl Into<String>, tag: LanguageTag) -> Result<Self> {
        let surface = surface.into();
        if !is_corpus_surface(&surface) {
            return Err(Error::InvalidSurface(surface));
        }
        Ok(LabeledWord { surface, tag })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn tag(&self) -> LanguageTag {
        self.tag
    }
}

/// What happened to one raw word list on its way into the corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SourceRecord {
    pub name: String,
    /// Raw lines supplied.
    pub raw_count: usize,
    /// Surfaces produced by normalization (after hyphen splitting).
    pub normalized_count: usize,
    /// Surfaces dropped for containing characters outside `[a-z]`.
    pub non_latin_dropped: usize,
    pub duplicates_dropped: usize,
    /// Surfaces dropped because the other class also listed them.
    pub cross_class_dropped: usize,
    pub retained_count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Provenance {
    pub hindi: SourceRecord,
    pub english: SourceRecord,
    /// Surfaces present in both lists, sorted; removed from both classes.
    pub cross_class_excluded: Vec<String>,
}

impl Provenance {
    pub fn source(&self, tag: LanguageTag) -> &SourceRecord {
        match tag {
            LanguageTag::Hindi => &self.hindi,
            LanguageTag::English => &self.english,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    entries: Vec<LabeledWord>,
    seed: u64,
    provenance: Provenance,
}

impl Corpus {
    /// Assembles a corpus from already-labeled entries, checking the
    /// uniqueness invariants. Order is preserved.
    pub fn from_entries(entries: Vec<LabeledWord>, seed: u64, provenance: Provenance) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.surface()) {
                return Err(Error::DuplicateSurface(e.surface.clone()));
            }
        }
        Ok(Corpus { entries, seed, provenance })
    }

    pub fn entries(&self) -> &[LabeledWord] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn iter(&self) -> core::slice::Iter<'_, LabeledWord> {
        self.entries.iter()
    }

    pub fn count(&self, tag: LanguageTag) -> usize {
        self.entries.iter().filter(|e| e.tag == tag).count()
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a LabeledWord;
    type IntoIter = core::slice::Iter<'a, LabeledWord>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Cleans one raw list item into zero or more word surfaces: trims,
/// lowercases, and splits on hyphens and interior whitespace. Empty
/// components are dropped. The alphabet check happens in [`build_corpus`].
pub fn normalize_word(raw: &str) -> Vec<String> {
    raw.trim()
        .to_lowercase()
        .split(|c: char| c == '-' || c.is_whitespace())
        .filter(|part| !part.is_empty())
        .map(ToString::to_string)
        .collect()
}

fn ingest(name: &str, raw: &[impl AsRef<str>]) -> (SourceRecord, BTreeSet<String>, Vec<String>) {
    let mut record = SourceRecord { name: name.to_string(), raw_count: raw.len(), ..Default::default() };
    let mut seen = BTreeSet::new();
    let mut ordered = Vec::new();
    for item in raw {
        for word in normalize_word(item.as_ref()) {
            record.normalized_count += 1;
            if !is_corpus_surface(&word) {
                record.non_latin_dropped += 1;
            } else if seen.contains(&word) {
                record.duplicates_dropped += 1;
            } else {
                seen.insert(word.clone());
                ordered.push(word);
            }
        }
    }
    (record, seen, ordered)
}

/// Normalizes, labels, deduplicates and merges the two raw word lists, then
/// shuffles the result with `seed`.
///
/// Surfaces listed under both languages are removed from both and recorded
/// in the provenance.
pub fn build_corpus(hindi_raw: &[impl AsRef<str>], english_raw: &[impl AsRef<str>], seed: u64) -> Result<Corpus> {
    if hindi_raw.is_empty() {
        return Err(Error::EmptyInput("hindi word list"));
    }
    if english_raw.is_empty() {
        return Err(Error::EmptyInput("english word list"));
    }
    let (mut hi_rec, hi_set, hi_words) = ingest("hindi", hindi_raw);
    let (mut en_rec, en_set, en_words) = ingest("english", english_raw);

    let shared: Vec<String> = hi_set.intersection(&en_set).cloned().collect();
    let shared_set: BTreeSet<&str> = shared.iter().map(String::as_str).collect();
    hi_rec.cross_class_dropped = shared.len();
    en_rec.cross_class_dropped = shared.len();

    let mut entries = Vec::with_capacity(hi_words.len() + en_words.len());
    for (words, tag, rec) in [
        (hi_words, LanguageTag::Hindi, &mut hi_rec),
        (en_words, LanguageTag::English, &mut en_rec),
    ] {
        let before = entries.len();
        entries.extend(
            words
                .into_iter()
                .filter(|w| !shared_set.contains(w.as_str()))
                .map(|surface| LabeledWord { surface, tag }),
        );
        rec.retained_count = entries.len() - before;
        if rec.retained_count == 0 {
            return Err(Error::EmptyClass(tag));
        }
    }

    entries.shuffle(&mut rng::seeded(seed));
    let provenance = Provenance { hindi: hi_rec, english: en_rec, cross_class_excluded: shared };
    Ok(Corpus { entries, seed, provenance })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TagStats {
    pub count: usize,
    /// Share of the corpus in percent.
    pub percentage: f64,
    pub max_word_length: usize,
    pub avg_word_length: f64,
}

/// Per-tag counts and word lengths (in characters). Tags with no entries
/// are absent.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorpusStats {
    pub total: usize,
    pub per_tag: BTreeMap<LanguageTag, TagStats>,
}

impl CorpusStats {
    pub fn get(&self, tag: LanguageTag) -> Option<&TagStats> {
        self.per_tag.get(&tag)
    }
}

pub fn corpus_stats(corpus: &Corpus) -> Result<CorpusStats> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("corpus"));
    }
    let mut acc: BTreeMap<LanguageTag, (usize, usize, usize)> = BTreeMap::new();
    for e in corpus {
        let len = e.surface.chars().count();
        let slot = acc.entry(e.tag).or_default();
        slot.0 += 1;
        slot.1 = slot.1.max(len);
        slot.2 += len;
    }
    let total = corpus.len();
    let per_tag = acc
        .into_iter()
        .map(|(tag, (count, max_len, chars))| {
            let stats = TagStats {
                count,
                percentage: 100.0 * count as f64 / total as f64,
                max_word_length: max_len,
                avg_word_length: chars as f64 / count as f64,
            };
            (tag, stats)
        })
        .collect();
    Ok(CorpusStats { total, per_tag })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitCorpus {
    pub train: Corpus,
    pub test: Corpus,
    pub test_fraction: f64,
}

/// Number of test entries for a corpus of `n` entries.
///
/// The smaller side of the split is `ceil(n * min(f, 1 - f))`, so swapping
/// `f` and `1 - f` swaps the train and test sizes exactly. A `1e-9` slack
/// absorbs representation error in fractions like `0.1`.
pub fn test_size(n: usize, test_fraction: f64) -> usize {
    let minority = test_fraction.min(1.0 - test_fraction);
    let small = libm::ceil(n as f64 * minority - 1e-9).max(0.0) as usize;
    let small = small.min(n);
    if test_fraction <= 0.5 {
        small
    } else {
        n - small
    }
}

/// Deterministic random train/test partition. Both sides keep the corpus
/// order of their entries.
pub fn split_corpus(corpus: &Corpus, test_fraction: f64, seed: u64) -> Result<SplitCorpus> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidFraction(test_fraction));
    }
    let n = corpus.len();
    let k = test_size(n, test_fraction);
    if k == 0 || k == n {
        return Err(Error::EmptySplit { train: n - k, test: k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::seeded(seed));
    let mut in_test = alloc::vec![false; n];
    for &i in &order[..k] {
        in_test[i] = true;
    }
    let (mut train, mut test) = (Vec::with_capacity(n - k), Vec::with_capacity(k));
    for (entry, is_test) in corpus.entries.iter().zip(in_test) {
        if is_test {
            test.push(entry.clone());
        } else {
            train.push(entry.clone());
        }
    }
    let side = |entries| Corpus { entries, seed: corpus.seed, provenance: corpus.provenance.clone() };
    Ok(SplitCorpus { train: side(train), test: side(test), test_fraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn w(s: &str, tag: LanguageTag) -> LabeledWord {
        LabeledWord::new(s, tag).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_word("self-confidence"), vec!["self", "confidence"]);
        assert_eq!(normalize_word("  Word\n"), vec!["word"]);
        assert_eq!(normalize_word("fund-raiser"), vec!["fund", "raiser"]);
        assert!(normalize_word(" -- \t").is_empty());
        assert_eq!(normalize_word("a--b"), vec!["a", "b"]);
    }

    #[test]
    fn within_class_duplicates_collapse() {
        let c = build_corpus(&["Gulaam", "gulaam"], &["great"], 1).unwrap();
        let mut got: Vec<_> = c.iter().cloned().collect();
        got.sort();
        assert_eq!(got, vec![w("great", LanguageTag::English), w("gulaam", LanguageTag::Hindi)]);
        assert_eq!(c.provenance().hindi.duplicates_dropped, 1);
    }

    #[test]
    fn cross_class_exclusion_can_empty_a_class() {
        let err = build_corpus(&["to"], &["to"], 1).unwrap_err();
        assert_eq!(err, Error::EmptyClass(LanguageTag::Hindi));
    }

    #[test]
    fn cross_class_exclusion_is_recorded() {
        let c = build_corpus(&["to", "kal"], &["to", "great"], 3).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.provenance().cross_class_excluded, vec!["to"]);
        assert_eq!(c.provenance().english.cross_class_dropped, 1);
        assert_eq!(c.provenance().english.retained_count, 1);
    }

    #[test]
    fn non_latin_words_are_dropped_and_counted() {
        let c = build_corpus(&["गुलाम", "gulaam", "naïve", "x2"], &["great"], 1).unwrap();
        assert_eq!(c.count(LanguageTag::Hindi), 1);
        assert_eq!(c.provenance().hindi.non_latin_dropped, 3);
    }

    #[test]
    fn empty_lists_rejected() {
        let none: [&str; 0] = [];
        assert!(build_corpus(&none, &["a"], 1).is_err());
        assert!(build_corpus(&["a"], &none, 1).is_err());
    }

    #[test]
    fn shuffle_is_seed_deterministic() {
        let a = build_corpus(&["paayal", "samudr"], &["public", "great"], 7).unwrap();
        let b = build_corpus(&["paayal", "samudr"], &["public", "great"], 7).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn stats_examples() {
        let c = Corpus::from_entries(
            vec![w("ab", LanguageTag::Hindi), w("abc", LanguageTag::Hindi)],
            0,
            Provenance::default(),
        )
        .unwrap();
        let s = corpus_stats(&c).unwrap();
        let hi = s.get(LanguageTag::Hindi).unwrap();
        assert_eq!((hi.count, hi.max_word_length), (2, 3));
        assert_eq!(hi.percentage, 100.0);
        assert_eq!(hi.avg_word_length, 2.5);
        assert!(s.get(LanguageTag::English).is_none());

        let c = Corpus::from_entries(vec![w("a", LanguageTag::English)], 0, Provenance::default()).unwrap();
        let en = *corpus_stats(&c).unwrap().get(LanguageTag::English).unwrap();
        assert_eq!(en, TagStats { count: 1, percentage: 100.0, max_word_length: 1, avg_word_length: 1.0 });
    }

    #[test]
    fn split_sizes() {
        assert_eq!(test_size(36429, 0.25), 9108);
        assert_eq!(36429 - test_size(36429, 0.25), 27321);
        assert_eq!(test_size(4, 0.25), 1);
        assert_eq!(test_size(50, 0.1), 5);
        assert_eq!(test_size(5, 0.1), 1);
        assert_eq!(test_size(5, 0.9), 4);
    }

    #[test]
    fn split_rejects_bad_fractions_and_empty_sides() {
        let c = build_corpus(&["kal", "aaj"], &["great", "public"], 1).unwrap();
        assert!(matches!(split_corpus(&c, 0.0, 1), Err(Error::InvalidFraction(_))));
        assert!(matches!(split_corpus(&c, 1.0, 1), Err(Error::InvalidFraction(_))));
        let one = Corpus::from_entries(vec![w("a", LanguageTag::Hindi)], 0, Provenance::default()).unwrap();
        assert!(matches!(split_corpus(&one, 0.5, 1), Err(Error::EmptySplit { .. })));
    }

    fn word_lists() -> impl Strategy<Value = (Vec<String>, Vec<String>)> {
        let word = "[A-Za-z][a-z\\- ]{0,7}";
        (prop::collection::vec(word, 1..40), prop::collection::vec(word, 1..40))
    }

    proptest! {
        #[test]
        fn built_corpus_invariants((hi, en) in word_lists(), seed in any::<u64>()) {
            let Ok(c) = build_corpus(&hi, &en, seed) else { return Ok(()) };
            for e in &c {
                prop_assert!(is_corpus_surface(e.surface()));
            }
            let stats = corpus_stats(&c).unwrap();
            let total: usize = stats.per_tag.values().map(|s| s.count).sum();
            prop_assert_eq!(total, c.len());
            let pct: f64 = stats.per_tag.values().map(|s| s.percentage).sum();
            prop_assert!((pct - 100.0).abs() < 1e-9);
            for s in stats.per_tag.values() {
                prop_assert!(s.max_word_length as f64 >= s.avg_word_length && s.avg_word_length >= 1.0);
            }

            // rebuilding from the corpus' own surfaces gives the same entry set
            let own = |t| c.iter().filter(|e| e.tag() == t).map(|e| e.surface().to_string()).collect::<Vec<_>>();
            let again = build_corpus(&own(LanguageTag::Hindi), &own(LanguageTag::English), seed).unwrap();
            let mut a: Vec<_> = c.entries().to_vec();
            let mut b: Vec<_> = again.entries().to_vec();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn split_partitions_and_swaps(n in 2usize..300, f in 0.01f64..0.99, seed in any::<u64>()) {
            let entries: Vec<_> = (0..n)
                .map(|i| {
                    let mut s = String::new();
                    let mut k = i;
                    loop {
                        s.push((b'a' + (k % 26) as u8) as char);
                        k /= 26;
                        if k == 0 { break; }
                    }
                    w(&s, if i % 3 == 0 { LanguageTag::English } else { LanguageTag::Hindi })
                })
                .collect();
            let c = Corpus::from_entries(entries, 0, Provenance::default()).unwrap();
            let k = test_size(n, f);
            prop_assert_eq!(test_size(n, 1.0 - f), n - k);
            let Ok(s) = split_corpus(&c, f, seed) else {
                prop_assert!(k == 0 || k == n);
                return Ok(());
            };
            prop_assert_eq!(s.test.len(), k);
            let mut all: Vec<_> = s.train.iter().chain(s.test.iter()).cloned().collect();
            all.sort();
            let mut orig = c.entries().to_vec();
            orig.sort();
            prop_assert_eq!(all, orig);
            prop_assert_eq!(split_corpus(&c, f, seed).unwrap(), s);
        }
    }
}
