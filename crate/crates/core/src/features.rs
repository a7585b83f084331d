//! Character n-gram features for the linear model.
//!
//! Words are padded with `^` and `$` before extraction so prefixes and
//! suffixes are distinct features. The markers take part in every order,
//! unigrams included.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::fingerprint::Fingerprint;

pub const WORD_START: char = '^';
pub const WORD_END: char = '$';

fn padded(surface: &str) -> Vec<char> {
    let mut chars = Vec::with_capacity(surface.len() + 2);
    chars.push(WORD_START);
    chars.extend(surface.chars());
    chars.push(WORD_END);
    chars
}

fn check_range(n_min: usize, n_max: usize) -> Result<()> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidNgramRange { n_min, n_max });
    }
    Ok(())
}

/// Calls `f` on every n-gram of the padded word, ordered by `n` then
/// position.
fn for_each_ngram(surface: &str, n_min: usize, n_max: usize, mut f: impl FnMut(&[char])) {
    let chars = padded(surface);
    for n in n_min..=n_max.min(chars.len()) {
        for window in chars.windows(n) {
            f(window);
        }
    }
}

/// All n-grams of the padded word with lengths in `n_min..=n_max`, with
/// multiplicity, ordered by `n` then position.
pub fn extract_ngrams(surface: &str, n_min: usize, n_max: usize) -> Vec<String> {
    let mut out = Vec::new();
    for_each_ngram(surface, n_min, n_max, |g| out.push(g.iter().collect()));
    out
}

/// Dense, lexicographically ordered n-gram index. Feature indices run
/// `1..=p`; index 0 is the bias slot of the logistic model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NgramVocabulary {
    n_min: usize,
    n_max: usize,
    index: BTreeMap<String, usize>,
    /// `(ngram, training frequency)` in index order.
    grams: Vec<(String, u64)>,
}

impl NgramVocabulary {
    /// Counts every n-gram over the training words and keeps those seen at
    /// least `min_freq` times.
    pub fn build(train: &Corpus, n_min: usize, n_max: usize, min_freq: u64) -> Result<Self> {
        check_range(n_min, n_max)?;
        if min_freq == 0 {
            return Err(Error::InvalidMinFreq);
        }
        if train.is_empty() {
            return Err(Error::EmptyInput("training corpus"));
        }
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut buf = String::new();
        for entry in train {
            for_each_ngram(entry.surface(), n_min, n_max, |g| {
                buf.clear();
                buf.extend(g);
                match counts.get_mut(buf.as_str()) {
                    Some(c) => *c += 1,
                    None => {
                        counts.insert(buf.clone(), 1);
                    }
                }
            });
        }
        let grams = counts.into_iter().filter(|&(_, c)| c >= min_freq).collect();
        Self::from_grams(n_min, n_max, grams)
    }

    /// Rebuilds a vocabulary from `(ngram, frequency)` pairs, which must be
    /// strictly increasing in byte order and within the length range.
    pub fn from_grams(n_min: usize, n_max: usize, grams: Vec<(String, u64)>) -> Result<Self> {
        check_range(n_min, n_max)?;
        if grams.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let mut index = BTreeMap::new();
        for (i, (g, _)) in grams.iter().enumerate() {
            let len = g.chars().count();
            if len < n_min || len > n_max {
                return Err(Error::InvalidSurface(g.clone()));
            }
            if i > 0 && grams[i - 1].0 >= *g {
                return Err(Error::DuplicateSurface(g.clone()));
            }
            index.insert(g.clone(), i + 1);
        }
        Ok(NgramVocabulary { n_min, n_max, index, grams })
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of features `p`.
    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }

    pub fn index_of(&self, ngram: &str) -> Option<usize> {
        self.index.get(ngram).copied()
    }

    /// `(ngram, index, frequency)` in index order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, u64)> + '_ {
        self.grams.iter().enumerate().map(|(i, (g, f))| (g.as_str(), i + 1, *f))
    }

    /// Identifier of the index mapping (n range and ordered n-grams).
    pub fn id(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.u64(self.n_min as u64).u64(self.n_max as u64);
        for (g, _) in &self.grams {
            fp.bytes(g.as_bytes()).bytes(&[0]);
        }
        fp.finish()
    }
}

/// Sparse count vector over a vocabulary: `(index, count)` pairs with
/// strictly increasing indices and no zero counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureVector {
    entries: Vec<(usize, u32)>,
}

impl FeatureVector {
    pub fn from_pairs(mut pairs: Vec<(usize, u32)>) -> Self {
        pairs.sort_unstable();
        let mut entries: Vec<(usize, u32)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            if c == 0 {
                continue;
            }
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 += c,
                _ => entries.push((i, c)),
            }
        }
        FeatureVector { entries }
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| u64::from(c)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Counts the in-vocabulary n-grams of `surface`; unknown n-grams are
/// dropped.
pub fn vectorize(surface: &str, vocab: &NgramVocabulary) -> FeatureVector {
    let mut hits = Vec::new();
    let mut buf = String::new();
    for_each_ngram(surface, vocab.n_min, vocab.n_max, |g| {
        buf.clear();
        buf.extend(g);
        if let Some(i) = vocab.index_of(&buf) {
            hits.push((i, 1));
        }
    });
    FeatureVector::from_pairs(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{LabeledWord, LanguageTag, Provenance};
    use alloc::vec;
    use proptest::prelude::*;

    fn sorted(mut v: Vec<String>) -> Vec<String> {
        v.sort();
        v
    }

    fn corpus(words: &[(&str, LanguageTag)]) -> Corpus {
        let entries = words.iter().map(|&(s, t)| LabeledWord::new(s, t).unwrap()).collect();
        Corpus::from_entries(entries, 0, Provenance::default()).unwrap()
    }

    fn ab_ba() -> Corpus {
        corpus(&[("ab", LanguageTag::English), ("ba", LanguageTag::Hindi)])
    }

    /// Brute force: every substring of the padded word, by char positions.
    fn substrings(surface: &str, n_min: usize, n_max: usize) -> Vec<String> {
        let p: Vec<char> = alloc::format!("^{surface}$").chars().collect();
        let mut out = Vec::new();
        for start in 0..p.len() {
            for end in start + 1..=p.len() {
                if (n_min..=n_max).contains(&(end - start)) {
                    out.push(p[start..end].iter().collect());
                }
            }
        }
        out
    }

    #[test]
    fn extraction_examples() {
        assert_eq!(sorted(extract_ngrams("a", 1, 1)), sorted(vec!["^".into(), "a".into(), "$".into()]));
        let expect: Vec<String> = ["^", "a", "b", "$", "^a", "ab", "b$"].iter().map(|s| String::from(*s)).collect();
        assert_eq!(sorted(extract_ngrams("ab", 1, 2)), sorted(expect));
        assert_eq!(extract_ngrams("aa", 2, 2), vec!["^a", "aa", "a$"]);
        assert!(extract_ngrams("a", 4, 5).is_empty());
    }

    #[test]
    fn vocabulary_examples() {
        let v = NgramVocabulary::build(&ab_ba(), 1, 2, 1).unwrap();
        assert_eq!(v.len(), 10);
        let grams: Vec<&str> = v.iter().map(|(g, _, _)| g).collect();
        assert_eq!(grams, ["$", "^", "^a", "^b", "a", "a$", "ab", "b", "b$", "ba"]);
        let idx: Vec<usize> = v.iter().map(|(_, i, _)| i).collect();
        assert_eq!(idx, (1..=10).collect::<Vec<_>>());

        let v2 = NgramVocabulary::build(&ab_ba(), 1, 2, 2).unwrap();
        let grams: Vec<&str> = v2.iter().map(|(g, _, _)| g).collect();
        assert_eq!(grams, ["$", "^", "a", "b"]);

        assert_eq!(NgramVocabulary::build(&ab_ba(), 1, 2, 1000), Err(Error::EmptyVocabulary));
        assert!(NgramVocabulary::build(&ab_ba(), 0, 2, 1).is_err());
        assert!(NgramVocabulary::build(&ab_ba(), 3, 2, 1).is_err());
        assert_eq!(NgramVocabulary::build(&ab_ba(), 1, 2, 0), Err(Error::InvalidMinFreq));
    }

    #[test]
    fn vectorize_examples() {
        let v = NgramVocabulary::build(&ab_ba(), 1, 2, 1).unwrap();
        let fv = vectorize("ab", &v);
        assert_eq!(fv.nnz(), 7);
        assert!(fv.entries().iter().all(|&(_, c)| c == 1));

        let fv = vectorize("zz", &v);
        let active: Vec<usize> = fv.entries().iter().map(|&(i, _)| i).collect();
        assert_eq!(active, vec![v.index_of("$").unwrap(), v.index_of("^").unwrap()]);
    }

    #[test]
    fn from_grams_rejects_unsorted_and_out_of_range() {
        let g = |s: &str| (String::from(s), 1u64);
        assert!(NgramVocabulary::from_grams(1, 2, vec![g("b"), g("a")]).is_err());
        assert!(NgramVocabulary::from_grams(1, 2, vec![g("a"), g("a")]).is_err());
        assert!(NgramVocabulary::from_grams(1, 2, vec![g("abc")]).is_err());
        assert!(NgramVocabulary::from_grams(1, 2, vec![]).is_err());
    }

    proptest! {
        #[test]
        fn ngram_count_per_order(word in "[a-z]{1,12}", n in 1usize..7) {
            let padded_len = word.len() + 2;
            prop_assert_eq!(extract_ngrams(&word, n, n).len(), padded_len.saturating_sub(n - 1));
        }

        #[test]
        fn extraction_matches_brute_force(word in "[a-z]{1,10}", n_min in 1usize..4, extra in 0usize..3) {
            let n_max = n_min + extra;
            prop_assert_eq!(sorted(extract_ngrams(&word, n_min, n_max)), sorted(substrings(&word, n_min, n_max)));
        }

        #[test]
        fn vectorize_counts_in_vocab_ngrams(
            words in prop::collection::btree_set("[a-e]{1,8}", 1..30),
            probe in "[a-h]{1,10}",
            min_freq in 1u64..4,
        ) {
            let entries: Vec<_> = words.iter().map(|w| LabeledWord::new(w.as_str(), LanguageTag::Hindi).unwrap()).collect();
            let c = Corpus::from_entries(entries, 0, Provenance::default()).unwrap();
            let Ok(v) = NgramVocabulary::build(&c, 1, 5, min_freq) else { return Ok(()) };
            let fv = vectorize(&probe, &v);
            let expected = extract_ngrams(&probe, 1, 5).iter().filter(|g| v.index_of(g).is_some()).count();
            prop_assert_eq!(fv.total() as usize, expected);
            prop_assert!(fv.entries().windows(2).all(|p| p[0].0 < p[1].0));
            prop_assert!(fv.entries().iter().all(|&(i, c)| c >= 1 && (1..=v.len()).contains(&i)));

            // order-independent and reproducible
            let mut rev: Vec<_> = c.entries().to_vec();
            rev.reverse();
            let c2 = Corpus::from_entries(rev, 0, Provenance::default()).unwrap();
            let v2 = NgramVocabulary::build(&c2, 1, 5, min_freq).unwrap();
            prop_assert_eq!(v.id(), v2.id());
            prop_assert_eq!(&v, &v2);
            prop_assert_eq!(vectorize(&probe, &v2), fv);
        }
    }
}
