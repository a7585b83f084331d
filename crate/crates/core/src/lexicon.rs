//! The scored word lexicon: every word with its two Hindi-strength scores.

use alloc::string::String;
use alloc::vec::Vec;

use crate::bilstm::{softmax_score, BiLstmModel};
use crate::corpus::{normalize_word, Corpus, LanguageTag, Provenance};
use crate::error::{Error, Result};
use crate::features::{vectorize, NgramVocabulary};
use crate::logreg::{logistic_score, LogRegModel};

#[derive(Clone, Debug, PartialEq)]
pub struct LexiconEntry {
    pub surface: String,
    /// BiLSTM softmax Hindi component.
    pub score1: f64,
    /// Logistic n-gram model output.
    pub score2: f64,
    pub gold_tag: Option<LanguageTag>,
}

impl LexiconEntry {
    pub fn validate(&self) -> Result<()> {
        for s in [self.score1, self.score2] {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::ScoreOutOfRange(s));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LexiconMetadata {
    pub bilstm_id: u64,
    pub logreg_id: u64,
    pub vocab_id: u64,
    pub provenance: Provenance,
    /// Seconds since the Unix epoch, supplied by the caller.
    pub built_at: u64,
}

/// Entries sorted by the UTF-8 bytes of their surface, which are unique.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    metadata: LexiconMetadata,
}

impl Lexicon {
    pub fn from_entries(mut entries: Vec<LexiconEntry>, metadata: LexiconMetadata) -> Result<Self> {
        entries.sort_by(|a, b| a.surface.as_bytes().cmp(b.surface.as_bytes()));
        for pair in entries.windows(2) {
            if pair[0].surface == pair[1].surface {
                return Err(Error::DuplicateSurface(pair[0].surface.clone()));
            }
        }
        for e in &entries {
            e.validate()?;
        }
        Ok(Lexicon { entries, metadata })
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn metadata(&self) -> &LexiconMetadata {
        &self.metadata
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact match after the corpus normalization (trim, lowercase). Input
    /// that does not normalize to a single word is never found.
    pub fn lookup(&self, surface: &str) -> Option<&LexiconEntry> {
        let words = normalize_word(surface);
        let [word] = words.as_slice() else { return None };
        self.entries
            .binary_search_by(|e| e.surface.as_bytes().cmp(word.as_bytes()))
            .ok()
            .map(|i| &self.entries[i])
    }
}

fn score_normalized(lr: &LogRegModel, vocab: &NgramVocabulary, nn: &BiLstmModel, word: &str) -> (f64, f64) {
    let score1 = softmax_score(nn, word).0;
    let score2 = logistic_score(lr, &vectorize(word, vocab));
    (score1, score2)
}

/// `(score1, score2)` for any word, seen or not. Unknown characters fall
/// back to the reserved embedding and unknown n-grams are dropped.
pub fn score_word(lr: &LogRegModel, vocab: &NgramVocabulary, nn: &BiLstmModel, surface: &str) -> Result<(f64, f64)> {
    lr.check_vocabulary(vocab)?;
    let words = normalize_word(surface);
    match words.as_slice() {
        [word] => Ok(score_normalized(lr, vocab, nn, word)),
        _ => Err(Error::NotSingleWord { input: surface.into(), words: words.len() }),
    }
}

/// Scores `entries[range]` in order; building blocks for parallel callers.
pub fn score_entries(
    corpus: &Corpus,
    lr: &LogRegModel,
    vocab: &NgramVocabulary,
    nn: &BiLstmModel,
    range: core::ops::Range<usize>,
) -> Vec<LexiconEntry> {
    corpus.entries()[range]
        .iter()
        .map(|e| {
            let (score1, score2) = score_normalized(lr, vocab, nn, e.surface());
            LexiconEntry { surface: e.surface().into(), score1, score2, gold_tag: Some(e.tag()) }
        })
        .collect()
}

pub fn metadata_for(corpus: &Corpus, lr: &LogRegModel, vocab: &NgramVocabulary, nn: &BiLstmModel, built_at: u64) -> LexiconMetadata {
    LexiconMetadata {
        bilstm_id: nn.fingerprint(),
        logreg_id: lr.fingerprint(),
        vocab_id: vocab.id(),
        provenance: corpus.provenance().clone(),
        built_at,
    }
}

/// One entry per corpus word, carrying its gold tag.
pub fn build_lexicon(
    corpus: &Corpus,
    lr: &LogRegModel,
    vocab: &NgramVocabulary,
    nn: &BiLstmModel,
    built_at: u64,
) -> Result<Lexicon> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("corpus"));
    }
    lr.check_vocabulary(vocab)?;
    let entries = score_entries(corpus, lr, vocab, nn, 0..corpus.len());
    Lexicon::from_entries(entries, metadata_for(corpus, lr, vocab, nn, built_at))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilstm::{BiLstmHyperparams, CharVocabulary};
    use crate::corpus::build_corpus;
    use crate::logreg::LogRegHyperparams;
    use crate::rng;
    use alloc::vec;

    fn fixture() -> (Corpus, LogRegModel, NgramVocabulary, BiLstmModel) {
        let c = build_corpus(&["gulaam", "paayal", "samudr", "khiladii"], &["public", "great", "literally"], 1).unwrap();
        let v = NgramVocabulary::build(&c, 1, 5, 1).unwrap();
        let hp = LogRegHyperparams { epochs: 20, batch_size: 2, ..Default::default() };
        let (lr, _) = crate::logreg::train_logreg(&c, &v, hp).unwrap();
        let nn = BiLstmModel::init(
            CharVocabulary::build(&c),
            BiLstmHyperparams { embedding_dim: 3, hidden_dim: 4, ..Default::default() },
            &mut rng::seeded(2),
        );
        (c, lr, v, nn)
    }

    #[test]
    fn one_entry_per_word_and_lookup() {
        let (c, lr, v, nn) = fixture();
        let lex = build_lexicon(&c, &lr, &v, &nn, 0).unwrap();
        assert_eq!(lex.len(), c.len());
        assert!(lex.entries().windows(2).all(|p| p[0].surface < p[1].surface));
        let e = lex.lookup("GULAAM").unwrap();
        assert_eq!(e.surface, "gulaam");
        assert_eq!(e.gold_tag, Some(LanguageTag::Hindi));
        assert_eq!(lex.lookup("  gulaam\n"), Some(e));
        assert!(lex.lookup("nahin").is_none());
        assert!(lex.lookup("gul-aam").is_none());
        assert_eq!(score_word(&lr, &v, &nn, "gulaam").unwrap(), (e.score1, e.score2));
    }

    #[test]
    fn unseen_characters_score_from_bias() {
        let (_, lr, v, nn) = fixture();
        let (s1, s2) = score_word(&lr, &v, &nn, "ζζζ").unwrap();
        // only the boundary markers are in-vocabulary
        let only_markers = vectorize("ζζζ", &v);
        assert!(only_markers.entries().iter().all(|&(i, _)| {
            let g = v.iter().nth(i - 1).unwrap().0;
            g == "^" || g == "$"
        }));
        assert!(s1 > 0.0 && s1 < 1.0 && s2 > 0.0 && s2 < 1.0);
        let (_, s2_digits) = score_word(&lr, &v, &nn, "123").unwrap();
        assert_eq!(s2, s2_digits);
    }

    #[test]
    fn no_features_at_all_gives_sigmoid_of_bias() {
        // vocabulary without boundary unigrams
        let c = build_corpus(&["ab"], &["cd"], 1).unwrap();
        let v = NgramVocabulary::from_grams(2, 2, vec![("ab".into(), 1), ("cd".into(), 1)]).unwrap();
        let lr = LogRegModel::from_parts(0.7, vec![0.3, -0.2], v.id(), Default::default());
        let nn = BiLstmModel::init(CharVocabulary::build(&c), BiLstmHyperparams { embedding_dim: 2, hidden_dim: 2, ..Default::default() }, &mut rng::seeded(1));
        let (_, s2) = score_word(&lr, &v, &nn, "zzz").unwrap();
        assert_eq!(s2, crate::math::sigmoid(0.7));
    }

    #[test]
    fn multi_word_input_rejected() {
        let (_, lr, v, nn) = fixture();
        assert!(matches!(score_word(&lr, &v, &nn, "self-confidence"), Err(Error::NotSingleWord { words: 2, .. })));
        assert!(matches!(score_word(&lr, &v, &nn, "  "), Err(Error::NotSingleWord { words: 0, .. })));
    }

    #[test]
    fn from_entries_validates() {
        let e = |s: &str, a, b| LexiconEntry { surface: s.into(), score1: a, score2: b, gold_tag: None };
        assert!(Lexicon::from_entries(vec![e("a", 0.5, 1.5)], Default::default()).is_err());
        assert!(Lexicon::from_entries(vec![e("a", 0.0, 0.5)], Default::default()).is_err());
        assert!(Lexicon::from_entries(vec![e("a", 0.5, 0.5), e("a", 0.2, 0.2)], Default::default()).is_err());
        let lex = Lexicon::from_entries(vec![e("b", 0.5, 0.5), e("a", 0.2, 0.2)], Default::default()).unwrap();
        assert_eq!(lex.entries()[0].surface, "a");
    }
}
