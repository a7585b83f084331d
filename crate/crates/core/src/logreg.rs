//! Binary logistic regression over character n-gram counts.
//!
//! The positive class is Hindi, so the model output is directly the Hindi
//! language strength (`score2`):
//!
//! ```text
//! score2(x) = sigmoid(theta0 + sum_i theta_i * x_i)
//! ```
//!
//! Training minimizes mean binary cross-entropy plus `lambda / 2 * |theta|^2`
//! (bias excluded) with seeded mini-batch gradient descent.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::corpus::{Corpus, LanguageTag};
use crate::error::{Error, Result};
use crate::features::{vectorize, FeatureVector, NgramVocabulary};
use crate::fingerprint::Fingerprint;
use crate::math::{sigmoid, softplus};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct LogRegHyperparams {
    pub learning_rate: f64,
    pub l2_lambda: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for LogRegHyperparams {
    fn default() -> Self {
        LogRegHyperparams { learning_rate: 0.1, l2_lambda: 1e-4, epochs: 30, batch_size: 64, seed: 42 }
    }
}

impl LogRegHyperparams {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidHyperparameter("logreg learning_rate must be positive"));
        }
        if !(self.l2_lambda.is_finite() && self.l2_lambda >= 0.0) {
            return Err(Error::InvalidHyperparameter("logreg l2_lambda must be non-negative"));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidHyperparameter("logreg batch_size must be at least 1"));
        }
        Ok(())
    }
}

/// Per-epoch training trace shared by both classifiers.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainReport {
    pub epoch_loss: Vec<f64>,
    pub train_accuracy: f64,
}

/// One training example: features and binary target (Hindi = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub features: FeatureVector,
    pub target: f64,
}

impl Example {
    pub fn new(surface: &str, tag: LanguageTag, vocab: &NgramVocabulary) -> Self {
        Example { features: vectorize(surface, vocab), target: tag.target() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogRegModel {
    theta0: f64,
    theta: Vec<f64>,
    vocab_id: u64,
    hyperparams: LogRegHyperparams,
}

impl LogRegModel {
    pub fn zeros(vocab: &NgramVocabulary, hyperparams: LogRegHyperparams) -> Self {
        LogRegModel { theta0: 0.0, theta: vec![0.0; vocab.len()], vocab_id: vocab.id(), hyperparams }
    }

    pub fn from_parts(theta0: f64, theta: Vec<f64>, vocab_id: u64, hyperparams: LogRegHyperparams) -> Self {
        LogRegModel { theta0, theta, vocab_id, hyperparams }
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// Weights for feature indices `1..=p`, stored at `0..p`.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_mut(&mut self) -> (&mut f64, &mut [f64]) {
        (&mut self.theta0, &mut self.theta)
    }

    pub fn vocab_id(&self) -> u64 {
        self.vocab_id
    }

    pub fn hyperparams(&self) -> &LogRegHyperparams {
        &self.hyperparams
    }

    pub fn is_finite(&self) -> bool {
        self.theta0.is_finite() && self.theta.iter().all(|t| t.is_finite())
    }

    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.u64(self.vocab_id).f64s(&[self.theta0]).f64s(&self.theta);
        fp.finish()
    }

    /// Fails when `vocab` is not the vocabulary this model was trained on.
    pub fn check_vocabulary(&self, vocab: &NgramVocabulary) -> Result<()> {
        let id = vocab.id();
        if id != self.vocab_id || vocab.len() != self.theta.len() {
            return Err(Error::VocabularyMismatch { model: self.vocab_id, vocabulary: id });
        }
        Ok(())
    }

    pub fn logit(&self, fv: &FeatureVector) -> f64 {
        fv.entries()
            .iter()
            .fold(self.theta0, |acc, &(i, c)| acc + self.theta[i - 1] * f64::from(c))
    }

    /// Regularized mean loss over `batch` and its gradient. The gradient
    /// vector has the bias at position 0 and `theta_i` at position `i`.
    pub fn loss_and_gradient(&self, batch: &[Example]) -> (f64, Vec<f64>) {
        let lambda = self.hyperparams.l2_lambda;
        let scale = 1.0 / batch.len().max(1) as f64;
        let mut grad = vec![0.0; self.theta.len() + 1];
        let mut loss = 0.0;
        for ex in batch {
            let z = self.logit(&ex.features);
            loss += softplus(z) - ex.target * z;
            let residual = (sigmoid(z) - ex.target) * scale;
            grad[0] += residual;
            for &(i, c) in ex.features.entries() {
                grad[i] += residual * f64::from(c);
            }
        }
        let mut penalty = 0.0;
        for (g, t) in grad[1..].iter_mut().zip(&self.theta) {
            *g += lambda * t;
            penalty += t * t;
        }
        (loss * scale + 0.5 * lambda * penalty, grad)
    }

    fn apply(&mut self, grad: &[f64], learning_rate: f64) {
        self.theta0 -= learning_rate * grad[0];
        for (t, g) in self.theta.iter_mut().zip(&grad[1..]) {
            *t -= learning_rate * g;
        }
    }
}

/// `score2`: sigmoid of the model logit, always in the open interval for
/// logits of moderate size and never NaN for finite parameters.
pub fn logistic_score(model: &LogRegModel, fv: &FeatureVector) -> f64 {
    sigmoid(model.logit(fv))
}

fn accuracy(model: &LogRegModel, data: &[Example]) -> f64 {
    let correct = data
        .iter()
        .filter(|ex| (logistic_score(model, &ex.features) >= 0.5) == (ex.target == 1.0))
        .count();
    correct as f64 / data.len() as f64
}

/// Trains on `train` with features from `vocab` (which must come from the
/// same split). The epoch loss is the regularized loss over the whole
/// training set after each epoch.
pub fn train_logreg(
    train: &Corpus,
    vocab: &NgramVocabulary,
    hyperparams: LogRegHyperparams,
) -> Result<(LogRegModel, TrainReport)> {
    hyperparams.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyInput("training corpus"));
    }
    let data: Vec<Example> = train.iter().map(|e| Example::new(e.surface(), e.tag(), vocab)).collect();
    let mut model = LogRegModel::zeros(vocab, hyperparams);
    let mut rng = rng::seeded(hyperparams.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut batch = Vec::with_capacity(hyperparams.batch_size);
    let mut epoch_loss = Vec::with_capacity(hyperparams.epochs);

    for epoch in 1..=hyperparams.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(hyperparams.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| data[i].clone()));
            let (_, grad) = model.loss_and_gradient(&batch);
            model.apply(&grad, hyperparams.learning_rate);
        }
        let (loss, _) = model.loss_and_gradient(&data);
        if !loss.is_finite() || !model.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        epoch_loss.push(loss);
    }
    let train_accuracy = accuracy(&model, &data);
    Ok((model, TrainReport { epoch_loss, train_accuracy }))
}

/// Hindi iff `score2 >= 0.5`; an exact tie goes to Hindi.
pub fn predict_lr(model: &LogRegModel, surface: &str, vocab: &NgramVocabulary) -> Result<LanguageTag> {
    model.check_vocabulary(vocab)?;
    let score = logistic_score(model, &vectorize(surface, vocab));
    Ok(if score >= 0.5 { LanguageTag::Hindi } else { LanguageTag::English })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{LabeledWord, Provenance};
    use alloc::string::String;
    use proptest::prelude::*;
    use rand::Rng;

    fn toy() -> (Corpus, NgramVocabulary) {
        // surfaces must be unique, so vary the length of the runs
        let mut entries = Vec::new();
        for k in 1..=10 {
            entries.push(LabeledWord::new(String::from("a").repeat(k + 1), LanguageTag::Hindi).unwrap());
            entries.push(LabeledWord::new(String::from("b").repeat(k + 1), LanguageTag::English).unwrap());
        }
        let c = Corpus::from_entries(entries, 0, Provenance::default()).unwrap();
        let v = NgramVocabulary::build(&c, 1, 5, 1).unwrap();
        (c, v)
    }

    #[test]
    fn score_closed_forms() {
        let (_, v) = toy();
        let fv = vectorize("ab", &v);
        let zero = LogRegModel::zeros(&v, LogRegHyperparams::default());
        assert_eq!(logistic_score(&zero, &fv), 0.5);

        let empty = FeatureVector::default();
        let m = LogRegModel::from_parts(libm::log(3.0), vec![0.0; v.len()], v.id(), Default::default());
        assert!((logistic_score(&m, &empty) - 0.75).abs() < 1e-15);

        let m = LogRegModel::from_parts(-50.0, vec![0.0; v.len()], v.id(), Default::default());
        let s = logistic_score(&m, &empty);
        assert!(s > 0.0 && s <= 1e-20 && s.is_finite());

        let m = LogRegModel::from_parts(1e4, vec![0.0; v.len()], v.id(), Default::default());
        assert!(logistic_score(&m, &empty).is_finite());
    }

    #[test]
    fn separable_toy_is_learned() {
        let (c, v) = toy();
        let hp = LogRegHyperparams { epochs: 30, batch_size: 4, ..Default::default() };
        let (model, report) = train_logreg(&c, &v, hp).unwrap();
        assert_eq!(report.train_accuracy, 1.0);
        assert_eq!(report.epoch_loss.len(), 30);
        // exhaustive check over the training words
        for e in &c {
            assert_eq!(predict_lr(&model, e.surface(), &v).unwrap(), e.tag());
        }
        assert_eq!(predict_lr(&model, "aa", &v).unwrap(), LanguageTag::Hindi);
        assert_eq!(predict_lr(&model, "bb", &v).unwrap(), LanguageTag::English);
    }

    #[test]
    fn zero_epochs_gives_zero_model() {
        let (c, v) = toy();
        let hp = LogRegHyperparams { epochs: 0, ..Default::default() };
        let (model, report) = train_logreg(&c, &v, hp).unwrap();
        assert!(report.epoch_loss.is_empty());
        assert_eq!(model.theta0(), 0.0);
        assert!(model.theta().iter().all(|&t| t == 0.0));
        assert_eq!(predict_lr(&model, "zzz", &v).unwrap(), LanguageTag::Hindi);
    }

    #[test]
    fn training_is_bit_reproducible() {
        let (c, v) = toy();
        let hp = LogRegHyperparams { epochs: 5, batch_size: 3, seed: 9, ..Default::default() };
        let (a, _) = train_logreg(&c, &v, hp).unwrap();
        let (b, _) = train_logreg(&c, &v, hp).unwrap();
        let bits = |m: &LogRegModel| m.theta().iter().map(|t| t.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert_eq!(a.theta0().to_bits(), b.theta0().to_bits());
    }

    #[test]
    fn divergence_is_reported() {
        let (c, v) = toy();
        let hp = LogRegHyperparams { learning_rate: 1e300, epochs: 3, ..Default::default() };
        assert!(matches!(train_logreg(&c, &v, hp), Err(Error::NonFiniteLoss { .. })));
    }

    #[test]
    fn vocabulary_mismatch_is_rejected() {
        let (c, v) = toy();
        let other = NgramVocabulary::build(&c, 1, 2, 1).unwrap();
        let m = LogRegModel::zeros(&v, Default::default());
        assert!(matches!(predict_lr(&m, "aa", &other), Err(Error::VocabularyMismatch { .. })));
    }

    /// Central differences on the regularized batch loss.
    #[test]
    fn gradient_matches_finite_differences() {
        let (c, v) = toy();
        let mut rng = rng::seeded(5);
        let batch: Vec<Example> = c.iter().map(|e| Example::new(e.surface(), e.tag(), &v)).collect();
        for trial in 0..5 {
            let theta: Vec<f64> = (0..v.len()).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let hp = LogRegHyperparams { l2_lambda: 0.01 * trial as f64, ..Default::default() };
            let model = LogRegModel::from_parts(rng.gen_range(-0.5..0.5), theta, v.id(), hp);
            let (_, grad) = model.loss_and_gradient(&batch);
            let h = 1e-5;
            for k in 0..=v.len() {
                let nudged = |delta: f64| {
                    let mut m = model.clone();
                    let (t0, t) = m.theta_mut();
                    if k == 0 { *t0 += delta } else { t[k - 1] += delta }
                    m.loss_and_gradient(&batch).0
                };
                let numeric = (nudged(h) - nudged(-h)) / (2.0 * h);
                let rel = (grad[k] - numeric).abs() / grad[k].abs().max(numeric.abs()).max(1e-8);
                assert!(rel < 1e-6, "param {k}: analytic {} numeric {numeric} rel {rel}", grad[k]);
            }
        }
    }

    proptest! {
        #[test]
        fn score_is_monotone_in_active_weights(bump in 1e-3f64..10.0, k in 0usize..6, seed in any::<u64>()) {
            let (_, v) = toy();
            let mut rng = rng::seeded(seed);
            let theta: Vec<f64> = (0..v.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let m = LogRegModel::from_parts(0.1, theta, v.id(), Default::default());
            let fv = vectorize("aab", &v);
            let (i, _) = fv.entries()[k % fv.nnz()];
            let mut m2 = m.clone();
            m2.theta_mut().1[i - 1] += bump;
            let (s1, s2) = (logistic_score(&m, &fv), logistic_score(&m2, &fv));
            prop_assert!(s2 > s1);
            prop_assert!(s1 > 0.0 && s1 < 1.0 && s2 > 0.0 && s2 < 1.0);
        }
    }
}
