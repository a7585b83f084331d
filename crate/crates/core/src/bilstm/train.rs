use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::corpus::{Corpus, LanguageTag};
use crate::error::{Error, Result};
use crate::logreg::TrainReport;
use crate::rng::{self, PipelineRng};

use super::{predict_bilstm, BiLstmHyperparams, BiLstmModel, BiLstmParams, CharVocabulary};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    /// Mean cross-entropy of the batch before the update.
    pub loss: f64,
    /// Global gradient norm before clipping.
    pub grad_norm: f64,
    /// Global norm of the parameter change that was applied.
    pub update_norm: f64,
}

/// Mini-batch SGD with global-norm clipping over encoded words.
pub struct BiLstmTrainer {
    model: BiLstmModel,
    grads: BiLstmParams,
}

impl BiLstmTrainer {
    pub fn new(model: BiLstmModel) -> Self {
        let grads = BiLstmParams::zeros_like(model.params());
        BiLstmTrainer { model, grads }
    }

    pub fn model(&self) -> &BiLstmModel {
        &self.model
    }

    pub fn into_model(self) -> BiLstmModel {
        self.model
    }

    /// One update on the mean loss of `batch`. The applied change has norm
    /// at most `learning_rate * clip_norm`.
    pub fn step(&mut self, batch: &[(Vec<usize>, LanguageTag)]) -> StepInfo {
        let hp = *self.model.hyperparams();
        self.grads.fill(0.0);
        let weight = 1.0 / batch.len() as f64;
        let mut loss = 0.0;
        for (word, gold) in batch {
            loss += self.model.accumulate_gradient(word, *gold, weight, &mut self.grads);
        }
        let grad_norm = self.grads.norm();
        if grad_norm > hp.clip_norm {
            self.grads.scale(hp.clip_norm / grad_norm);
        }
        let params = self.model.params_mut();
        for (p, g) in params.tensors_mut().into_iter().zip(self.grads.tensors()) {
            for (v, dv) in p.iter_mut().zip(g) {
                *v -= hp.learning_rate * dv;
            }
        }
        let update_norm = hp.learning_rate * grad_norm.min(hp.clip_norm);
        StepInfo { loss: loss * weight, grad_norm, update_norm }
    }
}

/// Batches of same-length words: the shuffled order is grouped by length,
/// each group is cut into batches, and the batch order is shuffled.
pub(crate) fn length_buckets(lengths: &[usize], batch_size: usize, rng: &mut PipelineRng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.shuffle(rng);
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in order {
        groups.entry(lengths[i]).or_default().push(i);
    }
    let mut batches: Vec<Vec<usize>> =
        groups.values().flat_map(|g| g.chunks(batch_size).map(<[usize]>::to_vec)).collect();
    batches.shuffle(rng);
    batches
}

/// Trains a fresh model. The character vocabulary comes from `train` only;
/// the epoch loss is the mean per-word loss seen during the epoch.
pub fn train_bilstm(train: &Corpus, hyperparams: BiLstmHyperparams) -> Result<(BiLstmModel, TrainReport)> {
    hyperparams.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyInput("training corpus"));
    }
    let chars = CharVocabulary::build(train);
    let mut rng = rng::seeded(hyperparams.seed);
    let model = BiLstmModel::init(chars, hyperparams, &mut rng);
    let data: Vec<(Vec<usize>, LanguageTag)> =
        train.iter().map(|e| (model.chars().encode(e.surface()), e.tag())).collect();
    let lengths: Vec<usize> = data.iter().map(|(w, _)| w.len()).collect();

    let mut trainer = BiLstmTrainer::new(model);
    let mut epoch_loss = Vec::with_capacity(hyperparams.epochs);
    let mut batch = Vec::with_capacity(hyperparams.batch_size);
    for epoch in 1..=hyperparams.epochs {
        let mut total = 0.0;
        for ids in length_buckets(&lengths, hyperparams.batch_size, &mut rng) {
            batch.clear();
            batch.extend(ids.iter().map(|&i| data[i].clone()));
            let info = trainer.step(&batch);
            total += info.loss * batch.len() as f64;
        }
        let mean = total / data.len() as f64;
        if !mean.is_finite() || !trainer.model().params().is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        epoch_loss.push(mean);
    }
    let model = trainer.into_model();
    let correct = train.iter().filter(|e| predict_bilstm(&model, e.surface()) == e.tag()).count();
    let train_accuracy = correct as f64 / train.len() as f64;
    Ok((model, TrainReport { epoch_loss, train_accuracy }))
}
