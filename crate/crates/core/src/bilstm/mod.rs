//! Character-level bidirectional LSTM word classifier.
//!
//! A word is embedded character by character, read left-to-right by the
//! forward LSTM and right-to-left by an independently parameterized
//! backward LSTM. The two final hidden states are concatenated
//! (`[h_fwd ; h_bwd]`, length `2h`) and mapped to the logits
//! `O = (O_hi, O_en)`. `score1` is the Hindi component of `softmax(O)`.

mod cell;
mod gradcheck;
mod train;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::corpus::{Corpus, LanguageTag};
use crate::error::{Error, Result};
use crate::fingerprint::Fingerprint;
use crate::math::{log_softmax2, softmax2};
use crate::rng::PipelineRng;

pub use cell::{DirectionTrace, GATE_CANDIDATE, GATE_FORGET, GATE_INPUT, GATE_OUTPUT};
pub use gradcheck::{analytic_gradients, gradient_check, relative_error};
pub use train::{train_bilstm, BiLstmTrainer, StepInfo};

/// Character index with a reserved unknown slot at 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharVocabulary {
    index: BTreeMap<char, usize>,
}

impl CharVocabulary {
    pub const UNK: usize = 0;

    /// Every character of the training words, indexed from 1 in code
    /// point order.
    pub fn build(train: &Corpus) -> Self {
        Self::from_chars(train.iter().flat_map(|e| e.surface().chars()))
    }

    pub fn from_chars(chars: impl IntoIterator<Item = char>) -> Self {
        let mut seen: Vec<char> = chars.into_iter().collect();
        seen.sort_unstable();
        seen.dedup();
        CharVocabulary { index: seen.into_iter().zip(1..).collect() }
    }

    /// Size including the unknown slot.
    pub fn len(&self) -> usize {
        self.index.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lookup(&self, c: char) -> usize {
        self.index.get(&c).copied().unwrap_or(Self::UNK)
    }

    pub fn encode(&self, surface: &str) -> Vec<usize> {
        surface.chars().map(|c| self.lookup(c)).collect()
    }

    /// Known characters with their indices, in index order.
    pub fn iter(&self) -> impl Iterator<Item = (char, usize)> + '_ {
        self.index.iter().map(|(&c, &i)| (c, i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct BiLstmHyperparams {
    pub embedding_dim: usize,
    pub hidden_dim: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Global gradient-norm ceiling applied before every update.
    pub clip_norm: f64,
    pub seed: u64,
}

impl Default for BiLstmHyperparams {
    fn default() -> Self {
        BiLstmHyperparams {
            embedding_dim: 16,
            hidden_dim: 32,
            learning_rate: 1.0,
            epochs: 20,
            batch_size: 64,
            clip_norm: 5.0,
            seed: 42,
        }
    }
}

impl BiLstmHyperparams {
    pub fn validate(&self) -> Result<()> {
        if self.embedding_dim == 0 || self.hidden_dim == 0 {
            return Err(Error::InvalidHyperparameter("bilstm dimensions must be positive"));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidHyperparameter("bilstm learning_rate must be positive"));
        }
        if !(self.clip_norm.is_finite() && self.clip_norm > 0.0) {
            return Err(Error::InvalidHyperparameter("bilstm clip_norm must be positive"));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidHyperparameter("bilstm batch_size must be at least 1"));
        }
        Ok(())
    }
}

/// Weights and biases of one LSTM direction.
#[derive(Clone, Debug, PartialEq)]
pub struct LstmDirectionParams {
    input: usize,
    hidden: usize,
    /// `4h x (d + h)` row-major, gate blocks input/forget/output/candidate.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl LstmDirectionParams {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        LstmDirectionParams {
            input,
            hidden,
            weights: vec![0.0; 4 * hidden * (input + hidden)],
            bias: vec![0.0; 4 * hidden],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn parts_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.weights, &mut self.bias)
    }

    /// Bias slice of one gate.
    pub fn gate_bias_mut(&mut self, gate: usize) -> &mut [f64] {
        let h = self.hidden;
        &mut self.bias[gate * h..(gate + 1) * h]
    }
}

/// All trainable tensors. Gradients use the same type.
#[derive(Clone, Debug, PartialEq)]
pub struct BiLstmParams {
    /// `|chars| x d` row-major, row 0 is the unknown character.
    pub embeddings: Vec<f64>,
    pub forward: LstmDirectionParams,
    pub backward: LstmDirectionParams,
    /// `2 x 2h` row-major; row 0 produces the Hindi logit.
    pub output_weights: Vec<f64>,
    pub output_bias: Vec<f64>,
}

/// Tensor names in serialization and iteration order.
pub const TENSOR_NAMES: [&str; 7] = [
    "embeddings",
    "forward.weights",
    "forward.bias",
    "backward.weights",
    "backward.bias",
    "output.weights",
    "output.bias",
];

impl BiLstmParams {
    pub fn zeros(chars: usize, d: usize, h: usize) -> Self {
        BiLstmParams {
            embeddings: vec![0.0; chars * d],
            forward: LstmDirectionParams::zeros(d, h),
            backward: LstmDirectionParams::zeros(d, h),
            output_weights: vec![0.0; 2 * 2 * h],
            output_bias: vec![0.0; 2],
        }
    }

    pub fn zeros_like(other: &Self) -> Self {
        Self::zeros(other.char_count(), other.embedding_dim(), other.hidden_dim())
    }

    pub fn embedding_dim(&self) -> usize {
        self.forward.input
    }

    pub fn hidden_dim(&self) -> usize {
        self.forward.hidden
    }

    pub fn char_count(&self) -> usize {
        self.embeddings.len() / self.embedding_dim()
    }

    /// Tensors in [`TENSOR_NAMES`] order.
    pub fn tensors(&self) -> [&[f64]; 7] {
        [
            &self.embeddings,
            &self.forward.weights,
            &self.forward.bias,
            &self.backward.weights,
            &self.backward.bias,
            &self.output_weights,
            &self.output_bias,
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut [f64]; 7] {
        [
            &mut self.embeddings,
            &mut self.forward.weights,
            &mut self.forward.bias,
            &mut self.backward.weights,
            &mut self.backward.bias,
            &mut self.output_weights,
            &mut self.output_bias,
        ]
    }

    pub fn len(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat view by global position across all tensors.
    pub fn get(&self, mut k: usize) -> f64 {
        for t in self.tensors() {
            if k < t.len() {
                return t[k];
            }
            k -= t.len();
        }
        panic!("parameter index out of range")
    }

    pub fn get_mut(&mut self, mut k: usize) -> &mut f64 {
        for t in self.tensors_mut() {
            if k < t.len() {
                return &mut t[k];
            }
            k -= t.len();
        }
        panic!("parameter index out of range")
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.tensors().iter().flat_map(|t| t.iter()).map(|v| v * v).sum())
    }

    pub fn fill(&mut self, value: f64) {
        for t in self.tensors_mut() {
            t.iter_mut().for_each(|v| *v = value);
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for t in self.tensors_mut() {
            t.iter_mut().for_each(|v| *v *= factor);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|v| v.is_finite()))
    }

    fn embedding(&self, idx: usize) -> &[f64] {
        let d = self.embedding_dim();
        &self.embeddings[idx * d..(idx + 1) * d]
    }
}

/// Gradient of the loss with respect to the logits for a gold class.
fn logit_gradient(logits: [f64; 2], gold: LanguageTag) -> [f64; 2] {
    let mut p = softmax2(logits);
    p[gold.index()] -= 1.0;
    p
}

/// Forward pass of both directions over an encoded word.
#[derive(Clone, Debug, PartialEq)]
pub struct WordTrace {
    pub forward: DirectionTrace,
    /// Steps run over the reversed word; step 0 is the last character.
    pub backward: DirectionTrace,
    pub encoding: Vec<f64>,
    pub logits: [f64; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiLstmModel {
    chars: CharVocabulary,
    params: BiLstmParams,
    hyperparams: BiLstmHyperparams,
}

impl BiLstmModel {
    /// Uniform init in `[-1/sqrt(h), 1/sqrt(h)]`, forget-gate biases at
    /// 1.0, other biases zero.
    pub fn init(chars: CharVocabulary, hyperparams: BiLstmHyperparams, rng: &mut PipelineRng) -> Self {
        let (d, h) = (hyperparams.embedding_dim, hyperparams.hidden_dim);
        let mut params = BiLstmParams::zeros(chars.len(), d, h);
        let bound = 1.0 / libm::sqrt(h as f64);
        {
            let [emb, fw, _, bw, _, ow, _] = params.tensors_mut();
            for t in [emb, fw, bw, ow] {
                t.iter_mut().for_each(|v| *v = rng.gen_range(-bound..=bound));
            }
        }
        params.forward.gate_bias_mut(GATE_FORGET).iter_mut().for_each(|b| *b = 1.0);
        params.backward.gate_bias_mut(GATE_FORGET).iter_mut().for_each(|b| *b = 1.0);
        BiLstmModel { chars, params, hyperparams }
    }

    pub fn from_parts(chars: CharVocabulary, params: BiLstmParams, hyperparams: BiLstmHyperparams) -> Result<Self> {
        let (d, h) = (hyperparams.embedding_dim, hyperparams.hidden_dim);
        let expected = BiLstmParams::zeros(chars.len(), d, h);
        for (want, got) in expected.tensors().iter().zip(params.tensors()) {
            if want.len() != got.len() {
                return Err(Error::ShapeMismatch { expected: want.len(), found: got.len() });
            }
        }
        if params.embedding_dim() != d || params.hidden_dim() != h {
            return Err(Error::ShapeMismatch { expected: d * h, found: params.embedding_dim() * params.hidden_dim() });
        }
        Ok(BiLstmModel { chars, params, hyperparams })
    }

    pub fn chars(&self) -> &CharVocabulary {
        &self.chars
    }

    pub fn params(&self) -> &BiLstmParams {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut BiLstmParams {
        &mut self.params
    }

    pub fn hyperparams(&self) -> &BiLstmHyperparams {
        &self.hyperparams
    }

    /// Same model with the forward and backward parameter sets exchanged.
    pub fn with_directions_swapped(&self) -> Self {
        let mut m = self.clone();
        core::mem::swap(&mut m.params.forward, &mut m.params.backward);
        m
    }

    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        for (c, i) in self.chars.iter() {
            fp.u64(c as u64).u64(i as u64);
        }
        for t in self.params.tensors() {
            fp.u64(t.len() as u64).f64s(t);
        }
        fp.finish()
    }

    pub fn trace_indices(&self, word: &[usize]) -> WordTrace {
        let p = &self.params;
        let fwd = cell::forward(&p.forward, word.iter().map(|&c| p.embedding(c)));
        let bwd = cell::forward(&p.backward, word.iter().rev().map(|&c| p.embedding(c)));
        let mut encoding = Vec::with_capacity(2 * p.hidden_dim());
        encoding.extend_from_slice(fwd.final_hidden());
        encoding.extend_from_slice(bwd.final_hidden());
        let logits = self.logits_of(&encoding);
        WordTrace { forward: fwd, backward: bwd, encoding, logits }
    }

    /// Full forward trace of a surface, including every gate activation.
    pub fn trace(&self, surface: &str) -> WordTrace {
        self.trace_indices(&self.chars.encode(surface))
    }

    fn logits_of(&self, encoding: &[f64]) -> [f64; 2] {
        let w = &self.params.output_weights;
        let n = encoding.len();
        let mut out = [0.0; 2];
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.params.output_bias[k] + w[k * n..(k + 1) * n].iter().zip(encoding).map(|(a, b)| a * b).sum::<f64>();
        }
        out
    }

    pub fn logits(&self, surface: &str) -> [f64; 2] {
        self.trace(surface).logits
    }

    /// Cross-entropy of one encoded word.
    pub fn loss_indices(&self, word: &[usize], gold: LanguageTag) -> f64 {
        -log_softmax2(self.trace_indices(word).logits, gold.index())
    }

    /// Adds the gradient of one word's cross-entropy, scaled by `weight`,
    /// into `grads`. Returns the unscaled loss.
    pub fn accumulate_gradient(&self, word: &[usize], gold: LanguageTag, weight: f64, grads: &mut BiLstmParams) -> f64 {
        let p = &self.params;
        let h = p.hidden_dim();
        let d = p.embedding_dim();
        let trace = self.trace_indices(word);
        let loss = -log_softmax2(trace.logits, gold.index());
        let d_logits = logit_gradient(trace.logits, gold).map(|g| g * weight);

        let mut d_enc = vec![0.0; 2 * h];
        for (k, &dl) in d_logits.iter().enumerate() {
            grads.output_bias[k] += dl;
            let row = &p.output_weights[k * 2 * h..(k + 1) * 2 * h];
            let grow = &mut grads.output_weights[k * 2 * h..(k + 1) * 2 * h];
            for ((g, e), (de, w)) in grow.iter_mut().zip(&trace.encoding).zip(d_enc.iter_mut().zip(row)) {
                *g += dl * e;
                *de += dl * w;
            }
        }

        let emb_grads = &mut grads.embeddings;
        let mut add_embedding = |c: usize, dx: &[f64]| {
            for (g, v) in emb_grads[c * d..(c + 1) * d].iter_mut().zip(dx) {
                *g += v;
            }
        };
        let steps = word.len();
        cell::backward(
            &p.forward,
            &trace.forward,
            word.iter().map(|&c| p.embedding(c)),
            &d_enc[..h],
            &mut grads.forward,
            |t, dx| add_embedding(word[t], dx),
        );
        cell::backward(
            &p.backward,
            &trace.backward,
            word.iter().rev().map(|&c| p.embedding(c)),
            &d_enc[h..],
            &mut grads.backward,
            |t, dx| add_embedding(word[steps - 1 - t], dx),
        );
        loss
    }
}

/// `[h_fwd_final ; h_bwd_final]`, length `2h`. Unknown characters use the
/// reserved embedding.
pub fn encode(model: &BiLstmModel, surface: &str) -> Vec<f64> {
    model.trace(surface).encoding
}

/// `score1` and the class distribution `(p_hi, p_en)`.
pub fn softmax_score(model: &BiLstmModel, surface: &str) -> (f64, [f64; 2]) {
    let probs = softmax2(model.logits(surface));
    (probs[LanguageTag::Hindi.index()], probs)
}

pub fn predict_bilstm(model: &BiLstmModel, surface: &str) -> LanguageTag {
    if softmax_score(model, surface).0 >= 0.5 {
        LanguageTag::Hindi
    } else {
        LanguageTag::English
    }
}
