//! Finite-difference verification of the BPTT gradients.

use crate::corpus::{LabeledWord, LanguageTag};
use crate::error::{Error, Result};

use super::{BiLstmModel, BiLstmParams};

/// Denominator floor for the relative error. Central differences at
/// `h = 1e-5` carry roundoff around `1e-11` in absolute terms, which would
/// dominate the relative error of gradients smaller than about `1e-7`.
pub const GRADIENT_FLOOR: f64 = 1e-6;

/// `|a - n| / max(|a|, |n|, GRADIENT_FLOOR)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    let diff = (analytic - numeric).abs();
    if diff == 0.0 {
        return 0.0;
    }
    diff / analytic.abs().max(numeric.abs()).max(GRADIENT_FLOOR)
}

/// Gradient of one word's cross-entropy with respect to every parameter.
pub fn analytic_gradients(model: &BiLstmModel, word: &[usize], gold: LanguageTag) -> BiLstmParams {
    let mut grads = BiLstmParams::zeros_like(model.params());
    model.accumulate_gradient(word, gold, 1.0, &mut grads);
    grads
}

/// Largest relative error between the analytic gradient and central
/// differences with step `h_step`, over every parameter.
pub fn gradient_check(model: &BiLstmModel, sample: &LabeledWord, h_step: f64) -> Result<f64> {
    if !(h_step.is_finite() && h_step > 0.0) {
        return Err(Error::InvalidStep(h_step));
    }
    let word = model.chars().encode(sample.surface());
    let gold = sample.tag();
    let grads = analytic_gradients(model, &word, gold);
    let mut probe = model.clone();
    let mut worst: f64 = 0.0;
    for k in 0..grads.len() {
        let original = probe.params().get(k);
        *probe.params_mut().get_mut(k) = original + h_step;
        let up = probe.loss_indices(&word, gold);
        *probe.params_mut().get_mut(k) = original - h_step;
        let down = probe.loss_indices(&word, gold);
        *probe.params_mut().get_mut(k) = original;
        let numeric = (up - down) / (2.0 * h_step);
        worst = worst.max(relative_error(grads.get(k), numeric));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilstm::tests::tiny;

    #[test]
    fn tiny_model_passes() {
        for seed in 0..3 {
            let m = tiny(seed, 3, 4);
            let w = LabeledWord::new("ab", LanguageTag::English).unwrap();
            let err = gradient_check(&m, &w, 1e-5).unwrap();
            assert!(err < 1e-4, "seed {seed}: {err}");
        }
    }

    #[test]
    fn rejects_degenerate_steps() {
        let m = tiny(0, 2, 2);
        let w = LabeledWord::new("ab", LanguageTag::Hindi).unwrap();
        assert_eq!(gradient_check(&m, &w, 0.0), Err(Error::InvalidStep(0.0)));
        assert!(gradient_check(&m, &w, -1e-5).is_err());
        assert!(gradient_check(&m, &w, f64::NAN).is_err());
    }

    #[test]
    fn unperturbed_loss_is_stable() {
        let m = tiny(7, 3, 3);
        let word = m.chars().encode("abc");
        let a = m.loss_indices(&word, LanguageTag::Hindi);
        let b = m.loss_indices(&word, LanguageTag::Hindi);
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(relative_error(0.3, 0.3), 0.0);
        assert_eq!(relative_error(0.0, 0.0), 0.0);
    }
}
