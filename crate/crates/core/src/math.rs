//! Numerically stable scalar kernels shared by both classifiers.

/// Logistic function, branching on sign so neither tail overflows.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
#[inline]
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

/// Two-way softmax with max subtraction.
pub fn softmax2(logits: [f64; 2]) -> [f64; 2] {
    let m = logits[0].max(logits[1]);
    let e0 = libm::exp(logits[0] - m);
    let e1 = libm::exp(logits[1] - m);
    let s = e0 + e1;
    [e0 / s, e1 / s]
}

/// `log(softmax(logits)[k])` computed through log-sum-exp.
pub fn log_softmax2(logits: [f64; 2], k: usize) -> f64 {
    let m = logits[0].max(logits[1]);
    let lse = m + libm::log(libm::exp(logits[0] - m) + libm::exp(logits[1] - m));
    logits[k] - lse
}

#[inline]
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

pub fn l2_norm(values: &[f64]) -> f64 {
    libm::sqrt(values.iter().map(|v| v * v).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_tails_stay_in_open_interval() {
        assert_eq!(sigmoid(0.0), 0.5);
        let lo = sigmoid(-50.0);
        assert!(lo > 0.0 && lo <= 1e-20);
        // e^-50 / (1 + e^-50), long-hand
        assert!((lo - 1.928749847963918e-22).abs() < 1e-35);
        assert!(sigmoid(1e4) <= 1.0 && sigmoid(-1e4) >= 0.0);
        assert!(sigmoid(-1e4).is_finite() && sigmoid(1e4).is_finite());
    }

    #[test]
    fn softmax_closed_forms() {
        assert_eq!(softmax2([3.0, 3.0]), [0.5, 0.5]);
        let p = softmax2([libm::log(9.0), 0.0]);
        assert!((p[0] - 0.9).abs() < 1e-15 && (p[1] - 0.1).abs() < 1e-15);
        let p = softmax2([1000.0, 0.0]);
        assert_eq!(p[0], 1.0);
        assert!(p[1] >= 0.0 && p[1] < 1e-300);
        assert!(log_softmax2([1000.0, 0.0], 1).is_finite());
    }

    #[test]
    fn softplus_matches_naive_in_safe_range() {
        for z in [-20.0, -1.0, 0.0, 0.5, 3.0, 20.0] {
            let naive = libm::log(1.0 + libm::exp(z));
            assert!((softplus(z) - naive).abs() < 1e-12);
        }
        assert_eq!(softplus(1e4), 1e4);
    }
}
