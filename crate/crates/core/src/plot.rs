//! Data behind the score figure: scatter points and per-tag box plots.

use alloc::vec::Vec;

use crate::corpus::LanguageTag;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterRecord {
    /// score1
    pub x: f64,
    /// score2
    pub y: f64,
    pub tag: LanguageTag,
}

/// One point per lexicon entry, in lexicon order.
pub fn scatter_data(lex: &Lexicon) -> Result<Vec<ScatterRecord>> {
    lex.entries()
        .iter()
        .map(|e| match e.gold_tag {
            Some(tag) => Ok(ScatterRecord { x: e.score1, y: e.score2, tag }),
            None => Err(Error::MissingTag(e.surface.clone())),
        })
        .collect()
}

/// Five-number summary with Tukey's fences. `min` and `max` are the whisker
/// ends: the most extreme observations inside `[q1 - 1.5 IQR, q3 + 1.5 IQR]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    /// Observations beyond the fences, ascending.
    pub outliers: Vec<f64>,
}

fn median_sorted(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Tukey hinges: the quartiles are the medians of the lower and upper
/// halves of the sorted data, each half including the overall median when
/// the count is odd.
pub fn boxplot_stats(scores: &[f64]) -> Result<BoxStats> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("score list"));
    }
    let mut xs = scores.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let median = median_sorted(&xs);
    let q1 = median_sorted(&xs[..n.div_ceil(2)]);
    let q3 = median_sorted(&xs[n / 2..]);
    let iqr = q3 - q1;
    let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = || xs.iter().copied().filter(|&v| v >= lo && v <= hi);
    let min = inside().next().unwrap_or(q1).min(q1);
    let max = inside().next_back().unwrap_or(q3).max(q3);
    let outliers = xs.iter().copied().filter(|&v| v < lo || v > hi).collect();
    Ok(BoxStats { min, q1, median, q3, max, outliers })
}

/// Box statistics of one score for each tag, Hindi first.
pub fn per_tag_box_stats(records: &[ScatterRecord], pick: impl Fn(&ScatterRecord) -> f64) -> Result<[(LanguageTag, BoxStats); 2]> {
    let stats = |tag| -> Result<(LanguageTag, BoxStats)> {
        let xs: Vec<f64> = records.iter().filter(|r| r.tag == tag).map(&pick).collect();
        Ok((tag, boxplot_stats(&xs)?))
    };
    Ok([stats(LanguageTag::Hindi)?, stats(LanguageTag::English)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LexiconEntry;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn hinge_examples() {
        let b = boxplot_stats(&[0.5, 0.1, 0.4, 0.2, 0.3]).unwrap();
        assert_eq!((b.min, b.q1, b.median, b.q3, b.max), (0.1, 0.2, 0.3, 0.4, 0.5));
        assert!(b.outliers.is_empty());

        let b = boxplot_stats(&[0.7]).unwrap();
        assert_eq!((b.min, b.q1, b.median, b.q3, b.max), (0.7, 0.7, 0.7, 0.7, 0.7));

        let b = boxplot_stats(&[0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(b.q3 - b.q1, 0.0);
        assert_eq!(b.outliers, vec![1.0]);
        assert_eq!(b.max, 0.0);

        assert!(boxplot_stats(&[]).is_err());
    }

    #[test]
    fn scatter_projection() {
        let e = |s: &str, tag| LexiconEntry { surface: s.into(), score1: 0.99, score2: 0.98, gold_tag: tag };
        let lex = Lexicon::from_entries(vec![e("w", Some(LanguageTag::Hindi))], Default::default()).unwrap();
        assert_eq!(scatter_data(&lex).unwrap(), vec![ScatterRecord { x: 0.99, y: 0.98, tag: LanguageTag::Hindi }]);
        let lex = Lexicon::from_entries(vec![e("w", Some(LanguageTag::Hindi)), e("v", None)], Default::default()).unwrap();
        assert!(matches!(scatter_data(&lex), Err(Error::MissingTag(_))));
    }

    /// Sort, then apply the hinge rule position by position.
    fn oracle(xs: &[f64]) -> (f64, f64, f64, Vec<f64>) {
        let mut s = xs.to_vec();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let med = |v: &[f64]| {
            let m = v.len();
            if m % 2 == 1 { v[(m - 1) / 2] } else { (v[m / 2 - 1] + v[m / 2]) / 2.0 }
        };
        let n = s.len();
        let half = n - n / 2;
        let q1 = med(&s[..half]);
        let q3 = med(&s[n - half..]);
        let iqr = q3 - q1;
        let out = s.iter().copied().filter(|&v| v < q1 - 1.5 * iqr || v > q3 + 1.5 * iqr).collect();
        (q1, med(&s), q3, out)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn matches_sort_oracle(xs in prop::collection::vec(prop_oneof![0.0f64..1.0, Just(0.5), Just(0.0)], 1..25)) {
            let b = boxplot_stats(&xs).unwrap();
            let (q1, median, q3, outliers) = oracle(&xs);
            prop_assert_eq!((b.q1, b.median, b.q3), (q1, median, q3));
            prop_assert_eq!(&b.outliers, &outliers);
            prop_assert!(b.min <= b.q1 && b.q1 <= b.median && b.median <= b.q3 && b.q3 <= b.max);
            let iqr = b.q3 - b.q1;
            prop_assert!(b.outliers.iter().all(|&o| o < b.q1 - 1.5 * iqr || o > b.q3 + 1.5 * iqr));
        }
    }
}
