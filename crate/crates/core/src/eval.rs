//! Per-class precision, recall and F-score with support-weighted averages,
//! and side-by-side model comparison.
//!
//! A ratio with a zero denominator is defined as 0.

use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Corpus, LanguageTag};
use crate::error::{Error, Result};

/// One-vs-rest counts for a single positive class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn for_class(gold: &[LanguageTag], predicted: &[LanguageTag], positive: LanguageTag) -> Self {
        let mut m = ConfusionMatrix::default();
        for (&g, &p) in gold.iter().zip(predicted) {
            match (g == positive, p == positive) {
                (true, true) => m.tp += 1,
                (false, true) => m.fp += 1,
                (true, false) => m.fn_ += 1,
                (false, false) => m.tn += 1,
            }
        }
        m
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn support(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f_score(&self) -> f64 {
        f_score(self.precision(), self.recall())
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassMetrics {
    pub tag: LanguageTag,
    pub support: usize,
    pub metrics: Metrics,
    pub confusion: ConfusionMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalReport {
    /// Indexed by [`LanguageTag::index`].
    pub classes: [ClassMetrics; 2],
    pub weighted: Metrics,
    pub total: usize,
}

impl EvalReport {
    pub fn class(&self, tag: LanguageTag) -> &ClassMetrics {
        &self.classes[tag.index()]
    }
}

pub fn evaluate_predictions(gold: &[LanguageTag], predicted: &[LanguageTag]) -> Result<EvalReport> {
    if gold.is_empty() {
        return Err(Error::EmptyInput("test set"));
    }
    if gold.len() != predicted.len() {
        return Err(Error::ShapeMismatch { expected: gold.len(), found: predicted.len() });
    }
    let class = |tag| {
        let confusion = ConfusionMatrix::for_class(gold, predicted, tag);
        let metrics = Metrics {
            precision: confusion.precision(),
            recall: confusion.recall(),
            f_score: confusion.f_score(),
        };
        ClassMetrics { tag, support: confusion.support(), metrics, confusion }
    };
    let classes = [class(LanguageTag::Hindi), class(LanguageTag::English)];
    let weighted_by = |pick: fn(&Metrics) -> f64| {
        weighted_average(classes.iter().map(|c| (c.support, pick(&c.metrics))))
    };
    let weighted = Metrics {
        precision: weighted_by(|m| m.precision),
        recall: weighted_by(|m| m.recall),
        f_score: weighted_by(|m| m.f_score),
    };
    Ok(EvalReport { classes, weighted, total: gold.len() })
}

/// `sum(support * value) / sum(support)`, 0 for zero total support.
pub fn weighted_average(items: impl IntoIterator<Item = (usize, f64)>) -> f64 {
    let (mut num, mut den) = (0.0, 0usize);
    for (support, value) in items {
        num += support as f64 * value;
        den += support;
    }
    if den == 0 {
        0.0
    } else {
        num / den as f64
    }
}

/// Scores every test word with `scorer` and compares against the gold tags.
pub fn evaluate(mut scorer: impl FnMut(&str) -> LanguageTag, test: &Corpus) -> Result<EvalReport> {
    let gold: Vec<LanguageTag> = test.iter().map(|e| e.tag()).collect();
    let predicted: Vec<LanguageTag> = test.iter().map(|e| scorer(e.surface())).collect();
    evaluate_predictions(&gold, &predicted)
}

/// Row labels in display order: English, Hindi, then the weighted average.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowLabel {
    Class(LanguageTag),
    WeightedAvg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub label: RowLabel,
    pub support: usize,
    /// One entry per model, in input order.
    pub values: Vec<Metrics>,
    /// `values[i] - values[0]` for every model after the first.
    pub deltas: Vec<Metrics>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonTable {
    pub models: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn row(&self, label: RowLabel) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

fn delta(a: &Metrics, base: &Metrics) -> Metrics {
    Metrics {
        precision: a.precision - base.precision,
        recall: a.recall - base.recall,
        f_score: a.f_score - base.f_score,
    }
}

/// Lines up reports computed on the same test set. Deltas are taken against
/// the first report.
pub fn compare(reports: &[(String, EvalReport)]) -> Result<ComparisonTable> {
    if reports.len() < 2 {
        return Err(Error::TooFewReports(reports.len()));
    }
    let first = &reports[0].1;
    for (_, r) in &reports[1..] {
        if r.total != first.total || r.classes.iter().zip(&first.classes).any(|(a, b)| a.support != b.support) {
            return Err(Error::MismatchedSupports);
        }
    }
    let make_row = |label: RowLabel, support: usize, pick: &dyn Fn(&EvalReport) -> Metrics| {
        let values: Vec<Metrics> = reports.iter().map(|(_, r)| pick(r)).collect();
        let deltas = values[1..].iter().map(|v| delta(v, &values[0])).collect();
        ComparisonRow { label, support, values, deltas }
    };
    let mut rows = Vec::with_capacity(3);
    for tag in [LanguageTag::English, LanguageTag::Hindi] {
        rows.push(make_row(RowLabel::Class(tag), first.class(tag).support, &|r| r.class(tag).metrics));
    }
    rows.push(make_row(RowLabel::WeightedAvg, first.total, &|r| r.weighted));
    Ok(ComparisonTable { models: reports.iter().map(|(n, _)| n.clone()).collect(), rows })
}
