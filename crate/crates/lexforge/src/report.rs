//! Human-readable and TSV reports: corpus statistics, training loss logs,
//! and the model comparison table.

use std::fmt::Write as _;

use lexforge_core::eval::{ComparisonRow, Metrics, RowLabel};
use lexforge_core::{ComparisonTable, CorpusStats, LanguageTag, TrainReport};

/// Reference corpus composition, for side-by-side display.
pub const REFERENCE_CORPUS: [(LanguageTag, usize, f64); 2] =
    [(LanguageTag::Hindi, 25640, 70.38), (LanguageTag::English, 10789, 29.62)];

/// Reference held-out results in percent: `(label, support, [P, R, F] for
/// LSTM then LR)`.
pub const REFERENCE_EVAL: [(&str, usize, [[f64; 3]; 2]); 3] = [
    ("English", 2697, [[92.61, 88.25, 90.37], [95.74, 91.77, 93.71]]),
    ("Hindi", 6411, [[95.15, 97.04, 96.08], [96.60, 98.28, 97.43]]),
    ("Weighted Avg", 9108, [[94.40, 94.43, 94.39], [96.34, 96.35, 96.33]]),
];

pub fn stats_text(stats: &CorpusStats) -> String {
    let mut out = String::new();
    writeln!(out, "{:<10}{:>9}{:>9}{:>17}{:>21}", "", "#counts", "%age", "max word length", "average word length").unwrap();
    for tag in LanguageTag::ALL {
        if let Some(s) = stats.get(tag) {
            writeln!(
                out,
                "{:<10}{:>9}{:>9.2}{:>17}{:>21.2}",
                tag.name(),
                s.count,
                s.percentage,
                s.max_word_length,
                s.avg_word_length
            )
            .unwrap();
        }
    }
    writeln!(out, "{:<10}{:>9}", "Total", stats.total).unwrap();
    out.push_str("\nreference corpus:");
    for (tag, count, pct) in REFERENCE_CORPUS {
        write!(out, " {} {count} ({pct:.2}%)", tag.name()).unwrap();
    }
    out.push('\n');
    out
}

pub fn stats_tsv(stats: &CorpusStats) -> String {
    let mut out = String::from("tag\tcount\tpercentage\tmax_word_length\tavg_word_length\n");
    for tag in LanguageTag::ALL {
        if let Some(s) = stats.get(tag) {
            writeln!(out, "{}\t{}\t{}\t{}\t{}", tag.code(), s.count, s.percentage, s.max_word_length, s.avg_word_length)
                .unwrap();
        }
    }
    out
}

pub fn loss_tsv(report: &TrainReport) -> String {
    let mut out = String::from("epoch\tloss\n");
    for (i, l) in report.epoch_loss.iter().enumerate() {
        writeln!(out, "{}\t{l}", i + 1).unwrap();
    }
    out
}

fn row_name(label: RowLabel) -> &'static str {
    match label {
        RowLabel::Class(tag) => tag.name(),
        RowLabel::WeightedAvg => "Weighted Avg",
    }
}

fn triple(m: &Metrics) -> [f64; 3] {
    [m.precision, m.recall, m.f_score]
}

pub fn comparison_tsv(table: &ComparisonTable) -> String {
    let mut out = String::from("row\tsupport");
    for m in &table.models {
        write!(out, "\t{m}_precision\t{m}_recall\t{m}_f_score").unwrap();
    }
    out.push('\n');
    for row in &table.rows {
        write!(out, "{}\t{}", row_name(row.label), row.support).unwrap();
        for v in &row.values {
            let [p, r, f] = triple(v);
            write!(out, "\t{p}\t{r}\t{f}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Rows of `[label, support, P per model..., R per model..., F per model...]`
/// laid out like the classic precision / recall / F-score table.
fn grid(out: &mut String, models: &[String], rows: &[(String, usize, Vec<[f64; 3]>)]) {
    let k = models.len();
    write!(out, "{:<14}{:>7}", "Model", "").unwrap();
    for title in ["Precision", "Recall", "F-Score"] {
        write!(out, "  {:^width$}", title, width = 8 * k).unwrap();
    }
    out.push('\n');
    write!(out, "{:<14}{:>7}", "", "").unwrap();
    for _ in 0..3 {
        out.push_str("  ");
        for m in models {
            write!(out, "{m:>8}").unwrap();
        }
    }
    out.push('\n');
    for (label, support, values) in rows {
        write!(out, "{label:<14}{support:>7}").unwrap();
        for metric in 0..3 {
            out.push_str("  ");
            for v in values {
                write!(out, "{:>8.2}", 100.0 * v[metric]).unwrap();
            }
        }
        out.push('\n');
    }
}

fn short_name(model: &str) -> String {
    match model {
        "bilstm" => "LSTM".into(),
        "logreg" => "LR".into(),
        other => other.into(),
    }
}

pub fn comparison_text(table: &ComparisonTable) -> String {
    let models: Vec<String> = table.models.iter().map(|m| short_name(m)).collect();
    let rows: Vec<(String, usize, Vec<[f64; 3]>)> = table
        .rows
        .iter()
        .map(|r: &ComparisonRow| (row_name(r.label).to_owned(), r.support, r.values.iter().map(triple).collect()))
        .collect();
    let mut out = String::from("this run (percent)\n");
    grid(&mut out, &models, &rows);
    if let Some(w) = table.row(RowLabel::WeightedAvg) {
        for (name, d) in models.iter().skip(1).zip(&w.deltas) {
            writeln!(
                out,
                "{name} - {}: precision {:+.2}  recall {:+.2}  f-score {:+.2}",
                models[0],
                100.0 * d.precision,
                100.0 * d.recall,
                100.0 * d.f_score
            )
            .unwrap();
        }
    }
    out.push_str("\nreference (percent)\n");
    let reference: Vec<(String, usize, Vec<[f64; 3]>)> = REFERENCE_EVAL
        .iter()
        .map(|(l, s, v)| (l.to_string(), *s, v.iter().map(|m| m.map(|x| x / 100.0)).collect()))
        .collect();
    grid(&mut out, &["LSTM".into(), "LR".into()], &reference);
    out
}
