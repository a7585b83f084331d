//! Static score figure: scatter of score1 against score2 on the left, one
//! box plot per tag on the right, plus the data behind it as CSV.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lexforge_core::{BoxStats, LanguageTag, ScatterRecord};

use crate::error::Result;
use crate::formats::write_file;

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 440.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 380.0;
const SCATTER_X: (f64, f64) = (70.0, 410.0);
const BOX_X: (f64, f64) = (560.0, 900.0);
const POINT_RADIUS: f64 = 1.6;

pub fn color(tag: LanguageTag) -> &'static str {
    match tag {
        LanguageTag::English => "#1f77b4",
        LanguageTag::Hindi => "#ff7f0e",
    }
}

/// Affine map from a data interval onto a pixel interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub domain: (f64, f64),
    pub range: (f64, f64),
}

impl Axis {
    pub fn map(&self, v: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        r0 + (v - d0) * (r1 - r0) / (d1 - d0)
    }

    pub fn invert(&self, px: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        d0 + (px - r0) * (d1 - d0) / (r1 - r0)
    }
}

pub fn scatter_axes() -> (Axis, Axis) {
    (Axis { domain: (0.0, 1.0), range: SCATTER_X }, Axis { domain: (0.0, 1.0), range: (BOTTOM, TOP) })
}

pub fn box_axis() -> Axis {
    Axis { domain: (0.0, 1.0), range: (BOTTOM, TOP) }
}

/// Horizontal centre of the box for the `slot`-th tag.
fn box_center(slot: usize) -> f64 {
    BOX_X.0 + (BOX_X.1 - BOX_X.0) * (slot as f64 * 2.0 + 1.0) / 4.0
}

fn frame(out: &mut String, x: (f64, f64), xlabel: &str, ylabel: &str, title: &str) {
    let y = box_axis();
    writeln!(
        out,
        r##"<rect x="{:.2}" y="{TOP:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333"/>"##,
        x.0,
        x.1 - x.0,
        BOTTOM - TOP
    )
    .unwrap();
    for k in 0..=5 {
        let v = k as f64 / 5.0;
        let py = y.map(v);
        writeln!(out, r##"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#333"/>"##, x.0 - 5.0, x.0).unwrap();
        writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#, x.0 - 8.0, py + 4.0).unwrap();
    }
    let mid = (x.0 + x.1) / 2.0;
    writeln!(out, r#"<text x="{mid:.2}" y="{:.2}" text-anchor="middle" font-weight="bold">{title}</text>"#, TOP - 14.0)
        .unwrap();
    writeln!(out, r#"<text x="{mid:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#, BOTTOM + 40.0).unwrap();
    let ly = (TOP + BOTTOM) / 2.0;
    writeln!(
        out,
        r#"<text x="{:.2}" y="{ly:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {ly:.2})">{ylabel}</text>"#,
        x.0 - 45.0,
        x.0 - 45.0
    )
    .unwrap();
}

fn scatter_panel(out: &mut String, records: &[ScatterRecord]) {
    let (ax, ay) = scatter_axes();
    frame(out, SCATTER_X, "score1", "score2", "score1 vs score2");
    for k in 0..=5 {
        let v = k as f64 / 5.0;
        let px = ax.map(v);
        writeln!(out, r##"<line x1="{px:.2}" y1="{BOTTOM:.2}" x2="{px:.2}" y2="{:.2}" stroke="#333"/>"##, BOTTOM + 5.0).unwrap();
        writeln!(out, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{v:.1}</text>"#, BOTTOM + 18.0).unwrap();
    }
    for tag in [LanguageTag::English, LanguageTag::Hindi] {
        writeln!(out, r#"<g fill="{}" fill-opacity="0.6">"#, color(tag)).unwrap();
        for r in records.iter().filter(|r| r.tag == tag) {
            writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="{POINT_RADIUS}"/>"#, ax.map(r.x), ay.map(r.y)).unwrap();
        }
        out.push_str("</g>\n");
    }
    let (lx, ly) = (SCATTER_X.0 + 12.0, TOP + 16.0);
    for (i, tag) in [LanguageTag::English, LanguageTag::Hindi].into_iter().enumerate() {
        let y = ly + 18.0 * i as f64;
        writeln!(out, r#"<circle cx="{lx:.2}" cy="{y:.2}" r="5" fill="{}"/>"#, color(tag)).unwrap();
        writeln!(out, r#"<text x="{:.2}" y="{:.2}">{} ({})</text>"#, lx + 10.0, y + 4.0, tag.name(), tag.code()).unwrap();
    }
}

fn box_panel(out: &mut String, boxes: &[(LanguageTag, BoxStats); 2], score: &str) {
    let ay = box_axis();
    frame(out, BOX_X, "tag", score, &format!("{score} by tag"));
    let half = 40.0;
    for (slot, (tag, b)) in boxes.iter().enumerate() {
        let cx = box_center(slot);
        let c = color(*tag);
        let (q1, q3) = (ay.map(b.q1), ay.map(b.q3));
        writeln!(out, r#"<g stroke="{c}" fill="none">"#).unwrap();
        writeln!(out, r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{q1:.2}"/>"#, ay.map(b.min)).unwrap();
        writeln!(out, r#"<line x1="{cx:.2}" y1="{q3:.2}" x2="{cx:.2}" y2="{:.2}"/>"#, ay.map(b.max)).unwrap();
        for v in [b.min, b.max] {
            let py = ay.map(v);
            writeln!(out, r#"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}"/>"#, cx - half / 2.0, cx + half / 2.0)
                .unwrap();
        }
        writeln!(
            out,
            r#"<rect x="{:.2}" y="{q3:.2}" width="{:.2}" height="{:.2}" fill="{c}" fill-opacity="0.3"/>"#,
            cx - half,
            2.0 * half,
            q1 - q3
        )
        .unwrap();
        let pm = ay.map(b.median);
        writeln!(out, r#"<line x1="{:.2}" y1="{pm:.2}" x2="{:.2}" y2="{pm:.2}" stroke-width="2"/>"#, cx - half, cx + half)
            .unwrap();
        for &o in &b.outliers {
            writeln!(out, r#"<circle cx="{cx:.2}" cy="{:.2}" r="2"/>"#, ay.map(o)).unwrap();
        }
        out.push_str("</g>\n");
        writeln!(
            out,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{} ({})</text>"#,
            BOTTOM + 18.0,
            tag.code(),
            tag.index()
        )
        .unwrap();
    }
}

/// The full figure as a standalone SVG document. Output depends only on
/// the arguments.
pub fn render_svg(records: &[ScatterRecord], boxes: &[(LanguageTag, BoxStats); 2], score: &str) -> String {
    let mut out = String::with_capacity(64 * records.len() + 8192);
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    scatter_panel(&mut out, records);
    box_panel(&mut out, boxes, score);
    out.push_str("</svg>\n");
    out
}

pub fn scatter_csv(records: &[ScatterRecord]) -> String {
    let mut out = String::from("x,y,tag\n");
    for r in records {
        writeln!(out, "{},{},{}", r.x, r.y, r.tag.code()).unwrap();
    }
    out
}

pub fn box_csv(boxes: &[(LanguageTag, BoxStats); 2], score: &str) -> String {
    let mut out = String::from("score,tag,min,q1,median,q3,max,outlier_count\n");
    for (tag, b) in boxes {
        writeln!(out, "{score},{},{},{},{},{},{},{}", tag.code(), b.min, b.q1, b.median, b.q3, b.max, b.outliers.len())
            .unwrap();
    }
    out
}

#[derive(Clone, Debug)]
pub struct FigureFiles {
    pub svg: PathBuf,
    pub scatter: PathBuf,
    pub boxes: PathBuf,
}

pub fn write_figure(dir: &Path, records: &[ScatterRecord], boxes: &[(LanguageTag, BoxStats); 2], score: &str) -> Result<FigureFiles> {
    let files = FigureFiles { svg: dir.join("fig1.svg"), scatter: dir.join("scatter.csv"), boxes: dir.join("box.csv") };
    write_file(&files.svg, render_svg(records, boxes, score))?;
    write_file(&files.scatter, scatter_csv(records))?;
    write_file(&files.boxes, box_csv(boxes, score))?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexforge_core::plot::boxplot_stats;
    use proptest::prelude::*;

    fn sample() -> (Vec<ScatterRecord>, [(LanguageTag, BoxStats); 2]) {
        let records = vec![
            ScatterRecord { x: 0.99, y: 0.98, tag: LanguageTag::Hindi },
            ScatterRecord { x: 0.9, y: 0.7, tag: LanguageTag::Hindi },
            ScatterRecord { x: 0.1, y: 0.05, tag: LanguageTag::English },
        ];
        let boxes = [
            (LanguageTag::Hindi, boxplot_stats(&[0.99, 0.9]).unwrap()),
            (LanguageTag::English, boxplot_stats(&[0.1]).unwrap()),
        ];
        (records, boxes)
    }

    #[test]
    fn svg_is_well_formed_and_deterministic() {
        let (r, b) = sample();
        let a = render_svg(&r, &b, "score1");
        assert_eq!(a, render_svg(&r, &b, "score1"));
        let doc = roxmltree::Document::parse(&a).unwrap();
        let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
        assert_eq!(circles, 3 + 2);
        assert!(a.contains(color(LanguageTag::English)) && a.contains(color(LanguageTag::Hindi)));
    }

    #[test]
    fn csv_rows() {
        let (r, b) = sample();
        assert_eq!(scatter_csv(&r).lines().count() - 1 + box_csv(&b, "score1").lines().count() - 1, r.len() + 2);
        assert!(scatter_csv(&r).contains("\n0.99,0.98,hi\n"));
    }

    proptest! {
        #[test]
        fn axes_are_affine_and_invertible(v in 0.0f64..=1.0) {
            let (ax, ay) = scatter_axes();
            for a in [ax, ay, box_axis()] {
                let px = a.map(v);
                prop_assert!((a.invert(px) - v).abs() < 1e-12);
                prop_assert!((0.0..=WIDTH).contains(&px) && (0.0..=HEIGHT.max(WIDTH)).contains(&px));
            }
            prop_assert!(ay.map(v) >= TOP && ay.map(v) <= BOTTOM);
            prop_assert!(ax.map(v) >= SCATTER_X.0 && ax.map(v) <= SCATTER_X.1);
            let mid = ax.map(0.5);
            prop_assert!((mid - (ax.map(0.0) + ax.map(1.0)) / 2.0).abs() < 1e-9);
        }
    }
}
