//! Minimal SVG rendering for heatmaps. Every cell carries its value in a
//! `data-value` attribute so figures can be parsed back.

use std::fmt::Write as _;

const CELL_BIG: f64 = 48.0;
const CELL_SMALL: f64 = 14.0;
const MARGIN: f64 = 56.0;
const TITLE: f64 = 24.0;

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// White at `lo` to dark blue at `hi`.
fn color(v: f64, lo: f64, hi: f64) -> String {
    let t = if hi > lo { ((v - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 1.0 };
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(255.0, 8.0), mix(255.0, 48.0), mix(255.0, 107.0))
}

pub struct HeatmapSpec<'a> {
    pub title: &'a str,
    pub row_axis: &'a str,
    pub col_axis: &'a str,
    pub row_labels: &'a [String],
    pub col_labels: &'a [String],
    pub values: &'a [Vec<Option<f64>>],
    pub range: (f64, f64),
}

impl HeatmapSpec<'_> {
    fn annotate(&self) -> bool {
        self.row_labels.len().max(self.col_labels.len()) <= 12
    }

    fn cell(&self) -> f64 {
        if self.annotate() {
            CELL_BIG
        } else {
            CELL_SMALL
        }
    }

    pub fn size(&self) -> (f64, f64) {
        let c = self.cell();
        (
            MARGIN + c * self.col_labels.len() as f64 + 8.0,
            TITLE + MARGIN + c * self.row_labels.len() as f64 + 8.0,
        )
    }

    /// Heatmap body positioned at the origin.
    pub fn render_body(&self, out: &mut String) {
        let c = self.cell();
        let (w, _) = self.size();
        let font = if self.annotate() { 11.0 } else { 7.0 };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="16" font-size="13" text-anchor="middle">{}</text>"#,
            w / 2.0,
            escape(self.title)
        );
        let (x0, y0) = (MARGIN, TITLE + MARGIN);
        for (j, l) in self.col_labels.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-size="{font}" text-anchor="middle">{}</text>"#,
                x0 + c * (j as f64 + 0.5),
                y0 - 6.0,
                escape(l)
            );
        }
        for (i, l) in self.row_labels.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-size="{font}" text-anchor="end">{}</text>"#,
                x0 - 4.0,
                y0 + c * (i as f64 + 0.5) + font / 3.0,
                escape(l)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
            x0 + c * self.col_labels.len() as f64 / 2.0,
            TITLE + 12.0,
            escape(self.col_axis)
        );
        let _ = writeln!(
            out,
            r#"<text x="10" y="{:.1}" font-size="10" text-anchor="middle" transform="rotate(-90 10 {:.1})">{}</text>"#,
            y0 + c * self.row_labels.len() as f64 / 2.0,
            y0 + c * self.row_labels.len() as f64 / 2.0,
            escape(self.row_axis)
        );
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let (x, y) = (x0 + c * j as f64, y0 + c * i as f64);
                let (fill, value) = match v {
                    Some(v) => (color(*v, self.range.0, self.range.1), v.to_string()),
                    None => ("none".to_string(), String::new()),
                };
                let _ = writeln!(
                    out,
                    r##"<rect class="cell" x="{x:.1}" y="{y:.1}" width="{c:.1}" height="{c:.1}" fill="{fill}" stroke="#999" stroke-width="0.5" data-row-label="{}" data-col-label="{}" data-value="{value}"/>"##,
                    escape(&self.row_labels[i]),
                    escape(&self.col_labels[j]),
                );
                if let (Some(v), true) = (v, self.annotate()) {
                    let t = (v - self.range.0) / (self.range.1 - self.range.0).max(f64::EPSILON);
                    let ink = if t > 0.55 { "#fff" } else { "#000" };
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.1}" y="{:.1}" font-size="{font}" text-anchor="middle" fill="{ink}">{v:.2}</text>"#,
                        x + c / 2.0,
                        y + c / 2.0 + 4.0,
                    );
                }
            }
        }
    }
}

fn document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n{body}</svg>\n"
    )
}

pub fn heatmap_svg(spec: &HeatmapSpec) -> String {
    let (w, h) = spec.size();
    let mut body = String::new();
    spec.render_body(&mut body);
    document(w, h, &body)
}

/// Several heatmaps tiled in rows of `per_row`, each in a
/// `<g class="panel" data-key="...">` group.
pub fn panels_svg(panels: &[(String, HeatmapSpec)], per_row: usize) -> String {
    let per_row = per_row.max(1);
    let (pw, ph) = panels
        .iter()
        .map(|(_, p)| p.size())
        .fold((0.0f64, 0.0f64), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let cols = panels.len().clamp(1, per_row);
    let rows = panels.len().div_ceil(per_row).max(1);
    let mut body = String::new();
    for (k, (key, p)) in panels.iter().enumerate() {
        let (x, y) = (pw * (k % per_row) as f64, ph * (k / per_row) as f64);
        let _ = writeln!(
            body,
            r#"<g class="panel" data-key="{}" transform="translate({x:.1},{y:.1})">"#,
            escape(key)
        );
        p.render_body(&mut body);
        body.push_str("</g>\n");
    }
    document(pw * cols as f64, ph * rows as f64, &body)
}
