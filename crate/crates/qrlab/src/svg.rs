use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// A minimal line/scatter plot writer: linear or log axes, no external
/// dependencies, no timestamps.
pub struct SvgPlot {
    width: f64,
    height: f64,
    margin: f64,
    log_x: bool,
    log_y: bool,
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
}

struct Series {
    points: Vec<(f64, f64)>,
    color: String,
    label: String,
    style: Style,
}

#[derive(PartialEq, Clone, Copy)]
pub enum Style {
    Line,
    DashedLine,
    Points,
}

impl SvgPlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            width: 640.0,
            height: 440.0,
            margin: 56.0,
            log_x: false,
            log_y: false,
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            series: Vec::new(),
        }
    }

    pub fn log_x(mut self) -> Self {
        self.log_x = true;
        self
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    pub fn add(&mut self, label: &str, color: &str, style: Style, points: &[(f64, f64)]) {
        self.series.push(Series {
            points: points.to_vec(),
            color: color.to_string(),
            label: label.to_string(),
            style,
        });
    }

    fn tx(&self, x: f64, (x0, x1): (f64, f64)) -> f64 {
        let (a, b, v) = if self.log_x {
            (x0.log10(), x1.log10(), x.log10())
        } else {
            (x0, x1, x)
        };
        self.margin + (v - a) / (b - a).max(1e-300) * (self.width - 2.0 * self.margin)
    }

    fn ty(&self, y: f64, (y0, y1): (f64, f64)) -> f64 {
        let (a, b, v) = if self.log_y {
            (y0.log10(), y1.log10(), y.log10())
        } else {
            (y0, y1, y)
        };
        self.height - self.margin
            - (v - a) / (b - a).max(1e-300) * (self.height - 2.0 * self.margin)
    }

    pub fn render(&self) -> String {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                if (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0) {
                    xs.push(x);
                    ys.push(y);
                }
            }
        }
        let lo = |v: &Vec<f64>| v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = |v: &Vec<f64>| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (mut x0, mut x1) = (lo(&xs), hi(&xs));
        let (mut y0, mut y1) = (lo(&ys), hi(&ys));
        if !x0.is_finite() || x0 == x1 {
            x1 = x0 + 1.0;
        }
        if !y0.is_finite() || y0 == y1 {
            y1 = y0 + 1.0;
        }
        if !self.log_y {
            let pad = 0.05 * (y1 - y0);
            y0 -= pad;
            y1 += pad;
        }
        if !self.log_x {
            let pad = 0.02 * (x1 - x0);
            x0 -= pad;
            x1 += pad;
        }
        let xr = (x0, x1);
        let yr = (y0, y1);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            self.width, self.height, self.width, self.height
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        // frame
        let (m, w, h) = (self.margin, self.width, self.height);
        let _ = writeln!(
            s,
            r##"<rect x="{m}" y="{m}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
            w - 2.0 * m,
            h - 2.0 * m
        );
        // axis ticks: 5 evenly spaced in plot coordinates
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = if self.log_x {
                10f64.powf(x0.log10() + f * (x1.log10() - x0.log10()))
            } else {
                x0 + f * (x1 - x0)
            };
            let yv = if self.log_y {
                10f64.powf(y0.log10() + f * (y1.log10() - y0.log10()))
            } else {
                y0 + f * (y1 - y0)
            };
            let px = self.tx(xv, xr);
            let py = self.ty(yv, yr);
            let _ = writeln!(
                s,
                r##"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="#444"/>"##,
                h - m,
                h - m + 5.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{px}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
                h - m + 18.0,
                tick_label(xv)
            );
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{py}" x2="{m}" y2="{py}" stroke="#444"/>"##,
                m - 5.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#,
                m - 8.0,
                py + 4.0,
                tick_label(yv)
            );
        }
        // labels and title
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
            w / 2.0,
            h - 12.0,
            xml_escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
            h / 2.0,
            h / 2.0,
            xml_escape(&self.y_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
            w / 2.0,
            xml_escape(&self.title)
        );
        // series
        for (si, series) in self.series.iter().enumerate() {
            let pts: Vec<(f64, f64)> = series
                .points
                .iter()
                .filter(|(x, y)| (!self.log_x || *x > 0.0) && (!self.log_y || *y > 0.0))
                .map(|&(x, y)| (self.tx(x, xr), self.ty(y, yr)))
                .collect();
            match series.style {
                Style::Points => {
                    for (px, py) in &pts {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{px}" cy="{py}" r="3" fill="{}"/>"#,
                            series.color
                        );
                    }
                }
                Style::Line | Style::DashedLine => {
                    let dash = if series.style == Style::DashedLine {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    let path: Vec<String> =
                        pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        s,
                        r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                        path.join(" "),
                        series.color
                    );
                }
            }
            // legend
            let ly = 36.0 + 16.0 * si as f64;
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/>"#,
                w - m - 150.0,
                ly - 9.0,
                series.color
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="11">{}</text>"#,
                w - m - 135.0,
                ly,
                xml_escape(&series.label)
            );
        }
        let _ = writeln!(s, "</svg>");
        s
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.render())?;
        Ok(())
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 0.01 && v.abs() < 10000.0 {
        format!("{v:.3}")
    } else {
        format!("{v:.1e}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
