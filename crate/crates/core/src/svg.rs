//! Hand-rolled SVG plot writer: axes, region shading, one path per curve.

use crate::curve::CurveGraph;

pub struct SvgPlot {
    width: f64,
    height: f64,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    shading: Vec<String>,
    curves: Vec<String>,
    markers: Vec<String>,
    legend: Vec<(String, String)>,
}

impl SvgPlot {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        SvgPlot {
            width: 720.0,
            height: 540.0,
            margin: 60.0,
            x_range,
            y_range,
            shading: Vec::new(),
            curves: Vec::new(),
            markers: Vec::new(),
            legend: Vec::new(),
        }
    }

    fn sx(&self, x: f64) -> f64 {
        let (a, b) = self.x_range;
        self.margin + (x - a) / (b - a) * (self.width - 2.0 * self.margin)
    }

    fn sy(&self, y: f64) -> f64 {
        let (a, b) = self.y_range;
        self.height - self.margin - (y - a) / (b - a) * (self.height - 2.0 * self.margin)
    }

    /// Filled region polygon (not a `path` element).
    pub fn add_region(&mut self, points: &[(f64, f64)], fill: &str, label: &str) {
        let pts: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", self.sx(*x), self.sy(*y)))
            .collect();
        self.shading.push(format!(
            "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.25\" stroke=\"none\"/>",
            pts.join(" "),
            fill
        ));
        self.legend.push((label.to_string(), fill.to_string()));
    }

    /// One `path` element per curve.
    pub fn add_curve(&mut self, curve: &CurveGraph, color: &str, label: &str) {
        let pts: Vec<(f64, f64)> = curve.points().collect();
        self.add_polyline(&pts, color, label);
    }

    pub fn add_polyline(&mut self, pts: &[(f64, f64)], color: &str, label: &str) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (k, (x, y)) in pts.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd}{:.3} {:.3}", self.sx(*x), self.sy(*y)));
        }
        self.curves.push(format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>"
        ));
        self.legend.push((label.to_string(), color.to_string()));
    }

    pub fn add_marker(&mut self, x: f64, y: f64, color: &str, label: &str) {
        self.markers.push(format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"/>",
            self.sx(x),
            self.sy(y)
        ));
        self.markers.push(format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{label}</text>",
            self.sx(x) + 6.0,
            self.sy(y) - 6.0
        ));
    }

    pub fn render(&self, title: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n",
            self.width, self.height, self.width, self.height
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        for s in &self.shading {
            out.push_str(s);
            out.push('\n');
        }
        // axes with ticks
        let x0 = self.margin;
        let x1 = self.width - self.margin;
        let y0 = self.height - self.margin;
        let y1 = self.margin;
        out.push_str(&format!(
            "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x1:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>\n"
        ));
        out.push_str(&format!(
            "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x0:.1}\" y2=\"{y1:.1}\" stroke=\"black\"/>\n"
        ));
        for k in 0..=5 {
            let fx = self.x_range.0 + (self.x_range.1 - self.x_range.0) * k as f64 / 5.0;
            let fy = self.y_range.0 + (self.y_range.1 - self.y_range.0) * k as f64 / 5.0;
            let px = self.sx(fx);
            let py = self.sy(fy);
            out.push_str(&format!(
                "<line x1=\"{px:.1}\" y1=\"{y0:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
                y0 + 5.0
            ));
            out.push_str(&format!(
                "<text x=\"{px:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{fx:.2}</text>\n",
                y0 + 18.0
            ));
            out.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{x0:.1}\" y2=\"{py:.1}\" stroke=\"black\"/>\n",
                x0 - 5.0
            ));
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{py:.1}\" font-size=\"11\" text-anchor=\"end\">{fy:.2}</text>\n",
                x0 - 8.0
            ));
        }
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">{title}</text>\n",
            self.width / 2.0,
            self.margin / 2.0
        ));
        for c in &self.curves {
            out.push_str(c);
            out.push('\n');
        }
        for m in &self.markers {
            out.push_str(m);
            out.push('\n');
        }
        let mut ly = self.margin + 10.0;
        for (label, color) in &self.legend {
            out.push_str(&format!(
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n",
                x1 - 150.0,
                ly - 10.0
            ));
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{ly:.1}\" font-size=\"11\">{label}</text>\n",
                x1 - 132.0
            ));
            ly += 18.0;
        }
        out.push_str("</svg>\n");
        out
    }
}
