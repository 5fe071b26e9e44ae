//! Minimal SVG writer with fixed three-decimal coordinates.

use std::fmt::Write;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maps a data rectangle onto a pixel rectangle, y axis pointing up.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl Frame {
    pub fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = (x - self.x.0) / (self.x.1 - self.x.0);
        let sy = (y - self.y.0) / (self.y.1 - self.y.0);
        (self.left + sx * self.width, self.top + (1.0 - sy) * self.height)
    }
}

/// Evenly spaced tick values covering `[lo, hi]`.
pub fn ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect()
}

pub struct Svg {
    width: f64,
    height: f64,
    comments: Vec<String>,
    body: String,
}

impl Svg {
    pub fn new(width: f64, height: f64, comments: &[String]) -> Self {
        Self {
            width,
            height,
            comments: comments.iter().map(|c| c.replace("--", "- -")).collect(),
            body: String::new(),
        }
    }

    fn points_attr(frame: &Frame, points: &[[f64; 2]]) -> String {
        points
            .iter()
            .map(|p| {
                let (x, y) = frame.px(p[0], p[1]);
                format!("{},{}", num(x), num(y))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn polygon(&mut self, frame: &Frame, points: &[[f64; 2]], style: &str) {
        if points.is_empty() {
            return;
        }
        let _ = writeln!(
            self.body,
            "<polygon points=\"{}\" {style}/>",
            Self::points_attr(frame, points)
        );
    }

    pub fn polyline(&mut self, frame: &Frame, points: &[[f64; 2]], style: &str) {
        if points.len() < 2 {
            return;
        }
        let _ = writeln!(
            self.body,
            "<polyline points=\"{}\" fill=\"none\" {style}/>",
            Self::points_attr(frame, points)
        );
    }

    pub fn circle(&mut self, frame: &Frame, p: [f64; 2], r: f64, style: &str) {
        let (x, y) = frame.px(p[0], p[1]);
        let _ = writeln!(
            self.body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {style}/>",
            num(x),
            num(y),
            num(r)
        );
    }

    pub fn line_px(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {style}/>",
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        );
    }

    pub fn rect_px(&mut self, x: f64, y: f64, w: f64, h: f64, style: &str) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {style}/>",
            num(x),
            num(y),
            num(w.max(0.0)),
            num(h.max(0.0))
        );
    }

    pub fn text_px(&mut self, x: f64, y: f64, anchor: &str, text: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            num(x),
            num(y),
            escape(text)
        );
    }

    /// Box, ticks and axis labels.
    pub fn axes(&mut self, frame: &Frame, xlabel: &str, ylabel: &str, xt: &[f64], yt: &[f64]) {
        self.rect_px(
            frame.left,
            frame.top,
            frame.width,
            frame.height,
            "fill=\"none\" stroke=\"#444\" stroke-width=\"1\"",
        );
        let bottom = frame.top + frame.height;
        for &t in xt {
            let (x, _) = frame.px(t, frame.y.0);
            self.line_px((x, bottom), (x, bottom + 5.0), "stroke=\"#444\"");
            self.text_px(x, bottom + 18.0, "middle", &tick_label(t));
        }
        for &t in yt {
            let (_, y) = frame.px(frame.x.0, t);
            self.line_px((frame.left - 5.0, y), (frame.left, y), "stroke=\"#444\"");
            self.text_px(frame.left - 8.0, y + 4.0, "end", &tick_label(t));
        }
        self.text_px(frame.left + frame.width / 2.0, bottom + 36.0, "middle", xlabel);
        let _ = writeln!(
            self.body,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 {} {})\">{}</text>",
            num(frame.left - 42.0),
            num(frame.top + frame.height / 2.0),
            num(frame.left - 42.0),
            num(frame.top + frame.height / 2.0),
            escape(ylabel)
        );
    }

    pub fn finish(self) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        for c in &self.comments {
            let _ = writeln!(out, "<!-- {} -->", escape(c));
        }
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = num(self.width),
            h = num(self.height)
        );
        let _ = writeln!(
            out,
            "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
            num(self.width),
            num(self.height)
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn tick_label(t: f64) -> String {
    let s = format!("{t:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Diverging blue-white-red color for `v` in `[-1, 1]`.
pub fn diverging(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (r, g, b) = if v >= 0.0 {
        (1.0, 1.0 - v, 1.0 - v)
    } else {
        (1.0 + v, 1.0 + v, 1.0)
    };
    let c = |x: f64| (x * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(r), c(g), c(b))
}
