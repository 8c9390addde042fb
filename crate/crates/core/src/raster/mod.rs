//! Hard-edged, deterministic rendering of primitives and PNG I/O.
//!
//! A pixel is covered by a mark iff its center lies within the mark's radius
//! of the mark's geometry. There is no anti-aliasing: the output is a pure
//! function of the geometry and style, bit for bit.

mod canvas;
mod dash;
mod png_io;

pub use canvas::{blend_over, Canvas, Rgba};
pub use dash::{dash_intervals, DashPattern};
pub use png_io::{decode_png, encode_png, read_png, write_png};

use serde::{Deserialize, Serialize};

use crate::bodymap::{RegionPartition, REGION_COUNT};
use crate::error::{Error, Result};
use crate::geometry::{distance_to_segment, Point, Polyline, DEFAULT_FLATTEN_TOLERANCE};
use crate::primitives::Primitive;

pub const BLACK: Rgba = [0, 0, 0, 255];
pub const WHITE: Rgba = [255, 255, 255, 255];
pub const TRANSPARENT: Rgba = [0, 0, 0, 0];

/// How a primitive is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrokeStyle {
    /// Stroke width of lines, in pixels.
    pub width: f64,
    pub color: Rgba,
}

impl Default for StrokeStyle {
    fn default() -> Self {
        StrokeStyle {
            width: 3.0,
            color: BLACK,
        }
    }
}

impl StrokeStyle {
    pub fn validate(&self) -> Result<()> {
        if !(self.width >= 1.0 && self.width.is_finite()) {
            return Err(Error::config(format!(
                "stroke width {} must be >= 1",
                self.width
            )));
        }
        Ok(())
    }

    pub fn with_color(self, color: Rgba) -> Self {
        StrokeStyle { color, ..self }
    }
}

/// Draw `primitive` onto `canvas` with source-over blending. Each covered
/// pixel is blended exactly once, even where stroke pieces overlap.
pub fn render(canvas: &mut Canvas, primitive: &Primitive, style: &StrokeStyle) {
    if style.color[3] == 0 {
        return;
    }
    let mut cov = Coverage::new(canvas.width(), canvas.height());
    let half = style.width / 2.0;
    match primitive {
        Primitive::Line { curve } => {
            let poly = curve.flatten(DEFAULT_FLATTEN_TOLERANCE);
            for (a, b) in poly.segments() {
                cov.add_segment(a, b, half);
            }
        }
        Primitive::DashedLine { curve, dash } => {
            let poly = curve.flatten(DEFAULT_FLATTEN_TOLERANCE);
            for (from, to) in dash_intervals(poly.length(), dash) {
                let piece = slice_by_arc_length(&poly, from, to);
                if piece.len() == 1 {
                    cov.add_segment(piece[0], piece[0], half);
                }
                for w in piece.windows(2) {
                    cov.add_segment(w[0], w[1], half);
                }
            }
        }
        Primitive::PointCluster {
            points,
            point_radius,
        } => {
            for &p in points {
                cov.add_segment(p, p, *point_radius);
            }
        }
    }
    cov.blend_onto(canvas, style.color);
}

/// Place `marks` over `template` with source-over alpha.
pub fn composite_template(marks: &Canvas, template: &Canvas) -> Result<Canvas> {
    if marks.width() != template.width() || marks.height() != template.height() {
        return Err(Error::config(format!(
            "template is {}x{}, canvas is {}x{}",
            template.width(),
            template.height(),
            marks.width(),
            marks.height()
        )));
    }
    let mut out = template.clone();
    for (dst, src) in out.pixels_mut().zip(marks.pixels()) {
        *dst = blend_over(*dst, src);
    }
    Ok(out)
}

/// Vertices of the part of `poly` between arc lengths `from` and `to`.
/// A zero-length interval yields a single point.
pub fn slice_by_arc_length(poly: &Polyline, from: f64, to: f64) -> Vec<Point> {
    let mut out = Vec::new();
    let mut walked = 0.0;
    for (a, b) in poly.segments() {
        let len = a.distance(b);
        let (s0, s1) = (walked, walked + len);
        walked = s1;
        if s1 < from || len == 0.0 {
            continue;
        }
        if out.is_empty() {
            out.push(a.lerp(b, ((from - s0) / len).clamp(0.0, 1.0)));
        }
        if to <= s1 {
            let end = a.lerp(b, ((to - s0) / len).clamp(0.0, 1.0));
            if end != *out.last().unwrap() {
                out.push(end);
            }
            return out;
        }
        out.push(b);
    }
    if out.is_empty() {
        out.push(*poly.vertices().last().unwrap());
    }
    out
}

/// Twelve visually distinct colors for partition previews.
pub const REGION_PALETTE: [Rgba; REGION_COUNT] = [
    [230, 25, 75, 255],
    [60, 180, 75, 255],
    [255, 225, 25, 255],
    [0, 130, 200, 255],
    [245, 130, 48, 255],
    [145, 30, 180, 255],
    [70, 240, 240, 255],
    [240, 50, 230, 255],
    [210, 245, 60, 255],
    [250, 190, 212, 255],
    [0, 128, 128, 255],
    [170, 110, 40, 255],
];

/// Color each region of `partition` from [`REGION_PALETTE`] on white.
pub fn render_partition(partition: &RegionPartition, width: u32, height: u32) -> Canvas {
    let mut c = Canvas::filled(width, height, WHITE);
    for y in 0..height {
        for x in 0..width {
            if let Some(r) = partition.region_at(x, y) {
                c.set(x, y, REGION_PALETTE[r as usize]);
            }
        }
    }
    c
}

struct Coverage {
    width: u32,
    height: u32,
    covered: Vec<bool>,
    touched: Vec<u32>,
}

impl Coverage {
    fn new(width: u32, height: u32) -> Self {
        Coverage {
            width,
            height,
            covered: vec![false; width as usize * height as usize],
            touched: Vec::new(),
        }
    }

    /// Cover every pixel whose center is within `radius` of segment `[a, b]`.
    fn add_segment(&mut self, a: Point, b: Point, radius: f64) {
        let lo = |v: f64| (v - radius - 0.5).floor().max(0.0);
        let x0 = lo(a.x.min(b.x)) as u32;
        let y0 = lo(a.y.min(b.y)) as u32;
        let x1 = (a.x.max(b.x) + radius)
            .ceil()
            .min(f64::from(self.width))
            .max(0.0) as u32;
        let y1 = (a.y.max(b.y) + radius)
            .ceil()
            .min(f64::from(self.height))
            .max(0.0) as u32;
        for y in y0..y1 {
            for x in x0..x1 {
                let center = Point::new(f64::from(x) + 0.5, f64::from(y) + 0.5);
                if distance_to_segment(center, a, b) <= radius {
                    let i = y * self.width + x;
                    if !self.covered[i as usize] {
                        self.covered[i as usize] = true;
                        self.touched.push(i);
                    }
                }
            }
        }
    }

    fn blend_onto(&self, canvas: &mut Canvas, color: Rgba) {
        for &i in &self.touched {
            let (x, y) = (i % self.width, i / self.width);
            canvas.set(x, y, blend_over(canvas.get(x, y), color));
        }
    }
}
