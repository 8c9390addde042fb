use serde::{Deserialize, Serialize};

use super::{distance_to_segment, Point};
use crate::error::{Error, Result};

/// Flattening tolerance used for rasterization and containment tests, in pixels.
pub const DEFAULT_FLATTEN_TOLERANCE: f64 = 0.25;

// Subdivision depth bound; 2^24 pieces is far below any tolerance we accept.
const MAX_DEPTH: u32 = 24;

/// A quadratic or cubic Bézier curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct BezierCurve {
    control_points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    degree: u8,
    control_points: Vec<Point>,
}

impl TryFrom<RawCurve> for BezierCurve {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        let curve = BezierCurve::new(raw.control_points)?;
        if curve.degree() != raw.degree {
            return Err(Error::Domain(format!(
                "degree {} does not match {} control points",
                raw.degree,
                curve.control_points.len()
            )));
        }
        Ok(curve)
    }
}

impl From<BezierCurve> for RawCurve {
    fn from(c: BezierCurve) -> Self {
        RawCurve {
            degree: c.degree(),
            control_points: c.control_points,
        }
    }
}

impl BezierCurve {
    /// Build a curve from 3 (quadratic) or 4 (cubic) finite control points.
    pub fn new(control_points: Vec<Point>) -> Result<Self> {
        if !(3..=4).contains(&control_points.len()) {
            return Err(Error::Domain(format!(
                "a Bézier curve needs 3 or 4 control points, got {}",
                control_points.len()
            )));
        }
        if let Some(p) = control_points.iter().find(|p| !p.is_finite()) {
            return Err(Error::Domain(format!("non-finite control point {p:?}")));
        }
        Ok(BezierCurve { control_points })
    }

    pub fn quadratic(p0: Point, p1: Point, p2: Point) -> Self {
        BezierCurve {
            control_points: vec![p0, p1, p2],
        }
    }

    pub fn cubic(p0: Point, p1: Point, p2: Point, p3: Point) -> Self {
        BezierCurve {
            control_points: vec![p0, p1, p2, p3],
        }
    }

    pub fn degree(&self) -> u8 {
        (self.control_points.len() - 1) as u8
    }

    pub fn control_points(&self) -> &[Point] {
        &self.control_points
    }

    pub fn start(&self) -> Point {
        self.control_points[0]
    }

    pub fn end(&self) -> Point {
        *self.control_points.last().unwrap()
    }

    /// Evaluate in Bernstein form. Returns the end control points exactly at
    /// `t = 0` and `t = 1`.
    pub fn eval(&self, t: f64) -> Result<Point> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!(
                "Bézier parameter {t} outside [0, 1]"
            )));
        }
        if t == 0.0 {
            return Ok(self.start());
        }
        if t == 1.0 {
            return Ok(self.end());
        }
        let s = 1.0 - t;
        let weights: &[f64] = match self.control_points.as_slice() {
            [_, _, _] => &[s * s, 2.0 * s * t, t * t],
            _ => &[s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t],
        };
        let (x, y) = self
            .control_points
            .iter()
            .zip(weights)
            .fold((0.0, 0.0), |(x, y), (p, w)| (x + w * p.x, y + w * p.y));
        Ok(Point::new(x, y))
    }

    /// Split at `t = 0.5` with de Casteljau's construction.
    pub fn split_half(&self) -> (BezierCurve, BezierCurve) {
        let mut rows = vec![self.control_points.clone()];
        while rows.last().unwrap().len() > 1 {
            let prev = rows.last().unwrap();
            let next = prev.windows(2).map(|w| w[0].lerp(w[1], 0.5)).collect();
            rows.push(next);
        }
        let left = rows.iter().map(|r| r[0]).collect();
        let right = rows.iter().rev().map(|r| *r.last().unwrap()).collect();
        (
            BezierCurve {
                control_points: left,
            },
            BezierCurve {
                control_points: right,
            },
        )
    }

    /// Largest distance from an interior control point to the chord.
    ///
    /// The curve lies in the convex hull of its control points and distance
    /// to a segment is convex, so this bounds the distance from every curve
    /// point to the chord.
    fn flatness(&self) -> f64 {
        let (a, b) = (self.start(), self.end());
        self.control_points[1..self.control_points.len() - 1]
            .iter()
            .map(|&p| distance_to_segment(p, a, b))
            .fold(0.0, f64::max)
    }

    /// Recursive midpoint subdivision until each piece is within `tolerance`
    /// of its chord. The polyline starts and ends exactly at the curve's end
    /// control points.
    pub fn flatten(&self, tolerance: f64) -> Polyline {
        assert!(tolerance > 0.0, "flatten tolerance must be positive");
        let mut vertices = vec![self.start()];
        self.flatten_into(tolerance, 0, &mut vertices);
        Polyline::from_vertices_lossy(vertices)
    }

    fn flatten_into(&self, tolerance: f64, depth: u32, out: &mut Vec<Point>) {
        if depth >= MAX_DEPTH || self.flatness() <= tolerance {
            out.push(self.end());
            return;
        }
        let (left, right) = self.split_half();
        left.flatten_into(tolerance, depth + 1, out);
        right.flatten_into(tolerance, depth + 1, out);
    }
}

/// An open polyline with at least two vertices.
///
/// Consecutive vertices are distinct, except for the two-vertex polyline of a
/// zero-length curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Domain(
                "a polyline needs at least two vertices".into(),
            ));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(
                "consecutive polyline vertices coincide".into(),
            ));
        }
        Ok(Polyline { vertices })
    }

    // Drops repeated vertices; keeps both ends for a degenerate input.
    fn from_vertices_lossy(mut vertices: Vec<Point>) -> Self {
        let first = vertices[0];
        let last = *vertices.last().unwrap();
        vertices.dedup();
        if vertices.len() < 2 {
            vertices = vec![first, last];
        }
        Polyline { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.distance(b)).sum()
    }

    /// Distance from `p` to the nearest point of the polyline.
    pub fn distance_to(&self, p: Point) -> f64 {
        self.segments()
            .map(|(a, b)| distance_to_segment(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}
