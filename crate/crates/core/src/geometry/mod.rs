//! Points, random streams, Bézier curves, and disk sampling.

mod bezier;
mod stream;

pub use bezier::{BezierCurve, Polyline, DEFAULT_FLATTEN_TOLERANCE};
pub use stream::{derive_stream, RandomStream};

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in continuous pixel coordinates. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(Error::Domain(format!("non-finite point ({x}, {y})")))
        }
    }

    /// Euclidean distance. Uses `sqrt` only, which is correctly rounded on
    /// every IEEE 754 platform.
    pub fn distance(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    /// `self + t * (other - self)`.
    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl TryFrom<[f64; 2]> for Point {
    type Error = Error;
    fn try_from([x, y]: [f64; 2]) -> Result<Self> {
        Point::try_new(x, y)
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn distance_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Area-uniform sample from the closed disk of `radius` around `center`.
///
/// The angle is uniform on `[0, 2π)` and the radial distance is
/// `radius * sqrt(u)` with `u` uniform on `[0, 1)`. A candidate whose computed
/// distance rounds above `radius` is redrawn, so containment is exact under
/// [`Point::distance`].
pub fn sample_in_disk(stream: &mut RandomStream, center: Point, radius: f64) -> Point {
    assert!(
        radius >= 0.0 && radius.is_finite(),
        "disk radius must be finite and non-negative, got {radius}"
    );
    if radius == 0.0 {
        return center;
    }
    loop {
        let theta = TAU * stream.next_f64();
        let r = radius * stream.next_f64().sqrt();
        let (sin, cos) = theta.sin_cos();
        let p = Point::new(center.x + r * cos, center.y + r * sin);
        if p.distance(center) <= radius {
            return p;
        }
    }
}
