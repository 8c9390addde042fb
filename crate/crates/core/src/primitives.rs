//! Random construction of the three markable primitives: lines, dashed
//! lines, and point clusters.
//!
//! Lines: a start point `s` is drawn in the domain, an end point `e` in the
//! disk of `endpoint_radius` around `s` (rejected until inside the domain),
//! and the degree is a fair coin between quadratic and cubic. Interior
//! control points sit on the chord `s → e` at fractions `k / degree` and are
//! each displaced uniformly within `control_deviation`. If any part of the
//! flattened curve leaves the domain, the whole line is redrawn.
//!
//! Clusters: the point count `n` is uniform in `[n_min, n_max]`, the first
//! point is drawn in the domain, and each further point is drawn in the disk
//! of `step_radius` around its predecessor, rejected until inside.

use serde::{Deserialize, Serialize};

use crate::bodymap::{SampleDomain, DEFAULT_MAX_TRIES};
use crate::error::{Error, Result};
use crate::geometry::{
    sample_in_disk, BezierCurve, Point, Polyline, RandomStream, DEFAULT_FLATTEN_TOLERANCE,
};
use crate::raster::DashPattern;

/// Default whole-primitive retry budget.
pub const DEFAULT_MAX_RETRIES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineParams {
    /// Maximum distance from start to end point.
    pub endpoint_radius: f64,
    /// Maximum displacement of an interior control point from its chord point.
    pub control_deviation: f64,
}

impl Default for LineParams {
    fn default() -> Self {
        LineParams {
            endpoint_radius: 200.0,
            control_deviation: 30.0,
        }
    }
}

impl LineParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.endpoint_radius > 0.0
            && self.endpoint_radius.is_finite()
            && self.control_deviation >= 0.0
            && self.control_deviation.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid line parameters {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterParams {
    pub n_min: u32,
    pub n_max: u32,
    /// Maximum distance between consecutive points.
    pub step_radius: f64,
    /// Radius of the disc drawn at each point.
    pub point_radius: f64,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            n_min: 3,
            n_max: 20,
            step_radius: 20.0,
            point_radius: 3.0,
        }
    }
}

impl ClusterParams {
    pub fn validate(&self) -> Result<()> {
        let ok = 1 <= self.n_min
            && self.n_min <= self.n_max
            && self.step_radius >= 0.0
            && self.step_radius.is_finite()
            && self.point_radius >= 1.0
            && self.point_radius.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!(
                "invalid cluster parameters {self:?}"
            )))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimitiveKind {
    Line,
    DashedLine,
    PointCluster,
}

impl PrimitiveKind {
    pub const ALL: [PrimitiveKind; 3] = [
        PrimitiveKind::Line,
        PrimitiveKind::DashedLine,
        PrimitiveKind::PointCluster,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PrimitiveKind::Line => "line",
            PrimitiveKind::DashedLine => "dashed_line",
            PrimitiveKind::PointCluster => "point_cluster",
        }
    }
}

impl std::fmt::Display for PrimitiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A generated mark with its full construction geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Primitive {
    Line {
        curve: BezierCurve,
    },
    DashedLine {
        curve: BezierCurve,
        dash: DashPattern,
    },
    PointCluster {
        points: Vec<Point>,
        point_radius: f64,
    },
}

impl Primitive {
    pub fn kind(&self) -> PrimitiveKind {
        match self {
            Primitive::Line { .. } => PrimitiveKind::Line,
            Primitive::DashedLine { .. } => PrimitiveKind::DashedLine,
            Primitive::PointCluster { .. } => PrimitiveKind::PointCluster,
        }
    }

    pub fn curve(&self) -> Option<&BezierCurve> {
        match self {
            Primitive::Line { curve } | Primitive::DashedLine { curve, .. } => Some(curve),
            Primitive::PointCluster { .. } => None,
        }
    }

    /// Points that must lie inside the generation domain: flattened curve
    /// vertices for lines, every point for clusters.
    pub fn governing_points(&self) -> Vec<Point> {
        match self {
            Primitive::Line { curve } | Primitive::DashedLine { curve, .. } => {
                curve.flatten(DEFAULT_FLATTEN_TOLERANCE).vertices().to_vec()
            }
            Primitive::PointCluster { points, .. } => points.clone(),
        }
    }
}

/// Point at fraction `k / degree` along the chord from `s` to `e`.
pub fn chord_point(s: Point, e: Point, k: u8, degree: u8) -> Point {
    s.lerp(e, f64::from(k) / f64::from(degree))
}

/// Generate a line primitive inside `domain`.
pub fn gen_line(
    domain: &SampleDomain<'_>,
    stream: &mut RandomStream,
    params: &LineParams,
    max_retries: usize,
) -> Result<Primitive> {
    let curve = gen_curve(domain, stream, params, max_retries)?;
    Ok(Primitive::Line { curve })
}

/// Generate a dashed line. Consumes the stream exactly like [`gen_line`].
pub fn gen_dashed_line(
    domain: &SampleDomain<'_>,
    stream: &mut RandomStream,
    params: &LineParams,
    dash: &DashPattern,
    max_retries: usize,
) -> Result<Primitive> {
    dash.validate()?;
    let curve = gen_curve(domain, stream, params, max_retries)?;
    Ok(Primitive::DashedLine { curve, dash: *dash })
}

fn gen_curve(
    domain: &SampleDomain<'_>,
    stream: &mut RandomStream,
    params: &LineParams,
    max_retries: usize,
) -> Result<BezierCurve> {
    params.validate()?;
    for _ in 0..max_retries {
        let s = domain.sample_point(stream, DEFAULT_MAX_TRIES)?;
        let Some(e) = (0..DEFAULT_MAX_TRIES)
            .map(|_| sample_in_disk(stream, s, params.endpoint_radius))
            .find(|&e| domain.contains(e))
        else {
            continue;
        };
        let degree = if stream.coin() { 2 } else { 3 };
        let mut control_points = Vec::with_capacity(degree as usize + 1);
        control_points.push(s);
        for k in 1..degree {
            let on_chord = chord_point(s, e, k, degree);
            control_points.push(sample_in_disk(stream, on_chord, params.control_deviation));
        }
        control_points.push(e);
        let curve = BezierCurve::new(control_points)?;
        if polyline_inside(domain, &curve.flatten(DEFAULT_FLATTEN_TOLERANCE)) {
            return Ok(curve);
        }
    }
    Err(Error::GenerationFailed {
        context: "line".into(),
        reason: format!("no curve fit inside the domain in {max_retries} attempts"),
    })
}

/// Every vertex, and points at most one pixel apart along every segment,
/// lie in the domain.
fn polyline_inside(domain: &SampleDomain<'_>, poly: &Polyline) -> bool {
    poly.vertices().iter().all(|&v| domain.contains(v))
        && poly.segments().all(|(a, b)| {
            let steps = a.distance(b).ceil() as u32;
            (1..steps).all(|i| domain.contains(a.lerp(b, f64::from(i) / f64::from(steps))))
        })
}

/// Generate a point cluster inside `domain`.
pub fn gen_cluster(
    domain: &SampleDomain<'_>,
    stream: &mut RandomStream,
    params: &ClusterParams,
    max_retries: usize,
) -> Result<Primitive> {
    params.validate()?;
    let n = stream.range_inclusive(params.n_min, params.n_max) as usize;
    'attempt: for _ in 0..max_retries {
        let mut points = Vec::with_capacity(n);
        points.push(domain.sample_point(stream, DEFAULT_MAX_TRIES)?);
        while points.len() < n {
            let prev = *points.last().unwrap();
            let next = (0..DEFAULT_MAX_TRIES)
                .map(|_| sample_in_disk(stream, prev, params.step_radius))
                .find(|&p| domain.contains(p));
            match next {
                Some(p) => points.push(p),
                None => continue 'attempt,
            }
        }
        return Ok(Primitive::PointCluster {
            points,
            point_radius: params.point_radius,
        });
    }
    Err(Error::GenerationFailed {
        context: "point cluster".into(),
        reason: format!("no cluster fit inside the domain in {max_retries} attempts"),
    })
}

/// Generate a primitive of the given kind.
pub fn gen_primitive(
    kind: PrimitiveKind,
    domain: &SampleDomain<'_>,
    stream: &mut RandomStream,
    line: &LineParams,
    cluster: &ClusterParams,
    dash: &DashPattern,
    max_retries: usize,
) -> Result<Primitive> {
    match kind {
        PrimitiveKind::Line => gen_line(domain, stream, line, max_retries),
        PrimitiveKind::DashedLine => gen_dashed_line(domain, stream, line, dash, max_retries),
        PrimitiveKind::PointCluster => gen_cluster(domain, stream, cluster, max_retries),
    }
}

/// Hard geometric bounds a primitive must satisfy under `line` / `cluster`.
/// Returns one message per violated bound.
pub fn bound_violations(
    primitive: &Primitive,
    line: &LineParams,
    cluster: &ClusterParams,
) -> Vec<String> {
    let mut out = Vec::new();
    match primitive {
        Primitive::Line { curve } | Primitive::DashedLine { curve, .. } => {
            let (s, e) = (curve.start(), curve.end());
            let span = s.distance(e);
            if span > line.endpoint_radius {
                out.push(format!(
                    "endpoint distance {span} exceeds {}",
                    line.endpoint_radius
                ));
            }
            let degree = curve.degree();
            for k in 1..degree {
                let shift =
                    curve.control_points()[k as usize].distance(chord_point(s, e, k, degree));
                if shift > line.control_deviation {
                    out.push(format!(
                        "control point {k} is {shift} from its chord point (limit {})",
                        line.control_deviation
                    ));
                }
            }
        }
        Primitive::PointCluster { points, .. } => {
            let n = points.len() as u32;
            if n < cluster.n_min || n > cluster.n_max {
                out.push(format!(
                    "cluster has {n} points, outside [{}, {}]",
                    cluster.n_min, cluster.n_max
                ));
            }
            for (i, w) in points.windows(2).enumerate() {
                let step = w[0].distance(w[1]);
                if step > cluster.step_radius {
                    out.push(format!(
                        "cluster step {i} is {step}, exceeds {}",
                        cluster.step_radius
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodymap::{BodyMask, RegionPartition};
    use crate::geometry::derive_stream;

    fn full_mask() -> BodyMask {
        BodyMask::default_mask(1000, 800, 0).unwrap()
    }

    #[test]
    fn straight_when_no_deviation() {
        let mask = full_mask();
        let d = SampleDomain::whole(&mask);
        let params = LineParams {
            control_deviation: 0.0,
            ..LineParams::default()
        };
        let mut s = derive_stream(5, "straight");
        for _ in 0..50 {
            let prim = gen_line(&d, &mut s, &params, DEFAULT_MAX_RETRIES).unwrap();
            let curve = prim.curve().unwrap();
            // Control points lie exactly on the chord, so one flat segment suffices.
            assert_eq!(curve.flatten(DEFAULT_FLATTEN_TOLERANCE).vertices().len(), 2);
            let (a, b) = (curve.start(), curve.end());
            for &c in curve.control_points() {
                assert!(crate::geometry::distance_to_segment(c, a, b) < 1e-9);
            }
        }
    }

    #[test]
    fn dashed_line_shares_line_construction() {
        let mask = full_mask();
        let d = SampleDomain::whole(&mask);
        let p = LineParams::default();
        let dash = DashPattern { on: 12.0, off: 8.0 };
        let line = gen_line(&d, &mut derive_stream(9, "x"), &p, 100).unwrap();
        let dashed = gen_dashed_line(&d, &mut derive_stream(9, "x"), &p, &dash, 100).unwrap();
        assert_eq!(line.curve(), dashed.curve());
        match dashed {
            Primitive::DashedLine { dash: got, .. } => assert_eq!(got, dash),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_cluster_walk() {
        let mask = full_mask();
        let d = SampleDomain::whole(&mask);
        let params = ClusterParams {
            step_radius: 0.0,
            ..ClusterParams::default()
        };
        let prim = gen_cluster(&d, &mut derive_stream(1, "c"), &params, 10).unwrap();
        let Primitive::PointCluster { points, .. } = prim else {
            unreachable!()
        };
        assert!(points.iter().all(|&p| p == points[0]));
    }

    #[test]
    fn forced_cluster_size() {
        let mask = full_mask();
        let d = SampleDomain::whole(&mask);
        let params = ClusterParams {
            n_min: 3,
            n_max: 3,
            ..ClusterParams::default()
        };
        let mut s = derive_stream(1, "three");
        for _ in 0..200 {
            let Primitive::PointCluster { points, .. } =
                gen_cluster(&d, &mut s, &params, 10).unwrap()
            else {
                unreachable!()
            };
            assert_eq!(points.len(), 3);
        }
    }

    #[test]
    fn region_generation_stays_in_region() {
        let mask = BodyMask::default_mask(1000, 800, 40).unwrap();
        let part = RegionPartition::grid(&mask, 3, 4).unwrap();
        for region in 0..12 {
            let d = SampleDomain::region(&mask, &part, region).unwrap();
            let mut s = derive_stream(11, &format!("r{region}"));
            for kind in PrimitiveKind::ALL {
                let prim = gen_primitive(
                    kind,
                    &d,
                    &mut s,
                    &LineParams::default(),
                    &ClusterParams::default(),
                    &DashPattern::default(),
                    DEFAULT_MAX_RETRIES,
                )
                .unwrap();
                assert!(prim.governing_points().iter().all(|&p| d.contains(p)));
            }
        }
    }

    #[test]
    fn impossible_domain_fails() {
        // Two isolated pixels: no curve with 30 px control jitter fits.
        let mut raster = vec![false; 1000 * 10];
        raster[0] = true;
        raster[999] = true;
        let mask = BodyMask::from_raster(1000, 10, raster).unwrap();
        let d = SampleDomain::whole(&mask);
        let err = gen_line(&d, &mut derive_stream(0, "f"), &LineParams::default(), 3).unwrap_err();
        assert!(matches!(
            err,
            Error::GenerationFailed { .. } | Error::SamplingExhausted { .. }
        ));
    }

    #[test]
    fn invalid_params_rejected() {
        let mask = full_mask();
        let d = SampleDomain::whole(&mask);
        let bad = ClusterParams {
            n_min: 5,
            n_max: 4,
            ..ClusterParams::default()
        };
        assert!(matches!(
            gen_cluster(&d, &mut derive_stream(0, "x"), &bad, 1),
            Err(Error::Config(_))
        ));
        let bad = LineParams {
            endpoint_radius: 0.0,
            ..LineParams::default()
        };
        assert!(gen_line(&d, &mut derive_stream(0, "x"), &bad, 1).is_err());
    }

    #[test]
    fn bound_checker_flags_edits() {
        let curve = BezierCurve::quadratic(
            Point::new(0.0, 0.0),
            Point::new(150.0, 0.0),
            Point::new(300.0, 0.0),
        );
        let v = bound_violations(
            &Primitive::Line { curve },
            &LineParams::default(),
            &ClusterParams::default(),
        );
        assert_eq!(v.len(), 1, "{v:?}");
        let cluster = Primitive::PointCluster {
            points: vec![Point::new(0.0, 0.0), Point::new(25.0, 0.0)],
            point_radius: 3.0,
        };
        assert_eq!(
            bound_violations(&cluster, &LineParams::default(), &ClusterParams::default()).len(),
            2
        );
    }

    #[test]
    fn primitive_json_shape() {
        let prim = Primitive::PointCluster {
            points: vec![Point::new(1.5, 2.0)],
            point_radius: 3.0,
        };
        let json = serde_json::to_string(&prim).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"point_cluster","points":[[1.5,2.0]],"point_radius":3.0}"#
        );
        let back: Primitive = serde_json::from_str(&json).unwrap();
        assert_eq!(back, prim);
    }
}
