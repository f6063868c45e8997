//! Wire formats of the command-line surface: JSON input schemas for
//! matrices, polygons, and polynomials, and the JSON report bodies.  Field
//! order is fixed by declaration so identical runs serialize byte for byte.

use serde::{Deserialize, Serialize};

use crate::decision::{Verdict, VerdictReason};
use crate::linalg::{Complex64, ComplexMatrix};
use crate::numrange::{ConvexPolygon, Point, SupportProfile};
use crate::polar::PolarBoundary;
use crate::rigidity::{BivariatePoly, RZVerdict};

/// Matrix file schema: `{"d": n, "entries": [[[re, im], ...], ...]}`,
/// row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixWire {
    /// Dimension.
    pub d: usize,
    /// Rows of `[re, im]` pairs.
    pub entries: Vec<Vec<(f64, f64)>>,
}

impl MatrixWire {
    /// Validates the schema and builds the matrix.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        if self.d == 0 {
            return Err("matrix dimension must be at least 1".into());
        }
        if self.entries.len() != self.d {
            return Err(format!(
                "expected {} rows, found {}",
                self.d,
                self.entries.len()
            ));
        }
        let mut flat = Vec::with_capacity(self.d * self.d);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.d {
                return Err(format!("row {i} has {} entries, expected {}", row.len(), self.d));
            }
            for &(re, im) in row {
                if !re.is_finite() || !im.is_finite() {
                    return Err(format!("non-finite entry in row {i}"));
                }
                flat.push(Complex64::new(re, im));
            }
        }
        ComplexMatrix::new(self.d, flat).map_err(|e| e.to_string())
    }

    /// Wire image of a matrix.
    pub fn of(m: &ComplexMatrix) -> Self {
        let d = m.dim();
        Self {
            d,
            entries: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let z = m.get(i, j);
                            (z.re, z.im)
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Polygon file schema: `{"vertices": [[x, y], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonWire {
    /// Vertex coordinates.
    pub vertices: Vec<(f64, f64)>,
}

impl PolygonWire {
    /// Validates the schema and builds the polygon (vertices are reduced to
    /// their convex hull).
    pub fn to_polygon(&self) -> Result<ConvexPolygon, String> {
        let points: Vec<Point> = self.vertices.iter().map(|&(x, y)| Point::new(x, y)).collect();
        ConvexPolygon::hull_of(&points).map_err(|e| e.to_string())
    }

    /// Wire image of a polygon.
    pub fn of(p: &ConvexPolygon) -> Self {
        Self {
            vertices: p.vertices().iter().map(|v| (v.x, v.y)).collect(),
        }
    }
}

/// Resolved run configuration echoed into every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigWire {
    /// Subcommand name.
    pub command: &'static str,
    /// Input file the command consumed.
    pub input_path: String,
    /// Support/boundary angles.
    pub angles: usize,
    /// Real-zero test directions.
    pub directions: usize,
    /// Relative convergence tolerance.
    pub tol: f64,
    /// Randomized-restart seed.
    pub seed: u64,
    /// Dimension bound of a decision, when one applies.
    pub dim: Option<usize>,
    /// Restart budget of the realization search, when one applies.
    pub restarts: Option<usize>,
    /// JSON output path, when redirected to a file.
    pub json_out: Option<String>,
    /// CSV output path, when requested.
    pub csv_out: Option<String>,
    /// SVG output path, when requested.
    pub svg_out: Option<String>,
}

/// One support sample of a range report.
#[derive(Debug, Clone, Serialize)]
pub struct RangeSampleWire {
    /// Direction angle.
    pub theta: f64,
    /// Support value.
    pub h: f64,
    /// Attaining boundary point.
    pub point: (f64, f64),
}

/// JSON body of `rangeshape range`.
#[derive(Debug, Clone, Serialize)]
pub struct RangeReport {
    /// Echoed configuration.
    pub config: ConfigWire,
    /// Input matrix dimension.
    pub matrix_dim: usize,
    /// Whether the range degenerates to a segment or point.
    pub degenerate: bool,
    /// Segment endpoints when degenerate.
    pub segment: Option<((f64, f64), (f64, f64))>,
    /// Sampled support function with boundary points.
    pub samples: Vec<RangeSampleWire>,
    /// Inscribed boundary polygon.
    pub polygon: PolygonWire,
}

impl RangeReport {
    /// Collects the sample rows of a profile.
    pub fn samples_of(profile: &SupportProfile) -> Vec<RangeSampleWire> {
        profile
            .samples()
            .iter()
            .map(|s| RangeSampleWire {
                theta: s.theta,
                h: s.h,
                point: (s.point.x, s.point.y),
            })
            .collect()
    }
}

/// One radial sample of a polar report; a missing radius marks a recession
/// direction.
#[derive(Debug, Clone, Serialize)]
pub struct PolarSampleWire {
    /// Direction angle.
    pub phi: f64,
    /// Boundary radius, absent when infinite.
    pub radius: Option<f64>,
    /// Boundary point, absent when the radius is infinite.
    pub point: Option<(f64, f64)>,
}

/// JSON body of `rangeshape polar` on a matrix input.
#[derive(Debug, Clone, Serialize)]
pub struct PolarReport {
    /// Echoed configuration.
    pub config: ConfigWire,
    /// Whether every sampled radius is finite.
    pub bounded: bool,
    /// Sampled polar boundary.
    pub samples: Vec<PolarSampleWire>,
    /// Polar polygon when bounded.
    pub polygon: Option<PolygonWire>,
}

impl PolarReport {
    /// Collects the sample rows of a sampled polar boundary.
    pub fn samples_of(boundary: &PolarBoundary) -> Vec<PolarSampleWire> {
        boundary
            .samples()
            .iter()
            .map(|s| PolarSampleWire {
                phi: s.phi,
                radius: s.radius.is_finite().then_some(s.radius),
                point: s.point.map(|p| (p.x, p.y)),
            })
            .collect()
    }
}

/// JSON body of `rangeshape polar` on a polygon input.
#[derive(Debug, Clone, Serialize)]
pub struct PolygonPolarReport {
    /// Echoed configuration.
    pub config: ConfigWire,
    /// Whether the polar is bounded (origin interior to the input).
    pub bounded: bool,
    /// Polar polygon when bounded.
    pub polar: Option<PolygonWire>,
    /// Supporting half-plane coefficients `a*x + b*y <= 1` when unbounded.
    pub constraints: Option<Vec<(f64, f64)>>,
}

/// JSON body of `rangeshape kippenhahn`.
#[derive(Debug, Clone, Serialize)]
pub struct KippenhahnReport {
    /// Echoed configuration.
    pub config: ConfigWire,
    /// Input matrix dimension.
    pub matrix_dim: usize,
    /// Interpolated determinant polynomial.
    pub poly: BivariatePoly,
}

/// One failed direction of a real-zero report.
#[derive(Debug, Clone, Serialize)]
pub struct RzFailureWire {
    /// Direction angle in `[0, pi)`.
    pub phi: f64,
    /// Non-real root witness as `[re, im]`.
    pub root: (f64, f64),
}

/// JSON body of `rangeshape rz-check`.
#[derive(Debug, Clone, Serialize)]
pub struct RzReport {
    /// Echoed configuration.
    pub config: ConfigWire,
    /// Degree of the tested polynomial.
    pub degree: usize,
    /// Number of sampled directions.
    pub directions_tested: usize,
    /// Smallest real-rootedness margin over all directions.
    pub worst_margin: f64,
    /// Aggregate verdict.
    pub verdict: RZVerdict,
    /// Failed directions with root witnesses.
    pub failures: Vec<RzFailureWire>,
    /// Sampling honesty note.
    pub caveat: String,
}

/// JSON body of `rangeshape decide`.
#[derive(Debug, Clone, Serialize)]
pub struct DecideReport {
    /// Echoed configuration.
    pub config: ConfigWire,
    /// The decision.
    pub verdict: Verdict,
    /// Dimension bound the question was asked for.
    pub dimension_bound: usize,
    /// Ground for a decisive verdict.
    pub reason: Option<VerdictReason>,
    /// Witness matrix realizing the set, when constructed.
    pub witness: Option<MatrixWire>,
    /// Honesty notes.
    pub caveats: Vec<String>,
}

/// JSON body of `rangeshape symmetrize`.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetrizeReport {
    /// Echoed configuration.
    pub config: ConfigWire,
    /// Whether the sampled Hausdorff distance met the tolerance.
    pub converged: bool,
    /// Sampled Hausdorff distance between the two ranges.
    pub achieved_distance: f64,
    /// Optimizer runs executed.
    pub restarts_used: usize,
    /// The complex symmetric matrix found.
    pub b: MatrixWire,
}

/// CSV rows of a support profile: `theta,h,x,y`.
pub fn range_csv(profile: &SupportProfile) -> String {
    let mut out = String::from("theta,h,x,y\n");
    for s in profile.samples() {
        out.push_str(&format!("{},{},{},{}\n", s.theta, s.h, s.point.x, s.point.y));
    }
    out
}

/// CSV rows of a polar boundary: `phi,radius,x,y` with `inf` and empty
/// point columns on recession directions.
pub fn polar_csv(boundary: &PolarBoundary) -> String {
    let mut out = String::from("phi,radius,x,y\n");
    for s in boundary.samples() {
        match s.point {
            Some(p) => out.push_str(&format!("{},{},{},{}\n", s.phi, s.radius, p.x, p.y)),
            None => out.push_str(&format!("{},inf,,\n", s.phi)),
        }
    }
    out
}
