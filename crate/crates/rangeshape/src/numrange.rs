//! Numerical ranges as support profiles and polygons, matrix centering, and
//! detection of degenerate (point or segment) ranges.
//!
//! The numerical range of `A = H + iK` is sampled through its support
//! function: in direction `theta` the support value is the largest eigenvalue
//! of `cos(theta) H + sin(theta) K`, and the Rayleigh pair
//! `(<Hv,v>, <Kv,v>)` of a top eigenvector `v` is a boundary point attaining
//! it.  Sampling therefore produces an *inscribed* polygon of exactly
//! attained points, so containment tests against it are one-sided.

use rayon::prelude::*;

use crate::linalg::{
    dot_conj, hermitian_eigen, hermitian_eigenvalues, hermitian_parts, jacobi_symmetric,
    Complex64, ComplexMatrix, HermitianPair,
};
use crate::{Error, Result};

/// Relative tolerance for vertex deduplication and convexity slack.
const GEOM_TOL: f64 = 1e-12;

/// Relative Gram-eigenvalue threshold below which `span{I, H, K}` is treated
/// as rank-deficient, i.e. the range degenerates to a point or segment.
const DEGENERACY_TOL: f64 = 1e-10;

/// Planar point `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    /// Horizontal coordinate (real part).
    pub x: f64,
    /// Vertical coordinate (imaginary part).
    pub y: f64,
}

impl Point {
    /// Builds a point.
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Euclidean inner product.
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Euclidean norm.
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Euclidean distance to another point.
    pub fn distance(self, other: Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Cross product `self.x * other.y - self.y * other.x`.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }
}

impl std::ops::Sub for Point {
    type Output = Point;

    fn sub(self, other: Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y)
    }
}

/// Convex polygon with counterclockwise vertices.
///
/// One vertex represents a point and two a segment, so every compact convex
/// planar set produced by the toolkit has a polygon form.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Wraps a counterclockwise vertex list after validating convexity
    /// (consecutive-edge cross products may dip no lower than
    /// `-1e-12 * scale`) and pairwise vertex distinctness.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPolygon("at least one vertex required".into()));
        }
        if vertices
            .iter()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(Error::InvalidPolygon("non-finite vertex".into()));
        }
        let span = coordinate_span(&vertices);
        let m = vertices.len();
        for i in 0..m {
            for j in (i + 1)..m {
                if vertices[i].distance(vertices[j]) <= GEOM_TOL * span {
                    return Err(Error::InvalidPolygon(format!(
                        "vertices {i} and {j} coincide"
                    )));
                }
            }
        }
        if m >= 3 {
            let cross_tol = GEOM_TOL * span * span;
            for i in 0..m {
                let a = vertices[i];
                let b = vertices[(i + 1) % m];
                let c = vertices[(i + 2) % m];
                if (b - a).cross(c - b) < -cross_tol {
                    return Err(Error::InvalidPolygon(format!(
                        "vertices are not in counterclockwise convex order at index {i}"
                    )));
                }
            }
        }
        Ok(Self { vertices })
    }

    /// Convex hull of arbitrary points (monotone chain), deduplicating
    /// near-identical points and pruning collinear vertices.
    pub fn hull_of(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPolygon("no points to hull".into()));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite point".into()));
        }
        let span = coordinate_span(points);
        let dedup_tol = GEOM_TOL * span;
        let cross_tol = GEOM_TOL * span * span;

        let mut sorted = points.to_vec();
        sorted.sort_by(|p, q| (p.x, p.y).partial_cmp(&(q.x, q.y)).expect("finite points"));
        let mut distinct: Vec<Point> = Vec::with_capacity(sorted.len());
        for p in sorted {
            if distinct.last().is_none_or(|q| p.distance(*q) > dedup_tol) {
                distinct.push(p);
            }
        }
        if distinct.len() == 1 {
            return Ok(Self { vertices: distinct });
        }

        // Lower then upper chain; collinear (within tolerance) middle points
        // are popped so the hull is strictly convex.
        let chain = |iter: &mut dyn Iterator<Item = Point>| -> Vec<Point> {
            let mut out: Vec<Point> = Vec::new();
            for p in iter {
                while out.len() >= 2 {
                    let a = out[out.len() - 2];
                    let b = out[out.len() - 1];
                    if (b - a).cross(p - b) <= cross_tol {
                        out.pop();
                    } else {
                        break;
                    }
                }
                out.push(p);
            }
            out
        };
        let mut lower = chain(&mut distinct.iter().copied());
        let mut upper = chain(&mut distinct.iter().rev().copied());
        // Each chain ends where the other begins; drop both closing points.
        lower.pop();
        upper.pop();
        let mut vertices = lower;
        vertices.extend(upper);
        Self::new(vertices)
    }

    /// Counterclockwise vertices.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Support value `max over vertices of x cos(theta) + y sin(theta)`.
    pub fn support(&self, theta: f64) -> f64 {
        let u = Point::new(theta.cos(), theta.sin());
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest pairwise vertex distance (0 for a single point).
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                best = best.max(p.distance(*q));
            }
        }
        best
    }

    /// Vertex centroid; strictly interior for polygons with interior because
    /// every vertex carries positive weight.
    pub fn centroid(&self) -> Point {
        let m = self.vertices.len() as f64;
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Point::new(sx / m, sy / m)
    }

    /// The polygon shifted by `(dx, dy)`.
    pub fn translate(&self, dx: f64, dy: f64) -> Self {
        Self {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point::new(p.x + dx, p.y + dy))
                .collect(),
        }
    }

    /// Whether `p` lies in the polygon inflated by the absolute margin
    /// `inflate` (signed edge distances for solid polygons, segment distance
    /// for degenerate ones).
    pub fn contains(&self, p: Point, inflate: f64) -> bool {
        let m = self.vertices.len();
        if m == 1 {
            return p.distance(self.vertices[0]) <= inflate;
        }
        if m == 2 || self.signed_area() <= GEOM_TOL * self.diameter().powi(2) {
            // Segment (or numerically flat polygon): use distance to the
            // diameter-realizing segment.
            let (a, b) = self.extreme_pair();
            return segment_distance(a, b, p) <= inflate;
        }
        for i in 0..m {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            let e = b - a;
            let len = e.norm();
            // Outward normal of a counterclockwise edge.
            let n = Point::new(e.y / len, -e.x / len);
            if (p - a).dot(n) > inflate {
                return false;
            }
        }
        true
    }

    /// Twice-signed-area shoelace sum divided by 2 (positive for
    /// counterclockwise vertices).
    fn signed_area(&self) -> f64 {
        let m = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..m {
            acc += self.vertices[i].cross(self.vertices[(i + 1) % m]);
        }
        0.5 * acc
    }

    /// The two vertices realizing the diameter.
    fn extreme_pair(&self) -> (Point, Point) {
        let mut best = (self.vertices[0], self.vertices[0], 0.0_f64);
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i..] {
                let dist = p.distance(*q);
                if dist >= best.2 {
                    best = (*p, *q, dist);
                }
            }
        }
        (best.0, best.1)
    }
}

/// Distance from `p` to the segment `[a, b]`.
fn segment_distance(a: Point, b: Point, p: Point) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.distance(Point::new(a.x + t * e.x, a.y + t * e.y))
}

/// Largest coordinate spread of a point set (length scale for tolerances).
fn coordinate_span(points: &[Point]) -> f64 {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for p in points {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    ((max_x - min_x).max(max_y - min_y)).max(f64::MIN_POSITIVE)
}

/// One sampled support direction: angle, support value, and an attaining
/// boundary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportSample {
    /// Direction angle in radians, in `[0, 2*pi)`.
    pub theta: f64,
    /// Support value of the range in that direction.
    pub h: f64,
    /// Boundary point attaining the support value.
    pub point: Point,
}

/// Sampled support function of a numerical range, with the boundary points
/// attaining each support value.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportProfile {
    samples: Vec<SupportSample>,
    matrix_dim: usize,
}

impl SupportProfile {
    /// Samples ordered by strictly increasing angle in `[0, 2*pi)`.
    pub fn samples(&self) -> &[SupportSample] {
        &self.samples
    }

    /// Dimension of the matrix the profile was computed from.
    pub fn matrix_dim(&self) -> usize {
        self.matrix_dim
    }

    /// Inscribed polygon through the attained boundary points, with
    /// duplicate and collinear pruning.
    pub fn polygon(&self) -> ConvexPolygon {
        let points: Vec<Point> = self.samples.iter().map(|s| s.point).collect();
        ConvexPolygon::hull_of(&points).expect("boundary points are finite and non-empty")
    }
}

/// Support value and attaining boundary point of the numerical range of
/// `H + iK` in direction `theta`.
///
/// The support value is the largest eigenvalue of
/// `cos(theta) H + sin(theta) K`; a top eigenvector's Rayleigh pair is a
/// boundary point attaining it.
pub fn support_point(pair: &HermitianPair, theta: f64) -> Result<(f64, Point)> {
    let pencil = pair.pencil(theta.cos(), theta.sin());
    let eig = hermitian_eigen(&pencil)?;
    let h = *eig.values.last().expect("positive dimension");
    let v = eig.vectors.last().expect("positive dimension");
    let x = dot_conj(v, &pair.h().apply(v)).re;
    let y = dot_conj(v, &pair.k().apply(v)).re;
    Ok((h, Point::new(x, y)))
}

/// Samples the numerical range of `A` at `n_angles` equally spaced support
/// directions (data-parallel sweep).
pub fn numerical_range(a: &ComplexMatrix, n_angles: usize) -> Result<SupportProfile> {
    assert!(n_angles >= 3, "need at least 3 support directions");
    let pair = hermitian_parts(a);
    let samples = (0..n_angles)
        .into_par_iter()
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / n_angles as f64;
            support_point(&pair, theta).map(|(h, point)| SupportSample { theta, h, point })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SupportProfile {
        samples,
        matrix_dim: a.dim(),
    })
}

/// Centers `A` at `lambda = trace(A)/d`, returning `(lambda, A - lambda*I)`.
///
/// For non-degenerate `A` the origin is interior to the centered range;
/// [`interior_margin`] produces the sampled certificate.
pub fn center_matrix(a: &ComplexMatrix) -> (Complex64, ComplexMatrix) {
    let lambda = a.trace() / a.dim() as f64;
    (lambda, a.add_scaled_identity(-lambda))
}

/// Minimum sampled support value of the numerical range of `A` over
/// `n_angles` directions; positive iff the origin is interior to every
/// sampled supporting half-plane.
pub fn interior_margin(a: &ComplexMatrix, n_angles: usize) -> Result<f64> {
    assert!(n_angles >= 3, "need at least 3 support directions");
    let pair = hermitian_parts(a);
    let mut worst = f64::INFINITY;
    for i in 0..n_angles {
        let theta = std::f64::consts::TAU * i as f64 / n_angles as f64;
        let pencil = pair.pencil(theta.cos(), theta.sin());
        let values = hermitian_eigenvalues(&pencil)?;
        worst = worst.min(*values.last().expect("positive dimension"));
    }
    Ok(worst)
}

/// Classification of a matrix whose numerical range may degenerate to a
/// point or line segment.
#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    /// True when `span{I, H, K}` has dimension at most 2, i.e. `A` has the
    /// form `alpha R + beta I` with `R` hermitian.
    pub degenerate: bool,
    /// Complex slope of the segment (`0` for a point, or when not
    /// degenerate).
    pub alpha: Complex64,
    /// Center `trace(A)/d`; for degenerate `A` the affine offset in
    /// `alpha R + beta I`.
    pub beta: Complex64,
    /// Unit-Frobenius traceless hermitian direction `R` (absent for points
    /// and non-degenerate matrices).
    pub direction: Option<ComplexMatrix>,
    /// Extreme points of the segment, ordered by the spectrum of `R`
    /// (equal for a point range; absent when not degenerate).
    pub segment_endpoints: Option<(Point, Point)>,
}

/// Detects point/segment-shaped numerical ranges.
///
/// `A` degenerates exactly when the Gram matrix of `{I, H, K}` under
/// `<X, Y> = trace(X Y*)` is singular; in that case `A = alpha R + beta I`
/// for a traceless unit-norm hermitian `R`, recovered from the traceless
/// parts of `H` and `K`, and the range is the segment joining
/// `beta + alpha * lambda` over the extreme eigenvalues `lambda` of `R`.
pub fn degeneracy_report(a: &ComplexMatrix) -> Result<DegeneracyReport> {
    let d = a.dim();
    let pair = hermitian_parts(a);
    let (h, k) = (pair.h(), pair.k());

    let tr_h = h.trace().re;
    let tr_k = k.trace().re;
    let gram = [
        d as f64,
        tr_h,
        tr_k,
        tr_h,
        trace_product(h, h),
        trace_product(h, k),
        tr_k,
        trace_product(h, k),
        trace_product(k, k),
    ];
    let (gram_eigs, _) = jacobi_symmetric(3, &gram, false)?;
    let gram_scale = gram[0] + gram[4] + gram[8];
    let beta = Complex64::new(tr_h / d as f64, tr_k / d as f64);

    if gram_eigs[0] > DEGENERACY_TOL * gram_scale {
        return Ok(DegeneracyReport {
            degenerate: false,
            alpha: Complex64::default(),
            beta,
            direction: None,
            segment_endpoints: None,
        });
    }

    // Traceless parts; when degenerate they are parallel to one hermitian
    // direction R, fixed to unit Frobenius norm with sign gauge
    // Re(alpha) > 0 (or Im(alpha) > 0 when Re(alpha) vanishes).
    let h0 = h.add_scaled_identity(Complex64::new(-beta.re, 0.0));
    let k0 = k.add_scaled_identity(Complex64::new(-beta.im, 0.0));
    let (nh, nk) = (h0.frobenius_norm(), k0.frobenius_norm());
    let scale = a.frobenius_norm() + 1.0;
    if nh.max(nk) <= GEOM_TOL * scale {
        let point = Point::new(beta.re, beta.im);
        return Ok(DegeneracyReport {
            degenerate: true,
            alpha: Complex64::default(),
            beta,
            direction: None,
            segment_endpoints: Some((point, point)),
        });
    }

    let base = if nh >= nk { &h0 } else { &k0 };
    let mut r = base.scale(Complex64::new(1.0 / base.frobenius_norm(), 0.0));
    let mut re_alpha = trace_product(&h0, &r);
    let mut im_alpha = trace_product(&k0, &r);
    let flip = if re_alpha.abs() > GEOM_TOL * scale {
        re_alpha < 0.0
    } else {
        im_alpha < 0.0
    };
    if flip {
        r = r.scale(Complex64::new(-1.0, 0.0));
        re_alpha = -re_alpha;
        im_alpha = -im_alpha;
    }
    let alpha = Complex64::new(re_alpha, im_alpha);

    let spectrum = hermitian_eigenvalues(&r)?;
    let low = beta + alpha * spectrum.first().expect("positive dimension");
    let high = beta + alpha * spectrum.last().expect("positive dimension");
    Ok(DegeneracyReport {
        degenerate: true,
        alpha,
        beta,
        direction: Some(r),
        segment_endpoints: Some((Point::new(low.re, low.im), Point::new(high.re, high.im))),
    })
}

/// `trace(X Y)` for hermitian `X`, `Y` (real by symmetry).
fn trace_product(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let d = x.dim();
    let mut acc = Complex64::default();
    for i in 0..d {
        for j in 0..d {
            acc += x.get(i, j) * y.get(j, i);
        }
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn jordan_block() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn polygon_constructor_validates() {
        let square = vec![
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
        ];
        assert!(ConvexPolygon::new(square.clone()).is_ok());
        // Clockwise ordering is rejected.
        let clockwise: Vec<Point> = square.iter().rev().copied().collect();
        assert!(matches!(
            ConvexPolygon::new(clockwise),
            Err(Error::InvalidPolygon(_))
        ));
        // A reflex vertex is rejected.
        assert!(matches!(
            ConvexPolygon::new(vec![
                Point::new(0.0, 0.0),
                Point::new(2.0, 0.0),
                Point::new(1.0, 0.1),
                Point::new(2.0, 2.0),
            ]),
            Err(Error::InvalidPolygon(_))
        ));
        // Repeated vertices are rejected.
        assert!(matches!(
            ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(0.0, 0.0)]),
            Err(Error::InvalidPolygon(_))
        ));
        assert!(matches!(
            ConvexPolygon::new(vec![]),
            Err(Error::InvalidPolygon(_))
        ));
    }

    #[test]
    fn hull_recovers_square_from_noisy_cloud() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut points = vec![
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
        ];
        for _ in 0..200 {
            points.push(Point::new(rng.gen_range(-0.99..0.99), rng.gen_range(-0.99..0.99)));
        }
        let hull = ConvexPolygon::hull_of(&points).unwrap();
        assert_eq!(hull.vertices().len(), 4);
        assert!((hull.diameter() - 8.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hull_of_degenerate_inputs() {
        // All-identical points collapse to one vertex.
        let point = ConvexPolygon::hull_of(&[Point::new(2.0, 3.0); 5]).unwrap();
        assert_eq!(point.vertices(), &[Point::new(2.0, 3.0)]);
        // Collinear points collapse to the two extremes.
        let collinear: Vec<Point> = (0..7).map(|i| Point::new(i as f64, 2.0 * i as f64)).collect();
        let segment = ConvexPolygon::hull_of(&collinear).unwrap();
        assert_eq!(segment.vertices().len(), 2);
        assert!(segment.vertices().contains(&Point::new(0.0, 0.0)));
        assert!(segment.vertices().contains(&Point::new(6.0, 12.0)));
        // Midpoints of edges are pruned as collinear.
        let with_midpoints = ConvexPolygon::hull_of(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        assert_eq!(with_midpoints.vertices().len(), 4);
    }

    #[test]
    fn polygon_geometry_helpers() {
        let square = ConvexPolygon::new(vec![
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
        ])
        .unwrap();
        assert!((square.support(0.0) - 1.0).abs() < 1e-15);
        assert!((square.support(std::f64::consts::FRAC_PI_4) - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((square.diameter() - 8.0_f64.sqrt()).abs() < 1e-12);
        let centroid = square.centroid();
        assert!(centroid.norm() < 1e-15);
        let shifted = square.translate(3.0, -2.0);
        assert_eq!(shifted.centroid(), Point::new(3.0, -2.0));
        assert!(square.contains(Point::new(0.3, -0.9), 0.0));
        assert!(!square.contains(Point::new(1.2, 0.0), 0.1));
        assert!(square.contains(Point::new(1.05, 0.0), 0.1));
    }

    #[test]
    fn segment_polygon_containment() {
        let segment = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        assert!(segment.contains(Point::new(0.5, 0.0), 1e-12));
        assert!(segment.contains(Point::new(0.5, 0.01), 0.02));
        assert!(!segment.contains(Point::new(-0.5, 0.0), 0.1));
        let point = ConvexPolygon::new(vec![Point::new(2.0, 1.0)]).unwrap();
        assert!(point.contains(Point::new(2.0, 1.0), 0.0));
        assert!(!point.contains(Point::new(2.1, 1.0), 0.05));
    }

    #[test]
    fn support_point_identity_matrix() {
        // W(I) = {1}: h = cos(theta), point = (1, 0) for every direction.
        let pair = hermitian_parts(&ComplexMatrix::identity(3));
        for theta in [0.0, 0.7, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 5.0] {
            let (h, point) = support_point(&pair, theta).unwrap();
            assert!((h - theta.cos()).abs() < 1e-12);
            assert!(point.distance(Point::new(1.0, 0.0)) < 1e-12);
        }
    }

    #[test]
    fn support_point_jordan_block_is_half() {
        let pair = hermitian_parts(&jordan_block());
        for i in 0..40 {
            let theta = std::f64::consts::TAU * i as f64 / 40.0;
            let (h, point) = support_point(&pair, theta).unwrap();
            assert!((h - 0.5).abs() < 1e-12, "h({theta}) = {h}");
            // The attaining point sits on the supporting line.
            let proj = point.dot(Point::new(theta.cos(), theta.sin()));
            assert!((proj - h).abs() < 1e-9);
        }
    }

    #[test]
    fn support_point_diagonal_matrix() {
        let pair = hermitian_parts(&ComplexMatrix::from_diag(&[c(0.0, 0.0), c(1.0, 0.0)]));
        let (h, point) = support_point(&pair, 0.0).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        assert!(point.distance(Point::new(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn numerical_range_of_jordan_block_is_half_disk_boundary() {
        let profile = numerical_range(&jordan_block(), 360).unwrap();
        assert_eq!(profile.matrix_dim(), 2);
        assert_eq!(profile.samples().len(), 360);
        for s in profile.samples() {
            assert!((s.h - 0.5).abs() < 1e-10);
            assert!((s.point.norm() - 0.5).abs() < 1e-9);
        }
        let polygon = profile.polygon();
        assert!(polygon.vertices().len() > 300);
        for v in polygon.vertices() {
            assert!((v.norm() - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn numerical_range_of_real_diagonal_collapses_to_segment() {
        let a = ComplexMatrix::from_diag(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let profile = numerical_range(&a, 360).unwrap();
        for s in profile.samples() {
            assert!(s.point.y.abs() <= 1e-9, "width {}", s.point.y);
        }
        let polygon = profile.polygon();
        assert_eq!(polygon.vertices().len(), 2);
        assert!(polygon.contains(Point::new(0.0, 0.0), 1e-9));
        assert!(polygon.contains(Point::new(1.0, 0.0), 1e-9));
    }

    #[test]
    fn numerical_range_of_zero_matrix_is_origin() {
        let profile = numerical_range(&ComplexMatrix::zeros(3), 90).unwrap();
        for s in profile.samples() {
            assert_eq!(s.h, 0.0);
            assert_eq!(s.point, Point::new(0.0, 0.0));
        }
        assert_eq!(profile.polygon().vertices().len(), 1);
    }

    #[test]
    fn profile_angles_strictly_increase_and_points_attain_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_matrix(&mut rng, 4);
        let profile = numerical_range(&a, 97).unwrap();
        for w in profile.samples().windows(2) {
            assert!(w[0].theta < w[1].theta);
        }
        assert!(profile.samples()[0].theta == 0.0);
        assert!(profile.samples().last().unwrap().theta < std::f64::consts::TAU);
        for s in profile.samples() {
            let u = Point::new(s.theta.cos(), s.theta.sin());
            assert!((s.point.dot(u) - s.h).abs() < 1e-9);
        }
    }

    #[test]
    fn profile_support_is_convex_consistent() {
        // Neighboring supporting lines intersect outside (or on) the current
        // supporting line: the outer polytope dominates the inner values.
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let a = random_matrix(&mut rng, 3);
        let profile = numerical_range(&a, 64).unwrap();
        let n = profile.samples().len();
        for j in 0..n {
            let prev = profile.samples()[(j + n - 1) % n];
            let next = profile.samples()[(j + 1) % n];
            let cur = profile.samples()[j];
            // Intersection of the two neighbor supporting lines.
            let (a1, b1, c1) = (prev.theta.cos(), prev.theta.sin(), prev.h);
            let (a2, b2, c2) = (next.theta.cos(), next.theta.sin(), next.h);
            let det = a1 * b2 - a2 * b1;
            assert!(det.abs() > 1e-12, "neighbor directions are not transversal");
            let x = (c1 * b2 - c2 * b1) / det;
            let y = (a1 * c2 - a2 * c1) / det;
            let outer = x * cur.theta.cos() + y * cur.theta.sin();
            assert!(outer >= cur.h - 1e-9);
        }
    }

    #[test]
    fn translation_equivariance_of_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 3);
            let lambda = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let shifted = a.add_scaled_identity(lambda);
            let base = numerical_range(&a, 48).unwrap();
            let moved = numerical_range(&shifted, 48).unwrap();
            for (s, t) in base.samples().iter().zip(moved.samples()) {
                let expected = s.h + lambda.re * s.theta.cos() + lambda.im * s.theta.sin();
                assert!((t.h - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rotation_equivariance_of_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let a = random_matrix(&mut rng, 3);
        let n = 48;
        let shift = 5; // rotate by 5 sample steps
        let phi = std::f64::consts::TAU * shift as f64 / n as f64;
        let rotated = a.scale(Complex64::from_polar(1.0, phi));
        let base = numerical_range(&a, n).unwrap();
        let moved = numerical_range(&rotated, n).unwrap();
        for j in 0..n {
            // h_{e^{i phi} A}(theta_j) = h_A(theta_{j - shift}).
            let expected = base.samples()[(j + n - shift) % n].h;
            assert!((moved.samples()[j].h - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn unitary_invariance_of_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for d in 2..=4 {
            let a = random_matrix(&mut rng, d);
            // Orthonormalize a random matrix into a unitary.
            let raw = random_matrix(&mut rng, d);
            let mut cols: Vec<Vec<Complex64>> =
                (0..d).map(|j| (0..d).map(|i| raw.get(i, j)).collect()).collect();
            for j in 0..d {
                for prev in 0..j {
                    let (left, right) = cols.split_at_mut(j);
                    let coef = dot_conj(&left[prev], &right[0]);
                    for (x, &g) in right[0].iter_mut().zip(&left[prev]) {
                        *x -= coef * g;
                    }
                }
                let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for x in &mut cols[j] {
                    *x /= norm;
                }
            }
            let u = ComplexMatrix::from_fn(d, |i, j| cols[j][i]);
            let conj = u.adjoint().matmul(&a).matmul(&u);
            let p1 = numerical_range(&a, 180).unwrap();
            let p2 = numerical_range(&conj, 180).unwrap();
            for (s, t) in p1.samples().iter().zip(p2.samples()) {
                assert!((s.h - t.h).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn spectrum_of_normal_matrix_is_contained() {
        // Normal matrix with eigenvalues on a circle: every eigenvalue is a
        // hull vertex with a wide normal cone, so the inscribed polygon must
        // capture them all.
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let eigs: Vec<Complex64> = (0..5)
            .map(|i| {
                let angle = std::f64::consts::TAU * i as f64 / 5.0 + rng.gen_range(-0.2..0.2);
                Complex64::from_polar(rng.gen_range(0.9..1.1), angle)
            })
            .collect();
        let raw = random_matrix(&mut rng, 5);
        let mut cols: Vec<Vec<Complex64>> =
            (0..5).map(|j| (0..5).map(|i| raw.get(i, j)).collect()).collect();
        for j in 0..5 {
            for prev in 0..j {
                let (left, right) = cols.split_at_mut(j);
                let coef = dot_conj(&left[prev], &right[0]);
                for (x, &g) in right[0].iter_mut().zip(&left[prev]) {
                    *x -= coef * g;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for x in &mut cols[j] {
                *x /= norm;
            }
        }
        let u = ComplexMatrix::from_fn(5, |i, j| cols[j][i]);
        let a = u
            .adjoint()
            .matmul(&ComplexMatrix::from_diag(&eigs))
            .matmul(&u);
        let polygon = numerical_range(&a, 720).unwrap().polygon();
        for z in &eigs {
            assert!(
                polygon.contains(Point::new(z.re, z.im), 1e-8),
                "eigenvalue {z} escaped the polygon"
            );
        }
    }

    #[test]
    fn doubling_angles_grows_the_inscribed_polygon() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let a = random_matrix(&mut rng, 4);
        let coarse = numerical_range(&a, 90).unwrap().polygon();
        let fine = numerical_range(&a, 180).unwrap().polygon();
        for i in 0..720 {
            let theta = std::f64::consts::TAU * i as f64 / 720.0;
            assert!(coarse.support(theta) <= fine.support(theta) + 1e-9);
        }
    }

    #[test]
    fn center_matrix_examples() {
        let (lambda, a0) = center_matrix(&ComplexMatrix::from_diag(&[c(0.0, 0.0), c(2.0, 0.0)]));
        assert_eq!(lambda, c(1.0, 0.0));
        assert_eq!(a0, ComplexMatrix::from_diag(&[c(-1.0, 0.0), c(1.0, 0.0)]));

        let (lambda, a0) = center_matrix(&jordan_block());
        assert_eq!(lambda, c(0.0, 0.0));
        assert_eq!(a0, jordan_block());

        let a = ComplexMatrix::from_diag(&[c(1.0, 1.0), c(2.0, 1.0), c(3.0, 1.0)]);
        let (lambda, _) = center_matrix(&a);
        assert!((lambda - c(2.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn centered_nondegenerate_matrix_has_interior_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 3);
            let (_, a0) = center_matrix(&a);
            let margin = interior_margin(&a0, 64).unwrap();
            assert!(margin > 0.0, "margin {margin}");
        }
        // Degenerate counterexample: a centered hermitian matrix leaves the
        // origin on the boundary of its segment range.
        let (_, a0) = center_matrix(&ComplexMatrix::from_diag(&[c(0.0, 0.0), c(1.0, 0.0)]));
        let margin = interior_margin(&a0, 64).unwrap();
        assert!(margin.abs() < 1e-12);
    }

    #[test]
    fn degeneracy_of_hermitian_matrix() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0)],
            vec![c(1.0, 1.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let report = degeneracy_report(&a).unwrap();
        assert!(report.degenerate);
        let spectrum = hermitian_eigenvalues(&a).unwrap();
        let (low, high) = report.segment_endpoints.unwrap();
        assert!((low.x - spectrum[0]).abs() < 1e-10);
        assert!(low.y.abs() < 1e-12);
        assert!((high.x - spectrum[1]).abs() < 1e-10);
        assert!(high.y.abs() < 1e-12);
    }

    #[test]
    fn degeneracy_of_affine_hermitian_family() {
        // A = (1+i) diag(1,2) + 5I has the segment range [6+i, 7+2i].
        let a = ComplexMatrix::from_diag(&[c(6.0, 1.0), c(7.0, 2.0)]);
        let report = degeneracy_report(&a).unwrap();
        assert!(report.degenerate);
        assert!((report.beta - c(6.5, 1.5)).norm() < 1e-12);
        let (low, high) = report.segment_endpoints.unwrap();
        assert!(low.distance(Point::new(6.0, 1.0)) < 1e-10);
        assert!(high.distance(Point::new(7.0, 2.0)) < 1e-10);
        // Reconstruction alpha*R + beta*I matches A.
        let r = report.direction.unwrap();
        let rebuilt = r.scale(report.alpha).add_scaled_identity(report.beta);
        assert!(rebuilt.sub(&a).frobenius_norm() <= 1e-8 * a.frobenius_norm());
    }

    #[test]
    fn degeneracy_of_scalar_multiple_of_identity() {
        let a = ComplexMatrix::from_diag(&[c(3.0, -2.0), c(3.0, -2.0)]);
        let report = degeneracy_report(&a).unwrap();
        assert!(report.degenerate);
        assert_eq!(report.alpha, c(0.0, 0.0));
        let (low, high) = report.segment_endpoints.unwrap();
        assert_eq!(low, high);
        assert!(low.distance(Point::new(3.0, -2.0)) < 1e-12);
    }

    #[test]
    fn jordan_block_is_not_degenerate() {
        let report = degeneracy_report(&jordan_block()).unwrap();
        assert!(!report.degenerate);
        assert!(report.segment_endpoints.is_none());
    }

    #[test]
    fn random_segment_matrices_are_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..10 {
            let d = rng.gen_range(2..=5);
            // Random hermitian R and complex alpha, beta.
            let raw = random_matrix(&mut rng, d);
            let r = ComplexMatrix::from_fn(d, |i, j| (raw.get(i, j) + raw.get(j, i).conj()) * 0.5);
            let alpha = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let beta = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let a = r.scale(alpha).add_scaled_identity(beta);
            let report = degeneracy_report(&a).unwrap();
            assert!(report.degenerate);
            // Reconstruction residual stays small in the reported gauge.
            if let Some(dir) = &report.direction {
                let rebuilt = dir.scale(report.alpha).add_scaled_identity(report.beta);
                assert!(rebuilt.sub(&a).frobenius_norm() <= 1e-8 * (1.0 + a.frobenius_norm()));
            }
        }
    }
}
