//! Polar duals of planar convex bodies: geometric polygon duality, the
//! matrix-pencil (LMI) description of the polar of a numerical range, the
//! double-polar identity, and Hausdorff distance via support functions.
//!
//! The polar of a set `S` is `{z : <z, y> <= 1 for all y in S}`.  For the
//! numerical range of `A = H + iK` the polar is exactly the spectrahedron
//! `{(xi, eta) : I - xi*H - eta*K >= 0}`, which this module samples by
//! radial search: along direction `phi` the boundary radius is
//! `1 / lambda_max(cos(phi) H + sin(phi) K)`, infinite when that eigenvalue
//! is not positive (the polar recedes exactly when the origin is not
//! interior to the range).

use rayon::prelude::*;

use crate::linalg::{hermitian_eigenvalues, HermitianPair};
use crate::numrange::{ConvexPolygon, Point};
use crate::{Error, Result};

/// Eigenvalue cutoff below which a support direction is treated as a
/// recession direction (infinite polar radius).
const RECESSION_TOL: f64 = 1e-12;

/// Relative tolerance for degenerate polar-vertex geometry.
const GEOM_TOL: f64 = 1e-12;

/// Number of sampled directions used for Hausdorff distances.
const HAUSDORFF_DIRECTIONS: usize = 1440;

/// Closed half-plane `a*x + b*y <= 1` used to describe polar constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    /// Coefficient of `x`.
    pub a: f64,
    /// Coefficient of `y`.
    pub b: f64,
}

/// One sampled polar-boundary direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarSample {
    /// Direction angle in radians, in `[0, 2*pi)`.
    pub phi: f64,
    /// Boundary radius along the direction; `f64::INFINITY` flags a
    /// recession direction.
    pub radius: f64,
    /// Boundary point `radius * (cos(phi), sin(phi))` when the radius is
    /// finite.
    pub point: Option<Point>,
}

/// Sampled boundary of the polar of a numerical range.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarBoundary {
    samples: Vec<PolarSample>,
}

impl PolarBoundary {
    /// Samples ordered by strictly increasing angle.
    pub fn samples(&self) -> &[PolarSample] {
        &self.samples
    }

    /// True when every sampled radius is finite.
    pub fn is_bounded(&self) -> bool {
        self.samples.iter().all(|s| s.radius.is_finite())
    }

    /// Polygon through the boundary points; `None` when any sampled
    /// direction recedes to infinity.
    pub fn polygon(&self) -> Option<ConvexPolygon> {
        if !self.is_bounded() {
            return None;
        }
        let points: Vec<Point> = self
            .samples
            .iter()
            .map(|s| s.point.expect("finite radius carries a point"))
            .collect();
        Some(ConvexPolygon::hull_of(&points).expect("finite non-empty boundary points"))
    }
}

/// Geometric polar of a convex polygon with the origin in its interior.
///
/// Every vertex `v` of `P` contributes the constraint `<z, v> <= 1`; the
/// polar polygon's vertices are the intersections of consecutive constraint
/// lines, taken in the same counterclockwise order.  When the origin is not
/// interior (including all point- and segment-shaped inputs) the polar is
/// unbounded and the constraint list is returned in the error.
pub fn polygon_polar(p: &ConvexPolygon) -> Result<ConvexPolygon> {
    let vertices = p.vertices();
    let constraints: Vec<HalfPlane> = vertices.iter().map(|v| HalfPlane { a: v.x, b: v.y }).collect();
    let m = vertices.len();
    let scale = vertices.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
    let delta_tol = GEOM_TOL * scale * scale;
    if m < 3 {
        return Err(Error::UnboundedPolar { constraints });
    }
    let mut polar: Vec<Point> = Vec::with_capacity(m);
    for k in 0..m {
        let v = vertices[k];
        let w = vertices[(k + 1) % m];
        // The origin is interior iff every consecutive vertex pair subtends
        // it positively; otherwise some constraint direction recedes.
        let delta = v.cross(w);
        if delta <= delta_tol {
            return Err(Error::UnboundedPolar { constraints });
        }
        polar.push(Point::new((w.y - v.y) / delta, (v.x - w.x) / delta));
    }
    // Collinear vertices of P produce coincident intersection points; prune
    // them so the vertex list is valid, but keep the others untouched to
    // preserve exact round-trips.
    let polar_scale = polar.iter().map(|u| u.norm()).fold(0.0_f64, f64::max);
    let mut pruned: Vec<Point> = Vec::with_capacity(polar.len());
    for u in polar {
        if pruned
            .last()
            .is_none_or(|prev| prev.distance(u) > GEOM_TOL * polar_scale)
        {
            pruned.push(u);
        }
    }
    if pruned.len() > 1
        && pruned[0].distance(*pruned.last().expect("non-empty")) <= GEOM_TOL * polar_scale
    {
        pruned.pop();
    }
    ConvexPolygon::new(pruned)
}

/// Membership test for the polar spectrahedron
/// `{(xi, eta) : I - xi*H - eta*K >= 0}`.
///
/// Returns the smallest eigenvalue of the pencil at `z` as a signed margin;
/// `z` is a member when the margin is at least `-1e-10`.
pub fn lmi_membership(pair: &HermitianPair, z: Point) -> Result<(bool, f64)> {
    let pencil = pair.resolvent(z.x, z.y);
    let values = hermitian_eigenvalues(&pencil)?;
    let margin = *values.first().expect("positive dimension");
    Ok((margin >= -1e-10, margin))
}

/// Samples the polar boundary of the numerical range of `H + iK` at
/// `n_angles` equally spaced directions (data-parallel sweep).
///
/// Along direction `phi` the boundary radius is the reciprocal of the
/// largest pencil eigenvalue; non-positive eigenvalues flag recession
/// directions with infinite radius.
pub fn lmi_polar_boundary(pair: &HermitianPair, n_angles: usize) -> Result<PolarBoundary> {
    assert!(n_angles >= 3, "need at least 3 directions");
    let samples = (0..n_angles)
        .into_par_iter()
        .map(|i| {
            let phi = std::f64::consts::TAU * i as f64 / n_angles as f64;
            let pencil = pair.pencil(phi.cos(), phi.sin());
            let values = hermitian_eigenvalues(&pencil)?;
            let top = *values.last().expect("positive dimension");
            let sample = if top > RECESSION_TOL {
                let radius = 1.0 / top;
                PolarSample {
                    phi,
                    radius,
                    point: Some(Point::new(radius * phi.cos(), radius * phi.sin())),
                }
            } else {
                PolarSample {
                    phi,
                    radius: f64::INFINITY,
                    point: None,
                }
            };
            Ok(sample)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PolarBoundary { samples })
}

/// Hausdorff distance between two convex polygons, computed as the largest
/// support-function gap over equally spaced directions (an exact
/// characterization for convex bodies, up to sampling).
pub fn hausdorff(p: &ConvexPolygon, q: &ConvexPolygon) -> f64 {
    (0..HAUSDORFF_DIRECTIONS)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / HAUSDORFF_DIRECTIONS as f64;
            (p.support(theta) - q.support(theta)).abs()
        })
        .fold(0.0, f64::max)
}

/// The polar of the polar, which reproduces any closed convex polygon with
/// the origin interior.
pub fn double_polar(p: &ConvexPolygon) -> Result<ConvexPolygon> {
    polygon_polar(&polygon_polar(p)?)
}
