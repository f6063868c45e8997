//! Bivariate polynomial machinery: interpolation of the pencil determinant
//! `det(I - xi*H - eta*K)`, restriction to lines through the origin,
//! real-rootedness certification, and the real-zero / rigid-convexity tests.
//!
//! Real-rootedness of a univariate polynomial is certified through the
//! Hermite criterion: the Hankel matrix of its root power sums is positive
//! semidefinite exactly when all roots are real.  That reduces every
//! certificate in this module to a small symmetric eigenproblem and yields a
//! signed margin rather than a yes/no answer.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{
    complex_determinant, hermitian_parts, jacobi_symmetric, least_squares, Complex64,
    ComplexMatrix, HermitianPair,
};
use crate::{Error, Result};

/// Normalized positive-semidefiniteness tolerance of the Hermite criterion.
pub const TOL_PSD: f64 = 1e-8;

/// Margins in `(-10 * TOL_PSD, -TOL_PSD)` are ambiguous: too negative to
/// certify, not negative enough to refute.
pub const AMBIGUOUS_FACTOR: f64 = 10.0;

/// Relative threshold below which trailing coefficients are treated as zero
/// (degree drop).
const DEGREE_DROP_TOL: f64 = 1e-9;

/// Enforced relative residual of the determinant interpolation.
const FIT_RESIDUAL_TOL: f64 = 1e-8;

/// Real bivariate polynomial `sum c_{jk} xi^j eta^k` of bounded total
/// degree, stored densely over the triangle `j + k <= degree` in graded
/// order (by total degree, then by the power of `eta`).
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePoly {
    degree: usize,
    coeffs: Vec<f64>,
}

/// Number of monomials of total degree at most `d`.
fn triangle_len(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Storage index of the monomial `xi^j eta^k` in graded order.
fn monomial_index(j: usize, k: usize) -> usize {
    let t = j + k;
    t * (t + 1) / 2 + k
}

impl BivariatePoly {
    /// Wraps dense triangular coefficients (graded order, length
    /// `(degree+1)(degree+2)/2`), trimming the stored degree down to the
    /// highest total degree that carries a coefficient above
    /// `1e-9 * max|c|`.
    pub fn new(degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != triangle_len(degree) {
            return Err(Error::InvalidPolynomial(format!(
                "expected {} coefficients for total degree {degree}, got {}",
                triangle_len(degree),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
        }
        let max_mag = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let tol = DEGREE_DROP_TOL * max_mag;
        let mut effective = 0;
        for t in (0..=degree).rev() {
            let shell = &coeffs[triangle_len(t) - (t + 1)..triangle_len(t)];
            if shell.iter().any(|c| c.abs() > tol) {
                effective = t;
                break;
            }
        }
        let mut trimmed = coeffs;
        trimmed.truncate(triangle_len(effective));
        Ok(Self {
            degree: effective,
            coeffs: trimmed,
        })
    }

    /// Builds a polynomial from sparse `(j, k, c)` terms.
    pub fn from_terms(degree: usize, terms: &[(usize, usize, f64)]) -> Result<Self> {
        let mut coeffs = vec![0.0; triangle_len(degree)];
        for &(j, k, c) in terms {
            if j + k > degree {
                return Err(Error::InvalidPolynomial(format!(
                    "term xi^{j} eta^{k} exceeds total degree {degree}"
                )));
            }
            let slot = &mut coeffs[monomial_index(j, k)];
            if *slot != 0.0 {
                return Err(Error::InvalidPolynomial(format!(
                    "duplicate term for xi^{j} eta^{k}"
                )));
            }
            *slot = c;
        }
        Self::new(degree, coeffs)
    }

    /// The constant polynomial.
    pub fn constant(c: f64) -> Self {
        Self::new(0, vec![c]).expect("constant coefficients are well-formed")
    }

    /// `prod over forms (a, b) of (1 - a*xi - b*eta)` — the defining
    /// polynomial of an intersection of half-planes normalized at the
    /// origin.
    pub fn product_of_affine_forms(forms: &[(f64, f64)]) -> Self {
        let degree = forms.len();
        let mut acc = vec![0.0; triangle_len(degree)];
        acc[0] = 1.0;
        for (step, &(a, b)) in forms.iter().enumerate() {
            // Multiply-accumulate in place, highest shells first so lower
            // ones are still the previous partial product.
            let mut next = vec![0.0; triangle_len(degree)];
            for t in 0..=step {
                for k in 0..=t {
                    let j = t - k;
                    let c = acc[monomial_index(j, k)];
                    if c == 0.0 {
                        continue;
                    }
                    next[monomial_index(j, k)] += c;
                    next[monomial_index(j + 1, k)] -= a * c;
                    next[monomial_index(j, k + 1)] -= b * c;
                }
            }
            acc = next;
        }
        Self::new(degree, acc).expect("finite products of finite forms")
    }

    /// Total degree after trimming.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `xi^j eta^k` (zero beyond the stored degree).
    pub fn coeff(&self, j: usize, k: usize) -> f64 {
        if j + k > self.degree {
            0.0
        } else {
            self.coeffs[monomial_index(j, k)]
        }
    }

    /// Nonzero terms as `(j, k, c)`, in graded storage order.
    pub fn terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for t in 0..=self.degree {
            for k in 0..=t {
                let c = self.coeffs[monomial_index(t - k, k)];
                if c != 0.0 {
                    out.push((t - k, k, c));
                }
            }
        }
        out
    }

    /// Evaluates the polynomial.
    pub fn evaluate(&self, xi: f64, eta: f64) -> f64 {
        let mut xi_pow = vec![1.0; self.degree + 1];
        let mut eta_pow = vec![1.0; self.degree + 1];
        for t in 1..=self.degree {
            xi_pow[t] = xi_pow[t - 1] * xi;
            eta_pow[t] = eta_pow[t - 1] * eta;
        }
        let mut acc = 0.0;
        for t in 0..=self.degree {
            for k in 0..=t {
                acc += self.coeffs[monomial_index(t - k, k)] * xi_pow[t - k] * eta_pow[k];
            }
        }
        acc
    }

    /// The polynomial precomposed with the rotation by `phi`:
    /// `q(cos(phi) xi - sin(phi) eta, sin(phi) xi + cos(phi) eta)`.
    pub fn rotate(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let mut out = vec![0.0; triangle_len(self.degree)];
        // Expand (c xi - s eta)^j (s xi + c eta)^k by binomials.
        let binom = pascal_triangle(self.degree);
        for t in 0..=self.degree {
            for k in 0..=t {
                let j = t - k;
                let coef = self.coeffs[monomial_index(j, k)];
                if coef == 0.0 {
                    continue;
                }
                for p in 0..=j {
                    let left = binom[j][p] * c.powi(p as i32) * (-s).powi((j - p) as i32);
                    for q in 0..=k {
                        let right = binom[k][q] * s.powi(q as i32) * c.powi((k - q) as i32);
                        // Contribution to xi^(p+q) eta^(j+k-p-q).
                        out[monomial_index(p + q, t - p - q)] += coef * left * right;
                    }
                }
            }
        }
        Self::new(self.degree, out).expect("rotation preserves finiteness")
    }
}

/// Wire format shared with the CLI: degree plus sparse `[j, k, c]` terms.
#[derive(Serialize, Deserialize)]
struct PolyWire {
    degree: usize,
    coeffs: Vec<(usize, usize, f64)>,
}

impl Serialize for BivariatePoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyWire {
            degree: self.degree,
            coeffs: self.terms(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BivariatePoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = PolyWire::deserialize(deserializer)?;
        BivariatePoly::from_terms(wire.degree, &wire.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Rows of Pascal's triangle up to `n`.
fn pascal_triangle(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![1.0; i + 1];
        for j in 1..i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

/// Interpolates the determinant polynomial `det(I - xi*H - eta*K)` of a
/// hermitian pair (total degree at most the matrix dimension).
///
/// The determinant is sampled on concentric circles of radius
/// `rho * {0.5 .. 1.5}` with `rho = 1 / (2 max(|H|, |K|))`, the triangular
/// coefficient system is solved by least squares in circle-scaled
/// coordinates, and the constant term is normalized to exactly 1.  The
/// relative fit residual must stay below `1e-8`.
pub fn kippenhahn_poly(pair: &HermitianPair) -> Result<BivariatePoly> {
    let d = pair.dim();
    let rho = 1.0 / (2.0 * pair.h().frobenius_norm().max(pair.k().frobenius_norm()) + 1e-30);

    // Radial rank needs floor(d/2)+1 distinct radii; angular rank needs more
    // than 2d+1 points per circle.
    let n_circles = (d / 2 + 1).max(3);
    let per_circle = 2 * d + 5;
    let factors: Vec<f64> = (0..n_circles)
        .map(|i| 0.5 + i as f64 / (n_circles - 1) as f64)
        .collect();

    let n_unknowns = triangle_len(d);
    let n_rows = n_circles * per_circle;
    let mut a = vec![0.0; n_rows * n_unknowns];
    let mut b = vec![0.0; n_rows];
    let mut row = 0;
    for &f in &factors {
        for p in 0..per_circle {
            let angle = std::f64::consts::TAU * p as f64 / per_circle as f64;
            // Scaled coordinates (u, v) keep the Vandermonde entries O(1).
            let (u, v) = (f * angle.cos(), f * angle.sin());
            for t in 0..=d {
                for k in 0..=t {
                    a[row * n_unknowns + monomial_index(t - k, k)] =
                        u.powi((t - k) as i32) * v.powi(k as i32);
                }
            }
            let det = complex_determinant(&pair.resolvent(rho * u, rho * v));
            b[row] = det.re;
            row += 1;
        }
    }

    let b_norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (scaled_coeffs, residual) = least_squares(n_rows, n_unknowns, &a, &b)?;
    let relative = residual / b_norm.max(1e-30);
    if relative > FIT_RESIDUAL_TOL {
        return Err(Error::IllConditionedFit { residual: relative });
    }

    // Unscale u = xi / rho and pin the constant term at exactly 1.
    let mut coeffs = vec![0.0; n_unknowns];
    for t in 0..=d {
        for k in 0..=t {
            let idx = monomial_index(t - k, k);
            coeffs[idx] = scaled_coeffs[idx] / rho.powi(t as i32);
        }
    }
    let c00 = coeffs[0];
    if (c00 - 1.0).abs() > 1e-6 {
        return Err(Error::IllConditionedFit {
            residual: (c00 - 1.0).abs(),
        });
    }
    for c in &mut coeffs {
        *c /= c00;
    }
    coeffs[0] = 1.0;
    BivariatePoly::new(d, coeffs)
}

/// Coefficients (ascending in `t`) of `t -> q(t cos(phi), t sin(phi))`,
/// with trailing coefficients below `1e-9 * max|a|` dropped (degree drop
/// corresponds to roots at infinity).
pub fn restrict_to_line(q: &BivariatePoly, phi: f64) -> Vec<f64> {
    let (s, c) = phi.sin_cos();
    let mut coeffs: Vec<f64> = (0..=q.degree())
        .map(|t| {
            (0..=t)
                .map(|k| q.coeff(t - k, k) * c.powi((t - k) as i32) * s.powi(k as i32))
                .sum()
        })
        .collect();
    let max_mag = coeffs.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let tol = DEGREE_DROP_TOL * max_mag;
    while coeffs.len() > 1 && coeffs.last().expect("non-empty").abs() <= tol {
        coeffs.pop();
    }
    coeffs
}

/// Hermite real-rootedness certificate for a univariate real polynomial
/// given by ascending coefficients.
///
/// Builds the root power sums `s_0 .. s_{2n-2}` from the monic
/// normalization via Newton's identities and tests the Hankel matrix
/// `[s_{i+j}]` for positive semidefiniteness; all roots are real exactly
/// when it is.  The returned margin is the smallest Hankel eigenvalue
/// normalized by the largest; degree at most 1 passes with margin 1.
pub fn all_roots_real(coeffs: &[f64]) -> Result<(bool, f64)> {
    let mut trimmed = coeffs.to_vec();
    let max_mag = trimmed.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let tol = DEGREE_DROP_TOL * max_mag;
    while trimmed.len() > 1 && trimmed.last().expect("non-empty").abs() <= tol {
        trimmed.pop();
    }
    let n = trimmed.len().saturating_sub(1);
    if n <= 1 {
        return Ok((true, 1.0));
    }

    let lead = trimmed[n];
    let monic: Vec<f64> = trimmed.iter().map(|a| a / lead).collect();
    let sums = root_power_sums(&monic, 2 * n - 2)?;

    let mut hankel = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            hankel[i * n + j] = sums[i + j];
        }
    }
    let (values, _) = jacobi_symmetric(n, &hankel, false)?;
    let low = values[0];
    let high = *values.last().expect("non-empty spectrum");
    // The top eigenvalue dominates the diagonal entry s_0 = n > 0.
    let margin = low / high;
    Ok((margin >= -TOL_PSD, margin))
}

/// Power sums `s_0 .. s_max` of the roots of a monic polynomial (ascending
/// coefficients, leading 1) via Newton's identities.
fn root_power_sums(monic: &[f64], s_max: usize) -> Result<Vec<f64>> {
    let n = monic.len() - 1;
    let mut sums = vec![0.0; s_max + 1];
    sums[0] = n as f64;
    for m in 1..=s_max {
        let mut s = if m <= n {
            -(m as f64) * monic[n - m]
        } else {
            0.0
        };
        for i in 1..m.min(n + 1) {
            s -= monic[n - i] * sums[m - i];
        }
        sums[m] = s;
        if !s.is_finite() || s.abs() > 1e140 {
            return Err(Error::ScaleError);
        }
    }
    Ok(sums)
}

/// All complex roots of a polynomial with complex coefficients (ascending),
/// by fixed-point root refinement on the monic normalization, sorted by
/// real then imaginary part.
pub(crate) fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut trimmed = coeffs.to_vec();
    let max_mag = trimmed.iter().fold(0.0_f64, |m, a| m.max(a.norm()));
    while trimmed.len() > 1
        && trimmed.last().expect("non-empty").norm() <= DEGREE_DROP_TOL * max_mag
    {
        trimmed.pop();
    }
    let n = trimmed.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = trimmed[n];
    let monic: Vec<Complex64> = trimmed.iter().map(|a| a / lead).collect();

    // Simultaneous (Weierstrass) iteration from a non-real geometric ladder.
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|j| seed.powu(j as u32 + 1)).collect();
    for _ in 0..200 {
        let mut moved = 0.0_f64;
        for j in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..n {
                if k != j {
                    denom *= roots[j] - roots[k];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let value = eval_complex(&monic, roots[j]);
            let step = value / denom;
            roots[j] -= step;
            moved = moved.max(step.norm());
        }
        if moved <= 1e-13 {
            break;
        }
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite roots"));
    roots
}

/// Evaluates an ascending-coefficient polynomial at `z`.
fn eval_complex(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::default();
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Outcome of the real-zero test in one direction that failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RZFailure {
    /// Direction angle in `[0, pi)`.
    pub phi: f64,
    /// A non-real root estimate of the line restriction (largest imaginary
    /// magnitude among the computed roots).
    pub root: Complex64,
}

/// Verdict of the sampled real-zero test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RZVerdict {
    /// Every sampled direction certified real roots.
    Pass,
    /// At least one direction produced a non-real root.
    Fail,
}

/// Report of the sampled real-zero test.
#[derive(Debug, Clone)]
pub struct RZReport {
    /// Number of directions sampled in `[0, pi)`.
    pub directions_tested: usize,
    /// Smallest real-rootedness margin over all directions.
    pub worst_margin: f64,
    /// Directions whose restriction has a certified non-real root.
    pub failures: Vec<RZFailure>,
    /// Aggregate verdict: pass exactly when `failures` is empty.
    pub verdict: RZVerdict,
    /// Honesty note: sampling finitely many directions cannot certify all
    /// of them.
    pub caveat: &'static str,
}

/// Caveat attached to every sampled real-zero report.
pub const SAMPLING_CAVEAT: &str =
    "sampled certificate: finitely many directions were tested, not all";

/// Samples the real-zero condition of `q` (all roots of `t -> q(t z)` real
/// for every direction `z`) at `n_directions` equally spaced angles in
/// `[0, pi)`; opposite directions share a root set, so the half-circle
/// suffices.
///
/// Each restriction is rescaled by its Cauchy root bound before the Hermite
/// certificate so the Hankel matrix stays conditioned.  Directions whose
/// margin falls below `-1e-8` are reported as failures together with a
/// non-real root estimate.
pub fn rz_test(q: &BivariatePoly, n_directions: usize) -> Result<RZReport> {
    assert!(n_directions >= 8, "need at least 8 directions");
    if q.evaluate(0.0, 0.0) <= 0.0 {
        return Err(Error::NotAnchored);
    }

    let outcomes = (0..n_directions)
        .into_par_iter()
        .map(|i| {
            let phi = std::f64::consts::PI * i as f64 / n_directions as f64;
            let restricted = restrict_to_line(q, phi);
            let (scaled, bound) = cauchy_rescale(&restricted)?;
            let (real_rooted, margin) = all_roots_real(&scaled)?;
            let witness = if real_rooted {
                None
            } else {
                let complex_coeffs: Vec<Complex64> =
                    scaled.iter().map(|&a| Complex64::new(a, 0.0)).collect();
                let root = complex_roots(&complex_coeffs)
                    .into_iter()
                    .max_by(|a, b| {
                        a.im.abs().partial_cmp(&b.im.abs()).expect("finite roots")
                    })
                    .map(|r| r * bound)
                    .unwrap_or_default();
                Some(RZFailure { phi, root })
            };
            Ok((margin, witness))
        })
        .collect::<Result<Vec<_>>>()?;

    let worst_margin = outcomes
        .iter()
        .map(|(m, _)| *m)
        .fold(f64::INFINITY, f64::min);
    let failures: Vec<RZFailure> = outcomes.into_iter().filter_map(|(_, w)| w).collect();
    let verdict = if failures.is_empty() {
        RZVerdict::Pass
    } else {
        RZVerdict::Fail
    };
    Ok(RZReport {
        directions_tested: n_directions,
        worst_margin,
        failures,
        verdict,
        caveat: SAMPLING_CAVEAT,
    })
}

/// Rescales `p(t)` to `p(bound * t)` where `bound` is the Cauchy root bound
/// `1 + max |a_k / a_n|`, bringing all roots into the unit disk.
fn cauchy_rescale(coeffs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok((coeffs.to_vec(), 1.0));
    }
    let lead = coeffs[n];
    let bound = 1.0
        + coeffs[..n]
            .iter()
            .map(|a| (a / lead).abs())
            .fold(0.0_f64, f64::max);
    let scaled: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a * bound.powi(k as i32))
        .collect();
    if scaled.iter().any(|a| !a.is_finite()) {
        return Err(Error::ScaleError);
    }
    Ok((scaled, bound))
}

/// Three-valued rigid-convexity verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RigidConvexity {
    /// The polynomial is positive at the origin and every sampled direction
    /// certified real roots.
    RigidlyConvex,
    /// A direction produced a decisively non-real root (margin below
    /// `-1e-7`), or the polynomial is not positive at the origin.
    NotRigidlyConvex,
    /// Worst margins fall in the ambiguous band between the certification
    /// and refutation thresholds.
    Inconclusive,
}

/// Tests whether the algebraic interior of `q` around the origin is rigidly
/// convex, i.e. whether `q` certifies as a real-zero polynomial on
/// `n_directions` sampled lines.
///
/// Margins below `-1e-7` refute with a concrete non-real root; margins in
/// the ambiguous band `(-1e-7, -1e-8)` are reported as inconclusive.
pub fn rigid_convexity(q: &BivariatePoly, n_directions: usize) -> Result<RigidConvexity> {
    if q.evaluate(0.0, 0.0) <= 0.0 {
        return Ok(RigidConvexity::NotRigidlyConvex);
    }
    let report = rz_test(q, n_directions)?;
    if report.verdict == RZVerdict::Pass {
        return Ok(RigidConvexity::RigidlyConvex);
    }
    if report.worst_margin < -AMBIGUOUS_FACTOR * TOL_PSD {
        Ok(RigidConvexity::NotRigidlyConvex)
    } else {
        Ok(RigidConvexity::Inconclusive)
    }
}

/// Interpolates the determinant polynomial of a raw matrix through its
/// hermitian parts.
pub fn kippenhahn_poly_of_matrix(a: &ComplexMatrix) -> Result<BivariatePoly> {
    kippenhahn_poly(&hermitian_parts(a))
}
