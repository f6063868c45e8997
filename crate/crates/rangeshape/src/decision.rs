//! Decision procedures built on the polar machinery: whether a planar
//! convex set is the numerical range of a matrix of bounded size, and the
//! search for a complex-symmetric matrix with a prescribed numerical range.
//!
//! A convex set containing the origin in its interior is a numerical range
//! of a d-by-d matrix exactly when its polar set is rigidly convex with a
//! defining polynomial of degree at most d.  For polygons the polar's
//! defining polynomial is an explicit product of affine forms, which makes
//! the decision exact; for general polynomials the rigid-convexity
//! certificate is sampled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{
    hermitian_eigen, hermitian_parts, jacobi_symmetric, Complex64, ComplexMatrix, HermitianPair,
};
use crate::numrange::{numerical_range, ConvexPolygon, Point};
use crate::polar::{hausdorff, polygon_polar};
use crate::rigidity::{
    kippenhahn_poly, rigid_convexity, BivariatePoly, RigidConvexity, SAMPLING_CAVEAT,
};
use crate::{Error, Result};

/// Caveat attached to verdicts that trust the given polynomial's degree.
pub const DEGREE_MINIMALITY_CAVEAT: &str =
    "degree is read off the given polynomial; minimality of the defining polynomial is not verified";

/// Caveat attached to affirmative verdicts that ship without a witness.
pub const NO_WITNESS_CAVEAT: &str =
    "no witness matrix is constructed for general polynomials; the verdict rests on the sampled real-zero certificate";

/// Aggregate answer of a shape decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The set is a numerical range of a matrix of the stated size.
    Yes,
    /// It is not.
    No,
    /// The sampled certificate landed in the ambiguous margin band.
    Inconclusive,
}

/// Ground for a decisive verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    /// The defining polynomial's degree exceeds the dimension bound.
    DegreeExceedsD,
    /// The polar set is certifiably not rigidly convex.
    NotRigidlyConvex,
    /// The real-zero certificate passed and the degree fits.
    RzPass,
}

/// Outcome of deciding whether a convex set is a numerical range of a
/// matrix of size at most `dimension_bound`.
#[derive(Debug, Clone)]
pub struct ShapeVerdict {
    /// The decision.
    pub verdict: Verdict,
    /// The dimension bound `d` the question was asked for.
    pub dimension_bound: usize,
    /// Ground for the decision; absent only on inconclusive outcomes.
    pub reason: Option<VerdictReason>,
    /// A hermitian pair realizing the set, when one can be constructed
    /// (points, segments, and polygons; never for general polynomials).
    pub witness: Option<HermitianPair>,
    /// Honesty notes about sampling and degree minimality.
    pub caveats: Vec<String>,
}

/// Decides whether a convex set whose polar has defining polynomial `q` is
/// the numerical range of a d-by-d matrix: yes exactly when `q` is rigidly
/// convex (sampled on `n_directions` lines) and `degree(q) <= d`.
///
/// Refutation of rigid convexity takes priority over the degree gate when
/// reporting a reason; equality `degree(q) = d` is a yes.  No witness is
/// constructed on this path.
pub fn decide_polar_poly(q: &BivariatePoly, d: usize, n_directions: usize) -> Result<ShapeVerdict> {
    if q.evaluate(0.0, 0.0) <= 0.0 {
        return Err(Error::NotAnchored);
    }
    let mut caveats = vec![SAMPLING_CAVEAT.to_string(), DEGREE_MINIMALITY_CAVEAT.to_string()];
    let rigidity = rigid_convexity(q, n_directions)?;
    let (verdict, reason) = match rigidity {
        RigidConvexity::NotRigidlyConvex => (Verdict::No, Some(VerdictReason::NotRigidlyConvex)),
        _ if q.degree() > d => (Verdict::No, Some(VerdictReason::DegreeExceedsD)),
        RigidConvexity::Inconclusive => (Verdict::Inconclusive, None),
        RigidConvexity::RigidlyConvex => (Verdict::Yes, Some(VerdictReason::RzPass)),
    };
    if verdict == Verdict::Yes {
        caveats.push(NO_WITNESS_CAVEAT.to_string());
    }
    Ok(ShapeVerdict {
        verdict,
        dimension_bound: d,
        reason,
        witness: None,
        caveats,
    })
}

/// Decides whether the convex polygon `w` is the numerical range of a
/// d-by-d matrix.
///
/// The polygon is first reduced to its extreme points.  A single point
/// needs `d >= 1` and a segment needs `d >= 2`; both get an exact diagonal
/// or hermitian-pencil witness.  A polygon with `m >= 3` extreme points is
/// translated by its centroid, its polar's defining polynomial (the product
/// of one affine form per vertex) is built, and the polynomial decision
/// runs — which for polygons reduces to `m <= d`.  Affirmative verdicts
/// carry a normal-matrix witness on the original (untranslated) vertices.
pub fn decide_polygon(w: &ConvexPolygon, d: usize, n_directions: usize) -> Result<ShapeVerdict> {
    let canonical = ConvexPolygon::hull_of(w.vertices())?;
    let vertices = canonical.vertices();
    match vertices.len() {
        1 => Ok(exact_verdict(d >= 1, d, witness_from_points(vertices, d.max(1)))),
        2 => Ok(exact_verdict(d >= 2, d, witness_from_points(vertices, d.max(2)))),
        m => {
            let centroid = canonical.centroid();
            let centered = canonical.translate(-centroid.x, -centroid.y);
            // The polar's edge forms, normalized to 1 at the origin, are
            // indexed by the centered vertices; computing the polar also
            // certifies that the centroid is strictly interior.
            polygon_polar(&centered)?;
            let forms: Vec<(f64, f64)> = centered.vertices().iter().map(|v| (v.x, v.y)).collect();
            let q = BivariatePoly::product_of_affine_forms(&forms);
            let mut verdict = decide_polar_poly(&q, d, n_directions)?;
            if verdict.verdict == Verdict::Yes {
                verdict.witness = Some(witness_from_points(vertices, d.max(m)));
                verdict.caveats.retain(|c| c != NO_WITNESS_CAVEAT);
            }
            Ok(verdict)
        }
    }
}

/// Verdict for the exactly decidable degenerate shapes (points, segments).
fn exact_verdict(admissible: bool, d: usize, witness: HermitianPair) -> ShapeVerdict {
    if admissible {
        ShapeVerdict {
            verdict: Verdict::Yes,
            dimension_bound: d,
            reason: Some(VerdictReason::RzPass),
            witness: Some(witness),
            caveats: Vec::new(),
        }
    } else {
        ShapeVerdict {
            verdict: Verdict::No,
            dimension_bound: d,
            reason: Some(VerdictReason::DegreeExceedsD),
            witness: None,
            caveats: Vec::new(),
        }
    }
}

/// Normal (diagonal) witness whose numerical range is the convex hull of
/// `points`, padded to size `d` with the vertex average (interior, so the
/// hull is unchanged).
fn witness_from_points(points: &[Point], d: usize) -> HermitianPair {
    let mean = Point::new(
        points.iter().map(|p| p.x).sum::<f64>() / points.len() as f64,
        points.iter().map(|p| p.y).sum::<f64>() / points.len() as f64,
    );
    let entries: Vec<Complex64> = (0..d)
        .map(|i| {
            let p = points.get(i).copied().unwrap_or(mean);
            Complex64::new(p.x, p.y)
        })
        .collect();
    hermitian_parts(&ComplexMatrix::from_diag(&entries))
}

/// Maximum relative deviation between the determinant polynomial of `pair`
/// and `q` over matched coefficients, after normalizing both constant terms
/// to 1 and measuring against the largest coefficient magnitude.
///
/// Returns infinity when the determinant fit fails or `q` vanishes at the
/// origin.
pub fn roundtrip_check(pair: &HermitianPair, q: &BivariatePoly) -> f64 {
    let p = match kippenhahn_poly(pair) {
        Ok(p) => p,
        Err(_) => return f64::INFINITY,
    };
    let q0 = q.coeff(0, 0);
    if q0 == 0.0 {
        return f64::INFINITY;
    }
    let degree = p.degree().max(q.degree());
    let mut scale = 1.0_f64;
    for t in 0..=degree {
        for k in 0..=t {
            scale = scale.max((q.coeff(t - k, k) / q0).abs());
        }
    }
    let mut worst = 0.0_f64;
    for t in 0..=degree {
        for k in 0..=t {
            let dev = (p.coeff(t - k, k) - q.coeff(t - k, k) / q0).abs();
            worst = worst.max(dev / scale);
        }
    }
    worst
}

/// Knobs of the symmetric realization search.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SymmetrizeOptions {
    /// Support angles defining the least-squares objective.
    pub n_angles: usize,
    /// Convergence tolerance relative to the diameter of the range.
    pub tol: f64,
    /// Maximum number of randomized restarts after the deterministic run.
    pub max_restarts: usize,
    /// Seed of the restart perturbations.
    pub seed: u64,
}

impl Default for SymmetrizeOptions {
    fn default() -> Self {
        Self {
            n_angles: 180,
            tol: 1e-3,
            max_restarts: 8,
            seed: 0,
        }
    }
}

/// Result of the symmetric realization search.
#[derive(Debug, Clone)]
pub struct RealizationResult {
    /// Complex symmetric matrix (exactly equal to its transpose by
    /// construction) approximating the prescribed numerical range.
    pub b: ComplexMatrix,
    /// Sampled Hausdorff distance between the two ranges.
    pub achieved_distance: f64,
    /// Optimizer runs executed, counting the initial deterministic descent;
    /// zero when the input short-circuits.
    pub restarts_used: usize,
    /// Whether `achieved_distance <= tol * diameter` was reached.
    pub converged: bool,
}

/// Searches for a complex symmetric matrix `B` with the same numerical
/// range as `a`.
///
/// `B = H' + iK'` over real symmetric `H', K'` is automatically complex
/// symmetric, so the search space is the `d(d+1)` packed upper-triangle
/// entries; the objective is the squared support mismatch over sampled
/// angles, minimized by Nelder-Mead descent with seeded restarts
/// (perturbations of the deterministic start and real parts of random
/// unitary conjugations of `a`).  Inputs that are already symmetric to
/// machine precision short-circuit.  Non-convergence is reported in the
/// result, never as an error.
pub fn symmetrize(a: &ComplexMatrix, opts: &SymmetrizeOptions) -> Result<RealizationResult> {
    assert!(opts.n_angles >= 8, "need at least 8 support angles");
    let d = a.dim();
    let scale = a.frobenius_norm().max(1.0);

    let deviation = a.symmetry_deviation();
    if deviation == 0.0 {
        return Ok(RealizationResult {
            b: a.clone(),
            achieved_distance: 0.0,
            restarts_used: 0,
            converged: true,
        });
    }
    let n_eval = opts.n_angles.max(360);
    let range_a = numerical_range(a, n_eval)?.polygon();
    let diameter = range_a.diameter();
    let threshold = opts.tol * diameter;
    if deviation <= 1e-12 * scale {
        let b = a.add(&a.transpose()).scale(Complex64::new(0.5, 0.0));
        let distance = hausdorff(&range_a, &numerical_range(&b, n_eval)?.polygon());
        return Ok(RealizationResult {
            converged: distance <= threshold,
            b,
            achieved_distance: distance,
            restarts_used: 0,
        });
    }

    let pair = hermitian_parts(a);
    let angles: Vec<(f64, f64, f64)> = (0..opts.n_angles)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / opts.n_angles as f64;
            let (s, c) = theta.sin_cos();
            let values = crate::linalg::hermitian_eigenvalues(&pair.pencil(c, s))?;
            Ok((c, s, *values.last().expect("non-empty spectrum")))
        })
        .collect::<Result<_>>()?;

    let n_sym = d * (d + 1) / 2;
    let objective = |params: &[f64]| -> f64 {
        let (hp, kp) = params.split_at(n_sym);
        let h = unpack_symmetric(d, hp);
        let k = unpack_symmetric(d, kp);
        let mut acc = 0.0;
        let mut pencil = vec![0.0; d * d];
        for &(c, s, h_a) in &angles {
            for i in 0..d * d {
                pencil[i] = c * h[i] + s * k[i];
            }
            match jacobi_symmetric(d, &pencil, false) {
                Ok((values, _)) => {
                    let gap = h_a - values.last().expect("non-empty spectrum");
                    acc += gap * gap;
                }
                Err(_) => return f64::INFINITY,
            }
        }
        acc
    };

    let base = pack_pair_real_parts(d, &pair);
    let max_iters = 2500 + 400 * d * (d + 1);
    let mut best: Option<(f64, ComplexMatrix)> = None;
    let mut runs = 0;
    for run in 0..=opts.max_restarts {
        runs = run + 1;
        let start = match run {
            0 => base.clone(),
            r if r % 2 == 1 => {
                // Seeded perturbation of the deterministic start.
                let mut rng = restart_rng(opts.seed, r);
                base.iter()
                    .map(|x| x + 0.3 * scale * rng.gen_range(-1.0..1.0))
                    .collect()
            }
            r => {
                // Real parts of a random unitary conjugation of the input,
                // which preserves the target range exactly.
                let mut rng = restart_rng(opts.seed, r);
                let conjugated = random_unitary_conjugate(a, &mut rng)?;
                pack_pair_real_parts(d, &hermitian_parts(&conjugated))
            }
        };
        let (params, _) = nelder_mead(&objective, &start, 0.1 * scale, max_iters);
        let (hp, kp) = params.split_at(n_sym);
        let h = unpack_symmetric(d, hp);
        let k = unpack_symmetric(d, kp);
        let b = ComplexMatrix::from_fn(d, |i, j| Complex64::new(h[i * d + j], k[i * d + j]));
        let distance = hausdorff(&range_a, &numerical_range(&b, n_eval)?.polygon());
        if best.as_ref().is_none_or(|(best_d, _)| distance < *best_d) {
            best = Some((distance, b));
        }
        if best.as_ref().expect("just set").0 <= threshold {
            break;
        }
    }
    let (achieved_distance, b) = best.expect("at least one run");
    Ok(RealizationResult {
        b,
        achieved_distance,
        restarts_used: runs,
        converged: achieved_distance <= threshold,
    })
}

/// Independent generator for restart `r`.
fn restart_rng(seed: u64, r: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Packed upper-triangle coordinates of the entrywise real parts of a pair.
fn pack_pair_real_parts(d: usize, pair: &HermitianPair) -> Vec<f64> {
    let mut params = Vec::with_capacity(d * (d + 1));
    for m in [pair.h(), pair.k()] {
        for i in 0..d {
            for j in i..d {
                params.push(m.get(i, j).re);
            }
        }
    }
    params
}

/// Dense row-major real symmetric matrix from packed upper-triangle
/// coordinates; mirrored entries are bitwise identical.
fn unpack_symmetric(d: usize, packed: &[f64]) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    let mut idx = 0;
    for i in 0..d {
        for j in i..d {
            m[i * d + j] = packed[idx];
            m[j * d + i] = packed[idx];
            idx += 1;
        }
    }
    m
}

/// Conjugates `a` by a random unitary (the eigenvector frame of a random
/// hermitian matrix), preserving the numerical range.
fn random_unitary_conjugate(a: &ComplexMatrix, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    let d = a.dim();
    let noise = ComplexMatrix::from_fn(d, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let hermitian = noise
        .add(&noise.adjoint())
        .scale(Complex64::new(0.5, 0.0));
    let frame = hermitian_eigen(&hermitian)?.vectors;
    let u = ComplexMatrix::from_fn(d, |i, j| frame[j][i]);
    Ok(u.adjoint().matmul(a).matmul(&u))
}

/// Nelder-Mead descent from `x0` with an axis-aligned initial simplex of
/// the given step, returning the best vertex and its value.
fn nelder_mead(
    objective: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_iters: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for j in 0..n {
        let mut p = x0.to_vec();
        p[j] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| objective(p)).collect();

    for _ in 0..max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("comparable objective"));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        simplex = reordered;
        values = order.iter().map(|&i| values[i]).collect();
        if values[n] - values[0] <= 1e-14 * (1.0 + values[0].abs()) {
            break;
        }

        let mut centroid = vec![0.0; n];
        for p in &simplex[..n] {
            for j in 0..n {
                centroid[j] += p[j];
            }
        }
        for c in &mut centroid {
            *c /= n as f64;
        }
        let along = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|j| centroid[j] + t * (simplex[n][j] - centroid[j]))
                .collect()
        };

        let reflected = along(-1.0);
        let f_reflected = objective(&reflected);
        if f_reflected < values[0] {
            let expanded = along(-2.0);
            let f_expanded = objective(&expanded);
            if f_expanded < f_reflected {
                simplex[n] = expanded;
                values[n] = f_expanded;
            } else {
                simplex[n] = reflected;
                values[n] = f_reflected;
            }
        } else if f_reflected < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_reflected;
        } else {
            let contracted = if f_reflected < values[n] {
                along(-0.5)
            } else {
                along(0.5)
            };
            let f_contracted = objective(&contracted);
            if f_contracted < values[n].min(f_reflected) {
                simplex[n] = contracted;
                values[n] = f_contracted;
            } else {
                let anchor = simplex[0].clone();
                for i in 1..=n {
                    for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                        *x = a + 0.5 * (*x - a);
                    }
                    values[i] = objective(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best])
}
