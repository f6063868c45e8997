//! Dense complex matrix primitives: hermitian decomposition, hermitian
//! eigensolving, and determinants.
//!
//! Complex hermitian eigenproblems are reduced to real symmetric ones through
//! the `2d x 2d` embedding `[[Re M, -Im M], [Im M, Re M]]`, whose spectrum is
//! that of `M` with every eigenvalue doubled.  A single cyclic-Jacobi kernel
//! (see [`jacobi`]) then serves every module in the crate.

mod jacobi;

pub(crate) use jacobi::{jacobi_symmetric, least_squares};

use crate::{Error, Result};

/// Complex double-precision scalar used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;

/// Relative tolerance for accepting a matrix as hermitian.
const HERMITIAN_TOL: f64 = 1e-12;

/// Relative gap below which embedded eigenvalues are treated as one cluster
/// when extracting complex eigenvectors.
const CLUSTER_GAP_TOL: f64 = 1e-11;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    d: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a `d x d` matrix from row-major entries, validating shape and
    /// finiteness.
    pub fn new(d: usize, entries: Vec<Complex64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if entries.len() != d * d {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {d}x{d} matrix, got {}",
                d * d,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at row {}, column {}",
                bad / d,
                bad % d
            )));
        }
        Ok(Self { d, entries })
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidMatrix("rows must all have length d".into()));
        }
        Self::new(d, rows.concat())
    }

    /// Builds a matrix entrywise from a function of (row, column).
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(d > 0, "dimension must be positive");
        let entries = (0..d * d).map(|idx| f(idx / d, idx % d)).collect();
        Self::new(d, entries).expect("entrywise constructor produced non-finite values")
    }

    /// The zero matrix.
    pub fn zeros(d: usize) -> Self {
        Self::from_fn(d, |_, _| Complex64::default())
    }

    /// The identity matrix.
    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::default() })
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diag(diag: &[Complex64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { Complex64::default() })
    }

    /// Matrix dimension `d`.
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Entry at (row, column).
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.d + j]
    }

    /// Overwrites the entry at (row, column).
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.d + j] = value;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.d, |i, j| self.get(j, i).conj())
    }

    /// Non-conjugated transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.d, |i, j| self.get(j, i))
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "dimension mismatch");
        Self::from_fn(self.d, |i, j| self.get(i, j) + other.get(i, j))
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "dimension mismatch");
        Self::from_fn(self.d, |i, j| self.get(i, j) - other.get(i, j))
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_fn(self.d, |i, j| self.get(i, j) * factor)
    }

    /// `self + c * I`.
    pub fn add_scaled_identity(&self, c: Complex64) -> Self {
        Self::from_fn(self.d, |i, j| {
            if i == j {
                self.get(i, j) + c
            } else {
                self.get(i, j)
            }
        })
    }

    /// Matrix product.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "dimension mismatch");
        let d = self.d;
        Self::from_fn(d, |i, j| {
            let mut s = Complex64::default();
            for k in 0..d {
                s += self.get(i, k) * other.get(k, j);
            }
            s
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.d, "dimension mismatch");
        (0..self.d)
            .map(|i| (0..self.d).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.d).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_entry_magnitude(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation `|m_ij - conj(m_ji)|` from hermitian symmetry.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.d {
            for j in i..self.d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest deviation `|m_ij - m_ji|` from (non-conjugated) symmetry.
    pub fn symmetry_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.d {
            for j in (i + 1)..self.d {
                worst = worst.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        worst
    }
}

/// The hermitian decomposition `A = H + iK` with `H = (A + A*)/2` and
/// `K = (A - A*)/(2i)`; carries the pencil data for the polar's LMI
/// description `I - xi*H - eta*K >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPair {
    h: ComplexMatrix,
    k: ComplexMatrix,
}

impl HermitianPair {
    /// Wraps two matrices after validating that both are hermitian within
    /// `1e-12` of their largest entry magnitude.
    pub fn new(h: ComplexMatrix, k: ComplexMatrix) -> Result<Self> {
        if h.dim() != k.dim() {
            return Err(Error::InvalidMatrix(
                "hermitian pair members must share a dimension".into(),
            ));
        }
        for m in [&h, &k] {
            let dev = m.hermitian_deviation();
            if dev > HERMITIAN_TOL * m.max_entry_magnitude() {
                return Err(Error::NotHermitian { deviation: dev });
            }
        }
        Ok(Self { h, k })
    }

    /// Real part of the pencil.
    pub fn h(&self) -> &ComplexMatrix {
        &self.h
    }

    /// Imaginary part of the pencil.
    pub fn k(&self) -> &ComplexMatrix {
        &self.k
    }

    /// Shared dimension.
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// The hermitian pencil `xi*H + eta*K`.
    pub fn pencil(&self, xi: f64, eta: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| {
            self.h.get(i, j) * xi + self.k.get(i, j) * eta
        })
    }

    /// The LMI pencil `I - xi*H - eta*K`.
    pub fn resolvent(&self, xi: f64, eta: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| {
            let base = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::default() };
            base - self.h.get(i, j) * xi - self.k.get(i, j) * eta
        })
    }

    /// Reassembles `H + iK`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| {
            self.h.get(i, j) + Complex64::i() * self.k.get(i, j)
        })
    }
}

/// Splits `A = H + iK` into its hermitian parts.
pub fn hermitian_parts(a: &ComplexMatrix) -> HermitianPair {
    let d = a.dim();
    let h = ComplexMatrix::from_fn(d, |i, j| (a.get(i, j) + a.get(j, i).conj()) * 0.5);
    let k = ComplexMatrix::from_fn(d, |i, j| {
        (a.get(i, j) - a.get(j, i).conj()) * Complex64::new(0.0, -0.5)
    });
    // Both are hermitian by construction (diagonals land exactly real), so
    // skip the tolerance check.
    HermitianPair { h, k }
}

/// Full spectrum of a hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Eigenvalues sorted ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` matching `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

/// `sum_i conj(a_i) * b_i`.
pub(crate) fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Builds the `2d x 2d` real symmetric embedding `[[Re M, -Im M],[Im M, Re M]]`
/// of a hermitian matrix.
fn embed_hermitian(m: &ComplexMatrix) -> Vec<f64> {
    let d = m.dim();
    let n = 2 * d;
    let mut e = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            let z = m.get(i, j);
            e[i * n + j] = z.re;
            e[i * n + (j + d)] = -z.im;
            e[(i + d) * n + j] = z.im;
            e[(i + d) * n + (j + d)] = z.re;
        }
    }
    e
}

/// Checks hermiticity within tolerance and returns the exactly-symmetrized
/// copy `(M + M*)/2`.
fn checked_symmetrize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL * m.max_entry_magnitude() {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(ComplexMatrix::from_fn(m.dim(), |i, j| {
        (m.get(i, j) + m.get(j, i).conj()) * 0.5
    }))
}

/// Averages adjacent sorted values from the doubled embedded spectrum down to
/// the `d` eigenvalues of the complex matrix.
fn pair_embedded_values(embedded: &[f64]) -> Vec<f64> {
    embedded
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect()
}

/// Eigenvalues of a hermitian matrix, sorted ascending.
///
/// Cheaper than [`hermitian_eigen`] because no eigenvectors are accumulated.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let ms = checked_symmetrize(m)?;
    let e = embed_hermitian(&ms);
    let (vals, _) = jacobi_symmetric(2 * ms.dim(), &e, false)?;
    Ok(pair_embedded_values(&vals))
}

/// Full eigendecomposition of a hermitian matrix via the real symmetric
/// embedding.
///
/// The embedded spectrum doubles every eigenvalue; values are recovered by
/// sorting and averaging adjacent pairs, and eigenvectors by mapping embedded
/// eigenvectors `(x, y)` to `x + iy` with a pivoted Gram-Schmidt pass inside
/// each eigenvalue cluster (the complex images of an embedded eigenbasis span
/// the right eigenspace but arrive with redundancy two).
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<EigenResult> {
    let ms = checked_symmetrize(m)?;
    let d = ms.dim();
    let e = embed_hermitian(&ms);
    let (evals, evecs) = jacobi_symmetric(2 * d, &e, true)?;
    let evecs = evecs.expect("vectors requested");
    let n = 2 * d;

    let values = pair_embedded_values(&evals);
    let scale: f64 = evals.iter().map(|x| x * x).sum::<f64>().sqrt();
    let gap_tol = CLUSTER_GAP_TOL * scale;

    // Cluster adjacent embedded eigenvalues, then pick half of each cluster's
    // complex images by pivoted Gram-Schmidt.
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (evals[end] - evals[end - 1]) <= gap_tol {
            end += 1;
        }
        // Clusters pair embedded duplicates, so they have even size; extend
        // defensively if a tolerance boundary ever splits a pair.
        while (end - start) % 2 != 0 && end < n {
            end += 1;
        }
        let take = (end - start) / 2;
        let mut candidates: Vec<Vec<Complex64>> = (start..end)
            .map(|col| {
                (0..d)
                    .map(|r| Complex64::new(evecs[r * n + col], evecs[(r + d) * n + col]))
                    .collect()
            })
            .collect();
        for _ in 0..take {
            let (pivot, _) = candidates
                .iter()
                .enumerate()
                .map(|(idx, v)| (idx, v.iter().map(|z| z.norm_sqr()).sum::<f64>()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite norms"))
                .expect("cluster candidates available");
            let mut chosen = candidates.swap_remove(pivot);
            let norm = chosen.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in &mut chosen {
                *z /= norm;
            }
            for cand in &mut candidates {
                let coef = dot_conj(&chosen, cand);
                for (c, &g) in cand.iter_mut().zip(&chosen) {
                    *c -= coef * g;
                }
            }
            vectors.push(chosen);
        }
        start = end;
    }

    // Final global orthonormalization sweep: removes the tiny cross-cluster
    // leakage of the embedding images without disturbing the residual.
    for k in 0..vectors.len() {
        let (head, tail) = vectors.split_at_mut(k);
        let vk = &mut tail[0];
        for prev in head.iter() {
            let coef = dot_conj(prev, vk);
            for (c, &g) in vk.iter_mut().zip(prev) {
                *c -= coef * g;
            }
        }
        let norm = vk.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in vk.iter_mut() {
            *z /= norm;
        }
    }

    Ok(EigenResult { values, vectors })
}

/// Determinant by LU factorization with partial pivoting.
pub fn complex_determinant(m: &ComplexMatrix) -> Complex64 {
    let d = m.dim();
    let mut a = m.entries().to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..d {
        let (pivot_row, pivot_mag) = (k..d)
            .map(|r| (r, a[r * d + k].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite magnitudes"))
            .expect("non-empty column");
        if pivot_mag == 0.0 {
            return Complex64::default();
        }
        if pivot_row != k {
            for j in 0..d {
                a.swap(k * d + j, pivot_row * d + j);
            }
            det = -det;
        }
        let pivot = a[k * d + k];
        det *= pivot;
        for r in (k + 1)..d {
            let factor = a[r * d + k] / pivot;
            for j in k..d {
                let akj = a[k * d + j];
                a[r * d + j] -= factor * akj;
            }
        }
    }
    det
}

/// Coefficients (ascending, monic) of the characteristic polynomial
/// `det(zI - M)`, computed by the Faddeev-LeVerrier trace recurrence.
pub fn characteristic_polynomial(m: &ComplexMatrix) -> Vec<Complex64> {
    let d = m.dim();
    let mut coeffs = vec![Complex64::default(); d + 1];
    coeffs[d] = Complex64::new(1.0, 0.0);
    let mut bk = m.clone();
    for k in 1..=d {
        let c = -bk.trace() / k as f64;
        coeffs[d - k] = c;
        if k < d {
            bk = m.matmul(&bk.add_scaled_identity(c));
        }
    }
    coeffs
}
