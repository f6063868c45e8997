//! Shared generators and independent oracles for the acceptance suite.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use rangeshape::linalg::{Complex64, ComplexMatrix};
use rangeshape::numrange::{ConvexPolygon, Point};

/// Dense square matrix with entries uniform in the complex unit box.
pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Random hermitian matrix of unit-scale entries.
pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let raw = random_matrix(rng, d);
    raw.add(&raw.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// Random convex polygon (at least a triangle) translated so its vertex
/// centroid sits at the origin.
pub fn random_centered_polygon(rng: &mut ChaCha8Rng) -> ConvexPolygon {
    loop {
        let count = rng.gen_range(3..=10);
        let points: Vec<Point> = (0..count)
            .map(|_| Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let hull = ConvexPolygon::hull_of(&points).expect("finite points");
        if hull.vertices().len() >= 3 {
            let centroid = hull.centroid();
            return hull.translate(-centroid.x, -centroid.y);
        }
    }
}

/// Degree after dropping trailing coefficients below `1e-9` of the largest.
pub fn effective_degree(coeffs: &[f64]) -> usize {
    let max_mag = coeffs.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let tol = 1e-9 * max_mag;
    let mut n = coeffs.len().saturating_sub(1);
    while n > 0 && coeffs[n].abs() <= tol {
        n -= 1;
    }
    n
}

fn eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn cauchy_bound(coeffs: &[f64]) -> f64 {
    let n = effective_degree(coeffs);
    let lead = coeffs[n];
    1.0 + coeffs[..n]
        .iter()
        .map(|a| (a / lead).abs())
        .fold(0.0_f64, f64::max)
}

/// Brute-force real-root count by sign changes of the polynomial on a
/// dense grid spanning the Cauchy root bound.
pub fn grid_real_root_count(coeffs: &[f64]) -> usize {
    let n = effective_degree(coeffs);
    if n == 0 {
        return 0;
    }
    let bound = cauchy_bound(coeffs);
    let samples = 40_001;
    let mut count = 0;
    let mut last_sign = 0.0;
    for i in 0..samples {
        let t = -bound + 2.0 * bound * i as f64 / (samples - 1) as f64;
        let value = eval(&coeffs[..=n], t);
        let sign = if value == 0.0 { 0.0 } else { value.signum() };
        if sign == 0.0 {
            count += 1;
            last_sign = 0.0;
            continue;
        }
        if last_sign != 0.0 && sign != last_sign {
            count += 1;
        }
        last_sign = sign;
    }
    count
}

fn trim(coeffs: &[f64]) -> Vec<f64> {
    let n = effective_degree(coeffs);
    coeffs[..=n].to_vec()
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Remainder of polynomial long division `a mod b`.
fn remainder(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    while r.len() > db && r.len() > 1 {
        let dr = r.len() - 1;
        let factor = r[dr] / lead;
        for k in 0..=db {
            r[dr - db + k] -= factor * b[k];
        }
        r.pop();
        while r.len() > 1 && r.last() == Some(&0.0) {
            r.pop();
        }
    }
    r
}

/// Number of distinct real roots by the classical sign-variation count of
/// the Sturm chain between the Cauchy bounds.
pub fn sturm_distinct_real_roots(coeffs: &[f64]) -> usize {
    let p0 = trim(coeffs);
    if p0.len() <= 1 {
        return 0;
    }
    let bound = cauchy_bound(&p0) + 1.0;
    let mut chain = vec![p0.clone(), trim(&derivative(&p0))];
    loop {
        let prev = &chain[chain.len() - 2];
        let last = &chain[chain.len() - 1];
        if last.len() <= 1 {
            break;
        }
        let mut rem: Vec<f64> = remainder(prev, last).iter().map(|c| -c).collect();
        let scale = rem.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let prev_scale = prev.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if scale <= 1e-12 * prev_scale {
            break;
        }
        for c in &mut rem {
            *c /= scale;
        }
        chain.push(trim(&rem));
    }
    let variations = |t: f64| -> usize {
        let mut count = 0;
        let mut last_sign = 0.0;
        for p in &chain {
            let value = eval(p, t);
            if value == 0.0 {
                continue;
            }
            let sign = value.signum();
            if last_sign != 0.0 && sign != last_sign {
                count += 1;
            }
            last_sign = sign;
        }
        count
    };
    variations(-bound).saturating_sub(variations(bound))
}

/// Expanded coefficients (ascending) of `lead * prod (t - roots[i])`.
pub fn poly_from_real_roots(roots: &[f64], lead: f64) -> Vec<f64> {
    let mut coeffs = vec![lead];
    for &r in roots {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        coeffs = next;
    }
    coeffs
}
