//! Small numeric helpers shared across modules.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::f64::consts::PI;
use std::sync::OnceLock;

pub const TWO_PI: f64 = 2.0 * PI;

/// `e^{2πi θ}`.
#[inline]
pub fn unit_phase(theta: f64) -> Complex64 {
    Complex64::cis(TWO_PI * theta)
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Total order on coordinate vectors: lexicographic, NaN-free input assumed.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) => continue,
            Some(ord) => return ord,
            None => return Ordering::Equal,
        }
    }
    a.len().cmp(&b.len())
}

/// Deterministic point order used for serialized output: by norm, then lex.
pub fn norm_lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    let (na, nb) = (norm(a), norm(b));
    match na.partial_cmp(&nb) {
        Some(Ordering::Equal) | None => lex_cmp(a, b),
        Some(ord) => ord,
    }
}

pub fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Computed once by Newton iteration on the Legendre recurrence; results are
/// deterministic and accurate to machine precision for the small `n` used here.
pub fn gauss_legendre(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Vec<(usize, (Vec<f64>, Vec<f64>))>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        [8usize, 16, 32, 64]
            .iter()
            .map(|&m| (m, compute_gauss_legendre(m)))
            .collect()
    });
    cache
        .iter()
        .find(|(m, _)| *m == n)
        .map(|(_, nw)| nw)
        .expect("unsupported Gauss-Legendre order")
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess for the i-th root.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` with `panels`
/// panels of `nodes_per_panel` nodes each.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    panels: usize,
    nodes_per_panel: usize,
    mut f: F,
) -> f64 {
    let (nodes, weights) = gauss_legendre(nodes_per_panel);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (nodes, weights) = gauss_legendre(16);
        // degree-21 polynomial x^20: exact value 2/21
        let got: f64 = nodes
            .iter()
            .zip(weights)
            .map(|(x, w)| w * x.powi(20))
            .sum();
        assert!((got - 2.0 / 21.0).abs() < 1e-14);
        let one: f64 = weights.iter().sum();
        assert!((one - 2.0).abs() < 1e-14);
    }

    #[test]
    fn panel_integration_of_cosine() {
        let got = integrate_panels(0.0, 1.0, 8, 16, |x| (3.0 * x).cos());
        assert!((got - (3.0f64).sin() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn unit_phase_of_half_is_minus_one() {
        let z = unit_phase(0.5);
        assert!((z.re + 1.0).abs() < 1e-15 && z.im.abs() < 1e-15);
    }
}
