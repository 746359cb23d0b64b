//! Interpolation certificates for frequency sets and the sup-norm inequality
//! they imply.
//!
//! Given a pair `(μ, μ̂)` and a margin `ε`, the atoms with mass at least `ε`
//! that keep distance `ε` from the rest of the support form the set `U`. The
//! certificate built here packages the smoothed measure `g = ψ⋆μ`, its
//! ε-inverse `h`, a uniform bound `C` on the total mass of the interpolating
//! transform, and a radius `r` whose tail mass stays below 1/2 — all
//! independent of the translation parameter. Those constants make the
//! inequality `sup_t |Σ c_λ e^{2πi⟨t,λ⟩}| ≤ 2C·sup_{|y|≤r} |…|` checkable on
//! concrete coefficient vectors.

use crate::calculus::eps_inverse;
use crate::exp_sum::ExpSum;
use crate::fourier::{bump::BumpFunction, convolve_bump, multiply_pair, FourierPair};
use crate::measure::{AtomicMeasure, CellGrid};
use crate::util::{dist, dot, norm, unit_phase};
use crate::{Error, Result};
use num_complex::Complex64;

/// Everything needed to run the inequality check for a frequency set.
#[derive(Debug, Clone)]
pub struct CoherenceCertificate {
    /// The selected frequency set.
    pub u: Vec<Vec<f64>>,
    pub eps: f64,
    /// Bump support radius (strictly below ε/2).
    pub eta: f64,
    /// Smoothed measure `ψ⋆μ`.
    pub g: ExpSum,
    /// ε-inverse of `g`.
    pub h: ExpSum,
    /// Uniform bound on the total mass of the interpolating transform.
    pub c_bound: f64,
    /// Radius whose transform tail mass is below 1/2, uniformly in `t`.
    pub tail_radius: f64,
    /// Certification tolerance (covers the interpolation residual).
    pub tol: f64,
    /// Measured interpolation residual `max_U |h(λ)μ(λ) − 1|`.
    pub interp_residual: f64,
}

/// Options for certificate construction.
#[derive(Debug, Clone)]
pub struct CertificateOptions {
    pub grid_n: usize,
    pub drop_tol: f64,
    /// Tolerance demanded of the ε-inverse grid contracts.
    pub inverse_tol: f64,
    /// Tolerance demanded of the smoothing convolution's certified tail.
    pub conv_tol: f64,
    /// Certificate tolerance (interpolation residual must stay below this).
    pub tol: f64,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions {
            grid_n: 1024,
            drop_tol: 1e-13,
            inverse_tol: 1e-7,
            conv_tol: 1e-5,
            tol: 1e-6,
        }
    }
}

/// Atoms satisfying both certificate conditions: mass at least `eps` and
/// distance at least `eps` to every other support atom.
pub fn select_u(mu: &AtomicMeasure, eps: f64) -> Vec<Vec<f64>> {
    let grid = CellGrid::build(mu.atoms(), eps.max(1e-9));
    let mut out = Vec::new();
    for (i, a) in mu.atoms().iter().enumerate() {
        if a.mass.norm() < eps {
            continue;
        }
        let nearest = grid.nearest_other(i, eps * (1.0 + 1e-12));
        if nearest >= eps {
            out.push(a.point.clone());
        }
    }
    out
}

/// Builds the certificate and verifies its constants on every sampled `t`.
pub fn build_certificate(
    pair: &FourierPair,
    eps: f64,
    t_samples: &[Vec<f64>],
    opts: &CertificateOptions,
) -> Result<CoherenceCertificate> {
    if !(eps > 0.0) {
        return Err(Error::BadInput("eps must be positive".into()));
    }
    let time = pair.time_measure()?;
    let dim = pair.dim();
    let min_sep = time.sep_radius().unwrap_or_else(|| time.min_separation());
    let eta = (eps / 4.0).min(min_sep / 4.0);
    let psi = BumpFunction::new(dim, eta)?;

    let u = select_u(time, eps);
    if u.is_empty() {
        return Err(Error::BadInput(
            "no atoms satisfy the certificate conditions".into(),
        ));
    }

    let g = convolve_bump(&psi, pair, opts.conv_tol)?;
    let h = eps_inverse(&g, eps, opts.grid_n, opts.drop_tol, opts.inverse_tol)?.sum;

    // interpolation: with supp ψ isolating the atoms, F_t(λ) reduces to
    // e^{2πi⟨λ,t⟩} h(λ) μ(λ) at λ ∈ U, so the residual is |h(λ)μ(λ) − 1|
    let mut interp_residual: f64 = 0.0;
    for point in &u {
        let mass = time
            .mass_at(point, 1e-9)
            .ok_or_else(|| Error::BadInput("selected point lost its atom".into()))?;
        let hv = h.eval(point)?;
        interp_residual = interp_residual.max((hv * mass - Complex64::ONE).norm());
    }
    if interp_residual > opts.tol {
        return Err(Error::GridTooCoarse {
            residual: interp_residual,
            tol: opts.tol,
            grid_n: opts.grid_n,
        });
    }

    // transform of h·μ, whose ψ̂-weighted mass gives the constants
    let hmu = multiply_pair(pair, &h)?;
    let spectrum = hmu.freq_side();
    let growth = 3f64.powi(dim as i32) * spectrum.translation_bound();
    let envelope = psi.transform_envelope();
    let c_bound = envelope.total_mass_bound(growth, dim);
    let tail_radius = envelope
        .required_radius(growth, dim, 0.49)
        .ok_or_else(|| Error::BadInput("transform tail cannot certify 1/2".into()))?;

    // the constants are t-independent by construction; verify them directly
    // against each sampled translation
    for t in t_samples {
        if t.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: t.len(),
            });
        }
        let mut total = 0.0;
        let mut tail = 0.0;
        for atom in spectrum.atoms() {
            let y: Vec<f64> = atom.point.iter().zip(t).map(|(a, b)| a + b).collect();
            let v = psi.transform_at(norm(&y)).abs() * atom.mass.norm();
            total += v;
            if norm(&y) > tail_radius {
                tail += v;
            }
        }
        if total > c_bound * (1.0 + 1e-9) {
            return Err(Error::BadInput(format!(
                "mass bound violated at t={t:?}: {total:.6e} > {c_bound:.6e}"
            )));
        }
        if tail >= 0.5 {
            return Err(Error::BadInput(format!(
                "tail mass at radius {tail_radius:.3} not below 1/2 at t={t:?}"
            )));
        }
    }

    Ok(CoherenceCertificate {
        u,
        eps,
        eta,
        g,
        h,
        c_bound,
        tail_radius,
        tol: opts.tol,
        interp_residual,
    })
}

/// Sampling specification for the sup-norm comparisons.
#[derive(Debug, Clone)]
pub struct GridSpec {
    /// Half-width of the search region for the left side.
    pub half_span: f64,
    /// Grid pitch for both sides.
    pub pitch: f64,
    /// Golden-section refinement iterations around the best grid point.
    pub refine_iters: usize,
}

impl GridSpec {
    /// A region at least ten "periods" wide, with a pitch resolving the
    /// highest frequency in `U`.
    pub fn default_for(cert: &CoherenceCertificate) -> GridSpec {
        let mut min_gap = f64::INFINITY;
        for (i, a) in cert.u.iter().enumerate() {
            for b in cert.u.iter().skip(i + 1) {
                min_gap = min_gap.min(dist(a, b));
            }
        }
        if !min_gap.is_finite() || min_gap <= 0.0 {
            min_gap = 1.0;
        }
        let max_freq = cert.u.iter().map(|p| norm(p)).fold(0.0, f64::max);
        GridSpec {
            half_span: (5.0 / min_gap).max(5.0),
            pitch: 0.2 / (1.0 + max_freq),
            refine_iters: 40,
        }
    }
}

/// Result of one inequality check.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    /// Max of `|Σ c_λ e^{2πi⟨t,λ⟩}|` over the wide search region.
    pub lhs: f64,
    /// `2C` times the max over the ball `B(0, r)`.
    pub rhs: f64,
    pub ok: bool,
}

/// Verifies `lhs ≤ 2C·sup_{|y|≤r}|S| + tol` for a coefficient vector
/// supported on the certificate's frequency set.
pub fn verify_inequality(
    cert: &CoherenceCertificate,
    coeffs: &[(Vec<f64>, Complex64)],
    grid: &GridSpec,
) -> Result<InequalityReport> {
    let dim = cert
        .u
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::BadInput("empty frequency set".into()))?;
    for (p, _) in coeffs {
        if !cert.u.iter().any(|q| dist(p, q) <= 1e-9) {
            return Err(Error::BadInput(format!(
                "coefficient frequency {p:?} is not in U"
            )));
        }
    }
    let s = |t: &[f64]| -> f64 {
        coeffs
            .iter()
            .map(|(lam, c)| c * unit_phase(dot(t, lam)))
            .sum::<Complex64>()
            .norm()
    };
    let lhs = grid_max(&s, dim, grid.half_span, grid.pitch, None, grid.refine_iters);
    let ball = grid_max(
        &s,
        dim,
        cert.tail_radius,
        grid.pitch,
        Some(cert.tail_radius),
        grid.refine_iters,
    );
    let rhs = 2.0 * cert.c_bound * ball;
    Ok(InequalityReport {
        lhs,
        rhs,
        ok: lhs <= rhs + cert.tol,
    })
}

/// Deterministic grid maximization with golden-section polish per axis.
fn grid_max(
    f: &dyn Fn(&[f64]) -> f64,
    dim: usize,
    half_span: f64,
    pitch: f64,
    ball: Option<f64>,
    refine_iters: usize,
) -> f64 {
    let steps = ((2.0 * half_span / pitch).ceil() as usize).max(2);
    let mut best = f64::NEG_INFINITY;
    let mut best_t = vec![0.0; dim];
    let mut idx = vec![0usize; dim];
    'outer: loop {
        let t: Vec<f64> = idx
            .iter()
            .map(|i| -half_span + 2.0 * half_span * *i as f64 / steps as f64)
            .collect();
        let inside = ball.map_or(true, |r| norm(&t) <= r);
        if inside {
            let v = f(&t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        for i in (0..dim).rev() {
            idx[i] += 1;
            if idx[i] <= steps {
                continue 'outer;
            }
            idx[i] = 0;
            if i == 0 {
                break 'outer;
            }
        }
    }
    // golden-section polish along each axis in turn
    let golden = 0.618_033_988_749_894_9_f64;
    let mut t = best_t;
    for _round in 0..2 {
        for axis in 0..dim {
            let mut lo = t[axis] - pitch;
            let mut hi = t[axis] + pitch;
            for _ in 0..refine_iters {
                let m1 = hi - golden * (hi - lo);
                let m2 = lo + golden * (hi - lo);
                let at = |x: f64, t: &[f64]| {
                    let mut q = t.to_vec();
                    q[axis] = x;
                    if ball.map_or(true, |r| norm(&q) <= r) {
                        f(&q)
                    } else {
                        f64::NEG_INFINITY
                    }
                };
                if at(m1, &t) >= at(m2, &t) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let cand = 0.5 * (lo + hi);
            let mut q = t.clone();
            q[axis] = cand;
            if ball.map_or(true, |r| norm(&q) <= r) && f(&q) > best {
                best = f(&q);
                t = q;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::pair_from_comb;
    use crate::lattice::{Coset, Lattice};
    use crate::measure::Atom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn comb_pair(r_time: f64, r_freq: f64) -> FourierPair {
        let c = Coset::new(Lattice::integer(1).unwrap(), vec![0.0]);
        pair_from_comb(&c, r_time, r_freq).unwrap()
    }

    #[test]
    fn select_u_comb() {
        let m = AtomicMeasure::comb(&Coset::new(Lattice::integer(1).unwrap(), vec![0.0]), 5.5)
            .unwrap();
        let u = select_u(&m, 0.5);
        assert_eq!(u.len(), m.len());
    }

    #[test]
    fn select_u_filters_small_masses() {
        // alternate masses 1 and 0.1 on Z
        let atoms: Vec<Atom> = (-5..=5)
            .map(|n| {
                let mass = if n % 2 == 0 { 1.0 } else { 0.1 };
                Atom::new(vec![n as f64], Complex64::new(mass, 0.0))
            })
            .collect();
        let m = AtomicMeasure::new(1, atoms, 6.0, Some(1.0)).unwrap();
        let u = select_u(&m, 0.5);
        assert_eq!(u.len(), 5);
        for p in &u {
            assert_eq!(p[0].rem_euclid(2.0), 0.0);
        }
    }

    #[test]
    fn select_u_filters_close_pairs() {
        // a pair at distance ε/2 with large masses: both excluded
        let atoms = vec![
            Atom::new(vec![0.0], Complex64::ONE),
            Atom::new(vec![0.25], Complex64::ONE),
            Atom::new(vec![3.0], Complex64::ONE),
        ];
        let m = AtomicMeasure::new(1, atoms, 4.0, None).unwrap();
        let u = select_u(&m, 0.5);
        assert_eq!(u.len(), 1);
        assert_eq!(u[0][0], 3.0);
    }

    #[test]
    fn certificate_for_integer_comb() {
        let pair = comb_pair(10.0, 280.0);
        let t_samples: Vec<Vec<f64>> = vec![vec![0.0], vec![0.37], vec![-1.91]];
        let cert =
            build_certificate(&pair, 0.5, &t_samples, &CertificateOptions::default()).unwrap();
        assert!(cert.interp_residual <= 1e-6, "interp {}", cert.interp_residual);
        assert!(cert.eta < 0.25);
        assert!(cert.c_bound.is_finite() && cert.c_bound > 0.5);
        assert!(cert.tail_radius.is_finite() && cert.tail_radius > 0.5);
    }

    #[test]
    fn certificate_constants_reproducible_across_t() {
        let pair = comb_pair(10.0, 280.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let opts = CertificateOptions::default();
        let base = build_certificate(&pair, 0.5, &[vec![0.0]], &opts).unwrap();
        for _ in 0..3 {
            let t = vec![rng.random_range(-10.0..10.0)];
            let cert = build_certificate(&pair, 0.5, &[t], &opts).unwrap();
            assert_eq!(cert.c_bound, base.c_bound);
            assert_eq!(cert.tail_radius, base.tail_radius);
        }
    }

    #[test]
    fn inequality_single_exponent() {
        let pair = comb_pair(10.0, 280.0);
        let cert =
            build_certificate(&pair, 0.5, &[vec![0.0]], &CertificateOptions::default()).unwrap();
        let coeffs = vec![(vec![1.0], Complex64::ONE)];
        let grid = GridSpec::default_for(&cert);
        let rep = verify_inequality(&cert, &coeffs, &grid).unwrap();
        assert!(rep.ok);
        assert!((rep.lhs - 1.0).abs() < 1e-9);
        assert!(rep.rhs >= 1.0);
    }

    #[test]
    fn inequality_random_coefficients_and_homogeneity() {
        let pair = comb_pair(8.0, 280.0);
        let cert =
            build_certificate(&pair, 0.5, &[vec![0.0]], &CertificateOptions::default()).unwrap();
        let grid = GridSpec::default_for(&cert);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let coeffs: Vec<(Vec<f64>, Complex64)> = cert
                .u
                .iter()
                .map(|p| {
                    (
                        p.clone(),
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    )
                })
                .collect();
            let rep = verify_inequality(&cert, &coeffs, &grid).unwrap();
            assert!(rep.ok, "lhs {} rhs {}", rep.lhs, rep.rhs);
            // scaling by a positive factor preserves the outcome
            let scaled: Vec<(Vec<f64>, Complex64)> = coeffs
                .iter()
                .map(|(p, c)| (p.clone(), c * 3.0))
                .collect();
            let rep2 = verify_inequality(&cert, &scaled, &grid).unwrap();
            assert!(rep2.ok);
            assert!((rep2.lhs - 3.0 * rep.lhs).abs() < 1e-6 * (1.0 + rep.lhs));
        }
    }

    #[test]
    fn inequality_rejects_foreign_frequency() {
        let pair = comb_pair(8.0, 280.0);
        let cert =
            build_certificate(&pair, 0.5, &[vec![0.0]], &CertificateOptions::default()).unwrap();
        let coeffs = vec![(vec![0.123], Complex64::ONE)];
        let grid = GridSpec::default_for(&cert);
        assert!(verify_inequality(&cert, &coeffs, &grid).is_err());
    }
}
