//! Functional calculus on exponential sums.
//!
//! An exponential sum whose frequencies lie in the Z-span of a small basis
//! lifts to a trigonometric polynomial on a k-torus. A symbol is applied
//! pointwise on a uniform grid, the composed function's coefficients are
//! recovered by FFT, and the recovered sum is validated on a finer grid; the
//! grid is doubled until the measured residual stabilizes (or, for the
//! ε-inverse, until both regime contracts certify below the requested
//! tolerance).

pub mod basis;
pub mod grid;

use crate::exp_sum::{ExpSum, Term};

use crate::{Error, Result};
use basis::FrequencyBasis;
use grid::TorusGrid;
use num_complex::Complex64;

/// Per-axis grid cap.
const MAX_GRID_PER_AXIS: usize = 4096;
/// Total grid cell cap across axes.
const MAX_GRID_CELLS: usize = 1 << 22;
/// Rank cap for the torus lift.
const MAX_RANK: usize = 3;

/// Symbols applied pointwise to a lifted exponential sum.
#[derive(Debug, Clone)]
pub enum HolomorphicSymbol {
    /// `h(z) = 1/z`; requires `|z| > 0` on the sampled torus.
    Reciprocal,
    /// `h(z) = e^z`.
    Exponential,
    /// `h(z) = Σ aⱼ zʲ` with the given coefficients (constant term first).
    Polynomial(Vec<Complex64>),
    /// Power series within its radius of convergence; requires
    /// `|z| < radius` on the sampled torus.
    PowerSeries { coeffs: Vec<Complex64>, radius: f64 },
    /// Smooth ε-inverse: `h(z) = η(|z|)/z` with a C^∞ ramp `η` vanishing on
    /// `[0, ε/2]` and equal to 1 on `[ε, ∞)`.
    EpsInverse { eps: f64, order: f64 },
}

impl HolomorphicSymbol {
    pub fn apply(&self, z: Complex64) -> Complex64 {
        match self {
            HolomorphicSymbol::Reciprocal => z.inv(),
            HolomorphicSymbol::Exponential => z.exp(),
            HolomorphicSymbol::Polynomial(coeffs) => horner(coeffs, z),
            HolomorphicSymbol::PowerSeries { coeffs, .. } => horner(coeffs, z),
            HolomorphicSymbol::EpsInverse { eps, order } => {
                let w = smooth_ramp(z.norm(), *eps, *order);
                if w == 0.0 {
                    Complex64::ZERO
                } else {
                    w * z.inv()
                }
            }
        }
    }

    /// Checks the symbol's domain guard on sampled values; reports the first
    /// offending grid point.
    pub fn guard_check(&self, values: &[Complex64]) -> Result<()> {
        match self {
            HolomorphicSymbol::Reciprocal => {
                for (i, z) in values.iter().enumerate() {
                    if z.norm() < 1e-150 {
                        return Err(Error::DomainGuard { index: i, value: *z });
                    }
                }
                Ok(())
            }
            HolomorphicSymbol::PowerSeries { radius, .. } => {
                for (i, z) in values.iter().enumerate() {
                    if z.norm() >= *radius {
                        return Err(Error::DomainGuard { index: i, value: *z });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Estimate of `max |h′|` over the sampled values, used to charge the
    /// input's tail ledger through the composition.
    fn derivative_bound(&self, values: &[Complex64]) -> f64 {
        let max_abs = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let min_abs = values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        match self {
            HolomorphicSymbol::Reciprocal => {
                if min_abs > 0.0 {
                    1.0 / (min_abs * min_abs)
                } else {
                    f64::INFINITY
                }
            }
            HolomorphicSymbol::Exponential => max_abs.exp(),
            HolomorphicSymbol::Polynomial(coeffs) | HolomorphicSymbol::PowerSeries { coeffs, .. } => {
                coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, a)| j as f64 * a.norm() * max_abs.powi(j as i32 - 1))
                    .sum()
            }
            HolomorphicSymbol::EpsInverse { eps, order } => {
                // ramp slope scales like order-dependent constant over the
                // transition width ε/2, plus the 1/z factor
                let half = eps / 2.0;
                let ramp_slope = 2.0 * (1.0 + order) / half;
                ramp_slope / half + 1.0 / (half * half)
            }
        }
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for a in coeffs.iter().rev() {
        acc = acc * z + a;
    }
    acc
}

/// C^∞ ramp: 0 on `[0, ε/2]`, 1 on `[ε, ∞)`, built from `exp(−order/u)`.
fn smooth_ramp(v: f64, eps: f64, order: f64) -> f64 {
    let u = (v - eps / 2.0) / (eps / 2.0);
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let q = (-order / u).exp();
        let q1 = (-order / (1.0 - u)).exp();
        q / (q + q1)
    }
}

/// Result of a grid-based coefficient recovery.
#[derive(Debug, Clone)]
pub struct ComposeResult {
    pub sum: ExpSum,
    /// Max deviation `|G(θ) − h(F(θ))|` measured on a grid finer than the
    /// recovery grid.
    pub residual: f64,
    pub grid_n: usize,
    /// Coefficient mass dropped below `drop_tol` (also charged to the sum).
    pub dropped: f64,
}

/// Result of the ε-inverse with its two regime residuals.
#[derive(Debug, Clone)]
pub struct EpsInverseResult {
    pub sum: ExpSum,
    /// Max `|F·G − 1|` where `|F| ≥ ε` on the validation grid.
    pub residual_identity: f64,
    /// Max `|G|` where `|F| ≤ ε/2` on the validation grid.
    pub residual_zero: f64,
    pub grid_n: usize,
    pub dropped: f64,
}

/// Applies `h` pointwise to `f` and recovers an exponential sum with
/// frequencies in the Z-span of `basis`.
pub fn compose(
    h: &HolomorphicSymbol,
    f: &ExpSum,
    basis: &FrequencyBasis,
    grid_n: usize,
    drop_tol: f64,
) -> Result<ComposeResult> {
    let lift = lift_terms(f, basis)?;
    let k = basis.rank();
    if k == 0 {
        // constant input: apply the symbol to the constant value
        let value = lift.iter().map(|(c, _)| *c).sum::<Complex64>();
        h.guard_check(&[value])?;
        let out = ExpSum::constant(f.dim(), h.apply(value));
        return Ok(ComposeResult {
            sum: out,
            residual: 0.0,
            grid_n: 1,
            dropped: 0.0,
        });
    }
    if k > MAX_RANK {
        return Err(Error::RankTooLarge { rank: k, max: MAX_RANK });
    }

    let mut n = initial_grid(grid_n, k, &lift)?;
    let mut previous: Option<(f64, RecoveryOutput)> = None;
    loop {
        let rec = recover(h, &lift, k, n, drop_tol)?;
        let res = rec.residual;
        let stop = match &previous {
            Some((prev_res, _)) => {
                res <= 1e-13 * rec.value_scale || (res - prev_res).abs() <= 0.1 * prev_res
            }
            None => res <= 1e-13 * rec.value_scale,
        };
        let can_double = fits_caps(2 * n, k);
        if stop || !can_double {
            let chosen = rec;
            return finish_compose(f, basis, h, chosen, n, drop_tol);
        }
        previous = Some((res, rec));
        n *= 2;
    }
}

fn finish_compose(
    f: &ExpSum,
    basis: &FrequencyBasis,
    h: &HolomorphicSymbol,
    rec: RecoveryOutput,
    n: usize,
    _drop_tol: f64,
) -> Result<ComposeResult> {
    let mut sum = unfold(f.dim(), basis, &rec.terms, f.merge_tol())?;
    let lip = h.derivative_bound(&rec.samples);
    let charge = rec.dropped + lip * f.tail_bound();
    if charge.is_finite() {
        sum.charge_tail(charge);
    }
    Ok(ComposeResult {
        sum,
        residual: rec.residual,
        grid_n: n,
        dropped: rec.dropped,
    })
}

/// The certified smooth ε-inverse of `f`.
///
/// On the validation grid the result `g` satisfies `|f·g − 1| ≤ tol` wherever
/// `|f| ≥ ε` and `|g| ≤ tol` wherever `|f| ≤ ε/2`; the grid doubles until both
/// hold or the cap is reached (then the call errors, reporting the residual).
pub fn eps_inverse(
    f: &ExpSum,
    eps: f64,
    grid_n: usize,
    drop_tol: f64,
    tol: f64,
) -> Result<EpsInverseResult> {
    if !(eps > 0.0) {
        return Err(Error::BadInput("eps must be positive".into()));
    }
    let basis = basis::find_basis_with_cap(&f.frequencies(), 1e-9, 1 << 16)?;
    let k = basis.rank();
    if k > MAX_RANK {
        return Err(Error::RankTooLarge { rank: k, max: MAX_RANK });
    }
    let h = HolomorphicSymbol::EpsInverse { eps, order: 1.0 };
    let lift = lift_terms(f, &basis)?;

    if k == 0 {
        let value = lift.iter().map(|(c, _)| *c).sum::<Complex64>();
        let g = h.apply(value);
        let sum = ExpSum::constant(f.dim(), g);
        let (ri, rz) = regime_residuals(&[value], &[g], eps);
        return Ok(EpsInverseResult {
            sum,
            residual_identity: ri,
            residual_zero: rz,
            grid_n: 1,
            dropped: 0.0,
        });
    }

    let mut n = initial_grid(grid_n, k, &lift)?;
    loop {
        let rec = recover(&h, &lift, k, n, drop_tol)?;
        let (ri, rz) = regime_residuals(&rec.check_f, &rec.check_g, eps);
        if ri <= tol && rz <= tol {
            let mut sum = unfold(f.dim(), &basis, &rec.terms, f.merge_tol())?;
            sum.charge_tail(rec.dropped);
            return Ok(EpsInverseResult {
                sum,
                residual_identity: ri,
                residual_zero: rz,
                grid_n: n,
                dropped: rec.dropped,
            });
        }
        if !fits_caps(2 * n, k) {
            return Err(Error::GridTooCoarse {
                residual: ri.max(rz),
                tol,
                grid_n: n,
            });
        }
        n *= 2;
    }
}

/// `(|F·G − 1|` on `{|F| ≥ ε}`, `|G|` on `{|F| ≤ ε/2})` maxima.
fn regime_residuals(f_vals: &[Complex64], g_vals: &[Complex64], eps: f64) -> (f64, f64) {
    let mut ri: f64 = 0.0;
    let mut rz: f64 = 0.0;
    for (fv, gv) in f_vals.iter().zip(g_vals) {
        let a = fv.norm();
        if a >= eps {
            ri = ri.max((fv * gv - Complex64::ONE).norm());
        }
        if a <= eps / 2.0 {
            rz = rz.max(gv.norm());
        }
    }
    (ri, rz)
}

struct RecoveryOutput {
    /// Recovered centered-band coefficients above the drop threshold.
    terms: Vec<(Complex64, Vec<i64>)>,
    dropped: f64,
    residual: f64,
    value_scale: f64,
    /// Symbol input samples on the recovery grid (for derivative bounds).
    samples: Vec<Complex64>,
    /// Validation-grid samples of the lifted input and the recovered output.
    check_f: Vec<Complex64>,
    check_g: Vec<Complex64>,
}

fn lift_terms(f: &ExpSum, basis: &FrequencyBasis) -> Result<Vec<(Complex64, Vec<i64>)>> {
    f.terms()
        .iter()
        .map(|t| {
            basis
                .coords_of(&t.freq)
                .map(|m| (t.coeff, m))
                .ok_or_else(|| {
                    Error::BadInput(format!(
                        "frequency {:?} is not covered by the basis",
                        t.freq
                    ))
                })
        })
        .collect()
}

fn initial_grid(grid_n: usize, k: usize, lift: &[(Complex64, Vec<i64>)]) -> Result<usize> {
    let max_m = lift
        .iter()
        .flat_map(|(_, m)| m.iter().map(|x| x.abs()))
        .max()
        .unwrap_or(0) as usize;
    let mut n = grid_n.max(2 * max_m + 2).max(8).next_power_of_two();
    while !fits_caps(n, k) {
        if n <= 8 {
            break;
        }
        n /= 2;
    }
    if n < 2 * max_m + 2 {
        return Err(Error::GridTooCoarse {
            residual: f64::INFINITY,
            tol: 0.0,
            grid_n: n,
        });
    }
    Ok(n)
}

fn fits_caps(n: usize, k: usize) -> bool {
    n <= MAX_GRID_PER_AXIS && (n as f64).powi(k as i32) <= MAX_GRID_CELLS as f64
}

/// One recovery pass at grid size `n`, validated on the doubled grid (or on a
/// deterministic off-grid sample when doubling would exceed the cell budget).
fn recover(
    h: &HolomorphicSymbol,
    lift: &[(Complex64, Vec<i64>)],
    k: usize,
    n: usize,
    drop_tol: f64,
) -> Result<RecoveryOutput> {
    let g = TorusGrid { k, n };
    let f_samples = g.synthesize(lift);
    h.guard_check(&f_samples)?;
    let g_samples: Vec<Complex64> = f_samples.iter().map(|z| h.apply(*z)).collect();
    let mut coeffs = g.analyze(&g_samples);

    // Fejér taper only when the outer band carries substantial mass
    let band = n as i64 / 2;
    let mut outer = 0.0;
    let mut total = 0.0;
    for (flat, c) in coeffs.iter().enumerate() {
        let m = g.centered_index(flat);
        let a = c.norm();
        total += a;
        if m.iter().any(|x| x.abs() > band / 2) {
            outer += a;
        }
    }
    if outer > 0.1 * total && outer > 10.0 * drop_tol {
        for (flat, c) in coeffs.iter_mut().enumerate() {
            let m = g.centered_index(flat);
            let w: f64 = m
                .iter()
                .map(|x| 1.0 - x.abs() as f64 / (band as f64 + 1.0))
                .product();
            *c *= w;
        }
    }

    let mut terms = Vec::new();
    let mut dropped = 0.0;
    for (flat, c) in coeffs.iter().enumerate() {
        let a = c.norm();
        if a > drop_tol {
            terms.push((*c, g.centered_index(flat)));
        } else {
            dropped += a;
        }
    }

    let value_scale = g_samples.iter().map(|z| z.norm()).fold(0.0, f64::max);

    // validate on the doubled grid when affordable, else on a golden-ratio
    // off-grid sample evaluated directly
    let (residual, check_f, check_g) = if (2 * n).pow(k as u32) <= 2 * MAX_GRID_CELLS {
        let g2 = TorusGrid { k, n: 2 * n };
        let f2 = g2.synthesize(lift);
        h.guard_check(&f2)?;
        let rec2 = g2.synthesize(&terms);
        let mut r: f64 = 0.0;
        for (a, b) in f2.iter().zip(&rec2) {
            r = r.max((h.apply(*a) - b).norm());
        }
        let hg: Vec<Complex64> = rec2;
        (r, f2, hg)
    } else {
        let probes = 4096usize;
        let mut r: f64 = 0.0;
        let mut cf = Vec::with_capacity(probes);
        let mut cg = Vec::with_capacity(probes);
        for p in 0..probes {
            let theta: Vec<f64> = (0..k)
                .map(|axis| {
                    let golden = 0.618_033_988_749_894_9_f64;
                    ((p as f64 + 1.0) * golden * (axis as f64 + 1.0)).fract()
                })
                .collect();
            let fv = eval_lift(lift, &theta);
            let gv = eval_lift(&terms, &theta);
            r = r.max((h.apply(fv) - gv).norm());
            cf.push(fv);
            cg.push(gv);
        }
        (r, cf, cg)
    };

    Ok(RecoveryOutput {
        terms,
        dropped,
        residual,
        value_scale,
        samples: f_samples,
        check_f,
        check_g,
    })
}

fn eval_lift(terms: &[(Complex64, Vec<i64>)], theta: &[f64]) -> Complex64 {
    terms
        .iter()
        .map(|(c, m)| {
            let phase: f64 = m.iter().zip(theta).map(|(mi, t)| *mi as f64 * t).sum();
            c * Complex64::cis(2.0 * std::f64::consts::PI * phase)
        })
        .sum()
}

/// Maps recovered torus coefficients back to frequencies in `R^d`.
fn unfold(
    dim: usize,
    basis: &FrequencyBasis,
    terms: &[(Complex64, Vec<i64>)],
    merge_tol: f64,
) -> Result<ExpSum> {
    let out: Vec<Term> = terms
        .iter()
        .map(|(c, m)| Term::new(*c, basis.frequency_of(m)))
        .collect();
    ExpSum::with_tols(dim, out, merge_tol, 0.0)
}

/// Frequencies of the output lie in the Z-span of the basis by construction;
/// this helper asserts it for tests.
pub fn in_z_span(basis: &FrequencyBasis, sum: &ExpSum, tol: f64) -> bool {
    sum.terms().iter().all(|t| {
        basis
            .coords_of(&t.freq)
            .map(|m| {
                let back = basis.frequency_of(&m);
                t.freq
                    .iter()
                    .zip(&back)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    <= tol
            })
            .unwrap_or(false)
    })
}
