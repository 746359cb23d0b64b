//! Measures bundled with their atomic Fourier transforms.
//!
//! A [`FourierPair`] holds a time side (an atomic measure, or an exponential
//! sum standing for the density `f(x)dx`) together with its atomic transform,
//! plus a provenance trail recording how each construction step affected the
//! reliable frequency window. The checks in this module realise the defining
//! pairing identity, the lattice comb transform, the Poisson formula, and the
//! translation-bound/mass-sup estimates as numerical verifiers.

pub mod bump;
pub mod decay;
pub mod test_fn;

use crate::exp_sum::ExpSum;
use crate::lattice::{Coset, Lattice};
use crate::measure::{merge_atoms, Atom, AtomicMeasure};
use crate::util::{dot, norm, unit_phase};
use crate::{Error, Result, DEFAULT_ENUM_CAP, DEFAULT_MERGE_TOL};
use bump::BumpFunction;
use num_complex::Complex64;
use test_fn::TestFunction;

/// Effective-support threshold used when sizing windows for test functions.
const SUPPORT_THRESHOLD: f64 = 1e-16;

/// The time side of a pair: an atomic measure or an exponential-sum density.
#[derive(Debug, Clone)]
pub enum TimeSide {
    Measure(AtomicMeasure),
    Density(ExpSum),
}

impl TimeSide {
    pub fn dim(&self) -> usize {
        match self {
            TimeSide::Measure(m) => m.dim(),
            TimeSide::Density(f) => f.dim(),
        }
    }
}

/// One construction step with its truncation charge.
#[derive(Debug, Clone)]
pub struct ProvenanceStep {
    pub op: String,
    pub params: String,
    pub tail_charge: f64,
}

/// A measure (or density) together with its atomic Fourier transform.
#[derive(Debug, Clone)]
pub struct FourierPair {
    time_side: TimeSide,
    freq_side: AtomicMeasure,
    provenance: Vec<ProvenanceStep>,
    reliable_freq_radius: f64,
}

impl FourierPair {
    pub fn time_side(&self) -> &TimeSide {
        &self.time_side
    }

    pub fn freq_side(&self) -> &AtomicMeasure {
        &self.freq_side
    }

    pub fn provenance(&self) -> &[ProvenanceStep] {
        &self.provenance
    }

    /// Radius inside which the frequency side is complete (no construction
    /// step has shifted unknown atoms into it).
    pub fn reliable_freq_radius(&self) -> f64 {
        self.reliable_freq_radius
    }

    /// Accumulated mass defect of the frequency side from all steps.
    pub fn freq_defect(&self) -> f64 {
        self.provenance.iter().map(|s| s.tail_charge).sum()
    }

    pub fn dim(&self) -> usize {
        self.time_side.dim()
    }

    pub fn time_measure(&self) -> Result<&AtomicMeasure> {
        match &self.time_side {
            TimeSide::Measure(m) => Ok(m),
            TimeSide::Density(_) => Err(Error::BadInput(
                "operation requires an atomic time side, found a density".into(),
            )),
        }
    }

    pub(crate) fn from_parts(
        time_side: TimeSide,
        freq_side: AtomicMeasure,
        provenance: Vec<ProvenanceStep>,
        reliable_freq_radius: f64,
    ) -> Self {
        debug_assert_eq!(time_side.dim(), freq_side.dim());
        FourierPair {
            time_side,
            freq_side,
            provenance,
            reliable_freq_radius,
        }
    }
}

/// Sums pairs with atomic time sides: both sides add (the transform is
/// linear), atoms merging where they coincide; the reliable window is the
/// smallest of the inputs'.
pub fn sum_pairs(pairs: &[&FourierPair], tol: f64) -> Result<FourierPair> {
    if pairs.is_empty() {
        return Err(Error::BadInput("empty pair sum".into()));
    }
    let mut times = Vec::with_capacity(pairs.len());
    let mut freqs = Vec::with_capacity(pairs.len());
    let mut reliable = f64::INFINITY;
    let mut provenance = Vec::new();
    for p in pairs {
        times.push(p.time_measure()?);
        freqs.push(p.freq_side());
        reliable = reliable.min(p.reliable_freq_radius);
        provenance.extend(p.provenance.iter().cloned());
    }
    let time = AtomicMeasure::sum(&times, tol)?;
    let freq = AtomicMeasure::sum(&freqs, tol)?;
    provenance.push(ProvenanceStep {
        op: "sum_pairs".into(),
        params: format!("parts={}", pairs.len()),
        tail_charge: 0.0,
    });
    Ok(FourierPair::from_parts(
        TimeSide::Measure(time),
        freq,
        provenance,
        reliable,
    ))
}

/// Pair for the density `f(x)dx`: one frequency atom per term of `f`.
pub fn pair_from_expsum(f: &ExpSum) -> Result<FourierPair> {
    let dim = f.dim();
    let mut radius: f64 = 1.0;
    let atoms: Vec<Atom> = f
        .terms()
        .iter()
        .map(|t| {
            radius = radius.max(norm(&t.freq) * (1.0 + 1e-12) + 1e-9);
            Atom::new(t.freq.clone(), t.coeff)
        })
        .collect();
    let freq_side = AtomicMeasure::new(dim, atoms, radius, None)?;
    let provenance = vec![ProvenanceStep {
        op: "pair_from_expsum".into(),
        params: format!("terms={}", f.len()),
        tail_charge: f.tail_bound(),
    }];
    Ok(FourierPair::from_parts(
        TimeSide::Density(f.clone()),
        freq_side,
        provenance,
        f64::INFINITY,
    ))
}

/// Pair for the Dirac comb over `L + a`: the transform lives on the dual
/// lattice with masses `(det A)⁻¹ e^{−2πi⟨y,a⟩}`.
pub fn pair_from_comb(coset: &Coset, r_time: f64, r_freq: f64) -> Result<FourierPair> {
    let time = AtomicMeasure::comb(coset, r_time)?;
    let lattice = coset.lattice();
    let dual = lattice.dual()?;
    let det_inv = 1.0 / lattice.det_abs();
    let shift = coset.shift().to_vec();
    let dual_points =
        Coset::new(dual.clone(), vec![0.0; coset.dim()]).enumerate_in_ball(r_freq, DEFAULT_ENUM_CAP)?;
    let atoms: Vec<Atom> = dual_points
        .into_iter()
        .map(|y| {
            let phase = unit_phase(-dot(&y, &shift));
            Atom::new(y, det_inv * phase)
        })
        .collect();
    let sep = dual.shortest_vector_len();
    let freq_side = AtomicMeasure::new(coset.dim(), atoms, r_freq, Some(sep * (1.0 - 1e-12)))?;
    let provenance = vec![ProvenanceStep {
        op: "pair_from_comb".into(),
        params: format!("det={:.6e}, r_time={r_time}, r_freq={r_freq}", lattice.det_abs()),
        tail_charge: 0.0,
    }];
    Ok(FourierPair::from_parts(
        TimeSide::Measure(time),
        freq_side,
        provenance,
        r_freq,
    ))
}

/// Multiplies the time side by `g ∈ W`: time masses become `g(λ)·c_λ` and the
/// frequency side becomes `Σₙ cₙ · (freq side shifted by γₙ)`, merged.
/// The reliable frequency window shrinks by `max|γₙ|`.
pub fn multiply_pair(pair: &FourierPair, g: &ExpSum) -> Result<FourierPair> {
    let time = pair.time_measure()?;
    if g.dim() != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: pair.dim(),
            got: g.dim(),
        });
    }
    let new_time = {
        let mut out = Vec::with_capacity(time.len());
        for a in time.atoms() {
            out.push(Atom::new(a.point.clone(), a.mass * g.eval(&a.point)?));
        }
        AtomicMeasure::new(time.dim(), out, time.window_radius(), time.sep_radius())?
    };

    let freq = pair.freq_side();
    let mut shifted: Vec<Atom> = Vec::with_capacity(freq.len() * g.len().max(1));
    let mut max_shift: f64 = 0.0;
    for term in g.terms() {
        max_shift = max_shift.max(norm(&term.freq));
        for a in freq.atoms() {
            let p: Vec<f64> = a.point.iter().zip(&term.freq).map(|(x, y)| x + y).collect();
            shifted.push(Atom::new(p, term.coeff * a.mass));
        }
    }
    let merged = merge_atoms(shifted, DEFAULT_MERGE_TOL);
    let new_freq = AtomicMeasure::new(
        freq.dim(),
        merged,
        freq.window_radius() + max_shift + 1e-12,
        None,
    )?;

    let tail_charge = g.tail_bound() * freq.total_variation();
    let mut provenance = pair.provenance.clone();
    provenance.push(ProvenanceStep {
        op: "multiply_pair".into(),
        params: format!("terms={}, max_shift={max_shift:.6}", g.len()),
        tail_charge,
    });
    Ok(FourierPair::from_parts(
        TimeSide::Measure(new_time),
        new_freq,
        provenance,
        (pair.reliable_freq_radius - max_shift).max(0.0),
    ))
}

/// Smooth convolution `ψ ⋆ ν` computed on the frequency side: the result is
/// the exponential sum with terms `ψ̂(γ) ν̂({γ})` over the frequency atoms.
/// Errors if the tabulated decay of `ψ̂` cannot certify the requested
/// truncation tolerance at the pair's reliable window.
pub fn convolve_bump(psi: &BumpFunction, pair: &FourierPair, tol: f64) -> Result<ExpSum> {
    if psi.dim() != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: pair.dim(),
            got: psi.dim(),
        });
    }
    let freq = pair.freq_side();
    let dim = pair.dim();
    let growth_c = freq.growth_fit().max(1e-300);
    // an infinite reliable radius means the stored spectrum is complete
    let r_avail = pair.reliable_freq_radius;
    let envelope = psi.transform_envelope();
    let tail = if r_avail.is_infinite() {
        0.0
    } else {
        envelope.tail_mass_bound(growth_c, dim, r_avail)
    };
    if tail > tol {
        let required = envelope
            .required_radius(growth_c, dim, tol)
            .unwrap_or(f64::INFINITY);
        return Err(Error::TruncationInsufficient {
            tail,
            tol,
            required_radius: required,
        });
    }
    let terms: Vec<crate::exp_sum::Term> = freq
        .atoms()
        .iter()
        .map(|a| crate::exp_sum::Term::new(a.mass * psi.transform_at_point(&a.point), a.point.clone()))
        .collect();
    let mut out = ExpSum::new(dim, terms)?;
    let charge = tail
        + psi.table_error() * freq.total_variation()
        + envelope.value(0.0) * pair.freq_defect();
    out.charge_tail(charge);
    Ok(out)
}

/// `|pairing(time side, φ̂) − pairing(freq side, φ)|`: the residual of the
/// defining transform identity against one test function. The density route
/// integrates `f·φ̂` by quadrature, independent of the frequency-side sum.
pub fn verify_pairing(pair: &FourierPair, phi: &TestFunction) -> Result<f64> {
    if phi.dim() != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: pair.dim(),
            got: phi.dim(),
        });
    }
    let freq = pair.freq_side();
    let r_phi = phi.effective_radius(SUPPORT_THRESHOLD);
    if r_phi > pair.reliable_freq_radius {
        return Err(Error::WindowTooSmall {
            needed: r_phi,
            have: pair.reliable_freq_radius,
        });
    }
    let freq_pairing = freq.pairing(|y| Complex64::new(phi.eval(y), 0.0));

    let time_pairing = match &pair.time_side {
        TimeSide::Measure(m) => {
            let r_hat = phi.transform_effective_radius(SUPPORT_THRESHOLD);
            if r_hat > m.window_radius() {
                return Err(Error::WindowTooSmall {
                    needed: r_hat,
                    have: m.window_radius(),
                });
            }
            m.pairing(|x| phi.transform_at(x))
        }
        TimeSide::Density(f) => density_pairing(f, phi)?,
    };
    Ok((time_pairing - freq_pairing).norm())
}

/// Quadrature of `∫ f(x) φ̂(x) dx` over the effective support of `φ̂`.
fn density_pairing(f: &ExpSum, phi: &TestFunction) -> Result<Complex64> {
    let d = f.dim();
    if d > 2 {
        return Err(Error::UnsupportedDimension { dim: d, max: 2 });
    }
    let r_hat = phi.transform_effective_radius(SUPPORT_THRESHOLD * 1e-2);
    let max_freq = f
        .terms()
        .iter()
        .map(|t| norm(&t.freq))
        .fold(0.0, f64::max);
    let panel_w = (0.25 / (1.0 + max_freq)).min(r_hat / 4.0);
    let panels = ((2.0 * r_hat) / panel_w).ceil() as usize;
    let (nodes, weights) = crate::util::gauss_legendre(16).clone();
    let axis: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let lo = -r_hat + 2.0 * r_hat * p as f64 / panels as f64;
            let hi = -r_hat + 2.0 * r_hat * (p + 1) as f64 / panels as f64;
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            nodes
                .iter()
                .zip(&weights)
                .map(move |(x, w)| (mid + half * x, w * half))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut acc = Complex64::ZERO;
    match d {
        1 => {
            for (x, w) in &axis {
                acc += *w * f.eval(&[*x])? * phi.transform_at(&[*x]);
            }
        }
        2 => {
            for (x, wx) in &axis {
                for (y, wy) in &axis {
                    acc += *wx * *wy * f.eval(&[*x, *y])? * phi.transform_at(&[*x, *y]);
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(acc)
}

/// Residual of the generalized Poisson identity
/// `Σ_{λ∈L} φ(λ) = (det A)⁻¹ Σ_{γ∈L*} φ̂(γ)` under truncation to the given
/// radii.
pub fn poisson_check(phi: &TestFunction, lattice: &Lattice, r_time: f64, r_freq: f64) -> Result<f64> {
    if phi.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            got: phi.dim(),
        });
    }
    let r_eff = phi.effective_radius(SUPPORT_THRESHOLD);
    if r_eff > r_time {
        return Err(Error::TruncationInsufficient {
            tail: phi.eval(&radial_point(phi.dim(), r_time)).abs(),
            tol: SUPPORT_THRESHOLD,
            required_radius: r_eff,
        });
    }
    let r_hat_eff = phi.transform_effective_radius(SUPPORT_THRESHOLD);
    if r_hat_eff > r_freq {
        return Err(Error::TruncationInsufficient {
            tail: phi.transform_at(&radial_point(phi.dim(), r_freq)).norm(),
            tol: SUPPORT_THRESHOLD,
            required_radius: r_hat_eff,
        });
    }
    let dim = lattice.dim();
    let primal = Coset::new(lattice.clone(), vec![0.0; dim]);
    let dual = Coset::new(lattice.dual()?, vec![0.0; dim]);
    let mut lhs = Complex64::ZERO;
    for p in primal.enumerate_in_ball(r_time, DEFAULT_ENUM_CAP)? {
        lhs += Complex64::new(phi.eval(&p), 0.0);
    }
    let mut rhs = Complex64::ZERO;
    for y in dual.enumerate_in_ball(r_freq, DEFAULT_ENUM_CAP)? {
        rhs += phi.transform_at(&y);
    }
    rhs /= Complex64::new(lattice.det_abs(), 0.0);
    Ok((lhs - rhs).norm())
}

fn radial_point(dim: usize, r: f64) -> Vec<f64> {
    let mut p = vec![0.0; dim];
    p[0] = r;
    p
}

/// Report of the translation-bound estimate for `Σ|ψ(λ−t)||c_λ|`.
#[derive(Debug, Clone)]
pub struct MassReport {
    /// Analytic bound `C·C′·(d+1)` on the total mass, uniform in `t`.
    pub total_bound: f64,
    /// Radius `r(ε)` beyond which the mass is below `ε`, uniform in `t`.
    pub tail_radius: f64,
    /// Largest direct sum observed over the sampled translations.
    pub direct_sup: f64,
    /// Largest direct tail observed beyond `tail_radius`.
    pub direct_tail: f64,
}

/// Uniform-in-`t` bound on the mass of `|ψ(· − t)| dν` and the radius whose
/// tail falls below `eps`, from the covering estimate
/// `N_t(r) ≤ 3ᵈ·M·(1+r)ᵈ` and profile decay `|ψ(x)| ≤ C′(1+|x|)^{−d−1}`,
/// cross-checked by direct summation over sampled translations.
pub fn schwartz_mass_report(
    psi: &TestFunction,
    nu: &AtomicMeasure,
    eps: f64,
) -> Result<MassReport> {
    if psi.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            expected: nu.dim(),
            got: psi.dim(),
        });
    }
    if !(eps > 0.0) {
        return Err(Error::BadInput("eps must be positive".into()));
    }
    let d = nu.dim();
    let m = nu.translation_bound();
    let covering = 3f64.powi(d as i32) * m;
    let c_prime = psi.profile_decay_constant(d + 1);
    let total_bound = covering * c_prime * (d as f64 + 1.0);
    let tail_radius = (total_bound / eps - 1.0).max(0.0);

    let mut direct_sup: f64 = 0.0;
    let mut direct_tail: f64 = 0.0;
    let samples = sample_translations(nu);
    for t in &samples {
        let mut full = 0.0;
        let mut tail = 0.0;
        for a in nu.atoms() {
            let shifted: Vec<f64> = a.point.iter().zip(t).map(|(p, s)| p - s).collect();
            let v = psi.eval(&shifted).abs() * a.mass.norm();
            full += v;
            if norm(&shifted) > tail_radius {
                tail += v;
            }
        }
        direct_sup = direct_sup.max(full);
        direct_tail = direct_tail.max(tail);
    }
    if direct_sup > total_bound * (1.0 + 1e-9) || direct_tail > eps {
        return Err(Error::BadInput(format!(
            "mass estimate inconsistent: direct {direct_sup:.6e} vs bound {total_bound:.6e}"
        )));
    }
    Ok(MassReport {
        total_bound,
        tail_radius,
        direct_sup,
        direct_tail,
    })
}

fn sample_translations(nu: &AtomicMeasure) -> Vec<Vec<f64>> {
    let d = nu.dim();
    let mut out = vec![vec![0.0; d]];
    let stride = (nu.len() / 64).max(1);
    for a in nu.atoms().iter().step_by(stride) {
        out.push(a.point.clone());
    }
    // a coarse grid inside the window
    let w = nu.window_radius().min(8.0);
    let steps = 5usize;
    let mut idx = vec![0usize; d];
    'outer: loop {
        let t: Vec<f64> = idx
            .iter()
            .map(|i| -w + 2.0 * w * *i as f64 / (steps - 1) as f64)
            .collect();
        out.push(t);
        for i in (0..d).rev() {
            idx[i] += 1;
            if idx[i] < steps {
                continue 'outer;
            }
            idx[i] = 0;
            if i == 0 {
                break 'outer;
            }
        }
    }
    out
}

/// Report of the atom-mass reconstruction from the frequency side.
#[derive(Debug, Clone)]
pub struct MassSupReport {
    /// `max_λ |c_λ − Σ_γ ψ̂(γ) e^{2πi⟨λ,γ⟩} ν̂({γ})|`.
    pub residual: f64,
    /// `max_λ |c_λ|`.
    pub mass_sup: f64,
    /// Integral bound on `|c_λ|` from the transform side.
    pub integral_bound: f64,
}

/// Reconstructs every time-side mass from the frequency side through the
/// compactly supported bump: `c_λ = Σ_γ ψ̂(γ) e^{2πi⟨λ,γ⟩} ν̂({γ})`, valid
/// when `supp ψ` isolates the atoms. Also checks `sup|c_λ|` against the
/// integral bound `∫|ψ̂| d|ν̂|`.
pub fn mass_sup_check(pair: &FourierPair, psi: &BumpFunction, tol: f64) -> Result<MassSupReport> {
    let time = pair.time_measure()?;
    if psi.dim() != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: pair.dim(),
            got: psi.dim(),
        });
    }
    let sep = time.sep_radius().unwrap_or_else(|| time.min_separation());
    if !(sep > 2.0 * psi.support_radius()) {
        return Err(Error::BumpTooWide {
            eta: psi.support_radius(),
            min_sep: sep,
        });
    }
    let freq = pair.freq_side();
    let d = pair.dim();
    let growth_c = freq.growth_fit().max(1e-300);
    let r_avail = pair.reliable_freq_radius;
    let tail = if r_avail.is_infinite() {
        0.0
    } else {
        psi.transform_envelope().tail_mass_bound(growth_c, d, r_avail)
    };
    if tail > tol {
        let required = psi
            .transform_envelope()
            .required_radius(growth_c, d, tol)
            .unwrap_or(f64::INFINITY);
        return Err(Error::TruncationInsufficient {
            tail,
            tol,
            required_radius: required,
        });
    }

    let mut residual: f64 = 0.0;
    let mut mass_sup: f64 = 0.0;
    for a in time.atoms() {
        let mut recon = Complex64::ZERO;
        for b in freq.atoms() {
            recon += psi.transform_at_point(&b.point) * unit_phase(dot(&a.point, &b.point)) * b.mass;
        }
        residual = residual.max((a.mass - recon).norm());
        mass_sup = mass_sup.max(a.mass.norm());
    }
    let covering = 3f64.powi(d as i32) * freq.translation_bound();
    let integral_bound = psi.transform_envelope().total_mass_bound(covering, d) + tail;
    if mass_sup > integral_bound * (1.0 + 1e-9) + tol {
        return Err(Error::BadInput(format!(
            "mass sup {mass_sup:.6e} exceeds the transform-side bound {integral_bound:.6e}"
        )));
    }
    Ok(MassSupReport {
        residual,
        mass_sup,
        integral_bound,
    })
}
