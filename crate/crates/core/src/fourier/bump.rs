//! The standard compactly supported mollifier and its tabulated transform.
//!
//! The profile is radial: `ψ(x) = exp(1 − 1/(1 − |x/η|²))` for `|x| < η`,
//! zero otherwise, so `ψ(0) = 1` exactly, `ψ` is even, and `supp ψ ⊂ B(0,η)`.
//! Its Fourier transform has no closed form; it is tabulated on a radial grid
//! by a single long zero-padded FFT (spectrally accurate because every
//! derivative of the profile vanishes at the support boundary) and read back
//! through cubic interpolation with an empirically validated error bound.
//! In two dimensions the radial transform is obtained from the projection
//! slice: the planar transform equals the 1-D cosine transform of the
//! profile's line projection.

use super::decay::DecayEnvelope;
use crate::util::{integrate_panels, norm};
use crate::{Error, Result};
use rustfft::{num_complex::Complex, FftPlanner};

/// Table range in the scale-free variable `u = η·ρ`.
const U_MAX: f64 = 160.0;
/// FFT length for the table build.
const FFT_LEN: usize = 1 << 20;
/// Reciprocal sample spacing in units of `1/η` (controls alias level).
const SAMPLES_PER_ETA: f64 = 920.0;

#[derive(Debug, Clone)]
pub struct BumpFunction {
    dim: usize,
    support_radius: f64,
    table: TransformTable,
}

#[derive(Debug, Clone)]
struct TransformTable {
    step: f64,
    values: Vec<f64>,
    interp_err: f64,
    envelope: DecayEnvelope,
}

impl BumpFunction {
    /// Builds the bump of support radius `eta` in dimension `dim` (1 or 2).
    pub fn new(dim: usize, eta: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::BadInput("bump support radius must be positive".into()));
        }
        if dim == 0 || dim > 2 {
            return Err(Error::UnsupportedDimension { dim, max: 2 });
        }
        let table = build_table(dim, eta);
        Ok(BumpFunction {
            dim,
            support_radius: eta,
            table,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Stored bound on the cubic-interpolation error of the table.
    pub fn table_error(&self) -> f64 {
        self.table.interp_err
    }

    /// Certified decay majorant for `|ψ̂|`.
    pub fn transform_envelope(&self) -> &DecayEnvelope {
        &self.table.envelope
    }

    /// Radial profile value at distance `r` from the origin.
    pub fn profile(&self, r: f64) -> f64 {
        mollifier(r, self.support_radius)
    }

    /// `ψ(x)` for a point of the ambient dimension.
    pub fn eval_point(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.profile(norm(x))
    }

    /// `ψ̂` at radial frequency `|y| = rho` (real: the profile is even).
    pub fn transform_at(&self, rho: f64) -> f64 {
        let rho = rho.abs();
        let x = rho / self.table.step;
        let i1 = x.floor() as isize;
        if (i1 as usize) + 2 >= self.table.values.len() {
            return self.transform_direct(rho);
        }
        let t = x - i1 as f64;
        let get = |i: isize| -> f64 {
            // even symmetry across zero
            let i = if i < 0 { -i } else { i } as usize;
            self.table.values[i]
        };
        let (p0, p1, p2, p3) = (get(i1 - 1), get(i1), get(i1 + 1), get(i1 + 2));
        0.5 * (2.0 * p1
            + (-p0 + p2) * t
            + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t
            + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t)
    }

    /// `ψ̂(y)` for a frequency vector.
    pub fn transform_at_point(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.dim);
        self.transform_at(norm(y))
    }

    /// Reference quadrature evaluation (slow path, also used beyond the table).
    pub fn transform_direct(&self, rho: f64) -> f64 {
        let eta = self.support_radius;
        let panels = (4.0 * eta * rho).ceil().max(16.0) as usize;
        match self.dim {
            1 => 2.0 * integrate_panels(0.0, eta, panels, 16, |r| {
                mollifier(r, eta) * (crate::util::TWO_PI * rho * r).cos()
            }),
            2 => 2.0 * integrate_panels(0.0, eta, panels, 16, |s| {
                projected_profile(s, eta) * (crate::util::TWO_PI * rho * s).cos()
            }),
            _ => unreachable!(),
        }
    }
}

fn mollifier(r: f64, eta: f64) -> f64 {
    let t = r / eta;
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// Line projection of the planar radial bump:
/// `Φ(s) = ∫ ψ(√(s²+u²)) du` over the chord at offset `s`.
fn projected_profile(s: f64, eta: f64) -> f64 {
    let s = s.abs();
    if s >= eta {
        return 0.0;
    }
    let half_chord = (eta * eta - s * s).sqrt();
    2.0 * integrate_panels(0.0, half_chord, 4, 16, |u| {
        mollifier((s * s + u * u).sqrt(), eta)
    })
}

fn build_table(dim: usize, eta: f64) -> TransformTable {
    let dr = eta / SAMPLES_PER_ETA;
    let mut buf = vec![Complex::new(0.0, 0.0); FFT_LEN];
    let support_samples = SAMPLES_PER_ETA.ceil() as usize;
    let sample = |r: f64| -> f64 {
        match dim {
            1 => mollifier(r, eta),
            _ => projected_profile(r, eta),
        }
    };
    for j in 0..=support_samples {
        let v = sample(j as f64 * dr);
        buf[j].re = v;
        if j > 0 {
            buf[FFT_LEN - j].re = v;
        }
    }
    FftPlanner::new().plan_fft_forward(FFT_LEN).process(&mut buf);
    let step = 1.0 / (FFT_LEN as f64 * dr);
    let len = (U_MAX / eta / step).floor() as usize;
    let values: Vec<f64> = buf[..len.min(FFT_LEN / 2)]
        .iter()
        .map(|z| z.re * dr)
        .collect();

    let envelope = {
        let samples: Vec<(f64, f64)> = values
            .iter()
            .enumerate()
            .step_by(8)
            .map(|(i, v)| (i as f64 * step, v.abs()))
            .collect();
        DecayEnvelope::fit(&samples)
    };

    let mut table = TransformTable {
        step,
        values,
        interp_err: 0.0,
        envelope,
    };
    // validate interpolation against direct quadrature at off-grid points
    let probe = BumpFunction {
        dim,
        support_radius: eta,
        table: table.clone(),
    };
    let mut err: f64 = 0.0;
    for i in 0..40 {
        let rho = (i as f64 + 0.37) / 41.0 * (table.values.len() as f64 - 3.0) * step;
        err = err.max((probe.transform_at(rho) - probe.transform_direct(rho)).abs());
    }
    table.interp_err = (2.0 * err).max(1e-15);
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_invariants() {
        let b = BumpFunction::new(1, 0.4).unwrap();
        assert_eq!(b.profile(0.0), 1.0);
        assert_eq!(b.profile(0.4), 0.0);
        assert_eq!(b.profile(0.41), 0.0);
        assert_eq!(b.profile(0.3), b.profile(-0.3));
        assert!(b.profile(0.2) > 0.0 && b.profile(0.2) < 1.0);
    }

    #[test]
    fn transform_table_matches_direct_quadrature_1d() {
        let b = BumpFunction::new(1, 0.25).unwrap();
        let bound = b.table_error().max(1e-11);
        for rho in [0.0, 0.5, 3.0, 17.3, 80.1, 333.0] {
            let t = b.transform_at(rho);
            let d = b.transform_direct(rho);
            assert!(
                (t - d).abs() <= bound,
                "rho={rho}: table {t} vs direct {d} (bound {bound})"
            );
        }
        // transform at 0 equals the integral of the profile
        let mass = integrate_panels(-0.25, 0.25, 16, 16, |r| mollifier(r, 0.25));
        assert!((b.transform_at(0.0) - mass).abs() < 1e-12);
    }

    #[test]
    fn transform_table_matches_direct_quadrature_2d() {
        let b = BumpFunction::new(2, 0.8).unwrap();
        let bound = b.table_error().max(1e-10);
        for rho in [0.0, 1.1, 6.4, 30.0] {
            let t = b.transform_at(rho);
            let d = b.transform_direct(rho);
            assert!(
                (t - d).abs() <= bound,
                "rho={rho}: table {t} vs direct {d} (bound {bound})"
            );
        }
        // value at zero is the planar mass of the bump
        let mass = 2.0 * std::f64::consts::PI
            * integrate_panels(0.0, 0.8, 8, 16, |r| r * mollifier(r, 0.8));
        assert!((b.transform_at(0.0) - mass).abs() < 1e-9);
    }

    #[test]
    fn envelope_dominates_table() {
        let b = BumpFunction::new(1, 0.25).unwrap();
        let env = b.transform_envelope();
        for i in (0..b.table.values.len()).step_by(97) {
            let rho = i as f64 * b.table.step;
            assert!(env.value(rho) + 1e-14 >= b.table.values[i].abs());
        }
    }

    #[test]
    fn rejects_unsupported_dimension() {
        assert!(BumpFunction::new(3, 0.3).is_err());
        assert!(BumpFunction::new(1, -0.1).is_err());
    }
}
