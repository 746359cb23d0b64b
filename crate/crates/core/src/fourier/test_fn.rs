//! Test functions with analytically or numerically known transforms.

use super::bump::BumpFunction;
use crate::util::{dist, dot, norm, unit_phase};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A Gaussian with closed-form transform, or a compactly supported bump with
/// a tabulated transform.
#[derive(Debug, Clone)]
pub struct TestFunction {
    dim: usize,
    amplitude: f64,
    kind: TestFunctionKind,
}

#[derive(Debug, Clone)]
pub enum TestFunctionKind {
    /// `exp(−π |(x − center)/σ|²)`; transform `σᵈ e^{−πσ²|y|²} e^{−2πi⟨c,y⟩}`.
    Gaussian { sigma: f64, center: Vec<f64> },
    Bump(BumpFunction),
}

impl TestFunction {
    pub fn gaussian(sigma: f64, center: Vec<f64>) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::BadInput("gaussian width must be positive".into()));
        }
        Ok(TestFunction {
            dim: center.len(),
            amplitude: 1.0,
            kind: TestFunctionKind::Gaussian { sigma, center },
        })
    }

    pub fn bump(dim: usize, eta: f64) -> Result<Self> {
        Ok(TestFunction {
            dim,
            amplitude: 1.0,
            kind: TestFunctionKind::Bump(BumpFunction::new(dim, eta)?),
        })
    }

    pub fn from_bump(b: BumpFunction) -> Self {
        TestFunction {
            dim: b.dim(),
            amplitude: 1.0,
            kind: TestFunctionKind::Bump(b),
        }
    }

    /// Same function scaled by `alpha`.
    pub fn scaled(mut self, alpha: f64) -> Self {
        self.amplitude *= alpha;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &TestFunctionKind {
        &self.kind
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.amplitude
            * match &self.kind {
                TestFunctionKind::Gaussian { sigma, center } => {
                    let d = dist(x, center) / sigma;
                    (-PI * d * d).exp()
                }
                TestFunctionKind::Bump(b) => b.eval_point(x),
            }
    }

    pub fn transform_at(&self, y: &[f64]) -> Complex64 {
        debug_assert_eq!(y.len(), self.dim);
        self.amplitude
            * match &self.kind {
                TestFunctionKind::Gaussian { sigma, center } => {
                    let n = norm(y);
                    let scale = sigma.powi(self.dim as i32) * (-PI * sigma * sigma * n * n).exp();
                    scale * unit_phase(-dot(center, y))
                }
                TestFunctionKind::Bump(b) => Complex64::new(b.transform_at(norm(y)), 0.0),
            }
    }

    /// Radius beyond which `|φ|` stays below `threshold`.
    pub fn effective_radius(&self, threshold: f64) -> f64 {
        let amp = self.amplitude.abs().max(1e-300);
        match &self.kind {
            TestFunctionKind::Gaussian { sigma, center } => {
                let ratio = (amp / threshold).max(1.0);
                norm(center) + sigma * (ratio.ln() / PI).sqrt()
            }
            TestFunctionKind::Bump(b) => b.support_radius(),
        }
    }

    /// Radius beyond which `|φ̂|` stays below `threshold`.
    pub fn transform_effective_radius(&self, threshold: f64) -> f64 {
        let amp = self.amplitude.abs().max(1e-300);
        match &self.kind {
            TestFunctionKind::Gaussian { sigma, .. } => {
                let scale = amp * sigma.powi(self.dim as i32);
                let ratio = (scale / threshold).max(1.0);
                (ratio.ln() / PI).sqrt() / sigma
            }
            TestFunctionKind::Bump(b) => {
                match b
                    .transform_envelope()
                    .required_radius(1.0, 0, threshold / amp)
                {
                    Some(r) => r,
                    None => f64::INFINITY,
                }
            }
        }
    }

    /// Profile decay constant: smallest `C` observed with
    /// `|φ(x)| ≤ C (1+|x|)^{−m}` (exact for the compact bump; for the Gaussian
    /// the maximum of `|φ|(1+r)^m` over a fine radial grid).
    pub fn profile_decay_constant(&self, m: usize) -> f64 {
        let amp = self.amplitude.abs();
        match &self.kind {
            TestFunctionKind::Gaussian { sigma, center } => {
                // worst case over centers: |φ(x)| ≤ e^{−π(r−|c|)²/σ²} for r ≥ |c|
                let shift = norm(center);
                let mut best: f64 = 0.0;
                let r_max = shift + sigma * 8.0 + 1.0;
                let steps = 4000;
                for i in 0..=steps {
                    let r = r_max * i as f64 / steps as f64;
                    let d = ((r - shift).max(0.0)) / sigma;
                    let v = amp * (-PI * d * d).exp();
                    best = best.max(v * (1.0 + r).powi(m as i32));
                }
                best
            }
            TestFunctionKind::Bump(b) => amp * (1.0 + b.support_radius()).powi(m as i32),
        }
    }
}
