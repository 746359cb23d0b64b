//! Uniform grids on the k-torus with FFT synthesis and analysis.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Row-major k-dimensional grid with `n` samples per axis.
#[derive(Debug, Clone, Copy)]
pub struct TorusGrid {
    pub k: usize,
    pub n: usize,
}

impl TorusGrid {
    pub fn cells(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    /// Flat index of a multi-index reduced mod n per axis.
    pub fn flat_index(&self, m: &[i64]) -> usize {
        let n = self.n as i64;
        let mut idx = 0usize;
        for mi in m {
            let r = mi.rem_euclid(n) as usize;
            idx = idx * self.n + r;
        }
        idx
    }

    /// Centered multi-index of a flat index: each component in `[−n/2, n/2)`.
    pub fn centered_index(&self, mut flat: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.k];
        for i in (0..self.k).rev() {
            let r = (flat % self.n) as i64;
            flat /= self.n;
            out[i] = if r >= (self.n as i64 + 1) / 2 {
                r - self.n as i64
            } else {
                r
            };
        }
        out
    }

    /// The grid point `θ = j/n` of a flat index.
    pub fn point(&self, mut flat: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.k];
        for i in (0..self.k).rev() {
            out[i] = (flat % self.n) as f64 / self.n as f64;
            flat /= self.n;
        }
        out
    }

    /// Samples `F(θ_j) = Σ c_m e^{2πi⟨m, j⟩/n}` on the full grid.
    pub fn synthesize(&self, terms: &[(Complex64, Vec<i64>)]) -> Vec<Complex64> {
        let mut data = vec![Complex64::ZERO; self.cells()];
        for (c, m) in terms {
            data[self.flat_index(m)] += c;
        }
        self.fft_all_axes(&mut data, true);
        data
    }

    /// Recovers (aliased) Fourier coefficients from grid samples.
    pub fn analyze(&self, samples: &[Complex64]) -> Vec<Complex64> {
        let mut data = samples.to_vec();
        self.fft_all_axes(&mut data, false);
        let scale = 1.0 / self.cells() as f64;
        for v in &mut data {
            *v *= scale;
        }
        data
    }

    fn fft_all_axes(&self, data: &mut [Complex64], inverse: bool) {
        let mut planner = FftPlanner::new();
        let fft = if inverse {
            planner.plan_fft_inverse(self.n)
        } else {
            planner.plan_fft_forward(self.n)
        };
        let total = data.len();
        let mut line = vec![Complex64::ZERO; self.n];
        for axis in 0..self.k {
            let stride = self.n.pow((self.k - 1 - axis) as u32);
            let block = stride * self.n;
            let blocks = total / block;
            for b in 0..blocks {
                for low in 0..stride {
                    let base = b * block + low;
                    for t in 0..self.n {
                        line[t] = data[base + t * stride];
                    }
                    fft.process(&mut line);
                    for t in 0..self.n {
                        data[base + t * stride] = line[t];
                    }
                }
            }
        }
    }
}
