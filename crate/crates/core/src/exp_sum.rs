//! Finite exponential sums `f(x) = Σ cₙ e^{2πi⟨x,λₙ⟩}` with the `Σ|cₙ|` norm.
//!
//! Term lists are kept sorted lexicographically by frequency, frequencies
//! closer than `merge_tol` are identified, and coefficients dropped by the
//! drop policy are charged to a `tail_bound` ledger so every value computed
//! from a sum carries a certified truncation budget.

use crate::lattice::Lattice;
use crate::util::{all_finite, dist, dot, lex_cmp, unit_phase};
use crate::{Error, Result, DEFAULT_DROP_TOL, DEFAULT_MERGE_TOL};
use num_complex::Complex64;

/// One term `c · e^{2πi⟨x,λ⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub freq: Vec<f64>,
}

impl Term {
    pub fn new(coeff: Complex64, freq: Vec<f64>) -> Self {
        Term { coeff, freq }
    }
}

/// Which algebra operation [`ExpSum::combine`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Mul,
}

/// A finite element of the algebra of absolutely convergent exponential sums.
#[derive(Debug, Clone)]
pub struct ExpSum {
    dim: usize,
    terms: Vec<Term>,
    merge_tol: f64,
    tail_bound: f64,
}

impl ExpSum {
    /// Builds a sum from raw terms, merging nearby frequencies and dropping
    /// negligible coefficients into the tail ledger.
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        Self::with_tols(dim, terms, DEFAULT_MERGE_TOL, DEFAULT_DROP_TOL)
    }

    pub fn with_tols(dim: usize, terms: Vec<Term>, merge_tol: f64, drop_tol: f64) -> Result<Self> {
        for t in &terms {
            if t.freq.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: t.freq.len(),
                });
            }
            if !all_finite(&t.freq) || !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                return Err(Error::BadInput("non-finite term".into()));
            }
        }
        let mut sum = ExpSum {
            dim,
            terms,
            merge_tol,
            tail_bound: 0.0,
        };
        sum.normalize(drop_tol);
        Ok(sum)
    }

    /// The empty sum (identically zero).
    pub fn zero(dim: usize) -> Self {
        ExpSum {
            dim,
            terms: Vec::new(),
            merge_tol: DEFAULT_MERGE_TOL,
            tail_bound: 0.0,
        }
    }

    /// The constant sum `c` (single term at frequency 0).
    pub fn constant(dim: usize, c: Complex64) -> Self {
        ExpSum {
            dim,
            terms: if c == Complex64::ZERO {
                Vec::new()
            } else {
                vec![Term::new(c, vec![0.0; dim])]
            },
            merge_tol: DEFAULT_MERGE_TOL,
            tail_bound: 0.0,
        }
    }

    /// The single character `c · e^{2πi⟨x,λ⟩}`.
    pub fn character(coeff: Complex64, freq: Vec<f64>) -> Self {
        let dim = freq.len();
        ExpSum {
            dim,
            terms: vec![Term::new(coeff, freq)],
            merge_tol: DEFAULT_MERGE_TOL,
            tail_bound: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Adds `charge` to the truncation ledger. The ledger never decreases.
    pub fn charge_tail(&mut self, charge: f64) {
        debug_assert!(charge >= 0.0);
        self.tail_bound += charge;
    }

    /// `Σₙ |cₙ|`; zero for the empty sum.
    pub fn w_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// Evaluates the sum at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.coeff * unit_phase(dot(x, &t.freq)))
            .sum())
    }

    /// Pointwise sum or product. For `Mul`, frequencies add pairwise and the
    /// tail ledger propagates as
    /// `tail(f)·‖g‖ + tail(g)·‖f‖ + tail(f)·tail(g)`.
    pub fn combine(&self, other: &ExpSum, op: CombineOp) -> Result<ExpSum> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let merge_tol = self.merge_tol.max(other.merge_tol);
        let (terms, tail) = match op {
            CombineOp::Add => {
                let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
                terms.extend(self.terms.iter().cloned());
                terms.extend(other.terms.iter().cloned());
                (terms, self.tail_bound + other.tail_bound)
            }
            CombineOp::Mul => {
                let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
                for a in &self.terms {
                    for b in &other.terms {
                        let freq: Vec<f64> =
                            a.freq.iter().zip(&b.freq).map(|(x, y)| x + y).collect();
                        terms.push(Term::new(a.coeff * b.coeff, freq));
                    }
                }
                let tail = self.tail_bound * other.w_norm()
                    + other.tail_bound * self.w_norm()
                    + self.tail_bound * other.tail_bound;
                (terms, tail)
            }
        };
        let mut out = ExpSum {
            dim: self.dim,
            terms,
            merge_tol,
            tail_bound: tail,
        };
        out.normalize(DEFAULT_DROP_TOL);
        Ok(out)
    }

    /// Multiplies by the single character `e^{2πi⟨x,γ⟩}`: every frequency is
    /// shifted by `γ`, coefficients and the norm are unchanged.
    pub fn modulate(&self, gamma: &[f64]) -> Result<ExpSum> {
        if gamma.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: gamma.len(),
            });
        }
        let mut out = self.clone();
        for t in &mut out.terms {
            for (f, g) in t.freq.iter_mut().zip(gamma) {
                *f += g;
            }
        }
        // a rigid shift preserves lexicographic order and pairwise distances
        out
            .terms
            .sort_by(|a, b| lex_cmp(&a.freq, &b.freq));
        Ok(out)
    }

    /// Multiplies every coefficient by `c`. The tail ledger scales by `|c|`.
    pub fn scaled(&self, c: Complex64) -> ExpSum {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= c;
        }
        out.tail_bound *= c.norm();
        if c == Complex64::ZERO {
            out.terms.clear();
        }
        out
    }

    /// Replaces every frequency by its representative inside the fundamental
    /// parallelepiped of the dual lattice of `lattice`, summing terms whose
    /// reduced frequencies collide. Values at points of `lattice` are
    /// preserved.
    pub fn reduce_mod_dual(&self, lattice: &Lattice) -> Result<ExpSum> {
        if self.dim != lattice.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: lattice.dim(),
            });
        }
        let dual = lattice.dual()?;
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff, dual.reduce_point(&t.freq)))
            .collect();
        let mut out = ExpSum {
            dim: self.dim,
            terms,
            merge_tol: self.merge_tol,
            tail_bound: self.tail_bound,
        };
        out.normalize(DEFAULT_DROP_TOL);
        Ok(out)
    }

    /// Frequencies of all terms, in stored order.
    pub fn frequencies(&self) -> Vec<Vec<f64>> {
        self.terms.iter().map(|t| t.freq.clone()).collect()
    }

    /// Coefficient at the frequency nearest `freq` within `tol`, if any.
    pub fn coeff_at(&self, freq: &[f64], tol: f64) -> Option<Complex64> {
        self.terms
            .iter()
            .filter(|t| dist(&t.freq, freq) <= tol)
            .map(|t| t.coeff)
            .next()
    }

    /// Sorts terms, merges frequencies within `merge_tol`, drops coefficients
    /// below `drop_tol` into the tail ledger.
    fn normalize(&mut self, drop_tol: f64) {
        self.terms.sort_by(|a, b| lex_cmp(&a.freq, &b.freq));
        let mut kept: Vec<Term> = Vec::with_capacity(self.terms.len());
        let mut window_start = 0usize;
        for term in self.terms.drain(..) {
            // candidates are kept terms whose first coordinate is within tol
            while window_start < kept.len()
                && first_coord(&kept[window_start].freq) + self.merge_tol < first_coord(&term.freq)
            {
                window_start += 1;
            }
            let mut best: Option<(usize, f64)> = None;
            for (i, k) in kept.iter().enumerate().skip(window_start) {
                let d = dist(&k.freq, &term.freq);
                if d <= self.merge_tol && best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((i, d));
                }
            }
            match best {
                Some((i, _)) => kept[i].coeff += term.coeff,
                None => kept.push(term),
            }
        }
        let mut dropped = 0.0;
        kept.retain(|t| {
            let keep = t.coeff.norm() > drop_tol;
            if !keep {
                dropped += t.coeff.norm();
            }
            keep
        });
        self.tail_bound += dropped;
        self.terms = kept;
    }
}

fn first_coord(v: &[f64]) -> f64 {
    v.first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        use rand::SeedableRng;
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn random_sum(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> ExpSum {
        let terms = (0..n)
            .map(|_| {
                Term::new(
                    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect(),
                )
            })
            .collect();
        ExpSum::new(dim, terms).unwrap()
    }

    #[test]
    fn eval_constant_term() {
        let f = ExpSum::constant(1, c(1.0, 0.0));
        assert_eq!(f.eval(&[17.3]).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn eval_direct_substitution() {
        // 1 + 0.5 e^{2πi x} at x = 1/2 gives 1 + 0.5 e^{πi} = 0.5
        let f = ExpSum::new(
            1,
            vec![
                Term::new(c(1.0, 0.0), vec![0.0]),
                Term::new(c(0.5, 0.0), vec![1.0]),
            ],
        )
        .unwrap();
        let v = f.eval(&[0.5]).unwrap();
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_matches_naive_summation() {
        let mut r = rng(7);
        let f = random_sum(&mut r, 2, 10);
        for _ in 0..20 {
            let x = [r.random_range(-5.0..5.0), r.random_range(-5.0..5.0)];
            // independent naive oracle
            let mut expect = Complex64::ZERO;
            for t in f.terms() {
                let phase = crate::util::TWO_PI * (x[0] * t.freq[0] + x[1] * t.freq[1]);
                expect += t.coeff * Complex64::new(phase.cos(), phase.sin());
            }
            let got = f.eval(&x).unwrap();
            assert!((got - expect).norm() < 1e-14);
            assert!(got.norm() <= f.w_norm() + 1e-12);
        }
    }

    #[test]
    fn eval_dimension_mismatch() {
        let f = ExpSum::constant(2, c(1.0, 0.0));
        assert!(matches!(
            f.eval(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mul_exponent_law() {
        let f = ExpSum::character(c(1.0, 0.0), vec![0.7]);
        let g = ExpSum::character(c(1.0, 0.0), vec![-0.2]);
        let p = f.combine(&g, CombineOp::Mul).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p.terms()[0].freq[0] - 0.5).abs() < 1e-15);
        assert!((p.terms()[0].coeff - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mul_with_cancellation() {
        // (1 + 0.5 e(λ)) (1 - 0.5 e(λ)) = 1 - 0.25 e(2λ)
        let lam = 1.3;
        let f = ExpSum::new(
            1,
            vec![
                Term::new(c(1.0, 0.0), vec![0.0]),
                Term::new(c(0.5, 0.0), vec![lam]),
            ],
        )
        .unwrap();
        let g = ExpSum::new(
            1,
            vec![
                Term::new(c(1.0, 0.0), vec![0.0]),
                Term::new(c(-0.5, 0.0), vec![lam]),
            ],
        )
        .unwrap();
        let p = f.combine(&g, CombineOp::Mul).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff_at(&[0.0], 1e-12).unwrap(), c(1.0, 0.0));
        assert!((p.coeff_at(&[2.0 * lam], 1e-12).unwrap() - c(-0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn combine_pointwise_consistency() {
        let mut r = rng(11);
        for _ in 0..10 {
            let f = random_sum(&mut r, 1, 6);
            let g = random_sum(&mut r, 1, 5);
            let p = f.combine(&g, CombineOp::Mul).unwrap();
            let s = f.combine(&g, CombineOp::Add).unwrap();
            for _ in 0..10 {
                let x = [r.random_range(-10.0..10.0)];
                let (fv, gv) = (f.eval(&x).unwrap(), g.eval(&x).unwrap());
                assert!((p.eval(&x).unwrap() - fv * gv).norm() < 1e-12);
                assert!((s.eval(&x).unwrap() - (fv + gv)).norm() < 1e-12);
            }
            assert!(p.w_norm() <= f.w_norm() * g.w_norm() + 1e-12);
        }
    }

    #[test]
    fn w_norm_examples() {
        let f = ExpSum::new(
            1,
            vec![
                Term::new(c(1.0, 0.0), vec![0.0]),
                Term::new(c(0.0, 0.5), vec![2.7]),
            ],
        )
        .unwrap();
        assert!((f.w_norm() - 1.5).abs() < 1e-15);
        assert_eq!(ExpSum::zero(3).w_norm(), 0.0);
    }

    #[test]
    fn modulate_behaviour() {
        let mut r = rng(3);
        let f = random_sum(&mut r, 1, 5);
        let same = f.modulate(&[0.0]).unwrap();
        assert_eq!(same.len(), f.len());
        for (a, b) in f.terms().iter().zip(same.terms()) {
            assert_eq!(a.freq, b.freq);
            assert_eq!(a.coeff, b.coeff);
        }
        let g = f.modulate(&[0.9]).unwrap();
        assert!((g.w_norm() - f.w_norm()).abs() < 1e-15);
        for _ in 0..10 {
            let x = [r.random_range(-1.0..1.0)];
            let want = unit_phase(0.9 * x[0]) * f.eval(&x).unwrap();
            assert!((g.eval(&x).unwrap() - want).norm() < 1e-14);
        }
        for _ in 0..10 {
            let x = [r.random_range(-8.0..8.0)];
            let want = unit_phase(0.9 * x[0]) * f.eval(&x).unwrap();
            assert!((g.eval(&x).unwrap() - want).norm() < 1e-12);
        }
        let single = ExpSum::character(c(1.0, 0.0), vec![0.0]).modulate(&[0.4]).unwrap();
        assert!((single.terms()[0].freq[0] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn reduce_mod_dual_integers() {
        let z = Lattice::integer(1).unwrap();
        let f = ExpSum::character(c(1.0, 0.0), vec![1.25]);
        let r = f.reduce_mod_dual(&z).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.terms()[0].freq[0] - 0.25).abs() < 1e-12);
        // value preserved at the lattice point x = 3
        let x = [3.0];
        assert!((r.eval(&x).unwrap() - f.eval(&x).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn reduce_mod_dual_2d_lattice_points() {
        let a = Lattice::from_rows(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        let mut r = rng(5);
        let f = random_sum(&mut r, 2, 8);
        let red = f.reduce_mod_dual(&a).unwrap();
        let dual = a.dual().unwrap();
        for t in red.terms() {
            let coords = dual.coords(&t.freq);
            for c in &coords {
                assert!(*c >= -1e-9 && *c < 1.0 + 1e-9);
            }
        }
        for _ in 0..50 {
            let k = [
                r.random_range(-6i32..6) as f64,
                r.random_range(-6i32..6) as f64,
            ];
            let x = a.point(&k);
            assert!((red.eval(&x).unwrap() - f.eval(&x).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn merging_and_drop_ledger() {
        let f = ExpSum::new(
            1,
            vec![
                Term::new(c(1.0, 0.0), vec![0.5]),
                Term::new(c(2.0, 0.0), vec![0.5 + 1e-12]),
                Term::new(c(1e-16, 0.0), vec![3.0]),
            ],
        )
        .unwrap();
        assert_eq!(f.len(), 1);
        assert!((f.terms()[0].coeff - c(3.0, 0.0)).norm() < 1e-12);
        assert!(f.tail_bound() > 0.0 && f.tail_bound() < 1e-15);
    }

    #[test]
    fn tail_bound_propagates_through_mul() {
        let mut f = ExpSum::constant(1, c(1.0, 0.0));
        f.charge_tail(0.25);
        let g = ExpSum::new(
            1,
            vec![
                Term::new(c(2.0, 0.0), vec![0.0]),
                Term::new(c(1.0, 0.0), vec![1.0]),
            ],
        )
        .unwrap();
        let p = f.combine(&g, CombineOp::Mul).unwrap();
        // tail(f)·‖g‖ = 0.25·3
        assert!((p.tail_bound() - 0.75).abs() < 1e-15);
    }
}
