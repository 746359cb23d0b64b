//! Integer frequency bases: every input frequency is expressed as an integer
//! combination of a small set of generators, so an exponential sum lifts to a
//! trigonometric polynomial on a k-torus.
//!
//! The construction is incremental. Each new frequency is expressed over the
//! current generators by least squares when they are R-independent, with a
//! rationalization step (continued fractions, bounded denominator) that
//! refines the generator set through an integer Hermite normal form when the
//! new frequency is a rational but non-integral combination. When the
//! generator count exceeds the ambient dimension, relations are found by LLL
//! on stacked coordinates instead. In one dimension the whole procedure
//! reduces to a gcd computation on the frequencies.

use crate::util::{dist, dot, norm, norm_lex_cmp};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

/// Denominator cap for rationalizing least-squares coefficients.
const MAX_DENOMINATOR: i64 = 64;
/// Coefficient box for the Z-independence check of the final generators.
const INDEPENDENCE_BOX: i64 = 20;
/// Maximum number of input frequencies.
const MAX_FREQUENCIES: usize = 64;
/// Scale factor embedding the residual into the LLL lattice.
const LLL_SCALE: f64 = 1e12;
/// Coefficient budget for expressing a frequency over the generators.
const MAX_EXPRESS_COEFF_L1: f64 = 2e4;

#[derive(Debug, Clone)]
pub struct FrequencyBasis {
    dim: usize,
    generators: Vec<Vec<f64>>,
    coords: Vec<Vec<i64>>,
    tol: f64,
    decoder: Option<Decoder>,
}

/// Babai nearest-plane decoder over the reduced embedding lattice
/// `{(m | C·Σ mᵢgᵢ) : m ∈ Zᵏ}`: expressing a frequency is a closest-vector
/// query, answered in floating point against the exactly reduced basis.
#[derive(Debug, Clone)]
struct Decoder {
    rows: Vec<Vec<f64>>,
    star: Vec<Vec<f64>>,
}

impl Decoder {
    fn build(gens: &[Vec<f64>]) -> Option<Decoder> {
        let k = gens.len();
        if k == 0 {
            return None;
        }
        let d = gens[0].len();
        let cols = k + d;
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(k);
        for (i, g) in gens.iter().enumerate() {
            let mut r = vec![BigInt::ZERO; cols];
            r[i] = BigInt::from(1);
            for (j, x) in g.iter().enumerate() {
                r[k + j] = BigInt::from((LLL_SCALE * x).round() as i128);
            }
            rows.push(r);
        }
        lll_exact(&mut rows);
        let rows: Option<Vec<Vec<f64>>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_f64().filter(|v| v.abs() < 9e15))
                    .collect()
            })
            .collect();
        let rows = rows?;
        // Gram-Schmidt of the reduced (well-conditioned) basis
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(k);
        for i in 0..k {
            let mut s = rows[i].clone();
            for prev in star.iter() {
                let denom = dot(prev, prev);
                if denom > 0.0 {
                    let m = dot(&rows[i], prev) / denom;
                    for (si, pj) in s.iter_mut().zip(prev) {
                        *si -= m * pj;
                    }
                }
            }
            star.push(s);
        }
        Some(Decoder { rows, star })
    }

    /// Coefficients of the lattice vector nearest the embedded target.
    fn decode(&self, v: &[f64]) -> Vec<i64> {
        let k = self.rows.len();
        let d = v.len();
        let mut b = vec![0.0; k + d];
        for (j, x) in v.iter().enumerate() {
            b[k + j] = LLL_SCALE * x;
        }
        let mut coeff = vec![0i64; k];
        for i in (0..k).rev() {
            let denom = dot(&self.star[i], &self.star[i]);
            if denom <= 0.0 {
                continue;
            }
            let c = (dot(&b, &self.star[i]) / denom).round();
            if c != 0.0 && c.abs() < 9e15 {
                for (bi, ri) in b.iter_mut().zip(&self.rows[i]) {
                    *bi -= c * ri;
                }
            }
            coeff[i] = c as i64;
        }
        // m = Σ cᵢ · head(rowᵢ)
        let mut m = vec![0i64; k];
        for (c, row) in coeff.iter().zip(&self.rows) {
            for (mi, h) in m.iter_mut().zip(&row[..k]) {
                *mi += c * (*h as i64);
            }
        }
        m
    }
}

impl FrequencyBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    /// Integer coordinates of the i-th input frequency.
    pub fn coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    /// The frequency vector `Σ mᵢ βᵢ` for integer coordinates `m`.
    pub fn frequency_of(&self, m: &[i64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (mi, g) in m.iter().zip(&self.generators) {
            for (o, gi) in out.iter_mut().zip(g) {
                *o += *mi as f64 * gi;
            }
        }
        out
    }

    /// Expresses an arbitrary frequency over the generators, if it lies in
    /// their Z-span within the basis tolerance.
    pub fn coords_of(&self, freq: &[f64]) -> Option<Vec<i64>> {
        if norm(freq) <= self.tol {
            return Some(vec![0; self.rank()]);
        }
        if let Some(decoder) = &self.decoder {
            let m = decoder.decode(freq);
            if self.coords_valid(&m, freq) {
                return Some(m);
            }
        }
        match express(&self.generators, freq, self.tol) {
            Some(Expression::Integer(m)) => Some(m),
            _ => None,
        }
    }

    fn coords_valid(&self, m: &[i64], freq: &[f64]) -> bool {
        let l1: f64 = m.iter().map(|x| x.abs() as f64).sum();
        if l1 > MAX_EXPRESS_COEFF_L1 {
            return false;
        }
        dist(&self.frequency_of(m), freq) <= self.tol
    }
}

/// Builds a [`FrequencyBasis`] for the given frequencies.
///
/// Frequencies that admit no integer-relation structure within the bounded
/// search become generators themselves (they are treated as rationally
/// independent), so the rank can reach the frequency count.
pub fn find_basis(frequencies: &[Vec<f64>], tol: f64) -> Result<FrequencyBasis> {
    find_basis_with_cap(frequencies, tol, MAX_FREQUENCIES)
}

/// [`find_basis`] with an explicit frequency-count cap, for large structured
/// inputs (spectra of comb convolutions) whose incremental cost stays low.
pub fn find_basis_with_cap(
    frequencies: &[Vec<f64>],
    tol: f64,
    cap: usize,
) -> Result<FrequencyBasis> {
    if frequencies.len() > cap {
        return Err(Error::TooManyFrequencies {
            count: frequencies.len(),
            max: cap,
        });
    }
    let dim = frequencies.first().map(|f| f.len()).unwrap_or(0);
    for f in frequencies {
        if f.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: f.len(),
            });
        }
    }
    // process by ascending norm so gcd-style refinements see short vectors first
    let mut order: Vec<usize> = (0..frequencies.len()).collect();
    order.sort_by(|&a, &b| norm_lex_cmp(&frequencies[a], &frequencies[b]));

    let mut generators: Vec<Vec<f64>> = Vec::new();
    for &idx in &order {
        let v = &frequencies[idx];
        if norm(v) <= tol {
            continue;
        }
        match express(&generators, v, tol) {
            Some(Expression::Integer(_)) => {}
            Some(Expression::Rational { nums, den }) => {
                generators = refine(&generators, &nums, den);
            }
            None => generators.push(v.clone()),
        }
    }

    size_reduce(&mut generators);
    canonicalize(&mut generators);

    // re-express every input over the final generators (decoder first,
    // full relation search as a fallback)
    let decoder = Decoder::build(&generators);
    let mut coords = Vec::with_capacity(frequencies.len());
    for f in frequencies {
        if norm(f) <= tol {
            coords.push(vec![0; generators.len()]);
            continue;
        }
        let decoded = decoder.as_ref().map(|d| d.decode(f)).filter(|m| {
            let mut back = vec![0.0; dim];
            for (mi, g) in m.iter().zip(&generators) {
                for (o, gi) in back.iter_mut().zip(g) {
                    *o += *mi as f64 * gi;
                }
            }
            dist(&back, f) <= tol
        });
        match decoded {
            Some(m) => coords.push(m),
            None => match express(&generators, f, tol) {
                Some(Expression::Integer(m)) => {
                    coords.push(m);
                }
                _ => {
                    return Err(Error::BadInput(format!(
                        "frequency {f:?} not integral over the computed basis"
                    )))
                }
            },
        }
    }

    let basis = FrequencyBasis {
        dim,
        generators,
        coords,
        tol,
        decoder,
    };
    verify_independence(&basis)?;
    // every coordinate row must reproduce its frequency
    for (f, m) in frequencies.iter().zip(&basis.coords) {
        let back = basis.frequency_of(m);
        if dist(f, &back) > tol.max(1e-9) {
            return Err(Error::BadInput(format!(
                "basis verification failed for frequency {f:?}"
            )));
        }
    }
    Ok(basis)
}

enum Expression {
    Integer(Vec<i64>),
    Rational { nums: Vec<i64>, den: i64 },
}

/// Expresses `v` over `gens` as an integer or bounded-rational combination.
fn express(gens: &[Vec<f64>], v: &[f64], tol: f64) -> Option<Expression> {
    if gens.is_empty() {
        return None;
    }
    let d = v.len();
    let k = gens.len();
    if k <= d {
        if let Some(q) = least_squares(gens, v) {
            let res: f64 = {
                let mut r = v.to_vec();
                for (qi, g) in q.iter().zip(gens) {
                    for (ri, gi) in r.iter_mut().zip(g) {
                        *ri -= qi * gi;
                    }
                }
                norm(&r)
            };
            if res <= tol {
                return classify_coeffs(gens, v, &q, tol);
            }
            // genuinely outside the real span: no relation
            if res > tol {
                // fall through to LLL only when generators are R-dependent,
                // which cannot happen for k ≤ d with independent gens
                return None;
            }
        }
    }
    lll_relation(gens, v, tol)
}

/// Rounds or rationalizes real coefficients, verifying the reconstruction.
fn classify_coeffs(gens: &[Vec<f64>], v: &[f64], q: &[f64], tol: f64) -> Option<Expression> {
    let recon_err = |coeffs: &[f64]| -> f64 {
        let mut r = v.to_vec();
        for (c, g) in coeffs.iter().zip(gens) {
            for (ri, gi) in r.iter_mut().zip(g) {
                *ri -= c * gi;
            }
        }
        norm(&r)
    };
    let rounded: Vec<f64> = q.iter().map(|x| x.round()).collect();
    if recon_err(&rounded) <= tol && rounded.iter().all(|x| x.abs() < 9e15) {
        return Some(Expression::Integer(
            rounded.iter().map(|x| *x as i64).collect(),
        ));
    }
    // common-denominator rationalization
    let mut den = 1i64;
    for x in q {
        let (_, d) = continued_fraction(*x, MAX_DENOMINATOR);
        den = lcm(den, d);
        if den > MAX_DENOMINATOR {
            return None;
        }
    }
    let nums: Vec<f64> = q.iter().map(|x| (x * den as f64).round()).collect();
    let rational: Vec<f64> = nums.iter().map(|n| n / den as f64).collect();
    if recon_err(&rational) <= tol && den > 1 {
        Some(Expression::Rational {
            nums: nums.iter().map(|x| *x as i64).collect(),
            den,
        })
    } else {
        None
    }
}

/// Least squares via normal equations (k ≤ 3).
fn least_squares(gens: &[Vec<f64>], v: &[f64]) -> Option<Vec<f64>> {
    let k = gens.len();
    let mut gtg = nalgebra::DMatrix::zeros(k, k);
    let mut gtv = nalgebra::DVector::zeros(k);
    for i in 0..k {
        for j in 0..k {
            gtg[(i, j)] = dot(&gens[i], &gens[j]);
        }
        gtv[i] = dot(&gens[i], v);
    }
    let svd = gtg.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin > 1e12 {
        return None;
    }
    gtg.try_inverse().map(|inv| (inv * gtv).iter().copied().collect())
}

/// Replaces the generators by a basis of the group they generate together
/// with `v = Σ (nums_i/den) g_i`, via the Hermite normal form of the
/// coordinate lattice scaled by `den`.
fn refine(gens: &[Vec<f64>], nums: &[i64], den: i64) -> Vec<Vec<f64>> {
    let k = gens.len();
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(k + 1);
    for i in 0..k {
        let mut r = vec![0i128; k];
        r[i] = den as i128;
        rows.push(r);
    }
    rows.push(nums.iter().map(|n| *n as i128).collect());
    let h = hermite_normal_form(rows, k);
    // new generators: (H/den) · old generators
    h.iter()
        .map(|row| {
            let mut g = vec![0.0; gens[0].len()];
            for (hij, gen) in row.iter().zip(gens) {
                let c = *hij as f64 / den as f64;
                for (gi, xi) in g.iter_mut().zip(gen) {
                    *gi += c * xi;
                }
            }
            g
        })
        .collect()
}

/// Row-style Hermite normal form; returns the nonzero rows (a basis of the
/// row lattice). Entries stay small here (denominators and numerators are
/// bounded), so i128 arithmetic is ample.
fn hermite_normal_form(mut rows: Vec<Vec<i128>>, cols: usize) -> Vec<Vec<i128>> {
    let mut pivot_row = 0usize;
    for col in 0..cols {
        loop {
            let mut nonzero: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .collect();
            if nonzero.is_empty() {
                break;
            }
            nonzero.sort_by_key(|&r| rows[r][col].abs());
            let r0 = nonzero[0];
            rows.swap(pivot_row, r0);
            let p = rows[pivot_row][col];
            let mut reduced_all = true;
            for r in pivot_row + 1..rows.len() {
                let q = div_floor(rows[r][col], p);
                if q != 0 {
                    for c in 0..cols {
                        let sub = q * rows[pivot_row][c];
                        rows[r][c] -= sub;
                    }
                }
                if rows[r][col] != 0 {
                    reduced_all = false;
                }
            }
            if reduced_all {
                if rows[pivot_row][col] < 0 {
                    for c in 0..cols {
                        rows[pivot_row][c] = -rows[pivot_row][c];
                    }
                }
                pivot_row += 1;
                break;
            }
        }
    }
    rows.truncate(pivot_row);
    rows
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Continued-fraction best rational approximation with bounded denominator.
fn continued_fraction(x: f64, max_den: i64) -> (i64, i64) {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..48 {
        if frac.abs() < 1e-12 {
            break;
        }
        let a = (1.0 / frac).floor();
        if !a.is_finite() || a >= 9e15 {
            break;
        }
        let ai = a as i64;
        let (p2, q2) = (
            ai.saturating_mul(p1).saturating_add(p0),
            ai.saturating_mul(q1).saturating_add(q0),
        );
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        frac = 1.0 / frac - a;
    }
    (p1, q1)
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// LLL-based relation search: finds integers `(m, n)`, `n ≠ 0`, with
/// `Σ mᵢ gᵢ + n·v ≈ 0`. Returns the corresponding expression of `v`.
///
/// The embedding rows are integers (the real column is scaled and rounded)
/// and the reduction is exact, so the short relation vector always surfaces
/// when one exists within the coefficient budget.
fn lll_relation(gens: &[Vec<f64>], v: &[f64], tol: f64) -> Option<Expression> {
    let k = gens.len();
    let d = v.len();
    let cols = k + 1 + d;
    let quant = |x: f64| -> BigInt { BigInt::from((LLL_SCALE * x).round() as i128) };
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(k + 1);
    for (i, g) in gens.iter().enumerate() {
        let mut r = vec![BigInt::ZERO; cols];
        r[i] = BigInt::from(1);
        for (j, x) in g.iter().enumerate() {
            r[k + 1 + j] = quant(*x);
        }
        rows.push(r);
    }
    let mut last = vec![BigInt::ZERO; cols];
    last[k] = BigInt::from(1);
    for (j, x) in v.iter().enumerate() {
        last[k + 1 + j] = quant(*x);
    }
    rows.push(last);

    lll_exact(&mut rows);

    let scale = gens
        .iter()
        .map(|g| norm(g))
        .fold(norm(v), f64::max)
        .max(1.0);
    let mut best: Option<(Vec<i64>, i64)> = None;
    for row in &rows {
        let head: Option<Vec<i64>> = row[..=k].iter().map(|x| x.to_i64()).collect();
        let Some(head) = head else { continue };
        let (m, n) = (head[..k].to_vec(), head[k]);
        if n == 0 {
            continue;
        }
        let coeff_l1: f64 = m.iter().map(|x| x.abs() as f64).sum::<f64>() + n.abs() as f64;
        // beyond this coefficient size, points of a dense module come closer
        // than the tolerance and expression stops being unique
        if coeff_l1 > MAX_EXPRESS_COEFF_L1 {
            continue;
        }
        // verify the relation directly from the integer parts
        let mut resid = v.iter().map(|x| *x * n as f64).collect::<Vec<_>>();
        for (mi, g) in m.iter().zip(gens) {
            for (ri, gi) in resid.iter_mut().zip(g) {
                *ri += *mi as f64 * gi;
            }
        }
        if norm(&resid) <= tol.max(coeff_l1 * scale * 1e-14) {
            let better = match &best {
                None => true,
                Some((bm, bn)) => {
                    let cl1 = |w: &[i64]| w.iter().map(|x| x.abs()).sum::<i64>();
                    (n.abs(), cl1(&m)) < (bn.abs(), cl1(bm))
                }
            };
            if better {
                best = Some((m, n));
            }
        }
    }
    let (m, n) = best?;
    let den = n.abs();
    let sign = if n > 0 { -1 } else { 1 };
    let nums: Vec<i64> = m.iter().map(|x| sign * x).collect();
    if den == 1 {
        Some(Expression::Integer(nums))
    } else if den <= MAX_DENOMINATOR {
        Some(Expression::Rational { nums, den })
    } else {
        None
    }
}

type Rat = Ratio<BigInt>;

fn rat_dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::from_integer(BigInt::ZERO);
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Textbook LLL with δ = 99/100 in exact rational arithmetic. The matrices
/// here have at most four rows, so recomputing the Gram–Schmidt data from
/// scratch each round is affordable and keeps the code short.
fn lll_exact(rows: &mut Vec<Vec<BigInt>>) {
    let n = rows.len();
    if n < 2 {
        return;
    }
    let gram_schmidt = |rows: &[Vec<BigInt>]| -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
        let mut star: Vec<Vec<Rat>> = Vec::with_capacity(n);
        let mut mu: Vec<Vec<Rat>> =
            vec![vec![Rat::from_integer(BigInt::ZERO); n]; n];
        for i in 0..n {
            let mut s: Vec<Rat> = rows[i]
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect();
            for j in 0..i {
                let denom = rat_dot(&star[j], &star[j]);
                if denom == Rat::from_integer(BigInt::ZERO) {
                    continue;
                }
                let m = rat_dot(&s, &star[j]) / denom.clone();
                for (si, bj) in s.iter_mut().zip(&star[j]) {
                    *si -= m.clone() * bj;
                }
                mu[i][j] = m;
            }
            star.push(s);
        }
        (star, mu)
    };
    let half = Rat::new(BigInt::from(1), BigInt::from(2));
    let delta = Rat::new(BigInt::from(99), BigInt::from(100));
    for _round in 0..10_000 {
        let (star, mu) = gram_schmidt(rows);
        // size reduction
        let mut changed = false;
        for i in 1..n {
            for j in (0..i).rev() {
                // recompute the projection of the current row i onto star j
                let denom = rat_dot(&star[j], &star[j]);
                if denom == Rat::from_integer(BigInt::ZERO) {
                    continue;
                }
                let cur: Vec<Rat> = rows[i]
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()))
                    .collect();
                let m = rat_dot(&cur, &star[j]) / denom;
                if m.clone().abs() > half {
                    let q = m.round().to_integer();
                    let (head, tail) = rows.split_at_mut(i);
                    for (xi, xj) in tail[0].iter_mut().zip(&head[j]) {
                        *xi -= q.clone() * xj;
                    }
                    changed = true;
                }
            }
        }
        if changed {
            continue;
        }
        // Lovász condition
        let mut swapped = false;
        for i in 1..n {
            let lhs = rat_dot(&star[i], &star[i]);
            let mu2 = mu[i][i - 1].clone() * mu[i][i - 1].clone();
            let rhs = (delta.clone() - mu2) * rat_dot(&star[i - 1], &star[i - 1]);
            if lhs < rhs {
                rows.swap(i, i - 1);
                swapped = true;
                break;
            }
        }
        if !swapped {
            break;
        }
    }
}

/// Pairwise Lagrange-style size reduction of the generators (unimodular).
/// Near-parallel pairs are left alone: reducing an R-dependent pair would run
/// a Euclidean descent toward zero and destroy the integer structure.
fn size_reduce(gens: &mut Vec<Vec<f64>>) {
    let k = gens.len();
    if k < 2 {
        return;
    }
    for _pass in 0..8 {
        let mut changed = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let denom = dot(&gens[j], &gens[j]);
                if denom == 0.0 {
                    continue;
                }
                let gram2 = dot(&gens[i], &gens[i]) * denom
                    - dot(&gens[i], &gens[j]) * dot(&gens[i], &gens[j]);
                if gram2 <= 1e-18 * dot(&gens[i], &gens[i]) * denom {
                    continue;
                }
                let m = (dot(&gens[i], &gens[j]) / denom).round();
                if m != 0.0 {
                    let gj = gens[j].clone();
                    let gi = &mut gens[i];
                    let before = norm(gi);
                    let candidate: Vec<f64> =
                        gi.iter().zip(&gj).map(|(a, b)| a - m * b).collect();
                    if norm(&candidate) < before * (1.0 - 1e-12) {
                        *gi = candidate;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Deterministic generator order and sign convention.
fn canonicalize(gens: &mut [Vec<f64>]) {
    for g in gens.iter_mut() {
        if let Some(first) = g.iter().find(|x| x.abs() > 1e-15) {
            if *first < 0.0 {
                for x in g.iter_mut() {
                    *x = -*x;
                }
            }
        }
    }
    gens.sort_by(|a, b| norm_lex_cmp(a, b));
}

/// Box search for nonzero integer combinations of the generators that nearly
/// vanish (rank ≤ 3 only; larger ranks are accepted as-is).
fn verify_independence(basis: &FrequencyBasis) -> Result<()> {
    let k = basis.rank();
    if k == 0 || k > 3 {
        return Ok(());
    }
    let b = INDEPENDENCE_BOX;
    let mut c = vec![-b; k];
    loop {
        if c.iter().any(|x| *x != 0) {
            let f = basis.frequency_of(&c);
            if norm(&f) < 1e-9 {
                return Err(Error::BadInput(format!(
                    "generators admit the integer relation {c:?}"
                )));
            }
        }
        let mut i = 0;
        loop {
            c[i] += 1;
            if c[i] <= b {
                break;
            }
            c[i] = -b;
            i += 1;
            if i == k {
                return Ok(());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiples_of_sqrt2() {
        let s = 2f64.sqrt();
        let freqs = vec![vec![0.0], vec![s], vec![2.0 * s]];
        let b = find_basis(&freqs, 1e-9).unwrap();
        assert_eq!(b.rank(), 1);
        assert!((b.generators()[0][0] - s).abs() < 1e-12);
        assert_eq!(b.coords(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn thirds_and_halves_refine_to_sixths() {
        let freqs = vec![vec![1.0 / 3.0], vec![0.5]];
        let b = find_basis(&freqs, 1e-9).unwrap();
        assert_eq!(b.rank(), 1);
        assert!((b.generators()[0][0] - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(b.coords(), &[vec![2], vec![3]]);
    }

    #[test]
    fn empty_input() {
        let b = find_basis(&[], 1e-9).unwrap();
        assert_eq!(b.rank(), 0);
        assert!(b.generators().is_empty());
    }

    #[test]
    fn rationally_independent_pair() {
        let freqs = vec![vec![1.0], vec![2f64.sqrt()]];
        let b = find_basis(&freqs, 1e-9).unwrap();
        assert_eq!(b.rank(), 2);
        // combination of both is expressed over the rank-2 basis
        let freqs2 = vec![vec![1.0], vec![2f64.sqrt()], vec![1.0 + 2f64.sqrt()]];
        let b2 = find_basis(&freqs2, 1e-9).unwrap();
        assert_eq!(b2.rank(), 2);
        let back = b2.frequency_of(&b2.coords()[2]);
        assert!((back[0] - (1.0 + 2f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn gcd_of_integer_multiples() {
        let a = 0.7310529193;
        let freqs = vec![vec![2.0 * a], vec![3.0 * a], vec![7.0 * a]];
        let b = find_basis(&freqs, 1e-9).unwrap();
        assert_eq!(b.rank(), 1);
        assert!((b.generators()[0][0] - a).abs() < 1e-9);
    }

    #[test]
    fn two_dimensional_module() {
        let g1 = vec![1.0, 0.0];
        let g2 = vec![0.25, 1.5];
        let combo = |m: i64, n: i64| {
            vec![
                m as f64 * g1[0] + n as f64 * g2[0],
                m as f64 * g1[1] + n as f64 * g2[1],
            ]
        };
        let freqs = vec![combo(1, 0), combo(0, 1), combo(2, -1), combo(-3, 2)];
        let b = find_basis(&freqs, 1e-9).unwrap();
        assert_eq!(b.rank(), 2);
        for (f, m) in freqs.iter().zip(b.coords()) {
            assert!(dist(f, &b.frequency_of(m)) < 1e-9);
        }
    }

    #[test]
    fn coords_of_new_frequency() {
        let s = 3f64.sqrt();
        let b = find_basis(&[vec![s], vec![2.0]], 1e-9).unwrap();
        let target = vec![3.0 * s - 4.0];
        let m = b.coords_of(&target).unwrap();
        assert!(dist(&b.frequency_of(&m), &target) < 1e-9);
        assert!(b.coords_of(&[0.5 * s]).is_none());
    }

    #[test]
    fn too_many_frequencies_rejected() {
        let freqs: Vec<Vec<f64>> = (0..65).map(|i| vec![i as f64]).collect();
        assert!(matches!(
            find_basis(&freqs, 1e-9),
            Err(Error::TooManyFrequencies { .. })
        ));
    }

    #[test]
    fn continued_fraction_basics() {
        assert_eq!(continued_fraction(1.5, 64), (3, 2));
        assert_eq!(continued_fraction(-0.25, 64), (-1, 4));
        assert_eq!(continued_fraction(7.0, 64), (7, 1));
    }
}
