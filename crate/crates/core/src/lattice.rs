//! Full-rank lattices `L = A·Zᵈ`, their duals, and translated cosets.
//!
//! Bases are arbitrary real matrices with columns as generators. Equality of
//! lattices is decided by mutual membership of generators, never by basis
//! equality, since bases are only determined up to a unimodular transform.

use crate::util::{dist, dot, norm, norm_lex_cmp};
use crate::{Error, Result, CONDITION_GUARD, DEFAULT_ENUM_CAP};
use nalgebra::DMatrix;

/// A full-rank lattice with cached inverse basis and determinant.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    basis: DMatrix<f64>,
    inverse: DMatrix<f64>,
    det_abs: f64,
}

impl Lattice {
    /// Builds a lattice from a basis matrix whose columns are the generators.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let dim = basis.nrows();
        if basis.ncols() != dim || dim == 0 {
            return Err(Error::BadInput(format!(
                "lattice basis must be square and nonempty, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::BadInput("non-finite basis entry".into()));
        }
        let svd = basis.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smin <= 0.0 || smax / smin > CONDITION_GUARD {
            return Err(Error::SingularLattice {
                cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            });
        }
        let inverse = basis
            .clone()
            .try_inverse()
            .ok_or(Error::SingularLattice { cond: f64::INFINITY })?;
        let det_abs = basis.determinant().abs();
        Ok(Lattice {
            dim,
            basis,
            inverse,
            det_abs,
        })
    }

    /// `Zᵈ`.
    pub fn integer(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    /// One-dimensional lattice `a·Z`.
    pub fn scaled_integer(a: f64) -> Result<Self> {
        Self::from_rows(1, &[a])
    }

    /// Builds from row-major entries (the serialization layout).
    pub fn from_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::BadInput(format!(
                "expected {} basis entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn det_abs(&self) -> f64 {
        self.det_abs
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Column `i` of the basis.
    pub fn generator(&self, i: usize) -> Vec<f64> {
        self.basis.column(i).iter().copied().collect()
    }

    /// The conjugate lattice: basis is the inverse-transpose, so that the
    /// pairing of any generator with any dual generator is an integer.
    pub fn dual(&self) -> Result<Lattice> {
        Lattice::new(self.inverse.transpose())
    }

    /// Coordinates `A⁻¹x` of a point in the lattice basis.
    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..self.dim).map(|j| self.inverse[(i, j)] * x[j]).sum();
        }
        out
    }

    /// The lattice point with integer (or real) coordinates `k`: `A·k`.
    pub fn point(&self, k: &[f64]) -> Vec<f64> {
        debug_assert_eq!(k.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..self.dim).map(|j| self.basis[(i, j)] * k[j]).sum();
        }
        out
    }

    /// True iff `A⁻¹x` lies within `tol` (Euclidean) of an integer vector.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let c = self.coords(x);
        let r2: f64 = c.iter().map(|v| (v - v.round()) * (v - v.round())).sum();
        r2.sqrt() <= tol
    }

    /// The representative `r` of `x` with `x − r ∈ L` and `A⁻¹r ∈ [0,1)ᵈ`.
    pub fn reduce_point(&self, x: &[f64]) -> Vec<f64> {
        let mut c = self.coords(x);
        for v in &mut c {
            *v -= v.floor();
            if *v >= 1.0 {
                // guard against floor rounding at the cell boundary
                *v = 0.0;
            }
        }
        self.point(&c)
    }

    /// Length of a shortest nonzero lattice vector. Exact for d ≤ 2 via
    /// Lagrange reduction; for higher dimensions a bounded enumeration around
    /// the shortest basis column is used.
    pub fn shortest_vector_len(&self) -> f64 {
        match self.dim {
            1 => self.basis[(0, 0)].abs(),
            2 => {
                let (u, v) = self.gauss_reduced_2d();
                norm(&u).min(norm(&v))
            }
            _ => {
                let r = (0..self.dim)
                    .map(|i| norm(&self.generator(i)))
                    .fold(f64::INFINITY, f64::min);
                let coset = Coset::new(self.clone(), vec![0.0; self.dim]);
                match coset.enumerate_in_ball(r * 1.0001, DEFAULT_ENUM_CAP) {
                    Ok(points) => points
                        .iter()
                        .map(|p| norm(p))
                        .filter(|n| *n > 1e-12)
                        .fold(r, f64::min),
                    Err(_) => r,
                }
            }
        }
    }

    /// Lagrange–Gauss reduced generator pair for d = 2.
    fn gauss_reduced_2d(&self) -> (Vec<f64>, Vec<f64>) {
        let mut u = self.generator(0);
        let mut v = self.generator(1);
        if dot(&u, &u) > dot(&v, &v) {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            let m = (dot(&u, &v) / dot(&u, &u)).round();
            for i in 0..2 {
                v[i] -= m * u[i];
            }
            if dot(&v, &v) >= dot(&u, &u) {
                return (u, v);
            }
            std::mem::swap(&mut u, &mut v);
        }
    }

    /// A basis with the same lattice point set but shorter generators
    /// (d ≤ 2; other dimensions are returned unchanged).
    pub fn reduced(&self) -> Lattice {
        if self.dim == 2 {
            let (u, v) = self.gauss_reduced_2d();
            let m = DMatrix::from_columns(&[
                nalgebra::DVector::from_vec(u),
                nalgebra::DVector::from_vec(v),
            ]);
            Lattice::new(m).unwrap_or_else(|_| self.clone())
        } else {
            self.clone()
        }
    }

    /// True iff both lattices have the same point set: each generator of one
    /// is a point of the other.
    pub fn same_lattice(&self, other: &Lattice, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        (0..self.dim).all(|i| other.contains(&self.generator(i), tol))
            && (0..self.dim).all(|i| self.contains(&other.generator(i), tol))
    }
}

/// A translated lattice `L + a`, with the shift stored reduced into the
/// fundamental parallelepiped of `L`.
#[derive(Debug, Clone)]
pub struct Coset {
    lattice: Lattice,
    shift: Vec<f64>,
}

impl Coset {
    pub fn new(lattice: Lattice, shift: Vec<f64>) -> Self {
        debug_assert_eq!(shift.len(), lattice.dim());
        let shift = lattice.reduce_point(&shift);
        Coset { lattice, shift }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// True iff `x ∈ L + a` within `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let rel: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        self.lattice.contains(&rel, tol)
    }

    /// Exactly the points of `(L + a) ∩ B(0, r)` (open ball), each listed
    /// once, sorted by norm then lexicographically.
    pub fn enumerate_in_ball(&self, r: f64, cap: usize) -> Result<Vec<Vec<f64>>> {
        if !(r > 0.0) {
            return Err(Error::BadInput("enumeration radius must be positive".into()));
        }
        let d = self.dim();
        let lat = &self.lattice;
        // integer coordinates k with |A·k + a| < r lie in the box
        // |k_i - c_i| ≤ r · ‖row_i(A⁻¹)‖
        let center = lat.coords(&self.shift.iter().map(|s| -s).collect::<Vec<_>>());
        let mut lo = vec![0i64; d];
        let mut hi = vec![0i64; d];
        let mut candidates: f64 = 1.0;
        for i in 0..d {
            let row_norm = (0..d)
                .map(|j| lat.inverse[(i, j)] * lat.inverse[(i, j)])
                .sum::<f64>()
                .sqrt();
            let w = r * row_norm;
            lo[i] = (center[i] - w).floor() as i64;
            hi[i] = (center[i] + w).ceil() as i64;
            candidates *= (hi[i] - lo[i] + 1) as f64;
        }
        if candidates > 16.0 * cap as f64 + 4096.0 {
            return Err(Error::EnumerationCap { cap });
        }
        let mut points = Vec::new();
        let mut k = lo.clone();
        'outer: loop {
            let kf: Vec<f64> = k.iter().map(|v| *v as f64).collect();
            let mut p = lat.point(&kf);
            for (pi, s) in p.iter_mut().zip(&self.shift) {
                *pi += s;
            }
            if norm(&p) < r {
                points.push(p);
                if points.len() > cap {
                    return Err(Error::EnumerationCap { cap });
                }
            }
            for i in (0..d).rev() {
                k[i] += 1;
                if k[i] <= hi[i] {
                    continue 'outer;
                }
                k[i] = lo[i];
                if i == 0 {
                    break 'outer;
                }
            }
            if d == 0 {
                break;
            }
        }
        points.sort_by(|a, b| norm_lex_cmp(a, b));
        Ok(points)
    }
}

/// Distance from `x` to the nearest point of the coset (search over the
/// surrounding coordinate cell).
pub fn coset_distance(c: &Coset, x: &[f64]) -> f64 {
    let rel: Vec<f64> = x.iter().zip(c.shift()).map(|(a, b)| a - b).collect();
    let reduced = c.lattice().reduce_point(&rel);
    // nearest lattice point to `rel` corresponds to one of the 2^d corners
    let d = c.dim();
    let mut best = f64::INFINITY;
    for corner in 0..(1usize << d) {
        let k: Vec<f64> = (0..d)
            .map(|i| if corner >> i & 1 == 1 { 1.0 } else { 0.0 })
            .collect();
        let q = c.lattice().point(&k);
        let dd = dist(&reduced, &q);
        best = best.min(dd);
    }
    best
}
