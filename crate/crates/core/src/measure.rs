//! Finitely windowed atomic measures `Σ c_λ δ_λ`.
//!
//! Every measure is a truncation of an (in general infinite) measure to the
//! ball `B(0, window_radius)`; operations document how they grow the window.
//! Masses are kept exactly — only exponential sums have a drop policy.

use crate::lattice::Coset;
use crate::util::{dist, norm, norm_lex_cmp};
use crate::{Error, Result, DEFAULT_ENUM_CAP};
use num_complex::Complex64;

/// Minimum pairwise distance required between stored atom positions.
pub const MIN_ATOM_SEP: f64 = 1e-9;

/// One atom: a point with a complex mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<f64>,
    pub mass: Complex64,
}

impl Atom {
    pub fn new(point: Vec<f64>, mass: Complex64) -> Self {
        Atom { point, mass }
    }
}

/// A finite atomic measure truncated to `B(0, window_radius)`.
#[derive(Debug, Clone)]
pub struct AtomicMeasure {
    dim: usize,
    atoms: Vec<Atom>,
    window_radius: f64,
    sep_radius: Option<f64>,
}

impl AtomicMeasure {
    /// Validates dimensions, pairwise distinctness of atom positions, window
    /// containment, and any declared separation radius.
    pub fn new(
        dim: usize,
        mut atoms: Vec<Atom>,
        window_radius: f64,
        sep_radius: Option<f64>,
    ) -> Result<Self> {
        if !(window_radius > 0.0) {
            return Err(Error::BadInput("window_radius must be positive".into()));
        }
        for a in &atoms {
            if a.point.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.point.len(),
                });
            }
            if norm(&a.point) > window_radius * (1.0 + 1e-12) + 1e-12 {
                return Err(Error::BadInput(format!(
                    "atom at {:?} lies outside the window of radius {window_radius}",
                    a.point
                )));
            }
        }
        atoms.sort_by(|a, b| norm_lex_cmp(&a.point, &b.point));
        let m = AtomicMeasure {
            dim,
            atoms,
            window_radius,
            sep_radius,
        };
        if m.atoms.len() >= 2 {
            let min_sep = m.min_separation();
            if min_sep <= MIN_ATOM_SEP {
                return Err(Error::BadInput(format!(
                    "atom positions too close: min separation {min_sep:.3e}"
                )));
            }
            if let Some(eta) = sep_radius {
                if min_sep < eta - 1e-12 {
                    return Err(Error::BadInput(format!(
                        "declared separation {eta} exceeds actual minimum {min_sep}"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Unit mass at every point of `(L + a) ∩ B(0, r)`; the separation radius
    /// comes from the lattice's shortest vector.
    pub fn comb(coset: &Coset, r: f64) -> Result<Self> {
        Self::comb_capped(coset, r, DEFAULT_ENUM_CAP)
    }

    pub fn comb_capped(coset: &Coset, r: f64, cap: usize) -> Result<Self> {
        let points = coset.enumerate_in_ball(r, cap)?;
        let atoms = points
            .into_iter()
            .map(|p| Atom::new(p, Complex64::new(1.0, 0.0)))
            .collect();
        let sep = coset.lattice().shortest_vector_len();
        AtomicMeasure::new(coset.dim(), atoms, r, Some(sep * (1.0 - 1e-12)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    pub fn sep_radius(&self) -> Option<f64> {
        self.sep_radius
    }

    /// Total variation `Σ|c_λ|` over the window.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass.norm()).sum()
    }

    /// Shift by `t`: atoms move from `λ` to `λ + t`, so that pairing the
    /// result with `g` equals pairing the original with `g(· + t)`.
    /// The containment window grows by `|t|`.
    pub fn translate(&self, t: &[f64]) -> Result<AtomicMeasure> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: t.len(),
            });
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Atom::new(
                    a.point.iter().zip(t).map(|(p, s)| p + s).collect(),
                    a.mass,
                )
            })
            .collect();
        AtomicMeasure::new(
            self.dim,
            atoms,
            self.window_radius + norm(t),
            self.sep_radius,
        )
    }

    /// `Σ_λ c_λ g(λ)`.
    pub fn pairing<F: Fn(&[f64]) -> Complex64>(&self, g: F) -> Complex64 {
        self.atoms.iter().map(|a| a.mass * g(&a.point)).sum()
    }

    /// Applies `f(point, mass)` to every mass, keeping positions fixed.
    pub fn map_masses<F: Fn(&[f64], Complex64) -> Complex64>(&self, f: F) -> AtomicMeasure {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(a.point.clone(), f(&a.point, a.mass)))
            .collect();
        AtomicMeasure {
            dim: self.dim,
            atoms,
            window_radius: self.window_radius,
            sep_radius: self.sep_radius,
        }
    }

    /// Multiplies every mass by `c`.
    pub fn scaled(&self, c: Complex64) -> AtomicMeasure {
        self.map_masses(|_, m| m * c)
    }

    /// Minimum pairwise distance of atom positions; `+∞` with fewer than two
    /// atoms. Exact over the finite set (grid-accelerated).
    pub fn min_separation(&self) -> f64 {
        min_separation_of(&self.atoms)
    }

    /// `max_t Σ_{|λ−t|<1} |c_λ|` over a candidate set of atom centers plus a
    /// 0.1-pitch grid covering the window (and, in one dimension, an exact
    /// sliding-window pass). Upper-bounds hold at the resolution of the
    /// candidate set.
    pub fn translation_bound(&self) -> f64 {
        if self.atoms.is_empty() {
            return 0.0;
        }
        let grid = CellGrid::build(&self.atoms, 1.0);
        let mut best: f64 = 0.0;
        // atom-centered candidates
        for a in &self.atoms {
            best = best.max(grid.ball_mass(&a.point, 1.0));
        }
        // 0.1-pitch grid covering the window plus one unit of margin
        let w = self.window_radius + 1.0;
        let pitch = 0.1;
        let steps = (2.0 * w / pitch).ceil() as i64 + 1;
        let mut idx = vec![0i64; self.dim];
        'outer: loop {
            let t: Vec<f64> = idx.iter().map(|i| -w + *i as f64 * pitch).collect();
            best = best.max(grid.ball_mass(&t, 1.0));
            for i in (0..self.dim).rev() {
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
        if self.dim == 1 {
            // exact in one dimension: the sup over open intervals of length 2
            // is attained by a window [λ_i, λ_i + 2)
            let mut atoms: Vec<(f64, f64)> = self
                .atoms
                .iter()
                .map(|a| (a.point[0], a.mass.norm()))
                .collect();
            atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut j = 0usize;
            let mut run = 0.0;
            for i in 0..atoms.len() {
                if j < i {
                    j = i;
                    run = 0.0;
                }
                while j < atoms.len() && atoms[j].0 < atoms[i].0 + 2.0 {
                    run += atoms[j].1;
                    j += 1;
                }
                best = best.max(run);
                run -= atoms[i].1;
            }
        }
        best
    }

    /// Smallest `C` with `|ν|(B(0,r)) ≤ C(1+r)^d` for all `r ≤ window_radius`,
    /// evaluated at the atom radii.
    pub fn growth_fit(&self) -> f64 {
        if self.atoms.is_empty() {
            return 0.0;
        }
        let mut radii: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|a| (norm(&a.point), a.mass.norm()))
            .collect();
        radii.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut cum = 0.0;
        let mut best: f64 = 0.0;
        for (r, m) in radii {
            cum += m;
            best = best.max(cum / (1.0 + r).powi(self.dim as i32));
        }
        best
    }

    /// Atoms with `|point| < r`, window shrunk to `r`.
    pub fn restricted_to_ball(&self, r: f64) -> AtomicMeasure {
        let atoms = self
            .atoms
            .iter()
            .filter(|a| norm(&a.point) < r)
            .cloned()
            .collect();
        AtomicMeasure {
            dim: self.dim,
            atoms,
            window_radius: r,
            sep_radius: self.sep_radius,
        }
    }

    /// Mass of the atom nearest `p` within `tol`, if any.
    pub fn mass_at(&self, p: &[f64], tol: f64) -> Option<Complex64> {
        // atoms are few enough that a linear scan with early norm filter works
        let np = norm(p);
        self.atoms
            .iter()
            .filter(|a| (norm(&a.point) - np).abs() <= tol)
            .find(|a| dist(&a.point, p) <= tol)
            .map(|a| a.mass)
    }

    /// Sums measures, merging atoms whose positions coincide within `tol`.
    /// The window is the largest input window (containment), masses add.
    pub fn sum(parts: &[&AtomicMeasure], tol: f64) -> Result<AtomicMeasure> {
        let dim = parts
            .first()
            .map(|m| m.dim)
            .ok_or_else(|| Error::BadInput("empty measure sum".into()))?;
        let mut atoms: Vec<Atom> = Vec::new();
        let mut window: f64 = 0.0;
        for m in parts {
            if m.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.dim,
                });
            }
            atoms.extend(m.atoms.iter().cloned());
            window = window.max(m.window_radius);
        }
        let atoms = merge_atoms(atoms, tol);
        AtomicMeasure::new(dim, atoms, window, None)
    }
}

/// Merges atoms within `tol` of each other (masses add, first-seen position
/// kept); atoms whose merged mass is exactly zero are removed.
pub(crate) fn merge_atoms(mut atoms: Vec<Atom>, tol: f64) -> Vec<Atom> {
    atoms.sort_by(|a, b| crate::util::lex_cmp(&a.point, &b.point));
    let mut kept: Vec<Atom> = Vec::with_capacity(atoms.len());
    let mut window_start = 0usize;
    for atom in atoms {
        let first = atom.point.first().copied().unwrap_or(0.0);
        while window_start < kept.len()
            && kept[window_start].point.first().copied().unwrap_or(0.0) + tol < first
        {
            window_start += 1;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, k) in kept.iter().enumerate().skip(window_start) {
            let d = dist(&k.point, &atom.point);
            if d <= tol && best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        match best {
            Some((i, _)) => kept[i].mass += atom.mass,
            None => kept.push(atom),
        }
    }
    kept.retain(|a| a.mass != Complex64::ZERO);
    kept
}

pub(crate) fn min_separation_of(atoms: &[Atom]) -> f64 {
    if atoms.len() < 2 {
        return f64::INFINITY;
    }
    // initial guess from a deterministic sample of consecutive pairs
    let mut guess = f64::INFINITY;
    let stride = (atoms.len() / 512).max(1);
    for w in atoms.windows(2).step_by(stride) {
        guess = guess.min(dist(&w[0].point, &w[1].point));
    }
    if guess == 0.0 {
        return 0.0;
    }
    let grid = CellGrid::build(atoms, guess.max(1e-12));
    grid.min_pair_distance()
}

/// Uniform hash grid over atom positions, used for neighbor queries.
pub(crate) struct CellGrid<'a> {
    atoms: &'a [Atom],
    cell: f64,
    dim: usize,
    // sorted (cell key, atom index)
    table: Vec<(Vec<i64>, usize)>,
}

impl<'a> CellGrid<'a> {
    pub fn build(atoms: &'a [Atom], cell: f64) -> Self {
        let dim = atoms.first().map(|a| a.point.len()).unwrap_or(0);
        let mut table: Vec<(Vec<i64>, usize)> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                (
                    a.point.iter().map(|x| (x / cell).floor() as i64).collect(),
                    i,
                )
            })
            .collect();
        table.sort();
        CellGrid {
            atoms,
            cell,
            dim,
            table,
        }
    }

    fn indices_in_cell<'b>(&'b self, key: &'b [i64]) -> impl Iterator<Item = usize> + 'b {
        let lo = self.table.partition_point(|(k, _)| k.as_slice() < key);
        self.table[lo..]
            .iter()
            .take_while(move |(k, _)| k.as_slice() == key)
            .map(|(_, i)| *i)
    }

    /// Iterates atom indices in cells overlapping `B(center, r)`.
    fn for_each_near<F: FnMut(usize)>(&self, center: &[f64], r: f64, mut f: F) {
        let lo: Vec<i64> = center
            .iter()
            .map(|x| ((x - r) / self.cell).floor() as i64)
            .collect();
        let hi: Vec<i64> = center
            .iter()
            .map(|x| ((x + r) / self.cell).floor() as i64)
            .collect();
        let mut key = lo.clone();
        'outer: loop {
            for i in self.indices_in_cell(&key) {
                f(i);
            }
            for i in (0..self.dim).rev() {
                key[i] += 1;
                if key[i] <= hi[i] {
                    continue 'outer;
                }
                key[i] = lo[i];
                if i == 0 {
                    break 'outer;
                }
            }
            if self.dim == 0 {
                break;
            }
        }
    }

    /// Visits `(index, distance)` for atoms in cells overlapping `B(center, r)`.
    pub fn for_each_within<F: FnMut(usize, f64)>(&self, center: &[f64], r: f64, mut f: F) {
        self.for_each_near(center, r, |i| {
            f(i, dist(&self.atoms[i].point, center));
        });
    }

    /// `Σ_{|λ−t|<r} |c_λ|`.
    pub fn ball_mass(&self, t: &[f64], r: f64) -> f64 {
        let mut acc = 0.0;
        self.for_each_near(t, r, |i| {
            if dist(&self.atoms[i].point, t) < r {
                acc += self.atoms[i].mass.norm();
            }
        });
        acc
    }

    /// Exact minimum pairwise distance, given that the cell size is an upper
    /// bound for it.
    pub fn min_pair_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.atoms.iter().enumerate() {
            self.for_each_near(&a.point, self.cell, |j| {
                if j > i {
                    best = best.min(dist(&a.point, &self.atoms[j].point));
                }
            });
        }
        best
    }

    /// Nearest-neighbor distance from atom `i` to any other atom.
    pub fn nearest_other(&self, i: usize, r: f64) -> f64 {
        let mut best = f64::INFINITY;
        self.for_each_near(&self.atoms[i].point, r, |j| {
            if j != i {
                best = best.min(dist(&self.atoms[i].point, &self.atoms[j].point));
            }
        });
        best
    }
}
