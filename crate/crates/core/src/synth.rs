//! Seeded synthesis of test fixtures: random exponential sums, random
//! lattices, and forward-constructed lattice-union measures with known
//! factorizations. Everything is driven by an explicit ChaCha seed so runs
//! are reproducible byte for byte.

use crate::exp_sum::{ExpSum, Term};
use crate::fourier::{multiply_pair, pair_from_comb, FourierPair};
use crate::lattice::{Coset, Lattice};
use crate::measure::AtomicMeasure;
use crate::util::norm;
use crate::Result;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::new(
        rng.random_range(-radius..radius),
        rng.random_range(-radius..radius),
    )
}

/// Random exponential sum with the given term count and frequency scale.
pub fn random_exp_sum(rng: &mut ChaCha8Rng, dim: usize, terms: usize, freq_scale: f64) -> ExpSum {
    let list: Vec<Term> = (0..terms)
        .map(|_| {
            Term::new(
                random_complex(rng, 1.0),
                (0..dim)
                    .map(|_| rng.random_range(-freq_scale..freq_scale))
                    .collect(),
            )
        })
        .collect();
    ExpSum::new(dim, list).expect("random terms are valid")
}

/// `f = 1 + u` with `‖u‖_W ≤ norm_cap` and frequencies of `u` drawn from the
/// Z-span of `rank` random generators (one-dimensional).
pub fn random_one_plus_u(
    rng: &mut ChaCha8Rng,
    rank: usize,
    u_terms: usize,
    norm_cap: f64,
) -> ExpSum {
    let gens: Vec<f64> = (0..rank)
        .map(|_| rng.random_range(0.3..2.0) * if rng.random_bool(0.5) { 1.0 } else { 2f64.sqrt() })
        .collect();
    let mut terms = vec![Term::new(Complex64::ONE, vec![0.0])];
    let mut mass = 0.0;
    let mut raw: Vec<(Complex64, f64)> = Vec::new();
    for _ in 0..u_terms {
        let mut freq = 0.0;
        let mut zero = true;
        for g in &gens {
            let k = rng.random_range(-3i64..=3);
            if k != 0 {
                zero = false;
            }
            freq += k as f64 * g;
        }
        if zero {
            continue;
        }
        let c = random_complex(rng, 1.0);
        mass += c.norm();
        raw.push((c, freq));
    }
    if mass > 0.0 {
        let scale = norm_cap * rng.random_range(0.5..1.0) / mass;
        for (c, freq) in raw {
            terms.push(Term::new(c * scale, vec![freq]));
        }
    }
    ExpSum::new(1, terms).expect("constructed terms are valid")
}

/// Random nonsingular integer-matrix lattice with entries in `[-3, 3]`.
pub fn random_integer_lattice(rng: &mut ChaCha8Rng, dim: usize) -> Lattice {
    loop {
        let entries: Vec<f64> = (0..dim * dim)
            .map(|_| rng.random_range(-3i64..=3) as f64)
            .collect();
        if let Ok(l) = Lattice::from_rows(dim, &entries) {
            if l.det_abs() >= 1.0 - 1e-9 {
                return l;
            }
        }
    }
}

/// Uniform random points in the cube of the given half-width.
pub fn uniform_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, half_width: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| rng.random_range(-half_width..half_width))
                .collect()
        })
        .collect()
}

/// A forward-constructed union-of-cosets measure with known ground truth.
pub struct SynthUnion {
    pub pair: FourierPair,
    pub cosets: Vec<Coset>,
    /// Mass factors used on each coset (frequencies inside the dual cell).
    pub factors: Vec<ExpSum>,
}

/// Parameters for [`synth_union`].
pub struct SynthUnionSpec {
    pub dim: usize,
    pub n_cosets: usize,
    pub r_time: f64,
    pub r_freq: f64,
    /// Extra exponential-sum terms modulating each coset's masses.
    pub factor_terms: usize,
    /// Lower bound for `|mass|` at every atom.
    pub min_mass: f64,
    /// Required distance between distinct cosets over the window.
    pub min_gap: f64,
    /// In two dimensions, reuse one base lattice for all cosets (shifts
    /// differ); keeps the spectral side on a single dual lattice.
    pub shared_lattice_2d: bool,
}

/// Builds `μ = Σⱼ Fⱼ·Δʲ` with pairwise disjoint cosets, exact frequency side,
/// and masses bounded away from zero.
pub fn synth_union(rng: &mut ChaCha8Rng, spec: &SynthUnionSpec) -> Result<SynthUnion> {
    let dim = spec.dim;
    // draw disjoint cosets; retry until pairwise separation holds
    let mut cosets: Vec<Coset> = Vec::new();
    let mut shared: Option<Lattice> = None;
    let mut guard = 0;
    while cosets.len() < spec.n_cosets {
        guard += 1;
        if guard > 400 {
            break;
        }
        let candidate = match dim {
            1 => {
                let g = rng.random_range(0.8..2.2)
                    * if rng.random_bool(0.5) { 1.0 } else { 2f64.sqrt() }
                    * if rng.random_bool(0.25) { 1.5 } else { 1.0 };
                let shift = rng.random_range(0.0..g);
                Coset::new(Lattice::scaled_integer(g)?, vec![shift])
            }
            _ => {
                let lattice = if spec.shared_lattice_2d {
                    if shared.is_none() {
                        let a = rng.random_range(0.5..0.68);
                        let b = rng.random_range(0.5..0.68);
                        let skew = rng.random_range(-0.12..0.12);
                        shared = Some(Lattice::from_rows(2, &[a, skew, 0.0, b])?);
                    }
                    shared.clone().unwrap()
                } else {
                    let a = rng.random_range(0.5..0.68);
                    let b = rng.random_range(0.5..0.68);
                    let skew = rng.random_range(-0.12..0.12);
                    Lattice::from_rows(2, &[a, skew, 0.0, b])?
                };
                let shift = vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
                Coset::new(lattice, shift)
            }
        };
        // require genuine separation from the already chosen cosets over the
        // window, so the union stays uniformly discrete
        let probe = candidate.enumerate_in_ball(spec.r_time.min(12.0), 100_000)?;
        let mut ok = true;
        'check: for c in &cosets {
            for p in probe.iter() {
                let d = crate::lattice::coset_distance(c, p);
                if d < spec.min_gap {
                    ok = false;
                    break 'check;
                }
            }
        }
        if ok && !probe.is_empty() {
            cosets.push(candidate);
        }
    }

    // factors: a dominant constant plus small modulation keeps |mass| above
    // the floor everywhere
    let mut factors: Vec<ExpSum> = Vec::new();
    for coset in &cosets {
        let dual = coset.lattice().dual()?;
        let dominant = {
            let mag = rng.random_range(spec.min_mass * 4.0..2.0);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(mag, phase)
        };
        let mut terms = vec![Term::new(dominant, vec![0.0; dim])];
        let budget = dominant.norm() - spec.min_mass * 2.0;
        let mut raw: Vec<(Complex64, Vec<f64>)> = Vec::new();
        let mut mass = 0.0;
        for _ in 0..spec.factor_terms {
            let cell: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..0.95)).collect();
            let alpha = dual.point(&cell);
            let c = random_complex(rng, 1.0);
            mass += c.norm();
            raw.push((c, alpha));
        }
        if mass > 0.0 && budget > 0.0 {
            let scale = budget * rng.random_range(0.4..0.9) / mass;
            for (c, alpha) in raw {
                terms.push(Term::new(c * scale, alpha));
            }
        }
        factors.push(ExpSum::new(dim, terms)?);
    }

    // assemble the pair: time side is the union with modulated masses, the
    // frequency side sums the per-coset transforms
    let mut freq_parts: Vec<AtomicMeasure> = Vec::new();
    let mut time_parts: Vec<AtomicMeasure> = Vec::new();
    for (coset, factor) in cosets.iter().zip(&factors) {
        let base = pair_from_comb(coset, spec.r_time, spec.r_freq)?;
        let modulated = multiply_pair(&base, factor)?;
        time_parts.push(modulated.time_measure()?.clone());
        freq_parts.push(modulated.freq_side().clone());
    }
    let time_refs: Vec<&AtomicMeasure> = time_parts.iter().collect();
    let time = AtomicMeasure::sum(&time_refs, 1e-9)?;
    let freq_refs: Vec<&AtomicMeasure> = freq_parts.iter().collect();
    let freq = AtomicMeasure::sum(&freq_refs, 1e-9)?;
    let max_shift = factors
        .iter()
        .flat_map(|f| f.terms().iter().map(|t| norm(&t.freq)))
        .fold(0.0, f64::max);

    let pair = FourierPair::from_parts(
        crate::fourier::TimeSide::Measure(time),
        freq,
        vec![crate::fourier::ProvenanceStep {
            op: "synth_union".into(),
            params: format!("cosets={}", cosets.len()),
            tail_charge: 0.0,
        }],
        spec.r_freq - max_shift,
    );
    Ok(SynthUnion {
        pair,
        cosets,
        factors,
    })
}
