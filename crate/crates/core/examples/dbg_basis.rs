use quasicryst::decompose::atomwise_max_diff;
use quasicryst::fourier::bump::BumpFunction;
use quasicryst::synth;
use quasicryst::*;

fn norm(v: &[f64]) -> f64 { v.iter().map(|x| x * x).sum::<f64>().sqrt() }

fn main() {
    let trial = 1u64;
    let spec = synth::SynthUnionSpec {
        dim: 1, n_cosets: 2, r_time: 28.0, r_freq: 25.0,
        factor_terms: 3, min_mass: 0.1, min_gap: 0.35, shared_lattice_2d: false,
    };
    let probe = synth::synth_union(&mut synth::rng(500 + trial), &spec).unwrap();
    let time = probe.pair.time_measure().unwrap();
    let min_sep = time.min_separation();
    let eta = 0.45 * min_sep;
    let psi = BumpFunction::new(1, eta).unwrap();
    let growth = probe.pair.freq_side().growth_fit();
    let required = psi.transform_envelope().required_radius(growth * 1.5, 1, 5e-5).unwrap();
    println!("min_sep {min_sep:.3} eta {eta:.3} growth {growth:.2} required {required:.1}");
    let spec = synth::SynthUnionSpec { r_freq: required * 1.03 + 2.0, ..spec };
    let fixture = synth::synth_union(&mut synth::rng(500 + trial), &spec).unwrap();
    for c in &fixture.cosets {
        println!("coset det {:.4} shift {:?}", c.lattice().det_abs(), c.shift());
    }
    let time = fixture.pair.time_measure().unwrap();
    let points: Vec<Vec<f64>> = time.atoms().iter().map(|a| a.point.clone()).collect();
    let detected = match detect_lattice_union(&points, 4, 1e-9).unwrap() {
        DetectOutcome::Cosets(cs) => cs,
        other => panic!("{other:?}"),
    };
    for c in &detected {
        println!("detected det {:.4} shift {:?}", c.lattice().det_abs(), c.shift());
    }
    let dec = factor_measure(&fixture.pair, &detected, &psi, 1e-4).unwrap();
    println!("factor residual {:.3e}, factor terms {:?}", dec.factor_residual,
        dec.factors.iter().map(|f| f.len()).collect::<Vec<_>>());
    let r_nu = detected.iter().map(|c| {
        let dual = c.lattice().dual().unwrap();
        norm(&dual.generator(0))
    }).fold(0.0f64, f64::max) * 3.3 + 0.5;
    println!("r_nu {r_nu:.2}");
    let dec = spectral_parts(&fixture.pair, dec, r_nu, 1e-8).unwrap();
    println!("periodicity {:.3e} reconstruction {:.3e}",
        dec.periodicity_residual.unwrap(), dec.reconstruction_residual.unwrap());

    // where is the mismatch?
    let mut recon_parts = Vec::new();
    for (part, coset) in dec.spectral.iter().zip(&dec.cosets) {
        let shift = coset.shift().to_vec();
        recon_parts.push(part.measure.map_masses(|y, m| {
            m * num_complex::Complex64::cis(-2.0 * std::f64::consts::PI * (shift[0] * y[0]))
        }));
    }
    let refs: Vec<&AtomicMeasure> = recon_parts.iter().collect();
    let recon = AtomicMeasure::sum(&refs, 1e-9).unwrap();
    let w = r_nu.min(fixture.pair.reliable_freq_radius()) - 1e-9;
    println!("common window {w:.2}");
    let fs = fixture.pair.freq_side();
    for a in recon.atoms() {
        if norm(&a.point) < w {
            let other = fs.mass_at(&a.point, 1e-9).unwrap_or(num_complex::Complex64::ZERO);
            let d = (a.mass - other).norm();
            if d > 1e-3 {
                println!("mismatch at {:?}: recon {:.4} truth {:.4}", a.point, a.mass, other);
            }
        }
    }
    let _ = atomwise_max_diff(&recon, fs, 1e-9, w);
}
