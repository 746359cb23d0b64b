//! JSON document formats and CSV point-set import/export.
//!
//! Documents are plain serde structs converted to and from the domain types;
//! numbers round-trip exactly (serde_json emits shortest representations that
//! parse back to the same f64). Term and atom order is the deterministic
//! order maintained by the domain types, so identical inputs serialize to
//! identical bytes.

use crate::exp_sum::{ExpSum, Term};
use crate::fourier::{FourierPair, ProvenanceStep, TimeSide};
use crate::lattice::{Coset, Lattice};
use crate::measure::{Atom, AtomicMeasure};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpSumDoc {
    pub dim: usize,
    pub merge_tol: f64,
    pub tail_bound: f64,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub re: f64,
    pub im: f64,
    pub freq: Vec<f64>,
}

impl From<&ExpSum> for ExpSumDoc {
    fn from(f: &ExpSum) -> Self {
        ExpSumDoc {
            dim: f.dim(),
            merge_tol: f.merge_tol(),
            tail_bound: f.tail_bound(),
            terms: f
                .terms()
                .iter()
                .map(|t| TermDoc {
                    re: t.coeff.re,
                    im: t.coeff.im,
                    freq: t.freq.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ExpSumDoc> for ExpSum {
    type Error = Error;
    fn try_from(doc: ExpSumDoc) -> Result<Self> {
        let terms = doc
            .terms
            .into_iter()
            .map(|t| Term::new(Complex64::new(t.re, t.im), t.freq))
            .collect();
        let mut out = ExpSum::with_tols(doc.dim, terms, doc.merge_tol, 0.0)?;
        out.charge_tail(doc.tail_bound);
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureDoc {
    pub dim: usize,
    pub window_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sep_radius: Option<f64>,
    pub atoms: Vec<AtomDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomDoc {
    pub point: Vec<f64>,
    pub re: f64,
    pub im: f64,
}

impl From<&AtomicMeasure> for MeasureDoc {
    fn from(m: &AtomicMeasure) -> Self {
        MeasureDoc {
            dim: m.dim(),
            window_radius: m.window_radius(),
            sep_radius: m.sep_radius(),
            atoms: m
                .atoms()
                .iter()
                .map(|a| AtomDoc {
                    point: a.point.clone(),
                    re: a.mass.re,
                    im: a.mass.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<MeasureDoc> for AtomicMeasure {
    type Error = Error;
    fn try_from(doc: MeasureDoc) -> Result<Self> {
        let atoms = doc
            .atoms
            .into_iter()
            .map(|a| Atom::new(a.point, Complex64::new(a.re, a.im)))
            .collect();
        AtomicMeasure::new(doc.dim, atoms, doc.window_radius, doc.sep_radius)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CosetDoc {
    pub dim: usize,
    /// Row-major basis entries.
    pub basis: Vec<f64>,
    pub shift: Vec<f64>,
}

impl From<&Coset> for CosetDoc {
    fn from(c: &Coset) -> Self {
        let d = c.dim();
        let mut basis = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                basis.push(c.lattice().basis()[(i, j)]);
            }
        }
        CosetDoc {
            dim: d,
            basis,
            shift: c.shift().to_vec(),
        }
    }
}

impl TryFrom<CosetDoc> for Coset {
    type Error = Error;
    fn try_from(doc: CosetDoc) -> Result<Self> {
        let lattice = Lattice::from_rows(doc.dim, &doc.basis)?;
        if doc.shift.len() != doc.dim {
            return Err(Error::DimensionMismatch {
                expected: doc.dim,
                got: doc.shift.len(),
            });
        }
        Ok(Coset::new(lattice, doc.shift))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceDoc {
    pub op: String,
    pub params: String,
    pub tail_charge: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_measure: Option<MeasureDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_density: Option<ExpSumDoc>,
    pub freq_side: MeasureDoc,
    pub provenance: Vec<ProvenanceDoc>,
    pub reliable_freq_radius: f64,
}

impl From<&FourierPair> for PairDoc {
    fn from(p: &FourierPair) -> Self {
        let (time_measure, time_density) = match p.time_side() {
            TimeSide::Measure(m) => (Some(MeasureDoc::from(m)), None),
            TimeSide::Density(f) => (None, Some(ExpSumDoc::from(f))),
        };
        PairDoc {
            time_measure,
            time_density,
            freq_side: MeasureDoc::from(p.freq_side()),
            provenance: p
                .provenance()
                .iter()
                .map(|s| ProvenanceDoc {
                    op: s.op.clone(),
                    params: s.params.clone(),
                    tail_charge: s.tail_charge,
                })
                .collect(),
            reliable_freq_radius: p.reliable_freq_radius(),
        }
    }
}

impl TryFrom<PairDoc> for FourierPair {
    type Error = Error;
    fn try_from(doc: PairDoc) -> Result<Self> {
        let time = match (doc.time_measure, doc.time_density) {
            (Some(m), None) => TimeSide::Measure(AtomicMeasure::try_from(m)?),
            (None, Some(f)) => TimeSide::Density(ExpSum::try_from(f)?),
            _ => {
                return Err(Error::BadInput(
                    "pair document needs exactly one of time_measure/time_density".into(),
                ))
            }
        };
        let freq = AtomicMeasure::try_from(doc.freq_side)?;
        if time.dim() != freq.dim() {
            return Err(Error::DimensionMismatch {
                expected: time.dim(),
                got: freq.dim(),
            });
        }
        let provenance = doc
            .provenance
            .into_iter()
            .map(|s| ProvenanceStep {
                op: s.op,
                params: s.params,
                tail_charge: s.tail_charge,
            })
            .collect();
        Ok(FourierPair::from_parts(
            time,
            freq,
            provenance,
            doc.reliable_freq_radius,
        ))
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Writes a bare point set, one comma-separated point per row.
pub fn points_to_csv(points: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for p in points {
        let row: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reads a bare point set; `#`-prefixed lines and blank lines are skipped.
pub fn points_from_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::BadInput(format!("line {}: bad number {field:?}", lineno + 1))
            })?;
            row.push(v);
        }
        if let Some(first) = out.first() {
            if first.len() != row.len() {
                return Err(Error::BadInput(format!(
                    "line {}: expected {} columns, got {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn expsum_round_trip() {
        let f = ExpSum::new(
            2,
            vec![
                Term::new(Complex64::new(1.0, -0.5), vec![0.1, 0.2]),
                Term::new(Complex64::new(0.25, 0.0), vec![-1.0, 3.0]),
            ],
        )
        .unwrap();
        let doc = ExpSumDoc::from(&f);
        let json = to_json_pretty(&doc).unwrap();
        let back: ExpSumDoc = from_json(&json).unwrap();
        let g = ExpSum::try_from(back).unwrap();
        assert_eq!(f.len(), g.len());
        for (a, b) in f.terms().iter().zip(g.terms()) {
            assert_eq!(a.freq, b.freq);
            assert_eq!(a.coeff, b.coeff);
        }
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let pts = vec![vec![0.1, -2.0], vec![3.5, 7.25]];
        let csv = points_to_csv(&pts);
        let back = points_from_csv(&csv).unwrap();
        assert_eq!(pts, back);
        assert!(points_from_csv("1.0,2.0\n3.0\n").is_err());
        assert!(points_from_csv("a,b\n").is_err());
        assert_eq!(points_from_csv("# comment\n\n").unwrap().len(), 0);
    }

    proptest! {
        // exact f64 round-trip through the JSON representation
        #[test]
        fn json_numbers_round_trip(xs in proptest::collection::vec(-1e12f64..1e12, 1..8)) {
            let pts = vec![xs.clone()];
            let csv = points_to_csv(&pts);
            let back = points_from_csv(&csv).unwrap();
            prop_assert_eq!(pts, back);
        }
    }
}
