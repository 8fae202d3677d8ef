//! Linear combinations of the QIMs as a single diagonal charge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::signatures::signature_bits;

/// Eigenvalue with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub n: usize,
    pub coefficients: Vec<f64>,
    pub distinct_eigenvalues: usize,
    pub max_multiplicity: u64,
    pub max_multiplicity_value: f64,
    pub nondegenerate: bool,
    /// Ascending.
    pub levels: Vec<Level>,
}

/// `I = Σ c_i I_i` on the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCharge {
    /// Diagonal entry for each basis state, indexed by its bit pattern.
    pub diagonal: Vec<f64>,
    pub report: AggregateReport,
}

fn same_level(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

pub fn aggregate_qims(spec: &LatticeSpec, coefficients: &[f64]) -> Result<AggregateCharge> {
    if coefficients.len() != spec.n_qims() {
        return Err(Error::Precondition(format!(
            "expected {} coefficients, got {}",
            spec.n_qims(),
            coefficients.len()
        )));
    }
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::Precondition("non-finite coefficient".into()));
    }
    spec.ensure_full_sweep()?;

    let diagonal: Vec<f64> = spec
        .configurations()
        .map(|c| {
            let sig = signature_bits(spec, c.bits());
            coefficients
                .iter()
                .enumerate()
                .filter(|&(i, _)| (sig >> i) & 1 == 1)
                .map(|(_, c)| c)
                .sum()
        })
        .collect();

    let mut sorted = diagonal.clone();
    sorted.sort_by(f64::total_cmp);
    let mut levels: Vec<Level> = Vec::new();
    for v in sorted {
        match levels.last_mut() {
            Some(last) if same_level(last.value, v) => last.multiplicity += 1,
            _ => levels.push(Level {
                value: v,
                multiplicity: 1,
            }),
        }
    }
    let top = levels
        .iter()
        .copied()
        .reduce(|best, l| if l.multiplicity > best.multiplicity { l } else { best })
        .expect("at least one basis state");

    Ok(AggregateCharge {
        diagonal,
        report: AggregateReport {
            n: spec.n_sites(),
            coefficients: coefficients.to_vec(),
            distinct_eigenvalues: levels.len(),
            max_multiplicity: top.multiplicity,
            max_multiplicity_value: top.value,
            nondegenerate: top.multiplicity == 1,
            levels,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_weights_resolve_signatures() {
        let spec = LatticeSpec::periodic(3).unwrap();
        let agg = aggregate_qims(&spec, &[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(agg.report.distinct_eigenvalues, 5);
        assert_eq!(agg.report.max_multiplicity, 4);
        assert_eq!(agg.report.max_multiplicity_value, 0.0);
        assert!(!agg.report.nondegenerate);
    }

    #[test]
    fn quaternary_charge() {
        let spec = LatticeSpec::periodic(4).unwrap();
        let agg = aggregate_qims(&spec, &[1.0, 2.0, 0.0, 0.0]).unwrap();
        for l in &agg.report.levels {
            assert!([0.0, 1.0, 2.0, 3.0].contains(&l.value));
        }
    }

    #[test]
    fn zero_coefficients() {
        let spec = LatticeSpec::periodic(5).unwrap();
        let agg = aggregate_qims(&spec, &[0.0; 5]).unwrap();
        assert_eq!(agg.report.levels, vec![Level { value: 0.0, multiplicity: 32 }]);
        assert!(aggregate_qims(&spec, &[1.0; 4]).is_err());
    }
}
