//! Sector spectra, level statistics and the constructions built on them.

pub mod aggregate;
pub mod cutting;
pub mod eigen;
pub mod levelstats;
pub mod neumann;
pub mod symmetry;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{build_sector_hamiltonian, LatticeSpec};
use crate::signatures::{sector_basis, Signature};

pub use aggregate::{aggregate_qims, AggregateCharge, AggregateReport, Level};
pub use cutting::{cut_factorization_check, open_segment_zero_sector, CutReport, CUT_TOLERANCE};
pub use eigen::{contract_defects, eigensolve_symmetric, eigenvalues_symmetric, DenseMatrix, Spectrum};
pub use levelstats::{
    r_statistic, LevelStatOptions, LevelStatReport, GOE_MEAN_R, MIN_MEANINGFUL_LEVELS, POISSON_MEAN_R,
};
pub use neumann::{neumann_demo, neumann_interpolate, random_nondegenerate_base, NeumannExpansion, MAX_NEUMANN_DIM};
pub use symmetry::{momentum_block_dimension, resolve_symmetry, Parity, SymmetrySector};

/// Hamiltonian of one signature sector as a dense matrix.
pub fn sector_matrix(spec: &LatticeSpec, s: &Signature) -> Result<DenseMatrix> {
    let basis = sector_basis(spec, s)?;
    Ok(DenseMatrix::from_sparse(&build_sector_hamiltonian(spec, &basis)?))
}

/// Ascending eigenvalues of one signature sector.
pub fn sector_spectrum(spec: &LatticeSpec, s: &Signature) -> Result<Vec<f64>> {
    eigenvalues_symmetric(&sector_matrix(spec, s)?)
}

/// Largest `|E_i + E_{n-1-i}|` over a sorted spectrum; zero when the
/// spectrum is symmetric about zero.
pub fn particle_hole_defect(sorted: &[f64]) -> f64 {
    sorted
        .iter()
        .zip(sorted.iter().rev())
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max)
}

/// Level statistics of one symmetry block together with its solver defects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockStatistics {
    pub n: usize,
    pub signature: Signature,
    pub k: Option<usize>,
    pub parity: Parity,
    pub block_dimension: usize,
    pub residual_bound: f64,
    pub orthogonality_defect: f64,
    pub eigenvalues: Vec<f64>,
    pub stats: LevelStatReport,
}

pub fn block_statistics(
    spec: &LatticeSpec,
    s: &Signature,
    k: Option<usize>,
    parity: Parity,
    opts: &LevelStatOptions,
) -> Result<BlockStatistics> {
    let block = resolve_symmetry(spec, s, k, parity)?;
    let spectrum = eigensolve_symmetric(&block.hamiltonian())?;
    let stats = r_statistic(&spectrum.eigenvalues, opts)?;
    Ok(BlockStatistics {
        n: spec.n_sites(),
        signature: *s,
        k,
        parity,
        block_dimension: block.dim(),
        residual_bound: spectrum.residual_bound,
        orthogonality_defect: spectrum.orthogonality_defect,
        eigenvalues: spectrum.eigenvalues,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_site_zero_sector() {
        let spec = LatticeSpec::periodic(3).unwrap();
        let e = sector_spectrum(&spec, &Signature::zeros(3)).unwrap();
        // star graph K_{1,3}: ±sqrt(3) and a doubly degenerate zero
        assert_eq!(e.len(), 4);
        assert!((e[0] + 3f64.sqrt()).abs() < 1e-12);
        assert!(e[1].abs() < 1e-12 && e[2].abs() < 1e-12);
        assert!(particle_hole_defect(&e) < 1e-12);
    }
}
