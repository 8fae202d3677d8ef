//! Frozen up-domains split a ring into independent open segments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{low_mask, LatticeSpec};
use crate::signatures::{is_attainable, Signature};

use super::eigen::{eigenvalues_symmetric, DenseMatrix};
use super::sector_spectrum;

/// Agreement required between the two spectra.
pub const CUT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub n: usize,
    pub signature: Signature,
    /// 1-based sites pinned up by the signature.
    pub frozen_up: Vec<usize>,
    /// 1-based sites pinned down next to an up-domain.
    pub frozen_down: Vec<usize>,
    /// Lengths of the free open segments left after the cut.
    pub segments: Vec<usize>,
    pub sector_dimension: usize,
    pub product_dimension: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Hamiltonian of an open run of `len` free sites, restricted to states
/// without adjacent up spins. The sites just outside the run are down, so the
/// end spins only see one neighbour. `len = 0` is the single empty state.
pub fn open_segment_zero_sector(len: usize) -> DenseMatrix {
    let states: Vec<u64> = (0..1u64 << len).filter(|c| c & (c >> 1) == 0).collect();
    let index = |c: u64| states.binary_search(&c).ok();
    let mut m = DenseMatrix::zeros(states.len());
    for (col, &c) in states.iter().enumerate() {
        for site in 0..len {
            let left_down = site == 0 || (c >> (site - 1)) & 1 == 0;
            let right_down = site + 1 == len || (c >> (site + 1)) & 1 == 0;
            if left_down && right_down {
                if let Some(row) = index(c ^ (1 << site)) {
                    m[(row, col)] += 1.0;
                }
            }
        }
    }
    m
}

/// Lengths of maximal runs of set bits in `free` (cyclic on a ring).
fn runs(free: u64, n: usize, cyclic: bool) -> Vec<usize> {
    let bit = |k: usize| (free >> (k % n)) & 1 == 1;
    // start scanning just after a pinned site so no run straddles the origin
    let start = if cyclic { (0..n).find(|&k| !bit(k)).map_or(0, |k| k + 1) } else { 0 };
    let mut out = Vec::new();
    let mut current = 0;
    for step in 0..n {
        if bit(start + step) {
            current += 1;
        } else if current > 0 {
            out.push(current);
            current = 0;
        }
    }
    if current > 0 {
        out.push(current);
    }
    out
}

fn sites(bits: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&k| (bits >> k) & 1 == 1).map(|k| k + 1).collect()
}

/// Compares the spectrum of sector `s` with the sums of its open segments'
/// spectra.
pub fn cut_factorization_check(spec: &LatticeSpec, s: &Signature) -> Result<CutReport> {
    let att = is_attainable(spec, s)?;
    let Some(witness) = att.witness else {
        return Err(Error::Precondition(format!("signature {s} is not attainable")));
    };
    if s.count_ones() == 0 {
        return Err(Error::Precondition(
            "the zero signature freezes no domain, so nothing is cut".into(),
        ));
    }
    let n = spec.n_sites();
    let mask = low_mask(n);
    let up = witness.bits();
    let beside = if spec.is_periodic() {
        ((up << 1) | (up >> 1) | (up >> (n - 1)) | (up << (n - 1))) & mask
    } else {
        ((up << 1) | (up >> 1)) & mask
    };
    let down = beside & !up;
    let free = mask & !up & !down;
    let segments = runs(free, n, spec.is_periodic());

    let mut sums = vec![0.0];
    for &len in &segments {
        let levels = eigenvalues_symmetric(&open_segment_zero_sector(len))?;
        sums = sums
            .iter()
            .flat_map(|a| levels.iter().map(move |b| a + b))
            .collect();
    }
    sums.sort_by(f64::total_cmp);

    let sector = sector_spectrum(spec, s)?;
    let max_deviation = if sector.len() == sums.len() {
        sector
            .iter()
            .zip(&sums)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };

    Ok(CutReport {
        n,
        signature: *s,
        frozen_up: sites(up, n),
        frozen_down: sites(down, n),
        segments,
        sector_dimension: sector.len(),
        product_dimension: sums.len(),
        max_deviation,
        passed: max_deviation <= CUT_TOLERANCE,
    })
}
