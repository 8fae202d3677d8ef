//! Chain geometry, basis states, the PXP Hamiltonian and its projector
//! integrals of motion.
//!
//! Sites are 1-based at every public entry point. Internally site `i` lives
//! in bit `i - 1` of a [`SpinConfiguration`]; a set bit is an up spin.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest chain length accepted anywhere.
pub const MIN_SITES: usize = 3;
/// Largest chain length for operations that sweep all `2^N` basis states.
pub const FULL_SWEEP_MAX_SITES: usize = 24;
/// Largest chain length for operations restricted to a single sector.
pub const SECTOR_MAX_SITES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            "open" | "obc" => Ok(Boundary::Open),
            other => Err(Error::InvalidLattice(format!("unknown boundary `{other}`"))),
        }
    }
}

/// Chain length and boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    n_sites: usize,
    boundary: Boundary,
}

impl LatticeSpec {
    pub fn new(n_sites: usize, boundary: Boundary) -> Result<Self> {
        if !(MIN_SITES..=SECTOR_MAX_SITES).contains(&n_sites) {
            return Err(Error::InvalidLattice(format!(
                "n_sites = {n_sites} outside {MIN_SITES}..={SECTOR_MAX_SITES}"
            )));
        }
        Ok(Self { n_sites, boundary })
    }

    pub fn periodic(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, Boundary::Periodic)
    }

    pub fn open(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, Boundary::Open)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == Boundary::Periodic
    }

    /// Number of integrals `I_i`: `N` on a ring, `N - 1` on an open chain.
    pub fn n_qims(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.n_sites,
            Boundary::Open => self.n_sites - 1,
        }
    }

    /// Dimension of the full Hilbert space.
    pub fn hilbert_dim(&self) -> u64 {
        1u64 << self.n_sites
    }

    pub(crate) fn site_mask(&self) -> u64 {
        low_mask(self.n_sites)
    }

    /// Fails unless a sweep over all `2^N` basis states is allowed.
    pub fn ensure_full_sweep(&self) -> Result<()> {
        if self.n_sites > FULL_SWEEP_MAX_SITES {
            return Err(Error::LimitExceeded(format!(
                "full-basis sweep needs n_sites <= {FULL_SWEEP_MAX_SITES}, got {}",
                self.n_sites
            )));
        }
        Ok(())
    }

    pub fn validate(&self, c: SpinConfiguration) -> Result<()> {
        if c.0 & !self.site_mask() != 0 {
            return Err(Error::InvalidConfiguration {
                value: c.0,
                n_sites: self.n_sites,
            });
        }
        Ok(())
    }

    /// Every basis state of the chain, ascending.
    pub fn configurations(&self) -> impl Iterator<Item = SpinConfiguration> {
        (0..self.hilbert_dim()).map(SpinConfiguration)
    }
}

pub(crate) fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// One computational basis state. Bit `i - 1` set means site `i` is up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinConfiguration(pub u64);

impl SpinConfiguration {
    pub fn bits(self) -> u64 {
        self.0
    }

    /// Spin at 1-based `site`.
    pub fn is_up(self, site: usize) -> bool {
        (self.0 >> (site - 1)) & 1 == 1
    }

    pub fn flip(self, site: usize) -> Self {
        SpinConfiguration(self.0 ^ (1 << (site - 1)))
    }

    /// Builds a configuration from a ket string such as `"↑↑↓"` or `"110"`,
    /// site 1 leftmost.
    pub fn from_ket(ket: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut n = 0;
        for ch in ket.chars() {
            let up = match ch {
                '↑' | '1' | 'u' | 'U' => true,
                '↓' | '0' | 'd' | 'D' => false,
                '|' | '⟩' | '>' | ' ' => continue,
                other => {
                    return Err(Error::InvalidLattice(format!(
                        "unexpected character `{other}` in ket"
                    )))
                }
            };
            if n >= 64 {
                return Err(Error::InvalidLattice("ket longer than 64 sites".into()));
            }
            if up {
                bits |= 1 << n;
            }
            n += 1;
        }
        Ok(SpinConfiguration(bits))
    }

    /// Ket notation with site 1 leftmost, e.g. `|↑↑↓⟩`.
    pub fn ket(self, n_sites: usize) -> String {
        let mut s = String::with_capacity(n_sites * 3 + 4);
        s.push('|');
        for site in 1..=n_sites {
            s.push(if self.is_up(site) { '↑' } else { '↓' });
        }
        s.push('⟩');
        s
    }
}

impl fmt::Display for SpinConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

/// 1-based neighbours of `site` that exist under the boundary condition.
fn neighbours(spec: &LatticeSpec, site: usize) -> (Option<usize>, Option<usize>) {
    let n = spec.n_sites;
    match spec.boundary {
        Boundary::Periodic => {
            let left = if site == 1 { n } else { site - 1 };
            let right = if site == n { 1 } else { site + 1 };
            (Some(left), Some(right))
        }
        Boundary::Open => {
            let left = (site > 1).then(|| site - 1);
            let right = (site < n).then(|| site + 1);
            (left, right)
        }
    }
}

/// Action of `H` on a basis state: every returned configuration enters
/// `H|c⟩` with amplitude `+1`. Output is ordered by the flipped site.
///
/// A spin flips when both neighbours are down. On an open chain the missing
/// neighbour's projector is dropped, so the end spins only need their single
/// neighbour down.
pub fn apply_hamiltonian(spec: &LatticeSpec, c: SpinConfiguration) -> Result<Vec<SpinConfiguration>> {
    spec.validate(c)?;
    Ok(hamiltonian_moves(spec, c).collect())
}

pub(crate) fn hamiltonian_moves(
    spec: &LatticeSpec,
    c: SpinConfiguration,
) -> impl Iterator<Item = SpinConfiguration> + '_ {
    (1..=spec.n_sites).filter_map(move |site| {
        let (left, right) = neighbours(spec, site);
        let down = |s: Option<usize>| s.map_or(true, |s| !c.is_up(s));
        (down(left) && down(right)).then(|| c.flip(site))
    })
}

/// Eigenvalue of `I_i` on `c`: 1 iff sites `i` and `i + 1` are both up.
pub fn qim_eigenvalue(spec: &LatticeSpec, c: SpinConfiguration, i: usize) -> Result<u8> {
    spec.validate(c)?;
    check_qim_index(spec, i)?;
    Ok(qim_bit(spec, c, i))
}

pub(crate) fn check_qim_index(spec: &LatticeSpec, i: usize) -> Result<()> {
    if i == 0 || i > spec.n_qims() {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: spec.n_qims(),
        });
    }
    Ok(())
}

pub(crate) fn qim_bit(spec: &LatticeSpec, c: SpinConfiguration, i: usize) -> u8 {
    let next = if i == spec.n_sites { 1 } else { i + 1 };
    u8::from(c.is_up(i) && c.is_up(next))
}

/// `I_i |c⟩` written as a general operator action (target state, amplitude),
/// built from the product `(1 - P_i)(1 - P_{i+1})` of single-site projectors.
pub(crate) fn qim_action(spec: &LatticeSpec, c: SpinConfiguration, i: usize) -> (SpinConfiguration, u8) {
    let next = if i == spec.n_sites { 1 } else { i + 1 };
    let up_projector = |site: usize, state: SpinConfiguration| u8::from(state.is_up(site));
    (c, up_projector(next, c) * up_projector(i, c))
}

/// Integer-valued sparse matrix in coordinate form, rows then columns
/// ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseOperator {
    pub dimension: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseOperator {
    pub fn is_symmetric(&self) -> bool {
        let mut transposed: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        transposed.sort_unstable();
        let mut sorted = self.entries.clone();
        sorted.sort_unstable();
        sorted == transposed
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn row_sum(&self, row: usize) -> i64 {
        self.entries
            .iter()
            .filter(|e| e.0 == row)
            .map(|e| e.2)
            .sum()
    }
}

/// Matrix of `H` restricted to `basis`. Every image of a basis state must
/// itself be in the basis.
pub fn build_sector_hamiltonian(spec: &LatticeSpec, basis: &[SpinConfiguration]) -> Result<SparseOperator> {
    let index: HashMap<SpinConfiguration, usize> =
        basis.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    if index.len() != basis.len() {
        return Err(Error::Precondition("basis contains duplicate configurations".into()));
    }
    let mut entries = Vec::new();
    for (col, &c) in basis.iter().enumerate() {
        spec.validate(c)?;
        for target in hamiltonian_moves(spec, c) {
            let row = *index.get(&target).ok_or(Error::ClosureViolation {
                from: c,
                escaped: target,
            })?;
            entries.push((row, col, 1));
        }
    }
    entries.sort_unstable();
    Ok(SparseOperator {
        dimension: basis.len(),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConservationViolation {
    /// An edge of `H` changed the eigenvalue of `I_qim`.
    SignatureChanged {
        from: SpinConfiguration,
        to: SpinConfiguration,
        qim: usize,
    },
    /// `c → c'` is an edge but `c' → c` is not.
    NotHermitian {
        from: SpinConfiguration,
        to: SpinConfiguration,
    },
    /// `I_i I_j |c⟩ ≠ I_j I_i |c⟩`.
    NonCommuting {
        config: SpinConfiguration,
        i: usize,
        j: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub n_sites: usize,
    pub boundary: Boundary,
    pub configurations_checked: u64,
    pub edges_checked: u64,
    pub passed: bool,
    pub counterexample: Option<ConservationViolation>,
}

/// Exact check of `[H, I_i] = 0` for every `i` and `[I_i, I_j] = 0` for every
/// pair, over the whole basis.
pub fn verify_conservation(spec: &LatticeSpec) -> Result<ConservationReport> {
    verify_conservation_with(spec, |s, c| hamiltonian_moves(s, c).collect())
}

/// Same as [`verify_conservation`] with a caller-supplied hopping rule in
/// place of `H`. The rule must list the targets of `H|c⟩` (unit amplitudes).
pub fn verify_conservation_with<F>(spec: &LatticeSpec, hop: F) -> Result<ConservationReport>
where
    F: Fn(&LatticeSpec, SpinConfiguration) -> Vec<SpinConfiguration> + Sync,
{
    spec.ensure_full_sweep()?;
    let n_qims = spec.n_qims();

    let check = |c: SpinConfiguration| -> (u64, Option<ConservationViolation>) {
        let targets = hop(spec, c);
        let edges = targets.len() as u64;
        for &t in &targets {
            for i in 1..=n_qims {
                if qim_bit(spec, c, i) != qim_bit(spec, t, i) {
                    return (edges, Some(ConservationViolation::SignatureChanged { from: c, to: t, qim: i }));
                }
            }
            if !hop(spec, t).contains(&c) {
                return (edges, Some(ConservationViolation::NotHermitian { from: c, to: t }));
            }
        }
        for i in 1..=n_qims {
            for j in (i + 1)..=n_qims {
                let (after_j, aj) = qim_action(spec, c, j);
                let (ij, ai) = qim_action(spec, after_j, i);
                let (after_i, bi) = qim_action(spec, c, i);
                let (ji, bj) = qim_action(spec, after_i, j);
                if ij != ji || ai * aj != bi * bj {
                    return (edges, Some(ConservationViolation::NonCommuting { config: c, i, j }));
                }
            }
        }
        (edges, None)
    };

    let results: Vec<(u64, Option<ConservationViolation>)> = (0..spec.hilbert_dim())
        .into_par_iter()
        .map(|bits| check(SpinConfiguration(bits)))
        .collect();

    let edges_checked = results.iter().map(|r| r.0).sum();
    let counterexample = results.into_iter().find_map(|r| r.1);
    Ok(ConservationReport {
        n_sites: spec.n_sites,
        boundary: spec.boundary,
        configurations_checked: spec.hilbert_dim(),
        edges_checked,
        passed: counterexample.is_none(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(s: &str) -> SpinConfiguration {
        SpinConfiguration::from_ket(s).unwrap()
    }

    #[test]
    fn all_down_flips_every_site() {
        let spec = LatticeSpec::periodic(3).unwrap();
        let out = apply_hamiltonian(&spec, ket("↓↓↓")).unwrap();
        assert_eq!(out, vec![ket("↑↓↓"), ket("↓↑↓"), ket("↓↓↑")]);
    }

    #[test]
    fn frozen_states_are_annihilated() {
        let spec = LatticeSpec::periodic(3).unwrap();
        assert!(apply_hamiltonian(&spec, ket("↑↑↓")).unwrap().is_empty());
        assert!(apply_hamiltonian(&spec, ket("↑↑↑")).unwrap().is_empty());
    }

    #[test]
    fn open_chain_drops_missing_projectors() {
        let spec = LatticeSpec::open(4).unwrap();
        // site 1 only needs site 2 down; site 4 only needs site 3 down
        let out = apply_hamiltonian(&spec, ket("↓↓↑↓")).unwrap();
        assert_eq!(out, vec![ket("↑↓↑↓"), ket("↓↓↓↓")]);
        let out = apply_hamiltonian(&spec, ket("↓↓↓↓")).unwrap();
        assert_eq!(out.len(), 4);
        // periodic ring would block site 1 through site 4
        let ring = LatticeSpec::periodic(4).unwrap();
        let out = apply_hamiltonian(&ring, ket("↓↓↓↑")).unwrap();
        assert_eq!(out, vec![ket("↓↑↓↑"), ket("↓↓↓↓")]);
        let out = apply_hamiltonian(&spec, ket("↓↓↓↑")).unwrap();
        assert_eq!(out, vec![ket("↑↓↓↑"), ket("↓↑↓↑"), ket("↓↓↓↓")]);
    }

    #[test]
    fn rejects_wide_configuration() {
        let spec = LatticeSpec::periodic(3).unwrap();
        assert!(matches!(
            apply_hamiltonian(&spec, SpinConfiguration(0b1000)),
            Err(Error::InvalidConfiguration { .. })
        ));
    }

    #[test]
    fn qim_eigenvalues_match_table() {
        let spec = LatticeSpec::periodic(3).unwrap();
        assert_eq!(qim_eigenvalue(&spec, ket("↑↑↓"), 1).unwrap(), 1);
        assert_eq!(qim_eigenvalue(&spec, ket("↑↓↑"), 3).unwrap(), 1);
        for i in 1..=3 {
            assert_eq!(qim_eigenvalue(&spec, ket("↓↓↓"), i).unwrap(), 0);
        }
        assert!(matches!(
            qim_eigenvalue(&spec, ket("↓↓↓"), 4),
            Err(Error::IndexOutOfRange { index: 4, max: 3 })
        ));
        assert!(qim_eigenvalue(&spec, ket("↓↓↓"), 0).is_err());
        let open = LatticeSpec::open(3).unwrap();
        assert!(qim_eigenvalue(&open, ket("↑↓↑"), 3).is_err());
    }

    #[test]
    fn lattice_bounds() {
        assert!(LatticeSpec::periodic(2).is_err());
        assert!(LatticeSpec::periodic(33).is_err());
        assert!(LatticeSpec::periodic(32).unwrap().ensure_full_sweep().is_err());
        assert!(LatticeSpec::periodic(24).unwrap().ensure_full_sweep().is_ok());
    }

    #[test]
    fn zero_sector_block_n3() {
        let spec = LatticeSpec::periodic(3).unwrap();
        let basis = [ket("↓↓↓"), ket("↑↓↓"), ket("↓↑↓"), ket("↓↓↑")];
        let h = build_sector_hamiltonian(&spec, &basis).unwrap();
        assert_eq!(h.dimension, 4);
        assert!(h.is_symmetric());
        assert_eq!(h.row_sum(0), 3);
        assert!(h.entries.iter().all(|&(r, c, v)| v == 1 && r != c));
    }

    #[test]
    fn frozen_block_is_zero() {
        let spec = LatticeSpec::periodic(3).unwrap();
        let h = build_sector_hamiltonian(&spec, &[ket("↑↑↑")]).unwrap();
        assert_eq!(h.dimension, 1);
        assert!(h.entries.is_empty());
    }

    #[test]
    fn closure_violation_names_escapee() {
        let spec = LatticeSpec::periodic(3).unwrap();
        let err = build_sector_hamiltonian(&spec, &[ket("↓↓↓"), ket("↑↓↓")]).unwrap_err();
        assert_eq!(
            err,
            Error::ClosureViolation {
                from: ket("↓↓↓"),
                escaped: ket("↓↑↓")
            }
        );
    }

    #[test]
    fn conservation_small_rings() {
        for n in [3, 4, 7] {
            let report = verify_conservation(&LatticeSpec::periodic(n).unwrap()).unwrap();
            assert!(report.passed, "{report:?}");
        }
        assert!(verify_conservation(&LatticeSpec::open(6).unwrap()).unwrap().passed);
    }

    #[test]
    fn conservation_detects_missing_projector() {
        let spec = LatticeSpec::periodic(5).unwrap();
        // drop the right-hand projector: flip whenever the left neighbour is down
        let broken = |s: &LatticeSpec, c: SpinConfiguration| {
            (1..=s.n_sites())
                .filter(|&site| {
                    let left = if site == 1 { s.n_sites() } else { site - 1 };
                    !c.is_up(left)
                })
                .map(|site| c.flip(site))
                .collect()
        };
        let report = verify_conservation_with(&spec, broken).unwrap();
        assert!(!report.passed);
        assert!(matches!(
            report.counterexample,
            Some(ConservationViolation::SignatureChanged { .. })
        ));
    }

    #[test]
    fn ket_round_trip() {
        let c = ket("|↑↓↑↑⟩");
        assert_eq!(c.bits(), 0b1101);
        assert_eq!(c.ket(4), "|↑↓↑↑⟩");
    }
}
