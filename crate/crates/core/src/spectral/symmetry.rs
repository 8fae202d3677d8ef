//! Translation and reflection resolution of signature sectors.
//!
//! Only the momenta `k = 0` and `k = N/2` are supported: their characters
//! are `±1`, so the symmetrized basis and the Hamiltonian block stay real.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{hamiltonian_moves, low_mask, Boundary, LatticeSpec, SpinConfiguration};
use crate::signatures::{is_attainable, sector_basis, Signature};

use super::eigen::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    fn sign(self) -> i8 {
        match self {
            Parity::Odd => -1,
            _ => 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "+" | "+1" => Ok(Parity::Even),
            "odd" | "-" | "-1" => Ok(Parity::Odd),
            "none" => Ok(Parity::None),
            other => Err(Error::UnsupportedSymmetry(format!("unknown parity `{other}`"))),
        }
    }
}

/// Element `T^shift R^reflect` of the dihedral group (reflect first).
#[derive(Debug, Clone, Copy)]
struct GroupElement {
    shift: usize,
    reflect: bool,
    character: i8,
}

fn rotate_sites(bits: u64, by: usize, n: usize) -> u64 {
    if by == 0 {
        return bits;
    }
    ((bits << by) | (bits >> (n - by))) & low_mask(n)
}

fn reflect_sites(bits: u64, n: usize) -> u64 {
    bits.reverse_bits() >> (64 - n)
}

impl GroupElement {
    fn apply(&self, bits: u64, n: usize) -> u64 {
        let b = if self.reflect { reflect_sites(bits, n) } else { bits };
        rotate_sites(b, self.shift, n)
    }
}

fn group(spec: &LatticeSpec, momentum: Option<usize>, parity: Parity) -> Vec<GroupElement> {
    let n = spec.n_sites();
    let shifts: Vec<(usize, i8)> = match momentum {
        Some(k) => (0..n)
            .map(|r| {
                let ch = if k == 0 || r % 2 == 0 { 1 } else { -1 };
                (r, ch)
            })
            .collect(),
        None => vec![(0, 1)],
    };
    let mut out: Vec<GroupElement> = shifts
        .iter()
        .map(|&(shift, character)| GroupElement {
            shift,
            reflect: false,
            character,
        })
        .collect();
    if parity != Parity::None {
        out.extend(shifts.iter().map(|&(shift, ch)| GroupElement {
            shift,
            reflect: true,
            character: ch * parity.sign(),
        }));
    }
    out
}

/// Symmetry-adapted basis of the union of the sectors in the group orbit of
/// a signature.
///
/// Basis vector `a` is `Σ_b χ(g_b) |b⟩ / sqrt(|orbit(a)|)` over the orbit of
/// its representative, so the basis is orthonormal by construction.
#[derive(Debug, Clone)]
pub struct SymmetrySector {
    pub spec: LatticeSpec,
    pub signature: Signature,
    pub momentum: Option<usize>,
    pub parity: Parity,
    /// Smallest configuration of each retained orbit.
    pub representatives: Vec<SpinConfiguration>,
    /// `1 / sqrt(orbit size)` for each representative.
    pub weights: Vec<f64>,
    /// Configuration → (basis index, character sign).
    lookup: HashMap<u64, (usize, i8)>,
    /// Every configuration of the orbit union, ascending.
    configurations: Vec<u64>,
}

fn check_request(spec: &LatticeSpec, momentum: Option<usize>) -> Result<()> {
    if let Some(k) = momentum {
        if spec.boundary() == Boundary::Open {
            return Err(Error::UnsupportedSymmetry(
                "momentum is undefined on an open chain".into(),
            ));
        }
        let n = spec.n_sites();
        let half = (n % 2 == 0).then_some(n / 2);
        if k != 0 && Some(k) != half {
            return Err(Error::UnsupportedSymmetry(format!(
                "momentum {k} not in {{0, N/2}} for N = {n}"
            )));
        }
    }
    Ok(())
}

/// Configurations of every sector whose signature is an image of `s` under
/// the symmetry group, ascending.
fn orbit_union(spec: &LatticeSpec, s: &Signature, elements: &[GroupElement]) -> Result<Vec<u64>> {
    if !is_attainable(spec, s)?.attainable {
        return Err(Error::Precondition(format!("signature {s} is not attainable")));
    }
    let n = spec.n_sites();
    let mut all = BTreeSet::new();
    for c in sector_basis(spec, s)? {
        for g in elements {
            all.insert(g.apply(c.bits(), n));
        }
    }
    Ok(all.into_iter().collect())
}

/// Builds the `(k, parity)` block for signature `s`. With `momentum = None`
/// only the reflection (if any) is used.
pub fn resolve_symmetry(
    spec: &LatticeSpec,
    s: &Signature,
    momentum: Option<usize>,
    parity: Parity,
) -> Result<SymmetrySector> {
    check_request(spec, momentum)?;
    let elements = group(spec, momentum, parity);
    let configurations = orbit_union(spec, s, &elements)?;
    let n = spec.n_sites();

    let mut lookup = HashMap::with_capacity(configurations.len());
    let mut representatives = Vec::new();
    let mut weights = Vec::new();
    let mut visited = std::collections::HashSet::with_capacity(configurations.len());
    for &c in &configurations {
        if !visited.insert(c) {
            continue;
        }
        // configurations ascend, so the first unseen one is its orbit's minimum
        let mut images: HashMap<u64, i8> = HashMap::new();
        let mut vanishes = false;
        for g in &elements {
            let img = g.apply(c, n);
            match images.get(&img) {
                Some(&ch) if ch != g.character => vanishes = true,
                Some(_) => {}
                None => {
                    images.insert(img, g.character);
                }
            }
        }
        visited.extend(images.keys().copied());
        if vanishes {
            continue;
        }
        let idx = representatives.len();
        representatives.push(SpinConfiguration(c));
        weights.push(1.0 / (images.len() as f64).sqrt());
        for (img, ch) in images {
            lookup.insert(img, (idx, ch));
        }
    }

    Ok(SymmetrySector {
        spec: *spec,
        signature: *s,
        momentum,
        parity,
        representatives,
        weights,
        lookup,
        configurations,
    })
}

impl SymmetrySector {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Dimension of the unresolved orbit union.
    pub fn union_dim(&self) -> usize {
        self.configurations.len()
    }

    /// Members of basis vector `idx` with their signed amplitudes.
    pub fn basis_vector(&self, idx: usize) -> Vec<(SpinConfiguration, f64)> {
        let w = self.weights[idx];
        let mut v: Vec<(SpinConfiguration, f64)> = self
            .lookup
            .iter()
            .filter(|(_, &(i, _))| i == idx)
            .map(|(&c, &(_, ch))| (SpinConfiguration(c), f64::from(ch) * w))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    }

    /// Real symmetric matrix of `H` in this basis.
    pub fn hamiltonian(&self) -> DenseMatrix {
        let dim = self.dim();
        let mut m = DenseMatrix::zeros(dim);
        let mut members: Vec<Vec<(u64, i8)>> = vec![Vec::new(); dim];
        for (&c, &(idx, ch)) in &self.lookup {
            members[idx].push((c, ch));
        }
        for (col, orbit) in members.iter_mut().enumerate() {
            orbit.sort_unstable();
            let wa = self.weights[col];
            for &(c, ch_a) in orbit.iter() {
                for target in hamiltonian_moves(&self.spec, SpinConfiguration(c)) {
                    if let Some(&(row, ch_b)) = self.lookup.get(&target.bits()) {
                        m[(row, col)] += wa * f64::from(ch_a) * f64::from(ch_b) * self.weights[row];
                    }
                }
            }
        }
        m
    }
}

/// Dimension of the translation-only momentum-`k` block for any
/// `k ∈ 0..N`: orbits of period `R` contribute iff `N | k R`.
pub fn momentum_block_dimension(spec: &LatticeSpec, s: &Signature, k: usize) -> Result<usize> {
    if !spec.is_periodic() {
        return Err(Error::UnsupportedSymmetry(
            "momentum is undefined on an open chain".into(),
        ));
    }
    let n = spec.n_sites();
    if k >= n {
        return Err(Error::UnsupportedSymmetry(format!("momentum {k} not in 0..{n}")));
    }
    let translations = group(spec, Some(0), Parity::None);
    let configurations = orbit_union(spec, s, &translations)?;
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    for &c in &configurations {
        if seen.contains(&c) {
            continue;
        }
        let period = (1..=n).find(|&r| rotate_sites(c, r % n, n) == c).unwrap_or(n);
        for r in 0..period {
            seen.insert(rotate_sites(c, r, n));
        }
        if (k * period) % n == 0 {
            count += 1;
        }
    }
    Ok(count)
}
