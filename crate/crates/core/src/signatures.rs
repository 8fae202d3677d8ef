//! Joint eigenvalue signatures of the integrals `I_i`, the invariant-sector
//! foliation they induce, and exact sector counting.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{low_mask, Boundary, LatticeSpec, SpinConfiguration};

/// Packed tuple of binary eigenvalues. Bit `k` holds the eigenvalue of the
/// `k + 1`-th integral of the declared index set.
///
/// The text form lists eigenvalues in index order, so `"100"` means
/// `I_1 = 1, I_2 = 0, I_3 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    bits: u64,
    width: usize,
}

impl Signature {
    pub fn new(bits: u64, width: usize) -> Result<Self> {
        if width == 0 || width > 64 || bits & !low_mask(width) != 0 {
            return Err(Error::SignatureWidth {
                got: (64 - bits.leading_zeros() as usize).max(width),
                expected: width,
            });
        }
        Ok(Self { bits, width })
    }

    pub fn zeros(width: usize) -> Self {
        Self { bits: 0, width }
    }

    pub fn ones(width: usize) -> Self {
        Self {
            bits: low_mask(width),
            width,
        }
    }

    /// Signature with the listed 1-based integrals equal to one.
    pub fn with_ones(width: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = 0;
        for &i in indices {
            if i == 0 || i > width {
                return Err(Error::IndexOutOfRange { index: i, max: width });
            }
            bits |= 1 << (i - 1);
        }
        Ok(Self { bits, width })
    }

    pub fn from_values(values: &[u8]) -> Result<Self> {
        let mut bits = 0;
        for (k, &v) in values.iter().enumerate() {
            match v {
                0 => {}
                1 => bits |= 1 << k,
                _ => return Err(Error::Precondition(format!("eigenvalue {v} is not binary"))),
            }
        }
        Self::new(bits, values.len())
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Eigenvalue of the 1-based `index`-th integral.
    pub fn value(&self, index: usize) -> u8 {
        ((self.bits >> (index - 1)) & 1) as u8
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Cyclic shift sending the eigenvalue of `I_i` to `I_{i+1}`.
    pub fn rotate(&self, by: usize) -> Self {
        let w = self.width;
        let by = by % w;
        if by == 0 {
            return *self;
        }
        let bits = ((self.bits << by) | (self.bits >> (w - by))) & low_mask(w);
        Self { bits, width: w }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.width {
            f.write_str(if (self.bits >> k) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')' | '{' | '}'))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Precondition(format!("`{other}` is not a binary eigenvalue"))),
            })
            .collect::<Result<_>>()?;
        Self::from_values(&values)
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Joint eigenvalues of all integrals `I_1 … I_M` on `c`.
pub fn signature_of(spec: &LatticeSpec, c: SpinConfiguration) -> Result<Signature> {
    spec.validate(c)?;
    Ok(signature_unchecked(spec, c))
}

pub(crate) fn signature_bits(spec: &LatticeSpec, c: u64) -> u64 {
    let n = spec.n_sites();
    match spec.boundary() {
        Boundary::Periodic => c & ((c >> 1) | ((c & 1) << (n - 1))),
        Boundary::Open => c & (c >> 1) & low_mask(n - 1),
    }
}

pub(crate) fn signature_unchecked(spec: &LatticeSpec, c: SpinConfiguration) -> Signature {
    Signature {
        bits: signature_bits(spec, c.bits()),
        width: spec.n_qims(),
    }
}

fn check_width(spec: &LatticeSpec, s: &Signature) -> Result<()> {
    if s.width != spec.n_qims() {
        return Err(Error::SignatureWidth {
            got: s.width,
            expected: spec.n_qims(),
        });
    }
    Ok(())
}

/// True if the pattern `1,0,1` occurs in `bits` (cyclically on a ring).
pub(crate) fn contains_101(bits: u64, width: usize, cyclic: bool) -> bool {
    let bit = |k: usize| (bits >> (k % width)) & 1 == 1;
    let last_start = if cyclic { width } else { width.saturating_sub(2) };
    (0..last_start).any(|k| bit(k) && !bit(k + 1) && bit(k + 2))
}

/// Canonical witness: each run of `L` ones becomes `L + 1` consecutive up
/// spins, every other spin down.
fn canonical_witness(spec: &LatticeSpec, s: &Signature) -> SpinConfiguration {
    let n = spec.n_sites();
    let bits = match spec.boundary() {
        Boundary::Periodic => s.bits | (((s.bits << 1) | (s.bits >> (n - 1))) & low_mask(n)),
        Boundary::Open => s.bits | (s.bits << 1),
    };
    SpinConfiguration(bits)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attainability {
    pub signature: Signature,
    pub attainable: bool,
    pub witness: Option<SpinConfiguration>,
}

/// Decides whether some basis state carries signature `s`.
///
/// The pattern scan and the witness construction are computed separately
/// and must agree.
pub fn is_attainable(spec: &LatticeSpec, s: &Signature) -> Result<Attainability> {
    check_width(spec, s)?;
    let by_scan = !contains_101(s.bits, s.width, spec.is_periodic());
    let candidate = canonical_witness(spec, s);
    let by_witness = signature_unchecked(spec, candidate) == *s;
    if by_scan != by_witness {
        return Err(Error::Internal(format!(
            "pattern scan says {by_scan} but witness {candidate} says {by_witness} for {s}"
        )));
    }
    Ok(Attainability {
        signature: *s,
        attainable: by_scan,
        witness: by_witness.then_some(candidate),
    })
}

/// Partition of the full basis into signature sectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorFoliation {
    pub spec: LatticeSpec,
    pub sectors: BTreeMap<Signature, Vec<SpinConfiguration>>,
}

impl SectorFoliation {
    pub fn sector(&self, s: &Signature) -> Option<&[SpinConfiguration]> {
        self.sectors.get(s).map(Vec::as_slice)
    }

    pub fn dimensions(&self) -> BTreeMap<Signature, u64> {
        self.sectors.iter().map(|(s, v)| (*s, v.len() as u64)).collect()
    }

    pub fn total_dimension(&self) -> u64 {
        self.sectors.values().map(|v| v.len() as u64).sum()
    }

    pub fn report(&self) -> FoliationReport {
        FoliationReport {
            n: self.spec.n_sites(),
            boundary: self.spec.boundary(),
            sectors: self
                .sectors
                .iter()
                .map(|(s, v)| SectorEntry {
                    signature: *s,
                    dimension: v.len() as u64,
                })
                .collect(),
            attainable_count: self.sectors.len() as u64,
        }
    }
}

/// Sweeps all `2^N` basis states and groups them by signature. Sectors are
/// keyed by signature bit value; states within a sector ascend.
pub fn foliate(spec: &LatticeSpec) -> Result<SectorFoliation> {
    spec.ensure_full_sweep()?;
    let sigs: Vec<u64> = (0..spec.hilbert_dim())
        .into_par_iter()
        .map(|c| signature_bits(spec, c))
        .collect();
    let mut buckets: HashMap<u64, Vec<SpinConfiguration>> = HashMap::new();
    for (c, s) in sigs.into_iter().enumerate() {
        buckets.entry(s).or_default().push(SpinConfiguration(c as u64));
    }
    let width = spec.n_qims();
    let sectors = buckets
        .into_iter()
        .map(|(bits, states)| (Signature { bits, width }, states))
        .collect();
    Ok(SectorFoliation { spec: *spec, sectors })
}

/// All basis states with signature `s`, ascending. Builds the sector site by
/// site, so it works up to the sector-only size limit.
pub fn sector_basis(spec: &LatticeSpec, s: &Signature) -> Result<Vec<SpinConfiguration>> {
    check_width(spec, s)?;
    let n = spec.n_sites();
    let mut out = Vec::new();
    // stack of (sites assigned so far, partial configuration)
    let mut stack = vec![(1usize, 0u64), (1usize, 1u64)];
    while let Some((assigned, bits)) = stack.pop() {
        if assigned == n {
            if spec.is_periodic() {
                let wrap = ((bits >> (n - 1)) & bits & 1) as u8;
                if wrap != s.value(n) {
                    continue;
                }
            }
            out.push(SpinConfiguration(bits));
            continue;
        }
        let prev_up = (bits >> (assigned - 1)) & 1;
        let need = u64::from(s.value(assigned));
        for up in [0u64, 1] {
            if prev_up & up == need {
                stack.push((assigned + 1, bits | (up << assigned)));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountTarget {
    /// States with every `I_i = 0`: no two adjacent up spins.
    ZeroSectorDim,
    /// Distinct attainable signatures.
    AttainableSignatures,
}

type CountMatrix = Vec<Vec<u128>>;

fn mat_mul(a: &CountMatrix, b: &CountMatrix) -> CountMatrix {
    let n = a.len();
    let mut out = vec![vec![0u128; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn mat_pow(m: &CountMatrix, mut e: usize) -> CountMatrix {
    let n = m.len();
    let mut result: CountMatrix = (0..n)
        .map(|i| (0..n).map(|j| u128::from(i == j)).collect())
        .collect();
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        base = mat_mul(&base, &base);
        e >>= 1;
    }
    result
}

fn trace(m: &CountMatrix) -> u128 {
    (0..m.len()).map(|i| m[i][i]).sum()
}

fn total(m: &CountMatrix) -> u128 {
    m.iter().flatten().sum()
}

/// Exact counts from transfer matrices: a 2×2 nearest-neighbour exclusion
/// matrix for the zero sector, and a 4×4 matrix on 2-bit windows forbidding
/// `1,0,1` for signatures.
pub fn count_via_transfer_matrix(spec: &LatticeSpec, what: CountTarget) -> u64 {
    let n = spec.n_sites();
    let count = match what {
        CountTarget::ZeroSectorDim => {
            let adjacency: CountMatrix = vec![vec![1, 1], vec![1, 0]];
            match spec.boundary() {
                Boundary::Periodic => trace(&mat_pow(&adjacency, n)),
                Boundary::Open => total(&mat_pow(&adjacency, n - 1)),
            }
        }
        CountTarget::AttainableSignatures => {
            // window (a, b) has index 2a + b; (a, b) -> (b, c) unless a,b,c = 1,0,1
            let mut windows = vec![vec![0u128; 4]; 4];
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        if (a, b, c) != (1, 0, 1) {
                            windows[2 * a + b][2 * b + c] = 1;
                        }
                    }
                }
            }
            match spec.boundary() {
                Boundary::Periodic => trace(&mat_pow(&windows, n)),
                Boundary::Open => total(&mat_pow(&windows, spec.n_qims() - 2)),
            }
        }
    };
    count as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Enumeration,
    TransferMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: usize,
    pub boundary: Boundary,
    pub method: CountMethod,
    pub attainable_count: u64,
    pub zero_sector_dim: u64,
    /// Only produced by enumeration.
    pub sector_dimensions: Option<BTreeMap<Signature, u64>>,
}

pub fn count_report(spec: &LatticeSpec, method: CountMethod) -> Result<CountReport> {
    let (attainable_count, zero_sector_dim, sector_dimensions) = match method {
        CountMethod::Enumeration => {
            let fol = foliate(spec)?;
            let dims = fol.dimensions();
            let zero = dims.get(&Signature::zeros(spec.n_qims())).copied().unwrap_or(0);
            (dims.len() as u64, zero, Some(dims))
        }
        CountMethod::TransferMatrix => (
            count_via_transfer_matrix(spec, CountTarget::AttainableSignatures),
            count_via_transfer_matrix(spec, CountTarget::ZeroSectorDim),
            None,
        ),
    };
    Ok(CountReport {
        n: spec.n_sites(),
        boundary: spec.boundary(),
        method,
        attainable_count,
        zero_sector_dim,
        sector_dimensions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorEntry {
    pub signature: Signature,
    pub dimension: u64,
}

/// Serializable summary of a foliation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoliationReport {
    pub n: usize,
    pub boundary: Boundary,
    pub sectors: Vec<SectorEntry>,
    pub attainable_count: u64,
}
