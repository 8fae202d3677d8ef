//! Weak and strong independence of subsets of the integrals `I_i`.
//!
//! Everything here works on the set of *attainable* eigenvalue tuples: the
//! joint eigenvalues that some basis state actually carries. Weak
//! independence asks whether one coordinate is a function of the others on
//! that set. Strong independence asks whether the set is the whole cube
//! `{0,1}^M`; if it is, every polynomial vanishing on it vanishes on every
//! combination of eigenvalues and is therefore trivial.

pub mod nullspace;
pub mod polynomial;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{hamiltonian_moves, Boundary, LatticeSpec, SpinConfiguration};
use crate::signatures::{signature_bits, Signature};

use polynomial::{MultilinearPoly, MultilinearRelation, Polynomial, Rational, RelationRecord};

/// Largest subset size for which tuple sets are materialized.
pub const MAX_SUBSET_SIZE: usize = 20;
/// Chain length up to which projections sweep configurations directly.
pub const ENUMERATION_MAX_SITES: usize = 14;
/// Chain length up to which the maximal-subset search is exhaustive.
pub const EXHAUSTIVE_SEARCH_MAX_SITES: usize = 15;
/// Cap on evaluation-matrix entries (`rows * columns`) for relation search.
pub const MAX_EVALUATION_ENTRIES: usize = 1 << 22;

/// Strictly increasing, nonempty list of 1-based integral indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QimSubset(Vec<usize>);

impl QimSubset {
    pub fn new(spec: &LatticeSpec, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSubset("subset is empty".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(format!(
                "indices {indices:?} are not strictly increasing"
            )));
        }
        let max = spec.n_qims();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > max) {
            return Err(Error::IndexOutOfRange { index: bad, max });
        }
        Ok(Self(indices))
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(spec: &LatticeSpec, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(spec, indices)
    }

    pub fn all(spec: &LatticeSpec) -> Self {
        Self((1..=spec.n_qims()).collect())
    }

    /// `len` consecutive integrals starting at `start`, wrapping on a ring.
    pub fn window(spec: &LatticeSpec, start: usize, len: usize) -> Result<Self> {
        let m = spec.n_qims();
        if len == 0 || len > m {
            return Err(Error::InvalidSubset(format!("window length {len} outside 1..={m}")));
        }
        let indices: Vec<usize> = match spec.boundary() {
            Boundary::Periodic => (0..len).map(|k| (start - 1 + k) % m + 1).collect(),
            Boundary::Open => {
                if start + len - 1 > m {
                    return Err(Error::IndexOutOfRange {
                        index: start + len - 1,
                        max: m,
                    });
                }
                (start..start + len).collect()
            }
        };
        Self::from_unsorted(spec, indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Mask over full-signature bits selected by this subset.
    pub(crate) fn signature_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | (1 << (i - 1)))
    }

    fn compress(&self, signature_bits: u64) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |t, (k, &i)| t | (((signature_bits >> (i - 1)) & 1) << k))
    }
}

impl fmt::Display for QimSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses a comma separated list such as `"1,2,4,5"`.
pub fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            usize::from_str(s).map_err(|_| Error::InvalidSubset(format!("`{s}` is not an index")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMethod {
    /// Enumeration for small chains, the signature set otherwise.
    Auto,
    /// Sweep all `2^N` configurations.
    Enumeration,
    /// Project the set of attainable full signatures (cyclic strings without
    /// `1,0,1`), generated without touching configurations.
    SignatureSet,
}

/// Every attainable full signature, ascending. Generated by extending bit
/// strings one position at a time under the `1,0,1` exclusion.
pub fn attainable_signatures(spec: &LatticeSpec) -> Vec<u64> {
    let width = spec.n_qims();
    let cyclic = spec.is_periodic();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u64)> = vec![(0, 0)];
    while let Some((len, bits)) = stack.pop() {
        if len == width {
            let wraps_ok = !cyclic || {
                let b = |k: usize| (bits >> (k % width)) & 1 == 1;
                let bad = |k: usize| b(k) && !b(k + 1) && b(k + 2);
                !bad(width - 2) && !bad(width - 1)
            };
            if wraps_ok {
                out.push(bits);
            }
            continue;
        }
        for bit in [0u64, 1] {
            let blocked = len >= 2 && bit == 1 && (bits >> (len - 1)) & 1 == 0 && (bits >> (len - 2)) & 1 == 1;
            if !blocked {
                stack.push((len + 1, bits | (bit << len)));
            }
        }
    }
    out.sort_unstable();
    out
}

fn check_subset(spec: &LatticeSpec, sub: &QimSubset) -> Result<()> {
    // re-validate in case the subset was built for another lattice
    QimSubset::new(spec, sub.0.clone())?;
    if sub.len() > MAX_SUBSET_SIZE {
        return Err(Error::LimitExceeded(format!(
            "subset of size {} exceeds {MAX_SUBSET_SIZE}",
            sub.len()
        )));
    }
    Ok(())
}

/// Attainable eigenvalue tuples of the subset; bit `k` of each tuple is the
/// eigenvalue of `I_{sub[k]}`.
pub fn project_attainable(spec: &LatticeSpec, sub: &QimSubset) -> Result<BTreeSet<u64>> {
    project_attainable_with(spec, sub, ProjectionMethod::Auto)
}

pub fn project_attainable_with(
    spec: &LatticeSpec,
    sub: &QimSubset,
    method: ProjectionMethod,
) -> Result<BTreeSet<u64>> {
    check_subset(spec, sub)?;
    let method = match method {
        ProjectionMethod::Auto if spec.n_sites() <= ENUMERATION_MAX_SITES => ProjectionMethod::Enumeration,
        ProjectionMethod::Auto => ProjectionMethod::SignatureSet,
        m => m,
    };
    Ok(match method {
        ProjectionMethod::Enumeration => {
            spec.ensure_full_sweep()?;
            (0..spec.hilbert_dim())
                .map(|c| sub.compress(signature_bits(spec, c)))
                .collect()
        }
        _ => attainable_signatures(spec)
            .into_iter()
            .map(|s| sub.compress(s))
            .collect(),
    })
}

fn tuple_signature(bits: u64, width: usize) -> Signature {
    Signature::new(bits, width).expect("tuple fits its width")
}

/// Two attainable tuples that differ only at one coordinate of the subset,
/// plus basis states realizing them when the chain is small enough.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakWitness {
    /// Site index of the coordinate that varies.
    pub index: usize,
    pub with_one: Signature,
    pub with_zero: Signature,
    pub states: Option<(SpinConfiguration, SpinConfiguration)>,
}

/// `I_index` as a function of the other integrals of the subset: each entry
/// maps an attainable tuple of the others (subset order, `index` removed) to
/// the forced value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalDependence {
    pub index: usize,
    pub assignment: Vec<(Signature, u8)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakVerdict {
    pub independent: bool,
    /// One witness per index, for every index that has one.
    pub witnesses: Vec<WeakWitness>,
    /// Present for the first index that is a function of the others.
    pub dependence: Option<FunctionalDependence>,
}

fn remove_bit(t: u64, k: usize) -> u64 {
    let low = t & ((1 << k) - 1);
    let high = t >> (k + 1);
    low | (high << k)
}

/// Basis states `(c, c')` with projected tuples `with_one` and `with_zero`.
/// Prefers a pair related by a single spin flip, scanning `c` upward.
fn witness_states(
    spec: &LatticeSpec,
    sub: &QimSubset,
    k: usize,
    with_one: u64,
) -> Option<(SpinConfiguration, SpinConfiguration)> {
    if spec.ensure_full_sweep().is_err() {
        return None;
    }
    let with_zero = with_one & !(1 << k);
    let site = sub.0[k];
    let next = if site == spec.n_sites() { 1 } else { site + 1 };
    let proj = |c: u64| sub.compress(signature_bits(spec, c));
    let mut first_one = None;
    let mut first_zero = None;
    for c in 0..spec.hilbert_dim() {
        let t = proj(c);
        if t == with_one {
            let cfg = SpinConfiguration(c);
            for s in [site, next] {
                let flipped = cfg.flip(s);
                if proj(flipped.bits()) == with_zero {
                    return Some((cfg, flipped));
                }
            }
            first_one.get_or_insert(cfg);
        } else if t == with_zero {
            first_zero.get_or_insert(SpinConfiguration(c));
        }
    }
    first_one.zip(first_zero)
}

/// Weak independence: no integral of the subset is a function of the
/// others on the attainable tuples.
pub fn is_weakly_independent(spec: &LatticeSpec, sub: &QimSubset) -> Result<WeakVerdict> {
    let tuples = project_attainable(spec, sub)?;
    let m = sub.len();
    let mut witnesses = Vec::new();
    let mut dependence = None;
    for k in 0..m {
        let bit = 1u64 << k;
        let pair = tuples
            .iter()
            .find(|&&t| t & bit != 0 && tuples.contains(&(t & !bit)))
            .copied();
        match pair {
            Some(with_one) => witnesses.push(WeakWitness {
                index: sub.0[k],
                with_one: tuple_signature(with_one, m),
                with_zero: tuple_signature(with_one & !bit, m),
                states: witness_states(spec, sub, k, with_one),
            }),
            None if dependence.is_none() => {
                let assignment: BTreeMap<u64, u8> = tuples
                    .iter()
                    .map(|&t| (remove_bit(t, k), ((t >> k) & 1) as u8))
                    .collect();
                let others = (m - 1).max(1);
                dependence = Some(FunctionalDependence {
                    index: sub.0[k],
                    assignment: assignment
                        .into_iter()
                        .map(|(o, v)| (tuple_signature(o, others), v))
                        .collect(),
                });
            }
            None => {}
        }
    }
    Ok(WeakVerdict {
        independent: dependence.is_none(),
        witnesses,
        dependence,
    })
}

/// An unattainable tuple together with the smallest set of its coordinates
/// that is already unattainable, and the indicator relation it yields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenWitness {
    pub tuple: Signature,
    /// Site indices the forbidden pattern actually constrains.
    pub support: Vec<usize>,
    /// Eigenvalues on `support`, in support order.
    pub support_values: Signature,
    /// False if the exhaustive minimality check was skipped for size.
    pub support_minimal: bool,
    pub relation: RelationRecord,
    pub relation_text: String,
    pub term_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongVerdict {
    pub independent: bool,
    pub attainable_count: u64,
    pub cube_size: u64,
    pub forbidden: Option<ForbiddenWitness>,
}

const SUPPORT_SEARCH_BUDGET: u64 = 200_000;

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Smallest coordinate set on which `tuple` restricts to an unattainable
/// pattern: greedy shrinking, then an exhaustive search below the greedy size.
fn minimal_support(tuples: &BTreeSet<u64>, m: usize, tuple: u64) -> (u64, bool) {
    let forbidden_on = |mask: u64| !tuples.iter().any(|&a| (a ^ tuple) & mask == 0);
    let mut support = (1u64 << m) - 1;
    for k in 0..m {
        let smaller = support & !(1 << k);
        if forbidden_on(smaller) {
            support = smaller;
        }
    }
    let greedy = support.count_ones() as usize;
    let budget: u64 = (1..greedy as u64).map(|s| binomial(m as u64, s)).sum();
    if budget > SUPPORT_SEARCH_BUDGET {
        return (support, false);
    }
    for size in 1..greedy {
        // combinations of `size` coordinates in increasing lexicographic order
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mask = combo.iter().fold(0u64, |a, &k| a | (1 << k));
            if forbidden_on(mask) {
                return (mask, true);
            }
            let Some(pos) = (0..size).rev().find(|&p| combo[p] < m - size + p) else {
                break;
            };
            combo[pos] += 1;
            for q in pos + 1..size {
                combo[q] = combo[q - 1] + 1;
            }
        }
    }
    (support, true)
}

/// Strong independence, certified by full attainability of `{0,1}^M`. A
/// failing verdict carries a forbidden tuple and its indicator relation.
pub fn is_strongly_independent(spec: &LatticeSpec, sub: &QimSubset) -> Result<StrongVerdict> {
    let tuples = project_attainable(spec, sub)?;
    let m = sub.len();
    let cube_size = 1u64 << m;
    let forbidden = (0..cube_size).find(|t| !tuples.contains(t)).map(|tuple| {
        let (support, support_minimal) = minimal_support(&tuples, m, tuple);
        let positions: Vec<usize> = (0..m).filter(|k| support >> k & 1 == 1).collect();
        let support_values = positions
            .iter()
            .enumerate()
            .fold(0u64, |v, (j, &k)| v | (((tuple >> k) & 1) << j));
        let indicator = MultilinearPoly::indicator(m, tuple, support);
        let relation = MultilinearRelation::new(sub.0.clone(), indicator).expect("indicator is nonzero");
        ForbiddenWitness {
            tuple: tuple_signature(tuple, m),
            support: positions.iter().map(|&k| sub.0[k]).collect(),
            support_values: tuple_signature(support_values, positions.len()),
            support_minimal,
            relation: relation.to_record(),
            relation_text: relation.to_string(),
            term_count: relation.term_count(),
        }
    });
    Ok(StrongVerdict {
        independent: forbidden.is_none(),
        attainable_count: tuples.len() as u64,
        cube_size,
        forbidden,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceVerdict {
    pub n: usize,
    pub boundary: Boundary,
    pub subset: QimSubset,
    pub weak: WeakVerdict,
    pub strong: StrongVerdict,
    /// Number of indices the forbidden-tuple witness constrains.
    pub witness_support: Option<usize>,
}

pub fn independence_verdict(spec: &LatticeSpec, sub: &QimSubset) -> Result<IndependenceVerdict> {
    let weak = is_weakly_independent(spec, sub)?;
    let strong = is_strongly_independent(spec, sub)?;
    let witness_support = strong.forbidden.as_ref().map(|f| f.support.len());
    Ok(IndependenceVerdict {
        n: spec.n_sites(),
        boundary: spec.boundary(),
        subset: sub.clone(),
        weak,
        strong,
        witness_support,
    })
}

/// Basis of the multilinear polynomials of degree at most `max_degree` that
/// vanish on every attainable tuple of `sub`, in reduced echelon form over
/// monomials ordered by bit mask.
pub fn find_relations(spec: &LatticeSpec, sub: &QimSubset, max_degree: usize) -> Result<Vec<MultilinearRelation>> {
    let tuples = project_attainable(spec, sub)?;
    let m = sub.len();
    if max_degree > m {
        return Err(Error::Precondition(format!(
            "degree {max_degree} exceeds subset size {m}"
        )));
    }
    let monomials: Vec<u64> = (0..1u64 << m)
        .filter(|mask| mask.count_ones() as usize <= max_degree)
        .collect();
    if tuples.len().saturating_mul(monomials.len()) > MAX_EVALUATION_ENTRIES {
        return Err(Error::LimitExceeded(format!(
            "evaluation matrix {}x{} is too large",
            tuples.len(),
            monomials.len()
        )));
    }
    let one = polynomial::rational(1, 1);
    let zero = Rational::zero();
    let matrix: Vec<Vec<Rational>> = tuples
        .iter()
        .map(|&t| {
            monomials
                .iter()
                .map(|&mask| if t & mask == mask { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    nullspace::nullspace(&matrix, monomials.len())
        .into_iter()
        .map(|v| {
            let poly = MultilinearPoly::from_terms(m, monomials.iter().copied().zip(v));
            MultilinearRelation::new(sub.0.clone(), poly)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsReport {
    pub subset: Vec<usize>,
    pub relations: Vec<RelationRecord>,
}

impl RelationsReport {
    pub fn new(sub: &QimSubset, relations: &[MultilinearRelation]) -> Self {
        Self {
            subset: sub.0.clone(),
            relations: relations.iter().map(MultilinearRelation::to_record).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum RelationClass {
    /// Multilinear normal form is identically zero.
    Trivial,
    /// Vanishes on every attainable tuple but not on the whole cube.
    Nontrivial,
    /// Fails to vanish on the attainable tuple `tuple`.
    NotARelation { tuple: Signature },
}

/// Classifies `F(I_sub) = 0` as trivial, nontrivial, or false.
pub fn classify_relation(spec: &LatticeSpec, sub: &QimSubset, f: &Polynomial) -> Result<RelationClass> {
    if f.n_vars() != sub.len() {
        return Err(Error::MalformedPolynomial(format!(
            "polynomial in {} variables for a subset of size {}",
            f.n_vars(),
            sub.len()
        )));
    }
    let normal = f.multilinear_normal_form()?;
    if normal.is_zero() {
        return Ok(RelationClass::Trivial);
    }
    let tuples = project_attainable(spec, sub)?;
    Ok(
        match tuples.iter().find(|&&t| !normal.evaluate(t).is_zero()) {
            Some(&t) => RelationClass::NotARelation {
                tuple: tuple_signature(t, sub.len()),
            },
            None => RelationClass::Nontrivial,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxSubsetResult {
    pub n: usize,
    pub boundary: Boundary,
    pub size: usize,
    pub subset: QimSubset,
    /// False when the greedy fallback was used instead of the full search.
    pub exhaustive: bool,
    pub nodes_visited: u64,
}

/// Strong-independence test against a precomputed signature list.
struct AttainabilityOracle {
    signatures: Vec<u64>,
}

impl AttainabilityOracle {
    fn new(spec: &LatticeSpec) -> Self {
        Self {
            signatures: attainable_signatures(spec),
        }
    }

    fn full_cube(&self, mask: u64) -> bool {
        let target = 1usize << mask.count_ones();
        if self.signatures.len() < target {
            return false;
        }
        let mut seen = HashSet::with_capacity(target);
        for &s in &self.signatures {
            seen.insert(s & mask);
            if seen.len() == target {
                return true;
            }
        }
        false
    }
}

/// Windows `{j, j+1, j+2}` as index masks (cyclic on a ring).
fn triple_windows(spec: &LatticeSpec) -> Vec<u64> {
    let m = spec.n_qims();
    let starts = match spec.boundary() {
        Boundary::Periodic => m,
        Boundary::Open => m.saturating_sub(2),
    };
    (0..starts)
        .map(|j| (0..3).fold(0u64, |acc, d| acc | (1 << ((j + d) % m))))
        .collect()
}

struct SubsetSearch<'a> {
    oracle: &'a AttainabilityOracle,
    windows: Vec<u64>,
    width: usize,
    best: u64,
    best_size: u32,
    nodes: u64,
}

impl SubsetSearch<'_> {
    /// Largest count that `remaining` further indices can add without three
    /// consecutive ones.
    fn room(remaining: usize) -> u32 {
        (remaining - remaining / 3) as u32
    }

    fn visit(&mut self, next: usize, chosen: u64) {
        self.nodes += 1;
        let size = chosen.count_ones();
        if size > self.best_size {
            self.best = chosen;
            self.best_size = size;
        }
        if next == self.width || size + Self::room(self.width - next) <= self.best_size {
            return;
        }
        let with = chosen | (1 << next);
        let decided = (1u64 << (next + 1)) - 1;
        let window_ok = self
            .windows
            .iter()
            .all(|&w| w & decided != w || w & with != w);
        if window_ok && self.oracle.full_cube(with) {
            self.visit(next + 1, with);
        }
        self.visit(next + 1, chosen);
    }
}

fn mask_to_subset(spec: &LatticeSpec, mask: u64) -> Result<QimSubset> {
    QimSubset::new(
        spec,
        (0..spec.n_qims()).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect(),
    )
}

/// Largest strongly independent subset of all the integrals, and the
/// lexicographically least one of that size.
///
/// Branch and bound over index inclusion, smallest index first. A branch is
/// cut when it would put three consecutive indices together or lose full
/// attainability (both inherited by supersets), or when it cannot beat the
/// incumbent. Above [`EXHAUSTIVE_SEARCH_MAX_SITES`] a greedy pass is used
/// and the result is flagged.
pub fn max_independent_subset(spec: &LatticeSpec) -> Result<MaxSubsetResult> {
    let oracle = AttainabilityOracle::new(spec);
    let width = spec.n_qims();
    let exhaustive = spec.n_sites() <= EXHAUSTIVE_SEARCH_MAX_SITES;
    let (best, nodes) = if exhaustive {
        let mut search = SubsetSearch {
            oracle: &oracle,
            windows: triple_windows(spec),
            width,
            best: 0,
            best_size: 0,
            nodes: 0,
        };
        search.visit(0, 0);
        (search.best, search.nodes)
    } else {
        let mut chosen = 0u64;
        for k in 0..width {
            if oracle.full_cube(chosen | (1 << k)) {
                chosen |= 1 << k;
            }
        }
        (chosen, width as u64)
    };
    Ok(MaxSubsetResult {
        n: spec.n_sites(),
        boundary: spec.boundary(),
        size: best.count_ones() as usize,
        subset: mask_to_subset(spec, best)?,
        exhaustive,
        nodes_visited: nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub index: usize,
    pub strongly_independent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub subset: QimSubset,
    /// The subset itself is strongly independent.
    pub precondition_met: bool,
    pub extensions: Vec<Extension>,
    /// Strongly independent, and no single extension stays so.
    pub maximal_by_inclusion: bool,
}

/// Tries every one-index extension of `sub`.
pub fn maximal_by_inclusion_check(spec: &LatticeSpec, sub: &QimSubset) -> Result<InclusionReport> {
    check_subset(spec, sub)?;
    let oracle = AttainabilityOracle::new(spec);
    let base = sub.signature_mask();
    let precondition_met = oracle.full_cube(base);
    let extensions: Vec<Extension> = (1..=spec.n_qims())
        .filter(|i| base >> (i - 1) & 1 == 0)
        .map(|index| Extension {
            index,
            strongly_independent: oracle.full_cube(base | (1 << (index - 1))),
        })
        .collect();
    let maximal_by_inclusion = precondition_met && extensions.iter().all(|e| !e.strongly_independent);
    Ok(InclusionReport {
        subset: sub.clone(),
        precondition_met,
        extensions,
        maximal_by_inclusion,
    })
}

/// Checks that every Hamiltonian edge stays inside the projected tuple set
/// (used by tests of the projection routes).
#[doc(hidden)]
pub fn edges_preserve_projection(spec: &LatticeSpec, sub: &QimSubset) -> bool {
    (0..spec.hilbert_dim()).all(|c| {
        let t = sub.compress(signature_bits(spec, c));
        hamiltonian_moves(spec, SpinConfiguration(c)).all(|d| sub.compress(signature_bits(spec, d.bits())) == t)
    })
}
