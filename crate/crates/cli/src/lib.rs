//! Report types and command implementations behind the `pxp` binary.
//!
//! Every report derives `Deserialize` as well as `Serialize` so that emitted
//! JSON can be read back into the same type.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pxp_core::independence::{
    find_relations, is_strongly_independent, is_weakly_independent, max_independent_subset,
    ForbiddenWitness, FunctionalDependence, QimSubset, RelationsReport, WeakWitness,
};
use pxp_core::lattice::FULL_SWEEP_MAX_SITES;
use pxp_core::signatures::{foliate, FoliationReport};
use pxp_core::spectral::{block_statistics, neumann_demo, LevelStatOptions, NeumannExpansion, Parity};
use pxp_core::{Boundary, Error, LatticeSpec, Signature};

/// Environment variable that lowers the site limits.
pub const MAX_N_VAR: &str = "PXP_MAX_N";

/// Failure of a command, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or a limit hit; exit code 2.
    Usage(String),
    /// Anything else; exit code 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_)
            | Error::NoConvergence { .. }
            | Error::ClosureViolation { .. }
            | Error::NotSymmetric { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Largest chain accepted, possibly lowered by `PXP_MAX_N`.
pub fn site_limit(env_value: Option<&str>) -> CliResult<usize> {
    let Some(raw) = env_value else {
        return Ok(FULL_SWEEP_MAX_SITES);
    };
    let v: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{MAX_N_VAR}=`{raw}` is not a site count")))?;
    Ok(v.min(FULL_SWEEP_MAX_SITES))
}

pub fn lattice(n: usize, bc: Boundary, limit: usize) -> CliResult<LatticeSpec> {
    if n > limit {
        return Err(CliError::Usage(format!("n = {n} exceeds the site limit {limit}")));
    }
    Ok(LatticeSpec::new(n, bc)?)
}

pub fn to_json<T: Serialize>(report: &T) -> CliResult<String> {
    serde_json::to_string(report).map_err(|e| CliError::Internal(e.to_string()))
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so an interrupted run never leaves a truncated file behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(())
}

// ---- sectors ----

pub fn sectors(spec: &LatticeSpec) -> CliResult<FoliationReport> {
    Ok(foliate(spec)?.report())
}

pub fn sectors_csv(report: &FoliationReport) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["signature", "dimension"])?;
    for s in &report.sectors {
        w.write_record([s.signature.to_string(), s.dimension.to_string()])?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?)
        .map_err(|e| CliError::Internal(e.to_string()))
}

// ---- independence ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakReport {
    pub n: usize,
    pub boundary: Boundary,
    pub subset: QimSubset,
    pub weak: bool,
    pub witnesses: Vec<WeakWitness>,
    pub dependence: Option<FunctionalDependence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongReport {
    pub n: usize,
    pub boundary: Boundary,
    pub subset: QimSubset,
    pub strong: bool,
    pub attainable_count: u64,
    pub cube_size: u64,
    pub witness: Option<ForbiddenWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxReport {
    pub n: usize,
    pub boundary: Boundary,
    pub size: usize,
    pub subset: QimSubset,
    pub exhaustive: bool,
    pub nodes_visited: u64,
}

fn subset_or_all(spec: &LatticeSpec, subset: Option<&str>) -> CliResult<QimSubset> {
    match subset {
        Some(text) => {
            let idx = pxp_core::independence::parse_indices(text)?;
            Ok(QimSubset::from_unsorted(spec, idx)?)
        }
        None => Ok(QimSubset::all(spec)),
    }
}

pub fn independence_weak(spec: &LatticeSpec, subset: Option<&str>) -> CliResult<WeakReport> {
    let sub = subset_or_all(spec, subset)?;
    let v = is_weakly_independent(spec, &sub)?;
    Ok(WeakReport {
        n: spec.n_sites(),
        boundary: spec.boundary(),
        subset: sub,
        weak: v.independent,
        witnesses: v.witnesses,
        dependence: v.dependence,
    })
}

pub fn independence_strong(spec: &LatticeSpec, subset: Option<&str>) -> CliResult<StrongReport> {
    let sub = subset_or_all(spec, subset)?;
    let v = is_strongly_independent(spec, &sub)?;
    Ok(StrongReport {
        n: spec.n_sites(),
        boundary: spec.boundary(),
        subset: sub,
        strong: v.independent,
        attainable_count: v.attainable_count,
        cube_size: v.cube_size,
        witness: v.forbidden,
    })
}

pub fn independence_max(spec: &LatticeSpec) -> CliResult<MaxReport> {
    let r = max_independent_subset(spec)?;
    Ok(MaxReport {
        n: r.n,
        boundary: r.boundary,
        size: r.size,
        subset: r.subset,
        exhaustive: r.exhaustive,
        nodes_visited: r.nodes_visited,
    })
}

// ---- relations ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsOutput {
    pub n: usize,
    pub boundary: Boundary,
    pub degree: usize,
    pub reports: Vec<RelationsReport>,
}

/// One report per window position, or a single report for an explicit
/// subset.
pub fn relations(
    spec: &LatticeSpec,
    window: Option<usize>,
    subset: Option<&str>,
    degree: usize,
) -> CliResult<RelationsOutput> {
    let subsets: Vec<QimSubset> = match (window, subset) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either --window or --subset, not both".into()))
        }
        (Some(len), None) => {
            let starts = match spec.boundary() {
                Boundary::Periodic => spec.n_qims(),
                Boundary::Open => (spec.n_qims() + 1).saturating_sub(len),
            };
            (1..=starts)
                .map(|start| QimSubset::window(spec, start, len))
                .collect::<pxp_core::Result<_>>()?
        }
        (None, Some(text)) => vec![subset_or_all(spec, Some(text))?],
        (None, None) => return Err(CliError::Usage("one of --window or --subset is required".into())),
    };
    let reports = subsets
        .iter()
        .map(|sub| Ok(RelationsReport::new(sub, &find_relations(spec, sub, degree)?)))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(RelationsOutput {
        n: spec.n_sites(),
        boundary: spec.boundary(),
        degree,
        reports,
    })
}

// ---- levelstats ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStatsSummary {
    pub n: usize,
    pub signature: Signature,
    pub k: usize,
    pub parity: Parity,
    pub mean_r: f64,
    pub levels_used: usize,
    pub block_dimension: usize,
    pub zero_modes_discarded: usize,
    pub trimmed_fraction: f64,
    pub meaningful: bool,
    pub residual_bound: f64,
    pub orthogonality_defect: f64,
    pub histogram_file: String,
    pub spectrum_file: String,
}

pub struct LevelStatsRun {
    pub summary: LevelStatsSummary,
    pub histogram_csv: String,
    pub spectrum_csv: String,
}

pub fn levelstats(
    spec: &LatticeSpec,
    signature: Option<&str>,
    k: usize,
    parity: Parity,
    opts: &LevelStatOptions,
    out_dir: &Path,
) -> CliResult<LevelStatsRun> {
    let sig = match signature {
        Some(text) => text.parse::<Signature>()?,
        None => Signature::zeros(spec.n_qims()),
    };
    let block = block_statistics(spec, &sig, Some(k), parity, opts)?;

    let mut hist = csv::Writer::from_writer(Vec::new());
    hist.write_record(["bin", "count"])?;
    for (bin, count) in block.stats.histogram.iter().enumerate() {
        hist.write_record([bin.to_string(), count.to_string()])?;
    }
    let histogram_csv = String::from_utf8(hist.into_inner().map_err(|e| CliError::Internal(e.to_string()))?)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let spectrum_csv: String = block.eigenvalues.iter().map(|e| format!("{e}\n")).collect();

    let n = spec.n_sites();
    let name = |what: &str| -> PathBuf { out_dir.join(format!("pxp_n{n}_{what}.csv")) };
    Ok(LevelStatsRun {
        summary: LevelStatsSummary {
            n,
            signature: sig,
            k,
            parity,
            mean_r: block.stats.mean_r,
            levels_used: block.stats.levels_used,
            block_dimension: block.block_dimension,
            zero_modes_discarded: block.stats.zero_modes_removed,
            trimmed_fraction: opts.trim,
            meaningful: block.stats.meaningful,
            residual_bound: block.residual_bound,
            orthogonality_defect: block.orthogonality_defect,
            histogram_file: name("levelstats").display().to_string(),
            spectrum_file: name("spectrum").display().to_string(),
        },
        histogram_csv,
        spectrum_csv,
    })
}

impl LevelStatsRun {
    /// Writes both files; either both appear complete or the call fails.
    pub fn write_files(&self) -> CliResult<()> {
        let hist = Path::new(&self.summary.histogram_file);
        let spec = Path::new(&self.summary.spectrum_file);
        if let Some(dir) = hist.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        write_atomic(spec, self.spectrum_csv.as_bytes())?;
        if let Err(e) = write_atomic(hist, self.histogram_csv.as_bytes()) {
            let _ = fs::remove_file(spec);
            return Err(e);
        }
        Ok(())
    }
}

// ---- neumann ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannReport {
    pub n: usize,
    pub target: usize,
    pub seed: u64,
    pub d: usize,
    pub term_count: usize,
    pub degree: usize,
    pub max_reconstruction_error: f64,
    pub coefficient_form_error: Option<f64>,
    pub expansion: NeumannExpansion,
}

pub fn neumann(spec: &LatticeSpec, target: usize, seed: u64) -> CliResult<NeumannReport> {
    let e = neumann_demo(spec, target, seed)?;
    Ok(NeumannReport {
        n: spec.n_sites(),
        target,
        seed,
        d: e.dimension,
        term_count: e.term_count,
        degree: e.degree,
        max_reconstruction_error: e.max_reconstruction_error,
        coefficient_form_error: e.coefficient_form_error,
        expansion: e,
    })
}
