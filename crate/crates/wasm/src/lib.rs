//! Browser bindings. Each export returns a JSON string; the plain functions
//! underneath carry the logic so they can be tested off the browser.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use pxp_core::independence::{
    independence_verdict, max_independent_subset, maximal_by_inclusion_check, parse_indices, Extension,
    QimSubset,
};
use pxp_core::signatures::{foliate, FoliationReport};
use pxp_core::spectral::{block_statistics, LevelStatOptions, Parity, GOE_MEAN_R, POISSON_MEAN_R};
use pxp_core::{Boundary, LatticeSpec, Signature};

/// Largest chain the page accepts for sector tables and subset checks.
pub const MAX_SITES: usize = 16;
/// Largest chain for level statistics; keeps a block solve well under a second.
pub const MAX_SPECTRAL_SITES: usize = 20;

fn lattice(n: usize, periodic: bool, limit: usize) -> Result<LatticeSpec, String> {
    if n > limit {
        return Err(format!("at most {limit} sites here"));
    }
    let bc = if periodic { Boundary::Periodic } else { Boundary::Open };
    LatticeSpec::new(n, bc).map_err(|e| e.to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn sector_table(n: usize, periodic: bool) -> Result<FoliationReport, String> {
    let spec = lattice(n, periodic, MAX_SITES)?;
    Ok(foliate(&spec).map_err(|e| e.to_string())?.report())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelHistogram {
    pub n: usize,
    pub k: usize,
    pub parity: Parity,
    pub block_dimension: usize,
    pub mean_r: f64,
    pub levels_used: usize,
    pub meaningful: bool,
    pub histogram: Vec<usize>,
    pub poisson_mean_r: f64,
    pub goe_mean_r: f64,
}

/// Gap-ratio histogram of the periodic zero sector in one symmetry block.
pub fn level_histogram(n: usize, k: usize, parity: &str, trim: f64, bins: usize) -> Result<LevelHistogram, String> {
    let spec = lattice(n, true, MAX_SPECTRAL_SITES)?;
    let parity: Parity = parity.parse().map_err(|e: pxp_core::Error| e.to_string())?;
    let opts = LevelStatOptions { trim, bins, ..Default::default() };
    let b = block_statistics(&spec, &Signature::zeros(n), Some(k), parity, &opts).map_err(|e| e.to_string())?;
    Ok(LevelHistogram {
        n,
        k,
        parity,
        block_dimension: b.block_dimension,
        mean_r: b.stats.mean_r,
        levels_used: b.stats.levels_used,
        meaningful: b.stats.meaningful,
        histogram: b.stats.histogram,
        poisson_mean_r: POISSON_MEAN_R,
        goe_mean_r: GOE_MEAN_R,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetCheck {
    pub n: usize,
    pub subset: Vec<usize>,
    pub weak: bool,
    pub strong: bool,
    /// Forbidden pattern and the relation it implies, when not strong.
    pub forbidden: Option<String>,
    pub relation: Option<String>,
    pub extensions: Vec<Extension>,
    pub maximal_by_inclusion: bool,
}

/// Independence verdicts for a comma-separated list of 1-based indices.
pub fn subset_check(n: usize, periodic: bool, indices: &str) -> Result<SubsetCheck, String> {
    let spec = lattice(n, periodic, MAX_SITES)?;
    let err = |e: pxp_core::Error| e.to_string();
    let sub = QimSubset::from_unsorted(&spec, parse_indices(indices).map_err(err)?).map_err(err)?;
    let v = independence_verdict(&spec, &sub).map_err(err)?;
    let inclusion = maximal_by_inclusion_check(&spec, &sub).map_err(err)?;
    let (forbidden, relation) = match &v.strong.forbidden {
        Some(f) => (Some(f.tuple.to_string()), Some(f.relation_text.clone())),
        None => (None, None),
    };
    Ok(SubsetCheck {
        n,
        subset: sub.indices().to_vec(),
        weak: v.weak.independent,
        strong: v.strong.independent,
        forbidden,
        relation,
        extensions: inclusion.extensions,
        maximal_by_inclusion: inclusion.maximal_by_inclusion,
    })
}

/// Lexicographically least strongly independent subset of maximum size.
pub fn largest_subset(n: usize, periodic: bool) -> Result<Vec<usize>, String> {
    let spec = lattice(n, periodic, MAX_SITES)?;
    let best = max_independent_subset(&spec).map_err(|e| e.to_string())?;
    Ok(best.subset.indices().to_vec())
}

fn export<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.and_then(|v| json(&v)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sectors(n: usize, periodic: bool) -> Result<String, JsError> {
    export(sector_table(n, periodic))
}

#[wasm_bindgen]
pub fn level_stats(n: usize, k: usize, parity: &str, trim: f64, bins: usize) -> Result<String, JsError> {
    export(level_histogram(n, k, parity, trim, bins))
}

#[wasm_bindgen]
pub fn check_subset(n: usize, periodic: bool, indices: &str) -> Result<String, JsError> {
    export(subset_check(n, periodic, indices))
}

#[wasm_bindgen]
pub fn max_subset(n: usize, periodic: bool) -> Result<String, JsError> {
    export(largest_subset(n, periodic))
}
