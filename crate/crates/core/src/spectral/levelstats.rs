//! Consecutive-gap ratio statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean gap ratio of uncorrelated levels, `2 ln 2 - 1`.
pub const POISSON_MEAN_R: f64 = 0.386_294_361_119_890_6;
/// Mean gap ratio of the Gaussian orthogonal ensemble.
pub const GOE_MEAN_R: f64 = 0.5307;
/// Below this many ratios the mean is reported but flagged.
pub const MIN_MEANINGFUL_LEVELS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelStatOptions {
    /// Fraction dropped from each spectral edge.
    pub trim: f64,
    /// Levels with `|E|` below this are treated as exact zero modes.
    pub zero_cutoff: f64,
    pub bins: usize,
}

impl Default for LevelStatOptions {
    fn default() -> Self {
        LevelStatOptions {
            trim: 0.05,
            zero_cutoff: 1e-10,
            bins: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStatReport {
    pub mean_r: f64,
    /// Number of ratios averaged.
    pub levels_used: usize,
    pub levels_total: usize,
    pub zero_modes_removed: usize,
    pub trimmed: usize,
    /// Ratios skipped because both adjacent gaps vanished.
    pub degenerate_ratios: usize,
    /// Counts over `bins` equal bins of `[0, 1]`; `r = 1` lands in the last.
    pub histogram: Vec<usize>,
    pub meaningful: bool,
}

/// `r_n = min(s_n, s_{n+1}) / max(s_n, s_{n+1})` averaged over the trimmed,
/// zero-mode-free spectrum. Input need not be sorted.
pub fn r_statistic(eigenvalues: &[f64], opts: &LevelStatOptions) -> Result<LevelStatReport> {
    if !(0.0..0.5).contains(&opts.trim) {
        return Err(Error::Precondition(format!("trim {} not in [0, 0.5)", opts.trim)));
    }
    if opts.bins == 0 {
        return Err(Error::Precondition("histogram needs at least one bin".into()));
    }
    if eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::Precondition("non-finite eigenvalue".into()));
    }
    let mut levels: Vec<f64> = eigenvalues
        .iter()
        .copied()
        .filter(|e| e.abs() >= opts.zero_cutoff)
        .collect();
    let zero_modes_removed = eigenvalues.len() - levels.len();
    levels.sort_by(f64::total_cmp);

    let cut = (opts.trim * levels.len() as f64).floor() as usize;
    let kept = &levels[cut..levels.len() - cut];
    if kept.len() < 3 {
        return Err(Error::TooFewLevels {
            got: kept.len(),
            needed: 3,
        });
    }

    let gaps: Vec<f64> = kept.windows(2).map(|w| w[1] - w[0]).collect();
    let mut histogram = vec![0usize; opts.bins];
    let mut sum = 0.0;
    let mut used = 0;
    let mut degenerate = 0;
    for g in gaps.windows(2) {
        let (lo, hi) = if g[0] <= g[1] { (g[0], g[1]) } else { (g[1], g[0]) };
        if hi == 0.0 {
            degenerate += 1;
            continue;
        }
        let r = lo / hi;
        sum += r;
        used += 1;
        let bin = ((r * opts.bins as f64) as usize).min(opts.bins - 1);
        histogram[bin] += 1;
    }
    if used == 0 {
        return Err(Error::TooFewLevels { got: 0, needed: 1 });
    }

    Ok(LevelStatReport {
        mean_r: sum / used as f64,
        levels_used: used,
        levels_total: eigenvalues.len(),
        zero_modes_removed,
        trimmed: 2 * cut,
        degenerate_ratios: degenerate,
        histogram,
        meaningful: used >= MIN_MEANINGFUL_LEVELS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equally_spaced_levels_give_one() {
        let levels: Vec<f64> = (1..=100).map(f64::from).collect();
        let opts = LevelStatOptions {
            trim: 0.0,
            ..Default::default()
        };
        let rep = r_statistic(&levels, &opts).unwrap();
        assert_eq!(rep.levels_used, 98);
        assert!((rep.mean_r - 1.0).abs() < 1e-12);
        assert_eq!(rep.histogram[19], 98);
        assert!(rep.meaningful);
    }

    #[test]
    fn zero_modes_and_trim() {
        let mut levels = vec![0.0, 1e-13, -1e-12];
        levels.extend((1..=40).map(|i| f64::from(i) * 0.5));
        let rep = r_statistic(&levels, &LevelStatOptions::default()).unwrap();
        assert_eq!(rep.zero_modes_removed, 3);
        assert_eq!(rep.trimmed, 4);
        assert_eq!(rep.levels_used, 34);
        assert!(!rep.meaningful);
    }

    #[test]
    fn known_ratio() {
        // gaps 1, 3, 1 -> ratios 1/3, 1/3
        let rep = r_statistic(
            &[1.0, 2.0, 5.0, 6.0],
            &LevelStatOptions {
                trim: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((rep.mean_r - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rep.histogram[6], 2);
    }

    #[test]
    fn degenerate_pairs_are_skipped() {
        let rep = r_statistic(
            &[1.0, 1.0, 1.0, 2.0, 4.0],
            &LevelStatOptions {
                trim: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(rep.degenerate_ratios, 1);
        // gaps 0,0,1,2: ratios skip, 0, 1/2
        assert_eq!(rep.levels_used, 2);
        assert!((rep.mean_r - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(r_statistic(&[1.0, 2.0], &LevelStatOptions::default()).is_err());
        let bad = LevelStatOptions {
            trim: 0.6,
            ..Default::default()
        };
        assert!(r_statistic(&[1.0, 2.0, 3.0, 4.0], &bad).is_err());
        assert!(r_statistic(&[1.0, f64::NAN, 3.0], &LevelStatOptions::default()).is_err());
    }
}
