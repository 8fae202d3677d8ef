//! Exact Gauss-Jordan elimination over the rationals.

use num_traits::{One, Zero};

use super::polynomial::Rational;

/// Row-reduce `rows` (each of length `cols`) to reduced row echelon form in
/// place. Zero rows are dropped. Returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let lead = rows[rank][col].clone();
        if !lead.is_one() {
            for v in rows[rank][col..].iter_mut() {
                *v /= &lead;
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Basis of `{ v : A v = 0 }`, itself in reduced row echelon form (each
/// vector's first nonzero entry is one).
pub fn nullspace(matrix: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut reduced: Vec<Vec<Rational>> = matrix.to_vec();
    let pivots = rref(&mut reduced, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis: Vec<Vec<Rational>> = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect();
    rref(&mut basis, cols);
    basis
}
