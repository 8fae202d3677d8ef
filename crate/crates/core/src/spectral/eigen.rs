//! Dense real symmetric eigensolver: Householder tridiagonalization followed
//! by implicit-shift QL iteration (the EISPACK `tred2`/`tql2` pair).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SparseOperator;

/// Iteration cap for each eigenvalue in the QL sweep.
pub const MAX_QL_ITERATIONS: usize = 50;
/// Relative asymmetry tolerated on input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Square row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("matrix is not square".into()));
        }
        Ok(Self {
            n,
            data: rows.concat(),
        })
    }

    pub fn from_sparse(op: &SparseOperator) -> Self {
        let mut m = Self::zeros(op.dimension);
        for &(r, c, v) in &op.entries {
            m[(r, c)] += v as f64;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Ascending eigenvalues with optional eigenvectors stored as columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<DenseMatrix>,
    /// `max |A V - V Λ| / ‖A‖_F` (absolute when `A = 0`).
    pub residual_bound: f64,
    /// `max |VᵀV - 1|`.
    pub orthogonality_defect: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn eigensolve_symmetric(matrix: &DenseMatrix) -> Result<Spectrum> {
    let n = matrix.dim();
    let scale = matrix.max_abs();
    let defect = matrix.asymmetry();
    if defect > SYMMETRY_TOLERANCE * scale.max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::NotSymmetric { defect });
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: Some(DenseMatrix::zeros(0)),
            residual_bound: 0.0,
            orthogonality_defect: 0.0,
        });
    }

    let mut v = matrix.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    let mut vt = v;
    ql_implicit(&mut d, &mut e, &mut vt)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut vectors = DenseMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = vt[(k, row)];
        }
    }

    let (residual_bound, orthogonality_defect) = contract_defects(matrix, &eigenvalues, &vectors);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Some(vectors),
        residual_bound,
        orthogonality_defect,
    })
}

/// Eigenvalues only; the eigenvectors are dropped after the defect check.
pub fn eigenvalues_symmetric(matrix: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(eigensolve_symmetric(matrix)?.eigenvalues)
}

/// Reconstruction residual relative to `‖A‖_F` and orthogonality defect.
pub fn contract_defects(a: &DenseMatrix, eigenvalues: &[f64], vectors: &DenseMatrix) -> (f64, f64) {
    let n = a.dim();
    let av = a.matmul(vectors);
    let mut residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            residual = residual.max((av[(i, j)] - vectors[(i, j)] * eigenvalues[j]).abs());
        }
    }
    let norm = a.frobenius_norm();
    let residual = if norm > 0.0 { residual / norm } else { residual };

    let vt = vectors.transpose();
    let gram = vt.matmul(vectors);
    let mut ortho = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((gram[(i, j)] - target).abs());
        }
    }
    (residual, ortho)
}

/// Householder reduction of the symmetric matrix held in `v` to tridiagonal
/// form. On return `d` is the diagonal, `e[1..]` the subdiagonal and `v` the
/// accumulated orthogonal transformation, transposed. Indices are swapped
/// throughout so the inner loops run along rows.
fn tridiagonalize(v: &mut DenseMatrix, d: &mut [f64], e: &mut [f64]) {
    let n = v.dim();
    for j in 0..n {
        d[j] = v[(j, n - 1)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(j, i - 1)];
                v[(j, i)] = 0.0;
                v[(i, j)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[(i, j)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(j, k)] * d[k];
                    e[k] += v[(j, k)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(j, k)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(j, i - 1)];
                v[(j, i)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[(i, n - 1)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(i + 1, k)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(i + 1, k)] * v[(j, k)];
                }
                for k in 0..=i {
                    v[(j, k)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(i + 1, k)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(j, n - 1)];
        v[(j, n - 1)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal `(d, e)`. `vt` holds the
/// transformation transposed: row `k` of `vt` is eigenvector `k`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], vt: &mut DenseMatrix) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence { index: l });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rotate_rows(vt, i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Applies the Givens rotation to rows `i` and `i + 1` of `vt`.
fn rotate_rows(vt: &mut DenseMatrix, i: usize, c: f64, s: f64) {
    let n = vt.dim();
    let (head, tail) = vt.data.split_at_mut((i + 1) * n);
    let row_i = &mut head[i * n..];
    let row_next = &mut tail[..n];
    for (a, b) in row_i.iter_mut().zip(row_next.iter_mut()) {
        let h = *b;
        *b = s * *a + c * h;
        *a = c * *a - s * h;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_x() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = eigensolve_symmetric(&m).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert!(s.residual_bound < 1e-15);
    }

    #[test]
    fn trivial_sizes() {
        let s = eigensolve_symmetric(&DenseMatrix::zeros(0)).unwrap();
        assert!(s.is_empty());
        let m = DenseMatrix::from_rows(&[vec![3.5]]).unwrap();
        assert_eq!(eigensolve_symmetric(&m).unwrap().eigenvalues, vec![3.5]);
        let z = eigensolve_symmetric(&DenseMatrix::zeros(4)).unwrap();
        assert_eq!(z.eigenvalues, vec![0.0; 4]);
        assert!(z.orthogonality_defect < 1e-15);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(matches!(eigensolve_symmetric(&m), Err(Error::NotSymmetric { .. })));
        assert!(DenseMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn path_graph_spectrum() {
        // adjacency of a path on n vertices: 2 cos(k pi / (n + 1))
        let n = 12;
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = 1.0;
            m[(i + 1, i)] = 1.0;
        }
        let s = eigensolve_symmetric(&m).unwrap();
        let mut expected: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in s.eigenvalues.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
        assert!(s.residual_bound < 1e-14);
        assert!(s.orthogonality_defect < 1e-13);
    }

    #[test]
    fn degenerate_spectrum() {
        let mut m = DenseMatrix::identity(5);
        m[(0, 0)] = 2.0;
        let s = eigensolve_symmetric(&m).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0, 1.0, 2.0]);
        assert!(s.orthogonality_defect < 1e-15);
    }
}
