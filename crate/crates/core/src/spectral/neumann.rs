//! Expressing one diagonal operator as a polynomial in another with a
//! nondegenerate spectrum.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{qim_eigenvalue, LatticeSpec};

/// Largest interpolation dimension accepted. Beyond this the monomial form is
/// numerically meaningless in double precision.
pub const MAX_NEUMANN_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannExpansion {
    pub base_eigenvalues: Vec<f64>,
    pub target_eigenvalues: Vec<f64>,
    pub dimension: usize,
    /// Monomial coefficients, constant term first.
    pub coefficients: Vec<f64>,
    /// `max |p(base_mu) - target_mu|` with `p` in Lagrange form.
    pub max_reconstruction_error: f64,
    /// Same with `p` evaluated from `coefficients`; `None` once it overflows.
    pub coefficient_form_error: Option<f64>,
    /// Number of Lagrange terms, equal to `dimension`.
    pub term_count: usize,
    /// Degree of the interpolant, `dimension - 1`.
    pub degree: usize,
}

impl NeumannExpansion {
    /// Lagrange-form value at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        lagrange(&self.base_eigenvalues, &self.target_eigenvalues, x)
    }
}

fn lagrange(base: &[f64], target: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    for (mu, (&bm, &tm)) in base.iter().zip(target).enumerate() {
        let mut prod = 1.0;
        for (nu, &bn) in base.iter().enumerate() {
            if nu != mu {
                prod *= (x - bn) / (bm - bn);
            }
        }
        sum += tm * prod;
    }
    sum
}

fn monomial_coefficients(base: &[f64], target: &[f64]) -> Vec<f64> {
    let d = base.len();
    let mut dd = target.to_vec();
    for level in 1..d {
        for i in (level..d).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (base[i] - base[i - level]);
        }
    }
    // Horner on the Newton form, accumulating monomial coefficients
    let mut poly = vec![0.0; d];
    poly[0] = dd[d - 1];
    let mut len = 1;
    for k in (0..d - 1).rev() {
        // poly <- poly * (x - base[k]) + dd[k]
        for i in (0..=len).rev() {
            let shifted = if i > 0 { poly[i - 1] } else { 0.0 };
            let here = if i < len { poly[i] } else { 0.0 };
            poly[i] = shifted - base[k] * here;
        }
        poly[0] += dd[k];
        len += 1;
    }
    poly
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn neumann_interpolate(base: &[f64], target: &[f64]) -> Result<NeumannExpansion> {
    let d = base.len();
    if d != target.len() {
        return Err(Error::Precondition(format!(
            "base has {d} values, target {}",
            target.len()
        )));
    }
    if d == 0 {
        return Err(Error::Precondition("empty base".into()));
    }
    if d > MAX_NEUMANN_DIM {
        return Err(Error::LimitExceeded(format!(
            "dimension {d} exceeds the interpolation cap {MAX_NEUMANN_DIM}"
        )));
    }
    if base.iter().chain(target).any(|v| !v.is_finite()) {
        return Err(Error::Precondition("non-finite input".into()));
    }
    for i in 0..d {
        for j in i + 1..d {
            if base[i] == base[j] {
                return Err(Error::DegenerateBase {
                    value: base[i],
                    first: i,
                    second: j,
                });
            }
        }
    }

    let coefficients = monomial_coefficients(base, target);
    let mut max_err: f64 = 0.0;
    let mut coeff_err: f64 = 0.0;
    for (&b, &t) in base.iter().zip(target) {
        max_err = max_err.max((lagrange(base, target, b) - t).abs());
        coeff_err = coeff_err.max((horner(&coefficients, b) - t).abs());
    }
    Ok(NeumannExpansion {
        base_eigenvalues: base.to_vec(),
        target_eigenvalues: target.to_vec(),
        dimension: d,
        coefficient_form_error: coeff_err.is_finite().then_some(coeff_err),
        coefficients,
        max_reconstruction_error: max_err,
        term_count: d,
        degree: d - 1,
    })
}

/// Pairwise-distinct values uniform in `[-1, 1]`, reproducible from `seed`.
pub fn random_nondegenerate_base(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<f64> = Vec::with_capacity(d);
    while out.len() < d {
        let v: f64 = rng.gen_range(-1.0..=1.0);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.shuffle(&mut rng);
    out
}

/// Writes `I_target` on the full `2^N` basis as a polynomial in a random
/// nondegenerate diagonal operator.
pub fn neumann_demo(spec: &LatticeSpec, target: usize, seed: u64) -> Result<NeumannExpansion> {
    let d = spec.hilbert_dim() as usize;
    if d > MAX_NEUMANN_DIM {
        return Err(Error::LimitExceeded(format!(
            "dimension 2^{} = {d} exceeds the interpolation cap {MAX_NEUMANN_DIM}",
            spec.n_sites()
        )));
    }
    let values = spec
        .configurations()
        .map(|c| qim_eigenvalue(spec, c, target).map(f64::from))
        .collect::<Result<Vec<_>>>()?;
    neumann_interpolate(&random_nondegenerate_base(d, seed), &values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_case() {
        let e = neumann_interpolate(&[0.0, 1.0], &[3.0, 5.0]).unwrap();
        assert_eq!(e.coefficients, vec![3.0, 2.0]);
        assert_eq!(e.max_reconstruction_error, 0.0);
        assert!((e.evaluate(0.5) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_coefficients() {
        // p(x) = 1 - 2x + x^3
        let base = [-1.0, 0.0, 1.0, 2.0];
        let target: Vec<f64> = base.iter().map(|x| 1.0 - 2.0 * x + x * x * x).collect();
        let e = neumann_interpolate(&base, &target).unwrap();
        for (c, want) in e.coefficients.iter().zip([1.0, -2.0, 0.0, 1.0]) {
            assert!((c - want).abs() < 1e-12);
        }
        assert_eq!(e.degree, 3);
    }

    #[test]
    fn degenerate_base_rejected() {
        let err = neumann_interpolate(&[0.0, 0.0, 1.0], &[1.0, 2.0, 3.0]).unwrap_err();
        assert_eq!(
            err,
            Error::DegenerateBase {
                value: 0.0,
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn demo_is_exact_on_small_chains() {
        for n in 3..=4 {
            let spec = LatticeSpec::periodic(n).unwrap();
            let e = neumann_demo(&spec, 1, 7).unwrap();
            assert_eq!(e.term_count, 1 << n);
            assert!(e.max_reconstruction_error <= 1e-8);
        }
        let big = LatticeSpec::periodic(7).unwrap();
        assert!(matches!(neumann_demo(&big, 1, 7), Err(Error::LimitExceeded(_))));
    }

    #[test]
    fn base_is_reproducible() {
        assert_eq!(random_nondegenerate_base(16, 3), random_nondegenerate_base(16, 3));
        assert_ne!(random_nondegenerate_base(16, 3), random_nondegenerate_base(16, 4));
    }
}
