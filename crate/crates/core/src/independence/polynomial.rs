//! Exact-rational polynomials in binary variables.
//!
//! [`Polynomial`] allows arbitrary exponents; [`MultilinearPoly`] is its
//! normal form under `x^2 = x`, the identity every projector satisfies.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `"p/q"` text form used in reports.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::MalformedPolynomial(format!("bad coefficient `{s}`"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Polynomial with arbitrary non-negative exponents in `n_vars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    /// The variable at 0-based position `k`.
    pub fn var(n_vars: usize, k: usize) -> Self {
        assert!(k < n_vars, "variable {k} out of range for {n_vars} variables");
        let mut exps = vec![0; n_vars];
        exps[k] = 1;
        let mut p = Self::zero(n_vars);
        p.add_term(exps, Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, rejecting
    /// exponent vectors of the wrong length.
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(n_vars);
        for (exps, c) in terms {
            if exps.len() != n_vars {
                return Err(Error::MalformedPolynomial(format!(
                    "monomial has {} exponents, expected {n_vars}",
                    exps.len()
                )));
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Reduce with `x^2 = x`. Fails for more than 64 variables.
    pub fn multilinear_normal_form(&self) -> Result<MultilinearPoly> {
        if self.n_vars > 64 {
            return Err(Error::MalformedPolynomial(format!(
                "{} variables exceeds the 64-variable limit",
                self.n_vars
            )));
        }
        let mut out = MultilinearPoly::zero(self.n_vars);
        for (exps, c) in &self.terms {
            let mask = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |m, (k, _)| m | (1 << k));
            out.add_term(mask, c.clone());
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(
            self.n_vars, other.n_vars,
            "polynomials over different variable counts"
        );
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (exps, c) in &rhs.terms {
            out.add_term(exps.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut out = Polynomial::zero(self.n_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Multilinear polynomial keyed by monomial bit mask: bit `k` set means
/// variable `k` appears. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultilinearPoly {
    n_vars: usize,
    terms: BTreeMap<u64, Rational>,
}

impl MultilinearPoly {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, Rational)>>(n_vars: usize, terms: I) -> Self {
        let mut p = Self::zero(n_vars);
        for (mask, c) in terms {
            p.add_term(mask, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, mask: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<u64, Rational> {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Value at the 0/1 point whose set bits are the variables equal to one.
    pub fn evaluate(&self, point: u64) -> Rational {
        self.terms
            .iter()
            .filter(|(&mask, _)| point & mask == mask)
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }

    /// Scale so the coefficient of the smallest monomial mask is one.
    pub fn normalized(&self) -> Self {
        match self.terms.values().next() {
            None => self.clone(),
            Some(lead) => {
                let lead = lead.clone();
                Self {
                    n_vars: self.n_vars,
                    terms: self.terms.iter().map(|(k, v)| (*k, v / &lead)).collect(),
                }
            }
        }
    }

    /// Indicator of a single 0/1 point restricted to the variables in
    /// `support`: product of `x` over ones and `1 - x` over zeros.
    pub fn indicator(n_vars: usize, point: u64, support: u64) -> Self {
        let ones = point & support;
        let zeros = support & !point;
        let mut p = Self::zero(n_vars);
        // expand the (1 - x) factors over every subset of the zero positions
        let mut sub = zeros;
        loop {
            let sign = if sub.count_ones() % 2 == 0 { 1 } else { -1 };
            p.add_term(ones | sub, rational(sign, 1));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & zeros;
        }
        p
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (mask, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = (0..self.n_vars)
                .filter(|v| mask >> v & 1 == 1)
                .map(|v| format!("x{}", v + 1))
                .collect();
            if vars.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{magnitude}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// One monomial of a serialized relation: site indices and `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialRecord {
    pub vars: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub monomials: Vec<MonomialRecord>,
}

/// A nonzero multilinear polynomial in the integrals of a subset, normalized
/// so that the coefficient of the smallest monomial mask is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultilinearRelation {
    indices: Vec<usize>,
    poly: MultilinearPoly,
}

impl MultilinearRelation {
    /// `indices[k]` is the site index of variable `k`.
    pub fn new(indices: Vec<usize>, poly: MultilinearPoly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::MalformedPolynomial("relation has no nonzero coefficient".into()));
        }
        if poly.n_vars() != indices.len() {
            return Err(Error::MalformedPolynomial(format!(
                "{} variables for {} indices",
                poly.n_vars(),
                indices.len()
            )));
        }
        Ok(Self {
            indices,
            poly: poly.normalized(),
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn poly(&self) -> &MultilinearPoly {
        &self.poly
    }

    pub fn term_count(&self) -> usize {
        self.poly.term_count()
    }

    /// Site indices of the variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let used = self.poly.terms().keys().fold(0u64, |a, m| a | m);
        (0..self.indices.len())
            .filter(|k| used >> k & 1 == 1)
            .map(|k| self.indices[k])
            .collect()
    }

    pub fn to_record(&self) -> RelationRecord {
        RelationRecord {
            monomials: self
                .poly
                .terms()
                .iter()
                .map(|(mask, c)| MonomialRecord {
                    vars: (0..self.indices.len())
                        .filter(|k| mask >> k & 1 == 1)
                        .map(|k| self.indices[k])
                        .collect(),
                    coeff: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn from_record(indices: Vec<usize>, record: &RelationRecord) -> Result<Self> {
        let mut poly = MultilinearPoly::zero(indices.len());
        for m in &record.monomials {
            let mut mask = 0u64;
            for v in &m.vars {
                let k = indices.iter().position(|i| i == v).ok_or_else(|| {
                    Error::MalformedPolynomial(format!("variable I{v} not in subset"))
                })?;
                mask |= 1 << k;
            }
            poly.add_term(mask, parse_rational(&m.coeff)?);
        }
        Self::new(indices, poly)
    }
}

impl fmt::Display for MultilinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut text = self.poly.to_string();
        // rename positional variables to site indices, longest names first
        for k in (0..self.indices.len()).rev() {
            text = text.replace(&format!("x{}", k + 1), &format!("I#{}", self.indices[k]));
        }
        write!(f, "{} = 0", text.replace("I#", "I"))
    }
}
