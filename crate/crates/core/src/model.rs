//! Binary pairwise MRF and RBM parameter types and their scores.
//!
//! An MRF over `n` binary variables has score (negative energy) `xᵀAx` for a
//! symmetric `A`; off-diagonal entries are pairwise potentials, the diagonal
//! holds unary potentials. An RBM has score `vᵀWh + aᵀv + bᵀh`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;

/// Value set of every variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    #[serde(rename = "pm1")]
    PlusMinusOne,
    #[serde(rename = "01")]
    ZeroOne,
}

impl Domain {
    /// `(low, high)` values; ties in enumeration order `low` before `high`.
    pub fn values(self) -> (i8, i8) {
        match self {
            Domain::PlusMinusOne => (-1, 1),
            Domain::ZeroOne => (0, 1),
        }
    }

    pub fn contains(self, value: i8) -> bool {
        let (lo, hi) = self.values();
        value == lo || value == hi
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::PlusMinusOne => "pm1",
            Domain::ZeroOne => "01",
        })
    }
}

/// A corner of the hypercube. Ordering is lexicographic with the domain's low
/// value first, which is the tie-break used by the brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    values: Vec<i8>,
    domain: Domain,
}

impl Assignment {
    pub fn new(values: Vec<i8>, domain: Domain) -> Result<Self> {
        if let Some(&value) = values.iter().find(|&&v| !domain.contains(v)) {
            return Err(Error::InvalidAssignment { value, domain });
        }
        Ok(Self { values, domain })
    }

    pub fn pm1(values: Vec<i8>) -> Result<Self> {
        Self::new(values, Domain::PlusMinusOne)
    }

    pub fn bits(values: Vec<i8>) -> Result<Self> {
        Self::new(values, Domain::ZeroOne)
    }

    pub(crate) fn from_valid(values: Vec<i8>, domain: Domain) -> Self {
        debug_assert!(values.iter().all(|&v| domain.contains(v)));
        Self { values, domain }
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i8> {
        self.values
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| f64::from(v)).collect()
    }

    /// The opposite corner: `-x` for ±1, `1 - x` for {0,1}.
    pub fn flipped(&self) -> Self {
        let (lo, hi) = self.domain.values();
        let values = self
            .values
            .iter()
            .map(|&v| if v == lo { hi } else { lo })
            .collect();
        Self::from_valid(values, self.domain)
    }

    /// Re-expresses the corner in another domain via `x̃ = 2x − 1`.
    pub fn to_domain(&self, domain: Domain) -> Self {
        let values = match (self.domain, domain) {
            (a, b) if a == b => self.values.clone(),
            (Domain::ZeroOne, Domain::PlusMinusOne) => {
                self.values.iter().map(|&v| 2 * v - 1).collect()
            }
            _ => self.values.iter().map(|&v| (v + 1) / 2).collect(),
        };
        Self::from_valid(values, domain)
    }
}

/// Parameters of a binary pairwise MRF with score `xᵀAx`.
#[derive(Clone, Debug, PartialEq)]
pub struct MrfParams {
    a: Matrix,
    domain: Domain,
}

impl MrfParams {
    /// Stores `(A + Aᵀ)/2`; the quadratic form is unchanged by symmetrization.
    pub fn new(a: Matrix, domain: Domain) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: a.cols(),
            });
        }
        if a.rows() == 0 {
            return Err(Error::InvalidOption("MRF must have at least one variable".into()));
        }
        if !a.is_finite() {
            return Err(Error::NonFinite("coupling matrix"));
        }
        let n = a.rows();
        let mut sym = a.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (a[(i, j)] + a[(j, i)]);
                sym[(i, j)] = v;
                sym[(j, i)] = v;
            }
        }
        Ok(Self { a: sym, domain })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub(crate) fn check_assignment(&self, x: &Assignment) -> Result<()> {
        check_dim(self.n(), x.len())?;
        if x.domain() != self.domain {
            return Err(Error::DomainMismatch {
                expected: self.domain,
                found: x.domain(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_domain(&self, domain: Domain) -> Result<()> {
        if self.domain != domain {
            return Err(Error::DomainMismatch {
                expected: domain,
                found: self.domain,
            });
        }
        Ok(())
    }
}

/// Parameters of an RBM with visible biases `a`, hidden biases `b` and
/// visible-by-hidden weights `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct RbmParams {
    w: Matrix,
    a: Vec<f64>,
    b: Vec<f64>,
    domain: Domain,
}

impl RbmParams {
    pub fn new(w: Matrix, a: Vec<f64>, b: Vec<f64>, domain: Domain) -> Result<Self> {
        check_dim(w.rows(), a.len())?;
        check_dim(w.cols(), b.len())?;
        if w.rows() == 0 || w.cols() == 0 {
            return Err(Error::InvalidOption(
                "RBM needs at least one visible and one hidden unit".into(),
            ));
        }
        if !w.is_finite() {
            return Err(Error::NonFinite("weight matrix"));
        }
        if !a.iter().chain(&b).all(|v| v.is_finite()) {
            return Err(Error::NonFinite("biases"));
        }
        Ok(Self { w, a, b, domain })
    }

    pub fn zeros(m: usize, p: usize, domain: Domain) -> Result<Self> {
        Self::new(Matrix::zeros(m, p), vec![0.0; m], vec![0.0; p], domain)
    }

    /// Visible count.
    pub fn m(&self) -> usize {
        self.w.rows()
    }

    /// Hidden count.
    pub fn p(&self) -> usize {
        self.w.cols()
    }

    pub fn weights(&self) -> &Matrix {
        &self.w
    }

    pub fn visible_bias(&self) -> &[f64] {
        &self.a
    }

    pub fn hidden_bias(&self) -> &[f64] {
        &self.b
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Matrix, &mut [f64], &mut [f64]) {
        (&mut self.w, &mut self.a, &mut self.b)
    }

    pub(crate) fn check_layers(&self, v: &Assignment, h: &Assignment) -> Result<()> {
        check_dim(self.m(), v.len())?;
        check_dim(self.p(), h.len())?;
        for x in [v, h] {
            if x.domain() != self.domain {
                return Err(Error::DomainMismatch {
                    expected: self.domain,
                    found: x.domain(),
                });
            }
        }
        Ok(())
    }
}

/// `xᵀAx` as a plain double sum over domain values.
pub(crate) fn quadratic_form_i8(a: &Matrix, x: &[i8]) -> f64 {
    let mut total = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        let row: f64 = a
            .row(i)
            .iter()
            .zip(x)
            .map(|(aij, &xj)| aij * f64::from(xj))
            .sum();
        total += f64::from(xi) * row;
    }
    total
}

/// MRF score `xᵀAx`.
pub fn score(params: &MrfParams, x: &Assignment) -> Result<f64> {
    params.check_assignment(x)?;
    Ok(quadratic_form_i8(params.matrix(), x.values()))
}

/// RBM score `vᵀWh + aᵀv + bᵀh`.
pub fn rbm_score(params: &RbmParams, v: &Assignment, h: &Assignment) -> Result<f64> {
    params.check_layers(v, h)?;
    Ok(rbm_score_raw(params, v.values(), h.values()))
}

pub(crate) fn rbm_score_raw(params: &RbmParams, v: &[i8], h: &[i8]) -> f64 {
    let mut total = 0.0;
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        let vi = f64::from(vi);
        let wh: f64 = params
            .w
            .row(i)
            .iter()
            .zip(h)
            .map(|(w, &hj)| w * f64::from(hj))
            .sum();
        total += vi * (wh + params.a[i]);
    }
    total
        + params
            .b
            .iter()
            .zip(h)
            .map(|(b, &hj)| b * f64::from(hj))
            .sum::<f64>()
}

/// Embeds a ±1 RBM as an `(1 + m + p)`-variable MRF whose first coordinate is
/// an auxiliary variable carrying the biases:
/// `A = ½·[[0, aᵀ, bᵀ], [a, 0, W], [b, Wᵀ, 0]]`.
///
/// The score of `(1, v, h)` equals `rbm_score(v, h)`.
pub fn rbm_to_mrf(params: &RbmParams) -> Result<MrfParams> {
    if params.domain != Domain::PlusMinusOne {
        return Err(Error::DomainMismatch {
            expected: Domain::PlusMinusOne,
            found: params.domain,
        });
    }
    let (m, p) = (params.m(), params.p());
    let n = 1 + m + p;
    let mut a = Matrix::zeros(n, n);
    for i in 0..m {
        a[(0, 1 + i)] = 0.5 * params.a[i];
        a[(1 + i, 0)] = 0.5 * params.a[i];
    }
    for j in 0..p {
        a[(0, 1 + m + j)] = 0.5 * params.b[j];
        a[(1 + m + j, 0)] = 0.5 * params.b[j];
    }
    for i in 0..m {
        for j in 0..p {
            let w = 0.5 * params.w[(i, j)];
            a[(1 + i, 1 + m + j)] = w;
            a[(1 + m + j, 1 + i)] = w;
        }
    }
    MrfParams::new(a, Domain::PlusMinusOne)
}

/// Flips a ±1 assignment so that its auxiliary (first) coordinate is +1.
/// Lossless because `xᵀAx = (−x)ᵀA(−x)`.
pub fn canonicalize_auxiliary(x: &Assignment) -> Assignment {
    match x.values().first() {
        Some(&-1) if x.domain() == Domain::PlusMinusOne => x.flipped(),
        _ => x.clone(),
    }
}

/// Splits an embedded RBM assignment `(aux, v, h)` into `(v, h)` after
/// canonicalizing the auxiliary coordinate.
pub fn split_rbm_assignment(x: &Assignment, m: usize) -> Result<(Assignment, Assignment)> {
    if x.is_empty() || x.len() < 1 + m {
        return Err(Error::DimensionMismatch {
            expected: 1 + m,
            found: x.len(),
        });
    }
    let canon = canonicalize_auxiliary(x);
    let values = canon.values();
    Ok((
        Assignment::from_valid(values[1..1 + m].to_vec(), x.domain()),
        Assignment::from_valid(values[1 + m..].to_vec(), x.domain()),
    ))
}
