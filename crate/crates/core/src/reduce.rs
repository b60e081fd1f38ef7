//! Linear changes of variables between `{0,1}ⁿ` and `{−1,1}ⁿ`, and folding of
//! the resulting linear terms back into a pure quadratic form.
//!
//! With `x̃ = 2x − 1` every objective `xᵀAx` over bits becomes
//! `x̃ᵀA'x̃ + bᵀx̃ + c` over signs (and vice versa). The linear term can be
//! absorbed either on the diagonal (bits, since `xᵢ² = xᵢ`) or through one
//! auxiliary ±1 variable clamped to +1.

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::model::{canonicalize_auxiliary, Assignment, Domain, MrfParams, RbmParams};

/// Quadratic part, linear coefficients and constant produced by a change of
/// variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearReduction {
    pub a_prime: Matrix,
    pub b: Vec<f64>,
    pub c: f64,
}

fn row_and_col_sums(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)] + a[(j, i)]).sum())
        .collect()
}

/// `{0,1}` → `{−1,1}`: `A' = A/4`, `b = ¼(Aᵀ1 + A1)`, `c = ¼·1ᵀA1`.
pub fn bits_to_hyp(params: &MrfParams) -> Result<(MrfParams, LinearReduction)> {
    params.require_domain(Domain::ZeroOne)?;
    let a = params.matrix();
    let a_prime = a.scaled(0.25);
    let b = row_and_col_sums(a).into_iter().map(|s| 0.25 * s).collect();
    let c = 0.25 * a.as_slice().iter().sum::<f64>();
    let out = MrfParams::new(a_prime.clone(), Domain::PlusMinusOne)?;
    Ok((out, LinearReduction { a_prime, b, c }))
}

/// `{−1,1}` → `{0,1}`: `A' = 4A`, `b = −2(Aᵀ1 + A1)`, `c = 1ᵀA1`.
pub fn hyp_to_bits(params: &MrfParams) -> Result<(MrfParams, LinearReduction)> {
    params.require_domain(Domain::PlusMinusOne)?;
    let a = params.matrix();
    let a_prime = a.scaled(4.0);
    let b = row_and_col_sums(a).into_iter().map(|s| -2.0 * s).collect();
    let c = a.as_slice().iter().sum::<f64>();
    let out = MrfParams::new(a_prime.clone(), Domain::ZeroOne)?;
    Ok((out, LinearReduction { a_prime, b, c }))
}

/// Absorbs `bᵀx̃` through an auxiliary first variable:
/// `A_aug = [[0, ½bᵀ], [½b, A]]`, so `(1, x̃)ᵀA_aug(1, x̃) = x̃ᵀAx̃ + bᵀx̃`.
pub fn fold_linear_hyp(params: &MrfParams, red: &LinearReduction) -> Result<MrfParams> {
    params.require_domain(Domain::PlusMinusOne)?;
    let n = params.n();
    check_dim(n, red.b.len())?;
    let a = params.matrix();
    let mut aug = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        aug[(0, i + 1)] = 0.5 * red.b[i];
        aug[(i + 1, 0)] = 0.5 * red.b[i];
        for j in 0..n {
            aug[(i + 1, j + 1)] = a[(i, j)];
        }
    }
    MrfParams::new(aug, Domain::PlusMinusOne)
}

/// Absorbs `bᵀx` on the diagonal: `A + diag(b)`.
pub fn fold_linear_bits(params: &MrfParams, red: &LinearReduction) -> Result<MrfParams> {
    params.require_domain(Domain::ZeroOne)?;
    check_dim(params.n(), red.b.len())?;
    let mut a = params.matrix().clone();
    for (i, &bi) in red.b.iter().enumerate() {
        a[(i, i)] += bi;
    }
    MrfParams::new(a, Domain::ZeroOne)
}

/// `{0,1}` RBM as a plain `{0,1}` MRF over `(v, h)`: biases on the diagonal,
/// weights split across the off-diagonal blocks.
pub fn rbm_bits_to_mrf(params: &RbmParams) -> Result<MrfParams> {
    params_domain(params, Domain::ZeroOne)?;
    let (m, p) = (params.m(), params.p());
    let mut a = Matrix::zeros(m + p, m + p);
    for i in 0..m {
        a[(i, i)] = params.visible_bias()[i];
        for j in 0..p {
            let w = 0.5 * params.weights()[(i, j)];
            a[(i, m + j)] = w;
            a[(m + j, i)] = w;
        }
    }
    for j in 0..p {
        a[(m + j, m + j)] = params.hidden_bias()[j];
    }
    MrfParams::new(a, Domain::ZeroOne)
}

fn params_domain(params: &RbmParams, domain: Domain) -> Result<()> {
    if params.domain() != domain {
        return Err(Error::DomainMismatch {
            expected: domain,
            found: params.domain(),
        });
    }
    Ok(())
}

/// Any instance rewritten as a pure ±1 quadratic form, with the bookkeeping to
/// map corners and scores back.
///
/// `original score = embedded score + offset`; when `auxiliary` is set, the
/// first embedded coordinate is a clamp variable and every original corner
/// corresponds to exactly two embedded corners (`x` and `−x`).
#[derive(Clone, Debug)]
pub struct Embedding {
    pub mrf: MrfParams,
    pub offset: f64,
    pub auxiliary: bool,
    pub source_domain: Domain,
}

impl Embedding {
    pub fn of_mrf(params: &MrfParams) -> Result<Self> {
        match params.domain() {
            Domain::PlusMinusOne => Ok(Self {
                mrf: params.clone(),
                offset: 0.0,
                auxiliary: false,
                source_domain: Domain::PlusMinusOne,
            }),
            Domain::ZeroOne => {
                let (hyp, red) = bits_to_hyp(params)?;
                Ok(Self {
                    mrf: fold_linear_hyp(&hyp, &red)?,
                    offset: red.c,
                    auxiliary: true,
                    source_domain: Domain::ZeroOne,
                })
            }
        }
    }

    /// Variables of the recovered corner are ordered `(v, h)`.
    pub fn of_rbm(params: &RbmParams) -> Result<Self> {
        match params.domain() {
            Domain::PlusMinusOne => Ok(Self {
                mrf: crate::model::rbm_to_mrf(params)?,
                offset: 0.0,
                auxiliary: true,
                source_domain: Domain::PlusMinusOne,
            }),
            Domain::ZeroOne => Self::of_mrf(&rbm_bits_to_mrf(params)?),
        }
    }

    /// Number of original variables.
    pub fn source_len(&self) -> usize {
        self.mrf.n() - usize::from(self.auxiliary)
    }

    /// Maps an embedded ±1 corner back to the original variables and domain.
    pub fn recover(&self, x: &Assignment) -> Assignment {
        let canon = if self.auxiliary {
            let c = canonicalize_auxiliary(x);
            Assignment::from_valid(c.values()[1..].to_vec(), Domain::PlusMinusOne)
        } else {
            x.clone()
        };
        canon.to_domain(self.source_domain)
    }

    pub fn source_score(&self, embedded_score: f64) -> f64 {
        embedded_score + self.offset
    }

    /// `log Z(original) = log Z(embedded) + offset − this`.
    pub fn log_multiplicity(&self) -> f64 {
        if self.auxiliary {
            std::f64::consts::LN_2
        } else {
            0.0
        }
    }
}
