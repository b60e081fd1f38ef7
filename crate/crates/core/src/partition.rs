//! Log-partition estimators: exact enumeration (with the hidden layer summed
//! out analytically for RBMs), annealed importance sampling, the rrr-low lower
//! bound and importance sampling with the rounding distribution as proposal.

use std::collections::HashSet;
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::gibbs::block_sweep;
use crate::matrix::Matrix;
use crate::model::{rbm_score_raw, Domain, MrfParams, RbmParams};
use crate::numeric::{
    log_mean_exp, log_mean_exp_std_err, log_two_cosh, softplus, std_dev, LogSumExp,
};
use crate::oracle::{check_cap, for_each_corner, DEFAULT_ENUMERATION_CAP};
use crate::rng;
use crate::rounding::{build_px_k2, enumerate_support_k2, px_query, rrr_map_sample, RoundingDistributionK2, SampleBatch};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Estimator {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "ais")]
    Ais,
    #[serde(rename = "rrr-low")]
    RrrLow,
    #[serde(rename = "rrr-is")]
    RrrIs,
}

/// Work spent by an estimator. Absent fields do not apply.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperatures: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweeps: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimator: Estimator,
    pub log_z: f64,
    pub budget: Budget,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Standard deviation of the per-run (AIS) or per-sample (IS) log weights.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_weight_std: Option<f64>,
    /// Delta-method standard error of `log_z`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_std_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_secs: Option<f64>,
}

impl EstimateReport {
    pub fn new(estimator: Estimator, log_z: f64, budget: Budget, seed: Option<u64>) -> Self {
        Self {
            estimator,
            log_z,
            budget,
            seed,
            log_weight_std: None,
            log_std_err: None,
            wall_clock_secs: None,
        }
    }

    fn timed(mut self, start: Instant) -> Self {
        self.wall_clock_secs = Some(start.elapsed().as_secs_f64());
        self
    }
}

/// `log Σ_x exp(xᵀAx)` over every corner of the parameter domain (n ≤ 24).
pub fn exact_logz_mrf(params: &MrfParams) -> Result<f64> {
    let mut acc = LogSumExp::new();
    for_each_corner(params, DEFAULT_ENUMERATION_CAP, |_, s| acc.push(s))?;
    Ok(acc.value())
}

/// Exact `log Z` of an RBM, enumerating the visible layer only (m ≤ 24).
///
/// ±1 units: `Z = Σ_v exp(aᵀv) Πⱼ 2cosh(vᵀW₍·ⱼ₎ + bⱼ)`.
/// {0,1} units: `Z = Σ_v exp(aᵀv) Πⱼ (1 + exp(vᵀW₍·ⱼ₎ + bⱼ))`.
pub fn exact_logz_rbm(params: &RbmParams) -> Result<f64> {
    let (m, p) = (params.m(), params.p());
    check_cap("m", m, DEFAULT_ENUMERATION_CAP)?;
    let domain = params.domain();
    let (lo, hi) = domain.values();
    let w = params.weights();
    let a = params.visible_bias();
    let hidden_term: fn(f64) -> f64 = match domain {
        Domain::PlusMinusOne => log_two_cosh,
        Domain::ZeroOne => softplus,
    };
    let mut v = vec![lo; m];
    let fresh = |v: &[i8]| -> (Vec<f64>, f64) {
        let mut act = params.hidden_bias().to_vec();
        let mut lin = 0.0;
        for (i, &vi) in v.iter().enumerate() {
            let vi = f64::from(vi);
            lin += a[i] * vi;
            for (f, wij) in act.iter_mut().zip(w.row(i)) {
                *f += vi * wij;
            }
        }
        (act, lin)
    };
    let (mut act, mut lin) = fresh(&v);
    let mut acc = LogSumExp::new();
    let term = |act: &[f64], lin: f64| lin + act.iter().map(|&t| hidden_term(t)).sum::<f64>();
    acc.push(term(&act, lin));
    for t in 1..(1u64 << m) {
        let i = m - 1 - t.trailing_zeros() as usize;
        let new = if v[i] == lo { hi } else { lo };
        let d = f64::from(new - v[i]);
        v[i] = new;
        if t % 4096 == 0 {
            (act, lin) = fresh(&v);
        } else {
            lin += a[i] * d;
            for (f, wij) in act.iter_mut().zip(w.row(i)) {
                *f += d * wij;
            }
        }
        debug_assert_eq!(act.len(), p);
        acc.push(term(&act, lin));
    }
    Ok(acc.value())
}

/// Annealed importance sampling along `p_β ∝ exp(β·score)`, β linearly spaced
/// on `[0, 1]` with `num_temps` points, one block-Gibbs sweep per temperature.
///
/// Each run starts from an exact uniform draw (β = 0, `log Z₀ = (m+p)·log 2`)
/// and accumulates `Σ (β_{t+1} − β_t)·score(x_t)`. Run `r` uses generator
/// stream `r` of `seed`; weights are reduced in run order.
pub fn ais_logz(
    params: &RbmParams,
    num_temps: usize,
    num_runs: usize,
    seed: u64,
) -> Result<EstimateReport> {
    if num_temps < 2 || num_runs == 0 {
        return Err(Error::InvalidOption(format!(
            "AIS needs at least 2 temperatures and 1 run, got {num_temps} and {num_runs}"
        )));
    }
    let start = Instant::now();
    let (m, p) = (params.m(), params.p());
    let (lo, hi) = params.domain().values();
    let last = (num_temps - 1) as f64;
    let beta = |t: usize| t as f64 / last;
    let log_weights: Vec<f64> = (0..num_runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(seed, r as u64);
            let mut v: Vec<i8> = (0..m).map(|_| if rng.random() { hi } else { lo }).collect();
            let mut h: Vec<i8> = (0..p).map(|_| if rng.random() { hi } else { lo }).collect();
            let mut log_w = 0.0;
            for t in 0..num_temps - 1 {
                log_w += (beta(t + 1) - beta(t)) * rbm_score_raw(params, &v, &h);
                block_sweep(params, &mut v, &mut h, beta(t + 1), &mut rng);
            }
            log_w
        })
        .collect();
    let log_z0 = (m + p) as f64 * std::f64::consts::LN_2;
    let mut report = EstimateReport::new(
        Estimator::Ais,
        log_z0 + log_mean_exp(&log_weights),
        Budget {
            samples: Some(num_runs as u64),
            temperatures: Some(num_temps as u64),
            sweeps: Some((num_runs * (num_temps - 1)) as u64),
        },
        Some(seed),
    );
    report.log_weight_std = Some(std_dev(&log_weights));
    report.log_std_err = (num_runs > 1).then(|| log_mean_exp_std_err(&log_weights));
    Ok(report.timed(start))
}

/// `log Σ exp(score)` over the *distinct* samples of the batch, a lower bound
/// on `log Z`.
pub fn rrr_low(params: &MrfParams, batch: &SampleBatch) -> Result<EstimateReport> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    check_dim(batch.samples.len(), batch.scores.len())?;
    let start = Instant::now();
    let mut seen = HashSet::with_capacity(batch.len());
    let mut acc = LogSumExp::new();
    for (x, &s) in batch.samples.iter().zip(&batch.scores) {
        params.check_assignment(x)?;
        if seen.insert(x) {
            acc.push(s);
        }
    }
    let report = EstimateReport::new(
        Estimator::RrrLow,
        acc.value(),
        Budget {
            samples: Some(batch.len() as u64),
            ..Budget::default()
        },
        Some(batch.seed),
    );
    Ok(report.timed(start))
}

/// Importance sampling of `Z = E_{x∼p_X}[exp(xᵀAx) / p_X(x)]` from an existing batch
/// drawn by rounding `x`.
pub fn rrr_is_from_batch(
    params: &MrfParams,
    dist: &RoundingDistributionK2,
    x: &Matrix,
    batch: &SampleBatch,
) -> Result<EstimateReport> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let start = Instant::now();
    let log_w = batch
        .samples
        .iter()
        .zip(&batch.scores)
        .map(|(a, &s)| {
            let q = px_query(dist, x, a)?;
            if q <= 0.0 {
                return Err(Error::ZeroProposalProbability);
            }
            Ok(s - q.ln())
        })
        .collect::<Result<Vec<f64>>>()?;
    let _ = params;
    let mut report = EstimateReport::new(
        Estimator::RrrIs,
        log_mean_exp(&log_w),
        Budget {
            samples: Some(batch.len() as u64),
            ..Budget::default()
        },
        Some(batch.seed),
    );
    report.log_weight_std = Some(std_dev(&log_w));
    report.log_std_err = (log_w.len() > 1).then(|| log_mean_exp_std_err(&log_w));
    Ok(report.timed(start))
}

/// rrr-IS with `count` fresh samples. Width 2 only.
pub fn rrr_is(params: &MrfParams, x: &Matrix, count: usize, seed: u64) -> Result<EstimateReport> {
    let dist = build_px_k2(x)?;
    let batch = rrr_map_sample(params, x, count, seed)?;
    rrr_is_from_batch(params, &dist, x, &batch)
}

/// The rrr-IS estimator's exact expectation: `log Σ_{x ∈ support} exp(xᵀAx)`.
pub fn rrr_is_exact_support(params: &MrfParams, x: &Matrix) -> Result<f64> {
    check_dim(params.n(), x.rows())?;
    let dist = build_px_k2(x)?;
    let mut acc = LogSumExp::new();
    for (a, _) in enumerate_support_k2(&dist, x)? {
        acc.push(crate::model::score(params, &a)?);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn zero_mrf_is_uniform() {
        let p = MrfParams::new(Matrix::zeros(3, 3), Domain::PlusMinusOne).unwrap();
        assert!((exact_logz_mrf(&p).unwrap() - 3.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn two_variable_closed_form() {
        let c = 0.7;
        let a = Matrix::from_rows(&[vec![0.0, c], vec![c, 0.0]]).unwrap();
        let p = MrfParams::new(a, Domain::PlusMinusOne).unwrap();
        let expected = (2.0 * (2.0 * c).exp() + 2.0 * (-2.0 * c).exp()).ln();
        assert!((exact_logz_mrf(&p).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_rbms() {
        for domain in [Domain::PlusMinusOne, Domain::ZeroOne] {
            let r = RbmParams::zeros(2, 2, domain).unwrap();
            assert!((exact_logz_rbm(&r).unwrap() - 4.0 * LN_2).abs() < 1e-12);
        }
    }

    #[test]
    fn ais_is_exact_on_zero_rbm() {
        let r = RbmParams::zeros(3, 2, Domain::PlusMinusOne).unwrap();
        for seed in [0, 1, 99] {
            let rep = ais_logz(&r, 50, 7, seed).unwrap();
            assert_eq!(rep.log_z, 5.0 * LN_2);
            assert_eq!(rep.log_weight_std, Some(0.0));
        }
        assert!(ais_logz(&r, 1, 7, 0).is_err());
        assert!(ais_logz(&r, 10, 0, 0).is_err());
    }

    #[test]
    fn rrr_low_single_and_duplicate() {
        let p = MrfParams::new(Matrix::identity(2), Domain::PlusMinusOne).unwrap();
        let x = crate::model::Assignment::pm1(vec![1, -1]).unwrap();
        let batch = SampleBatch {
            samples: vec![x.clone(); 5],
            scores: vec![2.0; 5],
            seed: 0,
        };
        assert_eq!(rrr_low(&p, &batch).unwrap().log_z, 2.0);
        let empty = SampleBatch {
            samples: vec![],
            scores: vec![],
            seed: 0,
        };
        assert!(matches!(rrr_low(&p, &empty), Err(Error::EmptyBatch)));
    }

    #[test]
    fn identical_rows_support_is_antipodal_pair() {
        let a = Matrix::from_rows(&[
            vec![0.0, 0.3, -1.0],
            vec![0.3, 0.5, 0.2],
            vec![-1.0, 0.2, 0.0],
        ])
        .unwrap();
        let p = MrfParams::new(a, Domain::PlusMinusOne).unwrap();
        let x = Matrix::from_rows(&[vec![0.6, 0.8], vec![0.6, 0.8], vec![0.6, 0.8]]).unwrap();
        let s = crate::model::score(&p, &crate::model::Assignment::pm1(vec![1, 1, 1]).unwrap()).unwrap();
        let exact = rrr_is_exact_support(&p, &x).unwrap();
        assert!((exact - (LN_2 + s)).abs() < 1e-12);
        assert!(exact <= exact_logz_mrf(&p).unwrap() + 1e-12);
        assert!(matches!(
            rrr_is(&p, &Matrix::zeros(3, 3), 10, 0),
            Err(Error::UnsupportedWidth(3))
        ));
    }
}
