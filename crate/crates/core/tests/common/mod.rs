//! Independent oracles shared by the integration tests. Nothing here calls
//! into the enumeration or estimation code under test.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use rrr_core::{Matrix, MrfParams, RbmParams};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ 0x5eed_0f7e57)
}

/// Every ±1 vector of length `n`, in binary-counter order (bit i of the
/// counter drives coordinate i).
pub fn pm1_corners(n: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..1u64 << n).map(move |c| (0..n).map(|i| if c >> i & 1 == 1 { 1 } else { -1 }).collect())
}

pub fn bit_corners(n: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..1u64 << n).map(move |c| (0..n).map(|i| (c >> i & 1) as i8).collect())
}

/// `xᵀAx` by the textbook double sum over the matrix as given.
pub fn naive_quadratic(a: &[Vec<f64>], x: &[i8]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, aij) in row.iter().enumerate() {
            s += aij * f64::from(x[i]) * f64::from(x[j]);
        }
    }
    s
}

pub fn naive_rbm_score(w: &[Vec<f64>], a: &[f64], b: &[f64], v: &[i8], h: &[i8]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        s += a[i] * f64::from(v[i]);
        for j in 0..h.len() {
            s += f64::from(v[i]) * w[i][j] * f64::from(h[j]);
        }
    }
    for j in 0..h.len() {
        s += b[j] * f64::from(h[j]);
    }
    s
}

/// Log-sum-exp with a two-pass max shift and Neumaier-compensated summation.
pub fn lse(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = (v - m).exp();
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    }
    m + (sum + comp).ln()
}

/// `log Z` of an MRF by listing every corner.
pub fn naive_logz(params: &MrfParams) -> f64 {
    let a = params.matrix().to_nested();
    let corners: Box<dyn Iterator<Item = Vec<i8>>> = match params.domain() {
        rrr_core::Domain::PlusMinusOne => Box::new(pm1_corners(params.n())),
        rrr_core::Domain::ZeroOne => Box::new(bit_corners(params.n())),
    };
    let scores: Vec<f64> = corners.map(|x| naive_quadratic(&a, &x)).collect();
    lse(&scores)
}

/// `log Z` of an RBM by listing every `(v, h)`.
pub fn naive_rbm_logz(r: &RbmParams) -> f64 {
    let w = r.weights().to_nested();
    let (m, p) = (r.m(), r.p());
    let corners = |n| -> Vec<Vec<i8>> {
        match r.domain() {
            rrr_core::Domain::PlusMinusOne => pm1_corners(n).collect(),
            rrr_core::Domain::ZeroOne => bit_corners(n).collect(),
        }
    };
    let hs = corners(p);
    let mut scores = Vec::new();
    for v in corners(m) {
        for h in &hs {
            scores.push(naive_rbm_score(&w, r.visible_bias(), r.hidden_bias(), &v, h));
        }
    }
    lse(&scores)
}

/// Maximum of `xᵀAx` over ±1 corners by listing them; ties keep the first.
pub fn naive_map(params: &MrfParams) -> (Vec<i8>, f64) {
    let a = params.matrix().to_nested();
    let mut best = (Vec::new(), f64::NEG_INFINITY);
    for x in pm1_corners(params.n()) {
        let s = naive_quadratic(&a, &x);
        if s > best.1 {
            best = (x, s);
        }
    }
    best
}

/// Exact MAP score of a ±1 RBM: for fixed `v` the best `h` takes
/// `hⱼ = sign(vᵀW₍·ⱼ₎ + bⱼ)`, contributing `|vᵀW₍·ⱼ₎ + bⱼ|`.
pub fn rbm_map_score(r: &RbmParams) -> f64 {
    let w = r.weights().to_nested();
    let mut best = f64::NEG_INFINITY;
    for v in pm1_corners(r.m()) {
        let mut s: f64 = v.iter().zip(r.visible_bias()).map(|(&vi, a)| a * f64::from(vi)).sum();
        for (j, bj) in r.hidden_bias().iter().enumerate() {
            let f: f64 = bj + v.iter().zip(&w).map(|(&vi, row)| row[j] * f64::from(vi)).sum::<f64>();
            s += f.abs();
        }
        best = best.max(s);
    }
    best
}

pub fn gaussian_matrix(rows: usize, cols: usize, scale: f64, rng: &mut impl Rng) -> Matrix {
    let normal = Normal::new(0.0, scale).unwrap();
    let data = (0..rows * cols).map(|_| normal.sample(rng)).collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

/// Symmetric matrix with N(0, scale²) entries (diagonal included).
pub fn random_symmetric(n: usize, scale: f64, rng: &mut impl Rng) -> Matrix {
    let g = gaussian_matrix(n, n, scale, rng);
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            a[(i, j)] = g[(i, j)];
            a[(j, i)] = g[(i, j)];
        }
    }
    a
}

/// `GᵀG` for a Gaussian `r × n` matrix `G`: positive semidefinite.
pub fn random_gram(n: usize, r: usize, rng: &mut impl Rng) -> Matrix {
    let g = gaussian_matrix(r, n, 1.0, rng);
    g.transpose().matmul(&g)
}

/// `n × 2` matrix whose rows are uniform directions with norms in `(0.2, 1]`.
pub fn random_width2(n: usize, rng: &mut impl Rng) -> Matrix {
    let mut x = Matrix::zeros(n, 2);
    for i in 0..n {
        let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r: f64 = rng.random_range(0.2..=1.0);
        x[(i, 0)] = r * t.cos();
        x[(i, 1)] = r * t.sin();
    }
    x
}

/// Pearson statistic and degrees of freedom after pooling cells whose
/// expected count is below 5 into a single cell.
pub fn pearson(observed: &[u64], probs: &[f64], total: u64) -> (f64, usize) {
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * total as f64;
        if e < 5.0 {
            pool_o += o as f64;
            pool_e += e;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        cells += 1;
    }
    (stat, cells.saturating_sub(1))
}

/// Upper `level` quantile of the chi-square distribution.
pub fn chi_square_quantile(df: usize, level: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    ChiSquared::new(df.max(1) as f64).unwrap().inverse_cdf(level)
}
