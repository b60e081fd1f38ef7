//! Seeded RBM instance generators.

use rand::seq::index;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{Domain, RbmParams};
use crate::rng;

/// ±1 RBM with every weight and bias drawn independently from N(0, 1).
/// Draw order: `W` row-major, then `a`, then `b`.
pub fn gen_random_rbm(m: usize, p: usize, seed: u64) -> Result<RbmParams> {
    if m == 0 || p == 0 {
        return Err(Error::InvalidOption(format!(
            "RBM dimensions must be positive, got m={m}, p={p}"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut draw = |len: usize| -> Vec<f64> {
        (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
    };
    let w = Matrix::from_vec(m, p, draw(m * p))?;
    let a = draw(m);
    let b = draw(p);
    RbmParams::new(w, a, b, Domain::PlusMinusOne)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardRbmOptions {
    pub pairs: usize,
    pub couple: f64,
    pub bias: f64,
}

impl Default for HardRbmOptions {
    fn default() -> Self {
        Self {
            pairs: 3,
            couple: 5000.0,
            bias: 500.0,
        }
    }
}

/// A planted (visible, hidden) pair of a hard instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlantedPair {
    pub visible: usize,
    pub hidden: usize,
}

/// Random instance with `pairs` disjoint (visible, hidden) pairs whose weight is
/// set to `couple` and whose two biases are set to `bias`. Such a pair sitting at
/// (−1, −1) is a deep local optimum for single-flip samplers.
pub fn gen_hard_rbm(m: usize, p: usize, opts: &HardRbmOptions, seed: u64) -> Result<RbmParams> {
    gen_hard_rbm_planted(m, p, opts, seed).map(|(rbm, _)| rbm)
}

pub fn gen_hard_rbm_planted(
    m: usize,
    p: usize,
    opts: &HardRbmOptions,
    seed: u64,
) -> Result<(RbmParams, Vec<PlantedPair>)> {
    if opts.pairs > m.min(p) {
        return Err(Error::InvalidOption(format!(
            "{} planted pairs need at least that many visible and hidden units (m={m}, p={p})",
            opts.pairs
        )));
    }
    if !opts.couple.is_finite() || !opts.bias.is_finite() {
        return Err(Error::NonFinite("hard-instance options"));
    }
    let mut rbm = gen_random_rbm(m, p, seed)?;
    let mut rng = rng::stream(seed, 1);
    let rows = index::sample(&mut rng, m, opts.pairs).into_vec();
    let cols = index::sample(&mut rng, p, opts.pairs).into_vec();
    let pairs: Vec<PlantedPair> = rows
        .into_iter()
        .zip(cols)
        .map(|(visible, hidden)| PlantedPair { visible, hidden })
        .collect();
    let (w, a, b) = rbm.parts_mut();
    for pair in &pairs {
        w[(pair.visible, pair.hidden)] = opts.couple;
        a[pair.visible] = opts.bias;
        b[pair.hidden] = opts.bias;
    }
    Ok((rbm, pairs))
}
