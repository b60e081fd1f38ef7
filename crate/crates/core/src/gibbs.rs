//! Gibbs-family baselines: single-site Gibbs on ±1 MRFs, block Gibbs on RBMs,
//! annealed Gibbs with a linear temperature schedule, and annealed Gibbs
//! started from relax-and-round samples (rrr-AG).
//!
//! Temperature `T` divides the score, so the chain targets `exp(xᵀAx / T)`.

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::model::{canonicalize_auxiliary, Assignment, Domain, MrfParams, RbmParams};
use crate::numeric::logistic;
use crate::rng::{self, derive_seed, Rng};
use crate::rounding::rrr_map_sample;

const RESYNC_SWEEPS: usize = 1024;

/// Which coordinates a chain may resample.
///
/// On an embedded RBM the auxiliary coordinate 0 must stay at +1: letting it
/// move adds a global sign-flip move that the original model does not have,
/// and the chain stops sampling the RBM.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Clamp {
    #[default]
    None,
    /// Coordinate 0 is held at +1; starts are canonicalized to satisfy this.
    Auxiliary,
}

impl Clamp {
    fn first_free(self) -> usize {
        match self {
            Clamp::None => 0,
            Clamp::Auxiliary => 1,
        }
    }

    /// Maps a start state onto one the chain accepts without changing its score.
    pub fn prepare(self, x: &Assignment) -> Assignment {
        match self {
            Clamp::None => x.clone(),
            Clamp::Auxiliary => canonicalize_auxiliary(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealSchedule {
    temperatures: Vec<f64>,
}

impl AnnealSchedule {
    /// `steps` temperatures interpolated linearly from `t_high` down to 1.0.
    /// A single step is just `[1.0]`; zero steps give an empty schedule.
    pub fn linear(t_high: f64, steps: usize) -> Result<Self> {
        if !(t_high.is_finite() && t_high >= 1.0) {
            return Err(Error::InvalidOption(format!(
                "starting temperature must be finite and at least 1, got {t_high}"
            )));
        }
        let temperatures = match steps {
            0 => Vec::new(),
            1 => vec![1.0],
            _ => {
                let last = (steps - 1) as f64;
                (0..steps)
                    .map(|k| {
                        if k + 1 == steps {
                            1.0
                        } else {
                            t_high + (1.0 - t_high) * k as f64 / last
                        }
                    })
                    .collect()
            }
        };
        Ok(Self { temperatures })
    }

    pub fn constant(steps: usize) -> Self {
        Self {
            temperatures: vec![1.0; steps],
        }
    }

    pub fn from_temperatures(temperatures: Vec<f64>) -> Result<Self> {
        let ok = temperatures.iter().all(|&t| t > 0.0)
            && temperatures.windows(2).all(|w| w[1] <= w[0])
            && temperatures.last().is_none_or(|&t| t == 1.0);
        if !ok {
            return Err(Error::InvalidOption(
                "schedule must be positive, non-increasing and end at 1.0".into(),
            ));
        }
        Ok(Self { temperatures })
    }

    pub fn temperatures(&self) -> &[f64] {
        &self.temperatures
    }

    pub fn len(&self) -> usize {
        self.temperatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.temperatures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainState {
    pub x: Assignment,
    pub score: f64,
    /// Highest-scoring state seen so far, including the initial one.
    pub best: Assignment,
    pub best_score: f64,
    pub sweep_count: usize,
    /// Score after each sweep.
    pub score_trace: Vec<f64>,
}

impl ChainState {
    pub fn new(params: &MrfParams, x: Assignment) -> Result<Self> {
        let score = crate::model::score(params, &x)?;
        Ok(Self {
            best: x.clone(),
            x,
            score,
            best_score: score,
            sweep_count: 0,
            score_trace: Vec::new(),
        })
    }

    fn record(&mut self, x: &[i8], score: f64) {
        self.x = Assignment::from_valid(x.to_vec(), Domain::PlusMinusOne);
        self.score = score;
        self.sweep_count += 1;
        self.score_trace.push(score);
        if score > self.best_score {
            self.best_score = score;
            self.best = self.x.clone();
        }
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidOption(format!(
            "temperature must be positive, got {t}"
        )))
    }
}

/// `P(xᵢ = +1 | x₋ᵢ) = logistic(4·Σ_{j≠i} Aᵢⱼxⱼ / T)`: flipping `xᵢ` changes
/// the score by `2xᵢ·Σ_{j≠i}Aᵢⱼxⱼ` twice over (row and column).
pub fn gibbs_conditional(
    params: &MrfParams,
    x: &Assignment,
    i: usize,
    temperature: f64,
) -> Result<f64> {
    params.require_domain(Domain::PlusMinusOne)?;
    params.check_assignment(x)?;
    check_temperature(temperature)?;
    if i >= params.n() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: params.n(),
        });
    }
    let local: f64 = params
        .matrix()
        .row(i)
        .iter()
        .zip(x.values())
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, (a, &xj))| a * f64::from(xj))
        .sum();
    Ok(logistic(4.0 * local / temperature))
}

/// Systematic-scan single-site Gibbs chain over ±1 variables with a cached
/// field `Ax`, so one sweep costs one matrix-vector product.
pub struct GibbsChain<'a> {
    a: &'a Matrix,
    x: Vec<i8>,
    field: Vec<f64>,
    first_free: usize,
    sweeps_since_sync: usize,
}

impl<'a> GibbsChain<'a> {
    pub fn new(params: &'a MrfParams, init: &Assignment) -> Result<Self> {
        Self::clamped(params, init, Clamp::None)
    }

    /// A chain that never resamples the coordinates held by `clamp`; `init`
    /// must already respect it (see [`Clamp::prepare`]).
    pub fn clamped(params: &'a MrfParams, init: &Assignment, clamp: Clamp) -> Result<Self> {
        params.require_domain(Domain::PlusMinusOne)?;
        params.check_assignment(init)?;
        if clamp == Clamp::Auxiliary && init.values().first() != Some(&1) {
            return Err(Error::InvalidOption(
                "a clamped auxiliary coordinate must start at +1".into(),
            ));
        }
        let mut chain = Self {
            a: params.matrix(),
            x: init.values().to_vec(),
            field: vec![0.0; params.n()],
            first_free: clamp.first_free(),
            sweeps_since_sync: 0,
        };
        chain.resync();
        Ok(chain)
    }

    fn resync(&mut self) {
        let x: Vec<f64> = self.x.iter().map(|&v| f64::from(v)).collect();
        self.field = self.a.mul_vec(&x);
        self.sweeps_since_sync = 0;
    }

    pub fn state(&self) -> &[i8] {
        &self.x
    }

    pub fn score(&self) -> f64 {
        self.x
            .iter()
            .zip(&self.field)
            .map(|(&xi, f)| f64::from(xi) * f)
            .sum()
    }

    /// Resamples every free coordinate once in index order; returns the new score.
    pub fn sweep(&mut self, temperature: f64, rng: &mut Rng) -> f64 {
        let n = self.x.len();
        for i in self.first_free..n {
            let xi = self.x[i];
            let local = self.field[i] - self.a[(i, i)] * f64::from(xi);
            let p = logistic(4.0 * local / temperature);
            let new = if rng.random::<f64>() < p { 1 } else { -1 };
            if new != xi {
                let d = f64::from(new - xi);
                for (j, f) in self.field.iter_mut().enumerate() {
                    *f += self.a[(j, i)] * d;
                }
                self.x[i] = new;
            }
        }
        self.sweeps_since_sync += 1;
        if self.sweeps_since_sync >= RESYNC_SWEEPS {
            self.resync();
        }
        self.score()
    }
}

/// One systematic-scan sweep; appends the new score to the trace.
pub fn gibbs_sweep(
    params: &MrfParams,
    mut state: ChainState,
    temperature: f64,
    rng: &mut Rng,
) -> Result<ChainState> {
    check_temperature(temperature)?;
    let mut chain = GibbsChain::new(params, &state.x)?;
    let s = chain.sweep(temperature, rng);
    state.record(chain.state(), s);
    Ok(state)
}

/// One block-Gibbs sweep on an RBM: all hidden units given `v`, then all
/// visible units given the new `h`. For ±1 units
/// `P(hⱼ = +1 | v) = logistic(2(vᵀW₍·ⱼ₎ + bⱼ)/T)`; for {0,1} units the factor
/// 2 becomes 1 (the score gap between the two values of a unit).
pub fn block_gibbs_rbm_sweep(
    params: &RbmParams,
    v: &Assignment,
    h: &Assignment,
    temperature: f64,
    rng: &mut Rng,
) -> Result<(Assignment, Assignment)> {
    params.check_layers(v, h)?;
    check_temperature(temperature)?;
    let mut v = v.values().to_vec();
    let mut h = h.values().to_vec();
    block_sweep(params, &mut v, &mut h, 1.0 / temperature, rng);
    Ok((
        Assignment::from_valid(v, params.domain()),
        Assignment::from_valid(h, params.domain()),
    ))
}

/// Probability of the high value of one unit whose field (score coefficient) is `field`.
pub(crate) fn unit_high_probability(domain: Domain, field: f64, beta: f64) -> f64 {
    let (lo, hi) = domain.values();
    logistic(beta * f64::from(hi - lo) * field)
}

/// Block sweep at inverse temperature `beta` (β = 0 samples uniformly).
pub(crate) fn block_sweep(params: &RbmParams, v: &mut [i8], h: &mut [i8], beta: f64, rng: &mut Rng) {
    let domain = params.domain();
    let (lo, hi) = domain.values();
    let w = params.weights();
    let mut hidden_field = params.hidden_bias().to_vec();
    for (i, &vi) in v.iter().enumerate() {
        if vi != 0 {
            let vi = f64::from(vi);
            for (f, wij) in hidden_field.iter_mut().zip(w.row(i)) {
                *f += vi * wij;
            }
        }
    }
    for (hj, &f) in h.iter_mut().zip(&hidden_field) {
        let p = unit_high_probability(domain, f, beta);
        *hj = if rng.random::<f64>() < p { hi } else { lo };
    }
    for (i, vi) in v.iter_mut().enumerate() {
        let f = params.visible_bias()[i]
            + w.row(i)
                .iter()
                .zip(h.iter())
                .map(|(wij, &hj)| wij * f64::from(hj))
                .sum::<f64>();
        let p = unit_high_probability(domain, f, beta);
        *vi = if rng.random::<f64>() < p { hi } else { lo };
    }
}

pub fn uniform_assignment(n: usize, domain: Domain, rng: &mut Rng) -> Assignment {
    let (lo, hi) = domain.values();
    let values = (0..n)
        .map(|_| if rng.random::<bool>() { hi } else { lo })
        .collect();
    Assignment::from_valid(values, domain)
}

/// One sweep per temperature of `schedule`, in order, starting from `init`.
pub fn annealed_gibbs(
    params: &MrfParams,
    schedule: &AnnealSchedule,
    init: &Assignment,
    seed: u64,
) -> Result<ChainState> {
    annealed_gibbs_clamped(params, schedule, init, Clamp::None, seed)
}

/// [`annealed_gibbs`] with the coordinates in `clamp` held fixed.
pub fn annealed_gibbs_clamped(
    params: &MrfParams,
    schedule: &AnnealSchedule,
    init: &Assignment,
    clamp: Clamp,
    seed: u64,
) -> Result<ChainState> {
    let mut state = ChainState::new(params, init.clone())?;
    let mut chain = GibbsChain::clamped(params, init, clamp)?;
    let mut rng = rng::seeded(seed);
    state.score_trace.reserve(schedule.len());
    for &t in schedule.temperatures() {
        let s = chain.sweep(t, &mut rng);
        state.record(chain.state(), s);
    }
    Ok(state)
}

fn best_chain(states: Vec<ChainState>) -> ChainState {
    states
        .into_iter()
        .reduce(|best, s| if s.best_score > best.best_score { s } else { best })
        .expect("at least one chain")
}

fn check_chains(chains: usize) -> Result<()> {
    if chains == 0 {
        return Err(Error::InvalidOption("at least one chain is required".into()));
    }
    Ok(())
}

/// Plain annealed Gibbs: `chains` independent chains from uniform random
/// starts. Chain `c` draws its start and its moves from `derive_seed(seed, c)`.
pub fn annealed_gibbs_uniform(
    params: &MrfParams,
    schedule: &AnnealSchedule,
    chains: usize,
    clamp: Clamp,
    seed: u64,
) -> Result<ChainState> {
    check_chains(chains)?;
    params.require_domain(Domain::PlusMinusOne)?;
    let states = (0..chains)
        .into_par_iter()
        .map(|c| {
            let chain_seed = derive_seed(seed, c as u64);
            let init = uniform_assignment(params.n(), Domain::PlusMinusOne, &mut rng::stream(chain_seed, 1));
            annealed_gibbs_clamped(params, schedule, &clamp.prepare(&init), clamp, chain_seed)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(best_chain(states))
}

/// Annealed Gibbs from `chains` relax-and-round samples of `x`; returns the
/// chain that found the highest score (the earliest chain on ties).
pub fn rrr_ag(
    params: &MrfParams,
    x: &Matrix,
    schedule: &AnnealSchedule,
    chains: usize,
    seed: u64,
) -> Result<ChainState> {
    rrr_ag_clamped(params, x, schedule, chains, Clamp::None, seed)
}

/// [`rrr_ag`] with the coordinates in `clamp` held fixed. Rounded starts are
/// passed through [`Clamp::prepare`] first.
pub fn rrr_ag_clamped(
    params: &MrfParams,
    x: &Matrix,
    schedule: &AnnealSchedule,
    chains: usize,
    clamp: Clamp,
    seed: u64,
) -> Result<ChainState> {
    check_chains(chains)?;
    check_dim(params.n(), x.rows())?;
    let batch = rrr_map_sample(params, x, chains, seed)?;
    let states = batch
        .samples
        .par_iter()
        .enumerate()
        .map(|(c, init)| {
            annealed_gibbs_clamped(params, schedule, &clamp.prepare(init), clamp, derive_seed(seed, c as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(best_chain(states))
}
