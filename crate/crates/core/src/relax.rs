//! Low-rank relaxation of width `k`: maximize `tr(XᵀAX)` over `n×k` matrices
//! whose rows lie in the Euclidean unit ball.
//!
//! Width 1 is the box-constrained QP and width `n` is the factored SDP. The
//! objective is non-convex in general; we run projected gradient ascent from
//! several random starts and keep the best stationary point.

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::model::{Domain, MrfParams};
use crate::rng::{self, Rng};

/// Iterations compared by the stall test.
pub const STALL_WINDOW: usize = 5;
const POWER_ITERS: usize = 50;
const POWER_TOL: f64 = 1e-6;
const LIPSCHITZ_INFLATION: f64 = 1.01;
const MAX_HALVINGS: usize = 30;
const ARMIJO: f64 = 1e-4;
/// Initial backtracking step, in units of `1/L`.
const BACKTRACK_START: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    /// `η = 1/L` with `L` from [`estimate_lipschitz`].
    FixedInverseLipschitz,
    /// Armijo backtracking on the ascent objective, halving up to 30 times.
    Backtracking,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LrpOptions {
    pub width: usize,
    pub max_iters: usize,
    /// Stop when the objective moved less than `rel_tol · max(|f|, 1)` over
    /// the last [`STALL_WINDOW`] iterations.
    pub rel_tol: f64,
    pub step_rule: StepRule,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for LrpOptions {
    fn default() -> Self {
        Self {
            width: 2,
            max_iters: 10_000,
            rel_tol: 1e-8,
            step_rule: StepRule::FixedInverseLipschitz,
            restarts: 8,
            seed: 0,
        }
    }
}

impl LrpOptions {
    pub fn with_width(width: usize) -> Self {
        Self {
            width,
            ..Self::default()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.width == 0 || self.width > n {
            return Err(Error::InvalidOption(format!(
                "width must lie in 1..={n}, got {}",
                self.width
            )));
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(Error::InvalidOption("rel_tol must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidOption("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxedSolution {
    pub x: Matrix,
    pub objective: f64,
    /// Gradient steps taken by the returned run.
    pub iterations: usize,
    /// Objective at initialization followed by one entry per step.
    pub trace: Vec<f64>,
    /// Gradient steps summed over all restarts.
    pub total_iterations: usize,
}

impl RelaxedSolution {
    pub fn width(&self) -> usize {
        self.x.cols()
    }
}

/// `tr(XᵀAX) = Σᵢⱼ Aᵢⱼ⟨Xᵢ, Xⱼ⟩`.
pub fn lrp_objective(a: &Matrix, x: &Matrix) -> Result<f64> {
    check_dim(a.rows(), a.cols())?;
    check_dim(a.rows(), x.rows())?;
    Ok(x.dot(&a.matmul(x)))
}

/// Gradient `2AX` of the objective for symmetric `A`.
pub fn lrp_gradient(a: &Matrix, x: &Matrix) -> Result<Matrix> {
    check_dim(a.rows(), a.cols())?;
    check_dim(a.rows(), x.rows())?;
    Ok(a.matmul(x).scaled(2.0))
}

/// Row-wise Euclidean projection onto the unit ball.
pub fn project_rows(x: &Matrix) -> Matrix {
    let mut out = x.clone();
    project_rows_in_place(&mut out);
    out
}

fn project_rows_in_place(x: &mut Matrix) {
    for i in 0..x.rows() {
        let row = x.row_mut(i);
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1.0 {
            row.iter_mut().for_each(|v| *v /= norm);
        }
    }
}

/// Upper estimate of the gradient's Lipschitz constant `2‖A‖₂`: power
/// iteration on the symmetric `A` from a fixed start, inflated by 1%.
pub fn estimate_lipschitz(a: &Matrix) -> f64 {
    let n = a.rows();
    if n == 0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 1.618).sin()).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERS {
        let w = a.mul_vec(&v);
        let w_norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if w_norm == 0.0 {
            return 0.0;
        }
        let converged = (w_norm - estimate).abs() <= POWER_TOL * w_norm;
        estimate = w_norm;
        v = w.into_iter().map(|x| x / w_norm).collect();
        if converged {
            break;
        }
    }
    2.0 * estimate * LIPSCHITZ_INFLATION
}

/// Rows drawn uniformly from the unit ball: Gaussian direction, radius `U^(1/k)`.
pub fn random_ball_rows(n: usize, k: usize, rng: &mut Rng) -> Matrix {
    let mut x = Matrix::zeros(n, k);
    for i in 0..n {
        let row = x.row_mut(i);
        let norm = loop {
            for v in row.iter_mut() {
                *v = StandardNormal.sample(rng);
            }
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break norm;
            }
        };
        let radius = rng.random::<f64>().powf(1.0 / k as f64);
        row.iter_mut().for_each(|v| *v *= radius / norm);
    }
    x
}

struct Run {
    x: Matrix,
    objective: f64,
    iterations: usize,
    trace: Vec<f64>,
}

fn stalled(trace: &[f64], rel_tol: f64) -> bool {
    let t = trace.len();
    if t <= STALL_WINDOW {
        return false;
    }
    let (now, then) = (trace[t - 1], trace[t - 1 - STALL_WINDOW]);
    (now - then).abs() <= rel_tol * now.abs().max(1.0)
}

fn ascend(a: &Matrix, x0: Matrix, opts: &LrpOptions, lipschitz: f64) -> Run {
    let step = if lipschitz > 0.0 { 1.0 / lipschitz } else { 1.0 };
    let mut x = x0;
    let mut ax = a.matmul(&x);
    let mut f = x.dot(&ax);
    let mut trace = vec![f];
    let mut iterations = 0;
    let candidate = |x: &Matrix, ax: &Matrix, eta: f64| {
        let mut c = x.clone();
        for i in 0..x.rows() {
            for (cv, g) in c.row_mut(i).iter_mut().zip(ax.row(i)) {
                *cv += 2.0 * eta * g;
            }
        }
        project_rows_in_place(&mut c);
        c
    };
    while iterations < opts.max_iters {
        match opts.step_rule {
            StepRule::FixedInverseLipschitz => {
                x = candidate(&x, &ax, step);
                ax = a.matmul(&x);
                f = x.dot(&ax);
            }
            StepRule::Backtracking => {
                let mut eta = BACKTRACK_START * step;
                for _ in 0..=MAX_HALVINGS {
                    let c = candidate(&x, &ax, eta);
                    let cax = a.matmul(&c);
                    let cf = c.dot(&cax);
                    // ⟨2AX, C − X⟩
                    let lin = 2.0 * (ax.dot(&c) - ax.dot(&x));
                    if cf >= f + ARMIJO * lin {
                        x = c;
                        ax = cax;
                        f = cf;
                        break;
                    }
                    eta *= 0.5;
                }
            }
        }
        iterations += 1;
        trace.push(f);
        if stalled(&trace, opts.rel_tol) {
            break;
        }
    }
    Run {
        x,
        objective: f,
        iterations,
        trace,
    }
}

/// Projected gradient ascent on the width-`k` relaxation; best of
/// `opts.restarts` independent runs. Restart `r` uses generator stream `r` of
/// `opts.seed`, so results do not depend on thread scheduling.
pub fn solve_lrp(params: &MrfParams, opts: &LrpOptions) -> Result<RelaxedSolution> {
    params.require_domain(Domain::PlusMinusOne)?;
    let n = params.n();
    opts.validate(n)?;
    let a = params.matrix();
    let lipschitz = estimate_lipschitz(a);
    let runs: Vec<Run> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(opts.seed, r as u64);
            let x0 = random_ball_rows(n, opts.width, &mut rng);
            ascend(a, x0, opts, lipschitz)
        })
        .collect();
    let total_iterations = runs.iter().map(|r| r.iterations).sum();
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.objective > best.objective { r } else { best })
        .expect("restarts >= 1");
    let objective = lrp_objective(a, &best.x)?;
    Ok(RelaxedSolution {
        x: best.x,
        objective,
        iterations: best.iterations,
        trace: best.trace,
        total_iterations,
    })
}
