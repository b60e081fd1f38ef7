//! Randomized hyperplane rounding and its exact distribution at width 2.
//!
//! Rounding draws `g` uniformly from the unit sphere and sets
//! `xᵢ = sign(Xᵢᵀg)` with `sign(0) = +1`. At width 2 write `g = (cos γ, sin γ)`
//! and `θᵢ` for the direction of row `i`; then `xᵢ = +1` exactly on the half
//! circle `(θᵢ − π/2, θᵢ + π/2)`. The `2n` boundary angles `θᵢ ± π/2` cut the
//! circle into at most `2n` arcs, each carrying one sign pattern, and the
//! probability of a pattern is its arc length over `2π`.
//!
//! [`RoundingDistributionK2::build`] sorts the boundaries once (O(n log n)).
//! Queries work on boundary *indices* rather than raw angles, so
//! [`px_query`] and [`enumerate_support_k2`] agree exactly.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::model::{quadratic_form_i8, Assignment, Domain, MrfParams};
use crate::rng::{self, Rng};

/// Rows shorter than this carry no direction.
pub const DEGENERATE_NORM: f64 = 1e-12;
/// Boundary angles closer than this are merged.
pub const ANGLE_MERGE_TOL: f64 = 1e-12;

/// Uniform direction on the unit sphere in `k` dimensions.
pub fn random_unit_vector(k: usize, rng: &mut Rng) -> Vec<f64> {
    assert!(k >= 1, "sphere dimension must be positive");
    loop {
        let g: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm >= DEGENERATE_NORM {
            return g.into_iter().map(|v| v / norm).collect();
        }
    }
}

fn round_row_signs(x: &Matrix, g: &[f64]) -> Vec<i8> {
    (0..x.rows())
        .map(|i| {
            let proj: f64 = x.row(i).iter().zip(g).map(|(a, b)| a * b).sum();
            if proj >= 0.0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// `xᵢ = sign(Xᵢᵀg)`, with `sign(0) = +1`.
pub fn round_once(x: &Matrix, g: &[f64]) -> Result<Assignment> {
    check_dim(x.cols(), g.len())?;
    Ok(Assignment::from_valid(round_row_signs(x, g), Domain::PlusMinusOne))
}

/// Rounded samples with their scores.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub samples: Vec<Assignment>,
    pub scores: Vec<f64>,
    pub seed: u64,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Highest-scoring sample; the earliest one on ties.
    pub fn best(&self) -> Option<(&Assignment, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &s) in self.scores.iter().enumerate() {
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        best.map(|(i, s)| (&self.samples[i], s))
    }
}

/// Draws `count` independent rounded samples of `x` under `params`.
///
/// Directions are drawn sequentially from one seeded generator, then rounding
/// and scoring run in parallel, so the batch depends only on the seed.
pub fn rrr_map_sample(
    params: &MrfParams,
    x: &Matrix,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    params.require_domain(Domain::PlusMinusOne)?;
    check_dim(params.n(), x.rows())?;
    if count == 0 {
        return Err(Error::InvalidOption("sample count must be positive".into()));
    }
    if x.cols() == 0 {
        return Err(Error::InvalidOption("relaxed solution has width 0".into()));
    }
    let mut rng = rng::seeded(seed);
    let directions: Vec<Vec<f64>> = (0..count)
        .map(|_| random_unit_vector(x.cols(), &mut rng))
        .collect();
    let a = params.matrix();
    let (samples, scores) = directions
        .par_iter()
        .map(|g| {
            let signs = round_row_signs(x, g);
            let s = quadratic_form_i8(a, &signs);
            (Assignment::from_valid(signs, Domain::PlusMinusOne), s)
        })
        .unzip();
    Ok(SampleBatch {
        samples,
        scores,
        seed,
    })
}

/// Exact rounding distribution of a width-2 solution.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundingDistributionK2 {
    n: usize,
    /// Distinct boundary angles in `[0, 2π)`, ascending.
    angles: Vec<f64>,
    /// `row_order[offsets[j]..offsets[j + 1]]` are the rows with a boundary at
    /// `angles[j]`; a non-degenerate row appears twice overall.
    row_order: Vec<usize>,
    offsets: Vec<usize>,
    /// Per row: boundary indices `(enter, leave)` of its +1 half circle.
    /// `None` for degenerate rows.
    row_bounds: Vec<Option<(usize, usize)>>,
    degenerate_rows: Vec<usize>,
}

fn normalize_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl RoundingDistributionK2 {
    pub fn build(x: &Matrix) -> Result<Self> {
        if x.cols() != 2 {
            return Err(Error::UnsupportedWidth(x.cols()));
        }
        let n = x.rows();
        // (angle, row, is_enter)
        let mut events: Vec<(f64, usize, bool)> = Vec::with_capacity(2 * n);
        let mut degenerate_rows = Vec::new();
        for i in 0..n {
            let (c, s) = (x[(i, 0)], x[(i, 1)]);
            if c.hypot(s) < DEGENERATE_NORM {
                degenerate_rows.push(i);
                continue;
            }
            let theta = s.atan2(c);
            events.push((normalize_angle(theta - FRAC_PI_2), i, true));
            events.push((normalize_angle(theta + FRAC_PI_2), i, false));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut angles: Vec<f64> = Vec::new();
        let mut group_of_event = Vec::with_capacity(events.len());
        for &(angle, _, _) in &events {
            match angles.last() {
                Some(&last) if angle - last <= ANGLE_MERGE_TOL => {}
                _ => angles.push(angle),
            }
            group_of_event.push(angles.len() - 1);
        }
        // merge across the 2π wrap
        if angles.len() > 1 && angles[0] + TAU - angles[angles.len() - 1] <= ANGLE_MERGE_TOL {
            let last = angles.len() - 1;
            angles.pop();
            for g in group_of_event.iter_mut() {
                if *g == last {
                    *g = 0;
                }
            }
        }

        let b = angles.len();
        let mut offsets = vec![0usize; b + 1];
        for &g in &group_of_event {
            offsets[g + 1] += 1;
        }
        for j in 0..b {
            offsets[j + 1] += offsets[j];
        }
        let mut fill = offsets.clone();
        let mut row_order = vec![0usize; events.len()];
        let mut row_bounds: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut enter = vec![usize::MAX; n];
        let mut leave = vec![usize::MAX; n];
        for (&(_, row, is_enter), &g) in events.iter().zip(&group_of_event) {
            row_order[fill[g]] = row;
            fill[g] += 1;
            if is_enter {
                enter[row] = g;
            } else {
                leave[row] = g;
            }
        }
        for (i, bound) in row_bounds.iter_mut().enumerate() {
            if enter[i] != usize::MAX {
                *bound = Some((enter[i], leave[i]));
            }
        }
        Ok(Self {
            n,
            angles,
            row_order,
            offsets,
            row_bounds,
            degenerate_rows,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn multiplicity(&self, boundary: usize) -> usize {
        self.offsets[boundary + 1] - self.offsets[boundary]
    }

    pub fn degenerate_rows(&self) -> &[usize] {
        &self.degenerate_rows
    }

    /// Number of arcs, i.e. the support size (1 when every row is degenerate).
    pub fn arc_count(&self) -> usize {
        self.angles.len().max(1)
    }

    /// Length of arc `j`, from `angles[j]` to the next boundary.
    fn arc_length(&self, j: usize) -> f64 {
        let b = self.angles.len();
        if b == 0 {
            return TAU;
        }
        if j + 1 < b {
            self.angles[j + 1] - self.angles[j]
        } else {
            self.angles[0] + TAU - self.angles[b - 1]
        }
    }

    fn arc_probability(&self, j: usize) -> f64 {
        self.arc_length(j) / TAU
    }

    /// Arcs `[start, start + len)` (mod B) on which row `i` rounds to `sign`.
    fn row_interval(&self, i: usize, sign: i8) -> Option<(usize, usize)> {
        let b = self.angles.len();
        self.row_bounds[i].map(|(enter, leave)| {
            let (s, e) = if sign > 0 { (enter, leave) } else { (leave, enter) };
            (s, (e + b - s) % b)
        })
    }

    /// Index of the arc carrying pattern `x`, if any. O(n).
    fn locate(&self, x: &[i8]) -> Option<usize> {
        let b = self.angles.len();
        if b == 0 {
            return Some(0);
        }
        // circular interval intersection in arc-index space
        let mut current: Option<(usize, usize)> = None;
        for (i, &xi) in x.iter().enumerate() {
            let Some((s2, l2)) = self.row_interval(i, xi) else {
                continue;
            };
            let (s1, l1) = match current {
                None => {
                    current = Some((s2, l2));
                    continue;
                }
                Some(c) => c,
            };
            let d = (s2 + b - s1) % b;
            current = if d < l1 {
                Some((s2, l2.min(l1 - d)))
            } else {
                let back = (s1 + b - s2) % b;
                if back < l2 {
                    Some((s1, l1.min(l2 - back)))
                } else {
                    return None;
                }
            };
            if current.is_some_and(|(_, l)| l == 0) {
                return None;
            }
        }
        match current {
            None => Some(0),
            Some((s, _)) => Some(s),
        }
    }

    /// Sign pattern on arc `j`; degenerate rows take +1.
    fn pattern_on_arc(&self, j: usize) -> Vec<i8> {
        let b = self.angles.len();
        (0..self.n)
            .map(|i| match self.row_interval(i, 1) {
                Some((s, len)) if (j + b - s) % b >= len => -1,
                _ => 1,
            })
            .collect()
    }
}

/// Build the width-2 rounding distribution of `x` (O(n log n)).
pub fn build_px_k2(x: &Matrix) -> Result<RoundingDistributionK2> {
    RoundingDistributionK2::build(x)
}

/// Probability that hyperplane rounding of `x` yields the sign pattern `assignment`.
/// Degenerate rows accept either sign. O(n).
pub fn px_query(dist: &RoundingDistributionK2, x: &Matrix, assignment: &Assignment) -> Result<f64> {
    check_dim(dist.n, x.rows())?;
    check_dim(dist.n, assignment.len())?;
    if assignment.domain() != Domain::PlusMinusOne {
        return Err(Error::DomainMismatch {
            expected: Domain::PlusMinusOne,
            found: assignment.domain(),
        });
    }
    Ok(dist
        .locate(assignment.values())
        .map_or(0.0, |j| dist.arc_probability(j)))
}

/// Every realizable sign pattern with its probability, in sweep order from angle 0.
pub fn enumerate_support_k2(
    dist: &RoundingDistributionK2,
    x: &Matrix,
) -> Result<Vec<(Assignment, f64)>> {
    check_dim(dist.n, x.rows())?;
    let b = dist.angles.len();
    if b == 0 {
        return Ok(vec![(
            Assignment::from_valid(vec![1; dist.n], Domain::PlusMinusOne),
            1.0,
        )]);
    }
    let mut pattern = dist.pattern_on_arc(0);
    let mut out = Vec::with_capacity(b);
    for j in 0..b {
        if j > 0 {
            // crossing boundary j flips every row that has a boundary there
            for &row in &dist.row_order[dist.offsets[j]..dist.offsets[j + 1]] {
                pattern[row] = -pattern[row];
            }
        }
        out.push((
            Assignment::from_valid(pattern.clone(), Domain::PlusMinusOne),
            dist.arc_probability(j),
        ));
    }
    Ok(out)
}

/// Exact `E[xᵀAx]` under width-2 rounding of `x`.
pub fn expected_rounded_score(params: &MrfParams, x: &Matrix) -> Result<f64> {
    let dist = build_px_k2(x)?;
    let support = enumerate_support_k2(&dist, x)?;
    Ok(support
        .iter()
        .map(|(a, p)| p * quadratic_form_i8(params.matrix(), a.values()))
        .sum())
}

/// Angle of the direction of each row, for diagnostics.
pub fn row_angles(x: &Matrix) -> Vec<f64> {
    (0..x.rows())
        .map(|i| normalize_angle(x[(i, 1)].atan2(x[(i, 0)])))
        .collect()
}
