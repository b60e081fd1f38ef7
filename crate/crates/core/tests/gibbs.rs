mod common;

use common::{bit_corners, naive_quadratic, naive_rbm_score, pm1_corners, random_symmetric, rng};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rrr_core::generate::{gen_hard_rbm_planted, gen_random_rbm, HardRbmOptions};
use rrr_core::gibbs::{
    annealed_gibbs, annealed_gibbs_clamped, annealed_gibbs_uniform, block_gibbs_rbm_sweep, gibbs_conditional, rrr_ag,
    rrr_ag_clamped, AnnealSchedule, Clamp, GibbsChain,
};
use rrr_core::oracle::brute_force_map;
use rrr_core::rounding::rrr_map_sample;
use rrr_core::relax::{solve_lrp, LrpOptions};
use rrr_core::{Assignment, Domain, Embedding, MrfParams, RbmParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conditional_is_the_ratio_of_corner_weights(
        n in 1usize..8,
        seed in any::<u64>(),
        bits in any::<u8>(),
        temperature in 0.2f64..20.0,
    ) {
        let a = random_symmetric(n, 1.5, &mut ChaCha20Rng::seed_from_u64(seed));
        let params = MrfParams::new(a.clone(), Domain::PlusMinusOne).unwrap();
        let nested = a.to_nested();
        let x: Vec<i8> = (0..n).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect();
        for i in 0..n {
            let (mut up, mut down) = (x.clone(), x.clone());
            up[i] = 1;
            down[i] = -1;
            let (su, sd) = (naive_quadratic(&nested, &up), naive_quadratic(&nested, &down));
            let oracle = 1.0 / (1.0 + ((sd - su) / temperature).exp());
            let p = gibbs_conditional(&params, &Assignment::pm1(x.clone()).unwrap(), i, temperature).unwrap();
            prop_assert!((p - oracle).abs() < 1e-12, "i={}: {} vs {}", i, p, oracle);
        }
    }

    #[test]
    fn annealed_chain_bookkeeping_is_consistent(seed in any::<u64>(), steps in 0usize..60) {
        let rbm = gen_random_rbm(3, 3, seed).unwrap();
        let emb = Embedding::of_rbm(&rbm).unwrap();
        let schedule = AnnealSchedule::linear(5.0, steps).unwrap();
        let state = annealed_gibbs_uniform(&emb.mrf, &schedule, 3, Clamp::Auxiliary, seed).unwrap();
        let nested = emb.mrf.matrix().to_nested();
        prop_assert_eq!(state.sweep_count, steps);
        prop_assert_eq!(state.score_trace.len(), steps);
        prop_assert!((naive_quadratic(&nested, state.x.values()) - state.score).abs() < 1e-9);
        prop_assert!((naive_quadratic(&nested, state.best.values()) - state.best_score).abs() < 1e-9);
        prop_assert!(state.score_trace.iter().all(|&s| s <= state.best_score + 1e-9));
        prop_assert_eq!(state.x.values()[0], 1);
        prop_assert_eq!(state, annealed_gibbs_uniform(&emb.mrf, &schedule, 3, Clamp::Auxiliary, seed).unwrap());
    }
}

/// The hidden layer drawn by one block sweep must follow the conditional of
/// the embedded single-site sampler with the auxiliary variable at +1.
#[test]
fn block_update_matches_embedded_conditional() {
    const TRIALS: usize = 40_000;
    let rbm = gen_random_rbm(3, 4, 5).unwrap();
    let emb = Embedding::of_rbm(&rbm).unwrap();
    let v = Assignment::pm1(vec![1, -1, 1]).unwrap();
    let h0 = Assignment::pm1(vec![1, 1, -1, -1]).unwrap();
    for temperature in [1.0, 2.5] {
        let mut embedded = vec![1i8];
        embedded.extend_from_slice(v.values());
        embedded.extend_from_slice(h0.values());
        let expected: Vec<f64> = (0..4)
            .map(|j| {
                gibbs_conditional(&emb.mrf, &Assignment::pm1(embedded.clone()).unwrap(), 1 + 3 + j, temperature)
                    .unwrap()
            })
            .collect();
        let mut counts = [0usize; 4];
        let mut r = rrr_core::rng::seeded(77);
        for _ in 0..TRIALS {
            let (_, h) = block_gibbs_rbm_sweep(&rbm, &v, &h0, temperature, &mut r).unwrap();
            for (c, &hj) in counts.iter_mut().zip(h.values()) {
                *c += usize::from(hj == 1);
            }
        }
        for (j, (&c, &p)) in counts.iter().zip(&expected).enumerate() {
            let freq = c as f64 / TRIALS as f64;
            let sigma = (p * (1.0 - p) / TRIALS as f64).sqrt();
            assert!((freq - p).abs() <= 4.0 * sigma + 1e-9, "T={temperature} h{j}: {freq} vs {p}");
        }
    }
}

fn exact_rbm_distribution(rbm: &RbmParams) -> Vec<(Vec<i8>, Vec<i8>, f64)> {
    let w = rbm.weights().to_nested();
    let corners = |n| -> Vec<Vec<i8>> {
        match rbm.domain() {
            Domain::PlusMinusOne => pm1_corners(n).collect(),
            Domain::ZeroOne => bit_corners(n).collect(),
        }
    };
    let mut out = Vec::new();
    for v in corners(rbm.m()) {
        for h in corners(rbm.p()) {
            let s = naive_rbm_score(&w, rbm.visible_bias(), rbm.hidden_bias(), &v, &h);
            out.push((v.clone(), h, s));
        }
    }
    let z = common::lse(&out.iter().map(|t| t.2).collect::<Vec<_>>());
    out.iter_mut().for_each(|t| t.2 = (t.2 - z).exp());
    out
}

#[test]
fn block_gibbs_marginals_match_enumeration_in_both_domains() {
    const SWEEPS: usize = 1_000_000;
    for domain in [Domain::PlusMinusOne, Domain::ZeroOne] {
        let base = gen_random_rbm(3, 3, 9).unwrap();
        let rbm = RbmParams::new(
            base.weights().scaled(0.6),
            base.visible_bias().iter().map(|a| 0.6 * a).collect(),
            base.hidden_bias().iter().map(|b| 0.6 * b).collect(),
            domain,
        )
        .unwrap();
        let exact = exact_rbm_distribution(&rbm);
        let (lo, hi) = domain.values();
        let mut marg_v = [0.0f64; 3];
        let mut marg_h = [0.0f64; 3];
        for (v, h, p) in &exact {
            for i in 0..3 {
                marg_v[i] += p * f64::from(v[i] == hi);
                marg_h[i] += p * f64::from(h[i] == hi);
            }
        }
        let mut r = rrr_core::rng::seeded(3);
        let mut v = Assignment::new(vec![lo; 3], domain).unwrap();
        let mut h = Assignment::new(vec![lo; 3], domain).unwrap();
        let (mut cv, mut ch) = ([0usize; 3], [0usize; 3]);
        for t in 0..SWEEPS + 1000 {
            (v, h) = block_gibbs_rbm_sweep(&rbm, &v, &h, 1.0, &mut r).unwrap();
            if t >= 1000 {
                for i in 0..3 {
                    cv[i] += usize::from(v.values()[i] == hi);
                    ch[i] += usize::from(h.values()[i] == hi);
                }
            }
        }
        for i in 0..3 {
            let (fv, fh) = (cv[i] as f64 / SWEEPS as f64, ch[i] as f64 / SWEEPS as f64);
            assert!((fv - marg_v[i]).abs() < 0.01, "{domain:?} v{i}: {fv} vs {}", marg_v[i]);
            assert!((fh - marg_h[i]).abs() < 0.01, "{domain:?} h{i}: {fh} vs {}", marg_h[i]);
        }
    }
}

#[test]
fn single_site_marginals_match_enumeration() {
    const SWEEPS: usize = 200_000;
    let mut g = rng(31);
    let params = MrfParams::new(random_symmetric(5, 0.4, &mut g), Domain::PlusMinusOne).unwrap();
    let nested = params.matrix().to_nested();
    let weights: Vec<(Vec<i8>, f64)> = pm1_corners(5).map(|x| { let s = naive_quadratic(&nested, &x); (x, s) }).collect();
    let z = common::lse(&weights.iter().map(|w| w.1).collect::<Vec<_>>());
    let mut marginal = [0.0f64; 5];
    for (x, s) in &weights {
        for i in 0..5 {
            marginal[i] += (s - z).exp() * f64::from(x[i] == 1);
        }
    }
    let init = Assignment::pm1(vec![1; 5]).unwrap();
    let mut chain = GibbsChain::new(&params, &init).unwrap();
    let mut r = rrr_core::rng::seeded(4);
    let mut counts = [0usize; 5];
    for _ in 0..SWEEPS {
        chain.sweep(1.0, &mut r);
        for (c, &xi) in counts.iter_mut().zip(chain.state()) {
            *c += usize::from(xi == 1);
        }
    }
    for i in 0..5 {
        let f = counts[i] as f64 / SWEEPS as f64;
        assert!((f - marginal[i]).abs() < 0.01, "x{i}: {f} vs {}", marginal[i]);
    }
}

#[test]
fn cold_chain_climbs_to_strong_ferromagnet_ground_state() {
    // All couplings +1: the two all-equal corners are the only maxima.
    let n = 8;
    let mut a = rrr_core::Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                a[(i, j)] = 1.0;
            }
        }
    }
    let params = MrfParams::new(a, Domain::PlusMinusOne).unwrap();
    let init = Assignment::pm1(vec![1, -1, 1, -1, 1, -1, 1, -1]).unwrap();
    let schedule = AnnealSchedule::linear(4.0, 200).unwrap();
    let state = annealed_gibbs(&params, &schedule, &init, 2).unwrap();
    assert_eq!(state.best_score, (n * (n - 1)) as f64);
}

#[test]
fn rrr_ag_never_worse_than_its_starts() {
    let rbm = gen_random_rbm(5, 5, 12).unwrap();
    let emb = Embedding::of_rbm(&rbm).unwrap();
    let sol = solve_lrp(&emb.mrf, &LrpOptions::default()).unwrap();
    let starts = rrr_map_sample(&emb.mrf, &sol.x, 4, 6).unwrap();
    let out = rrr_ag(&emb.mrf, &sol.x, &AnnealSchedule::linear(3.0, 100).unwrap(), 4, 6).unwrap();
    let (_, best_start) = starts.best().unwrap();
    assert!(out.best_score >= best_start);
}

#[test]
fn zero_model_chain_is_uniform() {
    const SWEEPS: usize = 10_000;
    let params = MrfParams::new(rrr_core::Matrix::zeros(4, 4), Domain::PlusMinusOne).unwrap();
    let mut chain = GibbsChain::new(&params, &Assignment::pm1(vec![1; 4]).unwrap()).unwrap();
    let mut r = rrr_core::rng::seeded(1);
    let mut counts = [0usize; 4];
    for _ in 0..SWEEPS {
        chain.sweep(1.0, &mut r);
        for (c, &xi) in counts.iter_mut().zip(chain.state()) {
            *c += usize::from(xi == 1);
        }
    }
    let sigma = (0.25 / SWEEPS as f64).sqrt();
    for c in counts {
        assert!((c as f64 / SWEEPS as f64 - 0.5).abs() <= 4.0 * sigma);
    }
}

#[test]
fn three_variable_chain_is_stationary_in_total_variation() {
    const SWEEPS: usize = 1_000_000;
    let mut g = rng(32);
    let params = MrfParams::new(random_symmetric(3, 1.0, &mut g), Domain::PlusMinusOne).unwrap();
    let nested = params.matrix().to_nested();
    let scores: Vec<f64> = pm1_corners(3).map(|x| naive_quadratic(&nested, &x)).collect();
    let z = common::lse(&scores);
    let mut chain = GibbsChain::new(&params, &Assignment::pm1(vec![1, 1, 1]).unwrap()).unwrap();
    let mut r = rrr_core::rng::seeded(2);
    let mut counts = [0usize; 8];
    for _ in 0..SWEEPS {
        chain.sweep(1.0, &mut r);
        // pm1_corners order: bit i of the index is coordinate i at +1
        let idx = chain.state().iter().enumerate().map(|(i, &v)| usize::from(v == 1) << i).sum::<usize>();
        counts[idx] += 1;
    }
    let tv: f64 = 0.5
        * scores
            .iter()
            .zip(counts)
            .map(|(s, c)| ((s - z).exp() - c as f64 / SWEEPS as f64).abs())
            .sum::<f64>();
    assert!(tv < 0.02, "total variation {tv}");
}

#[test]
fn planted_pairs_trap_annealed_gibbs() {
    let opts = HardRbmOptions { pairs: 3, couple: 50.0, bias: 5.0 };
    let schedule = AnnealSchedule::linear(10.0, 1000).unwrap();
    let mut finals = Vec::new();
    let mut maps = Vec::new();
    for seed in 0..20u64 {
        let (rbm, pairs) = gen_hard_rbm_planted(6, 6, &opts, seed).unwrap();
        let emb = Embedding::of_rbm(&rbm).unwrap();
        let mut x = vec![1i8; emb.mrf.n()];
        for pair in &pairs {
            x[1 + pair.visible] = -1;
            x[1 + 6 + pair.hidden] = -1;
        }
        let init = Assignment::pm1(x).unwrap();
        let state = annealed_gibbs_clamped(&emb.mrf, &schedule, &init, Clamp::Auxiliary, seed).unwrap();
        finals.push(state.score);
        maps.push(brute_force_map(&emb.mrf).unwrap().1);
    }
    let mut gaps: Vec<f64> = maps.iter().zip(&finals).map(|(m, f)| m - f).collect();
    gaps.sort_by(f64::total_cmp);
    let median_gap = 0.5 * (gaps[9] + gaps[10]);
    assert!(median_gap > 0.0, "median shortfall {median_gap}");
}

#[test]
fn best_of_chains_dominates_every_chain() {
    let rbm = gen_random_rbm(4, 4, 3).unwrap();
    let emb = Embedding::of_rbm(&rbm).unwrap();
    let schedule = AnnealSchedule::linear(5.0, 50).unwrap();
    let sol = solve_lrp(&emb.mrf, &LrpOptions::default()).unwrap();
    let best = rrr_ag_clamped(&emb.mrf, &sol.x, &schedule, 6, Clamp::Auxiliary, 21).unwrap();
    let starts = rrr_map_sample(&emb.mrf, &sol.x, 6, 21).unwrap();
    for (c, start) in starts.samples.iter().enumerate() {
        let init = Clamp::Auxiliary.prepare(start);
        let seed = rrr_core::rng::derive_seed(21, c as u64);
        let chain = annealed_gibbs_clamped(&emb.mrf, &schedule, &init, Clamp::Auxiliary, seed).unwrap();
        assert!(best.best_score >= chain.score);
        assert!(best.best_score >= chain.best_score);
    }
}

#[test]
fn rrr_ag_usually_beats_both_parents() {
    const TRIALS: u64 = 50;
    let schedule = AnnealSchedule::linear(10.0, 100).unwrap();
    let mut wins = 0;
    for seed in 0..TRIALS {
        let rbm = gen_random_rbm(10, 10, 500 + seed).unwrap();
        let emb = Embedding::of_rbm(&rbm).unwrap();
        let sol = solve_lrp(&emb.mrf, &LrpOptions { seed, ..LrpOptions::default() }).unwrap();
        let rrr = rrr_map_sample(&emb.mrf, &sol.x, 100, seed).unwrap().best().unwrap().1;
        let ag = annealed_gibbs_uniform(&emb.mrf, &schedule, 8, Clamp::Auxiliary, seed).unwrap().best_score;
        let both = rrr_ag_clamped(&emb.mrf, &sol.x, &schedule, 8, Clamp::Auxiliary, seed).unwrap().best_score;
        if both >= rrr.max(ag) - 1e-9 {
            wins += 1;
        }
    }
    assert!(wins * 10 >= TRIALS * 6, "rrr-AG was best in {wins}/{TRIALS}");
}
