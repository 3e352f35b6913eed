//! Monte-Carlo host/player simulation of the three game families.
//!
//! Trials run in fixed-size blocks. Block `b` draws from its own SplitMix64
//! stream whose seed is the `b`-th output of a SplitMix64 seeded with the
//! root seed, so transcripts do not depend on the thread count.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{chan_payoff, ChanGameSpec, ChannelMatrix};
use crate::conditional::{cond_payoff, CondGameSpec, JointDistribution};
use crate::error::{Error, Result};
use crate::numerics::{sort_desc, Perm, ProbVector, SubDistribution};
use crate::scalar::Scalar;

const BLOCK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    trials: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidProblem("at least one trial is required".into()));
        }
        Ok(SimConfig { trials, seed })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub wins: u64,
    pub trials: u64,
    pub estimate: f64,
    pub std_error: f64,
}

impl SimResult {
    fn new(wins: u64, trials: u64) -> Self {
        let estimate = wins as f64 / trials as f64;
        let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        SimResult { wins, trials, estimate, std_error }
    }

    /// Distance to `target` in units of the standard error. An exact hit
    /// with zero spread counts as zero.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.estimate - target).abs();
        if diff == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            f64::INFINITY
        } else {
            diff / self.std_error
        }
    }
}

/// Inverse-CDF sampler over indices; mass missing from a sub-distribution yields `None`.
#[derive(Clone, Debug)]
struct Categorical {
    cdf: Vec<f64>,
}

impl Categorical {
    fn new<T: Scalar>(weights: &[T]) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w.to_f64_lossy();
                acc
            })
            .collect();
        // complete distributions must never report the residual outcome
        let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        if total.is_one() {
            if let Some(last) = weights.iter().rposition(|w| !w.is_zero()) {
                cdf[last] = 1.0;
            }
        }
        Categorical { cdf }
    }

    fn sample(&self, rng: &mut SplitMix64) -> Option<usize> {
        let u: f64 = rng.random();
        self.cdf.iter().position(|&c| u < c)
    }
}

/// Position of each outcome in the player's guess order. Sampled game sizes
/// are 0-based, so a win is `rank <= w`.
fn ranks<T: Scalar>(v: &[T]) -> Perm {
    sort_desc(v).1
}

fn run(cfg: &SimConfig, trial: impl Fn(&mut SplitMix64) -> bool + Sync) -> SimResult {
    let blocks = cfg.trials.div_ceil(BLOCK);
    let mut root = SplitMix64::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = (0..blocks).map(|_| root.next_u64()).collect();
    let wins = seeds
        .par_iter()
        .enumerate()
        .map(|(b, &seed)| {
            let mut rng = SplitMix64::seed_from_u64(seed);
            let n = BLOCK.min(cfg.trials - b as u64 * BLOCK);
            (0..n).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum();
    SimResult::new(wins, cfg.trials)
}

/// The host draws `w` from `t`, the player guesses the `w` likeliest faces and the die is rolled.
pub fn simulate_dice_game<T: Scalar>(p: &ProbVector<T>, t: &SubDistribution<T>, cfg: &SimConfig) -> SimResult {
    let sizes = Categorical::new(t.entries());
    let die = Categorical::new(p.entries());
    let rank = ranks(p.entries());
    run(cfg, |rng| {
        let Some(w) = sizes.sample(rng) else { return false };
        let y = die.sample(rng).expect("die is a distribution");
        rank.image(y) <= w
    })
}

/// The source emits `(x, y)`, the player announces `z = f(x)` with the optimal
/// `f`, the host draws `w` from column `t_z`.
pub fn simulate_cond_game<T: Scalar>(p: &JointDistribution<T>, t: &CondGameSpec<T>, cfg: &SimConfig) -> SimResult {
    let strategy = cond_payoff(p, t).strategy;
    let source = Categorical::new(p.original().entries());
    let sizes: Vec<Categorical> = (0..t.num_choices()).map(|z| Categorical::new(&t.mat().col(z))).collect();
    let cols = p.cols();
    let ranks = p.row_perms();
    run(cfg, |rng| {
        let cell = source.sample(rng).expect("joint is a distribution");
        let (x, y) = (cell / cols, cell % cols);
        let Some(w) = sizes[strategy[x]].sample(rng) else { return false };
        ranks[x].image(y) <= w
    })
}

/// Win probability targeted by [`simulate_chan_game`]: hints `z` are drawn with
/// weight `|t_z|`, scaled down by the total when it exceeds one.
pub fn chan_game_win_probability<T: Scalar>(m: &ChannelMatrix<T>, t: &ChanGameSpec<T>) -> T {
    let total = t.total_mass();
    let payoff = chan_payoff(m, t).value;
    if total > T::one() {
        payoff / total
    } else {
        payoff
    }
}

/// The host draws a hint `z`, the player feeds `x = f(z)` into the channel and
/// the host draws `w` from `t_z / |t_z|`.
pub fn simulate_chan_game<T: Scalar>(m: &ChannelMatrix<T>, t: &ChanGameSpec<T>, cfg: &SimConfig) -> SimResult {
    let strategy = chan_payoff(m, t).strategy;
    let masses: Vec<T> = t.mat().col_sums();
    let total = t.total_mass();
    let hint_weights: Vec<T> =
        if total > T::one() { masses.iter().map(|s| s.clone() / total.clone()).collect() } else { masses.clone() };
    let hints = Categorical::new(&hint_weights);
    let sizes: Vec<Option<Categorical>> = (0..t.num_hints())
        .map(|z| {
            (!masses[z].is_zero()).then(|| {
                let col: Vec<T> = t.mat().col(z).into_iter().map(|x| x / masses[z].clone()).collect();
                Categorical::new(&col)
            })
        })
        .collect();
    let outputs: Vec<Categorical> = (0..m.num_inputs()).map(|x| Categorical::new(&m.column(x))).collect();
    let ranks = m.col_perms();
    run(cfg, |rng| {
        let Some(z) = hints.sample(rng) else { return false };
        let x = strategy[z];
        let y = outputs[x].sample(rng).expect("channel columns are distributions");
        let w = sizes[z].as_ref().and_then(|c| c.sample(rng)).expect("drawn hints have mass");
        ranks[x].image(y) <= w
    })
}
