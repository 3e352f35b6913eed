#![allow(dead_code)]

use chance_order::channel::ChannelMatrix;
use chance_order::conditional::{CondGameSpec, JointDistribution};
use chance_order::decomp::DoublyStochastic;
use chance_order::numerics::{Mat, Perm, ProbVector, SubDistribution};
use chance_order::Rat;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_xoshiro::SplitMix64;

pub fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Non-negative integer weights normalized to one; about a quarter of the entries vanish.
pub fn weights(rng: &mut SplitMix64, len: usize) -> Vec<Rat> {
    let mut w: Vec<i64> = (0..len).map(|_| if rng.random_bool(0.25) { 0 } else { rng.random_range(1..8) }).collect();
    if w.iter().all(|&x| x == 0) {
        w[rng.random_range(0..len)] = 1;
    }
    let total: i64 = w.iter().sum();
    w.iter().map(|&x| r(x, total)).collect()
}

pub fn prob(rng: &mut SplitMix64, d: usize) -> ProbVector<Rat> {
    ProbVector::new(weights(rng, d)).unwrap()
}

pub fn sub(rng: &mut SplitMix64, d: usize) -> SubDistribution<Rat> {
    let mass = r(rng.random_range(0..=4), 4);
    SubDistribution::new(weights(rng, d).into_iter().map(|x| x * mass.clone()).collect()).unwrap()
}

pub fn perm(rng: &mut SplitMix64, n: usize) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::from_images(v).unwrap()
}

/// `rows x cols` column stochastic matrix.
pub fn stochastic(rng: &mut SplitMix64, rows: usize, cols: usize) -> Mat<Rat> {
    Mat::from_cols((0..cols).map(|_| weights(rng, rows)).collect()).unwrap()
}

pub fn channel(rng: &mut SplitMix64, outputs: usize, inputs: usize) -> ChannelMatrix<Rat> {
    ChannelMatrix::new(stochastic(rng, outputs, inputs)).unwrap()
}

pub fn joint(rng: &mut SplitMix64, rows: usize, cols: usize) -> JointDistribution<Rat> {
    JointDistribution::new(Mat::new(rows, cols, weights(rng, rows * cols)).unwrap()).unwrap()
}

/// Game matrix whose columns carry random mass in `[0, 1]`.
pub fn game(rng: &mut SplitMix64, sizes: usize, cols: usize) -> Mat<Rat> {
    Mat::from_cols((0..cols).map(|_| sub(rng, sizes).entries().to_vec()).collect()).unwrap()
}

pub fn cond_game(rng: &mut SplitMix64, sizes: usize, cols: usize) -> CondGameSpec<Rat> {
    CondGameSpec::new(game(rng, sizes, cols)).unwrap()
}

/// Splits every column of `s` among `k` pieces with random proportions.
pub fn split_columns(rng: &mut SplitMix64, s: &Mat<Rat>, k: usize) -> Vec<Mat<Rat>> {
    let mut pieces = vec![Mat::zeros(s.rows(), s.cols()); k];
    for c in 0..s.cols() {
        let share = weights(rng, k);
        for (piece, lambda) in pieces.iter_mut().zip(&share) {
            for i in 0..s.rows() {
                piece[(i, c)] = s[(i, c)].clone() * lambda.clone();
            }
        }
    }
    pieces
}

/// `Q = sum_z S_z P V_z`: conditionally majorized by `P` by construction.
pub fn cond_degraded(rng: &mut SplitMix64, p: &JointDistribution<Rat>) -> JointDistribution<Rat> {
    let s = stochastic(rng, p.rows(), p.rows());
    let k = rng.random_range(1..=3);
    let mut q = Mat::zeros(p.rows(), p.cols());
    for piece in split_columns(rng, &s, k) {
        let v = perm(rng, p.cols()).matrix();
        q = q.add(&piece.mul(p.original()).unwrap().mul(&v).unwrap()).unwrap();
    }
    JointDistribution::new(q).unwrap()
}

/// `M = sum_z V_z N S_z` with `sum_z S_z` a random pre-processing with `inputs` inputs.
pub fn chan_degraded(rng: &mut SplitMix64, n: &ChannelMatrix<Rat>, inputs: usize) -> ChannelMatrix<Rat> {
    let s = stochastic(rng, n.num_inputs(), inputs);
    let k = rng.random_range(1..=3);
    let mut m = Mat::zeros(n.num_outputs(), inputs);
    for piece in split_columns(rng, &s, k) {
        let v = perm(rng, n.num_outputs()).matrix();
        m = m.add(&v.mul(n.original()).unwrap().mul(&piece).unwrap()).unwrap();
    }
    ChannelMatrix::new(m).unwrap()
}

/// Convex mixture of `k` random permutation matrices.
pub fn doubly_stochastic(rng: &mut SplitMix64, n: usize, k: usize) -> DoublyStochastic<Rat> {
    let mut d = Mat::zeros(n, n);
    for lambda in weights(rng, k) {
        d = d.add(&perm(rng, n).matrix().scale(&lambda)).unwrap();
    }
    DoublyStochastic::new(d).unwrap()
}
