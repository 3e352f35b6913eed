//! Gambling games played through a classical channel, and channel majorization.
//!
//! The host draws `z`, the player picks the input `x = f(z)`, the channel
//! emits `y`, the host draws the game size `w` and the player wins when `y` is
//! among the `w` most likely outputs of column `x`. With reward profiles
//! `r_z = U t_z` the optimal payoff is `sum_z max_x r_z . p_x↓`.
//!
//! `M` is majorized by `N` exactly when a column (sub-)stochastic `S` satisfies
//! `U^T Q <= U^T P S` entrywise, `P` and `Q` being the column-sorted transition
//! matrices of `N` and `M`. The LP yields either `S`, turned into a simulation
//! `Q = sum_z V_z P S_z`, or a Farkas vector, turned into a distinguishing game.

use std::collections::BTreeMap;

use crate::conditional::{normalize_columns, validate_game};
use crate::decomp::{birkhoff, hlp_transfer};
use crate::error::{Error, Result};
use crate::lp::{solve_feasibility, LpFeasibilityProblem, LpStatus};
use crate::numerics::{fit, prefix_sums, sort_desc, u_apply, Mat, Perm, SubDistribution};
use crate::scalar::{dot, sum, Scalar};

/// Transition matrix `(p_{y|x})`: columns are inputs, rows are outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelMatrix<T> {
    original: Mat<T>,
    sorted: Mat<T>,
    col_perms: Vec<Perm>,
}

impl<T: Scalar> ChannelMatrix<T> {
    pub fn new(mat: Mat<T>) -> Result<Self> {
        if mat.rows() == 0 || mat.cols() == 0 {
            return Err(Error::InvalidDimension("channel must have inputs and outputs".into()));
        }
        if !mat.is_nonnegative() {
            return Err(Error::InvariantViolation("transition matrix has a negative entry".into()));
        }
        if let Some(x) = mat.col_sums().iter().position(|s| !s.is_one()) {
            return Err(Error::InvariantViolation(format!("column {x} of the transition matrix does not sum to 1")));
        }
        let mut cols = Vec::with_capacity(mat.cols());
        let mut col_perms = Vec::with_capacity(mat.cols());
        for x in 0..mat.cols() {
            let (s, p) = sort_desc(&mat.col(x));
            cols.push(s);
            col_perms.push(p);
        }
        let sorted = Mat::from_cols(cols)?;
        Ok(ChannelMatrix { original: mat, sorted, col_perms })
    }

    pub fn from_cols(cols: Vec<Vec<T>>) -> Result<Self> {
        Self::new(Mat::from_cols(cols)?)
    }

    pub fn identity(d: usize) -> Self {
        Self::new(Mat::identity(d)).expect("identity is stochastic")
    }

    /// Every input mapped to the uniform distribution on `d` outputs.
    pub fn randomizing(d: usize) -> Self {
        let u = T::one() / T::from_count(d);
        Self::new(Mat::new(d, d, vec![u; d * d]).expect("square")).expect("uniform columns")
    }

    /// Binary symmetric channel with flip probability `eps`.
    pub fn bsc(eps: T) -> Result<Self> {
        let keep = T::one() - eps.clone();
        Self::new(Mat::from_rows(vec![vec![keep.clone(), eps.clone()], vec![eps, keep]])?)
    }

    pub fn original(&self) -> &Mat<T> {
        &self.original
    }

    /// Each column in non-increasing order.
    pub fn sorted(&self) -> &Mat<T> {
        &self.sorted
    }

    pub fn col_perms(&self) -> &[Perm] {
        &self.col_perms
    }

    pub fn num_outputs(&self) -> usize {
        self.original.rows()
    }

    pub fn num_inputs(&self) -> usize {
        self.original.cols()
    }

    /// Output distribution for input `x`.
    pub fn column(&self, x: usize) -> Vec<T> {
        self.original.col(x)
    }

    /// Appends never-used outputs up to `m`.
    pub fn padded_outputs(&self, m: usize) -> Self {
        Self::new(self.original.padded(m, self.num_inputs())).expect("zero rows keep columns stochastic")
    }

    /// Parallel use of two channels: the Kronecker product of the transition matrices.
    pub fn tensor(&self, other: &ChannelMatrix<T>) -> Self {
        Self::new(self.original.kron(&other.original)).expect("product of channels is a channel")
    }

    /// `self` applied after `pre`: transition matrix `self * pre`.
    pub fn compose(&self, pre: &ChannelMatrix<T>) -> Result<Self> {
        Self::new(self.original.mul(&pre.original)?)
    }

    /// Input `x` becomes input `perm[x]`.
    pub fn relabel_inputs(&self, perm: &Perm) -> Self {
        let cols = perm.apply(&self.original.to_cols());
        Self::from_cols(cols).expect("relabeling keeps the invariants")
    }

    /// Output `y` becomes output `perm[y]`.
    pub fn relabel_outputs(&self, perm: &Perm) -> Self {
        let rows = perm.apply(&self.original.to_rows());
        Self::new(Mat::from_rows(rows).expect("rectangular")).expect("relabeling keeps the invariants")
    }
}

/// Game matrix `T = (t_{wz})`, `m x l`; each column a sub-distribution over game sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChanGameSpec<T> {
    t: Mat<T>,
}

impl<T: Scalar> ChanGameSpec<T> {
    pub fn new(t: Mat<T>) -> Result<Self> {
        validate_game(&t)?;
        Ok(ChanGameSpec { t })
    }

    pub fn from_vector(t: &SubDistribution<T>) -> Result<Self> {
        Self::new(Mat::new(t.len(), 1, t.entries().to_vec())?)
    }

    pub fn mat(&self) -> &Mat<T> {
        &self.t
    }

    pub fn num_sizes(&self) -> usize {
        self.t.rows()
    }

    pub fn num_hints(&self) -> usize {
        self.t.cols()
    }

    /// Column `z` as a stand-alone vector game.
    pub fn column_game(&self, z: usize) -> SubDistribution<T> {
        SubDistribution::new(self.t.col(z)).expect("columns validated at construction")
    }

    /// Sum of all entries, i.e. the total weight of the hints.
    pub fn total_mass(&self) -> T {
        self.t.total()
    }
}

/// Optimal payoff and the optimal input for each hint `z` (ties to the smallest input).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChanPayoff<T> {
    pub value: T,
    pub strategy: Vec<usize>,
}

pub fn chan_payoff<T: Scalar>(channel: &ChannelMatrix<T>, game: &ChanGameSpec<T>) -> ChanPayoff<T> {
    let m = channel.num_outputs();
    let cols = channel.sorted().to_cols();
    let mut value = T::zero();
    let mut strategy = Vec::with_capacity(game.num_hints());
    for z in 0..game.num_hints() {
        let r = fit(&u_apply(&game.mat().col(z)), m);
        let mut best: Option<(usize, T)> = None;
        for (x, col) in cols.iter().enumerate() {
            let v = dot(&r, col);
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((x, v));
            }
        }
        let (x, v) = best.expect("channel has at least one input");
        value = value + v;
        strategy.push(x);
    }
    ChanPayoff { value, strategy }
}

/// Payoff of a single-hint game; these alone already decide the pre-order.
pub fn vector_game_payoff<T: Scalar>(channel: &ChannelMatrix<T>, t: &SubDistribution<T>) -> T {
    let r = fit(&u_apply(t.entries()), channel.num_outputs());
    (0..channel.num_inputs())
        .map(|x| dot(&r, &channel.sorted().col(x)))
        .reduce(|a, b| if b > a { b } else { a })
        .expect("channel has at least one input")
}

/// Monotone `f_P(N) = sum_k max_x sum_y q↓_{y|k} p↓_{y|x}` where the `q` columns
/// come from the reference channel and the `p` columns from `channel`.
pub fn f_monotone<T: Scalar>(channel: &ChannelMatrix<T>, reference: &ChannelMatrix<T>) -> T {
    let m = channel.num_outputs().max(reference.num_outputs());
    let (n, p) = (channel.padded_outputs(m), reference.padded_outputs(m));
    let targets = n.sorted().to_cols();
    sum((0..p.num_inputs()).map(|k| {
        let q = p.sorted().col(k);
        targets
            .iter()
            .map(|col| dot(&q, col))
            .reduce(|a, b| if b > a { b } else { a })
            .expect("channel has at least one input")
    }))
}

/// One simulation term: output permutation `V` after the channel, pre-processing `S` before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChanTerm<T> {
    pub v: Perm,
    pub s: Mat<T>,
}

/// `Q = sum_z V_z P S_z` with `sum_z S_z` column stochastic, outputs zero-padded to a common size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChanWitness<T> {
    pub terms: Vec<ChanTerm<T>>,
}

impl<T: Scalar> ChanWitness<T> {
    pub fn reconstruct(&self, p: &Mat<T>) -> Result<Mat<T>> {
        let mut acc: Option<Mat<T>> = None;
        for term in &self.terms {
            let piece = term.v.matrix().mul(p)?.mul(&term.s)?;
            acc = Some(match acc {
                None => piece,
                Some(a) => a.add(&piece)?,
            });
        }
        acc.ok_or_else(|| Error::InvariantViolation("witness has no terms".into()))
    }

    /// `sum_z S_z`, the pre-processing channel.
    pub fn preprocessing(&self) -> Result<Mat<T>> {
        let mut it = self.terms.iter();
        let first = it.next().ok_or_else(|| Error::InvariantViolation("witness has no terms".into()))?;
        it.try_fold(first.s.clone(), |acc, t| acc.add(&t.s))
    }

    /// Exact check that `weaker` is simulated from `stronger`.
    pub fn verify(&self, weaker: &ChannelMatrix<T>, stronger: &ChannelMatrix<T>) -> bool {
        let m = weaker.num_outputs().max(stronger.num_outputs());
        let q = weaker.original().padded(m, weaker.num_inputs());
        let p = stronger.original().padded(m, stronger.num_inputs());
        let shapes_ok = self
            .terms
            .iter()
            .all(|t| t.v.len() == m && t.s.rows() == p.cols() && t.s.cols() == q.cols() && t.s.is_nonnegative());
        shapes_ok
            && self.preprocessing().is_ok_and(|s| s.is_column_stochastic())
            && self.reconstruct(&p).is_ok_and(|r| r == q)
    }
}

/// A game the allegedly weaker channel wins strictly more often.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishingChanGame<T> {
    pub game: ChanGameSpec<T>,
    pub payoff_weaker: T,
    pub payoff_stronger: T,
}

impl<T: Scalar> DistinguishingChanGame<T> {
    pub fn verify(&self, weaker: &ChannelMatrix<T>, stronger: &ChannelMatrix<T>) -> bool {
        let pw = chan_payoff(weaker, &self.game).value;
        let ps = chan_payoff(stronger, &self.game).value;
        pw > ps && pw == self.payoff_weaker && ps == self.payoff_stronger
    }

    /// First column that already separates the channels as a single-hint game.
    pub fn violating_column(&self, weaker: &ChannelMatrix<T>, stronger: &ChannelMatrix<T>) -> Option<usize> {
        (0..self.game.num_hints()).find(|&z| {
            let t = self.game.column_game(z);
            vector_game_payoff(weaker, &t) > vector_game_payoff(stronger, &t)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChanVerdict<T> {
    Holds(ChanWitness<T>),
    Fails(DistinguishingChanGame<T>),
}

impl<T> ChanVerdict<T> {
    pub fn holds(&self) -> bool {
        matches!(self, ChanVerdict::Holds(_))
    }
}

/// Decides whether `weaker` is majorized by `stronger` (every game is won at
/// least as often through `stronger`) and returns the proof.
pub fn chan_majorizes<T: Scalar>(weaker: &ChannelMatrix<T>, stronger: &ChannelMatrix<T>) -> Result<ChanVerdict<T>> {
    let m = weaker.num_outputs().max(stronger.num_outputs());
    let (qc, pc) = (weaker.padded_outputs(m), stronger.padded_outputs(m));
    let (n, n2) = (pc.num_inputs(), qc.num_inputs());
    let p_prefix: Vec<Vec<T>> = (0..n).map(|x| prefix_sums(&pc.sorted().col(x))).collect();
    let q_prefix: Vec<Vec<T>> = (0..n2).map(|x| prefix_sums(&qc.sorted().col(x))).collect();

    // variables s_{x|x'} at x' * n + x; rows (x', k) then one mass row per x'
    let rows = n2 * m + n2;
    let mut a = Mat::zeros(rows, n * n2);
    let mut b = Vec::with_capacity(rows);
    for xq in 0..n2 {
        for k in 0..m {
            for x in 0..n {
                a[(xq * m + k, xq * n + x)] = p_prefix[x][k].clone();
            }
            b.push(q_prefix[xq][k].clone());
        }
    }
    for xq in 0..n2 {
        for x in 0..n {
            a[(n2 * m + xq, xq * n + x)] = -T::one();
        }
        b.push(-T::one());
    }
    let prob = LpFeasibilityProblem::nonneg_ge(a, b)?;
    let outcome = solve_feasibility(&prob)?;

    match outcome.status {
        LpStatus::Feasible => {
            let s = outcome.primal.expect("feasible outcome carries a primal");
            let mut smat = Mat::zeros(n, n2);
            for xq in 0..n2 {
                for x in 0..n {
                    smat[(x, xq)] = s[xq * n + x].clone();
                }
                // topping up a column only raises U^T P s, so the constraints still hold
                let deficit = T::one() - sum(smat.col(xq));
                smat[(0, xq)] = smat[(0, xq)].clone() + deficit;
            }
            let witness = build_witness(&qc, &pc, &smat)?;
            if !witness.verify(weaker, stronger) {
                return Err(Error::InvariantViolation("channel witness failed re-check".into()));
            }
            Ok(ChanVerdict::Holds(witness))
        }
        LpStatus::Infeasible => {
            let y = outcome.dual_certificate.expect("infeasible outcome carries a certificate");
            let mut t = Mat::zeros(m, n2);
            for xq in 0..n2 {
                for k in 0..m {
                    t[(k, xq)] = y[xq * m + k].clone();
                }
            }
            let game = ChanGameSpec::new(normalize_columns(t))?;
            let payoff_weaker = chan_payoff(weaker, &game).value;
            let payoff_stronger = chan_payoff(stronger, &game).value;
            if payoff_weaker <= payoff_stronger {
                return Err(Error::InvariantViolation("Farkas game does not separate the channels".into()));
            }
            Ok(ChanVerdict::Fails(DistinguishingChanGame { game, payoff_weaker, payoff_stronger }))
        }
    }
}

/// Column `x'`: `q_{x'}↓ = D_{x'} mix_{x'}` with `mix_{x'} = sum_x s_{x|x'} p_x↓`
/// and `D_{x'}` doubly stochastic. Each Birkhoff permutation of `D_{x'}`,
/// conjugated by the sorting permutations of `p_x` and `q_{x'}`, becomes one
/// output relabeling; terms sharing a relabeling are merged.
fn build_witness<T: Scalar>(q: &ChannelMatrix<T>, p: &ChannelMatrix<T>, s: &Mat<T>) -> Result<ChanWitness<T>> {
    let (m, n, n2) = (p.num_outputs(), p.num_inputs(), q.num_inputs());
    let mut terms: BTreeMap<Perm, Mat<T>> = BTreeMap::new();
    for xq in 0..n2 {
        let mut mix = vec![T::zero(); m];
        for x in 0..n {
            let coef = &s[(x, xq)];
            if coef.is_zero() {
                continue;
            }
            for (acc, v) in mix.iter_mut().zip(p.sorted().col(x)) {
                *acc = acc.clone() + coef.clone() * v;
            }
        }
        // hlp_transfer works on row vectors: target = mix * D, so D^T acts on columns
        let dec = birkhoff(&hlp_transfer(&mix, &q.sorted().col(xq))?)?;
        let restore_q = &q.col_perms()[xq];
        for x in 0..n {
            let coef = &s[(x, xq)];
            if coef.is_zero() {
                continue;
            }
            let unsort_p = p.col_perms()[x].inverse();
            for term in &dec.terms {
                // V = M(rho) M(pi^-1) M(sigma^-1) as left multipliers on columns
                let v = restore_q.then(&term.perm.inverse()).then(&unsort_p);
                let entry = terms.entry(v).or_insert_with(|| Mat::zeros(n, n2));
                entry[(x, xq)] = entry[(x, xq)].clone() + term.weight.clone() * coef.clone();
            }
        }
    }
    Ok(ChanWitness { terms: terms.into_iter().map(|(v, s)| ChanTerm { v, s }).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditional::payoff_sorted_rows;
    use crate::numerics::u_inverse_apply;
    use crate::Rat;
    use num_traits::{One, Zero};
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn random_channel(rng: &mut SplitMix64, m: usize, n: usize) -> ChannelMatrix<Rat> {
        let cols = (0..n)
            .map(|_| {
                let w: Vec<i64> = (0..m).map(|_| rng.random_range(0..5)).collect();
                let t: i64 = w.iter().sum();
                if t == 0 {
                    let mut v = vec![Rat::zero(); m];
                    v[rng.random_range(0..m)] = Rat::one();
                    v
                } else {
                    w.iter().map(|&x| r(x, t)).collect()
                }
            })
            .collect();
        ChannelMatrix::from_cols(cols).unwrap()
    }

    fn random_game(rng: &mut SplitMix64, m: usize, l: usize) -> ChanGameSpec<Rat> {
        let cols = (0..l)
            .map(|_| {
                let w: Vec<i64> = (0..m).map(|_| rng.random_range(0..5)).collect();
                let t = w.iter().sum::<i64>() + rng.random_range(0..3) + 1;
                w.iter().map(|&x| r(x, t)).collect()
            })
            .collect();
        ChanGameSpec::new(Mat::from_cols(cols).unwrap()).unwrap()
    }

    fn random_perm(rng: &mut SplitMix64, n: usize) -> Perm {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Perm::from_images(v).unwrap()
    }

    #[test]
    fn identity_channel_wins_every_played_game() {
        let id = ChannelMatrix::<Rat>::identity(3);
        let t = ChanGameSpec::new(
            Mat::from_cols(vec![vec![r(1, 2), r(1, 2), Rat::zero()], vec![Rat::zero(), Rat::zero(), Rat::one()]])
                .unwrap(),
        )
        .unwrap();
        assert_eq!(chan_payoff(&id, &t).value, t.total_mass());
    }

    #[test]
    fn single_hint_game_is_best_column() {
        let mut rng = SplitMix64::seed_from_u64(1);
        let ch = random_channel(&mut rng, 3, 4);
        let t = random_game(&mut rng, 3, 1);
        let best = (0..4)
            .map(|x| {
                let p = crate::numerics::ProbVector::new(ch.column(x)).unwrap();
                crate::majorization::game_payoff(&p, &t.column_game(0))
            })
            .max()
            .unwrap();
        assert_eq!(chan_payoff(&ch, &t).value, best);
        assert_eq!(vector_game_payoff(&ch, &t.column_game(0)), best);
    }

    #[test]
    fn payoff_matches_input_enumeration() {
        let mut rng = SplitMix64::seed_from_u64(2);
        for _ in 0..40 {
            let ch = random_channel(&mut rng, 3, 3);
            let t = random_game(&mut rng, 3, 2);
            let mut best = Rat::zero();
            for code in 0..9 {
                let f = [code % 3, code / 3];
                let mut total = Rat::zero();
                for (z, &x) in f.iter().enumerate() {
                    let col = ch.sorted().col(x);
                    for w in 1..=3 {
                        let top = col.iter().take(w).cloned().fold(Rat::zero(), |a, b| a + b);
                        total += t.mat()[(w - 1, z)].clone() * top;
                    }
                }
                best = best.max(total);
            }
            assert_eq!(chan_payoff(&ch, &t).value, best);
        }
    }

    #[test]
    fn bsc_vector_game() {
        let bsc = ChannelMatrix::bsc(r(1, 4)).unwrap();
        let t = SubDistribution::new(vec![Rat::one(), Rat::zero()]).unwrap();
        assert_eq!(vector_game_payoff(&bsc, &t), r(3, 4));
        let id = ChannelMatrix::<Rat>::identity(2);
        assert_eq!(vector_game_payoff(&id, &SubDistribution::new(vec![r(1, 3), r(2, 3)]).unwrap()), Rat::one());
    }

    #[test]
    fn payoff_splits_over_columns() {
        let mut rng = SplitMix64::seed_from_u64(3);
        for _ in 0..20 {
            let ch = random_channel(&mut rng, 3, 3);
            let t = random_game(&mut rng, 3, 3);
            let split = (0..3).fold(Rat::zero(), |acc, z| {
                let col = t.mat().col(z);
                let mass: Rat = col.iter().cloned().fold(Rat::zero(), |a, b| a + b);
                if mass.is_zero() {
                    return acc;
                }
                let normalized = SubDistribution::new(col.iter().map(|x| x / &mass).collect()).unwrap();
                acc + mass * vector_game_payoff(&ch, &normalized)
            });
            assert_eq!(chan_payoff(&ch, &t).value, split);
        }
    }

    #[test]
    fn forward_simulations_are_recognised() {
        let mut rng = SplitMix64::seed_from_u64(4);
        for _ in 0..20 {
            let n = random_channel(&mut rng, 3, 3);
            let pre = random_channel(&mut rng, 3, 2);
            let m = n.compose(&pre).unwrap().relabel_outputs(&random_perm(&mut rng, 3));
            let ChanVerdict::Holds(w) = chan_majorizes(&m, &n).unwrap() else { panic!("V N S must be majorized by N") };
            assert!(w.verify(&m, &n));
        }
    }

    #[test]
    fn identity_majorizes_everything() {
        let mut rng = SplitMix64::seed_from_u64(5);
        let id = ChannelMatrix::<Rat>::identity(3);
        for _ in 0..10 {
            let m = random_channel(&mut rng, 3, 3);
            let ChanVerdict::Holds(w) = chan_majorizes(&m, &id).unwrap() else { panic!() };
            assert!(w.verify(&m, &id));
        }
    }

    #[test]
    fn randomizing_channel_cannot_simulate_identity() {
        for d in 2..=4 {
            let id = ChannelMatrix::<Rat>::identity(d);
            let rnd = ChannelMatrix::<Rat>::randomizing(d);
            let ChanVerdict::Fails(g) = chan_majorizes(&id, &rnd).unwrap() else { panic!() };
            assert!(g.verify(&id, &rnd));
            assert!(g.violating_column(&id, &rnd).is_some());
            let w1 = SubDistribution::indicator(d, 1);
            assert_eq!(vector_game_payoff(&id, &w1), Rat::one());
            assert_eq!(vector_game_payoff(&rnd, &w1), r(1, d as i64));
        }
    }

    #[test]
    fn f_monotone_closed_forms() {
        let mut rng = SplitMix64::seed_from_u64(6);
        for d in 2..=4 {
            let n = random_channel(&mut rng, d, 3);
            assert_eq!(f_monotone(&n, &ChannelMatrix::randomizing(d)), Rat::one());
            let top = (0..3).map(|x| n.sorted()[(0, x)].clone()).max().unwrap();
            assert_eq!(f_monotone(&n, &ChannelMatrix::identity(d)), Rat::from_integer((d as i64).into()) * top);
        }
    }

    #[test]
    fn f_monotone_equals_scaled_payoff_of_difference_game() {
        let mut rng = SplitMix64::seed_from_u64(7);
        for _ in 0..50 {
            let n = random_channel(&mut rng, 3, 3);
            let p = random_channel(&mut rng, 3, 2);
            // consecutive differences of the sorted reference columns, with a zero appended
            let diffs: Vec<Vec<Rat>> = (0..2).map(|k| u_inverse_apply(&p.sorted().col(k))).collect();
            let total: Rat = diffs.iter().flatten().cloned().fold(Rat::zero(), |a, b| a + b);
            let normalized: Vec<Vec<Rat>> = diffs.iter().map(|c| c.iter().map(|x| x / &total).collect()).collect();
            let t = ChanGameSpec::new(Mat::from_cols(normalized).unwrap()).unwrap();
            assert_eq!(f_monotone(&n, &p), total * chan_payoff(&n, &t).value);
        }
    }

    #[test]
    fn relabeling_inputs_changes_nothing() {
        let mut rng = SplitMix64::seed_from_u64(8);
        for _ in 0..15 {
            let m = random_channel(&mut rng, 3, 3);
            let n = random_channel(&mut rng, 3, 3);
            let t = random_game(&mut rng, 3, 2);
            let pm = random_perm(&mut rng, 3);
            let m2 = m.relabel_inputs(&pm);
            assert_eq!(chan_payoff(&m, &t).value, chan_payoff(&m2, &t).value);
            let v1 = chan_majorizes(&m, &n).unwrap().holds();
            assert_eq!(v1, chan_majorizes(&m2, &n).unwrap().holds());
            assert_eq!(v1, chan_majorizes(&m, &n.relabel_inputs(&pm)).unwrap().holds());
        }
    }

    #[test]
    fn channel_game_is_dual_to_conditional_game() {
        // swap roles: reward profiles become "rows", channel columns become "games"
        let mut rng = SplitMix64::seed_from_u64(9);
        for _ in 0..20 {
            let ch = random_channel(&mut rng, 3, 3);
            let t = random_game(&mut rng, 3, 2);
            let profiles: Vec<Vec<Rat>> = (0..2).map(|z| u_apply(&t.mat().col(z))).collect();
            let rows = Mat::from_rows(profiles).unwrap();
            let games = Mat::from_cols((0..3).map(|x| u_inverse_apply(&ch.sorted().col(x))).collect()).unwrap();
            assert_eq!(payoff_sorted_rows(&rows, &games).value, chan_payoff(&ch, &t).value);
        }
    }

    #[test]
    fn rejects_non_stochastic_channels() {
        let bad = Mat::from_rows(vec![vec![r(1, 2), Rat::one()], vec![r(1, 4), Rat::zero()]]).unwrap();
        assert!(matches!(ChannelMatrix::new(bad), Err(Error::InvariantViolation(_))));
    }
}
