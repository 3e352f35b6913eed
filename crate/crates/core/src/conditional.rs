//! Gambling games on a correlated source and conditional majorization.
//!
//! A joint distribution `P = (p_xy)` reveals `x` to the player and hides `y`.
//! The player picks a choice `z = f(x)`, the host draws a game size `w` from
//! column `t_z` of the game matrix, and the player wins when `y` is among the
//! `w` most likely hidden values for the revealed `x`.
//!
//! `Q` is conditionally majorized by `P` exactly when some column stochastic
//! `S` satisfies `Q U <= S P U` entrywise (rows sorted). That LP either yields
//! `S`, from which a relabeling witness `Q = sum_z S_z P V_z` is built, or a
//! Farkas vector, which is a game that `Q` wins strictly more often than `P`.

use std::collections::BTreeMap;

use crate::decomp::{birkhoff, hlp_transfer};
use crate::error::{Error, Result};
use crate::lp::{solve_feasibility, LpFeasibilityProblem, LpStatus, Relation};
use crate::numerics::{fit, prefix_sums, sort_desc, u_apply, Mat, Perm};
use crate::scalar::{dot, sum, Scalar};

/// `m x n` joint distribution; rows are indexed by the revealed value, columns by the hidden one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution<T> {
    original: Mat<T>,
    sorted: Mat<T>,
    row_perms: Vec<Perm>,
}

impl<T: Scalar> JointDistribution<T> {
    pub fn new(mat: Mat<T>) -> Result<Self> {
        if mat.rows() == 0 || mat.cols() == 0 {
            return Err(Error::InvalidDimension("joint distribution must be non-empty".into()));
        }
        if !mat.is_nonnegative() {
            return Err(Error::InvariantViolation("joint distribution has a negative entry".into()));
        }
        let total = mat.total();
        if !total.is_one() {
            return Err(Error::InvariantViolation(format!("total mass {total} != 1")));
        }
        let mut sorted_rows = Vec::with_capacity(mat.rows());
        let mut row_perms = Vec::with_capacity(mat.rows());
        for i in 0..mat.rows() {
            let (s, p) = sort_desc(mat.row(i));
            sorted_rows.push(s);
            row_perms.push(p);
        }
        let sorted = Mat::from_rows(sorted_rows)?;
        Ok(JointDistribution { original: mat, sorted, row_perms })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(Mat::from_rows(rows)?)
    }

    /// Product distribution with marginals `px` (revealed) and `py` (hidden).
    pub fn product(px: &[T], py: &[T]) -> Result<Self> {
        let rows = px.iter().map(|a| py.iter().map(|b| a.clone() * b.clone()).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn original(&self) -> &Mat<T> {
        &self.original
    }

    /// Each row in non-increasing order.
    pub fn sorted(&self) -> &Mat<T> {
        &self.sorted
    }

    /// Per row, the permutation sending original column labels to sorted positions.
    pub fn row_perms(&self) -> &[Perm] {
        &self.row_perms
    }

    pub fn rows(&self) -> usize {
        self.original.rows()
    }

    pub fn cols(&self) -> usize {
        self.original.cols()
    }

    /// Appends zero rows and columns up to `rows x cols`.
    pub fn padded(&self, rows: usize, cols: usize) -> Self {
        Self::new(self.original.padded(rows, cols)).expect("zero padding keeps the invariants")
    }

    /// Renames the revealed values: row `i` moves to `perm[i]`.
    pub fn relabel_revealed(&self, perm: &Perm) -> Self {
        let rows = perm.apply(&self.original.to_rows());
        Self::from_rows(rows).expect("relabeling keeps the invariants")
    }

    /// Marginal distribution of the hidden value.
    pub fn hidden_marginal(&self) -> Vec<T> {
        self.original.col_sums()
    }
}

/// Game matrix `T = (t_{w|z})`: column `z` is a sub-distribution over game sizes `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondGameSpec<T> {
    t: Mat<T>,
}

impl<T: Scalar> CondGameSpec<T> {
    pub fn new(t: Mat<T>) -> Result<Self> {
        validate_game(&t)?;
        Ok(CondGameSpec { t })
    }

    pub fn mat(&self) -> &Mat<T> {
        &self.t
    }

    pub fn num_sizes(&self) -> usize {
        self.t.rows()
    }

    pub fn num_choices(&self) -> usize {
        self.t.cols()
    }
}

pub(crate) fn validate_game<T: Scalar>(t: &Mat<T>) -> Result<()> {
    if t.rows() == 0 || t.cols() == 0 {
        return Err(Error::InvalidGame("game matrix must be non-empty".into()));
    }
    if !t.is_nonnegative() {
        return Err(Error::InvalidGame("game matrix has a negative entry".into()));
    }
    if let Some(z) = t.col_sums().iter().position(|s| *s > T::one()) {
        return Err(Error::InvalidGame(format!("column {z} has mass above 1")));
    }
    Ok(())
}

/// Scales a non-negative matrix so its largest column sum is exactly one.
pub(crate) fn normalize_columns<T: Scalar>(t: Mat<T>) -> Mat<T> {
    let max = t.col_sums().into_iter().fold(T::zero(), |acc, s| if s > acc { s } else { acc });
    if max.is_positive() {
        t.scale(&(T::one() / max))
    } else {
        t
    }
}

/// Optimal payoff and the strategy achieving it (one choice per revealed value,
/// ties to the smallest index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondPayoff<T> {
    pub value: T,
    pub strategy: Vec<usize>,
}

/// `sum_x max_z r_z . p_x` for rows `p_x` already in non-increasing order.
///
/// Works for any non-negative matrices, which makes it usable on the
/// transposed data of a channel game as well.
pub fn payoff_sorted_rows<T: Scalar>(rows: &Mat<T>, game: &Mat<T>) -> CondPayoff<T> {
    let n = rows.cols();
    let profiles: Vec<Vec<T>> = (0..game.cols()).map(|z| fit(&u_apply(&game.col(z)), n)).collect();
    let mut value = T::zero();
    let mut strategy = Vec::with_capacity(rows.rows());
    for x in 0..rows.rows() {
        let row = rows.row(x);
        let mut best: Option<(usize, T)> = None;
        for (z, r) in profiles.iter().enumerate() {
            let v = dot(r, row);
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((z, v));
            }
        }
        let (z, v) = best.unwrap_or((0, T::zero()));
        value = value + v;
        strategy.push(z);
    }
    CondPayoff { value, strategy }
}

pub fn cond_payoff<T: Scalar>(p: &JointDistribution<T>, t: &CondGameSpec<T>) -> CondPayoff<T> {
    payoff_sorted_rows(p.sorted(), t.mat())
}

/// One relabeling term: `S` sub-stochastic, `V` a permutation of hidden values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondTerm<T> {
    pub s: Mat<T>,
    pub v: Perm,
}

/// `Q = sum_z S_z P V_z` with `sum_z S_z` column stochastic, on zero-padded shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondWitness<T> {
    pub terms: Vec<CondTerm<T>>,
}

impl<T: Scalar> CondWitness<T> {
    pub fn reconstruct(&self, p: &Mat<T>) -> Result<Mat<T>> {
        let mut acc: Option<Mat<T>> = None;
        for term in &self.terms {
            let piece = term.s.mul(p)?.mul(&term.v.matrix())?;
            acc = Some(match acc {
                None => piece,
                Some(a) => a.add(&piece)?,
            });
        }
        acc.ok_or_else(|| Error::InvariantViolation("witness has no terms".into()))
    }

    pub fn channel(&self) -> Result<Mat<T>> {
        let mut it = self.terms.iter();
        let first = it.next().ok_or_else(|| Error::InvariantViolation("witness has no terms".into()))?;
        it.try_fold(first.s.clone(), |acc, t| acc.add(&t.s))
    }

    /// Exact check against the original (unsorted) distributions.
    pub fn verify(&self, p: &JointDistribution<T>, q: &JointDistribution<T>) -> bool {
        let (rows, cols) = common_shape(p, q);
        let (pm, qm) = (p.original().padded(rows, cols), q.original().padded(rows, cols));
        let shapes_ok = self
            .terms
            .iter()
            .all(|t| t.s.rows() == rows && t.s.cols() == rows && t.v.len() == cols && t.s.is_nonnegative());
        shapes_ok
            && self.channel().is_ok_and(|s| s.is_column_stochastic())
            && self.reconstruct(&pm).is_ok_and(|r| r == qm)
    }
}

/// A game that `Q` wins strictly more often than `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishingCondGame<T> {
    pub game: CondGameSpec<T>,
    pub payoff_p: T,
    pub payoff_q: T,
}

impl<T: Scalar> DistinguishingCondGame<T> {
    pub fn verify(&self, p: &JointDistribution<T>, q: &JointDistribution<T>) -> bool {
        let pp = cond_payoff(p, &self.game).value;
        let pq = cond_payoff(q, &self.game).value;
        pq > pp && pp == self.payoff_p && pq == self.payoff_q
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondVerdict<T> {
    Holds(CondWitness<T>),
    Fails(DistinguishingCondGame<T>),
}

impl<T> CondVerdict<T> {
    pub fn holds(&self) -> bool {
        matches!(self, CondVerdict::Holds(_))
    }
}

fn common_shape<T: Scalar>(p: &JointDistribution<T>, q: &JointDistribution<T>) -> (usize, usize) {
    (p.rows().max(q.rows()), p.cols().max(q.cols()))
}

/// Decides whether `q` is conditionally majorized by `p` and returns the proof.
pub fn cond_majorizes<T: Scalar>(p: &JointDistribution<T>, q: &JointDistribution<T>) -> Result<CondVerdict<T>> {
    let (m, n) = common_shape(p, q);
    let (p, q) = (p.padded(m, n), q.padded(m, n));
    let p_prefix: Vec<Vec<T>> = (0..m).map(|x| prefix_sums(p.sorted().row(x))).collect();
    let q_prefix: Vec<Vec<T>> = (0..m).map(|w| prefix_sums(q.sorted().row(w))).collect();

    // variables s_{w|x} at w * m + x
    let var = |w: usize, x: usize| w * m + x;
    let rows = m * n + m;
    let mut a = Mat::zeros(rows, m * m);
    let mut b = Vec::with_capacity(rows);
    let mut sense = Vec::with_capacity(rows);
    for w in 0..m {
        for k in 0..n {
            let row = w * n + k;
            for x in 0..m {
                a[(row, var(w, x))] = p_prefix[x][k].clone();
            }
            b.push(q_prefix[w][k].clone());
            sense.push(Relation::Ge);
        }
    }
    for x in 0..m {
        for w in 0..m {
            a[(m * n + x, var(w, x))] = T::one();
        }
        b.push(T::one());
        sense.push(Relation::Eq);
    }
    let prob = LpFeasibilityProblem::new(a, b, sense, vec![true; m * m])?;
    let outcome = solve_feasibility(&prob)?;

    match outcome.status {
        LpStatus::Feasible => {
            let s = outcome.primal.expect("feasible outcome carries a primal");
            let s = Mat::new(m, m, s)?;
            let witness = build_witness(&p, &q, &s)?;
            if !witness.verify(&p, &q) {
                return Err(Error::InvariantViolation("conditional witness failed re-check".into()));
            }
            Ok(CondVerdict::Holds(witness))
        }
        LpStatus::Infeasible => {
            let y = outcome.dual_certificate.expect("infeasible outcome carries a certificate");
            // column w of the game is the block of multipliers on rows (w, 0..n)
            let mut t = Mat::zeros(n, m);
            for w in 0..m {
                for k in 0..n {
                    t[(k, w)] = y[w * n + k].clone();
                }
            }
            let game = CondGameSpec::new(normalize_columns(t))?;
            let payoff_p = cond_payoff(&p, &game).value;
            let payoff_q = cond_payoff(&q, &game).value;
            if payoff_q <= payoff_p {
                return Err(Error::InvariantViolation("Farkas game does not separate the sources".into()));
            }
            Ok(CondVerdict::Fails(DistinguishingCondGame { game, payoff_p, payoff_q }))
        }
    }
}

/// Row `w`: the sorted `q_w` is majorized by `mix_w = sum_x s_{w|x} p_x↓`, so
/// `q_w↓ = mix_w D_w` with `D_w = sum_pi c_{pi|w} pi`. Undoing the sorting of
/// `p_x` and `q_w` folds each `(x, pi)` pair into one permutation of the hidden
/// labels; terms sharing a permutation are merged.
fn build_witness<T: Scalar>(p: &JointDistribution<T>, q: &JointDistribution<T>, s: &Mat<T>) -> Result<CondWitness<T>> {
    let (m, n) = (p.rows(), p.cols());
    let mut terms: BTreeMap<Perm, Mat<T>> = BTreeMap::new();
    for w in 0..m {
        let mut mix = vec![T::zero(); n];
        for x in 0..m {
            let coef = &s[(w, x)];
            if coef.is_zero() {
                continue;
            }
            for (acc, v) in mix.iter_mut().zip(p.sorted().row(x)) {
                *acc = acc.clone() + coef.clone() * v.clone();
            }
        }
        let target = q.sorted().row(w);
        if sum(mix.iter().cloned()) != sum(target.iter().cloned()) {
            return Err(Error::InvariantViolation(format!("row {w} mass differs between mixture and target")));
        }
        let dec = birkhoff(&hlp_transfer(&mix, target)?)?;
        let unsort_q = q.row_perms()[w].inverse();
        for x in 0..m {
            let coef = &s[(w, x)];
            if coef.is_zero() {
                continue;
            }
            for term in &dec.terms {
                let v = p.row_perms()[x].then(&term.perm).then(&unsort_q);
                let entry = terms.entry(v).or_insert_with(|| Mat::zeros(m, m));
                entry[(w, x)] = entry[(w, x)].clone() + term.weight.clone() * coef.clone();
            }
        }
    }
    Ok(CondWitness { terms: terms.into_iter().map(|(v, s)| CondTerm { s, v }).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn random_joint(rng: &mut SplitMix64, m: usize, n: usize) -> JointDistribution<Rat> {
        let w: Vec<i64> = (0..m * n).map(|_| rng.random_range(0..6)).collect();
        let total: i64 = w.iter().sum::<i64>().max(1);
        let mut data: Vec<Rat> = w.iter().map(|&x| r(x, total)).collect();
        if w.iter().all(|&x| x == 0) {
            data[0] = Rat::one();
        }
        JointDistribution::new(Mat::new(m, n, data).unwrap()).unwrap()
    }

    fn random_game(rng: &mut SplitMix64, l: usize, q: usize) -> CondGameSpec<Rat> {
        let mut cols = Vec::new();
        for _ in 0..q {
            let w: Vec<i64> = (0..l).map(|_| rng.random_range(0..5)).collect();
            let total = w.iter().sum::<i64>() + rng.random_range(0..3) + 1;
            cols.push(w.iter().map(|&x| r(x, total)).collect());
        }
        CondGameSpec::new(Mat::from_cols(cols).unwrap()).unwrap()
    }

    fn brute_force_payoff(p: &JointDistribution<Rat>, t: &CondGameSpec<Rat>) -> Rat {
        // enumerate every strategy x -> z and play it out by direct win probabilities
        let (m, q) = (p.rows(), t.num_choices());
        let mut best = Rat::zero();
        for code in 0..q.pow(m as u32) {
            let mut c = code;
            let mut total = Rat::zero();
            for x in 0..m {
                let z = c % q;
                c /= q;
                let row = p.sorted().row(x);
                for w in 1..=t.num_sizes() {
                    let top: Rat = row.iter().take(w).cloned().fold(Rat::zero(), |a, b| a + b);
                    total += t.mat()[(w - 1, z)].clone() * top;
                }
            }
            if total > best {
                best = total;
            }
        }
        best
    }

    #[test]
    fn single_column_game_reduces_to_marginal() {
        let mut rng = SplitMix64::seed_from_u64(1);
        let p = random_joint(&mut rng, 3, 3);
        let t = random_game(&mut rng, 3, 1);
        let rv = u_apply(&t.mat().col(0));
        // no choice: each row sorted separately, so compare against the row-wise sum
        let expected = (0..3).fold(Rat::zero(), |acc, x| acc + dot(&rv, p.sorted().row(x)));
        assert_eq!(cond_payoff(&p, &t).value, expected);
        assert_eq!(cond_payoff(&p, &t).strategy, vec![0, 0, 0]);
    }

    #[test]
    fn product_source_reveals_nothing() {
        let px = vec![r(1, 3), r(2, 3)];
        let py = vec![r(1, 2), r(1, 3), r(1, 6)];
        let p = JointDistribution::product(&px, &py).unwrap();
        let mut rng = SplitMix64::seed_from_u64(2);
        let t = random_game(&mut rng, 3, 4);
        let payoff = cond_payoff(&p, &t);
        let best_single = (0..4).map(|z| dot(&u_apply(&t.mat().col(z)), &py)).max().unwrap();
        assert_eq!(payoff.value, best_single);
        assert!(payoff.strategy.windows(2).all(|s| s[0] == s[1]));
    }

    #[test]
    fn payoff_matches_strategy_enumeration() {
        let mut rng = SplitMix64::seed_from_u64(3);
        for _ in 0..40 {
            let p = random_joint(&mut rng, 3, 3);
            let t = random_game(&mut rng, 3, 2);
            assert_eq!(cond_payoff(&p, &t).value, brute_force_payoff(&p, &t));
        }
    }

    #[test]
    fn stochastic_map_without_permutations_holds() {
        let mut rng = SplitMix64::seed_from_u64(4);
        for _ in 0..20 {
            let p = random_joint(&mut rng, 3, 3);
            let cols: Vec<Vec<Rat>> = (0..3)
                .map(|_| {
                    let w: Vec<i64> = (0..3).map(|_| rng.random_range(0..4)).collect();
                    let t = w.iter().sum::<i64>();
                    if t == 0 {
                        vec![Rat::one(), Rat::zero(), Rat::zero()]
                    } else {
                        w.iter().map(|&x| r(x, t)).collect()
                    }
                })
                .collect();
            let s = Mat::from_cols(cols).unwrap();
            let q = JointDistribution::new(s.mul(p.original()).unwrap()).unwrap();
            let verdict = cond_majorizes(&p, &q).unwrap();
            let CondVerdict::Holds(w) = verdict else { panic!("S P must be majorized by P") };
            assert!(w.verify(&p, &q));
        }
    }

    #[test]
    fn certainty_beats_uncertainty() {
        let p = JointDistribution::from_rows(vec![vec![r(1, 2), Rat::zero()], vec![Rat::zero(), r(1, 2)]]).unwrap();
        let q = JointDistribution::from_rows(vec![vec![r(1, 4), r(1, 4)], vec![r(1, 4), r(1, 4)]]).unwrap();
        let verdict = cond_majorizes(&p, &q).unwrap();
        let CondVerdict::Holds(w) = verdict else { panic!("deterministic source must win") };
        assert!(w.verify(&p, &q));

        let mut rng = SplitMix64::seed_from_u64(8);
        for _ in 0..200 {
            let t = random_game(&mut rng, 2, 3);
            assert!(cond_payoff(&q, &t).value <= cond_payoff(&p, &t).value);
        }

        let verdict = cond_majorizes(&q, &p).unwrap();
        let CondVerdict::Fails(g) = verdict else { panic!("uniform cannot simulate certainty") };
        assert!(g.verify(&q, &p));
        // after normalisation the deterministic source wins with certainty
        assert_eq!(g.payoff_q, g.game.mat().col_sums().into_iter().max().unwrap());
        assert!(g.payoff_p < g.payoff_q);
    }

    #[test]
    fn uniform_joint_against_deterministic_joint() {
        let p = JointDistribution::from_rows(vec![vec![r(1, 4), r(1, 4)], vec![r(1, 4), r(1, 4)]]).unwrap();
        let q =
            JointDistribution::from_rows(vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::zero()]]).unwrap();
        let CondVerdict::Fails(g) = cond_majorizes(&p, &q).unwrap() else { panic!() };
        assert!(g.verify(&p, &q));
        assert_eq!(g.payoff_q, Rat::one());
        assert!(g.payoff_p < Rat::one());
    }

    #[test]
    fn single_row_sources_follow_vector_majorization() {
        use crate::majorization::majorizes;
        use crate::numerics::ProbVector;
        let mut rng = SplitMix64::seed_from_u64(6);
        for _ in 0..40 {
            let p = random_joint(&mut rng, 1, 4);
            let q = random_joint(&mut rng, 1, 4);
            let pv = ProbVector::new(p.original().row(0).to_vec()).unwrap();
            let qv = ProbVector::new(q.original().row(0).to_vec()).unwrap();
            assert_eq!(cond_majorizes(&p, &q).unwrap().holds(), majorizes(&pv, &qv));
        }
    }

    #[test]
    fn mismatched_shapes_are_padded() {
        let p = JointDistribution::from_rows(vec![vec![Rat::one()]]).unwrap();
        let q = JointDistribution::from_rows(vec![vec![r(1, 2), r(1, 4)], vec![r(1, 8), r(1, 8)]]).unwrap();
        match cond_majorizes(&p, &q).unwrap() {
            CondVerdict::Holds(w) => assert!(w.verify(&p, &q)),
            CondVerdict::Fails(_) => panic!("a certain source majorizes everything"),
        }
        match cond_majorizes(&q, &p).unwrap() {
            CondVerdict::Fails(g) => assert!(g.verify(&q, &p)),
            CondVerdict::Holds(_) => panic!("noise cannot produce certainty"),
        }
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(JointDistribution::from_rows(vec![vec![r(1, 2), r(1, 3)]]).is_err());
        assert!(CondGameSpec::new(Mat::from_rows(vec![vec![r(2, 3)], vec![r(2, 3)]]).unwrap()).is_err());
    }
}
