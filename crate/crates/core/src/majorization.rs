//! Dice games and the majorization pre-order.

use crate::error::{Error, Result};
use crate::numerics::{fit, u_apply, ProbVector, SubDistribution};
use crate::scalar::{dot, sum, Scalar};

fn ky_fan_sorted<T: Scalar>(sorted: &[T], w: usize) -> T {
    sum(sorted.iter().take(w).cloned())
}

/// Win probability of the `w`-guess game: the sum of the `w` largest entries.
/// Games larger than the dimension always win.
pub fn ky_fan<T: Scalar>(p: &ProbVector<T>, w: usize) -> Result<T> {
    if w < 1 {
        return Err(Error::InvalidGame("a game needs at least one guess".into()));
    }
    Ok(ky_fan_sorted(&p.sorted_desc(), w))
}

/// Optimal win probability when the game size is drawn from `t`: `(U t) . p↓`.
pub fn game_payoff<T: Scalar>(p: &ProbVector<T>, t: &SubDistribution<T>) -> T {
    let r = u_apply(t.entries());
    let sorted = fit(&p.sorted_desc(), r.len());
    dot(&r, &sorted)
}

/// Smallest game size `w` (1-based) at which `q` beats `p`, if any.
pub fn majorization_violation<T: Scalar>(p: &ProbVector<T>, q: &ProbVector<T>) -> Option<usize> {
    let (ps, qs) = (p.sorted_desc(), q.sorted_desc());
    let d = ps.len().max(qs.len());
    let (mut acc_p, mut acc_q) = (T::zero(), T::zero());
    for w in 0..d {
        if let Some(x) = ps.get(w) {
            acc_p = acc_p + x.clone();
        }
        if let Some(x) = qs.get(w) {
            acc_q = acc_q + x.clone();
        }
        if acc_q > acc_p {
            return Some(w + 1);
        }
    }
    None
}

/// `true` iff `p` majorizes `q`, i.e. `p` wins every dice game at least as often as `q`.
///
/// Payoffs are non-negative combinations of Ky-Fan norms, so checking every
/// deterministic game size decides the quantifier over all distributions `t`.
pub fn majorizes<T: Scalar>(p: &ProbVector<T>, q: &ProbVector<T>) -> bool {
    majorization_violation(p, q).is_none()
}

/// Win probability of the `w`-guess game played on the pair `(p, s)`.
pub fn tensor_game_payoff<T: Scalar>(p: &ProbVector<T>, s: &ProbVector<T>, w: usize) -> Result<T> {
    ky_fan(&p.tensor(s), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Perm;
    use crate::Rat;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn pv(v: &[(i64, i64)]) -> ProbVector<Rat> {
        ProbVector::new(v.iter().map(|&(n, d)| r(n, d)).collect()).unwrap()
    }

    fn worked_pair() -> (ProbVector<Rat>, ProbVector<Rat>) {
        (pv(&[(1, 2), (1, 2), (0, 1)]), pv(&[(2, 3), (1, 6), (1, 6)]))
    }

    #[test]
    fn ky_fan_examples() {
        let (p, q) = worked_pair();
        assert_eq!(ky_fan(&p, 2).unwrap(), Rat::one());
        assert_eq!(ky_fan(&q, 1).unwrap(), r(2, 3));
        assert_eq!(ky_fan(&q, 3).unwrap(), Rat::one());
        assert_eq!(ky_fan(&q, 7).unwrap(), Rat::one());
        assert!(matches!(ky_fan(&q, 0), Err(Error::InvalidGame(_))));
    }

    #[test]
    fn game_payoff_examples() {
        let (_, q) = worked_pair();
        let t = SubDistribution::new(vec![r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(game_payoff(&q, &t), r(3, 4));
        assert_eq!(game_payoff(&q, &SubDistribution::zero(3)), Rat::zero());
        for w in 1..=5 {
            let t = SubDistribution::indicator(5, w);
            assert_eq!(game_payoff(&q, &t), ky_fan(&q, w).unwrap());
        }
    }

    #[test]
    fn worked_pair_is_incomparable() {
        let (p, q) = worked_pair();
        assert!(!majorizes(&p, &q));
        assert!(!majorizes(&q, &p));
        assert_eq!(majorization_violation(&p, &q), Some(1));
        assert_eq!(majorization_violation(&q, &p), Some(2));
    }

    #[test]
    fn tensor_examples() {
        let (p, _) = worked_pair();
        let point = ProbVector::point_mass(3, 1);
        for w in 1..=4 {
            assert_eq!(tensor_game_payoff(&p, &point, w).unwrap(), ky_fan(&p, w).unwrap());
        }
        let u2 = ProbVector::<Rat>::uniform(2);
        assert_eq!(tensor_game_payoff(&u2, &u2, 2).unwrap(), r(1, 2));
    }

    fn prob(len: usize) -> impl Strategy<Value = ProbVector<Rat>> {
        prop::collection::vec(0i64..6, len).prop_filter_map("non-zero mass", |w| {
            let total: i64 = w.iter().sum();
            (total > 0).then(|| ProbVector::new(w.iter().map(|&x| r(x, total)).collect()).unwrap())
        })
    }

    fn sub(len: usize) -> impl Strategy<Value = SubDistribution<Rat>> {
        (prop::collection::vec(0i64..6, len), 0i64..6).prop_map(|(w, extra)| {
            let total: i64 = w.iter().sum::<i64>() + extra + 1;
            SubDistribution::new(w.iter().map(|&x| r(x, total)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn uniform_is_minimal(p in prob(5)) {
            prop_assert!(majorizes(&p, &ProbVector::uniform(5)));
        }

        #[test]
        fn ky_fan_is_monotone_and_concave(p in prob(6)) {
            let k: Vec<Rat> = (1..=7).map(|w| ky_fan(&p, w).unwrap()).collect();
            prop_assert!(k.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(k.windows(3).all(|w| w[1].clone() - w[0].clone() >= w[2].clone() - w[1].clone()));
            prop_assert_eq!(&k[5], &Rat::one());
        }

        #[test]
        fn payoff_is_combination_of_ky_fan(p in prob(4), t in sub(5)) {
            let direct = t.entries().iter().enumerate()
                .map(|(k, tk)| tk.clone() * ky_fan(&p, k + 1).unwrap())
                .fold(Rat::zero(), |a, b| a + b);
            prop_assert_eq!(game_payoff(&p, &t), direct);
        }

        #[test]
        fn majorization_agrees_with_sampled_games(p in prob(4), q in prob(4), ts in prop::collection::vec(sub(4), 100)) {
            let verdict = majorizes(&p, &q);
            if verdict {
                for t in &ts {
                    prop_assert!(game_payoff(&q, t) <= game_payoff(&p, t));
                }
            } else {
                let w = majorization_violation(&p, &q).unwrap();
                prop_assert!(ky_fan(&q, w).unwrap() > ky_fan(&p, w).unwrap());
            }
        }

        #[test]
        fn preorder_laws(p in prob(4), q in prob(4), s in prob(4)) {
            prop_assert!(majorizes(&p, &p));
            if majorizes(&p, &q) && majorizes(&q, &s) {
                prop_assert!(majorizes(&p, &s));
            }
        }

        #[test]
        fn permutation_invariance(p in prob(4), q in prob(4), perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
            let perm = Perm::from_images(perm).unwrap();
            prop_assert_eq!(majorizes(&p, &q), majorizes(&p.permuted(&perm), &q));
            prop_assert_eq!(majorizes(&p, &q), majorizes(&p, &q.permuted(&perm)));
        }

        #[test]
        fn resources_preserve_the_order(p in prob(3), q in prob(3), s in prob(3)) {
            if majorizes(&p, &q) {
                for w in 1..=9 {
                    prop_assert!(tensor_game_payoff(&p, &s, w).unwrap() >= tensor_game_payoff(&q, &s, w).unwrap());
                }
            }
        }

        #[test]
        fn padding_with_zeros_is_neutral(p in prob(3), q in prob(3)) {
            let mut padded = p.entries().to_vec();
            padded.push(Rat::zero());
            let padded = ProbVector::new(padded).unwrap();
            prop_assert_eq!(majorizes(&p, &q), majorizes(&padded, &q));
            prop_assert!(majorizes(&p, &padded) && majorizes(&padded, &p));
        }
    }
}
