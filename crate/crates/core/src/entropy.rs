//! Channel entropy `H(N) = min_x H(N(x))` and checks of its defining axioms.

use std::fmt;

use serde::Serialize;

use crate::channel::{chan_majorizes, ChannelMatrix};
use crate::error::{Error, Result};
use crate::numerics::ProbVector;
use crate::scalar::Scalar;

/// Comparison tolerance for entropies, which are evaluated in floating point.
pub const ENTROPY_TOL: f64 = 1e-12;

/// Entropy in bits.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct EntropyValue(pub f64);

impl EntropyValue {
    pub fn bits(self) -> f64 {
        self.0
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} bits", self.0)
    }
}

fn shannon_f64(p: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 = p.into_iter().filter(|&x| x > 0.0).map(|x| -x * x.log2()).sum();
    // a point mass would otherwise give -0.0
    h.max(0.0)
}

pub fn shannon<T: Scalar>(p: &ProbVector<T>) -> EntropyValue {
    EntropyValue(shannon_f64(p.entries().iter().map(Scalar::to_f64_lossy)))
}

/// `h2(eps) = -eps log eps - (1 - eps) log (1 - eps)`.
pub fn binary_entropy(eps: f64) -> f64 {
    shannon_f64([eps, 1.0 - eps])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelEntropy {
    pub value: EntropyValue,
    pub minimizing_input: usize,
}

/// Smallest output entropy over all inputs; ties go to the smallest input.
pub fn channel_entropy<T: Scalar>(n: &ChannelMatrix<T>) -> ChannelEntropy {
    let mut best = ChannelEntropy { value: EntropyValue(f64::INFINITY), minimizing_input: 0 };
    for x in 0..n.num_inputs() {
        let h = shannon_f64(n.column(x).iter().map(Scalar::to_f64_lossy));
        if h < best.value.0 {
            best = ChannelEntropy { value: EntropyValue(h), minimizing_input: x };
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub pairs: usize,
    pub majorized_pairs: usize,
    /// Largest `H(N) - H(M)` over pairs with `M` majorized by `N`; non-positive up to tolerance.
    pub worst_monotonicity: f64,
    pub worst_additivity: f64,
}

/// Checks monotonicity under channel majorization and additivity under tensor
/// products for every pair `(M, N)`.
pub fn check_entropy_axioms<T: Scalar>(pairs: &[(ChannelMatrix<T>, ChannelMatrix<T>)]) -> Result<AxiomReport> {
    let mut report = AxiomReport {
        pairs: pairs.len(),
        majorized_pairs: 0,
        worst_monotonicity: f64::NEG_INFINITY,
        worst_additivity: 0.0,
    };
    for (i, (m, n)) in pairs.iter().enumerate() {
        let (hm, hn) = (channel_entropy(m).value.0, channel_entropy(n).value.0);
        for (a, b, ha, hb) in [(m, n, hm, hn), (n, m, hn, hm)] {
            if chan_majorizes(a, b)?.holds() {
                report.majorized_pairs += 1;
                report.worst_monotonicity = report.worst_monotonicity.max(hb - ha);
                if ha < hb - ENTROPY_TOL {
                    return Err(Error::AxiomViolation {
                        pair: i,
                        detail: format!("majorized channel has entropy {ha} below {hb}"),
                    });
                }
            }
        }
        let joint = channel_entropy(&n.tensor(m)).value.0;
        let gap = (joint - hn - hm).abs();
        report.worst_additivity = report.worst_additivity.max(gap);
        if gap > ENTROPY_TOL {
            return Err(Error::AxiomViolation {
                pair: i,
                detail: format!("H(N x M) = {joint} but H(N) + H(M) = {}", hn + hm),
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub epsilon: f64,
    pub gap: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares `|H(N) - H(M)|` with `eps log(m - 1) + h2(eps)`, `eps` being the
/// largest total-variation distance between corresponding columns. Past
/// `eps = 1 - 1/m` the bound saturates at `log m`.
pub fn continuity_bound_check<T: Scalar>(n: &ChannelMatrix<T>, m: &ChannelMatrix<T>) -> Result<ContinuityReport> {
    if n.num_outputs() != m.num_outputs() || n.num_inputs() != m.num_inputs() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} channel against {}x{}",
            n.num_outputs(),
            n.num_inputs(),
            m.num_outputs(),
            m.num_inputs()
        )));
    }
    let epsilon = (0..n.num_inputs())
        .map(|x| {
            let tv: f64 = n.column(x).iter().zip(m.column(x)).map(|(a, b)| (a.clone() - b).abs().to_f64_lossy()).sum();
            tv / 2.0
        })
        .fold(0.0, f64::max);
    let d = n.num_outputs() as f64;
    let bound = if d <= 1.0 {
        0.0
    } else if epsilon <= 1.0 - 1.0 / d {
        epsilon * (d - 1.0).log2() + binary_entropy(epsilon)
    } else {
        d.log2()
    };
    let gap = (channel_entropy(n).value.0 - channel_entropy(m).value.0).abs();
    Ok(ContinuityReport { epsilon, gap, bound, holds: gap <= bound + ENTROPY_TOL })
}
