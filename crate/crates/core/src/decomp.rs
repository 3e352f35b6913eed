//! Constructive doubly stochastic matrices: T-transform chains realising a
//! majorization relation, and the Birkhoff–von Neumann split of a doubly
//! stochastic matrix into weighted permutations.

use crate::error::{Error, Result};
use crate::numerics::{prefix_sums, sort_desc, Mat, Perm};
use crate::scalar::{sum, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublyStochastic<T> {
    mat: Mat<T>,
}

impl<T: Scalar> DoublyStochastic<T> {
    pub fn new(mat: Mat<T>) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::InvariantViolation(format!(
                "doubly stochastic matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        if !mat.is_doubly_stochastic() {
            return Err(Error::InvariantViolation("matrix is not doubly stochastic".into()));
        }
        Ok(DoublyStochastic { mat })
    }

    pub fn identity(n: usize) -> Self {
        DoublyStochastic { mat: Mat::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<T> {
        self.mat
    }

    pub fn transpose(&self) -> Self {
        DoublyStochastic { mat: self.mat.transpose() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirkhoffTerm<T> {
    pub weight: T,
    pub perm: Perm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirkhoffDecomposition<T> {
    pub terms: Vec<BirkhoffTerm<T>>,
}

impl<T: Scalar> BirkhoffDecomposition<T> {
    pub fn reconstruct(&self, n: usize) -> Mat<T> {
        self.terms.iter().fold(Mat::zeros(n, n), |acc, term| {
            acc.add(&term.perm.matrix::<T>().scale(&term.weight)).expect("square terms")
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Carathéodory bound on the number of permutations needed for an `n x n` matrix.
pub fn birkhoff_term_bound(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (n - 1) * (n - 1) + 1
    }
}

/// Doubly stochastic `D` with `b = a D` (row vectors), for `b` majorized by `a`.
///
/// Works on the sorted vectors with the classical chain of at most `n - 1`
/// T-transforms, then conjugates by the two sorting permutations.
pub fn hlp_transfer<T: Scalar>(a: &[T], b: &[T]) -> Result<DoublyStochastic<T>> {
    if a.len() != b.len() {
        return Err(Error::InvalidDimension(format!("vectors of length {} and {}", a.len(), b.len())));
    }
    let n = a.len();
    let (a_sorted, a_perm) = sort_desc(a);
    let (b_sorted, b_perm) = sort_desc(b);
    let (pa, pb) = (prefix_sums(&a_sorted), prefix_sums(&b_sorted));
    for k in 0..n {
        let bad = if k + 1 == n { pb[k] != pa[k] } else { pb[k] > pa[k] };
        if bad {
            return Err(Error::NotMajorized { prefix: k + 1 });
        }
    }

    let mut x = a_sorted;
    let mut chain = Mat::identity(n);
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&i| x[i] > b_sorted[i]) else {
            break;
        };
        let k =
            (j + 1..n).find(|&i| x[i] < b_sorted[i]).expect("mass conservation leaves a deficit after every surplus");
        let surplus = x[j].clone() - b_sorted[j].clone();
        let deficit = b_sorted[k].clone() - x[k].clone();
        let delta = if surplus < deficit { surplus } else { deficit };
        let mix = delta.clone() / (x[j].clone() - x[k].clone());
        x[j] = x[j].clone() - delta.clone();
        x[k] = x[k].clone() + delta;
        chain = chain.mul(&t_transform(n, j, k, &mix))?;
    }
    if x != b_sorted {
        return Err(Error::InvariantViolation("T-transform chain did not converge".into()));
    }
    // b = b_sorted Pb^T = a Pa chain Pb^T
    let d = a_perm.matrix().mul(&chain)?.mul(&b_perm.inverse().matrix())?;
    DoublyStochastic::new(d)
}

/// `(1 - mix) I + mix * swap(j, k)`.
fn t_transform<T: Scalar>(n: usize, j: usize, k: usize, mix: &T) -> Mat<T> {
    let mut t = Mat::identity(n);
    let stay = T::one() - mix.clone();
    t[(j, j)] = stay.clone();
    t[(k, k)] = stay;
    t[(j, k)] = mix.clone();
    t[(k, j)] = mix.clone();
    t
}

/// Greedy Birkhoff peeling: find a perfect matching on the support, subtract
/// its bottleneck weight, repeat. Each step shrinks the support, so the face
/// of the Birkhoff polytope drops in dimension and the term count stays within
/// [`birkhoff_term_bound`].
pub fn birkhoff<T: Scalar>(d: &DoublyStochastic<T>) -> Result<BirkhoffDecomposition<T>> {
    let n = d.dim();
    if n == 0 {
        return Err(Error::InvalidDimension("empty matrix".into()));
    }
    let mut rest = d.mat().clone();
    let mut terms = Vec::new();
    let mut remaining = T::one();
    while remaining.is_positive() {
        let perm = support_matching(&rest)
            .ok_or_else(|| Error::InvariantViolation("support has no perfect matching".into()))?;
        let weight =
            (0..n).map(|i| rest[(i, perm.image(i))].clone()).reduce(|a, b| if b < a { b } else { a }).expect("n >= 1");
        for i in 0..n {
            let j = perm.image(i);
            rest[(i, j)] = rest[(i, j)].clone() - weight.clone();
        }
        remaining = remaining - weight.clone();
        terms.push(BirkhoffTerm { weight, perm });
        if terms.len() > birkhoff_term_bound(n) {
            return Err(Error::InvariantViolation("Birkhoff peeling exceeded term bound".into()));
        }
    }
    let dec = BirkhoffDecomposition { terms };
    if dec.reconstruct(n) != *d.mat() || sum(dec.terms.iter().map(|t| t.weight.clone())) != T::one() {
        return Err(Error::InvariantViolation("Birkhoff reconstruction mismatch".into()));
    }
    Ok(dec)
}

/// Perfect matching of rows to columns on positive entries, by augmenting
/// paths; rows are processed in order and columns tried in increasing index.
fn support_matching<T: Scalar>(m: &Mat<T>) -> Option<Perm> {
    let n = m.rows();
    let mut col_owner: Vec<Option<usize>> = vec![None; n];

    fn augment<T: Scalar>(m: &Mat<T>, row: usize, visited: &mut [bool], col_owner: &mut [Option<usize>]) -> bool {
        for col in 0..m.cols() {
            if visited[col] || !m[(row, col)].is_positive() {
                continue;
            }
            visited[col] = true;
            let free = match col_owner[col] {
                None => true,
                Some(other) => augment(m, other, visited, col_owner),
            };
            if free {
                col_owner[col] = Some(row);
                return true;
            }
        }
        false
    }

    for row in 0..n {
        let mut visited = vec![false; n];
        if !augment(m, row, &mut visited, &mut col_owner) {
            return None;
        }
    }
    let mut images = vec![0; n];
    for (col, owner) in col_owner.iter().enumerate() {
        images[owner.expect("perfect matching")] = col;
    }
    Perm::from_images(images).ok()
}
