//! Exact vectors, matrices and permutations, plus the ordering primitives
//! shared by every pre-order: stable descending sort and the upper-triangular
//! all-ones matrix `U` that turns a game distribution `t` into its reward
//! profile `r = U t`.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};

/// Permutation of `0..n`, stored as the image of each index.
///
/// The associated matrix has a one at `(i, perm[i])`, so multiplying a row
/// vector by it moves entry `i` to position `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidDimension(format!("{images:?} is not a permutation of 0..{n}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Reads a permutation off a 0/1 matrix with exactly one unit per row and column.
    pub fn from_matrix<T: Scalar>(m: &Mat<T>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::InvalidDimension("permutation matrix must be square".into()));
        }
        let mut images = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let row = m.row(i);
            let ones: Vec<usize> = (0..row.len()).filter(|&j| row[j].is_one()).collect();
            let zeros = row.iter().filter(|x| x.is_zero()).count();
            if ones.len() != 1 || zeros + 1 != row.len() {
                return Err(Error::InvariantViolation(format!("row {i} is not a unit vector")));
            }
            images.push(ones[0]);
        }
        Perm::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `self` followed by `next`; the matrix equals `self.matrix() * next.matrix()`.
    pub fn then(&self, next: &Perm) -> Self {
        Perm(self.0.iter().map(|&j| next.0[j]).collect())
    }

    pub fn matrix<T: Scalar>(&self) -> Mat<T> {
        let n = self.len();
        let mut m = Mat::zeros(n, n);
        for (i, &j) in self.0.iter().enumerate() {
            m[(i, j)] = T::one();
        }
        m
    }

    /// Moves `v[i]` to position `self[i]`.
    pub fn apply<T: Clone>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len(), "permutation length mismatch");
        let mut out: Vec<Option<T>> = vec![None; v.len()];
        for (i, x) in v.iter().enumerate() {
            out[self.0[i]] = Some(x.clone());
        }
        out.into_iter().map(|x| x.expect("bijection")).collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidDimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidDimension("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_cols(cols: Vec<Vec<T>>) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Mat<T>) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidDimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        let col = Mat::new(v.len(), 1, v.to_vec())?;
        Ok(self.mul(&col)?.data)
    }

    /// `v * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[T]) -> Result<Vec<T>> {
        let row = Mat::new(1, v.len(), v.to_vec())?;
        Ok(row.mul(self)?.data)
    }

    pub fn add(&self, rhs: &Mat<T>) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::InvalidDimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Kronecker product; for transition matrices this is the parallel composition of channels.
    pub fn kron(&self, rhs: &Mat<T>) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = self[(i, j)].clone() * rhs[(k, l)].clone();
                    }
                }
            }
        }
        out
    }

    /// Zero-pads to at least `rows x cols`; never truncates.
    pub fn padded(&self, rows: usize, cols: usize) -> Self {
        let (rows, cols) = (rows.max(self.rows), cols.max(self.cols));
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows).map(|i| sum(self.row(i).iter().cloned())).collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        (0..self.cols).map(|j| sum(self.col(j))).collect()
    }

    pub fn total(&self) -> T {
        sum(self.data.iter().cloned())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_column_stochastic(&self) -> bool {
        self.is_nonnegative() && self.col_sums().iter().all(T::is_one)
    }

    pub fn is_column_substochastic(&self) -> bool {
        self.is_nonnegative() && self.col_sums().iter().all(|s| *s <= T::one())
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        self.rows == self.cols && self.is_column_stochastic() && self.row_sums().iter().all(T::is_one)
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Finite probability distribution: non-negative entries summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbVector<T>(Vec<T>);

impl<T: Scalar> ProbVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension("probability vector must be non-empty".into()));
        }
        if let Some(i) = entries.iter().position(|x| x.is_negative()) {
            return Err(Error::InvariantViolation(format!("entry {i} is negative")));
        }
        let mass = sum(entries.iter().cloned());
        if !mass.is_one() {
            return Err(Error::InvariantViolation(format!("mass {mass} != 1")));
        }
        Ok(ProbVector(entries))
    }

    pub fn uniform(d: usize) -> Self {
        assert!(d > 0, "uniform distribution needs d >= 1");
        let w = T::one() / T::from_count(d);
        ProbVector(vec![w; d])
    }

    pub fn point_mass(d: usize, at: usize) -> Self {
        assert!(at < d, "point mass index out of range");
        let mut v = vec![T::zero(); d];
        v[at] = T::one();
        ProbVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn sorted_desc(&self) -> Vec<T> {
        sort_desc(&self.0).0
    }

    /// Product distribution `self ⊗ other`, outer index from `self`.
    pub fn tensor(&self, other: &ProbVector<T>) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a.clone() * b.clone());
            }
        }
        ProbVector(out)
    }

    pub fn permuted(&self, perm: &Perm) -> Self {
        ProbVector(perm.apply(&self.0))
    }
}

/// Possibly incomplete distribution over game sizes: non-negative, mass at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubDistribution<T>(Vec<T>);

impl<T: Scalar> SubDistribution<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|x| x.is_negative()) {
            return Err(Error::InvalidGame(format!("entry {i} is negative")));
        }
        let mass = sum(entries.iter().cloned());
        if mass > T::one() {
            return Err(Error::InvalidGame(format!("mass {mass} exceeds 1")));
        }
        Ok(SubDistribution(entries))
    }

    pub fn zero(m: usize) -> Self {
        SubDistribution(vec![T::zero(); m])
    }

    /// The deterministic `w`-guess game (`w` is 1-based).
    pub fn indicator(m: usize, w: usize) -> Self {
        assert!(w >= 1 && w <= m, "game size {w} outside 1..={m}");
        let mut v = vec![T::zero(); m];
        v[w - 1] = T::one();
        SubDistribution(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn mass(&self) -> T {
        sum(self.0.iter().cloned())
    }
}

/// Stable sort into non-increasing order.
///
/// Returns the sorted values and the permutation sending each original index
/// to its sorted position; equal values keep their original relative order.
pub fn sort_desc<T: Scalar>(v: &[T]) -> (Vec<T>, Perm) {
    let mut order: Vec<usize> = (0..v.len()).collect();
    // sort_by is stable
    order.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap_or(std::cmp::Ordering::Equal));
    let sorted = order.iter().map(|&i| v[i].clone()).collect();
    let mut position = vec![0; v.len()];
    for (pos, &orig) in order.iter().enumerate() {
        position[orig] = pos;
    }
    (sorted, Perm(position))
}

/// `m x m` matrix with ones on and above the diagonal.
pub fn u_matrix<T: Scalar>(m: usize) -> Result<Mat<T>> {
    if m < 1 {
        return Err(Error::InvalidDimension("U needs m >= 1".into()));
    }
    let mut u = Mat::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            u[(i, j)] = T::one();
        }
    }
    Ok(u)
}

/// Bidiagonal inverse of [`u_matrix`]: ones on the diagonal, minus ones just above it.
pub fn u_inverse<T: Scalar>(m: usize) -> Result<Mat<T>> {
    if m < 1 {
        return Err(Error::InvalidDimension("U needs m >= 1".into()));
    }
    let mut u = Mat::identity(m);
    for i in 0..m - 1 {
        u[(i, i + 1)] = -T::one();
    }
    Ok(u)
}

/// Reward profile `r = U t`, i.e. suffix sums `r_x = sum_{k >= x} t_k`.
pub fn u_apply<T: Scalar>(t: &[T]) -> Vec<T> {
    let mut r = vec![T::zero(); t.len()];
    let mut acc = T::zero();
    for (i, x) in t.iter().enumerate().rev() {
        acc = acc + x.clone();
        r[i] = acc.clone();
    }
    r
}

/// Consecutive differences `t_x = r_x - r_{x+1}` (with `r_{m+1} = 0`), the inverse of [`u_apply`].
pub fn u_inverse_apply<T: Scalar>(r: &[T]) -> Vec<T> {
    (0..r.len())
        .map(|i| match r.get(i + 1) {
            Some(next) => r[i].clone() - next.clone(),
            None => r[i].clone(),
        })
        .collect()
}

/// Prefix sums, i.e. `U^T v`.
pub fn prefix_sums<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut acc = T::zero();
    v.iter()
        .map(|x| {
            acc = acc.clone() + x.clone();
            acc.clone()
        })
        .collect()
}

/// Resizes `v` to length `n`, dropping the tail or appending zeros.
pub(crate) fn fit<T: Scalar>(v: &[T], n: usize) -> Vec<T> {
    let mut out: Vec<T> = v.iter().take(n).cloned().collect();
    out.resize(n, T::zero());
    out
}
