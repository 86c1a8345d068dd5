//! Dense exact matrices over `Z` and `Q`, with the elimination routines the
//! rest of the crate is built on.
//!
//! Everything here is deterministic and allocation-honest; desk-scale models
//! stay comfortably inside dense arithmetic.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMat = Mat<Int>;
pub type RatMat = Mat<Rat>;

impl<T: Clone + Zero> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Mat {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn column(entries: Vec<T>) -> Self {
        let rows = entries.len();
        Mat {
            rows,
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn col_vec(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, cols.start + j)].clone()
        })
    }

    /// Matrix made of the selected columns, in order.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Mat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Mat::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! arith_impl {
    ($t:ty) => {
        impl Mat<$t> {
            pub fn identity(n: usize) -> Self {
                let mut m = Self::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = <$t>::one();
                }
                m
            }

            pub fn mul(&self, other: &Self) -> Self {
                assert_eq!(self.cols, other.rows, "matmul shape mismatch");
                let mut out = Self::zeros(self.rows, other.cols);
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let a = &self[(i, k)];
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..other.cols {
                            let b = &other[(k, j)];
                            if !b.is_zero() {
                                let p = a.clone() * b.clone();
                                out[(i, j)] += p;
                            }
                        }
                    }
                }
                out
            }

            pub fn mul_vec(&self, v: &[$t]) -> Vec<$t> {
                assert_eq!(self.cols, v.len(), "matvec shape mismatch");
                let mut out = vec![<$t>::zero(); self.rows];
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        let a = &self[(i, j)];
                        if !a.is_zero() && !v[j].is_zero() {
                            out[i] += a.clone() * v[j].clone();
                        }
                    }
                }
                out
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!((self.rows, self.cols), (other.rows, other.cols));
                let mut out = self.clone();
                for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
                    *a += b.clone();
                }
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                assert_eq!((self.rows, self.cols), (other.rows, other.cols));
                let mut out = self.clone();
                for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
                    *a -= b.clone();
                }
                out
            }

            pub fn neg(&self) -> Self {
                self.map(|x| -x.clone())
            }

            pub fn scale(&self, c: &$t) -> Self {
                self.map(|x| x.clone() * c.clone())
            }
        }
    };
}

arith_impl!(Int);
arith_impl!(Rat);

impl IntMat {
    pub fn to_rat(&self) -> RatMat {
        self.map(|x| Rat::from(x.clone()))
    }
}

impl RatMat {
    /// True if every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMat> {
        if !self.is_integral() {
            return None;
        }
        Some(self.map(|x| x.to_integer()))
    }

    /// Smallest positive integer `m` with `m * self` integral.
    pub fn denominator_lcm(&self) -> Int {
        let mut l = Int::one();
        for x in &self.data {
            l = num_integer::lcm(l, x.denom().clone());
        }
        l
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    let a = self[(p, j)].clone();
                    let b = self[(r, j)].clone();
                    self[(p, j)] = b;
                    self[(r, j)] = a;
                }
            }
            let inv = self[(r, c)].clone();
            for j in c..self.cols {
                let v = self[(r, j)].clone() / inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let factor = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = self[(i, j)].clone() - factor.clone() * self[(r, j)].clone();
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel, as matrix columns. The basis is the standard
    /// rref one (free variable set to 1, pivots solved).
    pub fn kernel_basis(&self) -> RatMat {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = RatMat::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = Rat::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = -m[(pr, fc)].clone();
            }
        }
        out
    }

    /// Solve `self * x = rhs` column-by-column; `None` if any column is
    /// inconsistent.
    pub fn solve(&self, rhs: &RatMat) -> Option<RatMat> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = self.hcat(rhs);
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = RatMat::zeros(self.cols, rhs.cols);
        for (pr, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = aug[(pr, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Indices of a maximal independent subset of columns (pivot columns).
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut m = self.clone();
        m.rref_in_place()
    }

    /// Inverse of a square matrix; `None` if singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let mut aug = self.hcat(&RatMat::identity(self.rows));
        let pivots = aug.rref_in_place();
        if pivots.len() != self.rows || pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        Some(aug.submatrix(0..self.rows, self.cols..2 * self.cols))
    }

    /// Does `v` lie in the column span?
    pub fn col_space_contains(&self, v: &[Rat]) -> bool {
        let rhs = RatMat::column(v.to_vec());
        self.solve(&rhs).is_some()
    }
}

/// Scale a rational vector by the lcm of denominators, returning the integer
/// vector and the scale.
pub fn clear_denominators(v: &[Rat]) -> (Vec<Int>, Int) {
    let mut l = Int::one();
    for x in v {
        l = num_integer::lcm(l, x.denom().clone());
    }
    let ints = v
        .iter()
        .map(|x| (x.clone() * Rat::from(l.clone())).to_integer())
        .collect();
    (ints, l)
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn vec_neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn vec_scale(a: &[Rat], c: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

pub fn vec_is_zero(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn vec_is_integral(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_integer())
}

/// Reduce each coordinate to its fractional part in `[0, 1)`.
pub fn vec_mod_one(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(rat_mod_one).collect()
}

pub fn rat_mod_one(x: &Rat) -> Rat {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}
