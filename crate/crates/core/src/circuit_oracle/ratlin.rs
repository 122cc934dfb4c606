//! Exact dense linear algebra over arbitrary-precision rationals.
//!
//! Everything here is plain fraction-free-ish Gaussian elimination on
//! `BigRational` entries: rank, reduced row echelon form, kernel bases, and
//! a general consistent-system solver. Sizes are tiny (oracle caps), so
//! clarity wins over cleverness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

pub type Rat = BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact rational value of a finite f64 (every finite double is a dyadic
/// rational). Panics on NaN/infinity.
pub fn rat_from_f64(v: f64) -> Rat {
    Rat::from_float(v).expect("finite value required for exact conversion")
}

/// Nearest f64 to the rational (round-trip loses exactness, of course).
pub fn rat_to_f64(r: &Rat) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rat>>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![vec![Rat::zero(); cols]; rows],
        }
    }

    pub fn from_rows(data: Vec<Vec<Rat>>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rational matrix".into()));
        }
        Ok(RatMat { rows, cols, data })
    }

    /// Convenience constructor from integer literals (tests, oracles).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect();
        RatMat::from_rows(data).expect("literal rows must be rectangular")
    }

    /// Exact copy of a sparse f64 matrix.
    pub fn from_sparse(a: &SparseMatrix) -> Self {
        let mut out = RatMat::zeros(a.rows(), a.cols());
        for (i, j, v) in a.triplets() {
            out.data[i][j] = rat_from_f64(v);
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i]
    }

    pub fn transpose(&self) -> RatMat {
        let mut out = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    /// Columns listed in `keep`, in order.
    pub fn col_submatrix(&self, keep: &[usize]) -> RatMat {
        let data = self
            .data
            .iter()
            .map(|row| keep.iter().map(|&j| row[j].clone()).collect())
            .collect();
        RatMat {
            rows: self.rows,
            cols: keep.len(),
            data,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().chain(b.iter()).cloned().collect())
            .collect();
        RatMat {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// `[self | -I]`, the kernel-defining matrix of the extended space
    /// {(x, y) : self * x = y}.
    pub fn neg_identity_extension(&self) -> RatMat {
        let mut ext = RatMat::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            ext.data[i][i] = -Rat::one();
        }
        self.hstack(&ext)
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `self * other`.
    pub fn mul_mat(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += t;
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place. Returns the pivot column indices
    /// in row order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.data[r][col].is_zero()) else {
                continue;
            };
            self.data.swap(row, p);
            let inv = self.data[row][col].recip();
            for j in col..self.cols {
                let t = &self.data[row][j] * &inv;
                self.data[row][j] = t;
            }
            for r in 0..self.rows {
                if r != row && !self.data[r][col].is_zero() {
                    let factor = self.data[r][col].clone();
                    for j in col..self.cols {
                        let t = &self.data[row][j] * &factor;
                        self.data[r][j] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{ z : self * z = 0 }`, one vector per free column of the
    /// echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rat::zero(); self.cols];
            vec[free] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                vec[c] = -m.data[r][free].clone();
            }
            basis.push(vec);
        }
        basis
    }

    /// Any exact solution of `self * z = rhs`; None iff inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, rhs: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = self.clone();
        for (row, r) in aug.data.iter_mut().zip(rhs) {
            row.push(r.clone());
        }
        aug.cols += 1;
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&(self.cols)) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut z = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            z[c] = aug.data[r][self.cols].clone();
        }
        Some(z)
    }
}

/// Scales a rational vector to coprime integers with the first nonzero entry
/// positive. Panics on the zero vector.
pub fn coprime_integer_representative(v: &[Rat]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut denom_lcm = BigInt::one();
    for e in v {
        if !e.is_zero() {
            denom_lcm = denom_lcm.lcm(e.denom());
        }
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|e| (e * Rat::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for e in &ints {
        g = g.gcd(e);
    }
    assert!(!g.is_zero(), "zero vector has no integer representative");
    let first = ints
        .iter()
        .find(|e| !e.is_zero())
        .expect("nonzero vector")
        .clone();
    if first.is_negative() {
        g = -g;
    }
    for e in &mut ints {
        *e = &*e / &g;
    }
    ints
}
