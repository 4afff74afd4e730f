//! Dense exact matrices over ℚ(i)(√2).

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Neg};

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Rational};

/// Row-major dense matrix. `0×n` and `n×0` shapes are legal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                ExactScalar::one()
            } else {
                ExactScalar::zero()
            }
        })
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, value: &ExactScalar) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                value.clone()
            } else {
                ExactScalar::zero()
            }
        })
    }

    /// Backward identity `E_n`: ones on the anti-diagonal.
    pub fn backward_identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r + c + 1 == n {
                ExactScalar::one()
            } else {
                ExactScalar::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Input(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds from integer rows; panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |r, c| ExactScalar::from_int(rows[r][c]))
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Input("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<ExactScalar> {
        self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: ExactScalar) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                self.get(r, r).is_zero() && (r + 1..self.cols).all(|c| *self.get(r, c) == -self.get(c, r))
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map(&self, f: impl Fn(&ExactScalar) -> ExactScalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(ExactScalar::conj)
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        self.map(|v| v * factor)
    }

    pub fn scale_rational(&self, factor: &Rational) -> Self {
        self.map(|v| v.scale(factor))
    }

    pub fn trace(&self) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for k in 0..self.rows.min(self.cols) {
            acc += self.get(k, k);
        }
        acc
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out.entries[r * other.cols + c] += &prod;
                }
            }
        }
        Ok(out)
    }

    /// `self += other` in place; panics on shape mismatch.
    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "add_assign shape mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        assert_eq!(self.shape(), other.shape(), "sub_assign shape mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a -= b;
        }
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "pow",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Gauss–Jordan inverse with first-nonzero pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "inverse",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let n = self.rows;
        let mut work: Vec<Vec<ExactScalar>> = (0..n)
            .map(|r| {
                let mut row: Vec<ExactScalar> = (0..n).map(|c| self.get(r, c).clone()).collect();
                row.extend((0..n).map(|c| if c == r { ExactScalar::one() } else { ExactScalar::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !work[r][col].is_zero())
                .ok_or_else(|| Error::Singular(format!("no pivot in column {col}")))?;
            work.swap(col, pivot);
            let inv = work[col][col].try_inv()?;
            for v in work[col].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = work[col].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &(&factor * p);
                    }
                }
            }
        }
        Ok(Self::from_fn(n, n, |r, c| work[r][n + c].clone()))
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::direct_sum_all([self, other])
    }

    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a ExactMatrix>) -> Self {
        let parts: Vec<&ExactMatrix> = parts.into_iter().collect();
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    /// Assembles a grid of blocks. Every row of the grid must share row
    /// counts and every column must share column counts.
    pub fn block_assemble(grid: &[Vec<ExactMatrix>]) -> Result<Self> {
        if grid.is_empty() {
            return Ok(Self::zeros(0, 0));
        }
        let width = grid[0].len();
        if grid.iter().any(|row| row.len() != width) {
            return Err(Error::Input("ragged block grid".into()));
        }
        let row_heights: Vec<usize> = grid.iter().map(|row| row.first().map_or(0, |b| b.rows)).collect();
        let col_widths: Vec<usize> = (0..width).map(|c| grid[0][c].cols).collect();
        for (i, row) in grid.iter().enumerate() {
            for (j, block) in row.iter().enumerate() {
                if block.rows != row_heights[i] || block.cols != col_widths[j] {
                    return Err(Error::DimensionMismatch {
                        op: "block_assemble",
                        left: (row_heights[i], col_widths[j]),
                        right: block.shape(),
                    });
                }
            }
        }
        let mut out = Self::zeros(row_heights.iter().sum(), col_widths.iter().sum());
        let mut r0 = 0;
        for (i, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (j, block) in row.iter().enumerate() {
                out.set_block(r0, c0, block);
                c0 += col_widths[j];
            }
            r0 += row_heights[i];
        }
        Ok(out)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// First entry where `self` and `other` differ, if any.
    pub fn first_mismatch(&self, other: &Self) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((0, 0));
        }
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .find(|&(r, c)| self.get(r, c) != other.get(r, c))
    }

    /// Column-major vectorisation.
    pub fn vectorize(&self) -> Vec<ExactScalar> {
        (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect()
    }

    pub fn column(values: Vec<ExactScalar>) -> Self {
        let n = values.len();
        Self {
            rows: n,
            cols: 1,
            entries: values,
        }
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = ExactScalar;

    fn index(&self, (r, c): (usize, usize)) -> &ExactScalar {
        self.get(r, c)
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut ExactScalar {
        &mut self.entries[r * self.cols + c]
    }
}

/// Panics on incompatible shapes; use [`ExactMatrix::try_mul`] for fallible products.
impl Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl std::ops::Add<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl std::ops::Sub<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;

    fn neg(self) -> ExactMatrix {
        self.map(|v| -v)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).format()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
