//! Block upper-triangular Toeplitz forms.
//!
//! A [`ToeplitzForm`] stores, for every pair of groups `(r, s)` of a
//! [`SegreStructure`], the coefficients `A_0, …, A_{b−1}` (`b = min(α_r, α_s)`)
//! of an `α_r × α_s` grid of `m_r × m_s` blocks. When `α_r < α_s` the Toeplitz
//! square sits at the right of the grid, when `α_r > α_s` it sits at the top.
//!
//! Coefficient `A_j^{rs}` has weight `2j + |α_r − α_s|`. Weights add under
//! multiplication, which gives the filtration used for nilpotency bounds.

use crate::canonical::{build_omega, SegreStructure};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToeplitzForm {
    structure: SegreStructure,
    coeffs: Vec<Vec<ExactMatrix>>,
}

/// Coefficient index stored at grid position `(a, c)` of block `(r, s)`, if any.
fn coeff_index(alpha_r: usize, alpha_s: usize, a: usize, c: usize) -> Option<usize> {
    let shift = alpha_s.saturating_sub(alpha_r);
    let idx = c.checked_sub(a + shift)?;
    (idx < alpha_r.min(alpha_s)).then_some(idx)
}

/// Shift `δ(r, k, s)` of the coefficient index in a product through group `k`.
pub(crate) fn product_shift(ar: usize, ak: usize, as_: usize) -> usize {
    ak.saturating_sub(ar) + as_.saturating_sub(ak) - as_.saturating_sub(ar)
}

impl ToeplitzForm {
    pub fn zero(structure: &SegreStructure) -> Self {
        let n = structure.len();
        let mut coeffs = Vec::with_capacity(n * n);
        for r in 0..n {
            for s in 0..n {
                let zero = ExactMatrix::zeros(structure.m(r), structure.m(s));
                coeffs.push(vec![zero; structure.b(r, s)]);
            }
        }
        Self {
            structure: structure.clone(),
            coeffs,
        }
    }

    pub fn identity(structure: &SegreStructure) -> Self {
        let mut out = Self::zero(structure);
        for r in 0..structure.len() {
            out.set(r, r, 0, ExactMatrix::identity(structure.m(r)));
        }
        out
    }

    /// Block-diagonal form with `diag[r]` as the only coefficient of `(r, r)`.
    pub fn block_diagonal(structure: &SegreStructure, diag: &[ExactMatrix]) -> Result<Self> {
        if diag.len() != structure.len() {
            return Err(Error::Input(format!(
                "expected {} diagonal blocks, got {}",
                structure.len(),
                diag.len()
            )));
        }
        let mut out = Self::zero(structure);
        for (r, d) in diag.iter().enumerate() {
            out.try_set(r, r, 0, d.clone())?;
        }
        Ok(out)
    }

    pub fn structure(&self) -> &SegreStructure {
        &self.structure
    }

    fn slot(&self, r: usize, s: usize) -> usize {
        r * self.structure.len() + s
    }

    pub fn coeffs(&self, r: usize, s: usize) -> &[ExactMatrix] {
        &self.coeffs[self.slot(r, s)]
    }

    pub fn get(&self, r: usize, s: usize, j: usize) -> &ExactMatrix {
        &self.coeffs[self.slot(r, s)][j]
    }

    /// Panics on out-of-range indices or a wrongly sized coefficient.
    pub fn set(&mut self, r: usize, s: usize, j: usize, value: ExactMatrix) {
        self.try_set(r, s, j, value).expect("coefficient out of range");
    }

    pub fn try_set(&mut self, r: usize, s: usize, j: usize, value: ExactMatrix) -> Result<()> {
        let st = &self.structure;
        let n = st.len();
        if r >= n || s >= n || j >= st.b(r, s) {
            return Err(Error::Input(format!(
                "coefficient ({}, {}, {j}) out of range",
                r + 1,
                s + 1
            )));
        }
        let want = (st.m(r), st.m(s));
        if value.shape() != want {
            return Err(Error::DimensionMismatch {
                op: "toeplitz coefficient",
                left: want,
                right: value.shape(),
            });
        }
        let slot = self.slot(r, s);
        self.coeffs[slot][j] = value;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(ExactMatrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.structure)
    }

    /// True when every off-diagonal pair `(r, s)` has only zero coefficients.
    pub fn is_block_diagonal(&self) -> bool {
        let n = self.structure.len();
        (0..n).all(|r| (0..n).all(|s| r == s || self.coeffs(r, s).iter().all(ExactMatrix::is_zero)))
    }

    /// True when each diagonal block has `A_0^{rr} = I`.
    pub fn has_identity_diagonal(&self) -> bool {
        (0..self.structure.len()).all(|r| self.get(r, r, 0).is_identity())
    }

    pub fn weight(&self, r: usize, s: usize, j: usize) -> usize {
        2 * j + self.structure.alpha(r).abs_diff(self.structure.alpha(s))
    }

    /// Smallest weight of a nonzero coefficient; `None` for the zero form.
    pub fn min_weight(&self) -> Option<usize> {
        let n = self.structure.len();
        let mut best: Option<usize> = None;
        for r in 0..n {
            for s in 0..n {
                for (j, c) in self.coeffs(r, s).iter().enumerate() {
                    if !c.is_zero() {
                        let w = self.weight(r, s, j);
                        best = Some(best.map_or(w, |b| b.min(w)));
                    }
                }
            }
        }
        best
    }

    /// Largest weight any coefficient can carry: `2α_1 − 2`.
    pub fn max_weight(structure: &SegreStructure) -> usize {
        2 * structure.max_alpha() - 2
    }

    fn check_same(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.structure.blocks() != other.structure.blocks() {
            let n = (self.structure.n(), self.structure.n());
            let m = (other.structure.n(), other.structure.n());
            return Err(Error::DimensionMismatch { op, left: n, right: m });
        }
        Ok(())
    }

    fn zip(&self, other: &Self, op: &'static str, f: impl Fn(&ExactMatrix, &ExactMatrix) -> ExactMatrix) -> Result<Self> {
        self.check_same(other, op)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(Self {
            structure: self.structure.clone(),
            coeffs,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, "toeplitz add", |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, "toeplitz sub", |a, b| a - b)
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        Self {
            structure: self.structure.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.iter().map(|m| m.scale(factor)).collect())
                .collect(),
        }
    }

    /// Coefficient-level product; the result stays in the same shape.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "toeplitz mul")?;
        let st = &self.structure;
        let n = st.len();
        let mut out = Self::zero(st);
        for r in 0..n {
            for s in 0..n {
                let slot = out.slot(r, s);
                for k in 0..n {
                    let delta = product_shift(st.alpha(r), st.alpha(k), st.alpha(s));
                    let left = self.coeffs(r, k);
                    let right = other.coeffs(k, s);
                    for (i, a) in left.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (l, b) in right.iter().enumerate() {
                            let idx = i + l + delta;
                            if idx >= st.b(r, s) {
                                break;
                            }
                            if !b.is_zero() {
                                out.coeffs[slot][idx].add_assign(&(a * b));
                            }
                        }
                    }
                }
            }
        }
        debug_assert_eq!(out.assemble(), &self.assemble() * &other.assemble());
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::identity(&self.structure);
        for _ in 0..exp {
            acc = acc.try_mul(self).expect("same structure");
        }
        acc
    }

    /// `ℱ 𝒳ᵀ ℱ`, again a form of the same shape with `(r, s)_j = (𝒳^{sr}_j)ᵀ`.
    pub fn twist(&self) -> Self {
        let st = &self.structure;
        let n = st.len();
        let mut out = Self::zero(st);
        for r in 0..n {
            for s in 0..n {
                for (j, c) in self.coeffs(s, r).iter().enumerate() {
                    out.set(r, s, j, c.transpose());
                }
            }
        }
        out
    }

    /// Inverse of a form with identity diagonal coefficients via the
    /// truncated Neumann series `Σ (−𝒩)^k`, `k < 2α_1 − 1`.
    pub fn unipotent_inverse(&self) -> Result<Self> {
        if !self.has_identity_diagonal() {
            return Err(Error::Precondition("form is not unipotent (A_0^{rr} != I)".into()));
        }
        let id = Self::identity(&self.structure);
        let neg = id.try_sub(self)?;
        let mut term = id.clone();
        let mut acc = id;
        for _ in 0..Self::max_weight(&self.structure) {
            term = term.try_mul(&neg)?;
            if term.is_zero() {
                break;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Inverse via `𝒳 = 𝒟𝒰` with `𝒟` the constant diagonal part.
    pub fn inverse(&self) -> Result<Self> {
        let st = &self.structure;
        let mut d_inv = Vec::with_capacity(st.len());
        for r in 0..st.len() {
            d_inv.push(
                self.get(r, r, 0)
                    .inverse()
                    .map_err(|_| Error::Singular(format!("diagonal seed of group {} is singular", r + 1)))?,
            );
        }
        let d_inv = Self::block_diagonal(st, &d_inv)?;
        let u = d_inv.try_mul(self)?;
        u.unipotent_inverse()?.try_mul(&d_inv)
    }

    /// Dense matrix in block-Toeplitz (Ω-conjugated) ordering.
    pub fn assemble(&self) -> ExactMatrix {
        let st = &self.structure;
        let n = st.len();
        let mut out = ExactMatrix::zeros(st.n(), st.n());
        for r in 0..n {
            let (ar, mr, ro) = (st.alpha(r), st.m(r), st.offset(r));
            for s in 0..n {
                let (as_, ms, so) = (st.alpha(s), st.m(s), st.offset(s));
                let coeffs = self.coeffs(r, s);
                for a in 0..ar {
                    for c in 0..as_ {
                        if let Some(idx) = coeff_index(ar, as_, a, c) {
                            if !coeffs[idx].is_zero() {
                                out.set_block(ro + a * mr, so + c * ms, &coeffs[idx]);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Reads the coefficients back from a dense matrix, rejecting anything
    /// outside the shape with the first offending entry.
    pub fn extract(m: &ExactMatrix, structure: &SegreStructure) -> Result<Self> {
        let size = structure.n();
        if m.shape() != (size, size) {
            return Err(Error::DimensionMismatch {
                op: "toeplitz extract",
                left: (size, size),
                right: m.shape(),
            });
        }
        let st = structure;
        let n = st.len();
        let mut out = Self::zero(st);
        let mut seen = vec![false; out.coeffs.iter().map(Vec::len).sum()];
        let mut first_seen_base = Vec::with_capacity(n * n);
        let mut acc = 0;
        for c in &out.coeffs {
            first_seen_base.push(acc);
            acc += c.len();
        }
        // Row-major walk so that the reported entry is the first one in reading order.
        for row in 0..size {
            let r = (0..n).rfind(|&r| st.offset(r) <= row).expect("row inside matrix");
            let (ar, mr) = (st.alpha(r), st.m(r));
            let a = (row - st.offset(r)) / mr;
            let i = (row - st.offset(r)) % mr;
            debug_assert!(a < ar);
            for col in 0..size {
                let s = (0..n).rfind(|&s| st.offset(s) <= col).expect("col inside matrix");
                let (as_, ms) = (st.alpha(s), st.m(s));
                let c = (col - st.offset(s)) / ms;
                let k = (col - st.offset(s)) % ms;
                let value = m.get(row, col);
                match coeff_index(ar, as_, a, c) {
                    None => {
                        if !value.is_zero() {
                            return Err(Error::ShapeViolation {
                                row,
                                col,
                                message: format!("entry {value} lies outside the block-Toeplitz pattern"),
                            });
                        }
                    }
                    Some(idx) => {
                        let slot = r * n + s;
                        let flag = first_seen_base[slot] + idx;
                        if !seen[flag] {
                            // The first grid position of a coefficient defines it.
                            out.coeffs[slot][idx] = m.block(row - i, col - k, mr, ms);
                            seen[flag] = true;
                        }
                        if out.coeffs[slot][idx].get(i, k) != value {
                            return Err(Error::ShapeViolation {
                                row,
                                col,
                                message: format!(
                                    "entry {value} breaks the Toeplitz pattern of coefficient ({}, {}, {idx})",
                                    r + 1,
                                    s + 1
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaDirection {
    /// `ΩᵀXΩ`
    ToToeplitz,
    /// `ΩXΩᵀ`
    ToDense,
}

pub fn conjugate_by_omega(x: &ExactMatrix, structure: &SegreStructure, direction: OmegaDirection) -> Result<ExactMatrix> {
    let n = structure.n();
    if x.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "omega conjugation",
            left: (n, n),
            right: x.shape(),
        });
    }
    let omega = build_omega(structure);
    let omega_t = omega.transpose();
    Ok(match direction {
        OmegaDirection::ToToeplitz => &(&omega_t * x) * &omega,
        OmegaDirection::ToDense => &(&omega * x) * &omega_t,
    })
}

/// Parameterization of `{X : JX = XJ}` by the free Toeplitz coefficients.
#[derive(Clone, Debug)]
pub struct CommutantBasis {
    structure: SegreStructure,
    dimension: usize,
}

pub fn commutant_dimension(structure: &SegreStructure) -> usize {
    let n = structure.len();
    (0..n)
        .flat_map(|r| (0..n).map(move |s| (r, s)))
        .map(|(r, s)| structure.m(r) * structure.m(s) * structure.b(r, s))
        .sum()
}

pub fn commutant_basis(structure: &SegreStructure) -> CommutantBasis {
    CommutantBasis {
        structure: structure.clone(),
        dimension: commutant_dimension(structure),
    }
}

impl CommutantBasis {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Fills the coefficients in order `(r, s, j, row, col)`.
    pub fn form(&self, values: &[ExactScalar]) -> Result<ToeplitzForm> {
        if values.len() != self.dimension {
            return Err(Error::Input(format!(
                "commutant needs {} values, got {}",
                self.dimension,
                values.len()
            )));
        }
        let st = &self.structure;
        let mut out = ToeplitzForm::zero(st);
        let mut it = values.iter();
        for r in 0..st.len() {
            for s in 0..st.len() {
                for j in 0..st.b(r, s) {
                    let block = ExactMatrix::from_fn(st.m(r), st.m(s), |_, _| it.next().expect("length checked").clone());
                    out.set(r, s, j, block);
                }
            }
        }
        Ok(out)
    }

    /// Dense commuting matrix `Ω 𝒳 Ωᵀ` for the given coefficient values.
    pub fn build(&self, values: &[ExactScalar]) -> Result<ExactMatrix> {
        let form = self.form(values)?;
        conjugate_by_omega(&form.assemble(), &self.structure, OmegaDirection::ToDense)
    }

    /// One dense matrix per free coefficient.
    pub fn basis(&self) -> Vec<ExactMatrix> {
        (0..self.dimension)
            .map(|i| {
                let values: Vec<ExactScalar> = (0..self.dimension)
                    .map(|k| if k == i { ExactScalar::one() } else { ExactScalar::zero() })
                    .collect();
                self.build(&values).expect("length matches")
            })
            .collect()
    }
}
