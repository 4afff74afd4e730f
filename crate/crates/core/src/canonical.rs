//! Structured matrices: Jordan blocks, symmetric canonical blocks, the
//! transition matrices relating them, and the permutations that regroup a
//! direct sum of equal blocks into block-Toeplitz order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{rat, ExactScalar};

/// One group of equal Jordan blocks: `m` copies of size `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SegreBlock {
    pub alpha: usize,
    pub m: usize,
}

/// Block sizes of a single eigenvalue, sorted with strictly decreasing `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SegreStructure {
    lambda: ExactScalar,
    blocks: Vec<SegreBlock>,
}

impl SegreStructure {
    /// Normalises `blocks`: duplicate sizes are merged by summing `m`, the
    /// result is sorted by descending `alpha`. Zero sizes or multiplicities are
    /// rejected, as is an empty list.
    pub fn new(lambda: ExactScalar, blocks: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut merged: BTreeMap<usize, usize> = BTreeMap::new();
        for (alpha, m) in blocks {
            if alpha == 0 {
                return Err(Error::InvalidStructure("block size alpha must be positive".into()));
            }
            if m == 0 {
                return Err(Error::InvalidStructure("multiplicity m must be positive".into()));
            }
            *merged.entry(alpha).or_default() += m;
        }
        if merged.is_empty() {
            return Err(Error::InvalidStructure("structure needs at least one block".into()));
        }
        let blocks = merged
            .into_iter()
            .rev()
            .map(|(alpha, m)| SegreBlock { alpha, m })
            .collect();
        Ok(Self { lambda, blocks })
    }

    /// Same block data with a different eigenvalue.
    pub fn with_lambda(&self, lambda: ExactScalar) -> Self {
        Self {
            lambda,
            blocks: self.blocks.clone(),
        }
    }

    pub fn lambda(&self) -> &ExactScalar {
        &self.lambda
    }

    pub fn blocks(&self) -> &[SegreBlock] {
        &self.blocks
    }

    /// Number `N` of distinct block sizes.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn alpha(&self, r: usize) -> usize {
        self.blocks[r].alpha
    }

    pub fn m(&self, r: usize) -> usize {
        self.blocks[r].m
    }

    pub fn max_alpha(&self) -> usize {
        self.blocks[0].alpha
    }

    /// `b_rs = min(α_r, α_s)`.
    pub fn b(&self, r: usize, s: usize) -> usize {
        self.alpha(r).min(self.alpha(s))
    }

    /// Ambient size `n = Σ α_r·m_r`.
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.alpha * b.m).sum()
    }

    /// Starting row of group `r` in the assembled matrix.
    pub fn offset(&self, r: usize) -> usize {
        self.blocks[..r].iter().map(|b| b.alpha * b.m).sum()
    }

    /// Every Jordan block size, in direct-sum order.
    pub fn jordan_sizes(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.alpha, b.m))
            .collect()
    }

    /// All structures of total size exactly `n` (one per integer partition).
    pub fn enumerate(n: usize, lambda: &ExactScalar) -> Vec<Self> {
        let mut out = Vec::new();
        let mut parts = Vec::new();
        partitions(n, n, &mut parts, &mut |p| {
            let s = Self::new(lambda.clone(), p.iter().map(|&a| (a, 1))).expect("partition parts are positive");
            out.push(s);
        });
        out
    }

    /// All structures with `1 ≤ n ≤ max_n`.
    pub fn enumerate_up_to(max_n: usize, lambda: &ExactScalar) -> Vec<Self> {
        (1..=max_n).flat_map(|n| Self::enumerate(n, lambda)).collect()
    }
}

fn partitions(n: usize, max_part: usize, current: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if n == 0 {
        emit(current);
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        current.push(part);
        partitions(n - part, part, current, emit);
        current.pop();
    }
}

/// Direct sum of single-eigenvalue structures with pairwise distinct eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSegreStructure {
    parts: Vec<SegreStructure>,
}

impl MultiSegreStructure {
    pub fn new(parts: Vec<SegreStructure>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidStructure("multi-structure needs at least one part".into()));
        }
        for (i, a) in parts.iter().enumerate() {
            if parts[..i].iter().any(|b| b.lambda == a.lambda) {
                return Err(Error::InvalidStructure(format!(
                    "duplicate eigenvalue {} across parts",
                    a.lambda
                )));
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[SegreStructure] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().map(SegreStructure::n).sum()
    }

    pub fn build_s(&self) -> ExactMatrix {
        let blocks: Vec<ExactMatrix> = self.parts.iter().map(build_s).collect();
        ExactMatrix::direct_sum_all(&blocks)
    }
}

pub fn jordan_block(n: usize, lambda: &ExactScalar) -> ExactMatrix {
    ExactMatrix::from_fn(n, n, |r, c| {
        if r == c {
            lambda.clone()
        } else if c == r + 1 {
            ExactScalar::one()
        } else {
            ExactScalar::zero()
        }
    })
}

/// `P_α = (1/√2)(I_α + i·E_α)`.
pub fn transition_p(alpha: usize) -> ExactMatrix {
    let h = ExactScalar::inv_sqrt2();
    let hi = &h * &ExactScalar::i();
    ExactMatrix::from_fn(alpha, alpha, |r, c| {
        let mut v = ExactScalar::zero();
        if r == c {
            v += &h;
        }
        if r + c + 1 == alpha {
            v += &hi;
        }
        v
    })
}

/// `P_α⁻¹`, which equals the entrywise conjugate of `P_α`.
pub fn transition_p_inv(alpha: usize) -> ExactMatrix {
    transition_p(alpha).conj()
}

/// Symmetric canonical block `K_n(λ) = P_n J_n(λ) P_n⁻¹`.
pub fn symmetric_block(n: usize, lambda: &ExactScalar) -> ExactMatrix {
    let p = transition_p(n);
    let k = &(&p * &jordan_block(n, lambda)) * &transition_p_inv(n);
    debug_assert!(k.is_symmetric());
    debug_assert!(!lambda.is_gaussian() || k.entries().iter().all(ExactScalar::is_gaussian));
    k
}

/// Entrywise closed form of `K_n(λ)`: `λ` on the diagonal, `1/2` on both
/// off-diagonals, `−i/2` on the anti-diagonal above the main anti-diagonal and
/// `+i/2` on the one below it.
pub fn symmetric_block_entrywise(n: usize, lambda: &ExactScalar) -> ExactMatrix {
    let half = ExactScalar::from_rational(rat(1, 2));
    let half_i = ExactScalar::gaussian(rat(0, 1), rat(1, 2));
    ExactMatrix::from_fn(n, n, |r, c| {
        let mut v = ExactScalar::zero();
        if r == c {
            v += lambda;
        }
        if r + 1 == c || c + 1 == r {
            v += &half;
        }
        // 1-based j + k = n is the anti-diagonal above the main one.
        if r + c + 2 == n {
            v -= &half_i;
        }
        if r + c == n {
            v += &half_i;
        }
        v
    })
}

/// Permutation `Ω_{α,m}` with columns `e_1, e_{α+1}, …, e_{(m−1)α+1}, e_2, …`.
pub fn omega_perm(alpha: usize, m: usize) -> ExactMatrix {
    let n = alpha * m;
    let mut out = ExactMatrix::zeros(n, n);
    // Column `t·m + j` is e_{j·α + t}.
    for t in 0..alpha {
        for j in 0..m {
            out.set(j * alpha + t, t * m + j, ExactScalar::one());
        }
    }
    out
}

/// `E_α(I_m)`: α×α block anti-diagonal of `I_m` blocks.
pub fn block_backward_identity(alpha: usize, m: usize) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(alpha * m, alpha * m);
    for t in 0..alpha {
        let u = alpha - 1 - t;
        for j in 0..m {
            out.set(t * m + j, u * m + j, ExactScalar::one());
        }
    }
    out
}

fn per_jordan_block(structure: &SegreStructure, f: impl Fn(usize) -> ExactMatrix) -> ExactMatrix {
    let blocks: Vec<ExactMatrix> = structure.jordan_sizes().into_iter().map(f).collect();
    ExactMatrix::direct_sum_all(&blocks)
}

/// `S = ⊕_r ⊕_{j≤m_r} K_{α_r}(λ)`.
pub fn build_s(structure: &SegreStructure) -> ExactMatrix {
    per_jordan_block(structure, |a| symmetric_block(a, structure.lambda()))
}

/// `J = ⊕_r ⊕_{j≤m_r} J_{α_r}(λ)`.
pub fn build_j(structure: &SegreStructure) -> ExactMatrix {
    per_jordan_block(structure, |a| jordan_block(a, structure.lambda()))
}

pub fn build_p(structure: &SegreStructure) -> ExactMatrix {
    per_jordan_block(structure, transition_p)
}

pub fn build_p_inv(structure: &SegreStructure) -> ExactMatrix {
    per_jordan_block(structure, transition_p_inv)
}

/// `E = ⊕_r ⊕_{j≤m_r} E_{α_r}` in Jordan (dense) ordering.
pub fn build_e(structure: &SegreStructure) -> ExactMatrix {
    per_jordan_block(structure, ExactMatrix::backward_identity)
}

/// `ℱ = ⊕_r E_{α_r}(I_{m_r})` in block-Toeplitz ordering.
pub fn build_f(structure: &SegreStructure) -> ExactMatrix {
    let blocks: Vec<ExactMatrix> = structure
        .blocks()
        .iter()
        .map(|b| block_backward_identity(b.alpha, b.m))
        .collect();
    ExactMatrix::direct_sum_all(&blocks)
}

/// `Ω = ⊕_r Ω_{α_r, m_r}`.
pub fn build_omega(structure: &SegreStructure) -> ExactMatrix {
    let blocks: Vec<ExactMatrix> = structure.blocks().iter().map(|b| omega_perm(b.alpha, b.m)).collect();
    ExactMatrix::direct_sum_all(&blocks)
}
