//! Seeded generation of test data.
//!
//! Every generator draws from a [`ChaCha8Rng`] seeded with a 64-bit value via
//! `seed_from_u64`, so a seed reproduces the same data on every platform.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::{MultiSegreStructure, SegreStructure};
use crate::congruence::FreeParams;
use crate::error::{Error, Result};
use crate::linalg::cayley_orthogonal;
use crate::matrix::ExactMatrix;
use crate::scalar::{rat, ExactScalar};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small Gaussian rational: parts in `{−2, …, 2}/{1, 2}`, imaginary part
/// present one time in four.
pub fn small_scalar(rng: &mut impl Rng) -> ExactScalar {
    let re = rat(rng.random_range(-2..=2), rng.random_range(1..=2));
    let im = if rng.random_bool(0.25) {
        rat(rng.random_range(-2..=2), 1)
    } else {
        rat(0, 1)
    };
    ExactScalar::gaussian(re, im)
}

/// Like [`small_scalar`] but zero with probability `zero_prob`.
pub fn sparse_scalar(rng: &mut impl Rng, zero_prob: f64) -> ExactScalar {
    if rng.random_bool(zero_prob) {
        ExactScalar::zero()
    } else {
        small_scalar(rng)
    }
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, zero_prob: f64) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| sparse_scalar(rng, zero_prob))
}

pub fn random_skew(rng: &mut impl Rng, n: usize, zero_prob: f64) -> ExactMatrix {
    let mut z = ExactMatrix::zeros(n, n);
    for r in 0..n {
        for c in r + 1..n {
            let v = sparse_scalar(rng, zero_prob);
            z.set(c, r, -&v);
            z.set(r, c, v);
        }
    }
    z
}

/// Symmetric matrix with nonzero determinant.
pub fn random_symmetric_invertible(rng: &mut impl Rng, n: usize) -> ExactMatrix {
    loop {
        let mut m = ExactMatrix::zeros(n, n);
        for r in 0..n {
            for c in r..n {
                let v = small_scalar(rng);
                m.set(c, r, v.clone());
                m.set(r, c, v);
            }
        }
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// Invertible matrix with small entries.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> ExactMatrix {
    loop {
        let m = random_matrix(rng, n, n, 0.3);
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// Exact orthogonal matrix from a Cayley transform with random signs.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> ExactMatrix {
    loop {
        let z = random_skew(rng, n, 0.4);
        let signs: Vec<i8> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        match cayley_orthogonal(&z, &signs) {
            Ok(q) => return q,
            Err(Error::Singular(_)) => continue,
            Err(e) => panic!("Cayley transform failed on valid input: {e}"),
        }
    }
}

/// Random solution of `Qᵀ B Q = B`: `±(B − K)⁻¹(B + K)` with `K` skew.
pub fn random_b_orthogonal(rng: &mut impl Rng, b: &ExactMatrix) -> ExactMatrix {
    let n = b.rows();
    loop {
        let k = random_skew(rng, n, 0.4);
        let Ok(inv) = (b - &k).inverse() else { continue };
        let q = &inv * &(b + &k);
        debug_assert_eq!(&(&q.transpose() * b) * &q, *b);
        if rng.random_bool(0.5) {
            return -&q;
        }
        return q;
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParamOptions {
    /// Probability that a free entry is zero.
    pub zero_prob: f64,
    /// Draw random seeds instead of identities.
    pub random_seeds: bool,
}

impl Default for ParamOptions {
    fn default() -> Self {
        Self {
            zero_prob: 0.5,
            random_seeds: true,
        }
    }
}

/// Random free data for `ℬ = 𝒞 = ⊕ I_{α_r}(B_r)` with the given `b_diag`.
pub fn random_free_params(
    rng: &mut impl Rng,
    structure: &SegreStructure,
    b_diag: &[ExactMatrix],
    options: ParamOptions,
) -> FreeParams {
    let n = structure.len();
    let mut sub_blocks = BTreeMap::new();
    for r in 0..n {
        for s in 0..r {
            for j in 0..structure.alpha(r) {
                let m = random_matrix(rng, structure.m(r), structure.m(s), options.zero_prob);
                if !m.is_zero() {
                    sub_blocks.insert((r, s, j), m);
                }
            }
        }
    }
    let mut skews = BTreeMap::new();
    for r in 0..n {
        for j in 1..structure.alpha(r) {
            let z = random_skew(rng, structure.m(r), options.zero_prob);
            if !z.is_zero() {
                skews.insert((r, j), z);
            }
        }
    }
    let diag_seeds = (0..n)
        .map(|r| {
            if !options.random_seeds {
                ExactMatrix::identity(structure.m(r))
            } else if b_diag[r].is_identity() {
                random_orthogonal(rng, structure.m(r))
            } else {
                random_b_orthogonal(rng, &b_diag[r])
            }
        })
        .collect();
    FreeParams {
        sub_blocks,
        diag_seeds,
        skews,
    }
}

/// Random free data for the isotropy equation (`ℬ = 𝒞 = I`).
pub fn random_isotropy_params(rng: &mut impl Rng, structure: &SegreStructure, options: ParamOptions) -> FreeParams {
    let ids: Vec<ExactMatrix> = structure.blocks().iter().map(|b| ExactMatrix::identity(b.m)).collect();
    random_free_params(rng, structure, &ids, options)
}

pub fn random_lambda(rng: &mut impl Rng) -> ExactScalar {
    let re = rat(rng.random_range(-3..=3), rng.random_range(1..=2));
    let im = rat(rng.random_range(-2..=2), 1);
    ExactScalar::gaussian(re, im)
}

/// Random structure with `n ≤ max_n` and at most `max_groups` distinct sizes.
pub fn random_structure(rng: &mut impl Rng, max_n: usize, max_groups: usize, lambda: ExactScalar) -> Result<SegreStructure> {
    if max_n == 0 || max_groups == 0 {
        return Err(Error::Input("structure bounds must be positive".into()));
    }
    loop {
        let groups = rng.random_range(1..=max_groups);
        let mut blocks = Vec::with_capacity(groups);
        let mut budget = max_n;
        for _ in 0..groups {
            if budget == 0 {
                break;
            }
            let alpha = rng.random_range(1..=budget.min(6));
            let m = rng.random_range(1..=(budget / alpha).clamp(1, 3));
            budget -= alpha * m;
            blocks.push((alpha, m));
        }
        let s = SegreStructure::new(lambda.clone(), blocks)?;
        if s.n() <= max_n {
            return Ok(s);
        }
    }
}

/// Random multi-eigenvalue structure with `parts ≤ max_parts` and `n ≤ max_n`.
pub fn random_multi_structure(rng: &mut impl Rng, max_n: usize, max_parts: usize) -> Result<MultiSegreStructure> {
    let parts = rng.random_range(1..=max_parts.min(max_n).max(1));
    let mut out: Vec<SegreStructure> = Vec::with_capacity(parts);
    let mut budget = max_n;
    for i in 0..parts {
        let remaining_parts = parts - i - 1;
        let cap = budget - remaining_parts;
        let mut lambda = random_lambda(rng);
        while out.iter().any(|p| p.lambda() == &lambda) {
            lambda = random_lambda(rng);
        }
        let s = random_structure(rng, cap, 2, lambda)?;
        budget -= s.n();
        out.push(s);
        if budget <= remaining_parts {
            break;
        }
    }
    MultiSegreStructure::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = random_matrix(&mut rng_from_seed(7), 3, 3, 0.2);
        let b = random_matrix(&mut rng_from_seed(7), 3, 3, 0.2);
        assert_eq!(a, b);
    }

    #[test]
    fn orthogonal_samples() {
        let mut rng = rng_from_seed(1);
        for n in 1..5 {
            let q = random_orthogonal(&mut rng, n);
            assert!((&q.transpose() * &q).is_identity());
            let b = random_symmetric_invertible(&mut rng, n);
            let q = random_b_orthogonal(&mut rng, &b);
            assert_eq!(&(&q.transpose() * &b) * &q, b);
        }
    }

    #[test]
    fn structures_respect_bounds() {
        let mut rng = rng_from_seed(3);
        for _ in 0..100 {
            let s = random_structure(&mut rng, 12, 3, ExactScalar::zero()).unwrap();
            assert!(s.n() <= 12 && s.len() <= 3);
            let m = random_multi_structure(&mut rng, 10, 3).unwrap();
            assert!(m.n() <= 10 && m.parts().len() <= 3);
        }
    }
}
