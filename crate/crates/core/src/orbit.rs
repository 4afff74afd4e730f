//! Orbit codimension by formula and by the tangent map `X ↦ XᵀS + SX` on
//! skew-symmetric `X`.

use serde::Serialize;

use crate::canonical::{build_s, MultiSegreStructure, SegreStructure};
use crate::congruence::solution_dimension;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::nullity;
use crate::matrix::ExactMatrix;
use crate::scalar::ExactScalar;

/// `Σ_r α_r m_r ((m_r + 1)/2 + Σ_{s<r} m_s)`.
pub fn codim_formula(structure: &SegreStructure) -> usize {
    let mut before = 0;
    let mut total = 0;
    for b in structure.blocks() {
        total += b.alpha * b.m * (b.m + 1) / 2 + b.alpha * b.m * before;
        before += b.m;
    }
    total
}

pub fn codim_formula_multi(multi: &MultiSegreStructure) -> usize {
    multi.parts().iter().map(codim_formula).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    pub tangent_dim: usize,
    pub oracle_codim: usize,
    pub kernel_dim: usize,
}

/// Matrix of `X ↦ XᵀS + SX` from skew coordinates (`x_ij`, `i < j`) to
/// symmetric coordinates (`y_ij`, `i ≤ j`), both in row-major order.
pub fn tangent_map(s: &ExactMatrix) -> Result<ExactMatrix> {
    if !s.is_square() || !s.is_symmetric() {
        return Err(Error::Precondition("tangent map needs a symmetric matrix".into()));
    }
    let n = s.rows();
    let skew: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let sym: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut out = ExactMatrix::zeros(sym.len(), skew.len());
    for (col, &(a, b)) in skew.iter().enumerate() {
        // X = e_a e_bᵀ − e_b e_aᵀ, so XᵀS + SX = SX − XS.
        // (SX)_{ij} = S_{ia}δ_{jb} − S_{ib}δ_{ja}; (XS)_{ij} = δ_{ia}S_{bj} − δ_{ib}S_{aj}.
        for (row, &(i, j)) in sym.iter().enumerate() {
            let mut v = ExactScalar::zero();
            if j == b {
                v += s.get(i, a);
            }
            if j == a {
                v -= s.get(i, b);
            }
            if i == a {
                v -= s.get(b, j);
            }
            if i == b {
                v += s.get(a, j);
            }
            if !v.is_zero() {
                out.set(row, col, v);
            }
        }
    }
    Ok(out)
}

pub fn tangent_oracle(s: &ExactMatrix) -> Result<TangentReport> {
    let map = tangent_map(s)?;
    let n = s.rows();
    let kernel_dim = nullity(&map);
    let tangent_dim = n * (n - 1) / 2 - kernel_dim;
    Ok(TangentReport {
        tangent_dim,
        oracle_codim: n * (n + 1) / 2 - tangent_dim,
        kernel_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub n: usize,
    pub codim_formula: usize,
    pub isotropy_dim: usize,
    pub tangent_dim: usize,
    pub oracle_codim: usize,
    pub kernel_dim: usize,
    pub consistent: bool,
}

/// Formula values against the tangent oracle on `build_s(structure)`.
pub fn consistency_check(structure: &SegreStructure) -> Result<OrbitReport> {
    report_for(structure.n(), codim_formula(structure), solution_dimension(structure), &build_s(structure))
}

pub fn consistency_check_multi(multi: &MultiSegreStructure) -> Result<OrbitReport> {
    let dim = multi.parts().iter().map(solution_dimension).sum();
    report_for(multi.n(), codim_formula_multi(multi), dim, &multi.build_s())
}

fn report_for(n: usize, codim: usize, dim: usize, s: &ExactMatrix) -> Result<OrbitReport> {
    let t = tangent_oracle(s)?;
    Ok(OrbitReport {
        n,
        codim_formula: codim,
        isotropy_dim: dim,
        tangent_dim: t.tangent_dim,
        oracle_codim: t.oracle_codim,
        kernel_dim: t.kernel_dim,
        consistent: codim == n + dim && codim == t.oracle_codim && t.kernel_dim == dim,
    })
}

/// [`consistency_check`] for every structure with `n ≤ max_n` and each eigenvalue.
pub fn enumerate_checks(max_n: usize, lambdas: &[ExactScalar], exec: Execution) -> Result<Vec<(SegreStructure, OrbitReport)>> {
    let structures: Vec<SegreStructure> = lambdas
        .iter()
        .flat_map(|l| SegreStructure::enumerate_up_to(max_n, l))
        .collect();
    exec.map(structures, |s| consistency_check(&s).map(|r| (s, r)))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::symmetric_block;

    fn st(blocks: &[(usize, usize)]) -> SegreStructure {
        SegreStructure::new(ExactScalar::zero(), blocks.iter().copied()).unwrap()
    }

    #[test]
    fn formula_examples() {
        assert_eq!(codim_formula(&st(&[(1, 4)])), 10);
        assert_eq!(codim_formula(&st(&[(2, 1), (1, 1)])), 4);
        let multi = MultiSegreStructure::new(vec![
            SegreStructure::new(ExactScalar::one(), [(1, 1)]).unwrap(),
            SegreStructure::new(ExactScalar::zero(), [(1, 1)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(codim_formula_multi(&multi), 2);
        assert!(consistency_check_multi(&multi).unwrap().consistent);
    }

    #[test]
    fn oracle_examples() {
        let l = ExactScalar::from_int(5);
        let t = tangent_oracle(&ExactMatrix::scalar(3, &l)).unwrap();
        assert_eq!(t, TangentReport { tangent_dim: 0, oracle_codim: 6, kernel_dim: 3 });
        let s = symmetric_block(2, &ExactScalar::zero()).direct_sum(&symmetric_block(1, &ExactScalar::zero()));
        let t = tangent_oracle(&s).unwrap();
        assert_eq!((t.kernel_dim, t.oracle_codim), (1, 4));
        let t = tangent_oracle(&symmetric_block(2, &l)).unwrap();
        assert_eq!((t.kernel_dim, t.oracle_codim), (0, 2));
        assert!(tangent_oracle(&ExactMatrix::from_int_rows(&[&[0, 1], &[0, 0]])).is_err());
    }

    #[test]
    fn three_block_and_scalar_consistency() {
        let r = consistency_check(&st(&[(3, 1)])).unwrap();
        assert!(r.consistent);
        assert_eq!(r.codim_formula, 3);
        for n in 1..5 {
            assert!(consistency_check(&st(&[(1, n)])).unwrap().consistent);
        }
    }
}
