//! Rank, nullspace and exact orthogonal sampling.

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::ExactScalar;

/// Row echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<ExactScalar>>,
    pivots: Vec<usize>,
}

/// Bareiss-style elimination: `row_i ← (p·row_i − a_ic·row_k) / p_prev`.
/// Pivot choice is the first nonzero entry of each column, so the result is
/// deterministic.
fn echelon(a: &ExactMatrix) -> Echelon {
    let (m, n) = a.shape();
    let mut rows: Vec<Vec<ExactScalar>> = (0..m).map(|r| (0..n).map(|c| a.get(r, c).clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut prev = ExactScalar::one();
    let mut k = 0;
    for col in 0..n {
        if k == m {
            break;
        }
        let Some(p) = (k..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(k, p);
        let pivot = rows[k][col].clone();
        let prev_inv = prev.try_inv().expect("previous pivot is nonzero");
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..n {
                let scaled = &pivot * &row[j];
                let value = if lead.is_zero() || pivot_row[j].is_zero() {
                    scaled
                } else {
                    &scaled - &(&lead * &pivot_row[j])
                };
                row[j] = &value * &prev_inv;
            }
            row[col] = ExactScalar::zero();
        }
        prev = pivot;
        pivots.push(col);
        k += 1;
    }
    Echelon { rows, pivots }
}

pub fn rank(a: &ExactMatrix) -> usize {
    echelon(a).pivots.len()
}

/// Basis of `{v : A·v = 0}` as column vectors, with `nullity = cols − rank`.
pub fn nullspace(a: &ExactMatrix) -> (Vec<ExactMatrix>, usize) {
    let n = a.cols();
    let ech = echelon(a);
    let mut is_pivot = vec![false; n];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![ExactScalar::zero(); n];
        v[free] = ExactScalar::one();
        for (k, &pc) in ech.pivots.iter().enumerate().rev() {
            let row = &ech.rows[k];
            let mut acc = ExactScalar::zero();
            for j in pc + 1..n {
                if !row[j].is_zero() && !v[j].is_zero() {
                    acc += &(&row[j] * &v[j]);
                }
            }
            if !acc.is_zero() {
                v[pc] = -(&acc * &row[pc].try_inv().expect("pivot is nonzero"));
            }
        }
        basis.push(ExactMatrix::column(v));
    }
    let nullity = basis.len();
    (basis, nullity)
}

pub fn nullity(a: &ExactMatrix) -> usize {
    a.cols() - rank(a)
}

/// Cayley transform `Q = diag(signs)·(I − Z)(I + Z)⁻¹` of a skew-symmetric `Z`.
///
/// Fails with [`Error::Singular`] when `I + Z` is singular; callers should
/// draw a new `Z`.
pub fn cayley_orthogonal(z: &ExactMatrix, signs: &[i8]) -> Result<ExactMatrix> {
    if !z.is_skew_symmetric() {
        return Err(Error::Precondition("Cayley input must be skew-symmetric".into()));
    }
    let n = z.rows();
    if signs.len() != n || signs.iter().any(|s| *s != 1 && *s != -1) {
        return Err(Error::Precondition(format!("expected {n} signs in {{+1, -1}}")));
    }
    let id = ExactMatrix::identity(n);
    let plus = &id + z;
    let minus = &id - z;
    let plus_inv = plus
        .inverse()
        .map_err(|_| Error::Singular("I + Z is singular; re-sample Z".into()))?;
    let mut q = &minus * &plus_inv;
    for (r, sign) in signs.iter().enumerate() {
        if *sign < 0 {
            for c in 0..n {
                let v = -q.get(r, c);
                q.set(r, c, v);
            }
        }
    }
    if !(&q.transpose() * &q).is_identity() {
        return Err(Error::Integrity("Cayley output is not orthogonal".into()));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_nullities() {
        assert_eq!(nullspace(&ExactMatrix::zeros(3, 3)).1, 3);
        assert_eq!(nullspace(&ExactMatrix::identity(3)).1, 0);
        assert_eq!(nullspace(&ExactMatrix::zeros(0, 4)).1, 4);
    }

    #[test]
    fn basis_vectors_annihilate() {
        let a = ExactMatrix::from_int_rows(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let (basis, k) = nullspace(&a);
        assert_eq!(k, 2);
        for v in basis {
            assert!((&a * &v).is_zero());
        }
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn cayley_examples() {
        let q = cayley_orthogonal(&ExactMatrix::zeros(2, 2), &[1, 1]).unwrap();
        assert!(q.is_identity());
        let z = ExactMatrix::from_int_rows(&[&[0, 1], &[-1, 0]]);
        let q = cayley_orthogonal(&z, &[1, 1]).unwrap();
        assert_eq!(q, ExactMatrix::from_int_rows(&[&[0, -1], &[1, 0]]));
        let q = cayley_orthogonal(&z, &[-1, 1]).unwrap();
        assert!((&q.transpose() * &q).is_identity());
    }

    #[test]
    fn cayley_rejects_singular_and_non_skew() {
        // Z = [[0, i], [−i, 0]] makes I + Z singular: det = 1 − i·(−i) = 0.
        let i = ExactScalar::i();
        let z = ExactMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => i.clone(),
            (1, 0) => -&i,
            _ => ExactScalar::zero(),
        });
        assert!(matches!(cayley_orthogonal(&z, &[1, 1]), Err(Error::Singular(_))));
        let not_skew = ExactMatrix::identity(2);
        assert!(matches!(cayley_orthogonal(&not_skew, &[1, 1]), Err(Error::Precondition(_))));
    }
}
