//! Closed-form elements of the unipotent part of the solution group, and the
//! elimination that factors any such element into them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::One;

use crate::canonical::SegreStructure;
use crate::congruence::{verify_congruence, CongruenceData};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{rat, ExactScalar, Rational};
use crate::toeplitz::ToeplitzForm;

/// `a_n = −C(2n, n) / ((n + 1)·2^{2n+1})`.
pub fn catalan_coeff(n: usize) -> Rational {
    let c = binomial(BigInt::from(2 * n), BigInt::from(n));
    let denom = BigInt::from(n + 1) * (BigInt::one() << (2 * n + 1));
    -Rational::new(c, denom)
}

/// `a_0 … a_{len−1}` from `a_0 = −1/2`, `a_n = −½ Σ_{j<n} a_j a_{n−1−j}`.
pub fn catalan_recursion(len: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(len);
    let half = rat(1, 2);
    for n in 0..len {
        if n == 0 {
            out.push(-half.clone());
            continue;
        }
        let sum: Rational = (0..n).map(|j| &out[j] * &out[n - 1 - j]).sum();
        out.push(-(&half * sum));
    }
    out
}

/// Coefficients of `f + ½t·f² + ½` up to `t^order`, with `f = Σ_{n≤order} a_n tⁿ`.
/// All of them vanish.
pub fn generating_function_residual(order: usize) -> Vec<Rational> {
    let a: Vec<Rational> = (0..=order).map(catalan_coeff).collect();
    let half = rat(1, 2);
    (0..=order)
        .map(|n| {
            let mut v = a[n].clone();
            if n == 0 {
                v += &half;
            } else {
                let sq: Rational = (0..n).map(|j| &a[j] * &a[n - 1 - j]).sum();
                v += &half * sq;
            }
            v
        })
        .collect()
}

fn check_skews(structure: &SegreStructure, skews: &BTreeMap<(usize, usize), ExactMatrix>) -> Result<()> {
    for (&(r, j), z) in skews {
        if r >= structure.len() || j == 0 || j >= structure.alpha(r) {
            return Err(Error::Input(format!("skew ({}, {j}) is out of range", r + 1)));
        }
        if z.shape() != (structure.m(r), structure.m(r)) {
            return Err(Error::DimensionMismatch {
                op: "skew",
                left: (structure.m(r), structure.m(r)),
                right: z.shape(),
            });
        }
        if !z.is_skew_symmetric() {
            return Err(Error::Precondition(format!("Z_{j}^{} is not skew-symmetric", r + 1)));
        }
    }
    Ok(())
}

fn check_b_diag(structure: &SegreStructure, b_diag: &[ExactMatrix]) -> Result<Vec<ExactMatrix>> {
    if b_diag.len() != structure.len() {
        return Err(Error::Input(format!(
            "expected {} diagonal B blocks, got {}",
            structure.len(),
            b_diag.len()
        )));
    }
    b_diag
        .iter()
        .enumerate()
        .map(|(r, b)| {
            if b.shape() != (structure.m(r), structure.m(r)) || !b.is_symmetric() {
                return Err(Error::Precondition(format!(
                    "B_{} must be symmetric of size {}",
                    r + 1,
                    structure.m(r)
                )));
            }
            b.inverse()
                .map_err(|_| Error::Singular(format!("B_{} is singular", r + 1)))
        })
        .collect()
}

fn identity_blocks(structure: &SegreStructure) -> Vec<ExactMatrix> {
    structure.blocks().iter().map(|b| ExactMatrix::identity(b.m)).collect()
}

fn ensure_solution(data: &CongruenceData, g: &ToeplitzForm, what: &str) -> Result<()> {
    if !verify_congruence(data, g)?.holds {
        return Err(Error::Integrity(format!("{what} does not satisfy its congruence equation")));
    }
    Ok(())
}

/// `𝒱 = ⊕_r T(I, V_1^r, …)` with
/// `V_n = ½ B_r⁻¹ (Z_n − Σ_{i=1}^{n−1} V_iᵀ B_r V_{n−i})`.
pub fn gen_v(
    structure: &SegreStructure,
    b_diag: &[ExactMatrix],
    skews: &BTreeMap<(usize, usize), ExactMatrix>,
) -> Result<ToeplitzForm> {
    let b_inv = check_b_diag(structure, b_diag)?;
    check_skews(structure, skews)?;
    let half = ExactScalar::from_ratio(1, 2);
    let mut out = ToeplitzForm::identity(structure);
    for r in 0..structure.len() {
        let m = structure.m(r);
        let mut v: Vec<ExactMatrix> = vec![ExactMatrix::identity(m)];
        for n in 1..structure.alpha(r) {
            let mut inner = skews.get(&(r, n)).cloned().unwrap_or_else(|| ExactMatrix::zeros(m, m));
            for i in 1..n {
                inner.sub_assign(&(&(&v[i].transpose() * &b_diag[r]) * &v[n - i]));
            }
            let vn = (&b_inv[r] * &inner).scale(&half);
            out.set(r, r, n, vn.clone());
            v.push(vn);
        }
    }
    ensure_solution(&CongruenceData::constant(structure, b_diag)?, &out, "diagonal generator")?;
    Ok(out)
}

/// [`gen_v`] with every `B_r = I`.
pub fn gen_w(structure: &SegreStructure, skews: &BTreeMap<(usize, usize), ExactMatrix>) -> Result<ToeplitzForm> {
    gen_v(structure, &identity_blocks(structure), skews)
}

/// Recovers the skews of a block-diagonal form with identity leading
/// coefficients: `Z_n = 2 B V_n + Σ_{i=1}^{n−1} V_iᵀ B V_{n−i}`.
pub fn skews_of_diagonal(v: &ToeplitzForm, b_diag: &[ExactMatrix]) -> Result<BTreeMap<(usize, usize), ExactMatrix>> {
    let st = v.structure();
    let mut out = BTreeMap::new();
    for (r, b) in b_diag.iter().enumerate().take(st.len()) {
        for n in 1..st.alpha(r) {
            let mut z = (b * v.get(r, r, n)).scale(&ExactScalar::from_int(2));
            for i in 1..n {
                z.add_assign(&(&(&v.get(r, r, i).transpose() * b) * v.get(r, r, n - i)));
            }
            if !z.is_skew_symmetric() {
                return Err(Error::Precondition(format!(
                    "diagonal block {} is not of generator form",
                    r + 1
                )));
            }
            if !z.is_zero() {
                out.insert((r, n), z);
            }
        }
    }
    Ok(out)
}

/// Coefficients of the two-block generator `𝒟ᵏ_{α,β}(F)`.
struct TwoBlock {
    upper_left: Vec<ExactMatrix>,
    lower_right: Vec<ExactMatrix>,
    /// Coefficient `k` of the upper block.
    g: ExactMatrix,
    /// Coefficient `k` of the lower block.
    f: ExactMatrix,
}

fn two_block_coeffs(
    alpha: usize,
    beta: usize,
    k: usize,
    f: &ExactMatrix,
    b: &ExactMatrix,
    b_inv: &ExactMatrix,
    c: &ExactMatrix,
) -> TwoBlock {
    let (m1, m2) = (b.rows(), c.rows());
    let step = 2 * k + alpha - beta;
    let ft = f.transpose();
    let left = &(&(b_inv * &ft) * c) * f;
    let right = &(&(f * b_inv) * &ft) * c;
    let fill = |len: usize, m: usize, base: &ExactMatrix| {
        let mut list = vec![ExactMatrix::zeros(m, m); len];
        list[0] = ExactMatrix::identity(m);
        let mut power = ExactMatrix::identity(m);
        let mut n = 1;
        while n * step < len {
            power = &power * base;
            let a = ExactScalar::from_rational(catalan_coeff(n - 1));
            list[n * step] = power.scale(&a);
            n += 1;
        }
        list
    };
    TwoBlock {
        upper_left: fill(alpha, m1, &left),
        lower_right: fill(beta, m2, &right),
        g: -&(&(b_inv * &ft) * c),
        f: f.clone(),
    }
}

/// `𝒦ᵏ_{p,t}(F)`: the two-block generator placed at groups `p < t` of
/// `structure`, identity elsewhere. `F` is `m_t × m_p` and sits at coefficient
/// `k` of block `(t, p)`; block `(p, t)` gets `−B_p⁻¹ Fᵀ B_t`.
pub fn gen_g(
    structure: &SegreStructure,
    p: usize,
    t: usize,
    k: usize,
    f: &ExactMatrix,
    b_diag: &[ExactMatrix],
) -> Result<ToeplitzForm> {
    let n = structure.len();
    if p >= t || t >= n {
        return Err(Error::Input(format!(
            "generator needs 1 <= p < t <= {n}, got p = {}, t = {}",
            p + 1,
            t + 1
        )));
    }
    if k >= structure.alpha(t) {
        return Err(Error::Input(format!(
            "generator index k = {k} must be below alpha_t = {}",
            structure.alpha(t)
        )));
    }
    if f.shape() != (structure.m(t), structure.m(p)) {
        return Err(Error::DimensionMismatch {
            op: "generator F",
            left: (structure.m(t), structure.m(p)),
            right: f.shape(),
        });
    }
    let b_inv = check_b_diag(structure, b_diag)?;
    let tb = two_block_coeffs(
        structure.alpha(p),
        structure.alpha(t),
        k,
        f,
        &b_diag[p],
        &b_inv[p],
        &b_diag[t],
    );
    let mut out = ToeplitzForm::identity(structure);
    for (j, a) in tb.upper_left.into_iter().enumerate() {
        out.set(p, p, j, a);
    }
    for (j, d) in tb.lower_right.into_iter().enumerate() {
        out.set(t, t, j, d);
    }
    out.set(p, t, k, tb.g);
    out.set(t, p, k, tb.f);
    ensure_solution(&CongruenceData::constant(structure, b_diag)?, &out, "two-block generator")?;
    Ok(out)
}

/// `𝒟ᵏ_{α,β}(F)` and its inverse as dense matrices in block-Toeplitz order for
/// the groups `(α, m_1), (β, m_2)`. `F` is `m_2 × m_1`, `B` is `m_1 × m_1` and
/// `C` is `m_2 × m_2`.
pub fn gen_two_block(
    alpha: usize,
    beta: usize,
    k: usize,
    f: &ExactMatrix,
    b: &ExactMatrix,
    c: &ExactMatrix,
) -> Result<(ExactMatrix, ExactMatrix)> {
    if beta == 0 || alpha <= beta || k >= beta {
        return Err(Error::Input(format!(
            "two-block generator needs alpha > beta >= 1 and k < beta, got ({alpha}, {beta}, {k})"
        )));
    }
    let structure = SegreStructure::new(ExactScalar::zero(), [(alpha, b.rows()), (beta, c.rows())])?;
    let diag = [b.clone(), c.clone()];
    let g = gen_g(&structure, 0, 1, k, f, &diag)?;
    let inv = generator_inverse(&g, &diag)?;
    Ok((g.assemble(), inv.assemble()))
}

/// Inverse of a solution of `ℱ𝒳ᵀℱℬ𝒳 = ℬ` for constant `ℬ`: `ℬ⁻¹ ℱ𝒳ᵀℱ ℬ`.
pub fn generator_inverse(g: &ToeplitzForm, b_diag: &[ExactMatrix]) -> Result<ToeplitzForm> {
    let st = g.structure();
    let b_inv = check_b_diag(st, b_diag)?;
    let b = ToeplitzForm::block_diagonal(st, b_diag)?;
    let b_inv = ToeplitzForm::block_diagonal(st, &b_inv)?;
    let inv = b_inv.try_mul(&g.twist())?.try_mul(&b)?;
    if !inv.try_mul(g)?.is_identity() {
        return Err(Error::Integrity("generator inverse check failed".into()));
    }
    Ok(inv)
}

/// Smallest `e` with `(G − I)^e = 0`.
pub fn unipotent_index(g: &ToeplitzForm) -> Option<usize> {
    let n = g.try_sub(&ToeplitzForm::identity(g.structure())).ok()?;
    let bound = ToeplitzForm::max_weight(g.structure()) + 1;
    let mut power = ToeplitzForm::identity(g.structure());
    for e in 0..=bound {
        if power.is_zero() {
            return Some(e);
        }
        power = power.try_mul(&n).ok()?;
    }
    None
}

/// A generator recipe. Group indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Diagonal {
        skews: BTreeMap<(usize, usize), ExactMatrix>,
    },
    TwoBlock {
        p: usize,
        t: usize,
        k: usize,
        f: ExactMatrix,
    },
}

impl GeneratorSpec {
    pub fn build(&self, structure: &SegreStructure, b_diag: &[ExactMatrix]) -> Result<ToeplitzForm> {
        match self {
            GeneratorSpec::Diagonal { skews } => gen_v(structure, b_diag, skews),
            GeneratorSpec::TwoBlock { p, t, k, f } => gen_g(structure, *p, *t, *k, f, b_diag),
        }
    }
}

/// `Y = V · H_1 ⋯ H_m` with `V` block-diagonal.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub diagonal: ToeplitzForm,
    pub diagonal_skews: BTreeMap<(usize, usize), ExactMatrix>,
    pub factors: Vec<GeneratorSpec>,
}

impl Factorization {
    pub fn product(&self, b_diag: &[ExactMatrix]) -> Result<ToeplitzForm> {
        let st = self.diagonal.structure();
        let mut acc = self.diagonal.clone();
        for h in &self.factors {
            acc = acc.try_mul(&h.build(st, b_diag)?)?;
        }
        Ok(acc)
    }
}

/// Eliminates the lower blocks of `y` column by column by right
/// multiplication with two-block generators. Within column `p`, first-row
/// positions are cleared left to right, each time taking the largest row group
/// `t` whose entry there is nonzero.
pub fn factor_unipotent(structure: &SegreStructure, y: &ToeplitzForm, b_diag: &[ExactMatrix]) -> Result<Factorization> {
    if y.structure().blocks() != structure.blocks() {
        return Err(Error::Input("form does not match the structure".into()));
    }
    check_b_diag(structure, b_diag)?;
    if !y.has_identity_diagonal() {
        return Err(Error::Precondition("input is not unipotent (A_0^{rr} != I)".into()));
    }
    let data = CongruenceData::constant(structure, b_diag)?;
    if !verify_congruence(&data, y)?.holds {
        return Err(Error::Precondition("input does not satisfy the congruence equation".into()));
    }
    let n = structure.len();
    let mut current = y.clone();
    let mut used: Vec<(usize, usize, usize, ExactMatrix)> = Vec::new();
    for p in 0..n {
        let ap = structure.alpha(p);
        for c in 0..ap {
            loop {
                // Row group t has its coefficient c − (α_p − α_t) at position c.
                let pick = (p + 1..n).rev().find_map(|t| {
                    let shift = ap - structure.alpha(t);
                    let k = c.checked_sub(shift)?;
                    let coeff = current.get(t, p, k);
                    (!coeff.is_zero()).then(|| (t, k, coeff.clone()))
                });
                let Some((t, k, r)) = pick else { break };
                let step = gen_g(structure, p, t, k, &-&r, b_diag)?;
                current = current.try_mul(&step)?;
                if !current.get(t, p, k).is_zero() {
                    return Err(Error::Integrity("elimination step left a nonzero coefficient".into()));
                }
                used.push((p, t, k, r));
            }
        }
    }
    if !current.is_block_diagonal() {
        return Err(Error::Integrity("elimination did not reach a block-diagonal form".into()));
    }
    let diagonal_skews = skews_of_diagonal(&current, b_diag)?;
    if gen_v(structure, b_diag, &diagonal_skews)? != current {
        return Err(Error::Integrity("diagonal part is not reproduced by its skews".into()));
    }
    // Y·Π 𝒦(−R_i) = V, and 𝒦(−R)⁻¹ = 𝒦(R).
    let factors: Vec<GeneratorSpec> = used
        .into_iter()
        .rev()
        .map(|(p, t, k, f)| GeneratorSpec::TwoBlock { p, t, k, f })
        .collect();
    let out = Factorization {
        diagonal: current,
        diagonal_skews,
        factors,
    };
    if out.product(b_diag)? != *y {
        return Err(Error::Integrity("factorization does not reproduce its input".into()));
    }
    Ok(out)
}
