//! The isotropy group `Σ_S = {Q : QᵀQ = I, QᵀSQ = S}` of a canonical symmetric
//! matrix: description, exact sampling, membership and group operations.
//!
//! `S = P J P⁻¹`, so `Q ∈ Σ_S` exactly when `X = P⁻¹ Q P` commutes with `J`
//! and satisfies `E Xᵀ E X = I`. Conjugating by `Ω` turns `X` into a
//! block-Toeplitz form `𝒳` with `ℱ𝒳ᵀℱ𝒳 = I`, which the congruence solver
//! parameterizes.

use serde::Serialize;

use crate::canonical::{build_omega, build_p, build_p_inv, build_s, MultiSegreStructure, SegreStructure};
use crate::congruence::{solution_dimension, solve_congruence, CongruenceData, FreeParams};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::toeplitz::ToeplitzForm;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalRecipe {
    pub group: usize,
    pub index: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoBlockRecipe {
    pub p: usize,
    pub t: usize,
    pub k_max: usize,
    pub f_rows: usize,
    pub f_cols: usize,
}

/// Parameters accepted by the generator families; group indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorRecipes {
    pub diagonal: Vec<DiagonalRecipe>,
    pub two_block: Vec<TwoBlockRecipe>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropyDescription {
    pub n: usize,
    pub dimension: usize,
    /// Sizes `m_r` of the orthogonal factors `O_{m_r}` of the reductive part.
    pub orthogonal_factors: Vec<usize>,
    pub reductive_dimension: usize,
    pub unipotent_dimension: usize,
    /// `(U − I)^e = 0` for every unipotent element, with `e = 2α_1 − 1`.
    pub unipotent_exponent_bound: usize,
    /// Length bound for the central series of the unipotent part, `2α_1 − 2`.
    pub nilpotency_class_bound: usize,
    pub generators: GeneratorRecipes,
}

pub fn describe_isotropy(structure: &SegreStructure) -> IsotropyDescription {
    let n = structure.len();
    let dimension = solution_dimension(structure);
    let orthogonal_factors: Vec<usize> = structure.blocks().iter().map(|b| b.m).collect();
    let reductive_dimension = orthogonal_factors.iter().map(|m| m * (m - 1) / 2).sum();
    let mut diagonal = Vec::new();
    for r in 0..n {
        for j in 1..structure.alpha(r) {
            diagonal.push(DiagonalRecipe {
                group: r + 1,
                index: j,
                size: structure.m(r),
            });
        }
    }
    let mut two_block = Vec::new();
    for p in 0..n {
        for t in p + 1..n {
            two_block.push(TwoBlockRecipe {
                p: p + 1,
                t: t + 1,
                k_max: structure.alpha(t) - 1,
                f_rows: structure.m(t),
                f_cols: structure.m(p),
            });
        }
    }
    let max_weight = 2 * structure.max_alpha() - 2;
    IsotropyDescription {
        n: structure.n(),
        dimension,
        orthogonal_factors,
        reductive_dimension,
        unipotent_dimension: dimension - reductive_dimension,
        unipotent_exponent_bound: max_weight + 1,
        nilpotency_class_bound: max_weight,
        generators: GeneratorRecipes { diagonal, two_block },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiDescription {
    pub n: usize,
    pub dimension: usize,
    pub parts: Vec<IsotropyDescription>,
}

/// Per-eigenvalue descriptions; the group is their direct product.
pub fn describe_multi(multi: &MultiSegreStructure) -> MultiDescription {
    let parts: Vec<IsotropyDescription> = multi.parts().iter().map(describe_isotropy).collect();
    MultiDescription {
        n: multi.n(),
        dimension: parts.iter().map(|p| p.dimension).sum(),
        parts,
    }
}

/// `Q = P Ω 𝒳 Ωᵀ P⁻¹`.
pub fn form_to_q(structure: &SegreStructure, x: &ToeplitzForm) -> ExactMatrix {
    let omega = build_omega(structure);
    let dense = &(&omega * &x.assemble()) * &omega.transpose();
    &(&build_p(structure) * &dense) * &build_p_inv(structure)
}

/// `𝒳 = Ωᵀ P⁻¹ Q P Ω`, checked to lie in the block-Toeplitz shape.
pub fn q_to_form(structure: &SegreStructure, q: &ExactMatrix) -> Result<ToeplitzForm> {
    let n = structure.n();
    if q.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "isotropy element",
            left: (n, n),
            right: q.shape(),
        });
    }
    let x = &(&build_p_inv(structure) * q) * &build_p(structure);
    let omega = build_omega(structure);
    ToeplitzForm::extract(&(&(&omega.transpose() * &x) * &omega), structure)
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub form: ToeplitzForm,
    pub q: ExactMatrix,
}

/// Solves the isotropy equation for `params` and maps the solution back to a
/// dense orthogonal `Q`, re-verified exactly before returning.
pub fn sample_isotropy(structure: &SegreStructure, params: &FreeParams) -> Result<Sample> {
    let form = solve_congruence(&CongruenceData::identity(structure), params)?;
    let q = form_to_q(structure, &form);
    let report = verify_against(&build_s(structure), &q)?;
    if !report.member {
        return Err(Error::Integrity(format!(
            "sampled element is not in the isotropy group: {}",
            report.failure.unwrap_or_default()
        )));
    }
    Ok(Sample { form, q })
}

pub fn sample_isotropy_element(structure: &SegreStructure, params: &FreeParams) -> Result<ExactMatrix> {
    sample_isotropy(structure, params).map(|s| s.q)
}

/// Block-diagonal element of a multi-eigenvalue isotropy group, one block per part.
pub fn sample_multi(multi: &MultiSegreStructure, params: &[FreeParams]) -> Result<ExactMatrix> {
    if params.len() != multi.parts().len() {
        return Err(Error::Input(format!(
            "expected {} parameter sets, got {}",
            multi.parts().len(),
            params.len()
        )));
    }
    let blocks = multi
        .parts()
        .iter()
        .zip(params)
        .map(|(s, p)| sample_isotropy_element(s, p))
        .collect::<Result<Vec<_>>>()?;
    let q = ExactMatrix::direct_sum_all(&blocks);
    let report = verify_against(&multi.build_s(), &q)?;
    if !report.member {
        return Err(Error::Integrity("multi-part sample is not in the isotropy group".into()));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    pub orthogonal: bool,
    pub preserves_s: bool,
    /// The first check that failed, if any.
    pub failure: Option<String>,
}

/// Exact test of `QᵀQ = I` and `QᵀSQ = S`.
pub fn verify_against(s: &ExactMatrix, q: &ExactMatrix) -> Result<MembershipReport> {
    if q.shape() != s.shape() {
        return Err(Error::DimensionMismatch {
            op: "verify isotropy",
            left: s.shape(),
            right: q.shape(),
        });
    }
    let qt = q.transpose();
    let gram = &qt * q;
    let orthogonal = gram.is_identity();
    let preserves_s = &(&qt * s) * q == *s;
    let failure = if !orthogonal {
        let (r, c) = gram
            .first_mismatch(&ExactMatrix::identity(q.rows()))
            .expect("not identity");
        Some(format!("QᵀQ != I at ({r}, {c})"))
    } else if !preserves_s {
        Some("QᵀSQ != S".to_string())
    } else {
        None
    };
    Ok(MembershipReport {
        member: orthogonal && preserves_s,
        orthogonal,
        preserves_s,
        failure,
    })
}

pub fn verify_isotropy(structure: &SegreStructure, q: &ExactMatrix) -> Result<MembershipReport> {
    verify_against(&build_s(structure), q)
}

pub fn verify_multi(multi: &MultiSegreStructure, q: &ExactMatrix) -> Result<MembershipReport> {
    verify_against(&multi.build_s(), q)
}

/// A verified member of `Σ_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyElement {
    structure: SegreStructure,
    q: ExactMatrix,
}

impl IsotropyElement {
    pub fn new(structure: &SegreStructure, q: ExactMatrix) -> Result<Self> {
        let report = verify_isotropy(structure, &q)?;
        if !report.member {
            return Err(Error::Precondition(format!(
                "matrix is not in the isotropy group: {}",
                report.failure.unwrap_or_default()
            )));
        }
        Ok(Self {
            structure: structure.clone(),
            q,
        })
    }

    pub fn identity(structure: &SegreStructure) -> Self {
        Self {
            structure: structure.clone(),
            q: ExactMatrix::identity(structure.n()),
        }
    }

    pub fn q(&self) -> &ExactMatrix {
        &self.q
    }

    pub fn structure(&self) -> &SegreStructure {
        &self.structure
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.structure != other.structure {
            return Err(Error::Input("elements belong to different structures".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Self::new(&self.structure, &self.q * &other.q)
    }

    /// `Q⁻¹ = Qᵀ`.
    pub fn inverse(&self) -> Result<Self> {
        Self::new(&self.structure, self.q.transpose())
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self> {
        g.inverse()?.mul(self)?.mul(g)
    }

    pub fn form(&self) -> Result<ToeplitzForm> {
        q_to_form(&self.structure, &self.q)
    }

    /// Diagonal seeds `A_0^{rr}`: the image in `⊕ O_{m_r}`.
    pub fn orthogonal_part(&self) -> Result<Vec<ExactMatrix>> {
        let form = self.form()?;
        Ok((0..self.structure.len()).map(|r| form.get(r, r, 0).clone()).collect())
    }

    /// Factor `𝒰` of `𝒳 = 𝒪𝒰` with `𝒪` block-diagonal orthogonal.
    pub fn unipotent_part(&self) -> Result<ToeplitzForm> {
        let form = self.form()?;
        let o_inv: Vec<ExactMatrix> = self.orthogonal_part()?.iter().map(ExactMatrix::transpose).collect();
        ToeplitzForm::block_diagonal(&self.structure, &o_inv)?.try_mul(&form)
    }
}

/// Element of the reductive part `⊕_r ⊕_{α_r} Q_r` as a form.
pub fn orthogonal_element(structure: &SegreStructure, blocks: &[ExactMatrix]) -> Result<ToeplitzForm> {
    for (r, b) in blocks.iter().enumerate() {
        if !(&b.transpose() * b).is_identity() {
            return Err(Error::Precondition(format!("block {} is not orthogonal", r + 1)));
        }
    }
    ToeplitzForm::block_diagonal(structure, blocks)
}
