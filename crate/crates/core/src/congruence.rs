//! Parameterized general solution of `𝒞 = ℱ𝒳ᵀℱℬ𝒳` over block-Toeplitz forms.
//!
//! `ℬ` and `𝒞` are block-diagonal, each diagonal block an upper-triangular
//! Toeplitz matrix with symmetric coefficients `B_j^r`, `C_j^r`. The lower
//! coefficients `A_j^{rs}` (`r > s`), the diagonal seeds `A_0^{rr}` and skew
//! matrices `Z_j^r` are free; everything else is produced by a sweep over the
//! coefficient index `j`, then the distance `p = s − r` from the diagonal.

use std::collections::BTreeMap;

use crate::canonical::{build_f, SegreStructure};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{rat, ExactScalar};
use crate::toeplitz::{product_shift, ToeplitzForm};

/// The block-diagonal data `ℬ` and `𝒞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceData {
    structure: SegreStructure,
    b: Vec<Vec<ExactMatrix>>,
    c: Vec<Vec<ExactMatrix>>,
}

fn check_coeff_lists(structure: &SegreStructure, lists: &[Vec<ExactMatrix>], name: &str) -> Result<()> {
    if lists.len() != structure.len() {
        return Err(Error::Input(format!(
            "{name}: expected {} groups, got {}",
            structure.len(),
            lists.len()
        )));
    }
    for (r, list) in lists.iter().enumerate() {
        if list.len() != structure.alpha(r) {
            return Err(Error::Input(format!(
                "{name}: group {} needs {} coefficients, got {}",
                r + 1,
                structure.alpha(r),
                list.len()
            )));
        }
        for (j, m) in list.iter().enumerate() {
            let want = (structure.m(r), structure.m(r));
            if m.shape() != want {
                return Err(Error::DimensionMismatch {
                    op: "congruence data",
                    left: want,
                    right: m.shape(),
                });
            }
            if !m.is_symmetric() {
                return Err(Error::Precondition(format!("{name}_{j}^{} is not symmetric", r + 1)));
            }
        }
        if list[0].inverse().is_err() {
            return Err(Error::Precondition(format!("{name}_0^{} is singular", r + 1)));
        }
    }
    Ok(())
}

impl CongruenceData {
    pub fn new(structure: &SegreStructure, b: Vec<Vec<ExactMatrix>>, c: Vec<Vec<ExactMatrix>>) -> Result<Self> {
        check_coeff_lists(structure, &b, "B")?;
        check_coeff_lists(structure, &c, "C")?;
        Ok(Self {
            structure: structure.clone(),
            b,
            c,
        })
    }

    /// `ℬ = 𝒞` with constant diagonal blocks `B_0^r = diag[r]`.
    pub fn constant(structure: &SegreStructure, diag: &[ExactMatrix]) -> Result<Self> {
        if diag.len() != structure.len() {
            return Err(Error::Input(format!(
                "expected {} diagonal blocks, got {}",
                structure.len(),
                diag.len()
            )));
        }
        let lists: Vec<Vec<ExactMatrix>> = diag
            .iter()
            .enumerate()
            .map(|(r, d)| {
                let mut list = vec![d.clone()];
                let zero = ExactMatrix::zeros(d.rows(), d.cols());
                list.resize(structure.alpha(r), zero);
                list
            })
            .collect();
        Self::new(structure, lists.clone(), lists)
    }

    /// `ℬ = 𝒞 = I`.
    pub fn identity(structure: &SegreStructure) -> Self {
        let diag: Vec<ExactMatrix> = structure.blocks().iter().map(|b| ExactMatrix::identity(b.m)).collect();
        Self::constant(structure, &diag).expect("identity data is valid")
    }

    pub fn structure(&self) -> &SegreStructure {
        &self.structure
    }

    pub fn b(&self, r: usize, j: usize) -> Option<&ExactMatrix> {
        self.b[r].get(j)
    }

    pub fn c(&self, r: usize, j: usize) -> Option<&ExactMatrix> {
        self.c[r].get(j)
    }

    pub fn is_symmetric_pair(&self) -> bool {
        self.b == self.c
    }

    fn form(&self, lists: &[Vec<ExactMatrix>]) -> ToeplitzForm {
        let mut out = ToeplitzForm::zero(&self.structure);
        for (r, list) in lists.iter().enumerate() {
            for (j, m) in list.iter().enumerate() {
                out.set(r, r, j, m.clone());
            }
        }
        out
    }

    pub fn b_form(&self) -> ToeplitzForm {
        self.form(&self.b)
    }

    pub fn c_form(&self) -> ToeplitzForm {
        self.form(&self.c)
    }
}

/// Free data of the solution space. Indices are 0-based; missing sub-block and
/// skew entries are read as zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeParams {
    /// `(r, s, j) → A_j^{rs}` for `r > s`, `j < α_r`.
    pub sub_blocks: BTreeMap<(usize, usize, usize), ExactMatrix>,
    /// `A_0^{rr}` per group.
    pub diag_seeds: Vec<ExactMatrix>,
    /// `(r, j) → Z_j^r`, skew-symmetric, `1 ≤ j < α_r`.
    pub skews: BTreeMap<(usize, usize), ExactMatrix>,
}

impl FreeParams {
    /// Zero free data with identity seeds.
    pub fn trivial(structure: &SegreStructure) -> Self {
        Self {
            sub_blocks: BTreeMap::new(),
            diag_seeds: structure.blocks().iter().map(|b| ExactMatrix::identity(b.m)).collect(),
            skews: BTreeMap::new(),
        }
    }

    pub fn validate(&self, structure: &SegreStructure) -> Result<()> {
        let n = structure.len();
        if self.diag_seeds.len() != n {
            return Err(Error::Input(format!("expected {n} diagonal seeds, got {}", self.diag_seeds.len())));
        }
        for (r, seed) in self.diag_seeds.iter().enumerate() {
            expect_shape(seed, (structure.m(r), structure.m(r)), "diagonal seed")?;
        }
        for (&(r, s, j), m) in &self.sub_blocks {
            if r >= n || s >= r || j >= structure.alpha(r) {
                return Err(Error::Input(format!(
                    "sub-block ({}, {}, {j}) is not a free coefficient",
                    r + 1,
                    s + 1
                )));
            }
            expect_shape(m, (structure.m(r), structure.m(s)), "sub-block")?;
        }
        for (&(r, j), z) in &self.skews {
            if r >= n || j == 0 || j >= structure.alpha(r) {
                return Err(Error::Input(format!("skew ({}, {j}) is out of range", r + 1)));
            }
            expect_shape(z, (structure.m(r), structure.m(r)), "skew")?;
            if !z.is_skew_symmetric() {
                return Err(Error::Precondition(format!("Z_{j}^{} is not skew-symmetric", r + 1)));
            }
        }
        Ok(())
    }

    /// Number of scalar degrees of freedom in sub-blocks and skews.
    pub fn free_count(structure: &SegreStructure) -> usize {
        let n = structure.len();
        let sub: usize = (0..n)
            .map(|r| structure.alpha(r) * structure.m(r) * (0..r).map(|s| structure.m(s)).sum::<usize>())
            .sum();
        let skew: usize = (0..n)
            .map(|r| (structure.alpha(r) - 1) * structure.m(r) * (structure.m(r) - 1) / 2)
            .sum();
        sub + skew
    }
}

fn expect_shape(m: &ExactMatrix, want: (usize, usize), op: &'static str) -> Result<()> {
    if m.shape() != want {
        return Err(Error::DimensionMismatch {
            op,
            left: want,
            right: m.shape(),
        });
    }
    Ok(())
}

/// A form under construction, with a flag per coefficient recording whether
/// the sweep has produced it.
#[derive(Clone, Debug)]
pub struct PartialSolution {
    form: ToeplitzForm,
    known: Vec<Vec<bool>>,
}

impl PartialSolution {
    pub fn empty(structure: &SegreStructure) -> Self {
        let n = structure.len();
        let known = (0..n * n).map(|i| vec![false; structure.b(i / n, i % n)]).collect();
        Self {
            form: ToeplitzForm::zero(structure),
            known,
        }
    }

    /// Every coefficient of `form` counts as determined.
    pub fn complete(form: ToeplitzForm) -> Self {
        let st = form.structure();
        let n = st.len();
        let known = (0..n * n).map(|i| vec![true; st.b(i / n, i % n)]).collect();
        Self { form, known }
    }

    fn slot(&self, r: usize, s: usize) -> usize {
        r * self.form.structure().len() + s
    }

    pub fn is_known(&self, r: usize, s: usize, j: usize) -> bool {
        self.known[self.slot(r, s)][j]
    }

    fn fix(&mut self, r: usize, s: usize, j: usize, value: ExactMatrix) {
        self.form.set(r, s, j, value);
        let slot = self.slot(r, s);
        self.known[slot][j] = true;
    }

    /// `A_j^{rs}`; `None` past the end of the coefficient list. `mask` names
    /// the coefficient currently being solved, which reads as absent.
    fn coeff(&self, r: usize, s: usize, j: usize, mask: Option<(usize, usize, usize)>) -> Result<Option<&ExactMatrix>> {
        if j >= self.form.structure().b(r, s) || mask == Some((r, s, j)) {
            return Ok(None);
        }
        if !self.is_known(r, s, j) {
            return Err(Error::Sequencing(format!(
                "A_{j}^({},{}) is referenced before it is determined",
                r + 1,
                s + 1
            )));
        }
        Ok(Some(self.form.get(r, s, j)))
    }

    pub fn form(&self) -> &ToeplitzForm {
        &self.form
    }

    pub fn into_form(self) -> ToeplitzForm {
        self.form
    }
}

fn phi_masked(
    data: &CongruenceData,
    x: &PartialSolution,
    n: isize,
    k: usize,
    s: usize,
    mask: Option<(usize, usize, usize)>,
) -> Result<ExactMatrix> {
    let st = data.structure();
    let mut out = ExactMatrix::zeros(st.m(k), st.m(s));
    if n < 0 || n as usize >= st.b(k, s) {
        return Ok(out);
    }
    let n = n as usize;
    for j in 0..=n {
        let (Some(b), Some(a)) = (data.b(k, n - j), x.coeff(k, s, j, mask)?) else {
            continue;
        };
        if !b.is_zero() && !a.is_zero() {
            out.add_assign(&(b * a));
        }
    }
    Ok(out)
}

fn psi_masked(
    data: &CongruenceData,
    x: &PartialSolution,
    n: isize,
    k: usize,
    r: usize,
    s: usize,
    mask: Option<(usize, usize, usize)>,
) -> Result<ExactMatrix> {
    let st = data.structure();
    let mut out = ExactMatrix::zeros(st.m(r), st.m(s));
    if n < 0 {
        return Ok(out);
    }
    for j in 0..=n {
        let Some(a) = x.coeff(k, r, j as usize, mask)? else {
            continue;
        };
        if a.is_zero() {
            continue;
        }
        let phi = phi_masked(data, x, n - j, k, s, mask)?;
        if !phi.is_zero() {
            out.add_assign(&(&a.transpose() * &phi));
        }
    }
    Ok(out)
}

/// `Φ_n^{ks} = Σ_{j=0}^{n} B_{n−j}^k A_j^{ks}`; zero for `n < 0` and past the
/// last coefficient of block `(k, s)`.
pub fn accum_phi(data: &CongruenceData, x: &PartialSolution, n: isize, k: usize, s: usize) -> Result<ExactMatrix> {
    phi_masked(data, x, n, k, s, None)
}

/// `Ψ_n^{krs} = Σ_{j=0}^{n} (A_j^{kr})ᵀ Φ_{n−j}^{ks}`; zero for `n < 0`.
pub fn accum_psi(data: &CongruenceData, x: &PartialSolution, n: isize, k: usize, r: usize, s: usize) -> Result<ExactMatrix> {
    psi_masked(data, x, n, k, r, s, None)
}

/// `D_j^{rs}`: coefficient `j` of block `(r, s)` of `ℱ𝒳ᵀℱℬ𝒳` with the
/// unknown `A_j^{rs}` left out.
fn residual_without(data: &CongruenceData, x: &PartialSolution, j: usize, r: usize, s: usize) -> Result<ExactMatrix> {
    let st = data.structure();
    let mask = Some((r, s, j));
    let mut out = ExactMatrix::zeros(st.m(r), st.m(s));
    for k in 0..st.len() {
        let delta = product_shift(st.alpha(r), st.alpha(k), st.alpha(s));
        let idx = j as isize - delta as isize;
        let psi = psi_masked(data, x, idx, k, r, s, mask)?;
        if !psi.is_zero() {
            out.add_assign(&psi);
        }
    }
    Ok(out)
}

/// Number of free parameters of the solution set for `ℬ = 𝒞`:
/// `Σ_r α_r m_r ((m_r − 1)/2 + Σ_{s<r} m_s)`.
pub fn solution_dimension(structure: &SegreStructure) -> usize {
    let mut before = 0;
    let mut total = 0;
    for b in structure.blocks() {
        total += b.alpha * b.m * (b.m - 1) / 2 + b.alpha * b.m * before;
        before += b.m;
    }
    total
}

/// Solves for `𝒳` given the free data. The result satisfies
/// `ℱ𝒳ᵀℱℬ𝒳 = 𝒞` exactly; this is re-checked densely before returning.
pub fn solve_congruence(data: &CongruenceData, params: &FreeParams) -> Result<ToeplitzForm> {
    let st = data.structure().clone();
    params.validate(&st)?;
    let n = st.len();
    let mut x = PartialSolution::empty(&st);

    // Free coefficients and the seeds.
    for r in 0..n {
        for s in 0..r {
            for j in 0..st.alpha(r) {
                let value = params
                    .sub_blocks
                    .get(&(r, s, j))
                    .cloned()
                    .unwrap_or_else(|| ExactMatrix::zeros(st.m(r), st.m(s)));
                x.fix(r, s, j, value);
            }
        }
    }
    let mut m_inv = Vec::with_capacity(n);
    for (r, seed) in params.diag_seeds.iter().enumerate() {
        let b0 = data.b(r, 0).expect("α ≥ 1");
        let c0 = data.c(r, 0).expect("α ≥ 1");
        if &(&seed.transpose() * b0) * seed != *c0 {
            return Err(Error::Precondition(format!(
                "seed A_0^({0},{0}) does not satisfy C_0 = A_0ᵀ B_0 A_0",
                r + 1
            )));
        }
        let c0_inv = c0.inverse()?;
        m_inv.push(seed * &c0_inv);
        x.fix(r, r, 0, seed.clone());
    }

    let half = ExactScalar::from_rational(rat(1, 2));
    for j in 0..st.max_alpha() {
        for p in 0..n {
            if j == 0 && p == 0 {
                continue;
            }
            for (r, m_inv_r) in m_inv.iter().enumerate().take(n - p) {
                let s = r + p;
                if j >= st.alpha(s) {
                    continue;
                }
                let d = residual_without(data, &x, j, r, s)?;
                let value = if p == 0 {
                    let c = data.c(r, j).expect("j < α_r");
                    let rhs = c - &d;
                    if !rhs.is_symmetric() {
                        return Err(Error::Integrity(format!(
                            "C_{j}^{0} - D_{j}^({0},{0}) is not symmetric",
                            r + 1
                        )));
                    }
                    let mut inner = rhs.scale(&half);
                    if let Some(z) = params.skews.get(&(r, j)) {
                        inner.add_assign(z);
                    }
                    m_inv_r * &inner
                } else {
                    -&(m_inv_r * &d)
                };
                x.fix(r, s, j, value);
            }
        }
    }

    let form = x.into_form();
    let report = verify_congruence(data, &form)?;
    if !report.holds {
        return Err(Error::Integrity(format!(
            "solver output violates the congruence equation at {:?}",
            report.first_mismatch
        )));
    }
    Ok(form)
}

/// Location of the first entry where `ℱ𝒳ᵀℱℬ𝒳` and `𝒞` differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// 1-based group indices of the block.
    pub block: (usize, usize),
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub holds: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// Dense exact test of `𝒞 = ℱ𝒳ᵀℱℬ𝒳`.
pub fn verify_congruence(data: &CongruenceData, x: &ToeplitzForm) -> Result<CongruenceReport> {
    let st = data.structure();
    if x.structure().blocks() != st.blocks() {
        return Err(Error::DimensionMismatch {
            op: "verify congruence",
            left: (st.n(), st.n()),
            right: (x.structure().n(), x.structure().n()),
        });
    }
    let f = build_f(st);
    let xd = x.assemble();
    let lhs = &(&(&(&f * &xd.transpose()) * &f) * &data.b_form().assemble()) * &xd;
    let rhs = data.c_form().assemble();
    let first_mismatch = lhs.first_mismatch(&rhs).map(|(row, col)| {
        let group = |i: usize| (0..st.len()).rfind(|&r| st.offset(r) <= i).expect("inside");
        Mismatch {
            block: (group(row) + 1, group(col) + 1),
            row,
            col,
        }
    });
    Ok(CongruenceReport {
        holds: first_mismatch.is_none(),
        first_mismatch,
    })
}
