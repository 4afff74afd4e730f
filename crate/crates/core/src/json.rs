//! JSON wire formats. Scalars travel as strings in the scalar grammar, group
//! indices in map keys are 1-based, coefficient indices `j` are the plain
//! Toeplitz index starting at 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canonical::{MultiSegreStructure, SegreStructure};
use crate::congruence::{CongruenceData, FreeParams};
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::matrix::ExactMatrix;
use crate::scalar::ExactScalar;
use crate::toeplitz::ToeplitzForm;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl From<&ExactMatrix> for MatrixJson {
    fn from(m: &ExactMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(ExactScalar::format).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for ExactMatrix {
    type Error = Error;

    fn try_from(m: &MatrixJson) -> Result<Self> {
        let entries = m
            .entries
            .iter()
            .enumerate()
            .map(|(i, s)| {
                ExactScalar::parse(s).map_err(|e| Error::Input(format!("matrix entry {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::from_entries(m.rows, m.cols, entries)
            .map_err(|_| Error::Input(format!("matrix has {} entries, expected {}x{}", m.entries.len(), m.rows, m.cols)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub alpha: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub lambda: String,
    pub blocks: Vec<BlockJson>,
}

impl From<&SegreStructure> for StructureJson {
    fn from(s: &SegreStructure) -> Self {
        Self {
            lambda: s.lambda().format(),
            blocks: s
                .blocks()
                .iter()
                .map(|b| BlockJson { alpha: b.alpha, m: b.m })
                .collect(),
        }
    }
}

impl TryFrom<&StructureJson> for SegreStructure {
    type Error = Error;

    fn try_from(s: &StructureJson) -> Result<Self> {
        let lambda = ExactScalar::parse(&s.lambda).map_err(|e| Error::Input(format!("lambda: {e}")))?;
        SegreStructure::new(lambda, s.blocks.iter().map(|b| (b.alpha, b.m)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiJson {
    pub parts: Vec<StructureJson>,
}

impl From<&MultiSegreStructure> for MultiJson {
    fn from(m: &MultiSegreStructure) -> Self {
        Self {
            parts: m.parts().iter().map(StructureJson::from).collect(),
        }
    }
}

impl TryFrom<&MultiJson> for MultiSegreStructure {
    type Error = Error;

    fn try_from(m: &MultiJson) -> Result<Self> {
        MultiSegreStructure::new(m.parts.iter().map(SegreStructure::try_from).collect::<Result<_>>()?)
    }
}

/// Either a single structure or `{"parts": [...]}`.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyStructure {
    Single(SegreStructure),
    Multi(MultiSegreStructure),
}

pub fn parse_any_structure(text: &str) -> Result<AnyStructure> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("structure JSON: {e}")))?;
    if value.get("parts").is_some() {
        let m: MultiJson = serde_json::from_value(value).map_err(|e| Error::Input(format!("multi-structure JSON: {e}")))?;
        Ok(AnyStructure::Multi(MultiSegreStructure::try_from(&m)?))
    } else {
        let s: StructureJson = serde_json::from_value(value).map_err(|e| Error::Input(format!("structure JSON: {e}")))?;
        Ok(AnyStructure::Single(SegreStructure::try_from(&s)?))
    }
}

fn parse_key(key: &str, parts: usize, what: &str) -> Result<Vec<usize>> {
    let values: Vec<usize> = key
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Input(format!("{what} key {key:?} is not a list of integers")))?;
    if values.len() != parts {
        return Err(Error::Input(format!("{what} key {key:?} needs {parts} components")));
    }
    Ok(values)
}

/// 1-based group index to 0-based.
fn group(v: usize, key: &str) -> Result<usize> {
    v.checked_sub(1)
        .ok_or_else(|| Error::Input(format!("group indices are 1-based, got 0 in {key:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToeplitzJson {
    pub structure: StructureJson,
    /// `"r,s"` → `[A_0, …, A_{b−1}]`.
    pub coeffs: BTreeMap<String, Vec<MatrixJson>>,
}

impl From<&ToeplitzForm> for ToeplitzJson {
    fn from(f: &ToeplitzForm) -> Self {
        let st = f.structure();
        let mut coeffs = BTreeMap::new();
        for r in 0..st.len() {
            for s in 0..st.len() {
                coeffs.insert(
                    format!("{},{}", r + 1, s + 1),
                    f.coeffs(r, s).iter().map(MatrixJson::from).collect(),
                );
            }
        }
        Self {
            structure: StructureJson::from(st),
            coeffs,
        }
    }
}

impl TryFrom<&ToeplitzJson> for ToeplitzForm {
    type Error = Error;

    fn try_from(t: &ToeplitzJson) -> Result<Self> {
        let st = SegreStructure::try_from(&t.structure)?;
        let mut out = ToeplitzForm::zero(&st);
        for (key, list) in &t.coeffs {
            let idx = parse_key(key, 2, "coefficient")?;
            let (r, s) = (group(idx[0], key)?, group(idx[1], key)?);
            if r >= st.len() || s >= st.len() {
                return Err(Error::Input(format!("coefficient key {key:?} is out of range")));
            }
            if list.len() > st.b(r, s) {
                return Err(Error::Input(format!(
                    "block {key:?} takes at most {} coefficients, got {}",
                    st.b(r, s),
                    list.len()
                )));
            }
            for (j, m) in list.iter().enumerate() {
                out.try_set(r, s, j, ExactMatrix::try_from(m)?)?;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeParamsJson {
    /// `"r,s,j"` → `A_j^{rs}` with `r > s`.
    #[serde(default)]
    pub sub: BTreeMap<String, MatrixJson>,
    /// `"r"` → `A_0^{rr}`.
    #[serde(default)]
    pub seeds: BTreeMap<String, MatrixJson>,
    /// `"r,j"` → `Z_j^r`.
    #[serde(default)]
    pub skews: BTreeMap<String, MatrixJson>,
}

impl From<&FreeParams> for FreeParamsJson {
    fn from(p: &FreeParams) -> Self {
        Self {
            sub: p
                .sub_blocks
                .iter()
                .map(|(&(r, s, j), m)| (format!("{},{},{j}", r + 1, s + 1), MatrixJson::from(m)))
                .collect(),
            seeds: p
                .diag_seeds
                .iter()
                .enumerate()
                .map(|(r, m)| ((r + 1).to_string(), MatrixJson::from(m)))
                .collect(),
            skews: skews_to_json(&p.skews),
        }
    }
}

fn skews_to_json(skews: &BTreeMap<(usize, usize), ExactMatrix>) -> BTreeMap<String, MatrixJson> {
    skews
        .iter()
        .map(|(&(r, j), m)| (format!("{},{j}", r + 1), MatrixJson::from(m)))
        .collect()
}

fn skews_from_json(skews: &BTreeMap<String, MatrixJson>) -> Result<BTreeMap<(usize, usize), ExactMatrix>> {
    skews
        .iter()
        .map(|(key, m)| {
            let idx = parse_key(key, 2, "skew")?;
            Ok(((group(idx[0], key)?, idx[1]), ExactMatrix::try_from(m)?))
        })
        .collect()
}

impl FreeParamsJson {
    /// Missing seeds default to the identity.
    pub fn to_params(&self, structure: &SegreStructure) -> Result<FreeParams> {
        let mut params = FreeParams::trivial(structure);
        for (key, m) in &self.sub {
            let idx = parse_key(key, 3, "sub-block")?;
            params
                .sub_blocks
                .insert((group(idx[0], key)?, group(idx[1], key)?, idx[2]), ExactMatrix::try_from(m)?);
        }
        for (key, m) in &self.seeds {
            let idx = parse_key(key, 1, "seed")?;
            let r = group(idx[0], key)?;
            if r >= structure.len() {
                return Err(Error::Input(format!("seed key {key:?} is out of range")));
            }
            params.diag_seeds[r] = ExactMatrix::try_from(m)?;
        }
        params.skews = skews_from_json(&self.skews)?;
        params.validate(structure)?;
        Ok(params)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GeneratorSpecJson {
    W {
        #[serde(default)]
        skews: BTreeMap<String, MatrixJson>,
    },
    G {
        p: usize,
        t: usize,
        k: usize,
        #[serde(rename = "F")]
        f: MatrixJson,
    },
}

impl From<&GeneratorSpec> for GeneratorSpecJson {
    fn from(g: &GeneratorSpec) -> Self {
        match g {
            GeneratorSpec::Diagonal { skews } => GeneratorSpecJson::W {
                skews: skews_to_json(skews),
            },
            GeneratorSpec::TwoBlock { p, t, k, f } => GeneratorSpecJson::G {
                p: p + 1,
                t: t + 1,
                k: *k,
                f: MatrixJson::from(f),
            },
        }
    }
}

impl TryFrom<&GeneratorSpecJson> for GeneratorSpec {
    type Error = Error;

    fn try_from(g: &GeneratorSpecJson) -> Result<Self> {
        Ok(match g {
            GeneratorSpecJson::W { skews } => GeneratorSpec::Diagonal {
                skews: skews_from_json(skews)?,
            },
            GeneratorSpecJson::G { p, t, k, f } => GeneratorSpec::TwoBlock {
                p: group(*p, "p")?,
                t: group(*t, "t")?,
                k: *k,
                f: ExactMatrix::try_from(f)?,
            },
        })
    }
}

/// `{"structure": ..., "B": {"r": [B_0, …]}, "C": {"r": [C_0, …]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceJson {
    pub structure: StructureJson,
    #[serde(rename = "B")]
    pub b: BTreeMap<String, Vec<MatrixJson>>,
    #[serde(rename = "C")]
    pub c: BTreeMap<String, Vec<MatrixJson>>,
}

impl From<&CongruenceData> for CongruenceJson {
    fn from(d: &CongruenceData) -> Self {
        let st = d.structure();
        let lists = |use_b: bool| {
            (0..st.len())
                .map(|r| {
                    let list = (0..st.alpha(r))
                        .map(|j| {
                            let m = if use_b { d.b(r, j) } else { d.c(r, j) };
                            MatrixJson::from(m.expect("α_r coefficients"))
                        })
                        .collect();
                    ((r + 1).to_string(), list)
                })
                .collect()
        };
        Self {
            structure: StructureJson::from(st),
            b: lists(true),
            c: lists(false),
        }
    }
}

impl TryFrom<&CongruenceJson> for CongruenceData {
    type Error = Error;

    fn try_from(d: &CongruenceJson) -> Result<Self> {
        let st = SegreStructure::try_from(&d.structure)?;
        let lists = |map: &BTreeMap<String, Vec<MatrixJson>>| -> Result<Vec<Vec<ExactMatrix>>> {
            (1..=st.len())
                .map(|r| {
                    map.get(&r.to_string())
                        .ok_or_else(|| Error::Input(format!("missing coefficients for group {r}")))?
                        .iter()
                        .map(ExactMatrix::try_from)
                        .collect()
                })
                .collect()
        };
        CongruenceData::new(&st, lists(&d.b)?, lists(&d.c)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = ExactMatrix::from_fn(2, 3, |r, c| ExactScalar::from_ratio(r as i64 - c as i64, 2));
        let j = MatrixJson::from(&m);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"rows":2,"cols":3,"entries":["0","-1/2","-1","1/2","0","-1/2"]}"#);
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(ExactMatrix::try_from(&back).unwrap(), m);
        let bad = MatrixJson { rows: 1, cols: 2, entries: vec!["1".into()] };
        assert!(ExactMatrix::try_from(&bad).is_err());
    }

    #[test]
    fn structure_forms() {
        let text = r#"{"lambda": "1 + i", "blocks": [{"alpha": 1, "m": 2}, {"alpha": 3, "m": 1}]}"#;
        let AnyStructure::Single(s) = parse_any_structure(text).unwrap() else { panic!() };
        assert_eq!(s.alpha(0), 3);
        let multi = r#"{"parts": [{"lambda": "0", "blocks": [{"alpha": 1, "m": 1}]},
                                  {"lambda": "1", "blocks": [{"alpha": 2, "m": 1}]}]}"#;
        assert!(matches!(parse_any_structure(multi).unwrap(), AnyStructure::Multi(_)));
        assert!(parse_any_structure(r#"{"lambda": "1 +", "blocks": []}"#).is_err());
    }

    #[test]
    fn toeplitz_and_params_round_trip() {
        let s = SegreStructure::new(ExactScalar::zero(), [(2, 1), (1, 2)]).unwrap();
        let mut f = ToeplitzForm::identity(&s);
        f.set(1, 0, 0, ExactMatrix::from_int_rows(&[&[1], &[2]]));
        let j = ToeplitzJson::from(&f);
        assert!(j.coeffs.contains_key("2,1"));
        assert_eq!(ToeplitzForm::try_from(&j).unwrap(), f);

        let mut p = FreeParams::trivial(&s);
        p.sub_blocks.insert((1, 0, 0), ExactMatrix::from_int_rows(&[&[1], &[0]]));
        p.skews.insert((0, 1), ExactMatrix::zeros(1, 1));
        let pj = FreeParamsJson::from(&p);
        assert!(pj.sub.contains_key("2,1,0"));
        assert_eq!(pj.to_params(&s).unwrap(), p);
    }

    #[test]
    fn generator_spec_tags() {
        let g: GeneratorSpecJson =
            serde_json::from_str(r#"{"kind": "G", "p": 1, "t": 2, "k": 0, "F": {"rows": 1, "cols": 1, "entries": ["2"]}}"#)
                .unwrap();
        let spec = GeneratorSpec::try_from(&g).unwrap();
        assert!(matches!(spec, GeneratorSpec::TwoBlock { p: 0, t: 1, k: 0, .. }));
        assert_eq!(GeneratorSpecJson::from(&spec), g);
        let w: GeneratorSpecJson = serde_json::from_str(r#"{"kind": "W"}"#).unwrap();
        assert!(matches!(GeneratorSpec::try_from(&w).unwrap(), GeneratorSpec::Diagonal { .. }));
    }

    #[test]
    fn congruence_round_trip() {
        let s = SegreStructure::new(ExactScalar::zero(), [(2, 1)]).unwrap();
        let d = CongruenceData::identity(&s);
        assert_eq!(CongruenceData::try_from(&CongruenceJson::from(&d)).unwrap(), d);
    }
}
