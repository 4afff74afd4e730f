//! `isotropy`: batch front end for computing and checking isotropy groups of
//! symmetric canonical matrices. All input and output is JSON.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use isotropy_core::acceptance::{run_criterion, SuiteConfig, CRITERIA};
use isotropy_core::canonical::{build_f, build_omega, build_p, build_s};
use isotropy_core::congruence::{solution_dimension, FreeParams};
use isotropy_core::generators::{factor_unipotent, GeneratorSpec};
use isotropy_core::isotropy::{
    describe_isotropy, describe_multi, form_to_q, sample_isotropy, sample_multi, verify_against,
    IsotropyElement,
};
use isotropy_core::json::{
    parse_any_structure, AnyStructure, FreeParamsJson, GeneratorSpecJson, MatrixJson, MultiJson, StructureJson,
    ToeplitzJson,
};
use isotropy_core::orbit::{codim_formula, codim_formula_multi};
use isotropy_core::random::{random_isotropy_params, rng_from_seed, ParamOptions};
use isotropy_core::{commutant_basis, ExactMatrix, Execution, SegreStructure, ToeplitzForm};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "isotropy", version, about = "Exact isotropy groups of complex symmetric canonical matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// S, P, Ω and ℱ for a structure.
    Canonical(Common),
    /// Dimension, reductive and unipotent parts, generator families.
    Describe(Common),
    /// Dimension of the isotropy group.
    Dim(Common),
    /// Codimension of the orbit of S.
    Codim(Common),
    /// A verified element Q of the isotropy group, from --params or --seed.
    Sample(Common),
    /// Generator matrices for the specs in --params.
    Generators(Common),
    /// Checks QᵀQ = I and QᵀSQ = S for the matrix in --matrix.
    Verify(Common),
    /// Dimension and a basis of the matrices commuting with J.
    Commutant(Common),
    /// Splits the element in --matrix into its orthogonal part and generators.
    Factor(Common),
    /// Runs the acceptance suite.
    Selftest(Common),
}

#[derive(Args)]
struct Common {
    /// Structure JSON, inline or a file path.
    #[arg(long)]
    structure: Option<String>,
    /// Random seed.
    #[arg(long, env = "ISOTROPY_SEED")]
    seed: Option<u64>,
    /// Parameter JSON, inline or a file path.
    #[arg(long)]
    params: Option<String>,
    /// Matrix JSON, inline or a file path.
    #[arg(long)]
    matrix: Option<String>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Enumeration bound for selftest.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
}

/// A command finished; `negative` means a verification returned false.
struct Output {
    value: Value,
    negative: bool,
}

impl From<Value> for Output {
    fn from(value: Value) -> Self {
        Output { value, negative: false }
    }
}

/// Bad input, as opposed to a failed internal check.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

/// Inline JSON if it starts with `{` or `[`, otherwise a path.
fn load(arg: &str, what: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| input_err(format!("cannot read {what} file {arg}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| input_err(format!("{what}: {e}")))
}

fn required<'a>(v: &'a Option<String>, flag: &str, command: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| input_err(format!("`{command}` needs --{flag}")))
}

fn any_structure(c: &Common, command: &str) -> Result<AnyStructure> {
    let text = load(required(&c.structure, "structure", command)?, "structure")?;
    Ok(parse_any_structure(&text)?)
}

fn single_structure(c: &Common, command: &str) -> Result<SegreStructure> {
    match any_structure(c, command)? {
        AnyStructure::Single(s) => Ok(s),
        AnyStructure::Multi(_) => Err(input_err(format!("`{command}` takes a single-eigenvalue structure"))),
    }
}

fn matrix_value(m: &ExactMatrix) -> Value {
    serde_json::to_value(MatrixJson::from(m)).expect("matrix serializes")
}

fn structure_value(s: &AnyStructure) -> Value {
    match s {
        AnyStructure::Single(s) => serde_json::to_value(StructureJson::from(s)),
        AnyStructure::Multi(m) => serde_json::to_value(MultiJson::from(m)),
    }
    .expect("structure serializes")
}

fn parts(s: &AnyStructure) -> Vec<SegreStructure> {
    match s {
        AnyStructure::Single(s) => vec![s.clone()],
        AnyStructure::Multi(m) => m.parts().to_vec(),
    }
}

fn build_s_any(s: &AnyStructure) -> ExactMatrix {
    match s {
        AnyStructure::Single(s) => build_s(s),
        AnyStructure::Multi(m) => m.build_s(),
    }
}

fn canonical(c: &Common) -> Result<Output> {
    let s = any_structure(c, "canonical")?;
    let ps = parts(&s);
    let sum = |f: fn(&SegreStructure) -> ExactMatrix| {
        let blocks: Vec<ExactMatrix> = ps.iter().map(f).collect();
        matrix_value(&ExactMatrix::direct_sum_all(&blocks))
    };
    Ok(json!({
        "structure": structure_value(&s),
        "S": matrix_value(&build_s_any(&s)),
        "P": sum(build_p),
        "Omega": sum(build_omega),
        "F": sum(build_f),
    })
    .into())
}

fn describe(c: &Common) -> Result<Output> {
    Ok(match any_structure(c, "describe")? {
        AnyStructure::Single(s) => serde_json::to_value(describe_isotropy(&s))?,
        AnyStructure::Multi(m) => serde_json::to_value(describe_multi(&m))?,
    }
    .into())
}

fn dim(c: &Common) -> Result<Output> {
    let d: usize = parts(&any_structure(c, "dim")?).iter().map(solution_dimension).sum();
    Ok(json!({ "dimension": d }).into())
}

fn codim(c: &Common) -> Result<Output> {
    let v = match any_structure(c, "codim")? {
        AnyStructure::Single(s) => codim_formula(&s),
        AnyStructure::Multi(m) => codim_formula_multi(&m),
    };
    Ok(json!({ "codimension": v }).into())
}

fn digest(value: &Value) -> String {
    let text = serde_json::to_string(value).expect("value serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn params_for(c: &Common, ps: &[SegreStructure]) -> Result<(Vec<FreeParams>, Option<u64>)> {
    if let Some(arg) = &c.params {
        let text = load(arg, "params")?;
        let list: Vec<FreeParamsJson> = if ps.len() == 1 && text.trim_start().starts_with('{') {
            vec![parse_json(&text, "params")?]
        } else {
            parse_json(&text, "params (one object per part)")?
        };
        if list.len() != ps.len() {
            bail!(input_err(format!("expected {} parameter sets, got {}", ps.len(), list.len())));
        }
        let params = list
            .iter()
            .zip(ps)
            .map(|(p, s)| p.to_params(s))
            .collect::<isotropy_core::Result<Vec<_>>>()?;
        return Ok((params, None));
    }
    let seed = c.seed.unwrap_or(0);
    let mut rng = rng_from_seed(seed);
    let params = ps
        .iter()
        .map(|s| random_isotropy_params(&mut rng, s, ParamOptions::default()))
        .collect();
    Ok((params, Some(seed)))
}

fn sample(c: &Common) -> Result<Output> {
    let s = any_structure(c, "sample")?;
    let ps = parts(&s);
    let (params, seed) = params_for(c, &ps)?;
    let params_json: Vec<Value> = params
        .iter()
        .map(|p| serde_json::to_value(FreeParamsJson::from(p)).expect("params serialize"))
        .collect();
    let params_value = match &s {
        AnyStructure::Single(_) => params_json[0].clone(),
        AnyStructure::Multi(_) => Value::Array(params_json),
    };
    let mut out = json!({
        "structure": structure_value(&s),
        "params": params_value,
        "provenance": {
            "seed": seed,
            "rng": "ChaCha8Rng::seed_from_u64",
            "params_sha256": digest(&params_value),
        },
    });
    match &s {
        AnyStructure::Single(st) => {
            let sample = sample_isotropy(st, &params[0])?;
            out["q"] = matrix_value(&sample.q);
            out["form"] = serde_json::to_value(ToeplitzJson::from(&sample.form))?;
        }
        AnyStructure::Multi(m) => {
            out["q"] = matrix_value(&sample_multi(m, &params)?);
        }
    }
    out["verified"] = Value::Bool(true);
    Ok(out.into())
}

fn generators(c: &Common) -> Result<Output> {
    let st = single_structure(c, "generators")?;
    let text = load(required(&c.params, "params", "generators")?, "params")?;
    let specs: Vec<GeneratorSpecJson> = if text.trim_start().starts_with('[') {
        parse_json(&text, "generator specs")?
    } else {
        vec![parse_json(&text, "generator spec")?]
    };
    let ids: Vec<ExactMatrix> = st.blocks().iter().map(|b| ExactMatrix::identity(b.m)).collect();
    let s = build_s(&st);
    let mut list = Vec::with_capacity(specs.len());
    for spec_json in &specs {
        let spec = GeneratorSpec::try_from(spec_json)?;
        let form = spec.build(&st, &ids)?;
        let q = form_to_q(&st, &form);
        if !verify_against(&s, &q)?.member {
            return Err(isotropy_core::Error::Integrity("generator is not an isotropy element".into()).into());
        }
        list.push(json!({
            "spec": spec_json,
            "matrix": matrix_value(&form.assemble()),
            "q": matrix_value(&q),
        }));
    }
    Ok(json!({ "structure": StructureJson::from(&st), "generators": list }).into())
}

fn read_matrix(c: &Common, command: &str) -> Result<ExactMatrix> {
    let text = load(required(&c.matrix, "matrix", command)?, "matrix")?;
    let m: MatrixJson = parse_json(&text, "matrix")?;
    Ok(ExactMatrix::try_from(&m)?)
}

fn verify(c: &Common) -> Result<Output> {
    let s = any_structure(c, "verify")?;
    let q = read_matrix(c, "verify")?;
    let report = verify_against(&build_s_any(&s), &q)?;
    let negative = !report.member;
    Ok(Output {
        value: serde_json::to_value(report)?,
        negative,
    })
}

fn commutant(c: &Common) -> Result<Output> {
    let st = single_structure(c, "commutant")?;
    let basis = commutant_basis(&st);
    let list: Vec<Value> = basis.basis().iter().map(matrix_value).collect();
    Ok(json!({ "dimension": basis.dimension(), "basis": list }).into())
}

/// Accepts a dense `Q` or a form `{"structure", "coeffs"}`.
fn factor(c: &Common) -> Result<Output> {
    let st = single_structure(c, "factor")?;
    let text = load(required(&c.matrix, "matrix", "factor")?, "matrix")?;
    let value: Value = parse_json(&text, "matrix")?;
    let q = if value.get("coeffs").is_some() {
        let t: ToeplitzJson = parse_json(&text, "form")?;
        let form = ToeplitzForm::try_from(&t)?;
        if form.structure().blocks() != st.blocks() {
            bail!(input_err("form structure differs from --structure"));
        }
        form_to_q(&st, &form)
    } else {
        let m: MatrixJson = parse_json(&text, "matrix")?;
        ExactMatrix::try_from(&m)?
    };
    let element = match IsotropyElement::new(&st, q) {
        Ok(e) => e,
        Err(isotropy_core::Error::Precondition(msg)) => bail!(input_err(msg)),
        Err(e) => return Err(e.into()),
    };
    let orthogonal = element.orthogonal_part()?;
    let unipotent = element.unipotent_part()?;
    let ids: Vec<ExactMatrix> = st.blocks().iter().map(|b| ExactMatrix::identity(b.m)).collect();
    let fact = factor_unipotent(&st, &unipotent, &ids)?;
    let rebuilt = ToeplitzForm::block_diagonal(&st, &orthogonal)?.try_mul(&fact.product(&ids)?)?;
    if rebuilt != element.form()? {
        return Err(isotropy_core::Error::Integrity("factorization does not reproduce the input".into()).into());
    }
    let diagonal = GeneratorSpec::Diagonal {
        skews: fact.diagonal_skews.clone(),
    };
    let factors: Vec<GeneratorSpecJson> = fact.factors.iter().map(GeneratorSpecJson::from).collect();
    Ok(json!({
        "orthogonal": orthogonal.iter().map(matrix_value).collect::<Vec<_>>(),
        "diagonal": GeneratorSpecJson::from(&diagonal),
        "factors": factors,
        "reconstructs": true,
    })
    .into())
}

fn selftest(c: &Common) -> Result<Output> {
    let mut config = SuiteConfig {
        max_n: c.max_n,
        exec: Execution::Parallel,
        ..SuiteConfig::default()
    };
    if let Some(seed) = c.seed {
        config.seed = seed;
    }
    let mut reports = Vec::with_capacity(CRITERIA.len());
    for (id, _) in CRITERIA {
        let report = run_criterion(id, &config);
        eprintln!("{report}");
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(Output {
        value: json!({ "config": config, "criteria": reports, "passed": passed }),
        negative: !passed,
    })
}

fn run(cli: &Cli) -> Result<(Output, Option<PathBuf>)> {
    let (output, common) = match &cli.command {
        Command::Canonical(c) => (canonical(c)?, c),
        Command::Describe(c) => (describe(c)?, c),
        Command::Dim(c) => (dim(c)?, c),
        Command::Codim(c) => (codim(c)?, c),
        Command::Sample(c) => (sample(c)?, c),
        Command::Generators(c) => (generators(c)?, c),
        Command::Verify(c) => (verify(c)?, c),
        Command::Commutant(c) => (commutant(c)?, c),
        Command::Factor(c) => (factor(c)?, c),
        Command::Selftest(c) => (selftest(c)?, c),
    };
    Ok((output, common.out.clone()))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InputError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<isotropy_core::Error>() {
        Some(isotropy_core::Error::Integrity(_) | isotropy_core::Error::Sequencing(_)) => 3,
        _ => 2,
    }
}

fn emit(value: &Value, out: Option<PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|(output, out)| {
        emit(&output.value, out)?;
        Ok(output.negative)
    }) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use isotropy_core::MultiSegreStructure;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&input_err("x")), 2);
        assert_eq!(exit_code(&isotropy_core::Error::Integrity("x".into()).into()), 3);
        assert_eq!(exit_code(&isotropy_core::Error::Input("x".into()).into()), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 2);
    }

    #[test]
    fn multi_structure_dim() {
        let m = MultiSegreStructure::new(vec![
            SegreStructure::new(isotropy_core::ExactScalar::one(), [(1, 3)]).unwrap(),
            SegreStructure::new(isotropy_core::ExactScalar::zero(), [(2, 1), (1, 1)]).unwrap(),
        ])
        .unwrap();
        let c = Common {
            structure: Some(serde_json::to_string(&MultiJson::from(&m)).unwrap()),
            seed: None,
            params: None,
            matrix: None,
            out: None,
            max_n: 8,
        };
        assert_eq!(dim(&c).unwrap().value, json!({"dimension": 4}));
    }
}
