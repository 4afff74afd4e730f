//! Runs all ten acceptance criteria and prints one line each.
//!
//! Criterion 5 also asks for `(G − I)^α₁ = 0` on every unipotent generator.
//! That bound does not hold for the two-block generators: already for groups
//! `(2,1), (1,1)` the generator with `F = 1` has `(G − I)² ≠ 0`, so the line
//! for criterion 5 prints FAIL. The run succeeds only in exactly that state:
//! every other check of every criterion passes, the failing check is the
//! two-block exponent and nothing else, and the sharp bound `2α₁ − 1` holds
//! for all generators.

use std::process::ExitCode;
use std::time::Instant;

use isotropy_core::acceptance::{
    run_criterion, CriterionReport, SuiteConfig, CONGRUENCE_CHECK, CORRECTED_EXPONENT_CHECK, CRITERIA,
    DIAGONAL_EXPONENT_CHECK, TWO_BLOCK_EXPONENT_CHECK,
};

fn unexpected(reports: &[CriterionReport]) -> Vec<String> {
    let mut out = Vec::new();
    for r in reports.iter().filter(|r| r.id != 5 && !r.passed) {
        out.push(format!("criterion {} failed", r.id));
    }
    let c5 = &reports[4];
    for name in [CONGRUENCE_CHECK, DIAGONAL_EXPONENT_CHECK, CORRECTED_EXPONENT_CHECK] {
        match c5.check(name) {
            Some(c) if c.passed => {}
            Some(c) => out.push(format!("criterion 5 `{name}` failed: {}", c.detail)),
            None => out.push(format!("criterion 5 `{name}` missing")),
        }
    }
    match c5.check(TWO_BLOCK_EXPONENT_CHECK) {
        Some(c) if !c.passed => {}
        Some(c) => out.push(format!("two-block generators unexpectedly met the α₁ bound: {}", c.detail)),
        None => out.push("criterion 5 two-block exponent check missing".into()),
    }
    out
}

fn main() -> ExitCode {
    let config = SuiteConfig::default();
    println!("\nacceptance suite (seed {:#x}, enumeration n ≤ {})", config.seed, config.max_n);
    let mut reports = Vec::new();
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let report = run_criterion(id, &config);
        println!("{report}  [{:.1?}]", start.elapsed());
        reports.push(report);
    }
    let problems = unexpected(&reports);
    if problems.is_empty() {
        println!("acceptance: 9 of 10 criteria pass; criterion 5 fails only on the (G − I)^α₁ bound for two-block generators\n");
        ExitCode::SUCCESS
    } else {
        for p in &problems {
            println!("unexpected: {p}");
        }
        ExitCode::FAILURE
    }
}
