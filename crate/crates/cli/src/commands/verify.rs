use std::collections::BTreeMap;

use charmat_core::family::{
    char_matrix_fiberwise, decomposition_suite, direct_integral, family_norm,
    Outcome as SuiteOutcome, Polynomial, STRUCTURE_TOL,
};

use super::Outcome;
use crate::args::{Cli, VerifyArgs};
use crate::error::CliResult;
use crate::io::{digest, read_json, FamilyFile};
use crate::report::Checks;

/// Default tolerance of the decomposition residuals.
pub const SUITE_TOL: f64 = 1e-9;

/// `p(x) = x³ − 2x`.
fn test_polynomial() -> Polynomial {
    Polynomial::from_real(&[0.0, -2.0, 0.0, 1.0])
}

pub fn run(cli: &Cli, args: &VerifyArgs) -> CliResult<Outcome> {
    let (file, bytes): (FamilyFile, _) = read_json(&args.input)?;
    let fam = file.to_family()?;
    let mut checks = Checks::new(cli.tol);

    let fiberwise = char_matrix_fiberwise(&fam)?;
    checks.residual("A19", fiberwise.residual, STRUCTURE_TOL);

    let norm = family_norm(&fam)?;
    let assembled_norm = direct_integral(&fam).assembled.op_norm()?;
    checks.residual(
        "norm",
        (norm - assembled_norm).abs() / norm.max(1.0),
        STRUCTURE_TOL,
    );

    let suite = decomposition_suite(&fam, &test_polynomial(), None)?;
    let mut skipped = Vec::new();
    for item in &suite.items {
        let label = item.check.label();
        match &item.outcome {
            SuiteOutcome::Residual(r) => checks.residual(label, *r, SUITE_TOL),
            SuiteOutcome::Agreement { assembled, fibers } => {
                checks.indicator(label, assembled == fibers)
            }
            SuiteOutcome::Skipped(reason) => skipped.push(format!("{label}: {reason}")),
        }
    }

    let mut values = BTreeMap::new();
    values.insert("family_norm", serde_json::json!(norm));
    values.insert("nodes", serde_json::json!(fam.len()));
    values.insert("fiber_dim", serde_json::json!(fam.dim()));
    values.insert("skipped", serde_json::json!(skipped));
    Ok(Outcome::new(checks.finish("verify", digest(&bytes))?).values(&values))
}
