use std::collections::BTreeMap;

use charmat_core::graph::{
    char_matrix, char_matrix_oracle, verify_identities, CheckKind, Identity, IDENTITY_TOL,
};
use charmat_core::random;

use super::Outcome;
use crate::args::{CharmatArgs, Cli};
use crate::error::{CliError, CliResult};
use crate::io::{digest, read_matrix, MatrixFile};
use crate::report::Checks;

/// Largest dimension accepted by `--random`.
pub const MAX_RANDOM_DIM: usize = 512;

pub fn run(cli: &Cli, args: &CharmatArgs) -> CliResult<Outcome> {
    let mut checks = Checks::new(cli.tol);
    let (t, inputs, generated) = match (&args.input, args.random) {
        (Some(path), None) => {
            let (t, bytes) = read_matrix(path)?;
            (t, digest(&bytes), None)
        }
        (None, Some(n)) => {
            if n == 0 || n > MAX_RANDOM_DIM {
                return Err(CliError::Invariant(format!(
                    "--random {n} outside 1..={MAX_RANDOM_DIM}"
                )));
            }
            let t = random::complex_matrix(&mut random::rng(cli.seed), n, n);
            let file = MatrixFile::from_matrix(&t).to_json();
            (t, digest(&file), Some(file))
        }
        _ => {
            return Err(CliError::Invariant(
                "give exactly one of INPUT and --random".into(),
            ))
        }
    };
    if !t.is_square() {
        return Err(CliError::Invariant(format!(
            "matrix is {}x{}, not square",
            t.rows(),
            t.cols()
        )));
    }

    let p = char_matrix(&t)?;
    let identities = verify_identities(&t, &p)?;
    let mut margin = None;
    for check in &identities.checks {
        match check.kind {
            CheckKind::Residual => {
                checks.residual(check.identity.label(), check.value, IDENTITY_TOL)
            }
            CheckKind::Margin => {
                checks.indicator(check.identity.label(), check.passed());
                if check.identity == Identity::A8 {
                    margin = Some(check.value);
                }
            }
        }
    }
    if args.oracle {
        let oracle = char_matrix_oracle(&t)?;
        checks.residual("oracle", p.distance(&oracle), IDENTITY_TOL);
    }

    let mut outcome = Outcome::new(checks.finish("charmat", inputs)?);
    for (name, block) in ["p11", "p12", "p21", "p22"].iter().zip(p.blocks()) {
        outcome = outcome.file(
            &format!("{name}.json"),
            MatrixFile::from_matrix(block).to_json(),
        );
    }
    if let Some(file) = generated {
        outcome = outcome.file("input.json", file);
    }
    let mut values = BTreeMap::new();
    values.insert("dim", serde_json::json!(t.rows()));
    values.insert("A8_min_singular_value", serde_json::json!(margin));
    Ok(outcome.values(&values))
}
