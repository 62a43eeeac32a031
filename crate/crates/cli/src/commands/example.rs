use std::collections::BTreeMap;
use std::f64::consts::PI;

use charmat_core::boundary::{
    boundary_mismatch, deficiency_vector, laplacian, separation_witness, BoundaryCondition,
    GridDiscretization, MIN_WITNESS_NODES,
};
use charmat_core::hilbert::eigvals_hermitian;

use super::Outcome;
use crate::args::{Cli, ExampleArgs};
use crate::error::{CliError, CliResult};
use crate::io::digest;
use crate::report::Checks;

/// Relative tolerance of the reported eigenvalues.
pub const EIGEN_RTOL: f64 = 1e-2;
/// Relative tolerance of the lowest Dirichlet eigenvalue.
pub const LOWEST_RTOL: f64 = 5e-3;
/// Tolerance of `(1, (L_P + I)⁻¹ 1) = 1`.
pub const PERIODIC_WITNESS_TOL: f64 = 1e-8;
/// Accepted range of `(1, (L_D + I)⁻¹ 1)`.
pub const DIRICHLET_WITNESS_RANGE: (f64, f64) = (0.070, 0.081);
pub const MIN_GAP: f64 = 0.8;
/// Eigenvalues below this fraction of the largest count as kernel.
pub const KERNEL_RTOL: f64 = 1e-12;

struct Row {
    operator: &'static str,
    index: usize,
    computed: f64,
    target: f64,
}

impl Row {
    fn relative_error(&self) -> f64 {
        (self.computed - self.target).abs() / self.target
    }
}

pub fn run(cli: &Cli, args: &ExampleArgs) -> CliResult<Outcome> {
    let (n, k) = (args.n, args.k);
    if n < MIN_WITNESS_NODES {
        return Err(CliError::Invariant(format!(
            "--n {n} below {MIN_WITNESS_NODES}"
        )));
    }
    if k == 0 || k > n / 10 {
        return Err(CliError::Invariant(format!(
            "--k {k} outside 1..={}",
            n / 10
        )));
    }
    let mut checks = Checks::new(cli.tol);
    let mut rows = Vec::new();

    let dirichlet = BoundaryCondition::Dirichlet;
    let spectrum = eigvals_hermitian(&laplacian(&GridDiscretization::interior(n)?, dirichlet)?)?;
    for (j, &computed) in spectrum.iter().take(k).enumerate() {
        let index = j + 1;
        let row = Row {
            operator: "dirichlet",
            index,
            computed,
            target: (index as f64 * PI).powi(2),
        };
        let tol = if index == 1 { LOWEST_RTOL } else { EIGEN_RTOL };
        checks.residual(format!("dirichlet_{index}"), row.relative_error(), tol);
        rows.push(row);
    }

    let periodic = BoundaryCondition::Periodic;
    let spectrum = eigvals_hermitian(&laplacian(&GridDiscretization::periodic(n)?, periodic)?)?;
    let largest = spectrum.last().copied().unwrap_or(0.0);
    let kernel_dim = spectrum
        .iter()
        .filter(|l| l.abs() <= KERNEL_RTOL * largest)
        .count();
    checks.indicator("periodic_kernel_dim", kernel_dim == 1);
    for (j, &computed) in spectrum.iter().skip(kernel_dim).take(k).enumerate() {
        let index = j + 1;
        let row = Row {
            operator: "periodic",
            index,
            computed,
            target: 4.0 * PI * PI * (index.div_ceil(2) as f64).powi(2),
        };
        checks.residual(
            format!("periodic_{index}"),
            row.relative_error(),
            EIGEN_RTOL,
        );
        rows.push(row);
    }

    let witness = separation_witness(n)?;
    checks.residual(
        "witness_periodic",
        (witness.periodic - 1.0).abs(),
        PERIODIC_WITNESS_TOL,
    );
    let (lo, hi) = DIRICHLET_WITNESS_RANGE;
    checks.indicator(
        "witness_dirichlet_range",
        (lo..=hi).contains(&witness.dirichlet),
    );
    checks.indicator("witness_gap", witness.gap() > MIN_GAP);

    let grid = GridDiscretization::interior(n)?;
    let mismatch = boundary_mismatch(&deficiency_vector(&grid)?, &grid)?;

    let mut csv = String::from("operator,index,computed,target,relative_error\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.operator,
            r.index,
            r.computed,
            r.target,
            r.relative_error()
        ));
    }
    let mut values = BTreeMap::new();
    values.insert("witness_dirichlet", serde_json::json!(witness.dirichlet));
    values.insert("witness_periodic", serde_json::json!(witness.periodic));
    values.insert("witness_gap", serde_json::json!(witness.gap()));
    values.insert("boundary_mismatch", serde_json::json!(mismatch));
    values.insert("periodic_kernel_dim", serde_json::json!(kernel_dim));

    let inputs = digest(format!("example-dirichlet n={n} k={k}").as_bytes());
    Ok(Outcome::new(checks.finish("example-dirichlet", inputs)?)
        .file("eigenvalues.csv", csv.into_bytes())
        .values(&values))
}
