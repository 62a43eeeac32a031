use charmat_core::calculus::{
    fourier_resolvent_check, resolvent, spectral_projection, spectral_transform_check,
    stone_formula_check_with, unitary_group,
};
use charmat_core::hilbert::{relative_residual, HERMITIAN_TOL};
use charmat_core::{ComplexMatrix, Vector};
use num_complex::Complex64;

use super::Outcome;
use crate::args::{Cli, SelfadjointArgs, SelfadjointCheck};
use crate::error::{CliError, CliResult};
use crate::io::{digest, read_matrix, MatrixFile};
use crate::report::Checks;

pub const ALGEBRA_TOL: f64 = 1e-10;
pub const RESOLVENT_TOL: f64 = 1e-9;
pub const STONE_TOL: f64 = 1e-3;
pub const FOURIER_TOL: f64 = 1e-4;

pub fn run(cli: &Cli, args: &SelfadjointArgs) -> CliResult<Outcome> {
    let (t, bytes) = read_matrix(&args.input)?;
    if !t.is_square() {
        return Err(CliError::Invariant(format!(
            "matrix is {}x{}, not square",
            t.rows(),
            t.cols()
        )));
    }
    let asymmetry = t.hermitian_asymmetry();
    if asymmetry > HERMITIAN_TOL {
        return Err(CliError::Invariant(format!(
            "matrix is not Hermitian (asymmetry {asymmetry:e})"
        )));
    }
    let n = t.rows();
    let basis = |k: usize, flag: &str| {
        if k < n {
            Ok(Vector::basis(n, k))
        } else {
            Err(CliError::Invariant(format!("--{flag} {k} outside 0..{n}")))
        }
    };
    let f = basis(args.f_index, "f-index")?;
    let g = basis(args.g_index, "g-index")?;
    let id = ComplexMatrix::identity(n);
    let mut checks = Checks::new(cli.tol);
    let mut emitted = None;

    let command = match args.check {
        SelfadjointCheck::Projection => {
            let e = spectral_projection(&t, args.lambda)?;
            checks.residual("idempotent", relative_residual(&(&e * &e), &e), ALGEBRA_TOL);
            checks.residual(
                "hermitian",
                relative_residual(&e.adjoint(), &e),
                ALGEBRA_TOL,
            );
            checks.residual(
                "commutes",
                relative_residual(&(&e * &t), &(&t * &e)),
                ALGEBRA_TOL,
            );
            emitted = Some(("projection.json", e));
            "selfadjoint projection"
        }
        SelfadjointCheck::Resolvent => {
            let z1 = args.z;
            let z2 = if z1.im != 0.0 {
                z1.conj()
            } else {
                z1 + Complex64::i()
            };
            let r1 = resolvent(&t, z1)?;
            let r2 = resolvent(&t, z2)?;
            checks.residual(
                "inverse",
                relative_residual(&(&t.shift(-z1) * &r1), &id),
                RESOLVENT_TOL,
            );
            let product = (&r1 * &r2).scale(z1 - z2);
            checks.residual(
                "first_identity",
                relative_residual(&(&r1 - &r2), &product),
                RESOLVENT_TOL,
            );
            emitted = Some(("resolvent.json", r1));
            "selfadjoint resolvent"
        }
        SelfadjointCheck::Group => {
            let u = unitary_group(&t, args.s)?;
            let twice = unitary_group(&t, 2.0 * args.s)?;
            checks.residual(
                "unitary",
                relative_residual(&(&u.adjoint() * &u), &id),
                RESOLVENT_TOL,
            );
            checks.residual(
                "group_law",
                relative_residual(&(&u * &u), &twice),
                RESOLVENT_TOL,
            );
            checks.residual(
                "spectral_transform",
                spectral_transform_check(&t, args.s, &f, &g)?,
                ALGEBRA_TOL,
            );
            emitted = Some(("group.json", u));
            "selfadjoint group"
        }
        SelfadjointCheck::Stone => {
            let r = stone_formula_check_with(
                &t,
                args.lambda,
                &f,
                &g,
                args.epsilon,
                args.delta,
                args.steps,
            )?;
            checks.residual("stone", r, STONE_TOL);
            "selfadjoint stone"
        }
        SelfadjointCheck::Fourier => {
            let r = fourier_resolvent_check(&t, args.z, &f, &g, args.smax, args.steps)?;
            checks.residual("fourier", r, FOURIER_TOL);
            "selfadjoint fourier"
        }
    };

    let mut outcome = Outcome::new(checks.finish(command, digest(&bytes))?);
    if let Some((name, m)) = emitted {
        outcome = outcome.file(name, MatrixFile::from_matrix(&m).to_json());
    }
    Ok(outcome)
}
