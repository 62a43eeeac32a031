//! Characteristic matrices: the orthogonal projection onto the graph
//! `Γ(T) = {<f, Tf>}` written as a 2×2 block operator on `H ⊕ H`.
//!
//! [`char_matrix`] evaluates the closed forms
//!
//! ```text
//! P11 = (T*T + I)^-1          P12 = T*(TT* + I)^-1
//! P21 = T(T*T + I)^-1         P22 = I − (TT* + I)^-1
//! ```
//!
//! with Cholesky solves. [`char_matrix_oracle`] builds the same projection
//! from an orthonormal basis of the graph and shares no code path with it.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{relative_residual, ComplexMatrix};

/// Default residual tolerance for the block identities.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Absolute floor for the smallest singular value in the kernel tests.
pub const KERNEL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicMatrix {
    pub p11: ComplexMatrix,
    pub p12: ComplexMatrix,
    pub p21: ComplexMatrix,
    pub p22: ComplexMatrix,
}

impl CharacteristicMatrix {
    pub fn from_blocks(
        p11: ComplexMatrix,
        p12: ComplexMatrix,
        p21: ComplexMatrix,
        p22: ComplexMatrix,
    ) -> Result<Self> {
        let n = p11.ensure_square()?;
        for b in [&p12, &p21, &p22] {
            if b.rows() != n || b.cols() != n {
                return Err(Error::dims(
                    format!("{n}x{n}"),
                    format!("{}x{}", b.rows(), b.cols()),
                ));
            }
        }
        Ok(CharacteristicMatrix { p11, p12, p21, p22 })
    }

    pub fn dim(&self) -> usize {
        self.p11.rows()
    }

    pub fn blocks(&self) -> [&ComplexMatrix; 4] {
        [&self.p11, &self.p12, &self.p21, &self.p22]
    }

    /// The full `2n × 2n` projection.
    pub fn assemble(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&self.p11, &self.p12, &self.p21, &self.p22)
    }

    /// Largest blockwise Frobenius distance.
    pub fn distance(&self, other: &CharacteristicMatrix) -> f64 {
        self.blocks()
            .iter()
            .zip(other.blocks())
            .map(|(a, b)| (*a - b).frobenius_norm())
            .fold(0.0, f64::max)
    }
}

/// Closed-form characteristic matrix of a square `T`.
pub fn char_matrix(t: &ComplexMatrix) -> Result<CharacteristicMatrix> {
    let n = t.ensure_square()?;
    let id = ComplexMatrix::identity(n);
    let t_star = t.adjoint();

    let gram = (&t_star * t).hermitian_part().shift(crate::hilbert::one());
    let p11 = gram.solve_hpd(&id)?;

    let co_gram = (t * &t_star).hermitian_part().shift(crate::hilbert::one());
    let co_inv = co_gram.solve_hpd(&id)?;

    let p21 = t * &p11;
    let p12 = &t_star * &co_inv;
    let p22 = &id - &co_inv;
    Ok(CharacteristicMatrix { p11, p12, p21, p22 })
}

/// Characteristic matrix from an orthonormal basis `Q` of the columns of
/// `[I; T]`, as the blocks of `Q Q*`.
///
/// Modified Gram-Schmidt with one full reorthogonalization pass.
pub fn char_matrix_oracle(t: &ComplexMatrix) -> Result<CharacteristicMatrix> {
    let n = t.ensure_square()?;
    let stacked = ComplexMatrix::identity(n).vstack(t)?;
    let q = orthonormal_columns(&stacked)?;
    let proj = &q * &q.adjoint();
    Ok(CharacteristicMatrix {
        p11: proj.submatrix(0, 0, n, n),
        p12: proj.submatrix(0, n, n, n),
        p21: proj.submatrix(n, 0, n, n),
        p22: proj.submatrix(n, n, n, n),
    })
}

fn orthonormal_columns(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v: Vec<Complex64> = (0..rows).map(|i| a.get(i, j)).collect();
        let original = norm(&v);
        for _pass in 0..2 {
            for q in &basis {
                let coeff: Complex64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= coeff * qi;
                }
            }
        }
        let len = norm(&v);
        if !(len > 1e-13 * original.max(1.0)) {
            return Err(Error::Factorization(format!(
                "graph basis column {j} is numerically dependent"
            )));
        }
        v.iter_mut().for_each(|x| *x /= len);
        basis.push(v);
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i]))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Labels of the block identities checked by [`verify_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `P_jk* = P_kj`.
    A6,
    /// `P² = P`.
    A7,
    /// `ker P11 = ker(I − P22) = {0}`.
    A8,
    /// Characteristic matrix of the adjoint by block permutation.
    A9,
    /// Characteristic matrix of the inverse by block permutation.
    A11,
    /// `P21 = T P11`, `P22 = T P12`.
    A12,
    /// `I − P11 = T* P21`, `P12 = T*(I − P22)`.
    A13,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::A6,
        Identity::A7,
        Identity::A8,
        Identity::A9,
        Identity::A11,
        Identity::A12,
        Identity::A13,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Identity::A6 => "A6",
            Identity::A7 => "A7",
            Identity::A8 => "A8",
            Identity::A9 => "A9",
            Identity::A11 => "A11",
            Identity::A12 => "A12",
            Identity::A13 => "A13",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How a check value is compared to its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Passes when `value <= threshold`.
    Residual,
    /// Passes when `value > threshold`.
    Margin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub kind: CheckKind,
    pub value: f64,
    pub threshold: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        match self.kind {
            CheckKind::Residual => self.value <= self.threshold,
            CheckKind::Margin => self.value > self.threshold,
        }
    }
}

/// Residuals of the block identities for a pair `(T, P)`.
///
/// `A11` is absent when `T` fails the injectivity gate.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn get(&self, id: Identity) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.identity == id)
    }

    pub fn value(&self, id: Identity) -> Option<f64> {
        self.get(id).map(|c| c.value)
    }

    pub fn passed(&self, id: Identity) -> Option<bool> {
        self.get(id).map(IdentityCheck::passed)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn failures(&self) -> Vec<Identity> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.identity)
            .collect()
    }
}

pub fn verify_identities(t: &ComplexMatrix, p: &CharacteristicMatrix) -> Result<IdentityReport> {
    verify_identities_with_tol(t, p, IDENTITY_TOL)
}

/// Residual suite; residuals are relative, `‖X − Y‖_F / max(1, ‖Y‖_F)`.
pub fn verify_identities_with_tol(
    t: &ComplexMatrix,
    p: &CharacteristicMatrix,
    tol: f64,
) -> Result<IdentityReport> {
    let n = t.ensure_square()?;
    if p.dim() != n {
        return Err(Error::dims(n, p.dim()));
    }
    let id = ComplexMatrix::identity(n);
    let t_star = t.adjoint();
    let residual = |identity, value| IdentityCheck {
        identity,
        kind: CheckKind::Residual,
        value,
        threshold: tol,
    };
    let mut checks = Vec::new();

    let a6 = [
        relative_residual(&p.p21, &p.p12.adjoint()),
        relative_residual(&p.p11, &p.p11.adjoint()),
        relative_residual(&p.p22, &p.p22.adjoint()),
    ];
    checks.push(residual(Identity::A6, max(&a6)));

    let full = p.assemble();
    checks.push(residual(
        Identity::A7,
        relative_residual(&(&full * &full), &full),
    ));

    let margin = p
        .p11
        .min_singular_value()?
        .min((&id - &p.p22).min_singular_value()?);
    checks.push(IdentityCheck {
        identity: Identity::A8,
        kind: CheckKind::Margin,
        value: margin,
        threshold: KERNEL_TOL,
    });

    let of_adjoint = char_matrix(&t_star)?;
    checks.push(residual(
        Identity::A9,
        adjoint_char_matrix(p).distance(&of_adjoint) / (n as f64).sqrt().max(1.0),
    ));

    if let Ok(via_blocks) = inverse_char_matrix(p) {
        if let Ok(t_inv) = t.inverse() {
            let direct = char_matrix(&t_inv)?;
            checks.push(residual(
                Identity::A11,
                via_blocks.distance(&direct) / (n as f64).sqrt().max(1.0),
            ));
        }
    }

    let a12 = [
        relative_residual(&p.p21, &(t * &p.p11)),
        relative_residual(&p.p22, &(t * &p.p12)),
    ];
    checks.push(residual(Identity::A12, max(&a12)));

    let a13 = [
        relative_residual(&(&id - &p.p11), &(&t_star * &p.p21)),
        relative_residual(&p.p12, &(&t_star * &(&id - &p.p22))),
    ];
    checks.push(residual(Identity::A13, max(&a13)));

    Ok(IdentityReport { checks })
}

fn max(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// `P(Γ(T*))` from `P(Γ(T))`: blocks `(I − P22, P21, P12, I − P11)`.
pub fn adjoint_char_matrix(p: &CharacteristicMatrix) -> CharacteristicMatrix {
    let id = ComplexMatrix::identity(p.dim());
    CharacteristicMatrix {
        p11: &id - &p.p22,
        p12: p.p21.clone(),
        p21: p.p12.clone(),
        p22: &id - &p.p11,
    }
}

/// `P(Γ(T⁻¹))` from `P(Γ(T))`: blocks `(P22, P21, P12, P11)`.
///
/// Injectivity of `T` is read off the blocks: `ker T = {0}` exactly when
/// `I − P11` is injective.
pub fn inverse_char_matrix(p: &CharacteristicMatrix) -> Result<CharacteristicMatrix> {
    let id = ComplexMatrix::identity(p.dim());
    let sigma_min = (&id - &p.p11).min_singular_value()?;
    if !(sigma_min > KERNEL_TOL) {
        return Err(Error::KernelNontrivial { sigma_min });
    }
    Ok(CharacteristicMatrix {
        p11: p.p22.clone(),
        p12: p.p21.clone(),
        p21: p.p12.clone(),
        p22: p.p11.clone(),
    })
}

/// Recovers `T = P21 P11⁻¹`.
pub fn operator_from_char_matrix(p: &CharacteristicMatrix) -> Result<ComplexMatrix> {
    let sigma_min = p.p11.min_singular_value()?;
    if !(sigma_min > KERNEL_TOL) {
        return Err(Error::Singular { sigma_min });
    }
    // X P11 = P21  <=>  P11* X* = P21*
    let x_star = p.p11.adjoint().solve(&p.p21.adjoint())?;
    Ok(x_star.adjoint())
}
