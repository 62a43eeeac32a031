//! Finite-difference realizations of `(1/i) d/dx` on `[0, 1]` and the
//! Laplacians they generate.
//!
//! Grid functions are stored in unitary coordinates `u_k = √h f(x_k)`, so the
//! Euclidean inner product of two vectors is the discrete `L²(0, 1)` inner
//! product `Σ h f(x_k)* g(x_k)`. Use [`GridDiscretization::sample`] and
//! [`GridDiscretization::values`] to move between the two.
//!
//! Dirichlet and free operators live on the interior grid `x_k = k h`,
//! `k = 1..n`, `h = 1/(n+1)`. The periodic operator lives on
//! `x_k = k h`, `k = 0..n−1`, `h = 1/n`, where `x = 1` is identified with `x = 0`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{ComplexMatrix, Vector};

/// Smallest grid accepted by the difference operators.
pub const MIN_NODES: usize = 3;

/// Smallest grid accepted by [`separation_witness`].
pub const MIN_WITNESS_NODES: usize = 100;

/// Smallest grid accepted by [`deficiency_vector`].
pub const MIN_DEFICIENCY_NODES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Nodes `k/(n+1)`, `k = 1..n`; both endpoints excluded.
    Interior,
    /// Nodes `k/n`, `k = 0..n−1`; `x = 1` wraps to `x = 0`.
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridDiscretization {
    kind: GridKind,
    h: f64,
    nodes: Vec<f64>,
}

impl GridDiscretization {
    pub fn interior(n: usize) -> Result<Self> {
        check_size(n, MIN_NODES)?;
        let h = 1.0 / (n as f64 + 1.0);
        let nodes = (1..=n).map(|k| k as f64 * h).collect();
        Ok(GridDiscretization {
            kind: GridKind::Interior,
            h,
            nodes,
        })
    }

    pub fn periodic(n: usize) -> Result<Self> {
        check_size(n, MIN_NODES)?;
        let h = 1.0 / n as f64;
        let nodes = (0..n).map(|k| k as f64 * h).collect();
        Ok(GridDiscretization {
            kind: GridKind::Periodic,
            h,
            nodes,
        })
    }

    /// The grid on which `bc` is realized.
    pub fn for_condition(bc: BoundaryCondition, n: usize) -> Result<Self> {
        match bc {
            BoundaryCondition::Periodic => GridDiscretization::periodic(n),
            BoundaryCondition::Dirichlet | BoundaryCondition::Free => {
                GridDiscretization::interior(n)
            }
        }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Unitary coordinates `√h f(x_k)`.
    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> Vector {
        let s = self.h.sqrt();
        Vector::new(self.nodes.iter().map(|&x| f(x) * s).collect())
            .expect("sampled function must be finite")
    }

    /// Function values `u_k / √h`.
    pub fn values(&self, u: &Vector) -> Result<Vec<Complex64>> {
        if u.dim() != self.n() {
            return Err(Error::dims(self.n(), u.dim()));
        }
        let s = self.h.sqrt();
        Ok(u.entries().iter().map(|z| z / s).collect())
    }
}

fn check_size(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!(
            "need at least {min} nodes, got {n}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// `f(0) = f(1) = 0`.
    Dirichlet,
    /// `f(0) = f(1)`.
    Periodic,
    /// No condition: the maximal operator.
    Free,
}

impl BoundaryCondition {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Free => "free",
        }
    }

    fn expected_grid(self) -> GridKind {
        match self {
            BoundaryCondition::Periodic => GridKind::Periodic,
            _ => GridKind::Interior,
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "periodic" => Ok(BoundaryCondition::Periodic),
            "free" => Ok(BoundaryCondition::Free),
            other => Err(Error::InvalidArgument(format!(
                "unknown boundary condition {other:?}"
            ))),
        }
    }
}

fn check_grid(g: &GridDiscretization, bc: BoundaryCondition) -> Result<()> {
    if g.kind != bc.expected_grid() {
        return Err(Error::InvalidArgument(format!(
            "{bc} operator needs a {:?} grid, got {:?}",
            bc.expected_grid(),
            g.kind
        )));
    }
    Ok(())
}

/// `(1/i) d/dx` by central differences, with zero ghost values (Dirichlet),
/// wraparound (periodic) or first-order one-sided end rows (free).
///
/// The Dirichlet and periodic matrices are exactly Hermitian; the free one is not.
pub fn derivative_operator(g: &GridDiscretization, bc: BoundaryCondition) -> Result<ComplexMatrix> {
    check_grid(g, bc)?;
    let n = g.n();
    let h = g.h;
    // (1/i) = −i
    let c = Complex64::new(0.0, -1.0 / (2.0 * h));
    let mut d = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        if k + 1 < n {
            d.set(k, k + 1, c);
        }
        if k > 0 {
            d.set(k, k - 1, -c);
        }
    }
    match bc {
        BoundaryCondition::Dirichlet => {}
        BoundaryCondition::Periodic => {
            d.set(n - 1, 0, c);
            d.set(0, n - 1, -c);
        }
        BoundaryCondition::Free => {
            let one_sided = c * 2.0;
            d.set(0, 0, -one_sided);
            d.set(0, 1, one_sided);
            d.set(n - 1, n - 2, -one_sided);
            d.set(n - 1, n - 1, one_sided);
        }
    }
    Ok(d)
}

/// Construction of the discrete `−d²/dx²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplacianScheme {
    /// Three-point stencil `(−1, 2, −1)/h²`.
    #[default]
    Stencil,
    /// `D* D` with `D` the central-difference derivative. Decouples even and
    /// odd nodes and carries a spurious null mode on even periodic grids.
    DerivativeProduct,
}

pub fn laplacian(g: &GridDiscretization, bc: BoundaryCondition) -> Result<ComplexMatrix> {
    laplacian_with(g, bc, LaplacianScheme::Stencil)
}

/// Dirichlet or periodic `−d²/dx²`.
pub fn laplacian_with(
    g: &GridDiscretization,
    bc: BoundaryCondition,
    scheme: LaplacianScheme,
) -> Result<ComplexMatrix> {
    if bc == BoundaryCondition::Free {
        return Err(Error::InvalidArgument(
            "the Laplacian is defined for dirichlet and periodic conditions only".into(),
        ));
    }
    check_grid(g, bc)?;
    if scheme == LaplacianScheme::DerivativeProduct {
        let d = derivative_operator(g, bc)?;
        return Ok((&d.adjoint() * &d).hermitian_part());
    }
    let n = g.n();
    let (diag, off) = laplacian_coefficients(g.h);
    let mut l = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        l.set(k, k, diag.into());
        if k + 1 < n {
            l.set(k, k + 1, off.into());
            l.set(k + 1, k, off.into());
        }
    }
    if bc == BoundaryCondition::Periodic {
        l.set(0, n - 1, off.into());
        l.set(n - 1, 0, off.into());
    }
    Ok(l)
}

fn laplacian_coefficients(h: f64) -> (f64, f64) {
    let s = 1.0 / (h * h);
    (2.0 * s, -s)
}

/// Solves a tridiagonal system by the Thomas algorithm.
///
/// `sub[k]` multiplies `x[k]` in row `k+1`, `sup[k]` multiplies `x[k+1]` in row `k`.
/// No pivoting: meant for diagonally dominant systems.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n || rhs.len() != n {
        return Err(Error::InvalidArgument(
            "inconsistent tridiagonal system".into(),
        ));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    for k in 0..n {
        if k > 0 {
            pivot = diag[k] - sub[k - 1] * c[k - 1];
        }
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular { sigma_min: 0.0 });
        }
        if k + 1 < n {
            c[k] = sup[k] / pivot;
        }
        let prev = if k > 0 { sub[k - 1] * d[k - 1] } else { 0.0 };
        d[k] = (rhs[k] - prev) / pivot;
    }
    for k in (0..n - 1).rev() {
        d[k] -= c[k] * d[k + 1];
    }
    Ok(d)
}

/// Solves a cyclic tridiagonal system with corner entries `corner` at
/// `(0, n−1)` and `(n−1, 0)`, by a Sherman–Morrison correction of the
/// Thomas algorithm.
pub fn solve_cyclic_tridiagonal(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    corner: f64,
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    if n < 3 {
        return Err(Error::InvalidArgument(
            "cyclic system needs at least 3 rows".into(),
        ));
    }
    // A = B + u vᵀ with u = (γ, 0.., corner), v = (1, 0.., corner/γ)
    let gamma = -diag[0];
    let mut modified = diag.to_vec();
    modified[0] -= gamma;
    modified[n - 1] -= corner * corner / gamma;
    let y = solve_tridiagonal(sub, &modified, sup, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = corner;
    let z = solve_tridiagonal(sub, &modified, sup, &u)?;
    let v_dot = |w: &[f64]| w[0] + corner / gamma * w[n - 1];
    let denom = 1.0 + v_dot(&z);
    if denom == 0.0 {
        return Err(Error::Singular { sigma_min: 0.0 });
    }
    let factor = v_dot(&y) / denom;
    Ok(y.iter().zip(&z).map(|(a, b)| a - factor * b).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationWitness {
    /// `(1, (L_D + I)⁻¹ 1)`.
    pub dirichlet: f64,
    /// `(1, (L_P + I)⁻¹ 1)`.
    pub periodic: f64,
}

impl SeparationWitness {
    pub fn gap(&self) -> f64 {
        (self.dirichlet - self.periodic).abs()
    }
}

/// The constant function tested against `(L + I)⁻¹` for the Dirichlet and
/// periodic Laplacians on `n` nodes.
pub fn separation_witness(n: usize) -> Result<SeparationWitness> {
    check_size(n, MIN_WITNESS_NODES)?;
    let ones = vec![1.0; n];
    let quadratic_value = |g: &GridDiscretization, x: &[f64]| g.h * x.iter().sum::<f64>();

    let g = GridDiscretization::interior(n)?;
    let (diag, off) = laplacian_coefficients(g.h);
    let off_diag = vec![off; n - 1];
    let shifted = vec![diag + 1.0; n];
    let x = solve_tridiagonal(&off_diag, &shifted, &off_diag, &ones)?;
    let dirichlet = quadratic_value(&g, &x);

    let g = GridDiscretization::periodic(n)?;
    let (diag, off) = laplacian_coefficients(g.h);
    let off_diag = vec![off; n - 1];
    let shifted = vec![diag + 1.0; n];
    let x = solve_cyclic_tridiagonal(&off_diag, &shifted, &off_diag, off, &ones)?;
    let periodic = quadratic_value(&g, &x);

    Ok(SeparationWitness {
        dirichlet,
        periodic,
    })
}

/// `∫₀¹ e^{−2x} dx`.
pub fn deficiency_norm_squared() -> f64 {
    (1.0 - (-2.0f64).exp()) / 2.0
}

/// The normalized solution `e^{−x} / ‖e^{−x}‖` of `(1/i) e' = i e`.
pub fn deficiency_profile(x: f64) -> Complex64 {
    Complex64::new((-x).exp() / deficiency_norm_squared().sqrt(), 0.0)
}

/// `e^{−x}` sampled on the grid and normalized in the discrete norm.
pub fn deficiency_vector(g: &GridDiscretization) -> Result<Vector> {
    check_size(g.n(), MIN_DEFICIENCY_NODES)?;
    let raw = g.sample(|x| Complex64::new((-x).exp(), 0.0));
    let norm = raw.norm();
    Ok(raw.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// Discrete `∫₀¹ e^{−2x} dx` on the grid, before normalization.
pub fn deficiency_norm_squared_discrete(g: &GridDiscretization) -> f64 {
    g.sample(|x| Complex64::new((-x).exp(), 0.0)).norm_squared()
}

/// `max_k |((D_free − i) e)(x_k)|` in function values, on an interior grid.
///
/// The one-sided end rows make this first order in `h`.
pub fn deficiency_residual(g: &GridDiscretization, e: &Vector) -> Result<f64> {
    let d = derivative_operator(g, BoundaryCondition::Free)?;
    let shifted = d.shift(Complex64::new(0.0, -1.0));
    let image = shifted.apply(e)?;
    Ok(g.values(&image)?.iter().fold(0.0, |m, z| m.max(z.norm())))
}

#[derive(Debug, Clone)]
pub struct RankOneExtension {
    /// `K = I + e e*`.
    pub k: ComplexMatrix,
    /// `K T1`.
    pub extended: ComplexMatrix,
}

impl RankOneExtension {
    /// `K⁻¹ = I − ½ e e*`.
    pub fn k_inverse(e: &Vector) -> ComplexMatrix {
        let n = e.dim();
        &ComplexMatrix::identity(n) - &ComplexMatrix::outer(e, e).scale_real(0.5)
    }
}

/// `K = I + e e*` and `T2 = K T1` for a unit vector `e`.
pub fn rank_one_extension(t1: &ComplexMatrix, e: &Vector) -> Result<RankOneExtension> {
    let n = t1.ensure_square()?;
    if e.dim() != n {
        return Err(Error::dims(n, e.dim()));
    }
    if (e.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "e has norm {}, expected 1",
            e.norm()
        )));
    }
    let k = &ComplexMatrix::identity(n) + &ComplexMatrix::outer(e, e);
    let extended = &k * t1;
    Ok(RankOneExtension { k, extended })
}

/// How the endpoint values `f(0)`, `f(1)` are obtained from grid samples.
#[derive(Debug, Clone, Copy)]
pub enum EndpointRule {
    /// Interior grids: linear extrapolation from the two nearest nodes.
    /// Periodic grids: `f(1) = f(0) = f(x_0)`.
    Grid,
    /// Evaluate a known closed form.
    Analytic(fn(f64) -> Complex64),
}

/// `|f(0) − f(1)|` for a grid vector, with endpoints from the grid rule.
///
/// Every vector on a periodic grid is periodic, so the result is 0 there.
pub fn boundary_mismatch(e: &Vector, g: &GridDiscretization) -> Result<f64> {
    boundary_mismatch_with(e, g, EndpointRule::Grid)
}

pub fn boundary_mismatch_with(
    e: &Vector,
    g: &GridDiscretization,
    rule: EndpointRule,
) -> Result<f64> {
    let v = g.values(e)?;
    let (left, right) = match (rule, g.kind) {
        (EndpointRule::Analytic(f), _) => (f(0.0), f(1.0)),
        (EndpointRule::Grid, GridKind::Periodic) => (v[0], v[0]),
        (EndpointRule::Grid, GridKind::Interior) => {
            let n = v.len();
            // nodes are equispaced and sit one step inside each endpoint
            (v[0] * 2.0 - v[1], v[n - 1] * 2.0 - v[n - 2])
        }
    };
    Ok((left - right).norm())
}
