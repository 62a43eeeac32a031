//! Operator families over a sampled parameter line and their direct
//! integrals.
//!
//! The parameter `t ∈ ℝ` is replaced by finitely many nodes with positive
//! quadrature weights, and every almost-everywhere statement becomes a
//! statement about every node. The direct integral of a family is then the
//! block-diagonal matrix of its fibers; the weights enter only through the
//! inner product of [`FamilyVector`]s.
//!
//! With bounded fibers on a finite grid, the maximally defined fiberwise
//! operator and the direct integral are the same object, so one type,
//! [`DirectIntegralOperator`], serves both.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{char_matrix, CharacteristicMatrix, KERNEL_TOL};
use crate::hilbert::{eig_hermitian, eigvals_hermitian, inner_product, relative_residual};
use crate::hilbert::{ComplexMatrix, Vector};

/// Tolerance of the structural agreement checks, relative to the family norm.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Resolvent gap below which a sequence counts as converged.
pub const LIMIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl ParameterGrid {
    /// Nodes must be finite and strictly increasing; weights finite and positive.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("grid has no nodes".into()));
        }
        if nodes.len() != weights.len() {
            return Err(Error::dims(
                format!("{} weights", nodes.len()),
                format!("{} weights", weights.len()),
            ));
        }
        if nodes.iter().any(|t| !t.is_finite()) || nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "grid nodes must be finite and strictly increasing".into(),
            ));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidArgument(
                "grid weights must be positive".into(),
            ));
        }
        Ok(ParameterGrid { nodes, weights })
    }

    /// Trapezoidal weights on the given nodes; a single node gets weight 1.
    pub fn trapezoidal(nodes: Vec<f64>) -> Result<Self> {
        let m = nodes.len();
        let weights = match m {
            0 => Vec::new(),
            1 => vec![1.0],
            _ => (0..m)
                .map(|k| {
                    let left = if k == 0 { nodes[0] } else { nodes[k - 1] };
                    let right = if k == m - 1 {
                        nodes[m - 1]
                    } else {
                        nodes[k + 1]
                    };
                    (right - left) / 2.0
                })
                .collect(),
        };
        ParameterGrid::new(nodes, weights)
    }

    /// `m` equispaced nodes on `[a, b]` with trapezoidal weights.
    pub fn uniform(a: f64, b: f64, m: usize) -> Result<Self> {
        if m == 1 {
            return ParameterGrid::trapezoidal(vec![a]);
        }
        let h = (b - a) / (m as f64 - 1.0);
        ParameterGrid::trapezoidal((0..m).map(|k| a + k as f64 * h).collect())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFamily {
    grid: ParameterGrid,
    fibers: Vec<ComplexMatrix>,
}

impl OperatorFamily {
    /// One square fiber per node, all of the same size.
    pub fn new(grid: ParameterGrid, fibers: Vec<ComplexMatrix>) -> Result<Self> {
        if fibers.len() != grid.len() {
            return Err(Error::dims(
                format!("{} fibers", grid.len()),
                format!("{} fibers", fibers.len()),
            ));
        }
        let n = fibers[0].ensure_square()?;
        for f in &fibers {
            if f.ensure_square()? != n {
                return Err(Error::dims(
                    format!("{n}x{n} fiber"),
                    format!("{}x{} fiber", f.rows(), f.cols()),
                ));
            }
        }
        Ok(OperatorFamily { grid, fibers })
    }

    pub fn from_fn(grid: ParameterGrid, f: impl FnMut(f64) -> ComplexMatrix) -> Result<Self> {
        let fibers = grid.nodes().iter().copied().map(f).collect();
        OperatorFamily::new(grid, fibers)
    }

    pub fn constant(grid: ParameterGrid, fiber: &ComplexMatrix) -> Result<Self> {
        OperatorFamily::from_fn(grid, |_| fiber.clone())
    }

    pub fn grid(&self) -> &ParameterGrid {
        &self.grid
    }

    pub fn fibers(&self) -> &[ComplexMatrix] {
        &self.fibers
    }

    pub fn fiber(&self, k: usize) -> &ComplexMatrix {
        &self.fibers[k]
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    /// Fiber dimension.
    pub fn dim(&self) -> usize {
        self.fibers[0].rows()
    }

    /// Applies `f` to every fiber, keeping the grid.
    pub fn map(&self, f: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        OperatorFamily::new(self.grid.clone(), self.fibers.iter().map(f).collect())
    }

    pub fn try_map(&self, f: impl FnMut(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<Self> {
        let fibers = self.fibers.iter().map(f).collect::<Result<Vec<_>>>()?;
        OperatorFamily::new(self.grid.clone(), fibers)
    }

    pub fn adjoint(&self) -> Self {
        OperatorFamily {
            grid: self.grid.clone(),
            fibers: self.fibers.iter().map(ComplexMatrix::adjoint).collect(),
        }
    }

    fn ensure_compatible(&self, other: &OperatorFamily) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(
                "families live on different grids".into(),
            ));
        }
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &OperatorFamily,
        f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Self> {
        self.ensure_compatible(other)?;
        let fibers = self
            .fibers
            .iter()
            .zip(&other.fibers)
            .map(|(a, b)| f(a, b))
            .collect();
        OperatorFamily::new(self.grid.clone(), fibers)
    }
}

/// A square-integrable section `t ↦ f(t)`, sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyVector {
    grid: ParameterGrid,
    sections: Vec<Vector>,
}

impl FamilyVector {
    pub fn new(grid: ParameterGrid, sections: Vec<Vector>) -> Result<Self> {
        if sections.len() != grid.len() {
            return Err(Error::dims(
                format!("{} sections", grid.len()),
                format!("{} sections", sections.len()),
            ));
        }
        let n = sections[0].dim();
        if let Some(bad) = sections.iter().find(|s| s.dim() != n) {
            return Err(Error::dims(n, bad.dim()));
        }
        Ok(FamilyVector { grid, sections })
    }

    pub fn zeros(grid: ParameterGrid, n: usize) -> Self {
        let sections = vec![Vector::zeros(n); grid.len()];
        FamilyVector { grid, sections }
    }

    pub fn grid(&self) -> &ParameterGrid {
        &self.grid
    }

    pub fn sections(&self) -> &[Vector] {
        &self.sections
    }

    pub fn dim(&self) -> usize {
        self.sections[0].dim()
    }

    /// `Σ_k w_k (f_k, g_k)`.
    pub fn inner(&self, other: &FamilyVector) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(
                "vectors live on different grids".into(),
            ));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for ((w, f), g) in self
            .grid
            .weights
            .iter()
            .zip(&self.sections)
            .zip(&other.sections)
        {
            acc += *w * inner_product(f, g)?;
        }
        Ok(acc)
    }

    pub fn norm(&self) -> f64 {
        self.grid
            .weights
            .iter()
            .zip(&self.sections)
            .map(|(w, f)| w * f.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Weighted norm of the difference.
    pub fn distance(&self, other: &FamilyVector) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(
                "vectors live on different grids".into(),
            ));
        }
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        let sections = self
            .sections
            .iter()
            .zip(&other.sections)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FamilyVector {
            grid: self.grid.clone(),
            sections,
        }
        .norm())
    }

    /// Sections stacked into one vector, in node order.
    pub fn concat(&self) -> Vector {
        let entries = self
            .sections
            .iter()
            .flat_map(|s| s.entries().iter().copied())
            .collect();
        Vector::new(entries).expect("sections are finite and nonempty")
    }
}

#[derive(Debug, Clone)]
pub struct DirectIntegralOperator {
    pub family: OperatorFamily,
    pub assembled: ComplexMatrix,
}

impl DirectIntegralOperator {
    /// Acts through the assembled matrix; agrees with fiberwise application.
    pub fn apply(&self, f: &FamilyVector) -> Result<FamilyVector> {
        if f.grid != self.family.grid {
            return Err(Error::InvalidArgument(
                "vector lives on a different grid".into(),
            ));
        }
        let n = self.family.dim();
        if f.dim() != n {
            return Err(Error::dims(n, f.dim()));
        }
        let image = self.assembled.apply(&f.concat())?;
        let sections = image
            .entries()
            .chunks(n)
            .map(|c| Vector::new(c.to_vec()).expect("finite image"))
            .collect();
        FamilyVector::new(f.grid.clone(), sections)
    }
}

pub fn direct_integral(fam: &OperatorFamily) -> DirectIntegralOperator {
    DirectIntegralOperator {
        family: fam.clone(),
        assembled: ComplexMatrix::block_diag(&fam.fibers),
    }
}

/// Fiberwise application `(T f)(t) = T(t) f(t)`.
pub fn apply_fiberwise(fam: &OperatorFamily, f: &FamilyVector) -> Result<FamilyVector> {
    if f.grid != fam.grid {
        return Err(Error::InvalidArgument(
            "vector lives on a different grid".into(),
        ));
    }
    let sections = fam
        .fibers
        .iter()
        .zip(&f.sections)
        .map(|(t, s)| t.apply(s))
        .collect::<Result<Vec<_>>>()?;
    FamilyVector::new(f.grid.clone(), sections)
}

/// Largest fiber operator norm.
pub fn family_norm(fam: &OperatorFamily) -> Result<f64> {
    fam.fibers
        .iter()
        .try_fold(0.0, |acc: f64, t| Ok(acc.max(t.op_norm()?)))
}

#[derive(Debug, Clone)]
pub struct FiberwiseCharMatrix {
    pub fibers: Vec<CharacteristicMatrix>,
    /// Largest blockwise Frobenius distance between the characteristic
    /// matrix of the assembled operator and the assembled fiber blocks.
    pub residual: f64,
}

pub fn char_matrix_fiberwise(fam: &OperatorFamily) -> Result<FiberwiseCharMatrix> {
    let fibers = fam
        .fibers
        .iter()
        .map(char_matrix)
        .collect::<Result<Vec<_>>>()?;
    let whole = char_matrix(&direct_integral(fam).assembled)?;
    let assemble = |pick: fn(&CharacteristicMatrix) -> &ComplexMatrix| {
        ComplexMatrix::block_diag(&fibers.iter().map(|p| pick(p).clone()).collect::<Vec<_>>())
    };
    let blockwise = CharacteristicMatrix {
        p11: assemble(|p| &p.p11),
        p12: assemble(|p| &p.p12),
        p21: assemble(|p| &p.p21),
        p22: assemble(|p| &p.p22),
    };
    let residual = whole.distance(&blockwise);
    Ok(FiberwiseCharMatrix { fibers, residual })
}

/// Polynomial with complex coefficients, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Horner evaluation on a square matrix.
    pub fn eval_matrix(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = a.ensure_square()?;
        let mut acc = ComplexMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = (&acc * a).shift(*c);
        }
        Ok(acc)
    }
}

/// The properties compared between the assembled operator and its fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteCheck {
    Adjoint,
    Modulus,
    SelfAdjoint,
    Normal,
    Positive,
    Injective,
    Inverse,
    Polynomial,
    Inclusion,
}

impl SuiteCheck {
    pub fn label(self) -> &'static str {
        match self {
            SuiteCheck::Adjoint => "adjoint",
            SuiteCheck::Modulus => "modulus",
            SuiteCheck::SelfAdjoint => "self_adjoint",
            SuiteCheck::Normal => "normal",
            SuiteCheck::Positive => "positive",
            SuiteCheck::Injective => "injective",
            SuiteCheck::Inverse => "inverse",
            SuiteCheck::Polynomial => "polynomial",
            SuiteCheck::Inclusion => "inclusion",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// Relative residual between assembled and fiberwise evaluation.
    Residual(f64),
    /// A property of the assembled operator and of every fiber.
    Agreement { assembled: bool, fibers: bool },
    /// Precondition not met.
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteItem {
    pub check: SuiteCheck,
    pub outcome: Outcome,
}

impl SuiteItem {
    /// Skipped items count as passed.
    pub fn passed(&self, tol: f64) -> bool {
        match &self.outcome {
            Outcome::Residual(r) => *r <= tol,
            Outcome::Agreement { assembled, fibers } => assembled == fibers,
            Outcome::Skipped(_) => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub items: Vec<SuiteItem>,
}

impl DecompositionReport {
    pub fn get(&self, check: SuiteCheck) -> Option<&SuiteItem> {
        self.items.iter().find(|i| i.check == check)
    }

    pub fn all_passed(&self, tol: f64) -> bool {
        self.items.iter().all(|i| i.passed(tol))
    }

    /// Largest residual among the evaluated residual items.
    pub fn max_residual(&self) -> f64 {
        self.items
            .iter()
            .filter_map(|i| match i.outcome {
                Outcome::Residual(r) => Some(r),
                _ => None,
            })
            .fold(0.0, f64::max)
    }
}

/// Compares the assembled operator with its fibers under adjoint, modulus,
/// inverse and a polynomial, and checks that self-adjointness, normality,
/// positivity and injectivity hold for the assembly exactly when they hold
/// for every fiber.
///
/// With `wider` given, the inclusion of `fam` in `wider` is checked fiberwise;
/// in finite dimensions it reduces to equality.
pub fn decomposition_suite(
    fam: &OperatorFamily,
    p: &Polynomial,
    wider: Option<&OperatorFamily>,
) -> Result<DecompositionReport> {
    let whole = direct_integral(fam).assembled;
    let scale = family_norm(fam)?.max(1.0);
    let tol = STRUCTURE_TOL * scale;
    let assemble = |fibers: Vec<ComplexMatrix>| ComplexMatrix::block_diag(&fibers);
    let mut items = Vec::new();
    let mut push = |check, outcome| items.push(SuiteItem { check, outcome });

    let adj = assemble(fam.fibers.iter().map(ComplexMatrix::adjoint).collect());
    push(
        SuiteCheck::Adjoint,
        Outcome::Residual(relative_residual(&whole.adjoint(), &adj)),
    );

    let fiber_moduli = fam.fibers.iter().map(modulus).collect::<Result<Vec<_>>>()?;
    push(
        SuiteCheck::Modulus,
        Outcome::Residual(relative_residual(
            &modulus(&whole)?,
            &assemble(fiber_moduli),
        )),
    );

    let self_adjoint = |a: &ComplexMatrix| (a - &a.adjoint()).max_abs() <= tol;
    let fibers_sa = fam.fibers.iter().all(self_adjoint);
    let whole_sa = self_adjoint(&whole);
    push(
        SuiteCheck::SelfAdjoint,
        Outcome::Agreement {
            assembled: whole_sa,
            fibers: fibers_sa,
        },
    );

    let normal = |a: &ComplexMatrix| {
        let a_star = a.adjoint();
        (&(a * &a_star) - &(&a_star * a)).max_abs() <= tol * scale
    };
    push(
        SuiteCheck::Normal,
        Outcome::Agreement {
            assembled: normal(&whole),
            fibers: fam.fibers.iter().all(normal),
        },
    );

    let positive = |a: &ComplexMatrix| -> Result<bool> {
        if !self_adjoint(a) {
            return Ok(false);
        }
        Ok(eigvals_hermitian(&a.hermitian_part())?[0] >= -tol)
    };
    let fibers_pos = fam
        .fibers
        .iter()
        .try_fold(true, |acc, a| Ok::<_, Error>(acc && positive(a)?))?;
    push(
        SuiteCheck::Positive,
        Outcome::Agreement {
            assembled: positive(&whole)?,
            fibers: fibers_pos,
        },
    );

    let injective =
        |a: &ComplexMatrix| -> Result<bool> { Ok(a.min_singular_value()? > KERNEL_TOL * scale) };
    let fibers_inj = fam
        .fibers
        .iter()
        .try_fold(true, |acc, a| Ok::<_, Error>(acc && injective(a)?))?;
    push(
        SuiteCheck::Injective,
        Outcome::Agreement {
            assembled: injective(&whole)?,
            fibers: fibers_inj,
        },
    );

    if fibers_inj {
        let inverses = fam
            .fibers
            .iter()
            .map(ComplexMatrix::inverse)
            .collect::<Result<Vec<_>>>()?;
        push(
            SuiteCheck::Inverse,
            Outcome::Residual(relative_residual(&whole.inverse()?, &assemble(inverses))),
        );
    } else {
        push(
            SuiteCheck::Inverse,
            Outcome::Skipped("a fiber has a kernel".into()),
        );
    }

    if fam.fibers.iter().all(normal) {
        let values = fam
            .fibers
            .iter()
            .map(|a| p.eval_matrix(a))
            .collect::<Result<Vec<_>>>()?;
        push(
            SuiteCheck::Polynomial,
            Outcome::Residual(relative_residual(
                &p.eval_matrix(&whole)?,
                &assemble(values),
            )),
        );
    } else {
        push(
            SuiteCheck::Polynomial,
            Outcome::Skipped("a fiber is not normal".into()),
        );
    }

    if let Some(wider) = wider {
        fam.ensure_compatible(wider)?;
        let r = fam
            .fibers
            .iter()
            .zip(&wider.fibers)
            .map(|(a, b)| relative_residual(a, b))
            .fold(0.0, f64::max);
        push(SuiteCheck::Inclusion, Outcome::Residual(r));
    }

    Ok(DecompositionReport { items })
}

/// `|A| = (A* A)^{1/2}`.
pub fn modulus(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = (&a.adjoint() * a).hermitian_part();
    Ok(eig_hermitian(&gram)?.apply_function(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)))
}

/// Fiberwise sum.
pub fn lennon_sum(a: &OperatorFamily, b: &OperatorFamily) -> Result<OperatorFamily> {
    a.zip_with(b, |x, y| x + y)
}

/// Fiberwise product `A(t) B(t)`.
pub fn lennon_product(a: &OperatorFamily, b: &OperatorFamily) -> Result<OperatorFamily> {
    a.zip_with(b, |x, y| x * y)
}

/// Fibers `(T(t) − α(t) I)⁻¹`.
pub fn resolvent_family(fam: &OperatorFamily, alpha: &[Complex64]) -> Result<OperatorFamily> {
    check_alpha(fam, alpha)?;
    let fibers = fam
        .fibers
        .iter()
        .zip(alpha)
        .map(|(t, a)| t.shift(-*a).inverse())
        .collect::<Result<Vec<_>>>()?;
    OperatorFamily::new(fam.grid.clone(), fibers)
}

/// Recovers `T(t) = α(t) I + R(t)⁻¹` from a resolvent family.
pub fn resolvent_reconstruct(res: &OperatorFamily, alpha: &[Complex64]) -> Result<OperatorFamily> {
    check_alpha(res, alpha)?;
    let fibers = res
        .fibers
        .iter()
        .zip(alpha)
        .map(|(r, a)| Ok(r.inverse()?.shift(*a)))
        .collect::<Result<Vec<_>>>()?;
    OperatorFamily::new(res.grid.clone(), fibers)
}

fn check_alpha(fam: &OperatorFamily, alpha: &[Complex64]) -> Result<()> {
    if alpha.len() != fam.len() {
        return Err(Error::dims(
            format!("{} shifts", fam.len()),
            format!("{} shifts", alpha.len()),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventLimitReport {
    /// `profiles[k][j]`: spectral-norm resolvent gap of sequence element `j`
    /// at node `k`.
    pub profiles: Vec<Vec<f64>>,
    /// Per node: last gap ≤ [`LIMIT_TOL`] and nonincreasing over the last half.
    pub converged: Vec<bool>,
}

impl ResolventLimitReport {
    /// Largest gap over nodes, per sequence element.
    pub fn gaps(&self) -> Vec<f64> {
        let len = self.profiles.first().map_or(0, Vec::len);
        (0..len)
            .map(|j| self.profiles.iter().map(|p| p[j]).fold(0.0, f64::max))
            .collect()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

/// Resolvent gaps `‖(T_j(t) − z)⁻¹ − (T(t) − z)⁻¹‖` along a sequence of
/// Hermitian families.
pub fn resolvent_limit_check(
    seq: &[OperatorFamily],
    limit: &OperatorFamily,
    z: Complex64,
) -> Result<ResolventLimitReport> {
    if z.im == 0.0 || !z.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "z = {z} must be finite and non-real"
        )));
    }
    if seq.is_empty() {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    for fam in seq.iter().chain(std::iter::once(limit)) {
        fam.ensure_compatible(limit)?;
        for t in &fam.fibers {
            let asym = t.hermitian_asymmetry();
            if asym > crate::hilbert::HERMITIAN_TOL {
                return Err(Error::NotHermitian {
                    asymmetry: asym,
                    tolerance: crate::hilbert::HERMITIAN_TOL,
                });
            }
        }
    }
    let shift = vec![z; limit.len()];
    let target = resolvent_family(limit, &shift)?;
    let resolvents = seq
        .iter()
        .map(|f| resolvent_family(f, &shift))
        .collect::<Result<Vec<_>>>()?;

    let mut profiles = Vec::with_capacity(limit.len());
    for k in 0..limit.len() {
        let profile = resolvents
            .iter()
            .map(|r| (&r.fibers[k] - &target.fibers[k]).op_norm())
            .collect::<Result<Vec<_>>>()?;
        profiles.push(profile);
    }
    let converged = profiles
        .iter()
        .map(|p| {
            let tail = &p[p.len() / 2..];
            p[p.len() - 1] <= LIMIT_TOL && tail.windows(2).all(|w| w[1] <= w[0])
        })
        .collect();
    Ok(ResolventLimitReport {
        profiles,
        converged,
    })
}

/// Zeroes the sections at nodes where `‖T(t) f(t)‖ > n` or `|t| > n`.
pub fn truncate_family_vector(
    fam: &OperatorFamily,
    f: &FamilyVector,
    n: u64,
) -> Result<FamilyVector> {
    let image = apply_fiberwise(fam, f)?;
    let bound = n as f64;
    let sections = f
        .sections
        .iter()
        .zip(&image.sections)
        .zip(f.grid.nodes())
        .map(|((s, ts), t)| {
            if ts.norm() <= bound && t.abs() <= bound {
                s.clone()
            } else {
                Vector::zeros(s.dim())
            }
        })
        .collect();
    FamilyVector::new(f.grid.clone(), sections)
}
