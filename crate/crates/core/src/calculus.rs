//! Resolvents, spectral projections, unitary groups and the bounded
//! functional calculus of a Hermitian matrix, with numerical checks of the
//! integral formulas that connect them.
//!
//! Spectral projections are right-continuous: `E(λ)` includes eigenvalues
//! equal to `λ`. Eigenvalues closer than `1e-8 (ρ + 1)`, with `ρ` the
//! spectral radius, form one eigenspace.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{eig_hermitian, inner_product, HermitianEigenDecomposition};
use crate::hilbert::{relative_residual, ComplexMatrix, Vector};

/// Default trapezoid step count for the integral checks.
pub const DEFAULT_STEPS: usize = 40_000;

/// Relative eigenvalue clustering tolerance.
pub const CLUSTER_RTOL: f64 = 1e-8;

/// Upper bound on the Stone-formula step count.
pub const MAX_STEPS: usize = 50_000_000;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Distinct eigenvalues (cluster means), ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthogonal projection onto each eigenspace.
    pub projectors: Vec<ComplexMatrix>,
    pub multiplicities: Vec<usize>,
    lowest_members: Vec<f64>,
    eigen: HermitianEigenDecomposition,
}

impl SpectralDecomposition {
    pub fn new(t: &ComplexMatrix) -> Result<Self> {
        let eigen = eig_hermitian(t)?;
        let vals = &eigen.eigenvalues;
        let radius = vals.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        let tol = CLUSTER_RTOL * (radius + 1.0);

        let mut clusters: Vec<std::ops::Range<usize>> = Vec::new();
        let mut start = 0;
        for k in 1..=vals.len() {
            if k == vals.len() || vals[k] - vals[k - 1] > tol {
                clusters.push(start..k);
                start = k;
            }
        }

        let v = &eigen.eigenvectors;
        let n = eigen.dim();
        let mut eigenvalues = Vec::with_capacity(clusters.len());
        let mut projectors = Vec::with_capacity(clusters.len());
        let mut multiplicities = Vec::with_capacity(clusters.len());
        let mut lowest_members = Vec::with_capacity(clusters.len());
        for range in clusters {
            let members = &vals[range.clone()];
            eigenvalues.push(members.iter().sum::<f64>() / members.len() as f64);
            multiplicities.push(members.len());
            lowest_members.push(members[0]);
            let basis = ComplexMatrix::from_fn(n, range.len(), |i, j| v.get(i, range.start + j));
            projectors.push(&basis * &basis.adjoint());
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            projectors,
            multiplicities,
            lowest_members,
            eigen,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    /// The underlying eigenpairs, before clustering.
    pub fn eigenpairs(&self) -> &HermitianEigenDecomposition {
        &self.eigen
    }

    /// `E(λ)`: sum of the projectors of eigenspaces whose lowest member is `≤ λ`.
    pub fn projection(&self, lambda: f64) -> ComplexMatrix {
        let n = self.dim();
        self.lowest_members
            .iter()
            .zip(&self.projectors)
            .filter(|(l, _)| **l <= lambda)
            .fold(ComplexMatrix::zeros(n, n), |acc, (_, p)| &acc + p)
    }

    /// `Σ λ_k P_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(ComplexMatrix::zeros(n, n), |acc, (l, p)| {
                &acc + &p.scale_real(*l)
            })
    }

    fn spectral_tol(&self) -> f64 {
        let radius = self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        CLUSTER_RTOL * (radius + 1.0)
    }
}

pub fn spectral_projection(t: &ComplexMatrix, lambda: f64) -> Result<ComplexMatrix> {
    Ok(SpectralDecomposition::new(t)?.projection(lambda))
}

/// `(T − z I)⁻¹` for any square `T`.
pub fn resolvent(t: &ComplexMatrix, z: Complex64) -> Result<ComplexMatrix> {
    t.shift(-z).inverse().map_err(|e| match e {
        Error::Singular { .. } => Error::InSpectrum(format!("z = {z} is an eigenvalue")),
        other => other,
    })
}

/// `e^{isT}` for Hermitian `T`.
pub fn unitary_group(t: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(t)?.apply_function(|l| (I * s * l).exp()))
}

fn check_vectors(t: &ComplexMatrix, f: &Vector, g: &Vector) -> Result<()> {
    let n = t.ensure_square()?;
    for v in [f, g] {
        if v.dim() != n {
            return Err(Error::dims(n, v.dim()));
        }
    }
    Ok(())
}

/// `|i ∫₀^{smax} e^{izs} (f, e^{−isT} g) ds − (f, (T − z)⁻¹ g)|` with the
/// trapezoid rule; `Im z > 0`.
///
/// The truncation error is `e^{−Im(z) smax}` times `|(f, g)|/Im z` at most.
pub fn fourier_resolvent_check(
    t: &ComplexMatrix,
    z: Complex64,
    f: &Vector,
    g: &Vector,
    smax: f64,
    steps: usize,
) -> Result<f64> {
    check_vectors(t, f, g)?;
    if !(z.im > 0.0) || !z.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "z = {z} must have Im z > 0"
        )));
    }
    if !(smax > 0.0) || !smax.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "smax = {smax} must be positive"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    let eigen = eig_hermitian(t)?;
    let a = eigen.coordinates(f)?;
    let b = eigen.coordinates(g)?;
    let weights: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x.conj() * y).collect();
    let integrand = |s: f64| -> Complex64 {
        let matrix_element: Complex64 = weights
            .iter()
            .zip(&eigen.eigenvalues)
            .map(|(w, l)| w * (-I * s * l).exp())
            .sum();
        (I * z * s).exp() * matrix_element
    };
    let quadrature = I * trapezoid(integrand, 0.0, smax, steps);

    let direct = t.shift(-z).solve_unchecked(&column(g));
    let exact = inner_product(f, &direct.column(0))?;
    Ok((quadrature - exact).norm())
}

/// Stone's formula with the default step rule.
pub fn stone_formula_check(
    t: &ComplexMatrix,
    lambda: f64,
    f: &Vector,
    g: &Vector,
    epsilon: f64,
    delta: f64,
) -> Result<f64> {
    stone_formula_check_with(t, lambda, f, g, epsilon, delta, DEFAULT_STEPS)
}

/// `|(2πi)⁻¹ ∫_Λ^{λ+δ} (f, [R(x + iε) − R(x − iε)] g) dx − (f, E(λ) g)|`
/// with `Λ = λ_min − 1`.
///
/// The integrand is a sum of Lorentzians of width `ε`; the trapezoid rule
/// uses at least `min_steps` and at least enough steps for `h ≤ ε/2`.
pub fn stone_formula_check_with(
    t: &ComplexMatrix,
    lambda: f64,
    f: &Vector,
    g: &Vector,
    epsilon: f64,
    delta: f64,
    min_steps: usize,
) -> Result<f64> {
    check_vectors(t, f, g)?;
    if !(epsilon > 0.0 && delta > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(
            "epsilon and delta must be positive and lambda finite".into(),
        ));
    }
    let spectral = SpectralDecomposition::new(t)?;
    let upper = lambda + delta;
    let tol = spectral.spectral_tol();
    if let Some(l) = spectral
        .eigenvalues
        .iter()
        .find(|l| (*l - upper).abs() <= tol)
    {
        return Err(Error::InvalidArgument(format!(
            "lambda + delta = {upper} is the eigenvalue {l}"
        )));
    }
    let exact = inner_product(f, &spectral.projection(lambda).apply(g)?)?;

    let lower = spectral.eigenvalues[0] - 1.0;
    if upper <= lower {
        return Ok(exact.norm());
    }
    let len = upper - lower;
    let needed = (2.0 * len / epsilon).ceil();
    if needed > MAX_STEPS as f64 {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} needs {needed:e} quadrature steps"
        )));
    }
    let steps = min_steps.max(needed as usize).max(1);

    let rhs = column(g);
    let jump = |x: f64| -> Complex64 {
        let above = t
            .shift(-Complex64::new(x, epsilon))
            .solve_unchecked(&rhs)
            .column(0);
        let below = t
            .shift(-Complex64::new(x, -epsilon))
            .solve_unchecked(&rhs)
            .column(0);
        inner_product(f, &(&above - &below)).expect("dimensions checked")
    };
    let integral = trapezoid(jump, lower, upper, steps) / (2.0 * PI * I);
    Ok((integral - exact).norm())
}

/// `|Σ_k e^{isλ_k} (f, P_k g) − (f, e^{isT} g)|`.
pub fn spectral_transform_check(t: &ComplexMatrix, s: f64, f: &Vector, g: &Vector) -> Result<f64> {
    check_vectors(t, f, g)?;
    let spectral = SpectralDecomposition::new(t)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (l, p) in spectral.eigenvalues.iter().zip(&spectral.projectors) {
        sum += (I * s * l).exp() * inner_product(f, &p.apply(g)?)?;
    }
    let direct = inner_product(f, &unitary_group(t, s)?.apply(g)?)?;
    Ok((sum - direct).norm())
}

/// Resolvent forms of the characteristic-matrix blocks of a Hermitian `T`:
/// `(T² + I)⁻¹ = R(i) R(−i)` and `T(T² + I)⁻¹ = R(i) − i(T² + I)⁻¹ = R(−i) + i(T² + I)⁻¹`,
/// with `R(z) = (T − z)⁻¹`. Returns the largest relative residual.
pub fn resolvent_split_check(t: &ComplexMatrix) -> Result<f64> {
    let p = crate::graph::char_matrix(t)?;
    if t.hermitian_asymmetry() > crate::hilbert::HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            asymmetry: t.hermitian_asymmetry(),
            tolerance: crate::hilbert::HERMITIAN_TOL,
        });
    }
    let r_plus = resolvent(t, I)?;
    let r_minus = resolvent(t, -I)?;
    let residuals = [
        relative_residual(&(&r_plus * &r_minus), &p.p11),
        relative_residual(&(&r_plus - &p.p11.scale(I)), &p.p21),
        relative_residual(&(&r_minus + &p.p11.scale(I)), &p.p21),
    ];
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// Step function `Σ_j c_j χ_{(e_{j−1}, e_j]}`, zero outside `(e_0, e_m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<Complex64>,
}

impl StepFunction {
    /// `breaks` strictly increasing, one value per interval.
    pub fn new(breaks: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if breaks.len() < 2 || values.len() + 1 != breaks.len() {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints need {} values, got {}",
                breaks.len(),
                breaks.len().saturating_sub(1),
                values.len()
            )));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        Ok(StepFunction { breaks, values })
    }

    /// Indicator of `(lo, lambda]`.
    pub fn indicator(lo: f64, lambda: f64) -> Result<Self> {
        StepFunction::new(vec![lo, lambda], vec![Complex64::new(1.0, 0.0)])
    }

    /// `pieces` equal intervals on `(lo, hi]`, each carrying the value of
    /// `f` at its left endpoint.
    pub fn left_staircase(
        f: impl Fn(f64) -> Complex64,
        lo: f64,
        hi: f64,
        pieces: usize,
    ) -> Result<Self> {
        if pieces == 0 {
            return Err(Error::InvalidArgument("pieces must be positive".into()));
        }
        let h = (hi - lo) / pieces as f64;
        let breaks: Vec<f64> = (0..=pieces).map(|k| lo + k as f64 * h).collect();
        let values = breaks[..pieces].iter().map(|&x| f(x)).collect();
        StepFunction::new(breaks, values)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let m = self.breaks.len();
        if !(x > self.breaks[0] && x <= self.breaks[m - 1]) {
            return Complex64::new(0.0, 0.0);
        }
        // first break ≥ x closes the interval containing x
        let j = self.breaks.partition_point(|&b| b < x);
        self.values[j - 1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepCheckReport {
    /// `‖F_n(T) − F(T)‖₂` per step function.
    pub errors: Vec<f64>,
    /// `max_k |F_n(λ_k) − F(λ_k)|` per step function.
    pub sup_distances: Vec<f64>,
}

impl StepCheckReport {
    /// Each error within its sup-distance bound, and the error profile
    /// nonincreasing wherever the bounds are.
    pub fn passed(&self, tol: f64) -> bool {
        let bounded = self
            .errors
            .iter()
            .zip(&self.sup_distances)
            .all(|(e, d)| *e <= d + tol);
        let monotone = (1..self.errors.len()).all(|k| {
            self.sup_distances[k] > self.sup_distances[k - 1]
                || self.errors[k] <= self.errors[k - 1] + tol
        });
        bounded && monotone
    }
}

/// Compares `F_n(T)` with `F(T)` for a sequence of step approximations.
pub fn bounded_calculus_step_check(
    t: &ComplexMatrix,
    f: impl Fn(f64) -> Complex64,
    steps: &[StepFunction],
) -> Result<StepCheckReport> {
    let eigen = eig_hermitian(t)?;
    let target = eigen.apply_function(&f);
    let mut errors = Vec::with_capacity(steps.len());
    let mut sup_distances = Vec::with_capacity(steps.len());
    for step in steps {
        let approx = eigen.apply_function(|x| step.eval(x));
        errors.push((&approx - &target).op_norm()?);
        sup_distances.push(
            eigen
                .eigenvalues
                .iter()
                .map(|&l| (step.eval(l) - f(l)).norm())
                .fold(0.0, f64::max),
        );
    }
    Ok(StepCheckReport {
        errors,
        sup_distances,
    })
}

fn column(v: &Vector) -> ComplexMatrix {
    ComplexMatrix::from_columns(std::slice::from_ref(v))
}

/// Composite trapezoid rule with `steps` intervals.
fn trapezoid(f: impl Fn(f64) -> Complex64, a: f64, b: f64, steps: usize) -> Complex64 {
    let h = (b - a) / steps as f64;
    let mut acc = (f(a) + f(b)) * 0.5;
    for k in 1..steps {
        acc += f(a + k as f64 * h);
    }
    acc * h
}
