//! Seeded random instances for property checks, benchmarks and the CLI.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::family::{OperatorFamily, ParameterGrid};
use crate::hilbert::{ComplexMatrix, Vector};

pub use rand_chacha::ChaCha8Rng as SeededRng;

/// Deterministic generator from a 64-bit seed.
pub fn rng(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex normal entries.
pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data: Vec<_> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("finite samples")
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    complex_matrix(rng, n, n).hermitian_part()
}

/// `A* A` for a random `A`: Hermitian positive semidefinite.
pub fn positive<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = complex_matrix(rng, n, n);
    (&a.adjoint() * &a).hermitian_part()
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    Vector::new((0..n).map(|_| complex_normal(rng)).collect()).expect("finite samples")
}

/// Random matrix of rank `n - nullity`.
pub fn rank_deficient<R: Rng + ?Sized>(rng: &mut R, n: usize, nullity: usize) -> ComplexMatrix {
    let a = complex_matrix(rng, n, n);
    let b = complex_matrix(rng, n, n);
    let d: Vec<f64> = (0..n)
        .map(|k| if k < nullity { 0.0 } else { 1.0 })
        .collect();
    &(&a * &ComplexMatrix::diag_real(&d)) * &b
}

/// Grid of `m` sorted nodes in `[-1, 1]` with trapezoidal weights.
pub fn grid<R: Rng + ?Sized>(rng: &mut R, m: usize) -> ParameterGrid {
    let mut nodes: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    nodes.sort_by(f64::total_cmp);
    // spread exact ties, which are practically impossible but would break the grid invariant
    for k in 1..m {
        if nodes[k] <= nodes[k - 1] {
            nodes[k] = nodes[k - 1] + 1e-9;
        }
    }
    ParameterGrid::trapezoidal(nodes).expect("sorted nodes")
}

/// Family of `m` fibers of size `n` produced by `fiber`.
pub fn family<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
    mut fiber: impl FnMut(&mut R, usize) -> ComplexMatrix,
) -> OperatorFamily {
    let grid = grid(rng, m);
    let fibers = (0..m).map(|_| fiber(rng, n)).collect();
    OperatorFamily::new(grid, fibers).expect("consistent fibers")
}
