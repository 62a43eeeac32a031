//! Characteristic matrices of the difference operators satisfy the block
//! identities on moderate grids.

use charmat_core::boundary::{
    derivative_operator, laplacian, BoundaryCondition, GridDiscretization,
};
use charmat_core::graph::{char_matrix, char_matrix_oracle, verify_identities};

#[test]
fn derivative_operators() {
    for bc in [
        BoundaryCondition::Dirichlet,
        BoundaryCondition::Periodic,
        BoundaryCondition::Free,
    ] {
        let g = GridDiscretization::for_condition(bc, 60).unwrap();
        let t = derivative_operator(&g, bc).unwrap();
        let p = char_matrix(&t).unwrap();
        let report = verify_identities(&t, &p).unwrap();
        assert!(report.all_passed(), "{bc}: {report:?}");
        assert!(p.distance(&char_matrix_oracle(&t).unwrap()) <= 1e-10);
    }
}

#[test]
fn laplacians_on_coarse_grids() {
    // residuals scale like ε‖T‖²; ‖L‖ = 4(n+1)² keeps them below 1e-10 for n ≲ 25
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Periodic] {
        let g = GridDiscretization::for_condition(bc, 20).unwrap();
        let t = laplacian(&g, bc).unwrap();
        let report = verify_identities(&t, &char_matrix(&t).unwrap()).unwrap();
        assert!(report.all_passed(), "{bc}: {report:?}");
    }
}
