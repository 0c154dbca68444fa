//! A workbench for finite Kleene algebras and Kleene modules: axiom
//! checking, the standard module constructions (subalgebra bimodules,
//! ideals, quotients, free, hom and dual modules), tensor products by
//! congruence closure with a free fast path, and Morita equivalence
//! witnesses for matrix algebras and corners at full idempotents.
//!
//! ```
//! use kam_core::{matrix_morita_witness, KleeneAlgebra, Limits};
//!
//! let limits = Limits::default();
//! let k = KleeneAlgebra::bool2();
//! let outcome = matrix_morita_witness(&k, 2, &limits)?;
//! assert!(outcome.report.passed());
//! assert_eq!(outcome.witness.t_pq.module.size(), 16);
//! # Ok::<(), kam_core::KamError>(())
//! ```

pub mod adjunction;
pub mod algebra;
pub mod catalog;
pub mod congruence;
pub mod error;
pub mod hom;
pub mod iso;
pub mod law;
pub mod limits;
pub mod matrix;
pub mod module;
pub mod morita;
pub mod tensor;

pub use adjunction::{
    check_adjunction, check_monoid_laws, curry, inner_hom, path_agreement, uncurry, InnerHom,
};
pub use algebra::{AlgebraHom, Element, KleeneAlgebra};
pub use congruence::{congruence_closure, quotient_module, Congruence, TraceEvent};
pub use error::{KamError, Result};
pub use hom::{dual_module, end_module, enumerate_homs, hom_module, ModuleHom};
pub use iso::{algebra_iso_search, module_iso_search};
pub use law::{LawCheck, LawReport};
pub use limits::Limits;
pub use matrix::MatrixElement;
pub use module::{
    algebra_over_subalgebra, free_module, regular_bimodule, submodule_generated, ActionSide,
    FreeStructure, KleeneModule, Side,
};
pub use morita::{
    check_category_equivalence, check_composition_law, column_bimodule, corner_algebra,
    full_idempotent_scan, homomorphism_module, is_full_idempotent, lift_semiring_morita,
    matrix_morita_witness, row_bimodule, ChainStep, FullnessCertificate, Idempotent,
    LiftOutcome, MatrixMoritaOutcome, MoritaWitness,
};
pub use tensor::{
    tensor_product, tensor_with_left_module, Provenance, TensorPath, TensorProduct,
};

#[cfg(test)]
mod concurrency_contract {
    // Every structure is immutable after construction and freely shareable
    // across threads.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::KleeneAlgebra>();
        assert_send_sync::<crate::KleeneModule>();
        assert_send_sync::<crate::ModuleHom>();
        assert_send_sync::<crate::AlgebraHom>();
        assert_send_sync::<crate::Congruence>();
        assert_send_sync::<crate::TensorProduct>();
        assert_send_sync::<crate::MoritaWitness>();
    }
}
