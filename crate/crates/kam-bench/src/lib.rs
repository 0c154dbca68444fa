//! Shared fixtures for the workbench benchmarks.

use std::sync::Arc;

use kam_core::{KleeneAlgebra, KleeneModule, Limits};

pub fn limits() -> Limits {
    Limits::default()
}

pub fn bool2() -> Arc<KleeneAlgebra> {
    KleeneAlgebra::bool2()
}

pub fn rel3() -> Arc<KleeneAlgebra> {
    KleeneAlgebra::rel(3, &limits()).expect("rel(3) fits the default bounds")
}

pub fn free2() -> Arc<KleeneModule> {
    kam_core::free_module(&bool2(), 2, true, true, &limits()).expect("free rank 2")
}
