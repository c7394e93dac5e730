//! Named finite systems, Cartan-matrix real roots and the classified affine
//! families.

mod affine;
mod build;
mod matrix;
mod names;

pub use affine::{a_nn_quotient, a_nn_x, family};
pub use build::{ann_kernel_vector, build};
pub use matrix::{height, real_roots_from_matrix, RealRoots};
pub use names::{CatalogEntry, CatalogName, FamilyParams};

use crate::error::Result;
use crate::finite::FiniteRootSystem;
use crate::symbolic::SymbolicRootSystem;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CatalogSystem {
    Finite(FiniteRootSystem),
    Symbolic(SymbolicRootSystem),
}

pub fn construct(entry: &CatalogEntry) -> Result<CatalogSystem> {
    Ok(match entry {
        CatalogEntry::Finite(n) => CatalogSystem::Finite(build(n)?),
        CatalogEntry::AnnX { n, p, q, k } => CatalogSystem::Symbolic(a_nn_x(*n, *p, *q, *k)?),
        CatalogEntry::Family { cl, k, params } => CatalogSystem::Symbolic(family(cl, *k, params)?),
    })
}
