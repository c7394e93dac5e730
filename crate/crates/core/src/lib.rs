//! Exact computations with finite and affine generalized root systems.

pub mod catalog;
pub mod classify;
pub mod coset;
pub mod error;
pub mod f2;
pub mod finite;
pub mod io;
pub mod iso;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod symbolic;

pub use coset::CosetSet;
pub use error::{Error, ParseError, Result};
pub use f2::F2Subset;
pub use finite::{AxiomReport, FiniteRootSystem, Root, Verdict};
pub use lattice::Lattice;
pub use linalg::BilinearSpace;
pub use rational::{Rational, RationalVector};
pub use symbolic::SymbolicRootSystem;
