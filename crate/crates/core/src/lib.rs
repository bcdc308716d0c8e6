//! Symmetric FEM-BEM coupling for the Laplace transmission problem in two
//! dimensions.
//!
//! A bounded polygonal domain Ω carries a conforming Lagrange finite element
//! discretization of `−div(A∇u) = f`; the unbounded complement is handled by
//! boundary integral operators on Γ = ∂Ω. The coupled Galerkin system
//! determines the interior solution `u` and the exterior normal derivative
//! `φ` on Γ.

pub mod bem;
pub mod coupling;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod linalg;
pub mod manufactured;
pub mod mesh;
pub mod norms;
pub mod quadrature;
pub mod study;

pub use error::{Error, Result};
