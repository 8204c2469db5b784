//! Numerical and exact verification of Hurwitz-zeta identities for
//! integrals with hyperbolic kernels.

pub mod exact;
pub mod dual;
pub mod quadrature;
pub mod specfun;
pub mod expr;
pub mod catalog;
pub mod verify;
