//! Fractional calculus of complex order on quaternionic slice domains.
//!
//! The crate provides exact symbolic and numerical Riemann-Liouville and
//! Caputo operators of complex order, the fractional slice Cauchy-Riemann
//! operators built from them, and a verification harness exercising the
//! identities that relate them.
//!
//! Everything is generic over the floating-point scalar via [`scalar::Real`];
//! the aliases at the crate root fix `f64`.

pub mod fracnum;
pub mod fracsym;
pub mod harness;
pub mod quat;
pub mod scalar;
pub mod sliceops;
pub mod specfun;
pub mod theorems;

pub use scalar::Real;

/// `f64` instantiations of the core types.
pub type PlaneComplex64 = scalar::PlaneComplex<f64>;
pub type Quaternion64 = quat::Quaternion<f64>;
pub type ImaginaryUnit64 = quat::ImaginaryUnit<f64>;
pub type ComplexOrder64 = fracnum::ComplexOrder<f64>;
pub type QuadratureConfig64 = fracnum::QuadratureConfig<f64>;
pub type MonomialTerm64 = fracsym::MonomialTerm<f64>;
pub type MonomialSum64 = fracsym::MonomialSum<f64>;
pub type SliceDomain64 = sliceops::SliceDomain<f64>;
pub type OrderPair64 = sliceops::OrderPair<f64>;
pub type SliceFunction64 = sliceops::SliceFunction<f64>;
pub type IdentityOutcome64 = theorems::IdentityOutcome<f64>;
pub type RunConfig64 = harness::RunConfig<f64>;
