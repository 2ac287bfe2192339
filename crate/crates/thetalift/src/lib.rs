//! Exact computations around the local theta correspondence for the
//! quaternionic dual pairs: Harish-Chandra parameters and their lifts,
//! a symbolic Fock model, Clifford algebra centers, radical-tower matrix
//! identities and a small p-adic sign ledger.
//!
//! All arithmetic is exact. Generic code is written against
//! [`scalar::Field`]; the aliases below fix the concrete types used by the
//! rest of the crate.

pub mod cliffspin;
pub mod exactverify;
pub mod fockmodel;
pub mod hctheta;
pub mod matrix;
pub mod padicsym;
pub mod quaternion;
pub mod rootcomb;
pub mod scalar;

/// Arbitrary precision rationals.
pub type Rational = num_rational::BigRational;
/// Gaussian rationals `a + b·√−1`.
pub type GaussianRational = scalar::Gaussian<Rational>;
/// A weight: exact rational coordinates in the standard basis.
pub type Weight = Vec<Rational>;
