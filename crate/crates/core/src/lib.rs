//! Schur stability of real monic polynomials.
//!
//! The primary test is [`engine::run_algorithm`]: an ℓ1-norm test on the
//! coefficients, repeated on the characteristic polynomials of iterated
//! linear recurrences until one passes. It is sufficient only, so the crate
//! also carries two independent references: an exact Jury table
//! ([`jury`]) and a floating-point simultaneous root finder ([`roots`]).
//! [`region`] scans parameter planes and [`cases`] holds worked
//! applications (Cournot duopoly/triopoly, Ricker competition).

pub mod cases;
pub mod engine;
pub mod error;
pub mod jury;
pub mod poly;
pub mod region;
pub mod roots;
pub mod scalar;

pub use engine::{
    check_l1, degree2_st, iterate_stage, necessary_checks, run_algorithm, sign_pattern_exact, substitute_general,
    AlgoConfig, Certificate, CertificateJson, StageTrace, Verdict,
};
pub use error::{Error, Result};
pub use jury::{jury_table, jury_verdict, JuryTable, JuryVerdict};
pub use poly::{mod_reduce, normalize, AnyMonic, GeneralPolynomial, MonicPolynomial};
pub use region::{c2_membership, c3_membership, scan_region, Axis, GridSpec, Mapping, RegionGrid, Truth};
pub use roots::{find_roots, is_schur_numeric, RootSet, SchurNumeric};
pub use scalar::{Backend, Coeff, Rational, Scalar};
