//! Exact-arithmetic calculator for the algebra of square groups, quadratic
//! pair modules and their tensor products, sign groups and their group
//! rings, Hg-functionals, and positive Clifford / pin group arithmetic.

pub mod abelian;
pub mod clifford;
pub mod error;
pub mod hg;
pub mod lattice;
pub mod nil2;
pub mod monoidal;
pub mod object_format;
pub mod qpm;
pub mod signgroup;
pub mod report;
pub mod sqgroup;
pub mod suites;
pub mod tracks;

pub use error::QpError;
