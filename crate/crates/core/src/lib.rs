//! MDS codes from index-2 subgroups of elliptic curves over small finite fields.
//!
//! The pipeline runs field arithmetic ([`gf`]), curve enumeration and group
//! structure ([`ec`]), Riemann-Roch bases ([`func`]), evaluation codes
//! ([`code`]) and verification ([`analysis`]).

pub mod analysis;
pub mod code;
pub mod ec;
pub mod func;
pub mod gf;
pub mod linalg;
pub mod poly;
pub mod suites;

pub use analysis::{Budget, MdsReport, MethodResult, SchurReport, Verdict};
pub use code::{CodeError, LinearCode, ParityCase};
pub use ec::{Curve, EcError, GroupStructure, Point, Subgroup};
pub use func::{Divisor, FuncError, FunctionField, RationalFunction};
pub use gf::{Fe, Field, FieldCtx, GfError};
pub use linalg::Matrix;
