//! Exact and modular q-series arithmetic for the reciprocal of the false theta
//! function `Psi(-q^t, q)`, together with the identity catalog, congruence
//! checker and elementary number theory used to verify its coefficient
//! congruences.

pub mod arith;
pub mod congruence;
pub mod error;
pub mod expr;
pub mod identities;
pub mod qfactory;
pub mod report;
pub mod series;

pub use congruence::{ClaimFamily, CongruenceClaim};
pub use error::{Error, Result};
pub use expr::{evaluate, evaluate_str, parse, Evaluator, Expr, ParseError, SeriesCache};
pub use identities::IdentityEntry;
pub use qfactory::{NamedSeries, QuadSumSpec, Sign, SignMode, SignedMonomial, SumRange};
pub use report::{Status, VerificationReport, Violation};
pub use series::{CoeffRing, TruncatedSeries};
