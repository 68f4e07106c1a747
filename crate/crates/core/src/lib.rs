//! Exact analysis of finite symplectic linear groups: symplectic reflections,
//! the reflection subgroup and the resolution obstruction it certifies,
//! fixed-space stratifications, and symplectic eigenvalues of 2-forms.

pub mod catalog;
pub mod cli;
pub mod field;
pub mod group;
pub mod io;
pub mod linalg;
pub mod reflection;
pub mod spectrum;
pub mod strata;

pub use field::{BigRational, CyclotomicNumber, FieldError};
pub use group::{FiniteMatrixGroup, GroupError, SubgroupHandle, DEFAULT_MAX_ORDER};
pub use io::{AnalysisReport, GroupSpec};
pub use linalg::{ExactMatrix, Subspace};
pub use reflection::{Verdict, VerdictKind};
