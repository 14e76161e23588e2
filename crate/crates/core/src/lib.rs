//! Exact computations with low-dimensional filiform Lie algebras over prime
//! fields: structure constants, isotopism invariants, isomorphism and
//! isotopism decisions, and exhaustive classification.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod families;
pub mod field;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod morphism;

pub use algebra::{BasisChange, Quotient, StructureTable};
pub use error::{Error, Result};
pub use families::{build, Family};
pub use classify::{classify, enumerate_candidates, identify, verify_paper, ClassificationReport, ClassifyOptions};
pub use field::{field_inv, is_square, Field, FieldSpec, Fp, Rationals, Scalar};
pub use invariants::{d_sequence, fingerprint, z1, z2, Fingerprint};
pub use io::{parse_algebra, render_algebra, AnyTable, ReportFile};
pub use linalg::{kernel, rref, solve, superspaces_of, Matrix, Subspace};
