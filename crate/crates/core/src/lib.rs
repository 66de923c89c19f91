//! n-cycle permutation polynomials of the form `x^r h(x^s)` over GF(p^m).
//!
//! * [`field`]: arithmetic in GF(p^m), primitive elements, subgroups of roots of unity.
//! * [`poly`], [`perm`]: polynomial forms and the brute-force permutation oracle.
//! * [`criteria`]: the analytic n-cycle tests on the subgroup `mu_ell`.
//! * [`constructor`]: the cyclotomic (Vandermonde) construction and subfield lifts.
//! * [`families`]: explicit high-index and low-index families.
//! * [`search`], [`report`]: sweeps and serializable verification reports.

pub mod arith;
pub mod constructor;
pub mod criteria;
pub mod error;
pub mod families;
pub mod field;
pub mod interp;
pub mod perm;
pub mod poly;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, FieldSpec, Subgroup};
pub use perm::{to_table, CycleStructure, PermTable, Transform};
pub use poly::{FieldFunction, IndexForm, PiecewiseForm, SparsePoly};
