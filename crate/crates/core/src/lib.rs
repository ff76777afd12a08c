//! Finite-field hypergeometric character sums, point-count and modular-form
//! oracles, and Hecke traces for the five arithmetic triangle groups.

pub mod analytic;
pub mod charsum;
pub mod curves;
pub mod error;
pub mod field;
pub mod hgm;
pub mod modform;
pub mod suites;
pub mod trace;

pub use charsum::{
    bracket, clausen_check, hp_sum, jacobi_sum, np_sum, AlgebraicValue, HpNormalization, HpValue, NpKernel,
};
pub use curves::{count_points, CountOutcome, CurveSpec, FieldRef};
pub use error::{Error, Result};
pub use field::{MultChar, PrimeField, QuadExtField};
pub use hgm::{triangle_table, HGDatum, TriangleGroupRow};
pub use modform::{load_fixture, NewformFixture, QExpansion};
pub use suites::{run_suite, Suite, SuiteConfig, SuiteReport};
pub use trace::{a_gamma, hecke_trace, SymPolyFm, TraceOptions, TraceReport};
