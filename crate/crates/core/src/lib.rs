//! Exact counting of monic irreducible polynomials over finite fields, and
//! exact or rigorously certified checks of the monotonicity and
//! log-convexity of those counts.

pub mod arith;
pub mod bounds;
pub mod count;
pub mod error;
pub mod inequal;
pub mod interval;
pub mod oracle;
pub mod thresholds;

pub use count::{
    closed_form_count, count_table, irreducible_count, BigCount, CountTable, PrimePower,
};
pub use error::{Error, Result};
pub use inequal::{DecideOptions, Method, Property, Verdict};
