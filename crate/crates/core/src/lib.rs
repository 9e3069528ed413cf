//! Exact tools for minimal log discrepancies of cyclic quotient and
//! hyperquotient singularities: spectra of small-index quotients, floor-sum
//! region emptiness, and brute-force checks of the lemmas they feed.

pub mod error;
pub mod hyperquot;
pub mod pool;
pub mod qarith;
pub mod quotient;
pub mod regions;
pub mod spectrum;
pub mod verifiers;

pub use error::{Error, Result};
pub use qarith::{Interval, Rat};
pub use quotient::CyclicQuotient;
