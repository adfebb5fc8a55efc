//! Exact composition and inversion of multivariate formal power series.

pub mod autolab;
pub mod cli;
pub mod coeff;
pub mod error;
pub mod format;
pub mod graded;
pub mod inversion;
pub mod multiindex;
mod poly;
pub mod sample;
pub mod series;

pub use coeff::{Field, Rational};
pub use error::{Error, Result};
pub use multiindex::{MultiIndex, SeriesContext};
pub use poly::{Limits, Terms};
pub use series::{Order, TruncatedSeriesMap};
