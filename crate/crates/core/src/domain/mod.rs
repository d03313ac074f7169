//! Points, radii, multi-indices, function representations and report envelopes.

mod function;
mod log_magnitude;
mod multi_index;
mod point;
mod report;

pub use function::{AnalyticFunction, ClosedForm, Evaluator, Polynomial, Representation};
pub(crate) use function::powers;
pub use log_magnitude::LogMagnitude;
pub use multi_index::{degree_band, degree_enumerate, simplex_len, MultiIndex};
pub use point::{BidiscPoint, Radii};
pub use report::{CriterionReport, ReportPoint, TheoremId, Verdict, WitnessValue};

/// Relative slack applied to every verdict inequality.
pub const RELATIVE_SLACK: f64 = 1e-9;
