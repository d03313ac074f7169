//! L-index in joint variables for analytic functions on the unit bidisc.
//!
//! The numeric kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar for common use.

pub mod coefficients;
pub mod criteria;
pub mod domain;
pub mod error;
pub mod example1;
pub mod fft;
pub mod grid;
pub mod index;
pub mod scalar;
pub mod series;
pub mod weights;

pub use coefficients::{
    default_extraction_radii, diagonal_max, eval_series, log_band_sum, normalize, normalize_with,
    taylor_auto, taylor_cauchy, taylor_closed_form, CauchyOptions, CoeffTable, NormDerivGrid, Transform,
};
pub use criteria::{
    check_hayman, check_kth_max_modulus, check_local_dominance, check_modulus_ratio, check_pure_partials,
    check_tail_dominance, find_main_polynomial, index_bound_from_ratio, verify_main_polynomial,
    MainPolySearchResult,
};
pub use domain::{
    AnalyticFunction, BidiscPoint, ClosedForm, CriterionReport, LogMagnitude, MultiIndex, Polynomial, Radii,
    Representation, TheoremId, Verdict, WitnessValue,
};
pub use error::{Error, Result};
pub use grid::{Grid, PolarSampling};
pub use index::{
    index_profile, local_index, max_modulus, maximal_term, q_constant, IndexOptions, IndexProfile, IndexValue,
    LocalIndexResult, MaximalTermResult,
};
pub use scalar::Scalar;
pub use weights::{
    comparability, lambda_bounds, lambda_refined, scaled_weight, validate_weight, LambdaEstimate, WeightFamily,
    WeightField,
};

pub type BidiscPoint64 = BidiscPoint<f64>;
pub type Radii64 = Radii<f64>;
pub type AnalyticFunction64 = AnalyticFunction<f64>;
pub type WeightField64 = WeightField<f64>;
pub type CoeffTable64 = CoeffTable<f64>;
pub type NormDerivGrid64 = NormDerivGrid<f64>;
pub type LocalIndexResult64 = LocalIndexResult<f64>;
pub type Grid64 = Grid<f64>;

pub type BidiscPoint32 = BidiscPoint<f32>;
pub type Radii32 = Radii<f32>;
pub type AnalyticFunction32 = AnalyticFunction<f32>;
pub type WeightField32 = WeightField<f32>;
pub type CoeffTable32 = CoeffTable<f32>;
