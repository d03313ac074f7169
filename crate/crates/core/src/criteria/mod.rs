//! Checkers for the local-dominance, max-modulus, Hayman and series-sum
//! criteria, and the main-polynomial search and verification.
//!
//! Every checker returns a [`CriterionReport`](crate::CriterionReport).
//! Inequalities are accepted with relative slack
//! [`RELATIVE_SLACK`](crate::domain::RELATIVE_SLACK); a `Fails` verdict needs a
//! violation beyond it.

mod dominance;
mod hayman;
mod main_poly;
mod ratio;

pub use dominance::{check_kth_max_modulus, check_local_dominance, check_pure_partials};
pub use hayman::{check_hayman, check_tail_dominance, TAIL_TRUNCATION_SHARE};
pub use main_poly::{
    find_main_polynomial, main_poly_constant, verify_main_polynomial, MainPolySearchResult, SearchStep,
};
pub use ratio::{check_modulus_ratio, index_bound_from_ratio};

use crate::coefficients::{taylor_auto, CoeffTable};
use crate::domain::{BidiscPoint, MultiIndex, RELATIVE_SLACK};
use crate::error::Result;
use crate::grid::PolarSampling;
use crate::scalar::{ln_factorial, Scalar};

/// Polydisc sampling used by the checkers unless told otherwise.
pub const DEFAULT_POLYDISC_SAMPLING: PolarSampling = PolarSampling { n_r: 4, n_theta: 16 };
/// Skeleton samples per coordinate used by the checkers unless told otherwise.
pub const DEFAULT_SKELETON_SAMPLES: usize = 32;

/// Terms of an extracted table below this share of its largest term are
/// treated as zero.
const EXTRACTED_ZERO: f64 = 1e-13;

/// `ln(1 + slack)`.
pub(crate) fn log_slack<T: Scalar>() -> T {
    T::lit(RELATIVE_SLACK).ln_1p()
}

/// `a <= b` in the log domain up to the relative slack.
pub(crate) fn log_le<T: Scalar>(a: T, b: T) -> bool {
    a == T::neg_infinity() || a <= b + log_slack::<T>()
}

/// Derivative table of order `order` at `z`: exact where possible, else a
/// Cauchy extraction at the default radii around `z`.
pub(crate) fn derivatives_at<T: Scalar>(
    f: &crate::domain::AnalyticFunction<T>,
    z: &BidiscPoint<T>,
    order: usize,
) -> Result<CoeffTable<T>> {
    taylor_auto(f, z, order)
}

/// `ln |F^{(K)}(z)|` from a table at `z`; `-inf` for a vanishing derivative.
pub(crate) fn log_derivative<T: Scalar>(table: &CoeffTable<T>, k: MultiIndex) -> T {
    let e = table.get(k);
    if e.is_zero() || negligible(table, k) {
        return T::neg_infinity();
    }
    e.log_abs + ln_factorial::<T>(k.k1) + ln_factorial::<T>(k.k2)
}

/// True when `b_K` of an extracted table is indistinguishable from round-off.
fn negligible<T: Scalar>(table: &CoeffTable<T>, k: MultiIndex) -> bool {
    let Some(rho) = table.extraction_radii else {
        return false;
    };
    let (l1, l2) = (rho.r1().ln(), rho.r2().ln());
    let term = |k: MultiIndex, log_abs: T| {
        log_abs + T::from_usize_lossy(k.k1) * l1 + T::from_usize_lossy(k.k2) * l2
    };
    let top = table
        .entries()
        .filter(|(_, e)| !e.is_zero())
        .map(|(j, e)| term(j, e.log_abs))
        .fold(T::neg_infinity(), T::max);
    term(k, table.get(k).log_abs) < top + T::lit(EXTRACTED_ZERO).ln()
}

/// `ln(l1^k1 l2^k2)`.
pub(crate) fn log_weight_power<T: Scalar>(w: [T; 2], k: MultiIndex) -> T {
    T::from_usize_lossy(k.k1) * w[0].ln() + T::from_usize_lossy(k.k2) * w[1].ln()
}

/// Report value of a log-domain quantity.
pub(crate) fn report_exp<T: Scalar>(log_v: T) -> f64 {
    log_v.as_f64().exp()
}
