//! The worked example `F = exp(1 / ((1 - z1)(1 - z2)))` with the weight
//! `l1 = s / ((1-|z1|)^2 (1-|z2|))`, `l2 = s / ((1-|z1|)(1-|z2|)^2)`.
//!
//! With `s = 1` the weight is below `beta / (1 - |z_j|)` near the origin; the
//! shipped variant uses `s = 2 beta`, which only enlarges `L` and so cannot
//! raise a local index.

use crate::domain::{AnalyticFunction, ClosedForm};
use crate::error::Result;
use crate::grid::{Grid, PolarSampling};
use crate::index::{index_profile, IndexOptions, IndexProfile};
use crate::scalar::Scalar;
use crate::weights::WeightField;

pub const BETA: f64 = 2.0;
pub const EXPONENTS: [[f64; 2]; 2] = [[2.0, 1.0], [1.0, 2.0]];
pub const LEVELS: [f64; 3] = [0.5, 0.7, 0.9];
pub const CAP: usize = 12;
pub const SAMPLING: PolarSampling = PolarSampling { n_r: 8, n_theta: 8 };

pub fn function<T: Scalar>() -> AnalyticFunction<T> {
    AnalyticFunction::closed_form(ClosedForm::ExpReciprocal).expect("exp_reciprocal has no parameters")
}

/// The weight with scale `s`; [`weight`] uses `s = 2 beta`.
pub fn weight_with_scale<T: Scalar>(scale: T) -> Result<WeightField<T>> {
    let e = EXPONENTS.map(|row| row.map(T::lit));
    WeightField::boundary_power(e, scale, T::lit(BETA))
}

pub fn weight<T: Scalar>() -> WeightField<T> {
    weight_with_scale(T::lit(2.0 * BETA)).expect("valid example weight")
}

/// Index profile over polar exhaustion grids.
pub fn profile<T: Scalar>(levels: &[T], sampling: PolarSampling, cap: usize) -> Result<IndexProfile<T>> {
    let grids = Grid::exhaustion(levels, sampling)?;
    index_profile(&function(), &weight(), &grids, IndexOptions::new(cap))
}
