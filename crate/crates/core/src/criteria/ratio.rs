use rayon::prelude::*;

use super::report_exp;
use crate::domain::{BidiscPoint, CriterionReport, Radii, TheoremId, Verdict};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::index::max_modulus;
use crate::domain::AnalyticFunction;
use crate::scalar::Scalar;
use crate::weights::WeightField;

/// `p1 = max over the grid of M(R'' / L(z0)) / M(R' / L(z0))`.
pub fn check_modulus_ratio<T: Scalar>(
    f: &AnalyticFunction<T>,
    l: &WeightField<T>,
    grid: &Grid<T>,
    r_inner: &Radii<T>,
    r_outer: &Radii<T>,
    samples: usize,
) -> Result<CriterionReport> {
    for j in 0..2 {
        if !(r_inner.get(j) < r_outer.get(j)) {
            return Err(Error::InvalidParameter(format!(
                "need R' < R'' componentwise, got ({}) and ({})",
                r_inner.describe(),
                r_outer.describe()
            )));
        }
    }
    if !r_outer.within(l.beta) {
        return Err(Error::InvalidParameter(format!("R'' = ({}) exceeds beta = {}", r_outer.describe(), l.beta)));
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    let per_point: Vec<(BidiscPoint<T>, T, T)> = grid
        .points
        .par_iter()
        .map(|z0| {
            let w = l.eval(z0)?;
            let inner = max_modulus(f, z0, &r_inner.over_weight(w)?, samples)?.m;
            let outer = max_modulus(f, z0, &r_outer.over_weight(w)?, samples)?.m;
            Ok((*z0, inner, outer))
        })
        .collect::<Result<_>>()?;
    let rep = CriterionReport::new(TheoremId::ModulusRatio, Verdict::Holds)
        .sampling("grid", grid.descriptor.to_string())
        .sampling("points", grid.len())
        .sampling("skeleton", samples);
    if let Some((z, _, _)) = per_point.iter().find(|p| p.1 == T::zero()) {
        let mut rep = rep.because("inner max modulus is zero").at(z);
        rep.verdict = Verdict::Fails;
        return Ok(rep);
    }
    let (worst, log_p1) = per_point
        .iter()
        .map(|(z, a, b)| (*z, b.ln() - a.ln()))
        .fold((grid.points[0], T::neg_infinity()), |acc, v| if v.1 > acc.1 { v } else { acc });
    Ok(rep.witness("p1", report_exp(log_p1)).witness("log_p1", log_p1.as_f64()).at(&worst))
}

/// `(-sum_j ln(1 - r'_j) + ln p1) / ln min(r''_1, r''_2)`, an upper bound for
/// the local index once floored.
pub fn index_bound_from_ratio<T: Scalar>(r_inner: &Radii<T>, r_outer: &Radii<T>, p1: T) -> Result<T> {
    if !(r_inner.r1() < T::one() && r_inner.r2() < T::one()) {
        return Err(Error::DomainViolation(format!("R' = ({}) must lie in (0, 1)", r_inner.describe())));
    }
    let m = r_outer.r1().min(r_outer.r2());
    if !(m > T::one()) {
        return Err(Error::DomainViolation(format!("R'' = ({}) must exceed 1", r_outer.describe())));
    }
    if !(p1 >= T::one()) {
        return Err(Error::InvalidParameter(format!("p1 = {p1} must be at least 1")));
    }
    let num = -(-r_inner.r1()).ln_1p() - (-r_inner.r2()).ln_1p() + p1.ln();
    Ok(num / m.ln())
}
