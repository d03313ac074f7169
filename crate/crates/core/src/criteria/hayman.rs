use rayon::prelude::*;

use super::{derivatives_at, log_derivative, log_le, log_weight_power, report_exp};
use crate::coefficients::normalize_with;
use crate::domain::{
    degree_band, degree_enumerate, AnalyticFunction, BidiscPoint, CriterionReport, TheoremId, Verdict,
};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{ln_factorial, log_add_exp, Scalar};
use crate::weights::WeightField;

/// Share of the tail sum the top degree band may carry before the truncated
/// tail is reported as unsound.
pub const TAIL_TRUNCATION_SHARE: f64 = 0.01;

fn grid_check<T: Scalar>(grid: &Grid<T>) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    Ok(())
}

/// Hayman-type band comparison with `p`: the smallest `c` such that the
/// derivatives of total order `p + 1`, divided by `l^J`, are bounded by `c`
/// times the largest of those of order `<= p`. No factorials enter.
///
/// With `index_hint = Some(N)` the report also records whether
/// `c_min <= ((N + 1)!)^2`.
pub fn check_hayman<T: Scalar>(
    f: &AnalyticFunction<T>,
    l: &WeightField<T>,
    grid: &Grid<T>,
    p: usize,
    index_hint: Option<usize>,
) -> Result<CriterionReport> {
    grid_check(grid)?;
    let per_point: Vec<(BidiscPoint<T>, T, T)> = grid
        .points
        .par_iter()
        .map(|z| {
            let t = derivatives_at(f, z, p + 1)?;
            let w = l.eval(z)?;
            let val = |k| log_derivative(&t, k) - log_weight_power(w, k);
            let num = degree_band(p + 1).map(val).fold(T::neg_infinity(), T::max);
            let den = degree_enumerate(p).into_iter().map(val).fold(T::neg_infinity(), T::max);
            Ok((*z, num, den))
        })
        .collect::<Result<_>>()?;
    let mut rep = CriterionReport::new(TheoremId::Hayman, Verdict::Holds)
        .witness("p", p)
        .sampling("grid", grid.descriptor.to_string())
        .sampling("points", grid.len());
    let zero_den: Vec<_> = per_point.iter().filter(|v| v.2 == T::neg_infinity()).collect();
    if let Some(first) = zero_den.first() {
        rep = rep
            .because(format!("all derivatives up to order {p} vanish at {} grid point(s)", zero_den.len()))
            .witness("denominator_zero_points", zero_den.len())
            .at(&first.0);
        rep.verdict = Verdict::Fails;
        return Ok(rep);
    }
    let (worst, log_c) = per_point
        .iter()
        .map(|(z, n, d)| (*z, if *n == T::neg_infinity() { T::neg_infinity() } else { *n - *d }))
        .fold((grid.points[0], T::neg_infinity()), |acc, v| if v.1 > acc.1 { v } else { acc });
    rep = rep.witness("c_min", report_exp(log_c)).at(&worst);
    if let Some(n) = index_hint {
        let bound = T::lit(2.0) * ln_factorial::<T>(n + 1);
        rep = rep
            .witness("index_hint", n)
            .witness("necessity_bound", report_exp(bound))
            .witness("within_necessity_bound", log_le(log_c, bound));
    }
    Ok(rep)
}

/// Series-sum criterion with moduli: at every grid point
/// `sum_{||K|| <= N} a*_K >= c * sum_{N < ||K|| <= cap} a*_K`.
pub fn check_tail_dominance<T: Scalar>(
    f: &AnalyticFunction<T>,
    l: &WeightField<T>,
    grid: &Grid<T>,
    n: usize,
    c: T,
    cap: usize,
) -> Result<CriterionReport> {
    grid_check(grid)?;
    if cap <= n {
        return Err(Error::InvalidParameter(format!("cap {cap} must exceed N = {n}")));
    }
    if !(c > T::zero()) {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    // (point, ln head, ln tail, ln top band)
    let per_point: Vec<(BidiscPoint<T>, T, T, T)> = grid
        .points
        .par_iter()
        .map(|z| {
            let t = derivatives_at(f, z, cap)?;
            let g = normalize_with(&t, l.eval(z)?)?;
            let sum = |lo: usize, hi: usize| {
                (lo..=hi).flat_map(degree_band).fold(T::neg_infinity(), |acc, k| {
                    // moduli of derivatives: a*_K = |F^(K)| / (K! l^K)
                    let v = if log_derivative(&t, k) == T::neg_infinity() { T::neg_infinity() } else { g.log_value(k) };
                    log_add_exp(acc, v)
                })
            };
            Ok((*z, sum(0, n), sum(n + 1, cap), sum(cap, cap)))
        })
        .collect::<Result<_>>()?;
    let log_c = c.ln();
    let mut failing = 0usize;
    let mut truncated = 0usize;
    let mut worst = (grid.points[0], T::infinity());
    for (z, head, tail, top) in &per_point {
        let ratio = if *tail == T::neg_infinity() { T::infinity() } else { *head - *tail };
        if ratio < worst.1 {
            worst = (*z, ratio);
        }
        if !log_le(log_c + *tail, *head) {
            failing += 1;
        } else if *top > T::lit(TAIL_TRUNCATION_SHARE).ln() + *tail {
            truncated += 1;
        }
    }
    let verdict = if failing > 0 {
        Verdict::Fails
    } else if truncated > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    };
    let mut rep = CriterionReport::new(TheoremId::TailDominance, verdict)
        .witness("n", n)
        .witness("c", c.as_f64())
        .witness("min_head_over_tail", report_exp(worst.1))
        .witness("failing_points", failing)
        .witness("truncation_flagged_points", truncated)
        .sampling("grid", grid.descriptor.to_string())
        .sampling("points", grid.len())
        .sampling("cap", cap)
        .at(&worst.0);
    if verdict == Verdict::Inconclusive {
        rep = rep.because("truncation unsound: top degree band carries more than 1% of the tail");
    }
    Ok(rep)
}
