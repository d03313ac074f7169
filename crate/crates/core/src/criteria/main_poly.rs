use serde::Serialize;

use super::{log_le, log_slack, report_exp};
use crate::coefficients::{horner, CoeffTable};
use crate::domain::{
    degree_band, BidiscPoint, CriterionReport, LogMagnitude, MultiIndex, Radii, TheoremId, Verdict,
};
use crate::error::{Error, Result};
use crate::grid::unit_roots;
use crate::scalar::{ln_factorial, log_add_exp, Scalar};
use crate::weights::WeightField;

/// One iteration of the radius search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchStep<T> {
    pub m: usize,
    pub r: LogMagnitude<T>,
    pub mu: LogMagnitude<T>,
    pub s: usize,
    /// Largest other candidate term; zero for an empty candidate set.
    pub mu_star: LogMagnitude<T>,
    pub s_star: Option<usize>,
    /// Largest candidate degree scanned at this step.
    pub range: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainPolySearchResult<T> {
    pub c_log: LogMagnitude<T>,
    pub d: T,
    pub eta_log: LogMagnitude<T>,
    pub m0: usize,
    pub r_log: LogMagnitude<T>,
    pub k0: usize,
    /// `s_0 <= n0` when the pointwise index `n0` was supplied.
    pub s0_within_index: Option<bool>,
    pub trace: Vec<SearchStep<T>>,
}

impl<T: Scalar> MainPolySearchResult<T> {
    pub fn r(&self) -> T {
        self.r_log.to_linear()
    }

    /// `c` is an integer, so it is rounded while that is exact.
    pub fn c(&self) -> T {
        let c = self.c_log.to_linear();
        if c < T::lit(4503599627370496.0) {
            c.round()
        } else {
            c
        }
    }
}

/// `ln c` for `c = 2((N+1)^3 + 6 (N+3)!)`.
pub fn main_poly_constant<T: Scalar>(n: usize) -> T {
    let cube = T::lit(3.0) * T::from_usize_lossy(n + 1).ln();
    let fact = T::lit(6.0).ln() + ln_factorial::<T>(n + 3);
    T::lit(2.0).ln() + log_add_exp(cube, fact)
}

/// Radius search for a main polynomial from the diagonal maxima `a_k`.
///
/// At step `m` the radius is `r_m = d / ((d+1) c^m)`; `mu_m` is the largest
/// `a_k r_m^k` over the candidates (the whole sequence at step 0, `k <= s_{m-1}`
/// afterwards) and the search stops once every other candidate is below
/// `mu_m / c`.
///
/// Step 0 compares against the whole sequence rather than `k <= n0`: a stop
/// there has no earlier step to bound the degrees above `n0`. The supplied
/// `n0` is only checked against `s_0`.
pub fn find_main_polynomial<T: Scalar>(
    a: &[LogMagnitude<T>],
    n: usize,
    d: T,
    n0: Option<usize>,
) -> Result<MainPolySearchResult<T>> {
    if !(d > T::zero() && d.is_finite()) {
        return Err(Error::InvalidParameter(format!("d = {d} must be positive")));
    }
    if a.is_empty() || a.iter().all(|v| v.is_zero()) {
        return Err(Error::NoNonzeroCoefficient);
    }
    let log_c = main_poly_constant::<T>(n);
    let log_base = d.ln() - d.ln_1p();
    let eta = log_base - T::from_usize_lossy(2 * (n + 1)) * log_c;
    let limit = 10 * (2 * n + 2);
    let mut range = a.len() - 1;
    let mut trace = Vec::new();
    let mut m = 0;
    loop {
        if m > limit {
            return Err(Error::IterationOverrun(limit));
        }
        let log_r = log_base - T::from_usize_lossy(m) * log_c;
        let term = |k: usize| {
            if a[k].is_zero() {
                T::neg_infinity()
            } else {
                a[k].log_abs + T::from_usize_lossy(k) * log_r
            }
        };
        let mut s = 0;
        let mut mu = T::neg_infinity();
        for k in 0..=range {
            if term(k) > mu {
                mu = term(k);
                s = k;
            }
        }
        let mut s_star = None;
        let mut mu_star = T::neg_infinity();
        for k in (0..=range).filter(|&k| k != s) {
            if term(k) > mu_star {
                mu_star = term(k);
                s_star = Some(k);
            }
        }
        trace.push(SearchStep {
            m,
            r: LogMagnitude::from_log(log_r),
            mu: LogMagnitude::from_log(mu),
            s,
            mu_star: LogMagnitude::from_log(mu_star),
            s_star,
            range,
        });
        if mu_star == T::neg_infinity() || mu_star <= mu - log_c + log_slack::<T>() {
            return Ok(MainPolySearchResult {
                c_log: LogMagnitude::from_log(log_c),
                d,
                eta_log: LogMagnitude::from_log(eta),
                m0: m,
                r_log: LogMagnitude::from_log(log_r),
                k0: s,
                s0_within_index: n0.map(|v| trace[0].s <= v),
                trace,
            });
        }
        range = s;
        m += 1;
    }
}

/// Checks that the degree-`k0` band of `coeffs` is a main polynomial on the
/// skeleton `T[z0, R / L(z0)]`:
/// `max |sum_{||K|| != k0} b_K w^K| <= (1/2) max_{||J|| = k0} |b_J| rho^J`.
pub fn verify_main_polynomial<T: Scalar>(
    coeffs: &CoeffTable<T>,
    l: &WeightField<T>,
    z0: &BidiscPoint<T>,
    r: &Radii<T>,
    k0: usize,
    samples: usize,
) -> Result<CriterionReport> {
    if coeffs.center != *z0 {
        return Err(Error::InvalidParameter(format!(
            "table is centered at ({}), not ({})",
            coeffs.center.describe(),
            z0.describe()
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidSampleCount { count: samples, reason: "skeleton needs samples" });
    }
    let rho = r.over_weight(l.eval(z0)?)?;
    z0.check_polydisc(&rho)?;
    if let Some(ext) = coeffs.extraction_radii {
        let tol = T::one() + T::lit(1e-12);
        if rho.r1() > ext.r1() * tol || rho.r2() > ext.r2() * tol {
            return Err(Error::DomainViolation(format!(
                "skeleton radii ({}) exceed the extraction radii ({})",
                rho.describe(),
                ext.describe()
            )));
        }
    }
    let (l1, l2) = (rho.r1().ln(), rho.r2().ln());
    let band = degree_band(k0)
        .map(|k| {
            let e = coeffs.get(k);
            if e.is_zero() {
                T::neg_infinity()
            } else {
                e.log_abs + T::from_usize_lossy(k.k1) * l1 + T::from_usize_lossy(k.k2) * l2
            }
        })
        .fold(T::neg_infinity(), T::max);
    let rhs = band - T::lit(2.0).ln();
    let base = CriterionReport::new(TheoremId::MainPolynomial, Verdict::Holds)
        .witness("k0", k0)
        .witness("rho1", rho.r1().as_f64())
        .witness("rho2", rho.r2().as_f64())
        .sampling("skeleton", samples)
        .sampling("order", coeffs.order);
    if band == T::neg_infinity() {
        let mut rep = base.because(format!("no nonzero coefficient of degree {k0}")).at(z0);
        rep.verdict = Verdict::Fails;
        return Ok(rep);
    }
    let roots = unit_roots::<T>(samples);
    let mut lhs = T::zero();
    let mut worst = *z0;
    for u1 in &roots {
        for u2 in &roots {
            let (w1, w2) = (*u1 * rho.r1(), *u2 * rho.r2());
            let v = horner(coeffs, w1, w2, |k: MultiIndex| k.order() != k0).norm();
            if v > lhs {
                lhs = v;
                worst = z0.offset(w1, w2)?;
            }
        }
    }
    let lhs_log = if lhs == T::zero() { T::neg_infinity() } else { lhs.ln() };
    let mut rep = base
        .witness("lhs", lhs.as_f64())
        .witness("rhs", report_exp(rhs))
        .witness("log_rhs", rhs.as_f64())
        .at(&worst);
    if !log_le(lhs_log, rhs) {
        rep.verdict = Verdict::Fails;
        rep = rep.because("remainder exceeds half of the main band");
    }
    Ok(rep)
}
