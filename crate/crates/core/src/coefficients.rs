//! Truncated Taylor coefficient tables `b_K = F^{(K)}(z0) / (k1! k2!)`.
//!
//! Tables come from exact series arithmetic for closed forms and polynomials,
//! or from a discrete double Fourier transform of skeleton samples. Entries are
//! kept as log-magnitude plus phase.

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::domain::{
    degree_band, degree_enumerate, AnalyticFunction, BidiscPoint, ClosedForm, LogMagnitude,
    MultiIndex, Polynomial, Radii, Representation,
};
use crate::error::{Error, Result};
use crate::fft::{dft2_naive, fft2_in_place};
use crate::scalar::{log_add_exp, Scalar};
use crate::series::Series;
use crate::weights::WeightField;

/// Upper bound on the default extraction radius.
pub const DEFAULT_EXTRACTION_RADIUS: f64 = 0.25;
/// Tail indicator above which a Cauchy extraction is flagged as aliased.
pub const DEFAULT_ALIAS_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable<T> {
    pub center: BidiscPoint<T>,
    pub order: usize,
    entries: Vec<LogMagnitude<T>>,
    pub extraction_radii: Option<Radii<T>>,
    /// Largest top-band term `|b_K| rho^K` relative to the largest term overall.
    pub tail_indicator: T,
    pub alias_warning: bool,
}

impl<T: Scalar> CoeffTable<T> {
    /// Builds a table from entries in canonical order; `rho` sets the tail indicator.
    pub fn from_entries(
        center: BidiscPoint<T>,
        order: usize,
        entries: Vec<LogMagnitude<T>>,
        rho: &Radii<T>,
    ) -> Result<Self> {
        if entries.len() != crate::domain::simplex_len(order) {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for order {order}, got {}",
                crate::domain::simplex_len(order),
                entries.len()
            )));
        }
        let tail_indicator = tail_indicator(&entries, order, rho);
        Ok(Self { center, order, entries, extraction_radii: None, tail_indicator, alias_warning: false })
    }

    #[inline]
    pub fn get(&self, k: MultiIndex) -> LogMagnitude<T> {
        if k.order() > self.order {
            return LogMagnitude::zero();
        }
        self.entries[k.position()]
    }

    pub fn coefficient(&self, k: MultiIndex) -> Complex<T> {
        self.get(k).to_complex()
    }

    pub fn entries(&self) -> impl Iterator<Item = (MultiIndex, &LogMagnitude<T>)> {
        self.entries.iter().enumerate().map(|(i, e)| (MultiIndex::from_position(i), e))
    }

    /// Multiplies every coefficient by `lambda`.
    pub fn scaled(&self, lambda: Complex<T>) -> Self {
        let f = LogMagnitude::from_complex(lambda);
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = wrap(e.mul(&f));
        }
        out
    }

    /// The truncated series as a polynomial in the shifted variables `z - center`.
    pub fn to_polynomial(&self) -> Polynomial<T> {
        Polynomial::new(self.entries().map(|(k, e)| (k, e.to_complex())))
    }
}

fn wrap<T: Scalar>(m: LogMagnitude<T>) -> LogMagnitude<T> {
    match m.phase {
        Some(p) => LogMagnitude { log_abs: m.log_abs, phase: Some(p.sin().atan2(p.cos())) },
        None => m,
    }
}

fn tail_indicator<T: Scalar>(entries: &[LogMagnitude<T>], order: usize, rho: &Radii<T>) -> T {
    let (l1, l2) = (rho.r1().ln(), rho.r2().ln());
    let term = |k: MultiIndex| {
        let e = entries[k.position()];
        if e.is_zero() {
            T::neg_infinity()
        } else {
            e.log_abs + T::from_usize_lossy(k.k1) * l1 + T::from_usize_lossy(k.k2) * l2
        }
    };
    let all = degree_enumerate(order).into_iter().map(term).fold(T::neg_infinity(), T::max);
    if all == T::neg_infinity() {
        return T::zero();
    }
    let top = degree_band(order).map(term).fold(T::neg_infinity(), T::max);
    (top - all).exp()
}

/// `rho_j = min(0.5 (1 - |z0_j|), 0.25)`.
pub fn default_extraction_radii<T: Scalar>(z0: &BidiscPoint<T>) -> Radii<T> {
    let g = z0.boundary_gaps();
    let cap = T::lit(DEFAULT_EXTRACTION_RADIUS);
    let half = T::lit(0.5);
    Radii::new((half * g[0]).min(cap), (half * g[1]).min(cap)).expect("interior point has positive gap")
}

fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1))
}

/// Exact coefficients of a closed form or polynomial at `z0`.
///
/// Series are built in the scaled variables `t_j = (z_j - z0_j) / s_j` with
/// `s` the default extraction radii, and unscaled in the log domain.
pub fn taylor_closed_form<T: Scalar>(
    f: &AnalyticFunction<T>,
    z0: &BidiscPoint<T>,
    order: usize,
) -> Result<CoeffTable<T>> {
    let s = default_extraction_radii(z0);
    let (s1, s2) = (Complex::new(s.r1(), T::zero()), Complex::new(s.r2(), T::zero()));
    let (a, b) = (z0.z1(), z0.z2());
    let one = Complex::<T>::one();
    // (log-magnitude shift, phase shift, series in t)
    let (log_shift, phase_shift, series) = match &f.representation {
        Representation::ClosedForm { form, factor } => {
            let (lc, ph, ser) = match *form {
                ClosedForm::ExpReciprocal => {
                    let (u0, v0) = (one - a, one - b);
                    let base = one / (u0 * v0);
                    let (q1, q2) = (s1 / u0, s2 / v0);
                    let g = Series::from_fn(order, |i, j| base * q1.powu(i as u32) * q2.powu(j as u32));
                    let (g00, e) = g.exp_split();
                    (g00.re, g00.im, e)
                }
                ClosedForm::RationalGeom => {
                    let mut h = Series::zeros(order.max(2));
                    h.set(0, 0, one - a * b);
                    h.set(1, 0, -b * s1);
                    h.set(0, 1, -a * s2);
                    h.set(1, 1, -s1 * s2);
                    let r = h.recip()?;
                    (T::zero(), T::zero(), truncate(&r, order))
                }
                ClosedForm::ExpLinear { a1, a2 } => {
                    let c = a1 * a + a2 * b;
                    let (p1, p2) = (falling_exp(a1 * s1, order), falling_exp(a2 * s2, order));
                    (c.re, c.im, Series::from_fn(order, |i, j| p1[i] * p2[j]))
                }
                ClosedForm::InverseProduct { c1, c2 } => {
                    let (e1, e2) = (c1 - a, c2 - b);
                    let base = one / (e1 * e2);
                    let (q1, q2) = (s1 / e1, s2 / e2);
                    (T::zero(), T::zero(), Series::from_fn(order, |i, j| base * q1.powu(i as u32) * q2.powu(j as u32)))
                }
            };
            let fl = LogMagnitude::from_complex(*factor);
            (lc + fl.log_abs, ph + fl.phase.unwrap_or_else(T::zero), ser)
        }
        Representation::FiniteCoeffs(poly) => {
            let deg = poly.degree();
            let pa = crate::domain::powers(a, deg);
            let pb = crate::domain::powers(b, deg);
            let ser = Series::from_fn(order, |k1, k2| {
                let mut acc = Complex::<T>::zero();
                for (j, c) in poly.terms() {
                    if j.k1 >= k1 && j.k2 >= k2 {
                        let w: T = binomial::<T>(j.k1, k1) * binomial::<T>(j.k2, k2);
                        acc = acc + *c * pa[j.k1 - k1] * pb[j.k2 - k2] * w;
                    }
                }
                acc * s1.powu(k1 as u32) * s2.powu(k2 as u32)
            });
            (T::zero(), T::zero(), ser)
        }
        Representation::BlackBox(_) => return Err(Error::UnsupportedFamily(f.label.clone())),
    };
    let (ls1, ls2) = (s.r1().ln(), s.r2().ln());
    let entries = degree_enumerate(order)
        .into_iter()
        .zip(series.coefficients())
        .map(|(k, c)| {
            let m = LogMagnitude::from_complex(*c);
            if m.is_zero() {
                return m;
            }
            let unscale = T::from_usize_lossy(k.k1) * ls1 + T::from_usize_lossy(k.k2) * ls2;
            wrap(LogMagnitude {
                log_abs: m.log_abs + log_shift - unscale,
                phase: Some(m.phase.unwrap_or_else(T::zero) + phase_shift),
            })
        })
        .collect();
    CoeffTable::from_entries(*z0, order, entries, &s)
}

fn truncate<T: Scalar>(s: &Series<T>, order: usize) -> Series<T> {
    Series::from_fn(order, |i, j| s.get(i, j))
}

/// `x^k / k!` for `k = 0..=n`.
fn falling_exp<T: Scalar>(x: Complex<T>, n: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Complex::<T>::one();
    out.push(acc);
    for k in 1..=n {
        acc = acc * x / T::from_usize_lossy(k);
        out.push(acc);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Fft,
    /// O(n^2) per axis; reference path.
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyOptions<T> {
    /// Samples per axis; a power of two with `n >= 4 * order`.
    pub n_samples: usize,
    pub alias_threshold: T,
    pub transform: Transform,
}

impl<T: Scalar> CauchyOptions<T> {
    pub fn new(n_samples: usize) -> Self {
        Self { n_samples, alias_threshold: T::lit(DEFAULT_ALIAS_THRESHOLD), transform: Transform::Fft }
    }

    /// Smallest admissible power of two for `order`, at least 16.
    pub fn for_order(order: usize) -> Self {
        Self::new((4 * order).max(16).next_power_of_two())
    }
}

/// Coefficients from samples of `F` on the skeleton `T[z0, rho]`.
///
/// Aliasing from the neglected tail is not an error: it is reported through
/// `tail_indicator` and `alias_warning`.
pub fn taylor_cauchy<T: Scalar>(
    f: &AnalyticFunction<T>,
    z0: &BidiscPoint<T>,
    rho: &Radii<T>,
    order: usize,
    opts: CauchyOptions<T>,
) -> Result<CoeffTable<T>> {
    let n = opts.n_samples;
    if !n.is_power_of_two() {
        return Err(Error::InvalidSampleCount { count: n, reason: "must be a power of two" });
    }
    if n < 4 * order || n < 4 {
        return Err(Error::InvalidSampleCount { count: n, reason: "need at least 4 * order samples" });
    }
    z0.check_polydisc(rho)?;
    let roots = crate::grid::unit_roots::<T>(n);
    let rows: Vec<Vec<Complex<T>>> = roots
        .par_iter()
        .map(|u1| {
            roots
                .iter()
                .map(|u2| f.eval(&z0.offset(*u1 * rho.r1(), *u2 * rho.r2())?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut data: Vec<Complex<T>> = rows.into_iter().flatten().collect();
    let spectrum = match opts.transform {
        Transform::Fft => {
            fft2_in_place(&mut data, n);
            data
        }
        Transform::Naive => dft2_naive(&data, n),
    };
    let norm = T::from_usize_lossy(n * n);
    let (lr1, lr2) = (rho.r1().ln(), rho.r2().ln());
    let entries = degree_enumerate(order)
        .into_iter()
        .map(|k| {
            let c = spectrum[k.k1 * n + k.k2] / norm;
            let m = LogMagnitude::from_complex(c);
            m.scale_log(-(T::from_usize_lossy(k.k1) * lr1 + T::from_usize_lossy(k.k2) * lr2))
        })
        .collect();
    let mut table = CoeffTable::from_entries(*z0, order, entries, rho)?;
    table.extraction_radii = Some(*rho);
    table.alias_warning = table.tail_indicator > opts.alias_threshold;
    Ok(table)
}

/// Exact coefficients where available, otherwise a Cauchy extraction at the
/// default radii.
pub fn taylor_auto<T: Scalar>(
    f: &AnalyticFunction<T>,
    z0: &BidiscPoint<T>,
    order: usize,
) -> Result<CoeffTable<T>> {
    if f.has_exact_derivatives() {
        taylor_closed_form(f, z0, order)
    } else {
        taylor_cauchy(f, z0, &default_extraction_radii(z0), order, CauchyOptions::for_order(order))
    }
}

/// Log-magnitudes of `a*_K = |b_K| / (l1(z0)^k1 l2(z0)^k2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormDerivGrid<T> {
    pub center: BidiscPoint<T>,
    pub order: usize,
    values: Vec<T>,
    pub weight_at_center: [T; 2],
}

impl<T: Scalar> NormDerivGrid<T> {
    #[inline]
    pub fn log_value(&self, k: MultiIndex) -> T {
        self.values[k.position()]
    }

    pub fn get(&self, k: MultiIndex) -> LogMagnitude<T> {
        LogMagnitude::from_log(self.log_value(k))
    }

    pub fn log_values(&self) -> &[T] {
        &self.values
    }

    /// Linear-scale `a*_K` in canonical order.
    pub fn linear_values(&self) -> Vec<T> {
        self.values.iter().map(|v| v.exp()).collect()
    }
}

pub fn normalize<T: Scalar>(coeffs: &CoeffTable<T>, l: &WeightField<T>) -> Result<NormDerivGrid<T>> {
    normalize_with(coeffs, l.eval(&coeffs.center)?)
}

/// [`normalize`] with the weight at the center already evaluated.
pub fn normalize_with<T: Scalar>(coeffs: &CoeffTable<T>, w: [T; 2]) -> Result<NormDerivGrid<T>> {
    let (ll1, ll2) = (w[0].ln(), w[1].ln());
    let values = coeffs
        .entries()
        .map(|(k, e)| {
            if e.is_zero() {
                T::neg_infinity()
            } else {
                e.log_abs - T::from_usize_lossy(k.k1) * ll1 - T::from_usize_lossy(k.k2) * ll2
            }
        })
        .collect();
    Ok(NormDerivGrid { center: coeffs.center, order: coeffs.order, values, weight_at_center: w })
}

/// `a_k = max { a*_J : ||J|| = k }` for `k = 0..=order`.
pub fn diagonal_max<T: Scalar>(grid: &NormDerivGrid<T>) -> Vec<LogMagnitude<T>> {
    (0..=grid.order)
        .map(|d| {
            LogMagnitude::from_log(degree_band(d).map(|k| grid.log_value(k)).fold(T::neg_infinity(), T::max))
        })
        .collect()
}

/// Sum of `a*_K` over `lo <= ||K|| <= hi`, in the log domain.
pub fn log_band_sum<T: Scalar>(grid: &NormDerivGrid<T>, lo: usize, hi: usize) -> T {
    (lo..=hi.min(grid.order))
        .flat_map(degree_band)
        .fold(T::neg_infinity(), |acc, k| log_add_exp(acc, grid.log_value(k)))
}

/// Horner evaluation of the truncated series at `z`.
pub fn eval_series<T: Scalar>(coeffs: &CoeffTable<T>, z: &BidiscPoint<T>) -> Result<Complex<T>> {
    let w1 = z.z1() - coeffs.center.z1();
    let w2 = z.z2() - coeffs.center.z2();
    if let Some(rho) = coeffs.extraction_radii {
        let tol = T::one() + T::lit(1e-12);
        if w1.norm() > rho.r1() * tol || w2.norm() > rho.r2() * tol {
            return Err(Error::DomainViolation(format!(
                "({}) lies outside the extraction polydisc",
                z.describe()
            )));
        }
    }
    Ok(horner(coeffs, w1, w2, |_| true))
}

/// `sum b_K w^K` over the indices accepted by `keep`.
pub(crate) fn horner<T: Scalar>(
    coeffs: &CoeffTable<T>,
    w1: Complex<T>,
    w2: Complex<T>,
    keep: impl Fn(MultiIndex) -> bool,
) -> Complex<T> {
    let n = coeffs.order;
    let mut outer = Complex::<T>::zero();
    for k1 in (0..=n).rev() {
        let mut inner = Complex::<T>::zero();
        for k2 in (0..=(n - k1)).rev() {
            let k = MultiIndex::new(k1, k2);
            let c = if keep(k) { coeffs.coefficient(k) } else { Complex::<T>::zero() };
            inner = inner * w2 + c;
        }
        outer = outer * w1 + inner;
    }
    outer
}
