//! Weight fields `L = (l1, l2)`, their admissibility, the class-bounds
//! `lambda_{1,j}(R)`, `lambda_{2,j}(R)`, comparability and the scaled weight.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::domain::{BidiscPoint, Radii};
use crate::error::{Error, Result};
use crate::grid::{polydisc_points, Grid, GridDescriptor, PolarSampling};
use crate::scalar::Scalar;

pub type WeightEvaluator<T> =
    Arc<dyn Fn(&BidiscPoint<T>) -> std::result::Result<[T; 2], String> + Send + Sync>;

#[derive(Clone)]
pub enum WeightFamily<T> {
    /// `l_j = scale / ((1-|z1|)^{e[j][0]} (1-|z2|)^{e[j][1]})`.
    BoundaryPower { exponents: [[T; 2]; 2], scale: T },
    Constant([T; 2]),
    Custom(WeightEvaluator<T>),
}

impl<T: PartialEq> PartialEq for WeightFamily<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                WeightFamily::BoundaryPower { exponents: a, scale: s },
                WeightFamily::BoundaryPower { exponents: b, scale: t },
            ) => a == b && s == t,
            (WeightFamily::Constant(a), WeightFamily::Constant(b)) => a == b,
            (WeightFamily::Custom(f), WeightFamily::Custom(g)) => Arc::ptr_eq(f, g),
            _ => false,
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for WeightFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFamily::BoundaryPower { exponents, scale } => f
                .debug_struct("BoundaryPower")
                .field("exponents", exponents)
                .field("scale", scale)
                .finish(),
            WeightFamily::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            WeightFamily::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A weight field with admissibility parameter `beta > 1`.
///
/// `factors` multiplies the family componentwise; it carries constant
/// rescalings such as `c * L` and the scaled weight `L*`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField<T> {
    pub family: WeightFamily<T>,
    pub beta: T,
    pub factors: [T; 2],
}

impl<T: Scalar> WeightField<T> {
    pub fn new(family: WeightFamily<T>, beta: T) -> Result<Self> {
        if !(beta > T::one() && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta = {beta} must exceed 1")));
        }
        match &family {
            WeightFamily::Constant(c) if !(c[0] > T::zero() && c[1] > T::zero()) => {
                return Err(Error::InvalidParameter("constant weights must be positive".into()));
            }
            WeightFamily::BoundaryPower { scale, .. } if !(*scale > T::zero()) => {
                return Err(Error::InvalidParameter("boundary power scale must be positive".into()));
            }
            _ => {}
        }
        Ok(Self { family, beta, factors: [T::one(), T::one()] })
    }

    pub fn constant(c1: T, c2: T, beta: T) -> Result<Self> {
        Self::new(WeightFamily::Constant([c1, c2]), beta)
    }

    pub fn boundary_power(exponents: [[T; 2]; 2], scale: T, beta: T) -> Result<Self> {
        Self::new(WeightFamily::BoundaryPower { exponents, scale }, beta)
    }

    pub fn custom(f: WeightEvaluator<T>, beta: T) -> Result<Self> {
        Self::new(WeightFamily::Custom(f), beta)
    }

    /// `c * L`.
    pub fn scaled(&self, c: T) -> Self {
        self.scaled_components([c, c])
    }

    pub fn scaled_components(&self, c: [T; 2]) -> Self {
        let mut out = self.clone();
        out.factors = [self.factors[0] * c[0], self.factors[1] * c[1]];
        out
    }

    pub fn eval(&self, p: &BidiscPoint<T>) -> Result<[T; 2]> {
        let base = match &self.family {
            WeightFamily::BoundaryPower { exponents, scale } => {
                let gap = p.boundary_gaps();
                let mut out = [T::zero(); 2];
                for (j, e) in exponents.iter().enumerate() {
                    out[j] = *scale / (gap[0].powf(e[0]) * gap[1].powf(e[1]));
                }
                out
            }
            WeightFamily::Constant(c) => *c,
            WeightFamily::Custom(f) => f(p).map_err(|message| Error::EvaluatorFailure {
                point: p.describe(),
                message,
            })?,
        };
        let l = [base[0] * self.factors[0], base[1] * self.factors[1]];
        if !(l[0] > T::zero() && l[1] > T::zero() && l[0].is_finite() && l[1].is_finite()) {
            return Err(Error::EvaluatorFailure {
                point: p.describe(),
                message: format!("weight ({}, {}) is not positive and finite", l[0], l[1]),
            });
        }
        Ok(l)
    }

    /// Smallest admissibility margin `l_j(z)(1 - |z_j|) - beta` over both components.
    pub fn margin(&self, p: &BidiscPoint<T>) -> Result<T> {
        let l = self.eval(p)?;
        let g = p.boundary_gaps();
        Ok((l[0] * g[0] - self.beta).min(l[1] * g[1] - self.beta))
    }

    fn check_class_radii(&self, r: &Radii<T>) -> Result<()> {
        if r.within(self.beta) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "radii ({}) must lie in (0, beta = {}]",
                r.describe(),
                self.beta
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightValidation<T> {
    pub admissible_fraction: T,
    pub worst_margin: T,
    pub worst_point: BidiscPoint<T>,
}

/// Fraction of grid points where `l_j(z)(1 - |z_j|) > beta` for both `j`, and
/// the smallest margin with its location.
pub fn validate_weight<T: Scalar>(l: &WeightField<T>, grid: &Grid<T>) -> Result<WeightValidation<T>> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    let margins: Vec<T> = grid.points.par_iter().map(|p| l.margin(p)).collect::<Result<_>>()?;
    let mut worst = 0;
    let mut ok = 0usize;
    for (i, m) in margins.iter().enumerate() {
        if *m > T::zero() {
            ok += 1;
        }
        if *m < margins[worst] {
            worst = i;
        }
    }
    Ok(WeightValidation {
        admissible_fraction: T::from_usize_lossy(ok) / T::from_usize_lossy(grid.len()),
        worst_margin: margins[worst],
        worst_point: grid.points[worst],
    })
}

/// Grid estimate of `lambda_{1,j}(R)` (inf ratio) and `lambda_{2,j}(R)` (sup ratio).
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaEstimate<T> {
    pub r: Radii<T>,
    pub lambda1: [T; 2],
    pub lambda2: [T; 2],
    pub outer_grid: GridDescriptor,
    pub inner_grid: PolarSampling,
    /// Inner samples discarded because they left the open bidisc.
    pub clipped_samples: usize,
}

impl<T: Scalar> LambdaEstimate<T> {
    /// `0 < lambda1[j] <= lambda2[j] < inf` for both components.
    pub fn is_q2_consistent(&self) -> bool {
        (0..2).all(|j| {
            self.lambda1[j] > T::zero()
                && self.lambda1[j] <= self.lambda2[j]
                && self.lambda2[j].is_finite()
        })
    }

    /// Exact bounds, for callers that know them in closed form.
    pub fn exact(r: Radii<T>, lambda1: [T; 2], lambda2: [T; 2]) -> Self {
        Self {
            r,
            lambda1,
            lambda2,
            outer_grid: GridDescriptor::Explicit { count: 0 },
            inner_grid: PolarSampling { n_r: 0, n_theta: 0 },
            clipped_samples: 0,
        }
    }
}

pub fn lambda_bounds<T: Scalar>(
    l: &WeightField<T>,
    r: &Radii<T>,
    outer: &Grid<T>,
    inner: PolarSampling,
) -> Result<LambdaEstimate<T>> {
    l.check_class_radii(r)?;
    if outer.is_empty() {
        return Err(Error::InvalidParameter("empty outer grid".into()));
    }
    let per_point: Vec<([T; 2], [T; 2], usize)> = outer
        .points
        .par_iter()
        .map(|z0| {
            let l0 = l.eval(z0)?;
            let rho = r.over_weight(l0)?;
            let (pts, clipped) = polydisc_points(z0, &rho, inner);
            let mut lo = [T::infinity(); 2];
            let mut hi = [T::neg_infinity(); 2];
            for p in &pts {
                let lz = l.eval(p)?;
                for j in 0..2 {
                    let ratio = lz[j] / l0[j];
                    lo[j] = lo[j].min(ratio);
                    hi[j] = hi[j].max(ratio);
                }
            }
            Ok((lo, hi, clipped))
        })
        .collect::<Result<_>>()?;
    let mut lambda1 = [T::infinity(); 2];
    let mut lambda2 = [T::neg_infinity(); 2];
    let mut clipped_samples = 0;
    for (lo, hi, c) in per_point {
        for j in 0..2 {
            lambda1[j] = lambda1[j].min(lo[j]);
            lambda2[j] = lambda2[j].max(hi[j]);
        }
        clipped_samples += c;
    }
    Ok(LambdaEstimate {
        r: *r,
        lambda1,
        lambda2,
        outer_grid: outer.descriptor.clone(),
        inner_grid: inner,
        clipped_samples,
    })
}

/// A lambda estimate together with its change under one doubling of both grids.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaInterval<T> {
    pub coarse: LambdaEstimate<T>,
    pub fine: LambdaEstimate<T>,
    /// `|fine - coarse|` for `[lambda1, lambda2]`, per component.
    pub refinement_delta: [[T; 2]; 2],
}

pub fn lambda_refined<T: Scalar>(
    l: &WeightField<T>,
    r: &Radii<T>,
    outer_max_radius: T,
    outer: PolarSampling,
    inner: PolarSampling,
) -> Result<LambdaInterval<T>> {
    let coarse = lambda_bounds(l, r, &Grid::polar(outer_max_radius, outer)?, inner)?;
    let fine = lambda_bounds(l, r, &Grid::polar(outer_max_radius, outer.doubled())?, inner.doubled())?;
    let d = |a: [T; 2], b: [T; 2]| [(a[0] - b[0]).abs(), (a[1] - b[1]).abs()];
    let refinement_delta = [d(coarse.lambda1, fine.lambda1), d(coarse.lambda2, fine.lambda2)];
    Ok(LambdaInterval { coarse, fine, refinement_delta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparability {
    Comparable,
    NotComparable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparabilityWitness<T> {
    pub theta_low: [T; 2],
    pub theta_high: [T; 2],
    pub verdict: Comparability,
    /// `max_j theta_high[j] / theta_low[j]` accumulated up to each level.
    pub spread_per_level: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparabilityOptions<T> {
    /// Spread above which the weights are declared not comparable.
    pub spread_cap: T,
    /// Per-level spread growth that, sustained over at least three levels,
    /// marks an unbounded ratio.
    pub growth_factor: T,
}

impl<T: Scalar> Default for ComparabilityOptions<T> {
    fn default() -> Self {
        Self { spread_cap: T::lit(1e6), growth_factor: T::lit(2.0) }
    }
}

/// Two-sided ratio bounds `theta_low[j] <= l_j / lt_j <= theta_high[j]` over a
/// sequence of grids, typically approaching the boundary.
pub fn comparability<T: Scalar>(
    l: &WeightField<T>,
    lt: &WeightField<T>,
    levels: &[Grid<T>],
    opts: ComparabilityOptions<T>,
) -> Result<ComparabilityWitness<T>> {
    if levels.is_empty() || levels.iter().any(Grid::is_empty) {
        return Err(Error::InvalidParameter("comparability needs non-empty grids".into()));
    }
    let structural = l.family == lt.family;
    let mut lo = [T::infinity(); 2];
    let mut hi = [T::neg_infinity(); 2];
    let mut spreads = Vec::with_capacity(levels.len());
    for grid in levels {
        let ratios: Vec<[T; 2]> = if structural {
            // same base family: the ratio is the factor ratio everywhere
            for p in &grid.points {
                l.eval(p)?;
                lt.eval(p)?;
            }
            vec![[l.factors[0] / lt.factors[0], l.factors[1] / lt.factors[1]]]
        } else {
            grid.points
                .par_iter()
                .map(|p| {
                    let a = l.eval(p)?;
                    let b = lt.eval(p)?;
                    Ok([a[0] / b[0], a[1] / b[1]])
                })
                .collect::<Result<_>>()?
        };
        for q in ratios {
            for j in 0..2 {
                lo[j] = lo[j].min(q[j]);
                hi[j] = hi[j].max(q[j]);
            }
        }
        spreads.push((hi[0] / lo[0]).max(hi[1] / lo[1]));
    }
    let last = *spreads.last().expect("non-empty");
    let sustained_growth = spreads.len() >= 3
        && spreads.windows(2).all(|w| w[1] >= w[0] * opts.growth_factor);
    let verdict = if !last.is_finite() || last > opts.spread_cap || sustained_growth {
        Comparability::NotComparable
    } else if spreads.len() >= 2 && spreads.windows(2).all(|w| w[1] > w[0]) {
        // still growing, but not fast enough to call
        Comparability::Inconclusive
    } else {
        Comparability::Comparable
    };
    Ok(ComparabilityWitness { theta_low: lo, theta_high: hi, verdict, spread_per_level: spreads })
}

/// `L* = (beta l1 / r1, beta l2 / r2)`.
pub fn scaled_weight<T: Scalar>(l: &WeightField<T>, r: &Radii<T>) -> Result<WeightField<T>> {
    l.check_class_radii(r)?;
    Ok(l.scaled_components([l.beta / r.r1(), l.beta / r.r2()]))
}
