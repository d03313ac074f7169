//! Local L-index at a point, index profiles over exhaustion grids, maximal
//! term and central index, skeleton max-modulus and the constant `q(R)`.

use std::fmt;

use rayon::prelude::*;

use crate::coefficients::{normalize_with, taylor_auto, CoeffTable, NormDerivGrid};
use crate::domain::{
    degree_enumerate, AnalyticFunction, BidiscPoint, LogMagnitude, MultiIndex, Radii, RELATIVE_SLACK,
};
use crate::error::{Error, Result};
use crate::grid::{skeleton_points, Grid, GridDescriptor};
use crate::scalar::Scalar;
use crate::weights::{LambdaEstimate, WeightField};

/// Tail indicator above which a truncated index scan is not trusted.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexValue {
    Bounded(usize),
    /// The dominating value was still growing at the top degree band.
    Unbounded { cap: usize },
}

impl IndexValue {
    pub fn bounded(&self) -> Option<usize> {
        match self {
            IndexValue::Bounded(n) => Some(*n),
            IndexValue::Unbounded { .. } => None,
        }
    }

    /// Lower bound on the index: `cap` for an unbounded scan.
    pub fn lower_bound(&self) -> usize {
        match self {
            IndexValue::Bounded(n) => *n,
            IndexValue::Unbounded { cap } => *cap,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Bounded(n) => write!(f, "{n}"),
            IndexValue::Unbounded { cap } => write!(f, "unbounded(cap={cap})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    /// The normalized top band is not negligible against the overall maximum.
    TailAboveThreshold,
    /// `rho_j l_j(z0) <= 1` for an extracted table, so beyond-cap terms are not
    /// geometrically controlled.
    ExtractionRadiusTooSmall,
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InconclusiveReason::TailAboveThreshold => f.write_str("truncation unsound: tail above threshold"),
            InconclusiveReason::ExtractionRadiusTooSmall => {
                f.write_str("truncation unsound: extraction radius times weight <= 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalIndexResult<T> {
    pub n0: IndexValue,
    pub argmax_index: MultiIndex,
    pub dominating_value: LogMagnitude<T>,
    pub cap: usize,
    /// `ln(dominating / max a*_K beyond degree n0)`; `+inf` when nothing beyond is nonzero.
    pub slack: T,
    /// Top-band `a*` relative to the overall maximum.
    pub tail_indicator: T,
    pub inconclusive: Option<InconclusiveReason>,
}

impl<T: Scalar> LocalIndexResult<T> {
    pub fn is_conclusive(&self) -> bool {
        self.inconclusive.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexOptions<T> {
    pub cap: usize,
    /// Relative: `a*_K <= (1 + tol) max`.
    pub tol: T,
    pub tail_threshold: T,
}

impl<T: Scalar> IndexOptions<T> {
    pub fn new(cap: usize) -> Self {
        Self { cap, tol: T::lit(RELATIVE_SLACK), tail_threshold: T::lit(DEFAULT_TAIL_THRESHOLD) }
    }
}

/// Least `m` such that every `a*_K` with `||K|| <= cap` is dominated, up to
/// `1 + tol`, by the maximum over `||K|| <= m`.
pub fn local_index_from_grid<T: Scalar>(grid: &NormDerivGrid<T>, tol: T) -> LocalIndexResult<T> {
    let cap = grid.order;
    let slack_log = tol.ln_1p();
    let indices = degree_enumerate(cap);
    let global = grid.log_values().iter().copied().fold(T::neg_infinity(), T::max);
    // running maximum per degree band, in canonical order
    let mut best = T::neg_infinity();
    let mut best_k = MultiIndex::ZERO;
    let mut n0 = cap;
    let mut pos = 0;
    for d in 0..=cap {
        while pos < indices.len() && indices[pos].order() == d {
            let v = grid.log_value(indices[pos]);
            if v > best {
                best = v;
                best_k = indices[pos];
            }
            pos += 1;
        }
        let dominated = global == T::neg_infinity() || global <= best + slack_log;
        if dominated {
            n0 = d;
            break;
        }
    }
    let beyond = indices
        .iter()
        .filter(|k| k.order() > n0)
        .map(|k| grid.log_value(*k))
        .fold(T::neg_infinity(), T::max);
    let slack = if beyond == T::neg_infinity() { T::infinity() } else { best - beyond };
    let top = crate::domain::degree_band(cap).map(|k| grid.log_value(k)).fold(T::neg_infinity(), T::max);
    let tail_indicator = if global == T::neg_infinity() { T::zero() } else { (top - global).exp() };
    let n0 = if n0 == cap && cap > 0 && global > T::neg_infinity() {
        // the running max reached the global max only in the top band
        let below = indices
            .iter()
            .filter(|k| k.order() < cap)
            .map(|k| grid.log_value(*k))
            .fold(T::neg_infinity(), T::max);
        if global > below + slack_log {
            IndexValue::Unbounded { cap }
        } else {
            IndexValue::Bounded(cap)
        }
    } else {
        IndexValue::Bounded(n0)
    };
    LocalIndexResult {
        n0,
        argmax_index: best_k,
        dominating_value: LogMagnitude::from_log(best),
        cap,
        slack,
        tail_indicator,
        inconclusive: None,
    }
}

/// Local index `N(F, z0, L)` truncated at total degree `opts.cap`.
pub fn local_index<T: Scalar>(
    f: &AnalyticFunction<T>,
    l: &WeightField<T>,
    z0: &BidiscPoint<T>,
    opts: IndexOptions<T>,
) -> Result<LocalIndexResult<T>> {
    if opts.cap < 1 {
        return Err(Error::InvalidParameter("index cap must be at least 1".into()));
    }
    if !(opts.tol >= T::zero()) {
        return Err(Error::InvalidParameter("tolerance must be non-negative".into()));
    }
    let w = l.eval(z0)?;
    let table = taylor_auto(f, z0, opts.cap)?;
    let grid = normalize_with(&table, w)?;
    let mut res = local_index_from_grid(&grid, opts.tol);
    if let Some(rho) = table.extraction_radii {
        if rho.r1() * w[0] <= T::one() || rho.r2() * w[1] <= T::one() {
            res.inconclusive = Some(InconclusiveReason::ExtractionRadiusTooSmall);
        }
    }
    if res.inconclusive.is_none() && res.tail_indicator > opts.tail_threshold {
        res.inconclusive = Some(InconclusiveReason::TailAboveThreshold);
    }
    Ok(res)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileLevel<T> {
    pub grid: GridDescriptor,
    pub per_point: Vec<(BidiscPoint<T>, LocalIndexResult<T>)>,
    /// Supremum over conclusive points of this and all earlier levels.
    pub sup: IndexValue,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexProfile<T> {
    pub levels: Vec<ProfileLevel<T>>,
}

impl<T: Scalar> IndexProfile<T> {
    pub fn sup_per_grid(&self) -> Vec<IndexValue> {
        self.levels.iter().map(|l| l.sup).collect()
    }

    /// Lower bound for `N(F, L, D^2)`.
    pub fn final_sup(&self) -> Option<IndexValue> {
        self.levels.last().map(|l| l.sup)
    }

    pub fn points(&self) -> impl Iterator<Item = &(BidiscPoint<T>, LocalIndexResult<T>)> {
        self.levels.iter().flat_map(|l| l.per_point.iter())
    }
}

fn index_max(a: IndexValue, b: IndexValue) -> IndexValue {
    match (a, b) {
        (IndexValue::Unbounded { cap: x }, IndexValue::Unbounded { cap: y }) => IndexValue::Unbounded { cap: x.max(y) },
        (u @ IndexValue::Unbounded { .. }, _) | (_, u @ IndexValue::Unbounded { .. }) => u,
        (IndexValue::Bounded(x), IndexValue::Bounded(y)) => IndexValue::Bounded(x.max(y)),
    }
}

/// Local index at every point of every exhaustion level.
pub fn index_profile<T: Scalar>(
    f: &AnalyticFunction<T>,
    l: &WeightField<T>,
    exhaustion: &[Grid<T>],
    opts: IndexOptions<T>,
) -> Result<IndexProfile<T>> {
    let mut levels = Vec::with_capacity(exhaustion.len());
    let mut running = IndexValue::Bounded(0);
    for grid in exhaustion {
        let per_point: Vec<(BidiscPoint<T>, LocalIndexResult<T>)> = grid
            .points
            .par_iter()
            .map(|p| local_index(f, l, p, opts).map(|r| (*p, r)))
            .collect::<Result<_>>()?;
        let mut inconclusive = 0;
        for (_, r) in &per_point {
            if r.is_conclusive() {
                running = index_max(running, r.n0);
            } else {
                inconclusive += 1;
            }
        }
        levels.push(ProfileLevel { grid: grid.descriptor.clone(), per_point, sup: running, inconclusive });
    }
    Ok(IndexProfile { levels })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalTermResult<T> {
    pub mu: LogMagnitude<T>,
    pub nu_set: Vec<MultiIndex>,
    pub nu_norm: usize,
}

/// `mu(R) = max |b_K| R^K` over the table, all attaining indices (within
/// relative `tol`), and the largest total degree among them.
pub fn maximal_term<T: Scalar>(coeffs: &CoeffTable<T>, r: &Radii<T>, tol: T) -> Result<MaximalTermResult<T>> {
    if coeffs.order < 1 {
        return Err(Error::InvalidParameter("maximal term needs a table of order >= 1".into()));
    }
    let (l1, l2) = (r.r1().ln(), r.r2().ln());
    let terms: Vec<(MultiIndex, T)> = coeffs
        .entries()
        .map(|(k, e)| {
            let v = if e.is_zero() {
                T::neg_infinity()
            } else {
                e.log_abs + T::from_usize_lossy(k.k1) * l1 + T::from_usize_lossy(k.k2) * l2
            };
            (k, v)
        })
        .collect();
    let mu = terms.iter().map(|t| t.1).fold(T::neg_infinity(), T::max);
    let nu_set: Vec<MultiIndex> = if mu == T::neg_infinity() {
        Vec::new()
    } else {
        let floor = mu - tol.ln_1p();
        terms.iter().filter(|t| t.1 >= floor).map(|t| t.0).collect()
    };
    let nu_norm = nu_set.iter().map(MultiIndex::order).max().unwrap_or(0);
    Ok(MaximalTermResult { mu: LogMagnitude::from_log(mu), nu_set, nu_norm })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxModulus<T> {
    pub m: T,
    pub argmax: BidiscPoint<T>,
}

/// `max |F|` over the `n x n` sample of the skeleton `T[z0, R]`.
pub fn max_modulus<T: Scalar>(
    f: &AnalyticFunction<T>,
    z0: &BidiscPoint<T>,
    r: &Radii<T>,
    n_samples: usize,
) -> Result<MaxModulus<T>> {
    let pts = skeleton_points(z0, r, n_samples)?;
    let vals: Vec<T> = pts.par_iter().map(|p| f.eval(p).map(|v| v.norm())).collect::<Result<_>>()?;
    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    Ok(MaxModulus { m: vals[best], argmax: pts[best] })
}

/// `floor(2 (N+1) (r1 + r2) prod_j lambda1_j^{-N} lambda2_j^{N+1}) + 1`.
pub fn q_constant<T: Scalar>(n: usize, r: [T; 2], lambdas: &LambdaEstimate<T>) -> Result<u64> {
    if !lambdas.is_q2_consistent() {
        return Err(Error::InvalidParameter("lambda estimate is not consistent".into()));
    }
    if !(r[0] >= T::zero() && r[1] >= T::zero()) {
        return Err(Error::DegenerateRadius((r[0].min(r[1])).as_f64()));
    }
    let sum = r[0] + r[1];
    if sum == T::zero() {
        return Ok(1);
    }
    let nn = T::from_usize_lossy(n);
    let n1 = T::from_usize_lossy(n + 1);
    let log_x = T::lit(2.0).ln()
        + n1.ln()
        + sum.ln()
        + (0..2).fold(T::zero(), |acc, j| acc - nn * lambdas.lambda1[j].ln() + n1 * lambdas.lambda2[j].ln());
    // beyond 2^52 the floor is not meaningful in double precision
    if log_x.as_f64() > 52.0 * std::f64::consts::LN_2 {
        return Err(Error::Overflow(format!("q(R) = exp({log_x})")));
    }
    // linear evaluation for an exact floor where representable
    let mut x = T::lit(2.0) * n1 * sum;
    for j in 0..2 {
        x = x * lambdas.lambda1[j].powi(-(n as i32)) * lambdas.lambda2[j].powi(n as i32 + 1);
    }
    Ok(x.floor().as_f64() as u64 + 1)
}
