//! Sampling of the bidisc, of closed polydiscs and of their skeletons.
//!
//! Polar product grids put `n_r` equal-area rings (plus the center) and
//! `n_theta` equally spaced angles, starting at angle 0, on each coordinate.
//! Ring `i` has radius `max * sqrt(i / n_r)`, so the rim is always sampled.
//! Doubling both counts yields a superset of the previous samples.

use std::fmt;

use num_complex::Complex;

use crate::domain::{BidiscPoint, Radii};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Radial-by-angular sample counts for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarSampling {
    pub n_r: usize,
    pub n_theta: usize,
}

impl PolarSampling {
    pub const INNER_DEFAULT: PolarSampling = PolarSampling { n_r: 8, n_theta: 16 };
    pub const OUTER_DEFAULT: PolarSampling = PolarSampling { n_r: 8, n_theta: 8 };

    pub fn new(n_r: usize, n_theta: usize) -> Result<Self> {
        if n_r == 0 {
            return Err(Error::InvalidSampleCount { count: n_r, reason: "need at least one radius" });
        }
        if n_theta == 0 {
            return Err(Error::InvalidSampleCount { count: n_theta, reason: "need at least one angle" });
        }
        Ok(Self { n_r, n_theta })
    }

    pub fn doubled(&self) -> Self {
        Self { n_r: 2 * self.n_r, n_theta: 2 * self.n_theta }
    }

    /// Samples per coordinate, counting the center once.
    pub fn per_coordinate(&self) -> usize {
        1 + self.n_r * self.n_theta
    }

    /// Offsets from the center of a closed disc of the given radius.
    pub fn disc_offsets<T: Scalar>(&self, radius: T) -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(self.per_coordinate());
        out.push(Complex::new(T::zero(), T::zero()));
        let n_r = T::from_usize_lossy(self.n_r);
        for i in 1..=self.n_r {
            let rho = radius * (T::from_usize_lossy(i) / n_r).sqrt();
            out.extend(unit_roots::<T>(self.n_theta).into_iter().map(|u| u * rho));
        }
        out
    }
}

impl fmt::Display for PolarSampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_r, self.n_theta)
    }
}

/// `exp(2 pi i a / n)` for `a = 0..n`.
pub fn unit_roots<T: Scalar>(n: usize) -> Vec<Complex<T>> {
    let step = T::TAU() / T::from_usize_lossy(n);
    (0..n).map(|a| Complex::from_polar(T::one(), step * T::from_usize_lossy(a))).collect()
}

/// Description of how a set of bidisc points was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum GridDescriptor {
    Polar { max_radius: f64, sampling: PolarSampling },
    Explicit { count: usize },
}

impl fmt::Display for GridDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridDescriptor::Polar { max_radius, sampling } => {
                write!(f, "polar(max_radius={max_radius}, {sampling})")
            }
            GridDescriptor::Explicit { count } => write!(f, "explicit({count})"),
        }
    }
}

/// A finite set of bidisc points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub points: Vec<BidiscPoint<T>>,
    pub descriptor: GridDescriptor,
}

impl<T: Scalar> Grid<T> {
    /// Product of two polar disc grids of radius `max_radius < 1` at the origin.
    pub fn polar(max_radius: T, sampling: PolarSampling) -> Result<Self> {
        if !(max_radius >= T::zero() && max_radius < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "grid max radius {max_radius} must lie in [0, 1)"
            )));
        }
        let offsets = sampling.disc_offsets(max_radius);
        let mut points = Vec::with_capacity(offsets.len() * offsets.len());
        for &w1 in &offsets {
            for &w2 in &offsets {
                points.push(BidiscPoint::new(w1, w2)?);
            }
        }
        Ok(Self { points, descriptor: GridDescriptor::Polar { max_radius: max_radius.as_f64(), sampling } })
    }

    pub fn explicit(points: Vec<BidiscPoint<T>>) -> Self {
        let count = points.len();
        Self { points, descriptor: GridDescriptor::Explicit { count } }
    }

    /// One polar grid per max radius.
    pub fn exhaustion(levels: &[T], sampling: PolarSampling) -> Result<Vec<Self>> {
        levels.iter().map(|&r| Self::polar(r, sampling)).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Points of the closed polydisc `D[center, radii]` on a polar product grid,
/// with the samples that fall outside the open bidisc counted and dropped.
pub fn polydisc_points<T: Scalar>(
    center: &BidiscPoint<T>,
    radii: &Radii<T>,
    sampling: PolarSampling,
) -> (Vec<BidiscPoint<T>>, usize) {
    let o1 = sampling.disc_offsets(radii.r1());
    let o2 = sampling.disc_offsets(radii.r2());
    let mut pts = Vec::with_capacity(o1.len() * o2.len());
    let mut clipped = 0;
    for &w1 in &o1 {
        for &w2 in &o2 {
            match center.offset(w1, w2) {
                Ok(p) => pts.push(p),
                Err(_) => clipped += 1,
            }
        }
    }
    (pts, clipped)
}

/// The `n x n` sample of the skeleton torus `T[center, radii]`; errors when the
/// closed polydisc is not inside the open bidisc.
pub fn skeleton_points<T: Scalar>(
    center: &BidiscPoint<T>,
    radii: &Radii<T>,
    n: usize,
) -> Result<Vec<BidiscPoint<T>>> {
    if n == 0 {
        return Err(Error::InvalidSampleCount { count: n, reason: "skeleton needs samples" });
    }
    center.check_polydisc(radii)?;
    let roots = unit_roots::<T>(n);
    let mut pts = Vec::with_capacity(n * n);
    for &u1 in &roots {
        for &u2 in &roots {
            pts.push(center.offset(u1 * radii.r1(), u2 * radii.r2())?);
        }
    }
    Ok(pts)
}
