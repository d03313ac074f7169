use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point `(z1, z2)` of the open unit bidisc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidiscPoint<T> {
    z1: Complex<T>,
    z2: Complex<T>,
}

impl<T: Scalar> BidiscPoint<T> {
    pub fn new(z1: Complex<T>, z2: Complex<T>) -> Result<Self> {
        let p = Self { z1, z2 };
        if !(z1.norm() < T::one() && z2.norm() < T::one()) {
            return Err(Error::OutsideBidisc(p.describe()));
        }
        Ok(p)
    }

    pub fn from_parts(re1: T, im1: T, re2: T, im2: T) -> Result<Self> {
        Self::new(Complex::new(re1, im1), Complex::new(re2, im2))
    }

    pub fn origin() -> Self {
        Self { z1: Complex::new(T::zero(), T::zero()), z2: Complex::new(T::zero(), T::zero()) }
    }

    #[inline]
    pub fn z1(&self) -> Complex<T> {
        self.z1
    }

    #[inline]
    pub fn z2(&self) -> Complex<T> {
        self.z2
    }

    #[inline]
    pub fn coord(&self, j: usize) -> Complex<T> {
        if j == 0 {
            self.z1
        } else {
            self.z2
        }
    }

    /// `(|z1|, |z2|)`.
    pub fn moduli(&self) -> [T; 2] {
        [self.z1.norm(), self.z2.norm()]
    }

    /// Distance of each coordinate to the unit circle, `1 - |z_j|`.
    pub fn boundary_gaps(&self) -> [T; 2] {
        [T::one() - self.z1.norm(), T::one() - self.z2.norm()]
    }

    /// `self + offset`, checked against the bidisc.
    pub fn offset(&self, w1: Complex<T>, w2: Complex<T>) -> Result<Self> {
        Self::new(self.z1 + w1, self.z2 + w2)
    }

    pub fn describe(&self) -> String {
        format!("{}{:+}i, {}{:+}i", self.z1.re, self.z1.im, self.z2.re, self.z2.im)
    }

    /// Checks that the closed polydisc with this center and `radii` lies in the
    /// open bidisc.
    pub fn check_polydisc(&self, radii: &Radii<T>) -> Result<()> {
        let m = self.moduli();
        if m[0] + radii.r1() < T::one() && m[1] + radii.r2() < T::one() {
            Ok(())
        } else {
            Err(Error::SkeletonOutsideDomain { center: self.describe(), radii: radii.describe() })
        }
    }

    pub fn cast<U: Scalar>(&self) -> BidiscPoint<U> {
        let c = |z: Complex<T>| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()));
        BidiscPoint { z1: c(self.z1), z2: c(self.z2) }
    }
}

/// A pair of positive radii `R = (r1, r2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radii<T> {
    r: [T; 2],
}

impl<T: Scalar> Radii<T> {
    pub fn new(r1: T, r2: T) -> Result<Self> {
        for r in [r1, r2] {
            if !(r > T::zero() && r.is_finite()) {
                return Err(Error::DegenerateRadius(r.as_f64()));
            }
        }
        Ok(Self { r: [r1, r2] })
    }

    pub fn uniform(r: T) -> Result<Self> {
        Self::new(r, r)
    }

    #[inline]
    pub fn r1(&self) -> T {
        self.r[0]
    }

    #[inline]
    pub fn r2(&self) -> T {
        self.r[1]
    }

    #[inline]
    pub fn get(&self, j: usize) -> T {
        self.r[j]
    }

    pub fn as_array(&self) -> [T; 2] {
        self.r
    }

    /// Componentwise `R / L`.
    pub fn over_weight(&self, l: [T; 2]) -> Result<Self> {
        Self::new(self.r[0] / l[0], self.r[1] / l[1])
    }

    pub fn scale(&self, s: T) -> Result<Self> {
        Self::new(self.r[0] * s, self.r[1] * s)
    }

    /// Componentwise `self <= bound`.
    pub fn within(&self, bound: T) -> bool {
        self.r[0] <= bound && self.r[1] <= bound
    }

    pub fn describe(&self) -> String {
        format!("{}, {}", self.r[0], self.r[1])
    }
}
