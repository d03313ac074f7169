//! Dense truncated bivariate power series `sum_{k1+k2 <= n} c_{k1,k2} t1^k1 t2^k2`
//! stored in the canonical degree order.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::domain::{simplex_len, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    order: usize,
    data: Vec<Complex<T>>,
}

#[inline]
fn pos(k1: usize, k2: usize) -> usize {
    MultiIndex::new(k1, k2).position()
}

impl<T: Scalar> Series<T> {
    pub fn zeros(order: usize) -> Self {
        Self { order, data: vec![Complex::<T>::zero(); simplex_len(order)] }
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut s = Self::zeros(order);
        for d in 0..=order {
            for k1 in 0..=d {
                s.data[pos(k1, d - k1)] = f(k1, d - k1);
            }
        }
        s
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, k1: usize, k2: usize) -> Complex<T> {
        self.data[pos(k1, k2)]
    }

    #[inline]
    pub fn set(&mut self, k1: usize, k2: usize, v: Complex<T>) {
        self.data[pos(k1, k2)] = v;
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_coefficients(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let mut out = Self::zeros(n);
        for d in 0..=n {
            for i in 0..=d {
                let j = d - i;
                let mut acc = Complex::<T>::zero();
                for p in 0..=i {
                    for q in 0..=j {
                        acc = acc + self.get(p, q) * other.get(i - p, j - q);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let h00 = self.get(0, 0);
        if h00.is_zero() {
            return Err(Error::DomainViolation("series with zero constant term has no inverse".into()));
        }
        let inv = Complex::<T>::one() / h00;
        let mut out = Self::zeros(self.order);
        out.set(0, 0, inv);
        for d in 1..=self.order {
            for i in 0..=d {
                let j = d - i;
                let mut acc = Complex::<T>::zero();
                for p in 0..=i {
                    for q in 0..=j {
                        if p + q == 0 {
                            continue;
                        }
                        acc = acc + self.get(p, q) * out.get(i - p, j - q);
                    }
                }
                out.set(i, j, -acc * inv);
            }
        }
        Ok(out)
    }

    /// `exp(self) = exp(c00) * E` where `E` has constant term 1. Returns
    /// `(c00, E)` so the possibly huge factor can stay in the log domain.
    pub fn exp_split(&self) -> (Complex<T>, Self) {
        let mut out = Self::zeros(self.order);
        out.set(0, 0, Complex::<T>::one());
        let w = |k: usize| Complex::new(T::from_usize_lossy(k), T::zero());
        // t1 d/dt1 E = (t1 d/dt1 G) E, and along k1 = 0 the t2 analogue.
        for d in 1..=self.order {
            for i in 0..=d {
                let j = d - i;
                let mut acc = Complex::<T>::zero();
                if i >= 1 {
                    for p in 1..=i {
                        for q in 0..=j {
                            acc = acc + w(p) * self.get(p, q) * out.get(i - p, j - q);
                        }
                    }
                    out.set(i, j, acc / w(i));
                } else {
                    for q in 1..=j {
                        acc = acc + w(q) * self.get(0, q) * out.get(0, j - q);
                    }
                    out.set(0, j, acc / w(j));
                }
            }
        }
        (self.get(0, 0), out)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { order: self.order, data: self.data.iter().map(|c| *c * s).collect() }
    }
}
