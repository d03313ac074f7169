use std::cmp::Ordering;

use num_complex::Complex;
use serde::Serialize;

use crate::scalar::Scalar;

/// A magnitude stored as its natural logarithm, with an optional phase.
///
/// Zero is `log_abs = -inf` and compares below every other magnitude.
/// Products and comparisons stay in the log domain; [`LogMagnitude::to_linear`]
/// is for report boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogMagnitude<T> {
    pub log_abs: T,
    pub phase: Option<T>,
}

impl<T: Scalar> LogMagnitude<T> {
    pub fn zero() -> Self {
        Self { log_abs: T::neg_infinity(), phase: None }
    }

    pub fn one() -> Self {
        Self { log_abs: T::zero(), phase: None }
    }

    pub fn from_log(log_abs: T) -> Self {
        Self { log_abs, phase: None }
    }

    /// `|x|` of a real value; the sign is dropped.
    pub fn from_linear(x: T) -> Self {
        Self { log_abs: x.abs().ln(), phase: None }
    }

    pub fn from_complex(z: Complex<T>) -> Self {
        let norm = z.norm();
        if norm == T::zero() {
            return Self::zero();
        }
        Self { log_abs: norm.ln(), phase: Some(z.arg()) }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.log_abs == T::neg_infinity()
    }

    pub fn to_linear(&self) -> T {
        self.log_abs.exp()
    }

    /// Signed complex value; a missing phase means a positive real.
    pub fn to_complex(&self) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(self.log_abs.exp(), self.phase.unwrap_or_else(T::zero))
    }

    pub fn magnitude(&self) -> Self {
        Self { log_abs: self.log_abs, phase: None }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let phase = match (self.phase, other.phase) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or_else(T::zero) + b.unwrap_or_else(T::zero)),
        };
        Self { log_abs: self.log_abs + other.log_abs, phase }
    }

    /// Multiply the magnitude by `exp(log_factor)`; phase is kept.
    pub fn scale_log(&self, log_factor: T) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self { log_abs: self.log_abs + log_factor, phase: self.phase }
    }

    pub fn cmp_magnitude(&self, other: &Self) -> Ordering {
        self.log_abs.partial_cmp(&other.log_abs).unwrap_or(Ordering::Equal)
    }
}

impl<T: Scalar> Default for LogMagnitude<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> PartialOrd for LogMagnitude<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.log_abs.partial_cmp(&other.log_abs)
    }
}
