use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{BidiscPoint, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Point evaluator for functions known only by their values.
pub type Evaluator<T> =
    Arc<dyn Fn(Complex<T>, Complex<T>) -> std::result::Result<Complex<T>, String> + Send + Sync>;

/// Closed-form families with exact Taylor expansions at every point of the bidisc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm<T> {
    /// `exp(1 / ((1 - z1)(1 - z2)))`.
    ExpReciprocal,
    /// `1 / (1 - z1 z2)`.
    RationalGeom,
    /// `exp(a1 z1 + a2 z2)`.
    ExpLinear { a1: Complex<T>, a2: Complex<T> },
    /// `1 / ((c1 - z1)(c2 - z2))` with `|c_j| >= 1`.
    InverseProduct { c1: Complex<T>, c2: Complex<T> },
}

impl<T: Scalar> ClosedForm<T> {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::ExpReciprocal => "exp_reciprocal",
            ClosedForm::RationalGeom => "rational_geom",
            ClosedForm::ExpLinear { .. } => "exp_linear",
            ClosedForm::InverseProduct { .. } => "inverse_product",
        }
    }

    fn eval(&self, z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
        let one = Complex::<T>::one();
        match *self {
            ClosedForm::ExpReciprocal => {
                let w: Complex<T> = one / ((one - z1) * (one - z2));
                w.exp()
            }
            ClosedForm::RationalGeom => one / (one - z1 * z2),
            ClosedForm::ExpLinear { a1, a2 } => (a1 * z1 + a2 * z2).exp(),
            ClosedForm::InverseProduct { c1, c2 } => one / ((c1 - z1) * (c2 - z2)),
        }
    }
}

/// A bivariate polynomial `sum c_K z^K` with coefficients at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    terms: BTreeMap<MultiIndex, Complex<T>>,
}

impl<T: Scalar> Polynomial<T> {
    /// Repeated indices are summed; zero coefficients are dropped.
    pub fn new(terms: impl IntoIterator<Item = (MultiIndex, Complex<T>)>) -> Self {
        let mut map: BTreeMap<MultiIndex, Complex<T>> = BTreeMap::new();
        for (k, c) in terms {
            let e = map.entry(k).or_insert_with(Complex::<T>::zero);
            *e = *e + c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new([(MultiIndex::ZERO, c)])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: MultiIndex) -> Complex<T> {
        self.terms.get(&k).copied().unwrap_or_else(Complex::zero)
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
        let deg = self.degree();
        let p1 = powers(z1, deg);
        let p2 = powers(z2, deg);
        self.terms.iter().fold(Complex::<T>::zero(), |acc, (k, c)| acc + *c * p1[k.k1] * p2[k.k2])
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self::new(self.terms.iter().map(|(k, c)| (*k, *c * s)))
    }
}

pub(crate) fn powers<T: Scalar>(z: Complex<T>, n: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Complex::<T>::one();
    for _ in 0..=n {
        out.push(acc);
        acc = acc * z;
    }
    out
}

#[derive(Clone)]
pub enum Representation<T> {
    /// A closed-form family times a constant factor.
    ClosedForm { form: ClosedForm<T>, factor: Complex<T> },
    FiniteCoeffs(Polynomial<T>),
    BlackBox(Evaluator<T>),
}

impl<T: fmt::Debug> fmt::Debug for Representation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::ClosedForm { form, factor } => {
                f.debug_struct("ClosedForm").field("form", form).field("factor", factor).finish()
            }
            Representation::FiniteCoeffs(p) => f.debug_tuple("FiniteCoeffs").field(p).finish(),
            Representation::BlackBox(_) => f.write_str("BlackBox(..)"),
        }
    }
}

/// An analytic function on the bidisc.
#[derive(Debug, Clone)]
pub struct AnalyticFunction<T> {
    pub representation: Representation<T>,
    pub label: String,
}

impl<T: Scalar> AnalyticFunction<T> {
    pub fn closed_form(form: ClosedForm<T>) -> Result<Self> {
        if let ClosedForm::InverseProduct { c1, c2 } = form {
            if c1.norm() < T::one() || c2.norm() < T::one() {
                return Err(Error::InvalidParameter(
                    "inverse_product poles must satisfy |c_j| >= 1".into(),
                ));
            }
        }
        Ok(Self {
            label: form.name().to_string(),
            representation: Representation::ClosedForm { form, factor: Complex::<T>::one() },
        })
    }

    pub fn polynomial(poly: Polynomial<T>) -> Self {
        Self { representation: Representation::FiniteCoeffs(poly), label: "poly".into() }
    }

    pub fn black_box(label: impl Into<String>, f: Evaluator<T>) -> Self {
        Self { representation: Representation::BlackBox(f), label: label.into() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// True when exact Taylor coefficients are available.
    pub fn has_exact_derivatives(&self) -> bool {
        !matches!(self.representation, Representation::BlackBox(_))
    }

    pub fn eval(&self, p: &BidiscPoint<T>) -> Result<Complex<T>> {
        let (z1, z2) = (p.z1(), p.z2());
        let v = match &self.representation {
            Representation::ClosedForm { form, factor } => *factor * form.eval(z1, z2),
            Representation::FiniteCoeffs(poly) => poly.eval(z1, z2),
            Representation::BlackBox(f) => f(z1, z2)
                .map_err(|message| Error::EvaluatorFailure { point: p.describe(), message })?,
        };
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::EvaluatorFailure {
                point: p.describe(),
                message: "non-finite value".into(),
            });
        }
        Ok(v)
    }

    /// `lambda * F`.
    pub fn scaled(&self, lambda: Complex<T>) -> Self {
        let representation = match &self.representation {
            Representation::ClosedForm { form, factor } => {
                Representation::ClosedForm { form: *form, factor: *factor * lambda }
            }
            Representation::FiniteCoeffs(p) => Representation::FiniteCoeffs(p.scaled(lambda)),
            Representation::BlackBox(f) => {
                let f = Arc::clone(f);
                Representation::BlackBox(Arc::new(move |a, b| f(a, b).map(|v| v * lambda)))
            }
        };
        Self { representation, label: self.label.clone() }
    }

    /// The same function with only point evaluation available.
    pub fn as_black_box(&self) -> Self {
        let this = self.clone();
        let f: Evaluator<T> = Arc::new(move |a, b| match &this.representation {
            Representation::ClosedForm { form, factor } => Ok(*factor * form.eval(a, b)),
            Representation::FiniteCoeffs(p) => Ok(p.eval(a, b)),
            Representation::BlackBox(g) => g(a, b),
        });
        Self::black_box(format!("{} (black box)", self.label), f)
    }
}
