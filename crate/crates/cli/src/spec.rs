//! Function and weight spec files.

use std::fs;
use std::path::Path;

use bindex::{AnalyticFunction, BidiscPoint, ClosedForm, LogMagnitude, MultiIndex, Polynomial, WeightField};
use num_complex::Complex;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum FunctionSpec {
    ExpReciprocal,
    RationalGeom,
    Poly { coeffs: Vec<[f64; 4]> },
    ExpLinear { a1: [f64; 2], a2: [f64; 2] },
    InverseProduct { c1: [f64; 2], c2: [f64; 2] },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum WeightSpec {
    BoundaryPower { beta: f64, exponents: [[f64; 2]; 2], scale: f64 },
    Constant { values: [f64; 2], beta: Option<f64> },
}

/// Used when a constant weight spec leaves `beta` out.
pub const DEFAULT_CONSTANT_BETA: f64 = 2.0;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

fn c(v: [f64; 2]) -> Complex<f64> {
    Complex::new(v[0], v[1])
}

fn index(j: f64, path: &Path) -> Result<usize, CliError> {
    if j >= 0.0 && j.fract() == 0.0 && j < 1e6 {
        Ok(j as usize)
    } else {
        Err(CliError::Spec(format!("{}: exponent {j} is not a non-negative integer", path.display())))
    }
}

/// Loads a JSON function spec, or a coefficient CSV dumped by `coeffs`.
///
/// A CSV table holds coefficients in `z - center`; it is expanded into a
/// polynomial in `z`.
pub fn load_function(path: &Path, center: Option<&BidiscPoint<f64>>) -> Result<AnalyticFunction<f64>, CliError> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let shifted = load_coefficient_csv(path)?;
        let p = match center {
            Some(z0) if *z0 != BidiscPoint::origin() => expand_at(&shifted, z0),
            _ => shifted,
        };
        return Ok(AnalyticFunction::polynomial(p).with_label(path.display().to_string()));
    }
    let spec: FunctionSpec =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
    let form = match spec {
        FunctionSpec::ExpReciprocal => ClosedForm::ExpReciprocal,
        FunctionSpec::RationalGeom => ClosedForm::RationalGeom,
        FunctionSpec::ExpLinear { a1, a2 } => ClosedForm::ExpLinear { a1: c(a1), a2: c(a2) },
        FunctionSpec::InverseProduct { c1, c2 } => ClosedForm::InverseProduct { c1: c(c1), c2: c(c2) },
        FunctionSpec::Poly { coeffs } => {
            let terms = coeffs
                .iter()
                .map(|t| Ok((MultiIndex::new(index(t[0], path)?, index(t[1], path)?), Complex::new(t[2], t[3]))))
                .collect::<Result<Vec<_>, CliError>>()?;
            return Ok(AnalyticFunction::polynomial(Polynomial::new(terms)));
        }
    };
    AnalyticFunction::closed_form(form).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
struct CoefficientRow {
    j1: usize,
    j2: usize,
    log_abs: f64,
    phase: Option<f64>,
}

fn load_coefficient_csv(path: &Path) -> Result<Polynomial<f64>, CliError> {
    let bad = |e: csv::Error| CliError::Spec(format!("{}: {e}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(bad)?;
    let mut terms = Vec::new();
    for row in reader.deserialize() {
        let row: CoefficientRow = row.map_err(bad)?;
        let m = LogMagnitude { log_abs: row.log_abs, phase: Some(row.phase.unwrap_or(0.0)) };
        terms.push((MultiIndex::new(row.j1, row.j2), m.to_complex()));
    }
    Ok(Polynomial::new(terms))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sum b_K (z - z0)^K` rewritten as a polynomial in `z`.
fn expand_at(p: &Polynomial<f64>, z0: &BidiscPoint<f64>) -> Polynomial<f64> {
    let (s1, s2) = (-z0.z1(), -z0.z2());
    let mut terms = Vec::new();
    for (k, b) in p.terms() {
        for j1 in 0..=k.k1 {
            for j2 in 0..=k.k2 {
                let w = binomial(k.k1, j1) * binomial(k.k2, j2);
                let shift = s1.powu((k.k1 - j1) as u32) * s2.powu((k.k2 - j2) as u32);
                terms.push((MultiIndex::new(j1, j2), b * shift * w));
            }
        }
    }
    Polynomial::new(terms)
}

pub fn load_weight(path: &Path) -> Result<WeightField<f64>, CliError> {
    let spec: WeightSpec =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
    let w = match spec {
        WeightSpec::BoundaryPower { beta, exponents, scale } => WeightField::boundary_power(exponents, scale, beta),
        WeightSpec::Constant { values, beta } => {
            WeightField::constant(values[0], values[1], beta.unwrap_or(DEFAULT_CONSTANT_BETA))
        }
    };
    w.map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_matches_shifted_evaluation() {
        let p = Polynomial::new([
            (MultiIndex::new(0, 0), Complex::new(1.0, 0.0)),
            (MultiIndex::new(2, 1), Complex::new(0.5, -0.25)),
        ]);
        let z0 = BidiscPoint::from_parts(0.2, 0.1, -0.3, 0.0).unwrap();
        let q = expand_at(&p, &z0);
        let (z1, z2) = (Complex::new(0.05, 0.3), Complex::new(-0.1, 0.2));
        let want = p.eval(z1 - z0.z1(), z2 - z0.z2());
        assert!((q.eval(z1, z2) - want).norm() < 1e-15);
    }

    #[test]
    fn unknown_family_is_rejected() {
        let r: Result<FunctionSpec, _> = serde_json::from_str(r#"{"family": "sine"}"#);
        assert!(r.is_err());
        let r: Result<WeightSpec, _> = serde_json::from_str(r#"{"family": "constant", "values": [3, 3]}"#);
        assert!(matches!(r, Ok(WeightSpec::Constant { beta: None, .. })));
    }
}
