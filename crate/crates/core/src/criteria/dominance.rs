use rayon::prelude::*;

use super::{derivatives_at, log_derivative, log_le, log_weight_power, report_exp};
use crate::domain::{
    degree_enumerate, AnalyticFunction, BidiscPoint, CriterionReport, MultiIndex, Radii, TheoremId, Verdict,
};
use crate::error::{Error, Result};
use crate::grid::{polydisc_points, PolarSampling};
use crate::scalar::{ln_factorial, Scalar};
use crate::weights::WeightField;

fn sample_polydisc<T: Scalar>(
    z0: &BidiscPoint<T>,
    rho: &Radii<T>,
    samples: PolarSampling,
) -> Result<Vec<BidiscPoint<T>>> {
    z0.check_polydisc(rho)?;
    let (pts, clipped) = polydisc_points(z0, rho, samples);
    debug_assert_eq!(clipped, 0);
    Ok(pts)
}

fn argmax<T: Scalar>(vals: &[(BidiscPoint<T>, T)]) -> (BidiscPoint<T>, T) {
    let mut best = vals[0];
    for v in &vals[1..] {
        if v.1 > best.1 {
            best = *v;
        }
    }
    best
}

/// Local dominance on `D[z0, R / L(z0)]`: the largest normalized derivative of
/// order `<= n0` over the polydisc, against the best single normalized
/// derivative at `z0`. Witness: `k0` and `p0`.
pub fn check_local_dominance<T: Scalar>(
    f: &AnalyticFunction<T>,
    l: &WeightField<T>,
    z0: &BidiscPoint<T>,
    r: &Radii<T>,
    n0: usize,
    samples: PolarSampling,
    tol: T,
) -> Result<CriterionReport> {
    if !(tol >= T::zero()) {
        return Err(Error::InvalidParameter("tolerance must be non-negative".into()));
    }
    let w0 = l.eval(z0)?;
    let rho = r.over_weight(w0)?;
    let pts = sample_polydisc(z0, &rho, samples)?;
    let indices = degree_enumerate(n0);
    let lhs: Vec<(BidiscPoint<T>, T)> = pts
        .par_iter()
        .map(|z| {
            let t = derivatives_at(f, z, n0)?;
            let w = l.eval(z)?;
            let v = indices
                .iter()
                .map(|&k| {
                    log_derivative(&t, k)
                        - ln_factorial::<T>(k.k1)
                        - ln_factorial::<T>(k.k2)
                        - log_weight_power(w, k)
                })
                .fold(T::neg_infinity(), T::max);
            Ok((*z, v))
        })
        .collect::<Result<_>>()?;
    let (worst, lhs_log) = argmax(&lhs);

    let center = derivatives_at(f, z0, n0)?;
    // p0 is smallest where the center a*_K is largest; ties go to the lowest K
    let mut best: Option<(MultiIndex, T)> = None;
    for &k in &indices {
        let d = log_derivative(&center, k);
        if d == T::neg_infinity() {
            continue;
        }
        let a = d - ln_factorial::<T>(k.k1) - ln_factorial::<T>(k.k2) - log_weight_power(w0, k);
        if best.map_or(true, |(_, b)| a > b + tol.ln_1p()) {
            best = Some((k, a));
        }
    }
    let base = CriterionReport::new(TheoremId::LocalDominance, Verdict::Holds)
        .witness("lhs", report_exp(lhs_log))
        .witness("n0", n0)
        .sampling("polydisc", samples.to_string())
        .sampling("points", pts.len())
        .sampling("rho1", rho.r1().as_f64())
        .sampling("rho2", rho.r2().as_f64())
        .at(&worst);
    let Some((k0, a0)) = best else {
        let mut rep = base.because(format!("all derivatives of order <= {n0} vanish at the center"));
        rep.verdict = if lhs_log == T::neg_infinity() { Verdict::Holds } else { Verdict::Fails };
        if rep.verdict == Verdict::Holds {
            // F vanishes on the whole polydisc: any K0 works with p0 = 1
            rep = rep.witness("k0", MultiIndex::ZERO).witness("p0", 1.0);
        }
        return Ok(rep);
    };
    let log_p0 = if lhs_log == T::neg_infinity() { T::zero() } else { (lhs_log - a0).max(T::zero()) };
    Ok(base.witness("k0", k0).witness("p0", report_exp(log_p0)).witness("log_p0", log_p0.as_f64()))
}

/// `max |F^{(k)}(z)| / |F^{(k)}(z0)|` over a polydisc sample.
fn derivative_ratio<T: Scalar>(
    f: &AnalyticFunction<T>,
    z0: &BidiscPoint<T>,
    pts: &[BidiscPoint<T>],
    k: MultiIndex,
) -> Result<(Option<T>, BidiscPoint<T>)> {
    let order = k.order();
    let center = log_derivative(&derivatives_at(f, z0, order)?, k);
    let vals: Vec<(BidiscPoint<T>, T)> = pts
        .par_iter()
        .map(|z| Ok((*z, log_derivative(&derivatives_at(f, z, order)?, k))))
        .collect::<Result<_>>()?;
    let (worst, top) = argmax(&vals);
    if center == T::neg_infinity() {
        return Ok((None, worst));
    }
    let ratio = if top == T::neg_infinity() { T::neg_infinity() } else { top - center };
    Ok((Some(ratio.max(T::zero())), worst))
}

/// Necessary condition: `|F^{(k0)}(z)| <= p |F^{(k0)}(z0)|` on `D[z0, rho]`.
pub fn check_kth_max_modulus<T: Scalar>(
    f: &AnalyticFunction<T>,
    z0: &BidiscPoint<T>,
    rho: &Radii<T>,
    k0: MultiIndex,
    samples: PolarSampling,
) -> Result<CriterionReport> {
    let pts = sample_polydisc(z0, rho, samples)?;
    let (ratio, worst) = derivative_ratio(f, z0, &pts, k0)?;
    let rep = CriterionReport::new(TheoremId::KthMaxModulus, Verdict::Holds)
        .witness("k0", k0)
        .sampling("polydisc", samples.to_string())
        .sampling("points", pts.len())
        .at(&worst);
    Ok(match ratio {
        Some(lp) => rep.witness("p", report_exp(lp)).witness("log_p", lp.as_f64()),
        None => {
            let mut rep = rep.because("center derivative is zero");
            rep.verdict = Verdict::Fails;
            rep
        }
    })
}

/// Sufficient condition through the pure partials `F^{(k10, 0)}` and
/// `F^{(0, k20)}`; `p` is the larger of the two ratios.
pub fn check_pure_partials<T: Scalar>(
    f: &AnalyticFunction<T>,
    z0: &BidiscPoint<T>,
    rho: &Radii<T>,
    k10: usize,
    k20: usize,
    samples: PolarSampling,
) -> Result<CriterionReport> {
    let pts = sample_polydisc(z0, rho, samples)?;
    let (r1, w1) = derivative_ratio(f, z0, &pts, MultiIndex::new(k10, 0))?;
    let (r2, w2) = derivative_ratio(f, z0, &pts, MultiIndex::new(0, k20))?;
    let rep = CriterionReport::new(TheoremId::PurePartials, Verdict::Holds)
        .witness("k10", k10)
        .witness("k20", k20)
        .sampling("polydisc", samples.to_string())
        .sampling("points", pts.len());
    Ok(match (r1, r2) {
        (Some(a), Some(b)) => {
            let (lp, worst) = if log_le(b, a) { (a, w1) } else { (b, w2) };
            rep.witness("p1", report_exp(a))
                .witness("p2", report_exp(b))
                .witness("p", report_exp(lp))
                .witness("log_p", lp.as_f64())
                .at(&worst)
        }
        (a, _) => {
            let which = if a.is_none() { "(k10, 0)" } else { "(0, k20)" };
            let mut rep = rep.because(format!("center pure partial {which} is zero")).at(z0);
            rep.verdict = Verdict::Fails;
            rep
        }
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;
    use num_complex::Complex;
    use proptest::prelude::*;

    use super::*;
    use crate::domain::{ClosedForm, Polynomial};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn poly(terms: &[(usize, usize, f64, f64)]) -> AnalyticFunction<f64> {
        AnalyticFunction::polynomial(Polynomial::new(
            terms.iter().map(|&(a, b, re, im)| (MultiIndex::new(a, b), c(re, im))),
        ))
    }

    fn exp_sum() -> AnalyticFunction<f64> {
        AnalyticFunction::closed_form(ClosedForm::ExpLinear { a1: c(1.0, 0.0), a2: c(1.0, 0.0) }).unwrap()
    }

    fn constant_weight(v: f64) -> WeightField<f64> {
        WeightField::constant(v, v, 2.0).unwrap()
    }

    fn p(rep: &CriterionReport, key: &str) -> f64 {
        rep.get(key).and_then(|v| v.as_f64()).unwrap()
    }

    const S: PolarSampling = PolarSampling { n_r: 3, n_theta: 8 };

    #[test]
    fn local_dominance_examples() {
        let z0 = BidiscPoint::origin();
        let r = Radii::uniform(2.0).unwrap();
        let rep = check_local_dominance(&poly(&[(0, 0, 5.0, 0.0)]), &constant_weight(10.0), &z0, &r, 0, S, 1e-9)
            .unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_eq!(rep.get("k0").unwrap().as_index(), Some(MultiIndex::ZERO));
        assert_relative_eq!(p(&rep, "p0"), 1.0, max_relative = 1e-14);

        // rho = 2 / 10
        let rep = check_local_dominance(&exp_sum(), &constant_weight(10.0), &z0, &r, 0, S, 1e-9).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_relative_eq!(p(&rep, "p0"), 0.4f64.exp(), max_relative = 1e-12);

        let rep = check_local_dominance(&poly(&[(1, 0, 1.0, 0.0)]), &constant_weight(10.0), &z0, &r, 0, S, 1e-9)
            .unwrap();
        assert_eq!(rep.verdict, Verdict::Fails);
    }

    #[test]
    fn local_dominance_off_center_black_box() {
        let z0 = BidiscPoint::from_parts(0.1, 0.0, 0.0, 0.2).unwrap();
        let r = Radii::uniform(2.0).unwrap();
        let exact = check_local_dominance(&exp_sum(), &constant_weight(10.0), &z0, &r, 1, S, 1e-9).unwrap();
        let bb = check_local_dominance(&exp_sum().as_black_box(), &constant_weight(10.0), &z0, &r, 1, S, 1e-9)
            .unwrap();
        assert_relative_eq!(p(&exact, "p0"), p(&bb, "p0"), max_relative = 1e-9);
    }

    #[test]
    fn kth_max_modulus_examples() {
        let z0 = BidiscPoint::origin();
        let rho = Radii::new(0.2, 0.3).unwrap();
        let rep = check_kth_max_modulus(&poly(&[(0, 0, 3.0, 1.0)]), &z0, &rho, MultiIndex::ZERO, S).unwrap();
        assert_relative_eq!(p(&rep, "p"), 1.0);
        let rep = check_kth_max_modulus(&exp_sum(), &z0, &rho, MultiIndex::ZERO, S).unwrap();
        assert_relative_eq!(p(&rep, "p"), 0.5f64.exp(), max_relative = 1e-12);
        let rep = check_kth_max_modulus(&poly(&[(1, 0, 1.0, 0.0)]), &z0, &rho, MultiIndex::new(1, 0), S).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_relative_eq!(p(&rep, "p"), 1.0);
        let rep = check_kth_max_modulus(&poly(&[(1, 0, 1.0, 0.0)]), &z0, &rho, MultiIndex::ZERO, S).unwrap();
        assert_eq!(rep.verdict, Verdict::Fails);
    }

    #[test]
    fn pure_partial_examples() {
        let z0 = BidiscPoint::origin();
        let rho = Radii::uniform(0.25).unwrap();
        let rep = check_pure_partials(&poly(&[(0, 0, 2.0, 0.0)]), &z0, &rho, 0, 0, S).unwrap();
        assert_relative_eq!(p(&rep, "p"), 1.0);
        let rep = check_pure_partials(&exp_sum(), &z0, &rho, 0, 0, S).unwrap();
        assert_relative_eq!(p(&rep, "p1"), 0.5f64.exp(), max_relative = 1e-12);
        assert_relative_eq!(p(&rep, "p2"), 0.5f64.exp(), max_relative = 1e-12);
        let rep = check_pure_partials(&poly(&[(1, 0, 1.0, 0.0), (0, 1, 1.0, 0.0)]), &z0, &rho, 0, 0, S).unwrap();
        assert_eq!(rep.verdict, Verdict::Fails);
    }

    #[test]
    fn polydisc_outside_is_an_error() {
        let z0 = BidiscPoint::from_parts(0.9, 0.0, 0.0, 0.0).unwrap();
        let rho = Radii::uniform(0.2).unwrap();
        assert!(matches!(
            check_kth_max_modulus(&exp_sum(), &z0, &rho, MultiIndex::ZERO, S),
            Err(Error::SkeletonOutsideDomain { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn witnesses_are_scalar_invariant(
            coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
            lam in (0.01f64..100.0, 0.0f64..6.3),
        ) {
            let f = AnalyticFunction::polynomial(Polynomial::new(
                degree_enumerate(2).into_iter().zip(&coeffs).map(|(k, &(re, im))| (k, c(re, im))),
            ));
            let g = f.scaled(Complex::from_polar(lam.0, lam.1));
            let z0 = BidiscPoint::from_parts(0.1, 0.1, -0.2, 0.0).unwrap();
            let rho = Radii::new(0.2, 0.3).unwrap();
            let s = PolarSampling { n_r: 2, n_theta: 6 };
            let l = constant_weight(5.0);
            let pairs = [
                (check_local_dominance(&f, &l, &z0, &Radii::uniform(1.0).unwrap(), 1, s, 1e-9).unwrap(),
                 check_local_dominance(&g, &l, &z0, &Radii::uniform(1.0).unwrap(), 1, s, 1e-9).unwrap(), "p0"),
                (check_kth_max_modulus(&f, &z0, &rho, MultiIndex::new(1, 0), s).unwrap(),
                 check_kth_max_modulus(&g, &z0, &rho, MultiIndex::new(1, 0), s).unwrap(), "p"),
                (check_pure_partials(&f, &z0, &rho, 1, 1, s).unwrap(),
                 check_pure_partials(&g, &z0, &rho, 1, 1, s).unwrap(), "p"),
            ];
            for (a, b, key) in pairs {
                prop_assert_eq!(a.verdict, b.verdict);
                if let (Some(x), Some(y)) = (a.get(key).and_then(|v| v.as_f64()), b.get(key).and_then(|v| v.as_f64())) {
                    prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
                }
            }
        }
    }
}
