//! Property checks for the documented invariants, runnable one by one so the
//! acceptance target can print a line per property.

use bindex::coefficients::{default_extraction_radii, diagonal_max, eval_series, CauchyOptions};
use bindex::domain::{degree_enumerate, simplex_len};
use bindex::grid::skeleton_points;
use bindex::weights::{comparability, ComparabilityOptions};
use bindex::*;
use num_complex::Complex;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 200;

type Check = fn() -> Result<(), String>;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn coeffs(degree: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), simplex_len(degree))
}

fn poly(c: &[(f64, f64)], degree: usize) -> AnalyticFunction<f64> {
    AnalyticFunction::polynomial(Polynomial::new(
        degree_enumerate(degree).into_iter().zip(c).map(|(k, &(re, im))| (k, Complex::new(re, im))),
    ))
}

fn point() -> impl Strategy<Value = BidiscPoint<f64>> {
    (0.0f64..0.5, 0.0f64..6.3, 0.0f64..0.5, 0.0f64..6.3).prop_map(|(r1, t1, r2, t2)| {
        BidiscPoint::new(Complex::from_polar(r1, t1), Complex::from_polar(r2, t2)).unwrap()
    })
}

fn unit_phase() -> impl Strategy<Value = Complex<f64>> {
    (0.01f64..100.0, 0.0f64..6.3).prop_map(|(m, t)| Complex::from_polar(m, t))
}

fn constant(c: f64) -> WeightField<f64> {
    WeightField::constant(c, c, 2.0).unwrap()
}

fn example_weight() -> WeightField<f64> {
    WeightField::boundary_power([[2.0, 1.0], [1.0, 2.0]], 4.0, 2.0).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg.into()))
    }
}

fn ok<T>(r: bindex::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

pub fn degree_enumeration() -> Result<(), String> {
    run(0usize..40, |n| {
        let e = degree_enumerate(n);
        let next = degree_enumerate(n + 1);
        ensure(e.len() == (n + 1) * (n + 2) / 2, "length")?;
        ensure(next[..e.len()] == e[..], "prefix")?;
        let mut sorted = e.clone();
        sorted.sort();
        sorted.dedup();
        ensure(sorted.len() == e.len(), "duplicates")
    })
}

pub fn log_magnitude_round_trip() -> Result<(), String> {
    run(-300.0f64..300.0, |e| {
        let x = 10f64.powf(e);
        let y = LogMagnitude::from_linear(x).to_linear();
        ensure((y - x).abs() <= 1e-12 * x, format!("{x} -> {y}"))
    })
}

pub fn lambda_brackets_one() -> Result<(), String> {
    let outer = Grid::polar(0.8, PolarSampling::new(2, 3).unwrap()).unwrap();
    run((0.05f64..2.0, 0.05f64..2.0), |(r1, r2)| {
        let est = ok(lambda_bounds(&example_weight(), &ok(Radii::new(r1, r2))?, &outer, PolarSampling::new(2, 4).unwrap()))?;
        ensure((0..2).all(|j| est.lambda1[j] <= 1.0 && est.lambda2[j] >= 1.0), format!("{est:?}"))
    })
}

pub fn lambda_refinement_monotone() -> Result<(), String> {
    run((0.05f64..2.0, 0.05f64..2.0, 0.3f64..0.9), |(r1, r2, m)| {
        let i = ok(bindex::lambda_refined(
            &example_weight(),
            &ok(Radii::new(r1, r2))?,
            m,
            PolarSampling::new(1, 2).unwrap(),
            PolarSampling::new(1, 3).unwrap(),
        ))?;
        ensure(
            (0..2).all(|j| i.fine.lambda1[j] <= i.coarse.lambda1[j] && i.fine.lambda2[j] >= i.coarse.lambda2[j]),
            "refinement moved the bounds inward",
        )
    })
}

pub fn comparability_of_multiple() -> Result<(), String> {
    let levels = Grid::exhaustion(&[0.5, 0.9], PolarSampling::new(1, 3).unwrap()).unwrap();
    run(1e-3f64..1e3, |c| {
        let l = example_weight();
        let w = ok(comparability(&l, &l.scaled(c), &levels, ComparabilityOptions::default()))?;
        let close = |x: f64| (x * c - 1.0).abs() <= 1e-12;
        ensure(w.theta_low.iter().chain(&w.theta_high).all(|&x| close(x)), format!("{w:?}"))
    })
}

pub fn scaled_weight_multiple() -> Result<(), String> {
    run((0.05f64..2.0, 0.05f64..2.0, point()), |(r1, r2, p)| {
        let l = example_weight();
        let s = ok(scaled_weight(&l, &ok(Radii::new(r1, r2))?))?;
        let (a, b) = (ok(l.eval(&p))?, ok(s.eval(&p))?);
        ensure(
            (b[0] - 2.0 / r1 * a[0]).abs() <= 1e-14 * b[0] && (b[1] - 2.0 / r2 * a[1]).abs() <= 1e-14 * b[1],
            "scaled weight",
        )
    })
}

pub fn cauchy_matches_closed_form() -> Result<(), String> {
    let families = [
        ClosedForm::ExpReciprocal,
        ClosedForm::RationalGeom,
        ClosedForm::ExpLinear { a1: Complex::new(1.0, 0.5), a2: Complex::new(-2.0, 0.0) },
        ClosedForm::InverseProduct { c1: Complex::new(1.5, 0.0), c2: Complex::new(0.0, -2.0) },
    ];
    run((0usize..4, point(), 1usize..=12), |(i, z0, order)| {
        let f = ok(AnalyticFunction::closed_form(families[i]))?;
        let exact = ok(taylor_closed_form(&f, &z0, order))?;
        let rho = default_extraction_radii(&z0);
        let cauchy = ok(taylor_cauchy(&f, &z0, &rho, order, CauchyOptions::new(128)))?;
        let scale = exact
            .entries()
            .map(|(k, e)| e.to_linear() * rho.r1().powi(k.k1 as i32) * rho.r2().powi(k.k2 as i32))
            .fold(0.0, f64::max);
        for (k, e) in exact.entries() {
            let (x, y) = (e.to_complex(), cauchy.coefficient(k));
            let w = rho.r1().powi(k.k1 as i32) * rho.r2().powi(k.k2 as i32);
            // terms far below the largest one carry only round-off relative to it
            let bound = if x.norm() * w >= 1e-6 * scale { 1e-9 * x.norm() } else { 1e-13 * scale / w };
            ensure((x - y).norm() <= bound, format!("{} at {k}: {x} vs {y}", f.label))?;
        }
        Ok(())
    })
}

pub fn cauchy_radius_independence() -> Result<(), String> {
    run((coeffs(5), point(), 0.3f64..1.0), |(c, z0, shrink)| {
        let f = poly(&c, 5).as_black_box();
        let rho = default_extraction_radii(&z0);
        let a = ok(taylor_cauchy(&f, &z0, &rho, 8, CauchyOptions::new(64)))?;
        let b = ok(taylor_cauchy(&f, &z0, &ok(rho.scale(shrink))?, 8, CauchyOptions::new(64)))?;
        let tol = a.tail_indicator.max(b.tail_indicator).max(1e-10);
        let scale = a.entries().map(|(_, e)| e.to_linear()).fold(0.0, f64::max);
        for k in degree_enumerate(8) {
            let (x, y) = (a.coefficient(k), b.coefficient(k));
            let w = (rho.r1() * shrink).powi(k.k1 as i32) * (rho.r2() * shrink).powi(k.k2 as i32);
            ensure((x - y).norm() * w <= tol * scale.max(x.norm() * w), format!("{k}: {x} vs {y}"))?;
        }
        Ok(())
    })
}

pub fn recentering_consistency() -> Result<(), String> {
    run((coeffs(6), point(), (-1.0f64..1.0, -1.0f64..1.0)), |(c, z0, (u, v))| {
        let f = poly(&c, 6);
        let t = ok(taylor_closed_form(&f, &z0, 6))?;
        let rho = default_extraction_radii(&z0);
        let z = ok(z0.offset(Complex::new(u * rho.r1() * 0.7, 0.0), Complex::new(0.0, v * rho.r2() * 0.7)))?;
        let (x, y) = (ok(eval_series(&t, &z))?, ok(f.eval(&z))?);
        let scale = t.entries().map(|(_, e)| e.to_linear()).sum::<f64>().max(y.norm());
        ensure((x - y).norm() <= 1e-12 * scale, format!("{x} vs {y}"))
    })
}

pub fn normalize_multiplicative() -> Result<(), String> {
    run((coeffs(4), point(), 0.2f64..5.0, 1.0f64..10.0), |(c, z0, w, s)| {
        let t = ok(taylor_closed_form(&poly(&c, 4), &z0, 4))?;
        let a = ok(normalize(&t, &constant(w)))?;
        let b = ok(normalize(&t, &constant(w).scaled(s)))?;
        for k in degree_enumerate(4) {
            let want = a.log_value(k) - k.order() as f64 * s.ln();
            ensure((b.log_value(k) - want).abs() <= 1e-12 * want.abs().max(1.0), format!("{k}"))?;
        }
        Ok(())
    })
}

pub fn weight_scaling_monotone() -> Result<(), String> {
    run((coeffs(5), point(), 0.3f64..3.0, 1.0f64..5.0), |(c, z0, w, s)| {
        let f = poly(&c, 5);
        let a = ok(local_index(&f, &constant(w), &z0, IndexOptions::new(7)))?;
        let b = ok(local_index(&f, &constant(w).scaled(s), &z0, IndexOptions::new(7)))?;
        ensure(b.n0.lower_bound() <= a.n0.lower_bound(), format!("{} > {}", b.n0, a.n0))
    })
}

pub fn index_scalar_invariance() -> Result<(), String> {
    run((coeffs(5), point(), unit_phase()), |(c, z0, lam)| {
        let f = poly(&c, 5);
        let l = constant(1.3);
        let a = ok(local_index(&f, &l, &z0, IndexOptions::new(7)))?;
        let b = ok(local_index(&f.scaled(lam), &l, &z0, IndexOptions::new(7)))?;
        ensure(a.n0 == b.n0 && a.argmax_index == b.argmax_index, "index changed")
    })
}

pub fn maximal_term_consistency() -> Result<(), String> {
    run((coeffs(5), 0.1f64..3.0, 0.1f64..3.0, 1.0f64..2.0), |(c, r1, r2, g)| {
        let t = ok(taylor_closed_form(&poly(&c, 5), &BidiscPoint::origin(), 5))?;
        let m = ok(maximal_term(&t, &ok(Radii::new(r1, r2))?, 0.0))?;
        let brute = degree_enumerate(5)
            .into_iter()
            .map(|k| t.coefficient(k).norm() * r1.powi(k.k1 as i32) * r2.powi(k.k2 as i32))
            .fold(0.0, f64::max);
        ensure((m.mu.to_linear() - brute).abs() <= 1e-12 * brute, "mu")?;
        let big = ok(maximal_term(&t, &ok(Radii::new(r1 * g, r2 * g))?, 0.0))?;
        ensure(big.nu_norm >= m.nu_norm, "central index decreased")
    })
}

pub fn max_modulus_bounds() -> Result<(), String> {
    run((coeffs(5), point(), 0.05f64..0.25, 0.05f64..0.25), |(c, z0, r1, r2)| {
        let f = poly(&c, 5);
        let r = ok(Radii::new(r1, r2))?;
        let mm = ok(max_modulus(&f, &z0, &r, 16))?;
        for p in ok(skeleton_points(&z0, &r, 16))? {
            ensure(ok(f.eval(&p))?.norm() <= mm.m, "sample above max")?;
        }
        let t = ok(taylor_closed_form(&f, &z0, 5))?;
        for (k, e) in t.entries() {
            ensure(e.to_linear() * r1.powi(k.k1 as i32) * r2.powi(k.k2 as i32) <= mm.m * (1.0 + 1e-9), "Cauchy")?;
        }
        Ok(())
    })
}

pub fn search_contract() -> Result<(), String> {
    let seq = prop::collection::vec(prop_oneof![Just(0.0f64), 1e-3f64..1e3], 1..12);
    run((seq, 0usize..3, 0.1f64..2.0), |(a, n, d)| {
        if a.iter().all(|&v| v == 0.0) {
            return Ok(());
        }
        let a: Vec<_> = a.iter().map(|&v| LogMagnitude::from_linear(v)).collect();
        let res = match find_main_polynomial(&a, n, d, None) {
            Err(Error::IterationOverrun(_)) => return Ok(()),
            other => ok(other)?,
        };
        for w in res.trace.windows(2) {
            ensure(w[1].s <= w[0].s, "s increased")?;
        }
        let lc = res.c_log.log_abs;
        let last = res.trace.last().unwrap();
        let top = a[res.k0].log_abs + res.k0 as f64 * res.r_log.log_abs;
        for k in (0..=last.range).filter(|&k| k != res.k0) {
            if !a[k].is_zero() {
                let v = a[k].log_abs + k as f64 * res.r_log.log_abs;
                ensure(v <= top - lc + 1e-9, format!("k = {k}"))?;
            }
        }
        for step in &res.trace {
            let brute = (0..=step.range)
                .filter(|&k| !a[k].is_zero())
                .map(|k| a[k].log_abs + k as f64 * step.r.log_abs)
                .fold(f64::NEG_INFINITY, f64::max);
            ensure(step.mu.log_abs == brute, "mu differs from the brute-force max")?;
        }
        Ok(())
    })
}

pub fn search_premise_bound() -> Result<(), String> {
    run((coeffs(4), point(), 0.5f64..4.0), |(c, z0, w)| {
        let f = poly(&c, 4);
        let l = constant(w);
        let idx = ok(local_index(&f, &l, &z0, IndexOptions::new(6)))?;
        let Some(n) = idx.n0.bounded() else { return Ok(()) };
        let g = ok(normalize(&ok(taylor_closed_form(&f, &z0, 6))?, &l))?;
        let res = ok(find_main_polynomial(&diagonal_max(&g), n, 1.0, Some(n)))?;
        ensure(res.s0_within_index == Some(true), format!("s0 = {} above n0 = {n}", res.trace[0].s))?;
        ensure(res.m0 <= 2 * n + 1, format!("m0 = {} for N = {n}", res.m0))
    })
}

pub fn hayman_necessity() -> Result<(), String> {
    run((coeffs(4), point(), 0.5f64..4.0), |(c, z0, w)| {
        let f = poly(&c, 4);
        let l = constant(w);
        let idx = ok(local_index(&f, &l, &z0, IndexOptions::new(6)))?;
        let Some(n) = idx.n0.bounded() else { return Ok(()) };
        let rep = ok(check_hayman(&f, &l, &Grid::explicit(vec![z0]), n, Some(n)))?;
        ensure(rep.get("within_necessity_bound").and_then(|v| v.as_bool()) == Some(true), format!("{rep:?}"))
    })
}

pub fn ratio_bound_consistency() -> Result<(), String> {
    let (ri, ro) = (Radii::uniform(0.5).unwrap(), Radii::uniform(2.0).unwrap());
    run((coeffs(4), point()), |(c, z0)| {
        let f = poly(&c, 4);
        let l = constant(5.0);
        let rep = ok(check_modulus_ratio(&f, &l, &Grid::explicit(vec![z0]), &ri, &ro, 16))?;
        let p1 = rep.get("p1").and_then(|v| v.as_f64()).unwrap();
        let bound = ok(index_bound_from_ratio(&ri, &ro, p1))?.floor() as usize;
        let idx = ok(local_index(&f, &l, &z0, IndexOptions::new(6)))?;
        ensure(bound >= idx.n0.lower_bound(), format!("bound {bound} < {}", idx.n0))
    })
}

pub fn ratio_monotone() -> Result<(), String> {
    run((coeffs(3), point(), 0.1f64..0.6, 0.7f64..1.4, 1.0f64..1.4), |(c, z0, a, b, g)| {
        let f = poly(&c, 3);
        let l = constant(5.0);
        let grid = Grid::explicit(vec![z0]);
        let p1 = |ri: Radii<f64>, ro: Radii<f64>| -> Result<f64, TestCaseError> {
            let rep = ok(check_modulus_ratio(&f, &l, &grid, &ri, &ro, 128))?;
            Ok(rep.get("p1").and_then(|v| v.as_f64()).unwrap())
        };
        let (ri, ro) = (ok(Radii::uniform(a))?, ok(Radii::uniform(b))?);
        let base = p1(ri, ro)?;
        // skeleton sampling error of a cubic on 128 angles stays far below 1%
        ensure(p1(ri, ok(ro.scale(g))?)? >= base * (1.0 - 1e-2), "R'' monotonicity")?;
        ensure(p1(ok(ri.scale(1.0 / g))?, ro)? >= base * (1.0 - 1e-2), "R' monotonicity")
    })
}

pub fn checker_scalar_invariance() -> Result<(), String> {
    let s = PolarSampling::new(2, 6).unwrap();
    run((coeffs(3), point(), unit_phase()), |(c, z0, lam)| {
        let f = poly(&c, 3);
        let g = f.scaled(lam);
        let l = constant(5.0);
        let grid = Grid::explicit(vec![z0]);
        let rho = ok(Radii::new(0.1, 0.15))?;
        let (ri, ro) = (ok(Radii::uniform(0.5))?, ok(Radii::uniform(1.5))?);
        let pairs = [
            (ok(check_local_dominance(&f, &l, &z0, &ok(Radii::uniform(1.0))?, 1, s, 1e-9))?,
             ok(check_local_dominance(&g, &l, &z0, &ok(Radii::uniform(1.0))?, 1, s, 1e-9))?, "p0"),
            (ok(check_kth_max_modulus(&f, &z0, &rho, MultiIndex::new(1, 0), s))?,
             ok(check_kth_max_modulus(&g, &z0, &rho, MultiIndex::new(1, 0), s))?, "p"),
            (ok(check_pure_partials(&f, &z0, &rho, 1, 1, s))?, ok(check_pure_partials(&g, &z0, &rho, 1, 1, s))?, "p"),
            (ok(check_modulus_ratio(&f, &l, &grid, &ri, &ro, 16))?, ok(check_modulus_ratio(&g, &l, &grid, &ri, &ro, 16))?, "p1"),
            (ok(check_hayman(&f, &l, &grid, 1, None))?, ok(check_hayman(&g, &l, &grid, 1, None))?, "c_min"),
            (ok(check_tail_dominance(&f, &l, &grid, 1, 0.5, 4))?,
             ok(check_tail_dominance(&g, &l, &grid, 1, 0.5, 4))?, "min_head_over_tail"),
        ];
        for (a, b, key) in pairs {
            ensure(a.verdict == b.verdict, format!("{key}: verdict"))?;
            if let (Some(x), Some(y)) = (a.get(key).and_then(|v| v.as_f64()), b.get(key).and_then(|v| v.as_f64())) {
                ensure(x == y || (x - y).abs() <= 1e-9 * x.abs(), format!("{key}: {x} vs {y}"))?;
            }
        }
        Ok(())
    })
}

/// Every invariant, named after the property it checks.
pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        ("degree enumeration is a duplicate-free prefix chain", degree_enumeration),
        ("log-magnitude round trip", log_magnitude_round_trip),
        ("lambda estimates bracket 1", lambda_brackets_one),
        ("lambda refinement widens the bounds", lambda_refinement_monotone),
        ("comparability of L against c L is 1 / c", comparability_of_multiple),
        ("scaled weight is a pointwise multiple", scaled_weight_multiple),
        ("Cauchy extraction matches closed forms", cauchy_matches_closed_form),
        ("Cauchy extraction is radius independent", cauchy_radius_independence),
        ("re-centered series evaluates the polynomial", recentering_consistency),
        ("normalize is multiplicative in the weight", normalize_multiplicative),
        ("weight scaling never raises the local index", weight_scaling_monotone),
        ("local index is scalar invariant", index_scalar_invariance),
        ("maximal term matches brute force", maximal_term_consistency),
        ("max modulus dominates samples and Cauchy terms", max_modulus_bounds),
        ("radius search trace contract", search_contract),
        ("radius search stops by 2N+1 under the premise", search_premise_bound),
        ("Hayman necessity bound", hayman_necessity),
        ("ratio bound dominates the local index", ratio_bound_consistency),
        ("modulus ratio is monotone in the radii", ratio_monotone),
        ("checkers are scalar invariant", checker_scalar_invariance),
    ]
}
