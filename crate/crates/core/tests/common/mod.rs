#![allow(dead_code)]

pub mod invariants;

use bindex::{AnalyticFunction, BidiscPoint, Grid, MultiIndex, PolarSampling, Polynomial, WeightField};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_b1d1;
pub const CORPUS_SIZE: usize = 20;
pub const CORPUS_DEGREE: usize = 6;
pub const CORPUS_WEIGHT: f64 = 5.0;
pub const CORPUS_BETA: f64 = 2.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_unit_phase(rng: &mut ChaCha8Rng) -> Complex<f64> {
    Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Dense random polynomial of total degree `<= degree`, magnitudes in `[0.1, 1]`.
pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Polynomial<f64> {
    let mut terms = Vec::new();
    for d in 0..=degree {
        for k1 in 0..=d {
            let m = 10f64.powf(rng.gen_range(-1.0..0.0));
            terms.push((MultiIndex::new(k1, d - k1), random_unit_phase(rng) * m));
        }
    }
    Polynomial::new(terms)
}

/// The golden corpus: sparse polynomials of degree `<= 6` with one dominant
/// degree band cycling through 0..=3. Under the weight 5 the other bands stay
/// small enough after re-centering on the corpus grid that the grid index is
/// the dominant degree.
pub fn golden_corpus() -> Vec<Polynomial<f64>> {
    let mut rng = rng(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|i| {
            let lead = i % 4;
            let mut terms = Vec::new();
            for d in 0..=CORPUS_DEGREE {
                for k1 in 0..=d {
                    if d > 0 && rng.gen_bool(0.4) {
                        continue;
                    }
                    // a*_K at the origin is |c_K| / 5^d; degree `lead` dominates
                    let log_a = if d == lead { 0.0 } else { rng.gen_range(-6.0..-4.0) };
                    let m = 10f64.powf(log_a) * CORPUS_WEIGHT.powi(d as i32);
                    terms.push((MultiIndex::new(k1, d - k1), random_unit_phase(&mut rng) * m));
                }
            }
            let mut p = Polynomial::new(terms);
            if p.is_zero() {
                p = Polynomial::constant(Complex::new(1.0, 0.0));
            }
            p
        })
        .collect()
}

pub fn corpus_weight() -> WeightField<f64> {
    WeightField::constant(CORPUS_WEIGHT, CORPUS_WEIGHT, CORPUS_BETA).unwrap()
}

pub fn corpus_grid() -> Grid<f64> {
    Grid::polar(0.5, PolarSampling::new(2, 4).unwrap()).unwrap()
}

pub fn as_function(p: &Polynomial<f64>) -> AnalyticFunction<f64> {
    AnalyticFunction::polynomial(p.clone())
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `F^{(K)}(z0)` by differentiating every monomial.
pub fn derivative(p: &Polynomial<f64>, z0: &BidiscPoint<f64>, k: MultiIndex) -> Complex<f64> {
    let mut acc = Complex::new(0.0, 0.0);
    for (j, c) in p.terms() {
        if j.k1 >= k.k1 && j.k2 >= k.k2 {
            let w = falling(j.k1, k.k1) * falling(j.k2, k.k2);
            acc += c * w * z0.z1().powu((j.k1 - k.k1) as u32) * z0.z2().powu((j.k2 - k.k2) as u32);
        }
    }
    acc
}

/// Least `m` with `a*_K <= (1 + tol) max_{||J|| <= m} a*_J` for every `||K|| <= cap`,
/// by direct scan; also the first index attaining the dominating maximum.
pub fn brute_force_index(
    p: &Polynomial<f64>,
    z0: &BidiscPoint<f64>,
    l: [f64; 2],
    cap: usize,
    tol: f64,
) -> (usize, MultiIndex) {
    let a = |k1: usize, k2: usize| {
        derivative(p, z0, MultiIndex::new(k1, k2)).norm()
            / (factorial(k1) * factorial(k2) * l[0].powi(k1 as i32) * l[1].powi(k2 as i32))
    };
    for m in 0..=cap {
        let mut best = -1.0;
        let mut arg = MultiIndex::ZERO;
        for d in 0..=m {
            for j1 in 0..=d {
                let v = a(j1, d - j1);
                if v > best {
                    best = v;
                    arg = MultiIndex::new(j1, d - j1);
                }
            }
        }
        let mut ok = true;
        'scan: for k1 in 0..=cap {
            for k2 in 0..=(cap - k1) {
                if a(k1, k2) > (1.0 + tol) * best {
                    ok = false;
                    break 'scan;
                }
            }
        }
        if ok {
            return (m, arg);
        }
    }
    (cap, MultiIndex::ZERO)
}
