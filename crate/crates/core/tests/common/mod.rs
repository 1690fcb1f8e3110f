//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

/// `binom(top, k)` for rational `top`.
fn binom(top: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for j in 1..=k {
        let j = BigRational::from_integer(BigInt::from(j));
        let kk = BigRational::from_integer(BigInt::from(k));
        acc = acc * (top - &kk + &j) / j;
    }
    acc
}

/// Hypergeometric sum for `L_n^alpha(s)` in exact rational arithmetic.
///
/// Returns the value and the sum of absolute terms, both rounded once.
pub fn laguerre_series(n: u32, alpha: f64, s: f64) -> (f64, f64) {
    let (a, x) = (exact(alpha), exact(s));
    let top = &a + BigRational::from_integer(BigInt::from(n));
    let mut sum = BigRational::zero();
    let mut mag = BigRational::zero();
    let mut fact = BigRational::one();
    let mut power = BigRational::one();
    for k in 0..=n {
        if k > 0 {
            fact *= BigRational::from_integer(BigInt::from(k));
            power *= &x;
        }
        let mut term = binom(&top, n - k) * &power / &fact;
        if k % 2 == 1 {
            term = -term;
        }
        mag += term.abs();
        sum += term;
    }
    (sum.to_f64().unwrap(), mag.to_f64().unwrap())
}

/// Sum over `k` of `binom(n+alpha, n-k) binom(n+beta, k) ((s-1)/2)^k ((s+1)/2)^(n-k)`,
/// exact; returns value and sum of absolute terms.
pub fn jacobi_series(n: u32, alpha: f64, beta: f64, s: f64) -> (f64, f64) {
    let (a, b, x) = (exact(alpha), exact(beta), exact(s));
    let nn = BigRational::from_integer(BigInt::from(n));
    let two = BigRational::from_integer(BigInt::from(2));
    let minus = (&x - BigRational::one()) / &two;
    let plus = (&x + BigRational::one()) / &two;
    let (top_a, top_b) = (&a + &nn, &b + &nn);
    let mut sum = BigRational::zero();
    let mut mag = BigRational::zero();
    for k in 0..=n {
        let mut term = binom(&top_a, n - k) * binom(&top_b, k);
        for _ in 0..k {
            term *= &minus;
        }
        for _ in 0..n - k {
            term *= &plus;
        }
        mag += term.abs();
        sum += term;
    }
    (sum.to_f64().unwrap(), mag.to_f64().unwrap())
}

/// Composite Simpson rule for `f` on `[a, b]` with `2 * half` panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, half: usize) -> f64 {
    let n = 2 * half;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Central second derivative with step `h`.
pub fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

use solvable_dirac::models::{CoulombStrength, ModelKind, ModelSpec, OscillatorStrength};

pub fn oscillator_omega(omega: f64) -> ModelSpec {
    ModelSpec::new(ModelKind::Oscillator(OscillatorStrength::Frequency { omega }), 1.0).unwrap()
}

pub fn oscillator_a(a: f64) -> ModelSpec {
    ModelSpec::new(ModelKind::Oscillator(OscillatorStrength::Physical { a }), 1.0).unwrap()
}

pub fn coulomb_b(b: f64) -> ModelSpec {
    ModelSpec::new(ModelKind::Coulomb(CoulombStrength::Physical { b }), 1.0).unwrap()
}

pub fn coulomb_e2(e2: f64) -> ModelSpec {
    ModelSpec::new(ModelKind::Coulomb(CoulombStrength::Mapped { e2 }), 1.0).unwrap()
}

pub fn morse() -> ModelSpec {
    let kind = ModelKind::Morse { scalar_depth: 2.0, vector_depth: 1.0, offset: 0.5, range: 0.4 };
    ModelSpec::new(kind, 1.0).unwrap()
}

pub fn rosen_morse() -> ModelSpec {
    ModelSpec::new(ModelKind::RosenMorse { amplitude: 1.0, shift: 0.2, range: 0.5 }, 1.0).unwrap()
}

pub fn eckart() -> ModelSpec {
    ModelSpec::new(ModelKind::Eckart { amplitude: 0.5, shift: 1.2, range: 0.25 }, 1.0).unwrap()
}
