//! Generalized Laguerre and Jacobi polynomials.
//!
//! Both families are evaluated with the upward three-term recurrence, which is
//! stable for the modest degrees (n up to a few dozen) used by the bound-state
//! models. Real, non-integer parameters are accepted since several models
//! carry energy-dependent `alpha`/`beta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One orthogonal-polynomial family instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolyFamilyKind {
    /// `L_n^alpha(s)`, orthogonal on `[0, inf)` with weight `s^alpha e^-s`.
    Laguerre { alpha: f64 },
    /// `P_n^(alpha, beta)(s)`, orthogonal on `[-1, 1]` with weight
    /// `(1-s)^alpha (1+s)^beta`.
    Jacobi { alpha: f64, beta: f64 },
}

impl PolyFamilyKind {
    /// Checks the classical parameter range (`alpha, beta > -1`).
    pub fn validate(&self) -> Result<()> {
        match *self {
            PolyFamilyKind::Laguerre { alpha } => check_param("alpha", alpha),
            PolyFamilyKind::Jacobi { alpha, beta } => {
                check_param("alpha", alpha)?;
                check_param("beta", beta)
            }
        }
    }

    /// Evaluates the degree-`n` member at `s` within the classical parameter range.
    pub fn eval(&self, n: u32, s: f64) -> Result<f64> {
        match *self {
            PolyFamilyKind::Laguerre { alpha } => laguerre_eval(n, alpha, s),
            PolyFamilyKind::Jacobi { alpha, beta } => jacobi_eval(n, alpha, beta, s),
        }
    }

    /// Evaluates the recurrence without the classical parameter check.
    ///
    /// The polynomials are rational in `alpha`, `beta`; the recurrence stays
    /// meaningful outside `(-1, inf)` as long as none of its denominators
    /// vanish. Used by models whose polynomial parameters leave the classical
    /// range (the Eckart `beta` is always below -1).
    pub fn eval_continued(&self, n: u32, s: f64) -> Result<f64> {
        match *self {
            PolyFamilyKind::Laguerre { alpha } => laguerre_recurrence(n, alpha, s),
            PolyFamilyKind::Jacobi { alpha, beta } => jacobi_recurrence(n, alpha, beta, s),
        }
    }
}

fn check_param(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > -1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {value} must exceed -1")))
    }
}

/// Generalized Laguerre polynomial `L_n^alpha(s)`.
pub fn laguerre_eval(n: u32, alpha: f64, s: f64) -> Result<f64> {
    check_param("alpha", alpha)?;
    laguerre_recurrence(n, alpha, s)
}

fn laguerre_recurrence(n: u32, alpha: f64, s: f64) -> Result<f64> {
    if !alpha.is_finite() || !s.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite argument (alpha = {alpha}, s = {s})"
        )));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - s;
    for k in 1..n {
        let k = f64::from(k);
        let next = ((2.0 * k + 1.0 + alpha - s) * cur - (k + alpha) * prev) / (k + 1.0);
        if !next.is_finite() {
            return Err(Error::Overflow(format!("L_{n}^{alpha}({s})")));
        }
        prev = cur;
        cur = next;
    }
    if cur.is_finite() {
        Ok(cur)
    } else {
        Err(Error::Overflow(format!("L_{n}^{alpha}({s})")))
    }
}

/// Jacobi polynomial `P_n^(alpha, beta)(s)`.
///
/// Any real `s` is accepted; the Eckart model evaluates at `s = coth(ar) > 1`.
pub fn jacobi_eval(n: u32, alpha: f64, beta: f64, s: f64) -> Result<f64> {
    check_param("alpha", alpha)?;
    check_param("beta", beta)?;
    jacobi_recurrence(n, alpha, beta, s)
}

fn jacobi_recurrence(n: u32, alpha: f64, beta: f64, s: f64) -> Result<f64> {
    if !alpha.is_finite() || !beta.is_finite() || !s.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite argument (alpha = {alpha}, beta = {beta}, s = {s})"
        )));
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 0.5 * (alpha - beta) + 0.5 * (ab + 2.0) * s;
    for k in 1..n {
        let k = f64::from(k);
        let c = 2.0 * k + ab;
        let denom = 2.0 * (k + 1.0) * (k + ab + 1.0) * c;
        if denom == 0.0 {
            return Err(Error::Domain(format!(
                "Jacobi recurrence degenerates at degree {} for alpha = {alpha}, beta = {beta}",
                k + 1.0
            )));
        }
        let a1 = (c + 1.0) * ((c + 2.0) * c * s + alpha * alpha - beta * beta);
        let a2 = 2.0 * (k + alpha) * (k + beta) * (c + 2.0);
        let next = (a1 * cur - a2 * prev) / denom;
        if !next.is_finite() {
            return Err(Error::Overflow(format!("P_{n}^({alpha},{beta})({s})")));
        }
        prev = cur;
        cur = next;
    }
    if cur.is_finite() {
        Ok(cur)
    } else {
        Err(Error::Overflow(format!("P_{n}^({alpha},{beta})({s})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Term-by-term hypergeometric sums, kept apart from the recurrence.
    fn gbinom(top: f64, k: u32) -> f64 {
        // binom(top, k) for real top: prod_{j=1}^{k} (top - k + j) / j
        (1..=k).fold(1.0, |acc, j| acc * (top - f64::from(k) + f64::from(j)) / f64::from(j))
    }

    fn laguerre_series(n: u32, alpha: f64, s: f64) -> f64 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 0..=n {
            if k > 0 {
                fact *= f64::from(k);
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * gbinom(f64::from(n) + alpha, n - k) * s.powi(k as i32) / fact;
        }
        sum
    }

    fn jacobi_series(n: u32, alpha: f64, beta: f64, s: f64) -> f64 {
        let nf = f64::from(n);
        (0..=n)
            .map(|k| {
                gbinom(nf + alpha, n - k)
                    * gbinom(nf + beta, k)
                    * ((s - 1.0) / 2.0).powi(k as i32)
                    * ((s + 1.0) / 2.0).powi((n - k) as i32)
            })
            .sum()
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre_eval(0, 0.5, 7.3).unwrap(), 1.0);
        assert_relative_eq!(laguerre_eval(1, 0.5, 0.0).unwrap(), 1.5);
        // s^2/2 - (a+2)s + (a+1)(a+2)/2 at a = 1, s = 2
        let by_series = laguerre_series(2, 1.0, 2.0);
        assert_relative_eq!(by_series, -1.0, epsilon = 1e-15);
        assert_relative_eq!(laguerre_eval(2, 1.0, 2.0).unwrap(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_eval(0, 2.0, 3.0, -0.4).unwrap(), 1.0);
        assert_eq!(jacobi_eval(1, 1.0, 1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(jacobi_series(2, 0.0, 0.0, 1.0), 1.0, epsilon = 1e-15);
        assert_relative_eq!(jacobi_eval(2, 0.0, 0.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn legendre_specialization() {
        for &s in &[-0.9, -0.3, 0.2, 0.75] {
            let p2 = (3.0 * s * s - 1.0) / 2.0;
            let p3 = (5.0 * s * s * s - 3.0 * s) / 2.0;
            assert_relative_eq!(jacobi_eval(2, 0.0, 0.0, s).unwrap(), p2, epsilon = 1e-14);
            assert_relative_eq!(jacobi_eval(3, 0.0, 0.0, s).unwrap(), p3, epsilon = 1e-14);
        }
    }

    #[test]
    fn low_degree_matches_series() {
        for n in 0..6 {
            for &(a, b, s) in &[(0.3, 1.7, 0.4), (-0.5, 2.0, 3.0), (4.0, -0.2, -0.8)] {
                assert_relative_eq!(
                    laguerre_eval(n, a, s).unwrap(),
                    laguerre_series(n, a, s),
                    max_relative = 1e-12,
                    epsilon = 1e-13
                );
                assert_relative_eq!(
                    jacobi_eval(n, a, b, s).unwrap(),
                    jacobi_series(n, a, b, s),
                    max_relative = 1e-12,
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn continuation_outside_classical_range() {
        // Eckart-like parameters: beta well below -1.
        let (a, b, s) = (3.2, -9.1, 1.7);
        assert!(jacobi_eval(2, a, b, s).is_err());
        let kind = PolyFamilyKind::Jacobi { alpha: a, beta: b };
        assert_relative_eq!(
            kind.eval_continued(2, s).unwrap(),
            jacobi_series(2, a, b, s),
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(laguerre_eval(2, -1.0, 0.3), Err(Error::Domain(_))));
        assert!(matches!(jacobi_eval(2, 0.0, -1.5, 0.3), Err(Error::Domain(_))));
        assert!(matches!(laguerre_eval(2, f64::NAN, 0.3), Err(Error::Domain(_))));
        assert!(PolyFamilyKind::Jacobi { alpha: -2.0, beta: 0.0 }.validate().is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let r = laguerre_eval(60, 0.5, 1e300);
        assert!(matches!(r, Err(Error::Overflow(_))), "{r:?}");
        let r = jacobi_eval(40, 1.0, 1.0, 1e200);
        assert!(matches!(r, Err(Error::Overflow(_))), "{r:?}");
    }
}
