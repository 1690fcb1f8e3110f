//! Factorization of the Schrödinger-like radial equation into a prefactor
//! and a hypergeometric-type polynomial part.
//!
//! A solution of `G'' / G = V(r) - E` is written `G(r) = f(r) F(s(r))`, where
//! `F` obeys
//!
//! ```text
//! F'' + (tau / sigma) F' + (sigma_tilde / sigma²) F = 0
//! ```
//!
//! and the prefactor follows from the coordinate map alone:
//!
//! ```text
//! f(r) = (s')^(-1/2) exp[ 1/2 ∫^{s(r)} tau/sigma ds ]
//! ```
//!
//! The potential and energy are split as `V = V_f + V_F`, `E = E_f + E_F`
//! with `f''/f = V_f - E_f` and `-(sigma_tilde/sigma²) s'² = V_F - E_F`.
//! The radial equation drops the derivatives of `V_S` and `V_V`, exactly as
//! the reduction it is built on; the first-order closure check in
//! [`crate::oracle`] measures what that costs.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{MappedParams, ModelSpec};
use crate::special_poly::PolyFamilyKind;

/// Which of the two spin-orbit partners a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinBranch {
    /// `j = l + 1/2`, `k = -(l + 1)`.
    Aligned,
    /// `j = l - 1/2`, `k = +l`; requires `l >= 1`.
    Antialigned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    branch: SpinBranch,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, branch: SpinBranch) -> Result<Self> {
        if branch == SpinBranch::Antialigned && l == 0 {
            return Err(Error::InvalidQuantumNumbers(
                "the j = l - 1/2 branch needs l >= 1".into(),
            ));
        }
        Ok(Self { n, l, branch })
    }

    /// State on the `k = -(l + 1)` branch, the one the closed forms cover.
    pub fn aligned(n: u32, l: u32) -> Self {
        Self { n, l, branch: SpinBranch::Aligned }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn branch(&self) -> SpinBranch {
        self.branch
    }

    /// Spin-orbit quantum number.
    pub fn k(&self) -> i64 {
        match self.branch {
            SpinBranch::Aligned => -(i64::from(self.l) + 1),
            SpinBranch::Antialigned => i64::from(self.l),
        }
    }

    /// `k(k+1)`, equal to `l(l+1)` on both branches.
    pub fn centrifugal(&self) -> f64 {
        let k = self.k() as f64;
        k * (k + 1.0)
    }
}

/// Shared, immutable real function of the radial variable.
#[derive(Clone)]
pub struct RadialFn(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl RadialFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.0)(r)
    }

    /// Like [`RadialFn::eval`] but reports a non-finite value as a singularity.
    pub fn try_eval(&self, r: f64) -> Result<f64> {
        let v = (self.0)(r);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Singularity(format!("non-finite value at r = {r}")))
        }
    }
}

impl fmt::Debug for RadialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RadialFn(..)")
    }
}

/// Monotone coordinate map `r -> s(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum CoordinateMap {
    /// `s = omega r² / 2` on `(0, inf)`.
    HalfSquare { omega: f64 },
    /// `s = scale r` on `(0, inf)`.
    Linear { scale: f64 },
    /// `s = amplitude e^(-rate r)` on the whole line.
    Exponential { amplitude: f64, rate: f64 },
    /// `s = tanh(rate r)` on the whole line.
    Tanh { rate: f64 },
    /// `s = coth(rate r)` on `(0, inf)`.
    Coth { rate: f64 },
}

// ln cosh x without overflow.
fn ln_cosh(x: f64) -> f64 {
    let ax = x.abs();
    ax + (-2.0 * ax).exp().ln_1p() - std::f64::consts::LN_2
}

// ln sinh x for x > 0.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
}

impl CoordinateMap {
    pub fn identifier(&self) -> &'static str {
        match self {
            CoordinateMap::HalfSquare { .. } => "omega*r^2/2",
            CoordinateMap::Linear { .. } => "scale*r",
            CoordinateMap::Exponential { .. } => "amplitude*exp(-rate*r)",
            CoordinateMap::Tanh { .. } => "tanh(rate*r)",
            CoordinateMap::Coth { .. } => "coth(rate*r)",
        }
    }

    /// Open interval of admissible `r`.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            CoordinateMap::HalfSquare { .. }
            | CoordinateMap::Linear { .. }
            | CoordinateMap::Coth { .. } => (0.0, f64::INFINITY),
            CoordinateMap::Exponential { .. } | CoordinateMap::Tanh { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        let (lo, hi) = self.domain();
        r.is_finite() && r > lo && r < hi
    }

    fn check(&self, r: f64) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "r = {r} outside the domain of s(r) = {}",
                self.identifier()
            )))
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        let valid = match *self {
            CoordinateMap::HalfSquare { omega } => ok(omega),
            CoordinateMap::Linear { scale } => ok(scale),
            CoordinateMap::Exponential { amplitude, rate } => ok(amplitude) && ok(rate),
            CoordinateMap::Tanh { rate } | CoordinateMap::Coth { rate } => ok(rate),
        };
        if valid {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "coordinate map {self:?} needs finite positive parameters"
            )))
        }
    }

    pub fn s(&self, r: f64) -> f64 {
        match *self {
            CoordinateMap::HalfSquare { omega } => 0.5 * omega * r * r,
            CoordinateMap::Linear { scale } => scale * r,
            CoordinateMap::Exponential { amplitude, rate } => amplitude * (-rate * r).exp(),
            CoordinateMap::Tanh { rate } => (rate * r).tanh(),
            CoordinateMap::Coth { rate } => 1.0 / (rate * r).tanh(),
        }
    }

    /// `ds/dr`.
    pub fn ds(&self, r: f64) -> f64 {
        match *self {
            CoordinateMap::HalfSquare { omega } => omega * r,
            CoordinateMap::Linear { scale } => scale,
            CoordinateMap::Exponential { rate, .. } => -rate * self.s(r),
            CoordinateMap::Tanh { rate } => rate / (rate * r).cosh().powi(2),
            CoordinateMap::Coth { rate } => -rate / (rate * r).sinh().powi(2),
        }
    }

    pub fn ln_abs_ds(&self, r: f64) -> f64 {
        match *self {
            CoordinateMap::HalfSquare { omega } => (omega * r).ln(),
            CoordinateMap::Linear { scale } => scale.ln(),
            CoordinateMap::Exponential { amplitude, rate } => (rate * amplitude).ln() - rate * r,
            CoordinateMap::Tanh { rate } => rate.ln() - 2.0 * ln_cosh(rate * r),
            CoordinateMap::Coth { rate } => rate.ln() - 2.0 * ln_sinh(rate * r),
        }
    }

    pub fn ln_abs_s(&self, r: f64) -> f64 {
        match *self {
            CoordinateMap::HalfSquare { omega } => (0.5 * omega).ln() + 2.0 * r.abs().ln(),
            CoordinateMap::Exponential { amplitude, rate } => amplitude.ln() - rate * r,
            _ => self.s(r).abs().ln(),
        }
    }

    /// `ln|1 - s(r)|`, accurate where `s` approaches 1.
    pub fn ln_abs_one_minus_s(&self, r: f64) -> f64 {
        match *self {
            CoordinateMap::Tanh { rate } => -rate * r - ln_cosh(rate * r),
            CoordinateMap::Coth { rate } => -rate * r - ln_sinh(rate * r),
            _ => (1.0 - self.s(r)).abs().ln(),
        }
    }

    /// `ln|1 + s(r)|`, accurate where `s` approaches -1.
    pub fn ln_abs_one_plus_s(&self, r: f64) -> f64 {
        match *self {
            CoordinateMap::Tanh { rate } => rate * r - ln_cosh(rate * r),
            CoordinateMap::Coth { rate } => rate * r - ln_sinh(rate * r),
            _ => (1.0 + self.s(r)).abs().ln(),
        }
    }
}

/// The rational coefficient `sigma_tilde / sigma²` of the hypergeometric-type equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum SigmaTilde {
    /// `sigma_tilde = n s` with `sigma = s` (Laguerre equation).
    Laguerre { n: u32 },
    /// Whittaker form of the Laguerre equation, `sigma = 1`:
    /// `(2n+alpha+1)/(2s) + (1-alpha²)/(4s²) - 1/4`.
    Whittaker { n: u32, alpha: f64 },
    /// Normal form of the Jacobi equation, `sigma = 1`:
    /// `(1-alpha²)/(4(1-s)²) + (1-beta²)/(4(1+s)²) + c_n/(1-s²)`.
    JacobiNormal { n: u32, alpha: f64, beta: f64 },
}

impl SigmaTilde {
    pub fn identifier(&self) -> &'static str {
        match self {
            SigmaTilde::Laguerre { .. } => "n*s",
            SigmaTilde::Whittaker { .. } => "(2n+alpha+1)/(2s)+(1-alpha^2)/(4s^2)-1/4",
            SigmaTilde::JacobiNormal { .. } => {
                "(1-alpha^2)/(4(1-s)^2)+(1-beta^2)/(4(1+s)^2)+c_n/(1-s^2)"
            }
        }
    }

    /// `c_n = n(n+alpha+beta+1) + (alpha+1)(beta+1)/2`.
    pub fn jacobi_cn(n: u32, alpha: f64, beta: f64) -> f64 {
        let n = f64::from(n);
        n * (n + alpha + beta + 1.0) + 0.5 * (alpha + 1.0) * (beta + 1.0)
    }
}

/// One orthogonal-polynomial family instance together with its coordinate map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyData {
    /// Coefficients of `sigma(s)`, constant term first.
    pub sigma: [f64; 3],
    /// Coefficients of `tau(s)`, constant term first.
    pub tau: [f64; 2],
    pub sigma_tilde: SigmaTilde,
    pub map: CoordinateMap,
    /// Point where the prefactor is pinned to 1.
    pub reference_point: f64,
}

impl FamilyData {
    pub fn validate(&self) -> Result<()> {
        self.map.validate()?;
        if self.sigma.iter().chain(&self.tau).any(|c| !c.is_finite()) {
            return Err(Error::Domain("non-finite sigma/tau coefficient".into()));
        }
        if self.sigma.iter().all(|&c| c == 0.0) {
            return Err(Error::Domain("sigma vanishes identically".into()));
        }
        self.map.check(self.reference_point)
    }

    pub fn sigma_at(&self, s: f64) -> f64 {
        self.sigma[0] + s * (self.sigma[1] + s * self.sigma[2])
    }

    pub fn tau_at(&self, s: f64) -> f64 {
        self.tau[0] + s * self.tau[1]
    }

    /// `sigma_tilde(s) / sigma(s)²`.
    pub fn sigma_tilde_ratio(&self, s: f64) -> f64 {
        let sigma = self.sigma_at(s);
        match self.sigma_tilde {
            SigmaTilde::Laguerre { n } => f64::from(n) * s / (sigma * sigma),
            SigmaTilde::Whittaker { n, alpha } => {
                let st = (2.0 * f64::from(n) + alpha + 1.0) / (2.0 * s)
                    + (1.0 - alpha * alpha) / (4.0 * s * s)
                    - 0.25;
                st / (sigma * sigma)
            }
            SigmaTilde::JacobiNormal { n, alpha, beta } => {
                let cn = SigmaTilde::jacobi_cn(n, alpha, beta);
                let st = (1.0 - alpha * alpha) / (4.0 * (1.0 - s).powi(2))
                    + (1.0 - beta * beta) / (4.0 * (1.0 + s).powi(2))
                    + cn / (1.0 - s * s);
                st / (sigma * sigma)
            }
        }
    }

    /// `-(sigma_tilde/sigma²) s'²`, the polynomial side of the split,
    /// equal to `V_F(r) - E_F`.
    pub fn polynomial_side(&self, r: f64) -> f64 {
        let ds = self.map.ds(r);
        -self.sigma_tilde_ratio(self.map.s(r)) * ds * ds
    }

    /// Antiderivative of `tau/sigma`, evaluated at `s(r)`.
    fn tau_sigma_integral(&self, r: f64) -> Result<f64> {
        let [c0, c1, c2] = self.sigma;
        let [t0, t1] = self.tau;
        if c2 != 0.0 {
            return Err(Error::UnsupportedFamily(
                "no antiderivative implemented for quadratic sigma".into(),
            ));
        }
        let s = self.map.s(r);
        if c1 == 0.0 {
            return Ok((t0 * s + 0.5 * t1 * s * s) / c0);
        }
        let log_coeff = (t0 - t1 * c0 / c1) / c1;
        let ln_arg = if c0 == 0.0 {
            c1.abs().ln() + self.map.ln_abs_s(r)
        } else {
            (c1 * s + c0).abs().ln()
        };
        let log_part = if log_coeff == 0.0 { 0.0 } else { log_coeff * ln_arg };
        Ok(t1 / c1 * s + log_part)
    }

    fn ln_prefactor_raw(&self, r: f64) -> Result<f64> {
        self.map.check(r)?;
        Ok(-0.5 * self.map.ln_abs_ds(r) + 0.5 * self.tau_sigma_integral(r)?)
    }
}

/// `f(r)` pinned to 1 at the family's reference point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prefactor {
    family: FamilyData,
    ln_ref: f64,
}

/// Builds the prefactor `f(r) = (s')^(-1/2) exp[1/2 ∫ tau/sigma ds]`.
pub fn prefactor(family: &FamilyData) -> Result<Prefactor> {
    family.validate()?;
    let ln_ref = family.ln_prefactor_raw(family.reference_point)?;
    if !ln_ref.is_finite() {
        return Err(Error::Domain(format!(
            "prefactor is singular at the reference point r = {}",
            family.reference_point
        )));
    }
    Ok(Prefactor { family: *family, ln_ref })
}

impl Prefactor {
    pub fn family(&self) -> &FamilyData {
        &self.family
    }

    pub fn ln_eval(&self, r: f64) -> Result<f64> {
        Ok(self.family.ln_prefactor_raw(r)? - self.ln_ref)
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        Ok(self.ln_eval(r)?.exp())
    }
}

/// Model-specific factor multiplying the polynomial inside `F(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "weight", rename_all = "kebab-case")]
pub enum WeightFactor {
    Unit,
    /// `e^(-s/2) s^((alpha+1)/2)`.
    Whittaker { alpha: f64 },
    /// `|1-s|^((alpha+1)/2) |1+s|^((beta+1)/2)`.
    Jacobi { alpha: f64, beta: f64 },
}

impl WeightFactor {
    fn ln_eval(&self, map: &CoordinateMap, r: f64) -> f64 {
        match *self {
            WeightFactor::Unit => 0.0,
            WeightFactor::Whittaker { alpha } => {
                -0.5 * map.s(r) + 0.5 * (alpha + 1.0) * map.ln_abs_s(r)
            }
            WeightFactor::Jacobi { alpha, beta } => {
                0.5 * (alpha + 1.0) * map.ln_abs_one_minus_s(r)
                    + 0.5 * (beta + 1.0) * map.ln_abs_one_plus_s(r)
            }
        }
    }
}

/// Unnormalized upper component `G(r) = f(r) W(s) P_n(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavefunction {
    prefactor: Prefactor,
    weight: WeightFactor,
    poly: PolyFamilyKind,
    n: u32,
}

pub fn assemble_wavefunction(
    f: Prefactor,
    poly: PolyFamilyKind,
    n: u32,
    weight: WeightFactor,
) -> Wavefunction {
    Wavefunction { prefactor: f, weight, poly, n }
}

impl Wavefunction {
    pub fn map(&self) -> &CoordinateMap {
        &self.prefactor.family.map
    }

    /// `(ln|G(r)|, sign G(r))`.
    pub fn ln_abs_and_sign(&self, r: f64) -> Result<(f64, f64)> {
        let map = self.prefactor.family.map;
        let ln_f = self.prefactor.ln_eval(r)?;
        let p = self.poly.eval_continued(self.n, map.s(r))?;
        let ln_w = self.weight.ln_eval(&map, r);
        let sign = if p < 0.0 { -1.0 } else { 1.0 };
        Ok((ln_f + ln_w + p.abs().ln(), sign))
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        let (ln_abs, sign) = self.ln_abs_and_sign(r)?;
        Ok(sign * ln_abs.exp())
    }

    /// Samples `G` at `nodes`, rescaled so the largest magnitude is 1.
    /// Points outside the map's domain (an endpoint at a singularity) get 0.
    pub fn sample(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        let map = *self.map();
        let mut logs = Vec::with_capacity(nodes.len());
        for &r in nodes {
            if map.contains(r) {
                logs.push(Some(self.ln_abs_and_sign(r)?));
            } else {
                logs.push(None);
            }
        }
        let peak = logs
            .iter()
            .flatten()
            .map(|&(l, _)| l)
            .filter(|l| l.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return Err(Error::Domain("wavefunction vanishes on every node".into()));
        }
        Ok(logs
            .into_iter()
            .map(|v| v.map_or(0.0, |(l, sign)| sign * (l - peak).exp()))
            .collect())
    }
}

/// Split of the effective potential and energy between prefactor and polynomial.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// `V_f`, satisfying `f''/f = V_f - E_f`.
    pub prefactor_potential: RadialFn,
    /// `V_F`, satisfying `-(sigma_tilde/sigma²) s'² = V_F - E_F`.
    pub polynomial_potential: RadialFn,
    /// `E_f`.
    pub prefactor_energy: f64,
    /// `E_F`.
    pub polynomial_energy: f64,
}

impl Decomposition {
    pub fn total_energy(&self) -> f64 {
        self.prefactor_energy + self.polynomial_energy
    }
}

/// Effective potential `k(k+1)/r² + (V_S² - V_V²) + 2m V_S + 2 eps V_V`.
///
/// It depends on `eps` through the vector coupling, and for the mapped
/// oscillator/Coulomb strengths through the strength map as well.
pub fn effective_potential(model: &ModelSpec, qn: &QuantumNumbers, eps: f64) -> Result<RadialFn> {
    let model = model.validate()?;
    check_eps(&model, eps)?;
    let centrifugal = qn.centrifugal();
    let m = model.mass;
    Ok(RadialFn::new(move |r| {
        let (vs, vv) = model.potential_pair(eps, r);
        let c = if centrifugal == 0.0 { 0.0 } else { centrifugal / (r * r) };
        c + (vs * vs - vv * vv) + 2.0 * m * vs + 2.0 * eps * vv
    }))
}

fn check_eps(model: &ModelSpec, eps: f64) -> Result<()> {
    if eps.is_finite() && eps > -model.mass {
        Ok(())
    } else {
        Err(Error::InvalidEnergy(format!(
            "eps = {eps} must be finite and exceed -m = {}",
            -model.mass
        )))
    }
}

/// Splits potential and energy for `model` at energy `eps`.
///
/// The oscillator puts the coupling terms `2m V_S + 2 eps V_V + k(k+1)/r²`
/// into the prefactor side and `V_S² - V_V²` into the polynomial side; the
/// Coulomb problem swaps the two. For Morse, Rosen-Morse and Eckart the
/// polynomial side is read off `-(sigma_tilde/sigma²) s'²` for the family in
/// use, and the prefactor side takes the remainder.
///
/// `E_F` comes from the polynomial equation and `E_f = eps² - m² - E_F`.
pub fn decompose(model: &ModelSpec, qn: &QuantumNumbers, eps: f64) -> Result<Decomposition> {
    let model = model.validate()?;
    check_eps(&model, eps)?;
    let params = model.parameter_map(eps, qn)?;
    let energy = eps * eps - model.mass * model.mass;
    let centrifugal = qn.centrifugal();
    let m = model.mass;
    let n = f64::from(qn.n());

    let coupling = move |r: f64| {
        let (vs, vv) = model.potential_pair(eps, r);
        let c = if centrifugal == 0.0 { 0.0 } else { centrifugal / (r * r) };
        2.0 * m * vs + 2.0 * eps * vv + c
    };
    let quadratic = move |r: f64| {
        let (vs, vv) = model.potential_pair(eps, r);
        vs * vs - vv * vv
    };

    let (v_f, v_big_f, e_big_f) = match params {
        MappedParams::Oscillator { omega, .. } => (
            RadialFn::new(coupling),
            RadialFn::new(quadratic),
            2.0 * n * omega,
        ),
        MappedParams::Coulomb { scale, .. } => (
            RadialFn::new(quadratic),
            RadialFn::new(coupling),
            -0.25 * scale * scale,
        ),
        MappedParams::Morse { amplitude, range, .. } => {
            // -(n s / s²) s'² = -n a² s
            let poly_side = move |r: f64| -n * range * range * amplitude * (-range * r).exp();
            (
                RadialFn::new(move |r| coupling(r) + quadratic(r) - poly_side(r)),
                RadialFn::new(poly_side),
                0.0,
            )
        }
        MappedParams::RosenMorse { level_shift, alpha, beta, range, .. }
        | MappedParams::Eckart { level_shift, alpha, beta, range, .. } => {
            // the constant level_shift (eta or zeta) is all of V_f
            (
                RadialFn::new(move |_| level_shift),
                RadialFn::new(move |r| coupling(r) + quadratic(r) - level_shift),
                range * range * (1.0 - 0.5 * (alpha * alpha + beta * beta)),
            )
        }
    };
    Ok(Decomposition {
        prefactor_potential: v_f,
        polynomial_potential: v_big_f,
        prefactor_energy: energy - e_big_f,
        polynomial_energy: e_big_f,
    })
}
