//! Catalog of the five solvable scalar/vector potential models.
//!
//! | model       | V_S                              | V_V            | s(r)           |
//! |-------------|----------------------------------|----------------|----------------|
//! | oscillator  | a r²                             | a r²           | omega r²/2     |
//! | Coulomb     | -b/r                             | -b/r           | e² r/(n+l+1)   |
//! | Morse       | -A e^(-ar) + sqrt(B²+m²) - m     | -C e^(-ar)     | (2D/a) e^(-ar) |
//! | Rosen-Morse | (A tanh(ar) + B)²                | same as V_S    | tanh(ar)       |
//! | Eckart      | (-A coth(ar) + B)²               | same as V_S    | coth(ar)       |
//!
//! With equal potentials the effective potential is `2(m+eps) V_V` plus the
//! centrifugal term, so every strength gets rescaled by `2(m+eps)` and the
//! relativistic energy has to be found self-consistently. Morse,
//! Rosen-Morse and Eckart are s-wave only; Morse and Rosen-Morse live on the
//! whole line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nu_engine::{
    self, assemble_wavefunction, prefactor, CoordinateMap, Decomposition, FamilyData,
    QuantumNumbers, SigmaTilde, SpinBranch, WeightFactor, Wavefunction,
};
use crate::oracle::GridSpec;
use crate::special_poly::PolyFamilyKind;

/// Oscillator strength, either the physical `a` of `V = a r²` or the
/// mapped frequency `omega` with `a = omega² / (8(m+eps))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OscillatorStrength {
    Physical { a: f64 },
    Frequency { omega: f64 },
}

/// Coulomb strength, either the physical `b` of `V = -b/r` or the mapped
/// `e²` with `b = e² / (2(m+eps))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoulombStrength {
    Physical { b: f64 },
    Mapped { e2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelKind {
    Oscillator(OscillatorStrength),
    Coulomb(CoulombStrength),
    Morse {
        #[serde(rename = "A")]
        scalar_depth: f64,
        #[serde(rename = "C")]
        vector_depth: f64,
        #[serde(rename = "B")]
        offset: f64,
        #[serde(rename = "a")]
        range: f64,
    },
    RosenMorse {
        #[serde(rename = "A")]
        amplitude: f64,
        #[serde(rename = "B")]
        shift: f64,
        #[serde(rename = "a")]
        range: f64,
    },
    Eckart {
        #[serde(rename = "A")]
        amplitude: f64,
        #[serde(rename = "B")]
        shift: f64,
        #[serde(rename = "a")]
        range: f64,
    },
}

/// A potential model together with the particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub kind: ModelKind,
    #[serde(rename = "m")]
    pub mass: f64,
}

/// Intermediate symbols tying a model at energy `eps` to its polynomial family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MappedParams {
    Oscillator {
        omega: f64,
        alpha: f64,
    },
    Coulomb {
        e2: f64,
        /// `e² / (n+l+1)`, the slope of `s(r)`.
        scale: f64,
        alpha: f64,
    },
    Morse {
        /// `D = sqrt(A² - C²)`.
        d: f64,
        alpha: f64,
        /// `2D/a`.
        amplitude: f64,
        range: f64,
        offset: f64,
    },
    RosenMorse {
        gamma: f64,
        lambda: f64,
        /// `eta = 2(m+eps)(A²+B²)`.
        level_shift: f64,
        alpha: f64,
        beta: f64,
        range: f64,
    },
    Eckart {
        gamma: f64,
        lambda: f64,
        /// `zeta = 2(m+eps)(A²+B²)`.
        level_shift: f64,
        alpha: f64,
        beta: f64,
        range: f64,
    },
}

impl MappedParams {
    /// `eps² - m²` predicted by the model's spectral relation.
    pub fn energy(&self, qn: &QuantumNumbers) -> f64 {
        let n = f64::from(qn.n());
        let l = f64::from(qn.l());
        match *self {
            MappedParams::Oscillator { omega, .. } => (2.0 * n + l + 1.5) * omega,
            MappedParams::Coulomb { scale, .. } => -0.25 * scale * scale,
            MappedParams::Morse { alpha, range, offset, .. } => {
                offset * offset - 0.25 * range * range * alpha * alpha
            }
            MappedParams::RosenMorse { level_shift, alpha, beta, range, .. }
            | MappedParams::Eckart { level_shift, alpha, beta, range, .. } => {
                level_shift - 0.5 * range * range * (alpha * alpha + beta * beta)
            }
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            MappedParams::Oscillator { alpha, .. }
            | MappedParams::Coulomb { alpha, .. }
            | MappedParams::Morse { alpha, .. }
            | MappedParams::RosenMorse { alpha, .. }
            | MappedParams::Eckart { alpha, .. } => alpha,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            MappedParams::RosenMorse { beta, .. } | MappedParams::Eckart { beta, .. } => Some(beta),
            _ => None,
        }
    }

    /// Whether the polynomial parameters describe a normalizable state.
    fn bound(&self, qn: &QuantumNumbers) -> std::result::Result<(), String> {
        let n = f64::from(qn.n());
        match *self {
            MappedParams::Oscillator { omega, .. } if omega > 0.0 => Ok(()),
            MappedParams::Coulomb { scale, .. } if scale > 0.0 => Ok(()),
            MappedParams::Morse { alpha, .. } if alpha > 0.0 => Ok(()),
            MappedParams::RosenMorse { gamma, alpha, beta, .. }
                if gamma - n > 0.0 && alpha > 0.0 && beta > 0.0 =>
            {
                Ok(())
            }
            MappedParams::Eckart { gamma, alpha, .. } if gamma + n > 0.0 && alpha > 0.0 => Ok(()),
            other => Err(format!("state {qn:?} is not normalizable with {other:?}")),
        }
    }
}

/// A relativistic level: `eps`, `E = eps² - m²` and the mapped parameters at `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub eps: f64,
    pub energy: f64,
    pub params: MappedParams,
}

#[derive(Debug, Clone)]
pub struct BoundState {
    pub spec: ModelSpec,
    pub qn: QuantumNumbers,
    pub eps: f64,
    /// `eps² - m²`.
    pub energy: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub params: MappedParams,
    pub grid: GridSpec,
    /// `(r, G(r))`, normalized to unit trapezoidal norm on `grid`.
    pub samples: Vec<(f64, f64)>,
    pub decomposition: Decomposition,
}

impl BoundState {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|&(_, g)| g)
    }

    /// Interior sign changes of `G`, ignoring numerically vanishing samples.
    pub fn node_count(&self) -> usize {
        let g: Vec<f64> = self.values().collect();
        count_nodes(&g)
    }
}

/// Counts sign changes, skipping samples below `1e-10` of the peak.
pub fn count_nodes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-10 * peak;
    let mut last = 0.0;
    let mut nodes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            nodes += 1;
        }
        last = v.signum();
    }
    nodes
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{name} = {v} must be positive")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{name} = {v} must be finite")))
    }
}

impl ModelSpec {
    pub fn new(kind: ModelKind, mass: f64) -> Result<Self> {
        Self { kind, mass }.validate()
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::Oscillator(_) => "oscillator",
            ModelKind::Coulomb(_) => "coulomb",
            ModelKind::Morse { .. } => "morse",
            ModelKind::RosenMorse { .. } => "rosen-morse",
            ModelKind::Eckart { .. } => "eckart",
        }
    }

    /// Returns the spec if every parameter constraint holds.
    pub fn validate(&self) -> Result<Self> {
        positive("m", self.mass)?;
        match self.kind {
            ModelKind::Oscillator(OscillatorStrength::Physical { a }) => positive("a", a)?,
            ModelKind::Oscillator(OscillatorStrength::Frequency { omega }) => {
                positive("omega", omega)?
            }
            ModelKind::Coulomb(CoulombStrength::Physical { b }) => positive("b", b)?,
            ModelKind::Coulomb(CoulombStrength::Mapped { e2 }) => positive("e2", e2)?,
            ModelKind::Morse { scalar_depth, vector_depth, offset, range } => {
                finite("A", scalar_depth)?;
                finite("C", vector_depth)?;
                finite("B", offset)?;
                positive("a", range)?;
                if scalar_depth * scalar_depth <= vector_depth * vector_depth {
                    return Err(Error::InvalidModel(format!(
                        "Morse requires A² > C² (A = {scalar_depth}, C = {vector_depth})"
                    )));
                }
            }
            ModelKind::RosenMorse { amplitude, shift, range }
            | ModelKind::Eckart { amplitude, shift, range } => {
                finite("B", shift)?;
                positive("a", range)?;
                if !amplitude.is_finite() || amplitude == 0.0 {
                    return Err(Error::InvalidModel(format!(
                        "A = {amplitude} must be finite and nonzero"
                    )));
                }
            }
        }
        Ok(*self)
    }

    /// Scalar and vector potentials equal everywhere.
    pub fn equal_potentials(&self) -> bool {
        !matches!(self.kind, ModelKind::Morse { .. })
    }

    /// Whether the radial variable runs over the whole real line.
    pub fn full_line(&self) -> bool {
        matches!(self.kind, ModelKind::Morse { .. } | ModelKind::RosenMorse { .. })
    }

    /// Whether only `l = 0` (`k = -1`) is exactly solvable.
    pub fn s_wave_only(&self) -> bool {
        matches!(
            self.kind,
            ModelKind::Morse { .. } | ModelKind::RosenMorse { .. } | ModelKind::Eckart { .. }
        )
    }

    /// Zero coupling: only the free fixed point `eps = m` exists.
    pub fn is_free(&self) -> bool {
        matches!(
            self.kind,
            ModelKind::Oscillator(OscillatorStrength::Physical { a: 0.0 })
                | ModelKind::Oscillator(OscillatorStrength::Frequency { omega: 0.0 })
                | ModelKind::Coulomb(CoulombStrength::Physical { b: 0.0 })
                | ModelKind::Coulomb(CoulombStrength::Mapped { e2: 0.0 })
        )
    }

    /// `(V_S(r), V_V(r))`. Mapped strengths are converted to physical ones at `eps`.
    pub fn potential_pair(&self, eps: f64, r: f64) -> (f64, f64) {
        let m = self.mass;
        match self.kind {
            ModelKind::Oscillator(s) => {
                let a = match s {
                    OscillatorStrength::Physical { a } => a,
                    OscillatorStrength::Frequency { omega } => omega * omega / (8.0 * (m + eps)),
                };
                let v = a * r * r;
                (v, v)
            }
            ModelKind::Coulomb(s) => {
                let b = match s {
                    CoulombStrength::Physical { b } => b,
                    CoulombStrength::Mapped { e2 } => e2 / (2.0 * (m + eps)),
                };
                let v = -b / r;
                (v, v)
            }
            ModelKind::Morse { scalar_depth, vector_depth, offset, range } => {
                let e = (-range * r).exp();
                let shift = (offset * offset + m * m).sqrt() - m;
                (-scalar_depth * e + shift, -vector_depth * e)
            }
            ModelKind::RosenMorse { amplitude, shift, range } => {
                let v = (amplitude * (range * r).tanh() + shift).powi(2);
                (v, v)
            }
            ModelKind::Eckart { amplitude, shift, range } => {
                let v = (-amplitude / (range * r).tanh() + shift).powi(2);
                (v, v)
            }
        }
    }

    fn check_qn(&self, qn: &QuantumNumbers) -> Result<()> {
        if qn.branch() != SpinBranch::Aligned {
            return Err(Error::InvalidQuantumNumbers(
                "closed forms are implemented for the k = -(l+1) branch only".into(),
            ));
        }
        if self.s_wave_only() && qn.l() != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "{} is exactly solvable for l = 0 only",
                self.name()
            )));
        }
        Ok(())
    }

    /// All intermediate symbols at energy `eps`.
    pub fn parameter_map(&self, eps: f64, qn: &QuantumNumbers) -> Result<MappedParams> {
        let spec = self.validate()?;
        spec.check_qn(qn)?;
        let m = spec.mass;
        if !eps.is_finite() || eps <= -m {
            return Err(Error::InvalidEnergy(format!("eps = {eps} must exceed -m = {}", -m)));
        }
        let n = f64::from(qn.n());
        let l = f64::from(qn.l());
        let lift = 2.0 * (m + eps);
        Ok(match spec.kind {
            ModelKind::Oscillator(s) => {
                let omega = match s {
                    OscillatorStrength::Physical { a } => (4.0 * a * lift).sqrt(),
                    OscillatorStrength::Frequency { omega } => omega,
                };
                MappedParams::Oscillator { omega, alpha: l + 0.5 }
            }
            ModelKind::Coulomb(s) => {
                let e2 = match s {
                    CoulombStrength::Physical { b } => b * lift,
                    CoulombStrength::Mapped { e2 } => e2,
                };
                MappedParams::Coulomb { e2, scale: e2 / (n + l + 1.0), alpha: 2.0 * l + 1.0 }
            }
            ModelKind::Morse { scalar_depth, vector_depth, offset, range } => {
                let d = (scalar_depth * scalar_depth - vector_depth * vector_depth).sqrt();
                let q = scalar_depth * (offset * offset + m * m).sqrt() + eps * vector_depth;
                MappedParams::Morse {
                    d,
                    alpha: 2.0 * q / (range * d) - 1.0 - 2.0 * n,
                    amplitude: 2.0 * d / range,
                    range,
                    offset,
                }
            }
            ModelKind::RosenMorse { amplitude, shift, range } => {
                let a2 = range * range;
                // gamma(gamma+1) a² = 2(m+eps) A²
                let gamma = 0.5 * (-1.0 + (1.0 + 4.0 * lift * amplitude * amplitude / a2).sqrt());
                let lambda = lift * amplitude * shift / a2;
                let g = gamma - n;
                MappedParams::RosenMorse {
                    gamma,
                    lambda,
                    level_shift: lift * (amplitude * amplitude + shift * shift),
                    alpha: g + lambda / g,
                    beta: g - lambda / g,
                    range,
                }
            }
            ModelKind::Eckart { amplitude, shift, range } => {
                let a2 = range * range;
                // gamma(gamma-1) a² = 2(m+eps) A²
                let gamma = 0.5 * (1.0 + (1.0 + 4.0 * lift * amplitude * amplitude / a2).sqrt());
                let lambda = lift * amplitude * shift / a2;
                let g = gamma + n;
                MappedParams::Eckart {
                    gamma,
                    lambda,
                    level_shift: lift * (amplitude * amplitude + shift * shift),
                    alpha: -g + lambda / g,
                    beta: -g - lambda / g,
                    range,
                }
            }
        })
    }

    /// `eps² - m² - E_model(eps)`; zero on the spectrum.
    pub fn spectral_gap(&self, qn: &QuantumNumbers, eps: f64) -> Result<f64> {
        let params = self.parameter_map(eps, qn)?;
        Ok(eps * eps - self.mass * self.mass - params.energy(qn))
    }

    /// Relative residual of the spectral relation, `|gap| / max(eps², m²)`.
    pub fn spectral_residual(&self, qn: &QuantumNumbers, eps: f64) -> Result<f64> {
        let scale = (eps * eps).max(self.mass * self.mass);
        Ok(self.spectral_gap(qn, eps)?.abs() / scale)
    }
}

/// Positive-energy root of the model's spectral relation.
pub fn closed_form_epsilon(spec: &ModelSpec, qn: &QuantumNumbers) -> Result<EnergyLevel> {
    let spec = spec.validate()?;
    spec.check_qn(qn)?;
    let m = spec.mass;
    let n = f64::from(qn.n());
    let l = f64::from(qn.l());
    let big_n = n + l + 1.0;

    let eps = match spec.kind {
        ModelKind::Oscillator(OscillatorStrength::Frequency { omega }) => {
            (m * m + (2.0 * n + l + 1.5) * omega).sqrt()
        }
        ModelKind::Coulomb(CoulombStrength::Physical { b }) => {
            // eliminate e² = 2b(m+eps) from eps² = m² - e⁴/(4N²)
            m * (big_n * big_n - b * b) / (big_n * big_n + b * b)
        }
        ModelKind::Coulomb(CoulombStrength::Mapped { e2 }) => {
            let eps2 = m * m - e2 * e2 / (4.0 * big_n * big_n);
            if eps2 <= 0.0 {
                return Err(Error::NoBoundState(format!(
                    "e² = {e2} too strong for N = {big_n}: eps² = {eps2}"
                )));
            }
            eps2.sqrt()
        }
        _ => solve_spectral_relation(&spec, qn)?,
    };
    if !(eps > 0.0) {
        return Err(Error::NoBoundState(format!("no positive-energy root (eps = {eps})")));
    }
    let params = spec.parameter_map(eps, qn)?;
    params
        .bound(qn)
        .map_err(Error::NoBoundState)?;
    Ok(EnergyLevel { eps, energy: eps * eps - m * m, params })
}

const SCAN_STEPS: usize = 512;

/// Bracketed bisection on `eps² - m² - E(eps)` over `(-m + delta, m + Lambda)`;
/// returns the largest positive root whose parameters describe a bound state.
fn solve_spectral_relation(spec: &ModelSpec, qn: &QuantumNumbers) -> Result<f64> {
    let m = spec.mass;
    let gap = |eps: f64| -> Option<f64> {
        let params = spec.parameter_map(eps, qn).ok()?;
        params.bound(qn).ok()?;
        let g = eps * eps - m * m - params.energy(qn);
        g.is_finite().then_some(g)
    };
    let lo = -m + 1e-9 * m;
    // grow the bracket until the relation is satisfied from above
    let mut hi = 2.0 * m;
    let mut grown = false;
    for _ in 0..64 {
        if matches!(gap(hi), Some(g) if g > 0.0) {
            grown = true;
            break;
        }
        hi = m + 2.0 * (hi - m);
    }
    if !grown {
        return Err(Error::NoBoundState(format!(
            "{}: spectral relation never turns positive for {qn:?}",
            spec.name()
        )));
    }

    let step = (hi - lo) / SCAN_STEPS as f64;
    let samples: Vec<(f64, Option<f64>)> = (0..=SCAN_STEPS)
        .map(|i| {
            let e = if i == SCAN_STEPS { hi } else { lo + step * i as f64 };
            (e, gap(e))
        })
        .collect();
    let mut root = None;
    for w in samples.windows(2) {
        if let ((a, Some(ga)), (b, Some(gb))) = (w[0], w[1]) {
            if ga == 0.0 {
                root = Some(a);
            } else if ga.signum() != gb.signum() {
                root = Some(bisect(&gap, a, b, ga)?);
            }
        }
    }
    match root {
        Some(r) if r > 0.0 => Ok(r),
        _ => Err(Error::NoBoundState(format!(
            "{}: no positive-energy root for {qn:?}",
            spec.name()
        ))),
    }
}

fn bisect(gap: &impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, mut ga: f64) -> Result<f64> {
    for _ in 0..200 {
        if b - a <= 1e-12 {
            return Ok(0.5 * (a + b));
        }
        let mid = 0.5 * (a + b);
        let gm = gap(mid).ok_or_else(|| {
            Error::NonConvergence(format!("spectral relation undefined inside bracket at {mid}"))
        })?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    Err(Error::NonConvergence("bisection did not shrink the bracket".into()))
}

/// Non-relativistic energy `E_f + E_F` for the oscillator and Coulomb problems.
pub fn nonrelativistic_energy(spec: &ModelSpec, qn: &QuantumNumbers) -> Result<f64> {
    let spec = spec.validate()?;
    spec.check_qn(qn)?;
    let n = f64::from(qn.n());
    let l = f64::from(qn.l());
    match spec.kind {
        ModelKind::Oscillator(OscillatorStrength::Frequency { omega }) => {
            Ok((2.0 * n + l + 1.5) * omega)
        }
        ModelKind::Coulomb(CoulombStrength::Mapped { e2 }) => {
            Ok(-e2 * e2 / (4.0 * (n + l + 1.0).powi(2)))
        }
        ModelKind::Oscillator(_) | ModelKind::Coulomb(_) => {
            // physical strengths need eps for the mapped one
            let level = closed_form_epsilon(&spec, qn)?;
            Ok(level.params.energy(qn))
        }
        _ => Err(Error::InvalidModel(format!(
            "non-relativistic energy is defined for oscillator and coulomb, not {}",
            spec.name()
        ))),
    }
}

/// Polynomial family, weight and coordinate map of a level.
pub fn family_for(params: &MappedParams, qn: &QuantumNumbers) -> FamilyData {
    let n = qn.n();
    match *params {
        MappedParams::Oscillator { omega, alpha } => FamilyData {
            sigma: [0.0, 1.0, 0.0],
            tau: [alpha + 1.0, -1.0],
            sigma_tilde: SigmaTilde::Laguerre { n },
            map: CoordinateMap::HalfSquare { omega },
            reference_point: (2.0 / omega).sqrt(),
        },
        MappedParams::Coulomb { scale, alpha, .. } => FamilyData {
            sigma: [1.0, 0.0, 0.0],
            tau: [0.0, 0.0],
            sigma_tilde: SigmaTilde::Whittaker { n, alpha },
            map: CoordinateMap::Linear { scale },
            reference_point: 1.0 / scale,
        },
        MappedParams::Morse { alpha, amplitude, range, .. } => FamilyData {
            sigma: [0.0, 1.0, 0.0],
            tau: [alpha + 1.0, -1.0],
            sigma_tilde: SigmaTilde::Laguerre { n },
            map: CoordinateMap::Exponential { amplitude, rate: range },
            reference_point: amplitude.ln() / range,
        },
        MappedParams::RosenMorse { alpha, beta, range, .. } => FamilyData {
            sigma: [1.0, 0.0, 0.0],
            tau: [0.0, 0.0],
            sigma_tilde: SigmaTilde::JacobiNormal { n, alpha, beta },
            map: CoordinateMap::Tanh { rate: range },
            reference_point: 0.0,
        },
        MappedParams::Eckart { alpha, beta, range, .. } => FamilyData {
            sigma: [1.0, 0.0, 0.0],
            tau: [0.0, 0.0],
            sigma_tilde: SigmaTilde::JacobiNormal { n, alpha, beta },
            map: CoordinateMap::Coth { rate: range },
            reference_point: 1.0 / range,
        },
    }
}

fn weight_and_poly(params: &MappedParams) -> (WeightFactor, PolyFamilyKind) {
    match *params {
        MappedParams::Oscillator { alpha, .. } | MappedParams::Morse { alpha, .. } => {
            (WeightFactor::Unit, PolyFamilyKind::Laguerre { alpha })
        }
        MappedParams::Coulomb { alpha, .. } => {
            (WeightFactor::Whittaker { alpha }, PolyFamilyKind::Laguerre { alpha })
        }
        MappedParams::RosenMorse { alpha, beta, .. } | MappedParams::Eckart { alpha, beta, .. } => {
            (WeightFactor::Jacobi { alpha, beta }, PolyFamilyKind::Jacobi { alpha, beta })
        }
    }
}

/// Analytic upper component for a solved level.
pub fn wavefunction_for(level: &EnergyLevel, qn: &QuantumNumbers) -> Result<Wavefunction> {
    let family = family_for(&level.params, qn);
    let f = prefactor(&family)?;
    let (weight, poly) = weight_and_poly(&level.params);
    Ok(assemble_wavefunction(f, poly, qn.n(), weight))
}

fn check_grid_domain(spec: &ModelSpec, grid: &GridSpec) -> Result<()> {
    if !spec.full_line() && grid.r_min <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "{} lives on r > 0; r_min = {} is not allowed",
            spec.name(),
            grid.r_min
        )));
    }
    Ok(())
}

/// Solves the level, samples `G` on `grid` and normalizes it to unit norm.
pub fn bound_state(spec: &ModelSpec, qn: &QuantumNumbers, grid: &GridSpec) -> Result<BoundState> {
    let grid = grid.validate()?;
    check_grid_domain(spec, &grid)?;
    let level = closed_form_epsilon(spec, qn)?;
    let psi = wavefunction_for(&level, qn)?;
    let nodes = grid.nodes();
    let mut g = psi.sample(&nodes)?;
    let norm = crate::oracle::trapezoid(&g.iter().map(|v| v * v).collect::<Vec<_>>(), grid.spacing());
    if !(norm > 0.0) {
        return Err(Error::Domain("wavefunction has zero norm on the grid".into()));
    }
    let scale = norm.sqrt().recip();
    g.iter_mut().for_each(|v| *v *= scale);
    let decomposition = nu_engine::decompose(spec, qn, level.eps)?;
    Ok(BoundState {
        spec: spec.validate()?,
        qn: *qn,
        eps: level.eps,
        energy: level.energy,
        alpha: level.params.alpha(),
        beta: level.params.beta(),
        params: level.params,
        grid,
        samples: nodes.into_iter().zip(g).collect(),
        decomposition,
    })
}

/// Grid spanning the region where `|G| >= cutoff * max|G|`.
///
/// Half-line models start just off the origin.
pub fn support_grid(
    spec: &ModelSpec,
    qn: &QuantumNumbers,
    points: usize,
    cutoff: f64,
) -> Result<GridSpec> {
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return Err(Error::InvalidGrid(format!("cutoff {cutoff} must lie in (0, 1)")));
    }
    let level = closed_form_epsilon(spec, qn)?;
    let psi = wavefunction_for(&level, qn)?;
    let decades = -cutoff.ln();
    let n = f64::from(qn.n());
    let l = f64::from(qn.l());
    let margin = 2.0 * decades + 20.0;
    let (lo, hi) = match level.params {
        MappedParams::Oscillator { omega, .. } => {
            (0.0, (2.0 * (4.0 * n + 2.0 * l + 3.0 + margin) / omega).sqrt())
        }
        MappedParams::Coulomb { scale, .. } => (0.0, (8.0 * (n + l + 1.0) + 2.0 * margin) / scale),
        MappedParams::Morse { alpha, amplitude, range, .. } => {
            let s_big = 2.0 * alpha + 4.0 * n + margin;
            let s_small = alpha * (-2.0 * margin / alpha.max(0.1)).exp();
            ((amplitude / s_big).ln() / range, (amplitude / s_small).ln() / range)
        }
        MappedParams::RosenMorse { alpha, beta, range, .. } => {
            let peak = ((beta - alpha) / (alpha + beta)).clamp(-0.999, 0.999).atanh() / range;
            let reach = margin + 4.0 * n;
            (peak - reach / (range * beta), peak + reach / (range * alpha))
        }
        MappedParams::Eckart { gamma, alpha, range, .. } => {
            (0.0, (margin + 4.0 * n + gamma) / (range * alpha) + 10.0 / range)
        }
    };
    const PROBE: usize = 20_001;
    let probe_lo = if spec.full_line() { lo } else { hi * 1e-9 };
    let h = (hi - probe_lo) / (PROBE - 1) as f64;
    let logs: Vec<f64> = (0..PROBE)
        .map(|i| {
            let r = probe_lo + h * i as f64;
            psi.ln_abs_and_sign(r).map(|(l, _)| l).unwrap_or(f64::NEG_INFINITY)
        })
        .collect();
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let keep = |v: &f64| *v >= peak - decades;
    let first = logs.iter().position(keep).unwrap_or(0);
    let last = logs.iter().rposition(keep).unwrap_or(PROBE - 1);
    let r_max = probe_lo + h * (last + 1).min(PROBE - 1) as f64;
    let r_min = if spec.full_line() {
        probe_lo + h * first.saturating_sub(1) as f64
    } else {
        r_max * 1e-9
    };
    GridSpec::new(r_min, r_max, points)
}
