//! Finite-difference cross-checks for the analytic states.
//!
//! `-G'' + V G = E G` is discretized with second-order central differences
//! on a uniform grid with Dirichlet ends. Eigenvalues come from Sturm-count
//! bisection on the symmetric tridiagonal matrix, eigenvectors from inverse
//! iteration. Because `V` depends on `eps`, the relativistic level is the
//! fixed point of `eps -> sqrt(m² + E_n(eps))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{count_nodes, BoundState, ModelKind, ModelSpec, OscillatorStrength};
use crate::models::CoulombStrength;
use crate::nu_engine::{effective_potential, QuantumNumbers, RadialFn};

/// Uniform grid including both Dirichlet endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

pub const MIN_POINTS: usize = 100;

impl GridSpec {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        Self { r_min, r_max, points }.validate()
    }

    pub fn validate(&self) -> Result<Self> {
        if !(self.r_min.is_finite() && self.r_max.is_finite() && self.r_min < self.r_max) {
            return Err(Error::InvalidGrid(format!(
                "need finite r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{} points given, at least {MIN_POINTS} required",
                self.points
            )));
        }
        Ok(*self)
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.r_max
        } else {
            self.r_min + self.spacing() * i as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        Self { points: 2 * self.points - 1, ..*self }
    }
}

/// Composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => h * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

/// Symmetric tridiagonal matrix with a constant off-diagonal.
#[derive(Debug, Clone)]
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn from_potential(v: &RadialFn, grid: &GridSpec) -> Result<Self> {
        let h = grid.spacing();
        let kinetic = 2.0 / (h * h);
        let diag = (1..grid.points - 1)
            .map(|i| Ok(kinetic + v.try_eval(grid.node(i))?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { diag, off: -1.0 / (h * h) })
    }

    fn gershgorin(&self) -> (f64, f64) {
        let spread = 2.0 * self.off.abs();
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - spread;
        let hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + spread;
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    fn sturm_count(&self, x: f64) -> usize {
        let off2 = self.off * self.off;
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + x.abs());
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - off2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th eigenvalue (0-based, ascending) by bisection.
    fn eigenvalue(&self, index: usize) -> Result<f64> {
        if index >= self.diag.len() {
            return Err(Error::Precondition(format!(
                "eigenvalue {index} requested from a {}x{} matrix",
                self.diag.len(),
                self.diag.len()
            )));
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NonConvergence(format!("bisection for eigenvalue {index} stalled")))
    }

    /// Eigenvector for an (accurate) eigenvalue by inverse iteration.
    fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.diag.len();
        // relative to the local scale, not the matrix norm: steep walls
        // make the Gershgorin bound huge without affecting low levels
        let scale = lambda.abs() + 2.0 * self.off.abs();
        let shift = lambda + 8.0 * f64::EPSILON * scale;
        let lu = PivotedLu::factor(&self.diag, self.off, shift, scale);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * ((i as f64) * 0.618).sin()).collect();
        for _ in 0..4 {
            lu.solve(&mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::NonConvergence("inverse iteration broke down".into()));
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(x)
    }
}

/// LU factorization with partial pivoting of `T - shift I`.
struct PivotedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl PivotedLu {
    fn factor(diag: &[f64], off: f64, shift: f64, scale: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut dl = vec![off; n.saturating_sub(1)];
        let mut du = vec![off; n.saturating_sub(1)];
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        for v in &mut d {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Lowest `count` eigenvalues of `-G'' + V G` with Dirichlet ends, ascending.
pub fn fd_eigenvalues(v: &RadialFn, grid: &GridSpec, count: usize) -> Result<Vec<f64>> {
    let grid = grid.validate()?;
    let t = Tridiagonal::from_potential(v, &grid)?;
    (0..count).map(|i| t.eigenvalue(i)).collect()
}

/// Eigenpair with exactly `nodes` interior sign changes.
///
/// The returned samples cover every grid node (endpoints are 0) and are
/// scaled to unit trapezoidal norm with a positive first lobe.
pub fn fd_eigenpair(v: &RadialFn, grid: &GridSpec, nodes: u32) -> Result<(f64, Vec<f64>)> {
    let grid = grid.validate()?;
    let t = Tridiagonal::from_potential(v, &grid)?;
    let e = t.eigenvalue(nodes as usize)?;
    let inner = t.eigenvector(e)?;
    let found = count_nodes(&inner);
    if found != nodes as usize {
        return Err(Error::NonConvergence(format!(
            "eigenvector {nodes} has {found} nodes; refine the grid"
        )));
    }
    let mut g = Vec::with_capacity(grid.points);
    g.push(0.0);
    g.extend(inner);
    g.push(0.0);
    let norm = trapezoid(&g.iter().map(|x| x * x).collect::<Vec<_>>(), grid.spacing()).sqrt();
    let first = g.iter().find(|x| x.abs() > 1e-8).copied().unwrap_or(1.0);
    let s = first.signum() / norm;
    g.iter_mut().for_each(|x| *x *= s);
    Ok((e, g))
}

/// How the self-consistent level was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    /// No coupling; `eps = m` without solving.
    Trivial,
    FixedPoint,
    /// Bracketed root of `eps² - m² - E_n(eps)` after the iteration failed.
    Bracketed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleResult {
    pub eps: f64,
    /// `E_n` at the final `eps`.
    pub energy: f64,
    pub iterations: usize,
    /// Final self-consistency gap `|sqrt(m² + E_n(eps)) - eps|`.
    pub residual: f64,
    pub method: OracleMethod,
    pub grid: GridSpec,
    /// `(r, G(r))` of the FD eigenvector, unit trapezoidal norm.
    pub eigenvector_samples: Vec<(f64, f64)>,
}

fn fd_level(spec: &ModelSpec, qn: &QuantumNumbers, grid: &GridSpec, eps: f64) -> Result<(f64, Vec<f64>)> {
    let v = effective_potential(spec, qn, eps)?;
    fd_eigenpair(&v, grid, qn.n())
}

/// Self-consistent FD level with `n` nodes.
///
/// Iterates `eps <- sqrt(m² + E_n(eps))` from `eps = m`, halving the step
/// whenever successive updates change direction. If the iteration leaves
/// the physical region or stalls, falls back to a bracketed root of
/// `eps² - m² - E_n(eps)` on `eps > 0`.
pub fn self_consistent_epsilon(
    spec: &ModelSpec,
    qn: &QuantumNumbers,
    grid: &GridSpec,
    tol: f64,
    max_iter: usize,
) -> Result<OracleResult> {
    let grid = grid.validate()?;
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance {tol} must be positive")));
    }
    if is_zero_coupling(spec) {
        if !(spec.mass.is_finite() && spec.mass > 0.0) {
            return Err(Error::InvalidModel(format!("m = {} must be positive", spec.mass)));
        }
        return Ok(OracleResult {
            eps: spec.mass,
            energy: 0.0,
            iterations: 0,
            residual: 0.0,
            method: OracleMethod::Trivial,
            grid,
            eigenvector_samples: Vec::new(),
        });
    }
    let spec = spec.validate()?;
    match fixed_point(&spec, qn, &grid, tol, max_iter) {
        Ok(r) => Ok(r),
        Err(first) => bracketed(&spec, qn, &grid, tol, max_iter).map_err(|_| first),
    }
}

fn is_zero_coupling(spec: &ModelSpec) -> bool {
    match spec.kind {
        ModelKind::Oscillator(OscillatorStrength::Physical { a }) => a == 0.0,
        ModelKind::Oscillator(OscillatorStrength::Frequency { omega }) => omega == 0.0,
        ModelKind::Coulomb(CoulombStrength::Physical { b }) => b == 0.0,
        ModelKind::Coulomb(CoulombStrength::Mapped { e2 }) => e2 == 0.0,
        _ => false,
    }
}

fn finish(
    grid: &GridSpec,
    eps: f64,
    energy: f64,
    m: f64,
    g: Vec<f64>,
    iterations: usize,
    method: OracleMethod,
) -> OracleResult {
    let residual = ((m * m + energy).max(0.0).sqrt() - eps).abs();
    OracleResult {
        eps,
        energy,
        iterations,
        residual,
        method,
        grid: *grid,
        eigenvector_samples: grid.nodes().into_iter().zip(g).collect(),
    }
}

fn fixed_point(
    spec: &ModelSpec,
    qn: &QuantumNumbers,
    grid: &GridSpec,
    tol: f64,
    max_iter: usize,
) -> Result<OracleResult> {
    let m = spec.mass;
    let mut eps = m;
    let mut damping = 1.0;
    let mut last_step = 0.0f64;
    for it in 1..=max_iter {
        let (e, g) = fd_level(spec, qn, grid, eps)?;
        let disc = m * m + e;
        if disc < 0.0 {
            return Err(Error::Domain(format!(
                "negative discriminant m² + E_n = {disc} at eps = {eps}"
            )));
        }
        let target = disc.sqrt();
        let step = target - eps;
        if step.abs() <= tol {
            return Ok(finish(grid, eps, e, m, g, it, OracleMethod::FixedPoint));
        }
        if last_step != 0.0 && step.signum() != last_step.signum() {
            damping *= 0.5;
        }
        last_step = step;
        eps += damping * step;
    }
    Err(Error::NonConvergence(format!(
        "fixed-point iteration did not reach {tol} in {max_iter} steps"
    )))
}

fn bracketed(
    spec: &ModelSpec,
    qn: &QuantumNumbers,
    grid: &GridSpec,
    tol: f64,
    max_iter: usize,
) -> Result<OracleResult> {
    let m = spec.mass;
    let gap = |eps: f64| -> Result<(f64, f64, Vec<f64>)> {
        let (e, g) = fd_level(spec, qn, grid, eps)?;
        Ok((eps * eps - m * m - e, e, g))
    };
    let mut evals = 0;
    let mut a = 0.0;
    let (mut ga, _, _) = gap(a)?;
    let mut b = None;
    let mut step = m / 16.0;
    while evals < 4 * max_iter.max(64) {
        let next = a + step;
        let (gn, _, _) = gap(next)?;
        evals += 1;
        if gn == 0.0 || gn.signum() != ga.signum() {
            b = Some((next, gn));
            break;
        }
        a = next;
        ga = gn;
        if a >= 2.0 * m {
            step *= 2.0;
        }
    }
    let (mut b, mut gb) =
        b.ok_or_else(|| Error::NoBoundState("no sign change of eps² - m² - E_n(eps) for eps > 0".into()))?;
    // Illinois false position
    let mut side = 0i8;
    for it in 1..=max_iter {
        let c = (a * gb - b * ga) / (gb - ga);
        let c = if c.is_finite() && c > a.min(b) && c < a.max(b) { c } else { 0.5 * (a + b) };
        let (gc, e, g) = gap(c)?;
        if (b - a).abs() <= tol || gc == 0.0 {
            return Ok(finish(grid, c, e, m, g, evals + it, OracleMethod::Bracketed));
        }
        if gc.signum() == gb.signum() {
            b = c;
            gb = gc;
            if side == -1 {
                ga *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            ga = gc;
            if side == 1 {
                gb *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::NonConvergence(format!("bracketed search did not reach {tol}")))
}

/// Threshold below which the FD eigenvector counts as negligible when
/// trimming the default grid.
const SUPPORT_CUTOFF: f64 = 1e-9;
const COARSE_POINTS: usize = 3000;

/// Initial span guessed from the parameters alone.
fn heuristic_span(spec: &ModelSpec, qn: &QuantumNumbers) -> (f64, f64) {
    let m = spec.mass;
    let n = f64::from(qn.n());
    let l = f64::from(qn.l());
    match spec.kind {
        ModelKind::Oscillator(s) => {
            let omega = match s {
                OscillatorStrength::Physical { a } => (16.0 * a * m).sqrt(),
                OscillatorStrength::Frequency { omega } => omega,
            };
            (0.0, (2.0 * (40.0 + 4.0 * n + 2.0 * l) / omega).sqrt())
        }
        ModelKind::Coulomb(s) => {
            let big_n = n + l + 1.0;
            let e2 = match s {
                CoulombStrength::Physical { b } => 2.0 * b * m,
                CoulombStrength::Mapped { e2 } => e2,
            };
            (0.0, (40.0 + 4.0 * big_n) * big_n / e2)
        }
        ModelKind::Morse { scalar_depth, vector_depth, offset, range } => {
            let d = (scalar_depth * scalar_depth - vector_depth * vector_depth).sqrt();
            let root = (offset * offset + m * m).sqrt();
            let q = scalar_depth * root + vector_depth.abs() * root;
            let s_big = 4.0 * q / (range * d) + 80.0;
            let left = -(range * s_big / (2.0 * d)).ln() / range;
            let centre = if q > 0.0 { -(q / (d * d)).ln() / range } else { 0.0 };
            (left, centre.max(left) + 40.0 / range)
        }
        ModelKind::RosenMorse { range, .. } => (-40.0 / range, 40.0 / range),
        ModelKind::Eckart { range, .. } => (0.0, 40.0 / range),
    }
}

fn half_line_min(r_max: f64) -> f64 {
    1e-9 * r_max
}

/// Grid for the oracle built without the analytic solution.
///
/// A coarse self-consistent solve on a parameter-based span (widened until
/// the eigenvector has decayed at the ends) locates the support of the
/// state; the returned grid covers where `|G| >= 1e-9 max|G|`.
pub fn default_grid(spec: &ModelSpec, qn: &QuantumNumbers, points: usize) -> Result<GridSpec> {
    let spec = spec.validate()?;
    let full = spec.full_line();
    let (mut lo, mut hi) = heuristic_span(&spec, qn);
    for _ in 0..12 {
        let r_min = if full { lo } else { half_line_min(hi) };
        let coarse = GridSpec::new(r_min, hi, COARSE_POINTS)?;
        let res = self_consistent_epsilon(&spec, qn, &coarse, 1e-8, 200)?;
        let g: Vec<f64> = res.eigenvector_samples.iter().map(|&(_, g)| g.abs()).collect();
        let peak = g.iter().cloned().fold(0.0, f64::max);
        let edge = |slice: &[f64]| slice.iter().cloned().fold(0.0, f64::max) / peak;
        let k = COARSE_POINTS / 50;
        let left_ok = !full || edge(&g[..k]) < SUPPORT_CUTOFF;
        let right_ok = edge(&g[COARSE_POINTS - k..]) < SUPPORT_CUTOFF;
        if left_ok && right_ok {
            let keep = |v: &f64| *v >= SUPPORT_CUTOFF * peak;
            let first = g.iter().position(keep).unwrap_or(0);
            let last = g.iter().rposition(keep).unwrap_or(COARSE_POINTS - 1);
            let width = coarse.node(last) - coarse.node(first);
            let r_max = (coarse.node(last) + 0.05 * width).min(hi);
            let r_min = if full {
                (coarse.node(first) - 0.05 * width).max(lo)
            } else {
                half_line_min(r_max)
            };
            return GridSpec::new(r_min, r_max, points);
        }
        let step = if full { 0.5 * (hi - lo) } else { hi };
        if !left_ok {
            lo -= step;
        }
        if !right_ok {
            hi += step;
        }
    }
    Err(Error::NonConvergence(format!(
        "{}: the state did not fit any default span",
        spec.name()
    )))
}

/// Maximum pointwise residual of the radial equation on interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `max |G'' - (V - E) G| / max |G|`.
    pub max_residual: f64,
    pub spacing: f64,
}

fn check_state(state: &BoundState, spec: &ModelSpec, grid: &GridSpec) -> Result<()> {
    if state.grid != *grid || state.samples.len() != grid.points {
        return Err(Error::GridMismatch(format!(
            "state sampled on {:?}, check requested on {:?}",
            state.grid, grid
        )));
    }
    if state.spec != *spec {
        return Err(Error::Precondition(format!(
            "state belongs to {:?}, not {:?}",
            state.spec, spec
        )));
    }
    Ok(())
}

fn peak(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `max |G'' - (V - E) G| / max|G|` with `G''` by central differences.
pub fn schrodinger_residual(
    state: &BoundState,
    spec: &ModelSpec,
    grid: &GridSpec,
) -> Result<ResidualReport> {
    check_state(state, spec, grid)?;
    let v = effective_potential(spec, &state.qn, state.eps)?;
    let g: Vec<f64> = state.values().collect();
    let h = grid.spacing();
    let mut worst = 0.0f64;
    for i in 1..g.len() - 1 {
        let d2 = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (h * h);
        let r = d2 - (v.try_eval(grid.node(i))? - state.energy) * g[i];
        worst = worst.max(r.abs());
    }
    Ok(ResidualReport { max_residual: worst / peak(&g), spacing: h })
}

/// Lower component recovered from `G` and the first-order residual.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowerComponent {
    /// `(r, F(r))` on interior nodes at least two steps from either end.
    pub samples: Vec<(f64, f64)>,
    /// `max |-F' + (k/r) F - (eps - m - V_S - V_V) G| / max|G|`.
    pub residual: f64,
}

/// Fourth-order central first derivative at interior node `i` (`2 <= i < n-2`).
fn d1_five_point(y: &[f64], i: usize, h: f64) -> f64 {
    (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h)
}

/// `F = (G' + (k/r) G) / (eps + m + V_S - V_V)` and the residual of the
/// companion first-order equation.
///
/// Derivatives use five-point central differences: near the origin the
/// `k/r` factor turns an `O(h²)` error in `G'` into an `O(h)` error in the
/// residual. Whole-line models use the one-dimensional pair, where the
/// `k/r` terms are absent.
pub fn recover_lower_component(
    state: &BoundState,
    spec: &ModelSpec,
    grid: &GridSpec,
) -> Result<LowerComponent> {
    check_state(state, spec, grid)?;
    let g: Vec<f64> = state.values().collect();
    let h = grid.spacing();
    let k = if spec.full_line() { 0.0 } else { state.qn.k() as f64 };
    let (m, eps) = (spec.mass, state.eps);
    let n = g.len();

    let mut f = vec![0.0; n];
    let mut last_sign = 0.0;
    for i in 2..n - 2 {
        let r = grid.node(i);
        let (vs, vv) = spec.potential_pair(eps, r);
        let denom = eps + m + vs - vv;
        if denom.abs() <= 1e-12 * (eps.abs() + m) || denom.signum() * last_sign < 0.0 {
            return Err(Error::Singularity(format!(
                "eps + m + V_S - V_V vanishes near r = {r}"
            )));
        }
        last_sign = denom.signum();
        let kr = if k == 0.0 { 0.0 } else { k / r * g[i] };
        f[i] = (d1_five_point(&g, i, h) + kr) / denom;
    }
    let mut worst = 0.0f64;
    for i in 4..n - 4 {
        let r = grid.node(i);
        let (vs, vv) = spec.potential_pair(eps, r);
        let kr = if k == 0.0 { 0.0 } else { k / r * f[i] };
        let res = -d1_five_point(&f, i, h) + kr - (eps - m - vs - vv) * g[i];
        worst = worst.max(res.abs());
    }
    Ok(LowerComponent {
        samples: (2..n - 2).map(|i| (grid.node(i), f[i])).collect(),
        residual: worst / peak(&g),
    })
}

/// Trapezoidal overlaps `∫ G_i G_j dr` of states sharing model, `l` and grid.
pub fn gram_matrix(states: &[BoundState]) -> Result<Vec<Vec<f64>>> {
    let Some(first) = states.first() else {
        return Ok(Vec::new());
    };
    for s in &states[1..] {
        if s.grid != first.grid {
            return Err(Error::GridMismatch(format!(
                "grids {:?} and {:?} differ",
                first.grid, s.grid
            )));
        }
        if s.spec != first.spec || s.qn.l() != first.qn.l() || s.qn.branch() != first.qn.branch() {
            return Err(Error::Precondition(
                "overlaps need states of one model and one (l, branch)".into(),
            ));
        }
    }
    let h = first.grid.spacing();
    let columns: Vec<Vec<f64>> = states.iter().map(|s| s.values().collect()).collect();
    Ok(columns
        .iter()
        .map(|a| {
            columns
                .iter()
                .map(|b| {
                    let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
                    trapezoid(&prod, h)
                })
                .collect()
        })
        .collect())
}
