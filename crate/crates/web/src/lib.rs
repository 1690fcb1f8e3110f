//! WebAssembly bindings for the browser demo.
//!
//! Every export takes the model as a JSON object such as
//! `{"model": "coulomb", "b": 0.5, "m": 1}` and returns a JSON string; failures
//! come back as `{"error": "..."}` rather than as exceptions.

use serde::Serialize;
use serde_json::json;
use solvable_dirac::models::{bound_state, closed_form_epsilon, support_grid};
use solvable_dirac::nu_engine::effective_potential;
use solvable_dirac::oracle::{default_grid, recover_lower_component, self_consistent_epsilon};
use solvable_dirac::{ModelSpec, QuantumNumbers};
use wasm_bindgen::prelude::*;

type Outcome<T> = Result<T, String>;

fn parse_model(model_json: &str) -> Outcome<ModelSpec> {
    let spec: ModelSpec = serde_json::from_str(model_json).map_err(|e| format!("model: {e}"))?;
    spec.validate().map_err(|e| e.to_string())
}

fn respond<T: Serialize>(result: Outcome<T>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn states(spec: &ModelSpec, n_max: u32, l_max: u32) -> Vec<QuantumNumbers> {
    let l_max = if spec.s_wave_only() { 0 } else { l_max };
    (0..=l_max)
        .flat_map(|l| (0..=n_max).map(move |n| QuantumNumbers::aligned(n, l)))
        .collect()
}

#[derive(Serialize)]
struct Level {
    n: u32,
    l: u32,
    eps: Option<f64>,
    energy: Option<f64>,
    error: Option<String>,
}

fn spectrum_impl(model_json: &str, n_max: u32, l_max: u32) -> Outcome<Vec<Level>> {
    let spec = parse_model(model_json)?;
    Ok(states(&spec, n_max.min(20), l_max.min(10))
        .into_iter()
        .map(|qn| match closed_form_epsilon(&spec, &qn) {
            Ok(level) => Level { n: qn.n(), l: qn.l(), eps: Some(level.eps), energy: Some(level.energy), error: None },
            Err(e) => Level { n: qn.n(), l: qn.l(), eps: None, energy: None, error: Some(e.to_string()) },
        })
        .collect())
}

/// Levels `eps` and `E = eps² - m²` for `n <= n_max`, `l <= l_max`.
#[wasm_bindgen]
pub fn spectrum(model_json: &str, n_max: u32, l_max: u32) -> String {
    respond(spectrum_impl(model_json, n_max, l_max))
}

#[derive(Serialize)]
struct Profile {
    eps: f64,
    energy: f64,
    r: Vec<f64>,
    g: Vec<f64>,
    /// Lower component on the same nodes, `null` where it is not recovered.
    f: Vec<Option<f64>>,
    f_note: Option<String>,
    potential: Vec<f64>,
}

fn wavefunction_impl(model_json: &str, n: u32, l: u32, points: u32) -> Outcome<Profile> {
    let spec = parse_model(model_json)?;
    let qn = QuantumNumbers::aligned(n, l);
    let grid = support_grid(&spec, &qn, (points as usize).clamp(200, 20_000), 1e-6).map_err(|e| e.to_string())?;
    let state = bound_state(&spec, &qn, &grid).map_err(|e| e.to_string())?;
    let v = effective_potential(&spec, &qn, state.eps).map_err(|e| e.to_string())?;
    let r: Vec<f64> = state.samples.iter().map(|&(r, _)| r).collect();
    let mut f = vec![None; r.len()];
    let f_note = match recover_lower_component(&state, &spec, &grid) {
        Ok(lower) => {
            for (slot, &(_, value)) in f[2..].iter_mut().zip(&lower.samples) {
                *slot = Some(value);
            }
            None
        }
        Err(e) => Some(e.to_string()),
    };
    Ok(Profile {
        eps: state.eps,
        energy: state.energy,
        g: state.values().collect(),
        potential: r.iter().map(|&x| v.eval(x)).collect(),
        r,
        f,
        f_note,
    })
}

/// Normalized `G(r)`, recovered `F(r)` and the effective potential of one state.
#[wasm_bindgen]
pub fn wavefunction(model_json: &str, n: u32, l: u32, points: u32) -> String {
    respond(wavefunction_impl(model_json, n, l, points))
}

#[derive(Serialize)]
struct OracleCheck {
    eps_analytic: f64,
    eps_numerical: f64,
    relative_deviation: f64,
    iterations: usize,
    points: usize,
}

fn oracle_check_impl(model_json: &str, n: u32, l: u32, points: u32) -> Outcome<OracleCheck> {
    let spec = parse_model(model_json)?;
    let qn = QuantumNumbers::aligned(n, l);
    let exact = closed_form_epsilon(&spec, &qn).map_err(|e| e.to_string())?.eps;
    let grid = default_grid(&spec, &qn, (points as usize).clamp(200, 20_000)).map_err(|e| e.to_string())?;
    let fd = self_consistent_epsilon(&spec, &qn, &grid, 1e-10, 200).map_err(|e| e.to_string())?;
    Ok(OracleCheck {
        eps_analytic: exact,
        eps_numerical: fd.eps,
        relative_deviation: (fd.eps - exact).abs() / exact.abs(),
        iterations: fd.iterations,
        points: grid.points,
    })
}

/// Analytic level against the self-consistent finite-difference solve.
#[wasm_bindgen]
pub fn oracle_check(model_json: &str, n: u32, l: u32, points: u32) -> String {
    respond(oracle_check_impl(model_json, n, l, points))
}
