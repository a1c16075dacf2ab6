//! Problem loading: states, sets, divergence specs and options from CLI
//! flags or a JSON problem document. Unknown fields are rejected with the
//! offending field path.

use qadd_core::divergence::DivergenceSpec;
use qadd_core::error::{Error, Result};
use qadd_core::opcore::DensityState;
use qadd_core::sets::{matrix_from_json, ConvexSetSpec};
use serde_json::Value;

#[derive(Debug, Clone)]
pub struct ProblemOptions {
    pub tol: Option<f64>,
    pub t_window_k: Option<f64>,
    pub grid: Option<usize>,
    pub n_cap: Option<usize>,
    /// Accepted in the schema; the pipeline itself has no stochastic parts.
    #[allow(dead_code)]
    pub seed: Option<u64>,
}

impl Default for ProblemOptions {
    fn default() -> Self {
        ProblemOptions {
            tol: None,
            t_window_k: None,
            grid: None,
            n_cap: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub state: DensityState,
    pub set: ConvexSetSpec,
    pub divergence: DivergenceSpec,
    pub options: ProblemOptions,
}

/// Builtin names: plus_state | werner(p,d) | strange(p); otherwise an inline
/// JSON matrix or a path to one.
pub fn parse_state(text: &str) -> Result<DensityState> {
    let trimmed = text.trim();
    match trimmed {
        "plus" | "plus_state" => return Ok(DensityState::plus_state()),
        "minus" | "minus_state" => return Ok(DensityState::minus_state()),
        _ => {}
    }
    if let Some(args) = builtin_args(trimmed, "werner") {
        let (p, d) = parse_two(&args, "state.werner")?;
        return DensityState::werner(p, d as usize);
    }
    if let Some(args) = builtin_args(trimmed, "strange") {
        let p: f64 = args
            .trim()
            .parse()
            .map_err(|_| Error::validation("state.strange", "expected strange(p)"))?;
        return DensityState::noisy_strange(p);
    }
    if trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse(format!("state matrix: {e}")))?;
        return DensityState::new(matrix_from_json(&v, "state")?);
    }
    // a path to a matrix JSON
    let body = std::fs::read_to_string(trimmed)
        .map_err(|e| Error::validation("state", format!("not a builtin and unreadable as a file: {e}")))?;
    let v: Value =
        serde_json::from_str(&body).map_err(|e| Error::Parse(format!("state file: {e}")))?;
    DensityState::new(matrix_from_json(&v, "state")?)
}

fn builtin_args(text: &str, name: &str) -> Option<String> {
    let rest = text.strip_prefix(name)?;
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    Some(inner.to_string())
}

fn parse_two(args: &str, field: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::validation(field, "expected two comma-separated values"));
    }
    let a = parts[0]
        .parse()
        .map_err(|_| Error::validation(field, "first argument is not a number"))?;
    let b = parts[1]
        .parse()
        .map_err(|_| Error::validation(field, "second argument is not a number"))?;
    Ok((a, b))
}

pub fn parse_set(text: &str) -> Result<ConvexSetSpec> {
    let trimmed = text.trim();
    let body = if trimmed.starts_with('{') {
        trimmed.to_string()
    } else {
        std::fs::read_to_string(trimmed)
            .map_err(|e| Error::validation("set", format!("unreadable set descriptor: {e}")))?
    };
    let v: Value = serde_json::from_str(&body).map_err(|e| Error::Parse(format!("set: {e}")))?;
    ConvexSetSpec::from_json(&v)
}

/// Divergence from --alpha plus either --z or --preset.
pub fn divergence_from_flags(alpha: f64, z: Option<f64>, preset: Option<&str>) -> Result<DivergenceSpec> {
    if z.is_some() && preset.is_some() {
        return Err(Error::validation("divergence", "give either z or preset, not both"));
    }
    let spec = match (z, preset) {
        (Some(zv), None) => DivergenceSpec::alpha_z(alpha, zv),
        (None, Some(name)) => match name {
            "umegaki" => DivergenceSpec::umegaki(),
            "petz" => DivergenceSpec::petz(alpha),
            "sandwiched" => DivergenceSpec::sandwiched(alpha),
            "reversed" => DivergenceSpec::reversed(alpha),
            other => {
                return Err(Error::validation(
                    "divergence.preset",
                    format!("unknown preset {other:?}"),
                ))
            }
        },
        (None, None) => {
            if alpha == 1.0 {
                DivergenceSpec::umegaki()
            } else {
                DivergenceSpec::petz(alpha)
            }
        }
        _ => unreachable!(),
    };
    spec.validate()?;
    Ok(spec)
}

/// Full problem document: {state, set, divergence, options}.
pub fn load_problem(text: &str) -> Result<ProblemSpec> {
    let body = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text.trim())
            .map_err(|e| Error::validation("problem", format!("unreadable problem file: {e}")))?
    };
    let v: Value =
        serde_json::from_str(&body).map_err(|e| Error::Parse(format!("problem: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("problem must be a JSON object".into()))?;
    for key in obj.keys() {
        if !["state", "set", "divergence", "options"].contains(&key.as_str()) {
            return Err(Error::validation(format!("problem.{key}"), "unknown field"));
        }
    }
    let state = match obj.get("state") {
        Some(Value::String(s)) => parse_state(s)?,
        Some(m @ Value::Array(_)) => DensityState::new(matrix_from_json(m, "problem.state")?)?,
        _ => return Err(Error::validation("problem.state", "missing state")),
    };
    let set = ConvexSetSpec::from_json(
        obj.get("set")
            .ok_or_else(|| Error::validation("problem.set", "missing set"))?,
    )?;
    let divergence = match obj.get("divergence") {
        None => DivergenceSpec::umegaki(),
        Some(dv) => {
            let dobj = dv
                .as_object()
                .ok_or_else(|| Error::validation("problem.divergence", "expected object"))?;
            for key in dobj.keys() {
                if !["alpha", "z", "preset"].contains(&key.as_str()) {
                    return Err(Error::validation(
                        format!("problem.divergence.{key}"),
                        "unknown field",
                    ));
                }
            }
            let alpha = dobj
                .get("alpha")
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::validation("problem.divergence.alpha", "expected number"))?;
            divergence_from_flags(
                alpha,
                dobj.get("z").and_then(Value::as_f64),
                dobj.get("preset").and_then(Value::as_str),
            )?
        }
    };
    let options = match obj.get("options") {
        None => ProblemOptions::default(),
        Some(ov) => {
            let oobj = ov
                .as_object()
                .ok_or_else(|| Error::validation("problem.options", "expected object"))?;
            for key in oobj.keys() {
                if !["tol", "t_window_K", "grid", "n_cap", "seed"].contains(&key.as_str()) {
                    return Err(Error::validation(
                        format!("problem.options.{key}"),
                        "unknown field",
                    ));
                }
            }
            ProblemOptions {
                tol: oobj.get("tol").and_then(Value::as_f64),
                t_window_k: oobj.get("t_window_K").and_then(Value::as_f64),
                grid: oobj.get("grid").and_then(Value::as_u64).map(|x| x as usize),
                n_cap: oobj.get("n_cap").and_then(Value::as_u64).map(|x| x as usize),
                seed: oobj.get("seed").and_then(Value::as_u64),
            }
        }
    };
    Ok(ProblemSpec { state, set, divergence, options })
}
