//! WebAssembly bindings for the demo page. Each exported function takes
//! plain strings and returns a JSON object, either the result or
//! `{"error": "..."}`.

use std::sync::Arc;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use hyperfence::compose::{self_compose, DEFAULT_NODE_BUDGET};
use hyperfence::enforce::{
    build_parallel_game, format_inputs, format_outputs, parse_steps, run_stream, EnforceConfig, EnforcerSession,
};
use hyperfence::games::Player;
use hyperfence::logic::{classify_syntactic_safety, parse_spec_file, HyperSpec};

/// Largest trace count the page offers.
pub const MAX_TRACES: u32 = 4;

#[derive(Debug, Serialize)]
pub struct SpecReport {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub quantifiers: usize,
    pub safety: bool,
    pub composed: String,
}

#[derive(Debug, Serialize)]
pub struct GameReport {
    pub realizable: bool,
    pub nodes: usize,
    pub winning: usize,
    pub pgsolver: String,
}

#[derive(Debug, Serialize)]
pub struct EnforceReport {
    pub output: String,
    pub steps: usize,
    pub intervention: Option<usize>,
}

fn spec(text: &str) -> Result<HyperSpec, String> {
    parse_spec_file(text).map_err(|e| e.to_string())
}

fn traces(n: u32) -> Result<u32, String> {
    if (1..=MAX_TRACES).contains(&n) {
        Ok(n)
    } else {
        Err(format!("trace count must be between 1 and {MAX_TRACES}"))
    }
}

/// Parses a spec file and shows its composition over `n` traces.
pub fn inspect(text: &str, n: u32) -> Result<SpecReport, String> {
    let s = spec(text)?;
    let composed = self_compose(&s, traces(n)?, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    Ok(SpecReport {
        inputs: s.alphabet().inputs().to_vec(),
        outputs: s.alphabet().outputs().to_vec(),
        quantifiers: s.arity(),
        safety: classify_syntactic_safety(s.body()),
        composed: composed.to_string(),
    })
}

/// Builds and solves the enforcement game for `n` traces.
pub fn solve(text: &str, n: u32) -> Result<GameReport, String> {
    let s = spec(text)?;
    match build_parallel_game(&s, traces(n)?, &EnforceConfig::default()) {
        Ok(solved) => {
            let g = solved.game();
            Ok(GameReport {
                realizable: true,
                nodes: g.len(),
                winning: solved.solution().region(Player::P0).len(),
                pgsolver: g.to_pgsolver(),
            })
        }
        Err(hyperfence::enforce::EnforceError::Unrealizable) => {
            Ok(GameReport { realizable: false, nodes: 0, winning: 0, pgsolver: String::new() })
        }
        Err(e) => Err(e.to_string()),
    }
}

/// Enforces the spec on a stream of `O:`/`I:` lines over `n` traces.
pub fn enforce(text: &str, n: u32, stream: &str) -> Result<EnforceReport, String> {
    let s = spec(text)?;
    let n = traces(n)?;
    let steps = parse_steps(stream, s.alphabet(), n as usize).map_err(|e| e.to_string())?;
    let solved = build_parallel_game(&s, n, &EnforceConfig::default()).map_err(|e| e.to_string())?;
    let mut session = EnforcerSession::new(Arc::new(solved), false);
    let res = run_stream(&mut session, &steps).map_err(|e| e.to_string())?;
    let inputs = s.alphabet().input_mask();
    let mut output = String::new();
    for (j, step) in steps.iter().enumerate() {
        let outs: Vec<_> = res.traces.iter().map(|t| t.events[j] & !inputs).collect();
        output += &format_outputs(&outs, s.alphabet(), res.enforced[j]);
        output.push('\n');
        output += &format_inputs(&step.inputs, s.alphabet());
        output.push('\n');
    }
    Ok(EnforceReport { output, steps: steps.len(), intervention: res.stats.intervention })
}

fn json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(e) => serde_json::to_string(&serde_json::json!({ "error": e })),
    }
    .expect("reports serialize")
}

#[wasm_bindgen(js_name = inspect)]
pub fn inspect_json(text: &str, n: u32) -> String {
    json(inspect(text, n))
}

#[wasm_bindgen(js_name = solve)]
pub fn solve_json(text: &str, n: u32) -> String {
    json(solve(text, n))
}

#[wasm_bindgen(js_name = enforce)]
pub fn enforce_json(text: &str, n: u32, stream: &str) -> String {
    json(enforce(text, n, stream))
}
