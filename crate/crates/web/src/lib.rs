//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! Each export takes plain strings and returns a JSON string so the page
//! needs no generated TypeScript types. The `*_json` functions hold the
//! logic and are callable from native tests.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use seqgroves::{
    consistent_announcements, run_suite, Grid, Mechanism, StrategyProfile, Suite, SuiteConfig,
    TypeVector, Value,
};

#[derive(Serialize)]
struct Run {
    profile: String,
    announcements: Vec<Value>,
    winner: usize,
    taxes: Vec<Value>,
    utilities: Vec<Value>,
    social_welfare: Value,
}

fn parse_values(text: &str) -> Result<Vec<Value>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<Value>().map_err(|e| e.to_string()))
        .collect()
}

fn run(mech: &Mechanism, types: &[Value], profile: &StrategyProfile) -> Result<Run, String> {
    let bids = profile
        .continue_from(types, Vec::new())
        .map_err(|e| e.to_string())?;
    let out = mech.run(&bids, types).map_err(|e| e.to_string())?;
    Ok(Run {
        profile: profile.label(),
        announcements: bids,
        winner: out.winner,
        taxes: out.taxes,
        utilities: out.utilities,
        social_welfare: out.social_welfare,
    })
}

/// Runs `profile` and truth-telling on the comma-separated `types`.
pub fn simulate_json(mechanism: &str, types: &str, profile: &str) -> Result<String, String> {
    let types = parse_values(types)?;
    let n = types.len();
    TypeVector::new(types.clone()).map_err(|e| e.to_string())?;
    let mech = Mechanism::parse(mechanism, n).map_err(|e| e.to_string())?;
    let selectors: Vec<&str> = profile.split(',').map(str::trim).collect();
    let profile = StrategyProfile::parse(&selectors, n).map_err(|e| e.to_string())?;
    let truth = StrategyProfile::truth(n).map_err(|e| e.to_string())?;
    let runs = vec![run(&mech, &types, &profile)?, run(&mech, &types, &truth)?];
    serde_json::to_string(&runs).map_err(|e| e.to_string())
}

/// Every announcement vector reachable under optimal play.
pub fn consistent_json(theta: &str, grid: &str) -> Result<String, String> {
    let theta = TypeVector::new(parse_values(theta)?).map_err(|e| e.to_string())?;
    let grid: Grid = grid.parse().map_err(|e: seqgroves::Error| e.to_string())?;
    let all = consistent_announcements(&theta, &grid).map_err(|e| e.to_string())?;
    let rows: Vec<&[Value]> = all.iter().map(|a| a.as_slice()).collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

/// Runs one named verification suite.
pub fn suite_json(suite: &str, n: usize, grid: &str) -> Result<String, String> {
    let suite: Suite = suite.parse().map_err(|e: seqgroves::Error| e.to_string())?;
    let grid: Grid = grid.parse().map_err(|e: seqgroves::Error| e.to_string())?;
    let cfg = SuiteConfig {
        n,
        grid,
        ..SuiteConfig::default()
    };
    let reports = run_suite(suite, &cfg).map_err(|e| e.to_string())?;
    serde_json::to_string(&reports).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn simulate(mechanism: &str, types: &str, profile: &str) -> Result<String, JsError> {
    simulate_json(mechanism, types, profile).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = consistentAnnouncements)]
pub fn consistent(theta: &str, grid: &str) -> Result<String, JsError> {
    consistent_json(theta, grid).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runSuite)]
pub fn suite(suite: &str, n: usize, grid: &str) -> Result<String, JsError> {
    suite_json(suite, n, grid).map_err(|e| JsError::new(&e))
}
