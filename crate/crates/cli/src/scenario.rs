use serde::{Deserialize, Serialize};

use seqgroves::{Mechanism, StrategyProfile, TypeVector, Value};

use crate::error::CliError;
use crate::OutputFormat;

/// Contents of a `--scenario` file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n: usize,
    pub mechanism: String,
    pub types: Vec<Value>,
    pub profile: Vec<String>,
    #[serde(default)]
    pub output: Option<OutputFormat>,
}

/// One simulated run of the auction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Run {
    pub profile: String,
    pub announcements: Vec<Value>,
    pub winner: usize,
    pub taxes: Vec<Value>,
    pub utilities: Vec<Value>,
    pub social_welfare: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Simulation {
    pub mechanism: String,
    pub types: Vec<Value>,
    pub runs: Vec<Run>,
}

/// One CSV or table row. `player` is a 1-based index, or `all` for the
/// summary row which carries the aggregate tax and the utility sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub profile: String,
    pub player: String,
    pub announced: String,
    pub winner: usize,
    pub tax: Value,
    pub utility: Value,
    pub sw: Value,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad scenario file: {e}")))
    }

    /// Runs the configured profile followed by the truthful baseline.
    pub fn simulate(&self) -> Result<Simulation, CliError> {
        if self.types.len() != self.n {
            return Err(CliError::Usage(format!(
                "scenario declares n = {} but lists {} types",
                self.n,
                self.types.len()
            )));
        }
        let mechanism = Mechanism::parse(&self.mechanism, self.n)?;
        let types = TypeVector::new(self.types.clone())?;
        let profile = StrategyProfile::parse(&self.profile, self.n)?;
        let mut runs = vec![run(&mechanism, &types, &profile)?];
        let truth = StrategyProfile::truth(self.n)?;
        if profile.label() != truth.label() {
            runs.push(run(&mechanism, &types, &truth)?);
        }
        Ok(Simulation {
            mechanism: mechanism.selector(),
            types: self.types.clone(),
            runs,
        })
    }
}

fn run(
    mechanism: &Mechanism,
    types: &TypeVector,
    profile: &StrategyProfile,
) -> Result<Run, CliError> {
    let announced = profile.continue_from(types.as_slice(), Vec::new())?;
    let out = mechanism.run(&announced, types.as_slice())?;
    let total: Value = out.utilities.iter().sum();
    if total != out.social_welfare {
        return Err(CliError::Invariant(format!(
            "utilities sum to {total} but welfare is {}",
            out.social_welfare
        )));
    }
    Ok(Run {
        profile: profile.label(),
        announcements: announced,
        winner: out.winner,
        taxes: out.taxes,
        utilities: out.utilities,
        social_welfare: out.social_welfare,
    })
}

impl Simulation {
    pub fn rows(&self) -> Vec<Row> {
        let mut rows = Vec::new();
        for r in &self.runs {
            for (idx, a) in r.announcements.iter().enumerate() {
                rows.push(Row {
                    profile: r.profile.clone(),
                    player: (idx + 1).to_string(),
                    announced: a.to_string(),
                    winner: r.winner,
                    tax: r.taxes[idx],
                    utility: r.utilities[idx],
                    sw: r.social_welfare,
                });
            }
            rows.push(Row {
                profile: r.profile.clone(),
                player: "all".into(),
                announced: String::new(),
                winner: r.winner,
                tax: r.taxes.iter().sum(),
                utility: r.utilities.iter().sum(),
                sw: r.social_welfare,
            });
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(profile: &str) -> ScenarioConfig {
        ScenarioConfig {
            n: 3,
            mechanism: "bc".into(),
            types: vec![Value::from(3), Value::from(5), Value::from(4)],
            profile: vec![profile.into()],
            output: None,
        }
    }

    #[test]
    fn runs_profile_and_truth() {
        let sim = scenario("bc-opt").simulate().unwrap();
        assert_eq!(sim.runs.len(), 2);
        assert_eq!(sim.runs[0].social_welfare, Value::from(5));
        assert_eq!(sim.runs[1].social_welfare, Value::new(13, 3).unwrap());
        assert_eq!(sim.rows().len(), 8);
    }

    #[test]
    fn truth_is_not_repeated() {
        assert_eq!(scenario("truth").simulate().unwrap().runs.len(), 1);
    }

    #[test]
    fn parses_scenario_json() {
        let text = r#"{"n": 2, "mechanism": "vickrey", "types": ["1", "2"], "profile": ["vickrey-opt"], "output": "csv"}"#;
        let cfg = ScenarioConfig::from_json(text).unwrap();
        assert_eq!(cfg.output, Some(OutputFormat::Csv));
        assert!(ScenarioConfig::from_json(r#"{"n": 2}"#).is_err());
    }
}
