use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mechanism::Mechanism;
use crate::value::Value;

/// A concrete instance backing a report: true types, one or more announced
/// bid vectors, and the values the check compared.
///
/// Keys of the form `a<k>.<field>` describe `announcements[k]` evaluated
/// under `mechanism` with true types `theta`; `field` is one of `winner`,
/// `sw`, `tax` (aggregate), `u<i>` or `t<i>`. Other keys are free-form
/// parameters of the instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub mechanism: String,
    pub theta: Vec<Value>,
    pub announcements: Vec<Vec<Value>>,
    pub values: BTreeMap<String, Value>,
    pub note: String,
}

impl Witness {
    /// Evaluates every announcement vector and records its outcome.
    pub fn evaluate(
        mechanism: &Mechanism,
        theta: &[Value],
        announcements: Vec<Vec<Value>>,
        note: impl Into<String>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (k, bids) in announcements.iter().enumerate() {
            for (key, v) in outcome_values(mechanism, theta, bids)? {
                values.insert(format!("a{k}.{key}"), v);
            }
        }
        Ok(Witness {
            mechanism: mechanism.selector(),
            theta: theta.to_vec(),
            announcements,
            values,
            note: note.into(),
        })
    }

    pub fn with(mut self, key: impl Into<String>, value: Value) -> Self {
        self.values.insert(key.into(), value);
        self
    }

    pub fn value(&self, key: &str) -> Option<Value> {
        self.values.get(key).copied()
    }

    /// Re-runs every announcement and compares all `a<k>.*` entries.
    pub fn recheck(&self) -> Result<bool> {
        let mechanism = Mechanism::parse(&self.mechanism, self.theta.len())?;
        for (k, bids) in self.announcements.iter().enumerate() {
            for (key, v) in outcome_values(&mechanism, &self.theta, bids)? {
                if let Some(recorded) = self.values.get(&format!("a{k}.{key}")) {
                    if *recorded != v {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

pub(crate) fn outcome_values(
    mechanism: &Mechanism,
    theta: &[Value],
    bids: &[Value],
) -> Result<Vec<(String, Value)>> {
    let out = mechanism.run(bids, theta)?;
    let mut values = vec![
        ("winner".to_string(), Value::integer(out.winner as i128)),
        ("sw".to_string(), out.social_welfare),
        ("tax".to_string(), out.aggregate_tax()),
    ];
    for (idx, (u, t)) in out.utilities.iter().zip(&out.taxes).enumerate() {
        values.push((format!("u{}", idx + 1), *u));
        values.push((format!("t{}", idx + 1), *t));
    }
    Ok(values)
}

/// Outcome of one verification suite.
///
/// `passed` means the expected result held: for property sweeps no
/// violation was found, for counterexample suites the counterexample was
/// reproduced. A failed property sweep always carries its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub instances: u64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub header: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl VerificationReport {
    pub fn new(
        suite: impl Into<String>,
        instances: u64,
        passed: bool,
        witness: Option<Witness>,
    ) -> Self {
        VerificationReport {
            suite: suite.into(),
            instances,
            passed,
            header: None,
            witness,
        }
    }

    /// Property sweep: passes iff no violation witness was found.
    pub fn sweep(suite: impl Into<String>, instances: u64, violation: Option<Witness>) -> Self {
        VerificationReport {
            suite: suite.into(),
            instances,
            passed: violation.is_none(),
            header: None,
            witness: violation,
        }
    }

    /// Expected counterexample: passes iff one was found.
    pub fn expect_witness(
        suite: impl Into<String>,
        instances: u64,
        found: Option<Witness>,
    ) -> Self {
        VerificationReport {
            suite: suite.into(),
            instances,
            passed: found.is_some(),
            header: None,
            witness: found,
        }
    }

    /// Scope statement for checks that only cover a finite family.
    pub fn with_header(mut self, header: impl Into<String>) -> Self {
        self.header = Some(header.into());
        self
    }
}
