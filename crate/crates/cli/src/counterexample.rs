//! Fixed instances behind the negative results.

use std::fmt;
use std::str::FromStr;

use seqgroves::oracle::{bc, groves};
use seqgroves::{Grid, Mechanism, StrategyProfile, Value, VerificationReport, Witness};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counterexample {
    NoDominant,
    BcNotUtilityEqual,
    NashDeviation,
    BcNoSociallyOptimal,
}

impl Counterexample {
    pub const ALL: [Counterexample; 4] = [
        Counterexample::NoDominant,
        Counterexample::BcNotUtilityEqual,
        Counterexample::NashDeviation,
        Counterexample::BcNoSociallyOptimal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Counterexample::NoDominant => "no-dominant",
            Counterexample::BcNotUtilityEqual => "bc-not-utility-equal",
            Counterexample::NashDeviation => "nash-deviation",
            Counterexample::BcNoSociallyOptimal => "bc-no-socially-optimal",
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Counterexample {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Counterexample::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown counterexample {s:?}")))
    }
}

fn welfare_gap(name: &str, w: Witness) -> VerificationReport {
    let better = w.value("a1.sw") > w.value("a0.sw");
    VerificationReport::new(name, 1, better, Some(w))
}

/// Reproduces one counterexample with step `eps`.
pub fn reproduce(
    which: Counterexample,
    n: usize,
    eps: Value,
) -> Result<Vec<VerificationReport>, CliError> {
    let v = |x: i64| Value::from(x);
    let out = match which {
        Counterexample::NoDominant => {
            let grid = Grid::integers(3);
            let mut out = vec![groves::check_no_dominant(
                &Mechanism::vickrey(n)?,
                &grid,
                n,
                1,
                eps,
            )?];
            if n >= 3 {
                out.push(groves::check_no_dominant(
                    &Mechanism::bailey_cavallo(n)?,
                    &grid,
                    n,
                    1,
                    eps,
                )?);
            }
            out
        }
        Counterexample::BcNotUtilityEqual => {
            let ten = v(10);
            let theta = [ten, ten - eps, ten - eps - eps];
            let w = bc::bc_epsilon_instance(&theta, eps)?;
            let differs = w.value("a0.r2") != w.value("a1.r2");
            vec![VerificationReport::new(
                "bc-not-utility-equal/shade-vs-match",
                1,
                differs,
                Some(w),
            )]
        }
        Counterexample::NashDeviation => {
            let m = Mechanism::vickrey(2)?;
            let w = groves::deviation_instance(
                &m,
                &StrategyProfile::vickrey_opt(2)?,
                &[v(1), v(2)],
                1,
                v(3),
            )?;
            let gained = w.value("a1.u1") > w.value("a0.u1");
            vec![VerificationReport::new(
                "nash/deviation-instance",
                1,
                gained,
                Some(w),
            )]
        }
        Counterexample::BcNoSociallyOptimal => {
            let m = Mechanism::bailey_cavallo(3)?;
            let case1 = Witness::evaluate(
                &m,
                &[v(4), v(2), v(3)],
                vec![vec![v(4), v(2), v(3)], vec![v(4), v(3), v(3)]],
                "player 2 bids its type 2; bidding 3 removes the welfare loss",
            )?;
            let case2 = Witness::evaluate(
                &m,
                &[v(4), v(2), v(2)],
                vec![vec![v(4), v(4), v(2)], vec![v(4), v(2), v(2)]],
                "player 2 bids 4; bidding its type 2 removes the welfare loss",
            )?;
            vec![
                welfare_gap("bc-no-socially-optimal/player2/case1", case1),
                welfare_gap("bc-no-socially-optimal/player2/case2", case2),
            ]
        }
    };
    Ok(out)
}
