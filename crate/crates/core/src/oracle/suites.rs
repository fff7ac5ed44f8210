//! Named verification suites.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mechanism::{check_incentive_compatible, Mechanism, NamedRedistribution};
use crate::strategy::{Strategy, StrategyProfile};
use crate::value::Value;

use super::report::{VerificationReport, Witness};
use super::{bc, groves, vickrey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    GrovesIc,
    Feasibility,
    ClearWinnerLoser,
    OptimalBids,
    ConsistencyInvariants,
    VickreyEquality,
    VickreySociallyMaximal,
    SwMaximalVickrey,
    SwMaximalBc,
    BcNoSociallyOptimal,
    BcNotUtilityEqual,
    NoDominant,
    LastPlayerDominant,
    Nash,
    BcOptDominance,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const CONCRETE: [Suite; 15] = [
        Suite::GrovesIc,
        Suite::Feasibility,
        Suite::ClearWinnerLoser,
        Suite::OptimalBids,
        Suite::ConsistencyInvariants,
        Suite::VickreyEquality,
        Suite::VickreySociallyMaximal,
        Suite::SwMaximalVickrey,
        Suite::SwMaximalBc,
        Suite::BcNoSociallyOptimal,
        Suite::BcNotUtilityEqual,
        Suite::NoDominant,
        Suite::LastPlayerDominant,
        Suite::Nash,
        Suite::BcOptDominance,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::GrovesIc => "groves-ic",
            Suite::Feasibility => "feasibility",
            Suite::ClearWinnerLoser => "lemma1",
            Suite::OptimalBids => "lemma4",
            Suite::ConsistencyInvariants => "corollary1",
            Suite::VickreyEquality => "vickrey-equality",
            Suite::VickreySociallyMaximal => "vickrey-socially-maximal",
            Suite::SwMaximalVickrey => "sw-maximal-vickrey",
            Suite::SwMaximalBc => "sw-maximal-bc",
            Suite::BcNoSociallyOptimal => "bc-no-socially-optimal",
            Suite::BcNotUtilityEqual => "bc-not-utility-equal",
            Suite::NoDominant => "no-dominant",
            Suite::LastPlayerDominant => "last-player-dominant",
            Suite::Nash => "nash",
            Suite::BcOptDominance => "claim-thirdhighest",
            Suite::All => "all",
        }
    }

    /// Suites that only make sense for the Bailey-Cavallo auction.
    pub fn needs_bc(&self) -> bool {
        matches!(
            self,
            Suite::SwMaximalBc
                | Suite::BcNoSociallyOptimal
                | Suite::BcNotUtilityEqual
                | Suite::BcOptDominance
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::CONCRETE
            .iter()
            .chain([&Suite::All])
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: usize,
    pub grid: Grid,
    pub epsilon: Value,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 3,
            grid: Grid::integers(4),
            epsilon: Value::from(1),
        }
    }
}

fn mechanisms(n: usize) -> Result<Vec<Mechanism>> {
    let mut out = vec![Mechanism::vickrey(n)?];
    if n >= 3 {
        out.push(Mechanism::bailey_cavallo(n)?);
    }
    Ok(out)
}

fn ic_report(mech: &Mechanism, grid: &Grid, n: usize) -> Result<VerificationReport> {
    let ic = check_incentive_compatible(mech, grid, n)?;
    let witness = match ic.witness {
        Some(w) => {
            let mut dev = w.theta.clone();
            dev[w.player - 1] = w.deviation;
            let note = format!("player {} gains by reporting {}", w.player, w.deviation);
            Some(Witness::evaluate(
                mech,
                &w.theta,
                vec![w.theta.clone(), dev],
                note,
            )?)
        }
        None => None,
    };
    Ok(VerificationReport::sweep(
        format!("groves-ic/{}", mech.selector()),
        ic.instances as u64,
        witness,
    ))
}

fn optimal_profiles(n: usize) -> Result<Vec<Vec<Strategy>>> {
    let mut out = vec![
        (1..=n).map(Strategy::truth).collect(),
        (1..=n).map(Strategy::vickrey_opt).collect(),
    ];
    if n >= 3 {
        out.push(
            (1..=n)
                .map(|i| Strategy::bc_opt(i, n))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(out)
}

/// Runs one suite (or every suite for [`Suite::All`]) and returns its
/// reports in a fixed order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let (n, grid, eps) = (cfg.n, &cfg.grid, cfg.epsilon);
    if n < 2 {
        return Err(Error::TooFewPlayers { min: 2, n });
    }
    if suite.needs_bc() && n < 3 {
        return Err(Error::BcRequiresThree(n));
    }
    let mut out = Vec::new();
    match suite {
        Suite::All => {
            for s in Suite::CONCRETE.iter().filter(|s| n >= 3 || !s.needs_bc()) {
                out.extend(run_suite(*s, cfg)?);
            }
        }
        Suite::GrovesIc => {
            for m in mechanisms(n)? {
                out.push(ic_report(&m, grid, n)?);
            }
            for rule in NamedRedistribution::ALL {
                if let Ok(m) = Mechanism::groves(rule, n) {
                    out.push(ic_report(&m, grid, n)?);
                }
            }
        }
        Suite::Feasibility => {
            for m in mechanisms(n)? {
                out.push(groves::check_feasibility(&m, grid, n)?);
            }
            if n >= 3 {
                out.push(bc::check_bc_identities(grid, n)?);
            }
        }
        Suite::ClearWinnerLoser => {
            for m in mechanisms(n)? {
                out.extend(groves::check_clear_winner_loser(&m, grid, n)?);
            }
        }
        Suite::OptimalBids => {
            out.push(groves::check_consistency_membership(grid, n)?);
            for m in mechanisms(n)? {
                out.push(groves::check_optimal_bid_characterisation(&m, grid, n)?);
                out.extend(groves::check_constraint_fixtures(&m, grid, n)?);
                for profile in optimal_profiles(n)? {
                    for s in &profile {
                        out.push(groves::check_pointwise_optimal(s, &m, grid, n)?);
                    }
                }
            }
        }
        Suite::ConsistencyInvariants => out.push(groves::check_consistency_invariants(grid, n)?),
        Suite::VickreyEquality => out.extend(vickrey::check_vickrey_utility_equality(grid, n)?),
        Suite::VickreySociallyMaximal => {
            out.push(vickrey::check_socially_maximal_vickrey(grid, n)?)
        }
        Suite::SwMaximalVickrey => {
            let m = Mechanism::vickrey(n)?;
            out.push(vickrey::check_sw_maximal(
                &m,
                &StrategyProfile::vickrey_opt(n)?,
                grid,
                n,
            )?);
            out.extend(vickrey::check_vickrey_welfare(grid, n)?);
        }
        Suite::SwMaximalBc => {
            let m = Mechanism::bailey_cavallo(n)?;
            out.push(vickrey::check_sw_maximal(
                &m,
                &StrategyProfile::bc_opt(n)?,
                grid,
                n,
            )?);
            out.extend(bc::check_bc_welfare(grid, n)?);
        }
        Suite::BcNoSociallyOptimal => {
            for i in 1..=n {
                out.extend(bc::check_bc_no_socially_optimal(grid, n, i)?);
            }
        }
        Suite::BcNotUtilityEqual => out.extend(bc::check_bc_not_utility_equal(grid, n, eps)?),
        Suite::NoDominant => {
            for m in mechanisms(n)? {
                for i in 1..n {
                    out.push(groves::check_no_dominant(&m, grid, n, i, eps)?);
                }
            }
        }
        Suite::LastPlayerDominant => {
            for m in mechanisms(n)? {
                out.push(groves::check_last_player_dominant(&m, grid, n)?);
            }
        }
        Suite::Nash => {
            let v = Mechanism::vickrey(n)?;
            out.extend(groves::check_nash_within_optimal(
                &v,
                &StrategyProfile::vickrey_opt(n)?,
                grid,
                n,
            )?);
            if n >= 3 {
                let b = Mechanism::bailey_cavallo(n)?;
                out.extend(groves::check_nash_within_optimal(
                    &b,
                    &StrategyProfile::bc_opt(n)?,
                    grid,
                    n,
                )?);
            }
            let v2 = Mechanism::vickrey(2)?;
            let w = groves::deviation_instance(
                &v2,
                &StrategyProfile::vickrey_opt(2)?,
                &[Value::from(1), Value::from(2)],
                1,
                Value::from(3),
            )?;
            let gained = w.value("a1.u1") > w.value("a0.u1");
            out.push(VerificationReport::new(
                "nash/deviation-instance",
                1,
                gained,
                Some(w),
            ));
        }
        Suite::BcOptDominance => out.push(bc::check_bc_opt_dominance(grid, n)?),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::CONCRETE.iter().chain([&Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("lemma9".parse::<Suite>().is_err());
    }

    #[test]
    fn bc_suites_need_three_players() {
        let cfg = SuiteConfig {
            n: 2,
            ..SuiteConfig::default()
        };
        assert!(run_suite(Suite::SwMaximalBc, &cfg).is_err());
        assert!(run_suite(Suite::GrovesIc, &cfg).is_ok());
    }
}
