//! Tax rules for single-item Groves auctions.
//!
//! Every mechanism here allocates to `argsmax` of the bids and charges the
//! pivotal (second-price) tax, then hands each player a redistribution
//! payment computed from the other players' bids only. Vickrey is the zero
//! redistribution, Bailey-Cavallo returns `(θ_{-i})*_2 / n`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::auction::{argsmax, check_player, final_utility, kth_highest, Outcome};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::sweep;
use crate::value::Value;

/// A per-player payment that depends on the other players' bids only.
///
/// Implementations never see the receiving player's own bid, which is what
/// makes every resulting mechanism a Groves mechanism.
pub trait RedistributionRule: Send + Sync {
    /// Payment to a player whose opponents bid `others` in an `n`-player auction.
    fn amount(&self, others: &[Value], n: usize) -> Value;

    /// Minimum number of players for which the rule is defined.
    fn min_players(&self) -> usize {
        2
    }

    fn name(&self) -> &str;
}

/// Redistribution rules selectable by name (`groves:<name>`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedRedistribution {
    /// Nothing is returned: the Vickrey auction.
    Zero,
    /// `(θ_{-i})*_2 / n`.
    BaileyCavallo,
    /// `(θ_{-i})*_2 / (2n)`, half of the BC payment.
    HalfBc,
    /// `-(θ_{-i})*_1`, an extra levy on top of the pivotal tax.
    NegMax,
    /// `(θ_{-i})*_1`. Still Groves, hence incentive compatible, but not feasible.
    PosMax,
}

impl NamedRedistribution {
    pub const ALL: [NamedRedistribution; 5] = [
        NamedRedistribution::Zero,
        NamedRedistribution::BaileyCavallo,
        NamedRedistribution::HalfBc,
        NamedRedistribution::NegMax,
        NamedRedistribution::PosMax,
    ];
}

impl RedistributionRule for NamedRedistribution {
    fn amount(&self, others: &[Value], n: usize) -> Value {
        let n = Value::integer(n as i128);
        let second = || kth_highest(others, 2).expect("rule requires at least two opponents");
        match self {
            NamedRedistribution::Zero => Value::zero(),
            NamedRedistribution::BaileyCavallo => second() / n,
            NamedRedistribution::HalfBc => second() / (n * Value::from(2)),
            NamedRedistribution::NegMax => -kth_highest(others, 1).expect("at least one opponent"),
            NamedRedistribution::PosMax => kth_highest(others, 1).expect("at least one opponent"),
        }
    }

    fn min_players(&self) -> usize {
        match self {
            NamedRedistribution::BaileyCavallo | NamedRedistribution::HalfBc => 3,
            _ => 2,
        }
    }

    fn name(&self) -> &str {
        match self {
            NamedRedistribution::Zero => "zero",
            NamedRedistribution::BaileyCavallo => "bc",
            NamedRedistribution::HalfBc => "half-bc",
            NamedRedistribution::NegMax => "neg-max",
            NamedRedistribution::PosMax => "pos-max",
        }
    }
}

#[derive(Clone)]
pub enum MechanismKind {
    Vickrey,
    BaileyCavallo,
    Groves(Arc<dyn RedistributionRule>),
}

impl fmt::Debug for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismKind::Vickrey => f.write_str("Vickrey"),
            MechanismKind::BaileyCavallo => f.write_str("BaileyCavallo"),
            MechanismKind::Groves(rule) => write!(f, "Groves({})", rule.name()),
        }
    }
}

/// A Groves auction for a fixed number of players.
#[derive(Debug, Clone)]
pub struct Mechanism {
    kind: MechanismKind,
    n: usize,
}

impl Mechanism {
    pub fn new(kind: MechanismKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPlayers { min: 2, n });
        }
        match &kind {
            MechanismKind::BaileyCavallo if n < 3 => return Err(Error::BcRequiresThree(n)),
            MechanismKind::Groves(rule) if n < rule.min_players() => {
                return Err(Error::TooFewPlayers {
                    min: rule.min_players(),
                    n,
                })
            }
            _ => {}
        }
        Ok(Mechanism { kind, n })
    }

    pub fn vickrey(n: usize) -> Result<Self> {
        Mechanism::new(MechanismKind::Vickrey, n)
    }

    pub fn bailey_cavallo(n: usize) -> Result<Self> {
        Mechanism::new(MechanismKind::BaileyCavallo, n)
    }

    pub fn groves(rule: impl RedistributionRule + 'static, n: usize) -> Result<Self> {
        Mechanism::new(MechanismKind::Groves(Arc::new(rule)), n)
    }

    /// Accepts `vickrey`, `bailey-cavallo` (or `bc`) and `groves:<name>`
    /// with a name from [`NamedRedistribution`].
    pub fn parse(selector: &str, n: usize) -> Result<Self> {
        let kind = match selector.trim() {
            "vickrey" => MechanismKind::Vickrey,
            "bailey-cavallo" | "bc" => MechanismKind::BaileyCavallo,
            other => {
                let name = other
                    .strip_prefix("groves:")
                    .ok_or_else(|| Error::UnknownMechanism(other.to_string()))?;
                let rule = NamedRedistribution::ALL
                    .into_iter()
                    .find(|r| r.name() == name)
                    .ok_or_else(|| Error::UnknownMechanism(other.to_string()))?;
                MechanismKind::Groves(Arc::new(rule))
            }
        };
        Mechanism::new(kind, n)
    }

    pub fn selector(&self) -> String {
        match &self.kind {
            MechanismKind::Vickrey => "vickrey".into(),
            MechanismKind::BaileyCavallo => "bailey-cavallo".into(),
            MechanismKind::Groves(rule) => format!("groves:{}", rule.name()),
        }
    }

    pub fn kind(&self) -> &MechanismKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same rule for a different number of players.
    pub fn with_players(&self, n: usize) -> Result<Self> {
        Mechanism::new(self.kind.clone(), n)
    }

    fn check_len(&self, bids: &[Value]) -> Result<()> {
        if bids.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: bids.len(),
            });
        }
        Ok(())
    }

    /// `r_i(θ_{-i})` for player `i` (1-based).
    pub fn redistribution(&self, bids: &[Value], i: usize) -> Result<Value> {
        self.check_len(bids)?;
        check_player(i, self.n)?;
        let others = without(bids, i);
        Ok(match &self.kind {
            MechanismKind::Vickrey => Value::zero(),
            MechanismKind::BaileyCavallo => {
                NamedRedistribution::BaileyCavallo.amount(&others, self.n)
            }
            MechanismKind::Groves(rule) => rule.amount(&others, self.n),
        })
    }

    pub fn taxes(&self, bids: &[Value]) -> Result<Vec<Value>> {
        self.check_len(bids)?;
        let mut taxes = pivotal_tax(bids)?;
        for (idx, tax) in taxes.iter_mut().enumerate() {
            *tax += self.redistribution(bids, idx + 1)?;
        }
        Ok(taxes)
    }

    /// Allocates by `bids` and scores utilities against `types`.
    pub fn run(&self, bids: &[Value], types: &[Value]) -> Result<Outcome> {
        self.check_len(bids)?;
        self.check_len(types)?;
        let winner = argsmax(bids)?;
        let taxes = self.taxes(bids)?;
        let utilities = types
            .iter()
            .enumerate()
            .map(|(idx, &t)| final_utility(winner, &taxes, idx + 1, t))
            .collect::<Result<Vec<Value>>>()?;
        let social_welfare = utilities.iter().sum();
        Ok(Outcome {
            winner,
            taxes,
            utilities,
            social_welfare,
        })
    }

    /// Final utility of player `i` with true type `own_type` at `bids`.
    pub fn utility(&self, bids: &[Value], i: usize, own_type: Value) -> Result<Value> {
        let winner = argsmax(bids)?;
        let tax = pivotal_tax(bids)?[i - 1] + self.redistribution(bids, i)?;
        Ok(if winner == i { own_type + tax } else { tax })
    }

    pub fn is_feasible(&self, bids: &[Value]) -> Result<bool> {
        Ok(self.taxes(bids)?.iter().sum::<Value>() <= Value::zero())
    }
}

pub(crate) fn without(values: &[Value], i: usize) -> Vec<Value> {
    values
        .iter()
        .enumerate()
        .filter(|&(idx, _)| idx + 1 != i)
        .map(|(_, &v)| v)
        .collect()
}

/// Vickrey tax: the winner pays the second-highest bid, nobody else pays.
pub fn pivotal_tax(bids: &[Value]) -> Result<Vec<Value>> {
    if bids.len() < 2 {
        return Err(Error::TooFewPlayers {
            min: 2,
            n: bids.len(),
        });
    }
    let winner = argsmax(bids)?;
    let second = kth_highest(bids, 2)?;
    let mut taxes = vec![Value::zero(); bids.len()];
    taxes[winner - 1] = -second;
    Ok(taxes)
}

/// `(θ_{-i})*_2 / n`.
pub fn bc_redistribution(bids: &[Value], i: usize) -> Result<Value> {
    Mechanism::bailey_cavallo(bids.len())?.redistribution(bids, i)
}

pub fn bc_tax(bids: &[Value]) -> Result<Vec<Value>> {
    Mechanism::bailey_cavallo(bids.len())?.taxes(bids)
}

pub fn run_mechanism(mechanism: &Mechanism, bids: &[Value], types: &[Value]) -> Result<Outcome> {
    mechanism.run(bids, types)
}

pub fn check_feasible(mechanism: &Mechanism, bids: &[Value]) -> Result<bool> {
    mechanism.is_feasible(bids)
}

/// Truthful report beaten by a unilateral misreport.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IcWitness {
    pub theta: Vec<Value>,
    pub player: usize,
    pub deviation: Value,
    pub truthful_utility: Value,
    pub deviating_utility: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IcCheck {
    pub holds: bool,
    pub instances: usize,
    pub witness: Option<IcWitness>,
}

/// Exhaustive truthfulness check over `grid^n` with misreports from `grid`.
///
/// The witness, if any, is the first violation in lexicographic order of
/// `(θ, player, misreport)`.
pub fn check_incentive_compatible(mechanism: &Mechanism, grid: &Grid, n: usize) -> Result<IcCheck> {
    let mech = mechanism.with_players(n)?;
    let count = grid.cube_size(n);
    let witness = sweep::first_hit(count, |idx| {
        let theta = grid.cube_point(idx, n);
        for i in 1..=n {
            let truthful = mech.utility(&theta, i, theta[i - 1]).expect("valid bids");
            for &dev in grid.points() {
                let mut bids = theta.clone();
                bids[i - 1] = dev;
                let deviating = mech.utility(&bids, i, theta[i - 1]).expect("valid bids");
                if deviating > truthful {
                    return Some(IcWitness {
                        theta: theta.clone(),
                        player: i,
                        deviation: dev,
                        truthful_utility: truthful,
                        deviating_utility: deviating,
                    });
                }
            }
        }
        None
    });
    Ok(IcCheck {
        holds: witness.is_none(),
        instances: count * n * grid.len(),
        witness,
    })
}

/// First opponent profile in `grid^{n-1}` where `rule` leaves the band
/// `0 ≤ r_i < (θ_{-i})*_1`, or `None` if it stays inside everywhere.
pub fn bounded_by_top_bid(
    rule: &dyn RedistributionRule,
    grid: &Grid,
    n: usize,
) -> Option<Vec<Value>> {
    grid.cube(n - 1).find(|others| {
        let r = rule.amount(others, n);
        let top = kth_highest(others, 1).expect("n ≥ 2");
        r.is_negative() || r >= top
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(xs: &[i64]) -> Vec<Value> {
        xs.iter().map(|&x| Value::from(x)).collect()
    }

    fn frac(p: i128, q: i128) -> Value {
        Value::new(p, q).unwrap()
    }

    /// Independent tax oracle: sort copies by hand, no shared helpers.
    fn oracle_bc_taxes(bids: &[i64]) -> Vec<Value> {
        let n = bids.len() as i128;
        let mut winner = 0;
        for (idx, &b) in bids.iter().enumerate() {
            if b > bids[winner] {
                winner = idx;
            }
        }
        let mut sorted = bids.to_vec();
        sorted.sort_by(|a, b| b.cmp(a));
        (0..bids.len())
            .map(|i| {
                let mut others: Vec<i64> = bids.to_vec();
                others.remove(i);
                others.sort_by(|a, b| b.cmp(a));
                let pivotal = if i == winner { -(sorted[1] as i128) } else { 0 };
                frac(pivotal * n + others[1] as i128, n)
            })
            .collect()
    }

    #[test]
    fn pivotal_examples() {
        assert_eq!(pivotal_tax(&vals(&[3, 5, 4])).unwrap(), vals(&[0, -4, 0]));
        assert_eq!(pivotal_tax(&vals(&[0, 0, 0])).unwrap(), vals(&[0, 0, 0]));
        assert_eq!(
            pivotal_tax(&vals(&[1, 5, 0, 3, 2])).unwrap(),
            vals(&[0, -3, 0, 0, 0])
        );
        assert!(pivotal_tax(&vals(&[3])).is_err());
    }

    #[test]
    fn bc_redistribution_examples() {
        let b = vals(&[3, 5, 4]);
        assert_eq!(bc_redistribution(&b, 1).unwrap(), frac(4, 3));
        assert_eq!(bc_redistribution(&b, 2).unwrap(), frac(1, 1));
        assert_eq!(bc_redistribution(&b, 3).unwrap(), frac(1, 1));
        let err = bc_redistribution(&vals(&[3, 5]), 1).unwrap_err();
        assert_eq!(err, Error::BcRequiresThree(2));
        assert_eq!(err.to_string(), "BC requires n ≥ 3 (got 2)");
    }

    #[test]
    fn bc_tax_examples() {
        let t = bc_tax(&vals(&[3, 5, 4])).unwrap();
        assert_eq!(t, vec![frac(4, 3), frac(-3, 1), frac(1, 1)]);
        assert_eq!(t.iter().sum::<Value>(), frac(-2, 3));

        // the tie goes to player 1, who pays the second-highest bid
        let t = bc_tax(&vals(&[5, 5, 5])).unwrap();
        assert_eq!(t, vec![frac(-10, 3), frac(5, 3), frac(5, 3)]);
        assert_eq!(t.iter().sum::<Value>(), Value::zero());

        let bids = [1, 5, 0, 3, 2];
        let t = bc_tax(&vals(&bids)).unwrap();
        assert_eq!(t, oracle_bc_taxes(&bids));
        assert_eq!(t.iter().sum::<Value>(), frac(-2, 5));
    }

    #[test]
    fn run_examples() {
        let theta = vals(&[3, 5, 4]);
        let v = Mechanism::vickrey(3).unwrap();
        let out = v.run(&theta, &theta).unwrap();
        assert_eq!(out.winner, 2);
        assert_eq!(out.utilities, vals(&[0, 1, 0]));
        assert_eq!(out.social_welfare, Value::from(1));

        let bc = Mechanism::bailey_cavallo(3).unwrap();
        let out = bc.run(&vals(&[3, 5, 3]), &theta).unwrap();
        assert_eq!(out.winner, 2);
        assert_eq!(out.taxes, vals(&[1, -2, 1]));
        assert_eq!(out.utilities, vals(&[1, 3, 1]));
        assert_eq!(out.social_welfare, Value::from(5));

        let out = v.run(&vals(&[3, 5, 0]), &theta).unwrap();
        assert_eq!((out.winner, out.social_welfare), (2, Value::from(2)));

        assert!(v.run(&vals(&[3, 5]), &theta).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let v = Mechanism::vickrey(3).unwrap();
        assert!(check_feasible(&v, &vals(&[3, 5, 4])).unwrap());
        let bc = Mechanism::bailey_cavallo(3).unwrap();
        assert!(check_feasible(&bc, &vals(&[5, 5, 5])).unwrap());
        let neg = Mechanism::parse("groves:neg-max", 3).unwrap();
        assert!(check_feasible(&neg, &vals(&[1, 2, 3])).unwrap());
        let pos = Mechanism::parse("groves:pos-max", 3).unwrap();
        assert!(!check_feasible(&pos, &vals(&[1, 2, 3])).unwrap());
    }

    #[test]
    fn selectors_round_trip() {
        for sel in [
            "vickrey",
            "bailey-cavallo",
            "groves:zero",
            "groves:bc",
            "groves:half-bc",
            "groves:neg-max",
            "groves:pos-max",
        ] {
            assert_eq!(Mechanism::parse(sel, 3).unwrap().selector(), sel);
        }
        assert!(Mechanism::parse("groves:nope", 3).is_err());
        assert!(Mechanism::parse("english", 3).is_err());
        assert!(Mechanism::parse("bailey-cavallo", 2).is_err());
        assert!(Mechanism::parse("vickrey", 1).is_err());
    }

    #[test]
    fn incentive_compatibility_examples() {
        let g = Grid::integers(3);
        assert!(
            check_incentive_compatible(&Mechanism::vickrey(3).unwrap(), &g, 3)
                .unwrap()
                .holds
        );
        assert!(
            check_incentive_compatible(&Mechanism::bailey_cavallo(3).unwrap(), &g, 3)
                .unwrap()
                .holds
        );

        // incentive compatibility and feasibility are independent properties
        let g = Grid::integers(2);
        let neg = Mechanism::parse("groves:neg-max", 3).unwrap();
        assert!(check_incentive_compatible(&neg, &g, 3).unwrap().holds);
        assert!(g.cube(3).all(|b| neg.is_feasible(&b).unwrap()));
        let pos = Mechanism::parse("groves:pos-max", 3).unwrap();
        assert!(check_incentive_compatible(&pos, &g, 3).unwrap().holds);
        let infeasible = g.cube(3).find(|b| !pos.is_feasible(b).unwrap());
        assert_eq!(infeasible, Some(vals(&[0, 0, 1])));
    }

    #[test]
    fn redistribution_ignores_own_bid() {
        let g = Grid::integers(3);
        for mech in [
            Mechanism::bailey_cavallo(3).unwrap(),
            Mechanism::parse("groves:half-bc", 3).unwrap(),
        ] {
            for bids in g.cube(3) {
                for i in 1..=3 {
                    let base = mech.redistribution(&bids, i).unwrap();
                    for &alt in g.points() {
                        let mut moved = bids.clone();
                        moved[i - 1] = alt;
                        assert_eq!(mech.redistribution(&moved, i).unwrap(), base);
                    }
                }
            }
        }
    }

    #[test]
    fn top_bid_band() {
        let g = Grid::integers(3);
        // all-zero opponents force r_i = 0 = (θ_{-i})*_1
        assert_eq!(
            bounded_by_top_bid(&NamedRedistribution::BaileyCavallo, &g, 3),
            Some(vals(&[0, 0]))
        );
        let positive = Grid::new(vals(&[1, 2, 3])).unwrap();
        assert_eq!(
            bounded_by_top_bid(&NamedRedistribution::BaileyCavallo, &positive, 3),
            None
        );
        assert!(bounded_by_top_bid(&NamedRedistribution::NegMax, &positive, 3).is_some());
    }
}
