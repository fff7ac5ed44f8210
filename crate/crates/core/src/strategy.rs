//! Sequential bidding strategies and profiles.
//!
//! Player `i` bids after seeing the bids announced by players `1..i-1`; a
//! strategy maps that announced prefix plus the player's own type to a bid.

use std::fmt;
use std::sync::Arc;

use crate::auction::{kth_highest, prefix_max, AnnouncementVector, TypeVector};
use crate::error::{Error, Result};
use crate::mechanism::Mechanism;
use crate::value::Value;

pub type BidFn = Arc<dyn Fn(&[Value], Value) -> Value + Send + Sync>;

#[derive(Clone)]
pub enum StrategyKind {
    /// Bid the own type.
    Truth,
    /// Own type when it beats the prefix, else 0.
    VickreyOpt,
    /// Own type when it beats the prefix; otherwise the highest current bid,
    /// or for the last player the second-highest current bid.
    BcOpt {
        n: usize,
    },
    /// Own type when it beats the prefix, else `max(prefix_max - step, 0)`.
    Adversarial {
        step: Value,
    },
    Constant(Value),
    /// Own type when it beats the prefix, else `max(previous bid - eps, 0)`.
    BelowPrevious {
        eps: Value,
    },
    /// Own type when it beats the prefix, else the previous bid.
    MatchPrevious,
    Custom {
        label: String,
        myopic: bool,
        bid: BidFn,
    },
}

impl fmt::Debug for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Truth => f.write_str("Truth"),
            StrategyKind::VickreyOpt => f.write_str("VickreyOpt"),
            StrategyKind::BcOpt { n } => write!(f, "BcOpt {{ n: {n} }}"),
            StrategyKind::Adversarial { step } => write!(f, "Adversarial {{ step: {step} }}"),
            StrategyKind::Constant(c) => write!(f, "Constant({c})"),
            StrategyKind::BelowPrevious { eps } => write!(f, "BelowPrevious {{ eps: {eps} }}"),
            StrategyKind::MatchPrevious => f.write_str("MatchPrevious"),
            StrategyKind::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Strategy {
    player: usize,
    kind: StrategyKind,
}

impl Strategy {
    pub fn truth(player: usize) -> Self {
        Strategy {
            player,
            kind: StrategyKind::Truth,
        }
    }

    pub fn vickrey_opt(player: usize) -> Self {
        Strategy {
            player,
            kind: StrategyKind::VickreyOpt,
        }
    }

    pub fn bc_opt(player: usize, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::BcRequiresThree(n));
        }
        if player == 0 || player > n {
            return Err(Error::PlayerOutOfRange { player, n });
        }
        Ok(Strategy {
            player,
            kind: StrategyKind::BcOpt { n },
        })
    }

    pub fn adversarial(player: usize) -> Self {
        Strategy {
            player,
            kind: StrategyKind::Adversarial {
                step: Value::from(1),
            },
        }
    }

    pub fn adversarial_with_step(player: usize, step: Value) -> Result<Self> {
        if step <= Value::zero() {
            return Err(Error::Negative(step.to_string()));
        }
        Ok(Strategy {
            player,
            kind: StrategyKind::Adversarial { step },
        })
    }

    pub fn constant(player: usize, c: Value) -> Result<Self> {
        Ok(Strategy {
            player,
            kind: StrategyKind::Constant(c.non_negative()?),
        })
    }

    pub fn below_previous(player: usize, eps: Value) -> Result<Self> {
        if eps <= Value::zero() {
            return Err(Error::Negative(eps.to_string()));
        }
        Ok(Strategy {
            player,
            kind: StrategyKind::BelowPrevious { eps },
        })
    }

    pub fn match_previous(player: usize) -> Self {
        Strategy {
            player,
            kind: StrategyKind::MatchPrevious,
        }
    }

    /// Arbitrary bid function. Negative outputs are rejected at bid time.
    pub fn custom(
        player: usize,
        label: impl Into<String>,
        myopic: bool,
        bid: impl Fn(&[Value], Value) -> Value + Send + Sync + 'static,
    ) -> Self {
        Strategy {
            player,
            kind: StrategyKind::Custom {
                label: label.into(),
                myopic,
                bid: Arc::new(bid),
            },
        }
    }

    /// `truth`, `vickrey-opt`, `bc-opt`, `adversarial`, `constant:<rational>`.
    pub fn parse(selector: &str, player: usize, n: usize) -> Result<Self> {
        match selector.trim() {
            "truth" => Ok(Strategy::truth(player)),
            "vickrey-opt" => Ok(Strategy::vickrey_opt(player)),
            "bc-opt" => Strategy::bc_opt(player, n),
            "adversarial" => Ok(Strategy::adversarial(player)),
            other => match other.strip_prefix("constant:") {
                Some(c) => Strategy::constant(player, c.parse()?),
                None => Err(Error::UnknownStrategy(other.to_string())),
            },
        }
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.kind
    }

    /// Selector string for the named strategies, a descriptive label otherwise.
    pub fn label(&self) -> String {
        match &self.kind {
            StrategyKind::Truth => "truth".into(),
            StrategyKind::VickreyOpt => "vickrey-opt".into(),
            StrategyKind::BcOpt { .. } => "bc-opt".into(),
            StrategyKind::Adversarial { step } if *step == Value::from(1) => "adversarial".into(),
            StrategyKind::Adversarial { step } => format!("adversarial[{step}]"),
            StrategyKind::Constant(c) => format!("constant:{c}"),
            StrategyKind::BelowPrevious { eps } => format!("below-previous[{eps}]"),
            StrategyKind::MatchPrevious => "match-previous".into(),
            StrategyKind::Custom { label, .. } => label.clone(),
        }
    }

    /// Whether the bid ignores the announced prefix.
    pub fn is_myopic(&self) -> bool {
        match &self.kind {
            StrategyKind::Truth | StrategyKind::Constant(_) => true,
            StrategyKind::Custom { myopic, .. } => *myopic,
            _ => false,
        }
    }

    /// Bid given the prefix announced by players `1..i-1` and the own type.
    pub fn bid(&self, prefix: &[Value], own: Value) -> Result<Value> {
        let i = self.player;
        if prefix.len() + 1 != i {
            return Err(Error::LengthMismatch {
                expected: i.saturating_sub(1),
                found: prefix.len(),
            });
        }
        own.non_negative()?;
        // prefix_max of the whole prefix is the max over players 1..i-1
        let top = prefix_max(prefix, i);
        let winning = own > top;
        let bid = match &self.kind {
            StrategyKind::Truth => own,
            StrategyKind::Constant(c) => *c,
            StrategyKind::Custom { bid, .. } => bid(prefix, own),
            _ if winning => own,
            StrategyKind::VickreyOpt => Value::zero(),
            StrategyKind::BcOpt { n } => {
                if i < *n {
                    kth_highest(prefix, 1)?
                } else if prefix.len() < 2 {
                    return Err(Error::ShortPrefix(prefix.len()));
                } else {
                    kth_highest(prefix, 2)?
                }
            }
            StrategyKind::Adversarial { step } => (top - *step).max(Value::zero()),
            StrategyKind::BelowPrevious { eps } => {
                (*prefix.last().expect("losing implies a prefix") - *eps).max(Value::zero())
            }
            StrategyKind::MatchPrevious => *prefix.last().expect("losing implies a prefix"),
        };
        bid.non_negative()
    }
}

pub fn truth_strategy(i: usize) -> Strategy {
    Strategy::truth(i)
}

pub fn vickrey_opt_strategy(i: usize) -> Strategy {
    Strategy::vickrey_opt(i)
}

pub fn bc_opt_strategy(i: usize, n: usize) -> Result<Strategy> {
    Strategy::bc_opt(i, n)
}

pub fn adversarial_strategy(i: usize) -> Strategy {
    Strategy::adversarial(i)
}

pub fn constant_strategy(i: usize, c: Value) -> Result<Strategy> {
    Strategy::constant(i, c)
}

/// One strategy per player, player `i` at position `i`.
#[derive(Debug, Clone)]
pub struct StrategyProfile {
    strategies: Vec<Strategy>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<Strategy>) -> Result<Self> {
        if strategies.len() < 2 {
            return Err(Error::TooFewPlayers {
                min: 2,
                n: strategies.len(),
            });
        }
        for (idx, s) in strategies.iter().enumerate() {
            if s.player != idx + 1 {
                return Err(Error::ProfileOrder {
                    strategy: s.player,
                    position: idx + 1,
                });
            }
        }
        Ok(StrategyProfile { strategies })
    }

    /// Every player uses the strategy built by `make`.
    pub fn uniform(n: usize, make: impl Fn(usize) -> Result<Strategy>) -> Result<Self> {
        StrategyProfile::new((1..=n).map(make).collect::<Result<Vec<_>>>()?)
    }

    pub fn truth(n: usize) -> Result<Self> {
        StrategyProfile::uniform(n, |i| Ok(Strategy::truth(i)))
    }

    pub fn vickrey_opt(n: usize) -> Result<Self> {
        StrategyProfile::uniform(n, |i| Ok(Strategy::vickrey_opt(i)))
    }

    pub fn bc_opt(n: usize) -> Result<Self> {
        StrategyProfile::uniform(n, |i| Strategy::bc_opt(i, n))
    }

    /// Constant bids, one per player.
    pub fn constants(bids: &[Value]) -> Result<Self> {
        StrategyProfile::new(
            bids.iter()
                .enumerate()
                .map(|(idx, &b)| Strategy::constant(idx + 1, b))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// One selector per player, or a single selector shared by all.
    pub fn parse<S: AsRef<str>>(selectors: &[S], n: usize) -> Result<Self> {
        match selectors {
            [one] => StrategyProfile::uniform(n, |i| Strategy::parse(one.as_ref(), i, n)),
            many if many.len() == n => StrategyProfile::new(
                many.iter()
                    .enumerate()
                    .map(|(idx, s)| Strategy::parse(s.as_ref(), idx + 1, n))
                    .collect::<Result<Vec<_>>>()?,
            ),
            many => Err(Error::LengthMismatch {
                expected: n,
                found: many.len(),
            }),
        }
    }

    pub fn n(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    /// Shared label when every player uses the same named strategy,
    /// comma-separated labels otherwise.
    pub fn label(&self) -> String {
        let labels: Vec<String> = self.strategies.iter().map(Strategy::label).collect();
        if labels.iter().all(|l| *l == labels[0]) {
            labels[0].clone()
        } else {
            labels.join(",")
        }
    }

    /// Replaces player `s.player()`'s strategy.
    pub fn with(&self, s: Strategy) -> Result<Self> {
        let mut strategies = self.strategies.clone();
        let slot = strategies
            .get_mut(s.player.wrapping_sub(1))
            .ok_or(Error::PlayerOutOfRange {
                player: s.player,
                n: self.n(),
            })?;
        *slot = s;
        Ok(StrategyProfile { strategies })
    }

    /// Extends an already announced `prefix` by letting the remaining
    /// players bid in turn.
    pub fn continue_from(&self, types: &[Value], mut prefix: Vec<Value>) -> Result<Vec<Value>> {
        if types.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: types.len(),
            });
        }
        for s in &self.strategies[prefix.len()..] {
            let b = s.bid(&prefix, types[s.player - 1])?;
            prefix.push(b);
        }
        Ok(prefix)
    }
}

/// Announced bids `[s(·), θ]`: each strategy sees the bids announced
/// before it, not the earlier players' true types.
pub fn apply_profile(profile: &StrategyProfile, types: &TypeVector) -> Result<AnnouncementVector> {
    AnnouncementVector::new(profile.continue_from(types.as_slice(), Vec::new())?)
}

pub fn social_welfare(
    mechanism: &Mechanism,
    types: &TypeVector,
    profile: &StrategyProfile,
) -> Result<Value> {
    let bids = apply_profile(profile, types)?;
    Ok(mechanism
        .run(bids.as_slice(), types.as_slice())?
        .social_welfare)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auction::argsmax;
    use crate::grid::Grid;

    fn vals(xs: &[i64]) -> Vec<Value> {
        xs.iter().map(|&x| Value::from(x)).collect()
    }

    fn types(xs: &[i64]) -> TypeVector {
        TypeVector::new(vals(xs)).unwrap()
    }

    fn bid(s: &Strategy, prefix: &[i64], own: i64) -> Value {
        s.bid(&vals(prefix), Value::from(own)).unwrap()
    }

    #[test]
    fn truth_examples() {
        assert_eq!(bid(&truth_strategy(3), &[3, 5], 4), Value::from(4));
        assert_eq!(bid(&truth_strategy(1), &[], 0), Value::from(0));
        assert_eq!(bid(&truth_strategy(3), &[9, 9], 9), Value::from(9));
        assert!(truth_strategy(1).is_myopic());
    }

    #[test]
    fn vickrey_opt_examples() {
        assert_eq!(bid(&vickrey_opt_strategy(3), &[3, 5], 4), Value::from(0));
        assert_eq!(bid(&vickrey_opt_strategy(2), &[3], 5), Value::from(5));
        assert_eq!(bid(&vickrey_opt_strategy(1), &[], 2), Value::from(2));
        assert!(!vickrey_opt_strategy(2).is_myopic());
    }

    #[test]
    fn bc_opt_examples() {
        assert_eq!(
            bid(&bc_opt_strategy(2, 3).unwrap(), &[5], 3),
            Value::from(5)
        );
        assert_eq!(
            bid(&bc_opt_strategy(3, 3).unwrap(), &[3, 5], 4),
            Value::from(3)
        );
        assert_eq!(
            bid(&bc_opt_strategy(2, 3).unwrap(), &[3], 5),
            Value::from(5)
        );
        // last player tied with the prefix max takes the losing branch
        assert_eq!(
            bid(&bc_opt_strategy(3, 3).unwrap(), &[5, 2], 5),
            Value::from(2)
        );
        assert!(bc_opt_strategy(1, 2).is_err());
        assert!(bc_opt_strategy(4, 3).is_err());
    }

    #[test]
    fn adversarial_examples() {
        assert_eq!(bid(&adversarial_strategy(2), &[2], 0), Value::from(1));
        assert_eq!(bid(&adversarial_strategy(2), &[0], 0), Value::from(0));
        assert_eq!(bid(&adversarial_strategy(2), &[2], 3), Value::from(3));
    }

    #[test]
    fn constant_examples() {
        let c = constant_strategy(1, Value::from(3)).unwrap();
        assert_eq!(bid(&c, &[], 0), Value::from(3));
        let c = constant_strategy(2, Value::from(0)).unwrap();
        assert_eq!(bid(&c, &[4], 9), Value::from(0));
        let c = constant_strategy(3, Value::new(7, 2).unwrap()).unwrap();
        assert_eq!(bid(&c, &[1, 1], 1), Value::new(7, 2).unwrap());
        assert!(constant_strategy(1, Value::from(-1)).is_err());
    }

    #[test]
    fn bid_rejects_wrong_prefix_length() {
        assert!(truth_strategy(3).bid(&vals(&[1]), Value::from(1)).is_err());
    }

    #[test]
    fn custom_negative_bid_is_an_error() {
        let s = Strategy::custom(1, "neg", true, |_, _| Value::from(-1));
        assert!(s.bid(&[], Value::from(0)).is_err());
    }

    #[test]
    fn apply_profile_examples() {
        let v = StrategyProfile::vickrey_opt(3).unwrap();
        assert_eq!(
            apply_profile(&v, &types(&[3, 5, 4])).unwrap().as_slice(),
            vals(&[3, 5, 0])
        );
        let bc = StrategyProfile::bc_opt(3).unwrap();
        assert_eq!(
            apply_profile(&bc, &types(&[3, 5, 4])).unwrap().as_slice(),
            vals(&[3, 5, 3])
        );
        assert_eq!(
            apply_profile(&bc, &types(&[5, 3, 4])).unwrap().as_slice(),
            vals(&[5, 5, 5])
        );
    }

    #[test]
    fn social_welfare_examples() {
        let theta = types(&[3, 5, 4]);
        let vick = Mechanism::vickrey(3).unwrap();
        let bc = Mechanism::bailey_cavallo(3).unwrap();
        let sw = |m: &Mechanism, p: StrategyProfile| social_welfare(m, &theta, &p).unwrap();
        assert_eq!(
            sw(&vick, StrategyProfile::truth(3).unwrap()),
            Value::from(1)
        );
        assert_eq!(
            sw(&vick, StrategyProfile::vickrey_opt(3).unwrap()),
            Value::from(2)
        );
        assert_eq!(sw(&bc, StrategyProfile::bc_opt(3).unwrap()), Value::from(5));
    }

    #[test]
    fn profile_parsing() {
        let p = StrategyProfile::parse(&["bc-opt"], 3).unwrap();
        assert_eq!(p.label(), "bc-opt");
        let p = StrategyProfile::parse(&["truth", "constant:5/2", "adversarial"], 3).unwrap();
        assert_eq!(p.label(), "truth,constant:5/2,adversarial");
        assert!(StrategyProfile::parse(&["truth", "truth"], 3).is_err());
        assert!(StrategyProfile::parse(&["bluff"], 3).is_err());
        assert!(StrategyProfile::new(vec![Strategy::truth(2), Strategy::truth(1)]).is_err());
    }

    #[test]
    fn myopic_strategies_ignore_prefix() {
        let g = Grid::integers(3);
        for s in [
            Strategy::truth(3),
            Strategy::constant(3, Value::from(2)).unwrap(),
        ] {
            assert!(s.is_myopic());
            for own in g.points() {
                let answers: Vec<Value> = g.cube(2).map(|p| s.bid(&p, *own).unwrap()).collect();
                assert!(answers.windows(2).all(|w| w[0] == w[1]));
            }
        }
    }

    #[test]
    fn truth_profile_is_identity_and_opt_profiles_keep_winner() {
        let g = Grid::integers(4);
        for n in 3..=4 {
            let truth = StrategyProfile::truth(n).unwrap();
            let vopt = StrategyProfile::vickrey_opt(n).unwrap();
            let bopt = StrategyProfile::bc_opt(n).unwrap();
            for theta in g.cube(n) {
                let t = TypeVector::new(theta.clone()).unwrap();
                assert_eq!(
                    apply_profile(&truth, &t).unwrap().as_slice(),
                    theta.as_slice()
                );
                let w = argsmax(&theta).unwrap();
                for p in [&vopt, &bopt] {
                    let a = apply_profile(p, &t).unwrap();
                    assert_eq!(argsmax(a.as_slice()).unwrap(), w, "{theta:?}");
                }
            }
        }
    }
}
