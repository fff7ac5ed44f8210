//! Pointwise characterisation of optimal play.
//!
//! For a player who has seen the announced prefix and holds type `θ_i`, the
//! bids some optimal strategy can make are:
//!
//! | position | type vs. prefix max | allowed bids            |
//! |----------|---------------------|-------------------------|
//! | `i < n`  | `θ_i > max`         | exactly `θ_i`           |
//! | `i < n`  | `θ_i ≤ max`         | `[0, max]`              |
//! | `i = n`  | `θ_n > max`         | `(max, ∞)`              |
//! | `i = n`  | `θ_n < max`         | `[0, max]`              |
//! | `i = n`  | `θ_n = max`         | anything                |
//!
//! Enumerating these choices position by position over a grid yields every
//! announcement vector reachable when all players follow some optimal
//! strategy.

use std::fmt;

use crate::auction::{prefix_max, AnnouncementVector, TypeVector};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mechanism::Mechanism;
use crate::value::Value;

/// Which of the four cases (plus the last-player tie) applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintCase {
    /// Earlier player beating the prefix: must bid the own type.
    WinnerBeforeLast,
    /// Last player strictly beating the prefix: must outbid it.
    LastStrictWinner,
    /// Earlier player not beating the prefix: must not outbid it.
    LoserBeforeLast,
    /// Last player strictly below the prefix: must not outbid it.
    LastStrictLoser,
    /// Last player tied with the prefix max: unconstrained.
    LastTie,
}

impl ConstraintCase {
    pub fn roman(&self) -> &'static str {
        match self {
            ConstraintCase::WinnerBeforeLast => "i",
            ConstraintCase::LastStrictWinner => "ii",
            ConstraintCase::LoserBeforeLast => "iii",
            ConstraintCase::LastStrictLoser => "iv",
            ConstraintCase::LastTie => "tie",
        }
    }
}

impl fmt::Display for ConstraintCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

/// Allowed bids for one player given the announced prefix and own type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsistencyConstraint {
    pub part: ConstraintCase,
    pub prefix_max: Value,
    pub own: Value,
}

impl ConsistencyConstraint {
    /// Constraint for player `prefix.len() + 1` out of `n`.
    pub fn new(prefix: &[Value], own: Value, n: usize) -> Self {
        let i = prefix.len() + 1;
        let top = prefix_max(prefix, i);
        let part = match (i < n, own.cmp(&top)) {
            (true, std::cmp::Ordering::Greater) => ConstraintCase::WinnerBeforeLast,
            (true, _) => ConstraintCase::LoserBeforeLast,
            (false, std::cmp::Ordering::Greater) => ConstraintCase::LastStrictWinner,
            (false, std::cmp::Ordering::Less) => ConstraintCase::LastStrictLoser,
            (false, std::cmp::Ordering::Equal) => ConstraintCase::LastTie,
        };
        ConsistencyConstraint {
            part,
            prefix_max: top,
            own,
        }
    }

    pub fn allows(&self, bid: Value) -> bool {
        match self.part {
            ConstraintCase::WinnerBeforeLast => bid == self.own,
            ConstraintCase::LastStrictWinner => bid > self.prefix_max,
            ConstraintCase::LoserBeforeLast | ConstraintCase::LastStrictLoser => {
                bid <= self.prefix_max
            }
            ConstraintCase::LastTie => true,
        }
    }

    /// Allowed bids among the grid points, ascending.
    pub fn on_grid(&self, grid: &Grid) -> Vec<Value> {
        grid.points()
            .iter()
            .copied()
            .filter(|&b| self.allows(b))
            .collect()
    }
}

fn check_in_grid(theta: &[Value], grid: &Grid) -> Result<()> {
    match theta.iter().find(|&&t| !grid.contains(t)) {
        Some(t) => Err(Error::NotInGrid(t.to_string())),
        None => Ok(()),
    }
}

/// All announcement vectors reachable under optimal play, in lexicographic
/// order. Every entry of `theta` must be a grid point.
pub fn consistent_announcements(
    theta: &TypeVector,
    grid: &Grid,
) -> Result<Vec<AnnouncementVector>> {
    Ok(consistent_bid_vectors(theta.as_slice(), grid)?
        .into_iter()
        .map(|a| AnnouncementVector::new(a).expect("grid points are non-negative"))
        .collect())
}

pub(crate) fn consistent_bid_vectors(theta: &[Value], grid: &Grid) -> Result<Vec<Vec<Value>>> {
    check_in_grid(theta, grid)?;
    let n = theta.len();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    extend(theta, grid, &mut prefix, &mut out);
    Ok(out)
}

fn extend(theta: &[Value], grid: &Grid, prefix: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
    let n = theta.len();
    if prefix.len() == n {
        out.push(prefix.clone());
        return;
    }
    let c = ConsistencyConstraint::new(prefix, theta[prefix.len()], n);
    for bid in c.on_grid(grid) {
        prefix.push(bid);
        extend(theta, grid, prefix, out);
        prefix.pop();
    }
}

/// Replays the constraint position by position. Returns the first player
/// whose bid is not allowed, with the case that applied.
pub fn first_inconsistency(
    theta: &[Value],
    announced: &[Value],
) -> Option<(usize, ConstraintCase)> {
    let n = theta.len();
    (0..n).find_map(|idx| {
        let c = ConsistencyConstraint::new(&announced[..idx], theta[idx], n);
        (!c.allows(announced[idx])).then_some((idx + 1, c.part))
    })
}

/// Bids from `grid` that are optimal for player `prefix.len() + 1`, found by
/// search: a bid qualifies when, for every completion of the later players'
/// bids drawn from `probe`, no report in `probe` does strictly better.
///
/// `probe` should contain points strictly between grid neighbours, such as
/// [`Grid::refined`], so that undercut and overshoot completions exist.
pub fn optimal_bids_by_search(
    mechanism: &Mechanism,
    grid: &Grid,
    probe: &Grid,
    prefix: &[Value],
    own: Value,
) -> Vec<Value> {
    let n = mechanism.n();
    let i = prefix.len() + 1;
    let rest = n - i;
    let completions: Vec<Vec<Value>> = if rest == 0 {
        vec![Vec::new()]
    } else {
        probe.cube(rest).collect()
    };
    let utility = |bid: Value, completion: &[Value]| {
        let mut bids = prefix.to_vec();
        bids.push(bid);
        bids.extend_from_slice(completion);
        mechanism.utility(&bids, i, own).expect("valid bid vector")
    };
    let best: Vec<Value> = completions
        .iter()
        .map(|c| {
            probe
                .points()
                .iter()
                .chain(grid.points())
                .map(|&b| utility(b, c))
                .max()
                .expect("non-empty probe")
        })
        .collect();
    grid.points()
        .iter()
        .copied()
        .filter(|&b| {
            completions
                .iter()
                .zip(&best)
                .all(|(c, &top)| utility(b, c) >= top)
        })
        .collect()
}
