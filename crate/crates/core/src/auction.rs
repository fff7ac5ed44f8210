//! Order statistics, the allocation rule and utility accounting.
//!
//! Players are numbered from 1. Slices are indexed from 0, so player `i`
//! lives at `values[i - 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::Value;

/// Prefix maximum of the empty prefix.
pub const EMPTY_PREFIX_MAX: Value = Value::integer(-1);

/// Lowest-indexed maximiser, 1-based. Ties go to the earliest player.
pub fn argsmax(values: &[Value]) -> Result<usize> {
    let (first, rest) = values.split_first().ok_or(Error::EmptyBids)?;
    let mut best = (0, *first);
    for (idx, &v) in rest.iter().enumerate() {
        if v > best.1 {
            best = (idx + 1, v);
        }
    }
    Ok(best.0 + 1)
}

/// The `k`-th largest entry counting multiplicity (`k` is 1-based).
pub fn kth_highest(values: &[Value], k: usize) -> Result<Value> {
    if k == 0 || k > values.len() {
        return Err(Error::RankOutOfRange {
            k,
            len: values.len(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sorted[k - 1])
}

/// `kth_highest` of `values` with player `i` removed.
pub fn kth_highest_excluding(values: &[Value], i: usize, k: usize) -> Result<Value> {
    check_player(i, values.len())?;
    let others: Vec<Value> = values
        .iter()
        .enumerate()
        .filter(|&(idx, _)| idx + 1 != i)
        .map(|(_, &v)| v)
        .collect();
    kth_highest(&others, k)
}

/// Maximum over players `1..i`, or `-1` when `i == 1`.
///
/// `i` may be one past the end, which gives the maximum of the whole slice.
pub fn prefix_max(values: &[Value], i: usize) -> Value {
    values
        .iter()
        .take(i.saturating_sub(1))
        .copied()
        .max()
        .unwrap_or(EMPTY_PREFIX_MAX)
}

/// `θ_i + t_i` for the winner, `t_i` for everybody else.
pub fn final_utility(winner: usize, taxes: &[Value], i: usize, own_type: Value) -> Result<Value> {
    check_player(i, taxes.len())?;
    let tax = taxes[i - 1];
    Ok(if winner == i { own_type + tax } else { tax })
}

pub(crate) fn check_player(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::PlayerOutOfRange { player: i, n })
    } else {
        Ok(())
    }
}

fn check_bid_vector(values: &[Value]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::TooFewPlayers {
            min: 2,
            n: values.len(),
        });
    }
    for v in values {
        v.non_negative()?;
    }
    Ok(())
}

/// The types players actually hold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Value>", into = "Vec<Value>")]
pub struct TypeVector(Vec<Value>);

impl TypeVector {
    pub fn new(values: Vec<Value>) -> Result<Self> {
        check_bid_vector(&values)?;
        Ok(TypeVector(values))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Type of player `i` (1-based). Panics when out of range.
    pub fn get(&self, i: usize) -> Value {
        self.0[i - 1]
    }

    pub fn as_slice(&self) -> &[Value] {
        &self.0
    }
}

impl TryFrom<Vec<Value>> for TypeVector {
    type Error = Error;
    fn try_from(values: Vec<Value>) -> Result<Self> {
        TypeVector::new(values)
    }
}

impl From<TypeVector> for Vec<Value> {
    fn from(t: TypeVector) -> Vec<Value> {
        t.0
    }
}

/// Bids as submitted, one per player in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Value>", into = "Vec<Value>")]
pub struct AnnouncementVector(Vec<Value>);

impl AnnouncementVector {
    pub fn new(values: Vec<Value>) -> Result<Self> {
        check_bid_vector(&values)?;
        Ok(AnnouncementVector(values))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Value {
        self.0[i - 1]
    }

    pub fn as_slice(&self) -> &[Value] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Value> {
        self.0
    }
}

impl TryFrom<Vec<Value>> for AnnouncementVector {
    type Error = Error;
    fn try_from(values: Vec<Value>) -> Result<Self> {
        AnnouncementVector::new(values)
    }
}

impl From<AnnouncementVector> for Vec<Value> {
    fn from(a: AnnouncementVector) -> Vec<Value> {
        a.0
    }
}

impl From<TypeVector> for AnnouncementVector {
    fn from(t: TypeVector) -> Self {
        AnnouncementVector(t.0)
    }
}

/// Result of running a mechanism on a bid vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub winner: usize,
    pub taxes: Vec<Value>,
    pub utilities: Vec<Value>,
    pub social_welfare: Value,
}

impl Outcome {
    pub fn aggregate_tax(&self) -> Value {
        self.taxes.iter().sum()
    }

    /// Utility of player `i` (1-based).
    pub fn utility(&self, i: usize) -> Value {
        self.utilities[i - 1]
    }

    pub fn tax(&self, i: usize) -> Value {
        self.taxes[i - 1]
    }
}
