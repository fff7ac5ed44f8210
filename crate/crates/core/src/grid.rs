//! Finite discretisations of the type space.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::Value;

/// Sorted, distinct, non-negative grid points.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Value>", into = "Vec<Value>")]
pub struct Grid {
    points: Vec<Value>,
}

impl Grid {
    pub fn new(mut points: Vec<Value>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("no points".into()));
        }
        for p in &points {
            p.non_negative()?;
        }
        points.sort();
        points.dedup();
        Ok(Grid { points })
    }

    /// `lo, lo + step, ...` up to and including `hi` when it is hit exactly.
    pub fn range(lo: Value, hi: Value, step: Value) -> Result<Self> {
        if step <= Value::zero() {
            return Err(Error::InvalidGrid(format!("step {step} is not positive")));
        }
        if hi < lo {
            return Err(Error::InvalidGrid(format!("{lo}..{hi} is empty")));
        }
        let mut points = Vec::new();
        let mut x = lo;
        while x <= hi {
            points.push(x);
            x += step;
            if points.len() > 10_000 {
                return Err(Error::InvalidGrid("more than 10000 points".into()));
            }
        }
        Grid::new(points)
    }

    /// `{0, 1, ..., hi}`.
    pub fn integers(hi: i64) -> Self {
        Grid::range(Value::zero(), Value::from(hi), Value::from(1)).expect("non-negative range")
    }

    pub fn points(&self) -> &[Value] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max(&self) -> Value {
        *self.points.last().expect("grid is non-empty")
    }

    pub fn contains(&self, v: Value) -> bool {
        self.points.binary_search(&v).is_ok()
    }

    pub fn at_most(&self, bound: Value) -> impl Iterator<Item = Value> + '_ {
        self.points.iter().copied().filter(move |&p| p <= bound)
    }

    pub fn above(&self, bound: Value) -> impl Iterator<Item = Value> + '_ {
        self.points.iter().copied().filter(move |&p| p > bound)
    }

    /// Number of vectors in `grid^n`.
    pub fn cube_size(&self, n: usize) -> usize {
        self.len()
            .checked_pow(n as u32)
            .expect("grid^n fits in usize")
    }

    /// The `index`-th vector of `grid^n` in lexicographic order, player 1
    /// being the most significant coordinate.
    pub fn cube_point(&self, mut index: usize, n: usize) -> Vec<Value> {
        let base = self.len();
        let mut out = vec![Value::zero(); n];
        for slot in out.iter_mut().rev() {
            *slot = self.points[index % base];
            index /= base;
        }
        out
    }

    pub fn cube(&self, n: usize) -> impl Iterator<Item = Vec<Value>> + '_ {
        (0..self.cube_size(n)).map(move |idx| self.cube_point(idx, n))
    }

    /// This grid plus every midpoint between neighbours plus one point above
    /// the maximum. Gives strict in-between values for grid points.
    pub fn refined(&self) -> Grid {
        let mut points = self.points.clone();
        for pair in self.points.windows(2) {
            points.push((pair[0] + pair[1]) / Value::from(2));
        }
        let gap = match self.points.as_slice() {
            [.., a, b] => *b - *a,
            _ => Value::from(1),
        };
        points.push(self.max() + gap);
        Grid::new(points).expect("refinement of a valid grid")
    }
}

impl TryFrom<Vec<Value>> for Grid {
    type Error = Error;
    fn try_from(points: Vec<Value>) -> Result<Self> {
        Grid::new(points)
    }
}

impl From<Grid> for Vec<Value> {
    fn from(g: Grid) -> Vec<Value> {
        g.points
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.points).finish()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(Value::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `lo..hi`, `lo..hi:step` or an explicit list `a,b,c`.
impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Grid> {
        let s = s.trim();
        if let Some((lo, rest)) = s.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step.parse()?),
                None => (rest, Value::from(1)),
            };
            Grid::range(lo.parse()?, hi.parse()?, step)
        } else {
            let points = s
                .split(',')
                .map(|p| p.parse())
                .collect::<Result<Vec<Value>>>()?;
            Grid::new(points)
        }
    }
}
