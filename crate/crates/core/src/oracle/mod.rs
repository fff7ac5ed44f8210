//! Exhaustive checks over finite type grids.
//!
//! Every check returns a [`VerificationReport`]; failed sweeps and reproduced
//! counterexamples carry a [`Witness`] that can be re-simulated. Sweeps walk
//! `grid^n` in lexicographic order and report the first witness in that
//! order, so results do not depend on the number of worker threads.

pub mod bc;
pub mod consistency;
pub mod groves;
pub mod report;
pub mod suites;
pub mod vickrey;

pub use consistency::{
    consistent_announcements, first_inconsistency, optimal_bids_by_search, ConsistencyConstraint,
    ConstraintCase,
};
pub use report::{VerificationReport, Witness};
pub use suites::{run_suite, Suite, SuiteConfig};

use crate::mechanism::Mechanism;
use crate::sweep;
use crate::value::Value;

/// Runs `probe` on every cube index; sums the instance counts and keeps the
/// witness with the smallest index.
pub(crate) fn scan<T: Send>(
    count: usize,
    probe: impl Fn(usize) -> (u64, Option<T>) + Sync + Send,
) -> (u64, Option<T>) {
    let mut total = 0;
    let mut first = None;
    for (k, w) in sweep::map_all(count, probe) {
        total += k;
        if first.is_none() {
            first = w;
        }
    }
    (total, first)
}

pub(crate) fn utility(mechanism: &Mechanism, bids: &[Value], i: usize, theta: &[Value]) -> Value {
    mechanism
        .utility(bids, i, theta[i - 1])
        .expect("valid bid vector")
}
