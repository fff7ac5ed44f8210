//! Checks specific to the sequential Vickrey auction.

use crate::auction::{argsmax, kth_highest};
use crate::error::Result;
use crate::grid::Grid;
use crate::mechanism::Mechanism;
use crate::strategy::{Strategy, StrategyProfile};
use crate::value::Value;

use super::consistency::{consistent_bid_vectors, ConsistencyConstraint};
use super::report::{VerificationReport, Witness};
use super::{scan, utility};

/// Welfare of the Vickrey auction when everyone plays `vickrey-opt`:
/// the winner's type minus the highest earlier type, or the full type when
/// player 1 wins.
pub fn vickrey_opt_welfare(theta: &[Value]) -> Value {
    let w = argsmax(theta).expect("n ≥ 2");
    let earlier = theta[..w - 1].iter().copied().max();
    theta[w - 1] - earlier.unwrap_or(Value::zero())
}

/// First pair of consistent announcements that agree before player `i`
/// and give player `i` different utilities. With `distinct_own` the pair
/// must also differ in player `i`'s own bid; only such pairs arise from two
/// strategies of player `i` against the same strategies of the others.
pub(crate) fn utility_split(
    mech: &Mechanism,
    theta: &[Value],
    members: &[Vec<Value>],
    distinct_own: bool,
) -> (u64, Option<(usize, usize, usize)>) {
    let n = theta.len();
    let utils: Vec<Vec<Value>> = members
        .iter()
        .map(|a| mech.run(a, theta).expect("valid").utilities)
        .collect();
    let mut count = 0;
    for i in 1..=n {
        for (x, a) in members.iter().enumerate() {
            for (y, b) in members.iter().enumerate().skip(x + 1) {
                if a[..i - 1] != b[..i - 1] || (distinct_own && a[i - 1] == b[i - 1]) {
                    continue;
                }
                count += 1;
                if utils[x][i - 1] != utils[y][i - 1] {
                    return (count, Some((i, x, y)));
                }
            }
        }
    }
    (count, None)
}

/// Optimal strategies yield equal utilities: for every `θ` and player `i`,
/// consistent announcements that share the prefix before `i` and differ in
/// `i`'s own bid give `i` the same utility. Also checks that a last player
/// tied with the earlier maximum always ends with utility 0.
///
/// The header records how many pairs break the stronger statement that
/// ignores player `i`'s own bid.
pub fn check_vickrey_utility_equality(grid: &Grid, n: usize) -> Result<Vec<VerificationReport>> {
    let mech = Mechanism::vickrey(n)?;
    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let members = consistent_bid_vectors(&theta, grid).expect("grid point");
        let (count, hit) = utility_split(&mech, &theta, &members, true);
        let w = hit.and_then(|(i, x, y)| {
            let note = format!("player {i} gets different utilities from two optimal bids");
            Witness::evaluate(
                &mech,
                &theta,
                vec![members[x].clone(), members[y].clone()],
                note,
            )
            .ok()
        });
        (count, w)
    });
    let (loose, _) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let members = consistent_bid_vectors(&theta, grid).expect("grid point");
        let (_, hit) = utility_split(&mech, &theta, &members, false);
        (u64::from(hit.is_some()), None::<()>)
    });
    let header = format!(
        "pairs share the prefix before i and differ at i; {loose} type vectors break the variant that ignores i's own bid"
    );
    let equality = VerificationReport::sweep("vickrey-equality/optimal-pairs", k, violation)
        .with_header(header);

    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let top = theta[..n - 1].iter().copied().max().expect("n ≥ 2");
        if theta[n - 1] != top {
            return (0, None);
        }
        let members = consistent_bid_vectors(&theta, grid).expect("grid point");
        for a in &members {
            if utility(&mech, a, n, &theta) != Value::zero() {
                let note = "tied last player ends with non-zero utility".to_string();
                return (
                    members.len() as u64,
                    Witness::evaluate(&mech, &theta, vec![a.clone()], note).ok(),
                );
            }
        }
        (members.len() as u64, None)
    });
    let tie = VerificationReport::sweep("vickrey-equality/tied-last-player", k, violation);
    Ok(vec![equality, tie])
}

/// Among optimal bids for player `i` (others truthful), the `vickrey-opt`
/// bid leaves every other player at least as well off.
pub fn check_socially_maximal_vickrey(grid: &Grid, n: usize) -> Result<VerificationReport> {
    let mech = Mechanism::vickrey(n)?;
    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let mut count = 0;
        for i in 1..=n {
            let own = theta[i - 1];
            let chosen = Strategy::vickrey_opt(i)
                .bid(&theta[..i - 1], own)
                .expect("valid");
            let mut ours = theta.clone();
            ours[i - 1] = chosen;
            let ours_out = mech.run(&ours, &theta).expect("valid");
            for b in ConsistencyConstraint::new(&theta[..i - 1], own, n).on_grid(grid) {
                let mut alt = theta.clone();
                alt[i - 1] = b;
                let alt_out = mech.run(&alt, &theta).expect("valid");
                for j in (1..=n).filter(|&j| j != i) {
                    count += 1;
                    if alt_out.utility(j) > ours_out.utility(j) {
                        let note = format!(
                            "player {i}'s optimal bid {b} helps player {j} more than vickrey-opt"
                        );
                        return (
                            count,
                            Witness::evaluate(&mech, &theta, vec![ours, alt], note).ok(),
                        );
                    }
                }
            }
        }
        (count, None)
    });
    Ok(VerificationReport::sweep(
        "vickrey-socially-maximal",
        k,
        violation,
    ))
}

/// The designated profile maximises welfare among all consistent
/// announcements, and is itself consistent.
pub fn check_sw_maximal(
    mechanism: &Mechanism,
    profile: &StrategyProfile,
    grid: &Grid,
    n: usize,
) -> Result<VerificationReport> {
    let mech = mechanism.with_players(n)?;
    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let ours = profile
            .continue_from(&theta, Vec::new())
            .expect("valid profile");
        let sw = mech.run(&ours, &theta).expect("valid").social_welfare;
        let members = consistent_bid_vectors(&theta, grid).expect("grid point");
        if !members.contains(&ours) {
            let note = "designated profile is not consistent-optimal".to_string();
            return (1, Witness::evaluate(&mech, &theta, vec![ours], note).ok());
        }
        for (x, a) in members.iter().enumerate() {
            if mech.run(a, &theta).expect("valid").social_welfare > sw {
                let note = "consistent announcement has higher welfare".to_string();
                return (
                    x as u64 + 1,
                    Witness::evaluate(&mech, &theta, vec![ours, a.clone()], note).ok(),
                );
            }
        }
        (members.len() as u64, None)
    });
    Ok(VerificationReport::sweep(
        format!("sw-maximal/{}/{}", mech.selector(), profile.label()),
        k,
        violation,
    ))
}

/// Welfare identities of `vickrey-opt`: the closed form holds and is never
/// below the truthful welfare. The second report is the first grid point
/// where the improvement is strict.
pub fn check_vickrey_welfare(grid: &Grid, n: usize) -> Result<Vec<VerificationReport>> {
    let mech = Mechanism::vickrey(n)?;
    let profile = StrategyProfile::vickrey_opt(n)?;
    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let ours = profile
            .continue_from(&theta, Vec::new())
            .expect("valid profile");
        let sw = mech.run(&ours, &theta).expect("valid").social_welfare;
        let truth = mech.run(&theta, &theta).expect("valid").social_welfare;
        let second = kth_highest(&theta, 2).expect("n ≥ 2");
        let w = argsmax(&theta).expect("n ≥ 2");
        let expected_truth = theta[w - 1] - second;
        if sw != vickrey_opt_welfare(&theta) || truth != expected_truth || sw < truth {
            let note = "closed-form welfare identity fails".to_string();
            return (
                1,
                Witness::evaluate(&mech, &theta, vec![ours, theta.clone()], note).ok(),
            );
        }
        (1, None)
    });
    let identity = VerificationReport::sweep("sw-maximal-vickrey/closed-form", k, violation);
    let strict = strict_improvement(&mech, &profile, grid, n, "sw-maximal-vickrey/strict")?;
    Ok(vec![identity, strict])
}

/// First `θ ∈ grid^n` where `profile` earns strictly more welfare than
/// truthful reporting.
pub(crate) fn strict_improvement(
    mech: &Mechanism,
    profile: &StrategyProfile,
    grid: &Grid,
    n: usize,
    suite: &str,
) -> Result<VerificationReport> {
    let (k, found) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let ours = profile
            .continue_from(&theta, Vec::new())
            .expect("valid profile");
        let sw = mech.run(&ours, &theta).expect("valid").social_welfare;
        let truth = mech.run(&theta, &theta).expect("valid").social_welfare;
        let w = (sw > truth).then(|| {
            Witness::evaluate(
                mech,
                &theta,
                vec![ours, theta.clone()],
                "strictly above truthful welfare",
            )
            .ok()
        });
        (1, w.flatten())
    });
    Ok(VerificationReport::expect_witness(suite, k, found))
}

/// Welfare under the designated profile and under truth at one instance.
pub fn welfare_comparison(
    mechanism: &Mechanism,
    profile: &StrategyProfile,
    theta: &[Value],
) -> Result<Witness> {
    let ours = profile.continue_from(theta, Vec::new())?;
    Witness::evaluate(
        mechanism,
        theta,
        vec![ours, theta.to_vec()],
        format!("{} vs truth", profile.label()),
    )
}
