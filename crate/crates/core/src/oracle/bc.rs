//! Checks specific to the sequential Bailey-Cavallo auction.

use crate::auction::{argsmax, kth_highest};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mechanism::Mechanism;
use crate::strategy::{Strategy, StrategyProfile};
use crate::value::Value;

use super::consistency::{consistent_bid_vectors, ConsistencyConstraint};
use super::report::{VerificationReport, Witness};
use super::scan;
use super::vickrey::{strict_improvement, utility_split};

fn bc(n: usize) -> Result<Mechanism> {
    Mechanism::bailey_cavallo(n)
}

/// Aggregate redistribution and aggregate tax identities for every bid
/// vector in `grid^n`, plus feasibility.
pub fn check_bc_identities(grid: &Grid, n: usize) -> Result<VerificationReport> {
    let mech = bc(n)?;
    let nv = Value::integer(n as i128);
    let two = Value::from(2);
    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let bids = grid.cube_point(idx, n);
        let second = kth_highest(&bids, 2).expect("n ≥ 3");
        let third = kth_highest(&bids, 3).expect("n ≥ 3");
        let redistributed: Value = (1..=n)
            .map(|i| mech.redistribution(&bids, i).expect("valid"))
            .sum();
        let taxes = mech.taxes(&bids).expect("valid");
        let aggregate: Value = taxes.iter().sum();
        let ok = redistributed == (nv - two) / nv * second + two / nv * third
            && aggregate == -(two / nv) * (second - third)
            && aggregate <= Value::zero();
        let w = (!ok).then(|| {
            Witness::evaluate(&mech, &bids, vec![bids.clone()], "aggregate identity fails")
                .ok()
                .map(|w| w.with("redistributed", redistributed))
        });
        (1, w.flatten())
    });
    Ok(VerificationReport::sweep(
        "feasibility/bc-identities",
        k,
        violation,
    ))
}

/// Welfare identities of `bc-opt`: welfare equals the winner's type less
/// `(2/n)` times the gap between the second- and third-highest bids, is
/// never below truthful welfare, and is strictly above it somewhere.
pub fn check_bc_welfare(grid: &Grid, n: usize) -> Result<Vec<VerificationReport>> {
    let mech = bc(n)?;
    let profile = StrategyProfile::bc_opt(n)?;
    let gap = |xs: &[Value]| {
        let two = Value::from(2);
        two / Value::integer(xs.len() as i128)
            * (kth_highest(xs, 2).expect("n ≥ 3") - kth_highest(xs, 3).expect("n ≥ 3"))
    };
    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let ours = profile
            .continue_from(&theta, Vec::new())
            .expect("valid profile");
        let sw = mech.run(&ours, &theta).expect("valid").social_welfare;
        let truth = mech.run(&theta, &theta).expect("valid").social_welfare;
        let top = theta[argsmax(&theta).expect("n ≥ 3") - 1];
        let ok = sw == top - gap(&ours) && truth == top - gap(&theta) && sw >= truth;
        let w = (!ok).then(|| {
            Witness::evaluate(
                &mech,
                &theta,
                vec![ours, theta.clone()],
                "closed-form welfare identity fails",
            )
            .ok()
        });
        (1, w.flatten())
    });
    let identity = VerificationReport::sweep("sw-maximal-bc/closed-form", k, violation);
    let strict = strict_improvement(&mech, &profile, grid, n, "sw-maximal-bc/strict")?;
    Ok(vec![identity, strict])
}

/// Among consistent announcements, `bc-opt` bids are entrywise maximal for
/// players `1..n-1`.
pub fn check_bc_opt_dominance(grid: &Grid, n: usize) -> Result<VerificationReport> {
    let mech = bc(n)?;
    let profile = StrategyProfile::bc_opt(n)?;
    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let z = profile
            .continue_from(&theta, Vec::new())
            .expect("valid profile");
        let members = consistent_bid_vectors(&theta, grid).expect("grid point");
        for a in &members {
            if let Some(i) = (1..n).find(|&i| a[i - 1] > z[i - 1]) {
                let note = format!("player {i} bids above bc-opt in a consistent announcement");
                return (
                    members.len() as u64,
                    Witness::evaluate(&mech, &theta, vec![z, a.clone()], note).ok(),
                );
            }
        }
        (members.len() as u64, None)
    });
    Ok(VerificationReport::sweep(
        "claim-thirdhighest",
        k,
        violation,
    ))
}

/// Two optimal profiles that differ only in player 2's behaviour when
/// losing: everybody shades `eps` below the previous bid, versus player 2
/// matching the previous bid instead. Records both announcements.
pub fn bc_epsilon_instance(theta: &[Value], eps: Value) -> Result<Witness> {
    let n = theta.len();
    let mech = bc(n)?;
    let shade = StrategyProfile::uniform(n, |i| Strategy::below_previous(i, eps))?;
    let matched = shade.with(Strategy::match_previous(2))?;
    let a = shade.continue_from(theta, Vec::new())?;
    let b = matched.continue_from(theta, Vec::new())?;
    let r2 = |bids: &[Value]| mech.redistribution(bids, 2);
    let (ra, rb) = (r2(&a)?, r2(&b)?);
    Ok(Witness::evaluate(
        &mech,
        theta,
        vec![a, b],
        "player 2 shades below versus matches the previous bid",
    )?
    .with("eps", eps)
    .with("a0.r2", ra)
    .with("a1.r2", rb))
}

/// Optimal strategies need not give equal utilities: reproduces the
/// shade-versus-match instance on the grid's top values and searches the
/// grid for any pair of optimal announcements that disagree.
pub fn check_bc_not_utility_equal(
    grid: &Grid,
    n: usize,
    eps: Value,
) -> Result<Vec<VerificationReport>> {
    let mech = bc(n)?;
    let top = grid.max();
    let theta: Vec<Value> = (0..n)
        .map(|k| (top - eps * Value::integer(k as i128)).max(Value::zero()))
        .collect();
    let w = bc_epsilon_instance(&theta, eps)?;
    let differs = w.value("a0.u2") != w.value("a1.u2");
    let consistent = theta.iter().all(|&t| grid.contains(t))
        && consistent_bid_vectors(&theta, grid)
            .is_ok_and(|c| w.announcements.iter().all(|a| c.contains(a)));
    let scaled = VerificationReport::new(
        "bc-not-utility-equal/shade-vs-match",
        1,
        differs && consistent,
        Some(w),
    );

    let (k, found) = scan(grid.cube_size(n), |idx| {
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
    let search = VerificationReport::expect_witness("bc-not-utility-equal/search", k, found);
    Ok(vec![scaled, search])
}

/// Later true types and an alternative optimal bid under which player `i`
/// bidding `b` earns strictly less welfare. Later players report truthfully.
pub fn better_completion(
    mech: &Mechanism,
    grid: &Grid,
    prefix: &[Value],
    own: Value,
    b: Value,
) -> Option<Witness> {
    let n = mech.n();
    let i = prefix.len() + 1;
    let allowed = ConsistencyConstraint::new(prefix, own, n).on_grid(grid);
    let completions: Vec<Vec<Value>> = if i == n {
        vec![Vec::new()]
    } else {
        grid.cube(n - i).collect()
    };
    for c in completions {
        let mut theta = prefix.to_vec();
        theta.push(own);
        theta.extend_from_slice(&c);
        let play = |bid: Value| {
            let mut bids = theta.clone();
            bids[i - 1] = bid;
            bids
        };
        let base = play(b);
        let sw = mech.run(&base, &theta).expect("valid").social_welfare;
        for &alt in &allowed {
            let other = play(alt);
            if mech.run(&other, &theta).expect("valid").social_welfare > sw {
                let note = format!("player {i}: optimal bid {alt} beats {b} on welfare");
                return Witness::evaluate(mech, &theta, vec![base, other], note)
                    .ok()
                    .map(|w| w.with("bid", b).with("better_bid", alt));
            }
        }
    }
    None
}

/// No optimal bid of a middle player is welfare-best against every
/// completion, while the first and last players always have one.
///
/// For `2 ≤ i ≤ n-1` the check covers prefixes of distinct types where
/// player `i`'s type is the second highest so far, split into bidding the
/// own type (case 1) and any other optimal bid (case 2). For `i ∈ {1, n}`
/// it covers every prefix and type in the grid.
pub fn check_bc_no_socially_optimal(
    grid: &Grid,
    n: usize,
    i: usize,
) -> Result<Vec<VerificationReport>> {
    let mech = bc(n)?;
    if i == 0 || i > n {
        return Err(Error::PlayerOutOfRange { player: i, n });
    }
    if i == 1 || i == n {
        let (k, violation) = scan(grid.cube_size(i), |idx| {
            let point = grid.cube_point(idx, i);
            let (prefix, own) = (&point[..i - 1], point[i - 1]);
            let allowed = ConsistencyConstraint::new(prefix, own, n).on_grid(grid);
            let mut first = None;
            for &b in &allowed {
                match better_completion(&mech, grid, prefix, own, b) {
                    None => return (allowed.len() as u64, None),
                    Some(w) => first = first.or(Some(w)),
                }
            }
            (allowed.len() as u64, first)
        });
        return Ok(vec![VerificationReport::sweep(
            format!("bc-no-socially-optimal/player{i}"),
            k,
            violation,
        )]);
    }
    let family: Vec<Vec<Value>> = grid
        .cube(i)
        .filter(|p| {
            let (prefix, own) = (&p[..i - 1], p[i - 1]);
            let mut sorted = prefix.to_vec();
            sorted.sort();
            sorted.dedup();
            let top = kth_highest(p, 1).expect("non-empty");
            sorted.len() == prefix.len()
                && own < top
                && prefix.iter().filter(|&&x| x > own).count() == 1
        })
        .collect();
    let mut reports = Vec::new();
    for case in [1, 2] {
        let mut count = 0;
        let mut first = None;
        let mut unbeaten = None;
        for p in &family {
            let (prefix, own) = (&p[..i - 1], p[i - 1]);
            for b in ConsistencyConstraint::new(prefix, own, n).on_grid(grid) {
                if (b == own) != (case == 1) {
                    continue;
                }
                count += 1;
                match better_completion(&mech, grid, prefix, own, b) {
                    Some(w) => first = first.or(Some(w)),
                    None if unbeaten.is_none() => {
                        let mut theta = p.clone();
                        theta.resize(n, Value::zero());
                        let mut bids = theta.clone();
                        bids[i - 1] = b;
                        unbeaten = Witness::evaluate(
                            &mech,
                            &theta,
                            vec![bids],
                            format!("bid {b} is never beaten"),
                        )
                        .ok();
                    }
                    None => {}
                }
            }
        }
        let passed = count > 0 && unbeaten.is_none();
        reports.push(VerificationReport::new(
            format!("bc-no-socially-optimal/player{i}/case{case}"),
            count,
            passed,
            unbeaten.or(first),
        ));
    }
    Ok(reports)
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

    #[test]
    fn epsilon_instance_reproduces_redistributions() {
        let w = bc_epsilon_instance(&vals(&[10, 9, 8]), Value::from(1)).unwrap();
        assert_eq!(w.announcements, vec![vals(&[10, 9, 8]), vals(&[10, 10, 9])]);
        assert_eq!(w.value("a0.r2"), Some(frac(8, 3)));
        assert_eq!(w.value("a1.r2"), Some(Value::from(3)));

        let w = bc_epsilon_instance(&vals(&[4, 3, 2]), Value::from(1)).unwrap();
        assert_eq!(w.value("a0.r2"), Some(frac(2, 3)));
        assert_eq!(w.value("a1.r2"), Some(Value::from(1)));
        assert!(w.recheck().unwrap());
    }

    #[test]
    fn all_zero_types_give_equal_utilities() {
        let g = Grid::integers(4);
        let m = bc(3).unwrap();
        let theta = vals(&[0, 0, 0]);
        let members = consistent_bid_vectors(&theta, &g).unwrap();
        assert!(utility_split(&m, &theta, &members, true).1.is_none());
    }

    #[test]
    fn proof_cases_on_grid() {
        let m = bc(3).unwrap();
        let sw =
            |bids: &[i64], theta: &[i64]| m.run(&vals(bids), &vals(theta)).unwrap().social_welfare;
        // case 1: truthful middle bid loses welfare once player 3 sits between
        assert_eq!(
            m.taxes(&vals(&[4, 2, 3])).unwrap().iter().sum::<Value>(),
            frac(-2, 3)
        );
        assert_eq!(
            m.taxes(&vals(&[4, 3, 3])).unwrap().iter().sum::<Value>(),
            Value::zero()
        );
        assert!(sw(&[4, 3, 3], &[4, 2, 3]) > sw(&[4, 2, 3], &[4, 2, 3]));
        // case 2: overbidding loses welfare once player 3 matches the true type
        assert_ne!(
            m.taxes(&vals(&[4, 4, 2])).unwrap().iter().sum::<Value>(),
            Value::zero()
        );
        assert_eq!(
            m.taxes(&vals(&[4, 2, 2])).unwrap().iter().sum::<Value>(),
            Value::zero()
        );
    }

    #[test]
    fn middle_player_has_no_socially_optimal_bid() {
        let g = Grid::integers(4);
        let reports = check_bc_no_socially_optimal(&g, 3, 2).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(
            reports.iter().all(|r| r.passed && r.witness.is_some()),
            "{reports:#?}"
        );
        for i in [1, 3] {
            let r = check_bc_no_socially_optimal(&g, 3, i).unwrap();
            assert!(r[0].passed && r[0].witness.is_none(), "{r:#?}");
        }
    }
}
