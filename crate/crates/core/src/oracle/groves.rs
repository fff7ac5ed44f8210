//! Checks that hold for every sequential Groves auction.

use crate::auction::{argsmax, prefix_max};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::mechanism::{without, Mechanism};
use crate::strategy::{Strategy, StrategyProfile};
use crate::value::Value;

use super::consistency::{
    consistent_bid_vectors, first_inconsistency, optimal_bids_by_search, ConsistencyConstraint,
    ConstraintCase,
};
use super::report::{VerificationReport, Witness};
use super::{scan, utility};

fn max_of(values: &[Value]) -> Value {
    values
        .iter()
        .copied()
        .max()
        .unwrap_or(crate::auction::EMPTY_PREFIX_MAX)
}

fn replace(values: &[Value], i: usize, v: Value) -> Vec<Value> {
    let mut out = values.to_vec();
    out[i - 1] = v;
    out
}

/// Exhaustive best-response check of one player's strategy when the others
/// report truthfully: for every `θ ∈ grid^n` no misreport from `grid` does
/// better than the strategy's bid.
pub fn check_pointwise_optimal(
    strategy: &Strategy,
    mechanism: &Mechanism,
    grid: &Grid,
    n: usize,
) -> Result<VerificationReport> {
    let mech = mechanism.with_players(n)?;
    let i = strategy.player();
    if i == 0 || i > n {
        return Err(Error::PlayerOutOfRange { player: i, n });
    }
    let suite = format!(
        "pointwise-optimal/{}/player{}/{}",
        mech.selector(),
        i,
        strategy.label()
    );
    let (instances, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let bid = match strategy.bid(&theta[..i - 1], theta[i - 1]) {
            Ok(b) => b,
            Err(_) => return (0, None),
        };
        let chosen = replace(&theta, i, bid);
        let got = utility(&mech, &chosen, i, &theta);
        for &dev in grid.points() {
            let alt = replace(&theta, i, dev);
            if utility(&mech, &alt, i, &theta) > got {
                let w = Witness::evaluate(
                    &mech,
                    &theta,
                    vec![chosen, alt],
                    format!("player {i}: misreport {dev} beats the strategy's bid {bid}"),
                );
                return (grid.len() as u64, w.ok());
            }
        }
        (grid.len() as u64, None)
    });
    Ok(VerificationReport::sweep(suite, instances, violation))
}

/// Strict payoff gaps for a clear winner and a clear loser over
/// `grid^n` with misreports from `grid`. Returns one report per part.
pub fn check_clear_winner_loser(
    mechanism: &Mechanism,
    grid: &Grid,
    n: usize,
) -> Result<Vec<VerificationReport>> {
    let mech = mechanism.with_players(n)?;
    let part = |which: u8| {
        scan(grid.cube_size(n), |idx| {
            let theta = grid.cube_point(idx, n);
            let mut count = 0;
            for i in 1..=n {
                let rival = max_of(&without(&theta, i));
                let own = theta[i - 1];
                for &dev in grid.points() {
                    let alt = replace(&theta, i, dev);
                    let (applies, holds) = if which == 1 {
                        let applies = own > rival && argsmax(&alt).expect("n ≥ 2") != i;
                        let lhs = own + mech.taxes(&theta).expect("valid")[i - 1];
                        let rhs = mech.taxes(&alt).expect("valid")[i - 1];
                        (applies, lhs > rhs)
                    } else {
                        let applies = dev > rival && rival > own;
                        let lhs = mech.taxes(&theta).expect("valid")[i - 1];
                        let rhs = own + mech.taxes(&alt).expect("valid")[i - 1];
                        (applies, lhs > rhs)
                    };
                    if !applies {
                        continue;
                    }
                    count += 1;
                    if !holds {
                        let w = Witness::evaluate(
                            &mech,
                            &theta,
                            vec![theta.clone(), alt],
                            format!("player {i}, misreport {dev}"),
                        );
                        return (count, w.ok());
                    }
                }
            }
            (count, None)
        })
    };
    let (n1, w1) = part(1);
    let (n2, w2) = part(2);
    Ok(vec![
        VerificationReport::sweep(format!("lemma1/clear-winner/{}", mech.selector()), n1, w1),
        VerificationReport::sweep(format!("lemma1/clear-loser/{}", mech.selector()), n2, w2),
    ])
}

/// Brute-force optimal bid sets agree with the pointwise constraint for
/// every player, announced prefix in `grid^{i-1}` and own type in `grid`.
///
/// Optimality is judged against later bids and misreports drawn from the
/// refined grid, which supplies values strictly between grid points.
pub fn check_optimal_bid_characterisation(
    mechanism: &Mechanism,
    grid: &Grid,
    n: usize,
) -> Result<VerificationReport> {
    let mech = mechanism.with_players(n)?;
    let probe = grid.refined();
    let mut instances = 0;
    let mut violation = None;
    for i in 1..=n {
        let count = grid.cube_size(i);
        let (k, w) = scan(count, |idx| {
            let point = grid.cube_point(idx, i);
            let (prefix, own) = (&point[..i - 1], point[i - 1]);
            let searched = optimal_bids_by_search(&mech, grid, &probe, prefix, own);
            let expected = ConsistencyConstraint::new(prefix, own, n).on_grid(grid);
            if searched == expected {
                return (1, None);
            }
            let odd = searched
                .iter()
                .chain(&expected)
                .copied()
                .find(|b| searched.contains(b) != expected.contains(b))
                .expect("sets differ");
            let mut theta = point.clone();
            theta.resize(n, Value::zero());
            let mut bids = prefix.to_vec();
            bids.push(odd);
            bids.resize(n, Value::zero());
            let note = format!(
                "player {i}: search says optimal bids {searched:?}, constraint says {expected:?}"
            );
            (1, Witness::evaluate(&mech, &theta, vec![bids], note).ok())
        });
        instances += k;
        if violation.is_none() {
            violation = w;
        }
    }
    Ok(VerificationReport::sweep(
        format!("lemma4/characterisation/{}", mech.selector()),
        instances,
        violation,
    )
    .with_header("later bids and misreports range over the grid refined with midpoints"))
}

/// First type vector (others truthful) where `strategy` bids outside the
/// pointwise constraint, with the case it broke.
pub fn audit_strategy(
    strategy: &Strategy,
    grid: &Grid,
    n: usize,
) -> Option<(ConstraintCase, Vec<Value>, Value)> {
    let i = strategy.player();
    grid.cube(n).find_map(|theta| {
        let bid = strategy.bid(&theta[..i - 1], theta[i - 1]).ok()?;
        let c = ConsistencyConstraint::new(&theta[..i - 1], theta[i - 1], n);
        (!c.allows(bid)).then_some((c.part, theta, bid))
    })
}

/// Deliberately broken strategies, one per constrained case, each paired
/// with the case it violates.
pub fn constraint_fixtures(n: usize) -> Vec<(ConstraintCase, Strategy)> {
    let one = Value::from(1);
    let mut out = vec![
        (
            ConstraintCase::WinnerBeforeLast,
            Strategy::custom(1, "shade-when-winning", true, |_, own| own / Value::from(2)),
        ),
        (
            ConstraintCase::LastStrictWinner,
            Strategy::custom(n, "concede-when-winning", false, move |prefix, own| {
                let top = prefix_max(prefix, n);
                if own > top {
                    top.max(Value::zero())
                } else {
                    own
                }
            }),
        ),
        (
            ConstraintCase::LastStrictLoser,
            Strategy::custom(n, "overbid-when-losing", false, move |prefix, own| {
                let top = prefix_max(prefix, n);
                if own < top {
                    top + one
                } else {
                    own
                }
            }),
        ),
    ];
    if n >= 3 {
        out.insert(
            2,
            (
                ConstraintCase::LoserBeforeLast,
                Strategy::custom(2, "overbid-when-losing", false, move |prefix, own| {
                    let top = prefix_max(prefix, 2);
                    if own <= top {
                        top + one
                    } else {
                        own
                    }
                }),
            ),
        );
    }
    out
}

/// Every fixture must be flagged under exactly its case and must also fail
/// the direct best-response sweep.
pub fn check_constraint_fixtures(
    mechanism: &Mechanism,
    grid: &Grid,
    n: usize,
) -> Result<Vec<VerificationReport>> {
    let mech = mechanism.with_players(n)?;
    let mut reports = Vec::new();
    for (part, fixture) in constraint_fixtures(n) {
        let suite = format!("lemma4/fixture-{}/{}", part.roman(), fixture.label());
        let audit = audit_strategy(&fixture, grid, n);
        let optimal = check_pointwise_optimal(&fixture, &mech, grid, n)?;
        let flagged = matches!(audit, Some((p, _, _)) if p == part) && !optimal.passed;
        let witness = match audit {
            Some((p, theta, bid)) => {
                let bids = replace(&theta, fixture.player(), bid);
                let note = format!("flagged under case ({p}) for player {}", fixture.player());
                Some(Witness::evaluate(
                    &mech,
                    &theta,
                    vec![theta.clone(), bids],
                    note,
                )?)
            }
            None => None,
        };
        reports.push(VerificationReport::new(
            suite,
            grid.cube_size(n) as u64,
            flagged,
            witness,
        ));
    }
    Ok(reports)
}

/// Every enumerated announcement replays cleanly through the constraint, and
/// the named optimal profiles land inside the enumeration.
pub fn check_consistency_membership(grid: &Grid, n: usize) -> Result<VerificationReport> {
    let vick = Mechanism::vickrey(n)?;
    let mut profiles = vec![
        StrategyProfile::truth(n)?,
        StrategyProfile::vickrey_opt(n)?,
        StrategyProfile::uniform(n, |i| Ok(Strategy::adversarial(i)))?,
    ];
    if n >= 3 {
        profiles.push(StrategyProfile::bc_opt(n)?);
    }
    let (instances, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let members = consistent_bid_vectors(&theta, grid).expect("grid point");
        let mut count = members.len() as u64;
        for a in &members {
            if let Some((i, part)) = first_inconsistency(&theta, a) {
                let note = format!("enumerated vector breaks case ({part}) at player {i}");
                return (
                    count,
                    Witness::evaluate(&vick, &theta, vec![a.clone()], note).ok(),
                );
            }
        }
        for p in &profiles {
            count += 1;
            let a = p.continue_from(&theta, Vec::new()).expect("valid profile");
            if !members.contains(&a) {
                let note = format!("profile {} not among consistent announcements", p.label());
                return (count, Witness::evaluate(&vick, &theta, vec![a], note).ok());
            }
        }
        (count, None)
    });
    Ok(VerificationReport::sweep(
        "lemma4/membership",
        instances,
        violation,
    ))
}

/// Prefix maxima, prefix leaders and the winner are preserved by every
/// consistent announcement, up to the last-player tie exception.
pub fn check_consistency_invariants(grid: &Grid, n: usize) -> Result<VerificationReport> {
    let vick = Mechanism::vickrey(n)?;
    let (instances, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let members = consistent_bid_vectors(&theta, grid).expect("grid point");
        let fail = |a: &Vec<Value>, what: &str| {
            Witness::evaluate(&vick, &theta, vec![a.clone()], what.to_string()).ok()
        };
        for a in &members {
            for i in 1..n {
                if max_of(&a[..i]) != max_of(&theta[..i]) {
                    return (
                        members.len() as u64,
                        fail(a, &format!("(i) prefix max differs at {i}")),
                    );
                }
                if argsmax(&a[..i]) != argsmax(&theta[..i]) {
                    return (
                        members.len() as u64,
                        fail(a, &format!("(ii) prefix argsmax differs at {i}")),
                    );
                }
                let own = theta[i - 1];
                if own > max_of(&a[..i - 1]) {
                    let others_ok = members.iter().all(|b| own > max_of(&b[..i - 1]));
                    if !(own > max_of(&theta[..i - 1]) && others_ok) {
                        return (
                            members.len() as u64,
                            fail(a, &format!("(iii) fails at {i}")),
                        );
                    }
                }
            }
            let same = argsmax(a) == argsmax(&theta);
            let last = theta[n - 1];
            let exception =
                last == max_of(&theta[..n - 1]) && a[n - 1] > last && argsmax(a) == Ok(n);
            if !(same || exception) {
                return (
                    members.len() as u64,
                    fail(a, "(iv) winner changed outside the tie exception"),
                );
            }
        }
        (members.len() as u64, None)
    });
    Ok(VerificationReport::sweep(
        "corollary1",
        instances,
        violation,
    ))
}

/// The last player's family of strategies "outbid the prefix iff strictly
/// above it" is a best response to every announced prefix.
pub fn check_last_player_dominant(
    mechanism: &Mechanism,
    grid: &Grid,
    n: usize,
) -> Result<VerificationReport> {
    let mech = mechanism.with_players(n)?;
    let probe = grid.refined();
    let (instances, violation) = scan(grid.cube_size(n), |idx| {
        let point = grid.cube_point(idx, n);
        let (prefix, own) = (&point[..n - 1], point[n - 1]);
        let top = max_of(prefix);
        let mut count = 0;
        let shaped =
            grid.points()
                .iter()
                .copied()
                .filter(|&b| if own > top { b > top } else { b <= top });
        for b in shaped {
            let bids = replace(&point, n, b);
            let got = utility(&mech, &bids, n, &point);
            for &dev in probe.points() {
                count += 1;
                let alt = replace(&point, n, dev);
                if utility(&mech, &alt, n, &point) > got {
                    let note = format!("last player: {dev} beats shaped bid {b}");
                    return (
                        count,
                        Witness::evaluate(&mech, &point, vec![bids, alt], note).ok(),
                    );
                }
            }
        }
        (count, None)
    });
    Ok(VerificationReport::sweep(
        format!("last-player-dominant/{}", mech.selector()),
        instances,
        violation,
    )
    .with_header("earlier bids range over grid^(n-1); misreports over the refined grid"))
}

/// Reproduces the no-dominant-strategy construction for player `i < n`:
/// `θ_i = 2ε`, everybody else 0, earlier players truthful, later players
/// shading one `ε` below the current maximum. Any optimal strategy must bid
/// `2ε` here and earns less than bidding `ε`.
///
/// The report additionally counts, over `grid^n` and a finite family of
/// opponent strategies for the later players, the instances where the bid
/// forced by optimality is beaten by some grid misreport.
pub fn check_no_dominant(
    mechanism: &Mechanism,
    grid: &Grid,
    n: usize,
    i: usize,
    eps: Value,
) -> Result<VerificationReport> {
    let mech = mechanism.with_players(n)?;
    if i == 0 || i >= n {
        return Err(Error::PlayerOutOfRange {
            player: i,
            n: n - 1,
        });
    }
    let two = Value::from(2);
    let mut theta = vec![Value::zero(); n];
    theta[i - 1] = two * eps;
    // truthful up to and including player i, shading afterwards
    let profile = StrategyProfile::uniform(n, |j| {
        if j <= i {
            Ok(Strategy::truth(j))
        } else {
            Strategy::adversarial_with_step(j, eps)
        }
    })?;
    let required = profile.continue_from(&theta, Vec::new())?;
    let mut prefix: Vec<Value> = theta[..i - 1].to_vec();
    prefix.push(eps);
    let deviated = profile.continue_from(&theta, prefix)?;
    let u_req = utility(&mech, &required, i, &theta);
    let u_dev = utility(&mech, &deviated, i, &theta);
    let refutations = family_refutations(&mech, grid, n, i, eps)?;
    let witness = Witness::evaluate(
        &mech,
        &theta,
        vec![required, deviated],
        format!("player {i}: forced bid 2ε earns less than bidding ε against shading followers"),
    )?
    .with("eps", eps)
    .with("required_bid", two * eps)
    .with("deviation_bid", eps)
    .with("family_refutations", Value::integer(refutations as i128));
    Ok(VerificationReport::new(
        format!("no-dominant/{}/player{i}", mech.selector()),
        1 + grid.cube_size(n) as u64,
        u_dev > u_req && refutations > 0,
        Some(witness),
    )
    .with_header(
        "followers drawn from {truth, vickrey-opt, bc-opt, adversarial, constants on grid}",
    ))
}

fn opponent_family(j: usize, n: usize, grid: &Grid, eps: Value) -> Result<Vec<Strategy>> {
    let mut family = vec![
        Strategy::truth(j),
        Strategy::vickrey_opt(j),
        Strategy::adversarial_with_step(j, eps)?,
    ];
    if n >= 3 {
        family.push(Strategy::bc_opt(j, n)?);
    }
    for &c in grid.points() {
        family.push(Strategy::constant(j, c)?);
    }
    Ok(family)
}

fn family_refutations(
    mech: &Mechanism,
    grid: &Grid,
    n: usize,
    i: usize,
    eps: Value,
) -> Result<usize> {
    let families = (i + 1..=n)
        .map(|j| opponent_family(j, n, grid, eps))
        .collect::<Result<Vec<_>>>()?;
    let combos: usize = families.iter().map(Vec::len).product();
    let (count, _) = scan::<()>(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let own = theta[i - 1];
        if own <= max_of(&theta[..i - 1]) {
            return (0, None);
        }
        let mut refuted = 0;
        for mut combo in 0..combos {
            let mut picks = Vec::with_capacity(families.len());
            for fam in &families {
                picks.push(&fam[combo % fam.len()]);
                combo /= fam.len();
            }
            let play = |bid: Value| {
                let mut bids = theta[..i - 1].to_vec();
                bids.push(bid);
                for s in &picks {
                    let b = s.bid(&bids, theta[s.player() - 1]).expect("valid strategy");
                    bids.push(b);
                }
                utility(mech, &bids, i, &theta)
            };
            let forced = play(own);
            if grid.points().iter().any(|&dev| play(dev) > forced) {
                refuted += 1;
            }
        }
        (refuted, None)
    });
    Ok(count as usize)
}

/// Nash checks of a designated profile viewed as a simultaneous game:
///
/// 1. the truthful profile admits no profitable unilateral misreport;
/// 2. against the designated profile an unrestricted deviation is
///    profitable somewhere (expected for any non-truthful profile);
/// 3. restricted to consistent-optimal deviations, nobody gains by
///    deviating and no consistent announcement Pareto-dominates it.
pub fn check_nash_within_optimal(
    mechanism: &Mechanism,
    profile: &StrategyProfile,
    grid: &Grid,
    n: usize,
) -> Result<Vec<VerificationReport>> {
    let mech = mechanism.with_players(n)?;
    if profile.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: profile.n(),
        });
    }
    let tag = format!("{}/{}", mech.selector(), profile.label());
    let ic = crate::mechanism::check_incentive_compatible(&mech, grid, n)?;
    let truth_witness = match &ic.witness {
        Some(w) => Some(Witness::evaluate(
            &mech,
            &w.theta,
            vec![w.theta.clone(), replace(&w.theta, w.player, w.deviation)],
            "truthful profile is not a Nash equilibrium",
        )?),
        None => None,
    };
    let truth = VerificationReport::sweep(
        format!("nash/truth/{}", mech.selector()),
        ic.instances as u64,
        truth_witness,
    );

    let (k, deviation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let base = profile
            .continue_from(&theta, Vec::new())
            .expect("valid profile");
        let mut count = 0;
        for i in 1..=n {
            let got = utility(&mech, &base, i, &theta);
            for &dev in grid.points() {
                count += 1;
                let mut prefix = base[..i - 1].to_vec();
                prefix.push(dev);
                let alt = profile
                    .continue_from(&theta, prefix)
                    .expect("valid profile");
                if utility(&mech, &alt, i, &theta) > got {
                    let note = format!("player {i} deviates to {dev}");
                    return (
                        count,
                        Witness::evaluate(&mech, &theta, vec![base, alt], note).ok(),
                    );
                }
            }
        }
        (count, None)
    });
    let is_truth = profile.strategies().iter().all(|s| s.label() == "truth");
    let unrestricted = VerificationReport::new(
        format!("nash/unrestricted-deviation/{tag}"),
        k,
        deviation.is_some() != is_truth,
        deviation,
    );

    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let theta = grid.cube_point(idx, n);
        let base = profile
            .continue_from(&theta, Vec::new())
            .expect("valid profile");
        let members = consistent_bid_vectors(&theta, grid).expect("grid point");
        let mut count = 1;
        if !members.contains(&base) {
            let note = "designated profile is not consistent-optimal".to_string();
            return (
                count,
                Witness::evaluate(&mech, &theta, vec![base], note).ok(),
            );
        }
        let base_out = mech.run(&base, &theta).expect("valid");
        for i in 1..=n {
            let c = ConsistencyConstraint::new(&base[..i - 1], theta[i - 1], n);
            for b in c.on_grid(grid) {
                count += 1;
                let mut prefix = base[..i - 1].to_vec();
                prefix.push(b);
                let alt = profile
                    .continue_from(&theta, prefix)
                    .expect("valid profile");
                if utility(&mech, &alt, i, &theta) > base_out.utility(i) {
                    let note = format!("player {i} gains with optimal bid {b}");
                    return (
                        count,
                        Witness::evaluate(&mech, &theta, vec![base, alt], note).ok(),
                    );
                }
            }
        }
        for a in &members {
            count += 1;
            let out = mech.run(a, &theta).expect("valid");
            let weakly = out
                .utilities
                .iter()
                .zip(&base_out.utilities)
                .all(|(x, y)| x >= y);
            let strictly = out
                .utilities
                .iter()
                .zip(&base_out.utilities)
                .any(|(x, y)| x > y);
            if weakly && strictly {
                let note =
                    "consistent announcement Pareto-dominates the designated profile".to_string();
                return (
                    count,
                    Witness::evaluate(&mech, &theta, vec![base, a.clone()], note).ok(),
                );
            }
        }
        (count, None)
    });
    let restricted = VerificationReport::sweep(format!("nash/within-optimal/{tag}"), k, violation);
    Ok(vec![truth, unrestricted, restricted])
}

/// Player 1's unrestricted deviation at `θ`, bidding `bid` while everyone
/// else keeps playing `profile`.
pub fn deviation_instance(
    mechanism: &Mechanism,
    profile: &StrategyProfile,
    theta: &[Value],
    player: usize,
    bid: Value,
) -> Result<Witness> {
    let base = profile.continue_from(theta, Vec::new())?;
    let mut prefix = base[..player - 1].to_vec();
    prefix.push(bid);
    let alt = profile.continue_from(theta, prefix)?;
    Ok(Witness::evaluate(
        mechanism,
        theta,
        vec![base, alt],
        format!("player {player} deviates to {bid}"),
    )?
    .with("deviation_bid", bid))
}

/// Aggregate tax is non-positive for every bid vector in `grid^n`.
pub fn check_feasibility(
    mechanism: &Mechanism,
    grid: &Grid,
    n: usize,
) -> Result<VerificationReport> {
    let mech = mechanism.with_players(n)?;
    let (k, violation) = scan(grid.cube_size(n), |idx| {
        let bids = grid.cube_point(idx, n);
        let w = (!mech.is_feasible(&bids).expect("valid")).then(|| {
            Witness::evaluate(
                &mech,
                &bids,
                vec![bids.clone()],
                "aggregate tax is positive",
            )
            .ok()
        });
        (1, w.flatten())
    });
    Ok(VerificationReport::sweep(
        format!("feasibility/{}", mech.selector()),
        k,
        violation,
    ))
}
