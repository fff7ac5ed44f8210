//! Acceptance gate: nine criteria, one PASS/FAIL line each. Every
//! comparison is exact rational equality.

use std::collections::BTreeMap;
use std::process::Command;

use seqgroves::oracle::{bc, groves, vickrey, ConstraintCase};
use seqgroves::{
    check_incentive_compatible, run_suite, Grid, Mechanism, StrategyProfile, Suite, SuiteConfig,
    Value, VerificationReport,
};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn v(x: i64) -> Value {
    Value::from(x)
}

fn frac(p: i128, q: i128) -> Value {
    Value::new(p, q).unwrap()
}

fn vals(xs: &[i64]) -> Vec<Value> {
    xs.iter().map(|&x| v(x)).collect()
}

fn cfg(n: usize, hi: i64) -> SuiteConfig {
    SuiteConfig {
        n,
        grid: Grid::integers(hi),
        epsilon: v(1),
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn all_pass(reports: &[VerificationReport]) -> Check {
    match reports.iter().find(|r| !r.passed) {
        None => ensure(!reports.is_empty(), || "no reports produced".into()),
        Some(r) => Err(format!(
            "{} failed: {:?}",
            r.suite,
            r.witness.as_ref().map(|w| &w.note)
        )),
    }
}

fn suite(s: Suite, c: &SuiteConfig) -> Result<Vec<VerificationReport>, String> {
    run_suite(s, c).map_err(|e| e.to_string())
}

fn expect_eq(label: &str, got: Option<Value>, want: Value) -> Check {
    ensure(got == Some(want), || {
        format!("{label}: expected {want}, got {got:?}")
    })
}

fn criterion_1() -> Check {
    for (n, hi) in [(3, 4), (4, 3)] {
        let grid = Grid::integers(hi);
        for m in [
            Mechanism::vickrey(n).unwrap(),
            Mechanism::bailey_cavallo(n).unwrap(),
        ] {
            let ic = check_incentive_compatible(&m, &grid, n).map_err(|e| e.to_string())?;
            ensure(ic.holds, || {
                format!("{} n={n}: {:?}", m.selector(), ic.witness)
            })?;
        }
    }
    Ok(())
}

fn criterion_2() -> Check {
    for n in [3, 4] {
        all_pass(&[bc::check_bc_identities(&Grid::integers(4), n).map_err(|e| e.to_string())?])?;
    }
    // independent spot check of the sign: bids (4,3,1) lose (2/3)(3-1)
    let m = Mechanism::bailey_cavallo(3).unwrap();
    let total: Value = m.taxes(&vals(&[4, 3, 1])).unwrap().iter().sum();
    ensure(total == frac(-4, 3), || {
        format!("aggregate tax at (4,3,1) is {total}")
    })
}

fn criterion_3() -> Check {
    let c = cfg(3, 4);
    all_pass(&suite(Suite::ClearWinnerLoser, &c)?)?;
    let reports = suite(Suite::OptimalBids, &c)?;
    all_pass(&reports)?;
    for part in [
        ConstraintCase::WinnerBeforeLast,
        ConstraintCase::LastStrictWinner,
        ConstraintCase::LoserBeforeLast,
        ConstraintCase::LastStrictLoser,
    ] {
        let tag = format!("lemma4/fixture-{}/", part.roman());
        ensure(
            reports
                .iter()
                .any(|r| r.suite.starts_with(&tag) && r.passed),
            || format!("no fixture flagged for {tag}"),
        )?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let c = cfg(3, 4);
    all_pass(&suite(Suite::SwMaximalVickrey, &c)?)?;
    let m = Mechanism::vickrey(3).unwrap();
    let w = vickrey::welfare_comparison(
        &m,
        &StrategyProfile::vickrey_opt(3).unwrap(),
        &vals(&[3, 5, 4]),
    )
    .map_err(|e| e.to_string())?;
    expect_eq("SW vickrey-opt at (3,5,4)", w.value("a0.sw"), v(2))?;
    expect_eq("SW truth at (3,5,4)", w.value("a1.sw"), v(1))
}

fn criterion_5() -> Check {
    for c in [cfg(3, 4), cfg(4, 3)] {
        all_pass(&suite(Suite::SwMaximalBc, &c)?)?;
        all_pass(&suite(Suite::BcOptDominance, &c)?)?;
    }
    let m = Mechanism::bailey_cavallo(3).unwrap();
    let w =
        vickrey::welfare_comparison(&m, &StrategyProfile::bc_opt(3).unwrap(), &vals(&[3, 5, 4]))
            .map_err(|e| e.to_string())?;
    expect_eq("SW bc-opt at (3,5,4)", w.value("a0.sw"), v(5))?;
    expect_eq("SW truth at (3,5,4)", w.value("a1.sw"), frac(13, 3))
}

fn criterion_6() -> Check {
    let c = cfg(3, 4);
    all_pass(&suite(Suite::VickreyEquality, &c)?)?;
    all_pass(&suite(Suite::BcNotUtilityEqual, &c)?)?;
    let w = bc::bc_epsilon_instance(&vals(&[10, 9, 8]), v(1)).map_err(|e| e.to_string())?;
    expect_eq("r_2 under shading", w.value("a0.r2"), frac(8, 3))?;
    expect_eq("r_2 under matching", w.value("a1.r2"), v(3))
}

fn criterion_7() -> Check {
    let grid = Grid::integers(3);
    let r = groves::check_no_dominant(&Mechanism::vickrey(3).unwrap(), &grid, 3, 1, v(1))
        .map_err(|e| e.to_string())?;
    all_pass(std::slice::from_ref(&r))?;
    let w = r.witness.as_ref().ok_or("no witness")?;
    expect_eq("utility of the forced bid", w.value("a0.u1"), v(1))?;
    expect_eq("utility of the deviation", w.value("a1.u1"), v(2))?;

    let g = Grid::integers(4);
    let middle = bc::check_bc_no_socially_optimal(&g, 3, 2).map_err(|e| e.to_string())?;
    ensure(middle.len() == 2, || "expected one report per case".into())?;
    all_pass(&middle)?;
    ensure(middle.iter().all(|r| r.witness.is_some()), || {
        "case without witness".into()
    })?;
    for i in [1, 3] {
        let ends = bc::check_bc_no_socially_optimal(&g, 3, i).map_err(|e| e.to_string())?;
        all_pass(&ends)?;
        ensure(ends.iter().all(|r| r.witness.is_none()), || {
            format!("witness found for player {i}")
        })?;
    }
    Ok(())
}

fn criterion_8() -> Check {
    let truth2 = groves::check_nash_within_optimal(
        &Mechanism::vickrey(2).unwrap(),
        &StrategyProfile::truth(2).unwrap(),
        &Grid::integers(3),
        2,
    )
    .map_err(|e| e.to_string())?;
    // only the first report concerns truth-telling itself; truth is not
    // expected to be Pareto optimal among consistent announcements
    ensure(truth2[0].suite == "nash/truth/vickrey", || {
        "unexpected report order".into()
    })?;
    all_pass(&truth2[..1])?;
    let reports = suite(Suite::Nash, &cfg(3, 4))?;
    all_pass(&reports)?;
    for tag in [
        "nash/within-optimal/vickrey/vickrey-opt",
        "nash/within-optimal/bailey-cavallo/bc-opt",
        "nash/truth/vickrey",
    ] {
        ensure(reports.iter().any(|r| r.suite == tag), || {
            format!("missing {tag}")
        })?;
    }
    let w = groves::deviation_instance(
        &Mechanism::vickrey(2).unwrap(),
        &StrategyProfile::vickrey_opt(2).unwrap(),
        &vals(&[1, 2]),
        1,
        v(3),
    )
    .map_err(|e| e.to_string())?;
    expect_eq("utility after deviating to 3", w.value("a1.u1"), v(1))?;
    expect_eq("utility under vickrey-opt", w.value("a0.u1"), v(0))
}

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_seqgroves"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    ))
}

fn resimulate(report: &VerificationReport) -> Check {
    let Some(w) = &report.witness else {
        return Ok(());
    };
    let n = w.theta.len();
    let types: Vec<String> = w.theta.iter().map(Value::to_string).collect();
    for (k, bids) in w.announcements.iter().enumerate() {
        let profile: Vec<String> = bids.iter().map(|b| format!("constant:{b}")).collect();
        let (code, out) = cli(&[
            "simulate",
            "--mechanism",
            &w.mechanism,
            "--types",
            &types.join(","),
            "--profile",
            &profile.join(","),
            "--out",
            "json",
        ])?;
        ensure(code == 0, || {
            format!("{}: simulate exited {code}", report.suite)
        })?;
        let sim: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let run = &sim["runs"][0];
        let parse = |x: &serde_json::Value| x.as_str().and_then(|s| s.parse::<Value>().ok());
        let mut got = BTreeMap::new();
        got.insert(
            "winner".to_string(),
            run["winner"].as_i64().map(Value::from),
        );
        got.insert("sw".to_string(), parse(&run["social_welfare"]));
        let taxes: Vec<Option<Value>> = (0..n).map(|i| parse(&run["taxes"][i])).collect();
        got.insert("tax".to_string(), taxes.iter().copied().sum());
        for i in 0..n {
            got.insert(format!("u{}", i + 1), parse(&run["utilities"][i]));
            got.insert(format!("t{}", i + 1), taxes[i]);
        }
        for (key, value) in &got {
            let recorded = w.value(&format!("a{k}.{key}"));
            ensure(recorded.is_some() && recorded == *value, || {
                format!(
                    "{} a{k}.{key}: witness {recorded:?}, simulate {value:?}",
                    report.suite
                )
            })?;
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let (code, json) = cli(&["verify", "--suite", "all", "--out", "json", "--jobs", "1"])?;
    ensure(code == 0, || format!("verify exited {code}"))?;
    let reports: Vec<VerificationReport> =
        serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let witnesses = reports.iter().filter(|r| r.witness.is_some()).count();
    ensure(witnesses > 0, || "no witnesses to replay".into())?;
    for r in &reports {
        resimulate(r)?;
    }
    for name in [
        "no-dominant",
        "bc-not-utility-equal",
        "nash-deviation",
        "bc-no-socially-optimal",
    ] {
        let (code, json) = cli(&["counterexample", name])?;
        ensure(code == 0, || format!("counterexample {name} exited {code}"))?;
        let reports: Vec<VerificationReport> =
            serde_json::from_str(&json).map_err(|e| e.to_string())?;
        for r in &reports {
            resimulate(r)?;
        }
    }

    let sim = [
        "simulate",
        "--mechanism",
        "bc",
        "--types",
        "3,5,4",
        "--profile",
        "bc-opt",
        "--out",
        "csv",
    ];
    let first = cli(&sim)?;
    ensure(first.0 == 0 && cli(&sim)? == first, || {
        "simulate CSV differs between runs".into()
    })?;
    let mut baseline = None;
    for jobs in ["1", "2", "4"] {
        let out = cli(&["verify", "--suite", "all", "--out", "csv", "--jobs", jobs])?;
        match &baseline {
            None => baseline = Some(out),
            Some(b) => ensure(*b == out, || {
                format!("verify CSV differs with --jobs {jobs}")
            })?,
        }
    }
    let (_, json4) = cli(&["verify", "--suite", "all", "--out", "json", "--jobs", "4"])?;
    ensure(json4 == json, || {
        "verify JSON differs between --jobs 1 and 4".into()
    })
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "Groves incentive compatibility (Vickrey, BC; n=3 on 0..4, n=4 on 0..3)",
            criterion_1,
        ),
        (
            "BC aggregate redistribution and tax identities",
            criterion_2,
        ),
        (
            "clear winner/loser and optimal-bid characterisation sweeps, fixtures flagged",
            criterion_3,
        ),
        (
            "Vickrey welfare closed form and maximality, (3,5,4) gives 2 vs 1",
            criterion_4,
        ),
        (
            "BC welfare maximality and entrywise dominance, (3,5,4) gives 5 vs 13/3",
            criterion_5,
        ),
        (
            "Vickrey utility equality; BC inequality with r_2 = 8/3 vs 3",
            criterion_6,
        ),
        (
            "no dominant strategy (1 vs 2); BC middle player has no socially optimal bid",
            criterion_7,
        ),
        (
            "Nash checks: truth, deviation 1 vs 0, restricted Nash and Pareto",
            criterion_8,
        ),
        (
            "CLI round trip and byte-stable output across runs and --jobs",
            criterion_9,
        ),
    ];
    let mut failed = 0;
    for (k, (label, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS  {label}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {label}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
