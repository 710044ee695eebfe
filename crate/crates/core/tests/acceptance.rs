//! Acceptance run: one PASS/FAIL line per criterion, exact comparisons only.

mod common;

use common::*;
use fennec::clearing::{cds_clear, proportional_clear};
use fennec::fixtures::{make_fixture, parse_params, profile, verify_fixture, Fixture};
use fennec::game::{analyze, AnalyzeOptions, GameReport, Ratio, Stability, UtilityMode};
use fennec::money::{fmt, int, one, ratio, Money};
use fennec::FinancialNetwork;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn fixture(name: &str, params: &[&str]) -> Fixture {
    make_fixture(name, &parse_params(params.iter().copied()).unwrap()).unwrap()
}

fn all_expectations(fx: &Fixture) -> Result<usize, String> {
    let outcomes = verify_fixture(fx).map_err(|e| e.to_string())?;
    match outcomes.iter().find(|o| !o.pass) {
        Some(o) => Err(format!("{}: {} got {}", fx.name, o.what, o.detail)),
        None => Ok(outcomes.len()),
    }
}

fn report(net: &FinancialNetwork, mode: UtilityMode, coalition: Option<(Stability, usize)>) -> GameReport {
    let options = AnalyzeOptions {
        coalition,
        ..AnalyzeOptions::default()
    };
    analyze(net, mode, &options).unwrap()
}

fn sw(net: &FinancialNetwork, prof: &str, mode: UtilityMode) -> Money {
    let res = cds_clear(net, &profile(net, prof)).unwrap();
    fennec::game::utilities(net, &res, mode).iter().sum()
}

fn check(cond: bool, what: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what)
    }
}

fn criterion_1() -> Outcome {
    let fx = fixture("example1", &[]);
    let net = &fx.network;
    let cases = [
        ("v1:v2|v3", [int(2), int(1), int(0), int(1), int(0)], int(6)),
        ("v1:v3|v2", [int(1), int(0), int(1), int(0), int(0)], int(4)),
        ("v1:v2,v3", [int(2), int(1), ratio(2, 3), ratio(1, 3), int(0)], int(6)),
    ];
    for (prof, totals, welfare) in &cases {
        let res = cds_clear(net, &profile(net, prof)).unwrap();
        check(res.totals() == totals.to_vec(), format!("{prof}: totals {:?}", res.totals().iter().map(fmt).collect::<Vec<_>>()))?;
        let got = sw(net, prof, UtilityMode::TotalAssets);
        check(&got == welfare, format!("{prof}: welfare {}", fmt(&got)))?;
    }
    let rep = report(net, UtilityMode::TotalAssets, None);
    let mut eq: Vec<String> = rep.equilibria().iter().map(|p| p.label(net)).collect();
    eq.sort();
    check(eq == ["v1:(v2,v3)", "v1:(v2|v3)"], format!("equilibria {eq:?}"))?;
    Ok("payment totals, welfare 6/4/6 and the equilibrium set {(v2|v3), (v2,v3)} match".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let fx = fixture("thm4-no-ne", &["M=600"]);
    check(fx.param("eps") == &ratio(1, 101), "eps is not 1/101".into())?;
    let n = all_expectations(&fx)?;
    let rep = report(&fx.network, UtilityMode::TotalAssets, None);
    check(rep.nash.equilibria.is_empty(), format!("{} equilibria found", rep.nash.equilibria.len()))?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} utility cells match (one printed cell corrected by mirror symmetry), no pure Nash equilibrium, {:.2?}",
        n - 1,
        elapsed
    ))
}

fn criterion_3() -> Outcome {
    let fx = fixture("thm5-prop", &["M=100"]);
    let net = &fx.network;
    let prop = proportional_clear(net).unwrap();
    let prop_sw: Money = fennec::game::utilities(net, &prop, UtilityMode::TotalAssets).iter().sum();
    check(prop_sw == int(3), format!("proportional welfare {}", fmt(&prop_sw)))?;
    let strategic = sw(net, "v1:v2|v3", UtilityMode::TotalAssets);
    check(strategic == int(202), format!("strategic welfare {}", fmt(&strategic)))?;

    let path = fixture("thm5-path", &["n=10", "M=100"]);
    let pnet = &path.network;
    let pprop = proportional_clear(pnet).unwrap();
    let psw: Money = fennec::game::utilities(pnet, &pprop, UtilityMode::TotalAssets).iter().sum();
    check(psw == int(2) + ratio(7, 101), format!("path proportional welfare {}", fmt(&psw)))?;
    let rep = report(pnet, UtilityMode::TotalAssets, None);
    check(rep.opt == Some(int(9)), format!("path OPT {:?}", rep.opt.as_ref().map(fmt)))?;
    let r = int(9) / &psw;
    check(r <= ratio(9, 2), format!("ratio {} above (n-1)/2", fmt(&r)))?;
    Ok(format!("SW 3 vs 202; path SW {} vs OPT 9, ratio {} <= 9/2", fmt(&psw), fmt(&r)))
}

fn criterion_4() -> Outcome {
    let fx = fixture("thm6-zero-costs", &[]);
    let rep = report(&fx.network, UtilityMode::TotalAssets, None);
    check(
        rep.nash.equilibria.len() == rep.profiles_examined,
        format!("{} of {} profiles are equilibria", rep.nash.equilibria.len(), rep.profiles_examined),
    )?;
    check(rep.nash.pos == Some(Ratio::Finite(one())), format!("PoS {:?}", rep.nash.pos))?;
    Ok(format!("all {} profiles are equilibria, PoS 1", rep.profiles_examined))
}

fn criterion_5() -> Outcome {
    let fx = fixture("thm7-beta", &["beta=1/2", "M=100"]);
    let net = &fx.network;
    all_expectations(&fx)?;
    let rep = report(net, UtilityMode::TotalAssets, None);
    let eq: Vec<String> = rep.equilibria().iter().map(|p| p.label(net)).collect();
    check(eq == ["v1:(v2|v3)"], format!("equilibria {eq:?}"))?;
    check(rep.nash.best == Some(ratio(13, 4)), "equilibrium welfare differs from 13/4".into())?;
    let opt_profile = sw(net, "v1:v3|v2", UtilityMode::TotalAssets);
    check(opt_profile == ratio(405, 2), format!("(v3|v2) welfare {}", fmt(&opt_profile)))?;

    let fa = fixture("thm7-alpha", &["alpha=1/2", "M=100"]);
    all_expectations(&fa)?;
    let ra = report(&fa.network, UtilityMode::TotalAssets, None);
    check(ra.nash.equilibria.len() == 1 && ra.nash.best == Some(int(2)), "alpha equilibrium welfare differs from 2".into())?;
    check(ra.opt == Some(ratio(403, 2)), format!("alpha OPT {:?}", ra.opt.as_ref().map(fmt)))?;
    Ok(format!(
        "unique equilibrium (v2|v3) with SW 13/4, (v3|v2) SW 405/2 (OPT {}); alpha case SW 2, OPT 403/2",
        rep.opt.as_ref().map(fmt).unwrap_or_default()
    ))
}

fn criterion_6() -> Outcome {
    let mut total = 0;
    for (name, params) in [
        ("thm8-negative", &[][..]),
        ("thm9-poa", &["M=100"][..]),
        ("thm16-negative", &[][..]),
        ("thm17-superstrong", &["eps=1/10"][..]),
    ] {
        total += all_expectations(&fixture(name, params))?;
    }
    let f9 = fixture("thm9-poa", &["M=100"]);
    let r9 = report(&f9.network, UtilityMode::TotalAssets, None);
    check(r9.nash.poa == Some(Ratio::Finite(int(101))), format!("PoA {:?}", r9.nash.poa))?;
    let f17 = fixture("thm17-superstrong", &["eps=1/10"]);
    let r17 = report(&f17.network, UtilityMode::Equity, Some((Stability::SuperStrong, 4)));
    let (_, _, eff) = r17.coalition.as_ref().unwrap();
    check(
        eff.best == Some(ratio(1, 10)) && eff.worst == Some(ratio(1, 10)),
        format!("super-strong welfare {:?}", eff.best.as_ref().map(fmt)),
    )?;
    check(r17.nash.best == Some(ratio(9, 10)), format!("best Nash {:?}", r17.nash.best.as_ref().map(fmt)))?;
    Ok(format!("{total} expectations pass, PoA 101, super-strong SW 1/10 vs best Nash 9/10"))
}

fn run_property<S, F>(cases: u32, strategy: S, test: F) -> Result<(), String>
where
    S: proptest::strategy::Strategy,
    F: Fn(S::Value) -> Result<(), String>,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| test(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

const EQUITY: Shape = Shape {
    max_n: 5,
    max_out: 2,
    negative_externals: true,
};

fn criterion_7() -> Outcome {
    let start = Instant::now();
    run_property(200, network(EQUITY), |net| equity_all_nash(&net))?;
    run_property(200, network(EQUITY), |net| equity_all_strong(&net))?;
    run_property(200, network(EQUITY), |net| {
        let net = without_negative_externals(&with_costs(&net, net.costs.alpha.clone(), one()));
        beta_one_welfare(&net)
    })?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!("3 x 200 random networks: all Nash, all strong-stable, welfare identity and PoA <= 1/alpha, {elapsed:.2?}"))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let shape = Shape {
        max_n: 6,
        max_out: 3,
        negative_externals: false,
    };
    run_property(500, network_and_profile(shape), |(net, p)| clearing_core(&net, &p))?;
    run_property(500, network_and_profile(Shape { negative_externals: true, ..shape }), |(net, p)| {
        clearing_core(&with_costs(&net, one(), one()), &p)
    })?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!(
        "2 x 500 random networks: zero residuals, monotone iterates, maximal >= minimal, idempotent filter, equity invariance, {elapsed:.2?}"
    ))
}

fn family_ratio(name: &str, m: i64) -> Result<Money, String> {
    let mparam = format!("M={m}");
    let fx = fixture(name, &[mparam.as_str()]);
    let net = &fx.network;
    let rep = report(net, UtilityMode::TotalAssets, None);
    let opt = rep.opt.clone().ok_or("no optimum")?;
    let ratio = match name {
        "thm5-prop" => {
            let prop = proportional_clear(net).unwrap();
            let sw: Money = fennec::game::utilities(net, &prop, UtilityMode::TotalAssets).iter().sum();
            Ratio::of(&opt, &sw)
        }
        "thm9-poa" => rep.nash.poa.clone().ok_or("no equilibrium")?,
        _ => rep.nash.pos.clone().ok_or("no equilibrium")?,
    };
    match ratio {
        Ratio::Finite(r) => Ok(r),
        Ratio::Infinite => Err(format!("{name}: infinite ratio")),
    }
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    for name in ["thm5-prop", "thm7-beta", "thm7-alpha", "thm8-negative", "thm9-poa"] {
        let mut prev: Option<Money> = None;
        let mut shown = Vec::new();
        for m in [10, 100, 1000] {
            let r = family_ratio(name, m)?;
            check(r > ratio(m, 2), format!("{name} at M={m}: ratio {} not above M/2", fmt(&r)))?;
            if let Some(p) = &prev {
                check(&r > p, format!("{name}: ratio not increasing at M={m}"))?;
            }
            shown.push(fmt(&r));
            prev = Some(r);
        }
        lines.push(format!("{name} [{}]", shown.join(", ")));
    }
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "example1 clearing and equilibria", criterion_1),
        (2, "no-equilibrium table", criterion_2),
        (3, "proportional inefficiency", criterion_3),
        (4, "zero recovery makes every profile stable", criterion_4),
        (5, "unique bad equilibrium under default costs", criterion_5),
        (6, "negative externals, anarchy and super-strong instances", criterion_6),
        (7, "equity-mode properties", criterion_7),
        (8, "clearing-core properties", criterion_8),
        (9, "unbounded-family ratios", criterion_9),
    ];
    let mut failed = 0;
    for (id, title, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {id} PASS {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} FAIL {title}: {detail}");
            }
        }
    }
    println!("acceptance: {}/9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
