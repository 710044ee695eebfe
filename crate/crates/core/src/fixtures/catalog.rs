use super::{matrix, profile, Check, Expectation, Fixture, ParamSpec, Range};
use crate::error::{Error, Result};
use crate::game::{Ratio, Stability, UtilityMode};
use crate::model::{FinancialNetwork, NetworkBuilder};
use crate::money::{self, int, one, ratio, zero, Money};
use std::collections::BTreeMap;

use UtilityMode::{Equity, TotalAssets};

pub const NAMES: &[&str] = &[
    "example1",
    "thm4-no-ne",
    "thm5-prop",
    "thm5-path",
    "thm6-zero-costs",
    "thm7-beta",
    "thm7-alpha",
    "thm8-negative",
    "thm9-poa",
    "thm10-beta",
    "thm10-alpha-or-beta1",
    "thm13-transform",
    "thm16-negative",
    "thm17-superstrong",
    "footnote-cycle",
];

fn spec(name: &'static str, default: Money, range: Range) -> ParamSpec {
    ParamSpec { name, default, range }
}

fn big_m() -> ParamSpec {
    spec("M", int(600), Range::Above(one()))
}

pub fn param_specs(name: &str) -> Option<Vec<ParamSpec>> {
    let half = || ratio(1, 2);
    Some(match name {
        "example1" | "thm13-transform" | "thm16-negative" => vec![],
        "thm4-no-ne" => vec![spec("M", int(600), Range::Above(int(78)))],
        "thm5-prop" | "thm8-negative" | "thm9-poa" => vec![big_m()],
        "thm5-path" => vec![big_m(), spec("n", int(10), Range::IntegerAtLeast(int(4)))],
        "thm6-zero-costs" => vec![spec("alpha", half(), Range::OpenClosed(zero(), one())), big_m()],
        "thm7-beta" => vec![spec("beta", half(), Range::Open(zero(), one())), big_m()],
        "thm7-alpha" => vec![spec("alpha", half(), Range::OpenClosed(zero(), one())), big_m()],
        "thm10-beta" => vec![
            spec("beta", half(), Range::Open(zero(), one())),
            spec("alpha", half(), Range::OpenClosed(zero(), one())),
        ],
        "thm10-alpha-or-beta1" => vec![
            spec("alpha", half(), Range::OpenClosed(zero(), one())),
            spec("beta", one(), Range::Either(zero(), one())),
            big_m(),
        ],
        "thm17-superstrong" => vec![spec("eps", ratio(1, 10), Range::Open(zero(), ratio(1, 2)))],
        "footnote-cycle" => vec![spec("l", one(), Range::Above(zero()))],
        _ => return None,
    })
}

fn exp(what: impl Into<String>, check: Check) -> Expectation {
    Expectation {
        what: what.into(),
        check,
    }
}

fn out_of_range(name: &str, value: &Money, expected: &str) -> Error {
    Error::ParamOutOfRange {
        name: name.to_string(),
        value: money::fmt(value),
        expected: expected.to_string(),
    }
}

pub fn build(name: &str, params: BTreeMap<String, Money>) -> Result<Fixture> {
    let p = |k: &str| params[k].clone();
    let (name, summary, network, expectations, extra): (&'static str, &'static str, _, _, Vec<(&str, Money)>) =
        match name {
            "example1" => {
                let (net, e) = example1()?;
                ("example1", "Five firms with one credit default swap; v1 chooses how to split its payments.", net, e, vec![])
            }
            "thm4-no-ne" => {
                let m = p("M");
                let eps = int(6) / (&m + int(6));
                let (net, e) = thm4(&m, &eps)?;
                ("thm4-no-ne", "Seven firms whose payment game has no pure Nash equilibrium.", net, e, vec![("eps", eps)])
            }
            "thm5-prop" => {
                let (net, e) = thm5_prop(&p("M"))?;
                ("thm5-prop", "Proportional payments lose welfare against a priority order.", net, e, vec![])
            }
            "thm5-path" => {
                let n = p("n").to_integer().try_into().map_err(|_| out_of_range("n", &p("n"), "a small integer"))?;
                let (net, e) = thm5_path(&p("M"), n)?;
                ("thm5-path", "A path fed by one firm; proportional payments starve the path.", net, e, vec![])
            }
            "thm6-zero-costs" => {
                let (net, e) = thm6(&p("alpha"), &p("M"))?;
                ("thm6-zero-costs", "Under full default costs every profile is an equilibrium.", net, e, vec![])
            }
            "thm7-beta" => {
                let (net, e) = thm7_beta(&p("beta"), &p("M"))?;
                ("thm7-beta", "Default costs on inflow make the unique equilibrium arbitrarily worse than the optimum.", net, e, vec![])
            }
            "thm7-alpha" => {
                let (net, e) = thm7_alpha(&p("alpha"), &p("M"))?;
                ("thm7-alpha", "Default costs on external assets with all inflow lost.", net, e, vec![])
            }
            "thm8-negative" => {
                let (net, e) = thm8(&p("M"))?;
                ("thm8-negative", "Negative external assets make the unique equilibrium arbitrarily worse than the optimum.", net, e, vec![])
            }
            "thm9-poa" => {
                let (net, e) = thm9(&p("M"))?;
                ("thm9-poa", "Every profile is an equilibrium and the worst is far from the optimum.", net, e, vec![])
            }
            "thm10-beta" => {
                let (net, e) = thm10_beta(&p("beta"), &p("alpha"))?;
                ("thm10-beta", "Equity utilities with inflow default costs: an equilibrium with zero welfare.", net, e, vec![])
            }
            "thm10-alpha-or-beta1" => {
                let (alpha, beta) = (p("alpha"), p("beta"));
                if beta == one() && alpha == one() {
                    return Err(out_of_range("alpha", &alpha, "in (0, 1) when beta = 1"));
                }
                let (net, e) = thm10_alpha(&alpha, &beta, &p("M"))?;
                ("thm10-alpha-or-beta1", "Equity utilities where one default cost is extreme.", net, e, vec![])
            }
            "thm13-transform" => {
                let (net, e) = thm13()?;
                ("thm13-transform", "Negative external assets replaced by debts to a sink firm.", net, e, vec![])
            }
            "thm16-negative" => {
                let (net, e) = thm16()?;
                ("thm16-negative", "Equity utilities with negative external assets: an equilibrium with zero welfare.", net, e, vec![])
            }
            "thm17-superstrong" => {
                let (net, e) = thm17(&p("eps"))?;
                ("thm17-superstrong", "The only super-strong equilibrium has tiny welfare.", net, e, vec![])
            }
            "footnote-cycle" => {
                let (net, e) = footnote(&p("l"))?;
                ("footnote-cycle", "A debt cycle with no external assets has many clearing vectors.", net, e, vec![])
            }
            other => return Err(Error::UnknownFixture(other.to_string())),
        };
    let mut params = params;
    for (k, v) in extra {
        params.insert(k.to_string(), v);
    }
    Ok(Fixture {
        name,
        summary,
        params,
        network,
        expectations,
    })
}

type Built = Result<(FinancialNetwork, Vec<Expectation>)>;

fn payments(net: &FinancialNetwork, what: &str, prof: &str, entries: &[(&str, &str, Money)]) -> Expectation {
    exp(
        what,
        Check::Payments {
            profile: profile(net, prof),
            rows: matrix(net, entries),
        },
    )
}

fn welfare(net: &FinancialNetwork, what: &str, prof: &str, mode: UtilityMode, value: Money) -> Expectation {
    exp(
        what,
        Check::Welfare {
            profile: profile(net, prof),
            mode,
            value,
        },
    )
}

fn utilities(net: &FinancialNetwork, what: &str, prof: &str, mode: UtilityMode, values: &[(&str, Money)]) -> Expectation {
    exp(
        what,
        Check::Utilities {
            profile: profile(net, prof),
            mode,
            values: values
                .iter()
                .map(|(id, v)| (net.index_of(id).expect("known firm"), v.clone()))
                .collect(),
        },
    )
}

fn equilibria(net: &FinancialNetwork, what: &str, mode: UtilityMode, profiles: &[&str]) -> Expectation {
    exp(
        what,
        Check::Equilibria {
            mode,
            profiles: profiles.iter().map(|t| profile(net, t)).collect(),
        },
    )
}

fn example1() -> Built {
    let net = NetworkBuilder::new()
        .firm("v1", int(1))
        .firms(&["v2", "v3"])
        .firm("v4", int(1))
        .firms(&["v5"])
        .debt("v1", "v2", int(2))
        .debt("v1", "v3", int(1))
        .debt("v2", "v1", int(1))
        .debt("v3", "v5", int(1))
        .cds("v4", "v5", "v3", int(1))
        .build()?;
    let e = vec![
        payments(&net, "v1 pays v2 first", "v1:v2|v3", &[("v1", "v2", int(2)), ("v2", "v1", int(1)), ("v4", "v5", int(1))]),
        payments(&net, "v1 pays v3 first", "v1:v3|v2", &[("v1", "v3", int(1)), ("v3", "v5", int(1))]),
        payments(
            &net,
            "v1 pays proportionally",
            "v1:v2,v3",
            &[
                ("v1", "v2", ratio(4, 3)),
                ("v1", "v3", ratio(2, 3)),
                ("v2", "v1", int(1)),
                ("v3", "v5", ratio(2, 3)),
                ("v4", "v5", ratio(1, 3)),
            ],
        ),
        welfare(&net, "welfare when v2 comes first", "v1:v2|v3", TotalAssets, int(6)),
        welfare(&net, "welfare when v3 comes first", "v1:v3|v2", TotalAssets, int(4)),
        welfare(&net, "welfare under proportional payments", "v1:v2,v3", TotalAssets, int(6)),
        equilibria(&net, "equilibria are v2 first and proportional", TotalAssets, &["v1:v2|v3", "v1:v2,v3"]),
    ];
    Ok((net, e))
}

/// The three utility triples of every cell, rows `s2`, columns `s3`, one
/// block per `s1`.
fn thm4_table(eps: &Money) -> Vec<[Money; 3]> {
    let e = eps;
    let om = one() - e;
    let tm = int(2) - e;
    let h = |n: i64| ratio(n, 2);
    let over = |num: Money, den: &Money| num / den;
    let three_e = int(3) * e;
    let six_e = int(6) * e;
    vec![
        // s1 = (v6|v7)
        [int(9), h(9), h(9)],
        [over(h(9) - e, &om), h(9), over(h(7), &om)],
        [h(9), h(9), h(7)],
        [int(2) + over(int(5) * e, &om), over(int(5), &om), int(2)],
        [over(six_e.clone(), &om), over(int(3) + &three_e, &om), int(3)],
        [over(three_e.clone(), &om), over(int(3), &om), int(3)],
        [int(2), int(5), int(2)],
        [three_e.clone(), int(3) + &three_e, int(3)],
        [zero(), int(3), int(3)],
        // s1 = (v7|v6)
        [int(9), h(9), h(9)],
        [int(2) + over(int(5) * e, &om), int(2), over(int(5), &om)],
        [int(2), int(2), int(5)],
        [over(h(9) - e, &om), over(h(7), &om), h(9)],
        [over(six_e.clone(), &om), int(3), over(int(3) + &three_e, &om)],
        [three_e.clone(), int(3), int(3) + &three_e],
        [h(9), h(7), h(9)],
        [over(three_e.clone(), &om), int(3), over(int(3), &om)],
        [zero(), int(3), int(3)],
        // s1 = (v6,v7)
        [int(9), h(9), h(9)],
        [over(int(4) + &six_e, &om), over(int(4) + e, &om), over(int(5), &om)],
        [int(4), int(4), int(5)],
        [over(int(4) + &six_e, &om), over(int(5), &om), over(int(4) + e, &om)],
        [over(six_e.clone(), &om), over(int(3), &om), over(int(3), &om)],
        [over(six_e.clone(), &tm), over(int(6), &tm), over(int(6), &tm)],
        [int(4), int(5), int(4)],
        [over(six_e.clone(), &tm), over(int(6), &tm), over(int(6), &tm)],
        [zero(), int(3), int(3)],
    ]
}

pub const THM4_S1: [&str; 3] = ["v6|v7", "v7|v6", "v6,v7"];
pub const THM4_S2: [&str; 3] = ["v1|v4", "v1,v4", "v4|v1"];
pub const THM4_S3: [&str; 3] = ["v1|v5", "v1,v5", "v5|v1"];

fn thm4(m: &Money, eps: &Money) -> Built {
    let net = NetworkBuilder::new()
        .firm("v1", zero())
        .firm("v2", int(2))
        .firm("v3", int(2))
        .firms(&["v4", "v5", "v6", "v7"])
        .debt("v1", "v6", int(4))
        .debt("v1", "v7", int(4))
        .debt("v2", "v1", int(6))
        .debt("v3", "v1", int(6))
        .debt("v2", "v4", m.clone())
        .debt("v3", "v5", m.clone())
        .debt("v4", "v2", one())
        .debt("v5", "v3", one())
        .debt("v6", "v2", ratio(5, 2))
        .debt("v7", "v3", ratio(5, 2))
        .build()?;
    let table = thm4_table(eps);
    let mut e = Vec::with_capacity(28);
    let mut cells = table.into_iter();
    for s1 in THM4_S1 {
        for s2 in THM4_S2 {
            for s3 in THM4_S3 {
                let [u1, u2, u3] = cells.next().expect("27 cells");
                let prof = format!("v1:{s1} v2:{s2} v3:{s3}");
                e.push(utilities(
                    &net,
                    &format!("utilities of v1, v2, v3 at s1 = ({s1}), s2 = ({s2}), s3 = ({s3})"),
                    &prof,
                    TotalAssets,
                    &[("v1", u1), ("v2", u2), ("v3", u3)],
                ));
            }
        }
    }
    e.push(equilibria(&net, "no pure Nash equilibrium", TotalAssets, &[]));
    Ok((net, e))
}

fn thm5_prop(m: &Money) -> Built {
    let net = NetworkBuilder::new()
        .firm("v1", one())
        .firms(&["v2", "v3"])
        .debt("v1", "v2", m.clone())
        .debt("v1", "v3", int(2) * m)
        .debt("v2", "v1", m.clone())
        .build()?;
    let two_m = int(2) * m;
    let e = vec![
        payments(
            &net,
            "proportional payments",
            "",
            &[("v1", "v2", ratio(1, 2)), ("v1", "v3", one()), ("v2", "v1", ratio(1, 2))],
        ),
        welfare(&net, "proportional welfare", "", TotalAssets, int(3)),
        payments(
            &net,
            "v1 pays v2 first",
            "v1:v2|v3",
            &[("v1", "v2", m.clone()), ("v1", "v3", one()), ("v2", "v1", m.clone())],
        ),
        welfare(&net, "welfare when v2 comes first", "v1:v2|v3", TotalAssets, &two_m + int(2)),
        equilibria(&net, "v2 first is the only equilibrium", TotalAssets, &["v1:v2|v3"]),
    ];
    Ok((net, e))
}

fn thm5_path(m: &Money, n: usize) -> Built {
    let ids: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut b = NetworkBuilder::new().firm("v1", one());
    for id in &ids[1..] {
        b = b.firm(id, zero());
    }
    b = b.debt("v1", "v2", m.clone()).debt("v1", "v3", one());
    for i in 2..n - 1 {
        b = b.debt(&ids[i], &ids[i + 1], one());
    }
    let net = b.build()?;
    let k = int(n as i64);
    let prop_sw = int(2) + (&k - int(3)) / (m + one());
    let opt = &k - one();
    let e = vec![
        welfare(&net, "proportional welfare", "", TotalAssets, prop_sw),
        welfare(&net, "welfare when v3 comes first", "v1:v3|v2", TotalAssets, opt.clone()),
        exp(
            "optimal welfare",
            Check::Efficiency {
                mode: TotalAssets,
                opt: Some(opt),
                poa: None,
                pos: None,
            },
        ),
    ];
    Ok((net, e))
}

/// Shared topology of the instances with external-asset default costs.
fn alpha_instance(alpha: &Money, m: &Money, costs: (Money, Money)) -> Result<FinancialNetwork> {
    NetworkBuilder::new()
        .firm("v1", one())
        .firms(&["v2", "v3", "v4"])
        .debt("v1", "v2", int(2) * alpha)
        .debt("v1", "v3", one())
        .debt("v2", "v1", alpha.clone())
        .debt("v3", "v4", m.clone())
        .debt("v4", "v3", m.clone())
        .costs(costs.0, costs.1)
        .build()
}

fn thm6(alpha: &Money, m: &Money) -> Built {
    let net = alpha_instance(alpha, m, (zero(), zero()))?;
    let e = vec![
        exp("every profile is an equilibrium", Check::AllEquilibria { mode: TotalAssets }),
        exp(
            "price of stability is one",
            Check::Efficiency {
                mode: TotalAssets,
                opt: None,
                poa: None,
                pos: Some(Ratio::Finite(one())),
            },
        ),
    ];
    Ok((net, e))
}

fn thm7_beta(beta: &Money, m: &Money) -> Built {
    let net = NetworkBuilder::new()
        .firms(&["v1", "v2", "v3", "v4"])
        .firm("v5", one())
        .debt("v5", "v1", one())
        .debt("v1", "v2", int(2) * beta)
        .debt("v1", "v3", m.clone())
        .debt("v2", "v1", beta.clone())
        .debt("v3", "v4", m.clone())
        .debt("v4", "v3", m.clone())
        .costs(beta.clone(), beta.clone())
        .build()?;
    let b2 = beta * beta;
    let b3 = &b2 * beta;
    let two_b = int(2) * beta;
    let eq_sw = int(2) + &b2 + &two_b;
    let opt = int(2) * m + int(2) + beta;
    let e = vec![
        payments(
            &net,
            "v1 pays v2 first",
            "v1:v2|v3",
            &[("v1", "v2", &b2 + beta), ("v2", "v1", beta.clone()), ("v5", "v1", one())],
        ),
        payments(
            &net,
            "v1 pays v3 first",
            "v1:v3|v2",
            &[("v1", "v3", beta.clone()), ("v3", "v4", m.clone()), ("v4", "v3", m.clone()), ("v5", "v1", one())],
        ),
        welfare(&net, "equilibrium welfare", "v1:v2|v3", TotalAssets, eq_sw.clone()),
        welfare(&net, "optimal welfare", "v1:v3|v2", TotalAssets, opt.clone()),
        utilities(&net, "v1 when v2 comes first", "v1:v2|v3", TotalAssets, &[("v1", one() + beta)]),
        utilities(&net, "v1 when v3 comes first", "v1:v3|v2", TotalAssets, &[("v1", one())]),
        utilities(
            &net,
            "v1 under proportional payments",
            "v1:v2,v3",
            TotalAssets,
            &[("v1", one() + int(2) * &b3 / (m + &two_b - int(2) * &b3))],
        ),
        equilibria(&net, "v2 first is the only equilibrium", TotalAssets, &["v1:v2|v3"]),
        exp(
            "optimal welfare is at least the welfare when v3 comes first",
            Check::OptAtLeast {
                mode: TotalAssets,
                value: opt,
            },
        ),
    ];
    Ok((net, e))
}

fn thm7_alpha(alpha: &Money, m: &Money) -> Built {
    let net = alpha_instance(alpha, m, (alpha.clone(), zero()))?;
    let eq_sw = one() + int(2) * alpha;
    let opt = int(2) * m + one() + alpha;
    let e = vec![
        payments(
            &net,
            "v1 pays v2 first",
            "v1:v2|v3",
            &[("v1", "v2", alpha.clone()), ("v2", "v1", alpha.clone())],
        ),
        payments(
            &net,
            "v1 pays v3 first",
            "v1:v3|v2",
            &[("v1", "v3", alpha.clone()), ("v3", "v4", m.clone()), ("v4", "v3", m.clone())],
        ),
        welfare(&net, "equilibrium welfare", "v1:v2|v3", TotalAssets, eq_sw.clone()),
        welfare(&net, "optimal welfare", "v1:v3|v2", TotalAssets, opt.clone()),
        utilities(&net, "v1 when v2 comes first", "v1:v2|v3", TotalAssets, &[("v1", one() + alpha)]),
        utilities(&net, "v1 when v3 comes first", "v1:v3|v2", TotalAssets, &[("v1", one())]),
        utilities(&net, "v1 under proportional payments", "v1:v2,v3", TotalAssets, &[("v1", one())]),
        equilibria(&net, "v2 first is the only equilibrium", TotalAssets, &["v1:v2|v3"]),
        exp(
            "optimum and price of stability",
            Check::Efficiency {
                mode: TotalAssets,
                opt: Some(opt.clone()),
                poa: Some(Ratio::Finite(&opt / &eq_sw)),
                pos: Some(Ratio::Finite(&opt / &eq_sw)),
            },
        ),
    ];
    Ok((net, e))
}

fn thm8(m: &Money) -> Built {
    let net = NetworkBuilder::new()
        .firm("v1", int(3))
        .firm("v2", int(-2))
        .firm("v3", int(-2))
        .firm("v4", zero())
        .debt("v1", "v2", int(3))
        .debt("v1", "v3", int(3))
        .debt("v2", "v1", one())
        .debt("v3", "v4", m.clone())
        .debt("v4", "v3", m.clone())
        .build()?;
    let opt = int(2) * m + int(2);
    let e = vec![
        payments(
            &net,
            "v1 pays v2 first",
            "v1:v2|v3",
            &[("v1", "v2", int(3)), ("v1", "v3", one()), ("v2", "v1", one())],
        ),
        payments(
            &net,
            "v1 pays v3 first",
            "v1:v3|v2",
            &[("v1", "v3", int(3)), ("v3", "v4", m.clone()), ("v4", "v3", m.clone())],
        ),
        welfare(&net, "equilibrium welfare", "v1:v2|v3", TotalAssets, int(4)),
        welfare(&net, "optimal welfare", "v1:v3|v2", TotalAssets, opt.clone()),
        equilibria(&net, "v2 first is the only equilibrium", TotalAssets, &["v1:v2|v3"]),
        exp(
            "optimum and price of stability",
            Check::Efficiency {
                mode: TotalAssets,
                opt: Some(opt.clone()),
                poa: Some(Ratio::Finite(&opt / int(4))),
                pos: Some(Ratio::Finite(&opt / int(4))),
            },
        ),
    ];
    Ok((net, e))
}

fn thm9(m: &Money) -> Built {
    let net = NetworkBuilder::new()
        .firm("v1", one())
        .firms(&["v2", "v3", "v4"])
        .debt("v1", "v2", one())
        .debt("v1", "v3", one())
        .debt("v3", "v4", m.clone())
        .debt("v4", "v3", m.clone())
        .build()?;
    let opt = int(2) * m + int(2);
    let e = vec![
        payments(&net, "v1 pays v2 first", "v1:v2|v3", &[("v1", "v2", one())]),
        payments(
            &net,
            "v1 pays v3 first",
            "v1:v3|v2",
            &[("v1", "v3", one()), ("v3", "v4", m.clone()), ("v4", "v3", m.clone())],
        ),
        welfare(&net, "worst equilibrium welfare", "v1:v2|v3", TotalAssets, int(2)),
        exp("every profile is an equilibrium", Check::AllEquilibria { mode: TotalAssets }),
        exp(
            "price of anarchy",
            Check::Efficiency {
                mode: TotalAssets,
                opt: Some(opt),
                poa: Some(Ratio::Finite(m + one())),
                pos: Some(Ratio::Finite(one())),
            },
        ),
    ];
    Ok((net, e))
}

fn thm10_beta(beta: &Money, alpha: &Money) -> Built {
    let inv_b2 = one() / (beta * beta);
    let debt = &inv_b2 - one();
    let net = NetworkBuilder::new()
        .firm("v1", debt.clone())
        .firms(&["v2", "v3", "v4"])
        .debt("v1", "v2", debt.clone())
        .debt("v2", "v3", inv_b2.clone())
        .debt("v2", "v4", inv_b2.clone())
        .debt("v3", "v2", one())
        .debt("v4", "v3", inv_b2.clone())
        .costs(alpha.clone(), beta.clone())
        .build()?;
    let e = vec![
        payments(
            &net,
            "v2 pays v4 first",
            "v2:v4|v3",
            &[
                ("v1", "v2", debt.clone()),
                ("v2", "v4", one() / beta),
                ("v3", "v2", one()),
                ("v4", "v3", one()),
            ],
        ),
        payments(
            &net,
            "v2 pays v3 first",
            "v2:v3|v4",
            &[("v1", "v2", debt.clone()), ("v2", "v3", one() / beta), ("v3", "v2", one())],
        ),
        welfare(&net, "equity welfare when v4 comes first", "v2:v4|v3", Equity, zero()),
        welfare(&net, "equity welfare when v3 comes first", "v2:v3|v4", Equity, one() / beta - one()),
        exp("every profile is an equilibrium", Check::AllEquilibria { mode: Equity }),
        exp(
            "zero-welfare equilibrium",
            Check::Efficiency {
                mode: Equity,
                opt: None,
                poa: Some(Ratio::Infinite),
                pos: None,
            },
        ),
    ];
    Ok((net, e))
}

fn thm10_alpha(alpha: &Money, beta: &Money, m: &Money) -> Built {
    let top = m + int(2) * alpha;
    let net = NetworkBuilder::new()
        .firm("v1", one())
        .firm("v2", one())
        .firm("v3", m.clone())
        .firms(&["v4", "v5", "v6"])
        .debt("v1", "v2", int(2))
        .debt("v2", "v3", int(2))
        .debt("v2", "v6", int(2))
        .debt("v3", "v4", top.clone())
        .debt("v4", "v5", top.clone())
        .costs(alpha.clone(), beta.clone())
        .build()?;
    let mut e = if beta == &one() {
        vec![
            utilities(&net, "v5 when v3 comes first", "v2:v3|v6", Equity, &[("v5", top.clone())]),
            utilities(
                &net,
                "v5 and v6 when v6 comes first",
                "v2:v6|v3",
                Equity,
                &[("v5", alpha * m), ("v6", int(2) * alpha)],
            ),
        ]
    } else {
        vec![
            utilities(&net, "v6 when v6 comes first", "v2:v6|v3", Equity, &[("v6", alpha.clone())]),
            welfare(&net, "equity welfare when v3 comes first", "v2:v3|v6", Equity, zero()),
        ]
    };
    e.push(exp("every profile is an equilibrium", Check::AllEquilibria { mode: Equity }));
    Ok((net, e))
}

fn thm13() -> Built {
    let net = NetworkBuilder::new()
        .firm("v1", int(2))
        .firm("v2", int(-1))
        .firm("v3", ratio(-1, 2))
        .debt("v1", "v2", one())
        .debt("v1", "v3", one())
        .debt("v2", "v3", int(2))
        .build()?;
    let transformed = NetworkBuilder::new()
        .firm("v1", int(2))
        .firms(&["v2", "v3", "t"])
        .debt("v1", "v2", one())
        .debt("v1", "v3", one())
        .debt("v2", "v3", int(2))
        .debt("v2", "t", one())
        .debt("v3", "t", ratio(1, 2))
        .build()?;
    let e = vec![exp(
        "negative assets become debts to the sink t",
        Check::Transform {
            network: transformed,
        },
    )];
    Ok((net, e))
}

fn thm16() -> Built {
    let net = NetworkBuilder::new()
        .firm("v1", one())
        .firm("v2", int(-1))
        .firm("v3", zero())
        .debt("v1", "v2", one())
        .debt("v1", "v3", one())
        .build()?;
    let e = vec![
        payments(&net, "v1 pays v2 first", "v1:v2|v3", &[("v1", "v2", one())]),
        payments(&net, "v1 pays v3 first", "v1:v3|v2", &[("v1", "v3", one())]),
        welfare(&net, "equity welfare when v2 comes first", "v1:v2|v3", Equity, zero()),
        welfare(&net, "equity welfare when v3 comes first", "v1:v3|v2", Equity, one()),
        exp("every profile is an equilibrium", Check::AllEquilibria { mode: Equity }),
        exp(
            "zero-welfare equilibrium",
            Check::Efficiency {
                mode: Equity,
                opt: Some(one()),
                poa: Some(Ratio::Infinite),
                pos: Some(Ratio::Finite(one())),
            },
        ),
    ];
    Ok((net, e))
}

fn thm17(eps: &Money) -> Built {
    let net = NetworkBuilder::new()
        .firm("v1", one())
        .firm("v2", one())
        .firm("v3", int(-1))
        .firm("v4", int(-1))
        .debt("v1", "v2", one())
        .debt("v1", "v3", int(2))
        .debt("v2", "v1", one() - eps)
        .debt("v2", "v4", one())
        .build()?;
    let stable = "v1:v2|v3 v2:v1|v4";
    let best = "v1:v3|v2 v2:v1|v4";
    let e = vec![
        payments(
            &net,
            "super-strong equilibrium payments",
            stable,
            &[("v1", "v2", one()), ("v1", "v3", one() - eps), ("v2", "v1", one() - eps), ("v2", "v4", one())],
        ),
        payments(
            &net,
            "best equilibrium payments",
            best,
            &[("v1", "v3", int(2) - eps), ("v2", "v1", one() - eps), ("v2", "v4", eps.clone())],
        ),
        welfare(&net, "super-strong equilibrium welfare", stable, Equity, eps.clone()),
        welfare(&net, "best equilibrium welfare", best, Equity, one() - eps),
        exp(
            "every super-strong equilibrium has the small welfare",
            Check::StableWelfare {
                mode: Equity,
                notion: Stability::SuperStrong,
                value: eps.clone(),
            },
        ),
        exp(
            "best Nash welfare",
            Check::BestNash {
                mode: Equity,
                value: one() - eps,
            },
        ),
        exp(
            "the best equilibrium is blocked by v1 and v2 together",
            Check::Blocked {
                profile: profile(&net, best),
                mode: Equity,
                notion: Stability::SuperStrong,
                coalition: vec![0, 1],
            },
        ),
    ];
    Ok((net, e))
}

fn footnote(l: &Money) -> Built {
    let net = NetworkBuilder::new()
        .firms(&["A", "B", "C", "D"])
        .debt("A", "B", l.clone())
        .debt("A", "C", l.clone())
        .debt("B", "A", l.clone())
        .debt("B", "D", l.clone())
        .build()?;
    let prof = "A:B|C B:A|D";
    let e = vec![
        exp(
            "the greatest solution keeps the cycle",
            Check::Unfiltered {
                profile: profile(&net, prof),
                rows: matrix(&net, &[("A", "B", l.clone()), ("B", "A", l.clone())]),
            },
        ),
        payments(&net, "no money originates anywhere", prof, &[]),
    ];
    Ok((net, e))
}
