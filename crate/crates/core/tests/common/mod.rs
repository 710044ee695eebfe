#![allow(dead_code)]

use fennec::clearing::{cds_clear, greatest_clearing, mcp_clear, proper_filter, Extreme};
use fennec::game::{equity_invariance_check, report_from_table, Stability, UtilityMode, UtilityTable};
use fennec::model::{nominal_liabilities, NetworkBuilder};
use fennec::money::{one, ratio, zero, Money};
use fennec::strategy::{StrategySpace, DEFAULT_STRATEGY_CAP};
use fennec::verify::verify_clearing;
use fennec::{FinancialNetwork, StrategyProfile};
use num::{Signed, Zero};
use proptest::prelude::*;

pub const PROFILE_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_n: usize,
    /// Largest number of creditors per firm.
    pub max_out: usize,
    pub negative_externals: bool,
}

fn small_rational(lo: i64, hi: i64) -> impl Strategy<Value = Money> {
    (lo..=hi, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
}

fn cost() -> impl Strategy<Value = Money> {
    prop_oneof![
        Just(zero()),
        Just(ratio(1, 4)),
        Just(ratio(1, 2)),
        Just(ratio(2, 3)),
        Just(one()),
        Just(one()),
    ]
}

/// Random CDS-free networks with small rational data.
pub fn network(shape: Shape) -> impl Strategy<Value = FinancialNetwork> {
    (2..=shape.max_n).prop_flat_map(move |n| {
        let lo = if shape.negative_externals { -3 } else { 0 };
        let externals = prop::collection::vec(small_rational(lo, 4), n);
        let max_out = shape.max_out.min(n - 1);
        let creditors = (0..=max_out)
            .prop_flat_map(move |k| {
                let k = if k == 0 { 0 } else { max_out.min(k + 1) };
                prop::sample::subsequence((1..n).collect::<Vec<_>>(), k)
            })
            .prop_flat_map(|offsets| {
                let len = offsets.len();
                (Just(offsets), prop::collection::vec(small_rational(1, 6), len))
            })
            .prop_map(|(offsets, amounts)| offsets.into_iter().zip(amounts).collect::<Vec<_>>());
        let edges = prop::collection::vec(creditors, n);
        (externals, edges, cost(), cost()).prop_map(move |(e, edges, alpha, beta)| {
            let ids: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
            let mut b = NetworkBuilder::new();
            for (i, x) in e.iter().enumerate() {
                b = b.firm(&ids[i], x.clone());
            }
            for (i, out) in edges.iter().enumerate() {
                for (offset, amount) in out {
                    b = b.debt(&ids[i], &ids[(i + offset) % n], amount.clone());
                }
            }
            b.costs(alpha, beta).build().expect("generated network is valid")
        })
    })
}

/// A network together with one profile chosen uniformly from its space.
pub fn network_and_profile(shape: Shape) -> impl Strategy<Value = (FinancialNetwork, StrategyProfile)> {
    (network(shape), any::<u64>()).prop_map(|(net, seed)| {
        let space = StrategySpace::full(&net, DEFAULT_STRATEGY_CAP).unwrap();
        let p = space.profile(seed as u128 % space.profile_count());
        (net, p)
    })
}

pub fn with_costs(net: &FinancialNetwork, alpha: Money, beta: Money) -> FinancialNetwork {
    let mut out = net.clone();
    out.costs.alpha = alpha;
    out.costs.beta = beta;
    out
}

pub fn without_negative_externals(net: &FinancialNetwork) -> FinancialNetwork {
    let mut out = net.clone();
    for f in out.firms.iter_mut() {
        f.external = f.external.abs();
    }
    out
}

fn table(net: &FinancialNetwork, mode: UtilityMode) -> UtilityTable<'_> {
    let space = StrategySpace::full(net, DEFAULT_STRATEGY_CAP).unwrap();
    UtilityTable::build(net, space, mode, PROFILE_CAP, Some(1)).unwrap()
}

/// Equity utilities: every profile is a Nash equilibrium.
pub fn equity_all_nash(net: &FinancialNetwork) -> Result<(), String> {
    let t = table(net, UtilityMode::Equity);
    for idx in 0..t.len() {
        if t.rows[idx].is_some() {
            if let Some(d) = t.improving_deviation(idx) {
                return Err(format!("profile {idx} not Nash: {}", d.label(net)));
            }
        }
    }
    Ok(())
}

/// Equity utilities: no coalition of any size blocks any profile strongly.
pub fn equity_all_strong(net: &FinancialNetwork) -> Result<(), String> {
    let t = table(net, UtilityMode::Equity);
    for idx in 0..t.len() {
        if let Some(d) = t.blocking_coalition(idx, Stability::Strong, net.n()) {
            return Err(format!("profile {idx} blocked: {}", d.label(net)));
        }
    }
    Ok(())
}

/// With β = 1 and nonnegative externals, equity welfare is
/// `Σe − (1−α) Σ_{defaulting} e` and the price of anarchy is at most `1/α`.
pub fn beta_one_welfare(net: &FinancialNetwork) -> Result<(), String> {
    assert!(net.costs.beta == one() && net.firms.iter().all(|f| !f.external.is_negative()));
    let space = StrategySpace::full(net, DEFAULT_STRATEGY_CAP).unwrap();
    let alpha = &net.costs.alpha;
    for idx in 0..space.profile_count() {
        let p = space.profile(idx);
        let res = cds_clear(net, &p).map_err(|e| e.to_string())?;
        let sw: Money = res.equities(net).iter().sum();
        let mut oracle = zero();
        for (i, f) in net.firms.iter().enumerate() {
            let assets: Money = &f.external + (0..net.n()).map(|j| &res.payments[j][i]).sum::<Money>();
            let owed: Money = net.debts.iter().filter(|d| d.from == i).map(|d| &d.amount).sum();
            oracle += if assets < owed { alpha * &f.external } else { f.external.clone() };
        }
        if sw != oracle {
            return Err(format!("profile {idx}: welfare {sw} vs {oracle}"));
        }
    }
    if alpha.is_positive() {
        let t = table(net, UtilityMode::Equity);
        let report = report_from_table(&t, None);
        if let (Some(opt), Some(worst)) = (&report.opt, &report.nash.worst) {
            if opt * alpha > *worst {
                return Err(format!("PoA {opt}/{worst} above 1/{alpha}"));
            }
        }
    }
    Ok(())
}

fn monotone(history: &[Vec<Money>], down: bool) -> bool {
    history.windows(2).all(|w| {
        w[0].iter().zip(&w[1]).all(|(a, b)| if down { b <= a } else { b >= a })
    })
}

/// Core clearing properties for one profile.
pub fn clearing_core(net: &FinancialNetwork, p: &StrategyProfile) -> Result<(), String> {
    let err = |e: fennec::Error| e.to_string();
    let max = mcp_clear(net, p, Extreme::Maximal).map_err(err)?;
    let min = mcp_clear(net, p, Extreme::Minimal).map_err(err)?;
    for (name, res) in [("maximal", &max), ("minimal", &min)] {
        let report = verify_clearing(net, p, res);
        if !report.ok() {
            return Err(format!("{name} fails verification: {:?}", report.violations));
        }
    }
    if !monotone(&max.history, true) {
        return Err("maximal iterates are not decreasing".into());
    }
    if !monotone(&min.history, false) {
        return Err("minimal iterates are not increasing".into());
    }
    for i in 0..net.n() {
        for j in 0..net.n() {
            if max.payments[i][j] < min.payments[i][j] {
                return Err(format!("maximal below minimal at ({i}, {j})"));
            }
        }
    }
    let raw = greatest_clearing(net, &nominal_liabilities(net), p, false).map_err(err)?;
    if !monotone(&raw.history, true) {
        return Err("greatest-solution iterates are not decreasing".into());
    }
    let once = proper_filter(&raw.payments, net);
    if proper_filter(&once, net) != once {
        return Err("proper_filter is not idempotent".into());
    }
    if net.costs.is_none() && !equity_invariance_check(net, p).map_err(err)? {
        return Err("equities differ between clearing vectors".into());
    }
    if max.payments.iter().flatten().any(|x| x.is_negative()) || !max.payments.iter().enumerate().all(|(i, r)| r[i].is_zero()) {
        return Err("malformed payment matrix".into());
    }
    Ok(())
}
