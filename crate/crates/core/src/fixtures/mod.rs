//! Named benchmark instances with their known clearing and game outcomes.

mod catalog;

use crate::clearing::{cds_clear, greatest_clearing};
use crate::error::{Error, Result};
use crate::game::{equity_invariance_check, report_from_table, GameReport, Ratio, Stability, UtilityMode, UtilityTable};
use crate::model::{nominal_liabilities, FinancialNetwork};
use crate::money::{self, Money};
use crate::strategy::{Strategy, StrategyProfile, StrategySpace, DEFAULT_STRATEGY_CAP};
use crate::transform::transform_negative_assets;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub use catalog::NAMES;

/// Documented range of one fixture parameter.
#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: Money,
    pub range: Range,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Range {
    /// `lo < x < hi`.
    Open(Money, Money),
    /// `lo < x ≤ hi`.
    OpenClosed(Money, Money),
    /// `x > lo`.
    Above(Money),
    /// Integer `x ≥ lo`.
    IntegerAtLeast(Money),
    /// `x ∈ {a, b}`.
    Either(Money, Money),
}

impl Range {
    pub fn contains(&self, x: &Money) -> bool {
        match self {
            Range::Open(lo, hi) => x > lo && x < hi,
            Range::OpenClosed(lo, hi) => x > lo && x <= hi,
            Range::Above(lo) => x > lo,
            Range::IntegerAtLeast(lo) => x.is_integer() && x >= lo,
            Range::Either(a, b) => x == a || x == b,
        }
    }

    pub fn describe(&self) -> String {
        let f = money::fmt;
        match self {
            Range::Open(lo, hi) => format!("in ({}, {})", f(lo), f(hi)),
            Range::OpenClosed(lo, hi) => format!("in ({}, {}]", f(lo), f(hi)),
            Range::Above(lo) => format!("> {}", f(lo)),
            Range::IntegerAtLeast(lo) => format!("an integer >= {}", f(lo)),
            Range::Either(a, b) => format!("{} or {}", f(a), f(b)),
        }
    }
}

/// One claim about a fixture.
#[derive(Debug, Clone)]
pub struct Expectation {
    pub what: String,
    pub check: Check,
}

#[derive(Debug, Clone)]
pub enum Check {
    /// Full payment matrix of the clearing result.
    Payments { profile: StrategyProfile, rows: Vec<Vec<Money>> },
    /// Greatest clearing payments before removing unoriginated flow.
    Unfiltered { profile: StrategyProfile, rows: Vec<Vec<Money>> },
    /// Utilities of selected firms.
    Utilities {
        profile: StrategyProfile,
        mode: UtilityMode,
        values: Vec<(usize, Money)>,
    },
    Welfare {
        profile: StrategyProfile,
        mode: UtilityMode,
        value: Money,
    },
    /// The exact set of Nash equilibria (empty for none).
    Equilibria { mode: UtilityMode, profiles: Vec<StrategyProfile> },
    /// Every profile is a Nash equilibrium.
    AllEquilibria { mode: UtilityMode },
    /// Optimum and equilibrium ratios over all profiles.
    Efficiency {
        mode: UtilityMode,
        opt: Option<Money>,
        poa: Option<Ratio>,
        pos: Option<Ratio>,
    },
    /// Lower bound on the optimal welfare.
    OptAtLeast { mode: UtilityMode, value: Money },
    /// Welfare of the best Nash equilibrium.
    BestNash { mode: UtilityMode, value: Money },
    /// Coalition-stable profiles exist and all have this welfare.
    StableWelfare {
        mode: UtilityMode,
        notion: Stability,
        value: Money,
    },
    /// A Nash equilibrium that the given coalition blocks.
    Blocked {
        profile: StrategyProfile,
        mode: UtilityMode,
        notion: Stability,
        coalition: Vec<usize>,
    },
    /// Result of the negative-assets transformation.
    Transform { network: FinancialNetwork },
    /// Same equity at the greatest and least clearing payments.
    EquityInvariant { profile: StrategyProfile },
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    /// Resolved parameters, including derived ones.
    pub params: BTreeMap<String, Money>,
    pub network: FinancialNetwork,
    pub expectations: Vec<Expectation>,
}

/// Builds a named fixture; unspecified parameters take their defaults.
pub fn make_fixture(name: &str, params: &BTreeMap<String, Money>) -> Result<Fixture> {
    let specs = catalog::param_specs(name).ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    for key in params.keys() {
        if !specs.iter().any(|s| s.name == key) {
            return Err(Error::ParamOutOfRange {
                name: key.clone(),
                value: money::fmt(&params[key]),
                expected: format!("no such parameter for {name}"),
            });
        }
    }
    let mut resolved = BTreeMap::new();
    for spec in &specs {
        let v = params.get(spec.name).cloned().unwrap_or_else(|| spec.default.clone());
        if !spec.range.contains(&v) {
            return Err(Error::ParamOutOfRange {
                name: spec.name.to_string(),
                value: money::fmt(&v),
                expected: spec.range.describe(),
            });
        }
        resolved.insert(spec.name.to_string(), v);
    }
    catalog::build(name, resolved)
}

pub fn default_fixture(name: &str) -> Result<Fixture> {
    make_fixture(name, &BTreeMap::new())
}

/// Parses `key=value` pairs such as `M=100` or `beta=1/3`.
pub fn parse_params<'a, I: IntoIterator<Item = &'a str>>(pairs: I) -> Result<BTreeMap<String, Money>> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {pair:?}")))?;
        let value = money::parse(v.trim()).map_err(|e| Error::Parse(e.0))?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

/// Profile from a compact form: `"v1:v2|v3 v2:v1,v4"` gives v1 the classes
/// `{v2}, {v3}` and v2 the single class `{v1, v4}`. Unlisted firms pay
/// proportionally.
pub fn profile(net: &FinancialNetwork, text: &str) -> StrategyProfile {
    let mut p = StrategyProfile::proportional(net);
    for part in text.split_whitespace() {
        let (firm, classes) = part.split_once(':').expect("firm:classes");
        let i = net.index_of(firm).expect("known firm");
        let classes = classes
            .split('|')
            .map(|c| c.split(',').map(|id| net.index_of(id).expect("known firm")).collect())
            .collect();
        p.strategies[i] = Strategy::new(classes);
    }
    p.check(net).expect("valid fixture profile");
    p
}

/// Dense payment matrix from `(from, to, amount)` entries.
pub fn matrix(net: &FinancialNetwork, entries: &[(&str, &str, Money)]) -> Vec<Vec<Money>> {
    let n = net.n();
    let mut m = vec![vec![money::zero(); n]; n];
    for (from, to, x) in entries {
        m[net.index_of(from).expect("known firm")][net.index_of(to).expect("known firm")] = x.clone();
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub what: String,
    pub pass: bool,
    pub detail: String,
}

struct Analyses<'a> {
    net: &'a FinancialNetwork,
    cache: Vec<((UtilityMode, Option<Stability>), GameReport)>,
}

impl<'a> Analyses<'a> {
    fn get(&mut self, mode: UtilityMode, notion: Option<Stability>) -> Result<&GameReport> {
        let key = (mode, notion);
        if let Some(pos) = self.cache.iter().position(|(k, _)| *k == key) {
            return Ok(&self.cache[pos].1);
        }
        let space = StrategySpace::full(self.net, DEFAULT_STRATEGY_CAP)?;
        let table = UtilityTable::build(self.net, space, mode, crate::game::DEFAULT_PROFILE_CAP, None)?;
        let report = report_from_table(&table, notion.map(|s| (s, self.net.n())));
        self.cache.push((key, report));
        Ok(&self.cache.last().expect("just pushed").1)
    }
}

fn show_rows(rows: &[Vec<Money>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(money::fmt).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn ratio_text(r: &Option<Ratio>) -> String {
    r.as_ref().map_or("none".into(), |r| r.to_string())
}

/// Runs the solver against every expectation of the fixture.
pub fn verify_fixture(fx: &Fixture) -> Result<Vec<Outcome>> {
    let net = &fx.network;
    let mut analyses = Analyses { net, cache: Vec::new() };
    let mut out = Vec::new();
    for exp in &fx.expectations {
        let (pass, detail) = match &exp.check {
            Check::Payments { profile, rows } => {
                let res = cds_clear(net, profile)?;
                (&res.payments == rows && res.converged, show_rows(&res.payments))
            }
            Check::Unfiltered { profile, rows } => {
                let res = greatest_clearing(net, &nominal_liabilities(net), profile, false)?;
                (&res.payments == rows, show_rows(&res.payments))
            }
            Check::Utilities { profile, mode, values } => {
                let res = cds_clear(net, profile)?;
                let u = crate::game::utilities(net, &res, *mode);
                let pass = values.iter().all(|(i, v)| &u[*i] == v);
                let got = values.iter().map(|(i, _)| money::fmt(&u[*i])).collect::<Vec<_>>().join(", ");
                (pass, got)
            }
            Check::Welfare { profile, mode, value } => {
                let res = cds_clear(net, profile)?;
                let sw = money::sum(&crate::game::utilities(net, &res, *mode));
                (&sw == value, money::fmt(&sw))
            }
            Check::Equilibria { mode, profiles } => {
                let report = analyses.get(*mode, None)?;
                let mut got: Vec<StrategyProfile> = report.equilibria().into_iter().cloned().collect();
                let mut want = profiles.clone();
                got.sort();
                want.sort();
                let labels = got.iter().map(|p| p.label(net)).collect::<Vec<_>>();
                (got == want, format!("{} equilibria: [{}]", got.len(), labels.join("; ")))
            }
            Check::AllEquilibria { mode } => {
                let report = analyses.get(*mode, None)?;
                let n_eq = report.nash.equilibria.len();
                (n_eq == report.profiles_examined, format!("{n_eq} of {}", report.profiles_examined))
            }
            Check::Efficiency { mode, opt, poa, pos } => {
                let report = analyses.get(*mode, None)?;
                let pass = opt.as_ref().map_or(true, |o| report.opt.as_ref() == Some(o))
                    && poa.as_ref().map_or(true, |r| report.nash.poa.as_ref() == Some(r))
                    && pos.as_ref().map_or(true, |r| report.nash.pos.as_ref() == Some(r));
                let detail = format!(
                    "OPT {}, PoA {}, PoS {}",
                    report.opt.as_ref().map_or("none".into(), money::fmt),
                    ratio_text(&report.nash.poa),
                    ratio_text(&report.nash.pos)
                );
                (pass, detail)
            }
            Check::OptAtLeast { mode, value } => {
                let report = analyses.get(*mode, None)?;
                let opt = report.opt.clone();
                (opt.as_ref().map_or(false, |o| o >= value), opt.map_or("none".into(), |o| money::fmt(&o)))
            }
            Check::BestNash { mode, value } => {
                let report = analyses.get(*mode, None)?;
                let best = report.nash.best.clone();
                (best.as_ref() == Some(value), best.map_or("none".into(), |b| money::fmt(&b)))
            }
            Check::StableWelfare { mode, notion, value } => {
                let report = analyses.get(*mode, Some(*notion))?;
                let (_, _, eff) = report.coalition.as_ref().expect("coalition analysis");
                let sws: Vec<Money> = eff
                    .equilibria
                    .iter()
                    .filter_map(|&i| report.row(i).map(|r| r.welfare.clone()))
                    .collect();
                let pass = !sws.is_empty() && sws.iter().all(|s| s == value);
                let shown = sws.iter().map(money::fmt).collect::<Vec<_>>().join(", ");
                (pass, format!("{} stable profiles, welfare [{shown}]", sws.len()))
            }
            Check::Blocked {
                profile,
                mode,
                notion,
                coalition,
            } => {
                let space = StrategySpace::full(net, DEFAULT_STRATEGY_CAP)?;
                let idx = space.index_of(profile).expect("profile in space") as usize;
                let table = UtilityTable::build(net, space, *mode, crate::game::DEFAULT_PROFILE_CAP, None)?;
                let nash = table.is_nash(idx);
                let witness = table.blocking_coalition(idx, *notion, net.n());
                let pass = nash && witness.as_ref().map_or(false, |w| &w.firms == coalition);
                let detail = format!(
                    "nash {nash}, blocked by {}",
                    witness.map_or("nobody".into(), |w| w.label(net))
                );
                (pass, detail)
            }
            Check::Transform { network } => {
                let t = transform_negative_assets(net);
                (&t.network == network, t.network.to_raw().to_json())
            }
            Check::EquityInvariant { profile } => {
                let ok = equity_invariance_check(net, profile)?;
                (ok, ok.to_string())
            }
        };
        out.push(Outcome {
            what: exp.what.clone(),
            pass,
            detail,
        });
    }
    Ok(out)
}

fn rows_json(rows: &[Vec<Money>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(money::fmt(x))).collect()))
            .collect(),
    )
}

impl Expectation {
    pub fn to_json(&self, net: &FinancialNetwork) -> Value {
        let body = match &self.check {
            Check::Payments { profile, rows } => json!({
                "kind": "payments", "profile": profile.to_json(net), "payments": rows_json(rows)
            }),
            Check::Unfiltered { profile, rows } => json!({
                "kind": "unfiltered_payments", "profile": profile.to_json(net), "payments": rows_json(rows)
            }),
            Check::Utilities { profile, mode, values } => json!({
                "kind": "utilities", "profile": profile.to_json(net), "utility": mode.to_string(),
                "values": values.iter().map(|(i, v)| (net.id(*i).to_string(), Value::String(money::fmt(v))))
                    .collect::<serde_json::Map<_, _>>()
            }),
            Check::Welfare { profile, mode, value } => json!({
                "kind": "welfare", "profile": profile.to_json(net), "utility": mode.to_string(),
                "value": money::fmt(value)
            }),
            Check::Equilibria { mode, profiles } => json!({
                "kind": "equilibria", "utility": mode.to_string(),
                "profiles": profiles.iter().map(|p| p.to_json(net)).collect::<Vec<_>>()
            }),
            Check::AllEquilibria { mode } => json!({ "kind": "all_equilibria", "utility": mode.to_string() }),
            Check::Efficiency { mode, opt, poa, pos } => json!({
                "kind": "efficiency", "utility": mode.to_string(),
                "opt": opt.as_ref().map(money::fmt),
                "poa": poa.as_ref().map(|r| r.to_string()),
                "pos": pos.as_ref().map(|r| r.to_string())
            }),
            Check::OptAtLeast { mode, value } => json!({
                "kind": "opt_at_least", "utility": mode.to_string(), "value": money::fmt(value)
            }),
            Check::BestNash { mode, value } => json!({
                "kind": "best_nash_welfare", "utility": mode.to_string(), "value": money::fmt(value)
            }),
            Check::StableWelfare { mode, notion, value } => json!({
                "kind": "stable_welfare", "utility": mode.to_string(), "notion": notion,
                "value": money::fmt(value)
            }),
            Check::Blocked { profile, mode, notion, coalition } => json!({
                "kind": "blocked", "profile": profile.to_json(net), "utility": mode.to_string(),
                "notion": notion, "coalition": coalition.iter().map(|&i| net.id(i)).collect::<Vec<_>>()
            }),
            Check::Transform { network } => json!({
                "kind": "transform",
                "network": serde_json::to_value(network.to_raw()).expect("serializable")
            }),
            Check::EquityInvariant { profile } => json!({
                "kind": "equity_invariant", "profile": profile.to_json(net)
            }),
        };
        let mut body = body;
        body["what"] = Value::String(self.what.clone());
        body
    }
}

impl Fixture {
    pub fn param(&self, name: &str) -> &Money {
        &self.params[name]
    }

    /// Expectations sidecar: parameters plus every expectation.
    pub fn expectations_json(&self) -> Value {
        json!({
            "fixture": self.name,
            "summary": self.summary,
            "params": self.params.iter().map(|(k, v)| (k.clone(), Value::String(money::fmt(v))))
                .collect::<serde_json::Map<_, _>>(),
            "expectations": self.expectations.iter().map(|e| e.to_json(&self.network)).collect::<Vec<_>>()
        })
    }
}
