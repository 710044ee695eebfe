//! Utilities, equilibria and efficiency ratios over the full strategy space.

use crate::clearing::{cds_clear, greatest_clearing, mcp_clear, ClearingResult, Extreme};
use crate::error::{Error, Result};
use crate::model::{nominal_liabilities, FinancialNetwork};
use crate::money::{self, Money};
use crate::strategy::{Strategy, StrategyProfile, StrategySpace, DEFAULT_STRATEGY_CAP};
use num::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Default cap on the number of profiles `analyze` will enumerate.
pub const DEFAULT_PROFILE_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityMode {
    /// `a_i = e_i + Σ_j p_ji`.
    TotalAssets,
    /// `max{0, a_i − L_i}`.
    Equity,
}

impl FromStr for UtilityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "assets" | "total_assets" | "total-assets" => Ok(UtilityMode::TotalAssets),
            "equity" => Ok(UtilityMode::Equity),
            _ => Err(Error::Parse(format!("unknown utility mode {s:?}"))),
        }
    }
}

impl fmt::Display for UtilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UtilityMode::TotalAssets => "assets",
            UtilityMode::Equity => "equity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    /// No coalition can make every member strictly better off.
    Strong,
    /// No coalition can make one member strictly better off and none worse.
    SuperStrong,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Strong => "strong",
            Stability::SuperStrong => "super-strong",
        })
    }
}

impl FromStr for Stability {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(Stability::Strong),
            "super-strong" | "super_strong" | "superstrong" => Ok(Stability::SuperStrong),
            _ => Err(Error::Parse(format!("unknown stability notion {s:?}"))),
        }
    }
}

/// Ratio `OPT / SW`, infinite when a positive optimum meets zero welfare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ratio {
    Finite(Money),
    Infinite,
}

impl Ratio {
    pub fn of(opt: &Money, sw: &Money) -> Ratio {
        if sw.is_positive() {
            Ratio::Finite(opt / sw)
        } else if opt.is_positive() {
            Ratio::Infinite
        } else {
            Ratio::Finite(Money::one())
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(m) => f.write_str(&money::fmt(m)),
            Ratio::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Per-firm utilities of a clearing result.
pub fn utilities(net: &FinancialNetwork, result: &ClearingResult, mode: UtilityMode) -> Vec<Money> {
    match mode {
        UtilityMode::TotalAssets => result.assets(net),
        UtilityMode::Equity => result.equities(net),
    }
}

fn converged_clearing(net: &FinancialNetwork, profile: &StrategyProfile) -> Result<ClearingResult> {
    let res = cds_clear(net, profile)?;
    if res.converged {
        Ok(res)
    } else {
        Err(Error::NonConvergentProfile(profile.label(net)))
    }
}

pub fn utility(net: &FinancialNetwork, profile: &StrategyProfile, firm: usize, mode: UtilityMode) -> Result<Money> {
    let res = converged_clearing(net, profile)?;
    Ok(utilities(net, &res, mode).swap_remove(firm))
}

pub fn social_welfare(net: &FinancialNetwork, profile: &StrategyProfile, mode: UtilityMode) -> Result<Money> {
    let res = converged_clearing(net, profile)?;
    Ok(money::sum(&utilities(net, &res, mode)))
}

/// A joint change of strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub firms: Vec<usize>,
    pub strategies: Vec<Strategy>,
}

impl Deviation {
    pub fn apply(&self, profile: &StrategyProfile) -> StrategyProfile {
        let mut out = profile.clone();
        for (&f, s) in self.firms.iter().zip(&self.strategies) {
            out.strategies[f] = s.clone();
        }
        out
    }

    pub fn label(&self, net: &FinancialNetwork) -> String {
        self.firms
            .iter()
            .zip(&self.strategies)
            .map(|(&f, s)| format!("{}:{}", net.id(f), s.label(net)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Utilities of every profile of a strategy space, computed once.
pub struct UtilityTable<'a> {
    pub net: &'a FinancialNetwork,
    pub space: StrategySpace,
    pub mode: UtilityMode,
    /// `None` for profiles whose CDS iteration did not converge.
    pub rows: Vec<Option<Vec<Money>>>,
    strides: Vec<usize>,
}

impl<'a> UtilityTable<'a> {
    /// Clears every profile of `space`; `jobs` limits the worker threads.
    pub fn build(
        net: &'a FinancialNetwork,
        space: StrategySpace,
        mode: UtilityMode,
        profile_cap: u128,
        jobs: Option<usize>,
    ) -> Result<Self> {
        let count = space.profile_count();
        if count > profile_cap {
            return Err(Error::EnumerationCapExceeded { count, cap: profile_cap });
        }
        let eval = |idx: usize| -> Result<Option<Vec<Money>>> {
            let res = cds_clear(net, &space.profile(idx as u128))?;
            Ok(res.converged.then(|| utilities(net, &res, mode)))
        };
        let run = || (0..count as usize).into_par_iter().map(eval).collect::<Result<Vec<_>>>();
        let rows = match jobs {
            Some(j) => rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Parse(e.to_string()))?
                .install(run)?,
            None => run()?,
        };
        let mut strides = vec![1usize; space.per_firm.len()];
        for i in (0..strides.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * space.per_firm[i + 1].len();
        }
        Ok(UtilityTable {
            net,
            space,
            mode,
            rows,
            strides,
        })
    }

    pub fn full(net: &'a FinancialNetwork, mode: UtilityMode) -> Result<Self> {
        let space = StrategySpace::full(net, DEFAULT_STRATEGY_CAP)?;
        Self::build(net, space, mode, DEFAULT_PROFILE_CAP, None)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn welfare(&self, idx: usize) -> Option<Money> {
        self.rows[idx].as_ref().map(money::sum)
    }

    fn moved(&self, idx: usize, firms: &[usize], picks: &[usize]) -> usize {
        let current = self.space.picks_of(idx as u128);
        let mut out = idx;
        for (&f, &p) in firms.iter().zip(picks) {
            out = out + p * self.strides[f] - current[f] * self.strides[f];
        }
        out
    }

    fn deviation(&self, firms: &[usize], picks: &[usize]) -> Deviation {
        Deviation {
            firms: firms.to_vec(),
            strategies: firms
                .iter()
                .zip(picks)
                .map(|(&f, &p)| self.space.per_firm[f][p].clone())
                .collect(),
        }
    }

    /// First strictly improving unilateral deviation from profile `idx`,
    /// scanning firms in index order and strategies in canonical order.
    pub fn improving_deviation(&self, idx: usize) -> Option<Deviation> {
        let base = self.rows[idx].as_ref()?;
        let current = self.space.picks_of(idx as u128);
        for f in self.space.strategic_firms() {
            for p in 0..self.space.per_firm[f].len() {
                if p == current[f] {
                    continue;
                }
                let other = self.moved(idx, &[f], &[p]);
                if let Some(u) = &self.rows[other] {
                    if u[f] > base[f] {
                        return Some(self.deviation(&[f], &[p]));
                    }
                }
            }
        }
        None
    }

    pub fn is_nash(&self, idx: usize) -> bool {
        self.rows[idx].is_some() && self.improving_deviation(idx).is_none()
    }

    /// First blocking coalition of at most `max_coalition` firms, smaller
    /// coalitions first.
    pub fn blocking_coalition(&self, idx: usize, notion: Stability, max_coalition: usize) -> Option<Deviation> {
        let base = self.rows[idx].as_ref()?;
        let current = self.space.picks_of(idx as u128);
        let strategic = self.space.strategic_firms();
        for size in 1..=max_coalition.min(strategic.len()) {
            for coalition in subsets(&strategic, size) {
                let radices: Vec<usize> = coalition.iter().map(|&f| self.space.per_firm[f].len()).collect();
                let mut picks = vec![0usize; size];
                loop {
                    let changed = coalition.iter().zip(&picks).any(|(&f, &p)| p != current[f]);
                    if changed {
                        let other = self.moved(idx, &coalition, &picks);
                        if let Some(u) = &self.rows[other] {
                            let blocks = match notion {
                                Stability::Strong => coalition.iter().all(|&f| u[f] > base[f]),
                                Stability::SuperStrong => {
                                    coalition.iter().all(|&f| u[f] >= base[f])
                                        && coalition.iter().any(|&f| u[f] > base[f])
                                }
                            };
                            if blocks {
                                return Some(self.deviation(&coalition, &picks));
                            }
                        }
                    }
                    if !advance(&mut picks, &radices) {
                        break;
                    }
                }
            }
        }
        None
    }
}

fn advance(picks: &mut [usize], radices: &[usize]) -> bool {
    for k in (0..picks.len()).rev() {
        picks[k] += 1;
        if picks[k] < radices[k] {
            return true;
        }
        picks[k] = 0;
    }
    false
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for k in start..items.len() {
            cur.push(items[k]);
            rec(items, size, k + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut cur, &mut out);
    out
}

/// Whether `profile` is a Nash equilibrium, with the first improving
/// deviation otherwise.
pub fn is_nash(net: &FinancialNetwork, profile: &StrategyProfile, mode: UtilityMode) -> Result<(bool, Option<Deviation>)> {
    let space = StrategySpace::full(net, DEFAULT_STRATEGY_CAP)?;
    let base = utilities(net, &converged_clearing(net, profile)?, mode);
    for f in space.strategic_firms() {
        for s in &space.per_firm[f] {
            if s == &profile.strategies[f] {
                continue;
            }
            let dev = profile.with(f, s.clone());
            let u = utility(net, &dev, f, mode)?;
            if u > base[f] {
                let d = Deviation {
                    firms: vec![f],
                    strategies: vec![s.clone()],
                };
                return Ok((false, Some(d)));
            }
        }
    }
    Ok((true, None))
}

/// Coalition stability of one profile against coalitions of at most
/// `max_coalition` firms.
pub fn coalition_stable(
    net: &FinancialNetwork,
    profile: &StrategyProfile,
    mode: UtilityMode,
    notion: Stability,
    max_coalition: usize,
    profile_cap: u128,
) -> Result<(bool, Option<Deviation>)> {
    let space = StrategySpace::full(net, DEFAULT_STRATEGY_CAP)?;
    let idx = space
        .index_of(profile)
        .ok_or_else(|| Error::Parse("profile is not in the strategy space".into()))?;
    let table = UtilityTable::build(net, space, mode, profile_cap, None)?;
    if table.rows[idx as usize].is_none() {
        return Err(Error::NonConvergentProfile(profile.label(net)));
    }
    let witness = table.blocking_coalition(idx as usize, notion, max_coalition);
    Ok((witness.is_none(), witness))
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub profile_cap: u128,
    pub strategy_cap: u128,
    pub jobs: Option<usize>,
    /// Coalition notion and maximum coalition size to check in addition to
    /// Nash stability.
    pub coalition: Option<(Stability, usize)>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            profile_cap: DEFAULT_PROFILE_CAP,
            strategy_cap: DEFAULT_STRATEGY_CAP,
            jobs: None,
            coalition: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileRow {
    pub index: usize,
    pub profile: StrategyProfile,
    pub utilities: Vec<Money>,
    pub welfare: Money,
    pub nash: bool,
    /// Coalition stability, when requested.
    pub stable: Option<bool>,
}

/// Welfare summary over a set of equilibria.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Efficiency {
    pub equilibria: Vec<usize>,
    pub worst: Option<Money>,
    pub best: Option<Money>,
    /// `None` when there is no equilibrium.
    pub poa: Option<Ratio>,
    pub pos: Option<Ratio>,
}

impl Efficiency {
    fn over(rows: &[ProfileRow], opt: Option<&Money>, member: impl Fn(&ProfileRow) -> bool) -> Self {
        let eq: Vec<&ProfileRow> = rows.iter().filter(|r| member(r)).collect();
        let worst = eq.iter().map(|r| &r.welfare).min().cloned();
        let best = eq.iter().map(|r| &r.welfare).max().cloned();
        let ratio = |sw: &Option<Money>| match (opt, sw) {
            (Some(o), Some(s)) => Some(Ratio::of(o, s)),
            _ => None,
        };
        Efficiency {
            equilibria: eq.iter().map(|r| r.index).collect(),
            poa: ratio(&worst),
            pos: ratio(&best),
            worst,
            best,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GameReport {
    pub mode: UtilityMode,
    pub firms: Vec<String>,
    pub strategic_firms: Vec<usize>,
    pub profiles_examined: usize,
    /// Converged profiles in canonical order.
    pub rows: Vec<ProfileRow>,
    pub nonconvergent: Vec<StrategyProfile>,
    pub opt: Option<Money>,
    pub opt_profile: Option<usize>,
    pub nash: Efficiency,
    /// Present when a coalition check was requested.
    pub coalition: Option<(Stability, usize, Efficiency)>,
}

impl GameReport {
    pub fn row(&self, index: usize) -> Option<&ProfileRow> {
        self.rows.iter().find(|r| r.index == index)
    }

    pub fn equilibria(&self) -> Vec<&StrategyProfile> {
        self.nash
            .equilibria
            .iter()
            .filter_map(|&i| self.row(i).map(|r| &r.profile))
            .collect()
    }
}

/// Enumerates all strategy profiles and reports equilibria and efficiency.
pub fn analyze(net: &FinancialNetwork, mode: UtilityMode, options: &AnalyzeOptions) -> Result<GameReport> {
    let space = StrategySpace::full(net, options.strategy_cap)?;
    let table = UtilityTable::build(net, space, mode, options.profile_cap, options.jobs)?;
    Ok(report_from_table(&table, options.coalition))
}

pub fn report_from_table(table: &UtilityTable<'_>, coalition: Option<(Stability, usize)>) -> GameReport {
    let net = table.net;
    let mut rows = Vec::new();
    let mut nonconvergent = Vec::new();
    for idx in 0..table.len() {
        let profile = table.space.profile(idx as u128);
        match &table.rows[idx] {
            None => nonconvergent.push(profile),
            Some(u) => rows.push(ProfileRow {
                index: idx,
                profile,
                welfare: money::sum(u),
                utilities: u.clone(),
                nash: table.is_nash(idx),
                stable: coalition.map(|(notion, k)| table.blocking_coalition(idx, notion, k).is_none()),
            }),
        }
    }
    let mut opt: Option<(&Money, usize)> = None;
    for r in &rows {
        if opt.map_or(true, |(best, _)| &r.welfare > best) {
            opt = Some((&r.welfare, r.index));
        }
    }
    let opt_value = opt.map(|(v, _)| v.clone());
    let nash = Efficiency::over(&rows, opt_value.as_ref(), |r| r.nash);
    let coalition = coalition.map(|(notion, k)| {
        (notion, k, Efficiency::over(&rows, opt_value.as_ref(), |r| r.stable == Some(true)))
    });
    GameReport {
        mode: table.mode,
        firms: net.firms.iter().map(|f| f.id.clone()).collect(),
        strategic_firms: table.space.strategic_firms(),
        profiles_examined: table.len(),
        opt_profile: opt.map(|(_, i)| i),
        opt: opt_value,
        rows,
        nonconvergent,
        nash,
        coalition,
    }
}

/// Compares equities at the greatest and least clearing payments of a
/// profile under nominal liabilities. Requires `α = β = 1`.
pub fn equity_invariance_check(net: &FinancialNetwork, profile: &StrategyProfile) -> Result<bool> {
    if !net.costs.is_none() {
        return Err(Error::PreconditionDefaultCosts);
    }
    let liab = nominal_liabilities(net);
    let top = greatest_clearing(net, &liab, profile, false)?;
    let proper = mcp_clear(net, profile, Extreme::Maximal)?;
    let bottom = mcp_clear(net, profile, Extreme::Minimal)?;
    let e = bottom.equities(net);
    Ok(top.equities(net) == e && proper.equities(net) == e)
}

/// `Σ e_i − (1 − α) Σ_{i ∈ D} e_i`, the equity welfare when `β = 1`.
pub fn equity_welfare_identity(net: &FinancialNetwork, result: &ClearingResult) -> Money {
    let total: Money = net.firms.iter().map(|f| &f.external).sum();
    let lost: Money = result.defaults.iter().map(|&i| &net.firms[i].external).sum();
    total - (Money::one() - &net.costs.alpha) * lost
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NetworkBuilder;
    use crate::money::int;

    fn example1() -> FinancialNetwork {
        NetworkBuilder::new()
            .firm("v1", int(1))
            .firms(&["v2", "v3"])
            .firm("v4", int(1))
            .firms(&["v5"])
            .debt("v1", "v2", int(2))
            .debt("v1", "v3", int(1))
            .debt("v2", "v1", int(1))
            .debt("v3", "v5", int(1))
            .cds("v4", "v5", "v3", int(1))
            .build()
            .unwrap()
    }

    #[test]
    fn example1_welfare_and_equilibria() {
        let net = example1();
        let report = analyze(&net, UtilityMode::TotalAssets, &AnalyzeOptions::default()).unwrap();
        let sw: Vec<Money> = report.rows.iter().map(|r| r.welfare.clone()).collect();
        // Canonical order: (v2|v3), (v2,v3), (v3|v2).
        assert_eq!(sw, vec![int(6), int(6), int(4)]);
        assert_eq!(report.nash.equilibria, vec![0, 1]);
        assert_eq!(report.opt, Some(int(6)));
        assert_eq!(report.nash.poa, Some(Ratio::Finite(int(1))));
    }

    #[test]
    fn nash_witness_is_first_improvement() {
        let net = example1();
        let bad = StrategyProfile::proportional(&net).with(0, Strategy::sequence(&[2, 1]));
        let (ok, w) = is_nash(&net, &bad, UtilityMode::TotalAssets).unwrap();
        assert!(!ok);
        assert_eq!(w.unwrap().strategies, vec![Strategy::sequence(&[1, 2])]);
    }

    #[test]
    fn singleton_coalitions_match_nash() {
        let net = example1();
        let table = UtilityTable::full(&net, UtilityMode::TotalAssets).unwrap();
        for idx in 0..table.len() {
            let strong = table.blocking_coalition(idx, Stability::Strong, 1).is_none();
            assert_eq!(strong, table.is_nash(idx));
        }
    }

    #[test]
    fn ratio_edges() {
        assert_eq!(Ratio::of(&int(3), &int(0)), Ratio::Infinite);
        assert_eq!(Ratio::of(&int(0), &int(0)), Ratio::Finite(int(1)));
        assert_eq!(Ratio::of(&int(6), &int(4)).to_string(), "3/2");
    }

    #[test]
    fn invariance_requires_no_costs() {
        let net = NetworkBuilder::new()
            .firm("a", int(1))
            .firm("b", int(0))
            .debt("a", "b", int(2))
            .costs(int(0), int(1))
            .build()
            .unwrap();
        let p = StrategyProfile::proportional(&net);
        assert_eq!(equity_invariance_check(&net, &p), Err(Error::PreconditionDefaultCosts));
    }
}
