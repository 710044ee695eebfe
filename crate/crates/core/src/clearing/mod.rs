//! Clearing payments for a fixed strategy profile.

mod inner;
pub mod linalg;
mod split;

pub use inner::Direction;
pub use split::pp_split;

use crate::error::{Error, Result};
use crate::model::{nominal_liabilities, resolve_liabilities, FinancialNetwork, LiabilityMatrix};
use crate::money::{self, Money};
use crate::strategy::StrategyProfile;
use num::{One, Signed, Zero};
use split::PayPlan;
use std::collections::VecDeque;

pub const DEFAULT_CDS_ROUNDS: usize = 10_000;

/// Which extreme clearing vector to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Maximal,
    Minimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClearingResult {
    /// `payments[i][j]` is paid by firm `i` to firm `j`.
    pub payments: Vec<Vec<Money>>,
    /// Liabilities in force for these payments.
    pub liabilities: LiabilityMatrix,
    /// Firms whose assets fall short of their liabilities.
    pub defaults: Vec<usize>,
    pub recovery: Vec<Money>,
    pub proper: bool,
    pub converged: bool,
    /// Rounds of the default-set iteration in the final clearing.
    pub rounds: usize,
    /// Recovery-rate rounds (1 without CDS contracts).
    pub outer_rounds: usize,
    /// Total payment vector after each round, starting with the initial
    /// guess.
    pub history: Vec<Vec<Money>>,
}

impl ClearingResult {
    pub fn totals(&self) -> Vec<Money> {
        self.payments.iter().map(|r| money::sum(r)).collect()
    }

    pub fn inflows(&self) -> Vec<Money> {
        inflows(&self.payments)
    }

    /// `a_i = e_i + Σ_j p_ji`.
    pub fn assets(&self, net: &FinancialNetwork) -> Vec<Money> {
        self.inflows()
            .into_iter()
            .zip(&net.firms)
            .map(|(inflow, f)| inflow + &f.external)
            .collect()
    }

    /// `max{0, a_i − L_i}`.
    pub fn equities(&self, net: &FinancialNetwork) -> Vec<Money> {
        self.assets(net)
            .iter()
            .zip(&self.liabilities.totals)
            .map(|(a, l)| money::positive_part(&(a - l)))
            .collect()
    }

    pub fn is_default(&self, i: usize) -> bool {
        self.defaults.contains(&i)
    }
}

pub fn inflows(p: &[Vec<Money>]) -> Vec<Money> {
    let n = p.len();
    (0..n).map(|i| (0..n).map(|j| &p[j][i]).sum()).collect()
}

/// Firms with `e_i + Σ_j p_ji < L_i`.
pub fn default_set(net: &FinancialNetwork, liab: &LiabilityMatrix, p: &[Vec<Money>]) -> Vec<bool> {
    inflows(p)
        .iter()
        .zip(&net.firms)
        .zip(&liab.totals)
        .map(|((inflow, f), l)| &(inflow + &f.external) < l)
        .collect()
}

/// `r_k = p_k / L_k` for defaulting firms with liabilities, `1` otherwise.
pub fn recovery_rates(in_default: &[bool], liab: &LiabilityMatrix, p: &[Vec<Money>]) -> Vec<Money> {
    (0..p.len())
        .map(|k| {
            if in_default[k] && liab.totals[k].is_positive() {
                money::sum(&p[k]) / &liab.totals[k]
            } else {
                Money::one()
            }
        })
        .collect()
}

/// Greatest fixed point below `start` of the payment map in which the firms
/// of `in_default` pay `clamp(α e_i + β · inflow, 0, L_i)` and all others pay
/// `L_i`. Returns total payments per firm.
pub fn inner_fixed_point(
    net: &FinancialNetwork,
    liab: &LiabilityMatrix,
    profile: &StrategyProfile,
    in_default: &[bool],
    start: &[Money],
) -> Result<Vec<Money>> {
    let plan = PayPlan::new(profile, liab);
    let costs = Costs::of(net);
    inner_solve(liab, &plan, &costs, in_default, start, Direction::Down)
}

/// Default payment rule `clamp(base_i + β · inflow, 0, L_i)`.
struct Costs {
    base: Vec<Money>,
    beta: Money,
}

impl Costs {
    fn of(net: &FinancialNetwork) -> Self {
        Costs {
            base: net.firms.iter().map(|f| &net.costs.alpha * &f.external).collect(),
            beta: net.costs.beta.clone(),
        }
    }

    /// Rule that dominates [`Costs::of`] for every inflow: defaulting firms
    /// forward everything they receive and are charged the smaller of
    /// `e_i` and `α e_i`.
    fn free(net: &FinancialNetwork) -> Self {
        Costs {
            base: net
                .firms
                .iter()
                .map(|f| {
                    let scaled = &net.costs.alpha * &f.external;
                    if scaled > f.external {
                        scaled
                    } else {
                        f.external.clone()
                    }
                })
                .collect(),
            beta: Money::one(),
        }
    }
}

fn inner_solve(
    liab: &LiabilityMatrix,
    plan: &PayPlan,
    costs: &Costs,
    in_default: &[bool],
    start: &[Money],
    dir: Direction,
) -> Result<Vec<Money>> {
    inner::solve(
        plan,
        &liab.l,
        &liab.totals,
        &costs.base,
        &costs.beta,
        in_default,
        start,
        dir,
    )
}

/// Clears a network under its nominal liabilities (CDS contracts dormant).
pub fn mcp_clear(net: &FinancialNetwork, profile: &StrategyProfile, extreme: Extreme) -> Result<ClearingResult> {
    mcp_clear_with(net, &nominal_liabilities(net), profile, extreme)
}

/// Maximal proper clearing payments (or the least clearing payments) for
/// the given liabilities.
///
/// The maximal payments are the greatest clearing payments below the flow
/// that external assets can generate when no firm loses anything to
/// default; see [`free_flow`].
pub fn mcp_clear_with(
    net: &FinancialNetwork,
    liab: &LiabilityMatrix,
    profile: &StrategyProfile,
    extreme: Extreme,
) -> Result<ClearingResult> {
    let plan = PayPlan::new(profile, liab);
    let costs = Costs::of(net);
    let (payments, rounds, history) = match extreme {
        Extreme::Maximal => {
            let (_, _, free) = least(net, liab, &plan, &Costs::free(net))?;
            let cap = free.last().expect("nonempty history").clone();
            let (p, rounds, history) = greatest(net, liab, &plan, &costs, cap)?;
            (proper_filter(&p, net), rounds, history)
        }
        Extreme::Minimal => least(net, liab, &plan, &costs)?,
    };
    Ok(finish(net, liab, payments, rounds, history))
}

/// Greatest clearing payments of Algorithm 1 started from the full
/// liabilities, optionally followed by the reachability filter. Unlike
/// [`mcp_clear_with`] this keeps circulations that no external money
/// could have started, as long as they touch a firm with positive external
/// assets.
pub fn greatest_clearing(
    net: &FinancialNetwork,
    liab: &LiabilityMatrix,
    profile: &StrategyProfile,
    filter: bool,
) -> Result<ClearingResult> {
    let plan = PayPlan::new(profile, liab);
    let (p, rounds, history) = greatest(net, liab, &plan, &Costs::of(net), liab.totals.clone())?;
    let p = if filter { proper_filter(&p, net) } else { p };
    Ok(finish(net, liab, p, rounds, history))
}

/// Least fixed point of the payment map in which defaulting firms forward
/// all their inflow and keep no default costs beyond `α e_i` when that is
/// cheaper than `e_i`. It bounds every clearing vector whose money
/// originates in external assets.
pub fn free_flow(net: &FinancialNetwork, liab: &LiabilityMatrix, profile: &StrategyProfile) -> Result<Vec<Money>> {
    let plan = PayPlan::new(profile, liab);
    let (_, _, history) = least(net, liab, &plan, &Costs::free(net))?;
    Ok(history.last().expect("nonempty history").clone())
}

fn finish(
    net: &FinancialNetwork,
    liab: &LiabilityMatrix,
    payments: Vec<Vec<Money>>,
    rounds: usize,
    history: Vec<Vec<Money>>,
) -> ClearingResult {
    let in_default = default_set(net, liab, &payments);
    let recovery = recovery_rates(&in_default, liab, &payments);
    let proper = is_proper(&payments, net);
    ClearingResult {
        payments,
        liabilities: liab.clone(),
        defaults: (0..net.n()).filter(|&i| in_default[i]).collect(),
        recovery,
        proper,
        converged: true,
        rounds,
        outer_rounds: 1,
        history,
    }
}

type Run = (Vec<Vec<Money>>, usize, Vec<Vec<Money>>);

/// Algorithm 1 from `start`, which must satisfy `Φ(start) ≤ start`.
fn greatest(net: &FinancialNetwork, liab: &LiabilityMatrix, plan: &PayPlan, costs: &Costs, start: Vec<Money>) -> Result<Run> {
    let n = net.n();
    let mut x = start;
    let mut p = plan.matrix(&x);
    let mut history = vec![x.clone()];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let d = default_set(net, liab, &p);
        let next = inner_solve(liab, plan, costs, &d, &x, Direction::Down)?;
        debug_assert!(next.iter().zip(&x).all(|(a, b)| a <= b), "payments only decrease");
        x = next;
        p = plan.matrix(&x);
        history.push(x.clone());
        let after = default_set(net, liab, &p);
        debug_assert!((0..n).all(|i| !d[i] || after[i]), "default sets only grow");
        if after == d {
            break;
        }
        if rounds > n {
            return Err(Error::NonFiniteRegime(rounds));
        }
    }
    Ok((p, rounds, history))
}

fn least(net: &FinancialNetwork, liab: &LiabilityMatrix, plan: &PayPlan, costs: &Costs) -> Result<Run> {
    let n = net.n();
    let mut x = vec![Money::zero(); n];
    let mut p = vec![vec![Money::zero(); n]; n];
    let mut prev: Option<Vec<bool>> = None;
    let mut history = vec![x.clone()];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let d = default_set(net, liab, &p);
        if prev.as_ref() == Some(&d) {
            break;
        }
        let start: Vec<Money> = (0..n)
            .map(|i| if d[i] { x[i].clone() } else { liab.totals[i].clone() })
            .collect();
        x = inner_solve(liab, plan, costs, &d, &start, Direction::Up)?;
        p = plan.matrix(&x);
        history.push(x.clone());
        prev = Some(d);
        if rounds > n + 2 {
            return Err(Error::NonFiniteRegime(rounds));
        }
    }
    Ok((p, rounds, history))
}

/// Firms reached from a firm with positive external assets along positive
/// payments.
pub fn reached_from_externals(p: &[Vec<Money>], net: &FinancialNetwork) -> Vec<bool> {
    let n = net.n();
    let mut seen: Vec<bool> = net.firms.iter().map(|f| f.external.is_positive()).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| seen[i]).collect();
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if !seen[j] && p[i][j].is_positive() {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen
}

/// Zeroes the outgoing payments of every firm that no money from positive
/// external assets can reach.
pub fn proper_filter(p: &[Vec<Money>], net: &FinancialNetwork) -> Vec<Vec<Money>> {
    let seen = reached_from_externals(p, net);
    p.iter()
        .enumerate()
        .map(|(i, row)| {
            if seen[i] {
                row.clone()
            } else {
                vec![Money::zero(); row.len()]
            }
        })
        .collect()
}

fn is_proper(p: &[Vec<Money>], net: &FinancialNetwork) -> bool {
    let seen = reached_from_externals(p, net);
    (0..net.n()).all(|i| seen[i] || p[i].iter().all(|x| x.is_zero()))
}

/// Joint clearing with CDS liabilities: re-solve with updated recovery
/// rates until they stop changing or `max_rounds` is reached.
pub fn cds_clear_rounds(
    net: &FinancialNetwork,
    profile: &StrategyProfile,
    max_rounds: usize,
) -> Result<ClearingResult> {
    cds_clear_extreme(net, profile, Extreme::Maximal, max_rounds)
}

/// [`cds_clear_rounds`] for either extreme of the clearing lattice.
pub fn cds_clear_extreme(
    net: &FinancialNetwork,
    profile: &StrategyProfile,
    extreme: Extreme,
    max_rounds: usize,
) -> Result<ClearingResult> {
    let mut r = vec![Money::one(); net.n()];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let liab = resolve_liabilities(net, &r)?;
        let mut res = mcp_clear_with(net, &liab, profile, extreme)?;
        res.outer_rounds = rounds;
        if res.recovery == r || !net.has_cds() {
            return Ok(res);
        }
        if rounds >= max_rounds {
            res.converged = false;
            return Ok(res);
        }
        r = res.recovery.clone();
    }
}

pub fn cds_clear(net: &FinancialNetwork, profile: &StrategyProfile) -> Result<ClearingResult> {
    cds_clear_rounds(net, profile, DEFAULT_CDS_ROUNDS)
}

/// Clearing when every firm pays all creditors proportionally.
pub fn proportional_clear(net: &FinancialNetwork) -> Result<ClearingResult> {
    cds_clear(net, &StrategyProfile::proportional(net))
}

/// Like [`cds_clear`], but turns a nonconvergent result into an error.
pub fn cds_clear_strict(net: &FinancialNetwork, profile: &StrategyProfile) -> Result<ClearingResult> {
    let res = cds_clear(net, profile)?;
    if res.converged {
        Ok(res)
    } else {
        Err(Error::NonConvergent(res.outer_rounds))
    }
}
