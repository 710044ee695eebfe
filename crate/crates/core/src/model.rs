//! Financial networks: firms, debt contracts, credit default swaps and
//! default costs.

use crate::error::{Error, Result};
use crate::money::{self, Money};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Firm {
    pub id: String,
    /// External assets; may be negative.
    pub external: Money,
}

/// Debt contract: `from` owes `to` the given amount.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Debt {
    pub from: usize,
    pub to: usize,
    pub amount: Money,
}

/// Credit default swap: `from` owes `to` `(1 - r_reference) * notional`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cds {
    pub from: usize,
    pub to: usize,
    pub reference: usize,
    pub notional: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefaultCosts {
    pub alpha: Money,
    pub beta: Money,
}

impl DefaultCosts {
    pub fn none() -> Self {
        DefaultCosts {
            alpha: Money::one(),
            beta: Money::one(),
        }
    }

    pub fn is_none(&self) -> bool {
        self.alpha.is_one() && self.beta.is_one()
    }
}

impl Default for DefaultCosts {
    fn default() -> Self {
        Self::none()
    }
}

/// A validated network. Firms are addressed by their position in `firms`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinancialNetwork {
    pub firms: Vec<Firm>,
    /// At most one entry per ordered pair, sorted by `(from, to)`.
    pub debts: Vec<Debt>,
    /// At most one entry per `(from, to, reference)`, sorted.
    pub cds: Vec<Cds>,
    pub costs: DefaultCosts,
}

impl FinancialNetwork {
    pub fn n(&self) -> usize {
        self.firms.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.firms.iter().position(|f| f.id == id)
    }

    pub fn id(&self, i: usize) -> &str {
        &self.firms[i].id
    }

    pub fn externals(&self) -> Vec<Money> {
        self.firms.iter().map(|f| f.external.clone()).collect()
    }

    pub fn has_cds(&self) -> bool {
        !self.cds.is_empty()
    }

    /// Nominal debt matrix `l⁰`.
    pub fn debt_matrix(&self) -> Vec<Vec<Money>> {
        let n = self.n();
        let mut l = vec![vec![Money::zero(); n]; n];
        for d in &self.debts {
            l[d.from][d.to] += &d.amount;
        }
        l
    }

    /// Potential creditors of firm `i`: every `j` with a positive debt or a
    /// positive CDS notional owed by `i`, in firm order.
    pub fn creditors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .debts
            .iter()
            .filter(|d| d.from == i && d.amount.is_positive())
            .map(|d| d.to)
            .chain(
                self.cds
                    .iter()
                    .filter(|c| c.from == i && c.notional.is_positive())
                    .map(|c| c.to),
            )
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_raw(&self) -> RawNetwork {
        RawNetwork {
            firms: self
                .firms
                .iter()
                .map(|f| RawFirm {
                    id: f.id.clone(),
                    external: f.external.clone(),
                })
                .collect(),
            debts: self
                .debts
                .iter()
                .map(|d| RawDebt {
                    from: self.id(d.from).to_string(),
                    to: self.id(d.to).to_string(),
                    amount: d.amount.clone(),
                })
                .collect(),
            cds: self
                .cds
                .iter()
                .map(|c| RawCds {
                    from: self.id(c.from).to_string(),
                    to: self.id(c.to).to_string(),
                    reference: self.id(c.reference).to_string(),
                    notional: c.notional.clone(),
                })
                .collect(),
            default_costs: Some(RawCosts {
                alpha: self.costs.alpha.clone(),
                beta: self.costs.beta.clone(),
            }),
        }
    }

    /// Returns a copy with every external asset and contract amount
    /// multiplied by `c`.
    pub fn scaled(&self, c: &Money) -> FinancialNetwork {
        let mut out = self.clone();
        for f in &mut out.firms {
            f.external *= c;
        }
        for d in &mut out.debts {
            d.amount *= c;
        }
        for x in &mut out.cds {
            x.notional *= c;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFirm {
    pub id: String,
    #[serde(with = "money::serde_str", default = "Money::zero")]
    pub external: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDebt {
    pub from: String,
    pub to: String,
    #[serde(with = "money::serde_str")]
    pub amount: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCds {
    pub from: String,
    pub to: String,
    pub reference: String,
    #[serde(with = "money::serde_str")]
    pub notional: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCosts {
    #[serde(with = "money::serde_str")]
    pub alpha: Money,
    #[serde(with = "money::serde_str")]
    pub beta: Money,
}

/// Network description as read from JSON, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawNetwork {
    pub firms: Vec<RawFirm>,
    #[serde(default)]
    pub debts: Vec<RawDebt>,
    #[serde(default)]
    pub cds: Vec<RawCds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_costs: Option<RawCosts>,
}

impl RawNetwork {
    pub fn from_json(s: &str) -> Result<RawNetwork> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }
}

pub fn parse_network(json: &str) -> Result<FinancialNetwork> {
    validate_network(&RawNetwork::from_json(json)?)
}

pub fn validate_network(raw: &RawNetwork) -> Result<FinancialNetwork> {
    let mut index = HashMap::new();
    for (i, f) in raw.firms.iter().enumerate() {
        if index.insert(f.id.as_str(), i).is_some() {
            return Err(Error::DuplicateFirmId(f.id.clone()));
        }
    }
    let lookup = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownFirmId(id.to_string()))
    };

    let costs = match &raw.default_costs {
        Some(c) => DefaultCosts {
            alpha: c.alpha.clone(),
            beta: c.beta.clone(),
        },
        None => DefaultCosts::none(),
    };
    for (name, value) in [("alpha", &costs.alpha), ("beta", &costs.beta)] {
        if !money::in_unit_interval(value) {
            return Err(Error::DefaultCostOutOfRange {
                name,
                value: money::fmt(value),
            });
        }
    }

    let mut debts: BTreeMap<(usize, usize), Money> = BTreeMap::new();
    for d in &raw.debts {
        let (from, to) = (lookup(&d.from)?, lookup(&d.to)?);
        if d.amount.is_negative() {
            return Err(Error::NegativeLiability {
                from: d.from.clone(),
                to: d.to.clone(),
                amount: money::fmt(&d.amount),
            });
        }
        if from == to {
            return Err(Error::SelfLoopDebt(d.from.clone()));
        }
        *debts.entry((from, to)).or_insert_with(Money::zero) += &d.amount;
    }

    let mut cds: BTreeMap<(usize, usize, usize), Money> = BTreeMap::new();
    for c in &raw.cds {
        let (from, to, reference) = (lookup(&c.from)?, lookup(&c.to)?, lookup(&c.reference)?);
        if c.notional.is_negative() {
            return Err(Error::NegativeLiability {
                from: c.from.clone(),
                to: c.to.clone(),
                amount: money::fmt(&c.notional),
            });
        }
        if from == to {
            return Err(Error::SelfLoopDebt(c.from.clone()));
        }
        if reference == from || reference == to {
            return Err(Error::CdsDegenerateReference {
                from: c.from.clone(),
                to: c.to.clone(),
                reference: c.reference.clone(),
            });
        }
        *cds.entry((from, to, reference)).or_insert_with(Money::zero) += &c.notional;
    }

    Ok(FinancialNetwork {
        firms: raw
            .firms
            .iter()
            .map(|f| Firm {
                id: f.id.clone(),
                external: f.external.clone(),
            })
            .collect(),
        debts: debts
            .into_iter()
            .map(|((from, to), amount)| Debt { from, to, amount })
            .collect(),
        cds: cds
            .into_iter()
            .map(|((from, to, reference), notional)| Cds {
                from,
                to,
                reference,
                notional,
            })
            .collect(),
        costs,
    })
}

/// Resolved liabilities `l_ij` and their row totals `L_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiabilityMatrix {
    pub l: Vec<Vec<Money>>,
    pub totals: Vec<Money>,
}

impl LiabilityMatrix {
    pub fn from_matrix(l: Vec<Vec<Money>>) -> Self {
        let totals = l.iter().map(|row| money::sum(row)).collect();
        LiabilityMatrix { l, totals }
    }

    pub fn n(&self) -> usize {
        self.l.len()
    }
}

/// `l_ij = l⁰_ij + Σ_k (1 − r_k) l^k_ij` for the given recovery rates.
pub fn resolve_liabilities(net: &FinancialNetwork, recovery: &[Money]) -> Result<LiabilityMatrix> {
    assert_eq!(recovery.len(), net.n(), "one recovery rate per firm");
    for (i, r) in recovery.iter().enumerate() {
        if !money::in_unit_interval(r) {
            return Err(Error::RecoveryOutOfRange {
                firm: net.id(i).to_string(),
                value: money::fmt(r),
            });
        }
    }
    let mut l = net.debt_matrix();
    for c in &net.cds {
        let shortfall = Money::one() - &recovery[c.reference];
        if !shortfall.is_zero() {
            l[c.from][c.to] += shortfall * &c.notional;
        }
    }
    Ok(LiabilityMatrix::from_matrix(l))
}

/// Liabilities when every firm is solvent (all CDS dormant).
pub fn nominal_liabilities(net: &FinancialNetwork) -> LiabilityMatrix {
    LiabilityMatrix::from_matrix(net.debt_matrix())
}

/// Convenience constructor used by fixtures and tests.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    raw: Option<RawNetwork>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        NetworkBuilder {
            raw: Some(RawNetwork {
                firms: Vec::new(),
                debts: Vec::new(),
                cds: Vec::new(),
                default_costs: None,
            }),
        }
    }

    fn raw(&mut self) -> &mut RawNetwork {
        self.raw.as_mut().expect("builder already consumed")
    }

    pub fn firm(mut self, id: &str, external: Money) -> Self {
        self.raw().firms.push(RawFirm {
            id: id.to_string(),
            external,
        });
        self
    }

    /// Adds firms with zero external assets.
    pub fn firms(mut self, ids: &[&str]) -> Self {
        for id in ids {
            self = self.firm(id, Money::zero());
        }
        self
    }

    pub fn debt(mut self, from: &str, to: &str, amount: Money) -> Self {
        self.raw().debts.push(RawDebt {
            from: from.to_string(),
            to: to.to_string(),
            amount,
        });
        self
    }

    pub fn cds(mut self, from: &str, to: &str, reference: &str, notional: Money) -> Self {
        self.raw().cds.push(RawCds {
            from: from.to_string(),
            to: to.to_string(),
            reference: reference.to_string(),
            notional,
        });
        self
    }

    pub fn costs(mut self, alpha: Money, beta: Money) -> Self {
        self.raw().default_costs = Some(RawCosts { alpha, beta });
        self
    }

    pub fn build(mut self) -> Result<FinancialNetwork> {
        let raw = self.raw.take().expect("builder already consumed");
        validate_network(&raw)
    }
}
