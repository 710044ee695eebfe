//! Priority-proportional strategies: ordered partitions of a firm's
//! creditors into priority classes.

use crate::error::{Error, Result};
use crate::model::FinancialNetwork;
use serde_json::Value;
use std::fmt::Write as _;

pub const DEFAULT_STRATEGY_CAP: u128 = 1_000_000;

/// Ordered list of priority classes. Each class is sorted by firm index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy {
    classes: Vec<Vec<usize>>,
}

impl Strategy {
    /// Builds a strategy, sorting firms inside each class. Empty classes are
    /// dropped.
    pub fn new(classes: Vec<Vec<usize>>) -> Self {
        let classes = classes
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Strategy { classes }
    }

    /// All creditors in a single class.
    pub fn proportional(creditors: &[usize]) -> Self {
        Strategy::new(vec![creditors.to_vec()])
    }

    /// One creditor per class, in the given order.
    pub fn sequence(order: &[usize]) -> Self {
        Strategy::new(order.iter().map(|&j| vec![j]).collect())
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, j: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&j))
    }

    pub fn members(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.classes.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn is_proportional(&self) -> bool {
        self.classes.len() <= 1
    }

    /// Checks that the classes partition exactly `creditors`.
    pub fn check(&self, creditors: &[usize]) -> std::result::Result<(), String> {
        let members = self.members();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err("a creditor appears in more than one class".into());
        }
        let mut expected = creditors.to_vec();
        expected.sort_unstable();
        if members != expected {
            return Err("classes must cover exactly the firm's creditors".into());
        }
        Ok(())
    }

    /// Compact notation, e.g. `(v2,v3|v4)`.
    pub fn label(&self, net: &FinancialNetwork) -> String {
        let parts: Vec<String> = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&j| net.id(j)).collect::<Vec<_>>().join(","))
            .collect();
        format!("({})", parts.join("|"))
    }

    pub fn to_json(&self, net: &FinancialNetwork) -> Value {
        Value::Array(
            self.classes
                .iter()
                .map(|c| Value::Array(c.iter().map(|&j| Value::String(net.id(j).into())).collect()))
                .collect(),
        )
    }
}

/// Number of ordered set partitions of `k` items.
pub fn ordered_bell(k: usize) -> u128 {
    let mut a = vec![1u128];
    let mut binom = vec![1u128];
    for m in 1..=k {
        // binom holds row m-1 of Pascal's triangle; advance it to row m.
        let mut next = vec![1u128; m + 1];
        for j in 1..m {
            next[j] = binom[j - 1] + binom[j];
        }
        binom = next;
        let v = (1..=m).map(|j| binom[j] * a[m - j]).sum();
        a.push(v);
    }
    a[k]
}

/// Every ordered partition of `creditors`, sorted canonically.
pub fn enumerate_strategies(creditors: &[usize], cap: u128) -> Result<Vec<Strategy>> {
    let count = ordered_bell(creditors.len());
    if count > cap {
        return Err(Error::StrategySpaceTooLarge { count, cap });
    }
    let mut items = creditors.to_vec();
    items.sort_unstable();
    let mut out = Vec::with_capacity(count as usize);
    let mut prefix = Vec::new();
    extend_partitions(&items, &mut prefix, &mut out);
    out.sort();
    Ok(out)
}

fn extend_partitions(rest: &[usize], prefix: &mut Vec<Vec<usize>>, out: &mut Vec<Strategy>) {
    if rest.is_empty() {
        out.push(Strategy {
            classes: prefix.clone(),
        });
        return;
    }
    let k = rest.len();
    for mask in 1u32..(1u32 << k) {
        let (class, remaining): (Vec<usize>, Vec<usize>) = {
            let mut c = Vec::new();
            let mut r = Vec::new();
            for (b, &x) in rest.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    c.push(x);
                } else {
                    r.push(x);
                }
            }
            (c, r)
        };
        prefix.push(class);
        extend_partitions(&remaining, prefix, out);
        prefix.pop();
    }
}

/// One strategy per firm, indexed like `FinancialNetwork::firms`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile {
    pub strategies: Vec<Strategy>,
}

impl StrategyProfile {
    /// Every firm pays all creditors proportionally.
    pub fn proportional(net: &FinancialNetwork) -> Self {
        StrategyProfile {
            strategies: (0..net.n())
                .map(|i| Strategy::proportional(&net.creditors(i)))
                .collect(),
        }
    }

    pub fn with(&self, firm: usize, s: Strategy) -> Self {
        let mut out = self.clone();
        out.strategies[firm] = s;
        out
    }

    pub fn check(&self, net: &FinancialNetwork) -> Result<()> {
        if self.strategies.len() != net.n() {
            return Err(Error::Parse(format!(
                "profile has {} strategies for {} firms",
                self.strategies.len(),
                net.n()
            )));
        }
        for (i, s) in self.strategies.iter().enumerate() {
            s.check(&net.creditors(i)).map_err(|reason| Error::InvalidStrategy {
                firm: net.id(i).to_string(),
                reason,
            })?;
        }
        Ok(())
    }

    /// Compact label listing firms with more than one creditor.
    pub fn label(&self, net: &FinancialNetwork) -> String {
        let mut out = String::new();
        for (i, s) in self.strategies.iter().enumerate() {
            if s.members().len() > 1 {
                if !out.is_empty() {
                    out.push(' ');
                }
                let _ = write!(out, "{}:{}", net.id(i), s.label(net));
            }
        }
        if out.is_empty() {
            out.push_str("(trivial)");
        }
        out
    }

    /// JSON object mapping each firm with creditors to its classes.
    pub fn to_json(&self, net: &FinancialNetwork) -> Value {
        let mut map = serde_json::Map::new();
        for (i, s) in self.strategies.iter().enumerate() {
            if !s.classes().is_empty() {
                map.insert(net.id(i).to_string(), s.to_json(net));
            }
        }
        Value::Object(map)
    }

    /// Parses a profile object such as `{"v1": [["v2"], ["v3"]]}` or the
    /// string `"proportional"`. Firms that are not listed pay proportionally.
    pub fn from_json(net: &FinancialNetwork, value: &Value) -> Result<Self> {
        let mut profile = StrategyProfile::proportional(net);
        match value {
            Value::String(s) if s == "proportional" => return Ok(profile),
            Value::Object(map) => {
                for (id, classes) in map {
                    let i = net.index_of(id).ok_or_else(|| Error::UnknownFirmId(id.clone()))?;
                    profile.strategies[i] = parse_classes(net, id, classes)?;
                }
            }
            _ => return Err(Error::Parse("profile must be an object or \"proportional\"".into())),
        }
        profile.check(net)?;
        Ok(profile)
    }

    pub fn parse(net: &FinancialNetwork, text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "proportional" {
            return Ok(StrategyProfile::proportional(net));
        }
        let value: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        StrategyProfile::from_json(net, &value)
    }
}

fn parse_classes(net: &FinancialNetwork, firm: &str, v: &Value) -> Result<Strategy> {
    let bad = |reason: &str| Error::InvalidStrategy {
        firm: firm.to_string(),
        reason: reason.to_string(),
    };
    let classes = v.as_array().ok_or_else(|| bad("expected an array of classes"))?;
    let mut out = Vec::new();
    for c in classes {
        let members = c.as_array().ok_or_else(|| bad("each class must be an array"))?;
        let mut class = Vec::new();
        for m in members {
            let id = m.as_str().ok_or_else(|| bad("class members must be firm ids"))?;
            class.push(net.index_of(id).ok_or_else(|| Error::UnknownFirmId(id.to_string()))?);
        }
        if class.is_empty() {
            return Err(bad("empty priority class"));
        }
        out.push(class);
    }
    Ok(Strategy::new(out))
}

/// Per-firm strategy lists, optionally restricted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySpace {
    pub per_firm: Vec<Vec<Strategy>>,
}

/// Constraint requiring certain firms to put one creditor alone on top.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Restriction {
    /// `(firm, creditor)` pairs: `firm` must rank `creditor` alone first.
    pub top_alone: Vec<(usize, usize)>,
}

impl Restriction {
    pub fn allows(&self, firm: usize, s: &Strategy) -> bool {
        self.top_alone
            .iter()
            .filter(|(f, _)| *f == firm)
            .all(|(_, t)| s.classes().first().map(|c| c == &vec![*t]).unwrap_or(false))
    }
}

impl StrategySpace {
    pub fn full(net: &FinancialNetwork, cap: u128) -> Result<Self> {
        Self::restricted(net, &Restriction::default(), cap)
    }

    pub fn restricted(net: &FinancialNetwork, restriction: &Restriction, cap: u128) -> Result<Self> {
        let mut per_firm = Vec::with_capacity(net.n());
        for i in 0..net.n() {
            let all = enumerate_strategies(&net.creditors(i), cap)?;
            per_firm.push(all.into_iter().filter(|s| restriction.allows(i, s)).collect());
        }
        Ok(StrategySpace { per_firm })
    }

    /// Number of profiles, saturating at `u128::MAX`.
    pub fn profile_count(&self) -> u128 {
        self.per_firm
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    /// Decodes a mixed-radix index (last firm varies fastest).
    pub fn profile(&self, index: u128) -> StrategyProfile {
        self.from_picks(&self.picks_of(index))
    }

    pub fn from_picks(&self, picks: &[usize]) -> StrategyProfile {
        StrategyProfile {
            strategies: picks
                .iter()
                .zip(&self.per_firm)
                .map(|(&p, s)| s[p].clone())
                .collect(),
        }
    }

    /// Inverse of [`StrategySpace::profile`]; `None` if a strategy is not in
    /// the space.
    pub fn index_of(&self, profile: &StrategyProfile) -> Option<u128> {
        let mut index = 0u128;
        for (s, space) in profile.strategies.iter().zip(&self.per_firm) {
            let p = space.iter().position(|x| x == s)?;
            index = index * space.len() as u128 + p as u128;
        }
        Some(index)
    }

    pub fn picks_of(&self, index: u128) -> Vec<usize> {
        let mut idx = index;
        let mut picks = vec![0usize; self.per_firm.len()];
        for (i, s) in self.per_firm.iter().enumerate().rev() {
            let k = s.len() as u128;
            picks[i] = (idx % k) as usize;
            idx /= k;
        }
        picks
    }

    /// Firms with a real choice.
    pub fn strategic_firms(&self) -> Vec<usize> {
        (0..self.per_firm.len())
            .filter(|&i| self.per_firm[i].len() > 1)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_strategies(&[], 10).unwrap().len(), 1);
        assert_eq!(enumerate_strategies(&[4], 10).unwrap().len(), 1);
        assert_eq!(enumerate_strategies(&[1, 2, 3], 100).unwrap().len(), 13);
        assert_eq!(enumerate_strategies(&[1, 2, 3, 4], 100).unwrap().len(), 75);
    }

    #[test]
    fn two_creditors_in_canonical_order() {
        let got = enumerate_strategies(&[2, 1], 10).unwrap();
        let want = vec![
            Strategy::sequence(&[1, 2]),
            Strategy::proportional(&[1, 2]),
            Strategy::sequence(&[2, 1]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_strategies(&[1, 2, 3], 12),
            Err(Error::StrategySpaceTooLarge { count: 13, cap: 12 })
        ));
    }

    #[test]
    fn strategy_checks() {
        let s = Strategy::new(vec![vec![3, 1], vec![2]]);
        assert_eq!(s.classes(), &[vec![1, 3], vec![2]]);
        assert_eq!(s.class_of(2), Some(1));
        assert!(s.check(&[1, 2, 3]).is_ok());
        assert!(s.check(&[1, 2]).is_err());
        assert!(Strategy::new(vec![vec![1], vec![1, 2]]).check(&[1, 2]).is_err());
    }

    #[test]
    fn restriction_filters_top_class() {
        let r = Restriction {
            top_alone: vec![(0, 9)],
        };
        assert!(r.allows(0, &Strategy::new(vec![vec![9], vec![1, 2]])));
        assert!(!r.allows(0, &Strategy::new(vec![vec![9, 1], vec![2]])));
        assert!(r.allows(1, &Strategy::new(vec![vec![1, 2]])));
    }
}
