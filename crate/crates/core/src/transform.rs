//! Removal of negative external assets via an auxiliary sink firm.

use crate::model::{Debt, FinancialNetwork, Firm};
use crate::money::Money;
use crate::strategy::Restriction;
use num::{Signed, Zero};

pub const SINK_ID: &str = "t";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformed {
    pub network: FinancialNetwork,
    /// Index of the added sink firm.
    pub sink: usize,
    /// Every firm indebted to the sink must rank it alone on top.
    pub restriction: Restriction,
}

/// Replaces each negative external `e_i` by `0` plus a debt of `|e_i|` to a
/// new firm with no creditors and no external assets.
pub fn transform_negative_assets(net: &FinancialNetwork) -> Transformed {
    let mut id = SINK_ID.to_string();
    while net.index_of(&id).is_some() {
        id.push('\'');
    }
    let sink = net.n();
    let mut out = net.clone();
    out.firms.push(Firm {
        id,
        external: Money::zero(),
    });
    let mut restriction = Restriction::default();
    for i in 0..net.n() {
        let e = &net.firms[i].external;
        if e.is_negative() {
            out.firms[i].external = Money::zero();
            out.debts.push(Debt {
                from: i,
                to: sink,
                amount: e.abs(),
            });
            restriction.top_alone.push((i, sink));
        }
    }
    out.debts.sort_by_key(|d| (d.from, d.to));
    Transformed {
        network: out,
        sink,
        restriction,
    }
}
