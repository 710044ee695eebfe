//! Independent checks of a claimed clearing result.
//!
//! Nothing here calls the solver: residuals are recomputed from the network,
//! the profile and the claimed payments alone.

use crate::clearing::ClearingResult;
use crate::model::{resolve_liabilities, FinancialNetwork};
use crate::money::{self, Money};
use crate::strategy::StrategyProfile;
use num::{One, Signed, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Total payment differs from the clearing condition.
    FixedPoint {
        firm: String,
        expected: String,
        actual: String,
        residual: String,
    },
    /// Individual payment differs from the priority-proportional split.
    Split {
        firm: String,
        creditor: String,
        expected: String,
        actual: String,
        residual: String,
    },
    /// Payment outside `[0, l_ij]` or a self-payment.
    Bound {
        firm: String,
        creditor: String,
        value: String,
        limit: String,
    },
    /// Firm pays although no money from positive external assets reaches it.
    Improper { firm: String },
    Recovery {
        firm: String,
        expected: String,
        actual: String,
    },
    DefaultFlag {
        firm: String,
        expected: bool,
    },
    Liability {
        firm: String,
        creditor: String,
        expected: String,
        actual: String,
    },
    Shape { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `payments` against the clearing condition, the split rule, the
/// contract bounds, properness (when `check_proper`) and the recovery rates.
pub fn verify_payments(
    net: &FinancialNetwork,
    profile: &StrategyProfile,
    payments: &[Vec<Money>],
    recovery: &[Money],
    check_proper: bool,
) -> VerificationReport {
    let n = net.n();
    let mut v = Vec::new();
    if payments.len() != n || payments.iter().any(|r| r.len() != n) || recovery.len() != n {
        v.push(Violation::Shape {
            detail: format!("expected {n}x{n} payments and {n} recovery rates"),
        });
        return VerificationReport { violations: v };
    }
    let liab = match resolve_liabilities(net, recovery) {
        Ok(l) => l,
        Err(e) => {
            v.push(Violation::Shape { detail: e.to_string() });
            return VerificationReport { violations: v };
        }
    };
    let id = |i: usize| net.id(i).to_string();
    let alpha = &net.costs.alpha;
    let beta = &net.costs.beta;

    for i in 0..n {
        for j in 0..n {
            let x = &payments[i][j];
            let over = if i == j { !x.is_zero() } else { x.is_negative() || x > &liab.l[i][j] };
            if over {
                v.push(Violation::Bound {
                    firm: id(i),
                    creditor: id(j),
                    value: money::fmt(x),
                    limit: money::fmt(if i == j { &payments[i][i] } else { &liab.l[i][j] }),
                });
            }
        }
    }

    let mut inflow = vec![Money::zero(); n];
    for row in payments {
        for (j, x) in row.iter().enumerate() {
            inflow[j] += x;
        }
    }
    let mut in_default = vec![false; n];
    for i in 0..n {
        let total: Money = payments[i].iter().sum();
        let big_l: Money = liab.l[i].iter().sum();
        let assets = &net.firms[i].external + &inflow[i];
        in_default[i] = assets < big_l;
        let expected = if !in_default[i] {
            big_l.clone()
        } else {
            let raw = alpha * &net.firms[i].external + beta * &inflow[i];
            if raw.is_negative() {
                Money::zero()
            } else if raw > big_l {
                big_l.clone()
            } else {
                raw
            }
        };
        if expected != total {
            v.push(Violation::FixedPoint {
                firm: id(i),
                expected: money::fmt(&expected),
                actual: money::fmt(&total),
                residual: money::fmt(&(&total - &expected)),
            });
        }

        // Priority split, recomputed class by class.
        let mut left = total;
        for class in profile.strategies[i].classes() {
            let width: Money = class.iter().map(|&j| &liab.l[i][j]).sum();
            let take = if left > width { width.clone() } else { left.clone() };
            for &j in class {
                let want = if width.is_zero() {
                    Money::zero()
                } else {
                    &take * &liab.l[i][j] / &width
                };
                if want != payments[i][j] {
                    v.push(Violation::Split {
                        firm: id(i),
                        creditor: id(j),
                        expected: money::fmt(&want),
                        actual: money::fmt(&payments[i][j]),
                        residual: money::fmt(&(&payments[i][j] - &want)),
                    });
                }
            }
            left -= take;
        }

        let r = if in_default[i] && big_l.is_positive() {
            payments[i].iter().sum::<Money>() / &big_l
        } else {
            Money::one()
        };
        if r != recovery[i] {
            v.push(Violation::Recovery {
                firm: id(i),
                expected: money::fmt(&r),
                actual: money::fmt(&recovery[i]),
            });
        }
    }

    if check_proper {
        let mut reached: Vec<bool> = net.firms.iter().map(|f| f.external.is_positive()).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                if !reached[i] {
                    continue;
                }
                for j in 0..n {
                    if !reached[j] && payments[i][j].is_positive() {
                        reached[j] = true;
                        changed = true;
                    }
                }
            }
        }
        for i in 0..n {
            if !reached[i] && payments[i].iter().any(|x| x.is_positive()) {
                v.push(Violation::Improper { firm: id(i) });
            }
        }
    }

    VerificationReport { violations: v }
}

/// Verifies a solver result, including its default list and liabilities.
pub fn verify_clearing(
    net: &FinancialNetwork,
    profile: &StrategyProfile,
    result: &ClearingResult,
) -> VerificationReport {
    let mut report = verify_payments(net, profile, &result.payments, &result.recovery, result.proper);
    if !report.violations.iter().any(|v| matches!(v, Violation::Shape { .. })) {
        let n = net.n();
        if let Ok(liab) = resolve_liabilities(net, &result.recovery) {
            for i in 0..n {
                for j in 0..n {
                    if liab.l[i][j] != result.liabilities.l[i][j] {
                        report.violations.push(Violation::Liability {
                            firm: net.id(i).to_string(),
                            creditor: net.id(j).to_string(),
                            expected: money::fmt(&liab.l[i][j]),
                            actual: money::fmt(&result.liabilities.l[i][j]),
                        });
                    }
                }
                let assets: Money = &net.firms[i].external
                    + (0..n).map(|j| &result.payments[j][i]).sum::<Money>();
                let expected = assets < liab.l[i].iter().sum::<Money>();
                if expected != result.defaults.contains(&i) {
                    report.violations.push(Violation::DefaultFlag {
                        firm: net.id(i).to_string(),
                        expected,
                    });
                }
            }
        }
    }
    report
}
