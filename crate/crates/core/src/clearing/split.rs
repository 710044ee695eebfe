//! Priority-proportional division of a firm's outgoing payment.

use crate::model::LiabilityMatrix;
use crate::money::Money;
use crate::strategy::{Strategy, StrategyProfile};
use num::{Signed, Zero};

/// Splits `p_total` over creditors: classes are served in order, and the
/// first class that cannot be paid in full shares the remainder in
/// proportion to its claims. Any excess over the row total is ignored.
pub fn pp_split(p_total: &Money, strategy: &Strategy, liability_row: &[Money]) -> Vec<Money> {
    let mut out = vec![Money::zero(); liability_row.len()];
    let mut left = p_total.clone();
    for class in strategy.classes() {
        if !left.is_positive() {
            break;
        }
        let width: Money = class.iter().map(|&j| &liability_row[j]).sum();
        if width.is_zero() {
            continue;
        }
        if left >= width {
            for &j in class {
                out[j] = liability_row[j].clone();
            }
            left -= width;
        } else {
            for &j in class {
                out[j] = &left * &liability_row[j] / &width;
            }
            left = Money::zero();
        }
    }
    out
}

/// One priority class with its position on the firm's payment axis.
#[derive(Debug, Clone)]
pub(crate) struct ClassPlan {
    /// Total owed to earlier classes.
    pub start: Money,
    /// Total owed to this class.
    pub width: Money,
    /// `(creditor, l_ij)` pairs.
    pub members: Vec<(usize, Money)>,
}

impl ClassPlan {
    pub fn end(&self) -> Money {
        &self.start + &self.width
    }
}

/// Priority classes of every firm with positive width, ready for
/// evaluation.
#[derive(Debug, Clone)]
pub(crate) struct PayPlan {
    pub firms: Vec<Vec<ClassPlan>>,
}

impl PayPlan {
    pub fn new(profile: &StrategyProfile, liab: &LiabilityMatrix) -> Self {
        let firms = profile
            .strategies
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut start = Money::zero();
                let mut classes = Vec::new();
                for class in s.classes() {
                    let members: Vec<(usize, Money)> = class
                        .iter()
                        .map(|&j| (j, liab.l[i][j].clone()))
                        .filter(|(_, l)| l.is_positive())
                        .collect();
                    let width: Money = members.iter().map(|(_, l)| l).sum();
                    if width.is_zero() {
                        continue;
                    }
                    let next = &start + &width;
                    classes.push(ClassPlan {
                        start,
                        width,
                        members,
                    });
                    start = next;
                }
                classes
            })
            .collect();
        PayPlan { firms }
    }

    /// Payment matrix for the given total payments.
    pub fn matrix(&self, totals: &[Money]) -> Vec<Vec<Money>> {
        let n = self.firms.len();
        let mut p = vec![vec![Money::zero(); n]; n];
        for (i, classes) in self.firms.iter().enumerate() {
            let x = &totals[i];
            for c in classes {
                if x <= &c.start {
                    break;
                }
                if x >= &c.end() {
                    for (j, l) in &c.members {
                        p[i][*j] = l.clone();
                    }
                } else {
                    let filled = x - &c.start;
                    for (j, l) in &c.members {
                        p[i][*j] = &filled * l / &c.width;
                    }
                }
            }
        }
        p
    }
}
