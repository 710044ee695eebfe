//! Exact fixed point of the default-set payment map.
//!
//! With the default set fixed, firm `i` in default pays
//! `clamp(α e_i + β Σ_j split_j(x_j)_i, 0, L_i)`. This map is monotone and
//! piecewise affine. Around the current point each coordinate sits in one
//! piece (a priority class of its own split and a clamp state), so the map is
//! affine there and its fixed point can be solved for directly. When the
//! solution leaves the piece, the iteration is advanced exactly to the first
//! iterate outside it, and the next piece takes over. Pieces only move in
//! one direction, which bounds the number of switches.

use super::linalg::{self, Matrix};
use super::split::PayPlan;
use crate::error::{Error, Result};
use crate::money::Money;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Greatest fixed point below the start (iterates decrease).
    Down,
    /// Least fixed point above the start (iterates increase).
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Clamp {
    Zero,
    Linear,
    Full,
}

struct Problem<'a> {
    plan: &'a PayPlan,
    /// Liability matrix rows, used for firms that pay in full.
    l: &'a [Vec<Money>],
    totals: &'a [Money],
    /// Constant term of each firm's default payment (`α e_i`).
    base: Vec<Money>,
    beta: Money,
    /// Indices of free variables (defaulting firms with `L_i > 0`).
    vars: Vec<usize>,
    /// Position of each firm in `vars`.
    slot: Vec<Option<usize>>,
    dir: Direction,
}

struct Regime {
    seg: Vec<usize>,
    clamp: Vec<Clamp>,
}

/// Affine map `x ↦ a x + b` on the free variables.
#[derive(Clone)]
struct Affine {
    a: Matrix,
    b: Vec<Money>,
}

impl Affine {
    fn apply(&self, x: &[Money]) -> Vec<Money> {
        linalg::mat_vec(&self.a, x)
            .into_iter()
            .zip(&self.b)
            .map(|(v, c)| v + c)
            .collect()
    }

    fn compose(&self, inner: &Affine) -> Affine {
        Affine {
            a: linalg::mat_mul(&self.a, &inner.a),
            b: self.apply(&inner.b),
        }
    }
}

impl<'a> Problem<'a> {
    fn m(&self) -> usize {
        self.vars.len()
    }

    /// Pre-clamp value `α e_i + β · inflow_i(x)` for all free variables,
    /// using the true split.
    fn raw(&self, x: &[Money]) -> Vec<Money> {
        let n = self.totals.len();
        let mut full = self.totals.to_vec();
        for (k, &i) in self.vars.iter().enumerate() {
            full[i] = x[k].clone();
        }
        let p = self.plan.matrix(&full);
        self.vars
            .iter()
            .map(|&i| {
                let inflow: Money = (0..n).map(|j| &p[j][i]).sum();
                &self.base[i] + &self.beta * inflow
            })
            .collect()
    }

    fn regime(&self, x: &[Money]) -> Regime {
        let raw = self.raw(x);
        let mut seg = Vec::with_capacity(self.m());
        let mut clamp = Vec::with_capacity(self.m());
        for (k, &i) in self.vars.iter().enumerate() {
            let classes = &self.plan.firms[i];
            let pick = match self.dir {
                Direction::Down => classes.iter().position(|c| x[k] <= c.end()),
                Direction::Up => classes.iter().position(|c| x[k] < c.end()),
            };
            seg.push(pick.unwrap_or(classes.len() - 1));
            let r = &raw[k];
            let li = &self.totals[i];
            clamp.push(match self.dir {
                Direction::Down if !r.is_positive() => Clamp::Zero,
                Direction::Down if r > li => Clamp::Full,
                Direction::Up if r.is_negative() => Clamp::Zero,
                Direction::Up if r >= li => Clamp::Full,
                _ => Clamp::Linear,
            });
        }
        Regime { seg, clamp }
    }

    /// Affine form of the raw value inside the regime's split pieces.
    fn raw_affine(&self, reg: &Regime) -> Affine {
        let m = self.m();
        let n = self.totals.len();
        let mut a = vec![vec![Money::zero(); m]; m];
        let mut b = vec![Money::zero(); m];
        for (k, &i) in self.vars.iter().enumerate() {
            let mut constant = Money::zero();
            for j in 0..n {
                match self.slot[j] {
                    None => constant += &self.l[j][i],
                    Some(s) => {
                        for (c_idx, class) in self.plan.firms[j].iter().enumerate() {
                            let Some((_, lji)) = class.members.iter().find(|(t, _)| *t == i) else {
                                continue;
                            };
                            if c_idx < reg.seg[s] {
                                constant += lji;
                            } else if c_idx == reg.seg[s] {
                                let slope = lji / &class.width;
                                constant -= &slope * &class.start;
                                a[k][s] += slope;
                            }
                        }
                    }
                }
            }
            for v in a[k].iter_mut() {
                *v = &*v * &self.beta;
            }
            b[k] = &self.base[i] + &self.beta * constant;
        }
        Affine { a, b }
    }

    fn map_affine(&self, reg: &Regime, raw: &Affine) -> Affine {
        let mut g = raw.clone();
        for (k, &i) in self.vars.iter().enumerate() {
            match reg.clamp[k] {
                Clamp::Linear => {}
                Clamp::Zero => {
                    g.a[k].iter_mut().for_each(|v| *v = Money::zero());
                    g.b[k] = Money::zero();
                }
                Clamp::Full => {
                    g.a[k].iter_mut().for_each(|v| *v = Money::zero());
                    g.b[k] = self.totals[i].clone();
                }
            }
        }
        g
    }

    /// Whether `x` lies in the closure of the regime's region on the side
    /// the iteration is heading to.
    fn inside(&self, reg: &Regime, raw: &Affine, x: &[Money]) -> bool {
        let r = raw.apply(x);
        self.vars.iter().enumerate().all(|(k, &i)| {
            let class = &self.plan.firms[i][reg.seg[k]];
            let li = &self.totals[i];
            match self.dir {
                Direction::Down => {
                    x[k] >= class.start
                        && match reg.clamp[k] {
                            Clamp::Zero => true,
                            Clamp::Linear => !r[k].is_negative(),
                            Clamp::Full => &r[k] >= li,
                        }
                }
                Direction::Up => {
                    x[k] <= class.end()
                        && match reg.clamp[k] {
                            Clamp::Zero => !r[k].is_positive(),
                            Clamp::Linear => &r[k] <= li,
                            Clamp::Full => true,
                        }
                }
            }
        })
    }

    /// Limit of the affine iteration from `x`, if finite.
    fn affine_limit(&self, g: &Affine, x: &[Money], gx: &[Money]) -> Option<Vec<Money>> {
        let m = self.m();
        let mut reached = vec![false; m];
        let mut stack: Vec<usize> = (0..m).filter(|&k| gx[k] != x[k]).collect();
        for &k in &stack {
            reached[k] = true;
        }
        while let Some(k) = stack.pop() {
            for i in 0..m {
                if !reached[i] && !g.a[i][k].is_zero() {
                    reached[i] = true;
                    stack.push(i);
                }
            }
        }
        let t: Vec<usize> = (0..m).filter(|&k| reached[k]).collect();
        let mut sys = vec![vec![Money::zero(); t.len()]; t.len()];
        let mut rhs = Vec::with_capacity(t.len());
        for (r, &i) in t.iter().enumerate() {
            let mut c = g.b[i].clone();
            for k in 0..m {
                if !reached[k] {
                    c += &g.a[i][k] * &x[k];
                }
            }
            rhs.push(c);
            for (q, &k) in t.iter().enumerate() {
                sys[r][q] = -g.a[i][k].clone();
            }
            sys[r][r] += Money::one();
        }
        let sol = linalg::solve(sys, rhs)?;
        let mut y = x.to_vec();
        for (q, &k) in t.iter().enumerate() {
            y[k] = sol[q].clone();
        }
        Some(y)
    }

    /// First iterate of `g` from `x` that leaves the regime.
    fn leave(&self, reg: &Regime, raw: &Affine, g: &Affine, x: &[Money]) -> Result<Vec<Money>> {
        const MAX_DOUBLINGS: usize = 64;
        let mut powers = vec![g.clone()];
        loop {
            let last = powers.last().expect("nonempty");
            if !self.inside(reg, raw, &last.apply(x)) {
                break;
            }
            if powers.len() > MAX_DOUBLINGS {
                return Err(Error::NonFiniteRegime(powers.len()));
            }
            let next = last.compose(last);
            powers.push(next);
        }
        let mut cur = x.to_vec();
        for p in powers.iter().rev().skip(1) {
            let cand = p.apply(&cur);
            if self.inside(reg, raw, &cand) {
                cur = cand;
            }
        }
        Ok(g.apply(&cur))
    }

    fn solve(&self, start: Vec<Money>) -> Result<Vec<Money>> {
        let limit = self
            .vars
            .iter()
            .map(|&i| self.plan.firms[i].len() + 2)
            .sum::<usize>()
            + 2;
        let mut x = start;
        for _ in 0..limit {
            let reg = self.regime(&x);
            let raw = self.raw_affine(&reg);
            let g = self.map_affine(&reg, &raw);
            let gx = g.apply(&x);
            if gx == x {
                return Ok(x);
            }
            let monotone = gx.iter().zip(&x).all(|(a, b)| match self.dir {
                Direction::Down => a <= b,
                Direction::Up => a >= b,
            });
            if !monotone {
                return Err(Error::NonFiniteRegime(0));
            }
            if let Some(y) = self.affine_limit(&g, &x, &gx) {
                if self.inside(&reg, &raw, &y) {
                    return Ok(y);
                }
            }
            x = self.leave(&reg, &raw, &g, &x)?;
        }
        Err(Error::NonFiniteRegime(limit))
    }
}

/// Fixed point of the payment map with default set `in_default`, starting
/// from the total payments `start`. Firms in default pay
/// `clamp(base_i + β · inflow_i, 0, L_i)`; all others pay their total
/// liabilities.
pub(crate) fn solve(
    plan: &PayPlan,
    l: &[Vec<Money>],
    totals: &[Money],
    base: &[Money],
    beta: &Money,
    in_default: &[bool],
    start: &[Money],
    dir: Direction,
) -> Result<Vec<Money>> {
    let n = totals.len();
    let mut vars = Vec::new();
    let mut slot = vec![None; n];
    for i in 0..n {
        if in_default[i] && totals[i].is_positive() {
            slot[i] = Some(vars.len());
            vars.push(i);
        }
    }
    let problem = Problem {
        plan,
        l,
        totals,
        base: base.to_vec(),
        beta: beta.clone(),
        vars,
        slot,
        dir,
    };
    let x0: Vec<Money> = problem.vars.iter().map(|&i| start[i].clone()).collect();
    let x = problem.solve(x0)?;
    let mut out = totals.to_vec();
    for i in 0..n {
        if in_default[i] && !totals[i].is_positive() {
            out[i] = Money::zero();
        }
    }
    for (k, &i) in problem.vars.iter().enumerate() {
        out[i] = x[k].clone();
    }
    Ok(out)
}
