//! Small dense linear algebra over exact rationals.

use crate::money::Money;
use num::Zero;

pub type Matrix = Vec<Vec<Money>>;

pub fn identity(n: usize) -> Matrix {
    let mut m = vec![vec![Money::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = num::One::one();
    }
    m
}

pub fn mat_vec(a: &Matrix, x: &[Money]) -> Vec<Money> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(c, _)| !c.is_zero())
                .fold(Money::zero(), |acc, (c, v)| acc + c * v)
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Money::zero(); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += aik * &b[k][j];
                }
            }
        }
    }
    out
}

/// Solves `m x = rhs` by Gauss-Jordan elimination; `None` if `m` is singular.
pub fn solve(mut m: Matrix, mut rhs: Vec<Money>) -> Option<Vec<Money>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..n {
            m[col][j] = &m[col][j] / &p;
        }
        rhs[col] = &rhs[col] / &p;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in col..n {
                let delta = &f * &m[col][j];
                m[r][j] -= delta;
            }
            let delta = &f * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}
