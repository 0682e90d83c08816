//! Exact two-phase simplex over the rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, obj: &mut [Q], r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut [Q]| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(obj);
        self.basis[r] = c;
    }

    /// Objective row `c_B B^-1 A - c` with the current value in the last slot.
    fn objective(&self, c: &[Q]) -> Vec<Q> {
        let mut obj: Vec<Q> = (0..=self.width).map(|j| if j < c.len() { -c[j].clone() } else { Q::zero() }).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c.get(b).cloned().unwrap_or_else(Q::zero);
            if cb.is_zero() {
                continue;
            }
            for (o, t) in obj.iter_mut().zip(&self.rows[i]) {
                *o = &*o + &cb * t;
            }
        }
        obj
    }

    /// Maximises; returns false when unbounded.
    fn run(&mut self, obj: &mut [Q], allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*k]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(obj, r, c);
        }
    }
}

/// Maximises `c.x` subject to `A x = b`, `x >= 0`.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "constraint row length");
        let flip = b[i].is_negative();
        let mut r: Vec<Q> = row.iter().map(|x| if flip { -x.clone() } else { x.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        r.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(r);
    }
    let mut t = Tableau { rows, basis: (n..width).collect(), width };

    // phase one: maximise minus the sum of artificials
    let phase_one: Vec<Q> = (0..width).map(|j| if j < n { Q::zero() } else { -Q::one() }).collect();
    let mut obj = t.objective(&phase_one);
    t.run(&mut obj, width);
    if !obj[width].is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive zero-level artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(&mut obj, i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut obj = t.objective(c);
    if !t.run(&mut obj, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        x[bv] = t.rhs(i).clone();
    }
    LpOutcome::Optimal { value: obj[width].clone(), x }
}
