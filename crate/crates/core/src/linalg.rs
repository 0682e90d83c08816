//! Exact Gaussian elimination over carriers with negation.
//!
//! Pivots must be units. Over a field this is ordinary elimination; over a
//! ring a column whose non-zero entries are all non-units is reported as
//! [`Error::NotAField`].

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::semiring::{Element, Semiring};

/// Reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

fn rows_of(m: &Matrix) -> Vec<Vec<Element>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

/// Row-reduces `m`, considering only the first `limit` columns as pivot
/// candidates.
fn reduce(s: &Semiring, rows: &mut [Vec<Element>], limit: usize) -> Result<Vec<usize>> {
    if !s.has_negation() {
        return Err(Error::NotARing(s.name()));
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == rows.len() {
            break;
        }
        let mut found = None;
        let mut blocked = false;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if s.is_zero(&row[c]) {
                continue;
            }
            match s.inv(&row[c])? {
                Some(inv) => {
                    found = Some((i, inv));
                    break;
                }
                None => blocked = true,
            }
        }
        let Some((i, inv)) = found else {
            if blocked {
                return Err(Error::NotAField(format!("no unit pivot in column {c} over {}", s.name())));
            }
            continue;
        };
        rows.swap(r, i);
        for x in rows[r].iter_mut() {
            *x = s.mul(&inv, x)?;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || s.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !s.is_zero(p) {
                    *x = s.sub(x, &s.mul(&f, p)?)?;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub fn rref(m: &Matrix) -> Result<Rref> {
    let s = m.semiring();
    let mut rows = rows_of(m);
    let pivots = reduce(s, &mut rows, m.cols())?;
    let data = rows.into_iter().flatten().collect();
    Ok(Rref { matrix: Matrix::new(s, m.rows(), m.cols(), data)?, pivots })
}

pub fn rank(m: &Matrix) -> Result<usize> {
    Ok(rref(m)?.pivots.len())
}

/// Solves `a x = b` for a column `b`. Returns the solution with every free
/// variable set to zero, or `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    let s = a.semiring();
    if b.cols() != 1 || b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side {}x{} for a {}x{} system",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let n = a.cols();
    let mut rows = rows_of(a);
    for (i, row) in rows.iter_mut().enumerate() {
        row.push(b.get(i, 0).clone());
    }
    let pivots = reduce(s, &mut rows, n)?;
    if rows.iter().skip(pivots.len()).any(|row| !s.is_zero(&row[n])) {
        return Ok(None);
    }
    let mut x = vec![s.zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][n].clone();
    }
    Ok(Some(Matrix::column(s, x)?))
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &Matrix) -> Result<Option<Matrix>> {
    let s = m.semiring();
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let mut rows = rows_of(m);
    for (i, row) in rows.iter_mut().enumerate() {
        row.extend((0..n).map(|j| if i == j { s.one() } else { s.zero() }));
    }
    let pivots = reduce(s, &mut rows, n)?;
    if pivots.len() < n {
        return Ok(None);
    }
    let data = rows.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
    Ok(Some(Matrix::new(s, n, n, data)?))
}
