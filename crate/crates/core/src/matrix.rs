//! Dense matrices over a semiring: the morphisms of `Mat(S)`.

use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::semiring::{Element, Semiring};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    semiring: Semiring,
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}[", self.semiring.name(), self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.semiring.render(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

fn dims(what: &str, a: (usize, usize), b: (usize, usize)) -> Error {
    Error::DimensionMismatch(format!("{what}: {}x{} vs {}x{}", a.0, a.1, b.0, b.1))
}

impl Matrix {
    /// Row-major constructor; every entry must lie in the carrier.
    pub fn new(s: &Semiring, rows: usize, cols: usize, data: Vec<Element>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|e| !s.contains(e)) {
            return Err(Error::NotInCarrier(format!("{bad} in {}", s.name())));
        }
        Ok(Matrix { semiring: s.clone(), rows, cols, data })
    }

    pub fn from_fn(s: &Semiring, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Element) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols.max(1), k % cols.max(1))).collect();
        Matrix { semiring: s.clone(), rows, cols, data }
    }

    pub fn zeros(s: &Semiring, rows: usize, cols: usize) -> Self {
        Matrix { semiring: s.clone(), rows, cols, data: vec![s.zero(); rows * cols] }
    }

    pub fn identity(s: &Semiring, d: usize) -> Self {
        Self::from_fn(s, d, d, |i, j| if i == j { s.one() } else { s.zero() })
    }

    /// The 1x1 matrix holding `e`.
    pub fn scalar(s: &Semiring, e: Element) -> Self {
        Matrix { semiring: s.clone(), rows: 1, cols: 1, data: vec![e] }
    }

    /// Integer literal rows, mapped through `n -> n * 1`.
    pub fn from_ints(s: &Semiring, rows: &[&[i64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged integer rows".into()));
        }
        let data = rows.iter().flat_map(|row| row.iter()).map(|&n| s.from_int(n)).collect::<Result<_>>()?;
        Ok(Matrix { semiring: s.clone(), rows: r, cols: c, data })
    }

    /// Column vector.
    pub fn column(s: &Semiring, entries: Vec<Element>) -> Result<Self> {
        let n = entries.len();
        Self::new(s, n, 1, entries)
    }

    /// Basis ket `|i>` in dimension `d`.
    pub fn ket(s: &Semiring, d: usize, i: usize) -> Self {
        Self::from_fn(s, d, 1, |r, _| if r == i { s.one() } else { s.zero() })
    }

    /// Basis bra `<i|` in dimension `d`.
    pub fn bra(s: &Semiring, d: usize, i: usize) -> Self {
        Self::from_fn(s, 1, d, |_, c| if c == i { s.one() } else { s.zero() })
    }

    /// The symmetry `|i j> -> |j i>` on `d1 (x) d2`.
    pub fn swap(s: &Semiring, d1: usize, d2: usize) -> Self {
        let n = d1 * d2;
        Self::from_fn(s, n, n, |r, c| {
            let (i, j) = (c / d2, c % d2);
            if r == j * d1 + i {
                s.one()
            } else {
                s.zero()
            }
        })
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[Element] {
        &self.data
    }
    pub fn into_data(self) -> Vec<Element> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.data[i * self.cols + j]
    }

    /// A copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, e: Element) -> Self {
        let mut m = self.clone();
        m.data[i * self.cols + j] = e;
        m
    }

    fn same_semiring(&self, other: &Matrix) -> Result<()> {
        if self.semiring == other.semiring {
            Ok(())
        } else {
            Err(Error::SemiringMismatch)
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.matmul_with(other, Exec::default())
    }

    /// Matrix product, with rows of the result computed under `exec`.
    pub fn matmul_with(&self, other: &Matrix, exec: Exec) -> Result<Matrix> {
        self.same_semiring(other)?;
        if self.cols != other.rows {
            return Err(dims("matmul", self.shape(), other.shape()));
        }
        let s = &self.semiring;
        let (n, m) = (self.cols, other.cols);
        let rows = exec.try_map_range(self.rows, |i| {
            (0..m)
                .map(|j| {
                    let mut acc = s.zero();
                    for k in 0..n {
                        let a = &self.data[i * n + k];
                        if s.is_zero(a) {
                            continue;
                        }
                        acc = s.add(&acc, &s.mul(a, &other.data[k * m + j])?)?;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(Matrix { semiring: s.clone(), rows: self.rows, cols: m, data: rows.into_iter().flatten().collect() })
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        self.same_semiring(other)?;
        let s = &self.semiring;
        let (r2, c2) = other.shape();
        let rows = self.rows * r2;
        let cols = self.cols * c2;
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(s.mul(self.get(r / r2, c / c2), other.get(r % r2, c % c2))?);
            }
        }
        Ok(Matrix { semiring: s.clone(), rows, cols, data })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.semiring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise involution.
    pub fn conj(&self) -> Matrix {
        let s = &self.semiring;
        Matrix { data: self.data.iter().map(|e| s.involution(e)).collect(), ..self.clone() }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Matrix {
        let s = &self.semiring;
        Matrix::from_fn(s, self.cols, self.rows, |i, j| s.involution(self.get(j, i)))
    }

    fn zip(&self, other: &Matrix, what: &str, f: impl Fn(&Element, &Element) -> Result<Element>) -> Result<Matrix> {
        self.same_semiring(other)?;
        if self.shape() != other.shape() {
            return Err(dims(what, self.shape(), other.shape()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, "add", |a, b| self.semiring.add(a, b))
    }

    /// Difference; needs additive inverses in the carrier.
    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, "sub", |a, b| self.semiring.sub(a, b))
    }

    pub fn neg(&self) -> Result<Matrix> {
        let s = &self.semiring;
        let data =
            self.data.iter().map(|e| s.neg(e).ok_or_else(|| Error::NotARing(s.name()))).collect::<Result<_>>()?;
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn scale(&self, k: &Element) -> Result<Matrix> {
        let s = &self.semiring;
        let data = self.data.iter().map(|e| s.mul(k, e)).collect::<Result<_>>()?;
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn map(&self, f: impl Fn(&Element) -> Element) -> Matrix {
        Matrix { data: self.data.iter().map(f).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.semiring.is_zero(e))
    }

    pub fn trace(&self) -> Result<Element> {
        if self.rows != self.cols {
            return Err(dims("trace", self.shape(), self.shape()));
        }
        self.semiring.sum((0..self.rows).map(|i| self.get(i, i)))
    }

    /// Rows as JSON arrays of element literals.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.semiring.to_json(self.get(i, j))).collect()))
                .collect(),
        )
    }

    /// Reads the array-of-rows form written by [`to_json`](Self::to_json).
    pub fn from_json(s: &Semiring, v: &Value) -> Result<Matrix> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("a matrix is an array of rows".into()))?;
        let mut data = Vec::new();
        let mut cols = None;
        for row in rows {
            let row = row.as_array().ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
            if *cols.get_or_insert(row.len()) != row.len() {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            for e in row {
                data.push(s.parse(e)?);
            }
        }
        Matrix::new(s, rows.len(), cols.unwrap_or(0), data)
    }
}

/// Cup `sum_x |xx>` (d^2 x 1) and cap (its dagger).
pub fn compact_structure(s: &Semiring, d: usize) -> (Matrix, Matrix) {
    let cup = Matrix::from_fn(s, d * d, 1, |r, _| if r / d == r % d { s.one() } else { s.zero() });
    let cap = cup.dagger();
    (cup, cap)
}
