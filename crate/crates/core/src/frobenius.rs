//! Frobenius algebras in `Mat(S)`: classical structures, group algebras,
//! normalisation and strong complementarity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::semiring::{decompose_pure, Element, Semiring};

/// `Z_{n_1} x ... x Z_{n_k}`. Elements are indexed in mixed radix with the
/// first factor most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::InvalidParameter("cyclic factors must have order at least 1".into()));
        }
        let order = factors.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n));
        match order {
            Some(n) if n <= 1 << 16 => Ok(FiniteAbelianGroup { factors }),
            _ => Err(Error::SizeBound(format!("group {factors:?} is too large"))),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("cyclic group")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    pub fn element(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = i as u64 % n;
            i /= n as usize;
        }
        out
    }

    pub fn index(&self, g: &[u64]) -> usize {
        g.iter().zip(&self.factors).fold(0usize, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.element(a), self.element(b));
        let sum: Vec<u64> = x.iter().zip(&y).zip(&self.factors).map(|((a, b), n)| (a + b) % n).collect();
        self.index(&sum)
    }

    pub fn inverse(&self, a: usize) -> usize {
        let x = self.element(a);
        let neg: Vec<u64> = x.iter().zip(&self.factors).map(|(a, n)| (n - a) % n).collect();
        self.index(&neg)
    }

    /// Order of the element with index `a`.
    pub fn element_order(&self, a: usize) -> u64 {
        let (mut k, mut x) = (1, a);
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by the given element indices, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([0usize]);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.op(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// All subgroups as sorted index sets, smallest first.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0]]);
        let mut frontier = vec![vec![0usize]];
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generated(&gens);
                if found.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        let mut all: Vec<_> = found.into_iter().collect();
        all.sort_by_key(|h| (h.len(), h.clone()));
        all
    }

    /// Every abelian group of order `n`, once each, in invariant-factor form
    /// `d_1 | d_2 | ... | d_k`.
    pub fn all_of_order(n: u64) -> Vec<FiniteAbelianGroup> {
        fn rec(rest: u64, min: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if rest == 1 {
                out.push(acc.clone());
                return;
            }
            for d in (min.max(2)..=rest).filter(|d| rest.is_multiple_of(*d) && d % min == 0) {
                // remaining factors must be multiples of d
                let r = rest / d;
                if r != 1 && !r.is_multiple_of(d) {
                    continue;
                }
                acc.push(d);
                rec(r, d, acc, out);
                acc.pop();
            }
        }
        if n == 1 {
            return vec![FiniteAbelianGroup::cyclic(1)];
        }
        let mut out = Vec::new();
        rec(n, 1, &mut Vec::new(), &mut out);
        out.into_iter().map(|f| FiniteAbelianGroup { factors: f }).collect()
    }
}

/// A multiplication `d x d^2` and unit `d x 1`; comultiplication and
/// counit are their daggers.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusAlgebra {
    semiring: Semiring,
    dim: usize,
    mult: Matrix,
    unit: Matrix,
}

impl FrobeniusAlgebra {
    pub fn new(mult: Matrix, unit: Matrix) -> Result<Self> {
        let d = unit.rows();
        if unit.cols() != 1 || mult.shape() != (d, d * d) {
            return Err(Error::DimensionMismatch(format!(
                "mult {}x{} and unit {}x{}",
                mult.rows(),
                mult.cols(),
                unit.rows(),
                unit.cols()
            )));
        }
        if mult.semiring() != unit.semiring() {
            return Err(Error::SemiringMismatch);
        }
        Ok(FrobeniusAlgebra { semiring: mult.semiring().clone(), dim: d, mult, unit })
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn mult(&self) -> &Matrix {
        &self.mult
    }
    pub fn unit(&self) -> &Matrix {
        &self.unit
    }
    pub fn comult(&self) -> Matrix {
        self.mult.dagger()
    }
    pub fn counit(&self) -> Matrix {
        self.unit.dagger()
    }
}

/// The copying structure of the computational basis.
pub fn classical_structure(s: &Semiring, d: usize) -> FrobeniusAlgebra {
    let mult = Matrix::from_fn(s, d, d * d, |r, c| if c / d == r && c % d == r { s.one() } else { s.zero() });
    let unit = Matrix::from_fn(s, d, 1, |_, _| s.one());
    FrobeniusAlgebra { semiring: s.clone(), dim: d, mult, unit }
}

/// The group algebra `S[G]`: `|g>|h> -> |g h>`, unit `|e>`.
pub fn group_algebra(s: &Semiring, g: &FiniteAbelianGroup) -> FrobeniusAlgebra {
    let d = g.order();
    let mult = Matrix::from_fn(s, d, d * d, |r, c| if g.op(c / d, c % d) == r { s.one() } else { s.zero() });
    let unit = Matrix::ket(s, d, 0);
    FrobeniusAlgebra { semiring: s.clone(), dim: d, mult, unit }
}

/// An invertible `z` with `z* z = |G| 1`, the first one in carrier order.
pub fn normalisation_witness(s: &Semiring, g: &FiniteAbelianGroup) -> Option<Element> {
    let n = s.from_int(g.order() as i64).ok()?;
    scalar_witness(s, &n)
}

fn scalar_witness(s: &Semiring, n: &Element) -> Option<Element> {
    let z = decompose_pure(s, n)?;
    s.inv(&z).ok().flatten().map(|_| z)
}

fn id(s: &Semiring, d: usize) -> Matrix {
    Matrix::identity(s, d)
}

fn kron3(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<Matrix> {
    a.kron(b)?.kron(c)
}

/// Compares two equal-shaped matrices; on mismatch returns the first
/// differing column decoded into basis indices of the input tensor factors.
fn compare(lhs: &Matrix, rhs: &Matrix, d: usize, arity: usize) -> Value {
    for c in 0..lhs.cols() {
        for r in 0..lhs.rows() {
            if lhs.get(r, c) != rhs.get(r, c) {
                let mut idx = vec![0; arity];
                let mut x = c;
                for slot in idx.iter_mut().rev() {
                    *slot = x % d;
                    x /= d;
                }
                return json!({"input": idx, "output_index": r});
            }
        }
    }
    Value::Null
}

fn push_eq(report: &mut CheckReport, name: &str, lhs: &Matrix, rhs: &Matrix, d: usize, arity: usize) {
    let w = compare(lhs, rhs, d, arity);
    report.push(name, w.is_null(), w);
}

/// Associativity, unit laws, commutativity, the Frobenius law, and the
/// speciality scalar `m m^dagger = k id`.
pub fn check_frobenius(f: &FrobeniusAlgebra) -> Result<CheckReport> {
    let s = &f.semiring;
    let d = f.dim;
    let i = id(s, d);
    let (m, u, delta) = (&f.mult, &f.unit, f.comult());
    let mut report = CheckReport::new(format!("Frobenius algebra on {}^{d}", s.name()), true);

    let assoc_l = m.matmul(&m.kron(&i)?)?;
    let assoc_r = m.matmul(&i.kron(m)?)?;
    push_eq(&mut report, "associativity", &assoc_l, &assoc_r, d, 3);

    let unit_l = m.matmul(&u.kron(&i)?)?;
    let unit_r = m.matmul(&i.kron(u)?)?;
    let ok_unit = compare(&unit_l, &i, d, 1);
    let ok_unit = if ok_unit.is_null() { compare(&unit_r, &i, d, 1) } else { ok_unit };
    report.push("unit", ok_unit.is_null(), ok_unit);

    let swapped = m.matmul(&Matrix::swap(s, d, d))?;
    push_eq(&mut report, "commutativity", &swapped, m, d, 2);

    let frob_l = i.kron(m)?.matmul(&delta.kron(&i)?)?;
    let frob_mid = delta.matmul(m)?;
    let frob_r = m.kron(&i)?.matmul(&i.kron(&delta)?)?;
    let w = compare(&frob_l, &frob_mid, d, 2);
    let w = if w.is_null() { compare(&frob_r, &frob_mid, d, 2) } else { w };
    report.push("frobenius_law", w.is_null(), w);

    let special = m.matmul(&delta)?;
    let k = special.get(0, 0).clone();
    let scaled = i.scale(&k)?;
    let w = compare(&special, &scaled, d, 1);
    if w.is_null() {
        report.push("speciality", true, json!({"scalar": s.to_json(&k), "special": s.is_one(&k)}));
    } else {
        report.push("speciality", false, w);
    }
    Ok(report)
}

fn pair_checks(z: &FrobeniusAlgebra, x: &FrobeniusAlgebra) -> Result<()> {
    if z.dim != x.dim {
        return Err(Error::DimensionMismatch(format!("dimensions {} and {}", z.dim, x.dim)));
    }
    if z.semiring != x.semiring {
        return Err(Error::SemiringMismatch);
    }
    Ok(())
}

/// Checks that `(z, x)` is strongly complementary after normalising `x` by
/// the first invertible `w` with `w* w` equal to its quasi-speciality scalar.
pub fn check_strong_complementarity(z: &FrobeniusAlgebra, x: &FrobeniusAlgebra) -> Result<CheckReport> {
    pair_checks(z, x)?;
    let s = &z.semiring;
    let d = z.dim;
    let i = id(s, d);
    let mm = x.mult.matmul(&x.comult())?;
    let k = mm.get(0, 0).clone();
    if mm != i.scale(&k)? {
        return Err(Error::NotNormalisable("m m^dagger is not a scalar multiple of the identity".into()));
    }
    let w = scalar_witness(s, &k).ok_or_else(|| {
        Error::NotNormalisable(format!("{} is not z* z for an invertible z in {}", s.render(&k), s.name()))
    })?;
    let w_inv = s.inv(&w)?.expect("witness is invertible");
    let m_hat = x.mult.scale(&w_inv)?;

    let mut report = CheckReport::new(format!("strong complementarity on {}^{d}", s.name()), true);
    report.push("normalisation", true, json!({"scalar": s.to_json(&k), "z": s.to_json(&w)}));
    let special = m_hat.matmul(&m_hat.dagger())?;
    push_eq(&mut report, "normalised_speciality", &special, &i, d, 1);
    bialgebra_laws(z, x, &mut report)?;
    Ok(report)
}

/// The bialgebra, unit-copying, counit and Hopf laws without normalising
/// `x`; usable when the quasi-speciality scalar has no invertible square root.
pub fn check_strong_complementarity_unnormalised(z: &FrobeniusAlgebra, x: &FrobeniusAlgebra) -> Result<CheckReport> {
    pair_checks(z, x)?;
    let s = &z.semiring;
    let mut report = CheckReport::new(format!("unnormalised strong complementarity on {}^{}", s.name(), z.dim), true);
    bialgebra_laws(z, x, &mut report)?;
    Ok(report)
}

fn bialgebra_laws(z: &FrobeniusAlgebra, x: &FrobeniusAlgebra, report: &mut CheckReport) -> Result<()> {
    let s = &z.semiring;
    let d = z.dim;
    let i = id(s, d);
    let (dz, ez) = (z.comult(), z.counit());
    let (mx, ux) = (&x.mult, &x.unit);

    let bi_l = dz.matmul(mx)?;
    let middle = kron3(&i, &Matrix::swap(s, d, d), &i)?;
    let bi_r = mx.kron(mx)?.matmul(&middle)?.matmul(&dz.kron(&dz)?)?;
    push_eq(report, "bialgebra", &bi_l, &bi_r, d, 2);

    let copy_l = dz.matmul(ux)?;
    let copy_r = ux.kron(ux)?;
    push_eq(report, "copies_unit", &copy_l, &copy_r, d, 0);

    let counit_l = ez.matmul(mx)?;
    let counit_r = ez.kron(&ez)?;
    push_eq(report, "counit_multiplicative", &counit_l, &counit_r, d, 2);

    let scalar = ez.matmul(ux)?;
    let ok = s.is_one(scalar.get(0, 0));
    report.push("counit_on_unit", ok, json!(s.to_json(scalar.get(0, 0))));

    // antipode: the basis permutation g -> g^{-1} read off from mult and unit
    let perm: Option<Vec<usize>> =
        (0..d).map(|g| (0..d).find(|&h| (0..d).all(|r| mx.get(r, g * d + h) == ux.get(r, 0)))).collect();
    match perm {
        Some(perm) => {
            let sa = Matrix::from_fn(s, d, d, |r, c| if perm[c] == r { s.one() } else { s.zero() });
            let hopf_l = mx.matmul(&i.kron(&sa)?)?.matmul(&dz)?;
            let hopf_r = ux.matmul(&ez)?;
            push_eq(report, "hopf", &hopf_l, &hopf_r, d, 1);
        }
        None => report.push("hopf", false, json!("no basis antipode")),
    }
    Ok(())
}
