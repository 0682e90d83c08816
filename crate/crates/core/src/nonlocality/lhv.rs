//! Local hidden variable models: signed over fields, nonnegative over the
//! rationals.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::lp::{maximize, LpOutcome};
use super::{digits, EmpiricalModel};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::semiring::{positive_subsemiring, render_rational, CarrierSpec, Element, Semiring};

type Q = BigRational;

/// Default cap on the number of global assignments for the field solver.
pub const DEFAULT_MAX_ASSIGNMENTS: u128 = 4096;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qs_json(v: &[Q]) -> Vec<String> {
    v.iter().map(render_rational).collect()
}

/// Every global assignment decoded into one outcome per (party, choice).
fn assignments(m: &EmpiricalModel, limit: u128) -> Result<Vec<Vec<usize>>> {
    let n = m.assignment_count().ok_or(Error::Overflow("global assignment count"))?;
    if n > limit {
        return Err(Error::SizeBound(format!("{n} global assignments exceed the limit of {limit}")));
    }
    let radix = m.assignment_radix();
    Ok((0..n as usize).map(|g| digits(g, &radix)).collect())
}

/// Tables induced by weights on global assignments.
pub fn marginals(m: &EmpiricalModel, s: &Semiring, weights: &[Element]) -> Result<Vec<Vec<Element>>> {
    let globals = assignments(m, u128::MAX)?;
    if weights.len() != globals.len() {
        return Err(Error::DimensionMismatch(format!("{} weights for {} assignments", weights.len(), globals.len())));
    }
    let cells: usize = m.outcomes().iter().product();
    (0..m.context_count())
        .map(|c| {
            let ctx = m.context(c);
            let mut t = vec![s.zero(); cells];
            for (g, w) in globals.iter().zip(weights) {
                let o = m.restrict(g, &ctx);
                t[o] = s.add(&t[o], w)?;
            }
            Ok(t)
        })
        .collect()
}

/// A signed global distribution over the field generated by the cone.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldLhv {
    pub field: Semiring,
    pub weights: Vec<Element>,
    /// Marginals reproduce every context table exactly.
    pub residual_zero: bool,
}

impl FieldLhv {
    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.spec(),
            "weights": self.weights.iter().map(|w| self.field.to_json(w)).collect::<Vec<_>>(),
            "residual_zero": self.residual_zero,
        })
    }
}

/// Solves for weights on global assignments reproducing every table and
/// summing to the common total. Free variables are set to zero.
pub fn lhv_solve_field(m: &EmpiricalModel) -> Result<Option<FieldLhv>> {
    let s = m.semiring();
    let cone = positive_subsemiring(s)?;
    if !cone.is_field() {
        return Err(Error::NotAField(format!("the positive cone of {}", s.name())));
    }
    let view = cone.field_view().expect("field cones have a field view");
    let f = view.field().clone();
    let globals = assignments(m, DEFAULT_MAX_ASSIGNMENTS)?;
    let n = globals.len();
    let cells: usize = m.outcomes().iter().product();
    let mut data = Vec::new();
    let mut rhs = Vec::new();
    for c in 0..m.context_count() {
        let ctx = m.context(c);
        let hit: Vec<usize> = globals.iter().map(|g| m.restrict(g, &ctx)).collect();
        for o in 0..cells {
            data.extend(hit.iter().map(|&h| if h == o { f.one() } else { f.zero() }));
            rhs.push(view.to_field(&m.tables()[c][o])?);
        }
    }
    data.extend((0..n).map(|_| f.one()));
    rhs.push(view.to_field(&m.total()?)?);
    let a = Matrix::new(&f, rhs.len(), n, data)?;
    let b = Matrix::column(&f, rhs)?;
    let Some(x) = linalg::solve(&a, &b)? else {
        return Ok(None);
    };
    let weights = x.into_data();
    let expected = m
        .tables()
        .iter()
        .map(|t| t.iter().map(|e| view.to_field(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let residual_zero = marginals(m, &f, &weights)? == expected;
    Ok(Some(FieldLhv { field: f, weights, residual_zero }))
}

/// Size limits for the nonnegative solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LpBounds {
    pub max_parties: usize,
    pub max_choices: usize,
    pub max_outcomes: usize,
}

impl Default for LpBounds {
    fn default() -> Self {
        LpBounds { max_parties: 2, max_choices: 2, max_outcomes: 2 }
    }
}

/// `sum beta[c][o] q[c][o] <= bound` for every local model `q` (normalised to
/// total 1), with `value` attained by the model under test.
#[derive(Debug, Clone, PartialEq)]
pub struct BellInequality {
    pub coefficients: Vec<Vec<Q>>,
    pub bound: Q,
    pub value: Q,
    pub margin: Q,
}

impl BellInequality {
    pub fn to_json(&self) -> Value {
        json!({
            "coefficients": self.coefficients.iter().map(|r| qs_json(r)).collect::<Vec<_>>(),
            "bound": render_rational(&self.bound),
            "value": render_rational(&self.value),
            "margin": render_rational(&self.margin),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum NonnegLhv {
    /// Nonnegative weights on global assignments reproducing the tables.
    Local { weights: Vec<Q> },
    /// Critical visibility `v* < 1` against uniform noise, with a separating
    /// inequality normalised to local bound 2, so its value is `2 / v*`.
    Nonlocal { visibility: Q, certificate: BellInequality },
}

impl NonnegLhv {
    pub fn is_local(&self) -> bool {
        matches!(self, NonnegLhv::Local { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            NonnegLhv::Local { weights } => json!({"local": true, "weights": qs_json(weights)}),
            NonnegLhv::Nonlocal { visibility, certificate } => json!({
                "local": false,
                "visibility": render_rational(visibility),
                "certificate": certificate.to_json(),
            }),
        }
    }
}

/// Normalised rational tables of a model over the rationals.
fn rational_tables(m: &EmpiricalModel) -> Result<(Vec<Vec<Q>>, Q)> {
    if !matches!(m.semiring().spec(), CarrierSpec::Rational) {
        return Err(Error::Unsupported(format!("nonnegative LHV needs rational entries, not {}", m.semiring().name())));
    }
    let raw: Vec<Vec<Q>> = m
        .tables()
        .iter()
        .map(|t| t.iter().map(|e| e.as_rational().cloned().expect("rational carrier")).collect())
        .collect();
    if raw.iter().flatten().any(Signed::is_negative) {
        return Err(Error::InvalidParameter("table entries must be nonnegative".into()));
    }
    let total: Q = raw[0].iter().sum();
    if !total.is_positive() {
        return Err(Error::InvalidParameter("tables must have a positive total".into()));
    }
    if raw.iter().any(|t| t.iter().sum::<Q>() != total) {
        return Err(Error::InvalidParameter("context totals differ".into()));
    }
    Ok((raw.into_iter().map(|t| t.into_iter().map(|x| x / &total).collect()).collect(), total))
}

pub fn lhv_check_nonneg(m: &EmpiricalModel) -> Result<NonnegLhv> {
    lhv_check_nonneg_with(m, LpBounds::default())
}

/// Decides whether a nonnegative global distribution exists by maximising
/// the visibility `v` with `v p + (1 - v) u` local for uniform `u`; the
/// dual optimum yields the certificate.
pub fn lhv_check_nonneg_with(m: &EmpiricalModel, bounds: LpBounds) -> Result<NonnegLhv> {
    if m.parties() > bounds.max_parties
        || m.choices().iter().any(|&c| c > bounds.max_choices)
        || m.outcomes().iter().any(|&o| o > bounds.max_outcomes)
    {
        return Err(Error::SizeBound(format!(
            "model {:?} choices / {:?} outcomes exceeds {} parties x {} choices x {} outcomes",
            m.choices(),
            m.outcomes(),
            bounds.max_parties,
            bounds.max_choices,
            bounds.max_outcomes
        )));
    }
    let (p, total) = rational_tables(m)?;
    let globals = assignments(m, u128::MAX)?;
    let cells: usize = m.outcomes().iter().product();
    let contexts = m.context_count();
    let k = contexts * cells;
    let g = globals.len();
    // vertex[g][k] = 1 iff assignment g yields outcome o in context c
    let vertex: Vec<Vec<bool>> = globals
        .iter()
        .map(|a| {
            let mut row = vec![false; k];
            for c in 0..contexts {
                row[c * cells + m.restrict(a, &m.context(c))] = true;
            }
            row
        })
        .collect();
    let flat_p: Vec<Q> = p.iter().flatten().cloned().collect();
    let u = Q::new(1.into(), (cells as i64).into());
    let gap: Vec<Q> = flat_p.iter().map(|x| x - &u).collect();

    // primal: vars w (g), v, s; rows per cell and v + s = 1
    let mut a = Vec::with_capacity(k + 1);
    let mut b = Vec::with_capacity(k + 1);
    for cell in 0..k {
        let mut row: Vec<Q> = vertex.iter().map(|vx| if vx[cell] { q(1) } else { q(0) }).collect();
        row.push(-gap[cell].clone());
        row.push(q(0));
        a.push(row);
        b.push(u.clone());
    }
    let mut cap = vec![q(0); g];
    cap.extend([q(1), q(1)]);
    a.push(cap);
    b.push(q(1));
    let mut c = vec![q(0); g];
    c.extend([q(1), q(0)]);
    let LpOutcome::Optimal { value: vis, x } = maximize(&c, &a, &b) else {
        return Err(Error::InvalidParameter("visibility LP has no optimum; tables are not a distribution".into()));
    };
    if vis.is_one() {
        return Ok(NonnegLhv::Local { weights: x[..g].iter().map(|w| w * &total).collect() });
    }
    if vis.is_zero() {
        return Err(Error::Unsupported("signalling model: no mixture with uniform noise is local".into()));
    }

    // dual: vars y+ (k), y- (k), slack per vertex (g), t
    let width = 2 * k + g + 1;
    let mut a = Vec::with_capacity(g + 1);
    let mut b = Vec::with_capacity(g + 1);
    for (i, vx) in vertex.iter().enumerate() {
        let mut row = vec![q(0); width];
        for cell in 0..k {
            if vx[cell] {
                row[cell] = q(1);
                row[k + cell] = q(-1);
            }
        }
        row[2 * k + i] = q(-1);
        a.push(row);
        b.push(q(0));
    }
    let mut row = vec![q(0); width];
    for cell in 0..k {
        row[cell] = -gap[cell].clone();
        row[k + cell] = gap[cell].clone();
    }
    row[width - 1] = q(-1);
    a.push(row);
    b.push(q(1));
    let mut c = vec![q(0); width];
    for cell in 0..k {
        c[cell] = -u.clone();
        c[k + cell] = u.clone();
    }
    let LpOutcome::Optimal { value: dual, x: y } = maximize(&c, &a, &b) else {
        return Err(Error::InvalidParameter("certificate LP has no optimum".into()));
    };
    debug_assert_eq!(-dual, vis);
    let y: Vec<Q> = (0..k).map(|i| &y[i] - &y[k + i]).collect();
    let scale = q(2) / &vis;
    let coefficients: Vec<Vec<Q>> = (0..contexts)
        .map(|ctx| {
            let row = &y[ctx * cells..(ctx + 1) * cells];
            let mean: Q = row.iter().sum::<Q>() / q(cells as i64);
            row.iter().map(|yi| (&mean - yi) * &scale).collect()
        })
        .collect();
    let flat_beta: Vec<&Q> = coefficients.iter().flatten().collect();
    let bound = vertex
        .iter()
        .map(|vx| flat_beta.iter().zip(vx).filter(|(_, &hit)| hit).map(|(bq, _)| (*bq).clone()).sum::<Q>())
        .max()
        .expect("at least one vertex");
    let value: Q = flat_beta.iter().zip(&flat_p).map(|(bq, pq)| *bq * pq).sum();
    let margin = &value - &bound;
    Ok(NonnegLhv::Nonlocal { visibility: vis, certificate: BellInequality { coefficients, bound, value, margin } })
}

/// Brute-force CHSH analysis of a two-party, two-choice, two-outcome model:
/// the best of the 16 correlator sign patterns by value over vertex bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ChshOracle {
    pub signs: [i8; 4],
    pub value: Q,
    pub vertex_bound: Q,
    /// `min(1, vertex_bound / value)`.
    pub visibility: Q,
}

impl ChshOracle {
    /// Value rescaled so the local bound is 2, minus 2.
    pub fn normalised_margin(&self) -> Q {
        &self.value * q(2) / &self.vertex_bound - q(2)
    }
}

pub fn chsh_oracle(m: &EmpiricalModel) -> Result<ChshOracle> {
    if m.choices() != [2, 2] || m.outcomes() != [2, 2] {
        return Err(Error::Unsupported("the CHSH oracle needs a 2x2x2 model".into()));
    }
    let (p, _) = rational_tables(m)?;
    let corr: Vec<Q> = p.iter().map(|t| &t[0] - &t[1] - &t[2] + &t[3]).collect();
    let mut best: Option<ChshOracle> = None;
    for pattern in 0..16u8 {
        let signs: [i8; 4] = std::array::from_fn(|i| if pattern >> (3 - i) & 1 == 1 { -1 } else { 1 });
        let value: Q = corr.iter().zip(signs).map(|(e, s)| e * q(s as i64)).sum();
        let vertex_bound = (0..16u8)
            .map(|v| {
                let (a0, a1, b0, b1) = (v >> 3 & 1, v >> 2 & 1, v >> 1 & 1, v & 1);
                let e = |a: u8, b: u8| if a == b { 1i64 } else { -1 };
                q(signs[0] as i64 * e(a0, b0)
                    + signs[1] as i64 * e(a0, b1)
                    + signs[2] as i64 * e(a1, b0)
                    + signs[3] as i64 * e(a1, b1))
            })
            .max()
            .expect("16 vertices");
        let ratio = &value / &vertex_bound;
        if best.as_ref().is_none_or(|b| ratio > &b.value / &b.vertex_bound) {
            let visibility = if ratio > q(1) { ratio.recip() } else { q(1) };
            best = Some(ChshOracle { signs, value, vertex_bound, visibility });
        }
    }
    Ok(best.expect("16 patterns"))
}

#[cfg(test)]
mod tests {
    use super::super::{build_empirical_model, parity_bell, pythagorean_chsh};
    use super::*;

    fn r(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn parity_field_lhv() {
        let m = build_empirical_model(&parity_bell()).unwrap();
        let sol = lhv_solve_field(&m).unwrap().unwrap();
        assert!(sol.residual_zero);
        assert_eq!(sol.weights.len(), 9);
    }

    #[test]
    fn field_solver_rejects_non_fields() {
        let m = EmpiricalModel::pr_box();
        assert!(matches!(lhv_solve_field(&m), Err(Error::NotAField(_))));
    }

    #[test]
    fn deterministic_model_is_a_point_mass() {
        let z = Semiring::z2();
        let one = || vec![Element::Fp(0), Element::Fp(1), Element::Fp(0), Element::Fp(0)];
        let m = EmpiricalModel::new(&z, vec![1, 1], vec![2, 2], vec![one()]).unwrap();
        let sol = lhv_solve_field(&m).unwrap().unwrap();
        assert_eq!(sol.weights, one());
        let q = Semiring::rational();
        let det = vec![Element::int(0), Element::int(1), Element::int(0), Element::int(0)];
        let m = EmpiricalModel::new(&q, vec![1, 1], vec![2, 2], vec![det]).unwrap();
        assert_eq!(
            lhv_check_nonneg(&m).unwrap(),
            NonnegLhv::Local { weights: vec![r(0, 1), r(1, 1), r(0, 1), r(0, 1)] }
        );
    }

    #[test]
    fn pr_box_certificate() {
        let m = EmpiricalModel::pr_box();
        let NonnegLhv::Nonlocal { visibility, certificate } = lhv_check_nonneg(&m).unwrap() else { panic!() };
        assert_eq!(visibility, r(1, 2));
        assert_eq!((certificate.value.clone(), certificate.bound.clone()), (r(4, 1), r(2, 1)));
        let oracle = chsh_oracle(&m).unwrap();
        assert_eq!(oracle.signs, [1, 1, 1, -1]);
        assert_eq!(oracle.normalised_margin(), certificate.margin);
    }

    #[test]
    fn pythagorean_margin_matches_oracle() {
        let m = build_empirical_model(&pythagorean_chsh()).unwrap();
        let NonnegLhv::Nonlocal { visibility, certificate } = lhv_check_nonneg(&m).unwrap() else { panic!() };
        let oracle = chsh_oracle(&m).unwrap();
        assert_eq!(oracle.value, r(10722399574642, 3814697265625));
        assert_eq!(visibility, oracle.visibility);
        assert_eq!(certificate.margin, r(3093005043392, 3814697265625));
        assert_eq!(certificate.bound, r(2, 1));
    }

    #[test]
    fn size_bound() {
        let q = Semiring::rational();
        let t = vec![Element::int(1), Element::int(0), Element::int(0)];
        let m = EmpiricalModel::new(&q, vec![1], vec![3], vec![t]).unwrap();
        assert!(matches!(lhv_check_nonneg(&m), Err(Error::SizeBound(_))));
        let wide = LpBounds { max_outcomes: 3, ..LpBounds::default() };
        assert!(lhv_check_nonneg_with(&m, wide).unwrap().is_local());
    }
}
