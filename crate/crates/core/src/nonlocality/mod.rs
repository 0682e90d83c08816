//! Bell-type scenarios, empirical models, no-signalling and local hidden
//! variable models.
//!
//! Contexts and outcome tuples are mixed-radix indices with party 0 most
//! significant, matching the Kronecker ordering of the shared state.
//! Global assignments pick one outcome for every (party, choice) pair and are
//! ordered lexicographically by party, then choice, first pair most
//! significant.

mod lhv;
pub mod lp;
mod random;

use serde_json::{json, Value};

use crate::cpm::{born_weights, compose, decoherence, double, is_normalised};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::par::Exec;
use crate::semiring::{positive_subsemiring, CarrierSpec, Element, Semiring};

pub use lhv::{
    chsh_oracle, lhv_check_nonneg, lhv_check_nonneg_with, lhv_solve_field, marginals, BellInequality, ChshOracle,
    FieldLhv, LpBounds, NonnegLhv, DEFAULT_MAX_ASSIGNMENTS,
};
pub use random::{random_scenario, random_unitary, ScenarioLimits};

/// Decodes `i` in mixed radix, most significant digit first.
pub(crate) fn digits(mut i: usize, radix: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for (slot, &r) in out.iter_mut().zip(radix).rev() {
        *slot = i % r;
        i /= r;
    }
    out
}

pub(crate) fn undigits(d: &[usize], radix: &[usize]) -> usize {
    d.iter().zip(radix).fold(0, |acc, (&x, &r)| acc * r + x)
}

/// `N` parties share a pure state of dimension `d^N`; each party picks one
/// of its basis changes and then measures in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BellScenario {
    semiring: Semiring,
    dim: usize,
    state: Matrix,
    measurements: Vec<Vec<Matrix>>,
}

impl BellScenario {
    /// Checks shapes only; normalisation is checked by [`BellScenario::validate`].
    pub fn new(s: &Semiring, state: Matrix, measurements: Vec<Vec<Matrix>>) -> Result<Self> {
        let parties = measurements.len();
        if parties == 0 {
            return Err(Error::InvalidParameter("a scenario needs at least one party".into()));
        }
        let dim = measurements[0]
            .first()
            .map(Matrix::rows)
            .ok_or_else(|| Error::InvalidParameter("every party needs at least one measurement choice".into()))?;
        for (i, ms) in measurements.iter().enumerate() {
            if ms.is_empty() {
                return Err(Error::InvalidParameter(format!("party {i} has no measurement choices")));
            }
            for (j, u) in ms.iter().enumerate() {
                if u.semiring() != s {
                    return Err(Error::SemiringMismatch);
                }
                if u.shape() != (dim, dim) {
                    return Err(Error::DimensionMismatch(format!(
                        "party {i} choice {j} is {}x{}, expected {dim}x{dim}",
                        u.rows(),
                        u.cols()
                    )));
                }
            }
        }
        let total = dim.checked_pow(parties as u32).ok_or(Error::Overflow("joint dimension"))?;
        if state.semiring() != s {
            return Err(Error::SemiringMismatch);
        }
        if state.shape() != (total, 1) {
            return Err(Error::DimensionMismatch(format!(
                "state is {}x{}, expected {total}x1",
                state.rows(),
                state.cols()
            )));
        }
        Ok(BellScenario { semiring: s.clone(), dim, state, measurements })
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn parties(&self) -> usize {
        self.measurements.len()
    }
    pub fn state(&self) -> &Matrix {
        &self.state
    }
    pub fn measurements(&self) -> &[Vec<Matrix>] {
        &self.measurements
    }
    pub fn choices(&self) -> Vec<usize> {
        self.measurements.iter().map(Vec::len).collect()
    }

    /// Checks every measurement process is normalised and returns the
    /// state's normaliser `tau = discard(state)`. A state with `tau != 1` is
    /// accepted in ratio form when `tau` has an inverse inside the positive
    /// cone; tables are then divided by `tau`.
    pub fn validate(&self) -> Result<Element> {
        let s = &self.semiring;
        let measure = decoherence(s, self.dim);
        for (i, ms) in self.measurements.iter().enumerate() {
            for (j, u) in ms.iter().enumerate() {
                if !is_normalised(&compose(&measure, &double(u))?)? {
                    return Err(Error::NonNormalised(format!("party {i} choice {j}")));
                }
            }
        }
        let tau = born_weights(&self.state)?.total;
        if s.is_one(&tau) {
            return Ok(tau);
        }
        let cone = positive_subsemiring(s)?;
        match s.inv(&tau)? {
            Some(inv) if !s.is_zero(&tau) && cone.contains(&inv) => Ok(tau),
            _ => Err(Error::NonNormalised(format!("state: total weight {} has no positive inverse", s.render(&tau)))),
        }
    }

    /// `{"semiring", "parties", "state", "measurements"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "semiring": self.semiring.spec(),
            "parties": self.parties(),
            "state": self.state.to_json(),
            "measurements": self.measurements.iter()
                .map(|ms| ms.iter().map(Matrix::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let spec: CarrierSpec = serde_json::from_value(v.get("semiring").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("semiring: {e}")))?;
        let s = Semiring::new(spec)?;
        let state = Matrix::from_json(&s, v.get("state").ok_or_else(|| Error::Parse("missing \"state\"".into()))?)?;
        let measurements = v
            .get("measurements")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"measurements\" array".into()))?
            .iter()
            .map(|party| {
                party
                    .as_array()
                    .ok_or_else(|| Error::Parse("each party's measurements must be an array".into()))?
                    .iter()
                    .map(|u| Matrix::from_json(&s, u))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(n) = v.get("parties").and_then(Value::as_u64) {
            if n as usize != measurements.len() {
                return Err(Error::Parse(format!(
                    "\"parties\" is {n} but {} measurement lists given",
                    measurements.len()
                )));
            }
        }
        BellScenario::new(&s, state, measurements)
    }
}

/// Per-context outcome tables with entries in the positive cone.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalModel {
    semiring: Semiring,
    choices: Vec<usize>,
    outcomes: Vec<usize>,
    tables: Vec<Vec<Element>>,
}

impl EmpiricalModel {
    pub fn new(s: &Semiring, choices: Vec<usize>, outcomes: Vec<usize>, tables: Vec<Vec<Element>>) -> Result<Self> {
        if choices.is_empty() || choices.len() != outcomes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} choice counts and {} outcome counts",
                choices.len(),
                outcomes.len()
            )));
        }
        if choices.iter().chain(&outcomes).any(|&k| k == 0) {
            return Err(Error::InvalidParameter("choice and outcome counts must be positive".into()));
        }
        let contexts: usize = choices.iter().product();
        let cells: usize = outcomes.iter().product();
        if tables.len() != contexts || tables.iter().any(|t| t.len() != cells) {
            return Err(Error::DimensionMismatch(format!("expected {contexts} tables of {cells} entries")));
        }
        if let Some(e) = tables.iter().flatten().find(|e| !s.contains(e)) {
            return Err(Error::NotInCarrier(format!("{e} in {}", s.name())));
        }
        Ok(EmpiricalModel { semiring: s.clone(), choices, outcomes, tables })
    }

    /// Two-party, two-choice, two-outcome table from `p(a b | x y)` given as
    /// rows `[p(00), p(01), p(10), p(11)]` per context `(x, y)`.
    pub fn two_by_two(s: &Semiring, tables: Vec<Vec<Element>>) -> Result<Self> {
        EmpiricalModel::new(s, vec![2, 2], vec![2, 2], tables)
    }

    /// The Popescu-Rohrlich box over the rationals.
    pub fn pr_box() -> Self {
        let q = Semiring::rational();
        let half = Element::rat(1, 2);
        let z = Element::int(0);
        let same = vec![half.clone(), z.clone(), z.clone(), half.clone()];
        let diff = vec![z.clone(), half.clone(), half, z];
        EmpiricalModel::two_by_two(&q, vec![same.clone(), same.clone(), same, diff]).expect("PR box shape")
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }
    pub fn parties(&self) -> usize {
        self.choices.len()
    }
    pub fn choices(&self) -> &[usize] {
        &self.choices
    }
    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }
    pub fn tables(&self) -> &[Vec<Element>] {
        &self.tables
    }
    pub fn context_count(&self) -> usize {
        self.tables.len()
    }
    pub fn context(&self, c: usize) -> Vec<usize> {
        digits(c, &self.choices)
    }
    pub fn outcome_tuple(&self, o: usize) -> Vec<usize> {
        digits(o, &self.outcomes)
    }
    pub fn entry(&self, context: &[usize], outcome: &[usize]) -> &Element {
        &self.tables[undigits(context, &self.choices)][undigits(outcome, &self.outcomes)]
    }

    /// Number of global assignments, or `None` on overflow.
    pub fn assignment_count(&self) -> Option<u128> {
        let mut n: u128 = 1;
        for (&c, &o) in self.choices.iter().zip(&self.outcomes) {
            n = n.checked_mul((o as u128).checked_pow(c as u32)?)?;
        }
        Some(n)
    }

    /// Radix of each (party, choice) pair in global-assignment order.
    pub(crate) fn assignment_radix(&self) -> Vec<usize> {
        self.choices.iter().zip(&self.outcomes).flat_map(|(&c, &o)| std::iter::repeat_n(o, c)).collect()
    }

    /// Outcome-table index reached by a global assignment in a context.
    pub(crate) fn restrict(&self, assignment: &[usize], context: &[usize]) -> usize {
        let mut offset = 0;
        let mut out = Vec::with_capacity(self.parties());
        for (i, &c) in self.choices.iter().enumerate() {
            out.push(assignment[offset + context[i]]);
            offset += c;
        }
        undigits(&out, &self.outcomes)
    }

    /// Total of the first table.
    pub fn total(&self) -> Result<Element> {
        self.semiring.sum(&self.tables[0])
    }

    /// Entries outside the positive cone, as `(context, outcome)` pairs.
    pub fn non_positive_entries(&self) -> Result<Vec<(usize, usize)>> {
        let cone = positive_subsemiring(&self.semiring)?;
        Ok(self
            .tables
            .iter()
            .enumerate()
            .flat_map(|(c, t)| t.iter().enumerate().filter(|(_, e)| !cone.contains(e)).map(move |(o, _)| (c, o)))
            .collect())
    }

    /// `{"semiring", "choices", "outcomes", "contexts": [{"choices", "table"}]}`.
    pub fn to_json(&self) -> Value {
        let s = &self.semiring;
        json!({
            "semiring": s.spec(),
            "choices": self.choices,
            "outcomes": self.outcomes,
            "contexts": self.tables.iter().enumerate().map(|(c, t)| json!({
                "choices": self.context(c),
                "table": t.iter().map(|e| s.to_json(e)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let spec: CarrierSpec = serde_json::from_value(v.get("semiring").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("semiring: {e}")))?;
        let s = Semiring::new(spec)?;
        let counts = |k: &str| -> Result<Vec<usize>> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing \"{k}\" array")))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| Error::Parse(format!("\"{k}\" entries must be integers")))
                })
                .collect()
        };
        let choices = counts("choices")?;
        let outcomes = counts("outcomes")?;
        let contexts =
            v.get("contexts").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"contexts\"".into()))?;
        let n: usize = choices.iter().product();
        let mut tables: Vec<Option<Vec<Element>>> = vec![None; n];
        for (k, ctx) in contexts.iter().enumerate() {
            let idx = match ctx.get("choices").and_then(Value::as_array) {
                Some(cs) => {
                    let cs: Vec<usize> = cs.iter().filter_map(Value::as_u64).map(|x| x as usize).collect();
                    if cs.len() != choices.len() || cs.iter().zip(&choices).any(|(a, b)| a >= b) {
                        return Err(Error::Parse(format!("context {k} has invalid choices")));
                    }
                    undigits(&cs, &choices)
                }
                None => k,
            };
            let table = ctx
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("context {k} needs a \"table\"")))?
                .iter()
                .map(|e| s.parse(e))
                .collect::<Result<Vec<_>>>()?;
            if idx >= n || tables[idx].replace(table).is_some() {
                return Err(Error::Parse(format!("context {k} is duplicated or out of range")));
            }
        }
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(c, t)| t.ok_or_else(|| Error::Parse(format!("context {c} is missing"))))
            .collect::<Result<Vec<_>>>()?;
        EmpiricalModel::new(&s, choices, outcomes, tables)
    }
}

/// Applies each context's measurements to the shared state and reads Born
/// weights per outcome tuple, divided by the state's normaliser.
pub fn build_empirical_model(sc: &BellScenario) -> Result<EmpiricalModel> {
    build_empirical_model_with(sc, Exec::default())
}

pub fn build_empirical_model_with(sc: &BellScenario, exec: Exec) -> Result<EmpiricalModel> {
    let s = &sc.semiring;
    let tau = sc.validate()?;
    let tau_inv = s.inv(&tau)?.expect("validate checked invertibility");
    let choices = sc.choices();
    let contexts: usize = choices.iter().product();
    let tables = exec.try_map_range(contexts, |c| -> Result<Vec<Element>> {
        let pick = digits(c, &choices);
        let mut u = Matrix::identity(s, 1);
        for (party, &j) in pick.iter().enumerate() {
            u = u.kron(&sc.measurements[party][j])?;
        }
        let weights = born_weights(&u.matmul(&sc.state)?)?.weights;
        weights.iter().map(|w| s.mul(w, &tau_inv)).collect()
    })?;
    EmpiricalModel::new(s, choices, vec![sc.dim; sc.parties()], tables)
}

/// Verdict of the no-signalling check.
#[derive(Debug, Clone, PartialEq)]
pub struct NoSignalling {
    pub holds: bool,
    /// `{"parties", "contexts", "marginals"}` for the first violation.
    pub witness: Option<Value>,
}

/// Marginal of one table onto a set of parties (bitmask).
fn marginal(m: &EmpiricalModel, table: &[Element], subset: usize) -> Result<Vec<Element>> {
    let s = &m.semiring;
    let kept: Vec<usize> = (0..m.parties()).filter(|i| subset >> i & 1 == 1).collect();
    let radix: Vec<usize> = kept.iter().map(|&i| m.outcomes[i]).collect();
    let mut out = vec![s.zero(); radix.iter().product()];
    for (o, e) in table.iter().enumerate() {
        let t = m.outcome_tuple(o);
        let k = undigits(&kept.iter().map(|&i| t[i]).collect::<Vec<_>>(), &radix);
        out[k] = s.add(&out[k], e)?;
    }
    Ok(out)
}

/// For every proper subset of parties, the marginal must not depend on the
/// other parties' choices. The empty subset compares context totals.
pub fn check_no_signalling(m: &EmpiricalModel) -> Result<NoSignalling> {
    let s = &m.semiring;
    let n = m.parties();
    for subset in 0..(1usize << n) - 1 {
        let mut seen: std::collections::BTreeMap<Vec<usize>, (usize, Vec<Element>)> = Default::default();
        for c in 0..m.context_count() {
            let ctx = m.context(c);
            let key: Vec<usize> = (0..n).filter(|i| subset >> i & 1 == 1).map(|i| ctx[i]).collect();
            let marg = marginal(m, &m.tables[c], subset)?;
            match seen.get(&key) {
                None => {
                    seen.insert(key, (c, marg));
                }
                Some((c0, first)) if *first != marg => {
                    let render = |v: &[Element]| v.iter().map(|e| s.to_json(e)).collect::<Vec<_>>();
                    return Ok(NoSignalling {
                        holds: false,
                        witness: Some(json!({
                            "parties": (0..n).filter(|i| subset >> i & 1 == 1).collect::<Vec<_>>(),
                            "contexts": [m.context(*c0), ctx],
                            "marginals": [render(first), render(&marg)],
                        })),
                    });
                }
                Some(_) => {}
            }
        }
    }
    Ok(NoSignalling { holds: true, witness: None })
}

/// `R(k theta)` with `cos theta = 3/5`, `sin theta = 4/5`.
pub fn pythagorean_rotation(k: i64) -> Matrix {
    let q = Semiring::rational();
    let r =
        Matrix::new(&q, 2, 2, vec![Element::rat(3, 5), Element::rat(-4, 5), Element::rat(4, 5), Element::rat(3, 5)])
            .expect("2x2 rotation");
    let step = if k < 0 { r.transpose() } else { r };
    (0..k.unsigned_abs()).fold(Matrix::identity(&q, 2), |acc, _| acc.matmul(&step).expect("2x2 product"))
}

/// Real quantum CHSH scenario with rational angles: Alice measures in
/// `R(0)`, `R(6 theta)`, Bob in `R(3 theta)`, `R(-3 theta)`, on the
/// unnormalised Bell state `|00> + |11>`.
pub fn pythagorean_chsh() -> BellScenario {
    let q = Semiring::rational();
    let state = Matrix::from_ints(&q, &[&[1], &[0], &[0], &[1]]).expect("Bell state");
    let alice = vec![pythagorean_rotation(0), pythagorean_rotation(6)];
    let bob = vec![pythagorean_rotation(3), pythagorean_rotation(-3)];
    BellScenario::new(&q, state, vec![alice, bob]).expect("CHSH scenario shapes")
}

/// Parity theory Bell scenario: `|00> + |11> + |22>` over Z2 with both
/// parties measuring in the computational basis.
pub fn parity_bell() -> BellScenario {
    let z = Semiring::z2();
    let state = Matrix::column(&z, (0..9).map(|i| Element::Fp(u32::from(i % 4 == 0))).collect()).expect("qutrit pair");
    let id = Matrix::identity(&z, 3);
    BellScenario::new(&z, state, vec![vec![id.clone()], vec![id]]).expect("parity scenario shapes")
}
