//! Phase groups, phase gates, multiplicative characters, abelian hidden
//! subgroups and Mermin-type witnesses.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{checked_pow, factorize, is_prime, mul_mod};
use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::frobenius::{classical_structure, FiniteAbelianGroup};
use crate::linalg;
use crate::matrix::Matrix;
use crate::par::Exec;
use crate::semiring::{CarrierSpec, Element, Semiring};

/// The unit-norm scalars `{ xi : xi* xi = 1 }` of a carrier.
#[derive(Debug, Clone)]
pub struct PhaseGroup {
    semiring: Semiring,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    cyclic_factors: Vec<u64>,
    orders: Vec<u64>,
}

impl PhaseGroup {
    fn build(s: &Semiring, mut elements: Vec<Element>, exec: Exec) -> Result<Self> {
        if s.size().is_some() {
            elements.sort_by_key(|e| s.index_of(e));
        }
        elements.dedup();
        let index: HashMap<Element, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len() as u64;
        let divisors = divisors(n);
        let orders = exec.try_map_range(elements.len(), |i| -> Result<u64> {
            for &d in &divisors {
                if s.is_one(&s.pow(&elements[i], d)?) {
                    return Ok(d);
                }
            }
            Err(Error::InvalidParameter("phase set is not closed under multiplication".into()))
        })?;
        let cyclic_factors = invariant_factors(n, &orders);
        Ok(PhaseGroup { semiring: s.clone(), elements, index, cyclic_factors, orders })
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }
    /// Invariant factors `d_1 | d_2 | ...`; empty for the trivial group.
    pub fn cyclic_factors(&self) -> &[u64] {
        &self.cyclic_factors
    }
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_factors.len() <= 1
    }
    pub fn element_orders(&self) -> &[u64] {
        &self.orders
    }
    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// First element of maximal order, in carrier order.
    pub fn generator(&self) -> Option<&Element> {
        let n = self.order() as u64;
        self.orders.iter().position(|&o| o == n).map(|i| &self.elements[i])
    }

    pub fn mul_index(&self, a: usize, b: usize) -> Result<usize> {
        let c = self.semiring.mul(&self.elements[a], &self.elements[b])?;
        self.index_of(&c).ok_or_else(|| Error::InvalidParameter("phase product left the group".into()))
    }

    /// Full multiplication table.
    pub fn table(&self) -> Result<Vec<Vec<usize>>> {
        (0..self.order()).map(|a| (0..self.order()).map(|b| self.mul_index(a, b)).collect()).collect()
    }

    /// `{"order", "cyclic_factors", "elements"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "semiring": self.semiring.describe(),
            "order": self.order(),
            "cyclic_factors": self.cyclic_factors,
            "elements": self.elements.iter().map(|e| self.semiring.to_json(e)).collect::<Vec<_>>(),
        })
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> =
        (1..).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).flat_map(|d| [d, n / d]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Invariant factors of an abelian group of order `n` from its element orders.
fn invariant_factors(n: u64, orders: &[u64]) -> Vec<u64> {
    let mut parts: Vec<Vec<u64>> = Vec::new();
    for (p, e) in factorize(n) {
        // c_j = log_p #{x : x^{p^j} = 1}
        let count = |j: u32| -> u32 {
            let pj = p.pow(j);
            let k = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
            let mut c = 0;
            let mut x = 1;
            while x < k {
                x *= p;
                c += 1;
            }
            c
        };
        let c: Vec<u32> = (0..=e).map(count).collect();
        // number of cyclic p-factors of exponent >= j
        let mut exps: Vec<u64> = Vec::new();
        for j in 1..=e as usize {
            let at_least = c[j] - c[j - 1];
            while (exps.len() as u32) < at_least {
                exps.push(0);
            }
            for x in exps.iter_mut().take(at_least as usize) {
                *x = j as u64;
            }
        }
        parts.push(exps.iter().map(|&x| p.pow(x as u32)).collect());
    }
    let k = parts.iter().map(Vec::len).max().unwrap_or(0);
    // parts are in descending exponent order; the i-th largest invariant
    // factor collects the i-th largest prime power of each prime.
    let mut factors: Vec<u64> =
        (0..k).map(|i| parts.iter().map(|v| v.get(i).copied().unwrap_or(1)).product()).collect();
    factors.reverse();
    factors.retain(|&f| f > 1);
    factors
}

/// Phases by carrier-specific enumeration.
pub fn enumerate_phases(s: &Semiring) -> Result<PhaseGroup> {
    enumerate_phases_with(s, Exec::default())
}

pub fn enumerate_phases_with(s: &Semiring, exec: Exec) -> Result<PhaseGroup> {
    match s.spec() {
        CarrierSpec::QuadraticExtension { .. } => {
            let (f, eps) = s.quad_base().expect("quadratic carrier");
            let q = f.order() as usize;
            let budget = crate::enumeration_budget();
            if q as u128 > budget {
                return Err(Error::BudgetExceeded { needed: q as u128, budget });
            }
            let elems = exec.flat_map_range(q, |y| {
                let y = y as u32;
                let t = f.add(1, f.mul(eps, f.mul(y, y)));
                f.sqrt(t).into_iter().map(|x| Element::Quad(x, y)).collect()
            });
            PhaseGroup::build(s, elems, exec)
        }
        CarrierSpec::Z2 | CarrierSpec::FiniteField { .. } => {
            let f = s.field().expect("field carrier");
            PhaseGroup::build(s, f.sqrt(1).into_iter().map(Element::Fp).collect(), exec)
        }
        CarrierSpec::PadicResidue { .. } => {
            let (_, _, eps) = s.padic_params().expect("residue carrier");
            let CarrierSpec::PadicResidue { p, precision } = s.spec().clone() else { unreachable!() };
            let m = checked_pow(p, precision).ok_or(Error::Overflow("residue modulus"))?;
            let budget = crate::enumeration_budget();
            if m as u128 > budget {
                return Err(Error::BudgetExceeded { needed: m as u128, budget });
            }
            let mut roots: HashMap<u64, Vec<u64>> = HashMap::new();
            for x in 0..m {
                roots.entry(mul_mod(x, x, m)).or_default().push(x);
            }
            let elems = exec.flat_map_range(m as usize, |y| {
                let y = y as u64;
                let t = (1 + mul_mod(eps % m, mul_mod(y, y, m), m)) % m;
                roots.get(&t).map_or_else(Vec::new, |xs| xs.iter().map(|&x| Element::Residue(x, y)).collect())
            });
            PhaseGroup::build(s, elems, exec)
        }
        CarrierSpec::Padic { p, precision } => {
            let residue = Semiring::new(CarrierSpec::PadicResidue { p: *p, precision: *precision })?;
            enumerate_phases_with(&residue, exec)
        }
        CarrierSpec::Rational => PhaseGroup::build(s, vec![s.one(), Element::int(-1)], exec),
        CarrierSpec::Boolean
        | CarrierSpec::Chain { .. }
        | CarrierSpec::TropicalInt
        | CarrierSpec::TropicalNat
        | CarrierSpec::TropicalRat
        | CarrierSpec::Viterbi => PhaseGroup::build(s, vec![s.one()], exec),
        CarrierSpec::Table(_) => enumerate_phases_brute(s, exec),
        CarrierSpec::SplitComplex => {
            Err(Error::NotEnumerable("split-complex phases form the infinite unit hyperbola".into()))
        }
    }
}

/// Phases by scanning every carrier element; an independent second path for
/// finite carriers.
pub fn enumerate_phases_brute(s: &Semiring, exec: Exec) -> Result<PhaseGroup> {
    let size = s.size().ok_or_else(|| Error::NotEnumerable(s.name()))?;
    let budget = crate::enumeration_budget();
    if size > budget {
        return Err(Error::BudgetExceeded { needed: size, budget });
    }
    let hits = exec.try_map_range(size as usize, |i| -> Result<Option<Element>> {
        let x = s.element_at(i as u64).unwrap();
        Ok(s.is_one(&s.norm(&x)?).then_some(x))
    })?;
    PhaseGroup::build(s, hits.into_iter().flatten().collect(), exec)
}

/// Unit-norm test, usable on infinite carriers.
pub fn is_phase(s: &Semiring, x: &Element) -> Result<bool> {
    Ok(s.is_one(&s.norm(x)?))
}

/// The group of phase gates `diag(1, a_1, ..., a_{d-1})` on `S^d`.
#[derive(Debug, Clone)]
pub struct PhaseGateGroup {
    pub dim: usize,
    pub phases: PhaseGroup,
    /// `|phases|^(d-1)`.
    pub order: u128,
    /// Invariant factors of the phase group, repeated `d - 1` times.
    pub cyclic_factors: Vec<u64>,
    pub report: CheckReport,
}

/// Builds the phase gates and checks that each is unitary, is multiplication
/// by its phase state, and that the phase state satisfies `m(conj a, a) = u`.
/// Gates are checked exhaustively when there are at most `budget` of them,
/// otherwise the generators `diag(1, .., xi, .., 1)` are checked.
pub fn phase_gate_group(s: &Semiring, d: usize, budget: usize) -> Result<PhaseGateGroup> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let phases = enumerate_phases(s)?;
    let n = phases.order();
    let order = (n as u128).checked_pow(d as u32 - 1).ok_or(Error::Overflow("phase gate count"))?;
    let exhaustive = order <= budget as u128;
    let gates: Vec<Vec<usize>> = if exhaustive {
        (0..order as usize)
            .map(|mut k| {
                let mut digits = vec![0; d - 1];
                for slot in digits.iter_mut().rev() {
                    *slot = k % n;
                    k /= n;
                }
                digits
            })
            .collect()
    } else {
        (0..d - 1)
            .flat_map(|pos| (0..n).map(move |j| (0..d - 1).map(|i| if i == pos { j } else { 0 }).collect()))
            .collect()
    };
    let one_idx = phases.index_of(&s.one()).expect("1 is a phase");
    let frob = classical_structure(s, d);
    let id = Matrix::identity(s, d);
    let mut report = CheckReport::new(format!("phase gates on {}^{d}", s.name()), exhaustive);
    let mut failure: Option<(&str, Value)> = None;
    for g in &gates {
        let mut diag = vec![s.one()];
        diag.extend(g.iter().map(|&j| phases.elements()[if n == 0 { one_idx } else { j }].clone()));
        let alpha = Matrix::column(s, diag.clone())?;
        let u = Matrix::from_fn(s, d, d, |i, j| if i == j { diag[i].clone() } else { s.zero() });
        let label = json!(g);
        if u.dagger().matmul(&u)? != id {
            failure = Some(("unitary", label));
            break;
        }
        if frob.mult().matmul(&alpha.kron(&id)?)? != u {
            failure = Some(("multiplication_by_phase_state", label));
            break;
        }
        if frob.mult().matmul(&alpha.conj().kron(&alpha)?)? != *frob.unit() {
            failure = Some(("phase_state_condition", label));
            break;
        }
    }
    for name in ["unitary", "multiplication_by_phase_state", "phase_state_condition"] {
        match &failure {
            Some((f, w)) if *f == name => report.push(name, false, w.clone()),
            _ => report.push(name, true, json!({"gates_checked": gates.len()})),
        }
    }
    let cyclic_factors =
        phases.cyclic_factors().iter().copied().cycle().take(phases.cyclic_factors().len() * (d - 1)).collect();
    Ok(PhaseGateGroup { dim: d, phases, order, cyclic_factors, report })
}

/// A homomorphism from a finite abelian group into a phase group.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    /// Exponents `a_i`: the generator `e_i` maps to `omega^{a_i N / n_i}`.
    pub label: Vec<u64>,
    /// Values indexed by group element index.
    pub values: Vec<Element>,
}

/// All characters `G -> phases(S)`, built factor-wise from generator images.
///
/// With a cyclic phase group of order `N` generated by `omega`, the
/// characters are labelled by `a in prod Z_{gcd(n_i, N)}`; when every `n_i`
/// divides `N` this labelling is a group isomorphism `G^ -> G`.
pub fn multiplicative_characters(g: &FiniteAbelianGroup, s: &Semiring) -> Result<Vec<Character>> {
    let phases = enumerate_phases(s)?;
    characters_with(g, &phases)
}

fn characters_with(g: &FiniteAbelianGroup, phases: &PhaseGroup) -> Result<Vec<Character>> {
    let s = phases.semiring();
    // images[i] = list of (label a, phase) for generator i
    let mut images: Vec<Vec<(u64, Element)>> = Vec::new();
    match (phases.is_cyclic(), phases.generator()) {
        (true, Some(omega)) => {
            let big_n = phases.order() as u64;
            for &n in g.factors() {
                let k = crate::arith::gcd(n, big_n);
                let step = s.pow(omega, big_n / k)?;
                let mut list = Vec::new();
                let mut cur = s.one();
                for a in 0..k {
                    // label in Z_n: omega^{a N/k} = omega^{(a n/k) N/n}
                    list.push((a * (n / k), cur.clone()));
                    cur = s.mul(&cur, &step)?;
                }
                images.push(list);
            }
        }
        _ => {
            for &n in g.factors() {
                let list = phases
                    .elements()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| n % phases.element_orders()[*i] == 0)
                    .map(|(i, e)| (i as u64, e.clone()))
                    .collect();
                images.push(list);
            }
        }
    }
    let counts: Vec<usize> = images.iter().map(Vec::len).collect();
    let total: usize = counts.iter().product();
    let mut out = Vec::with_capacity(total);
    for mut k in 0..total {
        let mut pick = vec![0; counts.len()];
        for (slot, &c) in pick.iter_mut().zip(&counts).rev() {
            *slot = k % c;
            k /= c;
        }
        let label = pick.iter().enumerate().map(|(i, &j)| images[i][j].0).collect();
        let gens: Vec<&Element> = pick.iter().enumerate().map(|(i, &j)| &images[i][j].1).collect();
        let values = (0..g.order())
            .map(|x| {
                let coords = g.element(x);
                coords.iter().zip(&gens).try_fold(s.one(), |acc, (&c, &gen)| s.mul(&acc, &s.pow(gen, c)?))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Character { label, values });
    }
    Ok(out)
}

/// Rows are characters, columns group elements.
pub fn character_matrix(s: &Semiring, chars: &[Character]) -> Result<Matrix> {
    let n = chars.first().map_or(0, |c| c.values.len());
    Matrix::new(s, chars.len(), n, chars.iter().flat_map(|c| c.values.iter().cloned()).collect())
}

/// True iff there are `|G|` characters and their matrix is invertible.
pub fn has_fourier_basis(g: &FiniteAbelianGroup, s: &Semiring) -> Result<bool> {
    let chars = multiplicative_characters(g, s)?;
    if chars.len() != g.order() {
        return Ok(false);
    }
    if g.order() == 1 {
        return Ok(true);
    }
    if !s.has_negation() {
        return Ok(false);
    }
    Ok(linalg::inverse(&character_matrix(s, &chars)?)?.is_some())
}

/// Elementary divisors (prime powers) of `G`.
pub fn elementary_divisors(g: &FiniteAbelianGroup) -> Vec<u64> {
    let mut out: Vec<u64> = g.factors().iter().flat_map(|&n| factorize(n).into_iter().map(|(p, e)| p.pow(e))).collect();
    out.sort_unstable();
    out
}

/// Every prime-power factor of `G` divides `p^n + 1`.
pub fn divisibility_criterion(g: &FiniteAbelianGroup, p: u64, n: u32) -> Result<bool> {
    let big_n = checked_pow(p, n).and_then(|x| x.checked_add(1)).ok_or(Error::Overflow("p^n + 1"))?;
    Ok(elementary_divisors(g).iter().all(|&q| big_n % q == 0))
}

/// Outcome of an exhaustive hidden-subgroup simulation.
#[derive(Debug, Clone, Serialize)]
pub struct HspOutcome {
    /// Labels of characters with non-zero total weight, i.e. `H^perp`.
    pub annihilator: Vec<Vec<u64>>,
    /// Recovered hidden subgroup, as group-element coordinates.
    pub subgroup: Vec<Vec<u64>>,
    /// Greedy generating set of the recovered subgroup.
    pub generators: Vec<Vec<u64>>,
    /// Total weight per character over all label branches.
    pub weights: Vec<Value>,
    pub branches: usize,
}

/// Simulates Fourier sampling for a hiding function given as labels indexed
/// by group element.
pub fn run_abelian_hsp(g: &FiniteAbelianGroup, s: &Semiring, labels: &[u64]) -> Result<HspOutcome> {
    run_abelian_hsp_with(g, s, labels, Exec::default())
}

pub fn run_abelian_hsp_with(g: &FiniteAbelianGroup, s: &Semiring, labels: &[u64], exec: Exec) -> Result<HspOutcome> {
    let n = g.order();
    if labels.len() != n {
        return Err(Error::InvalidOracle(format!("{} labels for a group of order {n}", labels.len())));
    }
    // the level set of the identity must be a subgroup whose cosets are the level sets
    let hidden: Vec<usize> = (0..n).filter(|&x| labels[x] == labels[0]).collect();
    if g.generated(&hidden) != hidden {
        return Err(Error::InvalidOracle("the identity's level set is not a subgroup".into()));
    }
    let hidden_set: BTreeSet<usize> = hidden.iter().copied().collect();
    for a in 0..n {
        for b in 0..n {
            let diff = g.op(a, g.inverse(b));
            if (labels[a] == labels[b]) != hidden_set.contains(&diff) {
                return Err(Error::InvalidOracle(format!("labels are not constant on cosets (elements {a} and {b})")));
            }
        }
    }
    let phases = enumerate_phases(s)?;
    let chars = characters_with(g, &phases)?;
    if chars.len() != n {
        return Err(Error::InvalidParameter(format!("{} has no Fourier basis for {:?}", s.name(), g.factors())));
    }
    let n_elem = s.from_int(n as i64)?;
    let n_inv = s.inv(&n_elem)?.ok_or_else(|| Error::NotInvertible(format!("|G| = {n} in {}", s.name())))?;

    let mut branches: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (x, &l) in labels.iter().enumerate() {
        branches.entry(l).or_default().push(x);
    }
    let branch_list: Vec<Vec<usize>> = branches.into_values().collect();
    // per branch: weights of each character after the inverse transform
    let per_branch = exec.try_map_range(branch_list.len(), |b| -> Result<Vec<Element>> {
        let coset = &branch_list[b];
        chars
            .iter()
            .map(|c| {
                let amp = s.sum(&coset.iter().map(|&x| s.involution(&c.values[x])).collect::<Vec<_>>())?;
                s.norm(&s.mul(&n_inv, &amp)?)
            })
            .collect()
    })?;
    let mut totals = vec![s.zero(); n];
    for w in &per_branch {
        for (t, x) in totals.iter_mut().zip(w) {
            *t = s.add(t, x)?;
        }
    }
    let support: Vec<usize> = (0..n).filter(|&k| !s.is_zero(&totals[k])).collect();
    let subgroup: Vec<usize> = (0..n).filter(|&x| support.iter().all(|&k| s.is_one(&chars[k].values[x]))).collect();
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![0usize];
    for &h in &subgroup {
        if span.binary_search(&h).is_err() {
            gens.push(h);
            span = g.generated(&gens);
        }
    }
    Ok(HspOutcome {
        annihilator: support.iter().map(|&k| chars[k].label.clone()).collect(),
        subgroup: subgroup.iter().map(|&x| g.element(x)).collect(),
        generators: gens.iter().map(|&x| g.element(x)).collect(),
        weights: totals.iter().map(|w| s.to_json(w)).collect(),
        branches: branch_list.len(),
    })
}

/// Labels hiding `H`: each element is labelled by the smallest member of its coset.
pub fn coset_labels(g: &FiniteAbelianGroup, hidden: &[usize]) -> Vec<u64> {
    (0..g.order()).map(|x| hidden.iter().map(|&h| g.op(x, h)).min().unwrap() as u64).collect()
}

/// The algebraic witness of a Mermin-type argument with `N = p^n + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MerminWitness {
    pub q: u64,
    /// The ambient phase-gate group `Z_N^{q-1}`.
    pub ambient: Vec<u64>,
    /// Generator of `K = Z_q`: `(N/q, 2N/q, ..., (q-1)N/q)`.
    pub k_generator: Vec<u64>,
    /// Right-hand side of `q y = rhs`; equal to `k_generator`.
    pub rhs: Vec<u64>,
    /// `y = (k N / q^2)_k`.
    pub solution: Vec<u64>,
    pub no_solution_in_k: bool,
    pub solution_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MerminResult {
    pub p: u64,
    pub n: u32,
    pub order: u64,
    pub factorization: Vec<(u64, u32)>,
    pub feasible: bool,
    pub witness: Option<MerminWitness>,
}

fn scale_vec(v: &[u64], k: u64, m: u64) -> Vec<u64> {
    v.iter().map(|&x| mul_mod(x, k, m)).collect()
}

/// Feasible iff `p^n + 1` is not square-free; the witness uses the smallest
/// prime `q` with `q^2 | p^n + 1`.
pub fn mermin_feasible(p: u64, n: u32) -> Result<MerminResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::InvalidParameter("p must be an odd prime".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let big_n = checked_pow(p, n).and_then(|x| x.checked_add(1)).ok_or(Error::Overflow("p^n + 1"))?;
    let factorization = factorize(big_n);
    let q = factorization.iter().find(|(_, e)| *e >= 2).map(|(q, _)| *q);
    let witness = match q {
        None => None,
        Some(q) => {
            let gen: Vec<u64> = (1..q).map(|k| k * (big_n / q)).collect();
            let solution: Vec<u64> = (1..q).map(|k| k * (big_n / (q * q))).collect();
            let no_solution_in_k = (0..q).all(|j| scale_vec(&scale_vec(&gen, j, big_n), q, big_n) != gen);
            let solution_verified = scale_vec(&solution, q, big_n) == gen;
            Some(MerminWitness {
                q,
                ambient: vec![big_n; (q - 1) as usize],
                k_generator: gen.clone(),
                rhs: gen,
                solution,
                no_solution_in_k,
                solution_verified,
            })
        }
    };
    Ok(MerminResult { p, n, order: big_n, factorization, feasible: witness.is_some(), witness })
}

/// Brute-force search over `y in Z_N^{q-1}` for `q y = (N/q, .., (q-1)N/q)`,
/// for primes `q <= max_q` dividing `N`.
pub fn mermin_brute_force(big_n: u64, max_q: u64) -> bool {
    (2..=max_q).filter(|&q| is_prime(q) && big_n.is_multiple_of(q)).any(|q| {
        let rhs: Vec<u64> = (1..q).map(|k| k * (big_n / q)).collect();
        // components are independent: solve q y_k = rhs_k separately
        rhs.iter().all(|&r| (0..big_n).any(|y| mul_mod(y, q, big_n) == r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Semiring {
        Semiring::quadratic(3, 1).unwrap()
    }

    #[test]
    fn quadratic_phases_are_cyclic() {
        let g = enumerate_phases(&f9()).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.cyclic_factors(), &[4]);
        let b = enumerate_phases_brute(&f9(), Exec::Sequential).unwrap();
        assert_eq!(b.elements(), g.elements());
        let g = enumerate_phases(&Semiring::quadratic(3, 2).unwrap()).unwrap();
        assert_eq!((g.order(), g.cyclic_factors()), (10, &[10][..]));
    }

    #[test]
    fn small_phase_groups() {
        let z2 = enumerate_phases(&Semiring::z2()).unwrap();
        assert_eq!(z2.elements(), &[Element::Fp(1)]);
        assert!(z2.cyclic_factors().is_empty());
        assert_eq!(enumerate_phases(&Semiring::rational()).unwrap().cyclic_factors(), &[2]);
        assert!(matches!(enumerate_phases(&Semiring::split_complex()), Err(Error::NotEnumerable(_))));
        let r = Semiring::new(CarrierSpec::PadicResidue { p: 3, precision: 2 }).unwrap();
        let g = enumerate_phases(&r).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.cyclic_factors(), &[12]);
    }

    #[test]
    fn invariant_factor_census() {
        // Z2 x Z4: orders 1,2,2,2,4,4,4,4
        let orders = [1, 2, 4, 4, 2, 2, 4, 4];
        assert_eq!(invariant_factors(8, &orders), vec![2, 4]);
        assert_eq!(invariant_factors(1, &[1]), Vec::<u64>::new());
        assert_eq!(invariant_factors(6, &[1, 2, 3, 3, 6, 6]), vec![6]);
    }

    #[test]
    fn phase_gates() {
        let q = phase_gate_group(&Semiring::rational(), 3, 1000).unwrap();
        assert_eq!((q.order, q.cyclic_factors.clone()), (4, vec![2, 2]));
        assert!(q.report.all_pass());
        let f = phase_gate_group(&f9(), 2, 1000).unwrap();
        assert_eq!((f.order, f.cyclic_factors.clone()), (4, vec![4]));
        assert!(f.report.all_pass());
        let b = phase_gate_group(&Semiring::boolean(), 4, 1000).unwrap();
        assert_eq!(b.order, 1);
        assert!(b.cyclic_factors.is_empty());
    }

    #[test]
    fn character_counts() {
        let q = Semiring::rational();
        assert_eq!(multiplicative_characters(&FiniteAbelianGroup::cyclic(2), &q).unwrap().len(), 2);
        assert_eq!(multiplicative_characters(&FiniteAbelianGroup::cyclic(4), &f9()).unwrap().len(), 4);
        assert_eq!(multiplicative_characters(&FiniteAbelianGroup::cyclic(3), &f9()).unwrap().len(), 1);
        assert!(has_fourier_basis(&FiniteAbelianGroup::cyclic(4), &f9()).unwrap());
        assert!(!has_fourier_basis(&FiniteAbelianGroup::cyclic(3), &f9()).unwrap());
        assert!(has_fourier_basis(&FiniteAbelianGroup::new(vec![2, 2]).unwrap(), &q).unwrap());
    }

    #[test]
    fn character_orthogonality() {
        let s = f9();
        let g = FiniteAbelianGroup::cyclic(4);
        let c = character_matrix(&s, &multiplicative_characters(&g, &s).unwrap()).unwrap();
        let n = s.from_int(4).unwrap();
        assert_eq!(c.matmul(&c.dagger()).unwrap(), Matrix::identity(&s, 4).scale(&n).unwrap());
    }

    #[test]
    fn simon_and_cyclic_hsp() {
        let q = Semiring::rational();
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let h = vec![0, 3];
        let out = run_abelian_hsp(&g, &q, &coset_labels(&g, &h)).unwrap();
        assert_eq!(out.annihilator, vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(out.subgroup, vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(out.generators, vec![vec![1, 1]]);

        let z4 = FiniteAbelianGroup::cyclic(4);
        let out = run_abelian_hsp(&z4, &f9(), &coset_labels(&z4, &[0, 2])).unwrap();
        assert_eq!(out.subgroup, vec![vec![0], vec![2]]);
        let all = run_abelian_hsp(&z4, &f9(), &[7; 4]).unwrap();
        assert_eq!(all.subgroup.len(), 4);
        assert_eq!(all.annihilator, vec![vec![0]]);
    }

    #[test]
    fn bad_oracles_rejected() {
        let z4 = FiniteAbelianGroup::cyclic(4);
        assert!(matches!(run_abelian_hsp(&z4, &f9(), &[0, 0, 1, 1]), Err(Error::InvalidOracle(_))));
        assert!(matches!(run_abelian_hsp(&z4, &f9(), &[0, 1]), Err(Error::InvalidOracle(_))));
    }

    #[test]
    fn mermin_cases() {
        let r = mermin_feasible(3, 1).unwrap();
        let w = r.witness.unwrap();
        assert_eq!((w.q, w.rhs.clone(), w.solution.clone()), (2, vec![2], vec![1]));
        assert!(w.no_solution_in_k && w.solution_verified);
        assert!(!mermin_feasible(5, 1).unwrap().feasible);
        assert_eq!(mermin_feasible(7, 1).unwrap().witness.unwrap().q, 2);
        assert!(mermin_feasible(4, 1).is_err());
        for (p, n) in [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (17, 1), (3, 2), (7, 2), (5, 2)] {
            let r = mermin_feasible(p, n).unwrap();
            assert_eq!(r.feasible, mermin_brute_force(r.order, 5), "{p}^{n}");
        }
    }
}
