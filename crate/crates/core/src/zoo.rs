//! One verifier per toy theory. Each produces a [`Report`] of named claims
//! with re-checkable witness data.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{checked_pow, is_prime, is_square_free};
use crate::cpm::{compose, cp_add, cp_equal, decoherence, double, CPMap};
use crate::error::{Error, Result};
use crate::frobenius::FiniteAbelianGroup;
use crate::matrix::Matrix;
use crate::par::Exec;
use crate::phases::{
    coset_labels, divisibility_criterion, enumerate_phases, enumerate_phases_brute, has_fourier_basis, is_phase,
    mermin_feasible, run_abelian_hsp,
};
use crate::semiring::padic::{unramified_sign, PAdic};
use crate::semiring::{
    check_axioms, check_tropical, decompose_pure, positive_subsemiring, CarrierSpec, Element, Semiring, TableCarrier,
};

/// Theory ids accepted by [`run`], in suite order.
pub const THEORIES: [&str; 7] = ["real", "relational", "hyperbolic", "parity", "ffqt", "padic", "tropical"];

/// Default seed for sampled claims.
pub const DEFAULT_SEED: u64 = 1729;

/// Default number of samples for sampled claims.
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub pass: bool,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub theory: String,
    /// Quantification domain, when a claim ranges over a restricted family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn new(theory: impl Into<String>) -> Self {
        Report { theory: theory.into(), scope: None, claims: Vec::new() }
    }

    pub fn push(&mut self, id: impl Into<String>, anchor: &str, pass: bool, witness: Value) {
        self.claims.push(Claim { id: id.into(), anchor: anchor.into(), pass, witness });
    }

    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    /// Appends another report's claims with ids prefixed by `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.claims {
            self.claims.push(Claim { id: format!("{prefix}.{}", c.id), ..c });
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    /// One markdown table: claim, result, anchor.
    pub fn to_markdown(&self) -> String {
        let mut out = format!("### {}\n\n", self.theory);
        if let Some(scope) = &self.scope {
            out.push_str(&format!("Scope: {scope}\n\n"));
        }
        out.push_str("| claim | result | anchor |\n|---|---|---|\n");
        for c in &self.claims {
            out.push_str(&format!("| {} | {} | {} |\n", c.id, if c.pass { "pass" } else { "FAIL" }, c.anchor));
        }
        out
    }
}

fn els(s: &Semiring, v: &[Element]) -> Value {
    Value::Array(v.iter().map(|e| s.to_json(e)).collect())
}

/// Applies a Choi matrix to `rho` through row-major vectorisation.
fn apply_choi(choi: &Matrix, rho: &Matrix) -> Result<Matrix> {
    let s = rho.semiring();
    let v = Matrix::column(s, rho.data().to_vec())?;
    let out = choi.matmul(&v)?;
    let d = (out.rows() as f64).sqrt() as usize;
    Matrix::new(s, d, d, out.into_data())
}

/// Real quantum theory is not locally tomographic: the formal combination
/// `double(X) + double(Z) - double(1)` and `double(Y)` act identically on
/// every real symmetric state but have different Choi matrices.
pub fn verify_real_tomography_failure() -> Result<Report> {
    let q = Semiring::rational();
    let x = Matrix::from_ints(&q, &[&[0, 1], &[1, 0]])?;
    let z = Matrix::from_ints(&q, &[&[1, 0], &[0, -1]])?;
    let y = Matrix::from_ints(&q, &[&[0, -1], &[1, 0]])?;
    let id = Matrix::identity(&q, 2);
    let choi_a = double(&x).choi().add(double(&z).choi())?.sub(double(&id).choi())?;
    let choi_b = double(&y).choi().clone();

    let mut r = Report::new("real");
    let basis = [
        ("E11", Matrix::from_ints(&q, &[&[1, 0], &[0, 0]])?),
        ("E12+E21", Matrix::from_ints(&q, &[&[0, 1], &[1, 0]])?),
        ("E22", Matrix::from_ints(&q, &[&[0, 0], &[0, 1]])?),
    ];
    let mut agree = true;
    let mut outputs = serde_json::Map::new();
    for (name, rho) in &basis {
        let a = apply_choi(&choi_a, rho)?;
        let b = apply_choi(&choi_b, rho)?;
        // [[a, b], [b, c]] -> [[c, -b], [-b, a]]
        let (ra, rb, rc) = (rho.get(0, 0).clone(), rho.get(0, 1).clone(), rho.get(1, 1).clone());
        let nb = q.neg(&rb).expect("rationals have negation");
        let expected = Matrix::new(&q, 2, 2, vec![rc, nb.clone(), nb, ra])?;
        agree &= a == b && a == expected;
        outputs.insert(name.to_string(), json!({"A": a.to_json(), "B": b.to_json()}));
    }
    r.push(
        "agree_on_symmetric_states",
        "the two maps cannot be distinguished by applications to mixed states of R^2",
        agree,
        Value::Object(outputs),
    );

    let anti = Matrix::from_ints(&q, &[&[0, 1], &[-1, 0]])?;
    let (a, b) = (apply_choi(&choi_a, &anti)?, apply_choi(&choi_b, &anti)?);
    r.push(
        "choi_matrices_differ",
        "real quantum theory fails to be locally tomographic",
        choi_a != choi_b && a != b,
        json!({"input": anti.to_json(), "A": a.to_json(), "B": b.to_json()}),
    );

    let e11 = &basis[0].1;
    let (sx, sz) = (double(&x).apply(e11)?, double(&z).apply(e11)?);
    r.push(
        "pauli_doubles_distinguished",
        "doubled X permutes and doubled Z fixes the state E11",
        sx != sz,
        json!({"X": sx.to_json(), "Z": sz.to_json()}),
    );
    Ok(r)
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, d - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Over the booleans the pure state `|0> + ... + |d-1>` and the mixture of
/// basis states differ as CP maps but give identical outcome weights under
/// every permutation followed by measurement in the unique basis.
pub fn verify_relational_indistinguishability(d: usize) -> Result<Report> {
    if !(2..=6).contains(&d) {
        return Err(Error::InvalidParameter(format!("dimension {d} outside 2..=6")));
    }
    let b = Semiring::boolean();
    let psi = Matrix::column(&b, vec![b.one(); d])?;
    let pure = double(&psi);
    let mut mixed = CPMap::zero(&b, 1, d);
    for i in 0..d {
        mixed = cp_add(&mixed, &double(&Matrix::ket(&b, d, i)))?;
    }
    let mut r = Report::new("relational");
    r.scope = Some(format!("measurements in the unique basis of B^{d}, after any permutation"));
    r.push(
        "choi_matrices_differ",
        "the pure state |psi><psi| and the mixed state |0><0| + |1><1| are distinct",
        !cp_equal(&pure, &mixed)?,
        json!({"pure": pure.choi().to_json(), "mixed": mixed.choi().to_json()}),
    );

    let one = Matrix::identity(&b, 1);
    let diag = |m: &Matrix| (0..d).map(|i| m.get(i, i).clone()).collect::<Vec<_>>();
    let (wp, wm) = (diag(&pure.apply(&one)?), diag(&mixed.apply(&one)?));
    r.push(
        "born_weights_agree",
        "both give weight 1 on every outcome of the unique basis",
        wp == wm && wp.iter().all(|w| b.is_one(w)),
        json!({"pure": els(&b, &wp), "mixed": els(&b, &wm)}),
    );

    let perms = permutations(d);
    let measure = decoherence(&b, d);
    let mut all_agree = true;
    for p in &perms {
        let u = Matrix::from_fn(&b, d, d, |i, j| if p[j] == i { b.one() } else { b.zero() });
        let m = compose(&measure, &double(&u))?;
        all_agree &= compose(&m, &pure)?.apply(&one)? == compose(&m, &mixed)?.apply(&one)?;
    }
    r.push(
        "indistinguishable_by_measurement",
        "superposition and mixing are indistinguishable because of idempotence",
        all_agree,
        json!({"permutations_checked": perms.len()}),
    );
    Ok(r)
}

/// Hyperbolic quantum theory over the split-complex rationals.
pub fn verify_hyperbolic(samples: usize, seed: u64) -> Result<Report> {
    let s = Semiring::split_complex();
    let q = |n: i64, d: i64| Element::rat(n, d).as_rational().cloned().expect("rational");
    let mut r = Report::new("hyperbolic");

    let (a, b) = (Element::split_int(1, 1), Element::split_int(1, -1));
    let prod = s.mul(&a, &b)?;
    r.push(
        "zero_divisors",
        "(1+j)(1-j) = 1 - j^2 = 0",
        s.is_zero(&prod) && !s.is_zero(&a) && !s.is_zero(&b),
        json!({"product": s.to_json(&prod)}),
    );

    let phase = Element::split(q(5, 4), q(3, 4));
    let non_phase = Element::split_int(2, 1);
    let (np, nn) = (s.norm(&phase)?, s.norm(&non_phase)?);
    r.push(
        "unit_hyperbola_membership",
        "1 = (x+jy)*(x+jy) = x^2 - y^2",
        is_phase(&s, &phase)? && !is_phase(&s, &non_phase)?,
        json!({"phase": s.to_json(&phase), "norm": s.to_json(&np), "non_phase": s.to_json(&non_phase), "non_phase_norm": s.to_json(&nn)}),
    );

    // rational points ((1 + t^2), 2t) / (1 - t^2) of the unit hyperbola
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample_t = |rng: &mut ChaCha8Rng| loop {
        let t = q(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        if t.clone() * t.clone() != q(1, 1) {
            return t;
        }
    };
    let hyperbola = |t: &num_rational::BigRational| {
        let one = q(1, 1);
        let den = &one - t * t;
        Element::split((&one + t * t) / &den, (q(2, 1) * t) / &den)
    };
    let mut closure_ok = true;
    let mut first_failure = Value::Null;
    for _ in 0..samples {
        let (t1, t2) = (sample_t(&mut rng), sample_t(&mut rng));
        let (p1, p2) = (hyperbola(&t1), hyperbola(&t2));
        let p12 = s.mul(&p1, &p2)?;
        if !(is_phase(&s, &p1)? && is_phase(&s, &p2)? && is_phase(&s, &p12)?) {
            closure_ok = false;
            first_failure = json!([s.to_json(&p1), s.to_json(&p2)]);
            break;
        }
    }
    r.push(
        "phases_closed_under_multiplication",
        "the phases form the group of the unit hyperbola",
        closure_ok,
        json!({"samples": samples, "seed": seed, "failure": first_failure}),
    );

    let cone = positive_subsemiring(&s)?;
    let fixed = decompose_pure(&s, &Element::split_int(-3, 0));
    let mut pure_ok = fixed == Some(Element::split_int(-1, -2));
    for _ in 0..samples {
        let x = Element::split(q(rng.gen_range(-50..=50), rng.gen_range(1..=12)), q(0, 1));
        pure_ok &=
            cone.contains(&x) && decompose_pure(&s, &x).map(|w| s.norm(&w).ok() == Some(x.clone())) == Some(true);
    }
    pure_ok &= !cone.contains(&a);
    r.push(
        "rationals_are_pure",
        "every rational r is ((r+1)/2)^2 - ((r-1)/2)^2",
        pure_ok,
        json!({"r": -3, "witness": fixed.map(|w| s.to_json(&w)), "samples": samples}),
    );
    Ok(r)
}

/// Parity quantum theory over Z2: the four three-term states, their
/// recombination, and destructive interference on `{01, 10}`.
pub fn verify_parity_interference() -> Result<Report> {
    let z = Semiring::z2();
    let ket = |idx: &[usize]| Matrix::column(&z, (0..4).map(|i| Element::Fp(u32::from(idx.contains(&i)))).collect());
    // basis order 00, 01, 10, 11
    let psi = [ket(&[0, 1, 2])?, ket(&[1, 2, 3])?, ket(&[2, 3, 0])?, ket(&[3, 0, 1])?];
    let names = ["psi012", "psi123", "psi230", "psi301"];
    let mut r = Report::new("parity");

    let gram = Matrix::from_fn(&z, 4, 4, |i, j| psi[i].dagger().matmul(&psi[j]).unwrap().get(0, 0).clone());
    r.push(
        "orthonormal_basis",
        "the four two-qubit states form an orthonormal basis",
        gram == Matrix::identity(&z, 4),
        json!({"states": names, "gram": gram.to_json()}),
    );

    let sum = psi[0].add(&psi[1])?.add(&psi[2])?;
    r.push(
        "recombination",
        "|10> = |psi012> + |psi123> + |psi230>",
        sum == Matrix::ket(&z, 4, 2),
        json!({"sum": sum.to_json()}),
    );

    let summands = [Matrix::ket(&z, 4, 1), Matrix::ket(&z, 4, 2), psi[0].clone()];
    let superposition = summands[0].add(&summands[1])?.add(&summands[2])?;
    let set = [1usize, 2];
    let weights = |m: &Matrix| -> Result<Vec<Element>> { set.iter().map(|&i| z.norm(m.get(i, 0))).collect() };
    let total = |m: &Matrix| -> Result<Element> { z.sum(&weights(m)?) };
    let sup_w = weights(&superposition)?;
    let mut each_hits = true;
    let mut per_summand = Vec::new();
    for m in &summands {
        let w = weights(m)?;
        each_hits &= w.iter().any(|x| z.is_one(x));
        per_summand.push(json!({"state": m.to_json(), "weights": els(&z, &w), "set_total": z.to_json(&total(m)?)}));
    }
    r.push(
        "destructive_interference",
        "the superposition |01>+|10>+|psi012> = |00> has zero probability of an outcome in {01, 10}",
        superposition == Matrix::ket(&z, 4, 0) && sup_w.iter().all(|x| z.is_zero(x)) && each_hits,
        json!({"outcomes": ["01", "10"], "superposition": superposition.to_json(), "weights": els(&z, &sup_w), "summands": per_summand}),
    );
    Ok(r)
}

/// Finite-field quantum theory over `F_{p^n}(sqrt eps)`.
pub fn verify_ffqt(p: u64, n: u32) -> Result<Report> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidParameter(format!("p = {p} must be an odd prime")));
    }
    let q = checked_pow(p, n).ok_or(Error::Overflow("p^n"))?;
    let budget = crate::enumeration_budget();
    let needed = (q as u128) * (q as u128);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let s = Semiring::quadratic(p, n)?;
    let big_n = q + 1;
    let mut r = Report::new(format!("ffqt(p={p}, n={n})"));

    let phases = enumerate_phases(&s)?;
    r.push(
        "phase_count",
        "the phases number p^n + 1",
        phases.order() as u64 == big_n,
        json!({"order": phases.order(), "expected": big_n}),
    );
    r.push(
        "phases_cyclic",
        "the phases form the cyclic group of order p^n + 1",
        phases.cyclic_factors() == [big_n],
        json!({"cyclic_factors": phases.cyclic_factors(), "generator": phases.generator().map(|g| s.to_json(g))}),
    );
    let brute = enumerate_phases_brute(&s, Exec::default())?;
    r.push(
        "phase_enumerations_agree",
        "exhaustive solution of x^2 - eps y^2 = 1",
        brute.elements() == phases.elements(),
        json!({"brute_force_order": brute.order()}),
    );

    let norms: BTreeSet<u32> = Exec::default()
        .flat_map_range(q as usize, |x| {
            (0..q as u32)
                .map(|y| match s.norm(&Element::Quad(x as u32, y)) {
                    Ok(Element::Quad(v, 0)) => v,
                    other => panic!("norm outside the base field: {other:?}"),
                })
                .collect()
        })
        .into_iter()
        .collect();
    r.push(
        "all_scalars_pure",
        "all scalars are pure: the norm map is onto the base field",
        norms.len() as u64 == q,
        json!({"norm_image_size": norms.len(), "base_field_order": q}),
    );
    let nonzero = norms.iter().filter(|&&v| v != 0).count() as u64;
    r.push(
        "nonzero_pure_scalar_count",
        "the nonzero pure scalars number p^n - 1",
        nonzero == q - 1,
        json!({"count": nonzero}),
    );

    let zn = FiniteAbelianGroup::cyclic(big_n);
    let zp = FiniteAbelianGroup::cyclic(p);
    let (fz, fp) = (has_fourier_basis(&zn, &s)?, has_fourier_basis(&zp, &s)?);
    let (cz, cp) = (divisibility_criterion(&zn, p, n)?, divisibility_criterion(&zp, p, n)?);
    r.push(
        "fourier_basis_criterion",
        "characters form a basis iff every prime-power factor divides p^n + 1",
        fz == cz && fp == cp && fz && !fp,
        json!({"groups": [[big_n], [p]], "fourier_basis": [fz, fp], "criterion": [cz, cp]}),
    );

    let subgroups = zn.subgroups();
    let mut recovered = true;
    for h in &subgroups {
        let out = run_abelian_hsp(&zn, &s, &coset_labels(&zn, h))?;
        let expect: Vec<Vec<u64>> = h.iter().map(|&x| zn.element(x)).collect();
        recovered &= out.subgroup == expect;
    }
    r.push(
        "hsp_recovers_subgroups",
        "the abelian hidden subgroup algorithm runs over the phase group",
        recovered,
        json!({"group": [big_n], "subgroups": subgroups.len()}),
    );

    let m = mermin_feasible(p, n)?;
    let witness_ok = m.witness.as_ref().is_none_or(|w| w.no_solution_in_k && w.solution_verified);
    r.push(
        "mermin_feasibility",
        "Mermin-type arguments exist iff p^n + 1 is not square-free",
        m.feasible == !is_square_free(big_n) && witness_ok,
        serde_json::to_value(&m).expect("serializable"),
    );
    Ok(r)
}

/// p-adic quantum theory over the unramified extension `Q_p(sqrt eps)`.
pub fn verify_padic(p: u64, k: u32, samples: usize, seed: u64) -> Result<Report> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidParameter(format!("p = {p} must be an odd prime")));
    }
    if k < 2 {
        return Err(Error::InvalidParameter("precision must be at least 2".into()));
    }
    let residue = Semiring::new(CarrierSpec::PadicResidue { p, precision: k })?;
    let field = Semiring::padic(p, k)?;
    let m = checked_pow(p, k).ok_or(Error::Overflow("p^k"))?;
    let expected = (p + 1) * (m / p);
    let mut r = Report::new(format!("padic(p={p}, k={k})"));

    let phases = enumerate_phases(&residue)?;
    let brute = enumerate_phases_brute(&residue, Exec::default())?;
    r.push(
        "unit_norm_count",
        "the phases are isomorphic to Z_{p+1} x pZ_p",
        phases.order() as u64 == expected && brute.elements() == phases.elements(),
        json!({"count": phases.order(), "brute_force": brute.order(), "expected": expected}),
    );
    let torsion = phases.element_orders().iter().filter(|&&o| (p + 1).is_multiple_of(o)).count() as u64;
    r.push(
        "torsion_census",
        "the torsion subgroup of the phases is Z_{p+1}",
        torsion == p + 1,
        json!({"order_divides_p_plus_1": torsion}),
    );

    // every norm c^2 - eps s^2 with (c, s) not both in pZ_p is a unit, so
    // nonzero norms have even order
    let (_, _, eps) = residue.padic_params().expect("residue carrier");
    let mut units = true;
    let mut pairs = 0u64;
    for c in 0..m {
        for sv in 0..m {
            if c % p == 0 && sv % p == 0 {
                continue;
            }
            pairs += 1;
            let norm = (c * c % m + m - eps % m * (sv * sv % m) % m) % m;
            units &= norm % p != 0;
        }
    }
    r.push(
        "norms_have_even_order",
        "the pure scalars are exactly the p-adic numbers with even order",
        units,
        json!({"pairs_checked": pairs}),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = true;
    let mut counts = [0usize; 2];
    let mut first_failure = Value::Null;
    for _ in 0..samples {
        let x = loop {
            if let Element::PAdic(c @ PAdic::Val { .. }, _) = field.sample(&mut rng) {
                break c;
            }
        };
        let sign = unramified_sign(x).expect("nonzero sample");
        let elem = Element::PAdic(x, PAdic::Zero);
        let pure = decompose_pure(&field, &elem).is_some_and(|w| field.norm(&w).ok() == Some(elem.clone()));
        counts[usize::from(sign < 0)] += 1;
        if (sign > 0) != pure {
            agree = false;
            first_failure = json!(field.to_json(&elem));
            break;
        }
    }
    r.push(
        "sign_rule",
        "sgn(x) = (-1)^ord(x), and x is pure iff its order is even",
        agree,
        json!({"samples": samples, "seed": seed, "even": counts[0], "odd": counts[1], "failure": first_failure}),
    );

    let (even, odd) = (2 * p * p, 2 * p);
    let (x_even, x_odd) = (field.from_int(even as i64)?, field.from_int(odd as i64)?);
    let (pure_even, pure_odd) = (decompose_pure(&field, &x_even), decompose_pure(&field, &x_odd));
    r.push(
        "order_examples",
        "2p^2 has order 2 and is pure; 2p has order 1 and is not",
        pure_even.is_some() && pure_odd.is_none(),
        json!({"even": even, "odd": odd, "pure_witness": pure_even.map(|w| field.to_json(&w))}),
    );
    Ok(r)
}

fn is_tropical_carrier(s: &Semiring) -> bool {
    matches!(
        s.spec(),
        CarrierSpec::Boolean
            | CarrierSpec::Chain { .. }
            | CarrierSpec::TropicalInt
            | CarrierSpec::TropicalNat
            | CarrierSpec::TropicalRat
            | CarrierSpec::Viterbi
    )
}

/// Pairs to check: every pair for small finite carriers, otherwise samples.
fn pairs(s: &Semiring, samples: usize, seed: u64) -> (bool, Vec<(Element, Element)>) {
    if let (Some(n), Ok(e)) = (s.size(), s.elements()) {
        if n * n <= samples as u128 {
            return (true, e.iter().flat_map(|a| e.iter().map(move |b| (a.clone(), b.clone()))).collect());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (false, (0..samples).map(|_| (s.sample(&mut rng), s.sample(&mut rng))).collect())
}

/// Lattice laws for `(S, join, bottom, meet, top)` over all triples.
fn lattice_laws(
    e: &[Element],
    join: &dyn Fn(&Element, &Element) -> Element,
    meet: &dyn Fn(&Element, &Element) -> Element,
    bottom: &Element,
    top: &Element,
) -> bool {
    e.iter().all(|a| {
        join(a, bottom) == *a
            && meet(a, top) == *a
            && join(a, a) == *a
            && e.iter().all(|b| {
                join(a, b) == join(b, a)
                    && meet(a, b) == meet(b, a)
                    && join(a, &meet(a, b)) == *a
                    && meet(a, &join(a, b)) == *a
                    && (join(a, b) == *a || join(a, b) == *b)
                    && e.iter().all(|c| {
                        join(a, &join(b, c)) == join(&join(a, b), c)
                            && meet(a, &meet(b, c)) == meet(&meet(a, b), c)
                            && meet(a, &join(b, c)) == join(&meet(a, b), &meet(a, c))
                    })
            })
    })
}

/// Tropical quantum theory on a tropical carrier.
pub fn verify_tropical(s: &Semiring, samples: usize, seed: u64) -> Result<Report> {
    if !is_tropical_carrier(s) {
        return Err(Error::Unsupported(format!("{} is not a tropical carrier", s.name())));
    }
    let mut r = Report::new(format!("tropical({})", s.name()));
    let (exhaustive, pairs) = pairs(s, samples, seed);
    let domain = json!({"exhaustive": exhaustive, "pairs": pairs.len(), "seed": seed});

    let selection = check_tropical(s, samples, seed);
    r.push(
        "selection_law",
        "a semiring is tropical iff a = a+b or b = a+b",
        selection.is_ok(),
        match &selection {
            Ok(_) => domain.clone(),
            Err(pair) => json!({"a": s.to_json(&pair.0), "b": s.to_json(&pair.1)}),
        },
    );
    let Ok(order) = selection else { return Ok(r) };

    let mut involution_ok = true;
    for (a, b) in &pairs {
        let (sa, sb) = (s.involution(a), s.involution(b));
        involution_ok &= sa == *a && (!order.le(a, b) || order.le(&sa, &sb));
    }
    r.push(
        "trivial_involution",
        "the only involution on a tropical semiring is the trivial one",
        involution_ok,
        domain.clone(),
    );

    let mut dream = true;
    for (a, b) in &pairs {
        let lhs = s.pow(&s.add(a, b)?, 2)?;
        let rhs = s.add(&s.pow(a, 2)?, &s.pow(b, 2)?)?;
        dream &= lhs == rhs;
    }
    r.push("freshmans_dream", "the Freshman's dream holds in tropical arithmetic", dream, domain.clone());

    let cone = positive_subsemiring(s)?;
    let mut squares = true;
    for (a, b) in &pairs {
        let (a2, b2) = (s.pow(a, 2)?, s.pow(b, 2)?);
        let sum = s.add(&a2, &b2)?;
        squares &= cone.contains(&a2) && (sum == a2 || sum == b2) && s.mul(&a2, &b2)? == s.pow(&s.mul(a, b)?, 2)?;
        // positives are exactly squares
        squares &= !cone.contains(a) || decompose_pure(s, a).is_some_and(|x| s.pow(&x, 2).ok() == Some(a.clone()));
    }
    r.push(
        "positives_are_squares",
        "the positive elements form the sub-semiring of squares",
        squares,
        json!({"cone": format!("{:?}", cone.kind()), "pairs": pairs.len()}),
    );

    if matches!(s.spec(), CarrierSpec::Boolean | CarrierSpec::Chain { .. }) {
        let e = s.elements()?;
        // lattice (S, +, 0, ., 1) read as a tropical semiring (S, ., 1, +, 0)
        let n = e.len() as u32;
        let idx = |x: &Element| s.index_of(x).unwrap() as u32;
        let mut add = Vec::new();
        let mut mul = Vec::new();
        for a in &e {
            for b in &e {
                add.push(idx(&s.mul(a, b)?));
                mul.push(idx(&s.add(a, b)?));
            }
        }
        let table = Semiring::new(CarrierSpec::Table(TableCarrier {
            name: format!("dual({})", s.name()),
            size: n,
            add,
            mul,
            conj: (0..n).collect(),
            zero: idx(&s.one()),
            one: idx(&s.zero()),
        }))?;
        let forward =
            check_axioms(&table, usize::MAX, seed).all_pass() && check_tropical(&table, usize::MAX, seed).is_ok();
        // converse: 1 least, x^2 = x, and (S, ., 1, +, 0) is a totally ordered distributive lattice
        let one_least = e.iter().all(|x| order.le(&s.one(), x));
        let idempotent = e.iter().all(|x| s.mul(x, x).ok().as_ref() == Some(x));
        let join = |a: &Element, b: &Element| s.mul(a, b).unwrap();
        let meet = |a: &Element, b: &Element| s.add(a, b).unwrap();
        let lattice = lattice_laws(&e, &join, &meet, &s.one(), &s.zero());
        r.push(
            "lattice_correspondence",
            "totally ordered distributive lattices are exactly the tropical semirings with 1 least and x^2 = x",
            forward && one_least && idempotent && lattice,
            json!({"forward": forward, "one_least": one_least, "idempotent": idempotent, "lattice_laws": lattice}),
        );
    }
    Ok(r)
}

/// Runs one theory's verifier with the suite's parameters.
pub fn run(theory: &str, seed: u64) -> Result<Report> {
    match theory {
        "real" => verify_real_tomography_failure(),
        "relational" => verify_relational_indistinguishability(2),
        "hyperbolic" => verify_hyperbolic(DEFAULT_SAMPLES, seed),
        "parity" => verify_parity_interference(),
        "ffqt" => {
            let mut r = Report::new("ffqt");
            for (p, n) in [(3, 1), (5, 1), (7, 1), (11, 1), (3, 2)] {
                r.absorb(&format!("p{p}n{n}"), verify_ffqt(p, n)?);
            }
            Ok(r)
        }
        "padic" => {
            let mut r = Report::new("padic");
            for (p, k) in [(3, 2), (3, 3), (5, 2)] {
                r.absorb(&format!("p{p}k{k}"), verify_padic(p, k, DEFAULT_SAMPLES, seed)?);
            }
            Ok(r)
        }
        "tropical" => {
            let mut r = Report::new("tropical");
            r.absorb("boolean", verify_tropical(&Semiring::boolean(), DEFAULT_SAMPLES, seed)?);
            r.absorb("min_plus", verify_tropical(&Semiring::tropical_int(), DEFAULT_SAMPLES, seed)?);
            Ok(r)
        }
        other => Err(Error::InvalidParameter(format!("unknown theory '{other}'; expected one of {THEORIES:?}"))),
    }
}

/// Every verifier, run concurrently, reports in [`THEORIES`] order.
pub fn run_all(seed: u64) -> Result<Vec<Report>> {
    run_all_with(seed, Exec::default())
}

pub fn run_all_with(seed: u64, exec: Exec) -> Result<Vec<Report>> {
    exec.try_map_range(THEORIES.len(), |i| run(THEORIES[i], seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_claims_pass() {
        let r = verify_real_tomography_failure().unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.claims.len(), 3);
    }

    #[test]
    fn relational_claims_pass() {
        for d in 2..=4 {
            assert!(verify_relational_indistinguishability(d).unwrap().all_pass());
        }
    }

    #[test]
    fn parity_has_three_claims() {
        let r = verify_parity_interference().unwrap();
        assert_eq!(r.claims.len(), 3);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn hyperbolic_claims_pass() {
        let r = verify_hyperbolic(100, 3).unwrap();
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn ffqt_small_cases() {
        let r = verify_ffqt(3, 1).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.claim("phase_count").unwrap().witness["order"], 4);
        assert!(verify_ffqt(5, 1).unwrap().all_pass());
    }

    #[test]
    fn padic_claims_pass() {
        let r = verify_padic(3, 2, 200, 1).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.claim("unit_norm_count").unwrap().witness["count"], 12);
    }

    #[test]
    fn tropical_claims_pass() {
        assert!(verify_tropical(&Semiring::boolean(), 1000, 1).unwrap().all_pass());
        assert!(verify_tropical(&Semiring::tropical_int(), 300, 1).unwrap().all_pass());
        assert!(verify_tropical(&Semiring::z2(), 10, 1).is_err());
    }

    #[test]
    fn unknown_theory() {
        assert!(run("nosuch", 1).is_err());
    }

    #[test]
    fn markdown_rendering() {
        let md = verify_parity_interference().unwrap().to_markdown();
        assert!(md.contains("| recombination | pass |"));
    }
}
