//! Completely positive maps built by doubling, with Choi matrices as the
//! canonical form.
//!
//! A map with Kraus list `K_1, ..., K_m` acts as `rho -> sum K rho K^dagger`.
//! Its Choi matrix is `sum kron(K, conj K)`, the matrix of that action on
//! row-major `vec(rho)`; two maps are equal exactly when their Choi matrices
//! are.

use serde_json::{json, Value};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::semiring::{positive_subsemiring, Element, PositiveCone, Semiring};

#[derive(Debug, Clone)]
pub struct CPMap {
    semiring: Semiring,
    input: usize,
    output: usize,
    kraus: Vec<Matrix>,
    choi: Matrix,
}

impl PartialEq for CPMap {
    fn eq(&self, other: &Self) -> bool {
        self.input == other.input && self.output == other.output && self.choi == other.choi
    }
}

impl CPMap {
    pub fn new(s: &Semiring, input: usize, output: usize, kraus: Vec<Matrix>) -> Result<Self> {
        let mut choi = Matrix::zeros(s, output * output, input * input);
        for k in &kraus {
            if k.semiring() != s {
                return Err(Error::SemiringMismatch);
            }
            if k.shape() != (output, input) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {}x{} for a map {input} -> {output}",
                    k.rows(),
                    k.cols()
                )));
            }
            choi = choi.add(&k.kron(&k.conj())?)?;
        }
        Ok(CPMap { semiring: s.clone(), input, output, kraus, choi })
    }

    pub fn zero(s: &Semiring, input: usize, output: usize) -> Self {
        CPMap::new(s, input, output, Vec::new()).expect("empty Kraus list")
    }

    pub fn identity(s: &Semiring, d: usize) -> Self {
        double(&Matrix::identity(s, d))
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }
    pub fn input(&self) -> usize {
        self.input
    }
    pub fn output(&self) -> usize {
        self.output
    }
    pub fn kraus(&self) -> &[Matrix] {
        &self.kraus
    }
    pub fn choi(&self) -> &Matrix {
        &self.choi
    }

    /// `rho -> sum K rho K^dagger` on a `d x d` matrix.
    pub fn apply(&self, rho: &Matrix) -> Result<Matrix> {
        if rho.shape() != (self.input, self.input) {
            return Err(Error::DimensionMismatch(format!(
                "state {}x{} for a map on dimension {}",
                rho.rows(),
                rho.cols(),
                self.input
            )));
        }
        let mut out = Matrix::zeros(&self.semiring, self.output, self.output);
        for k in &self.kraus {
            out = out.add(&k.matmul(rho)?.matmul(&k.dagger())?)?;
        }
        Ok(out)
    }

    /// The adjoint map, with Kraus operators `K^dagger`.
    pub fn dagger(&self) -> CPMap {
        let kraus = self.kraus.iter().map(Matrix::dagger).collect();
        CPMap::new(&self.semiring, self.output, self.input, kraus).expect("dagger keeps shapes consistent")
    }

    /// `{"in", "out", "kraus", "choi"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "in": self.input,
            "out": self.output,
            "kraus": self.kraus.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "choi": self.choi.to_json(),
        })
    }

    /// Reads `{"in", "out", "kraus"}`; any `"choi"` field is recomputed.
    pub fn from_json(s: &Semiring, v: &Value) -> Result<CPMap> {
        let dim = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|n| n as usize)
                .ok_or_else(|| Error::Parse(format!("CP map needs an integer \"{k}\"")))
        };
        let kraus = v
            .get("kraus")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("CP map needs a \"kraus\" array".into()))?
            .iter()
            .map(|m| Matrix::from_json(s, m))
            .collect::<Result<_>>()?;
        CPMap::new(s, dim("in")?, dim("out")?, kraus)
    }
}

/// The doubled map `rho -> f rho f^dagger`.
pub fn double(f: &Matrix) -> CPMap {
    CPMap::new(f.semiring(), f.cols(), f.rows(), vec![f.clone()]).expect("single Kraus operator")
}

/// Formal sum: Kraus lists concatenate, Choi matrices add.
pub fn cp_add(a: &CPMap, b: &CPMap) -> Result<CPMap> {
    if (a.input, a.output) != (b.input, b.output) {
        return Err(Error::DimensionMismatch(format!(
            "maps {} -> {} and {} -> {}",
            a.input, a.output, b.input, b.output
        )));
    }
    if a.semiring != b.semiring {
        return Err(Error::SemiringMismatch);
    }
    let mut kraus = a.kraus.clone();
    kraus.extend(b.kraus.iter().cloned());
    Ok(CPMap { semiring: a.semiring.clone(), input: a.input, output: a.output, kraus, choi: a.choi.add(&b.choi)? })
}

/// Equality of Choi matrices.
pub fn cp_equal(a: &CPMap, b: &CPMap) -> Result<bool> {
    if (a.input, a.output) != (b.input, b.output) {
        return Err(Error::DimensionMismatch(format!(
            "maps {} -> {} and {} -> {}",
            a.input, a.output, b.input, b.output
        )));
    }
    Ok(a.choi == b.choi)
}

/// `g . f`.
pub fn compose(g: &CPMap, f: &CPMap) -> Result<CPMap> {
    if f.output != g.input {
        return Err(Error::DimensionMismatch(format!(
            "compose {} -> {} after {} -> {}",
            g.input, g.output, f.input, f.output
        )));
    }
    let mut kraus = Vec::with_capacity(g.kraus.len() * f.kraus.len());
    for kg in &g.kraus {
        for kf in &f.kraus {
            kraus.push(kg.matmul(kf)?);
        }
    }
    CPMap::new(&f.semiring, f.input, g.output, kraus)
}

/// `a (x) b` on the doubled tensor product.
pub fn tensor(a: &CPMap, b: &CPMap) -> Result<CPMap> {
    let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
    for ka in &a.kraus {
        for kb in &b.kraus {
            kraus.push(ka.kron(kb)?);
        }
    }
    CPMap::new(&a.semiring, a.input * b.input, a.output * b.output, kraus)
}

/// Kills off-diagonal entries: Kraus `{|x><x|}`.
pub fn decoherence(s: &Semiring, d: usize) -> CPMap {
    let kraus = (0..d).map(|x| Matrix::ket(s, d, x).matmul(&Matrix::bra(s, d, x)).unwrap()).collect();
    CPMap::new(s, d, d, kraus).expect("projectors have matching shapes")
}

/// The trace effect `rho -> sum_x rho_xx`: Kraus `{<x|}`.
pub fn discard(s: &Semiring, d: usize) -> CPMap {
    CPMap::new(s, d, 1, (0..d).map(|x| Matrix::bra(s, d, x)).collect()).expect("bras have matching shapes")
}

/// `discard . f = discard`.
pub fn is_normalised(f: &CPMap) -> Result<bool> {
    let s = &f.semiring;
    cp_equal(&compose(&discard(s, f.output), f)?, &discard(s, f.input))
}

/// Outcome weights of a pure state in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BornWeights {
    pub weights: Vec<Element>,
    pub total: Element,
    /// `weights / total`, when `total` is invertible.
    pub normalised: Option<Vec<Element>>,
}

impl BornWeights {
    pub fn to_json(&self, s: &Semiring) -> Value {
        let list = |v: &[Element]| v.iter().map(|e| s.to_json(e)).collect::<Vec<_>>();
        json!({
            "weights": list(&self.weights),
            "total": s.to_json(&self.total),
            "normalised": self.normalised.as_deref().map(list),
        })
    }

    /// Total weight on a set of outcomes.
    pub fn on(&self, s: &Semiring, outcomes: &[usize]) -> Result<Element> {
        s.sum(outcomes.iter().map(|&i| &self.weights[i]))
    }
}

/// `weight(x) = psi_x* psi_x`.
pub fn born_weights(state: &Matrix) -> Result<BornWeights> {
    let s = state.semiring();
    if state.cols() != 1 {
        return Err(Error::DimensionMismatch(format!("a state is a column, got {}x{}", state.rows(), state.cols())));
    }
    let weights = state.data().iter().map(|a| s.norm(a)).collect::<Result<Vec<_>>>()?;
    let total = s.sum(&weights)?;
    let normalised = match s.inv(&total)? {
        Some(t) if !s.is_zero(&total) => Some(weights.iter().map(|w| s.mul(w, &t)).collect::<Result<_>>()?),
        _ => None,
    };
    Ok(BornWeights { weights, total, normalised })
}

/// Lifts an `R`-valued matrix `M` (e x d) to the classical map
/// `sum_{y,x} M_yx |y><x| (.) |x><y|`, using sum-of-norms witnesses.
pub fn classical_lift(m: &Matrix, cone: &PositiveCone) -> Result<CPMap> {
    let s = m.semiring();
    let (e, d) = m.shape();
    let mut kraus = Vec::new();
    for y in 0..e {
        for x in 0..d {
            let r = m.get(y, x);
            if s.is_zero(r) {
                continue;
            }
            let witness = cone
                .witness(r)
                .ok_or_else(|| Error::NoDecomposition(format!("{} as a sum of norms in {}", s.render(r), s.name())))?;
            let unit = Matrix::ket(s, e, y).matmul(&Matrix::bra(s, d, x))?;
            for xi in witness {
                kraus.push(unit.scale(&xi)?);
            }
        }
    }
    CPMap::new(s, d, e, kraus)
}

/// Convenience wrapper computing the cone on the fly.
pub fn classical_lift_auto(m: &Matrix) -> Result<CPMap> {
    classical_lift(m, &positive_subsemiring(m.semiring())?)
}

/// Reads back the `R`-matrix of a map with `decoh . f . decoh = f`.
pub fn classical_project(f: &CPMap) -> Result<Matrix> {
    let s = &f.semiring;
    let (d, e) = (f.input, f.output);
    let sandwiched = compose(&decoherence(s, e), &compose(f, &decoherence(s, d))?)?;
    if !cp_equal(&sandwiched, f)? {
        return Err(Error::NotDecoherent);
    }
    Ok(Matrix::from_fn(s, e, d, |y, x| f.choi.get(y * e + y, x * d + x).clone()))
}

/// An object of CP*: a dimension with a self-adjoint normalised idempotent.
#[derive(Debug, Clone)]
pub struct CPStarObject {
    pub dim: usize,
    pub idempotent: CPMap,
}

impl CPStarObject {
    pub fn quantum(s: &Semiring, d: usize) -> Self {
        CPStarObject { dim: d, idempotent: CPMap::identity(s, d) }
    }

    pub fn classical(s: &Semiring, d: usize) -> Self {
        CPStarObject { dim: d, idempotent: decoherence(s, d) }
    }

    /// Idempotence, self-adjointness and normalisation of the idempotent.
    pub fn check(&self) -> Result<CheckReport> {
        let e = &self.idempotent;
        let mut r = CheckReport::new(format!("CP* object of dimension {}", self.dim), true);
        r.push("idempotent", cp_equal(&compose(e, e)?, e)?, Value::Null);
        r.push("self_adjoint", cp_equal(&e.dagger(), e)?, Value::Null);
        r.push("normalised", is_normalised(e)?, Value::Null);
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Semiring {
        Semiring::rational()
    }

    fn sym(a: i64, b: i64, c: i64) -> Matrix {
        Matrix::from_ints(&q(), &[&[a, b], &[b, c]]).unwrap()
    }

    #[test]
    fn doubling_sigma_x() {
        let x = Matrix::from_ints(&q(), &[&[0, 1], &[1, 0]]).unwrap();
        let f = double(&x);
        assert_eq!(f.apply(&sym(1, 2, 3)).unwrap(), sym(3, 2, 1));
        let id = CPMap::identity(&q(), 2);
        assert_eq!(id.apply(&sym(5, -1, 7)).unwrap(), sym(5, -1, 7));
    }

    #[test]
    fn z2_doubles_cancel() {
        let z = Semiring::z2();
        let id = CPMap::identity(&z, 2);
        let sum = cp_add(&id, &id).unwrap();
        assert!(cp_equal(&sum, &CPMap::zero(&z, 2, 2)).unwrap());
        assert!(!cp_equal(&id, &CPMap::zero(&z, 2, 2)).unwrap());
    }

    #[test]
    fn scalars_square_under_doubling() {
        let two = double(&Matrix::scalar(&q(), Element::int(2)));
        let one = CPMap::identity(&q(), 1);
        let four = (0..3).fold(one.clone(), |acc, _| cp_add(&acc, &one).unwrap());
        assert!(cp_equal(&two, &four).unwrap());
    }

    #[test]
    fn kraus_order_is_irrelevant() {
        let a = Matrix::from_ints(&q(), &[&[1, 2], &[0, 1]]).unwrap();
        let b = Matrix::from_ints(&q(), &[&[0, 1], &[3, 0]]).unwrap();
        let f = CPMap::new(&q(), 2, 2, vec![a.clone(), b.clone()]).unwrap();
        let g = CPMap::new(&q(), 2, 2, vec![b, a]).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn decoherence_and_discard() {
        let s = q();
        let dec = decoherence(&s, 2);
        assert_eq!(dec.apply(&sym(1, 5, 2)).unwrap(), sym(1, 0, 2));
        assert_eq!(decoherence(&s, 1), CPMap::identity(&s, 1));
        let plus = Matrix::from_ints(&s, &[&[1], &[1]]).unwrap();
        let traced = compose(&discard(&s, 2), &double(&plus)).unwrap();
        assert_eq!(traced.choi().get(0, 0), &Element::int(2));
        assert!(is_normalised(&dec).unwrap());
        let proj = Matrix::from_ints(&s, &[&[1, 0], &[0, 0]]).unwrap();
        assert!(!is_normalised(&double(&proj)).unwrap());
        assert!(CPStarObject::classical(&s, 3).check().unwrap().all_pass());
    }

    #[test]
    fn discard_is_monoidal() {
        let z = Semiring::z2();
        let joint = tensor(&discard(&z, 2), &discard(&z, 2)).unwrap();
        assert!(cp_equal(&joint, &discard(&z, 4)).unwrap());
    }

    #[test]
    fn born_rule() {
        let s = q();
        let psi = Matrix::from_ints(&s, &[&[2], &[0]]).unwrap();
        let w = born_weights(&psi).unwrap();
        assert_eq!(w.weights, vec![Element::int(4), Element::int(0)]);
        assert_eq!(w.normalised.unwrap(), vec![Element::int(1), Element::int(0)]);
        let b = Semiring::boolean();
        let plus = Matrix::from_ints(&b, &[&[1], &[1]]).unwrap();
        assert_eq!(born_weights(&plus).unwrap().weights, vec![b.one(), b.one()]);
    }

    #[test]
    fn classical_round_trip() {
        let s = q();
        let m = Matrix::new(&s, 2, 2, vec![Element::int(1), Element::rat(1, 2), Element::int(0), Element::rat(1, 2)])
            .unwrap();
        let lifted = classical_lift_auto(&m).unwrap();
        assert!(is_normalised(&lifted).unwrap());
        assert_eq!(classical_project(&lifted).unwrap(), m);
        assert_eq!(classical_lift_auto(&Matrix::identity(&s, 3)).unwrap(), decoherence(&s, 3));
        let x = Matrix::from_ints(&s, &[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(classical_project(&double(&x)), Err(Error::NotDecoherent));
    }

    #[test]
    fn json_round_trip() {
        let s = Semiring::quadratic(3, 1).unwrap();
        let k = Matrix::new(&s, 1, 2, vec![Element::Quad(1, 1), Element::Quad(0, 2)]).unwrap();
        let f = double(&k);
        assert_eq!(CPMap::from_json(&s, &f.to_json()).unwrap(), f);
    }
}
