//! Commutative involutive semirings and their concrete carriers.

mod axioms;
mod element;
pub mod finite_field;
pub mod padic;
mod positive;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};
use finite_field::{least_primitive_root, FiniteField};
use padic::{PAdic, PAdicContext};

pub use axioms::{check_axioms, check_tropical, TropicalOrder};
pub(crate) use element::render_rational;
pub use element::Element;
pub use positive::{decompose_pure, positive_subsemiring, ConeKind, FieldView, PositiveCone};

/// Serializable description of a carrier. Derived parameters (modulus,
/// primitive element) may be omitted on input and are echoed back by
/// [`Semiring::spec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CarrierSpec {
    Boolean,
    Chain {
        size: u32,
    },
    Z2,
    FiniteField {
        p: u64,
        n: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
    },
    QuadraticExtension {
        p: u64,
        n: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<Vec<u32>>,
    },
    Rational,
    SplitComplex,
    Padic {
        p: u64,
        precision: u32,
    },
    PadicResidue {
        p: u64,
        precision: u32,
    },
    TropicalInt,
    TropicalNat,
    TropicalRat,
    Viterbi,
    Table(TableCarrier),
}

/// A finite carrier given by explicit operation tables over `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCarrier {
    pub name: String,
    pub size: u32,
    pub add: Vec<u32>,
    pub mul: Vec<u32>,
    pub conj: Vec<u32>,
    pub zero: u32,
    pub one: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub finite_enumerable: bool,
    pub field: bool,
    pub additively_idempotent: bool,
    pub multiplicatively_cancellative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct QuadExt {
    base: FiniteField,
    eps: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ResidueRing {
    p: u64,
    k: u32,
    m: u64,
    eps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct PAdicField {
    ctx: PAdicContext,
    eps: PAdic,
    eps_int: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Carrier {
    Boolean,
    Chain(u32),
    Field(FiniteField),
    Quad(QuadExt),
    Residue(ResidueRing),
    Rational,
    Split,
    PAdic(PAdicField),
    TropInt,
    TropNat,
    TropRat,
    Viterbi,
    Table(TableCarrier),
}

#[derive(Debug)]
struct Inner {
    spec: CarrierSpec,
    carrier: Carrier,
    flags: Flags,
}

/// Handle to an immutable involutive semiring. Cloning is cheap.
#[derive(Clone)]
pub struct Semiring(Arc<Inner>);

impl PartialEq for Semiring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Semiring {}

impl fmt::Debug for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semiring({})", self.name())
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Semiring {
    /// Builds and validates a carrier.
    pub fn new(spec: CarrierSpec) -> Result<Self> {
        let (carrier, resolved) = match spec {
            CarrierSpec::Boolean => (Carrier::Boolean, CarrierSpec::Boolean),
            CarrierSpec::Chain { size } => {
                if size < 2 {
                    return Err(Error::InvalidParameter("a chain needs at least 2 levels".into()));
                }
                (Carrier::Chain(size), CarrierSpec::Chain { size })
            }
            CarrierSpec::Z2 => (Carrier::Field(FiniteField::new(2, 1, None, None)?), CarrierSpec::Z2),
            CarrierSpec::FiniteField { p, n, modulus } => {
                let f = FiniteField::new(p, n, modulus, None)?;
                let resolved = CarrierSpec::FiniteField { p, n, modulus: Some(f.modulus().to_vec()) };
                (Carrier::Field(f), resolved)
            }
            CarrierSpec::QuadraticExtension { p, n, modulus, epsilon } => {
                if p == 2 {
                    return Err(Error::InvalidParameter("quadratic extensions need an odd characteristic".into()));
                }
                let probe = FiniteField::new(p, n, modulus, None)?;
                let eps = match &epsilon {
                    Some(c) => probe.from_coeffs(c)?,
                    None => probe.primitive(),
                };
                let base = FiniteField::new(p, n, Some(probe.modulus().to_vec()), Some(eps))?;
                let resolved = CarrierSpec::QuadraticExtension {
                    p,
                    n,
                    modulus: Some(base.modulus().to_vec()),
                    epsilon: Some(base.coeffs(eps)),
                };
                (Carrier::Quad(QuadExt { base, eps }), resolved)
            }
            CarrierSpec::Rational => (Carrier::Rational, CarrierSpec::Rational),
            CarrierSpec::SplitComplex => (Carrier::Split, CarrierSpec::SplitComplex),
            CarrierSpec::Padic { p, precision } => {
                if p == 2 {
                    return Err(Error::InvalidParameter("p = 2 p-adic extensions are not supported".into()));
                }
                let ctx = PAdicContext::new(p, precision)?;
                let eps_int = least_primitive_root(p)?;
                let eps = ctx.from_int(eps_int as i64);
                (Carrier::PAdic(PAdicField { ctx, eps, eps_int }), CarrierSpec::Padic { p, precision })
            }
            CarrierSpec::PadicResidue { p, precision } => {
                if !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                if p == 2 {
                    return Err(Error::InvalidParameter("p = 2 p-adic extensions are not supported".into()));
                }
                if precision == 0 {
                    return Err(Error::InvalidParameter("precision must be at least 1".into()));
                }
                let m =
                    p.checked_pow(precision).filter(|&m| m < (1 << 31)).ok_or(Error::Overflow("residue modulus"))?;
                let eps = least_primitive_root(p)?;
                (Carrier::Residue(ResidueRing { p, k: precision, m, eps }), CarrierSpec::PadicResidue { p, precision })
            }
            CarrierSpec::TropicalInt => (Carrier::TropInt, CarrierSpec::TropicalInt),
            CarrierSpec::TropicalNat => (Carrier::TropNat, CarrierSpec::TropicalNat),
            CarrierSpec::TropicalRat => (Carrier::TropRat, CarrierSpec::TropicalRat),
            CarrierSpec::Viterbi => (Carrier::Viterbi, CarrierSpec::Viterbi),
            CarrierSpec::Table(t) => {
                let n = t.size as usize;
                if n == 0
                    || t.add.len() != n * n
                    || t.mul.len() != n * n
                    || t.conj.len() != n
                    || t.zero >= t.size
                    || t.one >= t.size
                    || t.add.iter().chain(&t.mul).chain(&t.conj).any(|&x| x >= t.size)
                {
                    return Err(Error::InvalidParameter(format!("malformed tables for {}", t.name)));
                }
                (Carrier::Table(t.clone()), CarrierSpec::Table(t))
            }
        };
        let flags = compute_flags(&carrier);
        Ok(Semiring(Arc::new(Inner { spec: resolved, carrier, flags })))
    }

    pub fn boolean() -> Self {
        Self::new(CarrierSpec::Boolean).unwrap()
    }
    pub fn z2() -> Self {
        Self::new(CarrierSpec::Z2).unwrap()
    }
    pub fn rational() -> Self {
        Self::new(CarrierSpec::Rational).unwrap()
    }
    pub fn split_complex() -> Self {
        Self::new(CarrierSpec::SplitComplex).unwrap()
    }
    pub fn tropical_int() -> Self {
        Self::new(CarrierSpec::TropicalInt).unwrap()
    }
    pub fn quadratic(p: u64, n: u32) -> Result<Self> {
        Self::new(CarrierSpec::QuadraticExtension { p, n, modulus: None, epsilon: None })
    }
    pub fn finite_field(p: u64, n: u32) -> Result<Self> {
        Self::new(CarrierSpec::FiniteField { p, n, modulus: None })
    }
    pub fn padic(p: u64, precision: u32) -> Result<Self> {
        Self::new(CarrierSpec::Padic { p, precision })
    }

    /// The resolved spec, with derived parameters filled in.
    pub fn spec(&self) -> &CarrierSpec {
        &self.0.spec
    }

    pub fn flags(&self) -> Flags {
        self.0.flags
    }

    pub fn name(&self) -> String {
        match &self.0.carrier {
            Carrier::Boolean => "B".into(),
            Carrier::Chain(m) => format!("chain({m})"),
            Carrier::Field(f) if f.p() == 2 && f.degree() == 1 => "Z2".into(),
            Carrier::Field(f) => format!("F_{}^{}", f.p(), f.degree()),
            Carrier::Quad(q) => format!("F_{}^{}(sqrt {:?})", q.base.p(), q.base.degree(), q.base.coeffs(q.eps)),
            Carrier::Residue(r) => format!("Z/{}^{}(sqrt {})", r.p, r.k, r.eps),
            Carrier::Rational => "Q".into(),
            Carrier::Split => "Q[j]".into(),
            Carrier::PAdic(f) => format!("Q_{}(sqrt {}) mod p^{}", f.ctx.p(), f.eps_int, f.ctx.precision()),
            Carrier::TropInt => "min-plus Z".into(),
            Carrier::TropNat => "min-plus N".into(),
            Carrier::TropRat => "min-plus Q".into(),
            Carrier::Viterbi => "max-times [0,1]".into(),
            Carrier::Table(t) => t.name.clone(),
        }
    }

    /// JSON echo of the carrier: resolved spec, flags and derived data.
    pub fn describe(&self) -> Value {
        let mut v = serde_json::to_value(&self.0.spec).expect("specs serialize");
        if let Value::Object(map) = &mut v {
            map.insert("name".into(), Value::String(self.name()));
            map.insert("flags".into(), serde_json::to_value(self.0.flags).unwrap());
            if let CarrierSpec::Table(_) = self.0.spec {
                map.remove("add");
                map.remove("mul");
                map.remove("conj");
            }
            match &self.0.carrier {
                Carrier::PAdic(f) => {
                    map.insert("epsilon".into(), json!(f.eps_int));
                }
                Carrier::Residue(r) => {
                    map.insert("epsilon".into(), json!(r.eps));
                }
                _ => {}
            }
        }
        v
    }

    pub fn zero(&self) -> Element {
        match &self.0.carrier {
            Carrier::Boolean => Element::Bool(false),
            Carrier::Chain(_) => Element::Level(0),
            Carrier::Field(_) => Element::Fp(0),
            Carrier::Quad(_) => Element::Quad(0, 0),
            Carrier::Residue(_) => Element::Residue(0, 0),
            Carrier::Rational => Element::Rat(BigRational::zero()),
            Carrier::Split => Element::Split(BigRational::zero(), BigRational::zero()),
            Carrier::PAdic(_) => Element::PAdic(PAdic::Zero, PAdic::Zero),
            Carrier::TropInt | Carrier::TropNat => Element::Trop(None),
            Carrier::TropRat => Element::TropQ(None),
            Carrier::Viterbi => Element::Viterbi(BigRational::zero()),
            Carrier::Table(t) => Element::Table(t.zero),
        }
    }

    pub fn one(&self) -> Element {
        match &self.0.carrier {
            Carrier::Boolean => Element::Bool(true),
            Carrier::Chain(m) => Element::Level(m - 1),
            Carrier::Field(_) => Element::Fp(1),
            Carrier::Quad(_) => Element::Quad(1, 0),
            Carrier::Residue(_) => Element::Residue(1, 0),
            Carrier::Rational => Element::Rat(BigRational::one()),
            Carrier::Split => Element::Split(BigRational::one(), BigRational::zero()),
            Carrier::PAdic(f) => Element::PAdic(f.ctx.from_int(1), PAdic::Zero),
            Carrier::TropInt | Carrier::TropNat => Element::Trop(Some(0)),
            Carrier::TropRat => Element::TropQ(Some(BigRational::zero())),
            Carrier::Viterbi => Element::Viterbi(BigRational::one()),
            Carrier::Table(t) => Element::Table(t.one),
        }
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        *a == self.zero()
    }

    pub fn is_one(&self, a: &Element) -> bool {
        *a == self.one()
    }

    fn foreign(&self, a: &Element) -> Error {
        Error::NotInCarrier(format!("{a} in {}", self.name()))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        use Element as E;
        Ok(match (&self.0.carrier, a, b) {
            (Carrier::Boolean, E::Bool(x), E::Bool(y)) => E::Bool(*x || *y),
            (Carrier::Chain(_), E::Level(x), E::Level(y)) => E::Level(*x.max(y)),
            (Carrier::Field(f), E::Fp(x), E::Fp(y)) => E::Fp(f.add(*x, *y)),
            (Carrier::Quad(q), E::Quad(x1, y1), E::Quad(x2, y2)) => E::Quad(q.base.add(*x1, *x2), q.base.add(*y1, *y2)),
            (Carrier::Residue(r), E::Residue(c1, s1), E::Residue(c2, s2)) => {
                E::Residue((c1 + c2) % r.m, (s1 + s2) % r.m)
            }
            (Carrier::Rational, E::Rat(x), E::Rat(y)) => E::Rat(x + y),
            (Carrier::Split, E::Split(x1, y1), E::Split(x2, y2)) => E::Split(x1 + x2, y1 + y2),
            (Carrier::PAdic(f), E::PAdic(c1, s1), E::PAdic(c2, s2)) => {
                E::PAdic(f.ctx.add(*c1, *c2)?, f.ctx.add(*s1, *s2)?)
            }
            (Carrier::TropInt | Carrier::TropNat, E::Trop(x), E::Trop(y)) => E::Trop(match (x, y) {
                (None, z) | (z, None) => *z,
                (Some(x), Some(y)) => Some(*x.min(y)),
            }),
            (Carrier::TropRat, E::TropQ(x), E::TropQ(y)) => E::TropQ(match (x, y) {
                (None, z) | (z, None) => z.clone(),
                (Some(x), Some(y)) => Some(x.min(y).clone()),
            }),
            (Carrier::Viterbi, E::Viterbi(x), E::Viterbi(y)) => E::Viterbi(x.max(y).clone()),
            (Carrier::Table(t), E::Table(x), E::Table(y)) => E::Table(t.add[(*x * t.size + *y) as usize]),
            _ => return Err(self.foreign(if self.contains(a) { b } else { a })),
        })
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        use Element as E;
        Ok(match (&self.0.carrier, a, b) {
            (Carrier::Boolean, E::Bool(x), E::Bool(y)) => E::Bool(*x && *y),
            (Carrier::Chain(_), E::Level(x), E::Level(y)) => E::Level(*x.min(y)),
            (Carrier::Field(f), E::Fp(x), E::Fp(y)) => E::Fp(f.mul(*x, *y)),
            (Carrier::Quad(q), E::Quad(x1, y1), E::Quad(x2, y2)) => {
                let f = &q.base;
                let x = f.add(f.mul(*x1, *x2), f.mul(q.eps, f.mul(*y1, *y2)));
                let y = f.add(f.mul(*x1, *y2), f.mul(*y1, *x2));
                E::Quad(x, y)
            }
            (Carrier::Residue(r), E::Residue(c1, s1), E::Residue(c2, s2)) => {
                let m = r.m;
                let c = (mul_mod(*c1, *c2, m) + mul_mod(r.eps, mul_mod(*s1, *s2, m), m)) % m;
                let s = (mul_mod(*c1, *s2, m) + mul_mod(*s1, *c2, m)) % m;
                E::Residue(c, s)
            }
            (Carrier::Rational, E::Rat(x), E::Rat(y)) => E::Rat(x * y),
            (Carrier::Split, E::Split(x1, y1), E::Split(x2, y2)) => E::Split(x1 * x2 + y1 * y2, x1 * y2 + y1 * x2),
            (Carrier::PAdic(f), E::PAdic(c1, s1), E::PAdic(c2, s2)) => {
                let ctx = &f.ctx;
                let c = ctx.add(ctx.mul(*c1, *c2)?, ctx.mul(f.eps, ctx.mul(*s1, *s2)?)?)?;
                let s = ctx.add(ctx.mul(*c1, *s2)?, ctx.mul(*s1, *c2)?)?;
                E::PAdic(c, s)
            }
            (Carrier::TropInt | Carrier::TropNat, E::Trop(x), E::Trop(y)) => E::Trop(match (x, y) {
                (Some(x), Some(y)) => Some(x.checked_add(*y).ok_or(Error::Overflow("tropical product"))?),
                _ => None,
            }),
            (Carrier::TropRat, E::TropQ(x), E::TropQ(y)) => E::TropQ(match (x, y) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            }),
            (Carrier::Viterbi, E::Viterbi(x), E::Viterbi(y)) => E::Viterbi(x * y),
            (Carrier::Table(t), E::Table(x), E::Table(y)) => E::Table(t.mul[(*x * t.size + *y) as usize]),
            _ => return Err(self.foreign(if self.contains(a) { b } else { a })),
        })
    }

    /// The involution `x -> x*`.
    pub fn involution(&self, a: &Element) -> Element {
        use Element as E;
        match (&self.0.carrier, a) {
            (Carrier::Quad(q), E::Quad(x, y)) => E::Quad(*x, q.base.neg(*y)),
            (Carrier::Residue(r), E::Residue(c, s)) => E::Residue(*c, (r.m - s) % r.m),
            (Carrier::Split, E::Split(x, y)) => E::Split(x.clone(), -y),
            (Carrier::PAdic(f), E::PAdic(c, s)) => E::PAdic(*c, f.ctx.neg(*s)),
            (Carrier::Table(t), E::Table(x)) => E::Table(t.conj[*x as usize]),
            _ => a.clone(),
        }
    }

    /// `a* a`.
    pub fn norm(&self, a: &Element) -> Result<Element> {
        self.mul(&self.involution(a), a)
    }

    /// Additive inverse, when the carrier is a ring.
    pub fn neg(&self, a: &Element) -> Option<Element> {
        use Element as E;
        Some(match (&self.0.carrier, a) {
            (Carrier::Field(f), E::Fp(x)) => E::Fp(f.neg(*x)),
            (Carrier::Quad(q), E::Quad(x, y)) => E::Quad(q.base.neg(*x), q.base.neg(*y)),
            (Carrier::Residue(r), E::Residue(c, s)) => E::Residue((r.m - c) % r.m, (r.m - s) % r.m),
            (Carrier::Rational, E::Rat(x)) => E::Rat(-x),
            (Carrier::Split, E::Split(x, y)) => E::Split(-x, -y),
            (Carrier::PAdic(f), E::PAdic(c, s)) => E::PAdic(f.ctx.neg(*c), f.ctx.neg(*s)),
            (Carrier::Table(t), E::Table(x)) => {
                return (0..t.size).find(|&y| t.add[(*x * t.size + y) as usize] == t.zero).map(E::Table)
            }
            _ => return None,
        })
    }

    pub fn has_negation(&self) -> bool {
        self.neg(&self.one()).is_some()
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        let nb = self.neg(b).ok_or_else(|| Error::NotARing(self.name()))?;
        self.add(a, &nb)
    }

    /// Multiplicative inverse, if any.
    pub fn inv(&self, a: &Element) -> Result<Option<Element>> {
        use Element as E;
        Ok(match (&self.0.carrier, a) {
            (Carrier::Boolean, E::Bool(x)) => x.then_some(E::Bool(true)),
            (Carrier::Chain(m), E::Level(x)) => (*x == m - 1).then_some(E::Level(m - 1)),
            (Carrier::Field(f), E::Fp(x)) => f.inv(*x).map(E::Fp),
            (Carrier::Quad(q), E::Quad(x, y)) => {
                let f = &q.base;
                let n = f.sub(f.mul(*x, *x), f.mul(q.eps, f.mul(*y, *y)));
                f.inv(n).map(|ni| E::Quad(f.mul(*x, ni), f.mul(f.neg(*y), ni)))
            }
            (Carrier::Residue(r), E::Residue(c, s)) => {
                let m = r.m;
                let n = (mul_mod(*c, *c, m) + m - mul_mod(r.eps, mul_mod(*s, *s, m), m)) % m;
                inv_mod(n, m).map(|ni| E::Residue(mul_mod(*c, ni, m), mul_mod((m - s) % m, ni, m)))
            }
            (Carrier::Rational, E::Rat(x)) => (!x.is_zero()).then(|| E::Rat(x.recip())),
            (Carrier::Split, E::Split(x, y)) => {
                let n = x * x - y * y;
                (!n.is_zero()).then(|| E::Split(x / &n, -y / &n))
            }
            (Carrier::PAdic(f), E::PAdic(c, s)) => {
                let ctx = &f.ctx;
                let n = ctx.sub(ctx.mul(*c, *c)?, ctx.mul(f.eps, ctx.mul(*s, *s)?)?)?;
                match ctx.inv(n) {
                    None => None,
                    Some(ni) => Some(E::PAdic(ctx.mul(*c, ni)?, ctx.mul(ctx.neg(*s), ni)?)),
                }
            }
            (Carrier::TropInt, E::Trop(x)) => x.map(|x| E::Trop(Some(-x))),
            (Carrier::TropNat, E::Trop(x)) => (*x == Some(0)).then_some(E::Trop(Some(0))),
            (Carrier::TropRat, E::TropQ(x)) => x.as_ref().map(|x| E::TropQ(Some(-x))),
            (Carrier::Viterbi, E::Viterbi(x)) => x.is_one().then(|| E::Viterbi(BigRational::one())),
            (Carrier::Table(t), E::Table(x)) => {
                (0..t.size).find(|&y| t.mul[(*x * t.size + y) as usize] == t.one).map(E::Table)
            }
            _ => return Err(self.foreign(a)),
        })
    }

    /// Image of an integer: `n * 1` (and its negative when the carrier has
    /// negation).
    pub fn from_int(&self, n: i64) -> Result<Element> {
        use Element as E;
        Ok(match &self.0.carrier {
            Carrier::Field(f) => E::Fp(f.from_int(n)),
            Carrier::Quad(q) => E::Quad(q.base.from_int(n), 0),
            Carrier::Residue(r) => E::Residue(n.rem_euclid(r.m as i64) as u64, 0),
            Carrier::Rational => E::Rat(big(n)),
            Carrier::Split => E::Split(big(n), BigRational::zero()),
            Carrier::PAdic(f) => E::PAdic(f.ctx.from_int(n), PAdic::Zero),
            _ => {
                if n < 0 {
                    let base = self.from_int(-n)?;
                    return self.neg(&base).ok_or_else(|| Error::NotARing(self.name()));
                }
                let one = self.one();
                let mut acc = self.zero();
                for _ in 0..n.min(64) {
                    acc = self.add(&acc, &one)?;
                }
                acc
            }
        })
    }

    /// Embeds a rational number, where the carrier contains `Q`.
    pub fn from_rational(&self, r: &BigRational) -> Result<Element> {
        match &self.0.carrier {
            Carrier::Rational => Ok(Element::Rat(r.clone())),
            Carrier::Split => Ok(Element::Split(r.clone(), BigRational::zero())),
            Carrier::TropRat => Ok(Element::TropQ(Some(r.clone()))),
            Carrier::Viterbi if !r.is_negative() && r <= &BigRational::one() => Ok(Element::Viterbi(r.clone())),
            Carrier::PAdic(f) => Ok(Element::PAdic(f.ctx.from_ratio(r.numer(), r.denom())?, PAdic::Zero)),
            Carrier::Field(_) | Carrier::Quad(_) | Carrier::Residue(_) => {
                let n = self.int_big(r.numer())?;
                let d = self.int_big(r.denom())?;
                let di = self.inv(&d)?.ok_or_else(|| Error::NotInvertible(r.to_string()))?;
                self.mul(&n, &di)
            }
            _ if r.is_integer() => self.int_big(r.numer()),
            _ => Err(Error::NotInCarrier(format!("{r} in {}", self.name()))),
        }
    }

    fn int_big(&self, n: &BigInt) -> Result<Element> {
        use num_traits::ToPrimitive;
        match &self.0.carrier {
            Carrier::Field(f) => {
                let r = (n % BigInt::from(f.p())).to_i64().unwrap();
                Ok(Element::Fp(f.from_int(r)))
            }
            Carrier::Quad(q) => {
                let r = (n % BigInt::from(q.base.p())).to_i64().unwrap();
                Ok(Element::Quad(q.base.from_int(r), 0))
            }
            Carrier::Residue(rr) => {
                let r = (n % BigInt::from(rr.m)).to_i64().unwrap();
                Ok(Element::Residue(r.rem_euclid(rr.m as i64) as u64, 0))
            }
            Carrier::Rational => Ok(Element::Rat(BigRational::from_integer(n.clone()))),
            Carrier::Split => Ok(Element::Split(BigRational::from_integer(n.clone()), BigRational::zero())),
            Carrier::PAdic(f) => Ok(Element::PAdic(f.ctx.parse_integer(n)?, PAdic::Zero)),
            Carrier::TropInt | Carrier::TropNat => {
                let v = n.to_i64().ok_or(Error::Overflow("tropical literal"))?;
                let e = Element::Trop(Some(v));
                if self.contains(&e) {
                    Ok(e)
                } else {
                    Err(self.foreign(&e))
                }
            }
            Carrier::TropRat => Ok(Element::TropQ(Some(BigRational::from_integer(n.clone())))),
            _ => self.from_int(n.to_i64().ok_or(Error::Overflow("integer literal"))?),
        }
    }

    /// Membership test for the carrier.
    pub fn contains(&self, a: &Element) -> bool {
        use Element as E;
        match (&self.0.carrier, a) {
            (Carrier::Boolean, E::Bool(_)) => true,
            (Carrier::Chain(m), E::Level(x)) => x < m,
            (Carrier::Field(f), E::Fp(x)) => *x < f.order(),
            (Carrier::Quad(q), E::Quad(x, y)) => *x < q.base.order() && *y < q.base.order(),
            (Carrier::Residue(r), E::Residue(c, s)) => *c < r.m && *s < r.m,
            (Carrier::Rational, E::Rat(_)) | (Carrier::Split, E::Split(..)) => true,
            (Carrier::PAdic(f), E::PAdic(c, s)) => [c, s].iter().all(|x| match x {
                PAdic::Zero => true,
                PAdic::Val { u, .. } => *u < f.ctx.modulus() && f.ctx.is_unit_residue(*u),
            }),
            (Carrier::TropInt, E::Trop(_)) => true,
            (Carrier::TropNat, E::Trop(x)) => x.is_none_or(|x| x >= 0),
            (Carrier::TropRat, E::TropQ(_)) => true,
            (Carrier::Viterbi, E::Viterbi(x)) => !x.is_negative() && x <= &BigRational::one(),
            (Carrier::Table(t), E::Table(x)) => *x < t.size,
            _ => false,
        }
    }

    /// Number of elements, for finite carriers.
    pub fn size(&self) -> Option<u128> {
        match &self.0.carrier {
            Carrier::Boolean => Some(2),
            Carrier::Chain(m) => Some(*m as u128),
            Carrier::Field(f) => Some(f.order() as u128),
            Carrier::Quad(q) => Some((q.base.order() as u128).pow(2)),
            Carrier::Residue(r) => Some((r.m as u128).pow(2)),
            Carrier::Table(t) => Some(t.size as u128),
            _ => None,
        }
    }

    /// Element at position `i` in canonical carrier order.
    pub fn element_at(&self, i: u64) -> Option<Element> {
        let size = self.size()?;
        if i as u128 >= size {
            return None;
        }
        Some(match &self.0.carrier {
            Carrier::Boolean => Element::Bool(i == 1),
            Carrier::Chain(_) => Element::Level(i as u32),
            Carrier::Field(_) => Element::Fp(i as u32),
            Carrier::Quad(q) => {
                let n = q.base.order() as u64;
                Element::Quad((i % n) as u32, (i / n) as u32)
            }
            Carrier::Residue(r) => Element::Residue(i % r.m, i / r.m),
            Carrier::Table(_) => Element::Table(i as u32),
            _ => return None,
        })
    }

    /// Position of `a` in canonical carrier order.
    pub fn index_of(&self, a: &Element) -> Option<u64> {
        if !self.contains(a) {
            return None;
        }
        Some(match (&self.0.carrier, a) {
            (Carrier::Boolean, Element::Bool(b)) => u64::from(*b),
            (Carrier::Chain(_), Element::Level(x)) => *x as u64,
            (Carrier::Field(_), Element::Fp(x)) => *x as u64,
            (Carrier::Quad(q), Element::Quad(x, y)) => *x as u64 + q.base.order() as u64 * *y as u64,
            (Carrier::Residue(r), Element::Residue(c, s)) => c + r.m * s,
            (Carrier::Table(_), Element::Table(x)) => *x as u64,
            _ => return None,
        })
    }

    /// All elements in canonical order, subject to the enumeration budget.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let size = self.size().ok_or_else(|| Error::NotEnumerable(self.name()))?;
        let budget = crate::enumeration_budget();
        if size > budget {
            return Err(Error::BudgetExceeded { needed: size, budget });
        }
        Ok((0..size as u64).map(|i| self.element_at(i).unwrap()).collect())
    }

    /// A random element; used for sampled axiom checks on infinite carriers.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let small_rat = |rng: &mut R| {
            BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=6)))
        };
        match &self.0.carrier {
            Carrier::Rational => Element::Rat(small_rat(rng)),
            Carrier::Split => Element::Split(small_rat(rng), small_rat(rng)),
            Carrier::PAdic(f) => {
                let comp = |rng: &mut R| {
                    if rng.gen_bool(0.2) {
                        return PAdic::Zero;
                    }
                    let m = f.ctx.modulus();
                    let u = loop {
                        let u = rng.gen_range(1..m);
                        if f.ctx.is_unit_residue(u) {
                            break u;
                        }
                    };
                    PAdic::Val { v: rng.gen_range(-2..=2), u }
                };
                Element::PAdic(comp(rng), comp(rng))
            }
            Carrier::TropInt => Element::Trop((!rng.gen_bool(0.1)).then(|| rng.gen_range(-50..=50))),
            Carrier::TropNat => Element::Trop((!rng.gen_bool(0.1)).then(|| rng.gen_range(0..=50))),
            Carrier::TropRat => Element::TropQ((!rng.gen_bool(0.1)).then(|| small_rat(rng))),
            Carrier::Viterbi => {
                let d = rng.gen_range(1i64..=8);
                Element::Viterbi(BigRational::new(BigInt::from(rng.gen_range(0..=d)), BigInt::from(d)))
            }
            _ => {
                let n = self.size().unwrap() as u64;
                self.element_at(rng.gen_range(0..n)).unwrap()
            }
        }
    }

    /// JSON form of an element (see crate docs for the per-carrier shapes).
    pub fn to_json(&self, a: &Element) -> Value {
        use Element as E;
        match (&self.0.carrier, a) {
            (Carrier::Field(f), E::Fp(x)) => json!(f.coeffs(*x)),
            (Carrier::Quad(q), E::Quad(x, y)) => json!([q.base.coeffs(*x), q.base.coeffs(*y)]),
            (_, E::Residue(c, s)) => json!([c, s]),
            (_, E::Split(x, y)) => json!([render_rational(x), render_rational(y)]),
            (_, E::PAdic(c, s)) => {
                let one = |x: &PAdic| match x {
                    PAdic::Zero => json!({"v": null, "u": 0}),
                    PAdic::Val { v, u } => json!({"v": v, "u": u}),
                };
                json!([one(c), one(s)])
            }
            _ => Value::String(a.to_string()),
        }
    }

    /// Short human-readable rendering.
    pub fn render(&self, a: &Element) -> String {
        match a {
            Element::Fp(_) | Element::Quad(..) | Element::PAdic(..) => self.to_json(a).to_string(),
            _ => a.to_string(),
        }
    }

    /// Parses an element from JSON; accepts the output of [`to_json`](Self::to_json)
    /// plus integer and `"a/b"` shorthands.
    pub fn parse(&self, v: &Value) -> Result<Element> {
        use Element as E;
        let bad = || Error::Parse(format!("cannot read {v} as an element of {}", self.name()));
        let parsed = match (&self.0.carrier, v) {
            (Carrier::Boolean, Value::Bool(b)) => E::Bool(*b),
            (Carrier::Field(f), Value::Array(cs)) => E::Fp(f.from_coeffs(&coeff_list(cs).ok_or_else(bad)?)?),
            (Carrier::Quad(q), Value::Array(parts)) if parts.len() == 2 => {
                let comp = |p: &Value| -> Result<u32> {
                    match p {
                        Value::Array(cs) => q.base.from_coeffs(&coeff_list(cs).ok_or_else(bad)?),
                        other => {
                            let r = parse_rational(other).ok_or_else(bad)?;
                            match self.from_rational(&r)? {
                                E::Quad(x, _) => Ok(x),
                                _ => Err(bad()),
                            }
                        }
                    }
                };
                E::Quad(comp(&parts[0])?, comp(&parts[1])?)
            }
            (Carrier::Residue(r), Value::Array(parts)) if parts.len() == 2 => {
                let c = parts[0].as_i64().ok_or_else(bad)?;
                let s = parts[1].as_i64().ok_or_else(bad)?;
                E::Residue(c.rem_euclid(r.m as i64) as u64, s.rem_euclid(r.m as i64) as u64)
            }
            (Carrier::Split, Value::Array(parts)) if parts.len() == 2 => {
                E::Split(parse_rational(&parts[0]).ok_or_else(bad)?, parse_rational(&parts[1]).ok_or_else(bad)?)
            }
            (Carrier::PAdic(f), Value::Array(parts)) if parts.len() == 2 => {
                let comp = |p: &Value| -> Result<PAdic> {
                    if let Some(obj) = p.as_object() {
                        let u = obj.get("u").and_then(Value::as_u64).ok_or_else(bad)?;
                        return match obj.get("v").and_then(Value::as_i64) {
                            None if u == 0 => Ok(PAdic::Zero),
                            Some(v) if f.ctx.is_unit_residue(u) => Ok(PAdic::Val { v, u: u % f.ctx.modulus() }),
                            _ => Err(bad()),
                        };
                    }
                    let r = parse_rational(p).ok_or_else(bad)?;
                    f.ctx.from_ratio(r.numer(), r.denom())
                };
                E::PAdic(comp(&parts[0])?, comp(&parts[1])?)
            }
            (Carrier::TropInt | Carrier::TropNat, Value::Null) => E::Trop(None),
            (Carrier::TropRat, Value::Null) => E::TropQ(None),
            (Carrier::TropInt | Carrier::TropNat | Carrier::TropRat, Value::String(s)) if s == "inf" || s == "∞" => {
                self.zero()
            }
            (Carrier::Table(_), Value::String(s)) if s.starts_with('t') => E::Table(s[1..].parse().map_err(|_| bad())?),
            (Carrier::Chain(_), _) => E::Level(
                parse_rational(v)
                    .filter(|r| r.is_integer())
                    .and_then(|r| {
                        use num_traits::ToPrimitive;
                        r.to_integer().to_u32()
                    })
                    .ok_or_else(bad)?,
            ),
            (Carrier::Table(_), _) => E::Table(v.as_u64().ok_or_else(bad)? as u32),
            (Carrier::Boolean, _) => {
                let r = parse_rational(v).ok_or_else(bad)?;
                if r.is_zero() {
                    E::Bool(false)
                } else if r.is_one() {
                    E::Bool(true)
                } else {
                    return Err(bad());
                }
            }
            (_, Value::String(s)) if s.contains('j') => parse_split_literal(s).ok_or_else(bad)?,
            _ => self.from_rational(&parse_rational(v).ok_or_else(bad)?)?,
        };
        if !self.contains(&parsed) {
            return Err(self.foreign(&parsed));
        }
        Ok(parsed)
    }

    pub(crate) fn quad_base(&self) -> Option<(&FiniteField, u32)> {
        match &self.0.carrier {
            Carrier::Quad(q) => Some((&q.base, q.eps)),
            _ => None,
        }
    }

    pub(crate) fn field(&self) -> Option<&FiniteField> {
        match &self.0.carrier {
            Carrier::Field(f) => Some(f),
            _ => None,
        }
    }

    /// `(p, precision, eps)` for the p-adic carriers.
    pub(crate) fn padic_params(&self) -> Option<(u64, u32, u64)> {
        match &self.0.carrier {
            Carrier::PAdic(f) => Some((f.ctx.p(), f.ctx.precision(), f.eps_int)),
            Carrier::Residue(r) => Some((r.p, r.k, r.eps)),
            _ => None,
        }
    }

    /// Tabulates a finite carrier; used to build perturbed copies in fault
    /// injection tests.
    pub fn tabulate(&self) -> Result<TableCarrier> {
        let elems = self.elements()?;
        let n = elems.len() as u32;
        let idx = |e: &Element| self.index_of(e).unwrap() as u32;
        let mut add = Vec::with_capacity((n * n) as usize);
        let mut mul = Vec::with_capacity((n * n) as usize);
        for a in &elems {
            for b in &elems {
                add.push(idx(&self.add(a, b)?));
                mul.push(idx(&self.mul(a, b)?));
            }
        }
        Ok(TableCarrier {
            name: format!("table({})", self.name()),
            size: n,
            add,
            mul,
            conj: elems.iter().map(|a| idx(&self.involution(a))).collect(),
            zero: idx(&self.zero()),
            one: idx(&self.one()),
        })
    }

    /// Sum of a sequence of elements.
    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Result<Element> {
        items.into_iter().try_fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn pow(&self, a: &Element, e: u64) -> Result<Element> {
        let (mut acc, mut base, mut e) = (self.one(), a.clone(), e);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }
}

fn coeff_list(cs: &[Value]) -> Option<Vec<u32>> {
    cs.iter().map(|c| c.as_u64().map(|c| c as u32)).collect()
}

pub(crate) fn parse_rational(v: &Value) -> Option<BigRational> {
    match v {
        Value::Number(n) => n.as_i64().map(big),
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((n, d)) => {
                    let n: BigInt = n.trim().parse().ok()?;
                    let d: BigInt = d.trim().parse().ok()?;
                    (!d.is_zero()).then(|| BigRational::new(n, d))
                }
                None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
            }
        }
        _ => None,
    }
}

/// Reads `"x+yj"` / `"x-yj"` / `"yj"`.
fn parse_split_literal(s: &str) -> Option<Element> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = s.strip_suffix('j')?;
    let cut = body.rfind(['+', '-']).filter(|&i| i > 0);
    let (x, y) = match cut {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let y = match y {
        "" | "+" => "1",
        "-" => "-1",
        y => y.trim_start_matches('+'),
    };
    let x = parse_rational(&Value::String(x.into()))?;
    let y = parse_rational(&Value::String(y.into()))?;
    Some(Element::Split(x, y))
}

fn compute_flags(c: &Carrier) -> Flags {
    let (fin, field, idem, canc) = match c {
        Carrier::Boolean => (true, false, true, true),
        Carrier::Chain(m) => (true, false, true, *m <= 2),
        Carrier::Field(_) | Carrier::Quad(_) => (true, true, false, true),
        Carrier::Residue(r) => (true, r.k == 1, false, r.k == 1),
        Carrier::Rational | Carrier::PAdic(_) => (false, true, false, true),
        Carrier::Split => (false, false, false, false),
        Carrier::TropInt | Carrier::TropNat | Carrier::TropRat | Carrier::Viterbi => (false, false, true, true),
        Carrier::Table(t) => {
            let n = t.size;
            let at = |tab: &[u32], a: u32, b: u32| tab[(a * n + b) as usize];
            let idem = (0..n).all(|a| at(&t.add, a, a) == a);
            let field = n > 1
                && (0..n).all(|a| (0..n).any(|b| at(&t.add, a, b) == t.zero))
                && (0..n).filter(|&a| a != t.zero).all(|a| (0..n).any(|b| at(&t.mul, a, b) == t.one));
            let canc = (0..n).filter(|&a| a != t.zero).all(|a| {
                let mut seen = vec![false; n as usize];
                (0..n).all(|b| !std::mem::replace(&mut seen[at(&t.mul, a, b) as usize], true))
            });
            (true, field, idem, canc)
        }
    };
    Flags { finite_enumerable: fin, field, additively_idempotent: idem, multiplicatively_cancellative: canc }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_extension_over_f3() {
        let s = Semiring::quadratic(3, 1).unwrap();
        assert_eq!(s.size(), Some(9));
        assert!(s.flags().field);
        match s.spec() {
            CarrierSpec::QuadraticExtension { epsilon, modulus, .. } => {
                assert_eq!(epsilon.as_deref(), Some(&[2][..]));
                assert_eq!(modulus.as_deref(), Some(&[0, 1][..]));
            }
            other => panic!("unexpected {other:?}"),
        }
        // (1 + sqrt2)* = 1 + 2 sqrt2
        assert_eq!(s.involution(&Element::Quad(1, 1)), Element::Quad(1, 2));
        for a in s.elements().unwrap() {
            assert_eq!(s.involution(&s.involution(&a)), a);
            if !s.is_zero(&a) {
                let ai = s.inv(&a).unwrap().unwrap();
                assert!(s.is_one(&s.mul(&a, &ai).unwrap()));
            }
        }
    }

    #[test]
    fn boolean_basics() {
        let b = Semiring::boolean();
        assert_eq!(b.size(), Some(2));
        let f = b.flags();
        assert!(f.additively_idempotent && !f.field);
        assert_eq!(b.involution(&Element::Bool(true)), Element::Bool(true));
        assert_eq!(b.from_int(2).unwrap(), Element::Bool(true));
    }

    #[test]
    fn split_complex_zero_divisors() {
        let s = Semiring::split_complex();
        let a = Element::split_int(1, 1);
        let b = Element::split_int(1, -1);
        assert!(s.is_zero(&s.mul(&a, &b).unwrap()));
        assert!(!s.flags().field);
        assert_eq!(s.involution(&Element::split_int(2, 3)), Element::split_int(2, -3));
        assert_eq!(s.inv(&a).unwrap(), None);
    }

    #[test]
    fn spec_json_round_trip() {
        let raw = r#"{"kind":"quadratic_extension","p":3,"n":1}"#;
        let spec: CarrierSpec = serde_json::from_str(raw).unwrap();
        let s = Semiring::new(spec).unwrap();
        let echoed = serde_json::to_string(s.spec()).unwrap();
        assert_eq!(echoed, r#"{"kind":"quadratic_extension","p":3,"n":1,"modulus":[0,1],"epsilon":[2]}"#);
        for raw in [r#"{"kind":"padic","p":3,"precision":4}"#, r#"{"kind":"tropical_int"}"#] {
            let spec: CarrierSpec = serde_json::from_str(raw).unwrap();
            assert_eq!(serde_json::to_string(Semiring::new(spec).unwrap().spec()).unwrap(), raw);
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Semiring::quadratic(9, 1), Err(Error::NotPrime(9)));
        let bad_eps =
            Semiring::new(CarrierSpec::QuadraticExtension { p: 5, n: 1, modulus: None, epsilon: Some(vec![4]) });
        assert!(matches!(bad_eps, Err(Error::NotPrimitive(..))));
        let reducible = Semiring::new(CarrierSpec::FiniteField { p: 3, n: 2, modulus: Some(vec![2, 0, 1]) });
        assert!(matches!(reducible, Err(Error::Reducible(_))));
        assert!(Semiring::padic(3, 0).is_err());
    }

    #[test]
    fn element_json_round_trips() {
        let carriers = [
            Semiring::quadratic(3, 2).unwrap(),
            Semiring::split_complex(),
            Semiring::padic(3, 3).unwrap(),
            Semiring::tropical_int(),
            Semiring::z2(),
            Semiring::boolean(),
            Semiring::rational(),
        ];
        let mut rng = rand::thread_rng();
        for s in &carriers {
            for _ in 0..20 {
                let a = s.sample(&mut rng);
                assert_eq!(s.parse(&s.to_json(&a)).unwrap(), a, "{}", s.name());
            }
        }
        let s = Semiring::split_complex();
        assert_eq!(s.parse(&json!("2-3j")).unwrap(), Element::split_int(2, -3));
        assert_eq!(s.parse(&json!("j")).unwrap(), Element::split_int(0, 1));
        assert_eq!(Semiring::rational().parse(&json!("3/5")).unwrap(), Element::rat(3, 5));
    }

    #[test]
    fn tropical_arithmetic() {
        let t = Semiring::tropical_int();
        assert_eq!(t.add(&Element::trop(3), &Element::trop(-1)).unwrap(), Element::trop(-1));
        assert_eq!(t.mul(&Element::trop(3), &Element::trop(-1)).unwrap(), Element::trop(2));
        assert_eq!(t.mul(&Element::TROP_INF, &Element::trop(-1)).unwrap(), Element::TROP_INF);
        assert_eq!(t.add(&Element::TROP_INF, &Element::trop(7)).unwrap(), Element::trop(7));
    }

    #[test]
    fn foreign_elements_rejected() {
        let b = Semiring::boolean();
        assert!(b.add(&Element::int(1), &Element::Bool(true)).is_err());
        assert!(!Semiring::tropical_int().contains(&Element::Bool(true)));
    }
}
