//! Positive cones `R = { sums of x* x }` and pure-scalar decompositions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::padic::PAdic;
use super::{Carrier, CarrierSpec, Element, Semiring};
use crate::arith::mul_mod;
use crate::error::{Error, Result};

/// How membership in the cone is decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeKind {
    /// Computed by fixpoint iteration over a finite carrier.
    Enumerated,
    /// A registered closed-form predicate, with a short description.
    ClosedForm(&'static str),
}

/// The positive sub-semiring of a carrier.
#[derive(Debug, Clone)]
pub struct PositiveCone {
    semiring: Semiring,
    kind: ConeKind,
    members: Option<Vec<Element>>,
    witnesses: HashMap<Element, Vec<Element>>,
}

impl PositiveCone {
    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    /// Explicit member list in carrier order, for enumerated cones.
    pub fn members(&self) -> Option<&[Element]> {
        self.members.as_deref()
    }

    pub fn contains(&self, r: &Element) -> bool {
        let s = &self.semiring;
        if !s.contains(r) {
            return false;
        }
        if self.members.is_some() {
            return self.witnesses.contains_key(r);
        }
        match (&s.0.carrier, r) {
            (Carrier::Rational, Element::Rat(x)) => !x.is_negative(),
            (Carrier::Split, Element::Split(_, y)) => y.is_zero(),
            (Carrier::PAdic(_), Element::PAdic(_, s)) => s.is_zero(),
            (Carrier::TropInt | Carrier::TropNat, Element::Trop(x)) => x.is_none_or(|x| x % 2 == 0),
            (Carrier::TropRat, _) => true,
            (Carrier::Viterbi, Element::Viterbi(x)) => rational_sqrt(x).is_some(),
            _ => false,
        }
    }

    /// Elements `x_1, ..., x_m` with `r = sum x_i* x_i`, when one is known.
    pub fn witness(&self, r: &Element) -> Option<Vec<Element>> {
        if !self.contains(r) {
            return None;
        }
        if self.members.is_some() {
            return self.witnesses.get(r).cloned();
        }
        let s = &self.semiring;
        if let Some(xi) = decompose_pure(s, r) {
            return Some(vec![xi]);
        }
        match (&s.0.carrier, r) {
            (Carrier::Rational, Element::Rat(x)) => four_squares(x).map(|v| v.into_iter().map(Element::Rat).collect()),
            (Carrier::PAdic(_), Element::PAdic(PAdic::Val { v, .. }, _)) => {
                // Odd valuation v: r = (r + p^{v-1}) - p^{v-1}, both of even valuation.
                let shift = Element::PAdic(PAdic::Val { v: v - 1, u: 1 }, PAdic::Zero);
                let a = s.add(r, &shift).ok()?;
                let b = s.neg(&shift)?;
                Some(vec![decompose_pure(s, &a)?, decompose_pure(s, &b)?])
            }
            _ => None,
        }
    }

    /// True when the cone is itself a field, so signed weights stay inside it.
    pub fn is_field(&self) -> bool {
        !matches!(self.semiring.0.carrier, Carrier::Rational) && self.field_view().is_some()
    }

    /// A field containing the cone as a generating sub-semiring, together with
    /// embeddings in both directions. Used by the signed LHV solver.
    pub fn field_view(&self) -> Option<FieldView> {
        let s = &self.semiring;
        let field = match &s.0.carrier {
            Carrier::Field(_) => s.clone(),
            Carrier::Quad(q) => Semiring::new(CarrierSpec::FiniteField {
                p: q.base.p() as u64,
                n: q.base.degree(),
                modulus: Some(q.base.modulus().to_vec()),
            })
            .ok()?,
            Carrier::Residue(r) if r.k == 1 => {
                Semiring::new(CarrierSpec::FiniteField { p: r.p, n: 1, modulus: None }).ok()?
            }
            Carrier::Rational | Carrier::Split => Semiring::rational(),
            Carrier::PAdic(_) => s.clone(),
            Carrier::Table(_) if s.flags().field => s.clone(),
            _ => return None,
        };
        Some(FieldView { source: s.clone(), field })
    }
}

/// Embedding of a cone into a field.
#[derive(Debug, Clone)]
pub struct FieldView {
    source: Semiring,
    field: Semiring,
}

impl FieldView {
    pub fn field(&self) -> &Semiring {
        &self.field
    }

    /// Maps a cone element into the field.
    pub fn to_field(&self, r: &Element) -> Result<Element> {
        let bad = || Error::NotInCarrier(format!("{r} is not in the positive cone of {}", self.source.name()));
        match (&self.source.0.carrier, r) {
            (Carrier::Quad(_), Element::Quad(x, 0)) => Ok(Element::Fp(*x)),
            (Carrier::Residue(_), Element::Residue(c, 0)) => Ok(Element::Fp(*c as u32)),
            (Carrier::Split, Element::Split(x, y)) if y.is_zero() => Ok(Element::Rat(x.clone())),
            (Carrier::Quad(_) | Carrier::Residue(_) | Carrier::Split, _) => Err(bad()),
            _ if self.source.contains(r) => Ok(r.clone()),
            _ => Err(bad()),
        }
    }

    /// Maps a field element back into the source carrier.
    pub fn from_field(&self, x: &Element) -> Result<Element> {
        match (&self.source.0.carrier, x) {
            (Carrier::Quad(_), Element::Fp(v)) => Ok(Element::Quad(*v, 0)),
            (Carrier::Residue(_), Element::Fp(v)) => Ok(Element::Residue(*v as u64, 0)),
            (Carrier::Split, Element::Rat(v)) => Ok(Element::Split(v.clone(), BigRational::zero())),
            _ if self.source.contains(x) => Ok(x.clone()),
            _ => Err(Error::NotInCarrier(x.to_string())),
        }
    }
}

/// Computes the positive cone of `s`.
pub fn positive_subsemiring(s: &Semiring) -> Result<PositiveCone> {
    let closed = |desc| PositiveCone {
        semiring: s.clone(),
        kind: ConeKind::ClosedForm(desc),
        members: None,
        witnesses: HashMap::new(),
    };
    match &s.0.carrier {
        Carrier::Rational => return Ok(closed("non-negative rationals")),
        Carrier::Split => return Ok(closed("x + 0j for every rational x")),
        Carrier::PAdic(_) => return Ok(closed("c + 0 sqrt(eps): all of Q_p")),
        Carrier::TropInt | Carrier::TropNat => return Ok(closed("even values and inf")),
        Carrier::TropRat => return Ok(closed("every value")),
        Carrier::Viterbi => return Ok(closed("squares of rationals in [0, 1]")),
        _ => {}
    }
    let elems = s.elements()?;
    let mut witnesses: HashMap<Element, Vec<Element>> = HashMap::new();
    let mut frontier = Vec::new();
    for x in &elems {
        let n = s.norm(x)?;
        if !witnesses.contains_key(&n) {
            witnesses.insert(n.clone(), vec![x.clone()]);
            frontier.push(n);
        }
    }
    let mut found: Vec<Element> = frontier.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in found.clone().iter() {
                let c = s.add(a, b)?;
                if !witnesses.contains_key(&c) {
                    let mut w = witnesses[a].clone();
                    w.extend(witnesses[b].iter().cloned());
                    witnesses.insert(c.clone(), w);
                    next.push(c.clone());
                    found.push(c);
                }
            }
        }
        frontier = next;
    }
    let mut members: Vec<Element> = witnesses.keys().cloned().collect();
    members.sort_by_key(|e| s.index_of(e));
    Ok(PositiveCone { semiring: s.clone(), kind: ConeKind::Enumerated, members: Some(members), witnesses })
}

/// Finds `xi` with `xi* xi = r`, if one exists.
pub fn decompose_pure(s: &Semiring, r: &Element) -> Option<Element> {
    if !s.contains(r) {
        return None;
    }
    if s.is_zero(r) {
        return Some(s.zero());
    }
    match (&s.0.carrier, r) {
        (Carrier::Boolean | Carrier::Chain(_), _) => Some(r.clone()),
        (Carrier::Field(f), Element::Fp(x)) => f.sqrt(*x).first().map(|&y| Element::Fp(y)),
        (Carrier::Quad(q), Element::Quad(x, 0)) => {
            let f = &q.base;
            (0..f.order()).find_map(|y| {
                let t = f.add(*x, f.mul(q.eps, f.mul(y, y)));
                f.sqrt(t).first().map(|&x0| Element::Quad(x0, y))
            })
        }
        (Carrier::Quad(_), _) => None,
        (Carrier::Residue(rr), Element::Residue(c, 0)) => {
            let m = rr.m;
            let mut squares: HashMap<u64, u64> = HashMap::new();
            for y in 0..m {
                squares.entry(mul_mod(y, y, m)).or_insert(y);
            }
            (0..m).find_map(|y| {
                let t = (c + mul_mod(rr.eps, mul_mod(y, y, m), m)) % m;
                squares.get(&t).map(|&x0| Element::Residue(x0, y))
            })
        }
        (Carrier::Residue(_), _) => None,
        (Carrier::Rational, Element::Rat(x)) => rational_sqrt(x).map(Element::Rat),
        (Carrier::Split, Element::Split(x, y)) if y.is_zero() => {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let one = BigRational::one();
            Some(Element::Split((x + &one) * &half, (x - &one) * &half))
        }
        (Carrier::Split, _) => None,
        (Carrier::PAdic(f), Element::PAdic(PAdic::Val { v, u }, PAdic::Zero)) => {
            if v % 2 != 0 {
                return None;
            }
            let ctx = &f.ctx;
            let m = ctx.modulus();
            let p = ctx.p();
            let zero_or_unit = |y: u64| y == 0 || !y.is_multiple_of(p);
            let mut squares: HashMap<u64, u64> = HashMap::new();
            for y in (0..m).filter(|&y| zero_or_unit(y)) {
                squares.entry(mul_mod(y, y, m)).or_insert(y);
            }
            let (c0, s0) = (0..m).filter(|&y| zero_or_unit(y)).find_map(|y| {
                let t = (u + mul_mod(f.eps_int % m, mul_mod(y, y, m), m)) % m;
                squares.get(&t).map(|&x0| (x0, y))
            })?;
            let scale = |y: u64| match y {
                0 => PAdic::Zero,
                y => PAdic::Val { v: v / 2, u: y },
            };
            let xi = Element::PAdic(scale(c0), scale(s0));
            (s.norm(&xi).ok().as_ref() == Some(r)).then_some(xi)
        }
        (Carrier::PAdic(_), _) => None,
        (Carrier::TropInt | Carrier::TropNat, Element::Trop(Some(x))) => (x % 2 == 0).then(|| Element::trop(x / 2)),
        (Carrier::TropRat, Element::TropQ(Some(x))) => {
            Some(Element::TropQ(Some(x * BigRational::new(BigInt::one(), BigInt::from(2)))))
        }
        (Carrier::Viterbi, Element::Viterbi(x)) => rational_sqrt(x).map(Element::Viterbi),
        (Carrier::Table(_), _) => {
            let n = s.size()? as u64;
            (0..n).map(|i| s.element_at(i).unwrap()).find(|x| s.norm(x).ok().as_ref() == Some(r))
        }
        _ => None,
    }
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(integer_sqrt(x.numer())?, integer_sqrt(x.denom())?))
}

/// Writes a non-negative rational as a sum of at most four rational squares
/// (`a/b = (ab)/b^2`, then a bounded search on the integer `ab`).
fn four_squares(x: &BigRational) -> Option<Vec<BigRational>> {
    let n = (x.numer() * x.denom()).to_u64()?;
    if n > 1 << 40 {
        return None;
    }
    let d = BigRational::from_integer(x.denom().clone());
    let terms = integer_four_squares(n)?;
    Some(terms.into_iter().filter(|&t| t != 0).map(|t| BigRational::from_integer(BigInt::from(t)) / &d).collect())
}

fn integer_four_squares(n: u64) -> Option<Vec<u64>> {
    let isqrt = |m: u64| m.sqrt();
    let two = |m: u64| -> Option<(u64, u64)> {
        let mut a = isqrt(m);
        loop {
            let rest = m - a * a;
            let b = isqrt(rest);
            if b * b == rest {
                return Some((a, b));
            }
            if a == 0 || a * a < m / 2 {
                return None;
            }
            a -= 1;
        }
    };
    let mut a = isqrt(n);
    loop {
        let r1 = n - a * a;
        let mut b = isqrt(r1);
        loop {
            if let Some((c, d)) = two(r1 - b * b) {
                return Some(vec![a, b, c, d]);
            }
            if b == 0 || b * b < r1 / 3 {
                break;
            }
            b -= 1;
        }
        if a == 0 || a * a < n / 4 {
            return None;
        }
        a -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_cone_is_everything() {
        let z2 = Semiring::z2();
        let cone = positive_subsemiring(&z2).unwrap();
        assert_eq!(cone.members().unwrap(), &[Element::Fp(0), Element::Fp(1)]);
    }

    #[test]
    fn quadratic_cone_is_base_field() {
        let s = Semiring::quadratic(3, 1).unwrap();
        let cone = positive_subsemiring(&s).unwrap();
        let m = cone.members().unwrap();
        assert_eq!(m, &[Element::Quad(0, 0), Element::Quad(1, 0), Element::Quad(2, 0)]);
        for r in m {
            let xi = decompose_pure(&s, r).unwrap();
            assert_eq!(&s.norm(&xi).unwrap(), r);
        }
        assert_eq!(decompose_pure(&s, &s.one()), Some(s.one()));
    }

    #[test]
    fn split_decomposition() {
        let s = Semiring::split_complex();
        let r = Element::split_int(-3, 0);
        assert_eq!(decompose_pure(&s, &r), Some(Element::split_int(-1, -2)));
        let xi = decompose_pure(&s, &Element::split_int(-1, 0)).unwrap();
        assert_eq!(s.norm(&xi).unwrap(), Element::split_int(-1, 0));
        assert_eq!(decompose_pure(&s, &Element::split_int(0, 1)), None);
    }

    #[test]
    fn padic_even_valuation_rule() {
        let s = Semiring::padic(3, 4).unwrap();
        let three = s.from_int(3).unwrap();
        assert_eq!(decompose_pure(&s, &three), None);
        for n in [1, 2, 5, 9, 18, 81 * 7, -1, -9] {
            let r = s.from_int(n).unwrap();
            let xi = decompose_pure(&s, &r).unwrap_or_else(|| panic!("{n}"));
            assert_eq!(s.norm(&xi).unwrap(), r);
        }
        let cone = positive_subsemiring(&s).unwrap();
        let w = cone.witness(&three).unwrap();
        assert_eq!(w.len(), 2);
        // summing the norms back cancels a digit, so compare the parts instead
        let shift = s.from_int(1).unwrap();
        assert_eq!(s.sub(&s.norm(&w[0]).unwrap(), &three).unwrap(), shift);
        assert_eq!(s.norm(&w[1]).unwrap(), s.neg(&shift).unwrap());
    }

    #[test]
    fn tropical_cone_is_evens() {
        let s = Semiring::new(CarrierSpec::TropicalNat).unwrap();
        let cone = positive_subsemiring(&s).unwrap();
        assert!(cone.contains(&Element::trop(4)));
        assert!(cone.contains(&Element::TROP_INF));
        assert!(!cone.contains(&Element::trop(3)));
        assert_eq!(decompose_pure(&s, &Element::trop(4)), Some(Element::trop(2)));
    }

    #[test]
    fn rational_witnesses() {
        let q = Semiring::rational();
        let cone = positive_subsemiring(&q).unwrap();
        let r = Element::rat(7, 3);
        let w = cone.witness(&r).unwrap();
        let total = q.sum(&w.iter().map(|x| q.norm(x).unwrap()).collect::<Vec<_>>()).unwrap();
        assert_eq!(total, r);
        assert!(!cone.contains(&Element::int(-1)));
    }

    #[test]
    fn four_square_search() {
        for n in 0..2000u64 {
            let t = integer_four_squares(n).unwrap();
            assert_eq!(t.iter().map(|x| x * x).sum::<u64>(), n);
        }
    }
}
