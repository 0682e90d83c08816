//! Axiom checks for carriers: exhaustive on small finite carriers, sampled
//! otherwise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Element, Semiring};
use crate::check::CheckReport;
use crate::error::Result;

type Law = (&'static str, usize, fn(&Semiring, &[Element]) -> Result<bool>);

fn eq(a: Result<Element>, b: Result<Element>) -> Result<bool> {
    Ok(a? == b?)
}

const LAWS: &[Law] = &[
    ("add_associative", 3, |s, v| eq(s.add(&s.add(&v[0], &v[1])?, &v[2]), s.add(&v[0], &s.add(&v[1], &v[2])?))),
    ("add_commutative", 2, |s, v| eq(s.add(&v[0], &v[1]), s.add(&v[1], &v[0]))),
    ("add_identity", 1, |s, v| eq(s.add(&v[0], &s.zero()), Ok(v[0].clone()))),
    ("mul_associative", 3, |s, v| eq(s.mul(&s.mul(&v[0], &v[1])?, &v[2]), s.mul(&v[0], &s.mul(&v[1], &v[2])?))),
    ("mul_commutative", 2, |s, v| eq(s.mul(&v[0], &v[1]), s.mul(&v[1], &v[0]))),
    ("mul_identity", 1, |s, v| eq(s.mul(&v[0], &s.one()), Ok(v[0].clone()))),
    ("distributive", 3, |s, v| {
        eq(s.mul(&v[0], &s.add(&v[1], &v[2])?), s.add(&s.mul(&v[0], &v[1])?, &s.mul(&v[0], &v[2])?))
    }),
    ("zero_absorbing", 1, |s, v| eq(s.mul(&v[0], &s.zero()), Ok(s.zero()))),
    ("involution_self_inverse", 1, |s, v| Ok(s.involution(&s.involution(&v[0])) == v[0])),
    ("involution_additive", 2, |s, v| {
        eq(Ok(s.involution(&s.add(&v[0], &v[1])?)), s.add(&s.involution(&v[0]), &s.involution(&v[1])))
    }),
    ("involution_multiplicative", 2, |s, v| {
        eq(Ok(s.involution(&s.mul(&v[0], &v[1])?)), s.mul(&s.involution(&v[0]), &s.involution(&v[1])))
    }),
    ("involution_units", 0, |s, _| Ok(s.involution(&s.zero()) == s.zero() && s.involution(&s.one()) == s.one())),
    ("flag_idempotent", 1, |s, v| {
        let idem = s.add(&v[0], &v[0])? == v[0];
        Ok(!s.flags().additively_idempotent || idem)
    }),
    ("flag_field", 1, |s, v| {
        if !s.flags().field {
            return Ok(true);
        }
        let has_neg = s.neg(&v[0]).is_some_and(|n| s.add(&v[0], &n).ok() == Some(s.zero()));
        let has_inv = s.is_zero(&v[0]) || s.inv(&v[0])?.is_some();
        Ok(has_neg && has_inv)
    }),
    ("flag_cancellative", 3, |s, v| {
        if !s.flags().multiplicatively_cancellative || s.is_zero(&v[0]) {
            return Ok(true);
        }
        Ok(s.mul(&v[0], &v[1])? != s.mul(&v[0], &v[2])? || v[1] == v[2])
    }),
];

/// Checks the commutative involutive semiring axioms and flag consistency.
///
/// A law of arity `k` is checked on all `k`-tuples when `|S|^k <= budget`;
/// otherwise on `budget` seeded random tuples. Tuples whose evaluation hits a
/// precision error are skipped and counted.
pub fn check_axioms(s: &Semiring, budget: usize, seed: u64) -> CheckReport {
    let size = s.size();
    let all_exhaustive = size.is_some_and(|n| n.saturating_pow(3) <= budget as u128);
    let mut report = CheckReport::new(s.name(), all_exhaustive);
    let elems = size.and_then(|n| (n <= budget as u128).then(|| s.elements().ok()).flatten());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, arity, law) in LAWS {
        let exhaustive =
            matches!((&elems, size), (Some(_), Some(n)) if n.saturating_pow(*arity as u32) <= budget as u128);
        let tuples: Box<dyn Iterator<Item = Vec<Element>>> = if exhaustive {
            let e = elems.as_ref().unwrap();
            Box::new(tuples(e, *arity))
        } else {
            let sampled: Vec<Vec<Element>> =
                (0..budget.max(1)).map(|_| (0..*arity).map(|_| s.sample(&mut rng)).collect()).collect();
            Box::new(sampled.into_iter())
        };
        let (mut checked, mut skipped) = (0u64, 0u64);
        let mut failure: Option<Value> = None;
        for t in tuples {
            match law(s, &t) {
                Ok(true) => checked += 1,
                Ok(false) => {
                    failure = Some(json!(t.iter().map(|x| s.to_json(x)).collect::<Vec<_>>()));
                    break;
                }
                Err(_) => skipped += 1,
            }
        }
        match failure {
            Some(w) => report.push(*name, false, w),
            None => report.push(*name, true, json!({"checked": checked, "skipped": skipped, "exhaustive": exhaustive})),
        }
    }
    report
}

fn tuples(elems: &[Element], arity: usize) -> impl Iterator<Item = Vec<Element>> + '_ {
    let n = elems.len();
    let total = n.pow(arity as u32);
    (0..total).map(move |mut i| {
        let mut t = Vec::with_capacity(arity);
        for _ in 0..arity {
            t.push(elems[i % n].clone());
            i /= n;
        }
        t
    })
}

/// The total order `a <= b iff a + b = a` exposed by a tropical carrier.
#[derive(Debug, Clone)]
pub struct TropicalOrder {
    semiring: Semiring,
}

impl TropicalOrder {
    pub fn le(&self, a: &Element, b: &Element) -> bool {
        self.semiring.add(a, b).ok().as_ref() == Some(a)
    }

    pub fn min(&self, a: &Element, b: &Element) -> Element {
        if self.le(a, b) {
            a.clone()
        } else {
            b.clone()
        }
    }
}

/// Checks the selection law `a + b in {a, b}`, exhaustively when `|S|^2 <=
/// samples` and on seeded samples otherwise. On failure returns the
/// offending pair.
pub fn check_tropical(
    s: &Semiring,
    samples: usize,
    seed: u64,
) -> std::result::Result<TropicalOrder, Box<(Element, Element)>> {
    let exhaustive = s.size().is_some_and(|n| n * n <= samples as u128);
    let pairs: Vec<(Element, Element)> = if exhaustive {
        let e = s.elements().unwrap_or_default();
        e.iter().flat_map(|a| e.iter().map(move |b| (a.clone(), b.clone()))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).map(|_| (s.sample(&mut rng), s.sample(&mut rng))).collect()
    };
    for (a, b) in pairs {
        match s.add(&a, &b) {
            Ok(c) if c == a || c == b => {}
            _ => return Err(Box::new((a, b))),
        }
    }
    Ok(TropicalOrder { semiring: s.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::CarrierSpec;

    #[test]
    fn shipped_carriers_pass() {
        let carriers = [
            Semiring::boolean(),
            Semiring::z2(),
            Semiring::quadratic(3, 1).unwrap(),
            Semiring::rational(),
            Semiring::split_complex(),
            Semiring::padic(3, 4).unwrap(),
            Semiring::new(CarrierSpec::PadicResidue { p: 3, precision: 2 }).unwrap(),
            Semiring::tropical_int(),
            Semiring::new(CarrierSpec::TropicalRat).unwrap(),
            Semiring::new(CarrierSpec::Viterbi).unwrap(),
            Semiring::new(CarrierSpec::Chain { size: 4 }).unwrap(),
        ];
        for s in carriers {
            let r = check_axioms(&s, 800, 7);
            assert!(r.all_pass(), "{}: {:?}", s.name(), r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn quadratic_f3_is_exhaustive() {
        let r = check_axioms(&Semiring::quadratic(3, 1).unwrap(), 1000, 0);
        assert!(r.exhaustive);
        assert_eq!(r.get("add_commutative").unwrap().witness["checked"], 81);
    }

    #[test]
    fn corrupted_table_fails_distributivity() {
        let mut t = Semiring::quadratic(3, 1).unwrap().tabulate().unwrap();
        // (-1) * (-1) = 0 instead of 1
        t.mul[2 * 9 + 2] = 0;
        t.name = "broken F9".into();
        let s = Semiring::new(CarrierSpec::Table(t)).unwrap();
        let r = check_axioms(&s, 1000, 0);
        let d = r.get("distributive").unwrap();
        assert!(!d.pass);
        assert_eq!(d.witness.as_array().unwrap().len(), 3);
        assert!(r.get("mul_commutative").unwrap().pass);
    }

    #[test]
    fn selection_law() {
        assert!(check_tropical(&Semiring::tropical_int(), 1000, 1).is_ok());
        assert!(check_tropical(&Semiring::boolean(), 1000, 1).is_ok());
        let f3 = Semiring::finite_field(3, 1).unwrap();
        let (a, b) = *check_tropical(&f3, 1000, 1).unwrap_err();
        let c = f3.add(&a, &b).unwrap();
        assert!(c != a && c != b);
        let order = check_tropical(&Semiring::tropical_int(), 10, 1).unwrap();
        assert!(order.le(&Element::trop(1), &Element::trop(2)));
        assert!(order.le(&Element::trop(1), &Element::TROP_INF));
    }
}
