//! Truncated p-adic numbers `p^v * u` with the unit `u` known modulo `p^k`.
//!
//! Precision is relative and fixed: every non-zero value carries exactly `k`
//! significant digits. Any addition that would need digits the operands do
//! not carry (valuations `k` or more apart, or cancellation of the leading
//! digit) fails with [`Error::PrecisionLoss`]. A sum whose unit part
//! vanishes to all `k` digits is treated as exact zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PAdic {
    Zero,
    Val { v: i64, u: u64 },
}

impl PAdic {
    pub fn valuation(&self) -> Option<i64> {
        match self {
            PAdic::Zero => None,
            PAdic::Val { v, .. } => Some(*v),
        }
    }
    pub fn is_zero(&self) -> bool {
        matches!(self, PAdic::Zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicContext {
    p: u64,
    k: u32,
    pk: u64,
}

impl PAdicContext {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("p-adic precision must be at least 1".into()));
        }
        let pk = p.checked_pow(k).filter(|&m| m < (1 << 31)).ok_or(Error::Overflow("p-adic precision"))?;
        Ok(PAdicContext { p, k, pk })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.k
    }
    pub fn modulus(&self) -> u64 {
        self.pk
    }

    /// Normalises `p^v * r` for an arbitrary residue `r`.
    fn normalise(&self, v: i64, r: i128) -> Result<PAdic> {
        if r == 0 {
            return Ok(PAdic::Zero);
        }
        let (mut v, mut r) = (v, r);
        while r % self.p as i128 == 0 {
            r /= self.p as i128;
            v += 1;
        }
        Ok(PAdic::Val { v, u: r.rem_euclid(self.pk as i128) as u64 })
    }

    pub fn from_int(&self, n: i64) -> PAdic {
        self.normalise(0, n as i128).expect("integers normalise")
    }

    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<PAdic> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(PAdic::Zero);
        }
        let p = BigInt::from(self.p);
        let strip = |x: &BigInt| {
            let mut x = x.clone();
            let mut e = 0i64;
            while x.is_multiple_of(&p) {
                x /= &p;
                e += 1;
            }
            (x, e)
        };
        let (n, vn) = strip(num);
        let (d, vd) = strip(den);
        let m = BigInt::from(self.pk);
        let n = n.mod_floor(&m).to_u64().unwrap();
        let d = d.mod_floor(&m).to_u64().unwrap();
        let dinv = inv_mod(d, self.pk).ok_or(Error::NotInvertible("denominator".into()))?;
        Ok(PAdic::Val { v: vn - vd, u: mul_mod(n, dinv, self.pk) })
    }

    /// Reads a residue of `Z/p^k` as the p-adic integer it represents.
    pub fn from_residue(&self, r: u64) -> PAdic {
        self.normalise(0, (r % self.pk) as i128).expect("residues normalise")
    }

    pub fn neg(&self, a: PAdic) -> PAdic {
        match a {
            PAdic::Zero => PAdic::Zero,
            PAdic::Val { v, u } => PAdic::Val { v, u: (self.pk - u) % self.pk },
        }
    }

    pub fn add(&self, a: PAdic, b: PAdic) -> Result<PAdic> {
        let (va, ua, vb, ub) = match (a, b) {
            (PAdic::Zero, x) | (x, PAdic::Zero) => return Ok(x),
            (PAdic::Val { v: va, u: ua }, PAdic::Val { v: vb, u: ub }) => (va, ua, vb, ub),
        };
        let (lo_v, lo_u, hi_v, hi_u) = if va <= vb { (va, ua, vb, ub) } else { (vb, ub, va, ua) };
        let gap = hi_v - lo_v;
        if gap >= self.k as i64 {
            return Err(Error::PrecisionLoss(format!(
                "valuations {lo_v} and {hi_v} differ by at least the precision {}",
                self.k
            )));
        }
        let shifted = mul_mod(hi_u, self.p.pow(gap as u32), self.pk);
        let s = (lo_u + shifted) % self.pk;
        if s == 0 {
            // zero to working precision
            return Ok(PAdic::Zero);
        }
        if s.is_multiple_of(self.p) {
            return Err(Error::PrecisionLoss(format!("leading digit cancels at valuation {lo_v}")));
        }
        Ok(PAdic::Val { v: lo_v, u: s })
    }

    pub fn sub(&self, a: PAdic, b: PAdic) -> Result<PAdic> {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: PAdic, b: PAdic) -> Result<PAdic> {
        match (a, b) {
            (PAdic::Zero, _) | (_, PAdic::Zero) => Ok(PAdic::Zero),
            (PAdic::Val { v: va, u: ua }, PAdic::Val { v: vb, u: ub }) => Ok(PAdic::Val {
                v: va.checked_add(vb).ok_or(Error::Overflow("p-adic valuation"))?,
                u: mul_mod(ua, ub, self.pk),
            }),
        }
    }

    pub fn inv(&self, a: PAdic) -> Option<PAdic> {
        match a {
            PAdic::Zero => None,
            PAdic::Val { v, u } => Some(PAdic::Val { v: -v, u: inv_mod(u, self.pk)? }),
        }
    }

    pub fn is_unit_residue(&self, u: u64) -> bool {
        !u.is_multiple_of(self.p)
    }

    /// Display form `p^v*u`.
    pub fn render(&self, a: PAdic) -> String {
        match a {
            PAdic::Zero => "0".into(),
            PAdic::Val { v, u } => format!("{}^{}*{}", self.p, v, u),
        }
    }

    pub fn parse_integer(&self, n: &BigInt) -> Result<PAdic> {
        if n.is_negative() || n.bits() > 60 {
            return self.from_ratio(n, &BigInt::from(1));
        }
        Ok(self.from_int(n.to_i64().unwrap()))
    }
}

/// `sgn_eps(x) = (-1)^{ord x}` for the unramified extension `Q_p(sqrt eps)`:
/// `+1` exactly when `x` is a norm `c^2 - eps s^2`.
pub fn unramified_sign(x: PAdic) -> Option<i8> {
    x.valuation().map(|v| if v.rem_euclid(2) == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PAdicContext {
        PAdicContext::new(3, 4).unwrap()
    }

    #[test]
    fn integers_normalise() {
        let c = ctx();
        assert_eq!(c.from_int(0), PAdic::Zero);
        assert_eq!(c.from_int(9), PAdic::Val { v: 2, u: 1 });
        assert_eq!(c.from_int(-3), PAdic::Val { v: 1, u: 80 });
        assert_eq!(
            c.from_ratio(&BigInt::from(1), &BigInt::from(6)).unwrap(),
            PAdic::Val { v: -1, u: 41 } // 2 * 41 = 82 = 1 mod 81
        );
    }

    #[test]
    fn addition_tracks_precision() {
        let c = ctx();
        let one = c.from_int(1);
        let three = c.from_int(3);
        assert_eq!(c.add(one, three).unwrap(), c.from_int(4));
        // 1 + 3^4 drops the second summand entirely
        assert!(matches!(c.add(one, c.from_int(81)), Err(Error::PrecisionLoss(_))));
        // 1 + 2 = 3 cancels the leading digit
        assert!(matches!(c.add(one, c.from_int(2)), Err(Error::PrecisionLoss(_))));
        assert_eq!(c.add(one, PAdic::Zero).unwrap(), one);
    }

    #[test]
    fn inverse_and_sign() {
        let c = ctx();
        let x = c.from_int(18);
        let y = c.inv(x).unwrap();
        assert_eq!(c.mul(x, y).unwrap(), c.from_int(1));
        assert_eq!(unramified_sign(c.from_int(9)), Some(1));
        assert_eq!(unramified_sign(c.from_int(3)), Some(-1));
        assert_eq!(unramified_sign(y), Some(1));
        assert_eq!(c.add(x, c.neg(x)).unwrap(), PAdic::Zero);
        assert_eq!(unramified_sign(PAdic::Zero), None);
    }
}
