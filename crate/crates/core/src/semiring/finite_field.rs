//! Prime-power fields `F_{p^n}` as polynomial residues over `F_p`.
//!
//! Elements are indexed by the base-`p` integer encoding of their coefficient
//! vector (`c_0 + c_1 p + ... + c_{n-1} p^{n-1}`). That index order is the
//! canonical carrier order: the modulus is the first monic irreducible
//! polynomial of degree `n` in it, and the primitive element is the first
//! residue of multiplicative order `p^n - 1`.

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

/// Upper bound on `p^n` for which log/antilog tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    /// Builds `F_{p^n}` with the canonical modulus and primitive element,
    /// unless explicit ones are supplied (both are then validated).
    pub fn new(p: u64, n: u32, modulus: Option<Vec<u32>>, primitive: Option<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::BudgetExceeded { needed: (p as u128).saturating_pow(n), budget: MAX_FIELD_ORDER as u128 })?;
        let p32 = p as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p32) {
                    return Err(Error::InvalidParameter(format!(
                        "modulus {m:?} is not a monic degree-{n} polynomial over F_{p}"
                    )));
                }
                if !poly_irreducible(&m, p32) {
                    return Err(Error::Reducible(m));
                }
                m
            }
            None => lowest_irreducible(p32, n),
        };
        let mut field = FiniteField { p: p32, n, q: q as u32, modulus, primitive: 0, exp: Vec::new(), log: Vec::new() };
        let primitive = match primitive {
            Some(g) => {
                if g >= field.q {
                    return Err(Error::NotInCarrier(format!("residue index {g}")));
                }
                let ord = field.slow_order(g);
                if ord != q - 1 {
                    return Err(Error::NotPrimitive(format!("{:?}", field.coeffs(g)), ord, q - 1));
                }
                g
            }
            None => (1..field.q)
                .find(|&g| field.slow_order(g) == q - 1)
                .expect("finite field multiplicative groups are cyclic"),
        };
        field.primitive = primitive;
        field.build_tables();
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.n
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    pub fn coeffs(&self, x: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut x = x;
        for _ in 0..self.n {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::NotInCarrier(format!("{coeffs:?} over F_{}^{}", self.p, self.n)));
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    /// Image of an integer under `Z -> F_p -> F_{p^n}`.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.n == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.n == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.n {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let m = self.q - 1;
        self.exp[((self.log[a as usize] as u64 + self.log[b as usize] as u64) % m as u64) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let m = self.q - 1;
        Some(self.exp[((m - self.log[a as usize]) % m) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let m = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % m)) % m) as usize]
    }

    /// Discrete logarithm to the primitive element.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.q as u64 - 1)) as usize]
    }

    /// Square roots of `a` (zero, one or two of them, smallest index first).
    pub fn sqrt(&self, a: u32) -> Vec<u32> {
        if a == 0 {
            return vec![0];
        }
        if self.p == 2 {
            // Frobenius is bijective in characteristic 2.
            let m = self.q - 1;
            let half = (self.log[a as usize] as u64 * (m as u64).div_ceil(2)) % m as u64;
            return vec![self.exp[half as usize]];
        }
        let l = self.log[a as usize];
        if l % 2 == 1 {
            return Vec::new();
        }
        let r = self.exp[(l / 2) as usize];
        let mut roots = vec![r, self.neg(r)];
        roots.sort_unstable();
        roots
    }

    fn build_tables(&mut self) {
        let m = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(m);
        let mut log = vec![0u32; self.q as usize];
        let g = self.coeffs(self.primitive);
        let mut cur = self.coeffs(1);
        for i in 0..m {
            let idx = self.from_coeffs(&cur).expect("reduced residue");
            exp.push(idx);
            log[idx as usize] = i as u32;
            cur = poly_mulmod(&cur, &g, &self.modulus, self.p);
        }
        self.exp = exp;
        self.log = log;
    }

    fn slow_pow(&self, x: u32, mut e: u64) -> Vec<u32> {
        let mut base = self.coeffs(x);
        let mut acc = self.coeffs(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, &self.modulus, self.p);
            }
            base = poly_mulmod(&base, &base, &self.modulus, self.p);
            e >>= 1;
        }
        acc
    }

    fn slow_order(&self, x: u32) -> u64 {
        if x == 0 {
            return 0;
        }
        let one = self.coeffs(1);
        crate::arith::element_order(self.q as u64 - 1, |e| self.slow_pow(x, e) == one)
    }
}

/// Product of two residues (coefficient vectors of length `deg`) modulo a
/// monic polynomial of degree `deg`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * deg.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (deg..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (t, &m) in modulus[..deg].iter().enumerate() {
            let idx = k - deg + t;
            prod[idx] = (prod[idx] + (p as u64 - c) * m as u64) % p as u64;
        }
    }
    prod.truncate(deg);
    prod.into_iter().map(|c| c as u32).collect()
}

/// Remainder of `a` modulo monic `b` (coefficient vectors, lowest degree first).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p as u64 - lead) * c as u64) % p as u64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

fn poly_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        // every monic divisor candidate of degree d
        let count = (p as u64).pow(d as u32);
        for t in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = t;
            for _ in 0..d {
                g.push((x % p as u64) as u32);
                x /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn lowest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    (0..count)
        .map(|t| {
            let mut f = Vec::with_capacity(n as usize + 1);
            let mut x = t;
            for _ in 0..n {
                f.push((x % p as u64) as u32);
                x /= p as u64;
            }
            f.push(1);
            f
        })
        .find(|f| poly_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Least residue of multiplicative order `p - 1` in `F_p`.
pub fn least_primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let fac = factorize(p - 1);
    Ok((2..p)
        .find(|&g| fac.iter().all(|&(r, _)| crate::arith::pow_mod(g, (p - 1) / r, p) != 1))
        .expect("primitive roots exist mod p"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields_pick_least_generator() {
        for (p, g) in [(2, 1), (3, 2), (5, 2), (7, 3), (11, 2), (13, 2)] {
            let f = FiniteField::new(p, 1, None, None).unwrap();
            assert_eq!(f.primitive(), g as u32, "F_{p}");
            assert_eq!(f.modulus(), &[0, 1]);
            assert_eq!(least_primitive_root(p).unwrap(), g);
        }
    }

    #[test]
    fn f9_uses_x2_plus_1() {
        let f = FiniteField::new(3, 2, None, None).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.order(), 9);
        // x itself squares to -1, so it has order 4 and cannot be primitive
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(x, x), f.from_int(-1));
        assert_ne!(f.primitive(), x);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, n) in [(2, 3), (3, 2), (5, 2), (7, 1)] {
            let f = FiniteField::new(p, n, None, None).unwrap();
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in [0, 1, q - 1, q / 2] {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FiniteField::new(9, 1, None, None), Err(Error::NotPrime(9)));
        // x^2 + 2 = (x+1)(x+2) over F_3
        assert!(matches!(FiniteField::new(3, 2, Some(vec![2, 0, 1]), None), Err(Error::Reducible(_))));
        // 1 is never primitive in F_5
        assert!(matches!(FiniteField::new(5, 1, None, Some(1)), Err(Error::NotPrimitive(..))));
    }

    #[test]
    fn square_roots() {
        let f = FiniteField::new(11, 1, None, None).unwrap();
        for a in 0..11u32 {
            for r in f.sqrt(a) {
                assert_eq!(f.mul(r, r), a);
            }
        }
        let squares = (1..11u32).filter(|&a| !f.sqrt(a).is_empty()).count();
        assert_eq!(squares, 5);
    }
}
