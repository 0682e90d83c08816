use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::padic::PAdic;

/// A value of some carrier. Which variants are legal is decided by the owning
/// [`Semiring`](super::Semiring); see [`Semiring::contains`](super::Semiring::contains).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Bool(bool),
    /// Position in a finite chain `0 < 1 < ... < m-1`.
    Level(u32),
    /// Residue of `F_{p^n}`, indexed by its base-`p` coefficient encoding.
    Fp(u32),
    /// `x + y sqrt(eps)` over `F_{p^n}`.
    Quad(u32, u32),
    /// `c + s sqrt(eps)` over `Z/p^k`.
    Residue(u64, u64),
    Rat(BigRational),
    /// `x + j y` with `j^2 = 1`.
    Split(BigRational, BigRational),
    /// `c + s sqrt(eps)` over truncated `Q_p`.
    PAdic(PAdic, PAdic),
    /// Min-plus value; `None` is the absorbing top element.
    Trop(Option<i64>),
    TropQ(Option<BigRational>),
    /// Max-times value in `[0, 1]`.
    Viterbi(BigRational),
    /// Index into an explicitly tabulated carrier.
    Table(u32),
}

impl Element {
    pub fn rat(n: i64, d: i64) -> Element {
        Element::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn int(n: i64) -> Element {
        Element::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn split(x: BigRational, y: BigRational) -> Element {
        Element::Split(x, y)
    }

    pub fn split_int(x: i64, y: i64) -> Element {
        Element::Split(BigRational::from_integer(BigInt::from(x)), BigRational::from_integer(BigInt::from(y)))
    }

    pub fn trop(x: i64) -> Element {
        Element::Trop(Some(x))
    }

    pub const TROP_INF: Element = Element::Trop(None);

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Element::Rat(r) | Element::Viterbi(r) => Some(r),
            _ => None,
        }
    }
}

pub(crate) fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Bool(b) => write!(f, "{}", u8::from(*b)),
            Element::Level(l) => write!(f, "{l}"),
            Element::Fp(i) => write!(f, "#{i}"),
            Element::Quad(x, y) => write!(f, "#{x}+#{y}√ε"),
            Element::Residue(c, s) => write!(f, "{c}+{s}√ε"),
            Element::Rat(r) => write!(f, "{}", render_rational(r)),
            Element::Split(x, y) => {
                if y.is_zero() {
                    write!(f, "{}", render_rational(x))
                } else if y < &BigRational::zero() {
                    write!(f, "{}-{}j", render_rational(x), render_rational(&-y))
                } else {
                    write!(f, "{}+{}j", render_rational(x), render_rational(y))
                }
            }
            Element::PAdic(c, s) => write!(f, "({c:?})+({s:?})√ε"),
            Element::Trop(None) | Element::TropQ(None) => write!(f, "inf"),
            Element::Trop(Some(x)) => write!(f, "{x}"),
            Element::TropQ(Some(x)) => write!(f, "{}", render_rational(x)),
            Element::Viterbi(x) => write!(f, "{}", render_rational(x)),
            Element::Table(i) => write!(f, "t{i}"),
        }
    }
}
