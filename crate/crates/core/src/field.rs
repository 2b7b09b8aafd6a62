//! Scalar fields used by the linear algebra.
//!
//! [`Q`] is the exact field every reported number is computed over. [`Fp`] is
//! the prime field of order 2^61 - 1, used as a screening fast path: ranks over
//! it agree with rational ranks for all but a vanishing set of inputs, and any
//! result that is reported is recomputed over [`Q`].

use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rationals with 128-bit numerator and denominator.
pub type Q = num_rational::Ratio<i128>;

/// Operations needed by Gaussian elimination.
pub trait Field:
    Copy
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(q: &Q) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&Q::from_integer(n as i128))
    }
}

impl Field for Q {
    fn from_q(q: &Q) -> Self {
        *q
    }
}

const P: u64 = (1 << 61) - 1;

/// Element of the prime field with modulus 2^61 - 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub fn new(n: i128) -> Self {
        Fp(n.rem_euclid(P as i128) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Self {
        assert!(self.0 != 0, "inverse of zero in Fp");
        self.pow(P - 2)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        let prod = self.0 as u128 * o.0 as u128;
        let lo = (prod as u64) & P;
        let hi = (prod >> 61) as u64;
        let s = lo + hi;
        Fp(if s >= P { s - P } else { s })
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Fp) -> Fp {
        self * o.inverse()
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Field for Fp {
    fn from_q(q: &Q) -> Self {
        Fp::new(*q.numer()) / Fp::new(*q.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into a rational.
pub fn parse_rational(text: &str) -> Option<Q> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            (d != 0).then(|| Q::new(n, d))
        }
        None => text.parse::<i128>().ok().map(Q::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse_round_trips() {
        for n in [1i128, 2, 3, 12345, -7, (1 << 60) + 17] {
            let x = Fp::new(n);
            assert_eq!(x * x.inverse(), Fp::one());
        }
    }

    #[test]
    fn fp_matches_rational_on_small_fractions() {
        let q = Q::new(-3, 7);
        let a = Fp::from_q(&q);
        assert_eq!(a * Fp::new(7), Fp::new(-3));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("2"), Some(Q::from_integer(2)));
        assert_eq!(parse_rational("-3"), Some(Q::from_integer(-3)));
        assert_eq!(parse_rational("1/2"), Some(Q::new(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
