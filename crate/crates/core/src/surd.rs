//! The quadratic ring Z[sqrt 2], used wherever group orders and structure
//! constants involve sqrt(2) powers of two. No floating point: positivity is
//! decided by sign analysis of a^2 - 2b^2.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// a + b*sqrt(2) with arbitrary-precision integer components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticSurd {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadraticSurd {
    pub fn new<A: Into<BigInt>, B: Into<BigInt>>(a: A, b: B) -> QuadraticSurd {
        QuadraticSurd {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn zero() -> QuadraticSurd {
        QuadraticSurd::new(0, 0)
    }

    pub fn one() -> QuadraticSurd {
        QuadraticSurd::new(1, 0)
    }

    pub fn sqrt2() -> QuadraticSurd {
        QuadraticSurd::new(0, 1)
    }

    pub fn from_int<A: Into<BigInt>>(a: A) -> QuadraticSurd {
        QuadraticSurd::new(a, 0)
    }

    pub fn is_rational_integer(&self) -> bool {
        self.b.is_zero()
    }

    /// The integer value, when the sqrt(2)-component vanishes.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_rational_integer() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    /// Galois conjugate a - b*sqrt(2).
    pub fn conjugate(&self) -> QuadraticSurd {
        QuadraticSurd {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm a^2 - 2 b^2.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(2) * &self.b * &self.b
    }

    /// Exact sign of a + b*sqrt(2), by case analysis on the component signs
    /// and comparison of a^2 with 2 b^2.
    pub fn sign(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) => s,
            (0, s) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            // opposite signs: compare a^2 against 2 b^2
            _ => {
                let cmp = (&self.a * &self.a).cmp(&(BigInt::from(2) * &self.b * &self.b));
                match cmp {
                    std::cmp::Ordering::Greater => sa,
                    std::cmp::Ordering::Less => sb,
                    std::cmp::Ordering::Equal => 0, // impossible for nonzero b (sqrt 2 irrational)
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn pow(&self, e: u32) -> QuadraticSurd {
        let mut acc = QuadraticSurd::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact division by an integer; None when either component is not divisible.
    pub fn div_exact_int(&self, d: &BigInt) -> Option<QuadraticSurd> {
        use num_integer::Integer;
        let (qa, ra) = self.a.div_rem(d);
        let (qb, rb) = self.b.div_rem(d);
        if ra.is_zero() && rb.is_zero() {
            Some(QuadraticSurd { a: qa, b: qb })
        } else {
            None
        }
    }
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        QuadraticSurd {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        QuadraticSurd {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Mul for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        QuadraticSurd {
            a: &self.a * &rhs.a + BigInt::from(2) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt2", self.b)
        } else {
            write!(f, "{}+{}*sqrt2", self.a, self.b)
        }
    }
}

/// q = sqrt(2) * 2^m, the substitution with q^2 = 2^(2m+1).
pub fn ree_q(m: u64) -> QuadraticSurd {
    QuadraticSurd::new(0, BigInt::from(2).pow(m as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_identities_exhaustive() {
        // (a + b sqrt2)(a - b sqrt2) = a^2 - 2 b^2 exactly
        for a in -50i32..=50 {
            for b in -50i32..=50 {
                let x = QuadraticSurd::new(a, b);
                let prod = &x * &x.conjugate();
                assert!(prod.is_rational_integer());
                assert_eq!(prod.a, x.norm());
            }
        }
    }

    #[test]
    fn substitution_examples() {
        let q = ree_q(1);
        let q2 = q.pow(2);
        assert_eq!(q2, QuadraticSurd::from_int(8));
        // t = q^4 + sqrt2 q^3 + q^2 + sqrt2 q + 1 = 109 at m = 1
        let s2 = QuadraticSurd::sqrt2();
        let t = &(&(&(&q.pow(4) + &(&s2 * &q.pow(3))) + &q.pow(2)) + &(&s2 * &q))
            + &QuadraticSurd::one();
        assert_eq!(t, QuadraticSurd::from_int(109));
        let s2q = &s2 * &q;
        assert_eq!(s2q, QuadraticSurd::from_int(4));
    }

    #[test]
    fn sign_analysis() {
        assert_eq!(QuadraticSurd::new(-1, 1).sign(), 1); // sqrt2 > 1
        assert_eq!(QuadraticSurd::new(1, -1).sign(), -1);
        assert_eq!(QuadraticSurd::new(3, -2).sign(), 1); // 9 > 8
        assert_eq!(QuadraticSurd::new(-3, 2).sign(), -1);
        assert_eq!(QuadraticSurd::new(2, -2).sign(), -1); // 4 < 8
        assert_eq!(QuadraticSurd::zero().sign(), 0);
    }
}
