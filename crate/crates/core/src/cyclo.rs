//! Exact cyclotomic numbers: elements of Q(zeta_N) stored as rational
//! coefficient vectors reduced modulo the N-th cyclotomic polynomial.
//! Conductors here stay small (at most a group exponent around 200), so the
//! dense representation is cheap and canonical: equality is coefficient
//! equality at a common conductor.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::util::{divisors, euler_phi, lcm_u64};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("value is not rational; nonzero coefficients at zeta powers {0:?}")]
    NotRational(Vec<u64>),
    #[error("cannot parse cyclotomic literal `{0}`")]
    Parse(String),
}

/// Cyclotomic polynomial Phi_N as integer coefficients (constant first),
/// computed by the Moebius product of (x^d - 1) factors and cached.
static PHI_CACHE: Lazy<Mutex<HashMap<u64, Vec<BigInt>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    if let Some(p) = PHI_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    // numerator: product of (x^d - 1) over d | n with mu(n/d) = 1
    // denominator: same with mu(n/d) = -1
    let mut num: Vec<BigInt> = vec![BigInt::one()];
    let mut den: Vec<BigInt> = vec![BigInt::one()];
    for d in divisors(n) {
        match moebius(n / d) {
            1 => num = poly_mul(&num, &x_pow_minus_one(d)),
            -1 => den = poly_mul(&den, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    let phi = poly_div_exact(&num, &den);
    debug_assert_eq!(phi.len() as u64 - 1, euler_phi(n));
    PHI_CACHE.lock().unwrap().insert(n, phi.clone());
    phi
}

fn moebius(n: u64) -> i32 {
    let mut n = n;
    let mut parity = 0;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            parity ^= 1;
        }
        p += 1;
    }
    if n > 1 {
        parity ^= 1;
    }
    if parity == 0 {
        1
    } else {
        -1
    }
}

fn x_pow_minus_one(d: u64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d as usize + 1];
    v[0] = -BigInt::one();
    v[d as usize] = BigInt::one();
    v
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Exact division of integer polynomials (the quotient is known integral).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    let lead = den[dd].clone();
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        if !c.is_zero() {
            for (i, dc) in den.iter().enumerate() {
                let sub = dc * &c;
                rem[k + i] -= sub;
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// An element of Q(zeta_N): `coeffs[j]` multiplies zeta_N^j, with the vector
/// already reduced modulo Phi_N (so its length is phi(N)).
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(conductor: u64) -> Cyclotomic {
        Cyclotomic {
            conductor,
            coeffs: vec![BigRational::zero(); euler_phi(conductor) as usize],
        }
    }

    pub fn from_rational(conductor: u64, r: BigRational) -> Cyclotomic {
        let mut c = Cyclotomic::zero(conductor);
        c.coeffs[0] = r;
        c
    }

    pub fn from_integer(conductor: u64, v: i64) -> Cyclotomic {
        Cyclotomic::from_rational(conductor, BigRational::from(BigInt::from(v)))
    }

    /// zeta_N^j.
    pub fn root_of_unity(conductor: u64, j: u64) -> Cyclotomic {
        let mut dense = vec![BigRational::zero(); conductor as usize];
        dense[(j % conductor) as usize] = BigRational::one();
        Cyclotomic::reduce_dense(conductor, dense)
    }

    /// Reduces a dense coefficient vector indexed by zeta^0..zeta^(N-1)
    /// modulo Phi_N.
    pub fn reduce_dense(conductor: u64, mut dense: Vec<BigRational>) -> Cyclotomic {
        let phi = cyclotomic_polynomial(conductor);
        let deg = phi.len() - 1;
        if dense.len() < deg {
            dense.resize(deg, BigRational::zero());
        }
        for k in (deg..dense.len()).rev() {
            let c = dense[k].clone();
            if c.is_zero() {
                continue;
            }
            dense[k] = BigRational::zero();
            // zeta^k = zeta^(k-deg) * (-(phi_0 + ... + phi_{deg-1} zeta^{deg-1}))
            for (i, pc) in phi.iter().enumerate().take(deg) {
                let delta = &c * BigRational::from(pc.clone());
                dense[k - deg + i] -= delta;
            }
        }
        dense.truncate(deg);
        Cyclotomic {
            conductor,
            coeffs: dense,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Rewrites at conductor m (which the current conductor must divide).
    pub fn lift(&self, m: u64) -> Cyclotomic {
        if m == self.conductor {
            return self.clone();
        }
        assert_eq!(m % self.conductor, 0, "conductor lift must be a multiple");
        let scale = m / self.conductor;
        let mut dense = vec![BigRational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[j * scale as usize] = c.clone();
            }
        }
        Cyclotomic::reduce_dense(m, dense)
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = lcm_u64(a.conductor, b.conductor);
        (a.lift(m), b.lift(m))
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(self, other);
        let n = a.conductor;
        let mut dense = vec![BigRational::zero(); 2 * a.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    dense[i + j] += x * y;
                }
            }
        }
        Cyclotomic::reduce_dense(n, dense)
    }

    pub fn scalar_mul(&self, r: &BigRational) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Complex conjugation zeta^j -> zeta^(N-j).
    pub fn conj(&self) -> Cyclotomic {
        let n = self.conductor;
        let mut dense = vec![BigRational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = ((n - j as u64) % n) as usize;
                dense[idx] += c;
            }
        }
        Cyclotomic::reduce_dense(n, dense)
    }

    /// The rational value, when the element lies in Q.
    pub fn rational_part(&self) -> Result<BigRational, CycloError> {
        // rational iff invariant under all Galois maps; with the power basis
        // reduced mod Phi_N, rational values have all higher coefficients zero
        let nonzero: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j as u64)
            .collect();
        if nonzero.is_empty() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(CycloError::NotRational(nonzero))
        }
    }

    /// Serializes as the table-file literal `[[j, "p/q"], ...]`.
    pub fn to_literal(&self) -> serde_json::Value {
        let mut terms = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push(serde_json::json!([j, format_rational(c)]));
            }
        }
        serde_json::Value::Array(terms)
    }

    /// Parses the table-file literal at the given conductor.
    pub fn from_literal(conductor: u64, v: &serde_json::Value) -> Result<Cyclotomic, CycloError> {
        let arr = v.as_array().ok_or_else(|| CycloError::Parse(v.to_string()))?;
        let mut dense = vec![BigRational::zero(); conductor as usize];
        for term in arr {
            let pair = term.as_array().ok_or_else(|| CycloError::Parse(v.to_string()))?;
            if pair.len() != 2 {
                return Err(CycloError::Parse(v.to_string()));
            }
            let j = pair[0].as_u64().ok_or_else(|| CycloError::Parse(v.to_string()))?;
            let s = pair[1].as_str().ok_or_else(|| CycloError::Parse(v.to_string()))?;
            let r = parse_rational(s).ok_or_else(|| CycloError::Parse(v.to_string()))?;
            dense[(j % conductor) as usize] += r;
        }
        Ok(Cyclotomic::reduce_dense(conductor, dense))
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from(n))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{}", format_rational(c))?;
            } else if c.is_one() {
                write!(f, "z{}^{}", self.conductor, j)?;
            } else {
                write!(f, "{}*z{}^{}", format_rational(c), self.conductor, j)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(n: u64, j: u64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, j)
    }

    #[test]
    fn phi_polynomials() {
        let phi3 = cyclotomic_polynomial(3);
        assert_eq!(phi3, vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]);
        let phi4 = cyclotomic_polynomial(4);
        assert_eq!(phi4, vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        let phi12 = cyclotomic_polynomial(12);
        // x^4 - x^2 + 1
        assert_eq!(
            phi12,
            vec![
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn vanishing_sums_and_conjugation() {
        // zeta_3 + zeta_3^2 = -1
        let s = zeta(3, 1).add(&zeta(3, 2));
        assert_eq!(s.rational_part().unwrap(), BigRational::from(BigInt::from(-1)));
        // conj(zeta_5) = zeta_5^4
        assert_eq!(zeta(5, 1).conj(), zeta(5, 4));
        // (1 + zeta_4)(1 - zeta_4) = 2
        let one = Cyclotomic::from_integer(4, 1);
        let p = one.add(&zeta(4, 1)).mul(&one.sub(&zeta(4, 1)));
        assert_eq!(p.rational_part().unwrap(), BigRational::from(BigInt::from(2)));
    }

    #[test]
    fn rational_part_errors() {
        assert_eq!(
            Cyclotomic::from_integer(6, 7).rational_part().unwrap(),
            BigRational::from(BigInt::from(7))
        );
        assert!(zeta(3, 1).rational_part().is_err());
        // zeta_8 + zeta_8^7 = sqrt(2), irrational
        let s = zeta(8, 1).add(&zeta(8, 7));
        assert!(s.rational_part().is_err());
    }

    #[test]
    fn conjugation_is_involution_and_norms_are_real() {
        for n in [3u64, 4, 5, 8, 12] {
            for j in 0..n {
                let z = zeta(n, j);
                assert_eq!(z.conj().conj(), z);
                let norm = z.mul(&z.conj());
                // |zeta^j|^2 = 1
                assert_eq!(norm.rational_part().unwrap(), BigRational::one());
            }
        }
    }

    #[test]
    fn lift_and_mixed_conductors() {
        // zeta_3 at conductor 6 equals zeta_6^2
        assert_eq!(zeta(3, 1).lift(6), zeta(6, 2));
        let s = zeta(3, 1).add(&zeta(6, 5));
        // zeta_6^5 = conj(zeta_6) and zeta_3 = zeta_6^2; sum is zeta6^2+zeta6^5
        assert_eq!(s, zeta(6, 2).add(&zeta(6, 5)));
    }

    #[test]
    fn reduction_idempotence() {
        for n in [4u64, 9, 12, 36] {
            for j in 0..n {
                let z = zeta(n, j);
                let again = Cyclotomic::reduce_dense(n, {
                    let mut d = z.coeffs().to_vec();
                    d.resize(n as usize, BigRational::zero());
                    d
                });
                assert_eq!(z, again);
            }
        }
    }

    #[test]
    fn literal_round_trip() {
        let v = zeta(12, 7).scalar_mul(&BigRational::new(BigInt::from(3), BigInt::from(2)));
        let lit = v.to_literal();
        let back = Cyclotomic::from_literal(12, &lit).unwrap();
        assert_eq!(v, back);
    }
}
