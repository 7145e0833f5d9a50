//! Exact arithmetic in small Galois fields GF(p^k).
//!
//! Elements are stored as a single index `0..q` whose base-`p` digits are the
//! coefficients of the residue polynomial in the canonical generator `b`
//! (the class of `x` modulo the defining polynomial). All arithmetic goes
//! through dense lookup tables built once per field, so every operation is a
//! table read; this caps supported fields at `q <= 256`, far above anything
//! this crate enumerates (q <= 81).
//!
//! Defining polynomials are fixed per `(p, k)` so that matrices written in
//! terms of `b` mean the same thing everywhere; in particular GF(9) uses
//! `b^2 = b + 1`.

use std::fmt;
use std::sync::Arc;

use once_cell::sync::Lazy;
use std::sync::Mutex;
use thiserror::Error;

use crate::util::{det_map, is_prime, DetHashMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("defining polynomial is reducible over GF({p})")]
    ReduciblePoly { p: u64 },
    #[error("no built-in defining polynomial for GF({p}^{k}); supply one explicitly")]
    UnsupportedField { p: u64, k: usize },
    #[error("defining polynomial must be monic of degree {expected} with coefficients below p")]
    BadPolynomial { expected: usize },
    #[error("field size {0} exceeds the table-backed limit of 256")]
    TooLarge(u64),
    #[error("zero has no multiplicative inverse or order")]
    ZeroInput,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("cannot parse field element `{0}`")]
    ParseScalar(String),
}

/// Built-in defining polynomials (Conway polynomials), coefficients listed
/// from the constant term upward. The generator `b` is primitive for all of
/// these, and GF(9) satisfies `b^2 = b + 1`.
const BUILTIN_POLYS: &[(u64, usize, &[u64])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
];

/// An immutable field descriptor with dense arithmetic tables.
pub struct FieldSpec {
    p: u64,
    k: usize,
    q: u64,
    poly: Vec<u64>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.poly == other.poly
    }
}
impl Eq for FieldSpec {}

pub type Field = Arc<FieldSpec>;

static REGISTRY: Lazy<Mutex<DetHashMap<(u64, usize, Vec<u64>), Field>>> =
    Lazy::new(|| Mutex::new(det_map()));

/// Builds (or fetches from the registry) the field GF(p^k). When `poly` is
/// omitted the built-in table supplies the defining polynomial.
pub fn make_field(p: u64, k: usize, poly: Option<&[u64]>) -> Result<Field, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 {
        return Err(FieldError::BadPolynomial { expected: 1 });
    }
    let q = p.checked_pow(k as u32).ok_or(FieldError::TooLarge(u64::MAX))?;
    if q > 256 {
        return Err(FieldError::TooLarge(q));
    }
    let poly: Vec<u64> = match poly {
        Some(c) => c.to_vec(),
        None => BUILTIN_POLYS
            .iter()
            .find(|&&(bp, bk, _)| bp == p && bk == k)
            .map(|&(_, _, c)| c.to_vec())
            .ok_or(FieldError::UnsupportedField { p, k })?,
    };
    if poly.len() != k + 1 || poly[k] != 1 || poly.iter().any(|&c| c >= p) {
        return Err(FieldError::BadPolynomial { expected: k });
    }
    if !poly_irreducible(&poly, p) {
        return Err(FieldError::ReduciblePoly { p });
    }

    let key = (p, k, poly.clone());
    let mut reg = REGISTRY.lock().unwrap();
    if let Some(f) = reg.get(&key) {
        return Ok(f.clone());
    }
    let spec = Arc::new(FieldSpec::build(p, k, q, poly));
    reg.insert(key, spec.clone());
    Ok(spec)
}

/// Shorthand: GF(q) for a prime power q, with the built-in polynomial.
pub fn gf(q: u64) -> Result<Field, FieldError> {
    let (p, k) = crate::util::prime_power(q).ok_or(FieldError::NotPrime(q))?;
    make_field(p, k as usize, None)
}

impl FieldSpec {
    fn build(p: u64, k: usize, q: u64, poly: Vec<u64>) -> FieldSpec {
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        let mut frob = vec![0u8; qs];

        let digits = |mut v: u64| -> Vec<u64> {
            let mut d = vec![0u64; k];
            for slot in d.iter_mut() {
                *slot = v % p;
                v /= p;
            }
            d
        };
        let undigits = |d: &[u64]| -> u64 {
            let mut v = 0u64;
            for &c in d.iter().rev() {
                v = v * p + c;
            }
            v
        };

        for a in 0..qs {
            let da = digits(a as u64);
            let mut dn = vec![0u64; k];
            for i in 0..k {
                dn[i] = (p - da[i]) % p;
            }
            neg[a] = undigits(&dn) as u8;
            for b in 0..qs {
                let db = digits(b as u64);
                let mut ds = vec![0u64; k];
                for i in 0..k {
                    ds[i] = (da[i] + db[i]) % p;
                }
                add[a * qs + b] = undigits(&ds) as u8;

                // polynomial product reduced modulo the defining polynomial
                let mut prod = vec![0u64; 2 * k];
                for i in 0..k {
                    if da[i] == 0 {
                        continue;
                    }
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                for i in (k..2 * k).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    prod[i] = 0;
                    for j in 0..k {
                        let sub = c * poly[j] % p;
                        prod[i - k + j] = (prod[i - k + j] + p * p - sub) % p;
                    }
                }
                mul[a * qs + b] = undigits(&prod[..k]) as u8;
            }
        }
        // inverses by scanning the multiplication row; frobenius x -> x^p
        for a in 1..qs {
            for b in 1..qs {
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u8;
                    break;
                }
            }
        }
        for a in 0..qs {
            let mut acc = 1u8;
            for _ in 0..p {
                acc = mul[acc as usize * qs + a];
            }
            frob[a] = acc;
        }
        FieldSpec {
            p,
            k,
            q,
            poly,
            add,
            mul,
            neg,
            inv,
            frob,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.k
    }
    pub fn order(&self) -> u64 {
        self.q
    }
    pub fn defining_poly(&self) -> &[u64] {
        &self.poly
    }

    pub fn zero(&self) -> u8 {
        0
    }
    pub fn one(&self) -> u8 {
        1
    }
    /// The canonical generator `b` (class of x). In a prime field this is the
    /// residue of the built-in polynomial's root, e.g. 1 in GF(2), 2 in GF(3).
    pub fn gen(&self) -> u8 {
        if self.k == 1 {
            ((self.p - self.poly[0]) % self.p) as u8
        } else {
            ((self.p) % self.q) as u8 // index of the monomial x, i.e. digit 1 in slot 1
        }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
    #[inline]
    pub fn inv(&self, a: u8) -> Result<u8, FieldError> {
        if a == 0 {
            Err(FieldError::ZeroInput)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    pub fn pow(&self, a: u8, e: i64) -> Result<u8, FieldError> {
        if e < 0 {
            let i = self.inv(a)?;
            return self.pow(i, -e);
        }
        let mut acc = 1u8;
        let mut base = a;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// x -> x^(p^e); e is reduced mod k since frobenius^k is the identity.
    pub fn frobenius(&self, a: u8, e: usize) -> u8 {
        let e = e % self.k;
        let mut v = a;
        for _ in 0..e {
            v = self.frob[v as usize];
        }
        v
    }

    /// Least m >= 1 with x^m = 1; divides q - 1.
    pub fn multiplicative_order(&self, a: u8) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInput);
        }
        let mut v = a;
        let mut m = 1u64;
        while v != 1 {
            v = self.mul(v, a);
            m += 1;
        }
        Ok(m)
    }

    /// Coefficient vector (constant term first) of an element index.
    pub fn coeffs(&self, a: u8) -> Vec<u8> {
        let mut v = a as u64;
        let mut d = vec![0u8; self.k];
        for slot in d.iter_mut() {
            *slot = (v % self.p) as u8;
            v /= self.p;
        }
        d
    }

    /// Canonical text form: dense polynomial in `b` with descending powers,
    /// e.g. `b^2+2*b+1`, `b`, `2`, `0`.
    pub fn format_scalar(&self, a: u8) -> String {
        let d = self.coeffs(a);
        let mut parts: Vec<String> = Vec::new();
        for i in (0..self.k).rev() {
            let c = d[i];
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "b".to_string(),
                (1, c) => format!("{c}*b"),
                (i, 1) => format!("b^{i}"),
                (i, c) => format!("{c}*b^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Parses expressions like `b^2+2*b+1`, `b^7`, `2`, `0`, `b-1`.
    /// Powers of `b` beyond the field degree are evaluated, so transcriptions
    /// written multiplicatively (`b^6`) work directly.
    pub fn parse_scalar(&self, s: &str) -> Result<u8, FieldError> {
        let txt: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if txt.is_empty() {
            return Err(FieldError::ParseScalar(s.to_string()));
        }
        let bytes = txt.as_bytes();
        let mut pos = 0usize;
        let mut acc = 0u8;
        let mut sign_neg = false;
        if bytes[0] == b'+' || bytes[0] == b'-' {
            sign_neg = bytes[0] == b'-';
            pos = 1;
        }
        loop {
            let (term, used) = self
                .parse_term(&bytes[pos..])
                .ok_or_else(|| FieldError::ParseScalar(s.to_string()))?;
            let term = if sign_neg { self.neg(term) } else { term };
            acc = self.add(acc, term);
            pos += used;
            if pos == bytes.len() {
                return Ok(acc);
            }
            match bytes[pos] {
                b'+' => sign_neg = false,
                b'-' => sign_neg = true,
                _ => return Err(FieldError::ParseScalar(s.to_string())),
            }
            pos += 1;
            if pos == bytes.len() {
                return Err(FieldError::ParseScalar(s.to_string()));
            }
        }
    }

    /// Parses one term `INT`, `INT*b^E`, `b^E`, `INT*b`, or `b`.
    fn parse_term(&self, t: &[u8]) -> Option<(u8, usize)> {
        let mut pos = 0usize;
        let mut coef: Option<u64> = None;
        while pos < t.len() && t[pos].is_ascii_digit() {
            coef = Some(coef.unwrap_or(0) * 10 + u64::from(t[pos] - b'0'));
            pos += 1;
        }
        let mut val = (coef.unwrap_or(1) % self.p) as u8;
        if pos < t.len() && t[pos] == b'*' {
            if coef.is_none() {
                return None;
            }
            pos += 1;
        }
        if pos < t.len() && t[pos] == b'b' {
            pos += 1;
            let mut exp = 1u64;
            if pos < t.len() && t[pos] == b'^' {
                pos += 1;
                let start = pos;
                while pos < t.len() && t[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == start {
                    return None;
                }
                exp = std::str::from_utf8(&t[start..pos]).ok()?.parse().ok()?;
            }
            let bp = self.pow(self.gen(), exp as i64).ok()?;
            val = self.mul(val, bp);
        } else if coef.is_none() {
            return None;
        }
        if pos == 0 {
            None
        } else {
            Some((val, pos))
        }
    }
}

/// A field element bundled with its field, for callers that want checked
/// cross-field arithmetic. Matrix code works on raw indices instead.
#[derive(Clone)]
pub struct FieldScalar {
    pub field: Field,
    pub idx: u8,
}

impl FieldScalar {
    pub fn new(field: &Field, idx: u8) -> FieldScalar {
        assert!((idx as u64) < field.order(), "scalar index out of range");
        FieldScalar {
            field: field.clone(),
            idx,
        }
    }

    fn same_field(&self, other: &FieldScalar) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    pub fn add(&self, other: &FieldScalar) -> Result<FieldScalar, FieldError> {
        self.same_field(other)?;
        Ok(FieldScalar::new(&self.field, self.field.add(self.idx, other.idx)))
    }

    pub fn mul(&self, other: &FieldScalar) -> Result<FieldScalar, FieldError> {
        self.same_field(other)?;
        Ok(FieldScalar::new(&self.field, self.field.mul(self.idx, other.idx)))
    }

    pub fn inv(&self) -> Result<FieldScalar, FieldError> {
        Ok(FieldScalar::new(&self.field, self.field.inv(self.idx)?))
    }
}

impl PartialEq for FieldScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.idx == other.idx
    }
}
impl Eq for FieldScalar {}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_scalar(self.idx))
    }
}

/// Irreducibility over GF(p) by trial division with all monic polynomials of
/// degree up to deg/2. Polynomials are dense coefficient vectors, constant
/// term first.
fn poly_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // iterate all monic polynomials of degree d
        let count = p.pow(d as u32);
        for m in 0..count {
            let mut divisor = vec![0u64; d + 1];
            let mut v = m;
            for slot in divisor.iter_mut().take(d) {
                *slot = v % p;
                v /= p;
            }
            divisor[d] = 1;
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u64], den: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = num.iter().map(|&c| c % p).collect();
    let dd = den.len() - 1;
    while rem.len() >= den.len() {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - den.len();
            for i in 0..=dd {
                let sub = lead * den[i] % p;
                rem[shift + i] = (rem[shift + i] + p * p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_has_b2_eq_b_plus_1() {
        let f = make_field(3, 2, None).unwrap();
        let b = f.gen();
        assert_eq!(f.mul(b, b), f.add(b, 1));
    }

    #[test]
    fn gf2_generator_is_one() {
        let f = make_field(2, 1, None).unwrap();
        assert_eq!(f.gen(), 1);
    }

    #[test]
    fn gf9_generator_order_is_8() {
        let f = gf(9).unwrap();
        assert_eq!(f.multiplicative_order(f.gen()).unwrap(), 8);
        // b^4 = -1 has order 2
        let b4 = f.pow(f.gen(), 4).unwrap();
        assert_eq!(b4, f.neg(1));
        assert_eq!(f.multiplicative_order(b4).unwrap(), 2);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2u64, 3, 4, 5, 8, 9, 16, 25, 27, 49, 81] {
            let f = gf(q).unwrap();
            let n = q as u8 as usize;
            for a in 0..n as u8 {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.pow(a, (q - 1) as i64).unwrap(), 1);
                }
                for b in 0..n as u8 {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..n as u8 {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism() {
        for q in [4u64, 9, 16, 25, 81] {
            let f = gf(q).unwrap();
            for a in 0..q as u8 {
                for b in 0..q as u8 {
                    assert_eq!(
                        f.frobenius(f.add(a, b), 1),
                        f.add(f.frobenius(a, 1), f.frobenius(b, 1))
                    );
                    assert_eq!(
                        f.frobenius(f.mul(a, b), 1),
                        f.mul(f.frobenius(a, 1), f.frobenius(b, 1))
                    );
                }
                assert_eq!(f.frobenius(a, f.degree()), a);
                assert_eq!(f.frobenius(a, 0), a);
            }
        }
    }

    #[test]
    fn frobenius_involution_in_gf4() {
        let f = gf(4).unwrap();
        for a in 0..4u8 {
            assert_eq!(f.frobenius(f.frobenius(a, 1), 1), a);
        }
    }

    #[test]
    fn reducible_poly_rejected() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert!(matches!(
            make_field(2, 2, Some(&[1, 0, 1])),
            Err(FieldError::ReduciblePoly { .. })
        ));
        assert!(matches!(make_field(4, 1, None), Err(FieldError::NotPrime(4))));
        assert!(matches!(
            make_field(11, 2, None),
            Err(FieldError::UnsupportedField { .. })
        ));
        assert!(matches!(make_field(11, 3, None), Err(FieldError::TooLarge(_))));
    }

    #[test]
    fn scalar_text_round_trip() {
        let f = gf(9).unwrap();
        for a in 0..9u8 {
            let s = f.format_scalar(a);
            assert_eq!(f.parse_scalar(&s).unwrap(), a, "round trip of `{s}`");
        }
        // multiplicative powers evaluate
        let b6 = f.pow(f.gen(), 6).unwrap();
        assert_eq!(f.parse_scalar("b^6").unwrap(), b6);
        assert_eq!(f.parse_scalar("b^2+2*b+1").unwrap(), {
            let b2 = f.pow(f.gen(), 2).unwrap();
            f.add(f.add(b2, f.mul(2, f.gen())), 1)
        });
        assert_eq!(f.parse_scalar("b - 1").unwrap(), f.sub(f.gen(), 1));
    }

    #[test]
    fn registry_dedups() {
        let f1 = gf(9).unwrap();
        let f2 = make_field(3, 2, None).unwrap();
        assert!(Arc::ptr_eq(&f1, &f2));
    }
}
