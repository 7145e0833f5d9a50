//! Character tables with exact cyclotomic values, the character-theoretic
//! structure-constant evaluator, and the theta / sigma / subgroup-count
//! correction layer on top of it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{delta_brute_fixed, ClassTable, EngineError};
use crate::cyclo::{Cyclotomic, CycloError};
use crate::element::Element;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("invalid table: {0}")]
    Invalid(String),
    #[error("class id {0} out of range")]
    BadClassId(usize),
    #[error("structure constant is not a nonnegative integer: {0}")]
    BadValue(String),
    #[error("fixed element does not lie in the subgroup")]
    G3NotInSubgroup,
    #[error("coprimality hypothesis fails: gcd(|x|, |N:H|) = {0}")]
    NotCoprime(u64),
    #[error("non-integral summand {num}/{den} in the conjugate-count formula")]
    NonIntegralSummand { num: BigUint, den: BigUint },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("cannot parse table file: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassMeta {
    pub label: String,
    pub size: u64,
    #[serde(rename = "elementOrder")]
    pub element_order: u64,
}

/// Class metadata plus the full grid of exact irreducible character values
/// (rows = irreducible characters, columns = classes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub name: String,
    pub order: u64,
    pub conductor: u64,
    pub classes: Vec<ClassMeta>,
    pub chars: Vec<Vec<Cyclotomic>>,
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn identity_class(&self) -> Result<usize, TableError> {
        self.classes
            .iter()
            .position(|c| c.element_order == 1)
            .ok_or_else(|| TableError::Invalid("no identity class".into()))
    }

    /// Degree of the i-th irreducible (its value on the identity class).
    pub fn degree(&self, i: usize) -> Result<BigUint, TableError> {
        let id = self.identity_class()?;
        let r = self.chars[i][id]
            .rational_part()
            .map_err(|_| TableError::Invalid(format!("row {i} has irrational degree")))?;
        if !r.is_integer() || !r.is_positive() {
            return Err(TableError::Invalid(format!("row {i} degree {r} not a positive integer")));
        }
        Ok(r.to_integer().to_biguint().unwrap())
    }

    /// Validates the class equation, degrees, and both orthogonality
    /// relations. A table failing any check is rejected, not repaired.
    pub fn validate(&self) -> Result<(), TableError> {
        let r = self.class_count();
        if r == 0 || self.chars.len() != r {
            return Err(TableError::Invalid(format!(
                "{} characters for {} classes",
                self.chars.len(),
                r
            )));
        }
        if self.chars.iter().any(|row| row.len() != r) {
            return Err(TableError::Invalid("ragged character grid".into()));
        }
        let size_sum: u64 = self.classes.iter().map(|c| c.size).sum();
        if size_sum != self.order {
            return Err(TableError::Invalid(format!(
                "class sizes sum to {size_sum}, order is {}",
                self.order
            )));
        }
        for c in &self.classes {
            if self.order % c.size != 0 {
                return Err(TableError::Invalid(format!(
                    "class size {} does not divide the order",
                    c.size
                )));
            }
        }
        let mut degsum = BigUint::zero();
        for i in 0..r {
            let d = self.degree(i)?;
            if (BigUint::from(self.order) % &d) != BigUint::zero() {
                return Err(TableError::Invalid(format!("degree {d} does not divide the order")));
            }
            degsum += &d * &d;
        }
        if degsum != BigUint::from(self.order) {
            return Err(TableError::Invalid(format!(
                "degree squares sum to {degsum}, order is {}",
                self.order
            )));
        }

        let order_rat = BigRational::from(BigInt::from(self.order));
        // row orthogonality: sum_k |c_k| chi_i(k) conj(chi_j(k)) = delta_ij |G|
        let pairs: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| (i..r).map(move |j| (i, j)))
            .collect();
        let row_ok = pairs.par_iter().all(|&(i, j)| {
            let mut acc = Cyclotomic::zero(1);
            for k in 0..r {
                let term = self.chars[i][k]
                    .mul(&self.chars[j][k].conj())
                    .scalar_mul(&BigRational::from(BigInt::from(self.classes[k].size)));
                acc = acc.add(&term);
            }
            match acc.rational_part() {
                Ok(v) => {
                    if i == j {
                        v == order_rat
                    } else {
                        v.is_zero()
                    }
                }
                Err(_) => false,
            }
        });
        if !row_ok {
            return Err(TableError::Invalid("row orthogonality fails".into()));
        }
        // column orthogonality: sum_i chi_i(k) conj(chi_i(k')) = delta |G|/|c_k|
        let cols: Vec<(usize, usize)> = (0..r)
            .flat_map(|k| (k..r).map(move |k2| (k, k2)))
            .collect();
        let col_ok = cols.par_iter().all(|&(k, k2)| {
            let mut acc = Cyclotomic::zero(1);
            for i in 0..r {
                acc = acc.add(&self.chars[i][k].mul(&self.chars[i][k2].conj()));
            }
            match acc.rational_part() {
                Ok(v) => {
                    if k == k2 {
                        v == BigRational::new(BigInt::from(self.order), BigInt::from(self.classes[k].size))
                    } else {
                        v.is_zero()
                    }
                }
                Err(_) => false,
            }
        });
        if !col_ok {
            return Err(TableError::Invalid("column orthogonality fails".into()));
        }
        Ok(())
    }

    /// The class-algebra structure constant through the character sum,
    /// evaluated in exact cyclotomic arithmetic: the result must come out a
    /// nonnegative rational integer or the table is reported invalid.
    pub fn delta_from_table(&self, c1: usize, c2: usize, c3: usize) -> Result<BigUint, TableError> {
        let r = self.class_count();
        if c1 >= r || c2 >= r || c3 >= r {
            return Err(TableError::BadClassId(c1.max(c2).max(c3)));
        }
        let mut acc = Cyclotomic::zero(1);
        for i in 0..r {
            let d = self.degree(i)?;
            let num = self.chars[i][c1]
                .mul(&self.chars[i][c2])
                .mul(&self.chars[i][c3].conj());
            let inv_d = BigRational::new(BigInt::one(), BigInt::from(d.clone()));
            acc = acc.add(&num.scalar_mul(&inv_d));
        }
        let s = acc
            .rational_part()
            .map_err(|e| TableError::BadValue(format!("character sum irrational: {e}")))?;
        let scale = BigRational::new(
            BigInt::from(self.classes[c1].size) * BigInt::from(self.classes[c2].size),
            BigInt::from(self.order),
        );
        let v = s * scale;
        if !v.is_integer() {
            return Err(TableError::BadValue(format!("non-integer value {v}")));
        }
        let vi = v.to_integer();
        if vi.is_negative() {
            return Err(TableError::BadValue(format!("negative value {vi}")));
        }
        Ok(vi.to_biguint().unwrap())
    }

    // ---------- table file format ----------

    pub fn to_json(&self) -> serde_json::Value {
        let irr: Vec<Vec<serde_json::Value>> = self
            .chars
            .iter()
            .map(|row| row.iter().map(|v| v.lift(self.conductor).to_literal()).collect())
            .collect();
        serde_json::json!({
            "name": self.name,
            "order": self.order,
            "conductor": self.conductor,
            "classes": self.classes,
            "irreducibles": irr,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CharacterTable, TableError> {
        let name = v["name"]
            .as_str()
            .ok_or_else(|| TableError::Parse("missing name".into()))?
            .to_string();
        let order = v["order"]
            .as_u64()
            .ok_or_else(|| TableError::Parse("missing order".into()))?;
        let conductor = v["conductor"]
            .as_u64()
            .ok_or_else(|| TableError::Parse("missing conductor".into()))?;
        let classes: Vec<ClassMeta> = serde_json::from_value(v["classes"].clone())
            .map_err(|e| TableError::Parse(format!("classes: {e}")))?;
        let irr = v["irreducibles"]
            .as_array()
            .ok_or_else(|| TableError::Parse("missing irreducibles".into()))?;
        let mut chars = Vec::with_capacity(irr.len());
        for row in irr {
            let row = row
                .as_array()
                .ok_or_else(|| TableError::Parse("irreducible row is not an array".into()))?;
            let mut out = Vec::with_capacity(row.len());
            for lit in row {
                out.push(Cyclotomic::from_literal(conductor, lit)?);
            }
            chars.push(out);
        }
        Ok(CharacterTable {
            name,
            order,
            conductor,
            classes,
            chars,
        })
    }

    pub fn from_json_str(s: &str) -> Result<CharacterTable, TableError> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| TableError::Parse(e.to_string()))?;
        CharacterTable::from_json(&v)
    }
}

// =====================
// Theta and the correction layer
// =====================

/// Inputs for the lower-bound correction: the plain structure constant and
/// one (h, sigma) pair per maximal-subgroup representative.
#[derive(Clone, Debug)]
pub struct ThetaInput {
    pub delta: BigInt,
    pub corrections: Vec<(BigUint, BigUint)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOutcome {
    pub value: BigInt,
    /// A negative theta is a useless bound, returned as-is with the flag down.
    pub nonnegative: bool,
}

pub fn theta(input: &ThetaInput) -> ThetaOutcome {
    let mut value = input.delta.clone();
    for (h, sigma) in &input.corrections {
        value -= BigInt::from(h.clone()) * BigInt::from(sigma.clone());
    }
    let nonnegative = !value.is_negative();
    ThetaOutcome { value, nonnegative }
}

/// The conjugate-count formula: h(x, H) = sum_i |C_G(x)| / |C_N(x_i)| over
/// the N_G(H)-classes fused to the class of x, valid when |x| is coprime to
/// |N_G(H) : H|. Every summand must be an exact integer.
pub fn h_from_formula(
    cg_x: &BigUint,
    centralizer_sizes: &[BigUint],
    order_x: u64,
    index_nh: u64,
) -> Result<BigUint, TableError> {
    let g = crate::util::gcd_u64(order_x, index_nh);
    if g != 1 {
        return Err(TableError::NotCoprime(g));
    }
    let mut total = BigUint::zero();
    for c in centralizer_sizes {
        if (cg_x % c) != BigUint::zero() {
            return Err(TableError::NonIntegralSummand {
                num: cg_x.clone(),
                den: c.clone(),
            });
        }
        total += cg_x / c;
    }
    Ok(total)
}

/// Sum of the subgroup's structure constants over its classes fusing into
/// the ambient classes, with the ambient fixed element. This is the number
/// of pairs inside H multiplying to g3.
pub fn sigma_brute(
    ambient: &ClassTable,
    sub: &ClassTable,
    c1: usize,
    c2: usize,
    g3: &Element,
) -> Result<u64, TableError> {
    if !sub.contains(g3) {
        return Err(TableError::G3NotInSubgroup);
    }
    let mut total = 0u64;
    for i in 0..sub.class_count() {
        if ambient.class_of(&sub.classes[i].rep)? != c1 {
            continue;
        }
        for j in 0..sub.class_count() {
            if ambient.class_of(&sub.classes[j].rep)? != c2 {
                continue;
            }
            total += delta_brute_fixed(sub, i, j, g3)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_examples() {
        let out = theta(&ThetaInput {
            delta: BigInt::from(486),
            corrections: vec![(BigUint::from(1u32), BigUint::from(81u32))],
        });
        assert_eq!(out.value, BigInt::from(405));
        assert!(out.nonnegative);

        let out = theta(&ThetaInput {
            delta: BigInt::from(808582807552u64),
            corrections: vec![(BigUint::from(1u32), BigUint::from(519168u32))],
        });
        assert_eq!(out.value, BigInt::from(808582288384u64));

        let out = theta(&ThetaInput {
            delta: BigInt::from(5),
            corrections: vec![],
        });
        assert_eq!(out.value, BigInt::from(5));

        let out = theta(&ThetaInput {
            delta: BigInt::from(5),
            corrections: vec![(BigUint::from(2u32), BigUint::from(9u32))],
        });
        assert!(!out.nonnegative);
    }

    #[test]
    fn h_formula_examples() {
        assert_eq!(
            h_from_formula(&BigUint::from(9u32), &[], 9, 1).unwrap(),
            BigUint::zero()
        );
        assert_eq!(
            h_from_formula(&BigUint::from(9u32), &[BigUint::from(9u32)], 9, 1).unwrap(),
            BigUint::one()
        );
        assert!(matches!(
            h_from_formula(&BigUint::from(9u32), &[], 9, 3),
            Err(TableError::NotCoprime(3))
        ));
        assert!(matches!(
            h_from_formula(&BigUint::from(9u32), &[BigUint::from(4u32)], 9, 1),
            Err(TableError::NonIntegralSummand { .. })
        ));
    }
}
