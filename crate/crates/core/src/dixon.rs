//! Character tables of tiny groups by the class-matrix method: class
//! multiplication coefficients are counted directly, the commuting class
//! matrices are simultaneously diagonalized over a prime field F_l with
//! l = 1 (mod exponent) and l > 2 sqrt(|G|), and the eigenvalues are lifted
//! to exact cyclotomics through discrete logarithms of roots of unity.

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::chartab::{CharacterTable, ClassMeta, TableError};
use crate::classes::{ClassTable, EngineError};
use crate::cyclo::Cyclotomic;
use crate::util::{is_prime, isqrt, pow_mod, prime_factors};

#[derive(Debug, Error)]
pub enum DixonError {
    #[error("group order {0} exceeds the table-builder limit of 100000")]
    TooLarge(u64),
    #[error("no prime l = 1 mod {exponent} with l > {min} below the search bound")]
    NoSuitablePrime { exponent: u64, min: u64 },
    #[error("eigenspace splitting failed to reach one dimension")]
    SplitFailed,
    #[error("no degree d <= sqrt(|G|) with d^2 matching the eigenvalue data")]
    NoDegree,
    #[error("lifted multiplicities sum to {got}, expected the degree {want}")]
    BadLift { got: u64, want: u64 },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Builds the full exact character table of an enumerated group.
pub fn dixon_build(ct: &ClassTable) -> Result<CharacterTable, DixonError> {
    if ct.order > 100_000 {
        return Err(DixonError::TooLarge(ct.order));
    }
    let r = ct.class_count();
    let exponent = ct.exponent();
    let ell = choose_prime(exponent, ct.order)?;
    let m = Modular { ell };

    // class multiplication coefficients a[i][j][k]: the number of ways an
    // element of class i times an element of class j equals rep(k)
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    let reps: Vec<crate::element::Element> = ct.classes.iter().map(|c| c.rep.clone()).collect();
    for &key in ct.elements() {
        let x = ct.unpack(key);
        let i = ct.class_of_key(key).unwrap();
        let xi = x.inverse();
        for (k, rep) in reps.iter().enumerate() {
            let y = xi.mul(rep);
            let j = ct.class_of_key(ct.pack(&y)).unwrap();
            a[i][j][k] += 1;
        }
    }

    // simultaneous eigenspace splitting of A_i[j][k] = a[i][j][k] mod l
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![rref_identity(r)];
    for i in 0..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let ai: Vec<Vec<u64>> = (0..r)
            .map(|j| (0..r).map(|k| a[i][j][k] % m.ell).collect())
            .collect();
        let mut next: Vec<Vec<Vec<u64>>> = Vec::new();
        for space in &spaces {
            if space.len() == 1 {
                next.push(space.clone());
                continue;
            }
            // restriction of A_i to the invariant subspace
            let d = space.len();
            let pivots = pivot_columns(space);
            let mut restr = vec![vec![0u64; d]; d];
            for (t, b) in space.iter().enumerate() {
                let image = mat_vec(&ai, b, &m);
                // coordinates in the RREF basis read off at pivot columns
                for (s, &p) in pivots.iter().enumerate() {
                    restr[s][t] = image[p];
                }
            }
            // split by eigenvalues, scanning the whole prime field
            let mut found = 0usize;
            for lam in 0..m.ell {
                let mut shifted = restr.clone();
                for t in 0..d {
                    shifted[t][t] = m.sub(shifted[t][t], lam);
                }
                let ns = nullspace_mod(&shifted, &m);
                if ns.is_empty() {
                    continue;
                }
                // map back to ambient coordinates and re-echelonize
                let mut sub: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|coef| {
                        let mut v = vec![0u64; r];
                        for (t, b) in space.iter().enumerate() {
                            for (c, x) in v.iter_mut().zip(b.iter()) {
                                *c = m.add(*c, m.mul(coef[t], *x));
                            }
                        }
                        v
                    })
                    .collect();
                rref_in_place(&mut sub, &m);
                found += sub.len();
                next.push(sub);
                if found == d {
                    break;
                }
            }
            if found != d {
                return Err(DixonError::SplitFailed);
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(DixonError::SplitFailed);
    }

    // normalize the eigenvectors at the identity class and recover degrees
    let id_class = ct
        .classes
        .iter()
        .position(|c| c.element_order == 1)
        .expect("identity class");
    let order_mod = ct.order % m.ell;
    let mut rows_mod: Vec<Vec<u64>> = Vec::with_capacity(r);
    for space in &spaces {
        let mut v = space[0].clone();
        let v_id = v[id_class];
        if v_id == 0 {
            return Err(DixonError::SplitFailed);
        }
        let inv = m.inv(v_id);
        for x in v.iter_mut() {
            *x = m.mul(*x, inv);
        }
        // 1/d^2 = (1/|G|) sum_k v_k v_kbar / |c_k| mod l
        let mut s = 0u64;
        for k in 0..r {
            let kbar = ct.classes[k].inverse_class;
            let term = m.mul(v[k], v[kbar]);
            s = m.add(s, m.mul(term, m.inv(ct.classes[k].size % m.ell)));
        }
        if s == 0 {
            return Err(DixonError::NoDegree);
        }
        let d2 = m.mul(order_mod, m.inv(s));
        let dmax = isqrt(ct.order);
        let degree = (1..=dmax)
            .find(|&d| m.mul(d % m.ell, d % m.ell) == d2)
            .ok_or(DixonError::NoDegree)?;
        // character values mod l: chi(g_k) = d v_k / |c_k|
        let mut row = vec![0u64; r];
        for k in 0..r {
            row[k] = m.mul(degree % m.ell, m.mul(v[k], m.inv(ct.classes[k].size % m.ell)));
        }
        rows_mod.push(row);
    }

    // power maps: class of rep_k^t for 0 <= t < order(rep_k)
    let power_class: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            let ord = ct.classes[k].element_order as usize;
            let mut out = Vec::with_capacity(ord);
            let mut cur = reps[k].identity_like();
            for _ in 0..ord {
                out.push(ct.class_of_key(ct.pack(&cur)).unwrap());
                cur = cur.mul(&reps[k]);
            }
            out
        })
        .collect();

    // lift each row to exact cyclotomics at conductor = exponent
    let z = primitive_root(m.ell);
    let z_e = pow_mod(z, (m.ell - 1) / exponent, m.ell);
    let conductor = exponent;
    let mut chars: Vec<Vec<Cyclotomic>> = Vec::with_capacity(r);
    for row in &rows_mod {
        let degree_val = row[id_class];
        let mut out_row = Vec::with_capacity(r);
        for k in 0..r {
            let ord = ct.classes[k].element_order;
            let z_m = pow_mod(z_e, exponent / ord, m.ell);
            let z_m_inv = m.inv(z_m);
            let m_inv = m.inv(ord % m.ell);
            let mut dense = vec![BigRational::zero(); conductor as usize];
            let mut mult_sum = 0u64;
            for j in 0..ord {
                // a_j = (1/ord) sum_t chi(g^t) z_m^(-jt)
                let mut acc = 0u64;
                let step = pow_mod(z_m_inv, j, m.ell);
                let mut w = 1u64;
                for t in 0..ord {
                    let val = rows_mod[chars.len()][power_class[k][t as usize]];
                    acc = m.add(acc, m.mul(val, w));
                    w = m.mul(w, step);
                }
                let aj = m.mul(acc, m_inv);
                mult_sum += aj;
                if aj != 0 {
                    let exp = (j * (conductor / ord)) as usize;
                    dense[exp] += BigRational::from(num_bigint::BigInt::from(aj));
                }
            }
            if mult_sum != degree_val {
                // multiplicities of the eigenvalues must sum to the degree
                return Err(DixonError::BadLift {
                    got: mult_sum,
                    want: degree_val,
                });
            }
            out_row.push(Cyclotomic::reduce_dense(conductor, dense));
        }
        chars.push(out_row);
    }

    // canonical row order: degree ascending, then the literal encoding
    let mut idx: Vec<usize> = (0..r).collect();
    let keys: Vec<(u64, String)> = (0..r)
        .map(|i| {
            let lit: Vec<String> = chars[i].iter().map(|c| c.to_literal().to_string()).collect();
            (rows_mod[i][id_class], lit.join(";"))
        })
        .collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let chars: Vec<Vec<Cyclotomic>> = idx.into_iter().map(|i| chars[i].clone()).collect();

    let table = CharacterTable {
        name: ct.group_name.clone(),
        order: ct.order,
        conductor,
        classes: ct
            .classes
            .iter()
            .map(|c| ClassMeta {
                label: c.label.clone(),
                size: c.size,
                element_order: c.element_order,
            })
            .collect(),
        chars,
    };
    table.validate()?;
    Ok(table)
}

/// Least prime l = 1 (mod e) with l > 2 sqrt(n).
fn choose_prime(exponent: u64, order: u64) -> Result<u64, DixonError> {
    let min = 2 * isqrt(order);
    let mut ell = exponent + 1;
    // first candidate = 1 mod e above min
    if ell <= min {
        ell += ((min - ell) / exponent + 1) * exponent;
    }
    let bound = 100_000_000;
    while ell < bound {
        if is_prime(ell) {
            return Ok(ell);
        }
        ell += exponent;
    }
    Err(DixonError::NoSuitablePrime { exponent, min })
}

fn primitive_root(ell: u64) -> u64 {
    let factors = prime_factors(ell - 1);
    (2..ell)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, (ell - 1) / p, ell) != 1))
        .expect("prime has a primitive root")
}

#[derive(Clone, Copy)]
struct Modular {
    ell: u64,
}

impl Modular {
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.ell
    }
    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.ell - b % self.ell) % self.ell
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        a % self.ell * (b % self.ell) % self.ell
    }
    fn inv(&self, a: u64) -> u64 {
        pow_mod(a % self.ell, self.ell - 2, self.ell)
    }
}

fn rref_identity(r: usize) -> Vec<Vec<u64>> {
    (0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()
}

fn mat_vec(a: &[Vec<u64>], v: &[u64], m: &Modular) -> Vec<u64> {
    a.iter()
        .map(|row| {
            let mut acc = 0u64;
            for (x, y) in row.iter().zip(v.iter()) {
                acc = m.add(acc, m.mul(*x, *y));
            }
            acc
        })
        .collect()
}

fn pivot_columns(rref: &[Vec<u64>]) -> Vec<usize> {
    rref.iter()
        .map(|row| row.iter().position(|&x| x != 0).expect("nonzero row"))
        .collect()
}

fn rref_in_place(rows: &mut Vec<Vec<u64>>, m: &Modular) {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = m.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = m.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..ncols {
                    let s = m.mul(f, rows[rank][c]);
                    rows[i][c] = m.sub(rows[i][c], s);
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows.retain(|r| r.iter().any(|&x| x != 0));
}

/// Nullspace basis of a square matrix over F_l.
fn nullspace_mod(a: &[Vec<u64>], m: &Modular) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut rows: Vec<Vec<u64>> = a.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = m.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = m.mul(*x, inv);
        }
        for i in 0..n {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..n {
                    let s = m.mul(f, rows[rank][c]);
                    rows[i][c] = m.sub(rows[i][c], s);
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for &(pr, pc) in &pivots {
            v[pc] = m.sub(0, rows[pr][free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use crate::classes::{delta_brute, enumerate_classes, DEFAULT_ENUM_BUDGET};
    use crate::element::{Element, GroupSpec};
    use crate::perm::Perm;

    #[test]
    fn cyclic_3_table() {
        let spec = GroupSpec::explicit(
            "C3",
            vec![Element::Perm(Perm::parse("(1,2,3)", 3).unwrap())],
            Some(3u32.into()),
        );
        let ct = enumerate_classes(&spec, DEFAULT_ENUM_BUDGET).unwrap();
        let t = dixon_build(&ct).unwrap();
        assert_eq!(t.class_count(), 3);
        // all degrees 1; rows are the three cube-root characters
        for i in 0..3 {
            assert_eq!(t.degree(i).unwrap(), 1u32.into());
        }
    }

    #[test]
    fn sym3_degrees() {
        let ct = enumerate_classes(&GroupSpec::sym(3), DEFAULT_ENUM_BUDGET).unwrap();
        let t = dixon_build(&ct).unwrap();
        let mut degs: Vec<BigUint> = (0..3).map(|i| t.degree(i).unwrap()).collect();
        degs.sort();
        assert_eq!(degs, vec![1u32.into(), 1u32.into(), 2u32.into()]);
    }

    #[test]
    fn sl2_3_degrees() {
        let ct = enumerate_classes(&GroupSpec::sl(2, 3).unwrap(), DEFAULT_ENUM_BUDGET).unwrap();
        let t = dixon_build(&ct).unwrap();
        let mut degs: Vec<u64> = (0..t.class_count())
            .map(|i| {
                let d: BigUint = t.degree(i).unwrap();
                u64::try_from(d).unwrap()
            })
            .collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn table_matches_brute_on_sym4() {
        let ct = enumerate_classes(&GroupSpec::sym(4), DEFAULT_ENUM_BUDGET).unwrap();
        let t = dixon_build(&ct).unwrap();
        let r = ct.class_count();
        for c1 in 0..r {
            for c2 in 0..r {
                for c3 in 0..r {
                    let brute = delta_brute(&ct, c1, c2, c3).unwrap();
                    let tab = t.delta_from_table(c1, c2, c3).unwrap();
                    assert_eq!(BigUint::from(brute), tab, "triple ({c1},{c2},{c3})");
                }
            }
        }
    }
}
