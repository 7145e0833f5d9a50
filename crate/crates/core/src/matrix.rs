//! Dense exact matrices over GF(q), classical-form membership, Jordan types
//! of unipotent elements, the transpose-conjugacy report for Jordan blocks,
//! and irreducibility testing by subspace spinning.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("entries belong to different fields")]
    MixedFields,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("gram matrix fails {0} form axioms")]
    BadForm(&'static str),
    #[error("hermitian form requires a field of even degree over its prime field")]
    NoTwist,
    #[error("regular-unipotent classification has no entry for {0}")]
    UnsupportedClassification(String),
    #[error("element is not a member of the target group: {0}")]
    NotMember(&'static str),
    #[error("spinning budget exceeded: {points} projective points > {budget}")]
    SpinBudget { points: u64, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A dense n-by-n matrix over one field; entries are field element indices.
#[derive(Clone)]
pub struct SquareMatrix {
    field: Field,
    n: usize,
    e: Vec<u8>,
}

impl PartialEq for SquareMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.e == other.e && self.field == other.field
    }
}
impl Eq for SquareMatrix {}

impl std::hash::Hash for SquareMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write(&self.pack_bytes());
    }
}

impl SquareMatrix {
    pub fn zero(field: &Field, n: usize) -> SquareMatrix {
        SquareMatrix {
            field: field.clone(),
            n,
            e: vec![0; n * n],
        }
    }

    pub fn identity(field: &Field, n: usize) -> SquareMatrix {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.e[i * n + i] = 1;
        }
        m
    }

    /// Upper triangular unipotent Jordan block of size n.
    pub fn jordan_block(field: &Field, n: usize) -> SquareMatrix {
        let mut m = Self::identity(field, n);
        for i in 0..n - 1 {
            m.e[i * n + i + 1] = 1;
        }
        m
    }

    /// Block-diagonal assembly; all blocks must share one field.
    pub fn block_diag(blocks: &[&SquareMatrix]) -> SquareMatrix {
        assert!(!blocks.is_empty());
        let field = blocks[0].field.clone();
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::zero(&field, n);
        let mut off = 0usize;
        for b in blocks {
            assert!(b.field == field, "mixed fields in block_diag");
            for i in 0..b.n {
                for j in 0..b.n {
                    m.e[(off + i) * n + (off + j)] = b.e[i * b.n + j];
                }
            }
            off += b.n;
        }
        m
    }

    /// Ones on the antidiagonal.
    pub fn antidiag_ones(field: &Field, n: usize) -> SquareMatrix {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.e[i * n + (n - 1 - i)] = 1;
        }
        m
    }

    /// Antidiagonal with alternating signs +1, -1, ... read from the first row.
    pub fn antidiag_alternating(field: &Field, n: usize) -> SquareMatrix {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.e[i * n + (n - 1 - i)] = if i % 2 == 0 { 1 } else { field.neg(1) };
        }
        m
    }

    pub fn diag(field: &Field, entries: &[u8]) -> SquareMatrix {
        let n = entries.len();
        let mut m = Self::zero(field, n);
        for (i, &d) in entries.iter().enumerate() {
            m.e[i * n + i] = d;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u8>]) -> SquareMatrix {
        let n = rows.len();
        let mut e = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "not square");
            e.extend_from_slice(r);
        }
        SquareMatrix {
            field: field.clone(),
            n,
            e,
        }
    }

    /// Identity plus t at position (i, j), 0-based.
    pub fn elementary(field: &Field, n: usize, i: usize, j: usize, t: u8) -> SquareMatrix {
        let mut m = Self::identity(field, n);
        m.e[i * n + j] = field.add(m.e[i * n + j], t);
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.e[i * self.n + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.e[i * self.n + j] = v;
    }
    pub fn entries(&self) -> &[u8] {
        &self.e
    }

    fn check_compat(&self, other: &SquareMatrix) -> Result<(), MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch);
        }
        if !(Arc::ptr_eq(&self.field, &other.field) || self.field == other.field) {
            return Err(MatrixError::MixedFields);
        }
        Ok(())
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        self.check_compat(other).expect("matrix product");
        let n = self.n;
        let f = &self.field;
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for kk in 0..n {
                let a = self.e[i * n + kk];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.e[kk * n + j];
                    if b != 0 {
                        out[i * n + j] = f.add(out[i * n + j], f.mul(a, b));
                    }
                }
            }
        }
        SquareMatrix {
            field: self.field.clone(),
            n,
            e: out,
        }
    }

    pub fn add(&self, other: &SquareMatrix) -> SquareMatrix {
        self.check_compat(other).expect("matrix sum");
        let f = &self.field;
        SquareMatrix {
            field: self.field.clone(),
            n: self.n,
            e: self
                .e
                .iter()
                .zip(other.e.iter())
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SquareMatrix) -> SquareMatrix {
        self.check_compat(other).expect("matrix difference");
        let f = &self.field;
        SquareMatrix {
            field: self.field.clone(),
            n: self.n,
            e: self
                .e
                .iter()
                .zip(other.e.iter())
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, c: u8) -> SquareMatrix {
        let f = &self.field;
        SquareMatrix {
            field: self.field.clone(),
            n: self.n,
            e: self.e.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self) -> SquareMatrix {
        self.scalar_mul(self.field.neg(1))
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.n;
        let mut e = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                e[j * n + i] = self.e[i * n + j];
            }
        }
        SquareMatrix {
            field: self.field.clone(),
            n,
            e,
        }
    }

    /// Entrywise frobenius x -> x^(p^e).
    pub fn frobenius_entrywise(&self, e: usize) -> SquareMatrix {
        let f = &self.field;
        SquareMatrix {
            field: self.field.clone(),
            n: self.n,
            e: self.e.iter().map(|&a| f.frobenius(a, e)).collect(),
        }
    }

    /// Conjugate transpose under the given frobenius twist.
    pub fn conj_transpose(&self, twist: usize) -> SquareMatrix {
        self.frobenius_entrywise(twist).transpose()
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n;
        self.e
            .iter()
            .enumerate()
            .all(|(idx, &v)| v == u8::from(idx / n == idx % n))
    }

    /// Gaussian elimination; returns (rank, det, reduced copy).
    fn gauss(&self) -> (usize, u8) {
        let n = self.n;
        let f = &self.field;
        let mut m = self.e.clone();
        let mut det = 1u8;
        let mut rank = 0usize;
        let mut row = 0usize;
        for col in 0..n {
            let mut piv = None;
            for r in row..n {
                if m[r * n + col] != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let Some(piv) = piv else {
                det = 0;
                continue;
            };
            if piv != row {
                for j in 0..n {
                    m.swap(row * n + j, piv * n + j);
                }
                det = f.neg(det);
            }
            let inv = f.inv(m[row * n + col]).unwrap();
            det = f.mul(det, m[row * n + col]);
            for r in row + 1..n {
                let factor = f.mul(m[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = f.mul(factor, m[row * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], sub);
                }
            }
            row += 1;
            rank += 1;
        }
        if rank < n {
            det = 0;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.gauss().0
    }

    pub fn det(&self) -> u8 {
        self.gauss().1
    }

    pub fn inverse(&self) -> Result<SquareMatrix, MatrixError> {
        let n = self.n;
        let f = &self.field;
        let mut m = self.e.clone();
        let mut inv = Self::identity(&self.field, n).e;
        for col in 0..n {
            let mut piv = None;
            for r in col..n {
                if m[r * n + col] != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let piv = piv.ok_or(MatrixError::Singular)?;
            if piv != col {
                for j in 0..n {
                    m.swap(col * n + j, piv * n + j);
                    inv.swap(col * n + j, piv * n + j);
                }
            }
            let pi = f.inv(m[col * n + col]).unwrap();
            for j in 0..n {
                m[col * n + j] = f.mul(m[col * n + j], pi);
                inv[col * n + j] = f.mul(inv[col * n + j], pi);
            }
            for r in 0..n {
                if r == col || m[r * n + col] == 0 {
                    continue;
                }
                let factor = m[r * n + col];
                for j in 0..n {
                    let s1 = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], s1);
                    let s2 = f.mul(factor, inv[col * n + j]);
                    inv[r * n + j] = f.sub(inv[r * n + j], s2);
                }
            }
        }
        Ok(SquareMatrix {
            field: self.field.clone(),
            n,
            e: inv,
        })
    }

    pub fn pow(&self, e: i64) -> Result<SquareMatrix, MatrixError> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut acc = Self::identity(&self.field, self.n);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Matrix-vector product (column vector of field indices).
    pub fn apply_vector(&self, v: &[u8]) -> Vec<u8> {
        let n = self.n;
        let f = &self.field;
        let mut out = vec![0u8; n];
        for i in 0..n {
            let mut acc = 0u8;
            for j in 0..n {
                let a = self.e[i * n + j];
                if a != 0 && v[j] != 0 {
                    acc = f.add(acc, f.mul(a, v[j]));
                }
            }
            out[i] = acc;
        }
        out
    }

    /// Canonical byte encoding: entries in row-major order, each scalar as its
    /// coefficient vector over the prime field (constant term first).
    pub fn pack_bytes(&self) -> Vec<u8> {
        let k = self.field.degree();
        let mut out = Vec::with_capacity(self.e.len() * k);
        for &v in &self.e {
            out.extend_from_slice(&self.field.coeffs(v));
        }
        out
    }

    pub fn is_unipotent(&self) -> bool {
        let u = self.sub(&Self::identity(&self.field, self.n));
        u.pow(self.n as i64).map(|m| m.e.iter().all(|&x| x == 0)).unwrap_or(false)
    }

    /// Jordan type of a unipotent matrix, as a weakly decreasing partition
    /// of n. The number of parts >= j equals rank((u-I)^(j-1)) - rank((u-I)^j).
    pub fn jordan_type(&self) -> Result<Vec<usize>, MatrixError> {
        let n = self.n;
        let nil = self.sub(&Self::identity(&self.field, n));
        let mut ranks = vec![n];
        let mut pw = nil.clone();
        loop {
            let r = pw.rank();
            ranks.push(r);
            if r == 0 {
                break;
            }
            if ranks.len() > n + 1 {
                return Err(MatrixError::NotUnipotent);
            }
            pw = pw.mul(&nil);
        }
        let top = ranks.len() - 1; // ranks[top] == 0, largest part = top
        let mut parts = Vec::new();
        for size in (1..=top).rev() {
            let above = if size + 1 <= top {
                ranks[size] - ranks[size + 1]
            } else {
                ranks[size]
            };
            let cnt = (ranks[size - 1] - ranks[size]) - above;
            for _ in 0..cnt {
                parts.push(size);
            }
        }
        debug_assert_eq!(parts.iter().sum::<usize>(), n);
        Ok(parts)
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = (0..self.n)
                .map(|j| self.field.format_scalar(self.get(i, j)))
                .collect();
            write!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}

// =====================
// Classical forms
// =====================

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    SymplecticBilinear,
    Hermitian,
}

/// A bilinear or hermitian form given by its Gram matrix. The twist is the
/// frobenius exponent of the conjugation: 0 for symplectic, k/2 for a
/// hermitian form over GF(q^2) = GF(p^k).
#[derive(Clone, Debug)]
pub struct FormDescriptor {
    pub kind: FormKind,
    pub gram: SquareMatrix,
    pub twist: usize,
}

impl FormDescriptor {
    pub fn symplectic(gram: SquareMatrix) -> Result<FormDescriptor, MatrixError> {
        if gram.det() == 0 {
            return Err(MatrixError::BadForm("symplectic: singular gram"));
        }
        if gram.transpose() != gram.neg() {
            return Err(MatrixError::BadForm("symplectic: gram not alternating"));
        }
        // in characteristic 2 skew-symmetry is vacuous; require zero diagonal
        for i in 0..gram.dim() {
            if gram.get(i, i) != 0 {
                return Err(MatrixError::BadForm("symplectic: nonzero diagonal"));
            }
        }
        Ok(FormDescriptor {
            kind: FormKind::SymplecticBilinear,
            gram,
            twist: 0,
        })
    }

    /// The split symplectic form (0, I_n; -I_n, 0) on 2n coordinates.
    pub fn symplectic_split(field: &Field, half: usize) -> FormDescriptor {
        let n = 2 * half;
        let mut g = SquareMatrix::zero(field, n);
        for i in 0..half {
            g.set(i, half + i, 1);
            g.set(half + i, i, field.neg(1));
        }
        FormDescriptor::symplectic(g).expect("split symplectic gram")
    }

    /// Symplectic form of n hyperbolic 2x2 blocks antidiag(1,-1) down the diagonal.
    pub fn symplectic_hyperbolic_blocks(field: &Field, half: usize) -> FormDescriptor {
        let n = 2 * half;
        let mut g = SquareMatrix::zero(field, n);
        for i in 0..half {
            g.set(2 * i, 2 * i + 1, 1);
            g.set(2 * i + 1, 2 * i, field.neg(1));
        }
        FormDescriptor::symplectic(g).expect("hyperbolic-block symplectic gram")
    }

    pub fn hermitian(gram: SquareMatrix) -> Result<FormDescriptor, MatrixError> {
        let k = gram.field().degree();
        if k % 2 != 0 {
            return Err(MatrixError::NoTwist);
        }
        let twist = k / 2;
        if gram.det() == 0 {
            return Err(MatrixError::BadForm("hermitian: singular gram"));
        }
        if gram.conj_transpose(twist) != gram {
            return Err(MatrixError::BadForm("hermitian: gram not self-adjoint"));
        }
        Ok(FormDescriptor {
            kind: FormKind::Hermitian,
            gram,
            twist,
        })
    }

    pub fn hermitian_antidiag(field: &Field, n: usize) -> FormDescriptor {
        FormDescriptor::hermitian(SquareMatrix::antidiag_ones(field, n)).expect("antidiag gram")
    }

    pub fn hermitian_identity(field: &Field, n: usize) -> FormDescriptor {
        FormDescriptor::hermitian(SquareMatrix::identity(field, n)).expect("identity gram")
    }
}

/// True iff g*.gram.g = gram under the form's twist.
pub fn preserves_form(g: &SquareMatrix, form: &FormDescriptor) -> Result<bool, MatrixError> {
    if g.dim() != form.gram.dim() {
        return Err(MatrixError::DimensionMismatch);
    }
    let gs = g.conj_transpose(form.twist);
    Ok(gs.mul(&form.gram).mul(g) == form.gram)
}

// =====================
// Transpose-conjugacy of Jordan blocks
// =====================

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransposeConjugacyReport {
    pub n: usize,
    pub q: u64,
    /// M J_n M^-1 = tJ_n where M has ones on the antidiagonal.
    pub m_conjugates: bool,
    pub det_m_is_one: bool,
    /// det M = 1 iff q even or n = 0,1 mod 4.
    pub det_rule_holds: bool,
    /// M1 tJ_n M1^-1 = 2I - J_n with M1 = antidiag(+1,-1,...).
    pub m1_identity_holds: bool,
    /// tJ_n is conjugate to J_n inside SL_n(q).
    pub sl_conjugate_to_j: bool,
    /// tJ_n is conjugate to J_n^-1 inside SL_n(q).
    pub sl_conjugate_to_j_inv: bool,
}

/// Builds the antidiagonal conjugators of the regular Jordan block and
/// decides which of J_n, J_n^-1 the transpose is SL_n(q)-conjugate to.
pub fn t2r_conjugator(n: usize, q: u64) -> Result<TransposeConjugacyReport, MatrixError> {
    assert!(n >= 2);
    let field = crate::field::gf(q)?;
    let j = SquareMatrix::jordan_block(&field, n);
    let tj = j.transpose();
    let m = SquareMatrix::antidiag_ones(&field, n);
    let m_conjugates = m.mul(&j).mul(&m.inverse()?) == tj;
    let det_m = m.det();
    let det_m_is_one = det_m == 1;
    let q_even = q % 2 == 0;
    let det_rule_holds = det_m_is_one == (q_even || n % 4 == 0 || n % 4 == 1);

    let m1 = SquareMatrix::antidiag_alternating(&field, n);
    // N = I - (J - I) = 2I - J
    let two_i = SquareMatrix::identity(&field, n).scalar_mul(field.add(1, 1));
    let nmat = two_i.sub(&j);
    let m1_identity_holds = m1.mul(&tj).mul(&m1.inverse()?) == nmat;

    // The GL-transporter from X to tJ_n is C(tJ_n) . X0 for any single
    // conjugator X0, and centralizer determinants are the n-th powers of
    // units, so an SL-conjugator exists iff det(X0) is an n-th power.
    let nth_power = |d: u8| -> bool {
        (1..q).any(|x| field.pow(x as u8, n as i64).unwrap() == d)
    };
    let sl_conjugate_to_j = nth_power(field.inv(det_m)?); // want det(M c0^.. ) = 1
    let j_inv = j.inverse()?;
    let x0 = transporter(&j_inv, &tj)?;
    let sl_conjugate_to_j_inv = match x0 {
        Some(x0) => nth_power(field.inv(x0.det())?),
        None => false,
    };

    Ok(TransposeConjugacyReport {
        n,
        q,
        m_conjugates,
        det_m_is_one,
        det_rule_holds,
        m1_identity_holds,
        sl_conjugate_to_j,
        sl_conjugate_to_j_inv,
    })
}

/// Finds some invertible X with X a X^-1 = b, if one exists, by solving the
/// linear system X a = b X and searching the solution space for a unit.
fn transporter(a: &SquareMatrix, b: &SquareMatrix) -> Result<Option<SquareMatrix>, MatrixError> {
    let n = a.dim();
    let field = a.field().clone();
    let f = &field;
    // unknowns x_{ij}; equations (X a - b X)_{ij} = 0
    let vars = n * n;
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(vars);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![0u8; vars];
            // (X a)_{ij} = sum_k x_{ik} a_{kj}; (b X)_{ij} = sum_k b_{ik} x_{kj}
            for kk in 0..n {
                let c = a.get(kk, j);
                if c != 0 {
                    let v = i * n + kk;
                    row[v] = f.add(row[v], c);
                }
                let c2 = b.get(i, kk);
                if c2 != 0 {
                    let v = kk * n + j;
                    row[v] = f.sub(row[v], c2);
                }
            }
            rows.push(row);
        }
    }
    let basis = nullspace(&field, &mut rows, vars);
    if basis.is_empty() {
        return Ok(None);
    }
    let to_matrix = |v: &[u8]| SquareMatrix {
        field: field.clone(),
        n,
        e: v.to_vec(),
    };
    // single basis elements first, then lambda-sweeps of pairs
    for bv in &basis {
        let cand = to_matrix(bv);
        if cand.det() != 0 {
            return Ok(Some(cand));
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for lam in 1..field.order() as u8 {
                let v: Vec<u8> = basis[i]
                    .iter()
                    .zip(basis[j].iter())
                    .map(|(&x, &y)| f.add(x, f.mul(lam, y)))
                    .collect();
                let cand = to_matrix(&v);
                if cand.det() != 0 {
                    return Ok(Some(cand));
                }
            }
        }
    }
    Ok(None)
}

/// Row-reduces the system and returns a basis of its nullspace.
fn nullspace(field: &Field, rows: &mut [Vec<u8>], vars: usize) -> Vec<Vec<u8>> {
    let f = field;
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0usize;
    for c in 0..vars {
        let mut piv = None;
        for rr in r..rows.len() {
            if rows[rr][c] != 0 {
                piv = Some(rr);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for rr in 0..rows.len() {
            if rr != r && rows[rr][c] != 0 {
                let factor = rows[rr][c];
                for j in 0..vars {
                    let s = f.mul(factor, rows[r][j]);
                    rows[rr][j] = f.sub(rows[rr][j], s);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..vars {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u8; vars];
        v[free] = 1;
        for &(pr, pc) in &pivots {
            // x_pc = -sum over free columns
            v[pc] = f.neg(rows[pr][free]);
        }
        basis.push(v);
    }
    basis
}

// =====================
// Irreducibility by spinning
// =====================

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpinOutcome {
    Irreducible,
    /// A proper invariant subspace, as an echelonized basis.
    Reducible(Vec<Vec<u8>>),
    /// The projective point count exceeded the budget; not decided.
    Undetermined {
        points: u64,
    },
}

pub const SPIN_BUDGET: u64 = 1_000_000;

/// Spins every projective point and reports whether the generated module is
/// the full space. A proper invariant subspace is returned when one exists.
pub fn irreducible_by_spinning(
    gens: &[SquareMatrix],
    budget: u64,
) -> Result<SpinOutcome, MatrixError> {
    assert!(!gens.is_empty());
    let n = gens[0].dim();
    let field = gens[0].field().clone();
    let q = field.order();
    let points = {
        let mut total = 1u64;
        for _ in 0..n {
            total = total.saturating_mul(q);
        }
        (total - 1) / (q - 1)
    };
    if points > budget {
        return Ok(SpinOutcome::Undetermined { points });
    }

    // iterate canonical projective representatives: first nonzero coord is 1
    let mut v = vec![0u8; n];
    loop {
        // advance odometer
        let mut i = 0usize;
        loop {
            if i == n {
                return Ok(SpinOutcome::Irreducible);
            }
            if (v[i] as u64) + 1 < q {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if let Some(&first) = v.iter().find(|&&x| x != 0) {
            if first != 1 {
                continue;
            }
        }
        let span = spin(&field, gens, &v);
        if span.len() < n {
            return Ok(SpinOutcome::Reducible(span));
        }
    }
}

/// Smallest gens-invariant subspace containing v, as an echelon basis.
fn spin(field: &Field, gens: &[SquareMatrix], v: &[u8]) -> Vec<Vec<u8>> {
    let n = v.len();
    let mut basis: Vec<Vec<u8>> = Vec::new(); // echelonized, with pivot map
    let mut pivots: Vec<usize> = Vec::new();
    let mut queue: Vec<Vec<u8>> = vec![v.to_vec()];
    while let Some(w) = queue.pop() {
        let mut w = w;
        // reduce against basis
        for (bi, b) in basis.iter().enumerate() {
            let p = pivots[bi];
            if w[p] != 0 {
                let c = w[p];
                for j in 0..n {
                    let s = field.mul(c, b[j]);
                    w[j] = field.sub(w[j], s);
                }
            }
        }
        let Some(p) = w.iter().position(|&x| x != 0) else {
            continue;
        };
        let inv = field.inv(w[p]).unwrap();
        for x in w.iter_mut() {
            *x = field.mul(*x, inv);
        }
        for g in gens {
            queue.push(g.apply_vector(&w));
        }
        basis.push(w);
        pivots.push(p);
        if basis.len() == n {
            return basis;
        }
    }
    basis
}

// =====================
// Regular-unipotent classification
// =====================

/// Group families appearing in the classification table and group specs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Sl,
    Su,
    Sp,
    OmegaPlus,
    OmegaMinus,
    OmegaOdd,
    Perm,
    Explicit,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Sl => "SL",
            Family::Su => "SU",
            Family::Sp => "Sp",
            Family::OmegaPlus => "OmegaPlus",
            Family::OmegaMinus => "OmegaMinus",
            Family::OmegaOdd => "OmegaOdd",
            Family::Perm => "Perm",
            Family::Explicit => "Explicit",
        };
        write!(f, "{s}")
    }
}

/// The Jordan type of a regular unipotent element, for the (family, dimension,
/// parity) combinations the classification table covers. Everything else is
/// an explicit unsupported error rather than a guess.
pub fn regular_unipotent_jordan_type(
    family: Family,
    n: usize,
    q: u64,
) -> Result<Vec<usize>, MatrixError> {
    let q_even = q % 2 == 0;
    match family {
        Family::Sl | Family::Su => Ok(vec![n]),
        Family::Sp if n % 2 == 0 && n >= 2 => Ok(vec![n]),
        Family::OmegaOdd if n % 2 == 1 && n >= 3 && !q_even => Ok(vec![n]),
        Family::OmegaMinus if n % 2 == 0 && n >= 4 => {
            if q_even {
                Ok(vec![n - 2, 2])
            } else {
                Ok(vec![n - 1, 1])
            }
        }
        Family::OmegaPlus if n == 6 => {
            if q_even {
                Ok(vec![4, 2])
            } else {
                Ok(vec![5, 1])
            }
        }
        _ => Err(MatrixError::UnsupportedClassification(format!(
            "{family}({n}, q={q})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gf;

    #[test]
    fn jordan_types_of_blocks() {
        let f = gf(3).unwrap();
        let j4 = SquareMatrix::jordan_block(&f, 4);
        assert_eq!(j4.jordan_type().unwrap(), vec![4]);
        let j2 = SquareMatrix::jordan_block(&f, 2);
        let m = SquareMatrix::block_diag(&[&j2, &j4]);
        assert_eq!(m.jordan_type().unwrap(), vec![4, 2]);
        let id = SquareMatrix::identity(&f, 3);
        assert_eq!(id.jordan_type().unwrap(), vec![1, 1, 1]);
        // non-unipotent input is rejected
        let d = SquareMatrix::diag(&f, &[2, 1, 1]);
        assert!(d.jordan_type().is_err());
        assert!(!d.is_unipotent());
    }

    #[test]
    fn rank_decreases_to_zero_at_largest_part() {
        let f = gf(9).unwrap();
        let j3 = SquareMatrix::jordan_block(&f, 3);
        let j2 = SquareMatrix::jordan_block(&f, 2);
        let u = SquareMatrix::block_diag(&[&j3, &j2]);
        let nil = u.sub(&SquareMatrix::identity(&f, 5));
        let mut prev = 5;
        let mut pw = nil.clone();
        for _ in 1..=3 {
            let r = pw.rank();
            assert!(r <= prev);
            prev = r;
            pw = pw.mul(&nil);
        }
        assert_eq!(prev, 0);
    }

    #[test]
    fn inverse_and_det() {
        let f = gf(9).unwrap();
        let b = f.gen();
        let m = SquareMatrix::from_rows(&f, &[vec![1, b], vec![0, 1]]);
        let mi = m.inverse().unwrap();
        assert!(m.mul(&mi).is_identity());
        assert_eq!(m.det(), 1);
    }

    #[test]
    fn split_symplectic_membership() {
        let f = gf(9).unwrap();
        let form = FormDescriptor::symplectic_split(&f, 3);
        let id = SquareMatrix::identity(&f, 6);
        assert!(preserves_form(&id, &form).unwrap());
        // diag(J_3, tJ_3^-1) preserves the split form
        let j3 = SquareMatrix::jordan_block(&f, 3);
        let x = SquareMatrix::block_diag(&[&j3, &j3.inverse().unwrap().transpose()]);
        assert!(preserves_form(&x, &form).unwrap());
        // a matrix scaling one coordinate does not
        let mut d = SquareMatrix::identity(&f, 6);
        d.set(0, 0, 2);
        assert!(!preserves_form(&d, &form).unwrap());
    }

    #[test]
    fn hermitian_antidiag_membership() {
        let f = gf(9).unwrap();
        let form = FormDescriptor::hermitian_antidiag(&f, 4);
        let b = f.gen();
        let x = SquareMatrix::diag(
            &f,
            &[
                f.pow(b, 7).unwrap(),
                f.pow(b, 5).unwrap(),
                b,
                f.pow(b, 3).unwrap(),
            ],
        );
        assert!(preserves_form(&x, &form).unwrap());
        assert_eq!(x.det(), 1);
    }

    #[test]
    fn t2r_small_cases() {
        let r = t2r_conjugator(4, 3).unwrap();
        assert!(r.m_conjugates && r.det_m_is_one && r.det_rule_holds && r.m1_identity_holds);
        let r = t2r_conjugator(3, 3).unwrap();
        assert!(r.m_conjugates && !r.det_m_is_one && r.det_rule_holds);
        assert!(r.sl_conjugate_to_j); // -M works when n = 3 mod 4
        let r = t2r_conjugator(2, 2).unwrap();
        assert!(r.det_m_is_one && r.det_rule_holds);
        // n = 2 mod 4, q = 3: -1 is not a square, J is not SL-conjugate to tJ
        let r = t2r_conjugator(2, 3).unwrap();
        assert!(!r.sl_conjugate_to_j && r.sl_conjugate_to_j_inv);
    }

    #[test]
    fn spinning_examples() {
        let f2 = gf(2).unwrap();
        let j3 = SquareMatrix::jordan_block(&f2, 3);
        let out = irreducible_by_spinning(&[j3.clone(), j3.transpose()], SPIN_BUDGET).unwrap();
        assert_eq!(out, SpinOutcome::Irreducible);

        let f3 = gf(3).unwrap();
        let j3 = SquareMatrix::jordan_block(&f3, 3);
        match irreducible_by_spinning(&[j3], SPIN_BUDGET).unwrap() {
            SpinOutcome::Reducible(basis) => assert!(basis.len() < 3),
            other => panic!("expected reducible, got {other:?}"),
        }
        let id = SquareMatrix::identity(&f2, 2);
        assert!(matches!(
            irreducible_by_spinning(&[id], SPIN_BUDGET).unwrap(),
            SpinOutcome::Reducible(_)
        ));
    }

    #[test]
    fn classification_table() {
        assert_eq!(regular_unipotent_jordan_type(Family::Sl, 4, 2).unwrap(), vec![4]);
        assert_eq!(
            regular_unipotent_jordan_type(Family::OmegaPlus, 6, 2).unwrap(),
            vec![4, 2]
        );
        assert_eq!(
            regular_unipotent_jordan_type(Family::OmegaPlus, 6, 3).unwrap(),
            vec![5, 1]
        );
        assert_eq!(
            regular_unipotent_jordan_type(Family::OmegaMinus, 8, 2).unwrap(),
            vec![6, 2]
        );
        assert_eq!(
            regular_unipotent_jordan_type(Family::OmegaMinus, 8, 3).unwrap(),
            vec![7, 1]
        );
        assert!(regular_unipotent_jordan_type(Family::OmegaPlus, 8, 2).is_err());
    }
}
