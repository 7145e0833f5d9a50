//! The generation-witness catalog: every explicit certificate (matrices,
//! permutations, words, and their assertions) transcribed once, plus the
//! engine that replays each assertion and reports PASS/FAIL per line.
//!
//! Conventions fixed here and verified by the catalog self-tests:
//! permutations act on the left with right-to-left composition; the
//! commutator is [a,b] = a b a^-1 b^-1 (its order is insensitive to the
//! reversed convention, both were checked); a permutation matrix for a
//! cycle s sends e_i to e_{s(i)}, which is the orientation under which the
//! packed SU_4 identities close.

use std::time::Instant;

use num_bigint::BigUint;
use thiserror::Error;

use crate::chain::{build_chain, ChainError, ChainOptions};
use crate::element::{Element, ElementError, GroupSpec};
use crate::field::{gf, Field, FieldError};
use crate::matrix::{
    irreducible_by_spinning, t2r_conjugator, Family, FormDescriptor, MatrixError, SpinOutcome,
    SquareMatrix, SPIN_BUDGET,
};
use crate::perm::{Perm, PermError};
use crate::report::{Report, Status, PROV_CATALOG, PROV_DEFINITION, PROV_FORMULA};

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("word syntax error: {0}")]
    Word(String),
    #[error("unknown name `{0}` in word")]
    UnknownName(String),
    #[error("witness file: {0}")]
    File(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// One named element: transcribed directly or as a word over earlier names.
#[derive(Clone, Debug)]
pub enum ElementDef {
    Explicit(Element),
    Word(String),
}

#[derive(Clone, Debug)]
pub enum Assertion {
    OrderEquals { word: String, expected: u64 },
    Equal { lhs: String, rhs: String },
    NotEqual { lhs: String, rhs: String },
    JordanTypeEquals { word: String, expected: Vec<usize> },
    Member { word: String },
    Regular { word: String },
    GeneratesFullGroup { words: Vec<String> },
    SubgroupOrderEquals { words: Vec<String>, expected: u128 },
    Irreducible { words: Vec<String> },
    TransposeConjugacy,
}

#[derive(Clone)]
pub struct WitnessSpec {
    pub id: String,
    pub group: GroupSpec,
    pub defs: Vec<(String, ElementDef)>,
    pub asserts: Vec<Assertion>,
}

// =====================
// Word language
// =====================

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Int(i64),
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, WitnessError> {
    let mut out = Vec::new();
    let b: Vec<char> = s.chars().collect();
    let mut i = 0usize;
    while i < b.len() {
        let c = b[i];
        match c {
            ' ' | '\t' => i += 1,
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '[' => {
                out.push(Tok::LBracket);
                i += 1;
            }
            ']' => {
                out.push(Tok::RBracket);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '-' | '0'..='9' => {
                let neg = c == '-';
                if neg {
                    i += 1;
                }
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(WitnessError::Word(format!("dangling `-` in `{s}`")));
                }
                let v: i64 = b[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| WitnessError::Word(s.to_string()))?;
                out.push(Tok::Int(if neg { -v } else { v }));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Name(b[start..i].iter().collect()));
            }
            other => return Err(WitnessError::Word(format!("bad character `{other}` in `{s}`"))),
        }
    }
    Ok(out)
}

struct WordParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    env: &'a dyn Fn(&str) -> Option<Element>,
}

impl<'a> WordParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Element, WitnessError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element, WitnessError> {
        let mut base = self.primary()?;
        while matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    base = base.pow(e);
                }
                _ => {
                    // conjugation a^b = b^-1 a b
                    let by = self.primary()?;
                    base = by.inverse().mul(&base).mul(&by);
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Element, WitnessError> {
        match self.peek().cloned() {
            Some(Tok::Name(n)) => {
                self.pos += 1;
                (self.env)(&n).ok_or(WitnessError::UnknownName(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !matches!(self.peek(), Some(Tok::RParen)) {
                    return Err(WitnessError::Word("missing `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let a = self.expr()?;
                if !matches!(self.peek(), Some(Tok::Comma)) {
                    return Err(WitnessError::Word("missing `,` in commutator".into()));
                }
                self.pos += 1;
                let b = self.expr()?;
                if !matches!(self.peek(), Some(Tok::RBracket)) {
                    return Err(WitnessError::Word("missing `]`".into()));
                }
                self.pos += 1;
                // [a, b] = a b a^-1 b^-1
                Ok(a.mul(&b).mul(&a.inverse()).mul(&b.inverse()))
            }
            other => Err(WitnessError::Word(format!("unexpected token {other:?}"))),
        }
    }
}

/// Evaluates a word over a name-resolution closure.
pub fn eval_word(
    word: &str,
    env: &dyn Fn(&str) -> Option<Element>,
) -> Result<Element, WitnessError> {
    let toks = tokenize(word)?;
    let mut p = WordParser {
        toks: &toks,
        pos: 0,
        env,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(WitnessError::Word(format!("trailing tokens in `{word}`")));
    }
    Ok(e)
}

// =====================
// Catalog construction helpers
// =====================

fn mat_from_text(field: &Field, rows: &[&str]) -> SquareMatrix {
    let parsed: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| {
            r.split(',')
                .map(|t| field.parse_scalar(t).expect("catalog scalar"))
                .collect()
        })
        .collect();
    SquareMatrix::from_rows(field, &parsed)
}

/// Permutation matrix sending e_i to e_{s(i)} (ones at (s(i), i)).
fn perm_matrix(field: &Field, p: &Perm) -> SquareMatrix {
    let n = p.degree();
    let mut m = SquareMatrix::zero(field, n);
    for i in 0..n {
        m.set(p.apply(i), i, 1);
    }
    m
}

fn def_mat(name: &str, m: SquareMatrix) -> (String, ElementDef) {
    (name.to_string(), ElementDef::Explicit(Element::Mat(m)))
}

fn def_perm(name: &str, p: Perm) -> (String, ElementDef) {
    (name.to_string(), ElementDef::Explicit(Element::Perm(p)))
}

fn def_word(name: &str, w: &str) -> (String, ElementDef) {
    (name.to_string(), ElementDef::Word(w.to_string()))
}

fn u128_order(o: &BigUint) -> u128 {
    u128::try_from(o.clone()).expect("order fits in 128 bits")
}

// =====================
// The catalog
// =====================

/// The fixed built-in catalog of generation witnesses.
pub fn catalog() -> Vec<WitnessSpec> {
    let mut out = Vec::new();

    // --- SL_2(9): a = J_2 and a lower unitriangular with the GF(9) generator
    {
        let f9 = gf(9).unwrap();
        let b = f9.gen();
        let group = GroupSpec::sl(2, 9).unwrap();
        out.push(WitnessSpec {
            id: "sl2-9".into(),
            group,
            defs: vec![
                def_mat("a", SquareMatrix::jordan_block(&f9, 2)),
                def_mat("b", {
                    let mut m = SquareMatrix::identity(&f9, 2);
                    m.set(1, 0, b);
                    m
                }),
            ],
            asserts: vec![
                Assertion::Member { word: "a".into() },
                Assertion::Member { word: "b".into() },
                Assertion::Regular { word: "a".into() },
                Assertion::Regular { word: "b".into() },
                Assertion::OrderEquals {
                    word: "a*b^2".into(),
                    expected: 8,
                },
                Assertion::OrderEquals {
                    word: "[a,b]".into(),
                    expected: 10,
                },
                Assertion::GeneratesFullGroup {
                    words: vec!["a".into(), "b".into()],
                },
            ],
        });
    }

    // --- SL_4(2) as Alt(8): conjugate 4-cycles times a double transposition
    {
        let g = Perm::parse("(1,2,3,4)(5,6)", 8).unwrap();
        let t = Perm::parse("(2,5,8,4,6,3,7)", 8).unwrap();
        let h_expected = Perm::parse("(1,7,6,8)(2,4)", 8).unwrap();
        let g2h_expected = Perm::parse("(1,7,6,8,3)", 8).unwrap();
        out.push(WitnessSpec {
            id: "sl4-2".into(),
            group: GroupSpec::alt(8),
            defs: vec![
                def_perm("g", g),
                def_perm("t", t),
                def_word("h", "t^-1*g*t"),
                def_perm("h_expected", h_expected),
                def_perm("g2h_expected", g2h_expected),
            ],
            asserts: vec![
                Assertion::Equal {
                    lhs: "h".into(),
                    rhs: "h_expected".into(),
                },
                Assertion::Equal {
                    lhs: "g^2*h".into(),
                    rhs: "g2h_expected".into(),
                },
                Assertion::OrderEquals {
                    word: "g^2*h".into(),
                    expected: 5,
                },
                Assertion::SubgroupOrderEquals {
                    words: vec!["g".into(), "h".into()],
                    expected: 20160,
                },
            ],
        });
    }

    // --- Sp_4(2) as Sym(6)
    {
        let g = Perm::parse("(1,2,3,4)", 6).unwrap();
        let t = Perm::parse("(2,6,4,5,3)", 6).unwrap();
        let h_expected = Perm::parse("(1,3,5,6)", 6).unwrap();
        let sq_expected = Perm::parse("(3,6,5)", 6).unwrap();
        out.push(WitnessSpec {
            id: "sp4-2".into(),
            group: GroupSpec::sym(6),
            defs: vec![
                def_perm("g", g),
                def_perm("t", t),
                def_word("h", "t^-1*g*t"),
                def_perm("h_expected", h_expected),
                def_perm("sq_expected", sq_expected),
            ],
            asserts: vec![
                Assertion::Equal {
                    lhs: "h".into(),
                    rhs: "h_expected".into(),
                },
                Assertion::Equal {
                    lhs: "(g^2*h)^2".into(),
                    rhs: "sq_expected".into(),
                },
                Assertion::SubgroupOrderEquals {
                    words: vec!["g".into(), "h".into()],
                    expected: 720,
                },
            ],
        });
    }

    // --- Sp_6(9), split Gram: u = diag(J3, tJ3^-1) (I + b E_36), v a
    // conjugate by a word in the Gram and u's Levi part
    {
        let f9 = gf(9).unwrap();
        let b = f9.gen();
        let group = GroupSpec::sp(6, 9).unwrap();
        let gram = group.form.as_ref().unwrap().gram.clone();
        let j3 = SquareMatrix::jordan_block(&f9, 3);
        let x = SquareMatrix::block_diag(&[&j3, &j3.inverse().unwrap().transpose()]);
        let mut y = SquareMatrix::identity(&f9, 6);
        y.set(2, 5, b);
        out.push(WitnessSpec {
            id: "sp6-9".into(),
            group,
            defs: vec![
                def_mat("a", gram),
                def_mat("x", x),
                def_mat("y", y),
                def_word("u", "x*y"),
                def_word("h", "(a*x)^2*a"),
                def_word("v", "h^-1*u*h"),
            ],
            asserts: vec![
                Assertion::Member { word: "x".into() },
                Assertion::Member { word: "y".into() },
                Assertion::Member { word: "u".into() },
                Assertion::Member { word: "v".into() },
                Assertion::Regular { word: "u".into() },
                Assertion::JordanTypeEquals {
                    word: "u".into(),
                    expected: vec![6],
                },
                Assertion::OrderEquals {
                    word: "u*v".into(),
                    expected: 120,
                },
                Assertion::OrderEquals {
                    word: "u*v*u".into(),
                    expected: 164,
                },
                Assertion::OrderEquals {
                    word: "u*v*u^2".into(),
                    expected: 146,
                },
                Assertion::OrderEquals {
                    word: "u*v^2*u".into(),
                    expected: 728,
                },
                Assertion::GeneratesFullGroup {
                    words: vec!["u".into(), "v".into()],
                },
            ],
        });
    }

    // --- SU_4(3), antidiagonal Gram
    {
        let f9 = gf(9).unwrap();
        let group = GroupSpec::su(4, 3).unwrap();
        let u = mat_from_text(&f9, &["0,1,0,0", "0,0,0,b^2", "b^2,b^6,0,0", "0,0,1,1"]);
        let x = SquareMatrix::diag(
            &f9,
            &[
                f9.pow(f9.gen(), 7).unwrap(),
                f9.pow(f9.gen(), 5).unwrap(),
                f9.gen(),
                f9.pow(f9.gen(), 3).unwrap(),
            ],
        );
        out.push(WitnessSpec {
            id: "su4-3".into(),
            group,
            defs: vec![
                def_mat("u", u),
                def_mat("x", x),
                def_word("v", "x^-1*u*x"),
            ],
            asserts: vec![
                Assertion::Member { word: "u".into() },
                Assertion::Member { word: "x".into() },
                Assertion::Regular { word: "u".into() },
                Assertion::JordanTypeEquals {
                    word: "u".into(),
                    expected: vec![4],
                },
                Assertion::OrderEquals {
                    word: "u*v^6".into(),
                    expected: 28,
                },
                Assertion::OrderEquals {
                    word: "u^2*v^6".into(),
                    expected: 36,
                },
                Assertion::GeneratesFullGroup {
                    words: vec!["u".into(), "v".into()],
                },
            ],
        });
    }

    // --- SU_5(3), antidiagonal Gram
    {
        let f9 = gf(9).unwrap();
        let group = GroupSpec::su(5, 3).unwrap();
        let u = mat_from_text(
            &f9,
            &[
                "1,1,0,0,0",
                "0,1,1,1,2",
                "0,0,1,2,1",
                "0,0,0,1,2",
                "0,0,0,0,1",
            ],
        );
        let x = mat_from_text(
            &f9,
            &[
                "0,0,0,0,1",
                "0,0,0,1,0",
                "0,0,1,0,0",
                "0,1,0,b^2,0",
                "1,0,0,0,b^2",
            ],
        );
        out.push(WitnessSpec {
            id: "su5-3".into(),
            group,
            defs: vec![
                def_mat("u", u),
                def_mat("x", x),
                def_word("v", "x^-1*u*x"),
            ],
            asserts: vec![
                Assertion::Member { word: "u".into() },
                Assertion::Member { word: "x".into() },
                Assertion::Regular { word: "u".into() },
                Assertion::JordanTypeEquals {
                    word: "u".into(),
                    expected: vec![5],
                },
                Assertion::OrderEquals {
                    word: "u*v".into(),
                    expected: 80,
                },
                Assertion::OrderEquals {
                    word: "u*v^3".into(),
                    expected: 61,
                },
                Assertion::OrderEquals {
                    word: "u*v^5".into(),
                    expected: 28,
                },
                Assertion::GeneratesFullGroup {
                    words: vec!["u".into(), "v".into()],
                },
            ],
        });
    }

    // --- SU_4(q), q in {4, 8}, identity Gram: normalizer of the diagonal
    // torus generated by two conjugate regular unipotents
    for q in [4u64, 8] {
        out.push(su4_even_witness(q));
    }

    // --- regular unipotents in the Siegel parabolic of Sp_2n(q)
    for (n, q) in [(3usize, 2u64), (3, 3), (4, 2), (3, 9)] {
        let field = gf(q).unwrap();
        let jn = SquareMatrix::jordan_block(&field, n);
        let x = SquareMatrix::block_diag(&[&jn, &jn.inverse().unwrap().transpose()]);
        let mut y = SquareMatrix::identity(&field, 2 * n);
        y.set(n - 1, 2 * n - 1, 1);
        let group = GroupSpec {
            family: Family::Sp,
            n: 2 * n,
            q,
            form: Some(FormDescriptor::symplectic_split(&field, n)),
            gens: Vec::new(),
            expected_order: None,
            name: format!("Sp({},{q})", 2 * n),
        };
        out.push(WitnessSpec {
            id: format!("pa2({n},{q})"),
            group,
            defs: vec![def_mat("x", x), def_mat("y", y), def_word("u", "x*y")],
            asserts: vec![
                Assertion::Member { word: "x".into() },
                Assertion::Member { word: "y".into() },
                Assertion::Member { word: "u".into() },
                Assertion::JordanTypeEquals {
                    word: "u".into(),
                    expected: vec![2 * n],
                },
                Assertion::Regular { word: "u".into() },
            ],
        });
    }

    // --- irreducibility of an upper and a lower regular Jordan block
    for n in 2usize..=5 {
        for q in [2u64, 3, 4, 5] {
            let field = gf(q).unwrap();
            let jn = SquareMatrix::jordan_block(&field, n);
            out.push(WitnessSpec {
                id: format!("md8({n},{q})"),
                group: GroupSpec::explicit(&format!("GL({n},{q})"), Vec::new(), None),
                defs: vec![def_mat("g", jn.clone()), def_mat("h", jn.transpose())],
                asserts: vec![Assertion::Irreducible {
                    words: vec!["g".into(), "h".into()],
                }],
            });
        }
    }

    // --- transpose-conjugacy of the regular Jordan block
    for n in 2usize..=9 {
        for q in [2u64, 3, 5, 9] {
            out.push(WitnessSpec {
                id: format!("t2r({n},{q})"),
                group: GroupSpec {
                    family: Family::Sl,
                    n,
                    q,
                    form: None,
                    gens: Vec::new(),
                    expected_order: None,
                    name: format!("SL({n},{q})"),
                },
                defs: Vec::new(),
                asserts: vec![Assertion::TransposeConjugacy],
            });
        }
    }

    out
}

/// The identity-Gram SU_4(q) witness (q even): h = diag(a,a,a,a^-3) for a
/// primitive (q+1)-root a, x and y permutation matrices of the 4-cycle and
/// the 3-cycle on the basis.
fn su4_even_witness(q: u64) -> WitnessSpec {
    let field = gf(q * q).unwrap();
    let a = field.pow(field.gen(), (q - 1) as i64).unwrap();
    assert_eq!(
        field.multiplicative_order(a).unwrap(),
        q + 1,
        "a must be a primitive (q+1)-root of unity"
    );
    let ai = field.inv(a).unwrap();
    let h = SquareMatrix::diag(&field, &[a, a, a, field.pow(ai, 3).unwrap()]);
    let x = perm_matrix(&field, &Perm::parse("(1,2,3,4)", 4).unwrap());
    let y = perm_matrix(&field, &Perm::parse("(2,3,4)", 4).unwrap());
    let d = SquareMatrix::diag(
        &field,
        &[
            field.pow(ai, 8).unwrap(),
            field.pow(a, 4).unwrap(),
            1,
            field.pow(a, 4).unwrap(),
        ],
    );
    let one = SquareMatrix::identity(&field, 4);
    let group = GroupSpec {
        family: Family::Su,
        n: 4,
        q,
        form: Some(FormDescriptor::hermitian_identity(&field, 4)),
        gens: Vec::new(),
        expected_order: None,
        name: format!("SU(4,{q})"),
    };
    let solvable_order = 24u128 * u128::from(q + 1).pow(3);
    WitnessSpec {
        id: format!("su4-even({q})"),
        group,
        defs: vec![
            def_mat("h", h),
            def_mat("x", x),
            def_mat("y", y),
            def_mat("d", d),
            def_mat("one", one),
            def_word("x1", "(y*h)*x*(y*h)^-1"),
        ],
        asserts: vec![
            Assertion::Member { word: "h".into() },
            Assertion::Member { word: "x".into() },
            Assertion::Member { word: "y".into() },
            Assertion::Member { word: "d".into() },
            Assertion::OrderEquals {
                word: "h".into(),
                expected: q + 1,
            },
            Assertion::Equal {
                lhs: "x^4".into(),
                rhs: "one".into(),
            },
            Assertion::NotEqual {
                lhs: "x^2".into(),
                rhs: "one".into(),
            },
            Assertion::Regular { word: "x".into() },
            Assertion::Equal {
                lhs: "x^2*(x*x1)^3*x^-2".into(),
                rhs: "h^-4".into(),
            },
            Assertion::Equal {
                lhs: "d*(x1*x)^2".into(),
                rhs: "y".into(),
            },
            Assertion::SubgroupOrderEquals {
                words: vec!["x".into(), "x1".into()],
                expected: solvable_order,
            },
        ],
    }
}

pub fn witness_by_id(id: &str) -> Option<WitnessSpec> {
    catalog().into_iter().find(|w| w.id == id)
}

/// A deliberately corrupted copy of the SL_2(9) witness (generator entry
/// replaced by its square) for mutation sanity checks: verification must
/// report at least one FAIL.
pub fn mutated_sl2_9() -> WitnessSpec {
    let mut w = witness_by_id("sl2-9").expect("catalog entry");
    let f9 = gf(9).unwrap();
    let b2 = f9.mul(f9.gen(), f9.gen());
    for (name, def) in w.defs.iter_mut() {
        if name == "b" {
            let mut m = SquareMatrix::identity(&f9, 2);
            m.set(1, 0, b2);
            *def = ElementDef::Explicit(Element::Mat(m));
        }
    }
    w.id = "sl2-9-mutated".into();
    w
}

// =====================
// Verification
// =====================

fn partition_string(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Replays every assertion of a witness in order. Budget violations are
/// INCONCLUSIVE, never PASS.
pub fn verify(w: &WitnessSpec) -> Vec<Report> {
    let mut env_names: Vec<String> = Vec::new();
    let mut env_vals: Vec<Element> = Vec::new();
    let mut reports = Vec::new();

    for (name, def) in &w.defs {
        let lookup = |n: &str| -> Option<Element> {
            env_names
                .iter()
                .position(|x| x == n)
                .map(|i| env_vals[i].clone())
        };
        let value = match def {
            ElementDef::Explicit(e) => Ok(e.clone()),
            ElementDef::Word(word) => eval_word(word, &lookup),
        };
        match value {
            Ok(v) => {
                env_names.push(name.clone());
                env_vals.push(v);
            }
            Err(e) => {
                reports.push(Report::new(
                    format!("{}/def-{name}", w.id),
                    Status::Fail,
                    "definable element",
                    format!("{e}"),
                    PROV_DEFINITION,
                    0,
                ));
                return reports;
            }
        }
    }
    let lookup = |n: &str| -> Option<Element> {
        env_names
            .iter()
            .position(|x| x == n)
            .map(|i| env_vals[i].clone())
    };

    for a in &w.asserts {
        let t0 = Instant::now();
        let (check, status, expected, actual, prov) = run_assertion(w, a, &lookup);
        reports.push(Report::new(
            format!("{}/{check}", w.id),
            status,
            expected,
            actual,
            prov,
            t0.elapsed().as_millis(),
        ));
    }
    reports
}

fn run_assertion(
    w: &WitnessSpec,
    a: &Assertion,
    lookup: &dyn Fn(&str) -> Option<Element>,
) -> (String, Status, String, String, &'static str) {
    let eval = |word: &str| eval_word(word, lookup);
    match a {
        Assertion::OrderEquals { word, expected } => match eval(word) {
            Ok(e) => {
                let got = e.order();
                (
                    format!("order({word})"),
                    if got == *expected { Status::Pass } else { Status::Fail },
                    expected.to_string(),
                    got.to_string(),
                    PROV_CATALOG,
                )
            }
            Err(e) => err_report(format!("order({word})"), e),
        },
        Assertion::Equal { lhs, rhs } => match (eval(lhs), eval(rhs)) {
            (Ok(a), Ok(b)) => (
                format!("equal({lhs},{rhs})"),
                if a == b { Status::Pass } else { Status::Fail },
                "equal".into(),
                if a == b { "equal".into() } else { "distinct".into() },
                PROV_CATALOG,
            ),
            (Err(e), _) | (_, Err(e)) => err_report(format!("equal({lhs},{rhs})"), e),
        },
        Assertion::NotEqual { lhs, rhs } => match (eval(lhs), eval(rhs)) {
            (Ok(a), Ok(b)) => (
                format!("notequal({lhs},{rhs})"),
                if a != b { Status::Pass } else { Status::Fail },
                "distinct".into(),
                if a != b { "distinct".into() } else { "equal".into() },
                PROV_CATALOG,
            ),
            (Err(e), _) | (_, Err(e)) => err_report(format!("notequal({lhs},{rhs})"), e),
        },
        Assertion::JordanTypeEquals { word, expected } => match eval(word) {
            Ok(Element::Mat(m)) => match m.jordan_type() {
                Ok(jt) => (
                    format!("jordan({word})"),
                    if jt == *expected { Status::Pass } else { Status::Fail },
                    partition_string(expected),
                    partition_string(&jt),
                    PROV_CATALOG,
                ),
                Err(e) => (
                    format!("jordan({word})"),
                    Status::Fail,
                    partition_string(expected),
                    format!("{e}"),
                    PROV_CATALOG,
                ),
            },
            Ok(Element::Perm(_)) => (
                format!("jordan({word})"),
                Status::Fail,
                partition_string(expected),
                "permutation has no Jordan type".into(),
                PROV_CATALOG,
            ),
            Err(e) => err_report(format!("jordan({word})"), e),
        },
        Assertion::Member { word } => match eval(word) {
            Ok(e) => match w.group.is_member(&e) {
                Ok(ok) => (
                    format!("member({word})"),
                    if ok { Status::Pass } else { Status::Fail },
                    format!("element of {}", w.group.name),
                    if ok { "member".into() } else { "not a member".into() },
                    PROV_DEFINITION,
                ),
                Err(e) => (
                    format!("member({word})"),
                    Status::Fail,
                    format!("element of {}", w.group.name),
                    format!("{e}"),
                    PROV_DEFINITION,
                ),
            },
            Err(e) => err_report(format!("member({word})"), e),
        },
        Assertion::Regular { word } => match eval(word) {
            Ok(Element::Mat(m)) => match crate::element::is_regular_unipotent(&m, &w.group) {
                Ok(ok) => (
                    format!("regular({word})"),
                    if ok { Status::Pass } else { Status::Fail },
                    "regular unipotent".into(),
                    if ok { "regular unipotent".into() } else { "not regular".into() },
                    PROV_CATALOG,
                ),
                Err(e) => (
                    format!("regular({word})"),
                    Status::Fail,
                    "regular unipotent".into(),
                    format!("{e}"),
                    PROV_CATALOG,
                ),
            },
            Ok(Element::Perm(_)) => (
                format!("regular({word})"),
                Status::Fail,
                "regular unipotent".into(),
                "permutation".into(),
                PROV_CATALOG,
            ),
            Err(e) => err_report(format!("regular({word})"), e),
        },
        Assertion::GeneratesFullGroup { words } => {
            let target = match &w.group.expected_order {
                Some(o) => u128_order(o),
                None => {
                    return (
                        "generates".into(),
                        Status::Fail,
                        "known full order".into(),
                        "group spec lacks an order".into(),
                        PROV_FORMULA,
                    )
                }
            };
            let gens: Result<Vec<Element>, WitnessError> = words.iter().map(|w| eval(w)).collect();
            match gens {
                Ok(gens) => match build_chain(&gens, &ChainOptions::with_target(target)) {
                    Ok(chain) => {
                        let got = chain.order();
                        (
                            format!("generates({})", words.join(",")),
                            if got == target { Status::Pass } else { Status::Fail },
                            target.to_string(),
                            got.to_string(),
                            PROV_FORMULA,
                        )
                    }
                    Err(ChainError::Budget { points, budget }) => (
                        format!("generates({})", words.join(",")),
                        Status::Inconclusive,
                        target.to_string(),
                        format!("chain budget exceeded: {points} > {budget}"),
                        PROV_FORMULA,
                    ),
                    Err(e) => (
                        format!("generates({})", words.join(",")),
                        Status::Fail,
                        target.to_string(),
                        format!("{e}"),
                        PROV_FORMULA,
                    ),
                },
                Err(e) => err_report(format!("generates({})", words.join(",")), e),
            }
        }
        Assertion::SubgroupOrderEquals { words, expected } => {
            let gens: Result<Vec<Element>, WitnessError> = words.iter().map(|w| eval(w)).collect();
            match gens {
                Ok(gens) => match build_chain(&gens, &ChainOptions::with_target(*expected)) {
                    Ok(chain) => {
                        let got = chain.order();
                        (
                            format!("suborder({})", words.join(",")),
                            if got == *expected { Status::Pass } else { Status::Fail },
                            expected.to_string(),
                            got.to_string(),
                            PROV_CATALOG,
                        )
                    }
                    Err(ChainError::Budget { points, budget }) => (
                        format!("suborder({})", words.join(",")),
                        Status::Inconclusive,
                        expected.to_string(),
                        format!("chain budget exceeded: {points} > {budget}"),
                        PROV_CATALOG,
                    ),
                    Err(e) => (
                        format!("suborder({})", words.join(",")),
                        Status::Fail,
                        expected.to_string(),
                        format!("{e}"),
                        PROV_CATALOG,
                    ),
                },
                Err(e) => err_report(format!("suborder({})", words.join(",")), e),
            }
        }
        Assertion::Irreducible { words } => {
            let gens: Result<Vec<Element>, WitnessError> = words.iter().map(|w| eval(w)).collect();
            match gens {
                Ok(gens) => {
                    let mats: Option<Vec<SquareMatrix>> =
                        gens.iter().map(|g| g.as_mat().cloned()).collect();
                    match mats {
                        Some(mats) => match irreducible_by_spinning(&mats, SPIN_BUDGET) {
                            Ok(SpinOutcome::Irreducible) => (
                                format!("irreducible({})", words.join(",")),
                                Status::Pass,
                                "irreducible".into(),
                                "irreducible".into(),
                                PROV_CATALOG,
                            ),
                            Ok(SpinOutcome::Reducible(basis)) => (
                                format!("irreducible({})", words.join(",")),
                                Status::Fail,
                                "irreducible".into(),
                                format!("invariant subspace of dimension {}", basis.len()),
                                PROV_CATALOG,
                            ),
                            Ok(SpinOutcome::Undetermined { points }) => (
                                format!("irreducible({})", words.join(",")),
                                Status::Inconclusive,
                                "irreducible".into(),
                                format!("undetermined at this scale ({points} projective points)"),
                                PROV_CATALOG,
                            ),
                            Err(e) => (
                                format!("irreducible({})", words.join(",")),
                                Status::Fail,
                                "irreducible".into(),
                                format!("{e}"),
                                PROV_CATALOG,
                            ),
                        },
                        None => (
                            format!("irreducible({})", words.join(",")),
                            Status::Fail,
                            "matrix generators".into(),
                            "permutation input".into(),
                            PROV_CATALOG,
                        ),
                    }
                }
                Err(e) => err_report(format!("irreducible({})", words.join(",")), e),
            }
        }
        Assertion::TransposeConjugacy => {
            match t2r_conjugator(w.group.n, w.group.q) {
                Ok(r) => {
                    let ok = r.m_conjugates
                        && r.det_rule_holds
                        && r.m1_identity_holds
                        && (r.sl_conjugate_to_j || r.sl_conjugate_to_j_inv);
                    let which = match (r.sl_conjugate_to_j, r.sl_conjugate_to_j_inv) {
                        (true, true) => "both J and J^-1",
                        (true, false) => "J",
                        (false, true) => "J^-1",
                        (false, false) => "neither",
                    };
                    (
                        "t2r".into(),
                        if ok { Status::Pass } else { Status::Fail },
                        "conjugator identities and SL-conjugacy".into(),
                        format!(
                            "detM1={} rule={} m1id={} tJ ~ {which}",
                            r.det_m_is_one, r.det_rule_holds, r.m1_identity_holds
                        ),
                        PROV_CATALOG,
                    )
                }
                Err(e) => (
                    "t2r".into(),
                    Status::Fail,
                    "conjugator identities".into(),
                    format!("{e}"),
                    PROV_CATALOG,
                ),
            }
        }
    }
}

fn err_report(check: String, e: WitnessError) -> (String, Status, String, String, &'static str) {
    (check, Status::Fail, "evaluable word".into(), format!("{e}"), PROV_DEFINITION)
}

// =====================
// Witness files
// =====================

/// Parses the witness file format: the generator-file headers plus named
/// `mat <name>:` / `perm <name>:` blocks, `def <name> = <word>` lines, a
/// `group <spec>` line (with optional `gram identity|antidiag|split`), and
/// `assert ...` lines.
pub fn parse_witness_file(text: &str) -> Result<WitnessSpec, WitnessError> {
    let mut id = String::from("user-witness");
    let mut group: Option<GroupSpec> = None;
    let mut gram_override: Option<String> = None;
    let mut field: Option<Field> = None;
    let mut dim: Option<usize> = None;
    let mut defs: Vec<(String, ElementDef)> = Vec::new();
    let mut asserts: Vec<Assertion> = Vec::new();

    let mut lines = text.lines().map(str::trim).peekable();
    while let Some(line) = lines.next() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("witness ") {
            id = rest.trim().to_string();
        } else if let Some(rest) = line.strip_prefix("group ") {
            group = Some(GroupSpec::parse(rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("gram ") {
            gram_override = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("field ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(WitnessError::File(format!("bad field header `{line}`")));
            }
            field = Some(crate::field::make_field(
                parts[0].parse().map_err(|_| WitnessError::File(line.into()))?,
                parts[1].parse().map_err(|_| WitnessError::File(line.into()))?,
                None,
            )?);
        } else if let Some(rest) = line.strip_prefix("dim ") {
            dim = Some(rest.trim().parse().map_err(|_| WitnessError::File(line.into()))?);
        } else if let Some(rest) = line.strip_prefix("perm ") {
            let (name, cyc) = rest
                .split_once(':')
                .ok_or_else(|| WitnessError::File(format!("bad perm line `{line}`")))?;
            let d = dim.ok_or_else(|| WitnessError::File("perm before dim".into()))?;
            defs.push((
                name.trim().to_string(),
                ElementDef::Explicit(Element::Perm(Perm::parse(cyc.trim(), d)?)),
            ));
        } else if let Some(rest) = line.strip_prefix("mat ") {
            let name = rest
                .strip_suffix(':')
                .ok_or_else(|| WitnessError::File(format!("bad mat line `{line}`")))?
                .trim()
                .to_string();
            let f = field.clone().ok_or_else(|| WitnessError::File("mat before field".into()))?;
            let n = dim.ok_or_else(|| WitnessError::File("mat before dim".into()))?;
            let mut rows = Vec::with_capacity(n);
            for _ in 0..n {
                let row = lines
                    .next()
                    .ok_or_else(|| WitnessError::File("mat block ended early".into()))?;
                let parsed: Result<Vec<u8>, FieldError> =
                    row.split(',').map(|t| f.parse_scalar(t)).collect();
                rows.push(parsed?);
            }
            defs.push((
                name,
                ElementDef::Explicit(Element::Mat(SquareMatrix::from_rows(&f, &rows))),
            ));
        } else if let Some(rest) = line.strip_prefix("def ") {
            let (name, word) = rest
                .split_once('=')
                .ok_or_else(|| WitnessError::File(format!("bad def line `{line}`")))?;
            defs.push((name.trim().to_string(), ElementDef::Word(word.trim().to_string())));
        } else if let Some(rest) = line.strip_prefix("assert ") {
            asserts.push(parse_assert_line(rest.trim())?);
        } else {
            return Err(WitnessError::File(format!("unrecognized line `{line}`")));
        }
    }

    let mut group = group.ok_or_else(|| WitnessError::File("missing group line".into()))?;
    if let Some(g) = gram_override {
        let f = field
            .clone()
            .or_else(|| {
                defs.iter().find_map(|(_, d)| match d {
                    ElementDef::Explicit(Element::Mat(m)) => Some(m.field().clone()),
                    _ => None,
                })
            })
            .ok_or_else(|| WitnessError::File("gram override needs a field".into()))?;
        let n = group.n;
        group.form = Some(match g.as_str() {
            "identity" => FormDescriptor::hermitian_identity(&f, n),
            "antidiag" => FormDescriptor::hermitian_antidiag(&f, n),
            "split" => FormDescriptor::symplectic_split(&f, n / 2),
            other => return Err(WitnessError::File(format!("unknown gram `{other}`"))),
        });
    }
    Ok(WitnessSpec {
        id,
        group,
        defs,
        asserts,
    })
}

fn parse_assert_line(s: &str) -> Result<Assertion, WitnessError> {
    let (head, rest) = s.split_once(' ').unwrap_or((s, ""));
    let rest = rest.trim();
    let parse_words = |t: &str| -> Vec<String> {
        t.split(',').map(|x| x.trim().to_string()).collect()
    };
    match head {
        "order" => {
            let (word, val) = rest
                .rsplit_once('=')
                .ok_or_else(|| WitnessError::File(format!("bad assert `{s}`")))?;
            Ok(Assertion::OrderEquals {
                word: word.trim().to_string(),
                expected: val.trim().parse().map_err(|_| WitnessError::File(s.into()))?,
            })
        }
        "equal" => {
            let (lhs, rhs) = rest
                .rsplit_once('=')
                .ok_or_else(|| WitnessError::File(format!("bad assert `{s}`")))?;
            Ok(Assertion::Equal {
                lhs: lhs.trim().to_string(),
                rhs: rhs.trim().to_string(),
            })
        }
        "notequal" => {
            let (lhs, rhs) = rest
                .rsplit_once('=')
                .ok_or_else(|| WitnessError::File(format!("bad assert `{s}`")))?;
            Ok(Assertion::NotEqual {
                lhs: lhs.trim().to_string(),
                rhs: rhs.trim().to_string(),
            })
        }
        "jordan" => {
            let (word, val) = rest
                .rsplit_once('=')
                .ok_or_else(|| WitnessError::File(format!("bad assert `{s}`")))?;
            let val = val.trim().trim_start_matches('[').trim_end_matches(']');
            let parts: Result<Vec<usize>, _> = val.split(',').map(|x| x.trim().parse()).collect();
            Ok(Assertion::JordanTypeEquals {
                word: word.trim().to_string(),
                expected: parts.map_err(|_| WitnessError::File(s.into()))?,
            })
        }
        "member" => Ok(Assertion::Member {
            word: rest.to_string(),
        }),
        "regular" => Ok(Assertion::Regular {
            word: rest.to_string(),
        }),
        "generates" => Ok(Assertion::GeneratesFullGroup {
            words: parse_words(rest),
        }),
        "suborder" => {
            let (words, val) = rest
                .rsplit_once('=')
                .ok_or_else(|| WitnessError::File(format!("bad assert `{s}`")))?;
            Ok(Assertion::SubgroupOrderEquals {
                words: parse_words(words.trim()),
                expected: val.trim().parse().map_err(|_| WitnessError::File(s.into()))?,
            })
        }
        "irreducible" => Ok(Assertion::Irreducible {
            words: parse_words(rest),
        }),
        "t2r" => Ok(Assertion::TransposeConjugacy),
        other => Err(WitnessError::File(format!("unknown assertion `{other}`"))),
    }
}

/// Renders every transcribed matrix and permutation of a witness for visual
/// comparison against its source.
pub fn transcription_text(w: &WitnessSpec) -> String {
    let mut s = format!("witness {}\ngroup {}\n", w.id, w.group.name);
    for (name, def) in &w.defs {
        match def {
            ElementDef::Explicit(e) => {
                s.push_str(&format!("{name} =\n{:?}\n", e));
            }
            ElementDef::Word(word) => s.push_str(&format!("{name} = {word}\n")),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_evaluation() {
        let f9 = gf(9).unwrap();
        let a = Element::Mat(SquareMatrix::jordan_block(&f9, 2));
        let mut bm = SquareMatrix::identity(&f9, 2);
        bm.set(1, 0, f9.gen());
        let b = Element::Mat(bm);
        let env = move |n: &str| -> Option<Element> {
            match n {
                "a" => Some(a.clone()),
                "b" => Some(b.clone()),
                _ => None,
            }
        };
        let w = eval_word("a*b^2", &env).unwrap();
        assert_eq!(w.order(), 8);
        // the commutator order is insensitive to the bracket convention:
        // [a,b] = (ab)(ba)^-1 and the reversed form (ba)^-1(ab) are conjugate
        let c1 = eval_word("[a,b]", &env).unwrap();
        let c2 = eval_word("a^-1*b^-1*a*b", &env).unwrap();
        assert_eq!(c1.order(), 10);
        assert_eq!(c2.order(), 10);
        // conjugation sugar
        let conj = eval_word("a^b", &env).unwrap();
        let direct = eval_word("b^-1*a*b", &env).unwrap();
        assert_eq!(conj, direct);
    }

    #[test]
    fn catalog_ids_complete() {
        let ids: Vec<String> = catalog().into_iter().map(|w| w.id).collect();
        for want in [
            "sl2-9",
            "sl4-2",
            "sp4-2",
            "sp6-9",
            "su4-3",
            "su5-3",
            "su4-even(4)",
            "su4-even(8)",
            "pa2(3,2)",
            "pa2(3,3)",
            "pa2(4,2)",
            "pa2(3,9)",
            "md8(3,2)",
            "t2r(4,3)",
        ] {
            assert!(ids.iter().any(|i| i == want), "missing {want}");
        }
        // sp6-9 carries its full assertion list
        let w = witness_by_id("sp6-9").unwrap();
        assert!(w.asserts.len() >= 6);
    }

    #[test]
    fn small_witnesses_pass() {
        for id in ["sl4-2", "sp4-2", "pa2(3,2)", "md8(3,2)", "t2r(4,3)"] {
            let w = witness_by_id(id).unwrap();
            let reports = verify(&w);
            for r in &reports {
                assert_eq!(r.status, Status::Pass, "{}: {} -> {}", id, r.check, r.actual);
            }
        }
    }

    #[test]
    fn witness_file_round_trip() {
        let text = "\
witness demo
group SL(2,3)
field 3 1
dim 2
mat a:
1,1
0,1
mat b:
1,0
1,1
def c = a*b
assert order c = 4
assert member a
assert generates a,b
";
        let w = parse_witness_file(text).unwrap();
        assert_eq!(w.id, "demo");
        assert_eq!(w.defs.len(), 3);
        let reports = verify(&w);
        assert!(reports.iter().all(|r| r.status == Status::Pass));
    }

    #[test]
    fn mutation_is_detected() {
        let w = mutated_sl2_9();
        let reports = verify(&w);
        assert!(
            reports.iter().any(|r| r.status == Status::Fail),
            "corrupted witness must fail"
        );
    }
}
