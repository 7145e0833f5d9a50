//! Permutations on {1..n} with left action and right-to-left composition:
//! (g*h)(x) = g(h(x)). Under this convention t^-1*g*t with g = (1,2,3,4)(5,6)
//! and t = (2,5,8,4,6,3,7) equals (1,7,6,8)(2,4), which is the composition
//! rule every permutation identity in the witness catalog relies on.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("cannot parse cycle notation `{0}`")]
    Parse(String),
    #[error("point {0} out of range 1..={1}")]
    PointRange(usize, usize),
    #[error("point {0} repeated in cycle notation")]
    Repeated(usize),
    #[error("permutations act on different degrees")]
    DegreeMismatch,
}

/// A permutation stored as its image list, 0-based internally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    img: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            img: (0..degree as u8).collect(),
        }
    }

    pub fn from_images(img: Vec<u8>) -> Perm {
        let mut seen = vec![false; img.len()];
        for &i in &img {
            assert!(!seen[i as usize], "not a permutation");
            seen[i as usize] = true;
        }
        Perm { img }
    }

    /// Parses disjoint-cycle notation like `(1,2,3,4)(5,6)`, 1-based points.
    /// The identity may be written `()`.
    pub fn parse(s: &str, degree: usize) -> Result<Perm, PermError> {
        let txt: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut img: Vec<u8> = (0..degree as u8).collect();
        let mut moved = vec![false; degree];
        let bytes = txt.as_bytes();
        let mut pos = 0usize;
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(PermError::Parse(s.to_string()));
            }
            pos += 1;
            let mut cycle: Vec<usize> = Vec::new();
            loop {
                if pos < bytes.len() && bytes[pos] == b')' && cycle.is_empty() {
                    pos += 1;
                    break;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == start {
                    return Err(PermError::Parse(s.to_string()));
                }
                let v: usize = std::str::from_utf8(&bytes[start..pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| PermError::Parse(s.to_string()))?;
                if v == 0 || v > degree {
                    return Err(PermError::PointRange(v, degree));
                }
                if moved[v - 1] {
                    return Err(PermError::Repeated(v));
                }
                moved[v - 1] = true;
                cycle.push(v - 1);
                match bytes.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b')') => {
                        pos += 1;
                        for i in 0..cycle.len() {
                            img[cycle[i]] = cycle[(i + 1) % cycle.len()] as u8;
                        }
                        break;
                    }
                    _ => return Err(PermError::Parse(s.to_string())),
                }
            }
        }
        Ok(Perm { img })
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    /// self * other, applying `other` first: (self*other)(x) = self(other(x)).
    pub fn mul(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            img: other.img.iter().map(|&x| self.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u8; self.img.len()];
        for (i, &j) in self.img.iter().enumerate() {
            img[j as usize] = i as u8;
        }
        Perm { img }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.img.len()];
        let mut ord = 1u64;
        for start in 0..self.img.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.img[x] as usize;
                len += 1;
            }
            ord = crate::util::lcm_u64(ord, len);
        }
        ord
    }

    pub fn images(&self) -> &[u8] {
        &self.img
    }

    /// Canonical byte encoding: the image list.
    pub fn pack_bytes(&self) -> Vec<u8> {
        self.img.clone()
    }
}

impl fmt::Display for Perm {
    /// Disjoint cycles, fixed points omitted; identity prints `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.img.len()];
        let mut wrote = false;
        for start in 0..self.img.len() {
            if seen[start] || self.img[start] as usize == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.img[x] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let g = Perm::parse("(1,2,3,4)(5,6)", 8).unwrap();
        assert_eq!(g.to_string(), "(1,2,3,4)(5,6)");
        assert_eq!(g.apply(0), 1);
        assert_eq!(g.apply(7), 7);
        assert!(Perm::parse("()", 5).unwrap().is_identity());
        assert!(Perm::parse("(1,9)", 8).is_err());
        assert!(Perm::parse("(1,1)", 8).is_err());
    }

    #[test]
    fn conjugation_convention_matches_catalog() {
        // t^-1 g t = (1,7,6,8)(2,4) under (g*h)(x) = g(h(x))
        let g = Perm::parse("(1,2,3,4)(5,6)", 8).unwrap();
        let t = Perm::parse("(2,5,8,4,6,3,7)", 8).unwrap();
        let h = t.inverse().mul(&g).mul(&t);
        assert_eq!(h.to_string(), "(1,7,6,8)(2,4)");
        let g2h = g.mul(&g).mul(&h);
        assert_eq!(g2h.to_string(), "(1,7,6,8,3)");
        assert_eq!(g2h.order(), 5);
    }

    #[test]
    fn orders_and_inverses() {
        let g = Perm::parse("(1,2,3,4)(5,6)", 8).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.mul(&g.inverse()).is_identity());
    }
}
