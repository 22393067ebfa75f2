//! Classical root systems in the `e_i` basis.
//!
//! Conventions (all indices are 1-based):
//!
//! | family | coordinates | positive roots                         | simple roots                    |
//! |--------|-------------|----------------------------------------|---------------------------------|
//! | `A_n`  | `n + 1`     | `e_j - e_i`, `i < j`                   | `e_{i+1} - e_i`                 |
//! | `B_n`  | `n`         | `e_j ± e_i`, `e_i`                     | `e_1`, `e_{i+1} - e_i`          |
//! | `C_n`  | `n`         | `e_j ± e_i`, `2e_i`                    | `2e_1`, `e_{i+1} - e_i`         |
//! | `D_n`  | `n`         | `e_j ± e_i`                            | `e_2 + e_1`, `e_{i+1} - e_i`    |
//!
//! The rank of `A_n` is the Lie rank, so `A_n` is realized inside `sl_{n+1}`.
//! Note that the short simple root of `B_n`/`C_n` sits at the *low* end of the
//! index range.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank accepted by [`RootSystemType::new`].
pub const MAX_RANK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected one of A, B, C, D".into(),
            }),
        }
    }
}

/// The positive-root shape of a root, up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `e_hi - e_lo`
    Diff { hi: usize, lo: usize },
    /// `e_hi + e_lo`
    Sum { hi: usize, lo: usize },
    /// `e_i` (type B)
    Short(usize),
    /// `2e_i` (type C)
    Long(usize),
}

impl Shape {
    pub fn indices(&self) -> (usize, Option<usize>) {
        match *self {
            Shape::Diff { hi, lo } | Shape::Sum { hi, lo } => (hi, Some(lo)),
            Shape::Short(i) | Shape::Long(i) => (i, None),
        }
    }
}

/// An integer vector over `e_1..e_N`.
///
/// Ordering is lexicographic on the coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(Vec<i32>);

impl Root {
    pub fn from_coefficients(coefficients: Vec<i32>) -> Self {
        Root(coefficients)
    }

    pub fn zero(dim: usize) -> Self {
        Root(vec![0; dim])
    }

    /// `e_i`
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut r = Root::zero(dim);
        r.0[i - 1] = 1;
        r
    }

    /// `e_j - e_i`
    pub fn diff(dim: usize, j: usize, i: usize) -> Self {
        let mut r = Root::zero(dim);
        r.0[j - 1] += 1;
        r.0[i - 1] -= 1;
        r
    }

    /// `e_j + e_i`
    pub fn sum(dim: usize, j: usize, i: usize) -> Self {
        let mut r = Root::zero(dim);
        r.0[j - 1] += 1;
        r.0[i - 1] += 1;
        r
    }

    /// `e_i`
    pub fn short(dim: usize, i: usize) -> Self {
        Root::basis(dim, i)
    }

    /// `2e_i`
    pub fn long(dim: usize, i: usize) -> Self {
        let mut r = Root::zero(dim);
        r.0[i - 1] = 2;
        r
    }

    pub fn coefficients(&self) -> &[i32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coefficient of `e_i` (1-based).
    pub fn coefficient(&self, i: usize) -> i32 {
        self.0[i - 1]
    }

    /// Nonzero `(index, coefficient)` pairs, 1-based.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i + 1, c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms().map(|(i, _)| i).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sign of the highest-index nonzero coefficient; zero for the zero vector.
    pub fn sign(&self) -> i32 {
        self.0
            .iter()
            .rev()
            .find(|&&c| c != 0)
            .map_or(0, |c| c.signum())
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn inner(&self, other: &Root) -> i32 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Classifies the vector as `sign * shape`, or `None` if it has no
    /// classical root shape.
    pub fn shape(&self) -> Option<(i32, Shape)> {
        let terms: Vec<(usize, i32)> = self.terms().collect();
        match terms.as_slice() {
            [(i, c)] if c.abs() == 1 => Some((c.signum(), Shape::Short(*i))),
            [(i, c)] if c.abs() == 2 => Some((c.signum(), Shape::Long(*i))),
            [(lo, cl), (hi, ch)] if cl.abs() == 1 && ch.abs() == 1 => {
                let sign = ch.signum();
                if cl == ch {
                    Some((sign, Shape::Sum { hi: *hi, lo: *lo }))
                } else {
                    Some((sign, Shape::Diff { hi: *hi, lo: *lo }))
                }
            }
            _ => None,
        }
    }

    /// Positive representative `±self`.
    pub fn abs(&self) -> Root {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Parses strings such as `e3-e1`, `e3+e1`, `2e1`, `-e2`.
    pub fn parse(input: &str, dim: usize) -> Result<Root> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty root"));
        }
        let mut coefficients = vec![0i32; dim];
        let bytes = s.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = 1;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(err("expected `+` or `-` between terms"));
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let scale: i32 = if start == pos {
                1
            } else {
                s[start..pos].parse().map_err(|_| err("bad coefficient"))?
            };
            if pos >= bytes.len() || bytes[pos] != b'e' {
                return Err(err("expected `e<index>`"));
            }
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let index: usize = s[start..pos].parse().map_err(|_| err("bad index"))?;
            if index == 0 || index > dim {
                return Err(err(&format!("index out of range 1..={dim}")));
            }
            coefficients[index - 1] += sign * scale;
        }
        Ok(Root(coefficients))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}e{i}")?;
            } else {
                write!(f, "{sign}{mag}e{i}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Root({self})")
    }
}

impl Serialize for Root {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Neg for Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root(self.0.into_iter().map(|c| -c).collect())
    }
}

impl Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }
}

impl Add for &Root {
    type Output = Root;
    fn add(self, rhs: &Root) -> Root {
        assert_eq!(self.dim(), rhs.dim(), "root dimension mismatch");
        Root(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Root {
    type Output = Root;
    fn sub(self, rhs: &Root) -> Root {
        assert_eq!(self.dim(), rhs.dim(), "root dimension mismatch");
        Root(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// True iff the index supports of `a` and `b` are disjoint.
pub fn is_disjoint(a: &Root, b: &Root) -> bool {
    a.terms().all(|(i, _)| b.coefficient(i) == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSystemType {
    family: Family,
    rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min = if family == Family::D { 2 } else { 1 };
        if rank < min || rank > MAX_RANK {
            return Err(Error::InvalidRank { family, rank });
        }
        Ok(RootSystemType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of `e_i` coordinates.
    pub fn coords(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            _ => self.rank,
        }
    }

    pub fn is_root(&self, r: &Root) -> bool {
        if r.dim() != self.coords() {
            return false;
        }
        let Some((_, shape)) = r.shape() else {
            return false;
        };
        matches!(
            (self.family, shape),
            (_, Shape::Diff { .. })
                | (Family::B | Family::C | Family::D, Shape::Sum { .. })
                | (Family::B, Shape::Short(_))
                | (Family::C, Shape::Long(_))
        )
    }

    pub fn check_root(&self, r: &Root) -> Result<()> {
        if self.is_root(r) {
            Ok(())
        } else {
            Err(Error::NotARoot {
                root: r.to_string(),
                system: self.to_string(),
            })
        }
    }

    pub fn parse_root(&self, s: &str) -> Result<Root> {
        let r = Root::parse(s, self.coords())?;
        self.check_root(&r)?;
        Ok(r)
    }

    /// `R⁺` ordered by `(j, i, shape)`: for each `j`, the roots `e_j - e_i`
    /// and `e_j + e_i` for `i < j`, then `e_j` or `2e_j`.
    pub fn positive_roots(&self) -> Vec<Root> {
        let n = self.coords();
        let mut out = Vec::new();
        for j in 1..=n {
            for i in 1..j {
                out.push(Root::diff(n, j, i));
                if self.family != Family::A {
                    out.push(Root::sum(n, j, i));
                }
            }
            match self.family {
                Family::B => out.push(Root::short(n, j)),
                Family::C => out.push(Root::long(n, j)),
                _ => {}
            }
        }
        out
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        let n = self.coords();
        let mut out = Vec::with_capacity(self.rank);
        match self.family {
            Family::A => {}
            Family::B => out.push(Root::short(n, 1)),
            Family::C => out.push(Root::long(n, 1)),
            Family::D => out.push(Root::sum(n, 2, 1)),
        }
        out.extend((1..n).map(|i| Root::diff(n, i + 1, i)));
        out
    }

    pub fn maximal_root(&self) -> Root {
        let n = self.coords();
        match self.family {
            Family::A => Root::diff(n, n, 1),
            Family::B if n == 1 => Root::short(n, 1),
            Family::B | Family::D => Root::sum(n, n, n - 1),
            Family::C => Root::long(n, n),
        }
    }

    /// Coefficients of `r` in the basis [`simple_roots`](Self::simple_roots),
    /// or `None` if `r` is not a root.
    pub fn simple_coefficients(&self, r: &Root) -> Option<Vec<i32>> {
        let (sign, shape) = r.shape()?;
        if !self.is_root(r) {
            return None;
        }
        let n = self.coords();
        // Positions of e_{k+1} - e_k in the simple-root list.
        let offset = if self.family == Family::A { 0 } else { 1 };
        let mut k = vec![0i32; self.rank];
        let chain = |from: usize, to: usize, k: &mut Vec<i32>| {
            // e_to - e_from = sum of alpha_m for from <= m < to
            for m in from..to {
                k[offset + m - 1] += 1;
            }
        };
        match (self.family, shape) {
            (_, Shape::Diff { hi, lo }) => chain(lo, hi, &mut k),
            (Family::B, Shape::Short(i)) => {
                k[0] += 1;
                chain(1, i, &mut k);
            }
            (Family::C, Shape::Long(i)) => {
                k[0] += 1;
                chain(1, i, &mut k);
                chain(1, i, &mut k);
            }
            (Family::B, Shape::Sum { hi, lo }) => {
                k[0] += 2;
                chain(1, hi, &mut k);
                chain(1, lo, &mut k);
            }
            (Family::C, Shape::Sum { hi, lo }) => {
                k[0] += 1;
                chain(1, hi, &mut k);
                chain(1, lo, &mut k);
            }
            (Family::D, Shape::Sum { hi, lo }) => {
                // (e_hi - e_2) + (e_lo - e_1) + (e_2 + e_1)
                k[0] += 1;
                chain(2, hi, &mut k);
                chain(1, lo, &mut k);
            }
            _ => return None,
        }
        debug_assert!(n >= 1);
        if sign < 0 {
            k.iter_mut().for_each(|c| *c = -*c);
        }
        Some(k)
    }

    pub fn is_strongly_orthogonal(&self, a: &Root, b: &Root) -> bool {
        !self.is_root(&(a + b)) && !self.is_root(&(a - b))
    }

    /// Abelian nilradicals `m_α`: one per simple root whose coefficient in the
    /// maximal root is 1, in simple-root order.
    pub fn abelian_nilradicals(&self) -> Vec<NilradicalId> {
        let theta = self
            .simple_coefficients(&self.maximal_root())
            .expect("maximal root is a root");
        self.simple_roots()
            .into_iter()
            .zip(theta)
            .filter(|(_, k)| *k == 1)
            .map(|(alpha, _)| NilradicalId { ty: *self, simple_root: alpha })
            .collect()
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// An abelian nilradical `m_α` of the maximal parabolic obtained by deleting
/// the simple root `α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NilradicalId {
    ty: RootSystemType,
    simple_root: Root,
}

impl NilradicalId {
    pub fn new(ty: RootSystemType, simple_root: Root) -> Result<Self> {
        ty.abelian_nilradicals()
            .into_iter()
            .find(|id| id.simple_root == simple_root)
            .ok_or_else(|| Error::NotAbelianNilradical {
                root: simple_root.to_string(),
                system: ty.to_string(),
            })
    }

    pub fn parse(ty: RootSystemType, selector: &str) -> Result<Self> {
        let r = Root::parse(selector, ty.coords())?;
        NilradicalId::new(ty, r)
    }

    pub fn root_system(&self) -> RootSystemType {
        self.ty
    }

    pub fn simple_root(&self) -> &Root {
        &self.simple_root
    }

    fn simple_index(&self) -> usize {
        self.ty
            .simple_roots()
            .iter()
            .position(|a| *a == self.simple_root)
            .expect("validated at construction")
    }

    /// `R̄⁺_α`: positive roots with nonzero `α`-coefficient, in
    /// [`RootSystemType::positive_roots`] order.
    pub fn positive_roots(&self) -> Vec<Root> {
        let s = self.simple_index();
        self.ty
            .positive_roots()
            .into_iter()
            .filter(|r| self.ty.simple_coefficients(r).expect("root")[s] != 0)
            .collect()
    }

    /// Positive roots of the Levi factor.
    pub fn levi_positive_roots(&self) -> Vec<Root> {
        let s = self.simple_index();
        self.ty
            .positive_roots()
            .into_iter()
            .filter(|r| self.ty.simple_coefficients(r).expect("root")[s] == 0)
            .collect()
    }

    /// Short selector string, e.g. `e2-e1`.
    pub fn selector(&self) -> String {
        self.simple_root.to_string()
    }
}

impl fmt::Display for NilradicalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:m[{}]", self.ty, self.simple_root)
    }
}
