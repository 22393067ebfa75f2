//! Matrix realizations of `sl_N`, `so_{2n+1}`, `sp_{2n}` and `so_{2n}`.
//!
//! Index dictionary (1-based positions of the natural representation):
//!
//! * `sl_N`: position `p` has weight `e_p`.
//! * `sp_{2n}`, `so_{2n}`: position `n + i` has weight `+e_i`, position
//!   `n + 1 - i` has weight `-e_i`.
//! * `so_{2n+1}`: position `n + 1 + i` has weight `+e_i`, `n + 1 - i` has
//!   `-e_i`, and `n + 1` has weight zero.
//!
//! The matrix unit `E_{pq}` has root label `wt(q) - wt(p)`, so positive roots
//! sit above the diagonal and the Borel subalgebra is upper triangular. The
//! orthogonal and symplectic algebras are `{X : Xᵀ J + J X = 0}` with `J`
//! antidiagonal: all ones for `so`, and `+1` in the first `n` rows, `-1` in
//! the last `n` for `sp`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{Family, Root, RootSystemType};

#[derive(Clone, PartialEq, Eq)]
pub struct LieMatrix {
    ty: RootSystemType,
    size: usize,
    entries: Vec<Poly>,
}

/// Size of the natural representation.
pub fn matrix_size(t: RootSystemType) -> usize {
    match t.family() {
        Family::A => t.rank() + 1,
        Family::B => 2 * t.rank() + 1,
        Family::C | Family::D => 2 * t.rank(),
    }
}

/// Weight of a 1-based position as a coefficient vector.
fn weight(t: RootSystemType, p: usize) -> Root {
    let n = t.coords();
    match t.family() {
        Family::A => Root::basis(n, p),
        Family::B if p == n + 1 => Root::zero(n),
        Family::B if p > n + 1 => Root::basis(n, p - n - 1),
        Family::C | Family::D if p > n => Root::basis(n, p - n),
        _ => -&Root::basis(n, n + 1 - p),
    }
}

/// `E_{pq}` positions carrying the root `a`, in lexicographic order.
fn positions(t: RootSystemType, a: &Root) -> Vec<(usize, usize)> {
    let size = matrix_size(t);
    let wts: Vec<Root> = (1..=size).map(|p| weight(t, p)).collect();
    let mut out = Vec::new();
    for p in 1..=size {
        for q in 1..=size {
            if p != q && &(&wts[q - 1] - &wts[p - 1]) == a {
                out.push((p, q));
            }
        }
    }
    out
}

impl LieMatrix {
    pub fn zero(t: RootSystemType) -> Self {
        let size = matrix_size(t);
        LieMatrix { ty: t, size, entries: vec![Poly::zero(); size * size] }
    }

    fn unit(t: RootSystemType, p: usize, q: usize) -> Self {
        let mut m = LieMatrix::zero(t);
        m.set(p, q, Poly::one());
        m
    }

    fn identity(t: RootSystemType) -> Self {
        let mut m = LieMatrix::zero(t);
        for p in 1..=m.size {
            m.set(p, p, Poly::one());
        }
        m
    }

    pub fn root_system(&self) -> RootSystemType {
        self.ty
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry at 1-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &Poly {
        &self.entries[(row - 1) * self.size + col - 1]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Poly) {
        self.entries[(row - 1) * self.size + col - 1] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// True iff every entry is a constant.
    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|e| e.degree().unwrap_or(0) == 0)
    }

    fn check_compatible(&self, other: &LieMatrix) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.size, other.size));
        }
        if self.ty != other.ty {
            return Err(Error::FamilyMismatch(format!("{} vs {}", self.ty, other.ty)));
        }
        Ok(())
    }

    fn zip(&self, other: &LieMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> LieMatrix {
        LieMatrix {
            ty: self.ty,
            size: self.size,
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| f(x, y)).collect(),
        }
    }

    pub fn add(&self, other: &LieMatrix) -> Result<LieMatrix> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |x, y| x + y))
    }

    pub fn sub(&self, other: &LieMatrix) -> Result<LieMatrix> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |x, y| x - y))
    }

    pub fn scale(&self, c: &Poly) -> LieMatrix {
        LieMatrix {
            ty: self.ty,
            size: self.size,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// Associative matrix product; the result need not lie in the algebra.
    pub fn product(&self, other: &LieMatrix) -> Result<LieMatrix> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &LieMatrix) -> LieMatrix {
        let n = self.size;
        let mut out = LieMatrix::zero(self.ty);
        for i in 0..n {
            for k in 0..n {
                let x = &self.entries[i * n + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = &other.entries[k * n + j];
                    if !y.is_zero() {
                        let e = &mut out.entries[i * n + j];
                        *e = &*e + &(x * y);
                    }
                }
            }
        }
        out
    }

    fn transpose(&self) -> LieMatrix {
        let mut out = LieMatrix::zero(self.ty);
        for p in 1..=self.size {
            for q in 1..=self.size {
                out.set(q, p, self.get(p, q).clone());
            }
        }
        out
    }

    /// The form matrix `J` (identity-free for `sl`, where it is unused).
    fn form(t: RootSystemType) -> LieMatrix {
        let mut j = LieMatrix::zero(t);
        let size = j.size;
        for p in 1..=size {
            let v = if t.family() == Family::C && p > size / 2 { -1 } else { 1 };
            j.set(p, size + 1 - p, Poly::from_int(v));
        }
        j
    }

    /// `θ(X) = -J⁻¹ Xᵀ J`; the algebra is the fixed space of `θ`.
    fn theta(&self) -> LieMatrix {
        let j = LieMatrix::form(self.ty);
        let j_inv = if self.ty.family() == Family::C { j.scale(&Poly::from_int(-1)) } else { j.clone() };
        j_inv.mul_unchecked(&self.transpose()).mul_unchecked(&j).scale(&Poly::from_int(-1))
    }

    /// Trace zero for `sl`; `Xᵀ J + J X = 0` for `so` and `sp`.
    pub fn in_algebra(&self) -> bool {
        match self.ty.family() {
            Family::A => {
                let tr = (1..=self.size).fold(Poly::zero(), |acc, p| &acc + self.get(p, p));
                tr.is_zero()
            }
            _ => {
                let j = LieMatrix::form(self.ty);
                let lhs = self.transpose().mul_unchecked(&j);
                let rhs = j.mul_unchecked(self);
                lhs.zip(&rhs, |x, y| x + y).is_zero()
            }
        }
    }

    /// Plain-text grid, one row per line, columns right-aligned.
    pub fn to_grid(&self) -> String {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let w = cells.iter().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for row in cells.chunks(self.size) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

impl fmt::Display for LieMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grid())
    }
}

impl fmt::Debug for LieMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieMatrix[{}]\n{}", self.ty, self.to_grid())
    }
}

/// `X_a = E + θ(E)` for the first matrix unit `E` of weight `a` (or `E`
/// itself when `θ` fixes it).
pub fn root_vector(t: RootSystemType, a: &Root) -> Result<LieMatrix> {
    t.check_root(a)?;
    let (p, q) = positions(t, a)[0];
    let e = LieMatrix::unit(t, p, q);
    if t.family() == Family::A {
        return Ok(e);
    }
    let th = e.theta();
    Ok(if th == e { e } else { e.zip(&th, |x, y| x + y) })
}

/// Basis of the Cartan subalgebra of diagonal matrices.
pub fn cartan_basis(t: RootSystemType) -> Vec<LieMatrix> {
    let n = t.rank();
    match t.family() {
        Family::A => (1..=n)
            .map(|k| {
                let mut h = LieMatrix::unit(t, k, k);
                h.set(k + 1, k + 1, Poly::from_int(-1));
                h
            })
            .collect(),
        _ => (1..=n)
            .map(|i| {
                let p = if t.family() == Family::B { n + 1 + i } else { n + i };
                let e = LieMatrix::unit(t, p, p);
                let th = e.theta();
                e.zip(&th, |x, y| x + y)
            })
            .collect(),
    }
}

/// Cartan basis followed by the positive root vectors.
pub fn borel_basis(t: RootSystemType) -> Vec<LieMatrix> {
    let mut basis = cartan_basis(t);
    for a in t.positive_roots() {
        basis.push(root_vector(t, &a).expect("positive root"));
    }
    basis
}

/// `Σ_{α ∈ S} X_α`
pub fn representative(t: RootSystemType, set: &[Root]) -> Result<LieMatrix> {
    let mut x = LieMatrix::zero(t);
    for a in set {
        x = x.add(&root_vector(t, a)?)?;
    }
    Ok(x)
}

/// `XY - YX`
pub fn bracket(x: &LieMatrix, y: &LieMatrix) -> Result<LieMatrix> {
    x.check_compatible(y)?;
    Ok(x.mul_unchecked(y).zip(&y.mul_unchecked(x), |p, q| p - q))
}

/// Least `m` with `X^m = 0`.
pub fn nilpotency_order(x: &LieMatrix) -> Result<usize> {
    if x.is_zero() {
        return Ok(1);
    }
    let mut power = x.clone();
    for m in 2..=x.size {
        power = power.mul_unchecked(x);
        if power.is_zero() {
            return Ok(m);
        }
    }
    Err(Error::NotNilpotent)
}

/// `exp(cX) · Y · exp(-cX)` by the finite exponential series.
pub fn exp_adjoint(c: &Poly, x: &LieMatrix, y: &LieMatrix) -> Result<LieMatrix> {
    x.check_compatible(y)?;
    let order = nilpotency_order(x)?;
    let exp = |s: &Poly| {
        let mut sum = LieMatrix::zero(x.ty);
        let mut term = LieMatrix::identity(x.ty);
        let mut factorial = BigInt::one();
        for k in 0..order {
            if k > 0 {
                term = term.mul_unchecked(x);
                factorial *= k;
            }
            let coeff = s.pow(k).scale(&BigRational::new(BigInt::one(), factorial.clone()));
            sum = sum.zip(&term.scale(&coeff), |p, q| p + q);
        }
        sum
    };
    let g = exp(c);
    let g_inv = exp(&-c);
    Ok(g.mul_unchecked(y).mul_unchecked(&g_inv))
}

/// Coefficients of `Y` in the positive root-vector basis of `𝔫`.
pub fn root_coefficients(y: &LieMatrix) -> Result<BTreeMap<Root, Poly>> {
    let t = y.ty;
    let mut coeffs = BTreeMap::new();
    let mut rebuilt = LieMatrix::zero(t);
    for a in t.positive_roots() {
        let (p, q) = positions(t, &a)[0];
        let entry = y.get(p, q);
        if entry.is_zero() {
            continue;
        }
        let x = root_vector(t, &a)?;
        let unit = x.get(p, q).as_constant().expect("constant root vector");
        let c = entry.scale(&unit.recip());
        rebuilt = rebuilt.zip(&x.scale(&c), |u, v| u + v);
        coeffs.insert(a, c);
    }
    if rebuilt != *y {
        return Err(Error::NotInNilradical);
    }
    Ok(coeffs)
}

/// Roots with nonzero coefficient in the basis expansion of `Y ∈ 𝔫`.
pub fn weight_support(y: &LieMatrix) -> Result<Vec<Root>> {
    Ok(root_coefficients(y)?.into_keys().collect())
}

/// `dim B.x`: the rank of `y ↦ [y, x]` on the Borel subalgebra.
pub fn orbit_dimension(x: &LieMatrix) -> Result<usize> {
    if !x.is_constant() {
        return Err(Error::NotConstant);
    }
    root_coefficients(x)?;
    let rows: Vec<Vec<BigRational>> = borel_basis(x.ty)
        .iter()
        .map(|y| {
            bracket(y, x)
                .expect("same algebra")
                .entries
                .iter()
                .map(|e| e.as_constant().expect("constant"))
                .collect()
        })
        .collect();
    Ok(rank(rows))
}

/// Exact rank by Gaussian elimination over `Q`.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][c].recip();
        let (top, below) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in below.iter_mut().filter(|row| !row[c].is_zero()) {
            let f = &row[c] * &inv;
            for (x, p) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(f: Family, n: usize) -> RootSystemType {
        RootSystemType::new(f, n).unwrap()
    }

    fn rv(t: RootSystemType, s: &str) -> LieMatrix {
        root_vector(t, &t.parse_root(s).unwrap()).unwrap()
    }

    fn all_types() -> Vec<RootSystemType> {
        let mut v = Vec::new();
        for f in Family::ALL {
            for n in 1..=4 {
                if let Ok(t) = RootSystemType::new(f, n) {
                    v.push(t);
                }
            }
        }
        v
    }

    #[test]
    fn root_vectors_lie_in_the_algebra_and_borel() {
        for t in all_types() {
            for a in t.positive_roots() {
                let x = root_vector(t, &a).unwrap();
                let neg = root_vector(t, &-&a).unwrap();
                assert!(x.in_algebra() && neg.in_algebra(), "{t} {a}");
                assert_eq!(weight_support(&x).unwrap(), vec![a.clone()]);
                for p in 1..=x.size() {
                    for q in 1..=p {
                        assert!(x.get(p, q).is_zero(), "{t} {a} not upper triangular");
                    }
                }
            }
            for h in cartan_basis(t) {
                assert!(h.in_algebra());
            }
            let dim = t.rank() + t.positive_roots().len();
            let rows = borel_basis(t)
                .iter()
                .map(|m| m.entries.iter().map(|e| e.as_constant().unwrap()).collect())
                .collect();
            assert_eq!(rank(rows), dim, "{t}");
        }
    }

    #[test]
    fn chevalley_relations() {
        for t in all_types() {
            let pos = t.positive_roots();
            for a in &pos {
                for b in &pos {
                    let br = bracket(&root_vector(t, a).unwrap(), &root_vector(t, b).unwrap()).unwrap();
                    let sum = a + b;
                    if t.is_root(&sum) {
                        assert_eq!(weight_support(&br).unwrap(), vec![sum], "{t} {a} {b}");
                    } else {
                        assert!(br.is_zero(), "{t} {a} {b}");
                    }
                }
            }
        }
        let sl3 = ty(Family::A, 2);
        let br = bracket(&rv(sl3, "e2-e1"), &rv(sl3, "e3-e2")).unwrap();
        assert_eq!(weight_support(&br).unwrap(), vec![sl3.parse_root("e3-e1").unwrap()]);
    }

    #[test]
    fn abelian_nilradicals_commute() {
        for t in all_types() {
            for id in t.abelian_nilradicals() {
                let xs: Vec<LieMatrix> =
                    id.positive_roots().iter().map(|a| root_vector(t, a).unwrap()).collect();
                for x in &xs {
                    for y in &xs {
                        assert!(bracket(x, y).unwrap().is_zero(), "{id}");
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_identity() {
        let t = ty(Family::B, 3);
        let basis: Vec<LieMatrix> = t
            .positive_roots()
            .iter()
            .flat_map(|a| [root_vector(t, a).unwrap(), root_vector(t, &-a).unwrap()])
            .chain(cartan_basis(t))
            .collect();
        for (k, x) in basis.iter().enumerate().step_by(3) {
            let y = &basis[(k * 7 + 1) % basis.len()];
            let z = &basis[(k * 5 + 2) % basis.len()];
            let j = bracket(x, &bracket(y, z).unwrap())
                .unwrap()
                .add(&bracket(y, &bracket(z, x).unwrap()).unwrap())
                .unwrap()
                .add(&bracket(z, &bracket(x, y).unwrap()).unwrap())
                .unwrap();
            assert!(j.is_zero());
            assert!(bracket(x, x).unwrap().is_zero());
        }
    }

    #[test]
    fn nilpotency_orders() {
        for n in 1..=4 {
            let t = ty(Family::A, n);
            for a in t.positive_roots() {
                assert_eq!(nilpotency_order(&root_vector(t, &a).unwrap()).unwrap(), 2);
            }
            assert_eq!(nilpotency_order(&LieMatrix::zero(t)).unwrap(), 1);
        }
        for n in 2..=4 {
            let b = ty(Family::B, n);
            assert_eq!(nilpotency_order(&rv(b, &format!("e{n}"))).unwrap(), 3);
            for d in [b, ty(Family::D, n)] {
                for i in 1..n {
                    let s = [format!("e{n}-e{i}"), format!("e{n}+e{i}")];
                    let x = rv(d, &s[0]).add(&rv(d, &s[1])).unwrap();
                    assert_eq!(nilpotency_order(&x).unwrap(), 3, "{d}");
                    assert_eq!(nilpotency_order(&rv(d, &s[0])).unwrap(), 2);
                }
            }
        }
        let h = &cartan_basis(ty(Family::A, 2))[0];
        assert!(matches!(nilpotency_order(h), Err(Error::NotNilpotent)));
    }

    #[test]
    fn orbit_dimension_examples() {
        for n in 2..=5 {
            let b = ty(Family::B, n);
            assert_eq!(orbit_dimension(&LieMatrix::zero(b)).unwrap(), 0);
            let s = [format!("e{n}-e{}", n - 1), format!("e{n}+e{}", n - 1)];
            let x = rv(b, &s[0]).add(&rv(b, &s[1])).unwrap();
            assert_eq!(orbit_dimension(&x).unwrap(), 2 * n - 1);
        }
        for n in 3..=5 {
            let d = ty(Family::D, n);
            assert_eq!(orbit_dimension(&rv(d, &format!("e{n}+e1"))).unwrap(), n - 1);
            assert_eq!(orbit_dimension(&rv(d, &format!("e{n}-e1"))).unwrap(), n - 1);
        }
        let h = cartan_basis(ty(Family::A, 2)).remove(0);
        assert!(matches!(orbit_dimension(&h), Err(Error::NotInNilradical)));
    }

    #[test]
    fn exp_adjoint_examples() {
        let a = Poly::param();
        for n in 2..=5 {
            let b = ty(Family::B, n);
            let y = rv(b, &format!("e{n}-e1"));
            assert_eq!(exp_adjoint(&Poly::zero(), &rv(b, "e1"), &y).unwrap(), y);
            let z = exp_adjoint(&a, &rv(b, "e1"), &y).unwrap();
            let coeffs = root_coefficients(&z).unwrap();
            let degrees: Vec<(String, Vec<usize>)> =
                coeffs.iter().map(|(r, c)| (r.to_string(), c.degrees())).collect();
            let mut expected = vec![
                (format!("e{n}-e1"), vec![0]),
                (format!("e{n}"), vec![1]),
                (format!("e{n}+e1"), vec![2]),
            ];
            expected.sort_by_key(|(s, _)| b.parse_root(s).unwrap());
            assert_eq!(degrees, expected);
        }
        for n in 3..=5 {
            let d = ty(Family::D, n);
            let z = exp_adjoint(&a, &rv(d, "e2+e1"), &rv(d, &format!("e{n}-e2"))).unwrap();
            let coeffs = root_coefficients(&z).unwrap();
            assert_eq!(coeffs[&d.parse_root(&format!("e{n}+e1")).unwrap()].degrees(), vec![1]);
        }
    }

    #[test]
    fn group_action_and_invariance() {
        let a = Poly::param();
        let t = ty(Family::C, 3);
        let y = representative(t, &[t.parse_root("2e2").unwrap(), t.parse_root("e3-e1").unwrap()])
            .unwrap();
        let dim = orbit_dimension(&y).unwrap();
        for r in t.positive_roots() {
            let x = root_vector(t, &r).unwrap();
            let there = exp_adjoint(&a, &x, &y).unwrap();
            assert_eq!(exp_adjoint(&-&a, &x, &there).unwrap(), y);
            let moved = exp_adjoint(&Poly::ratio(3, 2), &x, &y).unwrap();
            assert_eq!(orbit_dimension(&moved).unwrap(), dim, "{r}");
        }
    }

    #[test]
    fn representative_support() {
        let t = ty(Family::C, 6);
        let s: Vec<Root> = ["e2-e1", "e6+e3", "2e4"].iter().map(|r| t.parse_root(r).unwrap()).collect();
        let mut sorted = s.clone();
        sorted.sort();
        assert_eq!(weight_support(&representative(t, &s).unwrap()).unwrap(), sorted);
    }

    #[test]
    fn grid_dump() {
        let t = ty(Family::A, 1);
        assert_eq!(rv(t, "e2-e1").to_grid(), "0 1\n0 0\n");
    }
}
