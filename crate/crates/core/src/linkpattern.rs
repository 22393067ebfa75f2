//! Link patterns of involutions and closed-form lengths.
//!
//! A type A set `{e_j - e_i}` on `sl_N` becomes the arcs `(i, j)` on the
//! points `1..N`. For B/C/D the points are `-n..-1, 1..n` (there is no vertex
//! 0) and each root contributes a symmetric pair of arcs:
//!
//! * `e_i` or `2e_i` → `(-i, i)`
//! * `e_j - e_i` → `(i, j)`, `(-j, -i)`
//! * `e_j + e_i` → `(-i, j)`, `(-j, i)`

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::roots::{is_disjoint, Family, Root, RootSystemType, Shape};
use crate::weyl::{self, SignedPermutation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkPattern {
    vertices: Vec<i32>,
    arcs: Vec<(i32, i32)>,
}

impl LinkPattern {
    /// Builds a pattern from arcs `(a, b)` with `a < b`; arcs must be vertex
    /// disjoint and end on listed vertices.
    pub fn new(mut vertices: Vec<i32>, arcs: impl IntoIterator<Item = (i32, i32)>) -> Result<Self> {
        vertices.sort_unstable();
        let mut used = std::collections::BTreeSet::new();
        let mut list = Vec::new();
        for (a, b) in arcs {
            let (a, b) = (a.min(b), a.max(b));
            for p in [a, b] {
                if vertices.binary_search(&p).is_err() || !used.insert(p) || a == b {
                    return Err(Error::Integrity(format!("arc ({a},{b}) is not a valid arc")));
                }
            }
            list.push((a, b));
        }
        list.sort_unstable();
        Ok(LinkPattern { vertices, arcs: list })
    }

    /// `P_S`: the link pattern of a pairwise disjoint root set.
    pub fn of_set(set: &[Root], t: RootSystemType) -> Result<Self> {
        check_disjoint(set)?;
        let n = t.coords() as i32;
        let mut arcs = Vec::new();
        for r in set {
            if r.dim() != t.coords() {
                return Err(Error::SizeMismatch(r.dim(), t.coords()));
            }
            let Some((1, shape)) = r.shape() else {
                return Err(Error::NotARoot { root: r.to_string(), system: t.to_string() });
            };
            match (t.family(), shape) {
                (Family::A, Shape::Diff { hi, lo }) => arcs.push((lo as i32, hi as i32)),
                (Family::A, _) => {
                    return Err(Error::NotARoot { root: r.to_string(), system: t.to_string() })
                }
                (_, Shape::Short(i) | Shape::Long(i)) => arcs.push((-(i as i32), i as i32)),
                (_, Shape::Diff { hi, lo }) => {
                    let (i, j) = (lo as i32, hi as i32);
                    arcs.push((i, j));
                    arcs.push((-j, -i));
                }
                (_, Shape::Sum { hi, lo }) => {
                    let (i, j) = (lo as i32, hi as i32);
                    arcs.push((-i, j));
                    arcs.push((-j, i));
                }
            }
        }
        let vertices: Vec<i32> = if t.family() == Family::A {
            (1..=n).collect()
        } else {
            (-n..=n).filter(|&p| p != 0).collect()
        };
        LinkPattern::new(vertices, arcs)
    }

    pub fn vertices(&self) -> &[i32] {
        &self.vertices
    }

    /// Arcs sorted by left endpoint.
    pub fn arcs(&self) -> &[(i32, i32)] {
        &self.arcs
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn fixed_points(&self) -> Vec<i32> {
        self.vertices
            .iter()
            .copied()
            .filter(|&p| self.arcs.iter().all(|&(a, b)| p != a && p != b))
            .collect()
    }

    /// `c`: for each arc, the arcs crossing it from the left, summed.
    pub fn crossings(&self) -> usize {
        self.arcs
            .iter()
            .map(|&(a, b)| self.arcs.iter().filter(|&&(at, bt)| at < a && a < bt && bt < b).count())
            .sum()
    }

    /// `r`: for each arc, the arcs lying entirely to its right, summed.
    pub fn right_arcs(&self) -> usize {
        self.arcs
            .iter()
            .map(|&(_, b)| self.arcs.iter().filter(|&&(at, _)| at > b).count())
            .sum()
    }

    /// `b`: for each arc, the fixed points beneath it, summed.
    pub fn bridges(&self) -> usize {
        let fixed = self.fixed_points();
        self.arcs
            .iter()
            .map(|&(a, b)| fixed.iter().filter(|&&p| a < p && p < b).count())
            .sum()
    }

    /// True iff `(a, b)` is an arc exactly when `(-b, -a)` is.
    pub fn is_symmetric(&self) -> bool {
        self.arcs.iter().all(|&(a, b)| self.arcs.contains(&(-b, -a)))
    }

    /// Stable serialization `(a1,b1)(a2,b2)…`, sorted by left endpoint.
    pub fn arc_list(&self) -> String {
        let mut s = String::new();
        for (a, b) in &self.arcs {
            let _ = write!(s, "({a},{b})");
        }
        s
    }

    /// Arc diagram drawn above the labeled vertex line, longest arcs on top.
    pub fn render_ascii(&self) -> String {
        const W: usize = 4;
        let col = |p: i32| -> usize {
            let k = self.vertices.binary_search(&p).expect("vertex");
            k * W + W - 1
        };
        let width = self.vertices.len() * W;
        let mut order: Vec<(i32, i32)> = self.arcs.clone();
        order.sort_by_key(|&(a, b)| (std::cmp::Reverse(col(b) - col(a)), a));
        let mut rows: Vec<Vec<char>> = Vec::new();
        for (k, &(a, b)) in order.iter().enumerate() {
            let mut row = vec![' '; width];
            let (ca, cb) = (col(a), col(b));
            for c in row.iter_mut().take(cb).skip(ca + 1) {
                *c = '-';
            }
            row[ca] = '+';
            row[cb] = '+';
            for &(pa, pb) in &order[..k] {
                row[col(pa)] = '|';
                row[col(pb)] = '|';
            }
            rows.push(row);
        }
        let mut marks = vec![' '; width];
        for &p in &self.vertices {
            marks[col(p)] = if self.arcs.iter().any(|&(a, b)| a == p || b == p) { '|' } else { '.' };
        }
        rows.push(marks);
        let mut out = String::new();
        for row in rows {
            out.push_str(row.iter().collect::<String>().trim_end());
            out.push('\n');
        }
        for &p in &self.vertices {
            let _ = write!(out, "{p:>W$}");
        }
        out.push('\n');
        out
    }
}

impl fmt::Display for LinkPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.arc_list())
    }
}

fn check_disjoint(set: &[Root]) -> Result<()> {
    for (k, a) in set.iter().enumerate() {
        for b in &set[k + 1..] {
            if !is_disjoint(a, b) {
                return Err(Error::OverlappingSupports(a.to_string(), b.to_string()));
            }
        }
    }
    Ok(())
}

/// Shape counts of a disjoint set: `a` roots `e_j - e_i`, `d` roots `e_k` or
/// `2e_k`, `f` roots `e_j + e_i`. The arc count is `2a + d + 2f` outside
/// type A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SetShapeCounts {
    pub a: usize,
    pub d: usize,
    pub f: usize,
}

impl SetShapeCounts {
    pub fn of(set: &[Root]) -> Result<Self> {
        let mut counts = SetShapeCounts::default();
        for r in set {
            match r.shape() {
                Some((1, Shape::Diff { .. })) => counts.a += 1,
                Some((1, Shape::Short(_) | Shape::Long(_))) => counts.d += 1,
                Some((1, Shape::Sum { .. })) => counts.f += 1,
                _ => return Err(Error::NotARoot { root: r.to_string(), system: "R+".into() }),
            }
        }
        Ok(counts)
    }

    /// `x(σ) = d + 2f = |S| - 2a`
    pub fn x(&self) -> usize {
        self.d + 2 * self.f
    }
}

/// Replaces a strongly orthogonal set with overlapping supports (such as
/// `{e_n - e_i, e_n + e_i}`) by the disjoint decomposition of `σ_S`.
pub fn normalize(set: &[Root], t: RootSystemType) -> Result<Vec<Root>> {
    if check_disjoint(set).is_ok() {
        let mut out = set.to_vec();
        out.sort();
        return Ok(out);
    }
    for (k, a) in set.iter().enumerate() {
        for b in &set[k + 1..] {
            if !t.is_strongly_orthogonal(a, b) && !is_disjoint(a, b) {
                return Err(Error::NotStronglyOrthogonal(a.to_string(), b.to_string()));
            }
        }
    }
    let sigma = SignedPermutation::reflection_product(t.family(), t.coords(), set)?;
    weyl::disjoint_reflection_decomposition(&sigma)
}

struct Stats {
    arcs: i64,
    b: i64,
    c: i64,
    r: i64,
    counts: SetShapeCounts,
}

fn stats(set: &[Root], t: RootSystemType) -> Result<Stats> {
    let set = normalize(set, t)?;
    let p = LinkPattern::of_set(&set, t)?;
    Ok(Stats {
        arcs: p.num_arcs() as i64,
        b: p.bridges() as i64,
        c: p.crossings() as i64,
        r: p.right_arcs() as i64,
        counts: SetShapeCounts::of(&set)?,
    })
}

fn require(t: RootSystemType, allowed: &[Family]) -> Result<()> {
    if allowed.contains(&t.family()) {
        Ok(())
    } else {
        Err(Error::FamilyMismatch(format!("formula does not apply to {t}")))
    }
}

/// `2|S|² - |S| + 2b - 4r - 2c` for `S ⊂ R⁺(A)`.
pub fn length_formula_a(set: &[Root], t: RootSystemType) -> Result<i64> {
    require(t, &[Family::A])?;
    let s = stats(set, t)?;
    Ok(2 * s.arcs * s.arcs - s.arcs + 2 * s.b - 4 * s.r - 2 * s.c)
}

/// `|S|² - a + b - c - 2r` for `σ_S` in `W(C_n) = W(B_n)`.
pub fn length_formula_c(set: &[Root], t: RootSystemType) -> Result<i64> {
    require(t, &[Family::B, Family::C])?;
    let s = stats(set, t)?;
    Ok(s.arcs * s.arcs - s.counts.a as i64 + s.b - s.c - 2 * s.r)
}

/// `|S|² - |S| + a + b - c - 2r` for `σ_S` in `W(D_n)`; the set may use the
/// short roots `e_k` (an even number of them).
pub fn length_formula_d(set: &[Root], t: RootSystemType) -> Result<i64> {
    require(t, &[Family::D])?;
    let s = stats(set, t)?;
    if s.counts.d % 2 == 1 {
        return Err(Error::FamilyMismatch("odd number of sign changes, not in W(D)".into()));
    }
    Ok(s.arcs * s.arcs - s.arcs + s.counts.a as i64 + s.b - s.c - 2 * s.r)
}

/// Brute-force ingredients of the reductions `ℓ_C = (ℓ_{S_2n} + x) / 2` and
/// `ℓ_D = ℓ_B - x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalvingCheck {
    pub counts: SetShapeCounts,
    pub arcs: i64,
    pub length_c: i64,
    pub length_doubled: i64,
    /// `2|S|² - |S| + 2b - 4r - 2c` evaluated on the symmetric pattern.
    pub doubled_formula: i64,
    /// Positive long roots `2e_s` sent negative.
    pub x_long: i64,
    /// `ℓ_D` and the count of short roots sent negative, when `σ ∈ W(D_n)`.
    pub d_side: Option<(i64, i64)>,
}

impl HalvingCheck {
    pub fn compute(set: &[Root], t: RootSystemType) -> Result<Self> {
        require(t, &[Family::B, Family::C, Family::D])?;
        let n = t.coords();
        let set = normalize(set, t)?;
        let s = stats(&set, t)?;
        let sigma = SignedPermutation::reflection_product(Family::C, n, &set)?;
        let c = RootSystemType::new(Family::C, n)?;
        let length_c = weyl::length(&sigma, c)? as i64;
        let a2n = RootSystemType::new(Family::A, 2 * n - 1)?;
        let length_doubled = weyl::length(&sigma.to_doubled(), a2n)? as i64;
        let x_long = (1..=n)
            .filter(|&i| sigma.act_on_root(&Root::long(n, i)).is_negative())
            .count() as i64;
        let d_side = if sigma.sign_changes() % 2 == 0 && n >= 2 {
            let d = RootSystemType::new(Family::D, n)?;
            let sigma_d = SignedPermutation::reflection_product(Family::D, n, &set)?;
            let x_short = (1..=n)
                .filter(|&i| sigma.act_on_root(&Root::short(n, i)).is_negative())
                .count() as i64;
            Some((weyl::length(&sigma_d, d)? as i64, x_short))
        } else {
            None
        };
        Ok(HalvingCheck {
            counts: s.counts,
            arcs: s.arcs,
            length_c,
            length_doubled,
            doubled_formula: 2 * s.arcs * s.arcs - s.arcs + 2 * s.b - 4 * s.r - 2 * s.c,
            x_long,
            d_side,
        })
    }

    pub fn holds(&self) -> bool {
        let x = self.arcs - 2 * self.counts.a as i64;
        let c_ok = 2 * self.length_c == self.length_doubled + self.x_long
            && self.x_long == x
            && self.doubled_formula == self.length_doubled;
        let d_ok = self
            .d_side
            .is_none_or(|(length_d, x_short)| x_short == x && length_d == self.length_c - x_short);
        c_ok && d_ok
    }
}

/// True iff both reductions hold for `S`, with every length computed by
/// counting inversions.
pub fn halving_identity_check(set: &[Root], t: RootSystemType) -> Result<bool> {
    Ok(HalvingCheck::compute(set, t)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(f: Family, n: usize) -> RootSystemType {
        RootSystemType::new(f, n).unwrap()
    }

    fn roots(t: RootSystemType, s: &[&str]) -> Vec<Root> {
        s.iter().map(|r| Root::parse(r, t.coords()).unwrap()).collect()
    }

    fn worked_example_set() -> (RootSystemType, Vec<Root>) {
        let t = ty(Family::C, 6);
        (t, roots(t, &["e2-e1", "e6+e3", "2e4"]))
    }

    #[test]
    fn worked_example_statistics() {
        let (t, s) = worked_example_set();
        let p = LinkPattern::of_set(&s, t).unwrap();
        assert_eq!(p.num_arcs(), 5);
        assert_eq!(p.crossings(), 3);
        assert_eq!(p.right_arcs(), 1);
        assert_eq!(p.bridges(), 2);
        assert!(p.is_symmetric());
        assert_eq!(p.arc_list(), "(-6,3)(-4,4)(-3,6)(-2,-1)(1,2)");
        assert_eq!(length_formula_c(&s, t).unwrap(), 21);
        let sigma = weyl::involution_of_set(&s, t).unwrap();
        assert_eq!(weyl::length(&sigma, t).unwrap(), 21);
    }

    #[test]
    fn small_statistics() {
        let t = ty(Family::A, 3);
        let empty = LinkPattern::of_set(&[], t).unwrap();
        assert_eq!(empty.num_arcs(), 0);
        let nested = LinkPattern::new((1..=4).collect(), [(1, 4), (2, 3)]).unwrap();
        assert_eq!(nested.crossings(), 0);
        let crossing = LinkPattern::new((1..=4).collect(), [(1, 3), (2, 4)]).unwrap();
        assert_eq!(crossing.crossings(), 1);
        let side = LinkPattern::new((1..=4).collect(), [(1, 2), (3, 4)]).unwrap();
        assert_eq!(side.right_arcs(), 1);
        let single = LinkPattern::new((1..=4).collect(), [(1, 2)]).unwrap();
        assert_eq!(single.right_arcs(), 0);
        assert_eq!(nested.bridges(), 0);
        for n in 2..=8 {
            let p = LinkPattern::new((1..=n).collect(), [(1, n)]).unwrap();
            assert_eq!(p.bridges(), n as usize - 2);
        }
        let b2 = ty(Family::B, 2);
        let p = LinkPattern::of_set(&roots(b2, &["e1", "e2"]), b2).unwrap();
        assert_eq!(p.arcs(), &[(-2, 2), (-1, 1)]);
        assert!(LinkPattern::of_set(&roots(b2, &["e1", "e2+e1"]), b2).is_err());
    }

    #[test]
    fn formula_a_examples() {
        for n in 2..=8 {
            let t = ty(Family::A, n - 1);
            assert_eq!(length_formula_a(&[Root::diff(n, n, 1)], t).unwrap(), 2 * n as i64 - 3);
        }
        let t = ty(Family::A, 3);
        assert_eq!(length_formula_a(&roots(t, &["e2-e1", "e4-e3"]), t).unwrap(), 2);
        assert_eq!(length_formula_a(&roots(t, &["e4-e1", "e3-e2"]), t).unwrap(), 6);
    }

    #[test]
    fn formula_c_and_d_examples() {
        let c1 = ty(Family::C, 1);
        assert_eq!(length_formula_c(&[Root::long(1, 1)], c1).unwrap(), 1);
        let c2 = ty(Family::C, 2);
        assert_eq!(length_formula_c(&[Root::sum(2, 2, 1)], c2).unwrap(), 3);
        let d2 = ty(Family::D, 2);
        assert_eq!(length_formula_d(&roots(d2, &["e1", "e2"]), d2).unwrap(), 2);
        assert_eq!(length_formula_d(&roots(d2, &["e2-e1"]), d2).unwrap(), 1);
        for n in 2..=6 {
            let d = ty(Family::D, n);
            let s = [Root::short(n, n - 1), Root::short(n, n)];
            assert_eq!(length_formula_d(&s, d).unwrap(), 4 * n as i64 - 6);
            let sigma = SignedPermutation::reflection_product(Family::D, n, &s).unwrap();
            assert_eq!(weyl::length(&sigma, d).unwrap(), 4 * n - 6);
        }
        assert!(length_formula_d(&[Root::short(3, 1)], ty(Family::D, 3)).is_err());
    }

    #[test]
    fn overlapping_sets_are_normalized() {
        let b = ty(Family::B, 4);
        let pair = roots(b, &["e4-e2", "e4+e2"]);
        let shorts = roots(b, &["e2", "e4"]);
        assert_eq!(length_formula_c(&pair, b).unwrap(), length_formula_c(&shorts, b).unwrap());
        assert!(length_formula_c(&roots(b, &["e4-e2", "e4-e1"]), b).is_err());
    }

    #[test]
    fn halving_examples() {
        let c1 = ty(Family::C, 1);
        let h = HalvingCheck::compute(&[Root::long(1, 1)], c1).unwrap();
        assert_eq!((h.length_c, h.length_doubled, h.x_long), (1, 1, 1));
        assert!(h.holds());
        let c2 = ty(Family::C, 2);
        let h = HalvingCheck::compute(&[Root::diff(2, 2, 1)], c2).unwrap();
        assert_eq!(h.x_long, 0);
        assert_eq!(2 * h.length_c, h.length_doubled);
        assert!(h.holds());
        let d2 = ty(Family::D, 2);
        let h = HalvingCheck::compute(&roots(d2, &["e1", "e2"]), d2).unwrap();
        assert_eq!(h.length_c, 4);
        assert_eq!(h.d_side, Some((2, 2)));
        assert!(halving_identity_check(&roots(d2, &["e1", "e2"]), d2).unwrap());
    }

    #[test]
    fn doubled_length_uses_twice_squared_arc_count() {
        // |S|² - |S| + 2b - 4r - 2c would give 0 for s_{2e_1} in C_1, but the
        // doubled permutation is a transposition of length 1.
        let c1 = ty(Family::C, 1);
        let h = HalvingCheck::compute(&[Root::long(1, 1)], c1).unwrap();
        assert_eq!(h.length_doubled, 1);
        assert_eq!(h.doubled_formula, 1);
        assert_ne!(h.arcs * h.arcs - h.arcs, h.length_doubled);
    }

    #[test]
    fn ascii_rendering() {
        let t = ty(Family::C, 2);
        let p = LinkPattern::of_set(&[Root::sum(2, 2, 1)], t).unwrap();
        let art = p.render_ascii();
        assert!(art.ends_with("  -2  -1   1   2\n"), "{art}");
        assert_eq!(art.lines().count(), 4);
    }
}
