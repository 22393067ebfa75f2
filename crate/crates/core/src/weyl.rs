//! Weyl groups of types A–D as (signed) permutations.
//!
//! An element stores `w(1), …, w(N)`; values on negative points follow from
//! `w(-i) = -w(i)`. Type A elements live in the same container with no sign
//! changes, and `W(D_n)` elements carry an even number of sign changes.
//! The action on roots extends `w(e_i) = sign(w(i)) e_|w(i)|` linearly.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::roots::{is_disjoint, Family, NilradicalId, Root, RootSystemType, Shape};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    family: Family,
    images: Vec<i32>,
}

impl SignedPermutation {
    pub fn identity(t: RootSystemType) -> Self {
        SignedPermutation {
            family: t.family(),
            images: (1..=t.coords() as i32).collect(),
        }
    }

    pub fn from_images(family: Family, images: Vec<i32>) -> Result<Self> {
        let n = images.len() as i32;
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v == 0 || v.abs() > n || seen[(v.abs() - 1) as usize] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[(v.abs() - 1) as usize] = true;
        }
        let w = SignedPermutation { family, images };
        match family {
            Family::A if w.sign_changes() > 0 => {
                Err(Error::InvalidPermutation(format!("{w} has sign changes in type A")))
            }
            Family::D if w.sign_changes() % 2 == 1 => {
                Err(Error::InvalidPermutation(format!("{w} has an odd number of sign changes")))
            }
            _ => Ok(w),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn images(&self) -> &[i32] {
        &self.images
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// `w(p)` for `p ∈ {±1, …, ±N}`.
    pub fn apply(&self, p: i32) -> i32 {
        if p > 0 {
            self.images[(p - 1) as usize]
        } else {
            -self.images[(-p - 1) as usize]
        }
    }

    pub fn sign_changes(&self) -> usize {
        self.images.iter().filter(|&&v| v < 0).count()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i as i32 + 1)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.size(), other.size(), "size mismatch in composition");
        SignedPermutation {
            family: self.family,
            images: other.images.iter().map(|&p| self.apply(p)).collect(),
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut images = vec![0; self.size()];
        for (i, &v) in self.images.iter().enumerate() {
            let p = i as i32 + 1;
            images[(v.abs() - 1) as usize] = p * v.signum();
        }
        SignedPermutation { family: self.family, images }
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    pub fn act_on_root(&self, a: &Root) -> Root {
        let mut out = vec![0; a.dim()];
        for (i, c) in a.terms() {
            let img = self.apply(i as i32);
            out[(img.abs() - 1) as usize] += c * img.signum();
        }
        Root::from_coefficients(out)
    }

    /// Sign of `w(a)` computed without allocating.
    fn image_sign(&self, a: &Root) -> i32 {
        let mut top = 0usize;
        let mut sign = 0;
        for (i, c) in a.terms() {
            let img = self.apply(i as i32);
            let idx = img.unsigned_abs() as usize;
            if idx > top {
                top = idx;
                sign = (c * img.signum()).signum();
            }
        }
        sign
    }

    /// Product of the reflections in `roots`, without checking membership in
    /// any particular root system.
    pub fn reflection_product(family: Family, size: usize, roots: &[Root]) -> Result<Self> {
        let mut w = SignedPermutation {
            family,
            images: (1..=size as i32).collect(),
        };
        for r in roots {
            if r.dim() != size {
                return Err(Error::SizeMismatch(r.dim(), size));
            }
            w = w.compose(&raw_reflection(family, r)?);
        }
        Ok(w)
    }

    /// Image in `S_{2n}` under the doubled-domain dictionary `i ↦ n + i`,
    /// `-i ↦ n + 1 - i`.
    pub fn to_doubled(&self) -> SignedPermutation {
        let n = self.size() as i32;
        let idx = |p: i32| if p > 0 { n + p } else { n + 1 + p };
        let mut images = vec![0; 2 * self.size()];
        for p in (-n..=n).filter(|&p| p != 0) {
            images[(idx(p) - 1) as usize] = idx(self.apply(p));
        }
        SignedPermutation { family: Family::A, images }
    }

    fn check_against(&self, t: RootSystemType) -> Result<()> {
        if self.size() != t.coords() {
            return Err(Error::FamilyMismatch(format!("{self} has size {} but {t} needs {}", self.size(), t.coords())));
        }
        if (self.family == Family::A) != (t.family() == Family::A) {
            return Err(Error::FamilyMismatch(format!("{self} ({}) queried in {t}", self.family)));
        }
        if t.family() == Family::D && self.sign_changes() % 2 == 1 {
            return Err(Error::FamilyMismatch(format!("{self} has an odd number of sign changes, not in W({t})")));
        }
        Ok(())
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self)
    }
}

fn raw_reflection(family: Family, a: &Root) -> Result<SignedPermutation> {
    let (_, shape) = a.shape().ok_or_else(|| Error::NotARoot {
        root: a.to_string(),
        system: "any classical system".into(),
    })?;
    let mut images: Vec<i32> = (1..=a.dim() as i32).collect();
    match shape {
        Shape::Diff { hi, lo } => images.swap(hi - 1, lo - 1),
        Shape::Sum { hi, lo } => {
            images[hi - 1] = -(lo as i32);
            images[lo - 1] = -(hi as i32);
        }
        Shape::Short(i) | Shape::Long(i) => images[i - 1] = -(i as i32),
    }
    Ok(SignedPermutation { family, images })
}

/// The reflection `s_a` of `W(t)`.
pub fn reflection(a: &Root, t: RootSystemType) -> Result<SignedPermutation> {
    t.check_root(a)?;
    raw_reflection(t.family(), a)
}

/// Number of positive roots of `t` sent to negative roots by `w`.
pub fn length(w: &SignedPermutation, t: RootSystemType) -> Result<usize> {
    w.check_against(t)?;
    Ok(t.positive_roots().iter().filter(|a| w.image_sign(a) < 0).count())
}

/// `σ_S`, the product of the reflections of a strongly orthogonal set.
///
/// Pairwise disjoint sets such as `{e_i, e_j}` in type B are accepted as
/// well: their reflections commute, so the product is still an involution.
pub fn involution_of_set(set: &[Root], t: RootSystemType) -> Result<SignedPermutation> {
    for a in set {
        t.check_root(a)?;
    }
    for (k, a) in set.iter().enumerate() {
        for b in &set[k + 1..] {
            if !t.is_strongly_orthogonal(a, b) && !is_disjoint(a, b) {
                return Err(Error::NotStronglyOrthogonal(a.to_string(), b.to_string()));
            }
        }
    }
    SignedPermutation::reflection_product(t.family(), t.coords(), set)
}

/// The unique set of pairwise disjoint positive roots whose reflections
/// multiply to the involution `s`, sorted. Sign flips `i ↦ -i` come out as
/// `2e_i` for type C elements and `e_i` otherwise.
pub fn disjoint_reflection_decomposition(s: &SignedPermutation) -> Result<Vec<Root>> {
    if !s.is_involution() {
        return Err(Error::NotInvolution(s.to_string()));
    }
    let n = s.size();
    let mut out = Vec::new();
    for i in 1..=n {
        let w = s.apply(i as i32);
        let j = w.unsigned_abs() as usize;
        if w == i as i32 {
            continue;
        }
        if w == -(i as i32) {
            out.push(if s.family() == Family::C { Root::long(n, i) } else { Root::short(n, i) });
        } else if j > i {
            out.push(if w > 0 { Root::diff(n, j, i) } else { Root::sum(n, j, i) });
        }
    }
    out.sort();
    Ok(out)
}

/// Longest element `ŵ` of the Weyl group of the Levi factor of the maximal
/// parabolic defining `id`.
pub fn longest_parabolic(id: &NilradicalId) -> SignedPermutation {
    let t = id.root_system();
    let n = t.coords();
    let family = t.family();
    let alpha = id.simple_root();
    let images: Vec<i32> = match family {
        Family::A => {
            // [k, …, 1, N, …, k+1]
            let Some((_, Shape::Diff { lo: k, .. })) = alpha.shape() else {
                unreachable!("type A simple roots are differences")
            };
            (1..=k as i32).rev().chain(((k as i32 + 1)..=n as i32).rev()).collect()
        }
        Family::C => (1..=n as i32).rev().collect(),
        Family::B => (1..=n as i32).map(|i| if (i as usize) < n { -i } else { i }).collect(),
        Family::D => {
            let last = Root::diff(n, n, n - 1);
            if *alpha == Root::sum(n, 2, 1) {
                (1..=n as i32).rev().collect()
            } else if *alpha == Root::diff(n, 2, 1) && *alpha != last {
                // The reversal conjugated by the sign flip of e_1.
                let rev: Vec<i32> = (1..=n as i32).rev().collect();
                let mut img = rev;
                img[0] = -(n as i32);
                img[n - 1] = -1;
                img
            } else if n % 2 == 1 {
                (1..=n as i32).map(|i| if (i as usize) < n { -i } else { i }).collect()
            } else {
                (1..=n as i32)
                    .map(|i| if i >= 2 && (i as usize) < n { -i } else { i })
                    .collect()
            }
        }
    };
    SignedPermutation { family, images }
}

/// `w ∘ s ∘ w⁻¹` (equal to `w ∘ s ∘ w` when `w` is an involution).
pub fn conjugate_by(w: &SignedPermutation, s: &SignedPermutation) -> Result<SignedPermutation> {
    if w.size() != s.size() || (w.family == Family::A) != (s.family == Family::A) {
        return Err(Error::FamilyMismatch(format!("cannot conjugate {s:?} by {w:?}")));
    }
    let mut out = w.compose(s).compose(&w.inverse());
    out.family = s.family;
    Ok(out)
}

/// Bruhat order test by descent recursion.
///
/// If `s` is a left descent of `w`, then `u ≤ w` iff `su ≤ sw` when `s` is
/// also a left descent of `u`, and iff `u ≤ sw` otherwise.
pub fn bruhat_leq(u: &SignedPermutation, w: &SignedPermutation, t: RootSystemType) -> Result<bool> {
    u.check_against(t)?;
    w.check_against(t)?;
    let simple: Vec<(Root, SignedPermutation)> = t
        .simple_roots()
        .into_iter()
        .map(|a| {
            let s = raw_reflection(t.family(), &a).expect("simple root");
            (a, s)
        })
        .collect();
    let mut u = u.clone();
    let mut w = w.clone();
    loop {
        let w_inv = w.inverse();
        let Some((alpha, s)) = simple.iter().find(|(a, _)| w_inv.image_sign(a) < 0) else {
            return Ok(u.is_identity());
        };
        if u.inverse().image_sign(alpha) < 0 {
            u = s.compose(&u);
        }
        w = s.compose(&w);
    }
}

/// All elements of `W(t)`, in lexicographic order of their image vectors.
pub fn group_elements(t: RootSystemType) -> Vec<SignedPermutation> {
    fn perms(n: usize) -> Vec<Vec<i32>> {
        fn rec(prefix: &mut Vec<i32>, used: &mut [bool], out: &mut Vec<Vec<i32>>) {
            if prefix.len() == used.len() {
                out.push(prefix.clone());
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    prefix.push(v as i32 + 1);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
    let n = t.coords();
    let mut out = Vec::new();
    for p in perms(n) {
        if t.family() == Family::A {
            out.push(SignedPermutation { family: Family::A, images: p });
            continue;
        }
        for mask in 0u32..(1 << n) {
            if t.family() == Family::D && mask.count_ones() % 2 == 1 {
                continue;
            }
            let images = p
                .iter()
                .enumerate()
                .map(|(k, &v)| if mask >> k & 1 == 1 { -v } else { v })
                .collect();
            out.push(SignedPermutation { family: t.family(), images });
        }
    }
    out.sort();
    out
}

/// Involutions of `W(t)`.
pub fn involutions(t: RootSystemType) -> Vec<SignedPermutation> {
    group_elements(t).into_iter().filter(|w| w.is_involution()).collect()
}

/// Bruhat order by exhaustive cover graph and transitive closure: `v ⋖ vt`
/// for reflections `t` with `ℓ(vt) = ℓ(v) + 1`.
///
/// Memory is quadratic in `|W|`; intended for small ranks only.
pub struct BruhatOracle {
    ty: RootSystemType,
    elements: Vec<SignedPermutation>,
    index: HashMap<SignedPermutation, usize>,
    below: Vec<Vec<u64>>,
}

impl BruhatOracle {
    pub fn new(t: RootSystemType) -> Self {
        let reflections: Vec<SignedPermutation> = t
            .positive_roots()
            .iter()
            .map(|a| raw_reflection(t.family(), a).expect("root"))
            .collect();
        let mut elements = group_elements(t);
        let lengths: HashMap<SignedPermutation, usize> = elements
            .iter()
            .map(|w| (w.clone(), length(w, t).expect("group element")))
            .collect();
        elements.sort_by_key(|w| (lengths[w], w.clone()));
        let index: HashMap<SignedPermutation, usize> =
            elements.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        let words = elements.len().div_ceil(64);
        let mut below = vec![vec![0u64; words]; elements.len()];
        for (k, row) in below.iter_mut().enumerate() {
            row[k / 64] |= 1 << (k % 64);
        }
        for k in 0..elements.len() {
            let v = &elements[k];
            for r in &reflections {
                let u = v.compose(r);
                if lengths[&u] == lengths[v] + 1 {
                    let j = index[&u];
                    let (lo, hi) = below.split_at_mut(j);
                    for (dst, src) in hi[0].iter_mut().zip(&lo[k]) {
                        *dst |= *src;
                    }
                }
            }
        }
        BruhatOracle { ty: t, elements, index, below }
    }

    pub fn elements(&self) -> &[SignedPermutation] {
        &self.elements
    }

    pub fn root_system(&self) -> RootSystemType {
        self.ty
    }

    pub fn leq(&self, u: &SignedPermutation, w: &SignedPermutation) -> Result<bool> {
        let lookup = |x: &SignedPermutation| {
            self.index
                .get(x)
                .copied()
                .ok_or_else(|| Error::FamilyMismatch(format!("{x:?} is not an element of W({})", self.ty)))
        };
        let (i, j) = (lookup(u)?, lookup(w)?);
        Ok(self.below[j][i / 64] >> (i % 64) & 1 == 1)
    }
}
