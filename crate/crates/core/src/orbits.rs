//! B-orbit labels in abelian nilradicals and their closure orders.
//!
//! A label is a strongly orthogonal set `S ⊂ R̄⁺_α`; the orbit is `B.Σ_{β∈S} X_β`.
//! Two orders are compared on labels: the geometric closure order, and the
//! order predicted by Bruhat comparison of `ŵσ_Sŵ`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::json;

use crate::error::{Error, Result};
use crate::linkpattern::{self, LinkPattern};
use crate::roots::{Family, NilradicalId, Root, RootSystemType, Shape};
use crate::weyl::{self, SignedPermutation};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrbitLabel {
    nilradical: NilradicalId,
    set: Vec<Root>,
    order_key: Vec<usize>,
    sigma: SignedPermutation,
    conjugate: SignedPermutation,
}

/// Positions of `set` in [`RootSystemType::positive_roots`], sorted; roots
/// outside `R⁺` sort last.
fn order_key(t: RootSystemType, set: &[Root]) -> Vec<usize> {
    let order = t.positive_roots();
    let mut key: Vec<usize> =
        set.iter().map(|r| order.iter().position(|x| x == r).unwrap_or(usize::MAX)).collect();
    key.sort_unstable();
    key
}

impl OrbitLabel {
    pub fn new(id: &NilradicalId, mut set: Vec<Root>) -> Result<Self> {
        let t = id.root_system();
        let allowed = id.positive_roots();
        if let Some(r) = set.iter().find(|r| !allowed.contains(r)) {
            return Err(Error::OutsideNilradical { root: r.to_string(), nilradical: id.to_string() });
        }
        let order = t.positive_roots();
        set.sort_by_key(|r| order.iter().position(|x| x == r));
        if let Some(w) = set.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Integrity(format!("duplicate root {}", w[0])));
        }
        for (k, a) in set.iter().enumerate() {
            for b in &set[k + 1..] {
                if !t.is_strongly_orthogonal(a, b) {
                    return Err(Error::NotStronglyOrthogonal(a.to_string(), b.to_string()));
                }
            }
        }
        let sigma = SignedPermutation::reflection_product(t.family(), t.coords(), &set)?;
        let conjugate = weyl::conjugate_by(&weyl::longest_parabolic(id), &sigma)?;
        let order_key = order_key(t, &set);
        Ok(OrbitLabel { nilradical: id.clone(), set, order_key, sigma, conjugate })
    }

    /// Accepts `e3-e1,e3+e1`, optionally in braces; `""`, `{}` and `∅` are
    /// the zero orbit.
    pub fn parse(id: &NilradicalId, input: &str) -> Result<Self> {
        let s = input.trim();
        let body = s.strip_prefix('{').and_then(|x| x.strip_suffix('}')).unwrap_or(s).trim();
        if body.is_empty() || body == "∅" {
            return OrbitLabel::new(id, Vec::new());
        }
        let t = id.root_system();
        let set = body.split(',').map(|r| t.parse_root(r.trim())).collect::<Result<Vec<_>>>()?;
        OrbitLabel::new(id, set)
    }

    pub fn nilradical(&self) -> &NilradicalId {
        &self.nilradical
    }

    pub fn root_system(&self) -> RootSystemType {
        self.nilradical.root_system()
    }

    /// The roots of `S`, in positive-root order.
    pub fn roots(&self) -> &[Root] {
        &self.set
    }

    /// `#(S)`
    pub fn cardinality(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// `σ_S`
    pub fn sigma(&self) -> &SignedPermutation {
        &self.sigma
    }

    /// `ŵσ_Sŵ`
    pub fn conjugate(&self) -> &SignedPermutation {
        &self.conjugate
    }

    /// `ℓ(σ_S)`
    pub fn length(&self) -> usize {
        weyl::length(&self.sigma, self.root_system()).expect("label involution")
    }

    /// `ℓ(ŵσ_Sŵ)`
    pub fn conjugate_length(&self) -> usize {
        weyl::length(&self.conjugate, self.root_system()).expect("label involution")
    }

    /// Link pattern of the disjoint decomposition of `σ_S`.
    pub fn link_pattern(&self) -> LinkPattern {
        let t = self.root_system();
        let set = linkpattern::normalize(&self.set, t).expect("label set");
        LinkPattern::of_set(&set, t).expect("disjoint decomposition")
    }

    /// `|S|`, the number of arcs of the link pattern.
    pub fn arc_count(&self) -> usize {
        self.link_pattern().num_arcs()
    }

    /// Comma-separated sorted roots; empty for the zero orbit.
    pub fn key(&self) -> String {
        self.set.iter().map(Root::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&self.key())
        }
    }
}

impl fmt::Debug for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.nilradical, self.key())
    }
}

impl Serialize for OrbitLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.key())
    }
}

/// All strongly orthogonal subsets of `R̄⁺_α`, the empty set included,
/// sorted by cardinality and then by positive-root order.
pub fn enumerate_orbits(id: &NilradicalId) -> Vec<OrbitLabel> {
    fn rec(t: RootSystemType, roots: &[Root], start: usize, current: &mut Vec<Root>, out: &mut Vec<Vec<Root>>) {
        out.push(current.clone());
        for k in start..roots.len() {
            if current.iter().all(|c| t.is_strongly_orthogonal(c, &roots[k])) {
                current.push(roots[k].clone());
                rec(t, roots, k + 1, current, out);
                current.pop();
            }
        }
    }
    let mut sets = Vec::new();
    rec(id.root_system(), &id.positive_roots(), 0, &mut Vec::new(), &mut sets);
    let mut labels: Vec<OrbitLabel> = sets
        .into_iter()
        .map(|s| OrbitLabel::new(id, s).expect("strongly orthogonal subset"))
        .collect();
    labels.sort_by(|a, b| (a.set.len(), &a.order_key).cmp(&(b.set.len(), &b.order_key)));
    labels
}

fn halve(label: &OrbitLabel, numerator: usize) -> Result<usize> {
    if numerator % 2 == 1 {
        return Err(Error::OddNumerator { label: format!("{label:?}"), numerator });
    }
    Ok(numerator / 2)
}

/// `(ℓ(ŵσ_Sŵ) + #(S)) / 2`
pub fn predicted_dimension(label: &OrbitLabel) -> Result<usize> {
    halve(label, label.conjugate_length() + label.cardinality())
}

/// `(ℓ(σ_S) + #(S)) / 2`, the predicted coadjoint orbit dimension.
pub fn predicted_coadjoint_dimension(label: &OrbitLabel) -> Result<usize> {
    halve(label, label.length() + label.cardinality())
}

fn same_nilradical(x: &OrbitLabel, y: &OrbitLabel) -> Result<()> {
    if x.nilradical != y.nilradical {
        return Err(Error::NilradicalMismatch);
    }
    Ok(())
}

/// `ŵσ_xŵ ≤ ŵσ_yŵ` in the Bruhat order of `W`.
pub fn bruhat_predicted_leq(x: &OrbitLabel, y: &OrbitLabel) -> Result<bool> {
    same_nilradical(x, y)?;
    weyl::bruhat_leq(&x.conjugate, &y.conjugate, x.root_system())
}

/// `σ_x ≤ σ_y`, the predicted coadjoint closure order.
pub fn coadjoint_predicted_leq(x: &OrbitLabel, y: &OrbitLabel) -> Result<bool> {
    same_nilradical(x, y)?;
    weyl::bruhat_leq(&x.sigma, &y.sigma, x.root_system())
}

/// The diagram automorphism of `D_n` exchanging `e_2 - e_1` and `e_2 + e_1`.
pub fn flip_first_coordinate(r: &Root) -> Root {
    let mut c = r.coefficients().to_vec();
    c[0] = -c[0];
    Root::from_coefficients(c)
}

/// Points of `sl_N` for the interval criterion: `n + 1` in type A, `2n`
/// otherwise.
fn sl_points(t: RootSystemType) -> usize {
    match t.family() {
        Family::A => t.coords(),
        _ => 2 * t.coords(),
    }
}

/// Arcs of the `sl_N` image of a set: type A roots directly, otherwise the
/// symmetric link pattern with `i ↦ n + i` and `-i ↦ n + 1 - i`.
fn sl_arcs(roots: &[Root], t: RootSystemType) -> Vec<(usize, usize)> {
    let n = t.coords() as i32;
    let p = LinkPattern::of_set(roots, t).expect("disjoint set");
    if t.family() == Family::A {
        return p.arcs().iter().map(|&(a, b)| (a as usize, b as usize)).collect();
    }
    let idx = |v: i32| (if v > 0 { n + v } else { n + 1 + v }) as usize;
    p.arcs().iter().map(|&(a, b)| (idx(a), idx(b))).collect()
}

/// `|π_{i,j}(lower)| ≤ |π_{i,j}(upper)|` for all `i < j`.
fn interval_leq(lower: &[(usize, usize)], upper: &[(usize, usize)], points: usize) -> bool {
    let count = |arcs: &[(usize, usize)], i: usize, j: usize| {
        arcs.iter().filter(|&&(k, l)| i <= k && l <= j).count()
    };
    (1..points).all(|i| (i + 1..=points).all(|j| count(lower, i, j) <= count(upper, i, j)))
}

/// Whether the nilradical's closure order is given by a relation table.
pub fn uses_relation_table(id: &NilradicalId) -> bool {
    let t = id.root_system();
    let n = t.rank();
    match t.family() {
        Family::B => true,
        Family::D => n >= 3 && *id.simple_root() == Root::diff(n, n, n - 1),
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `B_lower ⊂ closure(B_upper)`
    Below,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// `exp(a Z)` applied to the upper representative, where `Z` is the sum
    /// of the root vectors of `element` up to relative signs, has exactly the
    /// listed support with the listed degrees in `a`. A `vanish` root has a
    /// coefficient `c_0 + c_2 a²` that a suitable nonzero `a` kills.
    Exp {
        element: Vec<Root>,
        support: Vec<(Root, Vec<usize>)>,
        vanish: Option<Root>,
    },
    /// The lower representative is a torus limit of the upper one.
    TorusLimit,
    /// Distinct orbits of equal dimension cannot contain each other.
    EqualDimension,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub lower: Vec<Root>,
    pub upper: Vec<Root>,
    pub relation: Relation,
    pub justification: Justification,
    pub provenance: String,
}

/// Closure relations for `m_{e_n - e_{n-1}}` of `so_{2n+1}` and `so_{2n}`;
/// `None` for nilradicals handled by the interval criterion.
pub fn relation_table(id: &NilradicalId) -> Option<Vec<TableRow>> {
    if !uses_relation_table(id) {
        return None;
    }
    let t = id.root_system();
    let n = t.rank();
    let is_b = t.family() == Family::B;
    let m = |i: usize| Root::diff(n, n, i);
    let p = |i: usize| Root::sum(n, n, i);
    let e = || Root::short(n, n);
    let pair = |i: usize| vec![m(i), p(i)];
    let exp = |element: Vec<Root>, support: Vec<(Root, Vec<usize>)>| Justification::Exp {
        element,
        support,
        vanish: None,
    };
    let mut rows = Vec::new();
    let mut below = |lower: Vec<Root>, upper: Vec<Root>, justification, provenance: &str| {
        rows.push(TableRow {
            lower,
            upper,
            relation: Relation::Below,
            justification,
            provenance: provenance.to_string(),
        });
    };
    for i in 2..n {
        below(
            vec![m(i - 1)],
            vec![m(i)],
            exp(vec![Root::diff(n, i, i - 1)], vec![(m(i), vec![0]), (m(i - 1), vec![1])]),
            "e_n - e_i chain, raised by X_{e_i - e_{i-1}}",
        );
    }
    for i in 1..n.saturating_sub(1) {
        below(
            vec![p(i + 1)],
            vec![p(i)],
            exp(vec![Root::diff(n, i + 1, i)], vec![(p(i), vec![0]), (p(i + 1), vec![1])]),
            "e_n + e_i chain, raised by X_{e_{i+1} - e_i}",
        );
    }
    if is_b && n >= 2 {
        below(
            vec![p(1)],
            vec![m(1)],
            exp(vec![Root::short(n, 1)], vec![(m(1), vec![0]), (e(), vec![1]), (p(1), vec![2])]),
            "e_n + e_1 below e_n - e_1 through the short root e_1",
        );
        below(
            vec![p(1)],
            vec![e()],
            exp(vec![Root::short(n, 1)], vec![(e(), vec![0]), (p(1), vec![1])]),
            "e_n + e_1 below e_n through the short root e_1",
        );
    }
    if !is_b {
        below(
            vec![p(1)],
            vec![m(2)],
            exp(vec![Root::sum(n, 2, 1)], vec![(m(2), vec![0]), (p(1), vec![1])]),
            "e_n + e_1 below e_n - e_2 through X_{e_2 + e_1}",
        );
        below(
            vec![p(2)],
            vec![m(1)],
            exp(vec![Root::sum(n, 2, 1)], vec![(m(1), vec![0]), (p(2), vec![1])]),
            "e_n + e_2 below e_n - e_1 through X_{e_2 + e_1}",
        );
    }
    for j in 2..n {
        for i in 1..j {
            below(
                pair(i),
                pair(j),
                Justification::Exp {
                    element: vec![Root::diff(n, j, i), Root::sum(n, j, i)],
                    support: vec![(m(j), vec![0]), (p(j), vec![0, 2]), (m(i), vec![1]), (p(i), vec![1])],
                    vanish: Some(p(j)),
                },
                "pair labels, raised by X_{e_j - e_i} + X_{e_j + e_i}, e_n + e_j cancelled at a quadratic root",
            );
        }
    }
    if is_b {
        for j in 1..n {
            below(
                vec![e()],
                pair(j),
                Justification::Exp {
                    element: vec![Root::short(n, j)],
                    support: vec![(m(j), vec![0]), (e(), vec![1]), (p(j), vec![0, 2])],
                    vanish: Some(p(j)),
                },
                "e_n below a pair label, e_n + e_j cancelled at a quadratic root",
            );
        }
    }
    for j in 1..n {
        below(vec![m(j)], pair(j), Justification::TorusLimit, "torus limit of a pair label");
    }
    if !is_b {
        below(vec![p(1)], pair(1), Justification::TorusLimit, "torus limit of the pair label at e_1");
        rows.push(TableRow {
            lower: vec![p(1)],
            upper: vec![m(1)],
            relation: Relation::Incomparable,
            justification: Justification::EqualDimension,
            provenance: "e_n + e_1 and e_n - e_1 have equal orbit dimension".to_string(),
        });
    }
    Some(rows)
}

enum Criterion {
    Intervals,
    Table(Vec<Vec<bool>>),
}

/// The geometric closure order on the labels of one nilradical.
pub struct GeometricOrder {
    id: NilradicalId,
    labels: Vec<OrbitLabel>,
    index: HashMap<Vec<usize>, usize>,
    criterion: Criterion,
}

impl GeometricOrder {
    pub fn new(id: &NilradicalId) -> Result<Self> {
        GeometricOrder::with_fault(id, None)
    }

    /// As [`GeometricOrder::new`], with the lower and upper sides of relation
    /// table row `fault` swapped.
    pub fn with_fault(id: &NilradicalId, fault: Option<usize>) -> Result<Self> {
        let labels = enumerate_orbits(id);
        let index: HashMap<Vec<usize>, usize> =
            labels.iter().enumerate().map(|(k, l)| (l.order_key.clone(), k)).collect();
        let criterion = match relation_table(id) {
            Some(mut rows) => {
                if let Some(k) = fault {
                    let len = rows.len();
                    let row = rows
                        .get_mut(k)
                        .ok_or_else(|| Error::Integrity(format!("no table row {k} in {id} ({len} rows)")))?;
                    std::mem::swap(&mut row.lower, &mut row.upper);
                }
                Criterion::Table(table_closure(&labels, &index, &rows)?)
            }
            None if fault.is_some() => {
                return Err(Error::Integrity(format!("{id} has no relation table")));
            }
            None => Criterion::Intervals,
        };
        Ok(GeometricOrder { id: id.clone(), labels, index, criterion })
    }

    pub fn labels(&self) -> &[OrbitLabel] {
        &self.labels
    }

    fn position(&self, x: &OrbitLabel) -> Result<usize> {
        if x.nilradical != self.id {
            return Err(Error::NilradicalMismatch);
        }
        self.index
            .get(&x.order_key)
            .copied()
            .ok_or_else(|| Error::Integrity(format!("unknown label {x:?}")))
    }

    pub fn leq(&self, x: &OrbitLabel, y: &OrbitLabel) -> Result<bool> {
        let (i, j) = (self.position(x)?, self.position(y)?);
        Ok(match &self.criterion {
            Criterion::Table(m) => m[i][j],
            Criterion::Intervals => {
                let (set_x, set_y) = (self.interval_set(x), self.interval_set(y));
                let t = self.id.root_system();
                interval_leq(&sl_arcs(&set_x, t), &sl_arcs(&set_y, t), sl_points(t))
            }
        })
    }

    /// Sets fed to the interval criterion; `m_{e_2 - e_1}` of `D_n` is moved
    /// to `m_{e_2 + e_1}` first.
    fn interval_set(&self, x: &OrbitLabel) -> Vec<Root> {
        let t = self.id.root_system();
        if t.family() == Family::D && *self.id.simple_root() == Root::diff(t.rank(), 2, 1) {
            x.set.iter().map(flip_first_coordinate).collect()
        } else {
            x.set.clone()
        }
    }

    /// `leq[i][j]` for labels in enumeration order.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let ls = &self.labels;
        ls.iter()
            .map(|x| ls.iter().map(|y| self.leq(x, y).expect("own labels")).collect())
            .collect()
    }
}

fn table_closure(
    labels: &[OrbitLabel],
    index: &HashMap<Vec<usize>, usize>,
    rows: &[TableRow],
) -> Result<Vec<Vec<bool>>> {
    let size = labels.len();
    let mut m = vec![vec![false; size]; size];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = true;
    }
    if let Some(&bottom) = index.get(&Vec::new()) {
        m[bottom].iter_mut().for_each(|v| *v = true);
    }
    let t = labels[0].root_system();
    let find = |set: &[Root]| {
        index.get(&order_key(t, set)).copied().ok_or_else(|| {
            let key: Vec<String> = set.iter().map(Root::to_string).collect();
            Error::Integrity(format!("relation table names unknown label {{{}}}", key.join(",")))
        })
    };
    for row in rows {
        let (lo, up) = (find(&row.lower)?, find(&row.upper)?);
        if row.relation == Relation::Below {
            m[lo][up] = true;
        }
    }
    for k in 0..size {
        let via = m[k].clone();
        for row in m.iter_mut().filter(|row| row[k]) {
            row.iter_mut().zip(&via).for_each(|(x, &y)| *x |= y);
        }
    }
    Ok(m)
}

/// `B_x ⊂ closure(B_y)`.
pub fn geometric_leq(x: &OrbitLabel, y: &OrbitLabel) -> Result<bool> {
    same_nilradical(x, y)?;
    GeometricOrder::new(&x.nilradical)?.leq(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    Geometric,
    BruhatPredicted,
    CoadjointPredicted,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Geometric => "geometric",
            OrderKind::BruhatPredicted => "bruhat_predicted",
            OrderKind::CoadjointPredicted => "coadjoint_predicted",
        })
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(OrderKind::Geometric),
            "bruhat_predicted" | "bruhat" => Ok(OrderKind::BruhatPredicted),
            "coadjoint_predicted" | "coadjoint" => Ok(OrderKind::CoadjointPredicted),
            _ => Err(Error::Parse { input: s.to_string(), reason: "unknown order".into() }),
        }
    }
}

/// The relation matrix of `kind` over [`enumerate_orbits`], without
/// validating that it is a partial order.
pub fn order_matrix(id: &NilradicalId, kind: OrderKind, fault: Option<usize>) -> Result<Vec<Vec<bool>>> {
    if kind == OrderKind::Geometric {
        return Ok(GeometricOrder::with_fault(id, fault)?.matrix());
    }
    let labels = enumerate_orbits(id);
    let leq = match kind {
        OrderKind::CoadjointPredicted => coadjoint_predicted_leq,
        _ => bruhat_predicted_leq,
    };
    labels
        .iter()
        .map(|x| labels.iter().map(|y| leq(x, y)).collect())
        .collect()
}

/// Dimensions used to annotate a poset: adjoint predictions for the
/// adjoint orders, coadjoint predictions for the coadjoint order.
pub fn predicted_dimensions(labels: &[OrbitLabel], kind: OrderKind) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| match kind {
            OrderKind::CoadjointPredicted => predicted_coadjoint_dimension(l),
            _ => predicted_dimension(l),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitPoset {
    #[serde(serialize_with = "serialize_display")]
    nilradical: NilradicalId,
    order: OrderKind,
    labels: Vec<OrbitLabel>,
    dims: Vec<usize>,
    #[serde(skip)]
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
}

fn serialize_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Validates `leq` as a partial order and computes its Hasse diagram.
pub fn poset_from_matrix(
    id: &NilradicalId,
    order: OrderKind,
    labels: Vec<OrbitLabel>,
    dims: Vec<usize>,
    leq: Vec<Vec<bool>>,
) -> Result<OrbitPoset> {
    let size = labels.len();
    if leq.len() != size || dims.len() != size {
        return Err(Error::SizeMismatch(leq.len(), size));
    }
    for i in 0..size {
        if !leq[i][i] {
            return Err(Error::Integrity(format!("{} order is not reflexive at {}", order, labels[i])));
        }
        for j in 0..size {
            if i != j && leq[i][j] && leq[j][i] {
                return Err(Error::Integrity(format!(
                    "{order} order is not antisymmetric: {} and {}",
                    labels[i], labels[j]
                )));
            }
            for k in 0..size {
                if leq[i][j] && leq[j][k] && !leq[i][k] {
                    return Err(Error::Integrity(format!(
                        "{order} order is not transitive: {} ≤ {} ≤ {}",
                        labels[i], labels[j], labels[k]
                    )));
                }
            }
        }
    }
    let mut covers = Vec::new();
    for i in 0..size {
        for j in 0..size {
            if i != j
                && leq[i][j]
                && !(0..size).any(|k| k != i && k != j && leq[i][k] && leq[k][j])
            {
                covers.push((i, j));
            }
        }
    }
    Ok(OrbitPoset { nilradical: id.clone(), order, labels, dims, leq, covers })
}

/// Labels, dimensions, relation matrix and Hasse diagram of `kind`.
pub fn build_poset(id: &NilradicalId, kind: OrderKind) -> Result<OrbitPoset> {
    let labels = enumerate_orbits(id);
    let dims = predicted_dimensions(&labels, kind)?;
    let leq = order_matrix(id, kind, None)?;
    poset_from_matrix(id, kind, labels, dims, leq)
}

impl OrbitPoset {
    pub fn nilradical(&self) -> &NilradicalId {
        &self.nilradical
    }

    pub fn order(&self) -> OrderKind {
        self.order
    }

    pub fn labels(&self) -> &[OrbitLabel] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Hasse edges `(lower, upper)` as label indices.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// `{labels, dims, covers}` with covers as pairs of label keys.
    pub fn to_json(&self) -> serde_json::Value {
        let covers: Vec<[String; 2]> = self
            .covers
            .iter()
            .map(|&(i, j)| [self.labels[i].key(), self.labels[j].key()])
            .collect();
        json!({
            "nilradical": self.nilradical.to_string(),
            "order": self.order,
            "labels": self.labels,
            "dims": self.dims,
            "covers": covers,
        })
    }

    fn dot_header(&self, out: &mut String) {
        let _ = writeln!(out, "digraph \"{}\" {{", self.nilradical);
        out.push_str("  rankdir=BT;\n  node [shape=box];\n");
        for (k, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{k} [label=\"{l}\\ndim {}\"];", self.dims[k]);
        }
    }

    /// Hasse diagram in Graphviz DOT, drawn bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        self.dot_header(&mut out);
        for &(i, j) in &self.covers {
            let _ = writeln!(out, "  n{i} -> n{j};");
        }
        out.push_str("}\n");
        out
    }

    /// Union of both Hasse diagrams; covers present in only one poset are
    /// drawn red and dashed. Returns the DOT text and the number of such
    /// disagreement edges.
    pub fn overlay_dot(&self, other: &OrbitPoset) -> Result<(String, usize)> {
        if self.nilradical != other.nilradical || self.labels != other.labels {
            return Err(Error::NilradicalMismatch);
        }
        let mine: BTreeSet<(usize, usize)> = self.covers.iter().copied().collect();
        let theirs: BTreeSet<(usize, usize)> = other.covers.iter().copied().collect();
        let mut out = String::new();
        self.dot_header(&mut out);
        let mut disagreements = 0;
        for &(i, j) in mine.union(&theirs) {
            match (mine.contains(&(i, j)), theirs.contains(&(i, j))) {
                (true, true) => {
                    let _ = writeln!(out, "  n{i} -> n{j};");
                }
                (true, false) => {
                    disagreements += 1;
                    let _ = writeln!(out, "  n{i} -> n{j} [color=red, style=dashed, label=\"{}\"];", self.order);
                }
                _ => {
                    disagreements += 1;
                    let _ = writeln!(out, "  n{i} -> n{j} [color=red, style=dashed, label=\"{}\"];", other.order);
                }
            }
        }
        out.push_str("}\n");
        Ok((out, disagreements))
    }
}

type ArcSet = BTreeSet<(usize, usize)>;

/// One application of moves (1)–(5) to a type A arc set on `points` points.
fn moves(arcs: &ArcSet, points: usize) -> Vec<ArcSet> {
    let used: BTreeSet<usize> = arcs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let fixed: Vec<usize> = (1..=points).filter(|p| !used.contains(p)).collect();
    let replace = |remove: &[(usize, usize)], add: &[(usize, usize)]| {
        let mut s = arcs.clone();
        for r in remove {
            s.remove(r);
        }
        s.extend(add.iter().copied());
        s
    };
    let mut out = Vec::new();
    for &(i, j) in arcs {
        out.push(replace(&[(i, j)], &[]));
        for &k in fixed.iter().filter(|&&k| k > j) {
            out.push(replace(&[(i, j)], &[(i, k)]));
        }
        for &k in fixed.iter().filter(|&&k| k < i) {
            out.push(replace(&[(i, j)], &[(k, j)]));
        }
    }
    for &(i, l) in arcs {
        for &(j, k) in arcs {
            if i < j && k < l {
                out.push(replace(&[(i, l), (j, k)], &[(i, k), (j, l)]));
            }
            if l < j {
                out.push(replace(&[(i, l), (j, k)], &[(i, j), (l, k)]));
            }
        }
    }
    out
}

fn type_a_only(id: &NilradicalId) -> Result<()> {
    if id.root_system().family() != Family::A {
        return Err(Error::FamilyMismatch(format!("elementary moves need type A, got {id}")));
    }
    Ok(())
}

fn arcs_of(label: &OrbitLabel) -> ArcSet {
    sl_arcs(&label.set, label.root_system()).into_iter().collect()
}

fn label_of_arcs(id: &NilradicalId, arcs: &ArcSet) -> Result<OrbitLabel> {
    let n = id.root_system().coords();
    OrbitLabel::new(id, arcs.iter().map(|&(i, j)| Root::diff(n, j, i)).collect())
}

/// Labels obtained from `x` by a single elementary move that stays inside
/// the nilradical, sorted and without repetition.
pub fn elementary_move_closure(x: &OrbitLabel) -> Result<Vec<OrbitLabel>> {
    type_a_only(&x.nilradical)?;
    let points = sl_points(x.root_system());
    let mut out: Vec<OrbitLabel> = moves(&arcs_of(x), points)
        .iter()
        .filter_map(|arcs| label_of_arcs(&x.nilradical, arcs).ok())
        .collect();
    out.sort_by(|a, b| (a.set.len(), &a.order_key).cmp(&(b.set.len(), &b.order_key)));
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveReading {
    /// Every intermediate pattern lies in the nilradical.
    Restricted,
    /// Intermediate patterns range over all of `sl_N`.
    Ambient,
}

/// Reflexive-transitive closure of elementary moves, as `leq[lower][upper]`
/// over [`enumerate_orbits`].
pub fn move_order(id: &NilradicalId, reading: MoveReading) -> Result<Vec<Vec<bool>>> {
    type_a_only(id)?;
    let labels = enumerate_orbits(id);
    let points = sl_points(id.root_system());
    let arcs: Vec<ArcSet> = labels.iter().map(arcs_of).collect();
    let index: HashMap<&ArcSet, usize> = arcs.iter().enumerate().map(|(k, a)| (a, k)).collect();
    let mut leq = vec![vec![false; labels.len()]; labels.len()];
    for (top, start) in arcs.iter().enumerate() {
        let mut seen: BTreeSet<ArcSet> = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(cur) = queue.pop_front() {
            if let Some(&k) = index.get(&cur) {
                leq[k][top] = true;
            }
            for next in moves(&cur, points) {
                let allowed = reading == MoveReading::Ambient || index.contains_key(&next);
                if allowed && !seen.contains(&next) {
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(leq)
}

/// Shape-based sanity check that a label has one of the canonical forms
/// `{e_n}`, `{e_n ± e_i}`, `{e_n - e_i, e_n + e_i}` of the small nilradicals.
pub fn is_canonical_small_form(label: &OrbitLabel) -> bool {
    let n = label.root_system().coords();
    let shapes: Vec<Shape> = label.set.iter().filter_map(|r| r.shape().map(|(_, s)| s)).collect();
    match shapes.as_slice() {
        [] => true,
        [Shape::Short(i)] => *i == n,
        [Shape::Diff { hi, .. } | Shape::Sum { hi, .. }] => *hi == n,
        [Shape::Diff { hi: a, lo: i }, Shape::Sum { hi: b, lo: j }] => *a == n && *b == n && i == j,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(f: Family, n: usize, sel: &str) -> NilradicalId {
        NilradicalId::parse(RootSystemType::new(f, n).unwrap(), sel).unwrap()
    }

    fn keys(labels: &[OrbitLabel]) -> Vec<String> {
        labels.iter().map(OrbitLabel::key).collect()
    }

    #[test]
    fn enumeration_counts() {
        let c2 = id(Family::C, 2, "2e1");
        assert_eq!(keys(&enumerate_orbits(&c2)), ["", "2e1", "e2+e1", "2e2", "2e1,2e2"]);
        let b3 = enumerate_orbits(&id(Family::B, 3, "e3-e2"));
        assert_eq!(
            keys(&b3),
            ["", "e3-e1", "e3+e1", "e3-e2", "e3+e2", "e3", "e3-e1,e3+e1", "e3-e2,e3+e2"]
        );
        for n in 3..=6 {
            let d = id(Family::D, n, &format!("e{n}-e{}", n - 1));
            let labels = enumerate_orbits(&d);
            assert_eq!(labels.len(), 3 * (n - 1) + 1);
            assert!(labels.iter().all(is_canonical_small_form));
        }
        assert_eq!(enumerate_orbits(&id(Family::C, 5, "2e1")).len(), 142);
        assert_eq!(enumerate_orbits(&id(Family::A, 6, "e4-e3")).len(), 73);
    }

    #[test]
    fn distinct_labels_have_distinct_involutions() {
        for (f, n, sel) in [(Family::B, 4, "e4-e3"), (Family::D, 4, "e4-e3"), (Family::C, 3, "2e1")] {
            let labels = enumerate_orbits(&id(f, n, sel));
            let sigmas: BTreeSet<&SignedPermutation> = labels.iter().map(|l| l.sigma()).collect();
            assert_eq!(sigmas.len(), labels.len());
        }
    }

    #[test]
    fn label_parsing_and_validation() {
        let b3 = id(Family::B, 3, "e3-e2");
        let l = OrbitLabel::parse(&b3, "{e3+e1, e3-e1}").unwrap();
        assert_eq!(l.key(), "e3-e1,e3+e1");
        assert_eq!(l.cardinality(), 2);
        assert_eq!(l.arc_count(), 2);
        assert_eq!(OrbitLabel::parse(&b3, "∅").unwrap().to_string(), "∅");
        assert!(matches!(OrbitLabel::parse(&b3, "e2"), Err(Error::OutsideNilradical { .. })));
        assert!(matches!(OrbitLabel::parse(&b3, "e3,e3-e1"), Err(Error::NotStronglyOrthogonal(..))));
        let other = OrbitLabel::parse(&id(Family::C, 3, "2e1"), "2e1").unwrap();
        assert_eq!(bruhat_predicted_leq(&l, &other), Err(Error::NilradicalMismatch));
    }

    #[test]
    fn dimension_predictions() {
        for n in 2..=5 {
            let b = id(Family::B, n, &format!("e{n}-e{}", n - 1));
            let dense = OrbitLabel::parse(&b, &format!("e{n}-e{0},e{n}+e{0}", n - 1)).unwrap();
            assert_eq!(dense.conjugate_length(), 4 * n - 4);
            assert_eq!(predicted_dimension(&dense).unwrap(), 2 * n - 1);
            assert_eq!(predicted_dimension(&OrbitLabel::parse(&b, "").unwrap()).unwrap(), 0);
        }
        for n in 3..=6 {
            let d = id(Family::D, n, &format!("e{n}-e{}", n - 1));
            for s in [format!("e{n}+e1"), format!("e{n}-e1")] {
                assert_eq!(predicted_dimension(&OrbitLabel::parse(&d, &s).unwrap()).unwrap(), n - 1);
            }
        }
        let c2 = id(Family::C, 2, "2e1");
        assert_eq!(predicted_coadjoint_dimension(&OrbitLabel::parse(&c2, "e2+e1").unwrap()).unwrap(), 2);
        assert_eq!(predicted_coadjoint_dimension(&OrbitLabel::parse(&c2, "2e1").unwrap()).unwrap(), 1);
    }

    #[test]
    fn bruhat_predicted_examples() {
        for n in 3..=5 {
            let b = id(Family::B, n, &format!("e{n}-e{}", n - 1));
            let labels = enumerate_orbits(&b);
            for l in &labels {
                assert!(bruhat_predicted_leq(l, l).unwrap());
            }
            for j in 2..n {
                for i in 1..j {
                    let lo = OrbitLabel::parse(&b, &format!("e{n}-e{i},e{n}+e{i}")).unwrap();
                    let up = OrbitLabel::parse(&b, &format!("e{n}-e{j},e{n}+e{j}")).unwrap();
                    assert!(bruhat_predicted_leq(&lo, &up).unwrap());
                }
            }
            let d = id(Family::D, n, &format!("e{n}-e{}", n - 1));
            let x = OrbitLabel::parse(&d, &format!("e{n}+e1")).unwrap();
            let y = OrbitLabel::parse(&d, &format!("e{n}-e1")).unwrap();
            assert!(!bruhat_predicted_leq(&x, &y).unwrap() && !bruhat_predicted_leq(&y, &x).unwrap());
        }
    }

    #[test]
    fn geometric_examples() {
        for (f, n, sel) in [(Family::A, 4, "e3-e2"), (Family::B, 4, "e4-e3"), (Family::C, 3, "2e1")] {
            let nil = id(f, n, sel);
            let zero = OrbitLabel::parse(&nil, "").unwrap();
            for l in enumerate_orbits(&nil) {
                assert!(geometric_leq(&zero, &l).unwrap());
            }
        }
        let a = id(Family::A, 4, "e3-e2");
        let s = OrbitLabel::parse(&a, "e3-e1").unwrap();
        let moved = OrbitLabel::parse(&a, "e5-e1").unwrap();
        assert!(geometric_leq(&moved, &s).unwrap());
        assert!(!geometric_leq(&s, &moved).unwrap());
        for n in 2..=5 {
            let b = id(Family::B, n, &format!("e{n}-e{}", n - 1));
            let en = OrbitLabel::parse(&b, &format!("e{n}")).unwrap();
            for j in 1..n {
                let pair = OrbitLabel::parse(&b, &format!("e{n}-e{j},e{n}+e{j}")).unwrap();
                assert!(geometric_leq(&en, &pair).unwrap());
            }
        }
    }

    #[test]
    fn small_posets() {
        let c2 = id(Family::C, 2, "2e1");
        let p = build_poset(&c2, OrderKind::Geometric).unwrap();
        let q = build_poset(&c2, OrderKind::BruhatPredicted).unwrap();
        assert_eq!(p.matrix(), q.matrix());
        let cover_keys: Vec<(String, String)> = p
            .covers()
            .iter()
            .map(|&(i, j)| (p.labels()[i].key(), p.labels()[j].key()))
            .collect();
        assert_eq!(
            cover_keys,
            [
                ("", "2e2"),
                ("2e1", "2e1,2e2"),
                ("e2+e1", "2e1,2e2"),
                ("2e2", "2e1"),
                ("2e2", "e2+e1"),
            ]
            .map(|(a, b)| (a.to_string(), b.to_string()))
        );
        let b3 = build_poset(&id(Family::B, 3, "e3-e2"), OrderKind::Geometric).unwrap();
        let top = b3.labels().iter().position(|l| l.key() == "e3-e2,e3+e2").unwrap();
        assert!((0..b3.labels().len()).all(|i| b3.leq(i, top)));
        assert_eq!(b3.dims()[top], 5);
        let dot = p.to_dot();
        assert!(dot.starts_with("digraph \"C2:m[2e1]\" {") && dot.ends_with("}\n"));
        let (_, bad) = p.overlay_dot(&q).unwrap();
        assert_eq!(bad, 0);
        let json = p.to_json();
        assert_eq!(json["dims"], json!([0, 2, 2, 1, 3]));
        assert_eq!(json["covers"][0], json!(["", "2e2"]));
    }

    #[test]
    fn moves_examples() {
        let a = id(Family::A, 3, "e3-e2");
        let two = OrbitLabel::parse(&a, "e4-e1,e3-e2").unwrap();
        let crossed = OrbitLabel::parse(&a, "e3-e1,e4-e2").unwrap();
        let one_step = elementary_move_closure(&two).unwrap();
        assert!(one_step.contains(&crossed));
        assert!(one_step.contains(&OrbitLabel::parse(&a, "e3-e2").unwrap()));
        let a5 = id(Family::A, 5, "e4-e3");
        let side = OrbitLabel::parse(&a5, "e4-e1,e5-e2").unwrap();
        assert!(elementary_move_closure(&side).unwrap().iter().all(|l| geometric_leq(l, &side).unwrap()));
        assert!(elementary_move_closure(&OrbitLabel::parse(&id(Family::C, 2, "2e1"), "2e1").unwrap()).is_err());
        for k in 1..=4 {
            let nil = id(Family::A, 4, &format!("e{}-e{k}", k + 1));
            let geo = order_matrix(&nil, OrderKind::Geometric, None).unwrap();
            assert_eq!(move_order(&nil, MoveReading::Ambient).unwrap(), geo);
        }
    }

    #[test]
    fn fault_injection_breaks_the_table() {
        let b = id(Family::B, 3, "e3-e2");
        let good = order_matrix(&b, OrderKind::Geometric, None).unwrap();
        let bad = order_matrix(&b, OrderKind::Geometric, Some(0)).unwrap();
        assert_ne!(good, bad);
        assert!(GeometricOrder::with_fault(&id(Family::C, 2, "2e1"), Some(0)).is_err());
        assert!(GeometricOrder::with_fault(&b, Some(999)).is_err());
    }
}
