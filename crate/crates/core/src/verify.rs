//! Verification harness: oracle comparisons with JSON-lines reports.
//!
//! Every check is a pure function of `(check, family, rank, nilradical,
//! fault)`, so a failing report can be replayed from its own fields.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::{BigRational, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linkpattern::{self, HalvingCheck, LinkPattern};
use crate::matrixrep::{self, LieMatrix};
use crate::orbits::{self, Justification, MoveReading, OrbitLabel, OrderKind, Relation, TableRow};
use crate::poly::Poly;
use crate::roots::{Family, NilradicalId, Root, RootSystemType};
use crate::weyl::{self, BruhatOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Lengths,
    Conjecture,
    ExpWitnesses,
    Coadjoint,
    Bruhat,
}

impl Check {
    pub const ALL: [Check; 5] =
        [Check::Lengths, Check::Conjecture, Check::ExpWitnesses, Check::Coadjoint, Check::Bruhat];

    pub fn name(self) -> &'static str {
        match self {
            Check::Lengths => "lengths",
            Check::Conjecture => "conjecture",
            Check::ExpWitnesses => "exp_witnesses",
            Check::Coadjoint => "coadjoint",
            Check::Bruhat => "bruhat",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.replace('-', "_"))
            .ok_or_else(|| Error::Parse { input: s.to_string(), reason: "unknown check".into() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// One JSON-lines record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: Check,
    pub family: Family,
    pub rank: usize,
    pub nilradical: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub info: Option<Value>,
    pub millis: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// `Ok(info)` on success, `Err(counterexample)` on failure.
pub type CheckResult = std::result::Result<Option<Value>, Value>;

fn error_payload(e: Error) -> Value {
    json!({ "error": e.to_string() })
}

/// A single unit of verification work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub check: Check,
    pub ty: RootSystemType,
    pub nilradical: Option<NilradicalId>,
    pub fault: Option<usize>,
}

impl Task {
    pub fn run(&self) -> VerificationReport {
        let start = Instant::now();
        let result = match self.check {
            Check::Lengths => check_lengths(self.ty),
            Check::Bruhat => check_bruhat_oracle(self.ty),
            Check::ExpWitnesses => check_exp_witnesses(self.ty, self.fault),
            Check::Conjecture => match &self.nilradical {
                Some(id) => check_conjecture(id, self.fault),
                None => Err(json!({ "error": "conjecture check needs a nilradical" })),
            },
            Check::Coadjoint => match &self.nilradical {
                Some(id) => check_coadjoint(id),
                None => Err(json!({ "error": "coadjoint check needs a nilradical" })),
            },
        };
        let (status, counterexample, info) = match result {
            Ok(info) => (Status::Pass, None, info),
            Err(cx) => (Status::Fail, Some(cx), None),
        };
        VerificationReport {
            check: self.check,
            family: self.ty.family(),
            rank: self.ty.rank(),
            nilradical: self.nilradical.as_ref().map(NilradicalId::selector),
            status,
            counterexample,
            fault: self.fault,
            info,
            millis: start.elapsed().as_millis() as u64,
        }
    }

    /// Rebuilds the task that produced `report`.
    pub fn from_report(report: &VerificationReport) -> Result<Task> {
        let ty = RootSystemType::new(report.family, report.rank)?;
        let nilradical = report.nilradical.as_deref().map(|s| NilradicalId::parse(ty, s)).transpose()?;
        Ok(Task { check: report.check, ty, nilradical, fault: report.fault })
    }
}

/// Reruns the check behind `report`.
pub fn replay(report: &VerificationReport) -> Result<VerificationReport> {
    Ok(Task::from_report(report)?.run())
}

/// Runs tasks in parallel; reports come back in task order.
pub fn run_tasks(tasks: &[Task]) -> Vec<VerificationReport> {
    tasks.par_iter().map(Task::run).collect()
}

/// Highest rank per family for a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ceiling {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Ceiling {
    pub fn get(&self, f: Family) -> usize {
        match f {
            Family::A => self.a,
            Family::B => self.b,
            Family::C => self.c,
            Family::D => self.d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Checks to run; empty means all.
    pub checks: Vec<Check>,
    /// Families to run; empty means all.
    pub families: Vec<Family>,
    /// Run this single rank instead of `1..=ceiling`.
    pub rank: Option<usize>,
    /// Restrict nilradical-scoped checks to this simple-root selector.
    pub nilradical: Option<String>,
    pub lengths: Ceiling,
    pub conjecture: Ceiling,
    pub max_rank_bruhat_oracle: usize,
    /// Swap the sides of this relation-table row wherever a table is used.
    pub fault: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            checks: Vec::new(),
            families: Vec::new(),
            rank: None,
            nilradical: None,
            lengths: Ceiling { a: 7, b: 5, c: 5, d: 5 },
            conjecture: Ceiling { a: 6, b: 6, c: 5, d: 6 },
            max_rank_bruhat_oracle: 4,
            fault: None,
        }
    }
}

fn min_rank(f: Family, check: Check) -> usize {
    match (f, check) {
        (Family::D, Check::Conjecture | Check::Coadjoint | Check::ExpWitnesses) => 3,
        (Family::D, _) => 2,
        _ => 1,
    }
}

impl SuiteConfig {
    /// The task list, in a fixed order.
    pub fn plan(&self) -> Result<Vec<Task>> {
        let checks: Vec<Check> = if self.checks.is_empty() { Check::ALL.to_vec() } else { self.checks.clone() };
        let families: Vec<Family> =
            if self.families.is_empty() { Family::ALL.to_vec() } else { self.families.clone() };
        let mut tasks = Vec::new();
        for &check in &checks {
            for &f in &families {
                let ceiling = match check {
                    Check::Lengths => self.lengths.get(f),
                    Check::Bruhat => self.max_rank_bruhat_oracle,
                    _ => self.conjecture.get(f),
                };
                let ranks: Vec<usize> = match self.rank {
                    Some(r) if check == Check::Bruhat && r > self.max_rank_bruhat_oracle => Vec::new(),
                    Some(r) => vec![r],
                    None => (min_rank(f, check)..=ceiling).collect(),
                };
                for rank in ranks {
                    let ty = RootSystemType::new(f, rank)?;
                    tasks.extend(self.tasks_for(check, ty)?);
                }
            }
        }
        Ok(tasks)
    }

    fn tasks_for(&self, check: Check, ty: RootSystemType) -> Result<Vec<Task>> {
        let plain = |nilradical: Option<NilradicalId>, fault| Task { check, ty, nilradical, fault };
        Ok(match check {
            Check::Lengths | Check::Bruhat => vec![plain(None, None)],
            Check::ExpWitnesses => match table_nilradical(ty) {
                Some(id) => vec![plain(Some(id), self.fault)],
                None => Vec::new(),
            },
            Check::Conjecture | Check::Coadjoint => {
                let ids: Vec<NilradicalId> = match &self.nilradical {
                    Some(sel) => vec![NilradicalId::parse(ty, sel)?],
                    None => ty.abelian_nilradicals(),
                };
                ids.into_iter()
                    .map(|id| {
                        let fault = if check == Check::Conjecture && orbits::uses_relation_table(&id) {
                            self.fault
                        } else {
                            None
                        };
                        plain(Some(id), fault)
                    })
                    .collect()
            }
        })
    }
}

/// The nilradical of `ty` whose closure order is tabulated, if any.
pub fn table_nilradical(ty: RootSystemType) -> Option<NilradicalId> {
    ty.abelian_nilradicals().into_iter().find(orbits::uses_relation_table)
}

// ---------------------------------------------------------------- lengths

/// Closed-form length against the inversion count for every involution of
/// `W(t)` (equivalently every pairwise disjoint set), plus both reductions
/// outside type A.
pub fn check_lengths(t: RootSystemType) -> CheckResult {
    let mut count = 0usize;
    for sigma in weyl::involutions(t) {
        let set = weyl::disjoint_reflection_decomposition(&sigma).map_err(error_payload)?;
        let formula = match t.family() {
            Family::A => linkpattern::length_formula_a(&set, t),
            Family::B | Family::C => linkpattern::length_formula_c(&set, t),
            Family::D => linkpattern::length_formula_d(&set, t),
        }
        .map_err(error_payload)?;
        let brute = weyl::length(&sigma, t).map_err(error_payload)? as i64;
        let key = set_key(&set);
        if formula != brute {
            return Err(json!({ "set": key, "formula": formula, "brute_force": brute }));
        }
        if t.family() != Family::A {
            let h = HalvingCheck::compute(&set, t).map_err(error_payload)?;
            if !h.holds() {
                return Err(json!({ "set": key, "halving": format!("{h:?}") }));
            }
        }
        count += 1;
    }
    let mut info = json!({ "involutions": count });
    if t.family() == Family::C {
        info["pinned"] = pinned_example()?;
    }
    Ok(Some(info))
}

fn set_key(set: &[Root]) -> String {
    set.iter().map(Root::to_string).collect::<Vec<_>>().join(",")
}

/// The worked `C_6` example `{e2-e1, e6+e3, 2e4}`.
pub fn pinned_example() -> std::result::Result<Value, Value> {
    let t = RootSystemType::new(Family::C, 6).map_err(error_payload)?;
    let set: Vec<Root> = ["e2-e1", "e6+e3", "2e4"]
        .iter()
        .map(|s| t.parse_root(s))
        .collect::<Result<_>>()
        .map_err(error_payload)?;
    let p = LinkPattern::of_set(&set, t).map_err(error_payload)?;
    let stats = (p.num_arcs(), p.crossings(), p.right_arcs(), p.bridges());
    let formula = linkpattern::length_formula_c(&set, t).map_err(error_payload)?;
    let sigma = weyl::involution_of_set(&set, t).map_err(error_payload)?;
    let brute = weyl::length(&sigma, t).map_err(error_payload)? as i64;
    let value = json!({
        "arcs": stats.0, "c": stats.1, "r": stats.2, "b": stats.3,
        "formula": formula, "brute_force": brute,
    });
    if stats != (5, 3, 1, 2) || formula != brute {
        return Err(json!({ "pinned": value }));
    }
    Ok(value)
}

// ----------------------------------------------------------------- bruhat

/// Recursive Bruhat test against the cover-graph closure on all pairs.
pub fn check_bruhat_oracle(t: RootSystemType) -> CheckResult {
    let oracle = BruhatOracle::new(t);
    let elements = oracle.elements();
    let bad = elements.par_iter().find_map_first(|u| {
        elements.iter().find_map(|w| {
            let fast = weyl::bruhat_leq(u, w, t).ok()?;
            let slow = oracle.leq(u, w).ok()?;
            (fast != slow).then(|| json!({ "u": u.to_string(), "w": w.to_string(), "recursive": fast, "oracle": slow }))
        })
    });
    match bad {
        Some(cx) => Err(cx),
        None => Ok(Some(json!({ "elements": elements.len(), "pairs": elements.len() * elements.len() }))),
    }
}

// ------------------------------------------------------------- conjecture

fn first_mismatch(labels: &[OrbitLabel], geo: &[Vec<bool>], bru: &[Vec<bool>]) -> Option<Value> {
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if geo[i][j] != bru[i][j] {
                return Some(json!({
                    "lower": labels[i].key(),
                    "upper": labels[j].key(),
                    "geometric": geo[i][j],
                    "bruhat_predicted": bru[i][j],
                }));
            }
        }
    }
    None
}

/// Geometric order equals the `ŵ`-conjugated Bruhat order, relation by
/// relation.
pub fn compare_orders(id: &NilradicalId, fault: Option<usize>) -> CheckResult {
    let labels = orbits::enumerate_orbits(id);
    let geo = orbits::order_matrix(id, OrderKind::Geometric, fault).map_err(error_payload)?;
    let bru = orbits::order_matrix(id, OrderKind::BruhatPredicted, None).map_err(error_payload)?;
    if let Some(cx) = first_mismatch(&labels, &geo, &bru) {
        return Err(cx);
    }
    let relations = geo.iter().flatten().filter(|&&b| b).count();
    Ok(Some(json!({ "labels": labels.len(), "relations": relations })))
}

/// `dim B.x` by the rank oracle.
pub fn measured_dimension(label: &OrbitLabel) -> Result<usize> {
    let x = matrixrep::representative(label.root_system(), label.roots())?;
    matrixrep::orbit_dimension(&x)
}

/// Predicted dimension equals the rank of `ad x` on the Borel for every
/// label; the dense orbit has dimension `dim m`.
pub fn check_dimensions(id: &NilradicalId) -> CheckResult {
    let labels = orbits::enumerate_orbits(id);
    let results: Vec<std::result::Result<(usize, usize), Value>> = labels
        .par_iter()
        .map(|l| {
            let predicted = orbits::predicted_dimension(l).map_err(error_payload)?;
            let measured = measured_dimension(l).map_err(error_payload)?;
            Ok((predicted, measured))
        })
        .collect();
    let mut dims = Vec::new();
    for (l, r) in labels.iter().zip(results) {
        let (predicted, measured) = r?;
        if predicted != measured {
            return Err(json!({ "label": l.key(), "predicted": predicted, "measured": measured }));
        }
        dims.push(measured);
    }
    let dim_m = id.positive_roots().len();
    let top: Vec<&OrbitLabel> = labels.iter().zip(&dims).filter(|(_, &d)| d == dim_m).map(|(l, _)| l).collect();
    if top.len() != 1 || dims.iter().any(|&d| d > dim_m) {
        return Err(json!({ "dense": top.iter().map(|l| l.key()).collect::<Vec<_>>(), "dim_m": dim_m }));
    }
    Ok(Some(json!({ "dims": dims, "dim_m": dim_m, "dense": top[0].key() })))
}

/// Parity, unique minimum `∅`, strictly increasing dimensions, covers of
/// codimension one and a unique maximum at the dense orbit.
pub fn structural_properties(poset: &orbits::OrbitPoset) -> CheckResult {
    let labels = poset.labels();
    let dims = poset.dims();
    let size = labels.len();
    for l in labels {
        if (l.conjugate_length() + l.cardinality()) % 2 == 1 || (l.length() + l.cardinality()) % 2 == 1 {
            return Err(json!({ "parity": l.key() }));
        }
    }
    let minima: Vec<usize> = (0..size).filter(|&i| (0..size).all(|j| poset.leq(i, j))).collect();
    if minima.len() != 1 || !labels[minima[0]].is_empty() {
        return Err(json!({ "minimum": minima.iter().map(|&i| labels[i].key()).collect::<Vec<_>>() }));
    }
    let maxima: Vec<usize> = (0..size).filter(|&j| (0..size).all(|i| poset.leq(i, j))).collect();
    if maxima.len() != 1 {
        return Err(json!({ "maximum": maxima.iter().map(|&i| labels[i].key()).collect::<Vec<_>>() }));
    }
    for i in 0..size {
        for j in 0..size {
            if i != j && poset.leq(i, j) && dims[i] >= dims[j] {
                return Err(json!({ "monotone": [labels[i].key(), labels[j].key()], "dims": [dims[i], dims[j]] }));
            }
        }
    }
    for &(i, j) in poset.covers() {
        if dims[j] != dims[i] + 1 {
            return Err(json!({ "cover": [labels[i].key(), labels[j].key()], "dims": [dims[i], dims[j]] }));
        }
    }
    Ok(Some(json!({ "covers": poset.covers().len(), "maximum": labels[maxima[0]].key() })))
}

/// Which readings of the elementary moves reproduce the interval order.
pub fn check_moves(id: &NilradicalId) -> CheckResult {
    let geo = orbits::order_matrix(id, OrderKind::Geometric, None).map_err(error_payload)?;
    let restricted = orbits::move_order(id, MoveReading::Restricted).map_err(error_payload)? == geo;
    let ambient = orbits::move_order(id, MoveReading::Ambient).map_err(error_payload)? == geo;
    let info = json!({ "restricted": restricted, "ambient": ambient });
    if restricted || ambient {
        Ok(Some(info))
    } else {
        Err(json!({ "moves": info }))
    }
}

/// `m_{e_2 - e_1}` and `m_{e_2 + e_1}` of `D_n` have isomorphic posets under
/// the sign flip of `e_1`.
pub fn check_d_isomorphism(t: RootSystemType) -> CheckResult {
    let n = t.rank();
    let minus = NilradicalId::new(t, Root::diff(n, 2, 1)).map_err(error_payload)?;
    let plus = NilradicalId::new(t, Root::sum(n, 2, 1)).map_err(error_payload)?;
    let pm = orbits::build_poset(&minus, OrderKind::Geometric).map_err(error_payload)?;
    let pp = orbits::build_poset(&plus, OrderKind::Geometric).map_err(error_payload)?;
    let index: HashMap<String, usize> = pp.labels().iter().enumerate().map(|(k, l)| (l.key(), k)).collect();
    let mut image = Vec::new();
    for l in pm.labels() {
        let flipped: Vec<Root> = l.roots().iter().map(orbits::flip_first_coordinate).collect();
        let target = OrbitLabel::new(&plus, flipped).map_err(error_payload)?;
        image.push(index[&target.key()]);
    }
    let size = pm.labels().len();
    if pp.labels().len() != size {
        return Err(json!({ "sizes": [size, pp.labels().len()] }));
    }
    for i in 0..size {
        if pm.dims()[i] != pp.dims()[image[i]] {
            return Err(json!({ "dimension": pm.labels()[i].key() }));
        }
        for j in 0..size {
            if pm.leq(i, j) != pp.leq(image[i], image[j]) {
                return Err(json!({ "relation": [pm.labels()[i].key(), pm.labels()[j].key()] }));
            }
        }
    }
    Ok(Some(json!({ "isomorphic": ["e2-e1", "e2+e1"] })))
}

/// Full conjecture check for one nilradical.
pub fn check_conjecture(id: &NilradicalId, fault: Option<usize>) -> CheckResult {
    let labels = orbits::enumerate_orbits(id);
    let mut sigmas: Vec<_> = labels.iter().map(|l| l.sigma().clone()).collect();
    sigmas.sort();
    sigmas.dedup();
    if sigmas.len() != labels.len() {
        return Err(json!({ "error": "two labels share an involution" }));
    }
    if orbits::uses_relation_table(id) && !labels.iter().all(orbits::is_canonical_small_form) {
        return Err(json!({ "error": "label outside the canonical forms" }));
    }
    let mut info = serde_json::Map::new();
    info.insert("orders".into(), compare_orders(id, fault)?.unwrap_or(Value::Null));
    let poset = orbits::build_poset(id, OrderKind::Geometric).map_err(error_payload)?;
    info.insert("dimensions".into(), check_dimensions(id)?.unwrap_or(Value::Null));
    info.insert("structure".into(), structural_properties(&poset)?.unwrap_or(Value::Null));
    let t = id.root_system();
    if t.family() == Family::A {
        info.insert("moves".into(), check_moves(id)?.unwrap_or(Value::Null));
    }
    if t.family() == Family::D && *id.simple_root() == Root::diff(t.rank(), 2, 1) {
        info.insert("isomorphism".into(), check_d_isomorphism(t)?.unwrap_or(Value::Null));
    }
    Ok(Some(Value::Object(info)))
}

// -------------------------------------------------------------- coadjoint

/// Consistency of the predicted coadjoint poset (no geometric oracle).
pub fn check_coadjoint(id: &NilradicalId) -> CheckResult {
    let poset = orbits::build_poset(id, OrderKind::CoadjointPredicted).map_err(error_payload)?;
    let labels = poset.labels();
    let mut info = structural_properties(&poset)?.unwrap_or(Value::Null);
    // ŵ-conjugation relabeling: S ↦ S̃ with σ_S̃ = ŵσ_Sŵ.
    let by_sigma: HashMap<_, usize> = labels.iter().enumerate().map(|(k, l)| (l.sigma().clone(), k)).collect();
    let mut phi = Vec::new();
    for l in labels {
        match by_sigma.get(l.conjugate()) {
            Some(&k) => phi.push(k),
            None => return Err(json!({ "relabeling": l.key() })),
        }
    }
    let adjoint = orbits::build_poset(id, OrderKind::BruhatPredicted).map_err(error_payload)?;
    for i in 0..labels.len() {
        if adjoint.dims()[i] != poset.dims()[phi[i]] {
            return Err(json!({ "relabeled_dimension": labels[i].key() }));
        }
        for j in 0..labels.len() {
            if adjoint.leq(i, j) != poset.leq(phi[i], phi[j]) {
                return Err(json!({ "relabeled_relation": [labels[i].key(), labels[j].key()] }));
            }
        }
    }
    info["dims"] = json!(poset.dims());
    info["geometric_oracle"] = json!(false);
    Ok(Some(info))
}

// ---------------------------------------------------------- exp witnesses

/// Integer cocharacters `λ` with every coordinate in `-3..=3`, restricted
/// to the coordinates the weights touch, such that `β(λ) = 0` on `keep`
/// and `β(λ) > 0` on `drop`.
fn find_cocharacter(keep: &[Root], drop: &[Root]) -> Option<Vec<i32>> {
    let dim = keep.iter().chain(drop).next()?.dim();
    let coords: Vec<usize> = (1..=dim)
        .filter(|&i| keep.iter().chain(drop).any(|r| r.coefficient(i) != 0))
        .collect();
    let pair = |r: &Root, lambda: &[i32]| -> i32 {
        coords.iter().zip(lambda).map(|(&i, &l)| r.coefficient(i) * l).sum()
    };
    let total = 7usize.pow(coords.len() as u32);
    (0..total).find_map(|mut code| {
        let lambda: Vec<i32> = (0..coords.len())
            .map(|_| {
                let v = (code % 7) as i32 - 3;
                code /= 7;
                v
            })
            .collect();
        let ok = keep.iter().all(|r| pair(r, &lambda) == 0) && drop.iter().all(|r| pair(r, &lambda) > 0);
        ok.then(|| {
            let mut full = vec![0; dim];
            for (&i, &l) in coords.iter().zip(&lambda) {
                full[i - 1] = l;
            }
            full
        })
    })
}

fn independent(roots: &[Root]) -> bool {
    let rows = roots
        .iter()
        .map(|r| r.coefficients().iter().map(|&c| BigRational::from_integer(c.into())).collect())
        .collect();
    matrixrep::rank(rows) == roots.len()
}

/// A torus limit of `Σ c_β X_β` (all `c_β ≠ 0`, `β ∈ support`) reaches the
/// representative of `lower`.
fn torus_reaches(support: &[Root], lower: &[Root]) -> std::result::Result<Vec<i32>, String> {
    if let Some(r) = lower.iter().find(|r| !support.contains(r)) {
        return Err(format!("{r} is not in the support"));
    }
    if !independent(lower) {
        return Err("lower weights are dependent".into());
    }
    let drop: Vec<Root> = support.iter().filter(|r| !lower.contains(r)).cloned().collect();
    find_cocharacter(lower, &drop).ok_or_else(|| "no cocharacter isolates the lower label".into())
}

fn signs(k: usize) -> Vec<Vec<i64>> {
    (0..1usize << k.saturating_sub(1))
        .map(|mask| {
            (0..k).map(|b| if b > 0 && mask >> (b - 1) & 1 == 1 { -1 } else { 1 }).collect()
        })
        .collect()
}

fn degree_map(coeffs: &BTreeMap<Root, Poly>) -> Vec<(Root, Vec<usize>)> {
    coeffs.iter().map(|(r, c)| (r.clone(), c.degrees())).collect()
}

fn show_degrees(d: &[(Root, Vec<usize>)]) -> Value {
    Value::Object(d.iter().map(|(r, deg)| (r.to_string(), json!(deg))).collect())
}

/// Validates one relation-table row.
pub fn check_row(t: RootSystemType, row: &TableRow) -> std::result::Result<Value, String> {
    let err = |e: Error| e.to_string();
    match (&row.justification, row.relation) {
        (Justification::EqualDimension, Relation::Incomparable) => {
            let id = table_nilradical(t).ok_or("no table nilradical")?;
            let lo = OrbitLabel::new(&id, row.lower.clone()).map_err(err)?;
            let up = OrbitLabel::new(&id, row.upper.clone()).map_err(err)?;
            let (a, b) = (measured_dimension(&lo).map_err(err)?, measured_dimension(&up).map_err(err)?);
            if lo == up || a != b {
                return Err(format!("dimensions {a} and {b} do not force incomparability"));
            }
            Ok(json!({ "dimension": a }))
        }
        (_, Relation::Incomparable) | (Justification::EqualDimension, _) => {
            Err("incomparability rows need a dimension justification".into())
        }
        (Justification::TorusLimit, Relation::Below) => {
            let lambda = torus_reaches(&row.upper, &row.lower)?;
            Ok(json!({ "cocharacter": lambda }))
        }
        (Justification::Exp { element, support, vanish }, Relation::Below) => {
            let y = matrixrep::representative(t, &row.upper).map_err(err)?;
            let mut expected = support.clone();
            expected.sort();
            let a = Poly::param();
            let mut seen = Vec::new();
            for s in signs(element.len()) {
                let mut z = LieMatrix::zero(t);
                for (g, &sign) in element.iter().zip(&s) {
                    let x = matrixrep::root_vector(t, g).map_err(err)?;
                    z = z.add(&x.scale(&Poly::from_int(sign))).map_err(err)?;
                }
                let w = matrixrep::exp_adjoint(&a, &z, &y).map_err(err)?;
                let coeffs = matrixrep::root_coefficients(&w).map_err(err)?;
                let got = degree_map(&coeffs);
                if got != expected {
                    seen.push(show_degrees(&got));
                    continue;
                }
                let remaining: Vec<Root> =
                    coeffs.keys().filter(|r| Some(*r) != vanish.as_ref()).cloned().collect();
                let specialized = match vanish {
                    Some(_) => remaining.iter().all(|r| coeffs[r].degrees().len() == 1),
                    None => (1..=10).any(|v| {
                        let x = BigRational::from_integer(v.into());
                        coeffs.values().all(|c| !c.eval(&x).is_zero())
                    }),
                };
                if !specialized {
                    return Err("no parameter value keeps the remaining coefficients nonzero".into());
                }
                let lambda = torus_reaches(&remaining, &row.lower)?;
                return Ok(json!({
                    "signs": s,
                    "support": show_degrees(&got),
                    "cocharacter": lambda,
                }));
            }
            Err(format!("support mismatch: expected {}, got {}", show_degrees(&expected), Value::Array(seen)))
        }
    }
}

/// Every row of the relation table of `t` has a passing witness.
pub fn check_exp_witnesses(t: RootSystemType, fault: Option<usize>) -> CheckResult {
    let id = table_nilradical(t).ok_or_else(|| json!({ "error": format!("{t} has no relation table") }))?;
    let mut rows = orbits::relation_table(&id).unwrap_or_default();
    if let Some(k) = fault {
        let row = rows.get_mut(k).ok_or_else(|| json!({ "error": format!("no table row {k}") }))?;
        std::mem::swap(&mut row.lower, &mut row.upper);
    }
    let results: Vec<_> = rows.par_iter().map(|row| check_row(t, row)).collect();
    let mut info = Vec::new();
    for (k, (row, r)) in rows.iter().zip(results).enumerate() {
        match r {
            Ok(v) => info.push(v),
            Err(reason) => {
                return Err(json!({
                    "row": k,
                    "lower": set_key(&row.lower),
                    "upper": set_key(&row.upper),
                    "provenance": row.provenance,
                    "reason": reason,
                }));
            }
        }
    }
    Ok(Some(json!({ "rows": info.len(), "witnesses": info })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(f: Family, n: usize) -> RootSystemType {
        RootSystemType::new(f, n).unwrap()
    }

    #[test]
    fn small_checks_pass() {
        assert!(check_lengths(ty(Family::C, 3)).is_ok());
        assert!(check_lengths(ty(Family::D, 3)).is_ok());
        assert!(check_bruhat_oracle(ty(Family::B, 2)).is_ok());
        for t in [ty(Family::B, 3), ty(Family::D, 4)] {
            let r = check_exp_witnesses(t, None);
            assert!(r.is_ok(), "{r:?}");
            for id in t.abelian_nilradicals() {
                let r = check_conjecture(&id, None);
                assert!(r.is_ok(), "{id}: {r:?}");
                assert!(check_coadjoint(&id).is_ok());
            }
        }
    }

    #[test]
    fn faults_are_caught() {
        let t = ty(Family::B, 3);
        let id = table_nilradical(t).unwrap();
        for k in 0..orbits::relation_table(&id).unwrap().len() {
            assert!(check_conjecture(&id, Some(k)).is_err(), "row {k}");
            assert!(check_exp_witnesses(t, Some(k)).is_err(), "row {k}");
        }
    }

    #[test]
    fn cocharacters() {
        let r = |s: &str| Root::parse(s, 3).unwrap();
        assert!(find_cocharacter(&[r("e3+e1")], &[r("e3-e1"), r("e3")]).is_some());
        assert!(find_cocharacter(&[r("e3")], &[r("e3-e1"), r("e3+e1")]).is_none());
        assert_eq!(signs(1), vec![vec![1]]);
        assert_eq!(signs(2), vec![vec![1, 1], vec![1, -1]]);
    }

    #[test]
    fn reports_round_trip_and_replay() {
        let config = SuiteConfig {
            checks: vec![Check::Conjecture],
            families: vec![Family::B],
            rank: Some(3),
            fault: Some(0),
            ..SuiteConfig::default()
        };
        let tasks = config.plan().unwrap();
        assert_eq!(tasks.len(), 1);
        let report = tasks[0].run();
        assert_eq!(report.status, Status::Fail);
        let line = report.to_json_line();
        let parsed: VerificationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(parsed.counterexample, report.counterexample);
        let again = replay(&parsed).unwrap();
        assert_eq!(again.counterexample, report.counterexample);
    }

    #[test]
    fn plan_is_scoped() {
        let config = SuiteConfig {
            checks: vec![Check::Lengths],
            families: vec![Family::D],
            rank: Some(4),
            ..SuiteConfig::default()
        };
        let tasks = config.plan().unwrap();
        assert_eq!(tasks.len(), 1);
        assert_eq!(tasks[0].ty, ty(Family::D, 4));
        let all = SuiteConfig::default().plan().unwrap();
        assert!(all.iter().all(|t| t.check != Check::Bruhat || t.ty.rank() <= 4));
    }
}
