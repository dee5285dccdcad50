//! The shear group fixing the special line pointwise, its action on dual
//! configurations, and configuration-cycle coefficients.
//!
//! An arrangement with fixed restriction is recorded dually: each line
//! becomes a point of the dual plane, and the lines collapsed onto the
//! special line all become the special line's dual point. The group acting
//! on such configurations scales by `t` and shears by `(s0, s1)`; in the
//! reparametrization `u = t^{-3}`, `v0 = s0/t`, `v1 = s1/t` its dual action
//! is linear, so incidence conditions against generic linear subspaces turn
//! into exact linear systems. The coefficient of a cycle class at a
//! multiplicity vector is computed twice: by the combinatorial criterion on
//! a component's collapsed lines and multiple points, and by counting group
//! elements solving the seeded linear conditions. The two must agree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{affine_solutions, det3, dot3, rank};
use crate::projgeom::{
    dualize_line, incident, GeomError, IndexSet, LineArrangement, ProjLine, ProjPoint,
};
use crate::rational::{Rat, RatStream};
use crate::sha::{Sha, ShaError};

#[derive(Debug, Error)]
pub enum ChowError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Sha(#[from] ShaError),
    #[error("scale factor of a group element must be nonzero")]
    ZeroScale,
    #[error("invalid multiplicity vector: {0}")]
    InvalidMVector(String),
    #[error("conditions failed a genericity certificate: {0}")]
    NonGenericConditions(String),
    #[error("invalid dual configuration: {0}")]
    InvalidConfig(String),
    #[error("the surface is not maximally degenerate")]
    NotMaximallyDegenerate,
    #[error("no component carries the multiplicity vector")]
    NoContributor,
    #[error("several components carry the multiplicity vector: {0:?}")]
    MultipleContributors(Vec<usize>),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("configuration too degenerate for a canonical form: {0}")]
    DegenerateConfig(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// A transformation fixing the special line `x0 = 0` pointwise: scale `t`
/// and shear `(s0, s1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    t: Rat,
    s0: Rat,
    s1: Rat,
}

impl GroupElement {
    pub fn new(t: Rat, s0: Rat, s1: Rat) -> Result<GroupElement, ChowError> {
        if t.is_zero() {
            return Err(ChowError::ZeroScale);
        }
        Ok(GroupElement { t, s0, s1 })
    }

    pub fn identity() -> GroupElement {
        GroupElement {
            t: Rat::one(),
            s0: Rat::zero(),
            s1: Rat::zero(),
        }
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    pub fn s0(&self) -> &Rat {
        &self.s0
    }

    pub fn s1(&self) -> &Rat {
        &self.s1
    }

    /// Matrix acting on the plane by right multiplication of row vectors.
    pub fn matrix(&self) -> [[Rat; 3]; 3] {
        let tinv2 = &self.t.recip() * &self.t.recip();
        [
            [tinv2, Rat::zero(), Rat::zero()],
            [self.s0.clone(), self.t.clone(), Rat::zero()],
            [self.s1.clone(), Rat::zero(), self.t.clone()],
        ]
    }

    /// Coordinates `(u, v0, v1) = (t^{-3}, s0/t, s1/t)` in which the dual
    /// action is linear on the first coordinate slot.
    pub fn reparametrized(&self) -> (Rat, Rat, Rat) {
        let ti = self.t.recip();
        let u = &(&ti * &ti) * &ti;
        (u, &self.s0 * &ti, &self.s1 * &ti)
    }

    /// Action on a dual point: `[a0:a1:a2] ↦ [u a0 + v0 a1 + v1 a2 : a1 : a2]`.
    /// The induced base point on the special line is untouched.
    pub fn act(&self, p: &ProjPoint) -> ProjPoint {
        let (u, v0, v1) = self.reparametrized();
        shear_point(&u, &v0, &v1, p)
    }

    /// The element acting as `self` after `other`:
    /// `compose(g, h).act(p) = g.act(h.act(p))`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let (g, h) = (self, other);
        let gsq_inv = (&g.t * &g.t).recip();
        GroupElement {
            t: &g.t * &h.t,
            s0: &(&h.s0 * &gsq_inv) + &(&h.t * &g.s0),
            s1: &(&h.s1 * &gsq_inv) + &(&h.t * &g.s1),
        }
    }
}

fn shear_point(u: &Rat, v0: &Rat, v1: &Rat, p: &ProjPoint) -> ProjPoint {
    let [a0, a1, a2] = p.coords();
    let first = &(&(u * a0) + &(v0 * a1)) + &(v1 * a2);
    ProjPoint::new([first, a1.clone(), a2.clone()])
        .expect("a nonzero scale keeps dual points nonzero")
}

/// Multiplicities `0 ≤ m_i ≤ 2` with total 3, one per line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MVector {
    m: Vec<u8>,
}

impl MVector {
    pub fn new(m: Vec<u8>) -> Result<MVector, ChowError> {
        if m.len() < 2 {
            return Err(ChowError::InvalidMVector(format!(
                "need at least 2 entries, got {}",
                m.len()
            )));
        }
        if let Some(&bad) = m.iter().find(|&&e| e > 2) {
            return Err(ChowError::InvalidMVector(format!(
                "entry {bad} exceeds 2"
            )));
        }
        let total: u32 = m.iter().map(|&e| e as u32).sum();
        if total != 3 {
            return Err(ChowError::InvalidMVector(format!(
                "entries sum to {total}, not 3"
            )));
        }
        Ok(MVector { m })
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.m[i - 1]
    }

    pub fn entries(&self) -> &[u8] {
        &self.m
    }

    pub fn sum_over(&self, set: &IndexSet) -> u32 {
        set.iter().map(|i| self.m[i - 1] as u32).sum()
    }

    /// Indices with positive multiplicity.
    pub fn support(&self) -> IndexSet {
        IndexSet::new(
            (1..=self.n())
                .filter(|&i| self.m[i - 1] > 0)
                .collect(),
        )
    }

    pub fn has_double(&self) -> bool {
        self.m.iter().any(|&e| e == 2)
    }
}

/// Every valid multiplicity vector on `n` lines, in lexicographic order.
pub fn all_mvectors(n: usize) -> Vec<MVector> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let mut m = vec![0u8; n];
            m[i - 1] = 2;
            m[j - 1] = 1;
            out.push(MVector { m });
        }
        for j in i + 1..=n {
            for k in j + 1..=n {
                let mut m = vec![0u8; n];
                m[i - 1] = 1;
                m[j - 1] = 1;
                m[k - 1] = 1;
                out.push(MVector { m });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The dual record of a component's line configuration: one dual point per
/// line, with the lines collapsed onto the special line all sent to the
/// special line's own dual point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualConfig {
    points: Vec<ProjPoint>,
    collapsed: IndexSet,
}

fn special_dual() -> ProjPoint {
    ProjPoint::new([Rat::one(), Rat::zero(), Rat::zero()]).expect("nonzero")
}

/// Base point on the special line induced by a dual point, if any.
fn base_of(p: &ProjPoint) -> Option<ProjPoint> {
    let [_, a1, a2] = p.coords();
    if a1.is_zero() && a2.is_zero() {
        return None;
    }
    Some(ProjPoint::new([Rat::zero(), a2.clone(), -a1]).expect("nonzero"))
}

impl DualConfig {
    pub fn new(points: Vec<ProjPoint>, collapsed: IndexSet) -> Result<DualConfig, ChowError> {
        let n = points.len();
        if n < 3 {
            return Err(ChowError::InvalidConfig(format!(
                "need at least 3 dual points, got {n}"
            )));
        }
        let special = special_dual();
        let mut bases: Vec<ProjPoint> = Vec::new();
        for (idx, p) in points.iter().enumerate() {
            let i = idx + 1;
            if collapsed.contains(i) {
                if *p != special {
                    return Err(ChowError::InvalidConfig(format!(
                        "collapsed index {i} must carry the special dual point"
                    )));
                }
            } else {
                match base_of(p) {
                    None => {
                        return Err(ChowError::InvalidConfig(format!(
                            "dual point {i} coincides with the special line"
                        )));
                    }
                    Some(b) => bases.push(b),
                }
            }
        }
        bases.sort();
        for pair in bases.windows(2) {
            if pair[0] == pair[1] {
                return Err(ChowError::InvalidConfig(
                    "two lines induce the same base point".into(),
                ));
            }
        }
        Ok(DualConfig { points, collapsed })
    }

    pub fn from_arrangement(arr: &LineArrangement) -> Result<DualConfig, ChowError> {
        let points = (1..=arr.n).map(|i| dualize_line(arr.line(i))).collect();
        DualConfig::new(points, IndexSet::new(Vec::new()))
    }

    /// The configuration presented by one component of a degenerate surface.
    pub fn from_component(x: &Sha, vertex: usize) -> Result<DualConfig, ChowError> {
        let comp = x.component(vertex)?;
        let collapsed = x.collapsed_lines(vertex)?;
        let mut points = Vec::with_capacity(x.n());
        for i in 1..=x.n() {
            match comp.lines.get(&i) {
                Some(l) => points.push(dualize_line(l)),
                None => {
                    if !collapsed.contains(i) {
                        return Err(ChowError::Internal(format!(
                            "line {i} neither present nor collapsed on component {vertex}"
                        )));
                    }
                    points.push(special_dual());
                }
            }
        }
        DualConfig::new(points, collapsed)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.points[i - 1]
    }

    pub fn collapsed(&self) -> &IndexSet {
        &self.collapsed
    }

    /// Base point of line `i` on the special line; `None` when collapsed.
    pub fn base_point(&self, i: usize) -> Option<ProjPoint> {
        base_of(self.point(i))
    }

    /// Act on every dual point at once. Collapsed points stay put.
    pub fn transformed(&self, g: &GroupElement) -> DualConfig {
        let (u, v0, v1) = g.reparametrized();
        self.sheared(&u, &v0, &v1)
    }

    fn sheared(&self, u: &Rat, v0: &Rat, v1: &Rat) -> DualConfig {
        DualConfig {
            points: self
                .points
                .iter()
                .map(|p| shear_point(u, v0, v1, p))
                .collect(),
            collapsed: self.collapsed.clone(),
        }
    }
}

/// Per line, `m_i` generic hyperplanes of the dual plane cutting out a
/// codimension-`m_i` subspace.
#[derive(Debug, Clone)]
pub struct LinearConditions {
    m: MVector,
    forms: Vec<Vec<[Rat; 3]>>,
}

impl LinearConditions {
    pub fn seeded(m: &MVector, seed: u64) -> LinearConditions {
        let mut stream = RatStream::new(seed ^ 0x94d0_49bb_1331_11eb);
        let forms = (1..=m.n())
            .map(|i| {
                (0..m.get(i))
                    .map(|_| [stream.nonzero(), stream.rat(), stream.rat()])
                    .collect()
            })
            .collect();
        LinearConditions {
            m: m.clone(),
            forms,
        }
    }

    pub fn from_forms(m: &MVector, forms: Vec<Vec<[Rat; 3]>>) -> LinearConditions {
        LinearConditions {
            m: m.clone(),
            forms,
        }
    }

    pub fn m(&self) -> &MVector {
        &self.m
    }

    pub fn forms(&self, i: usize) -> &[[Rat; 3]] {
        &self.forms[i - 1]
    }

    /// Genericity certificates against a configuration: the right number of
    /// independent forms per line, none passing through the point it
    /// constrains.
    fn certify(&self, config: &DualConfig) -> Result<(), ChowError> {
        if self.m.n() != config.n() || self.forms.len() != self.m.n() {
            return Err(ChowError::NonGenericConditions(
                "conditions sized for a different configuration".into(),
            ));
        }
        for i in 1..=self.m.n() {
            let fs = self.forms(i);
            if fs.len() != self.m.get(i) as usize {
                return Err(ChowError::NonGenericConditions(format!(
                    "line {i} needs {} forms, got {}",
                    self.m.get(i),
                    fs.len()
                )));
            }
            if fs.is_empty() {
                continue;
            }
            let rows: Vec<Vec<Rat>> = fs.iter().map(|f| f.to_vec()).collect();
            if rank(&rows, 3) != fs.len() {
                return Err(ChowError::NonGenericConditions(format!(
                    "forms for line {i} are dependent"
                )));
            }
            for f in fs {
                if dot3(f, config.point(i).coords()).is_zero() {
                    return Err(ChowError::NonGenericConditions(format!(
                        "a form for line {i} already contains its dual point"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Number of group elements carrying a configuration into the conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitCount {
    Zero,
    One,
    Infinite,
}

/// Substitute `(u, v0, v1)` for the group coordinates, making every
/// condition `g·p_i ∈ L_i` linear, and solve exactly. A solution only
/// counts on the group locus `u ≠ 0`.
pub fn reparametrized_orbit_system(
    config: &DualConfig,
    conditions: &LinearConditions,
) -> Result<OrbitCount, ChowError> {
    conditions.certify(config)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 1..=config.n() {
        let [a0, a1, a2] = config.point(i).coords();
        for [c0, c1, c2] in conditions.forms(i) {
            rows.push(vec![c0 * a0, c0 * a1, c0 * a2]);
            rhs.push(-(&(c1 * a1) + &(c2 * a2)));
        }
    }
    let count = match affine_solutions(&rows, &rhs, 3) {
        None => OrbitCount::Zero,
        Some(sol) if sol.basis.is_empty() => {
            if sol.particular[0].is_zero() {
                OrbitCount::Zero
            } else {
                OrbitCount::One
            }
        }
        Some(sol) => {
            if sol.coordinate_pinned_to(0, &Rat::zero()) {
                OrbitCount::Zero
            } else {
                OrbitCount::Infinite
            }
        }
    };
    Ok(count)
}

/// The 0/1 verdict of the linear-system oracle, majority over three seeded
/// generic condition draws. Draws that come out degenerate are discarded
/// and redrawn.
pub fn oracle_coefficient(
    config: &DualConfig,
    m: &MVector,
    seed: u64,
) -> Result<u8, ChowError> {
    if m.n() != config.n() {
        return Err(ChowError::InvalidMVector(format!(
            "multiplicity vector sized {} against {} lines",
            m.n(),
            config.n()
        )));
    }
    let mut votes = [0usize; 2];
    let mut valid = 0usize;
    for attempt in 0u64..8 {
        let derived = seed ^ (attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15)).wrapping_add(attempt);
        let conditions = LinearConditions::seeded(m, derived);
        match reparametrized_orbit_system(config, &conditions) {
            Ok(OrbitCount::One) => {
                votes[1] += 1;
                valid += 1;
            }
            Ok(OrbitCount::Zero) => {
                votes[0] += 1;
                valid += 1;
            }
            Ok(OrbitCount::Infinite) | Err(ChowError::NonGenericConditions(_)) => {}
            Err(e) => return Err(e),
        }
        if valid == 3 {
            break;
        }
    }
    if valid < 3 {
        return Err(ChowError::NonGenericConditions(
            "could not draw three generic condition sets".into(),
        ));
    }
    Ok(if votes[1] > votes[0] { 1 } else { 0 })
}

/// The part of a component's coefficient rule that does not depend on the
/// multiplicity vector, extracted once so sweeps over many vectors skip the
/// repeated incidence work.
#[derive(Debug, Clone)]
pub struct CoefficientProfile {
    collapsed: IndexSet,
    concurrency: Vec<IndexSet>,
}

impl CoefficientProfile {
    pub fn of(x: &Sha, vertex: usize) -> Result<CoefficientProfile, ChowError> {
        let comp = x.component(vertex)?;
        Ok(CoefficientProfile {
            collapsed: x.collapsed_lines(vertex)?,
            concurrency: comp.concurrency_sets(),
        })
    }

    /// 1 iff no multiplicity sits on a collapsed line, no multiple point
    /// absorbs all three units, and no single line carries two.
    pub fn coefficient(&self, m: &MVector) -> u8 {
        if m.has_double() {
            return 0;
        }
        if m.sum_over(&self.collapsed) > 0 {
            return 0;
        }
        for set in &self.concurrency {
            if m.sum_over(set) > 2 {
                return 0;
            }
        }
        1
    }
}

/// Combinatorial coefficient of one component: 1 iff no multiplicity sits
/// on a collapsed line, no multiple point of the component absorbs all
/// three units, and no single line carries two.
pub fn component_coefficient(x: &Sha, vertex: usize, m: &MVector) -> Result<u8, ChowError> {
    if m.n() != x.n() {
        return Err(ChowError::InvalidMVector(format!(
            "multiplicity vector sized {} against {} lines",
            m.n(),
            x.n()
        )));
    }
    Ok(CoefficientProfile::of(x, vertex)?.coefficient(m))
}

/// Homology coefficients of the configuration cycle, indexed by
/// multiplicity vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleClass {
    coeffs: BTreeMap<MVector, u64>,
}

impl CycleClass {
    pub fn get(&self, m: &MVector) -> u64 {
        self.coeffs.get(m).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<MVector, u64> {
        &self.coeffs
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.values().filter(|&&c| c > 0).count()
    }
}

/// Sum the per-component coefficients over all components, for every
/// multiplicity vector.
pub fn cycle_class(x: &Sha) -> Result<CycleClass, ChowError> {
    let profiles = x
        .components()
        .iter()
        .map(|comp| CoefficientProfile::of(x, comp.id))
        .collect::<Result<Vec<_>, _>>()?;
    let mut coeffs = BTreeMap::new();
    for m in all_mvectors(x.n()) {
        let c = profiles.iter().map(|p| p.coefficient(&m) as u64).sum();
        coeffs.insert(m, c);
    }
    Ok(CycleClass { coeffs })
}

/// The unique component of a maximally degenerate surface carrying a
/// square-free multiplicity vector, found by descending from the root along
/// the branch that swallows all three marked lines, then cross-checked
/// exhaustively.
pub fn unique_contributor(x: &Sha, m: &MVector) -> Result<usize, ChowError> {
    if !x.is_maximally_degenerate()? {
        return Err(ChowError::NotMaximallyDegenerate);
    }
    if m.n() != x.n() || m.has_double() {
        return Err(ChowError::InvalidMVector(
            "need a square-free multiplicity vector on all lines".into(),
        ));
    }
    let profiles = x
        .components()
        .iter()
        .map(|comp| CoefficientProfile::of(x, comp.id))
        .collect::<Result<Vec<_>, _>>()?;
    contributor_from_profiles(x, &profiles, m)
}

/// The full square-free class assignment at once, sharing the degeneracy
/// check and the per-component incidence data across all vectors.
pub fn unique_contributors(x: &Sha) -> Result<BTreeMap<MVector, usize>, ChowError> {
    if !x.is_maximally_degenerate()? {
        return Err(ChowError::NotMaximallyDegenerate);
    }
    let profiles = x
        .components()
        .iter()
        .map(|comp| CoefficientProfile::of(x, comp.id))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = BTreeMap::new();
    for m in all_mvectors(x.n()) {
        if m.has_double() {
            continue;
        }
        let v = contributor_from_profiles(x, &profiles, &m)?;
        out.insert(m, v);
    }
    Ok(out)
}

fn contributor_from_profiles(
    x: &Sha,
    profiles: &[CoefficientProfile],
    m: &MVector,
) -> Result<usize, ChowError> {
    let support = m.support();
    let mut vertex = 0usize;
    let walked = loop {
        let hit = profiles[vertex]
            .concurrency
            .iter()
            .find(|s| m.sum_over(s) == 3);
        match hit {
            None => break Some(vertex),
            Some(_) => {
                let child = x
                    .component(vertex)?
                    .attachments
                    .iter()
                    .find(|(_, att)| support.is_subset_of(&att.lines_into_child))
                    .map(|(&c, _)| c);
                match child {
                    Some(c) => vertex = c,
                    // All three marked lines meet at a free point: nothing
                    // below can pick them up.
                    None => break None,
                }
            }
        }
    };
    let mut contributors = Vec::new();
    for comp in x.components() {
        if profiles[comp.id].coefficient(m) == 1 {
            contributors.push(comp.id);
        }
    }
    match (walked, contributors.as_slice()) {
        (_, []) => Err(ChowError::NoContributor),
        (Some(v), [u]) if v == *u => Ok(v),
        (_, [_]) => Err(ChowError::Internal(
            "root descent and exhaustive scan disagree".into(),
        )),
        _ => Err(ChowError::MultipleContributors(contributors)),
    }
}

/// Is there a group element carrying `from` onto `to` pointwise? Exact:
/// base points must already agree, and the leftover conditions on
/// `(u, v0, v1)` are linear.
pub fn orbit_equivalent(from: &DualConfig, to: &DualConfig) -> bool {
    if from.n() != to.n() || from.collapsed() != to.collapsed() {
        return false;
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 1..=from.n() {
        if from.collapsed().contains(i) {
            continue;
        }
        let [a0, a1, a2] = from.point(i).coords();
        let [b0, b1, b2] = to.point(i).coords();
        if &(a1 * b2) - &(a2 * b1) != Rat::zero() {
            return false;
        }
        let mu = if !b1.is_zero() {
            a1 / b1
        } else {
            a2 / b2
        };
        rows.push(vec![a0.clone(), a1.clone(), a2.clone()]);
        rhs.push(&mu * b0);
    }
    match affine_solutions(&rows, &rhs, 3) {
        None => false,
        Some(sol) if sol.basis.is_empty() => !sol.particular[0].is_zero(),
        Some(sol) => !sol.coordinate_pinned_to(0, &Rat::zero()),
    }
}

/// The height coordinates of a dual point: the representative scaled so the
/// `(a1, a2)` part is canonical. The group shears the height and leaves the
/// direction part alone, with no per-point rescaling to track.
fn height_rep(p: &ProjPoint) -> Option<[Rat; 3]> {
    let [a0, a1, a2] = p.coords();
    if a1.is_zero() && a2.is_zero() {
        return None;
    }
    let scale = if !a1.is_zero() { a1 } else { a2 };
    Some([a0 / scale, a1 / scale, a2 / scale])
}

/// A canonical representative of a configuration's orbit, as a comparison
/// key. In height coordinates the group acts affinely, so steering the
/// first projectively independent triple to fixed heights pins a unique
/// group solution — the same one for every member of the orbit.
pub fn canonical_orbit_key(config: &DualConfig) -> Result<String, ChowError> {
    let n = config.n();
    let reps: Vec<Option<[Rat; 3]>> = (1..=n).map(|i| height_rep(config.point(i))).collect();
    let mut triple = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (Some(ri), Some(rj), Some(rk)) = (&reps[i], &reps[j], &reps[k]) else {
                    continue;
                };
                if !det3(&[ri.clone(), rj.clone(), rk.clone()]).is_zero() {
                    triple = Some([i, j, k]);
                    break 'outer;
                }
            }
        }
    }
    let Some(triple) = triple else {
        return Err(ChowError::DegenerateConfig(
            "no three dual points in general position off the special point".into(),
        ));
    };
    let rows: Vec<Vec<Rat>> = triple
        .iter()
        .map(|&i| reps[i].as_ref().unwrap().to_vec())
        .collect();
    const TARGETS: [[i64; 3]; 7] = [
        [1, 1, 1],
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
    ];
    for target in TARGETS {
        let rhs: Vec<Rat> = target.iter().map(|&v| Rat::int(v)).collect();
        let sol = affine_solutions(&rows, &rhs, 3)
            .ok_or_else(|| ChowError::Internal("independent triple must be solvable".into()))?;
        if !sol.basis.is_empty() {
            return Err(ChowError::Internal(
                "independent triple must pin the group".into(),
            ));
        }
        let [u, v0, v1] = <[Rat; 3]>::try_from(sol.particular)
            .map_err(|_| ChowError::Internal("three group coordinates expected".into()))?;
        if u.is_zero() {
            continue;
        }
        let normalized: Vec<Option<[Rat; 3]>> = reps
            .iter()
            .map(|rep| {
                rep.as_ref().map(|[h, d1, d2]| {
                    let sheared = &(&(&u * h) + &(&v0 * d1)) + &(&v1 * d2);
                    [sheared, d1.clone(), d2.clone()]
                })
            })
            .collect();
        return serde_json::to_string(&(&normalized, config.collapsed()))
            .map_err(|e| ChowError::Internal(e.to_string()));
    }
    Err(ChowError::Internal(
        "some target must give a nonzero scale".into(),
    ))
}

/// Dimension of the stabilizer and whether the two torus scales were forced
/// equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub dimension: usize,
    pub scalars_identified: bool,
}

/// Stabilizer of three lines in general position together with marked
/// points on the first: in the frame where the lines are the coordinate
/// lines, the stabilizer is the diagonal torus, and any marked point off
/// the two frame vertices identifies the scales.
pub fn stabilizer_report(
    lines: [&ProjLine; 3],
    base_points: &[ProjPoint],
) -> Result<StabilizerReport, ChowError> {
    let frame = [
        lines[0].coeffs().clone(),
        lines[1].coeffs().clone(),
        lines[2].coeffs().clone(),
    ];
    if det3(&frame).is_zero() {
        return Err(ChowError::DegenerateInput(
            "the three lines are not in general position".into(),
        ));
    }
    let mut constrained = false;
    for q in base_points {
        if !incident(q, lines[0]) {
            return Err(ChowError::DegenerateInput(format!(
                "marked point {q:?} is off the first line"
            )));
        }
        let y1 = dot3(lines[1].coeffs(), q.coords());
        let y2 = dot3(lines[2].coeffs(), q.coords());
        if !y1.is_zero() && !y2.is_zero() {
            constrained = true;
        }
    }
    Ok(StabilizerReport {
        dimension: if constrained { 1 } else { 2 },
        scalars_identified: constrained,
    })
}

/// Stabilizer dimension of an arrangement: the special line and the last
/// two marked lines frame the plane, and all base points must stay fixed.
pub fn stabilizer_dimension(arr: &LineArrangement) -> Result<usize, ChowError> {
    let n = arr.n;
    let mut pts = Vec::with_capacity(n);
    for i in 1..=n {
        pts.push(arr.base_point(i)?);
    }
    let report = stabilizer_report([&arr.special, arr.line(n - 1), arr.line(n)], &pts)?;
    Ok(report.dimension)
}
