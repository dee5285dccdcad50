//! Stable hyperplane arrangement trees.
//!
//! A `Sha` is a rooted tree of plane models. The root carries all `n` marked
//! lines; every other component replaces an unstable concurrency of its
//! parent, keeping the lines through that point and acquiring the exceptional
//! line as its own special line. Components are stored in an arena with the
//! root at index 0.
//!
//! Every plane model is kept in the normal form produced by
//! [`arrangement_from_s`]: the special line is `t0 = 0`, the last two local
//! lines are `t2` and `t1 - t2`, and the remaining lines read
//! `s_m t0 + t1 - a_m t2` (with `a = 0` for the next-to-last slot). Model
//! parameters are therefore recoverable from the line forms alone, which keeps
//! the stored data minimal and lets downstream consumers work in exact model
//! coordinates.

pub mod enumerate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, SolveOutcome};
use crate::projgeom::{
    arrangement_from_s, generic_base_params, incident, meet, multiple_points, h_locus_equations,
    GeomError, IndexSet, LineArrangement, ProjLine, ProjPoint, SCoordinates,
};
use crate::rational::{Rat, RatStream};
use crate::weights::{destabilizes, WeightVector};

#[derive(Debug, Error)]
pub enum ShaError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("no component with id {0}")]
    NoSuchComponent(usize),
    #[error("invalid sha: {0}")]
    Invalid(String),
    #[error("not a destabilized point: {0}")]
    NotDestabilized(String),
    #[error("moduli coordinates must have length {expected}, got {got}")]
    BadModuliLength { expected: usize, got: usize },
    #[error("replacement is itself unstable: {0}")]
    UnstableReplacement(String),
    #[error("sampling failed: {0}")]
    SamplingFailed(String),
    #[error("enumeration budget of {0} states exceeded")]
    BudgetExceeded(usize),
    #[error("malformed sha document: {0}")]
    Json(String),
}

/// Where and how a child component is glued onto its parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    /// The separated point in the parent's plane model.
    pub point: ProjPoint,
    /// Exactly the parent lines through the point; the child carries them.
    pub lines_into_child: IndexSet,
}

/// One vertex of the tree: a plane model whose lines are keyed by their
/// global indices, together with the attachments of its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShaComponent {
    pub id: usize,
    pub lines: BTreeMap<usize, ProjLine>,
    pub special: ProjLine,
    /// Child component id -> attachment data.
    pub attachments: BTreeMap<usize, Attachment>,
}

impl ShaComponent {
    /// Global indices of the lines on this component.
    pub fn line_indices(&self) -> IndexSet {
        IndexSet::new(self.lines.keys().copied().collect())
    }

    /// Number of lines on this component.
    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// Lines visible on this component but not passing into any child.
    pub fn markings(&self) -> IndexSet {
        let into_children: BTreeSet<usize> = self
            .attachments
            .values()
            .flat_map(|att| att.lines_into_child.iter())
            .collect();
        IndexSet::new(
            self.lines
                .keys()
                .copied()
                .filter(|i| !into_children.contains(i))
                .collect(),
        )
    }

    /// All points of the plane model, off the special line, where at least
    /// three of the component's lines concur, with the full incident sets.
    pub fn plane_multiple_points(&self) -> BTreeMap<ProjPoint, IndexSet> {
        let keys: Vec<usize> = self.lines.keys().copied().collect();
        let mut out = BTreeMap::new();
        for (xi, &i) in keys.iter().enumerate() {
            for &j in &keys[xi + 1..] {
                let Ok(p) = meet(&self.lines[&i], &self.lines[&j]) else {
                    continue;
                };
                if incident(&p, &self.special) || out.contains_key(&p) {
                    continue;
                }
                let through: Vec<usize> = keys
                    .iter()
                    .copied()
                    .filter(|k| incident(&p, &self.lines[k]))
                    .collect();
                if through.len() >= 3 {
                    out.insert(p, IndexSet::new(through));
                }
            }
        }
        out
    }

    /// Concurrencies of the plane model that are not attachment points.
    pub fn free_multiple_points(&self) -> BTreeMap<ProjPoint, IndexSet> {
        let attached: BTreeSet<&ProjPoint> =
            self.attachments.values().map(|att| &att.point).collect();
        self.plane_multiple_points()
            .into_iter()
            .filter(|(p, _)| !attached.contains(p))
            .collect()
    }

    /// Index sets of all concurrencies of the plane model, attachments
    /// included, sorted.
    pub fn concurrency_sets(&self) -> Vec<IndexSet> {
        let mut sets: Vec<IndexSet> = self.plane_multiple_points().into_values().collect();
        sets.sort();
        sets
    }

    /// Recover `(a, s)` of the normal form, local order. Errors when the
    /// component is not a valid normal-form plane model.
    pub fn model_params(&self) -> Result<(Vec<Rat>, Vec<Rat>), ShaError> {
        let k = self.lines.len();
        if k < 3 {
            return Err(ShaError::Invalid(format!(
                "component {} has {} lines; a plane model needs at least 3",
                self.id, k
            )));
        }
        if self.special != ProjLine::special() {
            return Err(ShaError::Invalid(format!(
                "component {} does not use the normal-form special line",
                self.id
            )));
        }
        let ordered: Vec<&ProjLine> = self.lines.values().collect();
        let mut a = Vec::with_capacity(k - 3);
        let mut s = Vec::with_capacity(k - 2);
        for (m, line) in ordered.iter().enumerate().take(k - 2) {
            let c = line.coeffs();
            if c[1].is_zero() {
                return Err(ShaError::Invalid(format!(
                    "component {} line slot {} is not in normal form",
                    self.id,
                    m + 1
                )));
            }
            s.push(&c[0] / &c[1]);
            if m < k - 3 {
                a.push(-(&c[2] / &c[1]));
            }
        }
        let sc = SCoordinates::new(s.clone())
            .map_err(|e| ShaError::Invalid(format!("component {}: {e}", self.id)))?;
        let rebuilt = arrangement_from_s(k, &a, &sc)
            .map_err(|e| ShaError::Invalid(format!("component {}: {e}", self.id)))?;
        for (j, line) in ordered.iter().enumerate() {
            if &rebuilt.lines[j] != *line {
                return Err(ShaError::Invalid(format!(
                    "component {} line slot {} is not in normal form",
                    self.id,
                    j + 1
                )));
            }
        }
        Ok((a, s))
    }

    /// Base parameters for the model replacing the concurrency of `set` at
    /// `p`: images of the line directions under the chart on the pencil
    /// through `p` that sends the last three lines of `set` to 0, infinity
    /// and 1.
    pub fn pencil_chart(&self, set: &IndexSet, p: &ProjPoint) -> Result<Vec<Rat>, ShaError> {
        let k = set.len();
        let sorted: Vec<usize> = set.iter().collect();
        let pencil = linalg::nullspace(&[p.coords().to_vec()], 3);
        debug_assert_eq!(pencil.len(), 2);
        let basis_cols: Vec<Vec<Rat>> = (0..3)
            .map(|r| vec![pencil[0][r].clone(), pencil[1][r].clone()])
            .collect();
        let mut dirs: Vec<[Rat; 2]> = Vec::with_capacity(k);
        for &g in &sorted {
            let Some(line) = self.lines.get(&g) else {
                return Err(ShaError::NotDestabilized(format!(
                    "line {g} does not live on component {}",
                    self.id
                )));
            };
            match linalg::solve_affine(&basis_cols, line.coeffs(), 2) {
                SolveOutcome::Unique(xy) => dirs.push([xy[0].clone(), xy[1].clone()]),
                _ => {
                    return Err(ShaError::NotDestabilized(format!(
                        "line {g} is not in the pencil through {p}"
                    )))
                }
            }
        }
        let det2 = |u: &[Rat; 2], v: &[Rat; 2]| &u[0] * &v[1] - &u[1] * &v[0];
        let c_last = det2(&dirs[k - 1], &dirs[k - 2]);
        let c_prev = det2(&dirs[k - 1], &dirs[k - 3]);
        let mut aprime = Vec::with_capacity(k - 3);
        for d in dirs.iter().take(k - 3) {
            let num = det2(d, &dirs[k - 3]) * &c_last;
            let den = det2(d, &dirs[k - 2]) * &c_prev;
            aprime.push(num / den);
        }
        Ok(aprime)
    }

    /// Translate a set of global line indices into local model indices
    /// (1-based positions within this component's sorted keys).
    pub fn localize(&self, set: &IndexSet) -> Result<IndexSet, ShaError> {
        let keys: Vec<usize> = self.lines.keys().copied().collect();
        let mut local = Vec::with_capacity(set.len());
        for g in set.iter() {
            match keys.binary_search(&g) {
                Ok(pos) => local.push(pos + 1),
                Err(_) => {
                    return Err(ShaError::Invalid(format!(
                        "line {} does not live on component {}",
                        g, self.id
                    )))
                }
            }
        }
        Ok(IndexSet::new(local))
    }
}

/// A concurrency whose total weight exceeds 2, so the sha is not stable
/// there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DestabilizedLocus {
    pub component: usize,
    pub point: ProjPoint,
    pub lines: IndexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sha {
    n: usize,
    components: Vec<ShaComponent>,
}

impl Sha {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[ShaComponent] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn root(&self) -> &ShaComponent {
        &self.components[0]
    }

    pub fn component(&self, id: usize) -> Result<&ShaComponent, ShaError> {
        self.components.get(id).ok_or(ShaError::NoSuchComponent(id))
    }

    /// Parent component of `id`, or `None` for the root.
    pub fn parent_of(&self, id: usize) -> Option<usize> {
        self.components
            .iter()
            .find(|c| c.attachments.contains_key(&id))
            .map(|c| c.id)
    }

    /// Lines collapsed onto the special line of component `id`: everything
    /// not visible there.
    pub fn collapsed_lines(&self, id: usize) -> Result<IndexSet, ShaError> {
        Ok(self.component(id)?.line_indices().complement(self.n))
    }

    /// Single-component sha from a normal-form arrangement.
    pub fn from_arrangement(arr: &LineArrangement) -> Result<Sha, ShaError> {
        let lines: BTreeMap<usize, ProjLine> = (1..=arr.n)
            .map(|i| (i, arr.line(i).clone()))
            .collect();
        let sha = Sha {
            n: arr.n,
            components: vec![ShaComponent {
                id: 0,
                lines,
                special: arr.special.clone(),
                attachments: BTreeMap::new(),
            }],
        };
        sha.validate()?;
        Ok(sha)
    }

    /// Single-component sha with no concurrencies at all, sampled from the
    /// given seed.
    pub fn generic(n: usize, seed: u64) -> Result<Sha, ShaError> {
        if n < 3 {
            return Err(GeomError::UnsupportedN { min: 3, got: n }.into());
        }
        let a = generic_base_params(n, seed);
        let mut stream = RatStream::new(seed ^ 0x6a09_e667_f3bc_c909);
        for _ in 0..64 {
            let raw: Vec<Rat> = (0..n - 2).map(|_| stream.rat()).collect();
            let Ok(s) = SCoordinates::new(raw) else {
                continue;
            };
            let Ok(arr) = arrangement_from_s(n, &a, &s) else {
                continue;
            };
            if multiple_points(&arr).is_empty() {
                return Sha::from_arrangement(&arr);
            }
        }
        Err(ShaError::SamplingFailed(format!(
            "no concurrency-free arrangement with n = {n} found from seed {seed}"
        )))
    }

    pub fn validate(&self) -> Result<(), ShaError> {
        if self.components.is_empty() {
            return Err(ShaError::Invalid("a sha needs a root component".into()));
        }
        for (i, comp) in self.components.iter().enumerate() {
            if comp.id != i {
                return Err(ShaError::Invalid(format!(
                    "component at index {i} has id {}",
                    comp.id
                )));
            }
        }
        // Tree shape: unique parents and reachability from the root.
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        for comp in &self.components {
            for &child in comp.attachments.keys() {
                if child >= self.components.len() {
                    return Err(ShaError::Invalid(format!(
                        "component {} attaches unknown child {child}",
                        comp.id
                    )));
                }
                if child == 0 {
                    return Err(ShaError::Invalid("the root cannot be a child".into()));
                }
                if parent.insert(child, comp.id).is_some() {
                    return Err(ShaError::Invalid(format!(
                        "component {child} has two parents"
                    )));
                }
            }
        }
        let mut reached = vec![false; self.components.len()];
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            if reached[v] {
                return Err(ShaError::Invalid(format!(
                    "component {v} is reached twice"
                )));
            }
            reached[v] = true;
            stack.extend(self.components[v].attachments.keys().copied());
        }
        if let Some(orphan) = reached.iter().position(|r| !r) {
            return Err(ShaError::Invalid(format!(
                "component {orphan} is not reachable from the root"
            )));
        }
        if self.root().line_indices() != IndexSet::full(self.n) {
            return Err(ShaError::Invalid(format!(
                "the root must carry lines 1..={}, got {}",
                self.n,
                self.root().line_indices()
            )));
        }
        for comp in &self.components {
            comp.model_params()?;
            let mut points_seen: BTreeSet<&ProjPoint> = BTreeSet::new();
            for (&child, att) in &comp.attachments {
                if att.lines_into_child.len() < 3 {
                    return Err(ShaError::Invalid(format!(
                        "attachment of {child} on {} separates fewer than 3 lines",
                        comp.id
                    )));
                }
                if incident(&att.point, &comp.special) {
                    return Err(ShaError::Invalid(format!(
                        "attachment of {child} on {} sits on the special line",
                        comp.id
                    )));
                }
                if !points_seen.insert(&att.point) {
                    return Err(ShaError::Invalid(format!(
                        "component {} has two attachments at {}",
                        comp.id, att.point
                    )));
                }
                let through: Vec<usize> = comp
                    .lines
                    .iter()
                    .filter(|(_, l)| incident(&att.point, l))
                    .map(|(&g, _)| g)
                    .collect();
                if IndexSet::new(through) != att.lines_into_child {
                    return Err(ShaError::Invalid(format!(
                        "attachment of {child} on {} does not match the lines through its point",
                        comp.id
                    )));
                }
                if self.components[child].line_indices() != att.lines_into_child {
                    return Err(ShaError::Invalid(format!(
                        "component {child} does not carry exactly the lines of its attachment"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Concurrencies (not yet separated) whose total weight exceeds 2.
    pub fn destabilized_loci(&self, w: &WeightVector) -> Result<Vec<DestabilizedLocus>, ShaError> {
        if w.n() != self.n {
            return Err(GeomError::LengthMismatch {
                expected: self.n,
                got: w.n(),
            }
            .into());
        }
        let mut out = Vec::new();
        for comp in &self.components {
            for (point, lines) in comp.free_multiple_points() {
                if destabilizes(w, &lines) {
                    out.push(DestabilizedLocus {
                        component: comp.id,
                        point,
                        lines,
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn is_stable(&self, w: &WeightVector) -> Result<bool, ShaError> {
        Ok(self.destabilized_loci(w)?.is_empty())
    }

    /// Separate the concurrency of the lines `set` on component `vertex`,
    /// attaching a new plane model whose moduli are `mu`.
    ///
    /// `set` must be the full set of lines through a common point off the
    /// special line that is not already an attachment point. `mu` picks the
    /// s-coordinates of the new model and must have length `|set| - 2`.
    pub fn stable_replacement(
        &self,
        vertex: usize,
        set: &IndexSet,
        mu: &SCoordinates,
    ) -> Result<Sha, ShaError> {
        let comp = self.component(vertex)?;
        let k = set.len();
        if k < 3 {
            return Err(ShaError::NotDestabilized(format!(
                "{set} has fewer than 3 lines"
            )));
        }
        for g in set.iter() {
            if !comp.lines.contains_key(&g) {
                return Err(ShaError::NotDestabilized(format!(
                    "line {g} does not live on component {vertex}"
                )));
            }
        }
        let sorted: Vec<usize> = set.iter().collect();
        let p = meet(&comp.lines[&sorted[0]], &comp.lines[&sorted[1]])
            .map_err(|_| ShaError::NotDestabilized("the first two lines coincide".into()))?;
        for &g in &sorted[2..] {
            if !incident(&p, &comp.lines[&g]) {
                return Err(ShaError::NotDestabilized(format!(
                    "the lines {set} do not share a point on component {vertex}"
                )));
            }
        }
        if incident(&p, &comp.special) {
            return Err(ShaError::NotDestabilized(
                "the common point sits on the special line".into(),
            ));
        }
        let through: Vec<usize> = comp
            .lines
            .iter()
            .filter(|(_, l)| incident(&p, l))
            .map(|(&g, _)| g)
            .collect();
        if IndexSet::new(through.clone()) != *set {
            return Err(ShaError::NotDestabilized(format!(
                "the full set of lines through the point is {}, not {set}",
                IndexSet::new(through)
            )));
        }
        if comp.attachments.values().any(|att| att.point == p) {
            return Err(ShaError::NotDestabilized(format!(
                "the point {p} is already separated"
            )));
        }
        if mu.len() != k - 2 {
            return Err(ShaError::BadModuliLength {
                expected: k - 2,
                got: mu.len(),
            });
        }

        let aprime = comp.pencil_chart(set, &p)?;
        let child_arr = arrangement_from_s(k, &aprime, mu)?;
        if multiple_points(&child_arr).values().any(|s| s.len() == k) {
            return Err(ShaError::UnstableReplacement(format!(
                "all of {set} concur again in the new model"
            )));
        }
        let child_id = self.components.len();
        let child_lines: BTreeMap<usize, ProjLine> = sorted
            .iter()
            .enumerate()
            .map(|(j, &g)| (g, child_arr.lines[j].clone()))
            .collect();
        let mut out = self.clone();
        out.components.push(ShaComponent {
            id: child_id,
            lines: child_lines,
            special: ProjLine::special(),
            attachments: BTreeMap::new(),
        });
        out.components[vertex].attachments.insert(
            child_id,
            Attachment {
                point: p,
                lines_into_child: set.clone(),
            },
        );
        out.validate()?;
        Ok(out)
    }

    /// Is every component rigid: do its concurrencies pin the model up to
    /// scaling?
    pub fn is_maximally_degenerate(&self) -> Result<bool, ShaError> {
        for comp in &self.components {
            if !self.component_is_rigid(comp.id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A component is rigid when the equations of all its concurrencies cut
    /// the s-space down to the scaling line.
    pub fn component_is_rigid(&self, id: usize) -> Result<bool, ShaError> {
        let comp = self.component(id)?;
        let k = comp.num_lines();
        let (a, _) = comp.model_params()?;
        let mut rows = Vec::new();
        for set in comp.concurrency_sets() {
            let local = comp.localize(&set)?;
            rows.extend(h_locus_equations(k, &a, &local)?);
        }
        Ok(linalg::rank(&rows, k - 2) == k - 3)
    }

    pub fn dual_graph(&self) -> DualGraph {
        let nodes = self
            .components
            .iter()
            .map(|c| DualGraphNode {
                id: c.id,
                markings: c.markings(),
                lines: c.line_indices(),
            })
            .collect();
        let mut edges = Vec::new();
        for comp in &self.components {
            for &child in comp.attachments.keys() {
                edges.push((comp.id, child));
            }
        }
        edges.sort();
        DualGraph { nodes, edges }
    }

    fn tree_node(&self, id: usize, attachment: Option<ProjPoint>) -> TreeNode {
        let comp = &self.components[id];
        TreeNode {
            id,
            markings: comp.markings().iter().collect(),
            attachment,
            children: comp
                .attachments
                .iter()
                .map(|(&c, att)| self.tree_node(c, Some(att.point.clone())))
                .collect(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = ShaJson {
            n: self.n,
            tree: self.tree_node(0, None),
            plane_models: self
                .components
                .iter()
                .map(|c| PlaneModel {
                    id: c.id,
                    lines: c.lines.clone(),
                    special: c.special.clone(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("sha serialization cannot fail")
    }

    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_json_value())
            .expect("sha serialization cannot fail");
        out.push('\n');
        out
    }

    pub fn from_json_str(text: &str) -> Result<Sha, ShaError> {
        let doc: ShaJson =
            serde_json::from_str(text).map_err(|e| ShaError::Json(e.to_string()))?;
        let mut components: Vec<Option<ShaComponent>> = vec![None; doc.plane_models.len()];
        for model in doc.plane_models {
            if model.id >= components.len() {
                return Err(ShaError::Json(format!(
                    "plane model id {} out of range",
                    model.id
                )));
            }
            if components[model.id].is_some() {
                return Err(ShaError::Json(format!("duplicate plane model {}", model.id)));
            }
            components[model.id] = Some(ShaComponent {
                id: model.id,
                lines: model.lines,
                special: model.special,
                attachments: BTreeMap::new(),
            });
        }
        let mut components: Vec<ShaComponent> = components
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or(ShaError::Json(format!("missing plane model {i}"))))
            .collect::<Result<_, _>>()?;
        let mut visited = BTreeSet::new();
        let mut stack = vec![&doc.tree];
        while let Some(node) = stack.pop() {
            if node.id >= components.len() || !visited.insert(node.id) {
                return Err(ShaError::Json(format!(
                    "tree node {} is out of range or repeated",
                    node.id
                )));
            }
            for child in &node.children {
                if child.id >= components.len() {
                    return Err(ShaError::Json(format!(
                        "tree node {} is out of range",
                        child.id
                    )));
                }
                let point = child
                    .attachment
                    .clone()
                    .ok_or_else(|| ShaError::Json(format!("node {} lacks an attachment", child.id)))?;
                let lines_into_child = IndexSet::new(
                    components[child.id].lines.keys().copied().collect(),
                );
                components[node.id].attachments.insert(
                    child.id,
                    Attachment {
                        point,
                        lines_into_child,
                    },
                );
                stack.push(child);
            }
        }
        if doc.tree.id != 0 {
            return Err(ShaError::Json("the tree root must be component 0".into()));
        }
        let sha = Sha {
            n: doc.n,
            components,
        };
        sha.validate()?;
        Ok(sha)
    }
}

#[derive(Serialize, Deserialize)]
struct TreeNode {
    id: usize,
    markings: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    attachment: Option<ProjPoint>,
    children: Vec<TreeNode>,
}

#[derive(Serialize, Deserialize)]
struct PlaneModel {
    id: usize,
    lines: BTreeMap<usize, ProjLine>,
    special: ProjLine,
}

#[derive(Serialize, Deserialize)]
struct ShaJson {
    n: usize,
    tree: TreeNode,
    plane_models: Vec<PlaneModel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualGraphNode {
    pub id: usize,
    pub markings: IndexSet,
    pub lines: IndexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub nodes: Vec<DualGraphNode>,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dual {\n  node [shape=circle];\n");
        for node in &self.nodes {
            let extra = if node.id == 0 { ", peripheries=2" } else { "" };
            out.push_str(&format!(
                "  c{} [label=\"{}\"{}];\n",
                node.id, node.markings, extra
            ));
        }
        for (p, c) in &self.edges {
            out.push_str(&format!("  c{p} -- c{c};\n"));
        }
        out.push_str("}\n");
        out
    }
}
