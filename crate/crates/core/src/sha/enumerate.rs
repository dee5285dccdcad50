//! Breadth-first enumeration of the combinatorial degeneration types
//! reachable from a generic arrangement under a fixed weight.
//!
//! A degeneration type is recorded as a [`Skeleton`]: the rooted tree of
//! separated line sets, stripped of all continuous moduli. The search adds
//! one separated concurrency at a time and keeps only skeletons that are
//! actually realizable as a sha over the rationals; realization is the final
//! arbiter, the combinatorial side conditions are necessary filters.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::projgeom::{
    arrangement_from_s, generic_base_params, h_locus_equations, multiple_points, subsets_of_size,
    IndexSet, SCoordinates,
};
use crate::linalg;
use crate::rational::{Rat, RatStream};
use crate::weights::{destabilizes, WeightVector};

use super::{Sha, ShaError};

const REALIZE_TRIES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SkeletonNode {
    pub lines: IndexSet,
    pub children: Vec<SkeletonNode>,
}

impl SkeletonNode {
    fn canonicalize(&mut self) {
        for c in &mut self.children {
            c.canonicalize();
        }
        self.children.sort();
    }

    fn count(&self) -> usize {
        1 + self.children.iter().map(SkeletonNode::count).sum::<usize>()
    }

    fn collect_sets(&self, out: &mut Vec<IndexSet>) {
        for c in &self.children {
            out.push(c.lines.clone());
            c.collect_sets(out);
        }
    }

    fn paths(&self, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for (i, c) in self.children.iter().enumerate() {
            cur.push(i);
            c.paths(cur, out);
            cur.pop();
        }
    }

    fn at_path(&self, path: &[usize]) -> &SkeletonNode {
        path.iter().fold(self, |node, &i| &node.children[i])
    }

    fn at_path_mut(&mut self, path: &[usize]) -> &mut SkeletonNode {
        path.iter().fold(self, |node, &i| &mut node.children[i])
    }
}

/// The tree of separated line sets of a degeneration; the root carries all
/// `n` lines.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Skeleton {
    pub n: usize,
    pub root: SkeletonNode,
}

impl Skeleton {
    /// The skeleton of a generic arrangement: a bare root.
    pub fn trivial(n: usize) -> Skeleton {
        Skeleton {
            n,
            root: SkeletonNode {
                lines: IndexSet::full(n),
                children: Vec::new(),
            },
        }
    }

    /// Number of separated concurrencies (non-root vertices).
    pub fn num_degenerations(&self) -> usize {
        self.root.count() - 1
    }

    /// The non-root line sets, sorted.
    pub fn vertex_sets(&self) -> Vec<IndexSet> {
        let mut out = Vec::new();
        self.root.collect_sets(&mut out);
        out.sort();
        out
    }

    pub fn validate(&self) -> Result<(), ShaError> {
        if self.root.lines != IndexSet::full(self.n) {
            return Err(ShaError::Invalid(format!(
                "the skeleton root must carry lines 1..={}",
                self.n
            )));
        }
        fn rec(node: &SkeletonNode) -> Result<(), ShaError> {
            let k = node.lines.len();
            for (i, c) in node.children.iter().enumerate() {
                if !c.lines.is_subset_of(&node.lines) {
                    return Err(ShaError::Invalid(format!(
                        "skeleton vertex {} is not contained in its parent {}",
                        c.lines, node.lines
                    )));
                }
                if c.lines.len() < 3 || c.lines.len() + 1 > k {
                    return Err(ShaError::Invalid(format!(
                        "skeleton vertex {} has invalid size inside {}",
                        c.lines, node.lines
                    )));
                }
                for c2 in &node.children[i + 1..] {
                    if c.lines.intersection_size(&c2.lines) > 1 {
                        return Err(ShaError::Invalid(format!(
                            "sibling skeleton vertices {} and {} share a pencil",
                            c.lines, c2.lines
                        )));
                    }
                }
                rec(c)?;
            }
            Ok(())
        }
        rec(&self.root)
    }

    /// Rebuild the tree from its vertex sets; the containment forest of a
    /// family that is pairwise nested or almost disjoint is unique.
    pub fn from_sets(n: usize, sets: &[IndexSet]) -> Result<Skeleton, ShaError> {
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if a == b {
                    return Err(ShaError::Invalid(format!("duplicate vertex set {a}")));
                }
                let nested = a.is_subset_of(b) || b.is_subset_of(a);
                if !nested && a.intersection_size(b) > 1 {
                    return Err(ShaError::Invalid(format!(
                        "vertex sets {a} and {b} overlap without nesting"
                    )));
                }
            }
        }
        let mut ordered: Vec<&IndexSet> = sets.iter().collect();
        ordered.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut root = SkeletonNode {
            lines: IndexSet::full(n),
            children: Vec::new(),
        };
        for set in ordered {
            let mut path: Vec<usize> = Vec::new();
            loop {
                let node = root.at_path(&path);
                match node
                    .children
                    .iter()
                    .position(|c| set.is_subset_of(&c.lines))
                {
                    Some(i) => path.push(i),
                    None => break,
                }
            }
            root.at_path_mut(&path).children.push(SkeletonNode {
                lines: set.clone(),
                children: Vec::new(),
            });
        }
        root.canonicalize();
        let sk = Skeleton { n, root };
        sk.validate()?;
        Ok(sk)
    }
}

/// A realizable degeneration type together with one witness sha.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedType {
    pub skeleton: Skeleton,
    pub sha: Sha,
}

fn localize_family(parent: &IndexSet, sets: &[IndexSet]) -> BTreeSet<IndexSet> {
    let sorted: Vec<usize> = parent.iter().collect();
    sets.iter()
        .map(|s| {
            IndexSet::new(
                s.iter()
                    .map(|g| sorted.binary_search(&g).expect("set inside parent") + 1)
                    .collect(),
            )
        })
        .collect()
}

/// Find an s-vector whose arrangement has exactly the given concurrencies.
fn realize_s(
    k: usize,
    a: &[Rat],
    family: &BTreeSet<IndexSet>,
    stream: &mut RatStream,
) -> Result<SCoordinates, ShaError> {
    let mut rows = Vec::new();
    for set in family {
        rows.extend(h_locus_equations(k, a, set)?);
    }
    let basis = linalg::nullspace(&rows, k - 2);
    if basis.is_empty() {
        return Err(ShaError::SamplingFailed(format!(
            "the concurrencies overdetermine a {k}-line model"
        )));
    }
    for _ in 0..REALIZE_TRIES {
        let mut s = vec![Rat::zero(); k - 2];
        for b in &basis {
            let c = stream.rat();
            for (si, bi) in s.iter_mut().zip(b) {
                *si = &*si + &(&c * bi);
            }
        }
        let Ok(sc) = SCoordinates::new(s) else {
            continue;
        };
        let arr = arrangement_from_s(k, a, &sc)?;
        let got: BTreeSet<IndexSet> = multiple_points(&arr).into_values().collect();
        if got == *family {
            return Ok(sc);
        }
    }
    Err(ShaError::SamplingFailed(format!(
        "no {k}-line model with exactly the requested concurrencies"
    )))
}

/// Construct a sha realizing the skeleton over a generic base.
///
/// Every vertex model is sampled so that its concurrencies are exactly the
/// vertex's children; a skeleton whose concurrencies force extra incidences
/// is therefore rejected, which keeps distinct degeneration types disjoint.
pub fn realize(skeleton: &Skeleton, seed: u64) -> Result<Sha, ShaError> {
    skeleton.validate()?;
    let n = skeleton.n;
    let a = generic_base_params(n, seed);
    let mut stream = RatStream::new(seed ^ 0x517c_c1b7_2722_0a95);
    let root_sets: Vec<IndexSet> = skeleton
        .root
        .children
        .iter()
        .map(|c| c.lines.clone())
        .collect();
    let family = localize_family(&skeleton.root.lines, &root_sets);
    let s = realize_s(n, &a, &family, &mut stream)?;
    let arr = arrangement_from_s(n, &a, &s)?;
    let mut sha = Sha::from_arrangement(&arr)?;
    let mut queue: VecDeque<(&SkeletonNode, usize)> = VecDeque::new();
    queue.push_back((&skeleton.root, 0));
    while let Some((node, comp_id)) = queue.pop_front() {
        for child in &node.children {
            let aprime = {
                let comp = sha.component(comp_id)?;
                let point = comp
                    .plane_multiple_points()
                    .into_iter()
                    .find(|(_, set)| *set == child.lines)
                    .map(|(p, _)| p)
                    .ok_or_else(|| {
                        ShaError::SamplingFailed(format!(
                            "realized model lost the concurrency {}",
                            child.lines
                        ))
                    })?;
                comp.pencil_chart(&child.lines, &point)?
            };
            let grand: Vec<IndexSet> = child.children.iter().map(|g| g.lines.clone()).collect();
            let local = localize_family(&child.lines, &grand);
            let mu = realize_s(child.lines.len(), &aprime, &local, &mut stream)?;
            sha = sha.stable_replacement(comp_id, &child.lines, &mu)?;
            queue.push_back((child, sha.num_components() - 1));
        }
    }
    Ok(sha)
}

/// Candidate concurrencies that could be separated next at a vertex.
fn candidate_moves(node: &SkeletonNode, w: &WeightVector) -> Vec<IndexSet> {
    let k = node.lines.len();
    let sorted: Vec<usize> = node.lines.iter().collect();
    let mut out = Vec::new();
    for size in 3..k {
        for pos in subsets_of_size(k, size) {
            let set = IndexSet::new(pos.iter().map(|p| sorted[p - 1]).collect());
            if !destabilizes(w, &set) {
                continue;
            }
            if node
                .children
                .iter()
                .any(|c| c.lines.intersection_size(&set) > 1)
            {
                continue;
            }
            out.push(set);
        }
    }
    out
}

/// All realizable degeneration types for the weight `w`, breadth-first by
/// number of separated concurrencies, starting from the generic type.
///
/// `max_depth` bounds the number of non-root vertices, `budget` the number
/// of accepted types, and `seed` fixes every random draw, so the output is
/// deterministic.
pub fn enumerate_combinatorial_types(
    w: &WeightVector,
    max_depth: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<EnumeratedType>, ShaError> {
    let n = w.n();
    let trivial = Skeleton::trivial(n);
    let base = realize(&trivial, seed)?;
    if budget == 0 {
        return Err(ShaError::BudgetExceeded(0));
    }
    let mut visited: BTreeSet<Skeleton> = BTreeSet::new();
    visited.insert(trivial.clone());
    let mut out = vec![EnumeratedType {
        skeleton: trivial.clone(),
        sha: base,
    }];
    let mut queue: VecDeque<Skeleton> = VecDeque::new();
    queue.push_back(trivial);
    while let Some(sk) = queue.pop_front() {
        if sk.num_degenerations() >= max_depth {
            continue;
        }
        let mut paths = Vec::new();
        sk.root.paths(&mut Vec::new(), &mut paths);
        for path in paths {
            let vertex = sk.root.at_path(&path);
            for set in candidate_moves(vertex, w) {
                let mut next = sk.clone();
                next.root.at_path_mut(&path).children.push(SkeletonNode {
                    lines: set,
                    children: Vec::new(),
                });
                next.root.canonicalize();
                if !visited.insert(next.clone()) {
                    continue;
                }
                let Ok(sha) = realize(&next, seed) else {
                    continue;
                };
                if out.len() >= budget {
                    return Err(ShaError::BudgetExceeded(budget));
                }
                out.push(EnumeratedType {
                    skeleton: next.clone(),
                    sha,
                });
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

/// The degeneration types in which every component is rigid.
pub fn enumerate_maximally_degenerate(
    w: &WeightVector,
    budget: usize,
    seed: u64,
) -> Result<Vec<EnumeratedType>, ShaError> {
    let all = enumerate_combinatorial_types(w, 3 * w.n(), budget, seed)?;
    let mut out = Vec::new();
    for ty in all {
        if ty.sha.is_maximally_degenerate()? {
            out.push(ty);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rat;
    use crate::weights::WeightVector;

    fn ones(n: usize) -> WeightVector {
        WeightVector::ones(n)
    }

    fn by_depth(types: &[EnumeratedType]) -> Vec<usize> {
        let max = types
            .iter()
            .map(|t| t.skeleton.num_degenerations())
            .max()
            .unwrap_or(0);
        let mut counts = vec![0usize; max + 1];
        for t in types {
            counts[t.skeleton.num_degenerations()] += 1;
        }
        counts
    }

    #[test]
    fn four_lines_have_five_types() {
        let types = enumerate_combinatorial_types(&ones(4), 8, 1000, 3).unwrap();
        assert_eq!(types.len(), 5);
        assert_eq!(by_depth(&types), vec![1, 4]);
    }

    #[test]
    fn five_lines_full_count() {
        let types = enumerate_combinatorial_types(&ones(5), 8, 1000, 3).unwrap();
        assert_eq!(by_depth(&types), vec![1, 15, 35]);
        assert_eq!(types.len(), 51);
        for ty in &types {
            assert_eq!(
                ty.sha.num_components(),
                1 + ty.skeleton.num_degenerations()
            );
            assert!(ty.sha.is_stable(&ones(5)).unwrap());
            // Fully separated: no component keeps a free concurrency.
            for comp in ty.sha.components() {
                assert!(comp.free_multiple_points().is_empty());
            }
        }
        let deg = enumerate_maximally_degenerate(&ones(5), 1000, 3).unwrap();
        assert_eq!(deg.len(), 35);
        for ty in &deg {
            assert_eq!(ty.skeleton.num_degenerations(), 2);
        }
    }

    #[test]
    fn light_triples_leave_only_quadruples() {
        // Uniform 2/3: triples weigh exactly 2 and stay stable; only the
        // five quadruples destabilize.
        let w = WeightVector::new(vec![Rat::new(2, 3); 5]).unwrap();
        let types = enumerate_combinatorial_types(&w, 8, 1000, 9).unwrap();
        assert_eq!(by_depth(&types), vec![1, 5]);
        for ty in &types {
            for set in ty.skeleton.vertex_sets() {
                assert_eq!(set.len(), 4);
            }
        }
    }

    #[test]
    fn depth_and_budget_bounds() {
        let shallow = enumerate_combinatorial_types(&ones(5), 1, 1000, 3).unwrap();
        assert_eq!(shallow.len(), 16);
        let err = enumerate_combinatorial_types(&ones(5), 8, 10, 3).unwrap_err();
        assert!(matches!(err, ShaError::BudgetExceeded(10)));
    }

    #[test]
    fn realization_matches_skeleton() {
        let types = enumerate_combinatorial_types(&ones(5), 8, 1000, 17).unwrap();
        for ty in &types {
            let mut att_sets: Vec<IndexSet> = Vec::new();
            for comp in ty.sha.components() {
                for att in comp.attachments.values() {
                    att_sets.push(att.lines_into_child.clone());
                }
            }
            att_sets.sort();
            assert_eq!(att_sets, ty.skeleton.vertex_sets());
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let t1 = enumerate_combinatorial_types(&ones(5), 8, 1000, 11).unwrap();
        let t2 = enumerate_combinatorial_types(&ones(5), 8, 1000, 11).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn skeleton_round_trips_through_vertex_sets() {
        let types = enumerate_combinatorial_types(&ones(5), 8, 1000, 3).unwrap();
        for ty in &types {
            let sets = ty.skeleton.vertex_sets();
            let rebuilt = Skeleton::from_sets(5, &sets).unwrap();
            assert_eq!(rebuilt, ty.skeleton);
        }
    }

    #[test]
    fn from_sets_rejects_overlap() {
        let sets = vec![
            IndexSet::new(vec![1, 2, 3]),
            IndexSet::new(vec![2, 3, 4]),
        ];
        assert!(matches!(
            Skeleton::from_sets(5, &sets),
            Err(ShaError::Invalid(_))
        ));
    }
}
