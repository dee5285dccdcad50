//! Building sets, boundary strata and blow-up bookkeeping.
//!
//! The moduli of a fixed restriction form an open subset of the projective
//! s-space; the loci `H(I)` of arrangements where the lines of `I` concur
//! are the building set of the compactification. This module handles the
//! combinatorics of that family: merging overlapping factors, transversality
//! codimension arithmetic, enumeration of boundary strata through the
//! degeneration engine, the blow-up schedule, and the translation of the
//! factors through a weight-one line into boundary divisors of a
//! Hassett space.
//!
//! Two label regimes coexist deliberately. Intersections downstairs in the
//! s-space are described by transversal labels (pairwise sharing at most one
//! line), the output of [`g_factors`]. Boundary strata of the blown-up space
//! are described by generalized labels in which factors may also be nested,
//! one factor per boundary divisor; those come out of [`strata`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::projgeom::{subsets_of_size, IndexSet};
use crate::rational::Rat;
use crate::sha::enumerate::{enumerate_combinatorial_types, realize, Skeleton};
use crate::sha::ShaError;
use crate::weights::{destabilizes, WeightVector};

#[derive(Debug, Error)]
pub enum WonderfulError {
    #[error(transparent)]
    Sha(#[from] ShaError),
    #[error("the forced union {0} of overlapping factors is the whole arrangement: empty locus")]
    EmptyIntersection(IndexSet),
    #[error("label codimension {got} exceeds the ambient dimension {max}")]
    DimensionUnderflow { got: usize, max: usize },
    #[error("the first weight must be 1, got {0}")]
    FirstWeightNotOne(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// One locus `H(I)`: the arrangements whose lines `I` share a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingSetElement {
    #[serde(rename = "I")]
    pub set: IndexSet,
    /// Codimension of the locus in the ambient s-space.
    pub codim: usize,
}

/// All loci destabilized by `w`, sorted by codimension then lexicographically.
pub fn building_set(w: &WeightVector) -> Vec<BuildingSetElement> {
    let n = w.n();
    let mut out = Vec::new();
    for size in 3..n {
        for set in subsets_of_size(n, size) {
            if destabilizes(w, &set) {
                out.push(BuildingSetElement {
                    codim: size - 2,
                    set,
                });
            }
        }
    }
    out.sort_by(|x, y| x.codim.cmp(&y.codim).then(x.set.cmp(&y.set)));
    out
}

/// A set of factors naming a boundary stratum or an intersection of loci.
///
/// Factors must pairwise either be nested or share at most one line, so the
/// containment forest of the family is well defined.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StratumLabel {
    factors: Vec<IndexSet>,
}

impl StratumLabel {
    pub fn new(mut factors: Vec<IndexSet>) -> Result<StratumLabel, WonderfulError> {
        factors.sort();
        for (i, a) in factors.iter().enumerate() {
            if a.len() < 3 {
                return Err(WonderfulError::InvalidLabel(format!(
                    "factor {a} has fewer than 3 lines"
                )));
            }
            for b in &factors[i + 1..] {
                if a == b {
                    return Err(WonderfulError::InvalidLabel(format!(
                        "duplicate factor {a}"
                    )));
                }
                let nested = a.is_subset_of(b) || b.is_subset_of(a);
                if !nested && a.intersection_size(b) > 1 {
                    return Err(WonderfulError::InvalidLabel(format!(
                        "factors {a} and {b} overlap without nesting"
                    )));
                }
            }
        }
        Ok(StratumLabel { factors })
    }

    pub fn empty() -> StratumLabel {
        StratumLabel {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[IndexSet] {
        &self.factors
    }

    /// Number of factors: the codimension of the stratum in the blown-up
    /// space.
    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    /// Do all factors pairwise share at most one line? Such labels are in
    /// normal form for intersections downstairs.
    pub fn is_transversal(&self) -> bool {
        for (i, a) in self.factors.iter().enumerate() {
            for b in &self.factors[i + 1..] {
                if a.intersection_size(b) > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Does `self` contain every factor of `other`?
    pub fn contains(&self, other: &StratumLabel) -> bool {
        other.factors.iter().all(|f| self.factors.contains(f))
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "generic");
        }
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{fac}")?;
        }
        Ok(())
    }
}

/// Normal form of an intersection of loci: any two factors sharing two or
/// more lines force all their lines through one point, so they merge into
/// their union; repeat until the family is transversal. A union swallowing
/// the whole arrangement leaves an empty locus.
pub fn g_factors(n: usize, family: &[IndexSet]) -> Result<StratumLabel, WonderfulError> {
    if family.is_empty() {
        return Err(WonderfulError::InvalidLabel(
            "an intersection needs at least one factor".into(),
        ));
    }
    for set in family {
        if set.len() < 3 {
            return Err(WonderfulError::InvalidLabel(format!(
                "factor {set} has fewer than 3 lines"
            )));
        }
    }
    let mut sets: Vec<IndexSet> = family.to_vec();
    loop {
        let mut merged = None;
        'search: for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if sets[i].intersection_size(&sets[j]) >= 2 {
                    merged = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = merged else {
            break;
        };
        let union = sets[i].union(&sets[j]);
        if union.len() >= n {
            return Err(WonderfulError::EmptyIntersection(union));
        }
        sets.remove(j);
        sets[i] = union;
    }
    sets.sort();
    sets.dedup();
    StratumLabel::new(sets)
}

/// Partial codimension sums `r_0..r_s` of the factors, largest factors
/// first; the intersection downstairs has dimension `(n-3) - r_s` when the
/// label is transversal.
pub fn transversal_codims(label: &StratumLabel, n: usize) -> Result<Vec<usize>, WonderfulError> {
    if n < 3 {
        return Err(WonderfulError::InvalidLabel(format!(
            "no ambient space for n = {n}"
        )));
    }
    let mut factors = label.factors().to_vec();
    factors.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut out = vec![0usize];
    let mut acc = 0usize;
    for f in &factors {
        if f.len() + 1 > n {
            return Err(WonderfulError::InvalidLabel(format!(
                "factor {f} does not fit into an arrangement of {n} lines"
            )));
        }
        acc += f.len() - 2;
        out.push(acc);
    }
    if acc > n - 3 {
        return Err(WonderfulError::DimensionUnderflow {
            got: acc,
            max: n - 3,
        });
    }
    Ok(out)
}

/// Can the factors be realized simultaneously, and exactly, by a rational
/// arrangement degeneration? Exactness keeps a label off the deeper locus
/// it would otherwise be absorbed by.
pub fn realizable(label: &StratumLabel, n: usize, seed: u64) -> bool {
    let Ok(sk) = Skeleton::from_sets(n, label.factors()) else {
        return false;
    };
    realize(&sk, seed).is_ok()
}

/// All realizable boundary-stratum labels for `w`, the open stratum's empty
/// label included, sorted by depth then factors.
pub fn strata(
    w: &WeightVector,
    max_depth: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<StratumLabel>, WonderfulError> {
    let types = enumerate_combinatorial_types(w, max_depth, budget, seed)?;
    let mut labels = Vec::with_capacity(types.len());
    for ty in &types {
        labels.push(StratumLabel::new(ty.skeleton.vertex_sets())?);
    }
    labels.sort_by(|a, b| a.depth().cmp(&b.depth()).then(a.cmp(b)));
    Ok(labels)
}

/// The points of the s-space cut out by the building set: transversal labels
/// of full codimension, split into honest transversal intersections and
/// single merged factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroDimensionalCensus {
    pub transversal: Vec<StratumLabel>,
    pub merged: Vec<StratumLabel>,
}

impl ZeroDimensionalCensus {
    pub fn total(&self) -> usize {
        self.transversal.len() + self.merged.len()
    }
}

pub fn zero_dimensional_census(
    w: &WeightVector,
    budget: usize,
    seed: u64,
) -> Result<ZeroDimensionalCensus, WonderfulError> {
    let n = w.n();
    let labels = strata(w, n - 3, budget, seed)?;
    let mut census = ZeroDimensionalCensus {
        transversal: Vec::new(),
        merged: Vec::new(),
    };
    for label in labels {
        if label.depth() == 0 || !label.is_transversal() {
            continue;
        }
        let codims = transversal_codims(&label, n)?;
        if *codims.last().unwrap() != n - 3 {
            continue;
        }
        if label.depth() == 1 {
            census.merged.push(label);
        } else {
            census.transversal.push(label);
        }
    }
    Ok(census)
}

/// The building set in blow-up order: increasing dimension of the locus,
/// i.e. decreasing factor size; ties broken lexicographically.
pub fn blow_up_sequence(w: &WeightVector) -> Vec<BuildingSetElement> {
    let mut seq = building_set(w);
    seq.sort_by(|x, y| y.set.len().cmp(&x.set.len()).then(x.set.cmp(&y.set)));
    seq
}

/// A boundary divisor `δ_I` of the Hassett space seen through the
/// distinguished weight-one line: the factor with that line removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HassettElement {
    #[serde(rename = "I")]
    pub set: IndexSet,
    pub codim: usize,
}

impl HassettElement {
    pub fn new(set: IndexSet, w: &WeightVector) -> Result<HassettElement, WonderfulError> {
        let n = w.n();
        if set.contains(1) {
            return Err(WonderfulError::InvalidLabel(format!(
                "{set} contains the distinguished line"
            )));
        }
        if set.len() < 2 || set.len() + 2 > n {
            return Err(WonderfulError::InvalidLabel(format!(
                "{set} is not a boundary divisor index"
            )));
        }
        if w.sum_over(&set) <= Rat::one() {
            return Err(WonderfulError::InvalidLabel(format!(
                "{set} carries weight at most 1"
            )));
        }
        Ok(HassettElement {
            codim: set.len() - 1,
            set,
        })
    }
}

/// Split the building set along membership of the distinguished line 1:
/// factors through it become Hassett boundary divisors `δ_{I∖1}`, the rest
/// are returned unchanged.
pub fn hassett_split(
    w: &WeightVector,
) -> Result<(Vec<HassettElement>, Vec<BuildingSetElement>), WonderfulError> {
    if w.get(1) != &Rat::one() {
        return Err(WonderfulError::FirstWeightNotOne(w.get(1).to_string()));
    }
    let n = w.n();
    let mut hassett = Vec::new();
    let mut remainder = Vec::new();
    for elem in building_set(w) {
        if elem.set.contains(1) {
            let reduced = IndexSet::new(elem.set.iter().filter(|&i| i != 1).collect());
            if w.sum_over(&reduced) <= Rat::one() {
                return Err(WonderfulError::Internal(format!(
                    "{} is destabilized but {} is not a boundary divisor",
                    elem.set, reduced
                )));
            }
            let h = HassettElement::new(reduced, w)?;
            if h.codim != elem.codim {
                return Err(WonderfulError::Internal(format!(
                    "codimension mismatch for {}",
                    elem.set
                )));
            }
            hassett.push(h);
        } else {
            remainder.push(elem);
        }
    }
    // The translation is a bijection: scan the divisor side directly.
    let mut direct = Vec::new();
    for size in 2..n - 1 {
        for set in subsets_of_size(n, size) {
            if !set.contains(1) && w.sum_over(&set) > Rat::one() {
                direct.push(set);
            }
        }
    }
    let mut got: Vec<IndexSet> = hassett.iter().map(|h| h.set.clone()).collect();
    got.sort();
    direct.sort();
    if got != direct {
        return Err(WonderfulError::Internal(
            "the divisor translation is not a bijection".into(),
        ));
    }
    Ok((hassett, remainder))
}

/// DOT rendering of the containment order on the given labels; an edge means
/// one more factor.
pub fn stratum_poset_dot(labels: &[StratumLabel]) -> String {
    let mut out = String::from("digraph strata {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, l) in labels.iter().enumerate() {
        out.push_str(&format!("  s{i} [label=\"{l}\"];\n"));
    }
    for (i, small) in labels.iter().enumerate() {
        for (j, big) in labels.iter().enumerate() {
            if big.depth() == small.depth() + 1 && big.contains(small) {
                out.push_str(&format!("  s{i} -> s{j};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}
