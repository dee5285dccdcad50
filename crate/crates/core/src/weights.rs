//! Weight vectors for marked lines, the wall-and-chamber structure of the
//! weight domain, and the infeasibility certificate showing no weight choice
//! reproduces the unweighted point-moduli compactification.
//!
//! A weight vector assigns `w_i ∈ (0, 1]` to each of the `n` marked lines,
//! with `Σ w_i > 2`; the special line always carries weight 1. Two kinds of
//! hyperplanes matter: `Σ_{i∈I} w_i = 2` (a multiple point of the lines in
//! `I` becomes permitted/forbidden) and `Σ_{i∈I} w_i = 1` (the lines in `I`
//! may coincide). A multiple-point wall can only separate interior chambers
//! when `3 ≤ |I| ≤ n−1`: two-line sums never exceed 2 strictly. Coincidence
//! walls are reported but never change the moduli problem downstream.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::feasibility::{fourier_motzkin, Constraint, Verdict};
use crate::projgeom::{subsets_of_size, IndexSet};
use crate::rational::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight {value} at position {index} outside (0, 1]")]
    WeightOutOfRange { index: usize, value: String },
    #[error("total weight {0} is not greater than 2")]
    TotalTooSmall(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("a proper subset of the base weight sums above 2")]
    BaseSubsetTooHeavy,
    #[error("endpoint lies exactly on wall {0}")]
    EndpointOnWall(String),
    #[error("target weight is not admissible for the base weight")]
    NotAdmissible,
    #[error("no wall-generic chain found (retry budget exhausted)")]
    NoChainFound,
    #[error("exclusion system requires n >= 5, got {0}")]
    BadN(usize),
}

/// Weights for the `n` marked lines: each in `(0, 1]`, total above 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightVector {
    w: Vec<Rat>,
}

impl WeightVector {
    pub fn new(w: Vec<Rat>) -> Result<WeightVector, WeightError> {
        for (i, wi) in w.iter().enumerate() {
            if !wi.is_positive() || wi > &Rat::one() {
                return Err(WeightError::WeightOutOfRange {
                    index: i + 1,
                    value: wi.to_string(),
                });
            }
        }
        let total: Rat = w.iter().sum();
        if total <= Rat::int(2) {
            return Err(WeightError::TotalTooSmall(total.to_string()));
        }
        Ok(WeightVector { w })
    }

    /// The unit weight `1^n`.
    pub fn ones(n: usize) -> WeightVector {
        WeightVector::new(vec![Rat::one(); n]).expect("unit weights are valid for n >= 3")
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// Weight of line `i` (1-based).
    pub fn get(&self, i: usize) -> &Rat {
        &self.w[i - 1]
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.w
    }

    pub fn total(&self) -> Rat {
        self.w.iter().sum()
    }

    pub fn sum_over(&self, set: &IndexSet) -> Rat {
        set.iter().map(|i| self.get(i)).sum()
    }

    pub fn le_componentwise(&self, other: &WeightVector) -> bool {
        self.n() == other.n() && self.w.iter().zip(&other.w).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, wi) in self.w.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{wi}")?;
        }
        write!(f, ")")
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<WeightVector, D::Error> {
        let v = Vec::<Rat>::deserialize(de)?;
        WeightVector::new(v).map_err(serde::de::Error::custom)
    }
}

/// A weight vector all of whose proper subsets sum to at most 2. Moduli at
/// such weights are insensitive to every multiple point of multiplicity
/// below n, which makes them the natural chain starting points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BaseWeight {
    w0: WeightVector,
}

impl BaseWeight {
    pub fn new(w0: WeightVector) -> Result<BaseWeight, WeightError> {
        // Positivity makes the (n-1)-subsets the heaviest proper subsets.
        let total = w0.total();
        let two = Rat::int(2);
        for i in 1..=w0.n() {
            if &total - w0.get(i) > two {
                return Err(WeightError::BaseSubsetTooHeavy);
            }
        }
        Ok(BaseWeight { w0 })
    }

    /// The uniform base weight `2/(n-1) - 1/(100 n (n-1))` per line: total
    /// above 2, every proper subset strictly below 2, and no wall equation
    /// satisfied (the per-line value is (200n-1)/(100n(n-1)), and k times it
    /// can equal 1 or 2 only if 200n-1 divides 100·199 or 200·199, which
    /// fails for every n ≥ 3).
    pub fn standard(n: usize) -> BaseWeight {
        let c = Rat::new(2, (n as i64) - 1) - Rat::new(1, 100 * (n as i64) * ((n as i64) - 1));
        BaseWeight::new(WeightVector::new(vec![c; n]).expect("standard base weight is valid"))
            .expect("standard base weight satisfies the subset bound")
    }

    pub fn vector(&self) -> &WeightVector {
        &self.w0
    }
}

impl<'de> Deserialize<'de> for BaseWeight {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<BaseWeight, D::Error> {
        let v = WeightVector::deserialize(de)?;
        BaseWeight::new(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WallKind {
    /// `Σ_{i∈I} w_i = 2`: the lines of `I` may/may not share a point.
    MultiplePoint,
    /// `Σ_{i∈I} w_i = 1`: the lines of `I` may/may not coincide.
    Coincidence,
}

impl Serialize for WallKind {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            WallKind::MultiplePoint => ser.serialize_str("W"),
            WallKind::Coincidence => ser.serialize_str("Wtilde"),
        }
    }
}

impl<'de> Deserialize<'de> for WallKind {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<WallKind, D::Error> {
        let s = String::deserialize(de)?;
        match s.as_str() {
            "W" => Ok(WallKind::MultiplePoint),
            "Wtilde" => Ok(WallKind::Coincidence),
            other => Err(serde::de::Error::custom(format!("unknown wall kind {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Wall {
    pub kind: WallKind,
    #[serde(rename = "I")]
    pub indices: IndexSet,
}

impl Wall {
    fn target(&self) -> Rat {
        match self.kind {
            WallKind::MultiplePoint => Rat::int(2),
            WallKind::Coincidence => Rat::one(),
        }
    }

    /// Signed defect of the wall equation at `w`.
    pub fn eval(&self, w: &WeightVector) -> Rat {
        w.sum_over(&self.indices) - self.target()
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WallKind::MultiplePoint => write!(f, "W{}", self.indices),
            WallKind::Coincidence => write!(f, "Wt{}", self.indices),
        }
    }
}

/// Every wall that can separate chambers of the interior of the weight
/// domain: multiple-point walls for 3 ≤ |I| ≤ n−1 and coincidence walls for
/// 2 ≤ |I| ≤ n−1, in a fixed deterministic order.
pub fn separating_walls(n: usize) -> Vec<Wall> {
    let mut walls = Vec::new();
    for size in 3..n {
        for set in subsets_of_size(n, size) {
            walls.push(Wall {
                kind: WallKind::MultiplePoint,
                indices: set,
            });
        }
    }
    for size in 2..n {
        for set in subsets_of_size(n, size) {
            walls.push(Wall {
                kind: WallKind::Coincidence,
                indices: set,
            });
        }
    }
    walls
}

/// Is `w` admissible relative to the base weight: within the domain bounds
/// and componentwise at least `w0`?
pub fn is_admissible(w: &WeightVector, w0: &BaseWeight) -> Result<bool, WeightError> {
    if w.n() != w0.vector().n() {
        return Err(WeightError::LengthMismatch {
            expected: w0.vector().n(),
            got: w.n(),
        });
    }
    let bounds = w
        .as_slice()
        .iter()
        .all(|wi| wi.is_positive() && wi <= &Rat::one());
    Ok(bounds && w.total() >= Rat::int(2) && w0.vector().le_componentwise(w))
}

/// Does `w` destabilize a multiple point of the lines indexed by `I`?
pub fn destabilizes(w: &WeightVector, set: &IndexSet) -> bool {
    w.sum_over(set) > Rat::int(2)
}

fn assert_off_walls(w: &WeightVector, walls: &[Wall]) -> Result<(), WeightError> {
    for wall in walls {
        if wall.eval(w).is_zero() {
            return Err(WeightError::EndpointOnWall(wall.to_string()));
        }
    }
    Ok(())
}

/// All walls whose equation changes sign strictly along the segment from
/// `u` to `v`. Neither endpoint may satisfy a wall equation exactly.
pub fn walls_between(u: &WeightVector, v: &WeightVector) -> Result<Vec<Wall>, WeightError> {
    if u.n() != v.n() {
        return Err(WeightError::LengthMismatch {
            expected: u.n(),
            got: v.n(),
        });
    }
    let walls = separating_walls(u.n());
    assert_off_walls(u, &walls)?;
    assert_off_walls(v, &walls)?;
    Ok(walls
        .into_iter()
        .filter(|wall| wall.eval(u).signum() != wall.eval(v).signum())
        .collect())
}

/// The single multiple-point wall separating `u` from `v`, if exactly one
/// is crossed. Coincidence walls never separate the moduli problems and are
/// ignored here.
pub fn adjacent(u: &WeightVector, v: &WeightVector) -> Result<Option<Wall>, WeightError> {
    let mut crossed = walls_between(u, v)?
        .into_iter()
        .filter(|w| w.kind == WallKind::MultiplePoint);
    match (crossed.next(), crossed.next()) {
        (Some(w), None) => Ok(Some(w)),
        _ => Ok(None),
    }
}

/// Piecewise-linear monotone path `u → anchor → v`, evaluated at a global
/// parameter in [0, 2].
struct MonotonePath<'a> {
    u: &'a WeightVector,
    anchor: Vec<Rat>,
    v: &'a WeightVector,
}

impl MonotonePath<'_> {
    fn at(&self, t: &Rat) -> Vec<Rat> {
        let one = Rat::one();
        if t <= &one {
            self.u
                .as_slice()
                .iter()
                .zip(&self.anchor)
                .map(|(a, b)| a + &(t * &(b - a)))
                .collect()
        } else {
            let local = t - &one;
            self.anchor
                .iter()
                .zip(self.v.as_slice())
                .map(|(a, b)| a + &(&local * &(b - a)))
                .collect()
        }
    }

    /// Exact parameters where the wall equation vanishes along the path,
    /// restricted to sign changes.
    fn crossings(&self, wall: &Wall) -> Vec<Rat> {
        let eval = |x: &[Rat]| -> Rat {
            wall.indices.iter().map(|i| &x[i - 1]).sum::<Rat>() - wall.target()
        };
        let fu = eval(self.u.as_slice());
        let fa = eval(&self.anchor);
        let fv = eval(self.v.as_slice());
        let mut out = Vec::new();
        if fu.signum() * fa.signum() < 0 {
            out.push(&fu / &(&fu - &fa));
        }
        if fa.signum() * fv.signum() < 0 {
            out.push(Rat::one() + &fa / &(&fa - &fv));
        }
        out
    }
}

/// Build a componentwise-monotone chain of admissible weights from the base
/// weight to `w`, each consecutive pair separated by exactly one
/// multiple-point wall. The interpolation path is jittered by seeded
/// rationals until no two such walls are crossed at the same parameter.
pub fn weight_chain(
    w0: &BaseWeight,
    w: &WeightVector,
    seed: u64,
) -> Result<Vec<WeightVector>, WeightError> {
    if !is_admissible(w, w0)? {
        return Err(WeightError::NotAdmissible);
    }
    let u = w0.vector();
    let walls = separating_walls(u.n());
    assert_off_walls(u, &walls)?;
    assert_off_walls(w, &walls)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc2b2_ae3d_27d4_eb4f);
    'attempt: for _ in 0..64 {
        // Jitter factors in (0, 1) with moderate denominators.
        let anchor: Vec<Rat> = u
            .as_slice()
            .iter()
            .zip(w.as_slice())
            .map(|(a, b)| {
                let r = Rat::new(rng.gen_range(1..=999), 1000);
                a + &(&r * &(b - a))
            })
            .collect();
        let path = MonotonePath { u, anchor, v: w };
        if walls
            .iter()
            .any(|wall| (wall.indices.iter().map(|i| &path.anchor[i - 1]).sum::<Rat>() - wall.target()).is_zero())
        {
            continue 'attempt;
        }
        let mut crossings: Vec<(Rat, &Wall)> = Vec::new();
        for wall in walls.iter().filter(|x| x.kind == WallKind::MultiplePoint) {
            for t in path.crossings(wall) {
                crossings.push((t, wall));
            }
        }
        crossings.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in crossings.windows(2) {
            if pair[0].0 == pair[1].0 {
                continue 'attempt;
            }
        }
        if crossings.is_empty() {
            return Ok(vec![w.clone()]);
        }

        let mut chain = vec![u.clone()];
        for k in 0..crossings.len() - 1 {
            let lo = &crossings[k].0;
            let hi = &crossings[k + 1].0;
            // Midpoint first, then asymmetric fallbacks to dodge walls.
            let mut placed = false;
            for j in 1..=40i64 {
                let t = lo + &(&(hi - lo) * &Rat::new(j, j + 2));
                let point = path.at(&t);
                let candidate = WeightVector::new(point).map_err(|_| WeightError::NoChainFound)?;
                if walls.iter().all(|wall| !wall.eval(&candidate).is_zero()) {
                    chain.push(candidate);
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'attempt;
            }
        }
        chain.push(w.clone());
        return Ok(chain);
    }
    Err(WeightError::NoChainFound)
}

/// Certificate data for the weight-exclusion argument.
#[derive(Debug, Clone, Serialize)]
pub struct InfeasibilityWitness {
    pub n: usize,
    /// Three indices shared by a destabilized (n-1)-set and the stable one:
    /// their strict triple inequality contradicts the stable set's cap.
    pub witness_triple: [usize; 3],
    pub system_infeasible: bool,
    /// Verdict after dropping the cap inequality.
    pub relaxed_feasible: bool,
    /// The unit weight vector, checked to satisfy the relaxed system.
    pub relaxed_witness: Option<WeightVector>,
}

/// Inequalities forcing every line triple to be destabilized while the
/// lines `{2..n}` keep total weight at most 2, plus the domain bounds.
/// When `keep_cap` is false the cap on `{2..n}` is omitted.
pub fn exclusion_system(n: usize, keep_cap: bool) -> Vec<Constraint> {
    let mut sys = Vec::new();
    let unit = |i: usize| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n];
        v[i - 1] = Rat::one();
        v
    };
    for set in subsets_of_size(n, 3) {
        let mut coeffs = vec![Rat::zero(); n];
        for i in set.iter() {
            coeffs[i - 1] = Rat::one();
        }
        sys.push(Constraint::gt(coeffs, Rat::int(2)));
    }
    if keep_cap {
        let mut coeffs = vec![Rat::one(); n];
        coeffs[0] = Rat::zero();
        sys.push(Constraint::le(coeffs, Rat::int(2)));
    }
    for i in 1..=n {
        sys.push(Constraint::gt(unit(i), Rat::zero()));
        sys.push(Constraint::le(unit(i), Rat::one()));
    }
    sys
}

/// Show that no weight vector destabilizes all triples of every (n-1)-set
/// of lines while keeping one (n-1)-set stable: exhibit the contradicting
/// triple and confirm infeasibility by exact elimination. Dropping the
/// stability cap makes the system feasible, with the unit weights as a
/// witness.
pub fn exclusion_certificate(n: usize) -> Result<InfeasibilityWitness, WeightError> {
    if n < 5 {
        return Err(WeightError::BadN(n));
    }
    // The stable set is {2..n}; among the destabilized (n-1)-sets is
    // {1..n}\{2}, overlapping it in {3..n} — at least three indices.
    let witness_triple = [3, 4, 5];
    let full = exclusion_system(n, true);
    let relaxed = exclusion_system(n, false);
    let system_infeasible = fourier_motzkin(&full, n) == Verdict::Infeasible;
    let relaxed_feasible = fourier_motzkin(&relaxed, n) == Verdict::Feasible;
    let ones = WeightVector::ones(n);
    let ones_ok = relaxed
        .iter()
        .all(|c| c.satisfied_by(ones.as_slice()));
    Ok(InfeasibilityWitness {
        n,
        witness_triple,
        system_infeasible,
        relaxed_feasible,
        relaxed_witness: if ones_ok { Some(ones) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::int(n)
    }

    fn qr(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn wv(entries: &[(i64, i64)]) -> WeightVector {
        WeightVector::new(entries.iter().map(|&(p, d)| qr(p, d)).collect()).unwrap()
    }

    #[test]
    fn weight_vector_invariants() {
        assert!(WeightVector::new(vec![q(1), q(1), q(1)]).is_ok());
        assert!(matches!(
            WeightVector::new(vec![q(0), q(1), q(1), q(1)]),
            Err(WeightError::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            WeightVector::new(vec![qr(3, 2), q(1), q(1)]),
            Err(WeightError::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            WeightVector::new(vec![qr(1, 2); 4]),
            Err(WeightError::TotalTooSmall(_))
        ));
    }

    #[test]
    fn standard_base_weight_is_wall_free() {
        for n in 3..=8usize {
            let w0 = BaseWeight::standard(n);
            let v = w0.vector();
            assert!(v.total() > q(2));
            for wall in separating_walls(n) {
                assert!(
                    !wall.eval(v).is_zero(),
                    "n={n}: base weight on wall {wall}"
                );
            }
            // Proper subsets stay at or below 2.
            let total = v.total();
            for i in 1..=n {
                assert!(&total - v.get(i) <= q(2));
            }
        }
    }

    #[test]
    fn base_weight_rejects_heavy_subsets() {
        let v = WeightVector::new(vec![q(1), q(1), q(1), qr(1, 2)]).unwrap();
        assert!(matches!(
            BaseWeight::new(v),
            Err(WeightError::BaseSubsetTooHeavy)
        ));
    }

    #[test]
    fn admissibility_examples() {
        let n = 5;
        let w0 = BaseWeight::standard(n);
        assert!(is_admissible(&WeightVector::ones(n), &w0).unwrap());
        assert!(is_admissible(w0.vector(), &w0).unwrap());
        // Drop one coordinate strictly below the base weight.
        let mut entries = w0.vector().as_slice().to_vec();
        entries[2] = &entries[2] - &qr(1, 1000);
        entries[0] = q(1);
        entries[1] = q(1);
        let w = WeightVector::new(entries).unwrap();
        assert!(!is_admissible(&w, &w0).unwrap());
        assert!(matches!(
            is_admissible(&WeightVector::ones(4), &w0),
            Err(WeightError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn destabilizes_examples() {
        let ones = WeightVector::ones(5);
        assert!(destabilizes(&ones, &IndexSet::new(vec![1, 2, 3])));
        let w0 = BaseWeight::standard(6);
        for size in 2..=5usize {
            let set = IndexSet::new((1..=size).collect());
            assert!(!destabilizes(w0.vector(), &set));
        }
        let w = wv(&[(1, 1), (1, 1), (2, 3), (2, 3), (2, 3)]);
        assert!(!destabilizes(&w, &IndexSet::new(vec![3, 4, 5])));
        assert!(destabilizes(&w, &IndexSet::new(vec![1, 2, 3])));
    }

    #[test]
    fn walls_between_uniform_endpoints() {
        let n = 5;
        let u = WeightVector::new(vec![qr(11, 20); n]).unwrap();
        let v = WeightVector::ones(n);
        let crossed = walls_between(&u, &v).unwrap();
        assert_eq!(crossed.len(), 10);
        assert!(crossed
            .iter()
            .all(|w| w.kind == WallKind::MultiplePoint && w.indices.len() == 3));
        assert!(walls_between(&v, &v).unwrap().is_empty());
    }

    #[test]
    fn endpoint_on_wall_detected() {
        let u = wv(&[(1, 2), (1, 2), (1, 1), (1, 1), (1, 1)]);
        let v = WeightVector::ones(5);
        assert!(matches!(
            walls_between(&u, &v),
            Err(WeightError::EndpointOnWall(_))
        ));
    }

    #[test]
    fn adjacent_matches_wall_count() {
        // Cross exactly the triple wall {1,2,3}.
        let u = wv(&[(13, 20), (13, 20), (13, 20), (19, 20), (49, 50)]);
        let v = wv(&[(7, 10), (7, 10), (7, 10), (19, 20), (49, 50)]);
        let wall = adjacent(&u, &v).unwrap().unwrap();
        assert_eq!(wall.kind, WallKind::MultiplePoint);
        assert_eq!(wall.indices, IndexSet::new(vec![1, 2, 3]));
        // Same chamber: nothing separates.
        let v2 = wv(&[(33, 50), (13, 20), (13, 20), (19, 20), (49, 50)]);
        assert!(adjacent(&u, &v2).unwrap().is_none());
        // Several triple walls crossed at once: not adjacent.
        let u4 = wv(&[(13, 20), (13, 20), (13, 20), (13, 20), (49, 50)]);
        let v4 = wv(&[(7, 10), (7, 10), (7, 10), (7, 10), (49, 50)]);
        assert_eq!(
            walls_between(&u4, &v4)
                .unwrap()
                .iter()
                .filter(|w| w.kind == WallKind::MultiplePoint)
                .count(),
            4
        );
        assert!(adjacent(&u4, &v4).unwrap().is_none());
    }

    #[test]
    fn chain_from_base_to_unit_weights() {
        let n = 5;
        let w0 = BaseWeight::standard(n);
        let w = WeightVector::ones(n);
        let expected_walls = walls_between(w0.vector(), &w)
            .unwrap()
            .into_iter()
            .filter(|x| x.kind == WallKind::MultiplePoint)
            .count();
        assert_eq!(expected_walls, 15);
        let chain = weight_chain(&w0, &w, 7).unwrap();
        assert_eq!(chain.len(), expected_walls + 1);
        assert_eq!(chain.first().unwrap(), w0.vector());
        assert_eq!(chain.last().unwrap(), &w);
        for pair in chain.windows(2) {
            assert!(pair[0].le_componentwise(&pair[1]));
            assert!(
                adjacent(&pair[0], &pair[1]).unwrap().is_some(),
                "consecutive chain entries must be one wall apart"
            );
        }
    }

    #[test]
    fn chain_within_one_chamber_is_single_entry() {
        let n = 5;
        let w0 = BaseWeight::standard(n);
        let bump = qr(1, 100_000);
        let w = WeightVector::new(
            w0.vector().as_slice().iter().map(|x| x + &bump).collect(),
        )
        .unwrap();
        assert!(walls_between(w0.vector(), &w).unwrap().is_empty());
        assert_eq!(weight_chain(&w0, &w, 3).unwrap(), vec![w]);
    }

    #[test]
    fn chain_rejects_inadmissible_target() {
        let w0 = BaseWeight::standard(5);
        let mut entries = w0.vector().as_slice().to_vec();
        entries[0] = &entries[0] - &qr(1, 1000);
        entries[4] = q(1);
        let w = WeightVector::new(entries).unwrap();
        assert!(matches!(
            weight_chain(&w0, &w, 1),
            Err(WeightError::NotAdmissible)
        ));
    }

    #[test]
    fn chains_are_wall_generic_across_seeds_and_n() {
        for n in 5..=6usize {
            let w0 = BaseWeight::standard(n);
            let w = WeightVector::ones(n);
            for seed in [0u64, 1, 2] {
                let chain = weight_chain(&w0, &w, seed).unwrap();
                for pair in chain.windows(2) {
                    assert!(adjacent(&pair[0], &pair[1]).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn chamber_equivalence_of_destabilization() {
        // If no wall separates u and v, they destabilize the same sets.
        let n = 5;
        let u = wv(&[(13, 20), (13, 20), (13, 20), (19, 20), (49, 50)]);
        let v = wv(&[(33, 50), (16, 25), (13, 20), (19, 20), (49, 50)]);
        assert!(walls_between(&u, &v).unwrap().is_empty());
        for size in 2..=n - 1 {
            for set in subsets_of_size(n, size) {
                assert_eq!(destabilizes(&u, &set), destabilizes(&v, &set));
            }
        }
    }

    #[test]
    fn destabilization_is_monotone() {
        let n = 6;
        let u = WeightVector::new(vec![qr(2, 5); n]).unwrap();
        let v = WeightVector::new(vec![qr(7, 10); n]).unwrap();
        assert!(u.le_componentwise(&v));
        for size in 2..=n - 1 {
            for set in subsets_of_size(n, size) {
                if destabilizes(&u, &set) {
                    assert!(destabilizes(&v, &set));
                }
            }
        }
    }

    #[test]
    fn exclusion_certificate_for_small_n() {
        for n in 5..=8usize {
            let cert = exclusion_certificate(n).unwrap();
            assert!(cert.system_infeasible, "n={n}");
            assert!(cert.relaxed_feasible, "n={n}");
            assert_eq!(cert.witness_triple, [3, 4, 5]);
            assert_eq!(cert.relaxed_witness.unwrap(), WeightVector::ones(n));
        }
        assert!(matches!(exclusion_certificate(4), Err(WeightError::BadN(4))));
    }

    #[test]
    fn witness_triple_contradiction_is_explicit() {
        // The triple inequality demands sum > 2 while the cap keeps every
        // subset of {2..n} at or below 2.
        let n = 6;
        let cert = exclusion_certificate(n).unwrap();
        let triple = IndexSet::new(cert.witness_triple.to_vec());
        let stable = IndexSet::new((2..=n).collect());
        assert!(triple.is_subset_of(&stable));
    }

    #[test]
    fn wall_serialization_shape() {
        let wall = Wall {
            kind: WallKind::MultiplePoint,
            indices: IndexSet::new(vec![1, 2, 3]),
        };
        let json = serde_json::to_value(&wall).unwrap();
        assert_eq!(json["kind"], "W");
        assert_eq!(json["I"], serde_json::json!([1, 2, 3]));
        let tilde = Wall {
            kind: WallKind::Coincidence,
            indices: IndexSet::new(vec![2, 5]),
        };
        assert_eq!(serde_json::to_value(&tilde).unwrap()["kind"], "Wtilde");
    }
}
