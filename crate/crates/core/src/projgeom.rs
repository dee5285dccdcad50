//! Exact projective geometry of marked line arrangements in P^2.
//!
//! Coordinates are `[t0 : t1 : t2]`. The distinguished line `l_A` is
//! `(t0 = 0)`; all marked lines are required to stay distinct from it and to
//! cut it in pairwise distinct base points. An arrangement of `n` marked
//! lines with fixed base points is parametrized (up to the subgroup fixing
//! `l_A` pointwise) by an `s`-vector of length `n - 2` regarded as a point
//! of projective space: the standard model places the last three lines so
//! their base points sit at 0, infinity and 1 on `l_A`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::linalg::{cross3, dot3, rank};
use crate::rational::{Rat, RatStream};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("zero vector does not define a projective object")]
    ZeroVector,
    #[error("lines are proportional and do not meet in a single point")]
    ProportionalLines,
    #[error("points are equal and do not span a line")]
    EqualPoints,
    #[error("need at least three points for a collinearity test")]
    TooFewPoints,
    #[error("degenerate base points: {0}")]
    DegenerateBasePoints(String),
    #[error("index set size {size} outside [3, {max}]")]
    BadIndexSize { size: usize, max: usize },
    #[error("length mismatch: expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("s-coordinates must not all vanish")]
    ZeroSCoordinates,
    #[error("evaluation point lies on the special line (t0 = 0)")]
    BasePointOnSpecialLine,
    #[error("operation requires n >= {min}, got {got}")]
    UnsupportedN { min: usize, got: usize },
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
}

/// Sorted, deduplicated set of 1-based line indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut elems: Vec<usize>) -> IndexSet {
        elems.sort_unstable();
        elems.dedup();
        IndexSet(elems)
    }

    pub fn checked(elems: Vec<usize>, n: usize) -> Result<IndexSet, GeomError> {
        let set = IndexSet::new(elems);
        for &i in &set.0 {
            if i == 0 || i > n {
                return Err(GeomError::IndexOutOfRange(i, n));
            }
        }
        Ok(set)
    }

    pub fn full(n: usize) -> IndexSet {
        IndexSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn intersection_size(&self, other: &IndexSet) -> usize {
        self.0.iter().filter(|i| other.contains(**i)).count()
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v = self.0.clone();
        v.extend(other.iter());
        IndexSet::new(v)
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Complement inside {1, ..., n}.
    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet((1..=n).filter(|&i| !self.contains(i)).collect())
    }
}

/// All size-`size` subsets of {1, ..., n} in lexicographic order.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<IndexSet> {
    fn rec(start: usize, n: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
        if current.len() == size {
            out.push(IndexSet::new(current.clone()));
            return;
        }
        let needed = size - current.len();
        if start + needed > n + 1 {
            return;
        }
        for i in start..=(n + 1 - needed) {
            current.push(i);
            rec(i + 1, n, size, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if size <= n {
        rec(1, n, size, &mut Vec::with_capacity(size), &mut out);
    }
    out
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<IndexSet, D::Error> {
        let v = Vec::<usize>::deserialize(de)?;
        Ok(IndexSet::new(v))
    }
}

fn canonicalize(mut coords: [Rat; 3]) -> Result<[Rat; 3], GeomError> {
    let Some(first) = coords.iter().position(|c| !c.is_zero()) else {
        return Err(GeomError::ZeroVector);
    };
    let inv = coords[first].recip();
    for c in coords.iter_mut() {
        *c = &*c * &inv;
    }
    Ok(coords)
}

/// Point of P^2 in canonical form: the first nonzero coordinate equals 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: [Rat; 3],
}

impl ProjPoint {
    pub fn new(coords: [Rat; 3]) -> Result<ProjPoint, GeomError> {
        Ok(ProjPoint {
            coords: canonicalize(coords)?,
        })
    }

    pub fn from_ints(c: [i64; 3]) -> ProjPoint {
        ProjPoint::new([Rat::int(c[0]), Rat::int(c[1]), Rat::int(c[2])]).unwrap()
    }

    pub fn coords(&self) -> &[Rat; 3] {
        &self.coords
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}:{}:{}]",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<ProjPoint, D::Error> {
        let c = <[Rat; 3]>::deserialize(de)?;
        ProjPoint::new(c).map_err(serde::de::Error::custom)
    }
}

/// Line of P^2 given by its coefficient triple, in the same canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ProjLine {
    coeffs: [Rat; 3],
}

impl ProjLine {
    pub fn new(coeffs: [Rat; 3]) -> Result<ProjLine, GeomError> {
        Ok(ProjLine {
            coeffs: canonicalize(coeffs)?,
        })
    }

    pub fn from_ints(c: [i64; 3]) -> ProjLine {
        ProjLine::new([Rat::int(c[0]), Rat::int(c[1]), Rat::int(c[2])]).unwrap()
    }

    pub fn coeffs(&self) -> &[Rat; 3] {
        &self.coeffs
    }

    /// The special line l_A = (t0 = 0).
    pub fn special() -> ProjLine {
        ProjLine::from_ints([1, 0, 0])
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}*t0 + {}*t1 + {}*t2 = 0)",
            self.coeffs[0], self.coeffs[1], self.coeffs[2]
        )
    }
}

impl<'de> Deserialize<'de> for ProjLine {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<ProjLine, D::Error> {
        let c = <[Rat; 3]>::deserialize(de)?;
        ProjLine::new(c).map_err(serde::de::Error::custom)
    }
}

/// A line's dual point has the same coordinate triple.
pub fn dualize_line(l: &ProjLine) -> ProjPoint {
    ProjPoint {
        coords: l.coeffs.clone(),
    }
}

pub fn dualize_point(p: &ProjPoint) -> ProjLine {
    ProjLine {
        coeffs: p.coords.clone(),
    }
}

pub fn incident(p: &ProjPoint, l: &ProjLine) -> bool {
    dot3(&p.coords, &l.coeffs).is_zero()
}

/// Intersection point of two distinct lines.
pub fn meet(l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint, GeomError> {
    let c = cross3(&l1.coeffs, &l2.coeffs);
    ProjPoint::new(c).map_err(|_| GeomError::ProportionalLines)
}

/// Line through two distinct points.
pub fn join(p1: &ProjPoint, p2: &ProjPoint) -> Result<ProjLine, GeomError> {
    let c = cross3(&p1.coords, &p2.coords);
    ProjLine::new(c).map_err(|_| GeomError::EqualPoints)
}

/// Are all of the given points on one line? Requires at least three points.
pub fn collinear(points: &[ProjPoint]) -> Result<bool, GeomError> {
    if points.len() < 3 {
        return Err(GeomError::TooFewPoints);
    }
    let rows: Vec<Vec<Rat>> = points.iter().map(|p| p.coords.to_vec()).collect();
    Ok(rank(&rows, 3) <= 2)
}

/// Affine parameters of an arrangement with fixed base points.
///
/// Regarded projectively: the all-zero vector is excluded because it would
/// force every marked line through a single point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SCoordinates(Vec<Rat>);

impl SCoordinates {
    pub fn new(s: Vec<Rat>) -> Result<SCoordinates, GeomError> {
        if s.iter().all(|x| x.is_zero()) {
            return Err(GeomError::ZeroSCoordinates);
        }
        Ok(SCoordinates(s))
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<'de> Deserialize<'de> for SCoordinates {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<SCoordinates, D::Error> {
        let v = Vec::<Rat>::deserialize(de)?;
        SCoordinates::new(v).map_err(serde::de::Error::custom)
    }
}

/// `n` marked lines plus the special line, with the base points they cut
/// out on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineArrangement {
    pub n: usize,
    /// Marked lines; entry `i` is line `i + 1`.
    pub lines: Vec<ProjLine>,
    pub special: ProjLine,
    /// Base parameters `a_1..a_{n-3}` when built from the standard model.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<Vec<Rat>>,
    /// The s-vector used to build the arrangement, if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<Vec<Rat>>,
}

impl LineArrangement {
    pub fn line(&self, i: usize) -> &ProjLine {
        &self.lines[i - 1]
    }

    /// Base point of line `i` on the special line.
    pub fn base_point(&self, i: usize) -> Result<ProjPoint, GeomError> {
        meet(self.line(i), &self.special)
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        if self.lines.len() != self.n {
            return Err(GeomError::LengthMismatch {
                expected: self.n,
                got: self.lines.len(),
            });
        }
        let mut base = Vec::with_capacity(self.n);
        for i in 1..=self.n {
            if self.line(i) == &self.special {
                return Err(GeomError::DegenerateBasePoints(format!(
                    "line {i} coincides with the special line"
                )));
            }
            base.push(self.base_point(i)?);
        }
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                if base[i] == base[j] {
                    return Err(GeomError::DegenerateBasePoints(format!(
                        "lines {} and {} share the base point {}",
                        i + 1,
                        j + 1,
                        base[i]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Validate base parameters: pairwise distinct and distinct from 0 and 1.
fn check_base_params(a: &[Rat]) -> Result<(), GeomError> {
    let zero = Rat::zero();
    let one = Rat::one();
    for (i, ai) in a.iter().enumerate() {
        if *ai == zero || *ai == one {
            return Err(GeomError::DegenerateBasePoints(format!(
                "a_{} = {} collides with a reserved base point",
                i + 1,
                ai
            )));
        }
        for (j, aj) in a.iter().enumerate().skip(i + 1) {
            if ai == aj {
                return Err(GeomError::DegenerateBasePoints(format!(
                    "a_{} = a_{} = {}",
                    i + 1,
                    j + 1,
                    ai
                )));
            }
        }
    }
    Ok(())
}

/// Build the standard arrangement model.
///
/// Lines `1..=n-3` are `t1 - a_i t2 + s_i t0`; line `n-2` is
/// `s_{n-2} t0 + t1`; line `n-1` is `t2`; line `n` is `t1 - t2`. The base
/// points on the special line are `[0 : a_i : 1]`, `[0:0:1]`, `[0:1:0]` and
/// `[0:1:1]`, so the `a_i` must be pairwise distinct and avoid 0 and 1.
pub fn arrangement_from_s(
    n: usize,
    a: &[Rat],
    s: &SCoordinates,
) -> Result<LineArrangement, GeomError> {
    if n < 3 {
        return Err(GeomError::UnsupportedN { min: 3, got: n });
    }
    if a.len() != n - 3 {
        return Err(GeomError::LengthMismatch {
            expected: n - 3,
            got: a.len(),
        });
    }
    if s.len() != n - 2 {
        return Err(GeomError::LengthMismatch {
            expected: n - 2,
            got: s.len(),
        });
    }
    check_base_params(a)?;
    let sv = s.as_slice();
    let mut lines = Vec::with_capacity(n);
    for i in 0..n - 3 {
        lines.push(ProjLine::new([sv[i].clone(), Rat::one(), -&a[i]])?);
    }
    lines.push(ProjLine::new([
        sv[n - 3].clone(),
        Rat::one(),
        Rat::zero(),
    ])?);
    lines.push(ProjLine::from_ints([0, 0, 1]));
    lines.push(ProjLine::from_ints([0, 1, -1]));
    let arr = LineArrangement {
        n,
        lines,
        special: ProjLine::special(),
        a: Some(a.to_vec()),
        s: Some(sv.to_vec()),
    };
    arr.validate()?;
    Ok(arr)
}

/// All points off the special line where at least three marked lines concur,
/// each with the maximal set of lines through it.
pub fn multiple_points(arr: &LineArrangement) -> BTreeMap<ProjPoint, IndexSet> {
    let mut out = BTreeMap::new();
    for i in 1..=arr.n {
        for j in (i + 1)..=arr.n {
            let Ok(p) = meet(arr.line(i), arr.line(j)) else {
                continue;
            };
            if incident(&p, &arr.special) || out.contains_key(&p) {
                continue;
            }
            let through: Vec<usize> = (1..=arr.n)
                .filter(|&k| incident(&p, arr.line(k)))
                .collect();
            if through.len() >= 3 {
                out.insert(p, IndexSet::new(through));
            }
        }
    }
    out
}

/// Dual row of line `m` in the standard model: first coordinate is either a
/// single `s`-variable or zero, the other two are constants.
struct DualRow {
    var: Option<usize>,
    c1: Rat,
    c2: Rat,
}

fn dual_row(n: usize, a: &[Rat], m: usize) -> DualRow {
    if m <= n - 3 {
        DualRow {
            var: Some(m - 1),
            c1: Rat::one(),
            c2: -&a[m - 1],
        }
    } else if m == n - 2 {
        DualRow {
            var: Some(n - 3),
            c1: Rat::one(),
            c2: Rat::zero(),
        }
    } else if m == n - 1 {
        DualRow {
            var: None,
            c1: Rat::zero(),
            c2: Rat::one(),
        }
    } else {
        DualRow {
            var: None,
            c1: Rat::one(),
            c2: -Rat::one(),
        }
    }
}

/// Homogeneous linear equations in `s_1..s_{n-2}` cutting out the locus
/// where the lines of `I` concur. One equation per triple of `I`; for
/// generic base parameters the system has rank `|I| - 2`.
pub fn h_locus_equations(n: usize, a: &[Rat], set: &IndexSet) -> Result<Vec<Vec<Rat>>, GeomError> {
    if n < 4 {
        return Err(GeomError::UnsupportedN { min: 4, got: n });
    }
    if a.len() != n - 3 {
        return Err(GeomError::LengthMismatch {
            expected: n - 3,
            got: a.len(),
        });
    }
    if set.len() < 3 || set.len() > n - 1 {
        return Err(GeomError::BadIndexSize {
            size: set.len(),
            max: n - 1,
        });
    }
    check_base_params(a)?;
    for i in set.iter() {
        if i == 0 || i > n {
            return Err(GeomError::IndexOutOfRange(i, n));
        }
    }
    let elems = set.as_slice();
    let nvars = n - 2;
    let mut rows = Vec::new();
    let minor = |p: &DualRow, q: &DualRow| -> Rat { &p.c1 * &q.c2 - &p.c2 * &q.c1 };
    for x in 0..elems.len() {
        for y in (x + 1)..elems.len() {
            for z in (y + 1)..elems.len() {
                let r0 = dual_row(n, a, elems[x]);
                let r1 = dual_row(n, a, elems[y]);
                let r2 = dual_row(n, a, elems[z]);
                let mut row = vec![Rat::zero(); nvars];
                if let Some(v) = r0.var {
                    row[v] = &row[v] + &minor(&r1, &r2);
                }
                if let Some(v) = r1.var {
                    row[v] = &row[v] - &minor(&r0, &r2);
                }
                if let Some(v) = r2.var {
                    row[v] = &row[v] + &minor(&r0, &r1);
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Evaluate the recursively defined coordinate functions of the universal
/// family at a rational point off the special line, and check the exchange
/// identities they satisfy. Defined for n >= 5.
pub fn verify_universal_family(
    n: usize,
    a: &[Rat],
    s: &SCoordinates,
    t: &[Rat; 3],
) -> Result<bool, GeomError> {
    if n < 5 {
        return Err(GeomError::UnsupportedN { min: 5, got: n });
    }
    if a.len() != n - 3 {
        return Err(GeomError::LengthMismatch {
            expected: n - 3,
            got: a.len(),
        });
    }
    if s.len() != n - 2 {
        return Err(GeomError::LengthMismatch {
            expected: n - 2,
            got: s.len(),
        });
    }
    if t[0].is_zero() {
        return Err(GeomError::BasePointOnSpecialLine);
    }
    check_base_params(a)?;
    let sv = s.as_slice();
    let (t0, t1, t2) = (&t[0], &t[1], &t[2]);
    let zeta1 = t1 - &(&a[0] * t2) + &sv[0] * t0;
    let zeta2 = t1 - &(&a[1] * t2) + &sv[1] * t0;
    let mut zeta = vec![zeta1.clone(), zeta2.clone()];
    for j in 3..=n {
        // zeta_j subtracts t0 times the partial sum of same-parity s's below j.
        let base = if j % 2 == 1 { &zeta1 } else { &zeta2 };
        let mut acc = Rat::zero();
        let mut k = if j % 2 == 1 { 1 } else { 2 };
        while k <= j - 2 {
            acc += &sv[k - 1];
            k += 2;
        }
        zeta.push(base - &(t0 * &acc));
    }
    let ok1 = &a[1] * &zeta[2] - &a[0] * &zeta[3] == (&a[1] - &a[0]) * t1;
    let ok2 = &zeta[2] - &zeta[3] == (&a[1] - &a[0]) * t2;
    let mut ok3 = true;
    for i in 1..=n - 2 {
        if &zeta[i - 1] - &zeta[i + 1] != &sv[i - 1] * t0 {
            ok3 = false;
        }
    }
    Ok(ok1 && ok2 && ok3)
}

/// Seeded draw of base parameters: pairwise distinct, avoiding 0 and 1.
pub fn generic_base_params(n: usize, seed: u64) -> Vec<Rat> {
    let mut stream = RatStream::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut a: Vec<Rat> = Vec::with_capacity(n.saturating_sub(3));
    while a.len() < n.saturating_sub(3) {
        let mut avoid = a.clone();
        avoid.push(Rat::zero());
        avoid.push(Rat::one());
        a.push(stream.distinct_from(&avoid));
    }
    a
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

    #[test]
    fn canonical_form_scales_first_nonzero_to_one() {
        let p = ProjPoint::new([q(0), q(3), q(-6)]).unwrap();
        assert_eq!(p.coords(), &[q(0), q(1), q(-2)]);
        assert!(ProjPoint::new([q(0), q(0), q(0)]).is_err());
    }

    #[test]
    fn dualize_example() {
        // t1 - 2*t2 + 3*t0 has coefficient triple (3, 1, -2).
        let l = ProjLine::new([q(3), q(1), q(-2)]).unwrap();
        let p = dualize_line(&l);
        assert_eq!(p, ProjPoint::from_ints([3, 1, -2]));
        assert_eq!(dualize_point(&p), l);
    }

    #[test]
    fn meet_of_last_two_standard_lines() {
        let l_n1 = ProjLine::from_ints([0, 0, 1]);
        let l_n = ProjLine::from_ints([0, 1, -1]);
        assert_eq!(meet(&l_n, &l_n1).unwrap(), ProjPoint::from_ints([1, 0, 0]));
        assert_eq!(
            meet(&l_n, &l_n).unwrap_err(),
            GeomError::ProportionalLines
        );
    }

    #[test]
    fn meet_lies_on_both_lines() {
        let mut stream = RatStream::new(7);
        for _ in 0..50 {
            let l1 = ProjLine::new([stream.rat(), stream.rat(), stream.rat()]);
            let l2 = ProjLine::new([stream.rat(), stream.rat(), stream.rat()]);
            let (Ok(l1), Ok(l2)) = (l1, l2) else { continue };
            if l1 == l2 {
                continue;
            }
            let p = meet(&l1, &l2).unwrap();
            assert!(incident(&p, &l1) && incident(&p, &l2));
        }
    }

    #[test]
    fn collinearity_matches_triple_equation() {
        // Duals [s_i, 1, -a_i] are collinear exactly when
        // s1(a2-a3) - s2(a1-a3) + s3(a1-a2) = 0.
        let a = [q(2), q(3), q(5)];
        let mut stream = RatStream::new(11);
        for _ in 0..40 {
            let s1 = stream.rat();
            let s2 = stream.rat();
            let lhs = &s1 * &(&a[1] - &a[2]) - &s2 * &(&a[0] - &a[2]);
            // Solve for s3 so the equation holds exactly.
            let s3 = -&lhs / &(&a[0] - &a[1]);
            let pts = vec![
                ProjPoint::new([s1.clone(), q(1), -&a[0]]).unwrap(),
                ProjPoint::new([s2.clone(), q(1), -&a[1]]).unwrap(),
                ProjPoint::new([s3.clone(), q(1), -&a[2]]).unwrap(),
            ];
            assert!(collinear(&pts).unwrap());
            let off = ProjPoint::new([&s3 + &q(1), q(1), -&a[2]]).unwrap();
            assert!(!collinear(&[pts[0].clone(), pts[1].clone(), off]).unwrap());
        }
        assert_eq!(
            collinear(&[ProjPoint::from_ints([1, 0, 0])]).unwrap_err(),
            GeomError::TooFewPoints
        );
    }

    #[test]
    fn standard_model_base_points() {
        let n = 5;
        let a = vec![q(2), q(3)];
        let s = SCoordinates::new(vec![q(1), q(4), q(9)]).unwrap();
        let arr = arrangement_from_s(n, &a, &s).unwrap();
        assert_eq!(arr.base_point(1).unwrap(), ProjPoint::from_ints([0, 2, 1]));
        assert_eq!(arr.base_point(2).unwrap(), ProjPoint::from_ints([0, 3, 1]));
        assert_eq!(arr.base_point(3).unwrap(), ProjPoint::from_ints([0, 0, 1]));
        assert_eq!(arr.base_point(4).unwrap(), ProjPoint::from_ints([0, 1, 0]));
        assert_eq!(arr.base_point(5).unwrap(), ProjPoint::from_ints([0, 1, 1]));
    }

    #[test]
    fn degenerate_base_params_rejected() {
        let s = SCoordinates::new(vec![q(1), q(2), q(3)]).unwrap();
        assert!(matches!(
            arrangement_from_s(5, &[q(1), q(3)], &s),
            Err(GeomError::DegenerateBasePoints(_))
        ));
        assert!(matches!(
            arrangement_from_s(5, &[q(4), q(4)], &s),
            Err(GeomError::DegenerateBasePoints(_))
        ));
    }

    #[test]
    fn near_pencil_point_from_first_unit_vector() {
        // s = [1:0:0] makes lines 2..n concur at [1:0:0].
        let n = 5;
        let a = vec![q(2), q(3)];
        let s = SCoordinates::new(vec![q(1), q(0), q(0)]).unwrap();
        let arr = arrangement_from_s(n, &a, &s).unwrap();
        let mp = multiple_points(&arr);
        assert_eq!(mp.len(), 1);
        let (p, set) = mp.iter().next().unwrap();
        assert_eq!(*p, ProjPoint::from_ints([1, 0, 0]));
        assert_eq!(*set, IndexSet::new(vec![2, 3, 4, 5]));
    }

    #[test]
    fn vanishing_first_coordinate_gives_triple_point() {
        // s_1 = 0 puts lines 1, n-1, n through [1:0:0].
        let n = 5;
        let a = vec![q(2), q(3)];
        let s = SCoordinates::new(vec![q(0), q(5), q(7)]).unwrap();
        let arr = arrangement_from_s(n, &a, &s).unwrap();
        let mp = multiple_points(&arr);
        assert_eq!(mp.len(), 1);
        let (p, set) = mp.iter().next().unwrap();
        assert_eq!(*p, ProjPoint::from_ints([1, 0, 0]));
        assert_eq!(*set, IndexSet::new(vec![1, 4, 5]));
    }

    /// Brute-force concurrency scan over line triples; independent of the
    /// pair-grouping route used by `multiple_points`.
    fn naive_concurrency_scan(arr: &LineArrangement) -> BTreeMap<ProjPoint, IndexSet> {
        let mut out: BTreeMap<ProjPoint, Vec<usize>> = BTreeMap::new();
        for i in 1..=arr.n {
            for j in (i + 1)..=arr.n {
                for k in (j + 1)..=arr.n {
                    let (Ok(p1), Ok(p2)) = (
                        meet(arr.line(i), arr.line(j)),
                        meet(arr.line(j), arr.line(k)),
                    ) else {
                        continue;
                    };
                    if p1 == p2 && !incident(&p1, &arr.special) {
                        let e = out.entry(p1).or_default();
                        for x in [i, j, k] {
                            if !e.contains(&x) {
                                e.push(x);
                            }
                        }
                    }
                }
            }
        }
        out.into_iter()
            .map(|(p, v)| (p, IndexSet::new(v)))
            .collect()
    }

    #[test]
    fn multiple_points_agrees_with_naive_scan() {
        for seed in 0..10u64 {
            let n = 5 + (seed % 3) as usize;
            let a = generic_base_params(n, seed);
            let mut stream = RatStream::new(seed.wrapping_mul(31).wrapping_add(5));
            // Force a concurrency through a triple-point equation so the
            // scan has something to find: pick s on a random h-locus.
            let set = IndexSet::new(vec![1, 2, 3]);
            let rows = h_locus_equations(n, &a, &set).unwrap();
            let basis = crate::linalg::nullspace(&rows, n - 2);
            let mut sv = vec![Rat::zero(); n - 2];
            for b in &basis {
                let c = stream.rat();
                for (x, bx) in sv.iter_mut().zip(b) {
                    *x = &*x + &(&c * bx);
                }
            }
            let Ok(s) = SCoordinates::new(sv) else { continue };
            let Ok(arr) = arrangement_from_s(n, &a, &s) else {
                continue;
            };
            assert_eq!(multiple_points(&arr), naive_concurrency_scan(&arr));
        }
    }

    #[test]
    fn h_locus_single_triple_is_one_equation() {
        let n = 5;
        let a = vec![q(2), q(3)];
        let set = IndexSet::new(vec![1, 2, 3]);
        let rows = h_locus_equations(n, &a, &set).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rank(&rows, n - 2), 1);
        // The equation is s1(a2-a3) - s2(a1-a3) + s3(a1-a2) = 0 with a3 = 0
        // for the role-(n-2) line: s1*(3-0) - s2*(2-0) + s3*(2-3).
        let row = &rows[0];
        let scale = &row[0] / &q(3);
        assert_eq!(&row[1] / &scale, q(-2));
        assert_eq!(&row[2] / &scale, q(-1));
    }

    #[test]
    fn h_locus_rank_matches_codim_for_generic_params() {
        for n in 5..=7usize {
            let a = generic_base_params(n, 42 + n as u64);
            for size in 3..=n - 1 {
                let set = IndexSet::new((1..=size).collect());
                let rows = h_locus_equations(n, &a, &set).unwrap();
                assert_eq!(rank(&rows, n - 2), size - 2, "n={n} size={size}");
            }
        }
    }

    #[test]
    fn h_locus_rejects_bad_sizes() {
        let a = generic_base_params(6, 1);
        assert!(matches!(
            h_locus_equations(6, &a, &IndexSet::new(vec![1, 2])),
            Err(GeomError::BadIndexSize { .. })
        ));
        assert!(matches!(
            h_locus_equations(6, &a, &IndexSet::new(vec![1, 2, 3, 4, 5, 6])),
            Err(GeomError::BadIndexSize { .. })
        ));
    }

    #[test]
    fn h_locus_solutions_realize_the_concurrency() {
        // Points of the solution space really do make the lines concur.
        for n in 5..=7usize {
            let a = generic_base_params(n, 77 + n as u64);
            let set = IndexSet::new(vec![1, 2, n]);
            let rows = h_locus_equations(n, &a, &set).unwrap();
            let basis = crate::linalg::nullspace(&rows, n - 2);
            let mut stream = RatStream::new(n as u64);
            let mut sv = vec![Rat::zero(); n - 2];
            for b in &basis {
                let c = stream.nonzero();
                for (x, bx) in sv.iter_mut().zip(b) {
                    *x = &*x + &(&c * bx);
                }
            }
            let s = SCoordinates::new(sv).unwrap();
            let arr = arrangement_from_s(n, &a, &s).unwrap();
            let mp = multiple_points(&arr);
            assert!(
                mp.values().any(|found| set.is_subset_of(found)),
                "n={n}: expected {set} to concur, found {mp:?}"
            );
        }
    }

    #[test]
    fn universal_family_identities_hold() {
        let n = 6;
        let a = vec![qr(5, 2), q(-1), q(7)];
        let s = SCoordinates::new(vec![q(1), qr(2, 3), q(-4), q(5)]).unwrap();
        let t = [q(1), qr(3, 7), q(-2)];
        assert!(verify_universal_family(n, &a, &s, &t).unwrap());
        assert_eq!(
            verify_universal_family(n, &a, &s, &[q(0), q(1), q(2)]).unwrap_err(),
            GeomError::BasePointOnSpecialLine
        );
        assert!(matches!(
            verify_universal_family(4, &[q(2)], &SCoordinates::new(vec![q(1), q(1)]).unwrap(), &t),
            Err(GeomError::UnsupportedN { .. })
        ));
    }

    #[test]
    fn index_set_basics() {
        let s = IndexSet::new(vec![3, 1, 2, 3]);
        assert_eq!(s.as_slice(), &[1, 2, 3]);
        assert_eq!(s.to_string(), "{1,2,3}");
        let t = IndexSet::new(vec![3, 4, 5]);
        assert_eq!(s.intersection_size(&t), 1);
        assert_eq!(s.union(&t), IndexSet::new(vec![1, 2, 3, 4, 5]));
        assert_eq!(s.complement(5), IndexSet::new(vec![4, 5]));
        assert!(IndexSet::checked(vec![0, 1], 5).is_err());
        assert!(IndexSet::checked(vec![6], 5).is_err());
    }
}
