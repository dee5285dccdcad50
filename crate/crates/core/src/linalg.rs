//! Small exact linear algebra over `Rat`.
//!
//! Everything here is plain Gaussian elimination on dense matrices. The
//! matrices in this crate are tiny (at most a few dozen rows over at most
//! n - 2 columns), so clarity wins over cleverness.

use crate::rational::Rat;

/// Row-reduce `rows` in place; returns the pivot column per reduced row.
fn echelonize(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] = &rows[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of a homogeneous system given as coefficient rows of width `ncols`.
pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    echelonize(&mut m, ncols).len()
}

/// Basis of the right nullspace of the homogeneous system.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let pivots = echelonize(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[ri][fc];
        }
        basis.push(v);
    }
    basis
}

/// Does `row` lie in the row space of `rows`?
pub fn in_row_space(rows: &[Vec<Rat>], row: &[Rat], ncols: usize) -> bool {
    let base = rank(rows, ncols);
    let mut ext: Vec<Vec<Rat>> = rows.to_vec();
    ext.push(row.to_vec());
    rank(&ext, ncols) == base
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<Rat>),
    Inconsistent,
    /// Consistent with at least one free variable.
    Underdetermined,
}

/// Solve `A x = b` exactly.
pub fn solve_affine(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> SolveOutcome {
    assert_eq!(a.len(), b.len());
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelonize(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return SolveOutcome::Inconsistent;
    }
    if pivots.len() < ncols {
        return SolveOutcome::Underdetermined;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[ri][ncols].clone();
    }
    SolveOutcome::Unique(x)
}

/// Full solution set of `A x = b`: one particular solution plus a basis of
/// the homogeneous part. `None` when the system is inconsistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutions {
    pub particular: Vec<Rat>,
    pub basis: Vec<Vec<Rat>>,
}

impl AffineSolutions {
    /// Is coordinate `i` equal to `value` on the whole solution set?
    pub fn coordinate_pinned_to(&self, i: usize, value: &Rat) -> bool {
        self.particular[i] == *value && self.basis.iter().all(|v| v[i].is_zero())
    }
}

pub fn affine_solutions(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<AffineSolutions> {
    assert_eq!(a.len(), b.len());
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelonize(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut particular = vec![Rat::zero(); ncols];
    for (ri, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug[ri][ncols].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -&aug[ri][fc];
        }
        basis.push(v);
    }
    Some(AffineSolutions { particular, basis })
}

/// 3x3 determinant.
pub fn det3(m: &[[Rat; 3]; 3]) -> Rat {
    let a = &m[0];
    let b = &m[1];
    let c = &m[2];
    &a[0] * &(&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * &(&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * &(&b[0] * &c[1] - &b[1] * &c[0])
}

/// Cross product of two length-3 vectors.
pub fn cross3(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn dot3(a: &[Rat; 3], b: &[Rat; 3]) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}
