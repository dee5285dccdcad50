//! Exact linear feasibility over the rationals by Fourier–Motzkin
//! elimination, with strict and non-strict inequalities tracked separately.

use serde::{Deserialize, Serialize};

use crate::rational::Rat;

/// One inequality `Σ coeffs[i] * x_i (< | ≤) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub strict: bool,
}

impl Constraint {
    /// `Σ c_i x_i ≤ rhs`.
    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Constraint {
        Constraint {
            coeffs,
            rhs,
            strict: false,
        }
    }

    /// `Σ c_i x_i < rhs`.
    pub fn lt(coeffs: Vec<Rat>, rhs: Rat) -> Constraint {
        Constraint {
            coeffs,
            rhs,
            strict: true,
        }
    }

    /// `Σ c_i x_i ≥ rhs`, stored as the negated ≤ form.
    pub fn ge(coeffs: Vec<Rat>, rhs: Rat) -> Constraint {
        Constraint::le(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    /// `Σ c_i x_i > rhs`, stored as the negated < form.
    pub fn gt(coeffs: Vec<Rat>, rhs: Rat) -> Constraint {
        Constraint::lt(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        let lhs: Rat = self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
        if self.strict {
            lhs < self.rhs
        } else {
            lhs <= self.rhs
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// A variable-free inequality `0 (< | ≤) rhs` that fails.
    fn is_contradiction(&self) -> bool {
        debug_assert!(self.is_constant());
        if self.strict {
            !self.rhs.is_positive()
        } else {
            self.rhs.is_negative()
        }
    }

    /// Scale so the first nonzero coefficient becomes ±1.
    fn normalized(mut self) -> Constraint {
        if let Some(first) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let scale = first.abs().recip();
            for c in self.coeffs.iter_mut() {
                *c = &*c * &scale;
            }
            self.rhs = &self.rhs * &scale;
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

/// Drop duplicates with identical coefficient vectors, keeping the tightest
/// right-hand side (strict beats non-strict on ties). Assumes inputs are
/// normalized.
fn dedupe(constraints: Vec<Constraint>) -> Vec<Constraint> {
    let mut kept: Vec<Constraint> = Vec::with_capacity(constraints.len());
    'outer: for c in constraints {
        for k in kept.iter_mut() {
            if k.coeffs == c.coeffs {
                if c.rhs < k.rhs || (c.rhs == k.rhs && c.strict && !k.strict) {
                    *k = c;
                }
                continue 'outer;
            }
        }
        kept.push(c);
    }
    kept
}

/// Decide feasibility of `{x : all constraints hold}` by eliminating the
/// variables one at a time; at each step the variable minimizing the number
/// of positive-negative pairings is removed.
pub fn fourier_motzkin(constraints: &[Constraint], nvars: usize) -> Verdict {
    let mut sys: Vec<Constraint> = constraints
        .iter()
        .inspect(|c| assert_eq!(c.coeffs.len(), nvars, "constraint arity mismatch"))
        .cloned()
        .map(Constraint::normalized)
        .collect();
    let mut remaining: Vec<usize> = (0..nvars).collect();
    loop {
        sys = dedupe(sys);
        if sys
            .iter()
            .any(|c| c.is_constant() && c.is_contradiction())
        {
            return Verdict::Infeasible;
        }
        sys.retain(|c| !c.is_constant());
        if sys.is_empty() || remaining.is_empty() {
            return Verdict::Feasible;
        }
        let (choice, var) = remaining
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let pos = sys.iter().filter(|c| c.coeffs[v].is_positive()).count();
                let neg = sys.iter().filter(|c| c.coeffs[v].is_negative()).count();
                (pos * neg, k, v)
            })
            .min()
            .map(|(_, k, v)| (k, v))
            .unwrap();
        remaining.swap_remove(choice);
        sys = eliminate(sys, var);
    }
}

fn eliminate(sys: Vec<Constraint>, var: usize) -> Vec<Constraint> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for c in sys {
        match c.coeffs[var].signum() {
            1 => pos.push(c),
            -1 => neg.push(c),
            _ => out.push(c),
        }
    }
    for p in &pos {
        let pscale = p.coeffs[var].recip();
        for q in &neg {
            let qscale = -q.coeffs[var].recip();
            let coeffs: Vec<Rat> = p
                .coeffs
                .iter()
                .zip(&q.coeffs)
                .map(|(pc, qc)| pc * &pscale + qc * &qscale)
                .collect();
            let rhs = &p.rhs * &pscale + &q.rhs * &qscale;
            out.push(
                Constraint {
                    coeffs,
                    rhs,
                    strict: p.strict || q.strict,
                }
                .normalized(),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::RatStream;

    fn q(n: i64) -> Rat {
        Rat::int(n)
    }

    fn qr(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn simple_feasible_box() {
        // 0 < x ≤ 1, 0 < y ≤ 1, x + y ≤ 3/2.
        let sys = vec![
            Constraint::gt(vec![q(1), q(0)], q(0)),
            Constraint::le(vec![q(1), q(0)], q(1)),
            Constraint::gt(vec![q(0), q(1)], q(0)),
            Constraint::le(vec![q(0), q(1)], q(1)),
            Constraint::le(vec![q(1), q(1)], qr(3, 2)),
        ];
        assert_eq!(fourier_motzkin(&sys, 2), Verdict::Feasible);
    }

    #[test]
    fn strictness_decides_boundary_points() {
        // x ≤ 1 together with x ≥ 1 is feasible (x = 1)...
        let weak = vec![
            Constraint::le(vec![q(1)], q(1)),
            Constraint::ge(vec![q(1)], q(1)),
        ];
        assert_eq!(fourier_motzkin(&weak, 1), Verdict::Feasible);
        // ...but x < 1 together with x ≥ 1 is not.
        let strict = vec![
            Constraint::lt(vec![q(1)], q(1)),
            Constraint::ge(vec![q(1)], q(1)),
        ];
        assert_eq!(fourier_motzkin(&strict, 1), Verdict::Infeasible);
    }

    #[test]
    fn strictness_propagates_through_combination() {
        // x > 0, y > 0, x + y ≤ 0: combining forces 0 < x ≤ -y < 0.
        let sys = vec![
            Constraint::gt(vec![q(1), q(0)], q(0)),
            Constraint::gt(vec![q(0), q(1)], q(0)),
            Constraint::le(vec![q(1), q(1)], q(0)),
        ];
        assert_eq!(fourier_motzkin(&sys, 2), Verdict::Infeasible);
    }

    #[test]
    fn infeasible_band() {
        // 2x + 3y ≤ 6 and 2x + 3y ≥ 7.
        let sys = vec![
            Constraint::le(vec![q(2), q(3)], q(6)),
            Constraint::ge(vec![q(2), q(3)], q(7)),
        ];
        assert_eq!(fourier_motzkin(&sys, 2), Verdict::Infeasible);
    }

    #[test]
    fn unconstrained_is_feasible() {
        assert_eq!(fourier_motzkin(&[], 4), Verdict::Feasible);
        let sys = vec![Constraint::le(vec![q(0), q(0)], q(5))];
        assert_eq!(fourier_motzkin(&sys, 2), Verdict::Feasible);
    }

    #[test]
    fn dedupe_keeps_tightest() {
        let sys = vec![
            Constraint::le(vec![q(2)], q(10)),
            Constraint::le(vec![q(1)], q(3)),
            Constraint::lt(vec![q(3)], q(9)),
            Constraint::ge(vec![q(1)], q(3)),
        ];
        // Normalized, the first three all say x ≤/< something; tightest is
        // x < 3, which contradicts x ≥ 3.
        assert_eq!(fourier_motzkin(&sys, 1), Verdict::Infeasible);
    }

    #[test]
    fn random_systems_with_known_interior_point() {
        // Systems built to contain a known point are always feasible.
        let mut stream = RatStream::new(99);
        for _ in 0..30 {
            let nvars = 3;
            let point: Vec<Rat> = (0..nvars).map(|_| stream.rat()).collect();
            let mut sys = Vec::new();
            for _ in 0..12 {
                let coeffs: Vec<Rat> = (0..nvars).map(|_| stream.rat()).collect();
                let lhs: Rat = coeffs.iter().zip(&point).map(|(c, v)| c * v).sum();
                // Slack keeps the point strictly inside.
                sys.push(Constraint::lt(coeffs, &lhs + &Rat::one()));
            }
            assert_eq!(fourier_motzkin(&sys, nvars), Verdict::Feasible);
        }
    }

    #[test]
    fn verdict_independent_of_constraint_order() {
        let mut stream = RatStream::new(123);
        for round in 0..20u64 {
            let nvars = 3;
            let mut sys = Vec::new();
            for _ in 0..8 {
                let coeffs: Vec<Rat> = (0..nvars).map(|_| stream.rat()).collect();
                let rhs = stream.rat();
                sys.push(Constraint {
                    coeffs,
                    rhs,
                    strict: round % 2 == 0,
                });
            }
            let base = fourier_motzkin(&sys, nvars);
            sys.reverse();
            assert_eq!(fourier_motzkin(&sys, nvars), base);
            sys.rotate_left(3);
            assert_eq!(fourier_motzkin(&sys, nvars), base);
        }
    }
}
