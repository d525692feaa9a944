//! Small dense linear programs.
//!
//! A two-phase tableau simplex with Bland's rule. It is meant for the
//! rate-split projections, which have a dozen variables and a couple of
//! dozen constraints, so clarity wins over sparse bookkeeping.

pub mod ratesplit;

pub use ratesplit::{
    jiang_mask, project, project_frontier, DecodeBound, DecodeTerms, LpRegion, MITerms, Projection,
    ProjectionStatus, SchemeMask, SubRate, SubRateVector,
};

/// Constraint sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub cmp: Cmp,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, cmp: Cmp, rhs: f64) -> Self {
        Self { coeffs, cmp, rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; 0 unless optimal.
    pub value: f64,
    /// Primal point; zeros unless optimal.
    pub x: Vec<f64>,
    /// Smallest total violation reached in phase one. Positive exactly when
    /// the problem is infeasible, and then it certifies the gap.
    pub infeasibility: f64,
}

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-12;
const COST_TOL: f64 = 1e-12;

struct Tableau {
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            let f = row[c];
            if i != r && f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on the current objective row. Returns false if
    /// the objective is unbounded.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            // Bland: lowest-index improving column.
            let Some(c) = (0..self.width).find(|&j| allowed[j] && self.obj[j] > COST_TOL) else {
                return true;
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - 1e-15
                            || (ratio <= br + 1e-15 && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximizes `c . x` subject to `cons` and `x >= 0`.
pub fn maximize(c: &[f64], cons: &[Constraint]) -> LpSolution {
    let n = c.len();
    let m = cons.len();

    // Flip rows so every right-hand side is nonnegative.
    let rows: Vec<(Vec<f64>, Cmp, f64)> = cons
        .iter()
        .map(|k| {
            assert_eq!(
                k.coeffs.len(),
                n,
                "constraint width must match the objective"
            );
            if k.rhs < 0.0 {
                let cmp = match k.cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
                (k.coeffs.iter().map(|v| -v).collect(), cmp, -k.rhs)
            } else {
                (k.coeffs.clone(), k.cmp, k.rhs)
            }
        })
        .collect();

    let n_slack = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Cmp::Le).count();
    let width = n + n_slack + n_art;
    let art_start = n + n_slack;

    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        obj: vec![0.0; width + 1],
        basis: vec![0; m],
        width,
    };
    let (mut s, mut a) = (n, art_start);
    for (i, (coeffs, cmp, rhs)) in rows.iter().enumerate() {
        let mut row = vec![0.0; width + 1];
        row[..n].copy_from_slice(coeffs);
        row[width] = *rhs;
        match cmp {
            Cmp::Le => {
                row[s] = 1.0;
                t.basis[i] = s;
                s += 1;
            }
            Cmp::Ge => {
                row[s] = -1.0;
                s += 1;
                row[a] = 1.0;
                t.basis[i] = a;
                a += 1;
            }
            Cmp::Eq => {
                row[a] = 1.0;
                t.basis[i] = a;
                a += 1;
            }
        }
        t.rows.push(row);
    }

    let scale = rows.iter().map(|r| r.2).fold(1.0, f64::max);
    let mut infeasibility = 0.0;
    if n_art > 0 {
        // Phase one: maximize minus the sum of artificials.
        for i in 0..m {
            if t.basis[i] >= art_start {
                for (o, v) in t.obj.iter_mut().zip(&t.rows[i]) {
                    *o += v;
                }
            }
        }
        for o in &mut t.obj[art_start..width] {
            *o = 0.0;
        }
        let all = vec![true; width];
        t.optimize(&all);
        infeasibility = t.obj[width].max(0.0);
        if infeasibility > FEAS_TOL * scale {
            return LpSolution {
                status: LpStatus::Infeasible,
                value: 0.0,
                x: vec![0.0; n],
                infeasibility,
            };
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if t.basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| t.rows[i][j].abs() > 1e-9) {
                    t.pivot(i, j);
                }
            }
        }
    }

    t.obj = vec![0.0; width + 1];
    t.obj[..n].copy_from_slice(c);
    for i in 0..m {
        let b = t.basis[i];
        let cb = if b < n { c[b] } else { 0.0 };
        if cb != 0.0 {
            for (o, v) in t.obj.iter_mut().zip(&t.rows[i]) {
                *o -= cb * v;
            }
        }
    }
    let allowed: Vec<bool> = (0..width).map(|j| j < art_start).collect();
    if !t.optimize(&allowed) {
        return LpSolution {
            status: LpStatus::Unbounded,
            value: 0.0,
            x: vec![0.0; n],
            infeasibility,
        };
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    LpSolution {
        status: LpStatus::Optimal,
        value,
        x,
        infeasibility,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(c: &[f64], b: f64) -> Constraint {
        Constraint::new(c.to_vec(), Cmp::Le, b)
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let s = maximize(
            &[3.0, 5.0],
            &[
                le(&[1.0, 0.0], 4.0),
                le(&[0.0, 2.0], 12.0),
                le(&[3.0, 2.0], 18.0),
            ],
        );
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn lower_bounds_need_phase_one() {
        // max x + y, x + y <= 3, x >= 1, y >= 1.5
        let s = maximize(
            &[-1.0, 0.0],
            &[
                le(&[1.0, 1.0], 3.0),
                Constraint::new(vec![1.0, 0.0], Cmp::Ge, 1.0),
                Constraint::new(vec![0.0, 1.0], Cmp::Ge, 1.5),
            ],
        );
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value + 1.0).abs() < 1e-12);
        assert!(s.x[1] >= 1.5 - 1e-12);
    }

    #[test]
    fn infeasible_reports_gap() {
        let s = maximize(
            &[1.0],
            &[le(&[1.0], 1.0), Constraint::new(vec![1.0], Cmp::Ge, 3.0)],
        );
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!((s.infeasibility - 2.0).abs() < 1e-12);
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn negative_rhs_is_flipped() {
        // -x <= -2 means x >= 2; with x <= 5 the max of x is 5 and min is 2.
        let cons = [le(&[-1.0], -2.0), le(&[1.0], 5.0)];
        assert!((maximize(&[1.0], &cons).value - 5.0).abs() < 1e-12);
        assert!((maximize(&[-1.0], &cons).value + 2.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_unbounded() {
        let s = maximize(
            &[1.0, 1.0],
            &[Constraint::new(vec![1.0, -1.0], Cmp::Eq, 1.0)],
        );
        assert_eq!(s.status, LpStatus::Unbounded);
        let s = maximize(
            &[1.0, 1.0],
            &[
                Constraint::new(vec![1.0, -1.0], Cmp::Eq, 1.0),
                le(&[1.0, 0.0], 4.0),
            ],
        );
        assert!((s.value - 7.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Many constraints through the same vertex; Bland's rule must not cycle.
        let cons = vec![
            le(&[1.0, 1.0, 1.0], 0.0),
            le(&[1.0, -1.0, 0.0], 0.0),
            le(&[0.0, 1.0, -1.0], 0.0),
            le(&[1.0, 0.0, 0.0], 1.0),
        ];
        let s = maximize(&[1.0, 1.0, 1.0], &cons);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(s.value.abs() < 1e-12);
    }
}
