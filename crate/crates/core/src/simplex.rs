//! Floating-point cone-membership linear program.
//!
//! Decides whether a target vector lies in the cone generated by a set of
//! sparse columns by running phase one of the primal simplex method on
//! `sum_k w_k col_k = target`, `w >= 0`. When the target is outside the
//! cone, the optimal phase-one duals give a separating point `z` with
//! `col_k . z >= 0` for every column and `target . z < 0`.

use crate::error::{Error, Result};

pub type SparseCol = Vec<(usize, f64)>;

#[derive(Clone, Debug)]
pub struct LpOptions {
    /// Phase-one residual above which the target is declared outside.
    pub feasibility_tol: f64,
    pub pivot_tol: f64,
    pub max_iterations: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            feasibility_tol: 1e-8,
            pivot_tol: 1e-9,
            max_iterations: None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Membership {
    /// Nonnegative weights on a basis of columns (column index, weight).
    Inside {
        weights: Vec<(usize, f64)>,
        basis: Vec<usize>,
    },
    /// Separating point and the phase-one residual.
    Outside { point: Vec<f64>, residual: f64 },
}

struct Tableau {
    m: usize,
    width: usize,
    cells: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width;
        let p = self.cells[r * w + e];
        let inv = 1.0 / p;
        for v in &mut self.cells[r * w..(r + 1) * w] {
            *v *= inv;
        }
        self.cells[r * w + e] = 1.0;
        let pivot_row: Vec<(usize, f64)> = self.cells[r * w..(r + 1) * w]
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(j, v)| (j, *v))
            .collect();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.cells[i * w + e];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.cells[i * w..(i + 1) * w];
            for &(j, v) in &pivot_row {
                row[j] -= f * v;
            }
            row[e] = 0.0;
        }
        let f = self.cost[e];
        if f != 0.0 {
            for &(j, v) in &pivot_row {
                self.cost[j] -= f * v;
            }
            self.cost[e] = 0.0;
        }
        self.basis[r] = e;
    }
}

fn lp_error(e: microlp::Error) -> Error {
    Error::SolverFailure(e.to_string())
}

/// Sparse revised simplex: a membership LP for the weights, then a
/// bounded separation LP when the target is outside.
pub fn cone_membership_sparse(
    dim: usize,
    columns: &[SparseCol],
    target: &[f64],
    opts: &LpOptions,
) -> Result<Membership> {
    use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = columns
        .iter()
        .map(|_| p.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    let mut rows: Vec<LinearExpr> = (0..dim).map(|_| LinearExpr::empty()).collect();
    for (j, col) in columns.iter().enumerate() {
        for &(i, v) in col {
            rows[i].add(w[j], v);
        }
    }
    for (i, row) in rows.into_iter().enumerate() {
        p.add_constraint(row, ComparisonOp::Eq, target[i]);
    }
    match p.solve() {
        Ok(out) => {
            if let Some(sol) = out.solution() {
                let weights: Vec<(usize, f64)> = w
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (j, sol.var_value(*v)))
                    .filter(|(_, x)| *x > 1e-12)
                    .collect();
                let basis = weights.iter().map(|(j, _)| *j).collect();
                return Ok(Membership::Inside { weights, basis });
            }
            return Err(Error::SolverFailure("membership LP interrupted".into()));
        }
        Err(microlp::Error::Infeasible) => {}
        Err(e) => return Err(lp_error(e)),
    }
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let z: Vec<_> = (0..dim)
        .map(|i| p.add_var(target[i], (-1.0, 1.0)))
        .collect();
    for col in columns {
        let mut e = LinearExpr::empty();
        for &(i, v) in col {
            e.add(z[i], v);
        }
        p.add_constraint(e, ComparisonOp::Ge, 0.0);
    }
    let out = p.solve().map_err(lp_error)?;
    let sol = out
        .solution()
        .ok_or_else(|| Error::SolverFailure("separation LP interrupted".into()))?;
    let residual = -sol.objective();
    if residual <= opts.feasibility_tol {
        return Err(Error::SolverFailure(
            "membership and separation LPs disagree".into(),
        ));
    }
    Ok(Membership::Outside {
        point: z.iter().map(|v| sol.var_value(*v)).collect(),
        residual,
    })
}

/// Is `target` in the cone spanned by `columns` (each a sparse vector in
/// `dim` coordinates)?
pub fn cone_membership(
    dim: usize,
    columns: &[SparseCol],
    target: &[f64],
    opts: &LpOptions,
) -> Result<Membership> {
    assert_eq!(target.len(), dim);
    let k = columns.len();
    let m = dim;
    let width = k + m + 1;
    let flip: Vec<f64> = target
        .iter()
        .map(|t| if *t < 0.0 { -1.0 } else { 1.0 })
        .collect();
    let mut cells = vec![0.0; m * width];
    for (j, col) in columns.iter().enumerate() {
        for &(i, v) in col {
            cells[i * width + j] += flip[i] * v;
        }
    }
    for i in 0..m {
        cells[i * width + k + i] = 1.0;
        cells[i * width + width - 1] = flip[i] * target[i];
    }
    let mut cost = vec![0.0; width];
    for i in 0..m {
        for j in 0..k {
            cost[j] -= cells[i * width + j];
        }
        cost[width - 1] -= cells[i * width + width - 1];
    }
    let mut t = Tableau {
        m,
        width,
        cells,
        cost,
        basis: (k..k + m).collect(),
    };

    let max_iter = opts.max_iterations.unwrap_or(50 * (m + k) + 1000);
    let dual_tol = 1e-10;
    let mut degenerate_run = 0usize;
    let mut iterations = 0usize;
    loop {
        if iterations >= max_iter {
            return Err(Error::SolverFailure(format!(
                "iteration limit {max_iter} reached"
            )));
        }
        iterations += 1;
        let bland = degenerate_run > 30;
        let mut entering = None;
        let mut best = -dual_tol;
        for j in 0..width - 1 {
            let d = t.cost[j];
            if d < best {
                entering = Some(j);
                if bland {
                    break;
                }
                best = d;
            }
        }
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, f64, f64)> = None;
        for i in 0..m {
            let a = t.at(i, e);
            if a > opts.pivot_tol {
                let ratio = t.rhs(i).max(0.0) / a;
                match leave {
                    None => leave = Some((i, ratio, a)),
                    Some((li, lr, la)) => {
                        let better = if ratio < lr - 1e-12 {
                            true
                        } else if ratio <= lr + 1e-12 {
                            if bland {
                                t.basis[i] < t.basis[li]
                            } else {
                                a > la
                            }
                        } else {
                            false
                        };
                        if better {
                            leave = Some((i, ratio, a));
                        }
                    }
                }
            }
        }
        let Some((r, ratio, _)) = leave else {
            // phase one is bounded below; a missing pivot row means the
            // column is numerically zero
            t.cost[e] = 0.0;
            continue;
        };
        if ratio <= 1e-12 {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        t.pivot(r, e);
    }

    let residual = -t.cost[width - 1];
    if residual > opts.feasibility_tol {
        let point: Vec<f64> = (0..m).map(|i| -flip[i] * (1.0 - t.cost[k + i])).collect();
        return Ok(Membership::Outside { point, residual });
    }
    let mut weights = Vec::new();
    let mut basis = Vec::new();
    for i in 0..m {
        let b = t.basis[i];
        if b < k {
            basis.push(b);
            let v = t.rhs(i);
            if v > 0.0 {
                weights.push((b, v));
            }
        }
    }
    weights.sort_by_key(|w| w.0);
    basis.sort_unstable();
    Ok(Membership::Inside { weights, basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inside_simple_cone() {
        let cols = vec![vec![(0, 1.0)], vec![(1, 1.0)], vec![(0, 1.0), (1, -1.0)]];
        match cone_membership(2, &cols, &[2.0, -1.0], &LpOptions::default()).unwrap() {
            Membership::Inside { weights, .. } => {
                let mut acc = [0.0; 2];
                for (j, w) in weights {
                    assert!(w >= 0.0);
                    for &(i, v) in &cols[j] {
                        acc[i] += w * v;
                    }
                }
                assert!((acc[0] - 2.0).abs() < 1e-9 && (acc[1] + 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn outside_gives_separator() {
        let cols = vec![vec![(0, 1.0)], vec![(1, 1.0)]];
        match cone_membership(2, &cols, &[1.0, -1.0], &LpOptions::default()).unwrap() {
            Membership::Outside { point, residual } => {
                assert!(residual > 0.0);
                for c in &cols {
                    let v: f64 = c.iter().map(|(i, x)| x * point[*i]).sum();
                    assert!(v >= -1e-12);
                }
                assert!(point[0] - point[1] < 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_target_is_inside() {
        let cols = vec![vec![(0, 1.0)]];
        assert!(matches!(
            cone_membership(1, &cols, &[0.0], &LpOptions::default()).unwrap(),
            Membership::Inside { .. }
        ));
    }
}
