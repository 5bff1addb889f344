//! Dense two-phase simplex with Bland's rule over any [`OrderedField`].

use std::cmp::Ordering;

use super::field::{rank, OrderedField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub enum LpOutcome<F> {
    Infeasible,
    Unbounded,
    Optimal { value: F, point: Vec<F> },
}

impl<F> LpOutcome<F> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

#[derive(Clone, Debug)]
struct Row<F> {
    coeffs: Vec<F>,
    rel: Relation,
    rhs: F,
}

/// Linear program over free (default) or nonnegative variables.
#[derive(Clone, Debug)]
pub struct LinearProgram<F> {
    nvars: usize,
    nonneg: Vec<bool>,
    rows: Vec<Row<F>>,
}

impl<F: OrderedField> LinearProgram<F> {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            nonneg: vec![false; nvars],
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<F>, rel: Relation, rhs: F) {
        assert_eq!(coeffs.len(), self.nvars, "constraint width");
        self.rows.push(Row { coeffs, rel, rhs });
    }

    pub fn is_feasible(&self) -> bool {
        self.maximize(&vec![F::zero(); self.nvars]).is_feasible()
    }

    pub fn maximize(&self, objective: &[F]) -> LpOutcome<F> {
        assert_eq!(objective.len(), self.nvars);
        Simplex::build(self).solve(self, objective)
    }
}

struct Simplex<F> {
    rows: Vec<Vec<F>>,
    basis: Vec<usize>,
    ncols: usize,
    /// Structural column pairs `(pos, neg)` per original variable.
    var_cols: Vec<(usize, Option<usize>)>,
    first_art: usize,
}

impl<F: OrderedField> Simplex<F> {
    fn build(lp: &LinearProgram<F>) -> Self {
        let mut var_cols = Vec::with_capacity(lp.nvars);
        let mut ncols = 0;
        for j in 0..lp.nvars {
            if lp.nonneg[j] {
                var_cols.push((ncols, None));
                ncols += 1;
            } else {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let n_struct = ncols;
        let n_slack = lp.rows.iter().filter(|r| r.rel != Relation::Eq).count();

        let mut normalized = Vec::with_capacity(lp.rows.len());
        for row in &lp.rows {
            let mut coeffs = vec![F::zero(); n_struct];
            for (j, a) in row.coeffs.iter().enumerate() {
                let (p, n) = var_cols[j];
                coeffs[p] = a.clone();
                if let Some(n) = n {
                    coeffs[n] = a.negated();
                }
            }
            let (coeffs, rel, rhs) = if row.rhs.is_negative() {
                let flipped = match row.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (
                    coeffs.iter().map(F::negated).collect(),
                    flipped,
                    row.rhs.negated(),
                )
            } else {
                (coeffs, row.rel, row.rhs.clone())
            };
            normalized.push((coeffs, rel, rhs));
        }
        let n_art = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Le)
            .count();
        let first_art = n_struct + n_slack;
        let total = first_art + n_art;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut slack = n_struct;
        let mut art = first_art;
        for (coeffs, rel, rhs) in normalized {
            let mut r = coeffs;
            r.resize(total + 1, F::zero());
            r[total] = rhs;
            match rel {
                Relation::Le => {
                    r[slack] = F::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    r[slack] = F::one().negated();
                    slack += 1;
                    r[art] = F::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    r[art] = F::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(r);
        }
        Simplex {
            rows,
            basis,
            ncols: total,
            var_cols,
            first_art,
        }
    }

    fn pivot(&mut self, obj: &mut [F], r: usize, e: usize) {
        let inv = F::one().over(&self.rows[r][e]);
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.times(&inv);
            }
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut [F]| {
            let factor = row[e].clone();
            if factor.is_zero() {
                return;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.minus(&factor.times(p));
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(obj);
        self.basis[r] = e;
    }

    /// Reduced-cost row for column costs `cost` (maximization).
    fn objective_row(&self, cost: &[F]) -> Vec<F> {
        let mut obj: Vec<F> = cost.to_vec();
        obj.push(F::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in obj.iter_mut().enumerate() {
                let a = &self.rows[i][j];
                if !a.is_zero() {
                    *v = v.minus(&cb.times(a));
                }
            }
        }
        obj
    }

    /// Returns false when unbounded.
    fn optimize(&mut self, obj: &mut [F], allowed: usize) -> bool {
        loop {
            let Some(e) = (0..allowed).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = row[self.ncols].over(&row[e]);
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => match ratio.compare(&br) {
                        Ordering::Less => Some((i, ratio)),
                        Ordering::Equal if self.basis[i] < self.basis[bi] => Some((i, ratio)),
                        _ => Some((bi, br)),
                    },
                };
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(obj, r, e);
        }
    }

    fn solve(mut self, lp: &LinearProgram<F>, objective: &[F]) -> LpOutcome<F> {
        if self.first_art < self.ncols {
            let mut cost = vec![F::zero(); self.ncols];
            for c in cost.iter_mut().skip(self.first_art) {
                *c = F::one().negated();
            }
            let mut obj = self.objective_row(&cost);
            let bounded = self.optimize(&mut obj, self.ncols);
            debug_assert!(bounded, "phase one is bounded");
            if obj[self.ncols].is_positive() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-level artificials out of the basis.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_art {
                    match (0..self.first_art).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => {
                            self.pivot(&mut obj, i, j);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut cost = vec![F::zero(); self.ncols];
        for (j, c) in objective.iter().enumerate() {
            let (p, n) = self.var_cols[j];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = c.negated();
            }
        }
        let mut obj = self.objective_row(&cost);
        if !self.optimize(&mut obj, self.first_art) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![F::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            values[b] = self.rows[i][self.ncols].clone();
        }
        let point: Vec<F> = (0..lp.nvars)
            .map(|j| {
                let (p, n) = self.var_cols[j];
                match n {
                    Some(n) => values[p].minus(&values[n]),
                    None => values[p].clone(),
                }
            })
            .collect();
        LpOutcome::Optimal {
            value: obj[self.ncols].negated(),
            point,
        }
    }
}

/// Affine dimension of `{x : a_i x <= b_i, e_k x = f_k}` and the indices of
/// the inequalities that hold with equality on the whole set. `None` when
/// the set is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionInfo {
    pub dim: usize,
    pub implicit: Vec<usize>,
}

pub fn polyhedron_dimension<F: OrderedField>(
    nvars: usize,
    ineqs: &[(Vec<F>, F)],
    eqs: &[(Vec<F>, F)],
) -> Option<DimensionInfo> {
    let mut base = LinearProgram::new(nvars);
    for (a, b) in ineqs {
        base.add(a.clone(), Relation::Le, b.clone());
    }
    for (a, b) in eqs {
        base.add(a.clone(), Relation::Eq, b.clone());
    }
    if !base.is_feasible() {
        return None;
    }
    let mut candidates: Vec<usize> = (0..ineqs.len()).collect();
    while !candidates.is_empty() {
        // max sum of slacks s_i in [0, 1] on the remaining candidates
        let k = candidates.len();
        let mut lp = LinearProgram::new(nvars + k);
        for v in nvars..nvars + k {
            lp.set_nonneg(v);
        }
        for (i, (a, b)) in ineqs.iter().enumerate() {
            let mut row = a.clone();
            row.resize(nvars + k, F::zero());
            if let Some(pos) = candidates.iter().position(|&c| c == i) {
                row[nvars + pos] = F::one();
            }
            lp.add(row, Relation::Le, b.clone());
        }
        for (a, b) in eqs {
            let mut row = a.clone();
            row.resize(nvars + k, F::zero());
            lp.add(row, Relation::Eq, b.clone());
        }
        for pos in 0..k {
            let mut row = vec![F::zero(); nvars + k];
            row[nvars + pos] = F::one();
            lp.add(row, Relation::Le, F::one());
        }
        let mut objective = vec![F::zero(); nvars + k];
        for v in objective.iter_mut().skip(nvars) {
            *v = F::one();
        }
        let LpOutcome::Optimal { point, .. } = lp.maximize(&objective) else {
            unreachable!("slack LP is feasible and bounded");
        };
        let before = candidates.len();
        candidates = candidates
            .iter()
            .enumerate()
            .filter(|(pos, _)| !point[nvars + pos].is_positive())
            .map(|(_, &c)| c)
            .collect();
        if candidates.len() == before {
            break;
        }
    }
    let mut rows: Vec<Vec<F>> = candidates.iter().map(|&i| ineqs[i].0.clone()).collect();
    rows.extend(eqs.iter().map(|(a, _)| a.clone()));
    let r = if rows.is_empty() { 0 } else { rank(&rows) };
    Some(DimensionInfo {
        dim: nvars - r,
        implicit: candidates,
    })
}

/// Dimension of a polyhedral cone `{x : A x <= 0, E x = 0}` restricted to
/// the open positive orthant, or `None` when the two do not meet.
///
/// Works with `x = 1 + v`, `v >= 0`: the bounds `x >= 1` are never implicit
/// equalities of a cone meeting the orthant, so only rows of `A` are probed.
pub fn orthant_cone_dimension<F: OrderedField>(
    nvars: usize,
    ineqs: &[Vec<F>],
    eqs: &[Vec<F>],
) -> Option<DimensionInfo> {
    let shift = |a: &[F]| a.iter().fold(F::zero(), |acc, c| acc.minus(c));
    let mut candidates: Vec<usize> = (0..ineqs.len()).collect();
    loop {
        let k = candidates.len();
        let mut lp = LinearProgram::new(nvars + k);
        for v in 0..nvars + k {
            lp.set_nonneg(v);
        }
        for (i, a) in ineqs.iter().enumerate() {
            let mut row = a.clone();
            row.resize(nvars + k, F::zero());
            if let Some(pos) = candidates.iter().position(|&c| c == i) {
                row[nvars + pos] = F::one();
            }
            lp.add(row, Relation::Le, shift(a));
        }
        for a in eqs {
            let mut row = a.clone();
            row.resize(nvars + k, F::zero());
            lp.add(row, Relation::Eq, shift(a));
        }
        for pos in 0..k {
            let mut row = vec![F::zero(); nvars + k];
            row[nvars + pos] = F::one();
            lp.add(row, Relation::Le, F::one());
        }
        let mut objective = vec![F::zero(); nvars + k];
        for v in objective.iter_mut().skip(nvars) {
            *v = F::one();
        }
        let point = match lp.maximize(&objective) {
            LpOutcome::Infeasible => return None,
            LpOutcome::Unbounded => unreachable!("slacks are bounded"),
            LpOutcome::Optimal { point, .. } => point,
        };
        let before = candidates.len();
        candidates = candidates
            .iter()
            .enumerate()
            .filter(|(pos, _)| !point[nvars + pos].is_positive())
            .map(|(_, &c)| c)
            .collect();
        if candidates.is_empty() || candidates.len() == before {
            break;
        }
    }
    let mut rows: Vec<Vec<F>> = candidates.iter().map(|&i| ineqs[i].clone()).collect();
    rows.extend(eqs.iter().cloned());
    let r = if rows.is_empty() { 0 } else { rank(&rows) };
    Some(DimensionInfo {
        dim: nvars - r,
        implicit: candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::Rat;
    use crate::exactnum::ratfun::RatFun;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| r(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0  -> (8/5, 6/5), value 14/5
        let mut lp = LinearProgram::new(2);
        lp.set_nonneg(0);
        lp.set_nonneg(1);
        lp.add(rv(&[1, 2]), Relation::Le, r(4));
        lp.add(rv(&[3, 1]), Relation::Le, r(6));
        match lp.maximize(&rv(&[1, 1])) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, Rat::new(14, 5));
                assert_eq!(point, vec![Rat::new(8, 5), Rat::new(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variables_equalities_and_infeasibility() {
        let mut lp = LinearProgram::new(2);
        lp.add(rv(&[1, 1]), Relation::Eq, r(-3));
        lp.add(rv(&[1, 0]), Relation::Ge, r(-10));
        match lp.maximize(&rv(&[-1, 0])) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, r(10));
                assert_eq!(point, rv(&[-10, 7]));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(lp.maximize(&rv(&[1, 0])), LpOutcome::Unbounded));
        lp.add(rv(&[0, 1]), Relation::Le, r(-100));
        lp.add(rv(&[1, 0]), Relation::Le, r(50));
        assert!(!lp.is_feasible());
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let mut lp = LinearProgram::new(3);
        lp.add(rv(&[1, 1, 1]), Relation::Eq, r(0));
        lp.add(rv(&[2, 2, 2]), Relation::Eq, r(0));
        lp.add(rv(&[1, -1, 0]), Relation::Le, r(0));
        lp.add(rv(&[-1, 1, 0]), Relation::Le, r(0));
        assert!(lp.is_feasible());
        let info = polyhedron_dimension(
            3,
            &[
                (rv(&[1, -1, 0]), r(0)),
                (rv(&[-1, 1, 0]), r(0)),
                (rv(&[0, 0, 1]), r(5)),
            ],
            &[(rv(&[1, 1, 1]), r(0))],
        )
        .unwrap();
        assert_eq!(info.dim, 1);
        assert_eq!(info.implicit, vec![0, 1]);
    }

    #[test]
    fn dimension_of_empty_and_full_sets() {
        assert!(polyhedron_dimension(1, &[(rv(&[1]), r(0)), (rv(&[-1]), r(-1))], &[]).is_none());
        let full =
            polyhedron_dimension(2, &[(rv(&[1, 0]), r(1)), (rv(&[0, 1]), r(1))], &[]).unwrap();
        assert_eq!(full.dim, 2);
    }

    #[test]
    fn parametric_optimum_over_rational_functions() {
        // max x s.t. x <= t * y, y <= 1, x, y >= 0 -> x = t
        let t = RatFun::t();
        let mut lp = LinearProgram::new(2);
        lp.set_nonneg(0);
        lp.set_nonneg(1);
        lp.add(vec![RatFun::one(), -&t], Relation::Le, RatFun::zero());
        lp.add(
            vec![RatFun::zero(), RatFun::one()],
            Relation::Le,
            RatFun::one(),
        );
        match lp.maximize(&[RatFun::one(), RatFun::zero()]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, t),
            other => panic!("{other:?}"),
        }
    }
}
