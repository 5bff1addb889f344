use std::cmp::Ordering;
use std::fmt::Debug;

use super::rat::Rat;
use super::ratfun::RatFun;
use crate::error::Error;

/// Exact ordered field used by the linear-algebra and LP routines.
///
/// Every comparison goes through [`OrderedField::sign`], so the rational
/// function instance records its sign-stability thresholds.
pub trait OrderedField: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    /// Division; `rhs` must be nonzero.
    fn over(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn sign(&self) -> Ordering;

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn compare(&self, rhs: &Self) -> Ordering {
        self.minus(rhs).sign()
    }
}

impl OrderedField for Rat {
    fn zero() -> Rat {
        Rat::zero()
    }
    fn one() -> Rat {
        Rat::one()
    }
    fn from_rat(r: &Rat) -> Rat {
        r.clone()
    }
    fn plus(&self, rhs: &Rat) -> Rat {
        self + rhs
    }
    fn minus(&self, rhs: &Rat) -> Rat {
        self - rhs
    }
    fn times(&self, rhs: &Rat) -> Rat {
        self * rhs
    }
    fn over(&self, rhs: &Rat) -> Rat {
        self / rhs
    }
    fn negated(&self) -> Rat {
        -self
    }
    fn sign(&self) -> Ordering {
        self.signum()
    }
    fn compare(&self, rhs: &Rat) -> Ordering {
        self.cmp(rhs)
    }
}

impl OrderedField for RatFun {
    fn zero() -> RatFun {
        RatFun::zero()
    }
    fn one() -> RatFun {
        RatFun::one()
    }
    fn from_rat(r: &Rat) -> RatFun {
        RatFun::from_rat(r.clone())
    }
    fn plus(&self, rhs: &RatFun) -> RatFun {
        self + rhs
    }
    fn minus(&self, rhs: &RatFun) -> RatFun {
        self - rhs
    }
    fn times(&self, rhs: &RatFun) -> RatFun {
        self * rhs
    }
    fn over(&self, rhs: &RatFun) -> RatFun {
        self / rhs
    }
    fn negated(&self) -> RatFun {
        -self
    }
    fn sign(&self) -> Ordering {
        RatFun::sign(self)
    }
}

/// Row-echelon reduction in place, pivoting only in the first `ncols`
/// columns; returns the pivot columns.
fn echelon<F: OrderedField>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one().over(&rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = v.times(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..rows[r].len() {
                    let delta = factor.times(&rows[r][j]);
                    rows[i][j] = rows[i][j].minus(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: OrderedField>(rows: &[Vec<F>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let ncols = first.len();
    let mut work = rows.to_vec();
    echelon(&mut work, ncols).len()
}

/// Solves the square system `a x = b` exactly.
pub fn solve_square<F: OrderedField>(a: &[Vec<F>], b: &[F]) -> Result<Vec<F>, Error> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug, n);
    if pivots.len() < n {
        return Err(Error::SingularSystem { rank: pivots.len() });
    }
    Ok(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Basis of the right nullspace `{x : rows x = 0}`.
pub fn nullspace<F: OrderedField>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut work = rows.to_vec();
    let pivots = echelon(&mut work, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); ncols];
            v[f] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = work[r][f].negated();
            }
            v
        })
        .collect()
}

/// Exact elimination over the ordered field of rational functions.
pub fn of_solve_linear(a: &[Vec<RatFun>], b: &[RatFun]) -> Result<Vec<RatFun>, Error> {
    solve_square(a, b)
}
