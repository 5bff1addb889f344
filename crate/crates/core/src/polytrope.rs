//! Ordinary polyhedra cut out by difference constraints `x_i - x_j <= w`
//! (optionally strict) in the tropical torus, and the decomposition of
//! tropical halfspaces into unions of such pieces.
//!
//! A tropical halfspace is the union over the attaining right-hand term `j`
//! of the difference systems `c_i + x_i <= d_j + x_j` for all `i` on the left;
//! its complement is the union over the attaining left-hand term `i` of the
//! strict systems `d_j + x_j < c_i + x_i`. Feasibility and dimension of a
//! difference system reduce to shortest paths, so every decision here is an
//! exact rational computation.

use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::exactnum::Rat;
use crate::tropcore::{normalize_to_h, HPoint, TropicalHalfspace};

/// Path weight `value - strict * eps` for an infinitesimal `eps > 0`;
/// the derived order is the lexicographic one this needs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Weight {
    value: Rat,
    strict: i64,
}

impl Weight {
    fn new(value: Rat, strict: bool) -> Weight {
        Weight {
            value,
            strict: if strict { -1 } else { 0 },
        }
    }

    fn zero() -> Weight {
        Weight {
            value: Rat::zero(),
            strict: 0,
        }
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight {
            value: &self.value + &rhs.value,
            strict: self.strict + rhs.strict,
        }
    }
}

/// `x_i - x_j <= w`, or `<` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiffConstraint {
    pub i: usize,
    pub j: usize,
    pub w: Rat,
    pub strict: bool,
}

/// A conjunction of difference constraints.
pub type Piece = Vec<DiffConstraint>;

/// Feasible difference system kept in shortest-path closed form.
/// `bound[j][i]` is the tightest known upper bound on `x_i - x_j`.
#[derive(Clone, Debug)]
pub struct Polytrope {
    bound: Vec<Vec<Option<Weight>>>,
}

impl Polytrope {
    /// The whole torus in dimension `n`.
    pub fn full(n: usize) -> Polytrope {
        let mut bound = vec![vec![None; n]; n];
        for (k, row) in bound.iter_mut().enumerate() {
            row[k] = Some(Weight::zero());
        }
        Polytrope { bound }
    }

    pub fn ambient(&self) -> usize {
        self.bound.len()
    }

    fn implies_weight(&self, c: &DiffConstraint, w: &Weight) -> bool {
        matches!(&self.bound[c.j][c.i], Some(b) if b <= w)
    }

    pub fn implies(&self, c: &DiffConstraint) -> bool {
        self.implies_weight(c, &Weight::new(c.w.clone(), c.strict))
    }

    pub fn implies_all(&self, piece: &[DiffConstraint]) -> bool {
        piece.iter().all(|c| self.implies(c))
    }

    /// Adds a constraint; returns false (leaving `self` unspecified) when
    /// the system becomes infeasible.
    pub fn constrain(&mut self, c: &DiffConstraint) -> bool {
        let w = Weight::new(c.w.clone(), c.strict);
        if c.i == c.j {
            return w >= Weight::zero();
        }
        if self.implies_weight(c, &w) {
            return true;
        }
        if let Some(back) = &self.bound[c.i][c.j] {
            if back + &w < Weight::zero() {
                return false;
            }
        }
        let n = self.ambient();
        let into_j: Vec<Option<Weight>> = (0..n).map(|a| self.bound[a][c.j].clone()).collect();
        let from_i: Vec<Option<Weight>> = self.bound[c.i].clone();
        for (a, to_j) in into_j.iter().enumerate() {
            let Some(to_j) = to_j else { continue };
            let head = to_j + &w;
            for (b, from) in from_i.iter().enumerate() {
                let Some(from) = from else { continue };
                let cand = &head + from;
                let slot = &mut self.bound[a][b];
                if slot.as_ref().map_or(true, |cur| cand < *cur) {
                    *slot = Some(cand);
                }
            }
        }
        true
    }

    pub fn constrain_all(&mut self, piece: &[DiffConstraint]) -> bool {
        piece.iter().all(|c| self.constrain(c))
    }

    /// Upper bound on `x_i - x_j`, if finite.
    pub fn upper(&self, i: usize, j: usize) -> Option<Rat> {
        self.bound[j][i].as_ref().map(|w| w.value.clone())
    }

    pub fn is_bounded(&self) -> bool {
        self.bound.iter().flatten().all(Option::is_some)
    }

    /// Largest value of `max_i x_i - min_j x_j` over the closure; `None`
    /// when unbounded.
    pub fn spread(&self) -> Option<Rat> {
        let mut best = Rat::zero();
        for row in &self.bound {
            for w in row {
                let v = &w.as_ref()?.value;
                if *v > best {
                    best = v.clone();
                }
            }
        }
        Some(best)
    }

    /// Dimension inside the sum-zero hyperplane.
    pub fn dim(&self) -> usize {
        let n = self.ambient();
        let mut class: Vec<usize> = (0..n).collect();
        for u in 0..n {
            for v in (u + 1)..n {
                if let (Some(a), Some(b)) = (&self.bound[u][v], &self.bound[v][u]) {
                    if (&a.value + &b.value).is_zero() {
                        let (cu, cv) = (class[u], class[v]);
                        for c in class.iter_mut() {
                            if *c == cv {
                                *c = cu;
                            }
                        }
                    }
                }
            }
        }
        let mut roots = class.clone();
        roots.sort_unstable();
        roots.dedup();
        roots.len() - 1
    }

    pub fn contains(&self, x: &HPoint) -> bool {
        let c = x.coords();
        for (j, row) in self.bound.iter().enumerate() {
            for (i, w) in row.iter().enumerate() {
                if let Some(w) = w {
                    let diff = &c[i] - &c[j];
                    if diff > w.value || (diff == w.value && w.strict < 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// For a bounded system, the points minimizing every `x_u - x_k` for a
    /// fixed `k`. Every `x` in the closure is `max_k (x_k + q_k)`, so their
    /// max-tropical hull is the closure of the system.
    pub fn kleene_points(&self) -> Option<Vec<HPoint>> {
        let n = self.ambient();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let v: Option<Vec<Rat>> = (0..n)
                .map(|u| self.bound[u][k].as_ref().map(|w| -&w.value))
                .collect();
            out.push(normalize_to_h(&v?).expect("n >= 2"));
        }
        Some(out)
    }

    /// Finite off-diagonal bounds of the closure.
    pub fn describe(&self) -> Piece {
        let mut out = Vec::new();
        for (j, row) in self.bound.iter().enumerate() {
            for (i, w) in row.iter().enumerate() {
                if let (true, Some(w)) = (i != j, w) {
                    out.push(DiffConstraint {
                        i,
                        j,
                        w: w.value.clone(),
                        strict: w.strict < 0,
                    });
                }
            }
        }
        out
    }
}

/// Pieces whose union is the halfspace.
pub fn inside_pieces(h: &TropicalHalfspace) -> Vec<Piece> {
    h.right_terms()
        .map(|(j, d)| {
            h.left_terms()
                .map(|(i, c)| DiffConstraint {
                    i,
                    j,
                    w: d - c,
                    strict: false,
                })
                .collect()
        })
        .collect()
}

/// Pieces whose union is the open complement of the halfspace.
pub fn outside_pieces(h: &TropicalHalfspace) -> Vec<Piece> {
    h.left_terms()
        .map(|(i, c)| {
            h.right_terms()
                .map(|(j, d)| DiffConstraint {
                    i: j,
                    j: i,
                    w: c - d,
                    strict: true,
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    /// Skip the subtree below the current node.
    Prune,
    Stop,
}

/// Depth-first search over every way of picking one piece from each
/// disjunction, intersected with `start`. `visit` sees every feasible node;
/// the boolean flags leaves. When the current system already lies inside a
/// piece of the next disjunction that disjunction needs no branching.
pub fn explore(
    start: &Polytrope,
    disjunctions: &[Vec<Piece>],
    visit: &mut dyn FnMut(&Polytrope, bool) -> Flow,
) -> Flow {
    fn go(
        p: &Polytrope,
        rest: &[Vec<Piece>],
        visit: &mut dyn FnMut(&Polytrope, bool) -> Flow,
    ) -> Flow {
        let leaf = rest.is_empty();
        match visit(p, leaf) {
            Flow::Stop => return Flow::Stop,
            Flow::Prune => return Flow::Continue,
            Flow::Continue => {}
        }
        if leaf {
            return Flow::Continue;
        }
        let pieces = &rest[0];
        if pieces.iter().any(|piece| p.implies_all(piece)) {
            return go(p, &rest[1..], visit);
        }
        for piece in pieces {
            let mut q = p.clone();
            if q.constrain_all(piece) && go(&q, &rest[1..], visit) == Flow::Stop {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }
    go(start, disjunctions, visit)
}

/// True iff some choice of pieces yields a feasible system.
pub fn any_feasible(start: &Polytrope, disjunctions: &[Vec<Piece>]) -> bool {
    let mut found = false;
    explore(start, disjunctions, &mut |_, leaf| {
        if leaf {
            found = true;
            Flow::Stop
        } else {
            Flow::Continue
        }
    });
    found
}

/// Largest dimension of a feasible combination, or `None` when empty.
/// Also returns the leaves realizing it (at most `keep`).
pub fn max_dimension(
    start: &Polytrope,
    disjunctions: &[Vec<Piece>],
    keep: usize,
) -> (Option<usize>, Vec<Polytrope>) {
    let mut best: Option<usize> = None;
    let mut witnesses: Vec<Polytrope> = Vec::new();
    let top = start.ambient() - 1;
    explore(start, disjunctions, &mut |p, leaf| {
        let d = p.dim();
        if best.is_some_and(|b| d < b) {
            return Flow::Prune;
        }
        if !leaf {
            return Flow::Continue;
        }
        if best != Some(d) {
            best = Some(d);
            witnesses.clear();
        }
        if witnesses.len() < keep {
            witnesses.push(p.clone());
        }
        if d == top && witnesses.len() >= keep {
            Flow::Stop
        } else {
            Flow::Continue
        }
    });
    (best, witnesses)
}

/// Every feasible leaf.
pub fn leaves(start: &Polytrope, disjunctions: &[Vec<Piece>]) -> Vec<Polytrope> {
    let mut out = Vec::new();
    explore(start, disjunctions, &mut |p, leaf| {
        if leaf {
            out.push(p.clone());
        }
        Flow::Continue
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropcore::halfspace_from_pair;

    fn pt(v: &[i64]) -> HPoint {
        HPoint::from_ints(v).unwrap()
    }

    fn c(i: usize, j: usize, w: i64, strict: bool) -> DiffConstraint {
        DiffConstraint {
            i,
            j,
            w: Rat::from_int(w),
            strict,
        }
    }

    #[test]
    fn strict_zero_cycle_is_infeasible() {
        let mut p = Polytrope::full(3);
        assert!(p.constrain(&c(0, 1, 0, false)));
        assert!(p.constrain(&c(1, 0, 0, false)));
        assert_eq!(p.dim(), 1);
        let mut q = p.clone();
        assert!(!q.constrain(&c(1, 0, 0, true)));
        assert!(!p.constrain(&c(1, 0, -1, false)));
    }

    #[test]
    fn triangle_closure_and_points() {
        // x0 - x1 <= 1, x1 - x2 <= 1, x2 - x0 <= 1: a bounded triangle in H
        let mut p = Polytrope::full(3);
        assert!(p.constrain_all(&[c(0, 1, 1, false), c(1, 2, 1, false), c(2, 0, 1, false)]));
        assert!(p.is_bounded());
        assert_eq!(p.upper(0, 2), Some(Rat::from_int(2)));
        assert_eq!(p.dim(), 2);
        assert_eq!(p.spread(), Some(Rat::from_int(2)));
        let gens = p.kleene_points().unwrap();
        for q in &gens {
            assert!(p.contains(q));
        }
        for a in -3..=3 {
            for b in -3..=3 {
                let x = pt(&[a, b, -a - b]);
                assert_eq!(
                    p.contains(&x),
                    crate::tropcore::tconv_membership(&x, &gens).unwrap()
                );
            }
        }
        assert!(p.contains(&pt(&[0, 0, 0])));
        assert!(!p.contains(&pt(&[2, -1, -1])));
    }

    #[test]
    fn pieces_match_halfspace_membership() {
        let h = halfspace_from_pair(&pt(&[-6, -5, 11]), &pt(&[-5, 12, -7])).unwrap();
        let ins = inside_pieces(&h);
        let outs = outside_pieces(&h);
        for a in -4..=4 {
            for b in -4..=4 {
                let x = pt(&[a, b, -a - b]);
                let member = h.contains(&x).unwrap();
                let in_some = ins.iter().any(|piece| {
                    let mut p = Polytrope::full(3);
                    p.constrain_all(piece) && p.contains(&x)
                });
                let out_some = outs.iter().any(|piece| {
                    let mut p = Polytrope::full(3);
                    p.constrain_all(piece) && p.contains(&x)
                });
                assert_eq!(member, in_some);
                assert_eq!(member, !out_some);
            }
        }
    }

    #[test]
    fn dimension_search() {
        // x0 <= max(1 + x1, x2) together with max(1 + x1, x2) <= x0 is a tropical line
        let h = halfspace_from_pair(&pt(&[0, 0, 0]), &pt(&[1, -1, 0])).unwrap();
        let g = TropicalHalfspace::new(
            vec![1, 2],
            vec![Rat::from_int(1), Rat::zero()],
            vec![0],
            vec![Rat::zero()],
        )
        .unwrap();
        let (d, w) = max_dimension(
            &Polytrope::full(3),
            &[inside_pieces(&h), inside_pieces(&g)],
            4,
        );
        assert_eq!(d, Some(1));
        assert!(!w.is_empty());
        assert!(any_feasible(&Polytrope::full(3), &[inside_pieces(&h)]));
    }
}
