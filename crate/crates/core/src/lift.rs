//! Monomial lifts of tropical sites to the ordered field of rational
//! functions, farthest power regions, brute-force generators of small
//! polyhedra over the field, and the lifted power-diagram poset.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::delone::sufficiently_generic;
use crate::exactnum::{
    nullspace, orthant_cone_dimension, rank, record_thresholds, solve_square, OrderedField, Rat,
    RatFun, Val,
};
use crate::sites::{check_general_position, SiteSet};
use crate::tropcore::{normalize_to_h, HPoint};
use crate::voronoi::{region, voronoi_diagram, Diagram, DiagramCell, DEFAULT_CAP, MAX_N};
use crate::Error;

/// Point of `K^n` together with the exponent scale used by its lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OFVector {
    coords: Vec<RatFun>,
    scale: u64,
}

impl OFVector {
    pub fn new(coords: Vec<RatFun>, scale: u64) -> OFVector {
        OFVector {
            coords,
            scale: scale.max(1),
        }
    }

    pub fn coords(&self) -> &[RatFun] {
        &self.coords
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn valstar(&self) -> Vec<Val> {
        self.coords.iter().map(|c| c.valstar(self.scale)).collect()
    }

    /// Tropical point `val*(x)` on `H`, when every coordinate is nonzero.
    pub fn valstar_point(&self) -> Option<HPoint> {
        let v: Option<Vec<Rat>> = self
            .valstar()
            .into_iter()
            .map(|v| v.finite().cloned())
            .collect();
        normalize_to_h(&v?).ok()
    }

    pub fn product(&self) -> RatFun {
        self.coords.iter().fold(RatFun::one(), |acc, c| &acc * c)
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|c| c.sign().is_gt())
    }

    /// Instantiates every coordinate at `t0`.
    pub fn eval_at(&self, t0: &Rat) -> Result<Vec<Rat>, Error> {
        self.coords
            .iter()
            .map(|c| c.eval_at(t0).map(|e| e.value))
            .collect()
    }
}

impl Serialize for OFVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

/// `mu(s)`: coordinate `i` is `t^(-scale * s_i)`.
pub fn monomial_lift(s: &HPoint, scale: u64) -> Result<OFVector, Error> {
    let k = Rat::from_int(scale as i64);
    let mut coords = Vec::with_capacity(s.dim());
    for c in s.coords() {
        let e = c * &k;
        if !e.is_integer() {
            return Err(Error::NonIntegral { scale });
        }
        let e = e
            .to_i64()
            .ok_or_else(|| Error::Arithmetic("exponent out of range".into()))?;
        coords.push(RatFun::monomial(Rat::one(), -e));
    }
    Ok(OFVector::new(coords, scale))
}

/// Lifts every site with the common scale (the lcm of all denominators).
pub fn lift_sites(sites: &SiteSet) -> Result<Vec<OFVector>, Error> {
    let scale = sites.denominator_lcm();
    sites
        .sites()
        .iter()
        .map(|s| monomial_lift(s, scale))
        .collect()
}

/// `{x : sum coefficients_i x_i <= rhs}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OFHalfspace<F = RatFun> {
    pub coefficients: Vec<F>,
    pub rhs: F,
}

impl<F: OrderedField> OFHalfspace<F> {
    pub fn homogeneous(coefficients: Vec<F>) -> Self {
        OFHalfspace {
            coefficients,
            rhs: F::zero(),
        }
    }

    pub fn slack(&self, x: &[F]) -> F {
        let lhs = self
            .coefficients
            .iter()
            .zip(x)
            .fold(F::zero(), |acc, (a, b)| acc.plus(&a.times(b)));
        self.rhs.minus(&lhs)
    }

    pub fn contains(&self, x: &[F]) -> bool {
        !self.slack(x).is_negative()
    }
}

/// Farthest power halfspace of `a` against `b`: `sum (a_i - b_i) x_i <= 0`.
pub fn power_halfspace(a: &OFVector, b: &OFVector) -> Result<OFHalfspace, Error> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if a.coords == b.coords {
        return Err(Error::CoincidentSites);
    }
    Ok(OFHalfspace::homogeneous(
        a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
    ))
}

/// Polyhedron `{x : a x <= b, e x = f}`, optionally intersected with the
/// nonnegative orthant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OFPolyhedron<F = RatFun> {
    pub n: usize,
    pub halfspaces: Vec<OFHalfspace<F>>,
    pub equalities: Vec<OFHalfspace<F>>,
    pub include_orthant: bool,
}

impl<F: OrderedField> OFPolyhedron<F> {
    pub fn orthant(n: usize) -> Self {
        OFPolyhedron {
            n,
            halfspaces: Vec::new(),
            equalities: Vec::new(),
            include_orthant: true,
        }
    }

    pub fn contains(&self, x: &[F]) -> bool {
        (!self.include_orthant || x.iter().all(|c| !c.is_negative()))
            && self.halfspaces.iter().all(|h| h.contains(x))
            && self.equalities.iter().all(|h| h.slack(x).is_zero())
    }

    /// All inequalities, orthant facets included.
    fn all_inequalities(&self) -> Vec<OFHalfspace<F>> {
        let mut rows = self.halfspaces.clone();
        if self.include_orthant {
            for i in 0..self.n {
                let mut c = vec![F::zero(); self.n];
                c[i] = F::one().negated();
                rows.push(OFHalfspace::homogeneous(c));
            }
        }
        rows
    }
}

/// Farthest power region of lift `a`: the cone where `a` is farthest.
pub fn power_region(lifts: &[OFVector], a: usize) -> Result<OFPolyhedron, Error> {
    let me = lifts.get(a).ok_or(Error::SiteOutOfRange {
        index: a,
        len: lifts.len(),
    })?;
    let mut halfspaces = Vec::new();
    for (k, b) in lifts.iter().enumerate() {
        if k != a {
            halfspaces.push(power_halfspace(me, b)?);
        }
    }
    Ok(OFPolyhedron {
        n: me.dim(),
        halfspaces,
        equalities: Vec::new(),
        include_orthant: true,
    })
}

/// Vertices and extreme rays, normalized so the first nonzero entry of a
/// ray has absolute value one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators<F = RatFun> {
    pub vertices: Vec<Vec<F>>,
    pub rays: Vec<Vec<F>>,
}

pub const MAX_CONSTRAINTS: usize = 20;

fn push_unique<F: OrderedField>(list: &mut Vec<Vec<F>>, v: Vec<F>) {
    let same = |a: &Vec<F>| a.iter().zip(&v).all(|(x, y)| x.compare(y).is_eq());
    if !list.iter().any(same) {
        list.push(v);
    }
}

/// Brute-force basic solutions: every choice of `n` linearly independent
/// tight constraints (equalities always tight) gives a candidate vertex, and
/// every choice of `n - 1` tight homogeneous constraints gives a candidate
/// ray; infeasible candidates are dropped.
pub fn of_polyhedron_generators<F: OrderedField>(
    p: &OFPolyhedron<F>,
) -> Result<Generators<F>, Error> {
    if p.halfspaces.len() + p.equalities.len() > MAX_CONSTRAINTS {
        return Err(Error::TooLarge {
            what: "constraint count",
            found: p.halfspaces.len() + p.equalities.len(),
            cap: MAX_CONSTRAINTS,
        });
    }
    if p.n > MAX_N {
        return Err(Error::UnsupportedDimension(p.n));
    }
    let n = p.n;
    let ineqs = p.all_inequalities();
    let eq_rows: Vec<Vec<F>> = p
        .equalities
        .iter()
        .map(|h| h.coefficients.clone())
        .collect();
    let e = rank(&eq_rows);
    let mut out = Generators {
        vertices: Vec::new(),
        rays: Vec::new(),
    };
    if e <= n {
        for chosen in (0..ineqs.len()).combinations(n - e) {
            let mut rows = eq_rows.clone();
            let mut rhs: Vec<F> = p.equalities.iter().map(|h| h.rhs.clone()).collect();
            for &k in &chosen {
                rows.push(ineqs[k].coefficients.clone());
                rhs.push(ineqs[k].rhs.clone());
            }
            if rank(&rows) < n {
                continue;
            }
            let (rows, rhs) = independent_square(rows, rhs, n);
            let Ok(x) = solve_square(&rows, &rhs) else {
                continue;
            };
            if p.contains(&x) {
                push_unique(&mut out.vertices, x);
            }
        }
    }
    // recession cone
    let rec = OFPolyhedron {
        n,
        halfspaces: p
            .halfspaces
            .iter()
            .map(|h| OFHalfspace::homogeneous(h.coefficients.clone()))
            .collect(),
        equalities: p
            .equalities
            .iter()
            .map(|h| OFHalfspace::homogeneous(h.coefficients.clone()))
            .collect(),
        include_orthant: p.include_orthant,
    };
    let rec_ineqs = rec.all_inequalities();
    if e < n {
        for chosen in (0..rec_ineqs.len()).combinations(n - 1 - e) {
            let mut rows = eq_rows.clone();
            rows.extend(chosen.iter().map(|&k| rec_ineqs[k].coefficients.clone()));
            let basis = nullspace(&rows, n);
            if basis.len() != 1 {
                continue;
            }
            for cand in [basis[0].clone(), basis[0].iter().map(F::negated).collect()] {
                if rec.contains(&cand) {
                    let lead = cand
                        .iter()
                        .find(|c| !c.is_zero())
                        .expect("nonzero ray")
                        .clone();
                    let norm = if lead.is_negative() {
                        lead.negated()
                    } else {
                        lead
                    };
                    push_unique(&mut out.rays, cand.iter().map(|c| c.over(&norm)).collect());
                }
            }
        }
    }
    Ok(out)
}

/// Picks `n` independent rows (with their right-hand sides).
fn independent_square<F: OrderedField>(
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    n: usize,
) -> (Vec<Vec<F>>, Vec<F>) {
    let mut keep_rows: Vec<Vec<F>> = Vec::new();
    let mut keep_rhs = Vec::new();
    for (r, b) in rows.into_iter().zip(rhs) {
        let mut trial = keep_rows.clone();
        trial.push(r.clone());
        if rank(&trial) == trial.len() {
            keep_rows.push(r);
            keep_rhs.push(b);
            if keep_rows.len() == n {
                break;
            }
        }
    }
    (keep_rows, keep_rhs)
}

/// Dimension inside `H` of the lifted cell of `label`, measured on the
/// open positive orthant (the part where the dual valuation lands in the
/// torus).
fn lifted_cell_dim<F: OrderedField>(lifts: &[Vec<F>], label: &[usize]) -> i64 {
    let n = lifts[0].len();
    let diff = |a: &[F], b: &[F]| -> Vec<F> { a.iter().zip(b).map(|(x, y)| x.minus(y)).collect() };
    let mut ineqs = Vec::new();
    for &a in label {
        for (b, lb) in lifts.iter().enumerate() {
            if !label.contains(&b) {
                ineqs.push(diff(&lifts[a], lb));
            }
        }
    }
    let eqs: Vec<Vec<F>> = label
        .iter()
        .tuple_windows()
        .map(|(a, b)| diff(&lifts[*a], &lifts[*b]))
        .collect();
    match orthant_cone_dimension(n, &ineqs, &eqs) {
        None => -1,
        Some(info) => info.dim as i64 - 1,
    }
}

/// Power-diagram poset over any ordered field: nonempty cells by label
/// with their dimension inside `H`, ordered by label inclusion.
pub fn power_diagram_poset_in<F: OrderedField>(lifts: &[Vec<F>]) -> Result<Diagram, Error> {
    if lifts.len() > DEFAULT_CAP {
        return Err(Error::TooLarge {
            what: "site count",
            found: lifts.len(),
            cap: DEFAULT_CAP,
        });
    }
    let Some(first) = lifts.first() else {
        return Ok(Diagram::from_cells(Vec::new()));
    };
    if first.len() > MAX_N {
        return Err(Error::UnsupportedDimension(first.len()));
    }
    let mut cells = Vec::new();
    let mut level: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..lifts.len() {
        let d = lifted_cell_dim(lifts, &[a]);
        if d >= 0 {
            level.insert(vec![a]);
            cells.push(DiagramCell {
                label: vec![a],
                dim: d,
                pieces: Vec::new(),
            });
        }
    }
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for t in &level {
            for b in (t.last().unwrap() + 1)..lifts.len() {
                let mut cand = t.clone();
                cand.push(b);
                let closed = (0..cand.len()).all(|k| {
                    let mut sub = cand.clone();
                    sub.remove(k);
                    level.contains(&sub)
                });
                if !closed {
                    continue;
                }
                let d = lifted_cell_dim(lifts, &cand);
                if d >= 0 {
                    next.insert(cand.clone());
                    cells.push(DiagramCell {
                        label: cand,
                        dim: d,
                        pieces: Vec::new(),
                    });
                }
            }
        }
        level = next;
    }
    Ok(Diagram::from_cells(cells))
}

pub fn power_diagram_poset(lifts: &[OFVector]) -> Result<Diagram, Error> {
    let rows: Vec<Vec<RatFun>> = lifts.iter().map(|v| v.coords.clone()).collect();
    power_diagram_poset_in(&rows)
}

/// Outcome of comparing a site set's diagram with its lifted power diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub isomorphic: bool,
    pub cells_tropical: usize,
    pub cells_lifted: usize,
    pub containment_samples: usize,
    pub generator_checks: usize,
    pub failures: Vec<String>,
}

/// Samples drawn per power region.
pub const SAMPLES_PER_REGION: usize = 10;

/// Rejects inputs that are neither in general position nor sufficiently
/// generic.
pub fn require_genericity(sites: &SiteSet) -> Result<(), Error> {
    if check_general_position(sites).holds() {
        return Ok(());
    }
    if let Some(w) = sufficiently_generic(sites)?.witness {
        return Err(Error::Genericity(format!(
            "sites {} and {} have intersecting regions and share coordinate {}",
            w.a, w.b, w.coord
        )));
    }
    Ok(())
}

/// Cross-checks the tropical diagram against the lifted power diagram:
/// label-isomorphism of the posets, dual valuations of random positive
/// points of each power region, and dual valuations of its extreme rays.
pub fn verify_lift(sites: &SiteSet, seed: u64) -> Result<LiftReport, Error> {
    require_genericity(sites)?;
    let tropical = voronoi_diagram(sites, DEFAULT_CAP)?;
    let lifts = lift_sites(sites)?;
    let lifted = power_diagram_poset(&lifts)?;
    let mut failures = Vec::new();
    let isomorphic = tropical.signature() == lifted.signature() && tropical.order == lifted.order;
    if !isomorphic {
        failures.push(format!(
            "posets differ: tropical {:?} lifted {:?}",
            tropical.signature(),
            lifted.signature()
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0;
    let mut generator_checks = 0;
    for a in 0..sites.len() {
        let reg = region(sites, a)?;
        let gens = of_polyhedron_generators(&power_region(&lifts, a)?)?;
        let scale = lifts[a].scale();
        for ray in &gens.rays {
            let v = OFVector::new(ray.clone(), scale);
            if let Some(p) = v.valstar_point() {
                generator_checks += 1;
                if !reg.contains(&p)? {
                    failures.push(format!(
                        "ray image {p:?} of power region {a} outside its Voronoi region"
                    ));
                }
            }
        }
        if gens.rays.is_empty() {
            continue;
        }
        for _ in 0..SAMPLES_PER_REGION {
            let mut x = vec![RatFun::zero(); sites.n()];
            for ray in &gens.rays {
                let w =
                    RatFun::monomial(Rat::from_int(rng.gen_range(1..=5)), rng.gen_range(-2..=2));
                for (xi, ri) in x.iter_mut().zip(ray) {
                    *xi = &*xi + &(&w * ri);
                }
            }
            let v = OFVector::new(x, scale);
            let Some(p) = v.valstar_point() else { continue };
            samples += 1;
            if !reg.contains(&p)? {
                failures.push(format!(
                    "sample image {p:?} of power region {a} outside its Voronoi region"
                ));
            }
        }
    }
    Ok(LiftReport {
        isomorphic,
        cells_tropical: tropical.cells.len(),
        cells_lifted: lifted.cells.len(),
        containment_samples: samples,
        generator_checks,
        failures,
    })
}

/// Symbolic poset, the parameter value it was instantiated at, and whether
/// the instantiated rerun serialized identically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub t0: Rat,
    pub symbolic: String,
    pub instantiated: String,
    pub identical: bool,
}

/// Recomputes the lifted poset over the rationals at a parameter value
/// beyond every sign threshold met by the symbolic run.
pub fn stability_check(sites: &SiteSet) -> Result<StabilityReport, Error> {
    let lifts = lift_sites(sites)?;
    let (symbolic, threshold) = record_thresholds(|| power_diagram_poset(&lifts));
    let symbolic = serde_json::to_string(&symbolic?).expect("diagram serializes");
    let t0 = threshold.ceil() + 1;
    let t0 = Rat::from_bigint(t0);
    let rows: Vec<Vec<Rat>> = lifts
        .iter()
        .map(|v| v.eval_at(&t0))
        .collect::<Result<_, _>>()?;
    let instantiated =
        serde_json::to_string(&power_diagram_poset_in(&rows)?).expect("diagram serializes");
    Ok(StabilityReport {
        identical: symbolic == instantiated,
        t0,
        symbolic,
        instantiated,
    })
}
