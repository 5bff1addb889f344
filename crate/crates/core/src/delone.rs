//! Dual graph, Delone clique complex, hull complex of the monomial lift,
//! sufficient genericity and the Scarf comparison.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::exactnum::{LinearProgram, OrderedField, RatFun, Relation};
use crate::lift::lift_sites;
use crate::sites::{lattice_points, pair_violation, LatticeWindow, SiteSet, WindowPoints};
use crate::voronoi::{adjacent_pairs, region_certified, RegionCache, DEFAULT_CAP, MAX_N};
use crate::Error;

/// Largest site set accepted for pairwise cell computations.
pub const WINDOW_CAP: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
}

fn check_size(sites: &SiteSet) -> Result<(), Error> {
    if sites.len() > WINDOW_CAP {
        return Err(Error::TooLarge {
            what: "site count",
            found: sites.len(),
            cap: WINDOW_CAP,
        });
    }
    if sites.n() > MAX_N {
        return Err(Error::UnsupportedDimension(sites.n()));
    }
    Ok(())
}

/// Sites are adjacent when their regions meet in codimension at most one
/// inside `H`.
pub fn dual_graph(sites: &SiteSet) -> Result<DualGraph, Error> {
    check_size(sites)?;
    let nodes: Vec<usize> = (0..sites.len()).collect();
    let mut cache = RegionCache::new(sites);
    let edges = adjacent_pairs(&mut cache, &nodes)?;
    Ok(DualGraph { nodes, edges })
}

/// Abstract simplicial complex given by its facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    #[serde(skip)]
    pub vertices: Vec<usize>,
    pub facets: Vec<Vec<usize>>,
    pub provisional_vertices: Vec<usize>,
}

impl SimplicialComplex {
    /// Keeps only inclusion-maximal sets, each sorted, in sorted order.
    pub fn from_faces(vertices: Vec<usize>, faces: Vec<Vec<usize>>) -> SimplicialComplex {
        let mut faces: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        faces.sort();
        faces.dedup();
        let facets: Vec<Vec<usize>> = faces
            .iter()
            .filter(|f| {
                !faces
                    .iter()
                    .any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v)))
            })
            .cloned()
            .collect();
        SimplicialComplex {
            vertices,
            facets,
            provisional_vertices: Vec::new(),
        }
    }

    /// Largest facet size minus one; `-1` when there are no facets.
    pub fn dim(&self) -> i64 {
        self.facets
            .iter()
            .map(|f| f.len() as i64 - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        self.facets
            .iter()
            .any(|f| face.iter().all(|v| f.contains(v)))
    }

    /// Facets through `v`.
    pub fn star(&self, v: usize) -> Vec<Vec<usize>> {
        self.facets
            .iter()
            .filter(|f| f.contains(&v))
            .cloned()
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().map(Vec::len).all_equal()
    }
}

/// Maximal cliques (Bron-Kerbosch with pivoting).
pub fn maximal_cliques(nodes: &[usize], edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = |v: usize| -> BTreeSet<usize> {
        edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    };
    let nbrs: std::collections::BTreeMap<usize, BTreeSet<usize>> =
        nodes.iter().map(|&v| (v, adj(v))).collect();
    fn bk(
        r: &mut Vec<usize>,
        mut p: BTreeSet<usize>,
        mut x: BTreeSet<usize>,
        nbrs: &std::collections::BTreeMap<usize, BTreeSet<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let pivot = *p
            .union(&x)
            .max_by_key(|u| nbrs[u].intersection(&p).count())
            .expect("nonempty");
        let candidates: Vec<usize> = p.difference(&nbrs[&pivot]).copied().collect();
        for v in candidates {
            r.push(v);
            let np = p.intersection(&nbrs[&v]).copied().collect();
            let nx = x.intersection(&nbrs[&v]).copied().collect();
            bk(r, np, nx, nbrs, out);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    bk(
        &mut Vec::new(),
        nodes.iter().copied().collect(),
        BTreeSet::new(),
        &nbrs,
        &mut out,
    );
    for c in out.iter_mut() {
        c.sort_unstable();
    }
    out.sort();
    out
}

/// Clique complex of the dual graph.
pub fn delone_complex(sites: &SiteSet) -> Result<SimplicialComplex, Error> {
    let g = dual_graph(sites)?;
    let cliques = maximal_cliques(&g.nodes, &g.edges);
    Ok(SimplicialComplex::from_faces(g.nodes, cliques))
}

/// Delone data of a lattice window: sites whose region is certified exact
/// carry the induced subcomplex, the rest are listed as provisional.
#[derive(Clone, Debug)]
pub struct WindowDelone {
    pub window: WindowPoints,
    pub graph: DualGraph,
    pub complex: SimplicialComplex,
}

pub fn delone_complex_in_window(window: &LatticeWindow) -> Result<WindowDelone, Error> {
    let pts = lattice_points(window)?;
    check_size(&pts.sites)?;
    let mut cache = RegionCache::new(&pts.sites);
    let mut exact = Vec::new();
    let mut provisional = Vec::new();
    for (k, s) in pts.sites.sites().iter().enumerate() {
        if region_certified(window, s, cache.region(k)?) {
            exact.push(k);
        } else {
            provisional.push(k);
        }
    }
    let edges = adjacent_pairs(&mut cache, &exact)?;
    let cliques = maximal_cliques(&exact, &edges);
    let mut complex = SimplicialComplex::from_faces(exact.clone(), cliques);
    complex.provisional_vertices = provisional;
    let graph = DualGraph {
        nodes: exact,
        edges,
    };
    Ok(WindowDelone {
        window: pts,
        graph,
        complex,
    })
}

/// Pair of sites with intersecting regions sharing a coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityWitness {
    pub a: usize,
    pub b: usize,
    pub coord: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub witness: Option<GenericityWitness>,
}

/// Every pair of sites whose regions intersect is in general position.
pub fn sufficiently_generic(sites: &SiteSet) -> Result<GenericityReport, Error> {
    check_size(sites)?;
    let mut cache = RegionCache::new(sites);
    for (a, b) in (0..sites.len()).tuple_combinations() {
        let Some(coord) = pair_violation(&sites.sites()[a], &sites.sites()[b]) else {
            continue;
        };
        if !cache.cell(&[a, b])?.is_empty() {
            return Ok(GenericityReport {
                generic: false,
                witness: Some(GenericityWitness { a, b, coord }),
            });
        }
    }
    Ok(GenericityReport {
        generic: true,
        witness: None,
    })
}

/// True iff some `w > 0` makes every point of `face` a minimizer of `w . x`
/// over `points`; the sets passing this test are exactly the subsets of
/// the bounded faces of `conv(points) + orthant`.
fn cofacial<F: OrderedField>(points: &[Vec<F>], face: &[usize]) -> bool {
    let n = points[0].len();
    // w = 1 + v with v >= 0; the level c is eliminated through face[0]
    let base = &points[face[0]];
    let mut lp = LinearProgram::<F>::new(n);
    for v in 0..n {
        lp.set_nonneg(v);
    }
    for (k, p) in points.iter().enumerate() {
        if k == face[0] {
            continue;
        }
        let d: Vec<F> = p.iter().zip(base).map(|(a, b)| a.minus(b)).collect();
        let rhs = d.iter().fold(F::zero(), |acc, x| acc.minus(x));
        let rel = if face.contains(&k) {
            Relation::Eq
        } else {
            Relation::Ge
        };
        lp.add(d, rel, rhs);
    }
    lp.is_feasible()
}

pub fn hull_complex_in<F: OrderedField>(points: &[Vec<F>]) -> SimplicialComplex {
    let vertices: Vec<usize> = (0..points.len()).collect();
    if points.is_empty() {
        return SimplicialComplex::from_faces(vertices, Vec::new());
    }
    let mut faces = Vec::new();
    let mut level: BTreeSet<Vec<usize>> = vertices
        .iter()
        .filter(|&&v| cofacial(points, &[v]))
        .map(|&v| vec![v])
        .collect();
    while !level.is_empty() {
        faces.extend(level.iter().cloned());
        let mut next = BTreeSet::new();
        for f in &level {
            for b in (f.last().unwrap() + 1)..points.len() {
                let mut cand = f.clone();
                cand.push(b);
                let closed = (0..cand.len()).all(|k| {
                    let mut sub = cand.clone();
                    sub.remove(k);
                    level.contains(&sub)
                });
                if closed && cofacial(points, &cand) {
                    next.insert(cand);
                }
            }
        }
        level = next;
    }
    SimplicialComplex::from_faces(vertices, faces)
}

/// Hull complex of the monomial lift of integral sites.
pub fn hull_complex(sites: &SiteSet) -> Result<SimplicialComplex, Error> {
    if !sites.is_integral() {
        return Err(Error::NonIntegral { scale: 1 });
    }
    if sites.len() > DEFAULT_CAP {
        return Err(Error::TooLarge {
            what: "site count",
            found: sites.len(),
            cap: DEFAULT_CAP,
        });
    }
    let lifts: Vec<Vec<RatFun>> = lift_sites(sites)?
        .into_iter()
        .map(|v| v.coords().to_vec())
        .collect();
    Ok(hull_complex_in(&lifts))
}

/// Compares the Delone complex with the hull complex of a sufficiently
/// generic integral site set.
pub fn scarf_check(sites: &SiteSet) -> Result<bool, Error> {
    let report = sufficiently_generic(sites)?;
    if let Some(w) = report.witness {
        return Err(Error::Genericity(format!(
            "sites {} and {} have intersecting regions and share coordinate {}",
            w.a, w.b, w.coord
        )));
    }
    let hull = hull_complex(sites)?;
    let del = delone_complex(sites)?;
    Ok(hull.facets == del.facets)
}
