//! Voronoi regions with irredundant halfspace descriptions, point
//! classification, cell dimensions and the diagram poset.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::exactnum::Rat;
use crate::polytrope::{self, inside_pieces, outside_pieces, Piece, Polytrope};
use crate::sites::{check_general_position, signature_reduce, LatticeWindow, SiteSet};
use crate::tropcore::{
    asym_distance, halfspace_from_pair, tropical_extreme_points, HPoint, TropicalHalfspace,
};
use crate::Error;

/// Default limit on the number of sites of a full diagram.
pub const DEFAULT_CAP: usize = 12;

/// Largest ambient dimension handled by diagram enumeration.
pub const MAX_N: usize = 5;

/// Feasible pieces kept per cell as witnesses.
const PIECES_KEPT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoronoiRegion {
    pub site: usize,
    pub halfspaces: Vec<TropicalHalfspace>,
    /// Site index inducing each halfspace.
    pub neighbors: Vec<usize>,
    /// Tropical extreme points, present when the region is bounded.
    pub generators: Option<Vec<HPoint>>,
    /// Largest `max_i x_i - min_j x_j` over the region relative to the site,
    /// present when bounded.
    #[serde(skip)]
    pub spread: Option<Rat>,
}

impl VoronoiRegion {
    pub fn contains(&self, x: &HPoint) -> Result<bool, Error> {
        for h in &self.halfspaces {
            if !h.contains(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_bounded(&self) -> bool {
        self.generators.is_some()
    }

    pub fn disjunctions(&self) -> Vec<Vec<Piece>> {
        self.halfspaces.iter().map(inside_pieces).collect()
    }
}

pub fn region_contains(r: &VoronoiRegion, x: &HPoint) -> Result<bool, Error> {
    r.contains(x)
}

/// True iff the intersection of `others` lies inside `h`.
pub fn halfspace_redundant(h: &TropicalHalfspace, others: &[TropicalHalfspace]) -> bool {
    let n = h.dim();
    let rest: Vec<Vec<Piece>> = others.iter().map(inside_pieces).collect();
    !outside_pieces(h).iter().any(|piece| {
        let mut p = Polytrope::full(n);
        p.constrain_all(piece) && polytrope::any_feasible(&p, &rest)
    })
}

/// Region of site `s`: signature reduction followed by exact pruning of
/// redundant halfspaces, plus tropical extreme points when bounded.
pub fn region(sites: &SiteSet, s: usize) -> Result<VoronoiRegion, Error> {
    let center = sites.site(s)?;
    let mut neighbors = signature_reduce(sites, s)?;
    let mut halfspaces: Vec<TropicalHalfspace> = neighbors
        .iter()
        .map(|&b| halfspace_from_pair(center, &sites.sites()[b]))
        .collect::<Result<_, _>>()?;
    let mut k = 0;
    while k < halfspaces.len() {
        let others: Vec<TropicalHalfspace> = halfspaces
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, h)| h.clone())
            .collect();
        if halfspace_redundant(&halfspaces[k], &others) {
            halfspaces.remove(k);
            neighbors.remove(k);
        } else {
            k += 1;
        }
    }
    let mut r = VoronoiRegion {
        site: s,
        halfspaces,
        neighbors,
        generators: None,
        spread: None,
    };
    let leaves = polytrope::leaves(&Polytrope::full(sites.n()), &r.disjunctions());
    if leaves.iter().all(Polytrope::is_bounded) {
        let mut candidates: Vec<HPoint> = Vec::new();
        let mut spread = Rat::zero();
        for leaf in &leaves {
            for p in leaf.kleene_points().expect("bounded") {
                if !candidates.contains(&p) {
                    candidates.push(p);
                }
            }
            let c = center.coords();
            for (i, j) in (0..c.len()).cartesian_product(0..c.len()) {
                let up = leaf.upper(i, j).expect("bounded") - (&c[i] - &c[j]);
                spread = Rat::max_of(&spread, &up).clone();
            }
        }
        candidates.sort();
        r.generators = Some(tropical_extreme_points(&candidates));
        r.spread = Some(spread);
    }
    Ok(r)
}

/// Nearest sites of `x` and their distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub sites: Vec<usize>,
    pub dmin: Rat,
}

pub fn classify(sites: &SiteSet, x: &HPoint) -> Result<Classification, Error> {
    if sites.is_empty() {
        return Err(Error::InvalidSites("empty site set".into()));
    }
    let mut best: Option<Rat> = None;
    let mut argmin = Vec::new();
    for (k, s) in sites.sites().iter().enumerate() {
        let d = asym_distance(x, s)?;
        match &best {
            Some(b) if d > *b => {}
            Some(b) if d == *b => argmin.push(k),
            _ => {
                best = Some(d);
                argmin = vec![k];
            }
        }
    }
    Ok(Classification {
        sites: argmin,
        dmin: best.expect("nonempty"),
    })
}

/// Intersection of the regions of the sites in `label`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramCell {
    #[serde(rename = "T")]
    pub label: Vec<usize>,
    /// Dimension inside `H`; `-1` when empty.
    pub dim: i64,
    /// Difference systems realizing the dimension.
    #[serde(skip)]
    pub pieces: Vec<Piece>,
}

impl DiagramCell {
    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }
}

fn check_label(sites: &SiteSet, label: &[usize]) -> Result<Vec<usize>, Error> {
    if label.is_empty() {
        return Err(Error::InvalidSites("empty cell label".into()));
    }
    for &k in label {
        sites.site(k)?;
    }
    let mut t = label.to_vec();
    t.sort_unstable();
    t.dedup();
    Ok(t)
}

fn cell_from_regions(n: usize, label: Vec<usize>, regions: &[&VoronoiRegion]) -> DiagramCell {
    let disjunctions: Vec<Vec<Piece>> = regions.iter().flat_map(|r| r.disjunctions()).collect();
    let (dim, witnesses) =
        polytrope::max_dimension(&Polytrope::full(n), &disjunctions, PIECES_KEPT);
    DiagramCell {
        label,
        dim: dim.map_or(-1, |d| d as i64),
        pieces: witnesses.iter().map(Polytrope::describe).collect(),
    }
}

/// Feasibility and dimension of the intersection of the regions in `label`.
pub fn cell(sites: &SiteSet, label: &[usize]) -> Result<DiagramCell, Error> {
    let t = check_label(sites, label)?;
    let regions = t
        .iter()
        .map(|&a| region(sites, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(cell_from_regions(
        sites.n(),
        t,
        &regions.iter().collect::<Vec<_>>(),
    ))
}

/// Lazily computed regions of one site set.
pub struct RegionCache<'a> {
    sites: &'a SiteSet,
    regions: BTreeMap<usize, VoronoiRegion>,
}

impl<'a> RegionCache<'a> {
    pub fn new(sites: &'a SiteSet) -> Self {
        RegionCache {
            sites,
            regions: BTreeMap::new(),
        }
    }

    pub fn sites(&self) -> &SiteSet {
        self.sites
    }

    pub fn region(&mut self, s: usize) -> Result<&VoronoiRegion, Error> {
        if !self.regions.contains_key(&s) {
            let r = region(self.sites, s)?;
            self.regions.insert(s, r);
        }
        Ok(&self.regions[&s])
    }

    pub fn cell(&mut self, label: &[usize]) -> Result<DiagramCell, Error> {
        let t = check_label(self.sites, label)?;
        for &a in &t {
            self.region(a)?;
        }
        let regions: Vec<&VoronoiRegion> = t.iter().map(|a| &self.regions[a]).collect();
        Ok(cell_from_regions(self.sites.n(), t, &regions))
    }
}

/// Nonempty cells ordered by label size then label, and the covering pairs
/// `(child, parent)` of the inclusion order as indices into `cells`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub cells: Vec<DiagramCell>,
    pub order: Vec<(usize, usize)>,
}

impl Diagram {
    /// Assembles a diagram from nonempty labeled cells, deriving the order
    /// from label inclusion.
    pub fn from_cells(mut cells: Vec<DiagramCell>) -> Diagram {
        cells.sort_by(|a, b| {
            a.label
                .len()
                .cmp(&b.label.len())
                .then_with(|| a.label.cmp(&b.label))
        });
        let index: BTreeMap<Vec<usize>, usize> = cells
            .iter()
            .enumerate()
            .map(|(k, c)| (c.label.clone(), k))
            .collect();
        let mut order = Vec::new();
        for (k, c) in cells.iter().enumerate() {
            if c.label.len() < 2 {
                continue;
            }
            for drop in 0..c.label.len() {
                let mut sub = c.label.clone();
                sub.remove(drop);
                if let Some(&p) = index.get(&sub) {
                    order.push((k, p));
                }
            }
        }
        order.sort_unstable();
        Diagram { cells, order }
    }

    /// Label-to-dimension map, the data compared across diagram sources.
    pub fn signature(&self) -> BTreeMap<Vec<usize>, i64> {
        self.cells
            .iter()
            .map(|c| (c.label.clone(), c.dim))
            .collect()
    }

    pub fn find(&self, label: &[usize]) -> Option<&DiagramCell> {
        self.cells.iter().find(|c| c.label == label)
    }
}

/// Enumerates all nonempty cells. A label is only tried when every label
/// one smaller is nonempty; in general position labels stop at size `n`.
pub fn voronoi_diagram(sites: &SiteSet, cap: usize) -> Result<Diagram, Error> {
    if sites.len() > cap {
        return Err(Error::TooLarge {
            what: "site count",
            found: sites.len(),
            cap,
        });
    }
    if sites.n() > MAX_N {
        return Err(Error::UnsupportedDimension(sites.n()));
    }
    let max_size = if check_general_position(sites).holds() {
        sites.n()
    } else {
        sites.len()
    };
    let mut cache = RegionCache::new(sites);
    let mut cells = Vec::new();
    let mut level: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in 0..sites.len() {
        let c = cache.cell(&[s])?;
        if !c.is_empty() {
            level.insert(c.label.clone());
            cells.push(c);
        }
    }
    let mut size = 1;
    while size < max_size && !level.is_empty() {
        let mut next = BTreeSet::new();
        for t in &level {
            for b in (t.last().unwrap() + 1)..sites.len() {
                let mut cand = t.clone();
                cand.push(b);
                let closed = (0..cand.len()).all(|d| {
                    let mut sub = cand.clone();
                    sub.remove(d);
                    level.contains(&sub)
                });
                if !closed {
                    continue;
                }
                let c = cache.cell(&cand)?;
                if !c.is_empty() {
                    next.insert(cand);
                    cells.push(c);
                }
            }
        }
        level = next;
        size += 1;
    }
    Ok(Diagram::from_cells(cells))
}

/// Exactness certificate for a region computed from a finite window of a
/// lattice. A site `b` can only cut the region of `s` if every coordinate of
/// `b - s` exceeds `-D`, where `D` is the spread of the region, and then
/// (being on `H`) stays below `(n-1) D`; if that whole box lies inside the
/// window, no lattice point outside it can change the region.
pub fn region_certified(window: &LatticeWindow, center: &HPoint, r: &VoronoiRegion) -> bool {
    let Some(d) = &r.spread else {
        return false;
    };
    let radius = Rat::from_int(window.radius() as i64);
    let up = d * &Rat::from_int(window.n() as i64 - 1);
    center
        .coords()
        .iter()
        .all(|c| c - d >= -&radius && c + &up <= radius)
}

/// All pairs `{a, b}` (with `a < b`) whose cell has dimension at least
/// `n - 2`, computed with a shared region cache.
pub fn adjacent_pairs(
    cache: &mut RegionCache<'_>,
    vertices: &[usize],
) -> Result<Vec<(usize, usize)>, Error> {
    let n = cache.sites().n() as i64;
    let mut edges = Vec::new();
    for (&a, &b) in vertices.iter().tuple_combinations() {
        let (a, b) = (a.min(b), a.max(b));
        if cache.cell(&[a, b])?.dim >= n - 2 {
            edges.push((a, b));
        }
    }
    edges.sort_unstable();
    Ok(edges)
}
