//! Site sets, general position, nondominated points, the signature-cone
//! neighbor reduction and lattice windows.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exactnum::{lcm_denominators, rank, solve_square, Rat};
use crate::tropcore::HPoint;
use crate::Error;

/// Ordered list of distinct sites in a common dimension `n`. Indices are
/// the identifiers used by every downstream label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteSet {
    n: usize,
    sites: Vec<HPoint>,
}

impl SiteSet {
    pub fn new(n: usize, sites: Vec<HPoint>) -> Result<SiteSet, Error> {
        if n < 2 {
            return Err(Error::InvalidSites(format!("need n >= 2, got {n}")));
        }
        for s in &sites {
            if s.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.dim(),
                });
            }
        }
        for (a, b) in sites.iter().tuple_combinations() {
            if a == b {
                return Err(Error::CoincidentSites);
            }
        }
        Ok(SiteSet { n, sites })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<SiteSet, Error> {
        let n = rows.first().map_or(0, |r| r.len());
        let sites = rows
            .iter()
            .map(|r| HPoint::from_ints(r))
            .collect::<Result<Vec<_>, _>>()?;
        SiteSet::new(n, sites)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[HPoint] {
        &self.sites
    }

    pub fn site(&self, index: usize) -> Result<&HPoint, Error> {
        self.sites.get(index).ok_or(Error::SiteOutOfRange {
            index,
            len: self.sites.len(),
        })
    }

    pub fn position(&self, p: &HPoint) -> Option<usize> {
        self.sites.iter().position(|s| s == p)
    }

    /// The sites at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<SiteSet, Error> {
        let sites = indices
            .iter()
            .map(|&i| self.site(i).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        SiteSet::new(self.n, sites)
    }

    /// True when every coordinate of every site is an integer.
    pub fn is_integral(&self) -> bool {
        self.sites
            .iter()
            .flat_map(|s| s.coords())
            .all(Rat::is_integer)
    }

    /// Least common multiple of all coordinate denominators.
    pub fn denominator_lcm(&self) -> u64 {
        lcm_denominators(self.sites.iter().flat_map(|s| s.coords()))
            .to_u64()
            .expect("denominator fits in u64")
    }
}

#[derive(Serialize, Deserialize)]
struct SiteSetJson {
    n: usize,
    sites: Vec<Vec<Rat>>,
}

impl Serialize for SiteSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SiteSetJson {
            n: self.n,
            sites: self.sites.iter().map(|s| s.coords().to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SiteSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<SiteSet, D::Error> {
        let raw = SiteSetJson::deserialize(deserializer)?;
        let sites = raw
            .sites
            .into_iter()
            .map(HPoint::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        SiteSet::new(raw.n, sites).map_err(serde::de::Error::custom)
    }
}

/// Outcome of the general-position test. Coordinates are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GeneralPosition {
    Holds,
    Violated { a: usize, b: usize, coord: usize },
}

impl GeneralPosition {
    pub fn holds(&self) -> bool {
        matches!(self, GeneralPosition::Holds)
    }
}

/// True general position: `a_i != b_i` for every pair and every coordinate.
pub fn check_general_position(s: &SiteSet) -> GeneralPosition {
    for ((ia, a), (ib, b)) in s.sites.iter().enumerate().tuple_combinations() {
        if let Some(i) = pair_violation(a, b) {
            return GeneralPosition::Violated {
                a: ia,
                b: ib,
                coord: i,
            };
        }
    }
    GeneralPosition::Holds
}

/// First coordinate on which `a` and `b` agree.
pub fn pair_violation(a: &HPoint, b: &HPoint) -> Option<usize> {
    a.coords().iter().zip(b.coords()).position(|(x, y)| x == y)
}

fn dominated_by(x: &[Rat], y: &[Rat]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

/// Indices of the entries of `g` not dominated componentwise by a different
/// entry; repeated values are reported once, at their first position.
pub fn nondominated_indices(g: &[Vec<Rat>]) -> Vec<usize> {
    (0..g.len())
        .filter(|&k| !g[..k].contains(&g[k]))
        .filter(|&k| !g.iter().any(|y| *y != g[k] && dominated_by(&g[k], y)))
        .collect()
}

pub fn nondominated(g: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    nondominated_indices(g)
        .into_iter()
        .map(|k| g[k].clone())
        .collect()
}

/// Positive-coordinate mask of a nonzero point of `H`: the `I` of its
/// half-open signature cone.
pub fn signature(v: &HPoint) -> u32 {
    v.coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .fold(0, |m, (i, _)| m | (1 << i))
}

/// Neighbors of site `s` that can contribute an irredundant halfspace to its
/// region. Sites are grouped by signature cone around `s`; inside a cone the
/// halfspace `h(s, b)` only depends on the `J`-part of `b - s`, and a smaller
/// `J`-part gives a larger halfspace, so only the maximal `J`-parts are kept.
pub fn signature_reduce(sites: &SiteSet, s: usize) -> Result<Vec<usize>, Error> {
    let center = sites.site(s)?;
    let mut cones: BTreeMap<u32, Vec<(usize, Vec<Rat>)>> = BTreeMap::new();
    for (k, b) in sites.sites.iter().enumerate() {
        if k == s {
            continue;
        }
        let v = b.sub(center);
        let mask = signature(&v);
        let proj = (0..sites.n)
            .filter(|j| mask & (1 << j) == 0)
            .map(|j| v.coords()[j].clone())
            .collect();
        cones.entry(mask).or_default().push((k, proj));
    }
    let mut keep = Vec::new();
    for members in cones.values() {
        let projs: Vec<Vec<Rat>> = members.iter().map(|m| m.1.clone()).collect();
        keep.extend(
            nondominated_indices(&projs)
                .into_iter()
                .map(|k| members[k].0),
        );
    }
    keep.sort_unstable();
    Ok(keep)
}

/// Lattice points `sum k_i b_i` of a rational lattice in `H` whose
/// coordinates all lie in `[-radius, radius]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeWindow {
    n: usize,
    basis: Vec<HPoint>,
    radius: u32,
    scale: u64,
}

impl LatticeWindow {
    pub fn new(n: usize, basis: Vec<Vec<Rat>>, radius: u32) -> Result<LatticeWindow, Error> {
        if n < 2 {
            return Err(Error::InvalidBasis(format!("need n >= 2, got {n}")));
        }
        if radius == 0 {
            return Err(Error::InvalidBasis("radius must be at least 1".into()));
        }
        let mut pts = Vec::with_capacity(basis.len());
        for v in basis {
            if v.len() != n {
                return Err(Error::InvalidBasis(format!(
                    "vector of length {} in dimension {n}",
                    v.len()
                )));
            }
            pts.push(HPoint::new(v).map_err(|_| {
                Error::InvalidBasis("vector not on the sum-zero hyperplane".into())
            })?);
        }
        let rows: Vec<Vec<Rat>> = pts.iter().map(|p| p.coords().to_vec()).collect();
        if rank(&rows) < rows.len() {
            return Err(Error::InvalidBasis("vectors are linearly dependent".into()));
        }
        let scale = lcm_denominators(pts.iter().flat_map(|p| p.coords()))
            .to_u64()
            .ok_or_else(|| Error::InvalidBasis("denominators too large".into()))?;
        Ok(LatticeWindow {
            n,
            basis: pts,
            radius,
            scale,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[HPoint] {
        &self.basis
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn with_radius(&self, radius: u32) -> LatticeWindow {
        LatticeWindow {
            radius: radius.max(1),
            ..self.clone()
        }
    }

    /// The lattice point with coefficient vector `k`.
    pub fn point(&self, k: &[i64]) -> HPoint {
        let mut p = HPoint::origin(self.n);
        for (b, &c) in self.basis.iter().zip(k) {
            p = p.add(&b.scale(&Rat::from_int(c)));
        }
        p
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    n: usize,
    basis: Vec<Vec<Rat>>,
    radius: u32,
}

impl Serialize for LatticeWindow {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LatticeJson {
            n: self.n,
            basis: self.basis.iter().map(|b| b.coords().to_vec()).collect(),
            radius: self.radius,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeWindow {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> Result<LatticeWindow, D::Error> {
        let raw = LatticeJson::deserialize(deserializer)?;
        LatticeWindow::new(raw.n, raw.basis, raw.radius).map_err(serde::de::Error::custom)
    }
}

/// Enumerated window together with the lattice coefficients of each point
/// and the cone-coverage flag: every signature cone around the origin
/// holds a window point.
#[derive(Clone, Debug)]
pub struct WindowPoints {
    pub sites: SiteSet,
    pub coefficients: Vec<Vec<i64>>,
    pub cones_covered: bool,
}

impl WindowPoints {
    pub fn index_of_coefficients(&self, k: &[i64]) -> Option<usize> {
        self.coefficients.iter().position(|c| c == k)
    }
}

pub fn lattice_points(window: &LatticeWindow) -> Result<WindowPoints, Error> {
    let n = window.n;
    let k = window.basis.len();
    let bound = Rat::from_int(window.radius as i64);
    let ranges: Vec<std::ops::RangeInclusive<i64>> = if k == 0 {
        Vec::new()
    } else {
        coefficient_bounds(window)?
            .into_iter()
            .map(|b| -b..=b)
            .collect()
    };
    let mut coefficients = Vec::new();
    let mut sites = Vec::new();
    let combos: Box<dyn Iterator<Item = Vec<i64>>> = if k == 0 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new(ranges.into_iter().multi_cartesian_product())
    };
    for coeffs in combos {
        let p = window.point(&coeffs);
        if p.coords().iter().all(|c| c.abs() <= bound) {
            sites.push(p);
            coefficients.push(coeffs);
        }
    }
    // origin first, then by coefficient order
    let origin = coefficients
        .iter()
        .position(|c| c.iter().all(|&x| x == 0))
        .expect("origin in window");
    let o = coefficients.remove(origin);
    coefficients.insert(0, o);
    let p = sites.remove(origin);
    sites.insert(0, p);
    let mut masks = vec![false; 1 << n];
    for s in sites.iter().skip(1) {
        masks[signature(s) as usize] = true;
    }
    let cones_covered = (1..(1usize << n) - 1).all(|m| masks[m]);
    Ok(WindowPoints {
        sites: SiteSet::new(n, sites)?,
        coefficients,
        cones_covered,
    })
}

/// Bounds on `|k_i|` for window points, from a `k x k` invertible block of
/// the basis matrix.
fn coefficient_bounds(window: &LatticeWindow) -> Result<Vec<i64>, Error> {
    let k = window.basis.len();
    let cols: Vec<Vec<Rat>> = (0..window.n)
        .map(|r| window.basis.iter().map(|b| b.coords()[r].clone()).collect())
        .collect();
    let chosen = (0..window.n)
        .combinations(k)
        .find(|rows| rank(&rows.iter().map(|&r| cols[r].clone()).collect::<Vec<_>>()) == k)
        .ok_or_else(|| Error::InvalidBasis("vectors are linearly dependent".into()))?;
    let block: Vec<Vec<Rat>> = chosen.iter().map(|&r| cols[r].clone()).collect();
    let mut sums = vec![Rat::zero(); k];
    for e in 0..k {
        let mut rhs = vec![Rat::zero(); k];
        rhs[e] = Rat::one();
        // column e of the inverse
        let col = solve_square(&block, &rhs)?;
        for (s, v) in sums.iter_mut().zip(&col) {
            *s = &*s + &v.abs();
        }
    }
    let radius = Rat::from_int(window.radius as i64);
    Ok(sums
        .iter()
        .map(|s| {
            (s * &radius)
                .floor()
                .to_i64()
                .expect("coefficient bound fits")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| r(x)).collect()
    }

    #[test]
    fn general_position_examples() {
        let s = SiteSet::from_ints(&[&[-6, -5, 11], &[-5, 12, -7]]).unwrap();
        assert!(check_general_position(&s).holds());
        let s = SiteSet::from_ints(&[&[-5, -5, 10], &[-5, 10, -5]]).unwrap();
        assert_eq!(
            check_general_position(&s),
            GeneralPosition::Violated {
                a: 0,
                b: 1,
                coord: 0
            }
        );
        let s = SiteSet::from_ints(&[&[1, -1, 0]]).unwrap();
        assert!(check_general_position(&s).holds());
    }

    #[test]
    fn site_set_rejects_bad_input() {
        assert!(matches!(
            SiteSet::from_ints(&[&[1, -1, 0], &[1, -1, 0]]),
            Err(Error::CoincidentSites)
        ));
        let off = serde_json::from_str::<SiteSet>(r#"{"n":3,"sites":[["1","0","0"]]}"#);
        assert!(off.is_err());
        let short = serde_json::from_str::<SiteSet>(r#"{"n":3,"sites":[["1","-1"]]}"#);
        assert!(short.is_err());
        assert!(serde_json::from_str::<SiteSet>(r#"{"n":2,"sites":[["ln(2)","0"]]}"#).is_err());
    }

    #[test]
    fn site_set_json_round_trip() {
        let s = SiteSet::new(
            3,
            vec![HPoint::new(vec![Rat::new(1, 2), Rat::new(-1, 2), r(0)]).unwrap()],
        )
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"n":3,"sites":[["1/2","-1/2","0"]]}"#);
        assert_eq!(serde_json::from_str::<SiteSet>(&text).unwrap(), s);
    }

    #[test]
    fn nondominated_examples() {
        let g = vec![rv(&[1, 3]), rv(&[2, 2]), rv(&[3, 1])];
        assert_eq!(nondominated(&g), g);
        assert_eq!(nondominated(&[rv(&[1, 1]), rv(&[2, 2])]), vec![rv(&[2, 2])]);
        let h = vec![
            vec![r(5), r(1)],
            vec![Rat::new(5, 2), r(2)],
            vec![Rat::new(5, 3), r(3)],
        ];
        assert_eq!(nondominated(&h), h);
        assert_eq!(nondominated(&[rv(&[1, 1]), rv(&[1, 1])]), vec![rv(&[1, 1])]);
    }

    #[test]
    fn signature_reduce_examples() {
        let pts = vec![
            HPoint::origin(3),
            HPoint::from_ints(&[6, -5, -1]).unwrap(),
            HPoint::new(vec![Rat::new(9, 2), Rat::new(-5, 2), r(-2)]).unwrap(),
            HPoint::new(vec![Rat::new(14, 3), Rat::new(-5, 3), r(-3)]).unwrap(),
        ];
        let s = SiteSet::new(3, pts).unwrap();
        assert_eq!(signature_reduce(&s, 0).unwrap(), vec![1, 2, 3]);

        let s = SiteSet::from_ints(&[&[0, 0, 0], &[1, -1, 0], &[2, -2, 0]]).unwrap();
        assert_eq!(signature_reduce(&s, 0).unwrap(), vec![1]);

        let s = SiteSet::from_ints(&[&[0, 0, 0], &[3, -1, -2]]).unwrap();
        assert_eq!(signature_reduce(&s, 0).unwrap(), vec![1]);
        assert!(matches!(
            signature_reduce(&s, 5),
            Err(Error::SiteOutOfRange { .. })
        ));
    }

    #[test]
    fn lattice_examples() {
        let a2 = LatticeWindow::new(3, vec![rv(&[1, -1, 0]), rv(&[0, 1, -1])], 2).unwrap();
        let w = lattice_points(&a2).unwrap();
        assert_eq!(w.sites.len(), 19);
        assert!(w.cones_covered);
        assert!(w.sites.sites()[0].is_origin());
        // oracle: (i, j) in [-2, 2]^2 with |i - j| <= 2
        let oracle = (-2i64..=2)
            .cartesian_product(-2i64..=2)
            .filter(|(i, j)| (i - j).abs() <= 2)
            .count();
        assert_eq!(oracle, 19);

        let empty = LatticeWindow::new(3, vec![], 2).unwrap();
        let w = lattice_points(&empty).unwrap();
        assert_eq!(w.sites.len(), 1);
        assert!(!w.cones_covered);

        let err = LatticeWindow::new(3, vec![rv(&[1, 0, 0])], 2).unwrap_err();
        assert!(err.to_string().contains("invalid basis"));
        let dep = LatticeWindow::new(3, vec![rv(&[1, -1, 0]), rv(&[2, -2, 0])], 2).unwrap_err();
        assert!(dep.to_string().contains("invalid basis"));
    }

    #[test]
    fn lattice_scale_tracks_denominators() {
        let w = LatticeWindow::new(
            3,
            vec![
                vec![Rat::new(1, 2), Rat::new(-1, 2), r(0)],
                vec![r(0), Rat::new(1, 3), Rat::new(-1, 3)],
            ],
            1,
        )
        .unwrap();
        assert_eq!(w.scale(), 6);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<LatticeWindow>(&json).unwrap(), w);
    }
}
