//! Points on the sum-zero hyperplane, the symmetric and asymmetric tropical
//! distances, max-tropical halfspaces, tropical hull membership and the
//! sign-genericity test for tropical matrix pairs.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::Rat;
use crate::Error;

/// Representative of a point of the tropical projective torus: rational
/// coordinates summing to zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPoint {
    coords: Vec<Rat>,
}

impl HPoint {
    /// Wraps coordinates that already sum to zero.
    pub fn new(coords: Vec<Rat>) -> Result<HPoint, Error> {
        if coords.len() < 2 {
            return Err(Error::InvalidSites(format!(
                "need n >= 2 coordinates, got {}",
                coords.len()
            )));
        }
        let sum: Rat = coords.iter().sum();
        if !sum.is_zero() {
            return Err(Error::InvalidSites(format!(
                "coordinates sum to {sum}, not 0"
            )));
        }
        Ok(HPoint { coords })
    }

    pub fn from_ints(v: &[i64]) -> Result<HPoint, Error> {
        HPoint::new(v.iter().map(|&x| Rat::from_int(x)).collect())
    }

    pub fn origin(n: usize) -> HPoint {
        HPoint {
            coords: vec![Rat::zero(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &HPoint) -> HPoint {
        HPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &HPoint) -> HPoint {
        HPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> HPoint {
        HPoint {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    pub fn neg(&self) -> HPoint {
        HPoint {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for HPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<HPoint, D::Error> {
        let coords = Vec::<Rat>::deserialize(deserializer)?;
        HPoint::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Canonical representative of `v + R*1` on the sum-zero hyperplane.
pub fn normalize_to_h(v: &[Rat]) -> Result<HPoint, Error> {
    if v.len() < 2 {
        return Err(Error::InvalidSites(format!(
            "need n >= 2 coordinates, got {}",
            v.len()
        )));
    }
    let mean = v.iter().sum::<Rat>() / Rat::from_int(v.len() as i64);
    Ok(HPoint {
        coords: v.iter().map(|x| x - &mean).collect(),
    })
}

fn check_dims(a: &HPoint, b: &HPoint) -> Result<(), Error> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Asymmetric tropical distance from `a` to `b`:
/// `sum(b_i - a_i) - n * min(b_i - a_i)`.
pub fn asym_distance(a: &HPoint, b: &HPoint) -> Result<Rat, Error> {
    check_dims(a, b)?;
    let diffs: Vec<Rat> = b.coords.iter().zip(&a.coords).map(|(x, y)| x - y).collect();
    let sum: Rat = diffs.iter().sum();
    let min = diffs.iter().min().expect("n >= 2");
    Ok(sum - Rat::from_int(a.dim() as i64) * min)
}

/// Symmetric tropical distance `max(a_i - b_i) - min(a_j - b_j)`.
pub fn sym_distance(a: &HPoint, b: &HPoint) -> Result<Rat, Error> {
    check_dims(a, b)?;
    let diffs: Vec<Rat> = a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect();
    let max = diffs.iter().max().expect("n >= 2");
    let min = diffs.iter().min().expect("n >= 2");
    Ok(max - min)
}

/// The max-tropical halfspace `max_{i in I}(c_i + x_i) <= max_{j in J}(d_j + x_j)`
/// where `I` and `J` partition the coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TropicalHalfspace {
    left: Vec<usize>,
    c: Vec<Rat>,
    right: Vec<usize>,
    d: Vec<Rat>,
}

impl TropicalHalfspace {
    pub fn new(
        left: Vec<usize>,
        c: Vec<Rat>,
        right: Vec<usize>,
        d: Vec<Rat>,
    ) -> Result<Self, Error> {
        let n = left.len() + right.len();
        let mut seen = vec![false; n];
        for &k in left.iter().chain(&right) {
            if k >= n || seen[k] {
                return Err(Error::Parse(
                    "halfspace index sets must partition 0..n".into(),
                ));
            }
            seen[k] = true;
        }
        if left.is_empty() || right.is_empty() {
            return Err(Error::Parse(
                "halfspace index sets must both be nonempty".into(),
            ));
        }
        if c.len() != left.len() || d.len() != right.len() {
            return Err(Error::Parse("halfspace coefficient count mismatch".into()));
        }
        let mut l: Vec<(usize, Rat)> = left.into_iter().zip(c).collect();
        let mut r: Vec<(usize, Rat)> = right.into_iter().zip(d).collect();
        l.sort_by_key(|p| p.0);
        r.sort_by_key(|p| p.0);
        let (left, c) = l.into_iter().unzip();
        let (right, d) = r.into_iter().unzip();
        Ok(TropicalHalfspace { left, c, right, d })
    }

    pub fn dim(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn left_coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn right_coeffs(&self) -> &[Rat] {
        &self.d
    }

    /// `(index, coefficient)` pairs on the left side.
    pub fn left_terms(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.left.iter().copied().zip(&self.c)
    }

    pub fn right_terms(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.right.iter().copied().zip(&self.d)
    }

    /// `max_J(d_j + x_j) - max_I(c_i + x_i)`; nonnegative exactly on the halfspace.
    pub fn slack(&self, x: &HPoint) -> Result<Rat, Error> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let lhs = self
            .left_terms()
            .map(|(i, c)| c + &x.coords[i])
            .max()
            .unwrap();
        let rhs = self
            .right_terms()
            .map(|(j, d)| d + &x.coords[j])
            .max()
            .unwrap();
        Ok(rhs - lhs)
    }

    pub fn contains(&self, x: &HPoint) -> Result<bool, Error> {
        Ok(!self.slack(x)?.is_negative())
    }

    /// Apex of the boundary hyperplane: the point where every term ties.
    pub fn apex(&self) -> HPoint {
        let mut v = vec![Rat::zero(); self.dim()];
        for (i, c) in self.left_terms() {
            v[i] = -c;
        }
        for (j, d) in self.right_terms() {
            v[j] = -d;
        }
        normalize_to_h(&v).expect("n >= 2")
    }
}

impl fmt::Debug for TropicalHalfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |idx: &[usize], co: &[Rat]| {
            idx.iter()
                .zip(co)
                .map(|(i, c)| format!("{c}+x{i}"))
                .join(", ")
        };
        write!(
            f,
            "max({}) <= max({})",
            side(&self.left, &self.c),
            side(&self.right, &self.d)
        )
    }
}

#[derive(Serialize, Deserialize)]
struct HalfspaceJson {
    #[serde(rename = "I")]
    left: Vec<usize>,
    c: Vec<Rat>,
    #[serde(rename = "J")]
    right: Vec<usize>,
    d: Vec<Rat>,
}

impl Serialize for TropicalHalfspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HalfspaceJson {
            left: self.left.clone(),
            c: self.c.clone(),
            right: self.right.clone(),
            d: self.d.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TropicalHalfspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = HalfspaceJson::deserialize(deserializer)?;
        TropicalHalfspace::new(raw.left, raw.c, raw.right, raw.d).map_err(serde::de::Error::custom)
    }
}

/// The region `h(a, b)` of points at least as close to `a` as to `b`,
/// with `I = {i : a_i < b_i}`, `c_i = -a_i` and `d_j = -b_j`.
pub fn halfspace_from_pair(a: &HPoint, b: &HPoint) -> Result<TropicalHalfspace, Error> {
    check_dims(a, b)?;
    if a == b {
        return Err(Error::CoincidentSites);
    }
    let (left, right): (Vec<usize>, Vec<usize>) =
        (0..a.dim()).partition(|&i| a.coords[i] < b.coords[i]);
    let c = left.iter().map(|&i| -&a.coords[i]).collect();
    let d = right.iter().map(|&j| -&b.coords[j]).collect();
    Ok(TropicalHalfspace { left, c, right, d })
}

pub fn halfspace_contains(h: &TropicalHalfspace, x: &HPoint) -> Result<bool, Error> {
    h.contains(x)
}

/// Max-plus projection of `x` onto the tropical hull of `generators`.
pub fn tropical_projection(x: &HPoint, generators: &[HPoint]) -> Result<Vec<Rat>, Error> {
    let Some(first) = generators.first() else {
        return Err(Error::EmptyGenerators);
    };
    let mut out: Option<Vec<Rat>> = None;
    for v in generators {
        check_dims(x, v)?;
        let lambda = x
            .coords
            .iter()
            .zip(&v.coords)
            .map(|(a, b)| a - b)
            .min()
            .unwrap();
        let scaled: Vec<Rat> = v.coords.iter().map(|c| c + &lambda).collect();
        out = Some(match out {
            None => scaled,
            Some(acc) => acc
                .into_iter()
                .zip(scaled)
                .map(|(a, b)| if a >= b { a } else { b })
                .collect(),
        });
    }
    let _ = first;
    Ok(out.expect("nonempty"))
}

/// True iff `x` lies in the max-tropical convex hull of `generators`.
pub fn tconv_membership(x: &HPoint, generators: &[HPoint]) -> Result<bool, Error> {
    let p = tropical_projection(x, generators)?;
    Ok(normalize_to_h(&p)? == *x)
}

/// Removes generators lying in the tropical hull of the remaining ones;
/// what is left are the tropical extreme points. Input order is kept.
pub fn tropical_extreme_points(points: &[HPoint]) -> Vec<HPoint> {
    let mut kept: Vec<HPoint> = Vec::new();
    for p in points {
        if !kept.contains(p) {
            kept.push(p.clone());
        }
    }
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<HPoint> = kept
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, p)| p.clone())
            .collect();
        if !others.is_empty() && tconv_membership(&kept[i], &others).unwrap_or(false) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// Tropical number: `None` is `-inf`.
pub type Trop = Option<Rat>;

/// Pair `(A-, A+)` of tropical matrices describing a tropical polyhedron
/// `A- x <= A+ x` row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrixPair {
    pub minus: Vec<Vec<Trop>>,
    pub plus: Vec<Vec<Trop>>,
}

/// Largest size of square submatrix whose tropical determinant is taken.
pub const MAX_TDET_SIZE: usize = 8;

impl SignMatrixPair {
    /// Matrix pair of the region of `site` cut out by `h(site, b)` for each
    /// `b` in `neighbors`.
    pub fn from_region(site: &HPoint, neighbors: &[HPoint]) -> Result<SignMatrixPair, Error> {
        let mut minus = Vec::with_capacity(neighbors.len());
        let mut plus = Vec::with_capacity(neighbors.len());
        for b in neighbors {
            let h = halfspace_from_pair(site, b)?;
            let mut row_m = vec![None; site.dim()];
            let mut row_p = vec![None; site.dim()];
            for (i, c) in h.left_terms() {
                row_m[i] = Some(c.clone());
            }
            for (j, d) in h.right_terms() {
                row_p[j] = Some(d.clone());
            }
            minus.push(row_m);
            plus.push(row_p);
        }
        Ok(SignMatrixPair { minus, plus })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.minus.len(), self.minus.first().map_or(0, Vec::len))
    }
}

fn trop_add(a: &Trop, b: &Trop) -> Trop {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(if x >= y { x.clone() } else { y.clone() }),
    }
}

/// Tropical (max-plus) determinant of the submatrix on `rows` x `cols`.
pub fn tropical_determinant(m: &[Vec<Trop>], rows: &[usize], cols: &[usize]) -> Trop {
    assert_eq!(rows.len(), cols.len());
    let mut best: Trop = None;
    for perm in cols.iter().permutations(cols.len()) {
        let mut total = Some(Rat::zero());
        for (&r, &&c) in rows.iter().zip(&perm) {
            total = match (&total, &m[r][c]) {
                (Some(t), Some(v)) => Some(t + v),
                _ => None,
            };
            if total.is_none() {
                break;
            }
        }
        if total > best {
            best = total;
        }
    }
    best
}

/// True iff no square submatrix has `tdet A- = tdet A+ = tdet (A- (+) A+)`
/// with a finite value.
pub fn sign_genericity(p: &SignMatrixPair) -> Result<bool, Error> {
    let (m, n) = p.shape();
    if p.plus.len() != m || p.minus.iter().chain(&p.plus).any(|r| r.len() != n) {
        return Err(Error::Parse("sign matrix pair shapes differ".into()));
    }
    let combined: Vec<Vec<Trop>> = p
        .minus
        .iter()
        .zip(&p.plus)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| trop_add(x, y)).collect())
        .collect();
    let top = m.min(n);
    if top > MAX_TDET_SIZE {
        return Err(Error::TooLarge {
            what: "tropical determinant size",
            found: top,
            cap: MAX_TDET_SIZE,
        });
    }
    for k in 1..=top {
        for rows in (0..m).combinations(k) {
            for cols in (0..n).combinations(k) {
                let full = tropical_determinant(&combined, &rows, &cols);
                if full.is_none() {
                    continue;
                }
                let lo = tropical_determinant(&p.minus, &rows, &cols);
                if lo.cmp(&full) != Ordering::Equal {
                    continue;
                }
                if tropical_determinant(&p.plus, &rows, &cols) == full {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> HPoint {
        HPoint::from_ints(v).unwrap()
    }

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize_to_h(&[r(1), r(2), r(3)]).unwrap(),
            pt(&[-1, 0, 1])
        );
        assert_eq!(normalize_to_h(&[r(0), r(0), r(0)]).unwrap(), pt(&[0, 0, 0]));
        assert_eq!(normalize_to_h(&[r(5), r(5)]).unwrap(), pt(&[0, 0]));
        let p = pt(&[4, -1, -3]);
        assert_eq!(normalize_to_h(p.coords()).unwrap(), p);
    }

    #[test]
    fn distance_examples() {
        let o = pt(&[0, 0, 0]);
        let b = pt(&[1, -1, 0]);
        assert_eq!(asym_distance(&o, &b).unwrap(), r(3));
        assert_eq!(asym_distance(&b, &b).unwrap(), r(0));
        let a = pt(&[-6, -5, 11]);
        let c = pt(&[-5, 12, -7]);
        assert_eq!(asym_distance(&a, &c).unwrap(), r(54));
        assert_eq!(asym_distance(&c, &a).unwrap(), r(51));
        assert_eq!(sym_distance(&o, &b).unwrap(), r(2));
        assert_eq!(sym_distance(&a, &c).unwrap(), r(35));
        assert!(matches!(
            asym_distance(&o, &pt(&[1, -1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn halfspace_examples() {
        let a = pt(&[-6, -5, 11]);
        let b = pt(&[-5, 12, -7]);
        let h = halfspace_from_pair(&a, &b).unwrap();
        assert_eq!(h.left(), &[0, 1]);
        assert_eq!(h.left_coeffs(), &[r(6), r(5)]);
        assert_eq!(h.right(), &[2]);
        assert_eq!(h.right_coeffs(), &[r(7)]);
        assert_eq!(h.apex(), pt(&[0, 1, -1]));

        let h2 = halfspace_from_pair(&pt(&[0, 0, 0]), &pt(&[1, -1, 0])).unwrap();
        assert_eq!(h2.left(), &[0]);
        assert_eq!(h2.left_coeffs(), &[r(0)]);
        assert_eq!(h2.right(), &[1, 2]);
        assert_eq!(h2.right_coeffs(), &[r(1), r(0)]);

        // ties go to the right-hand side
        let c = pt(&[-5, -5, 10]);
        let d = pt(&[-5, 10, -5]);
        let h3 = halfspace_from_pair(&c, &d).unwrap();
        assert_eq!(h3.left(), &[1]);
        assert_eq!(h3.left_coeffs(), &[r(5)]);
        assert_eq!(h3.right(), &[0, 2]);
        assert_eq!(h3.right_coeffs(), &[r(5), r(5)]);

        assert!(matches!(
            halfspace_from_pair(&a, &a),
            Err(Error::CoincidentSites)
        ));
    }

    #[test]
    fn halfspace_membership_examples() {
        let h = halfspace_from_pair(&pt(&[-6, -5, 11]), &pt(&[-5, 12, -7])).unwrap();
        assert!(h.contains(&pt(&[0, 0, 0])).unwrap());
        assert_eq!(h.slack(&pt(&[0, 1, -1])).unwrap(), r(0));
        assert!(!h.contains(&pt(&[2, -1, -1])).unwrap());
        assert_eq!(h.slack(&pt(&[2, -1, -1])).unwrap(), r(-2));
    }

    #[test]
    fn halfspace_json_shape() {
        let h = halfspace_from_pair(&pt(&[0, 0, 0]), &pt(&[1, -1, 0])).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"I":[0],"c":["0"],"J":[1,2],"d":["1","0"]}"#);
        let back: TropicalHalfspace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<TropicalHalfspace>(
            r#"{"I":[],"c":[],"J":[0,1],"d":["0","0"]}"#
        )
        .is_err());
    }

    #[test]
    fn tconv_examples() {
        let v = vec![pt(&[1, -1, 0]), pt(&[-1, 1, 0])];
        assert!(tconv_membership(&v[0], &v).unwrap());
        // projection of the origin is (0,0,-1), so it is outside the segment
        assert!(!tconv_membership(&pt(&[0, 0, 0]), &v).unwrap());
        let w = vec![pt(&[3, -3, 0]), pt(&[-3, 3, 0])];
        assert!(tconv_membership(&pt(&[1, 1, -2]), &w).unwrap());
        assert!(!tconv_membership(&pt(&[0, 1, -1]), &[pt(&[1, -1, 0])]).unwrap());
        assert!(matches!(
            tconv_membership(&pt(&[0, 0, 0]), &[]),
            Err(Error::EmptyGenerators)
        ));
    }

    #[test]
    fn extreme_points_drop_interior_generators() {
        let v = vec![
            pt(&[3, -3, 0]),
            pt(&[1, 1, -2]),
            pt(&[-3, 3, 0]),
            pt(&[3, -3, 0]),
        ];
        assert_eq!(
            tropical_extreme_points(&v),
            vec![pt(&[3, -3, 0]), pt(&[-3, 3, 0])]
        );
        let u = vec![pt(&[3, -3, 0]), pt(&[0, 0, 0]), pt(&[-3, 3, 0])];
        assert_eq!(tropical_extreme_points(&u).len(), 3);
    }

    #[test]
    fn sign_genericity_examples() {
        let p = SignMatrixPair::from_region(&pt(&[0, 0, 0]), &[pt(&[1, -1, 0])]).unwrap();
        assert_eq!(p.minus, vec![vec![Some(r(0)), None, None]]);
        assert_eq!(p.plus, vec![vec![None, Some(r(1)), Some(r(0))]]);
        assert!(sign_genericity(&p).unwrap());

        let q = SignMatrixPair {
            minus: vec![vec![Some(r(0))]],
            plus: vec![vec![Some(r(0))]],
        };
        assert!(!sign_genericity(&q).unwrap());

        let w = SignMatrixPair {
            minus: vec![vec![Some(r(0)), None], vec![None, Some(r(0))]],
            plus: vec![vec![None, Some(r(-1))], vec![Some(r(-1)), None]],
        };
        assert!(sign_genericity(&w).unwrap());
    }
}
