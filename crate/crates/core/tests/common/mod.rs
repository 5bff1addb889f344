#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tropvor::exactnum::Rat;
use tropvor::sites::{check_general_position, LatticeWindow, SiteSet};
use tropvor::tropcore::HPoint;

pub fn r(v: i64) -> Rat {
    Rat::from_int(v)
}

pub fn q(p: i64, d: i64) -> Rat {
    Rat::new(p, d)
}

pub fn pt(v: &[i64]) -> HPoint {
    HPoint::from_ints(v).unwrap()
}

pub fn l2_window(radius: u32) -> LatticeWindow {
    LatticeWindow::new(
        3,
        vec![vec![r(2), r(-2), r(0)], vec![r(-1), r(2), r(-1)]],
        radius,
    )
    .unwrap()
}

pub fn l2_eps_window(eps: &Rat, radius: u32) -> LatticeWindow {
    let (one, two) = (r(1), r(2));
    let b0 = vec![&two + &(&two * eps), -(&two + eps), -eps.clone()];
    let b1 = vec![-(&one + eps), &two + &(&two * eps), -(&one + eps)];
    LatticeWindow::new(3, vec![b0, b1], radius).unwrap()
}

pub fn a2_window(radius: u32) -> LatticeWindow {
    LatticeWindow::new(
        3,
        vec![vec![r(1), r(-1), r(0)], vec![r(0), r(1), r(-1)]],
        radius,
    )
    .unwrap()
}

/// Lattice coefficients of the origin and its eight neighbours in L2(2,1,1).
pub const NINE: [[i64; 2]; 9] = [
    [0, 0],
    [1, 0],
    [-1, 0],
    [0, 1],
    [0, -1],
    [1, 1],
    [-1, -1],
    [1, 2],
    [-1, -2],
];

pub fn nine_sites(window: &LatticeWindow) -> SiteSet {
    SiteSet::new(3, NINE.iter().map(|k| window.point(k)).collect()).unwrap()
}

/// Perturbed nine sites scaled by 10 onto the integer lattice.
pub fn nine_eps_scaled() -> SiteSet {
    let s = nine_sites(&l2_eps_window(&q(1, 10), 1));
    let pts = s.sites().iter().map(|p| p.scale(&r(10))).collect();
    SiteSet::new(3, pts).unwrap()
}

pub fn cyclic() -> SiteSet {
    SiteSet::from_ints(&[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]]).unwrap()
}

/// The origin and `(k + a/k, -a/k, -k)` for `k = 1..=count`.
pub fn nonpolyhedral(a: i64, count: i64) -> SiteSet {
    let mut pts = vec![HPoint::origin(3)];
    for k in 1..=count {
        pts.push(HPoint::new(vec![&r(k) + &q(a, k), -q(a, k), r(-k)]).unwrap());
    }
    SiteSet::new(3, pts).unwrap()
}

/// A random point of `H` with coordinates of denominator at most 2.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize, range: i64) -> HPoint {
    let mut c: Vec<Rat> = (0..n - 1)
        .map(|_| q(rng.gen_range(-range..=range), rng.gen_range(1..=2)))
        .collect();
    let last = c.iter().fold(Rat::zero(), |acc, x| &acc - x);
    c.push(last);
    HPoint::new(c).unwrap()
}

pub fn random_sites(rng: &mut ChaCha8Rng, n: usize, count: usize, range: i64) -> SiteSet {
    loop {
        let pts: Vec<HPoint> = (0..count).map(|_| random_point(rng, n, range)).collect();
        if let Ok(s) = SiteSet::new(n, pts) {
            return s;
        }
    }
}

pub fn random_gp_sites(rng: &mut ChaCha8Rng, n: usize, count: usize, range: i64) -> SiteSet {
    loop {
        let s = random_sites(rng, n, count, range);
        if check_general_position(&s).holds() {
            return s;
        }
    }
}

/// Points `(u, v, -u-v)` with `u, v` on a 21 by 21 grid of step 1/2.
pub fn grid21() -> Vec<HPoint> {
    let mut out = Vec::with_capacity(441);
    for i in -10..=10 {
        for j in -10..=10 {
            out.push(HPoint::new(vec![q(i, 2), q(j, 2), q(-i - j, 2)]).unwrap());
        }
    }
    out
}
