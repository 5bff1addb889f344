mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropvor::delone::{
    delone_complex, delone_complex_in_window, scarf_check, sufficiently_generic,
};
use tropvor::lift::{stability_check, verify_lift};
use tropvor::polytrope::Polytrope;
use tropvor::sites::{lattice_points, SiteSet};
use tropvor::tropcore::{asym_distance, halfspace_from_pair, sym_distance, HPoint};
use tropvor::voronoi::{cell, classify, region, region_certified};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn c1_l2_generators() -> Outcome {
    let window = l2_window(6);
    let pts = lattice_points(&window).map_err(err)?;
    ensure(
        pts.cones_covered,
        "window does not cover every signature cone",
    )?;
    let reg = region(&pts.sites, 0).map_err(err)?;
    ensure(
        region_certified(&window, &pts.sites.sites()[0], &reg),
        "region not certified by the window",
    )?;
    let mut got = reg.generators.clone().ok_or("region unbounded")?;
    got.sort();
    let mut want: Vec<HPoint> = [
        [1, -1, 0],
        [1, 1, -2],
        [0, 1, -1],
        [-1, 1, 0],
        [-2, 1, 1],
        [0, -1, 1],
    ]
    .iter()
    .map(|v| pt(v))
    .collect();
    want.sort();
    ensure(got == want, format!("generators {got:?}"))?;
    Ok("six generators, exact".into())
}

fn c2_bisectors() -> Outcome {
    let s = SiteSet::from_ints(&[&[-6, -5, 11], &[-5, 12, -7]]).map_err(err)?;
    let bis = cell(&s, &[0, 1]).map_err(err)?;
    ensure(bis.dim == 1, format!("bisector dimension {}", bis.dim))?;
    // every term of the bisecting tropical halfspace ties at its apex, and
    // the closures of the one-dimensional pieces of the bisector meet there
    let tie = halfspace_from_pair(&s.sites()[0], &s.sites()[1])
        .map_err(err)?
        .apex();
    ensure(tie == pt(&[0, 1, -1]), format!("tie point {tie:?}"))?;
    let mut meet = Polytrope::full(3);
    for c in bis.pieces.iter().flatten() {
        let mut c = c.clone();
        c.strict = false;
        ensure(meet.constrain(&c), "pieces have no common point")?;
    }
    ensure(
        meet.dim() == 0 && meet.contains(&tie),
        "pieces do not meet in the tie point",
    )?;
    let ab = classify(&s, &tie).map_err(err)?;
    ensure(ab.sites == vec![0, 1], "tie point is not equidistant")?;

    let cd = SiteSet::from_ints(&[&[-5, -5, 10], &[-5, 10, -5]]).map_err(err)?;
    let mut checked = 0;
    'grid: for x2 in -4i64..=4 {
        for x3 in -4i64..=4 {
            let x1 = -x2 - x3;
            if x1 < x2.max(x3) {
                continue;
            }
            let x = pt(&[x1, x2, x3]);
            let c = classify(&cd, &x).map_err(err)?;
            ensure(
                c.sites == vec![0, 1],
                format!("{x:?} classified into {:?}", c.sites),
            )?;
            checked += 1;
            if checked == 20 {
                break 'grid;
            }
        }
    }
    ensure(checked == 20, format!("only {checked} sector points"))?;
    Ok("tie point (0,1,-1); 20 sector points tie".into())
}

fn c3_nonpolyhedral() -> Outcome {
    for count in [3, 6] {
        let s = nonpolyhedral(5, count);
        let reg = region(&s, 0).map_err(err)?;
        ensure(
            reg.halfspaces.len() == count as usize,
            format!("N={count}: kept {}", reg.halfspaces.len()),
        )?;
    }
    Ok("N=3 and N=6 keep all halfspaces".into())
}

fn c4_a2() -> Outcome {
    let window = a2_window(5);
    let wd = delone_complex_in_window(&window).map_err(err)?;
    let sites = &wd.window.sites;
    let mut nb: Vec<HPoint> = wd
        .graph
        .neighbors(0)
        .iter()
        .map(|&k| sites.sites()[k].clone())
        .collect();
    nb.sort();
    let mut roots: Vec<HPoint> = [
        [1, -1, 0],
        [-1, 1, 0],
        [0, 1, -1],
        [0, -1, 1],
        [1, 0, -1],
        [-1, 0, 1],
    ]
    .iter()
    .map(|v| pt(v))
    .collect();
    roots.sort();
    ensure(nb == roots, format!("neighbors of 0: {nb:?}"))?;
    let star = wd.complex.star(0);
    ensure(
        star.len() == 6 && star.iter().all(|f| f.len() == 3),
        format!("star of 0: {star:?}"),
    )?;
    let mut idx = vec![0];
    idx.extend(wd.graph.neighbors(0));
    let local = delone_complex(&sites.subset(&idx).map_err(err)?).map_err(err)?;
    ensure(
        local.is_pure() && local.dim() == 2,
        "local complex not pure of dimension 2",
    )?;
    let report = sufficiently_generic(sites).map_err(err)?;
    ensure(
        !report.generic && report.witness.is_some(),
        "A2 window reported sufficiently generic",
    )?;
    Ok("six root neighbors, six triangles, not sufficiently generic".into())
}

fn c5_nine_sites() -> Outcome {
    let plain = nine_sites(&l2_window(1));
    let d = delone_complex(&plain).map_err(err)?.dim();
    ensure(d == 3, format!("Del(L) local dimension {d}"))?;
    let pert = nine_sites(&l2_eps_window(&q(1, 10), 1));
    let d = delone_complex(&pert).map_err(err)?.dim();
    ensure(d == 2, format!("Del(L^eps) local dimension {d}"))?;
    let report = sufficiently_generic(&pert).map_err(err)?;
    ensure(
        report.generic,
        format!(
            "perturbed sites not sufficiently generic: {:?}",
            report.witness
        ),
    )?;
    Ok("dimensions 3 and 2; perturbation sufficiently generic".into())
}

fn c6_lift_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut generator_checks = 0;
    for k in 0..50 {
        let (n, max) = if k < 30 { (3, 5) } else { (4, 4) };
        let size = rng.gen_range(2..=max);
        let s = random_gp_sites(&mut rng, n, size, 4);
        let report = verify_lift(&s, k).map_err(err)?;
        ensure(
            report.isomorphic && report.failures.is_empty(),
            format!("set {k}: {:?}", report.failures),
        )?;
        generator_checks += report.generator_checks;
    }
    ensure(generator_checks > 0, "no generator images checked")?;
    Ok(format!(
        "50 sets isomorphic, {generator_checks} generator images inside"
    ))
}

fn c7_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..1000 {
        let n = rng.gen_range(2..=6);
        let a = random_point(&mut rng, n, 20);
        let b = random_point(&mut rng, n, 20);
        let dab = asym_distance(&a, &b).map_err(err)?;
        let dba = asym_distance(&b, &a).map_err(err)?;
        let dist = sym_distance(&a, &b).map_err(err)?;
        let nn = r(n as i64);
        ensure(
            dist == &(&dab + &dba) / &nn,
            format!("pair {k}: symmetric identity"),
        )?;
        ensure(
            dist <= dab && dab <= &dist * &r(n as i64 - 1),
            format!("pair {k}: bounds"),
        )?;
    }
    Ok("1000 pairs".into())
}

fn c8_grid_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let grid = grid21();
    for k in 0..10 {
        let size = rng.gen_range(2..=5);
        let s = random_sites(&mut rng, 3, size, 8);
        let regions = (0..s.len())
            .map(|i| region(&s, i))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        for x in &grid {
            let nearest = classify(&s, x).map_err(err)?.sites;
            for (i, reg) in regions.iter().enumerate() {
                let inside = reg.contains(x).map_err(err)?;
                ensure(
                    inside == nearest.contains(&i),
                    format!("set {k}, site {i}, point {x:?}"),
                )?;
            }
        }
    }
    Ok("10 sets x 441 points".into())
}

fn c9_scarf() -> Outcome {
    ensure(scarf_check(&cyclic()).map_err(err)?, "cyclic sites")?;
    ensure(
        scarf_check(&nine_eps_scaled()).map_err(err)?,
        "scaled perturbed nine sites",
    )?;
    Ok("hull complex equals Delone complex on both fixtures".into())
}

fn c10_stability() -> Outcome {
    let fixtures: Vec<(&str, SiteSet)> = vec![
        ("cyclic", cyclic()),
        (
            "generic pair",
            SiteSet::from_ints(&[&[-6, -5, 11], &[-5, 12, -7]]).map_err(err)?,
        ),
        (
            "two sites",
            SiteSet::from_ints(&[&[0, 0, 0], &[1, 2, -3]]).map_err(err)?,
        ),
        (
            "quadruple",
            SiteSet::from_ints(&[
                &[0, 0, 0, 0],
                &[3, -1, -1, -1],
                &[-1, 2, 0, -1],
                &[1, 1, -3, 1],
            ])
            .map_err(err)?,
        ),
        ("nine perturbed", nine_sites(&l2_eps_window(&q(1, 10), 1))),
    ];
    for (name, s) in &fixtures {
        let report = stability_check(s).map_err(err)?;
        ensure(
            report.identical,
            format!("{name}: differs at t0 = {}", report.t0),
        )?;
    }
    Ok(format!("{} fixtures byte-identical", fixtures.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        (
            "L2(2,1,1) region generators",
            Duration::from_secs(5),
            c1_l2_generators,
        ),
        (
            "bisector tie point and sector",
            Duration::from_secs(1),
            c2_bisectors,
        ),
        (
            "non-polyhedral truncations irredundant",
            Duration::from_secs(5),
            c3_nonpolyhedral,
        ),
        (
            "A2 Delone neighbors and star",
            Duration::from_secs(10),
            c4_a2,
        ),
        (
            "nine-site Delone dimensions",
            Duration::from_secs(30),
            c5_nine_sites,
        ),
        (
            "lift isomorphism suite",
            Duration::from_secs(300),
            c6_lift_suite,
        ),
        (
            "distance identities",
            Duration::from_secs(10),
            c7_identities,
        ),
        ("grid oracle", Duration::from_secs(60), c8_grid_oracle),
        ("Scarf correspondence", Duration::from_secs(60), c9_scarf),
        (
            "threshold stability",
            Duration::from_secs(60),
            c10_stability,
        ),
    ];
    let mut failed = 0;
    for (k, (name, bound, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if took <= *bound => format!("PASS {detail}"),
            Ok(detail) => format!("FAIL too slow ({detail})"),
            Err(why) => format!("FAIL {why}"),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{name}] {:.2}s (limit {}s): {verdict}",
            k + 1,
            took.as_secs_f64(),
            bound.as_secs()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
