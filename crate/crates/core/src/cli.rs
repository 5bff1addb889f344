//! Command-line front end: input parsing, dispatch and SVG rendering.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::delone::{delone_complex, delone_complex_in_window, hull_complex, WINDOW_CAP};
use crate::exactnum::{solve_square, Rat};
use crate::lift::verify_lift;
use crate::polytrope::{leaves, DiffConstraint, Polytrope};
use crate::sites::{lattice_points, LatticeWindow, SiteSet};
use crate::tropcore::{sym_distance, HPoint};
use crate::voronoi::{region, voronoi_diagram, DEFAULT_CAP};
use crate::Error;

/// Environment variable holding the sampling seed for `verify-lift`.
pub const SEED_VAR: &str = "TROPVOR_SEED";

#[derive(Clone, Debug, Parser)]
#[command(
    name = "tropvor",
    version,
    about = "Exact asymmetric tropical Voronoi diagrams and Delone complexes"
)]
pub struct CommandSpec {
    #[command(subcommand)]
    pub subcommand: Command,
    /// Input JSON file (site set or lattice window); stdin when absent.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Overrides the radius of a lattice input.
    #[arg(long, global = true)]
    pub radius: Option<u32>,
    /// Largest site count accepted by `diagram` and `bisector`.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long, global = true, default_value_t = 600)]
    pub width: u32,
    #[arg(long, global = true, default_value_t = 600)]
    pub height: u32,
    /// Site index used by `region`.
    #[arg(long, global = true, default_value_t = 0)]
    pub site: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Voronoi region of one site: halfspaces and generators.
    Region,
    /// Diagram of exactly two sites.
    Bisector,
    /// Cell poset of the Voronoi diagram.
    Diagram,
    /// Delone complex; lattice inputs report uncertified sites separately.
    Delone,
    /// Hull complex of the monomial lift of an integral site set.
    Hull,
    /// Compare the diagram with the lifted power diagram.
    VerifyLift,
    /// SVG picture of the regions (n = 3 only).
    Render,
}

/// Parsed input: either an explicit site set or a lattice window.
#[derive(Clone, Debug)]
pub enum Input {
    Sites(SiteSet),
    Lattice(LatticeWindow),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSites {
    n: usize,
    sites: Vec<Vec<Rat>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    n: usize,
    basis: Vec<Vec<Rat>>,
    radius: u32,
}

/// Parses input JSON. Syntax and shape errors are `Parse`; well-formed
/// input that violates a precondition (coincident sites, bad basis) keeps
/// its own error kind.
pub fn parse_input(text: &str) -> Result<Input, Error> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let is_lattice = value.get("basis").is_some();
    if is_lattice {
        let raw: RawLattice = serde_json::from_value(value)?;
        return Ok(Input::Lattice(LatticeWindow::new(
            raw.n, raw.basis, raw.radius,
        )?));
    }
    let raw: RawSites = serde_json::from_value(value)?;
    let mut sites = Vec::with_capacity(raw.sites.len());
    for s in raw.sites {
        if s.len() != raw.n {
            return Err(Error::DimensionMismatch {
                expected: raw.n,
                found: s.len(),
            });
        }
        sites.push(HPoint::new(s).map_err(|e| Error::Parse(e.to_string()))?);
    }
    Ok(Input::Sites(SiteSet::new(raw.n, sites)?))
}

impl CommandSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.cap == 0 {
            return Err(Error::Parse("--cap must be positive".into()));
        }
        if self.radius == Some(0) {
            return Err(Error::Parse("--radius must be positive".into()));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::Parse("--width and --height must be positive".into()));
        }
        Ok(())
    }

    fn read_input(&self) -> Result<Input, Error> {
        let text = match &self.input {
            Some(path) => std::fs::read_to_string(path)?,
            None => std::io::read_to_string(std::io::stdin())?,
        };
        let input = parse_input(&text)?;
        Ok(match (input, self.radius) {
            (Input::Lattice(w), Some(b)) => Input::Lattice(w.with_radius(b)),
            (other, _) => other,
        })
    }
}

fn seed() -> Result<u64, Error> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_VAR} is not an unsigned integer: {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn site_set(input: Input) -> Result<SiteSet, Error> {
    match input {
        Input::Sites(s) => Ok(s),
        Input::Lattice(w) => Ok(lattice_points(&w)?.sites),
    }
}

/// Runs one command on already-parsed input and returns the output text.
pub fn execute(spec: &CommandSpec, input: Input) -> Result<String, Error> {
    spec.validate()?;
    match spec.subcommand {
        Command::Region => {
            let sites = site_set(input)?;
            Ok(to_json(&region(&sites, spec.site)?))
        }
        Command::Bisector => {
            let sites = site_set(input)?;
            if sites.len() != 2 {
                return Err(Error::InvalidSites(format!(
                    "bisector needs exactly two sites, got {}",
                    sites.len()
                )));
            }
            Ok(to_json(&voronoi_diagram(&sites, spec.cap)?))
        }
        Command::Diagram => Ok(to_json(&voronoi_diagram(&site_set(input)?, spec.cap)?)),
        Command::Delone => match input {
            Input::Sites(s) => Ok(to_json(&delone_complex(&s)?)),
            Input::Lattice(w) => Ok(to_json(&delone_complex_in_window(&w)?.complex)),
        },
        Command::Hull => Ok(to_json(&hull_complex(&site_set(input)?)?)),
        Command::VerifyLift => {
            let seed = seed()?;
            Ok(to_json(&verify_lift(&site_set(input)?, seed)?))
        }
        Command::Render => render_svg(&site_set(input)?, spec.width, spec.height),
    }
}

/// Reads input, runs the command, writes output; returns the exit status.
pub fn run(spec: &CommandSpec) -> i32 {
    let result = spec
        .validate()
        .and_then(|()| spec.read_input())
        .and_then(|input| execute(spec, input))
        .and_then(|text| {
            match &spec.output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tropvor: {e}");
            e.exit_code()
        }
    }
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

fn project(x: &HPoint) -> (f64, f64) {
    let c: Vec<f64> = x.coords().iter().map(Rat::to_f64).collect();
    let u = (c[0] - c[1]) / 2f64.sqrt();
    let v = (c[0] + c[1] - 2.0 * c[2]) / 6f64.sqrt();
    (u, -v)
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Corners of a bounded two-dimensional polytrope in `H` (n = 3), in
/// counterclockwise order of the projection.
fn polygon(p: &Polytrope) -> Vec<(f64, f64)> {
    let pairs: Vec<(usize, usize)> = (0..3)
        .cartesian_product(0..3)
        .filter(|(i, j)| i != j)
        .collect();
    let mut corners: Vec<HPoint> = Vec::new();
    for (&(i, j), &(k, l)) in pairs.iter().tuple_combinations() {
        let mut a = vec![vec![Rat::zero(); 3]; 3];
        a[0][i] = Rat::one();
        a[0][j] = -Rat::one();
        a[1][k] = Rat::one();
        a[1][l] = -Rat::one();
        a[2] = vec![Rat::one(); 3];
        let b = [
            p.upper(i, j).expect("bounded"),
            p.upper(k, l).expect("bounded"),
            Rat::zero(),
        ];
        let Ok(x) = solve_square(&a, &b) else {
            continue;
        };
        let inside = pairs
            .iter()
            .all(|&(s, t)| &x[s] - &x[t] <= p.upper(s, t).expect("bounded"));
        let x = HPoint::new(x).expect("sum zero by construction");
        if inside && !corners.contains(&x) {
            corners.push(x);
        }
    }
    let pts: Vec<(f64, f64)> = corners.iter().map(project).collect();
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len().max(1) as f64;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len().max(1) as f64;
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        let ta = (pts[a].1 - cy).atan2(pts[a].0 - cx);
        let tb = (pts[b].1 - cy).atan2(pts[b].0 - cx);
        ta.total_cmp(&tb)
    });
    order.into_iter().map(|k| pts[k]).collect()
}

/// SVG picture of the regions of `sites` in `H` for n = 3. Unbounded
/// regions are clipped to a box around the sites.
pub fn render_svg(sites: &SiteSet, width: u32, height: u32) -> Result<String, Error> {
    if sites.n() != 3 {
        return Err(Error::UnsupportedDimension(sites.n()));
    }
    if sites.len() > WINDOW_CAP {
        return Err(Error::TooLarge {
            what: "site count",
            found: sites.len(),
            cap: WINDOW_CAP,
        });
    }
    let mut cells: Vec<(usize, Vec<(f64, f64)>)> = Vec::new();
    if !sites.is_empty() {
        let mut span = Rat::zero();
        for s in sites.sites() {
            span = Rat::max_of(&span, &sym_distance(s, &HPoint::origin(3))?).clone();
        }
        let mut pad = Rat::one();
        for (a, b) in sites.sites().iter().tuple_combinations() {
            pad = Rat::max_of(&pad, &sym_distance(a, b)?).clone();
        }
        let m = &span + &pad;
        let mut frame = Polytrope::full(3);
        for (i, j) in (0..3).cartesian_product(0..3).filter(|(i, j)| i != j) {
            frame.constrain(&DiffConstraint {
                i,
                j,
                w: m.clone(),
                strict: false,
            });
        }
        for k in 0..sites.len() {
            let r = region(sites, k)?;
            for leaf in leaves(&frame, &r.disjunctions()) {
                if leaf.dim() == 2 {
                    cells.push((k, polygon(&leaf)));
                }
            }
        }
    }
    let dots: Vec<(f64, f64)> = sites.sites().iter().map(project).collect();
    let all: Vec<(f64, f64)> = cells
        .iter()
        .flat_map(|c| c.1.iter().copied())
        .chain(dots.iter().copied())
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    if let Some(&(px, py)) = all.first() {
        (x0, y0, x1, y1) = (px, py, px, py);
        for &(x, y) in &all {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let w = (x1 - x0).max(1.0);
        let h = (y1 - y0).max(1.0);
        (x0, y0, x1, y1) = (x0 - 0.05 * w, y0 - 0.05 * h, x0 + 1.05 * w, y0 + 1.05 * h);
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="{} {} {} {}">"#,
        fmt(x0),
        fmt(y0),
        fmt(x1 - x0),
        fmt(y1 - y0)
    );
    let stroke = fmt((x1 - x0).max(y1 - y0) / 400.0);
    for (k, poly) in &cells {
        let pts = poly
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt(x), fmt(y)))
            .join(" ");
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"  <polygon points="{pts}" fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="{stroke}"/>"#
        );
    }
    let radius = fmt((x1 - x0).max(y1 - y0) / 150.0);
    for (k, &(x, y)) in dots.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="{radius}" fill="{}" stroke="black" stroke-width="{stroke}"/>"#,
            fmt(x),
            fmt(y),
            PALETTE[k % PALETTE.len()]
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(cmd: Command) -> CommandSpec {
        CommandSpec::parse_from(["tropvor", "diagram"]).with(cmd)
    }

    impl CommandSpec {
        fn with(mut self, cmd: Command) -> CommandSpec {
            self.subcommand = cmd;
            self
        }
    }

    #[test]
    fn parse_errors_and_preconditions() {
        assert_eq!(parse_input("{").unwrap_err().exit_code(), 2);
        assert_eq!(
            parse_input(r#"{"n":3,"sites":[[1,2]]}"#)
                .unwrap_err()
                .exit_code(),
            2
        );
        assert_eq!(
            parse_input(r#"{"n":3,"sites":[[1,2,3]]}"#)
                .unwrap_err()
                .exit_code(),
            2
        );
        assert_eq!(
            parse_input(r#"{"n":3,"sites":[[0,0,0],[0,0,0]]}"#)
                .unwrap_err()
                .exit_code(),
            3
        );
        assert_eq!(
            parse_input(r#"{"n":3,"basis":[[1,-1,0],[2,-2,0]],"radius":2}"#)
                .unwrap_err()
                .exit_code(),
            3
        );
        assert!(matches!(
            parse_input(r#"{"n":3,"sites":[["1/2","-1/2",0]]}"#).unwrap(),
            Input::Sites(_)
        ));
    }

    #[test]
    fn two_site_diagram() {
        let input = parse_input(r#"{"n":3,"sites":[[0,0,0],[1,2,-3]]}"#).unwrap();
        let out = execute(&spec(Command::Bisector), input).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["cells"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn render_rejects_other_dimensions_and_draws_empty_canvas() {
        let four = SiteSet::from_ints(&[&[1, -1, 0, 0]]).unwrap();
        assert_eq!(render_svg(&four, 10, 10).unwrap_err().exit_code(), 3);
        let empty = SiteSet::new(3, Vec::new()).unwrap();
        let svg = render_svg(&empty, 10, 10).unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(!svg.contains("<polygon"));
    }

    #[test]
    fn render_is_deterministic() {
        let s = SiteSet::from_ints(&[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]]).unwrap();
        let a = render_svg(&s, 300, 200).unwrap();
        assert_eq!(a, render_svg(&s, 300, 200).unwrap());
        assert_eq!(a.matches("<circle").count(), 3);
        assert!(a.matches("<polygon").count() >= 3);
    }
}
