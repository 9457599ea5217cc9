use std::path::Path;

use corona_core::catalog::{self, CatalogError};
use corona_core::corona::{direction_fan, normalized, point_star, polygon_support, CoronaError, CoronaShells};
use corona_core::io::{decimal, parse_tiling, vec2_from_json, FormatError};
use corona_core::limit::{certify, corona_limit, CoronaLimit, LimitError};
use corona_core::tiling::{compute_star, AdjacencyKind, AdjacencyStar, TileId, TilingSpec};
use corona_core::{QuarticScalar, Rational, Vec2};
use num_traits::ToPrimitive;
use serde_json::json;
use thiserror::Error;

use crate::document::{self, DIGITS};
use crate::svg::{self, Scene};
use crate::{AdjacencyChoice, Format, ListFormat, RenderWhat};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot access `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Corona(#[from] CoronaError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Limit(_) | CliError::Certificate(_) => 3,
            CliError::Verification(_) => 4,
            _ => 2,
        }
    }
}

struct Loaded {
    key: String,
    spec: TilingSpec,
    file_star: Option<AdjacencyStar>,
}

impl Loaded {
    fn star(&self, choice: AdjacencyChoice) -> Result<AdjacencyStar, CliError> {
        match choice {
            AdjacencyChoice::Point => Ok(compute_star(&self.spec, AdjacencyKind::Point)),
            AdjacencyChoice::Edge => Ok(compute_star(&self.spec, AdjacencyKind::Edge)),
            AdjacencyChoice::Custom => self
                .file_star
                .clone()
                .ok_or_else(|| CliError::Input(format!("`{}` does not supply an adjacency star", self.key))),
        }
    }

    fn default_seed(&self) -> Vec<TileId> {
        self.spec.tiles_containing_point(&Vec2::zero())[..1].to_vec()
    }
}

fn load(arg: &str) -> Result<Loaded, CliError> {
    if let Some(key) = arg.strip_prefix("catalog:") {
        let e = catalog::get(key)?;
        return Ok(Loaded {
            key: e.key.to_string(),
            spec: e.spec,
            file_star: None,
        });
    }
    let text = std::fs::read_to_string(arg).map_err(|source| CliError::Io {
        path: arg.to_string(),
        source,
    })?;
    let file = parse_tiling(&text)?;
    Ok(Loaded {
        key: file.spec.name.clone(),
        spec: file.spec,
        file_star: file.star,
    })
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_seed(text: &str, m: usize) -> Result<Vec<TileId>, CliError> {
    let bad = || CliError::Input(format!("seed cell must be `prototile,a,b`, got `{text}`"));
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [i, a, b] = parts[..] else {
        return Err(bad());
    };
    if i < 0 || i as usize >= m {
        return Err(CliError::Input(format!("seed prototile {i} out of range 0..{m}")));
    }
    let cell = (i32::try_from(a).map_err(|_| bad())?, i32::try_from(b).map_err(|_| bad())?);
    Ok(vec![TileId::new(i as usize, cell)])
}

fn parse_direction(text: &str) -> Result<Vec2, CliError> {
    let v = if text.trim_start().starts_with('[') {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("direction: {e}")))?;
        vec2_from_json(&value, "direction")?
    } else {
        let parts: Vec<i64> = text
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Input(format!("direction must be `x,y` or `[x, y]`, got `{text}`")))?;
        let [x, y] = parts[..] else {
            return Err(CliError::Input(format!("direction must have two components, got `{text}`")));
        };
        Vec2::from_ints(x, y)
    };
    if v.is_zero() {
        return Err(CliError::Corona(CoronaError::ZeroDirection));
    }
    Ok(v)
}

fn rational_decimal(r: &Rational) -> String {
    decimal(&QuarticScalar::from_rational(r), DIGITS)
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn list(format: ListFormat) -> Result<(), CliError> {
    let rows = catalog::list();
    match format {
        ListFormat::Text => {
            println!("{:<12} {:<14} {:>2}  {:<11} golden", "key", "notation", "m", "kind");
            for r in rows {
                let golden = match (r.golden_point, r.golden_edge) {
                    (true, true) => "point,edge",
                    (true, false) => "point",
                    (false, true) => "edge",
                    (false, false) => "-",
                };
                let kind = if r.archimedean { "archimedean" } else { "2-uniform" };
                println!("{:<12} {:<14} {:>2}  {:<11} {golden}", r.key, r.notation, r.m, kind);
            }
        }
        ListFormat::Json => {
            let doc: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "key": r.key,
                        "notation": r.notation,
                        "m": r.m,
                        "archimedean": r.archimedean,
                        "golden_point": r.golden_point,
                        "golden_edge": r.golden_edge,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&doc).expect("serialisable"));
        }
    }
    Ok(())
}

pub fn validate(tiling: &str) -> Result<(), CliError> {
    let t = load(tiling)?;
    let report = t.spec.validate();
    println!("tiling: {}", t.key);
    println!("prototiles: {}", t.spec.m());
    println!("area_balanced: {}", report.area_balanced);
    println!("overlap_free: {}", report.overlap_free);
    println!("polygons_simple: {}", report.polygons_simple);
    println!("inradius_bound: {:.6}", report.inradius_bound);
    println!("circumradius_bound: {:.6}", report.circumradius_bound);
    if !report.passed() {
        for d in &report.diagnostics {
            println!("diagnostic: {d}");
        }
        return Err(CliError::Input(format!("`{}` is not a valid tiling", t.key)));
    }
    for kind in [AdjacencyKind::Point, AdjacencyKind::Edge] {
        let star = compute_star(&t.spec, kind);
        let degrees: Vec<String> = (0..star.m()).map(|i| star.degree(i).to_string()).collect();
        println!("{kind}_degrees: {}", degrees.join(","));
    }
    println!("valid: true");
    Ok(())
}

fn compute_limit(t: &Loaded, choice: AdjacencyChoice) -> Result<CoronaLimit, CliError> {
    let star = t.star(choice)?;
    Ok(corona_limit(&t.spec, &star)?)
}

pub fn limit(tiling: &str, choice: AdjacencyChoice, out: Option<&Path>, format: Format) -> Result<(), CliError> {
    let t = load(tiling)?;
    let k = compute_limit(&t, choice)?;
    let cert = certify(&k);
    let text = match format {
        Format::Json => document::result_json(&t.key, &k, &cert),
        Format::Csv => document::result_csv(&k),
    };
    match out {
        Some(path) => write_out(path, &text)?,
        None => print!("{text}"),
    }
    if !cert.passed() {
        let names: Vec<&str> = cert.failed().iter().map(|c| c.as_str()).collect();
        return Err(CliError::Certificate(names.join(", ")));
    }
    Ok(())
}

fn seed_for(t: &Loaded, seed_cell: Option<&str>) -> Result<Vec<TileId>, CliError> {
    match seed_cell {
        Some(s) => parse_seed(s, t.spec.m()),
        None => Ok(t.default_seed()),
    }
}

pub fn grow(
    tiling: &str,
    choice: AdjacencyChoice,
    steps: usize,
    svg_out: Option<&Path>,
    seed_cell: Option<&str>,
) -> Result<(), CliError> {
    let t = load(tiling)?;
    let star = t.star(choice)?;
    let pstar = point_star(&t.spec);
    let seed = seed_for(&t, seed_cell)?;
    let shells = CoronaShells::grow(&t.spec, &star, &seed, steps)?;
    println!("{:>5} {:>10} {:>14} {:>14}", "n", "size", "max_radius/n", "inradius/n");
    for n in 0..=steps {
        let m = shells.metrics(n, &pstar)?;
        if n == 0 {
            println!("{:>5} {:>10} {:>14} {:>14}", n, m.size, "-", "-");
        } else {
            println!("{:>5} {:>10} {:>14.6} {:>14.6}", n, m.size, m.max_radius_ratio, m.inradius_ratio);
        }
    }
    if let Some(path) = svg_out {
        write_out(path, &coronas_svg(&t.spec, &shells))?;
    }
    Ok(())
}

pub fn speed(
    tiling: &str,
    choice: AdjacencyChoice,
    steps: usize,
    direction: &str,
    seed_cell: Option<&str>,
) -> Result<(), CliError> {
    if steps == 0 {
        return Err(CliError::Input("--steps must be positive".into()));
    }
    let t = load(tiling)?;
    let star = t.star(choice)?;
    let v = parse_direction(direction)?;
    let seed = seed_for(&t, seed_cell)?;
    let shells = CoronaShells::grow(&t.spec, &star, &seed, steps)?;
    let k = corona_limit(&t.spec, &star)?;
    let exit = k
        .vertices
        .ray_exit(&v)
        .ok_or(CliError::Limit(LimitError::OriginNotInterior))?;
    println!("direction: {}", document::point_text(&v));
    println!("limit_exact: {}", document::scalar_text(&exit));
    println!("limit: {}", decimal(&exit, DIGITS));
    println!("{:>6} {:>28} {:>16} {:>16}", "n", "sigma", "sigma/n", "error");
    let mut ns: Vec<usize> = [steps / 4, steps / 2, steps].into_iter().filter(|&n| n > 0).collect();
    ns.dedup();
    for n in ns {
        let est = shells.directional_reach(&v, n)?;
        println!(
            "{:>6} {:>28} {:>16} {:>16}",
            n,
            document::scalar_text(&est.sigma),
            rational_decimal(&est.ratio),
            rational_decimal(&est.error)
        );
    }
    Ok(())
}

/// Support gap of `(P⁽ⁿ⁾ − offset)/n` against the limit, so that a seed
/// translated by a lattice vector is measured about its own position.
fn centred_gap(
    shells: &CoronaShells<'_>,
    n: usize,
    offset: &Vec2,
    k: &CoronaLimit,
    dirs: &[Vec2],
) -> Result<f64, CliError> {
    let hs = shells.support(n, dirs)?;
    let eps = Rational::new(1.into(), (1u64 << 40).into());
    Ok(hs
        .iter()
        .zip(dirs)
        .map(|(h, u)| {
            let centred = (h - &offset.dot(u)).div_int(n as i64);
            f(&(&centred - &polygon_support(&k.vertices, u)).abs().approximate(&eps))
        })
        .fold(0.0, f64::max))
}

pub fn verify(tiling: &str, choice: AdjacencyChoice, steps: usize, directions: usize, seeds: usize) -> Result<(), CliError> {
    if steps < 4 {
        return Err(CliError::Input("--steps must be at least 4".into()));
    }
    if directions == 0 || directions % 4 != 0 {
        return Err(CliError::Input("--directions must be a positive multiple of 4".into()));
    }
    if seeds == 0 {
        return Err(CliError::Input("--seeds must be positive".into()));
    }
    let t = load(tiling)?;
    let star = t.star(choice)?;
    let k = corona_limit(&t.spec, &star)?;
    let cert = certify(&k);
    let linear = k.linear_hull(&t.spec);
    let hulls_agree = linear.vertices() == k.vertices.vertices() && k.oracle_agrees();
    let mut dirs = direction_fan(directions);
    dirs.extend(k.vertices.vertices().iter().map(normalized));

    println!("tiling: {}", t.key);
    println!("adjacency: {}", star.kind);
    println!("vertices: {}", k.vertices.len());
    println!("certificate: {}", if cert.passed() { "pass" } else { "fail" });
    println!("oracle_agrees: {hulls_agree}");
    let checkpoints = [steps / 4, steps / 2, steps];
    let bound = 5.0 / steps as f64;
    let mut problems = Vec::new();
    if !cert.passed() {
        let names: Vec<&str> = cert.failed().iter().map(|c| c.as_str()).collect();
        problems.push(format!("certificate checks {}", names.join(", ")));
    }
    if !hulls_agree {
        problems.push("velocity enumerations give different hulls".to_string());
    }
    let first = t.default_seed()[0];
    let pstar = point_star(&t.spec);
    let mut candidates: Vec<TileId> = pstar.neighbors(first).collect();
    candidates.sort();
    candidates.insert(0, first);
    for j in 0..seeds {
        let shift = (3 * j as i32, 2 * j as i32);
        let seed = vec![candidates[j % candidates.len()].shifted(shift)];
        let shells = CoronaShells::grow(&t.spec, &star, &seed, steps)?;
        let offset = t.spec.lattice_point((seed[0].cell.0 - first.cell.0, seed[0].cell.1 - first.cell.1));
        let gaps = checkpoints
            .iter()
            .map(|&n| centred_gap(&shells, n, &offset, &k, &dirs))
            .collect::<Result<Vec<_>, _>>()?;
        println!(
            "seed {} tile {}: gap({})={:.6} gap({})={:.6} gap({})={:.6}",
            j, seed[0], checkpoints[0], gaps[0], checkpoints[1], gaps[1], checkpoints[2], gaps[2]
        );
        if gaps[2] >= bound {
            problems.push(format!("seed {j}: gap({steps}) = {:.6} is not below 5/{steps}", gaps[2]));
        }
        if gaps[2] >= gaps[0] {
            problems.push(format!(
                "seed {j}: gap({steps}) = {:.6} did not decrease from gap({}) = {:.6}",
                gaps[2], checkpoints[0], gaps[0]
            ));
        }
    }
    if problems.is_empty() {
        println!("verified: true");
        Ok(())
    } else {
        println!("verified: false");
        Err(CliError::Verification(problems.join("; ")))
    }
}

fn polygon_f64(spec: &TilingSpec, id: TileId) -> (Vec<(f64, f64)>, usize) {
    let p = spec.tile_polygon(id);
    (p.vertices().iter().map(Vec2::to_f64).collect(), p.len())
}

fn tiling_svg(spec: &TilingSpec) -> String {
    let b = [spec.basis[0].to_f64(), spec.basis[1].to_f64()];
    let longest = b.iter().map(|v| v.0.hypot(v.1)).fold(0.0f64, f64::max);
    let radius = 4.0 * longest;
    let det = b[0].0 * b[1].1 - b[0].1 * b[1].0;
    // Cell range covering the viewport, from the inverse basis applied to its corners.
    let reach = [(radius, radius), (radius, -radius), (-radius, radius), (-radius, -radius)]
        .iter()
        .flat_map(|&(x, y)| [(x * b[1].1 - y * b[1].0) / det, (b[0].0 * y - b[0].1 * x) / det])
        .fold(0.0f64, |r, c| r.max(c.abs()));
    let r = reach.ceil() as i32 + 2;
    let mut scene = Scene::centered(radius);
    for a in -r..=r {
        for c in -r..=r {
            for i in 0..spec.m() {
                let (pts, sides) = polygon_f64(spec, TileId::new(i, (a, c)));
                let visible = pts.iter().any(|&(x, y)| x.abs() <= radius && y.abs() <= radius);
                if visible {
                    scene.polygon(&pts, svg::side_colour(sides));
                }
            }
        }
    }
    scene.finish()
}

fn coronas_svg(spec: &TilingSpec, shells: &CoronaShells<'_>) -> String {
    let mut tiles = Vec::new();
    for n in 0..=shells.steps() {
        for &id in shells.layer(n) {
            let (pts, _) = polygon_f64(spec, id);
            tiles.push((n, pts));
        }
    }
    let mut scene = Scene::fitting(tiles.iter().flat_map(|(_, p)| p.iter()));
    for (n, pts) in &tiles {
        scene.polygon(pts, svg::layer_colour(*n));
    }
    scene.finish()
}

fn velocities_svg(spec: &TilingSpec, k: &CoronaLimit) -> String {
    let hull: Vec<(f64, f64)> = k.vertices.vertices().iter().map(Vec2::to_f64).collect();
    let mut scene = Scene::fitting(hull.iter());
    let mut points: Vec<(f64, f64)> = k.velocities.points(spec).iter().map(Vec2::to_f64).collect();
    points.push((0.0, 0.0));
    scene.outline(&hull, "#d62728");
    for p in points {
        scene.dot(p, "#1f77b4");
    }
    scene.finish()
}

pub fn render(tiling: &str, choice: AdjacencyChoice, what: RenderWhat, out: &Path, steps: usize) -> Result<(), CliError> {
    let t = load(tiling)?;
    let text = match what {
        RenderWhat::Tiling => tiling_svg(&t.spec),
        RenderWhat::Coronas => {
            let star = t.star(choice)?;
            let shells = CoronaShells::grow(&t.spec, &star, &t.default_seed(), steps)?;
            coronas_svg(&t.spec, &shells)
        }
        RenderWhat::Velocities => velocities_svg(&t.spec, &compute_limit(&t, choice)?),
    };
    write_out(out, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        assert_eq!(CliError::Catalog(CatalogError::UnknownTiling("x".into())).exit_code(), 2);
        assert_eq!(CliError::Limit(LimitError::DegenerateHull).exit_code(), 3);
        assert_eq!(CliError::Certificate("CONVEX_CCW".into()).exit_code(), 3);
        assert_eq!(CliError::Verification("gap".into()).exit_code(), 4);
    }

    #[test]
    fn seed_and_direction_parsing() {
        assert_eq!(parse_seed("1,-2,3", 2).unwrap(), vec![TileId::new(1, (-2, 3))]);
        assert!(parse_seed("2,0,0", 2).is_err());
        assert!(parse_seed("0,0", 2).is_err());
        assert_eq!(parse_direction("3,-4").unwrap(), Vec2::from_ints(3, -4));
        assert_eq!(parse_direction("[1, [0, 0, 1, 0]]").unwrap().y, QuarticScalar::sqrt3());
        assert!(parse_direction("0,0").is_err());
    }
}
