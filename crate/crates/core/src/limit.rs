//! Exact corona limits of lattice-periodic tilings.
//!
//! The limit is the convex hull of the velocities `p/η(p)`, where `p` runs
//! over lattice periods and `η(p)` is the least number of adjacency steps
//! between a tile and its translate by `p`. Velocities are handled in lattice
//! coordinates, where they are small rationals, and mapped into the plane only
//! for the final hull.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::geometry::{convex_hull, orientation, Hull, Location, Polygon};
use crate::scalar::{QuarticScalar, Rational};
use crate::tiling::{AdjacencyKind, AdjacencyStar, Cell, TileId, TilingSpec};
use crate::vector::Vec2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("INTERNAL_ASYMMETRY: hull vertex {0} has no opposite vertex")]
    InternalAsymmetry(String),
    #[error("velocity hull is degenerate (fewer than three extreme points)")]
    DegenerateHull,
    #[error("velocity hull does not contain the origin in its interior")]
    OriginNotInterior,
}

/// `η(p)` for the lattice periods reached by bounded breadth-first search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaTable {
    pub depth: usize,
    entries: BTreeMap<Cell, u32>,
}

impl EtaTable {
    pub fn get(&self, p: Cell) -> Option<u32> {
        self.entries.get(&p).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Cell, u32)> + '_ {
        self.entries.iter().map(|(&p, &e)| (p, e))
    }

    /// Triples `(p, q)` with `η(p + q) > η(p) + η(q)`, all three present.
    pub fn triangle_violations(&self) -> Vec<(Cell, Cell)> {
        let lookup: FxHashMap<Cell, u32> = self.entries.iter().map(|(&p, &e)| (p, e)).collect();
        let keys: Vec<(Cell, u32)> = self.iter().collect();
        keys.par_iter()
            .flat_map_iter(|&(p, ep)| {
                let lookup = &lookup;
                keys.iter().filter_map(move |&(q, eq)| {
                    let s = (p.0 + q.0, p.1 + q.1);
                    match lookup.get(&s) {
                        Some(&es) if es > ep + eq => Some((p, q)),
                        _ => None,
                    }
                })
            })
            .collect()
    }

    /// `η(p) = η(−p)` for every entry whose negation is present.
    pub fn is_symmetric(&self) -> bool {
        self.iter()
            .all(|(p, e)| self.get((-p.0, -p.1)).map_or(true, |f| f == e))
    }
}

/// Breadth-first search from every `(i, 0)` to graph distance `3M − 2`;
/// `η(p)` is the least distance from some `(i, 0)` to `(i, p)`.
pub fn eta_table(star: &AdjacencyStar) -> EtaTable {
    let m = star.m();
    let depth = (3 * m).saturating_sub(2).max(1);
    let partial: Vec<BTreeMap<Cell, u32>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let dist = bfs(star, TileId::new(i, (0, 0)), depth);
            let mut out = BTreeMap::new();
            for (t, d) in dist {
                if t.proto as usize == i && t.cell != (0, 0) {
                    out.insert(t.cell, d);
                }
            }
            out
        })
        .collect();
    let mut entries: BTreeMap<Cell, u32> = BTreeMap::new();
    for map in partial {
        for (p, d) in map {
            entries
                .entry(p)
                .and_modify(|e| *e = (*e).min(d))
                .or_insert(d);
        }
    }
    EtaTable { depth, entries }
}

fn bfs(star: &AdjacencyStar, source: TileId, depth: usize) -> FxHashMap<TileId, u32> {
    let mut dist = FxHashMap::default();
    dist.insert(source, 0u32);
    let mut queue = VecDeque::from([source]);
    while let Some(t) = queue.pop_front() {
        let d = dist[&t];
        if d as usize == depth {
            continue;
        }
        for nb in star.neighbors(t) {
            dist.entry(nb).or_insert_with(|| {
                queue.push_back(nb);
                d + 1
            });
        }
    }
    dist
}

/// A velocity `(x/den, y/den)` in lattice coordinates, in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVelocity {
    pub x: i64,
    pub y: i64,
    pub den: i64,
}

impl LatticeVelocity {
    pub fn new(p: Cell, steps: u32) -> Self {
        assert!(steps > 0, "velocity needs a positive step count");
        let (x, y, den) = (p.0 as i64, p.1 as i64, steps as i64);
        let g = x.gcd(&y).gcd(&den);
        Self {
            x: x / g,
            y: y / g,
            den: den / g,
        }
    }

    pub fn to_vec2(&self, spec: &TilingSpec) -> Vec2 {
        spec.basis[0]
            .combine(self.x, &spec.basis[1], self.y)
            .div_int(self.den)
    }

    pub fn coords(&self) -> (Rational, Rational) {
        let d = BigInt::from(self.den);
        (
            Rational::new(BigInt::from(self.x), d.clone()),
            Rational::new(BigInt::from(self.y), d),
        )
    }
}

impl fmt::Display for LatticeVelocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})/{}", self.x, self.y, self.den)
    }
}

/// A deduplicated, sorted set of velocities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VelocitySet {
    pub items: Vec<LatticeVelocity>,
}

impl VelocitySet {
    fn from_iter(it: impl IntoIterator<Item = LatticeVelocity>) -> Self {
        let set: BTreeSet<LatticeVelocity> = it.into_iter().collect();
        Self {
            items: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Exact plane coordinates, sorted lexicographically.
    pub fn points(&self, spec: &TilingSpec) -> Vec<Vec2> {
        let mut pts: Vec<Vec2> = self.items.par_iter().map(|v| v.to_vec2(spec)).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Extreme points in lattice coordinates.
    pub fn extreme_points(&self) -> Vec<LatticeVelocity> {
        lattice_hull(&self.items)
    }

    /// Convex hull in the plane, counterclockwise from the lexicographically
    /// smallest vertex.
    pub fn hull(&self, spec: &TilingSpec) -> Hull {
        let pts: Vec<Vec2> = self.extreme_points().iter().map(|v| v.to_vec2(spec)).collect();
        convex_hull(&pts)
    }
}

/// `{ p/η(p) }` over the table.
pub fn velocities_from_eta(table: &EtaTable) -> VelocitySet {
    VelocitySet::from_iter(table.iter().map(|(p, e)| LatticeVelocity::new(p, e)))
}

/// `p/e` for every walk of `e ≤ M` edges from a tile `(i, 0)` to a translate
/// `(i, p)`, `p ≠ 0`.
pub fn velocities_linear(star: &AdjacencyStar) -> VelocitySet {
    let m = star.m();
    let per_source: Vec<Vec<LatticeVelocity>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let mut frontier: FxHashSet<TileId> = FxHashSet::default();
            frontier.insert(TileId::new(i, (0, 0)));
            for e in 1..=m as u32 {
                let mut next = FxHashSet::default();
                for &t in &frontier {
                    next.extend(star.neighbors(t));
                }
                for t in &next {
                    if t.proto as usize == i && t.cell != (0, 0) {
                        out.push(LatticeVelocity::new(t.cell, e));
                    }
                }
                frontier = next;
            }
            out
        })
        .collect();
    VelocitySet::from_iter(per_source.into_iter().flatten())
}

/// Extreme points of a set of lattice velocities, counterclockwise in lattice
/// coordinates, collinear points dropped.
fn lattice_hull(points: &[LatticeVelocity]) -> Vec<LatticeVelocity> {
    let key = |v: &LatticeVelocity| (v.x as i128, v.y as i128, v.den as i128);
    let mut pts: Vec<LatticeVelocity> = points.to_vec();
    pts.sort_by(|a, b| {
        let (ax, ay, ad) = key(a);
        let (bx, by, bd) = key(b);
        (ax * bd).cmp(&(bx * ad)).then((ay * bd).cmp(&(by * ad)))
    });
    pts.dedup_by(|a, b| {
        let (ax, ay, ad) = key(a);
        let (bx, by, bd) = key(b);
        ax * bd == bx * ad && ay * bd == by * ad
    });
    if pts.len() <= 2 {
        return pts;
    }
    // sign of (a − o) × (b − o), scaled by the positive product of denominators
    let turn = |o: &LatticeVelocity, a: &LatticeVelocity, b: &LatticeVelocity| -> i128 {
        let (ox, oy, od) = key(o);
        let (ax, ay, ad) = key(a);
        let (bx, by, bd) = key(b);
        let (ux, uy) = (ax * od - ox * ad, ay * od - oy * ad);
        let (vx, vy) = (bx * od - ox * bd, by * od - oy * bd);
        (ux * vy - uy * vx).signum()
    };
    let mut hull: Vec<LatticeVelocity> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let seq: Vec<&LatticeVelocity> = if pass == 0 {
            pts.iter().collect()
        } else {
            pts.iter().rev().collect()
        };
        for p in seq {
            while hull.len() >= start + 2 && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    hull
}

/// The corona limit together with the data that certifies it.
#[derive(Clone, Debug)]
pub struct CoronaLimit {
    pub tiling: String,
    pub adjacency: AdjacencyKind,
    pub m: usize,
    pub basis: [Vec2; 2],
    /// Counterclockwise, starting from the lexicographically smallest vertex.
    pub vertices: Polygon,
    /// The generating set `F = { p/η(p) }`.
    pub velocities: VelocitySet,
    /// Velocities of closing walks with at most `M` edges.
    pub linear_velocities: VelocitySet,
    pub eta: EtaTable,
}

impl CoronaLimit {
    /// True iff the hulls of both velocity enumerations have the same vertices.
    pub fn oracle_agrees(&self) -> bool {
        let a: BTreeSet<LatticeVelocity> = self.velocities.extreme_points().into_iter().collect();
        let b: BTreeSet<LatticeVelocity> = self.linear_velocities.extreme_points().into_iter().collect();
        a == b
    }

    /// Exact vertex sequence of the hull of the linear velocities.
    pub fn linear_hull(&self, spec: &TilingSpec) -> Hull {
        self.linear_velocities.hull(spec)
    }
}

/// Computes the corona limit and checks its central symmetry.
pub fn corona_limit(spec: &TilingSpec, star: &AdjacencyStar) -> Result<CoronaLimit, LimitError> {
    let eta = eta_table(star);
    let velocities = velocities_from_eta(&eta);
    let linear_velocities = velocities_linear(star);
    let vertices = match velocities.hull(spec) {
        Hull::Polygon(p) => p,
        _ => return Err(LimitError::DegenerateHull),
    };
    if let Some(v) = asymmetric_vertex(&vertices) {
        return Err(LimitError::InternalAsymmetry(v.to_string()));
    }
    if vertices.locate(&Vec2::zero()) != Location::Inside {
        return Err(LimitError::OriginNotInterior);
    }
    Ok(CoronaLimit {
        tiling: spec.name.clone(),
        adjacency: star.kind,
        m: star.m(),
        basis: spec.basis.clone(),
        vertices,
        velocities,
        linear_velocities,
        eta,
    })
}

fn asymmetric_vertex(k: &Polygon) -> Option<&Vec2> {
    let set: BTreeSet<&Vec2> = k.vertices().iter().collect();
    k.vertices().iter().find(|v| !set.contains(&-*v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckName {
    CentralSymmetry,
    ConvexCcw,
    VelocitiesContained,
    EtaTriangle,
    VertexIsPeriod,
}

impl CheckName {
    pub const ALL: [CheckName; 5] = [
        CheckName::CentralSymmetry,
        CheckName::ConvexCcw,
        CheckName::VelocitiesContained,
        CheckName::EtaTriangle,
        CheckName::VertexIsPeriod,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::CentralSymmetry => "CENTRAL_SYMMETRY",
            CheckName::ConvexCcw => "CONVEX_CCW",
            CheckName::VelocitiesContained => "VELOCITIES_CONTAINED",
            CheckName::EtaTriangle => "ETA_TRIANGLE",
            CheckName::VertexIsPeriod => "VERTEX_IS_PERIOD",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: CheckName,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub checks: Vec<CheckOutcome>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<CheckName> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn get(&self, name: CheckName) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Re-checks a limit from its vertex list and retained η table.
pub fn certify(k: &CoronaLimit) -> Certificate {
    let verts = k.vertices.vertices();
    let mut checks = Vec::new();

    let asym = asymmetric_vertex(&k.vertices);
    checks.push(CheckOutcome {
        name: CheckName::CentralSymmetry,
        passed: asym.is_none(),
        detail: match asym {
            Some(v) => format!("vertex {v} has no opposite vertex"),
            None => format!("{} vertices, closed under negation", verts.len()),
        },
    });

    let n = verts.len();
    let strictly_left = (0..n).all(|i| orientation(&verts[i], &verts[(i + 1) % n], &verts[(i + 2) % n]) > 0);
    let starts_min = verts.iter().all(|v| v >= &verts[0]);
    checks.push(CheckOutcome {
        name: CheckName::ConvexCcw,
        passed: strictly_left && starts_min,
        detail: if !strictly_left {
            "consecutive vertices do not all turn left".into()
        } else if !starts_min {
            "vertex list does not start at the lexicographically smallest vertex".into()
        } else {
            "strictly convex, counterclockwise".into()
        },
    });

    let lattice: Option<Vec<(Rational, Rational)>> = verts.iter().map(|v| to_lattice(&k.basis, v)).collect();

    let contained = match &lattice {
        Some(poly) => {
            let outside: Vec<&LatticeVelocity> = k
                .velocities
                .items
                .par_iter()
                .chain(k.linear_velocities.items.par_iter())
                .filter(|v| !inside_lattice_polygon(poly, v))
                .collect();
            match outside.first() {
                None => (true, format!("{} velocities inside", k.velocities.len() + k.linear_velocities.len())),
                Some(v) => (false, format!("{} velocities outside, e.g. {v}", outside.len())),
            }
        }
        None => (false, "a vertex is not a rational combination of the basis".into()),
    };
    checks.push(CheckOutcome {
        name: CheckName::VelocitiesContained,
        passed: contained.0,
        detail: contained.1,
    });

    let violations = k.eta.triangle_violations();
    let symmetric = k.eta.is_symmetric();
    checks.push(CheckOutcome {
        name: CheckName::EtaTriangle,
        passed: violations.is_empty() && symmetric,
        detail: match (violations.first(), symmetric) {
            (Some((p, q)), _) => format!(
                "η({:?} + {:?}) exceeds η({:?}) + η({:?}) ({} violations)",
                p,
                q,
                p,
                q,
                violations.len()
            ),
            (None, false) => "η(p) ≠ η(−p) for some period".into(),
            (None, true) => format!("{} periods, depth {}", k.eta.len(), k.eta.depth),
        },
    });

    let period_points: FxHashSet<LatticeVelocity> = k.velocities.items.iter().copied().collect();
    let vertex_periods = match &lattice {
        Some(poly) => {
            let missing = poly
                .iter()
                .zip(verts)
                .find(|((a, b), _)| match as_lattice_velocity(a, b) {
                    Some(lv) => !period_points.contains(&lv),
                    None => true,
                });
            match missing {
                None => (true, "every vertex is p/η(p) for a recorded period".to_string()),
                Some((_, v)) => (false, format!("vertex {v} is not p/η(p) for any recorded period")),
            }
        }
        None => (false, "a vertex is not a rational combination of the basis".into()),
    };
    checks.push(CheckOutcome {
        name: CheckName::VertexIsPeriod,
        passed: vertex_periods.0,
        detail: vertex_periods.1,
    });

    Certificate { checks }
}

/// Coordinates `(a, b)` with `v = a·b₀ + b·b₁`, if both are rational.
fn to_lattice(basis: &[Vec2; 2], v: &Vec2) -> Option<(Rational, Rational)> {
    let det = basis[0].cross(&basis[1]);
    let a = v.cross(&basis[1]).checked_div(&det).ok()?;
    let b = basis[0].cross(v).checked_div(&det).ok()?;
    if a.is_rational() && b.is_rational() {
        Some((a.coeffs()[0].clone(), b.coeffs()[0].clone()))
    } else {
        None
    }
}

fn as_lattice_velocity(a: &Rational, b: &Rational) -> Option<LatticeVelocity> {
    let den = a.denom().lcm(b.denom());
    let x = a * Rational::from_integer(den.clone());
    let y = b * Rational::from_integer(den.clone());
    let to_i64 = |r: &BigInt| -> Option<i64> { num_traits::ToPrimitive::to_i64(r) };
    Some(LatticeVelocity {
        x: to_i64(x.numer())?,
        y: to_i64(y.numer())?,
        den: to_i64(&den)?,
    })
}

/// Closed containment in a convex polygon given in either orientation.
fn inside_lattice_polygon(poly: &[(Rational, Rational)], v: &LatticeVelocity) -> bool {
    let (px, py) = v.coords();
    let n = poly.len();
    let mut sign = 0i8;
    for i in 0..n {
        let (ax, ay) = &poly[i];
        let (bx, by) = &poly[(i + 1) % n];
        let c = (bx - ax) * (&py - ay) - (by - ay) * (&px - ax);
        let s = if c.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if sign != 0 && s != sign {
                return false;
            }
            sign = s;
        }
    }
    true
}

/// True iff every vertex of `inner` lies in the closed polygon `outer`.
pub fn polygon_contains(outer: &Polygon, inner: &Polygon) -> bool {
    inner.vertices().iter().all(|v| outer.locate(v) != Location::Outside)
}

/// Squared lengths of the edges of a polygon.
pub fn squared_edge_lengths(p: &Polygon) -> Vec<QuarticScalar> {
    p.edges().map(|e| (&e.q - &e.p).norm_squared()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::tiling::compute_star;

    fn limit(key: &str, kind: AdjacencyKind) -> (TilingSpec, CoronaLimit) {
        let spec = catalog::get(key).unwrap().spec;
        let star = compute_star(&spec, kind);
        let k = corona_limit(&spec, &star).unwrap();
        (spec, k)
    }

    #[test]
    fn square_eta() {
        let spec = catalog::get("4.4.4.4").unwrap().spec;
        let edge = eta_table(&compute_star(&spec, AdjacencyKind::Edge));
        assert_eq!(edge.depth, 1);
        assert_eq!(edge.get((1, 0)), Some(1));
        let point = eta_table(&compute_star(&spec, AdjacencyKind::Point));
        assert_eq!(point.get((1, 1)), Some(1));
    }

    #[test]
    fn square_limits() {
        let (_, k) = limit("4.4.4.4", AdjacencyKind::Point);
        let expect: Vec<Vec2> = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
            .iter()
            .map(|&(x, y)| Vec2::from_ints(x, y))
            .collect();
        assert_eq!(k.vertices.vertices(), expect.as_slice());
        assert!(certify(&k).passed());
        let (_, k) = limit("4.4.4.4", AdjacencyKind::Edge);
        let expect: Vec<Vec2> = [(-1, 0), (0, -1), (1, 0), (0, 1)]
            .iter()
            .map(|&(x, y)| Vec2::from_ints(x, y))
            .collect();
        assert_eq!(k.vertices.vertices(), expect.as_slice());
        assert!(certify(&k).passed());
        assert!(k.oracle_agrees());
    }

    #[test]
    fn lattice_velocity_reduces() {
        assert_eq!(
            LatticeVelocity::new((2, 4), 6),
            LatticeVelocity { x: 1, y: 2, den: 3 }
        );
        assert_eq!(
            LatticeVelocity::new((-3, 0), 3),
            LatticeVelocity { x: -1, y: 0, den: 1 }
        );
    }

    #[test]
    fn corrupted_limit_fails_symmetry() {
        let (_, mut k) = limit("4.4.4.4", AdjacencyKind::Edge);
        let mut v = k.vertices.vertices().to_vec();
        v[0] = Vec2::new(QuarticScalar::frac(-1, 2), QuarticScalar::zero());
        k.vertices = Polygon::new(v).unwrap();
        let cert = certify(&k);
        assert!(cert.failed().contains(&CheckName::CentralSymmetry));
    }
}
