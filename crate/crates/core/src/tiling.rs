//! Lattice-periodic tilings: definition, validation and the adjacency star.
//!
//! A tiling is given by a lattice basis and one prototile per translation
//! class. Tile `(i, c)` is prototile `i` translated by `basis · c`. Adjacency
//! is translation invariant, so it is stored once per prototile as a finite
//! list of `(j, offset)` neighbours: the adjacency star.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{positive_overlap, segments_touch, Location, Polygon};
use crate::scalar::QuarticScalar;
use crate::vector::Vec2;

/// Integer lattice coordinates of a translation `basis[0]·c.0 + basis[1]·c.1`.
pub type Cell = (i32, i32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileId {
    pub proto: u32,
    pub cell: Cell,
}

impl TileId {
    pub fn new(proto: usize, cell: Cell) -> Self {
        Self {
            proto: proto as u32,
            cell,
        }
    }

    pub fn shifted(&self, by: Cell) -> Self {
        Self {
            proto: self.proto,
            cell: (self.cell.0 + by.0, self.cell.1 + by.1),
        }
    }
}

impl fmt::Display for TileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@({},{})", self.proto, self.cell.0, self.cell.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdjacencyKind {
    /// Closed tiles intersect.
    Point,
    /// Tiles share a boundary segment of positive length.
    Edge,
    /// Star supplied explicitly (e.g. from a tiling file) rather than derived.
    Custom,
}

impl AdjacencyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdjacencyKind::Point => "point",
            AdjacencyKind::Edge => "edge",
            AdjacencyKind::Custom => "custom",
        }
    }
}

impl fmt::Display for AdjacencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AdjacencyKind {
    type Err = TilingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "point" => Ok(AdjacencyKind::Point),
            "edge" => Ok(AdjacencyKind::Edge),
            "custom" => Ok(AdjacencyKind::Custom),
            other => Err(TilingError::UnknownAdjacency(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    AreaMismatch,
    Overlap,
    NonsimplePolygon,
    DegenerateBasis,
}

impl DiagnosticCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagnosticCode::AreaMismatch => "AREA_MISMATCH",
            DiagnosticCode::Overlap => "OVERLAP",
            DiagnosticCode::NonsimplePolygon => "NONSIMPLE_POLYGON",
            DiagnosticCode::DegenerateBasis => "DEGENERATE_BASIS",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("tiling failed validation: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("unknown adjacency kind `{0}` (expected point, edge or custom)")]
    UnknownAdjacency(String),
    #[error("adjacency star is not symmetric: ({0}) lists ({1}) but not the reverse")]
    AsymmetricStar(String, String),
    #[error("adjacency star lists a tile as its own neighbour: prototile {0}")]
    SelfLoop(usize),
    #[error("adjacency star references prototile {0}, but only {1} exist")]
    BadPrototile(usize, usize),
    #[error("adjacency graph of the tiling is not connected")]
    Disconnected,
}

fn join_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// Σ area(prototile) − |det basis| is zero.
    pub area_balanced: bool,
    pub overlap_free: bool,
    pub polygons_simple: bool,
    /// Every prototile contains a disc of this radius (approximate).
    pub inradius_bound: f64,
    /// Every prototile fits in a disc of this radius (approximate).
    pub circumradius_bound: f64,
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// A lattice-periodic tiling of the plane by polygons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingSpec {
    pub name: String,
    pub basis: [Vec2; 2],
    pub prototiles: Vec<Polygon>,
}

/// Cached per-prototile geometry used to bound candidate enumerations.
#[derive(Clone, Debug)]
struct Footprint {
    /// Approximate centre (vertex centroid) of each prototile.
    centers: Vec<(f64, f64)>,
    /// Distance from that centre to the farthest vertex, padded.
    radii: Vec<f64>,
    /// Rows of the inverse basis matrix (approximate).
    inverse: [[f64; 2]; 2],
    basis: [(f64, f64); 2],
}

impl TilingSpec {
    pub fn new(name: impl Into<String>, basis: [Vec2; 2], prototiles: Vec<Polygon>) -> Self {
        Self {
            name: name.into(),
            basis,
            prototiles,
        }
    }

    /// Number of translation classes of tiles.
    pub fn m(&self) -> usize {
        self.prototiles.len()
    }

    pub fn det(&self) -> QuarticScalar {
        self.basis[0].cross(&self.basis[1])
    }

    pub fn lattice_point(&self, cell: Cell) -> Vec2 {
        self.basis[0].combine(cell.0 as i64, &self.basis[1], cell.1 as i64)
    }

    pub fn tile_polygon(&self, id: TileId) -> Polygon {
        let proto = &self.prototiles[id.proto as usize];
        if id.cell == (0, 0) {
            return proto.clone();
        }
        proto.translate(&self.lattice_point(id.cell))
    }

    /// Scales basis and prototiles by a rational factor.
    pub fn scaled(&self, k: &crate::scalar::Rational) -> TilingSpec {
        let s = |v: &Vec2| v.scale_rational(k);
        TilingSpec {
            name: self.name.clone(),
            basis: [s(&self.basis[0]), s(&self.basis[1])],
            prototiles: self
                .prototiles
                .iter()
                .map(|p| p.map(s).expect("scaling keeps polygons valid"))
                .collect(),
        }
    }

    pub fn translated(&self, t: &Vec2) -> TilingSpec {
        TilingSpec {
            name: self.name.clone(),
            basis: self.basis.clone(),
            prototiles: self.prototiles.iter().map(|p| p.translate(t)).collect(),
        }
    }

    fn footprint(&self) -> Footprint {
        let b0 = self.basis[0].to_f64();
        let b1 = self.basis[1].to_f64();
        let det = b0.0 * b1.1 - b0.1 * b1.0;
        let inverse = [[b1.1 / det, -b1.0 / det], [-b0.1 / det, b0.0 / det]];
        let mut centers = Vec::new();
        let mut radii = Vec::new();
        for p in &self.prototiles {
            let c = p.vertex_centroid().to_f64();
            let r = p
                .vertices()
                .iter()
                .map(|v| {
                    let v = v.to_f64();
                    ((v.0 - c.0).powi(2) + (v.1 - c.1).powi(2)).sqrt()
                })
                .fold(0.0, f64::max);
            centers.push(c);
            radii.push(r * (1.0 + 1e-9) + 1e-9);
        }
        Footprint {
            centers,
            radii,
            inverse,
            basis: [b0, b1],
        }
    }

    /// Checks area balance, polygon simplicity and pairwise interior
    /// disjointness of the tiles in a 5×5 block of lattice cells.
    pub fn validate(&self) -> ValidationReport {
        let mut diagnostics = Vec::new();
        let mut polygons_simple = true;
        for (i, p) in self.prototiles.iter().enumerate() {
            if !p.is_simple() {
                polygons_simple = false;
                diagnostics.push(Diagnostic {
                    code: DiagnosticCode::NonsimplePolygon,
                    message: format!("prototile {i} is not a simple polygon"),
                });
            }
        }
        let det = self.det();
        if det.is_zero() {
            diagnostics.push(Diagnostic {
                code: DiagnosticCode::DegenerateBasis,
                message: "basis vectors are linearly dependent".into(),
            });
            return ValidationReport {
                area_balanced: false,
                overlap_free: false,
                polygons_simple,
                inradius_bound: 0.0,
                circumradius_bound: 0.0,
                diagnostics,
            };
        }
        let mut total = QuarticScalar::zero();
        for p in &self.prototiles {
            total += &p.area();
        }
        let area_balanced = total == det.abs();
        if !area_balanced {
            diagnostics.push(Diagnostic {
                code: DiagnosticCode::AreaMismatch,
                message: format!("prototile areas sum to {total}, but |det basis| = {}", det.abs()),
            });
        }

        let overlaps = if polygons_simple {
            self.overlap_audit()
        } else {
            Vec::new()
        };
        let overlap_free = overlaps.is_empty();
        for (i, j, c) in overlaps {
            diagnostics.push(Diagnostic {
                code: DiagnosticCode::Overlap,
                message: format!(
                    "prototile {i} overlaps prototile {j} translated by cell ({}, {})",
                    c.0, c.1
                ),
            });
        }

        let fp = self.footprint();
        let circumradius_bound = fp.radii.iter().cloned().fold(0.0, f64::max);
        let inradius_bound = self
            .prototiles
            .iter()
            .map(inradius_estimate)
            .fold(f64::INFINITY, f64::min);
        ValidationReport {
            area_balanced,
            overlap_free,
            polygons_simple,
            inradius_bound,
            circumradius_bound,
            diagnostics,
        }
    }

    /// Pairs `(i, j, c)` where prototile `i` and prototile `j` shifted by
    /// cell `c` have overlapping interiors; `c` ranges over the differences
    /// of a 5×5 block.
    fn overlap_audit(&self) -> Vec<(usize, usize, Cell)> {
        let fp = self.footprint();
        let m = self.m();
        let mut jobs = Vec::new();
        for i in 0..m {
            for j in i..m {
                for a in -4..=4 {
                    for b in -4..=4 {
                        if i == j && (a, b) <= (0, 0) {
                            continue;
                        }
                        jobs.push((i, j, (a, b)));
                    }
                }
            }
        }
        let mut found: Vec<(usize, usize, Cell)> = jobs
            .into_par_iter()
            .filter(|&(i, j, c)| {
                if !fp.may_touch(i, j, c) {
                    return false;
                }
                let other = self.tile_polygon(TileId::new(j, c));
                self.prototiles[i].interiors_overlap(&other)
            })
            .collect();
        found.sort();
        found
    }

    /// Validates and returns `self`, or the list of failed checks.
    pub fn validated(self) -> Result<Self, TilingError> {
        let report = self.validate();
        if report.passed() {
            Ok(self)
        } else {
            Err(TilingError::Invalid(report.diagnostics))
        }
    }

    /// All tiles whose closed polygon contains `x`.
    pub fn tiles_containing_point(&self, x: &Vec2) -> Vec<TileId> {
        let fp = self.footprint();
        let xf = x.to_f64();
        let mut out = Vec::new();
        for i in 0..self.m() {
            let rel = (xf.0 - fp.centers[i].0, xf.1 - fp.centers[i].1);
            for cell in fp.cells_near(rel, fp.radii[i]) {
                let id = TileId::new(i, cell);
                if self.tile_polygon(id).locate(x) != Location::Outside {
                    out.push(id);
                }
            }
        }
        out.sort();
        out
    }
}

impl Footprint {
    /// Conservative test: could prototile `i` and prototile `j` shifted by `c` meet?
    fn may_touch(&self, i: usize, j: usize, c: Cell) -> bool {
        let t = self.translate(c);
        let dx = self.centers[j].0 + t.0 - self.centers[i].0;
        let dy = self.centers[j].1 + t.1 - self.centers[i].1;
        let reach = self.radii[i] + self.radii[j] + 1e-6;
        dx * dx + dy * dy <= reach * reach
    }

    fn translate(&self, c: Cell) -> (f64, f64) {
        let (a, b) = (c.0 as f64, c.1 as f64);
        (
            a * self.basis[0].0 + b * self.basis[1].0,
            a * self.basis[0].1 + b * self.basis[1].1,
        )
    }

    /// Cells whose translation lies within `radius` of `v`, over-enumerated.
    fn cells_near(&self, v: (f64, f64), radius: f64) -> Vec<Cell> {
        let u = [
            self.inverse[0][0] * v.0 + self.inverse[0][1] * v.1,
            self.inverse[1][0] * v.0 + self.inverse[1][1] * v.1,
        ];
        let spread = [
            radius * self.inverse[0][0].hypot(self.inverse[0][1]) + 1.0,
            radius * self.inverse[1][0].hypot(self.inverse[1][1]) + 1.0,
        ];
        let lo0 = (u[0] - spread[0]).floor() as i32;
        let hi0 = (u[0] + spread[0]).ceil() as i32;
        let lo1 = (u[1] - spread[1]).floor() as i32;
        let hi1 = (u[1] + spread[1]).ceil() as i32;
        let mut out = Vec::new();
        for a in lo0..=hi0 {
            for b in lo1..=hi1 {
                let t = self.translate((a, b));
                let (dx, dy) = (t.0 - v.0, t.1 - v.1);
                if dx * dx + dy * dy <= (radius + 1e-6).powi(2) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Radius of the largest disc centred at an interior reference point that
/// stays in the polygon (approximate).
fn inradius_estimate(p: &Polygon) -> f64 {
    let c = p.vertex_centroid();
    let c = if p.locate(&c) == Location::Inside {
        c
    } else {
        p.interior_point()
    };
    let c = c.to_f64();
    p.edges()
        .map(|e| {
            let a = e.p.to_f64();
            let b = e.q.to_f64();
            point_segment_distance(c, a, b)
        })
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let d = (b.0 - a.0, b.1 - a.1);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = (((p.0 - a.0) * d.0 + (p.1 - a.1) * d.1) / len2).clamp(0.0, 1.0);
    let q = (a.0 + t * d.0, a.1 + t * d.1);
    (p.0 - q.0).hypot(p.1 - q.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarEntry {
    pub proto: u32,
    pub offset: Cell,
}

/// Per-prototile neighbour lists `(j, o)` meaning `(i, c) ∼ (j, c + o)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyStar {
    pub kind: AdjacencyKind,
    star: Vec<Vec<StarEntry>>,
}

impl AdjacencyStar {
    /// Builds a star from explicit neighbour lists, checking symmetry and
    /// that the lifted adjacency graph is connected.
    pub fn from_entries(kind: AdjacencyKind, star: Vec<Vec<StarEntry>>) -> Result<Self, TilingError> {
        let m = star.len();
        let mut star = star;
        for (i, list) in star.iter_mut().enumerate() {
            list.sort();
            list.dedup();
            for e in list.iter() {
                if e.proto as usize >= m {
                    return Err(TilingError::BadPrototile(e.proto as usize, m));
                }
                if e.proto as usize == i && e.offset == (0, 0) {
                    return Err(TilingError::SelfLoop(i));
                }
            }
        }
        let s = Self { kind, star };
        s.check_symmetric()?;
        if !s.lifted_graph_connected() {
            return Err(TilingError::Disconnected);
        }
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.star.len()
    }

    pub fn entries(&self, proto: usize) -> &[StarEntry] {
        &self.star[proto]
    }

    pub fn degree(&self, proto: usize) -> usize {
        self.star[proto].len()
    }

    pub fn max_degree(&self) -> usize {
        self.star.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Neighbours of `id` in the infinite tiling; never includes `id` itself.
    pub fn neighbors(&self, id: TileId) -> impl Iterator<Item = TileId> + '_ {
        self.star[id.proto as usize].iter().map(move |e| TileId {
            proto: e.proto,
            cell: (id.cell.0 + e.offset.0, id.cell.1 + e.offset.1),
        })
    }

    pub fn check_symmetric(&self) -> Result<(), TilingError> {
        for (i, list) in self.star.iter().enumerate() {
            for e in list {
                let back = StarEntry {
                    proto: i as u32,
                    offset: (-e.offset.0, -e.offset.1),
                };
                if self.star[e.proto as usize].binary_search(&back).is_err() {
                    return Err(TilingError::AsymmetricStar(
                        format!("{i}"),
                        format!("{}@({},{})", e.proto, e.offset.0, e.offset.1),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The quotient graph on prototiles is connected (offsets forgotten).
    pub fn quotient_connected(&self) -> bool {
        self.spanning_potentials().is_some()
    }

    /// BFS tree over prototiles; each prototile gets the cell offset of its
    /// tree path from prototile 0.
    fn spanning_potentials(&self) -> Option<Vec<Cell>> {
        let m = self.m();
        if m == 0 {
            return None;
        }
        let mut pot: Vec<Option<Cell>> = vec![None; m];
        pot[0] = Some((0, 0));
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let pi = pot[i].unwrap();
            for e in &self.star[i] {
                let j = e.proto as usize;
                if pot[j].is_none() {
                    pot[j] = Some((pi.0 + e.offset.0, pi.1 + e.offset.1));
                    queue.push_back(j);
                }
            }
        }
        pot.into_iter().collect()
    }

    /// The lifted graph on all tiles is connected: the quotient is connected
    /// and the cycle offsets generate the whole lattice ℤ².
    pub fn lifted_graph_connected(&self) -> bool {
        let Some(pot) = self.spanning_potentials() else {
            return false;
        };
        let mut gens: Vec<(i64, i64)> = Vec::new();
        for (i, list) in self.star.iter().enumerate() {
            for e in list {
                let j = e.proto as usize;
                let g = (
                    (pot[i].0 + e.offset.0 - pot[j].0) as i64,
                    (pot[i].1 + e.offset.1 - pot[j].1) as i64,
                );
                if g != (0, 0) {
                    gens.push(g);
                }
            }
        }
        lattice_index(&gens) == Some(1)
    }
}

/// Index in ℤ² of the lattice generated by `gens`, or `None` if it is not full rank.
fn lattice_index(gens: &[(i64, i64)]) -> Option<i64> {
    // Hermite normal form by integer row reduction: keep rows (a, b) and (0, d).
    let mut row1: (i64, i64) = (0, 0);
    let mut d: i64 = 0;
    for &(x, y) in gens {
        let (mut p, mut q) = (row1, (x, y));
        // gcd-reduce on the first coordinate
        while q.0 != 0 {
            let t = p.0 / q.0;
            p = (p.0 - t * q.0, p.1 - t * q.1);
            std::mem::swap(&mut p, &mut q);
        }
        row1 = p;
        d = num_integer::Integer::gcd(&d, &q.1);
        if row1.0 != 0 && d != 0 {
            row1.1 = row1.1.rem_euclid(d);
        }
    }
    let idx = (row1.0 * d).abs();
    (idx != 0).then_some(idx)
}

/// Derives the adjacency star of a (validated) tiling geometrically.
pub fn compute_star(spec: &TilingSpec, kind: AdjacencyKind) -> AdjacencyStar {
    assert!(kind != AdjacencyKind::Custom, "custom stars are supplied, not derived");
    let fp = spec.footprint();
    let m = spec.m();
    let star: Vec<Vec<StarEntry>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut list = Vec::new();
            let base = &spec.prototiles[i];
            for j in 0..m {
                let rel = (
                    fp.centers[j].0 - fp.centers[i].0,
                    fp.centers[j].1 - fp.centers[i].1,
                );
                let reach = fp.radii[i] + fp.radii[j];
                for c in fp.cells_near((-rel.0, -rel.1), reach) {
                    if i == j && c == (0, 0) {
                        continue;
                    }
                    let other = spec.tile_polygon(TileId::new(j, c));
                    if polygons_adjacent(base, &other, kind) {
                        list.push(StarEntry {
                            proto: j as u32,
                            offset: c,
                        });
                    }
                }
            }
            list.sort();
            list
        })
        .collect();
    AdjacencyStar { kind, star }
}

fn polygons_adjacent(a: &Polygon, b: &Polygon, kind: AdjacencyKind) -> bool {
    let eb: Vec<_> = b.edges().collect();
    a.edges().any(|e| {
        eb.iter().any(|f| match kind {
            AdjacencyKind::Point => segments_touch(&e, f),
            _ => positive_overlap(&e, f),
        })
    })
}
