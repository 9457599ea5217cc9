//! Built-in unit-edge tilings by regular polygons.
//!
//! Polygons are written as `(sides, start, heading)`: the first vertex is an
//! integer combination `a·u(0°) + b·u(30°) + c·u(60°) + d·u(90°)` of unit
//! vectors, the first edge leaves it at `heading · 15°`, and the boundary
//! turns left by the exterior angle at each vertex. Lattice vectors use the
//! same four-term notation. All coordinates therefore land in Q(√2, √3).
//!
//! Each entry is re-validated (area balance, overlap audit, star
//! connectivity) by the test suite, which guards against transcription slips.
//! Orientations of 3².4.3.4, 2-02, 2-15 and 2-16 are fixed so that computed
//! limits coincide with the published vertex tables without any rotation.

use thiserror::Error;

use crate::geometry::Polygon;
use crate::scalar::QuarticScalar as Q;
use crate::tiling::{AdjacencyKind, TilingSpec};
use crate::vector::Vec2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("UNKNOWN_TILING: no catalog entry named `{0}`")]
    UnknownTiling(String),
}

/// Golden corona-limit vertices for one adjacency kind.
#[derive(Clone, Debug)]
pub struct Golden {
    pub adjacency: AdjacencyKind,
    pub vertices: Vec<Vec2>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub key: &'static str,
    /// Vertex configuration in exponent notation, e.g. `3^2.4.3.4`.
    pub notation: &'static str,
    pub aliases: &'static [&'static str],
    pub archimedean: bool,
    pub spec: TilingSpec,
    pub golden: Vec<Golden>,
}

impl CatalogEntry {
    pub fn m(&self) -> usize {
        self.spec.m()
    }

    pub fn golden_for(&self, kind: AdjacencyKind) -> Option<&[Vec2]> {
        self.golden
            .iter()
            .find(|g| g.adjacency == kind)
            .map(|g| g.vertices.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogListing {
    pub key: &'static str,
    pub notation: &'static str,
    pub m: usize,
    pub archimedean: bool,
    pub golden_point: bool,
    pub golden_edge: bool,
}

/// Four-term lattice/offset notation: `a·u(0°) + b·u(30°) + c·u(60°) + d·u(90°)`.
type Z4 = [i64; 4];

struct Recipe {
    key: &'static str,
    notation: &'static str,
    aliases: &'static [&'static str],
    archimedean: bool,
    basis: [Z4; 2],
    tiles: &'static [(usize, Z4, i64)],
    /// Move the centre of prototile 0 to the origin.
    center_first: bool,
}

const KEYS: [&str; 14] = [
    "3.3.3.3.3.3",
    "4.4.4.4",
    "6.6.6",
    "3.3.3.3.6",
    "3.3.3.4.4",
    "3.3.4.3.4",
    "3.4.6.4",
    "3.6.3.6",
    "3.12.12",
    "4.6.12",
    "4.8.8",
    "2-02",
    "2-15",
    "2-16",
];

fn recipe(key: &str) -> Option<Recipe> {
    let r = match key {
        // Two triangles per rhombic cell.
        "3.3.3.3.3.3" => Recipe {
            key: "3.3.3.3.3.3",
            notation: "3^6",
            aliases: &["3^6"],
            archimedean: true,
            basis: [[1, 0, 0, 0], [0, 0, 1, 0]],
            tiles: &[(3, [0, 0, 0, 0], 0), (3, [0, 0, 0, 0], 4)],
            center_first: true,
        },
        // Unit square [0,1]² kept at the origin corner.
        "4.4.4.4" => Recipe {
            key: "4.4.4.4",
            notation: "4^4",
            aliases: &["4^4"],
            archimedean: true,
            basis: [[1, 0, 0, 0], [0, 0, 0, 1]],
            tiles: &[(4, [0, 0, 0, 0], 0)],
            center_first: false,
        },
        // Hexagon with vertices (±1, 0), centred on the origin; the neighbouring
        // centres sit at (3/2, ±√3/2).
        "6.6.6" => Recipe {
            key: "6.6.6",
            notation: "6^3",
            aliases: &["6^3"],
            archimedean: true,
            basis: [[1, 0, 1, 0], [2, 0, -1, 0]],
            tiles: &[(6, [1, 0, 0, 0], 8)],
            center_first: false,
        },
        // Hexagon, its six edge triangles, and two free triangles touching
        // hexagons only at corners. Hexagon centres are √7 apart.
        "3.3.3.3.6" => Recipe {
            key: "3.3.3.3.6",
            notation: "3^4.6",
            aliases: &["3^4.6"],
            archimedean: true,
            basis: [[2, 0, 1, 0], [-1, 0, 3, 0]],
            tiles: &[
                (6, [0, 0, 0, 0], 0),
                (3, [0, 0, 0, 0], 8),
                (3, [0, 0, 0, 0], 12),
                (3, [0, 0, 0, 0], 16),
                (3, [0, 0, 0, 0], 20),
                (3, [1, 0, 1, 0], 4),
                (3, [1, 0, 1, 0], 16),
                (3, [0, 0, 2, 0], 0),
                (3, [0, 0, 3, 0], 20),
            ],
            center_first: true,
        },
        // A row of squares under a row of triangles.
        "3.3.3.4.4" => Recipe {
            key: "3.3.3.4.4",
            notation: "3^3.4^2",
            aliases: &["3^3.4^2"],
            archimedean: true,
            basis: [[1, 0, 0, 0], [0, 0, 1, 1]],
            tiles: &[(4, [0, 0, 0, 0], 0), (3, [0, 0, 0, 0], 12), (3, [0, 0, 0, 0], 16)],
            center_first: true,
        },
        // Snub square: two squares tilted by 30° against each other and four
        // triangles; the square lattice of side (√6+√2)/2 has generators at
        // -15° and 75°.
        "3.3.4.3.4" => Recipe {
            key: "3.3.4.3.4",
            notation: "3^2.4.3.4",
            aliases: &["3^2.4.3.4", "1-09"],
            archimedean: true,
            basis: [[1, 1, 0, -1], [0, 0, 1, 1]],
            tiles: &[
                (4, [0, 0, 0, 0], 0),
                (3, [0, 0, 0, 0], 6),
                (4, [0, 0, 0, 0], 10),
                (3, [0, 0, 0, 0], 16),
                (3, [0, 0, 0, 0], 20),
                (3, [1, 0, 0, 0], 2),
            ],
            center_first: true,
        },
        // Hexagon, squares on three alternate edges... and their partners; the
        // hexagon centres lie 1+√3 apart along edge normals.
        "3.4.6.4" => Recipe {
            key: "3.4.6.4",
            notation: "3.4.6.4",
            aliases: &[],
            archimedean: true,
            basis: [[1, 1, 1, 0], [-1, 0, 2, 1]],
            tiles: &[
                (6, [0, 0, 0, 0], 0),
                (4, [0, 0, 0, 0], 8),
                (3, [0, 0, 0, 0], 14),
                (4, [0, 0, 0, 0], 18),
                (3, [0, 0, 2, 0], 2),
                (4, [0, 0, 2, 1], 22),
            ],
            center_first: true,
        },
        // Hexagons meeting at corners, two triangles per cell.
        "3.6.3.6" => Recipe {
            key: "3.6.3.6",
            notation: "(3.6)^2",
            aliases: &["(3.6)^2"],
            archimedean: true,
            basis: [[2, 0, 0, 0], [0, 0, 2, 0]],
            tiles: &[(6, [0, 0, 0, 0], 0), (3, [0, 0, 0, 0], 8), (3, [0, 0, 0, 0], 20)],
            center_first: true,
        },
        // Dodecagons sharing edges, triangles in the three-fold holes.
        "3.12.12" => Recipe {
            key: "3.12.12",
            notation: "3.12^2",
            aliases: &["3.12^2"],
            archimedean: true,
            basis: [[2, 2, 0, -1], [0, 1, 2, 1]],
            tiles: &[(12, [0, 0, 0, 0], 0), (3, [0, 0, 0, 0], 20), (3, [1, 1, 0, 0], 0)],
            center_first: true,
        },
        // Dodecagon, two hexagons, three squares per cell.
        "4.6.12" => Recipe {
            key: "4.6.12",
            notation: "4.6.12",
            aliases: &[],
            archimedean: true,
            basis: [[3, 2, 0, -1], [0, 1, 3, 1]],
            tiles: &[
                (12, [0, 0, 0, 0], 0),
                (4, [0, 0, 0, 0], 10),
                (6, [0, 0, 0, 0], 16),
                (4, [1, 0, 0, 0], 20),
                (4, [1, 1, 1, 1], 18),
                (6, [1, 1, 0, 0], 20),
            ],
            center_first: true,
        },
        // Octagon with a square on its lower-right diagonal edge; square
        // lattice of side 1+√2. Needs √2, hence the quartic field.
        "4.8.8" => Recipe {
            key: "4.8.8",
            notation: "4.8^2",
            aliases: &["4.8^2"],
            archimedean: true,
            basis: [[0; 4], [0; 4]],
            tiles: &[],
            center_first: true,
        },
        // Filled dodecagons (hexagon + 6 squares + 6 triangles) sharing
        // triangle edges along the hexagon's vertex directions; one triangle
        // fills each three-fold gap.
        "2-02" => Recipe {
            key: "2-02",
            notation: "3.4.6.4;3^2.4.3.4",
            aliases: &[],
            archimedean: false,
            basis: [[2, 2, 0, -1], [0, 1, 2, 1]],
            tiles: &[
                (6, [0, 0, 0, 0], 0),
                (4, [0, 0, 0, 0], 8),
                (3, [0, 0, 0, 0], 14),
                (4, [0, 0, 0, 0], 18),
                (3, [1, 0, 0, 0], 18),
                (4, [1, 0, 0, 0], 22),
                (3, [1, 0, 1, 0], 22),
                (4, [1, 0, 1, 0], 2),
                (3, [1, 1, 1, -1], 2),
                (3, [1, 1, 1, -1], 16),
                (4, [1, 2, 1, -1], 4),
                (3, [1, 1, 1, 0], 4),
                (3, [0, 1, 2, 0], 10),
                (3, [1, 1, 2, 0], 22),
                (4, [0, 0, 2, 0], 6),
            ],
            center_first: true,
        },
        // Four-fold variant: centred square lattice with generators
        // ((3+√3)/2)(1, ±1), six squares and twelve triangles per cell.
        "2-15" => Recipe {
            key: "2-15",
            notation: "3^3.4^2;3^2.4.3.4",
            aliases: &[],
            archimedean: false,
            basis: [[1, 1, 1, 1], [2, 1, -1, -2]],
            tiles: &[
                (4, [0, 0, 0, 0], 0),
                (3, [0, 0, 0, 0], 6),
                (3, [0, 0, 0, 0], 10),
                (3, [0, 0, 0, 0], 14),
                (4, [0, 0, 0, 0], 18),
                (3, [1, 0, 0, 0], 18),
                (3, [1, 0, 0, 0], 22),
                (3, [1, 0, 0, 0], 2),
                (4, [1, 0, 0, 1], 22),
                (3, [1, 0, 0, 1], 4),
                (3, [1, 0, 0, 1], 8),
                (4, [3, 1, 0, -1], 6),
                (3, [1, 1, 1, 0], 16),
                (3, [1, 1, 1, 0], 20),
                (4, [1, 1, 0, 0], 18),
                (3, [2, 1, 0, -1], 12),
                (3, [2, 1, 0, 0], 0),
                (4, [2, 1, -1, -1], 8),
            ],
            center_first: true,
        },
        // Two-fold variant: snub-square strips joined along square pairs;
        // four squares and eight triangles per cell, mirror lines at -15°/75°.
        "2-16" => Recipe {
            key: "2-16",
            notation: "3^3.4^2;3^2.4.3.4",
            aliases: &[],
            archimedean: false,
            basis: [[2, 2, 1, -1], [0, 0, 1, 1]],
            tiles: &[
                (4, [0, 0, 0, 0], 0),
                (3, [0, 0, 0, 0], 6),
                (4, [0, 0, 0, 0], 10),
                (3, [0, 0, 0, 0], 16),
                (3, [0, 0, 0, 0], 20),
                (3, [2, 2, 1, 0], 10),
                (4, [1, 0, 0, 1], 18),
                (3, [1, 0, 0, 1], 0),
                (3, [1, 0, 1, 1], 20),
                (3, [2, 1, 1, 0], 6),
                (4, [2, 1, 1, 0], 10),
                (3, [2, 1, 1, 1], 10),
            ],
            center_first: true,
        },
        _ => return None,
    };
    Some(r)
}

fn z4(c: Z4) -> Vec2 {
    let mut v = Vec2::zero();
    for (k, &n) in c.iter().enumerate() {
        if n != 0 {
            v = &v + &Vec2::unit_15(2 * k as i64).mul_int(n);
        }
    }
    v
}

/// Regular unit-edge polygon: first vertex `start`, first edge heading
/// `heading·15°`, counterclockwise.
pub fn regular_polygon(start: Vec2, heading: i64, sides: usize) -> Polygon {
    assert!(24 % sides == 0 || sides == 8, "unsupported polygon");
    let turn = 24 / sides as i64;
    let mut vertices = Vec::with_capacity(sides);
    let mut v = start;
    for k in 0..sides as i64 {
        vertices.push(v.clone());
        v = &v + &Vec2::unit_15(heading + k * turn);
    }
    Polygon::new(vertices).expect("regular polygon is nondegenerate")
}

fn octagon_square() -> TilingSpec {
    let side = Q::one() + Q::sqrt2();
    let octagon = regular_polygon(Vec2::zero(), 0, 8);
    let corner = octagon.vertices()[2].clone();
    let square = regular_polygon(corner, 15, 4);
    TilingSpec::new(
        "4.8.8",
        [
            Vec2::new(side.clone(), Q::zero()),
            Vec2::new(Q::zero(), side),
        ],
        vec![octagon, square],
    )
}

fn build(r: &Recipe) -> TilingSpec {
    let spec = if r.key == "4.8.8" {
        octagon_square()
    } else {
        TilingSpec::new(
            r.key,
            [z4(r.basis[0]), z4(r.basis[1])],
            r.tiles
                .iter()
                .map(|&(n, start, heading)| regular_polygon(z4(start), heading, n))
                .collect(),
        )
    };
    if r.center_first {
        let c = spec.prototiles[0].vertex_centroid();
        spec.translated(&-c)
    } else {
        spec
    }
}

/// `(a + b√3)/d`
fn s3(a: i64, b: i64, d: i64) -> Q {
    Q::from_ints(a, 0, b, 0).div_int(d)
}

fn pm(points: Vec<(Q, Q)>) -> Vec<Vec2> {
    let mut out = Vec::new();
    for (x, y) in points {
        let v = Vec2::new(x, y);
        out.push(-&v);
        out.push(v);
    }
    out
}

fn golden(key: &str) -> Vec<Golden> {
    use AdjacencyKind::{Edge, Point};
    let g = |adjacency, vertices| Golden { adjacency, vertices };
    match key {
        "4.4.4.4" => vec![
            g(Point, pm(vec![(s3(1, 0, 1), s3(1, 0, 1)), (s3(-1, 0, 1), s3(1, 0, 1))])),
            g(Edge, pm(vec![(s3(1, 0, 1), s3(0, 0, 1)), (s3(0, 0, 1), s3(1, 0, 1))])),
        ],
        "3.3.4.3.4" => vec![
            g(Point, pm(vec![(s3(3, 1, 4), s3(1, 1, 4)), (s3(-1, -1, 4), s3(3, 1, 4))])),
            g(
                Edge,
                pm(vec![
                    (s3(3, 1, 8), s3(1, 1, 8)),
                    (s3(1, 0, 6), s3(2, 1, 6)),
                    (s3(-1, -1, 8), s3(3, 1, 8)),
                    (s3(-2, -1, 6), s3(1, 0, 6)),
                ]),
            ),
        ],
        "2-15" => vec![
            g(
                Point,
                pm(vec![
                    (s3(3, 1, 4), s3(0, 0, 1)),
                    (s3(3, 1, 6), s3(3, 1, 6)),
                    (s3(0, 0, 1), s3(3, 1, 4)),
                    (s3(-3, -1, 6), s3(3, 1, 6)),
                ]),
            ),
            g(
                Edge,
                pm(vec![
                    (s3(3, 1, 7), s3(0, 0, 1)),
                    (s3(9, 3, 22), s3(3, 1, 22)),
                    (s3(3, 1, 10), s3(3, 1, 10)),
                    (s3(3, 1, 22), s3(9, 3, 22)),
                    (s3(0, 0, 1), s3(3, 1, 7)),
                    (s3(-3, -1, 22), s3(9, 3, 22)),
                    (s3(-3, -1, 10), s3(3, 1, 10)),
                    (s3(-9, -3, 22), s3(3, 1, 22)),
                ]),
            ),
        ],
        "2-16" => vec![
            g(
                Point,
                pm(vec![
                    (s3(5, 2, 8), s3(0, 1, 8)),
                    (s3(7, 2, 12), s3(4, 3, 12)),
                    (s3(-1, -2, 12), s3(8, 3, 12)),
                    (s3(-3, -2, 8), s3(4, 1, 8)),
                ]),
            ),
            g(
                Edge,
                pm(vec![
                    (s3(5, 2, 12), s3(0, 1, 12)),
                    (s3(3, 1, 8), s3(1, 1, 8)),
                    (s3(1, 0, 6), s3(2, 1, 6)),
                    (s3(-1, -1, 8), s3(3, 1, 8)),
                    (s3(-3, -2, 12), s3(4, 1, 12)),
                ]),
            ),
        ],
        "2-02" => vec![g(
            Point,
            pm(vec![
                (s3(2, 1, 3), s3(0, 0, 1)),
                (s3(6, 3, 10), s3(3, 2, 10)),
                (s3(2, 1, 6), s3(3, 2, 6)),
                (s3(0, 0, 1), s3(3, 2, 5)),
                (s3(-2, -1, 6), s3(3, 2, 6)),
                (s3(-6, -3, 10), s3(3, 2, 10)),
            ]),
        )],
        _ => Vec::new(),
    }
}

fn resolve(key: &str) -> Option<Recipe> {
    if let Some(r) = recipe(key) {
        return Some(r);
    }
    KEYS.iter()
        .filter_map(|k| recipe(k))
        .find(|r| r.aliases.contains(&key))
}

/// Looks up a catalog tiling by key or alias.
pub fn get(key: &str) -> Result<CatalogEntry, CatalogError> {
    let r = resolve(key).ok_or_else(|| CatalogError::UnknownTiling(key.to_string()))?;
    Ok(CatalogEntry {
        key: r.key,
        notation: r.notation,
        aliases: r.aliases,
        archimedean: r.archimedean,
        spec: build(&r),
        golden: golden(r.key),
    })
}

/// All catalog keys in a stable order: the eleven Archimedean tilings, then
/// the 2-uniform ones.
pub fn keys() -> &'static [&'static str] {
    &KEYS
}

pub fn list() -> Vec<CatalogListing> {
    KEYS.iter()
        .map(|k| {
            let r = recipe(k).expect("listed key has a recipe");
            let gold = golden(k);
            let m = if r.key == "4.8.8" { 2 } else { r.tiles.len() };
            CatalogListing {
                key: r.key,
                notation: r.notation,
                m,
                archimedean: r.archimedean,
                golden_point: gold.iter().any(|g| g.adjacency == AdjacencyKind::Point),
                golden_edge: gold.iter().any(|g| g.adjacency == AdjacencyKind::Edge),
            }
        })
        .collect()
}

pub fn entries() -> impl Iterator<Item = CatalogEntry> {
    KEYS.iter().map(|k| get(k).expect("listed key resolves"))
}
