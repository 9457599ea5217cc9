use std::collections::{BTreeSet, HashMap, VecDeque};

use corona_core::catalog;
use corona_core::corona::{direction_fan, gap_directions, point_star, CoronaShells};
use corona_core::io::{parse_tiling, render_tiling, FormatError};
use corona_core::limit::{corona_limit, eta_table};
use corona_core::tiling::{compute_star, AdjacencyKind, TileId, TilingError, TilingSpec};
use corona_core::{positive_overlap, QuarticScalar as Q, Rational, Vec2};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

const KINDS: [AdjacencyKind; 2] = [AdjacencyKind::Point, AdjacencyKind::Edge];

fn origin_seed(spec: &TilingSpec) -> Vec<TileId> {
    spec.tiles_containing_point(&Vec2::zero())[..1].to_vec()
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

#[test]
fn corona_recurrence_recomputed() {
    for key in ["3.3.4.3.4", "2-15", "4.8.8"] {
        let spec = catalog::get(key).unwrap().spec;
        for kind in KINDS {
            let star = compute_star(&spec, kind);
            let s = CoronaShells::grow(&spec, &star, &origin_seed(&spec), 12).unwrap();
            for n in [0, 3, 7, 11] {
                let mut expect: BTreeSet<TileId> = s.shell(n).copied().collect();
                for t in s.shell(n) {
                    expect.extend(star.neighbors(*t));
                }
                let got: BTreeSet<TileId> = s.shell(n + 1).copied().collect();
                assert_eq!(got, expect, "{key} {kind} n={n}");
            }
            let sizes: Vec<usize> = (0..=12).map(|n| s.size(n)).collect();
            assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{key} {kind}: {sizes:?}");
        }
    }
}

#[test]
fn edge_shells_inside_point_shells() {
    for e in catalog::entries() {
        let seed = origin_seed(&e.spec);
        let ps = compute_star(&e.spec, AdjacencyKind::Point);
        let es = compute_star(&e.spec, AdjacencyKind::Edge);
        let p = CoronaShells::grow(&e.spec, &ps, &seed, 8).unwrap();
        let q = CoronaShells::grow(&e.spec, &es, &seed, 8).unwrap();
        for t in q.shell(8) {
            assert!(p.contains(*t, 8), "{}: {t}", e.key);
        }
    }
}

#[test]
fn linear_growth_brackets() {
    for e in catalog::entries() {
        let pstar = point_star(&e.spec);
        for kind in KINDS {
            let star = compute_star(&e.spec, kind);
            let s = CoronaShells::grow(&e.spec, &star, &origin_seed(&e.spec), 30).unwrap();
            for n in (5..=30).step_by(5) {
                let m = s.metrics(n, &pstar).unwrap();
                assert!(m.max_radius_ratio < 6.0, "{} {kind} n={n}: {m:?}", e.key);
                assert!(m.inradius_ratio > 0.25, "{} {kind} n={n}: {m:?}", e.key);
                assert!(m.inradius_ratio <= m.max_radius_ratio);
            }
        }
    }
}

#[test]
fn square_reach_tends_to_one() {
    let spec = catalog::get("4.4.4.4").unwrap().spec;
    let star = compute_star(&spec, AdjacencyKind::Point);
    let s = CoronaShells::grow(&spec, &star, &[TileId::new(0, (0, 0))], 50).unwrap();
    let ratios: Vec<f64> = [10, 25, 50]
        .iter()
        .map(|&n| f(&s.directional_reach(&Vec2::from_ints(1, 0), n).unwrap().ratio))
        .collect();
    assert_eq!(ratios, vec![1.1, 1.04, 1.02]);
}

#[test]
fn square_support_gap() {
    let spec = catalog::get("4.4.4.4").unwrap().spec;
    let star = compute_star(&spec, AdjacencyKind::Point);
    let k = corona_limit(&spec, &star).unwrap();
    let s = CoronaShells::grow(&spec, &star, &origin_seed(&spec), 10).unwrap();
    let axes = direction_fan(4);
    assert_eq!(
        s.support_gap(10, &k.vertices, &axes).unwrap(),
        Rational::new(BigInt::from(1), BigInt::from(10))
    );
    let half = Q::sqrt2().div_int(2);
    let mut dirs = axes.clone();
    for (sx, sy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
        dirs.push(Vec2::new(half.mul_int(sx), half.mul_int(sy)));
    }
    let gap = f(&s.support_gap(10, &k.vertices, &dirs).unwrap());
    assert!((gap - 2f64.sqrt() / 10.0).abs() < 1e-12, "{gap}");
}

#[test]
fn support_gap_roughly_halves() {
    for e in catalog::entries() {
        for kind in KINDS {
            let star = compute_star(&e.spec, kind);
            let k = corona_limit(&e.spec, &star).unwrap();
            let dirs = gap_directions(&k.vertices);
            let s = CoronaShells::grow(&e.spec, &star, &origin_seed(&e.spec), 20).unwrap();
            let g10 = f(&s.support_gap(10, &k.vertices, &dirs).unwrap());
            let g20 = f(&s.support_gap(20, &k.vertices, &dirs).unwrap());
            assert!(g20 <= g10 + 2.0 / 10.0, "{} {kind}: {g10} {g20}", e.key);
        }
    }
}

#[test]
fn star_shape_samples_approach_extreme_points() {
    let e = catalog::get("3.3.4.3.4").unwrap();
    let star = compute_star(&e.spec, AdjacencyKind::Point);
    let golden = e.golden_for(AdjacencyKind::Point).unwrap();
    let s = CoronaShells::grow(&e.spec, &star, &origin_seed(&e.spec), 100).unwrap();
    let samples = s.reconstruct_star_shape(golden, 100).unwrap();
    for (sample, v) in samples.iter().zip(golden) {
        let (x, y) = v.to_f64();
        let (px, py) = (f(&sample.point.0), f(&sample.point.1));
        assert!((px - x).hypot(py - y) < 0.05, "{v}: ({px}, {py})");
    }

    let spec = catalog::get("4.4.4.4").unwrap().spec;
    for (kind, corner) in [(AdjacencyKind::Point, 2f64.sqrt()), (AdjacencyKind::Edge, 2f64.sqrt() / 2.0)] {
        let star = compute_star(&spec, kind);
        let s = CoronaShells::grow(&spec, &star, &origin_seed(&spec), 60).unwrap();
        let diag = [Vec2::from_ints(-1, -1)];
        let sample = &s.reconstruct_star_shape(&diag, 60).unwrap()[0];
        let r = f(&sample.point.0).hypot(f(&sample.point.1));
        assert!((r - corner).abs() < 0.05, "{kind}: {r}");
        assert!((f(&sample.speed) - corner).abs() < 0.05, "{kind}: {:?}", sample.speed);
    }
}

#[test]
fn scaling_scales_the_limit() {
    let lambda = Rational::new(BigInt::from(2), BigInt::from(3));
    for key in ["3.3.4.3.4", "4.8.8"] {
        let spec = catalog::get(key).unwrap().spec;
        let scaled = spec.scaled(&lambda);
        for kind in KINDS {
            let k = corona_limit(&spec, &compute_star(&spec, kind)).unwrap();
            let ks = corona_limit(&scaled, &compute_star(&scaled, kind)).unwrap();
            let want: Vec<Vec2> = k.vertices.vertices().iter().map(|v| v.scale_rational(&lambda)).collect();
            assert_eq!(ks.vertices.vertices(), want.as_slice(), "{key} {kind}");
        }
    }
}

/// Graph distances from `(i, 0)` to `(i, p)` in a geometrically rebuilt
/// edge-adjacency graph on a finite block of cells, without the star.
fn brute_force_eta(spec: &TilingSpec, radius: i32) -> HashMap<(i32, i32), u32> {
    let mut tiles = Vec::new();
    for a in -radius..=radius {
        for b in -radius..=radius {
            for i in 0..spec.m() {
                let id = TileId::new(i, (a, b));
                let poly = spec.tile_polygon(id);
                let c = poly.vertex_centroid().to_f64();
                tiles.push((id, poly, c));
            }
        }
    }
    let index: HashMap<TileId, usize> = tiles.iter().enumerate().map(|(k, t)| (t.0, k)).collect();
    let mut adj = vec![Vec::new(); tiles.len()];
    for x in 0..tiles.len() {
        for y in x + 1..tiles.len() {
            let (cx, cy) = (tiles[x].2, tiles[y].2);
            if (cx.0 - cy.0).hypot(cx.1 - cy.1) > 4.0 {
                continue;
            }
            let touching = tiles[x]
                .1
                .edges()
                .any(|e| tiles[y].1.edges().any(|g| positive_overlap(&e, &g)));
            if touching {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
    }
    let mut eta: HashMap<(i32, i32), u32> = HashMap::new();
    for i in 0..spec.m() {
        let src = index[&TileId::new(i, (0, 0))];
        let mut dist = vec![u32::MAX; tiles.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        for (k, t) in tiles.iter().enumerate() {
            if t.0.proto as usize == i && t.0.cell != (0, 0) && dist[k] != u32::MAX {
                let e = eta.entry(t.0.cell).or_insert(u32::MAX);
                *e = (*e).min(dist[k]);
            }
        }
    }
    eta
}

#[test]
fn eta_matches_geometric_bfs() {
    for key in ["6.6.6", "3.6.3.6"] {
        let spec = catalog::get(key).unwrap().spec;
        let table = eta_table(&compute_star(&spec, AdjacencyKind::Edge));
        let brute = brute_force_eta(&spec, 8);
        assert!(!table.is_empty());
        for (p, e) in table.iter() {
            assert_eq!(brute.get(&p), Some(&e), "{key} period {p:?}");
        }
        for (p, &e) in &brute {
            if e as usize <= table.depth {
                assert_eq!(table.get(*p), Some(e), "{key} period {p:?}");
            }
        }
    }
}

#[test]
fn catalog_entries_round_trip_through_the_file_format() {
    for e in catalog::entries() {
        let text = render_tiling(&e.spec, None);
        let back = parse_tiling(&text).unwrap();
        assert_eq!(back.spec, e.spec, "{}", e.key);
        assert!(back.star.is_none());
    }
    let spec = catalog::get("3.3.4.3.4").unwrap().spec;
    let star = compute_star(&spec, AdjacencyKind::Edge);
    let back = parse_tiling(&render_tiling(&spec, Some(&star))).unwrap();
    let custom = back.star.unwrap();
    assert_eq!(custom.kind, AdjacencyKind::Custom);
    for i in 0..spec.m() {
        assert_eq!(custom.entries(i), star.entries(i));
    }
}

#[test]
fn custom_star_gives_its_own_limit() {
    let text = r#"{
        "name": "square with von Neumann star",
        "basis": [[1, 0], [0, 1]],
        "prototiles": [{ "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]] }],
        "star": [[[0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]]
    }"#;
    let file = parse_tiling(text).unwrap();
    let k = corona_limit(&file.spec, file.star.as_ref().unwrap()).unwrap();
    assert_eq!(k.vertices.len(), 4);
    assert!(k.vertices.vertices().contains(&Vec2::from_ints(1, 0)));
}

#[test]
fn parser_rejects_invalid_tilings() {
    let overlapping = r#"{
        "name": "two squares per unit cell",
        "basis": [[1, 0], [0, 1]],
        "prototiles": [
            { "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]] },
            { "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]] }
        ]
    }"#;
    match parse_tiling(overlapping) {
        Err(FormatError::Tiling(TilingError::Invalid(d))) => {
            let codes: Vec<&str> = d.iter().map(|d| d.code.as_str()).collect();
            assert!(codes.contains(&"AREA_MISMATCH") && codes.contains(&"OVERLAP"), "{codes:?}");
        }
        other => panic!("expected a validation failure, got {other:?}"),
    }
    let asymmetric = r#"{
        "basis": [[1, 0], [0, 1]],
        "prototiles": [{ "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]] }],
        "star": [[[0, 1, 0], [0, 0, 1]]]
    }"#;
    assert!(matches!(
        parse_tiling(asymmetric),
        Err(FormatError::Tiling(TilingError::AsymmetricStar(..)))
    ));
    assert!(matches!(parse_tiling("{"), Err(FormatError::Json(_))));
}
