//! Corona growth on the lifted tile graph, directional reach and support
//! comparison against a convex limit.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::geometry::{Location, Polygon};
use crate::scalar::{QuarticScalar, Rational};
use crate::tiling::{compute_star, point_segment_distance, AdjacencyKind, AdjacencyStar, TileId, TilingSpec};
use crate::vector::Vec2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoronaError {
    #[error("seed patch is empty")]
    EmptySeed,
    #[error("seed tile references prototile {0}, but only {1} exist")]
    BadSeedTile(usize, usize),
    #[error("no seed tile contains the origin; translate the tiling or choose another seed")]
    OriginOutsideSeed,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("shell {0} requested, but only {1} steps were grown")]
    ShellNotGrown(usize, usize),
}

/// Nested coronas `P⁽⁰⁾ ⊆ P⁽¹⁾ ⊆ …` of a seed patch.
///
/// Tiles are stored once, in the layer where they first appear; shell `n` is
/// the union of layers `0..=n`.
#[derive(Clone, Debug)]
pub struct CoronaShells<'a> {
    spec: &'a TilingSpec,
    star: &'a AdjacencyStar,
    layers: Vec<Vec<TileId>>,
    first: FxHashMap<TileId, u32>,
}

/// Empirical reach `σ(n) = max{t : t·v ∈ supp P⁽ⁿ⁾}` along a ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeedEstimate {
    pub direction: Vec2,
    pub n: usize,
    pub sigma: QuarticScalar,
    /// Approximation of `σ(n)/n`, within `error` of the exact value.
    pub ratio: Rational,
    pub error: Rational,
}

/// One boundary sample of the reconstructed star shape: the farthest point
/// `(σ(n)/n)·v` reached along the ray through `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSample {
    pub direction: Vec2,
    pub sigma: QuarticScalar,
    pub n: usize,
    /// Rational approximation of `(σ(n)/n)·v`.
    pub point: (Rational, Rational),
    /// Approximate speed `(σ(n)/n)·‖v‖` in the unit direction of `v`.
    pub speed: Rational,
}

/// Size and radius brackets of one shell, used to witness linear growth.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthMetrics {
    pub n: usize,
    pub size: usize,
    /// Largest vertex distance from the origin, divided by `n`.
    pub max_radius_ratio: f64,
    /// Radius of the largest origin-centred disc inside the shell, divided by `n`.
    pub inradius_ratio: f64,
}

impl<'a> CoronaShells<'a> {
    /// Grows `n` coronas around `seed` by frontier expansion.
    pub fn grow(
        spec: &'a TilingSpec,
        star: &'a AdjacencyStar,
        seed: &[TileId],
        n: usize,
    ) -> Result<Self, CoronaError> {
        if seed.is_empty() {
            return Err(CoronaError::EmptySeed);
        }
        let m = star.m();
        let mut first = FxHashMap::default();
        let mut layer0 = Vec::new();
        for &t in seed {
            if t.proto as usize >= m {
                return Err(CoronaError::BadSeedTile(t.proto as usize, m));
            }
            if first.insert(t, 0).is_none() {
                layer0.push(t);
            }
        }
        layer0.sort();
        let mut shells = Self {
            spec,
            star,
            layers: vec![layer0],
            first,
        };
        shells.extend_to(n);
        Ok(shells)
    }

    /// Grows further until `n` coronas are available.
    pub fn extend_to(&mut self, n: usize) {
        while self.steps() < n {
            let step = self.layers.len() as u32;
            let mut next = Vec::new();
            for &t in self.layers.last().expect("seed layer") {
                for nb in self.star.neighbors(t) {
                    if let std::collections::hash_map::Entry::Vacant(e) = self.first.entry(nb) {
                        e.insert(step);
                        next.push(nb);
                    }
                }
            }
            next.sort();
            self.layers.push(next);
        }
    }

    pub fn spec(&self) -> &'a TilingSpec {
        self.spec
    }

    pub fn star(&self) -> &'a AdjacencyStar {
        self.star
    }

    /// Number of coronas grown.
    pub fn steps(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn seed(&self) -> &[TileId] {
        &self.layers[0]
    }

    /// Tiles added at step `n` (the seed for `n = 0`).
    pub fn layer(&self, n: usize) -> &[TileId] {
        &self.layers[n]
    }

    /// Tiles of `P⁽ⁿ⁾`, layer by layer.
    pub fn shell(&self, n: usize) -> impl Iterator<Item = &TileId> + '_ {
        self.layers[..=n].iter().flatten()
    }

    pub fn size(&self, n: usize) -> usize {
        self.layers[..=n].iter().map(Vec::len).sum()
    }

    /// Index of the first shell containing `t`, if grown that far.
    pub fn first_shell(&self, t: TileId) -> Option<usize> {
        self.first.get(&t).map(|&s| s as usize)
    }

    pub fn contains(&self, t: TileId, n: usize) -> bool {
        self.first_shell(t).is_some_and(|s| s <= n)
    }

    fn check_grown(&self, n: usize) -> Result<(), CoronaError> {
        if n > self.steps() {
            Err(CoronaError::ShellNotGrown(n, self.steps()))
        } else {
            Ok(())
        }
    }

    fn check_origin(&self) -> Result<(), CoronaError> {
        let origin = Vec2::zero();
        let hit = self
            .seed()
            .iter()
            .any(|&t| self.spec.tile_polygon(t).locate(&origin) != Location::Outside);
        if hit {
            Ok(())
        } else {
            Err(CoronaError::OriginOutsideSeed)
        }
    }

    /// Exact `σ(n)` along `v`, with `σ(n)/n` approximated to within 2⁻⁴⁸.
    pub fn directional_reach(&self, v: &Vec2, n: usize) -> Result<SpeedEstimate, CoronaError> {
        if v.is_zero() {
            return Err(CoronaError::ZeroDirection);
        }
        self.check_grown(n)?;
        self.check_origin()?;
        let sigma = self.sigma(v, n);
        let error = Rational::new(BigInt::one(), BigInt::one() << 48);
        let ratio = if n == 0 {
            sigma.approximate(&error)
        } else {
            sigma.approximate(&(&error * Rational::from_integer(BigInt::from(n)))) / Rational::from_integer(BigInt::from(n))
        };
        Ok(SpeedEstimate {
            direction: v.clone(),
            n,
            sigma,
            ratio,
            error,
        })
    }

    /// Largest exact ray parameter over all tiles of `P⁽ⁿ⁾`. Tiles are
    /// screened in floating point and evaluated exactly in decreasing order of
    /// their approximate upper bound.
    fn sigma(&self, v: &Vec2, n: usize) -> QuarticScalar {
        let geo = ApproxGeometry::new(self.spec);
        let vf = v.to_f64();
        let len = vf.0.hypot(vf.1);
        let dir = (vf.0 / len, vf.1 / len);
        let slack = 1e-9 * (1.0 + n as f64) * geo.scale;
        let mut candidates: Vec<(f64, TileId)> = Vec::new();
        for &t in self.shell(n) {
            let (mut lo, mut hi, mut reach) = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
            for p in geo.vertices(t) {
                let side = dir.0 * p.1 - dir.1 * p.0;
                lo = lo.min(side);
                hi = hi.max(side);
                reach = reach.max(dir.0 * p.0 + dir.1 * p.1);
            }
            if lo <= slack && hi >= -slack && reach >= -slack {
                candidates.push((reach / len, t));
            }
        }
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut best: Option<(QuarticScalar, f64)> = None;
        for (bound, t) in candidates {
            if let Some((_, bf)) = &best {
                if bound < bf - slack {
                    break;
                }
            }
            if let Some(s) = self.spec.tile_polygon(t).ray_exit(v) {
                if best.as_ref().map_or(true, |(b, _)| &s > b) {
                    let f = s.to_f64();
                    best = Some((s, f));
                }
            }
        }
        best.map(|(s, _)| s).unwrap_or_else(QuarticScalar::zero)
    }

    /// Samples `(σ(n)/n)·v` for each direction.
    pub fn reconstruct_star_shape(&self, directions: &[Vec2], n: usize) -> Result<Vec<StarSample>, CoronaError> {
        self.check_grown(n)?;
        self.check_origin()?;
        let eps = Rational::new(BigInt::one(), BigInt::one() << 56);
        directions
            .iter()
            .map(|v| {
                if v.is_zero() {
                    return Err(CoronaError::ZeroDirection);
                }
                let sigma = self.sigma(v, n);
                let scaled = sigma.div_int(n.max(1) as i64);
                let reach = v.scale(&scaled);
                let point = (reach.x.approximate(&eps), reach.y.approximate(&eps));
                let speed = scaled.approximate(&eps) * approx_norm(v);
                Ok(StarSample {
                    direction: v.clone(),
                    sigma,
                    n,
                    point,
                    speed,
                })
            })
            .collect()
    }

    /// Exact support values `h(u) = max ⟨x, u⟩` over the vertices of all tiles
    /// of `P⁽ⁿ⁾`, one per direction.
    pub fn support(&self, n: usize, directions: &[Vec2]) -> Result<Vec<QuarticScalar>, CoronaError> {
        self.check_grown(n)?;
        let m = self.spec.m();
        let mut cells: Vec<Vec<(i64, i64)>> = vec![Vec::new(); m];
        for t in self.shell(n) {
            cells[t.proto as usize].push((t.cell.0 as i64, t.cell.1 as i64));
        }
        let hulls: Vec<Vec<(i64, i64)>> = cells.into_iter().map(integer_hull).collect();
        Ok(directions
            .iter()
            .map(|u| {
                let b0 = self.spec.basis[0].dot(u);
                let b1 = self.spec.basis[1].dot(u);
                let (f0, f1) = (b0.to_f64(), b1.to_f64());
                let scale = f0.abs() + f1.abs() + 1.0;
                let mut best: Option<QuarticScalar> = None;
                for (i, hull) in hulls.iter().enumerate() {
                    if hull.is_empty() {
                        continue;
                    }
                    let cell_part = exact_max(hull, |&(a, b)| a as f64 * f0 + b as f64 * f1, scale, |&(a, b)| {
                        &b0.mul_int(a) + &b1.mul_int(b)
                    });
                    let proto = &self.spec.prototiles[i];
                    let uf = u.to_f64();
                    let vertex_part = exact_max(
                        proto.vertices(),
                        |w| {
                            let w = w.to_f64();
                            w.0 * uf.0 + w.1 * uf.1
                        },
                        scale,
                        |w| w.dot(u),
                    );
                    let h = cell_part + vertex_part;
                    if best.as_ref().map_or(true, |b| &h > b) {
                        best = Some(h);
                    }
                }
                best.expect("shell is nonempty")
            })
            .collect())
    }

    /// `max_u |h_{P⁽ⁿ⁾}(u)/n − h_K(u)|` over the given directions, approximated
    /// to within 2⁻⁴⁰.
    pub fn support_gap(&self, n: usize, limit: &Polygon, directions: &[Vec2]) -> Result<Rational, CoronaError> {
        let hs = self.support(n, directions)?;
        let nn = n.max(1) as i64;
        let eps = Rational::new(BigInt::one(), BigInt::one() << 40);
        Ok(hs
            .iter()
            .zip(directions)
            .map(|(h, u)| (&h.div_int(nn) - &polygon_support(limit, u)).abs().approximate(&eps))
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// `max_u |h_A(u) − h_B(u)|/n` between two growths sharing a tiling.
    pub fn mutual_support_gap(&self, other: &CoronaShells<'_>, n: usize, directions: &[Vec2]) -> Result<Rational, CoronaError> {
        let ha = self.support(n, directions)?;
        let hb = other.support(n, directions)?;
        let nn = n.max(1) as i64;
        let eps = Rational::new(BigInt::one(), BigInt::one() << 40);
        Ok(ha
            .iter()
            .zip(&hb)
            .map(|(a, b)| (a - b).abs().div_int(nn).approximate(&eps))
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// Radius brackets of `P⁽ⁿ⁾`, in floating point.
    ///
    /// The inradius is the distance from the origin to the nearest tile not in
    /// the shell; every such tile touching the shell is a point-neighbour of
    /// the outermost layer, so `point_star` must be the point adjacency star.
    pub fn metrics(&self, n: usize, point_star: &AdjacencyStar) -> Result<GrowthMetrics, CoronaError> {
        self.check_grown(n)?;
        let geo = ApproxGeometry::new(self.spec);
        let mut max_r: f64 = 0.0;
        for &t in self.shell(n) {
            for p in geo.vertices(t) {
                max_r = max_r.max(p.0.hypot(p.1));
            }
        }
        let mut inner = f64::INFINITY;
        let mut seen = rustc_hash::FxHashSet::default();
        for &t in self.layers[n].iter() {
            for nb in point_star.neighbors(t) {
                if self.contains(nb, n) || !seen.insert(nb) {
                    continue;
                }
                inner = inner.min(geo.distance_from_origin(nb));
            }
        }
        let nn = n.max(1) as f64;
        Ok(GrowthMetrics {
            n,
            size: self.size(n),
            max_radius_ratio: max_r / nn,
            inradius_ratio: inner / nn,
        })
    }
}

/// Convenience: the point star, for [`CoronaShells::metrics`].
pub fn point_star(spec: &TilingSpec) -> AdjacencyStar {
    compute_star(spec, AdjacencyKind::Point)
}

/// Floating-point copies of the lattice basis and prototile vertices.
struct ApproxGeometry {
    basis: [(f64, f64); 2],
    protos: Vec<Vec<(f64, f64)>>,
    scale: f64,
}

impl ApproxGeometry {
    fn new(spec: &TilingSpec) -> Self {
        let basis = [spec.basis[0].to_f64(), spec.basis[1].to_f64()];
        let protos: Vec<Vec<(f64, f64)>> = spec
            .prototiles
            .iter()
            .map(|p| p.vertices().iter().map(Vec2::to_f64).collect())
            .collect();
        let scale = basis.iter().map(|b| b.0.hypot(b.1)).fold(1.0, f64::max);
        Self { basis, protos, scale }
    }

    fn vertices(&self, t: TileId) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (a, b) = (t.cell.0 as f64, t.cell.1 as f64);
        let o = (
            a * self.basis[0].0 + b * self.basis[1].0,
            a * self.basis[0].1 + b * self.basis[1].1,
        );
        self.protos[t.proto as usize].iter().map(move |p| (p.0 + o.0, p.1 + o.1))
    }

    fn distance_from_origin(&self, t: TileId) -> f64 {
        let vs: Vec<(f64, f64)> = self.vertices(t).collect();
        let mut inside = true;
        let mut d = f64::INFINITY;
        for k in 0..vs.len() {
            let (a, b) = (vs[k], vs[(k + 1) % vs.len()]);
            if a.0 * b.1 - a.1 * b.0 < 0.0 {
                inside = false;
            }
            d = d.min(point_segment_distance((0.0, 0.0), a, b));
        }
        if inside {
            0.0
        } else {
            d
        }
    }
}

/// Maximum of `exact` over `items`, evaluating exactly only the items whose
/// approximate value is within a small margin of the approximate maximum.
fn exact_max<T>(items: &[T], approx: impl Fn(&T) -> f64, scale: f64, exact: impl Fn(&T) -> QuarticScalar) -> QuarticScalar {
    let values: Vec<f64> = items.iter().map(&approx).collect();
    let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let margin = 1e-9 * (scale + top.abs());
    items
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v >= top - margin)
        .map(|(t, _)| exact(t))
        .max()
        .expect("nonempty")
}

/// Vertices of the convex hull of integer points (collinear points dropped).
fn integer_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Exact support value `max ⟨w, u⟩` over the vertices of a polygon.
pub fn polygon_support(k: &Polygon, u: &Vec2) -> QuarticScalar {
    k.vertices().iter().map(|w| w.dot(u)).max().expect("polygon has vertices")
}

/// Rational approximation of `‖v‖`, relative error about 2⁻⁵⁰.
pub fn approx_norm(v: &Vec2) -> Rational {
    let eps = Rational::new(BigInt::one(), BigInt::one() << 64);
    let sq = v.norm_squared().approximate(&eps);
    let f = num_traits::ToPrimitive::to_f64(&sq).expect("finite").sqrt();
    Rational::from_float(f).expect("finite norm")
}

/// `v` divided by a rational approximation of its length.
pub fn normalized(v: &Vec2) -> Vec2 {
    let inv = approx_norm(v).recip();
    v.scale_rational(&inv)
}

/// `count` exactly-unit directions spread evenly around the circle, starting
/// at (1, 0). Directions off the axes are rational points on the unit circle
/// close to the evenly spaced angles. `count` must be a positive multiple of 4.
pub fn direction_fan(count: usize) -> Vec<Vec2> {
    assert!(count > 0 && count % 4 == 0, "fan size must be a positive multiple of 4");
    let quarter = count / 4;
    let denom: BigInt = BigInt::one() << 24;
    let mut first = Vec::with_capacity(quarter);
    for j in 0..quarter {
        let theta = std::f64::consts::FRAC_PI_2 * j as f64 / quarter as f64;
        let t = Rational::new(
            BigInt::from(((theta / 2.0).tan() * (1u64 << 24) as f64).round() as i64),
            denom.clone(),
        );
        let t2 = &t * &t;
        let d = Rational::one() + &t2;
        let x = (Rational::one() - &t2) / &d;
        let y = (&t + &t) / &d;
        first.push(Vec2::new(QuarticScalar::from_rational(&x), QuarticScalar::from_rational(&y)));
    }
    let mut out = Vec::with_capacity(count);
    for r in 0..4 {
        for u in &first {
            let mut w = u.clone();
            for _ in 0..r {
                w = Vec2::new(-&w.y, w.x.clone());
            }
            out.push(w);
        }
    }
    out
}

/// The default gap directions: a 64-direction fan plus the normalised
/// directions of the limit's vertices.
pub fn gap_directions(limit: &Polygon) -> Vec<Vec2> {
    let mut dirs = direction_fan(64);
    dirs.extend(limit.vertices().iter().map(normalized));
    dirs
}
