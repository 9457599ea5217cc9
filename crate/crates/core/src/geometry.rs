//! Exact planar predicates and constructions.

use thiserror::Error;

use crate::scalar::QuarticScalar;
use crate::vector::Vec2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero signed area")]
    ZeroArea,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
}

/// Sign of `(q − p) × (r − p)`: +1 for a left turn, −1 for a right turn, 0 if collinear.
pub fn orientation(p: &Vec2, q: &Vec2, r: &Vec2) -> i8 {
    (q - p).cross(&(r - p)).sign()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub p: Vec2,
    pub q: Vec2,
}

impl Segment {
    pub fn new(p: Vec2, q: Vec2) -> Result<Self, GeometryError> {
        if p == q {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Self { p, q })
    }

    /// Whether `x` (already known to be collinear) lies within the closed segment.
    fn contains_collinear(&self, x: &Vec2) -> bool {
        let d = &self.q - &self.p;
        let t = (x - &self.p).dot(&d);
        t.sign() >= 0 && t <= d.norm_squared()
    }

    pub fn contains(&self, x: &Vec2) -> bool {
        orientation(&self.p, &self.q, x) == 0 && self.contains_collinear(x)
    }
}

/// True iff the closed segments share at least one point.
pub fn segments_touch(s1: &Segment, s2: &Segment) -> bool {
    let o1 = orientation(&s1.p, &s1.q, &s2.p);
    let o2 = orientation(&s1.p, &s1.q, &s2.q);
    let o3 = orientation(&s2.p, &s2.q, &s1.p);
    let o4 = orientation(&s2.p, &s2.q, &s1.q);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && s1.contains_collinear(&s2.p))
        || (o2 == 0 && s1.contains_collinear(&s2.q))
        || (o3 == 0 && s2.contains_collinear(&s1.p))
        || (o4 == 0 && s2.contains_collinear(&s1.q))
}

/// True iff the segments are collinear and overlap in a piece of positive length.
pub fn positive_overlap(s1: &Segment, s2: &Segment) -> bool {
    if orientation(&s1.p, &s1.q, &s2.p) != 0 || orientation(&s1.p, &s1.q, &s2.q) != 0 {
        return false;
    }
    // project onto the direction of s1
    let d = &s1.q - &s1.p;
    let len = d.norm_squared();
    let a = (&s2.p - &s1.p).dot(&d);
    let b = (&s2.q - &s1.p).dot(&d);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let zero = QuarticScalar::zero();
    let start = if lo > zero { lo } else { zero };
    let end = if hi < len { hi } else { len };
    start < end
}

/// True iff the open segments cross at a single interior point of both.
fn segments_cross_properly(s1: &Segment, s2: &Segment) -> bool {
    let o1 = orientation(&s1.p, &s1.q, &s2.p);
    let o2 = orientation(&s1.p, &s1.q, &s2.q);
    let o3 = orientation(&s2.p, &s2.q, &s1.p);
    let o4 = orientation(&s2.p, &s2.q, &s1.q);
    o1 * o2 < 0 && o3 * o4 < 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A simple polygon with vertices in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

impl Polygon {
    /// Builds a polygon, reversing clockwise input so the stored order is
    /// counterclockwise. Simplicity is not checked here; see [`Polygon::is_simple`].
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        let twice_area = twice_signed_area(&vertices);
        match twice_area.sign() {
            0 => return Err(GeometryError::ZeroArea),
            -1 => vertices.reverse(),
            _ => {}
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment {
            p: self.vertices[i].clone(),
            q: self.vertices[(i + 1) % n].clone(),
        })
    }

    pub fn translate(&self, t: &Vec2) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|v| v + t).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Vec2) -> Vec2) -> Result<Polygon, GeometryError> {
        Polygon::new(self.vertices.iter().map(f).collect())
    }

    /// Exact area by the shoelace formula (always positive).
    pub fn area(&self) -> QuarticScalar {
        twice_signed_area(&self.vertices).scale(&crate::scalar::Rational::new(1.into(), 2.into()))
    }

    /// Average of the vertices; the centre for regular polygons.
    pub fn vertex_centroid(&self) -> Vec2 {
        let mut sum = Vec2::zero();
        for v in &self.vertices {
            sum = &sum + v;
        }
        sum.div_int(self.vertices.len() as i64)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            orientation(
                &self.vertices[i],
                &self.vertices[(i + 1) % n],
                &self.vertices[(i + 2) % n],
            ) >= 0
        })
    }

    /// No two edges meet except consecutive edges at their shared vertex.
    pub fn is_simple(&self) -> bool {
        let edges: Vec<Segment> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // consecutive edges may only share the common vertex; any
                    // further contact means they fold back along one line
                    if positive_overlap(&edges[i], &edges[j]) {
                        return false;
                    }
                } else if segments_touch(&edges[i], &edges[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact classification of `x` against the closed polygon.
    pub fn locate(&self, x: &Vec2) -> Location {
        let mut winding = 0i32;
        for e in self.edges() {
            if e.contains(x) {
                return Location::Boundary;
            }
            let (a, b) = (&e.p, &e.q);
            let ay = (&a.y - &x.y).sign();
            let by = (&b.y - &x.y).sign();
            if ay <= 0 {
                if by > 0 && orientation(a, b, x) > 0 {
                    winding += 1;
                }
            } else if by <= 0 && orientation(a, b, x) < 0 {
                winding -= 1;
            }
        }
        if winding != 0 {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// A point strictly inside the polygon (the centroid of an ear).
    pub fn interior_point(&self) -> Vec2 {
        let n = self.vertices.len();
        let v = &self.vertices;
        for i in 0..n {
            let (a, b, c) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
            if orientation(a, b, c) <= 0 {
                continue;
            }
            let tri = Polygon {
                vertices: vec![a.clone(), b.clone(), c.clone()],
            };
            let blocked = v.iter().enumerate().any(|(k, w)| {
                k != i && k != (i + n - 1) % n && k != (i + 1) % n && tri.locate(w) != Location::Outside
            });
            if !blocked {
                return (&(a + b) + c).div_int(3);
            }
        }
        unreachable!("every simple polygon has an ear")
    }

    /// True iff the interiors of `self` and `other` intersect.
    pub fn interiors_overlap(&self, other: &Polygon) -> bool {
        for e in self.edges() {
            for f in other.edges() {
                if segments_cross_properly(&e, &f) {
                    return true;
                }
            }
        }
        if pieces_enter(self, other) || pieces_enter(other, self) {
            return true;
        }
        other.locate(&self.interior_point()) == Location::Inside
            || self.locate(&other.interior_point()) == Location::Inside
    }

    /// Largest `t ≥ 0` with `t·v` in the closed polygon, or `None` if the ray
    /// from the origin misses it. Panics if `v` is zero.
    pub fn ray_exit(&self, v: &Vec2) -> Option<QuarticScalar> {
        assert!(!v.is_zero(), "ray direction must be nonzero");
        let mut best: Option<QuarticScalar> = None;
        let mut offer = |t: QuarticScalar| {
            if t.sign() >= 0 && best.as_ref().map_or(true, |b| &t > b) {
                best = Some(t);
            }
        };
        let vv = v.norm_squared();
        for e in self.edges() {
            let d = &e.q - &e.p;
            let denom = v.cross(&d);
            if denom.is_zero() {
                // parallel: only collinear edges meet the ray's line
                if e.p.cross(v).is_zero() {
                    for w in [&e.p, &e.q] {
                        offer(w.dot(v).checked_div(&vv).expect("nonzero direction"));
                    }
                }
                continue;
            }
            // t·v = p + s·d  ⇒  t = (p × d)/(v × d), s = (p × v)/(v × d)
            let inv = denom.inverse().expect("nonzero");
            let s = &e.p.cross(v) * &inv;
            if s.sign() < 0 || s > QuarticScalar::one() {
                continue;
            }
            offer(&e.p.cross(&d) * &inv);
        }
        best
    }
}

fn twice_signed_area(vertices: &[Vec2]) -> QuarticScalar {
    let n = vertices.len();
    let mut acc = QuarticScalar::zero();
    for i in 0..n {
        acc += &vertices[i].cross(&vertices[(i + 1) % n]);
    }
    acc
}

/// Splits every edge of `a` at the vertices of `b` lying on it and reports
/// whether the midpoint of any resulting piece is strictly inside `b`.
fn pieces_enter(a: &Polygon, b: &Polygon) -> bool {
    for e in a.edges() {
        let d = &e.q - &e.p;
        let mut cuts: Vec<QuarticScalar> = vec![QuarticScalar::zero(), d.norm_squared()];
        for w in b.vertices() {
            if e.contains(w) {
                cuts.push((w - &e.p).dot(&d));
            }
        }
        cuts.sort();
        cuts.dedup();
        let len = d.norm_squared().inverse().expect("nondegenerate edge");
        for pair in cuts.windows(2) {
            let t = (&pair[0] + &pair[1]).scale(&crate::scalar::Rational::new(1.into(), 2.into()));
            let mid = &e.p + &d.scale(&(&t * &len));
            if b.locate(&mid) == Location::Inside {
                return true;
            }
        }
    }
    false
}

/// Output of [`convex_hull`]; degenerate inputs are flagged rather than rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hull {
    Point(Vec2),
    Segment(Vec2, Vec2),
    Polygon(Polygon),
}

impl Hull {
    pub fn vertices(&self) -> Vec<Vec2> {
        match self {
            Hull::Point(p) => vec![p.clone()],
            Hull::Segment(a, b) => vec![a.clone(), b.clone()],
            Hull::Polygon(p) => p.vertices().to_vec(),
        }
    }

    pub fn polygon(&self) -> Option<&Polygon> {
        match self {
            Hull::Polygon(p) => Some(p),
            _ => None,
        }
    }
}

/// Monotone-chain convex hull. Extreme points only (collinear points dropped),
/// counterclockwise, starting from the lexicographically smallest point.
/// Panics on empty input.
pub fn convex_hull<'a, I>(points: I) -> Hull
where
    I: IntoIterator<Item = &'a Vec2>,
{
    let mut pts: Vec<Vec2> = points.into_iter().cloned().collect();
    assert!(!pts.is_empty(), "convex hull of an empty set");
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return Hull::Point(pts.pop().unwrap());
    }
    let mut lower: Vec<Vec2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orientation(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orientation(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    match lower.len() {
        1 => Hull::Point(lower.pop().unwrap()),
        2 => {
            let b = lower.pop().unwrap();
            let a = lower.pop().unwrap();
            Hull::Segment(a, b)
        }
        _ => Hull::Polygon(Polygon { vertices: lower }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn p(x: i64, y: i64) -> Vec2 {
        Vec2::from_ints(x, y)
    }

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(p(a.0, a.1), p(b.0, b.1)).unwrap()
    }

    fn unit_square() -> Polygon {
        Polygon::new(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap()
    }

    fn half() -> QuarticScalar {
        QuarticScalar::frac(1, 2)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(2, 0)), 0);
        assert_eq!(orientation(&p(0, 0), &p(0, 1), &p(1, 0)), -1);
    }

    #[test]
    fn touch_and_overlap_examples() {
        assert!(segments_touch(&seg((0, 0), (1, 0)), &seg((1, 0), (1, 1))));
        assert!(!segments_touch(&seg((0, 0), (1, 0)), &seg((0, 1), (1, 1))));
        assert!(segments_touch(&seg((0, 0), (2, 0)), &seg((1, 0), (3, 0))));
        assert!(segments_touch(&seg((0, 0), (2, 2)), &seg((0, 2), (2, 0))));

        assert!(positive_overlap(&seg((0, 0), (2, 0)), &seg((1, 0), (3, 0))));
        assert!(!positive_overlap(&seg((0, 0), (1, 0)), &seg((1, 0), (2, 0))));
        assert!(!positive_overlap(&seg((0, 0), (1, 0)), &seg((0, 0), (0, 1))));
        assert!(positive_overlap(&seg((2, 0), (0, 0)), &seg((1, 0), (3, 0))));
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert_eq!(Segment::new(p(1, 1), p(1, 1)), Err(GeometryError::DegenerateSegment));
    }

    #[test]
    fn area_examples() {
        assert_eq!(unit_square().area(), QuarticScalar::one());
        let h = QuarticScalar::sqrt3().div_int(2);
        let tri = Polygon::new(vec![p(0, 0), p(1, 0), Vec2::new(half(), h.clone())]).unwrap();
        assert_eq!(tri.area(), QuarticScalar::sqrt3().div_int(4));
        let hex = Polygon::new(vec![
            p(1, 0),
            Vec2::new(half(), h.clone()),
            Vec2::new(-half(), h.clone()),
            p(-1, 0),
            Vec2::new(-half(), -&h),
            Vec2::new(half(), -&h),
        ])
        .unwrap();
        assert_eq!(hex.area(), QuarticScalar::sqrt3().mul_int(3).div_int(2));
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let cw = Polygon::new(vec![p(0, 0), p(0, 1), p(1, 1), p(1, 0)]).unwrap();
        assert_eq!(cw.area(), QuarticScalar::one());
        assert_eq!(cw.vertices()[1], p(1, 1));
        assert_eq!(Polygon::new(vec![p(0, 0), p(1, 0), p(2, 0)]), Err(GeometryError::ZeroArea));
    }

    #[test]
    fn locate_examples() {
        let sq = unit_square();
        assert_eq!(sq.locate(&Vec2::new(half(), half())), Location::Inside);
        assert_eq!(sq.locate(&Vec2::new(QuarticScalar::one(), half())), Location::Boundary);
        assert_eq!(sq.locate(&p(2, 0)), Location::Outside);
        assert_eq!(sq.locate(&p(1, 1)), Location::Boundary);
    }

    #[test]
    fn ray_exit_examples() {
        let sq = unit_square();
        assert_eq!(sq.ray_exit(&p(1, 0)), Some(QuarticScalar::one()));
        assert_eq!(sq.ray_exit(&p(1, 1)), Some(QuarticScalar::one()));
        assert_eq!(sq.ray_exit(&p(-1, 0)), Some(QuarticScalar::zero()));
        assert_eq!(sq.translate(&p(3, 3)).ray_exit(&p(1, -1)), None);
        assert_eq!(sq.translate(&p(2, 2)).ray_exit(&p(2, 2)), Some(QuarticScalar::frac(3, 2)));
    }

    #[test]
    fn hull_examples() {
        let pts = [p(0, 0), p(1, 0), p(2, 0), p(1, 1)];
        assert_eq!(convex_hull(&pts).vertices(), vec![p(0, 0), p(2, 0), p(1, 1)]);
        let sq = [p(1, 1), p(-1, 1), p(-1, -1), p(1, -1), p(0, 0)];
        assert_eq!(
            convex_hull(&sq).vertices(),
            vec![p(-1, -1), p(1, -1), p(1, 1), p(-1, 1)]
        );
        assert_eq!(convex_hull(&[p(2, 2), p(2, 2)]), Hull::Point(p(2, 2)));
        assert_eq!(
            convex_hull(&[p(0, 0), p(1, 1), p(3, 3)]),
            Hull::Segment(p(0, 0), p(3, 3))
        );
    }

    #[test]
    fn overlap_and_simplicity() {
        let sq = unit_square();
        assert!(sq.interiors_overlap(&sq));
        assert!(!sq.interiors_overlap(&sq.translate(&p(1, 0))));
        assert!(!sq.interiors_overlap(&sq.translate(&p(1, 1))));
        let shifted = sq.translate(&Vec2::new(half(), QuarticScalar::zero()));
        assert!(sq.interiors_overlap(&shifted));
        // a small square nested inside a big one shares no edge crossings
        let big = Polygon::new(vec![p(-2, -2), p(3, -2), p(3, 3), p(-2, 3)]).unwrap();
        assert!(big.interiors_overlap(&sq));
        assert!(sq.is_simple());
        let bow = Polygon::new(vec![p(0, 0), p(2, 2), p(2, 0), p(0, 2), p(-1, 1)]);
        assert!(!bow.unwrap().is_simple());
        let q = sq.interior_point();
        assert_eq!(sq.locate(&q), Location::Inside);
        let _ = Rational::new(1.into(), 3.into());
    }
}
