//! Deterministic SVG 1.1 output. Coordinates are written with 12 significant
//! digits and the y axis points up.

use std::fmt::Write;

const CANVAS: u32 = 800;

/// Decimal text with 12 significant digits, trailing zeros trimmed.
pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let places = (11 - exponent).max(0) as usize;
    let mut s = format!("{x:.places$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn points_attr(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|&(x, y)| format!("{},{}", num(x), num(-y)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub struct Scene {
    min: (f64, f64),
    max: (f64, f64),
    stroke: f64,
    body: String,
}

impl Scene {
    /// A square viewport centred at the origin with half-width `radius`.
    pub fn centered(radius: f64) -> Self {
        Self {
            min: (-radius, -radius),
            max: (radius, radius),
            stroke: radius / 400.0,
            body: String::new(),
        }
    }

    /// The smallest centred square viewport holding `points`, padded by 10%.
    pub fn fitting<'a>(points: impl IntoIterator<Item = &'a (f64, f64)>) -> Self {
        let r = points
            .into_iter()
            .fold(0.0f64, |r, &(x, y)| r.max(x.abs()).max(y.abs()));
        Self::centered(if r > 0.0 { 1.1 * r } else { 1.0 })
    }

    pub fn polygon(&mut self, points: &[(f64, f64)], fill: &str) {
        let _ = writeln!(
            self.body,
            r##"<polygon points="{}" fill="{fill}" stroke="#222222" stroke-width="{}"/>"##,
            points_attr(points),
            num(self.stroke)
        );
    }

    /// Closed outline drawn as a polyline.
    pub fn outline(&mut self, points: &[(f64, f64)], colour: &str) {
        let mut closed = points.to_vec();
        if let Some(&p) = points.first() {
            closed.push(p);
        }
        let _ = writeln!(
            self.body,
            r##"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="{}"/>"##,
            points_attr(&closed),
            num(3.0 * self.stroke)
        );
    }

    pub fn dot(&mut self, (x, y): (f64, f64), colour: &str) {
        let _ = writeln!(
            self.body,
            r##"<circle cx="{}" cy="{}" r="{}" fill="{colour}"/>"##,
            num(x),
            num(-y),
            num(4.0 * self.stroke)
        );
    }

    pub fn finish(self) -> String {
        let (w, h) = (self.max.0 - self.min.0, self.max.1 - self.min.1);
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" viewBox="{} {} {} {}">"##,
            num(self.min.0),
            num(-self.max.1),
            num(w),
            num(h)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff"/>"##,
            num(self.min.0),
            num(-self.max.1),
            num(w),
            num(h)
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

/// Fill colour for a polygon with the given number of sides.
pub fn side_colour(sides: usize) -> &'static str {
    match sides {
        3 => "#f6d365",
        4 => "#7fb8e0",
        6 => "#9fd39a",
        8 => "#e59a7a",
        12 => "#c6a4de",
        _ => "#d9d9d9",
    }
}

/// Fill colour for corona layer `n`; the seed is highlighted.
pub fn layer_colour(n: usize) -> &'static str {
    const CYCLE: [&str; 6] = ["#4c78a8", "#72b7b2", "#54a24b", "#eeca3b", "#f58518", "#b279a2"];
    if n == 0 {
        "#e45756"
    } else {
        CYCLE[(n - 1) % CYCLE.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-2.5), "-2.5");
        assert_eq!(num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(num(1234.5678901234), "1234.56789012");
        assert_eq!(num(-1.5e-7), "-0.00000015");
    }
}
