//! SVG rendering of points, edges and one optional region outline.

use std::f64::consts::TAU;
use std::fmt::Write;

use betaskel::regions::BBox;
use betaskel::{PointSet, Region};

const SIZE: f64 = 800.0;
const SAMPLES: usize = 96;

struct View {
    bb: BBox,
    scale: f64,
}

impl View {
    fn new(points: &PointSet) -> View {
        let mut bb = BBox::empty();
        for p in points.iter() {
            let (x, y) = p.approx();
            bb.include(x, y);
        }
        let bb = bb.inflate(0.1, 0.5);
        let scale = SIZE / (bb.max_x - bb.min_x).max(bb.max_y - bb.min_y);
        View { bb, scale }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.bb.min_x) * self.scale, (self.bb.max_y - y) * self.scale)
    }

    fn width(&self) -> f64 {
        (self.bb.max_x - self.bb.min_x) * self.scale
    }

    fn height(&self) -> f64 {
        (self.bb.max_y - self.bb.min_y) * self.scale
    }
}

fn path(view: &View, pts: &[(f64, f64)], class: &str) -> String {
    let mut d = String::new();
    for (k, &p) in pts.iter().enumerate() {
        let (x, y) = view.map(p);
        let _ = write!(d, "{}{x:.3},{y:.3}", if k == 0 { "M" } else { " L" });
    }
    format!("<path class=\"{class}\" d=\"{d}\" fill=\"none\" stroke=\"#c03030\"/>\n")
}

/// Points on the circle `(cx, cy, r)` from `from` to `to`, going the way that passes `via`.
fn arc(c: (f64, f64, f64), from: (f64, f64), to: (f64, f64), via: (f64, f64)) -> Vec<(f64, f64)> {
    let ang = |p: (f64, f64)| (p.1 - c.1).atan2(p.0 - c.0);
    let (a0, a1, av) = (ang(from), ang(to), ang(via));
    let ccw = |a: f64| (a - a0).rem_euclid(TAU);
    let span = ccw(a1);
    let sweep = if ccw(av) <= span { span } else { span - TAU };
    (0..=SAMPLES).map(|k| a0 + sweep * k as f64 / SAMPLES as f64).map(|a| (c.0 + c.2 * a.cos(), c.1 + c.2 * a.sin())).collect()
}

/// Outline of `r` as SVG elements: two arcs for a lune, two lines for a strip.
fn region_outline(view: &View, r: &Region) -> String {
    let (x, y) = r.endpoints();
    let (x, y) = (x.approx(), y.approx());
    let (dx, dy) = (y.0 - x.0, y.1 - x.1);
    match r {
        Region::Lune { beta, .. } => {
            let discs = r.approx_discs();
            let h = (2.0 * beta.approx() - 1.0).max(0.0).sqrt() / 2.0;
            let m = ((x.0 + y.0) / 2.0, (x.1 + y.1) / 2.0);
            let c_plus = (m.0 - h * dy, m.1 + h * dx);
            let c_minus = (m.0 + h * dy, m.1 - h * dx);
            path(view, &arc(discs[0], c_plus, c_minus, x), "region")
                + &path(view, &arc(discs[1], c_minus, c_plus, y), "region")
        }
        Region::Strip { .. } => {
            // long enough to cross the whole view
            let len = (view.width() + view.height()) / view.scale / (dx.hypot(dy));
            let line = |p: (f64, f64)| vec![(p.0 + len * dy, p.1 - len * dx), (p.0 - len * dy, p.1 + len * dx)];
            path(view, &line(x), "region") + &path(view, &line(y), "region")
        }
        Region::Segment { .. } | Region::HalfPlanes { .. } => {
            let len = (view.width() + view.height()) / view.scale / (dx.hypot(dy));
            let seg = if matches!(r, Region::Segment { .. }) {
                vec![x, y]
            } else {
                vec![(x.0 - len * dx, x.1 - len * dy), (x.0 + len * dx, x.1 + len * dy)]
            };
            path(view, &seg, "region")
        }
        Region::Lens { .. } | Region::CircleUnion { .. } => r
            .approx_discs()
            .into_iter()
            .map(|c| {
                let pts: Vec<_> = (0..=SAMPLES)
                    .map(|k| k as f64 * TAU / SAMPLES as f64)
                    .map(|a| (c.0 + c.2 * a.cos(), c.1 + c.2 * a.sin()))
                    .collect();
                path(view, &pts, "region")
            })
            .collect(),
    }
}

pub fn render(points: &PointSet, edges: &[(usize, usize)], region: Option<&Region>) -> String {
    let view = View::new(points);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.3} {h:.3}\">\n",
        w = view.width(),
        h = view.height()
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if let Some(r) = region {
        s.push_str(&region_outline(&view, r));
    }
    for &(i, j) in edges {
        let (x1, y1) = view.map(points[i].approx());
        let (x2, y2) = view.map(points[j].approx());
        let _ = writeln!(
            s,
            "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"black\" stroke-width=\"1.5\"/>"
        );
    }
    for p in points.iter() {
        let (x, y) = view.map(p.approx());
        let _ = writeln!(s, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"#2050c0\"/>");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use betaskel::regions::make_region;
    use betaskel::{Beta, Variant};

    fn square() -> PointSet {
        PointSet::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    #[test]
    fn counts_elements() {
        let svg = render(&square(), &[(0, 1), (0, 3), (1, 2), (2, 3)], None);
        assert_eq!(svg.matches("<line").count(), 4);
        assert_eq!(svg.matches("<circle").count(), 4);
        let svg = render(&square(), &[], None);
        assert_eq!(svg.matches("<line").count(), 0);
    }

    #[test]
    fn lune_arcs_pass_through_their_endpoint() {
        let p = square();
        let r = make_region(&p[0], &p[1], &Beta::int(3), Variant::LuneBased).unwrap();
        let svg = render(&p, &[], Some(&r));
        assert_eq!(svg.matches("class=\"region\"").count(), 2);
        let discs = r.approx_discs();
        let a = arc(discs[0], (0.5, 1.118), (0.5, -1.118), (0.0, 0.0));
        let leftmost = a.iter().map(|q| q.0).fold(f64::INFINITY, f64::min);
        assert!(leftmost.abs() < 1e-3, "{leftmost}");
    }
}
