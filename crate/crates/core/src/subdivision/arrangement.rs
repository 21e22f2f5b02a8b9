//! Splits boundary curves into interior-disjoint x-monotone pieces.
//!
//! Vertices are kept in a registry that merges points closer than a snapping
//! tolerance, so a crossing computed in floating point at an input point
//! becomes that input point's vertex instead of a nearby duplicate.

use std::collections::HashMap;

use crate::regions::{BBox, CurveGeom, CurvePoint, CurveSegment, SupportKey};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub x: f64,
    pub y: f64,
    /// Input point this vertex coincides with exactly.
    pub pin: Option<usize>,
}

impl Vertex {
    #[inline]
    pub fn lex_lt(&self, o: &Vertex) -> bool {
        self.x < o.x || (self.x == o.x && self.y < o.y)
    }

    #[inline]
    pub fn lex_le_xy(&self, x: f64, y: f64) -> bool {
        self.x < x || (self.x == x && self.y <= y)
    }
}

/// An interior-disjoint piece of the arrangement. Coincident boundaries of
/// several regions share one piece with several owners.
#[derive(Clone, Debug)]
pub struct Piece {
    pub geom: CurveGeom,
    pub left: u32,
    pub right: u32,
    /// `(owner, inside_below)` pairs.
    pub owners: Vec<(usize, bool)>,
}

pub(crate) struct Registry {
    pub vertices: Vec<Vertex>,
    by_pin: HashMap<usize, u32>,
    grid: HashMap<(i64, i64), Vec<u32>>,
    cell: f64,
    tol: f64,
}

impl Registry {
    pub fn new(tol: f64) -> Registry {
        Registry { vertices: Vec::new(), by_pin: HashMap::new(), grid: HashMap::new(), cell: tol * 4.0, tol }
    }

    fn key(&self, x: f64, y: f64) -> (i64, i64) {
        ((x / self.cell).floor() as i64, (y / self.cell).floor() as i64)
    }

    pub fn find(&self, x: f64, y: f64) -> Option<u32> {
        let (kx, ky) = self.key(x, y);
        let mut best: Option<(f64, u32)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        let v = &self.vertices[id as usize];
                        let d = (v.x - x).abs().max((v.y - y).abs());
                        if d <= self.tol && best.is_none_or(|(bd, _)| d < bd) {
                            best = Some((d, id));
                        }
                    }
                }
            }
        }
        best.map(|(_, id)| id)
    }

    pub fn register(&mut self, p: CurvePoint) -> u32 {
        if let Some(pin) = p.pin {
            if let Some(&id) = self.by_pin.get(&pin) {
                return id;
            }
        }
        if let Some(id) = self.find(p.x, p.y) {
            let v = &mut self.vertices[id as usize];
            if let Some(pin) = p.pin {
                if v.pin.is_none() {
                    // exact coordinates win over a computed approximation
                    v.pin = Some(pin);
                    v.x = p.x;
                    v.y = p.y;
                    self.by_pin.insert(pin, id);
                }
            }
            return id;
        }
        let id = self.vertices.len() as u32;
        self.vertices.push(Vertex { x: p.x, y: p.y, pin: p.pin });
        let k = self.key(p.x, p.y);
        self.grid.entry(k).or_default().push(id);
        if let Some(pin) = p.pin {
            self.by_pin.insert(pin, id);
        }
        id
    }
}

/// Intersection points of the supporting curves of two geometries.
fn support_intersections(a: &CurveGeom, b: &CurveGeom, tol: f64) -> Vec<(f64, f64)> {
    match (a, b) {
        (CurveGeom::Arc { cx: x1, cy: y1, r: r1, .. }, CurveGeom::Arc { cx: x2, cy: y2, r: r2, .. }) => {
            let (dx, dy) = (x2 - x1, y2 - y1);
            let d = dx.hypot(dy);
            if d == 0.0 || d > r1 + r2 + tol || d < (r1 - r2).abs() - tol {
                return Vec::new();
            }
            let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
            let h2 = r1 * r1 - a * a;
            let h = if h2 > 0.0 { h2.sqrt() } else { 0.0 };
            let (ux, uy) = (dx / d, dy / d);
            let (mx, my) = (x1 + a * ux, y1 + a * uy);
            if h == 0.0 {
                vec![(mx, my)]
            } else {
                vec![(mx - h * uy, my + h * ux), (mx + h * uy, my - h * ux)]
            }
        }
        (CurveGeom::Line { a, b, c }, CurveGeom::Arc { cx, cy, r, .. })
        | (CurveGeom::Arc { cx, cy, r, .. }, CurveGeom::Line { a, b, c }) => {
            let s = a * cx + b * cy - c;
            if s.abs() > r + tol {
                return Vec::new();
            }
            let (fx, fy) = (cx - s * a, cy - s * b);
            let h2 = r * r - s * s;
            let h = if h2 > 0.0 { h2.sqrt() } else { 0.0 };
            if h == 0.0 {
                vec![(fx, fy)]
            } else {
                vec![(fx - h * b, fy + h * a), (fx + h * b, fy - h * a)]
            }
        }
        (CurveGeom::Line { a: a1, b: b1, c: c1 }, CurveGeom::Line { a: a2, b: b2, c: c2 }) => {
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-15 {
                return Vec::new();
            }
            vec![((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)]
        }
    }
}

struct Work {
    geom: CurveGeom,
    support: usize,
    left: u32,
    right: u32,
    owner: usize,
    inside_below: bool,
    cuts: Vec<u32>,
    bounds: BBox,
}

/// Whether the supporting-curve point `(x, y)` lies on the piece interior,
/// judged by its x-range (y-range for vertical pieces) and arc half.
fn within(w: &Work, verts: &[Vertex], x: f64, y: f64, tol: f64) -> bool {
    let l = verts[w.left as usize];
    let r = verts[w.right as usize];
    if l.x == r.x {
        return (x - l.x).abs() <= tol && y > l.y && y < r.y;
    }
    if !(x > l.x - tol && x < r.x + tol) {
        return false;
    }
    match w.geom {
        CurveGeom::Arc { cy, upper, .. } => {
            if upper {
                y >= cy - tol
            } else {
                y <= cy + tol
            }
        }
        CurveGeom::Line { .. } => true,
    }
}

/// Output of [`split_curves`]: vertices and interior-disjoint pieces.
pub struct Arrangement {
    pub vertices: Vec<Vertex>,
    pub pieces: Vec<Piece>,
}

pub fn split_curves(curves: &[CurveSegment], snap_tol: f64) -> Arrangement {
    let mut reg = Registry::new(snap_tol);
    // pinned points first so later approximations snap onto them
    for c in curves {
        for p in [&c.left, &c.right].into_iter().chain(c.pins.iter()) {
            if p.pin.is_some() {
                reg.register(*p);
            }
        }
    }
    let mut supports: HashMap<&SupportKey, usize> = HashMap::new();
    let mut work: Vec<Work> = Vec::with_capacity(curves.len());
    for c in curves {
        let n = supports.len();
        let support = *supports.entry(&c.support).or_insert(n);
        let left = reg.register(c.left);
        let right = reg.register(c.right);
        if left == right {
            continue;
        }
        let (left, right) = if reg.vertices[left as usize].lex_lt(&reg.vertices[right as usize]) {
            (left, right)
        } else {
            (right, left)
        };
        let cuts = c.pins.iter().map(|p| reg.register(*p)).filter(|&v| v != left && v != right).collect();
        let mut bounds = c.bounds();
        bounds = bounds.inflate(0.0, snap_tol * 4.0);
        work.push(Work { geom: c.geom.clone(), support, left, right, owner: c.owner, inside_below: c.inside_below, cuts, bounds });
    }

    let mut order: Vec<usize> = (0..work.len()).collect();
    order.sort_by(|&a, &b| work[a].bounds.min_x.total_cmp(&work[b].bounds.min_x));
    let mut new_cuts: Vec<(usize, u32)> = Vec::new();
    for (oi, &i) in order.iter().enumerate() {
        for &j in &order[oi + 1..] {
            if work[j].bounds.min_x > work[i].bounds.max_x {
                break;
            }
            if !work[i].bounds.overlaps(&work[j].bounds) {
                continue;
            }
            let (wi, wj) = (&work[i], &work[j]);
            if wi.support == wj.support {
                continue;
            }
            for (x, y) in support_intersections(&wi.geom, &wj.geom, snap_tol) {
                if !within(wi, &reg.vertices, x, y, snap_tol) || !within(wj, &reg.vertices, x, y, snap_tol) {
                    continue;
                }
                let v = reg.register(CurvePoint::free(x, y));
                for k in [i, j] {
                    if v != work[k].left && v != work[k].right {
                        new_cuts.push((k, v));
                    }
                }
            }
        }
    }
    for (k, v) in new_cuts {
        work[k].cuts.push(v);
    }
    // pieces on one supporting curve share all their vertices, so overlapping
    // copies are cut identically and merge below
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, w) in work.iter().enumerate() {
        groups.entry(w.support).or_default().push(k);
    }
    for members in groups.values().filter(|g| g.len() > 1) {
        let mut all: Vec<u32> = members
            .iter()
            .flat_map(|&k| [work[k].left, work[k].right].into_iter().chain(work[k].cuts.iter().copied()))
            .collect();
        all.sort_unstable();
        all.dedup();
        for &k in members {
            let extra: Vec<u32> = all
                .iter()
                .copied()
                .filter(|&v| {
                    let p = reg.vertices[v as usize];
                    let l = reg.vertices[work[k].left as usize];
                    let r = reg.vertices[work[k].right as usize];
                    l.lex_lt(&p) && p.lex_lt(&r) && within(&work[k], &reg.vertices, p.x, p.y, snap_tol)
                })
                .collect();
            work[k].cuts.extend(extra);
        }
    }

    let verts = &reg.vertices;
    let mut pieces: Vec<Piece> = Vec::new();
    let mut index: HashMap<(usize, bool, u32, u32), usize> = HashMap::new();
    for w in &work {
        let l = verts[w.left as usize];
        let r = verts[w.right as usize];
        let mut chain: Vec<u32> = w
            .cuts
            .iter()
            .copied()
            .filter(|&v| {
                let p = verts[v as usize];
                l.lex_lt(&p) && p.lex_lt(&r)
            })
            .collect();
        chain.sort_by(|&a, &b| {
            let (pa, pb) = (verts[a as usize], verts[b as usize]);
            (pa.x, pa.y).partial_cmp(&(pb.x, pb.y)).unwrap()
        });
        chain.dedup();
        chain.insert(0, w.left);
        chain.push(w.right);
        let upper = matches!(w.geom, CurveGeom::Arc { upper: true, .. });
        for seg in chain.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if a == b {
                continue;
            }
            let key = (w.support, upper, a, b);
            match index.get(&key) {
                Some(&pi) => {
                    let owners = &mut pieces[pi].owners;
                    if !owners.iter().any(|&(o, _)| o == w.owner) {
                        owners.push((w.owner, w.inside_below));
                    }
                }
                None => {
                    index.insert(key, pieces.len());
                    pieces.push(Piece { geom: w.geom.clone(), left: a, right: b, owners: vec![(w.owner, w.inside_below)] });
                }
            }
        }
    }
    Arrangement { vertices: reg.vertices, pieces }
}
