//! Randomized incremental trapezoidal map with a search DAG.
//!
//! Vertices are ordered lexicographically, which amounts to an infinitesimal
//! shear, so vertical pieces and vertices sharing an x-coordinate need no
//! special treatment in the structure itself.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::regions::{BBox, CurveGeom, CurveSegment};

use super::arrangement::{split_curves, Piece, Vertex};

/// Missing piece or vertex: the bounding box side.
pub const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
enum Node {
    X { v: u32, left: u32, right: u32 },
    Y { s: u32, above: u32, below: u32 },
    Leaf(u32),
}

#[derive(Clone, Copy, Debug)]
pub struct Trapezoid {
    pub top: u32,
    pub bottom: u32,
    pub leftp: u32,
    pub rightp: u32,
    node: u32,
    pub alive: bool,
}

/// Neighbor across a wall (`piece == NONE`) or across a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adjacent {
    pub trap: u32,
    pub piece: u32,
    pub upward: bool,
}

/// Where a query point ended up, and which decisions were too close to call.
#[derive(Clone, Debug, Default)]
pub struct Located {
    pub trap: u32,
    pub near_pieces: Vec<u32>,
    pub x_near: bool,
    /// Inner DAG nodes on the search path.
    pub depth: u32,
}

pub struct TrapMap {
    pub bbox: BBox,
    pub vertices: Vec<Vertex>,
    pub pieces: Vec<Piece>,
    pub traps: Vec<Trapezoid>,
    nodes: Vec<Node>,
    /// Decisions with a margin below this are reported as near.
    pub tol: f64,
    /// Pinned vertices carry the exact input coordinates.
    pub exact_pins: bool,
    adj_start: Vec<u32>,
    adj: Vec<Adjacent>,
}

impl TrapMap {
    /// Builds the map of the arrangement of `curves` inside `bbox`.
    pub fn build(curves: &[CurveSegment], bbox: BBox, seed: u64) -> Result<TrapMap> {
        let scale = bbox.scale();
        for c in curves {
            for p in [&c.left, &c.right] {
                if !(p.x >= bbox.min_x && p.x <= bbox.max_x && p.y >= bbox.min_y && p.y <= bbox.max_y) {
                    return Err(Error::Precondition("curve leaves the bounding box".into()));
                }
            }
            if c.right.lex_lt(&c.left) {
                return Err(Error::Precondition("curve endpoints out of order".into()));
            }
            if let CurveGeom::Arc { cx, r, .. } = c.geom {
                let slack = 1e-9 * scale;
                if c.left.x < cx - r - slack || c.right.x > cx + r + slack {
                    return Err(Error::Precondition("arc piece is not x-monotone".into()));
                }
            }
        }
        let arr = split_curves(curves, 1e-10 * scale);
        let mut map = TrapMap {
            bbox,
            vertices: arr.vertices,
            pieces: arr.pieces,
            traps: Vec::new(),
            nodes: Vec::new(),
            tol: 1e-8 * scale,
            exact_pins: false,
            adj_start: Vec::new(),
            adj: Vec::new(),
        };
        map.new_trap(NONE, NONE, NONE, NONE);
        let mut order: Vec<u32> = (0..map.pieces.len() as u32).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for s in order {
            map.insert(s);
        }
        map.build_adjacency();
        Ok(map)
    }

    fn new_trap(&mut self, top: u32, bottom: u32, leftp: u32, rightp: u32) -> u32 {
        let id = self.traps.len() as u32;
        let node = self.nodes.len() as u32;
        self.nodes.push(Node::Leaf(id));
        self.traps.push(Trapezoid { top, bottom, leftp, rightp, node, alive: true });
        id
    }

    #[inline]
    pub fn vertex(&self, v: u32) -> &Vertex {
        &self.vertices[v as usize]
    }

    #[inline]
    fn lex_lt(&self, a: u32, b: u32) -> bool {
        self.vertex(a).lex_lt(self.vertex(b))
    }

    fn is_vertical(&self, s: u32) -> bool {
        let p = &self.pieces[s as usize];
        self.vertex(p.left).x == self.vertex(p.right).x
    }

    /// y on piece `s` at `x`, clamped to its x-range.
    pub fn y_at(&self, s: u32, x: f64) -> f64 {
        let p = &self.pieces[s as usize];
        let (l, r) = (self.vertex(p.left), self.vertex(p.right));
        if l.x == r.x {
            return l.y;
        }
        let x = x.clamp(l.x, r.x);
        match p.geom {
            CurveGeom::Arc { cx, cy, r_sq, upper, .. } => {
                let h = (r_sq - (x - cx) * (x - cx)).max(0.0).sqrt();
                if upper {
                    cy + h
                } else {
                    cy - h
                }
            }
            CurveGeom::Line { a, b, c } => (c - a * x) / b,
        }
    }

    /// Whether `(x, y)` lies above piece `s`, with the distance-like margin of
    /// the decision. For vertical pieces "above" is the side of smaller x.
    pub fn point_side(&self, s: u32, x: f64, y: f64) -> (bool, f64) {
        match self.pieces[s as usize].geom {
            CurveGeom::Arc { cx, cy, r, r_sq, upper } => {
                let (dx, dy) = (x - cx, y - cy);
                let power = r_sq - (dx * dx + dy * dy);
                let m = power.abs() / (2.0 * r);
                if upper {
                    if y > cy {
                        (power < 0.0, m)
                    } else {
                        (false, m.max(cy - y))
                    }
                } else if y < cy {
                    (power > 0.0, m)
                } else {
                    (true, m.max(y - cy))
                }
            }
            CurveGeom::Line { a, b, c } => {
                let v = a * x + b * y - c;
                if b == 0.0 {
                    (v * a < 0.0, v.abs())
                } else {
                    (v * b > 0.0, v.abs())
                }
            }
        }
    }

    /// Whether piece `s` lies above piece `t` where both are defined.
    /// The pieces must not cross.
    fn curve_above(&self, s: u32, t: u32) -> bool {
        let (ps, pt) = (&self.pieces[s as usize], &self.pieces[t as usize]);
        let (sv, tv) = (self.is_vertical(s), self.is_vertical(t));
        if sv || tv {
            if ps.left == pt.left {
                return sv;
            }
            if sv {
                let sl = self.vertex(ps.left);
                return sl.y > self.y_at(t, sl.x);
            }
            let tl = self.vertex(pt.left);
            return tl.y <= self.y_at(s, tl.x);
        }
        let lo = self.vertex(ps.left).x.max(self.vertex(pt.left).x);
        let hi = self.vertex(ps.right).x.min(self.vertex(pt.right).x);
        let xm = if hi > lo { 0.5 * (lo + hi) } else { lo };
        let (ys, yt) = (self.y_at(s, xm), self.y_at(t, xm));
        if ys != yt {
            return ys > yt;
        }
        s > t
    }

    /// Trapezoid containing the start of piece `s`.
    fn query_start(&self, s: u32) -> u32 {
        let p = self.pieces[s as usize].left;
        let pv = *self.vertex(p);
        let mut n = 0u32;
        loop {
            n = match self.nodes[n as usize] {
                Node::Leaf(t) => return t,
                Node::X { v, left, right } => {
                    if v == p || self.lex_lt(v, p) {
                        right
                    } else {
                        left
                    }
                }
                Node::Y { s: t, above, below } => {
                    let up = if self.pieces[t as usize].left == p {
                        self.curve_above(s, t)
                    } else {
                        self.point_side(t, pv.x, pv.y).0
                    };
                    if up {
                        above
                    } else {
                        below
                    }
                }
            };
        }
    }

    /// Trapezoid containing the part of `s` just past the wall through `r`.
    fn query_after(&self, s: u32, r: u32) -> u32 {
        let mut n = 0u32;
        loop {
            n = match self.nodes[n as usize] {
                Node::Leaf(t) => return t,
                Node::X { v, left, right } => {
                    if v == r || self.lex_lt(v, r) {
                        right
                    } else {
                        left
                    }
                }
                Node::Y { s: t, above, below } => {
                    if self.curve_above(s, t) {
                        above
                    } else {
                        below
                    }
                }
            };
        }
    }

    fn insert(&mut self, s: u32) {
        let (p, q) = (self.pieces[s as usize].left, self.pieces[s as usize].right);
        let mut list = vec![self.query_start(s)];
        let mut r_above: Vec<bool> = Vec::new();
        loop {
            let r = self.traps[*list.last().unwrap() as usize].rightp;
            if r == NONE || r == q || !self.lex_lt(r, q) {
                break;
            }
            let rv = *self.vertex(r);
            r_above.push(self.point_side(s, rv.x, rv.y).0);
            let next = self.query_after(s, r);
            if list.contains(&next) {
                log::warn!("trapezoid walk stalled on piece {s}");
                break;
            }
            list.push(next);
        }

        let first = self.traps[list[0] as usize];
        let last = self.traps[*list.last().unwrap() as usize];
        let a = (first.leftp != p).then(|| self.new_trap(first.top, first.bottom, first.leftp, p));
        let b = (last.rightp != q).then(|| self.new_trap(last.top, last.bottom, q, last.rightp));

        let k = list.len();
        let mut ups = Vec::with_capacity(k);
        let mut lows = Vec::with_capacity(k);
        let mut cur_u = self.new_trap(first.top, s, p, NONE);
        let mut cur_l = self.new_trap(s, first.bottom, p, NONE);
        for i in 0..k {
            ups.push(cur_u);
            lows.push(cur_l);
            if i + 1 < k {
                let r = self.traps[list[i] as usize].rightp;
                let next = self.traps[list[i + 1] as usize];
                if r_above[i] {
                    self.traps[cur_u as usize].rightp = r;
                    cur_u = self.new_trap(next.top, s, r, NONE);
                } else {
                    self.traps[cur_l as usize].rightp = r;
                    cur_l = self.new_trap(s, next.bottom, r, NONE);
                }
            }
        }
        self.traps[cur_u as usize].rightp = q;
        self.traps[cur_l as usize].rightp = q;

        for i in 0..k {
            let old = self.traps[list[i] as usize];
            self.traps[list[i] as usize].alive = false;
            let leaf = |m: &TrapMap, t: u32| m.traps[t as usize].node;
            let mut sub = Node::Y { s, above: leaf(self, ups[i]), below: leaf(self, lows[i]) };
            if i == k - 1 {
                if let Some(b) = b {
                    let y = self.push(sub);
                    sub = Node::X { v: q, left: y, right: leaf(self, b) };
                }
            }
            if i == 0 {
                if let Some(a) = a {
                    let inner = self.push(sub);
                    sub = Node::X { v: p, left: leaf(self, a), right: inner };
                }
            }
            self.nodes[old.node as usize] = sub;
        }
    }

    fn push(&mut self, n: Node) -> u32 {
        self.nodes.push(n);
        (self.nodes.len() - 1) as u32
    }

    /// Point location in the DAG, recording decisions closer than `tol`.
    pub fn locate_xy(&self, x: f64, y: f64) -> Located {
        let mut out = Located::default();
        let mut n = 0u32;
        loop {
            n = match self.nodes[n as usize] {
                Node::Leaf(t) => {
                    out.trap = t;
                    return out;
                }
                Node::X { v, left, right } => {
                    out.depth += 1;
                    let w = self.vertex(v);
                    if (w.x - x).abs() < self.tol && !(self.exact_pins && w.pin.is_some()) {
                        out.x_near = true;
                    }
                    if w.lex_le_xy(x, y) {
                        right
                    } else {
                        left
                    }
                }
                Node::Y { s, above, below } => {
                    out.depth += 1;
                    let (up, margin) = self.point_side(s, x, y);
                    if margin < self.tol {
                        out.near_pieces.push(s);
                    }
                    if up {
                        above
                    } else {
                        below
                    }
                }
            };
        }
    }

    /// Trapezoid containing `(x, y)`; the point must lie strictly inside the box.
    pub fn locate(&self, x: f64, y: f64) -> Result<u32> {
        if !self.bbox.strictly_contains(x, y) {
            return Err(Error::OutOfBounds);
        }
        Ok(self.locate_xy(x, y).trap)
    }

    pub fn live_traps(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.traps.len() as u32).filter(|&t| self.traps[t as usize].alive)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn left_x(&self, t: &Trapezoid) -> f64 {
        if t.leftp == NONE {
            self.bbox.min_x
        } else {
            self.vertex(t.leftp).x
        }
    }

    fn right_x(&self, t: &Trapezoid) -> f64 {
        if t.rightp == NONE {
            self.bbox.max_x
        } else {
            self.vertex(t.rightp).x
        }
    }

    fn top_y(&self, t: &Trapezoid, x: f64) -> f64 {
        if t.top == NONE {
            self.bbox.max_y
        } else {
            self.y_at(t.top, x)
        }
    }

    fn bottom_y(&self, t: &Trapezoid, x: f64) -> f64 {
        if t.bottom == NONE {
            self.bbox.min_y
        } else {
            self.y_at(t.bottom, x)
        }
    }

    /// A point in the middle of the trapezoid together with the smaller of
    /// its width and height there. Thin trapezoids give a tiny second value.
    pub fn sample(&self, t: u32) -> ((f64, f64), f64) {
        let tz = &self.traps[t as usize];
        let (xl, xr) = (self.left_x(tz), self.right_x(tz));
        let xm = 0.5 * (xl + xr);
        let (yb, yt) = (self.bottom_y(tz, xm), self.top_y(tz, xm));
        ((xm, 0.5 * (yb + yt)), (xr - xl).min(yt - yb))
    }

    /// Linear-scan containment test, independent of the DAG.
    pub fn trap_contains(&self, t: u32, x: f64, y: f64) -> bool {
        let tz = &self.traps[t as usize];
        if tz.leftp != NONE && !(self.vertex(tz.leftp).lex_lt(&Vertex { x, y, pin: None })) {
            return false;
        }
        if tz.rightp != NONE && !(Vertex { x, y, pin: None }).lex_lt(self.vertex(tz.rightp)) {
            return false;
        }
        if x <= self.bbox.min_x || x >= self.bbox.max_x || y <= self.bbox.min_y || y >= self.bbox.max_y {
            return false;
        }
        let above_bottom = tz.bottom == NONE || self.point_side(tz.bottom, x, y).0;
        let below_top = tz.top == NONE || !self.point_side(tz.top, x, y).0;
        above_bottom && below_top
    }

    /// Reference locator scanning every live trapezoid.
    pub fn locate_linear(&self, x: f64, y: f64) -> Vec<u32> {
        self.live_traps().filter(|&t| self.trap_contains(t, x, y)).collect()
    }

    pub fn neighbors(&self, t: u32) -> &[Adjacent] {
        let (a, b) = (self.adj_start[t as usize], self.adj_start[t as usize + 1]);
        &self.adj[a as usize..b as usize]
    }

    fn build_adjacency(&mut self) {
        let nv = self.vertices.len();
        let mut by_right: Vec<Vec<u32>> = vec![Vec::new(); nv];
        let mut by_left: Vec<Vec<u32>> = vec![Vec::new(); nv];
        let mut above_of: Vec<Vec<u32>> = vec![Vec::new(); self.pieces.len()];
        let mut below_of: Vec<Vec<u32>> = vec![Vec::new(); self.pieces.len()];
        for t in self.live_traps().collect::<Vec<_>>() {
            let tz = self.traps[t as usize];
            if tz.rightp != NONE {
                by_right[tz.rightp as usize].push(t);
            }
            if tz.leftp != NONE {
                by_left[tz.leftp as usize].push(t);
            }
            if tz.bottom != NONE {
                above_of[tz.bottom as usize].push(t);
            }
            if tz.top != NONE {
                below_of[tz.top as usize].push(t);
            }
        }
        let mut edges: Vec<(u32, u32, u32)> = Vec::new();
        for v in 0..nv as u32 {
            let (ls, rs) = (&by_right[v as usize], &by_left[v as usize]);
            if ls.is_empty() || rs.is_empty() {
                continue;
            }
            let ends_at = |s: u32| s != NONE && self.pieces[s as usize].right == v;
            let starts_at = |s: u32| s != NONE && self.pieces[s as usize].left == v;
            let ul = ls.iter().copied().find(|&t| !ends_at(self.traps[t as usize].top));
            let ll = ls.iter().copied().find(|&t| !ends_at(self.traps[t as usize].bottom));
            let ur = rs.iter().copied().find(|&t| !starts_at(self.traps[t as usize].top));
            let lr = rs.iter().copied().find(|&t| !starts_at(self.traps[t as usize].bottom));
            // under the shear, the wall above a vertex on the left side of the
            // box and the wall below one on the right side leave the box
            let (vx, vy) = (self.vertex(v).x, self.vertex(v).y);
            let has_upper = vy < self.bbox.max_y && vx > self.bbox.min_x;
            let has_lower = vy > self.bbox.min_y && vx < self.bbox.max_x;
            if has_upper {
                if let (Some(a), Some(b)) = (ul, ur) {
                    edges.push((a, b, NONE));
                }
            }
            if has_lower {
                if let (Some(a), Some(b)) = (ll, lr) {
                    if !(has_upper && ul == Some(a) && ur == Some(b)) {
                        edges.push((a, b, NONE));
                    }
                }
            }
        }
        for s in 0..self.pieces.len() {
            let key = |m: &TrapMap, t: &u32| {
                let v = m.vertex(m.traps[*t as usize].leftp);
                (v.x, v.y)
            };
            let mut up = std::mem::take(&mut above_of[s]);
            let mut down = std::mem::take(&mut below_of[s]);
            up.sort_by(|a, b| key(self, a).partial_cmp(&key(self, b)).unwrap());
            down.sort_by(|a, b| key(self, a).partial_cmp(&key(self, b)).unwrap());
            let (mut i, mut j) = (0, 0);
            while i < up.len() && j < down.len() {
                edges.push((down[j], up[i], s as u32));
                let (ru, rd) = (self.traps[up[i] as usize].rightp, self.traps[down[j] as usize].rightp);
                if ru == rd {
                    i += 1;
                    j += 1;
                } else if self.lex_lt(ru, rd) {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
        let nt = self.traps.len();
        let mut deg = vec![0u32; nt + 1];
        for &(a, b, _) in &edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut start = vec![0u32; nt + 1];
        for t in 0..nt {
            start[t + 1] = start[t] + deg[t];
        }
        let mut fill = start.clone();
        let mut adj = vec![Adjacent { trap: 0, piece: NONE, upward: false }; edges.len() * 2];
        for &(a, b, s) in &edges {
            // for piece edges `a` is below and `b` above
            adj[fill[a as usize] as usize] = Adjacent { trap: b, piece: s, upward: true };
            fill[a as usize] += 1;
            adj[fill[b as usize] as usize] = Adjacent { trap: a, piece: s, upward: false };
            fill[b as usize] += 1;
        }
        self.adj_start = start;
        self.adj = adj;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::regions::{boundary_curves, make_region, Beta, Variant};
    use rand::Rng;

    type Pair = ((f64, f64), (f64, f64));

    fn lune_curves(pairs: &[Pair], bbox: &BBox) -> Vec<CurveSegment> {
        let mut out = Vec::new();
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let mut x = Point::from_f64(a.0, a.1).unwrap();
            x.id = Some(2 * k);
            let mut y = Point::from_f64(b.0, b.1).unwrap();
            y.id = Some(2 * k + 1);
            let r = make_region(&x, &y, &Beta::int(3), Variant::LuneBased).unwrap();
            out.extend(boundary_curves(&r, bbox, k).unwrap());
        }
        out
    }

    fn check_against_linear(map: &TrapMap, samples: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bb = map.bbox;
        for _ in 0..samples {
            let x = rng.gen_range(bb.min_x..bb.max_x);
            let y = rng.gen_range(bb.min_y..bb.max_y);
            let loc = map.locate_xy(x, y);
            let lin = map.locate_linear(x, y);
            if !loc.near_pieces.is_empty() || loc.x_near {
                continue;
            }
            assert_eq!(lin, vec![loc.trap], "at ({x}, {y})");
        }
    }

    #[test]
    fn empty_map_is_one_trapezoid() {
        let map = TrapMap::build(&[], BBox::new(0.0, 0.0, 1.0, 1.0), 1).unwrap();
        assert_eq!(map.live_traps().count(), 1);
        assert_eq!(map.locate(0.5, 0.5).unwrap(), 0);
        assert_eq!(map.locate(2.0, 0.5), Err(Error::OutOfBounds));
    }

    #[test]
    fn single_lune_face_count() {
        let bbox = BBox::new(-10.0, -10.0, 10.0, 10.0);
        let cs = lune_curves(&[((0.0, 0.0), (2.0, 0.0))], &bbox);
        let map = TrapMap::build(&cs, bbox, 3).unwrap();
        // each vertex starts one trapezoid more than it has pieces leaving it
        assert_eq!(map.live_traps().count(), 1 + 4 + 4);
        check_against_linear(&map, 2000, 9);
    }

    #[test]
    fn random_lunes_agree_with_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let bbox = BBox::new(-2.0, -2.0, 3.0, 3.0);
        for round in 0..10 {
            let pairs: Vec<_> = (0..25)
                .map(|_| {
                    let a = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
                    let b = (a.0 + rng.gen_range(-0.2..0.2), a.1 + rng.gen_range(-0.2..0.2));
                    (a, b)
                })
                .collect();
            let cs = lune_curves(&pairs, &bbox);
            let map = TrapMap::build(&cs, bbox, round).unwrap();
            check_against_linear(&map, 3000, round + 100);
        }
    }

    #[test]
    fn strips_with_vertical_lines() {
        let bbox = BBox::new(-5.0, -5.0, 5.0, 5.0);
        let mut cs = Vec::new();
        for (k, (a, b)) in [((0, 0), (1, 0)), ((0, 0), (0, 1)), ((1, 1), (2, 2))].into_iter().enumerate() {
            let mut x = Point::from_ints(a.0, a.1);
            x.id = Some(2 * k);
            let mut y = Point::from_ints(b.0, b.1);
            y.id = Some(2 * k + 1);
            let r = make_region(&x, &y, &Beta::Infinity, Variant::LuneBased).unwrap();
            cs.extend(boundary_curves(&r, &bbox, k).unwrap());
        }
        let map = TrapMap::build(&cs, bbox, 5).unwrap();
        check_against_linear(&map, 3000, 6);
    }

    #[test]
    fn every_live_trapezoid_is_reachable_by_its_sample() {
        let bbox = BBox::new(-2.0, -2.0, 3.0, 3.0);
        let cs = lune_curves(&[((0.0, 0.0), (1.0, 0.2)), ((0.5, -0.1), (0.6, 0.9)), ((0.2, 0.5), (0.9, 0.4))], &bbox);
        let map = TrapMap::build(&cs, bbox, 11).unwrap();
        for t in map.live_traps() {
            let ((x, y), size) = map.sample(t);
            if size > 1e-6 {
                assert_eq!(map.locate_xy(x, y).trap, t);
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric() {
        let bbox = BBox::new(-2.0, -2.0, 3.0, 3.0);
        let cs = lune_curves(&[((0.0, 0.0), (1.0, 0.2)), ((0.5, -0.1), (0.6, 0.9))], &bbox);
        let map = TrapMap::build(&cs, bbox, 2).unwrap();
        for t in map.live_traps() {
            for a in map.neighbors(t) {
                assert!(map.traps[a.trap as usize].alive);
                let back = map.neighbors(a.trap).iter().any(|b| b.trap == t && b.piece == a.piece && b.upward != a.upward);
                assert!(back || a.piece == NONE);
            }
        }
    }
}
