//! Delaunay triangulation by randomized incremental insertion.
//!
//! Points are inserted in a seeded random order refined into Hilbert-sorted
//! rounds, located by walking from the most recent triangle and inserted with
//! the Bowyer–Watson cavity rule. The hull is closed off by ghost triangles
//! sharing a vertex at infinity, so no bounding super-triangle is needed.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{in_circle_raw, orient2d, Point, PointSet};

const GHOST: usize = usize::MAX;

/// One directed edge of a triangle; `next` walks the triangle counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub origin: usize,
    pub next: usize,
    pub twin: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    points: PointSet,
    triangles: Vec<[usize; 3]>,
    edges: Vec<(usize, usize)>,
    /// Zero-valued in-circle tests met during insertion (cocircular input).
    pub degenerate_ties: usize,
}

struct Mesh<'a> {
    pts: &'a [Point],
    verts: Vec<[usize; 3]>,
    nbrs: Vec<[usize; 3]>,
    alive: Vec<bool>,
    free: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    last: usize,
    ties: usize,
}

impl<'a> Mesh<'a> {
    fn alloc(&mut self, v: [usize; 3]) -> usize {
        if let Some(t) = self.free.pop() {
            self.verts[t] = v;
            self.nbrs[t] = [GHOST; 3];
            self.alive[t] = true;
            t
        } else {
            self.verts.push(v);
            self.nbrs.push([GHOST; 3]);
            self.alive.push(true);
            self.stamp.push(0);
            self.verts.len() - 1
        }
    }

    fn is_ghost(&self, t: usize) -> bool {
        self.verts[t].contains(&GHOST)
    }

    /// The real edge of a ghost triangle, oriented so that the outside lies to its left.
    fn ghost_edge(&self, t: usize) -> (usize, usize) {
        let v = self.verts[t];
        if v[0] == GHOST {
            (v[1], v[2])
        } else if v[1] == GHOST {
            (v[2], v[0])
        } else {
            (v[0], v[1])
        }
    }

    fn conflicts(&mut self, t: usize, p: usize) -> bool {
        let pts = self.pts;
        if self.is_ghost(t) {
            let (u, v) = self.ghost_edge(t);
            let o = orient2d(&pts[u], &pts[v], &pts[p]);
            if o != 0 {
                return o > 0;
            }
            strictly_between(&pts[u], &pts[v], &pts[p])
        } else {
            let [a, b, c] = self.verts[t];
            let s = in_circle_raw(&pts[a], &pts[b], &pts[c], &pts[p]);
            if s == 0 {
                self.ties += 1;
            }
            s > 0
        }
    }

    fn slot_of(&self, t: usize, a: usize, b: usize) -> usize {
        let v = self.verts[t];
        (0..3)
            .find(|&k| v[(k + 1) % 3] == a && v[(k + 2) % 3] == b)
            .expect("edge belongs to triangle")
    }

    /// A triangle in conflict with `p`, found by a visibility walk.
    fn locate(&mut self, p: usize) -> usize {
        let pts = self.pts;
        let mut t = self.last;
        let mut rot = 0usize;
        loop {
            if self.is_ghost(t) {
                return self.hull_conflict(t, p);
            }
            let v = self.verts[t];
            let mut moved = false;
            for i in 0..3 {
                let k = (i + rot) % 3;
                let (a, b) = (v[(k + 1) % 3], v[(k + 2) % 3]);
                if orient2d(&pts[a], &pts[b], &pts[p]) < 0 {
                    t = self.nbrs[t][k];
                    moved = true;
                    break;
                }
            }
            rot = rot.wrapping_add(1);
            if !moved {
                return t;
            }
        }
    }

    /// Walks around the hull from ghost `start` to a ghost that conflicts with `p`.
    fn hull_conflict(&mut self, start: usize, p: usize) -> usize {
        let mut cur = start;
        loop {
            if self.conflicts(cur, p) {
                return cur;
            }
            // next ghost: across the edge (v, GHOST)
            let (_, v) = self.ghost_edge(cur);
            let k = self.slot_of(cur, v, GHOST);
            cur = self.nbrs[cur][k];
            assert!(cur != start, "point outside the hull conflicts with some ghost triangle");
        }
    }

    fn insert(&mut self, p: usize) {
        let start = self.locate(p);
        self.epoch += 1;
        let epoch = self.epoch;
        let mut cavity = vec![start];
        self.stamp[start] = epoch;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for k in 0..3 {
                let nb = self.nbrs[t][k];
                if self.stamp[nb] != epoch && self.conflicts(nb, p) {
                    self.stamp[nb] = epoch;
                    cavity.push(nb);
                    stack.push(nb);
                }
            }
        }
        // boundary edges of the cavity, each with its outside neighbor
        let mut boundary = Vec::new();
        for &t in &cavity {
            for k in 0..3 {
                let nb = self.nbrs[t][k];
                if self.stamp[nb] != epoch {
                    let v = self.verts[t];
                    boundary.push((v[(k + 1) % 3], v[(k + 2) % 3], nb));
                }
            }
        }
        for &t in &cavity {
            self.alive[t] = false;
            self.free.push(t);
        }
        let mut by_start: HashMap<usize, usize> = HashMap::with_capacity(boundary.len());
        let mut created = Vec::with_capacity(boundary.len());
        for &(a, b, outside) in &boundary {
            let t = self.alloc([a, b, p]);
            self.nbrs[t][2] = outside;
            let k = self.slot_of(outside, b, a);
            self.nbrs[outside][k] = t;
            by_start.insert(a, t);
            created.push((t, a, b));
        }
        for &(t, a, b) in &created {
            // across (b, p): the new triangle starting at b; across (p, a): the one ending at a
            self.nbrs[t][0] = by_start[&b];
            debug_assert_eq!(self.verts[t][0], a);
        }
        for &(t, _, _) in &created {
            let nb = self.nbrs[t][0];
            self.nbrs[nb][1] = t;
        }
        if let Some(&(t, _, _)) = created.iter().find(|&&(t, _, _)| !self.is_ghost(t)) {
            self.last = t;
        }
    }
}

fn strictly_between(u: &Point, v: &Point, p: &Point) -> bool {
    let along = |a: &Point, b: &Point| (&p.x - &a.x) * (&b.x - &a.x) + (&p.y - &a.y) * (&b.y - &a.y);
    along(u, v).signum() > 0 && along(v, u).signum() > 0
}

fn hilbert_key(x: u32, y: u32, order: u32) -> u64 {
    let n = 1u64 << order;
    let (mut x, mut y) = (x as u64, y as u64);
    let mut d = 0u64;
    let mut s = n >> 1;
    while s > 0 {
        let rx = u64::from(x & s > 0);
        let ry = u64::from(y & s > 0);
        d += s * s * ((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

/// Seeded random order refined into rounds of doubling size, each sorted
/// along a Hilbert curve so consecutive insertions are spatially close.
pub(crate) fn insertion_order(points: &PointSet, seed: u64) -> Vec<usize> {
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let Some((x0, y0, x1, y1)) = points.extent() else { return order };
    let (w, h) = ((x1 - x0).max(1e-300), (y1 - y0).max(1e-300));
    let grid = |p: &Point| {
        let (x, y) = p.approx();
        let gx = (((x - x0) / w) * 65535.0).clamp(0.0, 65535.0) as u32;
        let gy = (((y - y0) / h) * 65535.0).clamp(0.0, 65535.0) as u32;
        hilbert_key(gx, gy, 16)
    };
    let mut end = n;
    while end > 0 {
        let begin = if end <= 64 { 0 } else { end / 2 };
        order[begin..end].sort_by_cached_key(|&i| grid(&points[i]));
        end = begin;
    }
    order
}

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Delaunay triangulation of `points` with the default insertion seed.
pub fn triangulate(points: &PointSet) -> Result<Triangulation> {
    triangulate_seeded(points, DEFAULT_SEED)
}

pub fn triangulate_seeded(points: &PointSet, seed: u64) -> Result<Triangulation> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    points.check_distinct()?;
    let order = insertion_order(points, seed);
    let pts = points.points();

    let a = order[0];
    let b = order[1];
    let Some(ci) = (2..n).find(|&i| orient2d(&pts[a], &pts[b], &pts[order[i]]) != 0) else {
        return Ok(collinear(points));
    };
    let c = order[ci];
    let (a, b) = if orient2d(&pts[a], &pts[b], &pts[c]) > 0 { (a, b) } else { (b, a) };

    let mut mesh = Mesh {
        pts,
        verts: Vec::with_capacity(2 * n + 4),
        nbrs: Vec::with_capacity(2 * n + 4),
        alive: Vec::new(),
        free: Vec::new(),
        stamp: Vec::new(),
        epoch: 0,
        last: 0,
        ties: 0,
    };
    let t = mesh.alloc([a, b, c]);
    let gab = mesh.alloc([b, a, GHOST]);
    let gbc = mesh.alloc([c, b, GHOST]);
    let gca = mesh.alloc([a, c, GHOST]);
    mesh.nbrs[t] = [gbc, gca, gab];
    // ghost (u, v, G): slot 0 across (v, G), slot 1 across (G, u), slot 2 the real triangle
    mesh.nbrs[gab] = [gca, gbc, t];
    mesh.nbrs[gbc] = [gab, gca, t];
    mesh.nbrs[gca] = [gbc, gab, t];
    mesh.last = t;

    for (i, &p) in order.iter().enumerate() {
        if i < 2 || i == ci {
            continue;
        }
        mesh.insert(p);
    }

    let triangles: Vec<[usize; 3]> = (0..mesh.verts.len())
        .filter(|&t| mesh.alive[t] && !mesh.is_ghost(t))
        .map(|t| mesh.verts[t])
        .collect();
    let mut tri = Triangulation { points: points.clone(), triangles, edges: Vec::new(), degenerate_ties: mesh.ties };
    tri.refresh_edges();
    Ok(tri)
}

fn collinear(points: &PointSet) -> Triangulation {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| {
        let (p, q) = (&points[i], &points[j]);
        (&p.x, &p.y).cmp(&(&q.x, &q.y))
    });
    let mut edges: Vec<(usize, usize)> = idx.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect();
    edges.sort_unstable();
    Triangulation { points: points.clone(), triangles: Vec::new(), edges, degenerate_ties: 0 }
}

impl Triangulation {
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    /// Counterclockwise triangles.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Undirected edges `(i, j)`, `i < j`, lexicographically sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_degenerate_chain(&self) -> bool {
        self.triangles.is_empty()
    }

    fn refresh_edges(&mut self) {
        if self.triangles.is_empty() {
            return;
        }
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]))))
            .collect();
        e.sort_unstable();
        e.dedup();
        self.edges = e;
    }

    /// Half-edge view: half-edge `3t + k` leaves vertex `k` of triangle `t`.
    pub fn half_edges(&self) -> Vec<HalfEdge> {
        let mut index: HashMap<(usize, usize), usize> = HashMap::with_capacity(self.triangles.len() * 3);
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                index.insert((tri[k], tri[(k + 1) % 3]), 3 * t + k);
            }
        }
        let mut out = Vec::with_capacity(self.triangles.len() * 3);
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                out.push(HalfEdge { origin: a, next: 3 * t + (k + 1) % 3, twin: index.get(&(b, a)).copied() });
            }
        }
        out
    }

    /// Replaces the diagonal `(i, j)` of the quadrilateral formed by its two
    /// triangles with the other diagonal. The result need not be Delaunay.
    pub fn flip(&mut self, i: usize, j: usize) -> Result<()> {
        let find = |a: usize, b: usize| {
            self.triangles.iter().enumerate().find_map(|(t, tri)| {
                (0..3).find(|&k| tri[k] == a && tri[(k + 1) % 3] == b).map(|k| (t, tri[(k + 2) % 3]))
            })
        };
        let (Some((t1, c)), Some((t2, d))) = (find(i, j), find(j, i)) else {
            return Err(Error::Precondition(format!("({i}, {j}) is not an interior edge")));
        };
        let pts = self.points.points();
        if orient2d(&pts[c], &pts[d], &pts[j]) <= 0 || orient2d(&pts[d], &pts[c], &pts[i]) <= 0 {
            return Err(Error::Precondition("quadrilateral is not strictly convex".into()));
        }
        self.triangles[t1] = [c, d, j];
        self.triangles[t2] = [d, c, i];
        self.refresh_edges();
        Ok(())
    }

    /// Checks structure, convex hull, Euler counts and the empty-circumcircle
    /// property exactly.
    pub fn validate(&self) -> bool {
        let pts = self.points.points();
        let n = pts.len();
        if n < 2 {
            return false;
        }
        if self.triangles.is_empty() {
            let expected = collinear(&self.points).edges;
            let (a, b) = (&pts[0], &pts[1]);
            return pts.iter().all(|p| orient2d(a, b, p) == 0) && self.edges == expected;
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut used = vec![false; n];
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= n) || orient2d(&pts[tri[0]], &pts[tri[1]], &pts[tri[2]]) <= 0 {
                return false;
            }
            for k in 0..3 {
                used[tri[k]] = true;
                if directed.insert((tri[k], tri[(k + 1) % 3]), t).is_some() {
                    return false;
                }
            }
        }
        if !used.iter().all(|&u| u) {
            return false;
        }
        // hull edges have no twin; every point must be on their inner side
        let hull: Vec<(usize, usize)> = directed.keys().filter(|&&(a, b)| !directed.contains_key(&(b, a))).copied().collect();
        for &(a, b) in &hull {
            if pts.iter().any(|p| orient2d(&pts[a], &pts[b], p) < 0) {
                return false;
            }
        }
        let e = self.edges.len();
        if self.triangles.len() + n != e + 1 || (n >= 3 && e > 3 * n - 6) {
            return false;
        }
        self.triangles.iter().all(|&[a, b, c]| {
            pts.iter()
                .enumerate()
                .all(|(i, p)| i == a || i == b || i == c || in_circle_raw(&pts[a], &pts[b], &pts[c], p) <= 0)
        })
    }
}
