//! Depth-first walk over the faces of a [`TrapMap`] marking occupied lunes.

use std::collections::{BTreeSet, HashSet};

use crate::geometry::{Point, PointSet};
use crate::regions::{region_contains, Closure, Region};

use super::trapmap::{TrapMap, NONE};

/// Occupied flags plus the list of entered, still unoccupied lunes.
#[derive(Clone, Debug)]
pub struct LuneTable {
    occupied: Vec<bool>,
    in_list: Vec<bool>,
    prev: Vec<u32>,
    next: Vec<u32>,
    head: u32,
}

impl LuneTable {
    pub fn new(m: usize) -> LuneTable {
        LuneTable {
            occupied: vec![false; m],
            in_list: vec![false; m],
            prev: vec![NONE; m],
            next: vec![NONE; m],
            head: NONE,
        }
    }

    pub fn is_occupied(&self, l: usize) -> bool {
        self.occupied[l]
    }

    pub fn is_active(&self, l: usize) -> bool {
        self.in_list[l]
    }

    /// Adds `l` to the active list unless it is occupied or already there.
    pub fn enter(&mut self, l: usize) {
        if self.occupied[l] || self.in_list[l] {
            return;
        }
        self.in_list[l] = true;
        self.prev[l] = NONE;
        self.next[l] = self.head;
        if self.head != NONE {
            self.prev[self.head as usize] = l as u32;
        }
        self.head = l as u32;
    }

    pub fn leave(&mut self, l: usize) {
        if !self.in_list[l] {
            return;
        }
        self.in_list[l] = false;
        let (p, n) = (self.prev[l], self.next[l]);
        if p == NONE {
            self.head = n;
        } else {
            self.next[p as usize] = n;
        }
        if n != NONE {
            self.prev[n as usize] = p;
        }
    }

    pub fn mark(&mut self, l: usize) {
        self.leave(l);
        self.occupied[l] = true;
    }

    pub fn has_active(&self) -> bool {
        self.head != NONE
    }

    pub fn active(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut c = self.head;
        while c != NONE {
            out.push(c as usize);
            c = self.next[c as usize];
        }
        out
    }

    pub fn into_occupied(self) -> Vec<bool> {
        self.occupied
    }
}

/// Input points bucketed by trapezoid, plus those located too close to call.
#[derive(Clone, Debug, Default)]
pub struct FacePoints {
    start: Vec<u32>,
    items: Vec<u32>,
    /// `(point, pieces passed within tolerance, near an approximate wall)`.
    pub near: Vec<(u32, Vec<u32>, bool)>,
}

impl FacePoints {
    pub fn in_face(&self, t: u32) -> &[u32] {
        if self.start.is_empty() {
            return &[];
        }
        let (a, b) = (self.start[t as usize], self.start[t as usize + 1]);
        &self.items[a as usize..b as usize]
    }
}

/// Locates every shadow point in `map` and buckets the results.
pub fn locate_points(map: &TrapMap, shadows: &[(f64, f64)]) -> FacePoints {
    let nt = map.traps.len();
    let mut trap_of = Vec::with_capacity(shadows.len());
    let mut near = Vec::new();
    for (k, &(x, y)) in shadows.iter().enumerate() {
        let loc = map.locate_xy(x, y);
        if loc.x_near || !loc.near_pieces.is_empty() {
            near.push((k as u32, loc.near_pieces, loc.x_near));
        }
        trap_of.push(loc.trap);
    }
    let mut start = vec![0u32; nt + 1];
    for &t in &trap_of {
        start[t as usize + 1] += 1;
    }
    for t in 0..nt {
        start[t + 1] += start[t];
    }
    let mut fill = start.clone();
    let mut items = vec![0u32; shadows.len()];
    for (k, &t) in trap_of.iter().enumerate() {
        items[fill[t as usize] as usize] = k as u32;
        fill[t as usize] += 1;
    }
    FacePoints { start, items, near }
}

/// Live trapezoid with the roomiest interior sample.
fn seed_face(map: &TrapMap) -> (u32, (f64, f64)) {
    let mut best = (0u32, (0.0, 0.0), f64::NEG_INFINITY);
    for t in map.live_traps() {
        let (s, size) = map.sample(t);
        if size > best.2 {
            best = (t, s, size);
        }
    }
    (best.0, best.1)
}

fn exact_membership(regions: &[Region], at: (f64, f64)) -> Vec<usize> {
    let p = Point::from_f64(at.0, at.1).expect("finite sample");
    (0..regions.len()).filter(|&l| region_contains(&regions[l], &p, Closure::Open)).collect()
}

/// Owner sets of every live face, found by toggling across pieces from a
/// seed face whose membership is computed exactly. Dead ids map to `None`.
pub fn face_memberships(map: &TrapMap, regions: &[Region]) -> Vec<Option<BTreeSet<usize>>> {
    let mut out: Vec<Option<BTreeSet<usize>>> = vec![None; map.traps.len()];
    let (seed, at) = seed_face(map);
    out[seed as usize] = Some(exact_membership(regions, at).into_iter().collect());
    let mut stack = vec![seed];
    while let Some(t) = stack.pop() {
        let cur = out[t as usize].clone().unwrap();
        for a in map.neighbors(t) {
            if out[a.trap as usize].is_some() {
                continue;
            }
            let mut next = cur.clone();
            if a.piece != NONE {
                for &(o, inside_below) in &map.pieces[a.piece as usize].owners {
                    if a.upward != inside_below {
                        next.insert(o);
                    } else {
                        next.remove(&o);
                    }
                }
            }
            out[a.trap as usize] = Some(next);
            stack.push(a.trap);
        }
    }
    out
}

/// Regions containing the interior of face `t`.
pub fn membership(map: &TrapMap, t: u32, regions: &[Region]) -> BTreeSet<usize> {
    face_memberships(map, regions).swap_remove(t as usize).unwrap_or_default()
}

fn admissible(k: u32, l: usize, endpoint_of: &[(usize, usize)]) -> bool {
    let (i, j) = endpoint_of[l];
    k as usize != i && k as usize != j
}

/// Per-face callback for [`dual_traverse_mark`].
pub type FaceHook<'a> = &'a mut dyn FnMut(u32, &LuneTable);

/// Marks every lune that contains an input point other than its endpoints.
///
/// `hook` is called after each face is processed with the face id and the
/// table state.
pub fn dual_traverse_mark(
    map: &TrapMap,
    lunes: &[Region],
    endpoint_of: &[(usize, usize)],
    closure: Closure,
    points: &PointSet,
    faces: &FacePoints,
    mut hook: Option<FaceHook<'_>>,
) -> Vec<bool> {
    let mut table = LuneTable::new(lunes.len());
    if lunes.is_empty() {
        return Vec::new();
    }
    let (seed, at) = seed_face(map);
    for l in exact_membership(lunes, at) {
        table.enter(l);
    }

    let process = |t: u32, table: &mut LuneTable| {
        let pts = faces.in_face(t);
        if pts.is_empty() || !table.has_active() {
            return;
        }
        for l in table.active() {
            let hit = pts
                .iter()
                .any(|&k| admissible(k, l, endpoint_of) && region_contains(&lunes[l], &points[k as usize], closure));
            if hit {
                table.mark(l);
            }
        }
    };
    let cross = |piece: u32, upward: bool, table: &mut LuneTable| {
        if piece == NONE {
            return;
        }
        for &(o, inside_below) in &map.pieces[piece as usize].owners {
            if upward != inside_below {
                table.enter(o);
            } else {
                table.leave(o);
            }
        }
    };

    let mut visited = vec![false; map.traps.len()];
    visited[seed as usize] = true;
    process(seed, &mut table);
    if let Some(h) = hook.as_mut() {
        h(seed, &table);
    }
    // (face, next neighbor index, piece crossed to get here, direction)
    let mut stack: Vec<(u32, usize, u32, bool)> = vec![(seed, 0, NONE, false)];
    while let Some(top) = stack.last_mut() {
        let nb = map.neighbors(top.0);
        if top.1 < nb.len() {
            let a = nb[top.1];
            top.1 += 1;
            if visited[a.trap as usize] {
                continue;
            }
            visited[a.trap as usize] = true;
            cross(a.piece, a.upward, &mut table);
            process(a.trap, &mut table);
            if let Some(h) = hook.as_mut() {
                h(a.trap, &table);
            }
            stack.push((a.trap, 0, a.piece, a.upward));
        } else {
            let (_, _, piece, upward) = stack.pop().unwrap();
            cross(piece, !upward, &mut table);
        }
    }

    // points whose location was too close to call
    for (k, pieces, x_near) in &faces.near {
        let cands: Vec<usize> = if *x_near {
            (0..lunes.len()).collect()
        } else {
            let set: HashSet<usize> =
                pieces.iter().flat_map(|&s| map.pieces[s as usize].owners.iter().map(|&(o, _)| o)).collect();
            set.into_iter().collect()
        };
        for l in cands {
            if !table.is_occupied(l) && admissible(*k, l, endpoint_of) && region_contains(&lunes[l], &points[*k as usize], closure) {
                table.mark(l);
            }
        }
    }

    let unvisited: Vec<u32> = map.live_traps().filter(|&t| !visited[t as usize] && !faces.in_face(t).is_empty()).collect();
    if !unvisited.is_empty() {
        log::warn!("{} faces with points unreachable from the seed; checking them directly", unvisited.len());
        for t in unvisited {
            for &k in faces.in_face(t) {
                for (l, lune) in lunes.iter().enumerate() {
                    if !table.is_occupied(l) && admissible(k, l, endpoint_of) && region_contains(lune, &points[k as usize], closure) {
                        table.mark(l);
                    }
                }
            }
        }
    }
    table.into_occupied()
}
