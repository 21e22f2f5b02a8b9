//! β-skeleton algorithms: all-pairs brute force, Delaunay filtering, and the
//! batched subdivision algorithm.

use std::time::Instant;

use rayon::prelude::*;

use crate::delaunay::{triangulate_seeded, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::pointgen::all_exact_doubles;
use crate::regions::{boundary_curves, make_region, region_contains, BBox, Beta, Closure, Region, Variant};
use crate::subdivision::{dual_traverse_mark, locate_points, TrapMap};

/// Counters and per-phase wall times in seconds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    pub algorithm: String,
    pub beta: String,
    pub closure: String,
    pub group_size: usize,
    pub group_count: usize,
    pub dt_edges: usize,
    pub pieces: usize,
    pub faces: usize,
    pub near_points: usize,
    pub post_pass_checks: usize,
    pub dt_secs: f64,
    pub build_secs: f64,
    pub locate_secs: f64,
    pub traverse_secs: f64,
    pub total_secs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkeletonGraph {
    pub n: usize,
    /// Sorted, `i < j`.
    pub edges: Vec<(usize, usize)>,
    pub stats: Stats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgoConfig {
    pub group_size_override: Option<usize>,
    pub parallel_groups: bool,
    pub paranoid_verify: bool,
    pub rng_seed: u64,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig { group_size_override: None, parallel_groups: false, paranoid_verify: false, rng_seed: DEFAULT_SEED }
    }
}

fn check_input(points: &PointSet) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: points.len() });
    }
    points.check_distinct()
}

fn require_above_two(beta: &Beta, what: &str) -> Result<()> {
    if !beta.exceeds(2) {
        return Err(Error::UnsupportedRange(format!("{what} requires beta > 2, got {beta}")));
    }
    Ok(())
}

fn stats_for(algorithm: &str, beta: &Beta, closure: Closure) -> Stats {
    Stats { algorithm: algorithm.into(), beta: beta.to_string(), closure: closure.to_string(), ..Stats::default() }
}

/// Every pair whose region holds no other input point. Cubic time.
pub fn brute_force(points: &PointSet, beta: &Beta, variant: Variant, closure: Closure) -> Result<SkeletonGraph> {
    check_input(points)?;
    let t0 = Instant::now();
    let n = points.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let r = make_region(&points[i], &points[j], beta, variant)?;
            let blocked = (0..n).any(|k| k != i && k != j && region_contains(&r, &points[k], closure));
            if !blocked {
                edges.push((i, j));
            }
        }
    }
    let mut stats = stats_for("bruteforce", beta, closure);
    stats.total_secs = t0.elapsed().as_secs_f64();
    Ok(SkeletonGraph { n, edges, stats })
}

/// Axis box of a lune or of the part of the plane a strip needs.
fn region_box(r: &Region) -> Option<BBox> {
    let discs = r.approx_discs();
    if discs.is_empty() {
        return None;
    }
    let mut bb = BBox::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::INFINITY);
    for (cx, cy, rad) in discs {
        bb = BBox::new(bb.min_x.max(cx - rad), bb.min_y.max(cy - rad), bb.max_x.min(cx + rad), bb.max_y.min(cy + rad));
    }
    Some(bb)
}

fn shadows(points: &PointSet) -> Vec<(f64, f64)> {
    points.iter().map(|p| p.approx()).collect()
}

fn lune_is_empty(points: &PointSet, xy: &[(f64, f64)], i: usize, j: usize, beta: &Beta, closure: Closure) -> bool {
    let r = make_region(&points[i], &points[j], beta, Variant::LuneBased).expect("distinct points");
    // shadow boxes only discard points far outside; membership is decided exactly
    let bb = region_box(&r).map(|b| b.inflate(1e-6, 0.0));
    !xy.iter().enumerate().any(|(k, &(x, y))| {
        k != i
            && k != j
            && bb.is_none_or(|b| x >= b.min_x && x <= b.max_x && y >= b.min_y && y <= b.max_y)
            && region_contains(&r, &points[k], closure)
    })
}

/// Delaunay edges whose lune is empty, each tested against every point.
pub fn dt_filter(points: &PointSet, beta: &Beta, closure: Closure) -> Result<SkeletonGraph> {
    dt_filter_impl(points, beta, closure, false)
}

/// [`dt_filter`] with the edges spread over the rayon pool.
pub fn dt_filter_parallel(points: &PointSet, beta: &Beta, closure: Closure) -> Result<SkeletonGraph> {
    dt_filter_impl(points, beta, closure, true)
}

fn dt_filter_impl(points: &PointSet, beta: &Beta, closure: Closure, parallel: bool) -> Result<SkeletonGraph> {
    require_above_two(beta, "dt-filter")?;
    check_input(points)?;
    let t0 = Instant::now();
    let dt = triangulate_seeded(points, DEFAULT_SEED)?;
    let dt_secs = t0.elapsed().as_secs_f64();
    let xy = shadows(points);
    let keep = |&&(i, j): &&(usize, usize)| lune_is_empty(points, &xy, i, j, beta, closure);
    let edges: Vec<(usize, usize)> = if parallel {
        dt.edges().par_iter().filter(keep).copied().collect()
    } else {
        dt.edges().iter().filter(keep).copied().collect()
    };
    let mut stats = stats_for("dt-filter", beta, closure);
    stats.dt_edges = dt.edges().len();
    stats.dt_secs = dt_secs;
    stats.total_secs = t0.elapsed().as_secs_f64();
    Ok(SkeletonGraph { n: points.len(), edges, stats })
}

/// Group size balancing subdivision size against the number of groups.
pub fn choose_group_size(n: usize) -> usize {
    let n = n.max(1) as f64;
    let m = (n * n.max(2.0).log2()).sqrt().ceil();
    (m as usize).max(1)
}

/// Uniform bucket grid over point shadows, for the closed-mode boundary pass.
struct PointGrid {
    min_x: f64,
    min_y: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl PointGrid {
    fn new(xy: &[(f64, f64)]) -> PointGrid {
        let mut bb = BBox::empty();
        for &(x, y) in xy {
            bb.include(x, y);
        }
        let side = (xy.len() as f64).sqrt().ceil().max(1.0);
        let cell = (bb.scale() / side).max(1e-300);
        let nx = ((bb.max_x - bb.min_x) / cell) as usize + 1;
        let ny = ((bb.max_y - bb.min_y) / cell) as usize + 1;
        let mut cells = vec![Vec::new(); nx * ny];
        let mut g = PointGrid { min_x: bb.min_x, min_y: bb.min_y, cell, nx, ny, cells: Vec::new() };
        for (k, &(x, y)) in xy.iter().enumerate() {
            let (cx, cy) = g.cell_of(x, y);
            cells[cy * nx + cx].push(k as u32);
        }
        g.cells = cells;
        g
    }

    fn cell_of(&self, x: f64, y: f64) -> (usize, usize) {
        let cx = ((x - self.min_x) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let cy = ((y - self.min_y) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (cx, cy)
    }

    fn in_box(&self, b: &BBox, out: &mut Vec<u32>) {
        let (x0, y0) = self.cell_of(b.min_x, b.min_y);
        let (x1, y1) = self.cell_of(b.max_x, b.max_y);
        for cy in y0..=y1 {
            for cx in x0..=x1 {
                out.extend_from_slice(&self.cells[cy * self.nx + cx]);
            }
        }
    }

    /// Points in cells within one cell of the segment `a`–`b`.
    fn along(&self, a: (f64, f64), b: (f64, f64), out: &mut Vec<u32>) {
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        let steps = (2.0 * len / self.cell).ceil().max(1.0) as usize;
        let mut seen = std::collections::HashSet::new();
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let (cx, cy) = self.cell_of(a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    let (x, y) = (cx as i64 + dx, cy as i64 + dy);
                    if x >= 0 && y >= 0 && (x as usize) < self.nx && (y as usize) < self.ny && seen.insert((x, y)) {
                        out.extend_from_slice(&self.cells[y as usize * self.nx + x as usize]);
                    }
                }
            }
        }
    }
}

/// Points that may lie on the boundary of `r`, judged on shadows.
fn boundary_candidates(r: &Region, grid: &PointGrid, xy: &[(f64, f64)], span: &BBox, tol: f64) -> Vec<u32> {
    let mut cand = Vec::new();
    match r {
        Region::Strip { x, y } => {
            let (a, b) = (x.approx(), y.approx());
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len = dx.hypot(dy);
            let reach = span.scale() * 2.0 / len;
            for p in [a, b] {
                // perpendicular through p, long enough to cross every point
                let (u, v) = (-dy * reach, dx * reach);
                grid.along((p.0 - u, p.1 - v), (p.0 + u, p.1 + v), &mut cand);
            }
            cand.retain(|&k| {
                let (px, py) = xy[k as usize];
                [a, b].iter().any(|&(qx, qy)| (((px - qx) * dx + (py - qy) * dy) / len).abs() <= tol)
            });
        }
        _ => {
            if let Some(bb) = region_box(r) {
                grid.in_box(&bb.inflate(0.0, tol), &mut cand);
            }
            let discs = r.approx_discs();
            cand.retain(|&k| {
                let (px, py) = xy[k as usize];
                discs.iter().any(|&(cx, cy, rad)| ((px - cx).hypot(py - cy) - rad).abs() <= tol)
            });
        }
    }
    cand.sort_unstable();
    cand.dedup();
    cand
}

#[derive(Default)]
struct GroupOutcome {
    survivors: Vec<(usize, usize)>,
    pieces: usize,
    faces: usize,
    near_points: usize,
    post_pass_checks: usize,
    build_secs: f64,
    locate_secs: f64,
    traverse_secs: f64,
}

struct Shared<'a> {
    points: &'a PointSet,
    xy: &'a [(f64, f64)],
    beta: &'a Beta,
    closure: Closure,
    exact_pins: bool,
    extent: BBox,
    grid: Option<&'a PointGrid>,
    seed: u64,
}

fn run_group(sh: &Shared<'_>, gi: usize, edges: &[(usize, usize)]) -> Result<GroupOutcome> {
    let t0 = Instant::now();
    let mut lunes = Vec::with_capacity(edges.len());
    let mut bb = sh.extent;
    for &(i, j) in edges {
        let r = make_region(&sh.points[i], &sh.points[j], sh.beta, Variant::LuneBased)?;
        if let Some(b) = region_box(&r) {
            bb = bb.union(&b);
        }
        lunes.push(r);
    }
    let bb = bb.inflate(0.0, 0.1 * bb.scale());
    let mut curves = Vec::with_capacity(lunes.len() * 4);
    for (l, r) in lunes.iter().enumerate() {
        curves.extend(boundary_curves(r, &bb, l)?);
    }
    let mut map = TrapMap::build(&curves, bb, sh.seed ^ (gi as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))?;
    map.exact_pins = sh.exact_pins;
    let t1 = Instant::now();
    let faces = locate_points(&map, sh.xy);
    let t2 = Instant::now();
    let occupied = dual_traverse_mark(&map, &lunes, edges, sh.closure, sh.points, &faces, None);
    let mut out = GroupOutcome {
        pieces: map.pieces.len(),
        faces: map.live_traps().count(),
        near_points: faces.near.len(),
        ..GroupOutcome::default()
    };
    drop(faces);
    drop(map);
    for (l, &(i, j)) in edges.iter().enumerate() {
        if occupied[l] {
            continue;
        }
        if let Some(grid) = sh.grid {
            let tol = 1e-8 * bb.scale();
            let cand = boundary_candidates(&lunes[l], grid, sh.xy, &sh.extent, tol);
            out.post_pass_checks += cand.len();
            let hit = cand.iter().any(|&k| {
                let k = k as usize;
                k != i && k != j && region_contains(&lunes[l], &sh.points[k], Closure::Closed)
            });
            if hit {
                continue;
            }
        }
        out.survivors.push((i, j));
    }
    let t3 = Instant::now();
    out.build_secs = (t1 - t0).as_secs_f64();
    out.locate_secs = (t2 - t1).as_secs_f64();
    out.traverse_secs = (t3 - t2).as_secs_f64();
    Ok(out)
}

/// Batched subdivision algorithm. Output equals [`dt_filter`].
pub fn batched(points: &PointSet, beta: &Beta, closure: Closure, cfg: &AlgoConfig) -> Result<SkeletonGraph> {
    require_above_two(beta, "batched")?;
    check_input(points)?;
    if cfg.group_size_override == Some(0) {
        return Err(Error::Precondition("group size must be at least 1".into()));
    }
    let t0 = Instant::now();
    let dt = triangulate_seeded(points, cfg.rng_seed)?;
    let dt_secs = t0.elapsed().as_secs_f64();
    let n = points.len();
    let m = cfg.group_size_override.unwrap_or_else(|| choose_group_size(n));
    let xy = shadows(points);
    let mut extent = BBox::empty();
    for &(x, y) in &xy {
        extent.include(x, y);
    }
    let grid = (closure == Closure::Closed).then(|| PointGrid::new(&xy));
    let shared = Shared {
        points,
        xy: &xy,
        beta,
        closure,
        exact_pins: all_exact_doubles(points),
        extent,
        grid: grid.as_ref(),
        seed: cfg.rng_seed,
    };
    let groups: Vec<&[(usize, usize)]> = dt.edges().chunks(m).collect();
    log::debug!("batched: n={n} dt_edges={} m={m} groups={}", dt.edges().len(), groups.len());
    let outcomes: Vec<GroupOutcome> = if cfg.parallel_groups {
        groups.par_iter().enumerate().map(|(gi, g)| run_group(&shared, gi, g)).collect::<Result<_>>()?
    } else {
        groups.iter().enumerate().map(|(gi, g)| run_group(&shared, gi, g)).collect::<Result<_>>()?
    };

    let mut stats = stats_for("batched", beta, closure);
    stats.group_size = m;
    stats.group_count = groups.len();
    stats.dt_edges = dt.edges().len();
    stats.dt_secs = dt_secs;
    let mut edges = Vec::new();
    for o in outcomes {
        edges.extend(o.survivors);
        stats.pieces += o.pieces;
        stats.faces += o.faces;
        stats.near_points += o.near_points;
        stats.post_pass_checks += o.post_pass_checks;
        stats.build_secs += o.build_secs;
        stats.locate_secs += o.locate_secs;
        stats.traverse_secs += o.traverse_secs;
    }
    edges.sort_unstable();
    stats.total_secs = t0.elapsed().as_secs_f64();
    log::debug!(
        "batched: dt {:.3}s build {:.3}s locate {:.3}s traverse {:.3}s",
        stats.dt_secs,
        stats.build_secs,
        stats.locate_secs,
        stats.traverse_secs
    );

    if cfg.paranoid_verify {
        let check = dt_filter(points, beta, closure)?;
        if check.edges != edges {
            let first = first_difference(&edges, &check.edges);
            return Err(Error::Mismatch(format!("batched disagrees with dt-filter at edge {first:?}")));
        }
    }
    Ok(SkeletonGraph { n, edges, stats })
}

/// First edge present in exactly one of two sorted lists.
pub fn first_difference(a: &[(usize, usize)], b: &[(usize, usize)]) -> Option<(usize, usize)> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => return Some(a[i]),
            std::cmp::Ordering::Greater => return Some(b[j]),
        }
    }
    a.get(i).or(b.get(j)).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointgen::uniform;

    fn square() -> PointSet {
        PointSet::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    #[test]
    fn group_size_formula() {
        assert_eq!(choose_group_size(1024), 102);
        assert_eq!(choose_group_size(2), 2);
        assert_eq!(choose_group_size(1), 1);
    }

    #[test]
    fn square_at_infinity() {
        let want = vec![(0, 1), (0, 3), (1, 2), (2, 3)];
        let bf = brute_force(&square(), &Beta::Infinity, Variant::LuneBased, Closure::Open).unwrap();
        assert_eq!(bf.edges, want);
        assert_eq!(dt_filter(&square(), &Beta::Infinity, Closure::Open).unwrap().edges, want);
        let b = batched(&square(), &Beta::Infinity, Closure::Open, &AlgoConfig::default()).unwrap();
        assert_eq!(b.edges, want);
    }

    #[test]
    fn square_just_above_two() {
        let beta = Beta::finite(21, 10).unwrap();
        let want = vec![(0, 1), (0, 3), (1, 2), (2, 3)];
        assert_eq!(dt_filter(&square(), &beta, Closure::Open).unwrap().edges, want);
        assert_eq!(batched(&square(), &beta, Closure::Open, &AlgoConfig::default()).unwrap().edges, want);
    }

    #[test]
    fn two_points_one_group() {
        let p = PointSet::from_ints(&[(0, 0), (3, 1)]);
        let g = batched(&p, &Beta::int(3), Closure::Open, &AlgoConfig::default()).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(g.stats.group_count, 1);
        assert_eq!(g.stats.group_size, 2);
    }

    #[test]
    fn collinear_path() {
        let p = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);
        let want = vec![(0, 1), (1, 2), (2, 3), (3, 4)];
        assert_eq!(dt_filter(&p, &Beta::int(3), Closure::Open).unwrap().edges, want);
        assert_eq!(batched(&p, &Beta::int(3), Closure::Closed, &AlgoConfig::default()).unwrap().edges, want);
    }

    #[test]
    fn unsupported_ranges() {
        assert!(matches!(batched(&square(), &Beta::int(2), Closure::Open, &AlgoConfig::default()), Err(Error::UnsupportedRange(_))));
        assert!(matches!(dt_filter(&square(), &Beta::int(1), Closure::Open), Err(Error::UnsupportedRange(_))));
        let dup = PointSet::from_ints(&[(0, 0), (1, 0), (0, 0)]);
        assert!(matches!(batched(&dup, &Beta::int(3), Closure::Open, &AlgoConfig::default()), Err(Error::DuplicatePoint { .. })));
    }

    #[test]
    fn sixty_four_points_match_dt_filter() {
        let p = uniform(64, 42);
        for closure in [Closure::Open, Closure::Closed] {
            let want = dt_filter(&p, &Beta::int(3), closure).unwrap().edges;
            let cfg = AlgoConfig { paranoid_verify: true, ..AlgoConfig::default() };
            assert_eq!(batched(&p, &Beta::int(3), closure, &cfg).unwrap().edges, want);
        }
    }

    #[test]
    fn first_difference_finds_the_odd_edge() {
        assert_eq!(first_difference(&[(0, 1), (1, 2)], &[(0, 1), (1, 3)]), Some((1, 2)));
        assert_eq!(first_difference(&[(0, 1)], &[(0, 1)]), None);
        assert_eq!(first_difference(&[(0, 1)], &[(0, 1), (2, 3)]), Some((2, 3)));
    }
}
