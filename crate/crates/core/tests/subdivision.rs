use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use betaskel::regions::{boundary_curves, make_region, region_contains, BBox};
use betaskel::subdivision::{dual_traverse_mark, face_memberships, locate_points, membership, TrapMap};
use betaskel::{Beta, Closure, Point, PointSet, Region, Variant};

fn bbox() -> BBox {
    BBox::new(-100.0, -100.0, 100.0, 100.0)
}

fn build(lunes: &[Region], seed: u64) -> TrapMap {
    let curves: Vec<_> = lunes.iter().enumerate().flat_map(|(l, r)| boundary_curves(r, &bbox(), l).unwrap()).collect();
    TrapMap::build(&curves, bbox(), seed).unwrap()
}

fn lune(set: &PointSet, i: usize, j: usize, beta: &Beta) -> Region {
    make_region(&set[i], &set[j], beta, Variant::LuneBased).unwrap()
}

fn set_of(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

#[test]
fn empty_map_locates_everything_in_the_box() {
    let map = build(&[], 1);
    assert_eq!(map.live_traps().count(), 1);
    let t = map.live_traps().next().unwrap();
    assert_eq!(map.locate(3.0, -2.5).unwrap(), t);
    assert!(map.locate(101.0, 0.0).is_err());
}

#[test]
fn two_disjoint_lunes() {
    let set = PointSet::from_ints(&[(-5, 0), (-3, 0), (3, 1), (5, 1)]);
    let beta = Beta::int(3);
    let lunes = vec![lune(&set, 0, 1, &beta), lune(&set, 2, 3, &beta)];
    let map = build(&lunes, 2);
    let seen: BTreeSet<BTreeSet<usize>> = face_memberships(&map, &lunes).into_iter().flatten().collect();
    let want: BTreeSet<BTreeSet<usize>> = [set_of(&[]), set_of(&[0]), set_of(&[1])].into_iter().collect();
    assert_eq!(seen, want);

    let endpoint_of = vec![(0, 1), (2, 3)];
    let run = |extra: &[(i64, i64)]| {
        let mut coords = vec![(-5, 0), (-3, 0), (3, 1), (5, 1)];
        coords.extend_from_slice(extra);
        let pts = PointSet::from_ints(&coords);
        let xy: Vec<_> = pts.iter().map(Point::approx).collect();
        let faces = locate_points(&map, &xy);
        dual_traverse_mark(&map, &lunes, &endpoint_of, Closure::Open, &pts, &faces, None)
    };
    assert_eq!(run(&[]), vec![false, false]);
    assert_eq!(run(&[(-4, 0)]), vec![true, false]);
    assert_eq!(run(&[(0, 8)]), vec![false, false]);
}

#[test]
fn point_in_two_overlapping_lunes_marks_both() {
    let set = PointSet::from_ints(&[(-1, 0), (1, 0), (0, -1), (0, 1)]);
    let beta = Beta::int(3);
    let lunes = vec![lune(&set, 0, 1, &beta), lune(&set, 2, 3, &beta)];
    let map = build(&lunes, 3);
    let t = map.locate(0.1, 0.05).unwrap();
    assert_eq!(membership(&map, t, &lunes), set_of(&[0, 1]));
    let pts = PointSet::from_ints(&[(-1, 0), (1, 0), (0, -1), (0, 1), (0, 0)]);
    let xy: Vec<_> = pts.iter().map(Point::approx).collect();
    let faces = locate_points(&map, &xy);
    let occ = dual_traverse_mark(&map, &lunes, &[(0, 1), (2, 3)], Closure::Open, &pts, &faces, None);
    assert_eq!(occ, vec![true, true]);
}

#[test]
fn locate_examples() {
    let set = PointSet::from_ints(&[(0, 0), (2, 1)]);
    let lunes = vec![lune(&set, 0, 1, &Beta::int(3))];
    let map = build(&lunes, 4);
    let t = map.locate(1.0, 0.5).unwrap();
    assert_eq!(membership(&map, t, &lunes), set_of(&[0]));
    let t = map.locate(8.0, -8.0).unwrap();
    assert!(membership(&map, t, &lunes).is_empty());
    for corner in [(-99.9, -99.9), (99.9, 99.9), (-99.9, 99.9), (99.9, -99.9)] {
        let t = map.locate(corner.0, corner.1).unwrap();
        assert!(membership(&map, t, &lunes).is_empty());
    }
}

#[test]
fn traversal_matches_direct_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for k in 0..500u64 {
        let n = rng.gen_range(4..=100);
        let pts = PointSet::new((0..n).map(|_| Point::from_f64(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)).unwrap()));
        let count = rng.gen_range(1..=20);
        let beta = [Beta::finite(21, 10).unwrap(), Beta::int(3), Beta::int(10), Beta::Infinity][k as usize % 4].clone();
        let endpoint_of: Vec<(usize, usize)> = (0..count)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                (i.min(j), i.max(j))
            })
            .collect();
        let lunes: Vec<Region> = endpoint_of.iter().map(|&(i, j)| lune(&pts, i, j, &beta)).collect();
        let map = build(&lunes, k);
        let xy: Vec<_> = pts.iter().map(Point::approx).collect();
        let faces = locate_points(&map, &xy);
        for closure in [Closure::Open, Closure::Closed] {
            let occ = dual_traverse_mark(&map, &lunes, &endpoint_of, closure, &pts, &faces, None);
            let direct: Vec<bool> = endpoint_of
                .iter()
                .zip(&lunes)
                .map(|(&(i, j), r)| (0..n).any(|q| q != i && q != j && region_contains(r, &pts[q], closure)))
                .collect();
            assert_eq!(occ, direct, "group {k}, {closure}");
        }
    }
}

#[test]
fn search_depth_stays_logarithmic() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for k in 0..50u64 {
        // about 50 lunes give about 200 pieces before crossings
        let pts = PointSet::new((0..100).map(|_| Point::from_f64(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)).unwrap()));
        let lunes: Vec<Region> = (0..50).map(|l| lune(&pts, 2 * l, 2 * l + 1, &Beta::int(3))).collect();
        let map = build(&lunes, k);
        let pieces = map.pieces.len() as f64;
        let total: u64 = (0..2000)
            .map(|_| map.locate_xy(rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)).depth as u64)
            .sum();
        let mean = total as f64 / 2000.0;
        worst = worst.max(mean / pieces.log2());
    }
    println!("mean search depth / log2(pieces), worst over 50 maps: {worst:.2}");
    assert!(worst < 8.0, "{worst}");
}
