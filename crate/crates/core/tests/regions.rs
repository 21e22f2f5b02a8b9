use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use betaskel::geometry::{side_of_circle, Circle};
use betaskel::regions::{boundary_curves, make_region, region_contains, BBox, CurveSegment};
use betaskel::{Beta, Closure, Coord, Point, Region, Variant};

fn rand_point(rng: &mut ChaCha8Rng, span: i64) -> Point {
    Point::new(
        Coord::from_ratio(rng.gen_range(-span..=span), rng.gen_range(1..=6)),
        Coord::from_ratio(rng.gen_range(-span..=span), rng.gen_range(1..=6)),
    )
}

fn rand_pair(rng: &mut ChaCha8Rng) -> (Point, Point) {
    loop {
        let (x, y) = (rand_point(rng, 6), rand_point(rng, 6));
        if !x.same_location(&y) {
            return (x, y);
        }
    }
}

#[test]
fn lune_membership_grows_with_beta() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut hits = 0;
    for _ in 0..10_000 {
        let (x, y) = rand_pair(&mut rng);
        let (num, den) = (rng.gen_range(10..60), 10);
        let b1 = Beta::finite(num, den).unwrap();
        let b2 = if rng.gen_bool(0.2) { Beta::Infinity } else { Beta::finite(num + rng.gen_range(1..40), den).unwrap() };
        let p = rand_point(&mut rng, 12);
        let r1 = make_region(&x, &y, &b1, Variant::LuneBased).unwrap();
        let r2 = make_region(&x, &y, &b2, Variant::LuneBased).unwrap();
        if region_contains(&r1, &p, Closure::Closed) {
            hits += 1;
            assert!(region_contains(&r2, &p, Closure::Closed), "{x:?} {y:?} {b1} {b2} {p:?}");
        }
    }
    assert!(hits > 500);
}

#[test]
fn regions_are_symmetric_in_their_endpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let cases = [
        (Beta::int(0), Variant::LuneBased),
        (Beta::finite(1, 2).unwrap(), Variant::LuneBased),
        (Beta::int(1), Variant::LuneBased),
        (Beta::finite(5, 2).unwrap(), Variant::LuneBased),
        (Beta::Infinity, Variant::LuneBased),
        (Beta::finite(3, 2).unwrap(), Variant::CircleBased),
        (Beta::Infinity, Variant::CircleBased),
    ];
    for _ in 0..300 {
        let (x, y) = rand_pair(&mut rng);
        for (beta, variant) in &cases {
            let a = make_region(&x, &y, beta, *variant).unwrap();
            let b = make_region(&y, &x, beta, *variant).unwrap();
            for _ in 0..5 {
                let p = rand_point(&mut rng, 8);
                for c in [Closure::Open, Closure::Closed] {
                    assert_eq!(region_contains(&a, &p, c), region_contains(&b, &p, c), "{beta} {variant}");
                }
            }
        }
    }
}

#[test]
fn endpoints_lie_on_the_boundary_for_beta_at_least_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let (x, y) = rand_pair(&mut rng);
        let beta =
            if rng.gen_bool(0.2) { Beta::Infinity } else { Beta::finite(rng.gen_range(20..100), 10).unwrap() };
        let r = make_region(&x, &y, &beta, Variant::LuneBased).unwrap();
        for p in [&x, &y] {
            assert!(!region_contains(&r, p, Closure::Open));
            assert!(region_contains(&r, p, Closure::Closed));
        }
    }
}

#[test]
fn beta_one_lune_is_the_gabriel_disc() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..200 {
        let (x, y) = rand_pair(&mut rng);
        let r = make_region(&x, &y, &Beta::int(1), Variant::LuneBased).unwrap();
        let mid = Point::new((&x.x + &y.x).half(), (&x.y + &y.y).half());
        let disc = Circle::new(mid, x.dist_sq(&y).half().half()).unwrap();
        for _ in 0..50 {
            let p = rand_point(&mut rng, 8);
            let side = side_of_circle(&p, &disc);
            assert_eq!(region_contains(&r, &p, Closure::Closed), side >= 0);
            assert_eq!(region_contains(&r, &p, Closure::Open), side > 0);
        }
    }
}

#[test]
fn spec_membership_examples() {
    let (x, y) = (Point::from_ints(0, 0), Point::from_ints(2, 0));
    let lune = make_region(&x, &y, &Beta::int(3), Variant::LuneBased).unwrap();
    assert!(region_contains(&lune, &Point::from_ints(1, 0), Closure::Open));
    assert!(!region_contains(&lune, &y, Closure::Open));
    assert!(region_contains(&lune, &y, Closure::Closed));
    let strip = make_region(&x, &y, &Beta::Infinity, Variant::LuneBased).unwrap();
    assert!(!region_contains(&strip, &Point::from_ints(0, 5), Closure::Open));
    assert!(region_contains(&strip, &Point::from_ints(0, 5), Closure::Closed));
}

#[test]
fn construction_errors() {
    let x = Point::from_ints(1, 1);
    assert!(make_region(&x, &x, &Beta::int(3), Variant::LuneBased).is_err());
    let y = Point::from_ints(2, 1);
    assert!(make_region(&x, &y, &Beta::finite(1, 2).unwrap(), Variant::CircleBased).is_err());
}

fn bbox() -> BBox {
    BBox::new(-40.0, -40.0, 40.0, 40.0)
}

#[test]
fn boundary_piece_counts() {
    let o = Point::from_ints(0, 0);
    let horizontal = make_region(&o, &Point::from_ints(2, 0), &Beta::int(3), Variant::LuneBased).unwrap();
    assert_eq!(boundary_curves_of(&horizontal).len(), 4);
    let vertical = make_region(&o, &Point::from_ints(0, 2), &Beta::int(3), Variant::LuneBased).unwrap();
    assert_eq!(boundary_curves_of(&vertical).len(), 2);
    let strip = make_region(&o, &Point::from_ints(2, 0), &Beta::Infinity, Variant::LuneBased).unwrap();
    let lines = boundary_curves_of(&strip);
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(CurveSegment::is_vertical));
    let tight = BBox::new(-1.0, -1.0, 3.0, 1.0);
    assert!(boundary_curves(&horizontal, &tight, 0).is_err());
}

fn boundary_curves_of(r: &Region) -> Vec<CurveSegment> {
    boundary_curves(r, &bbox(), 7).unwrap()
}

#[test]
fn boundary_pieces_close_up_and_orient_correctly() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for k in 0..1000 {
        let (x, y) = rand_pair(&mut rng);
        let beta = if k % 4 == 0 { Beta::Infinity } else { Beta::finite(rng.gen_range(21..80), 10).unwrap() };
        let r = make_region(&x, &y, &beta, Variant::LuneBased).unwrap();
        let pieces = boundary_curves_of(&r);
        assert!(pieces.iter().all(|c| c.owner == 7));
        for c in &pieces {
            assert!(c.left.lex_lt(&c.right));
        }
        if !beta.is_infinite() {
            // every endpoint is shared by exactly two pieces
            let ends: Vec<(f64, f64)> = pieces.iter().flat_map(|c| [(c.left.x, c.left.y), (c.right.x, c.right.y)]).collect();
            for &(ex, ey) in &ends {
                let same = ends.iter().filter(|&&(fx, fy)| (fx - ex).abs() < 1e-9 && (fy - ey).abs() < 1e-9).count();
                assert_eq!(same, 2, "lune {k}: endpoint ({ex}, {ey})");
            }
        }
        for _ in 0..10 {
            let (px, py) = (rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
            let p = Point::from_f64(px, py).unwrap();
            let spanning: Vec<&CurveSegment> =
                pieces.iter().filter(|c| !c.is_vertical() && c.left.x < px && px < c.right.x).collect();
            let mut above: Vec<&&CurveSegment> = spanning.iter().filter(|c| c.y_at(px) > py).collect();
            above.sort_by(|a, b| a.y_at(px).total_cmp(&b.y_at(px)));
            let margin = spanning.iter().map(|c| (c.y_at(px) - py).abs()).fold(f64::INFINITY, f64::min);
            let vmargin = pieces
                .iter()
                .filter(|c| c.is_vertical())
                .map(|c| (c.left.x - px).abs())
                .fold(f64::INFINITY, f64::min);
            // a steep clipped strip may leave through the top of the box above p
            let clipped = beta.is_infinite() && !pieces[0].is_vertical() && spanning.len() < 2;
            if margin < 1e-9 || vmargin < 1e-9 || clipped {
                continue;
            }
            let left_wall = pieces
                .iter()
                .filter(|c| c.is_vertical() && c.left.x < px)
                .max_by(|a, b| a.left.x.total_cmp(&b.left.x));
            let inside = match (above.first(), left_wall) {
                (Some(c), _) => c.inside_below,
                (None, Some(w)) if spanning.is_empty() => w.inside_below,
                _ => false,
            };
            assert_eq!(inside, region_contains(&r, &p, Closure::Open), "lune {k}, beta {beta}, p {p:?}");
        }
    }
}
