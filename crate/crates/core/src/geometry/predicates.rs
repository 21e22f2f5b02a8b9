//! Exact sign predicates with a floating-point filter.
//!
//! Every predicate first evaluates its determinant on the double shadows of
//! the rational coordinates. The error bound covers both the rounding of the
//! shadows themselves and the rounding of the evaluation, so a filtered
//! result is only returned when its sign is certain. Otherwise the
//! determinant is recomputed with rational arithmetic.

use num_traits::Signed;

use crate::error::{Error, Result};

use super::coord::Coord;
use super::point::{Circle, Point};

const EPS: f64 = f64::EPSILON * 0.5;
// Generous multiples of the unit roundoff; see module docs.
const ORIENT_BOUND: f64 = 16.0 * EPS;
const INCIRCLE_BOUND: f64 = 48.0 * EPS;
const SIDE_BOUND: f64 = 16.0 * EPS;

fn sign_f64(v: f64) -> i32 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign of the signed area of `pqr`: +1 counterclockwise, -1 clockwise, 0 collinear.
pub fn orient2d(p: &Point, q: &Point, r: &Point) -> i32 {
    let (px, py) = p.approx();
    let (qx, qy) = q.approx();
    let (rx, ry) = r.approx();
    let det = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    let mag = (qx.abs() + px.abs()) * (ry.abs() + py.abs()) + (qy.abs() + py.abs()) * (rx.abs() + px.abs());
    if det.abs() > ORIENT_BOUND * mag {
        return sign_f64(det);
    }
    orient2d_exact(p, q, r)
}

pub fn orient2d_exact(p: &Point, q: &Point, r: &Point) -> i32 {
    let a = (&q.x - &p.x) * (&r.y - &p.y);
    let b = (&q.y - &p.y) * (&r.x - &p.x);
    (a - b).signum()
}

/// +1 if `p` is strictly inside the circumcircle of `abc`, 0 on it, -1 outside.
///
/// The orientation of `abc` is normalized, so the answer does not depend on
/// the order of the three circle points.
pub fn in_circle(a: &Point, b: &Point, c: &Point, p: &Point) -> Result<i32> {
    let o = orient2d(a, b, c);
    if o == 0 {
        return Err(Error::DegenerateInput("in_circle on collinear points"));
    }
    Ok(o * in_circle_raw(a, b, c, p))
}

/// Sign of the lifted determinant, positive for `p` inside when `abc` is
/// counterclockwise. No orientation normalization.
pub(crate) fn in_circle_raw(a: &Point, b: &Point, c: &Point, p: &Point) -> i32 {
    let (ax, ay) = a.approx();
    let (bx, by) = b.approx();
    let (cx, cy) = c.approx();
    let (px, py) = p.approx();
    let (adx, ady) = (ax - px, ay - py);
    let (bdx, bdy) = (bx - px, by - py);
    let (cdx, cdy) = (cx - px, cy - py);
    let alift = adx * adx + ady * ady;
    let blift = bdx * bdx + bdy * bdy;
    let clift = cdx * cdx + cdy * cdy;
    let det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) + clift * (adx * bdy - ady * bdx);

    let m = |u: f64, v: f64| u.abs() + v.abs();
    let (max, may) = (m(ax, px), m(ay, py));
    let (mbx, mby) = (m(bx, px), m(by, py));
    let (mcx, mcy) = (m(cx, px), m(cy, py));
    let perm = (max * max + may * may) * (mbx * mcy + mby * mcx)
        + (mbx * mbx + mby * mby) * (mcx * may + mcy * max)
        + (mcx * mcx + mcy * mcy) * (max * mby + may * mbx);
    if det.abs() > INCIRCLE_BOUND * perm {
        return sign_f64(det);
    }
    in_circle_raw_exact(a, b, c, p)
}

pub(crate) fn in_circle_raw_exact(a: &Point, b: &Point, c: &Point, p: &Point) -> i32 {
    let (adx, ady) = (&a.x - &p.x, &a.y - &p.y);
    let (bdx, bdy) = (&b.x - &p.x, &b.y - &p.y);
    let (cdx, cdy) = (&c.x - &p.x, &c.y - &p.y);
    let lift = |dx: &Coord, dy: &Coord| dx.exact() * dx.exact() + dy.exact() * dy.exact();
    let cross = |ux: &Coord, uy: &Coord, vx: &Coord, vy: &Coord| ux.exact() * vy.exact() - uy.exact() * vx.exact();
    let det = lift(&adx, &ady) * cross(&bdx, &bdy, &cdx, &cdy)
        + lift(&bdx, &bdy) * cross(&cdx, &cdy, &adx, &ady)
        + lift(&cdx, &cdy) * cross(&adx, &ady, &bdx, &bdy);
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact counterpart of [`in_circle`], used to cross-check the filter.
pub fn in_circle_exact(a: &Point, b: &Point, c: &Point, p: &Point) -> Result<i32> {
    let o = orient2d_exact(a, b, c);
    if o == 0 {
        return Err(Error::DegenerateInput("in_circle on collinear points"));
    }
    Ok(o * in_circle_raw_exact(a, b, c, p))
}

/// Sign of `r_sq - |p - center|^2`: +1 inside, 0 on the circle, -1 outside.
pub fn side_of_circle(p: &Point, c: &Circle) -> i32 {
    let (px, py) = p.approx();
    let (cx, cy) = c.center.approx();
    let r_sq = c.r_sq.approx();
    let (dx, dy) = (px - cx, py - cy);
    let val = r_sq - (dx * dx + dy * dy);
    let (mx, my) = (px.abs() + cx.abs(), py.abs() + cy.abs());
    let mag = r_sq.abs() + mx * mx + my * my;
    if val.abs() > SIDE_BOUND * mag {
        return sign_f64(val);
    }
    side_of_circle_exact(p, c)
}

pub fn side_of_circle_exact(p: &Point, c: &Circle) -> i32 {
    (&c.r_sq - &p.dist_sq(&c.center)).signum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient2d(&pt(0, 0), &pt(1, 0), &pt(0, 1)), 1);
        assert_eq!(orient2d(&pt(0, 0), &pt(1, 1), &pt(2, 2)), 0);
        assert_eq!(orient2d(&pt(0, 0), &pt(1, 0), &pt(1, -1)), -1);
    }

    #[test]
    fn in_circle_examples() {
        let (a, b, c) = (pt(1, 0), pt(0, 1), pt(-1, 0));
        assert_eq!(in_circle(&a, &b, &c, &pt(0, 0)), Ok(1));
        assert_eq!(in_circle(&a, &b, &c, &pt(0, -1)), Ok(0));
        assert_eq!(in_circle(&a, &b, &c, &pt(5, 5)), Ok(-1));
        // clockwise input gives the same answer
        assert_eq!(in_circle(&c, &b, &a, &pt(0, 0)), Ok(1));
    }

    #[test]
    fn in_circle_rejects_collinear() {
        assert!(matches!(
            in_circle(&pt(0, 0), &pt(1, 1), &pt(2, 2), &pt(0, 1)),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn side_of_circle_examples() {
        let unit = Circle::new(pt(0, 0), Coord::from_int(1)).unwrap();
        assert_eq!(side_of_circle(&pt(0, 0), &unit), 1);
        assert_eq!(side_of_circle(&pt(1, 0), &unit), 0);
        assert_eq!(side_of_circle(&pt(2, 0), &unit), -1);
    }

    #[test]
    fn filter_falls_back_on_tiny_offsets() {
        // 0.1 is not a double, so the shadows alone would misjudge this.
        let p = Point::parse("0.1", "0.1").unwrap();
        let q = Point::parse("0.2", "0.2").unwrap();
        let r = Point::parse("0.3", "0.3").unwrap();
        assert_eq!(orient2d(&p, &q, &r), 0);
        let r2 = Point::parse("0.3", "0.30000000000000000000000001").unwrap();
        assert_eq!(orient2d(&p, &q, &r2), 1);
    }
}
