//! Forbidden regions `R(x, y, β)` and their boundary curves.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{orient2d, parse_rational, Circle, Coord, Point};

/// The skeleton parameter: a nonnegative rational or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Beta {
    Finite(BigRational),
    Infinity,
}

impl Beta {
    pub fn finite(num: i64, den: i64) -> Result<Beta> {
        if den == 0 {
            return Err(Error::Parse("zero denominator in beta".into()));
        }
        let v = BigRational::new(BigInt::from(num), BigInt::from(den));
        if v.is_negative() {
            return Err(Error::UnsupportedRange("beta must be nonnegative".into()));
        }
        Ok(Beta::Finite(v))
    }

    pub fn int(v: i64) -> Beta {
        Beta::finite(v, 1).expect("nonnegative integer beta")
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Beta::Infinity)
    }

    pub fn approx(&self) -> f64 {
        match self {
            Beta::Finite(v) => v.to_f64().unwrap_or(f64::INFINITY),
            Beta::Infinity => f64::INFINITY,
        }
    }

    /// `self > v` for a small integer `v`.
    pub fn exceeds(&self, v: i64) -> bool {
        match self {
            Beta::Finite(b) => *b > BigRational::from_integer(BigInt::from(v)),
            Beta::Infinity => true,
        }
    }

    pub fn at_least(&self, v: i64) -> bool {
        match self {
            Beta::Finite(b) => *b >= BigRational::from_integer(BigInt::from(v)),
            Beta::Infinity => true,
        }
    }
}

impl PartialOrd for Beta {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Beta {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Beta::Infinity, Beta::Infinity) => Equal,
            (Beta::Infinity, _) => Greater,
            (_, Beta::Infinity) => Less,
            (Beta::Finite(a), Beta::Finite(b)) => a.cmp(b),
        }
    }
}

impl FromStr for Beta {
    type Err = Error;
    fn from_str(s: &str) -> Result<Beta> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "+inf" | "∞") {
            return Ok(Beta::Infinity);
        }
        let v = parse_rational(t)?;
        if v.is_negative() {
            return Err(Error::UnsupportedRange(format!("beta must be nonnegative, got {t}")));
        }
        Ok(Beta::Finite(v))
    }
}

impl fmt::Display for Beta {
    /// Terminating decimals print as decimals, everything else as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Infinity => write!(f, "inf"),
            Beta::Finite(v) => write!(f, "{}", rational_to_string(v)),
        }
    }
}

pub(crate) fn rational_to_string(v: &BigRational) -> String {
    if v.denom().is_one() {
        return v.numer().to_string();
    }
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut d = v.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", v.numer(), v.denom());
    }
    let digits = twos.max(fives);
    let scaled = v * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Closure {
    #[default]
    Open,
    Closed,
}

impl FromStr for Closure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Closure> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" => Ok(Closure::Open),
            "closed" => Ok(Closure::Closed),
            other => Err(Error::Parse(format!("closure must be open or closed, got {other:?}"))),
        }
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Closure::Open => "open",
            Closure::Closed => "closed",
        })
    }
}

/// Which family of regions is used for β ≥ 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    LuneBased,
    CircleBased,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Variant> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lune" | "lune-based" => Ok(Variant::LuneBased),
            "circle" | "circle-based" => Ok(Variant::CircleBased),
            other => Err(Error::Parse(format!("variant must be lune or circle, got {other:?}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::LuneBased => "lune",
            Variant::CircleBased => "circle",
        })
    }
}

/// `R(x, y, β)`.
///
/// The lens and circle-union discs have irrational centers in general, so
/// those variants keep the rational `k_sq` such that the disc centers are
/// `(x + y) / 2 ± k · rot90(y - x)`; membership is still decided exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    /// β = 0.
    Segment { x: Point, y: Point },
    /// 0 < β < 1: intersection of two discs through `x` and `y`.
    Lens { x: Point, y: Point, k_sq: Coord },
    /// Lune-based, 1 ≤ β < ∞. The discs are built on demand by [`Region::lune_discs`].
    Lune { x: Point, y: Point, beta: Coord },
    /// Lune-based, β = ∞: the slab between the perpendiculars at `x` and `y`.
    Strip { x: Point, y: Point },
    /// Circle-based, 1 ≤ β < ∞: union of two discs with chord `xy`.
    CircleUnion { x: Point, y: Point, k_sq: Coord },
    /// Circle-based, β = ∞: union of the two half-planes bounded by line `xy`.
    HalfPlanes { x: Point, y: Point },
}

pub fn make_region(x: &Point, y: &Point, beta: &Beta, variant: Variant) -> Result<Region> {
    if x.same_location(y) {
        return Err(Error::DegeneratePair);
    }
    let (x, y) = (x.clone(), y.clone());
    let one = BigRational::one();
    match (variant, beta) {
        (Variant::CircleBased, Beta::Finite(b)) if *b < one => Err(Error::UnsupportedVariant(format!(
            "circle-based regions need beta >= 1, got {}",
            rational_to_string(b)
        ))),
        (Variant::CircleBased, Beta::Infinity) => Ok(Region::HalfPlanes { x, y }),
        (Variant::CircleBased, Beta::Finite(b)) => {
            let k_sq = (b * b - &one) / BigRational::from_integer(4.into());
            Ok(Region::CircleUnion { x, y, k_sq: Coord::new(k_sq) })
        }
        (Variant::LuneBased, Beta::Infinity) => Ok(Region::Strip { x, y }),
        (Variant::LuneBased, Beta::Finite(b)) if b.is_zero() => Ok(Region::Segment { x, y }),
        (Variant::LuneBased, Beta::Finite(b)) if *b < one => {
            let k_sq = (&one - b * b) / (b * b * BigRational::from_integer(4.into()));
            Ok(Region::Lens { x, y, k_sq: Coord::new(k_sq) })
        }
        (Variant::LuneBased, Beta::Finite(b)) => Ok(Region::Lune { x, y, beta: Coord::new(b.clone()) }),
    }
}

fn lune_discs(x: &Point, y: &Point, beta: &Coord) -> Result<(Circle, Circle)> {
    let half_beta = Coord::new(beta.exact() / BigRational::from_integer(2.into()));
    let rest = Coord::new(BigRational::one() - half_beta.exact());
    let combo = |u: &Coord, v: &Coord| (&rest * u) + (&half_beta * v);
    let c1 = Point::new(combo(&x.x, &y.x), combo(&x.y, &y.y));
    let c2 = Point::new(combo(&y.x, &x.x), combo(&y.y, &x.y));
    let r_sq = Coord::new(beta.exact() * beta.exact() / BigRational::from_integer(4.into())) * x.dist_sq(y);
    Ok((Circle::new(c1, r_sq.clone())?, Circle::new(c2, r_sq)?))
}

/// Sign of `β (p - a)·(b - a) - |p - a|^2`, i.e. of `p` against the lune disc through `a`
/// centered at `a + β/2 (b - a)`. Filtered.
fn lune_disc_sign(p: &Point, a: &Point, b: &Point, beta: &Coord) -> i32 {
    let (px, py) = p.approx();
    let (ax, ay) = a.approx();
    let (bx, by) = b.approx();
    let bt = beta.approx();
    let (ux, uy) = (px - ax, py - ay);
    let (vx, vy) = (bx - ax, by - ay);
    let v = bt * (ux * vx + uy * vy) - (ux * ux + uy * uy);
    let (mux, muy) = (px.abs() + ax.abs(), py.abs() + ay.abs());
    let mag = bt.abs() * (mux * (bx.abs() + ax.abs()) + muy * (by.abs() + ay.abs())) + mux * mux + muy * muy;
    if v.is_finite() && v.abs() > 32.0 * f64::EPSILON * mag {
        return if v > 0.0 { 1 } else { -1 };
    }
    let (ux, uy) = (p.x.exact() - a.x.exact(), p.y.exact() - a.y.exact());
    let (vx, vy) = (b.x.exact() - a.x.exact(), b.y.exact() - a.y.exact());
    let v = beta.exact() * (&ux * &vx + &uy * &vy) - (&ux * &ux + &uy * &uy);
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn admits(sign: i32, closure: Closure) -> bool {
    match closure {
        Closure::Open => sign > 0,
        Closure::Closed => sign >= 0,
    }
}

/// Sign of `(p - a) · (b - a)`, filtered.
fn dot_sign(p: &Point, a: &Point, b: &Point) -> i32 {
    let (px, py) = p.approx();
    let (ax, ay) = a.approx();
    let (bx, by) = b.approx();
    let v = (px - ax) * (bx - ax) + (py - ay) * (by - ay);
    let mag = (px.abs() + ax.abs()) * (bx.abs() + ax.abs()) + (py.abs() + ay.abs()) * (by.abs() + ay.abs());
    if v.abs() > 8.0 * f64::EPSILON * mag {
        return if v > 0.0 { 1 } else { -1 };
    }
    let v = (&p.x - &a.x) * (&b.x - &a.x) + (&p.y - &a.y) * (&b.y - &a.y);
    v.signum()
}

/// `A = |p - m|^2 - d^2/4` and `B = (p - m) · rot90(y - x)` with `m` the midpoint.
fn lens_terms(x: &Point, y: &Point, p: &Point) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    let mx = (x.x.exact() + y.x.exact()) / &two;
    let my = (x.y.exact() + y.y.exact()) / &two;
    let (ux, uy) = (p.x.exact() - &mx, p.y.exact() - &my);
    let (dx, dy) = (y.x.exact() - x.x.exact(), y.y.exact() - x.y.exact());
    let d_sq = &dx * &dx + &dy * &dy;
    let a = &ux * &ux + &uy * &uy - d_sq / BigRational::from_integer(4.into());
    let b = &ux * (-&dy) + &uy * &dx;
    (a, b)
}

/// Raw geometric membership of `p` in `r`; endpoint exclusion is up to the caller.
pub fn region_contains(r: &Region, p: &Point, closure: Closure) -> bool {
    match r {
        Region::Lune { x, y, beta } => {
            admits(lune_disc_sign(p, x, y, beta), closure) && admits(lune_disc_sign(p, y, x, beta), closure)
        }
        Region::Strip { x, y } => admits(dot_sign(p, x, y), closure) && admits(dot_sign(p, y, x), closure),
        Region::Segment { x, y } => {
            orient2d(x, y, p) == 0 && admits(dot_sign(p, x, y), closure) && admits(dot_sign(p, y, x), closure)
        }
        Region::HalfPlanes { x, y } => match closure {
            Closure::Closed => true,
            Closure::Open => orient2d(x, y, p) != 0,
        },
        Region::Lens { x, y, k_sq } => {
            // inside both discs  <=>  A <= -2k|B|
            let (a, b) = lens_terms(x, y, p);
            let rhs = k_sq.exact() * &b * &b * BigRational::from_integer(4.into());
            let lhs = &a * &a;
            match closure {
                Closure::Closed => !a.is_positive() && lhs >= rhs,
                Closure::Open => a.is_negative() && lhs > rhs,
            }
        }
        Region::CircleUnion { x, y, k_sq } => {
            // inside either disc  <=>  A <= 2k|B|
            let (a, b) = lens_terms(x, y, p);
            let rhs = k_sq.exact() * &b * &b * BigRational::from_integer(4.into());
            let lhs = &a * &a;
            match closure {
                Closure::Closed => !a.is_positive() || lhs <= rhs,
                Closure::Open => a.is_negative() || lhs < rhs,
            }
        }
    }
}

impl Region {
    /// The two exact discs of a lune: the first passes through `x`, the second through `y`.
    pub fn lune_discs(&self) -> Option<(Circle, Circle)> {
        match self {
            Region::Lune { x, y, beta } => lune_discs(x, y, beta).ok(),
            _ => None,
        }
    }

    pub fn endpoints(&self) -> (&Point, &Point) {
        match self {
            Region::Segment { x, y }
            | Region::Lens { x, y, .. }
            | Region::Lune { x, y, .. }
            | Region::Strip { x, y }
            | Region::CircleUnion { x, y, .. }
            | Region::HalfPlanes { x, y } => (x, y),
        }
    }

    /// Approximate `(cx, cy, r)` of the discs making up the region, if any.
    pub fn approx_discs(&self) -> Vec<(f64, f64, f64)> {
        let side = |x: &Point, y: &Point, k_sq: &Coord| {
            let (x0, y0) = x.approx();
            let (x1, y1) = y.approx();
            let (mx, my) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
            let k = k_sq.approx().max(0.0).sqrt();
            let (px, py) = (-(y1 - y0), x1 - x0);
            let r = ((x0 - mx - k * px).powi(2) + (y0 - my - k * py).powi(2)).sqrt();
            vec![(mx + k * px, my + k * py, r), (mx - k * px, my - k * py, r)]
        };
        match self {
            Region::Lune { x, y, beta } => {
                let (x0, y0) = x.approx();
                let (x1, y1) = y.approx();
                let h = beta.approx() / 2.0;
                let r = h * ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
                vec![(x0 + h * (x1 - x0), y0 + h * (y1 - y0), r), (x1 + h * (x0 - x1), y1 + h * (y0 - y1), r)]
            }
            Region::Lens { x, y, k_sq } | Region::CircleUnion { x, y, k_sq } => side(x, y, k_sq),
            _ => Vec::new(),
        }
    }
}

/// Axis-aligned rectangle in double precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BBox {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> BBox {
        BBox { min_x, min_y, max_x, max_y }
    }

    pub fn empty() -> BBox {
        BBox::new(f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY)
    }

    pub fn include(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox::new(
            self.min_x.min(o.min_x),
            self.min_y.min(o.min_y),
            self.max_x.max(o.max_x),
            self.max_y.max(o.max_y),
        )
    }

    /// Inflated by `frac` of each side length plus `margin`.
    pub fn inflate(&self, frac: f64, margin: f64) -> BBox {
        let dx = (self.max_x - self.min_x) * frac + margin;
        let dy = (self.max_y - self.min_y) * frac + margin;
        BBox::new(self.min_x - dx, self.min_y - dy, self.max_x + dx, self.max_y + dy)
    }

    pub fn strictly_contains(&self, x: f64, y: f64) -> bool {
        x > self.min_x && x < self.max_x && y > self.min_y && y < self.max_y
    }

    pub fn strictly_contains_box(&self, o: &BBox) -> bool {
        o.min_x > self.min_x && o.max_x < self.max_x && o.min_y > self.min_y && o.max_y < self.max_y
    }

    pub fn overlaps(&self, o: &BBox) -> bool {
        self.min_x <= o.max_x && o.min_x <= self.max_x && self.min_y <= o.max_y && o.min_y <= self.max_y
    }

    pub fn scale(&self) -> f64 {
        (self.max_x - self.min_x).abs().max((self.max_y - self.min_y).abs()).max(1e-300)
    }
}

/// Exact identity of a supporting curve, used to detect coincident boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SupportKey {
    Circle(Circle),
    /// `a·x + b·y = c` with the first nonzero of `(a, b)` equal to one.
    Line(BigRational, BigRational, BigRational),
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveGeom {
    /// Part of the upper (`y >= cy`) or lower half of a circle.
    Arc { cx: f64, cy: f64, r: f64, r_sq: f64, upper: bool },
    /// Part of the line `a·x + b·y = c`, `(a, b)` a unit normal.
    Line { a: f64, b: f64, c: f64 },
}

/// A point on a curve; `pin` names the input point it coincides with exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub pin: Option<usize>,
}

impl CurvePoint {
    pub fn free(x: f64, y: f64) -> CurvePoint {
        CurvePoint { x, y, pin: None }
    }

    fn of(p: &Point) -> CurvePoint {
        let (x, y) = p.approx();
        CurvePoint { x, y, pin: p.id }
    }

    pub fn lex_lt(&self, o: &CurvePoint) -> bool {
        (self.x, self.y) < (o.x, o.y)
    }
}

/// An x-monotone piece of a region boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSegment {
    pub geom: CurveGeom,
    pub support: SupportKey,
    /// Lexicographically smaller endpoint.
    pub left: CurvePoint,
    pub right: CurvePoint,
    /// Input points known to lie exactly on the interior of the piece.
    pub pins: Vec<CurvePoint>,
    pub owner: usize,
    /// Whether the owner region lies on the lower side; for vertical
    /// pieces "lower" means the side of larger x.
    pub inside_below: bool,
}

impl CurveSegment {
    pub fn is_vertical(&self) -> bool {
        self.left.x == self.right.x
    }

    /// y on the curve at `x`, clamped to the piece's x-range.
    pub fn y_at(&self, x: f64) -> f64 {
        let x = x.clamp(self.left.x, self.right.x);
        match self.geom {
            CurveGeom::Arc { cx, cy, r_sq, upper, .. } => {
                let h = (r_sq - (x - cx) * (x - cx)).max(0.0).sqrt();
                if upper {
                    cy + h
                } else {
                    cy - h
                }
            }
            CurveGeom::Line { a, b, c } => {
                if b == 0.0 {
                    self.left.y
                } else {
                    (c - a * x) / b
                }
            }
        }
    }

    pub fn bounds(&self) -> BBox {
        let mut bb = BBox::empty();
        bb.include(self.left.x, self.left.y);
        bb.include(self.right.x, self.right.y);
        if let CurveGeom::Arc { cx, cy, r, upper, .. } = self.geom {
            if self.left.x < cx && cx < self.right.x {
                bb.include(cx, if upper { cy + r } else { cy - r });
            }
        }
        bb
    }
}

/// Splits the boundary of a lune or strip into x-monotone pieces owned by `owner`.
///
/// Strip boundaries are clipped to `bbox`; lunes must lie strictly inside it.
pub fn boundary_curves(r: &Region, bbox: &BBox, owner: usize) -> Result<Vec<CurveSegment>> {
    match r {
        Region::Lune { x, y, beta } => {
            let (d1, d2) = lune_discs(x, y, beta)?;
            lune_curves(&d1, &d2, x, y, bbox, owner)
        }
        Region::Strip { x, y } => {
            if !bbox.strictly_contains(x.x.approx(), x.y.approx()) || !bbox.strictly_contains(y.x.approx(), y.y.approx())
            {
                return Err(Error::Precondition("strip endpoints must lie strictly inside the bounding box".into()));
            }
            Ok(vec![strip_line(x, y, bbox, owner), strip_line(y, x, bbox, owner)])
        }
        _ => Err(Error::Precondition("boundary curves exist only for lunes and strips".into())),
    }
}

fn normalize_angle(a: f64) -> f64 {
    let t = a.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI {
        0.0
    } else {
        t
    }
}

/// One boundary arc of a lune: on `circle`, from corner `c0` to corner `c1`
/// passing through the region point `through`.
fn lune_arc(
    circle: &Circle,
    c0: (f64, f64),
    c1: (f64, f64),
    through: &Point,
    owner: usize,
    out: &mut Vec<CurveSegment>,
) {
    let (cx, cy) = circle.center.approx();
    let r_sq = circle.r_sq.approx();
    let r = r_sq.sqrt();
    let (tx, ty) = through.approx();
    let ang = |(px, py): (f64, f64)| normalize_angle((py - cy).atan2(px - cx));
    let (a0, a1, am) = (ang(c0), ang(c1), ang((tx, ty)));
    let ccw = |from: f64, to: f64| normalize_angle(to - from);
    // sweep ccw from `start` by `sweep`, containing `am`
    let (start, sweep, start_pt, end_pt) = if ccw(a0, am) < ccw(a0, a1) {
        (a0, ccw(a0, a1), c0, c1)
    } else {
        (a1, ccw(a1, a0), c1, c0)
    };
    let through_at_extremum = through.y == circle.center.y;

    // cut points as (offset along sweep, point)
    let mut cuts: Vec<(f64, CurvePoint)> = vec![(0.0, CurvePoint::free(start_pt.0, start_pt.1))];
    for ext in [0.0, PI] {
        let off = ccw(start, ext);
        if off > 1e-12 && off < sweep - 1e-12 {
            let p = if through_at_extremum && (ccw(start, am) - off).abs() < 1e-6 {
                CurvePoint::of(through)
            } else {
                CurvePoint::free(cx + r * ext.cos(), cy)
            };
            cuts.push((off, p));
        }
    }
    cuts.push((sweep, CurvePoint::free(end_pt.0, end_pt.1)));

    let through_pt = CurvePoint::of(through);
    let through_off = ccw(start, am);
    for w in cuts.windows(2) {
        let (o0, p0) = w[0];
        let (o1, p1) = w[1];
        let mid = normalize_angle(start + 0.5 * (o0 + o1));
        let upper = mid < PI;
        let (left, right) = if p0.lex_lt(&p1) { (p0, p1) } else { (p1, p0) };
        let mut pins = Vec::new();
        if through_off > o0 && through_off < o1 && left.pin != through.id && right.pin != through.id {
            pins.push(through_pt);
        }
        out.push(CurveSegment {
            geom: CurveGeom::Arc { cx, cy, r, r_sq, upper },
            support: SupportKey::Circle(circle.clone()),
            left,
            right,
            pins,
            owner,
            inside_below: upper,
        });
    }
}

fn lune_curves(d1: &Circle, d2: &Circle, x: &Point, y: &Point, bbox: &BBox, owner: usize) -> Result<Vec<CurveSegment>> {
    let (x0, y0) = x.approx();
    let (x1, y1) = y.approx();
    let (mx, my) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let (px, py) = (-(y1 - y0), x1 - x0);
    // corners sit at m ± (sqrt(2β - 1) / 2)·rot90(y - x); recover β from r² = β²d²/4
    let d_sq = px * px + py * py;
    let beta = 2.0 * (d1.r_sq.approx() / d_sq).sqrt();
    let h = (2.0 * beta - 1.0).max(0.0).sqrt() / 2.0;
    let c_plus = (mx + h * px, my + h * py);
    let c_minus = (mx - h * px, my - h * py);
    let mut out = Vec::with_capacity(4);
    lune_arc(d1, c_plus, c_minus, x, owner, &mut out);
    lune_arc(d2, c_minus, c_plus, y, owner, &mut out);
    let bb = out.iter().fold(BBox::empty(), |acc, c| acc.union(&c.bounds()));
    if !bbox.strictly_contains_box(&bb) {
        return Err(Error::Precondition("bounding box must strictly contain the lune".into()));
    }
    Ok(out)
}

/// The perpendicular to `xy` through `at`, clipped to `bbox`; the strip lies toward `other`.
fn strip_line(at: &Point, other: &Point, bbox: &BBox, owner: usize) -> CurveSegment {
    let nx = other.x.exact() - at.x.exact();
    let ny = other.y.exact() - at.y.exact();
    let c = &nx * at.x.exact() + &ny * at.y.exact();
    let support = if !nx.is_zero() {
        SupportKey::Line(BigRational::one(), &ny / &nx, &c / &nx)
    } else {
        SupportKey::Line(BigRational::zero(), BigRational::one(), &c / &ny)
    };
    let (a, b, cc) = match &support {
        SupportKey::Line(a, b, c) => (a.to_f64().unwrap(), b.to_f64().unwrap(), c.to_f64().unwrap()),
        _ => unreachable!(),
    };
    let norm = (a * a + b * b).sqrt();
    let (a, b, cc) = (a / norm, b / norm, cc / norm);

    let (ax, ay) = at.approx();
    // direction along the line: rot90 of the normal, oriented lexicographically
    let (mut dx, mut dy) = (-b, a);
    if dx < 0.0 || (dx == 0.0 && dy < 0.0) {
        dx = -dx;
        dy = -dy;
    }
    // each end lies exactly on the bbox side that bounds it
    let mut lo = (f64::NEG_INFINITY, 0usize, 0.0);
    let mut hi = (f64::INFINITY, 0usize, 0.0);
    for (axis, p, d, e0, e1) in [(0, ax, dx, bbox.min_x, bbox.max_x), (1, ay, dy, bbox.min_y, bbox.max_y)] {
        if d != 0.0 {
            let (t0, t1) = ((e0 - p) / d, (e1 - p) / d);
            let (a_t, a_e, b_t, b_e) = if t0 < t1 { (t0, e0, t1, e1) } else { (t1, e1, t0, e0) };
            if a_t > lo.0 {
                lo = (a_t, axis, a_e);
            }
            if b_t < hi.0 {
                hi = (b_t, axis, b_e);
            }
        }
    }
    let end = |(t, axis, edge): (f64, usize, f64)| {
        if axis == 0 {
            CurvePoint::free(edge, (ay + t * dy).clamp(bbox.min_y, bbox.max_y))
        } else {
            CurvePoint::free((ax + t * dx).clamp(bbox.min_x, bbox.max_x), edge)
        }
    };
    let (left, right) = if b == 0.0 {
        (CurvePoint::free(ax, bbox.min_y), CurvePoint::free(ax, bbox.max_y))
    } else {
        (end(lo), end(hi))
    };
    // inside lies toward `other`; "below" is the right-hand side of left→right
    let (ox, oy) = other.approx();
    let cross = dx * (oy - ay) - dy * (ox - ax);
    CurveSegment {
        geom: CurveGeom::Line { a, b, c: cc },
        support,
        left,
        right,
        pins: vec![CurvePoint::of(at)],
        owner,
        inside_below: cross < 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn lune_centers_and_radius() {
        let r = make_region(&pt(0, 0), &pt(2, 0), &Beta::int(3), Variant::LuneBased).unwrap();
        let (d1, d2) = r.lune_discs().expect("expected lune");
        assert!(d1.center.same_location(&pt(3, 0)));
        assert!(d2.center.same_location(&pt(-1, 0)));
        assert_eq!(d1.r_sq, Coord::from_int(9));
        assert_eq!(d2.r_sq, Coord::from_int(9));
    }

    #[test]
    fn rng_lune_has_endpoint_centers() {
        let r = make_region(&pt(0, 0), &pt(2, 0), &Beta::int(2), Variant::LuneBased).unwrap();
        let (d1, d2) = r.lune_discs().expect("expected lune");
        assert!(d1.center.same_location(&pt(2, 0)));
        assert!(d2.center.same_location(&pt(0, 0)));
        assert_eq!(d1.r_sq, Coord::from_int(4));
    }

    #[test]
    fn infinite_beta_gives_strip() {
        let r = make_region(&pt(0, 0), &pt(2, 0), &Beta::Infinity, Variant::LuneBased).unwrap();
        assert!(matches!(r, Region::Strip { .. }));
        assert!(!region_contains(&r, &pt(0, 5), Closure::Open));
        assert!(region_contains(&r, &pt(0, 5), Closure::Closed));
        assert!(region_contains(&r, &pt(1, -100), Closure::Open));
        assert!(!region_contains(&r, &pt(3, 0), Closure::Closed));
    }

    #[test]
    fn lune_membership_examples() {
        let r = make_region(&pt(0, 0), &pt(2, 0), &Beta::int(3), Variant::LuneBased).unwrap();
        assert!(region_contains(&r, &pt(1, 0), Closure::Open));
        assert!(!region_contains(&r, &pt(2, 0), Closure::Open));
        assert!(region_contains(&r, &pt(2, 0), Closure::Closed));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_region(&pt(1, 1), &pt(1, 1), &Beta::int(3), Variant::LuneBased), Err(Error::DegeneratePair));
        let half = Beta::finite(1, 2).unwrap();
        assert!(matches!(
            make_region(&pt(0, 0), &pt(1, 0), &half, Variant::CircleBased),
            Err(Error::UnsupportedVariant(_))
        ));
        assert!(matches!(make_region(&pt(0, 0), &pt(1, 0), &half, Variant::LuneBased), Ok(Region::Lens { .. })));
        assert!(matches!(make_region(&pt(0, 0), &pt(1, 0), &Beta::int(0), Variant::LuneBased), Ok(Region::Segment { .. })));
    }

    #[test]
    fn lens_contains_midpoint_and_passes_through_endpoints() {
        let half = Beta::finite(1, 2).unwrap();
        let r = make_region(&pt(0, 0), &pt(4, 0), &half, Variant::LuneBased).unwrap();
        assert!(region_contains(&r, &pt(2, 0), Closure::Open));
        assert!(!region_contains(&r, &pt(0, 0), Closure::Open));
        assert!(region_contains(&r, &pt(0, 0), Closure::Closed));
        // disc radius is d/(2β) = 4, centers at (2, ±2√3): apex height 4 - 2√3 ≈ 0.536
        assert!(region_contains(&r, &Point::parse("2", "0.53").unwrap(), Closure::Open));
        assert!(!region_contains(&r, &Point::parse("2", "0.54").unwrap(), Closure::Closed));
    }

    #[test]
    fn circle_union_contains_far_bulge() {
        let r = make_region(&pt(0, 0), &pt(2, 0), &Beta::int(3), Variant::CircleBased).unwrap();
        // discs of radius 3 with chord (0,0)-(2,0): centers (1, ±2√2), top at 2√2 + 3 ≈ 5.83
        assert!(region_contains(&r, &Point::parse("1", "5.8").unwrap(), Closure::Open));
        assert!(!region_contains(&r, &Point::parse("1", "5.9").unwrap(), Closure::Open));
        assert!(!region_contains(&r, &pt(0, 0), Closure::Open));
        assert!(region_contains(&r, &pt(0, 0), Closure::Closed));
        let hp = make_region(&pt(0, 0), &pt(2, 0), &Beta::Infinity, Variant::CircleBased).unwrap();
        assert!(region_contains(&hp, &pt(7, 0), Closure::Closed));
        assert!(!region_contains(&hp, &pt(7, 0), Closure::Open));
        assert!(region_contains(&hp, &pt(7, 1), Closure::Open));
    }

    #[test]
    fn beta_parsing_and_display() {
        assert_eq!("inf".parse::<Beta>().unwrap(), Beta::Infinity);
        assert_eq!("2.1".parse::<Beta>().unwrap(), Beta::finite(21, 10).unwrap());
        assert_eq!("21/10".parse::<Beta>().unwrap().to_string(), "2.1");
        assert_eq!(Beta::finite(1, 3).unwrap().to_string(), "1/3");
        assert_eq!(Beta::int(3).to_string(), "3");
        assert_eq!(Beta::finite(1, 40).unwrap().to_string(), "0.025");
        assert!("-1".parse::<Beta>().is_err());
        assert!(Beta::Infinity > Beta::int(1_000_000));
    }

    #[test]
    fn horizontal_lune_has_four_pieces_vertical_has_two() {
        let bbox = BBox::new(-10.0, -10.0, 10.0, 10.0);
        let h = make_region(&pt(0, 0), &pt(2, 0), &Beta::int(3), Variant::LuneBased).unwrap();
        assert_eq!(boundary_curves(&h, &bbox, 0).unwrap().len(), 4);
        let v = make_region(&pt(0, 0), &pt(0, 2), &Beta::int(3), Variant::LuneBased).unwrap();
        assert_eq!(boundary_curves(&v, &bbox, 0).unwrap().len(), 2);
    }

    #[test]
    fn strip_gives_two_clipped_verticals() {
        let bbox = BBox::new(-10.0, -10.0, 10.0, 10.0);
        let s = make_region(&pt(0, 0), &pt(2, 0), &Beta::Infinity, Variant::LuneBased).unwrap();
        let cs = boundary_curves(&s, &bbox, 0).unwrap();
        assert_eq!(cs.len(), 2);
        for c in &cs {
            assert!(c.is_vertical());
            assert_eq!((c.left.y, c.right.y), (-10.0, 10.0));
        }
        assert!(cs[0].inside_below && !cs[1].inside_below);
    }

    #[test]
    fn bbox_precondition() {
        let small = BBox::new(-1.0, -1.0, 3.0, 1.0);
        let h = make_region(&pt(0, 0), &pt(2, 0), &Beta::int(3), Variant::LuneBased).unwrap();
        assert!(matches!(boundary_curves(&h, &small, 0), Err(Error::Precondition(_))));
        let seg = make_region(&pt(0, 0), &pt(2, 0), &Beta::int(0), Variant::LuneBased).unwrap();
        assert!(boundary_curves(&seg, &small, 0).is_err());
    }
}
