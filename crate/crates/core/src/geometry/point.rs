use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

use super::coord::Coord;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
    /// Index into the owning [`PointSet`], when there is one.
    pub id: Option<usize>,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Point { x, y, id: None }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Coord::from_int(x), Coord::from_int(y))
    }

    pub fn from_f64(x: f64, y: f64) -> Option<Self> {
        Some(Point::new(Coord::from_f64(x)?, Coord::from_f64(y)?))
    }

    pub fn parse(x: &str, y: &str) -> Result<Self> {
        Ok(Point::new(Coord::parse_decimal(x)?, Coord::parse_decimal(y)?))
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.x.approx(), self.y.approx())
    }

    pub fn same_location(&self, other: &Point) -> bool {
        self.x == other.x && self.y == other.y
    }

    pub fn dist_sq(&self, other: &Point) -> Coord {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &(&dx * &dx) + &(&dy * &dy)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id {
            Some(i) => write!(f, "#{i}({:?}, {:?})", self.x, self.y),
            None => write!(f, "({:?}, {:?})", self.x, self.y),
        }
    }
}

/// Input sites; each point's `id` equals its position.
#[derive(Clone, Debug, Default)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: impl IntoIterator<Item = Point>) -> Self {
        let points = points
            .into_iter()
            .enumerate()
            .map(|(i, mut p)| {
                p.id = Some(i);
                p
            })
            .collect();
        PointSet { points }
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Self {
        PointSet::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)))
    }

    pub fn from_f64(coords: &[(f64, f64)]) -> Result<Self> {
        let pts = coords
            .iter()
            .map(|&(x, y)| {
                Point::from_f64(x, y).ok_or_else(|| Error::Parse(format!("non-finite coordinate ({x}, {y})")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSet::new(pts))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// Fails with the first pair of coinciding points.
    pub fn check_distinct(&self) -> Result<()> {
        let mut seen: HashMap<(&Coord, &Coord), usize> = HashMap::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            if let Some(&first) = seen.get(&(&p.x, &p.y)) {
                return Err(Error::DuplicatePoint { first, second: i });
            }
            seen.insert((&p.x, &p.y), i);
        }
        Ok(())
    }

    /// Axis-aligned extent of the shadows as `(min_x, min_y, max_x, max_y)`.
    pub fn extent(&self) -> Option<(f64, f64, f64, f64)> {
        let mut it = self.points.iter().map(Point::approx);
        let (x0, y0) = it.next()?;
        Some(it.fold((x0, y0, x0, y0), |(a, b, c, d), (x, y)| (a.min(x), b.min(y), c.max(x), d.max(y))))
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circle {
    pub center: Point,
    /// Squared radius; always positive.
    pub r_sq: Coord,
}

impl Circle {
    pub fn new(center: Point, r_sq: Coord) -> Result<Self> {
        if r_sq.signum() <= 0 {
            return Err(Error::Precondition("circle radius must be positive".into()));
        }
        Ok(Circle { center, r_sq })
    }

    pub fn radius_approx(&self) -> f64 {
        self.r_sq.approx().sqrt()
    }
}
