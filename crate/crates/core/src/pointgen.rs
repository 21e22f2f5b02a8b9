//! Seeded point-set generators.

use std::collections::HashSet;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GenMode {
    /// Uniform in the unit square.
    #[default]
    Uniform,
    /// Row-major integer grid, `ceil(sqrt(n))` columns.
    Grid,
    /// Close to the unit circle, at seeded angles.
    Circle,
}

impl FromStr for GenMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<GenMode> {
        match s {
            "uniform" => Ok(GenMode::Uniform),
            "grid" => Ok(GenMode::Grid),
            "circle" => Ok(GenMode::Circle),
            _ => Err(Error::Parse(format!("unknown mode '{s}' (uniform, grid, circle)"))),
        }
    }
}

/// `n` distinct points; the same seed always gives the same set.
pub fn generate(n: usize, mode: GenMode, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<(f64, f64)> = match mode {
        GenMode::Grid => {
            let k = (n as f64).sqrt().ceil() as usize;
            (0..n).map(|i| ((i % k) as f64, (i / k) as f64)).collect()
        }
        GenMode::Uniform | GenMode::Circle => {
            let mut seen = HashSet::with_capacity(n);
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let p = if mode == GenMode::Uniform {
                    (rng.gen::<f64>(), rng.gen::<f64>())
                } else {
                    let t = rng.gen::<f64>() * std::f64::consts::TAU;
                    (t.cos(), t.sin())
                };
                if seen.insert((p.0.to_bits(), p.1.to_bits())) {
                    out.push(p);
                }
            }
            out
        }
    };
    PointSet::from_f64(&coords)
}

/// Uniform points in the unit square.
pub fn uniform(n: usize, seed: u64) -> PointSet {
    generate(n.max(1), GenMode::Uniform, seed).expect("uniform generation")
}

/// Whether every coordinate equals its double shadow.
pub fn all_exact_doubles(points: &PointSet) -> bool {
    points.iter().all(|p| Point::from_f64(p.x.approx(), p.y.approx()).is_some_and(|q| q.same_location(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let a = generate(200, GenMode::Uniform, 7).unwrap();
        let b = generate(200, GenMode::Uniform, 7).unwrap();
        assert_eq!(a.points(), b.points());
        assert!(a.check_distinct().is_ok());
        assert!(all_exact_doubles(&a));
        let c = generate(200, GenMode::Uniform, 8).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn grid_of_four() {
        let g = generate(4, GenMode::Grid, 0).unwrap();
        let got: Vec<_> = g.iter().map(Point::approx).collect();
        assert_eq!(got, vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
    }

    #[test]
    fn zero_points_rejected() {
        assert!(generate(0, GenMode::Uniform, 1).is_err());
        assert!(generate(10, GenMode::Circle, 1).unwrap().check_distinct().is_ok());
    }
}
