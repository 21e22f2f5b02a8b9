//! Python bindings: point sets, the three skeleton algorithms, Delaunay
//! edges and region membership.

use betaskel::delaunay::triangulate;
use betaskel::pointgen::{generate, GenMode};
use betaskel::regions::{make_region, region_contains as contains};
use betaskel::skeleton::{self, Stats};
use betaskel::{AlgoConfig, Beta, Closure, Coord, Error, Point, Variant};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Mismatch(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A coordinate given as a decimal string (exact) or a number (its exact double value).
fn coord(v: &Bound<'_, PyAny>) -> PyResult<Coord> {
    if let Ok(s) = v.extract::<String>() {
        return Coord::parse_decimal(&s).map_err(py_err);
    }
    if let Ok(i) = v.extract::<i64>() {
        return Ok(Coord::from_int(i));
    }
    let f: f64 = v.extract()?;
    Coord::from_f64(f).ok_or_else(|| PyValueError::new_err(format!("coordinate {f} is not finite")))
}

/// `beta` as a string (`"3"`, `"5/2"`, `"inf"`), an integer or a float.
pub fn parse_beta(text: Option<&str>, int: Option<i64>, float: Option<f64>) -> Result<Beta, Error> {
    if let Some(s) = text {
        return s.parse();
    }
    if let Some(i) = int {
        return Beta::finite(i, 1);
    }
    match float {
        Some(f) if f == f64::INFINITY => Ok(Beta::Infinity),
        Some(f) => match Coord::from_f64(f) {
            Some(c) if f >= 0.0 => Ok(Beta::Finite(c.exact().clone())),
            _ => Err(Error::UnsupportedRange(format!("beta must be a nonnegative number, got {f}"))),
        },
        None => Err(Error::Parse("beta must be a string or a number".into())),
    }
}

fn beta(v: &Bound<'_, PyAny>) -> PyResult<Beta> {
    let text = v.extract::<String>().ok();
    let int = v.extract::<i64>().ok();
    let float = v.extract::<f64>().ok();
    parse_beta(text.as_deref(), int, float).map_err(py_err)
}

fn closure(s: &str) -> PyResult<Closure> {
    s.parse().map_err(py_err)
}

fn variant(s: &str) -> PyResult<Variant> {
    s.parse().map_err(py_err)
}

/// Input sites with exact rational coordinates.
#[pyclass(name = "PointSet", frozen)]
pub struct PyPointSet {
    inner: betaskel::PointSet,
}

#[pymethods]
impl PyPointSet {
    /// `coords` is a sequence of `(x, y)` pairs; strings are parsed as exact decimals.
    #[new]
    fn new(coords: Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)>) -> PyResult<Self> {
        let pts = coords.iter().map(|(x, y)| Ok(Point::new(coord(x)?, coord(y)?))).collect::<PyResult<Vec<_>>>()?;
        let inner = betaskel::PointSet::new(pts);
        inner.check_distinct().map_err(py_err)?;
        Ok(PyPointSet { inner })
    }

    /// Seeded points: `mode` is `"uniform"`, `"grid"` or `"circle"`.
    #[staticmethod]
    #[pyo3(signature = (n, mode = "uniform", seed = 1))]
    fn generate(n: usize, mode: &str, seed: u64) -> PyResult<Self> {
        let mode: GenMode = mode.parse().map_err(py_err)?;
        Ok(PyPointSet { inner: generate(n, mode, seed).map_err(py_err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Double approximations of the coordinates.
    fn coords(&self) -> Vec<(f64, f64)> {
        self.inner.iter().map(Point::approx).collect()
    }

    fn __repr__(&self) -> String {
        format!("PointSet(n={})", self.inner.len())
    }
}

/// Result of a skeleton computation.
#[pyclass(name = "Skeleton", frozen)]
pub struct PySkeleton {
    #[pyo3(get)]
    n: usize,
    #[pyo3(get)]
    edges: Vec<(usize, usize)>,
    stats: Stats,
}

#[pymethods]
impl PySkeleton {
    #[getter]
    fn algorithm(&self) -> &str {
        &self.stats.algorithm
    }

    #[getter]
    fn beta(&self) -> &str {
        &self.stats.beta
    }

    #[getter]
    fn closure(&self) -> &str {
        &self.stats.closure
    }

    /// Counters and phase times in seconds.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = &self.stats;
        let d = PyDict::new(py);
        d.set_item("m", s.group_size)?;
        d.set_item("group_count", s.group_count)?;
        d.set_item("dt_edges", s.dt_edges)?;
        d.set_item("pieces", s.pieces)?;
        d.set_item("faces", s.faces)?;
        d.set_item("near_points", s.near_points)?;
        d.set_item("post_pass_checks", s.post_pass_checks)?;
        d.set_item("dt_secs", s.dt_secs)?;
        d.set_item("build_secs", s.build_secs)?;
        d.set_item("locate_secs", s.locate_secs)?;
        d.set_item("traverse_secs", s.traverse_secs)?;
        d.set_item("total_secs", s.total_secs)?;
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.edges.len()
    }

    fn __repr__(&self) -> String {
        format!("Skeleton(n={}, edges={}, algorithm={:?})", self.n, self.edges.len(), self.stats.algorithm)
    }
}

fn wrap(g: betaskel::SkeletonGraph) -> PySkeleton {
    PySkeleton { n: g.n, edges: g.edges, stats: g.stats }
}

/// All-pairs oracle for any beta and either region family.
#[pyfunction]
#[pyo3(signature = (points, beta, variant = "lune", closure = "open"))]
fn brute_force(py: Python<'_>, points: &PyPointSet, beta: &Bound<'_, PyAny>, variant: &str, closure: &str) -> PyResult<PySkeleton> {
    let (b, v, c) = (self::beta(beta)?, self::variant(variant)?, self::closure(closure)?);
    let g = py.detach(|| skeleton::brute_force(&points.inner, &b, v, c)).map_err(py_err)?;
    Ok(wrap(g))
}

/// Tests every Delaunay edge against every point; beta > 2.
#[pyfunction]
#[pyo3(signature = (points, beta, closure = "open"))]
fn dt_filter(py: Python<'_>, points: &PyPointSet, beta: &Bound<'_, PyAny>, closure: &str) -> PyResult<PySkeleton> {
    let (b, c) = (self::beta(beta)?, self::closure(closure)?);
    let g = py.detach(|| skeleton::dt_filter(&points.inner, &b, c)).map_err(py_err)?;
    Ok(wrap(g))
}

/// The grouped subdivision algorithm; beta > 2.
#[pyfunction]
#[pyo3(signature = (points, beta, closure = "open", group_size = None, parallel = false, paranoid = false, seed = None))]
#[allow(clippy::too_many_arguments)]
fn batched(
    py: Python<'_>,
    points: &PyPointSet,
    beta: &Bound<'_, PyAny>,
    closure: &str,
    group_size: Option<usize>,
    parallel: bool,
    paranoid: bool,
    seed: Option<u64>,
) -> PyResult<PySkeleton> {
    let (b, c) = (self::beta(beta)?, self::closure(closure)?);
    let cfg = AlgoConfig {
        group_size_override: group_size,
        parallel_groups: parallel,
        paranoid_verify: paranoid,
        rng_seed: seed.unwrap_or(AlgoConfig::default().rng_seed),
    };
    let g = py.detach(|| skeleton::batched(&points.inner, &b, c, &cfg)).map_err(py_err)?;
    Ok(wrap(g))
}

#[pyfunction]
fn choose_group_size(n: usize) -> usize {
    skeleton::choose_group_size(n)
}

/// Sorted `(i, j)` pairs of a Delaunay triangulation.
#[pyfunction]
fn delaunay_edges(points: &PyPointSet) -> PyResult<Vec<(usize, usize)>> {
    Ok(triangulate(&points.inner).map_err(py_err)?.edges().to_vec())
}

/// Whether the point `p = (x, y)` lies in the region of the pair `(i, j)` of `points`.
#[pyfunction]
#[pyo3(signature = (points, i, j, p, beta, variant = "lune", closure = "open"))]
fn region_contains(
    points: &PyPointSet,
    i: usize,
    j: usize,
    p: (Bound<'_, PyAny>, Bound<'_, PyAny>),
    beta: &Bound<'_, PyAny>,
    variant: &str,
    closure: &str,
) -> PyResult<bool> {
    let n = points.inner.len();
    if i >= n || j >= n {
        return Err(PyValueError::new_err(format!("index out of range for {n} points")));
    }
    let r = make_region(&points.inner[i], &points.inner[j], &self::beta(beta)?, self::variant(variant)?).map_err(py_err)?;
    let q = Point::new(coord(&p.0)?, coord(&p.1)?);
    Ok(contains(&r, &q, self::closure(closure)?))
}

#[pymodule]
#[pyo3(name = "betaskel")]
fn betaskel_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPointSet>()?;
    m.add_class::<PySkeleton>()?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(dt_filter, m)?)?;
    m.add_function(wrap_pyfunction!(batched, m)?)?;
    m.add_function(wrap_pyfunction!(choose_group_size, m)?)?;
    m.add_function(wrap_pyfunction!(delaunay_edges, m)?)?;
    m.add_function(wrap_pyfunction!(region_contains, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_forms() {
        assert_eq!(parse_beta(Some("5/2"), None, None).unwrap(), Beta::finite(5, 2).unwrap());
        assert_eq!(parse_beta(None, Some(3), Some(3.0)).unwrap(), Beta::int(3));
        assert_eq!(parse_beta(None, None, Some(2.5)).unwrap(), Beta::finite(5, 2).unwrap());
        assert!(parse_beta(None, None, Some(f64::INFINITY)).unwrap().is_infinite());
        assert!(parse_beta(None, None, Some(-1.0)).is_err());
        assert!(parse_beta(None, None, None).is_err());
    }
}
