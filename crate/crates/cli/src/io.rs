//! Point files, edge files and result serialization.

use std::fs;
use std::io::Write;
use std::path::Path;

use betaskel::skeleton::Stats;
use betaskel::{Error, Point, PointSet, SkeletonGraph};
use serde_json::{json, Value};

use crate::Failure;

pub struct Input {
    pub points: PointSet,
}

/// Reads `x,y` rows. `#` starts a comment line; a first row that does not
/// parse as two numbers is taken as a header.
pub fn read_points(path: &Path) -> Result<Input, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    read_points_str(&text, &path.display().to_string())
}

pub fn read_points_str(text: &str, name: &str) -> Result<Input, Failure> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    let mut lines = Vec::new();
    let mut header_seen = false;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Failure::input(format!("{name}: {e}")))?;
        let line = rec.position().map_or(0, |p| p.line());
        // comments are skipped here rather than by the reader, which would not count their lines
        if rec.iter().all(str::is_empty) || rec[0].starts_with('#') {
            continue;
        }
        if rec.len() != 2 {
            return Err(Failure::input(format!("{name}:{line}: expected 2 fields, found {}", rec.len())));
        }
        match Point::parse(&rec[0], &rec[1]) {
            Ok(p) => {
                points.push(p);
                lines.push(line);
            }
            Err(_) if points.is_empty() && !header_seen => header_seen = true,
            Err(e) => return Err(Failure::input(format!("{name}:{line}: {e}"))),
        }
    }
    let points = PointSet::new(points);
    if let Err(Error::DuplicatePoint { first, second }) = points.check_distinct() {
        return Err(Failure::input(format!(
            "{name}:{}: duplicate of the point on line {}",
            lines[second], lines[first]
        )));
    }
    Ok(Input { points })
}

/// Reads an edge list written by `compute`, as JSON or as `i j` lines.
pub fn read_edges(path: &Path) -> Result<Vec<(usize, usize)>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let name = path.display();
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| Failure::input(format!("{name}: {e}")))?;
        let list = v["edges"].as_array().ok_or_else(|| Failure::input(format!("{name}: no \"edges\" array")))?;
        return list
            .iter()
            .map(|e| match (e[0].as_u64(), e[1].as_u64()) {
                (Some(i), Some(j)) => Ok(order(i as usize, j as usize)),
                _ => Err(Failure::input(format!("{name}: bad edge {e}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(sorted);
    }
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        match f.as_slice() {
            [i, j] => match (i.parse(), j.parse()) {
                (Ok(i), Ok(j)) => out.push(order(i, j)),
                _ => return Err(Failure::input(format!("{name}:{}: expected two indices", k + 1))),
            },
            _ => return Err(Failure::input(format!("{name}:{}: expected two indices", k + 1))),
        }
    }
    Ok(sorted(out))
}

fn sorted(mut v: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    v.sort_unstable();
    v.dedup();
    v
}

fn order(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

pub fn stats_json(s: &Stats, input: &Input) -> Value {
    let bbox = input.points.extent().map(|(a, b, c, d)| vec![a, b, c, d]);
    json!({
        "input_bbox": bbox,
        "m": s.group_size,
        "group_count": s.group_count,
        "dt_edges": s.dt_edges,
        "pieces": s.pieces,
        "faces": s.faces,
        "near_points": s.near_points,
        "post_pass_checks": s.post_pass_checks,
        "dt_secs": s.dt_secs,
        "build_secs": s.build_secs,
        "locate_secs": s.locate_secs,
        "traverse_secs": s.traverse_secs,
        "total_secs": s.total_secs,
    })
}

pub fn graph_json(g: &SkeletonGraph, input: &Input) -> Value {
    json!({
        "n": g.n,
        "beta": g.stats.beta,
        "closure": g.stats.closure,
        "algorithm": g.stats.algorithm,
        "edges": g.edges.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        "stats": stats_json(&g.stats, input),
    })
}

pub fn edges_tsv(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|(i, j)| format!("{i} {j}\n")).collect()
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::input(format!("stdout: {e}")))
        }
    }
}
