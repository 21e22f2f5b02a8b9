//! Median wall times per algorithm and size, with growth ratios.

use std::fmt::Write;
use std::time::Instant;

use betaskel::pointgen::uniform;
use betaskel::skeleton::{batched, brute_force, dt_filter};
use betaskel::{AlgoConfig, Beta, Closure, Variant};

use crate::{Algo, Failure};

pub struct Row {
    pub algo: Algo,
    pub n: usize,
    pub median_secs: f64,
    /// `T(n) / T(previous n)` and `n / previous n`.
    pub growth: Option<(f64, f64)>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

pub fn run(
    sizes: &[usize],
    reps: usize,
    algos: &[Algo],
    beta: &Beta,
    closure: Closure,
    cfg: &AlgoConfig,
    seed: u64,
) -> Result<Vec<Row>, Failure> {
    let mut rows = Vec::new();
    for &algo in algos {
        let mut prev: Option<(usize, f64)> = None;
        for &n in sizes {
            let pts = uniform(n, seed);
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps.max(1) {
                let t = Instant::now();
                match algo {
                    Algo::Batched | Algo::Auto => batched(&pts, beta, closure, cfg),
                    Algo::DtFilter => dt_filter(&pts, beta, closure),
                    Algo::Bruteforce => brute_force(&pts, beta, Variant::LuneBased, closure),
                }
                .map_err(Failure::from)?;
                times.push(t.elapsed().as_secs_f64());
            }
            let t = median(times);
            log::info!("bench {} n={n}: {t:.3}s", algo.name());
            let growth = prev.map(|(pn, pt)| (t / pt, n as f64 / pn as f64));
            rows.push(Row { algo, n, median_secs: t, growth });
            prev = Some((n, t));
        }
    }
    Ok(rows)
}

/// Reference ratios for a size factor `f`: quadratic, and `f^1.5 · sqrt(log ratio)`.
fn references(n: usize, f: f64) -> (f64, f64) {
    let prev = n as f64 / f;
    let logs = (n as f64).log2() / prev.max(2.0).log2();
    (f * f, f.powf(1.5) * logs.sqrt())
}

pub fn markdown(rows: &[Row]) -> String {
    let mut s = String::from("| algorithm | n | median s | ratio | size factor | quadratic | n^1.5 log^0.5 |\n");
    s.push_str("|---|---|---|---|---|---|---|\n");
    for r in rows {
        let _ = match r.growth {
            Some((g, f)) => {
                let (q, t) = references(r.n, f);
                writeln!(s, "| {} | {} | {:.4} | {g:.2} | {f:.2} | {q:.2} | {t:.2} |", r.algo.name(), r.n, r.median_secs)
            }
            None => writeln!(s, "| {} | {} | {:.4} | | | | |", r.algo.name(), r.n, r.median_secs),
        };
    }
    s
}

pub fn csv(rows: &[Row]) -> String {
    let mut s = String::from("algorithm,n,median_secs,ratio,size_factor,quadratic,theory\n");
    for r in rows {
        let _ = match r.growth {
            Some((g, f)) => {
                let (q, t) = references(r.n, f);
                writeln!(s, "{},{},{:.6},{g:.4},{f:.4},{q:.4},{t:.4}", r.algo.name(), r.n, r.median_secs)
            }
            None => writeln!(s, "{},{},{:.6},,,,", r.algo.name(), r.n, r.median_secs),
        };
    }
    s
}
