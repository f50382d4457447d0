//! Seeded multi-start pattern search for lower bounds at any exponent.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::certificate::{ConstantCertificate, Mode, SearchStats};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::maximal::{MaximalOperator, VertexFunction};
use crate::number::Number;

#[derive(Debug, Clone)]
pub struct NumericOptions {
    /// Random starts in addition to the indicator of every vertex.
    pub restarts: usize,
    pub seed: u64,
    /// Cap on accepted moves per start.
    pub max_iters: usize,
    /// Stop refining once the step falls below this.
    pub min_step: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { restarts: 32, seed: 0, max_iters: 100_000, min_step: 1e-9 }
    }
}

/// Compass search on the ratio, restricted to `f >= 0`. The step shrinks
/// by half whenever no single-coordinate move improves.
fn climb(op: &MaximalOperator, p: f64, mut f: Vec<f64>, opts: &NumericOptions, evals: &mut u64) -> (f64, Vec<f64>) {
    let eval = |f: &[f64], evals: &mut u64| {
        *evals += 1;
        op.ratio_f64_unchecked(f, p).unwrap_or(f64::NEG_INFINITY)
    };
    let mut cur = eval(&f, evals);
    let mut step = 0.5 * f.iter().cloned().fold(0.0, f64::max).max(1e-3);
    let mut moves = 0;
    while step >= opts.min_step && moves < opts.max_iters {
        let mut improved = false;
        for j in 0..f.len() {
            for dir in [1.0, -1.0] {
                let old = f[j];
                let new = (old + dir * step).max(0.0);
                if new == old {
                    continue;
                }
                f[j] = new;
                let r = eval(&f, evals);
                if r > cur + 1e-15 {
                    cur = r;
                    improved = true;
                    moves += 1;
                    break;
                }
                f[j] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (cur, f)
}

/// Shifts to `min f = 0` and scales to `Var_p f = 1`.
fn normalize(g: &Graph, p: f64, f: &[f64]) -> Vec<f64> {
    let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
    let shifted: Vec<f64> = f.iter().map(|x| x - lo).collect();
    let var: f64 = g.edges().iter().map(|&(u, v)| (shifted[u] - shifted[v]).abs().powf(p)).sum::<f64>().powf(1.0 / p);
    if var > 0.0 {
        shifted.iter().map(|x| x / var).collect()
    } else {
        shifted
    }
}

/// Start `i`: uniform values, each zeroed with probability one half, from a
/// generator seeded by `seed + i` so that adding restarts never changes the
/// earlier ones.
fn random_start(n: usize, seed: u64, i: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
    (0..n).map(|_| if rng.random_bool(0.5) { 0.0 } else { rng.random::<f64>() }).collect()
}

/// Largest ratio found over all starts, with its normalized witness. This
/// is a lower bound on the constant, never an upper one.
pub fn numeric_lower_bound(g: &Graph, p: f64, opts: &NumericOptions) -> Result<ConstantCertificate> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositiveExponent(p));
    }
    let n = g.order();
    if n < 2 {
        return Err(Error::InvalidParameter("the constant needs at least two vertices".into()));
    }
    let start = Instant::now();
    let op = MaximalOperator::new(g)?;
    let mut evals = 0u64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let starts = (0..n)
        .map(|v| {
            let mut f = vec![0.0; n];
            f[v] = 1.0;
            f
        })
        .chain((0..opts.restarts).map(|i| random_start(n, opts.seed, i)));
    for f0 in starts {
        if op.ratio_f64_unchecked(&f0, p).is_none() {
            continue;
        }
        let (r, f) = climb(&op, p, f0, opts, &mut evals);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, f));
        }
    }
    let (_, f) = best.expect("indicators are never constant on two or more vertices");
    let f = normalize(g, p, &f);
    let value = op.ratio_f64(&f, p)?;
    Ok(ConstantCertificate {
        graph: g.clone(),
        p,
        value: Number::Float(value),
        extremizer: VertexFunction::Float(f),
        mode: Mode::NumericLowerBound,
        stats: SearchStats { candidates: evals, time_ms: start.elapsed().as_millis() as u64, ..Default::default() },
    })
}
