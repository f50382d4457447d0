//! Exact `p = 1` constant by exhaustive decomposition into linearity cones.
//!
//! Without loss of generality `f >= 0` (replacing `f` by `|f|` keeps `M f`
//! and does not increase the variation) and `min f = 0` (shifting commutes
//! with ball averages). Fix the vertex `pin` where the minimum sits and work
//! with the remaining `n - 1` coordinates. Choosing, for every vertex, which
//! radius realizes the maximum, and for every edge which endpoint is larger,
//! cuts the nonnegative orthant into polyhedral cones. On each cone the
//! denominator `Var f` is linear and `Var M f` is convex, so the ratio on
//! the slice `Var f = 1` peaks at an extreme ray. Only cones with nonempty
//! interior are kept: their union is closed and its complement in the
//! orthant is a relatively open set covered by finitely many lower
//! dimensional cones, hence empty.
//!
//! Every extreme ray is evaluated from scratch through the maximal operator,
//! so the bookkeeping above only has to be complete, not exact.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use super::certificate::{ConstantCertificate, Mode, SearchStats};
use crate::error::{Error, Result};
use crate::graph::{orbits, Graph};
use crate::lp::{extreme_rays, extreme_rays_i128, solve_int, IntRow, RawOutcome, Relation};
use crate::maximal::{MaximalOperator, VertexFunction};
use crate::number::{make_primitive, Number, Rational};

pub const DEFAULT_EXACT_LIMIT: usize = 6;
/// Largest order accepted at all; runs at this size are best effort.
pub const HARD_EXACT_LIMIT: usize = 7;

#[derive(Debug, Clone)]
pub struct ExactOptions {
    /// Pin the minimum only at one vertex per automorphism orbit.
    pub symmetry: bool,
    pub size_limit: usize,
    /// Stop after this many leaf cones.
    pub max_regions: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Compare the cone's predicted maximal function with the direct one at
    /// every extreme ray.
    pub check_regions: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self { symmetry: true, size_limit: DEFAULT_EXACT_LIMIT, max_regions: None, time_limit: None, check_regions: false }
    }
}

enum Decision {
    Radius(usize),
    Edge,
}

/// Row blocks available at each decision: `options[k][c]` are the rows
/// added when option `c` is taken at decision `k`.
struct Context<'a> {
    op: &'a MaximalOperator,
    n: usize,
    pin: usize,
    dim: usize,
    decisions: Vec<Decision>,
    options: Vec<Vec<Vec<Vec<i128>>>>,
    opts: &'a ExactOptions,
    deadline: Option<Instant>,
    leaves: &'a AtomicU64,
    stop: &'a AtomicBool,
}

/// Best candidate: value as a reduced fraction and the integer ray.
#[derive(Clone)]
struct Best {
    num: BigInt,
    den: BigInt,
    ray: Vec<i128>,
}

impl Best {
    fn value(&self) -> Rational {
        Rational::new(self.num.clone(), self.den.clone())
    }

    /// `f / Var f`, the normalized witness used for tie-breaking.
    fn normalized(&self, g: &Graph) -> Vec<Rational> {
        let var: i128 = g.edges().iter().map(|&(u, v)| (self.ray[u] - self.ray[v]).abs()).sum();
        self.ray.iter().map(|&x| Rational::new(x.into(), var.into())).collect()
    }

    fn better_than(&self, other: &Best, g: &Graph) -> bool {
        match (&self.num * &other.den).cmp(&(&other.num * &self.den)) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.normalized(g) < other.normalized(g),
        }
    }
}

struct Acc {
    stats: SearchStats,
    best: Option<Best>,
    pattern: Vec<usize>,
}

impl Acc {
    fn offer(&mut self, cand: Best, g: &Graph) {
        if self.best.as_ref().is_none_or(|b| cand.better_than(b, g)) {
            self.best = Some(cand);
        }
    }
}

fn dot(a: &[i128], x: &[i128]) -> Option<i128> {
    a.iter().zip(x).try_fold(0i128, |acc, (p, q)| acc.checked_add(p.checked_mul(*q)?))
}

fn strictly_inside(rows: &[Vec<i128>], x: &[i128]) -> bool {
    rows.iter().all(|r| dot(r, x).is_some_and(|v| v > 0))
}

/// Integer point strictly inside `{x : A x >= 0}`, or `None` when the cone
/// has empty interior. Solves `max t` subject to `A x >= t`, `t <= 1`,
/// `x >= 0`; the origin is feasible so phase one is never needed.
fn interior_point(rows: &[Vec<i128>], dim: usize) -> Option<Vec<i128>> {
    let t = dim;
    let mut lp: Vec<IntRow<i128>> = rows
        .iter()
        .map(|r| {
            let mut c: Vec<i128> = r.iter().map(|v| -v).collect();
            c.push(1);
            IntRow { coeffs: c, rel: Relation::Le, rhs: 0 }
        })
        .collect();
    let mut bound = vec![0i128; dim + 1];
    bound[t] = 1;
    lp.push(IntRow { coeffs: bound, rel: Relation::Le, rhs: 1 });
    let mut obj = vec![0i128; dim + 1];
    obj[t] = 1;
    let out = match solve_int::<i128>(dim + 1, &lp, &obj, false) {
        Ok(o) => o,
        Err(_) => {
            let big: Vec<IntRow<BigInt>> = lp
                .iter()
                .map(|r| IntRow { coeffs: r.coeffs.iter().map(|&v| v.into()).collect(), rel: r.rel, rhs: r.rhs.into() })
                .collect();
            let obj: Vec<BigInt> = obj.iter().map(|&v| v.into()).collect();
            solve_int::<BigInt>(dim + 1, &big, &obj, false).expect("BigInt never overflows")
        }
    };
    let RawOutcome::Optimal { x, value, .. } = out else {
        unreachable!("the origin is feasible and t is bounded")
    };
    if !value.is_positive() {
        return None;
    }
    let l = x[..dim].iter().fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
    let mut ints: Vec<i128> = x[..dim]
        .iter()
        .map(|q| i128::try_from(q.numer() * (&l / q.denom())).ok())
        .collect::<Option<_>>()?;
    make_primitive(&mut ints);
    Some(ints)
}

impl Context<'_> {
    /// Index of vertex `v` among the free coordinates.
    fn coord(&self, v: usize) -> Option<usize> {
        match v.cmp(&self.pin) {
            Ordering::Less => Some(v),
            Ordering::Equal => None,
            Ordering::Greater => Some(v - 1),
        }
    }

    fn row_from_vertices(&self, coeffs: &[i128]) -> Option<Vec<i128>> {
        let mut row = vec![0i128; self.dim];
        for v in 0..self.n {
            if let Some(j) = self.coord(v) {
                row[j] = coeffs[v];
            }
        }
        make_primitive(&mut row);
        row.iter().any(|&x| x != 0).then_some(row)
    }

    fn full(&self, x: &[i128]) -> Vec<i128> {
        (0..self.n).map(|v| self.coord(v).map_or(0, |j| x[j])).collect()
    }

    fn build(&mut self) {
        let balls = self.op.balls();
        for v in 0..self.n {
            let radii = balls.max_radius(v) + 1;
            let mut per_choice = Vec::with_capacity(radii);
            for r in 0..radii {
                let br = balls.ball(v, r);
                let mut rows = Vec::new();
                for s in (0..radii).filter(|&s| s != r) {
                    let bs = balls.ball(v, s);
                    // |B_s| * sum_{B_r} f - |B_r| * sum_{B_s} f >= 0
                    let mut c = vec![0i128; self.n];
                    br.iter().for_each(|&w| c[w] += bs.len() as i128);
                    bs.iter().for_each(|&w| c[w] -= br.len() as i128);
                    rows.extend(self.row_from_vertices(&c));
                }
                per_choice.push(rows);
            }
            self.decisions.push(Decision::Radius(v));
            self.options.push(per_choice);
        }
        for &(u, w) in self.op.graph().edges() {
            let mut c = vec![0i128; self.n];
            c[u] = 1;
            c[w] = -1;
            let neg: Vec<i128> = c.iter().map(|x| -x).collect();
            let opts = [c, neg].iter().map(|c| self.row_from_vertices(c).into_iter().collect()).collect();
            self.decisions.push(Decision::Edge);
            self.options.push(opts);
        }
    }

    fn out_of_budget(&self) -> bool {
        if self.stop.load(AtomicOrdering::Relaxed) {
            return true;
        }
        let over_time = self.deadline.is_some_and(|d| Instant::now() >= d);
        let over_regions = self.opts.max_regions.is_some_and(|m| self.leaves.load(AtomicOrdering::Relaxed) >= m);
        if over_time || over_regions {
            self.stop.store(true, AtomicOrdering::Relaxed);
        }
        over_time || over_regions
    }

    fn dfs(&self, level: usize, rows: &mut Vec<Vec<i128>>, inner: &[i128], acc: &mut Acc) -> Result<()> {
        if self.out_of_budget() {
            acc.stats.truncated = true;
            return Ok(());
        }
        if level == self.decisions.len() {
            return self.leaf(rows, acc);
        }
        for (choice, block) in self.options[level].iter().enumerate() {
            acc.stats.regions_explored += 1;
            let before = rows.len();
            rows.extend(block.iter().cloned());
            let child = if strictly_inside(block, inner) {
                Some(inner.to_vec())
            } else {
                acc.stats.lp_solves += 1;
                interior_point(rows, self.dim)
            };
            match child {
                Some(w) => {
                    if let Decision::Radius(v) = self.decisions[level] {
                        acc.pattern[v] = choice;
                    }
                    self.dfs(level + 1, rows, &w, acc)?;
                }
                None => acc.stats.regions_pruned += 1,
            }
            rows.truncate(before);
        }
        Ok(())
    }

    fn leaf(&self, rows: &[Vec<i128>], acc: &mut Acc) -> Result<()> {
        acc.stats.regions_feasible += 1;
        self.leaves.fetch_add(1, AtomicOrdering::Relaxed);
        let rays: Vec<Vec<BigInt>> = match extreme_rays_i128(rows, self.dim) {
            Some(r) => r.expect("orthant rows make the cone pointed").into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect(),
            None => {
                let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| v.into()).collect()).collect();
                extreme_rays(&big, self.dim).expect("orthant rows make the cone pointed")
            }
        };
        for ray in rays {
            acc.stats.candidates += 1;
            let Some(x) = ray.iter().map(|v| i128::try_from(v).ok()).collect::<Option<Vec<i128>>>() else {
                return Err(Error::Domain("extreme ray does not fit in machine integers".into()));
            };
            let f = self.full(&x);
            let (num, den) = match self.op.ratio_scaled(&f) {
                Some((a, b)) => (BigInt::from(a), BigInt::from(b)),
                None => {
                    let q: Vec<Rational> = f.iter().map(|&v| Rational::from_integer(v.into())).collect();
                    let r = self.op.ratio_exact(&q)?;
                    (r.numer().clone(), r.denom().clone())
                }
            };
            if self.opts.check_regions {
                self.check_pattern(&f, &acc.pattern)?;
            }
            acc.offer(Best { num, den, ray: f }, self.op.graph());
        }
        Ok(())
    }

    /// The radius pattern's ball averages must equal the direct maximal
    /// function on every point of the closed cone.
    fn check_pattern(&self, f: &[i128], pattern: &[usize]) -> Result<()> {
        let q: Vec<Rational> = f.iter().map(|&v| Rational::from_integer(v.into())).collect();
        let direct = self.op.apply(&q)?.mvalues;
        for v in 0..self.n {
            let ball = self.op.balls().ball(v, pattern[v]);
            let s: Rational = ball.iter().map(|&w| q[w].clone()).sum();
            let predicted = s / Rational::from_integer(BigInt::from(ball.len()));
            if predicted != direct[v] {
                return Err(Error::Domain(format!(
                    "cone predicts M f({v}) = {predicted} but direct evaluation gives {}",
                    direct[v]
                )));
            }
        }
        Ok(())
    }
}

/// Candidates every search starts from: the indicator of each vertex.
fn indicator_candidates(op: &MaximalOperator, acc: &mut Acc) {
    let n = op.graph().order();
    for v in 0..n {
        let mut f = vec![0i128; n];
        f[v] = 1;
        if let Some((a, b)) = op.ratio_scaled(&f) {
            acc.stats.candidates += 1;
            acc.offer(Best { num: a.into(), den: b.into(), ray: f }, op.graph());
        }
    }
}

/// The exact `p = 1` variation constant with a witness normalized to
/// `Var f = 1`, `min f = 0`. Falls back to the best value found, reported
/// in numeric-lower-bound mode, if a budget stops the search.
pub fn exact_constant_p1(g: &Graph, opts: &ExactOptions) -> Result<ConstantCertificate> {
    let n = g.order();
    let limit = opts.size_limit.min(HARD_EXACT_LIMIT);
    if n > limit {
        return Err(Error::SizeLimit { n, limit });
    }
    if n < 2 {
        return Err(Error::InvalidParameter("the constant needs at least two vertices".into()));
    }
    let start = Instant::now();
    let op = MaximalOperator::new(g)?;
    let pins: Vec<usize> = if opts.symmetry {
        let reps = orbits(g);
        (0..n).filter(|&v| reps[v] == v).collect()
    } else {
        (0..n).collect()
    };
    let leaves = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let deadline = opts.time_limit.map(|t| start + t);

    let results: Vec<Result<Acc>> = pins
        .par_iter()
        .map(|&pin| {
            let mut ctx = Context {
                op: &op,
                n,
                pin,
                dim: n - 1,
                decisions: Vec::new(),
                options: Vec::new(),
                opts,
                deadline,
                leaves: &leaves,
                stop: &stop,
            };
            ctx.build();
            let mut acc = Acc { stats: SearchStats::default(), best: None, pattern: vec![0; n] };
            let mut rows: Vec<Vec<i128>> = (0..n - 1)
                .map(|j| {
                    let mut e = vec![0i128; n - 1];
                    e[j] = 1;
                    e
                })
                .collect();
            ctx.dfs(0, &mut rows, &vec![1i128; n - 1], &mut acc)?;
            Ok(acc)
        })
        .collect();

    let mut total = Acc { stats: SearchStats::default(), best: None, pattern: Vec::new() };
    indicator_candidates(&op, &mut total);
    for r in results {
        let acc = r?;
        total.stats.absorb(&acc.stats);
        if let Some(b) = acc.best {
            total.offer(b, g);
        }
    }
    let best = total.best.expect("a connected graph with two vertices has a non-constant indicator");
    let mut stats = total.stats;
    stats.time_ms = start.elapsed().as_millis() as u64;
    let value = best.value();
    let extremizer = VertexFunction::Exact(best.normalized(g));
    let cert = ConstantCertificate {
        graph: g.clone(),
        p: 1.0,
        value: Number::Exact(value),
        extremizer,
        mode: if stats.truncated { Mode::NumericLowerBound } else { Mode::Exact },
        stats,
    };
    if !cert.validate() {
        return Err(Error::Domain("extremizer does not reproduce the reported value".into()));
    }
    Ok(cert)
}

/// Shorthand for the exact value with default options.
pub fn exact_value(g: &Graph) -> Result<Rational> {
    match exact_constant_p1(g, &ExactOptions::default())?.value {
        Number::Exact(q) => Ok(q),
        Number::Float(_) => unreachable!("the exact engine reports rationals"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_connected, named_graph, parse_graph_spec};
    use crate::number::{rat, rat_int};
    use num_traits::Zero;

    fn exact(g: &Graph) -> ConstantCertificate {
        exact_constant_p1(g, &ExactOptions { check_regions: true, ..Default::default() }).unwrap()
    }

    #[test]
    fn three_vertices() {
        for g in enumerate_connected(3).unwrap() {
            let c = exact(&g);
            assert_eq!(c.value, Number::Exact(rat(2, 3)));
            assert_eq!(c.mode, Mode::Exact);
        }
    }

    #[test]
    fn two_vertices() {
        assert_eq!(exact(&named_graph("K", &[2]).unwrap()).value, Number::Exact(rat(1, 2)));
    }

    #[test]
    fn four_vertices_all_three_quarters() {
        for g in enumerate_connected(4).unwrap() {
            let c = exact(&g);
            assert_eq!(c.value, Number::Exact(rat(3, 4)), "{g:?}");
            assert!(c.validate());
            let VertexFunction::Exact(f) = &c.extremizer else { panic!() };
            assert!(f.iter().any(|x| x.is_zero()));
            assert!(f.iter().all(|x| !x.is_negative()));
        }
    }

    #[test]
    fn cycle_witness_shape() {
        // One vertex at 1/2, the rest at 0, up to rotation.
        let c = exact(&named_graph("C", &[4]).unwrap());
        let VertexFunction::Exact(mut f) = c.extremizer else { panic!() };
        f.sort();
        assert_eq!(f, vec![rat_int(0), rat_int(0), rat_int(0), rat(1, 2)]);
    }

    #[test]
    fn symmetry_does_not_change_the_value() {
        for spec in ["paw", "diamond", "P5", "S5"] {
            let g = parse_graph_spec(spec).unwrap();
            let a = exact_constant_p1(&g, &ExactOptions::default()).unwrap();
            let b = exact_constant_p1(&g, &ExactOptions { symmetry: false, ..Default::default() }).unwrap();
            assert_eq!(a.value, b.value, "{spec}");
            assert!(b.stats.regions_feasible >= a.stats.regions_feasible);
        }
    }

    #[test]
    fn budget_degrades_to_lower_bound() {
        let g = named_graph("P", &[5]).unwrap();
        let c = exact_constant_p1(&g, &ExactOptions { max_regions: Some(1), ..Default::default() }).unwrap();
        assert_eq!(c.mode, Mode::NumericLowerBound);
        assert!(c.stats.truncated);
        assert!(c.validate());
    }

    #[test]
    fn size_limits() {
        let g = named_graph("P", &[7]).unwrap();
        assert!(matches!(exact_constant_p1(&g, &ExactOptions::default()), Err(Error::SizeLimit { .. })));
        let g = named_graph("P", &[8]).unwrap();
        let opts = ExactOptions { size_limit: 10, ..Default::default() };
        assert!(matches!(exact_constant_p1(&g, &opts), Err(Error::SizeLimit { limit: 7, .. })));
        assert!(exact_constant_p1(&named_graph("K", &[1]).unwrap(), &ExactOptions::default()).is_err());
    }

    #[test]
    fn interior_point_detects_flat_cones() {
        // x >= 0, y >= 0, x - y >= 0, y - x >= 0: the diagonal ray only.
        let rows = vec![vec![1, 0], vec![0, 1], vec![1, -1], vec![-1, 1]];
        assert!(interior_point(&rows, 2).is_none());
        let w = interior_point(&rows[..3], 2).unwrap();
        assert!(strictly_inside(&rows[..3], &w));
    }
}
