//! Rooted trees whose variation constant grows without bound.
//!
//! The tree hangs a single vertex below the root and then runs through
//! levels of geometrically growing length. Every vertex at depth
//! `lengths[i] - 1` (for `i = 1..=m`) has `k` children, every vertex at
//! depth `lengths[m + 1] - 1` has `k^2` leaf children, and every other
//! non-leaf has one child. With `f` the indicator of the root, `Var_p f = 1`
//! while `Var_p(M f)` grows like a power of `k` when `m > p`.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::number::{format_rational, Rational};

pub const DEFAULT_VERTEX_BUDGET: u128 = 2_000_000;

/// `1, 2, 5, 11, 23, ...`: from the second term on, each is one more than twice the previous
/// (equivalently `3 * 2^(i-1) - 1` for `i >= 1`). Returns `m + 2` terms.
pub fn level_lengths(m: usize) -> Vec<usize> {
    let mut out = vec![1usize];
    for i in 1..=m + 1 {
        let sum: usize = out.iter().sum();
        out.push(i + sum);
    }
    for (i, &l) in out.iter().enumerate().skip(1) {
        debug_assert_eq!(l, 3 * (1 << (i - 1)) - 1);
        if i >= 2 {
            debug_assert_eq!(l, 2 * out[i - 1] + 1);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    pub k: usize,
    pub m: usize,
}

/// Indices of the distinguished vertices, all on the leftmost root path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Marked {
    pub root: usize,
    /// `a[i - 1]` is the `i`-th branching vertex, `i = 1..=m + 1`.
    pub a: Vec<usize>,
    /// `b[i - 1]` is the first child of `a[i - 1]`, `i = 1..=m`.
    pub b: Vec<usize>,
    /// The child of the last `b`.
    pub w: usize,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub graph: Graph,
    pub marked: Marked,
    /// Depth of every vertex.
    pub depth: Vec<usize>,
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={},m={}", self.k, self.m)
    }
}

impl ConstructionSpec {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("branching factor must be at least 2, got {k}")));
        }
        if m < 1 {
            return Err(Error::InvalidParameter("depth parameter must be at least 1".into()));
        }
        Ok(Self { k, m })
    }

    /// Parses `k=3,m=2` (keys in any order).
    pub fn parse(text: &str) -> Result<Self> {
        let (mut k, mut m) = (None, None);
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            let val: usize = val.trim().parse().map_err(|_| Error::Parse(format!("bad integer in {part:?}")))?;
            match key.trim() {
                "k" => k = Some(val),
                "m" => m = Some(val),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        match (k, m) {
            (Some(k), Some(m)) => Self::new(k, m),
            _ => Err(Error::Parse(format!("construction needs both k and m, got {text:?}"))),
        }
    }

    pub fn lengths(&self) -> Vec<usize> {
        level_lengths(self.m)
    }

    /// Depth of the deepest (leaf) level.
    pub fn height(&self) -> usize {
        self.lengths()[self.m + 1]
    }

    /// Number of children of each vertex at `depth`.
    pub fn branching(&self, depth: usize) -> u128 {
        let l = self.lengths();
        let k = self.k as u128;
        if depth >= l[self.m + 1] {
            0
        } else if depth == l[self.m + 1] - 1 {
            k * k
        } else if (1..=self.m).any(|i| depth == l[i] - 1) {
            k
        } else {
            1
        }
    }

    /// Vertex count of each level, saturating on overflow.
    pub fn level_sizes(&self) -> Vec<u128> {
        let h = self.height();
        let mut sizes = vec![1u128];
        for t in 0..h {
            sizes.push(sizes[t].saturating_mul(self.branching(t)));
        }
        sizes
    }

    pub fn vertex_count(&self) -> u128 {
        self.level_sizes().iter().fold(0u128, |a, &b| a.saturating_add(b))
    }

    pub fn build(&self) -> Result<Construction> {
        self.build_with_budget(DEFAULT_VERTEX_BUDGET)
    }

    pub fn build_with_budget(&self, budget: u128) -> Result<Construction> {
        let n = self.vertex_count();
        if n > budget {
            return Err(Error::Budget(format!("construction {self} has {n} vertices, budget is {budget}")));
        }
        let sizes = self.level_sizes();
        let n = n as usize;
        let mut start = vec![0usize];
        for s in &sizes {
            start.push(start.last().unwrap() + *s as usize);
        }
        let mut edges = Vec::with_capacity(n - 1);
        let mut depth = vec![0usize; n];
        for t in 0..sizes.len() {
            let b = self.branching(t) as usize;
            for j in 0..sizes[t] as usize {
                let parent = start[t] + j;
                depth[parent] = t;
                for c in 0..b {
                    edges.push((parent, start[t + 1] + j * b + c));
                }
            }
        }
        let graph = Graph::new(n, edges)?;
        let l = self.lengths();
        // The first vertex of each level lies on the leftmost root path.
        let marked = Marked {
            root: 0,
            a: (1..=self.m + 1).map(|i| start[l[i] - 1]).collect(),
            b: (1..=self.m).map(|i| start[l[i]]).collect(),
            w: start[l[self.m] + 1],
        };
        Ok(Construction { spec: *self, graph, marked, depth })
    }

    /// Vertices within `radius` of a vertex at `depth` that lie in its own
    /// subtree (itself included).
    fn below(&self, sizes: &[u128], depth: usize, radius: isize) -> u128 {
        if radius < 0 {
            return 0;
        }
        let top = (depth + radius as usize).min(sizes.len() - 1);
        (depth..=top).map(|t| sizes[t] / sizes[depth]).sum()
    }

    /// `|B(x, r)|` for any vertex `x` at `depth`. Counts, for each ancestor
    /// `y` at distance `j`, the part of `y`'s subtree within `r - j` that
    /// avoids the child leading back towards `x`.
    pub fn ball_size(&self, depth: usize, radius: usize) -> u128 {
        let sizes = self.level_sizes();
        let r = radius as isize;
        let mut total = self.below(&sizes, depth, r);
        for j in 1..=depth.min(radius) {
            let y = depth - j;
            let j = j as isize;
            total += self.below(&sizes, y, r - j) - self.below(&sizes, y + 1, r - j - 1);
        }
        total
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionReport {
    pub spec: ConstructionSpec,
    pub p: f64,
    pub vertices: u128,
    pub edges: u128,
    pub lengths: Vec<usize>,
    /// Value of `M f` on each level for `f` the root indicator.
    #[serde(serialize_with = "ser_rationals")]
    pub level_values: Vec<Rational>,
    /// `Var_p(M f)^p` exactly, available for integer `p`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub variation_power: Option<Rational>,
    /// `Var_p(M f) / Var_p f`; `Var_p f = 1`.
    pub ratio: f64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub ratio_exact: Option<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub value_at_last_b: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub value_at_w: Rational,
    /// `(k^m)^(1/p) * (M f(b_m) - M f(w))` when positive.
    pub growth_bound: Option<f64>,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

fn ser_opt_rational<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

fn pow_rational(q: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * q)
}

/// `M f` level by level for `f` the root indicator: the root keeps `1`, and
/// a vertex at depth `t` first sees the root at radius `t`, where the
/// average is `1 / |B(x, t)|`; larger balls only lower it.
pub fn root_indicator_profile(spec: &ConstructionSpec) -> Vec<Rational> {
    (0..=spec.height())
        .map(|t| {
            if t == 0 {
                Rational::one()
            } else {
                Rational::new(1.into(), spec.ball_size(t, t).into())
            }
        })
        .collect()
}

/// Exact variation of `M f` for the root indicator. Does not need the tree
/// to be materialized.
pub fn construction_ratio(spec: &ConstructionSpec, p: f64) -> Result<ConstructionReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositiveExponent(p));
    }
    let sizes = spec.level_sizes();
    let g = root_indicator_profile(spec);
    let diffs: Vec<(u128, Rational)> =
        (0..spec.height()).map(|t| (sizes[t + 1], (&g[t] - &g[t + 1]).abs())).collect();
    let int_p = (p.fract() == 0.0 && p <= 64.0).then_some(p as u32);
    let variation_power = int_p.map(|e| {
        diffs
            .iter()
            .fold(Rational::zero(), |acc, (c, d)| acc + Rational::from_integer((*c).into()) * pow_rational(d, e))
    });
    let ratio = match &variation_power {
        Some(v) => v.to_f64().unwrap_or(f64::INFINITY).powf(1.0 / p),
        None => diffs
            .iter()
            .map(|(c, d)| *c as f64 * d.to_f64().unwrap_or(0.0).powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    };
    let ratio_exact = if int_p == Some(1) { variation_power.clone() } else { None };
    let l = spec.lengths();
    let value_at_last_b = g[l[spec.m]].clone();
    let value_at_w = g[l[spec.m] + 1].clone();
    let gap = &value_at_last_b - &value_at_w;
    let growth_bound = gap
        .is_positive()
        .then(|| (spec.k as f64).powi(spec.m as i32).powf(1.0 / p) * gap.to_f64().unwrap_or(0.0));
    let vertices = spec.vertex_count();
    Ok(ConstructionReport {
        spec: *spec,
        p,
        vertices,
        edges: vertices - 1,
        lengths: l,
        level_values: g,
        variation_power,
        ratio,
        ratio_exact,
        value_at_last_b,
        value_at_w,
        growth_bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub found: bool,
    pub target: f64,
    pub best: ConstructionReport,
    pub tried: Vec<(usize, f64)>,
}

/// Fixes `m = ceil(p) + 1` and raises `k` from 2 until the ratio exceeds
/// `target`. `found` is false when the vertex budget stops the search; the
/// best ratio reached is reported either way.
pub fn witness_large_constant(p: f64, target: f64, budget: u128) -> Result<SearchOutcome> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositiveExponent(p));
    }
    let m = p.ceil() as usize + 1;
    let mut best: Option<ConstructionReport> = None;
    let mut tried = Vec::new();
    for k in 2.. {
        let spec = ConstructionSpec::new(k, m)?;
        if spec.vertex_count() > budget {
            break;
        }
        let rep = construction_ratio(&spec, p)?;
        tried.push((k, rep.ratio));
        let done = rep.ratio > target;
        if best.as_ref().is_none_or(|b| rep.ratio > b.ratio) {
            best = Some(rep);
        }
        if done {
            return Ok(SearchOutcome { found: true, target, best: best.unwrap(), tried });
        }
    }
    match best {
        Some(best) => Ok(SearchOutcome { found: false, target, best, tried }),
        None => Err(Error::Budget(format!("even k=2, m={m} exceeds the vertex budget of {budget}"))),
    }
}

/// The ball around the last `b` whose radius reaches the root, measured
/// on the built tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchBall {
    pub size: usize,
    /// Vertices of the ball on each level it meets, top to bottom.
    pub per_level: Vec<usize>,
    pub to_root: u32,
    pub to_last_a: u32,
}

/// `|B(b_m, d(b_m, root))|` by breadth-first search, with the per-level
/// counts inside that ball.
pub fn last_branch_ball(spec: &ConstructionSpec) -> Result<BranchBall> {
    let c = spec.build()?;
    let b = *c.marked.b.last().expect("m >= 1");
    let dist = c.graph.bfs(b);
    let radius = dist[c.marked.root].expect("tree is connected");
    let to_a = dist[*c.marked.a.last().expect("m >= 1")].expect("tree is connected");
    let mut per_level = vec![0usize; spec.height() + 1];
    let mut size = 0;
    for (v, d) in dist.iter().enumerate() {
        if d.is_some_and(|d| d <= radius) {
            size += 1;
            per_level[c.depth[v]] += 1;
        }
    }
    per_level.retain(|&x| x > 0);
    Ok(BranchBall { size, per_level, to_root: radius, to_last_a: to_a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximal::MaximalOperator;
    use crate::number::rat_int;

    #[test]
    fn lengths() {
        assert_eq!(level_lengths(3), vec![1, 2, 5, 11, 23]);
        assert_eq!(level_lengths(4)[5], 47);
        for w in level_lengths(6)[1..].windows(2) {
            assert_eq!(w[1], 2 * w[0] + 1);
        }
    }

    #[test]
    fn parse_and_reject() {
        assert_eq!(ConstructionSpec::parse("m=2, k=5").unwrap(), ConstructionSpec { k: 5, m: 2 });
        assert!(ConstructionSpec::parse("k=1,m=2").is_err());
        assert!(ConstructionSpec::parse("k=3").is_err());
        assert!(ConstructionSpec::parse("k=3,m=2,x=1").is_err());
    }

    #[test]
    fn shape_of_small_trees() {
        let c = ConstructionSpec::new(2, 1).unwrap().build().unwrap();
        assert_eq!(c.spec.height(), 5);
        assert_eq!(c.graph.degree(0), 1);
        assert_eq!(c.depth.iter().copied().max(), Some(5));
        let c = ConstructionSpec::new(3, 3).unwrap().build().unwrap();
        assert_eq!(c.spec.height(), 23);
        let bm = *c.marked.b.last().unwrap();
        assert_eq!(c.depth.iter().filter(|&&d| d == c.depth[bm]).count(), 27);
        assert_eq!(c.graph.size() + 1, c.graph.order());
        assert_eq!(c.graph.order() as u128, c.spec.vertex_count());
        // Non-branching interior vertices have exactly one child.
        for v in 0..c.graph.order() {
            let children = c.graph.degree(v) - usize::from(v != 0);
            assert_eq!(children as u128, c.spec.branching(c.depth[v]));
        }
    }

    #[test]
    fn marked_vertices() {
        let c = ConstructionSpec::new(3, 2).unwrap().build().unwrap();
        let l = c.spec.lengths();
        let d = c.graph.bfs(*c.marked.b.last().unwrap());
        let root = d[c.marked.root].unwrap();
        assert_eq!(root as usize, l[2]);
        assert_eq!(d[*c.marked.a.last().unwrap()], Some(root));
        assert_eq!(d[c.marked.w], Some(1));
        assert_eq!(c.graph.neighbors(c.marked.a[0]).len(), 1 + 3);
    }

    #[test]
    fn analytic_balls_match_bfs() {
        for (k, m) in [(2, 1), (3, 2), (2, 3)] {
            let spec = ConstructionSpec::new(k, m).unwrap();
            let c = spec.build().unwrap();
            for t in 0..=spec.height() {
                let x = c.depth.iter().position(|&d| d == t).unwrap();
                let dist = c.graph.bfs(x);
                for r in 0..=spec.height() + t {
                    let bfs = dist.iter().filter(|d| d.unwrap() as usize <= r).count() as u128;
                    assert_eq!(spec.ball_size(t, r), bfs, "k={k} m={m} t={t} r={r}");
                }
            }
        }
    }

    #[test]
    fn profile_matches_maximal_operator() {
        for (k, m) in [(2, 1), (3, 1), (2, 2)] {
            let spec = ConstructionSpec::new(k, m).unwrap();
            let c = spec.build().unwrap();
            let op = MaximalOperator::new(&c.graph).unwrap();
            let mut f = vec![rat_int(0); c.graph.order()];
            f[0] = rat_int(1);
            let direct = op.apply(&f).unwrap().mvalues;
            let levels = root_indicator_profile(&spec);
            for v in 0..c.graph.order() {
                assert_eq!(direct[v], levels[c.depth[v]]);
            }
            let rep = construction_ratio(&spec, 1.0).unwrap();
            assert_eq!(rep.ratio_exact.unwrap(), op.ratio_exact(&f).unwrap());
        }
    }

    #[test]
    fn value_at_w_is_small() {
        for k in 2..6 {
            for m in 1..4 {
                let rep = construction_ratio(&ConstructionSpec::new(k, m).unwrap(), 1.0).unwrap();
                assert!(rep.value_at_w <= Rational::new(1.into(), ((k * k) as i64).into()));
            }
        }
    }

    #[test]
    fn ratio_grows_with_k() {
        let r: Vec<Rational> = (2..=8)
            .map(|k| construction_ratio(&ConstructionSpec::new(k, 2).unwrap(), 1.0).unwrap().ratio_exact.unwrap())
            .collect();
        assert!(r.windows(2).all(|w| w[0] < w[1]), "{r:?}");
    }

    #[test]
    fn search() {
        let out = witness_large_constant(1.0, 0.0, DEFAULT_VERTEX_BUDGET).unwrap();
        assert!(out.found);
        assert_eq!(out.best.spec, ConstructionSpec { k: 2, m: 2 });
        let out = witness_large_constant(1.0, 1.0, DEFAULT_VERTEX_BUDGET).unwrap();
        assert!(out.found && out.best.ratio > 1.0);
        let out = witness_large_constant(1.0, 1e9, 10_000).unwrap();
        assert!(!out.found);
        assert!(witness_large_constant(1.0, 1.0, 10).is_err());
    }

    #[test]
    fn non_integer_exponent() {
        let rep = construction_ratio(&ConstructionSpec::new(3, 2).unwrap(), 1.5).unwrap();
        assert!(rep.variation_power.is_none() && rep.ratio > 0.0);
        let two = construction_ratio(&ConstructionSpec::new(3, 2).unwrap(), 2.0).unwrap();
        assert!(two.variation_power.is_some());
    }

    #[test]
    fn last_branch_ball_is_thin() {
        for (k, m) in [(2, 1), (3, 1), (3, 2), (2, 3), (5, 2)] {
            let spec = ConstructionSpec::new(k, m).unwrap();
            let b = last_branch_ball(&spec).unwrap();
            assert_eq!(b.to_root, b.to_last_a, "{spec}");
            assert_eq!(b.to_root as usize, spec.lengths()[m]);
            assert!(b.per_level.iter().all(|&c| c <= k), "{spec}: {:?}", b.per_level);
            assert!(b.size <= k * b.per_level.len());
            assert_eq!(b.size as u128, spec.ball_size(spec.lengths()[m], b.to_root as usize));
        }
    }
}
