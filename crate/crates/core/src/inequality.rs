//! Numerical checks of the scalar inequalities behind the complete-graph
//! constant `1 - 1/n`.
//!
//! Every checker returns a signed margin (right side minus left side), so a
//! sweep can report how close it came to a violation rather than a bare
//! yes/no.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::named_graph;
use crate::maximal::MaximalOperator;

/// Margins at or above this count as nonnegative.
pub const MARGIN_TOLERANCE: f64 = -1e-10;
/// Sweeps never sample `p` above this; powers `1/(1-p)` blow up near 1.
pub const P_CAP: f64 = 0.99;

/// One instance of the two-sided power-sum inequality: `x` holds the gaps
/// above the pivot value, `y` the gaps below it, `u` the pivot's excess
/// over the mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionInstance {
    pub n: usize,
    pub r: usize,
    pub p: f64,
    pub u: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PropositionInstance {
    pub fn validate(&self) -> Result<()> {
        let (n, r) = (self.n, self.r);
        if !(2 <= r && r < n) {
            return Err(Error::Domain(format!("need 2 <= r < n, got r={r}, n={n}")));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::Domain(format!("p must lie in (0,1), got {}", self.p)));
        }
        if self.x.len() != n - r || self.y.len() != r - 1 {
            return Err(Error::Domain(format!(
                "expected {} x and {} y values, got {} and {}",
                n - r,
                r - 1,
                self.x.len(),
                self.y.len()
            )));
        }
        if !(self.u >= 0.0) || self.x.iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::Domain("u and x must be nonnegative".into()));
        }
        if self.y.iter().any(|&v| !(v >= self.u)) {
            return Err(Error::Domain("every y must be at least u".into()));
        }
        let lhs = self.x.iter().sum::<f64>() + n as f64 * self.u;
        let rhs: f64 = self.y.iter().sum();
        if (lhs - rhs).abs() > 1e-12 * lhs.abs().max(rhs.abs()).max(1.0) {
            return Err(Error::Domain(format!("side condition off by {:e}", lhs - rhs)));
        }
        Ok(())
    }
}

/// `(1-1/n)^p (sum x^p + sum y^p) - (sum x^p + (r-1) u^p)`.
pub fn check_proposition(inst: &PropositionInstance) -> Result<f64> {
    inst.validate()?;
    let p = inst.p;
    let sx: f64 = inst.x.iter().map(|v| v.powf(p)).sum();
    let sy: f64 = inst.y.iter().map(|v| v.powf(p)).sum();
    let lhs = sx + (inst.r - 1) as f64 * inst.u.powf(p);
    let rhs = (1.0 - 1.0 / inst.n as f64).powf(p) * (sx + sy);
    Ok(rhs - lhs)
}

/// Draws an instance with `x, u ~ |N(0,1)|` and the mass `sum x + n u`
/// spread over the `y` so that each `y >= u`. A quarter of the draws pin
/// some `y` to exactly `u`, and some zero out `u` or parts of `x`, to keep
/// the boundary cases in the sample.
pub fn sample_proposition<R: Rng>(rng: &mut R, max_n: usize) -> PropositionInstance {
    let n = rng.random_range(3..=max_n.max(3));
    let r = rng.random_range(2..n);
    let p = rng.random_range(0.01..=P_CAP);
    let half_normal = |rng: &mut R| -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        z.abs()
    };
    let mut u = half_normal(rng);
    if rng.random_bool(0.1) {
        u = 0.0;
    }
    let x: Vec<f64> = (0..n - r).map(|_| if rng.random_bool(0.1) { 0.0 } else { half_normal(rng) }).collect();
    let total = x.iter().sum::<f64>() + n as f64 * u;
    let slack = total - (r - 1) as f64 * u;
    let pin = rng.random_bool(0.25);
    let mut w: Vec<f64> = (0..r - 1)
        .map(|i| if pin && i + 1 < r - 1 && rng.random_bool(0.5) { 0.0 } else { Exp1.sample(rng) })
        .collect();
    if w.iter().all(|&v| v == 0.0) {
        w[r - 2] = 1.0;
    }
    let wsum: f64 = w.iter().sum();
    let mut y: Vec<f64> = w.iter().map(|&v| u + slack * v / wsum).collect();
    // Close the sum exactly on the largest share so rounding never pushes a
    // pinned coordinate below u.
    let big = (0..y.len()).max_by(|&a, &b| w[a].total_cmp(&w[b])).unwrap();
    let rest: f64 = y.iter().enumerate().filter(|&(i, _)| i != big).map(|(_, v)| v).sum();
    y[big] = (total - rest).max(u);
    PropositionInstance { n, r, p, u, x, y }
}

/// Both sides of the complete-graph inequality computed two ways.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarcompleteCheck {
    /// `rhs - lhs` from the sorted-values formula.
    pub margin: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Split index: the first (1-based, sorted) value at or above the mean.
    pub r: usize,
    /// `sum |Δ M f|^p` through the maximal operator.
    pub pipeline_lhs: f64,
    /// `(1-1/n)^p sum |Δ f|^p` through the same edge list.
    pub pipeline_rhs: f64,
}

impl VarcompleteCheck {
    /// Largest gap between the two computation paths, relative to the
    /// size of the right side.
    pub fn disagreement(&self) -> f64 {
        let scale = self.rhs.abs().max(1.0);
        ((self.lhs - self.pipeline_lhs).abs()).max((self.rhs - self.pipeline_rhs).abs()) / scale
    }
}

/// Differences this small relative to the data are rounding noise from
/// averaging in different orders; raising them to a small power would turn
/// them into visible errors.
fn snapped_pow(d: f64, p: f64, scale: f64) -> f64 {
    let d = d.abs();
    if d <= 1e-13 * scale {
        0.0
    } else {
        d.powf(p)
    }
}

/// Reusable complete-graph operator for [`check_varcomplete_with`].
pub fn complete_operator(n: usize) -> Result<MaximalOperator> {
    MaximalOperator::new(&named_graph("K", &[n])?)
}

pub fn check_varcomplete(n: usize, p: f64, f: &[f64]) -> Result<VarcompleteCheck> {
    check_varcomplete_with(&complete_operator(n)?, p, f)
}

pub fn check_varcomplete_with(op: &MaximalOperator, p: f64, f: &[f64]) -> Result<VarcompleteCheck> {
    let n = op.graph().order();
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositiveExponent(p));
    }
    if f.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: f.len() });
    }
    if f.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::Domain("f must be nonnegative".into()));
    }
    let scale = f.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut s = f.to_vec();
    s.sort_by(f64::total_cmp);
    let mut m = s.iter().sum::<f64>() / n as f64;
    if let Some(&near) = s.iter().find(|&&v| (v - m).abs() <= 1e-13 * scale) {
        m = near;
    }
    let r0 = s.iter().position(|&v| v >= m).expect("the maximum is at least the mean");
    let mut top = 0.0;
    for i in r0..n {
        for j in r0..i {
            top += snapped_pow(s[i] - s[j], p, scale);
        }
    }
    let lifted: f64 = s[r0..].iter().map(|&v| snapped_pow(v - m, p, scale)).sum();
    let lhs = top + r0 as f64 * lifted;
    let mut all = 0.0;
    for i in 0..n {
        for j in 0..i {
            all += snapped_pow(s[i] - s[j], p, scale);
        }
    }
    let factor = (1.0 - 1.0 / n as f64).powf(p);
    let rhs = factor * all;

    let mf = op.apply(f)?.mvalues;
    let edges = op.graph().edges();
    let pipeline_lhs = edges.iter().map(|&(a, b)| snapped_pow(mf[a] - mf[b], p, scale)).sum();
    let pipeline_rhs = factor * edges.iter().map(|&(a, b)| snapped_pow(f[a] - f[b], p, scale)).sum::<f64>();
    Ok(VarcompleteCheck { margin: rhs - lhs, lhs, rhs, r: r0 + 1, pipeline_lhs, pipeline_rhs })
}

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("p must lie in (0,1), got {p}")))
    }
}

/// The two-term function whose bound by 1 on `[2, n-1]` closes the
/// argument.
pub fn phi(n: usize, p: f64, x: f64) -> Result<f64> {
    check_open_unit(p)?;
    if n < 3 {
        return Err(Error::Domain(format!("need n >= 3, got {n}")));
    }
    let nf = n as f64;
    if !(2.0..=nf - 1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [2, {}]", n - 1)));
    }
    Ok(phi_unchecked(nf, p, x))
}

fn phi_unchecked(n: f64, p: f64, x: f64) -> f64 {
    let q = 1.0 / (1.0 - p);
    let c = (n / (n - 1.0)).powf(p);
    (c - 1.0).powf(q) * (n - x) + (c * (x - 1.0) - x + 2.0).powf(q) * (n - x + 2.0).powf(-p * q)
}

/// Closed form of `phi(2)`.
pub fn phi_at_two(n: usize, p: f64) -> f64 {
    let (nf, q) = (n as f64, 1.0 / (1.0 - p));
    ((nf - 2.0) * (nf.powf(p) - (nf - 1.0).powf(p)).powf(q) + 1.0) / (nf - 1.0).powf(p * q)
}

/// Closed form of `phi(n-1)`.
pub fn phi_at_top(n: usize, p: f64) -> f64 {
    let (nf, q) = (n as f64, 1.0 / (1.0 - p));
    let a = (nf.powf(p) - (nf - 1.0).powf(p)).powf(q);
    let b = 3f64.powf(-p * q) * ((nf - 2.0) * nf.powf(p) - (nf - 3.0) * (nf - 1.0).powf(p)).powf(q);
    (a + b) / (nf - 1.0).powf(p * q)
}

fn phi_grid(n: usize, points: usize) -> Vec<f64> {
    let hi = n as f64 - 1.0;
    if n == 3 {
        return vec![2.0];
    }
    let k = points.max(3);
    (0..k).map(|i| if i + 1 == k { hi } else { 2.0 + (hi - 2.0) * i as f64 / (k - 1) as f64 }).collect()
}

/// Smallest second difference of `phi` on an even grid of `[2, n-1]`;
/// `+inf` when the domain is a single point.
pub fn check_phi_convexity(n: usize, p: f64, points: usize) -> Result<f64> {
    phi(n, p, 2.0)?;
    let xs = phi_grid(n, points);
    let v: Vec<f64> = xs.iter().map(|&x| phi_unchecked(n as f64, p, x)).collect();
    Ok(v.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiBound {
    /// `1 - max phi` over the grid.
    pub margin: f64,
    pub grid_max: f64,
    pub endpoint_max: f64,
    /// `|grid_max - endpoint_max|`: zero when convexity reduces the bound
    /// to the endpoints.
    pub reduction_gap: f64,
    /// Gap between the closed endpoint forms and direct evaluation.
    pub closed_form_gap: f64,
}

pub fn check_phi_bound(n: usize, p: f64, points: usize) -> Result<PhiBound> {
    phi(n, p, 2.0)?;
    let nf = n as f64;
    let grid_max = phi_grid(n, points).iter().map(|&x| phi_unchecked(nf, p, x)).fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = (phi_at_two(n, p), phi_at_top(n, p));
    let endpoint_max = lo.max(hi);
    let closed_form_gap = (lo - phi_unchecked(nf, p, 2.0)).abs().max((hi - phi_unchecked(nf, p, nf - 1.0)).abs());
    Ok(PhiBound { margin: 1.0 - grid_max, grid_max, endpoint_max, reduction_gap: (grid_max - endpoint_max).abs(), closed_form_gap })
}

fn check_lemma_domain(n: usize, p: f64) -> Result<()> {
    check_open_unit(p)?;
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2, got {n}")));
    }
    Ok(())
}

/// `(n-1)^{p/(1-p)} - (n-2)(n^p - (n-1)^p)^{1/(1-p)} - 1`.
pub fn check_lemma1(n: usize, p: f64) -> Result<f64> {
    check_lemma_domain(n, p)?;
    let (nf, q) = (n as f64, 1.0 / (1.0 - p));
    let lhs = (nf - 2.0) * (nf.powf(p) - (nf - 1.0).powf(p)).powf(q) + 1.0;
    Ok((nf - 1.0).powf(p * q) - lhs)
}

/// `(n-1)^{p/(1-p)} - (n^p - (n-1)^p)^{1/(1-p)}
///  - 3^{-p/(1-p)} ((n-2) n^p - (n-3)(n-1)^p)^{1/(1-p)}`.
pub fn check_lemma2(n: usize, p: f64) -> Result<f64> {
    check_lemma_domain(n, p)?;
    let (nf, q) = (n as f64, 1.0 / (1.0 - p));
    let a = (nf.powf(p) - (nf - 1.0).powf(p)).powf(q);
    let b = 3f64.powf(-p * q) * ((nf - 2.0) * nf.powf(p) - (nf - 3.0) * (nf - 1.0).powf(p)).powf(q);
    Ok((nf - 1.0).powf(p * q) - a - b)
}

/// Auxiliary function whose monotonicity from `F(2) = 0` gives the first
/// endpoint bound.
pub fn aux_f(p: f64, x: f64) -> f64 {
    let q = 1.0 / (1.0 - p);
    (x - 1.0).powf(q) - p.powf(q) * (x - 2.0) - x + 1.0
}

/// Auxiliary function for the second endpoint bound; positive at 2.
pub fn aux_g(p: f64, x: f64) -> f64 {
    let q = 1.0 / (1.0 - p);
    (x - 1.0).powf(q) - ((p * x + x - 2.0 * p - 1.0) / 3f64.powf(p)).powf(q) - p.powf(q)
}

/// The Hölder step: `1 - s^{1/(1-p)} - t^{1/(1-p)}` for the weights that
/// the split at `r` produces.
pub fn holder_margin(n: usize, r: usize, p: f64) -> Result<f64> {
    check_open_unit(p)?;
    if !(2 <= r && r < n) {
        return Err(Error::Domain(format!("need 2 <= r < n, got r={r}, n={n}")));
    }
    let (nf, rf, q) = (n as f64, r as f64, 1.0 / (1.0 - p));
    let c = (nf / (nf - 1.0)).powf(p);
    let s = (c - 1.0) * (nf - rf).powf(1.0 - p);
    let t = (c * (rf - 1.0) - rf + 2.0) * (nf - rf + 2.0).powf(-p);
    Ok(1.0 - s.powf(q) - t.powf(q))
}

/// `0.01, 0.02, ..., 0.99`.
pub fn p_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub proposition_trials: usize,
    pub proposition_max_n: usize,
    pub varcomplete_trials: usize,
    pub varcomplete_max_n: usize,
    pub varcomplete_ps: Vec<f64>,
    /// Largest `n` in the deterministic `(n, p)` grids.
    pub grid_max_n: usize,
    pub phi_points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            proposition_trials: 1_000_000,
            proposition_max_n: 12,
            varcomplete_trials: 100_000,
            varcomplete_max_n: 8,
            varcomplete_ps: vec![0.3, 0.77, 1.0, 2.0],
            grid_max_n: 50,
            phi_points: 201,
        }
    }
}

/// Outcome of one sweep: the smallest margin seen and where.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub name: String,
    pub trials: usize,
    pub min_margin: f64,
    pub worst: String,
    /// Pass threshold on `min_margin` (inclusive).
    pub tolerance: f64,
    pub passed: bool,
}

impl SweepSummary {
    fn new(name: &str, trials: usize, (min_margin, worst): (f64, String), tolerance: f64) -> Self {
        Self { name: name.into(), trials, passed: min_margin >= tolerance, min_margin, worst, tolerance }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub config: SweepConfig,
    pub sweeps: Vec<SweepSummary>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.sweeps.iter().all(|s| s.passed)
    }

    pub fn get(&self, name: &str) -> Option<&SweepSummary> {
        self.sweeps.iter().find(|s| s.name == name)
    }
}

type Worst = (f64, String);

fn worse(a: Worst, b: Worst) -> Worst {
    // NaN margins must surface as failures, never vanish in a min.
    if b.0.is_nan() || b.0 < a.0 {
        b
    } else {
        a
    }
}

const CHUNK: usize = 4096;

/// Runs `trial(rng, index)` for `0..trials` on per-chunk generators, so the
/// result does not depend on the thread count. Each trial yields `K`
/// margins, minimized independently.
fn seeded_min<const K: usize, F>(seed: u64, trials: usize, trial: F) -> Result<[Worst; K]>
where
    F: Fn(&mut ChaCha8Rng, usize) -> Result<[Worst; K]> + Sync + Send,
{
    let empty = || std::array::from_fn(|_| (f64::INFINITY, String::new()));
    let merge = |a: [Worst; K], b: [Worst; K]| {
        let mut b = b.into_iter();
        a.map(|x| worse(x, b.next().unwrap()))
    };
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut acc = empty();
            for i in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                acc = merge(acc, trial(&mut rng, i)?);
            }
            Ok(acc)
        })
        .try_reduce(empty, |a, b| Ok(merge(a, b)))
}

fn grid_min<T: Sync, F>(items: &[T], f: F) -> Result<Worst>
where
    F: Fn(&T) -> Result<Worst> + Sync + Send,
{
    items.par_iter().map(f).try_reduce(|| (f64::INFINITY, String::new()), |a, b| Ok(worse(a, b)))
}

pub fn sweep_proposition(cfg: &SweepConfig) -> Result<SweepSummary> {
    let [w] = seeded_min(cfg.seed, cfg.proposition_trials, |rng, i| {
        let inst = sample_proposition(rng, cfg.proposition_max_n);
        let m = check_proposition(&inst)?;
        Ok([(m, format!("trial {i}: n={} r={} p={:.4}", inst.n, inst.r, inst.p))])
    })?;
    Ok(SweepSummary::new("proposition", cfg.proposition_trials, w, MARGIN_TOLERANCE))
}

/// Random `f >= 0` on `K_n`: uniform values with some zeroed and some
/// repeated so that ties and values equal to the mean show up.
fn sample_function<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut f: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    for i in 0..n {
        match rng.random_range(0..8) {
            0 => f[i] = 0.0,
            1 if i > 0 => f[i] = f[rng.random_range(0..i)],
            _ => {}
        }
    }
    f
}

/// Margin sweep and the agreement between the formula and the operator.
pub fn sweep_varcomplete(cfg: &SweepConfig) -> Result<(SweepSummary, SweepSummary)> {
    let max_n = cfg.varcomplete_max_n.max(2);
    let ops: Vec<MaximalOperator> = (2..=max_n).map(complete_operator).collect::<Result<_>>()?;
    let ps = &cfg.varcomplete_ps;
    if ps.is_empty() {
        return Err(Error::InvalidParameter("no exponents to sweep".into()));
    }
    let [margin, agree] = seeded_min(cfg.seed.wrapping_add(1), cfg.varcomplete_trials, |rng, i| {
        let n = rng.random_range(2..=max_n);
        let p = ps[i % ps.len()];
        let f = sample_function(rng, n);
        let c = check_varcomplete_with(&ops[n - 2], p, &f)?;
        let at = format!("trial {i}: n={n} p={p}");
        Ok([(c.margin, at.clone()), (-c.disagreement(), at)])
    })?;
    Ok((
        SweepSummary::new("varcomplete", cfg.varcomplete_trials, margin, MARGIN_TOLERANCE),
        SweepSummary::new("varcomplete-pipeline", cfg.varcomplete_trials, agree, MARGIN_TOLERANCE),
    ))
}

fn np_grid(min_n: usize, max_n: usize) -> Vec<(usize, f64)> {
    (min_n..=max_n.max(min_n)).flat_map(|n| p_grid().into_iter().map(move |p| (n, p))).collect()
}

/// All deterministic grids: the Hölder condition, `phi`, both lemmas and
/// the auxiliary functions.
pub fn sweep_grids(cfg: &SweepConfig) -> Result<Vec<SweepSummary>> {
    let max_n = cfg.grid_max_n;
    let label = |n: usize, p: f64| format!("n={n} p={p:.2}");
    let mut out = Vec::new();

    let triples: Vec<(usize, usize, f64)> =
        np_grid(3, max_n).into_iter().flat_map(|(n, p)| (2..n).map(move |r| (n, r, p))).collect();
    let w = grid_min(&triples, |&(n, r, p)| Ok((holder_margin(n, r, p)?, format!("n={n} r={r} p={p:.2}"))))?;
    out.push(SweepSummary::new("holder", triples.len(), w, MARGIN_TOLERANCE));

    let phis = np_grid(3, max_n);
    let bounds: Vec<(usize, f64, PhiBound)> =
        phis.par_iter().map(|&(n, p)| Ok((n, p, check_phi_bound(n, p, cfg.phi_points)?))).collect::<Result<_>>()?;
    let pick = |key: &dyn Fn(&PhiBound) -> f64| {
        bounds.iter().map(|(n, p, b)| (key(b), label(*n, *p))).fold((f64::INFINITY, String::new()), worse)
    };
    let w = grid_min(&phis, |&(n, p)| Ok((check_phi_convexity(n, p, cfg.phi_points)?, label(n, p))))?;
    out.push(SweepSummary::new("phi-convexity", phis.len(), w, MARGIN_TOLERANCE));
    out.push(SweepSummary::new("phi-bound", phis.len(), pick(&|b| b.margin), MARGIN_TOLERANCE));
    out.push(SweepSummary::new("phi-reduction", phis.len(), pick(&|b| -b.reduction_gap), -1e-9));
    out.push(SweepSummary::new("phi-closed-form", phis.len(), pick(&|b| -b.closed_form_gap), -1e-9));

    let lemmas = np_grid(2, max_n);
    let w = grid_min(&lemmas, |&(n, p)| Ok((check_lemma1(n, p)?, label(n, p))))?;
    out.push(SweepSummary::new("lemma1", lemmas.len(), w, MARGIN_TOLERANCE));
    let w = grid_min(&lemmas, |&(n, p)| Ok((check_lemma2(n, p)?, label(n, p))))?;
    out.push(SweepSummary::new("lemma2", lemmas.len(), w, MARGIN_TOLERANCE));

    let ps = p_grid();
    let w = grid_min(&ps, |&p| Ok((-aux_f(p, 2.0).abs(), format!("p={p:.2}"))))?;
    out.push(SweepSummary::new("aux-f-at-two", ps.len(), w, -1e-12));
    let w = grid_min(&ps, |&p| Ok((aux_g(p, 2.0), format!("p={p:.2}"))))?;
    out.push(SweepSummary::new("aux-g-at-two", ps.len(), w, f64::MIN_POSITIVE));
    let xs: Vec<f64> = (0..=480).map(|i| 2.0 + i as f64 / 10.0).collect();
    let monotone = |aux: fn(f64, f64) -> f64| {
        grid_min(&ps, |&p| {
            let v: Vec<f64> = xs.iter().map(|&x| aux(p, x)).collect();
            let (k, d) = v.windows(2).map(|w| w[1] - w[0]).enumerate().fold((0, f64::INFINITY), |a, (k, d)| {
                if d < a.1 {
                    (k, d)
                } else {
                    a
                }
            });
            Ok((d, format!("p={p:.2} x={}", xs[k])))
        })
    };
    out.push(SweepSummary::new("aux-f-increasing", ps.len(), monotone(aux_f)?, 0.0));
    out.push(SweepSummary::new("aux-g-increasing", ps.len(), monotone(aux_g)?, 0.0));
    Ok(out)
}

pub fn verify_inequalities(cfg: &SweepConfig) -> Result<InequalityReport> {
    let mut sweeps = vec![sweep_proposition(cfg)?];
    let (v, agree) = sweep_varcomplete(cfg)?;
    sweeps.push(v);
    sweeps.push(agree);
    sweeps.extend(sweep_grids(cfg)?);
    Ok(InequalityReport { config: cfg.clone(), sweeps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, r: usize, p: f64, u: f64, x: &[f64], y: &[f64]) -> PropositionInstance {
        PropositionInstance { n, r, p, u, x: x.to_vec(), y: y.to_vec() }
    }

    #[test]
    fn proposition_examples() {
        let zero = inst(4, 3, 0.5, 0.0, &[0.0], &[0.0, 0.0]);
        assert_eq!(check_proposition(&zero).unwrap(), 0.0);
        let m = check_proposition(&inst(4, 2, 0.5, 0.0, &[1.0, 0.0], &[1.0])).unwrap();
        assert!((m - (0.75f64.sqrt() * 2.0 - 1.0)).abs() < 1e-15);
        assert!(m > 0.0);
    }

    #[test]
    fn proposition_rejects_bad_instances() {
        assert!(check_proposition(&inst(4, 4, 0.5, 0.0, &[], &[0.0, 0.0, 0.0])).is_err());
        assert!(check_proposition(&inst(4, 2, 1.0, 0.0, &[1.0, 0.0], &[1.0])).is_err());
        assert!(check_proposition(&inst(4, 2, 0.5, 0.0, &[1.0, 0.0], &[2.0])).is_err());
        assert!(check_proposition(&inst(4, 2, 0.5, 0.5, &[0.0, 0.0], &[0.2])).is_err());
        assert!(check_proposition(&inst(4, 2, 0.5, 0.0, &[-1.0, 2.0], &[1.0])).is_err());
    }

    #[test]
    fn sampler_respects_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pinned = 0;
        for _ in 0..20_000 {
            let i = sample_proposition(&mut rng, 12);
            i.validate().unwrap();
            pinned += i.y.iter().filter(|&&v| v == i.u).count();
        }
        assert!(pinned > 100, "boundary y = u should be sampled, got {pinned}");
    }

    #[test]
    fn varcomplete_equality_cases() {
        for n in 2..=7 {
            for p in [0.3, 1.0, 2.0] {
                let mut f = vec![0.0; n];
                f[n - 1] = 1.0;
                let c = check_varcomplete(n, p, &f).unwrap();
                assert!(c.margin.abs() < 1e-12, "n={n} p={p}: {c:?}");
                assert!(c.disagreement() < 1e-12);
                let c = check_varcomplete(n, p, &vec![0.4; n]).unwrap();
                assert_eq!((c.lhs, c.rhs, c.margin), (0.0, 0.0, 0.0));
            }
        }
    }

    #[test]
    fn varcomplete_split_and_pipeline() {
        let c = check_varcomplete(4, 0.77, &[0.1, 0.9, 0.3, 0.6]).unwrap();
        // Mean 0.475: sorted values 0.1, 0.3 | 0.6, 0.9.
        assert_eq!(c.r, 3);
        assert!(c.margin >= 0.0);
        assert!(c.disagreement() < 1e-12);
        assert!(check_varcomplete(3, 1.0, &[0.0, -1.0, 1.0]).is_err());
        assert!(check_varcomplete(3, 1.0, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn phi_domain_and_endpoints() {
        assert!(phi(3, 0.5, 2.0).unwrap() <= 1.0);
        assert!(phi(3, 0.5, 2.5).is_err());
        assert!(phi(2, 0.5, 2.0).is_err());
        assert!(phi(5, 1.0, 2.0).is_err());
        for (n, p) in [(10, 0.5), (4, 0.2), (30, 0.9)] {
            let (a, b) = (phi_at_two(n, p), phi_at_top(n, p));
            assert!(a <= 1.0 && b <= 1.0);
            assert!((a - phi(n, p, 2.0).unwrap()).abs() < 1e-12);
            assert!((b - phi(n, p, n as f64 - 1.0).unwrap()).abs() < 1e-12);
        }
        assert_eq!(check_phi_convexity(3, 0.5, 10).unwrap(), f64::INFINITY);
        assert!(check_phi_convexity(10, 0.5, 50).unwrap() >= 0.0);
        let b = check_phi_bound(10, 0.5, 50).unwrap();
        assert!(b.margin >= 0.0 && b.reduction_gap < 1e-9);
    }

    #[test]
    fn lemma_boundaries() {
        for p in p_grid() {
            assert!(check_lemma1(2, p).unwrap().abs() < 1e-15);
            assert_eq!(aux_f(p, 2.0), 0.0);
            assert!(aux_g(p, 2.0) > 0.0);
        }
        assert!(check_lemma1(1, 0.5).is_err());
        assert!(check_lemma2(5, 0.0).is_err());
        assert!(check_lemma2(5, 0.5).unwrap() > 0.0);
    }

    #[test]
    fn holder_condition_at_small_sizes() {
        for n in 3..=12 {
            for r in 2..n {
                for p in [0.05, 0.5, 0.95] {
                    assert!(holder_margin(n, r, p).unwrap() >= MARGIN_TOLERANCE);
                }
            }
        }
        assert!(holder_margin(4, 4, 0.5).is_err());
    }

    #[test]
    fn small_sweeps_pass_and_are_deterministic() {
        let cfg = SweepConfig {
            seed: 5,
            proposition_trials: 10_000,
            varcomplete_trials: 5_000,
            grid_max_n: 12,
            phi_points: 41,
            ..Default::default()
        };
        let a = verify_inequalities(&cfg).unwrap();
        let b = verify_inequalities(&cfg).unwrap();
        assert!(a.passed(), "{:#?}", a.sweeps);
        for (x, y) in a.sweeps.iter().zip(&b.sweeps) {
            assert_eq!(x.min_margin.to_bits(), y.min_margin.to_bits());
            assert_eq!(x.worst, y.worst);
        }
    }

    #[test]
    fn nan_margins_fail() {
        let w = worse((0.0, "a".into()), (f64::NAN, "b".into()));
        assert!(w.0.is_nan());
        let w = worse(w, (-1.0, "c".into()));
        assert!(w.0.is_nan());
    }
}
