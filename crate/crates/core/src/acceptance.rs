//! End-to-end acceptance checks, one function per criterion, each returning
//! a report with the measured values rather than panicking.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::construction::{
    construction_ratio, last_branch_ball, level_lengths, witness_large_constant, ConstructionSpec, DEFAULT_VERTEX_BUDGET,
};
use crate::error::Result;
use crate::graph::{emit_graph6, enumerate_connected, named_graph, Graph};
use crate::inequality::{aux_f, p_grid, verify_inequalities, SweepConfig};
use crate::maximal::{variation_ratio, VertexFunction};
use crate::number::{format_rational, parse_rational, rat, Number, Rational};
use crate::sharp::{
    exact_constant_p1, grid_oracle, numeric_lower_bound, survey, value_multiset, ExactOptions, Mode, NumericOptions,
    SurveyMode, HARD_EXACT_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not run at full strength (see `details`); never counts as a pass.
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: String,
    pub title: String,
    pub status: Status,
    pub measured: String,
    pub details: Vec<String>,
    pub elapsed_ms: u64,
}

impl CriterionReport {
    /// The one-line summary printed by the runners.
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        format!("{tag} {} {}: {} ({} ms)", self.id, self.title, self.measured, self.elapsed_ms)
    }
}

#[derive(Debug, Clone)]
pub struct AcceptanceOptions {
    /// Replace the 5-vertex exact survey with numeric mode and skip the
    /// 7-vertex path.
    pub skip_slow: bool,
    /// Time allowed for the 7-vertex exact path.
    pub path7_time: Duration,
    pub seed: u64,
    pub inequalities: SweepConfig,
}

impl Default for AcceptanceOptions {
    fn default() -> Self {
        Self { skip_slow: false, path7_time: Duration::from_secs(600), seed: 0, inequalities: SweepConfig::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AcceptanceReport {
    pub criteria: Vec<CriterionReport>,
}

impl AcceptanceReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.status != Status::Fail)
    }
}

struct Run {
    start: Instant,
    ok: bool,
    details: Vec<String>,
}

impl Run {
    fn new() -> Self {
        Self { start: Instant::now(), ok: true, details: Vec::new() }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        if !cond {
            self.ok = false;
            self.details.push(format!("FAILED: {what}"));
        } else {
            self.details.push(what);
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }

    fn finish(self, id: &str, title: &str, measured: String) -> CriterionReport {
        let status = if self.ok { Status::Pass } else { Status::Fail };
        self.finish_with(id, title, measured, status)
    }

    fn finish_with(self, id: &str, title: &str, measured: String, status: Status) -> CriterionReport {
        CriterionReport {
            id: id.into(),
            title: title.into(),
            status,
            measured,
            details: self.details,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}

/// Errors become failed criteria so that one broken check never hides the
/// others.
fn guarded(id: &str, title: &str, body: impl FnOnce(&mut Run) -> Result<String>) -> CriterionReport {
    let mut run = Run::new();
    match body(&mut run) {
        Ok(measured) => run.finish(id, title, measured),
        Err(e) => {
            run.check(false, format!("error: {e}"));
            run.finish(id, title, "error".into())
        }
    }
}

fn exact_of(g: &Graph, opts: &ExactOptions) -> Result<(Rational, bool, bool)> {
    let c = exact_constant_p1(g, opts)?;
    let v = c.value.as_exact().cloned().unwrap_or_default();
    Ok((v, c.mode == Mode::Exact, c.validate()))
}

fn all_equal(run: &mut Run, graphs: &[Graph], want: &Rational) -> Result<Vec<String>> {
    let mut seen = Vec::new();
    for g in graphs {
        let (v, exact, valid) = exact_of(g, &ExactOptions::default())?;
        run.check(
            &v == want && exact && valid,
            format!("{}: {} (exact={exact}, witness valid={valid})", emit_graph6(g), format_rational(&v)),
        );
        seen.push(format_rational(&v));
    }
    Ok(seen)
}

pub fn a1_three_vertices() -> CriterionReport {
    guarded("A1", "3-vertex constants", |run| {
        let graphs = enumerate_connected(3)?;
        run.check(graphs.len() == 2, format!("{} connected graphs", graphs.len()));
        let seen = all_equal(run, &graphs, &rat(2, 3))?;
        Ok(seen.join(", "))
    })
}

pub fn a2_four_vertices() -> CriterionReport {
    guarded("A2", "4-vertex constants", |run| {
        let graphs = enumerate_connected(4)?;
        run.check(graphs.len() == 6, format!("{} connected graphs", graphs.len()));
        let seen = all_equal(run, &graphs, &rat(3, 4))?;
        Ok(seen.join(", "))
    })
}

pub fn a3_named_witnesses() -> CriterionReport {
    guarded("A3", "4-vertex extremizers", |run| {
        let cases: [(&str, Graph, [&str; 4]); 4] = [
            ("C4", named_graph("C", &[4])?, ["1/2", "0", "0", "0"]),
            ("P4", named_graph("P", &[4])?, ["1", "0", "0", "0"]),
            ("paw", named_graph("paw", &[])?, ["0", "1", "0", "0"]),
            ("diamond", named_graph("diamond", &[])?, ["0", "1/3", "0", "0"]),
        ];
        let want = rat(3, 4);
        for (name, g, w) in cases {
            let f = VertexFunction::Exact(w.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?);
            let at = variation_ratio(&g, &f, 1.0)?;
            run.check(at == Number::Exact(want.clone()), format!("{name} at ({}) gives {at}", w.join(",")));
            let c = exact_constant_p1(&g, &ExactOptions::default())?;
            run.check(
                c.value == Number::Exact(want.clone()) && c.validate(),
                format!("{name} certificate {} at ({})", c.value_string(), c.extremizer),
            );
        }
        Ok("all four witnesses give 3/4".into())
    })
}

/// The 5-vertex value list, keyed like [`value_multiset`].
pub fn five_vertex_expected() -> BTreeMap<String, usize> {
    [("4/5", 10), ("17/20", 5), ("33/40", 4), ("49/60", 1), ("5/6", 1)].into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn format_multiset(m: &BTreeMap<String, usize>) -> String {
    m.iter().map(|(k, v)| format!("{k} x{v}")).collect::<Vec<_>>().join(", ")
}

pub fn a4_five_vertices(opts: &AcceptanceOptions) -> CriterionReport {
    let mut run = Run::new();
    let body = |run: &mut Run| -> Result<(String, Status)> {
        let graphs = enumerate_connected(5)?;
        run.check(graphs.len() == 21, format!("{} connected graphs", graphs.len()));
        if opts.skip_slow {
            let mode = SurveyMode::Numeric(NumericOptions { seed: opts.seed, ..Default::default() });
            let rows = survey(&graphs, 1.0, &mode);
            let got = value_multiset(&rows);
            run.note("slow run skipped: numeric lower bounds only, not compared");
            return Ok((format!("numeric: {}", format_multiset(&got)), Status::Skipped));
        }
        let rows = survey(&graphs, 1.0, &SurveyMode::Exact(ExactOptions::default()));
        for row in &rows {
            match &row.result {
                Ok(c) => run.check(
                    c.mode == Mode::Exact && c.validate(),
                    format!("{}: {} at ({})", emit_graph6(&row.graph), c.value_string(), c.extremizer),
                ),
                Err(e) => run.check(false, format!("{}: {e}", emit_graph6(&row.graph))),
            }
        }
        let got = value_multiset(&rows);
        let want = five_vertex_expected();
        run.check(got == want, format!("expected {}", format_multiset(&want)));
        if got != want {
            run.note("DISCREPANCY with the published value list; needs review");
        }
        Ok((format_multiset(&got), Status::Pass))
    };
    match body(&mut run) {
        Ok((m, Status::Skipped)) => run.finish_with("A4", "5-vertex value list", m, Status::Skipped),
        Ok((m, _)) => run.finish("A4", "5-vertex value list", m),
        Err(e) => {
            run.check(false, format!("error: {e}"));
            run.finish("A4", "5-vertex value list", "error".into())
        }
    }
}

pub fn a5_complete_graphs(opts: &AcceptanceOptions) -> CriterionReport {
    guarded("A5", "complete graphs at all exponents", |run| {
        let mut worst: f64 = 0.0;
        for n in 3..=6 {
            let g = named_graph("K", &[n])?;
            for p in [0.3, 0.5, 0.77, 1.0, 2.0] {
                let c = numeric_lower_bound(&g, p, &NumericOptions { seed: opts.seed, ..Default::default() })?;
                let gap = c.value.to_f64() - (1.0 - 1.0 / n as f64);
                worst = worst.max(gap.abs());
                run.check(gap.abs() <= 1e-6, format!("K{n} p={p}: {} (gap {gap:.2e})", c.value_string()));
            }
        }
        Ok(format!("max |value - (1-1/n)| = {worst:.2e}"))
    })
}

pub fn a6_stars(opts: &AcceptanceOptions) -> CriterionReport {
    guarded("A6", "star closed forms at p=2", |run| {
        let mut worst: f64 = 0.0;
        for n in 3..=5 {
            let g = named_graph("S", &[n])?;
            let c = numeric_lower_bound(&g, 2.0, &NumericOptions { seed: opts.seed, ..Default::default() })?;
            let nf = n as f64;
            let want = (nf * nf - nf - 1.0).sqrt() / nf;
            let gap = c.value.to_f64() - want;
            worst = worst.max(gap.abs());
            run.check(gap.abs() <= 1e-4, format!("S{n}: {} vs {want:.10} (gap {gap:.2e})", c.value_string()));
        }
        Ok(format!("max gap {worst:.2e}"))
    })
}

pub fn a7_paths(opts: &AcceptanceOptions) -> CriterionReport {
    let mut run = Run::new();
    let mut skipped = false;
    let res = (|| -> Result<String> {
        let mut exact = Vec::new();
        for n in 3..=6 {
            let g = named_graph("P", &[n])?;
            let (v, is_exact, valid) = exact_of(&g, &ExactOptions::default())?;
            run.check(v == rat(n as i64 - 1, n as i64) && is_exact && valid, format!("P{n} exact: {}", format_rational(&v)));
            exact.push(format_rational(&v));
        }
        if opts.skip_slow {
            run.note("P7 exact skipped");
            skipped = true;
        } else {
            let g = named_graph("P", &[7])?;
            let o = ExactOptions { size_limit: HARD_EXACT_LIMIT, time_limit: Some(opts.path7_time), ..Default::default() };
            let c = exact_constant_p1(&g, &o)?;
            if c.mode == Mode::Exact {
                run.check(c.value == Number::Exact(rat(6, 7)) && c.validate(), format!("P7 exact: {}", c.value_string()));
                exact.push(c.value_string());
            } else {
                // Best effort: a timeout is reported, not failed.
                run.note(format!("P7 exact timed out after {} ms; lower bound {}", c.stats.time_ms, c.value_string()));
                run.check(c.value.to_f64() <= 6.0 / 7.0 + 1e-12, "P7 partial value below 6/7");
            }
        }
        let mut worst: f64 = f64::INFINITY;
        for n in 3..=10 {
            let g = named_graph("P", &[n])?;
            let c = numeric_lower_bound(&g, 1.0, &NumericOptions { seed: opts.seed, ..Default::default() })?;
            let want = 1.0 - 1.0 / n as f64;
            let v = c.value.to_f64();
            worst = worst.min(v - want);
            run.check(v >= want - 1e-6 && v <= want + 1e-4, format!("P{n} numeric: {} vs {want:.10}", c.value_string()));
        }
        Ok(format!("exact {}; numeric min gap {worst:.2e}", exact.join(", ")))
    })();
    let measured = res.unwrap_or_else(|e| {
        run.check(false, format!("error: {e}"));
        "error".into()
    });
    let status = if !run.ok {
        Status::Fail
    } else if skipped {
        Status::Skipped
    } else {
        Status::Pass
    };
    run.finish_with("A7", "paths", measured, status)
}

pub fn a8_constructions() -> CriterionReport {
    guarded("A8", "large constants from trees", |run| {
        run.check(level_lengths(4) == vec![1, 2, 5, 11, 23, 47], format!("levels {:?}", level_lengths(4)));
        let mut ratios = Vec::new();
        for k in 2..=8 {
            let r = construction_ratio(&ConstructionSpec::new(k, 2)?, 1.0)?;
            ratios.push(r.ratio_exact.clone().expect("p = 1 is exact"));
        }
        let increasing = ratios.windows(2).all(|w| w[0] < w[1]);
        let shown: Vec<String> = ratios.iter().map(format_rational).collect();
        run.check(increasing, format!("m=2 ratios over k=2..8: {}", shown.join(", ")));
        let s = witness_large_constant(1.0, 1.0, DEFAULT_VERTEX_BUDGET)?;
        run.check(s.found && s.best.ratio > 1.0, format!("search: {} ratio {:.6}", s.best.spec, s.best.ratio));
        for (k, m) in [(2, 1), (3, 2), (2, 3), (4, 2)] {
            let spec = ConstructionSpec::new(k, m)?;
            let b = last_branch_ball(&spec)?;
            run.check(b.to_root == b.to_last_a, format!("{spec}: d(b, root) = {}, d(b, a_last) = {}", b.to_root, b.to_last_a));
            let widest = b.per_level.iter().copied().max().unwrap_or(0);
            run.check(
                widest <= k && b.size <= k * b.per_level.len(),
                format!("{spec}: ball {} over {} levels, widest {widest}", b.size, b.per_level.len()),
            );
        }
        Ok(format!("search found {} with ratio {:.6}", s.best.spec, s.best.ratio))
    })
}

pub fn a9_inequalities(opts: &AcceptanceOptions) -> CriterionReport {
    guarded("A9", "scalar inequality sweeps", |run| {
        let mut cfg = opts.inequalities.clone();
        cfg.seed = opts.seed;
        let rep = verify_inequalities(&cfg)?;
        for s in &rep.sweeps {
            run.check(
                s.passed,
                format!("{} ({} cases): min {:.3e} at {} (tolerance {:.0e})", s.name, s.trials, s.min_margin, s.worst, s.tolerance),
            );
        }
        let f2 = p_grid().into_iter().map(|p| aux_f(p, 2.0).abs()).fold(0.0, f64::max);
        run.check(f2 <= 1e-12, format!("max |F(2)| = {f2:e}"));
        let worst = rep.sweeps.iter().map(|s| s.min_margin).fold(f64::INFINITY, f64::min);
        Ok(format!("{} sweeps, smallest margin {worst:.3e}", rep.sweeps.len()))
    })
}

pub fn a10_grid_oracle() -> CriterionReport {
    guarded("A10", "grid oracle below the exact constant", |run| {
        let levels = 8;
        let mut graphs = Vec::new();
        for n in 2..=4 {
            graphs.extend(enumerate_connected(n)?);
        }
        for g in &graphs {
            let c = exact_constant_p1(g, &ExactOptions::default())?;
            let exact = c.value.as_exact().cloned().unwrap_or_default();
            let grid = grid_oracle(g, 1.0, levels)?;
            let gv = grid.value.as_exact().cloned().unwrap_or_default();
            let gf = VertexFunction::Exact(grid.witness.iter().map(|&x| rat(x as i64, levels as i64)).collect());
            let replay = variation_ratio(g, &gf, 1.0)?;
            // The witness lies on the grid when, scaled to maximum one, every
            // value is a multiple of 1/levels.
            let on_grid = match &c.extremizer {
                VertexFunction::Exact(w) => {
                    let top = w.iter().max().cloned().unwrap_or_default();
                    let lv = Rational::from_integer(levels.into());
                    top > Rational::default() && w.iter().all(|x| (x / &top * &lv).is_integer())
                }
                VertexFunction::Float(_) => false,
            };
            let name = emit_graph6(g);
            run.check(gv <= exact, format!("{name}: grid {} <= exact {}", format_rational(&gv), format_rational(&exact)));
            if on_grid {
                run.check(gv == exact, format!("{name}: extremizer on grid, values agree"));
            }
            run.check(replay == Number::Exact(gv.clone()), format!("{name}: grid witness replays"));
            run.check(c.validate(), format!("{name}: certificate witness replays"));
        }
        Ok(format!("{} graphs", graphs.len()))
    })
}

/// Every criterion in order.
pub fn run_all(opts: &AcceptanceOptions) -> AcceptanceReport {
    let criteria = vec![
        a1_three_vertices(),
        a2_four_vertices(),
        a3_named_witnesses(),
        a4_five_vertices(opts),
        a5_complete_graphs(opts),
        a6_stars(opts),
        a7_paths(opts),
        a8_constructions(),
        a9_inequalities(opts),
        a10_grid_oracle(),
    ];
    AcceptanceReport { criteria }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_five_vertex_list_has_all_graphs() {
        assert_eq!(five_vertex_expected().values().sum::<usize>(), 21);
    }

    #[test]
    fn errors_become_failures() {
        let r = guarded("X", "boom", |_| Err(crate::Error::Disconnected));
        assert_eq!(r.status, Status::Fail);
        assert!(r.line().starts_with("FAIL X boom"));
    }

    #[test]
    fn skipped_never_fails_the_report() {
        let r = Run::new().finish_with("X", "t", "m".into(), Status::Skipped);
        assert!(AcceptanceReport { criteria: vec![r] }.passed());
    }
}
