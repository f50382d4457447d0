//! Command-line front end: argument handling, configuration, result files.

pub mod args;
pub mod config;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::time::Duration;

use clap::Parser;
use varmax::acceptance::{run_all, AcceptanceOptions, Status};
use varmax::construction::{construction_ratio, witness_large_constant, ConstructionSpec, DEFAULT_VERTEX_BUDGET};
use varmax::graph::{canonical_form, emit_graph6, enumerate_connected, named_graph, parse_graph6, parse_graph_spec};
use varmax::inequality::{verify_inequalities, SweepConfig};
use varmax::lp::{parse_dump, LpResult, Polytope, Relation};
use varmax::maximal::{profile_report, variation_ratio};
use varmax::number::{format_float, format_rational, Rational};
use varmax::sharp::{
    constant, survey, value_multiset, ConstantCertificate, ExactOptions, NumericOptions, SurveyMode, DEFAULT_EXACT_LIMIT,
    HARD_EXACT_LIMIT,
};
use varmax::{Graph, VertexFunction};

use args::{Cli, Command, Outputs, SearchKnobs};
use config::Config;
use report::{certificate_table, RunRecord};

pub const BUDGET_ENV: &str = "VARMAX_BUDGET_VERTICES";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<varmax::Error> for CliError {
    fn from(e: varmax::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

type Res<T = ()> = Result<T, CliError>;

/// Parses `argv` (program name first), runs the command and returns the
/// exit code: 0 success, 1 computational failure, 2 usage error.
pub fn run<I, T>(argv: I, out: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, &argv, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("varmax: {e}");
            e.exit_code()
        }
    }
}

struct Ctx<'a> {
    cfg: Config,
    argv: &'a [String],
    out: &'a mut (dyn Write + Send),
}

impl Ctx<'_> {
    fn say(&mut self, line: impl AsRef<str>) -> Res {
        writeln!(self.out, "{}", line.as_ref()).map_err(|e| CliError::Io(e.to_string()))
    }

    fn record(&self, command: &str, seed: Option<u64>) -> RunRecord {
        RunRecord::start(command, self.argv, seed)
    }
}

fn execute(cli: Cli, argv: &[String], out: &mut (dyn Write + Send)) -> Res {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let threads = cli.threads.or(cfg.threads);
    let mut ctx = Ctx { cfg, argv, out };
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Compute(e.to_string()))?;
            pool.install(|| dispatch(cli.command, &mut ctx))
        }
        None => dispatch(cli.command, &mut ctx),
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Res {
    match cmd {
        Command::Constant(a) => cmd_constant(a, ctx),
        Command::Survey(a) => cmd_survey(a, ctx),
        Command::Paths(a) => cmd_paths(a, ctx),
        Command::Construction(a) => cmd_construction(a, ctx),
        Command::ConstructionSearch(a) => cmd_search(a, ctx),
        Command::VerifyInequalities(a) => cmd_inequalities(a, ctx),
        Command::Enumerate(a) => cmd_enumerate(a, ctx),
        Command::Graph6(a) => cmd_graph6(a, ctx),
        Command::Maximal(a) => cmd_maximal(a, ctx),
        Command::Lp(a) => cmd_lp(a, ctx),
        Command::Reproduce(a) => cmd_reproduce(a, ctx),
    }
}

fn check_p(p: f64) -> Res {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--p must be positive, got {p}")))
    }
}

fn seed_of(k: &SearchKnobs, cfg: &Config) -> u64 {
    k.seed.or(cfg.seed).unwrap_or(0)
}

/// Exact mode when asked for, or by default when `p = 1` and the graph is
/// small enough; numeric otherwise.
fn choose_mode(k: &SearchKnobs, cfg: &Config, p: f64, n: usize) -> Res<SurveyMode> {
    let size_limit = k
        .size_limit
        .or(cfg.size_limit)
        .unwrap_or(if k.exact { HARD_EXACT_LIMIT } else { DEFAULT_EXACT_LIMIT });
    if size_limit > HARD_EXACT_LIMIT {
        return Err(CliError::Usage(format!("--size-limit is at most {HARD_EXACT_LIMIT}")));
    }
    if k.exact && p != 1.0 {
        return Err(CliError::Usage(format!("--exact needs p = 1, got {p}")));
    }
    let time_limit = match k.time_limit.or(cfg.time_limit) {
        Some(t) if t > 0.0 && t.is_finite() => Some(Duration::from_secs_f64(t)),
        Some(t) => return Err(CliError::Usage(format!("--time-limit must be positive, got {t}"))),
        None => None,
    };
    if k.exact || (!k.numeric && p == 1.0 && n <= size_limit) {
        Ok(SurveyMode::Exact(ExactOptions {
            size_limit,
            time_limit,
            max_regions: k.max_regions.or(cfg.max_regions),
            ..Default::default()
        }))
    } else {
        let mut o = NumericOptions { seed: seed_of(k, cfg), ..Default::default() };
        if let Some(r) = k.restarts.or(cfg.restarts) {
            o.restarts = r;
        }
        Ok(SurveyMode::Numeric(o))
    }
}

fn describe(c: &ConstantCertificate) -> String {
    let frac = match (c.value_as_fraction(), &c.value) {
        (Some(f), varmax::Number::Float(_)) => format!(" (~{f})"),
        _ => String::new(),
    };
    format!("{}{frac} [{}] at ({})", c.value_string(), c.mode.as_str(), c.extremizer)
}

fn g6_or_dash(g: &Graph) -> String {
    if g.order() <= 62 {
        emit_graph6(g)
    } else {
        "-".into()
    }
}

fn write_certificates(
    ctx: &mut Ctx,
    rec: &mut RunRecord,
    out: &Outputs,
    rows: &[(Graph, Result<ConstantCertificate, String>)],
) -> Res {
    if let Some(path) = &out.csv {
        let table = certificate_table(rows.iter().map(|(g, r)| (g6_or_dash(g), r.as_ref().map_err(|e| e.as_str()))))?;
        rec.write_csv(path, &table)?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    if let Some(path) = &out.json {
        let doc: Vec<serde_json::Value> = rows
            .iter()
            .map(|(g, r)| match r {
                Ok(c) => c.to_json(),
                Err(e) => serde_json::json!({ "graph6": g6_or_dash(g), "error": e }),
            })
            .collect();
        rec.write_json(path, &doc)?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    Ok(())
}

fn cmd_constant(a: args::ConstantArgs, ctx: &mut Ctx) -> Res {
    check_p(a.p)?;
    let g = parse_graph_spec(&a.graph).map_err(|e| CliError::Usage(e.to_string()))?;
    let mode = choose_mode(&a.knobs, &ctx.cfg, a.p, g.order())?;
    let mut rec = ctx.record("constant", Some(seed_of(&a.knobs, &ctx.cfg)));
    let c = constant(&g, a.p, &mode)?;
    ctx.say(format!("{} n={} edges={} p={}", g6_or_dash(&g), g.order(), g.size(), format_float(a.p)))?;
    ctx.say(format!("constant {}", describe(&c)))?;
    let rows = vec![(g, Ok(c))];
    write_certificates(ctx, &mut rec, &a.out, &rows)
}

fn run_rows(graphs: Vec<Graph>, p: f64, knobs: &SearchKnobs, cfg: &Config) -> Res<Vec<(Graph, Result<ConstantCertificate, String>)>> {
    // Mode is chosen per order, so group by it.
    let mut rows = Vec::with_capacity(graphs.len());
    let mut by_mode: Vec<(usize, Vec<Graph>)> = Vec::new();
    for g in graphs {
        match by_mode.last_mut() {
            Some((n, gs)) if *n == g.order() => gs.push(g),
            _ => by_mode.push((g.order(), vec![g])),
        }
    }
    for (n, gs) in by_mode {
        let mode = choose_mode(knobs, cfg, p, n)?;
        rows.extend(survey(&gs, p, &mode).into_iter().map(|r| (r.graph, r.result)));
    }
    Ok(rows)
}

fn cmd_survey(a: args::SurveyArgs, ctx: &mut Ctx) -> Res {
    check_p(a.p)?;
    if !(2..=10).contains(&a.n) {
        return Err(CliError::Usage(format!("--n must be in 2..=10, got {}", a.n)));
    }
    let graphs = enumerate_connected(a.n)?;
    let mut rec = ctx.record("survey", Some(seed_of(&a.knobs, &ctx.cfg)));
    let rows = run_rows(graphs, a.p, &a.knobs, &ctx.cfg)?;
    let mut failed = 0;
    for (g, r) in &rows {
        match r {
            Ok(c) => ctx.say(format!("{} edges={} {}", g6_or_dash(g), g.size(), describe(c)))?,
            Err(e) => {
                failed += 1;
                ctx.say(format!("{} error: {e}", g6_or_dash(g)))?
            }
        }
    }
    let survey_rows: Vec<varmax::sharp::SurveyRow> =
        rows.iter().map(|(g, r)| varmax::sharp::SurveyRow { graph: g.clone(), result: r.clone() }).collect();
    let summary: Vec<String> = value_multiset(&survey_rows).iter().map(|(v, k)| format!("{v} x{k}")).collect();
    ctx.say(format!("{} graphs: {}", rows.len(), summary.join(", ")))?;
    write_certificates(ctx, &mut rec, &a.out, &rows)?;
    if failed > 0 {
        return Err(CliError::Compute(format!("{failed} graphs failed")));
    }
    Ok(())
}

fn cmd_paths(a: args::PathsArgs, ctx: &mut Ctx) -> Res {
    check_p(a.p)?;
    if a.min_n < 2 || a.max_n < a.min_n {
        return Err(CliError::Usage(format!("need 2 <= --min-n <= --max-n, got {}..{}", a.min_n, a.max_n)));
    }
    let graphs: Vec<Graph> = (a.min_n..=a.max_n).map(|n| named_graph("P", &[n])).collect::<Result<_, _>>()?;
    let mut rec = ctx.record("paths", Some(seed_of(&a.knobs, &ctx.cfg)));
    let rows = run_rows(graphs, a.p, &a.knobs, &ctx.cfg)?;
    let mut points = Vec::new();
    let mut failed = 0;
    for (g, r) in &rows {
        match r {
            Ok(c) => {
                points.push((g.order() as f64, c.value.to_f64()));
                ctx.say(format!("P{} {}", g.order(), describe(c)))?
            }
            Err(e) => {
                failed += 1;
                ctx.say(format!("P{} error: {e}", g.order()))?
            }
        }
    }
    write_certificates(ctx, &mut rec, &a.out, &rows)?;
    if let Some(path) = &a.svg {
        let plot = svg::line_plot("path constants", "n", "value", &points);
        rec.write_plain(path, plot.as_bytes())?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    if failed > 0 {
        return Err(CliError::Compute(format!("{failed} paths failed")));
    }
    Ok(())
}

/// Flag, then environment, then config file, then the built-in default.
fn vertex_budget(flag: Option<u128>, cfg: &Config) -> Res<u128> {
    if let Some(b) = flag {
        return Ok(b);
    }
    if let Ok(v) = std::env::var(BUDGET_ENV) {
        return v.trim().parse().map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v:?} is not a vertex count")));
    }
    Ok(cfg.budget.unwrap_or(DEFAULT_VERTEX_BUDGET))
}

fn cmd_construction(a: args::ConstructionArgs, ctx: &mut Ctx) -> Res {
    check_p(a.p)?;
    let spec = ConstructionSpec::new(a.k, a.m).map_err(|e| CliError::Usage(e.to_string()))?;
    let budget = vertex_budget(a.budget, &ctx.cfg)?;
    let mut rec = ctx.record("construction", None);
    let r = construction_ratio(&spec, a.p)?;
    ctx.say(format!("{spec} p={} vertices={} levels={:?}", format_float(a.p), r.vertices, r.lengths))?;
    let exact = r.ratio_exact.as_ref().map(|q| format!(" = {}", format_rational(q))).unwrap_or_default();
    ctx.say(format!("ratio {}{exact}", format_float(r.ratio)))?;
    ctx.say(format!(
        "M f at last b: {}, at w: {}, growth bound: {}",
        format_rational(&r.value_at_last_b),
        format_rational(&r.value_at_w),
        r.growth_bound.map(format_float).unwrap_or_else(|| "none".into())
    ))?;
    if let Some(path) = &a.emit_graph6 {
        let c = spec.build_with_budget(budget)?;
        if c.graph.order() > 62 {
            return Err(CliError::Compute(format!("{} vertices do not fit single-byte graph6 (max 62)", c.graph.order())));
        }
        rec.write_plain(path, format!("{}\n", emit_graph6(&c.graph)).as_bytes())?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    if let Some(path) = &a.json {
        rec.write_json(path, &r)?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    Ok(())
}

fn cmd_search(a: args::SearchArgs, ctx: &mut Ctx) -> Res {
    check_p(a.p)?;
    if !a.target.is_finite() {
        return Err(CliError::Usage("--target must be finite".into()));
    }
    let budget = vertex_budget(a.budget, &ctx.cfg)?;
    let mut rec = ctx.record("construction-search", None);
    let s = witness_large_constant(a.p, a.target, budget)?;
    for (k, ratio) in &s.tried {
        ctx.say(format!("k={k} m={} ratio {}", s.best.spec.m, format_float(*ratio)))?;
    }
    if let Some(path) = &a.json {
        rec.write_json(path, &s)?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    if let Some(path) = &a.svg {
        let pts: Vec<(f64, f64)> = s.tried.iter().map(|&(k, r)| (k as f64, r)).collect();
        rec.write_plain(path, svg::line_plot("construction ratios", "k", "ratio", &pts).as_bytes())?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    if s.found {
        ctx.say(format!("found {} with ratio {} > {}", s.best.spec, format_float(s.best.ratio), format_float(a.target)))
    } else {
        Err(CliError::Compute(format!(
            "vertex budget {budget} exhausted; best {} with ratio {}",
            s.best.spec,
            format_float(s.best.ratio)
        )))
    }
}

fn cmd_inequalities(a: args::InequalityArgs, ctx: &mut Ctx) -> Res {
    let mut cfg = SweepConfig { seed: a.seed.or(ctx.cfg.seed).unwrap_or(0), ..Default::default() };
    if let Some(n) = a.sweep_size.or(ctx.cfg.sweep_size) {
        cfg.proposition_trials = n;
        cfg.varcomplete_trials = (n / 10).max(1);
    }
    let mut rec = ctx.record("verify-inequalities", Some(cfg.seed));
    let rep = verify_inequalities(&cfg)?;
    for s in &rep.sweeps {
        let tag = if s.passed { "ok  " } else { "FAIL" };
        ctx.say(format!("{tag} {:<22} {:>8} cases  min margin {:>11.3e}  at {}", s.name, s.trials, s.min_margin, s.worst))?;
    }
    if let Some(path) = &a.report {
        rec.write_json(path, &rep)?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(CliError::Compute("some margins fell below tolerance".into()))
    }
}

fn cmd_enumerate(a: args::EnumerateArgs, ctx: &mut Ctx) -> Res {
    if !(1..=10).contains(&a.n) {
        return Err(CliError::Usage(format!("--n must be in 1..=10, got {}", a.n)));
    }
    let graphs = enumerate_connected(a.n)?;
    let text: String = graphs.iter().map(|g| format!("{}\n", emit_graph6(g))).collect();
    match &a.out {
        Some(path) => {
            let mut rec = ctx.record("enumerate", None);
            rec.write_plain(path, text.as_bytes())?;
            ctx.say(format!("{} graphs written to {}", graphs.len(), path.display()))
        }
        None => ctx.out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn parse_any_graph(text: &str) -> Res<Graph> {
    parse_graph_spec(text).or_else(|e| parse_graph6(text).map_err(|_| CliError::Usage(e.to_string())))
}

fn cmd_graph6(a: args::Graph6Args, ctx: &mut Ctx) -> Res {
    let g = parse_any_graph(&a.graph)?;
    let code = if a.canonical { canonical_form(&g)? } else { emit_graph6(&g) };
    ctx.say(&code)?;
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    ctx.say(format!("n={} edges={} connected={} [{}]", g.order(), g.size(), g.is_connected(), edges.join(" ")))
}

fn cmd_maximal(a: args::MaximalArgs, ctx: &mut Ctx) -> Res {
    check_p(a.p)?;
    let g = parse_any_graph(&a.graph)?;
    let f = VertexFunction::parse(&a.f).map_err(|e| CliError::Usage(e.to_string()))?;
    if f.len() != g.order() {
        return Err(CliError::Usage(format!("--f has {} values, graph has {} vertices", f.len(), g.order())));
    }
    let prof = profile_report(&g, &f)?;
    ctx.say(format!("M f = ({})", prof.mvalues.join(",")))?;
    let radii: Vec<String> = prof.argmax_radius.iter().map(|r| r.to_string()).collect();
    ctx.say(format!("radius = ({})", radii.join(",")))?;
    ctx.say(format!("ratio = {}", variation_ratio(&g, &f, a.p)?))
}

fn cmd_lp(a: args::LpArgs, ctx: &mut Ctx) -> Res {
    let text = std::fs::read_to_string(&a.file).map_err(|e| CliError::Usage(format!("{}: {e}", a.file.display())))?;
    let lp = parse_dump(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    let join = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(" ");
    if a.vertices {
        let mut poly = Polytope::new(lp.nvars);
        poly.constraints = lp.constraints.clone();
        for j in (0..lp.nvars).filter(|&j| !lp.free[j]) {
            let mut e = vec![Rational::default(); lp.nvars];
            e[j] = Rational::from_integer(1.into());
            poly = poly.constrain(e, Relation::Ge, Rational::default());
        }
        let vr = poly.vertices_and_rays()?;
        ctx.say(format!("{} vertices, {} rays", vr.vertices.len(), vr.rays.len()))?;
        for v in &vr.vertices {
            ctx.say(format!("vertex {}", join(v)))?;
        }
        for r in &vr.rays {
            ctx.say(format!("ray {}", join(r)))?;
        }
        return Ok(());
    }
    match lp.solve()? {
        LpResult::Optimal { value, witness, dual } => {
            ctx.say(format!("optimal {}", format_rational(&value)))?;
            ctx.say(format!("x {}", join(&witness)))?;
            ctx.say(format!("dual {}", join(&dual)))
        }
        other => ctx.say(other.status()),
    }
}

fn cmd_reproduce(a: args::ReproduceArgs, ctx: &mut Ctx) -> Res {
    let seed = a.seed.or(ctx.cfg.seed).unwrap_or(0);
    let mut opts = AcceptanceOptions {
        skip_slow: a.skip_slow || ctx.cfg.skip_slow.unwrap_or(false),
        seed,
        ..Default::default()
    };
    if let Some(n) = a.sweep_size.or(ctx.cfg.sweep_size) {
        opts.inequalities.proposition_trials = n;
        opts.inequalities.varcomplete_trials = (n / 10).max(1);
    }
    let mut rec = ctx.record("reproduce", Some(seed));
    let rep = run_all(&opts);
    for c in &rep.criteria {
        ctx.say(c.line())?;
        if c.status == Status::Fail {
            for d in c.details.iter().filter(|d| d.starts_with("FAILED")) {
                ctx.say(format!("    {d}"))?;
            }
        }
    }
    if let Some(path) = &a.report {
        rec.write_json(path, &rep)?;
        ctx.say(format!("wrote {}", path.display()))?;
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(CliError::Compute("acceptance failures".into()))
    }
}

/// Used by `main` to keep the process exit code in one place.
pub fn main_exit() -> ! {
    let code = run(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code)
}
