use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use firegrid::analysis::{self, appendix, translation};
use firegrid::solver::{self, SolveOptions};
use firegrid::strategies::{self, canonical_start, StrategySpec};
use firegrid::{BudgetSchedule, Error, GameState, Lattice, LatticeKind, Vertex};

mod checks;

#[derive(Parser, Debug)]
#[command(name = "firegrid", version, about = "Firefighter games on grids, lattices and trees")]
struct Cli {
    /// JSON file with flag values; flags on the command line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
#[command(args_override_self = true)]
enum Cmd {
    /// Play one strategy from a fire and report the outcome and saved ratios.
    Simulate(SimulateArgs),
    /// Exact optimal play on a small finite lattice.
    Solve(SolveArgs),
    /// Mean saved fraction of a strategy over random starts on a finite grid.
    Rate(RateArgs),
    /// Bounds, region constants and reference values.
    Bounds(BoundsArgs),
    /// Replay a triangular strategy on the hexagonal lattice and audit it.
    Translate(TranslateArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
    /// Reproduce one or more of the headline results (A1 .. A13) and report PASS or FAIL.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value = "json")]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for independent runs (output order does not depend on it).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug, Clone)]
struct LatticeArgs {
    /// square, z2, hex, tri, tree, path or complete.
    #[arg(long, default_value = "square", value_parser = LATTICE_NAMES)]
    lattice: String,
    /// Side length or vertex count of finite lattices.
    #[arg(long)]
    n: Option<u32>,
    /// Window radius of infinite lattices (tree depth for trees).
    #[arg(long)]
    window: Option<u32>,
    /// Branching factor of trees.
    #[arg(long, default_value_t = 3)]
    d: u32,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    #[arg(long, default_value_t = 1)]
    budget: u32,
    /// Turns with one extra firefighter, comma separated.
    #[arg(long, value_delimiter = ',')]
    extras: Vec<u32>,
}

impl BudgetArgs {
    fn schedule(&self) -> BudgetSchedule {
        BudgetSchedule::with_extras(self.budget, &self.extras)
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    lat: LatticeArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Fire vertex `a,b` (or a tree path such as `r.0.2`); repeatable.
    #[arg(long = "fire", value_parser = vertex_flag)]
    fires: Vec<String>,
    #[arg(long, default_value = "idle")]
    strategy: String,
    /// Strategy parameters as a JSON object.
    #[arg(long, default_value = "{}", value_parser = params_flag)]
    params: String,
    #[arg(long, default_value_t = 100)]
    horizon: u32,
    /// Radii for saved-ratio estimates around `--center` (default: the first fire).
    #[arg(long, value_delimiter = ',')]
    radii: Vec<u64>,
    #[arg(long, value_parser = vertex_flag)]
    center: Option<String>,
    /// Include the full trace in JSON output.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    lat: LatticeArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long = "fire", value_parser = vertex_flag)]
    fires: Vec<String>,
    /// Solve every start and report the exact surviving rate.
    #[arg(long)]
    rate: bool,
    #[arg(long)]
    no_symmetry: bool,
    /// Plain exhaustive search without bounds or tables.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = solver::DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 200_000_000)]
    node_limit: u64,
    /// Look for a containing strategy within this many turns instead.
    #[arg(long)]
    contain_within: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct RateArgs {
    #[arg(long, default_value_t = 101)]
    n: u32,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value = "square_wedge")]
    strategy: String,
    #[arg(long, default_value = "{}", value_parser = params_flag)]
    params: String,
    #[arg(long, default_value_t = 500)]
    starts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Which {
    Theorem1,
    Constants,
    Lemma1,
    Profile,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, default_value = "theorem1")]
    which: Which,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Emit the exact rational region constants with their decimal values.
    #[arg(long)]
    maple_check: bool,
    /// Grid side for `lemma1`.
    #[arg(long, default_value_t = 101)]
    n: u32,
    /// Fire `a,b` for `lemma1`, or `x,y` fractions for `profile`.
    #[arg(long)]
    fire: Option<String>,
    #[arg(long, default_value_t = 200)]
    max_r: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    #[arg(long, default_value_t = 12)]
    window: u32,
    /// Even triangular budget per turn.
    #[arg(long, default_value_t = 4)]
    budget: u32,
    #[arg(long = "fire", value_parser = vertex_flag)]
    fires: Vec<String>,
    /// Triangular strategy to translate; without it a containing strategy is
    /// searched for with the solver.
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long, default_value = "{}", value_parser = params_flag)]
    params: String,
    #[arg(long, default_value_t = 6)]
    max_turns: u32,
    #[arg(long, default_value_t = 60)]
    horizon: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Result ids such as A1 or A10; all of them when omitted.
    ids: Vec<String>,
    /// Seed for the checks that sample random games or starts.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: std::net::SocketAddr,
    /// Idle seconds before a session is evicted.
    #[arg(long, default_value_t = 1800)]
    ttl: u64,
    #[arg(long, default_value_t = 4096)]
    max_window: u32,
}

type Res<T> = firegrid::Result<T>;

const LATTICE_NAMES: [&str; 13] = [
    "square",
    "finite_square",
    "z2",
    "infinite_square",
    "hex",
    "hexagonal",
    "tri",
    "triangular",
    "tree",
    "dary_tree",
    "path",
    "complete",
    "clique",
];

fn usage(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2)
}

fn vertex_flag(s: &str) -> Result<String, String> {
    let t = s.trim();
    let ok = if t.starts_with('r') {
        t.split('.').skip(1).all(|c| c.parse::<u64>().is_ok())
    } else {
        t.split(',').count() <= 2 && t.split(',').all(|c| c.trim().parse::<i64>().is_ok())
    };
    if ok {
        Ok(t.to_string())
    } else {
        Err(format!("'{s}' is not a vertex; expected a,b or a tree path r.i.j"))
    }
}

fn params_flag(s: &str) -> Result<String, String> {
    match serde_json::from_str::<Value>(s) {
        Ok(Value::Object(_)) => Ok(s.to_string()),
        _ => Err(format!("'{s}' is not a JSON object")),
    }
}

fn lattice_of(a: &LatticeArgs, default_window: u32) -> Res<Lattice> {
    let need_n = || a.n.unwrap_or_else(|| usage(&format!("--n is required for --lattice {}", a.lattice)));
    let w = a.window.unwrap_or(default_window);
    let lat = match a.lattice.as_str() {
        "square" | "finite_square" => Lattice::finite_square(need_n()),
        "z2" | "infinite_square" => Lattice::infinite_square(w),
        "hex" | "hexagonal" => Lattice::hexagonal(w),
        "tri" | "triangular" => Lattice::triangular(w),
        "tree" | "dary_tree" => Lattice::tree(a.d, w),
        "path" => Lattice::path(need_n()),
        "complete" | "clique" => Lattice::complete(need_n()),
        other => return Err(Error::InvalidLattice(format!("unknown lattice '{other}'"))),
    };
    lat.validate()?;
    Ok(lat)
}

fn parse_vertex(lat: &Lattice, s: &str) -> Res<Vertex> {
    if matches!(lat.kind, LatticeKind::DaryTree { .. }) && s.starts_with('r') {
        return lat.parse_vertex(&Value::String(s.to_string()));
    }
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts[..] {
        [a, b] => {
            let p = |x: &str| x.parse::<i64>().map_err(|_| Error::InvalidParams(format!("bad vertex '{s}'")));
            Ok(Vertex(p(a)?, p(b)?))
        }
        [a] if matches!(lat.kind, LatticeKind::Path { .. } | LatticeKind::Complete { .. }) => {
            Ok(Vertex(a.parse().map_err(|_| Error::InvalidParams(format!("bad vertex '{s}'")))?, 0))
        }
        _ => Err(Error::InvalidParams(format!("bad vertex '{s}', expected a,b"))),
    }
}

fn fires_of(lat: &Lattice, fires: &[String]) -> Res<Vec<Vertex>> {
    if fires.is_empty() {
        return Ok(vec![lat.origin()]);
    }
    fires.iter().map(|f| parse_vertex(lat, f)).collect()
}

fn spec_of(name: &str, params: &str) -> Res<StrategySpec> {
    let p: Value = serde_json::from_str(params)?;
    Ok(StrategySpec::new(name, if p == json!({}) { Value::Null } else { p }))
}

fn emit(common: &Common, json_out: &impl Serialize, csv: String) -> Res<()> {
    let text = match common.format {
        Format::Csv => csv,
        Format::Json => serde_json::to_string_pretty(json_out)? + "\n",
    };
    match &common.out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pool(jobs: usize) -> Res<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::Io(e.to_string()))
}

fn simulate(a: SimulateArgs) -> Res<()> {
    let lat = lattice_of(&a.lat, a.horizon + 2)?;
    let fires = fires_of(&lat, &a.fires)?;
    let spec = spec_of(&a.strategy, &a.params)?;
    let mut strat = strategies::build(&spec)?;
    let st = GameState::new(lat, &fires, a.budget.schedule())?;
    let (fin, trace) = st.run(strat.as_mut(), a.horizon)?;
    let center = match &a.center {
        Some(c) => parse_vertex(&lat, c)?,
        None => fires[0],
    };
    let radii = if a.radii.is_empty() && !lat.is_finite() { vec![a.horizon as u64 / 2] } else { a.radii.clone() };
    let rates = analysis::surviving_rate_estimate(&fin, center, &radii)?;
    let mut out = json!({
        "lattice": lat,
        "fires": fires,
        "schedule": trace.schedule,
        "strategy": spec,
        "outcome": trace.outcome,
        "rates": rates,
    });
    if a.trace {
        out["trace"] = serde_json::to_value(&trace)?;
    }
    let mut csv = String::from("radius,ball,saved,ratio\n");
    for r in &rates {
        csv += &format!("{},{},{},{}\n", r.radius, r.ball, r.saved, r.ratio);
    }
    emit(&a.common, &out, csv)
}

fn solve(a: SolveArgs) -> Res<()> {
    let lat = lattice_of(&a.lat, 12)?;
    let schedule = a.budget.schedule();
    if let Some(turns) = a.contain_within {
        let fires = fires_of(&lat, &a.fires)?;
        let rep = solver::verify_containment_search(&lat, &fires, &schedule, turns, a.node_limit)?;
        let out = json!({
            "containable": rep.witness.is_some(),
            "exhaustive": rep.exhaustive,
            "nodes": rep.nodes,
            "witness": rep.witness,
        });
        let csv = match &rep.witness {
            Some(w) => format!(
                "containable,exhaustive,nodes,turns,burnt\ntrue,{},{},{},{}\n",
                rep.exhaustive, rep.nodes, w.turns, w.burnt
            ),
            None => format!("containable,exhaustive,nodes,turns,burnt\nfalse,{},{},,\n", rep.exhaustive, rep.nodes),
        };
        return emit(&a.common, &out, csv);
    }
    let mut opts = if a.exhaustive { SolveOptions::exhaustive() } else { SolveOptions::default() };
    opts.symmetry &= !a.no_symmetry;
    opts.cap = a.cap;
    opts.node_limit = a.node_limit;
    opts.jobs = a.common.jobs;
    opts.cache_dir = std::env::var_os("FIREGRID_CACHE").map(PathBuf::from);
    if a.rate {
        let verts = lat.vertices()?;
        let rows: Vec<Res<(Vertex, u64)>> = pool(a.common.jobs)?.install(|| {
            verts
                .par_iter()
                .map(|&v| {
                    let st = GameState::new(lat, &[v], schedule.clone())?;
                    let r = solver::solve(&st, &SolveOptions { jobs: 1, ..opts.clone() })?;
                    if !r.proved {
                        return Err(Error::Precondition(format!("search from {v} hit the node limit")));
                    }
                    Ok((v, r.sn))
                })
                .collect()
        });
        let rows: Vec<(Vertex, u64)> = rows.into_iter().collect::<Res<_>>()?;
        let n = rows.len() as i64;
        let rate = num_rational::Ratio::new(rows.iter().map(|r| r.1 as i64).sum::<i64>(), n * n);
        let out = json!({
            "rate": rate.to_string(),
            "value": *rate.numer() as f64 / *rate.denom() as f64,
            "per_start": rows.iter().map(|(v, s)| json!({"fire": v, "sn": s})).collect::<Vec<_>>(),
        });
        let mut csv = String::from("a,b,sn\n");
        for (v, s) in &rows {
            csv += &format!("{},{},{}\n", v.0, v.1, s);
        }
        return emit(&a.common, &out, csv);
    }
    let fires = fires_of(&lat, &a.fires)?;
    let st = GameState::new(lat, &fires, schedule)?;
    let r = pool(a.common.jobs)?.install(|| solver::solve(&st, &opts))?;
    let csv = format!("sn,proved,nodes,turns\n{},{},{},{}\n", r.sn, r.proved, r.nodes, r.sequence.len());
    emit(&a.common, &r, csv)
}

fn rate(a: RateArgs) -> Res<()> {
    let lat = Lattice::finite_square(a.n);
    let spec = spec_of(&a.strategy, &a.params)?;
    strategies::build(&spec)?;
    let (lo, hi) = Lattice::square_range(a.n);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    let starts: Vec<Vertex> = (0..a.starts).map(|_| Vertex(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))).collect();
    let schedule = a.budget.schedule();
    let nn = (a.n as f64).powi(2);
    let rows: Vec<Res<Value>> = pool(a.common.jobs)?.install(|| {
        starts
            .par_iter()
            .map(|&v| {
                let mut s = strategies::build(&spec)?;
                let st = GameState::new(lat, &[v], schedule.clone())?;
                let (_, trace) = st.run(s.as_mut(), 4 * a.n)?;
                let saved = trace.outcome.saved.unwrap_or(0) as f64 / nn;
                let c = canonical_start(a.n, v);
                let (x, y) = (c.0 as f64 / a.n as f64, c.1 as f64 / a.n as f64);
                Ok(json!({"fire": v, "x": x, "y": y, "saved_fraction": saved,
                          "wedge_prediction": appendix::wedge_saved_fraction(x, y)}))
            })
            .collect()
    });
    let rows: Vec<Value> = rows.into_iter().collect::<Res<_>>()?;
    let mean = rows.iter().map(|r| r["saved_fraction"].as_f64().unwrap()).sum::<f64>() / rows.len().max(1) as f64;
    let mut csv = String::from("a,b,x,y,saved_fraction,wedge_prediction\n");
    for r in &rows {
        csv += &format!(
            "{},{},{},{},{},{}\n",
            r["fire"][0], r["fire"][1], r["x"], r["y"], r["saved_fraction"], r["wedge_prediction"]
        );
    }
    let out = json!({"n": a.n, "strategy": spec, "seed": a.seed, "mean_saved_fraction": mean, "starts": rows});
    emit(&a.common, &out, csv)
}

fn bounds(a: BoundsArgs) -> Res<()> {
    if a.maple_check {
        let rows: Vec<Value> = appendix::CASES
            .iter()
            .map(|&c| {
                let q = appendix::region_constant_exact(c);
                json!({"case": c.label(), "num": q.numer().to_string(), "den": q.denom().to_string(),
                       "value": *q.numer() as f64 / *q.denom() as f64})
            })
            .collect();
        let mut csv = String::from("case,num,den,value\n");
        for r in &rows {
            csv += &format!(
                "{},{},{},{}\n",
                r["case"].as_str().unwrap(),
                r["num"].as_str().unwrap(),
                r["den"].as_str().unwrap(),
                r["value"]
            );
        }
        return emit(&a.common, &rows, csv);
    }
    match a.which {
        Which::Theorem1 => {
            let t = appendix::theorem1_bounds(a.tol)?;
            let mut csv = String::from("case,quadrature,error,exact,published\n");
            for r in &t.regions {
                csv += &format!("{},{},{:e},{},{}\n", r.case.label(), r.quadrature, r.error, r.exact, r.published);
            }
            csv += &format!("upper,{},,{},{}\n", t.total, t.total_exact, t.published_total);
            csv += &format!("lower,{},,{},\n", t.lower, t.lower_exact);
            emit(&a.common, &t, csv)
        }
        Which::Constants => {
            let c = analysis::constants();
            let mut csv = String::from("key,num,den,value\n");
            for k in &c {
                csv += &format!("{},{},{},{}\n", k.key, k.num, k.den, k.value);
            }
            emit(&a.common, &c, csv)
        }
        Which::Lemma1 => {
            let lat = Lattice::finite_square(a.n);
            let v = match &a.fire {
                Some(f) => parse_vertex(&lat, f)?,
                None => lat.origin(),
            };
            let lb = analysis::sphere_burn_lower_bound(&lat, v, a.max_r);
            let csv = format!("n,a,b,max_r,burn_lower_bound\n{},{},{},{},{lb}\n", a.n, v.0, v.1, a.max_r);
            emit(&a.common, &json!({"n": a.n, "fire": v, "max_r": a.max_r, "burn_lower_bound": lb}), csv)
        }
        Which::Profile => {
            let f = a.fire.as_deref().unwrap_or("0.25,0.1");
            let xy: Vec<f64> = f
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| Error::InvalidParams(format!("bad point '{f}'"))))
                .collect::<Res<_>>()?;
            let [x, y] = xy[..] else {
                return Err(Error::InvalidParams("profile needs --fire x,y".into()));
            };
            let case = appendix::classify(x, y)?;
            let steps = 200;
            let rows: Vec<(f64, f64)> = (0..=steps)
                .map(|i| {
                    let r = i as f64 / steps as f64;
                    appendix::sphere_profile(x, y, r).map(|p| (r, p))
                })
                .collect::<Res<_>>()?;
            let mut csv = String::from("r,profile\n");
            for (r, p) in &rows {
                csv += &format!("{r},{p}\n");
            }
            let out = json!({
                "x": x, "y": y, "case": case.label(),
                "thresholds": appendix::thresholds(x, y),
                "closed_form": appendix::closed_form(case, x, y),
                "profile": rows,
            });
            emit(&a.common, &out, csv)
        }
    }
}

fn translate(a: TranslateArgs) -> Res<()> {
    let lat = Lattice::triangular(a.window);
    let fires = fires_of(&lat, &a.fires)?;
    let schedule = BudgetSchedule::constant(a.budget);
    let spec = match &a.strategy {
        Some(name) => spec_of(name, &a.params)?,
        None => {
            let rep = solver::verify_containment_search(&lat, &fires, &schedule, a.max_turns, 50_000_000)?;
            let w = rep.witness.ok_or_else(|| {
                Error::Precondition(format!("no containing strategy found within {} turns", a.max_turns))
            })?;
            StrategySpec::new("scripted", json!({ "turns": w.sequence }))
        }
    };
    let (tri, hex, audit) = translation::translate_and_audit(lat, &fires, &schedule, &spec, a.horizon)?;
    let csv = format!(
        "turns_tri,burnt_tri,turns_hex,burnt_hex,burnt_hex_b,firefighters,b_within_tri_burnt\n{},{},{},{},{},{},{}\n",
        audit.turns_tri,
        audit.burnt_tri,
        audit.turns_hex,
        audit.burnt_hex,
        audit.burnt_hex_b,
        audit.firefighters,
        audit.b_within_tri_burnt
    );
    let out = json!({"audit": audit, "triangular": tri, "hexagonal": hex});
    emit(&a.common, &out, csv)
}

fn check(a: CheckArgs) -> Res<bool> {
    let ids: Vec<String> =
        if a.ids.is_empty() { checks::IDS.iter().map(|s| s.to_string()).collect() } else { a.ids.clone() };
    let results: Vec<checks::Check> =
        pool(a.common.jobs)?.install(|| ids.iter().map(|id| checks::run(id, a.seed)).collect::<Res<_>>())?;
    let mut csv = String::from("id,result,seconds,summary\n");
    for c in &results {
        csv += &format!(
            "{},{},{:.2},\"{}\"\n",
            c.id,
            if c.pass { "PASS" } else { "FAIL" },
            c.seconds,
            c.summary.replace('"', "'")
        );
    }
    emit(&a.common, &results, csv)?;
    Ok(results.iter().all(|c| c.pass))
}

fn serve(a: ServeArgs) -> Res<()> {
    let cfg = firegrid::service::ServiceConfig {
        ttl: std::time::Duration::from_secs(a.ttl),
        max_window: a.max_window,
        ..Default::default()
    };
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(firegrid::service::serve(a.addr, cfg))?;
    Ok(())
}

/// Splices flags from a JSON config file into the argument list, right after
/// the subcommand, so explicit flags given later win.
fn expand_config(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = if let Some(p) = argv[pos].strip_prefix("--config=") {
        let p = p.to_string();
        argv.remove(pos);
        p
    } else {
        if pos + 1 >= argv.len() {
            return Err("--config needs a path".into());
        }
        argv.remove(pos);
        argv.remove(pos)
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("--config {path}: {e}"))?;
    let cfg: serde_json::Map<String, Value> =
        serde_json::from_str(&text).map_err(|e| format!("--config {path}: {e}"))?;
    let subs = ["simulate", "solve", "rate", "bounds", "translate", "serve"];
    let sub = match argv.iter().position(|a| subs.contains(&a.as_str())) {
        Some(i) => i,
        None => {
            let c = cfg.get("command").and_then(Value::as_str).ok_or("--config without a subcommand")?;
            argv.insert(1, c.to_string());
            1
        }
    };
    let mut extra = Vec::new();
    for (k, v) in &cfg {
        if k == "command" {
            continue;
        }
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => extra.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) if k == "fire" || k == "fires" => {
                for it in items {
                    extra.push("--fire".into());
                    extra.push(match it {
                        Value::Array(ab) => ab.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    });
                }
            }
            Value::Array(items) => {
                extra.push(flag);
                extra.push(
                    items
                        .iter()
                        .map(|x| x.as_str().map(String::from).unwrap_or(x.to_string()))
                        .collect::<Vec<_>>()
                        .join(","),
                );
            }
            Value::String(s) => {
                extra.push(flag);
                extra.push(s.clone());
            }
            Value::Object(_) => {
                extra.push(flag);
                extra.push(v.to_string());
            }
            other => {
                extra.push(flag);
                extra.push(other.to_string());
            }
        }
    }
    argv.splice(sub + 1..sub + 1, extra);
    Ok(argv)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let res = match cli.cmd {
        Cmd::Simulate(a) => simulate(a),
        Cmd::Solve(a) => solve(a),
        Cmd::Rate(a) => rate(a),
        Cmd::Bounds(a) => bounds(a),
        Cmd::Translate(a) => translate(a),
        Cmd::Serve(a) => serve(a),
        Cmd::Check(a) => match check(a) {
            Ok(false) => return ExitCode::from(1),
            other => other.map(|_| ()),
        },
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
