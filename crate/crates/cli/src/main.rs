//! `search`: run block-search policies, tabulate their exact accuracies,
//! verify the sequence identities and inequalities behind them, query the
//! minimax oracle, and serve the experiment advisor.

use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use blocksearch::accuracy::{general_accuracy, limit_bracket, verify_inequalities};
use blocksearch::oracle::{witness_function, worst_case, DEFAULT_BRANCH_CAP};
use blocksearch::runtime::run_search_in;
use blocksearch::sequences::{check_identity, check_monotone_ratios, e_seq, f_seq, g_seq, Identity, IdentityReport};
use blocksearch::{PolicySpec, QuadNum, Stop};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Parser)]
#[command(
    name = "search",
    version,
    about = "Block search for the maximum of a unimodal function"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PolicyArgs {
    /// Policy as JSON, e.g. '{"type":"odd_block_h","i":2}'
    #[arg(long)]
    policy: Option<String>,

    /// Block order; with --alpha1 selects a basic policy
    #[arg(long)]
    i: Option<u64>,

    /// First short gap of a basic policy, exact (e.g. 13/100)
    #[arg(long)]
    alpha1: Option<String>,
}

impl PolicyArgs {
    fn resolve(&self) -> Result<PolicySpec, String> {
        let p = match (&self.policy, self.i, &self.alpha1) {
            (Some(json), None, None) => {
                serde_json::from_str::<PolicySpec>(json).map_err(|e| format!("--policy: {e}"))?
            }
            (None, Some(i), Some(a)) => PolicySpec::Basic {
                i,
                alpha1: a.parse::<QuadNum>().map_err(|e| format!("--alpha1: {e}"))?,
            },
            _ => return Err("give either --policy, or --i with --alpha1".into()),
        };
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a policy against a function and report the estimate and its bound
    Run {
        #[command(flatten)]
        policy: PolicyArgs,

        /// Number of steps
        #[arg(long)]
        steps: usize,

        /// Search interval as `a,b`
        #[arg(long, default_value = "0,1", value_parser = parse_interval)]
        interval: (QuadNum, QuadNum),

        /// Maximize -|x - PEAK|
        #[arg(long, conflicts_with_all = ["table", "interactive"])]
        peak: Option<f64>,

        /// Maximize the piecewise-linear function through the `x y` rows of FILE
        #[arg(long, conflicts_with = "interactive")]
        table: Option<PathBuf>,

        /// Read each measured value from stdin as its point is printed
        #[arg(long)]
        interactive: bool,
    },

    /// Tabulate the exact step accuracy and its weighted form for n = 1..=steps
    Accuracy {
        #[command(flatten)]
        policy: PolicyArgs,

        #[arg(long)]
        steps: usize,
    },

    /// Check identities, ratio monotonicity, limit brackets and inequalities exactly
    Verify {
        /// Smallest block order
        #[arg(long, default_value_t = 2)]
        i: u64,

        /// Largest block order (defaults to --i)
        #[arg(long)]
        i_max: Option<u64>,

        /// Largest sequence index checked
        #[arg(long, default_value_t = 12)]
        steps: usize,
    },

    /// Exact worst-case accuracy by enumerating every adversary outcome
    Oracle {
        #[command(flatten)]
        policy: PolicyArgs,

        #[arg(long)]
        steps: usize,

        /// Include the piecewise-linear function that realizes the worst case
        #[arg(long)]
        witness: bool,

        /// Maximum number of outcome leaves to explore
        #[arg(long, default_value_t = DEFAULT_BRANCH_CAP)]
        cap: usize,
    },

    /// Serve the experiment advisor over HTTP
    AdviseServe {
        #[arg(long, default_value_t = 8080)]
        port: u16,

        /// Address to bind
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,

        /// Directory for per-session event logs; sessions found there are restored
        #[arg(long)]
        log_dir: Option<PathBuf>,
    },

    /// Print F, G or E sequence values for n up to --steps
    Seq {
        #[arg(long, value_enum, default_value = "f")]
        kind: SeqName,

        #[arg(long)]
        i: u64,

        #[arg(long)]
        steps: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeqName {
    F,
    G,
    E,
}

fn parse_interval(s: &str) -> Result<(QuadNum, QuadNum), String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    let a: QuadNum = a.parse().map_err(|e: blocksearch::Error| e.to_string())?;
    let b: QuadNum = b.parse().map_err(|e: blocksearch::Error| e.to_string())?;
    Ok((a, b))
}

/// Command result: a JSON document, the same data as TSV rows, and whether
/// every check in it held.
struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    ok: bool,
}

impl Report {
    fn print(&self, format: Format) -> io::Result<()> {
        let mut out = io::stdout().lock();
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&self.json)?),
            Format::Tsv => {
                writeln!(out, "{}", self.header.join("\t"))?;
                for r in &self.rows {
                    writeln!(out, "{}", r.join("\t"))?;
                }
                Ok(())
            }
        }
    }
}

fn num(q: &QuadNum) -> Value {
    json!({ "exact": q.to_string(), "float": q.to_f64() })
}

type CmdResult = Result<Report, String>;

fn e2s(e: impl ToString) -> String {
    e.to_string()
}

/// Linear interpolation through `x y` rows, NaN outside the sampled range.
fn table_function(path: &PathBuf) -> Result<impl FnMut(f64) -> f64, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut pts = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<f64>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(x)), Some(Ok(y)), None) => pts.push((x, y)),
            _ => return Err(format!("{}:{}: expected `x y`", path.display(), k + 1)),
        }
    }
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    if pts.len() < 2 {
        return Err(format!("{}: need at least two rows", path.display()));
    }
    Ok(move |x: f64| {
        let k = pts.partition_point(|p| p.0 < x);
        if k < pts.len() && pts[k].0 == x {
            return pts[k].1;
        }
        if k == 0 || k == pts.len() {
            return f64::NAN;
        }
        let ((x0, y0), (x1, y1)) = (pts[k - 1], pts[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    })
}

fn interactive_function() -> impl FnMut(f64) -> f64 {
    let stdin = io::stdin();
    move |x| {
        eprint!("f({x}) = ");
        let _ = io::stderr().flush();
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(n) if n > 0 => line.trim().parse().unwrap_or(f64::NAN),
            _ => f64::NAN,
        }
    }
}

fn run(policy: &PolicySpec, steps: usize, (a, b): (QuadNum, QuadNum), f: impl FnMut(f64) -> f64) -> CmdResult {
    let out = run_search_in(f, policy, a, b, Stop::Steps(steps)).map_err(e2s)?;
    let mut rows = Vec::new();
    for (k, (lo, hi)) in out.trajectory.iter().enumerate() {
        rows.push(vec![
            (k + 1).to_string(),
            lo.to_string(),
            hi.to_string(),
            lo.to_f64().to_string(),
            hi.to_f64().to_string(),
        ]);
    }
    let json = json!({
        "policy": policy,
        "steps": out.steps,
        "estimate": num(&out.estimate),
        "bound": num(&out.bound),
        "interval": [num(&out.interval.0), num(&out.interval.1)],
        "trajectory": out.trajectory.iter().map(|(lo, hi)| json!([num(lo), num(hi)])).collect::<Vec<_>>(),
        "history": out.history.iter().map(|e| json!({"step": e.step, "point": num(&e.point), "value": e.value})).collect::<Vec<_>>(),
    });
    Ok(Report {
        json,
        header: vec!["step", "a", "b", "a_float", "b_float"],
        rows,
        ok: true,
    })
}

fn accuracy(policy: &PolicySpec, steps: usize) -> CmdResult {
    let ga = general_accuracy(policy, steps).map_err(e2s)?;
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for (k, w) in ga.weighted.iter().enumerate() {
        let n = k + 1;
        let delta = blocksearch::accuracy::step_accuracy(policy, n).map_err(e2s)?;
        rows.push(vec![
            n.to_string(),
            delta.to_string(),
            delta.to_f64().to_string(),
            w.to_string(),
            w.to_f64().to_string(),
        ]);
        table.push(json!({"n": n, "delta": num(&delta), "weighted": num(w)}));
    }
    let json = json!({
        "policy": policy,
        "rows": table,
        "sup": num(&ga.sup),
        "attained_at": ga.attained_at,
        "limit": ga.limit.as_ref().map(num),
        "converged": ga.converged,
    });
    Ok(Report {
        json,
        header: vec!["n", "delta", "delta_float", "weighted", "weighted_float"],
        rows,
        ok: true,
    })
}

/// Every identity over its whole validity range with indices up to `n_max`.
fn identity_reports(i: u64, n_max: i64) -> Result<Vec<IdentityReport>, String> {
    let mut out = Vec::new();
    for id in Identity::ALL {
        match id {
            Identity::FCassini | Identity::FFromG => out.push(check_identity(id, i, 1..=n_max, 0..=0)),
            Identity::FAdjacentProducts => out.push(check_identity(id, i, 2..=n_max, 0..=0)),
            Identity::GProducts => {
                out.extend((0..=n_max).map(|n| check_identity(id, i, n..=n, 0..=(n + 1).min(n_max))))
            }
            Identity::GSkipProducts | Identity::FGSkipProducts => {
                out.extend((0..=n_max).map(|n| check_identity(id, i, n..=n, 1..=(n + 1).min(n_max))))
            }
            Identity::GRatioOrder => out.extend((0..=n_max).map(|n| check_identity(id, i, n..=n, 0..=n))),
        }
    }
    out.into_iter().map(|r| r.map_err(e2s)).collect()
}

fn verify(i_lo: u64, i_hi: u64, steps: usize) -> CmdResult {
    if i_lo < 2 || i_hi < i_lo {
        return Err("block orders must satisfy 2 <= --i <= --i-max".into());
    }
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut ok = true;
    let mut record = |check: String, i: u64, cases: usize, holds: bool, failures: Value| {
        ok &= holds;
        rows.push(vec![check.clone(), i.to_string(), cases.to_string(), holds.to_string()]);
        items.push(json!({"check": check, "i": i, "cases": cases, "holds": holds, "failures": failures}));
    };
    for i in i_lo..=i_hi {
        let reports = identity_reports(i, steps as i64)?;
        for id in Identity::ALL {
            let of_id: Vec<_> = reports.iter().filter(|r| r.identity == id).collect();
            let cases = of_id.iter().map(|r| r.cases.len()).sum();
            let failed: Vec<_> = of_id.iter().flat_map(|r| r.cases.iter().filter(|c| !c.holds)).collect();
            let name = serde_json::to_value(id).map_err(e2s)?;
            record(
                format!("identity {}", name.as_str().unwrap_or("?")),
                i,
                cases,
                failed.is_empty(),
                json!(failed),
            );
        }
        let ratios = check_monotone_ratios(i, steps).map_err(e2s)?;
        let failed: Vec<_> = ratios.checks.iter().filter(|c| !c.holds).collect();
        record(
            "monotone ratios".into(),
            i,
            ratios.checks.len(),
            ratios.all_hold,
            json!(failed),
        );
        let bracket = limit_bracket(i, steps / 2).map_err(e2s)?;
        record(
            "limit bracket".into(),
            i,
            bracket.rows.len(),
            bracket.holds(),
            json!(bracket.limit.to_string()),
        );
    }
    let ineq = verify_inequalities(i_lo..=i_hi).map_err(e2s)?;
    for c in &ineq.checks {
        let detail = json!({"lhs": num(&c.lhs), "relation": c.relation, "rhs": num(&c.rhs)});
        record(
            c.name.clone(),
            c.i,
            1,
            c.holds,
            if c.holds { Value::Null } else { detail },
        );
    }
    let json = json!({"i": [i_lo, i_hi], "steps": steps, "all_hold": ok, "checks": items});
    Ok(Report {
        json,
        header: vec!["check", "i", "cases", "holds"],
        rows,
        ok,
    })
}

fn oracle(policy: &PolicySpec, steps: usize, witness: bool, cap: usize) -> CmdResult {
    let wc = worst_case(policy, steps, cap).map_err(e2s)?;
    let mut json = json!({
        "policy": policy,
        "steps": steps,
        "value": num(&wc.value),
        "branch": wc.branch.choices,
        "leaves": wc.leaves,
    });
    if witness {
        let w = witness_function(policy, &wc.branch).map_err(e2s)?;
        json["witness"] = json!({
            "peak": num(&w.peak),
            "breakpoints": w.breakpoints.iter().map(|p| json!({"x": num(&p.x), "y": p.y})).collect::<Vec<_>>(),
        });
    }
    let rows = vec![vec![
        steps.to_string(),
        wc.value.to_string(),
        wc.value.to_f64().to_string(),
        wc.leaves.to_string(),
    ]];
    Ok(Report {
        json,
        header: vec!["n", "worst_case", "worst_case_float", "leaves"],
        rows,
        ok: true,
    })
}

fn seq(kind: SeqName, i: u64, steps: usize) -> CmdResult {
    let t = match kind {
        SeqName::F => f_seq(i, steps),
        SeqName::G => g_seq(i, steps),
        SeqName::E => e_seq(i, steps),
    }
    .map_err(e2s)?;
    let rows: Vec<Vec<String>> = t.entries().map(|(n, v)| vec![n.to_string(), v.to_string()]).collect();
    let json = json!({
        "i": i,
        "first_index": t.first_index(),
        "values": t.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    Ok(Report {
        json,
        header: vec!["index", "value"],
        rows,
        ok: true,
    })
}

fn serve(host: std::net::IpAddr, port: u16, log_dir: Option<PathBuf>) -> Result<(), String> {
    let addr = SocketAddr::new(host, port);
    let rt = tokio::runtime::Runtime::new().map_err(e2s)?;
    eprintln!("advisor listening on http://{addr}");
    rt.block_on(blocksearch_advisor::serve(addr, log_dir)).map_err(e2s)
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Run {
            policy,
            steps,
            interval,
            peak,
            table,
            interactive,
        } => {
            let p = policy.resolve()?;
            if let Some(c) = peak {
                run(&p, steps, interval, |x| -(x - c).abs())
            } else if let Some(path) = table {
                run(&p, steps, interval, table_function(&path)?)
            } else if interactive {
                run(&p, steps, interval, interactive_function())
            } else {
                Err("give one of --peak, --table or --interactive".into())
            }
        }
        Command::Accuracy { policy, steps } => accuracy(&policy.resolve()?, steps),
        Command::Verify { i, i_max, steps } => verify(i, i_max.unwrap_or(i), steps),
        Command::Oracle {
            policy,
            steps,
            witness,
            cap,
        } => oracle(&policy.resolve()?, steps, witness, cap),
        Command::Seq { kind, i, steps } => seq(kind, i, steps),
        Command::AdviseServe { port, host, log_dir } => serve(host, port, log_dir).map(|()| Report {
            json: Value::Null,
            header: vec![],
            rows: vec![],
            ok: true,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match dispatch(cli) {
        Ok(report) => {
            if report.json.is_null() {
                return ExitCode::SUCCESS;
            }
            match report.print(format) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => return ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
                Ok(()) => {}
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
