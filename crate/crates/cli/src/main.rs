use std::fmt::Display;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use topo_core::decomposition::{open_decomposition, theta_decomposition, weak_homeo_witness};
use topo_core::diagram::verify_diagram;
use topo_core::enumerate::{enumerate_spaces, Mode};
use topo_core::map::{MapFile, Tier};
use topo_core::oracle::{
    certify_hedgehog_profile, embed_hedgehog, verify_embedding, Embedding, Hedgehog, HedgehogProfile, HedgehogSum,
    OracleError, OraclePoint, OracleSpace, PermutedHedgehog,
};
use topo_core::predicate::{find_spaces, PredicateExpr};
use topo_core::regularity::{classify_report, sw_verdict, SwVerdict};
use topo_core::{FinSpace, TopoError};

#[derive(Parser)]
#[command(name = "topo", version, about = "Regularity properties of finite and oracle-described spaces")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel commands; output does not depend on it.
    #[arg(long, global = true, value_name = "K")]
    workers: Option<usize>,
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Caps {
    /// Largest point count accepted by enumerate, search and verify-diagram.
    #[arg(long, global = true, default_value_t = 5, value_name = "N")]
    max_n_cap: usize,
    /// Largest hedgehog depth accepted.
    #[arg(long, global = true, default_value_t = 50, value_name = "D")]
    max_depth_cap: usize,
    /// Largest sw witness-search bound accepted.
    #[arg(long, global = true, default_value_t = 3, value_name = "K")]
    max_sw_cap: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide every regularity property of a space file (`-` for stdin).
    Classify {
        file: String,
        #[arg(long, default_value_t = 3)]
        sw_bound: usize,
    },
    /// Commands on maps.
    Fn {
        #[command(subcommand)]
        cmd: FnCmd,
    },
    /// Layer a space by θ-kernels (default) or open kernels.
    Decompose {
        file: String,
        #[arg(long, conflicts_with = "open")]
        theta: bool,
        #[arg(long)]
        open: bool,
    },
    /// List or count the topologies on n points.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, conflicts_with = "homeo", required_unless_present = "homeo")]
        labeled: bool,
        #[arg(long)]
        homeo: bool,
        #[arg(long)]
        count: bool,
    },
    /// Find canonical spaces satisfying a property expression.
    Search {
        #[arg(long = "where", value_name = "EXPR")]
        expr: String,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Attach the sw witness search, with domains up to K points.
        #[arg(long, value_name = "K")]
        sw_bound: Option<usize>,
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
    /// Check every proved implication over all small labeled spaces.
    VerifyDiagram {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        sw_bound: usize,
    },
    /// The hedgehog and its embeddings.
    Hedgehog {
        #[command(subcommand)]
        cmd: HedgehogCmd,
    },
}

#[derive(Subcommand)]
enum FnCmd {
    /// Place a map file (`-` for stdin) on the discontinuity ladder.
    Classify { file: String },
}

#[derive(Subcommand)]
enum HedgehogCmd {
    /// Certify the hedgehog's properties up to a depth.
    Profile {
        #[arg(long, default_value_t = 50)]
        depth: usize,
    },
    /// Build and verify a copy of the hedgehog at a non-regular point.
    Embed {
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// hedgehog, permuted, sum:discreteN or sum:PATH
        #[arg(long, default_value = "hedgehog")]
        space: String,
        /// Point to embed at.
        #[arg(long, default_value = "∅")]
        at: String,
        /// Base index of the neighborhood U0 witnessing non-regularity.
        #[arg(long, default_value_t = 1)]
        u0: u64,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
}

impl From<TopoError> for CliError {
    fn from(e: TopoError) -> Self {
        match e {
            TopoError::Inconsistent(m) => CliError::Verification(m),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::MalformedToken(_) => CliError::Input(e.to_string()),
            e => CliError::Verification(e.to_string()),
        }
    }
}

type CliResult = Result<String, CliError>;

fn read_source(file: &str) -> Result<String, CliError> {
    if file == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(file).map_err(|e| CliError::Input(format!("{file}: {e}")))
    }
}

fn load_space(file: &str) -> Result<FinSpace, CliError> {
    Ok(FinSpace::from_json(&read_source(file)?)?)
}

fn check_cap(what: &str, value: usize, cap: usize, flag: &str) -> Result<(), CliError> {
    if value > cap {
        return Err(CliError::Input(format!("{what} {value} exceeds the cap {cap}; raise it with {flag}")));
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

fn space_json(s: &FinSpace) -> Value {
    serde_json::to_value(s.to_file()).expect("space serializes")
}

fn classify(file: &str, sw_bound: usize, json: bool, caps: &Caps) -> CliResult {
    check_cap("sw bound", sw_bound, caps.max_sw_cap, "--max-sw-cap")?;
    let space = load_space(file)?;
    let report = classify_report(&space, sw_bound)?;
    if json {
        let mut v = report.to_json();
        v["space"] = space_json(&space);
        return Ok(pretty(&v));
    }
    Ok(report.to_string())
}

fn fn_classify(file: &str, json: bool) -> CliResult {
    let text = read_source(file)?;
    let parsed: MapFile = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("map file: {e}")))?;
    let base: PathBuf = if file == "-" {
        PathBuf::from(".")
    } else {
        Path::new(file).parent().map(Path::to_path_buf).unwrap_or_default()
    };
    let map = parsed.into_map(|p| {
        let path = base.join(p);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| TopoError::Input(format!("{}: {e}", path.display())))?;
        FinSpace::from_json(&text)
    })?;
    let class = map.classify();
    let tier = class.tier();
    let set = |t: Tier| class.witness(t).map(|a| map.domain().fmt_set(a));
    let headline = match tier {
        Tier::Continuous => "continuous".to_string(),
        t => {
            let failed = if t == Tier::None {
                Tier::ScatteredlyContinuous
            } else {
                Tier::LADDER[Tier::LADDER.iter().position(|&x| x == t).unwrap() - 1]
            };
            format!("{t} (not {}; witness A = {})", failed.phrase(), set(failed).unwrap())
        }
    };
    let homeo = |theta| map.is_bijective().then(|| map.is_weak_homeomorphism(theta).unwrap_or(false));
    if json {
        let witnesses: serde_json::Map<String, Value> = Tier::LADDER
            .iter()
            .filter_map(|&t| set(t).map(|s| (t.as_str().to_string(), Value::from(s))))
            .collect();
        return Ok(pretty(&json!({
            "tier": tier.as_str(),
            "witnesses": witnesses,
            "weak_homeomorphism": homeo(false),
            "theta_weak_homeomorphism": homeo(true),
        })));
    }
    let mut out = format!("{headline}\n");
    if let (Some(w), Some(t)) = (homeo(false), homeo(true)) {
        out.push_str(&format!("weak_homeomorphism: {w}\ntheta_weak_homeomorphism: {t}\n"));
    }
    Ok(out)
}

fn decompose(file: &str, open: bool, json: bool) -> CliResult {
    let space = load_space(file)?;
    let dec = if open {
        open_decomposition(&space)
    } else {
        theta_decomposition(&space)
    };
    let target = if dec.is_complete() {
        Some(weak_homeo_witness(&space, !open)?.0)
    } else {
        None
    };
    if json {
        let mut v = dec.to_json(&space);
        v["regular_target"] = target.as_ref().map_or(Value::Null, space_json);
        return Ok(pretty(&v));
    }
    let mut out = dec.render(&space);
    if let Some(y) = target {
        let kind = if open { "weak" } else { "θ-weak" };
        out.push_str(&format!("{kind} homeomorphism onto: {y}\n"));
    }
    Ok(out)
}

fn enumerate(n: usize, homeo: bool, count: bool, json: bool, caps: &Caps) -> CliResult {
    check_cap("n", n, caps.max_n_cap, "--max-n-cap")?;
    let mode = if homeo { Mode::UpToHomeomorphism } else { Mode::Labeled };
    let stream = enumerate_spaces(n, mode)?;
    if count {
        let c = stream.len();
        return Ok(if json { pretty(&json!({ "n": n, "count": c })) } else { format!("{c}\n") });
    }
    let spaces: Vec<FinSpace> = stream.collect();
    if json {
        return Ok(pretty(&Value::Array(spaces.iter().map(space_json).collect())));
    }
    Ok(spaces.iter().map(|s| format!("{s}\n")).collect())
}

fn search(expr: &str, max_n: usize, sw_bound: Option<usize>, limit: usize, json: bool, caps: &Caps) -> CliResult {
    check_cap("max n", max_n, caps.max_n_cap, "--max-n-cap")?;
    if let Some(k) = sw_bound {
        check_cap("sw bound", k, caps.max_sw_cap, "--max-sw-cap")?;
    }
    let parsed = PredicateExpr::parse(expr)?;
    let found = find_spaces(&parsed, max_n, limit)?;
    let sw: Vec<Option<(String, String)>> = found
        .iter()
        .map(|s| {
            sw_bound
                .map(|k| {
                    sw_verdict(s, k).map(|v| match v {
                        SwVerdict::Witnessed(w) => (
                            "false".to_string(),
                            format!("Z = {}, f = {}", w.domain, topo_core::regularity::fmt_assignment(&w.domain, s, &w.assign)),
                        ),
                        SwVerdict::Implied(p) => ("true".to_string(), format!("implied by {p}")),
                        SwVerdict::NoneUpToBound(b) => ("unknown".to_string(), format!("no witness with domain up to {b} points")),
                    })
                })
                .transpose()
        })
        .collect::<Result<_, _>>()?;
    if json {
        let items: Vec<Value> = found
            .iter()
            .zip(&sw)
            .map(|(s, w)| {
                let mut v = json!({ "space": space_json(s) });
                if let Some((verdict, detail)) = w {
                    v["sw_regular"] = json!({ "verdict": verdict, "detail": detail });
                }
                v
            })
            .collect();
        return Ok(pretty(&json!({ "where": parsed.to_string(), "max_n": max_n, "found": items })));
    }
    if found.is_empty() {
        return Ok(format!("none up to n = {max_n}\n"));
    }
    let mut out = String::new();
    for (s, w) in found.iter().zip(&sw) {
        out.push_str(&format!("{s}\n"));
        if let Some((verdict, detail)) = w {
            out.push_str(&format!("  sw_regular: {verdict} [{detail}]\n"));
        }
    }
    Ok(out)
}

fn diagram(max_n: usize, sw_bound: usize, json: bool, caps: &Caps) -> CliResult {
    check_cap("max n", max_n, caps.max_n_cap, "--max-n-cap")?;
    check_cap("sw bound", sw_bound, caps.max_sw_cap, "--max-sw-cap")?;
    let report = verify_diagram(max_n, sw_bound)?;
    let out = if json {
        pretty(&serde_json::to_value(&report).expect("report serializes"))
    } else {
        report.render()
    };
    if report.violations() > 0 {
        print!("{out}");
        return Err(CliError::Verification(format!("{} violations", report.violations())));
    }
    Ok(out)
}

fn profile_json(p: &HedgehogProfile) -> Value {
    json!({
        "depth": p.depth,
        "first_countable": p.first_countable,
        "scattered": p.scattered,
        "layers": p.layers.iter().map(|l| json!({ "kind": l.kind, "points": l.points })).collect::<Vec<_>>(),
        "locally_regular": p.locally_regular,
        "regular": p.regular,
        "root_witnesses": p.root_witnesses.iter().map(|(k, x)| json!({ "k": k, "point": x.to_string() })).collect::<Vec<_>>(),
    })
}

fn profile(depth: usize, json: bool, caps: &Caps) -> CliResult {
    check_cap("depth", depth, caps.max_depth_cap, "--max-depth-cap")?;
    let p = certify_hedgehog_profile(depth);
    let out = if json { pretty(&profile_json(&p)) } else { p.to_string() };
    let expected = depth == 0
        || (p.first_countable == Some(true)
            && p.scattered == Some(true)
            && p.locally_regular == Some(true)
            && p.regular == Some(false));
    if !expected {
        print!("{out}");
        return Err(CliError::Verification("hedgehog profile does not match".into()));
    }
    Ok(out)
}

fn embed_report<O>(o: &O, label: &str, at: &str, u0: u64, depth: usize, json: bool) -> CliResult
where
    O: OracleSpace<Point = OraclePoint>,
    O::Set: Display,
{
    let x: OraclePoint = at.parse()?;
    let e: Embedding<OraclePoint, O::Set> = embed_hedgehog(o, &x, u0, depth)?;
    let report = verify_embedding(o, &e, depth)?;
    if json {
        let mut table = vec![json!({ "token": "∅", "image": e.root.to_string() })];
        for n in 1..=depth {
            table.push(json!({ "token": format!("({n})"), "image": e.stalks[n - 1].to_string() }));
            for m in 1..=depth {
                table.push(json!({ "token": format!("({n},{m})"), "image": e.tips[n - 1][m - 1].to_string() }));
            }
        }
        return Ok(pretty(&json!({
            "space": label,
            "at": x.to_string(),
            "u0_index": u0,
            "depth": depth,
            "k": e.k,
            "v": e.v.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "table": table,
            "verification": {
                "depth": report.depth,
                "clauses": report.clauses.iter().map(|(c, d)| json!({ "clause": c, "detail": d })).collect::<Vec<_>>(),
            },
        })));
    }
    Ok(format!("space: {label}\nU0 = base element {u0} at {x}\n{}{report}", e.render_table()))
}

fn embed(depth: usize, space: &str, at: &str, u0: u64, json: bool, caps: &Caps) -> CliResult {
    check_cap("depth", depth, caps.max_depth_cap, "--max-depth-cap")?;
    match space {
        "hedgehog" => embed_report(&Hedgehog, space, at, u0, depth, json),
        "permuted" => embed_report(&PermutedHedgehog, space, at, u0, depth, json),
        s => {
            let aux = match s.strip_prefix("sum:") {
                Some(rest) => match rest.strip_prefix("discrete").map(str::parse::<usize>) {
                    Some(Ok(n)) if n <= topo_core::space::MAX_POINTS => FinSpace::discrete(n),
                    Some(_) => return Err(CliError::Input(format!("bad summand in {s}"))),
                    None => load_space(rest)?,
                },
                None => {
                    return Err(CliError::Input(format!(
                        "unknown space {s}; expected hedgehog, permuted, sum:discreteN or sum:PATH"
                    )))
                }
            };
            embed_report(&HedgehogSum::new(aux), space, at, u0, depth, json)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    let caps = &cli.caps;
    let json = cli.json;
    match &cli.cmd {
        Cmd::Classify { file, sw_bound } => classify(file, *sw_bound, json, caps),
        Cmd::Fn { cmd: FnCmd::Classify { file } } => fn_classify(file, json),
        Cmd::Decompose { file, open, .. } => decompose(file, *open, json),
        Cmd::Enumerate { n, homeo, count, .. } => enumerate(*n, *homeo, *count, json, caps),
        Cmd::Search {
            expr,
            max_n,
            sw_bound,
            limit,
        } => search(expr, *max_n, *sw_bound, *limit, json, caps),
        Cmd::VerifyDiagram { max_n, sw_bound } => diagram(*max_n, *sw_bound, json, caps),
        Cmd::Hedgehog { cmd } => match cmd {
            HedgehogCmd::Profile { depth } => profile(*depth, json, caps),
            HedgehogCmd::Embed { depth, space, at, u0 } => embed(*depth, space, at, *u0, json, caps),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.workers {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(CliError::Input(format!("worker pool: {e}"))),
        },
        None => run(&cli),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
