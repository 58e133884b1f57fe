use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use coverlab::bounds::{cover_constants, ramsey, ramsey_search, search_eligible, xi_value};
use coverlab::constructive::{
    cover_to_path_cover, cover_to_star_cover, sp_cover_construct_with, sp_partition_construct_with,
    ConstructOptions,
};
use coverlab::generators::{generate, NamedGraphSpec};
use coverlab::io::{detect_format, read_graph, to_graph6, write_graph, GraphFormat};
use coverlab::iso::{characterize, family_leq, find_forbidden, ForbiddenFamily};
use coverlab::solvers::{
    chromatic_number, clique_number, independence_number, min_dominating_set, solve_invariant,
    validate_certificate, PieceCertificate, SolveConfig, SolveStatus,
};
use coverlab::verify::{chain_violations, gnp, run_suite, Suite, VerifyConfig};
use coverlab::{Error, Graph, Invariant};

const EXIT_FAILED: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "coverlab",
    version,
    about = "Induced star/path cover and partition invariants"
)]
struct Cli {
    /// Graph file format; input is auto-detected when omitted.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Solver time budget per invariant, in seconds.
    #[arg(long, global = true, default_value_t = 60.0)]
    timeout: f64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Seed for random corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    G6,
    Edges,
}

impl From<Format> for GraphFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::G6 => GraphFormat::Graph6,
            Format::Edges => GraphFormat::Edges,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructMode {
    Cover,
    Partition,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Star,
    Path,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named graph (`sstar:3`, `h1:2,3`) or a G(n,p) sample (`gnp:n,p`).
    Gen { spec: String },
    /// Compute invariants with certificates.
    Solve {
        /// Graph file, `-` for stdin, or a generator spec.
        graph: String,
        /// Comma-separated invariants or `all`.
        #[arg(long, default_value = "all")]
        invariants: String,
        /// Also report chromatic, clique, independence and domination numbers.
        #[arg(long)]
        aux: bool,
    },
    /// Test whether a graph avoids a forbidden family.
    CheckFree { graph: String, family: String },
    /// Test `F1 <= F2`.
    CheckOrder { family1: String, family2: String },
    /// Least `n` with `family <= target(n)` for an invariant.
    Characterize {
        family: String,
        invariant: Invariant,
    },
    /// Run the bounded SP-cover or SP-partition construction.
    Construct {
        graph: String,
        mode: ConstructMode,
        n: usize,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Numeric value assumed for the colouring constant.
        #[arg(long)]
        c_chi: Option<u64>,
    },
    /// Turn an SP certificate (JSON) into a star or path certificate.
    ConvertCover {
        graph: String,
        certificate: PathBuf,
        target: Target,
        n: usize,
    },
    /// Ramsey numbers and derived constants.
    Bounds {
        #[command(subcommand)]
        what: BoundsCmd,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        /// Override the number of random graphs (chains and oracle).
        #[arg(long)]
        graphs: Option<usize>,
        /// Largest m for the extremal families.
        #[arg(long, default_value_t = 4)]
        max_m: usize,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    Ramsey {
        s: usize,
        t: usize,
        /// Re-run the exhaustive search when it is feasible.
        #[arg(long)]
        search: bool,
    },
    Xi {
        n: usize,
        i: usize,
    },
    Constants {
        n: usize,
        #[arg(long)]
        c_chi: Option<u64>,
    },
}

/// An error with its exit code and optional structured detail.
struct Failure {
    code: u8,
    err: anyhow::Error,
    detail: Option<Value>,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(Error::InternalInvariantBroken(_)) => EXIT_FAILED,
            _ => EXIT_INPUT,
        };
        let detail = match err.downcast_ref::<Error>() {
            Some(Error::FreenessViolated { name, embedding }) => {
                Some(json!({"member": name, "embedding": embedding}))
            }
            _ => None,
        };
        Failure { code, err, detail }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let mut msg = json!({"error": format!("{:#}", f.err)});
            if let Some(d) = f.detail {
                msg["witness"] = d;
            }
            eprintln!("{}", serde_json::to_string_pretty(&msg).unwrap());
            ExitCode::from(f.code)
        }
    }
}

fn solve_config(cli: &Cli) -> Result<SolveConfig, Failure> {
    let mut cfg = SolveConfig::with_budget(cli.timeout)?;
    cfg.parallel = cli.jobs != 1;
    Ok(cfg)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Key-sorted, pretty JSON.
fn emit_json(cli: &Cli, v: &Value) -> Result<(), Failure> {
    emit(cli, &(serde_json::to_string_pretty(v).unwrap() + "\n"))
}

fn load_graph(cli: &Cli, arg: &str) -> Result<Graph, Failure> {
    let text = if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else if Path::new(arg).exists() {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else if arg.contains(':') {
        return spec_graph(cli, arg);
    } else {
        return Err(anyhow::anyhow!("no such file: {arg}").into());
    };
    let format = cli
        .format
        .map_or_else(|| detect_format(&text), GraphFormat::from);
    Ok(read_graph(&text, format).with_context(|| format!("parsing {arg}"))?)
}

/// `inspc:4` names the target family of an invariant; anything else is a
/// `;`-separated list of generator specs.
fn parse_family(s: &str) -> Result<ForbiddenFamily, Failure> {
    if let Some((inv, n)) = s.split_once(':') {
        if let (Ok(inv), Ok(n)) = (inv.parse::<Invariant>(), n.trim().parse::<usize>()) {
            if n < 2 {
                return Err(
                    Error::BadParameter(format!("target family needs n >= 2, got {n}")).into(),
                );
            }
            return Ok(inv.target(n));
        }
    }
    let members = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| generate(&p.trim().parse::<NamedGraphSpec>()?))
        .collect::<coverlab::Result<Vec<_>>>()?;
    if members.is_empty() {
        return Err(Error::Parse(format!("empty family `{s}`")).into());
    }
    Ok(ForbiddenFamily::named(members, s))
}

fn graph_identity(g: &Graph) -> Value {
    json!({"order": g.order(), "size": g.size(), "graph6": to_graph6(g)})
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Gen { spec } => cmd_gen(cli, spec),
        Command::Solve {
            graph,
            invariants,
            aux,
        } => cmd_solve(cli, graph, invariants, *aux),
        Command::CheckFree { graph, family } => {
            let g = load_graph(cli, graph)?;
            let fam = parse_family(family)?;
            let hit = find_forbidden(&g, &fam);
            let out = match &hit {
                None => json!({"free": true, "family": fam.name}),
                Some((i, e)) => json!({
                    "free": false,
                    "family": fam.name,
                    "member": fam.members[*i].label().map_or_else(|| i.to_string(), str::to_string),
                    "embedding": e,
                }),
            };
            emit_json(cli, &out)?;
            Ok(0)
        }
        Command::CheckOrder { family1, family2 } => {
            let (f1, f2) = (parse_family(family1)?, parse_family(family2)?);
            emit_json(
                cli,
                &json!({"family1": family1, "family2": family2, "leq": family_leq(&f1, &f2)}),
            )?;
            Ok(0)
        }
        Command::Characterize { family, invariant } => {
            let fam = parse_family(family)?;
            let n = characterize(&fam, *invariant)?;
            emit_json(
                cli,
                &json!({"family": family, "invariant": invariant.name(), "n": n}),
            )?;
            Ok(0)
        }
        Command::Construct {
            graph,
            mode,
            n,
            root,
            c_chi,
        } => {
            let g = load_graph(cli, graph)?;
            let opts = ConstructOptions {
                root: *root,
                c_chi: *c_chi,
            };
            let trace = match mode {
                ConstructMode::Cover => sp_cover_construct_with(&g, *n, &opts)?,
                ConstructMode::Partition => sp_partition_construct_with(&g, *n, &opts)?,
            };
            emit_json(cli, &trace.to_json())?;
            Ok(if trace.valid { 0 } else { EXIT_FAILED })
        }
        Command::ConvertCover {
            graph,
            certificate,
            target,
            n,
        } => {
            let g = load_graph(cli, graph)?;
            let text = fs::read_to_string(certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let v: Value = serde_json::from_str(&text).context("certificate is not JSON")?;
            // Accept a bare certificate or a construction trace.
            let cert_json = v.get("result").cloned().unwrap_or(v);
            let cert: PieceCertificate =
                serde_json::from_value(cert_json).context("malformed certificate")?;
            let out = match target {
                Target::Star => cover_to_star_cover(&g, &cert, *n)?,
                Target::Path => cover_to_path_cover(&g, &cert, *n)?,
            };
            let valid = validate_certificate(&g, &out).pass;
            emit_json(cli, &json!({"certificate": out, "valid": valid}))?;
            Ok(if valid { 0 } else { EXIT_FAILED })
        }
        Command::Bounds { what } => cmd_bounds(cli, what),
        Command::Verify {
            suite,
            graphs,
            max_m,
        } => {
            let mut cfg = VerifyConfig {
                seed: cli.seed,
                lower_bound_max_m: *max_m,
                solve: solve_config(cli)?,
                ..Default::default()
            };
            if let Some(k) = graphs {
                cfg.chain_graphs = *k;
                cfg.oracle_graphs = *k;
            }
            let report = run_suite(*suite, &cfg)?;
            emit_json(cli, &serde_json::to_value(&report).unwrap())?;
            Ok(if report.pass { 0 } else { EXIT_FAILED })
        }
    }
}

/// A generator spec, or `gnp:n,p` sampled with the global seed.
fn spec_graph(cli: &Cli, spec: &str) -> Result<Graph, Failure> {
    if let Some(params) = spec.strip_prefix("gnp:") {
        let (n, p) = params
            .split_once(',')
            .and_then(|(n, p)| {
                Some((
                    n.trim().parse::<usize>().ok()?,
                    p.trim().parse::<f64>().ok()?,
                ))
            })
            .ok_or_else(|| Error::Parse(format!("expected gnp:n,p, got `{spec}`")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadParameter(format!("edge probability {p} outside [0, 1]")).into());
        }
        return Ok(gnp(&mut ChaCha8Rng::seed_from_u64(cli.seed), n, p));
    }
    Ok(generate(&spec.parse::<NamedGraphSpec>()?)?)
}

fn cmd_gen(cli: &Cli, spec: &str) -> CmdResult {
    let g = spec_graph(cli, spec)?;
    let format = cli.format.map_or(GraphFormat::Graph6, GraphFormat::from);
    emit(cli, &write_graph(&g, format))?;
    Ok(0)
}

fn cmd_solve(cli: &Cli, graph: &str, invariants: &str, aux: bool) -> CmdResult {
    let g = load_graph(cli, graph)?;
    let cfg = solve_config(cli)?;
    let invs: Vec<Invariant> = if invariants == "all" {
        Invariant::ALL.to_vec()
    } else {
        invariants
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<coverlab::Result<_>>()?
    };
    let mut results = Vec::new();
    let mut values = [0usize; 8];
    let mut timed_out = false;
    for inv in &invs {
        let s = solve_invariant(&g, *inv, &cfg)?;
        let report = validate_certificate(&g, &s.certificate);
        if !report.pass {
            return Err(Failure {
                code: EXIT_FAILED,
                err: anyhow::anyhow!(
                    "{inv} certificate failed validation: {:?}",
                    report.failures()
                ),
                detail: None,
            });
        }
        timed_out |= s.status == SolveStatus::Timeout;
        values[Invariant::ALL.iter().position(|x| x == inv).unwrap()] = s.value();
        results.push(json!({
            "invariant": inv.name(),
            "value": s.value(),
            "status": s.status,
            "lower_bound": s.lower_bound,
            "nodes": s.nodes,
            "certificate": s.certificate,
        }));
    }
    let mut out = json!({"graph": graph_identity(&g), "results": results});
    if Invariant::ALL.iter().all(|i| invs.contains(i)) && !timed_out {
        let violations = chain_violations(&g, &values);
        out["cross_checks"] = json!({"violations": violations, "pass": violations.is_empty()});
    }
    if aux {
        let dom = if g.is_connected() {
            Some(min_dominating_set(&g)?.len())
        } else {
            None
        };
        out["auxiliary"] = json!({
            "chromatic": chromatic_number(&g),
            "clique": clique_number(&g),
            "independence": independence_number(&g),
            "domination": dom,
        });
    }
    emit_json(cli, &out)?;
    let chains_ok = out
        .get("cross_checks")
        .is_none_or(|c| c["pass"] == json!(true));
    Ok(if timed_out {
        EXIT_TIMEOUT
    } else if !chains_ok {
        EXIT_FAILED
    } else {
        0
    })
}

fn cmd_bounds(cli: &Cli, what: &BoundsCmd) -> CmdResult {
    let out = match what {
        BoundsCmd::Ramsey { s, t, search } => {
            if *s == 0 || *t == 0 {
                return Err(
                    Error::BadParameter("Ramsey parameters must be positive".into()).into(),
                );
            }
            let mut v = json!({"s": s, "t": t, "bound": ramsey(*s, *t)});
            if *search {
                if !search_eligible(*s, *t) {
                    return Err(Error::BadParameter(format!(
                        "R({s},{t}) is outside the exhaustive search range"
                    ))
                    .into());
                }
                let r = ramsey_search(*s, *t, 20)
                    .ok_or_else(|| Error::BadParameter("search exceeded order 20".into()))?;
                v["search"] =
                    json!({"value": r.value, "witness": to_graph6(&r.witness), "counts": r.counts});
            }
            v
        }
        BoundsCmd::Xi { n, i } => {
            if *n < 3 || *i < 1 {
                return Err(Error::BadParameter(format!(
                    "xi needs n >= 3 and i >= 1, got n = {n}, i = {i}"
                ))
                .into());
            }
            json!({"n": n, "i": i, "bound": xi_value(*n, *i)})
        }
        BoundsCmd::Constants { n, c_chi } => {
            serde_json::to_value(cover_constants(*n, *c_chi)?).unwrap()
        }
    };
    emit_json(cli, &out)?;
    Ok(0)
}
