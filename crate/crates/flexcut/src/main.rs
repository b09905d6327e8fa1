//! `flexcut`: solver and experiment driver for flexible graph
//! connectivity with safe/unsafe edges.
//!
//! Every subcommand prints a human-readable summary followed by a JSON
//! block (or only JSON with `--json`). The exit code is 0 only when the
//! requested verdicts and certificates all pass.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use flexcut::counterexample::{self, Construction, ImplicitOracle, OptBound};
use flexcut::exact::{self, SolveBudget, SolveError};
use flexcut::family::{self, CutFamily};
use flexcut::fgc::{self, Feasibility};
use flexcut::graph::{format_instance, parse_instance, EdgeSet, ParsedInstance};
use flexcut::instances;
use flexcut::pd::{self, ViolationOracle};
use flexcut::pipeline::{self, Stage1Mode};
use flexcut::rational::format_rational;
use flexcut::EdgeId;

#[derive(Parser)]
#[command(
    name = "flexcut",
    version,
    about = "Two-stage solver, structural checkers, and experiments for \
             flexible graph connectivity with safe and unsafe edges"
)]
struct Cli {
    /// Emit only the JSON block, no human-readable tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an edge subset of an instance for (p,q)-feasibility.
    Verify(VerifyArgs),
    /// Run the two-stage solver and verify its certificates.
    Solve(SolveArgs),
    /// Compute the brute-force optimum of an instance.
    Exact(ExactArgs),
    /// Run structural checks on a cut family file.
    CheckFamily(CheckFamilyArgs),
    /// Build the lower-bound construction for one k and run the engine.
    Counterexample(CounterexampleArgs),
    /// Tabulate the primal-dual vs optimum gap over a range of k.
    Gap(GapArgs),
    /// Generate a seeded random feasible instance.
    Gen(GenArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file (`n m p q` header, then `u v cost S|U` lines).
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated edge ids to test; all edges when omitted.
    #[arg(long)]
    edges: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    /// Stage-1 mode: `exact` minimizes cost, `heuristic` greedily deletes.
    #[arg(long, value_enum, default_value_t = Stage1ModeArg::Exact)]
    stage1: Stage1ModeArg,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Skip the exact-optimum comparison even when it fits the budget.
    #[arg(long)]
    no_opt: bool,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct CheckFamilyArgs {
    /// Family file: one `S={i,j,...}` line per member shore.
    #[arg(long)]
    input: PathBuf,
    /// Ground-set size; inferred as max member + 1 when omitted.
    #[arg(long)]
    ground: Option<usize>,
    /// Checks that must pass for exit code 0.
    #[arg(long, value_enum, default_values_t = [FamilyCheckArg::Weakly])]
    require: Vec<FamilyCheckArg>,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Construction parameter (k >= 2).
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct GapArgs {
    #[arg(long)]
    kmin: u32,
    #[arg(long)]
    kmax: u32,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    nodes: usize,
    #[arg(long, default_value_t = 12)]
    edges: usize,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 0.6)]
    safe_prob: f64,
    #[arg(long, default_value_t = 1)]
    cost_min: i64,
    #[arg(long, default_value_t = 10)]
    cost_max: i64,
    /// Write the instance text here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage1ModeArg {
    Exact,
    Heuristic,
}

impl From<Stage1ModeArg> for Stage1Mode {
    fn from(a: Stage1ModeArg) -> Self {
        match a {
            Stage1ModeArg::Exact => Stage1Mode::Exact,
            Stage1ModeArg::Heuristic => Stage1Mode::Heuristic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyCheckArg {
    Uncrossable,
    Weakly,
    Closure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(e.as_ref());
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(2)
        }
    }
}

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Solve(a) => cmd_solve(cli, a),
        Command::Exact(a) => cmd_exact(cli, a),
        Command::CheckFamily(a) => cmd_check_family(cli, a),
        Command::Counterexample(a) => cmd_counterexample(cli, a),
        Command::Gap(a) => cmd_gap(cli, a),
        Command::Gen(a) => cmd_gen(cli, a),
    }
}

fn read_instance(path: &PathBuf) -> Result<ParsedInstance, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(parse_instance(&text)?)
}

fn parse_edge_list(s: &str) -> Result<EdgeSet, Box<dyn std::error::Error>> {
    let mut out = EdgeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        out.insert(part.parse::<EdgeId>().map_err(|e| format!("bad edge id {part:?}: {e}"))?);
    }
    Ok(out)
}

fn emit(cli: &Cli, table: &str, value: &impl Serialize) -> Result<(), Box<dyn std::error::Error>> {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        println!("{table}");
    }
    Ok(())
}

/// FNV-1a hash of the canonical instance text, for golden lines.
fn instance_hash(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn edge_list_string(edges: &[EdgeId]) -> String {
    if edges.is_empty() {
        "-".to_string()
    } else {
        edges.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let inst = read_instance(&a.input)?;
    let f = match &a.edges {
        Some(s) => parse_edge_list(s)?,
        None => inst.graph.all_edges(),
    };
    let verdict = fgc::feasibility(&inst.graph, inst.p, inst.q, &f, fgc::DEFAULT_ENUMERATION_LIMIT)?;
    let (feasible, witness) = match &verdict {
        Feasibility::Feasible => (true, None),
        Feasibility::Infeasible(w) => (false, Some(w.clone())),
    };
    let mut table = format!(
        "instance: {} (n={} m={} p={} q={})\nedges tested: {}\nfeasible: {}",
        a.input.display(),
        inst.graph.node_count(),
        inst.graph.edge_count(),
        inst.p,
        inst.q,
        f.len(),
        feasible,
    );
    if let Some(w) = &witness {
        table.push_str(&format!("\nviolated: {w}"));
    }
    emit(
        cli,
        &table,
        &json!({
            "p": inst.p,
            "q": inst.q,
            "edges_tested": f.iter().copied().collect::<Vec<_>>(),
            "feasible": feasible,
            "witness": witness,
        }),
    )?;
    Ok(if feasible { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_solve(cli: &Cli, a: &SolveArgs) -> CmdResult {
    let inst = read_instance(&a.input)?;
    if inst.q != 2 {
        return Err(format!("solve requires q=2 instances, got q={}", inst.q).into());
    }
    let budget = SolveBudget::for_feasibility();
    let result = pipeline::solve_p2fgc(
        &inst.graph,
        inst.p,
        a.stage1.into(),
        &budget,
        fgc::DEFAULT_ENUMERATION_LIMIT,
    )?;

    // Exact-optimum comparison when the instance fits the search budget.
    let opt = if a.no_opt {
        None
    } else {
        match exact::exact_min_cost_feasible(&inst.graph, inst.p, 2, &budget) {
            Ok(sol) => Some(sol),
            Err(
                SolveError::TooManyNodes { .. }
                | SolveError::TooManyEdges { .. }
                | SolveError::BudgetExceeded { .. },
            ) => None,
            Err(e) => return Err(e.into()),
        }
    };

    let mut table = format!(
        "instance: {} (n={} m={} p={} q=2, {:?} parity, beta={})\n\
         stage 1 ({:?}): {} edges, cost {}\n\
         deficient cuts: {} (family of {} canonical shores)\n\
         augmentation: {} edges added, {} reverse-deleted, cost {}\n\
         total: {} edges, cost {}\n\
         dual sum: {}\n\
         certificates: {}",
        a.input.display(),
        inst.graph.node_count(),
        inst.graph.edge_count(),
        inst.p,
        result.parity,
        result.beta,
        result.stage1_mode,
        result.stage1_edges.len(),
        format_rational(&result.stage1_cost),
        result.deficient_cuts.len(),
        result.family_size,
        result.trace.added.len(),
        result.trace.deleted.len(),
        format_rational(&result.augmentation_cost),
        result.final_edges.len(),
        format_rational(&result.total_cost),
        format_rational(&result.certificates.dual_sum),
        if result.certificates.all_ok() { "PASS" } else { "FAIL" },
    );
    if let Some(check) = &result.uncrossable {
        table.push_str(&format!("\nuncrossable: {check}"));
    }
    if let Some(check) = &result.weakly_uncrossable {
        table.push_str(&format!("\nweakly uncrossable: {check}"));
    }
    if let Some(sol) = &opt {
        let ratio = &result.total_cost / &sol.cost;
        table.push_str(&format!(
            "\nexact optimum: cost {} -> ratio {}",
            format_rational(&sol.cost),
            format_rational(&ratio),
        ));
    } else {
        table.push_str("\nexact optimum: skipped (outside budget)");
    }

    let report = json!({
        "instance": a.input.display().to_string(),
        "result": result,
        "exact_opt": opt,
    });
    if let Some(path) = &a.report {
        fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    emit(cli, &table, &report)?;
    // solve_p2fgc fails hard on any certificate violation, so reaching
    // this point means every certificate passed.
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(cli: &Cli, a: &ExactArgs) -> CmdResult {
    let inst = read_instance(&a.input)?;
    let sol = exact::exact_min_cost_feasible(
        &inst.graph,
        inst.p,
        inst.q,
        &SolveBudget::for_feasibility(),
    )?;
    let hash = instance_hash(&format_instance(&inst.graph, inst.p, inst.q));
    let golden = format!(
        "{hash} {} {}",
        format_rational(&sol.cost),
        edge_list_string(&sol.edges),
    );
    emit(
        cli,
        &format!(
            "instance: {} (n={} m={} p={} q={})\noptimum cost: {} with {} edges \
             ({} subsets explored)\ngolden: {golden}",
            a.input.display(),
            inst.graph.node_count(),
            inst.graph.edge_count(),
            inst.p,
            inst.q,
            format_rational(&sol.cost),
            sol.edges.len(),
            sol.explored,
        ),
        &json!({ "solution": sol, "golden": golden }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_family(cli: &Cli, a: &CheckFamilyArgs) -> CmdResult {
    let text = fs::read_to_string(&a.input)
        .map_err(|e| format!("cannot read {}: {e}", a.input.display()))?;
    let ground = match a.ground {
        Some(n) => n,
        None => text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split(|c: char| !c.is_ascii_digit()))
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .map(|v| v + 1)
            .ok_or("family file contains no shores")?,
    };
    let raw = family::parse_family(&text, ground)?;
    let closure = family::check_derived_pair_closure(&raw);
    let fam = CutFamily::close_complements(ground, raw)?;
    let uncrossable = family::check_uncrossable(&fam);
    let weakly = family::check_weakly_uncrossable(&fam);

    let table = format!(
        "family: {} ({} canonical shores over {} nodes)\n\
         uncrossable: {uncrossable}\nweakly uncrossable: {weakly}\n\
         two-of-four closure (as listed): {closure}",
        a.input.display(),
        fam.len(),
        ground,
    );
    let passes = |c: FamilyCheckArg| match c {
        FamilyCheckArg::Uncrossable => uncrossable.passed(),
        FamilyCheckArg::Weakly => weakly.passed(),
        FamilyCheckArg::Closure => closure.passed(),
    };
    let ok = a.require.iter().all(|&c| passes(c));
    emit(
        cli,
        &table,
        &json!({
            "ground_size": ground,
            "canonical_shores": fam.len(),
            "uncrossable": uncrossable,
            "weakly_uncrossable": weakly,
            "derived_pair_closure": closure,
            "required_pass": ok,
        }),
    )?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_counterexample(cli: &Cli, a: &CounterexampleArgs) -> CmdResult {
    let cx = Construction::new(a.k)?;
    let g = cx.graph();
    let explicit = cx.family_size() <= counterexample::EXPLICIT_FAMILY_LIMIT as u128;

    // Structural verdicts require a pairwise scan, so only run them when
    // the family is small enough for that to be tractable.
    let family_checks = if cx.family_size() <= 1000 {
        let raw = cx.explicit_family(1000)?;
        let closure = family::check_derived_pair_closure(&raw);
        let fam = CutFamily::close_complements(cx.node_count(), raw)?;
        let weakly = family::check_weakly_uncrossable(&fam);
        Some((closure, weakly))
    } else {
        None
    };

    let oracle: Box<dyn ViolationOracle> = if explicit {
        let raw = cx.explicit_family(counterexample::EXPLICIT_FAMILY_LIMIT)?;
        Box::new(pd::ExplicitFamilyOracle::new(CutFamily::close_complements(
            cx.node_count(),
            raw,
        )?))
    } else {
        Box::new(ImplicitOracle::new(cx))
    };
    let candidates = g.all_edges();
    let mut trace = pd::run_primal_dual(&g, &candidates, oracle.as_ref())?;
    if explicit {
        pd::attach_witnesses(&g, oracle.as_ref(), &mut trace)?;
    }
    let report = pd::verify_certificates(&g, oracle.as_ref(), &trace, 16);

    let mut table = format!(
        "construction k={}: {} nodes, {} edges, family size {}\n\
         oracle: {}\n\
         primal-dual: {} edges added, {} reverse-deleted, cost {}\n\
         dual sum: {}\ncertificates: {}",
        a.k,
        cx.node_count(),
        cx.edge_count(),
        cx.family_size(),
        if explicit { "explicit family" } else { "implicit (structural)" },
        trace.added.len(),
        trace.deleted.len(),
        format_rational(&trace.primal_cost(&g)),
        format_rational(&trace.dual_sum()),
        if report.all_ok() { "PASS" } else { "FAIL" },
    );
    if let Some((closure, weakly)) = &family_checks {
        table.push_str(&format!(
            "\ntwo-of-four closure (as listed): {closure}\nweakly uncrossable: {weakly}",
        ));
    }

    let ok = report.all_ok();
    emit(
        cli,
        &table,
        &json!({
            "k": a.k,
            "nodes": cx.node_count(),
            "edges": cx.edge_count(),
            "family_size": cx.family_size().to_string(),
            "explicit_oracle": explicit,
            "trace": trace,
            "certificates": report,
            "family_checks": family_checks.map(|(closure, weakly)| json!({
                "derived_pair_closure": closure,
                "weakly_uncrossable": weakly,
            })),
        }),
    )?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_gap(cli: &Cli, a: &GapArgs) -> CmdResult {
    if a.kmin < 2 || a.kmin > a.kmax {
        return Err(format!("need 2 <= kmin <= kmax, got {}..{}", a.kmin, a.kmax).into());
    }
    let rows = counterexample::run_gap_experiment(a.kmin, a.kmax, &SolveBudget::for_covers())?;
    let mut table = String::from(
        "  k  pd_cost  dual_sum  opt        ratio    deleted  certificates\n",
    );
    for r in &rows {
        let opt = match &r.opt {
            OptBound::Exact { value } => format_rational(value),
            OptBound::UpperBound { value } => format!("<={}", format_rational(value)),
        };
        table.push_str(&format!(
            "{:>3}  {:>7}  {:>8}  {:<9}  {:<7}  {:>7}  {}\n",
            r.k,
            format_rational(&r.pd_cost),
            format_rational(&r.dual_sum),
            opt,
            format_rational(&r.ratio),
            r.reverse_deleted,
            if r.certificates_ok { "PASS" } else { "FAIL" },
        ));
    }
    table.pop();
    let ok = rows.iter().all(|r| r.certificates_ok);
    emit(cli, &table, &rows)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> CmdResult {
    if a.q != 2 {
        return Err(format!("the generator targets q=2 instances, got q={}", a.q).into());
    }
    let g = instances::generate_random_instance(
        a.seed,
        a.nodes,
        a.edges,
        a.p,
        a.safe_prob,
        (a.cost_min, a.cost_max),
    )?;
    let text = format_instance(&g, a.p, a.q);
    let hash = instance_hash(&text);
    let summary = json!({
        "seed": a.seed,
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "p": a.p,
        "q": a.q,
        "unsafe_edges": g.unsafe_edges().len(),
        "instance_hash": hash,
        "output": a.output.as_ref().map(|p| p.display().to_string()),
    });
    match &a.output {
        Some(path) => {
            fs::write(path, &text)?;
            emit(
                cli,
                &format!("wrote instance {hash} to {}", path.display()),
                &summary,
            )?;
        }
        None => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "summary": summary,
                        "instance_text": text,
                    }))?
                );
            } else {
                print!("{text}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
