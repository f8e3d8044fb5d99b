use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use choice_paradox::cascade::{build_cascade, validate_params, CascadeParams};
use choice_paradox::dot::{graph_to_dot, network_to_dot};
use choice_paradox::dynamics::{classify, explore, ExploreLimits, ImprovementGraph, DEFAULT_MAX_STATES};
use choice_paradox::game::{validate_network, MoveRule, Network, PlayerId};
use choice_paradox::io::{self, NetworkDoc};
use choice_paradox::oracle::{cross_check, random_networks, CrossCheckReport, EnumerationBudget, RandomSpec};
use choice_paradox::paradox::{build_example, build_very_bad, verify_full, CaseName, Status, VeryBadReport};
use choice_paradox::{Error, Rational, Scalar};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "choice-paradox", version, about = "Product-choice network games: cascades and paradox checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a cascade network and write it as JSON.
    BuildCascade {
        #[command(flatten)]
        params: ParamArgs,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check cascade parameters; exit 1 if any inequality fails.
    ValidateParams {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Verify one of the example networks.
    Verify {
        /// Case name, see `list-cases`.
        case: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        explore: ExploreArgs,
        /// Print the report as JSON.
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Print the report as text (default).
        #[arg(long)]
        text: bool,
        /// Write the network and improvement graph as DOT files here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// very-bad only: leave out the cross influence between examples.
        #[arg(long)]
        no_cross: bool,
    },
    /// Explore improvement paths of a network from a start state.
    RunDynamics {
        #[arg(short, long)]
        input: PathBuf,
        /// JSON array of strategy codes, -1 for refusal.
        #[arg(long)]
        start: PathBuf,
        #[command(flatten)]
        explore: ExploreArgs,
        /// Write the moves from the start to the first sink (or into the cycle).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Write a network (or, with --start, its improvement graph) as DOT.
    ExportDot {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        start: Option<PathBuf>,
        #[command(flatten)]
        explore: ExploreArgs,
    },
    /// Compare the game engine with the brute-force oracle.
    OracleCheck {
        #[arg(short, long, required_unless_present = "random", conflicts_with = "random")]
        input: Option<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest state space enumerated per network.
        #[arg(long, default_value_t = EnumerationBudget::default().max_total_states)]
        budget: u64,
    },
    /// List the verifiable cases.
    ListCases,
}

#[derive(Args)]
struct ParamArgs {
    /// Players per human subtype (ranks have 2n members).
    #[arg(long)]
    n: Option<usize>,
    /// Use price, as an integer or "num/den".
    #[arg(long, value_parser = rational)]
    theta: Option<Rational>,
    #[arg(long, value_parser = rational)]
    e: Option<Rational>,
    #[arg(long, value_parser = rational)]
    i: Option<Rational>,
    #[arg(long, value_parser = rational)]
    c: Option<Rational>,
}

impl ParamArgs {
    fn params(&self) -> CascadeParams<Rational> {
        let base = CascadeParams::<Rational>::minimal();
        CascadeParams::new(
            self.n.unwrap_or(base.n),
            self.theta.unwrap_or(base.theta),
            self.e.unwrap_or(base.e),
            self.i.unwrap_or(base.i),
            self.c.unwrap_or(base.c),
        )
    }
}

#[derive(Args)]
struct ExploreArgs {
    /// Maximum number of states to explore.
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    limits: usize,
    #[arg(long, value_enum, default_value_t = Rule::BestResponse)]
    rule: Rule,
}

impl ExploreArgs {
    fn limits(&self) -> ExploreLimits {
        ExploreLimits::states(self.limits)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Improvement,
    BestResponse,
}

impl From<Rule> for MoveRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Improvement => MoveRule::Improvement,
            Rule::BestResponse => MoveRule::BestResponse,
        }
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    Rational::parse_scalar(s).ok_or_else(|| format!("{s:?} is not an integer or num/den fraction"))
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_UNKNOWN,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<choice_paradox::GameError> for Failure {
    fn from(e: choice_paradox::GameError) -> Self {
        Error::from(e).into()
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message,
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> Result<(NetworkDoc, Network<Rational>), Failure> {
    let doc: NetworkDoc = serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let net = io::network_from_doc(&doc)?;
    Ok((doc, net))
}

fn doc_roles(doc: &NetworkDoc) -> Option<BTreeMap<PlayerId, String>> {
    doc.roles.as_ref().map(|r| {
        r.iter()
            .filter_map(|(k, v)| k.parse::<u32>().ok().map(|k| (PlayerId(k), v.clone())))
            .collect()
    })
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Pass => 0,
        Status::Fail => EXIT_FAILED,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn build_cascade_cmd(params: &ParamArgs, output: Option<&Path>) -> Outcome {
    let a = build_cascade(&params.params())?;
    let text = serde_json::to_string_pretty(&io::cascade_doc(&a)).expect("documents serialize");
    match output {
        Some(p) => write(p, &text)?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn validate_params_cmd(params: &ParamArgs) -> Outcome {
    match validate_params(&params.params()) {
        Ok(()) => {
            println!("ok");
            Ok(0)
        }
        Err(violations) => {
            for v in violations {
                println!("{v}");
            }
            Ok(EXIT_FAILED)
        }
    }
}

fn write_dots(dir: &Path, stem: &str, net: &Network<Rational>, g: &ImprovementGraph<Rational>) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    write(&dir.join(format!("{stem}.network.dot")), &network_to_dot(net, None))?;
    write(&dir.join(format!("{stem}.graph.dot")), &graph_to_dot(net, g))
}

fn verify_cmd(
    case: &str,
    params: &ParamArgs,
    ex: &ExploreArgs,
    json: bool,
    dot: Option<&Path>,
    cross: bool,
) -> Outcome {
    let p = params.params();
    let limits = ex.limits();
    let rule = MoveRule::from(ex.rule);
    if case == "very-bad" {
        let vb = build_very_bad(&p, cross)?;
        let mut reports = Vec::new();
        for c in &vb.cases {
            let v = verify_full(c, &limits, rule, true)?;
            if let Some(dir) = dot {
                write_dots(dir, &c.name.replace('/', "-"), &v.mutated, &v.graph)?;
            }
            reports.push(v.report);
        }
        let r = VeryBadReport {
            players: vb.net.num_players(),
            cross_influence: cross,
            invariant_violations: reports.iter().map(|r| r.invariant_violations).sum(),
            reports,
        };
        if json {
            println!("{}", serde_json::to_string_pretty(&io::very_bad_json(&r)).expect("json"));
        } else {
            println!(
                "very-bad: {} players, cross influence {}: {}",
                r.players,
                if cross { "on" } else { "off" },
                r.verdict().name().to_uppercase()
            );
            for x in &r.reports {
                print!("{}", x.text());
            }
        }
        return Ok(status_code(r.verdict()));
    }
    let name = CaseName::parse(case).ok_or_else(|| usage(format!("unknown case {case:?}; see list-cases")))?;
    let c = build_example(name, &p)?;
    let v = verify_full(&c, &limits, rule, false)?;
    if let Some(dir) = dot {
        write_dots(dir, &c.name, &v.mutated, &v.graph)?;
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&io::report_json(&v.report)).expect("json"));
    } else {
        print!("{}", v.report.text());
    }
    Ok(status_code(v.report.verdict))
}

fn run_dynamics_cmd(input: &Path, start: &Path, ex: &ExploreArgs, trace: Option<&Path>) -> Outcome {
    let (_, net) = read_doc(input)?;
    for d in validate_network(&net) {
        eprintln!("{d}");
    }
    let s = io::read_state(&read(start)?, &net)?;
    let g = explore(&net, &s, &ex.limits(), ex.rule.into())?;
    let class = classify(&g);
    println!(
        "{} states, {} moves, max out-degree {}, {}",
        g.len(),
        g.arc_count(),
        g.max_out_degree(),
        class.label()
    );
    for &k in g.sinks() {
        println!("sink {}", g.state(k));
    }
    if let Some(path) = trace {
        let moves = match (g.sinks().first(), g.cycle_witness()) {
            (Some(&k), _) => g.path_to(k),
            (None, Some(cycle)) => g.path_to(cycle[0]),
            (None, None) => Vec::new(),
        };
        write(path, &serde_json::to_string_pretty(&io::trace_doc(&moves)).expect("json"))?;
    }
    Ok(if g.truncated() { EXIT_UNKNOWN } else { 0 })
}

fn export_dot_cmd(input: &Path, output: &Path, start: Option<&Path>, ex: &ExploreArgs) -> Outcome {
    let (doc, net) = read_doc(input)?;
    let text = match start {
        None => network_to_dot(&net, doc_roles(&doc).as_ref()),
        Some(sp) => {
            let s = io::read_state(&read(sp)?, &net)?;
            graph_to_dot(&net, &explore(&net, &s, &ex.limits(), ex.rule.into())?)
        }
    };
    write(output, &text)?;
    Ok(0)
}

fn print_check(label: &str, r: &CrossCheckReport) {
    println!(
        "{label}: {} states, {} equilibria, {} reachability starts, {} mismatches",
        r.states,
        r.equilibria,
        r.reachability_starts,
        r.mismatches.len()
    );
    for m in r.mismatches.iter().take(10) {
        println!("  {:?} at {}: {}", m.kind, m.state, m.detail);
    }
}

fn oracle_check_cmd(input: Option<&Path>, count: usize, seed: u64, budget: u64) -> Outcome {
    let budget = EnumerationBudget { max_total_states: budget };
    let mut total = CrossCheckReport::default();
    match input {
        Some(path) => {
            let (_, net) = read_doc(path)?;
            total = cross_check(&net, &budget)?;
            print_check(&path.display().to_string(), &total);
        }
        None => {
            for (k, net) in random_networks::<Rational>(seed, count, &RandomSpec::default()).iter().enumerate() {
                let r = cross_check(net, &budget)?;
                if !r.passed() {
                    print_check(&format!("network {k}"), &r);
                }
                total.absorb(r);
            }
            print_check(&format!("{count} random networks, seed {seed}"), &total);
        }
    }
    Ok(if total.passed() { 0 } else { EXIT_FAILED })
}

fn list_cases() -> Outcome {
    for n in CaseName::ALL {
        println!("{}", n.name());
        if n.name().starts_with("dec-") {
            println!("{}-half-gap", n.name());
        }
    }
    println!("very-bad");
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Command::BuildCascade { params, output } => build_cascade_cmd(&params, output.as_deref()),
        Command::ValidateParams { params } => validate_params_cmd(&params),
        Command::Verify {
            case,
            params,
            explore,
            json,
            text: _,
            dot,
            no_cross,
        } => verify_cmd(&case, &params, &explore, json, dot.as_deref(), !no_cross),
        Command::RunDynamics {
            input,
            start,
            explore,
            trace,
        } => run_dynamics_cmd(&input, &start, &explore, trace.as_deref()),
        Command::ExportDot {
            input,
            output,
            start,
            explore,
        } => export_dot_cmd(&input, &output, start.as_deref(), &explore),
        Command::OracleCheck {
            input,
            random: _,
            count,
            seed,
            budget,
        } => oracle_check_cmd(input.as_deref(), count, seed, budget),
        Command::ListCases => list_cases(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
