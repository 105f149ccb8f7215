//! `gpst`: classify, simulate and verify perfect state transfer in Grover
//! walks.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification mismatch,
//! 3 internal inconsistency.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use grover_pst::classify::{classify, nonintegrality_witness};
use grover_pst::cyclotomic::{crt_decompose, delta_integrality, BosmaBasis};
use grover_pst::pst::{search_min_pst, search_min_pst_exhaustive, Instance};
use grover_pst::report::{run_verify, to_json_line, Suite, VerifyConfig};
use grover_pst::symmetry::{
    fixing_group_obstruction, parse_one_line, pst_transport_check, verify_intertwining, VertexAutomorphism,
};
use grover_pst::walk::fidelity_trace;
use grover_pst::{CirculantSpec, Error, Graph, Tolerances};

#[derive(Parser, Debug)]
#[command(name = "gpst", version, about = "Perfect state transfer in Grover walks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Search horizon; defaults to 4n.
    #[arg(long, global = true, env = "GPST_TAU_MAX")]
    tau_max: Option<usize>,
    /// Fidelity tolerance: a hit needs fidelity >= 1 - tol.
    #[arg(long, global = true, env = "GPST_TOL", default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, env = "GPST_STATE_TOL", default_value_t = 1e-8)]
    state_tol: f64,
    #[arg(long, global = true, env = "GPST_GROUP_TOL", default_value_t = 1e-9)]
    group_tol: f64,
    #[arg(long, global = true, env = "GPST_SUPPORT_TOL", default_value_t = 1e-9)]
    support_tol: f64,
    #[arg(long, global = true, env = "GPST_SIGN_TOL", default_value_t = 1e-8)]
    sign_tol: f64,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, env = "GPST_JOBS", default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, env = "GPST_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true, env = "GPST_OUTPUT")]
    output: Option<PathBuf>,
}

impl Global {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            pst: self.tol,
            state: self.state_tol,
            group: self.group_tol,
            support: self.support_tol,
            sign: self.sign_tol,
        }
    }

    fn tau_max(&self, n: usize) -> Result<usize, Error> {
        match self.tau_max {
            Some(0) => Err(Error::Refused("--tau-max must be at least 1".into())),
            Some(t) => Ok(t),
            None => Ok(4 * n),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predict PST on a circulant from its family.
    Classify(CirculantArgs),
    /// Fidelity trace between two vertex states, as CSV.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Minimum PST time from a vertex, cross-checked three ways.
    Search {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        from: usize,
        /// Scan every target, not just x + n/2 on circulants.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Run a verification suite and write a JSON-lines report.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        /// Search horizon factor: tau_max = factor * n.
        #[arg(long, default_value_t = 4)]
        tau_factor: usize,
        #[arg(long, default_value_t = 250)]
        samples: usize,
        #[arg(long, default_value_t = 50)]
        random_graphs: usize,
        /// CSV summary path.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Cyclotomic field tools.
    Cyclo {
        #[command(subcommand)]
        op: CycloOp,
    },
    /// Eigenvalue table of P as CSV.
    Eigen(GraphArgs),
    /// Check an automorphism given in one-line notation.
    Aut {
        #[command(flatten)]
        graph: GraphArgs,
        /// Images of 0, 1, ..., comma separated.
        #[arg(long)]
        perm: String,
        /// Check the fixing-group obstruction and PST transport for this pair.
        #[arg(long, requires = "to")]
        from: Option<usize>,
        #[arg(long, requires = "from")]
        to: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum CycloOp {
    /// Canonical integral basis of Q(zeta_n).
    Basis {
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',')]
        a2: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        a3: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        a5: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        a7: Option<Vec<u64>>,
        /// Any prime: p=list, e.g. 11=0,1,2,3,4,5,6,7,8,9.
        #[arg(long = "choice")]
        choices: Vec<String>,
    },
    /// Prime-power components of an exponent and the pi/theta maps.
    Decompose {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
    },
    /// Integrality of (zeta^a + zeta^-a + zeta^b + zeta^-b)/2, zeta = zeta_2l.
    Delta {
        #[arg(long)]
        l: u64,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SuiteArg {
    Theorems,
    Lemmas,
    Cyclotomic,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Theorems => Suite::Theorems,
            SuiteArg::Lemmas => Suite::Lemmas,
            SuiteArg::Cyclotomic => Suite::Cyclotomic,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args, Debug)]
struct CirculantArgs {
    #[arg(long)]
    n: usize,
    /// Generators of S; S is closed under negation.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    s: Vec<i64>,
    /// Source vertex.
    #[arg(long, default_value_t = 0)]
    x: usize,
}

/// A circulant `--n N --s LIST`, or any graph `--n N --edges 0-1,1-2`.
#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    n: usize,
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        conflicts_with = "edges",
        required_unless_present = "edges"
    )]
    s: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    edges: Option<Vec<String>>,
}

impl GraphArgs {
    fn resolve(&self) -> Result<(Graph, Option<CirculantSpec>), Error> {
        match (&self.s, &self.edges) {
            (Some(s), _) => {
                let spec = CirculantSpec::symmetric(self.n, s)?;
                Ok((spec.build(), Some(spec)))
            }
            (None, Some(edges)) => {
                let pairs = edges.iter().map(|e| parse_edge(e)).collect::<Result<Vec<_>, _>>()?;
                Ok((Graph::new(self.n, pairs)?, None))
            }
            (None, None) => Err(Error::InvalidGraph("give --s or --edges".into())),
        }
    }

    fn instance(&self, tol: &Tolerances) -> Result<Instance<f64>, Error> {
        match self.resolve()? {
            (_, Some(spec)) => Instance::from_circulant(&spec, tol),
            (g, None) => Instance::from_graph(g, tol),
        }
    }
}

fn parse_edge(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::InvalidGraph(format!("edge {s:?} is not of the form u-v"));
    let (u, v) = s.split_once('-').ok_or_else(bad)?;
    Ok((u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?))
}

fn parse_choice(s: &str) -> Result<(u64, Vec<u64>), Error> {
    let bad = || Error::InvalidBasisChoice(format!("{s:?} is not of the form p=a,b,..."));
    let (p, list) = s.split_once('=').ok_or_else(bad)?;
    let p = p.trim().parse().map_err(|_| bad())?;
    let a = list.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    Ok((p, a))
}

/// Non-zero exit without an error message of its own.
struct Status(u8);

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn emit(global: &Global, text: &str) -> Result<(), Failure> {
    match &global.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(global: &Global, value: &T) -> Result<(), Failure> {
    emit(global, &(to_json_line(value)? + "\n"))
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    graph: String,
    label: &'static str,
    rule: &'static str,
    case: &'a grover_pst::CirculantFamilyCase,
    verdict: grover_pst::PSTVerdict,
}

#[derive(Serialize)]
struct AutOutput {
    mapping: Vec<usize>,
    fixed_points: Vec<usize>,
    intertwining_deviation: f64,
    obstructed: Option<bool>,
    transport: Option<TransportOutput>,
}

#[derive(Serialize)]
struct TransportOutput {
    tau: usize,
    gamma: i8,
    image_source: usize,
    image_target: usize,
    holds: bool,
}

#[derive(Serialize)]
struct DeltaOutput {
    #[serde(flatten)]
    report: grover_pst::cyclotomic::DeltaReport,
    non_integer: Vec<(u64, String)>,
}

fn run(cli: Cli) -> Result<Status, Failure> {
    let g = &cli.global;
    let tol = g.tolerances();
    tol.validate()?;
    if g.jobs > 0 {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(g.jobs).build_global();
    }
    match &cli.command {
        Command::Classify(args) => {
            let spec = CirculantSpec::symmetric(args.n, &args.s)?;
            spec.build().check_vertex(args.x)?;
            let c = classify(&spec)?;
            let out = ClassifyOutput {
                graph: spec.to_string(),
                label: c.case.label.as_str(),
                rule: c.case.label.rule(),
                case: &c.case,
                verdict: c.verdict(args.x, g.tau_max(args.n)?),
            };
            emit_json(g, &out)?;
        }
        Command::Simulate { graph, from, to } => {
            let tau_max = g.tau_max(graph.n)?;
            let inst = graph.instance(&tol)?;
            let w = inst.walk();
            let trace = fidelity_trace(&w.u, &w.vertex_state(*from)?, &w.vertex_state(*to)?, tau_max, &tol)?;
            emit(g, &trace.to_csv()?)?;
        }
        Command::Search { graph, from, exhaustive } => {
            let tau_max = g.tau_max(graph.n)?;
            let inst = graph.instance(&tol)?;
            let v = if *exhaustive {
                search_min_pst_exhaustive(&inst, *from, tau_max)?
            } else {
                search_min_pst(&inst, *from, tau_max)?
            };
            emit_json(g, &v)?;
        }
        Command::Verify { suite, n_max, tau_factor, samples, random_graphs, summary } => {
            let cfg = VerifyConfig {
                suite: (*suite).into(),
                n_max: *n_max,
                tau_factor: *tau_factor,
                seed: g.seed,
                samples: *samples,
                random_graphs: *random_graphs,
                tol,
                ..VerifyConfig::default()
            };
            let report = run_verify(&cfg)?;
            emit(g, &report.to_jsonl())?;
            let csv = report.summary_csv()?;
            match summary {
                Some(path) => fs::write(path, &csv).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => eprint!("{csv}"),
            }
            return Ok(Status(report.exit_code() as u8));
        }
        Command::Cyclo { op } => match op {
            CycloOp::Basis { n, a2, a3, a5, a7, choices } => {
                let mut map = BTreeMap::new();
                for (p, a) in [(2, a2), (3, a3), (5, a5), (7, a7)] {
                    if let Some(a) = a {
                        map.insert(p, a.clone());
                    }
                }
                for c in choices {
                    let (p, a) = parse_choice(c)?;
                    if map.insert(p, a).is_some() {
                        return Err(Error::InvalidBasisChoice(format!("A_{p} given twice")).into());
                    }
                }
                let basis = BosmaBasis::new(*n, &map)?;
                #[derive(Serialize)]
                struct BasisOut<'a> {
                    n: u64,
                    choices: &'a BTreeMap<u64, Vec<u64>>,
                    exponents: &'a [u64],
                }
                emit_json(g, &BasisOut { n: *n, choices: basis.choices(), exponents: basis.exponents() })?;
            }
            CycloOp::Decompose { n, x } => emit_json(g, &crt_decompose(*n, *x)?)?,
            CycloOp::Delta { l, a, b } => {
                let report = delta_integrality(*l, *a, *b)?;
                let non_integer = match nonintegrality_witness(*l, *a, *b) {
                    Ok(w) => w.non_integer,
                    Err(Error::NotApplicable(_)) => Vec::new(),
                    Err(e) => return Err(e.into()),
                };
                emit_json(g, &DeltaOutput { report, non_integer })?;
            }
        },
        Command::Eigen(graph) => {
            let inst = graph.instance(&tol)?;
            emit(g, &inst.spectral()?.eigen_table_csv()?)?;
        }
        Command::Aut { graph, perm, from, to } => {
            let inst = graph.instance(&tol)?;
            let aut = VertexAutomorphism::new(inst.graph(), parse_one_line(perm)?)?;
            let dev = verify_intertwining(inst.walk(), &aut)?;
            let mut out = AutOutput {
                mapping: aut.mapping().to_vec(),
                fixed_points: aut.fixed_points(),
                intertwining_deviation: dev,
                obstructed: None,
                transport: None,
            };
            if let (Some(x), Some(y)) = (*from, *to) {
                inst.graph().check_vertex(x)?;
                inst.graph().check_vertex(y)?;
                out.obstructed = Some(fixing_group_obstruction(x, y, std::slice::from_ref(&aut)));
                let v = search_min_pst_exhaustive(&inst, x, g.tau_max(graph.n)?)?;
                if let (true, Some(tau), Some(gamma)) = (v.target == Some(y), v.tau_min, v.gamma) {
                    out.transport = Some(TransportOutput {
                        tau,
                        gamma,
                        image_source: aut.apply(x),
                        image_target: aut.apply(y),
                        holds: pst_transport_check(inst.walk(), &aut, x, y, tau, gamma)?,
                    });
                }
            }
            emit_json(g, &out)?;
        }
    }
    Ok(Status(0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status(code)) => ExitCode::from(code),
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InternalInconsistency(_) => 3,
                _ => 1,
            })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
