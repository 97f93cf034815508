//! `mibounds`: mutual-information bounds from the command line.
//!
//! Every subcommand renders its whole output into memory first, so a
//! failing run leaves the `--output` file untouched. Exit status is 0 on
//! success, 2 for invalid input and 3 when an iteration fails to converge.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use mibounds::actions::ActionModel;
use mibounds::boolean::{exact_mi_boolean, fourier_upper, BooleanFunction};
use mibounds::bounds::{
    DEFAULT_IPF_ITERS, DEFAULT_K_MAX, DEFAULT_MARG_TOL, DEFAULT_REL_TOL, DEFAULT_STREAM_CAP,
};
use mibounds::channels::{self, ChannelSpec};
use mibounds::deletion::{
    deletion_sweep, deletion_upper_bound, dsv_upper_bound, finite_n_joint, sweep_csv,
    DeletionConfig, RateFunction,
};
use mibounds::format::fmt_sig;
use mibounds::{
    action_lower, action_upper, action_upper_generic, adjacency_lower, adjacency_of,
    baseline_lower, iterative_lower, min_mi_ipf_oracle, mutual_information, AdjacencyProblem, BoundReport,
    FiniteDistribution, JointDistribution,
};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mibounds", version, about = "Bounds on mutual information from marginals, support and channel actions")]
struct Cli {
    /// Write the result here instead of stdout. Nothing is written on error.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact I(X;Y), H(X) and H(Y) of a joint distribution file.
    Exact {
        /// JSON joint: {"matrix": [[P(x,y)]]}.
        joint: PathBuf,
    },
    /// A lower or upper bound for a joint or adjacency problem file.
    Bound(BoundArgs),
    /// Emit a built-in channel, its joint, adjacency problem or actions as JSON.
    Channel(ChannelArgs),
    /// Bounds for the binary i.i.d. deletion channel.
    Deletion(DeletionArgs),
    /// Upper bound on I(Y; f(X)) for a boolean function over a BSC.
    Boolean(BooleanArgs),
    /// Z-channel curves: baseline, adjacency, one dual round and exact MI.
    Zfigure {
        #[arg(long, default_value_t = 0.01)]
        p_min: f64,
        #[arg(long, default_value_t = 0.99)]
        p_max: f64,
        #[arg(long, default_value_t = 99)]
        steps: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LowerMethod {
    Baseline,
    /// Marginals plus support.
    #[value(name = "thm1", alias = "adjacency")]
    Adjacency,
    /// Alternating dual maximization; `--k` caps the rounds.
    Iterative,
    /// The lower bound through an explicit action model (`--actions FILE`).
    Action,
    /// Minimum MI over joints with this support, by proportional fitting.
    Ipf,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// JSON joint {"matrix"} or adjacency problem {"px", "py", "support"}.
    problem: PathBuf,

    #[arg(long, value_enum, default_value_t = LowerMethod::Adjacency, conflicts_with = "upper")]
    method: LowerMethod,

    /// Maximum number of full rounds for the iterative bound.
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k: usize,

    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,

    /// Iteration budget for `--method ipf`.
    #[arg(long, default_value_t = DEFAULT_IPF_ITERS)]
    max_iters: usize,

    /// Marginal tolerance for `--method ipf`.
    #[arg(long, default_value_t = DEFAULT_MARG_TOL)]
    marg_tol: f64,

    /// Compute the action upper bound instead of a lower bound.
    #[arg(long)]
    upper: bool,

    /// Action model JSON file, or `generic` for the product action set.
    #[arg(long)]
    actions: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ChannelKind {
    Bec,
    Bsc,
    Z,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Channel,
    Joint,
    Adjacency,
    Actions,
}

#[derive(Args, Debug)]
struct ChannelArgs {
    #[arg(long, value_enum)]
    kind: ChannelKind,
    /// Erasure probability for `bec`.
    #[arg(long)]
    eps: Option<f64>,
    /// Crossover probability for `bsc`.
    #[arg(long)]
    p: Option<f64>,
    /// Input is Bern(INPUT) when emitting a joint or adjacency problem.
    #[arg(long, default_value_t = 0.5)]
    input: f64,
    #[arg(long, value_enum, default_value_t = Emit::Channel)]
    emit: Emit,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["lower", "upper", "sweep", "finite"])))]
struct DeletionArgs {
    /// Asymptotic lower bound for the uniform input.
    #[arg(long)]
    lower: bool,
    /// Asymptotic upper bound for a Bern(q) input, with the earlier bound alongside.
    #[arg(long)]
    upper: bool,
    /// Both bounds on a grid of deletion probabilities, as CSV.
    #[arg(long)]
    sweep: bool,
    /// Exact MI and adjacency bound for length-n inputs.
    #[arg(long)]
    finite: bool,

    #[arg(long)]
    d: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 0.05)]
    d_min: f64,
    #[arg(long, default_value_t = 0.95)]
    d_max: f64,
    #[arg(long, default_value_t = 19)]
    steps: usize,
    #[arg(long)]
    n: Option<usize>,

    #[arg(long, default_value_t = DeletionConfig::default().k1_max)]
    k1_max: usize,
    #[arg(long, default_value_t = DeletionConfig::default().k2_max)]
    k2_max: usize,
    #[arg(long, default_value_t = DeletionConfig::default().t_grid)]
    t_grid: usize,
    #[arg(long, default_value_t = DeletionConfig::default().t_hi)]
    t_hi: f64,
    #[arg(long, default_value_t = DeletionConfig::default().theta_grid)]
    theta_grid: usize,
}

#[derive(Args, Debug)]
struct BooleanArgs {
    /// One line of 2^n characters from {0,1}, little-endian in x.
    #[arg(long)]
    truth_table: PathBuf,
    /// BSC crossover probability in (0, 1/2].
    #[arg(long)]
    alpha: f64,
    /// Also compute the exact mutual information (n <= 12).
    #[arg(long)]
    exact: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command).and_then(|out| emit(cli.output.as_deref(), &out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let diverged = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<mibounds::Error>(),
            Some(mibounds::Error::NonConvergence { .. })
        )
    });
    if diverged {
        EXIT_NONCONVERGENCE
    } else {
        EXIT_VALIDATION
    }
}

fn emit(path: Option<&Path>, out: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, out).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn run(cmd: &Command) -> anyhow::Result<String> {
    match cmd {
        Command::Exact { joint } => cmd_exact(joint),
        Command::Bound(args) => cmd_bound(args),
        Command::Channel(args) => cmd_channel(args),
        Command::Deletion(args) => cmd_deletion(args),
        Command::Boolean(args) => cmd_boolean(args),
        Command::Zfigure { p_min, p_max, steps } => cmd_zfigure(*p_min, *p_max, *steps),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_exact(path: &Path) -> anyhow::Result<String> {
    let j = JointDistribution::from_json(&read(path)?)
        .with_context(|| format!("loading joint {}", path.display()))?;
    Ok(format!(
        "mi_bits,h_x_bits,h_y_bits\n{},{},{}\n",
        fmt_sig(mutual_information(&j)),
        fmt_sig(j.px().entropy()),
        fmt_sig(j.py().entropy())
    ))
}

enum Problem {
    Joint(JointDistribution),
    Adjacency(AdjacencyProblem),
}

impl Problem {
    fn load(path: &Path) -> anyhow::Result<Self> {
        let text = read(path)?;
        let ctx = || format!("loading problem {}", path.display());
        match JointDistribution::from_json(&text) {
            Ok(j) => Ok(Problem::Joint(j)),
            Err(mibounds::Error::Parse(_)) => {
                Ok(Problem::Adjacency(AdjacencyProblem::from_json(&text).with_context(ctx)?))
            }
            Err(e) => Err(e).with_context(ctx),
        }
    }

    fn adjacency(&self) -> anyhow::Result<AdjacencyProblem> {
        match self {
            Problem::Joint(j) => Ok(adjacency_of(j, 0.0)?),
            Problem::Adjacency(a) => Ok(a.clone()),
        }
    }

    fn px(&self) -> &FiniteDistribution {
        match self {
            Problem::Joint(j) => j.px(),
            Problem::Adjacency(a) => a.px(),
        }
    }
}

fn load_actions(path: &str, px: &FiniteDistribution) -> anyhow::Result<ActionModel> {
    let m = ActionModel::from_json(&read(Path::new(path))?)
        .with_context(|| format!("loading actions {path}"))?;
    if m.n_inputs() != px.len() {
        bail!(
            "action model has {} inputs but the problem has {}",
            m.n_inputs(),
            px.len()
        );
    }
    Ok(m)
}

fn cmd_bound(args: &BoundArgs) -> anyhow::Result<String> {
    let problem = Problem::load(&args.problem)?;
    let report = if args.upper {
        match args.actions.as_deref().unwrap_or("generic") {
            "generic" => match &problem {
                Problem::Joint(j) => action_upper_generic(j, DEFAULT_STREAM_CAP)?,
                Problem::Adjacency(_) => {
                    bail!("the generic action set needs a joint {{\"matrix\"}} file, not an adjacency problem")
                }
            },
            file => action_upper(problem.px(), &load_actions(file, problem.px())?)
                .context("action upper bound")?,
        }
    } else {
        match args.method {
            LowerMethod::Baseline => baseline_lower(&problem.adjacency()?),
            LowerMethod::Adjacency => adjacency_lower(&problem.adjacency()?),
            LowerMethod::Iterative => {
                iterative_lower(&problem.adjacency()?, args.k, args.rel_tol)
                    .context("iterative bound")?
                    .0
            }
            LowerMethod::Action => {
                let file = match args.actions.as_deref() {
                    Some("generic") | None => bail!("--method action needs --actions FILE"),
                    Some(f) => f,
                };
                let m = load_actions(file, problem.px())?;
                action_lower(problem.px(), &m).context("action lower bound")?
            }
            LowerMethod::Ipf => {
                let (mi, _) = min_mi_ipf_oracle(&problem.adjacency()?, args.max_iters, args.marg_tol)
                    .context("proportional fitting")?;
                return Ok(format!("method,value_bits\nipf,{}\n", fmt_sig(mi)));
            }
        }
    };
    Ok(render_report(&report))
}

fn render_report(r: &BoundReport) -> String {
    let mut out = format!(
        "method,value_bits,iterations\n{},{},{}\n",
        r.method,
        fmt_sig(r.value_bits),
        r.iterations
    );
    if !r.diagnostics.is_empty() {
        out.push_str("diagnostic,value\n");
        for (name, v) in &r.diagnostics {
            let _ = writeln!(out, "{name},{}", fmt_sig(*v));
        }
    }
    out
}

fn cmd_channel(args: &ChannelArgs) -> anyhow::Result<String> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| anyhow!("--kind needs {flag}"));
    let (channel, actions): (ChannelSpec, ActionModel) = match args.kind {
        ChannelKind::Bec => {
            let eps = need(args.eps, "--eps")?;
            (channels::bec(eps)?, channels::bec_actions(eps)?)
        }
        ChannelKind::Bsc => {
            let p = need(args.p, "--p")?;
            (channels::bsc(p)?, channels::bsc_xor_actions(p)?)
        }
        ChannelKind::Z => (channels::z_channel(), channels::z_actions()),
    };
    let json = match args.emit {
        Emit::Channel => channel.to_json(),
        Emit::Actions => actions.to_json(),
        Emit::Joint | Emit::Adjacency => {
            let j = channels::joint_of(&FiniteDistribution::bernoulli(args.input)?, &channel)?;
            if args.emit == Emit::Joint {
                j.to_json()
            } else {
                adjacency_of(&j, 0.0)?.to_json()
            }
        }
    };
    Ok(json + "\n")
}

fn grid(lo: f64, hi: f64, steps: usize, name: &str) -> anyhow::Result<Vec<f64>> {
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    if !(lo <= hi) {
        bail!("{name} range is empty: {lo} > {hi}");
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps).map(|i| lo + i as f64 * step).collect())
}

fn cmd_deletion(args: &DeletionArgs) -> anyhow::Result<String> {
    let cfg = DeletionConfig {
        k1_max: args.k1_max,
        k2_max: args.k2_max,
        t_grid: args.t_grid,
        t_hi: args.t_hi,
        theta_grid: args.theta_grid,
    };
    let need_d = || args.d.ok_or_else(|| anyhow!("this mode needs --d"));
    if args.lower {
        let d = need_d()?;
        let r = RateFunction::new(cfg)?.lower_bound(d)?;
        let gallager = r.diag("gallager").unwrap_or(f64::NAN);
        let g = r.diag("g").unwrap_or(f64::NAN);
        let theta = r.diag("theta_star").unwrap_or(f64::NAN);
        Ok(format!(
            "d,gallager_lower,new_lower,improvement_bits,theta_star\n{},{},{},{},{}\n",
            fmt_sig(d),
            fmt_sig(gallager),
            fmt_sig(r.value_bits),
            fmt_sig(g),
            fmt_sig(theta)
        ))
    } else if args.upper {
        let d = need_d()?;
        let r = deletion_upper_bound(d, args.q)?;
        Ok(format!(
            "d,q,new_upper,dsv_upper,rho_star\n{},{},{},{},{}\n",
            fmt_sig(d),
            fmt_sig(args.q),
            fmt_sig(r.value_bits),
            fmt_sig(dsv_upper_bound(d, args.q)?),
            fmt_sig(r.diag("rho_star").unwrap_or(f64::NAN))
        ))
    } else if args.sweep {
        let ds = grid(args.d_min, args.d_max, args.steps, "d")?;
        let rate = RateFunction::new(cfg)?;
        Ok(sweep_csv(&deletion_sweep(&ds, args.q, &rate)?))
    } else {
        let n = args.n.ok_or_else(|| anyhow!("--finite needs --n"))?;
        let d = need_d()?;
        let j = finite_n_joint(n, d, args.q)?;
        let adj = adjacency_of(&j, 0.0)?;
        Ok(format!(
            "n,d,q,exact_mi_bits,baseline_bits,adjacency_bits\n{n},{},{},{},{},{}\n",
            fmt_sig(d),
            fmt_sig(args.q),
            fmt_sig(mutual_information(&j)),
            fmt_sig(baseline_lower(&adj).value_bits),
            fmt_sig(adjacency_lower(&adj).value_bits)
        ))
    }
}

fn cmd_boolean(args: &BooleanArgs) -> anyhow::Result<String> {
    let f = BooleanFunction::from_truth_table(&read(&args.truth_table)?)
        .with_context(|| format!("loading truth table {}", args.truth_table.display()))?;
    let bound = fourier_upper(&f, args.alpha)?;
    let exact = if args.exact {
        fmt_sig(exact_mi_boolean(&f, args.alpha)?)
    } else {
        String::new()
    };
    Ok(format!(
        "n,alpha,H_f,bound_bits,exact_bits\n{},{},{},{},{}\n",
        f.n(),
        fmt_sig(args.alpha),
        fmt_sig(f.entropy()),
        fmt_sig(bound.value_bits),
        exact
    ))
}

fn cmd_zfigure(p_min: f64, p_max: f64, steps: usize) -> anyhow::Result<String> {
    let rows = channels::z_curves(&grid(p_min, p_max, steps, "p")?)?;
    let mut out = String::from("p,baseline,adjacency,one_round,exact\n");
    for r in rows {
        let v = r.values;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_sig(r.p),
            fmt_sig(v.simple),
            fmt_sig(v.adjacency),
            fmt_sig(v.one_round),
            fmt_sig(v.exact)
        );
    }
    Ok(out)
}
