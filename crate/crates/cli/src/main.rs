//! `qadd` — minimized quantum divergences, additivity certificates and
//! hypothesis-testing error exponents from the command line.
//!
//! Output is JSON on stdout (CSV for sweeps), with floats printed to 12
//! significant digits in a fixed field order, so identical invocations are
//! byte-identical. Exit codes: 0 success, 2 invalid input, 3 numerical
//! non-convergence. Errors are machine readable:
//! `{"error":{"code":N,"message":"…"}}`.

mod problem;

use clap::{Args, Parser, Subcommand};
use qadd_core::certify::{
    additivity_check, violation_sweep, SearchOptions,
};
use qadd_core::divergence::DivergenceSpec;
use qadd_core::error::{Error, Result};
use qadd_core::exec;
use qadd_core::exponents::{
    chernoff_report, hoeffding_report, stein_report, strong_converse_report, ExponentReport,
    ReportOptions,
};
use qadd_core::opcore::{kron, Complex64, DensityState, HermitianOperator, SystemShape};
use qadd_core::optimize::{conditional_entropy, minimize_divergence, MinimizationResult};
use qadd_core::report::{fmt_f64, JsonObject};
use qadd_core::sets::{matrix_to_json, ConvexSetSpec};

#[derive(Parser)]
#[command(name = "qadd", version, about = "minimized quantum divergences, additivity certificates, error exponents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// State: plus_state | werner(p,d) | strange(p) | inline matrix JSON | file path
    #[arg(long)]
    state: Option<String>,
    /// Set descriptor JSON (inline or file path)
    #[arg(long)]
    set: Option<String>,
    /// Rényi order α (α = 1 selects the Umegaki relative entropy)
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Explicit z parameter
    #[arg(long)]
    z: Option<f64>,
    /// Named family: umegaki | petz | sandwiched | reversed
    #[arg(long)]
    preset: Option<String>,
    /// Full problem document {state, set, divergence, options}
    #[arg(long, conflicts_with_all = ["state", "set", "z", "preset"])]
    problem: Option<String>,
    /// Certificate tolerance override
    #[arg(long)]
    tol: Option<f64>,
    /// t-window length in periods of the slowest oscillation
    #[arg(long = "t-window-K")]
    t_window_k: Option<f64>,
    /// Grid samples per period block
    #[arg(long)]
    grid: Option<usize>,
    /// Cap on materialized n-copy dimensions
    #[arg(long = "n-cap")]
    n_cap: Option<usize>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize D_{α,z}(ρ‖·) over the set
    Minimize(ProblemArgs),
    /// Certify weak additivity of the minimized divergence
    Certify(ProblemArgs),
    /// Error-exponent reports
    Exponent {
        #[command(subcommand)]
        which: ExponentCmd,
    },
    /// Sweep the violation curve f_p(n) into CSV (n,p,f_closed,f_quad)
    SweepFpn {
        #[arg(long = "p", required = true)]
        ps: Vec<f64>,
        #[arg(long = "n-max", default_value_t = 100)]
        n_max: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Shipped example scenarios
    Example {
        #[command(subcommand)]
        which: ExampleCmd,
    },
}

#[derive(Subcommand)]
enum ExponentCmd {
    Stein(ProblemArgs),
    Chernoff(ProblemArgs),
    Hoeffding(RateArgs),
    Sc(RateArgs),
}

#[derive(Args)]
struct RateArgs {
    #[command(flatten)]
    base: ProblemArgs,
    /// Type-II rate r
    #[arg(long)]
    rate: f64,
}

#[derive(Subcommand)]
enum ExampleCmd {
    /// Arbitrarily varying qubit source: ρ = |+><+|, S = conv{σ_λ, |-><-|}
    QubitAv {
        #[arg(long, default_value_t = 0.4)]
        lambda: f64,
        #[arg(long, default_value = "stein")]
        what: String,
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Werner state over the twirled Rains slice
    Werner {
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value = "certify")]
        what: String,
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Noisy strange state over the twirled mana slice
    Strange {
        #[arg(long, default_value_t = 0.9)]
        p: f64,
        #[arg(long, default_value = "certify")]
        what: String,
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Conditional-entropy fixed point and its 2-copy additivity gap
    Conditional {
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        z: f64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            let code = e.exit_code();
            let msg = JsonObject::new()
                .field_raw(
                    "error",
                    &JsonObject::new()
                        .field_usize("code", code as usize)
                        .field_str("message", &e.to_string())
                        .finish(),
                )
                .finish();
            println!("{msg}");
            std::process::exit(code);
        }
    }
}

struct Loaded {
    rho: DensityState,
    set: ConvexSetSpec,
    spec: DivergenceSpec,
    search: SearchOptions,
    report: ReportOptions,
    out: Option<String>,
}

fn load(args: &ProblemArgs) -> Result<Loaded> {
    let (rho, set, spec, opts) = if let Some(p) = &args.problem {
        let ps = problem::load_problem(p)?;
        (ps.state, ps.set, ps.divergence, ps.options)
    } else {
        let state = args
            .state
            .as_deref()
            .ok_or_else(|| Error::validation("state", "missing --state"))?;
        let set = args
            .set
            .as_deref()
            .ok_or_else(|| Error::validation("set", "missing --set"))?;
        (
            problem::parse_state(state)?,
            problem::parse_set(set)?,
            problem::divergence_from_flags(args.alpha, args.z, args.preset.as_deref())?,
            problem::ProblemOptions::default(),
        )
    };
    let mut search = SearchOptions::default();
    if let Some(t) = args.tol.or(opts.tol) {
        search.rel_tol = t;
        search.solve.certificate_tol = t.max(1e-12);
    }
    if let Some(k) = args.t_window_k.or(opts.t_window_k) {
        search.t_window_k = k;
    }
    if let Some(g) = args.grid.or(opts.grid) {
        search.samples_per_block = g;
    }
    let mut report = ReportOptions::default();
    report.search = search.clone();
    if let Some(cap) = args.n_cap.or(opts.n_cap) {
        report.cap = cap;
    }
    Ok(Loaded {
        rho,
        set,
        spec,
        search,
        report,
        out: args.out.clone(),
    })
}

fn emit(text: &str, out: &Option<String>) -> Result<()> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))?;
            Ok(())
        }
    }
}

fn minimization_json(res: &MinimizationResult) -> String {
    JsonObject::new()
        .field_f64("value", res.value.value)
        .field_bool("finite", res.value.is_finite())
        .field_f64("q_value", res.q_value)
        .field_f64("certificate_gap", res.certificate_gap)
        .field_f64_array("weights", &res.weights)
        .field_usize("iterations", res.iterations)
        .field_bool("converged", res.converged)
        .field_raw(
            "sigma_opt",
            &serde_json::to_string(&matrix_to_json(&res.sigma_opt)).expect("json"),
        )
        .finish()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Minimize(args) => {
            let l = load(&args)?;
            let res = minimize_divergence(&l.rho, &l.set, &l.spec, &l.search.solve)?;
            emit(&minimization_json(&res), &l.out)
        }
        Command::Certify(args) => {
            let l = load(&args)?;
            let cert = additivity_check(&l.rho, &l.set, &l.spec, &l.search)?;
            emit(&cert.to_json(), &l.out)
        }
        Command::Exponent { which } => match which {
            ExponentCmd::Stein(args) => {
                let l = load(&args)?;
                let rep = stein_report(&l.rho, &l.set, &l.report)?;
                emit(&rep.to_json(), &l.out)
            }
            ExponentCmd::Chernoff(args) => {
                let l = load(&args)?;
                let rep = chernoff_report(&l.rho, &l.set, &l.report)?;
                emit(&rep.to_json(), &l.out)
            }
            ExponentCmd::Hoeffding(rargs) => {
                let l = load(&rargs.base)?;
                let rep = hoeffding_report(&l.rho, &l.set, rargs.rate, &l.report)?;
                emit(&rep.to_json(), &l.out)
            }
            ExponentCmd::Sc(rargs) => {
                let l = load(&rargs.base)?;
                let rep = strong_converse_report(&l.rho, &l.set, rargs.rate, &l.report)?;
                emit(&rep.to_json(), &l.out)
            }
        },
        Command::SweepFpn { ps, n_max, out } => {
            let threads = std::env::var("QADD_THREADS")
                .ok()
                .and_then(|s| s.parse::<usize>().ok());
            let rows = exec::with_thread_cap(threads, || violation_sweep(&ps, n_max))?;
            let mut csv = String::from("n,p,f_closed,f_quad\n");
            for row in rows {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    row.n,
                    fmt_f64(row.p),
                    fmt_f64(row.f_closed),
                    fmt_f64(row.f_quad)
                ));
            }
            match out {
                None => {
                    print!("{csv}");
                    Ok(())
                }
                Some(path) => {
                    std::fs::write(path, csv)?;
                    Ok(())
                }
            }
        }
        Command::Example { which } => run_example(which),
    }
}

fn exponent_by_name(
    what: &str,
    rho: &DensityState,
    set: &ConvexSetSpec,
    rate: Option<f64>,
    opts: &ReportOptions,
) -> Result<ExponentReport> {
    match what {
        "stein" => stein_report(rho, set, opts),
        "chernoff" => chernoff_report(rho, set, opts),
        "hoeffding" => {
            let r = rate.ok_or_else(|| Error::validation("rate", "--rate required for hoeffding"))?;
            hoeffding_report(rho, set, r, opts)
        }
        "sc" => {
            let r = rate.ok_or_else(|| Error::validation("rate", "--rate required for sc"))?;
            strong_converse_report(rho, set, r, opts)
        }
        other => Err(Error::validation("what", format!("unknown report {other:?}"))),
    }
}

fn example_report(
    rho: &DensityState,
    set: &ConvexSetSpec,
    what: &str,
    rate: Option<f64>,
    out: &Option<String>,
) -> Result<()> {
    let search = SearchOptions::default();
    let ropts = ReportOptions::default();
    let text = match what {
        "minimize" => {
            let res = minimize_divergence(rho, set, &DivergenceSpec::umegaki(), &search.solve)?;
            minimization_json(&res)
        }
        "certify" => additivity_check(rho, set, &DivergenceSpec::umegaki(), &search)?.to_json(),
        _ => exponent_by_name(what, rho, set, rate, &ropts)?.to_json(),
    };
    emit(&text, out)
}

fn run_example(which: ExampleCmd) -> Result<()> {
    match which {
        ExampleCmd::QubitAv { lambda, what, rate, out } => {
            let rho = DensityState::plus_state();
            let set = ConvexSetSpec::av_qubit(lambda)?;
            example_report(&rho, &set, &what, rate, &out)
        }
        ExampleCmd::Werner { p, d, what, rate, out } => {
            let rho = DensityState::werner(p, d)?;
            let set = ConvexSetSpec::WernerRainsSlice { d };
            example_report(&rho, &set, &what, rate, &out)
        }
        ExampleCmd::Strange { p, what, rate, out } => {
            let rho = DensityState::noisy_strange(p)?;
            let set = ConvexSetSpec::ManaStrangeSlice;
            example_report(&rho, &set, &what, rate, &out)
        }
        ExampleCmd::Conditional { alpha, z, out } => {
            let spec = DivergenceSpec::alpha_z(alpha, z);
            // deterministic full-rank two-qubit state: 0.7 Φ+ + 0.3 I/4
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let phi = HermitianOperator::pure_projector(&[
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(s, 0.0),
            ]);
            let mixed = HermitianOperator::identity(4).scale(0.25);
            let rho = DensityState::new(HermitianOperator::linear_combination(&[
                (0.7, &phi),
                (0.3, &mixed),
            ]))?;
            let shape = SystemShape::new(vec![2, 2]);
            let one = conditional_entropy(&rho, &shape, &spec)?;
            // two copies, reordered to A1 A2 : B1 B2
            let rho2 = kron(rho.op(), rho.op())
                .permute_systems(&SystemShape::new(vec![2, 2, 2, 2]), &[0, 2, 1, 3])?;
            let two = conditional_entropy(
                &DensityState::new(rho2)?,
                &SystemShape::new(vec![4, 4]),
                &spec,
            )?;
            let text = JsonObject::new()
                .field_f64("value", one.value)
                .field_f64("raw_min_divergence", one.raw_min_divergence)
                .field_f64("fixpoint_residual", one.fixpoint_residual)
                .field_usize("iterations", one.iterations)
                .field_f64("two_copy_gap", two.raw_min_divergence - 2.0 * one.raw_min_divergence)
                .finish();
            emit(&text, &out)
        }
    }
}
