//! Command-line front end: solve, generate, check, and measure instances.
//!
//! Instances, solutions, and certificates travel as JSON documents (see
//! `docs/format.md`). Exit codes mirror the verdict: 0 solved / check
//! passed, 2 infeasible, 3 imbalance cap reached, 1 any error or failed
//! check.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process;

use clap::{Args, Parser, Subcommand};

use circuitlp::circuit_oracle::{
    exact_lp, instance_to_rational, kappa_extended, rat_to_f64, rational_feasible, ExactLp,
    MAX_ORACLE_COLUMNS,
};
use circuitlp::feasibility::extended_instance;
use circuitlp::gen::{gen_netflow, gen_random, hoffman_family};
use circuitlp::io::{
    instance_to_file, parse_instance, solution_document, to_json_pretty, SolutionFile,
};
use circuitlp::trace::{TraceEvent, TraceSink};
use circuitlp::vecops::{norm1, norm_inf};
use circuitlp::{
    check_certificate, check_delta_feasible, dual_objective_bound, solve, solve_traced,
    DriverConfig, DualCertificate, Error, LPInstance, SolveReport, Verdict,
};

#[derive(Parser)]
#[command(
    name = "circuitlp",
    version,
    about = "First-order solver for box-constrained linear programs min <c,x> s.t. Ax = b, 0 <= x <= u"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance to delta-feasibility and delta-optimality
    Solve(SolveArgs),
    /// Generate example instances
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Verify a solution document against its instance
    Check(CheckArgs),
    /// Exactly enumerate circuit imbalances (small instances only)
    Kappa(KappaArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON path
    instance: PathBuf,
    /// Accuracy: the point is delta-feasible and delta-optimal
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    /// Initial circuit-imbalance guess (>= 1); doubled until validation
    #[arg(long, default_value_t = 1.0)]
    kappa_hint: f64,
    /// Give up once the doubled guess would exceed this cap
    #[arg(long, default_value_t = (2.0f64).powi(60))]
    max_kappa: f64,
    /// Rescale A and b together when |A|_1 < 1 instead of rejecting
    #[arg(long)]
    normalize: bool,
    /// Stream progress events to this file, one JSON object per line
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Include the dual certificate vectors in the solution document
    #[arg(long)]
    emit_cert: bool,
    /// Write the solution document here instead of stdout
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Cross-check the verdict against the exact rational oracle
    /// (small instances; skipped with a note when too large)
    #[arg(long)]
    oracle_check: bool,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Node-arc incidence flow instance; every circuit ratio is exactly 1
    Netflow {
        #[arg(long, default_value_t = 6)]
        nodes: usize,
        /// Number of arcs (variables); at least `nodes`
        #[arg(long, default_value_t = 12)]
        arcs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Sparse random instance with a planted feasible point
    Random {
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 10)]
        cols: usize,
        /// Nonzeros per column (at most `rows`)
        #[arg(long, default_value_t = 2)]
        nnz_per_col: usize,
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Three-variable family whose near-optimal points sit far from the
    /// optimal face (distance-to-gap ratio sqrt(2)/eps)
    Hoffman {
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Instance JSON path the solution claims to answer
    instance: PathBuf,
    /// Solution document produced by `solve` (use --emit-cert there for
    /// optimality and infeasibility checking)
    solution: PathBuf,
    /// Apply the same rescaling the solve ran with
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct KappaArgs {
    /// Instance JSON path
    instance: PathBuf,
    /// Apply the same rescaling the solve would run with
    #[arg(long)]
    normalize: bool,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Gen { family } => cmd_gen(family),
        Command::Check(args) => cmd_check(args),
        Command::Kappa(args) => cmd_kappa(args),
    }
}

/// Streams every progress event as one JSON object per line. Write failures
/// flip a flag instead of panicking on the solver's hot path; the CLI
/// reports truncation afterwards.
struct NdjsonSink {
    out: BufWriter<File>,
    failed: bool,
}

impl TraceSink for NdjsonSink {
    fn record(&mut self, event: &TraceEvent) {
        if self.failed {
            return;
        }
        match serde_json::to_string(event) {
            Ok(line) => {
                if writeln!(self.out, "{line}").is_err() {
                    self.failed = true;
                }
            }
            Err(_) => self.failed = true,
        }
    }
}

fn load_instance(path: &Path, normalize: bool) -> Result<LPInstance, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let (inst, scale) = parse_instance(&text, normalize)?;
    if scale != 1.0 {
        eprintln!("normalized: A and b scaled by {scale:.6e}");
    }
    Ok(inst)
}

fn cmd_solve(args: SolveArgs) -> Result<i32, Box<dyn std::error::Error>> {
    let inst = load_instance(&args.instance, args.normalize)?;
    let config = DriverConfig {
        delta: args.delta,
        kappa_hat_init: args.kappa_hint,
        kappa_hat_cap: args.max_kappa,
        budget_multiplier: 1.0,
    };

    let report = match &args.trace {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            let mut sink = NdjsonSink {
                out: BufWriter::new(file),
                failed: false,
            };
            let report = solve_traced(&inst, &config, &mut sink)?;
            sink.out.flush()?;
            if sink.failed {
                eprintln!("warning: trace file truncated by a write failure");
            }
            report
        }
        None => solve(&inst, &config)?,
    };

    let doc = solution_document(&inst, &report, args.delta, args.emit_cert);
    let json = to_json_pretty(&doc)?;
    match &args.output {
        Some(path) => fs::write(path, json + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => println!("{json}"),
    }

    match report.verdict {
        Verdict::Solved => eprintln!(
            "solved: objective {:.6e}, {} gradient steps, {} restarts, final imbalance guess {}",
            doc.objective.unwrap_or(f64::NAN),
            report.gradient_steps,
            report.restarts,
            report.kappa_hat_final
        ),
        Verdict::Infeasible => eprintln!(
            "infeasible at delta = {:.3e}{} ({} gradient steps)",
            args.delta,
            if report.infeasible_at_tolerance {
                " (borderline)"
            } else {
                ""
            },
            report.gradient_steps
        ),
        Verdict::KappaCapReached => eprintln!(
            "gave up: imbalance guess reached its cap {:.3e} without the guarantees validating",
            report.kappa_hat_final
        ),
    }

    if args.oracle_check {
        oracle_check(&inst, &report, args.delta)?;
    }

    Ok(match report.verdict {
        Verdict::Solved => 0,
        Verdict::Infeasible => 2,
        Verdict::KappaCapReached => 3,
    })
}

/// Cross-checks a finished run against the exact rational oracle. Returns
/// an error on a genuine contradiction; prints a note and succeeds when the
/// instance is too large to enumerate or the verdict leaves nothing to
/// check.
fn oracle_check(
    inst: &LPInstance,
    report: &SolveReport,
    delta: f64,
) -> Result<(), Box<dyn std::error::Error>> {
    match report.verdict {
        Verdict::Solved => {
            let x = report.x.as_ref().expect("solved report carries x");
            let rhs = report
                .solved_rhs
                .as_ref()
                .expect("solved report carries solved_rhs");
            let cert = report
                .certificate
                .as_ref()
                .expect("solved report carries a certificate");
            // The solve ran against the snapped right-hand side A x_bar, a
            // float vector; comparisons with the exact oracle must go
            // through the original b, shifting by the dual-weighted rhs gap.
            let (a, b, c, u) = instance_to_rational(inst);
            match exact_lp(&a, &b, &c, &u, MAX_ORACLE_COLUMNS) {
                Ok(ExactLp::Optimal { value, .. }) => {
                    let opt = rat_to_f64(&value);
                    let obj = inst.objective(x);
                    // the certificate pins <c,x> within delta |c|_inf of its
                    // own dual value; transporting that bound from the
                    // snapped rhs to b costs |pi|_inf * |b - b_bar|_1, plus
                    // the residual x still carries against the snapped rhs
                    let pi_inf = norm_inf(&cert.pi);
                    let rhs_gap: f64 = rhs
                        .iter()
                        .zip(inst.b())
                        .map(|(sb, ob)| (sb - ob).abs())
                        .sum();
                    let inst_bar = inst.with_rhs(rhs.clone());
                    let res_bar = norm1(&inst_bar.residual(x));
                    let band = delta * inst.c_inf()
                        + pi_inf * (rhs_gap + res_bar)
                        + 1e-7 * (1.0 + opt.abs());
                    if obj > opt + band {
                        return Err(format!(
                            "oracle check failed: objective {obj:.9e} exceeds the exact \
                             optimum {opt:.9e} by more than the certified band {band:.3e}"
                        )
                        .into());
                    }
                    if obj < opt - band {
                        // legitimate: the delta-relaxed constraints can admit
                        // strictly better objectives than the exact ones
                        eprintln!(
                            "oracle note: objective {obj:.9e} undershoots the exact optimum \
                             {opt:.9e}; the relaxed constraints admit it"
                        );
                    } else {
                        eprintln!(
                            "oracle check passed: exact optimum {opt:.9e}, solver objective {obj:.9e}"
                        );
                    }
                }
                Ok(ExactLp::Infeasible) => {
                    // not a contradiction: Solved promises a point meeting
                    // the equalities within delta |A|_1, which can exist
                    // even when the exact system is empty
                    eprintln!(
                        "oracle note: the exact equality system is empty; the solved verdict \
                         holds at tolerance {delta:.3e}"
                    );
                }
                Err(Error::CapExceeded(_)) => {
                    eprintln!("oracle check skipped: instance too large for exact enumeration");
                }
                Err(e) => return Err(e.into()),
            }
        }
        Verdict::Infeasible => {
            if report.infeasible_at_tolerance {
                eprintln!("oracle check skipped: the verdict is borderline at this delta");
                return Ok(());
            }
            let (a, b, _c, u) = instance_to_rational(inst);
            match rational_feasible(&a, &b, &u, MAX_ORACLE_COLUMNS) {
                Ok(None) => {
                    eprintln!("oracle check passed: the polytope is exactly empty");
                }
                Ok(Some(_)) => {
                    return Err(
                        "oracle check failed: the oracle found an exactly feasible point".into(),
                    );
                }
                Err(Error::CapExceeded(_)) => {
                    eprintln!("oracle check skipped: instance too large for exact enumeration");
                }
                Err(e) => return Err(e.into()),
            }
        }
        Verdict::KappaCapReached => {
            eprintln!("oracle check skipped: the run produced no verdict");
        }
    }
    Ok(())
}

fn cmd_gen(family: GenFamily) -> Result<i32, Box<dyn std::error::Error>> {
    match family {
        GenFamily::Netflow {
            nodes,
            arcs,
            seed,
            output,
        } => {
            let (inst, _) = gen_netflow(nodes, arcs, seed)?;
            emit_instance(&inst, output.as_deref())?;
            eprintln!("netflow instance: {nodes} nodes, {arcs} arcs, seed {seed}");
        }
        GenFamily::Random {
            rows,
            cols,
            nnz_per_col,
            seed,
            output,
        } => {
            let (inst, _) = gen_random(rows, cols, nnz_per_col, seed)?;
            emit_instance(&inst, output.as_deref())?;
            eprintln!(
                "random instance: {rows} x {cols}, {nnz_per_col} nonzeros per column, seed {seed}"
            );
        }
        GenFamily::Hoffman { eps, output } => {
            let ex = hoffman_family(eps)?;
            emit_instance(&ex.inst, output.as_deref())?;
            eprintln!(
                "three-variable family at eps = {eps}: gap {:.6e} at squared distance {:.6e}",
                ex.gap, ex.dist_sq
            );
        }
    }
    Ok(0)
}

fn emit_instance(
    inst: &LPInstance,
    path: Option<&Path>,
) -> Result<(), Box<dyn std::error::Error>> {
    let json = to_json_pretty(&instance_to_file(inst))?;
    match path {
        Some(p) => {
            fs::write(p, json + "\n").map_err(|e| format!("cannot write {}: {e}", p.display()))?
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<i32, Box<dyn std::error::Error>> {
    let inst = load_instance(&args.instance, args.normalize)?;
    let text = fs::read_to_string(&args.solution)
        .map_err(|e| format!("cannot read {}: {e}", args.solution.display()))?;
    let sol: SolutionFile = serde_json::from_str(&text)
        .map_err(|e| format!("malformed solution document: {e}"))?;
    if !(sol.delta > 0.0 && sol.delta.is_finite()) {
        return Err(format!("solution document has a bad delta {}", sol.delta).into());
    }

    match sol.verdict.as_str() {
        "solved" => {
            let x = sol
                .x
                .as_ref()
                .ok_or("solved document is missing the point x")?;
            if !check_delta_feasible(&inst, x, sol.delta)? {
                eprintln!("check failed: x is not {:.3e}-feasible", sol.delta);
                return Ok(1);
            }
            if let Some(obj) = sol.objective {
                let actual = inst.objective(x);
                if (actual - obj).abs() > 1e-9 * (1.0 + obj.abs()) {
                    eprintln!(
                        "check failed: stored objective {obj:.9e} does not match <c,x> = {actual:.9e}"
                    );
                    return Ok(1);
                }
            }
            match (&sol.certificate, &sol.solved_rhs) {
                (Some(cert_file), Some(rhs)) => {
                    let cert = DualCertificate::from(cert_file);
                    let inst_bar = inst.with_rhs(rhs.clone());
                    let delta_opt = sol.delta / (8.0 * inst.n() as f64 + 4.0);
                    if !check_certificate(&inst_bar, x, &cert, 2.0 * delta_opt) {
                        eprintln!(
                            "check failed: the certificate does not validate on the solved \
                             right-hand side"
                        );
                        return Ok(1);
                    }
                    eprintln!(
                        "check passed: {:.3e}-feasible and certified {:.3e}-optimal against \
                         the solved right-hand side",
                        sol.delta, sol.delta
                    );
                }
                (None, _) => {
                    eprintln!(
                        "check passed: {:.3e}-feasible (no certificate in the document; \
                         solve with --emit-cert to check optimality too)",
                        sol.delta
                    );
                }
                (Some(_), None) => {
                    eprintln!("check failed: certificate present but solved_rhs missing");
                    return Ok(1);
                }
            }
            Ok(0)
        }
        "infeasible" => {
            let cert_file = sol
                .certificate
                .as_ref()
                .ok_or("infeasible document has no certificate; solve with --emit-cert")?;
            let cert = DualCertificate::from(cert_file);
            let (ext, _) = extended_instance(&inst)?;
            match dual_objective_bound(&ext, &cert) {
                Some(v) if v > 0.0 => {
                    eprintln!(
                        "check passed: the dual bound proves slack mass >= {v:.6e} > 0, \
                         so no feasible point exists"
                    );
                    Ok(0)
                }
                other => {
                    eprintln!(
                        "check failed: the certificate does not witness positive slack mass \
                         (bound: {other:?})"
                    );
                    Ok(1)
                }
            }
        }
        "kappa_cap_reached" => {
            eprintln!("nothing to check: the run ended without a verdict");
            Ok(0)
        }
        other => Err(format!("unknown verdict tag {other:?}").into()),
    }
}

fn cmd_kappa(args: KappaArgs) -> Result<i32, Box<dyn std::error::Error>> {
    let inst = load_instance(&args.instance, args.normalize)?;
    let (a, _, _, _) = instance_to_rational(&inst);
    match kappa_extended(&a, MAX_ORACLE_COLUMNS) {
        Ok((k, kbar)) => {
            println!("kappa     = {k} (~{:.6})", rat_to_f64(&k));
            println!("kappa_bar = {kbar}");
            Ok(0)
        }
        Err(Error::CapExceeded(msg)) => {
            Err(format!("instance too large for exact imbalance enumeration: {msg}").into())
        }
        Err(e) => Err(e.into()),
    }
}
