//! Acceptance gate: twelve independent checks that tie the floating-point
//! solver to its exact rational oracles at the advertised tolerances.
//!
//! Each `criterion_*` test verifies one user-facing guarantee end to end
//! and prints a single `[PASS]` line with the measured quantities (visible
//! under `--nocapture`). Inequalities that the theory states exactly are
//! checked in rational arithmetic with zero tolerance; floating-point
//! quantities enter those comparisons through exact binary-to-rational
//! conversion of the solver's output.

use circuitlp::circuit_oracle::{
    self as oracle, rat, rat_from_f64, rat_int, rat_to_f64, Rat, RatMat,
};
use circuitlp::dual_cert::CertProblem;
use circuitlp::feasibility::{feasible, ResidualProblem};
use circuitlp::fgm::{rfgm, RestartSchedule, SmoothObjective};
use circuitlp::gen::{gen_netflow, gen_random, hoffman_family};
use circuitlp::inner_loop::{box_distance, check_pair, get_primal_dual_pair, PairStatus};
use circuitlp::potential::{round_cost, PotentialParams, PotentialProblem};
use circuitlp::trace::NullSink;
use circuitlp::vecops::{dot, norm1};
use circuitlp::{check_certificate, solve, DriverConfig, LPInstance, SparseMatrix, Verdict};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

// ---------------------------------------------------------------------------
// Shared fixtures and rational helpers
// ---------------------------------------------------------------------------

/// Tolerance used for every end-to-end corpus solve.
const CORPUS_DELTA: f64 = 1e-3;

/// Optimality tolerance the driver derives from the caller's `delta`.
fn driver_delta_opt(n: usize, delta: f64) -> f64 {
    delta / (8.0 * n as f64 + 4.0)
}

/// Feasibility tolerance the driver derives from `delta_opt` and the
/// current imbalance guess.
fn driver_delta_feas(inst: &LPInstance, delta_opt: f64, kappa_hat: f64) -> f64 {
    let n = inst.n() as f64;
    let m = inst.m() as f64;
    delta_opt / (8.0 * n * m.sqrt() * kappa_hat * inst.one_norm())
}

fn rats(xs: &[f64]) -> Vec<Rat> {
    xs.iter().map(|&v| rat_from_f64(v)).collect()
}

fn rsub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn rdot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rnorm1(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).sum()
}

fn rnorm_inf(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}

fn rnorm2_sq(v: &[Rat]) -> Rat {
    v.iter().map(|x| x * x).sum()
}

/// Operator 1-norm (max absolute column sum) in exact arithmetic.
fn rational_one_norm(a: &RatMat) -> Rat {
    let mut best = Rat::zero();
    for j in 0..a.cols() {
        let mut s = Rat::zero();
        for i in 0..a.rows() {
            s += a.at(i, j).abs();
        }
        if s > best {
            best = s;
        }
    }
    best
}

/// Exact optimum of an instance already in rational form; panics if the
/// oracle reports the system infeasible (all callers pass planted-feasible
/// data).
fn exact_opt(a: &RatMat, b: &[Rat], c: &[Rat], u: &[Rat]) -> Rat {
    match oracle::exact_lp(a, b, c, u, oracle::MAX_ORACLE_COLUMNS).unwrap() {
        oracle::ExactLp::Optimal { value, .. } => value,
        oracle::ExactLp::Infeasible => panic!("oracle reports a planted-feasible instance infeasible"),
    }
}

struct RunCase {
    name: String,
    inst: LPInstance,
    report: circuitlp::SolveReport,
}

struct Corpus {
    runs: Vec<RunCase>,
    solve_wall: Duration,
}

static CORPUS: OnceLock<Corpus> = OnceLock::new();

/// 22 seeded generator instances, all small enough for the exact oracles
/// (n <= 12 columns for vertex enumeration, n + m <= 16 for circuit
/// enumeration), solved once at `CORPUS_DELTA` and shared by the
/// end-to-end criteria.
fn corpus() -> &'static Corpus {
    CORPUS.get_or_init(|| {
        let netflow_shapes: [(usize, usize, u64); 11] = [
            (4, 8, 100),
            (4, 10, 101),
            (5, 10, 102),
            (4, 12, 103),
            (6, 10, 104),
            (5, 11, 105),
            (4, 9, 106),
            (5, 9, 107),
            (6, 9, 108),
            (4, 11, 109),
            (5, 11, 110),
        ];
        let random_shapes: [(usize, usize, usize, u64); 11] = [
            (2, 8, 2, 300),
            (3, 9, 2, 301),
            (4, 12, 3, 302),
            (2, 12, 2, 303),
            (3, 12, 3, 304),
            (2, 6, 2, 305),
            (3, 8, 3, 306),
            (4, 10, 2, 307),
            (2, 10, 1, 308),
            (3, 10, 2, 309),
            (4, 11, 3, 310),
        ];
        let mut runs = Vec::new();
        let t0 = Instant::now();
        for &(nodes, arcs, seed) in &netflow_shapes {
            let (inst, _) = gen_netflow(nodes, arcs, seed).unwrap();
            let report = solve(&inst, &DriverConfig::new(CORPUS_DELTA)).unwrap();
            runs.push(RunCase {
                name: format!("netflow-{nodes}x{arcs}-s{seed}"),
                inst,
                report,
            });
        }
        for &(m, n, nnz, seed) in &random_shapes {
            let (inst, _) = gen_random(m, n, nnz, seed).unwrap();
            let report = solve(&inst, &DriverConfig::new(CORPUS_DELTA)).unwrap();
            runs.push(RunCase {
                name: format!("random-{m}x{n}-s{seed}"),
                inst,
                report,
            });
        }
        Corpus {
            runs,
            solve_wall: t0.elapsed(),
        }
    })
}

/// Dyadic sample on the 1/16 grid: exactly representable, so float
/// arithmetic on the generated data round-trips into rationals.
fn dyadic(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let steps = ((hi - lo) * 16.0).round() as i64;
    lo + (rng.gen_range(0..=steps) as f64) / 16.0
}

/// Random small box-constrained least-squares instance: dyadic matrix with
/// one entry forced to 1 (operator norm floor), right-hand side pushed out
/// of reach so the residual optimum is generically positive, dyadic box.
fn lsq_instance(m: usize, n: usize, seed: u64) -> LPInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dense = vec![vec![0.0f64; n]; m];
    for (i, row) in dense.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = if (i + j) % 2 == 0 {
                dyadic(&mut rng, -1.0, 1.0)
            } else {
                dyadic(&mut rng, 0.0, 1.0)
            };
        }
    }
    dense[0][0] = 1.0;
    let a = SparseMatrix::from_dense(&dense).unwrap();
    let b: Vec<f64> = (0..m).map(|_| 2.0 + dyadic(&mut rng, 0.0, 2.0)).collect();
    let c = vec![0.0; n];
    let u: Vec<f64> = (0..n).map(|_| 0.5 + dyadic(&mut rng, 0.0, 1.5)).collect();
    LPInstance::new(a, b, c, u).unwrap()
}

/// Dense 2x4 instance with a planted interior solution and a circuit
/// imbalance of 2: exercises the pair search away from the all-unimodular
/// regime while staying cheap.
fn custom_instance(seed: u64) -> LPInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dense = vec![vec![1.0, 2.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0]];
    let a = SparseMatrix::from_dense(&dense).unwrap();
    let n = 4;
    let x_hat: Vec<f64> = (0..n).map(|_| dyadic(&mut rng, 0.25, 0.75)).collect();
    let mut b = vec![0.0; 2];
    for (i, row) in dense.iter().enumerate() {
        b[i] = row.iter().zip(&x_hat).map(|(aij, xj)| aij * xj).sum();
    }
    let c: Vec<f64> = (0..n).map(|_| dyadic(&mut rng, -1.0, 1.0)).collect();
    let u = vec![1.0; n];
    LPInstance::new(a, b, c, u).unwrap()
}

/// Random tiny integer instance in exact rational form, together with the
/// planted feasible point. Entries in [-3, 3], integer box up to 3, planted
/// point on the quarter grid.
fn tiny_rational(
    seed: u64,
    m: usize,
    n: usize,
) -> (RatMat, Vec<Rat>, Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut rows = Vec::new();
        let mut nonzero = false;
        for _ in 0..m {
            let mut row = Vec::new();
            for _ in 0..n {
                let v: i64 = rng.gen_range(-3..=3);
                if v != 0 {
                    nonzero = true;
                }
                row.push(rat_int(v));
            }
            rows.push(row);
        }
        if !nonzero {
            continue;
        }
        let a = RatMat::from_rows(rows).unwrap();
        let u: Vec<Rat> = (0..n).map(|_| rat_int(rng.gen_range(1..=3))).collect();
        let p: Vec<Rat> = u
            .iter()
            .map(|ui| ui * rat(rng.gen_range(0..=4), 4))
            .collect();
        let b = a.mul_vec(&p);
        let c: Vec<Rat> = (0..n).map(|_| rat_int(rng.gen_range(-3..=3))).collect();
        if c.iter().all(|ci| ci.is_zero()) {
            continue;
        }
        return (a, b, c, u, p);
    }
}

/// Fractional and integral circuit imbalance of the solution subspace
/// `{(x, Ax)}`, via the exact oracle.
fn oracle_imbalance(a: &RatMat) -> (Rat, BigInt) {
    oracle::kappa_extended(a, oracle::MAX_ORACLE_COLUMNS).unwrap()
}

// ---------------------------------------------------------------------------
// 1. End-to-end optimality
// ---------------------------------------------------------------------------

/// On 22 seeded generator instances the driver must return `Solved` at
/// `delta = 1e-3`, the returned point must satisfy the feasibility bound
/// `|Ax - b|_1 <= delta |A|_1` exactly, and its objective must be within
/// `delta |c|_inf` of the rational oracle's optimum. Total runtime for the
/// solves plus verification stays under 60 seconds.
#[test]
fn criterion_01_end_to_end_optimality() {
    let corp = corpus();
    let t = Instant::now();
    let delta_rat = rat_from_f64(CORPUS_DELTA);
    assert!(corp.runs.len() >= 20, "corpus too small");
    for run in &corp.runs {
        assert!(
            matches!(run.report.verdict, Verdict::Solved),
            "{}: expected Solved, got {:?}",
            run.name,
            run.report.verdict
        );
        let x = run.report.x.as_ref().unwrap();
        let (a, b, c, u) = oracle::instance_to_rational(&run.inst);
        let xr = rats(x);
        for (xi, ui) in xr.iter().zip(&u) {
            assert!(
                !xi.is_negative() && xi <= ui,
                "{}: solution leaves the box",
                run.name
            );
        }
        let resid = rsub(&a.mul_vec(&xr), &b);
        let feas_rhs = &delta_rat * rational_one_norm(&a);
        assert!(
            rnorm1(&resid) <= feas_rhs,
            "{}: exact feasibility residual exceeds delta |A|_1",
            run.name
        );
        let phi = exact_opt(&a, &b, &c, &u);
        let obj = rdot(&c, &xr);
        let opt_rhs = &phi + &delta_rat * rnorm_inf(&c);
        assert!(
            obj <= opt_rhs,
            "{}: objective {} exceeds exact optimum {} + delta |c|_inf",
            run.name,
            rat_to_f64(&obj),
            rat_to_f64(&phi)
        );
    }
    let total = corp.solve_wall + t.elapsed();
    assert!(
        total < Duration::from_secs(60),
        "end-to-end corpus took {total:?}"
    );
    println!(
        "[PASS] criterion 01: {} instances solved and verified against the exact oracle in {:?}",
        corp.runs.len(),
        total
    );
}

// ---------------------------------------------------------------------------
// 2. Certificate soundness
// ---------------------------------------------------------------------------

/// Every `Solved` run's certificate passes the checker at twice the
/// driver's optimality tolerance, and the solved point's exact optimality
/// gap against its own right-hand side obeys the
/// `(4n + 2) * 2 delta_opt * |c|_inf` transfer bound, verified in rational
/// arithmetic.
#[test]
fn criterion_02_certificate_soundness() {
    let corp = corpus();
    let mut worst_ratio = 0.0f64;
    for run in &corp.runs {
        let x = run.report.x.as_ref().unwrap();
        let cert = run.report.certificate.as_ref().unwrap();
        let rhs = run.report.solved_rhs.as_ref().unwrap();
        let n = run.inst.n();
        let delta_opt = driver_delta_opt(n, CORPUS_DELTA);
        let inst_bar = run.inst.with_rhs(rhs.clone());
        assert!(
            check_certificate(&inst_bar, x, cert, 2.0 * delta_opt),
            "{}: certificate fails at 2 delta_opt",
            run.name
        );
        let (a, _, c, u) = oracle::instance_to_rational(&run.inst);
        let xr = rats(x);
        let own_rhs = a.mul_vec(&xr);
        let phi_bar = exact_opt(&a, &own_rhs, &c, &u);
        let gap = rdot(&c, &xr) - &phi_bar;
        assert!(
            !gap.is_negative(),
            "{}: point beats the exact optimum of its own right-hand side",
            run.name
        );
        let bound =
            rat_int((4 * n + 2) as i64) * rat_from_f64(2.0 * delta_opt) * rnorm_inf(&c);
        assert!(
            gap <= bound,
            "{}: exact optimality gap {} exceeds transfer bound {}",
            run.name,
            rat_to_f64(&gap),
            rat_to_f64(&bound)
        );
        if !bound.is_zero() {
            worst_ratio = worst_ratio.max(rat_to_f64(&(&gap / &bound)));
        }
    }
    println!(
        "[PASS] criterion 02: {} certificates sound; worst exact gap at {:.2e} of the transfer bound",
        corp.runs.len(),
        worst_ratio
    );
}

// ---------------------------------------------------------------------------
// 3. Restart convergence rate
// ---------------------------------------------------------------------------

/// On 10 box-constrained least-squares problems with the exact optimum from
/// the rational oracle and the quadratic-growth constant set to the
/// oracle-derived `1/(m kappa)^2` bound, each restart block contracts the
/// value gap by at least `e^{-2}`: after k blocks the gap is at most
/// `e^{-2k}` times the initial gap. The bound is checked with no slack.
#[test]
fn criterion_03_restart_convergence_rate() {
    let shapes: [(usize, usize); 10] = [
        (2, 4),
        (2, 5),
        (3, 5),
        (2, 6),
        (3, 6),
        (3, 4),
        (2, 4),
        (2, 5),
        (3, 5),
        (3, 6),
    ];
    let mut worst_margin = f64::INFINITY;
    for (idx, &(m, n)) in shapes.iter().enumerate() {
        let inst = lsq_instance(m, n, 7000 + idx as u64);
        let (ra, rb, _, ru) = oracle::instance_to_rational(&inst);
        let (fstar_rat, _) =
            oracle::exact_box_lsq(&ra, &rb, &ru, oracle::MAX_ORACLE_COLUMNS).unwrap();
        let fstar = rat_to_f64(&fstar_rat);
        let (kf, _) = oracle_imbalance(&ra);
        // Round the oracle value up a hair so the growth constant stays valid
        // after the rational-to-float conversion.
        let kappa = rat_to_f64(&kf) * (1.0 + 1e-9);
        let mu = 1.0 / (m as f64 * kappa).powi(2);
        let l = inst.a().spectral_norm_sq_upper();
        let obj = ResidualProblem::new(&inst);
        let x0 = vec![0.0; n];
        let f0 = 0.5 * inst.b().iter().map(|v| v * v).sum::<f64>();
        assert!(f0 > fstar + 1e-9, "degenerate start at seed {}", 7000 + idx);
        let schedule = RestartSchedule::new(l, mu.min(l), 3).unwrap();
        let res = rfgm(&obj, &vec![0.0; n], inst.u(), &x0, &schedule, None).unwrap();
        for k in 1..=3usize {
            let gap = res.block_values[k - 1] - fstar;
            let bound = (-2.0 * k as f64).exp() * (f0 - fstar);
            assert!(
                gap <= bound,
                "restart rate violated at block {k} on {m}x{n} seed {}: gap {gap:.3e} > bound {bound:.3e}",
                7000 + idx
            );
            if gap > 0.0 {
                worst_margin = worst_margin.min(bound / gap);
            }
        }
    }
    println!(
        "[PASS] criterion 03: e^{{-2k}} restart contraction held on 10 least-squares problems \
         (smallest bound/gap factor {worst_margin:.2e})"
    );
}

// ---------------------------------------------------------------------------
// 4. Feasibility routine meets its tolerance inside its iteration budget
// ---------------------------------------------------------------------------

/// On 10 planted-feasible instances and both tolerances, `feasible` returns
/// a point with `|Ax - b|_1 <= delta |A|_1` while spending no more
/// gradient steps than its scheduled block budget allows.
#[test]
fn criterion_04_feasibility_iteration_cap() {
    let mut cases: Vec<(String, LPInstance)> = Vec::new();
    for &(nodes, arcs, seed) in &[
        (4usize, 8usize, 120u64),
        (5, 9, 121),
        (4, 10, 122),
        (6, 9, 123),
        (5, 10, 124),
    ] {
        cases.push((
            format!("netflow-{nodes}x{arcs}-s{seed}"),
            gen_netflow(nodes, arcs, seed).unwrap().0,
        ));
    }
    for &(m, n, nnz, seed) in &[
        (2usize, 8usize, 2usize, 320u64),
        (3, 9, 2, 321),
        (2, 10, 1, 322),
        (3, 8, 3, 323),
        (4, 10, 2, 324),
    ] {
        cases.push((
            format!("random-{m}x{n}-s{seed}"),
            gen_random(m, n, nnz, seed).unwrap().0,
        ));
    }
    let mut checked = 0usize;
    for (name, inst) in &cases {
        let (ra, _, _, _) = oracle::instance_to_rational(inst);
        let (kf, _) = oracle_imbalance(&ra);
        let kappa = rat_to_f64(&kf) * (1.0 + 1e-9);
        for &delta in &[1e-2f64, 1e-4] {
            let (x, steps) = feasible(inst, delta, kappa, 1.0, &mut NullSink, 0)
                .unwrap_or_else(|e| panic!("{name} at delta {delta}: {e}"));
            let resid_l1 = norm1(&inst.residual(&x));
            assert!(
                resid_l1 <= delta * inst.one_norm(),
                "{name}: residual {resid_l1:.3e} misses delta |A|_1 at delta {delta}"
            );
            // Recompute the scheduled budget independently.
            let m_f = inst.m() as f64;
            let a1 = inst.one_norm();
            let target = (delta * a1) * (delta * a1) / (2.0 * m_f);
            let f0 = 0.5 * inst.b().iter().map(|v| v * v).sum::<f64>();
            let cap = if f0 <= target {
                0
            } else {
                let l = inst.a().spectral_norm_sq_upper();
                let mu = 1.0 / (m_f * kappa * m_f * kappa);
                let blocks = RestartSchedule::blocks_for_gap(f0, 0.5 * target);
                let schedule = RestartSchedule::new(l, mu.min(l), blocks).unwrap();
                blocks * schedule.h_r
            };
            assert!(
                steps <= cap,
                "{name}: {steps} steps exceed the scheduled budget {cap} at delta {delta}"
            );
            checked += 1;
        }
    }
    println!(
        "[PASS] criterion 04: feasibility tolerance met within the scheduled budget on {checked} runs"
    );
}

// ---------------------------------------------------------------------------
// 5. Circuit oracle ground truth
// ---------------------------------------------------------------------------

/// The exact oracle reproduces known imbalance values: a hand-computed
/// one-dimensional subspace, directed-graph incidence matrices (imbalance
/// exactly 1), undirected incidence matrices (at most 2), and the
/// transpose-kernel duality identity on random integer matrices.
#[test]
fn criterion_05_circuit_oracle_ground_truth() {
    let cap = oracle::MAX_ORACLE_COLUMNS;
    // (a) span{(4,7,8)}: kernel of [[7,-4,0],[0,8,-7]].
    let m_span = RatMat::from_rows(vec![
        vec![rat_int(7), rat_int(-4), rat_int(0)],
        vec![rat_int(0), rat_int(8), rat_int(-7)],
    ])
    .unwrap();
    assert_eq!(oracle::kappa(&m_span, cap).unwrap(), rat(2, 1));
    assert_eq!(oracle::kappa_bar(&m_span, cap).unwrap(), BigInt::from(8));

    // (b) directed incidence matrices: integral imbalance exactly 1.
    let directed: [(usize, usize, u64); 10] = [
        (3, 6, 500),
        (3, 7, 501),
        (3, 8, 502),
        (4, 8, 503),
        (4, 9, 504),
        (4, 10, 505),
        (4, 12, 506),
        (5, 9, 507),
        (5, 10, 508),
        (5, 11, 509),
    ];
    for &(nodes, arcs, seed) in &directed {
        let (inst, _) = gen_netflow(nodes, arcs, seed).unwrap();
        let (ra, _, _, _) = oracle::instance_to_rational(&inst);
        let (_, kb) = oracle_imbalance(&ra);
        assert_eq!(
            kb,
            BigInt::one(),
            "directed incidence {nodes}x{arcs} seed {seed} should have imbalance 1"
        );
    }

    // (c) undirected incidence matrices (two +1 per column): at most 2.
    let undirected_graphs: [&[(usize, usize)]; 5] = [
        &[(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)],
        &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)],
        &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4)],
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4)],
    ];
    for (gi, edges) in undirected_graphs.iter().enumerate() {
        let nodes = edges.iter().map(|&(s, t)| s.max(t)).max().unwrap() + 1;
        let mut rows = vec![vec![Rat::zero(); edges.len()]; nodes];
        for (j, &(s, t)) in edges.iter().enumerate() {
            rows[s][j] = Rat::one();
            rows[t][j] = Rat::one();
        }
        let a = RatMat::from_rows(rows).unwrap();
        let (_, kb) = oracle_imbalance(&a);
        assert!(
            kb <= BigInt::from(2),
            "undirected incidence graph {gi} exceeds imbalance 2 (got {kb})"
        );
    }

    // (d) duality: the kernels of [A | -I_m] and [A^T | I_n] have equal
    // fractional imbalance, exactly.
    let mut rng = ChaCha8Rng::seed_from_u64(550);
    let sizes = [(2usize, 3usize), (2, 4), (3, 4)];
    for t in 0..10 {
        let (m, n) = sizes[t % sizes.len()];
        let a = loop {
            let mut rows = Vec::new();
            let mut nonzero = false;
            for _ in 0..m {
                let mut row = Vec::new();
                for _ in 0..n {
                    let v: i64 = rng.gen_range(-3..=3);
                    if v != 0 {
                        nonzero = true;
                    }
                    row.push(rat_int(v));
                }
                rows.push(row);
            }
            if nonzero {
                break RatMat::from_rows(rows).unwrap();
            }
        };
        let primal = oracle::kappa(&a.neg_identity_extension(), cap).unwrap();
        let mut rows = Vec::new();
        for j in 0..n {
            let mut row: Vec<Rat> = (0..m).map(|i| a.at(i, j).clone()).collect();
            for jj in 0..n {
                row.push(if jj == j { Rat::one() } else { Rat::zero() });
            }
            rows.push(row);
        }
        let transpose_ext = RatMat::from_rows(rows).unwrap();
        let dual = oracle::kappa(&transpose_ext, cap).unwrap();
        assert_eq!(
            primal, dual,
            "transpose-kernel duality broken on sample {t} ({m}x{n})"
        );
    }
    println!(
        "[PASS] criterion 05: oracle matches hand values, incidence families, and kernel duality"
    );
}

// ---------------------------------------------------------------------------
// 6. Exact proximity bounds
// ---------------------------------------------------------------------------

/// On 20 random tiny instances, three proximity inequalities hold in exact
/// rational arithmetic with zero tolerance: (a) the nearest feasible point
/// is within `kappa |Ax - b|_1` in the max norm and `m kappa |Ax - b|_2`
/// in the Euclidean norm (compared squared); (b) perturbing the right-hand
/// side moves the optimal value by at most `kappa |c|_1 |b - b'|_1`;
/// (c) some optimal solution agrees with a feasible point up to
/// `kappa theta` on every coordinate whose reduced cost is large.
#[test]
fn criterion_06_exact_proximity_bounds() {
    let cap = oracle::MAX_ORACLE_COLUMNS;
    let mut nonvacuous = 0usize;
    for seed in 0..20u64 {
        let n = if seed % 2 == 0 { 4 } else { 5 };
        let (a, b, c, u, p) = tiny_rational(8200 + seed, 2, n);
        let m = a.rows();
        let (kf, _) = oracle_imbalance(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(9900 + seed);

        // (a) nearest-feasible-point bounds from a random box point.
        let query: Vec<Rat> = u
            .iter()
            .map(|ui| ui * rat(rng.gen_range(0..=8), 8))
            .collect();
        let (xbar, dist_sq) = oracle::nearest_feasible_point(&a, &b, &u, &query, cap)
            .unwrap()
            .expect("planted instance must be feasible");
        let diff = rsub(&xbar, &query);
        assert_eq!(dist_sq, rnorm2_sq(&diff), "oracle distance inconsistent");
        let resid = rsub(&a.mul_vec(&query), &b);
        assert!(
            rnorm_inf(&diff) <= &kf * rnorm1(&resid),
            "seed {seed}: max-norm proximity violated"
        );
        let m_kappa = rat_int(m as i64) * &kf;
        assert!(
            dist_sq <= &m_kappa * &m_kappa * rnorm2_sq(&resid),
            "seed {seed}: Euclidean proximity violated"
        );

        // (b) optimal-value sensitivity under a right-hand-side change.
        let q: Vec<Rat> = u
            .iter()
            .map(|ui| ui * rat(rng.gen_range(0..=8), 8))
            .collect();
        let b_alt = a.mul_vec(&q);
        let phi = exact_opt(&a, &b, &c, &u);
        let phi_alt = exact_opt(&a, &b_alt, &c, &u);
        let shift = (&phi - &phi_alt).abs();
        assert!(
            shift <= &kf * rnorm1(&c) * rnorm1(&rsub(&b, &b_alt)),
            "seed {seed}: optimal-value sensitivity violated"
        );

        // (c) existence of an optimal solution close on strongly-reduced
        // coordinates: encode the tightened box plus the optimal-value row
        // and ask the exact feasibility oracle for a witness.
        let c_inf = rnorm_inf(&c);
        let kappa_ceil = kf.ceil();
        let sigma = &c_inf / (rat_int(4) * rat_int(n as i64) * &kappa_ceil);
        let pi: Vec<Rat> = (0..m).map(|_| rat(rng.gen_range(-8..=8), 4)).collect();
        let at = a.transpose();
        let atp = at.mul_vec(&pi);
        let slack: Vec<Rat> = c.iter().zip(&atp).map(|(ci, v)| ci - v).collect();
        let mut theta = Rat::zero();
        for i in 0..n {
            if slack[i] > sigma {
                theta += &p[i];
            } else if slack[i] < -&sigma {
                theta += &u[i] - &p[i];
            }
        }
        let j_threshold = rat_int(n as i64) * &kappa_ceil * &sigma;
        let bound = &kf * &theta;
        let mut lo = vec![Rat::zero(); n];
        let mut hi = u.clone();
        let mut j_count = 0usize;
        for i in 0..n {
            if slack[i].abs() > j_threshold {
                j_count += 1;
                let l = &p[i] - &bound;
                if l > lo[i] {
                    lo[i] = l;
                }
                let h = &p[i] + &bound;
                if h < hi[i] {
                    hi[i] = h;
                }
            }
        }
        if j_count > 0 {
            nonvacuous += 1;
        }
        let mut rows = Vec::new();
        for i in 0..m {
            rows.push((0..n).map(|j| a.at(i, j).clone()).collect::<Vec<_>>());
        }
        rows.push(c.clone());
        let a_aug = RatMat::from_rows(rows).unwrap();
        let a_lo = a.mul_vec(&lo);
        let mut b_aug: Vec<Rat> = b.iter().zip(&a_lo).map(|(bi, v)| bi - v).collect();
        let c_lo: Rat = c.iter().zip(&lo).map(|(ci, li)| ci * li).sum();
        b_aug.push(&phi - &c_lo);
        let u_aug: Vec<Rat> = hi.iter().zip(&lo).map(|(h, l)| h - l).collect();
        assert!(
            u_aug.iter().all(|w| !w.is_negative()),
            "seed {seed}: tightened box is empty"
        );
        let witness = oracle::rational_feasible(&a_aug, &b_aug, &u_aug, cap).unwrap();
        assert!(
            witness.is_some(),
            "seed {seed}: no optimal solution inside the proximity box"
        );
    }
    assert!(
        nonvacuous >= 5,
        "too few samples with active reduced-cost coordinates ({nonvacuous}/20)"
    );
    println!(
        "[PASS] criterion 06: proximity bounds exact on 20 instances ({nonvacuous} with active coordinates)"
    );
}

// ---------------------------------------------------------------------------
// 7. Inner-loop contract
// ---------------------------------------------------------------------------

/// With the imbalance guess set to the oracle's integral imbalance, the
/// pair search converges on 10 feasible instances and every returned pair
/// passes the runtime gates: residual bound, objective transfer bound,
/// bounded dual, and box distance at most `n sqrt(zeta) / 2`.
#[test]
fn criterion_07_inner_loop_contract() {
    let mut cases: Vec<(String, LPInstance)> = Vec::new();
    for &(nodes, arcs, seed) in &[
        (4usize, 8usize, 100u64),
        (4, 8, 101),
        (4, 8, 102),
        (4, 8, 103),
        (4, 8, 104),
        (4, 10, 101),
        (5, 10, 102),
    ] {
        cases.push((
            format!("netflow-{nodes}x{arcs}-s{seed}"),
            gen_netflow(nodes, arcs, seed).unwrap().0,
        ));
    }
    for seed in [9100u64, 9101, 9102] {
        cases.push((format!("dense-2x4-s{seed}"), custom_instance(seed)));
    }
    assert_eq!(cases.len(), 10);
    for (name, inst) in &cases {
        let (ra, _, _, _) = oracle::instance_to_rational(inst);
        let (_, kb) = oracle_imbalance(&ra);
        let kappa_hat = rat_to_f64(&Rat::from(kb.clone()));
        let n = inst.n();
        let delta_opt = driver_delta_opt(n, CORPUS_DELTA);
        let delta_feas = driver_delta_feas(inst, delta_opt, kappa_hat);
        let params = PotentialParams::new(inst, kappa_hat, delta_feas).unwrap();
        let pair = get_primal_dual_pair(inst, &params, delta_opt, 1.0, &mut NullSink, 0)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            matches!(pair.status, PairStatus::Converged),
            "{name}: pair search did not converge at the oracle imbalance"
        );
        let pi = pair.pi.as_ref().expect("converged pair carries a dual");
        let rc = round_cost(inst.c(), inst.c_inf(), params.inv_eps).unwrap();
        let prob = PotentialProblem::new(inst, rc.c_hat.clone(), pair.tau);
        let alpha = prob.alpha(&pair.x);
        let checks = check_pair(inst, &params, delta_opt, &pair.x, alpha, pi);
        assert!(
            checks.residual_ok && checks.objective_ok && checks.dual_bounded,
            "{name}: primal-dual gates failed: {checks:?}"
        );
        assert!(checks.all(), "{name}: full gate set failed: {checks:?}");
        let theta = box_distance(&pair.x, inst.u());
        assert!(
            theta <= n as f64 * params.sqrt_zeta / 2.0,
            "{name}: box distance {theta:.3e} exceeds n sqrt(zeta)/2"
        );
    }
    println!(
        "[PASS] criterion 07: pair search converged and passed all gates on {} instances",
        10
    );
}

// ---------------------------------------------------------------------------
// 8. Outer-loop structure
// ---------------------------------------------------------------------------

/// On every end-to-end run, the recursion depth stays within
/// `ceil(log2(n |u|_1 / delta_opt))` and every recursive cost rescaling
/// factor is at least 2.
#[test]
fn criterion_08_outer_loop_structure() {
    let corp = corpus();
    let mut deepest = 0u32;
    for run in &corp.runs {
        let n = run.inst.n();
        let delta_opt = driver_delta_opt(n, CORPUS_DELTA);
        let depth_bound = (n as f64 * run.inst.u_l1() / delta_opt).log2().ceil();
        assert!(
            (run.report.max_recursion_depth as f64) <= depth_bound,
            "{}: recursion depth {} exceeds bound {depth_bound}",
            run.name,
            run.report.max_recursion_depth
        );
        deepest = deepest.max(run.report.max_recursion_depth);
        for (i, &lambda) in run.report.lambda_log.iter().enumerate() {
            assert!(
                lambda >= 2.0,
                "{}: rescaling factor {lambda} at recursive call {i} is below 2",
                run.name
            );
        }
    }
    println!(
        "[PASS] criterion 08: recursion depth (max {deepest}) and rescaling factors within bounds on {} runs",
        corp.runs.len()
    );
}

// ---------------------------------------------------------------------------
// 9. Imbalance-guess quality
// ---------------------------------------------------------------------------

/// The doubling search never overshoots: at success the final imbalance
/// guess is at most twice the oracle's integral imbalance.
#[test]
fn criterion_09_imbalance_guess_quality() {
    let corp = corpus();
    for run in &corp.runs {
        let (ra, _, _, _) = oracle::instance_to_rational(&run.inst);
        let (_, kb) = oracle_imbalance(&ra);
        let kappa_bar = rat_to_f64(&Rat::from(kb.clone()));
        assert!(
            run.report.kappa_hat_final <= 2.0 * kappa_bar,
            "{}: final guess {} exceeds twice the oracle imbalance {}",
            run.name,
            run.report.kappa_hat_final,
            kappa_bar
        );
    }
    println!(
        "[PASS] criterion 09: final imbalance guess within twice the oracle value on {} runs",
        corp.runs.len()
    );
}

// ---------------------------------------------------------------------------
// 10. Embedded-matrix imbalance bound
// ---------------------------------------------------------------------------

/// The cost-embedded matrix `B = [[A, 0], [|A|_1 c_hat^T, |A|_1]]` built
/// from the rounded cost keeps its circuit imbalance within
/// `2 (m + 1) |A|_1 kappa_bar^2 / eps`, verified exactly on 5 tiny
/// instances.
#[test]
fn criterion_10_embedded_matrix_imbalance() {
    let cap = oracle::MAX_ORACLE_COLUMNS;
    for seed in [8400u64, 8401, 8402, 8403, 8404] {
        let (a, b, c, u, _) = tiny_rational(seed, 2, 4);
        let m = a.rows();
        let n = a.cols();
        let dense: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..n).map(|j| rat_to_f64(a.at(i, j))).collect())
            .collect();
        let inst = LPInstance::new(
            SparseMatrix::from_dense(&dense).unwrap(),
            b.iter().map(rat_to_f64).collect(),
            c.iter().map(rat_to_f64).collect(),
            u.iter().map(rat_to_f64).collect(),
        )
        .unwrap();
        let (_, kb) = oracle_imbalance(&a);
        let kappa_bar = rat_to_f64(&Rat::from(kb.clone()));
        let delta_opt = driver_delta_opt(n, CORPUS_DELTA);
        let delta_feas = driver_delta_feas(&inst, delta_opt, kappa_bar);
        let params = PotentialParams::new(&inst, kappa_bar, delta_feas).unwrap();
        let rc = round_cost(inst.c(), inst.c_inf(), params.inv_eps).unwrap();
        let inv_eps = rat_from_f64(params.inv_eps);
        assert!(inv_eps.is_integer(), "grid reciprocal must be integral");
        let a1 = rational_one_norm(&a);
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for i in 0..m {
            let mut row: Vec<Rat> = (0..n).map(|j| a.at(i, j).clone()).collect();
            row.push(Rat::zero());
            rows.push(row);
        }
        let mut last: Vec<Rat> = rc
            .multipliers
            .iter()
            .map(|&k| &a1 * rat_int(k) / &inv_eps)
            .collect();
        last.push(a1.clone());
        rows.push(last);
        let embedded = RatMat::from_rows(rows).unwrap();
        let kappa_b = oracle::kappa(&embedded.neg_identity_extension(), cap).unwrap();
        let kb_rat = Rat::from(kb.clone());
        let bound = rat_int(2) * rat_int((m + 1) as i64) * &a1 * &kb_rat * &kb_rat * &inv_eps;
        assert!(
            kappa_b <= bound,
            "seed {seed}: embedded imbalance {} exceeds bound {}",
            rat_to_f64(&kappa_b),
            rat_to_f64(&bound)
        );
    }
    println!("[PASS] criterion 10: embedded-matrix imbalance bound exact on 5 instances");
}

// ---------------------------------------------------------------------------
// 11. Sharpness-constant blow-up family
// ---------------------------------------------------------------------------

/// The flat-optimum family keeps its (distance to the optimal face) /
/// (optimality gap) ratio at least `1/eps` — so error-bound reasoning
/// degrades arbitrarily — while the solver still finishes with an
/// imbalance guess at most twice the oracle value.
#[test]
fn criterion_11_sharpness_blowup_family() {
    let cap = oracle::MAX_ORACLE_COLUMNS;
    for eps in [0.1f64, 0.01] {
        let ex = hoffman_family(eps).unwrap();
        let (a, b, c, u) = oracle::instance_to_rational(&ex.inst);
        let phi = exact_opt(&a, &b, &c, &u);
        let x_near = rats(&ex.x_near);
        let gap = rdot(&c, &x_near) - &phi;
        assert!(gap.is_positive(), "eps {eps}: near point must be suboptimal");
        // Distance from x_near to the optimal face {Ax = b, <c,x> = phi}.
        let mut rows = Vec::new();
        for i in 0..a.rows() {
            rows.push((0..a.cols()).map(|j| a.at(i, j).clone()).collect::<Vec<_>>());
        }
        rows.push(c.clone());
        let face = RatMat::from_rows(rows).unwrap();
        let mut rhs = b.clone();
        rhs.push(phi.clone());
        let (_, dist_sq) = oracle::nearest_feasible_point(&face, &rhs, &u, &x_near, cap)
            .unwrap()
            .expect("optimal face is nonempty");
        let eps_rat = rat_from_f64(eps);
        // ratio = sqrt(dist_sq) / gap >= 1/eps, squared to stay rational.
        assert!(
            &dist_sq * &eps_rat * &eps_rat >= &gap * &gap,
            "eps {eps}: distance/gap ratio fell below 1/eps"
        );
        let report = solve(&ex.inst, &DriverConfig::new(CORPUS_DELTA)).unwrap();
        assert!(
            matches!(report.verdict, Verdict::Solved),
            "eps {eps}: solver failed on the blow-up family"
        );
        let (_, kb) = oracle_imbalance(&a);
        let kappa_bar = rat_to_f64(&Rat::from(kb.clone()));
        assert!(
            report.kappa_hat_final <= 2.0 * kappa_bar,
            "eps {eps}: final imbalance guess overshoots"
        );
        for &lambda in &report.lambda_log {
            assert!(lambda >= 2.0, "eps {eps}: rescaling factor below 2");
        }
        let ratio = rat_to_f64(&dist_sq).sqrt() / rat_to_f64(&gap);
        println!(
            "  eps {eps}: distance/gap ratio {ratio:.1} (floor {:.1}), solved with guess {}",
            1.0 / eps,
            report.kappa_hat_final
        );
    }
    println!(
        "[PASS] criterion 11: blow-up family ratios certified and still solved at both scales"
    );
}

// ---------------------------------------------------------------------------
// 12. Gradient correctness
// ---------------------------------------------------------------------------

/// Analytic gradients of the three smooth objectives (scaled potential,
/// feasibility residual, certificate fit) match central finite differences
/// to relative error 1e-6 at 100 random points each. The potential's
/// threshold is placed away from its kink so the comparison is exact up to
/// rounding.
#[test]
fn criterion_12_gradient_correctness() {
    fn max_rel_err(obj: &dyn SmoothObjective, x: &[f64]) -> f64 {
        let mut g = vec![0.0; x.len()];
        obj.value_and_grad(x, &mut g);
        let scale = g.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
        let mut worst = 0.0f64;
        for j in 0..x.len() {
            let h = 1e-5 * (1.0 + x[j].abs());
            let mut xp = x.to_vec();
            xp[j] += h;
            let mut xm = x.to_vec();
            xm[j] -= h;
            let fd = (obj.value(&xp) - obj.value(&xm)) / (2.0 * h);
            worst = worst.max((g[j] - fd).abs() / scale);
        }
        worst
    }

    let inst = custom_instance(9100);
    let n = inst.n();
    let m = inst.m();
    let mut rng = ChaCha8Rng::seed_from_u64(12000);
    let mut worst = 0.0f64;

    // Scaled potential with overshoot hinge, threshold kept off the kink.
    let kappa_hat = 2.0;
    let delta_opt = driver_delta_opt(n, CORPUS_DELTA);
    let delta_feas = driver_delta_feas(&inst, delta_opt, kappa_hat);
    let params = PotentialParams::new(&inst, kappa_hat, delta_feas).unwrap();
    let rc = round_cost(inst.c(), inst.c_inf(), params.inv_eps).unwrap();
    let mut potential = PotentialProblem::new(&inst, rc.c_hat.clone(), 0.0);
    for _ in 0..100 {
        let x: Vec<f64> = inst.u().iter().map(|&ui| rng.gen_range(0.0..=ui)).collect();
        let offset = rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        potential.set_tau(dot(&potential.c_hat, &x) - offset);
        let err = max_rel_err(&potential, &x);
        assert!(err <= 1e-6, "potential gradient error {err:.3e}");
        worst = worst.max(err);
    }

    // Feasibility residual objective.
    let residual = ResidualProblem::new(&inst);
    for _ in 0..100 {
        let x: Vec<f64> = inst.u().iter().map(|&ui| rng.gen_range(0.0..=ui)).collect();
        let err = max_rel_err(&residual, &x);
        assert!(err <= 1e-6, "residual gradient error {err:.3e}");
        worst = worst.max(err);
    }

    // Certificate-fit objective over (pi, w-, w+).
    let cert = CertProblem::new(&inst);
    let dim = m + 2 * n;
    for _ in 0..100 {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let err = max_rel_err(&cert, &v);
        assert!(err <= 1e-6, "certificate gradient error {err:.3e}");
        worst = worst.max(err);
    }
    println!(
        "[PASS] criterion 12: gradients match finite differences at 300 points (worst relative error {worst:.2e})"
    );
}
