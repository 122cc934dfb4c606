//! Property-based checks: randomized instances exercise the checkers, the
//! serialization layer, and the exact oracles against each other.
//!
//! All generated data sit on dyadic grids so float evaluation is exact and
//! assertions can lean on the rational oracles without rounding slack.

use proptest::collection::vec;
use proptest::prelude::*;

use circuitlp::circuit_oracle::{
    exact_lp, instance_to_rational, kappa, kappa_bar, rat_int, rat_to_f64, ExactLp, Rat, RatMat,
    MAX_ORACLE_COLUMNS,
};
use circuitlp::io::{to_json_pretty, InstanceFile};
use circuitlp::lp_core::{check_delta_feasible, dual_objective_bound, DualCertificate};
use circuitlp::sparse::SparseMatrix;
use circuitlp::LPInstance;

/// Instances with integer matrix entries in `[-3, 3]` (so `|A|_1 >= 1`
/// whenever nonzero) and dyadic `b`, `c`, `u`.
fn small_instance() -> impl Strategy<Value = LPInstance> {
    (1..=2usize)
        .prop_flat_map(|m| (Just(m), m..=3usize))
        .prop_flat_map(|(m, n)| {
            (
                Just(m),
                Just(n),
                vec(-3i64..=3, m * n),
                vec(-128i32..=128, m),
                vec(-64i32..=64, n),
                vec(0i32..=128, n),
            )
        })
        .prop_filter_map("matrix must be nonzero", |(m, n, a, b, c, u)| {
            let triplets: Vec<(usize, usize, f64)> = a
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v != 0)
                .map(|(k, &v)| (k / n, k % n, v as f64))
                .collect();
            if triplets.is_empty() {
                return None;
            }
            let mat = SparseMatrix::from_triplets(m, n, &triplets).ok()?;
            let b: Vec<f64> = b.iter().map(|&k| k as f64 / 64.0).collect();
            let c: Vec<f64> = c.iter().map(|&k| k as f64 / 64.0).collect();
            let u: Vec<f64> = u.iter().map(|&k| k as f64 / 64.0).collect();
            LPInstance::new(mat, b, c, u).ok()
        })
}

/// An instance plus a point exactly inside its box (dyadic fractions of u).
fn instance_with_point() -> impl Strategy<Value = (LPInstance, Vec<f64>)> {
    small_instance().prop_flat_map(|inst| {
        let n = inst.n();
        let u = inst.u().to_vec();
        (Just(inst), vec(0i32..=64, n)).prop_map(move |(inst, t)| {
            let x: Vec<f64> = t
                .iter()
                .zip(&u)
                .map(|(&ti, &ui)| ti as f64 / 64.0 * ui)
                .collect();
            (inst, x)
        })
    })
}

/// The fixed-up multipliers `w_minus = max(c - A^T pi, 0)`,
/// `w_plus = max(A^T pi - c, 0)` that make the dual identity hold.
fn fix_up(inst: &LPInstance, pi: &[f64]) -> DualCertificate {
    let at_pi = inst.a().tr_matvec(pi);
    let mut w_minus = vec![0.0; inst.n()];
    let mut w_plus = vec![0.0; inst.n()];
    for i in 0..inst.n() {
        let gap = inst.c()[i] - at_pi[i];
        if gap >= 0.0 {
            w_minus[i] = gap;
        } else {
            w_plus[i] = -gap;
        }
    }
    DualCertificate {
        pi: pi.to_vec(),
        w_minus,
        w_plus,
    }
}

proptest! {
    #[test]
    fn one_norm_ignores_column_order(
        cols in vec(vec(-8i32..=8, 3), 1..=5),
        seed in 0u64..1000,
    ) {
        // build a 3-row matrix from the columns, then from a rotation of
        // them; the max column abs-sum cannot change
        let n = cols.len();
        let rot = (seed as usize) % n;
        let mut trip_a = Vec::new();
        let mut trip_b = Vec::new();
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                if v != 0 {
                    trip_a.push((i, j, v as f64));
                    trip_b.push((i, (j + rot) % n, v as f64));
                }
            }
        }
        prop_assume!(!trip_a.is_empty());
        let a = SparseMatrix::from_triplets(3, n, &trip_a).unwrap();
        let b = SparseMatrix::from_triplets(3, n, &trip_b).unwrap();
        prop_assert_eq!(a.one_norm(), b.one_norm());
    }

    #[test]
    fn feasibility_is_monotone_in_delta(
        (inst, x) in instance_with_point(),
        d1 in 0i32..=32,
        d2 in 0i32..=32,
    ) {
        let (lo, hi) = (d1.min(d2) as f64 / 64.0, d1.max(d2) as f64 / 64.0);
        let at_lo = check_delta_feasible(&inst, &x, lo).unwrap();
        let at_hi = check_delta_feasible(&inst, &x, hi).unwrap();
        // passing at a tighter tolerance implies passing at a looser one
        prop_assert!(!at_lo || at_hi);
    }

    #[test]
    fn instance_documents_round_trip_bit_exactly(
        m in 1usize..=3,
        n in 1usize..=4,
        entries in vec(proptest::num::f64::NORMAL | proptest::num::f64::ZERO, 12),
        vals in vec(proptest::num::f64::NORMAL | proptest::num::f64::ZERO, 12),
    ) {
        let a: Vec<(usize, usize, f64)> = entries
            .iter()
            .take(m * n)
            .enumerate()
            .map(|(k, &v)| (k / n, k % n, v))
            .collect();
        let file = InstanceFile {
            m,
            n,
            a,
            b: vals.iter().take(m).copied().collect(),
            c: vals.iter().skip(m).take(n).copied().collect(),
            u: vals.iter().skip(m + n).take(n).copied().collect(),
        };
        let text = to_json_pretty(&file).unwrap();
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, file);
    }

    #[test]
    fn entry_ratio_never_exceeds_max_entry(entries in vec(-4i64..=4, 6)) {
        // kappa (worst entry ratio) vs kappa_bar (worst entry) on 2x3
        let rows: Vec<Vec<Rat>> = entries
            .chunks(3)
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect();
        let mat = RatMat::from_rows(rows).unwrap();
        let k = kappa(&mat, MAX_ORACLE_COLUMNS).unwrap();
        let kb = kappa_bar(&mat, MAX_ORACLE_COLUMNS).unwrap();
        prop_assert!(k <= Rat::from_integer(kb));
    }

    #[test]
    fn fixed_up_multipliers_qualify_for_the_dual_bound(
        inst in small_instance(),
        pi_raw in vec(-64i32..=64, 2),
    ) {
        let pi: Vec<f64> = pi_raw.iter().take(inst.m()).map(|&k| k as f64 / 64.0).collect();
        prop_assume!(pi.len() == inst.m());
        let cert = fix_up(&inst, &pi);
        // the construction satisfies the identity and the signs, so the
        // bound must qualify regardless of how arbitrary pi was
        prop_assert!(dual_objective_bound(&inst, &cert).is_some());
    }

    #[test]
    fn dual_bound_never_exceeds_the_exact_optimum(
        inst in small_instance(),
        pi_raw in vec(-64i32..=64, 2),
    ) {
        let pi: Vec<f64> = pi_raw.iter().take(inst.m()).map(|&k| k as f64 / 64.0).collect();
        prop_assume!(pi.len() == inst.m());
        let cert = fix_up(&inst, &pi);
        let v = dual_objective_bound(&inst, &cert).unwrap();

        let (a, b, c, u) = instance_to_rational(&inst);
        match exact_lp(&a, &b, &c, &u, MAX_ORACLE_COLUMNS).unwrap() {
            ExactLp::Optimal { value, .. } => {
                let opt = rat_to_f64(&value);
                // weak duality, with slack for the float rounding inside
                // the fix-up subtraction
                prop_assert!(
                    v <= opt + 1e-6 * (1.0 + v.abs() + opt.abs()),
                    "bound {v} above exact optimum {opt}"
                );
            }
            ExactLp::Infeasible => {
                // vacuous: no feasible point for the bound to undercut
            }
        }
    }
}
