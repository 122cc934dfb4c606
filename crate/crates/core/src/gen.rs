//! Instance generators: network flows, random sparse systems, and a small
//! family showing why objective gaps alone say nothing about distance.
//!
//! The feasible generators also return the planted point they built the
//! right-hand side from, so tests can verify feasibility without solving.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp_core::LPInstance;
use crate::sparse::SparseMatrix;

/// Minimum-cost-flow shaped instance: `A` is the incidence matrix of a
/// random digraph on `nodes` vertices (one `+1` and one `-1` per arc
/// column), demands come from a planted feasible flow. The first `nodes`
/// arcs form a Hamiltonian cycle so every vertex is touched; `arcs >= nodes`
/// keeps the system wide (`m <= n`). Every circuit of an incidence matrix
/// is perfectly balanced, which makes these the easy end of the spectrum.
///
/// All data land on a `1/64` grid, so the float matrix-vector products are
/// exact and the planted flow stays feasible in exact rational arithmetic —
/// the exact oracles see a genuinely feasible instance, not one feasible
/// only up to rounding.
pub fn gen_netflow(nodes: usize, arcs: usize, seed: u64) -> Result<(LPInstance, Vec<f64>)> {
    if nodes < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 nodes, got {nodes}"
        )));
    }
    if arcs < nodes {
        return Err(Error::InvalidArgument(format!(
            "need at least as many arcs as nodes ({nodes}), got {arcs}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::with_capacity(2 * arcs);
    for j in 0..arcs {
        let (tail, head) = if j < nodes {
            (j, (j + 1) % nodes)
        } else {
            let tail = rng.gen_range(0..nodes);
            let mut head = rng.gen_range(0..nodes - 1);
            if head >= tail {
                head += 1;
            }
            (tail, head)
        };
        triplets.push((tail, j, 1.0));
        triplets.push((head, j, -1.0));
    }
    let a = SparseMatrix::from_triplets(nodes, arcs, &triplets)?;
    let u: Vec<f64> = (0..arcs)
        .map(|_| rng.gen_range(32..=128u32) as f64 / 64.0)
        .collect();
    let flow: Vec<f64> = u
        .iter()
        .map(|&uj| rng.gen_range(0..=(uj * 64.0) as u32) as f64 / 64.0)
        .collect();
    let b = a.matvec(&flow);
    let c: Vec<f64> = (0..arcs)
        .map(|_| rng.gen_range(-64..=64i32) as f64 / 64.0)
        .collect();
    Ok((LPInstance::new(a, b, c, u)?, flow))
}

/// Random sparse instance with `nnz_per_col` entries per column: the first
/// support entry has magnitude in `[1, 2]` (which keeps `|A|_1 >= 1` with no
/// rescaling), the rest in `[1/8, 1]`, all signs random, and a right-hand
/// side planted from a random point in the box. Matrix entries sit on a
/// `1/16` grid and the planted point on a `1/64` grid, so the float products
/// are exact and the plant stays feasible in exact rational arithmetic.
pub fn gen_random(m: usize, n: usize, nnz_per_col: usize, seed: u64) -> Result<(LPInstance, Vec<f64>)> {
    if m < 1 || n < m {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    if nnz_per_col < 1 || nnz_per_col > m {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= nnz_per_col <= m = {m}, got {nnz_per_col}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::with_capacity(n * nnz_per_col);
    let mut rows: Vec<usize> = (0..m).collect();
    for j in 0..n {
        // partial Fisher-Yates: the first nnz_per_col entries become the
        // distinct support rows of column j
        for k in 0..nnz_per_col {
            let swap = rng.gen_range(k..m);
            rows.swap(k, swap);
        }
        for (k, &i) in rows[..nnz_per_col].iter().enumerate() {
            let mag = if k == 0 {
                rng.gen_range(16..=32u32) as f64 / 16.0
            } else {
                rng.gen_range(2..=16u32) as f64 / 16.0
            };
            let v = if rng.gen_bool(0.5) { mag } else { -mag };
            triplets.push((i, j, v));
        }
    }
    let a = SparseMatrix::from_triplets(m, n, &triplets)?;
    let u: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(32..=128u32) as f64 / 64.0)
        .collect();
    let point: Vec<f64> = u
        .iter()
        .map(|&uj| rng.gen_range(0..=(uj * 64.0) as u32) as f64 / 64.0)
        .collect();
    let b = a.matvec(&point);
    let c: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(-64..=64i32) as f64 / 64.0)
        .collect();
    Ok((LPInstance::new(a, b, c, u)?, point))
}

/// A near-optimal point and the optimum of [`hoffman_family`], with the
/// exact gap and squared distance between them.
#[derive(Debug, Clone)]
pub struct HoffmanExample {
    pub inst: LPInstance,
    /// Optimal to within `gap`, yet far from the optimal face.
    pub x_near: Vec<f64>,
    pub x_opt: Vec<f64>,
    /// `<c, x_near> - <c, x_opt>` (exactly `eps / 2`).
    pub gap: f64,
    /// `||x_near - x_opt||^2` (exactly `1/2`).
    pub dist_sq: f64,
}

/// `min -x_1 - eps x_2  s.t.  x_1 + x_2 + x_3 = 3/2, x in [0,1]^3`.
///
/// The optimum is `(1, 1/2, 0)`; the point `(1, 0, 1/2)` trails it by only
/// `eps/2` in objective but sits at squared distance `1/2`, so the
/// distance-to-gap ratio `||x - x*|| / gap = sqrt(2)/eps` blows up as
/// `eps -> 0` even though every elementary vector of the constraint matrix
/// has max-entry ratio 1. Near-degenerate objectives, not unbalanced
/// circuits, are what force the solver to track distances through duals
/// rather than through objective gaps.
pub fn hoffman_family(eps: f64) -> Result<HoffmanExample> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    let a = SparseMatrix::from_triplets(1, 3, &[(0, 0, 1.0), (0, 1, 1.0), (0, 2, 1.0)])?;
    let inst = LPInstance::new(a, vec![1.5], vec![-1.0, -eps, 0.0], vec![1.0; 3])?;
    Ok(HoffmanExample {
        inst,
        x_near: vec![1.0, 0.0, 0.5],
        x_opt: vec![1.0, 0.5, 0.0],
        gap: 0.5 * eps,
        dist_sq: 0.5,
    })
}
