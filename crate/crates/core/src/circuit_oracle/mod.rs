//! Exact rational ground-truth oracles.
//!
//! Everything in this module is deliberately brute force and exponential:
//! circuits are found by enumerating column subsets, LP optima by enumerating
//! basic points, projections and box least squares by enumerating active-set
//! patterns. All arithmetic is arbitrary-precision rational, so results are
//! exact. Hard caps on the number of columns keep the blow-up honest; callers
//! get an error instead of a silent week-long run.
//!
//! These oracles exist to pin down expected values in tests and to cross-check
//! the floating-point solver on small instances. Nothing here is on the
//! solving path.

pub mod ratlin;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use ratlin::{rat, rat_from_f64, rat_int, rat_to_f64, Rat, RatMat};

use crate::error::{Error, Result};
use crate::lp_core::LPInstance;
use ratlin::coprime_integer_representative;

/// Largest column count accepted by the subset-enumeration oracles
/// (circuits, vertices). 16 columns means at most 2^16 subsets per size
/// class and C(16,8) ~ 13k bases; beyond that the oracles are useless in
/// practice.
pub const MAX_ORACLE_COLUMNS: usize = 16;

/// Largest variable count for the 3^n active-set pattern oracles.
pub const MAX_PATTERN_VARIABLES: usize = 14;

fn check_columns(cols: usize, cap: usize) -> Result<()> {
    if cols > cap {
        return Err(Error::CapExceeded(format!(
            "exact oracle limited to {cap} columns, got {cols}"
        )));
    }
    Ok(())
}

/// Calls `f` on every size-`k` subset of `0..n`, in lexicographic order.
/// `f` returns `true` to stop early.
fn for_each_subset_of_size(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(next: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        // not enough elements left to fill the subset
        if n - next < k - cur.len() {
            return false;
        }
        for i in next..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(i + 1, n, k, cur, f) {
                cur.pop();
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

fn bitmask(subset: &[usize]) -> u32 {
    subset.iter().fold(0u32, |m, &i| m | (1u32 << i))
}

/// One circuit of the column matroid of `mat`: the coprime-integer
/// representative of the (unique up to scale) kernel vector supported on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Elementary {
    /// Full-length vector; zero outside the circuit's support.
    pub vector: Vec<BigInt>,
}

impl Elementary {
    pub fn support(&self) -> Vec<usize> {
        self.vector
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Enumerates every elementary vector (support-minimal nonzero kernel
/// vector) of `mat`, one representative per circuit.
///
/// A column subset S is a circuit exactly when the submatrix on S has a
/// one-dimensional kernel whose vector is nonzero in every coordinate:
/// a zero coordinate or a second kernel dimension would expose a dependent
/// proper subset, contradicting minimality. Subsets are scanned by
/// increasing size with superset pruning, so each reported support is
/// genuinely minimal.
pub fn enumerate_elementary(mat: &RatMat, cap: usize) -> Result<Vec<Elementary>> {
    let n = mat.cols();
    check_columns(n, cap)?;
    let rank = mat.rank();
    let max_size = n.min(rank + 1);
    let mut found: Vec<(u32, Elementary)> = Vec::new();
    for size in 1..=max_size {
        let mut visit = |subset: &[usize]| -> bool {
            let mask = bitmask(subset);
            if found.iter().any(|(m, _)| m & mask == *m) {
                return false; // contains an already-found circuit
            }
            let sub = mat.col_submatrix(subset);
            let kernel = sub.kernel_basis();
            if kernel.len() == 1 && kernel[0].iter().all(|v| !v.is_zero()) {
                let ints = coprime_integer_representative(&kernel[0]);
                let mut vector = vec![BigInt::zero(); n];
                for (slot, &col) in ints.iter().zip(subset) {
                    vector[col] = slot.clone();
                }
                found.push((mask, Elementary { vector }));
            }
            false
        };
        for_each_subset_of_size(n, size, &mut visit);
    }
    Ok(found.into_iter().map(|(_, e)| e).collect())
}

/// Circuit imbalance: the largest ratio `|g_j| / |g_i|` over nonzero entries
/// of any elementary vector. 1 when the kernel is trivial.
pub fn kappa(mat: &RatMat, cap: usize) -> Result<Rat> {
    let circuits = enumerate_elementary(mat, cap)?;
    let mut best = Rat::one();
    for c in &circuits {
        let nonzero: Vec<BigInt> = c.vector.iter().filter(|v| !v.is_zero()).map(|v| v.abs()).collect();
        let max = nonzero.iter().max().expect("circuit has support").clone();
        let min = nonzero.iter().min().expect("circuit has support").clone();
        let ratio = Rat::new(max, min);
        if ratio > best {
            best = ratio;
        }
    }
    Ok(best)
}

/// Max-norm circuit imbalance: the largest absolute entry of any
/// coprime-integer elementary vector. 1 when the kernel is trivial.
/// Always an integer, and always at least `kappa`.
pub fn kappa_bar(mat: &RatMat, cap: usize) -> Result<BigInt> {
    let circuits = enumerate_elementary(mat, cap)?;
    let mut best = BigInt::one();
    for c in &circuits {
        for v in &c.vector {
            let a = v.abs();
            if a > best {
                best = a;
            }
        }
    }
    Ok(best)
}

/// Imbalance measures of the extended kernel matrix `[A | -I]`, whose kernel
/// is the graph space `{(x, Ax)}`. This is the quantity the solver's
/// convergence depends on.
pub fn kappa_extended(a: &RatMat, cap: usize) -> Result<(Rat, BigInt)> {
    let ext = a.neg_identity_extension();
    Ok((kappa(&ext, cap)?, kappa_bar(&ext, cap)?))
}

/// Outcome of the exact LP oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactLp {
    /// Minimum objective value and one attaining vertex.
    Optimal { value: Rat, x: Vec<Rat> },
    /// The polytope `{Ax = b, 0 <= x <= u}` is empty.
    Infeasible,
}

/// Visits every basic point of `{Ax = b, 0 <= x <= u}`: for each column
/// basis B (|B| = rank A, A_B independent) and each assignment of nonbasic
/// variables to their bounds, solves for the basic variables and reports the
/// point if it lands inside the box. Every vertex of the polytope arises this
/// way. `visit` returns true to stop.
fn for_each_vertex(
    a: &RatMat,
    b: &[Rat],
    u: &[Rat],
    visit: &mut dyn FnMut(&[Rat]) -> bool,
) -> Result<()> {
    let m = a.rows();
    let n = a.cols();
    if b.len() != m || u.len() != n {
        return Err(Error::DimensionMismatch(
            "oracle rhs/bounds do not match the matrix".into(),
        ));
    }
    let rank = a.rank();
    let stop = &mut |basis: &[usize]| -> bool {
        let nonbasic: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
        // Augment A_B with b and one column u_j * A_j per nonbasic j, and
        // row-reduce once. Every bound assignment is then a signed sum of
        // the transformed columns: solutions and consistency both read off
        // linearly, so the elimination cost is paid once per basis.
        let mut aug = a.col_submatrix(basis);
        let cols_b = aug.cols();
        let mut extra = RatMat::zeros(m, 1 + nonbasic.len());
        for i in 0..m {
            extra.set(i, 0, b[i].clone());
            for (slot, &j) in nonbasic.iter().enumerate() {
                extra.set(i, 1 + slot, a.at(i, j) * &u[j]);
            }
        }
        aug = aug.hstack(&extra);
        let pivots = aug.rref_in_place();
        let basis_pivots = pivots.iter().filter(|&&c| c < cols_b).count();
        if basis_pivots < cols_b {
            return false; // dependent columns: not a basis
        }
        // With A_B of full column rank, rows 0..cols_b carry the solution
        // and any remaining rows must vanish for consistency.
        let mut upper = vec![false; nonbasic.len()];
        loop {
            let consistent = (cols_b..m).all(|r| {
                let mut s = aug.at(r, cols_b).clone();
                for (slot, &up) in upper.iter().enumerate() {
                    if up {
                        s -= aug.at(r, cols_b + 1 + slot);
                    }
                }
                s.is_zero()
            });
            if consistent {
                let mut x = vec![Rat::zero(); n];
                let mut inside = true;
                for (row, &col) in basis.iter().enumerate() {
                    let mut v = aug.at(row, cols_b).clone();
                    for (slot, &up) in upper.iter().enumerate() {
                        if up {
                            v -= aug.at(row, cols_b + 1 + slot);
                        }
                    }
                    if v.is_negative() || v > u[col] {
                        inside = false;
                        break;
                    }
                    x[col] = v;
                }
                if inside {
                    for (slot, &j) in nonbasic.iter().enumerate() {
                        if upper[slot] {
                            x[j] = u[j].clone();
                        }
                    }
                    if visit(&x) {
                        return true;
                    }
                }
            }
            // next bound assignment (binary counter)
            let mut carried = false;
            for slot in upper.iter_mut() {
                if *slot {
                    *slot = false;
                } else {
                    *slot = true;
                    carried = true;
                    break;
                }
            }
            if !carried {
                break;
            }
        }
        false
    };
    for_each_subset_of_size(n, rank, stop);
    Ok(())
}

/// Exact minimum of `<c, x>` over `{Ax = b, 0 <= x <= u}` by vertex
/// enumeration. The feasible set is a bounded polytope, so if it is nonempty
/// the minimum is attained at a vertex. An `Infeasible` answer is
/// double-checked against a slack-variable feasibility LP whenever the
/// extended system still fits under the column cap.
pub fn exact_lp(a: &RatMat, b: &[Rat], c: &[Rat], u: &[Rat], cap: usize) -> Result<ExactLp> {
    let n = a.cols();
    check_columns(n, cap)?;
    if c.len() != n {
        return Err(Error::DimensionMismatch("cost length mismatch in oracle".into()));
    }
    if u.iter().any(|v| v.is_negative()) {
        return Err(Error::InvalidInstance("oracle requires nonnegative bounds".into()));
    }
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    {
        let mut visit = |x: &[Rat]| -> bool {
            let value = c
                .iter()
                .zip(x)
                .fold(Rat::zero(), |acc, (ci, xi)| acc + ci * xi);
            match &best {
                Some((bv, _)) if *bv <= value => {}
                _ => best = Some((value, x.to_vec())),
            }
            false
        };
        for_each_vertex(a, b, u, &mut visit)?;
    }
    match best {
        Some((value, x)) => Ok(ExactLp::Optimal { value, x }),
        None => {
            // Independent confirmation: minimize total slack in
            // Ax + s+ - s- = b. Zero optimal slack would contradict the
            // vertex sweep above.
            let m = a.rows();
            if n + 2 * m <= cap {
                let mut ext = a.clone();
                let mut plus = RatMat::zeros(m, m);
                let mut minus = RatMat::zeros(m, m);
                for i in 0..m {
                    plus.set(i, i, Rat::one());
                    minus.set(i, i, -Rat::one());
                }
                ext = ext.hstack(&plus).hstack(&minus);
                let slack_bound = b.iter().map(|v| v.abs()).fold(Rat::zero(), |a, b| if b > a { b } else { a });
                let mut u_ext = u.to_vec();
                u_ext.extend(std::iter::repeat(slack_bound).take(2 * m));
                let mut c_ext = vec![Rat::zero(); n];
                c_ext.extend(std::iter::repeat(Rat::one()).take(2 * m));
                match exact_lp(&ext, b, &c_ext, &u_ext, cap)? {
                    ExactLp::Optimal { value, .. } => {
                        assert!(
                            value.is_positive(),
                            "vertex sweep found no feasible point but slack LP reached zero"
                        );
                    }
                    ExactLp::Infeasible => {
                        unreachable!("slack system is feasible by construction")
                    }
                }
            }
            Ok(ExactLp::Infeasible)
        }
    }
}

/// Any exact point of `{Ax = b, 0 <= x <= u}`, or None if the polytope is
/// empty.
pub fn rational_feasible(a: &RatMat, b: &[Rat], u: &[Rat], cap: usize) -> Result<Option<Vec<Rat>>> {
    check_columns(a.cols(), cap)?;
    let mut found = None;
    let mut visit = |x: &[Rat]| -> bool {
        found = Some(x.to_vec());
        true
    };
    for_each_vertex(a, b, u, &mut visit)?;
    Ok(found)
}

fn squared_distance(x: &[Rat], y: &[Rat]) -> Rat {
    x.iter()
        .zip(y)
        .fold(Rat::zero(), |acc, (a, b)| {
            let d = a - b;
            acc + &d * &d
        })
}

/// Exact Euclidean projection of `x` onto `{Az = b, 0 <= z <= u}`:
/// returns the nearest feasible point and the squared distance, or None if
/// the set is empty.
///
/// Enumerates the 3^n patterns of which coordinates sit at 0, at their upper
/// bound, or strictly inside. For the pattern realized by the true
/// projection, stationarity forces the free block to satisfy
/// `z_F = x_F + A_F^T lambda` with `A_F A_F^T lambda = rhs - A_F x_F`, so
/// that pattern's candidate is the projection itself; every candidate the
/// sweep keeps is feasible, so the overall minimum is exact.
pub fn nearest_feasible_point(
    a: &RatMat,
    b: &[Rat],
    u: &[Rat],
    x: &[Rat],
    cap: usize,
) -> Result<Option<(Vec<Rat>, Rat)>> {
    let n = a.cols();
    check_columns(n, cap.min(MAX_PATTERN_VARIABLES))?;
    if x.len() != n || u.len() != n || b.len() != a.rows() {
        return Err(Error::DimensionMismatch("oracle point/bounds mismatch".into()));
    }
    let mut best: Option<(Vec<Rat>, Rat)> = None;
    let mut pattern = vec![0u8; n]; // 0 = at zero, 1 = at upper, 2 = free
    loop {
        let free: Vec<usize> = (0..n).filter(|&j| pattern[j] == 2).collect();
        let mut rhs: Vec<Rat> = b.to_vec();
        for j in 0..n {
            if pattern[j] == 1 {
                for (i, r) in rhs.iter_mut().enumerate() {
                    *r -= a.at(i, j) * &u[j];
                }
            }
        }
        let candidate: Option<Vec<Rat>> = if free.is_empty() {
            rhs.iter().all(Rat::is_zero).then(Vec::new)
        } else {
            let af = a.col_submatrix(&free);
            let aft = af.transpose();
            let gram = af.mul_mat(&aft);
            let xf: Vec<Rat> = free.iter().map(|&j| x[j].clone()).collect();
            let af_xf = af.mul_vec(&xf);
            let target: Vec<Rat> = rhs.iter().zip(&af_xf).map(|(r, v)| r - v).collect();
            gram.solve(&target).map(|lambda| {
                let shift = aft.mul_vec(&lambda);
                xf.iter().zip(&shift).map(|(a, b)| a + b).collect()
            })
        };
        if let Some(zf) = candidate {
            let ok = zf
                .iter()
                .zip(&free)
                .all(|(v, &j)| !v.is_negative() && *v <= u[j]);
            if ok {
                let mut z = vec![Rat::zero(); n];
                for (slot, &j) in free.iter().enumerate() {
                    z[j] = zf[slot].clone();
                }
                for j in 0..n {
                    if pattern[j] == 1 {
                        z[j] = u[j].clone();
                    }
                }
                let dist = squared_distance(&z, x);
                match &best {
                    Some((_, d)) if *d <= dist => {}
                    _ => best = Some((z, dist)),
                }
            }
        }
        // next ternary pattern
        let mut advanced = false;
        for p in pattern.iter_mut() {
            if *p < 2 {
                *p += 1;
                advanced = true;
                break;
            }
            *p = 0;
        }
        if !advanced {
            break;
        }
    }
    Ok(best)
}

/// Exact minimum of `(1/2) ||Az - b||^2` over the box `0 <= z <= u`, with
/// one attaining point.
///
/// Pattern sweep as in [`nearest_feasible_point`]: for each active-set
/// pattern the free block's unconstrained normal-equation value is a lower
/// bound for that pattern, and it counts only if some in-box point attains
/// the same image `A_F z` (checked exactly). The true optimum's own pattern
/// always qualifies, so the minimum kept is the true minimum.
pub fn exact_box_lsq(a: &RatMat, b: &[Rat], u: &[Rat], cap: usize) -> Result<(Rat, Vec<Rat>)> {
    let n = a.cols();
    check_columns(n, cap.min(MAX_PATTERN_VARIABLES))?;
    if u.len() != n || b.len() != a.rows() {
        return Err(Error::DimensionMismatch("oracle bounds mismatch".into()));
    }
    let half = rat(1, 2);
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    let mut pattern = vec![0u8; n];
    loop {
        let free: Vec<usize> = (0..n).filter(|&j| pattern[j] == 2).collect();
        let mut resid_base: Vec<Rat> = b.to_vec();
        for j in 0..n {
            if pattern[j] == 1 {
                for (i, r) in resid_base.iter_mut().enumerate() {
                    *r -= a.at(i, j) * &u[j];
                }
            }
        }
        let candidate: Option<(Rat, Vec<Rat>)> = if free.is_empty() {
            let val = resid_base
                .iter()
                .fold(Rat::zero(), |acc, r| acc + r * r)
                * &half;
            Some((val, Vec::new()))
        } else {
            let af = a.col_submatrix(&free);
            let normal = af.transpose().mul_mat(&af);
            let target = af.transpose().mul_vec(&resid_base);
            let zf = normal
                .solve(&target)
                .expect("normal equations are always consistent");
            let image = af.mul_vec(&zf);
            let uf: Vec<Rat> = free.iter().map(|&j| u[j].clone()).collect();
            // value is attainable iff some in-box point has the same image
            match rational_feasible(&af, &image, &uf, MAX_ORACLE_COLUMNS)? {
                Some(zf_box) => {
                    let val = resid_base
                        .iter()
                        .zip(&image)
                        .fold(Rat::zero(), |acc, (r, v)| {
                            let d = r - v;
                            acc + &d * &d
                        })
                        * &half;
                    Some((val, zf_box))
                }
                None => None,
            }
        };
        if let Some((val, zf)) = candidate {
            let better = match &best {
                Some((bv, _)) => val < *bv,
                None => true,
            };
            if better {
                let mut z = vec![Rat::zero(); n];
                for (slot, &j) in free.iter().enumerate() {
                    z[j] = zf[slot].clone();
                }
                for j in 0..n {
                    if pattern[j] == 1 {
                        z[j] = u[j].clone();
                    }
                }
                best = Some((val, z));
            }
        }
        let mut advanced = false;
        for p in pattern.iter_mut() {
            if *p < 2 {
                *p += 1;
                advanced = true;
                break;
            }
            *p = 0;
        }
        if !advanced {
            break;
        }
    }
    Ok(best.expect("all-fixed pattern always yields a candidate"))
}

/// Exact rational copy of an instance's data.
pub fn instance_to_rational(inst: &LPInstance) -> (RatMat, Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let a = RatMat::from_sparse(inst.a());
    let b = inst.b().iter().map(|&v| rat_from_f64(v)).collect();
    let c = inst.c().iter().map(|&v| rat_from_f64(v)).collect();
    let u = inst.u().iter().map(|&v| rat_from_f64(v)).collect();
    (a, b, c, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn single_dependency_has_one_circuit() {
        let m = RatMat::from_i64(&[&[1, 1]]);
        let c = enumerate_elementary(&m, MAX_ORACLE_COLUMNS).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vector, vec![big(1), big(-1)]);
    }

    #[test]
    fn one_dimensional_kernel_with_spread_entries() {
        // kernel of [[7,-4,0],[0,8,-7]] is spanned by (4,7,8)
        let m = RatMat::from_i64(&[&[7, -4, 0], &[0, 8, -7]]);
        let c = enumerate_elementary(&m, MAX_ORACLE_COLUMNS).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vector, vec![big(4), big(7), big(8)]);
        assert_eq!(kappa(&m, MAX_ORACLE_COLUMNS).unwrap(), rat(2, 1));
        assert_eq!(kappa_bar(&m, MAX_ORACLE_COLUMNS).unwrap(), big(8));
    }

    #[test]
    fn ratio_versus_maxnorm_on_a_single_circuit() {
        let m = RatMat::from_i64(&[&[2, 3]]);
        // kernel vector (3, -2)
        assert_eq!(kappa(&m, MAX_ORACLE_COLUMNS).unwrap(), rat(3, 2));
        assert_eq!(kappa_bar(&m, MAX_ORACLE_COLUMNS).unwrap(), big(3));
    }

    #[test]
    fn trivial_kernel_means_imbalance_one() {
        let m = RatMat::from_i64(&[&[1, 0], &[0, 1]]);
        assert!(enumerate_elementary(&m, MAX_ORACLE_COLUMNS).unwrap().is_empty());
        assert_eq!(kappa(&m, MAX_ORACLE_COLUMNS).unwrap(), rat(1, 1));
        assert_eq!(kappa_bar(&m, MAX_ORACLE_COLUMNS).unwrap(), big(1));
    }

    #[test]
    fn zero_column_is_a_loop_circuit() {
        let m = RatMat::from_i64(&[&[0, 1]]);
        let c = enumerate_elementary(&m, MAX_ORACLE_COLUMNS).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vector, vec![big(1), big(0)]);
        assert_eq!(kappa(&m, MAX_ORACLE_COLUMNS).unwrap(), rat(1, 1));
    }

    #[test]
    fn incidence_matrix_is_perfectly_balanced() {
        // directed triangle: columns are arcs 0->1, 1->2, 0->2
        let m = RatMat::from_i64(&[&[-1, 0, -1], &[1, -1, 0], &[0, 1, 1]]);
        let (k, kb) = kappa_extended(&m, MAX_ORACLE_COLUMNS).unwrap();
        assert_eq!(k, rat(1, 1));
        assert_eq!(kb, big(1));
    }

    #[test]
    fn superset_pruning_keeps_only_minimal_supports() {
        // columns 0 and 1 are parallel, column 2 independent of both.
        let m = RatMat::from_i64(&[&[1, 2, 0], &[0, 0, 1]]);
        let c = enumerate_elementary(&m, MAX_ORACLE_COLUMNS).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vector, vec![big(2), big(-1), big(0)]);
    }

    #[test]
    fn exact_lp_on_a_small_transfer_problem() {
        // min -x1 - 2 x2  s.t.  x1 + x2 = 3/2, 0 <= x <= 1
        let a = RatMat::from_i64(&[&[1, 1]]);
        let b = vec![rat(3, 2)];
        let c = vec![rat_int(-1), rat_int(-2)];
        let u = vec![rat_int(1), rat_int(1)];
        match exact_lp(&a, &b, &c, &u, MAX_ORACLE_COLUMNS).unwrap() {
            ExactLp::Optimal { value, x } => {
                assert_eq!(value, rat(-5, 2));
                assert_eq!(x, vec![rat(1, 2), rat_int(1)]);
            }
            other => panic!("expected an optimum, got {other:?}"),
        }
    }

    #[test]
    fn exact_lp_detects_an_empty_polytope() {
        // x1 = 5 with u = 1 is infeasible
        let a = RatMat::from_i64(&[&[1]]);
        let b = vec![rat_int(5)];
        let c = vec![rat_int(0)];
        let u = vec![rat_int(1)];
        assert_eq!(
            exact_lp(&a, &b, &c, &u, MAX_ORACLE_COLUMNS).unwrap(),
            ExactLp::Infeasible
        );
    }

    #[test]
    fn exact_lp_handles_rank_deficient_rows() {
        // duplicated row; optimum must still be found
        let a = RatMat::from_i64(&[&[1, 1], &[1, 1]]);
        let b = vec![rat_int(1), rat_int(1)];
        let c = vec![rat_int(1), rat_int(0)];
        let u = vec![rat_int(1), rat_int(1)];
        match exact_lp(&a, &b, &c, &u, MAX_ORACLE_COLUMNS).unwrap() {
            ExactLp::Optimal { value, x } => {
                assert_eq!(value, rat_int(0));
                assert_eq!(x, vec![rat_int(0), rat_int(1)]);
            }
            other => panic!("expected an optimum, got {other:?}"),
        }
    }

    #[test]
    fn projection_onto_a_segment() {
        // project (1,1) onto {x1 + x2 = 1, 0 <= x <= 1}: nearest is (1/2, 1/2)
        let a = RatMat::from_i64(&[&[1, 1]]);
        let b = vec![rat_int(1)];
        let u = vec![rat_int(1), rat_int(1)];
        let x = vec![rat_int(1), rat_int(1)];
        let (z, d2) = nearest_feasible_point(&a, &b, &u, &x, MAX_PATTERN_VARIABLES)
            .unwrap()
            .expect("segment is nonempty");
        assert_eq!(z, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(d2, rat(1, 2));
    }

    #[test]
    fn projection_reports_empty_sets() {
        let a = RatMat::from_i64(&[&[1]]);
        let b = vec![rat_int(3)];
        let u = vec![rat_int(1)];
        let x = vec![rat_int(0)];
        assert!(nearest_feasible_point(&a, &b, &u, &x, MAX_PATTERN_VARIABLES)
            .unwrap()
            .is_none());
    }

    #[test]
    fn box_least_squares_clamps_to_the_nearest_face() {
        // min (1/2)||z - (2,-1)||^2 over [0,1]^2: z = (1,0), value 1
        let a = RatMat::from_i64(&[&[1, 0], &[0, 1]]);
        let b = vec![rat_int(2), rat_int(-1)];
        let u = vec![rat_int(1), rat_int(1)];
        let (val, z) = exact_box_lsq(&a, &b, &u, MAX_PATTERN_VARIABLES).unwrap();
        assert_eq!(val, rat_int(1));
        assert_eq!(z, vec![rat_int(1), rat_int(0)]);
    }

    #[test]
    fn box_least_squares_reaches_zero_on_feasible_systems() {
        let a = RatMat::from_i64(&[&[1, 1]]);
        let b = vec![rat_int(1)];
        let u = vec![rat_int(1), rat_int(1)];
        let (val, z) = exact_box_lsq(&a, &b, &u, MAX_PATTERN_VARIABLES).unwrap();
        assert_eq!(val, rat_int(0));
        assert_eq!(a.mul_vec(&z), b);
    }

    #[test]
    fn column_cap_is_enforced() {
        let m = RatMat::zeros(1, 20);
        assert!(matches!(
            enumerate_elementary(&m, MAX_ORACLE_COLUMNS),
            Err(Error::CapExceeded(_))
        ));
    }
}
