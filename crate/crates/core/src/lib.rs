//! First-order solver for box-constrained linear programs
//! `min <c,x>  s.t.  Ax = b, 0 <= x <= u`.
//!
//! [`solve`] returns a delta-feasible, delta-optimal point together with an
//! approximate complementary-slackness certificate, or an infeasibility
//! verdict certified on the slack-extended system. All heavy lifting is
//! restarted projected gradient descent; the step schedules are governed by
//! a guessed bound on the constraint matrix's circuit imbalance (the worst
//! entry ratio across support-minimal kernel vectors), and the driver
//! doubles that guess until the pipeline's self-checks validate. Exact
//! rational oracles (vertex-enumeration LP, imbalance enumeration, nearest
//! feasible point) back the test suite on small instances.

pub mod circuit_oracle;
pub mod driver;
pub mod dual_cert;
pub mod error;
pub mod feasibility;
pub mod fgm;
pub mod gen;
pub mod inner_loop;
pub mod io;
pub mod lp_core;
pub mod outer_loop;
pub mod potential;
pub mod sparse;
pub mod trace;
pub mod vecops;

pub use driver::{solve, solve_traced, DriverConfig};
pub use error::{Error, Result};
pub use lp_core::{
    check_certificate, check_delta_feasible, dual_objective_bound, DualCertificate, LPInstance,
    PhaseSteps, SolveReport, Verdict,
};
pub use sparse::SparseMatrix;
