// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

//! # eapms
//!
//! Energy-aware profit-maximizing scheduling of a bag of independent tasks on
//! heterogeneous machine types.
//!
//! A bag contains `T` task types and the cluster `M` machine types. Running a
//! task of type `i` on a machine of type `j` takes `ETC[i][j]` time and draws
//! `APC[i][j]` power. The provider is paid a fixed price `p` per bag and pays
//! `c` per unit of energy; the goal is to maximize profit per unit time,
//! `(p - c * energy) / makespan`.
//!
//! The crate provides:
//!
//!  - [`model`]: the instance, schedules and the scalar metrics.
//!  - [`lp`]: a dense two-phase simplex returning vertex solutions, plus the
//!    builders for the fixed-makespan energy relaxation and the ratio
//!    linearization used by the TMS baseline.
//!  - [`rounding`]: the slot bipartite graph and a minimum-weight b-matching
//!    rounding of fractional type-level assignments.
//!  - [`local`]: batch LPT, which distributes per-type counts onto individual
//!    machines in time independent of the number of tasks.
//!  - [`solver`]: the task-type-based (TTB) makespan sweep and the
//!    reconstructed TMS baseline.
//!  - [`oracle`]: exhaustive reference solvers for tiny instances.
//!  - [`cli`]: instance files, random instance generation and experiment sweeps.
//!
//! ```
//! use eapms::model::Instance;
//! use eapms::solver::{ttb_solve, SweepConfig};
//!
//! let inst = Instance::new(
//!     vec![2, 1],
//!     vec![1, 1],
//!     vec![vec![1.0, 2.0], vec![3.0, 1.0]],
//!     vec![vec![2.0, 1.0], vec![1.0, 2.0]],
//!     10.0,
//!     1.0,
//! )
//! .unwrap();
//! let report = ttb_solve(&inst, &SweepConfig::default()).unwrap();
//! assert!((report.profit_rate - 2.0).abs() < 1e-9);
//! ```

pub mod cli;
pub mod error;
pub mod flow;
pub mod local;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rounding;
pub mod solver;

pub use error::{Error, Result};
pub use model::{Instance, MachineLevelSchedule, Method, SolutionReport, TypeLevelSchedule};

/// Absolute tolerance on LP constraint residuals and integrality snapping.
pub const FEAS_TOL: f64 = 1e-9;
