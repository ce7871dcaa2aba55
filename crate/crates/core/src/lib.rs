//! Solvers and classifiers for monetary-policy rules acting on the
//! new-Keynesian Phillips curve
//!
//! ```text
//! E_t π_{t+1} = (1/β) π_t − (1/β) z_t − (κ/β) x_t
//!     z_{t+1} = ρ z_t + ε_{t+1}
//! ```
//!
//! with the output gap `x_t` as the policy instrument. The crate compares four
//! regimes:
//!
//! * a simple rule `x_t = F_π π_t + F_z z_t` with a predetermined instrument
//!   (initial inflation anchored by inverting the rule),
//! * Ramsey optimal policy under quasi-commitment (probability `q` of keeping
//!   commitments),
//! * a simple rule with a forward-looking instrument (solution on the stable
//!   eigenvector of the shock),
//! * discretion (`F_π = −ε`).
//!
//! Modules, bottom-up:
//!
//! * [`lre`] generic linear rational-expectations systems: spectra,
//!   controllability, stabilizability, Blanchard-Kahn counting.
//! * [`mechanism`] the Phillips-curve transmission mechanism and closed loops.
//! * [`solvers`] closed-form regime solvers and the welfare loss.
//! * [`determinacy`] determinacy sets, bifurcations and parameter sweeps.
//! * [`irf`] expected impulse responses and seeded stochastic simulation.
//! * [`robustness`] misspecification stress tests.
//! * [`cli`] the `nkpc` command-line front end.

pub mod cli;
pub mod determinacy;
pub mod error;
pub mod irf;
pub mod lre;
pub mod mechanism;
pub mod robustness;
pub mod solvers;

mod fmt;

pub use determinacy::{
    bifurcation_at, classify_feedback, discretion_reduced_form_interval,
    negative_feedback_interval, ramsey_reduced_form_interval, sweep, BifurcationKind,
    BifurcationVerdict, BoundarySide, FeedbackClass, FeedbackInterval, IntervalKind,
    ReducedFormEnvelope, SweepAxis, SweepMode, SweepRow,
};
pub use error::{Error, Result};
pub use irf::{
    expected_irf, foc_recursion_check, foc_residual, monte_carlo, propagate, simulate, IrfPath,
    IrfRequest, MonteCarloSummary, SolverMode,
};
pub use lre::{
    classify_bk, controllability_rank, eigenvalues, is_stabilizable, DeterminacyClass, EigenReport,
    LinearRESystem, DEFAULT_UNIT_TOL,
};
pub use mechanism::{
    build_open_loop, close_loop, closed_loop_inflation_eigenvalue, ClosedLoopSystem,
    InstrumentConvention, ModelParams, PolicyRule,
};
pub use robustness::{
    compensating_kappa, compensating_kappa_with, misspecification_stress, stress_grid,
    KappaFormula, MisspecPoint, MisspecReport, PerturbationGrid, PointOutcome,
};
pub use solvers::{
    anchor_inflation, discretion_solution, forward_projection, instrument_from_target,
    ramsey_lambda, ramsey_loss, ramsey_rule, ramsey_rule_with, InitialConditionDiscount,
    LossEstimate, RamseySolution, StableProjection,
};
