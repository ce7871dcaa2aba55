//! Determinacy sets of the inflation feedback parameter `F_π`.
//!
//! With a predetermined instrument the closed loop is determinate on the
//! negative-feedback interval `D_NF = ((1−β)/κ, (1+β)/κ)`, where
//! `|λ_SR| < 1`. With a forward-looking instrument it is determinate on the
//! complement `D_PF`. The lower endpoint is a saddle-node bifurcation
//! (`λ_SR` crosses +1), the upper one a flip (`λ_SR` crosses −1).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lre::DEFAULT_UNIT_TOL;
use crate::mechanism::{closed_loop_inflation_eigenvalue, ModelParams};
use crate::solvers::ramsey_rule;

/// Bisection tolerance on the swept axis when locating a boundary.
pub const BOUNDARY_BISECT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IntervalKind {
    NegativeFeedback,
    PositiveFeedback,
    RamseyReducedForm,
    DiscretionReducedForm,
}

/// An interval of `F_π`. Bounds may be infinite; `discount` records which
/// discount factor entered the defining inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeedbackInterval {
    pub lower: f64,
    pub upper: f64,
    pub kind: IntervalKind,
    pub discount: f64,
}

impl FeedbackInterval {
    /// Open-interval membership.
    pub fn contains(&self, f_pi: f64) -> bool {
        f_pi > self.lower && f_pi < self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FeedbackClass {
    NegativeFeedback,
    PositiveFeedback,
    Boundary,
}

impl FeedbackClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FeedbackClass::NegativeFeedback => "negative_feedback",
            FeedbackClass::PositiveFeedback => "positive_feedback",
            FeedbackClass::Boundary => "boundary",
        }
    }

    /// Class of a closed-loop inflation root by its modulus.
    pub fn of_eigenvalue(lambda: f64) -> Self {
        let modulus = lambda.abs();
        if (modulus - 1.0).abs() <= DEFAULT_UNIT_TOL {
            FeedbackClass::Boundary
        } else if modulus < 1.0 {
            FeedbackClass::NegativeFeedback
        } else {
            FeedbackClass::PositiveFeedback
        }
    }
}

impl std::fmt::Display for FeedbackClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BifurcationKind {
    SaddleNode,
    Flip,
}

impl BifurcationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BifurcationKind::SaddleNode => "saddle_node",
            BifurcationKind::Flip => "flip",
        }
    }

    pub fn crossing_eigenvalue(self) -> f64 {
        match self {
            BifurcationKind::SaddleNode => 1.0,
            BifurcationKind::Flip => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BifurcationVerdict {
    pub boundary: f64,
    pub kind: BifurcationKind,
    pub crossing_eigenvalue: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySide {
    Lower,
    Upper,
}

/// `D_NF = ((1−β)/κ, (1+β)/κ)`.
pub fn negative_feedback_interval(params: &ModelParams) -> Result<FeedbackInterval> {
    params.validate()?;
    Ok(nf_interval(
        params.beta,
        params.kappa,
        IntervalKind::NegativeFeedback,
    ))
}

fn nf_interval(discount: f64, kappa: f64, kind: IntervalKind) -> FeedbackInterval {
    FeedbackInterval {
        lower: (1.0 - discount) / kappa,
        upper: (1.0 + discount) / kappa,
        kind,
        discount,
    }
}

/// Classifies `F_π` by the modulus of `λ_SR = (1 − κF_π)/β`.
pub fn classify_feedback(params: &ModelParams, f_pi: f64) -> Result<FeedbackClass> {
    params.validate()?;
    Ok(FeedbackClass::of_eigenvalue(
        closed_loop_inflation_eigenvalue(params, f_pi),
    ))
}

pub fn bifurcation_at(params: &ModelParams, side: BoundarySide) -> Result<BifurcationVerdict> {
    let interval = negative_feedback_interval(params)?;
    let (boundary, kind) = match side {
        BoundarySide::Lower => (interval.lower, BifurcationKind::SaddleNode),
        BoundarySide::Upper => (interval.upper, BifurcationKind::Flip),
    };
    Ok(BifurcationVerdict {
        boundary,
        kind,
        crossing_eigenvalue: kind.crossing_eigenvalue(),
    })
}

/// Samples of the Ramsey reduced-form coefficient `F*_π(ε)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedFormEnvelope {
    /// `(ε, F*_π(ε))` in grid order.
    pub samples: Vec<(f64, f64)>,
    /// Sampled hull `[min, max]` of `F*_π`.
    pub envelope: FeedbackInterval,
    /// `D_NF` built with the credibility-weighted discount `βq`.
    pub containing: FeedbackInterval,
}

/// Evaluates `F*_π` on an elasticity grid and checks every sample lies in
/// the negative-feedback set built with `βq`.
pub fn ramsey_reduced_form_interval(
    params: &ModelParams,
    epsilon_grid: &[f64],
) -> Result<ReducedFormEnvelope> {
    params.validate()?;
    let bad: Vec<String> = epsilon_grid
        .iter()
        .filter(|e| !(e.is_finite() && **e > 1.0))
        .map(|e| format!("epsilon grid point must exceed 1, got {e}"))
        .collect();
    if !bad.is_empty() {
        return Err(Error::InvalidParams(bad));
    }
    if epsilon_grid.is_empty() {
        return Err(Error::params("epsilon grid is empty"));
    }
    let discount = params.credibility_discount();
    let containing = nf_interval(discount, params.kappa, IntervalKind::NegativeFeedback);
    let mut samples = Vec::with_capacity(epsilon_grid.len());
    for &epsilon in epsilon_grid {
        let s = ramsey_rule(&ModelParams { epsilon, ..*params })?;
        let lam = (1.0 - params.kappa * s.f_pi_star) / discount;
        if !(lam > 0.0 && lam < 1.0 / discount) {
            return Err(Error::Internal(format!(
                "F*_pi({epsilon}) = {} gives (1-κF)/(βq) = {lam} outside (0, 1/(βq))",
                s.f_pi_star
            )));
        }
        samples.push((epsilon, s.f_pi_star));
    }
    let lower = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let upper = samples
        .iter()
        .map(|s| s.1)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ReducedFormEnvelope {
        samples,
        envelope: FeedbackInterval {
            lower,
            upper,
            kind: IntervalKind::RamseyReducedForm,
            discount,
        },
        containing,
    })
}

/// `(−∞, −1)`: the set `F_π = −ε` sweeps out for `ε > 1`.
pub fn discretion_reduced_form_interval(params: &ModelParams) -> Result<FeedbackInterval> {
    params.validate()?;
    Ok(FeedbackInterval {
        lower: f64::NEG_INFINITY,
        upper: -1.0,
        kind: IntervalKind::DiscretionReducedForm,
        discount: params.beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    FPi,
    Beta,
    Kappa,
    Rho,
    Q,
    Epsilon,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::FPi => "fpi",
            SweepAxis::Beta => "beta",
            SweepAxis::Kappa => "kappa",
            SweepAxis::Rho => "rho",
            SweepAxis::Q => "q",
            SweepAxis::Epsilon => "epsilon",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fpi" | "f_pi" => SweepAxis::FPi,
            "beta" => SweepAxis::Beta,
            "kappa" => SweepAxis::Kappa,
            "rho" => SweepAxis::Rho,
            "q" => SweepAxis::Q,
            "epsilon" => SweepAxis::Epsilon,
            other => return Err(Error::params(format!("unknown sweep axis '{other}'"))),
        })
    }
}

/// Which eigenvalue a sweep tracks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMode {
    /// `λ_SR` of a simple rule; `f_pi` is used unless the axis is `FPi`.
    SimpleRule { f_pi: f64 },
    /// Ramsey inflation eigenvalue `λ` and `F*_π`.
    Ramsey,
    /// `λ_SR` at `F_π = −ε`.
    Discretion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub eigenvalue: f64,
    /// Feedback coefficient in force at this point (`F_π`, `F*_π` or `−ε`).
    pub f_pi: f64,
    pub classification: FeedbackClass,
    /// Set on inserted rows that locate a crossing of `|λ| = 1`.
    pub bifurcation: Option<BifurcationKind>,
    /// Ramsey mode only: `F*_π` lies in `D_NF` built with `βq`.
    pub in_reduced_form_set: Option<bool>,
}

impl SweepRow {
    pub fn is_boundary_row(&self) -> bool {
        self.bifurcation.is_some()
    }
}

fn apply_axis(base: &ModelParams, axis: SweepAxis, value: f64) -> ModelParams {
    let mut p = *base;
    match axis {
        SweepAxis::FPi => {}
        SweepAxis::Beta => p.beta = value,
        SweepAxis::Kappa => p.kappa = value,
        SweepAxis::Rho => p.rho = value,
        SweepAxis::Q => p.q = value,
        SweepAxis::Epsilon => p.epsilon = value,
    }
    p
}

/// Eigenvalue and feedback coefficient at one grid value, or the violations.
fn evaluate(
    base: &ModelParams,
    axis: SweepAxis,
    mode: SweepMode,
    value: f64,
) -> Result<(f64, f64, Option<bool>)> {
    let p = apply_axis(base, axis, value);
    p.validate()?;
    match mode {
        SweepMode::SimpleRule { f_pi } => {
            let f = if axis == SweepAxis::FPi { value } else { f_pi };
            Ok((closed_loop_inflation_eigenvalue(&p, f), f, None))
        }
        SweepMode::Discretion => {
            let f = -p.epsilon;
            Ok((closed_loop_inflation_eigenvalue(&p, f), f, None))
        }
        SweepMode::Ramsey => {
            let s = ramsey_rule(&p)?;
            let d = p.credibility_discount();
            let inside =
                nf_interval(d, p.kappa, IntervalKind::NegativeFeedback).contains(s.f_pi_star);
            Ok((s.lambda, s.f_pi_star, Some(inside)))
        }
    }
}

fn row(value: f64, eval: (f64, f64, Option<bool>)) -> SweepRow {
    SweepRow {
        axis_value: value,
        eigenvalue: eval.0,
        f_pi: eval.1,
        classification: FeedbackClass::of_eigenvalue(eval.0),
        bifurcation: None,
        in_reduced_form_set: eval.2,
    }
}

/// Deterministic row-per-grid-point sweep over `steps` evenly spaced values.
///
/// When neighbouring grid points fall on different sides of `|λ| = 1`, a
/// boundary row located by bisection (to [`BOUNDARY_BISECT_TOL`]) is inserted
/// between them, tagged saddle-node or flip by the sign of the crossing.
pub fn sweep(
    params_base: &ModelParams,
    axis: SweepAxis,
    from: f64,
    to: f64,
    steps: usize,
    mode: SweepMode,
) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(Error::params("sweep needs at least 2 steps"));
    }
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(Error::params(format!(
            "sweep range must satisfy from < to, got [{from}, {to}]"
        )));
    }
    if axis == SweepAxis::FPi && !matches!(mode, SweepMode::SimpleRule { .. }) {
        return Err(Error::params("fpi axis only applies to simple-rule sweeps"));
    }
    if let SweepMode::SimpleRule { f_pi } = mode {
        if !f_pi.is_finite() {
            return Err(Error::params("sweep f_pi must be finite"));
        }
    }
    params_base.validate()?;

    let width = to - from;
    let grid: Vec<f64> = (0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else {
                from + width * i as f64 / (steps - 1) as f64
            }
        })
        .collect();

    let evals: Vec<Result<(f64, f64, Option<bool>)>> = grid
        .par_iter()
        .map(|&v| evaluate(params_base, axis, mode, v))
        .collect();

    let mut rows = Vec::with_capacity(steps);
    let mut violations = Vec::new();
    let mut points = Vec::with_capacity(steps);
    for (&v, e) in grid.iter().zip(evals) {
        match e {
            Ok(eval) => points.push(row(v, eval)),
            Err(Error::InvalidParams(vs)) => violations.extend(
                vs.into_iter()
                    .map(|m| format!("{}={v}: {m}", axis.as_str())),
            ),
            Err(other) => return Err(other),
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations));
    }

    for (i, current) in points.iter().enumerate() {
        if i > 0 {
            let prev = &points[i - 1];
            let side = |r: &SweepRow| r.eigenvalue.abs() > 1.0;
            let straddles = prev.classification != current.classification
                && prev.classification != FeedbackClass::Boundary
                && current.classification != FeedbackClass::Boundary
                && side(prev) != side(current);
            if straddles {
                rows.push(bisect_boundary(params_base, axis, mode, prev, current)?);
            }
        }
        rows.push(*current);
    }
    Ok(rows)
}

fn bisect_boundary(
    base: &ModelParams,
    axis: SweepAxis,
    mode: SweepMode,
    left: &SweepRow,
    right: &SweepRow,
) -> Result<SweepRow> {
    let outside = |lam: f64| lam.abs() > 1.0;
    let left_out = outside(left.eigenvalue);
    let (mut lo, mut hi) = (left.axis_value, right.axis_value);
    while hi - lo > BOUNDARY_BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let (lam, _, _) = evaluate(base, axis, mode, mid)?;
        if outside(lam) == left_out {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let eval = evaluate(base, axis, mode, mid)?;
    // the root that crosses the unit circle is the one nearer ±1
    let crossing = if left.eigenvalue.abs() > 1.0 {
        left.eigenvalue
    } else {
        right.eigenvalue
    };
    let kind = if crossing > 0.0 {
        BifurcationKind::SaddleNode
    } else {
        BifurcationKind::Flip
    };
    let mut r = row(mid, eval);
    r.classification = FeedbackClass::Boundary;
    r.bifurcation = Some(kind);
    Ok(r)
}
