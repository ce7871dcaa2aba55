//! Misspecification stress tests.
//!
//! The policy maker solves for its rule at nominal parameters; the economy
//! then runs with perturbed "true" `(β, κ, ρ)`. A forward-looking solution
//! `π_t = G z_t` only survives when the perturbation keeps `G` unchanged,
//! i.e. when `κ` and `ρβ` move together along
//!
//! ```text
//! κ = (1 − ρβ − 1/G) / F_π
//! ```
//!
//! Anywhere else the gap `π_t − G z_t` grows at the perturbed `|λ_SR|`.
//! Negative-feedback rules have no such knife edge.
//!
//! The compensating restriction also circulates as
//! `κ = (1/F_π)(1/G + ρβ − 1)`, which is the negative of the expression
//! above; [`KappaFormula::SignFlipped`] keeps that variant for comparison.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::determinacy::FeedbackClass;
use crate::error::{Error, Result};
use crate::fmt::sig;
use crate::irf::{expected_irf, propagate, IrfRequest, SolverMode};
use crate::mechanism::{closed_loop_entries, ModelParams};
use crate::solvers::forward_projection;

/// Default divergence threshold as a multiple of the initial inflation response.
pub const DEFAULT_THRESHOLD_MULTIPLE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KappaFormula {
    /// Inverts `G = 1/(1 − κF_π − ρβ)`; round-trips through the projection.
    #[default]
    Corrected,
    /// `(1/F_π)(1/G + ρβ − 1)`, the sign-flipped variant.
    SignFlipped,
}

/// The `κ` that leaves `G` unchanged for given `(F_π, ρ, β)`.
pub fn compensating_kappa(f_pi: f64, g: f64, rho: f64, beta: f64) -> Result<f64> {
    compensating_kappa_with(KappaFormula::Corrected, f_pi, g, rho, beta)
}

pub fn compensating_kappa_with(
    formula: KappaFormula,
    f_pi: f64,
    g: f64,
    rho: f64,
    beta: f64,
) -> Result<f64> {
    let mut bad = Vec::new();
    if f_pi == 0.0 || !f_pi.is_finite() {
        bad.push(format!("f_pi must be finite and non-zero, got {f_pi}"));
    }
    if g == 0.0 || !g.is_finite() {
        bad.push(format!("g must be finite and non-zero, got {g}"));
    }
    if !bad.is_empty() {
        return Err(Error::InvalidParams(bad));
    }
    Ok(match formula {
        KappaFormula::Corrected => (1.0 - rho * beta - 1.0 / g) / f_pi,
        KappaFormula::SignFlipped => (1.0 / f_pi) * (1.0 / g + rho * beta - 1.0),
    })
}

/// Offsets applied to the nominal `(β, κ, ρ)`; the grid is their product.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationGrid {
    pub beta: Vec<f64>,
    pub kappa: Vec<f64>,
    pub rho: Vec<f64>,
}

impl PerturbationGrid {
    /// `steps` evenly spaced offsets in `[−radius, radius]` on each axis.
    pub fn cube(radius: f64, steps: usize) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::params(format!(
                "grid radius must be non-negative, got {radius}"
            )));
        }
        if steps == 0 {
            return Err(Error::params("grid needs at least one step per axis"));
        }
        let axis: Vec<f64> = if steps == 1 {
            vec![0.0]
        } else {
            (0..steps)
                .map(|i| -radius + 2.0 * radius * i as f64 / (steps - 1) as f64)
                .collect()
        };
        Ok(Self {
            beta: axis.clone(),
            kappa: axis.clone(),
            rho: axis,
        })
    }

    /// Perturbs `κ` alone.
    pub fn kappa_only(offsets: &[f64]) -> Self {
        Self {
            beta: vec![0.0],
            kappa: offsets.to_vec(),
            rho: vec![0.0],
        }
    }

    fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.beta.iter().flat_map(move |&db| {
            self.kappa
                .iter()
                .flat_map(move |&dk| self.rho.iter().map(move |&dr| (db, dk, dr)))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PointOutcome {
    Evaluated {
        diverged: bool,
        /// First period with gap above the threshold.
        divergence_horizon: Option<usize>,
        /// `gap_{H−1} / gap_{H−2}`, when the gap is non-zero.
        growth_ratio: Option<f64>,
        /// Inflation root of the perturbed closed loop.
        perturbed_eigenvalue: f64,
        max_gap: f64,
    },
    /// The perturbed parameters violate the model's invariants.
    InvalidParams(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MisspecPoint {
    pub dbeta: f64,
    pub dkappa: f64,
    pub drho: f64,
    pub outcome: PointOutcome,
}

impl MisspecPoint {
    pub fn diverged(&self) -> Option<bool> {
        match self.outcome {
            PointOutcome::Evaluated { diverged, .. } => Some(diverged),
            PointOutcome::InvalidParams(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MisspecReport {
    pub mode: SolverMode,
    pub points: Vec<MisspecPoint>,
    /// Share of valid grid points without divergence.
    pub stable_fraction: f64,
    /// Feedback class of the nominal solution.
    pub regime: FeedbackClass,
    pub threshold: f64,
    pub horizon: usize,
}

impl MisspecReport {
    /// One row per grid point: `dbeta,dkappa,drho,diverged,divergence_horizon`.
    /// Invalid points carry `invalid` and an empty horizon.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "dbeta,dkappa,drho,diverged,divergence_horizon")?;
        for p in &self.points {
            let (flag, horizon) = match &p.outcome {
                PointOutcome::Evaluated {
                    diverged,
                    divergence_horizon,
                    ..
                } => (
                    diverged.to_string(),
                    divergence_horizon
                        .map(|h| h.to_string())
                        .unwrap_or_default(),
                ),
                PointOutcome::InvalidParams(_) => ("invalid".to_string(), String::new()),
            };
            writeln!(
                out,
                "{},{},{},{},{}",
                sig(p.dbeta, 12),
                sig(p.dkappa, 12),
                sig(p.drho, 12),
                flag,
                horizon
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Stress test on a cube of `grid_steps` offsets per axis within `±grid_radius`.
pub fn misspecification_stress(
    params: &ModelParams,
    req: &IrfRequest,
    grid_radius: f64,
    grid_steps: usize,
    horizon: usize,
    threshold: Option<f64>,
) -> Result<MisspecReport> {
    let grid = PerturbationGrid::cube(grid_radius, grid_steps)?;
    stress_grid(params, req, &grid, horizon, threshold)
}

/// Holds the nominal rule and initial condition fixed and runs the closed
/// loop under every perturbed parameter triple in `grid`.
///
/// The gap is `|π_t − G z_t|` for forward-looking regimes and the distance to
/// the nominal expected path otherwise. The default threshold is
/// [`DEFAULT_THRESHOLD_MULTIPLE`] times the nominal `|π_0|`.
pub fn stress_grid(
    params: &ModelParams,
    req: &IrfRequest,
    grid: &PerturbationGrid,
    horizon: usize,
    threshold: Option<f64>,
) -> Result<MisspecReport> {
    if horizon < 2 {
        return Err(Error::params("stress horizon must be at least 2"));
    }
    if let Some(t) = threshold {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::params(format!(
                "threshold must be positive, got {t}"
            )));
        }
    }
    let nominal = expected_irf(params, req, horizon)?;
    let rule = nominal.rule;
    let forward = req.mode.is_forward_looking();
    let g = if forward {
        Some(forward_projection(params, rule.f_pi)?.g)
    } else {
        None
    };
    let threshold = threshold.unwrap_or(DEFAULT_THRESHOLD_MULTIPLE * nominal.pi[0].abs());
    let ramsey = req.mode == SolverMode::RamseyQuasiCommitment;
    let discount_of = |p: &ModelParams| if ramsey { p.beta * p.q } else { p.beta };
    let nominal_root = closed_loop_entries(
        discount_of(params),
        params.kappa,
        params.rho,
        rule.f_pi,
        rule.f_z,
    )[0][0];
    let regime = FeedbackClass::of_eigenvalue(nominal_root);

    let triples: Vec<(f64, f64, f64)> = grid.points().collect();
    let points: Vec<MisspecPoint> = triples
        .par_iter()
        .map(|&(db, dk, dr)| {
            let p = ModelParams {
                beta: params.beta + db,
                kappa: params.kappa + dk,
                rho: params.rho + dr,
                ..*params
            };
            let violations = p.violations();
            let outcome = if !violations.is_empty() {
                PointOutcome::InvalidParams(violations)
            } else {
                let m = closed_loop_entries(discount_of(&p), p.kappa, p.rho, rule.f_pi, rule.f_z);
                let (pi, z) = propagate(m, nominal.pi[0], req.z0, horizon);
                let gaps: Vec<f64> = (0..horizon)
                    .map(|t| match g {
                        Some(g) => (pi[t] - g * z[t]).abs(),
                        None => (pi[t] - nominal.pi[t]).abs(),
                    })
                    .collect();
                let divergence_horizon = gaps.iter().position(|&gap| gap > threshold);
                let (last, prev) = (gaps[horizon - 1], gaps[horizon - 2]);
                PointOutcome::Evaluated {
                    diverged: divergence_horizon.is_some(),
                    divergence_horizon,
                    growth_ratio: (prev > 0.0).then(|| last / prev),
                    perturbed_eigenvalue: m[0][0],
                    max_gap: gaps.iter().copied().fold(0.0, f64::max),
                }
            };
            MisspecPoint {
                dbeta: db,
                dkappa: dk,
                drho: dr,
                outcome,
            }
        })
        .collect();

    let evaluated: Vec<bool> = points.iter().filter_map(MisspecPoint::diverged).collect();
    if evaluated.is_empty() {
        return Err(Error::params(
            "every perturbed grid point has invalid parameters",
        ));
    }
    let stable = evaluated.iter().filter(|d| !**d).count();
    Ok(MisspecReport {
        mode: req.mode,
        points,
        stable_fraction: stable as f64 / evaluated.len() as f64,
        regime,
        threshold,
        horizon,
    })
}

/// Outcome of moving along the compensating manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ManifoldRun {
    pub kappa: f64,
    /// `β` chosen so that `κ` is the compensating value.
    pub beta: f64,
    pub g: f64,
    /// Largest `|π_t − G z_t|` over the horizon.
    pub max_gap: f64,
}

/// Perturbs `κ` to `kappa`, co-moves `β` so `G` is unchanged, and runs the
/// forward-looking rule `F_π` from `π_0 = G z_0`.
pub fn compensated_run(
    params: &ModelParams,
    f_pi: f64,
    kappa: f64,
    z0: f64,
    horizon: usize,
) -> Result<ManifoldRun> {
    let g = forward_projection(params, f_pi)?.g;
    let beta = (1.0 - kappa * f_pi - 1.0 / g) / params.rho;
    let p = ModelParams {
        beta,
        kappa,
        ..*params
    };
    p.validate()?;
    let back = compensating_kappa(f_pi, g, p.rho, beta)?;
    if (back - kappa).abs() > 1e-9 * kappa.abs().max(1.0) {
        return Err(Error::Internal(format!(
            "compensating kappa {back} does not reproduce {kappa}"
        )));
    }
    let m = closed_loop_entries(beta, kappa, p.rho, f_pi, 0.0);
    let (pi, z) = propagate(m, g * z0, z0, horizon);
    let max_gap = pi
        .iter()
        .zip(&z)
        .map(|(pi, z)| (pi - g * z).abs())
        .fold(0.0, f64::max);
    Ok(ManifoldRun {
        kappa,
        beta,
        g,
        max_gap,
    })
}
