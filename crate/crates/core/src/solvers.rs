//! Closed-form solvers for the four policy regimes.
//!
//! Ramsey optimal policy under quasi-commitment reduces to a predetermined
//! simple rule `(F*_π, F*_z)` with initial instrument `x*_0`. Discretion and the
//! forward-looking simple rule are solved by projecting inflation on the
//! stable eigenvector of the shock, `π_t = G z_t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::irf::IrfPath;
use crate::lre::DEFAULT_UNIT_TOL;
use crate::mechanism::{
    closed_loop_entries, closed_loop_inflation_eigenvalue, InstrumentConvention, ModelParams,
    PolicyRule,
};

/// Relative tolerance for cross-checking the two expressions of `F*_π`.
const DUAL_FORMULA_RTOL: f64 = 1e-9;

/// Default truncation of the discounted loss sum.
pub const DEFAULT_LOSS_HORIZON: usize = 200;

/// Which discount enters `1 − δρλ` in the Ramsey initial conditions.
///
/// The two coincide at `q = 1`. `Household` uses `β` and is the default;
/// `CredibilityWeighted` uses `βq`, the same discount that appears in `F*_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum InitialConditionDiscount {
    #[default]
    Household,
    CredibilityWeighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RamseySolution {
    /// Inflation eigenvalue, in `(0, 1/(βq))`.
    pub lambda: f64,
    pub f_pi_star: f64,
    pub f_z_star: f64,
    /// Initial instrument per unit of `z_0`.
    pub x0_star: f64,
    /// Initial inflation per unit of `z_0`.
    pub pi0: f64,
    /// Lagrange multiplier on inflation at date 0 (natural boundary condition).
    pub gamma0: f64,
    /// `βq`.
    pub discount: f64,
    pub initial_condition_discount: InitialConditionDiscount,
}

impl RamseySolution {
    /// Reduced-form rule, observationally a predetermined simple rule.
    pub fn rule(&self) -> PolicyRule {
        PolicyRule::predetermined(self.f_pi_star, self.f_z_star)
    }

    /// Expected-inflation dynamics seen by the policy maker, discounted by `βq`.
    pub fn transition(&self, params: &ModelParams) -> [[f64; 2]; 2] {
        closed_loop_entries(
            self.discount,
            params.kappa,
            params.rho,
            self.f_pi_star,
            self.f_z_star,
        )
    }

    pub fn is_stable(&self) -> bool {
        self.lambda > 0.0 && self.lambda < 1.0
    }
}

/// Inflation projection `π_t = g z_t`, `x_t = x_coefficient · z_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableProjection {
    pub g: f64,
    pub x_coefficient: f64,
    pub lambda_sr: f64,
}

impl StableProjection {
    /// Residual of the eigenvector equation `(λ_SR − ρ) g = 1/β`.
    pub fn eigenvector_residual(&self, params: &ModelParams) -> f64 {
        (self.lambda_sr - params.rho) * self.g - 1.0 / params.beta
    }
}

/// Smaller root of `λ² − Sλ + 1/(βq) = 0`, `S = 1 + 1/(βq) + εκ/(βq)`.
pub fn ramsey_lambda(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    Ok(ramsey_lambda_raw(
        params.credibility_discount(),
        params.kappa,
        params.epsilon,
    ))
}

pub(crate) fn ramsey_lambda_raw(discount: f64, kappa: f64, epsilon: f64) -> f64 {
    // smaller root = product / larger root, which avoids cancellation when εκ is large
    let half_s = 0.5 * (1.0 + 1.0 / discount + epsilon * kappa / discount);
    let larger = half_s + (half_s * half_s - 1.0 / discount).sqrt();
    1.0 / (discount * larger)
}

/// Ramsey rule with the default initial-condition discount.
pub fn ramsey_rule(params: &ModelParams) -> Result<RamseySolution> {
    ramsey_rule_with(params, InitialConditionDiscount::default())
}

pub fn ramsey_rule_with(
    params: &ModelParams,
    ic_discount: InitialConditionDiscount,
) -> Result<RamseySolution> {
    params.validate()?;
    let discount = params.credibility_discount();
    let (kappa, rho, eps) = (params.kappa, params.rho, params.epsilon);
    let lambda = ramsey_lambda_raw(discount, kappa, eps);

    // textbook radical form; its rounding error grows like half_s/λ
    let half_s = 0.5 * (1.0 + 1.0 / discount + eps * kappa / discount);
    let radical = half_s - (half_s * half_s - 1.0 / discount).sqrt();
    let tol = DUAL_FORMULA_RTOL.max(64.0 * f64::EPSILON * half_s / lambda);
    if (lambda - radical).abs() > tol * lambda.abs() {
        return Err(Error::Internal(format!(
            "product-form root {lambda} disagrees with radical root {radical}"
        )));
    }
    if !(lambda > 0.0 && lambda < 1.0 / discount) {
        return Err(Error::Internal(format!(
            "inflation eigenvalue {lambda} outside (0, 1/(βq))"
        )));
    }

    let f_pi_costate = (1.0 - discount * lambda) / kappa;
    let f_pi_star = eps * lambda / (1.0 - lambda);
    if (f_pi_costate - f_pi_star).abs() > DUAL_FORMULA_RTOL * f_pi_star.abs() {
        return Err(Error::Internal(format!(
            "F*_pi formulas disagree: {f_pi_costate} vs {f_pi_star}"
        )));
    }
    let f_z_star = -f_pi_star / (1.0 - discount * rho * lambda);

    let ic = match ic_discount {
        InitialConditionDiscount::Household => params.beta,
        InitialConditionDiscount::CredibilityWeighted => discount,
    };
    let pi0 = lambda / (1.0 - ic * rho * lambda);
    let x0_star = -eps * pi0;

    Ok(RamseySolution {
        lambda,
        f_pi_star,
        f_z_star,
        x0_star,
        pi0,
        gamma0: 0.0,
        discount,
        initial_condition_discount: ic_discount,
    })
}

/// Discretion: static Phillips curve, rule `F_π = −ε` on a forward-looking
/// instrument, projected on the shock.
pub fn discretion_solution(params: &ModelParams) -> Result<(PolicyRule, StableProjection)> {
    params.validate()?;
    let rule = PolicyRule::forward_looking(-params.epsilon);
    let projection = projection_raw(params.beta, params.kappa, params.rho, rule.f_pi)?;
    Ok((rule, projection))
}

/// Stable-eigenvector solution for a forward-looking rule `x_t = F_π π_t`.
///
/// Requires `|λ_SR| > 1`, otherwise the projection is not the unique bounded
/// solution.
pub fn forward_projection(params: &ModelParams, f_pi: f64) -> Result<StableProjection> {
    params.validate()?;
    if !f_pi.is_finite() {
        return Err(Error::params("f_pi must be finite"));
    }
    let projection = projection_raw(params.beta, params.kappa, params.rho, f_pi)?;
    let lambda_sr = closed_loop_inflation_eigenvalue(params, f_pi);
    if lambda_sr.abs() <= 1.0 + DEFAULT_UNIT_TOL {
        return Err(Error::NotDeterminateUnderConvention(format!(
            "|lambda_sr| = {} is not outside the unit circle",
            lambda_sr.abs()
        )));
    }
    Ok(projection)
}

/// `g = 1/(1 − κF_π − ρβ)` without range checks on the parameters.
pub(crate) fn projection_raw(
    beta: f64,
    kappa: f64,
    rho: f64,
    f_pi: f64,
) -> Result<StableProjection> {
    let denom = 1.0 - kappa * f_pi - rho * beta;
    if denom.abs() < 1e-12 {
        return Err(Error::SingularProjection(format!(
            "lambda_sr coincides with rho (denominator {denom:e})"
        )));
    }
    let g = 1.0 / denom;
    Ok(StableProjection {
        g,
        x_coefficient: f_pi * g,
        lambda_sr: (1.0 - kappa * f_pi) / beta,
    })
}

/// Initial inflation from inverting a predetermined rule: `(x_0 − F_z z_0)/F_π`.
pub fn anchor_inflation(rule: &PolicyRule, x0: f64, z0: f64) -> Result<f64> {
    if rule.convention != InstrumentConvention::PredeterminedInstrument {
        return Err(Error::params(
            "rule inversion needs a predetermined instrument",
        ));
    }
    if rule.f_pi == 0.0 {
        return Err(Error::NonInvertibleRule);
    }
    Ok((x0 - rule.f_z * z0) / rule.f_pi)
}

/// Instrument implied by a known initial inflation `π̄_0`.
pub fn instrument_from_target(rule: &PolicyRule, pi0_bar: f64, z0: f64) -> f64 {
    rule.instrument(pi0_bar, z0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossEstimate {
    pub value: f64,
    /// Upper bound on the omitted tail, `(βq)^H/(1−βq) · max period loss`.
    pub tail_bound: f64,
    pub horizon: usize,
}

/// Discounted quadratic loss `Σ (βq)^t ½(π_t² + (κ/ε) x_t²)` over `horizon`
/// periods.
///
/// The continuation value of a regime change is not part of the sum: the
/// alternative regime is exogenous to the current policy maker.
pub fn ramsey_loss(path: &IrfPath, params: &ModelParams, horizon: usize) -> Result<LossEstimate> {
    params.validate()?;
    if path.len() < horizon {
        return Err(Error::params(format!(
            "path has {} periods, loss horizon is {horizon}",
            path.len()
        )));
    }
    let discount = params.credibility_discount();
    let alpha = params.alpha();
    let mut weight = 1.0;
    let mut value = 0.0;
    let mut max_period: f64 = 0.0;
    for t in 0..horizon {
        let period = 0.5 * (path.pi[t] * path.pi[t] + alpha * path.x[t] * path.x[t]);
        max_period = max_period.max(period);
        value += weight * period;
        weight *= discount;
    }
    let tail_bound = if discount < 1.0 {
        weight / (1.0 - discount) * max_period
    } else {
        f64::INFINITY
    };
    Ok(LossEstimate {
        value,
        tail_bound,
        horizon,
    })
}
