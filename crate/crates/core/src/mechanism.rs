//! The Phillips-curve transmission mechanism and its closed loops under a
//! proportional rule `x_t = F_π π_t + F_z z_t`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lre::LinearRESystem;

/// Structural parameters of the transmission mechanism and the policy maker.
///
/// The welfare weight on the output gap, `α = κ/ε`, is derived rather than
/// stored. `sigma_eps` only matters for stochastic simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub kappa: f64,
    pub rho: f64,
    pub sigma_eps: f64,
    pub epsilon: f64,
    pub q: f64,
}

impl ModelParams {
    /// Calibration `ρ = 0.8, β = 0.99, ε = 6, κ = 0.1275`, full commitment.
    pub const fn table2() -> Self {
        Self {
            beta: 0.99,
            kappa: 0.1275,
            rho: 0.8,
            sigma_eps: 1.0,
            epsilon: 6.0,
            q: 1.0,
        }
    }

    /// Checks every invariant and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(violations))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let finite = |x: f64| x.is_finite();
        if !(finite(self.beta) && self.beta > 0.0 && self.beta < 1.0) {
            v.push(format!("beta must lie in (0,1), got {}", self.beta));
        }
        if !(finite(self.kappa) && self.kappa > 0.0) {
            v.push(format!("kappa must be positive, got {}", self.kappa));
        }
        if !(finite(self.rho) && self.rho > 0.0 && self.rho < 1.0) {
            v.push(format!("rho must lie in (0,1), got {}", self.rho));
        }
        if !(finite(self.sigma_eps) && self.sigma_eps >= 0.0) {
            v.push(format!(
                "sigma_eps must be non-negative, got {}",
                self.sigma_eps
            ));
        }
        if !(finite(self.epsilon) && self.epsilon > 1.0) {
            v.push(format!("epsilon must exceed 1, got {}", self.epsilon));
        }
        if !(finite(self.q) && self.q > 0.0 && self.q <= 1.0) {
            v.push(format!("q must lie in (0,1], got {}", self.q));
        }
        v
    }

    /// Welfare weight on the output gap, `κ/ε`.
    pub fn alpha(&self) -> f64 {
        self.kappa / self.epsilon
    }

    /// Credibility-weighted discount factor `βq`.
    pub fn credibility_discount(&self) -> f64 {
        self.beta * self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InstrumentConvention {
    /// `x_0` is given; `π_0` follows from inverting the rule.
    PredeterminedInstrument,
    /// `x_0` is free; the solution sits on the stable eigenvector of the shock.
    ForwardLookingInstrument,
}

impl InstrumentConvention {
    /// Effective number of jump variables in the closed loop.
    pub fn jump_count(self) -> usize {
        match self {
            InstrumentConvention::PredeterminedInstrument => 0,
            InstrumentConvention::ForwardLookingInstrument => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyRule {
    pub f_pi: f64,
    pub f_z: f64,
    pub convention: InstrumentConvention,
}

impl PolicyRule {
    pub fn predetermined(f_pi: f64, f_z: f64) -> Self {
        Self {
            f_pi,
            f_z,
            convention: InstrumentConvention::PredeterminedInstrument,
        }
    }

    /// Forward-looking rules only respond to inflation (`F_z = 0`).
    pub fn forward_looking(f_pi: f64) -> Self {
        Self {
            f_pi,
            f_z: 0.0,
            convention: InstrumentConvention::ForwardLookingInstrument,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_pi.is_finite() && self.f_z.is_finite()) {
            return Err(Error::params("rule coefficients must be finite"));
        }
        if self.convention == InstrumentConvention::ForwardLookingInstrument && self.f_z != 0.0 {
            return Err(Error::Identification(format!(
                "forward-looking instrument requires f_z = 0, got {}",
                self.f_z
            )));
        }
        Ok(())
    }

    /// Instrument value implied by the rule.
    pub fn instrument(&self, pi: f64, z: f64) -> f64 {
        self.f_pi * pi + self.f_z * z
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopSystem {
    pub base: LinearRESystem,
    pub rule: PolicyRule,
    pub params: ModelParams,
    pub lambda_sr: f64,
}

impl ClosedLoopSystem {
    /// Entries `[[λ_SR, c], [0, ρ]]` of the 2x2 transition.
    pub fn entries(&self) -> [[f64; 2]; 2] {
        let t = self.base.transition();
        [[t[(0, 0)], t[(0, 1)]], [t[(1, 0)], t[(1, 1)]]]
    }
}

/// Matrices of the open-loop mechanism without checking the economic
/// parameter ranges. Ordering is `(π, z)`.
pub fn open_loop_unchecked(beta: f64, kappa: f64, rho: f64) -> Result<LinearRESystem> {
    if beta == 0.0 {
        return Err(Error::params("beta must be non-zero"));
    }
    LinearRESystem::new(
        DMatrix::from_row_slice(2, 2, &[1.0 / beta, -1.0 / beta, 0.0, rho]),
        DMatrix::from_row_slice(2, 1, &[-kappa / beta, 0.0]),
        DMatrix::from_row_slice(2, 1, &[0.0, 1.0]),
        1,
        1,
    )
}

/// Open-loop transmission mechanism, already in Kalman canonical form.
///
/// `z` is predetermined and `π` is a jump variable.
pub fn build_open_loop(params: &ModelParams) -> Result<LinearRESystem> {
    params.validate()?;
    open_loop_unchecked(params.beta, params.kappa, params.rho)
}

/// Closed-loop transition `[[(1−κF_π)/δ, (−1−κF_z)/δ], [0, ρ]]` for a
/// discount `δ` on expected inflation.
pub(crate) fn closed_loop_entries(
    discount: f64,
    kappa: f64,
    rho: f64,
    f_pi: f64,
    f_z: f64,
) -> [[f64; 2]; 2] {
    [
        [
            (1.0 - kappa * f_pi) / discount,
            (-1.0 - kappa * f_z) / discount,
        ],
        [0.0, rho],
    ]
}

/// Closed loop without checking economic parameter ranges.
///
/// The jump count follows the rule's convention: zero for a predetermined
/// instrument (both roots must be stable), one for a forward-looking one.
pub fn closed_loop_unchecked(
    beta: f64,
    kappa: f64,
    rho: f64,
    rule: &PolicyRule,
) -> Result<LinearRESystem> {
    rule.validate()?;
    if beta == 0.0 {
        return Err(Error::params("beta must be non-zero"));
    }
    let e = closed_loop_entries(beta, kappa, rho, rule.f_pi, rule.f_z);
    let m = rule.convention.jump_count();
    LinearRESystem::new(
        DMatrix::from_row_slice(2, 2, &[e[0][0], e[0][1], e[1][0], e[1][1]]),
        DMatrix::zeros(2, 0),
        DMatrix::from_row_slice(2, 1, &[0.0, 1.0]),
        2 - m,
        m,
    )
}

/// Substitutes the rule into the mechanism.
///
/// A predetermined rule with `F_π = 0` still closes the loop; only the later
/// anchoring of `π_0` fails.
pub fn close_loop(params: &ModelParams, rule: &PolicyRule) -> Result<ClosedLoopSystem> {
    params.validate()?;
    let base = closed_loop_unchecked(params.beta, params.kappa, params.rho, rule)?;
    Ok(ClosedLoopSystem {
        base,
        rule: *rule,
        params: *params,
        lambda_sr: closed_loop_inflation_eigenvalue(params, rule.f_pi),
    })
}

/// `λ_SR = (1 − κ F_π)/β`.
pub fn closed_loop_inflation_eigenvalue(params: &ModelParams, f_pi: f64) -> f64 {
    (1.0 - params.kappa * f_pi) / params.beta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lre::{controllability_rank, eigenvalues, is_stabilizable};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn params(beta: f64, kappa: f64, rho: f64) -> ModelParams {
        ModelParams {
            beta,
            kappa,
            rho,
            ..ModelParams::table2()
        }
    }

    #[test]
    fn open_loop_table2() {
        let p = ModelParams::table2();
        let s = build_open_loop(&p).unwrap();
        let a = s.transition();
        assert_abs_diff_eq!(a[(0, 0)], 1.0 / 0.99, epsilon = 1e-12);
        assert_abs_diff_eq!(a[(0, 1)], -1.0 / 0.99, epsilon = 1e-12);
        assert_abs_diff_eq!(s.impact()[(0, 0)], -0.1275 / 0.99, epsilon = 1e-12);
        assert_abs_diff_eq!(a[(0, 0)], 1.0101, epsilon = 1e-4);
        assert_abs_diff_eq!(s.impact()[(0, 0)], -0.1288, epsilon = 1e-4);
        assert_eq!((s.n_predetermined(), s.m_nonpredetermined()), (1, 1));
        let r = eigenvalues(&s, 1e-9).unwrap();
        assert!(r.eigenvalues.iter().any(|e| e.re > 1.0));
    }

    #[test]
    fn open_loop_exact_rationals() {
        let s = build_open_loop(&params(0.5, 1.0, 0.5)).unwrap();
        assert_eq!(s.transition().as_slice(), &[2.0, 0.0, -2.0, 0.5]);
        assert_eq!(s.impact().as_slice(), &[-2.0, 0.0]);
    }

    #[test]
    fn invalid_params_list_every_violation() {
        let p = ModelParams {
            beta: 1.2,
            epsilon: 1.0,
            ..ModelParams::table2()
        };
        match build_open_loop(&p) {
            Err(Error::InvalidParams(v)) => assert_eq!(v.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn table2_closed_loops() {
        let p = ModelParams::table2();
        let ramsey = close_loop(&p, &PolicyRule::predetermined(4.51, -6.83)).unwrap();
        let e = ramsey.entries();
        assert_abs_diff_eq!(e[0][0], 0.43, epsilon = 0.005);
        assert_abs_diff_eq!(e[0][1], -0.13, epsilon = 0.005);
        assert_eq!(e[1], [0.0, 0.8]);
        assert_eq!(ramsey.base.m_nonpredetermined(), 0);

        let disc = close_loop(&p, &PolicyRule::forward_looking(-6.0)).unwrap();
        let e = disc.entries();
        assert_abs_diff_eq!(e[0][0], 1.78, epsilon = 0.005);
        assert_abs_diff_eq!(e[0][1], -1.01, epsilon = 0.005);
        assert_eq!(disc.base.m_nonpredetermined(), 1);
    }

    #[test]
    fn pegged_instrument_is_open_loop() {
        let p = ModelParams::table2();
        let cl = close_loop(&p, &PolicyRule::predetermined(0.0, 0.0)).unwrap();
        assert_eq!(
            cl.base.transition(),
            build_open_loop(&p).unwrap().transition()
        );
    }

    #[test]
    fn forward_rule_with_shock_response_is_unidentified() {
        let rule = PolicyRule {
            f_pi: -6.0,
            f_z: 1.0,
            convention: InstrumentConvention::ForwardLookingInstrument,
        };
        assert!(matches!(
            close_loop(&ModelParams::table2(), &rule),
            Err(Error::Identification(_))
        ));
    }

    #[test]
    fn inflation_eigenvalue_examples() {
        let p = ModelParams::table2();
        // (1 − 0.1275·4.51)/0.99 = 0.424975/0.99
        assert_abs_diff_eq!(
            closed_loop_inflation_eigenvalue(&p, 4.51),
            0.42926767676767677,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            closed_loop_inflation_eigenvalue(&p, 4.51),
            0.43,
            epsilon = 5e-3
        );
        assert_abs_diff_eq!(
            closed_loop_inflation_eigenvalue(&p, 1.0 / p.kappa),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            closed_loop_inflation_eigenvalue(&p, -6.0),
            1.7828,
            epsilon = 1e-4
        );
    }

    fn valid_params() -> impl Strategy<Value = ModelParams> {
        (
            0.01..0.999f64,
            0.001..5.0f64,
            0.01..0.99f64,
            1.01..50.0f64,
            0.01..1.0f64,
        )
            .prop_map(|(beta, kappa, rho, epsilon, q)| ModelParams {
                beta,
                kappa,
                rho,
                sigma_eps: 1.0,
                epsilon,
                q,
            })
    }

    proptest! {
        #[test]
        fn closed_loop_spectrum_is_lambda_and_rho(p in valid_params(), f_pi in -50.0..50.0f64, f_z in -50.0..50.0f64) {
            let cl = close_loop(&p, &PolicyRule::predetermined(f_pi, f_z)).unwrap();
            let r = eigenvalues(&cl.base, 1e-9).unwrap();
            prop_assert_eq!(r.eigenvalues[0].re, cl.lambda_sr);
            prop_assert_eq!(r.eigenvalues[1].re, p.rho);
            prop_assert_eq!(cl.entries()[0][0], cl.lambda_sr);
        }

        #[test]
        fn open_loop_rank_one_and_stabilizable(p in valid_params()) {
            let s = build_open_loop(&p).unwrap();
            prop_assert_eq!(controllability_rank(s.transition(), s.impact()).unwrap(), 1);
            prop_assert!(is_stabilizable(&s).unwrap());
        }
    }
}
