//! Expected impulse responses and seeded stochastic simulation.
//!
//! Expected paths follow `(π_t, z_t)' = M^t (π_0, z_0)'` with the regime's
//! closed-loop matrix `M` and initial vector:
//!
//! | regime | `π_0` |
//! |---|---|
//! | predetermined instrument | `(x_0 − F_z z_0)/F_π` |
//! | Ramsey, quasi-commitment | `λ/(1 − βρλ) z_0` |
//! | forward-looking instrument, discretion | `G z_0`, `G = (1/β)/(λ_SR − ρ)` |
//!
//! For the forward-looking regimes `(G, 1)` is the eigenvector of `M` for `ρ`,
//! so `M^t (G z_0, z_0)' = (G ρ^t z_0, ρ^t z_0)'`; that identity is used
//! directly instead of iterating an unstable recursion that would amplify
//! rounding error by `|λ_SR|^t`. Use [`propagate`] to iterate `M` from an
//! arbitrary initial vector.
//!
//! Normal draws come from `ChaCha8Rng` (seeded with a 64-bit seed through
//! `seed_from_u64`) fed to the ziggurat sampler of `rand_distr::StandardNormal`.
//! Monte-Carlo path `i` uses stream `i` of the master seed.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::sig;
use crate::mechanism::{closed_loop_entries, InstrumentConvention, ModelParams, PolicyRule};
use crate::solvers::{
    anchor_inflation, discretion_solution, forward_projection, ramsey_rule_with,
    InitialConditionDiscount,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    #[serde(rename = "predetermined")]
    PredeterminedInstrument,
    #[serde(rename = "ramsey")]
    RamseyQuasiCommitment,
    #[serde(rename = "forward")]
    ForwardLookingInstrument,
    Discretion,
}

impl SolverMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverMode::PredeterminedInstrument => "predetermined",
            SolverMode::RamseyQuasiCommitment => "ramsey",
            SolverMode::ForwardLookingInstrument => "forward",
            SolverMode::Discretion => "discretion",
        }
    }

    pub fn is_forward_looking(self) -> bool {
        matches!(
            self,
            SolverMode::ForwardLookingInstrument | SolverMode::Discretion
        )
    }
}

impl std::str::FromStr for SolverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "predetermined" => Ok(SolverMode::PredeterminedInstrument),
            "ramsey" => Ok(SolverMode::RamseyQuasiCommitment),
            "forward" => Ok(SolverMode::ForwardLookingInstrument),
            "discretion" => Ok(SolverMode::Discretion),
            other => Err(Error::params(format!(
                "unknown mode '{other}' (expected predetermined, ramsey, forward or discretion)"
            ))),
        }
    }
}

impl std::fmt::Display for SolverMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What to simulate: the regime plus whatever inputs that regime needs.
///
/// `rule` and `x0` are required for the predetermined instrument; the
/// forward-looking instrument needs `rule` (with `f_z = 0`); Ramsey and
/// discretion compute their rule and ignore both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrfRequest {
    pub mode: SolverMode,
    pub rule: Option<PolicyRule>,
    pub z0: f64,
    pub x0: Option<f64>,
    pub ramsey_initial_condition: InitialConditionDiscount,
}

impl IrfRequest {
    pub fn new(mode: SolverMode, z0: f64) -> Self {
        Self {
            mode,
            rule: None,
            z0,
            x0: None,
            ramsey_initial_condition: InitialConditionDiscount::default(),
        }
    }

    pub fn predetermined(f_pi: f64, f_z: f64, x0: f64, z0: f64) -> Self {
        Self {
            rule: Some(PolicyRule::predetermined(f_pi, f_z)),
            x0: Some(x0),
            ..Self::new(SolverMode::PredeterminedInstrument, z0)
        }
    }

    pub fn ramsey(z0: f64) -> Self {
        Self::new(SolverMode::RamseyQuasiCommitment, z0)
    }

    pub fn forward(f_pi: f64, z0: f64) -> Self {
        Self {
            rule: Some(PolicyRule::forward_looking(f_pi)),
            ..Self::new(SolverMode::ForwardLookingInstrument, z0)
        }
    }

    pub fn discretion(z0: f64) -> Self {
        Self::new(SolverMode::Discretion, z0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrfPath {
    pub horizon: usize,
    pub pi: Vec<f64>,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub mode: SolverMode,
    pub rule: PolicyRule,
    /// `None` for expected paths.
    pub seed: Option<u64>,
}

impl IrfPath {
    pub fn from_series(
        mode: SolverMode,
        rule: PolicyRule,
        pi: Vec<f64>,
        x: Vec<f64>,
        z: Vec<f64>,
    ) -> Self {
        assert!(
            pi.len() == x.len() && x.len() == z.len(),
            "series lengths differ"
        );
        Self {
            horizon: pi.len(),
            pi,
            x,
            z,
            mode,
            rule,
            seed: None,
        }
    }

    pub fn len(&self) -> usize {
        self.horizon
    }

    pub fn is_empty(&self) -> bool {
        self.horizon == 0
    }

    /// Largest `|x_t − F_π π_t − F_z z_t|` along the path.
    pub fn rule_residual(&self) -> f64 {
        (0..self.horizon)
            .map(|t| (self.x[t] - self.rule.instrument(self.pi[t], self.z[t])).abs())
            .fold(0.0, f64::max)
    }

    /// Header `t,pi,x,z`, 12 significant digits, LF endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,pi,x,z")?;
        for t in 0..self.horizon {
            writeln!(
                out,
                "{},{},{},{}",
                t,
                sig(self.pi[t], 12),
                sig(self.x[t], 12),
                sig(self.z[t], 12)
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

/// How inflation evolves once the regime is resolved.
#[derive(Debug, Clone, Copy)]
enum Law {
    /// `π_{t+1} = a π_t + b z_t`.
    Recursion { a: f64, b: f64, pi0: f64 },
    /// `π_t = g z_t`.
    Projection { g: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Resolved {
    rule: PolicyRule,
    law: Law,
}

fn resolve(params: &ModelParams, req: &IrfRequest) -> Result<Resolved> {
    params.validate()?;
    if !req.z0.is_finite() {
        return Err(Error::params("z0 must be finite"));
    }
    match req.mode {
        SolverMode::PredeterminedInstrument => {
            let rule = req.rule.ok_or_else(|| {
                Error::params("predetermined-instrument mode needs a rule (fpi, fz)")
            })?;
            let x0 = req
                .x0
                .ok_or_else(|| Error::params("predetermined-instrument mode needs x0"))?;
            if rule.convention != InstrumentConvention::PredeterminedInstrument {
                return Err(Error::params(
                    "predetermined-instrument mode needs a predetermined rule",
                ));
            }
            rule.validate()?;
            let pi0 = anchor_inflation(&rule, x0, req.z0)?;
            let m = closed_loop_entries(params.beta, params.kappa, params.rho, rule.f_pi, rule.f_z);
            Ok(Resolved {
                rule,
                law: Law::Recursion {
                    a: m[0][0],
                    b: m[0][1],
                    pi0,
                },
            })
        }
        SolverMode::RamseyQuasiCommitment => {
            let sol = ramsey_rule_with(params, req.ramsey_initial_condition)?;
            let m = sol.transition(params);
            Ok(Resolved {
                rule: sol.rule(),
                law: Law::Recursion {
                    a: m[0][0],
                    b: m[0][1],
                    pi0: sol.pi0 * req.z0,
                },
            })
        }
        SolverMode::ForwardLookingInstrument => {
            let rule = req
                .rule
                .ok_or_else(|| Error::params("forward-looking mode needs a rule (fpi)"))?;
            if rule.f_z != 0.0 {
                return Err(Error::Identification(format!(
                    "forward-looking instrument requires f_z = 0, got {}",
                    rule.f_z
                )));
            }
            let rule = PolicyRule::forward_looking(rule.f_pi);
            let proj = forward_projection(params, rule.f_pi)?;
            Ok(Resolved {
                rule,
                law: Law::Projection { g: proj.g },
            })
        }
        SolverMode::Discretion => {
            let (rule, proj) = discretion_solution(params)?;
            Ok(Resolved {
                rule,
                law: Law::Projection { g: proj.g },
            })
        }
    }
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(Error::params("horizon must be at least 1"));
    }
    Ok(())
}

/// Runs the resolved law, drawing `σ_ε · N(0,1)` innovations when `rng` is given.
fn run(
    params: &ModelParams,
    req: &IrfRequest,
    resolved: &Resolved,
    horizon: usize,
    mut rng: Option<&mut ChaCha8Rng>,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut pi = Vec::with_capacity(horizon);
    let mut x = Vec::with_capacity(horizon);
    let mut z = Vec::with_capacity(horizon);
    let mut zt = req.z0;
    let mut pit = match resolved.law {
        Law::Recursion { pi0, .. } => pi0,
        Law::Projection { g } => g * zt,
    };
    for t in 0..horizon {
        pi.push(pit);
        z.push(zt);
        x.push(resolved.rule.instrument(pit, zt));
        if t + 1 == horizon {
            break;
        }
        let mut znext = params.rho * zt;
        if let Some(rng) = rng.as_deref_mut() {
            if params.sigma_eps != 0.0 {
                let draw: f64 = StandardNormal.sample(rng);
                znext += params.sigma_eps * draw;
            }
        }
        pit = match resolved.law {
            Law::Recursion { a, b, .. } => a * pit + b * zt,
            Law::Projection { g } => g * znext,
        };
        zt = znext;
    }
    (pi, x, z)
}

/// Expected impulse response to an initial shock `z0`.
pub fn expected_irf(params: &ModelParams, req: &IrfRequest, horizon: usize) -> Result<IrfPath> {
    check_horizon(horizon)?;
    let resolved = resolve(params, req)?;
    let (pi, x, z) = run(params, req, &resolved, horizon, None);
    Ok(IrfPath {
        horizon,
        pi,
        x,
        z,
        mode: req.mode,
        rule: resolved.rule,
        seed: None,
    })
}

/// One stochastic path with `z_{t+1} = ρ z_t + ε_{t+1}`.
///
/// Forward-looking regimes stay on `π_t = G z_t`; predetermined regimes
/// propagate inflation through the closed-loop recursion. With `σ_ε = 0` the
/// result equals [`expected_irf`] bit for bit.
pub fn simulate(
    params: &ModelParams,
    req: &IrfRequest,
    horizon: usize,
    seed: u64,
) -> Result<IrfPath> {
    check_horizon(horizon)?;
    let resolved = resolve(params, req)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pi, x, z) = run(params, req, &resolved, horizon, Some(&mut rng));
    Ok(IrfPath {
        horizon,
        pi,
        x,
        z,
        mode: req.mode,
        rule: resolved.rule,
        seed: Some(seed),
    })
}

/// Pathwise means and standard errors across a Monte-Carlo batch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub n_paths: usize,
    pub seed: u64,
    pub mean_pi: Vec<f64>,
    pub std_err_pi: Vec<f64>,
    pub mean_x: Vec<f64>,
    pub mean_z: Vec<f64>,
}

const MC_BATCH: usize = 1024;

/// Simulates `n_paths` paths in parallel; path `i` uses stream `i` of `seed`.
///
/// Batches are reduced in index order, so the result does not depend on the
/// thread count.
pub fn monte_carlo(
    params: &ModelParams,
    req: &IrfRequest,
    horizon: usize,
    n_paths: usize,
    seed: u64,
) -> Result<MonteCarloSummary> {
    check_horizon(horizon)?;
    if n_paths < 2 {
        return Err(Error::params("monte carlo needs at least 2 paths"));
    }
    let resolved = resolve(params, req)?;
    let n_batches = n_paths.div_ceil(MC_BATCH);
    // inflation is accumulated as a deviation from the expected path, so
    // deterministic periods get an exactly zero standard error
    let (shift, _, _) = run(params, req, &resolved, horizon, None);

    // per batch: sum dpi, sum dpi^2, sum x, sum z
    let partials: Vec<[Vec<f64>; 4]> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut acc = [
                vec![0.0; horizon],
                vec![0.0; horizon],
                vec![0.0; horizon],
                vec![0.0; horizon],
            ];
            let end = ((b + 1) * MC_BATCH).min(n_paths);
            for i in b * MC_BATCH..end {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let (pi, x, z) = run(params, req, &resolved, horizon, Some(&mut rng));
                for t in 0..horizon {
                    let d = pi[t] - shift[t];
                    acc[0][t] += d;
                    acc[1][t] += d * d;
                    acc[2][t] += x[t];
                    acc[3][t] += z[t];
                }
            }
            acc
        })
        .collect();

    let mut totals = [
        vec![0.0; horizon],
        vec![0.0; horizon],
        vec![0.0; horizon],
        vec![0.0; horizon],
    ];
    for part in &partials {
        for (tot, p) in totals.iter_mut().zip(part) {
            for (a, b) in tot.iter_mut().zip(p) {
                *a += b;
            }
        }
    }
    let n = n_paths as f64;
    let mean_pi: Vec<f64> = totals[0]
        .iter()
        .zip(&shift)
        .map(|(s, c)| c + s / n)
        .collect();
    let std_err_pi = totals[1]
        .iter()
        .zip(&totals[0])
        .map(|(ss, s)| {
            let var = ((ss - s * s / n) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        })
        .collect();
    Ok(MonteCarloSummary {
        n_paths,
        seed,
        mean_pi,
        std_err_pi,
        mean_x: totals[2].iter().map(|s| s / n).collect(),
        mean_z: totals[3].iter().map(|s| s / n).collect(),
    })
}

/// Iterates `(π, z)_{t+1} = M (π, z)_t` from an arbitrary initial vector.
pub fn propagate(m: [[f64; 2]; 2], pi0: f64, z0: f64, horizon: usize) -> (Vec<f64>, Vec<f64>) {
    let mut pi = Vec::with_capacity(horizon);
    let mut z = Vec::with_capacity(horizon);
    let (mut p, mut s) = (pi0, z0);
    for _ in 0..horizon {
        pi.push(p);
        z.push(s);
        (p, s) = (m[0][0] * p + m[0][1] * s, m[1][0] * p + m[1][1] * s);
    }
    (pi, z)
}

/// Largest violation of the commitment Euler equation `x_t = x_{t−1} − ε π_t`, `t ≥ 1`.
pub fn foc_residual(path: &IrfPath, epsilon: f64) -> f64 {
    (1..path.horizon)
        .map(|t| (path.x[t] - path.x[t - 1] + epsilon * path.pi[t]).abs())
        .fold(0.0, f64::max)
}

/// [`foc_residual`] restricted to expected Ramsey paths.
pub fn foc_recursion_check(path: &IrfPath, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    if path.mode != SolverMode::RamseyQuasiCommitment {
        return Err(Error::params(format!(
            "first-order conditions only hold on Ramsey paths, got {} mode",
            path.mode
        )));
    }
    if path.seed.is_some() {
        return Err(Error::params(
            "first-order check needs an expected (not simulated) path",
        ));
    }
    Ok(foc_residual(path, params.epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{anchor_inflation, ramsey_rule};
    use approx::assert_abs_diff_eq;
    use nalgebra::{Matrix2, Vector2};
    use proptest::prelude::*;

    fn table2() -> ModelParams {
        ModelParams::table2()
    }

    #[test]
    fn ramsey_first_step() {
        let p = table2();
        let path = expected_irf(&p, &IrfRequest::ramsey(1.0), 3).unwrap();
        assert_abs_diff_eq!(path.pi[0], 0.65, epsilon = 0.005);
        assert_eq!(path.z[1], 0.8);
        let s = ramsey_rule(&p).unwrap();
        let m = s.transition(&p);
        assert_eq!(path.pi[1], m[0][0] * path.pi[0] + m[0][1]);
        // with the rounded matrix and vector: 0.43 * 0.65 - 0.13 = 0.1495
        assert_abs_diff_eq!(path.pi[1], 0.1495, epsilon = 0.005);
        assert_abs_diff_eq!(path.x[0], s.x0_star, epsilon = 1e-12);
    }

    #[test]
    fn steady_state_is_zero() {
        let path = expected_irf(
            &table2(),
            &IrfRequest::predetermined(4.51, -6.83, 0.0, 0.0),
            10,
        )
        .unwrap();
        assert!(path
            .pi
            .iter()
            .chain(&path.x)
            .chain(&path.z)
            .all(|v| *v == 0.0));
    }

    #[test]
    fn discretion_tracks_projection() {
        let p = table2();
        let path = expected_irf(&p, &IrfRequest::discretion(1.0), 6).unwrap();
        let g = 1.0 / (1.0 - p.beta * p.rho + p.kappa * p.epsilon);
        for t in 0..6 {
            assert_abs_diff_eq!(path.pi[t], g * 0.8f64.powi(t as i32), epsilon = 1e-9);
            assert_abs_diff_eq!(path.pi[t], 1.03 * 0.8f64.powi(t as i32), epsilon = 0.005);
        }
        // iterating the unstable matrix from the exact eigenvector agrees for short horizons
        let m = closed_loop_entries(p.beta, p.kappa, p.rho, -p.epsilon, 0.0);
        let (pi, _) = propagate(m, g, 1.0, 6);
        for (a, b) in pi.iter().zip(&path.pi) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-9);
        }
    }

    #[test]
    fn mode_input_mismatch() {
        let p = table2();
        let mut req = IrfRequest::new(SolverMode::PredeterminedInstrument, 1.0);
        assert!(matches!(
            expected_irf(&p, &req, 5),
            Err(Error::InvalidParams(_))
        ));
        req.rule = Some(PolicyRule::predetermined(4.0, 0.0));
        assert!(matches!(
            expected_irf(&p, &req, 5),
            Err(Error::InvalidParams(_))
        ));
        let zero_fpi = IrfRequest::predetermined(0.0, 1.0, 1.0, 1.0);
        assert_eq!(
            expected_irf(&p, &zero_fpi, 5),
            Err(Error::NonInvertibleRule)
        );
        assert!(matches!(
            expected_irf(
                &p,
                &IrfRequest::new(SolverMode::ForwardLookingInstrument, 1.0),
                5
            ),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            expected_irf(&p, &IrfRequest::forward(4.51, 1.0), 5),
            Err(Error::NotDeterminateUnderConvention(_))
        ));
        assert!(expected_irf(&p, &IrfRequest::ramsey(1.0), 0).is_err());
    }

    #[test]
    fn zero_noise_simulation_matches_expected() {
        let mut p = table2();
        p.sigma_eps = 0.0;
        for req in [
            IrfRequest::ramsey(1.0),
            IrfRequest::discretion(1.0),
            IrfRequest::forward(-3.0, 0.5),
            IrfRequest::predetermined(4.0, -2.0, 0.3, 1.0),
        ] {
            let e = expected_irf(&p, &req, 30).unwrap();
            let s = simulate(&p, &req, 30, 99).unwrap();
            assert_eq!(e.pi, s.pi);
            assert_eq!(e.x, s.x);
            assert_eq!(e.z, s.z);
        }
    }

    #[test]
    fn seeded_simulation_is_deterministic() {
        let p = table2();
        let a = simulate(&p, &IrfRequest::ramsey(1.0), 50, 7).unwrap();
        let b = simulate(&p, &IrfRequest::ramsey(1.0), 50, 7).unwrap();
        let c = simulate(&p, &IrfRequest::ramsey(1.0), 50, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.z, c.z);
        assert!(a.rule_residual() == 0.0);
        // z follows its AR(1) law exactly up to the drawn innovations: shock-free z is ρ z
        let d = simulate(&p, &IrfRequest::discretion(1.0), 20, 3).unwrap();
        for t in 0..20 {
            assert_abs_diff_eq!(d.pi[t], 1.027_749_229_188_078 * d.z[t], epsilon = 1e-12);
        }
    }

    #[test]
    fn monte_carlo_is_thread_count_independent() {
        let p = table2();
        let req = IrfRequest::ramsey(1.0);
        let a = monte_carlo(&p, &req, 5, 3000, 11).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| monte_carlo(&p, &req, 5, 3000, 11).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn foc_checks() {
        let p = table2();
        let ramsey = expected_irf(&p, &IrfRequest::ramsey(1.0), 50).unwrap();
        assert!(foc_recursion_check(&ramsey, &p).unwrap() <= 1e-8);

        // independent oracle: x_t = x_{t-1} - ε π_t seeded with x*_0, state by state
        let mut x = ramsey.x[0];
        for t in 1..50 {
            x -= p.epsilon * ramsey.pi[t];
            assert_abs_diff_eq!(x, ramsey.x[t], epsilon = 1e-10);
        }

        let zero = IrfPath::from_series(
            SolverMode::RamseyQuasiCommitment,
            PolicyRule::predetermined(1.0, 0.0),
            vec![0.0; 4],
            vec![0.0; 4],
            vec![0.0; 4],
        );
        assert_eq!(foc_recursion_check(&zero, &p).unwrap(), 0.0);

        let disc = expected_irf(&p, &IrfRequest::discretion(1.0), 50).unwrap();
        assert!(foc_residual(&disc, p.epsilon) > 0.01);
        assert!(foc_recursion_check(&disc, &p).is_err());
    }

    #[test]
    fn ramsey_initial_vector_matches_rule_inversion() {
        let p = table2();
        let s = ramsey_rule(&p).unwrap();
        let anchored = anchor_inflation(&s.rule(), s.x0_star, 1.0).unwrap();
        assert_abs_diff_eq!(anchored, s.pi0, epsilon = 1e-9);
    }

    #[test]
    fn csv_layout() {
        let path = expected_irf(&table2(), &IrfRequest::ramsey(1.0), 3).unwrap();
        let csv = path.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,pi,x,z");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,0.650139587595,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn forward_paths_are_fragile_off_the_eigenvector() {
        let p = table2();
        let m = closed_loop_entries(p.beta, p.kappa, p.rho, -6.0, 0.0);
        let g = 1.0 / (1.0 - p.kappa * -6.0 - p.rho * p.beta);
        let delta = 1e-6;
        let (pi, z) = propagate(m, g + delta, 1.0, 15);
        for t in 0..15 {
            let gap = pi[t] - g * z[t];
            let predicted = m[0][0].powi(t as i32) * delta;
            assert!((gap - predicted).abs() <= 1e-6 * predicted.abs() + 1e-12);
        }
    }

    fn nkpc_params() -> impl Strategy<Value = ModelParams> {
        (
            0.5..0.999f64,
            0.01..1.0f64,
            0.05..0.95f64,
            1.1..20.0f64,
            0.1..1.0f64,
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
        fn recursion_matches_matrix_power(a in -1.5..1.5f64, b in -3.0..3.0f64, rho in 0.0..0.99f64, pi0 in -2.0..2.0f64, z0 in -2.0..2.0f64) {
            let m = [[a, b], [0.0, rho]];
            let (pi, z) = propagate(m, pi0, z0, 101);
            let mat = Matrix2::new(a, b, 0.0, rho);
            let v = Vector2::new(pi0, z0);
            let scale = 1.0 + a.abs().max(rho).powi(100) * (pi0.abs() + z0.abs()) * (1.0 + b.abs());
            for t in [0usize, 1, 7, 50, 100] {
                let w = mat.pow(t as u32) * v;
                prop_assert!((w[0] - pi[t]).abs() <= 1e-10 * scale * (t as f64 + 1.0));
                prop_assert!((w[1] - z[t]).abs() <= 1e-10 * scale);
            }
        }

        #[test]
        fn rule_holds_and_predetermined_paths_decay(p in nkpc_params(), offset in 0.05..0.95f64, f_z in -5.0..5.0f64, x0 in -2.0..2.0f64) {
            // F_π strictly inside the negative-feedback interval
            let lo = (1.0 - p.beta) / p.kappa;
            let hi = (1.0 + p.beta) / p.kappa;
            let f_pi = lo + offset * (hi - lo);
            let path = expected_irf(&p, &IrfRequest::predetermined(f_pi, f_z, x0, 1.0), 200).unwrap();
            prop_assert!(path.rule_residual() <= 1e-9 * (1.0 + path.x.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
            let lam = (1.0 - p.kappa * f_pi) / p.beta;
            let r = lam.abs().max(p.rho);
            // |π_t| ≤ |π_0| r^t + |b| t r^(t−1), tight in the repeated-root case
            let b = (1.0 + p.kappa * f_z.abs()) / p.beta;
            for t in 0..200 {
                let forced = if t == 0 { 0.0 } else { b * t as f64 * r.powi(t as i32 - 1) };
                let bound = path.pi[0].abs() * r.powi(t as i32) + forced;
                prop_assert!(path.pi[t].abs() <= bound * (1.0 + 1e-9) + 1e-12);
            }
        }

        #[test]
        fn ramsey_foc_holds_for_random_params(p in nkpc_params()) {
            let path = expected_irf(&p, &IrfRequest::ramsey(1.0), 60).unwrap();
            let scale = path.x.iter().chain(&path.pi).fold(1.0f64, |m, v| m.max(v.abs()));
            prop_assert!(foc_recursion_check(&path, &p).unwrap() <= 1e-8 * scale);
        }
    }
}
