//! The `nkpc` command-line front end.
//!
//! Subcommands: `solve`, `irf`, `sweep`, `classify`, `stress`, `table2`.
//! Each reads an optional JSON config (`--config`) whose values are
//! overridden by flags. Model parameters default to the baseline calibration
//! (`β = 0.99, κ = 0.1275, ρ = 0.8, ε = 6, q = 1, σ_ε = 1`).
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 on an internal
//! inconsistency. Failures print a single `error[kind]: message` line on
//! standard error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::determinacy::{
    bifurcation_at, negative_feedback_interval, sweep, BoundarySide, FeedbackClass, SweepAxis,
    SweepMode, SweepRow,
};
use crate::error::{Error, Result};
use crate::fmt::sig;
use crate::irf::{expected_irf, simulate, IrfRequest, SolverMode};
use crate::lre::{classify_system, DEFAULT_UNIT_TOL};
use crate::mechanism::{
    closed_loop_inflation_eigenvalue, closed_loop_unchecked, InstrumentConvention, ModelParams,
    PolicyRule,
};
use crate::robustness::misspecification_stress;
use crate::solvers::{anchor_inflation, discretion_solution, forward_projection, ramsey_rule};

pub const DEFAULT_HORIZON: usize = 40;

/// Validated inputs for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub mode: SolverMode,
    /// Set for the predetermined and forward-looking modes.
    pub rule: Option<PolicyRule>,
    pub x0: Option<f64>,
    pub z0: f64,
    pub horizon: usize,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn request(&self) -> IrfRequest {
        IrfRequest {
            rule: self.rule,
            x0: self.x0,
            ..IrfRequest::new(self.mode, self.z0)
        }
    }
}

/// Unvalidated key/value inputs, as read from a config file or flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub beta: Option<f64>,
    pub kappa: Option<f64>,
    pub rho: Option<f64>,
    pub sigma_eps: Option<f64>,
    pub epsilon: Option<f64>,
    pub q: Option<f64>,
    pub mode: Option<String>,
    pub fpi: Option<f64>,
    pub fz: Option<f64>,
    pub x0: Option<f64>,
    pub z0: Option<f64>,
    pub horizon: Option<u64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl RawConfig {
    /// Reads known keys from a JSON object; unknown keys are ignored. Returns
    /// every type error found.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::params("config must be a JSON object"))?;
        let mut bad = Vec::new();
        let num = |key: &str, bad: &mut Vec<String>| -> Option<f64> {
            match obj.get(key) {
                None | Some(Value::Null) => None,
                Some(Value::Number(n)) => n.as_f64(),
                Some(other) => {
                    bad.push(format!("{key} must be a number, got {other}"));
                    None
                }
            }
        };
        let int = |key: &str, bad: &mut Vec<String>| -> Option<u64> {
            match obj.get(key) {
                None | Some(Value::Null) => None,
                Some(v) => match v.as_u64() {
                    Some(n) => Some(n),
                    None => {
                        bad.push(format!("{key} must be a non-negative integer, got {v}"));
                        None
                    }
                },
            }
        };
        let raw = RawConfig {
            beta: num("beta", &mut bad),
            kappa: num("kappa", &mut bad),
            rho: num("rho", &mut bad),
            sigma_eps: num("sigma_eps", &mut bad),
            epsilon: num("epsilon", &mut bad),
            q: num("q", &mut bad),
            mode: match obj.get("mode") {
                None | Some(Value::Null) => None,
                Some(Value::String(s)) => Some(s.clone()),
                Some(other) => {
                    bad.push(format!("mode must be a string, got {other}"));
                    None
                }
            },
            fpi: num("fpi", &mut bad),
            fz: num("fz", &mut bad),
            x0: num("x0", &mut bad),
            z0: num("z0", &mut bad),
            horizon: int("horizon", &mut bad),
            seed: int("seed", &mut bad),
            output: match obj.get("output") {
                Some(Value::String(s)) => Some(PathBuf::from(s)),
                _ => None,
            },
        };
        if bad.is_empty() {
            Ok(raw)
        } else {
            Err(Error::InvalidParams(bad))
        }
    }

    /// Values set in `top` win.
    pub fn overlay(self, top: RawConfig) -> RawConfig {
        RawConfig {
            beta: top.beta.or(self.beta),
            kappa: top.kappa.or(self.kappa),
            rho: top.rho.or(self.rho),
            sigma_eps: top.sigma_eps.or(self.sigma_eps),
            epsilon: top.epsilon.or(self.epsilon),
            q: top.q.or(self.q),
            mode: top.mode.or(self.mode),
            fpi: top.fpi.or(self.fpi),
            fz: top.fz.or(self.fz),
            x0: top.x0.or(self.x0),
            z0: top.z0.or(self.z0),
            horizon: top.horizon.or(self.horizon),
            seed: top.seed.or(self.seed),
            output: top.output.or(self.output),
        }
    }

    /// Validates everything a path-producing run needs.
    pub fn validate(&self) -> Result<RunConfig> {
        self.validate_for(true)
    }

    /// With `needs_x0 = false` the predetermined mode does not require `x0`
    /// (sweeps and classification never anchor a path).
    fn validate_for(&self, needs_x0: bool) -> Result<RunConfig> {
        let base = ModelParams::table2();
        let params = ModelParams {
            beta: self.beta.unwrap_or(base.beta),
            kappa: self.kappa.unwrap_or(base.kappa),
            rho: self.rho.unwrap_or(base.rho),
            sigma_eps: self.sigma_eps.unwrap_or(1.0),
            epsilon: self.epsilon.unwrap_or(base.epsilon),
            q: self.q.unwrap_or(1.0),
        };
        let mut bad = params.violations();

        let mode = match self.mode.as_deref() {
            None => {
                bad.push("mode is required (predetermined, ramsey, forward or discretion)".into());
                None
            }
            Some(s) => match s.parse::<SolverMode>() {
                Ok(m) => Some(m),
                Err(Error::InvalidParams(v)) => {
                    bad.extend(v);
                    None
                }
                Err(e) => return Err(e),
            },
        };

        for (key, v) in [
            ("fpi", self.fpi),
            ("fz", self.fz),
            ("x0", self.x0),
            ("z0", self.z0),
        ] {
            if let Some(v) = v {
                if !v.is_finite() {
                    bad.push(format!("{key} must be finite, got {v}"));
                }
            }
        }
        let horizon = self.horizon.unwrap_or(DEFAULT_HORIZON as u64);
        if horizon == 0 {
            bad.push("horizon must be at least 1".into());
        }

        let rule = match mode {
            Some(SolverMode::PredeterminedInstrument) => {
                if needs_x0 && self.x0.is_none() {
                    bad.push("predetermined mode requires x0".into());
                }
                match self.fpi {
                    Some(f_pi) => Some(PolicyRule::predetermined(f_pi, self.fz.unwrap_or(0.0))),
                    None => {
                        bad.push("predetermined mode requires fpi".into());
                        None
                    }
                }
            }
            Some(SolverMode::ForwardLookingInstrument) => match self.fpi {
                Some(f_pi) => Some(PolicyRule {
                    f_pi,
                    f_z: self.fz.unwrap_or(0.0),
                    convention: InstrumentConvention::ForwardLookingInstrument,
                }),
                None => {
                    bad.push("forward mode requires fpi".into());
                    None
                }
            },
            _ => None,
        };

        if !bad.is_empty() {
            return Err(Error::InvalidParams(bad));
        }
        Ok(RunConfig {
            params,
            mode: mode.expect("checked above"),
            rule,
            x0: self.x0,
            z0: self.z0.unwrap_or(1.0),
            horizon: horizon as usize,
            seed: self.seed,
            output_path: self.output.clone(),
        })
    }
}

fn read_raw(path: &Path) -> Result<RawConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::params(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::params(format!("config {} is not valid JSON: {e}", path.display())))?;
    RawConfig::from_json(&value)
}

/// Reads and validates a JSON config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    read_raw(path)?.validate()
}

#[derive(Debug, Parser)]
#[command(
    name = "nkpc",
    version,
    about = "Monetary-policy rules on the new-Keynesian Phillips curve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the configured regime and print the solution record as JSON.
    Solve(ModelArgs),
    /// Write the impulse response as CSV (simulated when a seed is given).
    Irf(ModelArgs),
    /// Sweep one parameter and write the feedback classification as CSV.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// fpi, beta, kappa, rho, q or epsilon.
        #[arg(long, default_value = "fpi")]
        axis: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Print the feedback and Blanchard-Kahn classification as JSON.
    Classify(ModelArgs),
    /// Misspecification stress test, one CSV row per perturbed parameter triple.
    Stress {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.01)]
        radius: f64,
        /// Grid points per axis.
        #[arg(long = "grid-steps", default_value_t = 3)]
        grid_steps: usize,
        /// Divergence threshold; defaults to 10 times the initial inflation response.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Reproduce the baseline calibration table and print a pass/fail diff.
    Table2,
}

#[derive(Debug, Args, Default)]
struct ModelArgs {
    /// JSON config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    #[arg(long)]
    sigma_eps: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// predetermined, ramsey, forward or discretion.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    fpi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    fz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    z0: Option<f64>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write output here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl ModelArgs {
    fn raw(&self) -> Result<RawConfig> {
        let flags = RawConfig {
            beta: self.beta,
            kappa: self.kappa,
            rho: self.rho,
            sigma_eps: self.sigma_eps,
            epsilon: self.epsilon,
            q: self.q,
            mode: self.mode.clone(),
            fpi: self.fpi,
            fz: self.fz,
            x0: self.x0,
            z0: self.z0,
            horizon: self.horizon,
            seed: self.seed,
            output: self.output.clone(),
        };
        Ok(match &self.config {
            Some(path) => read_raw(path)?.overlay(flags),
            None => flags,
        })
    }
}

/// Runs the CLI against the process streams and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = writeln!(
                        err,
                        "error[usage]: a subcommand is required \
                         (solve, irf, sweep, classify, stress, table2)"
                    );
                    1
                }
                _ => {
                    let text = e.render().to_string();
                    let line = text.lines().next().unwrap_or("invalid arguments");
                    let line = line.strip_prefix("error: ").unwrap_or(line);
                    let _ = writeln!(err, "error[usage]: {line}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", diagnostic(&e));
            exit_code(&e)
        }
    }
}

/// One-line `error[kind]: message` rendering.
pub fn diagnostic(e: &Error) -> String {
    format!("error[{}]: {}", e.kind(), e).replace('\n', " ")
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => 2,
        _ => 1,
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve(args) => {
            let cfg = args.raw()?.validate()?;
            let record = solve_record(&cfg)?;
            emit(&pretty(&record), cfg.output_path.as_deref(), out)?;
        }
        Command::Irf(args) => {
            let cfg = args.raw()?.validate()?;
            let req = cfg.request();
            let path = match cfg.seed {
                Some(seed) => simulate(&cfg.params, &req, cfg.horizon, seed)?,
                None => expected_irf(&cfg.params, &req, cfg.horizon)?,
            };
            emit(&path.to_csv(), cfg.output_path.as_deref(), out)?;
        }
        Command::Sweep {
            model,
            axis,
            from,
            to,
            steps,
        } => {
            let axis: SweepAxis = axis.parse()?;
            let mut raw = model.raw()?;
            if axis == SweepAxis::FPi && raw.fpi.is_none() {
                raw.fpi = Some(from);
            }
            let cfg = raw.validate_for(false)?;
            let mode = match cfg.mode {
                SolverMode::RamseyQuasiCommitment => SweepMode::Ramsey,
                SolverMode::Discretion => SweepMode::Discretion,
                _ => SweepMode::SimpleRule {
                    f_pi: cfg.rule.expect("validated").f_pi,
                },
            };
            let rows = sweep(&cfg.params, axis, from, to, steps, mode)?;
            emit(&sweep_csv(axis, &rows), cfg.output_path.as_deref(), out)?;
        }
        Command::Classify(args) => {
            let cfg = args.raw()?.validate_for(false)?;
            let record = classify_record(&cfg)?;
            emit(&pretty(&record), cfg.output_path.as_deref(), out)?;
        }
        Command::Stress {
            model,
            radius,
            grid_steps,
            threshold,
        } => {
            let cfg = model.raw()?.validate()?;
            let report = misspecification_stress(
                &cfg.params,
                &cfg.request(),
                radius,
                grid_steps,
                cfg.horizon,
                threshold,
            )?;
            emit(&report.to_csv(), cfg.output_path.as_deref(), out)?;
        }
        Command::Table2 => {
            let checks = table2_checks()?;
            let text = render_table2(&checks);
            write_out(out, &text)?;
            if checks.iter().any(|c| !c.pass) {
                return Err(Error::Internal("baseline table reproduction failed".into()));
            }
        }
    }
    Ok(0)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::params(format!("cannot write output: {e}")))
}

/// Writes to `path` if given (and echoes the path), otherwise to `out`.
fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => {
            fs::write(p, text)
                .map_err(|e| Error::params(format!("cannot write {}: {e}", p.display())))?;
            write_out(out, &format!("{}\n", p.display()))
        }
        None => write_out(out, text),
    }
}

/// Solution record; it carries every config key so it can be fed back to `irf`.
pub fn solve_record(cfg: &RunConfig) -> Result<Value> {
    let p = &cfg.params;
    let z0 = cfg.z0;
    let mut rec = config_keys(cfg);
    let (lambda, f_pi, f_z, x0, pi0, system) = match cfg.mode {
        SolverMode::RamseyQuasiCommitment => {
            let sol = ramsey_rule(p)?;
            rec.insert("gamma0".into(), json!(sol.gamma0 * z0));
            let system = closed_loop_unchecked(sol.discount, p.kappa, p.rho, &sol.rule())?;
            (
                sol.lambda,
                sol.f_pi_star,
                sol.f_z_star,
                sol.x0_star * z0,
                sol.pi0 * z0,
                system,
            )
        }
        SolverMode::Discretion | SolverMode::ForwardLookingInstrument => {
            let (rule, proj) = if cfg.mode == SolverMode::Discretion {
                discretion_solution(p)?
            } else {
                let rule = cfg.rule.expect("validated");
                if rule.f_z != 0.0 {
                    return Err(Error::Identification(format!(
                        "forward-looking instrument requires fz = 0, got {}",
                        rule.f_z
                    )));
                }
                (rule, forward_projection(p, rule.f_pi)?)
            };
            rec.insert("g".into(), json!(proj.g));
            let system = closed_loop_unchecked(p.beta, p.kappa, p.rho, &rule)?;
            (
                proj.lambda_sr,
                rule.f_pi,
                0.0,
                proj.x_coefficient * z0,
                proj.g * z0,
                system,
            )
        }
        SolverMode::PredeterminedInstrument => {
            let rule = cfg.rule.expect("validated");
            let x0 = cfg.x0.expect("validated");
            let pi0 = anchor_inflation(&rule, x0, z0)?;
            let system = closed_loop_unchecked(p.beta, p.kappa, p.rho, &rule)?;
            (
                closed_loop_inflation_eigenvalue(p, rule.f_pi),
                rule.f_pi,
                rule.f_z,
                x0,
                pi0,
                system,
            )
        }
    };
    rec.insert("lambda".into(), json!(lambda));
    rec.insert("fpi".into(), json!(f_pi));
    rec.insert("fz".into(), json!(f_z));
    rec.insert("x0".into(), json!(x0));
    rec.insert("pi0".into(), json!(pi0));
    rec.insert(
        "feedback".into(),
        json!(FeedbackClass::of_eigenvalue(lambda).as_str()),
    );
    rec.insert(
        "determinacy".into(),
        json!(classify_system(&system, DEFAULT_UNIT_TOL)?.as_str()),
    );
    Ok(Value::Object(rec))
}

fn config_keys(cfg: &RunConfig) -> Map<String, Value> {
    let p = &cfg.params;
    let mut rec = Map::new();
    rec.insert("beta".into(), json!(p.beta));
    rec.insert("kappa".into(), json!(p.kappa));
    rec.insert("rho".into(), json!(p.rho));
    rec.insert("sigma_eps".into(), json!(p.sigma_eps));
    rec.insert("epsilon".into(), json!(p.epsilon));
    rec.insert("q".into(), json!(p.q));
    rec.insert("mode".into(), json!(cfg.mode.as_str()));
    rec.insert("z0".into(), json!(cfg.z0));
    rec.insert("horizon".into(), json!(cfg.horizon));
    if let Some(seed) = cfg.seed {
        rec.insert("seed".into(), json!(seed));
    }
    rec
}

/// Feedback class, bifurcation endpoints and Blanchard-Kahn verdict.
pub fn classify_record(cfg: &RunConfig) -> Result<Value> {
    let p = &cfg.params;
    let (f_pi, lambda, system) = match cfg.mode {
        SolverMode::RamseyQuasiCommitment => {
            let sol = ramsey_rule(p)?;
            let system = closed_loop_unchecked(sol.discount, p.kappa, p.rho, &sol.rule())?;
            (sol.f_pi_star, sol.lambda, system)
        }
        SolverMode::Discretion => {
            let rule = PolicyRule::forward_looking(-p.epsilon);
            let system = closed_loop_unchecked(p.beta, p.kappa, p.rho, &rule)?;
            (
                rule.f_pi,
                closed_loop_inflation_eigenvalue(p, rule.f_pi),
                system,
            )
        }
        _ => {
            let rule = cfg.rule.expect("validated");
            let system = closed_loop_unchecked(p.beta, p.kappa, p.rho, &rule)?;
            (
                rule.f_pi,
                closed_loop_inflation_eigenvalue(p, rule.f_pi),
                system,
            )
        }
    };
    let nf = negative_feedback_interval(p)?;
    let lower = bifurcation_at(p, BoundarySide::Lower)?;
    let upper = bifurcation_at(p, BoundarySide::Upper)?;
    let convention = if cfg.mode.is_forward_looking() {
        "forward_looking"
    } else {
        "predetermined"
    };
    Ok(json!({
        "mode": cfg.mode.as_str(),
        "convention": convention,
        "fpi": f_pi,
        "lambda": lambda,
        "feedback": FeedbackClass::of_eigenvalue(lambda).as_str(),
        "determinacy": classify_system(&system, DEFAULT_UNIT_TOL)?.as_str(),
        "negative_feedback_interval": [nf.lower, nf.upper],
        "lower_bifurcation": lower.kind.as_str(),
        "upper_bifurcation": upper.kind.as_str(),
    }))
}

fn sweep_csv(axis: SweepAxis, rows: &[SweepRow]) -> String {
    let mut s = format!(
        "{},eigenvalue,f_pi,classification,bifurcation,in_reduced_form_set\n",
        axis.as_str()
    );
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig(r.axis_value, 12),
            sig(r.eigenvalue, 12),
            sig(r.f_pi, 12),
            r.classification.as_str(),
            r.bifurcation.map(|b| b.as_str()).unwrap_or(""),
            r.in_reduced_form_set
                .map(|b| b.to_string())
                .unwrap_or_default(),
        ));
    }
    s
}

/// One row of the baseline table diff, compared at two decimals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2Check {
    pub quantity: &'static str,
    pub expected: f64,
    pub computed: f64,
    pub pass: bool,
}

fn check(quantity: &'static str, expected: f64, computed: f64) -> Table2Check {
    let cents = |v: f64| (v * 100.0).round() as i64;
    Table2Check {
        quantity,
        expected,
        computed,
        pass: cents(expected) == cents(computed),
    }
}

/// Recomputes the baseline table at `β=0.99, κ=0.1275, ρ=0.8, ε=6, q=1`.
pub fn table2_checks() -> Result<Vec<Table2Check>> {
    let p = ModelParams::table2();
    let sol = ramsey_rule(&p)?;
    let m = sol.transition(&p);
    let (rule, proj) = discretion_solution(&p)?;
    Ok(vec![
        check("ramsey eigenvalue", 0.43, sol.lambda),
        check("ramsey transition (1,1)", 0.43, m[0][0]),
        check("ramsey transition (1,2)", -0.13, m[0][1]),
        check("ramsey transition (2,1)", 0.0, m[1][0]),
        check("ramsey transition (2,2)", 0.8, m[1][1]),
        check("ramsey initial pi0/z0", 0.65, sol.pi0),
        check("ramsey initial z0", 1.0, 1.0),
        check("ramsey f_pi", 4.51, sol.f_pi_star),
        check("discretion f_pi", -6.0, rule.f_pi),
        check("discretion eigenvalue", 1.78, proj.lambda_sr),
        check("discretion projection g", 1.03, proj.g),
        check("discretion projection z", 1.0, 1.0),
    ])
}

pub fn render_table2(checks: &[Table2Check]) -> String {
    let mut s = format!(
        "{:<28}{:>10}{:>10}  status\n",
        "quantity", "expected", "computed"
    );
    for c in checks {
        s.push_str(&format!(
            "{:<28}{:>10.2}{:>10.2}  {}\n",
            c.quantity,
            c.expected,
            c.computed,
            if c.pass { "pass" } else { "FAIL" }
        ));
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    s.push_str(&format!("{passed} of {} checks pass\n", checks.len()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["nkpc"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn table2_passes() {
        let (code, out, _) = run_args(&["table2"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("12 of 12 checks pass"));
        assert!(out.contains("-0.13"));
    }

    #[test]
    fn solve_discretion() {
        let (code, out, _) = run_args(&["solve", "--mode", "discretion"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["fpi"], json!(-6.0));
        assert!((v["g"].as_f64().unwrap() - 1.0277).abs() < 5e-3);
        assert_eq!(v["determinacy"], json!("determinate"));
    }

    #[test]
    fn zero_horizon_is_rejected() {
        let (code, out, err) = run_args(&["irf", "--mode", "ramsey", "--horizon", "0"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
        assert!(err.starts_with("error[invalid_params]: "));
    }

    #[test]
    fn all_violations_listed() {
        let raw =
            RawConfig::from_json(&json!({"beta": 1.2, "epsilon": 1.0, "mode": "predetermined"}))
                .unwrap();
        let msg = raw.validate().unwrap_err().to_string();
        assert!(msg.contains("beta must lie in (0,1)"), "{msg}");
        assert!(msg.contains("epsilon must exceed 1"), "{msg}");
        assert!(msg.contains("requires x0"), "{msg}");
        assert!(msg.contains("requires fpi"), "{msg}");
    }

    #[test]
    fn type_errors_listed() {
        let e = RawConfig::from_json(&json!({"beta": "x", "horizon": -3, "extra": 1})).unwrap_err();
        match e {
            Error::InvalidParams(v) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flags_override_file() {
        let file = RawConfig {
            beta: Some(0.5),
            mode: Some("ramsey".into()),
            ..Default::default()
        };
        let flags = RawConfig {
            beta: Some(0.9),
            ..Default::default()
        };
        let cfg = file.overlay(flags).validate().unwrap();
        assert_eq!(cfg.params.beta, 0.9);
        assert_eq!(cfg.horizon, DEFAULT_HORIZON);
        assert_eq!(cfg.params.q, 1.0);
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, _, err) = run_args(&["bogus"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error[usage]"));
        let (code, _, _) = run_args(&["irf", "--mode", "forward", "--fpi", "4"]);
        assert_eq!(code, 1);
        let (code, _, err) = run_args(&["irf", "--mode", "forward", "--fpi", "-6", "--fz", "1"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error[identification]"));
    }

    #[test]
    fn sweep_and_classify() {
        let (code, out, _) = run_args(&[
            "sweep",
            "--mode",
            "predetermined",
            "--from",
            "0",
            "--to",
            "16",
            "--steps",
            "161",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1 + 163);
        let (code, out, _) = run_args(&["classify", "--mode", "predetermined", "--fpi", "4.51"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["feedback"], json!("negative_feedback"));
        assert_eq!(v["lower_bifurcation"], json!("saddle_node"));
    }
}
