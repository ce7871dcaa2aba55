//! Misspecified transmission: a forward-looking solution leaves its stable
//! manifold under any perturbation of κ, a negative-feedback rule does not.

use nkpc::robustness::compensated_run;
use nkpc::{
    compensating_kappa, compensating_kappa_with, discretion_solution, misspecification_stress,
    stress_grid, IrfRequest, KappaFormula, ModelParams, PerturbationGrid, PointOutcome,
};

fn main() -> nkpc::Result<()> {
    let p = ModelParams::table2();
    let (_, proj) = discretion_solution(&p)?;
    println!(
        "compensating kappa: {:.6} (sign-flipped variant {:.6})",
        compensating_kappa(-p.epsilon, proj.g, p.rho, p.beta)?,
        compensating_kappa_with(KappaFormula::SignFlipped, -p.epsilon, proj.g, p.rho, p.beta)?
    );

    let grid = PerturbationGrid::kappa_only(&[-0.01, -0.001, 0.001, 0.01]);
    for (name, req) in [
        ("discretion", IrfRequest::discretion(1.0)),
        ("ramsey", IrfRequest::ramsey(1.0)),
    ] {
        let r = stress_grid(&p, &req, &grid, 40, None)?;
        println!(
            "{name}: regime {}, stable fraction {}",
            r.regime, r.stable_fraction
        );
        for pt in &r.points {
            if let PointOutcome::Evaluated {
                divergence_horizon,
                growth_ratio,
                perturbed_eigenvalue,
                ..
            } = pt.outcome
            {
                println!(
                    "  dkappa {:+.3}: diverges at {:?}, gap ratio {:.4}, perturbed root {:.4}",
                    pt.dkappa,
                    divergence_horizon,
                    growth_ratio.unwrap_or(0.0),
                    perturbed_eigenvalue
                );
            }
        }
    }

    let cube = misspecification_stress(&p, &IrfRequest::ramsey(1.0), 0.01, 5, 200, None)?;
    println!(
        "Ramsey over a 5x5x5 cube of radius 0.01: stable fraction {}",
        cube.stable_fraction
    );

    let run = compensated_run(&p, -p.epsilon, 0.12, 1.0, 30)?;
    println!(
        "on the compensating manifold (kappa 0.12, beta {:.5}): max gap {:.2e}",
        run.beta, run.max_gap
    );
    Ok(())
}
