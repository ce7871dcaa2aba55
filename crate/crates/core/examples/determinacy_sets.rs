//! Determinacy sets of `F_π` and a sweep that locates both bifurcations.

use nkpc::{
    bifurcation_at, discretion_reduced_form_interval, negative_feedback_interval,
    ramsey_reduced_form_interval, sweep, BoundarySide, ModelParams, SweepAxis, SweepMode,
};

fn main() -> nkpc::Result<()> {
    let p = ModelParams::table2();
    let nf = negative_feedback_interval(&p)?;
    println!(
        "negative feedback F_pi in ({:.5}, {:.5})",
        nf.lower, nf.upper
    );
    for side in [BoundarySide::Lower, BoundarySide::Upper] {
        let b = bifurcation_at(&p, side)?;
        println!(
            "  {:?} endpoint {:.5}: {} (root crosses {:+})",
            side,
            b.boundary,
            b.kind.as_str(),
            b.crossing_eigenvalue
        );
    }

    let disc = discretion_reduced_form_interval(&p)?;
    println!(
        "discretion rules -epsilon lie in ({}, {})",
        disc.lower, disc.upper
    );

    let eps_grid = [1.5, 2.0, 4.0, 6.0, 10.0, 50.0, 1e3];
    let env = ramsey_reduced_form_interval(&p, &eps_grid)?;
    println!("Ramsey F*_pi across epsilon:");
    for (eps, f) in &env.samples {
        println!("  epsilon {eps:>7}: {f:.4}");
    }
    println!(
        "  envelope ({:.4}, {:.4})",
        env.envelope.lower, env.envelope.upper
    );

    let rows = sweep(
        &p,
        SweepAxis::FPi,
        -2.0,
        18.0,
        41,
        SweepMode::SimpleRule { f_pi: 0.0 },
    )?;
    println!("boundaries found by the F_pi sweep:");
    for r in rows.iter().filter(|r| r.is_boundary_row()) {
        println!(
            "  F_pi = {:.6}, root {:+.6}, {}",
            r.axis_value,
            r.eigenvalue,
            r.bifurcation.map(|b| b.as_str()).unwrap_or("")
        );
    }
    Ok(())
}
