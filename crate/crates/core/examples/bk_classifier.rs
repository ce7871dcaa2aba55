//! Blanchard-Kahn counting on the open and closed loops.

use nkpc::lre::classify_system;
use nkpc::mechanism::closed_loop_unchecked;
use nkpc::{
    build_open_loop, controllability_rank, eigenvalues, is_stabilizable, LinearRESystem,
    ModelParams, PolicyRule, DEFAULT_UNIT_TOL,
};

fn main() -> nkpc::Result<()> {
    let p = ModelParams::table2();
    let open = build_open_loop(&p)?;
    println!(
        "open loop: controllability rank {}, stabilizable {}",
        controllability_rank(open.transition(), open.impact())?,
        is_stabilizable(&open)?
    );

    println!(
        "{:>7} {:>15} {:>20} {:>20}",
        "F_pi", "root", "predetermined", "forward-looking"
    );
    for f_pi in [-6.0, 0.0, 0.0784313725490196, 4.51, 15.0, 20.0] {
        let pre = closed_loop_unchecked(
            p.beta,
            p.kappa,
            p.rho,
            &PolicyRule::predetermined(f_pi, 0.0),
        )?;
        let fwd =
            closed_loop_unchecked(p.beta, p.kappa, p.rho, &PolicyRule::forward_looking(f_pi))?;
        let root = eigenvalues(&pre, DEFAULT_UNIT_TOL)?.eigenvalues[0].re;
        println!(
            "{f_pi:>7.3} {root:>15.6} {:>20} {:>20}",
            classify_system(&pre, DEFAULT_UNIT_TOL)?.as_str(),
            classify_system(&fwd, DEFAULT_UNIT_TOL)?.as_str()
        );
    }

    // a generic 3x3 system with one jump variable
    let sys = LinearRESystem::from_rows(
        &[&[0.9, 0.1, 0.0], &[0.0, 1.4, 0.3], &[0.0, 0.2, 0.5]],
        &[&[1.0], &[0.0], &[0.5]],
        &[&[1.0], &[0.0], &[0.0]],
        2,
        1,
    )?;
    let report = eigenvalues(&sys, DEFAULT_UNIT_TOL)?;
    println!(
        "3x3 system: {} unstable of {}, {}",
        report.n_unstable,
        report.dim(),
        classify_system(&sys, DEFAULT_UNIT_TOL)?
    );
    Ok(())
}
