//! Ramsey policy as the probability of keeping commitments falls.

use nkpc::{
    expected_irf, foc_recursion_check, ramsey_loss, ramsey_rule, ramsey_rule_with,
    InitialConditionDiscount, IrfRequest, ModelParams,
};

fn main() -> nkpc::Result<()> {
    let base = ModelParams::table2();
    println!(
        "{:>5} {:>9} {:>9} {:>9} {:>9} {:>9} {:>11}",
        "q", "lambda", "F*_pi", "F*_z", "pi0", "x0*", "loss(200)"
    );
    for q in [1.0, 0.9, 0.75, 0.5, 0.25, 0.05] {
        let p = ModelParams { q, ..base };
        let s = ramsey_rule(&p)?;
        let path = expected_irf(&p, &IrfRequest::ramsey(1.0), 200)?;
        let loss = ramsey_loss(&path, &p, 200)?;
        let foc = foc_recursion_check(&path, &p)?;
        assert!(foc < 1e-10);
        println!(
            "{q:>5} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>11.6}",
            s.lambda, s.f_pi_star, s.f_z_star, s.pi0, s.x0_star, loss.value
        );
    }

    let p = ModelParams { q: 0.5, ..base };
    let weighted = ramsey_rule_with(&p, InitialConditionDiscount::CredibilityWeighted)?;
    println!(
        "q = 0.5 with credibility-weighted initial condition: pi0 = {:.4}",
        weighted.pi0
    );
    Ok(())
}
