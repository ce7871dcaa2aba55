//! Impulse responses to a unit cost-push shock under the four regimes.
//!
//! Writes one CSV per regime into the directory given as the first argument
//! (default: the system temp dir).

use std::path::PathBuf;

use nkpc::{expected_irf, foc_residual, ramsey_rule, IrfRequest, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let p = ModelParams::table2();
    let s = ramsey_rule(&p)?;
    let regimes = [
        ("ramsey", IrfRequest::ramsey(1.0)),
        ("discretion", IrfRequest::discretion(1.0)),
        (
            "predetermined",
            IrfRequest::predetermined(s.f_pi_star, s.f_z_star, s.x0_star, 1.0),
        ),
        ("forward", IrfRequest::forward(-4.0, 1.0)),
    ];
    println!(
        "{:<14} {:>8} {:>8} {:>8} {:>10}",
        "regime", "pi0", "x0", "pi8", "foc gap"
    );
    for (name, req) in regimes {
        let path = expected_irf(&p, &req, 40)?;
        let file = out.join(format!("irf_{name}.csv"));
        path.write_csv(std::fs::File::create(&file)?)?;
        println!(
            "{name:<14} {:>8.4} {:>8.4} {:>8.4} {:>10.2e}",
            path.pi[0],
            path.x[0],
            path.pi[8],
            foc_residual(&path, p.epsilon)
        );
    }
    println!("CSV files written to {}", out.display());
    Ok(())
}
