//! Seeded Monte Carlo around the Ramsey impulse response.

use nkpc::{expected_irf, monte_carlo, simulate, IrfRequest, ModelParams};

fn main() -> nkpc::Result<()> {
    let p = ModelParams::table2();
    let req = IrfRequest::ramsey(1.0);
    let horizon = 8;

    let one = simulate(&p, &req, horizon, 11)?;
    assert_eq!(one, simulate(&p, &req, horizon, 11)?);
    println!("single path (seed 11):");
    print!("{}", one.to_csv());

    let expected = expected_irf(&p, &req, horizon)?;
    let mc = monte_carlo(&p, &req, horizon, 100_000, 2024)?;
    println!(
        "\n{:>2} {:>10} {:>10} {:>9} {:>6}",
        "t", "expected", "mean", "se", "z"
    );
    for t in 0..horizon {
        let se = mc.std_err_pi[t];
        let z = if se > 0.0 {
            (mc.mean_pi[t] - expected.pi[t]) / se
        } else {
            0.0
        };
        println!(
            "{t:>2} {:>10.5} {:>10.5} {se:>9.2e} {z:>6.2}",
            expected.pi[t], mc.mean_pi[t]
        );
    }
    Ok(())
}
