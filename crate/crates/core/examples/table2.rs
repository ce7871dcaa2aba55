//! Recomputes the baseline calibration table and prints the two-decimal diff.
//!
//! ```text
//! cargo run --example table2
//! ```

use nkpc::cli::{render_table2, table2_checks};

fn main() -> nkpc::Result<()> {
    let checks = table2_checks()?;
    print!("{}", render_table2(&checks));
    if checks.iter().any(|c| !c.pass) {
        std::process::exit(2);
    }
    Ok(())
}
