//! The NS-NS pair on ℝ×S³ with φ = α = dt, and the mis-curved control.

use hetlab::models::catalog_entry;
use hetlab::systems::nsns_residual;

fn main() -> hetlab::Result<()> {
    for name in ["r_x_s3", "r_x_s3_wrong_curvature"] {
        let rep = nsns_residual(&catalog_entry(name, 1.0)?.config()?)?;
        println!("{name}: passes at 1e-10: {}", rep.passes(1e-10));
        for (k, v) in rep.residuals() {
            println!("  {k:<16} {v:.3e}");
        }
        for (k, v) in &rep.diagnostics {
            println!("  ({k}) {v:.3e}");
        }
    }
    Ok(())
}
