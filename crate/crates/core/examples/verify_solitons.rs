//! Null solutions with parallel torsion over the three-dimensional Lie groups,
//! checked over a range of couplings κ.

use hetlab::models::catalog_entry;
use hetlab::systems::null_parallel_residual;

fn main() -> hetlab::Result<()> {
    for name in ["r_x_nil3", "r_x_e11", "r_x_sl2r", "r_x_h3"] {
        for kappa in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let rep = null_parallel_residual(&catalog_entry(name, kappa)?.config()?)?;
            let d = &rep.derived;
            println!(
                "{name:<10} κ={kappa:<5} 2κ|α|²={:.3}  s^h={:+.5}  |Ric^h|²={:.5}  max residual {:.1e}",
                d.two_kappa_alpha_sq,
                d.s_h.unwrap_or(f64::NAN),
                d.ric_h_norm_sq.unwrap_or(f64::NAN),
                rep.max_residual()
            );
        }
    }
    Ok(())
}
