//! Sasakian structure on the Heisenberg fiber built from its Ricci data.

use hetlab::models::{build_sasakian, catalog_entry, heisenberg, structure_checks};

fn main() -> hetlab::Result<()> {
    let kappa = 0.5;
    let sigma = heisenberg(1.0 / (2.0f64 * kappa).sqrt())?;
    let s = structure_checks(&sigma)?;
    println!(
        "μ₁ = {:+.4}, μ₂ = {:+.4}, structure defect {:.1e}",
        s.mu1,
        s.mu2,
        s.max_defect()
    );

    let data = build_sasakian(&sigma)?;
    println!("ξ_S = {:?}", data.xi_s);
    println!("Ψ = {:.4}", data.psi);
    let c = data.checks();
    println!("η(ξ) − 1        {:.1e}", c.reeb_normalization);
    println!("Ψ² + I − η⊗ξ    {:.1e}", c.psi_square);
    println!("metric compat.  {:.1e}", c.metric_compatibility);
    println!("contact         {:.1e}", c.contact);
    println!("L_ξ Ψ           {:.1e}", c.lie_psi);
    println!("√(μ₂/2) scaling {:.1e}", c.alternative_scaling_defect);

    let sl2 = catalog_entry("r_x_sl2r", kappa)?.fiber;
    match build_sasakian(&sl2) {
        Ok(_) => println!("sl2r unexpectedly accepted"),
        Err(e) => println!("sl2r rejected: {e}"),
    }
    Ok(())
}
