//! Admissible leaf Ricci spectra as a function of κ, and the classification of
//! the catalog fibers against them.

use hetlab::classify::{admissible_branches, classify_fiber, solve_ricci_polynomial};
use hetlab::models::catalog_entry;

fn main() -> hetlab::Result<()> {
    for kappa in [0.25, 0.5, 1.0, 2.0] {
        println!("κ = {kappa}");
        for b in admissible_branches(kappa)? {
            let roots = solve_ricci_polynomial(kappa, b.alpha_norm_sq);
            println!(
                "  {:<11} 2κ|α|²={}  (μ₁, μ₂) = ({:+.4}, {:+.4})  roots {:?}",
                b.tag.as_str(),
                b.ratio,
                b.mu1,
                b.mu2,
                roots.roots
            );
        }
        for name in ["r_x_nil3", "r_x_sl2r", "r_x_e11", "r_x_h3"] {
            let c = classify_fiber(&catalog_entry(name, kappa)?.fiber, kappa)?;
            println!("  {name:<9} -> {}", c.label());
        }
    }
    Ok(())
}
