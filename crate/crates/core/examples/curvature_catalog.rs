//! Curvature of every catalog geometry: Ricci spectrum of the fiber, scalar
//! curvature, and the self-dual/anti-self-dual split of the torsion curvature.

use hetlab::curvature::{curvature_tensor, levi_civita, ricci_spectrum, torsion_connection_from_alpha};
use hetlab::models::{catalog_entry, CATALOG_NAMES};

fn main() -> hetlab::Result<()> {
    let kappa = 1.0;
    println!(
        "{:<24} {:>32} {:>10} {:>10} {:>10}",
        "entry", "fiber Ricci spectrum", "s", "|R+|^2", "|R-|^2"
    );
    for name in CATALOG_NAMES {
        let entry = catalog_entry(name, kappa)?;
        let fiber = curvature_tensor(&levi_civita(&entry.fiber));
        let spectrum = ricci_spectrum(&fiber.ricci());

        let cfg = entry.config()?;
        let geom = cfg.frame_geometry().expect("catalog entries are frame geometries");
        let alpha = cfg.point_data()?[0].alpha.clone();
        let (rp, rm) = curvature_tensor(&torsion_connection_from_alpha(geom, &alpha)?).sd_asd_norms()?;

        let spec: Vec<String> = spectrum.iter().map(|v| format!("{v:+.4}")).collect();
        println!(
            "{name:<24} {:>32} {:>10.4} {rp:>10.4} {rm:>10.4}",
            spec.join(" "),
            fiber.scalar()
        );
    }
    Ok(())
}
