//! Writing a geometry spec to disk, loading it back and verifying it.

use hetlab::models::{catalog_entry, load_spec, save_report, GeometrySpec};
use hetlab::systems::null_parallel_residual;

fn main() -> hetlab::Result<()> {
    let dir = std::env::temp_dir().join("hetlab-spec-roundtrip");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("r_x_h3.json");

    let spec = catalog_entry("r_x_h3", 1.0)?.spec();
    spec.save(&path)?;
    println!("{}", std::fs::read_to_string(&path)?);
    assert_eq!(GeometrySpec::load(&path)?, spec);

    let rep = null_parallel_residual(&load_spec(&path)?)?;
    save_report(&rep, dir.join("report.json"))?;
    println!("max residual {:.1e}, report in {}", rep.max_residual(), dir.display());

    match GeometrySpec::parse("{\"name\": 3}", "inline") {
        Ok(_) => println!("malformed spec accepted"),
        Err(e) => println!("malformed spec: {e}"),
    }
    Ok(())
}
