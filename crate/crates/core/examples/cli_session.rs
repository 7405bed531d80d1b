//! Driving the command-line interface in-process and reloading its run record.

use hetlab::cli::{run_args, RunContext, RunRecord};

fn main() -> hetlab::Result<()> {
    let ctx = RunContext {
        tol_override: None,
        timestamp: Some(0),
    };
    let out = std::env::temp_dir().join("hetlab-cli-session.json");
    let out_s = out.to_string_lossy().into_owned();
    let runs: [&[&str]; 4] = [
        &["classify", "--kappa", "1"],
        &["verify", "--catalog", "r_x_nil3", "--kappa", "0.5", "--out", &out_s],
        &["verify", "--catalog", "r_x_s3_wrong_curvature"],
        &["moduli", "canon", "--angles", "1.0", "5.9"],
    ];
    for args in runs {
        let o = run_args(std::iter::once("hetlab").chain(args.iter().copied()), &ctx);
        println!("$ hetlab {}  -> exit {}", args.join(" "), o.code);
        print!("{}{}", o.stdout, o.stderr);
    }
    let rec = RunRecord::load(&out)?;
    println!(
        "reloaded {} record, spec hash {}",
        rec.schema,
        rec.spec_hash.unwrap_or_default()
    );
    Ok(())
}
