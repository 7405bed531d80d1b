//! Chart backend: a conformal change `e^u g` of ℝ×S³ with `φ ↦ φ + du` keeps
//! the closed Einstein-Weyl equation.

use std::sync::Arc;

use hetlab::chart::{round_s3_product, ChartGeometry, OneFormFn};
use hetlab::systems::{conformal_einstein_residual, nsns_residual, SolitonConfig};
use nalgebra::DVector;

fn main() -> hetlab::Result<()> {
    let base = round_s3_product()?;
    let dt: OneFormFn = Arc::new(|_| DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]));
    let round = SolitonConfig::chart("round", base.clone(), dt.clone(), dt.clone(), 1.0, 8, 0)?;
    println!(
        "round ℝ×S³, NS-NS residual {:.1e}",
        nsns_residual(&round)?.max_residual()
    );

    let g0 = base.metric_fn().clone();
    let u = |x: &[f64]| 0.4 * x[1].sin() * x[2].cos() + x[0].sin();
    let (lo, hi) = base.bounds();
    let chart = ChartGeometry::new(
        "conformal",
        4,
        Arc::new(move |x: &[f64]| g0(x) * u(x).exp()),
        lo.to_vec(),
        hi.to_vec(),
    )?;
    let phi: OneFormFn = Arc::new(|x: &[f64]| {
        DVector::from_vec(vec![
            1.0 + x[0].cos(),
            0.4 * x[1].cos() * x[2].cos(),
            -0.4 * x[1].sin() * x[2].sin(),
            0.0,
        ])
    });
    let shifted = SolitonConfig::chart("conformal", chart.clone(), phi.clone(), phi, 1.0, 16, 0)?;
    println!(
        "e^u g with φ + du: residual {:.1e}",
        conformal_einstein_residual(&shifted)?
    );
    let unshifted = SolitonConfig::chart("conformal", chart, dt.clone(), dt, 1.0, 16, 0)?;
    println!(
        "e^u g with φ:      residual {:.1e}",
        conformal_einstein_residual(&unshifted)?
    );
    Ok(())
}
