//! Essential infinitesimal deformations of the round NS-NS pair on S¹×SU(2).

use hetlab::deform::{essential_kernel, full_kernel, rough_laplacian_matrix, DeformationSystem};

fn main() -> hetlab::Result<()> {
    let sys = DeformationSystem::round_s1xsu2()?;
    println!(
        "∇*∇ on invariant one-forms of SU(2):\n{:.6}",
        rough_laplacian_matrix(sys.fiber())
    );

    let k = essential_kernel(&sys)?;
    println!(
        "reduced system: {} unknowns, kernel dimension {}",
        k.unknowns, k.dimension
    );
    for (i, el) in k.basis.iter().enumerate() {
        let d = &el.decomposition;
        println!("  [{i}] λ={:+.1e} f={:+.1e} β={:+.4?}", el.lambda, d.f, d.beta);
    }
    let full = full_kernel(&sys)?;
    println!("full differential: kernel dimension {}", full.dimension);
    Ok(())
}
