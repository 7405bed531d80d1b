//! Moduli of manifolds of type S¹×S³: torus angles of a random isometry, their
//! canonical form, and invariance under conjugation.

use hetlab::moduli::{
    moduli_dim, moduli_equal, nsns_moduli_dim, random_so4, torus_angles, weyl_canonicalize, IsometryClass, ModuliPoint,
    S3_ISOMETRY_RANK,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hetlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let psi = IsometryClass::torus(1.0, 5.9);
    let p = ModuliPoint::from_isometry(2.0, &psi)?;
    println!("torus(1.0, 5.9) -> {:?}", p.angles());
    println!("swap           -> {:?}", weyl_canonicalize(5.9, 1.0));

    for _ in 0..3 {
        let q = random_so4(&mut rng);
        let conj = psi.conjugate_by(&q);
        let (x, y) = torus_angles(&conj);
        let other = ModuliPoint::from_isometry(2.0, &conj)?;
        println!(
            "conjugate angles ({x:.6}, {y:.6}) same point: {}",
            moduli_equal(&p, &other)
        );
    }
    println!(
        "dim M = {}, dim M_NS = {}",
        moduli_dim(S3_ISOMETRY_RANK),
        nsns_moduli_dim(S3_ISOMETRY_RANK)
    );
    Ok(())
}
