//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

use std::f64::consts::TAU;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hetlab::chart::{round_s3_product, ChartGeometry, OneFormFn};
use hetlab::classify::{admissible_branches, classify_fiber, BranchTag};
use hetlab::cli::{run_args, RunContext, EXIT_OK, EXIT_RESIDUAL};
use hetlab::curvature::{
    curvature_tensor, levi_civita, parallel_torsion_circ, parallel_torsion_curvature, rho_rho_3d,
    riemann_from_ricci_3d, torsion_connection_from_alpha,
};
use hetlab::deform::{essential_kernel, rough_laplacian_matrix, DeformationSystem};
use hetlab::frame::{max_abs, tensor_norm_sq};
use hetlab::models::{build_sasakian, catalog_entry, heisenberg, CATALOG_NAMES};
use hetlab::moduli::{
    moduli_dim, nsns_moduli_dim, random_so4, torus_angles, weyl_canonicalize, weyl_orbit, IsometryClass,
    S3_ISOMETRY_RANK,
};
use hetlab::systems::{conformal_einstein_residual, nsns_residual, null_parallel_residual, SolitonConfig};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, || {
        format!("{what} took {:.3} s, limit {limit} s", elapsed.as_secs_f64())
    })
}

fn err(e: hetlab::Error) -> String {
    e.to_string()
}

fn cli(args: &[&str]) -> i32 {
    run_args(
        std::iter::once("hetlab").chain(args.iter().copied()),
        &RunContext::default(),
    )
    .code
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn pair_gap(p: (f64, f64), q: (f64, f64)) -> f64 {
    circular_gap(p.0, q.0).max(circular_gap(p.1, q.1))
}

fn classification_table() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for kappa in [0.25, 0.5, 1.0, 2.0] {
        let branches = admissible_branches(kappa).map_err(err)?;
        ensure(branches.len() == 3, || {
            format!("κ={kappa}: {} branches", branches.len())
        })?;
        let q = 1.0 / (4.0 * kappa);
        let expected = [(-q, q), (0.0, -2.0 * q), (-q, -q)];
        for (b, (m1, m2)) in branches.iter().zip(expected) {
            worst = worst.max((b.mu1 - m1).abs()).max((b.mu2 - m2).abs());
        }
        let out = run_args(
            ["hetlab", "classify", "--kappa", &kappa.to_string()],
            &RunContext::default(),
        );
        let rows = out
            .stdout
            .lines()
            .filter(|l| BranchTag::ALL.iter().any(|t| l.starts_with(t.as_str())))
            .count();
        ensure(out.code == EXIT_OK && rows == 3, || {
            format!("κ={kappa}: classify printed {rows} branch rows, exit {}", out.code)
        })?;
    }
    ensure(worst <= 1e-12, || format!("max branch deviation {worst:e}"))?;
    within(start.elapsed(), 1.0, "classification")?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn solution_verification() -> Outcome {
    let mut worst_res = 0.0f64;
    let mut worst_derived = 0.0f64;
    for name in ["r_x_nil3", "r_x_e11", "r_x_sl2r", "r_x_h3"] {
        for kappa in [0.5, 1.0, 2.0] {
            let start = Instant::now();
            let cfg = catalog_entry(name, kappa).and_then(|e| e.config()).map_err(err)?;
            let rep = null_parallel_residual(&cfg).map_err(err)?;
            within(start.elapsed(), 1.0, &format!("{name} κ={kappa}"))?;
            let a2 = rep.derived.alpha_norm_sq;
            let s_h = rep.derived.s_h.ok_or("missing s_h")?;
            let ric_h = rep.derived.ric_h_norm_sq.ok_or("missing |Ric^h|²")?;
            let d = (s_h + 0.5 * a2)
                .abs()
                .max((ric_h - a2 / (2.0 * kappa) * (1.0 - kappa * a2 / 2.0)).abs());
            worst_res = worst_res.max(rep.max_residual());
            worst_derived = worst_derived.max(d);
        }
    }
    ensure(worst_res < 1e-10, || format!("max residual {worst_res:e}"))?;
    ensure(worst_derived <= 1e-10, || {
        format!("derived scalar defect {worst_derived:e}")
    })?;
    let code = cli(&[
        "verify",
        "--catalog",
        "r_x_nil3",
        "--kappa",
        "0.5",
        "--system",
        "null-parallel",
    ]);
    ensure(code == EXIT_OK, || format!("verify r_x_nil3 exited {code}"))?;
    Ok(format!(
        "max residual {worst_res:.1e}, derived defect {worst_derived:.1e}"
    ))
}

fn nsns_verification() -> Outcome {
    let start = Instant::now();
    let (mut res, mut flat, mut rpm) = (0.0f64, 0.0f64, 0.0f64);
    for kappa in [0.01, 0.25, 1.0, 4.0, 100.0] {
        let cfg = catalog_entry("r_x_s3", kappa).and_then(|e| e.config()).map_err(err)?;
        let rep = nsns_residual(&cfg).map_err(err)?;
        res = res.max(rep.max_residual());
        flat = flat.max(
            *rep.diagnostics
                .get("torsion_curvature_max")
                .ok_or("missing torsion curvature")?,
        );
        let rp = rep.derived.r_plus_sq.ok_or("missing |R⁺|²")?;
        let rm = rep.derived.r_minus_sq.ok_or("missing |R⁻|²")?;
        rpm = rpm.max(rp.abs()).max(rm.abs());
    }
    within(start.elapsed(), 1.0, "NS-NS verification")?;
    ensure(res < 1e-10, || format!("max residual {res:e}"))?;
    ensure(flat < 1e-12, || format!("|R_∇φ| = {flat:e}"))?;
    ensure(rpm < 1e-12, || format!("|R±|² = {rpm:e}"))?;
    Ok(format!("max residual {res:.1e}, |R_∇φ| {flat:.1e}, |R±|² {rpm:.1e}"))
}

fn parallel_torsion_formulas() -> Outcome {
    let (mut worst, mut count) = (0.0f64, 0);
    for name in CATALOG_NAMES {
        for kappa in [0.5, 1.0, 2.0] {
            let cfg = catalog_entry(name, kappa).and_then(|e| e.config()).map_err(err)?;
            let geom = cfg.frame_geometry().ok_or("catalog entry without frame geometry")?;
            let alpha = cfg.point_data().map_err(err)?[0].alpha.clone();
            let lc = levi_civita(geom);
            if lc.require_parallel(&alpha, 1e-12).is_err() {
                continue;
            }
            let rg = curvature_tensor(&lc);
            let ra = curvature_tensor(&torsion_connection_from_alpha(geom, &alpha).map_err(err)?);
            let d_curv = parallel_torsion_curvature(&rg, &alpha).max_abs_diff(&ra).map_err(err)?;
            let d_circ = max_abs(&(parallel_torsion_circ(&rg, &alpha) - ra.circ()));
            worst = worst.max(d_curv).max(d_circ);
            count += 1;
        }
    }
    ensure(count > 0, || "no parallel-α geometries".into())?;
    ensure(worst <= 1e-10, || format!("max defect {worst:e}"))?;
    Ok(format!("{count} geometries, max defect {worst:.1e}"))
}

fn reconstruction_3d() -> Outcome {
    let (mut rec, mut rho, mut norm, mut count) = (0.0f64, 0.0f64, 0.0f64, 0);
    for name in CATALOG_NAMES {
        for kappa in [0.5, 1.0, 2.0] {
            let fiber = catalog_entry(name, kappa).map_err(err)?.fiber;
            let r = curvature_tensor(&levi_civita(&fiber));
            let (ric, s) = (r.ricci(), r.scalar());
            let built = riemann_from_ricci_3d(&ric, s).map_err(err)?;
            rec = rec.max(built.max_abs_diff(&r).map_err(err)?);
            rho = rho.max(max_abs(&(r.circ() - rho_rho_3d(&ric, s))));
            norm = norm.max((r.norm_sq() - (2.0 * tensor_norm_sq(&ric) - 0.5 * s * s)).abs());
            count += 1;
        }
    }
    ensure(rec <= 1e-10, || format!("reconstruction defect {rec:e}"))?;
    ensure(rho <= 1e-10, || format!("R∘R defect {rho:e}"))?;
    ensure(norm <= 1e-10, || format!("norm identity defect {norm:e}"))?;
    Ok(format!("{count} fibers, defects {rec:.1e} / {rho:.1e} / {norm:.1e}"))
}

/// A conformal factor `e^u` with `u` and `du` in Hopf coordinates.
struct Factor {
    name: &'static str,
    u: fn(&[f64]) -> f64,
    du: fn(&[f64]) -> [f64; 4],
}

const FACTORS: [Factor; 3] = [
    Factor {
        name: "sin t",
        u: |x| x[0].sin(),
        du: |x| [x[0].cos(), 0.0, 0.0, 0.0],
    },
    Factor {
        name: "0.4 sin η cos ξ₁",
        u: |x| 0.4 * x[1].sin() * x[2].cos(),
        du: |x| [0.0, 0.4 * x[1].cos() * x[2].cos(), -0.4 * x[1].sin() * x[2].sin(), 0.0],
    },
    Factor {
        name: "0.3 t ξ₂ + 0.2 cos(ξ₁ − ξ₂)",
        u: |x| 0.3 * x[0] * x[3] + 0.2 * (x[2] - x[3]).cos(),
        du: |x| {
            let s = 0.2 * (x[2] - x[3]).sin();
            [0.3 * x[3], 0.0, -s, 0.3 * x[0] + s]
        },
    },
];

fn conformal_invariance() -> Outcome {
    let start = Instant::now();
    let base = round_s3_product().map_err(err)?;
    let (lo, hi) = base.bounds();
    let (mut worst, mut floor) = (0.0f64, f64::INFINITY);
    let mut lines = Vec::new();
    for factor in &FACTORS {
        let g0 = base.metric_fn().clone();
        let u = factor.u;
        let du = factor.du;
        let chart = ChartGeometry::new(
            "r_x_s3_conformal",
            4,
            Arc::new(move |x: &[f64]| g0(x) * u(x).exp()),
            lo.to_vec(),
            hi.to_vec(),
        )
        .map_err(err)?;
        let phi: OneFormFn = Arc::new(move |x: &[f64]| {
            let d = du(x);
            DVector::from_vec(vec![1.0 + d[0], d[1], d[2], d[3]])
        });
        let cfg = SolitonConfig::chart("r_x_s3_conformal", chart.clone(), phi.clone(), phi, 1.0, 32, 0).map_err(err)?;
        let r = conformal_einstein_residual(&cfg).map_err(err)?;
        ensure(r < 1e-5, || format!("u = {}: residual {r:e}", factor.name))?;
        let dt: OneFormFn = Arc::new(|_| DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]));
        let unshifted = SolitonConfig::chart("r_x_s3_unshifted", chart, dt.clone(), dt, 1.0, 4, 0).map_err(err)?;
        let control = conformal_einstein_residual(&unshifted).map_err(err)?;
        ensure(control > 1e-2, || {
            format!("u = {}: unshifted φ not detected ({control:e})", factor.name)
        })?;
        floor = floor.min(control);
        worst = worst.max(r);
        lines.push(factor.name);
    }
    within(start.elapsed(), 10.0, "conformal invariance")?;
    Ok(format!(
        "u ∈ {{{}}}, 32 points each, max residual {worst:.1e}, unshifted φ ≥ {floor:.1e}, {:.2} s",
        lines.join("; "),
        start.elapsed().as_secs_f64()
    ))
}

fn deformation_kernel() -> Outcome {
    let sys = DeformationSystem::round_s1xsu2().map_err(err)?;
    let k = essential_kernel(&sys).map_err(err)?;
    ensure(k.dimension == 3, || format!("kernel dimension {}", k.dimension))?;
    ensure(k.beta_rank == 3, || format!("β rank {}", k.beta_rank))?;
    let tiny = k.max_lambda.max(k.max_f).max(k.max_tau_perp);
    ensure(tiny <= 1e-10, || {
        format!("λ {:e}, 𝔣 {:e}, τ⊥ {:e}", k.max_lambda, k.max_f, k.max_tau_perp)
    })?;
    let rough = rough_laplacian_matrix(sys.fiber());
    let n = rough.nrows();
    let d = max_abs(&(rough - DMatrix::identity(n, n) * 0.5));
    ensure(d <= 1e-12, || format!("∇*∇ − ½ Id = {d:e}"))?;
    Ok(format!("dimension 3, max |λ|,|𝔣|,|τ⊥| {tiny:.1e}, ∇*∇ defect {d:.1e}"))
}

fn moduli() -> Outcome {
    let n = 100;
    let mut orbit_gap = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (TAU * i as f64 / n as f64, TAU * j as f64 / n as f64);
            let c = weyl_canonicalize(x, y);
            ensure(weyl_canonicalize(c.0, c.1) == c, || {
                format!("not idempotent at ({x}, {y})")
            })?;
            for (a, b) in weyl_orbit(x, y) {
                orbit_gap = orbit_gap.max(pair_gap(weyl_canonicalize(a, b), c));
            }
        }
    }
    ensure(orbit_gap <= 1e-12, || format!("orbit gap {orbit_gap:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut conj_gap = 0.0f64;
    for _ in 0..1000 {
        let r = random_so4(&mut rng);
        let (x, y) = torus_angles(&r);
        let base = weyl_canonicalize(x, y);
        let q = random_so4(&mut rng);
        let (x2, y2) = torus_angles(&r.conjugate_by(&q));
        conj_gap = conj_gap.max(pair_gap(weyl_canonicalize(x2, y2), base));
    }
    ensure(conj_gap <= 1e-10, || format!("conjugation gap {conj_gap:e}"))?;
    let torus = torus_angles(&IsometryClass::torus(1.0, 5.9));
    ensure(pair_gap(torus, (1.0, 5.9)) <= 1e-12, || {
        format!("torus angles {torus:?}")
    })?;
    let (m, ns) = (moduli_dim(S3_ISOMETRY_RANK), nsns_moduli_dim(S3_ISOMETRY_RANK));
    ensure(m == 3 && ns == 4, || format!("dimensions {m}, {ns}"))?;
    Ok(format!(
        "orbit gap {orbit_gap:.1e}, conjugation gap {conj_gap:.1e}, dims 3 and 4"
    ))
}

fn sasakian_builder() -> Outcome {
    let mut worst = 0.0f64;
    for kappa in [0.25, 0.5, 1.0, 2.0] {
        let sigma = heisenberg(1.0 / (2.0f64 * kappa).sqrt()).map_err(err)?;
        let c = build_sasakian(&sigma).map_err(err)?.checks();
        let four = [c.psi_square, c.metric_compatibility, c.contact, c.lie_psi];
        worst = four
            .iter()
            .fold(worst.max(c.reeb_normalization).max(c.psi_reeb), |m, v| m.max(*v));
    }
    ensure(worst <= 1e-12, || format!("max identity defect {worst:e}"))?;
    for name in ["r_x_sl2r", "r_x_e11"] {
        let fiber = catalog_entry(name, 1.0).map_err(err)?.fiber;
        let mu2 = classify_fiber(&fiber, 1.0).map_err(err)?.spectrum[0];
        ensure(mu2 < 0.0, || format!("{name}: simple eigenvalue {mu2} not negative"))?;
        ensure(build_sasakian(&fiber).is_err(), || {
            format!("{name} accepted with μ₂ < 0")
        })?;
    }
    Ok(format!("max identity defect {worst:.1e}, μ₂ < 0 rejected"))
}

fn negative_controls() -> Outcome {
    let mut parts = Vec::new();
    for (name, null) in [("r_x_s3_wrong_curvature", false), ("r_x_s3_null", true)] {
        let cfg = catalog_entry(name, 1.0).and_then(|e| e.config()).map_err(err)?;
        let rep = if null {
            null_parallel_residual(&cfg)
        } else {
            nsns_residual(&cfg)
        }
        .map_err(err)?;
        let r = rep.max_residual();
        ensure(r > 1e-2, || format!("{name}: residual {r:e}"))?;
        let code = cli(&["verify", "--catalog", name]);
        ensure(code == EXIT_RESIDUAL, || format!("{name}: exit {code}"))?;
        parts.push(format!("{name} {r:.2e}"));
    }
    Ok(format!("{}, exit 1", parts.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("classification table", classification_table),
        ("null solutions on Nil³, E(1,1), Sl(2,ℝ)~, H³", solution_verification),
        ("NS-NS pair on ℝ×S³", nsns_verification),
        ("parallel-torsion curvature formulas", parallel_torsion_formulas),
        ("3D curvature reconstruction", reconstruction_3d),
        ("conformal invariance on the chart backend", conformal_invariance),
        ("deformation kernel", deformation_kernel),
        ("moduli canonicalization", moduli),
        ("Sasakian builder", sasakian_builder),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {title} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title} ({why})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
