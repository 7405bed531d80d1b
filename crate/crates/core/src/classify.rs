//! Principal Ricci curvatures of the leaves of null solutions with parallel
//! torsion.
//!
//! The leaf Ricci endomorphism satisfies a quadratic with roots `−|α|²/2` and
//! `(1 − κ|α|²)/(2κ)`. A spectrum `(μ₁, μ₁, μ₂)` built from these roots must
//! also satisfy `2μ₁ + μ₂ = −|α|²/2`, which forces `2κ|α|² ∈ {1, 2, 3}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_tensor, levi_civita, ricci_spectrum, FrameGeometry};
use crate::error::{Error, Result};
use crate::models::MULTIPLICITY_GAP;

/// Relative tolerance for matching spectra against branches.
pub const BRANCH_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchTag {
    Sasakian,
    Sl2E11,
    Hyperbolic,
}

impl BranchTag {
    pub const ALL: [BranchTag; 3] = [BranchTag::Sasakian, BranchTag::Sl2E11, BranchTag::Hyperbolic];

    pub fn as_str(self) -> &'static str {
        match self {
            BranchTag::Sasakian => "sasakian",
            BranchTag::Sl2E11 => "sl2_e11",
            BranchTag::Hyperbolic => "hyperbolic",
        }
    }

    /// The value of `2κ|α|²`.
    pub fn ratio(self) -> f64 {
        match self {
            BranchTag::Sasakian => 1.0,
            BranchTag::Sl2E11 => 2.0,
            BranchTag::Hyperbolic => 3.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciBranch {
    pub tag: BranchTag,
    /// `2κ|α|²`.
    pub ratio: f64,
    pub alpha_norm_sq: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl RicciBranch {
    pub fn scalar_curvature(&self) -> f64 {
        2.0 * self.mu1 + self.mu2
    }

    /// `(μ₁, μ₁, μ₂)` sorted ascending.
    pub fn sorted_spectrum(&self) -> [f64; 3] {
        let mut s = [self.mu1, self.mu1, self.mu2];
        s.sort_by(f64::total_cmp);
        s
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::invalid(format!("κ must be positive, got {kappa}")));
    }
    Ok(())
}

pub fn admissible_branches(kappa: f64) -> Result<Vec<RicciBranch>> {
    check_kappa(kappa)?;
    let q = 1.0 / (4.0 * kappa);
    Ok(BranchTag::ALL
        .iter()
        .map(|&tag| {
            let (mu1, mu2) = match tag {
                BranchTag::Sasakian => (-q, q),
                BranchTag::Sl2E11 => (0.0, -2.0 * q),
                BranchTag::Hyperbolic => (-q, -q),
            };
            RicciBranch {
                tag,
                ratio: tag.ratio(),
                alpha_norm_sq: tag.ratio() / (2.0 * kappa),
                mu1,
                mu2,
            }
        })
        .collect())
}

/// Roots of `(x + |α|²/2)(x − (1 − κ|α|²)/(2κ))` and the four spectrum
/// candidates `(μ₁, μ₂)` drawn from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciRoots {
    pub kappa: f64,
    pub alpha_norm_sq: f64,
    pub roots: [f64; 2],
    pub candidates: [(f64, f64); 4],
}

impl RicciRoots {
    pub fn polynomial(&self, x: f64) -> f64 {
        (x - self.roots[0]) * (x - self.roots[1])
    }

    /// Candidates satisfying `2μ₁ + μ₂ = −|α|²/2` to `tol`.
    pub fn admissible(&self, tol: f64) -> Vec<(f64, f64)> {
        let target = -0.5 * self.alpha_norm_sq;
        self.candidates
            .iter()
            .copied()
            .filter(|&(m1, m2)| (2.0 * m1 + m2 - target).abs() <= tol)
            .collect()
    }
}

pub fn solve_ricci_polynomial(kappa: f64, alpha_norm_sq: f64) -> RicciRoots {
    let r1 = -0.5 * alpha_norm_sq;
    let r2 = (1.0 - alpha_norm_sq * kappa) / (2.0 * kappa);
    RicciRoots {
        kappa,
        alpha_norm_sq,
        roots: [r1, r2],
        candidates: [(r1, r1), (r1, r2), (r2, r1), (r2, r2)],
    }
}

/// Principal Ricci curvatures of a unimodular Milnor frame
/// `[e₂,e₃] = λ₁e₁`, `[e₃,e₁] = λ₂e₂`, `[e₁,e₂] = λ₃e₃`.
pub fn milnor_spectrum(l1: f64, l2: f64, l3: f64) -> [f64; 3] {
    let half = 0.5 * (l1 + l2 + l3);
    let m = [half - l1, half - l2, half - l3];
    [2.0 * m[1] * m[2], 2.0 * m[2] * m[0], 2.0 * m[0] * m[1]]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberClassification {
    pub kappa: f64,
    /// Ascending.
    pub spectrum: Vec<f64>,
    pub branch: Option<BranchTag>,
    pub alpha_norm_sq: Option<f64>,
}

impl FiberClassification {
    pub fn label(&self) -> &'static str {
        self.branch.map_or("none", BranchTag::as_str)
    }
}

pub fn classify_spectrum(spectrum: &[f64], kappa: f64) -> Result<FiberClassification> {
    check_kappa(kappa)?;
    if spectrum.len() != 3 {
        return Err(Error::invalid("needs three principal Ricci curvatures"));
    }
    let mut sorted = spectrum.to_vec();
    sorted.sort_by(f64::total_cmp);
    let scale = 1.0 / kappa;
    let mut found = None;
    for b in admissible_branches(kappa)? {
        let target = b.sorted_spectrum();
        let close = sorted
            .iter()
            .zip(target)
            .all(|(a, t)| (a - t).abs() <= BRANCH_TOL * scale);
        if close {
            found = Some(b);
            break;
        }
    }
    if let Some(b) = found {
        let gaps = [sorted[1] - sorted[0], sorted[2] - sorted[1]];
        let repeated = gaps.iter().filter(|g| g.abs() <= MULTIPLICITY_GAP).count();
        let expected = if b.mu1 == b.mu2 { 2 } else { 1 };
        if repeated != expected {
            found = None;
        }
    }
    Ok(FiberClassification {
        kappa,
        spectrum: sorted,
        branch: found.map(|b| b.tag),
        alpha_norm_sq: found.map(|b| b.alpha_norm_sq),
    })
}

pub fn classify_ricci(ric: &DMatrix<f64>, kappa: f64) -> Result<FiberClassification> {
    classify_spectrum(&ricci_spectrum(ric), kappa)
}

pub fn classify_fiber(sigma: &FrameGeometry, kappa: f64) -> Result<FiberClassification> {
    if sigma.dim() != 3 {
        return Err(Error::invalid("classification needs a 3-dimensional geometry"));
    }
    classify_ricci(&curvature_tensor(&levi_civita(sigma)).ricci(), kappa)
}
