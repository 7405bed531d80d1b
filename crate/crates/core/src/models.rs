//! Model geometries, geometry spec files and the Sasakian builder.
//!
//! Fibers of the null solutions with parallel torsion, all in orthonormal
//! frames `(e0, e1, e2)`:
//!
//! | fiber | brackets | constants |
//! |---|---|---|
//! | `nil3` | `[e0,e1] = m e2` | `m = 1/√(2κ)` |
//! | `sl2r`, `e11` | `[e2,e0] = −𝔰e0 − 𝔞e1`, `[e2,e1] = 𝔞e0 + 𝔰e1`, `[e0,e1] = −2𝔞e2` | `𝔞² − 𝔰² = −1/(4κ)` |
//! | `h3` | `[e2,e0] = c e0`, `[e2,e1] = c e1` | `c = 1/√(8κ)` |
//!
//! For `sl2r` the constants are `𝔞 = 1/√(8κ)`, `𝔰 = √(3/(8κ))`; `e11` has
//! `𝔞 = 0`, `𝔰 = 1/(2√κ)`. The hyperbolic constant makes the scalar
//! curvature `−6c² = −3/(4κ)`.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_tensor, levi_civita, FrameGeometry};
use crate::error::{Error, Result};
use crate::frame::{max_abs, outer, Frame, Orientation};
use crate::systems::{ResidualReport, SolitonConfig};

pub const CATALOG_NAMES: [&str; 8] = [
    "flat_torus",
    "r_x_s3",
    "r_x_s3_wrong_curvature",
    "r_x_s3_null",
    "r_x_h3",
    "r_x_nil3",
    "r_x_sl2r",
    "r_x_e11",
];

/// The evaluator a catalog entry is meant to pass (or, for negative
/// controls, to fail).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    Heterotic,
    Nsns,
    NullParallel,
}

impl SystemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::Heterotic => "heterotic",
            SystemKind::Nsns => "nsns",
            SystemKind::NullParallel => "null-parallel",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiFlag {
    Zero,
    Dt,
    EqualAlpha,
}

/// A named catalog geometry with its metadata.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub kappa: f64,
    pub fiber: FrameGeometry,
    pub alpha_norm_sq: f64,
    pub phi: PhiFlag,
    pub system: SystemKind,
    /// Negative controls are expected to fail their evaluator.
    pub expect_pass: bool,
    pub provenance: String,
}

impl CatalogEntry {
    pub fn config(&self) -> Result<SolitonConfig> {
        config_from_fiber(&self.name, &self.fiber, self.alpha_norm_sq, self.phi, self.kappa)
    }

    pub fn spec(&self) -> GeometrySpec {
        GeometrySpec {
            name: self.name.clone(),
            dim: 3,
            brackets: self
                .fiber
                .brackets()
                .into_iter()
                .map(|(i, j, k, c)| BracketEntry(i, j, k, c))
                .collect(),
            alpha_norm_sq: self.alpha_norm_sq,
            kappa: self.kappa,
            phi: self.phi,
            provenance: Some(self.provenance.clone()),
        }
    }
}

fn fiber(brackets: &[(usize, usize, usize, f64)]) -> Result<FrameGeometry> {
    FrameGeometry::new(Frame::standard(3)?, brackets)
}

/// `[e_i, e_j] = c e_k` cyclically; sectional curvature `c²/4`.
pub fn round_s3(c: f64) -> Result<FrameGeometry> {
    fiber(&[(0, 1, 2, c), (1, 2, 0, c), (2, 0, 1, c)])
}

pub fn heisenberg(m: f64) -> Result<FrameGeometry> {
    fiber(&[(0, 1, 2, m)])
}

/// Hyperbolic space with sectional curvature `−c²`.
pub fn hyperbolic(c: f64) -> Result<FrameGeometry> {
    fiber(&[(2, 0, 0, c), (2, 1, 1, c)])
}

/// Frame `(u₁, u₂, ξ) = (e0, e1, e2)` with
/// `[ξ,u₁] = −(𝔰u₁ + 𝔞u₂)`, `[ξ,u₂] = 𝔰u₂ + 𝔞u₁`, `[u₁,u₂] = −2𝔞ξ`.
pub fn sl2_frame(a: f64, s: f64) -> Result<FrameGeometry> {
    fiber(&[
        (2, 0, 0, -s),
        (2, 0, 1, -a),
        (2, 1, 0, a),
        (2, 1, 1, s),
        (0, 1, 2, -2.0 * a),
    ])
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::invalid(format!("κ must be positive, got {kappa}")));
    }
    Ok(())
}

pub fn catalog_entry(name: &str, kappa: f64) -> Result<CatalogEntry> {
    check_kappa(kappa)?;
    let k = kappa;
    let (fiber, a2, phi, system, expect_pass, provenance) = match name {
        "flat_torus" => (
            fiber(&[])?,
            0.0,
            PhiFlag::Zero,
            SystemKind::Heterotic,
            true,
            "flat torus, φ = α = 0",
        ),
        "r_x_s3" => (
            round_s3(1.0)?,
            1.0,
            PhiFlag::EqualAlpha,
            SystemKind::Nsns,
            true,
            "ℝ×S³ with S³ of sectional curvature 1/4, φ = α = dt",
        ),
        "r_x_s3_wrong_curvature" => (
            round_s3(2.0f64.sqrt())?,
            1.0,
            PhiFlag::EqualAlpha,
            SystemKind::Nsns,
            false,
            "negative control: S³ of sectional curvature 1/2, φ = α = dt",
        ),
        "r_x_s3_null" => (
            round_s3(1.0)?,
            1.0 / (2.0 * k),
            PhiFlag::Zero,
            SystemKind::NullParallel,
            false,
            "negative control: round S³ used as the leaf of a null solution",
        ),
        "r_x_h3" => (
            hyperbolic(1.0 / (8.0 * k).sqrt())?,
            3.0 / (2.0 * k),
            PhiFlag::Zero,
            SystemKind::NullParallel,
            true,
            "ℝ×H³ of scalar curvature −3/(4κ), 2κ|α|² = 3",
        ),
        "r_x_nil3" => (
            heisenberg(1.0 / (2.0 * k).sqrt())?,
            1.0 / (2.0 * k),
            PhiFlag::Zero,
            SystemKind::NullParallel,
            true,
            "ℝ×Nil³ with Ricci spectrum (−1/4κ, −1/4κ, 1/4κ), 2κ|α|² = 1",
        ),
        "r_x_sl2r" => (
            sl2_frame(1.0 / (8.0 * k).sqrt(), (3.0 / (8.0 * k)).sqrt())?,
            1.0 / k,
            PhiFlag::Zero,
            SystemKind::NullParallel,
            true,
            "ℝ×Sl(2,ℝ)~ with Ricci spectrum (0, 0, −1/2κ), 2κ|α|² = 2",
        ),
        "r_x_e11" => (
            sl2_frame(0.0, 1.0 / (2.0 * k.sqrt()))?,
            1.0 / k,
            PhiFlag::Zero,
            SystemKind::NullParallel,
            true,
            "ℝ×E(1,1) with Ricci spectrum (0, 0, −1/2κ), 2κ|α|² = 2",
        ),
        other => {
            return Err(Error::invalid(format!(
                "unknown catalog entry {other:?}; known: {}",
                CATALOG_NAMES.join(", ")
            )))
        }
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        kappa,
        fiber,
        alpha_norm_sq: a2,
        phi,
        system,
        expect_pass,
        provenance: provenance.to_string(),
    })
}

/// The configuration of a catalog entry.
pub fn catalog(name: &str, kappa: f64) -> Result<SolitonConfig> {
    catalog_entry(name, kappa)?.config()
}

fn config_from_fiber(
    name: &str,
    fiber: &FrameGeometry,
    alpha_norm_sq: f64,
    phi: PhiFlag,
    kappa: f64,
) -> Result<SolitonConfig> {
    config_from_geometry(name, &fiber.product_with_line()?, alpha_norm_sq, phi, kappa)
}

fn config_from_geometry(
    name: &str,
    geom: &FrameGeometry,
    alpha_norm_sq: f64,
    phi: PhiFlag,
    kappa: f64,
) -> Result<SolitonConfig> {
    if alpha_norm_sq.is_nan() || alpha_norm_sq < 0.0 {
        return Err(Error::invalid("|α|² must be non-negative"));
    }
    let mut alpha = vec![0.0; 4];
    alpha[0] = alpha_norm_sq.sqrt();
    let mut phi_v = vec![0.0; 4];
    match phi {
        PhiFlag::Zero => {}
        PhiFlag::Dt => phi_v[0] = 1.0,
        PhiFlag::EqualAlpha => phi_v = alpha.clone(),
    }
    SolitonConfig::frame(name, geom.clone(), phi_v, alpha, kappa)
}

/// A bracket entry `[i, j, k, c]` meaning `[e_i, e_j] ∋ c e_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry(pub usize, pub usize, pub usize, pub f64);

/// On-disk description of a frame geometry and its soliton data.
///
/// `dim = 3` describes a fiber `Σ` and the configuration lives on `ℝ × Σ`;
/// `dim = 4` describes the full frame. In both cases `α = |α| e0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub name: String,
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    pub alpha_norm_sq: f64,
    pub kappa: f64,
    pub phi: PhiFlag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl GeometrySpec {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let spec: GeometrySpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("{origin}:{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        spec.validate(origin)?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        GeometrySpec::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    fn field_error(origin: &str, field: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            location: format!("{origin}: field {field}"),
            message: message.into(),
        }
    }

    fn validate(&self, origin: &str) -> Result<()> {
        if !(self.dim == 3 || self.dim == 4) {
            return Err(Self::field_error(
                origin,
                "dim",
                format!("must be 3 or 4, got {}", self.dim),
            ));
        }
        if !self.kappa.is_finite() || self.kappa <= 0.0 {
            return Err(Self::field_error(
                origin,
                "kappa",
                format!("must be positive, got {}", self.kappa),
            ));
        }
        if !self.alpha_norm_sq.is_finite() || self.alpha_norm_sq < 0.0 {
            return Err(Self::field_error(
                origin,
                "alpha_norm_sq",
                format!("must be non-negative, got {}", self.alpha_norm_sq),
            ));
        }
        for (pos, b) in self.brackets.iter().enumerate() {
            let BracketEntry(i, j, k, _) = *b;
            if i >= self.dim || j >= self.dim || k >= self.dim {
                return Err(Self::field_error(
                    origin,
                    &format!("brackets[{pos}]"),
                    format!("index out of range for dim {}", self.dim),
                ));
            }
            if i == j {
                return Err(Self::field_error(
                    origin,
                    &format!("brackets[{pos}]"),
                    "a vector brackets to zero with itself",
                ));
            }
        }
        self.geometry()
            .map_err(|e| Self::field_error(origin, "brackets", e.to_string()))?;
        Ok(())
    }

    pub fn geometry(&self) -> Result<FrameGeometry> {
        let frame = Frame::new((0..self.dim).map(|i| format!("e{i}")).collect(), Orientation::Positive)?;
        let entries: Vec<_> = self.brackets.iter().map(|b| (b.0, b.1, b.2, b.3)).collect();
        FrameGeometry::new(frame, &entries)
    }

    pub fn to_config(&self) -> Result<SolitonConfig> {
        let geom = self.geometry()?;
        if self.dim == 3 {
            config_from_fiber(&self.name, &geom, self.alpha_norm_sq, self.phi, self.kappa)
        } else {
            config_from_geometry(&self.name, &geom, self.alpha_norm_sq, self.phi, self.kappa)
        }
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<SolitonConfig> {
    GeometrySpec::load(path)?.to_config()
}

pub fn save_report(report: &ResidualReport, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report).expect("report serialises");
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// `(M, g) = (ℝ × Σ)/⟨(λ, ψ)⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct MappingTorusDescriptor {
    fiber: String,
    lambda: f64,
    holonomy: DMatrix<f64>,
}

impl MappingTorusDescriptor {
    pub fn new(fiber: impl Into<String>, lambda: f64, holonomy: DMatrix<f64>) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::invalid(format!(
                "translation length must be positive, got {lambda}"
            )));
        }
        let n = holonomy.nrows();
        if holonomy.ncols() != n {
            return Err(Error::invalid("holonomy must be square"));
        }
        let defect = max_abs(&(holonomy.transpose() * &holonomy - DMatrix::identity(n, n)));
        if defect > 1e-12 {
            return Err(Error::invalid(format!(
                "holonomy is not orthogonal (defect {defect:e})"
            )));
        }
        Ok(MappingTorusDescriptor {
            fiber: fiber.into(),
            lambda,
            holonomy,
        })
    }

    pub fn fiber(&self) -> &str {
        &self.fiber
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn holonomy(&self) -> &DMatrix<f64> {
        &self.holonomy
    }

    /// Moduli point of a mapping torus of the round `S³`.
    pub fn moduli_point(&self) -> Result<crate::moduli::ModuliPoint> {
        let iso = crate::moduli::IsometryClass::new(self.holonomy.clone())?;
        crate::moduli::ModuliPoint::from_isometry(self.lambda, &iso)
    }
}

/// Ricci eigen-data of a fiber with spectrum `(μ₁, μ₁, μ₂)`, `μ₁ ≠ μ₂`.
#[derive(Clone, Debug)]
pub struct SimpleEigenData {
    pub mu1: f64,
    pub mu2: f64,
    /// Unit eigenvector of the simple eigenvalue.
    pub xi: Vec<f64>,
}

/// Gap below which two Ricci eigenvalues count as equal.
pub const MULTIPLICITY_GAP: f64 = 1e-6;

pub fn simple_eigen_data(sigma: &FrameGeometry) -> Result<SimpleEigenData> {
    if sigma.dim() != 3 {
        return Err(Error::invalid("needs a 3-dimensional geometry"));
    }
    let ric = curvature_tensor(&levi_civita(sigma)).ricci();
    let eig = ric.symmetric_eigen();
    let ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    for odd in 0..3 {
        let (a, b) = ((odd + 1) % 3, (odd + 2) % 3);
        if (ev[a] - ev[b]).abs() <= MULTIPLICITY_GAP
            && (ev[odd] - ev[a]).abs() > MULTIPLICITY_GAP
            && (ev[odd] - ev[b]).abs() > MULTIPLICITY_GAP
        {
            let xi: Vec<f64> = eig.eigenvectors.column(odd).iter().copied().collect();
            return Ok(SimpleEigenData {
                mu1: 0.5 * (ev[a] + ev[b]),
                mu2: ev[odd],
                xi,
            });
        }
    }
    Err(Error::precondition(format!(
        "Ricci spectrum {ev:?} has no simple eigenvalue of multiplicity one"
    )))
}

/// `𝒞(v) = ∇_v ξ` as a matrix acting on column vectors.
pub fn c_endomorphism(sigma: &FrameGeometry, xi: &[f64]) -> DMatrix<f64> {
    let lc = levi_civita(sigma);
    let n = sigma.dim();
    DMatrix::from_fn(n, n, |k, i| (0..n).map(|j| lc.gamma(i, j, k) * xi[j]).sum())
}

/// Matrix of `∇_X` on invariant vectors: `(Γ_X)_{kj} = Σ_i X_i Γ_{ijk}`.
fn nabla_matrix(sigma: &FrameGeometry, x: &[f64]) -> DMatrix<f64> {
    let lc = levi_civita(sigma);
    let n = sigma.dim();
    DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * lc.gamma(i, j, k)).sum())
}

fn ad_matrix(sigma: &FrameGeometry, x: &[f64]) -> DMatrix<f64> {
    let n = sigma.dim();
    (0..n).fold(DMatrix::zeros(n, n), |acc, a| acc + sigma.ad(a) * x[a])
}

/// The structural identities for `ξ` and `𝒞` on a fiber with `μ₁ ≠ μ₂`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureChecks {
    pub mu1: f64,
    pub mu2: f64,
    pub nabla_xi_xi: f64,
    pub delta_eta: f64,
    pub trace_c: f64,
    /// `|𝒞² + (μ₂/2) Id|` on `ξ^⊥`.
    pub c_squared: f64,
    pub nabla_xi_c: f64,
    pub lie_xi_c: f64,
    /// `𝔞² − 𝔰² − μ₂/2`.
    pub sa_relation: f64,
    pub a_frak: f64,
    pub s_frak: f64,
}

impl StructureChecks {
    pub fn max_defect(&self) -> f64 {
        [
            self.nabla_xi_xi,
            self.delta_eta,
            self.trace_c,
            self.c_squared,
            self.nabla_xi_c,
            self.lie_xi_c,
            self.sa_relation,
        ]
        .into_iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn structure_checks(sigma: &FrameGeometry) -> Result<StructureChecks> {
    let data = simple_eigen_data(sigma)?;
    let xi = &data.xi;
    let n = 3;
    let c = c_endomorphism(sigma, xi);
    let lc = levi_civita(sigma);
    let p = DMatrix::identity(n, n) - outer(xi, xi);
    let nabla_xi = nabla_matrix(sigma, xi);
    let nabla_xi_c = &nabla_xi * &c - &c * &nabla_xi;
    let ad_xi = ad_matrix(sigma, xi);
    let lie_xi_c = &ad_xi * &c - &c * &ad_xi;
    let s = (&c + c.transpose()) * 0.5;
    let a = (&c - c.transpose()) * 0.5;
    let s2 = 0.5 * (&p * &s * &s * &p).trace();
    let a2 = -0.5 * (&p * &a * &a * &p).trace();
    Ok(StructureChecks {
        mu1: data.mu1,
        mu2: data.mu2,
        nabla_xi_xi: lc.nabla_vector(xi, xi).iter().fold(0.0, |m, v| m.max(v.abs())),
        delta_eta: lc.codifferential(xi),
        trace_c: c.trace(),
        c_squared: max_abs(&(&p * &c * &c * &p + &p * (0.5 * data.mu2))),
        nabla_xi_c: max_abs(&nabla_xi_c),
        lie_xi_c: max_abs(&lie_xi_c),
        sa_relation: a2 - s2 - 0.5 * data.mu2,
        a_frak: a2.max(0.0).sqrt(),
        s_frak: s2.max(0.0).sqrt(),
    })
}

/// `(ξ_S, η_S, Ψ, h_S)`.
#[derive(Clone, Debug)]
pub struct SasakianData {
    pub mu2: f64,
    pub xi: Vec<f64>,
    pub xi_s: Vec<f64>,
    pub eta_s: Vec<f64>,
    pub psi: DMatrix<f64>,
    pub h_s: DMatrix<f64>,
    /// `(dη_S)_{ij} = −η_S([e_i, e_j])`.
    pub d_eta_s: DMatrix<f64>,
    /// `ℒ_{ξ_S} Ψ`.
    pub lie_psi: DMatrix<f64>,
}

/// Defects of the contact and K-contact identities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SasakianChecks {
    /// `|η_S(ξ_S) − 1|`.
    pub reeb_normalization: f64,
    /// `|Ψ(ξ_S)|`.
    pub psi_reeb: f64,
    /// `|Ψ² + Id − ξ_S ⊗ η_S|`.
    pub psi_square: f64,
    /// `|h_S(Ψ·, Ψ·) − h_S + η_S ⊗ η_S|`.
    pub metric_compatibility: f64,
    /// `|h_S(Ψ·, ·) + dη_S|`.
    pub contact: f64,
    /// `|ℒ_{ξ_S} Ψ|`.
    pub lie_psi: f64,
    pub h_s_min_eigenvalue: f64,
    pub d_eta_norm: f64,
    /// `|η_S(ξ') − 1|` for the alternative Reeb scaling `ξ' = √(μ₂/2) ξ`,
    /// which fails unless `μ₂ = 2`.
    pub alternative_scaling_defect: f64,
}

impl SasakianChecks {
    pub fn max_identity_defect(&self) -> f64 {
        [
            self.reeb_normalization,
            self.psi_reeb,
            self.psi_square,
            self.metric_compatibility,
            self.contact,
            self.lie_psi,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Sasakian structure on a fiber with Ricci spectrum `(μ₁, μ₁, μ₂)`, `μ₂ > 0`:
/// `ξ_S = √(2/μ₂) ξ`, `η_S = √(μ₂/2) η`, `Ψ = −√(2/μ₂) 𝒞` on `ξ^⊥`,
/// `h_S = −2 h(𝒜∘𝒞 ·, ·)` on `ξ^⊥` and `(μ₂/2) h` along `ξ`.
pub fn build_sasakian(sigma: &FrameGeometry) -> Result<SasakianData> {
    let data = simple_eigen_data(sigma)?;
    let mu2 = data.mu2;
    if mu2 <= 0.0 {
        return Err(Error::precondition(format!(
            "Sasakian structure needs a positive simple Ricci eigenvalue, got μ₂ = {mu2}"
        )));
    }
    let n = 3;
    let xi = data.xi.clone();
    let p = DMatrix::identity(n, n) - outer(&xi, &xi);
    let c = c_endomorphism(sigma, &xi);
    let a = (&c - c.transpose()) * 0.5;
    let scale = (2.0 / mu2).sqrt();
    let xi_s: Vec<f64> = xi.iter().map(|v| v * scale).collect();
    let eta_s: Vec<f64> = xi.iter().map(|v| v / scale).collect();
    let psi = &c * &p * -scale;
    let ac = &a * &c;
    let h_s = &p * ac.transpose() * &p * -2.0 + outer(&xi, &xi) * (0.5 * mu2);
    let d_eta_s = sigma.d_one_form(&eta_s);
    let ad = ad_matrix(sigma, &xi_s);
    let lie_psi = &ad * &psi - &psi * &ad;
    Ok(SasakianData {
        mu2,
        xi,
        xi_s,
        eta_s,
        psi,
        h_s,
        d_eta_s,
        lie_psi,
    })
}

impl SasakianData {
    pub fn checks(&self) -> SasakianChecks {
        let n = 3;
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        let xi_s = nalgebra::DVector::from_column_slice(&self.xi_s);
        let id = DMatrix::identity(n, n);
        let reeb_eta = outer(&self.xi_s, &self.eta_s);
        let eta_eta = outer(&self.eta_s, &self.eta_s);
        let alt: Vec<f64> = self.xi.iter().map(|v| v * (0.5 * self.mu2).sqrt()).collect();
        let min_ev = self.h_s.clone().symmetric_eigenvalues().min();
        SasakianChecks {
            reeb_normalization: (dot(&self.eta_s, &self.xi_s) - 1.0).abs(),
            psi_reeb: (&self.psi * xi_s).amax(),
            psi_square: max_abs(&(&self.psi * &self.psi + &id - reeb_eta)),
            metric_compatibility: max_abs(&(self.psi.transpose() * &self.h_s * &self.psi - &self.h_s + eta_eta)),
            contact: max_abs(&(self.psi.transpose() * &self.h_s + &self.d_eta_s)),
            lie_psi: max_abs(&self.lie_psi),
            h_s_min_eigenvalue: min_ev,
            d_eta_norm: max_abs(&self.d_eta_s),
            alternative_scaling_defect: (dot(&self.eta_s, &alt) - 1.0).abs(),
        }
    }
}
